//! Partial difference distribution tables.
//!
//! A PDDT holds every XOR differential of `n`-bit modular addition whose
//! probability is at least a threshold. Construction assigns the bits of
//! `a`, `b` and `c` from the least significant end and abandons a branch as
//! soon as the probability of the partial differential falls below the
//! threshold; partial probabilities never increase as bits are added, so
//! nothing above the threshold is lost.

use std::collections::BTreeMap;
use std::io::{BufRead, Read, Write};
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::diff::{self, Differential, ShiftMode};
use crate::dyadic::{dp_decimal, dp_from_hw, hw_from_dp_str, max_weight_for_threshold};
use crate::error::{Error, Result};
use crate::exec::{self, Exec};
use crate::simon::word_mask;

pub const DEFAULT_MAX_ELEMENTS: usize = 1 << 28;

/// Number of low bits enumerated up front to split the search across workers.
const SPLIT_BITS: u32 = 3;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PddtConfig {
    pub word_size: u32,
    pub p_threshold: f64,
    /// `None` disables the size guard.
    pub max_elements: Option<usize>,
}

impl PddtConfig {
    pub fn new(word_size: u32, p_threshold: f64) -> Result<Self> {
        let cfg = PddtConfig {
            word_size,
            p_threshold,
            max_elements: Some(DEFAULT_MAX_ELEMENTS),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_max_elements(mut self, max: Option<usize>) -> Self {
        self.max_elements = max;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(1..=64).contains(&self.word_size) {
            return Err(Error::param(format!(
                "word size {} outside 1..=64",
                self.word_size
            )));
        }
        if !(self.p_threshold > 0.0 && self.p_threshold <= 1.0) {
            return Err(Error::param(format!(
                "threshold {} outside (0, 1]",
                self.p_threshold
            )));
        }
        Ok(())
    }

    /// Largest admissible weight: `2^-w >= p_threshold`.
    pub fn max_weight(&self) -> u32 {
        max_weight_for_threshold(self.p_threshold)
    }

    pub fn hex_digits(&self) -> usize {
        hex_digits(self.word_size)
    }
}

pub(crate) fn hex_digits(word_size: u32) -> usize {
    word_size.div_ceil(4) as usize
}

/// Sorted, duplicate-free set of differentials at or above a threshold.
#[derive(Clone, Debug, PartialEq)]
pub struct Pddt {
    entries: Vec<Differential>,
    config: PddtConfig,
}

impl Pddt {
    /// Validates and sorts `entries`. Every entry must be a valid
    /// differential with probability at least the configured threshold.
    pub fn from_entries(config: PddtConfig, mut entries: Vec<Differential>) -> Result<Self> {
        config.validate()?;
        let n = config.word_size;
        let max_w = config.max_weight();
        for d in &entries {
            let hw = diff::differential_weight(d.a, d.b, d.c, n)?;
            if hw != d.hw {
                return Err(Error::param(format!(
                    "entry ({:#x}, {:#x} -> {:#x}) carries weight {} but has weight {hw}",
                    d.a, d.b, d.c, d.hw
                )));
            }
            if hw > max_w {
                return Err(Error::param(format!(
                    "entry ({:#x}, {:#x} -> {:#x}) has probability {} below threshold {}",
                    d.a,
                    d.b,
                    d.c,
                    d.dp(),
                    config.p_threshold
                )));
            }
        }
        entries.sort_unstable();
        if let Some(w) = entries.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::param(format!(
                "duplicate entry ({:#x}, {:#x} -> {:#x})",
                w[0].a, w[0].b, w[0].c
            )));
        }
        Ok(Pddt { entries, config })
    }

    pub fn entries(&self) -> &[Differential] {
        &self.entries
    }

    pub fn config(&self) -> &PddtConfig {
        &self.config
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn contains(&self, a: u64, b: u64, c: u64) -> bool {
        self.entries
            .binary_search_by(|d| (d.a, d.b, d.c).cmp(&(a, b, c)))
            .is_ok()
    }
}

/// Builds the table using the default (parallel when available) strategy.
pub fn build_pddt(config: &PddtConfig) -> Result<Pddt> {
    build_pddt_with(config, Exec::Parallel)
}

pub fn build_pddt_with(config: &PddtConfig, exec: Exec) -> Result<Pddt> {
    config.validate()?;
    let n = config.word_size;
    let max_w = config.max_weight();
    let limit = config.max_elements.unwrap_or(usize::MAX);

    let split = SPLIT_BITS.min(n);
    let mut frontier = Vec::new();
    extend(max_w, Prefix::EMPTY, split, &mut |p| {
        frontier.push(p);
        true
    });

    let count = AtomicUsize::new(0);
    let abort = AtomicBool::new(false);
    let fragments = exec::map_slice(exec, &frontier, |&start| {
        let mut out = Vec::new();
        extend(max_w, start, n, &mut |p| {
            if abort.load(Ordering::Relaxed) {
                return false;
            }
            if count.fetch_add(1, Ordering::Relaxed) >= limit {
                abort.store(true, Ordering::Relaxed);
                return false;
            }
            out.push(p.into_differential());
            true
        });
        out
    });
    if abort.load(Ordering::Relaxed) {
        return Err(Error::TooManyElements {
            count: count.load(Ordering::Relaxed).min(limit),
            limit,
        });
    }

    let mut entries: Vec<Differential> = fragments.into_iter().flatten().collect();
    exec::sort_unstable(exec, &mut entries);
    Ok(Pddt {
        entries,
        config: *config,
    })
}

/// Number of entries [`build_pddt`] would produce, without storing them.
pub fn count_pddt(config: &PddtConfig, exec: Exec) -> Result<u64> {
    config.validate()?;
    let n = config.word_size;
    let max_w = config.max_weight();
    let split = SPLIT_BITS.min(n);
    let mut frontier = Vec::new();
    extend(max_w, Prefix::EMPTY, split, &mut |p| {
        frontier.push(p);
        true
    });
    let counts = exec::map_slice(exec, &frontier, |&start| {
        let mut count = 0u64;
        extend(max_w, start, n, &mut |_| {
            count += 1;
            true
        });
        count
    });
    Ok(counts.into_iter().sum())
}

/// Low `k` bits of a differential under construction, with the weight of
/// the `k`-bit differential they form.
#[derive(Clone, Copy, Debug)]
struct Prefix {
    a: u64,
    b: u64,
    c: u64,
    k: u32,
    hw: u32,
}

impl Prefix {
    const EMPTY: Prefix = Prefix {
        a: 0,
        b: 0,
        c: 0,
        k: 0,
        hw: 0,
    };

    fn into_differential(self) -> Differential {
        Differential {
            a: self.a,
            b: self.b,
            c: self.c,
            hw: self.hw,
        }
    }
}

/// Depth-first extension of `p` up to `target` bits, calling `emit` for each
/// surviving prefix of length `target`. Children are visited in ascending
/// order of (a-bit, b-bit, c-bit). Returns false once `emit` asks to stop.
fn extend(max_w: u32, p: Prefix, target: u32, emit: &mut impl FnMut(Prefix) -> bool) -> bool {
    if p.k == target {
        return emit(p);
    }
    let k = p.k;
    let (prev_equal, prev_b) = if k == 0 {
        // the shifted-in bit below position 0 is zero in all three words
        (true, 0)
    } else {
        let (pa, pb, pc) = ((p.a >> (k - 1)) & 1, (p.b >> (k - 1)) & 1, (p.c >> (k - 1)) & 1);
        (pa == pb && pb == pc, pb)
    };
    // bit k-1 stops being the top bit, so its disagreement now counts
    let hw = p.hw + u32::from(k > 0 && !prev_equal);
    if hw > max_w {
        return true;
    }
    for abit in 0..2u64 {
        for bbit in 0..2u64 {
            for cbit in 0..2u64 {
                if prev_equal && (abit ^ bbit ^ cbit ^ prev_b) != 0 {
                    continue;
                }
                let child = Prefix {
                    a: p.a | (abit << k),
                    b: p.b | (bbit << k),
                    c: p.c | (cbit << k),
                    k: k + 1,
                    hw,
                };
                if !extend(max_w, child, target, emit) {
                    return false;
                }
            }
        }
    }
    true
}

/// Probability of the differential formed by the low `k` bits of `a`, `b`,
/// `c` (which must already be `< 2^k`). `k = 0` gives 1; an impossible
/// prefix gives 0.
pub fn partial_dp(a: u64, b: u64, c: u64, k: u32) -> Result<f64> {
    if k == 0 {
        if a | b | c != 0 {
            return Err(Error::param("a 0-bit prefix must be empty"));
        }
        return Ok(1.0);
    }
    if !diff::is_valid_differential_with(a, b, c, k, ShiftMode::Logical)? {
        return Ok(0.0);
    }
    Ok(dp_from_hw(diff::weight_unchecked(a, b, c, k)))
}

/// `[p_0, p_1, ..., p_n]` for the prefixes of one `n`-bit triple.
pub fn partial_dp_chain(a: u64, b: u64, c: u64, n: u32) -> Result<Vec<f64>> {
    (0..=n)
        .map(|k| {
            let m = if k == 0 { 0 } else { word_mask(k) };
            partial_dp(a & m, b & m, c & m, k)
        })
        .collect()
}

/// Seeded quota sample parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SampleSpec {
    pub fraction: f64,
    /// Keep at least one entry for every distinct output difference.
    pub quota: bool,
    pub seed: u64,
}

impl Default for SampleSpec {
    fn default() -> Self {
        SampleSpec {
            fraction: 0.03,
            quota: true,
            seed: 0,
        }
    }
}

/// How many entries a sample takes from each output class.
#[derive(Clone, Debug, PartialEq)]
pub struct SamplePlan {
    /// `(c, class size, taken)` in ascending `c`.
    pub classes: Vec<(u64, usize, usize)>,
    /// `round(fraction * len)`, at least 1.
    pub nominal: usize,
    /// The per-output quota pushed the sample above `nominal`.
    pub quota_forced: bool,
}

impl SamplePlan {
    pub fn total(&self) -> usize {
        self.classes.iter().map(|c| c.2).sum()
    }
}

pub fn plan_sample(pddt: &Pddt, spec: &SampleSpec) -> Result<SamplePlan> {
    if !(spec.fraction > 0.0 && spec.fraction <= 1.0) {
        return Err(Error::param(format!(
            "sample fraction {} outside (0, 1]",
            spec.fraction
        )));
    }
    if pddt.is_empty() {
        return Err(Error::param("cannot sample an empty table"));
    }
    let total = pddt.len();
    let nominal = ((spec.fraction * total as f64).round() as usize).clamp(1, total);

    if !spec.quota {
        return Ok(SamplePlan {
            classes: vec![(0, total, nominal)],
            nominal,
            quota_forced: false,
        });
    }

    let mut sizes: BTreeMap<u64, usize> = BTreeMap::new();
    for d in pddt.entries() {
        *sizes.entry(d.c).or_default() += 1;
    }
    let classes = sizes.len();
    if nominal <= classes {
        return Ok(SamplePlan {
            classes: sizes.into_iter().map(|(c, s)| (c, s, 1)).collect(),
            nominal,
            quota_forced: nominal < classes,
        });
    }

    // one per class, the remainder split in proportion to (size - 1) by
    // largest remainder; ties go to the smaller output difference
    let spare = (nominal - classes) as u128;
    let pool = (total - classes) as u128;
    let mut alloc: Vec<(u64, usize, usize, u128)> = sizes
        .into_iter()
        .map(|(c, s)| {
            let share = spare * (s as u128 - 1);
            (c, s, 1 + (share / pool) as usize, share % pool)
        })
        .collect();
    let given: usize = alloc.iter().map(|x| x.2).sum();
    let mut order: Vec<usize> = (0..alloc.len()).collect();
    order.sort_by(|&i, &j| alloc[j].3.cmp(&alloc[i].3).then(alloc[i].0.cmp(&alloc[j].0)));
    for &i in order.iter().take(nominal - given) {
        alloc[i].2 += 1;
    }
    Ok(SamplePlan {
        classes: alloc.into_iter().map(|(c, s, t, _)| (c, s, t)).collect(),
        nominal,
        quota_forced: false,
    })
}

/// Seeded quota sample of a table. The result is a valid [`Pddt`] with the
/// source configuration.
pub fn sample_pddt(pddt: &Pddt, spec: &SampleSpec) -> Result<Pddt> {
    let plan = plan_sample(pddt, spec)?;
    if plan.quota_forced {
        log::warn!(
            "sample of {} entries requested but {} distinct outputs must be covered; taking {}",
            plan.nominal,
            plan.classes.len(),
            plan.total()
        );
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut picked = Vec::with_capacity(plan.total());

    if spec.quota {
        let mut by_output: BTreeMap<u64, Vec<Differential>> = BTreeMap::new();
        for d in pddt.entries() {
            by_output.entry(d.c).or_default().push(*d);
        }
        for (c, size, take) in &plan.classes {
            let members = &by_output[c];
            debug_assert_eq!(members.len(), *size);
            picked.extend(index::sample(&mut rng, *size, *take).iter().map(|i| members[i]));
        }
    } else {
        let (_, size, take) = plan.classes[0];
        picked.extend(
            index::sample(&mut rng, size, take)
                .iter()
                .map(|i| pddt.entries()[i]),
        );
    }
    picked.sort_unstable();
    Ok(Pddt {
        entries: picked,
        config: pddt.config,
    })
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct PddtStats {
    pub entries: usize,
    pub distinct_outputs: usize,
    /// Entry count per weight; the bucket probability is `2^-weight`.
    pub by_weight: BTreeMap<u32, usize>,
    pub min_dp: Option<f64>,
    pub max_dp: Option<f64>,
}

pub fn pddt_stats(pddt: &Pddt) -> PddtStats {
    let mut stats = PddtStats {
        entries: pddt.len(),
        ..Default::default()
    };
    let mut outputs = std::collections::BTreeSet::new();
    for d in pddt.entries() {
        *stats.by_weight.entry(d.hw).or_default() += 1;
        outputs.insert(d.c);
    }
    stats.distinct_outputs = outputs.len();
    stats.max_dp = stats.by_weight.keys().next().map(|&w| dp_from_hw(w));
    stats.min_dp = stats.by_weight.keys().next_back().map(|&w| dp_from_hw(w));
    stats
}

pub const CSV_HEADER: [&str; 6] = ["id", "a", "b", "c", "dp", "hw"];

pub(crate) fn hex_word(x: u64, digits: usize) -> String {
    format!("0x{x:0digits$x}")
}

pub(crate) fn parse_word(s: &str) -> Option<u64> {
    let s = s.trim();
    match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(h) => u64::from_str_radix(h, 16).ok(),
        None => s.parse().ok(),
    }
}

/// Writes the canonical `id,a,b,c,dp,hw` CSV.
pub fn write_pddt_csv<W: Write>(pddt: &Pddt, out: W) -> Result<()> {
    let digits = pddt.config.hex_digits();
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for (id, d) in pddt.entries().iter().enumerate() {
        w.write_record([
            id.to_string(),
            hex_word(d.a, digits),
            hex_word(d.b, digits),
            hex_word(d.c, digits),
            dp_decimal(d.hw),
            d.hw.to_string(),
        ])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn pddt_to_csv_bytes(pddt: &Pddt) -> Vec<u8> {
    let mut buf = Vec::new();
    write_pddt_csv(pddt, &mut buf).expect("writing to a Vec cannot fail");
    buf
}

/// Reads a table written by [`write_pddt_csv`].
///
/// The word size defaults to four bits per hex digit of the `a` column; the
/// threshold defaults to the smallest probability present (1 if empty).
pub fn read_pddt_csv<R: Read>(
    input: R,
    word_size: Option<u32>,
    threshold: Option<f64>,
) -> Result<Pddt> {
    let mut rdr = csv::Reader::from_reader(input);
    let header = rdr.headers()?.clone();
    if header.iter().ne(CSV_HEADER) {
        return Err(Error::parse(
            1,
            format!("expected header {}", CSV_HEADER.join(",")),
        ));
    }
    let mut entries = Vec::new();
    let mut inferred_n = None;
    for (i, rec) in rdr.records().enumerate() {
        let line = i + 2;
        let rec = rec?;
        let field = |j: usize| rec.get(j).unwrap_or("");
        let word = |j: usize| {
            parse_word(field(j)).ok_or_else(|| Error::parse(line, format!("bad word {:?}", field(j))))
        };
        if inferred_n.is_none() {
            let digits = field(1).trim().trim_start_matches("0x").len() as u32;
            inferred_n = Some((4 * digits).clamp(1, 64));
        }
        let (a, b, c) = (word(1)?, word(2)?, word(3)?);
        let hw: u32 = field(5)
            .trim()
            .parse()
            .map_err(|_| Error::parse(line, format!("bad hw {:?}", field(5))))?;
        if hw_from_dp_str(field(4)) != Some(hw) {
            return Err(Error::parse(
                line,
                format!("dp {:?} is not 2^-{hw}", field(4)),
            ));
        }
        entries.push(Differential { a, b, c, hw });
    }
    let n = word_size.or(inferred_n).unwrap_or(64);
    let threshold = threshold.unwrap_or_else(|| {
        entries
            .iter()
            .map(|d| d.hw)
            .max()
            .map_or(1.0, dp_from_hw)
    });
    let config = PddtConfig::new(n, threshold)?;
    Pddt::from_entries(config, entries)
}

/// Reads whitespace-separated `a b c [p]` lines (hex with `0x` or decimal).
/// Blank lines and lines starting with `#` are skipped. When a probability
/// column is present it must agree with the computed weight.
pub fn read_triples_text<R: BufRead>(input: R, word_size: u32) -> Result<Vec<Differential>> {
    let mut out = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line_no = i + 1;
        let line = line.map_err(|e| Error::io("<text input>", e))?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = line.split_whitespace().collect();
        if !(3..=4).contains(&cols.len()) {
            return Err(Error::parse(line_no, "expected `a b c [p]`"));
        }
        let word = |s: &str| parse_word(s).ok_or_else(|| Error::parse(line_no, format!("bad word {s:?}")));
        let (a, b, c) = (word(cols[0])?, word(cols[1])?, word(cols[2])?);
        let d = Differential::new(a, b, c, word_size).map_err(|e| Error::parse(line_no, e.to_string()))?;
        if let Some(p) = cols.get(3) {
            let p: f64 = p
                .parse()
                .map_err(|_| Error::parse(line_no, format!("bad probability {p:?}")))?;
            if (p - d.dp()).abs() > 1e-9 * d.dp() {
                return Err(Error::parse(
                    line_no,
                    format!("probability {p} disagrees with computed {}", d.dp()),
                ));
            }
        }
        out.push(d);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exhaustive(n: u32, threshold: f64) -> Vec<(u64, u64, u64)> {
        let size = 1u64 << n;
        let mut out = Vec::new();
        for a in 0..size {
            for b in 0..size {
                for c in 0..size {
                    let count = diff::brute_force_count(a, b, c, n, Exec::Sequential).unwrap();
                    if count as f64 / ((2 * n) as f64).exp2() >= threshold {
                        out.push((a, b, c));
                    }
                }
            }
        }
        out
    }

    fn triples(p: &Pddt) -> Vec<(u64, u64, u64)> {
        p.entries().iter().map(|d| (d.a, d.b, d.c)).collect()
    }

    #[test]
    fn threshold_one_keeps_certain_differentials() {
        let p = build_pddt(&PddtConfig::new(4, 1.0).unwrap()).unwrap();
        assert!(p.entries().iter().all(|d| d.hw == 0));
        assert!(p.contains(0, 0, 0));
        assert_eq!(triples(&p), exhaustive(4, 1.0));
    }

    #[test]
    fn small_table_matches_oracle() {
        let p = build_pddt(&PddtConfig::new(4, 0.1).unwrap()).unwrap();
        assert_eq!(triples(&p), exhaustive(4, 0.1));
        let p3 = build_pddt(&PddtConfig::new(3, 0.25).unwrap()).unwrap();
        assert_eq!(triples(&p3), exhaustive(3, 0.25));
    }

    #[test]
    fn guard_aborts_with_count() {
        let cfg = PddtConfig::new(8, 0.1).unwrap().with_max_elements(Some(100));
        match build_pddt_with(&cfg, Exec::Sequential) {
            Err(Error::TooManyElements { count, limit }) => {
                assert_eq!(limit, 100);
                assert_eq!(count, 100);
            }
            other => panic!("expected guard error, got {other:?}"),
        }
    }

    #[test]
    fn count_matches_build() {
        let cfg = PddtConfig::new(8, 0.1).unwrap();
        let built = build_pddt(&cfg).unwrap().len() as u64;
        assert_eq!(count_pddt(&cfg, Exec::Sequential).unwrap(), built);
        assert_eq!(count_pddt(&cfg, Exec::Parallel).unwrap(), built);
    }

    #[test]
    fn bad_configs() {
        assert!(PddtConfig::new(4, 0.0).is_err());
        assert!(PddtConfig::new(4, 1.5).is_err());
        assert!(PddtConfig::new(0, 0.5).is_err());
        assert!(PddtConfig::new(65, 0.5).is_err());
    }

    #[test]
    fn partial_dp_examples() {
        assert_eq!(partial_dp(0, 0, 0, 0).unwrap(), 1.0);
        assert_eq!(partial_dp(1, 1, 0, 4).unwrap(), diff::differential_probability(1, 1, 0, 4).unwrap());
        let chain = partial_dp_chain(1, 1, 0, 4).unwrap();
        assert_eq!(chain, vec![1.0, 1.0, 0.5, 0.5, 0.5]);
        assert!(partial_dp(2, 0, 0, 1).is_err());
    }

    #[test]
    fn sample_identity_and_quota() {
        let p = build_pddt(&PddtConfig::new(4, 0.1).unwrap()).unwrap();
        let full = sample_pddt(&p, &SampleSpec { fraction: 1.0, quota: true, seed: 9 }).unwrap();
        assert_eq!(full, p);

        let spec = SampleSpec { fraction: 0.03, quota: true, seed: 42 };
        let s1 = sample_pddt(&p, &spec).unwrap();
        let s2 = sample_pddt(&p, &spec).unwrap();
        assert_eq!(pddt_to_csv_bytes(&s1), pddt_to_csv_bytes(&s2));

        let src: std::collections::BTreeSet<u64> = p.entries().iter().map(|d| d.c).collect();
        let got: std::collections::BTreeSet<u64> = s1.entries().iter().map(|d| d.c).collect();
        assert_eq!(src, got);
        assert!(s1.len() >= src.len());
        assert!(s1.entries().iter().all(|d| p.contains(d.a, d.b, d.c)));
    }

    #[test]
    fn sample_plan_proportional() {
        let p = build_pddt(&PddtConfig::new(8, 0.25).unwrap()).unwrap();
        let plan = plan_sample(&p, &SampleSpec { fraction: 0.5, quota: true, seed: 0 }).unwrap();
        assert!(!plan.quota_forced);
        assert_eq!(plan.total(), plan.nominal);
        assert!(plan.classes.iter().all(|&(_, s, t)| t >= 1 && t <= s));

        let forced = plan_sample(&p, &SampleSpec { fraction: 0.001, quota: true, seed: 0 }).unwrap();
        assert!(forced.quota_forced);
        assert_eq!(forced.total(), forced.classes.len());

        let plain = sample_pddt(&p, &SampleSpec { fraction: 0.1, quota: false, seed: 3 }).unwrap();
        assert_eq!(plain.len(), (0.1 * p.len() as f64).round() as usize);
    }

    #[test]
    fn sample_rejects_bad_input() {
        let p = build_pddt(&PddtConfig::new(4, 0.5).unwrap()).unwrap();
        assert!(sample_pddt(&p, &SampleSpec { fraction: 0.0, ..Default::default() }).is_err());
        let empty = Pddt::from_entries(*p.config(), vec![]).unwrap();
        assert!(sample_pddt(&empty, &SampleSpec::default()).is_err());
    }

    #[test]
    fn stats_examples() {
        let p = build_pddt(&PddtConfig::new(4, 0.1).unwrap()).unwrap();
        let s = pddt_stats(&p);
        assert_eq!(s.min_dp, Some(0.125));
        assert_eq!(s.max_dp, Some(1.0));
        assert_eq!(s.by_weight.values().sum::<usize>(), s.entries);

        let empty = Pddt::from_entries(*p.config(), vec![]).unwrap();
        let e = pddt_stats(&empty);
        assert_eq!((e.entries, e.distinct_outputs, e.min_dp, e.max_dp), (0, 0, None, None));
    }

    #[test]
    fn csv_golden() {
        let cfg = PddtConfig::new(4, 0.5).unwrap();
        let p = Pddt::from_entries(
            cfg,
            vec![
                Differential::new(1, 1, 0, 4).unwrap(),
                Differential::new(0, 0, 0, 4).unwrap(),
                Differential::new(8, 0, 8, 4).unwrap(),
            ],
        )
        .unwrap();
        let text = String::from_utf8(pddt_to_csv_bytes(&p)).unwrap();
        assert_eq!(
            text,
            "id,a,b,c,dp,hw\n0,0x0,0x0,0x0,1.0,0\n1,0x1,0x1,0x0,0.5,1\n2,0x8,0x0,0x8,1.0,0\n"
        );
        let back = read_pddt_csv(text.as_bytes(), None, Some(0.5)).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn csv_pads_to_word_size() {
        let cfg = PddtConfig::new(10, 1.0).unwrap();
        let p = Pddt::from_entries(cfg, vec![Differential::new(0x200, 0x200, 0, 10).unwrap()]).unwrap();
        let text = String::from_utf8(pddt_to_csv_bytes(&p)).unwrap();
        assert_eq!(text, "id,a,b,c,dp,hw\n0,0x200,0x200,0x000,1.0,0\n");
    }

    #[test]
    fn csv_rejects_inconsistent_rows() {
        let bad_hw = "id,a,b,c,dp,hw\n0,0x1,0x1,0x0,0.5,2\n";
        assert!(read_pddt_csv(bad_hw.as_bytes(), Some(4), None).is_err());
        let invalid = "id,a,b,c,dp,hw\n0,0x1,0x0,0x0,1.0,0\n";
        assert!(read_pddt_csv(invalid.as_bytes(), Some(4), None).is_err());
        let header = "x,a,b,c,dp,hw\n";
        assert!(matches!(read_pddt_csv(header.as_bytes(), Some(4), None), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn text_import() {
        let text = "# a b c p\n0x1 0x1 0x0 0.5\n\n3 3 0\n";
        let ds = read_triples_text(text.as_bytes(), 4).unwrap();
        assert_eq!(ds.len(), 2);
        assert_eq!(ds[1].hw, 2);
        assert!(read_triples_text("1 1 0 0.25\n".as_bytes(), 4).is_err());
        assert!(read_triples_text("1 0 0\n".as_bytes(), 4).is_err());
    }
}
