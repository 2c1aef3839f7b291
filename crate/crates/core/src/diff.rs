//! XOR differentials of addition modulo `2^n`: the validity condition, the
//! weight `w = -log2(xdp+)`, and a brute-force oracle for small words.

use serde::{Deserialize, Serialize};

use crate::dyadic::dp_from_hw;
use crate::error::{Error, Result};
use crate::exec::{self, Exec};
use crate::simon::{check_word, rotl_unchecked, word_mask};

/// Largest word size the brute-force oracle accepts (cost `2^(2n)`).
pub const ORACLE_MAX_BITS: u32 = 10;

/// How the one-place left shift in the validity condition is read.
///
/// Only [`ShiftMode::Logical`] agrees with the exhaustive oracle; the
/// circular reading is kept so the test suite can show that it does not.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ShiftMode {
    #[default]
    Logical,
    Circular,
}

#[inline]
fn shl1(x: u64, n: u32, mode: ShiftMode) -> u64 {
    match mode {
        ShiftMode::Logical => (x << 1) & word_mask(n),
        ShiftMode::Circular if n == 1 => x,
        ShiftMode::Circular => rotl_unchecked(x, 1, n),
    }
}

/// Bit `i` is set iff `p[i] == q[i] == r[i]`.
#[inline]
pub fn eq_mask(p: u64, q: u64, r: u64, n: u32) -> u64 {
    (!p ^ q) & (!p ^ r) & word_mask(n)
}

#[inline]
pub(crate) fn is_valid_unchecked(a: u64, b: u64, c: u64, n: u32, mode: ShiftMode) -> bool {
    let eq = eq_mask(shl1(a, n, mode), shl1(b, n, mode), shl1(c, n, mode), n);
    eq & (a ^ b ^ c ^ shl1(b, n, mode)) == 0
}

#[inline]
pub(crate) fn weight_unchecked(a: u64, b: u64, c: u64, n: u32) -> u32 {
    // every disagreeing bit except the most significant one
    (!eq_mask(a, b, c, n) & (word_mask(n) >> 1)).count_ones()
}

fn check_triple(a: u64, b: u64, c: u64, n: u32) -> Result<()> {
    check_word(a, n)?;
    check_word(b, n)?;
    check_word(c, n)
}

pub fn is_valid_differential(a: u64, b: u64, c: u64, n: u32) -> Result<bool> {
    is_valid_differential_with(a, b, c, n, ShiftMode::Logical)
}

pub fn is_valid_differential_with(
    a: u64,
    b: u64,
    c: u64,
    n: u32,
    mode: ShiftMode,
) -> Result<bool> {
    check_triple(a, b, c, n)?;
    Ok(is_valid_unchecked(a, b, c, n, mode))
}

/// Weight of a valid differential; its probability is exactly `2^-weight`.
pub fn differential_weight(a: u64, b: u64, c: u64, n: u32) -> Result<u32> {
    if !is_valid_differential(a, b, c, n)? {
        return Err(Error::InvalidDifferential { a, b, c, n });
    }
    Ok(weight_unchecked(a, b, c, n))
}

pub fn differential_probability(a: u64, b: u64, c: u64, n: u32) -> Result<f64> {
    differential_weight(a, b, c, n).map(dp_from_hw)
}

/// Number of pairs `(x, y)` with `((x^a) + (y^b)) ^ (x + y) == c (mod 2^n)`.
///
/// Computed by exhaustive enumeration, independently of the closed-form
/// condition above.
pub fn brute_force_count(a: u64, b: u64, c: u64, n: u32, exec: Exec) -> Result<u64> {
    if n > ORACLE_MAX_BITS {
        return Err(Error::OracleTooLarge(n));
    }
    check_triple(a, b, c, n)?;
    let mask = word_mask(n);
    let size = 1u64 << n;
    Ok(exec::sum_range(exec, size, |x| {
        (0..size)
            .filter(|&y| ((x ^ a).wrapping_add(y ^ b) ^ x.wrapping_add(y)) & mask == c)
            .count() as u64
    }))
}

/// `brute_force_count / 2^(2n)`; zero for invalid differentials.
pub fn brute_force_dp(a: u64, b: u64, c: u64, n: u32) -> Result<f64> {
    let count = brute_force_count(a, b, c, n, Exec::Parallel)?;
    Ok(count as f64 / ((2 * n) as f64).exp2())
}

/// A valid XOR differential `(a, b -> c)` with its weight.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Differential {
    pub a: u64,
    pub b: u64,
    pub c: u64,
    /// Hamming weight `w`; the probability is `2^-hw`.
    pub hw: u32,
}

impl Differential {
    pub fn new(a: u64, b: u64, c: u64, n: u32) -> Result<Self> {
        let hw = differential_weight(a, b, c, n)?;
        Ok(Differential { a, b, c, hw })
    }

    pub fn dp(&self) -> f64 {
        dp_from_hw(self.hw)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eq_mask_examples() {
        assert_eq!(eq_mask(0, 0, 0, 4), 0b1111);
        assert_eq!(eq_mask(1, 0, 0, 4), 0b1110);
        assert_eq!(eq_mask(0xf, 0xf, 0xf, 4), 0b1111);
    }

    #[test]
    fn eq_mask_per_bit() {
        for p in 0..16u64 {
            for q in 0..16u64 {
                for r in 0..16u64 {
                    let m = eq_mask(p, q, r, 4);
                    for i in 0..4 {
                        let bits = [(p >> i) & 1, (q >> i) & 1, (r >> i) & 1];
                        let agree = bits[0] == bits[1] && bits[1] == bits[2];
                        assert_eq!((m >> i) & 1 == 1, agree);
                    }
                }
            }
        }
    }

    #[test]
    fn validity_examples() {
        assert!(is_valid_differential(0, 0, 0, 4).unwrap());
        assert!(!is_valid_differential(1, 0, 0, 4).unwrap());
        assert!(is_valid_differential(1, 1, 0, 4).unwrap());
        assert!(is_valid_differential(0x10, 0, 0, 4).is_err());
    }

    #[test]
    fn weight_examples() {
        assert_eq!(differential_weight(0, 0, 0, 4).unwrap(), 0);
        assert_eq!(differential_weight(1, 1, 0, 4).unwrap(), 1);
        assert_eq!(differential_probability(1, 1, 0, 4).unwrap(), 0.5);
        assert_eq!(differential_probability(0, 0, 0, 4).unwrap(), 1.0);
        assert!(matches!(
            differential_weight(1, 0, 0, 4),
            Err(Error::InvalidDifferential { .. })
        ));
        // MSB differences are free
        assert_eq!(differential_weight(8, 8, 0, 4).unwrap(), 0);
    }

    #[test]
    fn oracle_examples() {
        for n in 1..=6 {
            assert_eq!(brute_force_dp(0, 0, 0, n).unwrap(), 1.0);
        }
        assert_eq!(brute_force_count(1, 0, 0, 4, Exec::Sequential).unwrap(), 0);
        assert_eq!(brute_force_count(1, 1, 0, 4, Exec::Sequential).unwrap(), 128);
        assert_eq!(brute_force_dp(1, 1, 0, 4).unwrap(), 0.5);
        let hw = differential_weight(3, 3, 0, 4).unwrap();
        assert_eq!(dp_from_hw(hw), brute_force_dp(3, 3, 0, 4).unwrap());
        assert!(matches!(
            brute_force_dp(0, 0, 0, 11),
            Err(Error::OracleTooLarge(11))
        ));
    }

    #[test]
    fn parallel_and_sequential_oracle_agree() {
        for (a, b, c) in [(1, 1, 0), (5, 3, 6), (0x7f, 0x01, 0x80)] {
            assert_eq!(
                brute_force_count(a, b, c, 8, Exec::Sequential).unwrap(),
                brute_force_count(a, b, c, 8, Exec::Parallel).unwrap()
            );
        }
    }

    // The shift in the validity condition is ambiguous in its usual notation;
    // the exhaustive oracle settles it in favour of a non-circular shift.
    #[test]
    fn shift_mode_adjudicated_by_oracle() {
        let mut logical_mismatches = 0;
        let mut circular_mismatches = 0;
        for a in 0..16 {
            for b in 0..16 {
                for c in 0..16 {
                    let truth = brute_force_count(a, b, c, 4, Exec::Sequential).unwrap() > 0;
                    if is_valid_differential_with(a, b, c, 4, ShiftMode::Logical).unwrap() != truth {
                        logical_mismatches += 1;
                    }
                    if is_valid_differential_with(a, b, c, 4, ShiftMode::Circular).unwrap() != truth {
                        circular_mismatches += 1;
                    }
                }
            }
        }
        assert_eq!(logical_mismatches, 0);
        assert!(circular_mismatches > 0);
        assert_eq!(ShiftMode::default(), ShiftMode::Logical);
    }

    #[test]
    fn weight_bounds_and_symmetry_n4() {
        for a in 0..16 {
            for b in 0..16 {
                for c in 0..16 {
                    if let Ok(w) = differential_weight(a, b, c, 4) {
                        assert!(w <= 3);
                        assert_eq!(differential_weight(b, a, c, 4).unwrap(), w);
                    } else {
                        assert!(!is_valid_differential(b, a, c, 4).unwrap());
                    }
                }
            }
        }
    }
}
