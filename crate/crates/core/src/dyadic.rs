//! Exact dyadic probabilities.
//!
//! Differential probabilities here are always `2^-w` for an integer weight
//! `w <= 63`, so sums of them along a path are kept as fixed-point integers
//! scaled by `2^64` and compared exactly.

use std::fmt;

const SCALE_BITS: u32 = 64;

/// `2^-hw` as an `f64`. Exact for every `hw < 1075`.
#[inline]
pub fn dp_from_hw(hw: u32) -> f64 {
    (-(hw as f64)).exp2()
}

/// Largest weight `w` with `2^-w >= threshold`, for `0 < threshold <= 1`.
pub fn max_weight_for_threshold(threshold: f64) -> u32 {
    let mut w = 0;
    // powers of two are exact, so this comparison is exact too
    while w < 64 && dp_from_hw(w + 1) >= threshold {
        w += 1;
    }
    w
}

/// Exact decimal expansion of `2^-hw`: `1.0`, `0.5`, `0.25`, `0.125`, ...
pub fn dp_decimal(hw: u32) -> String {
    if hw == 0 {
        return "1.0".to_string();
    }
    // 2^-hw = 5^hw / 10^hw; build 5^hw in base-10 digits (least significant first)
    let mut digits = vec![1u8];
    for _ in 0..hw {
        let mut carry = 0u8;
        for d in digits.iter_mut() {
            let v = *d * 5 + carry;
            *d = v % 10;
            carry = v / 10;
        }
        if carry > 0 {
            digits.push(carry);
        }
    }
    let mut s = String::with_capacity(hw as usize + 2);
    s.push_str("0.");
    for _ in digits.len()..hw as usize {
        s.push('0');
    }
    s.extend(digits.iter().rev().map(|d| char::from(b'0' + d)));
    s
}

/// Inverse of [`dp_decimal`]; also accepts any decimal that parses to an
/// exact power of two in `(0, 1]`.
pub fn hw_from_dp_str(s: &str) -> Option<u32> {
    let s = s.trim();
    if let Some(hw) = (0..64).find(|&w| dp_decimal(w) == s) {
        return Some(hw);
    }
    let v: f64 = s.parse().ok()?;
    (0..64).find(|&w| dp_from_hw(w) == v)
}

/// A sum of dyadic probabilities, held exactly.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DyadicSum(u128);

impl DyadicSum {
    pub const ZERO: DyadicSum = DyadicSum(0);

    pub fn from_hw(hw: u32) -> Self {
        debug_assert!(hw <= SCALE_BITS);
        DyadicSum(1u128 << (SCALE_BITS - hw))
    }

    pub fn add_hw(self, hw: u32) -> Self {
        DyadicSum(self.0 + DyadicSum::from_hw(hw).0)
    }

    pub fn to_f64(self) -> f64 {
        self.0 as f64 / (SCALE_BITS as f64).exp2()
    }

    pub fn raw(self) -> u128 {
        self.0
    }
}

impl fmt::Display for DyadicSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_f64())
    }
}
