//! SIMON variant parameters, word rotation, the round function and a single
//! Feistel round with its inverse.
//!
//! No key schedule is provided: callers pass explicit round keys. Words of
//! every variant live in `u64` and are masked to the word size.

use crate::error::{Error, Result};

/// Word sizes of the five SIMON variants.
pub const WORD_SIZES: [u32; 5] = [16, 24, 32, 48, 64];

/// A SIMON `2n/mn` variant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CipherParams {
    word_size: u32,
    key_words: u32,
}

impl CipherParams {
    pub fn new(word_size: u32, key_words: u32) -> Result<Self> {
        let allowed: &[u32] = match word_size {
            16 => &[4],
            24 | 32 => &[3, 4],
            48 => &[2, 3],
            64 => &[2, 3, 4],
            _ => {
                return Err(Error::param(format!(
                    "word size {word_size} is not one of {WORD_SIZES:?}"
                )))
            }
        };
        if !allowed.contains(&key_words) {
            return Err(Error::param(format!(
                "n = {word_size} admits m in {allowed:?}, got {key_words}"
            )));
        }
        Ok(CipherParams {
            word_size,
            key_words,
        })
    }

    /// Every valid (n, m) combination, ordered by word size then key words.
    pub fn all_variants() -> Vec<CipherParams> {
        let mut out = Vec::new();
        for n in WORD_SIZES {
            for m in 2..=4 {
                if let Ok(p) = CipherParams::new(n, m) {
                    out.push(p);
                }
            }
        }
        out
    }

    pub fn word_size(&self) -> u32 {
        self.word_size
    }

    pub fn key_words(&self) -> u32 {
        self.key_words
    }

    pub fn block_size(&self) -> u32 {
        2 * self.word_size
    }

    pub fn key_size(&self) -> u32 {
        self.key_words * self.word_size
    }

    pub fn mask(&self) -> u64 {
        word_mask(self.word_size)
    }

    /// Conventional name, e.g. `SIMON32/64`.
    pub fn name(&self) -> String {
        format!("SIMON{}/{}", self.block_size(), self.key_size())
    }
}

/// All-ones mask for an `n`-bit word, `1 <= n <= 64`.
#[inline]
pub fn word_mask(n: u32) -> u64 {
    debug_assert!((1..=64).contains(&n));
    u64::MAX >> (64 - n)
}

pub(crate) fn check_word(x: u64, n: u32) -> Result<()> {
    if n == 0 || n > 64 {
        return Err(Error::param(format!("word size {n} outside 1..=64")));
    }
    if x & !word_mask(n) != 0 {
        return Err(Error::param(format!("word {x:#x} does not fit in {n} bits")));
    }
    Ok(())
}

/// Two-word cipher state; both halves are always `< 2^n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct WordState {
    pub left: u64,
    pub right: u64,
}

impl WordState {
    pub fn new(left: u64, right: u64, params: &CipherParams) -> Result<Self> {
        check_word(left, params.word_size)?;
        check_word(right, params.word_size)?;
        Ok(WordState { left, right })
    }
}

/// Left circular shift of an `n`-bit word by `i` places.
pub fn rotl(x: u64, i: u32, n: u32) -> Result<u64> {
    check_word(x, n)?;
    if i >= n {
        return Err(Error::param(format!("rotation {i} must be < word size {n}")));
    }
    Ok(rotl_unchecked(x, i, n))
}

#[inline]
pub(crate) fn rotl_unchecked(x: u64, i: u32, n: u32) -> u64 {
    if i == 0 {
        return x;
    }
    ((x << i) | (x >> (n - i))) & word_mask(n)
}

/// `f(x) = (x <<< 1 & x <<< 8) ^ x <<< 2`.
pub fn round_fn(x: u64, params: &CipherParams) -> u64 {
    let n = params.word_size;
    let x = x & params.mask();
    (rotl_unchecked(x, 1, n) & rotl_unchecked(x, 8, n)) ^ rotl_unchecked(x, 2, n)
}

/// One Feistel round: `(L, R) -> (R ^ f(L) ^ k, L)`.
pub fn feistel_round(state: WordState, round_key: u64, params: &CipherParams) -> WordState {
    let mask = params.mask();
    WordState {
        left: (state.right ^ round_fn(state.left, params) ^ round_key) & mask,
        right: state.left & mask,
    }
}

pub fn feistel_round_inverse(
    state: WordState,
    round_key: u64,
    params: &CipherParams,
) -> WordState {
    let mask = params.mask();
    WordState {
        left: state.right & mask,
        right: (state.left ^ round_fn(state.right, params) ^ round_key) & mask,
    }
}

/// Applies [`feistel_round`] once per key, in order.
pub fn encrypt_rounds(state: WordState, round_keys: &[u64], params: &CipherParams) -> WordState {
    round_keys
        .iter()
        .fold(state, |s, &k| feistel_round(s, k, params))
}

/// Undoes [`encrypt_rounds`] given the same key list.
pub fn decrypt_rounds(state: WordState, round_keys: &[u64], params: &CipherParams) -> WordState {
    round_keys
        .iter()
        .rev()
        .fold(state, |s, &k| feistel_round_inverse(s, k, params))
}
