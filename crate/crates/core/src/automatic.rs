//! The period-doubling word `d` and the Thue–Morse word `t`, with closed
//! forms for the number of periods of their prefixes.
//!
//! Naming keeps the two counting conventions apart: `r` counts periods
//! *including* the trivial one (`counts_with_trivial`), `v` counts only
//! nontrivial periods (`counts_nontrivial`).

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::ExactRational;
use crate::words::Word;

/// Fixed point of `1 -> 10`, `0 -> 11`: `d = 1011101010111011...`.
pub fn period_doubling_prefix(n: usize) -> Word {
    // d[2i] = 1, d[2i + 1] = 1 - d[i]
    let mut w: Vec<u8> = Vec::with_capacity(n);
    while w.len() < n {
        let i = w.len();
        w.push(if i.is_multiple_of(2) { 1 } else { 1 - w[i / 2] });
    }
    Word::new(w, 2).expect("binary")
}

/// `t_i`: parity of the number of ones in the binary expansion of `i`.
pub fn thue_morse_symbol(i: u64) -> u8 {
    (i.count_ones() & 1) as u8
}

pub fn thue_morse_prefix(n: usize) -> Word {
    Word::new((0..n as u64).map(thue_morse_symbol).collect(), 2).expect("binary")
}

/// A linear representation `(v, rho, w)` of a 2-regular sequence:
/// `f(n) = v * rho(b_1) * ... * rho(b_m) * w` over the canonical binary
/// digits `b_1 ... b_m` of `n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LinearRepresentation {
    pub row: [u64; 6],
    pub matrices: [[[u64; 6]; 6]; 2],
    pub column: [u64; 6],
}

impl LinearRepresentation {
    /// The representation of `r(n)`, the number of periods of `d[0..n]`.
    pub fn period_doubling() -> Self {
        LinearRepresentation {
            row: [1, 0, 0, 0, 0, 0],
            matrices: [
                [
                    [1, 0, 0, 0, 0, 0],
                    [0, 0, 0, 1, 0, 0],
                    [0, 0, 1, 0, 0, 0],
                    [0, 0, 0, 0, 1, 0],
                    [0, 0, 0, 1, 0, 1],
                    [0, 0, 0, 0, 0, 1],
                ],
                [
                    [0, 1, 1, 0, 0, 0],
                    [0, 0, 0, 0, 0, 0],
                    [0, 0, 1, 0, 1, 0],
                    [0, 0, 0, 0, 0, 0],
                    [0, 0, 0, 0, 0, 1],
                    [0, 0, 0, 0, 0, 1],
                ],
            ],
            column: [0, 0, 1, 0, 1, 1],
        }
    }

    pub fn evaluate(&self, n: u64) -> u64 {
        if n == 0 {
            return 0;
        }
        let mut acc = self.row;
        for bit in (0..64 - n.leading_zeros()).rev() {
            let m = &self.matrices[((n >> bit) & 1) as usize];
            let mut next = [0u64; 6];
            for (j, slot) in next.iter_mut().enumerate() {
                *slot = (0..6).map(|k| acc[k] * m[k][j]).sum();
            }
            acc = next;
        }
        acc.iter().zip(&self.column).map(|(a, b)| a * b).sum()
    }
}

/// `r(0) = 0`, `r(2n+1) = r(n) + 1`, `r(4n) = r(n) + 1` (`n >= 1`),
/// `r(4n+2) = r(n) + 1`.
pub fn r_recurrence(n: u64) -> u64 {
    match n {
        0 => 0,
        _ if n % 2 == 1 => r_recurrence(n / 2) + 1,
        _ => r_recurrence(n / 4) + 1,
    }
}

pub fn r_linear(n: u64) -> u64 {
    LinearRepresentation::period_doubling().evaluate(n)
}

/// Factorisation of the canonical binary expansion of `n >= 1` into the
/// blocks `1`, `00`, `10`, read from the right.
pub fn binary_factorization(n: u64) -> Result<Vec<&'static str>> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be >= 1".into()));
    }
    let bits: Vec<u8> = (0..64 - n.leading_zeros()).rev().map(|b| ((n >> b) & 1) as u8).collect();
    let mut end = bits.len();
    let mut blocks = Vec::new();
    while end > 0 {
        if bits[end - 1] == 1 {
            blocks.push("1");
            end -= 1;
        } else {
            assert!(end >= 2, "canonical expansions start with 1");
            blocks.push(if bits[end - 2] == 1 { "10" } else { "00" });
            end -= 2;
        }
    }
    blocks.reverse();
    Ok(blocks)
}

pub fn r_factorization(n: u64) -> Result<u64> {
    Ok(binary_factorization(n)?.len() as u64)
}

/// Smallest and largest `m` with `r(m) = count`: `2^count - 1` and
/// `floor(2^(2 count + 1) / 3)`, whose binary expansion is `(10)^count`.
pub fn d_extremes(count: u32) -> Result<(u64, u64)> {
    if count == 0 {
        return Err(Error::InvalidInput("count must be >= 1".into()));
    }
    let small = 1u64.checked_shl(count).filter(|_| count < 64).ok_or(Error::Overflow("d_extremes"))? - 1;
    let large = 1u64
        .checked_shl(2 * count + 1)
        .filter(|_| 2 * count + 1 < 64)
        .ok_or(Error::Overflow("d_extremes"))?
        / 3;
    Ok((small, large))
}

/// Least period of `d[0..n]` for `n >= 4`: with `2^s <= n < 2^(s+1)`, it is
/// `3 * 2^(s-2)` below `5 * 2^(s-2)` and `2^s` from there on.
pub fn d_least_period(n: u64) -> Result<u64> {
    if n < 4 {
        return Err(Error::InvalidInput("closed form holds for n >= 4".into()));
    }
    let s = 63 - n.leading_zeros();
    let quarter = 1u64 << (s - 2);
    Ok(if n < 5 * quarter { 3 * quarter } else { 1 << s })
}

/// `ice(d[0..n]) = 2 - 2^(1-t)` for `2^t - 1 <= n <= 2^(t+1) - 2`.
pub fn d_ice(n: u64) -> Result<ExactRational> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be >= 1".into()));
    }
    let t = 63 - (n + 1).leading_zeros();
    ExactRational::new((1u64 << t) - 1, 1u64 << (t - 1))
}

/// The seven relations for `v(n)`, the nontrivial period count of `t[0..n]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum VRule {
    /// `v(4n) = v(n) + [n != 0]`
    #[serde(rename = "4n")]
    Mul4,
    /// `v(4n+3) = v(4n+1)`
    #[serde(rename = "4n+3")]
    Mod4Is3,
    /// `v(8n+1) = v(2n+1) + t_n`
    #[serde(rename = "8n+1")]
    Mod8Is1,
    /// `v(8n+2) = v(4n+1) + t_n`
    #[serde(rename = "8n+2")]
    Mod8Is2,
    /// `v(8n+6) = v(4n+1) + 1 - t_n`
    #[serde(rename = "8n+6")]
    Mod8Is6,
    /// `v(16n+5) = v(2n+1) + 1`
    #[serde(rename = "16n+5")]
    Mod16Is5,
    /// `v(16n+13) = v(4n+1) + 1`
    #[serde(rename = "16n+13")]
    Mod16Is13,
}

impl VRule {
    pub const ALL: [VRule; 7] = [
        VRule::Mul4,
        VRule::Mod4Is3,
        VRule::Mod8Is1,
        VRule::Mod8Is2,
        VRule::Mod8Is6,
        VRule::Mod16Is5,
        VRule::Mod16Is13,
    ];

    pub fn modulus_residue(self) -> (u64, u64) {
        match self {
            VRule::Mul4 => (4, 0),
            VRule::Mod4Is3 => (4, 3),
            VRule::Mod8Is1 => (8, 1),
            VRule::Mod8Is2 => (8, 2),
            VRule::Mod8Is6 => (8, 6),
            VRule::Mod16Is5 => (16, 5),
            VRule::Mod16Is13 => (16, 13),
        }
    }

    pub fn applies(self, n: u64) -> bool {
        let (m, r) = self.modulus_residue();
        n % m == r
    }

    /// The rule for `n >= 2`; `v(0) = v(1) = 0` are base values.
    pub fn for_index(n: u64) -> Option<VRule> {
        if n < 2 {
            return None;
        }
        VRule::ALL.into_iter().find(|r| r.applies(n))
    }
}

/// Which infinite word a counter follows.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AutomaticWord {
    PeriodDoubling,
    ThueMorse,
}

/// Memoised prefix period counts: `r(n)` for `d` (with the trivial period),
/// `v(n)` for `t` (without). The memo is owned, so give each worker its own.
#[derive(Clone, Debug)]
pub struct PrefixPeriodCounter {
    word: AutomaticWord,
    memo: HashMap<u64, u64>,
}

impl PrefixPeriodCounter {
    pub fn new(word: AutomaticWord) -> Self {
        PrefixPeriodCounter {
            word,
            memo: HashMap::new(),
        }
    }

    pub fn word(&self) -> AutomaticWord {
        self.word
    }

    /// `r(n)` or `v(n)` depending on the word.
    pub fn count(&mut self, n: u64) -> u64 {
        match self.word {
            AutomaticWord::PeriodDoubling => self.counts_with_trivial(n),
            AutomaticWord::ThueMorse => self.counts_nontrivial(n),
        }
    }

    fn counts_with_trivial(&mut self, n: u64) -> u64 {
        if n == 0 {
            return 0;
        }
        if let Some(&v) = self.memo.get(&n) {
            return v;
        }
        let v = if n % 2 == 1 { self.counts_with_trivial(n / 2) } else { self.counts_with_trivial(n / 4) } + 1;
        self.memo.insert(n, v);
        v
    }

    fn counts_nontrivial(&mut self, n: u64) -> u64 {
        let Some(rule) = VRule::for_index(n) else {
            return 0;
        };
        if let Some(&v) = self.memo.get(&n) {
            return v;
        }
        let t = |k: u64| thue_morse_symbol(k) as u64;
        let v = match rule {
            VRule::Mul4 => self.counts_nontrivial(n / 4) + u64::from(n / 4 != 0),
            VRule::Mod4Is3 => self.counts_nontrivial(n - 2),
            VRule::Mod8Is1 => {
                let m = n / 8;
                self.counts_nontrivial(2 * m + 1) + t(m)
            }
            VRule::Mod8Is2 => {
                let m = n / 8;
                self.counts_nontrivial(4 * m + 1) + t(m)
            }
            VRule::Mod8Is6 => {
                let m = n / 8;
                self.counts_nontrivial(4 * m + 1) + 1 - t(m)
            }
            VRule::Mod16Is5 => self.counts_nontrivial(2 * (n / 16) + 1) + 1,
            VRule::Mod16Is13 => self.counts_nontrivial(4 * (n / 16) + 1) + 1,
        };
        self.memo.insert(n, v);
        v
    }
}

pub fn v_recurrence(n: u64) -> u64 {
    PrefixPeriodCounter::new(AutomaticWord::ThueMorse).count(n)
}

/// Length of the shortest prefix of `t` with exactly `count >= 2`
/// nontrivial periods: `2^(2 count - 1) + 2`.
pub fn tm_shortest_prefix_with_nnp(count: u32) -> Result<u64> {
    if count < 2 {
        return Err(Error::InvalidInput("closed form holds for count >= 2".into()));
    }
    let e = 2 * count - 1;
    if e >= 63 {
        return Err(Error::Overflow("tm_shortest_prefix_with_nnp"));
    }
    Ok((1u64 << e) + 2)
}

/// `3 * 2^k + 1`: prefixes of `t` with a single nontrivial period.
pub fn tm_liminf_witness(k: u32) -> Result<u64> {
    if k >= 62 {
        return Err(Error::Overflow("tm_liminf_witness"));
    }
    Ok(3 * (1u64 << k) + 1)
}

/// `ice(t[0..n])`: `5/3` from length 5 on.
pub fn tm_ice(n: u64) -> Result<ExactRational> {
    match n {
        0 => Err(Error::InvalidInput("n must be >= 1".into())),
        1..=3 => Ok(ExactRational::integer(1)),
        4 => ExactRational::new(4, 3),
        _ => ExactRational::new(5, 3),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words;

    #[test]
    fn prefixes() {
        assert_eq!(thue_morse_prefix(8).to_string(), "01101001");
        assert_eq!(period_doubling_prefix(2).to_string(), "10");
        assert_eq!(period_doubling_prefix(8).to_string(), "10111010");
        assert_eq!(thue_morse_symbol(5), 0);
        assert!(period_doubling_prefix(0).is_empty());
    }

    #[test]
    fn period_doubling_matches_valuation_rule() {
        // d_i = 1 iff the 2-adic valuation of i + 1 is even
        let d = period_doubling_prefix(1000);
        for (i, &s) in d.iter().enumerate() {
            assert_eq!(s, u8::from((i as u64 + 1).trailing_zeros().is_multiple_of(2)));
        }
    }

    #[test]
    fn r_values() {
        assert_eq!(r_recurrence(0), 0);
        assert_eq!(r_recurrence(5), 2);
        assert_eq!(r_recurrence(12), 3);
        assert_eq!(r_linear(5), 2);
        assert_eq!(r_linear(1), 1);
        assert_eq!(r_linear(0), 0);
        assert_eq!(binary_factorization(5).unwrap(), vec!["10", "1"]);
        assert_eq!(binary_factorization(12).unwrap(), vec!["1", "1", "00"]);
        assert_eq!(r_factorization(2).unwrap(), 1);
        assert!(r_factorization(0).is_err());
    }

    #[test]
    fn r_matches_prefix_periods() {
        let d = period_doubling_prefix(300);
        let mut counter = PrefixPeriodCounter::new(AutomaticWord::PeriodDoubling);
        for n in 1..=300u64 {
            let brute = words::periods(&d[..n as usize], true).unwrap().len() as u64;
            assert_eq!(counter.count(n), brute, "n = {n}");
        }
    }

    #[test]
    fn extremes() {
        assert_eq!(d_extremes(1).unwrap(), (1, 2));
        assert_eq!(d_extremes(2).unwrap(), (3, 10));
        assert_eq!(d_extremes(3).unwrap(), (7, 42));
        assert!(d_extremes(40).is_err());
    }

    #[test]
    fn d_closed_forms() {
        assert_eq!(d_least_period(4).unwrap(), 3);
        assert_eq!(d_least_period(6).unwrap(), 4);
        assert!(d_least_period(3).is_err());
        assert_eq!(d_ice(7).unwrap().to_string(), "7/4");
        assert_eq!(d_ice(1).unwrap(), ExactRational::integer(1));
        assert_eq!(d_ice(3).unwrap().to_string(), "3/2");
    }

    #[test]
    fn v_values() {
        assert_eq!(v_recurrence(5), 1);
        assert_eq!(v_recurrence(3), 0);
        assert_eq!(v_recurrence(10), 2);
        assert_eq!(v_recurrence(0), 0);
        assert_eq!(v_recurrence(1), 0);
        let t = thue_morse_prefix(10);
        assert_eq!(words::nnp(&t[..5]).unwrap(), 1);
        assert_eq!(words::nnp(&t).unwrap(), 2);
    }

    #[test]
    fn v_rules_partition_indices() {
        for n in 2..20_000u64 {
            assert_eq!(VRule::ALL.iter().filter(|r| r.applies(n)).count(), 1, "n = {n}");
        }
        assert_eq!(VRule::for_index(1), None);
    }

    #[test]
    fn tm_closed_forms() {
        assert_eq!(tm_shortest_prefix_with_nnp(2).unwrap(), 10);
        assert_eq!(tm_shortest_prefix_with_nnp(3).unwrap(), 34);
        assert_eq!(tm_liminf_witness(2).unwrap(), 13);
        assert_eq!(v_recurrence(13), 1);
        assert_eq!(tm_ice(5).unwrap().to_string(), "5/3");
        assert_eq!(tm_ice(4).unwrap().to_string(), "4/3");
        assert_eq!(tm_ice(1).unwrap(), ExactRational::integer(1));
        assert!(tm_shortest_prefix_with_nnp(1).is_err());
    }
}
