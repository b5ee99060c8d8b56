//! Period and border structure of finite words.
//!
//! Positions are 0-based throughout. A border of `w` is a nonempty proper
//! prefix that is also a suffix; `p` is a period of a length-`n` word iff
//! `p == n` or `n - p` is a border length.

use std::fmt;
use std::ops::Deref;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::ExactRational;

/// A finite word over the alphabet `{0, .., alphabet - 1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    symbols: Vec<u8>,
    alphabet: u8,
}

impl Word {
    pub fn new(symbols: Vec<u8>, alphabet: u8) -> Result<Self> {
        if let Some((position, &symbol)) = symbols.iter().enumerate().find(|(_, &s)| s >= alphabet) {
            return Err(Error::SymbolOutOfRange {
                symbol,
                position,
                alphabet,
            });
        }
        Ok(Word { symbols, alphabet })
    }

    /// Builds a word whose alphabet is the smallest one containing every
    /// symbol (at least binary).
    pub fn from_symbols(symbols: Vec<u8>) -> Self {
        let alphabet = symbols.iter().copied().max().map_or(2, |m| (m + 1).max(2));
        Word { symbols, alphabet }
    }

    /// Parses command-line text. All-digit input maps `'0'..='9'` to their
    /// values; anything else maps bytes to `0, 1, 2, ..` in order of first
    /// appearance, so `alfalfa` becomes `0120120`.
    pub fn parse(text: &str) -> Result<Self> {
        let bytes = text.as_bytes();
        if bytes.iter().all(u8::is_ascii_digit) {
            return Ok(Word::from_symbols(bytes.iter().map(|b| b - b'0').collect()));
        }
        let mut seen: Vec<u8> = Vec::new();
        let mut symbols = Vec::with_capacity(bytes.len());
        for &b in bytes {
            let idx = match seen.iter().position(|&s| s == b) {
                Some(i) => i,
                None => {
                    if seen.len() == u8::MAX as usize {
                        return Err(Error::InvalidInput("more than 255 distinct symbols".into()));
                    }
                    seen.push(b);
                    seen.len() - 1
                }
            };
            symbols.push(idx as u8);
        }
        Ok(Word::from_symbols(symbols))
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    pub fn into_symbols(self) -> Vec<u8> {
        self.symbols
    }

    pub fn alphabet(&self) -> u8 {
        self.alphabet
    }

    pub fn prefix(&self, len: usize) -> Word {
        Word {
            symbols: self.symbols[..len].to_vec(),
            alphabet: self.alphabet,
        }
    }

    pub fn reversed(&self) -> Word {
        let mut symbols = self.symbols.clone();
        symbols.reverse();
        Word {
            symbols,
            alphabet: self.alphabet,
        }
    }
}

impl Deref for Word {
    type Target = [u8];

    fn deref(&self) -> &[u8] {
        &self.symbols
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &s in &self.symbols {
            if s < 10 {
                write!(f, "{}", (b'0' + s) as char)?;
            } else {
                write!(f, "[{s}]")?;
            }
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Word::parse(s)
    }
}

impl Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Failure table: entry `i` is the length of the longest border of the
/// prefix of length `i + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BorderProfile(Vec<usize>);

impl BorderProfile {
    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Longest border length of the prefix of length `prefix_len >= 1`.
    pub fn longest_border(&self, prefix_len: usize) -> usize {
        self.0[prefix_len - 1]
    }

    pub fn least_period(&self, prefix_len: usize) -> usize {
        prefix_len - self.0[prefix_len - 1]
    }

    /// All border lengths of the prefix of length `prefix_len`, ascending.
    pub fn borders_of_prefix(&self, prefix_len: usize) -> Vec<usize> {
        let mut out = Vec::new();
        if prefix_len == 0 {
            return out;
        }
        let mut b = self.0[prefix_len - 1];
        while b > 0 {
            out.push(b);
            b = self.0[b - 1];
        }
        out.reverse();
        out
    }
}

pub fn border_array<T: PartialEq>(w: &[T]) -> BorderProfile {
    let mut fail = vec![0usize; w.len()];
    let mut k = 0;
    for i in 1..w.len() {
        while k > 0 && w[k] != w[i] {
            k = fail[k - 1];
        }
        if w[k] == w[i] {
            k += 1;
        }
        fail[i] = k;
    }
    BorderProfile(fail)
}

/// Sorted ascending set of periods of a word of length `word_len`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PeriodSet {
    periods: Vec<usize>,
    includes_trivial: bool,
    word_len: usize,
}

impl PeriodSet {
    /// `periods` must be the genuine period set; it is sorted and deduplicated here.
    pub fn from_periods(mut periods: Vec<usize>, word_len: usize, includes_trivial: bool) -> Self {
        periods.sort_unstable();
        periods.dedup();
        PeriodSet {
            periods,
            includes_trivial,
            word_len,
        }
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.periods
    }

    pub fn len(&self) -> usize {
        self.periods.len()
    }

    pub fn is_empty(&self) -> bool {
        self.periods.is_empty()
    }

    pub fn contains(&self, p: usize) -> bool {
        self.periods.binary_search(&p).is_ok()
    }

    pub fn includes_trivial(&self) -> bool {
        self.includes_trivial
    }

    pub fn word_len(&self) -> usize {
        self.word_len
    }

    pub fn least(&self) -> Option<usize> {
        self.periods.first().copied()
    }

    pub fn nontrivial_count(&self) -> usize {
        self.periods.iter().filter(|&&p| p < self.word_len).count()
    }

    pub fn with_trivial(&self) -> PeriodSet {
        let mut periods = self.periods.clone();
        if !self.includes_trivial {
            periods.push(self.word_len);
        }
        PeriodSet::from_periods(periods, self.word_len, true)
    }
}

fn require_nonempty<T>(w: &[T]) -> Result<()> {
    if w.is_empty() {
        Err(Error::EmptyWord)
    } else {
        Ok(())
    }
}

pub fn borders<T: PartialEq>(w: &[T]) -> Result<Vec<usize>> {
    require_nonempty(w)?;
    Ok(border_array(w).borders_of_prefix(w.len()))
}

pub fn periods<T: PartialEq>(w: &[T], include_trivial: bool) -> Result<PeriodSet> {
    let n = w.len();
    let mut ps: Vec<usize> = borders(w)?.into_iter().map(|b| n - b).collect();
    if include_trivial {
        ps.push(n);
    }
    Ok(PeriodSet::from_periods(ps, n, include_trivial))
}

pub fn nnp<T: PartialEq>(w: &[T]) -> Result<usize> {
    Ok(borders(w)?.len())
}

pub fn per<T: PartialEq>(w: &[T]) -> Result<usize> {
    require_nonempty(w)?;
    Ok(border_array(w).least_period(w.len()))
}

pub fn exponent<T: PartialEq>(w: &[T]) -> Result<ExactRational> {
    let p = per(w)?;
    Ok(ExactRational::from_parts(w.len() as u64, p as u64))
}

/// Initial critical exponent with the shortest prefix attaining it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Ice {
    pub value: ExactRational,
    pub witness_len: usize,
}

pub fn ice<T: PartialEq>(w: &[T]) -> Result<Ice> {
    require_nonempty(w)?;
    let profile = border_array(w);
    let mut best = Ice {
        value: ExactRational::integer(1),
        witness_len: 1,
    };
    for len in 2..=w.len() {
        let e = ExactRational::from_parts(len as u64, profile.least_period(len) as u64);
        if e > best.value {
            best = Ice {
                value: e,
                witness_len: len,
            };
        }
    }
    Ok(best)
}

pub fn is_palindrome<T: PartialEq>(w: &[T]) -> bool {
    w.iter().eq(w.iter().rev())
}

/// Online border array over a growing word, supporting `pop` for
/// backtracking searches. Keeps the nontrivial-period count and the initial
/// critical exponent of every prefix so each query is O(1).
#[derive(Clone, Debug, Default)]
pub struct PrefixScanner {
    symbols: Vec<u8>,
    fail: Vec<usize>,
    border_count: Vec<u32>,
    // (numerator, denominator) of the ice of each prefix, plus witness length
    ice: Vec<(u64, u64, usize)>,
}

impl PrefixScanner {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(cap: usize) -> Self {
        PrefixScanner {
            symbols: Vec::with_capacity(cap),
            fail: Vec::with_capacity(cap),
            border_count: Vec::with_capacity(cap),
            ice: Vec::with_capacity(cap),
        }
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    pub fn push(&mut self, s: u8) {
        let i = self.symbols.len();
        self.symbols.push(s);
        let mut k = 0;
        if i > 0 {
            k = self.fail[i - 1];
            while k > 0 && self.symbols[k] != s {
                k = self.fail[k - 1];
            }
            if self.symbols[k] == s {
                k += 1;
            }
        }
        self.fail.push(k);
        self.border_count.push(if k == 0 { 0 } else { self.border_count[k - 1] + 1 });
        let len = (i + 1) as u64;
        let period = len - k as u64;
        let current = match self.ice.last() {
            Some(&(num, den, wit)) => {
                if len as u128 * den as u128 > num as u128 * period as u128 {
                    (len, period, i + 1)
                } else {
                    (num, den, wit)
                }
            }
            None => (1, 1, 1),
        };
        self.ice.push(current);
    }

    pub fn pop(&mut self) -> Option<u8> {
        let s = self.symbols.pop()?;
        self.fail.pop();
        self.border_count.pop();
        self.ice.pop();
        Some(s)
    }

    pub fn truncate(&mut self, len: usize) {
        self.symbols.truncate(len);
        self.fail.truncate(len);
        self.border_count.truncate(len);
        self.ice.truncate(len);
    }

    /// Nontrivial periods of the prefix of length `len >= 1`.
    pub fn nnp_at(&self, len: usize) -> usize {
        self.border_count[len - 1] as usize
    }

    pub fn nnp(&self) -> usize {
        self.nnp_at(self.len())
    }

    pub fn longest_border_at(&self, len: usize) -> usize {
        self.fail[len - 1]
    }

    pub fn least_period_at(&self, len: usize) -> usize {
        len - self.fail[len - 1]
    }

    pub fn ice_at(&self, len: usize) -> Ice {
        let (num, den, witness_len) = self.ice[len - 1];
        Ice {
            value: ExactRational::from_parts(num, den),
            witness_len,
        }
    }

    pub fn ice(&self) -> Ice {
        self.ice_at(self.len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    /// Longest proper border by direct comparison of every candidate length.
    fn longest_border_naive(x: &[u8]) -> usize {
        (1..x.len()).rev().find(|&b| x[..b] == x[x.len() - b..]).unwrap_or(0)
    }

    #[test]
    fn border_array_examples() {
        let alfalfa = w("alfalfa");
        let expected: Vec<usize> = (1..=alfalfa.len()).map(|i| longest_border_naive(&alfalfa[..i])).collect();
        assert_eq!(expected, vec![0, 0, 0, 1, 2, 3, 4]);
        assert_eq!(border_array(&alfalfa).as_slice(), &expected[..]);
        assert_eq!(border_array(&w("aaaa")).as_slice(), &[0, 1, 2, 3]);
        assert_eq!(border_array(&w("abc")).as_slice(), &[0, 0, 0]);
        assert!(border_array::<u8>(&[]).is_empty());
    }

    #[test]
    fn border_and_period_examples() {
        assert_eq!(borders(&w("abracadabra")).unwrap(), vec![1, 4]);
        assert_eq!(borders(&w("alfalfa")).unwrap(), vec![1, 4]);
        assert!(borders(&w("abc")).unwrap().is_empty());
        assert_eq!(periods(&w("alfalfa"), true).unwrap().as_slice(), &[3, 6, 7]);
        assert_eq!(periods(&w("abracadabra"), true).unwrap().as_slice(), &[7, 10, 11]);
        assert_eq!(periods(&w("aaaa"), true).unwrap().as_slice(), &[1, 2, 3, 4]);
        assert_eq!(periods(&w("alfalfa"), false).unwrap().as_slice(), &[3, 6]);
    }

    #[test]
    fn counts_and_exponents() {
        assert_eq!(nnp(&w("alfalfa")).unwrap(), 2);
        assert_eq!(nnp(&w("abc")).unwrap(), 0);
        assert_eq!(nnp(&w("00100")).unwrap(), 2);
        assert_eq!(exponent(&w("entente")).unwrap().to_string(), "7/3");
        assert_eq!(per(&w("alfalfa")).unwrap(), 3);
        assert_eq!(per(&w("abc")).unwrap(), 3);
        assert_eq!(exponent(&w("abc")).unwrap(), ExactRational::integer(1));
    }

    #[test]
    fn ice_examples() {
        let p = ice(&w("phosphorus")).unwrap();
        assert_eq!(p.value.to_string(), "7/4");
        assert_eq!(p.witness_len, 7);
        let a = ice(&w("alfalfa")).unwrap();
        assert_eq!((a.value.to_string(), a.witness_len), ("7/3".to_string(), 7));
        assert_eq!(ice(&w("abc")).unwrap().value, ExactRational::integer(1));
        // ties go to the shorter prefix: "aab" has exponent 2 at length 2 only
        assert_eq!(ice(&w("aab")).unwrap().witness_len, 2);
    }

    #[test]
    fn empty_word_is_rejected() {
        let e: &[u8] = &[];
        assert_eq!(borders(e), Err(Error::EmptyWord));
        assert_eq!(periods(e, true), Err(Error::EmptyWord));
        assert_eq!(nnp(e), Err(Error::EmptyWord));
        assert_eq!(per(e), Err(Error::EmptyWord));
        assert!(ice(e).is_err());
    }

    #[test]
    fn palindromes() {
        assert!(is_palindrome(&w("001001100100")));
        assert!(!is_palindrome(&w("01")));
        assert!(is_palindrome::<u8>(&[]));
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(w("alfalfa").symbols(), &[0, 1, 2, 0, 1, 2, 0]);
        assert_eq!(w("0102").to_string(), "0102");
        assert_eq!(Word::new(vec![0, 3], 3).unwrap_err().kind(), "symbol-out-of-range");
        assert_eq!(Word::from_symbols(vec![0, 11]).to_string(), "0[11]");
    }

    #[test]
    fn scanner_matches_batch_computation() {
        let word = w("0110100110010110100101100110");
        let mut sc = PrefixScanner::new();
        for &s in word.iter() {
            sc.push(s);
            let prefix = &word[..sc.len()];
            assert_eq!(sc.nnp(), nnp(prefix).unwrap());
            assert_eq!(sc.ice(), ice(prefix).unwrap());
            assert_eq!(sc.least_period_at(sc.len()), per(prefix).unwrap());
        }
        sc.truncate(5);
        sc.push(1);
        assert_eq!(sc.symbols(), &[0, 1, 1, 0, 1, 1]);
        assert_eq!(sc.nnp(), nnp(&[0u8, 1, 1, 0, 1, 1][..]).unwrap());
    }
}
