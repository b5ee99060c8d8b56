//! Overlaps, squares and the extremal constructions for overlap-free
//! binary and squarefree ternary words with many periods.

mod search;

pub use search::{shortest_with_nnp, Search, SearchOutcome};

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::words::{self, Word};

/// Which repetition a word must avoid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Constraint {
    OverlapFree,
    SquareFree,
}

impl Constraint {
    pub fn name(self) -> &'static str {
        match self {
            Constraint::OverlapFree => "overlap-free",
            Constraint::SquareFree => "square-free",
        }
    }

    /// Whether `w` ends with a forbidden factor, assuming `w[..len-1]`
    /// is already clean.
    pub fn violated_at_end(self, w: &[u8]) -> bool {
        match self {
            Constraint::OverlapFree => ends_with_overlap(w),
            Constraint::SquareFree => ends_with_square(w),
        }
    }

    pub fn find(self, w: &[u8]) -> Option<RepetitionWitness> {
        match self {
            Constraint::OverlapFree => find_overlap(w),
            Constraint::SquareFree => find_square(w),
        }
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Constraint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "overlap-free" | "overlap_free" | "overlapfree" => Ok(Constraint::OverlapFree),
            "square-free" | "square_free" | "squarefree" => Ok(Constraint::SquareFree),
            _ => Err(Error::InvalidInput(format!("unknown constraint {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RepetitionKind {
    Overlap,
    Square,
}

/// A factor `w[start..start + length]` with period `period`, where
/// `length = 2 * period + 1` for an overlap and `2 * period` for a square.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RepetitionWitness {
    pub kind: RepetitionKind,
    pub start: usize,
    pub period: usize,
    pub length: usize,
}

impl RepetitionWitness {
    /// Re-checks the witness against `w` symbol by symbol.
    pub fn holds_in(&self, w: &[u8]) -> bool {
        let expected_len = match self.kind {
            RepetitionKind::Overlap => 2 * self.period + 1,
            RepetitionKind::Square => 2 * self.period,
        };
        self.period > 0
            && self.length == expected_len
            && self.start + self.length <= w.len()
            && (self.start..self.start + self.length - self.period).all(|j| w[j] == w[j + self.period])
    }
}

/// Scans each shift `p` for a run of `p + extra` consecutive matches
/// `w[i] == w[i + p]`; smallest period first, then leftmost start.
fn find_run(w: &[u8], extra: usize, kind: RepetitionKind) -> Option<RepetitionWitness> {
    let n = w.len();
    let mut p = 1;
    while 2 * p + extra <= n {
        let need = p + extra;
        let mut run = 0;
        for i in 0..n - p {
            if w[i] == w[i + p] {
                run += 1;
                if run == need {
                    return Some(RepetitionWitness {
                        kind,
                        start: i + 1 - need,
                        period: p,
                        length: 2 * p + extra,
                    });
                }
            } else {
                run = 0;
            }
        }
        p += 1;
    }
    None
}

/// A factor of the form `axaxa` (`a` a letter), if any.
pub fn find_overlap(w: &[u8]) -> Option<RepetitionWitness> {
    find_run(w, 1, RepetitionKind::Overlap)
}

/// A nonempty factor of the form `xx`, if any.
pub fn find_square(w: &[u8]) -> Option<RepetitionWitness> {
    find_run(w, 0, RepetitionKind::Square)
}

pub fn ends_with_square(w: &[u8]) -> bool {
    let n = w.len();
    (1..=n / 2).any(|h| w[n - 2 * h..n - h] == w[n - h..])
}

pub fn ends_with_overlap(w: &[u8]) -> bool {
    let n = w.len();
    (1..=(n.saturating_sub(1)) / 2).any(|h| w[n - 2 * h - 1..n - h] == w[n - h - 1..])
}

fn require_binary(w: &Word) -> Result<()> {
    if w.iter().any(|&s| s > 1) {
        return Err(Error::InvalidInput("morphism needs a binary word".into()));
    }
    Ok(())
}

/// Thue–Morse morphism `0 -> 01`, `1 -> 10`.
pub fn mu(w: &Word) -> Result<Word> {
    require_binary(w)?;
    let mut out = Vec::with_capacity(2 * w.len());
    for &s in w.iter() {
        out.push(s);
        out.push(1 - s);
    }
    Word::new(out, 2)
}

/// `a^{-1} mu^2(w) a^{-1}` for `w = a x a`.
pub fn gamma(w: &Word) -> Result<Word> {
    require_binary(w)?;
    if w.len() < 2 || w[0] != w[w.len() - 1] {
        return Err(Error::InvalidInput(
            "gamma needs a word of length >= 2 whose first and last symbols agree".into(),
        ));
    }
    let squared = mu(&mu(w)?)?;
    let inner = squared[1..squared.len() - 1].to_vec();
    Word::new(inner, 2)
}

const A3: [u8; 12] = [0, 0, 1, 0, 0, 1, 1, 0, 0, 1, 0, 0];

/// `(17 * 4^(p-2) + 4) / 6`, the length of `A_p` for `p >= 3`.
pub fn a_length(p: u32) -> Result<u64> {
    if p < 3 {
        return Err(Error::InvalidInput("A_p is defined for p >= 3".into()));
    }
    let pow = 4u64.checked_pow(p - 2).ok_or(Error::Overflow("|A_p|"))?;
    let num = pow.checked_mul(17).and_then(|x| x.checked_add(4)).ok_or(Error::Overflow("|A_p|"))?;
    Ok(num / 6)
}

/// `|A_p| / 2`, the length of `B_p` for `p >= 4`; `B_3` has length 7.
pub fn b_length(p: u32) -> Result<u64> {
    match p {
        0..=2 => Err(Error::InvalidInput("B_p is defined for p >= 3".into())),
        3 => Ok(7),
        _ => Ok(a_length(p)? / 2),
    }
}

/// The word `A_p` (no verification).
pub fn a_word(p: u32) -> Result<Word> {
    let expected = a_length(p)?;
    if usize::try_from(expected).is_err() {
        return Err(Error::Overflow("|A_p|"));
    }
    let mut w = Word::new(A3.to_vec(), 2)?;
    for _ in 3..p {
        w = gamma(&w)?;
    }
    Ok(w)
}

/// Gap encoding: the `i`th letter is the number of `ā` between the `i`th
/// and `(i+1)`th occurrence of `a = w[0]`.
pub fn gap_encode(w: &Word) -> Result<Word> {
    require_binary(w)?;
    let a = *w.first().ok_or(Error::EmptyWord)?;
    let positions: Vec<usize> = w.iter().enumerate().filter(|(_, &s)| s == a).map(|(i, _)| i).collect();
    let gaps: Vec<u8> = positions
        .windows(2)
        .map(|pair| u8::try_from(pair[1] - pair[0] - 1).map_err(|_| Error::Overflow("gap")))
        .collect::<Result<_>>()?;
    Ok(Word::from_symbols(gaps))
}

/// Inverse of [`gap_encode`] for a word that starts and ends with `a`.
pub fn gap_decode(gaps: &Word, a: u8) -> Word {
    let mut out = vec![a];
    for &c in gaps.iter() {
        out.extend(std::iter::repeat_n(1 - a, c as usize));
        out.push(a);
    }
    Word::from_symbols(out)
}

pub fn b_word(p: u32) -> Result<Word> {
    let b = gap_encode(&a_word(p)?)?;
    Word::new(b.into_symbols(), 3)
}

/// A construction with its properties measured on the word itself.
#[derive(Clone, Debug, Serialize)]
pub struct ConstructionRecord {
    pub index: u32,
    pub word: Word,
    pub length: usize,
    pub closed_form_length: u64,
    pub nnp: usize,
    pub palindrome: bool,
    /// Overlap-free for `A_p`, squarefree for `B_p`.
    pub repetition_free: bool,
    pub constraint: Constraint,
}

impl ConstructionRecord {
    fn measure(index: u32, word: Word, closed_form_length: u64, constraint: Constraint) -> Result<Self> {
        Ok(ConstructionRecord {
            index,
            length: word.len(),
            closed_form_length,
            nnp: words::nnp(&word)?,
            palindrome: words::is_palindrome(&word),
            repetition_free: constraint.find(&word).is_none(),
            constraint,
            word,
        })
    }

    pub fn length_matches(&self) -> bool {
        self.length as u64 == self.closed_form_length
    }
}

pub fn build_a(p: u32) -> Result<ConstructionRecord> {
    let len = a_length(p)?;
    ConstructionRecord::measure(p, a_word(p)?, len, Constraint::OverlapFree)
}

pub fn build_b(p: u32) -> Result<ConstructionRecord> {
    let len = b_length(p)?;
    ConstructionRecord::measure(p, b_word(p)?, len, Constraint::SquareFree)
}

fn index_for_length(len: usize, lengths: impl Fn(u32) -> Result<u64>, first: u32) -> Option<u32> {
    (first..40).find(|&p| matches!(lengths(p), Ok(l) if l == len as u64))
}

/// One run-length rewriting step `A_p -> A_{p+1}`, checked against the
/// `gamma` construction. Runs map as
/// `(0,1) -> 1101`, `(1,1) -> 0010`, `(0,2) -> 11001101`, `(1,2) -> 00110010`,
/// then the last two symbols are dropped.
pub fn runlength_step_a(w: &Word) -> Result<Word> {
    require_binary(w)?;
    let mut out = Vec::with_capacity(4 * w.len());
    let mut i = 0;
    while i < w.len() {
        let s = w[i];
        let run = w[i..].iter().take_while(|&&c| c == s).count();
        let image: &[u8] = match (s, run) {
            (0, 1) => &[1, 1, 0, 1],
            (1, 1) => &[0, 0, 1, 0],
            (0, 2) => &[1, 1, 0, 0, 1, 1, 0, 1],
            (1, 2) => &[0, 0, 1, 1, 0, 0, 1, 0],
            _ => {
                return Err(Error::Mismatch(format!(
                    "run ({s},{run}) at position {i} has no image under the run-length morphism"
                )))
            }
        };
        out.extend_from_slice(image);
        i += run;
    }
    if out.len() < 2 {
        return Err(Error::Mismatch("image too short".into()));
    }
    out.truncate(out.len() - 2);
    let image = Word::new(out, 2)?;
    let p = index_for_length(w.len(), a_length, 3)
        .ok_or_else(|| Error::Mismatch(format!("no A_p has length {}", w.len())))?;
    if *w != a_word(p)? {
        return Err(Error::Mismatch(format!("input of length {} is not A_{p}", w.len())));
    }
    if image != a_word(p + 1)? {
        return Err(Error::Mismatch(format!("run-length step disagrees with A_{}", p + 1)));
    }
    Ok(image)
}

/// One rewriting step `B_p -> B_{p+1}` (`p >= 4`): every second `1`
/// (the 2nd, 4th, ...) becomes `3`, then
/// `0 -> 0201`, `1 -> 2101`, `2 -> 2021`, `3 -> 0121`, dropping the last letter.
pub fn runlength_step_b(w: &Word) -> Result<Word> {
    let mut ones = 0usize;
    let mut out = Vec::with_capacity(4 * w.len());
    for &s in w.iter() {
        let s = if s == 1 {
            ones += 1;
            if ones.is_multiple_of(2) {
                3
            } else {
                1
            }
        } else {
            s
        };
        let image: &[u8] = match s {
            0 => &[0, 2, 0, 1],
            1 => &[2, 1, 0, 1],
            2 => &[2, 0, 2, 1],
            3 => &[0, 1, 2, 1],
            _ => return Err(Error::Mismatch(format!("symbol {s} outside the ternary alphabet"))),
        };
        out.extend_from_slice(image);
    }
    if out.is_empty() {
        return Err(Error::Mismatch("empty input".into()));
    }
    out.pop();
    let image = Word::new(out, 3)?;
    let p = index_for_length(w.len(), b_length, 4)
        .ok_or_else(|| Error::Mismatch(format!("no B_p (p >= 4) has length {}", w.len())))?;
    if w.symbols() != b_word(p)?.symbols() {
        return Err(Error::Mismatch(format!("input of length {} is not B_{p}", w.len())));
    }
    if image != b_word(p + 1)? {
        return Err(Error::Mismatch(format!("rewriting step disagrees with B_{}", p + 1)));
    }
    Ok(image)
}
