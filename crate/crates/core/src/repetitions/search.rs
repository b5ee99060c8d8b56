//! Exhaustive search for the shortest (then lexicographically least)
//! word avoiding a repetition and having exactly `p` nontrivial periods.
//!
//! For a target `p >= 1` every solution `w` of length `L` has a longest
//! border `u`, and the borders of `w` are `u` together with the borders of
//! `u`, so `nnp(u) = p - 1`. The search therefore fixes `L` and the border
//! length `b`, enumerates the free prefix `w[..L-b]` depth first (pruning
//! on the constraint and on `nnp(w[..b]) == p - 1`), and fills the rest
//! with period `L - b`.
//!
//! Each length level is split into root prefixes explored in lexicographic
//! order, possibly in parallel; the first root (in order) that yields a
//! word wins, so the answer does not depend on scheduling.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use rayon::prelude::*;
use serde::Serialize;

use super::Constraint;
use crate::error::{Error, Result};
use crate::words::{PrefixScanner, Word};

const ROOT_DEPTH: usize = 8;
const FRONTIER_MAGIC: &str = "# periodlab search frontier v1";
const TICK_FLUSH: u64 = 1024;

#[derive(Clone, Debug)]
pub struct Search {
    constraint: Constraint,
    alphabet: u8,
    target: usize,
    max_len: usize,
    budget: Option<u64>,
    checkpoint: Option<PathBuf>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchOutcome {
    pub word: Option<Word>,
    pub nodes: u64,
    /// Every length below this one was exhausted without a solution.
    pub exhausted_below: usize,
}

/// Length-minimal, then lexicographically least word over `alphabet`
/// letters avoiding `constraint` with exactly `p` nontrivial periods, or
/// `None` if there is none of length `<= max_len`.
pub fn shortest_with_nnp(constraint: Constraint, alphabet: u8, p: usize, max_len: usize) -> Result<Option<Word>> {
    Ok(Search::new(constraint, alphabet, p, max_len).run()?.word)
}

impl Search {
    pub fn new(constraint: Constraint, alphabet: u8, target: usize, max_len: usize) -> Self {
        Search {
            constraint,
            alphabet,
            target,
            max_len,
            budget: None,
            checkpoint: None,
        }
    }

    /// Caps the number of search nodes; exceeding it is an error distinct
    /// from "no word exists".
    pub fn budget(mut self, nodes: u64) -> Self {
        self.budget = Some(nodes);
        self
    }

    pub fn checkpoint(mut self, path: impl Into<PathBuf>) -> Self {
        self.checkpoint = Some(path.into());
        self
    }

    pub fn run(&self) -> Result<SearchOutcome> {
        if self.alphabet < 1 {
            return Err(Error::InvalidInput("alphabet must have at least one letter".into()));
        }
        let counter = Counter::new(self.budget);
        let mut length = 1;
        let mut pending: Option<Vec<Vec<u8>>> = None;

        if let Some(path) = &self.checkpoint {
            if path.exists() {
                let frontier = Frontier::load(path)?;
                frontier.check_matches(self)?;
                match frontier.status {
                    Status::Found(word) => {
                        self.confirm(&word)?;
                        return Ok(SearchOutcome {
                            exhausted_below: word.len(),
                            word: Some(word),
                            nodes: 0,
                        });
                    }
                    Status::Exhausted(upto) if upto >= self.max_len => {
                        return Ok(SearchOutcome {
                            word: None,
                            nodes: 0,
                            exhausted_below: self.max_len + 1,
                        })
                    }
                    Status::Exhausted(upto) => length = upto + 1,
                    Status::Running => {
                        length = frontier.length;
                        pending = Some(frontier.roots);
                    }
                }
            }
        }

        let batch = 4 * rayon::current_num_threads().max(1);
        while length <= self.max_len {
            let roots = match pending.take() {
                Some(r) => r,
                None => self.roots(length),
            };
            let level = Level {
                search: self,
                len: length,
                counter: &counter,
            };
            let mut rest: &[Vec<u8>] = &roots;
            while !rest.is_empty() {
                self.save(Status::Running, length, rest)?;
                let take = batch.min(rest.len());
                let results: Vec<Result<Option<Vec<u8>>>> =
                    rest[..take].par_iter().map(|root| level.explore_root(root)).collect();
                for r in results {
                    if let Some(found) = r? {
                        let word = Word::new(found, self.alphabet)?;
                        self.save(Status::Found(word.clone()), length, &[])?;
                        return Ok(SearchOutcome {
                            word: Some(word),
                            nodes: counter.total(),
                            exhausted_below: length,
                        });
                    }
                }
                rest = &rest[take..];
            }
            self.save(Status::Exhausted(length), length, &[])?;
            length += 1;
        }
        Ok(SearchOutcome {
            word: None,
            nodes: counter.total(),
            exhausted_below: self.max_len + 1,
        })
    }

    fn confirm(&self, word: &Word) -> Result<()> {
        let ok = word.len() <= self.max_len
            && self.constraint.find(word).is_none()
            && crate::words::nnp(word)? == self.target;
        if ok {
            Ok(())
        } else {
            Err(Error::Mismatch(format!("checkpointed word {word} does not satisfy the search")))
        }
    }

    /// Constraint-respecting words of length `min(ROOT_DEPTH, len)` in
    /// lexicographic order.
    fn roots(&self, len: usize) -> Vec<Vec<u8>> {
        let depth = ROOT_DEPTH.min(len);
        let mut out = Vec::new();
        let mut w = Vec::with_capacity(depth);
        self.collect_roots(&mut w, depth, &mut out);
        out
    }

    fn collect_roots(&self, w: &mut Vec<u8>, depth: usize, out: &mut Vec<Vec<u8>>) {
        if w.len() == depth {
            out.push(w.clone());
            return;
        }
        for s in 0..self.alphabet {
            w.push(s);
            if !self.constraint.violated_at_end(w) {
                self.collect_roots(w, depth, out);
            }
            w.pop();
        }
    }

    fn save(&self, status: Status, length: usize, roots: &[Vec<u8>]) -> Result<()> {
        let Some(path) = &self.checkpoint else {
            return Ok(());
        };
        let frontier = Frontier {
            constraint: self.constraint,
            alphabet: self.alphabet,
            target: self.target,
            length,
            status,
            roots: roots.to_vec(),
        };
        frontier.store(path)
    }
}

struct Counter {
    budget: Option<u64>,
    used: AtomicU64,
    exceeded: AtomicBool,
}

impl Counter {
    fn new(budget: Option<u64>) -> Self {
        Counter {
            budget,
            used: AtomicU64::new(0),
            exceeded: AtomicBool::new(false),
        }
    }

    fn flush(&self, ticks: u64) -> bool {
        let total = self.used.fetch_add(ticks, Ordering::Relaxed) + ticks;
        if let Some(b) = self.budget {
            if total > b {
                self.exceeded.store(true, Ordering::Relaxed);
            }
        }
        !self.exceeded.load(Ordering::Relaxed)
    }

    fn total(&self) -> u64 {
        self.used.load(Ordering::Relaxed)
    }
}

struct Level<'a> {
    search: &'a Search,
    len: usize,
    counter: &'a Counter,
}

/// Per-(root, border length) exploration state.
struct Branch<'a> {
    level: &'a Level<'a>,
    border: usize,
    free: usize,
    ticks: u64,
}

struct Aborted;

impl Level<'_> {
    fn explore_root(&self, root: &[u8]) -> Result<Option<Vec<u8>>> {
        let target = self.search.target;
        let borders: Vec<usize> = if target == 0 { vec![0] } else { (1..self.len).collect() };
        let mut best: Option<Vec<u8>> = None;
        for border in borders {
            let mut branch = Branch {
                level: self,
                border,
                free: self.len - border,
                ticks: 0,
            };
            let found = branch.start(root);
            let still_ok = self.counter.flush(branch.ticks);
            let found = match found {
                Ok(f) if still_ok => f,
                _ => {
                    return Err(Error::BudgetExhausted {
                        budget: self.counter.budget.unwrap_or(0),
                        length: self.len,
                    })
                }
            };
            if let Some(w) = found {
                if best.as_ref().is_none_or(|b| w < *b) {
                    best = Some(w);
                }
            }
        }
        Ok(best)
    }
}

impl Branch<'_> {
    fn tick(&mut self) -> std::result::Result<(), Aborted> {
        self.ticks += 1;
        if self.ticks >= TICK_FLUSH {
            let ok = self.level.counter.flush(self.ticks);
            self.ticks = 0;
            if !ok {
                return Err(Aborted);
            }
        }
        Ok(())
    }

    fn border_prefix_ok(&self, sc: &PrefixScanner) -> bool {
        let b = self.border;
        b == 0 || sc.len() < b || sc.nnp_at(b) + 1 == self.level.search.target
    }

    fn start(&mut self, root: &[u8]) -> std::result::Result<Option<Vec<u8>>, Aborted> {
        // the root itself counts as one node per border length
        self.ticks += 1;
        let mut sc = PrefixScanner::with_capacity(self.level.len);
        if self.free < root.len() {
            // word is forced by root[..free]; the root must agree with that period
            if !(self.free..root.len()).all(|i| root[i] == root[i - self.free]) {
                return Ok(None);
            }
            root[..self.free].iter().for_each(|&s| sc.push(s));
            return Ok(self.finish(&mut sc));
        }
        root.iter().for_each(|&s| sc.push(s));
        if self.border <= root.len() && !self.border_prefix_ok(&sc) {
            return Ok(None);
        }
        self.dfs(&mut sc)
    }

    fn dfs(&mut self, sc: &mut PrefixScanner) -> std::result::Result<Option<Vec<u8>>, Aborted> {
        self.tick()?;
        if sc.len() == self.free {
            return Ok(self.finish(sc));
        }
        let search = self.level.search;
        for s in 0..search.alphabet {
            sc.push(s);
            let viable = !search.constraint.violated_at_end(sc.symbols())
                && (sc.len() != self.border || self.border_prefix_ok(sc));
            if viable {
                if let Some(w) = self.dfs(sc)? {
                    sc.pop();
                    return Ok(Some(w));
                }
            }
            sc.pop();
        }
        Ok(None)
    }

    /// Extends the free prefix with period `free` up to the level length.
    fn finish(&self, sc: &mut PrefixScanner) -> Option<Vec<u8>> {
        let search = self.level.search;
        let free = self.free;
        let mut result = None;
        let mut ok = true;
        for j in free..self.level.len {
            let s = sc.symbols()[j - free];
            sc.push(s);
            if search.constraint.violated_at_end(sc.symbols()) || (sc.len() == self.border && !self.border_prefix_ok(sc)) {
                ok = false;
                break;
            }
        }
        if ok && sc.nnp() == search.target {
            result = Some(sc.symbols().to_vec());
        }
        sc.truncate(free);
        result
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Status {
    Running,
    Found(Word),
    Exhausted(usize),
}

/// Plain-text checkpoint: `#` header lines, then one pending root prefix
/// per line for the current length level.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Frontier {
    constraint: Constraint,
    alphabet: u8,
    target: usize,
    length: usize,
    status: Status,
    roots: Vec<Vec<u8>>,
}

fn digits(w: &[u8]) -> String {
    w.iter().map(|&s| (b'0' + s) as char).collect()
}

impl Frontier {
    fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{FRONTIER_MAGIC}");
        let _ = writeln!(
            s,
            "# constraint={} alphabet={} nnp={}",
            self.constraint, self.alphabet, self.target
        );
        let _ = writeln!(s, "# length={}", self.length);
        match &self.status {
            Status::Running => {
                let _ = writeln!(s, "# status=running");
            }
            Status::Found(w) => {
                let _ = writeln!(s, "# status=found word={w}");
            }
            Status::Exhausted(upto) => {
                let _ = writeln!(s, "# status=exhausted upto={upto}");
            }
        }
        for r in &self.roots {
            s.push_str(&digits(r));
            s.push('\n');
        }
        s
    }

    fn store(&self, path: &Path) -> Result<()> {
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, self.render())?;
        fs::rename(&tmp, path)?;
        Ok(())
    }

    fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        Frontier::parse(&text)
    }

    fn parse(text: &str) -> Result<Self> {
        let bad = |m: &str| Error::InvalidInput(format!("malformed search frontier: {m}"));
        let mut lines = text.lines();
        if lines.next() != Some(FRONTIER_MAGIC) {
            return Err(bad("missing header"));
        }
        let mut fields = std::collections::HashMap::new();
        let mut roots = Vec::new();
        for line in lines {
            if let Some(rest) = line.strip_prefix('#') {
                for kv in rest.split_whitespace() {
                    if let Some((k, v)) = kv.split_once('=') {
                        fields.insert(k.to_string(), v.to_string());
                    }
                }
            } else if !line.trim().is_empty() {
                let root: Vec<u8> = line
                    .trim()
                    .bytes()
                    .map(|b| if b.is_ascii_digit() { Ok(b - b'0') } else { Err(bad("non-digit root")) })
                    .collect::<Result<_>>()?;
                roots.push(root);
            }
        }
        let get = |k: &str| fields.get(k).cloned().ok_or_else(|| bad(&format!("missing {k}")));
        let num = |k: &str| -> Result<usize> { get(k)?.parse().map_err(|_| bad(k)) };
        let status = match get("status")?.as_str() {
            "running" => Status::Running,
            "found" => Status::Found(Word::parse(&get("word")?)?),
            "exhausted" => Status::Exhausted(num("upto")?),
            other => return Err(bad(other)),
        };
        Ok(Frontier {
            constraint: get("constraint")?.parse()?,
            alphabet: u8::try_from(num("alphabet")?).map_err(|_| bad("alphabet"))?,
            target: num("nnp")?,
            length: num("length")?,
            status,
            roots,
        })
    }

    fn check_matches(&self, search: &Search) -> Result<()> {
        if self.constraint != search.constraint || self.alphabet != search.alphabet || self.target != search.target {
            return Err(Error::InvalidInput(format!(
                "checkpoint is for {} alphabet={} nnp={}",
                self.constraint, self.alphabet, self.target
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words;

    /// Brute force: every word of each length in lexicographic order.
    fn brute(constraint: Constraint, alphabet: u8, p: usize, max_len: usize) -> Option<Vec<u8>> {
        for len in 1..=max_len {
            let total = (alphabet as u64).pow(len as u32);
            for code in 0..total {
                let mut w = vec![0u8; len];
                let mut c = code;
                for i in (0..len).rev() {
                    w[i] = (c % alphabet as u64) as u8;
                    c /= alphabet as u64;
                }
                if constraint.find(&w).is_none() && words::nnp(&w).unwrap() == p {
                    return Some(w);
                }
            }
        }
        None
    }

    #[test]
    fn small_targets_match_brute_force() {
        for p in 0..=2 {
            let fast = shortest_with_nnp(Constraint::OverlapFree, 2, p, 12).unwrap();
            assert_eq!(fast.map(|w| w.into_symbols()), brute(Constraint::OverlapFree, 2, p, 12), "f({p})");
            let fast = shortest_with_nnp(Constraint::SquareFree, 3, p, 9).unwrap();
            assert_eq!(fast.map(|w| w.into_symbols()), brute(Constraint::SquareFree, 3, p, 9), "g({p})");
        }
    }

    #[test]
    fn known_values() {
        let f1 = shortest_with_nnp(Constraint::OverlapFree, 2, 1, 10).unwrap().unwrap();
        assert_eq!(f1.to_string(), "00");
        let f2 = shortest_with_nnp(Constraint::OverlapFree, 2, 2, 10).unwrap().unwrap();
        assert_eq!(f2.to_string(), "00100");
        assert_eq!(shortest_with_nnp(Constraint::SquareFree, 3, 0, 5).unwrap().unwrap().len(), 1);
        assert_eq!(shortest_with_nnp(Constraint::SquareFree, 3, 3, 30).unwrap().unwrap().len(), 23);
    }

    #[test]
    fn absence_within_bound_is_none() {
        assert_eq!(shortest_with_nnp(Constraint::SquareFree, 3, 3, 20).unwrap(), None);
        // binary squarefree words have length <= 3
        assert_eq!(shortest_with_nnp(Constraint::SquareFree, 2, 2, 12).unwrap(), None);
    }

    #[test]
    fn budget_is_reported_distinctly() {
        let err = Search::new(Constraint::SquareFree, 3, 3, 30).budget(50).run().unwrap_err();
        assert!(matches!(err, Error::BudgetExhausted { .. }));
    }

    #[test]
    fn frontier_roundtrip() {
        let f = Frontier {
            constraint: Constraint::SquareFree,
            alphabet: 3,
            target: 4,
            length: 47,
            status: Status::Running,
            roots: vec![vec![0, 1, 0, 2], vec![0, 1, 2, 0]],
        };
        assert_eq!(Frontier::parse(&f.render()).unwrap(), f);
        assert!(Frontier::parse("junk").is_err());
    }
}
