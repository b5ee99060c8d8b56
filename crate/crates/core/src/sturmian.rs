//! Characteristic Sturmian words and the periods of their prefixes.
//!
//! `Y_n` is the length-`n` prefix of the characteristic word of slope
//! `alpha = [0; a_1, a_2, ...]` (0-based positions: `Y_n = x[0..n]`, where
//! `x[i]` is the classical 1-based symbol `x_{i+1}`). The period set of
//! `Y_n` is read off the lazy Ostrowski representation of `n`.

use crate::error::{Error, Result};
use crate::numeration::{ContinuedFraction, OstrowskiRep, OstrowskiSystem};
use crate::rational::ExactRational;
use crate::words::{PeriodSet, Word};

/// A slope together with its standard words `X_0, X_1, ...` (`|X_i| = q_i`)
/// cached up to a fixed capacity.
#[derive(Clone, Debug)]
pub struct SturmianContext {
    system: OstrowskiSystem,
    standard: Vec<Word>,
    capacity: usize,
}

impl SturmianContext {
    /// Builds standard words until one has length `>= capacity`, so any
    /// prefix of length `<= capacity` can be produced.
    pub fn new(cf: ContinuedFraction, capacity: usize) -> Result<Self> {
        let system = OstrowskiSystem::new(cf);
        let a1 = system.a(1)?;
        // s_{-1} = 1, s_0 = 0, s_1 = 0^{a_1 - 1} 1, s_i = s_{i-1}^{a_i} s_{i-2}
        let s0 = vec![0u8];
        let mut s1 = vec![0u8; (a1 - 1) as usize];
        s1.push(1);
        let x0 = if a1 >= 2 { s0.clone() } else { vec![1u8] };
        let mut standard = vec![Word::new(x0, 2)?];
        let (mut older, mut newer) = (s0, s1);
        let mut i = 1;
        loop {
            standard.push(Word::new(newer.clone(), 2)?);
            if newer.len() >= capacity.max(1) {
                break;
            }
            i += 1;
            let a = system.a(i).map_err(|_| Error::CoverageExhausted {
                needed: capacity as u64,
                available: i - 1,
            })?;
            let reps = usize::try_from(a).map_err(|_| Error::Overflow("standard word"))?;
            let len = newer
                .len()
                .checked_mul(reps)
                .and_then(|x| x.checked_add(older.len()))
                .ok_or(Error::Overflow("standard word"))?;
            let mut next = Vec::with_capacity(len);
            for _ in 0..reps {
                next.extend_from_slice(&newer);
            }
            next.extend_from_slice(&older);
            older = std::mem::replace(&mut newer, next);
        }
        Ok(SturmianContext {
            system,
            standard,
            capacity,
        })
    }

    pub fn fibonacci(capacity: usize) -> Result<Self> {
        SturmianContext::new(ContinuedFraction::fibonacci(), capacity)
    }

    pub fn system(&self) -> &OstrowskiSystem {
        &self.system
    }

    pub fn cf(&self) -> &ContinuedFraction {
        self.system.cf()
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    /// Standard words built so far.
    pub fn standard_words(&self) -> &[Word] {
        &self.standard
    }

    pub fn standard_word(&self, i: usize) -> Result<&Word> {
        self.standard.get(i).ok_or(Error::CoverageExhausted {
            needed: i as u64,
            available: self.standard.len(),
        })
    }

    fn check_capacity(&self, n: usize) -> Result<()> {
        if n == 0 {
            return Err(Error::InvalidInput("prefix length must be >= 1".into()));
        }
        if n > self.capacity {
            return Err(Error::CoverageExhausted {
                needed: n as u64,
                available: self.capacity,
            });
        }
        Ok(())
    }

    /// `Y_n = X_t^{d_t} ... X_0^{d_0}` from the lazy representation of `n`.
    pub fn characteristic_prefix(&self, n: usize) -> Result<Word> {
        self.check_capacity(n)?;
        let rep = self.system.lazy_encode(n as u64)?;
        let mut out = Vec::with_capacity(n);
        for i in (0..rep.len()).rev() {
            let x = self.standard_word(i)?;
            for _ in 0..rep.digit(i) {
                out.extend_from_slice(x);
            }
        }
        if out.len() != n {
            return Err(Error::Mismatch(format!("factorisation produced {} symbols for n = {n}", out.len())));
        }
        Word::new(out, 2)
    }

    /// `Y_n` as a prefix of the last cached standard word.
    pub fn prefix_from_standard(&self, n: usize) -> Result<Word> {
        self.check_capacity(n)?;
        Ok(self.standard.last().expect("at least X_0").prefix(n))
    }

    /// `Y_n` from `x_i = floor((i+1) alpha) - floor(i alpha)`, with `alpha`
    /// replaced by a convergent `p_k / q_k` where `q_k > n + 1`. For
    /// `i < q_k`, `i p_k / q_k` is not an integer and lies within
    /// `1 / q_k` of `i alpha`, so the floors agree.
    pub fn prefix_from_floor(&self, n: usize) -> Result<Word> {
        if n == 0 {
            return Err(Error::InvalidInput("prefix length must be >= 1".into()));
        }
        let cf = self.cf();
        let (mut p_prev, mut q_prev) = (1u128, 0u128);
        let (mut p, mut q) = (0u128, 1u128);
        let mut k = 1;
        while q <= n as u128 + 1 {
            match cf.term(k) {
                Some(a) => {
                    let a = a as u128;
                    let (p_next, q_next) = (a * p + p_prev, a * q + q_prev);
                    (p_prev, q_prev, p, q) = (p, q, p_next, q_next);
                    if q > u64::MAX as u128 {
                        return Err(Error::Overflow("floor-formula convergent"));
                    }
                    k += 1;
                }
                // rational slope: p / q is exact
                None => break,
            }
        }
        let floor = |i: u128| (i * p) / q;
        let out = (1..=n as u128).map(|i| (floor(i + 1) - floor(i)) as u8).collect();
        Word::new(out, 2)
    }

    pub fn lazy_rep(&self, n: u64) -> Result<OstrowskiRep> {
        self.system.lazy_encode(n)
    }

    /// `{ e q_j + sum_{j < i <= t} d_i q_i : 1 <= e <= d_j, 0 <= j <= t }`.
    pub fn period_set_formula(&self, n: u64) -> Result<PeriodSet> {
        let rep = self.system.lazy_encode(n)?;
        let mut periods = Vec::with_capacity(rep.digit_sum() as usize);
        let mut base = 0u64;
        for j in (0..rep.len()).rev() {
            let q = self.system.q(j)?;
            for e in 1..=rep.digit(j) {
                periods.push((base + e * q) as usize);
            }
            base += rep.digit(j) * q;
        }
        Ok(PeriodSet::from_periods(periods, n as usize, true))
    }

    /// Number of periods of `Y_n`, trivial period included.
    pub fn count_periods(&self, n: u64) -> Result<u64> {
        Ok(self.system.lazy_encode(n)?.digit_sum())
    }

    /// `q_t`, where `t + 1` is the length of the lazy representation of `n`.
    pub fn least_period(&self, n: u64) -> Result<u64> {
        let rep = self.system.lazy_encode(n)?;
        self.system.q(rep.t())
    }
}

/// `F_k` with `F_0 = 0`, `F_1 = F_2 = 1`.
pub fn fib(k: u32) -> Result<u64> {
    let (mut a, mut b) = (0u64, 1u64);
    for _ in 0..k {
        let next = a.checked_add(b).ok_or(Error::Overflow("Fibonacci number"))?;
        a = b;
        b = next;
    }
    Ok(a)
}

/// Length of the shortest prefix of the Fibonacci word with exactly `k`
/// periods (trivial included): `F_{k+3} - 2`.
pub fn fib_shortest_prefix_with(k: u32) -> Result<u64> {
    if k == 0 {
        return Err(Error::InvalidInput("period count must be >= 1".into()));
    }
    Ok(fib(k + 3)? - 2)
}

/// Length of the longest such prefix: `F_{2k+2} - 1`.
pub fn fib_longest_prefix_with(k: u32) -> Result<u64> {
    if k == 0 {
        return Err(Error::InvalidInput("period count must be >= 1".into()));
    }
    Ok(fib(2 * k + 2)? - 1)
}

/// Least period of `f[0..m]`: `F_j` for the `j >= 2` with
/// `F_{j+1} - 1 <= m <= F_{j+2} - 2`.
pub fn fib_least_period(m: u64) -> Result<u64> {
    if m == 0 {
        return Err(Error::InvalidInput("prefix length must be >= 1".into()));
    }
    for j in 2..92 {
        let lo = fib(j + 1)? - 1;
        let hi = fib(j + 2)? - 2;
        if lo <= m && m <= hi {
            return fib(j);
        }
    }
    Err(Error::Overflow("Fibonacci window"))
}

/// `g_s`: the prefix of length `F_{s+2} - 2` of the Fibonacci word.
pub fn g_word(s: u32) -> Result<Word> {
    if s < 2 {
        return Err(Error::InvalidInput("g_s needs s >= 2".into()));
    }
    let len = usize::try_from(fib(s + 2)? - 2).map_err(|_| Error::Overflow("g_s"))?;
    SturmianContext::fibonacci(len)?.prefix_from_standard(len)
}

/// `ice(g_s) = (F_{s+2} - 2) / F_s`.
pub fn g_ice(s: u32) -> Result<ExactRational> {
    if s < 2 {
        return Err(Error::InvalidInput("g_s needs s >= 2".into()));
    }
    ExactRational::new(fib(s + 2)? - 2, fib(s)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words;

    #[test]
    fn silver_prefix() {
        let ctx = SturmianContext::new(ContinuedFraction::silver(), 64).unwrap();
        assert_eq!(ctx.prefix_from_floor(5).unwrap().to_string(), "01010");
        assert_eq!(ctx.characteristic_prefix(5).unwrap().to_string(), "01010");
    }

    #[test]
    fn fibonacci_prefix() {
        let ctx = SturmianContext::fibonacci(100).unwrap();
        let y = ctx.characteristic_prefix(10).unwrap();
        assert_eq!(y.to_string(), "0100101001");
        assert!(y.to_string().starts_with("01001010"));
        assert_eq!(ctx.prefix_from_floor(10).unwrap(), y);
        let q1 = ctx.system().q(1).unwrap() as usize;
        assert_eq!(&ctx.characteristic_prefix(q1).unwrap(), ctx.standard_word(1).unwrap());
    }

    #[test]
    fn slope_above_one_half() {
        let ctx = SturmianContext::new("(1,2)".parse().unwrap(), 200).unwrap();
        for n in 1..=200 {
            assert_eq!(ctx.characteristic_prefix(n).unwrap(), ctx.prefix_from_floor(n).unwrap(), "n = {n}");
        }
    }

    #[test]
    fn period_sets() {
        let ctx = SturmianContext::fibonacci(100).unwrap();
        assert_eq!(ctx.period_set_formula(10).unwrap().as_slice(), &[5, 8, 10]);
        assert_eq!(ctx.period_set_formula(5).unwrap().as_slice(), &[3, 5]);
        assert_eq!(words::periods(&ctx.characteristic_prefix(5).unwrap(), true).unwrap().as_slice(), &[3, 5]);
        assert_eq!(ctx.period_set_formula(1).unwrap().as_slice(), &[1]);
        assert_eq!(ctx.count_periods(10).unwrap(), 3);
        assert_eq!(ctx.least_period(10).unwrap(), 5);
    }

    #[test]
    fn silver_counts() {
        let ctx = SturmianContext::new(ContinuedFraction::silver(), 64).unwrap();
        assert_eq!(ctx.count_periods(17).unwrap(), 4);
        assert_eq!(ctx.count_periods(1).unwrap(), 1);
        assert_eq!(ctx.least_period(15).unwrap(), 5);
        assert_eq!(words::per(&ctx.characteristic_prefix(15).unwrap()).unwrap(), 5);
    }

    #[test]
    fn fibonacci_closed_forms() {
        assert_eq!(fib(6).unwrap(), 8);
        assert_eq!(fib_shortest_prefix_with(1).unwrap(), 1);
        assert_eq!(fib_longest_prefix_with(1).unwrap(), 2);
        assert_eq!(fib_shortest_prefix_with(2).unwrap(), 3);
        assert_eq!(fib_shortest_prefix_with(3).unwrap(), 6);
        assert_eq!(fib_longest_prefix_with(3).unwrap(), 20);
        assert_eq!(fib_least_period(7).unwrap(), 5);
        assert_eq!(fib_least_period(12).unwrap(), 8);
        assert_eq!(fib_least_period(2).unwrap(), 2);
        assert!(fib(100).is_err());
    }

    #[test]
    fn g_words() {
        assert_eq!(g_word(2).unwrap().to_string(), "0");
        assert_eq!(g_word(3).unwrap().to_string(), "010");
        assert_eq!(g_word(4).unwrap().to_string(), "010010");
        for s in 2..=12 {
            let g = g_word(s).unwrap();
            assert_eq!(words::nnp(&g).unwrap(), s as usize - 2);
            assert_eq!(words::ice(&g).unwrap().value, g_ice(s).unwrap());
        }
    }

    #[test]
    fn capacity_is_enforced() {
        let ctx = SturmianContext::fibonacci(10).unwrap();
        assert!(matches!(ctx.characteristic_prefix(14), Err(Error::CoverageExhausted { .. })));
        assert!(ctx.characteristic_prefix(0).is_err());
    }
}
