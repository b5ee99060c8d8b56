//! Continued fractions, convergents and Ostrowski numeration.
//!
//! For `alpha = [0; a_1, a_2, ...]` the place values are the convergent
//! denominators `q_0 = 1`, `q_1 = a_1`, `q_i = a_i q_{i-1} + q_{i-2}`.
//! A representation is a digit string `d_t ... d_0` (most significant
//! first) with `n = sum d_i q_i`.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Partial quotients `a_1, a_2, ...` of a number in `(0, 1)`: a finite
/// preperiod followed by an optional repeating period.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ContinuedFraction {
    preperiod: Vec<u64>,
    period: Vec<u64>,
}

impl ContinuedFraction {
    pub fn new(preperiod: Vec<u64>, period: Vec<u64>) -> Result<Self> {
        if preperiod.is_empty() && period.is_empty() {
            return Err(Error::InvalidInput("continued fraction needs at least one partial quotient".into()));
        }
        if preperiod.iter().chain(&period).any(|&a| a == 0) {
            return Err(Error::InvalidInput("partial quotients must be >= 1".into()));
        }
        Ok(ContinuedFraction { preperiod, period })
    }

    /// `[0; 2, 2, 2, ...] = sqrt(2) - 1`.
    pub fn silver() -> Self {
        ContinuedFraction {
            preperiod: vec![],
            period: vec![2],
        }
    }

    /// `[0; 2, 1, 1, ...] = (3 - sqrt(5)) / 2`, the slope of the Fibonacci word.
    pub fn fibonacci() -> Self {
        ContinuedFraction {
            preperiod: vec![2],
            period: vec![1],
        }
    }

    /// `a_i` for `i >= 1`, or `None` past the end of a finite expansion.
    pub fn term(&self, i: usize) -> Option<u64> {
        if i == 0 {
            return None;
        }
        let k = i - 1;
        if k < self.preperiod.len() {
            Some(self.preperiod[k])
        } else if self.period.is_empty() {
            None
        } else {
            Some(self.period[(k - self.preperiod.len()) % self.period.len()])
        }
    }

    pub fn is_finite(&self) -> bool {
        self.period.is_empty()
    }

    /// Number of partial quotients, `None` when infinite.
    pub fn finite_len(&self) -> Option<usize> {
        self.is_finite().then_some(self.preperiod.len())
    }
}

impl fmt::Display for ContinuedFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pre: Vec<String> = self.preperiod.iter().map(u64::to_string).collect();
        let per: Vec<String> = self.period.iter().map(u64::to_string).collect();
        match (pre.is_empty(), per.is_empty()) {
            (_, true) => write!(f, "{}", pre.join(",")),
            (true, false) => write!(f, "({})", per.join(",")),
            (false, false) => write!(f, "{},({})", pre.join(","), per.join(",")),
        }
    }
}

/// Syntax `a1,a2,(p1,p2)`: parentheses mark the repeating tail.
impl FromStr for ContinuedFraction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidInput(format!("cannot parse continued fraction {s:?}"));
        let s = s.trim().trim_start_matches('[').trim_end_matches(']');
        let s = s.strip_prefix("0;").unwrap_or(s);
        let (pre, per) = match s.find('(') {
            Some(open) => {
                let close = s.rfind(')').ok_or_else(bad)?;
                if close != s.len() - 1 || close < open {
                    return Err(bad());
                }
                (&s[..open], &s[open + 1..close])
            }
            None => (s, ""),
        };
        let list = |part: &str| -> Result<Vec<u64>> {
            part.split([',', ';'])
                .map(str::trim)
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<u64>().map_err(|_| bad()))
                .collect()
        };
        ContinuedFraction::new(list(pre)?, list(per)?)
    }
}

/// Parallel sequences `p_i`, `q_i` for `i >= 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Convergents {
    pub p: Vec<u64>,
    pub q: Vec<u64>,
}

/// Convergents up to the first `t >= 1` with `q_t + q_{t-1} - 2 >= upto_value`.
pub fn convergents(cf: &ContinuedFraction, upto_value: u64) -> Result<Convergents> {
    if upto_value == 0 {
        return Err(Error::InvalidInput("upto_value must be >= 1".into()));
    }
    let (mut p, mut q) = (vec![0u64], vec![1u64]);
    let (mut p_prev, mut q_prev) = (1u64, 0u64);
    let mut i = 1;
    loop {
        let a = cf.term(i).ok_or(Error::CoverageExhausted {
            needed: upto_value,
            available: i - 1,
        })?;
        let next = |cur: u64, prev: u64| a.checked_mul(cur).and_then(|x| x.checked_add(prev)).ok_or(Error::Overflow("convergents"));
        let p_i = next(p[i - 1], p_prev)?;
        let q_i = next(q[i - 1], q_prev)?;
        p_prev = p[i - 1];
        q_prev = q[i - 1];
        p.push(p_i);
        q.push(q_i);
        if q_i as u128 + q[i - 1] as u128 >= upto_value as u128 + 2 {
            return Ok(Convergents { p, q });
        }
        i += 1;
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    Ordinary,
    Lazy,
}

/// Digits `d_t ... d_0`, most significant first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OstrowskiRep {
    digits: Vec<u64>,
    flavor: Flavor,
}

impl OstrowskiRep {
    pub fn new(digits: Vec<u64>, flavor: Flavor) -> Self {
        OstrowskiRep { digits, flavor }
    }

    /// Accepts plain digits and bracketed multi-digit values, e.g. `1[12]0`.
    pub fn parse(text: &str, flavor: Flavor) -> Result<Self> {
        let bad = || Error::InvalidInput(format!("cannot parse digit string {text:?}"));
        let mut digits = Vec::new();
        let mut chars = text.trim().chars();
        while let Some(c) = chars.next() {
            if let Some(d) = c.to_digit(10) {
                digits.push(d as u64);
            } else if c == '[' {
                let inner: String = chars.by_ref().take_while(|&c| c != ']').collect();
                digits.push(inner.parse().map_err(|_| bad())?);
            } else {
                return Err(bad());
            }
        }
        if digits.is_empty() {
            return Err(bad());
        }
        Ok(OstrowskiRep { digits, flavor })
    }

    pub fn digits(&self) -> &[u64] {
        &self.digits
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    /// Index of the most significant digit.
    pub fn t(&self) -> usize {
        self.digits.len() - 1
    }

    /// `d_i`, counting from the least significant digit; 0 beyond the top.
    pub fn digit(&self, i: usize) -> u64 {
        if i < self.digits.len() {
            self.digits[self.digits.len() - 1 - i]
        } else {
            0
        }
    }

    pub fn digit_sum(&self) -> u64 {
        self.digits.iter().sum()
    }

    /// The representation made of digits `d_i ... d_0`.
    pub fn low_part(&self, i: usize) -> OstrowskiRep {
        let k = self.digits.len() - (i + 1).min(self.digits.len());
        OstrowskiRep {
            digits: self.digits[k..].to_vec(),
            flavor: self.flavor,
        }
    }
}

impl fmt::Display for OstrowskiRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &d in &self.digits {
            if d < 10 {
                write!(f, "{d}")?;
            } else {
                write!(f, "[{d}]")?;
            }
        }
        Ok(())
    }
}

impl Serialize for OstrowskiRep {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Pass/fail of each digit condition. (a)-(c) define the ordinary
/// representation, (d)-(g) the lazy one; `legal` is `0 <= d_i <= a_{i+1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionReport {
    pub leading_nonzero: bool,
    pub a: bool,
    pub b: bool,
    pub c: bool,
    pub d: bool,
    pub e: bool,
    pub f: bool,
    pub g: bool,
    pub legal: bool,
}

impl ConditionReport {
    pub fn ordinary(&self) -> bool {
        self.leading_nonzero && self.a && self.b && self.c
    }

    pub fn lazy(&self) -> bool {
        self.leading_nonzero && self.d && self.e && self.f && self.g
    }
}

/// An Ostrowski system: a continued fraction with its place values,
/// computed once up to the largest `q_i` that fits in a `u64`.
#[derive(Clone, Debug)]
pub struct OstrowskiSystem {
    cf: ContinuedFraction,
    q: Vec<u64>,
    /// true when the next place value exists but exceeds `u64::MAX`
    open_ended: bool,
}

impl OstrowskiSystem {
    pub fn new(cf: ContinuedFraction) -> Self {
        let mut q = vec![1u64];
        let mut q_prev = 0u64;
        let mut open_ended = false;
        let mut i = 1;
        while let Some(a) = cf.term(i) {
            match a.checked_mul(q[i - 1]).and_then(|x| x.checked_add(q_prev)) {
                Some(next) => {
                    q_prev = q[i - 1];
                    q.push(next);
                }
                None => {
                    open_ended = true;
                    break;
                }
            }
            i += 1;
        }
        OstrowskiSystem { cf, q, open_ended }
    }

    pub fn cf(&self) -> &ContinuedFraction {
        &self.cf
    }

    pub fn place_values(&self) -> &[u64] {
        &self.q
    }

    /// `a_i`; digit caps read `a_{i+1}`.
    pub fn a(&self, i: usize) -> Result<u64> {
        self.cf.term(i).ok_or(Error::CoverageExhausted {
            needed: i as u64,
            available: i - 1,
        })
    }

    /// `q_i` if it fits, `None` if it exists but overflows, error if the
    /// expansion has ended.
    fn q_ext(&self, i: usize) -> Result<Option<u64>> {
        if i < self.q.len() {
            Ok(Some(self.q[i]))
        } else if self.open_ended {
            Ok(None)
        } else {
            Err(Error::CoverageExhausted {
                needed: i as u64,
                available: self.q.len(),
            })
        }
    }

    pub fn q(&self, i: usize) -> Result<u64> {
        self.q_ext(i)?.ok_or(Error::Overflow("place value"))
    }

    fn coverage(&self, n: u64) -> Error {
        Error::CoverageExhausted {
            needed: n,
            available: self.q.len().saturating_sub(1),
        }
    }

    /// Greedy (ordinary) representation.
    pub fn encode(&self, n: u64) -> Result<OstrowskiRep> {
        if n == 0 {
            return Err(Error::InvalidInput("n must be >= 1".into()));
        }
        // largest t with q_t <= n, and q_{t+1} > n must be known
        let mut t = 0;
        loop {
            match self.q_ext(t + 1) {
                Ok(Some(q)) if q <= n => t += 1,
                Ok(_) => break,
                Err(_) => return Err(self.coverage(n)),
            }
        }
        let mut rem = n;
        let mut digits = Vec::with_capacity(t + 1);
        for i in (0..=t).rev() {
            let q = self.q[i];
            digits.push(rem / q);
            rem %= q;
        }
        Ok(OstrowskiRep::new(digits, Flavor::Ordinary))
    }

    /// `L_i = q_{i+1} + q_i - 2`: the largest value carried by digits `0..=i`
    /// of a lazy representation (`L_0 = a_1 - 1`). `None` if beyond `u64`.
    fn lazy_max(&self, i: usize) -> Result<Option<u128>> {
        match (self.q_ext(i + 1)?, self.q_ext(i)?) {
            (Some(hi), Some(lo)) => Ok(Some(hi as u128 + lo as u128 - 2)),
            _ => Ok(None),
        }
    }

    /// Lazy representation: the smallest `t` with `L_t >= n`, then from the
    /// top each digit is the least value leaving a remainder that the lower
    /// digits can still carry.
    pub fn lazy_encode(&self, n: u64) -> Result<OstrowskiRep> {
        if n == 0 {
            return Err(Error::InvalidInput("n must be >= 1".into()));
        }
        let mut t = 0;
        loop {
            match self.lazy_max(t) {
                Ok(Some(max)) if max < n as u128 => t += 1,
                Ok(_) => break,
                Err(_) => return Err(self.coverage(n)),
            }
        }
        let mut rem = n as u128;
        let mut digits = Vec::with_capacity(t + 1);
        for i in (0..=t).rev() {
            let below = if i == 0 { 0 } else { self.lazy_max(i - 1)?.unwrap_or(u128::MAX) };
            let q = self.q[i] as u128;
            let cap = if i == 0 { self.a(1)? - 1 } else { self.a(i + 1)? } as u128;
            let d = if rem > below { (rem - below).div_ceil(q) } else { 0 }.min(cap);
            rem -= d * q;
            digits.push(d as u64);
        }
        if rem != 0 {
            return Err(Error::Mismatch(format!("lazy encoding of {n} left remainder {rem}")));
        }
        Ok(OstrowskiRep::new(digits, Flavor::Lazy))
    }

    pub fn decode(&self, rep: &OstrowskiRep) -> Result<u64> {
        let mut total = 0u64;
        for i in 0..rep.len() {
            let term = rep.digit(i).checked_mul(self.q(i)?).ok_or(Error::Overflow("decode"))?;
            total = total.checked_add(term).ok_or(Error::Overflow("decode"))?;
        }
        Ok(total)
    }

    pub fn check(&self, rep: &OstrowskiRep) -> Result<ConditionReport> {
        let t = rep.t();
        let d = |i: usize| rep.digit(i);
        let a1 = self.a(1)?;
        let caps_ok = (1..=t).map(|i| self.a(i + 1).map(|cap| d(i) <= cap)).collect::<Result<Vec<_>>>()?;
        let below_cap = caps_ok.iter().all(|&ok| ok);
        let mut c = true;
        for i in 1..=t {
            if d(i) == self.a(i + 1)? && d(i - 1) != 0 {
                c = false;
            }
        }
        let mut f = true;
        for i in 2..=t {
            if d(i) == 0 && d(i - 1) != self.a(i)? {
                f = false;
            }
        }
        Ok(ConditionReport {
            leading_nonzero: d(t) > 0,
            a: d(0) < a1,
            b: below_cap,
            c,
            d: d(0) < a1,
            e: below_cap,
            f,
            g: t == 0 || condition_g(d(1), d(0), a1),
            legal: d(0) <= a1 && below_cap,
        })
    }

    /// `(q_t + q_{t-1} - 1, q_{t+1} + q_t - 2)`, with `q_{-1} = 0`.
    pub fn lazy_length_bounds(&self, t: usize) -> Result<(u64, u64)> {
        let prev = if t == 0 { 0 } else { self.q(t - 1)? };
        let lo = (self.q(t)? + prev).checked_sub(1).ok_or(Error::Overflow("lazy window"))?;
        let hi = self
            .q(t + 1)?
            .checked_add(self.q(t)?)
            .and_then(|x| x.checked_sub(2))
            .ok_or(Error::Overflow("lazy window"))?;
        Ok((lo, hi))
    }
}

/// Condition (g): if `d_1 = 0` then `d_0 = a_1 - 1`. The source prints the
/// subscript as `a_i`; only `a_1` makes sense at this position.
fn condition_g(d1: u64, d0: u64, a1: u64) -> bool {
    d1 != 0 || d0 == a1 - 1
}

pub fn ostrowski_encode(n: u64, cf: &ContinuedFraction) -> Result<OstrowskiRep> {
    OstrowskiSystem::new(cf.clone()).encode(n)
}

pub fn lazy_encode(n: u64, cf: &ContinuedFraction) -> Result<OstrowskiRep> {
    OstrowskiSystem::new(cf.clone()).lazy_encode(n)
}

pub fn decode(rep: &OstrowskiRep, cf: &ContinuedFraction) -> Result<u64> {
    OstrowskiSystem::new(cf.clone()).decode(rep)
}

/// Zeckendorf digits over the place values `1, 2, 3, 5, 8, ...`.
pub fn zeckendorf(n: u64) -> Result<Vec<u64>> {
    Ok(OstrowskiSystem::new(ContinuedFraction::fibonacci()).encode(n)?.digits().to_vec())
}

/// Lazy Fibonacci digits over `1, 2, 3, 5, 8, ...`; never two consecutive zeros.
pub fn lazy_fib(n: u64) -> Result<Vec<u64>> {
    Ok(OstrowskiSystem::new(ContinuedFraction::fibonacci()).lazy_encode(n)?.digits().to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn silver() -> OstrowskiSystem {
        OstrowskiSystem::new(ContinuedFraction::silver())
    }

    #[test]
    fn parses_cf_syntax() {
        let cf: ContinuedFraction = "2,(1)".parse().unwrap();
        assert_eq!(cf, ContinuedFraction::fibonacci());
        assert_eq!(cf.to_string(), "2,(1)");
        assert_eq!("(2)".parse::<ContinuedFraction>().unwrap(), ContinuedFraction::silver());
        assert_eq!("[0;1,(2,1)]".parse::<ContinuedFraction>().unwrap().term(4), Some(2));
        let fin: ContinuedFraction = "3,1,4".parse().unwrap();
        assert!(fin.is_finite());
        assert_eq!(fin.term(4), None);
        assert!("2,0".parse::<ContinuedFraction>().is_err());
        assert!("2,(1".parse::<ContinuedFraction>().is_err());
        assert!("".parse::<ContinuedFraction>().is_err());
    }

    #[test]
    fn convergent_denominators() {
        let c = convergents(&ContinuedFraction::silver(), 60).unwrap();
        assert_eq!(&c.q[..5], &[1, 2, 5, 12, 29]);
        assert_eq!(&c.p[..4], &[0, 1, 2, 5]);
        let f = convergents(&ContinuedFraction::fibonacci(), 30).unwrap();
        assert_eq!(&f.q[..6], &[1, 2, 3, 5, 8, 13]);
        let ones = convergents(&"(1)".parse().unwrap(), 5).unwrap();
        assert_eq!(&ones.q[..5], &[1, 1, 2, 3, 5]);
        let fin = convergents(&"2,2".parse().unwrap(), 100);
        assert!(matches!(fin, Err(Error::CoverageExhausted { .. })));
    }

    #[test]
    fn silver_table_rows() {
        let sys = silver();
        for (n, ord, lazy) in [(5, "100", "21"), (17, "1100", "1021"), (24, "2000", "1210"), (15, "1011", "221")] {
            assert_eq!(sys.encode(n).unwrap().to_string(), ord);
            assert_eq!(sys.lazy_encode(n).unwrap().to_string(), lazy);
        }
    }

    #[test]
    fn decode_examples() {
        let sys = silver();
        assert_eq!(sys.decode(&OstrowskiRep::parse("21", Flavor::Lazy).unwrap()).unwrap(), 5);
        assert_eq!(sys.decode(&OstrowskiRep::parse("1", Flavor::Lazy).unwrap()).unwrap(), 1);
        let fib = OstrowskiSystem::new(ContinuedFraction::fibonacci());
        assert_eq!(fib.decode(&OstrowskiRep::parse("1110", Flavor::Lazy).unwrap()).unwrap(), 10);
    }

    #[test]
    fn condition_checks() {
        let sys = silver();
        let r = sys.check(&OstrowskiRep::parse("1100", Flavor::Ordinary).unwrap()).unwrap();
        assert!(r.a && r.b && r.c && r.ordinary());
        // d_0 = 2 is not below a_1 = 2
        assert!(!sys.check(&OstrowskiRep::parse("12", Flavor::Ordinary).unwrap()).unwrap().a);
        // d_1 = 0 forces d_0 = a_1 - 1 = 1 in the lazy system
        let g = sys.check(&OstrowskiRep::parse("100", Flavor::Lazy).unwrap()).unwrap();
        assert!(!g.g && !g.lazy());
        // d_2 = 0 forces d_1 = a_2 = 2
        let f = sys.check(&OstrowskiRep::parse("1001", Flavor::Lazy).unwrap()).unwrap();
        assert!(!f.f);
        assert!(sys.check(&OstrowskiRep::parse("101", Flavor::Lazy).unwrap()).unwrap().lazy());
        assert!(!sys.check(&OstrowskiRep::parse("30", Flavor::Lazy).unwrap()).unwrap().legal);
    }

    #[test]
    fn lazy_windows() {
        let sys = silver();
        assert_eq!(sys.lazy_length_bounds(2).unwrap(), (6, 15));
        assert_eq!(sys.lazy_length_bounds(3).unwrap(), (16, 39));
        assert_eq!(sys.lazy_length_bounds(0).unwrap(), (0, 1));
    }

    #[test]
    fn digit_sums() {
        let sys = silver();
        assert_eq!(sys.lazy_encode(17).unwrap().digit_sum(), 4);
        assert_eq!(sys.lazy_encode(15).unwrap().digit_sum(), 5);
        assert_eq!(sys.lazy_encode(1).unwrap().digit_sum(), 1);
    }

    #[test]
    fn fibonacci_specialisations() {
        // 10 = 8 + 2
        assert_eq!(zeckendorf(10).unwrap(), vec![1, 0, 0, 1, 0]);
        // 10 = 5 + 3 + 2
        assert_eq!(lazy_fib(10).unwrap(), vec![1, 1, 1, 0]);
        assert_eq!(lazy_fib(1).unwrap(), vec![1]);
    }

    #[test]
    fn bracketed_digits() {
        let r = OstrowskiRep::parse("1[12]0", Flavor::Ordinary).unwrap();
        assert_eq!(r.digits(), &[1, 12, 0]);
        assert_eq!(r.to_string(), "1[12]0");
        assert!(OstrowskiRep::parse("1x", Flavor::Ordinary).is_err());
    }

    #[test]
    fn finite_expansion_reports_coverage() {
        let sys = OstrowskiSystem::new("2,2".parse().unwrap());
        assert!(sys.encode(4).is_ok());
        assert!(matches!(sys.encode(5), Err(Error::CoverageExhausted { .. })));
        assert!(matches!(sys.lazy_encode(50), Err(Error::CoverageExhausted { .. })));
    }
}
