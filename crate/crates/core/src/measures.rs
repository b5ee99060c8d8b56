//! The nontrivial-period inequality, expectations over random words, and the
//! periodicity measure `M(x) = nnp(x) / (ice(x) ln |x|)`.
//!
//! Logarithmic quantities are `f64`; comparisons against integer counts
//! allow [`TOLERANCE`]. Exact rationals are converted at the last step.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::automatic::{period_doubling_prefix, thue_morse_prefix};
use crate::error::{Error, Result};
use crate::numeration::ContinuedFraction;
use crate::rational::ExactRational;
use crate::sturmian::{fib, SturmianContext};
use crate::words::{self, PrefixScanner, Word};

/// Slack allowed when comparing a count with a logarithmic bound.
pub const TOLERANCE: f64 = 1e-9;

/// `3 / (2 ln 2)`.
pub fn cor_b_constant() -> f64 {
    1.5 / std::f64::consts::LN_2
}

fn check_e(e: ExactRational) -> Result<()> {
    if e < ExactRational::integer(1) {
        return Err(Error::InvalidInput(format!("exponent {e} is below 1")));
    }
    Ok(())
}

/// `e/2 + 1 + ln(n/2) / ln(e/(e-1))`, with value `3/2` at `e = 1`.
pub fn bound_rhs_eq1(n: u64, e: ExactRational) -> Result<f64> {
    check_e(e)?;
    if n == 0 {
        return Err(Error::InvalidInput("n must be >= 1".into()));
    }
    let head = e.to_f64() / 2.0 + 1.0;
    if e == ExactRational::integer(1) {
        return Ok(head);
    }
    // ln(e/(e-1)) = -ln(1 - 1/e)
    let inv = e.denom() as f64 / e.numer() as f64;
    let denom = -(-inv).ln_1p();
    Ok(head + (n as f64 / 2.0).ln() / denom)
}

/// `e/2 + 1 + (e - 1/2) ln(n/2)`.
pub fn bound_cor_a(n: u64, e: ExactRational) -> Result<f64> {
    check_e(e)?;
    let e = e.to_f64();
    Ok(e / 2.0 + 1.0 + (e - 0.5) * (n as f64 / 2.0).ln())
}

/// `C e ln n` with `C = 3 / (2 ln 2)`.
pub fn bound_cor_b(n: u64, e: ExactRational) -> Result<f64> {
    check_e(e)?;
    Ok(cor_b_constant() * e.to_f64() * (n as f64).ln())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub n: u64,
    pub e: ExactRational,
    pub lhs: u64,
    pub rhs_eq1: f64,
    pub rhs_cor_a: f64,
    pub rhs_cor_b: f64,
    pub satisfied_eq1: bool,
    pub satisfied_cor_a: bool,
    pub satisfied_cor_b: bool,
}

impl BoundReport {
    pub fn new(n: u64, e: ExactRational, lhs: u64) -> Result<Self> {
        let rhs_eq1 = bound_rhs_eq1(n, e)?;
        let rhs_cor_a = bound_cor_a(n, e)?;
        let rhs_cor_b = bound_cor_b(n, e)?;
        let ok = |rhs: f64| lhs == 0 || lhs as f64 <= rhs + TOLERANCE;
        Ok(BoundReport {
            n,
            e,
            lhs,
            rhs_eq1,
            rhs_cor_a,
            rhs_cor_b,
            satisfied_eq1: ok(rhs_eq1),
            satisfied_cor_a: ok(rhs_cor_a),
            satisfied_cor_b: ok(rhs_cor_b),
        })
    }

    /// The report for a word, with `e = ice(w)`.
    pub fn for_word(w: &[u8]) -> Result<Self> {
        let ice = words::ice(w)?;
        BoundReport::new(w.len() as u64, ice.value, words::nnp(w)? as u64)
    }
}

/// Visits every word over `0..k` with length in `min_len..=max_len` exactly
/// once, folding per-subtree accumulators in lexicographic order of their
/// roots so the result does not depend on scheduling.
pub(crate) fn sweep<A, I, V, C>(k: u8, min_len: usize, max_len: usize, init: I, visit: V, combine: C) -> A
where
    A: Send,
    I: Fn() -> A + Sync,
    V: Fn(&mut A, &PrefixScanner) + Sync,
    C: Fn(A, A) -> A,
{
    fn dfs<A>(sc: &mut PrefixScanner, k: u8, min_len: usize, max_len: usize, acc: &mut A, visit: &impl Fn(&mut A, &PrefixScanner)) {
        if sc.len() >= min_len {
            visit(acc, sc);
        }
        if sc.len() == max_len {
            return;
        }
        for s in 0..k {
            sc.push(s);
            dfs(sc, k, min_len, max_len, acc, visit);
            sc.pop();
        }
    }

    let mut depth = 0;
    let mut roots = 1usize;
    while depth < max_len && roots < 512 {
        depth += 1;
        roots *= k as usize;
    }
    // words shorter than the split depth
    let mut head = init();
    {
        let mut sc = PrefixScanner::with_capacity(max_len);
        fn shallow<A>(sc: &mut PrefixScanner, k: u8, min_len: usize, depth: usize, acc: &mut A, visit: &impl Fn(&mut A, &PrefixScanner)) {
            if sc.len() >= depth {
                return;
            }
            if sc.len() >= min_len.max(1) {
                visit(acc, sc);
            }
            for s in 0..k {
                sc.push(s);
                shallow(sc, k, min_len, depth, acc, visit);
                sc.pop();
            }
        }
        shallow(&mut sc, k, min_len, depth, &mut head, &visit);
    }
    if depth == 0 {
        return head;
    }
    let parts: Vec<A> = (0..roots)
        .into_par_iter()
        .map(|r| {
            let mut sc = PrefixScanner::with_capacity(max_len);
            let mut digits = vec![0u8; depth];
            let mut x = r;
            for d in digits.iter_mut().rev() {
                *d = (x % k as usize) as u8;
                x /= k as usize;
            }
            for d in digits {
                sc.push(d);
            }
            let mut acc = init();
            dfs(&mut sc, k, min_len, max_len, &mut acc, &visit);
            acc
        })
        .collect();
    parts.into_iter().fold(head, combine)
}

fn check_alphabet(k: u8) -> Result<()> {
    if k < 2 {
        return Err(Error::InvalidInput("alphabet size must be >= 2".into()));
    }
    Ok(())
}

fn enumeration_size(k: u8, n: usize, limit: u64) -> Result<u64> {
    let size = (k as u64).checked_pow(n as u32).filter(|&s| s <= limit);
    size.ok_or(Error::BudgetExhausted { budget: limit, length: n })
}

/// Upper limit on the number of words an exhaustive enumeration may visit.
pub const ENUMERATION_LIMIT: u64 = 1 << 32;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundViolation {
    pub word: Word,
    pub nnp: u64,
    pub ice: ExactRational,
    pub rhs: f64,
}

/// All words over `0..k` of length `1..=max_n` whose nontrivial period
/// count exceeds the inequality's right-hand side at `e = ice(w)`.
pub fn check_bound_exhaustive(k: u8, max_n: usize) -> Result<Vec<BoundViolation>> {
    check_alphabet(k)?;
    let total: u64 = (1..=max_n).map(|n| enumeration_size(k, n, ENUMERATION_LIMIT)).sum::<Result<u64>>()?;
    if total > ENUMERATION_LIMIT {
        return Err(Error::BudgetExhausted { budget: ENUMERATION_LIMIT, length: max_n });
    }
    let violations = sweep(
        k,
        1,
        max_n,
        Vec::new,
        |acc: &mut Vec<BoundViolation>, sc| {
            let nnp = sc.nnp() as u64;
            if nnp == 0 {
                return;
            }
            let ice = sc.ice().value;
            let rhs = bound_rhs_eq1(sc.len() as u64, ice).expect("ice >= 1");
            if nnp as f64 > rhs + TOLERANCE {
                acc.push(BoundViolation {
                    word: Word::new(sc.symbols().to_vec(), k).expect("in range"),
                    nnp,
                    ice,
                    rhs,
                });
            }
        },
        |mut a, b| {
            a.extend(b);
            a
        },
    );
    Ok(violations)
}

/// Smallest slack `rhs - nnp` of the inequality over all bordered words of
/// length `2..=max_n` over `k` letters, with the lexicographically least
/// word attaining it among the shortest.
pub fn bound_margin_exhaustive(k: u8, max_n: usize) -> Result<(f64, Word)> {
    check_alphabet(k)?;
    if max_n < 2 {
        return Err(Error::InvalidInput("no bordered word shorter than 2".into()));
    }
    let total: u64 = (1..=max_n).map(|n| enumeration_size(k, n, ENUMERATION_LIMIT)).sum::<Result<u64>>()?;
    if total > ENUMERATION_LIMIT {
        return Err(Error::BudgetExhausted { budget: ENUMERATION_LIMIT, length: max_n });
    }
    type Best = Option<(f64, Vec<u8>)>;
    let best: Best = sweep(
        k,
        2,
        max_n,
        || None,
        |acc: &mut Best, sc| {
            if sc.nnp() == 0 {
                return;
            }
            let slack = bound_rhs_eq1(sc.len() as u64, sc.ice().value).expect("ice >= 1") - sc.nnp() as f64;
            let better = match acc {
                None => true,
                Some((b, w)) => slack < *b || (slack == *b && (sc.len(), sc.symbols()) < (w.len(), w.as_slice())),
            };
            if better {
                *acc = Some((slack, sc.symbols().to_vec()));
            }
        },
        |a, b| match (a, b) {
            (Some(x), Some(y)) => Some(if y.0 < x.0 || (y.0 == x.0 && (y.1.len(), &y.1) < (x.1.len(), &x.1)) { y } else { x }),
            (x, y) => x.or(y),
        },
    );
    let (slack, w) = best.expect("\"00\" is bordered");
    Ok((slack, Word::new(w, k)?))
}

/// Expected number of borders of a uniformly random word of length `n` over
/// `k` letters: `k^-1 + ... + k^-(n-1)`.
pub fn expected_borders(k: u64, n: u32) -> Result<ExactRational> {
    if k < 2 || n == 0 {
        return Err(Error::InvalidInput("need k >= 2 and n >= 1".into()));
    }
    if n == 1 {
        return Ok(ExactRational::integer(0));
    }
    let top = k.checked_pow(n - 1).ok_or(Error::Overflow("expected_borders"))?;
    // sum_{i=1}^{n-1} k^{-i} = (k^{n-1} - 1) / ((k - 1) k^{n-1})
    let den = top.checked_mul(k - 1).ok_or(Error::Overflow("expected_borders"))?;
    ExactRational::new(top - 1, den)
}

/// The same expectation by averaging over all `k^n` words.
pub fn expected_borders_oracle(k: u8, n: usize) -> Result<ExactRational> {
    check_alphabet(k)?;
    if n == 0 {
        return Err(Error::InvalidInput("n must be >= 1".into()));
    }
    let total = enumeration_size(k, n, ENUMERATION_LIMIT)?;
    let borders = sweep(k, n, n, || 0u64, |acc, sc| *acc += sc.nnp() as u64, |a, b| a + b);
    ExactRational::new(borders, total)
}

/// `2 + sum_{j >= 1} 1/(k^j - 1)`, an upper bound on the expected initial
/// critical exponent of a random word over `k` letters. Summed until the
/// remaining tail is below `1e-12`.
pub fn ice_expectation_upper(k: u64) -> Result<f64> {
    if k < 2 {
        return Err(Error::InvalidInput("alphabet size must be >= 2".into()));
    }
    let k = k as f64;
    let mut sum = 2.0;
    let mut power = 1.0;
    loop {
        power *= k;
        let term = 1.0 / (power - 1.0);
        sum += term;
        // tail after this term is at most term * k / (k - 1) / k <= term
        if term < 1e-13 {
            return Ok(sum);
        }
    }
}

/// Mean of `ice` over `samples` uniformly random words, reproducible for a
/// fixed seed regardless of thread count.
pub fn ice_monte_carlo(k: u8, len: usize, samples: usize, seed: u64) -> Result<f64> {
    check_alphabet(k)?;
    if len == 0 || samples == 0 {
        return Err(Error::InvalidInput("need len >= 1 and samples >= 1".into()));
    }
    const CHUNK: usize = 4096;
    let chunks = samples.div_ceil(CHUNK);
    let sums: Vec<f64> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c as u64);
            let mut sc = PrefixScanner::with_capacity(len);
            let count = CHUNK.min(samples - c * CHUNK);
            let mut sum = 0.0;
            for _ in 0..count {
                sc.truncate(0);
                for _ in 0..len {
                    sc.push(rng.gen_range(0..k));
                }
                sum += sc.ice().value.to_f64();
            }
            sum
        })
        .collect();
    Ok(sums.iter().sum::<f64>() / samples as f64)
}

/// `nnp(w) / ice(w)` exactly; ranks words of equal length by `M`.
pub fn measure_ratio(w: &[u8]) -> Result<ExactRational> {
    let ice = words::ice(w)?.value;
    ratio(words::nnp(w)? as u64, ice)
}

fn ratio(nnp: u64, ice: ExactRational) -> Result<ExactRational> {
    let num = nnp.checked_mul(ice.denom()).ok_or(Error::Overflow("nnp/ice"))?;
    ExactRational::new(num, ice.numer())
}

fn m_value(n: usize, nnp: u64, ice: ExactRational) -> f64 {
    nnp as f64 * ice.denom() as f64 / (ice.numer() as f64 * (n as f64).ln())
}

/// `M(w) = nnp(w) / (ice(w) ln |w|)` for `|w| >= 2`.
#[allow(non_snake_case)]
pub fn M(w: &[u8]) -> Result<f64> {
    if w.len() < 2 {
        return Err(Error::InvalidInput("M needs |w| >= 2".into()));
    }
    let ice = words::ice(w)?.value;
    Ok(m_value(w.len(), words::nnp(w)? as u64, ice))
}

/// An infinite word whose prefixes are measured.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Source {
    Fibonacci,
    PeriodDoubling,
    ThueMorse,
    Sturmian(ContinuedFraction),
}

impl Source {
    pub fn id(&self) -> String {
        self.to_string()
    }

    pub fn prefix(&self, n: usize) -> Result<Word> {
        match self {
            Source::Fibonacci => SturmianContext::fibonacci(n)?.prefix_from_standard(n),
            Source::PeriodDoubling => Ok(period_doubling_prefix(n)),
            Source::ThueMorse => Ok(thue_morse_prefix(n)),
            Source::Sturmian(cf) => SturmianContext::new(cf.clone(), n)?.prefix_from_standard(n),
        }
    }

    /// Prefix lengths along which `M` approaches its limsup (`upper`) or
    /// liminf, tagged with the index `k` they are parametrised by.
    pub fn witnesses(&self, upper: bool, max_n: u64) -> Vec<(u32, u64)> {
        let gen = |k: u32| -> Option<u64> {
            match (self, upper) {
                (Source::Fibonacci, true) => fib(k + 2).ok().map(|f| f - 2),
                (Source::Fibonacci, false) => fib(2 * k + 2).ok().map(|f| f - 1),
                (Source::PeriodDoubling, true) => 1u64.checked_shl(k).filter(|_| k < 64).map(|x| x - 1),
                (Source::PeriodDoubling, false) => {
                    (k < 31).then(|| (1u64 << (2 * k + 1)) / 3)
                }
                (Source::ThueMorse, true) => (k < 32).then(|| (1u64 << (2 * k - 1)) + 2),
                (Source::ThueMorse, false) => (k < 62).then(|| 3 * (1u64 << k) + 1),
                (Source::Sturmian(_), _) => None,
            }
        };
        let first = match (self, upper) {
            (Source::Fibonacci, true) => 4,
            (Source::ThueMorse, false) => 1,
            _ => 2,
        };
        (first..)
            .map(|k| (k, gen(k)))
            .take_while(|(_, n)| n.is_some_and(|n| n <= max_n))
            .map(|(k, n)| (k, n.expect("checked")))
            .collect()
    }

    pub fn has_witnesses(&self) -> bool {
        !matches!(self, Source::Sturmian(_))
    }
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Source::Fibonacci => f.write_str("fibonacci"),
            Source::PeriodDoubling => f.write_str("period-doubling"),
            Source::ThueMorse => f.write_str("thue-morse"),
            Source::Sturmian(cf) => write!(f, "sturmian:{cf}"),
        }
    }
}

impl FromStr for Source {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "fibonacci" | "f" => Ok(Source::Fibonacci),
            "period-doubling" | "d" => Ok(Source::PeriodDoubling),
            "thue-morse" | "t" => Ok(Source::ThueMorse),
            other => match other.strip_prefix("sturmian:") {
                Some(_) => Ok(Source::Sturmian(s["sturmian:".len()..].parse()?)),
                None => Err(Error::InvalidInput(format!("unknown source '{s}'"))),
            },
        }
    }
}

/// Lagrange interpolation of `(x_i, y_i)` evaluated at `x = 0`.
fn extrapolate_to_zero(points: &[(f64, f64)]) -> f64 {
    let mut total = 0.0;
    for (i, &(xi, yi)) in points.iter().enumerate() {
        let mut weight = 1.0;
        for (j, &(xj, _)) in points.iter().enumerate() {
            if i != j {
                weight *= xj / (xj - xi);
            }
        }
        total += weight * yi;
    }
    total
}

/// Number of trailing witnesses used by [`Estimate::extrapolated`].
pub const EXTRAPOLATION_POINTS: usize = 4;

/// One-sided estimate of a limsup or liminf of `M` along a prefix sequence.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Estimate {
    /// Extreme of `M` over every `n` in `[N/2, N]`.
    pub raw: f64,
    /// Extreme of `M` over the witness lengths in `[N/2, N]`.
    pub structural: Option<f64>,
    /// Polynomial extrapolation in `1/k` of the last witnesses to `k -> inf`.
    pub extrapolated: Option<f64>,
    /// `(k, n, M(Y_n))` for every witness `n <= N`.
    pub witnesses: Vec<(u32, u64, f64)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MeasureSample {
    pub n: usize,
    pub nnp: u64,
    pub ice: ExactRational,
    pub m: f64,
}

/// `M(Y_n)` for `2 <= n <= N`, computed online over one border array.
#[derive(Clone, Debug, Serialize)]
pub struct MeasureTrace {
    pub source: String,
    pub max_n: usize,
    #[serde(skip)]
    nnp: Vec<u32>,
    #[serde(skip)]
    ice: Vec<ExactRational>,
    pub upper: Estimate,
    pub lower: Estimate,
}

impl MeasureTrace {
    /// The sample at prefix length `2 <= n <= N`.
    pub fn sample(&self, n: usize) -> Option<MeasureSample> {
        if n < 2 || n > self.max_n {
            return None;
        }
        let (nnp, ice) = (self.nnp[n - 1] as u64, self.ice[n - 1]);
        Some(MeasureSample {
            n,
            nnp,
            ice,
            m: m_value(n, nnp, ice),
        })
    }

    pub fn samples(&self) -> impl Iterator<Item = MeasureSample> + '_ {
        (2..=self.max_n).filter_map(|n| self.sample(n))
    }
}

pub fn measure_profile(source: &Source, max_n: usize) -> Result<MeasureTrace> {
    if max_n < 16 {
        return Err(Error::InvalidInput("N must be >= 16".into()));
    }
    let word = source.prefix(max_n)?;
    let mut sc = PrefixScanner::with_capacity(max_n);
    let mut nnp = Vec::with_capacity(max_n);
    let mut ice = Vec::with_capacity(max_n);
    for &s in word.iter() {
        sc.push(s);
        nnp.push(sc.nnp() as u32);
        ice.push(sc.ice().value);
    }
    let m_at = |n: usize| m_value(n, nnp[n - 1] as u64, ice[n - 1]);
    let window = (max_n / 2).max(2)..=max_n;

    let estimate = |upper: bool| -> Estimate {
        let pick = |a: f64, b: f64| if upper { a.max(b) } else { a.min(b) };
        let start = if upper { f64::NEG_INFINITY } else { f64::INFINITY };
        let raw = window.clone().map(m_at).fold(start, pick);
        let witnesses: Vec<(u32, u64, f64)> = source
            .witnesses(upper, max_n as u64)
            .into_iter()
            .filter(|&(_, n)| n >= 2)
            .map(|(k, n)| (k, n, m_at(n as usize)))
            .collect();
        let in_window: Vec<f64> = witnesses
            .iter()
            .filter(|(_, n, _)| window.contains(&(*n as usize)))
            .map(|w| w.2)
            .collect();
        let structural = (!in_window.is_empty()).then(|| in_window.iter().copied().fold(start, pick));
        let extrapolated = (witnesses.len() >= EXTRAPOLATION_POINTS).then(|| {
            let tail: Vec<(f64, f64)> = witnesses[witnesses.len() - EXTRAPOLATION_POINTS..]
                .iter()
                .map(|&(k, _, m)| (1.0 / k as f64, m))
                .collect();
            extrapolate_to_zero(&tail)
        });
        Estimate {
            raw,
            structural,
            extrapolated,
            witnesses,
        }
    };
    let upper = estimate(true);
    let lower = estimate(false);
    Ok(MeasureTrace {
        source: source.id(),
        max_n,
        nnp,
        ice,
        upper,
        lower,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TightnessRow {
    pub s: u32,
    pub n: u64,
    pub e: ExactRational,
    pub lhs: u64,
    pub rhs: f64,
    pub excess: f64,
}

/// The inequality evaluated on `g_s` (length `F_{s+2} - 2`, `s - 2`
/// nontrivial periods, `ice = (F_{s+2} - 2)/F_s`) for `4 <= s <= s_max`.
/// `excess = rhs - s` tends to about `1.19632`.
pub fn tightness_experiment(s_max: u32) -> Result<Vec<TightnessRow>> {
    if s_max < 4 {
        return Err(Error::InvalidInput("s_max must be >= 4".into()));
    }
    (4..=s_max)
        .map(|s| {
            let n = fib(s + 2)? - 2;
            let e = ExactRational::new(n, fib(s)?)?;
            let rhs = bound_rhs_eq1(n, e)?;
            Ok(TightnessRow {
                s,
                n,
                e,
                lhs: s as u64 - 2,
                rhs,
                excess: rhs - s as f64,
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SupM {
    pub value: f64,
    pub ratio: ExactRational,
    pub witness: Word,
}

/// Maximum of `M` over all words of length `n >= 2` over `k` letters, with
/// the lexicographically least maximiser.
#[allow(non_snake_case)]
pub fn sup_M_exhaustive(k: u8, n: usize) -> Result<SupM> {
    check_alphabet(k)?;
    if n < 2 {
        return Err(Error::InvalidInput("M needs n >= 2".into()));
    }
    enumeration_size(k, n, ENUMERATION_LIMIT)?;
    type Best = Option<(ExactRational, Vec<u8>)>;
    let best: Best = sweep(
        k,
        n,
        n,
        || None,
        |acc: &mut Best, sc| {
            let r = ratio(sc.nnp() as u64, sc.ice().value).expect("small");
            if acc.as_ref().is_none_or(|(b, _)| r > *b) {
                *acc = Some((r, sc.symbols().to_vec()));
            }
        },
        |a, b| match (a, b) {
            (Some(x), Some(y)) => Some(if y.0 > x.0 { y } else { x }),
            (x, y) => x.or(y),
        },
    );
    let (ratio, symbols) = best.expect("at least one word");
    Ok(SupM {
        value: ratio.to_f64() / (n as f64).ln(),
        ratio,
        witness: Word::new(symbols, k)?,
    })
}
