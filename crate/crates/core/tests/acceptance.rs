//! Acceptance criteria, one line per criterion.
//!
//! Runs without the libtest harness so the report is always printed; exits
//! non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use periodlab::automatic::{self, AutomaticWord, PrefixPeriodCounter};
use periodlab::measures::{self, MeasureTrace, Source};
use periodlab::repetitions::{self, Constraint};
use periodlab::sturmian;
use periodlab::verify::{self, SuiteReport};
use periodlab::words::{self, PrefixScanner};
use periodlab::ExactRational;
use serde_json::Value;

type Outcome = Result<String, String>;
type Criterion = (u32, &'static str, Box<dyn FnOnce() -> Outcome>);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn cli(args: &[&str]) -> Result<String, String> {
    let argv: Vec<String> = std::iter::once("periodlab").chain(args.iter().copied()).map(String::from).collect();
    let (mut out, mut errs) = (Vec::new(), Vec::new());
    let code = periodlab::cli::run(&argv, &mut out, &mut errs);
    if code != 0 {
        return Err(format!("exit {code}: {}", String::from_utf8_lossy(&errs)));
    }
    String::from_utf8(out).map_err(err)
}

fn checks_pass(reports: &[SuiteReport], names: &[&str]) -> Result<u64, String> {
    let mut cases = 0;
    for r in reports {
        for c in r.checks.iter().filter(|c| names.contains(&c.name.as_str())) {
            ensure(c.passed, format!("{}/{} failed at {:?}", r.suite, c.name, c.detail))?;
            ensure(c.cases > 0, format!("{}/{} ran no cases", r.suite, c.name))?;
            cases += c.cases;
        }
    }
    Ok(cases)
}

fn c1() -> Outcome {
    let mut seen = Vec::new();
    for (word, field, expect) in [
        ("alfalfa", "periods", "[3,6,7]"),
        ("abracadabra", "periods", "[7,10,11]"),
        ("entente", "exponent", "\"7/3\""),
        ("phosphorus", "ice", "\"7/4\""),
    ] {
        let doc: Value = serde_json::from_str(&cli(&["--format", "json", "analyze", "--word", word])?).map_err(err)?;
        let got = doc[field].to_string();
        ensure(got == expect, format!("{word}: {field} = {got}, expected {expect}"))?;
        seen.push(format!("{word} {field} {got}"));
    }
    Ok(seen.join("; "))
}

fn c2() -> Outcome {
    let bin = measures::check_bound_exhaustive(2, 14).map_err(err)?;
    let ter = measures::check_bound_exhaustive(3, 9).map_err(err)?;
    ensure(bin.is_empty() && ter.is_empty(), format!("{} binary and {} ternary violations", bin.len(), ter.len()))?;
    let (slack2, w2) = measures::bound_margin_exhaustive(2, 14).map_err(err)?;
    let (slack3, w3) = measures::bound_margin_exhaustive(3, 9).map_err(err)?;
    Ok(format!("0 violations; tightest slack {slack2:.6} at {w2} (binary), {slack3:.6} at {w3} (ternary)"))
}

fn c3() -> Outcome {
    let mut cases = 0;
    for (k, top) in [(2u8, 10usize), (3, 7)] {
        for n in 1..=top {
            let closed = measures::expected_borders(k as u64, n as u32).map_err(err)?;
            let oracle = measures::expected_borders_oracle(k, n).map_err(err)?;
            ensure(closed == oracle, format!("k={k} n={n}: {closed} vs {oracle}"))?;
            cases += 1;
        }
    }
    Ok(format!("{cases} exact equalities; E[borders] for k=2,n=10 is {}", measures::expected_borders(2, 10).map_err(err)?))
}

fn c4() -> Outcome {
    let expected = include_str!("fixtures/ostrowski_table_silver.csv");
    let got = cli(&["ostrowski", "table", "--cf", "2,(2)", "--from", "1", "--to", "28"])?;
    ensure(got == expected, format!("table differs:\n{got}"))?;
    let entries = expected.lines().skip(1).count() * 2;
    Ok(format!("{entries} entries byte-identical"))
}

fn c5_6(sturm: &[SuiteReport]) -> (Outcome, Outcome) {
    let five = checks_pass(sturm, &["period-set-formula", "prefix-constructions-agree"])
        .map(|n| format!("{n} cases over cfs (2), 2,(1), (1,2), 3,(1,4), n <= 5000"));
    let six = checks_pass(sturm, &["lazy-length-windows", "least-period-is-q_t"]).map(|n| format!("{n} cases"));
    (five, six)
}

fn c7() -> Outcome {
    let reports = verify::run_suite("fibonacci", false).map_err(err)?;
    let n = checks_pass(&reports, &["least-period-window", "shortest-prefix-with-k-periods", "longest-prefix-with-k-periods"])?;
    Ok(format!("{n} cases up to F_25 = {}", sturmian::fib(25).map_err(err)?))
}

fn c8() -> Outcome {
    let rows = measures::tightness_experiment(30).map_err(err)?;
    let last = rows.last().ok_or("empty table")?;
    ensure(last.s == 30 && last.lhs == 28, format!("lhs = {}", last.lhs))?;
    let g = sturmian::g_word(30).map_err(err)?;
    let nnp = words::nnp(&g).map_err(err)?;
    ensure(nnp == 28, format!("nnp(g_30) = {nnp}"))?;
    ensure(words::ice(&g).map_err(err)?.value == last.e, "ice(g_30) differs from (F_32 - 2)/F_30")?;
    let gap = (last.excess - 1.19632).abs();
    ensure(gap < 0.05, format!("rhs - s = {:.6}", last.excess))?;
    ensure(rows.iter().all(|r| r.lhs as f64 <= r.rhs), "a row violates the inequality")?;
    Ok(format!("lhs 28, rhs {:.6}, rhs - s = {:.6} (|diff| {gap:.6})", last.rhs, last.excess))
}

fn within(label: &str, got: Option<f64>, target: f64, tol: f64) -> Result<String, String> {
    let got = got.ok_or(format!("{label}: no estimate"))?;
    let rel = (got - target).abs() / target;
    let line = format!("{label} {got:.6} vs {target} ({:+.3}%)", 100.0 * (got - target) / target);
    ensure(rel <= tol, format!("{line} exceeds {}%", tol * 100.0))?;
    Ok(line)
}

fn windowed(label: &str, t: &MeasureTrace) -> String {
    let f = |x: Option<f64>| x.map_or("-".into(), |v| format!("{v:.4}"));
    format!("{label} window P {} p {}", f(t.upper.structural), f(t.lower.structural))
}

fn c9() -> Outcome {
    let tau = (1.0 + 5f64.sqrt()) / 2.0;
    let ln2 = std::f64::consts::LN_2;
    let mut parts = Vec::new();
    let mut notes = Vec::new();

    let f = measures::measure_profile(&Source::Fibonacci, sturmian::fib(32).map_err(err)? as usize).map_err(err)?;
    parts.push(within("f P", f.upper.extrapolated, 1.0 / (tau * tau * tau.ln()), 0.02)?);
    parts.push(within("f p", f.lower.extrapolated, 0.396879286, 0.02)?);
    notes.push(windowed("f", &f));

    let d = measures::measure_profile(&Source::PeriodDoubling, 1 << 20).map_err(err)?;
    parts.push(within("d P", d.upper.extrapolated, 1.0 / (2.0 * ln2), 0.03)?);
    parts.push(within("d p", d.lower.extrapolated, 0.36067, 0.03)?);
    notes.push(windowed("d", &d));

    let t = measures::measure_profile(&Source::ThueMorse, 1 << 18).map_err(err)?;
    parts.push(within("t P", t.upper.extrapolated, 3.0 / (10.0 * ln2), 0.05)?);
    notes.push(windowed("t", &t));
    // liminf samples: nnp = 1 and ice = 5/3 exactly, so M = 1/(ice ln n), decreasing to 0
    let five_thirds = ExactRational::new(5, 3).map_err(err)?;
    let mut prev = f64::INFINITY;
    for &(k, n, m) in &t.lower.witnesses {
        let s = t.sample(n as usize).ok_or("missing sample")?;
        ensure(s.nnp == 1, format!("nnp at 3*2^{k}+1 is {}", s.nnp))?;
        if n >= 5 {
            ensure(s.ice == five_thirds, format!("ice at n={n} is {}", s.ice))?;
            let exact = 3.0 / (5.0 * (n as f64).ln());
            ensure((m - exact).abs() < 1e-12, format!("M({n}) = {m} != {exact}"))?;
        }
        ensure(m < prev, format!("liminf samples not decreasing at n={n}"))?;
        prev = m;
    }
    parts.push(format!("t p samples {} decreasing, last {prev:.4}", t.lower.witnesses.len()));
    // nnp never exceeds the C e ln n corollary along any of the traces
    for trace in [&f, &d, &t] {
        for s in trace.samples().step_by(97) {
            let rhs = measures::bound_cor_b(s.n as u64, s.ice).map_err(err)?;
            ensure(s.nnp as f64 <= rhs, format!("{}: nnp exceeds C e ln n at n={}", trace.source, s.n))?;
        }
    }
    Ok(format!("{}; [{}]", parts.join("; "), notes.join("; ")))
}

fn c10() -> Outcome {
    let limit = 1u64 << 13;
    let d = automatic::period_doubling_prefix(limit as usize);
    let mut sc = PrefixScanner::with_capacity(d.len());
    let mut counter = PrefixPeriodCounter::new(AutomaticWord::PeriodDoubling);
    for n in 1..=limit {
        sc.push(d[n as usize - 1]);
        let brute = sc.nnp() as u64 + 1;
        let got = [automatic::r_recurrence(n), automatic::r_linear(n), automatic::r_factorization(n).map_err(err)?, counter.count(n)];
        ensure(got.iter().all(|&x| x == brute), format!("r({n}): {got:?} vs {brute}"))?;
        if n <= 1 << 12 {
            if n >= 4 {
                let lp = automatic::d_least_period(n).map_err(err)?;
                ensure(lp == sc.least_period_at(n as usize) as u64, format!("least period at n={n}"))?;
            }
            ensure(automatic::d_ice(n).map_err(err)? == sc.ice().value, format!("ice at n={n}"))?;
        }
    }
    Ok("r three ways = brute force for n <= 8192; least period and ice laws hold for n <= 4096".into())
}

fn c11() -> Outcome {
    let limit = 1u64 << 13;
    let t = automatic::thue_morse_prefix(limit as usize);
    let mut sc = PrefixScanner::with_capacity(t.len());
    let five_thirds = ExactRational::new(5, 3).map_err(err)?;
    for n in 1..=limit {
        sc.push(t[n as usize - 1]);
        ensure(automatic::v_recurrence(n) == sc.nnp() as u64, format!("v({n})"))?;
        if n >= 5 {
            ensure(sc.ice().value == five_thirds, format!("ice at n={n} is {}", sc.ice().value))?;
        }
    }
    let mut counter = PrefixPeriodCounter::new(AutomaticWord::ThueMorse);
    let mut firsts = Vec::new();
    for count in 2..=5u32 {
        let m = (1..).find(|&m| counter.count(m) == count as u64).expect("unbounded");
        let law = automatic::tm_shortest_prefix_with_nnp(count).map_err(err)?;
        ensure(m == law, format!("first m with v(m) = {count} is {m}, law says {law}"))?;
        firsts.push(m.to_string());
    }
    Ok(format!("v = brute force and ice = 5/3 for n <= 8192; first m for counts 2..5: {}", firsts.join(", ")))
}

fn c12() -> Outcome {
    let mut lens = Vec::new();
    for p in 3..=8 {
        let rec = repetitions::build_a(p).map_err(err)?;
        ensure(rec.repetition_free, format!("A_{p} has an overlap"))?;
        ensure(rec.palindrome, format!("A_{p} is not a palindrome"))?;
        ensure(rec.nnp == p as usize, format!("nnp(A_{p}) = {}", rec.nnp))?;
        // (17/6) 4^(p-2) + 2/3, kept exact: 6 |A_p| = 17 * 4^(p-2) + 4
        ensure(6 * rec.length as u64 == 17 * 4u64.pow(p - 2) + 4, format!("|A_{p}| = {}", rec.length))?;
        lens.push(rec.length.to_string());
    }
    Ok(format!("lengths {}", lens.join(", ")))
}

fn c13() -> Outcome {
    for p in 3..=7 {
        let rec = repetitions::build_b(p).map_err(err)?;
        ensure(rec.repetition_free, format!("B_{p} has a square"))?;
        ensure(rec.nnp + 1 == p as usize, format!("nnp(B_{p}) = {}", rec.nnp))?;
        if p >= 4 {
            let a = repetitions::a_length(p).map_err(err)?;
            ensure(2 * rec.length as u64 == a, format!("|B_{p}| = {} vs |A_{p}| = {a}", rec.length))?;
        }
    }
    let mut found = Vec::new();
    for (p, expect) in [(0, 1), (1, 3), (2, 7), (3, 23), (4, 59)] {
        let start = Instant::now();
        let w = repetitions::shortest_with_nnp(Constraint::SquareFree, 3, p, 80)
            .map_err(err)?
            .ok_or(format!("g({p}): none within 80"))?;
        ensure(w.len() == expect, format!("g({p}) = {}", w.len()))?;
        ensure(repetitions::find_square(&w).is_none() && words::nnp(&w).map_err(err)? == p, format!("g({p}) witness {w} invalid"))?;
        found.push(format!("g({p})={} [{:.1}s]", w.len(), start.elapsed().as_secs_f64()));
    }
    Ok(format!("B_3..B_7 ok; {}", found.join(" ")))
}

fn c14() -> Outcome {
    let mut found = Vec::new();
    for (p, expect) in [(1, 2), (2, 5), (3, 12)] {
        let w = repetitions::shortest_with_nnp(Constraint::OverlapFree, 2, p, 40)
            .map_err(err)?
            .ok_or(format!("f({p}): none within 40"))?;
        ensure(w.len() == expect, format!("f({p}) = {}", w.len()))?;
        found.push(format!("f({p})={} ({w})", w.len()));
    }
    let a3 = repetitions::a_length(3).map_err(err)?;
    ensure(a3 == 12, "|A_3| != 12")?;
    Ok(format!("{}; f(3) = |A_3|", found.join(" ")))
}

fn main() -> ExitCode {
    let total = Instant::now();
    // criteria 5 and 6 share one sweep, timed here
    let start = Instant::now();
    let sturm = verify::run_suite("sturmian", false);
    let sweep_secs = start.elapsed().as_secs_f64();
    let (c5, c6) = match &sturm {
        Ok(r) => {
            let (five, six) = c5_6(r);
            (five.map(|s| format!("{s} (shared sweep {sweep_secs:.2}s)")), six)
        }
        Err(e) => (Err(e.to_string()), Err(e.to_string())),
    };
    let criteria: Vec<Criterion> = vec![
        (1, "word examples", Box::new(c1)),
        (2, "inequality sweep", Box::new(c2)),
        (3, "expected borders", Box::new(c3)),
        (4, "ostrowski table", Box::new(c4)),
        (5, "sturmian period sets", Box::new(move || c5)),
        (6, "lazy windows and least period", Box::new(move || c6)),
        (7, "fibonacci closed forms", Box::new(c7)),
        (8, "tightness at s = 30", Box::new(c8)),
        (9, "periodicity measures", Box::new(c9)),
        (10, "period-doubling laws", Box::new(c10)),
        (11, "thue-morse laws", Box::new(c11)),
        (12, "A_p family", Box::new(c12)),
        (13, "B_p family and g(0..4)", Box::new(c13)),
        (14, "f(1..3)", Box::new(c14)),
    ];
    let mut failed = 0;
    for (id, name, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {id:>2} PASS [{secs:7.2}s] {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("criterion {id:>2} FAIL [{secs:7.2}s] {name}: {detail}");
            }
        }
    }
    println!("acceptance: {} of 14 passed in {:.1}s", 14 - failed, total.elapsed().as_secs_f64());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
