//! The `periodlab` command line.
//!
//! Every command produces one JSON document (tagged with a versioned
//! `schema` field), which is rendered as JSON, as CSV or as `key: value`
//! text. Table-shaped commands default to CSV and everything else to text.
//! Errors are written to the error stream as JSON, and each error kind has
//! its own exit status.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::automatic::{self, AutomaticWord, PrefixPeriodCounter};
use crate::error::{Error, Result};
use crate::measures::{self, BoundReport, Source};
use crate::numeration::{ContinuedFraction, Flavor, OstrowskiRep, OstrowskiSystem};
use crate::rational::ExactRational;
use crate::repetitions::{self, Constraint, Search};
use crate::sturmian::{self, SturmianContext};
use crate::verify;
use crate::words::{self, Word};

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILED_CHECK: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_INVALID_INPUT: u8 = 3;
pub const EXIT_OVERFLOW: u8 = 4;
pub const EXIT_COVERAGE: u8 = 5;
pub const EXIT_BUDGET: u8 = 6;
pub const EXIT_MISMATCH: u8 = 7;
pub const EXIT_IO: u8 = 8;

pub fn exit_code(err: &Error) -> u8 {
    match err {
        Error::EmptyWord | Error::SymbolOutOfRange { .. } | Error::InvalidInput(_) => EXIT_INVALID_INPUT,
        Error::Overflow(_) => EXIT_OVERFLOW,
        Error::CoverageExhausted { .. } => EXIT_COVERAGE,
        Error::BudgetExhausted { .. } => EXIT_BUDGET,
        Error::Mismatch(_) => EXIT_MISMATCH,
        Error::Io(_) => EXIT_IO,
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "periodlab",
    version,
    about = "Periods, borders and initial critical exponents of words",
    after_help = "CSV columns: each table command prints a header row naming its columns \
                  (for example `ostrowski table` prints n,ordinary,lazy; `measure profile` \
                  prints n,nnp,ice,m). Scalar commands print one row of field values."
)]
struct Cli {
    /// Output format; defaults to csv for tables and text otherwise.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Worker threads for parallel sweeps and searches.
    #[arg(long, global = true, env = "PERIODLAB_JOBS")]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Borders, periods, exponent, ice and M of one word.
    Analyze(WordInput),
    /// The nontrivial-period inequality and its corollaries.
    Bound(BoundArgs),
    /// Ordinary and lazy Ostrowski representations.
    #[command(subcommand)]
    Ostrowski(OstrowskiCmd),
    /// Characteristic Sturmian prefixes and their periods.
    #[command(subcommand)]
    Sturmian(SturmianCmd),
    /// Closed forms for prefixes of the Fibonacci word.
    #[command(subcommand)]
    Fib(FibCmd),
    /// Period-doubling and Thue-Morse closed forms.
    #[command(subcommand)]
    Auto(AutoCmd),
    /// The A_p (overlap-free) and B_p (squarefree) families.
    Construct(ConstructArgs),
    /// Shortest repetition-free word with a given number of nontrivial periods.
    Search(SearchArgs),
    /// Periodicity measures, expectations and experiments.
    #[command(subcommand)]
    Measure(MeasureCmd),
    /// Run a named oracle-equivalence suite.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
struct WordInput {
    /// Word written with glyphs; all-digit words use the digits as symbols.
    #[arg(long, conflicts_with = "file")]
    word: Option<String>,
    /// File holding the word, one symbol per byte (trailing newline ignored).
    #[arg(long)]
    file: Option<PathBuf>,
}

impl WordInput {
    fn load(&self) -> Result<Word> {
        match (&self.word, &self.file) {
            (Some(w), None) => Word::parse(w),
            (None, Some(path)) => {
                let mut bytes = std::fs::read(path)?;
                while matches!(bytes.last(), Some(b'\n' | b'\r')) {
                    bytes.pop();
                }
                word_from_bytes(&bytes)
            }
            _ => Err(Error::InvalidInput("give exactly one of --word or --file".into())),
        }
    }
}

fn word_from_bytes(bytes: &[u8]) -> Result<Word> {
    match std::str::from_utf8(bytes) {
        Ok(text) if text.is_ascii() => Word::parse(text),
        _ => {
            let mut seen: Vec<u8> = Vec::new();
            let mut symbols = Vec::with_capacity(bytes.len());
            for &b in bytes {
                let i = seen.iter().position(|&s| s == b).unwrap_or_else(|| {
                    seen.push(b);
                    seen.len() - 1
                });
                symbols.push(u8::try_from(i).map_err(|_| Error::InvalidInput("more than 255 distinct symbols".into()))?);
            }
            Ok(Word::from_symbols(symbols))
        }
    }
}

#[derive(Args, Debug)]
struct BoundArgs {
    #[command(flatten)]
    input: WordInput,
    /// Evaluate at this length instead of a word (needs --e).
    #[arg(long, requires = "e", conflicts_with_all = ["word", "file", "sweep_alphabet"])]
    n: Option<u64>,
    /// Exponent as a fraction such as 7/3.
    #[arg(long, requires = "n")]
    e: Option<ExactRational>,
    /// Check every word over this many letters instead.
    #[arg(long, requires = "max_n", conflicts_with_all = ["word", "file"])]
    sweep_alphabet: Option<u8>,
    #[arg(long)]
    max_n: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum OstrowskiCmd {
    /// Representation of n.
    Encode {
        #[arg(long)]
        cf: ContinuedFraction,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        lazy: bool,
    },
    /// Value of a digit string (most significant digit first).
    Decode {
        #[arg(long)]
        cf: ContinuedFraction,
        #[arg(long)]
        digits: String,
        #[arg(long)]
        lazy: bool,
    },
    /// Digit conditions satisfied by a digit string.
    Check {
        #[arg(long)]
        cf: ContinuedFraction,
        #[arg(long)]
        digits: String,
        #[arg(long)]
        lazy: bool,
    },
    /// CSV table with columns n,ordinary,lazy.
    Table {
        #[arg(long)]
        cf: ContinuedFraction,
        #[arg(long, default_value_t = 1)]
        from: u64,
        #[arg(long)]
        to: u64,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PrefixMethod {
    Standard,
    Lazy,
    Floor,
}

#[derive(Subcommand, Debug)]
enum SturmianCmd {
    /// The length-n prefix of the characteristic word.
    Prefix {
        #[arg(long)]
        cf: ContinuedFraction,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "standard")]
        method: PrefixMethod,
    },
    /// All periods of the length-n prefix, from the lazy representation.
    Periods {
        #[arg(long)]
        cf: ContinuedFraction,
        #[arg(long)]
        n: u64,
    },
    /// Least period of the length-n prefix.
    LeastPeriod {
        #[arg(long)]
        cf: ContinuedFraction,
        #[arg(long)]
        n: u64,
    },
}

#[derive(Subcommand, Debug)]
enum FibCmd {
    /// Shortest prefix with exactly k periods (trivial included).
    Shortest {
        #[arg(long)]
        k: u32,
    },
    /// Longest prefix with exactly k periods (trivial included).
    Longest {
        #[arg(long)]
        k: u32,
    },
    /// Least period of the length-m prefix.
    LeastPeriod {
        #[arg(long)]
        m: u64,
    },
    /// The prefix g_s of length F_(s+2) - 2 and its ice.
    G {
        #[arg(long)]
        s: u32,
        #[arg(long)]
        show_word: bool,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum AutoWordArg {
    D,
    T,
}

#[derive(Subcommand, Debug)]
enum AutoCmd {
    /// Prefix of the period-doubling (d) or Thue-Morse (t) word.
    Prefix {
        #[arg(long, value_enum)]
        word: AutoWordArg,
        #[arg(long)]
        n: usize,
    },
    /// r(n): periods of d[0..n], trivial included, three ways.
    R {
        #[arg(long)]
        n: u64,
    },
    /// v(n): nontrivial periods of t[0..n].
    V {
        #[arg(long)]
        n: u64,
    },
    /// Smallest and largest n with r(n) = count.
    Extremes {
        #[arg(long)]
        count: u32,
    },
    /// Least period and ice of d[0..n].
    D {
        #[arg(long)]
        n: u64,
    },
    /// ice of t[0..n] and the shortest prefix with count nontrivial periods.
    T {
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        count: Option<u32>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Family {
    A,
    B,
}

#[derive(Args, Debug)]
struct ConstructArgs {
    #[arg(long, value_enum)]
    family: Family,
    #[arg(long)]
    p: u32,
    /// Omit the word itself from the output.
    #[arg(long)]
    no_word: bool,
}

#[derive(Args, Debug)]
struct SearchArgs {
    #[arg(long)]
    constraint: Constraint,
    #[arg(long)]
    alphabet: u8,
    /// Required number of nontrivial periods.
    #[arg(long)]
    nnp: usize,
    #[arg(long)]
    max_len: usize,
    /// Maximum number of search nodes.
    #[arg(long)]
    budget: Option<u64>,
    /// Frontier file for resuming an interrupted search.
    #[arg(long)]
    checkpoint: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum MeasureCmd {
    /// M(Y_n) along a source; CSV columns n,nnp,ice,m.
    Profile {
        /// fibonacci, period-doubling, thue-morse or sturmian:<cf>
        #[arg(long)]
        source: Source,
        #[arg(long)]
        n: usize,
        /// Emit every stride-th sample (summary only when 0).
        #[arg(long, default_value_t = 0)]
        stride: usize,
    },
    /// The inequality on g_s; CSV columns s,n,e,lhs,rhs,excess.
    Tightness {
        #[arg(long, default_value_t = 30)]
        s_max: u32,
    },
    /// Maximum of M over all words of length n.
    Sup {
        #[arg(long)]
        alphabet: u8,
        #[arg(long)]
        n: usize,
    },
    /// Expected number of borders of a random word.
    ExpectedBorders {
        #[arg(long)]
        alphabet: u8,
        #[arg(long)]
        n: u32,
        /// Also average over every word.
        #[arg(long)]
        oracle: bool,
    },
    /// Upper bound on the expected ice, with an optional Monte Carlo mean.
    Ice {
        #[arg(long)]
        alphabet: u8,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = 64)]
        length: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// One of words, repetitions, numeration, sturmian, fibonacci,
    /// automatic, measures, or all.
    suite: String,
    #[arg(long)]
    quick: bool,
}

/// Result of one command, before rendering.
struct Output {
    doc: Value,
    table: Option<(Vec<&'static str>, Vec<Vec<String>>)>,
    passed: bool,
}

impl Output {
    fn doc(schema: &str, body: impl Serialize) -> Result<Self> {
        let mut doc = Map::new();
        doc.insert("schema".into(), Value::String(format!("periodlab.{schema}.v1")));
        match serde_json::to_value(body).map_err(|e| Error::Mismatch(e.to_string()))? {
            Value::Object(m) => doc.extend(m),
            other => {
                doc.insert("value".into(), other);
            }
        }
        Ok(Output {
            doc: Value::Object(doc),
            table: None,
            passed: true,
        })
    }

    fn with_table(mut self, header: Vec<&'static str>, rows: Vec<Vec<String>>) -> Self {
        self.table = Some((header, rows));
        self
    }

    fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.doc).expect("serialisable");
                s.push('\n');
                s
            }
            Format::Csv => match &self.table {
                Some((header, rows)) => {
                    let mut s = header.join(",");
                    s.push('\n');
                    for row in rows {
                        s.push_str(&row.iter().map(|c| csv_cell(c)).collect::<Vec<_>>().join(","));
                        s.push('\n');
                    }
                    s
                }
                None => {
                    let fields = self.fields();
                    let header: Vec<String> = fields.iter().map(|(k, _)| k.clone()).collect();
                    let row: Vec<String> = fields.iter().map(|(_, v)| csv_cell(v)).collect();
                    format!("{}\n{}\n", header.join(","), row.join(","))
                }
            },
            Format::Text => self.fields().iter().map(|(k, v)| format!("{k}: {v}\n")).collect(),
        }
    }

    /// Top-level fields flattened to strings, `schema` excluded.
    fn fields(&self) -> Vec<(String, String)> {
        let Value::Object(map) = &self.doc else {
            return vec![];
        };
        map.iter().filter(|(k, _)| k.as_str() != "schema").map(|(k, v)| (k.clone(), scalar_text(v))).collect()
    }
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::Null => "none".into(),
        Value::String(s) => s.clone(),
        Value::Array(items) if items.iter().all(|x| !x.is_object() && !x.is_array()) => {
            items.iter().map(scalar_text).collect::<Vec<_>>().join(" ")
        }
        other => other.to_string(),
    }
}

fn csv_cell(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Parses `args` (including the program name), runs the command and writes
/// its rendering to `out`; errors go to `err` as JSON.
pub fn run(args: &[String], out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return EXIT_OK;
            }
            let doc = json!({"schema": "periodlab.error.v1", "error": "usage", "message": e.to_string().trim_end()});
            let _ = writeln!(err, "{doc}");
            return EXIT_USAGE;
        }
    };
    let result = match cli.jobs {
        Some(0) => Err(Error::InvalidInput("--jobs must be >= 1".into())),
        Some(jobs) => rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| Error::InvalidInput(e.to_string()))
            .and_then(|pool| pool.install(|| execute(&cli.command))),
        None => execute(&cli.command),
    };
    match result {
        Ok(output) => {
            let format = cli.format.unwrap_or(if output.table.is_some() { Format::Csv } else { Format::Text });
            if out.write_all(output.render(format).as_bytes()).is_err() {
                return EXIT_IO;
            }
            if output.passed {
                EXIT_OK
            } else {
                EXIT_FAILED_CHECK
            }
        }
        Err(e) => {
            let doc = json!({"schema": "periodlab.error.v1", "error": e.kind(), "message": e.to_string()});
            let _ = writeln!(err, "{doc}");
            exit_code(&e)
        }
    }
}

fn execute(cmd: &Command) -> Result<Output> {
    match cmd {
        Command::Analyze(input) => analyze(&input.load()?),
        Command::Bound(args) => bound(args),
        Command::Ostrowski(c) => ostrowski(c),
        Command::Sturmian(c) => sturmian_cmd(c),
        Command::Fib(c) => fib_cmd(c),
        Command::Auto(c) => auto_cmd(c),
        Command::Construct(args) => construct(args),
        Command::Search(args) => search(args),
        Command::Measure(c) => measure(c),
        Command::Verify(args) => verify_cmd(args),
    }
}

fn analyze(w: &Word) -> Result<Output> {
    let periods = words::periods(w, true)?;
    let ice = words::ice(w)?;
    let m = if w.len() >= 2 { Some(measures::M(w)?) } else { None };
    Output::doc(
        "analyze",
        json!({
            "word": w.to_string(),
            "length": w.len(),
            "alphabet": w.alphabet(),
            "border_array": words::border_array(w).as_slice(),
            "borders": words::borders(w)?,
            "periods": periods.as_slice(),
            "nnp": periods.nontrivial_count(),
            "per": words::per(w)?,
            "exponent": words::exponent(w)?,
            "ice": ice.value,
            "ice_witness_len": ice.witness_len,
            "palindrome": words::is_palindrome(w),
            "m": m,
        }),
    )
}

fn bound(args: &BoundArgs) -> Result<Output> {
    if let (Some(k), Some(max_n)) = (args.sweep_alphabet, args.max_n) {
        let violations = measures::check_bound_exhaustive(k, max_n)?;
        let mut out = Output::doc(
            "bound-sweep",
            json!({"alphabet": k, "max_n": max_n, "violations": violations.len(), "witnesses": violations}),
        )?;
        out.passed = violations.is_empty();
        return Ok(out);
    }
    let report = match (args.n, args.e) {
        (Some(n), Some(e)) => {
            let nnp_free = BoundReport::new(n, e, 0)?;
            return Output::doc("bound", json!({"n": n, "e": e, "rhs_eq1": nnp_free.rhs_eq1, "rhs_cor_a": nnp_free.rhs_cor_a, "rhs_cor_b": nnp_free.rhs_cor_b}));
        }
        _ => BoundReport::for_word(&args.input.load()?)?,
    };
    let mut out = Output::doc("bound", &report)?;
    out.passed = report.satisfied_eq1;
    Ok(out)
}

fn flavor(lazy: bool) -> Flavor {
    if lazy {
        Flavor::Lazy
    } else {
        Flavor::Ordinary
    }
}

fn ostrowski(cmd: &OstrowskiCmd) -> Result<Output> {
    match cmd {
        OstrowskiCmd::Encode { cf, n, lazy } => {
            let sys = OstrowskiSystem::new(cf.clone());
            let rep = if *lazy { sys.lazy_encode(*n)? } else { sys.encode(*n)? };
            Output::doc("ostrowski-encode", json!({"cf": cf.to_string(), "n": n, "flavor": flavor_name(*lazy), "digits": rep.to_string()}))
        }
        OstrowskiCmd::Decode { cf, digits, lazy } => {
            let sys = OstrowskiSystem::new(cf.clone());
            let rep = OstrowskiRep::parse(digits, flavor(*lazy))?;
            let report = sys.check(&rep)?;
            let valid = if *lazy { report.lazy() } else { report.ordinary() };
            Output::doc(
                "ostrowski-decode",
                json!({"cf": cf.to_string(), "digits": rep.to_string(), "flavor": flavor_name(*lazy), "n": sys.decode(&rep)?, "valid": valid}),
            )
        }
        OstrowskiCmd::Check { cf, digits, lazy } => {
            let sys = OstrowskiSystem::new(cf.clone());
            let rep = OstrowskiRep::parse(digits, flavor(*lazy))?;
            let report = sys.check(&rep)?;
            let valid = if *lazy { report.lazy() } else { report.ordinary() };
            let mut out = Output::doc("ostrowski-check", json!({"digits": rep.to_string(), "flavor": flavor_name(*lazy), "valid": valid, "conditions": report}))?;
            out.passed = valid;
            Ok(out)
        }
        OstrowskiCmd::Table { cf, from, to } => {
            if from > to || *from == 0 {
                return Err(Error::InvalidInput("need 1 <= from <= to".into()));
            }
            let sys = OstrowskiSystem::new(cf.clone());
            let mut rows = Vec::new();
            let mut entries = Vec::new();
            for n in *from..=*to {
                let (o, l) = (sys.encode(n)?.to_string(), sys.lazy_encode(n)?.to_string());
                entries.push(json!({"n": n, "ordinary": o, "lazy": l}));
                rows.push(vec![n.to_string(), o, l]);
            }
            Ok(Output::doc("ostrowski-table", json!({"cf": cf.to_string(), "rows": entries}))?.with_table(vec!["n", "ordinary", "lazy"], rows))
        }
    }
}

fn flavor_name(lazy: bool) -> &'static str {
    if lazy {
        "lazy"
    } else {
        "ordinary"
    }
}

fn sturmian_cmd(cmd: &SturmianCmd) -> Result<Output> {
    match cmd {
        SturmianCmd::Prefix { cf, n, method } => {
            let ctx = SturmianContext::new(cf.clone(), *n)?;
            let w = match method {
                PrefixMethod::Standard => ctx.prefix_from_standard(*n)?,
                PrefixMethod::Lazy => ctx.characteristic_prefix(*n)?,
                PrefixMethod::Floor => ctx.prefix_from_floor(*n)?,
            };
            Output::doc("sturmian-prefix", json!({"cf": cf.to_string(), "n": n, "prefix": w.to_string()}))
        }
        SturmianCmd::Periods { cf, n } => {
            let ctx = SturmianContext::new(cf.clone(), 1)?;
            let rep = ctx.lazy_rep(*n)?;
            let set = ctx.period_set_formula(*n)?;
            Output::doc(
                "sturmian-periods",
                json!({"cf": cf.to_string(), "n": n, "lazy": rep.to_string(), "periods": set.as_slice(), "count": set.len()}),
            )
        }
        SturmianCmd::LeastPeriod { cf, n } => {
            let ctx = SturmianContext::new(cf.clone(), 1)?;
            let rep = ctx.lazy_rep(*n)?;
            Output::doc(
                "sturmian-least-period",
                json!({"cf": cf.to_string(), "n": n, "lazy": rep.to_string(), "t": rep.t(), "least_period": ctx.least_period(*n)?}),
            )
        }
    }
}

fn fib_cmd(cmd: &FibCmd) -> Result<Output> {
    match cmd {
        FibCmd::Shortest { k } => Output::doc("fib-shortest", json!({"k": k, "length": sturmian::fib_shortest_prefix_with(*k)?})),
        FibCmd::Longest { k } => Output::doc("fib-longest", json!({"k": k, "length": sturmian::fib_longest_prefix_with(*k)?})),
        FibCmd::LeastPeriod { m } => Output::doc("fib-least-period", json!({"m": m, "least_period": sturmian::fib_least_period(*m)?})),
        FibCmd::G { s, show_word } => {
            let w = sturmian::g_word(*s)?;
            let ice = sturmian::g_ice(*s)?;
            let mut body = json!({"s": s, "length": w.len(), "nnp": words::nnp(&w)?, "ice": ice, "m": measures::M(&w).ok()});
            if *show_word {
                body["word"] = Value::String(w.to_string());
            }
            Output::doc("fib-g", body)
        }
    }
}

fn auto_cmd(cmd: &AutoCmd) -> Result<Output> {
    match cmd {
        AutoCmd::Prefix { word, n } => {
            let (name, w) = match word {
                AutoWordArg::D => ("period-doubling", automatic::period_doubling_prefix(*n)),
                AutoWordArg::T => ("thue-morse", automatic::thue_morse_prefix(*n)),
            };
            Output::doc("auto-prefix", json!({"word": name, "n": n, "prefix": w.to_string()}))
        }
        AutoCmd::R { n } => {
            let blocks = if *n == 0 { vec![] } else { automatic::binary_factorization(*n)? };
            Output::doc(
                "auto-r",
                json!({
                    "n": n,
                    "recurrence": automatic::r_recurrence(*n),
                    "linear": automatic::r_linear(*n),
                    "factorization": blocks.len(),
                    "blocks": blocks,
                }),
            )
        }
        AutoCmd::V { n } => {
            let rule = automatic::VRule::for_index(*n);
            let mut counter = PrefixPeriodCounter::new(AutomaticWord::ThueMorse);
            Output::doc("auto-v", json!({"n": n, "v": counter.count(*n), "rule": rule}))
        }
        AutoCmd::Extremes { count } => {
            let (lo, hi) = automatic::d_extremes(*count)?;
            Output::doc("auto-extremes", json!({"count": count, "smallest": lo, "largest": hi}))
        }
        AutoCmd::D { n } => Output::doc(
            "auto-d",
            json!({"n": n, "least_period": automatic::d_least_period(*n)?, "ice": automatic::d_ice(*n)?}),
        ),
        AutoCmd::T { n, count } => {
            if n.is_none() && count.is_none() {
                return Err(Error::InvalidInput("give --n and/or --count".into()));
            }
            let ice = n.map(automatic::tm_ice).transpose()?;
            let shortest = count.map(automatic::tm_shortest_prefix_with_nnp).transpose()?;
            Output::doc("auto-t", json!({"n": n, "ice": ice, "count": count, "shortest_prefix": shortest}))
        }
    }
}

fn construct(args: &ConstructArgs) -> Result<Output> {
    let rec = match args.family {
        Family::A => repetitions::build_a(args.p)?,
        Family::B => repetitions::build_b(args.p)?,
    };
    let mut doc = serde_json::to_value(&rec).map_err(|e| Error::Mismatch(e.to_string()))?;
    doc["family"] = Value::String(match args.family {
        Family::A => "a".into(),
        Family::B => "b".into(),
    });
    if args.no_word {
        doc.as_object_mut().expect("object").remove("word");
    }
    Output::doc("construct", doc)
}

fn search(args: &SearchArgs) -> Result<Output> {
    let mut s = Search::new(args.constraint, args.alphabet, args.nnp, args.max_len);
    if let Some(b) = args.budget {
        s = s.budget(b);
    }
    if let Some(path) = &args.checkpoint {
        s = s.checkpoint(path);
    }
    let outcome = s.run()?;
    let mut out = Output::doc(
        "search",
        json!({
            "constraint": args.constraint,
            "alphabet": args.alphabet,
            "nnp": args.nnp,
            "found": outcome.word.is_some(),
            "length": outcome.word.as_ref().map(|w| w.len()),
            "word": outcome.word.as_ref().map(|w| w.to_string()),
            "nodes": outcome.nodes,
            "exhausted_below": outcome.exhausted_below,
        }),
    )?;
    out.passed = outcome.word.is_some();
    Ok(out)
}

fn measure(cmd: &MeasureCmd) -> Result<Output> {
    match cmd {
        MeasureCmd::Profile { source, n, stride } => {
            let trace = measures::measure_profile(source, *n)?;
            let mut out = Output::doc("measure-profile", &trace)?;
            if *stride > 0 {
                let rows = trace
                    .samples()
                    .filter(|s| s.n % stride == 0 || s.n == trace.max_n)
                    .map(|s| vec![s.n.to_string(), s.nnp.to_string(), s.ice.to_string(), format!("{:.9}", s.m)])
                    .collect();
                out = out.with_table(vec!["n", "nnp", "ice", "m"], rows);
            }
            Ok(out)
        }
        MeasureCmd::Tightness { s_max } => {
            let rows = measures::tightness_experiment(*s_max)?;
            let table = rows
                .iter()
                .map(|r| vec![r.s.to_string(), r.n.to_string(), r.e.to_string(), r.lhs.to_string(), format!("{:.9}", r.rhs), format!("{:.9}", r.excess)])
                .collect();
            Ok(Output::doc("measure-tightness", json!({"rows": rows}))?.with_table(vec!["s", "n", "e", "lhs", "rhs", "excess"], table))
        }
        MeasureCmd::Sup { alphabet, n } => Output::doc("measure-sup", measures::sup_M_exhaustive(*alphabet, *n)?),
        MeasureCmd::ExpectedBorders { alphabet, n, oracle } => {
            let closed = measures::expected_borders(*alphabet as u64, *n)?;
            let enumerated = if *oracle { Some(measures::expected_borders_oracle(*alphabet, *n as usize)?) } else { None };
            let mut out = Output::doc(
                "measure-expected-borders",
                json!({"alphabet": alphabet, "n": n, "expected": closed, "enumerated": enumerated}),
            )?;
            out.passed = enumerated.is_none_or(|e| e == closed);
            Ok(out)
        }
        MeasureCmd::Ice { alphabet, samples, length, seed } => {
            let upper = measures::ice_expectation_upper(*alphabet as u64)?;
            let mean = samples.map(|s| measures::ice_monte_carlo(*alphabet, *length, s, *seed)).transpose()?;
            let mut out = Output::doc(
                "measure-ice",
                json!({"alphabet": alphabet, "upper_bound": upper, "samples": samples, "length": length, "seed": seed, "mean": mean}),
            )?;
            out.passed = mean.is_none_or(|m| m <= upper);
            Ok(out)
        }
    }
}

fn verify_cmd(args: &VerifyArgs) -> Result<Output> {
    let reports = verify::run_suite(&args.suite, args.quick)?;
    let passed = reports.iter().all(|r| r.passed());
    let rows = reports
        .iter()
        .flat_map(|r| {
            r.checks
                .iter()
                .map(move |c| vec![r.suite.clone(), c.name.clone(), c.cases.to_string(), if c.passed { "pass" } else { "fail" }.to_string()])
        })
        .collect();
    let mut out = Output::doc("verify", json!({"suite": args.suite, "quick": args.quick, "passed": passed, "reports": reports}))?
        .with_table(vec!["suite", "check", "cases", "status"], rows);
    out.passed = passed;
    Ok(out)
}
