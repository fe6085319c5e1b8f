//! Command-line front end: input grammar, commands, output formats and the
//! basis cache.

pub mod cache;
pub mod parse;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use arcmult::arcspace::{self, ArcOptions, ArcResult, BasisCache, DiffIdeal, VerifyStatus, DEFAULT_EXTRA};
use arcmult::fairmono::{self, FairClass};
use arcmult::{compare, extalg, DPoly, Execution, OrderKind, QuotientDim, VarNames};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

pub use cache::FileCache;
pub use parse::{parse_ideal, parse_poly, ParseError};

pub const EXIT_OK: u8 = 0;
pub const EXIT_INPUT: u8 = 1;
pub const EXIT_NOT_STABILIZED: u8 = 2;
pub const EXIT_VERIFY_FAILED: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "arcmult", version, about = "Multiplicities of arc spaces of fat points")]
pub struct Cli {
    /// Directory for cached intersection bases.
    #[arg(long, global = true, value_name = "PATH")]
    pub cache_dir: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Dimension of Q[x^(<=h)] / (I^(<=H) ∩ Q[x^(<=h)]) at stabilization.
    Dim {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        bounds: Bounds,
        #[arg(long)]
        json: bool,
    },
    /// Reduced Gröbner basis of the intersection ideal.
    Gb {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        bounds: Bounds,
        #[arg(long, value_enum, default_value_t = OrderArg::Deglex)]
        order: OrderArg,
        /// Print in derivative coordinates x^(k) or Taylor coordinates x^(k)/k!.
        #[arg(long, value_enum, default_value_t = Coords::Derivative)]
        coords: Coords,
        #[arg(long)]
        json: bool,
    },
    /// Dimensions for h = 0 .. terms-1.
    Series {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        terms: u32,
        /// Cutoff head-room: H stops at h + extra.
        #[arg(long, default_value_t = DEFAULT_EXTRA)]
        extra: u32,
        #[arg(long)]
        json: bool,
    },
    /// Monomials of F_{a,b} of order <= h.
    Fair {
        #[arg(long)]
        a: u32,
        #[arg(long)]
        b: u32,
        #[arg(long)]
        h: u32,
        #[arg(long)]
        count: bool,
    },
    /// Image of a univariate polynomial in the exterior algebra.
    Phi {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        expr: String,
    },
    /// Verification suites; for `splitting`, --m is the number of blocks.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = 3)]
        m: u32,
        #[arg(long, default_value_t = 2)]
        h: u32,
    },
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
pub struct Source {
    /// Ideal file: generators separated by commas or newlines, `#` comments.
    #[arg(long, value_name = "FILE")]
    pub gens: Option<PathBuf>,
    /// Generators given inline, e.g. "x^2, y^2, x*y".
    #[arg(long, value_name = "STR")]
    pub expr: Option<String>,
}

#[derive(Args, Debug)]
pub struct Bounds {
    #[arg(long)]
    pub h: u32,
    /// Largest ambient order tried (default h + 12).
    #[arg(long = "max-H", value_name = "N")]
    pub max_h: Option<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OrderArg {
    Lex,
    Deglex,
    Wlex,
}

impl From<OrderArg> for OrderKind {
    fn from(o: OrderArg) -> Self {
        match o {
            OrderArg::Lex => OrderKind::Lex,
            OrderArg::Deglex => OrderKind::DegLex,
            OrderArg::Wlex => OrderKind::WLex,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Coords {
    Derivative,
    Taylor,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Dims,
    Standard,
    Exterior,
    Deformation,
    Splitting,
}

/// Exit code plus the text for stdout and stderr.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { code: EXIT_OK, stdout, stderr: String::new() }
    }

    fn input_error(msg: impl Into<String>) -> Self {
        Outcome { code: EXIT_INPUT, stdout: String::new(), stderr: format!("error: {}\n", msg.into()) }
    }
}

/// JSON record for `dim` and `gb`; field order is part of the format.
#[derive(Serialize)]
struct ArcJson<'a> {
    ideal: Vec<String>,
    h: u32,
    #[serde(rename = "H_used")]
    h_used: u32,
    stabilized: bool,
    dimension: serde_json::Value,
    basis: Vec<String>,
    order: &'a str,
}

fn dimension_json(d: QuotientDim) -> serde_json::Value {
    match d {
        QuotientDim::Finite(n) => n.into(),
        QuotientDim::Infinite => "infinite".into(),
    }
}

struct Loaded {
    ideal: DiffIdeal,
    names: VarNames,
}

fn load(source: &Source) -> Result<Loaded, String> {
    let (text, origin) = match (&source.gens, &source.expr) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
            (text, path.display().to_string())
        }
        (None, Some(expr)) => (expr.clone(), "--expr".to_string()),
        (None, None) => return Err("no generators given".into()),
    };
    let mut names = VarNames::default();
    let gens = parse_ideal(&text, &mut names).map_err(|e| format!("{origin}: {e}"))?;
    let gens: Vec<DPoly> = gens.into_iter().filter(|g| !g.is_zero()).collect();
    if gens.is_empty() {
        return Err(format!("{origin}: no nonzero generators"));
    }
    Ok(Loaded { ideal: DiffIdeal::differential(gens), names })
}

/// Basis elements in display form, largest leading monomial first.
pub fn display_basis(r: &ArcResult, names: &VarNames, coords: Coords) -> Vec<String> {
    let o = r.basis.order();
    r.basis
        .gens()
        .iter()
        .rev()
        .map(|g| {
            let g = match coords {
                Coords::Derivative => g.clone(),
                Coords::Taylor => g.to_taylor(),
            };
            let p = g.primitive(o).expect("basis elements are nonzero");
            names.poly_in(&p, o)
        })
        .collect()
}

fn arc_outcome(r: &ArcResult, loaded: &Loaded, basis: Vec<String>, json: bool, text: String) -> Outcome {
    let stdout = if json {
        let record = ArcJson {
            ideal: loaded.ideal.differential.iter().map(|g| loaded.names.poly(g)).collect(),
            h: r.h,
            h_used: r.h_used,
            stabilized: r.stabilized,
            dimension: dimension_json(r.dimension),
            basis,
            order: r.basis.order().name(),
        };
        serde_json::to_string(&record).expect("plain data serializes") + "\n"
    } else {
        text
    };
    if r.stabilized {
        Outcome::ok(stdout)
    } else {
        let stderr = format!("warning: not stabilized up to H = {}; reporting the data at that cutoff\n", r.h_used);
        Outcome { code: EXIT_NOT_STABILIZED, stdout, stderr }
    }
}

fn compute(loaded: &Loaded, bounds: &Bounds, order: OrderKind, cache: Option<&dyn BasisCache>) -> Result<ArcResult, String> {
    let max_h = bounds.max_h.unwrap_or(bounds.h + DEFAULT_EXTRA);
    let opts = ArcOptions { order, ..ArcOptions::default() };
    arcspace::arc_dimension_with(&loaded.ideal, bounds.h, max_h, opts, cache).map_err(|e| e.to_string())
}

fn run_dim(source: &Source, bounds: &Bounds, json: bool, cache: Option<&dyn BasisCache>) -> Outcome {
    let loaded = match load(source) {
        Ok(l) => l,
        Err(e) => return Outcome::input_error(e),
    };
    let r = match compute(&loaded, bounds, OrderKind::DegLex, cache) {
        Ok(r) => r,
        Err(e) => return Outcome::input_error(e),
    };
    let basis = display_basis(&r, &loaded.names, Coords::Derivative);
    let text = format!(
        "dimension: {}\nh: {}\nH_used: {}\nstabilized: {}\n",
        r.dimension, r.h, r.h_used, r.stabilized
    );
    arc_outcome(&r, &loaded, basis, json, text)
}

fn run_gb(
    source: &Source,
    bounds: &Bounds,
    order: OrderArg,
    coords: Coords,
    json: bool,
    cache: Option<&dyn BasisCache>,
) -> Outcome {
    let loaded = match load(source) {
        Ok(l) => l,
        Err(e) => return Outcome::input_error(e),
    };
    let r = match compute(&loaded, bounds, order.into(), cache) {
        Ok(r) => r,
        Err(e) => return Outcome::input_error(e),
    };
    let basis = display_basis(&r, &loaded.names, coords);
    let text = basis.iter().map(|b| format!("{b}\n")).collect();
    arc_outcome(&r, &loaded, basis, json, text)
}

#[derive(Serialize)]
struct SeriesJson {
    ideal: Vec<String>,
    dimensions: Vec<serde_json::Value>,
    stabilized: Vec<bool>,
    geometric: Option<bool>,
}

fn run_series(source: &Source, terms: u32, extra: u32, json: bool) -> Outcome {
    if terms == 0 {
        return Outcome::input_error("--terms must be positive");
    }
    let loaded = match load(source) {
        Ok(l) => l,
        Err(e) => return Outcome::input_error(e),
    };
    let report = match arcspace::dimension_series(&loaded.ideal.differential, terms - 1, extra, Execution::Parallel) {
        Ok(r) => r,
        Err(e) => return Outcome::input_error(e.to_string()),
    };
    let stdout = if json {
        let record = SeriesJson {
            ideal: loaded.ideal.differential.iter().map(|g| loaded.names.poly(g)).collect(),
            dimensions: report.dimensions().into_iter().map(dimension_json).collect(),
            stabilized: report.results.iter().map(|r| r.stabilized).collect(),
            geometric: report.geometric,
        };
        serde_json::to_string(&record).expect("plain data serializes") + "\n"
    } else {
        let mut s = String::new();
        for r in &report.results {
            let mark = if r.stabilized { "" } else { " (not stabilized)" };
            let _ = writeln!(s, "h = {}: {}{mark}", r.h, r.dimension);
        }
        if let Some(ok) = report.geometric {
            let m = arcspace::pure_power_exponent(&loaded.ideal.differential).unwrap_or(0);
            let _ = writeln!(s, "m/(1 - m t) with m = {m}: {}", if ok { "matches" } else { "differs" });
        }
        s
    };
    if report.all_stabilized() {
        Outcome::ok(stdout)
    } else {
        Outcome { code: EXIT_NOT_STABILIZED, stdout, stderr: "warning: some terms did not stabilize\n".into() }
    }
}

fn run_fair(a: u32, b: u32, h: u32, count: bool) -> Outcome {
    let c = FairClass::new(a, b);
    let mut monos = fairmono::enumerate_class(c, h);
    if count {
        return Outcome::ok(format!("{}\n", monos.len()));
    }
    monos.sort_by(|p, q| compare(p, q, OrderKind::DegLex));
    let names = VarNames::default();
    Outcome::ok(monos.iter().map(|m| format!("{}\n", names.mono(m))).collect())
}

fn run_phi(m: u32, expr: &str) -> Outcome {
    let mut names = VarNames::default();
    let p = match parse_poly(expr, &mut names) {
        Ok(p) => p,
        Err(e) => return Outcome::input_error(format!("--expr: {e}")),
    };
    match extalg::phi(&p, m) {
        Ok(v) => Outcome::ok(format!("{v}\n")),
        Err(e) => Outcome::input_error(e.to_string()),
    }
}

fn status_word(s: VerifyStatus) -> &'static str {
    match s {
        VerifyStatus::Pass => "pass",
        VerifyStatus::Fail => "FAIL",
        VerifyStatus::Inconclusive => "inconclusive",
    }
}

fn run_verify(suite: Suite, m: u32, h: u32) -> Outcome {
    let mut lines = Vec::new();
    let mut record = |label: String, s: VerifyStatus| lines.push((label, s));
    let res: arcmult::Result<()> = (|| {
        match suite {
            Suite::Dims => {
                let cells: Vec<(u32, u32)> = (1..=m).flat_map(|mm| (0..=h).map(move |hh| (mm, hh))).collect();
                for c in arcspace::fat_point_dimensions(&cells, Execution::Parallel)? {
                    let want = QuotientDim::Finite((c.m as u64).pow(c.h + 1));
                    let s = match (c.result.stabilized, c.result.dimension == want) {
                        (false, _) => VerifyStatus::Inconclusive,
                        (true, true) => VerifyStatus::Pass,
                        (true, false) => VerifyStatus::Fail,
                    };
                    record(format!("m = {}, h = {}: dimension {} (expected {want})", c.m, c.h, c.result.dimension), s);
                }
            }
            Suite::Standard => {
                for i in 1..=m {
                    let r = arcspace::verify_standard_monomials(m, i, h)?;
                    let label = format!(
                        "m = {m}, i = {i}, h = {h}: {} standard monomials vs {}",
                        r.computed.len(),
                        FairClass::new(i - 1, m - i)
                    );
                    record(label, r.status);
                    let (s, d) = arcspace::verify_upper_bound(m, i, h)?;
                    record(format!("m = {m}, i = {i}, h = {h}: dimension {d} = i * m^h"), s);
                }
            }
            Suite::Exterior => {
                let r = arcspace::verify_exterior(m, h)?;
                record(format!("m = {m}, h = {h}: standard monomials survive, basis vanishes"), r.status);
                for i in 1..m {
                    let s = arcspace::verify_diagonal(m, i, h)?;
                    record(format!("m = {m}, i = {i}, h = {h}: diagonal-ideal membership"), s);
                }
            }
            Suite::Deformation => {
                let r = arcspace::verify_deformation(m, h)?;
                let s = |ok: bool| if ok { VerifyStatus::Pass } else { VerifyStatus::Fail };
                record(format!("m = {m}, i <= {h}: binomial identity"), s(r.binomial_identity));
                record(format!("m = {m}, i <= {h}: lowest weight of u_i"), s(r.lowest_weight_identity));
                record(format!("m = {m}, i <= {h}: v_i^m = 0"), s(r.nilpotent));
            }
            Suite::Splitting => {
                let r = arcspace::verify_splitting(m, h)?;
                record(
                    format!("blocks = {m}, h = {h}: {} monomials, union is basis: {}", r.checked, r.union_is_basis),
                    r.status,
                );
            }
        }
        Ok(())
    })();
    if let Err(e) = res {
        return Outcome::input_error(e.to_string());
    }
    let stdout: String = lines.iter().map(|(l, s)| format!("{:<12} {l}\n", status_word(*s))).collect();
    let code = if lines.iter().any(|(_, s)| *s == VerifyStatus::Fail) {
        EXIT_VERIFY_FAILED
    } else if lines.iter().any(|(_, s)| *s == VerifyStatus::Inconclusive) {
        EXIT_NOT_STABILIZED
    } else {
        EXIT_OK
    };
    Outcome { code, stdout, stderr: String::new() }
}

/// Runs one command line (including the program name).
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Outcome::ok(text)
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let file_cache = cli.cache_dir.map(FileCache::new);
    let cache = file_cache.as_ref().map(|c| c as &dyn BasisCache);
    match &cli.command {
        Command::Dim { source, bounds, json } => run_dim(source, bounds, *json, cache),
        Command::Gb { source, bounds, order, coords, json } => run_gb(source, bounds, *order, *coords, *json, cache),
        Command::Series { source, terms, extra, json } => run_series(source, *terms, *extra, *json),
        Command::Fair { a, b, h, count } => run_fair(*a, *b, *h, *count),
        Command::Phi { m, expr } => run_phi(*m, expr),
        Command::Verify { suite, m, h } => run_verify(*suite, *m, *h),
    }
}

