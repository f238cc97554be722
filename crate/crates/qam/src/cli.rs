use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use qam_core::{
    compare_convexity, compare_index, compare_ratio, make_grid, qa_mean, smooth_all, ComparisonResult, Error,
    Generator, Grid, Interval, LatticeResult, Side,
};

use crate::report::{fmt_list, write_csv};
use crate::spec::{common_interval, GenSpec};
use crate::{scenarios, suites};

pub const MAX_GENS: usize = 16;

/// Why a command failed; each maps to one exit code.
#[derive(Debug)]
pub enum Failure {
    /// Verification or consistency failure (exit 1).
    Verify(String),
    /// Bad input, domain or numerical error (exit 2).
    Input(String),
    /// Generator lacks the smoothness an operation needs (exit 3).
    Capability(String),
}

impl Failure {
    pub fn code(&self) -> i32 {
        match self {
            Failure::Verify(_) => 1,
            Failure::Input(_) => 2,
            Failure::Capability(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Verify(m) | Failure::Input(m) | Failure::Capability(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Capability(_) => Failure::Capability(e.to_string()),
            Error::Consistency(_) => Failure::Verify(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

pub type CmdResult = Result<(), Failure>;

#[derive(Parser, Debug)]
#[command(name = "qam", version, about = "Quasi-arithmetic means: evaluate, compare, join, meet, smooth")]
#[command(after_help = "Exit codes: 0 ok, 1 verification failure, 2 input or domain error, 3 capability error.")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Opts,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate the mean of --vector under --gen.
    Eval,
    /// Compare the means of --gen and --gen2.
    #[command(after_help = "CSV columns (--out-csv): x, A_f, A_g")]
    Compare,
    /// Supremum of the means of --gens (or --gen and --gen2).
    #[command(after_help = "CSV columns (--out-csv): x, A_1..A_n, combined, h, h_prime")]
    Join,
    /// Infimum of the means of --gens (or --gen and --gen2).
    #[command(after_help = "CSV columns (--out-csv): x, A_1..A_n, combined, h, h_prime")]
    Meet,
    /// Remove the kinks of the upper bound --gen while keeping it above --gens.
    #[command(after_help = "CSV columns (--out-csv): step, kink, ratio, max_drop")]
    Smooth {
        #[arg(long, default_value_t = 64)]
        max_steps: usize,
    },
    /// Run the property suites with the configured seed and grid.
    Verify,
    /// Run a bundled scenario.
    #[command(after_help = "CSV columns (--out-csv): sin-tan-join/sin-tan-meet as join; \
        cube-incomparable: x, A_f, A_g; l1-convergence: n, l1, gap")]
    Example {
        #[arg(value_enum)]
        name: ExampleName,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq)]
pub enum ExampleName {
    SinTanJoin,
    SinTanMeet,
    CubeIncomparable,
    L1Convergence,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Default)]
pub enum Method {
    #[default]
    Index,
    Convexity,
    Ratio,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Index => "index",
            Method::Convexity => "convexity",
            Method::Ratio => "ratio",
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct Opts {
    /// Generator spec file.
    #[arg(long, global = true)]
    pub gen: Option<PathBuf>,
    /// Second generator spec file.
    #[arg(long, global = true)]
    pub gen2: Option<PathBuf>,
    /// Several generator spec files (at most 16).
    #[arg(long, global = true, num_args = 1..)]
    pub gens: Vec<PathBuf>,
    /// Comma-separated entries, e.g. 1,4.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub vector: Option<String>,
    /// Interval override "a,b".
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub interval: Option<String>,
    /// Endpoint margin for --interval.
    #[arg(long, global = true)]
    pub margin: Option<f64>,
    /// Grid size.
    #[arg(long, global = true, env = "QAM_DEFAULT_GRID", default_value_t = 512,
          value_parser = clap::value_parser!(u64).range(8..))]
    pub grid: u64,
    /// Verdict tolerance.
    #[arg(long, global = true, default_value_t = 1e-9, value_parser = positive)]
    pub tol: f64,
    #[arg(long, global = true, value_enum, default_value_t = Method::Index)]
    pub method: Method,
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,
    /// Write the result spec here.
    #[arg(long, global = true)]
    pub out_spec: Option<PathBuf>,
    /// Write plot data here.
    #[arg(long, global = true)]
    pub out_csv: Option<PathBuf>,
}

fn positive(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        _ => Err(format!("'{s}' is not a positive number")),
    }
}

pub fn parse_reals(s: &str, what: &str) -> Result<Vec<f64>, Failure> {
    s.split(',')
        .map(|t| {
            let t = t.trim();
            t.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Failure::Input(format!("{what}: '{t}' is not a finite real")))
        })
        .collect()
}

impl Opts {
    pub fn grid_size(&self) -> usize {
        self.grid as usize
    }

    pub fn interval_override(&self) -> Result<Option<Interval>, Failure> {
        let Some(s) = &self.interval else { return Ok(None) };
        match parse_reals(s, "--interval")?.as_slice() {
            [a, b] => Ok(Some(crate::spec::interval([*a, *b], self.margin)?)),
            _ => Err(Failure::Input(format!("--interval expects 'a,b', got '{s}'"))),
        }
    }

    #[allow(clippy::ptr_arg)]
    fn load(path: &PathBuf) -> Result<GenSpec, Failure> {
        Ok(GenSpec::load(path)?)
    }

    pub fn gen_spec(&self) -> Result<GenSpec, Failure> {
        match &self.gen {
            Some(p) => Self::load(p),
            None => Err(Failure::Input("--gen is required".into())),
        }
    }

    /// Operand specs from --gens, falling back to --gen and --gen2.
    pub fn operand_specs(&self, min: usize) -> Result<Vec<GenSpec>, Failure> {
        let paths: Vec<&PathBuf> = if self.gens.is_empty() {
            self.gen.iter().chain(self.gen2.iter()).collect()
        } else {
            self.gens.iter().collect()
        };
        if paths.len() > MAX_GENS {
            return Err(Failure::Input(format!("at most {MAX_GENS} generators, got {}", paths.len())));
        }
        if paths.len() < min {
            return Err(Failure::Input(format!("need at least {min} generator spec(s)")));
        }
        paths.into_iter().map(Self::load).collect()
    }

    pub fn header(&self, command: &str) -> String {
        format!("# qam {command} seed={} grid={} tol={:e}", self.seed, self.grid, self.tol)
    }
}

/// Parses `args` and runs the command; returns the exit code. Errors go to
/// stderr, reports to `out`.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(&cli, out) {
        Ok(()) => 0,
        Err(f) => {
            eprintln!("error: {}", f.message());
            f.code()
        }
    }
}

pub fn dispatch(cli: &Cli, out: &mut dyn Write) -> CmdResult {
    let o = &cli.opts;
    match &cli.command {
        Command::Eval => cmd_eval(o, out),
        Command::Compare => cmd_compare(o, out),
        Command::Join => cmd_lattice(o, out, true),
        Command::Meet => cmd_lattice(o, out, false),
        Command::Smooth { max_steps } => cmd_smooth(o, out, *max_steps),
        Command::Verify => suites::run_all(o, out),
        Command::Example { name } => scenarios::run(*name, o, out),
    }
}

fn restrict_to(g: Generator, iv: Option<Interval>) -> Result<Generator, Failure> {
    Ok(match iv {
        Some(iv) => g.restrict(iv)?,
        None => g,
    })
}

fn cmd_eval(o: &Opts, out: &mut dyn Write) -> CmdResult {
    let f = restrict_to(o.gen_spec()?.build()?, o.interval_override()?)?;
    let raw = o.vector.as_deref().ok_or_else(|| Failure::Input("--vector is required".into()))?;
    let v = parse_reals(raw, "--vector")?;
    let iv = f.interval();
    if let Some(x) = v.iter().find(|x| !iv.contains(**x)) {
        return Err(Failure::Input(format!(
            "--vector entry {x} lies outside the working interval [{}, {}]",
            iv.start(),
            iv.end()
        )));
    }
    writeln!(out, "{:.12}", qa_mean(&f, &v)?)?;
    Ok(())
}

pub fn compare_with(method: Method, f: &Generator, g: &Generator, grid: &Grid, tol: f64) -> Result<ComparisonResult, Error> {
    match method {
        Method::Index => compare_index(f, g, grid, tol),
        Method::Convexity => compare_convexity(f, g, grid, tol),
        Method::Ratio => compare_ratio(f, g, grid, tol),
    }
}

pub fn write_comparison(out: &mut dyn Write, r: &ComparisonResult) -> std::io::Result<()> {
    writeln!(out, "verdict: {}", r.verdict.name())?;
    writeln!(out, "margin: {:.6e}", r.margin)?;
    match r.witness {
        Some(w) => writeln!(out, "witness: {w:.6}"),
        None => writeln!(out, "witness: none"),
    }
}

pub fn index_csv(path: &Path, gs: &[&Generator], grid: &Grid) -> Result<(), Failure> {
    let mut header = vec!["x".to_string()];
    header.extend(["A_f", "A_g"].iter().take(gs.len()).map(|s| s.to_string()));
    let rows: Vec<Vec<f64>> = grid
        .points()
        .iter()
        .map(|&x| std::iter::once(x).chain(gs.iter().map(|g| g.index_side(x, Side::Right))).collect())
        .collect();
    Ok(write_csv(path, &header, &rows)?)
}

fn cmd_compare(o: &Opts, out: &mut dyn Write) -> CmdResult {
    let specs = o.operand_specs(2)?;
    if specs.len() != 2 {
        return Err(Failure::Input(format!("compare takes exactly two generators, got {}", specs.len())));
    }
    let (f, g) = (specs[0].build()?, specs[1].build()?);
    let iv = match o.interval_override()? {
        Some(iv) => iv,
        None => common_interval(&[f.clone(), g.clone()])?,
    };
    let (f, g) = (f.restrict(iv)?, g.restrict(iv)?);
    let grid = make_grid(&iv, o.grid_size())?;
    let r = compare_with(o.method, &f, &g, &grid, o.tol)?;
    writeln!(out, "{} method={}", o.header("compare"), o.method.name())?;
    write_comparison(out, &r)?;
    if let Some(p) = &o.out_csv {
        index_csv(p, &[&f, &g], &grid)?;
    }
    Ok(())
}

pub fn lattice_csv(path: &Path, r: &LatticeResult, grid: &Grid) -> Result<(), Failure> {
    let n = r.operands.len();
    let mut header = vec!["x".to_string()];
    header.extend((1..=n).map(|i| format!("A_{i}")));
    header.extend(["combined", "h", "h_prime"].map(String::from));
    let indices = r.operand_indices();
    let mut rows = Vec::with_capacity(grid.count());
    for &x in grid.points() {
        let mut row = vec![x];
        row.extend(indices.iter().map(|a| a.at(x)));
        row.push(r.index.at(x));
        row.push(r.generator.value(x)?);
        row.push(r.generator.deriv1(x)?);
        rows.push(row);
    }
    Ok(write_csv(path, &header, &rows)?)
}

pub fn write_lattice(out: &mut dyn Write, r: &LatticeResult) -> std::io::Result<()> {
    let iv = r.interval();
    let h = &r.generator;
    writeln!(out, "kind: {}", r.kind.name())?;
    writeln!(out, "operands: {}", r.operands.len())?;
    writeln!(out, "interval: [{:.6}, {:.6}]", iv.start(), iv.end())?;
    writeln!(out, "crossings: {}", fmt_list(r.index.kinks()))?;
    let x0 = iv.midpoint();
    let ends = [iv.start(), x0, iv.end()].map(|x| h.value(x).unwrap_or(f64::NAN));
    writeln!(out, "h(start), h(mid), h(end): {:.9}, {:.9}, {:.9}", ends[0], ends[1], ends[2])
}

fn cmd_lattice(o: &Opts, out: &mut dyn Write, is_join: bool) -> CmdResult {
    let operands = o.operand_specs(1)?;
    let bounds = o.interval_override()?.map(|iv| [iv.lo(), iv.hi()]);
    let margin = bounds.and(o.margin);
    let spec = if is_join {
        GenSpec::Join { operands, interval: bounds, margin }
    } else {
        GenSpec::Meet { operands, interval: bounds, margin }
    };
    let r = spec.build_lattice()?;
    writeln!(out, "{}", o.header(if is_join { "join" } else { "meet" }))?;
    write_lattice(out, &r)?;
    if let Some(p) = &o.out_spec {
        spec.save(p)?;
    }
    if let Some(p) = &o.out_csv {
        let grid = make_grid(r.interval(), o.grid_size())?.with_points(r.interval(), r.index.kinks());
        lattice_csv(p, &r, &grid)?;
    }
    Ok(())
}

fn cmd_smooth(o: &Opts, out: &mut dyn Write, max_steps: usize) -> CmdResult {
    let bound = o.gen_spec()?;
    let s = bound.build_piecewise()?;
    let ops: Vec<GenSpec> = if o.gens.is_empty() {
        o.gen2.iter().map(Opts::load).collect::<Result<_, _>>()?
    } else {
        o.operand_specs(1)?
    };
    let (f, g) = match ops.as_slice() {
        [f] => (f.build()?, f.build()?),
        [f, g] => (f.build()?, g.build()?),
        _ => return Err(Failure::Input("smooth takes one or two dominated generators (--gen2 or --gens)".into())),
    };
    let res = smooth_all(&s, &f, &g, max_steps)?;
    writeln!(out, "{}", o.header("smooth"))?;
    writeln!(out, "kinks: {}", fmt_list(s.breakpoints()))?;
    writeln!(out, "steps: {}", res.steps.len())?;
    for st in &res.steps {
        writeln!(out, "step {}: kink {:.6} ratio {:.9} max_drop {:.6e}", st.step, st.kink, st.ratio, st.max_drop)?;
    }
    writeln!(out, "remaining kinks: {}", res.piecewise.pending().len())?;
    if let Some(p) = &o.out_spec {
        bound.smoothed(&res.piecewise).save(p)?;
    }
    if let Some(p) = &o.out_csv {
        let rows: Vec<Vec<f64>> =
            res.steps.iter().map(|s| vec![s.step as f64, s.kink, s.ratio, s.max_drop]).collect();
        write_csv(p, &["step", "kink", "ratio", "max_drop"].map(String::from), &rows)?;
    }
    Ok(())
}
