//! Command-line front end for the `qfourier` binary.
//!
//! Every command writes one table. CSV output starts with `#` lines carrying
//! the schema version, the full configuration and the column names; JSON
//! output holds the same fields. Output is deterministic: no timestamps, and
//! random samples use a fixed seed.
//!
//! Exit codes: 0 success, 1 a verification check failed, 2 bad input,
//! configuration or numerical error.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hardy::clt_limit_density;
use crate::qbessel::{
    eval_j, BesselSeriesSpec, SeriesConvention, SeriesRoute, DEFAULT_TERM_TOLERANCE,
};
use crate::qnum::{GridFunction, QGrid, QParams};
use crate::qtransform::{forward, forward_grid, TransformContext};
use crate::suites::{self, Check};

/// Version tag written into every output header.
pub const SCHEMA: &str = "qfourier-table/1";

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "qfourier",
    version,
    about = "q-Bessel Fourier transform toolkit"
)]
pub struct Cli {
    #[command(flatten)]
    pub config: ConfigArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct ConfigArgs {
    /// Lattice base, 0 < q < 1.
    #[arg(long, global = true, default_value_t = 0.5)]
    pub q: f64,
    /// Bessel order, nu > -1.
    #[arg(
        long,
        global = true,
        default_value_t = 0.0,
        allow_negative_numbers = true
    )]
    pub nu: f64,
    /// Smallest lattice index of the window.
    #[arg(long, global = true, default_value_t = -8, allow_negative_numbers = true)]
    pub n_min: i32,
    /// Largest lattice index of the window.
    #[arg(
        long,
        global = true,
        default_value_t = 40,
        allow_negative_numbers = true
    )]
    pub n_max: i32,
    #[arg(long, global = true, value_enum, default_value_t = ConventionArg::SelfDual)]
    pub convention: ConventionArg,
    /// Relative term tolerance of the kernel series.
    #[arg(long, global = true, default_value_t = DEFAULT_TERM_TOLERANCE)]
    pub tol: f64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write the table here instead of stdout. The file appears only when
    /// the command succeeds.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConventionArg {
    /// Series in `q^2 z^2`; the transform is its own inverse.
    #[value(name = "self-dual")]
    SelfDual,
    /// Series in `z`.
    #[value(name = "linear")]
    Linear,
}

impl From<ConventionArg> for SeriesConvention {
    fn from(c: ConventionArg) -> Self {
        match c {
            ConventionArg::SelfDual => SeriesConvention::SelfDual,
            ConventionArg::Linear => SeriesConvention::LinearPower,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate the kernel at complex points such as `1.5`, `3i`, `-2`.
    /// Complex literals starting with `-` go after `--`: `-- -2+0.5i`.
    EvalJ {
        #[arg(required = true, allow_negative_numbers = true)]
        z: Vec<String>,
    },
    /// Transform a sampled function read from a CSV table.
    Transform {
        /// Rows `n,re`, `n,re,im` or `n,x,re,im`, one per window index.
        #[arg(long)]
        input: PathBuf,
        /// Evaluate at these points instead of the window.
        #[arg(long, num_args = 1..)]
        x: Vec<f64>,
        /// Expected window output in the input format; the largest
        /// deviation is appended as a `# max_residual` line.
        #[arg(long)]
        reference: Option<PathBuf>,
    },
    /// Run a named check suite.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
    },
    /// Tabulate `c F(e^{-sigma t^2})` on the window with its mass and minimum.
    Extremal {
        #[arg(long, default_value_t = 0.5)]
        sigma: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Inversion,
    Dilation,
    GrowthConstants,
    Hardy,
}

/// Validated configuration shared by all commands.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub args: ConfigArgs,
    pub ctx: TransformContext,
}

impl RunConfig {
    pub fn from_args(args: &ConfigArgs) -> Result<Self> {
        let params = QParams::new(args.q, args.nu)?;
        let spec = BesselSeriesSpec::new(params, args.convention.into(), args.tol)?;
        let grid = QGrid::new(args.q, args.n_min, args.n_max)?;
        let ctx = TransformContext::new(spec, grid)?;
        Ok(Self {
            args: args.clone(),
            ctx,
        })
    }

    fn echo(&self, command: &str) -> Vec<(String, String)> {
        let a = &self.args;
        vec![
            ("command".into(), command.into()),
            ("q".into(), format!("{:?}", a.q)),
            ("nu".into(), format!("{:?}", a.nu)),
            ("n_min".into(), a.n_min.to_string()),
            ("n_max".into(), a.n_max.to_string()),
            (
                "convention".into(),
                SeriesConvention::from(a.convention).name().into(),
            ),
            ("tol".into(), format!("{:?}", a.tol)),
            ("c".into(), format!("{:?}", self.ctx.c())),
        ]
    }
}

/// A table cell.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
    Bool(bool),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => format!("{v:.16e}"),
            Cell::Text(s) => s.replace(',', ";"),
            Cell::Bool(b) => b.to_string(),
        }
    }

    fn json(&self) -> serde_json::Value {
        match self {
            Cell::Float(v) if !v.is_finite() => serde_json::Value::String(v.to_string()),
            other => serde_json::to_value(other).expect("cell serializes"),
        }
    }
}

/// An output table with its header echo and trailing notes.
#[derive(Debug, Clone)]
pub struct Table {
    pub config: Vec<(String, String)>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    /// Extra `key,value` pairs: trailing `#` lines in CSV, `notes` in JSON.
    pub notes: Vec<(String, f64)>,
}

impl Table {
    fn new(config: Vec<(String, String)>, columns: Vec<&'static str>) -> Self {
        Self {
            config,
            columns,
            rows: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.render_csv(),
            Format::Json => self.render_json(),
        }
    }

    fn render_csv(&self) -> String {
        let mut s = String::new();
        let echo: Vec<String> = self
            .config
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        let _ = writeln!(s, "# {SCHEMA}");
        let _ = writeln!(s, "# {}", echo.join(" "));
        let _ = writeln!(s, "# columns: {}", self.columns.join(","));
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            let _ = writeln!(s, "{}", cells.join(","));
        }
        for (k, v) in &self.notes {
            let _ = writeln!(s, "# {k},{v:.16e}");
        }
        s
    }

    fn render_json(&self) -> String {
        use serde_json::{Map, Value};
        let config: Map<String, Value> = self
            .config
            .iter()
            .map(|(k, v)| (k.clone(), Value::String(v.clone())))
            .collect();
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                Value::Object(
                    self.columns
                        .iter()
                        .zip(row)
                        .map(|(c, v)| (c.to_string(), v.json()))
                        .collect(),
                )
            })
            .collect();
        let notes: Map<String, Value> = self
            .notes
            .iter()
            .map(|(k, v)| (k.clone(), Cell::Float(*v).json()))
            .collect();
        let doc = serde_json::json!({
            "schema": SCHEMA,
            "config": config,
            "columns": self.columns,
            "rows": rows,
            "notes": notes,
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("json renders");
        s.push('\n');
        s
    }
}

/// Parse `a`, `bi`, `a+bi` or `a-bi`.
pub fn parse_complex(s: &str) -> Result<Complex64> {
    let z = Complex64::from_str(s.trim())
        .map_err(|_| Error::InvalidArgument(format!("not a complex number: {s:?}")))?;
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::NonFiniteArgument(s.to_string()));
    }
    Ok(z)
}

/// Read a sampled function from CSV. Every window index must appear exactly
/// once; `#` lines and blank lines are skipped.
pub fn read_grid_function(text: &str, grid: &QGrid) -> Result<GridFunction> {
    let mut values: Vec<Option<Complex64>> = vec![None; grid.len()];
    for (line_no, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad =
            |what: &str| Error::InvalidArgument(format!("line {}: {what}: {line:?}", line_no + 1));
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let num = |s: &str| s.parse::<f64>().map_err(|_| bad("malformed number"));
        let n: i32 = fields[0].parse().map_err(|_| bad("malformed index"))?;
        let v = match fields.len() {
            2 => Complex64::new(num(fields[1])?, 0.0),
            3 => Complex64::new(num(fields[1])?, num(fields[2])?),
            4 => {
                let x = num(fields[1])?;
                let expect = grid.point(n);
                if (x - expect).abs() > 1e-12 * expect {
                    return Err(bad(&format!("x differs from q^n = {expect:e}")));
                }
                Complex64::new(num(fields[2])?, num(fields[3])?)
            }
            _ => return Err(bad("expected 2 to 4 fields")),
        };
        let pos = grid.position(n).ok_or_else(|| {
            bad(&format!(
                "index outside window [{}, {}]",
                grid.n_min(),
                grid.n_max()
            ))
        })?;
        if values[pos].replace(v).is_some() {
            return Err(bad("duplicate index"));
        }
    }
    let got = values.iter().filter(|v| v.is_some()).count();
    if got != grid.len() {
        return Err(Error::LengthMismatch {
            expected: grid.len(),
            got,
        });
    }
    GridFunction::new(*grid, values.into_iter().map(Option::unwrap).collect())
}

fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))
}

fn eval_j_table(cfg: &RunConfig, zs: &[String]) -> Result<Table> {
    let mut t = Table::new(
        cfg.echo("eval-j"),
        vec![
            "z_re",
            "z_im",
            "j_re",
            "j_im",
            "terms",
            "condition",
            "route",
        ],
    );
    let points = zs
        .iter()
        .map(|s| parse_complex(s))
        .collect::<Result<Vec<_>>>()?;
    for z in points {
        let v = eval_j(cfg.ctx.spec(), z)?;
        let route = match v.route {
            SeriesRoute::Direct => "direct",
            SeriesRoute::Exchanged => "exchanged",
        };
        t.rows.push(vec![
            Cell::Float(z.re),
            Cell::Float(z.im),
            Cell::Float(v.value.re),
            Cell::Float(v.value.im),
            Cell::Int(v.terms as i64),
            Cell::Float(v.condition),
            Cell::Text(route.into()),
        ]);
    }
    Ok(t)
}

fn transform_table(
    cfg: &RunConfig,
    input: &Path,
    xs: &[f64],
    reference: Option<&Path>,
) -> Result<Table> {
    let grid = *cfg.ctx.grid();
    let f = read_grid_function(&read_file(input)?, &grid)?;
    if xs.is_empty() {
        let out = forward_grid(&cfg.ctx, &f)?;
        let mut t = Table::new(cfg.echo("transform"), vec!["n", "x", "re", "im"]);
        for (n, x, v) in out.output.iter() {
            t.rows.push(vec![
                Cell::Int(n.into()),
                Cell::Float(x),
                Cell::Float(v.re),
                Cell::Float(v.im),
            ]);
        }
        t.notes.push(("max_condition".into(), out.max_condition));
        if let Some(path) = reference {
            let expected = read_grid_function(&read_file(path)?, &grid)?;
            t.notes
                .push(("max_residual".into(), out.output.sup_distance(&expected)?));
        }
        Ok(t)
    } else {
        if reference.is_some() {
            return Err(Error::InvalidArgument(
                "--reference applies to window output only".into(),
            ));
        }
        let mut t = Table::new(cfg.echo("transform"), vec!["x", "re", "im"]);
        let mut worst = 0.0f64;
        for &x in xs {
            let v = forward(&cfg.ctx, &f, x)?;
            worst = worst.max(v.max_condition);
            t.rows.push(vec![
                Cell::Float(x),
                Cell::Float(v.value.re),
                Cell::Float(v.value.im),
            ]);
        }
        t.notes.push(("max_condition".into(), worst));
        Ok(t)
    }
}

fn verify_table(cfg: &RunConfig, suite: Suite) -> Result<(Table, bool)> {
    let (name, checks): (&str, Vec<Check>) = match suite {
        Suite::Inversion => ("inversion", suites::inversion(&cfg.ctx)?),
        Suite::Dilation => ("dilation", suites::dilation(&cfg.ctx)?),
        Suite::GrowthConstants => (
            "growth-constants",
            suites::growth_constants(cfg.ctx.spec())?,
        ),
        Suite::Hardy => ("hardy", suites::hardy(&cfg.ctx)?),
    };
    let mut echo = cfg.echo("verify");
    echo.push(("suite".into(), name.into()));
    let mut t = Table::new(echo, vec!["check", "value", "threshold", "pass"]);
    let all = checks.iter().all(|c| c.passed);
    for c in checks {
        t.rows.push(vec![
            Cell::Text(c.name),
            Cell::Float(c.value),
            Cell::Float(c.threshold),
            Cell::Bool(c.passed),
        ]);
    }
    Ok((t, all))
}

fn extremal_table(cfg: &RunConfig, sigma: f64) -> Result<Table> {
    let d = clt_limit_density(&cfg.ctx, sigma)?;
    let mut echo = cfg.echo("extremal");
    echo.push(("sigma".into(), format!("{sigma:?}")));
    echo.push(("summary_row".into(), "total;mass;min_value".into()));
    let mut t = Table::new(echo, vec!["n", "x", "value"]);
    for (n, x, v) in d.density.iter() {
        t.rows
            .push(vec![Cell::Int(n.into()), Cell::Float(x), Cell::Float(v.re)]);
    }
    t.rows.push(vec![
        Cell::Text("total".into()),
        Cell::Float(d.mass),
        Cell::Float(d.min_value),
    ]);
    t.notes.push(("min_index".into(), f64::from(d.min_index)));
    t.notes.push(("sign_changes".into(), d.sign_changes as f64));
    Ok(t)
}

/// Write `text` to `path` through a temporary file in the same directory,
/// so a failed run never leaves a partial file.
pub fn write_atomic(path: &Path, text: &str) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(text.as_bytes())?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

/// Run a parsed command and return the process exit code.
pub fn run(cli: Cli) -> i32 {
    match execute(&cli) {
        Ok((text, passed)) => {
            let written = match &cli.config.out {
                Some(path) => write_atomic(path, &text),
                None => std::io::stdout().write_all(text.as_bytes()),
            };
            if let Err(e) = written {
                eprintln!("qfourier: cannot write output: {e}");
                return EXIT_USAGE;
            }
            if passed {
                EXIT_OK
            } else {
                EXIT_CHECK_FAILED
            }
        }
        Err(e) => {
            eprintln!("qfourier: {e}");
            EXIT_USAGE
        }
    }
}

/// Render the command's table; the flag is false when a verify check failed.
pub fn execute(cli: &Cli) -> Result<(String, bool)> {
    let cfg = RunConfig::from_args(&cli.config)?;
    let (table, passed) = match &cli.command {
        Command::EvalJ { z } => (eval_j_table(&cfg, z)?, true),
        Command::Transform {
            input,
            x,
            reference,
        } => (transform_table(&cfg, input, x, reference.as_deref())?, true),
        Command::Verify { suite } => verify_table(&cfg, *suite)?,
        Command::Extremal { sigma } => {
            if !(sigma.is_finite() && *sigma > 0.0) {
                return Err(Error::InvalidArgument(format!(
                    "sigma must be positive, got {sigma}"
                )));
            }
            (extremal_table(&cfg, *sigma)?, true)
        }
    };
    Ok((table.render(cli.config.format), passed))
}

/// Parse arguments from the environment and run; clap usage errors exit 2.
pub fn main_from_env() -> i32 {
    match Cli::try_parse() {
        Ok(cli) => run(cli),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> QGrid {
        QGrid::new(0.5, -2, 3).unwrap()
    }

    #[test]
    fn complex_literals_parse() {
        assert_eq!(parse_complex("1.5").unwrap(), Complex64::new(1.5, 0.0));
        assert_eq!(parse_complex("-2+0.5i").unwrap(), Complex64::new(-2.0, 0.5));
        assert_eq!(parse_complex("3i").unwrap(), Complex64::new(0.0, 3.0));
        assert!(parse_complex("abc").is_err());
        assert!(parse_complex("inf").is_err());
    }

    #[test]
    fn reads_all_row_shapes() {
        let text = "# header\n-2,1\n-1,1,0.5\n0,1,2,0\n1,0\n\n2,0\n3,0\n";
        let f = read_grid_function(text, &grid()).unwrap();
        assert_eq!(f.get(-1), Some(Complex64::new(1.0, 0.5)));
        assert_eq!(f.get(0), Some(Complex64::new(2.0, 0.0)));
    }

    #[test]
    fn rejects_incomplete_or_foreign_rows() {
        let g = grid();
        assert!(read_grid_function("-2,1\n", &g).is_err());
        assert!(read_grid_function("-2,1\n-2,1\n-1,0\n0,0\n1,0\n2,0\n3,0\n", &g).is_err());
        assert!(read_grid_function("-3,1\n-2,1\n-1,0\n0,0\n1,0\n2,0\n3,0\n", &g).is_err());
        assert!(read_grid_function("-2,x\n", &g).is_err());
        // x column from a different base
        assert!(read_grid_function("0,0.9,1,0\n", &g).is_err());
    }

    #[test]
    fn csv_header_and_precision() {
        let mut t = Table::new(vec![("q".into(), "0.5".into())], vec!["a", "b"]);
        t.rows.push(vec![Cell::Int(1), Cell::Float(0.1)]);
        let s = t.render(Format::Csv);
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines[0], format!("# {SCHEMA}"));
        assert_eq!(lines[2], "# columns: a,b");
        assert_eq!(lines[3], "1,1.0000000000000001e-1");
        let v: serde_json::Value = serde_json::from_str(&t.render(Format::Json)).unwrap();
        assert_eq!(v["rows"][0]["b"], 0.1);
    }

    #[test]
    fn atomic_write_replaces_target() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.csv");
        write_atomic(&path, "one\n").unwrap();
        write_atomic(&path, "two\n").unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "two\n");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
