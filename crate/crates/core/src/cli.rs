//! `orbital-radial` command line: `density`, `sample`, `verify`, `constants`.
//!
//! Options can be given as flags or collected in a JSON file passed with
//! `--config`; flags win over file values. Exit codes: 0 success,
//! 1 verification failure, 2 usage or configuration error, 3 I/O error.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::laplace::{a_coeff, OrbitSpec, Series};
use crate::montecarlo::{sample_projected_spectrum, sidecar_path};
use crate::radial::{make_params, RadialDensity};
use crate::verify::{run_suite, Suite, SuiteConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "orbital-radial",
    version,
    about = "Radial parts of projected orbital measures"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate the radial density on a grid over its support box.
    Density {
        #[command(flatten)]
        common: CommonArgs,
        /// Grid points per axis.
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Draw projected spectra and write CSV plus a JSON sidecar.
    Sample {
        #[command(flatten)]
        common: CommonArgs,
        /// Number of draws.
        #[arg(long = "samples", short = 'N')]
        samples: Option<usize>,
    },
    /// Run a verification suite and write a JSON report.
    Verify {
        #[command(flatten)]
        common: CommonArgs,
        /// One of: splines, lemma2, lemma1, normalization, projection-identity, montecarlo.
        #[arg(long)]
        suite: Option<String>,
        /// Quadrature points per cell.
        #[arg(long)]
        npts: Option<usize>,
        /// Monte Carlo draws for the montecarlo suite.
        #[arg(long = "samples", short = 'N')]
        samples: Option<usize>,
    },
    /// Print kappa, c, alpha and the Taylor products a_m for (series, n, k).
    Constants {
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Debug, Args, Default)]
pub struct CommonArgs {
    #[arg(long)]
    pub series: Option<String>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    /// Comma-separated orbit coordinates, e.g. `1,2,3`.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub x: Option<Vec<f64>>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON file with any of the options above.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

/// Merged configuration of one run.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub series: Option<String>,
    pub n: Option<usize>,
    pub k: Option<usize>,
    #[serde(rename = "x", alias = "X")]
    pub x: Option<Vec<f64>>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub grid: Option<usize>,
    #[serde(alias = "N")]
    pub samples: Option<usize>,
    pub suite: Option<String>,
    pub npts: Option<usize>,
}

impl RunConfig {
    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Usage(format!("invalid config {}: {e}", path.display())))
    }

    fn overlay(&mut self, common: &CommonArgs) {
        fn set<T: Clone>(slot: &mut Option<T>, flag: &Option<T>) {
            if flag.is_some() {
                slot.clone_from(flag);
            }
        }
        set(&mut self.series, &common.series);
        set(&mut self.n, &common.n);
        set(&mut self.k, &common.k);
        set(&mut self.x, &common.x);
        set(&mut self.seed, &common.seed);
        set(&mut self.out, &common.out);
    }

    pub fn series(&self) -> Result<Series, CliError> {
        let s = self
            .series
            .as_deref()
            .ok_or_else(|| usage("--series is required"))?;
        s.parse::<Series>().map_err(|e| usage(e.to_string()))
    }

    pub fn orbit(&self) -> Result<OrbitSpec, CliError> {
        let series = self.series()?;
        let x = self.x.clone().ok_or_else(|| usage("--x is required"))?;
        if let Some(n) = self.n {
            if n != x.len() {
                return Err(usage(format!(
                    "--n {n} does not match {} coordinates in --x",
                    x.len()
                )));
            }
        }
        OrbitSpec::new(series, x).map_err(|e| usage(e.to_string()))
    }

    pub fn rank(&self) -> Result<usize, CliError> {
        match (self.n, &self.x) {
            (Some(n), Some(x)) if n != x.len() => Err(usage(format!(
                "--n {n} does not match {} coordinates in --x",
                x.len()
            ))),
            (Some(n), _) => Ok(n),
            (None, Some(x)) => Ok(x.len()),
            (None, None) => Err(usage("--n or --x is required")),
        }
    }

    pub fn projection_rank(&self) -> Result<usize, CliError> {
        self.k.ok_or_else(|| usage("--k is required"))
    }
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Io(_) => EXIT_IO,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn io_err(path: Option<&Path>, e: io::Error) -> CliError {
    match path {
        Some(p) => CliError::Io(format!("{}: {e}", p.display())),
        None => CliError::Io(e.to_string()),
    }
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return code;
        }
    };
    match execute(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("orbital-radial: {e}");
            e.exit_code()
        }
    }
}

fn load(common: &CommonArgs) -> Result<RunConfig, CliError> {
    let mut config = match &common.config {
        Some(path) => RunConfig::from_file(path)?,
        None => RunConfig::default(),
    };
    config.overlay(common);
    Ok(config)
}

pub fn execute(command: Command) -> Result<i32, CliError> {
    match command {
        Command::Density { common, grid } => {
            let mut config = load(&common)?;
            if grid.is_some() {
                config.grid = grid;
            }
            cmd_density(&config)
        }
        Command::Sample { common, samples } => {
            let mut config = load(&common)?;
            if samples.is_some() {
                config.samples = samples;
            }
            cmd_sample(&config)
        }
        Command::Verify {
            common,
            suite,
            npts,
            samples,
        } => {
            let mut config = load(&common)?;
            if suite.is_some() {
                config.suite = suite;
            }
            if npts.is_some() {
                config.npts = npts;
            }
            if samples.is_some() {
                config.samples = samples;
            }
            cmd_verify(&config)
        }
        Command::Constants { common } => cmd_constants(&load(&common)?),
    }
}

/// Opens `--out` (or stdout) and runs `body` on a buffered writer.
fn with_output<F>(out: Option<&Path>, body: F) -> Result<(), CliError>
where
    F: FnOnce(&mut dyn Write) -> io::Result<()>,
{
    match out {
        Some(path) => {
            let file = File::create(path).map_err(|e| io_err(Some(path), e))?;
            let mut w = BufWriter::new(file);
            body(&mut w)
                .and_then(|_| w.flush())
                .map_err(|e| io_err(Some(path), e))
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            body(&mut w)
                .and_then(|_| w.flush())
                .map_err(|e| io_err(None, e))
        }
    }
}

fn grid_values(top: f64, points: usize) -> Vec<f64> {
    if points == 1 {
        return vec![0.0];
    }
    (0..points)
        .map(|i| top * i as f64 / (points - 1) as f64)
        .collect()
}

/// Grid over `[0, x_n]^k` with density values; `k = 1` adds the CDF column.
pub fn cmd_density(config: &RunConfig) -> Result<i32, CliError> {
    let spec = config.orbit()?;
    let k = config.projection_rank()?;
    let rd = RadialDensity::new(spec, k).map_err(|e| usage(e.to_string()))?;
    let grid = config.grid.unwrap_or(if k == 1 { 400 } else { 50 });
    if grid == 0 {
        return Err(usage("--grid must be positive"));
    }
    let axis = grid_values(rd.spec().largest(), grid);
    with_output(config.out.as_deref(), |w| {
        if k == 1 {
            writeln!(w, "y,density,cdf")?;
            for &y in &axis {
                let d = rd.density(&[y]).map_err(io::Error::other)?;
                let c = rd.cdf(y).map_err(io::Error::other)?;
                writeln!(w, "{y:.16e},{d:.16e},{c:.16e}")?;
            }
            return Ok(());
        }
        let header: Vec<String> = (1..=k).map(|i| format!("y_{i}")).collect();
        writeln!(w, "{},density", header.join(","))?;
        let mut index = vec![0usize; k];
        let mut point = vec![0.0; k];
        loop {
            for (p, &i) in point.iter_mut().zip(&index) {
                *p = axis[i];
            }
            let d = rd.density(&point).map_err(io::Error::other)?;
            let cells: Vec<String> = point.iter().map(|v| format!("{v:.16e}")).collect();
            writeln!(w, "{},{d:.16e}", cells.join(","))?;
            let mut a = k;
            loop {
                if a == 0 {
                    return Ok(());
                }
                a -= 1;
                index[a] += 1;
                if index[a] < grid {
                    break;
                }
                index[a] = 0;
            }
        }
    })?;
    Ok(EXIT_OK)
}

pub fn cmd_sample(config: &RunConfig) -> Result<i32, CliError> {
    let spec = config.orbit()?;
    let k = config.projection_rank()?;
    let count = config.samples.unwrap_or(100_000);
    let seed = config.seed.unwrap_or(0);
    let out = config
        .out
        .as_deref()
        .ok_or_else(|| usage("--out is required for sample"))?;
    let batch =
        sample_projected_spectrum(&spec, k, count, seed).map_err(|e| usage(e.to_string()))?;
    batch.write_files(out).map_err(|e| io_err(Some(out), e))?;
    eprintln!(
        "wrote {} draws to {} (metadata in {})",
        batch.len(),
        out.display(),
        sidecar_path(out).display()
    );
    Ok(EXIT_OK)
}

pub fn cmd_verify(config: &RunConfig) -> Result<i32, CliError> {
    let name = config
        .suite
        .as_deref()
        .ok_or_else(|| usage("--suite is required"))?;
    let suite: Suite = name.parse().map_err(CliError::Usage)?;
    let needs_orbit = !matches!(suite, Suite::Splines | Suite::Lemma2);
    let suite_config = SuiteConfig {
        spec: if needs_orbit {
            Some(config.orbit()?)
        } else {
            None
        },
        k: config.k,
        npts: config.npts,
        samples: config.samples.unwrap_or(100_000),
        seed: config.seed.unwrap_or(SuiteConfig::default().seed),
    };
    let report = run_suite(suite, &suite_config).map_err(|e| usage(e.to_string()))?;
    with_output(config.out.as_deref(), |w| {
        serde_json::to_writer_pretty(&mut *w, &report).map_err(io::Error::other)?;
        writeln!(w)
    })?;
    Ok(if report.passed() {
        EXIT_OK
    } else {
        EXIT_VERIFY_FAILED
    })
}

#[derive(Debug, Serialize)]
struct ConstantsReport {
    series: Series,
    n: usize,
    k: usize,
    alpha: f64,
    kappa: f64,
    c: f64,
    /// `a_0, ..., a_n`
    a_coeffs: Vec<f64>,
}

pub fn cmd_constants(config: &RunConfig) -> Result<i32, CliError> {
    let series = config.series()?;
    let n = config.rank()?;
    let k = config.projection_rank()?;
    let params = make_params(series, n, k).map_err(|e| usage(e.to_string()))?;
    let report = ConstantsReport {
        series,
        n,
        k,
        alpha: series.alpha(),
        kappa: params.kappa,
        c: params.c,
        a_coeffs: (0..=n as u32).map(|m| a_coeff(series, m)).collect(),
    };
    with_output(config.out.as_deref(), |w| {
        serde_json::to_writer_pretty(&mut *w, &report).map_err(io::Error::other)?;
        writeln!(w)
    })?;
    Ok(EXIT_OK)
}
