//! Argument parsing and orchestration for the `julia-sym` binary.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use julia_sym::algebra::{parse_complex, parse_rational, ToleranceConfig};
use julia_sym::methods::Method;
use julia_sym::render::{
    basin_ppm_bytes, extract_boundary, mask_ppm_bytes, render_basins, write_ppm, GridSpec, Palette, RenderParams,
};
use julia_sym::report::{analyze, analyze_mcmullen, analyze_method, verify_symmetry, AnalyzeOptions};
use julia_sym::{Complex64, Error, Result};

#[derive(Parser, Debug)]
#[command(name = "julia-sym", version, about = "Symmetries of Julia sets of polynomials and rational maps")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Grid center as a complex expression, e.g. `-1` or `0.5+0.5i`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub center: Option<String>,
    /// Width of the square viewport in the plane.
    #[arg(long, global = true, default_value_t = 4.0)]
    pub width: f64,
    #[arg(long, global = true, default_value_t = 256)]
    pub pixels: usize,
    #[arg(long, global = true, default_value_t = 1000)]
    pub max_iter: u32,
    /// Chordal capture radius.
    #[arg(long, global = true, default_value_t = 1e-6)]
    pub eps: f64,
    /// Basin image (PPM).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Also write the JSON document here.
    #[arg(long, global = true)]
    pub report: Option<PathBuf>,
    /// Largest rotation order searched.
    #[arg(long, global = true, default_value_t = 24)]
    pub kmax: u32,
    /// Relative coefficient tolerance.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Symmetry group, dynamics and verification report for a map.
    Analyze { input: String },
    /// Newton map of a polynomial compared with its symmetry group.
    Newton {
        input: String,
        #[arg(long)]
        render: bool,
    },
    Chebyshev {
        input: String,
        #[arg(long)]
        render: bool,
    },
    Konig {
        input: String,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        render: bool,
    },
    /// `z^m + λ/z^n`: predicted and detected order.
    Mcmullen {
        m: u32,
        n: u32,
        #[arg(allow_hyphen_values = true)]
        lambda: String,
    },
    /// Basin image, and optionally the boundary mask.
    Render {
        input: String,
        #[arg(long)]
        boundary: Option<PathBuf>,
    },
    /// Both verification planes at a given order and center.
    VerifySymmetry {
        input: String,
        #[arg(long)]
        order: u32,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub enum Task {
    Analyze { input: String },
    Method { input: String, method: Method, render: bool },
    McMullen { m: u32, n: u32, lambda: Complex64 },
    Render { input: String, boundary: Option<PathBuf> },
    VerifySymmetry { input: String, order: u32 },
}

/// Validated invocation.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub task: Task,
    pub center: Option<Complex64>,
    pub width: f64,
    pub pixels: usize,
    pub render: RenderParams<f64>,
    pub k_max: u32,
    pub tolerances: ToleranceConfig<f64>,
    pub out: Option<PathBuf>,
    pub report: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> Result<Self> {
        let invalid = |msg: String| Error::InvalidParameters("cli", msg);
        let mut tolerances = ToleranceConfig::default();
        if let Some(t) = cli.tol {
            tolerances = tolerances.with_coeff_rel_tol(t);
        }
        if !tolerances.is_valid() {
            return Err(invalid("--tol must lie in (0, 1)".into()));
        }
        if !(cli.eps > 0.0) {
            return Err(invalid("--eps must be positive".into()));
        }
        if cli.max_iter == 0 || cli.kmax < 1 {
            return Err(invalid("--max-iter and --kmax must be positive".into()));
        }
        // validates width and pixels
        GridSpec::new(Complex64::new(0.0, 0.0), cli.width, cli.pixels)?;
        let center = cli.center.as_deref().map(parse_complex::<f64>).transpose()?;
        let method = |input: String, method, render| Task::Method { input, method, render };
        let task = match cli.command {
            Command::Analyze { input } => Task::Analyze { input },
            Command::Newton { input, render } => method(input, Method::Newton, render),
            Command::Chebyshev { input, render } => method(input, Method::Chebyshev, render),
            Command::Konig { input, n, render } => {
                if !(2..=8).contains(&n) {
                    return Err(invalid(format!("--n must be in 2..=8, got {n}")));
                }
                method(input, Method::Konig(n), render)
            }
            Command::Mcmullen { m, n, lambda } => Task::McMullen {
                m,
                n,
                lambda: parse_complex(&lambda)?,
            },
            Command::Render { input, boundary } => Task::Render { input, boundary },
            Command::VerifySymmetry { input, order } => {
                if order == 0 {
                    return Err(invalid("--order must be positive".into()));
                }
                Task::VerifySymmetry { input, order }
            }
        };
        Ok(Self {
            task,
            center,
            width: cli.width,
            pixels: cli.pixels,
            render: RenderParams {
                max_iter: cli.max_iter,
                eps: cli.eps,
                workers: None,
            },
            k_max: cli.kmax,
            tolerances,
            out: cli.out,
            report: cli.report,
        })
    }

    fn options(&self) -> AnalyzeOptions<f64> {
        AnalyzeOptions {
            k_max: self.k_max,
            center: self.center,
            width: self.width,
            pixels: self.pixels,
            render: self.render,
            ..AnalyzeOptions::default()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Success,
    /// Results were produced but a hypothesis check failed.
    HypothesisFailed,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Success => 0,
            Status::HypothesisFailed => 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    /// JSON document, newline terminated.
    pub document: String,
    pub status: Status,
    pub artifacts: Vec<PathBuf>,
}

fn write_basins(input: &str, center: Complex64, config: &RunConfig, path: &Path, boundary: Option<&Path>) -> Result<String> {
    let r = parse_rational::<f64>(input, &config.tolerances)?;
    write_map_basins(&r, center, config, path, boundary)
}

fn write_map_basins(
    r: &julia_sym::RationalMap64,
    center: Complex64,
    config: &RunConfig,
    path: &Path,
    boundary: Option<&Path>,
) -> Result<String> {
    let grid = GridSpec::new(center, config.width, config.pixels)?;
    let img = render_basins(r, grid, &config.render, &config.tolerances)?;
    write_ppm(path, &basin_ppm_bytes(&img, &Palette::default()))?;
    if let Some(b) = boundary {
        write_ppm(b, &mask_ppm_bytes(&extract_boundary(&img)))?;
    }
    let summary = serde_json::json!({
        "map": r.to_string(),
        "center": [center.re, center.im],
        "width": config.width,
        "pixels": config.pixels,
        "attractors": img.attractors.len(),
        "undecidedFraction": img.undecided_fraction(),
    });
    Ok(serde_json::to_string_pretty(&summary).expect("summary serializes") + "\n")
}

pub fn run(config: &RunConfig) -> Result<Outcome> {
    let opts = config.options();
    let tol = &config.tolerances;
    let mut artifacts = Vec::new();
    let mut status = Status::Success;
    let document = match &config.task {
        Task::Analyze { input } => {
            let report = analyze::<f64>(input, &opts, tol)?;
            if report.hypothesis_failed() {
                status = Status::HypothesisFailed;
            }
            if let Some(path) = &config.out {
                let c = report.center.map_or(Complex64::new(0.0, 0.0), |c| Complex64::new(c.re, c.im));
                write_basins(input, config.center.unwrap_or(c), config, path, None)?;
                artifacts.push(path.clone());
            }
            report.to_json()
        }
        Task::Method { input, method, render } => {
            let (doc, report) = analyze_method::<f64>(input, *method, &opts, tol)?;
            if *render || config.out.is_some() {
                let path = config
                    .out
                    .clone()
                    .unwrap_or_else(|| PathBuf::from(format!("{}.ppm", method_file_stem(*method))));
                write_map_basins(&report.map, config.center.unwrap_or(report.center), config, &path, None)?;
                artifacts.push(path);
            }
            doc.to_json()
        }
        Task::McMullen { m, n, lambda } => {
            let doc = analyze_mcmullen(*m, *n, *lambda, config.k_max, tol)?;
            if doc.detected_order != doc.predicted_order {
                status = Status::HypothesisFailed;
            }
            doc.to_json()
        }
        Task::Render { input, boundary } => {
            let path = config.out.clone().unwrap_or_else(|| PathBuf::from("basins.ppm"));
            let center = config.center.unwrap_or(Complex64::new(0.0, 0.0));
            let summary = write_basins(input, center, config, &path, boundary.as_deref())?;
            artifacts.push(path);
            artifacts.extend(boundary.clone());
            summary
        }
        Task::VerifySymmetry { input, order } => {
            let center = config.center.unwrap_or(Complex64::new(0.0, 0.0));
            let doc = verify_symmetry::<f64>(input, *order, center, &opts, tol)?;
            if !doc.holds {
                status = Status::HypothesisFailed;
            }
            doc.to_json()
        }
    };
    if let Some(path) = &config.report {
        std::fs::write(path, &document).map_err(|source| Error::Io {
            path: path.clone(),
            source,
        })?;
        artifacts.push(path.clone());
    }
    Ok(Outcome {
        document,
        status,
        artifacts,
    })
}

fn method_file_stem(method: Method) -> String {
    match method {
        Method::Konig(n) => format!("konig{n}"),
        m => m.name(),
    }
}

/// Parses `args`, runs, prints, and returns the process exit code.
pub fn main_with_args<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match RunConfig::from_cli(cli).and_then(|c| run(&c)) {
        Ok(outcome) => {
            print!("{}", outcome.document);
            outcome.status.exit_code()
        }
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}
