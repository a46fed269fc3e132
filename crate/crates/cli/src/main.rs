//! `psteiner`: construct, verify, optimize and export periodic Steiner
//! networks. Exit codes: 0 success, 2 validation failure, 3 non-convergence,
//! 4 I/O or parse error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use periodic_steiner::families::{
    construct_hexagonal, construct_srs, construct_ths, Chirality, HexParams, SrsParams, ThsParams,
};
use periodic_steiner::homotopy::{homotopy_length_profile, homotopy_network, HomotopyParams};
use periodic_steiner::io::{
    check_precision, export_obj, lattice_from_json, network_from_json, network_to_json, report_ratio, to_json_string,
    ToolConfig,
};
use periodic_steiner::network::STEINER_TOLERANCE;
use periodic_steiner::optimize::{
    embedded_network, maximize_volume_on_simplex, minimize_embedding_multistart, EmbeddingProblem, SimplexFamily,
    SimplexProblem,
};
use periodic_steiner::symmetric::{network_lagrange_report, LagrangeReport};
use periodic_steiner::{CellRange, Error, Network64, ValidationReport};

#[derive(Debug, Parser)]
#[command(name = "psteiner", version, about = "Lattice-periodic Steiner networks")]
struct Cli {
    /// Master seed for randomized solvers (overrides the config file).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Flat `key = value` configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Significant digits for floats in output, 6 to 17.
    #[arg(long, global = true)]
    precision: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Family {
    Hex,
    Ths,
    Srs,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Mode {
    Simplex,
    Embedding,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a closed-form family member and write it as network JSON.
    Construct {
        #[arg(long, value_enum)]
        family: Family,
        /// Comma-separated edge lengths (3 for hex, 6 for ths and srs).
        #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
        lengths: Vec<f64>,
        /// ths rotation angle in radians, inside (0, π).
        #[arg(long, default_value_t = std::f64::consts::FRAC_PI_2)]
        alpha: f64,
        /// srs handedness, +1 or -1.
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        chirality: i32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Report length, volume, ratio, balancing and quotient checks.
    Verify {
        #[arg(long)]
        net: PathBuf,
        /// Also require a Steiner network (cubic, loop-free, balanced).
        #[arg(long)]
        strict: bool,
    },
    /// Maximize a family volume on the simplex, or minimize length for a
    /// fixed quotient graph and lattice.
    Optimize {
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long, value_enum, required_if_eq("mode", "simplex"))]
        family: Option<Family>,
        #[arg(long, required_if_eq("mode", "embedding"))]
        net: Option<PathBuf>,
        /// Lattice JSON; defaults to the lattice stored in `--net`.
        #[arg(long)]
        lattice: Option<PathBuf>,
        /// Initial positions: `file` (from `--net`) or `random`.
        #[arg(long, default_value = "random")]
        init: String,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        max_iter: Option<usize>,
        #[arg(long)]
        starts: Option<usize>,
        /// Write the optimized network (embedding mode).
        #[arg(long)]
        out_net: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Length profile of the ths-to-K4 homotopy.
    Homotopy {
        #[arg(long)]
        xi: f64,
        #[arg(long, default_value_t = 101)]
        samples: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Directory receiving one network JSON per sample.
        #[arg(long)]
        export_frames: Option<PathBuf>,
    },
    /// Compare `L^n/V` against the three reference bounds.
    Ratio {
        #[arg(long)]
        net: PathBuf,
    },
    /// Write the lifted network over a block of cells as OBJ line geometry.
    Export {
        #[arg(long)]
        net: PathBuf,
        /// Cells per axis, comma-separated (default one cell).
        #[arg(long, value_delimiter = ',')]
        cells: Option<Vec<i64>>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug)]
enum Failure {
    Validation(String),
    NotConverged(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Validation(_) => 2,
            Failure::NotConverged(_) => 3,
            Failure::Io(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Validation(m) | Failure::NotConverged(m) | Failure::Io(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_) => Failure::Io(e.to_string()),
            other => Failure::Validation(other.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

struct Settings {
    config: ToolConfig,
    precision: usize,
    seed: u64,
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Outcome {
    fs::write(path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> Outcome {
    match out {
        Some(path) => write(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Straight degree-2 vertices are merged away on load.
fn load_network(path: &Path) -> Result<Network64, Failure> {
    Ok(network_from_json::<f64>(&read(path)?)?.canonicalized())
}

fn settings(cli: &Cli) -> Result<Settings, Failure> {
    let config = match &cli.config {
        Some(path) => ToolConfig::parse(&read(path)?)?,
        None => ToolConfig::default(),
    };
    let precision = check_precision(cli.precision.unwrap_or(config.output_precision))?;
    let seed = cli.seed.unwrap_or(config.seed);
    Ok(Settings {
        config,
        precision,
        seed,
    })
}

fn construct(family: Family, lengths: &[f64], alpha: f64, chirality: i32) -> Result<Network64, Failure> {
    let expect = |n: usize| {
        if lengths.len() == n {
            Ok(())
        } else {
            Err(Failure::Validation(format!(
                "expected {n} lengths, got {}",
                lengths.len()
            )))
        }
    };
    let net = match family {
        Family::Hex => {
            expect(3)?;
            construct_hexagonal(&HexParams::new(lengths[0], lengths[1], lengths[2])?)?
        }
        Family::Ths => {
            expect(6)?;
            let x: [f64; 6] = lengths.try_into().expect("six lengths");
            construct_ths(&ThsParams::new(x, alpha)?)?
        }
        Family::Srs => {
            expect(6)?;
            let x: [f64; 6] = lengths.try_into().expect("six lengths");
            let c = Chirality::from_sign(chirality)
                .ok_or_else(|| Failure::Validation(format!("chirality must be +1 or -1, got {chirality}")))?;
            construct_srs(&SrsParams::new(x, c)?)?
        }
    };
    Ok(net)
}

#[derive(Serialize)]
struct VerifyReport {
    validation: ValidationReport,
    length: f64,
    volume: f64,
    ratio: f64,
    balancing_residuals: Vec<f64>,
    max_balancing_residual: f64,
    steiner: bool,
    family: Option<&'static str>,
    lagrange: Option<LagrangeReport<f64>>,
    passed: bool,
}

fn verify(s: &Settings, net: &Path, strict: bool) -> Outcome {
    let net = load_network(net)?;
    let validation = net.graph().validate(strict);
    let tol = s.config.tolerance("steiner", STEINER_TOLERANCE);
    let steiner = net.is_steiner(tol);
    let lagrange = network_lagrange_report(&net);
    let passed = validation.passed && (!strict || steiner);
    let report = VerifyReport {
        length: net.length(),
        volume: net.volume(),
        ratio: net.ratio()?,
        balancing_residuals: net.balancing_residual(),
        max_balancing_residual: net.max_balancing_residual(),
        steiner,
        family: lagrange.as_ref().map(|(k, _)| k.name()),
        lagrange: lagrange.map(|(_, r)| r),
        validation,
        passed,
    };
    emit(None, &to_json_string(&report, s.precision)?)?;
    if passed {
        Ok(())
    } else {
        Err(Failure::Validation("network failed verification".into()))
    }
}

fn simplex_family(f: Family) -> SimplexFamily {
    match f {
        Family::Hex => SimplexFamily::Hex,
        Family::Ths => SimplexFamily::ThsReduced,
        Family::Srs => SimplexFamily::Srs,
    }
}

#[allow(clippy::too_many_arguments)]
fn optimize(
    s: &Settings,
    mode: Mode,
    family: Option<Family>,
    net: Option<&Path>,
    lattice: Option<&Path>,
    init: &str,
    tol: Option<f64>,
    max_iter: Option<usize>,
    starts: Option<usize>,
    out_net: Option<&Path>,
    out: Option<&Path>,
) -> Outcome {
    let (report, network) = match mode {
        Mode::Simplex => {
            let family = family.ok_or_else(|| Failure::Validation("--family is required".into()))?;
            let mut problem = SimplexProblem::new(simplex_family(family));
            problem.seed = s.seed;
            problem.tolerance = tol.unwrap_or_else(|| s.config.tolerance("simplex", problem.tolerance));
            if let Some(m) = max_iter {
                problem.max_iterations = m;
            }
            let outcome = maximize_volume_on_simplex(&problem, starts.unwrap_or(32))?;
            (outcome.best, None)
        }
        Mode::Embedding => {
            let path = net.ok_or_else(|| Failure::Validation("--net is required".into()))?;
            let source = load_network(path)?;
            let lattice = match lattice {
                Some(p) => lattice_from_json(&read(p)?)?,
                None => source.lattice().clone(),
            };
            let mut problem = EmbeddingProblem::new(source.graph().clone(), lattice);
            problem.seed = s.seed;
            problem.tolerance = tol.unwrap_or_else(|| s.config.tolerance("embedding", problem.tolerance));
            problem.smoothing = s.config.tolerance("smoothing", problem.smoothing);
            if let Some(m) = max_iter {
                problem.max_iterations = m;
            }
            match init {
                "random" => {}
                "file" => problem.initial_positions = Some(source.positions().to_vec()),
                other => {
                    return Err(Failure::Validation(format!(
                        "--init must be `file` or `random`, got `{other}`"
                    )))
                }
            }
            let outcome = minimize_embedding_multistart(&problem, starts.unwrap_or(1))?;
            let network = embedded_network(&problem, &outcome.best).ok();
            (outcome.best, network)
        }
    };
    if let (Some(path), Some(net)) = (out_net, &network) {
        write(path, &network_to_json(net, s.precision)?)?;
    }
    emit(out, &to_json_string(&report, s.precision)?)?;
    if report.converged {
        Ok(())
    } else {
        Err(Failure::NotConverged(format!("solver stopped: {:?}", report.status)))
    }
}

fn homotopy(s: &Settings, xi: f64, samples: usize, out: Option<&Path>, frames: Option<&Path>) -> Outcome {
    let profile = homotopy_length_profile(xi, samples)?;
    if let Some(dir) = frames {
        fs::create_dir_all(dir).map_err(|e| Failure::Io(format!("{}: {e}", dir.display())))?;
        let width = (samples - 1).to_string().len();
        for (k, point) in profile.iter().enumerate() {
            let net = homotopy_network(&HomotopyParams::new(xi, point.t)?)?;
            let path = dir.join(format!("frame_{k:0width$}.json"));
            write(&path, &network_to_json(&net, s.precision)?)?;
        }
    }
    emit(out, &to_json_string(&profile, s.precision)?)
}

fn run(cli: Cli) -> Outcome {
    let s = settings(&cli)?;
    match cli.command {
        Command::Construct {
            family,
            lengths,
            alpha,
            chirality,
            out,
        } => {
            let net = construct(family, &lengths, alpha, chirality)?;
            emit(out.as_deref(), &network_to_json(&net, s.precision)?)
        }
        Command::Verify { net, strict } => verify(&s, &net, strict),
        Command::Optimize {
            mode,
            family,
            net,
            lattice,
            init,
            tol,
            max_iter,
            starts,
            out_net,
            out,
        } => optimize(
            &s,
            mode,
            family,
            net.as_deref(),
            lattice.as_deref(),
            &init,
            tol,
            max_iter,
            starts,
            out_net.as_deref(),
            out.as_deref(),
        ),
        Command::Homotopy {
            xi,
            samples,
            out,
            export_frames,
        } => homotopy(&s, xi, samples, out.as_deref(), export_frames.as_deref()),
        Command::Ratio { net } => {
            let net = load_network(&net)?;
            emit(None, &to_json_string(&report_ratio(&net)?, s.precision)?)
        }
        Command::Export { net, cells, out } => {
            let net = load_network(&net)?;
            let counts = cells.unwrap_or_else(|| vec![1; net.dimension()]);
            let text = export_obj(&net, &CellRange::counts(&counts), s.precision)?;
            emit(out.as_deref(), &text)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("psteiner: {}", failure.message());
            ExitCode::from(failure.code())
        }
    }
}
