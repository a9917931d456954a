use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use spectral_cone::cone::{parse_coords, ConeElement, State};
use spectral_cone::divergence::{builtin_suite, check_locality, check_sufficiency, Divergence, DEFAULT_T_GRID};
use spectral_cone::geometry::{decompose, StateSpace};
use spectral_cone::jordan::{check_concavity, euclidean_check, Algebra};
use spectral_cone::spectral::{entropy, entropy_landscape, is_spectral};
use spectral_cone::{CheckReport, Error};

const RECONSTRUCTION_TOL: f64 = 1e-9;

#[derive(Parser)]
#[command(name = "spectral-cone", version, about = "Orthogonal decompositions, entropy and divergence checks on convex state spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Seed for every random draw.
    #[arg(long, global = true, env = "SPECTRAL_CONE_SEED", default_value_t = 42)]
    seed: u64,
    /// Write the main output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Orthogonal decomposition of a cone element.
    Decompose(ElementArgs),
    /// Entropy of a cone element.
    Entropy(ElementArgs),
    /// D(element, to) for a divergence.
    Divergence {
        #[command(flatten)]
        element: ElementArgs,
        #[arg(long)]
        to: String,
        #[arg(long, default_value = "kl")]
        divergence: String,
    },
    /// Run a property checker.
    Check {
        #[command(subcommand)]
        check: Check,
    },
    /// Entropy over a grid covering a two-dimensional state space.
    Landscape {
        #[arg(long)]
        space: String,
        #[arg(long, default_value_t = 101)]
        grid: usize,
    },
}

#[derive(Args)]
struct ElementArgs {
    /// Named space (simplex3, square, disc, complex2, ...), inline JSON or a file.
    #[arg(long)]
    space: Option<String>,
    /// Coordinates, `{"trace": t, "coords": ...}`, a full element, or a file.
    #[arg(long)]
    element: String,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Subcommand)]
enum Check {
    Locality {
        #[arg(long)]
        space: String,
        #[arg(long, default_value = "kl")]
        divergence: String,
        #[command(flatten)]
        args: CheckArgs,
    },
    Sufficiency {
        #[arg(long)]
        space: String,
        #[arg(long, default_value = "kl")]
        divergence: String,
        #[command(flatten)]
        args: CheckArgs,
    },
    Spectrality {
        #[arg(long)]
        space: String,
        #[command(flatten)]
        args: CheckArgs,
    },
    Concavity {
        #[arg(long)]
        algebra: String,
        #[command(flatten)]
        args: CheckArgs,
    },
    Euclidean {
        #[arg(long)]
        algebra: String,
        #[command(flatten)]
        args: CheckArgs,
    },
}

/// Output text and whether the run passed.
struct Outcome {
    text: String,
    pass: bool,
    sidecar: Option<(String, String)>,
}

/// Inline text, or the contents of the file it names.
fn inline_or_file(text: &str) -> Result<String, Error> {
    let path = Path::new(text);
    if !text.trim_start().starts_with(['{', '[']) && path.is_file() {
        return fs::read_to_string(path).map_err(|e| Error::Parse(format!("{text}: {e}")));
    }
    Ok(text.to_string())
}

fn parse_space(text: &str) -> Result<Arc<StateSpace>, Error> {
    StateSpace::parse(&inline_or_file(text)?)
}

fn parse_element(args: &ElementArgs) -> Result<ConeElement, Error> {
    let value: Value =
        serde_json::from_str(&inline_or_file(&args.element)?).map_err(|e| Error::Parse(format!("element: {e}")))?;
    if value.get("space").is_some() {
        return serde_json::from_value(value).map_err(|e| Error::Parse(e.to_string()));
    }
    let space = parse_space(
        args.space
            .as_deref()
            .ok_or_else(|| Error::Parse("--space is required unless the element names its space".into()))?,
    )?;
    let (trace, coords) = match value.get("coords") {
        Some(c) => (value.get("trace").and_then(Value::as_f64).unwrap_or(1.0), c.clone()),
        None => (1.0, value),
    };
    let coords = parse_coords(&space, &coords)?;
    ConeElement::new(space, trace, coords)
}

fn parse_state(space: &Arc<StateSpace>, text: &str) -> Result<State, Error> {
    let value: Value = serde_json::from_str(&inline_or_file(text)?).map_err(|e| Error::Parse(format!("element: {e}")))?;
    let coords = value.get("coords").cloned().unwrap_or(value);
    State::new(space.clone(), parse_coords(space, &coords)?)
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json serializes") + "\n"
}

fn report_outcome(report: &CheckReport, format: Format) -> Outcome {
    let text = match format {
        Format::Json => report.to_json() + "\n",
        Format::Csv => {
            let gap = spectral_cone::report::extended_value(report.max_gap);
            format!(
                "check,pass,max_gap,trials,seed\n{},{},{},{},{}\n",
                report.check, report.pass, gap, report.trials, report.seed
            )
        }
    };
    Outcome {
        text,
        pass: report.pass,
        sidecar: None,
    }
}

fn run_decompose(args: &ElementArgs) -> Result<Outcome, Error> {
    let x = parse_element(args)?;
    let dec = decompose(&x)?;
    let bound = x.space().dimension() + 1;
    let error = dec.reconstruction_error(&x);
    let holds = dec.len() <= bound;
    let value = json!({
        "space": x.space().to_string(),
        "trace": x.trace(),
        "weights": dec.weights,
        "spectrum": dec.spectrum(),
        "components": dec.components,
        "witnesses": dec.witnesses,
        "reconstruction_error": error,
        "caratheodory": {"support": dec.len(), "bound": bound, "holds": holds},
    });
    Ok(Outcome {
        text: pretty(&value),
        pass: holds && error <= RECONSTRUCTION_TOL,
        sidecar: None,
    })
}

fn run_entropy(args: &ElementArgs) -> Result<Outcome, Error> {
    let x = parse_element(args)?;
    let h = entropy(&x)?;
    let spectrum = if x.is_apex() { Value::Array(vec![]) } else { json!(decompose(&x)?.spectrum()) };
    Ok(Outcome {
        text: pretty(&json!({"space": x.space().to_string(), "trace": x.trace(), "entropy": h, "spectrum": spectrum})),
        pass: true,
        sidecar: None,
    })
}

fn run_divergence(args: &ElementArgs, to: &str, name: &str) -> Result<Outcome, Error> {
    let x = parse_element(args)?;
    let s1 = x.state()?.clone();
    let s2 = parse_state(x.space(), to)?;
    let div: Divergence = name.parse::<Divergence>()?.for_space(x.space());
    let d = div.evaluate(&s1, &s2)?;
    Ok(Outcome {
        text: pretty(&json!({"divergence": div.to_string(), "space": x.space().to_string(), "value": d})),
        pass: true,
        sidecar: None,
    })
}

fn spectrality_report(space: &Arc<StateSpace>, samples: usize, seed: u64) -> Result<CheckReport, Error> {
    let verdict = is_spectral(space, samples, seed)?;
    let gap = verdict.witness.as_ref().map_or(0.0, |w| {
        let (a, b) = (w.low_entropy.spectrum(), w.high_entropy.spectrum());
        let (a, b) = (a.weights(), b.weights());
        (0..a.len().max(b.len()))
            .map(|i| (a.get(i).copied().unwrap_or(0.0) - b.get(i).copied().unwrap_or(0.0)).abs())
            .fold(0.0, f64::max)
    });
    let witness = serde_json::to_value(&verdict.witness).expect("witness serializes");
    Ok(CheckReport::new("spectrality", verdict.spectral, gap, witness, verdict.states_checked, seed)
        .with("space", space.to_string())
        .with("analytic", verdict.analytic))
}

fn run_check(check: &Check, seed: u64) -> Result<CheckReport, Error> {
    let limits = |a: &CheckArgs, trials: usize, tol: f64| (a.trials.unwrap_or(trials), a.tol.unwrap_or(tol));
    match check {
        Check::Locality { space, divergence, args } => {
            let space = parse_space(space)?;
            let div = divergence.parse::<Divergence>()?.for_space(&space);
            let (trials, tol) = limits(args, 1000, 1e-7);
            check_locality(&div, &space, trials, &DEFAULT_T_GRID, tol, seed)
        }
        Check::Sufficiency { space, divergence, args } => {
            let space = parse_space(space)?;
            let div = divergence.parse::<Divergence>()?.for_space(&space);
            let (trials, tol) = limits(args, 200, 1e-9);
            let suite = builtin_suite(&space, seed)?;
            check_sufficiency(&div, &space, &suite, trials, tol, seed)
        }
        Check::Spectrality { space, args } => spectrality_report(&parse_space(space)?, limits(args, 100, 0.0).0, seed),
        Check::Concavity { algebra, args } => check_concavity(algebra.parse::<Algebra>()?, limits(args, 1000, 0.0).0, seed),
        Check::Euclidean { algebra, args } => euclidean_check(algebra.parse::<Algebra>()?, limits(args, 1000, 0.0).0, seed),
    }
}

fn run(cli: &Cli) -> Result<Outcome, Error> {
    let format = cli.format.unwrap_or(match cli.command {
        Command::Landscape { .. } => Format::Csv,
        _ => Format::Json,
    });
    if format == Format::Csv && !matches!(cli.command, Command::Landscape { .. } | Command::Check { .. }) {
        return Err(Error::Parse("csv output is available for landscape and check".into()));
    }
    match &cli.command {
        Command::Decompose(args) => run_decompose(args),
        Command::Entropy(args) => run_entropy(args),
        Command::Divergence { element, to, divergence } => run_divergence(element, to, divergence),
        Command::Check { check } => Ok(report_outcome(&run_check(check, cli.seed)?, format)),
        Command::Landscape { space, grid } => {
            let landscape = entropy_landscape(&parse_space(space)?, *grid)?;
            let maxima = landscape.maxima_json() + "\n";
            let text = match format {
                Format::Csv => landscape.to_csv(),
                Format::Json => pretty(&serde_json::to_value(&landscape).expect("landscape serializes")),
            };
            let sidecar = cli.out.as_ref().map(|out| {
                let mut path = out.clone().into_os_string();
                path.push(".maxima.json");
                (path.to_string_lossy().into_owned(), maxima.clone())
            });
            if sidecar.is_none() {
                eprint!("{maxima}");
            }
            Ok(Outcome { text, pass: true, sidecar })
        }
    }
}

fn write(path: &Path, text: &str) -> Result<(), Error> {
    fs::write(path, text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let outcome = run(&cli).and_then(|o| {
        match &cli.out {
            Some(path) => write(path, &o.text)?,
            None => print!("{}", o.text),
        }
        if let Some((path, text)) = &o.sidecar {
            write(Path::new(path), text)?;
            print!("{text}");
        }
        Ok(o.pass)
    });
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
