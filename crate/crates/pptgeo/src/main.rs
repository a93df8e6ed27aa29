use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use pptgeo::config::{capacity_from_env, parse_pairs, ExperimentConfig};
use pptgeo::error::{io, CliError};
use pptgeo::plot::{plot_export, PlotKind};
use pptgeo::table::render_json;

#[derive(Parser)]
#[command(name = "pptgeo", version, about = "Private-state constructions, PPT bounds and convex-geometry experiments")]
struct Cli {
    /// Master seed of every random stream.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Data file to write; its manifest goes to <out>.manifest.json. Without
    /// it the data goes to stdout and the manifest to stderr.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Table format.
    #[arg(long, global = true, value_parser = ["csv", "json"])]
    format: Option<String>,
    /// key=value config file; flags given on the command line take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Eigenvalue tolerance of PSD and PPT checks.
    #[arg(long, global = true)]
    tol_eig: Option<f64>,
    /// Feasibility tolerance of the convex solvers.
    #[arg(long, global = true)]
    tol_feas: Option<f64>,
    /// Value tolerance of the convex solvers.
    #[arg(long, global = true)]
    solver_tol: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the flower state and check it against its closed forms.
    Construct {
        #[arg(long)]
        ds: Option<usize>,
    },
    /// Boost plan for a target epsilon, or the bound grid over (l, d_s).
    Bounds {
        #[arg(long)]
        epsilon: Option<f64>,
        /// lmin:lmax,dsmin:dsmax
        #[arg(long)]
        grid: Option<String>,
    },
    /// Dense distance between l-fold tensor powers against the closed form.
    Boost {
        #[arg(long)]
        l: Option<u32>,
        #[arg(long)]
        ds: Option<usize>,
    },
    /// Support functions of PPT and separable states on random directions.
    Widths {
        #[arg(long)]
        d: Option<usize>,
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Operator norms of random traceless unit directions.
    Wigner {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Privacy squeezing of a state file (default: the flower state).
    Squeeze {
        #[arg(long = "in")]
        input: Option<PathBuf>,
        #[arg(long)]
        ds: Option<usize>,
    },
    /// Distance of PPT states to the private bit against the lower bound.
    Gap {
        #[arg(long)]
        ds: Option<usize>,
        /// Number of random PPT states to add.
        #[arg(long)]
        random: Option<usize>,
    },
    /// Largest overlap of a pure state with PPT states.
    FidelityPpt {
        /// Comma-separated Schmidt coefficients; random vectors otherwise.
        #[arg(long)]
        schmidt: Option<String>,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Run the experiment named in the config file.
    Run,
    /// Render a widths, wigner or bounds table as SVG.
    Plot {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        kind: Option<String>,
    },
}

fn set<T: ToString>(pairs: &mut BTreeMap<String, String>, key: &str, value: Option<T>) {
    if let Some(v) = value {
        pairs.insert(key.to_string(), v.to_string());
    }
}

fn path_string(p: Option<PathBuf>) -> Option<String> {
    p.map(|p| p.display().to_string())
}

fn build_config(cli: Cli) -> Result<ExperimentConfig, CliError> {
    let mut pairs = match &cli.config {
        Some(path) => parse_pairs(&std::fs::read_to_string(path).map_err(io(path))?)?,
        None => BTreeMap::new(),
    };
    let from_file = pairs.get("experiment").cloned();
    let mut flags = BTreeMap::new();
    let name = match cli.command {
        Command::Construct { ds } => {
            set(&mut flags, "ds", ds);
            Some("construct")
        }
        Command::Bounds { epsilon, grid } => {
            set(&mut flags, "epsilon", epsilon);
            set(&mut flags, "grid", grid);
            Some("bounds")
        }
        Command::Boost { l, ds } => {
            set(&mut flags, "l", l);
            set(&mut flags, "ds", ds);
            Some("boost")
        }
        Command::Widths { d, samples } => {
            set(&mut flags, "d", d);
            set(&mut flags, "samples", samples);
            Some("widths")
        }
        Command::Wigner { n, samples } => {
            set(&mut flags, "n", n);
            set(&mut flags, "samples", samples);
            Some("wigner")
        }
        Command::Squeeze { input, ds } => {
            set(&mut flags, "in", path_string(input));
            set(&mut flags, "ds", ds);
            Some("squeeze")
        }
        Command::Gap { ds, random } => {
            set(&mut flags, "ds", ds);
            set(&mut flags, "random", random);
            Some("gap")
        }
        Command::FidelityPpt { schmidt, d, samples } => {
            set(&mut flags, "schmidt", schmidt);
            set(&mut flags, "d", d);
            set(&mut flags, "samples", samples);
            Some("fidelity-ppt")
        }
        Command::Run => None,
        Command::Plot { .. } => unreachable!("plot is handled before config assembly"),
    };
    if let (Some(name), Some(file)) = (name, &from_file) {
        if name != file {
            return Err(CliError::Config(format!("subcommand {name} conflicts with experiment={file} in the config file")));
        }
    }
    set(&mut flags, "experiment", name);
    set(&mut flags, "seed", cli.seed);
    set(&mut flags, "out", path_string(cli.out));
    set(&mut flags, "format", cli.format);
    set(&mut flags, "tol_eig", cli.tol_eig);
    set(&mut flags, "tol_feas", cli.tol_feas);
    set(&mut flags, "solver_tol", cli.solver_tol);
    pairs.extend(flags);
    ExperimentConfig::from_pairs(pairs, capacity_from_env()?)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Command::Plot { input, kind } = &cli.command {
        let Some(out) = &cli.out else {
            eprintln!("error: plot needs --out");
            return ExitCode::from(2);
        };
        let result = kind.as_deref().map(str::parse::<PlotKind>).transpose().map_err(CliError::Plot).and_then(|k| plot_export(input, k, out));
        return match result {
            Ok(_) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(2)
            }
        };
    }
    let output = match build_config(cli).and_then(|cfg| {
        let to_stdout = cfg.out.is_none();
        pptgeo::run(&cfg).map(|o| (o, to_stdout))
    }) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let (output, to_stdout) = output;
    if to_stdout {
        let mut stdout = std::io::stdout().lock();
        if stdout.write_all(&output.data).and_then(|_| stdout.flush()).is_err() {
            return ExitCode::from(2);
        }
        eprint!("{}", String::from_utf8_lossy(&render_json(&output.manifest.to_json())));
    }
    for inv in output.manifest.failed() {
        eprintln!("invariant failed: {}: {}", inv.name, inv.detail);
    }
    if output.manifest.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
