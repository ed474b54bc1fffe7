use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use tdg::cli::{cmd_check, cmd_run, cmd_sweep, load_scenario, load_sweep_spec};
use tdg::sim::Mode;

#[derive(Parser)]
#[command(
    name = "tdg",
    about = "2v2 target-defense differential game simulator",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Nominal,
    #[value(name = "one-dev")]
    OneDev,
    #[value(name = "two-dev")]
    TwoDev,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Nominal => Mode::Nominal,
            ModeArg::OneDev => Mode::OneDeviation,
            ModeArg::TwoDev => Mode::TwoDeviation,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Simulate one scenario and write trace.csv and summary.json.
    Run {
        #[arg(long)]
        scenario: PathBuf,
        /// Strategy profile; defaults to the scenario's `mode` field.
        #[arg(long)]
        mode: Option<ModeArg>,
        /// Integration step override.
        #[arg(long)]
        dt: Option<f64>,
        /// Capture radius override.
        #[arg(long = "eps")]
        eps: Option<f64>,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Run a win-region sweep and write one CSV row per cell per mode.
    Sweep {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the cost matrix, assignment, and deviation feasibility.
    Check {
        #[arg(long)]
        scenario: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run {
            scenario,
            mode,
            dt,
            eps,
            out_dir,
        } => load_scenario(&scenario)
            .and_then(|s| cmd_run(&s, mode.map(Mode::from), dt, eps, &out_dir))
            .map(|artifacts| {
                let s = &artifacts.summary;
                println!(
                    "mode {}: winner {}, payoff {:.6}, t_f1 {}, t_f {:.4}",
                    s.mode,
                    s.winner,
                    s.payoff,
                    s.t_f1
                        .map(|t| format!("{t:.4}"))
                        .unwrap_or_else(|| "-".into()),
                    s.t_f
                );
                if artifacts.trace.flags.fallback_to_nominal {
                    eprintln!("warning: requested deviation infeasible, ran nominal strategies");
                }
                artifacts.exit_code
            }),
        Command::Sweep { spec, out } => load_sweep_spec(&spec)
            .and_then(|s| cmd_sweep(&s, &out))
            .map(|rows| {
                println!("wrote {rows} rows to {}", out.display());
                0
            }),
        Command::Check { scenario } => {
            load_scenario(&scenario)
                .and_then(|s| cmd_check(&s))
                .map(|report| {
                    print!("{report}");
                    0
                })
        }
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
