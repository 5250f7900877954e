use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use netform_cli::commands;
use netform_cli::io::{
    edge_list, read_edge_list, read_script, trace_csv, write_stdout, write_text,
};
use netform_cli::sweep::{grid, sweep, sweep_csv, sweep_svg, SweepParam};
use netform_cli::{CliError, Scenario, SpaceKind};
use netform_core::{Network, PairSelector};

#[derive(Parser)]
#[command(
    name = "netform",
    version,
    about = "Multigroup strategic network formation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Scenario file (TOML)
    #[arg(long, global = true)]
    scenario: Option<PathBuf>,
    /// Output file or directory
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for random pair activation; overrides the scenario
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Search space; overrides the scenario
    #[arg(long, global = true)]
    space: Option<Space>,
    /// Dynamics step cap; overrides the scenario
    #[arg(long, global = true)]
    max_steps: Option<usize>,
    /// Indifference tolerance; overrides the scenario
    #[arg(long, global = true)]
    epsilon: Option<f64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Space {
    Full,
    Inter,
}

#[derive(Subcommand)]
enum Command {
    /// Per-node payoffs and welfare of a network
    Eval {
        /// Edge-list file
        #[arg(long)]
        network: PathBuf,
    },
    /// Regimes and boundaries predicted by the closed-form bounds
    Classify,
    /// Sweep one parameter and emit CSV
    Sweep {
        /// F12, s1, delta or cost
        #[arg(long)]
        param: String,
        #[arg(long)]
        from: f64,
        #[arg(long)]
        to: f64,
        #[arg(long)]
        step: f64,
        /// Also write an SVG chart of the count columns
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Run the formation dynamics and emit the trace CSV
    Dynamics {
        /// Pair script, one "i j" per line; replaces random activation
        #[arg(long)]
        script: Option<PathBuf>,
        /// Initial network as an edge list
        #[arg(long, conflicts_with = "start")]
        initial: Option<PathBuf>,
        /// Initial network when no edge list is given
        #[arg(long, value_enum, default_value = "empty")]
        start: Start,
        /// Where to write the final network
        #[arg(long)]
        final_network: Option<PathBuf>,
    },
    /// Enumerate pairwise stable networks
    Stable,
    /// Enumerate welfare-maximising networks
    Efficient,
    /// Price of anarchy over the search space
    Poa,
}

#[derive(Clone, Copy, ValueEnum)]
enum Start {
    Empty,
    Cliques,
}

fn load(cli: &Cli) -> Result<Scenario, CliError> {
    let path = cli
        .scenario
        .as_ref()
        .ok_or_else(|| CliError::Invalid("--scenario is required".into()))?;
    let mut s = Scenario::load(path)?;
    if let Some(seed) = cli.seed {
        s.seed = Some(seed);
    }
    if let Some(space) = cli.space {
        s.space = match space {
            Space::Full => SpaceKind::Full,
            Space::Inter => SpaceKind::Inter,
        };
    }
    if let Some(k) = cli.max_steps {
        s.max_steps = k;
    }
    if let Some(e) = cli.epsilon {
        s.epsilon = e;
    }
    s.validate()?;
    Ok(s)
}

fn emit(out: Option<&PathBuf>, text: &str) -> Result<(), CliError> {
    match out {
        Some(p) => write_text(p, text),
        None => write_stdout(text),
    }
}

fn execute(cli: &Cli) -> Result<(), CliError> {
    let scenario = load(cli)?;
    let out = cli.out.as_ref();
    match &cli.command {
        Command::Eval { network } => {
            let net = read_edge_list(network, scenario.n())?;
            emit(out, &commands::eval(&scenario, &net)?)
        }
        Command::Classify => emit(out, &commands::classify(&scenario)?),
        Command::Sweep {
            param,
            from,
            to,
            step,
            svg,
        } => {
            let param: SweepParam = param.parse()?;
            let rows = sweep(&scenario, param, &grid(*from, *to, *step)?)?;
            if let Some(p) = svg {
                write_text(p, &sweep_svg(param, &rows))?;
            }
            emit(out, &sweep_csv(param, &rows)?)
        }
        Command::Dynamics {
            script,
            initial,
            start,
            final_network,
        } => {
            let society = scenario.society()?;
            let n = society.n();
            let e0 = match (initial, start) {
                (Some(p), _) => read_edge_list(p, n)?,
                (None, Start::Empty) => {
                    Network::empty(n).map_err(|e| CliError::Invalid(e.to_string()))?
                }
                (None, Start::Cliques) => society.disjoint_cliques(),
            };
            let selector = match script {
                Some(p) => PairSelector::Scripted(read_script(p, n)?),
                None => PairSelector::SeededUniform(scenario.seed.ok_or_else(|| {
                    CliError::Invalid("random activation needs --seed or a scenario seed".into())
                })?),
            };
            let trace = commands::dynamics(&scenario, &society, &e0, &selector)?;
            if let Some(p) = final_network {
                write_text(p, &edge_list(&trace.final_network))?;
            }
            let csv = trace_csv(&trace)?;
            match out {
                Some(p) => {
                    write_text(p, &csv)?;
                    write_stdout(&commands::dynamics_summary(&society, &trace))
                }
                None => {
                    write_stdout(&csv)?;
                    eprint!("{}", commands::dynamics_summary(&society, &trace));
                    Ok(())
                }
            }
        }
        Command::Stable => write_stdout(&commands::stable(&scenario, out.map(|p| p.as_path()))?),
        Command::Efficient => {
            write_stdout(&commands::efficient(&scenario, out.map(|p| p.as_path()))?)
        }
        Command::Poa => emit(out, &commands::poa(&scenario)?),
    }
}

fn main() -> ExitCode {
    // clap reports usage errors with status 2, which is reserved for caps
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
