use std::process::ExitCode;

use anyhow::Result;
use clap::{Args, Parser, Subcommand, ValueEnum};
use wysx::bundle::{load_inputs, load_program, InputArg};
use wysx::cmd::{self, parse_schedule, Report, RunMode, Suite};
use wysx_core::ds::Schedule;
use wysx_core::st::DEFAULT_FUEL;

/// Runs mixed-mode secure computation programs and checks them.
#[derive(Parser)]
#[command(name = "wysx", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a program and print each party's value and trace as JSON.
    Run {
        #[command(flatten)]
        prog: ProgArgs,
        #[arg(long, value_enum, default_value = "st")]
        mode: Mode,
        #[command(flatten)]
        backend: BackendArgs,
        /// `rr` or `rand:SEED`.
        #[arg(long, default_value = "rr", value_parser = parse_schedule)]
        sched: Schedule,
    },
    /// Run one of the executable checks.
    Check {
        #[command(subcommand)]
        check: Check,
    },
    /// Print the circuits of the secure blocks a run enters.
    DumpCircuit {
        #[command(flatten)]
        prog: ProgArgs,
        #[arg(long, default_value_t = 32)]
        width: u32,
    },
}

#[derive(Subcommand)]
enum Check {
    /// Distributed runs end in the slices of the single-threaded run.
    Sim {
        #[command(flatten)]
        prog: ProgArgs,
    },
    /// Seeded random schedules all reach the same result.
    Confluence {
        #[command(flatten)]
        prog: ProgArgs,
        #[arg(long, default_value_t = 100)]
        seeds: u64,
        #[command(flatten)]
        backend: BackendArgs,
    },
    /// GMW outputs of every secure block equal the clear outputs.
    Backend {
        #[command(flatten)]
        prog: ProgArgs,
        #[arg(long, default_value_t = 32)]
        width: u32,
        #[arg(long, default_value_t = 5)]
        dealer_seeds: u64,
    },
    /// Exhaustive security checks of the bundled applications.
    Security {
        #[arg(long, value_enum)]
        suite: SuiteArg,
        #[arg(long, default_value_t = 5)]
        domain: i64,
        #[arg(long, default_value_t = 3)]
        max_len: usize,
        /// Full deals to run (cards only).
        #[arg(long, default_value_t = 5)]
        seeds: u64,
    },
}

#[derive(Args)]
struct ProgArgs {
    /// A program file, or the name of a bundled program.
    program: String,
    /// `p=FILE` per party; a bare `p` joins without inputs.
    #[arg(long, num_args = 1.., required = true)]
    inputs: Vec<InputArg>,
    #[arg(long, default_value_t = DEFAULT_FUEL)]
    fuel: u64,
}

#[derive(Args)]
struct BackendArgs {
    #[arg(long, value_enum, default_value = "ideal")]
    backend: Backend,
    #[arg(long, default_value_t = 32)]
    width: u32,
    #[arg(long, default_value_t = 0)]
    dealer_seed: u64,
}

impl BackendArgs {
    fn get(&self) -> wysx_core::ds::SecBackend {
        let name = match self.backend {
            Backend::Ideal => "ideal",
            Backend::Gmw => "gmw",
        };
        cmd::backend(name, self.width, self.dealer_seed)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    St,
    Ds,
}

#[derive(Clone, Copy, ValueEnum)]
enum Backend {
    Ideal,
    Gmw,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Median,
    Psi,
    Cards,
}

fn execute(cli: Cli) -> Result<Report> {
    let load = |p: &ProgArgs| -> Result<_> { Ok((load_program(&p.program)?, load_inputs(&p.inputs)?)) };
    Ok(match cli.command {
        Command::Run {
            prog,
            mode,
            backend,
            sched,
        } => {
            let (e, inputs) = load(&prog)?;
            let mode = match mode {
                Mode::St => RunMode::St,
                Mode::Ds => RunMode::Ds,
            };
            cmd::run(&e, &inputs, mode, sched, &backend.get(), prog.fuel)
        }
        Command::DumpCircuit { prog, width } => {
            let (e, inputs) = load(&prog)?;
            cmd::dump_circuit(&e, &inputs, width, prog.fuel)
        }
        Command::Check { check } => match check {
            Check::Sim { prog } => {
                let (e, inputs) = load(&prog)?;
                cmd::check_sim(&e, &inputs, prog.fuel)
            }
            Check::Confluence { prog, seeds, backend } => {
                let (e, inputs) = load(&prog)?;
                cmd::check_conf(&e, &inputs, seeds, &backend.get(), prog.fuel)
            }
            Check::Backend {
                prog,
                width,
                dealer_seeds,
            } => {
                let (e, inputs) = load(&prog)?;
                cmd::check_backend(&e, &inputs, width, dealer_seeds)
            }
            Check::Security {
                suite,
                domain,
                max_len,
                seeds,
            } => {
                let suite = match suite {
                    SuiteArg::Median => Suite::Median,
                    SuiteArg::Psi => Suite::Psi,
                    SuiteArg::Cards => Suite::Cards,
                };
                cmd::check_security(suite, domain, max_len, seeds)?
            }
        },
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(r) => {
            println!("{}", r.text.trim_end());
            if r.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("wysx: {e:#}");
            ExitCode::from(2)
        }
    }
}
