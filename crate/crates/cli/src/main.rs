use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use revsynth_core::bounds;
use revsynth_core::io::{self, IoError};
use revsynth_core::sim::{self, SimError};
use revsynth_core::sweep::{self, BenchConfig, QGrid};
use revsynth_core::{synthesize, Circuit, Overrides, Strategy, SynthError, TruthTable};

const EXIT_IO: u8 = 1;
const EXIT_BUDGET: u8 = 2;
const EXIT_MISMATCH: u8 = 3;
const EXIT_WIDTH: u8 = 4;

/// Reversible circuit synthesis with a bounded number of ancillae.
#[derive(Parser)]
#[command(name = "revsynth", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Synthesize a truth table into a NOT/CNOT/2-CNOT netlist.
    Synth {
        table: PathBuf,
        /// Ancilla budget.
        #[arg(long)]
        q: usize,
        /// 1 minimizes conjunction requests, 2 minimizes linear-form requests.
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
        strategy: u8,
        /// Split point (prefix variable count).
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        group_size: Option<usize>,
        #[arg(long)]
        q1: Option<usize>,
        #[arg(long)]
        q2: Option<usize>,
        #[arg(long)]
        q3: Option<usize>,
        /// Netlist path; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// JSON report path.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Check a netlist against a truth table on every input.
    Verify { netlist: PathBuf, table: PathBuf },
    /// Run a netlist on one input, or print its whole truth table.
    Simulate {
        netlist: PathBuf,
        /// Input bits, x1 first.
        #[arg(long)]
        input: Option<String>,
    },
    /// Evaluate the closed-form bounds.
    Bounds {
        n: u64,
        q: u64,
        #[arg(long, default_value_t = 1)]
        t: u64,
    },
    /// Sweep n, q and strategy on seeded random tables and emit CSV.
    Bench {
        #[arg(long, value_delimiter = ',', required = true)]
        n_list: Vec<usize>,
        /// Comma-separated budgets, or `auto` for 8n+1 up to full storage.
        #[arg(long, default_value = "auto")]
        q_grid: String,
        /// Grid points when `--q-grid auto`.
        #[arg(long, default_value_t = 8)]
        points: usize,
        #[arg(long, value_delimiter = ',', default_value = "1,2")]
        strategies: Vec<u8>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// CSV path; stdout when absent.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

struct Failure {
    code: u8,
    msg: String,
}

fn fail(code: u8, msg: impl Into<String>) -> Failure {
    Failure {
        code,
        msg: msg.into(),
    }
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        fail(EXIT_IO, e.to_string())
    }
}

impl From<SynthError> for Failure {
    fn from(e: SynthError) -> Self {
        match e {
            SynthError::QBudgetTooSmall { .. } => fail(EXIT_BUDGET, e.to_string()),
            _ => fail(EXIT_IO, e.to_string()),
        }
    }
}

impl From<SimError> for Failure {
    fn from(e: SimError) -> Self {
        match e {
            SimError::WidthMismatch { .. } => fail(EXIT_WIDTH, e.to_string()),
            _ => fail(EXIT_IO, e.to_string()),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| fail(EXIT_IO, format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| fail(EXIT_IO, format!("{}: {e}", path.display())))
}

fn load_table(path: &Path) -> Result<TruthTable, Failure> {
    io::parse_truth_table(&read(path)?).map_err(|e| fail(EXIT_IO, format!("{}: {e}", path.display())))
}

fn load_netlist(path: &Path) -> Result<Circuit, Failure> {
    io::parse_netlist(&read(path)?).map_err(|e| fail(EXIT_IO, format!("{}: {e}", path.display())))
}

fn strategy(v: u8) -> Result<Strategy, Failure> {
    Strategy::from_number(v).ok_or_else(|| fail(EXIT_IO, format!("unknown strategy {v}")))
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Synth {
            table,
            q,
            strategy: st,
            k,
            group_size,
            q1,
            q2,
            q3,
            out,
            report,
        } => {
            let tt = load_table(&table)?;
            let ov = Overrides {
                k,
                s: group_size,
                q1,
                q2,
                q3,
            };
            let (circuit, rep) = synthesize(&tt, q, strategy(st)?, &ov)?;
            let netlist = io::write_netlist(&circuit);
            match out {
                Some(p) => write(&p, &netlist)?,
                None => print!("{netlist}"),
            }
            if let Some(p) = report {
                write(&p, &io::report_json(&rep))?;
            }
            eprintln!(
                "L={} D={} Q={} t1={} t2={} t3={} k={} s={}",
                rep.gate_count, rep.depth, rep.ancilla, rep.t1, rep.t2, rep.t3, rep.params.k, rep.params.s
            );
        }
        Command::Verify { netlist, table } => {
            let circuit = load_netlist(&netlist)?;
            let tt = load_table(&table)?;
            if tt.n() != circuit.n() || circuit.output_wires().len() != circuit.n() {
                return Err(fail(
                    EXIT_WIDTH,
                    format!(
                        "netlist has {} inputs and {} outputs, table has n = {}",
                        circuit.n(),
                        circuit.output_wires().len(),
                        tt.n()
                    ),
                ));
            }
            let rep = sim::verify_against(&circuit, &tt)?;
            if !rep.passed {
                let n = tt.n();
                for m in rep.mismatches.iter().take(20) {
                    println!(
                        "mismatch x={:0n$b} expected={:0n$b} actual={:0n$b}",
                        m.input, m.expected, m.actual
                    );
                }
                return Err(fail(
                    EXIT_MISMATCH,
                    format!("{} of {} inputs differ", rep.mismatches.len(), 1u64 << n),
                ));
            }
            println!("ok: all {} inputs match", 1u64 << tt.n());
        }
        Command::Simulate { netlist, input } => {
            let circuit = load_netlist(&netlist)?;
            match input {
                Some(bits) => {
                    let bits: Vec<bool> = bits
                        .chars()
                        .map(|c| match c {
                            '0' => Ok(false),
                            '1' => Ok(true),
                            _ => Err(fail(EXIT_IO, format!("bad input digit {c:?}"))),
                        })
                        .collect::<Result<_, _>>()?;
                    let state = sim::run(&circuit, &bits)?;
                    let word: String = circuit
                        .output_wires()
                        .iter()
                        .map(|&w| if state.get(w) { '1' } else { '0' })
                        .collect();
                    println!("{word}");
                    println!("state {state}");
                }
                None => print!("{}", io::write_truth_table(&sim::extract_transformation(&circuit)?)),
            }
        }
        Command::Bounds { n, q, t } => {
            for (name, b) in bounds::evaluate_all(n, q, t) {
                let flag = if b.valid { "valid" } else { "invalid" };
                println!("{name} {} {flag}", b.value);
            }
        }
        Command::Bench {
            n_list,
            q_grid,
            points,
            strategies,
            seed,
            csv,
        } => {
            let q_grid = if q_grid == "auto" {
                QGrid::Auto { points }
            } else {
                QGrid::Explicit(
                    q_grid
                        .split(',')
                        .map(|s| s.trim().parse().map_err(|_| fail(EXIT_IO, format!("bad budget {s:?}"))))
                        .collect::<Result<_, _>>()?,
                )
            };
            let cfg = BenchConfig {
                n_list,
                q_grid,
                strategies: strategies.into_iter().map(strategy).collect::<Result<_, _>>()?,
                seed,
            };
            let text = sweep::to_csv(&sweep::run_bench(&cfg)?);
            match csv {
                Some(p) => write(&p, &text)?,
                None => print!("{text}"),
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_IO } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
