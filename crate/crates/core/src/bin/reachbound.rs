//! Command-line front end. Exit codes: 0 pass, 2 property violated, 1 usage
//! or input error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use reachbound::circuit::{check_discretization, discretize_circuit, Circuit, CircuitJson, Discretization};
use reachbound::grassmann::grassmann_covering_bounds;
use reachbound::limits::{crossover_analysis, render_report, ReportFormat, Resource};
use reachbound::linalg::identity;
use reachbound::trotter::{certify_trotter, random_chain_hamiltonian_seeded, HamiltonianJson, TimeDependentHamiltonian};
use reachbound::unitary_nets::{build_unitary_net, LatticeNet, UnitaryNet, DEFAULT_MAX_ELEMENTS, MAX_GRID_DIM};
use reachbound::verify::{
    kato_sweep, lipschitz_sweep, net_report, product_suite, quotient_suite, sandwich_sweep, QUOTIENT_CASES,
};
use reachbound::{circuit::circuit_count_bound, trotter::evolution_count_bound, Error};

#[derive(Parser)]
#[command(name = "reachbound", version, about = "Covering-number bounds and their numerical checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a log-domain covering bound
    #[command(subcommand)]
    Bounds(BoundsCmd),
    /// Minimal circuit size or evolution time reaching the Grassmannian lower bound
    Crossover {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 1e-3)]
        eps: f64,
        #[arg(long)]
        lmin: usize,
        #[arg(long)]
        lmax: usize,
        #[arg(long, value_enum)]
        resource: ResourceArg,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = FormatArg::Json)]
        format: FormatArg,
    },
    /// Run a randomized or exhaustive check
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// Circuit tools
    #[command(subcommand)]
    Circuit(CircuitCmd),
}

#[derive(Subcommand)]
enum BoundsCmd {
    Circuit {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        k: usize,
        #[arg(long = "L")]
        sites: usize,
        #[arg(long)]
        ng: usize,
        #[arg(long)]
        eps: f64,
    },
    Tevol {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        k: usize,
        #[arg(long = "L")]
        sites: usize,
        #[arg(long = "K")]
        terms: usize,
        #[arg(long)]
        z: usize,
        #[arg(long)]
        h: f64,
        #[arg(long = "T")]
        time: f64,
        #[arg(long)]
        eps: f64,
    },
    Grassmann {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        eps: f64,
    },
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Certify a product-formula run; without --hamiltonian a random chain is used
    Trotter {
        #[arg(long)]
        hamiltonian: Option<PathBuf>,
        #[arg(long = "T")]
        time: f64,
        #[arg(long)]
        nt: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    Lipschitz {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        radius: f64,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    Kato {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    Nets {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        eps: f64,
        #[arg(long, default_value_t = 10_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the constructed net in binary form
        #[arg(long)]
        save: Option<PathBuf>,
    },
    #[command(name = "lemmas")]
    Suites {
        #[arg(long, value_enum)]
        which: SuiteArg,
    },
}

#[derive(Subcommand)]
enum CircuitCmd {
    /// Replace every gate by its nearest net element
    Discretize {
        #[arg(long)]
        circuit: PathBuf,
        #[arg(long)]
        eps: f64,
        /// Binary net file from `verify nets --save`
        #[arg(long)]
        net: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ResourceArg {
    Circuit,
    Time,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Product,
    Quotient,
    Sandwich,
}

enum Failure {
    Usage(String),
    Violated(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::TrotterBoundViolated { .. } => Failure::Violated(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

type Outcome = Result<bool, Failure>;

fn print_json(value: &impl Serialize) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Failure::Usage(e.to_string()))?;
    println!("{text}");
    Ok(())
}

fn write_or_print(text: &str, out: Option<&PathBuf>) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &PathBuf) -> Result<T, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn bounds(cmd: BoundsCmd) -> Outcome {
    match cmd {
        BoundsCmd::Circuit { d, k, sites, ng, eps } => print_json(&circuit_count_bound(d, k, sites, ng, eps)?)?,
        BoundsCmd::Tevol { d, k, sites, terms, z, h, time, eps } => {
            print_json(&evolution_count_bound(sites, d, k, terms, z, h, time, eps)?)?
        }
        BoundsCmd::Grassmann { n, m, eps } => print_json(&grassmann_covering_bounds(n, m, eps)?)?,
    }
    Ok(true)
}

fn verify(cmd: VerifyCmd) -> Outcome {
    match cmd {
        VerifyCmd::Trotter { hamiltonian, time, nt, seed } => {
            let h = match hamiltonian {
                Some(path) => TimeDependentHamiltonian::from_json(&read_json::<HamiltonianJson>(&path)?)?,
                None => random_chain_hamiltonian_seeded(3, 2, seed)?,
            };
            match certify_trotter(&h, time, nt) {
                Ok(cert) => {
                    print_json(&cert)?;
                    Ok(true)
                }
                Err(Error::TrotterBoundViolated { measured, bound }) => {
                    print_json(&json!({ "pass": false, "measured": measured, "bound": bound }))?;
                    Ok(false)
                }
                Err(e) => Err(e.into()),
            }
        }
        VerifyCmd::Lipschitz { n, radius, trials, seed } => {
            let s = lipschitz_sweep(n, radius, trials, seed)?;
            print_json(&s)?;
            Ok(s.pass)
        }
        VerifyCmd::Kato { n, m, trials, seed } => {
            let s = kato_sweep(n, m, trials, seed)?;
            print_json(&s)?;
            Ok(s.pass)
        }
        VerifyCmd::Nets { n, eps, samples, seed, save } => {
            let (report, net) = net_report(n, eps, samples, seed)?;
            if let Some(path) = save {
                net.save(&path)?;
            }
            print_json(&report)?;
            Ok(report.covering.pass)
        }
        VerifyCmd::Suites { which } => {
            let eps = [0.5, 1.0, 1.5, 2.0, 3.0];
            match which {
                SuiteArg::Product => {
                    let s = product_suite(8, &eps)?;
                    print_json(&s)?;
                    Ok(s.pass)
                }
                SuiteArg::Quotient => {
                    let s = quotient_suite(&QUOTIENT_CASES, &eps)?;
                    print_json(&s)?;
                    Ok(s.pass)
                }
                SuiteArg::Sandwich => {
                    let s = sandwich_sweep(200, 12, 5, 0)?;
                    print_json(&s)?;
                    Ok(s.pass)
                }
            }
        }
    }
}

fn discretize_with(c: &Circuit, eps: f64, net_file: Option<&PathBuf>) -> Result<Discretization, Failure> {
    let d = c.register().local_dim();
    let k = c.gates().iter().map(|g| g.support().len()).max().unwrap_or(1);
    let dim = d.pow(k as u32);
    if let Some(path) = net_file {
        let net = UnitaryNet::load(path)?;
        return Ok(discretize_circuit(c, &net)?);
    }
    if dim <= MAX_GRID_DIM {
        let net = build_unitary_net(dim, eps, DEFAULT_MAX_ELEMENTS)?;
        Ok(discretize_circuit(c, &net)?)
    } else {
        Ok(discretize_circuit(c, &LatticeNet::new(dim, eps)?)?)
    }
}

fn circuit(cmd: CircuitCmd) -> Outcome {
    let CircuitCmd::Discretize { circuit, eps, net, out } = cmd;
    let c = Circuit::from_json(&read_json::<CircuitJson>(&circuit)?)?;
    let disc = discretize_with(&c, eps, net.as_ref())?;
    let dim = c.register().dense_dim().ok();
    // identity observable has width 0; only the unitary deviation matters here
    let check = match dim {
        Some(n) => Some(check_discretization(&c, &disc, &identity(n))?),
        None => None,
    };
    let holds = check.is_none_or(|ch| ch.unitary_deviation <= ch.gate_error_bound + 1e-12);
    let value = json!({
        "circuit": disc.circuit.to_json(),
        "gate_error_bound": disc.gate_error_bound,
        "per_gate": disc.per_gate,
        "unitary_deviation": check.map(|ch| ch.unitary_deviation),
        "pass": holds,
    });
    let text = serde_json::to_string_pretty(&value).map_err(|e| Failure::Usage(e.to_string()))? + "\n";
    write_or_print(&text, out.as_ref())?;
    Ok(holds)
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Bounds(cmd) => bounds(cmd),
        Command::Crossover { d, k, eps, lmin, lmax, resource, out, format } => {
            let resource = match resource {
                ResourceArg::Circuit => Resource::Circuit,
                ResourceArg::Time => Resource::Time,
            };
            let format = match format {
                FormatArg::Json => ReportFormat::Json,
                FormatArg::Csv => ReportFormat::Csv,
            };
            let report = crossover_analysis(d, k, eps, lmin, lmax, resource)?;
            write_or_print(&render_report(&report, format), out.as_ref())?;
            Ok(report.rows.windows(2).all(|w| w[1].minimal > w[0].minimal))
        }
        Command::Verify(cmd) => verify(cmd),
        Command::Circuit(cmd) => circuit(cmd),
    }
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
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(Failure::Violated(msg)) => {
            eprintln!("violation: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
