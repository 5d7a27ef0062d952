use std::fs::File;
use std::io::{self, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use permutwirl::coherence::{assistance_estimate, coherence_report, Measure};
use permutwirl::linalg::{ComplexMatrix, Subsystem, DEFAULT_TOL};
use permutwirl::random::DEFAULT_SEED;
use permutwirl::sweep::{sweep_bell, sweep_qubit, write_bell_csv, write_qubit_csv};
use permutwirl::twirl::{
    bipartite_twirl_coefficients, closed_form_entries, reconstruct_output_state, twirl_bruteforce,
    twirl_closed_form, twirl_one_sided, twirl_one_sided_bruteforce, twirl_params, twirl_two_sided,
    twirl_two_sided_bruteforce,
};
use permutwirl::verify::{run_verify, Fault, VerifyConfig};
use permutwirl::{Error, Exec, StateFile};

const EXIT_INVALID: u8 = 1;
const EXIT_DIMENSION: u8 = 2;
const EXIT_VERIFY: u8 = 3;

#[derive(Parser)]
#[command(name = "permutwirl", version, about = "Mixed-permutation channel toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Apply the channel to a state file.
    Twirl(TwirlArgs),
    /// Coherence of a state and the lower bound obtained from its twirl.
    Coherence(CoherenceArgs),
    /// Qubit coherence curves along the r1 axis, as CSV.
    SweepQubit(SweepQubitArgs),
    /// Bell-diagonal tetrahedron grid with PPT flags, as CSV.
    SweepBell(SweepBellArgs),
    /// Run the invariant suite against the brute-force oracles.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Side {
    #[value(alias = "A")]
    A,
    #[value(alias = "B")]
    B,
    Both,
    /// Treat the input as one system regardless of its dims.
    None,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Closed,
    Brute,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MeasureArg {
    L1,
    Relent,
    Both,
}

#[derive(clap::Args)]
struct TwirlArgs {
    /// State file, or '-' for stdin.
    #[arg(long)]
    input: PathBuf,
    /// Subsystem to twirl. Defaults to the whole system for single-system
    /// input and to both factors for bipartite input.
    #[arg(long, value_enum)]
    side: Option<Side>,
    #[arg(long, value_enum, default_value = "closed")]
    method: Method,
    /// Where to write the output state; '-' sends it to stdout and the summary to stderr.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Treat the matrix as an arbitrary operator and skip density validation.
    #[arg(long)]
    raw: bool,
}

#[derive(clap::Args)]
struct CoherenceArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "both")]
    measure: MeasureArg,
    /// Also estimate the coherence of assistance of the state and of its
    /// twirl: SAMPLES [SEED].
    #[arg(long, num_args = 1..=2, value_names = ["SAMPLES", "SEED"])]
    assist: Option<Vec<u64>>,
    /// Report relative-entropy figures in bits instead of nats.
    #[arg(long)]
    bits: bool,
}

#[derive(clap::Args)]
struct SweepQubitArgs {
    #[arg(long, default_value_t = 0.1, allow_negative_numbers = true)]
    r2: f64,
    #[arg(long, default_value_t = 0.1, allow_negative_numbers = true)]
    r3: f64,
    /// Number of steps; the output has steps + 1 rows.
    #[arg(long, default_value_t = 200)]
    steps: usize,
    #[arg(long, default_value = "-")]
    out: PathBuf,
}

#[derive(clap::Args)]
struct SweepBellArgs {
    /// Grid points per axis over [-1, 1].
    #[arg(long, default_value_t = 21)]
    grid: usize,
    #[arg(long, default_value = "-")]
    out: PathBuf,
}

#[derive(clap::Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 6)]
    dmax: usize,
    #[arg(long, default_value_t = 100)]
    samples: usize,
    #[arg(long, env = "PERMUTWIRL_SEED", default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Run single-threaded.
    #[arg(long)]
    serial: bool,
    #[arg(long, hide = true)]
    inject_fault: Option<String>,
}

fn is_stdio(path: &Path) -> bool {
    path.as_os_str() == "-"
}

fn open_input(path: &Path) -> anyhow::Result<Box<dyn Read>> {
    if is_stdio(path) {
        Ok(Box::new(io::stdin().lock()))
    } else {
        let f = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
        Ok(Box::new(BufReader::new(f)))
    }
}

fn open_output(path: &Path) -> anyhow::Result<Box<dyn Write>> {
    if is_stdio(path) {
        Ok(Box::new(io::stdout().lock()))
    } else {
        let f = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
        Ok(Box::new(BufWriter::new(f)))
    }
}

fn read_state_file(path: &Path) -> anyhow::Result<StateFile> {
    StateFile::read_from(open_input(path)?).with_context(|| format!("reading {}", path.display()))
}

fn print_json(to_stderr: bool, value: &Value) {
    let text = serde_json::to_string_pretty(value).expect("json values serialize");
    if to_stderr {
        eprintln!("{text}");
    } else {
        println!("{text}");
    }
}

fn two_dims(dims: &[usize]) -> anyhow::Result<(usize, usize)> {
    match dims {
        [a, b] => Ok((*a, *b)),
        _ => Err(anyhow!(Error::DimMismatch(format!("--side a/b/both needs a bipartite state, dims are {dims:?}")))),
    }
}

fn cmd_twirl(args: TwirlArgs) -> anyhow::Result<()> {
    let file = read_state_file(&args.input)?;
    let x = if args.raw {
        file.to_matrix()?
    } else {
        file.to_density(DEFAULT_TOL).with_context(|| format!("validating {}", args.input.display()))?.into_matrix()
    };
    let bipartite = file.dims.len() == 2;
    let side = args.side.unwrap_or(if bipartite { Side::Both } else { Side::None });
    let brute = args.method == Method::Brute;

    let (out, out_dims, summary): (ComplexMatrix, Vec<usize>, Value) = match side {
        Side::None => {
            let n = x.rows();
            let out = if brute { twirl_bruteforce(&x)? } else { twirl_closed_form(&x)? };
            let summary = if args.raw {
                let (diag, off) = closed_form_entries(&x)?;
                json!({ "mode": "single", "d": n, "diagonal": [diag.re, diag.im], "off_diagonal": [off.re, off.im] })
            } else {
                let rho = permutwirl::DensityMatrix::validate(x.clone(), vec![n], DEFAULT_TOL)?;
                json!({ "mode": "single", "summary": twirl_params(&rho)? })
            };
            (out, vec![n], summary)
        }
        Side::A | Side::B => {
            let dims = two_dims(&file.dims)?;
            let sub = if side == Side::A { Subsystem::A } else { Subsystem::B };
            let out = if brute {
                twirl_one_sided_bruteforce(&x, dims, sub, Exec::default())?
            } else {
                twirl_one_sided(&x, dims, sub)?
            };
            let coefficients = bipartite_twirl_coefficients(&x, dims)?;
            let summary = json!({ "mode": "one-sided", "side": sub, "dims": file.dims, "coefficients": coefficients });
            (out, file.dims.clone(), summary)
        }
        Side::Both => {
            let dims = two_dims(&file.dims)?;
            let (closed, coefficients) = twirl_two_sided(&x, dims)?;
            let out = if brute { twirl_two_sided_bruteforce(&x, dims, Exec::default())? } else { closed };
            let summary = json!({ "mode": "two-sided", "dims": file.dims, "coefficients": coefficients });
            (out, file.dims.clone(), summary)
        }
    };

    let label = Some(match &file.label {
        Some(l) => format!("twirl of {l}"),
        None => "twirl".to_string(),
    });
    let state = StateFile::from_matrix(&out, out_dims, label);
    let state_on_stdout = args.out.as_deref().is_some_and(is_stdio);
    if let Some(path) = &args.out {
        let w = open_output(path)?;
        state.write_to(w).with_context(|| format!("writing {}", path.display()))?;
    }
    print_json(state_on_stdout, &summary);
    Ok(())
}

fn measures(arg: MeasureArg) -> Vec<Measure> {
    match arg {
        MeasureArg::L1 => vec![Measure::L1],
        MeasureArg::Relent => vec![Measure::RelEnt],
        MeasureArg::Both => vec![Measure::L1, Measure::RelEnt],
    }
}

fn env_seed() -> anyhow::Result<u64> {
    match std::env::var("PERMUTWIRL_SEED") {
        Ok(s) => s.trim().parse().with_context(|| format!("PERMUTWIRL_SEED={s:?} is not an unsigned integer")),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

fn cmd_coherence(args: CoherenceArgs) -> anyhow::Result<()> {
    let file = read_state_file(&args.input)?;
    let rho = file.to_density(DEFAULT_TOL).with_context(|| format!("validating {}", args.input.display()))?;
    rho.ensure_monopartite()?;
    let scale = |m: Measure, v: f64| if args.bits && m == Measure::RelEnt { v / std::f64::consts::LN_2 } else { v };

    let mut reports = Vec::new();
    for m in measures(args.measure) {
        let rep = coherence_report(&rho, m)?;
        reports.push(if args.bits { rep.in_bits() } else { rep });
    }
    let mut body = json!({
        "units": if args.bits { "bits" } else { "nats" },
        "reports": reports,
    });

    if let Some(assist) = &args.assist {
        let samples = assist[0] as usize;
        let seed = match assist.get(1) {
            Some(&s) => s,
            None => env_seed()?,
        };
        let star = reconstruct_output_state(&twirl_params(&rho)?)?;
        let mut out = Vec::new();
        for m in measures(args.measure) {
            let a = assistance_estimate(&rho, m, samples, seed)?;
            let b = assistance_estimate(&star, m, samples, seed)?;
            out.push(json!({
                "measure": m,
                "samples": samples,
                "seed": seed,
                "rho": scale(m, a.value),
                "rho_star": scale(m, b.value),
            }));
        }
        body["assistance"] = Value::Array(out);
    }
    print_json(false, &body);
    Ok(())
}

fn cmd_sweep_qubit(args: SweepQubitArgs) -> anyhow::Result<()> {
    let rows = sweep_qubit(args.r2, args.r3, args.steps, Exec::default())?;
    write_qubit_csv(open_output(&args.out)?, &rows)?;
    Ok(())
}

fn cmd_sweep_bell(args: SweepBellArgs) -> anyhow::Result<()> {
    let rows = sweep_bell(args.grid, Exec::default())?;
    write_bell_csv(open_output(&args.out)?, &rows)?;
    Ok(())
}

fn cmd_verify(args: VerifyArgs) -> anyhow::Result<ExitCode> {
    let fault = match &args.inject_fault {
        Some(name) => Some(name.parse::<Fault>()?),
        None => None,
    };
    let cfg = VerifyConfig {
        dmax: args.dmax,
        samples: args.samples,
        seed: args.seed,
        fault,
        exec: if args.serial { Exec::Serial } else { Exec::default() },
    };
    let report = run_verify(cfg)?;
    for check in &report.checks {
        eprintln!("{check}");
    }
    print_json(false, &serde_json::to_value(&report)?);
    match report.first_failure() {
        Some(check) => {
            eprintln!("verification failed: {}", check.name);
            Ok(ExitCode::from(EXIT_VERIFY))
        }
        None => Ok(ExitCode::SUCCESS),
    }
}

fn exit_code_for(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::DimensionTooLarge { .. }) => EXIT_DIMENSION,
        _ => EXIT_INVALID,
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Twirl(a) => cmd_twirl(a)?,
        Command::Coherence(a) => cmd_coherence(a)?,
        Command::SweepQubit(a) => cmd_sweep_qubit(a)?,
        Command::SweepBell(a) => cmd_sweep_bell(a)?,
        Command::Verify(a) => return cmd_verify(a),
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}
