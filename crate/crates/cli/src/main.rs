use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use symclass::io::{to_json, write_pfunc_csv, StateData};
use symclass::phasespace::{calibrate_lambda, p_min, pfunc_auto, GridSpec};
use symclass::separability::{
    bloch_correlations, certify, ppt_scan, reduce_two_qubit, concurrence, CertifyConfig, Tolerances, Verdict,
};
use symclass::survey::{run_survey, write_survey_csv, StateKind, SurveyConfig};
use symclass::symstate::{dicke_state, ghz_state, one_axis_twist, random_density, scs_amplitudes, scs_mixture};
use symclass::witnesses::{collective_moments, squeezing_xi2};
use symclass::{Direction, Error};

const EXIT_INVALID: u8 = 2;
const EXIT_QUADRATURE: u8 = 3;
const EXIT_INCONSISTENT: u8 = 4;
const EXIT_VIOLATIONS: u8 = 5;

#[derive(Parser)]
#[command(name = "symclass", version, about = "Symmetric multiqubit states: P functions and classicality certificates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a state and write it as JSON.
    State(StateArgs),
    /// Tabulate the band-limited P function on a quadrature grid.
    Pfunc(PfuncArgs),
    /// Certify a state as Classical, NonClassical or Undecided.
    Certify(CertifyArgs),
    /// Report collective-spin moments, squeezing and entanglement witnesses.
    Witnesses(WitnessArgs),
    /// Print the calibrated λ_K table.
    Lambda(LambdaArgs),
    /// Run a seeded survey of random states and separable controls.
    Survey(SurveyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Builder {
    Scs,
    Dicke,
    Ghz,
    Twist,
    Random,
    Mixture,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct StateArgs {
    #[arg(long, value_enum)]
    builder: Builder,
    /// Number of qubits.
    #[arg(long)]
    n: usize,
    #[arg(long)]
    theta: Option<f64>,
    #[arg(long)]
    phi: Option<f64>,
    /// Dicke index (number of |0⟩ factors).
    #[arg(long)]
    k: Option<usize>,
    /// Twisting strength.
    #[arg(long)]
    chi: Option<f64>,
    #[arg(long)]
    rank: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Mixture atom as `weight,theta,phi`; repeat for each atom.
    #[arg(long = "atom", value_name = "W,THETA,PHI")]
    atoms: Vec<String>,
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Args)]
struct PfuncArgs {
    state: PathBuf,
    /// Gauss–Legendre nodes in cos θ (raised to at least 2N+2).
    #[arg(long)]
    theta_nodes: Option<usize>,
    /// Uniform φ nodes (raised to at least 4N+4).
    #[arg(long)]
    phi_nodes: Option<usize>,
    /// Gauss–Legendre order used to calibrate λ_K (default 2N+2).
    #[arg(long)]
    lambda_order: Option<usize>,
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct CertifyArgs {
    state: PathBuf,
    /// Reconstruction tolerance for a classical certificate.
    #[arg(long, default_value_t = 1e-6)]
    eps_sep: f64,
    /// Threshold at which a witness counts as firing.
    #[arg(long, default_value_t = 1e-8)]
    delta_wit: f64,
    /// Size of the initial coherent-state dictionary.
    #[arg(long)]
    dictionary_size: Option<usize>,
    #[arg(long, default_value_t = 25)]
    refine_rounds: usize,
    /// Certificate JSON output.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct WitnessArgs {
    state: PathBuf,
}

#[derive(Args)]
struct LambdaArgs {
    #[arg(long)]
    n: usize,
    /// Gauss–Legendre order (default 2N+2).
    #[arg(long)]
    order: Option<usize>,
}

#[derive(Args)]
struct SurveyArgs {
    /// Qubit count `N` or inclusive range `A-B`.
    #[arg(long)]
    n: String,
    /// Random states per qubit count.
    #[arg(long)]
    count: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Separable controls per qubit count, written to `<stem>_controls.csv`.
    #[arg(long, default_value_t = 10)]
    controls: usize,
    #[arg(short, long)]
    output: PathBuf,
}

/// Failure carrying its process exit code.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

impl From<anyhow::Error> for Failure {
    fn from(error: anyhow::Error) -> Self {
        let code = match error.chain().find_map(|e| e.downcast_ref::<Error>()) {
            Some(Error::QuadratureTooCoarse { .. }) => EXIT_QUADRATURE,
            Some(Error::InternalInconsistency(_)) => EXIT_INCONSISTENT,
            _ => EXIT_INVALID,
        };
        Self { code, error }
    }
}

impl From<Error> for Failure {
    fn from(error: Error) -> Self {
        anyhow::Error::from(error).into()
    }
}

type CmdResult = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::State(a) => cmd_state(a),
        Command::Pfunc(a) => cmd_pfunc(a),
        Command::Certify(a) => cmd_certify(a),
        Command::Witnesses(a) => cmd_witnesses(a),
        Command::Lambda(a) => cmd_lambda(a),
        Command::Survey(a) => cmd_survey(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}

fn require<T>(value: Option<T>, flag: &str, builder: &str) -> anyhow::Result<T> {
    value.ok_or_else(|| anyhow!("builder {builder} requires --{flag}"))
}

fn direction(theta: f64, phi: f64) -> anyhow::Result<Direction> {
    Direction::new(theta, phi).context("--theta/--phi")
}

fn parse_atom(text: &str) -> anyhow::Result<(f64, Direction)> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let [w, t, p] = parts.as_slice() else {
        bail!("--atom {text:?}: expected weight,theta,phi");
    };
    let num = |s: &str| s.parse::<f64>().with_context(|| format!("--atom {text:?}: {s:?} is not a number"));
    let weight = num(w)?;
    if !(weight > 0.0) || !weight.is_finite() {
        bail!("--atom {text:?}: weight must be positive");
    }
    Ok((weight, Direction::new(num(t)?, num(p)?).with_context(|| format!("--atom {text:?}"))?))
}

fn build_state(a: &StateArgs) -> anyhow::Result<StateData> {
    let n = a.n;
    if n == 0 {
        bail!("--n must be at least 1");
    }
    let state = match a.builder {
        Builder::Scs => {
            let dir = direction(require(a.theta, "theta", "scs")?, require(a.phi, "phi", "scs")?)?;
            StateData::Pure(scs_amplitudes(n, dir)?)
        }
        Builder::Dicke => {
            let k = require(a.k, "k", "dicke")?;
            StateData::Pure(dicke_state(n, k).context("--k")?)
        }
        Builder::Ghz => StateData::Pure(ghz_state(n)?),
        Builder::Twist => {
            let chi = require(a.chi, "chi", "twist")?;
            if !chi.is_finite() {
                bail!("--chi must be finite");
            }
            let dir = direction(a.theta.unwrap_or(std::f64::consts::FRAC_PI_2), a.phi.unwrap_or(0.0))?;
            StateData::Pure(one_axis_twist(&scs_amplitudes(n, dir)?, chi))
        }
        Builder::Random => {
            let rank = require(a.rank, "rank", "random")?;
            let seed = require(a.seed, "seed", "random")?;
            StateData::Mixed(random_density(n, seed, rank).context("--rank")?)
        }
        Builder::Mixture => {
            if a.atoms.is_empty() {
                bail!("builder mixture requires at least one --atom");
            }
            let atoms = a.atoms.iter().map(|s| parse_atom(s)).collect::<anyhow::Result<Vec<_>>>()?;
            let total: f64 = atoms.iter().map(|x| x.0).sum();
            let atoms: Vec<_> = atoms.into_iter().map(|(w, d)| (w / total, d)).collect();
            StateData::Mixed(scs_mixture(n, &atoms)?)
        }
    };
    Ok(state)
}

fn write_file(path: &Path, contents: &str) -> anyhow::Result<()> {
    fs::write(path, contents).with_context(|| format!("cannot write {}", path.display()))
}

fn create(path: &Path) -> anyhow::Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path).with_context(|| format!("cannot create {}", path.display()))?))
}

fn read_state(path: &Path) -> anyhow::Result<StateData> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    StateData::from_json_str(&text).with_context(|| format!("state file {}", path.display()))
}

fn cmd_state(a: StateArgs) -> CmdResult {
    let state = build_state(&a)?;
    write_file(&a.output, &state.to_json_string()?)?;
    let rho = state.density();
    println!("N = {}", state.n_qubits());
    println!("purity = {:.12}", rho.purity());
    match &state {
        StateData::Pure(v) => {
            println!("amplitudes (Dicke index k = number of |0> factors):");
            for (k, z) in v.amplitudes().iter().enumerate() {
                println!("  k={k:<3} {:+.12} {:+.12}i", z.re, z.im);
            }
        }
        StateData::Mixed(r) => {
            println!("diagonal (Dicke index k = number of |0> factors):");
            for k in 0..r.dim() {
                println!("  k={k:<3} {:.12}", r.matrix()[(k, k)].re);
            }
        }
    }
    println!("wrote {}", a.output.display());
    Ok(0)
}

fn cmd_pfunc(a: PfuncArgs) -> CmdResult {
    let rho = read_state(&a.state)?.density();
    let n = rho.n_qubits();
    let order = a.lambda_order.unwrap_or(2 * n + 2);
    let lambda = calibrate_lambda(n, order).with_context(|| format!("--lambda-order {order}"))?;
    let default = GridSpec::for_qubits(n);
    let spec = GridSpec {
        theta_nodes: a.theta_nodes.unwrap_or(default.theta_nodes),
        phi_nodes: a.phi_nodes.unwrap_or(default.phi_nodes),
    };
    let (table, used, residual) = pfunc_auto(&rho, spec)?;
    write_pfunc_csv(create(&a.output)?, &table).with_context(|| format!("cannot write {}", a.output.display()))?;
    let min = p_min(&rho, used)?;
    println!("N = {n}, grid {} x {} ({} nodes)", used.theta_nodes, used.phi_nodes, table.values.len());
    println!("lambda_K max Q-spread = {:.3e}", lambda.q_spread);
    println!("round-trip residual = {residual:.3e}");
    println!("integral = {:.9}", table.integral());
    println!("min P = {:.12} at theta = {:.9}, phi = {:.9}", min.value, min.direction.theta(), min.direction.phi());
    println!("note: negative values of the band-limited P are a diagnostic, not a classicality verdict; use `certify`");
    println!("wrote {}", a.output.display());
    Ok(0)
}

fn positive(value: f64, flag: &str) -> anyhow::Result<f64> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        bail!("--{flag} must be positive, got {value}")
    }
}

fn cmd_certify(a: CertifyArgs) -> CmdResult {
    let config = CertifyConfig {
        tolerances: Tolerances { eps_sep: positive(a.eps_sep, "eps-sep")?, delta_wit: positive(a.delta_wit, "delta-wit")? },
        dictionary_size: match a.dictionary_size {
            Some(0) => return Err(anyhow!("--dictionary-size must be positive").into()),
            other => other,
        },
        refine_rounds: a.refine_rounds,
    };
    let rho = read_state(&a.state)?.density();
    let cert = certify(&rho, &config)?;
    if let Some(path) = &a.output {
        write_file(path, &to_json(&cert)?)?;
    }
    println!("verdict: {:?}", cert.verdict);
    if let Some(r) = cert.residual {
        println!("fit residual = {r:.3e}");
    }
    if let Some(atoms) = &cert.decomposition {
        println!("decomposition ({} atoms):", atoms.len());
        for atom in atoms {
            println!("  weight {:.9}  theta {:.9}  phi {:.9}", atom.weight, atom.theta, atom.phi);
        }
    }
    for w in &cert.witnesses {
        let mark = if w.fires(config.tolerances.delta_wit) { "  fires" } else { "" };
        println!("witness {} {}: {:+.9e}{mark}", w.kind.as_str(), w.cut_or_pair, w.value);
    }
    if let Some(path) = &a.output {
        println!("wrote {}", path.display());
    }
    Ok(match cert.verdict {
        Verdict::Classical => 0,
        Verdict::NonClassical => 10,
        Verdict::Undecided => 11,
    })
}

fn cmd_witnesses(a: WitnessArgs) -> CmdResult {
    let rho = read_state(&a.state)?.density();
    let n = rho.n_qubits();
    let m = collective_moments(&rho);
    println!("N = {n}");
    println!("<S> = ({:+.9}, {:+.9}, {:+.9}), |<S>| = {:.9}", m.mean[0], m.mean[1], m.mean[2], m.mean_length());
    println!("covariance:");
    for row in &m.covariance {
        println!("  {:+.9} {:+.9} {:+.9}", row[0], row[1], row[2]);
    }
    match squeezing_xi2(&rho) {
        Ok(x) => println!("xi^2 = {x:.9}"),
        Err(Error::UndefinedMeanDirection(_)) => println!("xi^2 = n/a (mean spin vanishes)"),
        Err(e) => return Err(e.into()),
    }
    for (cut, v) in ppt_scan(&rho)? {
        println!("PPT {cut}|{}: min eigenvalue {v:+.9e}", n - cut);
    }
    if n >= 2 {
        let two = reduce_two_qubit(&rho)?;
        println!("concurrence 0,1 = {:.9}", concurrence(&two)?);
        println!("trace_sum = {:.12}", bloch_correlations(&two).trace_sum);
    }
    Ok(0)
}

fn cmd_lambda(a: LambdaArgs) -> CmdResult {
    if a.n == 0 {
        return Err(anyhow!("--n must be at least 1").into());
    }
    let order = a.order.unwrap_or(2 * a.n + 2);
    let table = calibrate_lambda(a.n, order).with_context(|| format!("--order {order}"))?;
    println!("N = {}, Gauss-Legendre order {order}", a.n);
    for (k, l) in table.values.iter().enumerate() {
        println!("  K={k:<3} lambda = {l:.15}");
    }
    println!("max Q-spread = {:.3e}", table.q_spread);
    Ok(0)
}

fn parse_range(text: &str) -> anyhow::Result<Vec<usize>> {
    let bad = || anyhow!("--n {text:?}: expected N or A-B with 1 <= A <= B");
    let (lo, hi) = match text.split_once('-') {
        Some((a, b)) => (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?),
        None => {
            let v: usize = text.trim().parse().map_err(|_| bad())?;
            (v, v)
        }
    };
    if lo == 0 || lo > hi {
        return Err(bad());
    }
    Ok((lo..=hi).collect())
}

fn controls_path(path: &Path) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let ext = path.extension().map(|e| format!(".{}", e.to_string_lossy())).unwrap_or_default();
    path.with_file_name(format!("{stem}_controls{ext}"))
}

fn cmd_survey(a: SurveyArgs) -> CmdResult {
    let n_qubits = parse_range(&a.n)?;
    if a.count == 0 {
        return Err(anyhow!("--count must be at least 1").into());
    }
    let config = SurveyConfig { n_qubits, count: a.count, controls: a.controls, seed: a.seed, certify: CertifyConfig::default() };
    let report = run_survey(&config)?;

    let write = |path: &Path, kind: StateKind| -> anyhow::Result<()> {
        let mut out = create(path)?;
        write_survey_csv(&mut out, report.of_kind(kind))
            .and_then(|_| out.flush())
            .with_context(|| format!("cannot write {}", path.display()))
    };
    write(&a.output, StateKind::Random)?;
    let controls = controls_path(&a.output);
    if a.controls > 0 {
        write(&controls, StateKind::Control)?;
    }

    for kind in [StateKind::Random, StateKind::Control] {
        let total = report.of_kind(kind).count();
        if total == 0 {
            continue;
        }
        println!(
            "{:<8} {total:>5} states: Classical {}, NonClassical {}, Undecided {}",
            kind.as_str(),
            report.count(kind, Verdict::Classical),
            report.count(kind, Verdict::NonClassical),
            report.count(kind, Verdict::Undecided)
        );
    }
    if config.n_qubits.contains(&2) {
        println!("two-qubit states outside the PPT margin band: {}", report.decided_two_qubit());
    }
    let violations = report.violations();
    println!("consistency violations: {violations}");
    for r in report.records.iter().filter(|r| !r.violations.is_empty()) {
        for v in &r.violations {
            println!("  record {} ({}, N={}, seed {}): {v}", r.index, r.kind.as_str(), r.n_qubits, r.seed);
        }
    }
    println!("wrote {}", a.output.display());
    if a.controls > 0 {
        println!("wrote {}", controls.display());
    }
    Ok(if violations > 0 { EXIT_VIOLATIONS } else { 0 })
}
