//! Command-line front end.
//!
//! Every subcommand writes one structured result (JSON, or CSV plus a JSON
//! manifest for regions) and prints a short human-readable summary. Results
//! carry a manifest with the full parameter set, seed, tool version and the
//! digest of the channel file, and do not depend on the thread count.

pub mod channel_file;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::channel::{DiscreteAvmac, InputDistribution};
use crate::dist::CondDistribution;
use crate::discrete_sim::{
    run_discrete_trials, symmetrizing_error_floor, symmetrizing_jammer, DecoderParams, DiscreteCodebookPair,
    JammerSpec,
};
use crate::error::Error;
use crate::gaussian_sim::{
    run_gaussian_trials, Center, ConverseFloor, EtaStarOptions, GaussianJammer, GaussianParams,
};
use crate::region::{regions, Bound, RegionOptions};
use crate::symmetrizability::{min_symmetrizability, Mode, Symmetrizer, SymmetryRule, DEFAULT_CAP};

pub use channel_file::{channel_to_string, parse_channel_file, parse_channel_str, write_channel_file};

/// Seed used when `--seed` is absent, so bare invocations are reproducible.
pub const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Debug, Parser)]
#[command(name = "avmac", version, about = "List-decoding bounds and simulations for arbitrarily varying MACs")]
struct Cli {
    /// Worker threads; falls back to AVMAC_THREADS, then to all cores.
    /// Results do not depend on it.
    #[arg(long, env = "AVMAC_THREADS", global = true)]
    threads: Option<usize>,
    /// Also store the wall-clock time in the result file (breaks
    /// byte-identical reruns).
    #[arg(long, global = true)]
    record_wall_clock: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "lowercase")]
enum Command {
    /// Minimum symmetrizability order over a grid of input laws.
    Symmetrizability(SymArgs),
    /// Inner and outer capacity-region frontiers as CSV.
    Region(RegionArgs),
    /// Monte Carlo error rates.
    Simulate {
        #[command(subcommand)]
        kind: SimKind,
    },
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "lowercase")]
enum SimKind {
    /// Constant-composition codes and the typicality list decoder.
    Discrete(DiscreteArgs),
    /// Spherical codes and the minimum-distance list decoder.
    Gaussian(GaussianArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum ModeArg {
    Weak,
    Strong,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Weak => Mode::Weak,
            ModeArg::Strong => Mode::Strong,
        }
    }
}

#[derive(Debug, Args, Serialize)]
struct SymArgs {
    #[arg(long)]
    channel: PathBuf,
    #[arg(long, value_enum, default_value = "weak")]
    mode: ModeArg,
    /// Largest edge count examined.
    #[arg(long, default_value_t = DEFAULT_CAP)]
    max_list: usize,
    /// Simplex grid step for the input laws.
    #[arg(long, default_value_t = 0.1)]
    grid: f64,
    #[arg(long, default_value_t = 1)]
    u_card: usize,
    /// JSON result file; printed to stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum RegionMode {
    Inner,
    Outer,
    Both,
}

#[derive(Debug, Args, Serialize)]
struct RegionArgs {
    #[arg(long)]
    channel: PathBuf,
    #[arg(long)]
    list_size: usize,
    #[arg(long, default_value_t = 0.1)]
    grid: f64,
    #[arg(long, default_value_t = 2)]
    u_card: usize,
    #[arg(long, default_value_t = DEFAULT_CAP)]
    max_list: usize,
    #[arg(long, value_enum, default_value = "both")]
    mode: RegionMode,
    /// CSV file (`R1,R2,mode`); the manifest goes next to it as
    /// `<out>.manifest.json`. CSV is printed to stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
struct RunArgs {
    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
    trials: u64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// JSON result file; printed to stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Per-trial CSV (`trial,error,fallback,cert`).
    #[arg(long)]
    per_trial: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum DiscreteJammerArg {
    /// The constant cheapest state.
    None,
    Constant,
    Iid,
    Symmetrizing,
}

#[derive(Debug, Args, Serialize)]
struct DiscreteArgs {
    #[arg(long)]
    channel: PathBuf,
    /// Input law of user 1 (comma separated); uniform when absent.
    #[arg(long, value_delimiter = ',')]
    px: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    py: Option<Vec<f64>>,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: usize,
    #[arg(long)]
    w: usize,
    #[arg(long, default_value_t = 1)]
    list_size: usize,
    #[arg(long, default_value_t = 0.05)]
    eta: f64,
    #[arg(long, default_value_t = 0.05)]
    eta_prime: f64,
    #[arg(long, value_enum, default_value = "none")]
    jammer: DiscreteJammerArg,
    /// State symbol of the constant jammer.
    #[arg(long)]
    state: Option<usize>,
    /// Letter law of the i.i.d. jammer (comma separated).
    #[arg(long, value_delimiter = ',')]
    state_law: Option<Vec<f64>>,
    #[arg(long, value_enum, default_value = "strong")]
    sym_mode: ModeArg,
    /// Edge count of the symmetrizing graph; the largest symmetrizable one
    /// when absent.
    #[arg(long)]
    graph_edges: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_CAP)]
    max_list: usize,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum GaussianJammerArg {
    None,
    Gaussian,
    Superposition,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum CenterArg {
    Origin,
    Centroid,
}

#[derive(Debug, Args, Serialize)]
struct GaussianArgs {
    #[arg(long, default_value_t = 1.0)]
    p1: f64,
    #[arg(long, default_value_t = 1.0)]
    p2: f64,
    /// State power budget N.
    #[arg(long)]
    state_power: f64,
    #[arg(long, default_value_t = 0.0)]
    sigma2: f64,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: usize,
    #[arg(long)]
    w: usize,
    #[arg(long, default_value_t = 1)]
    list_size: usize,
    #[arg(long, value_enum, default_value = "none")]
    jammer: GaussianJammerArg,
    /// Power margin of the Gaussian jammer (state power N - eta); 5% of N
    /// when absent.
    #[arg(long)]
    eta: Option<f64>,
    /// Candidate shift centers of the superposition attack.
    #[arg(long, value_enum, value_delimiter = ',', default_values = ["origin", "centroid"])]
    centers: Vec<CenterArg>,
    #[arg(long, default_value_t = 0.01)]
    coverage_floor: f64,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Debug)]
enum CliError {
    /// Bad input: exit code 2.
    Input(String),
    /// Numerical or I/O failure at run time: exit code 1.
    Runtime(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Numerical(_) => CliError::Runtime(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Runtime(_) => 1,
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Serialize)]
struct Manifest<'a> {
    tool: &'static str,
    version: &'static str,
    subcommand: &'static str,
    parameters: &'a Command,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    input_digest: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    wall_clock_seconds: Option<f64>,
}

#[derive(Serialize)]
struct Document<'a, T: Serialize> {
    manifest: Manifest<'a>,
    result: T,
}

struct Context<'a> {
    command: &'a Command,
    started: Instant,
    record_wall_clock: bool,
}

impl<'a> Context<'a> {
    fn manifest(&self, subcommand: &'static str, seed: Option<u64>, digest: Option<String>) -> Manifest<'a> {
        Manifest {
            tool: "avmac",
            version: env!("CARGO_PKG_VERSION"),
            subcommand,
            parameters: self.command,
            seed,
            input_digest: digest,
            wall_clock_seconds: self.record_wall_clock.then(|| self.started.elapsed().as_secs_f64()),
        }
    }

    fn finish(&self, summary: &str) {
        println!("{summary}");
        println!("wall-clock: {:.3} s", self.started.elapsed().as_secs_f64());
    }
}

/// Runs the command line `args` (program name first) and returns the exit
/// code: 0 on success, 1 on run-time failures, 2 on input or usage errors.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.threads.unwrap_or(0)).build() {
        Ok(pool) => pool,
        Err(e) => {
            eprintln!("error: cannot start worker threads: {e}");
            return 1;
        }
    };
    let ctx = Context { command: &cli.command, started: Instant::now(), record_wall_clock: cli.record_wall_clock };
    let outcome = pool.install(|| match &cli.command {
        Command::Symmetrizability(a) => cmd_symmetrizability(&ctx, a),
        Command::Region(a) => cmd_region(&ctx, a),
        Command::Simulate { kind: SimKind::Discrete(a) } => cmd_discrete(&ctx, a),
        Command::Simulate { kind: SimKind::Gaussian(a) } => cmd_gaussian(&ctx, a),
    });
    match outcome {
        Ok(()) => 0,
        Err(e) => {
            match &e {
                CliError::Input(m) | CliError::Runtime(m) => eprintln!("error: {m}"),
            }
            e.code()
        }
    }
}

pub fn main() -> i32 {
    run(std::env::args_os())
}

fn load_channel(path: &Path) -> CliResult<(DiscreteAvmac, String)> {
    let bytes = std::fs::read(path).map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    let text = String::from_utf8(bytes).map_err(|_| CliError::Input(format!("{} is not UTF-8", path.display())))?;
    let ch = parse_channel_str(&text)?;
    Ok((ch, hex_digest(text.as_bytes())))
}

fn hex_digest(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().fold(String::with_capacity(64), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

fn write_output(path: Option<&Path>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("results serialize");
    s.push('\n');
    s
}

fn rows(law: &CondDistribution) -> Vec<Vec<f64>> {
    (0..law.num_rows()).map(|k| law.row(k).to_vec()).collect()
}

#[derive(Serialize)]
struct InputRecord {
    p_u: Vec<f64>,
    p_x_given_u: Vec<Vec<f64>>,
    p_y_given_u: Vec<Vec<f64>>,
}

impl From<&InputDistribution> for InputRecord {
    fn from(d: &InputDistribution) -> Self {
        Self { p_u: d.p_u.clone(), p_x_given_u: d.p_x_given_u.clone(), p_y_given_u: d.p_y_given_u.clone() }
    }
}

#[derive(Serialize)]
struct Witness {
    graph: crate::symmetrizability::BipartiteGraph,
    cost: f64,
    /// One law per time-sharing symbol; rows indexed by the spoofing
    /// letters `(x_1..x_{I-1}, y_1..y_{J-1})` in row-major order.
    laws: Vec<Vec<Vec<f64>>>,
}

#[derive(Serialize)]
struct SymResult {
    mode: Mode,
    order: usize,
    input: InputRecord,
    witness: Option<Witness>,
}

fn cmd_symmetrizability(ctx: &Context, a: &SymArgs) -> CliResult<()> {
    let (ch, digest) = load_channel(&a.channel)?;
    let mode = Mode::from(a.mode);
    let sym = Symmetrizer::new(&ch, a.max_list, SymmetryRule::default())?;
    let (order, input) = min_symmetrizability(&sym, mode, a.grid, a.u_card)?;
    let report = sym.report(&input, mode)?;
    debug_assert_eq!(report.order, order);
    let witness = match (report.witness_graph, report.witness_q, report.witness_cost) {
        (Some(graph), Some(q), Some(cost)) => Some(Witness { graph, cost, laws: q.iter().map(rows).collect() }),
        _ => None,
    };
    let summary = match &witness {
        Some(w) => format!(
            "{mode} symmetrizability order {order} (witness {}x{} graph, {} edges, cost {:.6})",
            w.graph.i,
            w.graph.j,
            w.graph.num_edges(),
            w.cost
        ),
        None => format!("{mode} symmetrizability order 0"),
    };
    let doc = Document {
        manifest: ctx.manifest("symmetrizability", None, Some(digest)),
        result: SymResult { mode, order, input: (&input).into(), witness },
    };
    write_output(a.out.as_deref(), &to_json(&doc))?;
    if a.out.is_some() {
        ctx.finish(&summary);
    } else {
        eprintln!("{summary}");
    }
    Ok(())
}

fn cmd_region(ctx: &Context, a: &RegionArgs) -> CliResult<()> {
    let (ch, digest) = load_channel(&a.channel)?;
    let bounds: &[Bound] = match a.mode {
        RegionMode::Inner => &[Bound::Inner],
        RegionMode::Outer => &[Bound::Outer],
        RegionMode::Both => &[Bound::Inner, Bound::Outer],
    };
    let opts = RegionOptions { step: a.grid, card_u: a.u_card, cap: a.max_list, ..RegionOptions::default() };
    let result = regions(&ch, a.list_size, opts, bounds)?;
    let mut csv = String::from("R1,R2,mode\n");
    let mut summary = String::new();
    for r in &result {
        for (x, y) in &r.boundary {
            let _ = writeln!(csv, "{x},{y},{}", r.bound);
        }
        let _ = writeln!(
            summary,
            "{} bound, L = {}: {} of {} grid inputs admitted, {} frontier points, max sum rate {:.6}",
            r.bound,
            r.list_size,
            r.pentagons.len(),
            r.grid_inputs,
            r.boundary.len(),
            r.boundary.iter().map(|p| p.0 + p.1).fold(0.0, f64::max)
        );
    }
    let manifest = to_json(&ctx.manifest("region", None, Some(digest)));
    match &a.out {
        Some(out) => {
            write_output(Some(out), &csv)?;
            let mut path = out.clone().into_os_string();
            path.push(".manifest.json");
            write_output(Some(Path::new(&path)), &manifest)?;
            ctx.finish(summary.trim_end());
        }
        None => {
            print!("{csv}");
            eprint!("{summary}");
        }
    }
    Ok(())
}

fn write_per_trial(path: Option<&Path>, rows: impl Iterator<Item = (usize, bool, bool, bool)>) -> CliResult<()> {
    let Some(path) = path else { return Ok(()) };
    let mut csv = String::from("trial,error,fallback,cert\n");
    for (t, e, f, c) in rows {
        let _ = writeln!(csv, "{t},{},{},{}", u8::from(e), u8::from(f), u8::from(c));
    }
    write_output(Some(path), &csv)
}

#[derive(Serialize)]
struct DiscreteResult {
    summary: crate::discrete_sim::SimulationSummary,
    rates: (f64, f64),
    composition: InputRecord,
    #[serde(skip_serializing_if = "Option::is_none")]
    attack: Option<AttackRecord>,
}

#[derive(Serialize)]
struct AttackRecord {
    graph: crate::symmetrizability::BipartiteGraph,
    expected_cost: f64,
    /// `(1/I - 1/M + 1/(MI))(1/J - 1/W + 1/(WJ))`.
    error_floor: f64,
}

fn cmd_discrete(ctx: &Context, a: &DiscreteArgs) -> CliResult<()> {
    let (ch, digest) = load_channel(&a.channel)?;
    let px = a.px.clone().unwrap_or_else(|| vec![1.0 / ch.card_x as f64; ch.card_x]);
    let py = a.py.clone().unwrap_or_else(|| vec![1.0 / ch.card_y as f64; ch.card_y]);
    let input = InputDistribution::product(px, py)?;
    let seed = a.run.seed;
    let cb = DiscreteCodebookPair::generate(&ch, &input, a.n, a.m, a.w, seed)?;
    let mut attack = None;
    let jammer = match a.jammer {
        DiscreteJammerArg::None => JammerSpec::Constant(ch.argmin_g()),
        DiscreteJammerArg::Constant => {
            JammerSpec::Constant(a.state.ok_or_else(|| CliError::Input("--jammer constant needs --state".into()))?)
        }
        DiscreteJammerArg::Iid => {
            let law = a.state_law.as_ref().ok_or_else(|| CliError::Input("--jammer iid needs --state-law".into()))?;
            JammerSpec::Iid(CondDistribution::constant(vec![cb.card_u()], law)?)
        }
        DiscreteJammerArg::Symmetrizing => {
            let sym = Symmetrizer::new(&ch, a.max_list, SymmetryRule::default())?;
            let (spec, cost) = symmetrizing_jammer(&sym, a.sym_mode.into(), &cb.composition, a.graph_edges)?
                .ok_or_else(|| CliError::Input("no graph of the requested size is symmetrizable within budget".into()))?;
            if let JammerSpec::Symmetrizing { graph, .. } = &spec {
                attack = Some(AttackRecord {
                    graph: graph.clone(),
                    expected_cost: cost,
                    error_floor: symmetrizing_error_floor(graph.i, graph.j, a.m, a.w),
                });
            }
            spec
        }
    };
    let params = DecoderParams { eta: a.eta, eta_prime: a.eta_prime, list_size: a.list_size };
    let run = run_discrete_trials(&ch, &cb, &jammer, &params, a.run.trials as usize, seed)?;
    write_per_trial(
        a.run.per_trial.as_deref(),
        run.reports.iter().map(|r| (r.trial, r.error, r.used_fallback, false)),
    )?;
    let s = &run.summary;
    let summary = format!(
        "discrete: {} trials, error rate {:.4} (se {:.4}), fallback rate {:.4}, mean list size {:.2}",
        s.trials, s.error_rate, s.std_error, s.fallback_rate, s.mean_list_size
    );
    let doc = Document {
        manifest: ctx.manifest("simulate discrete", Some(seed), Some(digest)),
        result: DiscreteResult { summary: run.summary, rates: cb.rates(), composition: (&cb.composition).into(), attack },
    };
    write_output(a.run.out.as_deref(), &to_json(&doc))?;
    if a.run.out.is_some() {
        ctx.finish(&summary);
    } else {
        eprintln!("{summary}");
    }
    Ok(())
}

#[derive(Serialize)]
struct GaussianResult {
    summary: crate::gaussian_sim::GaussianSummary,
    rates: (f64, f64),
    rate_bounds: crate::gaussian_sim::GaussianRateBounds,
    #[serde(skip_serializing_if = "Option::is_none")]
    superposition: Option<SuperpositionRecord>,
}

#[derive(Serialize)]
struct UserAttackRecord {
    eta_star: f64,
    epsilon: f64,
    gamma: f64,
    delta: f64,
    delta_prime: f64,
    delta_n: f64,
}

#[derive(Serialize)]
struct SuperpositionRecord {
    user1: UserAttackRecord,
    user2: UserAttackRecord,
    certificate_floor: f64,
    error_floor: f64,
    /// `eta*` and `epsilon` are finite-blocklength estimates.
    estimated: bool,
}

fn cmd_gaussian(ctx: &Context, a: &GaussianArgs) -> CliResult<()> {
    let params = GaussianParams {
        p1: a.p1,
        p2: a.p2,
        state_power: a.state_power,
        sigma2: a.sigma2,
        n: a.n,
        list_size: a.list_size,
        m: a.m,
        w: a.w,
    };
    let jammer = match a.jammer {
        GaussianJammerArg::None => GaussianJammer::None,
        GaussianJammerArg::Gaussian => GaussianJammer::Gaussian { eta: a.eta.unwrap_or(0.05 * a.state_power) },
        GaussianJammerArg::Superposition => GaussianJammer::Superposition {
            options: EtaStarOptions {
                centers: a
                    .centers
                    .iter()
                    .map(|c| match c {
                        CenterArg::Origin => Center::Origin,
                        CenterArg::Centroid => Center::Centroid,
                    })
                    .collect(),
                floor: a.coverage_floor,
                ..EtaStarOptions::default()
            },
        },
    };
    let seed = a.run.seed;
    let run = run_gaussian_trials(&params, &jammer, a.run.trials as usize, seed)?;
    write_per_trial(
        a.run.per_trial.as_deref(),
        run.reports.iter().map(|r| (r.trial, r.error, r.used_fallback, r.certificate)),
    )?;
    let superposition = match (&run.attack, &run.floor) {
        (Some(att), Some(fl)) => {
            let user = |k: usize, cfg: &crate::gaussian_sim::SuperpositionAttackConfig| UserAttackRecord {
                eta_star: cfg.eta_star,
                epsilon: cfg.epsilon,
                gamma: cfg.gamma,
                delta: cfg.delta,
                delta_prime: fl.delta_prime[k],
                delta_n: fl.delta_n[k],
            };
            Some(SuperpositionRecord {
                user1: user(0, &att.user1),
                user2: user(1, &att.user2),
                certificate_floor: fl.certificate_floor,
                error_floor: ConverseFloor::error_floor(&run.summary, params.list_size),
                estimated: true,
            })
        }
        _ => None,
    };
    let s = &run.summary;
    let mut summary = format!(
        "gaussian: {} trials, error rate {:.4} (se {:.4}), fallback rate {:.4}, certificate rate {:.4}",
        s.base.trials, s.base.error_rate, s.base.std_error, s.base.fallback_rate, s.certificate_rate
    );
    if let Some(sp) = &superposition {
        let _ = write!(summary, "\nconverse floors: certificate {:.4}, error {:.4}", sp.certificate_floor, sp.error_floor);
    }
    let doc = Document {
        manifest: ctx.manifest("simulate gaussian", Some(seed), None),
        result: GaussianResult {
            summary: run.summary.clone(),
            rates: params.rates(),
            rate_bounds: params.rate_bounds(),
            superposition,
        },
    };
    write_output(a.run.out.as_deref(), &to_json(&doc))?;
    if a.run.out.is_some() {
        ctx.finish(&summary);
    } else {
        eprintln!("{summary}");
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn usage_errors_exit_with_two() {
        assert_eq!(run(["avmac"]), 2);
        assert_eq!(run(["avmac", "simulate", "gaussian", "--state-power", "1", "--n", "4", "--m", "2", "--w", "2", "--trials", "0"]), 2);
        assert_eq!(run(["avmac", "region", "--channel", "/nonexistent.toml", "--list-size", "1"]), 2);
        assert_eq!(run(["avmac", "--version"]), 0);
    }

    #[test]
    fn digest_is_sha256() {
        assert_eq!(hex_digest(b"abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    }
}
