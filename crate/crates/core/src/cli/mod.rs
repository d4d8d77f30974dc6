//! The `sepscope` command line.
//!
//! Exit codes: 0 on success, 1 on usage errors (bad flags, unreadable or
//! mismatched inputs), 2 on numerical or I/O failures.

mod config;
mod output;
mod plot;

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::error::ErrorKind;
use clap::{Args, CommandFactory, Parser, Subcommand};
use serde_json::{json, Value};

pub use config::RunConfig;
pub use output::{
    document, profile_csv, read_profile_csv, surface_csv, to_json_text, validate_document, CODE_VERSION,
    SCHEMA_VERSION,
};
pub use plot::{emit_profile_plot, emit_surface_plot, profile_svg, surface_svg};

use crate::analytic::{bloore_integral_checks, fit_beta_tail, fit_cosine, fit_power, FitModel};
use crate::profile::{integrate_profile, Axis, Checkpoint, Ppt, ProfileRun};
use crate::sampling::{estimate_volume, SamplerConfig, SamplerKind};
use crate::viz::{qubit_measure_bins, rebit_measure_map, QubitVizConfig, RebitMeasure, RebitVizConfig};
use crate::{Error, Field, Result};

/// Environment variable read for the default `--workers`.
pub const WORKERS_ENV: &str = "SEPSCOPE_WORKERS";

/// Samples between periodic checkpoint saves.
const CHECKPOINT_EVERY: u64 = 64 * 1024;

#[derive(Debug, Parser)]
#[command(name = "sepscope", version, about = "Hilbert-Schmidt separability profiles and probabilities")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Worker threads; results do not depend on this
    #[arg(long, global = true, env = WORKERS_ENV)]
    workers: Option<usize>,

    /// Flat key = value file of default flag values; explicit flags win
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Radial separability profile and probability
    Radial(ProfileArgs),
    /// Azimuthal separability profile and probability
    Azimuthal(ProfileArgs),
    /// Exact quadrature identities for the rebit separability function
    BlooreCheck(BlooreArgs),
    /// Fits to saved profile CSVs
    Fit(FitArgs),
    /// Pushforward measure on the d1-d3 plane under real local conjugation
    VizRebit(VizRebitArgs),
    /// Pushforward measure over d-bins under complex local conjugation
    VizQubit(VizQubitArgs),
    /// Hilbert-Schmidt volume reproduction
    VolumeCheck(VolumeArgs),
}

#[derive(Debug, Args)]
struct ProfileArgs {
    #[arg(long, default_value = "rebit")]
    field: Field,
    /// Angular samples [default: 100000 rebit, 200000 qubit]
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    samples: Option<u64>,
    /// Grid points on [0, 1] [default: 101]
    #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
    grid: Option<u64>,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// mc or qmc [default: mc rebit, qmc qubit]
    #[arg(long)]
    sampler: Option<SamplerKind>,
    /// CSV path; the JSON summary, SVG plot and timing sidecar go next to it
    #[arg(long)]
    out: Option<PathBuf>,
    /// Binary checkpoint, saved periodically and when halted
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    /// Continue from --checkpoint
    #[arg(long, requires = "checkpoint")]
    resume: bool,
    /// Stop after this many samples (rounded up to a chunk) and save the checkpoint
    #[arg(long, requires = "checkpoint", value_name = "N")]
    halt_after: Option<u64>,
    /// Use full-scale sample counts and grids
    #[arg(long)]
    paper_scale: bool,
}

#[derive(Debug, Args)]
struct BlooreArgs {
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct FitArgs {
    /// beta, cosine or power
    #[arg(long)]
    model: FitModel,
    /// Profile CSV (the qubit profile for `power`)
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value = "rebit")]
    field: Field,
    /// Rebit radial profile CSV, required by `power`
    #[arg(long)]
    reference: Option<PathBuf>,
    #[arg(long, default_value_t = 1.5)]
    alpha: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VizRebitArgs {
    /// QMC points over the two group elements
    #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
    samples: u64,
    /// Grid points per axis
    #[arg(long, default_value_t = 51, value_parser = clap::value_parser!(u64).range(3..))]
    grid: u64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// gram (surface volume) or full (9x9 jacobian with d2)
    #[arg(long, default_value = "gram")]
    measure: RebitMeasure,
    /// Exchange the coordinates drawn for A and B
    #[arg(long)]
    swap_roles: bool,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    paper_scale: bool,
}

#[derive(Debug, Args)]
struct VizQubitArgs {
    #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
    samples: u64,
    /// Bins per d axis (odd)
    #[arg(long, default_value_t = 7, value_parser = clap::value_parser!(u64).range(3..))]
    bins: u64,
    #[arg(long, default_value_t = 500.0)]
    entry_bound: f64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    paper_scale: bool,
}

#[derive(Debug, Args)]
struct VolumeArgs {
    /// One field only [default: both]
    #[arg(long)]
    field: Option<Field>,
    #[arg(long, default_value_t = 1_000_000, value_parser = clap::value_parser!(u64).range(1..))]
    samples: u64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value = "mc")]
    sampler: SamplerKind,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Full-scale `(samples, grid)` for a profile run.
pub fn paper_scale_profile(axis: Axis, field: Field) -> (u64, usize, SamplerKind) {
    match (axis, field) {
        (Axis::Radial, Field::Rebit) => (1_100_000, 10_001, SamplerKind::MonteCarlo),
        (Axis::Radial, Field::Qubit) => (10_600_000, 10_001, SamplerKind::QuasiMonteCarlo),
        (Axis::Azimuthal, Field::Rebit) => (22_825_000, 1_001, SamplerKind::MonteCarlo),
        (Axis::Azimuthal, Field::Qubit) => (17_460_000, 1_001, SamplerKind::QuasiMonteCarlo),
    }
}

pub const PAPER_SCALE_VIZ_REBIT: u64 = 128_000;
pub const PAPER_SCALE_VIZ_QUBIT: u64 = 114_000;

fn default_sampler(field: Field) -> SamplerKind {
    match field {
        Field::Rebit => SamplerKind::MonteCarlo,
        Field::Qubit => SamplerKind::QuasiMonteCarlo,
    }
}

fn default_samples(field: Field) -> u64 {
    match field {
        Field::Rebit => 100_000,
        Field::Qubit => 200_000,
    }
}

fn warn_paper_scale(what: &str) {
    eprintln!("warning: --paper-scale {what}: full-scale runs take hours to days on a workstation");
}

/// What a successful command produced, for the exit status.
enum Outcome {
    Done,
    /// A deterministic check failed; exit 2.
    CheckFailed,
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let argv: Vec<String> = match args.into_iter().map(|a| a.into().into_string()).collect() {
        Ok(v) => v,
        Err(_) => {
            eprintln!("error: arguments must be valid UTF-8");
            return 1;
        }
    };
    let argv = match config::merge_config_file(argv) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("error: {e}");
            return 1;
        }
    };
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return 0;
            }
            if !e.render().to_string().contains("Usage:") {
                eprintln!("\n{}", usage_for(&argv));
            }
            return 1;
        }
    };
    let workers = cli
        .workers
        .unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1))
        .max(1);
    match dispatch(cli.command, workers) {
        Ok(Outcome::Done) => 0,
        Ok(Outcome::CheckFailed) => 2,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

/// Usage line of the subcommand named in `argv`, or of the whole program.
fn usage_for(argv: &[String]) -> String {
    let mut cmd = Cli::command();
    cmd.build();
    let name = argv.iter().skip(1).find(|a| config::SUBCOMMANDS.contains(&a.as_str()));
    match name.and_then(|n| cmd.find_subcommand_mut(n)) {
        Some(sub) => sub.render_usage().to_string(),
        None => cmd.render_usage().to_string(),
    }
}

/// Exit status for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Input(_) | Error::Checkpoint(_) => 1,
        _ => 2,
    }
}

fn dispatch(cmd: Command, workers: usize) -> Result<Outcome> {
    match cmd {
        Command::Radial(a) => profile_cmd(Axis::Radial, a, workers),
        Command::Azimuthal(a) => profile_cmd(Axis::Azimuthal, a, workers),
        Command::BlooreCheck(a) => bloore_cmd(a),
        Command::Fit(a) => fit_cmd(a),
        Command::VizRebit(a) => viz_rebit_cmd(a, workers),
        Command::VizQubit(a) => viz_qubit_cmd(a, workers),
        Command::VolumeCheck(a) => volume_cmd(a, workers),
    }
}

fn set_path(cfg: &mut RunConfig, key: &str, p: &Option<PathBuf>) {
    if let Some(p) = p {
        cfg.set(key, p.display());
    }
}

/// Prints the document and writes it to `path` when given.
fn emit_json(doc: &Value, path: Option<&Path>) -> Result<()> {
    if let Some(p) = path {
        output::write_json(p, doc)?;
    }
    print!("{}", to_json_text(doc)?);
    Ok(())
}

fn write_timing(base: &Path, seconds: f64) -> Result<()> {
    let path = base.with_extension("timing.json");
    output::write_file(&path, &format!("{{\n  \"runtime_seconds\": {seconds}\n}}\n"))
}

fn profile_cmd(axis: Axis, a: ProfileArgs, workers: usize) -> Result<Outcome> {
    let field = a.field;
    let (mut samples, mut grid, mut kind) = (default_samples(field), 101usize, default_sampler(field));
    if a.paper_scale {
        warn_paper_scale(axis.name());
        (samples, grid, kind) = paper_scale_profile(axis, field);
    }
    samples = a.samples.unwrap_or(samples);
    grid = a.grid.map_or(grid, |g| g as usize);
    kind = a.sampler.unwrap_or(kind);

    let mut rc = RunConfig::new(axis.name());
    rc.set("field", field).set("samples", samples).set("grid", grid).set("seed", a.seed).set("sampler", kind);
    rc.set("paper-scale", a.paper_scale);
    set_path(&mut rc, "out", &a.out);
    set_path(&mut rc, "checkpoint", &a.checkpoint);

    let cfg = SamplerConfig::new(field, kind, a.seed, samples).with_workers(workers);
    cfg.validate().map_err(|e| Error::Input(e.to_string()))?;
    let start = Instant::now();
    let mut run = match (&a.checkpoint, a.resume) {
        (Some(path), true) => {
            if !path.exists() {
                return Err(Error::Input(format!("no checkpoint at {}", path.display())));
            }
            ProfileRun::from_checkpoint(Checkpoint::load(path)?, axis, cfg, grid, &Ppt)?
        }
        _ => ProfileRun::new(axis, cfg, grid, &Ppt)?,
    };
    let stop = a.halt_after.map_or(samples, |h| h.min(samples));
    while run.next_index() < stop {
        run.advance((run.next_index() + CHECKPOINT_EVERY).min(stop))?;
        if let Some(path) = &a.checkpoint {
            run.checkpoint().save(path)?;
        }
    }
    if !run.is_complete() {
        eprintln!("halted at sample {} of {samples}; resume with --resume", run.next_index());
        return Ok(Outcome::Done);
    }
    let profile = run.finish()?;
    let prob = integrate_profile(&profile)?;
    let elapsed = start.elapsed().as_secs_f64();

    let doc = document(
        "sepscope.profile",
        &rc,
        json!({
            "axis": axis,
            "abscissa": axis.abscissa(),
            "field": field,
            "sampler": kind,
            "generator": kind.generator(),
            "seed": a.seed,
            "n_samples": samples,
            "grid_points": grid,
            "probability": prob.p,
            "stderr": prob.stderr,
            "total_weight": profile.total_weight,
        }),
    )?;
    if let Some(out) = &a.out {
        output::write_file(out, &profile_csv(&profile))?;
        emit_profile_plot(&profile, &out.with_extension("svg"))?;
        write_timing(out, elapsed)?;
    }
    emit_json(&doc, a.out.as_ref().map(|o| o.with_extension("json")).as_deref())?;
    Ok(Outcome::Done)
}

fn bloore_cmd(a: BlooreArgs) -> Result<Outcome> {
    let mut rc = RunConfig::new("bloore-check");
    set_path(&mut rc, "out", &a.out);
    let report = bloore_integral_checks()?;
    let mut body = serde_json::to_value(&report)?;
    body["all_pass"] = json!(report.all_pass());
    body["verdict"] = json!(if report.all_pass() { "PASS" } else { "FAIL" });
    let doc = document("sepscope.bloore", &rc, body)?;
    emit_json(&doc, a.out.as_deref())?;
    Ok(if report.all_pass() { Outcome::Done } else { Outcome::CheckFailed })
}

fn read_profile(path: &Path, axis: Axis, field: Field) -> Result<crate::profile::ProfileEstimate> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))?;
    read_profile_csv(&text, axis, field)
}

fn fit_cmd(a: FitArgs) -> Result<Outcome> {
    let mut rc = RunConfig::new("fit");
    rc.set("model", a.model_name()).set("input", a.input.display()).set("field", a.field).set("alpha", a.alpha);
    set_path(&mut rc, "reference", &a.reference);
    set_path(&mut rc, "out", &a.out);
    let mut body = match a.model {
        FitModel::BetaTail => {
            let p = read_profile(&a.input, Axis::Radial, a.field)?;
            let fit = fit_beta_tail(&p)?;
            let mut v = serde_json::to_value(&fit)?;
            v["integrated_probability"] = json!(integrate_profile(&p)?.p);
            v
        }
        FitModel::Cosine => {
            let p = read_profile(&a.input, Axis::Azimuthal, a.field)?;
            let fit = fit_cosine(&p)?;
            let mut v = serde_json::to_value(&fit)?;
            v["integrated_probability"] = json!(integrate_profile(&p)?.p);
            v
        }
        FitModel::PowerCompare => {
            let reference = a
                .reference
                .as_ref()
                .ok_or_else(|| Error::Input("`fit --model power` needs --reference REBIT.csv".into()))?;
            if !(a.alpha > 0.0) {
                return Err(Error::Input("--alpha must be positive".into()));
            }
            let qubit = read_profile(&a.input, Axis::Radial, Field::Qubit)?;
            let rebit = read_profile(reference, Axis::Radial, Field::Rebit)?;
            serde_json::to_value(fit_power(&rebit, &qubit, a.alpha)?)?
        }
    };
    let mut inputs = vec![a.input.display().to_string()];
    if let Some(r) = &a.reference {
        inputs.push(r.display().to_string());
    }
    body["inputs"] = json!(inputs);
    let doc = document("sepscope.fit", &rc, body)?;
    emit_json(&doc, a.out.as_deref())?;
    Ok(Outcome::Done)
}

impl FitArgs {
    fn model_name(&self) -> &'static str {
        match self.model {
            FitModel::BetaTail => "beta",
            FitModel::Cosine => "cosine",
            FitModel::PowerCompare => "power",
        }
    }
}

fn measure_name(m: RebitMeasure) -> &'static str {
    match m {
        RebitMeasure::GramSurface => "gram",
        RebitMeasure::FullJacobian => "full",
    }
}

fn viz_rebit_cmd(a: VizRebitArgs, workers: usize) -> Result<Outcome> {
    let mut n = a.samples;
    if a.paper_scale {
        warn_paper_scale("viz-rebit");
        n = PAPER_SCALE_VIZ_REBIT;
    }
    let mut rc = RunConfig::new("viz-rebit");
    rc.set("samples", n).set("grid", a.grid).set("seed", a.seed).set("measure", measure_name(a.measure));
    rc.set("swap-roles", a.swap_roles).set("paper-scale", a.paper_scale);
    set_path(&mut rc, "out", &a.out);

    let mut cfg = RebitVizConfig::new(n, a.grid as usize, a.seed);
    cfg.measure = a.measure;
    cfg.swap_roles = a.swap_roles;
    cfg.workers = workers;
    let res = rebit_measure_map(&cfg)?;
    let measure_note = match a.measure {
        RebitMeasure::GramSurface => "sqrt det(J^T J) of the 8x9 jacobian of (group, d1, d3) -> rho' coordinates at d2 = 0",
        RebitMeasure::FullJacobian => "|det J| of the 9x9 jacobian of (group, d1, d2, d3) -> rho' coordinates at d2 = 0",
    };
    let doc = document(
        "sepscope.viz-rebit",
        &rc,
        json!({
            "ratios": res.ratios,
            "tally": res.tally,
            "skipped": res.skipped,
            "measure": measure_name(a.measure),
            "measure_definition": measure_note,
            "n_qmc": n,
            "grid": a.grid,
            "seed": a.seed,
            "swap_roles": a.swap_roles,
        }),
    )?;
    if let Some(out) = &a.out {
        output::write_file(out, &surface_csv(&res.surface))?;
        emit_surface_plot(&res.surface, "rebit pushforward measure on the d1-d3 plane", &out.with_extension("svg"))?;
    }
    emit_json(&doc, a.out.as_ref().map(|o| o.with_extension("json")).as_deref())?;
    Ok(Outcome::Done)
}

fn viz_qubit_cmd(a: VizQubitArgs, workers: usize) -> Result<Outcome> {
    if a.bins % 2 == 0 {
        return Err(Error::Input(format!("--bins must be odd, got {}", a.bins)));
    }
    if !(a.entry_bound > 0.0 && a.entry_bound.is_finite()) {
        return Err(Error::Input("--entry-bound must be positive and finite".into()));
    }
    let mut n = a.samples;
    if a.paper_scale {
        warn_paper_scale("viz-qubit");
        n = PAPER_SCALE_VIZ_QUBIT;
    }
    let mut rc = RunConfig::new("viz-qubit");
    rc.set("samples", n).set("bins", a.bins).set("entry-bound", a.entry_bound).set("seed", a.seed);
    rc.set("paper-scale", a.paper_scale);
    set_path(&mut rc, "out", &a.out);

    let mut cfg = QubitVizConfig::new(n, a.bins as usize, a.entry_bound, a.seed);
    cfg.workers = workers;
    let res = qubit_measure_bins(&cfg)?;
    let suffixes = ["_d1_d2", "_d1_d3", "_d2_d3"];
    let marginal_files: Vec<String> = match &a.out {
        Some(out) => suffixes.iter().map(|s| output::with_stem_suffix(out, s).display().to_string()).collect(),
        None => Vec::new(),
    };
    let doc = document(
        "sepscope.viz-qubit",
        &rc,
        json!({
            "separability": res.separability,
            "negative_jacobian_fraction": res.negative_jacobian_fraction,
            "counts": res.counts,
            "tally": res.tally,
            "marginals": marginal_files,
            "bin_measure": res.bins,
            "n_qmc": n,
            "bins": a.bins,
            "entry_bound": a.entry_bound,
            "seed": a.seed,
        }),
    )?;
    if let Some(out) = &a.out {
        for (surface, suffix) in res.marginals.iter().zip(suffixes) {
            let csv = output::with_stem_suffix(out, suffix);
            output::write_file(&csv, &surface_csv(surface))?;
            let title = format!("qubit pushforward marginal over {}-{}", surface.axes[0], surface.axes[1]);
            emit_surface_plot(surface, &title, &csv.with_extension("svg"))?;
        }
    }
    emit_json(&doc, a.out.as_ref().map(|o| o.with_extension("json")).as_deref())?;
    Ok(Outcome::Done)
}

fn volume_cmd(a: VolumeArgs, workers: usize) -> Result<Outcome> {
    let mut rc = RunConfig::new("volume-check");
    if let Some(f) = a.field {
        rc.set("field", f);
    }
    rc.set("samples", a.samples).set("seed", a.seed).set("sampler", a.sampler);
    set_path(&mut rc, "out", &a.out);
    let fields = a.field.map_or(vec![Field::Rebit, Field::Qubit], |f| vec![f]);
    let mut estimates = Vec::new();
    for field in fields {
        let cfg = SamplerConfig::new(field, a.sampler, a.seed, a.samples).with_workers(workers);
        cfg.validate().map_err(|e| Error::Input(e.to_string()))?;
        let est = estimate_volume(&cfg)?;
        estimates.push(json!({
            "field": field,
            "radial_exponent": field.radial_exponent(),
            "volume": est.volume,
            "stderr": est.stderr,
            "exact": est.exact,
            "relative_error": est.relative_error(),
            "z_score": est.z_score(),
            "within_3_stderr": est.z_score().abs() <= 3.0,
            "within_2_percent": est.relative_error() <= 0.02,
        }));
    }
    let doc = document(
        "sepscope.volume",
        &rc,
        json!({ "estimates": estimates, "sampler": a.sampler, "generator": a.sampler.generator() }),
    )?;
    emit_json(&doc, a.out.as_deref())?;
    Ok(Outcome::Done)
}
