use std::fs::File;
use std::io::{self, BufReader, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use cochannel_atlas::analytic::{self, AttackGeometry};
use cochannel_atlas::ccpr::{self, CcprKey, Channel, Source, TransmissionMode};
use cochannel_atlas::cir::{self, AssignmentPolicy};
use cochannel_atlas::config::{self, Config, Overrides};
use cochannel_atlas::gapfiller::{self, GapFillerAttackInput, GapFillerSpec, Threshold};
use cochannel_atlas::gridsim::{RasterFormat, ShadowingMode};
use cochannel_atlas::link_budget::{self, DEFAULT_NOISE_FIGURE_DB, DVB_T_8MHZ_BANDWIDTH_HZ};
use cochannel_atlas::measurement::{self, MeasurementRun, ReceiverModel};
use cochannel_atlas::propagation::{Frequency, PropagationParams};
use cochannel_atlas::reproduce;

#[derive(Parser)]
#[command(
    name = "cochannel-atlas",
    version,
    about = "Co-channel attack geometry for DVB-T/T2 broadcasts"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Maximum attack radius for a rogue transmitter.
    Range(RangeArgs),
    /// Rogue power needed to control a given radius.
    Power(PowerArgs),
    /// Controlled share of the affected area and the mush-zone multiple.
    MushRatio(MushArgs),
    /// Receiver noise power and minimum input power.
    Linkbudget(LinkBudgetArgs),
    /// Dump the embedded protection ratio table as CSV.
    ExportCcpr(ExportArgs),
    /// Run a grid simulation from a JSON config.
    Simulate(SimulateArgs),
    /// Judge a gap-filler capture attempt.
    Gapfiller(GapFillerArgs),
    /// Run the virtual stepped-power protection ratio measurement.
    MeasureSim(MeasureArgs),
    /// Classify geolocated impulse responses and emit GeoJSON.
    CirClassify(CirArgs),
    /// Recompute the headline numbers and compare with expectations.
    Reproduce(ReproduceArgs),
}

#[derive(Args)]
struct PathLossArgs {
    /// Carrier frequency in MHz.
    #[arg(long = "f", value_name = "MHZ")]
    f_mhz: f64,
    /// Path-loss exponent; 2 with the default d0 is free space.
    #[arg(long, default_value_t = 2.0)]
    n: f64,
    /// Reference distance in meters for n != 2.
    #[arg(long, default_value_t = 1.0)]
    d0: f64,
}

impl PathLossArgs {
    fn params(&self) -> PropagationParams {
        if self.n == 2.0 && self.d0 == 1.0 {
            PropagationParams::fspl()
        } else {
            PropagationParams::log_distance(self.d0, self.n)
        }
    }
}

#[derive(Args)]
struct RangeArgs {
    /// Rogue transmit power (EIRP) in dBm.
    #[arg(long)]
    pt: f64,
    /// Regular signal level in the attacked area, dBm.
    #[arg(long = "pr-reg", allow_hyphen_values = true)]
    pr_reg: f64,
    /// Protection ratio the rogue signal needs, dB.
    #[arg(long, default_value_t = 0.0)]
    alpha: f64,
    #[command(flatten)]
    path_loss: PathLossArgs,
    /// Print CSV instead of text.
    #[arg(long)]
    csv: bool,
}

#[derive(Args)]
struct PowerArgs {
    /// Radius to control, meters.
    #[arg(long)]
    d: f64,
    #[arg(long = "pr-reg", allow_hyphen_values = true)]
    pr_reg: f64,
    #[arg(long, default_value_t = 0.0)]
    alpha: f64,
    #[command(flatten)]
    path_loss: PathLossArgs,
}

#[derive(Args)]
struct MushArgs {
    #[arg(long = "alpha-rogue")]
    alpha_rogue: f64,
    #[arg(long = "alpha-reg")]
    alpha_reg: f64,
    #[arg(long, default_value_t = 2.0)]
    n: f64,
}

#[derive(Args)]
struct LinkBudgetArgs {
    /// Noise figure, dB.
    #[arg(long = "nf", default_value_t = DEFAULT_NOISE_FIGURE_DB)]
    noise_figure: f64,
    /// Noise bandwidth, Hz.
    #[arg(long = "bw", default_value_t = DVB_T_8MHZ_BANDWIDTH_HZ)]
    bandwidth: f64,
    /// Required C/N, dB. Alternatively look it up with --mode.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "mode")]
    cn: Option<f64>,
    /// Transmission mode, e.g. "DVB-T 64QAM 2/3" or "DVB-T2 G8".
    #[arg(long)]
    mode: Option<TransmissionMode>,
    #[arg(long, default_value = "Ricean")]
    channel: Channel,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ExportArgs {
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    /// Grid resolution, meters per cell.
    #[arg(long)]
    resolution: Option<f64>,
    /// Frequency in MHz.
    #[arg(long = "f")]
    f_mhz: Option<f64>,
    #[arg(long)]
    n: Option<f64>,
    #[arg(long)]
    sigma: Option<f64>,
    #[arg(long = "alpha-reg")]
    alpha_reg: Option<f64>,
    #[arg(long = "alpha-rogue")]
    alpha_rogue: Option<f64>,
    #[arg(long = "nf")]
    noise_figure: Option<f64>,
    #[arg(long = "location-pct")]
    location_pct: Option<f64>,
    /// mean, random or margin.
    #[arg(long, value_parser = parse_shadowing)]
    shadowing: Option<ShadowingMode>,
    #[arg(long = "max-cells")]
    max_cells: Option<u64>,
    #[arg(long)]
    raster: Option<PathBuf>,
    #[arg(long = "raster-format")]
    raster_format: Option<RasterFormat>,
    #[arg(long)]
    stats: Option<PathBuf>,
    /// Worker threads, 0 = all cores.
    #[arg(long, env = "COCHANNEL_ATLAS_THREADS", default_value_t = 0)]
    threads: usize,
}

fn parse_shadowing(s: &str) -> Result<ShadowingMode, String> {
    match s.to_ascii_lowercase().as_str() {
        "mean" => Ok(ShadowingMode::Mean),
        "random" => Ok(ShadowingMode::Random),
        "margin" => Ok(ShadowingMode::Margin),
        _ => Err(format!("expected mean, random or margin, got '{s}'")),
    }
}

#[derive(Args)]
struct GapFillerArgs {
    /// Broadcaster level at the gap-filler input, dBm.
    #[arg(long = "p-rbv", allow_hyphen_values = true)]
    p_rbv: f64,
    /// Attacker level at the gap-filler input, dBm.
    #[arg(long = "p-rav", allow_hyphen_values = true)]
    p_rav: f64,
    /// Broadcaster level at the attacker, dBm (informational).
    #[arg(long = "p-rba", allow_hyphen_values = true)]
    p_rba: Option<f64>,
    /// Fixed capture threshold in dB; defaults to the minimum C/N of the
    /// gap-filler's mode on a Ricean channel.
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long = "input-min", allow_hyphen_values = true)]
    input_min: Option<f64>,
    #[arg(long = "input-max", allow_hyphen_values = true)]
    input_max: Option<f64>,
    #[arg(long)]
    mode: Option<TransmissionMode>,
}

#[derive(Args)]
struct MeasureArgs {
    /// Protection ratio the simulated receiver needs for the rogue signal, dB.
    #[arg(long = "true-ccpr")]
    true_ccpr: f64,
    /// Protection ratio for re-locking to the reference; defaults to --true-ccpr.
    #[arg(long = "ccpr-regular")]
    ccpr_regular: Option<f64>,
    #[arg(long = "p-fixed", default_value_t = -60.0, allow_hyphen_values = true)]
    p_fixed: f64,
    /// Starting rogue power; defaults to 10 dB above the expected capture point.
    #[arg(long = "p-start", allow_hyphen_values = true)]
    p_start: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    step: f64,
    #[arg(long, default_value_t = 10)]
    dwell: u32,
    #[arg(long, default_value_t = 0)]
    settle: u32,
    #[arg(long, default_value_t = 0)]
    acquire: u32,
    #[arg(long, default_value_t = 0.0)]
    hysteresis: f64,
    #[arg(long, default_value_t = 1)]
    repeats: usize,
    /// Write the state trace as CSV.
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Args)]
struct CirArgs {
    /// NDJSON file of impulse response records.
    #[arg(long)]
    input: PathBuf,
    #[arg(long = "alpha-rogue")]
    alpha_rogue: Option<f64>,
    #[arg(long = "alpha-reg")]
    alpha_reg: Option<f64>,
    /// Mode used to look up thresholds not given explicitly.
    #[arg(long, default_value = "DVB-T2 G8")]
    mode: TransmissionMode,
    #[arg(long, default_value = "Gaussian")]
    channel: Channel,
    #[arg(long = "original-label")]
    original_label: Option<String>,
    #[arg(long = "echo-label")]
    echo_label: Option<String>,
    #[arg(long = "original-delay")]
    original_delay: Option<f64>,
    #[arg(long = "echo-delay")]
    echo_delay: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    window: f64,
    /// GeoJSON output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ReproduceArgs {
    #[arg(long = "ccpr-source", default_value = "M2")]
    ccpr_source: Source,
    #[arg(long)]
    json: bool,
}

/// Failures of the run itself (I/O), as opposed to bad inputs.
#[derive(Debug)]
struct RuntimeFailure(String);

impl std::fmt::Display for RuntimeFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for RuntimeFailure {}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            let runtime = e.downcast_ref::<RuntimeFailure>().is_some()
                || e.downcast_ref::<io::Error>().is_some()
                || e.downcast_ref::<cochannel_atlas::Error>()
                    .is_some_and(cochannel_atlas::Error::is_runtime);
            if runtime {
                ExitCode::from(1)
            } else {
                eprintln!("see schema/config.json for the config format and --help for flags");
                ExitCode::from(2)
            }
        }
    }
}

fn dispatch(cmd: Command) -> Result<ExitCode> {
    match cmd {
        Command::Range(a) => range(a),
        Command::Power(a) => power(a),
        Command::MushRatio(a) => mush_ratio(a),
        Command::Linkbudget(a) => linkbudget(a),
        Command::ExportCcpr(a) => export_ccpr(a),
        Command::Simulate(a) => simulate(a),
        Command::Gapfiller(a) => gap_filler(a),
        Command::MeasureSim(a) => measure(a),
        Command::CirClassify(a) => cir_classify(a),
        Command::Reproduce(a) => run_reproduce(a),
    }
    .map(|()| ExitCode::SUCCESS)
    .or_else(|e| match e.downcast::<Failed>() {
        Ok(_) => Ok(ExitCode::from(1)),
        Err(e) => Err(e),
    })
}

/// Completed, but with failed checks.
#[derive(Debug)]
struct Failed;

impl std::fmt::Display for Failed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("one or more checks failed")
    }
}

impl std::error::Error for Failed {}

fn write_out(path: Option<&PathBuf>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| RuntimeFailure(format!("cannot write {}: {e}", p.display())).into()),
        None => {
            io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn geometry(pt: f64, pr_reg: f64, alpha: f64, pl: &PathLossArgs) -> Result<AttackGeometry> {
    Ok(AttackGeometry {
        pt_rogue_dbm: pt,
        pr_reg_dbm: pr_reg,
        alpha_rogue_db: alpha,
        alpha_reg_db: alpha,
        params: pl.params(),
        frequency: Frequency::from_mhz(pl.f_mhz)?,
    })
}

fn range(a: RangeArgs) -> Result<()> {
    let g = geometry(a.pt, a.pr_reg, a.alpha, &a.path_loss)?;
    for w in g.warnings() {
        eprintln!("warning: {w}");
    }
    let d = analytic::max_attack_radius(&g)?;
    let area_km2 = analytic::controlled_area(d) / 1e6;
    if a.csv {
        println!("d_rogue_m,a_rogue_km2");
        println!("{d},{area_km2}");
    } else {
        println!("{:.0} m", d);
        println!("controlled area {area_km2:.4} km²");
    }
    Ok(())
}

fn power(a: PowerArgs) -> Result<()> {
    let g = geometry(0.0, a.pr_reg, a.alpha, &a.path_loss)?;
    let p = analytic::required_power(a.d, &g)?;
    println!("{p:.2} dBm");
    Ok(())
}

fn mush_ratio(a: MushArgs) -> Result<()> {
    let cf = analytic::area_fraction(a.alpha_rogue, a.alpha_reg, a.n)?;
    println!(
        "controlled_fraction={} mush_multiple={:.1}",
        round_sig(cf),
        analytic::mush_multiple(cf)
    );
    Ok(())
}

/// Trim representation noise such as 0.010000000000000002.
fn round_sig(x: f64) -> f64 {
    format!("{x:.12e}").parse().expect("formatted float parses")
}

fn linkbudget(a: LinkBudgetArgs) -> Result<()> {
    let cn = match (a.cn, a.mode) {
        (Some(cn), _) => cn,
        (None, Some(mode)) => ccpr::require(CcprKey::new(mode, a.channel, Source::M1))?.db(),
        (None, None) => anyhow::bail!("give either --cn or --mode"),
    };
    let lb = link_budget::LinkBudget::new(a.noise_figure, a.bandwidth, cn)?;
    if a.json {
        println!(
            "{}",
            json!({
                "noise_figure_db": lb.noise_figure_db,
                "bandwidth_hz": lb.bandwidth_hz,
                "required_cn_db": lb.required_cn_db,
                "noise_power_dbw": lb.noise_power_dbw,
                "min_input_dbm": lb.min_input_dbm,
            })
        );
    } else {
        println!("noise power      {:.2} dBW", lb.noise_power_dbw);
        println!("required C/N     {:.1} dB", lb.required_cn_db);
        println!("minimum input    {:.2} dBm", lb.min_input_dbm);
    }
    Ok(())
}

fn export_ccpr(a: ExportArgs) -> Result<()> {
    write_out(a.out.as_ref(), &ccpr::to_csv())
}

fn simulate(a: SimulateArgs) -> Result<()> {
    let mut cfg = Config::load(&a.config)?;
    cfg.apply(&Overrides {
        seed: a.seed,
        resolution_m: a.resolution,
        frequency_mhz: a.f_mhz,
        n: a.n,
        sigma_db: a.sigma,
        alpha_reg_db: a.alpha_reg,
        alpha_rogue_db: a.alpha_rogue,
        noise_figure_db: a.noise_figure,
        location_variability_pct: a.location_pct,
        shadowing: a.shadowing,
        max_cells: a.max_cells,
        raster: a.raster,
        raster_format: a.raster_format,
        stats: a.stats,
    });
    let run = config::run(&cfg, a.threads)?;
    println!("{}", run.stats.to_json());
    Ok(())
}

fn gap_filler(a: GapFillerArgs) -> Result<()> {
    let mut spec = GapFillerSpec::default();
    if let Some(v) = a.input_min {
        spec.input_min_dbm = v;
    }
    if let Some(v) = a.input_max {
        spec.input_max_dbm = v;
    }
    if let Some(m) = a.mode {
        spec.mode = m;
    }
    spec.validate()?;
    let threshold = match a.alpha {
        Some(v) => Threshold::Fixed(v),
        None => Threshold::CarrierToNoise,
    };
    let alpha = threshold.resolve(spec.mode)?;
    let input = GapFillerAttackInput {
        p_rbv_dbm: a.p_rbv,
        p_rav_dbm: a.p_rav,
        p_rba_dbm: a.p_rba,
    };
    let r = gapfiller::evaluate(&spec, &input, alpha);
    println!(
        "{}",
        json!({
            "verdict": r.verdict,
            "margin_db": r.margin_db,
            "combined_input_dbm": r.combined_input_dbm,
            "threshold_db": alpha,
        })
    );
    Ok(())
}

fn measure(a: MeasureArgs) -> Result<()> {
    let model = ReceiverModel {
        ccpr_rogue_db: a.true_ccpr,
        ccpr_regular_db: a.ccpr_regular.unwrap_or(a.true_ccpr),
        lock_acquire_ticks: a.acquire,
        hysteresis_db: a.hysteresis,
    };
    let mut cfg = MeasurementRun::new(
        a.p_fixed,
        a.p_start
            .unwrap_or(a.p_fixed + a.true_ccpr + a.hysteresis + 10.0),
    );
    cfg.step_db = a.step;
    cfg.dwell_ticks = a.dwell;
    cfg.settle_ticks = a.settle;
    let (summary, last) = measurement::run_repeated(&mut model.receiver(), &cfg, a.repeats)?;
    if let Some(p) = &a.trace {
        write_out(Some(p), &last.trace_csv())?;
    }
    println!("estimated CCPR   {} dB", round_sig(last.estimate_db));
    println!("mush width       {} dB", round_sig(last.mush_width_db));
    if a.repeats > 1 {
        println!(
            "over {} runs     min {} dB, median {} dB, max {} dB",
            summary.repeats,
            round_sig(summary.min_db),
            round_sig(summary.median_db),
            round_sig(summary.max_db)
        );
    }
    Ok(())
}

fn cir_classify(a: CirArgs) -> Result<()> {
    let policy = match (
        &a.original_label,
        &a.echo_label,
        a.original_delay,
        a.echo_delay,
    ) {
        (Some(o), Some(e), None, None) => AssignmentPolicy::LabelMatch {
            original: o.clone(),
            echo: e.clone(),
        },
        (None, None, Some(o), Some(e)) => AssignmentPolicy::DelayWindow {
            original_delay_us: o,
            echo_delay_us: e,
            window_us: a.window,
        },
        _ => anyhow::bail!(
            "give either --original-label and --echo-label, or --original-delay and --echo-delay"
        ),
    };
    let table =
        || -> Result<f64> { Ok(ccpr::require(CcprKey::new(a.mode, a.channel, Source::M1))?.db()) };
    let alpha_rogue = match a.alpha_rogue {
        Some(v) => v,
        None => table()?,
    };
    let alpha_reg = match a.alpha_reg {
        Some(v) => v,
        None => table()?,
    };
    let f = File::open(&a.input)
        .map_err(|e| RuntimeFailure(format!("cannot open {}: {e}", a.input.display())))?;
    let records = cir::read_ndjson(BufReader::new(f))
        .with_context(|| format!("reading {}", a.input.display()))?;
    let points = records
        .iter()
        .map(|r| cir::classify_record(r, &policy, alpha_rogue, alpha_reg))
        .collect::<cochannel_atlas::Result<Vec<_>>>()?;
    let text = serde_json::to_string_pretty(&cir::to_geojson(&points))? + "\n";
    write_out(a.out.as_ref(), &text)
}

fn run_reproduce(a: ReproduceArgs) -> Result<()> {
    let report = reproduce::run(a.ccpr_source)?;
    if a.json {
        println!("{}", serde_json::to_string_pretty(&report.to_json())?);
    } else {
        print!("{}", report.to_text());
    }
    if report.all_passed() {
        Ok(())
    } else {
        Err(Failed.into())
    }
}
