//! Command-line driver: loads a run configuration, dispatches one of the
//! analysis commands and emits a deterministic CSV/JSON table.
//!
//! Exit codes: 0 success, 2 violated invariant / failed certification,
//! 3 configuration or i/o problem.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use gapflow::config::{parse_exact, RunConfig, ScheduleConfig, VolumeConfig};
use gapflow::export::{format_int_vector, format_rat_vector, NumberFormat, OutFormat, Table, Value};
use gapflow::gap_engine::{
    cubic_k_interval, kprime_from_k, spacing_bound_check, spectrum, three_gap_check,
    three_gap_random_suite, ConvexRegion, GapSpectrum,
};
use gapflow::interval::RInt;
use gapflow::numberfield::NumberField;
use gapflow::partition::{
    predicted_proportions, region_partition, shift_vectors, volume, word_counts_dual,
    RegionContext, RegionExpression, VolumeMethod,
};
use gapflow::quasi::QuasiFlow;
use gapflow::rat::{self, Rat};
use gapflow::unit_flow::{
    label_set, proportions, ratio_stats, run_sweep, LabelMode, LabelSet, UnitSystem,
};
use gapflow::{Error, Result};

/// Default RNG seed of the scalar three-gap suite.
const DEFAULT_SUITE_SEED: u64 = 0x6761_7073;

#[derive(Parser)]
#[command(
    name = "gapflow",
    version,
    about = "Gap statistics of fractional parts of linear forms over algebraic number fields",
    after_help = "Exit codes: 0 success, 2 invariant violation, 3 configuration error."
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Run configuration (JSON with exact numbers as strings).
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Scale t as an exact integer/decimal/fraction; defaults to the last
    /// schedule entry.
    #[arg(long, global = true, value_name = "T")]
    t: Option<String>,

    /// Comma-separated exact values overriding the configured t schedule.
    #[arg(long, global = true, value_name = "T1,T2,...")]
    t_grid: Option<String>,

    /// Override the configured certified precision (bits).
    #[arg(long, global = true, value_name = "BITS")]
    precision_bits: Option<u32>,

    /// Use Monte Carlo volume estimation with this many samples (for
    /// threegap: the number of random ω in the suite).
    #[arg(long, global = true, value_name = "N")]
    samples: Option<usize>,

    /// Output file; stdout when absent.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Output format: csv or json.
    #[arg(long, global = true, value_name = "FMT", default_value = "csv")]
    format: String,

    /// Print floats in shortest round-trip form and rationals as exact
    /// fractions instead of five-decimal roundings.
    #[arg(long, global = true)]
    full_precision: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Lattice points, fractional parts and the exact gap spectrum at scale t.
    Spectrum,
    /// Scalar three-gap scan: D(t) ≤ 3 for the fractional parts of one ω.
    Threegap {
        /// Exact ω; when absent, a deterministic random suite runs instead.
        #[arg(long, value_name = "OMEGA")]
        omega: Option<String>,
        /// Largest scale to scan.
        #[arg(long, value_name = "T", default_value_t = 500)]
        t_max: i64,
        /// Seed for the random suite.
        #[arg(long, value_name = "SEED", default_value_t = DEFAULT_SUITE_SEED)]
        seed: u64,
    },
    /// Rate vector β solved from the unit log-embedding.
    Rates,
    /// Label alphabet 𝒮 of exact rescaled spacings over the schedule.
    Labels {
        /// Enumerate the certified theoretical box instead of collecting
        /// the empirical set.
        #[arg(long)]
        theoretical: bool,
        /// Point cap for the theoretical enumeration.
        #[arg(long, value_name = "N", default_value_t = 2_000_000)]
        cap: usize,
    },
    /// Flow decomposition: eigenvalues, rotation count k, angles θ, γ, α.
    Flow,
    /// Exact n(u₁(t)) against the prediction t·g₃ on the half-decade grid.
    Table6,
    /// Longitudinal statistics over the t schedule.
    Sweep,
    /// Observed label proportions against region-volume predictions at scale t.
    Proportions,
    /// Consecutive spacing-ratio statistics at scale t.
    Ratios,
    /// Word statistics of consecutive labels at scale t (sliding windows,
    /// cross-checked against the set formula).
    Words {
        /// Letters per word.
        #[arg(long, value_name = "L", default_value_t = 2)]
        len: usize,
    },
    /// Partition-cell volumes at scale t.
    Volumes,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // --help / --version are not errors.
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(cli: &Cli) -> Result<()> {
    let fmt = NumberFormat::new(cli.common.full_precision);
    let format: OutFormat = cli.common.format.parse()?;

    let table = match &cli.command {
        Cmd::Threegap { omega, t_max, seed } => {
            cmd_threegap(&cli.common, &fmt, omega.as_deref(), *t_max, *seed)?
        }
        cmd => {
            let ctx = Ctx::load(&cli.common)?;
            match cmd {
                Cmd::Spectrum => cmd_spectrum(&ctx, &fmt)?,
                Cmd::Rates => cmd_rates(&ctx, &fmt)?,
                Cmd::Labels { theoretical, cap } => cmd_labels(&ctx, &fmt, *theoretical, *cap)?,
                Cmd::Flow => cmd_flow(&ctx, &fmt)?,
                Cmd::Table6 => {
                    let (table, mismatch) = cmd_table6(&ctx, &fmt)?;
                    emit(&cli.common, &table, format, &fmt)?;
                    return match mismatch {
                        None => Ok(()),
                        Some(diff) => Err(Error::Invariant(format!(
                            "prediction does not round to the exact unit walk: {diff}"
                        ))),
                    };
                }
                Cmd::Sweep => cmd_sweep(&ctx, &fmt)?,
                Cmd::Proportions => cmd_proportions(&ctx, &fmt)?,
                Cmd::Ratios => cmd_ratios(&ctx, &fmt)?,
                Cmd::Words { len } => cmd_words(&ctx, *len)?,
                Cmd::Volumes => cmd_volumes(&ctx, &fmt)?,
                Cmd::Threegap { .. } => unreachable!("handled above"),
            }
        }
    };
    emit(&cli.common, &table, format, &fmt)
}

/// Writes a finished table to the selected sink.
fn emit(common: &Common, table: &Table, format: OutFormat, fmt: &NumberFormat) -> Result<()> {
    match &common.out {
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            table.write_to(&mut lock, format, fmt)?;
            lock.flush()
                .map_err(|e| Error::Io(format!("flushing stdout: {e}")))
        }
        Some(path) => {
            let mut file = fs::File::create(path)
                .map_err(|e| Error::Io(format!("creating {}: {e}", path.display())))?;
            table.write_to(&mut file, format, fmt)?;
            file.flush()
                .map_err(|e| Error::Io(format!("writing {}: {e}", path.display())))
        }
    }
}

/// Everything the field-based commands need, built once from the
/// configuration plus command-line overrides.
struct Ctx {
    field: NumberField,
    units: UnitSystem,
    region: ConvexRegion,
    omega_indices: Vec<usize>,
    schedule: Vec<Rat>,
    bits: u32,
    volume_method: VolumeMethod,
    kprime: Option<Rat>,
    t_flag: Option<String>,
}

impl Ctx {
    fn load(common: &Common) -> Result<Self> {
        let path = common.config.as_ref().ok_or_else(|| {
            Error::Config("this command needs --config PATH (see --help)".into())
        })?;
        let text = fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("reading {}: {e}", path.display())))?;
        let mut cfg = RunConfig::from_json(&text)?;

        if let Some(bits) = common.precision_bits {
            if bits < 32 {
                return Err(Error::Config(format!("precision must be ≥ 32 bits, got {bits}")));
            }
            cfg.precision_bits = bits;
        }
        if let Some(samples) = common.samples {
            cfg.volume = VolumeConfig::MonteCarlo { samples };
        }
        if let Some(grid) = &common.t_grid {
            cfg.schedule = ScheduleConfig::List {
                values: grid.split(',').map(|s| s.trim().to_string()).collect(),
            };
        }

        let field = cfg.build_field()?;
        let units = cfg.build_units(&field)?;
        let region = cfg.build_region()?;
        let omega_indices = cfg.omega_indices(&field)?;
        let schedule = cfg.schedule_values()?;
        Ok(Ctx {
            field,
            units,
            region,
            omega_indices,
            schedule,
            bits: cfg.precision_bits,
            volume_method: cfg.volume_method(),
            kprime: cfg.kprime()?,
            t_flag: common.t.clone(),
        })
    }

    /// The single scale a per-t command works at: `--t` when given,
    /// otherwise the last schedule entry.
    fn t(&self) -> Result<Rat> {
        match &self.t_flag {
            Some(s) => parse_exact(s),
            None => Ok(self.schedule.last().expect("schedule validated nonempty").clone()),
        }
    }

    fn spectrum_at(&self, t: &Rat) -> Result<GapSpectrum> {
        spectrum(&self.field, &self.omega_indices, &self.region, t)
    }

    fn labels_over_schedule(&self) -> Result<LabelSet> {
        label_set(
            &self.field,
            &self.units,
            &self.omega_indices,
            &self.region,
            &self.schedule,
            &LabelMode::Empirical,
        )
    }

    /// K′ enclosure: the configured value when present, else the built-in
    /// totally-real-cubic recipe.
    fn kprime_interval(&self) -> Result<RInt> {
        match &self.kprime {
            Some(k) => Ok(RInt::point(k.clone())),
            None => kprime_from_k(&cubic_k_interval(&self.field, self.bits)?),
        }
    }
}

fn cmd_spectrum(ctx: &Ctx, fmt: &NumberFormat) -> Result<Table> {
    let t = ctx.t()?;
    let spec = ctx.spectrum_at(&t)?;

    let mut table = Table::new("spectrum", &["i", "m0", "m", "frac", "gap_class"]);
    table.note(format!("t = {t}"));
    table.note(format!("points |M(t)| = {}", spec.count()));
    table.note(format!("distinct spacings D(t) = {}", spec.d_t()));
    for (j, class) in spec.distinct().iter().enumerate() {
        table.note(format!(
            "gap_class {j}: delta = {} = {} x{}",
            format_int_vector(&class.coords),
            fmt.f64(class.value),
            class.count
        ));
    }
    table.note("frac = {m·ω}; gap_class indexes the spacing to the next point (empty on the last row)");

    let class_of = spacing_class_index(&spec);
    for i in 0..spec.count() {
        let class: Value = if i + 1 < spec.count() {
            (class_of[i] as i64).into()
        } else {
            "".into()
        };
        table.push_row(vec![
            (i as i64).into(),
            spec.integer_part(i).into(),
            format_int_vector(spec.lattice_vector(i)).into(),
            spec.values()[i].into(),
            class,
        ])?;
    }
    Ok(table)
}

/// Renders a scale as a plain integer cell when it is one.
fn t_cell(t: &Rat) -> Value {
    if t.is_integer() {
        if let Ok(n) = rat::floor_i64(t) {
            return n.into();
        }
    }
    Value::Exact(t.clone())
}

/// Maps each spacing index to its class in `spec.distinct()` order.
fn spacing_class_index(spec: &GapSpectrum) -> Vec<usize> {
    let by_coords: BTreeMap<Vec<i64>, usize> = spec
        .distinct()
        .iter()
        .enumerate()
        .map(|(j, c)| (c.coords.clone(), j))
        .collect();
    (0..spec.spacing_count())
        .map(|i| by_coords[&spec.spacing_coords(i)])
        .collect()
}

fn cmd_threegap(
    common: &Common,
    fmt: &NumberFormat,
    omega: Option<&str>,
    t_max: i64,
    seed: u64,
) -> Result<Table> {
    match omega {
        Some(text) => {
            let omega = parse_exact(text)?;
            let report = three_gap_check(&omega, t_max)?;
            let mut table = Table::new("threegap", &["t", "d_t"]);
            table.note(format!("omega = {omega}"));
            table.note(format!("max D(t) = {} over t ≤ {t_max}", report.max_distinct));
            table.note(format!("violations (D > 3): {}", report.violations.len()));
            for (t, d) in &report.rows {
                table.push_row(vec![(*t).into(), (*d as i64).into()])?;
            }
            Ok(table)
        }
        None => {
            let samples = common.samples.unwrap_or(100);
            let suite = three_gap_random_suite(samples, t_max, seed)?;
            let mut table = Table::new("threegap-suite", &["sample", "omega", "max_d"]);
            table.note(format!("samples = {samples}, t_max = {t_max}, seed = {seed}"));
            table.note(format!("max D(t) over the suite = {}", suite.max_distinct));
            table.note(format!("violations (D > 3): {}", suite.violations.len()));
            for (i, (omega, max_d)) in suite.per_sample.iter().enumerate() {
                table.push_row(vec![
                    (i as i64).into(),
                    fmt.f64(*omega).into(),
                    (*max_d as i64).into(),
                ])?;
            }
            Ok(table)
        }
    }
}

fn cmd_rates(ctx: &Ctx, fmt: &NumberFormat) -> Result<Table> {
    let beta = ctx.units.beta(&ctx.field, ctx.bits)?;
    let mut table = Table::new("rates", &["j", "beta", "enclosure_width"]);
    table.note(format!(
        "rates β solve A·β = (−d, 1, …, 1) over the unit log-embedding; {} bits",
        ctx.bits
    ));
    for (j, b) in beta.iter().enumerate() {
        table.push_row(vec![
            (j as i64).into(),
            fmt.f64(b.mid_f64()).into(),
            format!("{:.2e}", rat::to_f64(&b.width())).into(),
        ])?;
    }
    Ok(table)
}

fn cmd_labels(ctx: &Ctx, fmt: &NumberFormat, theoretical: bool, cap: usize) -> Result<Table> {
    let labels = if theoretical {
        let kprime = ctx.kprime_interval()?;
        label_set(
            &ctx.field,
            &ctx.units,
            &ctx.omega_indices,
            &ctx.region,
            &ctx.schedule,
            &LabelMode::TheoreticalBox { kprime, cap },
        )?
    } else {
        ctx.labels_over_schedule()?
    };

    let mut table = Table::new("labels", &["j", "coords", "sigma1"]);
    table.note(format!(
        "mode = {}",
        if theoretical { "theoretical-box" } else { "empirical" }
    ));
    table.note(format!(
        "schedule = {} values in [{}, {}]",
        ctx.schedule.len(),
        ctx.schedule[0],
        ctx.schedule[ctx.schedule.len() - 1]
    ));
    table.note(format!("labels |S| = {}", labels.len()));
    for (j, elem) in labels.elements().iter().enumerate() {
        let s1 = ctx.field.sigma1(elem, ctx.bits)?;
        table.push_row(vec![
            (j as i64).into(),
            format_rat_vector(elem.coords()).into(),
            fmt.f64(s1.mid_f64()).into(),
        ])?;
    }
    Ok(table)
}

fn cmd_flow(ctx: &Ctx, fmt: &NumberFormat) -> Result<Table> {
    let flow = QuasiFlow::new(&ctx.field, &ctx.units)?;
    let mut table = Table::new("flow", &["i", "eigenvalue", "kind", "theta"]);
    table.note("eigenvalues of L − I on the invariant embedding lines".to_string());
    table.note(format!("k = {} rotational mode(s)", flow.k()));
    table.note(format!("gamma = {}", fmt.f64(flow.gamma())));
    table.note(format!("alpha = {}", fmt.f64(flow.alpha())));
    let slots = flow.rotation_slots();
    for (i, ev) in flow.eigenvalues().iter().enumerate() {
        let (kind, theta): (&str, Value) = match slots.iter().position(|&s| s == i) {
            Some(pos) => ("rotation", flow.theta()[pos].into()),
            None => ("decay", "".into()),
        };
        table.push_row(vec![(i as i64).into(), (*ev).into(), kind.into(), theta])?;
    }
    Ok(table)
}

/// Builds the table and, separately, a description of any rows where the
/// prediction fails to round to the exact integer vector.
fn cmd_table6(ctx: &Ctx, fmt: &NumberFormat) -> Result<(Table, Option<String>)> {
    let flow = QuasiFlow::new(&ctx.field, &ctx.units)?;
    let grid = match ctx.t_flag.is_some() {
        true => vec![ctx.t()?],
        false => half_decade_grid()?,
    };

    let n = ctx.field.degree();
    let mut columns: Vec<String> = vec!["i".into(), "t".into()];
    for j in 0..n {
        columns.push(format!("n{j}"));
    }
    for j in 0..n {
        columns.push(format!("tg3_{j}"));
    }
    columns.push("max_err".into());
    let cols: Vec<&str> = columns.iter().map(String::as_str).collect();

    let mut table = Table::new("table6", &cols);
    table.note("exact unit walk n(u₁(t)) against the prediction t·g₃(θ log t, {β log t})".to_string());
    table.note("grid: t = ⌊10^{i/2}⌋ unless --t is given".to_string());

    let mut mismatches = Vec::new();
    for (i, t) in grid.iter().enumerate() {
        let row = flow.predict(&ctx.field, &ctx.units, t)?;
        let exact = row.exact_int_coords().ok_or_else(|| {
            Error::Invariant(format!("unit walk at t = {t} has non-integer coordinates"))
        })?;
        let mut cells: Vec<Value> = vec![((i + 1) as i64).into(), t_cell(t)];
        for &c in &exact {
            cells.push(c.into());
        }
        for &g in &row.t_g3 {
            cells.push(g.into());
        }
        cells.push(row.max_error.into());
        table.push_row(cells)?;

        for (j, (&nj, &gj)) in exact.iter().zip(&row.t_g3).enumerate() {
            if gj.round() as i64 != nj {
                mismatches.push(format!(
                    "t = {t}, coordinate {j}: n = {nj}, t·g₃ = {}",
                    fmt.f64(gj)
                ));
            }
        }
    }
    let mismatch = if mismatches.is_empty() {
        None
    } else {
        Some(mismatches.join("; "))
    };
    Ok((table, mismatch))
}

/// `t = ⌊10^{i/2}⌋ for i = 1..6`.
fn half_decade_grid() -> Result<Vec<Rat>> {
    ScheduleConfig::Log { base: 10, from: 1, to: 6, den: 2 }.values()
}

fn cmd_sweep(ctx: &Ctx, fmt: &NumberFormat) -> Result<Table> {
    let sweep = run_sweep(
        &ctx.field,
        &ctx.units,
        &ctx.omega_indices,
        &ctx.region,
        &ctx.schedule,
    )?;
    let flow = QuasiFlow::new(&ctx.field, &ctx.units)?;
    let kprime = ctx.kprime_interval().ok();

    let mut columns: Vec<String> = vec![
        "t".into(),
        "points".into(),
        "d_t".into(),
        "new_labels".into(),
        "marginal".into(),
        "pred_err".into(),
        "max_gap_scaled".into(),
    ];
    for j in 0..sweep.labels.len() {
        columns.push(format!("p{j}"));
    }
    let cols: Vec<&str> = columns.iter().map(String::as_str).collect();

    let mut table = Table::new("sweep", &cols);
    table.note(format!("labels |S| = {} accumulated over the schedule", sweep.labels.len()));
    table.note(match &sweep.stable_after {
        Some(t) => format!("last new label at t = {t}"),
        None => "no labels introduced (degenerate schedule)".to_string(),
    });
    table.note("pred_err = max_i |n_i(u₁(t)) − t·g₃_i|".to_string());
    table.note(match &kprime {
        Some(k) => format!(
            "max_gap_scaled = certified max Δ·t^d; bound K' = {}",
            fmt.f64(rat::to_f64(k.lo()))
        ),
        None => "max_gap_scaled = certified max Δ·t^d (no K' available)".to_string(),
    });
    table.note("p_j = exact proportion of label j (see the labels command)".to_string());

    for row in &sweep.rows {
        let pred = flow.predict(&ctx.field, &ctx.units, &row.t)?;
        let spec = ctx.spectrum_at(&row.t)?;
        let scaled = match &kprime {
            Some(k) => spacing_bound_check(&ctx.field, &spec, k)?.max_scaled,
            None => f64::NAN,
        };
        let mut cells: Vec<Value> = vec![
            t_cell(&row.t),
            (row.point_count as i64).into(),
            (row.distinct_count as i64).into(),
            (row.new_labels as i64).into(),
            if row.marginal { "yes" } else { "" }.into(),
            pred.max_error.into(),
            scaled.into(),
        ];
        for p in &row.proportions {
            cells.push(Value::Exact(p.clone()));
        }
        table.push_row(cells)?;
    }
    Ok(table)
}

fn cmd_proportions(ctx: &Ctx, fmt: &NumberFormat) -> Result<Table> {
    let t = ctx.t()?;
    let labels = ctx.labels_over_schedule()?;
    let spec = ctx.spectrum_at(&t)?;
    let u1 = ctx.units.unit_at(&ctx.field, &t)?;
    let observed = proportions(&ctx.field, &spec, &labels, &u1.element)?;

    let shifts = shift_vectors(&ctx.field, &labels, &u1.element, &t)?;
    let v_norm = shifts.normalized(&ctx.omega_indices)?;
    let rctx = RegionContext::new(&ctx.field, &ctx.omega_indices, &ctx.region)?;
    let predicted = predicted_proportions(&rctx, &v_norm, ctx.volume_method)?;

    let mut table = Table::new(
        "proportions",
        &["j", "label", "count", "observed", "predicted", "pred_error", "abs_diff"],
    );
    table.note(format!("t = {t}, windows = {}", observed.sample_size));
    table.note(format!(
        "region volume = {} ± {} ({})",
        fmt.f64(predicted.region_volume),
        fmt.f64(predicted.region_error),
        predicted.method
    ));
    table.note(format!("predicted total = {}", fmt.f64(predicted.total)));
    for (j, elem) in labels.elements().iter().enumerate() {
        let obs = rat::to_f64(&observed.frequencies[j]);
        table.push_row(vec![
            (j as i64).into(),
            format_rat_vector(elem.coords()).into(),
            (observed.counts[j] as i64).into(),
            Value::Exact(observed.frequencies[j].clone()),
            predicted.values[j].into(),
            predicted.errors[j].into(),
            (obs - predicted.values[j]).abs().into(),
        ])?;
    }
    Ok(table)
}

fn cmd_ratios(ctx: &Ctx, fmt: &NumberFormat) -> Result<Table> {
    let t = ctx.t()?;
    let spec = ctx.spectrum_at(&t)?;
    let stats = ratio_stats(&ctx.field, &spec)?;

    let mut table = Table::new("ratios", &["i", "ratio", "sigma1", "count", "frequency"]);
    table.note(format!("t = {t}, consecutive pairs = {}", stats.sample_size));
    table.note(format!("distinct ratios = {}", stats.elements.len()));
    for (i, elem) in stats.elements.iter().enumerate() {
        let s1 = ctx.field.sigma1(elem, ctx.bits)?;
        table.push_row(vec![
            (i as i64).into(),
            format_rat_vector(elem.coords()).into(),
            fmt.f64(s1.mid_f64()).into(),
            (stats.counts[i] as i64).into(),
            Value::Exact(stats.frequencies[i].clone()),
        ])?;
    }
    Ok(table)
}

fn cmd_words(ctx: &Ctx, len: usize) -> Result<Table> {
    let t = ctx.t()?;
    let labels = ctx.labels_over_schedule()?;
    let spec = ctx.spectrum_at(&t)?;
    let u1 = ctx.units.unit_at(&ctx.field, &t)?;
    let counts = word_counts_dual(&ctx.field, &spec, &labels, &u1.element, len)?;

    let mut table = Table::new("words", &["word", "count", "frequency"]);
    table.note(format!("t = {t}, letters per word = {}", counts.len));
    table.note(format!("windows = {}", counts.window_total));
    table.note("counts verified against the set-formula route".to_string());
    for (word, count) in &counts.rows {
        let ids: Vec<i64> = word.iter().map(|&j| j as i64).collect();
        table.push_row(vec![
            format_int_vector(&ids).into(),
            (*count as i64).into(),
            Value::Exact(rat::ratio(*count as i64, counts.window_total as i64)),
        ])?;
    }
    Ok(table)
}

fn cmd_volumes(ctx: &Ctx, fmt: &NumberFormat) -> Result<Table> {
    let t = ctx.t()?;
    let labels = ctx.labels_over_schedule()?;
    let u1 = ctx.units.unit_at(&ctx.field, &t)?;
    let shifts = shift_vectors(&ctx.field, &labels, &u1.element, &t)?;
    let v_norm = shifts.normalized(&ctx.omega_indices)?;
    let rctx = RegionContext::new(&ctx.field, &ctx.omega_indices, &ctx.region)?;

    let dim = rctx.dim();
    let base = volume(&rctx, &RegionExpression::base(dim), ctx.volume_method)?;

    let mut table = Table::new("volumes", &["j", "label", "volume", "error", "share"]);
    table.note(format!("t = {t}, method = {}", base.method));
    table.note(format!(
        "base region volume = {} ± {}",
        fmt.f64(base.value),
        fmt.f64(base.error)
    ));
    for (j, expr) in region_partition(dim, &v_norm).iter().enumerate() {
        let vj = volume(&rctx, expr, ctx.volume_method)?;
        table.push_row(vec![
            (j as i64).into(),
            format_rat_vector(labels.element(j).coords()).into(),
            vj.value.into(),
            vj.error.into(),
            (vj.value / base.value).into(),
        ])?;
    }
    Ok(table)
}
