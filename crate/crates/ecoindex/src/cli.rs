//! The `ecoindex` command line: validate, speed, acceleration, nth-year and
//! distribution commands over startup/round files plus a JSON configuration.
//!
//! Exit codes: 0 success, 1 usage/config error, 2 data error under
//! `--strict` (or nothing computable), 3 I/O error.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use chrono::Datelike;
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::distribution::{pairwise_pyramid, stage_distribution, StageDistribution};
use crate::domain::{DomainError, IndicatorSeries};
use crate::indicators::{
    cohort_acceleration, ecosystem_acceleration, ecosystem_speed, nth_year_speed, AccelMode,
    Cohort, DayZeroPolicy, QuantileSpec,
};
use crate::ingest::{
    load_rounds, load_startups, AppConfig, Dataset, FileFormat, IngestError, RoundLoad,
    StartupLoad,
};
use crate::output::{self, ValidationReport};
use crate::ppp::{ppp_adjust_series, PppTable};
use crate::svg::{line_chart, pyramid_chart, ChartLabels, ChartSeries};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(String),
    Io(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Data(_) => EXIT_DATA,
            CliError::Io(_) => EXIT_IO,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Data(m) | CliError::Io(m) => m,
        }
    }
}

impl From<IngestError> for CliError {
    fn from(err: IngestError) -> CliError {
        match err {
            IngestError::Io { .. } => CliError::Io(err.to_string()),
            IngestError::BadFile { .. } | IngestError::Config(_) => {
                CliError::Usage(err.to_string())
            }
        }
    }
}

#[derive(Parser)]
#[command(
    name = "ecoindex",
    version,
    about = "Entrepreneurial-ecosystem indicators from startup funding data"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Load and validate inputs, reporting record and error counts
    Validate(ValidateArgs),
    /// Median fundraising speed per 6-month bin of startup age
    Speed(SpeedArgs),
    /// Acceleration between founding cohorts (or per startup)
    Acceleration(AccelerationArgs),
    /// Speed of year-y startups during the n-th year of their life
    NthYear(NthYearArgs),
    /// Funding-stage distribution tables and pyramid comparisons
    Distribution(DistributionArgs),
}

#[derive(Args)]
struct InputArgs {
    /// Startups file (CSV or JSON, recognized by extension)
    #[arg(long)]
    startups: PathBuf,
    /// Funding rounds file (CSV or JSON, recognized by extension)
    #[arg(long)]
    rounds: PathBuf,
    /// Configuration JSON: ecosystems, PPP divisors, stage map
    #[arg(long, env = "ECOINDEX_CONFIG")]
    config: PathBuf,
    /// Restrict to these ecosystems (repeatable; default: all configured)
    #[arg(long = "ecosystem")]
    ecosystems: Vec<String>,
    /// Treat any rejected input record as fatal
    #[arg(long)]
    strict: bool,
    /// Founding-day rounds: evaluate at day 1 (clamp) or skip (drop)
    #[arg(long, value_enum, default_value_t = DayZeroArg::Clamp)]
    day_zero: DayZeroArg,
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
    /// Output path (default: stdout)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ValidateArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, value_enum, default_value_t = ReportFormatArg::Text)]
    format: ReportFormatArg,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SpeedArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    output: OutputArgs,
    /// Keep startups founded from this year on
    #[arg(long)]
    from_year: Option<i32>,
    /// Keep startups founded up to this year
    #[arg(long)]
    to_year: Option<i32>,
    /// Quantile of the per-bin speed distribution (0.5 = median)
    #[arg(long, default_value_t = 0.5)]
    quantile: f64,
    /// Cap on startup age, in years
    #[arg(long, default_value_t = 5.0)]
    max_years: f64,
    /// Divide by each ecosystem's engineer cost (engineer-years/year)
    #[arg(long)]
    ppp: bool,
}

#[derive(Args)]
struct AccelerationArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    output: OutputArgs,
    #[arg(long)]
    from_year: Option<i32>,
    #[arg(long)]
    to_year: Option<i32>,
    #[arg(long, default_value_t = 0.5)]
    quantile: f64,
    #[arg(long, default_value_t = 5.0)]
    max_years: f64,
    /// Founding cohorts compared in cohort mode, as Y1-Y2,Y3-Y4
    #[arg(long, default_value = "2010-2012,2014-2016")]
    cohorts: String,
    #[arg(long, value_enum, default_value_t = ModeArg::Cohort)]
    mode: ModeArg,
    /// With --format svg: plot the two cohort speed curves instead of the
    /// acceleration series
    #[arg(long)]
    overlay: bool,
}

#[derive(Args)]
struct NthYearArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    output: OutputArgs,
    /// Founding years considered (defaults to the dataset's span)
    #[arg(long)]
    from_year: Option<i32>,
    #[arg(long)]
    to_year: Option<i32>,
    #[arg(long, default_value_t = 0.5)]
    quantile: f64,
    /// Year-of-life range, e.g. 1..4 or a single value
    #[arg(long, default_value = "1..4")]
    n: String,
    #[arg(long)]
    ppp: bool,
}

#[derive(Args)]
struct DistributionArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    output: OutputArgs,
    /// Announcement-year window start (defaults to the dataset's span)
    #[arg(long)]
    from_year: Option<i32>,
    #[arg(long)]
    to_year: Option<i32>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DayZeroArg {
    Clamp,
    Drop,
}

impl From<DayZeroArg> for DayZeroPolicy {
    fn from(arg: DayZeroArg) -> DayZeroPolicy {
        match arg {
            DayZeroArg::Clamp => DayZeroPolicy::Clamp,
            DayZeroArg::Drop => DayZeroPolicy::Drop,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
    Svg,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReportFormatArg {
    Text,
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Cohort,
    #[value(name = "per-startup")]
    PerStartup,
}

/// Parses argv and runs the selected command, returning the process exit
/// code. Errors and warnings go to stderr; data goes to stdout or `--out`.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = err.print();
            return code;
        }
    };
    let result = match cli.command {
        Command::Validate(args) => cmd_validate(args),
        Command::Speed(args) => cmd_speed(args),
        Command::Acceleration(args) => cmd_acceleration(args),
        Command::NthYear(args) => cmd_nth_year(args),
        Command::Distribution(args) => cmd_distribution(args),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(err) => {
            eprintln!("error: {}", err.message());
            err.code()
        }
    }
}

struct LoadedInputs {
    config: AppConfig,
    startup_load: StartupLoad,
    round_load: RoundLoad,
    dataset: Dataset,
    /// Requested ecosystems in configuration order.
    ecosystem_order: Vec<String>,
    policy: DayZeroPolicy,
}

fn require_file(path: &Path) -> Result<(), CliError> {
    if path.is_file() {
        Ok(())
    } else {
        Err(CliError::Io(format!(
            "no such file: {}",
            path.display()
        )))
    }
}

fn load_inputs(input: &InputArgs) -> Result<LoadedInputs, CliError> {
    require_file(&input.config)?;
    require_file(&input.startups)?;
    require_file(&input.rounds)?;

    let config = AppConfig::load(&input.config)?;
    let startup_load = load_startups(
        &input.startups,
        FileFormat::from_path(&input.startups),
        &config.ecosystems,
    )?;
    for id in &startup_load.multi_match {
        eprintln!(
            "warning: startup {id} matches more than one ecosystem; using the first match"
        );
    }
    let round_load = load_rounds(
        &input.rounds,
        FileFormat::from_path(&input.rounds),
        &startup_load,
        &config.stage_map,
    )?;
    if input.strict {
        let total_errors = startup_load.errors.len() + round_load.errors.len();
        if total_errors > 0 {
            for err in startup_load.errors.iter().chain(&round_load.errors) {
                eprintln!("error: {err}");
            }
            return Err(CliError::Data(format!(
                "{total_errors} record error(s) with --strict"
            )));
        }
    }

    let configured: Vec<String> = config.ecosystems.iter().map(|e| e.name.clone()).collect();
    let ecosystem_order = if input.ecosystems.is_empty() {
        configured
    } else {
        for name in &input.ecosystems {
            if !configured.contains(name) {
                return Err(CliError::Usage(format!(
                    "ecosystem {name:?} is not configured"
                )));
            }
        }
        configured
            .into_iter()
            .filter(|name| input.ecosystems.contains(name))
            .collect()
    };

    let policy = input.day_zero.into();
    let dataset = Dataset::assemble(startup_load.clone(), round_load.clone());
    Ok(LoadedInputs {
        config,
        startup_load,
        round_load,
        dataset,
        ecosystem_order,
        policy,
    })
}

fn write_output(text: &str, out: &Option<PathBuf>) -> Result<(), CliError> {
    match out {
        None => {
            print!("{text}");
            Ok(())
        }
        Some(path) => fs::write(path, text)
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display()))),
    }
}

fn parse_quantile(q: f64) -> Result<QuantileSpec, CliError> {
    QuantileSpec::new(q).map_err(|e| CliError::Usage(e.to_string()))
}

fn parse_year_filter(
    from_year: Option<i32>,
    to_year: Option<i32>,
) -> Result<Option<(i32, i32)>, CliError> {
    let range = match (from_year, to_year) {
        (None, None) => return Ok(None),
        (from, to) => (from.unwrap_or(i32::MIN), to.unwrap_or(i32::MAX)),
    };
    if range.0 > range.1 {
        return Err(CliError::Usage(format!(
            "--from-year {} exceeds --to-year {}",
            range.0, range.1
        )));
    }
    Ok(Some(range))
}

fn apply_year_filter(dataset: &Dataset, range: Option<(i32, i32)>) -> Dataset {
    match range {
        None => dataset.clone(),
        Some((from, to)) => dataset.filter_founded(from, to),
    }
}

fn parse_cohorts(raw: &str) -> Result<(Cohort, Cohort), CliError> {
    let parse_one = |piece: &str| -> Result<Cohort, CliError> {
        let (a, b) = piece.split_once('-').ok_or_else(|| {
            CliError::Usage(format!("bad cohort {piece:?}, expected Y1-Y2"))
        })?;
        let from: i32 = a
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("bad cohort year {a:?}")))?;
        let to: i32 = b
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("bad cohort year {b:?}")))?;
        Cohort::new(from, to).map_err(|e| CliError::Usage(e.to_string()))
    };
    let (early, late) = raw.split_once(',').ok_or_else(|| {
        CliError::Usage(format!("bad --cohorts {raw:?}, expected Y1-Y2,Y3-Y4"))
    })?;
    Ok((parse_one(early)?, parse_one(late)?))
}

/// Parses `N..M` (inclusive) or a single `N`; n must be >= 1.
fn parse_n_range(raw: &str) -> Result<Vec<u32>, CliError> {
    let bad = || CliError::Usage(format!("bad --n {raw:?}, expected N..M with N >= 1"));
    let (lo, hi) = match raw.split_once("..") {
        Some((a, b)) => (
            a.trim().parse::<u32>().map_err(|_| bad())?,
            b.trim().parse::<u32>().map_err(|_| bad())?,
        ),
        None => {
            let n = raw.trim().parse::<u32>().map_err(|_| bad())?;
            (n, n)
        }
    };
    if lo == 0 || lo > hi {
        return Err(bad());
    }
    Ok((lo..=hi).collect())
}

fn cmd_validate(args: ValidateArgs) -> Result<(), CliError> {
    let loaded = match load_inputs(&args.input) {
        Ok(loaded) => loaded,
        // --strict short-circuits in load_inputs; validate still wants the
        // full report first, so reload without strict and exit afterwards.
        Err(CliError::Data(_)) => {
            let relaxed = InputArgs {
                strict: false,
                startups: args.input.startups.clone(),
                rounds: args.input.rounds.clone(),
                config: args.input.config.clone(),
                ecosystems: args.input.ecosystems.clone(),
                day_zero: args.input.day_zero,
            };
            load_inputs(&relaxed)?
        }
        Err(other) => return Err(other),
    };

    let mut startups_per_eco: BTreeMap<&str, u64> = BTreeMap::new();
    let mut rounds_per_eco: BTreeMap<&str, u64> = BTreeMap::new();
    for startup in loaded.dataset.startups() {
        *startups_per_eco.entry(startup.ecosystem.as_str()).or_default() += 1;
        *rounds_per_eco.entry(startup.ecosystem.as_str()).or_default() +=
            loaded.dataset.rounds_of(&startup.id).len() as u64;
    }
    let all_names: Vec<String> = loaded
        .config
        .ecosystems
        .iter()
        .map(|e| e.name.clone())
        .collect();
    let report = ValidationReport::build(
        &loaded.startup_load,
        &loaded.round_load,
        &all_names,
        |name| rounds_per_eco.get(name).copied().unwrap_or(0),
        |name| startups_per_eco.get(name).copied().unwrap_or(0),
    );
    let text = match args.format {
        ReportFormatArg::Text => report.to_text(),
        ReportFormatArg::Csv => report.to_csv(),
        ReportFormatArg::Json => report.to_json(),
    };
    write_output(&text, &args.out)?;
    if args.input.strict && !report.ok {
        return Err(CliError::Data("input records were rejected".to_string()));
    }
    Ok(())
}

fn series_to_chart(series: &IndicatorSeries, name: &str, x_from_index: fn(i64) -> f64) -> ChartSeries {
    ChartSeries {
        name: name.to_string(),
        points: series
            .points
            .iter()
            .map(|p| (x_from_index(p.index), p.value))
            .collect(),
    }
}

fn bin_x(index: i64) -> f64 {
    index as f64 * 0.5
}

fn year_x(index: i64) -> f64 {
    index as f64
}

fn cmd_speed(args: SpeedArgs) -> Result<(), CliError> {
    let loaded = load_inputs(&args.input)?;
    let spec = parse_quantile(args.quantile)?;
    if !args.max_years.is_finite() || args.max_years <= 0.0 {
        return Err(CliError::Usage("--max-years must be positive".to_string()));
    }
    let filtered = apply_year_filter(&loaded.dataset, parse_year_filter(args.from_year, args.to_year)?);
    let table = PppTable::from_configs(&loaded.config.ecosystems);

    let mut series: Vec<IndicatorSeries> = Vec::new();
    for name in &loaded.ecosystem_order {
        match ecosystem_speed(&filtered, name, spec, args.max_years, loaded.policy) {
            Ok(s) => {
                let s = if args.ppp {
                    ppp_adjust_series(&s, &table).map_err(|e| CliError::Usage(e.to_string()))?
                } else {
                    s
                };
                series.push(s);
            }
            Err(DomainError::EmptySample) => {
                eprintln!("warning: speed: {name}: empty sample, skipped");
            }
            Err(e) => return Err(CliError::Data(e.to_string())),
        }
    }
    if series.is_empty() {
        return Err(CliError::Data(
            "no ecosystem produced a speed series".to_string(),
        ));
    }
    let text = match args.output.format {
        FormatArg::Csv => output::speed_csv(&series),
        FormatArg::Json => output::speed_json(&series),
        FormatArg::Svg => {
            let unit = series[0].unit.clone();
            let charts: Vec<ChartSeries> = series
                .iter()
                .map(|s| series_to_chart(s, &s.ecosystem, bin_x))
                .collect();
            line_chart(
                &ChartLabels {
                    title: format!("Fundraising speed (q={})", args.quantile),
                    x_label: "years since founding".to_string(),
                    y_label: unit,
                },
                &charts,
            )
        }
    };
    write_output(&text, &args.output.out)
}

fn cmd_acceleration(args: AccelerationArgs) -> Result<(), CliError> {
    let loaded = load_inputs(&args.input)?;
    let spec = parse_quantile(args.quantile)?;
    let filtered = apply_year_filter(&loaded.dataset, parse_year_filter(args.from_year, args.to_year)?);
    let (early, late) = parse_cohorts(&args.cohorts)?;

    let mut series: Vec<(String, IndicatorSeries)> = Vec::new();
    for name in &loaded.ecosystem_order {
        match args.mode {
            ModeArg::Cohort => {
                let absolute = cohort_acceleration(
                    &filtered,
                    name,
                    early,
                    late,
                    spec,
                    AccelMode::Absolute,
                    args.max_years,
                    loaded.policy,
                );
                let percent = cohort_acceleration(
                    &filtered,
                    name,
                    early,
                    late,
                    spec,
                    AccelMode::Percent,
                    args.max_years,
                    loaded.policy,
                );
                match (absolute, percent) {
                    (Ok(abs), Ok(pct)) => {
                        for bin in &pct.zero_baseline_bins {
                            eprintln!(
                                "warning: acceleration: {name}: bin {bin} omitted in percent \
                                 mode (early-cohort value is 0)"
                            );
                        }
                        series.push(("absolute".to_string(), abs.series));
                        series.push(("percent".to_string(), pct.series));
                    }
                    (Err(DomainError::EmptySample), _) | (_, Err(DomainError::EmptySample)) => {
                        eprintln!(
                            "warning: acceleration: {name}: a cohort has no observations, skipped"
                        );
                    }
                    (Err(e), _) | (_, Err(e)) => return Err(CliError::Usage(e.to_string())),
                }
            }
            ModeArg::PerStartup => {
                match ecosystem_acceleration(&filtered, name, spec, loaded.policy) {
                    Ok(s) => series.push(("per-startup".to_string(), s)),
                    Err(DomainError::EmptySample) => {
                        eprintln!("warning: acceleration: {name}: empty sample, skipped");
                    }
                    Err(e) => return Err(CliError::Data(e.to_string())),
                }
            }
        }
    }
    if series.is_empty() {
        return Err(CliError::Data(
            "no ecosystem produced an acceleration series".to_string(),
        ));
    }
    let text = match args.output.format {
        FormatArg::Csv => output::acceleration_csv(&series),
        FormatArg::Json => output::acceleration_json(&series),
        FormatArg::Svg if args.overlay && args.mode == ModeArg::Cohort => {
            // Fundraising-speed overlay of the two cohorts per ecosystem.
            let mut charts = Vec::new();
            for name in &loaded.ecosystem_order {
                for cohort in [early, late] {
                    let cohort_ds = filtered.filter_founded(cohort.from_year, cohort.to_year);
                    if let Ok(s) =
                        ecosystem_speed(&cohort_ds, name, spec, args.max_years, loaded.policy)
                    {
                        charts.push(series_to_chart(
                            &s,
                            &format!("{name} {}", cohort.label()),
                            bin_x,
                        ));
                    }
                }
            }
            line_chart(
                &ChartLabels {
                    title: format!("Cohort speed overlay ({} vs {})", early.label(), late.label()),
                    x_label: "years since founding".to_string(),
                    y_label: "USD/year".to_string(),
                },
                &charts,
            )
        }
        FormatArg::Svg => {
            let shown: Vec<ChartSeries> = series
                .iter()
                .filter(|(mode, _)| mode != "percent")
                .map(|(_, s)| series_to_chart(s, &s.ecosystem, bin_x))
                .collect();
            line_chart(
                &ChartLabels {
                    title: match args.mode {
                        ModeArg::Cohort => format!(
                            "Acceleration, {} vs {} cohorts",
                            early.label(),
                            late.label()
                        ),
                        ModeArg::PerStartup => "Acceleration (per startup)".to_string(),
                    },
                    x_label: "years since founding".to_string(),
                    y_label: "USD million/year^2".to_string(),
                },
                &shown,
            )
        }
    };
    write_output(&text, &args.output.out)
}

fn cmd_nth_year(args: NthYearArgs) -> Result<(), CliError> {
    let loaded = load_inputs(&args.input)?;
    let spec = parse_quantile(args.quantile)?;
    let ns = parse_n_range(&args.n)?;
    let filter = parse_year_filter(args.from_year, args.to_year)?;
    let filtered = apply_year_filter(&loaded.dataset, filter);
    let table = PppTable::from_configs(&loaded.config.ecosystems);

    let years: Vec<i32> = match filter {
        Some((from, to)) if from > i32::MIN && to < i32::MAX => (from..=to).collect(),
        _ => {
            let mut years: Vec<i32> = filtered.startups().map(|s| s.founded_year()).collect();
            years.sort_unstable();
            years.dedup();
            years
        }
    };

    let mut series: Vec<(u32, IndicatorSeries)> = Vec::new();
    for name in &loaded.ecosystem_order {
        for &n in &ns {
            let mut points = Vec::new();
            for &year in &years {
                match nth_year_speed(&filtered, name, year, n, spec, loaded.policy) {
                    Ok((value, count)) => points.push(crate::domain::SeriesPoint {
                        index: year as i64,
                        label: year.to_string(),
                        value,
                        sample_count: count,
                    }),
                    Err(DomainError::EmptySample) => {} // cell absent, not zero
                    Err(e) => return Err(CliError::Data(e.to_string())),
                }
            }
            if points.is_empty() {
                eprintln!("warning: nth-year: {name}: no data for n={n}, skipped");
                continue;
            }
            let mut s = IndicatorSeries {
                ecosystem: name.clone(),
                indicator: crate::domain::Indicator::NthYearSpeed,
                unit: "USD/year".to_string(),
                points,
            };
            if args.ppp {
                s = ppp_adjust_series(&s, &table).map_err(|e| CliError::Usage(e.to_string()))?;
            }
            series.push((n, s));
        }
    }
    if series.is_empty() {
        return Err(CliError::Data(
            "no ecosystem produced an nth-year series".to_string(),
        ));
    }
    let text = match args.output.format {
        FormatArg::Csv => output::nth_year_csv(&series),
        FormatArg::Json => output::nth_year_json(&series),
        FormatArg::Svg => {
            let unit = series[0].1.unit.clone();
            let charts: Vec<ChartSeries> = series
                .iter()
                .map(|(n, s)| series_to_chart(s, &format!("{} n={n}", s.ecosystem), year_x))
                .collect();
            line_chart(
                &ChartLabels {
                    title: "nth-year fundraising speed".to_string(),
                    x_label: "founding year".to_string(),
                    y_label: unit,
                },
                &charts,
            )
        }
    };
    write_output(&text, &args.output.out)
}

fn announce_year_span(dataset: &Dataset) -> Option<(i32, i32)> {
    let mut span: Option<(i32, i32)> = None;
    for startup in dataset.startups() {
        for round in dataset.rounds_of(&startup.id) {
            let y = round.announced.year();
            span = Some(match span {
                None => (y, y),
                Some((lo, hi)) => (lo.min(y), hi.max(y)),
            });
        }
    }
    span
}

fn cmd_distribution(args: DistributionArgs) -> Result<(), CliError> {
    let loaded = load_inputs(&args.input)?;
    let period = match parse_year_filter(args.from_year, args.to_year)? {
        Some(range) => range,
        None => announce_year_span(&loaded.dataset)
            .ok_or_else(|| CliError::Data("dataset contains no rounds".to_string()))?,
    };

    let mut tables: Vec<StageDistribution> = Vec::new();
    for name in &loaded.ecosystem_order {
        match stage_distribution(&loaded.dataset, name, period.0, period.1) {
            Ok(t) => tables.push(t),
            Err(DomainError::EmptySample) => {
                eprintln!(
                    "warning: distribution: {name}: no rounds in {}..{}, skipped",
                    period.0, period.1
                );
            }
            Err(e) => return Err(CliError::Data(e.to_string())),
        }
    }
    if tables.is_empty() {
        return Err(CliError::Data(
            "no ecosystem produced a stage distribution".to_string(),
        ));
    }

    let pyramid_mode = loaded.ecosystem_order.len() == 2;
    if pyramid_mode && tables.len() != 2 {
        return Err(CliError::Data(
            "pyramid comparison needs both ecosystems to have rounds in the period".to_string(),
        ));
    }
    let text = match (args.output.format, pyramid_mode) {
        (FormatArg::Csv, false) => output::distribution_csv(&tables),
        (FormatArg::Json, false) => output::distribution_json(&tables, period),
        (FormatArg::Csv, true) => output::pyramid_csv(&pairwise_pyramid(&tables[0], &tables[1])),
        (FormatArg::Json, true) => {
            output::pyramid_json(&pairwise_pyramid(&tables[0], &tables[1]), period)
        }
        (FormatArg::Svg, true) => {
            let pyramid = pairwise_pyramid(&tables[0], &tables[1]);
            pyramid_chart(
                &format!(
                    "Stage distribution {}–{} ({} vs {})",
                    period.0, period.1, pyramid.left, pyramid.right
                ),
                &pyramid,
            )
        }
        (FormatArg::Svg, false) => {
            return Err(CliError::Usage(
                "svg distribution output requires exactly two ecosystems (pyramid mode)"
                    .to_string(),
            ))
        }
    };
    write_output(&text, &args.output.out)
}
