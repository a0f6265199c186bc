//! Fundraising-speed indicators: per-round speed observations, 6-month
//! binning, quantile aggregation per ecosystem, acceleration (per startup,
//! per ecosystem, and between founding cohorts), and nth-year speed.
//!
//! Conventions, applied uniformly:
//! - speed is cumulative known funding since creation divided by elapsed
//!   days, so the day of an observation includes any round announced on it;
//! - a 6-month bin is 182.625 days (365.25 / 2); an observation at day `d`
//!   falls in bin `floor(d / 182.625)`;
//! - founding-day rounds are undefined for speed (division by zero) and are
//!   clamped to day 1 by default, or dropped under [`DayZeroPolicy::Drop`];
//! - coincident same-day rounds of one startup are merged into a single
//!   round before speed evaluation.

use std::collections::BTreeMap;

use chrono::{Datelike, NaiveDate};

use crate::domain::{
    to_usd_per_year, DomainError, FundingRound, Indicator, IndicatorSeries, Money, SeriesPoint,
    SpeedObservation, Startup, DAYS_PER_YEAR,
};
use crate::ingest::Dataset;

/// 6-month bin width in days. Equal to 1461/8, which keeps bin assignment
/// exact in integer arithmetic.
pub const BIN_DAYS: f64 = 182.625;

/// A half-open 6-month age interval `[6k, 6(k+1))` months.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Bin {
    pub index: u32,
}

impl Bin {
    pub fn label(self) -> String {
        format!("[{},{}) months", 6 * self.index, 6 * (self.index + 1))
    }

    /// Bin start in years since founding (index × 0.5).
    pub fn start_years(self) -> f64 {
        self.index as f64 * 0.5
    }
}

/// Bin for an observation `t_days` after founding: floor(t / 182.625).
/// Computed as floor(8t / 1461) so the boundary is exact.
pub fn assign_bin(t_days: u32) -> Bin {
    Bin {
        index: (8 * t_days as u64 / 1461) as u32,
    }
}

/// An inclusive founding-year range.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cohort {
    pub from_year: i32,
    pub to_year: i32,
}

impl Cohort {
    pub fn new(from_year: i32, to_year: i32) -> Result<Cohort, DomainError> {
        if from_year > to_year {
            return Err(DomainError::InvalidCohorts(format!(
                "cohort years out of order: {from_year}-{to_year}"
            )));
        }
        Ok(Cohort { from_year, to_year })
    }

    pub fn midpoint(self) -> f64 {
        (self.from_year as f64 + self.to_year as f64) / 2.0
    }

    pub fn label(self) -> String {
        format!("{}-{}", self.from_year, self.to_year)
    }
}

/// Which quantile of the per-startup distribution an ecosystem indicator
/// reports. The median by default; 0.1 gives the first-decile variant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantileSpec {
    q: f64,
}

impl Default for QuantileSpec {
    fn default() -> Self {
        QuantileSpec { q: 0.5 }
    }
}

impl QuantileSpec {
    pub const MEDIAN: QuantileSpec = QuantileSpec { q: 0.5 };

    pub fn new(q: f64) -> Result<QuantileSpec, DomainError> {
        if q.is_finite() && 0.0 < q && q < 1.0 {
            Ok(QuantileSpec { q })
        } else {
            Err(DomainError::InvalidQuantile(q))
        }
    }

    pub fn q(self) -> f64 {
        self.q
    }
}

/// How to treat a round announced on the founding day, where speed is
/// undefined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DayZeroPolicy {
    /// Evaluate the observation at day 1.
    #[default]
    Clamp,
    /// Skip the observation (the amount still counts toward later cumulative
    /// funding).
    Drop,
}

/// Quantile of a non-empty sample by linear interpolation between order
/// statistics at rank `q·(n−1)` (zero-based). For q = 0.5 and even n this is
/// the mean of the two central order statistics.
pub fn quantile(values: &[f64], spec: QuantileSpec) -> Result<f64, DomainError> {
    if values.is_empty() {
        return Err(DomainError::EmptySample);
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let rank = spec.q * (sorted.len() - 1) as f64;
    let lo = rank.floor() as usize;
    let frac = rank - lo as f64;
    if frac == 0.0 || lo + 1 == sorted.len() {
        Ok(sorted[lo])
    } else {
        Ok(sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]))
    }
}

/// Total known funding raised through `t_days` (rounds with elapsed days
/// <= t_days; unknown-amount rounds contribute nothing).
pub fn cumulative_funding(founded: NaiveDate, rounds: &[FundingRound], t_days: u32) -> Money {
    let mut total = Money::ZERO;
    for round in rounds {
        if round.announced < founded {
            continue;
        }
        let elapsed = (round.announced - founded).num_days() as u64;
        if elapsed <= t_days as u64 {
            if let Some(amount) = round.amount_usd {
                total = total.checked_add(amount).expect("funding sum overflow");
            }
        }
    }
    total
}

/// Fundraising speed of one startup at `t_days`: cumulative funding divided
/// by elapsed days, in USD/day.
pub fn fundraising_speed(
    startup: &Startup,
    rounds: &[FundingRound],
    t_days: u32,
) -> Result<f64, DomainError> {
    if t_days == 0 {
        return Err(DomainError::SpeedAtCreation);
    }
    let total = cumulative_funding(startup.founded, rounds, t_days);
    Ok(total.to_f64_dollars() / t_days as f64)
}

/// Speed observations for one startup: one per distinct known-amount round
/// date, evaluated at that date, cumulative including the round itself.
fn observations_for(
    startup: &Startup,
    rounds: &[FundingRound],
    policy: DayZeroPolicy,
) -> Vec<SpeedObservation> {
    // Merge same-day rounds so acceleration never sees Δt = 0.
    let mut by_date: BTreeMap<NaiveDate, Money> = BTreeMap::new();
    for round in rounds {
        if let Some(amount) = round.amount_usd {
            let entry = by_date.entry(round.announced).or_insert(Money::ZERO);
            *entry = entry.checked_add(amount).expect("funding sum overflow");
        }
    }
    let mut observations = Vec::with_capacity(by_date.len());
    let mut cumulative = Money::ZERO;
    for (date, amount) in by_date {
        cumulative = cumulative.checked_add(amount).expect("funding sum overflow");
        if date < startup.founded {
            debug_assert!(false, "round before founding reached indicator stage");
            continue;
        }
        let elapsed = (date - startup.founded).num_days() as u32;
        let t_days = match (elapsed, policy) {
            (0, DayZeroPolicy::Clamp) => 1,
            (0, DayZeroPolicy::Drop) => continue,
            (t, _) => t,
        };
        observations.push(SpeedObservation {
            startup_id: startup.id.clone(),
            t_days,
            cumulative_usd: cumulative,
            speed_usd_per_day: cumulative.to_f64_dollars() / t_days as f64,
        });
    }
    observations
}

/// All speed observations for an ecosystem, ordered by startup id then date.
pub fn speed_observations(
    dataset: &Dataset,
    ecosystem: &str,
    policy: DayZeroPolicy,
) -> Vec<SpeedObservation> {
    dataset
        .startups_in(ecosystem)
        .flat_map(|s| observations_for(s, dataset.rounds_of(&s.id), policy))
        .collect()
}

fn binned_points(
    samples: BTreeMap<u32, Vec<f64>>,
    spec: QuantileSpec,
    scale: f64,
) -> Result<Vec<SeriesPoint>, DomainError> {
    let mut points = Vec::with_capacity(samples.len());
    for (index, values) in samples {
        let value = quantile(&values, spec)? * scale;
        points.push(SeriesPoint {
            index: index as i64,
            label: Bin { index }.label(),
            value,
            sample_count: values.len(),
        });
    }
    if points.is_empty() {
        return Err(DomainError::EmptySample);
    }
    Ok(points)
}

/// Ecosystem fundraising speed: per 6-month bin up to `max_years`, the
/// configured quantile of observation speeds in the bin, annualized to
/// USD/year.
pub fn ecosystem_speed(
    dataset: &Dataset,
    ecosystem: &str,
    spec: QuantileSpec,
    max_years: f64,
    policy: DayZeroPolicy,
) -> Result<IndicatorSeries, DomainError> {
    let bin_limit = (max_years * 2.0).ceil() as u32;
    let mut samples: BTreeMap<u32, Vec<f64>> = BTreeMap::new();
    for obs in speed_observations(dataset, ecosystem, policy) {
        let bin = assign_bin(obs.t_days);
        if bin.index < bin_limit {
            samples.entry(bin.index).or_default().push(obs.speed_usd_per_day);
        }
    }
    Ok(IndicatorSeries {
        ecosystem: ecosystem.to_string(),
        indicator: Indicator::Speed,
        unit: "USD/year".to_string(),
        points: binned_points(samples, spec, DAYS_PER_YEAR)?,
    })
}

/// Acceleration samples for one startup: for each consecutive pair of speed
/// observations with strictly increasing times, the speed change per day
/// (USD/day²), tagged with the later observation's age.
pub fn startup_acceleration(
    startup: &Startup,
    rounds: &[FundingRound],
    policy: DayZeroPolicy,
) -> Result<Vec<(u32, f64)>, DomainError> {
    let observations = observations_for(startup, rounds, policy);
    if observations.len() < 2 {
        return Err(DomainError::EmptySample);
    }
    let mut samples = Vec::with_capacity(observations.len() - 1);
    for pair in observations.windows(2) {
        let (prev, next) = (&pair[0], &pair[1]);
        if next.t_days > prev.t_days {
            let dv = next.speed_usd_per_day - prev.speed_usd_per_day;
            let dt = (next.t_days - prev.t_days) as f64;
            samples.push((next.t_days, dv / dt));
        }
    }
    if samples.is_empty() {
        return Err(DomainError::EmptySample);
    }
    Ok(samples)
}

/// Ecosystem acceleration: per-startup acceleration samples binned by the
/// later observation's bin, quantile per bin, reported in USD million/year².
pub fn ecosystem_acceleration(
    dataset: &Dataset,
    ecosystem: &str,
    spec: QuantileSpec,
    policy: DayZeroPolicy,
) -> Result<IndicatorSeries, DomainError> {
    let mut samples: BTreeMap<u32, Vec<f64>> = BTreeMap::new();
    for startup in dataset.startups_in(ecosystem) {
        let Ok(accels) = startup_acceleration(startup, dataset.rounds_of(&startup.id), policy)
        else {
            continue; // startups with < 2 usable rounds contribute nothing
        };
        for (t_days, accel) in accels {
            samples
                .entry(assign_bin(t_days).index)
                .or_default()
                .push(accel);
        }
    }
    // USD/day² → USD million/year².
    let scale = DAYS_PER_YEAR * DAYS_PER_YEAR / 1e6;
    Ok(IndicatorSeries {
        ecosystem: ecosystem.to_string(),
        indicator: Indicator::Acceleration,
        unit: "USD million/year^2".to_string(),
        points: binned_points(samples, spec, scale)?,
    })
}

/// Whether cohort acceleration is reported as a rate of change or as a
/// percentage of the early cohort's value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AccelMode {
    Absolute,
    Percent,
}

/// Cohort acceleration result. `zero_baseline_bins` lists bins omitted in
/// percent mode because the early cohort's value was zero there.
#[derive(Debug, Clone, PartialEq)]
pub struct CohortAcceleration {
    pub series: IndicatorSeries,
    pub zero_baseline_bins: Vec<u32>,
}

/// Acceleration between two founding cohorts: the difference of the cohorts'
/// speed curves over the spacing of the cohort midpoints (absolute mode,
/// USD million/year²), or the percentage change of the early curve.
///
/// Only bins present in both cohort series are emitted; a point's sample
/// count is the smaller of the two cohort bin counts.
#[allow(clippy::too_many_arguments)]
pub fn cohort_acceleration(
    dataset: &Dataset,
    ecosystem: &str,
    early: Cohort,
    late: Cohort,
    spec: QuantileSpec,
    mode: AccelMode,
    max_years: f64,
    policy: DayZeroPolicy,
) -> Result<CohortAcceleration, DomainError> {
    if early.to_year >= late.from_year {
        return Err(DomainError::InvalidCohorts(format!(
            "cohorts must be disjoint and ordered: {} vs {}",
            early.label(),
            late.label()
        )));
    }
    let early_series = ecosystem_speed(
        &dataset.filter_founded(early.from_year, early.to_year),
        ecosystem,
        spec,
        max_years,
        policy,
    )?;
    let late_series = ecosystem_speed(
        &dataset.filter_founded(late.from_year, late.to_year),
        ecosystem,
        spec,
        max_years,
        policy,
    )?;
    let years_apart = late.midpoint() - early.midpoint();

    let late_by_index: BTreeMap<i64, &SeriesPoint> =
        late_series.points.iter().map(|p| (p.index, p)).collect();
    let mut points = Vec::new();
    let mut zero_baseline_bins = Vec::new();
    for early_point in &early_series.points {
        let Some(late_point) = late_by_index.get(&early_point.index) else {
            continue;
        };
        let value = match mode {
            AccelMode::Absolute => {
                (late_point.value - early_point.value) / years_apart / 1e6
            }
            AccelMode::Percent => {
                if early_point.value == 0.0 {
                    zero_baseline_bins.push(early_point.index as u32);
                    continue;
                }
                100.0 * (late_point.value - early_point.value) / early_point.value
            }
        };
        points.push(SeriesPoint {
            index: early_point.index,
            label: early_point.label.clone(),
            value,
            sample_count: early_point.sample_count.min(late_point.sample_count),
        });
    }
    let unit = match mode {
        AccelMode::Absolute => "USD million/year^2",
        AccelMode::Percent => "percent",
    };
    Ok(CohortAcceleration {
        series: IndicatorSeries {
            ecosystem: ecosystem.to_string(),
            indicator: Indicator::Acceleration,
            unit: unit.to_string(),
            points,
        },
        zero_baseline_bins,
    })
}

/// Median (or configured quantile) speed of the startups founded in year `y`,
/// measured during the n-th year of their life: observations with age in
/// `[365(n−1), 365n)` days, each startup reduced to its last observation in
/// the window. Annualized USD/year plus the number of startups sampled.
pub fn nth_year_speed(
    dataset: &Dataset,
    ecosystem: &str,
    founding_year: i32,
    n: u32,
    spec: QuantileSpec,
    policy: DayZeroPolicy,
) -> Result<(f64, usize), DomainError> {
    debug_assert!(n >= 1, "nth-year speed requires n >= 1");
    let lo = 365 * (n - 1);
    let hi = 365 * n;
    let mut speeds = Vec::new();
    for startup in dataset.startups_in(ecosystem) {
        if startup.founded.year() != founding_year {
            continue;
        }
        let last_in_window = observations_for(startup, dataset.rounds_of(&startup.id), policy)
            .into_iter()
            .rfind(|o| (lo..hi).contains(&o.t_days));
        if let Some(obs) = last_in_window {
            speeds.push(obs.speed_usd_per_day);
        }
    }
    let value = quantile(&speeds, spec)?;
    Ok((to_usd_per_year(value), speeds.len()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{FundingStage, StartupId};
    use proptest::prelude::*;

    fn date(y: i32, m: u32, d: u32) -> NaiveDate {
        NaiveDate::from_ymd_opt(y, m, d).unwrap()
    }

    fn startup(id: &str, founded: NaiveDate, eco: &str) -> Startup {
        Startup {
            id: StartupId(id.into()),
            name: id.to_uppercase(),
            founded,
            ecosystem: eco.into(),
        }
    }

    fn round(id: &str, announced: NaiveDate, dollars: i64) -> FundingRound {
        FundingRound {
            startup_id: StartupId(id.into()),
            announced,
            amount_usd: Some(Money::from_dollars(dollars)),
            stage: FundingStage::Seed,
        }
    }

    fn dataset(startups: Vec<Startup>, rounds: Vec<FundingRound>) -> Dataset {
        Dataset::from_parts(startups, rounds, vec![])
    }

    // One startup founded 2010-01-01 with rounds at the given (day, dollars)
    // offsets.
    fn single(rounds_spec: &[(u64, i64)]) -> Dataset {
        let founded = date(2010, 1, 1);
        let rounds = rounds_spec
            .iter()
            .map(|&(day, dollars)| round("s", founded + chrono::Days::new(day), dollars))
            .collect();
        dataset(vec![startup("s", founded, "E")], rounds)
    }

    #[test]
    fn bin_worked_examples() {
        assert_eq!(assign_bin(200).index, 1);
        assert_eq!(assign_bin(420).index, 2);
        assert_eq!(assign_bin(0).index, 0);
    }

    #[test]
    fn bin_boundary_182_183() {
        assert_eq!(assign_bin(182).index, 0);
        assert_eq!(assign_bin(183).index, 1);
    }

    #[test]
    fn bin_labels_are_six_month_intervals() {
        assert_eq!(assign_bin(200).label(), "[6,12) months");
        assert_eq!(assign_bin(0).label(), "[0,6) months");
    }

    #[test]
    fn cumulative_funding_examples() {
        let founded = date(2010, 1, 1);
        let rounds = vec![
            round("s", founded + chrono::Days::new(100), 1_000_000),
            round("s", founded + chrono::Days::new(300), 2_000_000),
        ];
        assert_eq!(cumulative_funding(founded, &[], 500), Money::ZERO);
        assert_eq!(
            cumulative_funding(founded, &rounds, 300),
            Money::from_dollars(3_000_000)
        );
        assert_eq!(
            cumulative_funding(founded, &rounds, 200),
            Money::from_dollars(1_000_000)
        );
    }

    #[test]
    fn speed_examples() {
        let founded = date(2010, 1, 1);
        let s = startup("s", founded, "E");
        let rounds = vec![round("s", founded + chrono::Days::new(365), 1_000_000)];
        let v = fundraising_speed(&s, &rounds, 365).unwrap();
        assert!((v - 1_000_000.0 / 365.0).abs() < 1e-9);
        assert_eq!(fundraising_speed(&s, &rounds, 100).unwrap(), 0.0);
        assert!(matches!(
            fundraising_speed(&s, &rounds, 0),
            Err(DomainError::SpeedAtCreation)
        ));
    }

    #[test]
    fn one_observation_per_round() {
        let ds = single(&[(100, 1_000_000), (300, 2_000_000)]);
        let obs = speed_observations(&ds, "E", DayZeroPolicy::Clamp);
        assert_eq!(obs.len(), 2);
        let last = &obs[1];
        assert_eq!(last.t_days, 300);
        assert_eq!(last.cumulative_usd, Money::from_dollars(3_000_000));
        assert!((last.speed_usd_per_day - 10_000.0).abs() < 1e-12);
    }

    #[test]
    fn day_zero_round_clamps_to_one() {
        let ds = single(&[(0, 500_000)]);
        let obs = speed_observations(&ds, "E", DayZeroPolicy::Clamp);
        assert_eq!(obs.len(), 1);
        assert_eq!(obs[0].t_days, 1);
        assert_eq!(obs[0].speed_usd_per_day, 500_000.0);
    }

    #[test]
    fn day_zero_round_dropped_but_still_counted_later() {
        let ds = single(&[(0, 500_000), (100, 500_000)]);
        let obs = speed_observations(&ds, "E", DayZeroPolicy::Drop);
        assert_eq!(obs.len(), 1);
        assert_eq!(obs[0].t_days, 100);
        // Cumulative at day 100 still includes the founding-day amount.
        assert_eq!(obs[0].cumulative_usd, Money::from_dollars(1_000_000));
    }

    #[test]
    fn same_day_rounds_merge() {
        let ds = single(&[(50, 300_000), (50, 700_000)]);
        let obs = speed_observations(&ds, "E", DayZeroPolicy::Clamp);
        assert_eq!(obs.len(), 1);
        assert_eq!(obs[0].cumulative_usd, Money::from_dollars(1_000_000));
    }

    #[test]
    fn quantile_examples() {
        assert_eq!(quantile(&[5.0], QuantileSpec::MEDIAN).unwrap(), 5.0);
        assert_eq!(
            quantile(&[1.0, 2.0, 3.0, 4.0], QuantileSpec::MEDIAN).unwrap(),
            2.5
        );
        assert!(matches!(
            quantile(&[], QuantileSpec::MEDIAN),
            Err(DomainError::EmptySample)
        ));
    }

    #[test]
    fn quantile_rejects_out_of_range() {
        assert!(QuantileSpec::new(0.0).is_err());
        assert!(QuantileSpec::new(1.0).is_err());
        assert!(QuantileSpec::new(f64::NAN).is_err());
        assert!(QuantileSpec::new(0.1).is_ok());
    }

    #[test]
    fn ecosystem_speed_single_round() {
        let ds = single(&[(200, 1_000_000)]);
        let series =
            ecosystem_speed(&ds, "E", QuantileSpec::MEDIAN, 5.0, DayZeroPolicy::Clamp).unwrap();
        assert_eq!(series.points.len(), 1);
        let p = &series.points[0];
        assert_eq!(p.index, 1);
        assert_eq!(p.sample_count, 1);
        // 1,000,000 / 200 × 365.25 = 1,826,250 USD/year.
        assert!((p.value - 1_826_250.0).abs() < 1e-6);
        assert_eq!(series.unit, "USD/year");
        assert!(series.is_well_formed());
    }

    #[test]
    fn ecosystem_speed_median_of_two() {
        let founded = date(2010, 1, 1);
        let ds = dataset(
            vec![startup("a", founded, "E"), startup("b", founded, "E")],
            vec![
                round("a", founded + chrono::Days::new(200), 400_000), // 2,000 USD/day
                round("b", founded + chrono::Days::new(200), 800_000), // 4,000 USD/day
            ],
        );
        let series =
            ecosystem_speed(&ds, "E", QuantileSpec::MEDIAN, 5.0, DayZeroPolicy::Clamp).unwrap();
        assert_eq!(series.points.len(), 1);
        assert!((series.points[0].value - to_usd_per_year(3_000.0)).abs() < 1e-9);
        assert_eq!(series.points[0].sample_count, 2);
    }

    #[test]
    fn ecosystem_speed_empty_is_error() {
        let ds = dataset(vec![], vec![]);
        assert!(matches!(
            ecosystem_speed(&ds, "E", QuantileSpec::MEDIAN, 5.0, DayZeroPolicy::Clamp),
            Err(DomainError::EmptySample)
        ));
    }

    #[test]
    fn max_years_caps_bins() {
        let ds = single(&[(200, 1_000_000), (2000, 1_000_000)]);
        let series =
            ecosystem_speed(&ds, "E", QuantileSpec::MEDIAN, 5.0, DayZeroPolicy::Clamp).unwrap();
        // Day 2000 is bin 10, outside [0, 5 years) = bins 0..10.
        assert_eq!(series.points.len(), 1);
        assert_eq!(series.points[0].index, 1);
    }

    #[test]
    fn startup_acceleration_example() {
        let founded = date(2010, 1, 1);
        let s = startup("s", founded, "E");
        let rounds = vec![
            round("s", founded + chrono::Days::new(100), 1_000_000),
            round("s", founded + chrono::Days::new(200), 1_000_000),
        ];
        // v(100) = 10,000; v(200) = 10,000 → a = 0.
        let accels = startup_acceleration(&s, &rounds, DayZeroPolicy::Clamp).unwrap();
        assert_eq!(accels, vec![(200, 0.0)]);

        let rounds = vec![
            round("s", founded + chrono::Days::new(100), 1_000_000),
            round("s", founded + chrono::Days::new(200), 3_000_000),
        ];
        // v(100) = 10,000; v(200) = 20,000 → a = 100 USD/day².
        let accels = startup_acceleration(&s, &rounds, DayZeroPolicy::Clamp).unwrap();
        assert_eq!(accels.len(), 1);
        assert_eq!(accels[0].0, 200);
        assert!((accels[0].1 - 100.0).abs() < 1e-12);
    }

    #[test]
    fn single_round_has_no_acceleration() {
        let founded = date(2010, 1, 1);
        let s = startup("s", founded, "E");
        let rounds = vec![round("s", founded + chrono::Days::new(100), 1_000_000)];
        assert!(matches!(
            startup_acceleration(&s, &rounds, DayZeroPolicy::Clamp),
            Err(DomainError::EmptySample)
        ));
    }

    #[test]
    fn ecosystem_acceleration_degenerate_and_mirror() {
        let founded = date(2010, 1, 1);
        // Two identical startups → bin value equals the common acceleration.
        let ds = dataset(
            vec![startup("a", founded, "E"), startup("b", founded, "E")],
            vec![
                round("a", founded + chrono::Days::new(100), 1_000_000),
                round("a", founded + chrono::Days::new(200), 3_000_000),
                round("b", founded + chrono::Days::new(100), 1_000_000),
                round("b", founded + chrono::Days::new(200), 3_000_000),
            ],
        );
        let series =
            ecosystem_acceleration(&ds, "E", QuantileSpec::MEDIAN, DayZeroPolicy::Clamp).unwrap();
        assert_eq!(series.points.len(), 1);
        let expected = 100.0 * DAYS_PER_YEAR * DAYS_PER_YEAR / 1e6;
        assert!((series.points[0].value - expected).abs() < 1e-9);

        // Mirror-image population → median 0. The zero-amount round keeps
        // the down startup's cumulative flat, halving its speed by day 200.
        let ds = dataset(
            vec![startup("up", founded, "E"), startup("down", founded, "E")],
            vec![
                round("up", founded + chrono::Days::new(100), 1_000_000),
                round("up", founded + chrono::Days::new(200), 3_000_000), // +100/day²
                round("down", founded + chrono::Days::new(100), 2_000_000),
                round("down", founded + chrono::Days::new(200), 0), // −100/day²
            ],
        );
        let series =
            ecosystem_acceleration(&ds, "E", QuantileSpec::MEDIAN, DayZeroPolicy::Clamp).unwrap();
        assert_eq!(series.points[0].value, 0.0);
    }

    // Two cohorts, each one startup, with identical round patterns relative
    // to founding except the late cohort's amounts scaled by `late_scale`.
    fn cohort_pair(late_scale: i64) -> Dataset {
        let early_founded = date(2011, 3, 15);
        let late_founded = date(2015, 3, 15);
        dataset(
            vec![
                startup("early", early_founded, "E"),
                startup("late", late_founded, "E"),
            ],
            vec![
                round("early", early_founded + chrono::Days::new(1461), 4_000_000),
                round(
                    "late",
                    late_founded + chrono::Days::new(1461),
                    4_000_000 * late_scale,
                ),
            ],
        )
    }

    #[test]
    fn identical_cohorts_give_zero_acceleration() {
        let ds = cohort_pair(1);
        let early = Cohort::new(2010, 2012).unwrap();
        let late = Cohort::new(2014, 2016).unwrap();
        for mode in [AccelMode::Absolute, AccelMode::Percent] {
            let out = cohort_acceleration(
                &ds,
                "E",
                early,
                late,
                QuantileSpec::MEDIAN,
                mode,
                5.0,
                DayZeroPolicy::Clamp,
            )
            .unwrap();
            assert_eq!(out.series.points.len(), 1);
            assert_eq!(out.series.points[0].value, 0.0);
        }
    }

    #[test]
    fn cohort_acceleration_planted_values() {
        // Early bin value: 4,000,000 / 1461 × 365.25 = 1,000,000 USD/yr;
        // late is exactly double. Midpoints 2011 and 2015.
        let ds = cohort_pair(2);
        let early = Cohort::new(2010, 2012).unwrap();
        let late = Cohort::new(2014, 2016).unwrap();
        let abs = cohort_acceleration(
            &ds,
            "E",
            early,
            late,
            QuantileSpec::MEDIAN,
            AccelMode::Absolute,
            5.0,
            DayZeroPolicy::Clamp,
        )
        .unwrap();
        assert_eq!(abs.series.unit, "USD million/year^2");
        assert!((abs.series.points[0].value - 0.25).abs() < 1e-12);

        let pct = cohort_acceleration(
            &ds,
            "E",
            early,
            late,
            QuantileSpec::MEDIAN,
            AccelMode::Percent,
            5.0,
            DayZeroPolicy::Clamp,
        )
        .unwrap();
        assert_eq!(pct.series.points[0].value, 100.0);
    }

    #[test]
    fn empty_early_cohort_is_error() {
        let ds = cohort_pair(1).filter_founded(2014, 2016);
        let early = Cohort::new(2010, 2012).unwrap();
        let late = Cohort::new(2014, 2016).unwrap();
        assert!(matches!(
            cohort_acceleration(
                &ds,
                "E",
                early,
                late,
                QuantileSpec::MEDIAN,
                AccelMode::Absolute,
                5.0,
                DayZeroPolicy::Clamp,
            ),
            Err(DomainError::EmptySample)
        ));
    }

    #[test]
    fn overlapping_cohorts_rejected() {
        let ds = cohort_pair(1);
        let early = Cohort::new(2010, 2014).unwrap();
        let late = Cohort::new(2014, 2016).unwrap();
        assert!(matches!(
            cohort_acceleration(
                &ds,
                "E",
                early,
                late,
                QuantileSpec::MEDIAN,
                AccelMode::Absolute,
                5.0,
                DayZeroPolicy::Clamp,
            ),
            Err(DomainError::InvalidCohorts(_))
        ));
    }

    #[test]
    fn nth_year_speed_example() {
        // Founded 2010, one round 1.2M at day 400; n = 2 window [365, 730).
        let ds = single(&[(400, 1_200_000)]);
        let (value, count) =
            nth_year_speed(&ds, "E", 2010, 2, QuantileSpec::MEDIAN, DayZeroPolicy::Clamp).unwrap();
        assert_eq!(count, 1);
        assert!((value - 1_095_750.0).abs() < 1e-6);

        // The same round is outside the n = 1 window.
        assert!(matches!(
            nth_year_speed(&ds, "E", 2010, 1, QuantileSpec::MEDIAN, DayZeroPolicy::Clamp),
            Err(DomainError::EmptySample)
        ));
    }

    #[test]
    fn nth_year_speed_median_across_startups() {
        let founded = date(2010, 1, 1);
        let ds = dataset(
            vec![startup("a", founded, "E"), startup("b", founded, "E")],
            vec![
                round("a", founded + chrono::Days::new(400), 400_000), // 1,000 USD/day
                round("b", founded + chrono::Days::new(400), 1_200_000), // 3,000 USD/day
            ],
        );
        let (value, count) =
            nth_year_speed(&ds, "E", 2010, 2, QuantileSpec::MEDIAN, DayZeroPolicy::Clamp).unwrap();
        assert_eq!(count, 2);
        assert!((value - to_usd_per_year(2_000.0)).abs() < 1e-9);
    }

    #[test]
    fn nth_year_takes_last_observation_in_window() {
        let ds = single(&[(400, 1_000_000), (500, 1_000_000), (800, 1_000_000)]);
        let (value, _) =
            nth_year_speed(&ds, "E", 2010, 2, QuantileSpec::MEDIAN, DayZeroPolicy::Clamp).unwrap();
        // Last in [365, 730) is day 500 with cumulative 2M.
        assert!((value - to_usd_per_year(2_000_000.0 / 500.0)).abs() < 1e-9);
    }

    proptest! {
        // Every age falls in exactly one bin, consistent with the f64 widths.
        #[test]
        fn binning_partitions_ages(t in 0u32..200_000) {
            let bin = assign_bin(t);
            let idx = bin.index as f64;
            prop_assert!(t as f64 >= idx * BIN_DAYS - 1e-9);
            prop_assert!((t as f64) < (idx + 1.0) * BIN_DAYS + 1e-9);
        }

        // Cumulative funding never decreases with age.
        #[test]
        fn cumulative_funding_is_monotone(
            days in proptest::collection::vec(0u64..2000, 1..8),
            dollars in proptest::collection::vec(1i64..10_000_000, 8),
            t1 in 0u32..2500,
            t2 in 0u32..2500,
        ) {
            let founded = date(2010, 1, 1);
            let rounds: Vec<FundingRound> = days
                .iter()
                .zip(&dollars)
                .map(|(&d, &a)| round("s", founded + chrono::Days::new(d), a))
                .collect();
            let (lo, hi) = if t1 <= t2 { (t1, t2) } else { (t2, t1) };
            prop_assert!(
                cumulative_funding(founded, &rounds, lo)
                    <= cumulative_funding(founded, &rounds, hi)
            );
        }

        // Aggregates stay within the sample range and ignore input order.
        #[test]
        fn quantile_bounds_and_permutation(
            mut values in proptest::collection::vec(-1e9f64..1e9, 1..50),
            q in 0.01f64..0.99,
        ) {
            let spec = QuantileSpec::new(q).unwrap();
            let v = quantile(&values, spec).unwrap();
            let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
            let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            prop_assert!(v >= min && v <= max);
            values.reverse();
            prop_assert_eq!(quantile(&values, spec).unwrap(), v);
        }

        // Appending a sample equal to the median leaves the median unchanged.
        #[test]
        fn median_stable_under_median_append(
            values in proptest::collection::vec(-1e6f64..1e6, 1..40),
        ) {
            let m = quantile(&values, QuantileSpec::MEDIAN).unwrap();
            let mut extended = values.clone();
            extended.push(m);
            let m2 = quantile(&extended, QuantileSpec::MEDIAN).unwrap();
            prop_assert!((m2 - m).abs() <= 1e-9 * m.abs().max(1.0));
        }
    }
}
