//! Shared domain types and unit conventions.
//!
//! Dates are pure calendar dates (no clock, no time zone). Money is an exact
//! fixed-point decimal in US dollars. A year is 365.25 days for all unit
//! conversions, so a 6-month bin is 182.625 days.

use std::fmt;

use chrono::{Datelike, NaiveDate};
use serde::Serialize;
use thiserror::Error;

/// Days per year used for every day↔year conversion.
pub const DAYS_PER_YEAR: f64 = 365.25;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DomainError {
    #[error("round dated {at} precedes founding {founded}")]
    RoundBeforeFounding { founded: NaiveDate, at: NaiveDate },
    #[error("fundraising speed is undefined at creation (t = 0 days)")]
    SpeedAtCreation,
    #[error("empty sample: no observations to aggregate")]
    EmptySample,
    #[error("no PPP divisor configured for ecosystem {0:?}")]
    MissingPpp(String),
    #[error("cannot PPP-adjust a series with unit {0:?}")]
    UnitMismatch(String),
    #[error("quantile must lie in (0, 1), got {0}")]
    InvalidQuantile(f64),
    #[error("invalid cohorts: {0}")]
    InvalidCohorts(String),
}

/// Exact decimal US dollars, stored as integer cents.
///
/// Sums of funding amounts never touch binary floating point; conversion to
/// `f64` happens once, when a ratio (speed, share) is formed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Money(i128);

impl Money {
    pub const ZERO: Money = Money(0);

    pub fn from_cents(cents: i128) -> Money {
        Money(cents)
    }

    pub fn from_dollars(dollars: i64) -> Money {
        Money(dollars as i128 * 100)
    }

    pub fn cents(self) -> i128 {
        self.0
    }

    pub fn to_f64_dollars(self) -> f64 {
        self.0 as f64 / 100.0
    }

    pub fn checked_add(self, other: Money) -> Option<Money> {
        self.0.checked_add(other.0).map(Money)
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Parses a plain decimal dollar string: digits with an optional `.` and
    /// one or two fraction digits. Signs, grouping separators, exponents and
    /// currency symbols are rejected.
    pub fn parse_usd(raw: &str) -> Result<Money, MoneyParseError> {
        let s = raw.trim();
        if s.is_empty() {
            return Err(MoneyParseError::Empty);
        }
        let (whole, frac) = match s.split_once('.') {
            Some((_, "")) => return Err(MoneyParseError::Malformed),
            Some((w, f)) => (w, f),
            None => (s, ""),
        };
        if whole.is_empty() || !whole.bytes().all(|b| b.is_ascii_digit()) {
            return Err(MoneyParseError::Malformed);
        }
        if frac.len() > 2 || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(MoneyParseError::Malformed);
        }
        let dollars: i128 = whole.parse().map_err(|_| MoneyParseError::Malformed)?;
        let cents_part: i128 = match frac.len() {
            0 => 0,
            1 => frac.parse::<i128>().map_err(|_| MoneyParseError::Malformed)? * 10,
            _ => frac.parse().map_err(|_| MoneyParseError::Malformed)?,
        };
        dollars
            .checked_mul(100)
            .and_then(|c| c.checked_add(cents_part))
            .map(Money)
            .ok_or(MoneyParseError::Overflow)
    }
}

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
pub enum MoneyParseError {
    #[error("empty amount")]
    Empty,
    #[error("malformed decimal amount")]
    Malformed,
    #[error("amount out of range")]
    Overflow,
}

impl fmt::Display for Money {
    /// Exact decimal rendering: whole dollars without a fraction part,
    /// otherwise two fraction digits (`"1250"`, `"1250.50"`).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.0 < 0 { "-" } else { "" };
        let abs = self.0.unsigned_abs();
        let dollars = abs / 100;
        let cents = abs % 100;
        if cents == 0 {
            write!(f, "{sign}{dollars}")
        } else {
            write!(f, "{sign}{dollars}.{cents:02}")
        }
    }
}

/// Opaque startup identifier, unique within a dataset.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct StartupId(pub String);

impl StartupId {
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for StartupId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// The unit of observation: a startup with a founding date and an
/// ecosystem assignment.
#[derive(Debug, Clone, PartialEq)]
pub struct Startup {
    pub id: StartupId,
    pub name: String,
    pub founded: NaiveDate,
    pub ecosystem: String,
}

impl Startup {
    pub fn founded_year(&self) -> i32 {
        self.founded.year()
    }
}

/// Funding stage taxonomy. The ordering is the canonical presentation
/// order for stage-distribution tables (Seed first, Other last).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum FundingStage {
    Seed,
    SeriesA,
    SeriesB,
    SeriesC,
    SeriesD,
    SeriesE,
    Other,
}

impl FundingStage {
    pub const ALL: [FundingStage; 7] = [
        FundingStage::Seed,
        FundingStage::SeriesA,
        FundingStage::SeriesB,
        FundingStage::SeriesC,
        FundingStage::SeriesD,
        FundingStage::SeriesE,
        FundingStage::Other,
    ];

    pub fn canonical_name(self) -> &'static str {
        match self {
            FundingStage::Seed => "Seed",
            FundingStage::SeriesA => "SeriesA",
            FundingStage::SeriesB => "SeriesB",
            FundingStage::SeriesC => "SeriesC",
            FundingStage::SeriesD => "SeriesD",
            FundingStage::SeriesE => "SeriesE",
            FundingStage::Other => "Other",
        }
    }

    /// Looks up a canonical stage name, case-insensitively.
    pub fn from_canonical(name: &str) -> Option<FundingStage> {
        FundingStage::ALL
            .into_iter()
            .find(|s| s.canonical_name().eq_ignore_ascii_case(name.trim()))
    }
}

impl fmt::Display for FundingStage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.canonical_name())
    }
}

/// A dated, staged funding event attached to a startup. `amount_usd` is
/// `None` when the raised amount is unknown; unknown is never encoded as 0.
#[derive(Debug, Clone, PartialEq)]
pub struct FundingRound {
    pub startup_id: StartupId,
    pub announced: NaiveDate,
    pub amount_usd: Option<Money>,
    pub stage: FundingStage,
}

/// One speed sample, taken at a funding-round date.
#[derive(Debug, Clone, PartialEq)]
pub struct SpeedObservation {
    pub startup_id: StartupId,
    /// Days since founding, always >= 1 (day-zero rounds are clamped or dropped).
    pub t_days: u32,
    /// Total known funding raised through `t_days`.
    pub cumulative_usd: Money,
    pub speed_usd_per_day: f64,
}

/// Which indicator a series carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Indicator {
    Speed,
    Acceleration,
    NthYearSpeed,
    StageDistribution,
}

impl Indicator {
    pub fn name(self) -> &'static str {
        match self {
            Indicator::Speed => "speed",
            Indicator::Acceleration => "acceleration",
            Indicator::NthYearSpeed => "nth_year_speed",
            Indicator::StageDistribution => "stage_distribution",
        }
    }
}

/// One aggregated point: a bin index (or founding year), the aggregated
/// value, and how many samples produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesPoint {
    pub index: i64,
    pub label: String,
    pub value: f64,
    pub sample_count: usize,
}

/// A binned or yearly sequence of aggregated indicator values.
///
/// Indices are strictly increasing and every point has at least one sample;
/// bins with zero observations are omitted, never emitted as zero.
#[derive(Debug, Clone, PartialEq)]
pub struct IndicatorSeries {
    pub ecosystem: String,
    pub indicator: Indicator,
    pub unit: String,
    pub points: Vec<SeriesPoint>,
}

impl IndicatorSeries {
    /// Checks the structural invariants (strictly increasing indices,
    /// nonzero sample counts). Intended for assertions in tests.
    pub fn is_well_formed(&self) -> bool {
        self.points.windows(2).all(|w| w[0].index < w[1].index)
            && self.points.iter().all(|p| p.sample_count >= 1)
    }
}

/// Location-matching rules for one ecosystem: a record belongs if its city,
/// region or country equals (case-insensitively) any listed entry.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct MatchRules {
    pub cities: Vec<String>,
    pub regions: Vec<String>,
    pub countries: Vec<String>,
}

impl MatchRules {
    pub fn matches(&self, city: &str, region: &str, country: &str) -> bool {
        let hit = |list: &[String], field: &str| {
            let f = field.trim().to_lowercase();
            !f.is_empty() && list.iter().any(|e| e.trim().to_lowercase() == f)
        };
        hit(&self.cities, city) || hit(&self.regions, region) || hit(&self.countries, country)
    }
}

/// One configured ecosystem: a name, geography rules, and the PPP divisor
/// (annual engineer cost in USD, constant over the studied period).
#[derive(Debug, Clone, PartialEq)]
pub struct EcosystemConfig {
    pub name: String,
    pub match_rules: MatchRules,
    pub ppp_divisor_usd: f64,
}

/// Exact whole-day difference `at - startup.founded`.
///
/// Calendar arithmetic only; no time zones are involved, so the result is
/// deterministic everywhere.
pub fn elapsed_days(startup: &Startup, at: NaiveDate) -> Result<u32, DomainError> {
    if at < startup.founded {
        return Err(DomainError::RoundBeforeFounding {
            founded: startup.founded,
            at,
        });
    }
    Ok((at - startup.founded).num_days() as u32)
}

/// Annualizes a USD/day speed: input × 365.25.
pub fn to_usd_per_year(speed_usd_per_day: f64) -> f64 {
    speed_usd_per_day * DAYS_PER_YEAR
}
