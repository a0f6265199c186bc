//! Indicators for entrepreneurial ecosystems, computed from startup and
//! funding-round records: fundraising speed (cumulative funding over startup
//! age, aggregated per 6-month bin), acceleration (per startup, per
//! ecosystem, or between founding cohorts), nth-year speed, funding-stage
//! distributions, and purchasing-power normalization by local engineer cost.
//!
//! The [`cli`] module exposes all of it as the `ecoindex` binary; the other
//! modules are usable as a library:
//!
//! ```
//! use ecoindex::domain::{FundingRound, FundingStage, Money, Startup, StartupId};
//! use ecoindex::indicators::{ecosystem_speed, DayZeroPolicy, QuantileSpec};
//! use ecoindex::ingest::Dataset;
//!
//! let founded = chrono::NaiveDate::from_ymd_opt(2012, 3, 1).unwrap();
//! let startup = Startup {
//!     id: StartupId("s1".into()),
//!     name: "Acme".into(),
//!     founded,
//!     ecosystem: "Berlin".into(),
//! };
//! let round = FundingRound {
//!     startup_id: StartupId("s1".into()),
//!     announced: founded + chrono::Days::new(200),
//!     amount_usd: Some(Money::from_dollars(1_000_000)),
//!     stage: FundingStage::Seed,
//! };
//! let dataset = Dataset::from_parts(vec![startup], vec![round], vec![]);
//! let series = ecosystem_speed(
//!     &dataset, "Berlin", QuantileSpec::MEDIAN, 5.0, DayZeroPolicy::Clamp,
//! ).unwrap();
//! assert_eq!(series.points[0].index, 1); // day 200 → the [6,12) months bin
//! ```

pub mod cli;
pub mod distribution;
pub mod domain;
pub mod indicators;
pub mod ingest;
pub mod output;
pub mod ppp;
pub mod svg;
