//! Purchasing-power normalization: dollar values divided by an ecosystem's
//! annual engineer cost, turning USD-based units into engineer-year units.

use std::collections::BTreeMap;

use crate::domain::{DomainError, EcosystemConfig, IndicatorSeries};

/// Ecosystem name → annual engineer cost in USD (constant over the studied
/// period).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PppTable {
    divisors: BTreeMap<String, f64>,
}

impl PppTable {
    pub fn from_configs(ecosystems: &[EcosystemConfig]) -> PppTable {
        PppTable {
            divisors: ecosystems
                .iter()
                .map(|e| (e.name.clone(), e.ppp_divisor_usd))
                .collect(),
        }
    }

    pub fn with_divisor(mut self, ecosystem: &str, divisor: f64) -> PppTable {
        self.divisors.insert(ecosystem.to_string(), divisor);
        self
    }

    pub fn divisor(&self, ecosystem: &str) -> Result<f64, DomainError> {
        self.divisors
            .get(ecosystem)
            .copied()
            .ok_or_else(|| DomainError::MissingPpp(ecosystem.to_string()))
    }
}

/// A dollar amount expressed in engineer-years for the given ecosystem.
pub fn ppp_adjust_amount(
    amount_usd: f64,
    ecosystem: &str,
    table: &PppTable,
) -> Result<f64, DomainError> {
    Ok(amount_usd / table.divisor(ecosystem)?)
}

/// Rewrites a USD-based unit label to its engineer-year analogue.
fn adjusted_unit(unit: &str) -> Option<String> {
    unit.strip_prefix("USD")
        .map(|rest| format!("engineer-years{rest}"))
}

/// Divides every point of a USD-based series by the ecosystem's divisor and
/// relabels the unit; sample counts are unchanged. Dimensionless series
/// (e.g. percent) are rejected.
pub fn ppp_adjust_series(
    series: &IndicatorSeries,
    table: &PppTable,
) -> Result<IndicatorSeries, DomainError> {
    let unit = adjusted_unit(&series.unit)
        .ok_or_else(|| DomainError::UnitMismatch(series.unit.clone()))?;
    let divisor = table.divisor(&series.ecosystem)?;
    let mut adjusted = series.clone();
    adjusted.unit = unit;
    for point in &mut adjusted.points {
        point.value /= divisor;
    }
    Ok(adjusted)
}
