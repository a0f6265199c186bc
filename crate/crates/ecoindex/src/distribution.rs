//! Funding-stage distributions: per ecosystem, the share of round counts and
//! of total funding per stage, and the back-to-back pyramid comparison of two
//! ecosystems.

use chrono::Datelike;

use crate::domain::{DomainError, FundingStage, Money};
use crate::ingest::Dataset;

/// Per-stage slice of an ecosystem's funding activity.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct StageBreakdown {
    /// Share of total known funding in [0, 1].
    pub amount_share: f64,
    /// Share of all rounds (unknown amounts included) in [0, 1].
    pub count_share: f64,
    pub amount_usd: Money,
    pub count: u64,
}

/// Stage distribution of one ecosystem over an announcement-year window.
/// Every canonical stage is present, zero-valued when inactive.
#[derive(Debug, Clone, PartialEq)]
pub struct StageDistribution {
    pub ecosystem: String,
    pub from_year: i32,
    pub to_year: i32,
    by_stage: [StageBreakdown; FundingStage::ALL.len()],
}

impl StageDistribution {
    pub fn get(&self, stage: FundingStage) -> &StageBreakdown {
        &self.by_stage[stage as usize]
    }

    /// Rows in presentation order (Seed → SeriesE → Other).
    pub fn rows(&self) -> impl Iterator<Item = (FundingStage, &StageBreakdown)> {
        FundingStage::ALL.iter().map(move |&s| (s, self.get(s)))
    }
}

/// Counts and sums rounds announced within `[from_year, to_year]` for the
/// ecosystem's startups. Count shares cover all rounds; amount shares cover
/// known-amount rounds only, so an unknown-amount round shifts count shares
/// but never amount shares.
pub fn stage_distribution(
    dataset: &Dataset,
    ecosystem: &str,
    from_year: i32,
    to_year: i32,
) -> Result<StageDistribution, DomainError> {
    debug_assert!(from_year <= to_year);
    let mut by_stage = [StageBreakdown::default(); FundingStage::ALL.len()];
    let mut total_count = 0u64;
    let mut total_amount = Money::ZERO;

    for startup in dataset.startups_in(ecosystem) {
        for round in dataset.rounds_of(&startup.id) {
            let year = round.announced.year();
            if !(from_year..=to_year).contains(&year) {
                continue;
            }
            let slot = &mut by_stage[round.stage as usize];
            slot.count += 1;
            total_count += 1;
            if let Some(amount) = round.amount_usd {
                slot.amount_usd = slot
                    .amount_usd
                    .checked_add(amount)
                    .expect("funding sum overflow");
                total_amount = total_amount
                    .checked_add(amount)
                    .expect("funding sum overflow");
            }
        }
    }
    if total_count == 0 {
        return Err(DomainError::EmptySample);
    }
    for slot in &mut by_stage {
        slot.count_share = slot.count as f64 / total_count as f64;
        slot.amount_share = if total_amount.is_zero() {
            0.0
        } else {
            slot.amount_usd.to_f64_dollars() / total_amount.to_f64_dollars()
        };
    }
    Ok(StageDistribution {
        ecosystem: ecosystem.to_string(),
        from_year,
        to_year,
        by_stage,
    })
}

/// One aligned pyramid row: the same stage seen from both ecosystems.
#[derive(Debug, Clone, PartialEq)]
pub struct PyramidRow {
    pub stage: FundingStage,
    pub left_amount_share: f64,
    pub right_amount_share: f64,
    pub left_count_share: f64,
    pub right_count_share: f64,
}

/// Back-to-back comparison table of two stage distributions, ordered
/// Seed → SeriesE → Other.
#[derive(Debug, Clone, PartialEq)]
pub struct Pyramid {
    pub left: String,
    pub right: String,
    pub rows: Vec<PyramidRow>,
}

pub fn pairwise_pyramid(left: &StageDistribution, right: &StageDistribution) -> Pyramid {
    let rows = FundingStage::ALL
        .iter()
        .map(|&stage| PyramidRow {
            stage,
            left_amount_share: left.get(stage).amount_share,
            right_amount_share: right.get(stage).amount_share,
            left_count_share: left.get(stage).count_share,
            right_count_share: right.get(stage).count_share,
        })
        .collect();
    Pyramid {
        left: left.ecosystem.clone(),
        right: right.ecosystem.clone(),
        rows,
    }
}
