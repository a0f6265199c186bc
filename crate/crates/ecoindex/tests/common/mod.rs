//! Shared test support: an independent flat-loop oracle for every aggregated
//! indicator, a seeded random dataset generator, and small check helpers.
//!
//! The oracle deliberately avoids the library's computation path: plain
//! nested loops over record slices, f64 running sums, float binning, and a
//! differently-formulated interpolation quantile. It shares only the domain
//! record types as data carriers.

#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::PathBuf;

use chrono::{Datelike, Days, NaiveDate};
use ecoindex::domain::{FundingRound, FundingStage, Money, Startup, StartupId};

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

pub fn rel_err(actual: f64, expected: f64) -> f64 {
    let scale = expected.abs().max(1e-300);
    (actual - expected).abs() / scale
}

pub fn assert_close(actual: f64, expected: f64, tol: f64, what: &str) {
    assert!(
        rel_err(actual, expected) <= tol,
        "{what}: {actual} vs {expected} (rel err {:.3e}, tol {tol:.0e})",
        rel_err(actual, expected)
    );
}

pub fn date(y: i32, m: u32, d: u32) -> NaiveDate {
    NaiveDate::from_ymd_opt(y, m, d).unwrap()
}

// ---------------------------------------------------------------------------
// Independent oracle
// ---------------------------------------------------------------------------

pub mod oracle {
    use super::*;

    /// Sort-based reference quantile, formulated as a convex combination
    /// (the library interpolates from the lower statistic instead).
    pub fn quantile_ref(values: &[f64], q: f64) -> f64 {
        assert!(!values.is_empty());
        let mut sorted = values.to_vec();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let rank = q * (sorted.len() as f64 - 1.0);
        let lo = rank.floor() as usize;
        let hi = rank.ceil() as usize;
        let frac = rank - lo as f64;
        sorted[lo] * (1.0 - frac) + sorted[hi] * frac
    }

    fn bin_of(t_days: u32) -> u32 {
        (t_days as f64 / 182.625).floor() as u32
    }

    /// Per-startup speed observations: same-day known-amount rounds merged,
    /// day-zero clamped to 1, cumulative f64 dollars divided by age.
    pub fn observations(
        startup: &Startup,
        rounds: &[FundingRound],
    ) -> Vec<(u32, f64)> {
        let mut dated: BTreeMap<NaiveDate, f64> = BTreeMap::new();
        for round in rounds {
            if round.startup_id != startup.id {
                continue;
            }
            if let Some(amount) = round.amount_usd {
                *dated.entry(round.announced).or_insert(0.0) += amount.to_f64_dollars();
            }
        }
        let mut out = Vec::new();
        let mut cumulative = 0.0;
        for (day, amount) in dated {
            cumulative += amount;
            let mut t = (day - startup.founded).num_days() as u32;
            if t == 0 {
                t = 1;
            }
            out.push((t, cumulative / t as f64));
        }
        out
    }

    /// Ecosystem speed curve: bin index → (USD/year value, sample count).
    pub fn speed_series(
        startups: &[Startup],
        rounds: &[FundingRound],
        ecosystem: &str,
        q: f64,
        max_years: f64,
    ) -> BTreeMap<u32, (f64, usize)> {
        let bin_limit = (max_years * 2.0).ceil() as u32;
        let mut bins: BTreeMap<u32, Vec<f64>> = BTreeMap::new();
        for startup in startups {
            if startup.ecosystem != ecosystem {
                continue;
            }
            for (t, speed) in observations(startup, rounds) {
                let b = bin_of(t);
                if b < bin_limit {
                    bins.entry(b).or_default().push(speed);
                }
            }
        }
        bins.into_iter()
            .map(|(b, v)| (b, (quantile_ref(&v, q) * 365.25, v.len())))
            .collect()
    }

    /// Ecosystem acceleration curve in USD million/year².
    pub fn acceleration_series(
        startups: &[Startup],
        rounds: &[FundingRound],
        ecosystem: &str,
        q: f64,
    ) -> BTreeMap<u32, (f64, usize)> {
        let mut bins: BTreeMap<u32, Vec<f64>> = BTreeMap::new();
        for startup in startups {
            if startup.ecosystem != ecosystem {
                continue;
            }
            let obs = observations(startup, rounds);
            for pair in obs.windows(2) {
                let (t0, v0) = pair[0];
                let (t1, v1) = pair[1];
                if t1 > t0 {
                    bins.entry(bin_of(t1))
                        .or_default()
                        .push((v1 - v0) / (t1 - t0) as f64);
                }
            }
        }
        bins.into_iter()
            .map(|(b, v)| {
                (
                    b,
                    (quantile_ref(&v, q) * 365.25 * 365.25 / 1e6, v.len()),
                )
            })
            .collect()
    }

    fn founded_in(startup: &Startup, from: i32, to: i32) -> bool {
        (from..=to).contains(&startup.founded.year())
    }

    /// Cohort acceleration: (absolute USD million/year², percent) per shared
    /// bin. Percent entries are absent where the early value is zero.
    pub fn cohort_acceleration(
        startups: &[Startup],
        rounds: &[FundingRound],
        ecosystem: &str,
        early: (i32, i32),
        late: (i32, i32),
        q: f64,
        max_years: f64,
    ) -> (BTreeMap<u32, f64>, BTreeMap<u32, f64>) {
        let early_startups: Vec<Startup> = startups
            .iter()
            .filter(|s| founded_in(s, early.0, early.1))
            .cloned()
            .collect();
        let late_startups: Vec<Startup> = startups
            .iter()
            .filter(|s| founded_in(s, late.0, late.1))
            .cloned()
            .collect();
        let early_series = speed_series(&early_startups, rounds, ecosystem, q, max_years);
        let late_series = speed_series(&late_startups, rounds, ecosystem, q, max_years);
        let delta = (late.0 + late.1) as f64 / 2.0 - (early.0 + early.1) as f64 / 2.0;
        let mut absolute = BTreeMap::new();
        let mut percent = BTreeMap::new();
        for (bin, (v_early, _)) in &early_series {
            if let Some((v_late, _)) = late_series.get(bin) {
                absolute.insert(*bin, (v_late - v_early) / delta / 1e6);
                if *v_early != 0.0 {
                    percent.insert(*bin, 100.0 * (v_late - v_early) / v_early);
                }
            }
        }
        (absolute, percent)
    }

    /// nth-year speed for one founding year: USD/year and startup count.
    pub fn nth_year(
        startups: &[Startup],
        rounds: &[FundingRound],
        ecosystem: &str,
        year: i32,
        n: u32,
        q: f64,
    ) -> Option<(f64, usize)> {
        let lo = 365 * (n - 1);
        let hi = 365 * n;
        let mut speeds = Vec::new();
        for startup in startups {
            if startup.ecosystem != ecosystem || startup.founded.year() != year {
                continue;
            }
            let mut last = None;
            for (t, speed) in observations(startup, rounds) {
                if t >= lo && t < hi {
                    last = Some(speed);
                }
            }
            if let Some(speed) = last {
                speeds.push(speed);
            }
        }
        if speeds.is_empty() {
            None
        } else {
            Some((quantile_ref(&speeds, q) * 365.25, speeds.len()))
        }
    }

    /// Stage distribution over an announcement-year window:
    /// stage → (amount_share, count_share, amount_dollars, count).
    pub fn stage_distribution(
        startups: &[Startup],
        rounds: &[FundingRound],
        ecosystem: &str,
        from_year: i32,
        to_year: i32,
    ) -> Option<BTreeMap<FundingStage, (f64, f64, f64, u64)>> {
        let mut amounts: BTreeMap<FundingStage, f64> = BTreeMap::new();
        let mut counts: BTreeMap<FundingStage, u64> = BTreeMap::new();
        let mut total_amount = 0.0;
        let mut total_count = 0u64;
        for startup in startups {
            if startup.ecosystem != ecosystem {
                continue;
            }
            for round in rounds {
                if round.startup_id != startup.id {
                    continue;
                }
                let year = round.announced.year();
                if year < from_year || year > to_year {
                    continue;
                }
                *counts.entry(round.stage).or_insert(0) += 1;
                total_count += 1;
                if let Some(amount) = round.amount_usd {
                    *amounts.entry(round.stage).or_insert(0.0) += amount.to_f64_dollars();
                    total_amount += amount.to_f64_dollars();
                }
            }
        }
        if total_count == 0 {
            return None;
        }
        let mut out = BTreeMap::new();
        for stage in FundingStage::ALL {
            let amount = amounts.get(&stage).copied().unwrap_or(0.0);
            let count = counts.get(&stage).copied().unwrap_or(0);
            let amount_share = if total_amount > 0.0 {
                amount / total_amount
            } else {
                0.0
            };
            out.insert(
                stage,
                (
                    amount_share,
                    count as f64 / total_count as f64,
                    amount,
                    count,
                ),
            );
        }
        Some(out)
    }
}

// ---------------------------------------------------------------------------
// Seeded random dataset generation
// ---------------------------------------------------------------------------

pub mod gen {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    pub const ECOSYSTEMS: [&str; 3] = ["Alpha", "Beta", "Gamma"];

    const STAGES: [FundingStage; 7] = FundingStage::ALL;

    /// Random startups and rounds: founding years 2009-2019, round ages up
    /// to ~6 years, ~10% unknown amounts, occasional founding-day rounds and
    /// same-day round pairs. Amounts are whole multiples of $1,000 so that
    /// scale factors of 0.5 and exact-cent PPP divisions stay lossless.
    pub fn random_dataset(seed: u64, startup_count: usize) -> (Vec<Startup>, Vec<FundingRound>) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut startups = Vec::with_capacity(startup_count);
        let mut rounds = Vec::new();
        for i in 0..startup_count {
            let id = StartupId(format!("s{i:03}"));
            let year = rng.random_range(2009..=2019);
            let founded = date(year, rng.random_range(1..=12), rng.random_range(1..=28));
            let ecosystem = ECOSYSTEMS[rng.random_range(0..ECOSYSTEMS.len())];
            startups.push(Startup {
                id: id.clone(),
                name: format!("S{i:03}"),
                founded,
                ecosystem: ecosystem.to_string(),
            });
            let round_count = rng.random_range(0..=5);
            let mut t = 0u64;
            for r in 0..round_count {
                if r == 0 && rng.random_bool(0.08) {
                    // founding-day round
                } else {
                    t += rng.random_range(1..=450);
                }
                let amount = if rng.random_bool(0.1) {
                    None
                } else {
                    Some(Money::from_dollars(
                        rng.random_range(10..=50_000) * 1_000,
                    ))
                };
                rounds.push(FundingRound {
                    startup_id: id.clone(),
                    announced: founded + Days::new(t),
                    amount_usd: amount,
                    stage: STAGES[rng.random_range(0..STAGES.len())],
                });
                if rng.random_bool(0.07) {
                    // same-day second round, exercises merging
                    rounds.push(FundingRound {
                        startup_id: id.clone(),
                        announced: founded + Days::new(t),
                        amount_usd: Some(Money::from_dollars(
                            rng.random_range(10..=5_000) * 1_000,
                        )),
                        stage: STAGES[rng.random_range(0..STAGES.len())],
                    });
                }
            }
        }
        (startups, rounds)
    }

    /// Every known amount multiplied by `c` (must keep cents integral).
    pub fn scale_amounts(rounds: &[FundingRound], c: f64) -> Vec<FundingRound> {
        rounds
            .iter()
            .map(|r| {
                let mut scaled = r.clone();
                scaled.amount_usd = r.amount_usd.map(|m| {
                    let cents = m.cents() as f64 * c;
                    assert_eq!(cents.fract(), 0.0, "scale factor must keep cents exact");
                    Money::from_cents(cents as i128)
                });
                scaled
            })
            .collect()
    }

    /// Every known amount divided by a whole-dollar divisor, exactly in
    /// cents. Panics when a division would lose precision.
    pub fn divide_amounts(rounds: &[FundingRound], divisor: i128) -> Vec<FundingRound> {
        rounds
            .iter()
            .map(|r| {
                let mut divided = r.clone();
                divided.amount_usd = r.amount_usd.map(|m| {
                    assert_eq!(m.cents() % divisor, 0, "divisor must divide cents exactly");
                    Money::from_cents(m.cents() / divisor)
                });
                divided
            })
            .collect()
    }

    /// Every date shifted forward by `days`.
    pub fn shift_days(
        startups: &[Startup],
        rounds: &[FundingRound],
        days: u64,
    ) -> (Vec<Startup>, Vec<FundingRound>) {
        let startups = startups
            .iter()
            .map(|s| Startup {
                founded: s.founded + Days::new(days),
                ..s.clone()
            })
            .collect();
        let rounds = rounds
            .iter()
            .map(|r| FundingRound {
                announced: r.announced + Days::new(days),
                ..r.clone()
            })
            .collect();
        (startups, rounds)
    }

    /// Every date shifted forward by whole calendar years. 28-year shifts
    /// preserve the leap pattern (and so every day offset) for 1900-2099.
    pub fn shift_years(
        startups: &[Startup],
        rounds: &[FundingRound],
        years: i32,
    ) -> (Vec<Startup>, Vec<FundingRound>) {
        let shift = |d: NaiveDate| {
            NaiveDate::from_ymd_opt(d.year() + years, d.month(), d.day())
                .expect("shifted date exists")
        };
        let startups = startups
            .iter()
            .map(|s| Startup {
                founded: shift(s.founded),
                ..s.clone()
            })
            .collect();
        let rounds = rounds
            .iter()
            .map(|r| FundingRound {
                announced: shift(r.announced),
                ..r.clone()
            })
            .collect();
        (startups, rounds)
    }
}

// ---------------------------------------------------------------------------
// XML well-formedness (enough for the SVG contract)
// ---------------------------------------------------------------------------

/// Checks tag balance, attribute quoting and single-root structure.
pub fn assert_well_formed_xml(text: &str) {
    let mut stack: Vec<String> = Vec::new();
    let mut roots = 0usize;
    let mut rest = text;
    while let Some(open) = rest.find('<') {
        let after = &rest[open + 1..];
        let close = after.find('>').expect("unclosed tag");
        let tag = &after[..close];
        rest = &after[close + 1..];
        assert!(
            tag.bytes().filter(|&b| b == b'"').count() % 2 == 0,
            "unbalanced attribute quotes in <{tag}>"
        );
        if tag.starts_with('?') || tag.starts_with('!') {
            continue;
        }
        if let Some(name) = tag.strip_prefix('/') {
            let top = stack.pop().unwrap_or_else(|| panic!("stray </{name}>"));
            assert_eq!(top, name.trim(), "mismatched closing tag");
            if stack.is_empty() {
                roots += 1;
            }
        } else if tag.ends_with('/') {
            if stack.is_empty() {
                roots += 1;
            }
        } else {
            let name = tag.split_whitespace().next().expect("tag name");
            stack.push(name.to_string());
        }
    }
    assert!(stack.is_empty(), "unclosed tags: {stack:?}");
    assert_eq!(roots, 1, "expected exactly one root element");
}
