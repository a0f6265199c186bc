//! Deterministic table rendering.
//!
//! CSV and JSON carry the same numbers: derived values are rounded to six
//! significant digits once, and both formats emit that rounded value. Raw
//! money sums stay exact decimal strings. Ordering is stable everywhere
//! (ecosystem order as configured, then ascending index), so identical runs
//! produce identical bytes.

use serde::Serialize;

use crate::distribution::{Pyramid, StageDistribution};
use crate::domain::IndicatorSeries;
use crate::ingest::{RawRecordError, RoundLoad, StartupLoad};

/// Significant digits used for derived (floating-point) values.
pub const SIG_DIGITS: usize = 6;

/// Formats a finite value with `sig` significant digits in plain decimal
/// notation (no exponent), trimming trailing fraction zeros.
pub fn fmt_sig(value: f64, sig: usize) -> String {
    debug_assert!(sig >= 1);
    if value == 0.0 {
        return "0".to_string();
    }
    if !value.is_finite() {
        return value.to_string();
    }
    let exp_form = format!("{:.*e}", sig - 1, value);
    let (mantissa, exp) = exp_form.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("exponent");
    let negative = mantissa.starts_with('-');
    let digits: String = mantissa.chars().filter(char::is_ascii_digit).collect();
    let point = exp + 1; // digit count left of the decimal point

    let mut out = String::new();
    if negative {
        out.push('-');
    }
    if point <= 0 {
        out.push_str("0.");
        for _ in 0..-point {
            out.push('0');
        }
        out.push_str(digits.trim_end_matches('0'));
    } else if point as usize >= digits.len() {
        out.push_str(&digits);
        for _ in 0..(point as usize - digits.len()) {
            out.push('0');
        }
    } else {
        out.push_str(&digits[..point as usize]);
        let frac = digits[point as usize..].trim_end_matches('0');
        if !frac.is_empty() {
            out.push('.');
            out.push_str(frac);
        }
    }
    out
}

/// The value as emitted: rounded to [`SIG_DIGITS`] significant digits.
pub fn round_sig(value: f64) -> f64 {
    fmt_sig(value, SIG_DIGITS).parse().expect("roundtrip")
}

fn csv_from_rows(header: &[&str], rows: Vec<Vec<String>>) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(header).expect("csv header");
    for row in rows {
        writer.write_record(&row).expect("csv row");
    }
    String::from_utf8(writer.into_inner().expect("csv flush")).expect("csv utf8")
}

fn json_string<T: Serialize>(doc: &T) -> String {
    let mut text = serde_json::to_string_pretty(doc).expect("json");
    text.push('\n');
    text
}

/// Column name for a series value, derived from its unit label:
/// `USD/year` → `value_usd_per_year`.
fn value_column(unit: &str) -> String {
    let slug: String = unit
        .to_ascii_lowercase()
        .replace('/', "_per_")
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
        .collect();
    let mut collapsed = String::with_capacity(slug.len());
    for c in slug.chars() {
        if c == '_' && collapsed.ends_with('_') {
            continue;
        }
        collapsed.push(c);
    }
    format!("value_{}", collapsed.trim_matches('_'))
}

#[derive(Serialize)]
struct PointDoc {
    index: i64,
    label: String,
    value: f64,
    n: u64,
}

#[derive(Serialize)]
struct SeriesEntryDoc {
    ecosystem: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    mode: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    nth_year: Option<u32>,
    unit: String,
    points: Vec<PointDoc>,
}

#[derive(Serialize)]
struct SeriesDoc {
    indicator: String,
    unit: String,
    series: Vec<SeriesEntryDoc>,
}

fn points_doc(series: &IndicatorSeries) -> Vec<PointDoc> {
    series
        .points
        .iter()
        .map(|p| PointDoc {
            index: p.index,
            label: p.label.clone(),
            value: round_sig(p.value),
            n: p.sample_count as u64,
        })
        .collect()
}

/// Speed (or any plain binned) series as CSV:
/// `ecosystem,bin_index,bin_label,value_…,sample_count`.
pub fn speed_csv(series: &[IndicatorSeries]) -> String {
    let unit = series.first().map(|s| s.unit.as_str()).unwrap_or("USD/year");
    let value_col = value_column(unit);
    let header = ["ecosystem", "bin_index", "bin_label", &value_col, "sample_count"];
    let rows = series
        .iter()
        .flat_map(|s| {
            s.points.iter().map(|p| {
                vec![
                    s.ecosystem.clone(),
                    p.index.to_string(),
                    p.label.clone(),
                    fmt_sig(p.value, SIG_DIGITS),
                    p.sample_count.to_string(),
                ]
            })
        })
        .collect();
    csv_from_rows(&header, rows)
}

pub fn speed_json(series: &[IndicatorSeries]) -> String {
    let unit = series
        .first()
        .map(|s| s.unit.clone())
        .unwrap_or_else(|| "USD/year".to_string());
    json_string(&SeriesDoc {
        indicator: "speed".to_string(),
        unit,
        series: series
            .iter()
            .map(|s| SeriesEntryDoc {
                ecosystem: s.ecosystem.clone(),
                mode: None,
                nth_year: None,
                unit: s.unit.clone(),
                points: points_doc(s),
            })
            .collect(),
    })
}

/// Acceleration series as CSV. `mode` is `absolute`, `percent`, or
/// `per-startup`; the unit travels per row because modes differ.
pub fn acceleration_csv(series: &[(String, IndicatorSeries)]) -> String {
    let header = [
        "ecosystem",
        "mode",
        "bin_index",
        "bin_label",
        "value",
        "unit",
        "sample_count",
    ];
    let rows = series
        .iter()
        .flat_map(|(mode, s)| {
            s.points.iter().map(move |p| {
                vec![
                    s.ecosystem.clone(),
                    mode.clone(),
                    p.index.to_string(),
                    p.label.clone(),
                    fmt_sig(p.value, SIG_DIGITS),
                    s.unit.clone(),
                    p.sample_count.to_string(),
                ]
            })
        })
        .collect();
    csv_from_rows(&header, rows)
}

pub fn acceleration_json(series: &[(String, IndicatorSeries)]) -> String {
    let unit = series
        .iter()
        .map(|(_, s)| s.unit.clone())
        .next()
        .unwrap_or_else(|| "USD million/year^2".to_string());
    json_string(&SeriesDoc {
        indicator: "acceleration".to_string(),
        unit,
        series: series
            .iter()
            .map(|(mode, s)| SeriesEntryDoc {
                ecosystem: s.ecosystem.clone(),
                mode: Some(mode.clone()),
                nth_year: None,
                unit: s.unit.clone(),
                points: points_doc(s),
            })
            .collect(),
    })
}

/// nth-year speed series as CSV:
/// `ecosystem,n,founding_year,value_…,sample_count`. Point indices are
/// founding years.
pub fn nth_year_csv(series: &[(u32, IndicatorSeries)]) -> String {
    let unit = series
        .first()
        .map(|(_, s)| s.unit.as_str())
        .unwrap_or("USD/year");
    let value_col = value_column(unit);
    let header = ["ecosystem", "n", "founding_year", &value_col, "sample_count"];
    let rows = series
        .iter()
        .flat_map(|(n, s)| {
            s.points.iter().map(move |p| {
                vec![
                    s.ecosystem.clone(),
                    n.to_string(),
                    p.index.to_string(),
                    fmt_sig(p.value, SIG_DIGITS),
                    p.sample_count.to_string(),
                ]
            })
        })
        .collect();
    csv_from_rows(&header, rows)
}

pub fn nth_year_json(series: &[(u32, IndicatorSeries)]) -> String {
    let unit = series
        .first()
        .map(|(_, s)| s.unit.clone())
        .unwrap_or_else(|| "USD/year".to_string());
    json_string(&SeriesDoc {
        indicator: "nth_year_speed".to_string(),
        unit,
        series: series
            .iter()
            .map(|(n, s)| SeriesEntryDoc {
                ecosystem: s.ecosystem.clone(),
                mode: None,
                nth_year: Some(*n),
                unit: s.unit.clone(),
                points: points_doc(s),
            })
            .collect(),
    })
}

#[derive(Serialize)]
struct DistRowDoc {
    stage: String,
    amount_share: f64,
    count_share: f64,
    amount_usd: String,
    round_count: u64,
}

#[derive(Serialize)]
struct DistTableDoc {
    ecosystem: String,
    rows: Vec<DistRowDoc>,
}

#[derive(Serialize)]
struct DistributionDoc {
    indicator: String,
    unit: String,
    period: [i32; 2],
    distributions: Vec<DistTableDoc>,
}

/// Per-ecosystem stage tables as CSV:
/// `ecosystem,stage,amount_share,count_share,amount_usd,round_count`.
/// Amounts are exact decimal USD, shares six significant digits.
pub fn distribution_csv(tables: &[StageDistribution]) -> String {
    let header = [
        "ecosystem",
        "stage",
        "amount_share",
        "count_share",
        "amount_usd",
        "round_count",
    ];
    let rows = tables
        .iter()
        .flat_map(|t| {
            t.rows().map(move |(stage, b)| {
                vec![
                    t.ecosystem.clone(),
                    stage.canonical_name().to_string(),
                    fmt_sig(b.amount_share, SIG_DIGITS),
                    fmt_sig(b.count_share, SIG_DIGITS),
                    b.amount_usd.to_string(),
                    b.count.to_string(),
                ]
            })
        })
        .collect();
    csv_from_rows(&header, rows)
}

pub fn distribution_json(tables: &[StageDistribution], period: (i32, i32)) -> String {
    json_string(&DistributionDoc {
        indicator: "stage_distribution".to_string(),
        unit: "share".to_string(),
        period: [period.0, period.1],
        distributions: tables
            .iter()
            .map(|t| DistTableDoc {
                ecosystem: t.ecosystem.clone(),
                rows: t
                    .rows()
                    .map(|(stage, b)| DistRowDoc {
                        stage: stage.canonical_name().to_string(),
                        amount_share: round_sig(b.amount_share),
                        count_share: round_sig(b.count_share),
                        amount_usd: b.amount_usd.to_string(),
                        round_count: b.count,
                    })
                    .collect(),
            })
            .collect(),
    })
}

#[derive(Serialize)]
struct PyramidRowDoc {
    stage: String,
    left_amount_share: f64,
    right_amount_share: f64,
    left_count_share: f64,
    right_count_share: f64,
}

#[derive(Serialize)]
struct PyramidTableDoc {
    left: String,
    right: String,
    rows: Vec<PyramidRowDoc>,
}

#[derive(Serialize)]
struct PyramidDoc {
    indicator: String,
    unit: String,
    period: [i32; 2],
    pyramid: PyramidTableDoc,
}

/// Two-sided pyramid table as CSV, stages ordered Seed → SeriesE → Other.
pub fn pyramid_csv(pyramid: &Pyramid) -> String {
    let header = [
        "stage",
        "left_ecosystem",
        "left_amount_share",
        "left_count_share",
        "right_ecosystem",
        "right_amount_share",
        "right_count_share",
    ];
    let rows = pyramid
        .rows
        .iter()
        .map(|r| {
            vec![
                r.stage.canonical_name().to_string(),
                pyramid.left.clone(),
                fmt_sig(r.left_amount_share, SIG_DIGITS),
                fmt_sig(r.left_count_share, SIG_DIGITS),
                pyramid.right.clone(),
                fmt_sig(r.right_amount_share, SIG_DIGITS),
                fmt_sig(r.right_count_share, SIG_DIGITS),
            ]
        })
        .collect();
    csv_from_rows(&header, rows)
}

pub fn pyramid_json(pyramid: &Pyramid, period: (i32, i32)) -> String {
    json_string(&PyramidDoc {
        indicator: "stage_distribution".to_string(),
        unit: "share".to_string(),
        period: [period.0, period.1],
        pyramid: PyramidTableDoc {
            left: pyramid.left.clone(),
            right: pyramid.right.clone(),
            rows: pyramid
                .rows
                .iter()
                .map(|r| PyramidRowDoc {
                    stage: r.stage.canonical_name().to_string(),
                    left_amount_share: round_sig(r.left_amount_share),
                    right_amount_share: round_sig(r.right_amount_share),
                    left_count_share: round_sig(r.left_count_share),
                    right_count_share: round_sig(r.right_count_share),
                })
                .collect(),
        },
    })
}

#[derive(Serialize)]
pub struct FileReport {
    pub path: String,
    pub sha256: String,
    pub records: u64,
    pub accepted: u64,
    pub excluded_by_geography: u64,
    pub error_count: u64,
    pub errors: Vec<RawRecordError>,
}

#[derive(Serialize)]
pub struct EcosystemReport {
    pub name: String,
    pub startups: u64,
    pub rounds: u64,
}

/// Validation report for `ecoindex validate`.
#[derive(Serialize)]
pub struct ValidationReport {
    pub files: Vec<FileReport>,
    pub ecosystems: Vec<EcosystemReport>,
    pub ok: bool,
}

impl ValidationReport {
    pub fn build(
        startups: &StartupLoad,
        rounds: &RoundLoad,
        ecosystem_order: &[String],
        round_counts: impl Fn(&str) -> u64,
        startup_counts: impl Fn(&str) -> u64,
    ) -> ValidationReport {
        let files = vec![
            FileReport {
                path: startups.digest.path.clone(),
                sha256: startups.digest.sha256.clone(),
                records: startups.record_count,
                accepted: startups.accepted_count(),
                excluded_by_geography: startups.excluded_count(),
                error_count: startups.errors.len() as u64,
                errors: startups.errors.clone(),
            },
            FileReport {
                path: rounds.digest.path.clone(),
                sha256: rounds.digest.sha256.clone(),
                records: rounds.record_count,
                accepted: rounds.accepted_count(),
                excluded_by_geography: rounds.excluded_count,
                error_count: rounds.errors.len() as u64,
                errors: rounds.errors.clone(),
            },
        ];
        let ecosystems = ecosystem_order
            .iter()
            .map(|name| EcosystemReport {
                name: name.clone(),
                startups: startup_counts(name),
                rounds: round_counts(name),
            })
            .collect();
        let ok = files.iter().all(|f| f.error_count == 0);
        ValidationReport {
            files,
            ecosystems,
            ok,
        }
    }

    pub fn to_json(&self) -> String {
        json_string(self)
    }

    pub fn to_csv(&self) -> String {
        let header = [
            "scope",
            "name",
            "records",
            "accepted",
            "excluded_by_geography",
            "errors",
            "startups",
            "rounds",
        ];
        let mut rows = Vec::new();
        for f in &self.files {
            rows.push(vec![
                "file".to_string(),
                f.path.clone(),
                f.records.to_string(),
                f.accepted.to_string(),
                f.excluded_by_geography.to_string(),
                f.error_count.to_string(),
                String::new(),
                String::new(),
            ]);
        }
        for e in &self.ecosystems {
            rows.push(vec![
                "ecosystem".to_string(),
                e.name.clone(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                e.startups.to_string(),
                e.rounds.to_string(),
            ]);
        }
        csv_from_rows(&header, rows)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for f in &self.files {
            out.push_str(&format!("file: {}\n", f.path));
            out.push_str(&format!("  sha256: {}\n", f.sha256));
            out.push_str(&format!("  records: {}\n", f.records));
            out.push_str(&format!("  accepted: {}\n", f.accepted));
            out.push_str(&format!(
                "  excluded_by_geography: {}\n",
                f.excluded_by_geography
            ));
            out.push_str(&format!("  errors: {}\n", f.error_count));
            for e in &f.errors {
                out.push_str(&format!("    {e}\n"));
            }
        }
        out.push_str("ecosystems:\n");
        for e in &self.ecosystems {
            out.push_str(&format!(
                "  {}: {} startups, {} rounds\n",
                e.name, e.startups, e.rounds
            ));
        }
        out
    }
}
