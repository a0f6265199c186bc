//! Dataset ingestion: CSV/JSON parsing, record validation, stage-label and
//! geography mapping, founding-year filters.
//!
//! Every rejected input record produces exactly one [`RawRecordError`];
//! records matching no configured ecosystem are excluded, not errors, so per
//! file: records = accepted + excluded_by_geography + errors.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fs;
use std::path::Path;

use chrono::{Datelike, NaiveDate};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::domain::{
    EcosystemConfig, FundingRound, FundingStage, MatchRules, Money, Startup, StartupId,
};

/// Why a record was rejected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum RecordErrorKind {
    MissingField,
    BadDate,
    BadAmount,
    UnknownStage,
    RoundBeforeFounding,
    OrphanRound,
    DuplicateId,
}

impl fmt::Display for RecordErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RecordErrorKind::MissingField => "MissingField",
            RecordErrorKind::BadDate => "BadDate",
            RecordErrorKind::BadAmount => "BadAmount",
            RecordErrorKind::UnknownStage => "UnknownStage",
            RecordErrorKind::RoundBeforeFounding => "RoundBeforeFounding",
            RecordErrorKind::OrphanRound => "OrphanRound",
            RecordErrorKind::DuplicateId => "DuplicateId",
        })
    }
}

/// One rejected input record. `line_or_index` is the 1-based line number for
/// CSV sources and the 0-based array index for JSON sources.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RawRecordError {
    pub file: String,
    pub line_or_index: u64,
    pub field: String,
    pub reason: RecordErrorKind,
}

impl fmt::Display for RawRecordError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{}: {} ({})",
            self.file, self.line_or_index, self.reason, self.field
        )
    }
}

/// Errors that abort a load entirely (as opposed to per-record rejects).
#[derive(Debug, Error)]
pub enum IngestError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    BadFile { path: String, message: String },
    #[error("configuration error: {0}")]
    Config(String),
}

/// Input file format. Inferred from the extension when not stated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FileFormat {
    Csv,
    Json,
}

impl FileFormat {
    pub fn from_path(path: &Path) -> FileFormat {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("json") => FileFormat::Json,
            _ => FileFormat::Csv,
        }
    }
}

/// Case-insensitive raw stage label → canonical stage mapping.
///
/// The default map sends seed/angel/pre-seed to `Seed`, "series a" through
/// "series e" to the matching series, and everything else to `Other` via the
/// `"*"` catch-all. A user-supplied map replaces the default entirely; omit
/// `"*"` to turn unmapped labels into `UnknownStage` record errors.
#[derive(Debug, Clone, PartialEq)]
pub struct StageMap {
    entries: BTreeMap<String, FundingStage>,
    catch_all: Option<FundingStage>,
}

impl Default for StageMap {
    fn default() -> Self {
        let mut entries = BTreeMap::new();
        for label in ["seed", "angel", "pre-seed", "pre seed", "preseed"] {
            entries.insert(label.to_string(), FundingStage::Seed);
        }
        let series = [
            ("series a", FundingStage::SeriesA),
            ("series b", FundingStage::SeriesB),
            ("series c", FundingStage::SeriesC),
            ("series d", FundingStage::SeriesD),
            ("series e", FundingStage::SeriesE),
        ];
        for (label, stage) in series {
            entries.insert(label.to_string(), stage);
        }
        StageMap {
            entries,
            catch_all: Some(FundingStage::Other),
        }
    }
}

impl StageMap {
    pub fn resolve(&self, raw_label: &str) -> Option<FundingStage> {
        let key = raw_label.trim().to_lowercase();
        self.entries.get(&key).copied().or(self.catch_all)
    }

    /// Builds a map from raw-label → canonical-stage-name pairs; the key
    /// `"*"` sets the catch-all.
    pub fn from_pairs<'a>(
        pairs: impl IntoIterator<Item = (&'a str, &'a str)>,
    ) -> Result<StageMap, IngestError> {
        let mut entries = BTreeMap::new();
        let mut catch_all = None;
        for (raw, canonical) in pairs {
            let stage = FundingStage::from_canonical(canonical).ok_or_else(|| {
                IngestError::Config(format!(
                    "stage_map: {canonical:?} is not a canonical stage (expected one of \
                     Seed, SeriesA..SeriesE, Other)"
                ))
            })?;
            if raw.trim() == "*" {
                catch_all = Some(stage);
            } else {
                entries.insert(raw.trim().to_lowercase(), stage);
            }
        }
        Ok(StageMap { entries, catch_all })
    }
}

#[derive(Deserialize)]
struct ConfigDoc {
    ecosystems: Vec<EcosystemDoc>,
    #[serde(default)]
    stage_map: Option<BTreeMap<String, String>>,
}

#[derive(Deserialize)]
struct EcosystemDoc {
    name: String,
    #[serde(default)]
    r#match: MatchDoc,
    ppp_divisor_usd: f64,
}

#[derive(Deserialize, Default)]
struct MatchDoc {
    #[serde(default)]
    cities: Vec<String>,
    #[serde(default)]
    regions: Vec<String>,
    #[serde(default)]
    countries: Vec<String>,
}

/// Parsed run configuration: ecosystem definitions plus the stage map.
#[derive(Debug, Clone)]
pub struct AppConfig {
    pub ecosystems: Vec<EcosystemConfig>,
    pub stage_map: StageMap,
}

impl AppConfig {
    pub fn load(path: &Path) -> Result<AppConfig, IngestError> {
        let text = fs::read_to_string(path).map_err(|source| IngestError::Io {
            path: path.display().to_string(),
            source,
        })?;
        let doc: ConfigDoc = serde_json::from_str(&text).map_err(|e| IngestError::BadFile {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        if doc.ecosystems.is_empty() {
            return Err(IngestError::Config("no ecosystems configured".into()));
        }
        let mut seen = BTreeSet::new();
        let mut ecosystems = Vec::with_capacity(doc.ecosystems.len());
        for e in doc.ecosystems {
            if !seen.insert(e.name.clone()) {
                return Err(IngestError::Config(format!(
                    "duplicate ecosystem name {:?}",
                    e.name
                )));
            }
            if !e.ppp_divisor_usd.is_finite() || e.ppp_divisor_usd <= 0.0 {
                return Err(IngestError::Config(format!(
                    "ecosystem {:?}: ppp_divisor_usd must be a positive number",
                    e.name
                )));
            }
            ecosystems.push(EcosystemConfig {
                name: e.name,
                match_rules: MatchRules {
                    cities: e.r#match.cities,
                    regions: e.r#match.regions,
                    countries: e.r#match.countries,
                },
                ppp_divisor_usd: e.ppp_divisor_usd,
            });
        }
        let stage_map = match doc.stage_map {
            None => StageMap::default(),
            Some(pairs) => {
                StageMap::from_pairs(pairs.iter().map(|(k, v)| (k.as_str(), v.as_str())))?
            }
        };
        Ok(AppConfig {
            ecosystems,
            stage_map,
        })
    }
}

/// SHA-256 of a source file, recorded as dataset provenance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FileDigest {
    pub path: String,
    pub sha256: String,
}

fn digest_file(path: &Path) -> Result<FileDigest, IngestError> {
    let bytes = fs::read(path).map_err(|source| IngestError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let hash = Sha256::digest(&bytes);
    let hex: String = hash.iter().map(|b| format!("{b:02x}")).collect();
    Ok(FileDigest {
        path: path.display().to_string(),
        sha256: hex,
    })
}

/// A raw field bundle, one per input record, before validation.
struct RawFields {
    line_or_index: u64,
    values: BTreeMap<&'static str, String>,
}

fn read_records(
    path: &Path,
    format: FileFormat,
    columns: &[&'static str],
) -> Result<Vec<RawFields>, IngestError> {
    match format {
        FileFormat::Csv => read_csv_records(path, columns),
        FileFormat::Json => read_json_records(path, columns),
    }
}

fn read_csv_records(
    path: &Path,
    columns: &[&'static str],
) -> Result<Vec<RawFields>, IngestError> {
    let file = fs::File::open(path).map_err(|source| IngestError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let mut reader = csv::ReaderBuilder::new().flexible(true).from_reader(file);
    let headers = reader
        .headers()
        .map_err(|e| IngestError::BadFile {
            path: path.display().to_string(),
            message: e.to_string(),
        })?
        .clone();
    let mut positions = Vec::with_capacity(columns.len());
    for col in columns {
        let pos = headers.iter().position(|h| h.trim() == *col);
        match pos {
            Some(p) => positions.push(p),
            None => {
                return Err(IngestError::BadFile {
                    path: path.display().to_string(),
                    message: format!("missing column {col:?} in header"),
                })
            }
        }
    }
    let mut out = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| IngestError::BadFile {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        let mut values = BTreeMap::new();
        for (col, &pos) in columns.iter().zip(&positions) {
            values.insert(*col, record.get(pos).unwrap_or("").to_string());
        }
        out.push(RawFields {
            line_or_index: line,
            values,
        });
    }
    Ok(out)
}

fn read_json_records(
    path: &Path,
    columns: &[&'static str],
) -> Result<Vec<RawFields>, IngestError> {
    let text = fs::read_to_string(path).map_err(|source| IngestError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| IngestError::BadFile {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
    let array = value.as_array().ok_or_else(|| IngestError::BadFile {
        path: path.display().to_string(),
        message: "expected a top-level JSON array of records".into(),
    })?;
    let mut out = Vec::new();
    for (index, entry) in array.iter().enumerate() {
        let mut values = BTreeMap::new();
        for col in columns {
            let text = match entry.get(*col) {
                None | Some(serde_json::Value::Null) => String::new(),
                Some(serde_json::Value::String(s)) => s.clone(),
                Some(other) => other.to_string(),
            };
            values.insert(*col, text);
        }
        out.push(RawFields {
            line_or_index: index as u64,
            values,
        });
    }
    Ok(out)
}

fn parse_date(raw: &str) -> Option<NaiveDate> {
    NaiveDate::parse_from_str(raw.trim(), "%Y-%m-%d").ok()
}

pub const STARTUP_COLUMNS: [&str; 6] = ["id", "name", "founded", "city", "region", "country"];
pub const ROUND_COLUMNS: [&str; 4] = ["startup_id", "announced", "amount_usd", "stage"];

/// Result of loading a startups file.
#[derive(Debug, Clone)]
pub struct StartupLoad {
    /// Accepted startups, keyed by id.
    pub startups: BTreeMap<StartupId, Startup>,
    /// Ids of well-formed records that matched no configured ecosystem.
    pub excluded_ids: BTreeSet<StartupId>,
    pub errors: Vec<RawRecordError>,
    pub record_count: u64,
    /// Names of startups whose location matched more than one ecosystem
    /// (assigned to the first match, in configuration order).
    pub multi_match: Vec<String>,
    pub digest: FileDigest,
}

impl StartupLoad {
    pub fn accepted_count(&self) -> u64 {
        self.startups.len() as u64
    }
    pub fn excluded_count(&self) -> u64 {
        self.excluded_ids.len() as u64
    }
}

/// Parses and validates a startups file.
///
/// Validation order per record: required fields present, founded date parses,
/// id not already seen, then geography matching. The first failed check is
/// the record's single error.
pub fn load_startups(
    path: &Path,
    format: FileFormat,
    ecosystems: &[EcosystemConfig],
) -> Result<StartupLoad, IngestError> {
    let digest = digest_file(path)?;
    let records = read_records(path, format, &STARTUP_COLUMNS)?;
    let file_name = path.display().to_string();

    let mut startups = BTreeMap::new();
    let mut excluded_ids = BTreeSet::new();
    let mut errors = Vec::new();
    let mut multi_match = Vec::new();
    let mut seen_ids: BTreeSet<String> = BTreeSet::new();
    let record_count = records.len() as u64;

    for rec in records {
        let reject = |field: &str, reason: RecordErrorKind, errors: &mut Vec<RawRecordError>| {
            errors.push(RawRecordError {
                file: file_name.clone(),
                line_or_index: rec.line_or_index,
                field: field.to_string(),
                reason,
            });
        };
        let id = rec.values["id"].trim().to_string();
        if id.is_empty() {
            reject("id", RecordErrorKind::MissingField, &mut errors);
            continue;
        }
        let founded_raw = rec.values["founded"].trim();
        if founded_raw.is_empty() {
            reject("founded", RecordErrorKind::MissingField, &mut errors);
            continue;
        }
        let founded = match parse_date(founded_raw) {
            Some(d) => d,
            None => {
                reject("founded", RecordErrorKind::BadDate, &mut errors);
                continue;
            }
        };
        if !seen_ids.insert(id.clone()) {
            reject("id", RecordErrorKind::DuplicateId, &mut errors);
            continue;
        }
        let (city, region, country) = (
            rec.values["city"].as_str(),
            rec.values["region"].as_str(),
            rec.values["country"].as_str(),
        );
        let mut matches = ecosystems
            .iter()
            .filter(|e| e.match_rules.matches(city, region, country));
        match matches.next() {
            None => {
                excluded_ids.insert(StartupId(id));
            }
            Some(eco) => {
                if matches.next().is_some() {
                    multi_match.push(id.clone());
                }
                startups.insert(
                    StartupId(id.clone()),
                    Startup {
                        id: StartupId(id),
                        name: rec.values["name"].trim().to_string(),
                        founded,
                        ecosystem: eco.name.clone(),
                    },
                );
            }
        }
    }

    Ok(StartupLoad {
        startups,
        excluded_ids,
        errors,
        record_count,
        multi_match,
        digest,
    })
}

/// Result of loading a rounds file.
#[derive(Debug, Clone)]
pub struct RoundLoad {
    pub rounds: Vec<FundingRound>,
    pub errors: Vec<RawRecordError>,
    pub record_count: u64,
    /// Rounds whose startup was excluded by geography: not errors, and not
    /// part of the dataset.
    pub excluded_count: u64,
    pub digest: FileDigest,
}

impl RoundLoad {
    pub fn accepted_count(&self) -> u64 {
        self.rounds.len() as u64
    }
}

/// Parses and validates a rounds file against already-loaded startups.
///
/// Validation order per record: required fields, announced date, amount,
/// stage label, startup reference (geography-excluded startups swallow their
/// rounds without error), announced not before founding.
pub fn load_rounds(
    path: &Path,
    format: FileFormat,
    startups: &StartupLoad,
    stage_map: &StageMap,
) -> Result<RoundLoad, IngestError> {
    let digest = digest_file(path)?;
    let records = read_records(path, format, &ROUND_COLUMNS)?;
    let file_name = path.display().to_string();

    let mut rounds = Vec::new();
    let mut errors = Vec::new();
    let mut excluded_count = 0u64;
    let record_count = records.len() as u64;

    for rec in records {
        let reject = |field: &str, reason: RecordErrorKind, errors: &mut Vec<RawRecordError>| {
            errors.push(RawRecordError {
                file: file_name.clone(),
                line_or_index: rec.line_or_index,
                field: field.to_string(),
                reason,
            });
        };
        let startup_id = rec.values["startup_id"].trim().to_string();
        if startup_id.is_empty() {
            reject("startup_id", RecordErrorKind::MissingField, &mut errors);
            continue;
        }
        let announced_raw = rec.values["announced"].trim();
        if announced_raw.is_empty() {
            reject("announced", RecordErrorKind::MissingField, &mut errors);
            continue;
        }
        let announced = match parse_date(announced_raw) {
            Some(d) => d,
            None => {
                reject("announced", RecordErrorKind::BadDate, &mut errors);
                continue;
            }
        };
        // Empty amount means unknown; it is kept for round-count statistics
        // but never enters a speed computation.
        let amount_raw = rec.values["amount_usd"].trim();
        let amount_usd = if amount_raw.is_empty() {
            None
        } else {
            match Money::parse_usd(amount_raw) {
                Ok(m) => Some(m),
                Err(_) => {
                    reject("amount_usd", RecordErrorKind::BadAmount, &mut errors);
                    continue;
                }
            }
        };
        let stage_raw = rec.values["stage"].trim();
        if stage_raw.is_empty() {
            reject("stage", RecordErrorKind::MissingField, &mut errors);
            continue;
        }
        let stage = match stage_map.resolve(stage_raw) {
            Some(s) => s,
            None => {
                reject("stage", RecordErrorKind::UnknownStage, &mut errors);
                continue;
            }
        };
        let id = StartupId(startup_id);
        let startup = match startups.startups.get(&id) {
            Some(s) => s,
            None => {
                if startups.excluded_ids.contains(&id) {
                    excluded_count += 1;
                } else {
                    reject("startup_id", RecordErrorKind::OrphanRound, &mut errors);
                }
                continue;
            }
        };
        if announced < startup.founded {
            reject(
                "announced",
                RecordErrorKind::RoundBeforeFounding,
                &mut errors,
            );
            continue;
        }
        rounds.push(FundingRound {
            startup_id: id,
            announced,
            amount_usd,
            stage,
        });
    }

    Ok(RoundLoad {
        rounds,
        errors,
        record_count,
        excluded_count,
        digest,
    })
}

/// An immutable, validated dataset: startups keyed by id, rounds grouped per
/// startup and sorted by announcement date.
#[derive(Debug, Clone, Default)]
pub struct Dataset {
    startups: BTreeMap<StartupId, Startup>,
    rounds: BTreeMap<StartupId, Vec<FundingRound>>,
    provenance: Vec<FileDigest>,
}

impl Dataset {
    /// Builds a frozen dataset from load results. Every accepted round is
    /// guaranteed by `load_rounds` to reference an accepted startup.
    pub fn assemble(startups: StartupLoad, rounds: RoundLoad) -> Dataset {
        let provenance = vec![startups.digest.clone(), rounds.digest.clone()];
        Dataset::from_parts(
            startups.startups.into_values().collect(),
            rounds.rounds,
            provenance,
        )
    }

    /// Builds a dataset directly from in-memory records (used by tests and
    /// synthetic pipelines). Rounds referencing unknown startups are dropped.
    pub fn from_parts(
        startups: Vec<Startup>,
        rounds: Vec<FundingRound>,
        provenance: Vec<FileDigest>,
    ) -> Dataset {
        let startup_map: BTreeMap<StartupId, Startup> =
            startups.into_iter().map(|s| (s.id.clone(), s)).collect();
        let mut round_map: BTreeMap<StartupId, Vec<FundingRound>> = BTreeMap::new();
        for round in rounds {
            if startup_map.contains_key(&round.startup_id) {
                round_map
                    .entry(round.startup_id.clone())
                    .or_default()
                    .push(round);
            }
        }
        for list in round_map.values_mut() {
            list.sort_by_key(|r| r.announced);
        }
        Dataset {
            startups: startup_map,
            rounds: round_map,
            provenance,
        }
    }

    pub fn startups(&self) -> impl Iterator<Item = &Startup> {
        self.startups.values()
    }

    pub fn startup_count(&self) -> usize {
        self.startups.len()
    }

    pub fn rounds_of(&self, id: &StartupId) -> &[FundingRound] {
        self.rounds.get(id).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn round_count(&self) -> usize {
        self.rounds.values().map(Vec::len).sum()
    }

    pub fn provenance(&self) -> &[FileDigest] {
        &self.provenance
    }

    pub fn startups_in<'a>(&'a self, ecosystem: &'a str) -> impl Iterator<Item = &'a Startup> + 'a {
        self.startups.values().filter(move |s| s.ecosystem == ecosystem)
    }

    /// Startups with founding year in `[from_year, to_year]` inclusive, and
    /// only their rounds.
    pub fn filter_founded(&self, from_year: i32, to_year: i32) -> Dataset {
        debug_assert!(from_year <= to_year);
        let startups: Vec<Startup> = self
            .startups
            .values()
            .filter(|s| (from_year..=to_year).contains(&s.founded.year()))
            .cloned()
            .collect();
        let rounds: Vec<FundingRound> = startups
            .iter()
            .flat_map(|s| self.rounds_of(&s.id).iter().cloned())
            .collect();
        Dataset::from_parts(startups, rounds, self.provenance.clone())
    }
}
