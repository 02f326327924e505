//! Batch driver: enumerate registry cases for a suite, run them in
//! parallel, and assemble a deterministic report document.
//!
//! Determinism contract: with a fixed configuration the report document is
//! byte-identical across runs and thread counts. Cases are enumerated in
//! registry order then ascending parameter order; per-case sample streams
//! derive from the root seed and the case identity, never from scheduling;
//! reports are assembled in enumeration order; timing fields are emitted
//! only when explicitly requested.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicBool, Ordering};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::congruences::{
    self, CongruenceCase, ParamKind, PrimeCase, PrimeId, CONGRUENCE_REGISTRY, PRIME_REGISTRY,
};
use crate::error::{Error, Result};
use crate::identities::{
    self, IdentityCase, IdentityId, IdentityMeta, IDENTITY_REGISTRY,
};
use crate::oracles::{self, OracleId, ORACLE_REGISTRY};
use crate::qpoly::Rational;
use crate::report::{CheckReport, Status};
use crate::sample::{case_seed, SplitMix64};

pub const REPORT_VERSION: &str = "1";
/// Environment variable that overrides the configured thread count.
pub const THREADS_ENV_VAR: &str = "QVERIFY_THREADS";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Identities,
    Congruences,
    Primes,
    Oracles,
    All,
}

impl std::str::FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "identities" => Ok(Suite::Identities),
            "congruences" => Ok(Suite::Congruences),
            "primes" => Ok(Suite::Primes),
            "oracles" => Ok(Suite::Oracles),
            "all" => Ok(Suite::All),
            other => Err(Error::Config(format!("unknown suite: {other}"))),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteConfig {
    pub suite: Suite,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub id_filter: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_max: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_list: Option<Vec<i64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<u32>,
    pub seed: u64,
    pub fail_fast: bool,
    /// Thread count; `None` uses the rayon default. Not echoed into the
    /// report: the document must not depend on it.
    #[serde(skip)]
    pub threads: Option<usize>,
    /// Emit per-case and total wall-clock timings. Off by default so that
    /// identical configurations produce byte-identical reports.
    #[serde(skip)]
    pub timings: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub corpus: Option<String>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            suite: Suite::All,
            id_filter: None,
            n: None,
            n_max: None,
            n_list: None,
            m: None,
            d: None,
            p: None,
            r: None,
            trials: None,
            seed: 42,
            fail_fast: false,
            threads: None,
            timings: false,
            corpus: None,
        }
    }
}

impl SuiteConfig {
    fn wants(&self, name: &str, in_default_suite: bool) -> bool {
        match &self.id_filter {
            Some(f) => f == name,
            None => in_default_suite,
        }
    }

    fn n_values(&self, lo: i64, hi: i64, odd_only: bool) -> Vec<i64> {
        if let Some(n) = self.n {
            return vec![n];
        }
        if let Some(list) = &self.n_list {
            return list.clone();
        }
        let hi = self.n_max.map_or(hi, |m| m.min(hi));
        (lo..=hi)
            .filter(|n| !odd_only || n % 2 == 1)
            .collect()
    }

    fn trials_for(&self, default: u32) -> u32 {
        self.trials.unwrap_or(default).max(1)
    }
}

/// One schedulable unit of work.
#[derive(Clone, Debug)]
enum WorkItem {
    Identity {
        id: IdentityId,
        n: i64,
        extra: BTreeMap<String, i64>,
        trial: u32,
        /// Pinned sample from a corpus entry; disables resampling.
        sample: Option<BTreeMap<String, Rational>>,
        seed_override: Option<u64>,
    },
    Congruence(CongruenceCase),
    Prime(PrimeCase),
    Oracle(OracleId),
}

/// The report document: config echo, per-case outcomes in deterministic
/// order, and a summary.
#[derive(Clone, Debug, Serialize)]
pub struct ReportDocument {
    pub version: String,
    pub config: SuiteConfig,
    pub cases: Vec<CheckReport>,
    pub summary: Summary,
}

#[derive(Clone, Debug, Serialize, Default)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub error: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_millis: Option<u64>,
}

impl ReportDocument {
    pub fn all_passed(&self) -> bool {
        self.summary.fail == 0 && self.summary.error == 0
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

pub fn run_suite(config: &SuiteConfig) -> Result<ReportDocument> {
    let items = match &config.corpus {
        Some(path) => corpus_items(path)?,
        None => enumerate(config),
    };
    let started = Instant::now();
    let reports = execute(config, items);
    let mut summary = Summary::default();
    for r in &reports {
        match r.status {
            Status::Pass => summary.pass += 1,
            Status::Fail => summary.fail += 1,
            Status::Error => summary.error += 1,
        }
    }
    if config.timings {
        summary.wall_millis = Some(started.elapsed().as_millis() as u64);
    }
    Ok(ReportDocument {
        version: REPORT_VERSION.into(),
        config: config.clone(),
        cases: reports,
        summary,
    })
}

fn execute(config: &SuiteConfig, items: Vec<WorkItem>) -> Vec<CheckReport> {
    let pool = build_pool(config.threads);
    let stop = AtomicBool::new(false);
    let run_one = |item: &WorkItem| -> Option<CheckReport> {
        if stop.load(Ordering::Relaxed) {
            return None;
        }
        let started = Instant::now();
        let mut report = run_item(config, item);
        if config.timings {
            report.elapsed_micros = Some(started.elapsed().as_micros() as u64);
        }
        if config.fail_fast && report.status != Status::Pass {
            stop.store(true, Ordering::Relaxed);
        }
        Some(report)
    };
    let reports: Vec<Option<CheckReport>> = match &pool {
        Some(pool) => pool.install(|| items.par_iter().map(run_one).collect()),
        None => items.par_iter().map(run_one).collect(),
    };
    if config.fail_fast {
        // Keep the deterministic prefix up to and including the first
        // non-pass; anything scheduled after a stop may be missing anyway.
        let mut out = Vec::new();
        for r in reports.into_iter().flatten() {
            let bad = r.status != Status::Pass;
            out.push(r);
            if bad {
                break;
            }
        }
        out
    } else {
        reports.into_iter().flatten().collect()
    }
}

fn build_pool(threads: Option<usize>) -> Option<rayon::ThreadPool> {
    let threads = std::env::var(THREADS_ENV_VAR)
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .or(threads)?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .ok()
}

fn run_item(config: &SuiteConfig, item: &WorkItem) -> CheckReport {
    match item {
        WorkItem::Identity {
            id,
            n,
            extra,
            trial,
            sample,
            seed_override,
        } => run_identity(config, *id, *n, extra, *trial, sample.as_ref(), *seed_override),
        WorkItem::Congruence(case) => congruences::verify_congruence(case),
        WorkItem::Prime(case) => congruences::verify_prime_congruence(case),
        WorkItem::Oracle(id) => oracles::run_oracle(*id, config.seed),
    }
}

fn run_identity(
    config: &SuiteConfig,
    id: IdentityId,
    n: i64,
    extra: &BTreeMap<String, i64>,
    trial: u32,
    pinned: Option<&BTreeMap<String, Rational>>,
    seed_override: Option<u64>,
) -> CheckReport {
    let meta = identities::identity_meta(id);
    let extras: Vec<(&str, i64)> = extra.iter().map(|(k, &v)| (k.as_str(), v)).collect();
    let seed = seed_override.unwrap_or_else(|| case_seed(config.seed, meta.name, n, &extras, trial));
    if let Some(sample) = pinned {
        let case = IdentityCase {
            id,
            n,
            extra: extra.clone(),
            sample: sample.clone(),
            seed,
        };
        return identities::verify_identity(&case);
    }
    let mut rng = SplitMix64::new(seed);
    let mut last = None;
    // Singular draws (parameters landing on a vanishing denominator factor)
    // are redrawn deterministically from the same stream.
    for _attempt in 0..64 {
        let sample: BTreeMap<String, Rational> = meta
            .rational_params
            .iter()
            .map(|name| (name.to_string(), rng.small_rational()))
            .collect();
        let case = IdentityCase {
            id,
            n,
            extra: extra.clone(),
            sample,
            seed,
        };
        let report = identities::verify_identity(&case);
        let singular = report.status == Status::Error
            && report
                .detail
                .as_deref()
                .map_or(false, |d| d.contains("vanish identically"));
        if !singular {
            return report;
        }
        last = Some(report);
    }
    last.expect("at least one attempt ran")
}

fn enumerate(config: &SuiteConfig) -> Vec<WorkItem> {
    let mut items = Vec::new();
    let suite = config.suite;
    if matches!(suite, Suite::Identities | Suite::All) {
        enumerate_identities(config, &mut items);
    }
    if matches!(suite, Suite::Congruences | Suite::All) {
        enumerate_congruences(config, &mut items);
    }
    if matches!(suite, Suite::Primes | Suite::All) {
        enumerate_primes(config, &mut items);
    }
    if matches!(suite, Suite::Oracles | Suite::All) {
        for meta in ORACLE_REGISTRY {
            if config.wants(meta.name, true) {
                items.push(WorkItem::Oracle(meta.id));
            }
        }
    }
    // An explicit id must match something in some requested suite.
    items
}

fn extra_ranges(meta: &IdentityMeta, config: &SuiteConfig, n: i64) -> Vec<BTreeMap<String, i64>> {
    let mut out = vec![BTreeMap::new()];
    for name in meta.integer_params {
        debug_assert_eq!(*name, "m", "only m-type extras exist in the registry");
        let values: Vec<i64> = match config.m {
            Some(m) => vec![m],
            None => {
                let hi = default_m_max(meta.id, n);
                (1..=hi).collect()
            }
        };
        let mut next = Vec::new();
        for base in &out {
            for v in &values {
                let mut map = base.clone();
                map.insert(name.to_string(), *v);
                next.push(map);
            }
        }
        out = next;
    }
    out
}

/// Default ranges of the named integer parameter for the identity suite.
fn default_m_max(id: IdentityId, _n: i64) -> i64 {
    match id {
        IdentityId::GenM => 6,
        IdentityId::EquivForm => 4,
        _ => 1,
    }
}

fn enumerate_identities(config: &SuiteConfig, items: &mut Vec<WorkItem>) {
    for meta in IDENTITY_REGISTRY {
        if !config.wants(meta.name, meta.in_default_suite) {
            continue;
        }
        let (lo, hi, odd) = meta.default_n;
        for n in config.n_values(lo, hi, odd) {
            for extra in extra_ranges(meta, config, n) {
                for trial in 0..config.trials_for(meta.default_trials) {
                    items.push(WorkItem::Identity {
                        id: meta.id,
                        n,
                        extra: extra.clone(),
                        trial,
                        sample: None,
                        seed_override: None,
                    });
                }
            }
        }
    }
}

fn enumerate_congruences(config: &SuiteConfig, items: &mut Vec<WorkItem>) {
    for meta in CONGRUENCE_REGISTRY {
        if !config.wants(meta.name, true) {
            continue;
        }
        for n in config.n_values(3, meta.default_n_max, true) {
            match meta.param {
                ParamKind::None => {
                    items.push(WorkItem::Congruence(CongruenceCase::new(meta.id, n)));
                }
                ParamKind::M => {
                    let ms: Vec<i64> = match config.m {
                        Some(m) => vec![m],
                        None => (1..=(n + 1) / 2).collect(),
                    };
                    for m in ms {
                        items.push(WorkItem::Congruence(CongruenceCase::with_param(
                            meta.id, n, "m", m,
                        )));
                    }
                }
                ParamKind::D => {
                    let ds: Vec<i64> = match config.d {
                        Some(d) => vec![d],
                        None => (-(n - 3) / 2..=(n - 3) / 2).collect(),
                    };
                    for d in ds {
                        items.push(WorkItem::Congruence(CongruenceCase::with_param(
                            meta.id, n, "d", d,
                        )));
                    }
                }
            }
        }
    }
}

/// Odd primes up to the default prime-suite bound.
pub fn default_primes() -> Vec<u64> {
    (3..=97).filter(|&p| congruences::is_odd_prime(p)).collect()
}

/// Cap on |d| in the default RISE_MODP2 sweep; the bound (p^r - 3)/2 is
/// exercised exhaustively whenever it is at most this cap.
pub const PRIME_D_CAP: i64 = 10;

fn enumerate_primes(config: &SuiteConfig, items: &mut Vec<WorkItem>) {
    let primes: Vec<u64> = match config.p {
        Some(p) => vec![p],
        None => default_primes(),
    };
    for meta in PRIME_REGISTRY {
        if !config.wants(meta.name, true) {
            continue;
        }
        for &p in &primes {
            match meta.id {
                PrimeId::StModP | PrimeId::SunModP2 => {
                    let rs: Vec<u32> = match config.r {
                        Some(r) => vec![r],
                        None => vec![1, 2],
                    };
                    for r in rs {
                        items.push(WorkItem::Prime(PrimeCase {
                            id: meta.id,
                            p,
                            r,
                            param: 0,
                        }));
                    }
                }
                PrimeId::RiseModP => {
                    let ms: Vec<i64> = match config.m {
                        Some(m) => vec![m],
                        None => (1..=(p as i64 + 1) / 2).collect(),
                    };
                    for m in ms {
                        items.push(WorkItem::Prime(PrimeCase {
                            id: meta.id,
                            p,
                            r: 1,
                            param: m,
                        }));
                    }
                }
                PrimeId::RiseModP2 => {
                    let rs: Vec<u32> = match config.r {
                        Some(r) => vec![r],
                        None => vec![1, 2],
                    };
                    for r in rs {
                        let pr = (p as i64).pow(r);
                        let bound = ((pr - 3) / 2).min(PRIME_D_CAP);
                        let ds: Vec<i64> = match config.d {
                            Some(d) => vec![d],
                            None => (-bound..=bound).collect(),
                        };
                        for d in ds {
                            items.push(WorkItem::Prime(PrimeCase {
                                id: meta.id,
                                p,
                                r,
                                param: d,
                            }));
                        }
                    }
                }
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Corpus files
// ---------------------------------------------------------------------------

/// One corpus record. `sample` values are rationals in `num/den` text form;
/// explicit samples override the seeded generator so specific parameter
/// points can be pinned for regression.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CorpusEntry {
    pub id: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<i64>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<String, i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sample: Option<BTreeMap<String, String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<u32>,
}

fn parse_rational(s: &str) -> Result<Rational> {
    s.parse::<Rational>()
        .map_err(|e| Error::Config(format!("bad rational {s:?}: {e}")))
}

fn corpus_items(path: &str) -> Result<Vec<WorkItem>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read corpus {path}: {e}")))?;
    let entries: Vec<CorpusEntry> = serde_json::from_str(&text)
        .map_err(|e| Error::Config(format!("corpus {path} is not valid JSON: {e}")))?;
    let mut items = Vec::new();
    for entry in entries {
        items.push(corpus_item(&entry)?);
    }
    Ok(items)
}

fn corpus_item(entry: &CorpusEntry) -> Result<WorkItem> {
    if let Some(meta) = identities::identity_by_name(&entry.id) {
        let n = entry
            .n
            .ok_or_else(|| Error::ParamMissing(format!("{}: n", entry.id)))?;
        let sample = match &entry.sample {
            Some(map) => {
                let mut out = BTreeMap::new();
                for (k, v) in map {
                    out.insert(k.clone(), parse_rational(v)?);
                }
                Some(out)
            }
            None => None,
        };
        return Ok(WorkItem::Identity {
            id: meta.id,
            n,
            extra: entry.params.clone(),
            trial: 0,
            sample,
            seed_override: entry.seed,
        });
    }
    if let Some(meta) = congruences::congruence_by_name(&entry.id) {
        let n = entry
            .n
            .ok_or_else(|| Error::ParamMissing(format!("{}: n", entry.id)))?;
        return Ok(WorkItem::Congruence(CongruenceCase {
            id: meta.id,
            n,
            params: entry.params.clone(),
        }));
    }
    if let Some(meta) = congruences::prime_by_name(&entry.id) {
        let p = entry
            .p
            .ok_or_else(|| Error::ParamMissing(format!("{}: p", entry.id)))?;
        let param = entry
            .params
            .get("m")
            .or_else(|| entry.params.get("d"))
            .copied()
            .unwrap_or(0);
        return Ok(WorkItem::Prime(PrimeCase {
            id: meta.id,
            p,
            r: entry.r.unwrap_or(1),
            param,
        }));
    }
    if let Some(meta) = oracles::oracle_by_name(&entry.id) {
        return Ok(WorkItem::Oracle(meta.id));
    }
    Err(Error::UnknownId(entry.id.clone()))
}

// ---------------------------------------------------------------------------
// Registry listing (for the `list` command)
// ---------------------------------------------------------------------------

pub struct RegistryRow {
    pub name: &'static str,
    pub suite: Suite,
    pub statement: &'static str,
    pub params: String,
    pub default_range: String,
}

pub fn registry_rows(suite: Option<Suite>) -> Vec<RegistryRow> {
    let mut rows = Vec::new();
    let want = |s: Suite| suite.is_none() || suite == Some(s) || suite == Some(Suite::All);
    if want(Suite::Identities) {
        for meta in IDENTITY_REGISTRY {
            let mut params: Vec<String> = vec!["n".into()];
            params.extend(meta.integer_params.iter().map(|s| s.to_string()));
            params.extend(meta.rational_params.iter().map(|s| format!("{s} (sampled)")));
            let (lo, hi, odd) = meta.default_n;
            rows.push(RegistryRow {
                name: meta.name,
                suite: Suite::Identities,
                statement: meta.statement,
                params: params.join(", "),
                default_range: format!(
                    "n in [{lo}, {hi}]{}, {} trials{}",
                    if odd { " odd" } else { "" },
                    meta.default_trials,
                    if meta.in_default_suite {
                        ""
                    } else {
                        " (excluded from default suites)"
                    }
                ),
            });
        }
    }
    if want(Suite::Congruences) {
        for meta in CONGRUENCE_REGISTRY {
            let params = match meta.param {
                ParamKind::None => "n".to_string(),
                ParamKind::M => "n, m in [1, (n+1)/2]".to_string(),
                ParamKind::D => "n, d in [-(n-3)/2, (n-3)/2]".to_string(),
            };
            rows.push(RegistryRow {
                name: meta.name,
                suite: Suite::Congruences,
                statement: meta.statement,
                params,
                default_range: format!(
                    "odd n in [3, {}], mod Phi_n^{}",
                    meta.default_n_max, meta.ring_power
                ),
            });
        }
    }
    if want(Suite::Primes) {
        for meta in PRIME_REGISTRY {
            let params = match meta.param {
                ParamKind::None => "p, r".to_string(),
                ParamKind::M => "p, m in [1, (p+1)/2]".to_string(),
                ParamKind::D => format!("p, r, d with p^r > 2|d|+1 (|d| <= {PRIME_D_CAP} by default)"),
            };
            rows.push(RegistryRow {
                name: meta.name,
                suite: Suite::Primes,
                statement: meta.statement,
                params,
                default_range: "odd primes p <= 97, r in {1, 2}".to_string(),
            });
        }
    }
    if want(Suite::Oracles) {
        for meta in ORACLE_REGISTRY {
            rows.push(RegistryRow {
                name: meta.name,
                suite: Suite::Oracles,
                statement: meta.statement,
                params: "(fixed ranges)".to_string(),
                default_range: "see statement".to_string(),
            });
        }
    }
    if let Some(Suite::All) = suite {
        // already included everything
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_config() -> SuiteConfig {
        SuiteConfig {
            suite: Suite::Identities,
            id_filter: Some("CARLITZ".into()),
            n_max: Some(4),
            trials: Some(2),
            seed: 42,
            ..SuiteConfig::default()
        }
    }

    #[test]
    fn identity_suite_runs_and_passes() {
        let doc = run_suite(&tiny_config()).unwrap();
        assert!(doc.all_passed(), "{:?}", doc.cases.iter().find(|c| !c.passed()));
        // n in 0..=4, 2 trials each
        assert_eq!(doc.cases.len(), 10);
    }

    #[test]
    fn reports_are_deterministic_across_thread_counts() {
        let mut config = tiny_config();
        config.threads = Some(1);
        let doc1 = run_suite(&config).unwrap().to_json();
        config.threads = Some(4);
        let doc2 = run_suite(&config).unwrap().to_json();
        assert_eq!(doc1, doc2);
    }

    #[test]
    fn congruence_filter_runs() {
        let config = SuiteConfig {
            suite: Suite::Congruences,
            id_filter: Some("LIU_SQ".into()),
            n_max: Some(9),
            ..SuiteConfig::default()
        };
        let doc = run_suite(&config).unwrap();
        assert_eq!(doc.cases.len(), 4); // n = 3, 5, 7, 9
        assert!(doc.all_passed());
    }

    #[test]
    fn single_case_override() {
        let config = SuiteConfig {
            suite: Suite::Congruences,
            id_filter: Some("TH_MAIN_M".into()),
            n: Some(9),
            m: Some(5),
            ..SuiteConfig::default()
        };
        let doc = run_suite(&config).unwrap();
        assert_eq!(doc.cases.len(), 1);
        assert!(doc.all_passed());
        // m = 6 is out of range -> error status
        let config = SuiteConfig {
            m: Some(6),
            ..config
        };
        let doc = run_suite(&config).unwrap();
        assert_eq!(doc.cases[0].status, Status::Error);
        assert!(!doc.all_passed());
    }

    #[test]
    fn fail_fast_stops_after_first_failure() {
        let config = SuiteConfig {
            suite: Suite::Identities,
            id_filter: Some("OP_AA_PRINTED".into()),
            n_list: Some(vec![2, 3, 4]),
            trials: Some(1),
            fail_fast: true,
            ..SuiteConfig::default()
        };
        let doc = run_suite(&config).unwrap();
        assert_eq!(doc.cases.len(), 1);
        assert_eq!(doc.cases[0].status, Status::Fail);
    }
}
