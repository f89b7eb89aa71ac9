//! Re-executable run configurations and the commands that emit documents.

use std::collections::BTreeSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::certificate::CertificateDocument;
use super::descriptor::{parse_group, parse_mode, parse_tower};
use super::table::{cov_table, to_csv, TableRow};
use crate::covering::{
    construct_intersecting_family, construct_k_covering, covering_condition, covering_condition_lhs, feasibility,
    ConstructOptions, GazdagParams,
};
use crate::error::{Error, Result};
use crate::group::Element;
use crate::round::sig12;
use crate::tower::{
    build_tower, dimension_estimate, sample_thin_set, translate_thin, ThinFunction, ThinSet, Tower, TowerDocument,
    TowerSpec,
};

/// Everything needed to regenerate a document. Fields are serialized in
/// declaration order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command")]
pub enum RunConfig {
    #[serde(rename = "covering construct")]
    CoveringConstruct {
        group: String,
        k: u32,
        l: Option<u64>,
        family: bool,
        seed: u64,
        max_attempts: u32,
        mode: Option<String>,
        out: Option<String>,
        format: String,
    },
    #[serde(rename = "tower build")]
    TowerBuild {
        spec: String,
        seed: u64,
        max_attempts: u32,
        mode: Option<String>,
        out: Option<String>,
        format: String,
    },
    #[serde(rename = "tower translate")]
    TowerTranslate {
        spec: Option<String>,
        tower: Option<String>,
        seed: u64,
        samples: u64,
        depth: Option<usize>,
        fullness: f64,
        set: Option<Vec<Element>>,
        max_attempts: u32,
        mode: Option<String>,
        out: Option<String>,
        format: String,
    },
    #[serde(rename = "tower dim")]
    TowerDim {
        spec: String,
        seed: u64,
        samples: u64,
        depth: Option<usize>,
        fullness: f64,
        set: Option<Vec<Element>>,
        out: Option<String>,
        format: String,
    },
    #[serde(rename = "cov-table")]
    CovTable {
        families: Vec<String>,
        n: Vec<u64>,
        k: Vec<u32>,
        seed: u64,
        max_attempts: u32,
        out: Option<String>,
        format: String,
    },
}

impl RunConfig {
    pub fn out(&self) -> Option<&str> {
        match self {
            RunConfig::CoveringConstruct { out, .. }
            | RunConfig::TowerBuild { out, .. }
            | RunConfig::TowerTranslate { out, .. }
            | RunConfig::TowerDim { out, .. }
            | RunConfig::CovTable { out, .. } => out.as_deref(),
        }
    }

    fn format(&self) -> &str {
        match self {
            RunConfig::CoveringConstruct { format, .. }
            | RunConfig::TowerBuild { format, .. }
            | RunConfig::TowerTranslate { format, .. }
            | RunConfig::TowerDim { format, .. }
            | RunConfig::CovTable { format, .. } => format,
        }
    }
}

/// Bytes of the produced document and whether every reported check passed.
#[derive(Debug, Clone)]
pub struct Output {
    pub bytes: Vec<u8>,
    pub passed: bool,
}

fn json<T: Serialize>(value: &T) -> Result<Vec<u8>> {
    let mut bytes = serde_json::to_vec_pretty(value)?;
    bytes.push(b'\n');
    Ok(bytes)
}

fn options(max_attempts: u32, mode: &Option<String>, seed: u64) -> Result<ConstructOptions> {
    let mut opts = ConstructOptions {
        max_attempts,
        ..ConstructOptions::default()
    };
    if let Some(m) = mode {
        let m = parse_mode(m)?;
        opts.mode = Some(m.to_mode(seed ^ 0x6d6f_6465));
        opts.sampled_trials = m.trials();
    }
    Ok(opts)
}

fn json_only(cfg: &RunConfig) -> Result<()> {
    match cfg.format() {
        "json" => Ok(()),
        "csv" if matches!(cfg, RunConfig::CovTable { .. }) => Ok(()),
        other => Err(Error::parse(other, "unsupported output format for this command")),
    }
}

/// Parameter checks a construction must pass before any seed is needed.
pub fn construct_precheck(group: &str, k: u32, l: Option<u64>, family: bool) -> Result<()> {
    let g = parse_group(group)?;
    let n = g.order();
    if family || l.is_some() {
        GazdagParams::new(n, k, l)?;
        return Ok(());
    }
    if n < 3 || k == 0 {
        return Err(Error::Precondition(format!("need n >= 3 and k >= 1, got n = {n}, k = {k}")));
    }
    if !feasibility(n, k)? {
        return Err(Error::Infeasible(format!("k = {k} is too large for n = {n}")));
    }
    if !covering_condition(n, k) {
        return Err(Error::Precondition(format!(
            "(4k)^k (k log n + log 2) = {:.3} is not below n = {n}",
            covering_condition_lhs(n, k)
        )));
    }
    Ok(())
}

pub fn execute(cfg: &RunConfig) -> Result<Output> {
    json_only(cfg)?;
    match cfg {
        RunConfig::CoveringConstruct {
            group,
            k,
            l,
            family,
            seed,
            max_attempts,
            mode,
            ..
        } => {
            construct_precheck(group, *k, *l, *family)?;
            let g = parse_group(group)?;
            let mut opts = options(*max_attempts, mode, *seed)?;
            let doc = if *family || l.is_some() {
                opts.target_size = *l;
                let f = construct_intersecting_family(&g, *k, *seed, &opts)?;
                CertificateDocument::from_family(&f, Some(cfg.clone()))
            } else {
                let c = construct_k_covering(&g, *k, *seed, &opts)?;
                CertificateDocument::from_covering(&c, Some(cfg.clone()))
            };
            Ok(Output {
                bytes: json(&doc)?,
                passed: doc.verification.result,
            })
        }
        RunConfig::TowerBuild {
            spec,
            seed,
            max_attempts,
            mode,
            ..
        } => {
            let spec = parse_tower(spec)?;
            let tower = build_tower(&spec, *seed, &options(*max_attempts, mode, *seed)?)?;
            let doc = TowerOutput {
                tower: tower.to_document(),
                run: cfg.clone(),
            };
            let passed = doc.tower.stages.iter().all(|s| {
                s.claims.projection && s.claims.size_exact && s.claims.measure_bound
            });
            Ok(Output {
                bytes: json(&doc)?,
                passed,
            })
        }
        RunConfig::TowerTranslate {
            spec,
            tower,
            seed,
            samples,
            depth,
            fullness,
            set,
            max_attempts,
            mode,
            ..
        } => {
            let t = match (spec, tower) {
                (Some(s), None) => build_tower(&parse_tower(s)?, *seed, &options(*max_attempts, mode, *seed)?)?,
                (None, Some(path)) => {
                    let text = std::fs::read_to_string(path)?;
                    let doc: TowerDocument =
                        serde_json::from_str(&text).map_err(|e| Error::Integrity(format!("{path}: {e}")))?;
                    Tower::from_document(&doc)?
                }
                _ => return Err(Error::parse("--spec/--tower", "give exactly one of --spec and --tower")),
            };
            let report = translation_report(&t, *seed, *samples, *depth, *fullness, set.as_deref(), cfg.clone())?;
            Ok(Output {
                passed: report.successes == report.count && report.nesting_ok,
                bytes: json(&report)?,
            })
        }
        RunConfig::TowerDim {
            spec,
            seed,
            samples,
            depth,
            fullness,
            set,
            ..
        } => {
            let spec = parse_tower(spec)?;
            let report = dimension_report(&spec, *seed, *samples, *depth, *fullness, set.as_deref(), cfg.clone())?;
            Ok(Output {
                passed: report.within_bound,
                bytes: json(&report)?,
            })
        }
        RunConfig::CovTable {
            families,
            n,
            k,
            seed,
            max_attempts,
            format,
            ..
        } => {
            let opts = options(*max_attempts, &None, *seed)?;
            let rows = cov_table(families, n, k, *seed, &opts)?;
            let bytes = if format == "csv" {
                to_csv(&rows).into_bytes()
            } else {
                json(&TableOutput {
                    kind: "cov-table".into(),
                    rows,
                    run: cfg.clone(),
                })?
            };
            Ok(Output { bytes, passed: true })
        }
    }
}

/// Re-executes the configuration stored in a document.
pub fn rerun(document: &str) -> Result<(RunConfig, Output)> {
    let value: serde_json::Value =
        serde_json::from_str(document).map_err(|e| Error::Integrity(format!("document does not parse: {e}")))?;
    let run = value
        .get("run")
        .ok_or_else(|| Error::Integrity("document carries no run configuration".into()))?;
    let cfg: RunConfig =
        serde_json::from_value(run.clone()).map_err(|e| Error::Integrity(format!("run configuration: {e}")))?;
    let out = execute(&cfg)?;
    Ok((cfg, out))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TowerOutput {
    #[serde(flatten)]
    pub tower: TowerDocument,
    pub run: RunConfig,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TableOutput {
    pub kind: String,
    pub rows: Vec<TableRow>,
    pub run: RunConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NestingSummary {
    /// `|T_0|, …, |T_d|`
    pub t_sizes: Vec<usize>,
    pub nested: bool,
    pub fibre_unions: bool,
    pub translator_in_every_t: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TranslationEntry {
    pub elements: Vec<Element>,
    pub translator: Option<Element>,
    pub lifts: Vec<Element>,
    pub verified: bool,
    pub nesting: Option<NestingSummary>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TranslationReport {
    pub kind: String,
    pub spec: String,
    pub tower_seed: u64,
    pub depth: usize,
    pub count: u64,
    pub successes: u64,
    pub nesting_checked: u64,
    pub nesting_ok: bool,
    pub sets: Vec<TranslationEntry>,
    pub run: RunConfig,
}

/// Thin sets come from their own stream of the master seed, so they do not
/// depend on how the tower was obtained.
fn thin_rng(seed: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(1);
    rng
}

fn thin_sets(
    spec: &TowerSpec,
    seed: u64,
    samples: u64,
    depth: usize,
    fullness: f64,
    set: Option<&[Element]>,
) -> Result<Vec<ThinSet>> {
    if let Some(s) = set {
        return Ok(vec![ThinSet::new(spec, depth, s.iter().copied())?]);
    }
    let mut rng = thin_rng(seed);
    (0..samples).map(|_| sample_thin_set(spec, depth, &mut rng, fullness)).collect()
}

pub fn translation_report(
    tower: &Tower,
    seed: u64,
    samples: u64,
    depth: Option<usize>,
    fullness: f64,
    set: Option<&[Element]>,
    run: RunConfig,
) -> Result<TranslationReport> {
    let depth = depth.unwrap_or(tower.depth());
    let sets = thin_sets(tower.spec(), seed, samples, depth, fullness, set)?;
    let entries: Vec<TranslationEntry> = sets
        .iter()
        .map(|y| match translate_thin(tower, y) {
            Ok(tr) => TranslationEntry {
                elements: y.elements().to_vec(),
                translator: Some(tr.translator),
                lifts: tr.lifts,
                verified: tr.verified,
                nesting: tr.nesting.map(|n| NestingSummary {
                    t_sizes: n.t_sets.iter().map(|t| t.len()).collect(),
                    nested: n.nested,
                    fibre_unions: n.fibre_unions,
                    translator_in_every_t: n.translator_in_every_t,
                }),
                error: None,
            },
            Err(e) => TranslationEntry {
                elements: y.elements().to_vec(),
                translator: None,
                lifts: Vec::new(),
                verified: false,
                nesting: None,
                error: Some(e.to_string()),
            },
        })
        .collect();
    let nests: Vec<&NestingSummary> = entries.iter().filter_map(|e| e.nesting.as_ref()).collect();
    Ok(TranslationReport {
        kind: "translation-report".into(),
        spec: tower.spec().descriptor(),
        tower_seed: tower.seed(),
        depth,
        count: entries.len() as u64,
        successes: entries.iter().filter(|e| e.verified).count() as u64,
        nesting_checked: nests.len() as u64,
        nesting_ok: nests.iter().all(|n| n.nested && n.fibre_unions && n.translator_in_every_t),
        sets: entries,
        run,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DimensionReport {
    pub kind: String,
    pub spec: String,
    pub depth: usize,
    /// `log f(i) / log |G_i|` for `i = 1..=d`.
    pub level_bounds: Vec<f64>,
    pub bound: f64,
    pub estimates: Vec<f64>,
    pub max_estimate: f64,
    pub within_bound: bool,
    pub run: RunConfig,
}

pub fn dimension_report(
    spec: &TowerSpec,
    seed: u64,
    samples: u64,
    depth: Option<usize>,
    fullness: f64,
    set: Option<&[Element]>,
    run: RunConfig,
) -> Result<DimensionReport> {
    let depth = depth.unwrap_or(spec.depth());
    let level_bounds: Vec<f64> = (1..=depth)
        .map(|i| (ThinFunction.at(i) as f64).ln() / (spec.group(i).order() as f64).ln())
        .collect();
    let bound = level_bounds.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let estimates = match set {
        // arbitrary sets are allowed here, thin or not
        Some(s) => {
            let s: BTreeSet<Element> = s.iter().copied().collect();
            vec![dimension_estimate(spec, depth, &s.into_iter().collect::<Vec<_>>())?]
        }
        None => thin_sets(spec, seed, samples, depth, fullness, None)?
            .iter()
            .filter(|y| !y.is_empty())
            .map(|y| dimension_estimate(spec, depth, y.elements()))
            .collect::<Result<Vec<f64>>>()?,
    };
    let max_estimate = estimates.iter().copied().fold(0.0, f64::max);
    Ok(DimensionReport {
        kind: "dimension-report".into(),
        spec: spec.descriptor(),
        depth,
        level_bounds: level_bounds.iter().map(|&b| sig12(b)).collect(),
        bound: sig12(bound),
        within_bound: set.is_some() || max_estimate <= bound + 1e-12,
        estimates: estimates.iter().map(|&e| sig12(e)).collect(),
        max_estimate: sig12(max_estimate),
        run,
    })
}
