//! Seeded batch runs of the checkers over mixed-family bundles.

use std::collections::BTreeMap;

use rand::seq::IndexedRandom;
use serde::{Deserialize, Serialize};

use super::bundle::{generate_instance, Family, InstanceBundle, ShapeProfile, WeightProfile};
use super::checks::{check_theorem, check_weighted_identities, TheoremId};
use super::report::{ConditionReport, Thresholds, Verdict};
use crate::error::Result;
use crate::random::{derive_seed, rng};

/// Mode blocks of the default shape grid: extents in {2, 3}, one or two
/// modes, flattened size at most 9.
pub const SHAPE_BLOCKS: [&[usize]; 6] = [&[2], &[3], &[2, 2], &[2, 3], &[3, 2], &[3, 3]];

/// Upper edges of the residual histogram buckets; the last bucket is open.
pub const HISTOGRAM_EDGES: [f64; 4] = [1e-14, 1e-12, 1e-9, 1e-6];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub theorems: Vec<TheoremId>,
    pub trials: usize,
    pub seed: u64,
    pub thresholds: Thresholds,
}

impl SuiteConfig {
    pub fn new(theorems: Vec<TheoremId>, trials: usize, seed: u64) -> Self {
        Self {
            theorems,
            trials,
            seed,
            thresholds: Thresholds::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoremSummary {
    pub theorem_id: String,
    pub evaluated: usize,
    pub consistent: usize,
    pub inconsistent: usize,
    pub indeterminate: usize,
    pub hypotheses_held: usize,
    pub conclusion_held: usize,
    /// Largest residual among entries classified as holding.
    pub worst_accepted_residual: f64,
    /// Smallest residual among entries classified as failing.
    pub smallest_rejected_residual: Option<f64>,
    /// Counts of all residuals below 1e-14, 1e-12, 1e-9, 1e-6, and above.
    pub histogram: [usize; 5],
}

impl TheoremSummary {
    fn new(id: &str) -> Self {
        Self {
            theorem_id: id.to_string(),
            evaluated: 0,
            consistent: 0,
            inconsistent: 0,
            indeterminate: 0,
            hypotheses_held: 0,
            conclusion_held: 0,
            worst_accepted_residual: 0.0,
            smallest_rejected_residual: None,
            histogram: [0; 5],
        }
    }

    fn record(&mut self, report: &ConditionReport) {
        self.evaluated += 1;
        if report.indeterminate {
            self.indeterminate += 1;
        } else if report.implication_consistent {
            self.consistent += 1;
        } else {
            self.inconsistent += 1;
        }
        if report.hypothesis_verdict == Verdict::Holds {
            self.hypotheses_held += 1;
        }
        if report.conclusion.verdict == Verdict::Holds {
            self.conclusion_held += 1;
        }
        for entry in report.residuals() {
            let r = entry.residual;
            match entry.verdict {
                Verdict::Holds => {
                    self.worst_accepted_residual = self.worst_accepted_residual.max(r)
                }
                Verdict::Fails => {
                    let best = self.smallest_rejected_residual.map_or(r, |s| s.min(r));
                    self.smallest_rejected_residual = Some(best);
                }
                Verdict::Indeterminate => {}
            }
            let bucket = HISTOGRAM_EDGES
                .iter()
                .position(|&edge| r < edge)
                .unwrap_or(4);
            self.histogram[bucket] += 1;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteSummary {
    pub seed: u64,
    pub trials: usize,
    pub theorems: Vec<String>,
    pub per_theorem: Vec<TheoremSummary>,
    /// Bundles on which two iff characterizations gave opposite determinate
    /// hypothesis verdicts.
    pub characterization_disagreements: usize,
    pub total_inconsistent: usize,
    pub total_indeterminate: usize,
    pub total_evaluated: usize,
    pub errors: Vec<String>,
    pub passed: bool,
}

/// Shape profile for `family` drawn from [`SHAPE_BLOCKS`].
pub fn pick_shapes(family: Family, seed: u64) -> ShapeProfile {
    let mut g = rng(seed);
    let pick = |g: &mut _| SHAPE_BLOCKS.choose(g).expect("non-empty").to_vec();
    match family {
        Family::Invertible => {
            let first = pick(&mut g);
            let size: usize = first.iter().product();
            let same: Vec<&[usize]> = SHAPE_BLOCKS
                .iter()
                .copied()
                .filter(|b| b.iter().product::<usize>() == size)
                .collect();
            let mid = same.choose(&mut g).expect("contains first").to_vec();
            let col = same.choose(&mut g).expect("contains first").to_vec();
            ShapeProfile::new(first, mid, col)
        }
        Family::DiagonalCommuting | Family::Identity => ShapeProfile::square(&pick(&mut g)),
        Family::PinvPair => {
            let row = pick(&mut g);
            let mid = pick(&mut g);
            ShapeProfile::new(row.clone(), mid, row)
        }
        Family::RandomDeficient | Family::RandomFull => {
            ShapeProfile::new(pick(&mut g), pick(&mut g), pick(&mut g))
        }
    }
}

/// Identity weights on even rounds of the family rotation, condition
/// number 10 on odd ones (diagonal for the diagonal family).
pub fn weight_profile(family: Family, trial: usize) -> WeightProfile {
    if (trial / Family::MIXED.len()).is_multiple_of(2) {
        WeightProfile::Identity
    } else if family == Family::DiagonalCommuting {
        WeightProfile::DiagonalHpd { kappa: 10.0 }
    } else {
        WeightProfile::RandomHpd { kappa: 10.0 }
    }
}

/// The general and square bundles used for trial `index`.
pub fn trial_bundles(master: u64, index: usize) -> Result<(InstanceBundle, InstanceBundle)> {
    let seed = derive_seed(master, index as u64);
    let family = Family::MIXED[index % Family::MIXED.len()];
    let weights = weight_profile(family, index);
    let general = generate_instance(
        family,
        &pick_shapes(family, derive_seed(seed, 100)),
        weights,
        seed,
    )?;
    let block = pick_shapes(Family::DiagonalCommuting, derive_seed(seed, 200)).row;
    let square = generate_instance(
        family,
        &ShapeProfile::square(&block),
        weights,
        derive_seed(seed, 300),
    )?;
    Ok((general, square))
}

fn evaluate(config: &SuiteConfig, index: usize) -> Result<Vec<ConditionReport>> {
    let (general, square) = trial_bundles(config.seed, index)?;
    let tol = &config.thresholds;
    let mut reports = Vec::new();
    for &id in &config.theorems {
        match id {
            TheoremId::Identities => reports.extend(check_weighted_identities(&general, tol)?),
            _ if id.square_variant().is_some() => reports.push(check_theorem(id, &square, tol)?),
            _ => reports.push(check_theorem(id, &general, tol)?),
        }
    }
    Ok(reports)
}

fn characterizations_disagree(reports: &[ConditionReport]) -> bool {
    let iff: Vec<&str> = TheoremId::IFF.iter().map(|t| t.as_str()).collect();
    let verdicts: Vec<Verdict> = reports
        .iter()
        .filter(|r| iff.contains(&r.theorem_id.as_str()))
        .map(|r| r.hypothesis_verdict)
        .filter(|v| v.is_determinate())
        .collect();
    verdicts.windows(2).any(|w| w[0] != w[1])
}

/// Runs every requested checker on `config.trials` seeded trials. Trial `i`
/// uses family `i mod 5` of [`Family::MIXED`]. Checker errors are recorded
/// in the summary and fail it.
pub fn run_suite(config: &SuiteConfig) -> SuiteSummary {
    let mut table: BTreeMap<String, TheoremSummary> = BTreeMap::new();
    let mut errors = Vec::new();
    let mut disagreements = 0;
    for index in 0..config.trials {
        match evaluate(config, index) {
            Ok(reports) => {
                if characterizations_disagree(&reports) {
                    disagreements += 1;
                }
                for r in &reports {
                    table
                        .entry(r.theorem_id.clone())
                        .or_insert_with(|| TheoremSummary::new(&r.theorem_id))
                        .record(r);
                }
            }
            Err(e) => errors.push(format!("trial {index}: {e}")),
        }
    }
    let per_theorem: Vec<TheoremSummary> = table.into_values().collect();
    let total_inconsistent = per_theorem.iter().map(|t| t.inconsistent).sum();
    let total_indeterminate = per_theorem.iter().map(|t| t.indeterminate).sum();
    let total_evaluated = per_theorem.iter().map(|t| t.evaluated).sum();
    SuiteSummary {
        seed: config.seed,
        trials: config.trials,
        theorems: config
            .theorems
            .iter()
            .map(|t| t.as_str().to_string())
            .collect(),
        per_theorem,
        characterization_disagreements: disagreements,
        total_inconsistent,
        total_indeterminate,
        total_evaluated,
        passed: total_inconsistent == 0 && disagreements == 0 && errors.is_empty(),
        errors,
    }
}
