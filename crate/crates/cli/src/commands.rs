//! Subcommand implementations.

use std::fs;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use serde::Serialize;
use tensor_geninv::rol::{
    check_theorem, check_weighted_identities, generate_instance, rol_holds, run_suite,
    ConditionReport, Family, InstanceBundle, ShapeProfile, SuiteConfig, TheoremId, Thresholds,
    WeightProfile,
};
use tensor_geninv::{
    mpinverse, penrose_residuals, weighted_conj_transpose, weighted_mpinverse,
    weighted_penrose_residuals, Tolerance,
};

use crate::format::{read_tensor, read_weight, write_json, write_tensor, BundleMeta};
use crate::Outcome;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WeightKind {
    Identity,
    RandomHpd,
    DiagonalHpd,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    /// invertible, diagonal_commuting, pinv_pair, random_deficient,
    /// random_full or identity
    #[arg(long)]
    pub family: Family,
    /// Row-block extents of A, comma separated.
    #[arg(long, default_value = "2,2", value_delimiter = ',')]
    pub row: Vec<usize>,
    /// Shared middle-block extents.
    #[arg(long, default_value = "2,2", value_delimiter = ',')]
    pub mid: Vec<usize>,
    /// Column-block extents of B.
    #[arg(long, default_value = "2,2", value_delimiter = ',')]
    pub col: Vec<usize>,
    #[arg(long, value_enum, default_value = "identity")]
    pub weights: WeightKind,
    /// Condition number of generated weights.
    #[arg(long, default_value_t = 10.0)]
    pub kappa: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output directory; created if missing.
    #[arg(long)]
    pub out: PathBuf,
}

pub fn gen(args: &GenArgs) -> Result<Outcome> {
    let weights = match args.weights {
        WeightKind::Identity => WeightProfile::Identity,
        WeightKind::RandomHpd => WeightProfile::RandomHpd { kappa: args.kappa },
        WeightKind::DiagonalHpd => WeightProfile::DiagonalHpd { kappa: args.kappa },
    };
    let shapes = ShapeProfile::new(args.row.clone(), args.mid.clone(), args.col.clone());
    let bundle = generate_instance(args.family, &shapes, weights, args.seed)?;
    fs::create_dir_all(&args.out).with_context(|| format!("creating {}", args.out.display()))?;
    let files = [
        ("A.json", &bundle.a),
        ("B.json", &bundle.b),
        ("M.json", bundle.m.tensor()),
        ("N.json", bundle.n.tensor()),
        ("L.json", bundle.l.tensor()),
    ];
    for (name, t) in files {
        write_tensor(&args.out.join(name), t)?;
    }
    let meta = BundleMeta {
        family: args.family,
        seed: args.seed,
        expected_rol: bundle.expected_rol,
        shapes,
        weights,
    };
    write_json(&args.out.join("bundle.json"), &meta)?;
    Ok(Outcome::Success)
}

#[derive(Debug, Args)]
pub struct PinvArgs {
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Row and column weight files.
    #[arg(long, num_args = 2, value_names = ["M", "N"])]
    pub weighted: Option<Vec<PathBuf>>,
    /// Verdict threshold for the Penrose residuals; defaults to 1e-10
    /// unweighted and 1e-9 weighted.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Relative singular-value cutoff.
    #[arg(long)]
    pub rank_cut: Option<f64>,
}

#[derive(Debug, Args)]
pub struct WeightedArgs {
    pub input: PathBuf,
    pub m: PathBuf,
    pub n: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub rank_cut: Option<f64>,
}

impl From<&WeightedArgs> for PinvArgs {
    fn from(w: &WeightedArgs) -> Self {
        PinvArgs {
            input: w.input.clone(),
            out: w.out.clone(),
            weighted: Some(vec![w.m.clone(), w.n.clone()]),
            tol: w.tol,
            rank_cut: w.rank_cut,
        }
    }
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

pub fn pinv(args: &PinvArgs) -> Result<Outcome> {
    let numeric = Tolerance::new(Tolerance::default().rel_eq, args.rank_cut)?;
    let a = read_tensor(&args.input)?;
    let report = match &args.weighted {
        None => {
            let x = mpinverse(&a, &numeric)?;
            let report = penrose_residuals(&a, &x, args.tol.unwrap_or(1e-10))?;
            write_tensor(&args.out, &x)?;
            report
        }
        Some(paths) => {
            let (m, n) = (read_weight(&paths[0])?, read_weight(&paths[1])?);
            let x = weighted_mpinverse(&a, &m, &n, &numeric)?;
            let report = weighted_penrose_residuals(&a, &x, &m, &n, args.tol.unwrap_or(1e-9))?;
            write_tensor(&args.out, &x)?;
            report
        }
    };
    print_json(&report)?;
    Ok(Outcome::from_pass(report.verdict))
}

#[derive(Debug, Args)]
pub struct WctArgs {
    pub input: PathBuf,
    pub m: PathBuf,
    pub n: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
}

pub fn wct(args: &WctArgs) -> Result<Outcome> {
    let a = read_tensor(&args.input)?;
    let (m, n) = (read_weight(&args.m)?, read_weight(&args.n)?);
    write_tensor(&args.out, &weighted_conj_transpose(&a, &m, &n)?)?;
    Ok(Outcome::Success)
}

#[derive(Debug, Args)]
pub struct BundleArgs {
    pub a: PathBuf,
    pub b: PathBuf,
    pub m: PathBuf,
    pub n: PathBuf,
    pub l: PathBuf,
    /// Acceptance threshold for residuals.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    /// Rejection threshold for residuals.
    #[arg(long, default_value_t = 1e-6)]
    pub reject: f64,
    /// Seed for auxiliary tensors of the cancellation checks.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl BundleArgs {
    fn load(&self) -> Result<(InstanceBundle, Thresholds)> {
        let bundle = InstanceBundle::new(
            read_tensor(&self.a)?,
            read_tensor(&self.b)?,
            read_weight(&self.m)?,
            read_weight(&self.n)?,
            read_weight(&self.l)?,
            None,
            self.seed,
            None,
        )?;
        if !(self.tol > 0.0 && self.tol < self.reject) {
            bail!(
                "need 0 < --tol < --reject, got {} and {}",
                self.tol,
                self.reject
            );
        }
        let thresholds = Thresholds {
            accept: self.tol,
            reject: self.reject,
            ..Thresholds::default()
        };
        Ok((bundle, thresholds))
    }
}

#[derive(Debug, Args)]
pub struct CheckRolArgs {
    #[command(flatten)]
    pub bundle: BundleArgs,
    /// Theorem id, or `all` for every characterization that applies.
    #[arg(long, default_value = "all")]
    pub theorem: String,
}

#[derive(Serialize)]
struct RolOutput<'a> {
    rol_holds: bool,
    rol_residual: f64,
    all_consistent: bool,
    reports: &'a [ConditionReport],
}

pub fn check_rol(args: &CheckRolArgs) -> Result<Outcome> {
    let (bundle, tol) = args.bundle.load()?;
    let ids: Vec<TheoremId> = if args.theorem == "all" {
        TheoremId::ALL
            .into_iter()
            .filter(|id| *id != TheoremId::Identities)
            .filter(|id| bundle.is_square() || id.square_variant().is_none())
            .collect()
    } else {
        let id: TheoremId = args.theorem.parse()?;
        if id == TheoremId::Identities {
            bail!("use the verify subcommand for the identities");
        }
        vec![id]
    };
    let reports = ids
        .iter()
        .map(|&id| check_theorem(id, &bundle, &tol))
        .collect::<tensor_geninv::Result<Vec<_>>>()?;
    let (holds, residual) = rol_holds(&bundle, &tol)?;
    let all_consistent = reports.iter().all(|r| r.implication_consistent);
    print_json(&RolOutput {
        rol_holds: holds,
        rol_residual: residual,
        all_consistent,
        reports: &reports,
    })?;
    Ok(Outcome::from_pass(all_consistent))
}

pub fn verify(args: &BundleArgs) -> Result<Outcome> {
    let (bundle, tol) = args.load()?;
    let reports = check_weighted_identities(&bundle, &tol)?;
    let pass = reports.iter().all(|r| r.implication_consistent);
    print_json(&reports)?;
    Ok(Outcome::from_pass(pass))
}

#[derive(Debug, Args)]
pub struct SuiteArgs {
    #[arg(long, default_value_t = 200)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Comma-separated theorem ids, or `all`.
    #[arg(long, default_value = "all")]
    pub theorems: String,
    /// Summary file; printed to stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn parse_theorems(s: &str) -> Result<Vec<TheoremId>> {
    if s == "all" {
        return Ok(TheoremId::ALL.to_vec());
    }
    s.split(',')
        .map(|p| Ok(p.trim().parse::<TheoremId>()?))
        .collect()
}

pub fn suite(args: &SuiteArgs) -> Result<Outcome> {
    if args.trials == 0 {
        bail!("--trials must be at least 1");
    }
    let config = SuiteConfig::new(parse_theorems(&args.theorems)?, args.trials, args.seed);
    let summary = run_suite(&config);
    match &args.out {
        Some(path) => {
            write_json(path, &summary)?;
            eprintln!(
                "{} trials, {} reports, {} inconsistent, {} indeterminate",
                summary.trials,
                summary.total_evaluated,
                summary.total_inconsistent,
                summary.total_indeterminate
            );
        }
        None => print_json(&summary)?,
    }
    Ok(Outcome::from_pass(summary.passed))
}
