//! Acceptance run. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

use std::fs;
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use geninv_cli::format::{read_tensor, write_tensor};
use tensor_geninv::matricize::reference::naive_einstein_product;
use tensor_geninv::random::{complex_gaussian_tensor, derive_seed, rng};
use tensor_geninv::rol::suite::{pick_shapes, SHAPE_BLOCKS};
use tensor_geninv::rol::{
    check_rol_implies_commute, check_square_sufficient, check_weighted_identities,
    generate_instance, rol_holds, run_suite, Family, InstanceBundle, ShapeProfile, SquareVariant,
    SuiteConfig, TheoremId, Thresholds, Verdict, WeightProfile,
};
use tensor_geninv::{
    flatten, mpinverse, penrose_residuals, rel_distance, weighted_mpinverse,
    weighted_penrose_residuals, zero_tensor, DenseTensor, HpdWeight, ShapeSignature, Tolerance,
    C64,
};

const SEED: u64 = 20_240_601;
const KAPPA: f64 = 10.0;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn pick(seed: u64, k: u64, n: usize) -> usize {
    (derive_seed(seed, k) % n as u64) as usize
}

fn extents(seed: u64, base: u64, order: usize) -> Vec<usize> {
    (0..order)
        .map(|i| 1 + pick(seed, base + i as u64, 4))
        .collect()
}

fn kappa_weights(family: Family) -> WeightProfile {
    match family {
        Family::DiagonalCommuting => WeightProfile::DiagonalHpd { kappa: KAPPA },
        _ => WeightProfile::RandomHpd { kappa: KAPPA },
    }
}

/// Mixed-family bundles, all with condition-10 weights.
fn weighted_bundle(i: usize) -> InstanceBundle {
    let family = Family::MIXED[i % Family::MIXED.len()];
    let seed = derive_seed(SEED, 1000 + i as u64);
    generate_instance(
        family,
        &pick_shapes(family, derive_seed(seed, 1)),
        kappa_weights(family),
        seed,
    )
    .expect("bundle generation")
}

fn homomorphism() -> Outcome {
    let start = Instant::now();
    let (mut worst, mut worst_ref) = (0.0f64, 0.0f64);
    for i in 0..100u64 {
        let s = derive_seed(SEED, i);
        // order split: row, contracted, col, each >= 1, total <= 6
        let r = 1 + pick(s, 0, 4);
        let k = 1 + pick(s, 1, 5 - r);
        let c = 1 + pick(s, 2, 6 - r - k);
        let (re, ke, ce) = (extents(s, 10, r), extents(s, 20, k), extents(s, 30, c));
        let mut g = rng(s);
        let a =
            complex_gaussian_tensor(ShapeSignature::new(re.clone(), ke.clone()).unwrap(), &mut g);
        let b = complex_gaussian_tensor(ShapeSignature::new(ke, ce).unwrap(), &mut g);
        let ab = a.einstein_product(&b).map_err(|e| e.to_string())?;
        let lhs = flatten(&ab);
        let rhs = flatten(&a).matmul(&flatten(&b)).unwrap();
        let d = lhs.sub(&rhs).unwrap().frobenius_norm()
            / 1f64.max(lhs.frobenius_norm()).max(rhs.frobenius_norm());
        worst = worst.max(d);
        worst_ref =
            worst_ref.max(rel_distance(&ab, &naive_einstein_product(&a, &b).unwrap()).unwrap());
    }
    let elapsed = start.elapsed();
    let msg = format!("max {worst:.2e}, vs index loop {worst_ref:.2e}, {elapsed:.2?}");
    if worst <= 1e-13 && worst_ref <= 1e-13 && elapsed < Duration::from_secs(5) {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn penrose() -> Outcome {
    let start = Instant::now();
    let num = Tolerance::default();
    let (mut worst, mut worst_w, mut deficient, mut failures) = (0.0f64, 0.0f64, 0, 0);
    for i in 0..100u64 {
        let s = derive_seed(SEED, 200 + i);
        let rows = SHAPE_BLOCKS[pick(s, 0, SHAPE_BLOCKS.len())];
        let cols = SHAPE_BLOCKS[pick(s, 1, SHAPE_BLOCKS.len())];
        let sig = ShapeSignature::new(rows.to_vec(), cols.to_vec()).unwrap();
        let mut g = rng(s);
        let a = if i % 2 == 1 {
            let rank = (sig.row_count().min(sig.col_count()) / 2).max(1);
            let left = complex_gaussian_tensor(
                ShapeSignature::new(rows.to_vec(), vec![rank]).unwrap(),
                &mut g,
            );
            let right = complex_gaussian_tensor(
                ShapeSignature::new(vec![rank], cols.to_vec()).unwrap(),
                &mut g,
            );
            deficient += 1;
            left.einstein_product(&right).unwrap()
        } else {
            complex_gaussian_tensor(sig, &mut g)
        };
        let x = mpinverse(&a, &num).map_err(|e| e.to_string())?;
        let plain = penrose_residuals(&a, &x, 1e-10).unwrap();
        let m = HpdWeight::random(rows, KAPPA, derive_seed(s, 1)).unwrap();
        let n = HpdWeight::random(cols, KAPPA, derive_seed(s, 2)).unwrap();
        let xw = weighted_mpinverse(&a, &m, &n, &num).map_err(|e| e.to_string())?;
        let weighted = weighted_penrose_residuals(&a, &xw, &m, &n, 1e-9).unwrap();
        worst = worst.max(plain.max_residual());
        worst_w = worst_w.max(weighted.max_residual());
        failures += usize::from(!plain.verdict) + usize::from(!weighted.verdict);
    }
    let elapsed = start.elapsed();
    let msg = format!(
        "{deficient} deficient, max {worst:.2e} plain, {worst_w:.2e} weighted, {failures} failed, {elapsed:.2?}"
    );
    if failures == 0 && elapsed < Duration::from_secs(10) {
        Ok(msg)
    } else {
        Err(msg)
    }
}

/// Worst residual over `n` weighted bundles for the named identity reports,
/// plus the count of reports not holding at 1e-9.
fn identity_sweep(ids: &[&str], n: usize) -> (f64, usize) {
    let tol = Thresholds::default();
    let (mut worst, mut bad) = (0.0f64, 0);
    for i in 0..n {
        let reports =
            check_weighted_identities(&weighted_bundle(i), &tol).expect("identity checks");
        for id in ids {
            let r = reports
                .iter()
                .find(|r| r.theorem_id == *id)
                .expect("report present");
            let res = r.residuals().map(|e| e.residual).fold(0.0f64, f64::max);
            worst = worst.max(res);
            bad += usize::from(
                r.hypothesis_verdict != Verdict::Holds || r.conclusion.verdict != Verdict::Holds,
            );
        }
    }
    (worst, bad)
}

fn inverse_lemma() -> Outcome {
    let (worst, bad) = identity_sweep(
        &["identity-double-inverse", "identity-inverse-transpose"],
        100,
    );
    let msg = format!("max {worst:.2e}, {bad} above 1e-9");
    if bad == 0 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn weighted_identities() -> Outcome {
    let tol = Thresholds::default();
    let (worst, bad) = identity_sweep(
        &[
            "identity-additivity",
            "identity-sharp-involution",
            "identity-sharp-reverse",
            "identity-range-self-adjoint",
            "identity-domain-self-adjoint",
        ],
        100,
    );
    let (mut zero_bad, mut zero_worst) = (0, 0.0f64);
    for i in 0..100 {
        let bundle = weighted_bundle(i);
        let reports = check_weighted_identities(&bundle, &tol).unwrap();
        let zp = reports
            .iter()
            .find(|r| r.theorem_id == "identity-zero-product")
            .unwrap();
        // A != O here, so neither product may vanish
        zero_bad +=
            usize::from(!zp.implication_consistent || zp.hypothesis_verdict != Verdict::Fails);
        let o = zero_tensor(bundle.a.signature().clone());
        let o_sharp = tensor_geninv::weighted_conj_transpose(&o, &bundle.m, &bundle.n).unwrap();
        let p1 = o_sharp.einstein_product(&o).unwrap().frobenius_norm();
        let p2 = o.einstein_product(&o_sharp).unwrap().frobenius_norm();
        zero_worst = zero_worst.max(p1).max(p2);
    }
    let (lemma_worst, lemma_bad) = identity_sweep(
        &[
            "lemma-right-cancellation",
            "lemma-left-cancellation",
            "lemma-absorption-left",
            "lemma-absorption-right",
        ],
        50,
    );
    let msg = format!(
        "identities max {worst:.2e} ({bad} bad), zero product {zero_bad} bad with zero case {zero_worst:.1e}, \
         lemmas max {lemma_worst:.2e} ({lemma_bad} bad)"
    );
    if bad == 0 && zero_bad == 0 && zero_worst <= 1e-12 && lemma_bad == 0 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn iff_theorems() -> Outcome {
    let start = Instant::now();
    let mut theorems = TheoremId::IFF.to_vec();
    theorems.push(TheoremId::RolImpliesCommute);
    let summary = run_suite(&SuiteConfig::new(theorems, 200, SEED));
    let elapsed = start.elapsed();
    let share = summary.total_indeterminate as f64 / summary.total_evaluated.max(1) as f64;
    let msg = format!(
        "{} reports, {} inconsistent, {:.1}% indeterminate, {} disagreements, {} errors, {elapsed:.2?}",
        summary.total_evaluated,
        summary.total_inconsistent,
        100.0 * share,
        summary.characterization_disagreements,
        summary.errors.len()
    );
    if summary.errors.is_empty()
        && summary.total_inconsistent == 0
        && share <= 0.05
        && summary.characterization_disagreements == 0
        && elapsed < Duration::from_secs(60)
    {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn square_block(i: usize) -> Vec<usize> {
    SHAPE_BLOCKS[i % SHAPE_BLOCKS.len()].to_vec()
}

fn square_sufficient() -> Outcome {
    let tol = Thresholds::default();
    let (mut diag_worst, mut diag_bad) = (0.0f64, 0);
    for i in 0..100 {
        let weights = if i % 2 == 0 {
            WeightProfile::Identity
        } else {
            kappa_weights(Family::DiagonalCommuting)
        };
        let shapes = ShapeProfile::square(&square_block(i));
        let bundle = generate_instance(
            Family::DiagonalCommuting,
            &shapes,
            weights,
            derive_seed(SEED, 3000 + i as u64),
        )
        .unwrap();
        let r = check_square_sufficient(&bundle, SquareVariant::Commuting, &tol).unwrap();
        let hyp = r
            .hypotheses
            .iter()
            .map(|h| h.residual)
            .fold(0.0f64, f64::max);
        let (_, rol) = rol_holds(&bundle, &tol).unwrap();
        diag_worst = diag_worst.max(hyp).max(rol);
        diag_bad += usize::from(hyp > 1e-9 || rol > 1e-9);
    }
    let (mut violations, mut held) = (0, 0);
    for i in 0..100 {
        let family = if i % 2 == 0 {
            Family::RandomFull
        } else {
            Family::RandomDeficient
        };
        let weights = if i % 4 < 2 {
            WeightProfile::Identity
        } else {
            kappa_weights(family)
        };
        let shapes = ShapeProfile::square(&square_block(i + 2));
        let bundle =
            generate_instance(family, &shapes, weights, derive_seed(SEED, 4000 + i as u64))
                .unwrap();
        for variant in TheoremId::SQUARE.iter().filter_map(|t| t.square_variant()) {
            let r = check_square_sufficient(&bundle, variant, &tol).unwrap();
            if r.hypothesis_verdict == Verdict::Holds {
                held += 1;
                violations += usize::from(r.conclusion.residual >= 1e-6);
            }
        }
    }
    let msg = format!(
        "diagonal max {diag_worst:.2e} ({diag_bad} above 1e-9); random: {held} hypotheses held, {violations} violations"
    );
    if diag_bad == 0 && violations == 0 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn rol_commute() -> Outcome {
    let tol = Thresholds::default();
    let plan = [
        (Family::Invertible, 60),
        (Family::DiagonalCommuting, 60),
        (Family::PinvPair, 20),
        (Family::RandomFull, 20),
    ];
    let (mut positive, mut worst, mut bad) = (0, 0.0f64, 0);
    let mut per_family = Vec::new();
    for (family, count) in plan {
        let mut hits = 0;
        for i in 0..count {
            let seed = derive_seed(SEED, 5000 + 100 * family as u64 + i as u64);
            let weights = if i % 2 == 0 {
                WeightProfile::Identity
            } else {
                kappa_weights(family)
            };
            let bundle =
                generate_instance(family, &pick_shapes(family, seed), weights, seed).unwrap();
            if !rol_holds(&bundle, &tol).unwrap().0 {
                continue;
            }
            hits += 1;
            let r = check_rol_implies_commute(&bundle, &tol).unwrap();
            worst = worst.max(r.conclusion.residual);
            bad += usize::from(r.conclusion.residual > 1e-8);
        }
        positive += hits;
        per_family.push(format!("{family} {hits}"));
    }
    let msg = format!(
        "{positive} ROL-positive ({}), commutator max {worst:.2e}, {bad} above 1e-8",
        per_family.join(", ")
    );
    if positive >= 100 && bad == 0 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn run_cli(args: &[&str]) -> Result<(), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_geninv"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    if out.status.success() {
        Ok(())
    } else {
        Err(format!(
            "geninv {args:?}: {}",
            String::from_utf8_lossy(&out.stderr).trim()
        ))
    }
}

fn same_files(x: &Path, y: &Path, names: &[&str]) -> bool {
    names
        .iter()
        .all(|n| fs::read(x.join(n)).ok() == fs::read(y.join(n)).ok() && x.join(n).exists())
}

fn cli_determinism() -> Outcome {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let root = tmp.path();
    let s = |p: &Path| p.to_str().unwrap().to_string();
    let names = [
        "A.json",
        "B.json",
        "M.json",
        "N.json",
        "L.json",
        "bundle.json",
    ];
    let mut gen_same = 0;
    let families = [
        "invertible",
        "diagonal_commuting",
        "pinv_pair",
        "random_deficient",
        "random_full",
    ];
    for family in families {
        let (x, y) = (
            root.join(format!("{family}-x")),
            root.join(format!("{family}-y")),
        );
        for dir in [&x, &y] {
            run_cli(&[
                "gen",
                "--family",
                family,
                "--row",
                "2,3",
                "--mid",
                "2,3",
                "--col",
                "2,3",
                "--weights",
                "random-hpd",
                "--seed",
                "11",
                "--out",
                &s(dir),
            ])
            .or_else(|_| {
                // diagonal_commuting only takes diagonal weights
                run_cli(&[
                    "gen",
                    "--family",
                    family,
                    "--row",
                    "2,3",
                    "--mid",
                    "2,3",
                    "--col",
                    "2,3",
                    "--weights",
                    "diagonal-hpd",
                    "--seed",
                    "11",
                    "--out",
                    &s(dir),
                ])
            })?;
        }
        gen_same += usize::from(same_files(&x, &y, &names));
    }
    let (sx, sy) = (root.join("suite-x.json"), root.join("suite-y.json"));
    for out in [&sx, &sy] {
        run_cli(&["suite", "--trials", "10", "--seed", "3", "--out", &s(out)])?;
    }
    let suite_same = fs::read(&sx).ok() == fs::read(&sy).ok();

    let mut g = rng(SEED);
    let mut samples = Vec::new();
    for (i, block) in SHAPE_BLOCKS.iter().enumerate() {
        let sig = ShapeSignature::new(block.to_vec(), SHAPE_BLOCKS[(i + 1) % 6].to_vec()).unwrap();
        let t = complex_gaussian_tensor(sig, &mut g);
        samples.push(t.scale(C64::new(1e-300, 0.0)));
        samples.push(t.scale(C64::new(0.0, 3e250)));
        samples.push(t);
    }
    let special = [
        0.1,
        -0.0,
        f64::MIN_POSITIVE / 3.0,
        f64::MAX,
        1.0 / 3.0,
        -2.5e-8,
    ];
    samples.push(
        DenseTensor::new(
            ShapeSignature::new(vec![2], vec![3]).unwrap(),
            special.iter().map(|&v| C64::new(v, -v)).collect(),
        )
        .unwrap(),
    );
    let path = root.join("t.json");
    let mut exact = 0;
    for t in &samples {
        write_tensor(&path, t).map_err(|e| e.to_string())?;
        let back = read_tensor(&path).map_err(|e| e.to_string())?;
        let bits = |z: &C64| (z.re.to_bits(), z.im.to_bits());
        let same = back.signature() == t.signature()
            && back
                .entries()
                .iter()
                .map(bits)
                .eq(t.entries().iter().map(bits));
        exact += usize::from(same);
    }
    let msg = format!(
        "gen identical {gen_same}/{}, suite identical {suite_same}, round trip bit-exact {exact}/{}",
        families.len(),
        samples.len()
    );
    if gen_same == families.len() && suite_same && exact == samples.len() {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("1 matricization homomorphism", homomorphism),
        ("2 Penrose equations", penrose),
        ("3 double inverse and inverse transpose", inverse_lemma),
        (
            "4 weighted transpose identities and lemmas",
            weighted_identities,
        ),
        ("5 iff characterizations", iff_theorems),
        ("6 square sufficient conditions", square_sufficient),
        ("7 ROL implies commuting projectors", rol_commute),
        ("8 CLI determinism and round trip", cli_determinism),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        match check() {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {name}: {detail}");
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
