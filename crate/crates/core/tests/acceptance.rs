//! End-to-end acceptance criteria. Each criterion prints one PASS/FAIL line
//! (written straight to stderr so it shows without `--nocapture`).

use std::io::Write;
use std::time::{Duration, Instant};

use cstar_core::algebra::random_element_with;
use cstar_core::laws::{
    converse_witness, deformed_center, distance_from_scaled_unitary, run_all_with,
    suite_center_correspondence, suite_cstar_identity, suite_ideal_stability,
    suite_lemma_construction, suite_trivial_center_isometries,
};
use cstar_core::matcore::{operator_norm, singular_values, unitarity_residual};
use cstar_core::{
    bicommutant, center, central_projections, check_deformed_algebra, check_positivizer_uniqueness,
    contains, diagonal_positivizers, generate_algebra, hermitian_eig, positivizing_unitary,
    random_invertible_in, random_unitary_in, recover_deformation, structure_constants,
    verify_cstar_identity, ComplexMatrix, DeformedAlgebra, Error, Injection, InstanceSpec,
    LawContext, LawId, Seed, StarAlgebra, StarTable, StructureConstants, ToleranceConfig, C64,
};
use rand::Rng;

const CHOICES: [&[usize]; 6] = [&[1], &[2], &[1, 1], &[2, 2], &[2, 3], &[1, 2, 3]];

struct Verdict {
    name: &'static str,
    ok: bool,
    detail: String,
}

fn report(v: &Verdict) {
    let status = if v.ok { "PASS" } else { "FAIL" };
    let _ = writeln!(
        std::io::stderr(),
        "[acceptance] {status} {}: {}",
        v.name,
        v.detail
    );
}

fn cfg() -> ToleranceConfig {
    ToleranceConfig::default()
}

fn ctx(blocks: &[usize], seed: u64, samples: usize) -> LawContext {
    let spec = InstanceSpec::new(blocks.to_vec(), Seed(seed), samples).unwrap();
    LawContext::from_spec(&spec, cfg()).unwrap()
}

fn lemma_instances() -> Vec<(Vec<usize>, u64)> {
    (0..50u64)
        .map(|i| (CHOICES[i as usize % 6].to_vec(), 1000 + i))
        .collect()
}

fn lemma_suite() -> Verdict {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    let mut failed = 0;
    let mut cases = 0;
    for (blocks, seed) in lemma_instances() {
        let r = suite_lemma_construction(&ctx(&blocks, seed, 50));
        worst = worst.max(r.worst_residual);
        failed += r.cases_failed;
        cases += r.cases_run;
    }
    let elapsed = start.elapsed();
    Verdict {
        name: "lemma construction (50 instances, all lattice p)",
        ok: failed == 0 && worst <= 1e-8 && elapsed < Duration::from_secs(30),
        detail: format!("{cases} cases, {failed} failed, worst {worst:.2e}, {elapsed:.2?}"),
    }
}

/// Algebras in generic position: block algebras and the multiplicity
/// algebra `M_2 ⊗ 1_2`, conjugated by a random unitary and regenerated from
/// two random elements.
fn structure_sanity() -> Verdict {
    let start = Instant::now();
    let shapes: [&[usize]; 5] = [&[2], &[1, 1], &[2, 3], &[1, 2, 3], &[1, 1, 2]];
    let mut worst: f64 = 0.0;
    let mut mismatches = Vec::new();
    for i in 0..20u64 {
        let seed = Seed(2000 + i);
        let target = if i % 5 == 4 {
            let gens: Vec<ComplexMatrix> = (0..2)
                .map(|j| {
                    let a =
                        random_element_with(&StarAlgebra::full(2), &mut seed.derive("m2", j).rng());
                    kron_identity(&a, 2)
                })
                .collect();
            generate_algebra(4, &gens, &cfg()).unwrap()
        } else {
            StarAlgebra::block_diagonal(shapes[i as usize % 5]).unwrap()
        };
        let n = target.ambient_dim();
        let w = random_unitary_in(&StarAlgebra::full(n), seed.derive("conj", 0));
        let gens: Vec<ComplexMatrix> = (0..2)
            .map(|j| {
                let a = random_element_with(&target, &mut seed.derive("gen", j).rng());
                &w * a * w.adjoint()
            })
            .collect();
        let alg = generate_algebra(n, &gens, &cfg()).unwrap();
        let bc = bicommutant(&alg, &cfg());
        let r = alg
            .space()
            .containment_residual(bc.space())
            .max(bc.space().containment_residual(alg.space()));
        worst = worst.max(r);
        let z = center(&alg, &cfg()).dim();
        let k = central_projections(&alg, &cfg()).unwrap().count();
        if z != k || alg.dim() != target.dim() || bc.dim() != alg.dim() {
            mismatches.push(format!(
                "instance {i}: dim {} vs {}, center {z} vs k {k}",
                alg.dim(),
                target.dim()
            ));
        }
    }
    let elapsed = start.elapsed();
    Verdict {
        name: "structure sanity (20 instances)",
        ok: mismatches.is_empty() && worst <= 1e-8 && elapsed < Duration::from_secs(10),
        detail: format!(
            "bicommutant residual {worst:.2e}, mismatches {mismatches:?}, {elapsed:.2?}"
        ),
    }
}

fn kron_identity(a: &ComplexMatrix, m: usize) -> ComplexMatrix {
    let n = a.dim();
    let rows: Vec<Vec<C64>> = (0..n * m)
        .map(|i| {
            (0..n * m)
                .map(|j| {
                    if i % m == j % m {
                        a[(i / m, j / m)]
                    } else {
                        C64::new(0.0, 0.0)
                    }
                })
                .collect()
        })
        .collect();
    ComplexMatrix::from_rows(&rows).unwrap()
}

fn center_correspondence() -> Verdict {
    let mut worst: f64 = 0.0;
    let mut failures = Vec::new();
    for (blocks, seed) in lemma_instances() {
        let c = ctx(&blocks, seed, 10);
        let r = suite_center_correspondence(&c);
        worst = worst.max(r.worst_residual);
        if !r.passed() {
            failures.push(format!("{blocks:?}/{seed}"));
        }
        if blocks.len() == 1 {
            let u = random_unitary_in(&c.alg, Seed(seed));
            let d = DeformedAlgebra::new(
                c.alg.clone(),
                u,
                ComplexMatrix::identity(c.alg.ambient_dim()),
                &cfg(),
            )
            .unwrap();
            let dim = deformed_center(&d, &cfg()).dim();
            if dim != 1 {
                failures.push(format!(
                    "{blocks:?}/{seed}: single-block deformed center dim {dim}"
                ));
            }
        }
    }
    Verdict {
        name: "center correspondence",
        ok: failures.is_empty() && worst <= 1e-8,
        detail: format!("worst {worst:.2e}, failures {failures:?}"),
    }
}

fn ideal_stability() -> Verdict {
    let c = ctx(&[2, 3], 77, 50);
    let r = suite_ideal_stability(&c, &[1]).unwrap();
    Verdict {
        name: "ideal stability ([2,3], ideal block 1)",
        ok: r.passed() && r.worst_residual <= 1e-8,
        detail: format!("{} products, worst {:.2e}", r.cases_run, r.worst_residual),
    }
}

fn positivizer() -> Verdict {
    let cfg = cfg();
    let mut problems = Vec::new();
    let mut worst_unitary: f64 = 0.0;
    let mut worst_member: f64 = 0.0;
    let mut worst_modulus: f64 = 0.0;
    let mut double_positives = 0;
    let mut count = 0;
    for (idx, blocks) in CHOICES.iter().enumerate() {
        let alg = StarAlgebra::block_diagonal(blocks).unwrap();
        for i in 0..50u64 {
            let seed = Seed(3000 + 100 * idx as u64 + i);
            let a = random_invertible_in(&alg, seed, &cfg).unwrap();
            let u = match positivizing_unitary(&alg, &a, &cfg) {
                Ok(u) => u,
                Err(e) => {
                    problems.push(format!("{blocks:?}/{i}: {e}"));
                    continue;
                }
            };
            count += 1;
            worst_unitary = worst_unitary.max(unitarity_residual(&u));
            worst_member = worst_member.max(contains(&alg, &u, &cfg).unwrap().residual);
            let modulus = u.adjoint() * &a;
            let herm = (&modulus + modulus.adjoint()).scale_real(0.5);
            let lmin = hermitian_eig(&herm, &cfg).unwrap().min_eigenvalue();
            worst_modulus = worst_modulus.max(-lmin / operator_norm(&a));
            let r = check_positivizer_uniqueness(&alg, &a, 20, seed.derive("w", 0), &cfg).unwrap();
            double_positives += r.cases_failed;
        }
    }
    let singular_inputs = [
        ComplexMatrix::from_real_diagonal(&[0.0, 1.0]),
        ComplexMatrix::from_real_diagonal(&[1e-10, 1.0]),
        ComplexMatrix::from_real_rows(&[
            vec![1.0, 2.0, 3.0],
            vec![2.0, 4.0, 6.0],
            vec![0.0, 1.0, 5.0],
        ])
        .unwrap(),
    ];
    for a in &singular_inputs {
        let alg = if a.dim() == 2 {
            StarAlgebra::diagonal(2)
        } else {
            StarAlgebra::full(3)
        };
        match positivizing_unitary(&alg, a, &cfg) {
            Err(Error::Singular { .. }) => {}
            other => problems.push(format!("singular input not rejected: {other:?}")),
        }
    }
    let a = ComplexMatrix::from_real_diagonal(&[0.0, 1.0]);
    let ws = diagonal_positivizers(&a, &cfg).unwrap();
    let admissible = ws
        .iter()
        .filter(|w| {
            let m = w.adjoint() * &a;
            unitarity_residual(w) < 1e-12
                && hermitian_eig(&m, &cfg).unwrap().min_eigenvalue() >= -1e-12
        })
        .count();
    let distinct = ws.len() == 2 && ws[0].distance(&ws[1]) > 1.0;
    if admissible != 2 || !distinct {
        problems.push(format!("diag(0,1) admissible unitaries: {admissible}"));
    }
    Verdict {
        name: "positivizing unitary (50 invertible a per instance)",
        ok: problems.is_empty()
            && worst_unitary <= 1e-9
            && worst_member <= 1e-8
            && worst_modulus <= 1e-9
            && double_positives == 0,
        detail: format!(
            "{count} elements, unitarity {worst_unitary:.2e}, membership {worst_member:.2e}, \
             modulus defect {worst_modulus:.2e}, double positives {double_positives}, problems {problems:?}"
        ),
    }
}

fn recovery() -> Verdict {
    let cfg = cfg();
    let mut worst: f64 = 0.0;
    let mut problems = Vec::new();
    for i in 0..20u64 {
        let seed = Seed(4000 + i);
        let blocks = CHOICES[i as usize % 6];
        let alg = StarAlgebra::block_diagonal(blocks).unwrap();
        let projections = central_projections(&alg, &cfg).unwrap();
        let k = projections.count();
        let mask = seed.rng().gen_range(0..1u64 << k);
        let selector: Vec<usize> = (0..k).filter(|b| mask >> b & 1 == 1).collect();
        let p = projections.sum(&selector).unwrap();
        let u = random_unitary_in(&alg, seed.derive("u", 0));
        let d = DeformedAlgebra::new(alg.clone(), u.clone(), p, &cfg).unwrap();
        let (sc, star) = structure_constants(&d);
        match recover_deformation(&alg, &sc, &star, &cfg) {
            Ok(rec) => {
                let err = rec.u.distance(&u);
                worst = worst.max(err);
                let expected = projections.canonical_selector(&alg, &selector, &cfg);
                if rec.selector != expected {
                    problems.push(format!(
                        "{blocks:?}: selector {:?} vs {expected:?}",
                        rec.selector
                    ));
                }
            }
            Err(e) => problems.push(format!("{blocks:?}: {e}")),
        }
    }
    let alg = StarAlgebra::block_diagonal(&[2, 3]).unwrap();
    let d = alg.dim();
    let zero = StructureConstants {
        dim: d,
        table: vec![vec![vec![C64::new(0.0, 0.0); d]; d]; d],
    };
    let star = StarTable(vec![vec![C64::new(0.0, 0.0); d]; d]);
    let zero_ok = matches!(
        recover_deformation(&alg, &zero, &star, &cfg),
        Err(Error::NoUnit { .. })
    );
    Verdict {
        name: "recovery round trip (20 instances)",
        ok: problems.is_empty() && worst <= 1e-7 && zero_ok,
        detail: format!(
            "worst ‖u_rec - u‖ {worst:.2e}, zero table NoUnit {zero_ok}, problems {problems:?}"
        ),
    }
}

fn trivial_center_isometries() -> Verdict {
    let cfg = cfg();
    let mut problems = Vec::new();
    let mut worst: f64 = 0.0;
    for blocks in [&[3][..], &[2, 3][..]] {
        let r = suite_trivial_center_isometries(&ctx(blocks, 5000, 64));
        worst = worst.max(r.worst_residual);
        if !r.passed() {
            problems.push(format!("{blocks:?}: {:?}", r.counterexample));
        }
    }
    let mut witness_worst: f64 = 0.0;
    let mut min_distance = f64::INFINITY;
    for blocks in [&[1, 1][..], &[2, 3][..]] {
        let alg = StarAlgebra::block_diagonal(blocks).unwrap();
        let projections = central_projections(&alg, &cfg).unwrap();
        let z = converse_witness(&projections).unwrap();
        let z_inv = cstar_core::matcore::inverse(&z, &cfg).unwrap();
        let mut rng = Seed(5100).rng();
        let xs: Vec<ComplexMatrix> = alg
            .basis()
            .iter()
            .cloned()
            .chain((0..64).map(|_| random_element_with(&alg, &mut rng)))
            .collect();
        for x in &xs {
            let nx = operator_norm(x);
            witness_worst =
                witness_worst.max((operator_norm(&(&z * x * &z_inv)) - nx).abs() / nx.max(1.0));
        }
        let zn = z.scale_real(1.0 / operator_norm(&z));
        min_distance = min_distance.min(distance_from_scaled_unitary(&z));
        let n = alg.ambient_dim();
        for phase in 0..8 {
            let t = phase as f64 * std::f64::consts::PI / 4.0;
            let candidates = [
                ComplexMatrix::identity(n),
                random_unitary_in(&StarAlgebra::full(n), Seed(5200 + phase)),
            ];
            for w in candidates {
                let dist = operator_norm(&(&zn - w.scale(C64::new(t.cos(), t.sin()))));
                min_distance = min_distance.min(dist);
            }
        }
        let sv = singular_values(&z);
        if (sv[0] - 1.0).abs() > 1e-12 || (sv[sv.len() - 1] - 2.0).abs() > 1e-12 {
            problems.push(format!("{blocks:?}: witness singular values {sv:?}"));
        }
    }
    if !matches!(
        converse_witness(&central_projections(&StarAlgebra::full(2), &cfg).unwrap()),
        Err(Error::CenterTrivial)
    ) {
        problems.push("single block witness did not raise CenterTrivial".into());
    }
    Verdict {
        name: "trivial-center isometries",
        ok: problems.is_empty() && worst <= 1e-8 && witness_worst <= 1e-10 && min_distance >= 0.1,
        detail: format!(
            "unitary pairs worst {worst:.2e}, witness isometry {witness_worst:.2e}, \
             distance from scaled unitaries {min_distance:.3}, problems {problems:?}"
        ),
    }
}

fn negative_controls() -> Verdict {
    let cfg = cfg();
    let mut problems = Vec::new();
    for blocks in [&[1][..], &[2][..], &[2, 3][..]] {
        let c = ctx(blocks, 6000, 20).with_injection(Some(Injection::PerturbU(1e-2)));
        let r = suite_cstar_identity(&c);
        if r.passed() {
            problems.push(format!("{blocks:?}: perturbed u passed the C*-identity"));
        }
    }
    let m2 = StarAlgebra::full(2);
    let mut caught = 0;
    for i in 0..4u64 {
        let u = if i == 0 {
            ComplexMatrix::identity(2)
        } else {
            random_unitary_in(&m2, Seed(6100 + i))
        };
        let d = DeformedAlgebra::new_unchecked(m2.clone(), u, ComplexMatrix::matrix_unit(2, 0, 0));
        let r = check_deformed_algebra(&d, 20, Seed(6200 + i), &cfg);
        let cstar_fails = !verify_cstar_identity(&d, 20, Seed(6300 + i), &cfg).passed();
        if !r.passed() && (has_assoc_failure(&d, &cfg) || cstar_fails) {
            caught += 1;
        }
    }
    if caught != 4 {
        problems.push(format!("E11 in M2 caught in {caught}/4 deformations"));
    }
    let c = ctx(&[2, 3], 42, 20);
    for law in LawId::ALL {
        let reports = run_all_with(&c, Some((law, c.negative_control(law))));
        let failing: Vec<&str> = reports
            .iter()
            .filter(|r| !r.passed())
            .map(|r| r.law_id.as_str())
            .collect();
        if failing != [law.as_str()] {
            problems.push(format!("fault in {law}: failing suites {failing:?}"));
        }
    }
    Verdict {
        name: "negative controls",
        ok: problems.is_empty(),
        detail: format!("problems {problems:?}"),
    }
}

fn has_assoc_failure(d: &DeformedAlgebra, cfg: &ToleranceConfig) -> bool {
    let basis = d.base().basis();
    basis.iter().any(|a| {
        basis.iter().any(|b| {
            basis.iter().any(|c| {
                let l = d.product(&d.product(a, b), c);
                let r = d.product(a, &d.product(b, c));
                !cfg.accepts(l.distance(&r), 1.0)
            })
        })
    })
}

#[test]
fn acceptance() {
    let criteria: Vec<fn() -> Verdict> = vec![
        lemma_suite,
        structure_sanity,
        center_correspondence,
        ideal_stability,
        positivizer,
        recovery,
        trivial_center_isometries,
        negative_controls,
    ];
    let verdicts: Vec<Verdict> = criteria
        .into_iter()
        .map(|f| {
            let v = f();
            report(&v);
            v
        })
        .collect();
    let failed: Vec<&str> = verdicts.iter().filter(|v| !v.ok).map(|v| v.name).collect();
    let _ = writeln!(
        std::io::stderr(),
        "[acceptance] {}/{} criteria passed",
        verdicts.len() - failed.len(),
        verdicts.len()
    );
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
