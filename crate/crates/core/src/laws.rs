//! Seeded property suites for the structural laws of deformed algebras.
//!
//! Each suite draws its instances from `(seed, law id, case index)` so that
//! verdicts do not depend on evaluation order. Bilinear laws are checked on
//! the full basis (which proves them over the whole algebra) plus random
//! samples; nonlinear laws use random samples alongside the basis.
//!
//! Every suite accepts an [`Injection`] that breaks one of its hypotheses;
//! a suite that still passes under its injection is defective.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::algebra::{
    center, central_projections, random_element_with, random_invertible_with, random_unitary_with,
    CentralProjectionSet, StarAlgebra, Subspace,
};
use crate::deform::{
    check_positivizer_uniqueness, is_positive_deformed, positivizing_unitary,
    tally_double_positives, verify_cstar_identity, DeformedAlgebra,
};
use crate::error::{Error, Result};
use crate::matcore::{
    eigh, inverse, operator_norm, singular_values, spectral_radius_normal, unitarity_residual,
    ComplexMatrix, ToleranceConfig, C64,
};
use crate::report::{LawReport, Tally};
use crate::seed::Seed;

/// Largest ambient dimension an instance may have.
pub const MAX_AMBIENT_DIM: usize = 32;

/// Trials per element in the positivizer uniqueness spot-check.
pub const UNIQUENESS_TRIALS: usize = 20;

const MAX_BASIS_TRIPLES: usize = 8000;
const MAX_ENUMERATED_LATTICE: usize = 6;

/// Identifier of a property suite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LawId {
    LemmaConstruction,
    CommutativityEquivalence,
    CenterCorrespondence,
    IdealStability,
    TrivialCenterIsometries,
    JordanTheta,
    NormUniqueness,
    CstarIdentity,
    PositivizerUniqueness,
}

impl LawId {
    pub const ALL: [LawId; 9] = [
        LawId::LemmaConstruction,
        LawId::CommutativityEquivalence,
        LawId::CenterCorrespondence,
        LawId::IdealStability,
        LawId::TrivialCenterIsometries,
        LawId::JordanTheta,
        LawId::NormUniqueness,
        LawId::CstarIdentity,
        LawId::PositivizerUniqueness,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            LawId::LemmaConstruction => "lemma_construction",
            LawId::CommutativityEquivalence => "commutativity_equivalence",
            LawId::CenterCorrespondence => "center_correspondence",
            LawId::IdealStability => "ideal_stability",
            LawId::TrivialCenterIsometries => "trivial_center_isometries",
            LawId::JordanTheta => "jordan_theta",
            LawId::NormUniqueness => "norm_uniqueness",
            LawId::CstarIdentity => "cstar_identity",
            LawId::PositivizerUniqueness => "positivizer_uniqueness",
        }
    }
}

impl fmt::Display for LawId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for LawId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        LawId::ALL
            .iter()
            .copied()
            .find(|l| l.as_str() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown law id {s:?}")))
    }
}

/// A deliberate violation of a suite's hypotheses.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Injection {
    /// `u + ε e` for a random unit-norm `e ∈ A`: invertible, not unitary.
    PerturbU(f64),
    /// A unitary of the ambient `M_n` drawn outside `A`.
    ForeignU,
    /// `u = 0`, which collapses the deformed product.
    ZeroU,
    /// The rank-one projection onto `(e_0 + e_{n-1}) / √2`, which is not a
    /// central projection of `A` unless `A` is scalar.
    NonCentralP,
    /// A singular element in place of an invertible one.
    SingularA,
    /// Hilbert–Schmidt norm in place of the operator norm.
    NonCStarNorm,
}

/// Block algebra `⊕ M_{n_i}` plus sampling parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceSpec {
    pub block_sizes: Vec<usize>,
    pub seed: Seed,
    pub samples: usize,
}

impl InstanceSpec {
    pub fn new(block_sizes: Vec<usize>, seed: Seed, samples: usize) -> Result<Self> {
        let spec = Self {
            block_sizes,
            seed,
            samples,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.block_sizes.is_empty() || self.block_sizes.contains(&0) {
            return Err(Error::InvalidInput(
                "block sizes must be a non-empty list of positive integers".into(),
            ));
        }
        let n: usize = self.block_sizes.iter().sum();
        if n > MAX_AMBIENT_DIM {
            return Err(Error::InvalidInput(format!(
                "sum of block sizes is {n}, at most {MAX_AMBIENT_DIM} supported"
            )));
        }
        Ok(())
    }

    pub fn algebra(&self) -> Result<StarAlgebra> {
        self.validate()?;
        StarAlgebra::block_diagonal(&self.block_sizes)
    }
}

/// Everything a suite needs: the algebra, its central projections, the
/// sampling parameters and an optional injected fault.
#[derive(Debug, Clone)]
pub struct LawContext {
    pub alg: StarAlgebra,
    pub projections: CentralProjectionSet,
    pub seed: Seed,
    pub samples: usize,
    pub cfg: ToleranceConfig,
    pub injection: Option<Injection>,
}

impl LawContext {
    pub fn new(alg: StarAlgebra, seed: Seed, samples: usize, cfg: ToleranceConfig) -> Result<Self> {
        cfg.validate()?;
        if alg.ambient_dim() > MAX_AMBIENT_DIM {
            return Err(Error::InvalidInput(format!(
                "ambient dimension {} exceeds {MAX_AMBIENT_DIM}",
                alg.ambient_dim()
            )));
        }
        let projections = central_projections(&alg, &cfg)?;
        Ok(Self {
            alg,
            projections,
            seed,
            samples,
            cfg,
            injection: None,
        })
    }

    pub fn from_spec(spec: &InstanceSpec, cfg: ToleranceConfig) -> Result<Self> {
        Self::new(spec.algebra()?, spec.seed, spec.samples, cfg)
    }

    pub fn with_injection(&self, injection: Option<Injection>) -> Self {
        Self {
            injection,
            ..self.clone()
        }
    }

    /// The hypothesis violation `law` must detect on this algebra. The
    /// commutativity verdict is flipped by a foreign unitary when `A` is
    /// commutative and by a vanishing one otherwise.
    pub fn negative_control(&self, law: LawId) -> Injection {
        match law {
            LawId::LemmaConstruction
            | LawId::CenterCorrespondence
            | LawId::TrivialCenterIsometries
            | LawId::JordanTheta
            | LawId::CstarIdentity => Injection::PerturbU(1e-2),
            LawId::CommutativityEquivalence if self.alg.is_commutative(&self.cfg) => {
                Injection::ForeignU
            }
            LawId::CommutativityEquivalence => Injection::ZeroU,
            LawId::IdealStability => Injection::NonCentralP,
            LawId::NormUniqueness => Injection::NonCStarNorm,
            LawId::PositivizerUniqueness => Injection::SingularA,
        }
    }

    fn n(&self) -> usize {
        self.alg.ambient_dim()
    }

    fn rng(&self, law: LawId, index: u64) -> rand_chacha::ChaCha8Rng {
        self.seed.derive(law.as_str(), index).rng()
    }

    /// The suite's unitary, after applying a unitary-breaking injection.
    fn unitary(&self, law: LawId) -> ComplexMatrix {
        let mut rng = self.rng(law, u64::MAX);
        let u = random_unitary_with(&self.alg, &mut rng);
        match self.injection {
            Some(Injection::PerturbU(eps)) => {
                let e = random_element_with(&self.alg, &mut rng);
                let e = e.scale_real(1.0 / operator_norm(&e));
                &u + e.scale_real(eps)
            }
            Some(Injection::ForeignU) => {
                random_unitary_with(&StarAlgebra::full(self.n()), &mut rng)
            }
            Some(Injection::ZeroU) => ComplexMatrix::zeros(self.n()),
            _ => u,
        }
    }

    /// Lattice projections the suite iterates over, or the injected
    /// non-central one.
    fn projections_to_check(&self, law: LawId) -> Vec<(Vec<usize>, ComplexMatrix)> {
        if self.injection == Some(Injection::NonCentralP) {
            return vec![(Vec::new(), mixing_projection(self.n()))];
        }
        let k = self.projections.count();
        if k <= MAX_ENUMERATED_LATTICE {
            return self.projections.lattice();
        }
        let mut rng = self.rng(law, u64::MAX - 1);
        (0..16)
            .map(|_| {
                let mask: u64 = rng.gen::<u64>() & ((1u64 << k) - 1);
                let sel = crate::algebra::mask_to_selector(mask, k);
                let p = self.projections.from_mask(mask);
                (sel, p)
            })
            .collect()
    }

    /// Basis followed by `samples` random elements.
    fn elements(&self, law: LawId, label: u64) -> Vec<ComplexMatrix> {
        let mut rng = self.rng(law, label);
        let mut out: Vec<ComplexMatrix> = self.alg.basis().to_vec();
        out.extend((0..self.samples).map(|_| random_element_with(&self.alg, &mut rng)));
        out
    }

    fn norm(&self, a: &ComplexMatrix) -> f64 {
        if self.injection == Some(Injection::NonCStarNorm) {
            a.frobenius_norm()
        } else {
            operator_norm(a)
        }
    }
}

/// Rank-one projection onto `(e_0 + e_{n-1}) / √2`.
pub fn mixing_projection(n: usize) -> ComplexMatrix {
    let mut v = vec![C64::new(0.0, 0.0); n];
    v[0] += C64::new(1.0, 0.0);
    v[n - 1] += C64::new(1.0, 0.0);
    let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    ComplexMatrix::wrap(DMatrix::from_fn(n, n, |i, j| {
        v[i] * v[j].conj() / (norm * norm)
    }))
}

fn rel(diff: &ComplexMatrix, scale: f64) -> f64 {
    diff.frobenius_norm() / scale.max(1.0)
}

fn fro(a: &ComplexMatrix) -> f64 {
    a.frobenius_norm()
}

/// The full battery of algebra laws for one deformation: closure,
/// associativity, bilinearity, involution laws, unit and the C*-identity.
pub fn check_deformed_algebra(
    d: &DeformedAlgebra,
    samples: usize,
    seed: Seed,
    cfg: &ToleranceConfig,
) -> LawReport {
    let mut tally = Tally::new(LawId::LemmaConstruction.as_str(), seed, cfg);
    let base = d.base();
    let basis = base.basis();
    let dim = basis.len();
    let ctx = |xs: &[&ComplexMatrix]| json!({ "inputs": xs, "u": d.u(), "p": d.p() });

    let mut rng = seed.derive("lemma-triples", 0).rng();
    let mut triples: Vec<(ComplexMatrix, ComplexMatrix, ComplexMatrix)> = Vec::new();
    if dim * dim * dim <= MAX_BASIS_TRIPLES {
        for a in basis {
            for b in basis {
                for c in basis {
                    triples.push((a.clone(), b.clone(), c.clone()));
                }
            }
        }
    } else {
        for _ in 0..MAX_BASIS_TRIPLES / 2 {
            let pick = |r: &mut rand_chacha::ChaCha8Rng| basis[r.gen_range(0..dim)].clone();
            triples.push((pick(&mut rng), pick(&mut rng), pick(&mut rng)));
        }
    }
    for _ in 0..samples {
        triples.push((
            random_element_with(base, &mut rng),
            random_element_with(base, &mut rng),
            random_element_with(base, &mut rng),
        ));
    }
    for (a, b, c) in &triples {
        let left = d.product(&d.product(a, b), c);
        let right = d.product(a, &d.product(b, c));
        let scale = fro(a) * fro(b) * fro(c);
        tally.record("associativity", rel(&(&left - &right), scale), || {
            ctx(&[a, b, c])
        });
    }

    for a in basis {
        for b in basis {
            let ab = d.product(a, b);
            tally.record("closure", base.space().residual(&ab), || ctx(&[a, b]));
            let lhs = d.star(&ab);
            let rhs = d.product(&d.star(b), &d.star(a));
            tally.record("star_antimultiplicative", rel(&(&lhs - &rhs), 1.0), || {
                ctx(&[a, b])
            });
        }
    }

    let unit = d.unit();
    for a in basis
        .iter()
        .cloned()
        .chain((0..samples).map(|_| random_element_with(base, &mut rng)))
    {
        let scale = fro(&a);
        tally.record(
            "star_involutive",
            rel(&(d.star(&d.star(&a)) - &a), scale),
            || ctx(&[&a]),
        );
        tally.record(
            "star_closure",
            base.space().residual(&d.star(&a)) / scale.max(1.0),
            || ctx(&[&a]),
        );
        tally.record(
            "unit_left",
            rel(&(d.product(&unit, &a) - &a), scale),
            || ctx(&[&a]),
        );
        tally.record(
            "unit_right",
            rel(&(d.product(&a, &unit) - &a), scale),
            || ctx(&[&a]),
        );
    }

    for _ in 0..samples.max(1) {
        let a = random_element_with(base, &mut rng);
        let b = random_element_with(base, &mut rng);
        let c = random_element_with(base, &mut rng);
        let lambda = C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
        let scale = (fro(&a) + lambda.norm() * fro(&b)) * fro(&c);
        let comb = &a + b.scale(lambda);
        let left = d.product(&comb, &c) - (d.product(&a, &c) + d.product(&b, &c).scale(lambda));
        tally.record("bilinear_left", rel(&left, scale), || ctx(&[&a, &b, &c]));
        let right = d.product(&c, &comb) - (d.product(&c, &a) + d.product(&c, &b).scale(lambda));
        tally.record("bilinear_right", rel(&right, scale), || ctx(&[&a, &b, &c]));
        let conj = d.star(&a.scale(lambda)) - d.star(&a).scale(lambda.conj());
        tally.record(
            "star_conjugate_linear",
            rel(&conj, lambda.norm() * fro(&a)),
            || ctx(&[&a]),
        );
    }

    tally.absorb(verify_cstar_identity(
        d,
        samples,
        seed.derive("lemma-cstar", 0),
        cfg,
    ));
    let mut report = tally.finish();
    report.law_id = LawId::LemmaConstruction.as_str().into();
    report
}

/// Random unitary `u ∈ A` and every central projection `p`: the deformed
/// structure is a unital C*-algebra.
pub fn suite_lemma_construction(ctx: &LawContext) -> LawReport {
    let law = LawId::LemmaConstruction;
    let u = ctx.unitary(law);
    let mut tally = Tally::new(law.as_str(), ctx.seed, &ctx.cfg);
    for (i, (_, p)) in ctx.projections_to_check(law).into_iter().enumerate() {
        let d = DeformedAlgebra::new_unchecked(ctx.alg.clone(), u.clone(), p);
        let sub_seed = ctx.seed.derive(law.as_str(), i as u64);
        tally.absorb(check_deformed_algebra(&d, ctx.samples, sub_seed, &ctx.cfg));
    }
    tally.finish()
}

/// `A` is commutative iff the deformed algebra is, with
/// `‖a∘b - b∘a‖ = ‖aub - bua‖` for every pair.
pub fn suite_commutativity_equivalence(ctx: &LawContext) -> LawReport {
    let law = LawId::CommutativityEquivalence;
    let u = ctx.unitary(law);
    let elements = ctx.elements(law, 0);
    let basis_len = ctx.alg.dim();
    let commutative = ctx.alg.is_commutative(&ctx.cfg);
    let mut tally = Tally::new(law.as_str(), ctx.seed, &ctx.cfg);
    for (_, p) in ctx.projections_to_check(law) {
        let d = DeformedAlgebra::new_unchecked(ctx.alg.clone(), u.clone(), p);
        let mut deformed_max: f64 = 0.0;
        let mut original_max: f64 = 0.0;
        let pairs = (0..basis_len)
            .flat_map(|i| (0..basis_len).map(move |j| (i, j)))
            .chain((basis_len..elements.len()).map(|i| (i, i - 1)));
        for (i, j) in pairs {
            let (a, b) = (&elements[i], &elements[j]);
            let scale = fro(a) * fro(b);
            let deformed = fro(&(d.product(a, b) - d.product(b, a)));
            let twisted = fro(&(a * &u * b - b * &u * a));
            original_max = original_max.max(fro(&a.commutator(b)) / scale.max(1.0));
            deformed_max = deformed_max.max(deformed / scale.max(1.0));
            tally.record(
                "commutator_identity",
                (deformed - twisted).abs() / scale.max(1.0),
                || json!({ "a": a, "b": b, "u": d.u(), "p": d.p() }),
            );
        }
        let deformed_commutative = deformed_max <= ctx.cfg.tol_rel;
        let residual = if commutative {
            deformed_max
        } else if deformed_commutative {
            original_max
        } else {
            0.0
        };
        tally.outcome(
            "equivalence",
            commutative == deformed_commutative,
            residual,
            || {
                json!({
                    "algebra_commutative": commutative,
                    "deformed_commutative": deformed_commutative,
                    "u": d.u(),
                    "p": d.p(),
                })
            },
        );
    }
    tally.finish()
}

/// Kernel of `a ↦ (a∘b - b∘a)_b` over the basis.
pub fn deformed_center(d: &DeformedAlgebra, cfg: &ToleranceConfig) -> Subspace {
    let basis = d.base().basis();
    d.base().space().kernel_of(
        |a| {
            basis
                .iter()
                .map(|b| d.product(a, b) - d.product(b, a))
                .collect()
        },
        cfg,
    )
}

/// The deformed center equals `Z(A) u*`; for a factor it is `C u*`.
pub fn suite_center_correspondence(ctx: &LawContext) -> LawReport {
    let law = LawId::CenterCorrespondence;
    let u = ctx.unitary(law);
    let z = center(&ctx.alg, &ctx.cfg);
    let shifted: Vec<ComplexMatrix> = z.basis().iter().map(|c| c * u.adjoint()).collect();
    let expected = Subspace::span(ctx.n(), &shifted, &ctx.cfg).expect("dimensions agree");
    let mut tally = Tally::new(law.as_str(), ctx.seed, &ctx.cfg);
    for (_, p) in ctx.projections_to_check(law) {
        let d = DeformedAlgebra::new_unchecked(ctx.alg.clone(), u.clone(), p);
        let found = deformed_center(&d, &ctx.cfg);
        let payload = || json!({ "u": d.u(), "p": d.p(), "found_dim": found.dim(), "expected_dim": expected.dim() });
        tally.record(
            "correspondence",
            found.equality_residual(&expected),
            payload,
        );
        if z.dim() == 1 {
            let unit_in = found.residual(&u.adjoint());
            tally.outcome(
                "factor_center_is_scalar_unit",
                found.dim() == 1 && unit_in <= ctx.cfg.tol_rel,
                unit_in,
                payload,
            );
        }
    }
    tally.finish()
}

/// `I = q A` for a sum `q` of minimal central projections is an ideal of
/// every deformed algebra.
pub fn suite_ideal_stability(ctx: &LawContext, ideal_blocks: &[usize]) -> Result<LawReport> {
    let law = LawId::IdealStability;
    let q = ctx.projections.sum(ideal_blocks)?;
    let u = ctx.unitary(law);
    let mut rng = ctx.rng(law, 0);
    let mut tally = Tally::new(law.as_str(), ctx.seed, &ctx.cfg);
    let in_ideal = |x: &ComplexMatrix| ctx.alg.space().residual(x) + fro(&(x - &q * x));
    for (_, p) in ctx.projections_to_check(law) {
        let d = DeformedAlgebra::new_unchecked(ctx.alg.clone(), u.clone(), p);
        for _ in 0..ctx.samples.max(1) {
            let a = random_element_with(&ctx.alg, &mut rng);
            let b = &q * random_element_with(&ctx.alg, &mut rng);
            let scale = fro(&a) * fro(&b);
            let payload =
                || json!({ "a": a, "b": b, "u": d.u(), "p": d.p(), "ideal_blocks": ideal_blocks });
            tally.record(
                "left",
                in_ideal(&d.product(&a, &b)) / scale.max(1.0),
                payload,
            );
            tally.record(
                "right",
                in_ideal(&d.product(&b, &a)) / scale.max(1.0),
                payload,
            );
        }
    }
    Ok(tally.finish())
}

/// Central, positive, invertible, non-scalar witness `q_0 + 2 (1 - q_0)`.
pub fn converse_witness(projections: &CentralProjectionSet) -> Result<ComplexMatrix> {
    if projections.count() < 2 {
        return Err(Error::CenterTrivial);
    }
    let q = &projections.minimal[0];
    let n = q.dim();
    Ok(q + (ComplexMatrix::identity(n) - q).scale_real(2.0))
}

/// `1 - σ_min / σ_max`: operator-norm distance from `z / ‖z‖` to the
/// nearest unitary.
pub fn distance_from_scaled_unitary(z: &ComplexMatrix) -> f64 {
    let sv = singular_values(z);
    let max = *sv.last().unwrap();
    if max == 0.0 {
        return 1.0;
    }
    1.0 - sv[0] / max
}

/// Isometric pairs `‖a x b‖ = ‖x‖` in both directions of the trivial-center
/// characterization.
///
/// Forward: `a = λw`, `b = v/λ` for unitaries `w, v` are isometric and
/// `a/‖a‖`, `‖a‖ b` are unitary. On a nontrivial center, the central
/// witness `z` is isometric with `z⁻¹` but is no multiple of a unitary. On
/// a trivial center, the proof's operative step is checked: whenever
/// `‖a⁻¹ x a‖ ≤ ‖x‖` on every sample, `a a*` is a multiple of 1.
pub fn suite_trivial_center_isometries(ctx: &LawContext) -> LawReport {
    let law = LawId::TrivialCenterIsometries;
    let mut rng = ctx.rng(law, 0);
    let mut tally = Tally::new(law.as_str(), ctx.seed, &ctx.cfg);
    let xs = ctx.elements(law, 1);
    let perturb = match ctx.injection {
        Some(Injection::PerturbU(eps)) => eps,
        _ => 0.0,
    };
    let cases = ctx.samples.max(1);
    for case in 0..cases {
        let mut w = random_unitary_with(&ctx.alg, &mut rng);
        if perturb > 0.0 {
            let e = random_element_with(&ctx.alg, &mut rng);
            w = &w + e.scale_real(perturb / operator_norm(&e));
        }
        let v = random_unitary_with(&ctx.alg, &mut rng);
        let lambda: f64 = rng.sample::<f64, _>(StandardNormal).exp();
        let a = w.scale_real(lambda);
        let b = v.scale_real(1.0 / lambda);
        // the basis on the first case, one random sample per later case
        let probe: Vec<&ComplexMatrix> = if case == 0 {
            xs.iter().collect()
        } else {
            vec![&xs[(ctx.alg.dim() + case) % xs.len()]]
        };
        for x in probe {
            let nx = operator_norm(x);
            let residual = (operator_norm(&(&a * x * &b)) - nx).abs() / nx.max(1.0);
            tally.record("isometry", residual, || json!({ "a": a, "b": b, "x": x }));
        }
        let scale = operator_norm(&a);
        let ua = a.scale_real(1.0 / scale);
        let ub = b.scale_real(scale);
        let residual = unitarity_residual(&ua).max(unitarity_residual(&ub));
        tally.record(
            "unitary_rescaling",
            residual,
            || json!({ "a": a, "b": b, "lambda": 1.0 / scale }),
        );
    }

    match converse_witness(&ctx.projections) {
        Ok(z) => {
            let z_inv = inverse(&z, &ctx.cfg).expect("witness is invertible");
            for x in &xs {
                let nx = operator_norm(x);
                let residual = (operator_norm(&(&z * x * &z_inv)) - nx).abs() / nx.max(1.0);
                tally.record("central_isometry", residual, || json!({ "z": z, "x": x }));
            }
            let distance = distance_from_scaled_unitary(&z);
            tally.outcome(
                "witness_not_scaled_unitary",
                distance >= 0.1,
                0.0,
                || json!({ "z": z, "distance": distance }),
            );
        }
        Err(_) => {
            for case in 0..4u64 {
                let mut crng = ctx.rng(law, 100 + case);
                let a = if case == 0 {
                    let w = random_unitary_with(&ctx.alg, &mut crng);
                    w.scale_real(1.5)
                } else {
                    match random_invertible_with(&ctx.alg, &mut crng, &ctx.cfg) {
                        Ok(a) => a,
                        Err(_) => continue,
                    }
                };
                let Ok(a_inv) = inverse(&a, &ctx.cfg) else {
                    continue;
                };
                let contractive = xs.iter().all(|x| {
                    let nx = operator_norm(x);
                    operator_norm(&(&a_inv * x * &a)) <= nx * (1.0 + ctx.cfg.tol_rel)
                });
                let na = operator_norm(&a);
                let scalar_defect = fro(&((&a * a.adjoint()).scale_real(1.0 / (na * na))
                    - ComplexMatrix::identity(ctx.n())));
                let ok = !contractive || scalar_defect <= ctx.cfg.tol_rel;
                let residual = if contractive { scalar_defect } else { 0.0 };
                tally.outcome(
                    "contraction_forces_scalar",
                    ok,
                    residual,
                    || json!({ "a": a }),
                );
            }
        }
    }
    tally.finish()
}

/// `θ(a) = a u` is a Jordan *-isomorphism from the deformed algebra onto `A`:
/// `θ(a∘a) = θ(a)²`, `θ(a★) = θ(a)*`, and `a∘a = a u a` for every `p`.
pub fn suite_jordan_theta(ctx: &LawContext) -> LawReport {
    let law = LawId::JordanTheta;
    let u = ctx.unitary(law);
    let elements = ctx.elements(law, 0);
    let basis = ctx.alg.basis();
    let mut tally = Tally::new(law.as_str(), ctx.seed, &ctx.cfg);
    for (_, p) in ctx.projections_to_check(law) {
        let d = DeformedAlgebra::new_unchecked(ctx.alg.clone(), u.clone(), p);
        let theta = |a: &ComplexMatrix| a * &u;
        for a in &elements {
            let scale = fro(a) * fro(a);
            let payload = || json!({ "a": a, "u": d.u(), "p": d.p() });
            let square = d.product(a, a);
            tally.record(
                "square_p_independent",
                rel(&(&square - a * &u * a), scale),
                payload,
            );
            let ta = theta(a);
            tally.record(
                "theta_square",
                rel(&(theta(&square) - &ta * &ta), scale),
                payload,
            );
            tally.record(
                "theta_star",
                rel(&(theta(&d.star(a)) - ta.adjoint()), fro(a)),
                payload,
            );
        }
        for a in basis {
            for b in basis {
                let lhs = theta(&(d.product(a, b) + d.product(b, a)));
                let (ta, tb) = (theta(a), theta(b));
                let rhs = &ta * &tb + &tb * &ta;
                tally.record(
                    "theta_jordan",
                    rel(&(lhs - rhs), 1.0),
                    || json!({ "a": a, "b": b, "u": d.u(), "p": d.p() }),
                );
            }
        }
    }
    tally.finish()
}

/// Largest eigenvalue of the Hermitian dilation `[[0, a], [a*, 0]]`, an
/// operator-norm route independent of `a* a`.
pub fn dilation_norm(a: &ComplexMatrix) -> f64 {
    let n = a.dim();
    let m = a.as_matrix();
    let dilation = DMatrix::from_fn(2 * n, 2 * n, |i, j| match (i < n, j < n) {
        (true, false) => m[(i, j - n)],
        (false, true) => m[(j, i - n)].conj(),
        _ => C64::new(0.0, 0.0),
    });
    eigh(&dilation).max_eigenvalue()
}

/// `‖a‖² = λmax(a* a) = r(a* a)` and `‖a* a‖ = ‖a‖²`.
pub fn suite_norm_uniqueness(ctx: &LawContext) -> LawReport {
    let law = LawId::NormUniqueness;
    let mut tally = Tally::new(law.as_str(), ctx.seed, &ctx.cfg);
    for a in ctx.elements(law, 0) {
        let norm = if ctx.injection == Some(Injection::NonCStarNorm) {
            ctx.norm(&a)
        } else {
            dilation_norm(&a)
        };
        let gram = a.adjoint() * &a;
        let lmax = eigh(gram.as_matrix()).max_eigenvalue();
        let scale = (norm * norm).max(1.0);
        let payload = || json!({ "a": a });
        tally.record(
            "norm_squared_is_gram_lmax",
            (norm * norm - lmax).abs() / scale,
            payload,
        );
        tally.record(
            "cstar_ambient",
            (ctx.norm(&gram) - norm * norm).abs() / scale,
            payload,
        );
        match spectral_radius_normal(&gram, &ctx.cfg) {
            Ok(r) => tally.record("gram_radius", (r - norm * norm).abs() / scale, payload),
            Err(_) => tally.outcome("gram_radius", false, f64::MAX, payload),
        }
    }
    tally.finish()
}

/// `‖a★∘a‖ = ‖a‖²` for the suite's unitary and every central projection.
pub fn suite_cstar_identity(ctx: &LawContext) -> LawReport {
    let law = LawId::CstarIdentity;
    let u = ctx.unitary(law);
    let mut tally = Tally::new(law.as_str(), ctx.seed, &ctx.cfg);
    for (i, (_, p)) in ctx.projections_to_check(law).into_iter().enumerate() {
        let d = DeformedAlgebra::new_unchecked(ctx.alg.clone(), u.clone(), p);
        let sub = ctx.seed.derive(law.as_str(), i as u64);
        tally.absorb(verify_cstar_identity(&d, ctx.samples, sub, &ctx.cfg));
    }
    let mut report = tally.finish();
    report.law_id = law.as_str().into();
    report
}

/// For random invertible `a`: the positivizing unitary is a unitary of `A`,
/// `u* a = |a|` is PSD, `a` is positive in `A(u*, p)` for every `p`, and no
/// other unitary `w ≠ 1` keeps both `a` and `w a` (or `|a|` and `w |a|`)
/// positive.
pub fn suite_positivizer_uniqueness(ctx: &LawContext) -> LawReport {
    let law = LawId::PositivizerUniqueness;
    let mut tally = Tally::new(law.as_str(), ctx.seed, &ctx.cfg);
    let cfg = &ctx.cfg;
    if ctx.injection == Some(Injection::SingularA) {
        let a = singular_element(ctx);
        let mut rng = ctx.rng(law, 0);
        let n = ctx.n();
        let ws: Vec<ComplexMatrix> = (0..UNIQUENESS_TRIALS)
            .map(|_| {
                let theta: f64 = rng.gen_range(0.5..2.5);
                let phase = C64::new(theta.cos(), theta.sin());
                &a + (ComplexMatrix::identity(n) - &a).scale(phase)
            })
            .collect();
        tally_double_positives(&mut tally, "singular_double_positive", &a, ws, cfg);
        return tally.finish();
    }
    let lattice = ctx.projections_to_check(law);
    for case in 0..ctx.samples.max(1) as u64 {
        let mut rng = ctx.rng(law, case);
        let a = match random_invertible_with(&ctx.alg, &mut rng, cfg) {
            Ok(a) => a,
            Err(e) => {
                tally.outcome(
                    "draw_invertible",
                    false,
                    f64::MAX,
                    || json!({ "error": e.to_string() }),
                );
                continue;
            }
        };
        let u = match positivizing_unitary(&ctx.alg, &a, cfg) {
            Ok(u) => u,
            Err(e) => {
                tally.outcome(
                    "positivizer",
                    false,
                    f64::MAX,
                    || json!({ "a": a, "error": e.to_string() }),
                );
                continue;
            }
        };
        let norm = operator_norm(&a);
        let payload = || json!({ "a": a, "u": u });
        tally.record("unitarity", unitarity_residual(&u), payload);
        tally.record("membership", ctx.alg.space().residual(&u), payload);
        let modulus = u.adjoint() * &a;
        let herm = (&modulus + modulus.adjoint()).scale_real(0.5);
        let min_eig = eigh(herm.as_matrix()).min_eigenvalue();
        let defect = (fro(&(&modulus - modulus.adjoint())) + (-min_eig).max(0.0)) / norm.max(1.0);
        tally.record("modulus_psd", defect, payload);
        for (_, p) in &lattice {
            let d = DeformedAlgebra::new_unchecked(ctx.alg.clone(), u.adjoint(), p.clone());
            match is_positive_deformed(&d, &a, cfg) {
                Ok(pos) if pos.positive => {
                    let b = pos.witness.expect("positive verdict carries a witness");
                    let residual = rel(&(d.product(&b, &b) - &a), norm);
                    tally.record("positive_in_deformed", residual, payload);
                }
                Ok(pos) => tally.outcome("positive_in_deformed", false, pos.residual, payload),
                Err(e) => tally.outcome(
                    "positive_in_deformed",
                    false,
                    f64::MAX,
                    || json!({ "a": a, "error": e.to_string() }),
                ),
            }
        }
        match check_positivizer_uniqueness(
            &ctx.alg,
            &a,
            UNIQUENESS_TRIALS,
            ctx.seed.derive("uniqueness", case),
            cfg,
        ) {
            Ok(report) => tally.absorb(report),
            Err(e) => tally.outcome(
                "uniqueness",
                false,
                f64::MAX,
                || json!({ "a": a, "error": e.to_string() }),
            ),
        }
    }
    let mut report = tally.finish();
    report.law_id = law.as_str().into();
    report
}

/// A singular positive element of the algebra: a proper central projection
/// when one exists, else the spectral projection of a random Hermitian
/// element onto its lowest eigenvalue, else zero.
fn singular_element(ctx: &LawContext) -> ComplexMatrix {
    let n = ctx.n();
    if ctx.projections.count() >= 2 {
        return ctx.projections.minimal[0].clone();
    }
    let h = crate::algebra::random_hermitian_with(
        &ctx.alg,
        &mut ctx.rng(LawId::PositivizerUniqueness, 7),
    );
    let eig = eigh(h.as_matrix());
    let lowest = eig.min_eigenvalue();
    let spread = eig.max_eigenvalue() - lowest;
    if spread <= ctx.cfg.tol_rel {
        return ComplexMatrix::zeros(n);
    }
    eig.map(|x| {
        if x - lowest <= 1e-7 * spread {
            C64::new(1.0, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

/// Runs a single suite, using the last minimal central projection as the
/// ideal for [`suite_ideal_stability`].
pub fn run_law(ctx: &LawContext, law: LawId) -> LawReport {
    match law {
        LawId::LemmaConstruction => suite_lemma_construction(ctx),
        LawId::CommutativityEquivalence => suite_commutativity_equivalence(ctx),
        LawId::CenterCorrespondence => suite_center_correspondence(ctx),
        LawId::IdealStability => {
            let last = ctx.projections.count() - 1;
            suite_ideal_stability(ctx, &[last]).expect("index in range")
        }
        LawId::TrivialCenterIsometries => suite_trivial_center_isometries(ctx),
        LawId::JordanTheta => suite_jordan_theta(ctx),
        LawId::NormUniqueness => suite_norm_uniqueness(ctx),
        LawId::CstarIdentity => suite_cstar_identity(ctx),
        LawId::PositivizerUniqueness => suite_positivizer_uniqueness(ctx),
    }
}

/// Every suite, in [`LawId::ALL`] order, one thread per suite. `fault`
/// injects a hypothesis violation into exactly one suite.
pub fn run_all_with(ctx: &LawContext, fault: Option<(LawId, Injection)>) -> Vec<LawReport> {
    std::thread::scope(|scope| {
        let handles: Vec<_> = LawId::ALL
            .iter()
            .map(|&law| {
                let injection = match fault {
                    Some((target, injection)) if target == law => Some(injection),
                    _ => None,
                };
                let local = ctx.with_injection(injection);
                scope.spawn(move || run_law(&local, law))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("suite thread panicked"))
            .collect()
    })
}

pub fn run_all(spec: &InstanceSpec) -> Result<Vec<LawReport>> {
    let ctx = LawContext::from_spec(spec, ToleranceConfig::default())?;
    Ok(run_all_with(&ctx, None))
}

pub fn all_passed(reports: &[LawReport]) -> bool {
    reports.iter().all(LawReport::passed)
}
