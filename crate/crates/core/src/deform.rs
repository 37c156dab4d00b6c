//! Deformed algebras `A(u, p)`.
//!
//! For a unitary `u` and a central projection `p` of `A`, the product
//! `a∘b = p a u b + (1 - p) b u a` and the involution `a★ = u* a* u*` make
//! `A` a unital C*-algebra again, with the same norm and unit `u*`. This
//! module builds those algebras, decides self-adjointness and positivity in
//! them, finds the unique unitary that makes an invertible element
//! positive, and runs the inverse problem: given only the structure
//! constants of a candidate product, recover `(u, p)`.

use nalgebra::{DMatrix, DVector};
use serde_json::json;

use crate::algebra::{
    central_projections, contains, mask_to_selector, random_element_with, random_unitary_with,
    CentralProjectionSet, StarAlgebra,
};
use crate::error::{Error, Result};
use crate::matcore::{
    least_squares, operator_norm, polar_decompose, psd_check, sqrt_psd, unitarity_residual, Check,
    ComplexMatrix, ToleranceConfig, C64, ONE,
};
use crate::report::{LawReport, Tally};
use crate::seed::Seed;

/// `A` with the deformed product and involution for a fixed `(u, p)`.
#[derive(Debug, Clone)]
pub struct DeformedAlgebra {
    base: StarAlgebra,
    u: ComplexMatrix,
    p: ComplexMatrix,
    complement: ComplexMatrix,
    u_adj: ComplexMatrix,
}

impl DeformedAlgebra {
    /// Validates that `u` is a unitary of `base` and `p` a central projection.
    pub fn new(
        base: StarAlgebra,
        u: ComplexMatrix,
        p: ComplexMatrix,
        cfg: &ToleranceConfig,
    ) -> Result<Self> {
        let n = base.ambient_dim();
        if u.dim() != n || p.dim() != n {
            return Err(Error::DimensionMismatch(format!(
                "u is {0}x{0} and p is {1}x{1}, algebra acts on C^{n}",
                u.dim(),
                p.dim()
            )));
        }
        let membership = contains(&base, &u, cfg)?;
        if !membership.holds {
            return Err(Error::NotMember {
                residual: membership.residual,
            });
        }
        let unitarity = unitarity_residual(&u).max(unitarity_residual(&u.adjoint()));
        if !cfg.accepts(unitarity, 1.0) {
            return Err(Error::NotUnitary {
                residual: unitarity,
            });
        }
        let idempotent = (&p * &p - &p).frobenius_norm();
        let selfadjoint = (&p - p.adjoint()).frobenius_norm();
        if !cfg.accepts(idempotent.max(selfadjoint), 1.0) {
            return Err(Error::NotCentralProjection(format!(
                "p is not a projection (residual {:.3e})",
                idempotent.max(selfadjoint)
            )));
        }
        let pm = contains(&base, &p, cfg)?;
        if !pm.holds {
            return Err(Error::NotCentralProjection(format!(
                "p is not in the algebra (residual {:.3e})",
                pm.residual
            )));
        }
        if let Some((i, r)) = base
            .basis()
            .iter()
            .map(|b| p.commutator(b).frobenius_norm())
            .enumerate()
            .find(|(_, r)| !cfg.accepts(*r, 1.0))
        {
            return Err(Error::NotCentralProjection(format!(
                "p does not commute with basis element {i} (residual {r:.3e})"
            )));
        }
        Ok(Self::new_unchecked(base, u, p))
    }

    /// Skips validation; used to build negative controls.
    pub fn new_unchecked(base: StarAlgebra, u: ComplexMatrix, p: ComplexMatrix) -> Self {
        let n = base.ambient_dim();
        Self {
            complement: ComplexMatrix::identity(n) - &p,
            u_adj: u.adjoint(),
            base,
            u,
            p,
        }
    }

    /// `u = I`, `p = I`: the original algebra.
    pub fn identity(base: StarAlgebra) -> Self {
        let n = base.ambient_dim();
        Self::new_unchecked(base, ComplexMatrix::identity(n), ComplexMatrix::identity(n))
    }

    pub fn base(&self) -> &StarAlgebra {
        &self.base
    }

    pub fn u(&self) -> &ComplexMatrix {
        &self.u
    }

    pub fn p(&self) -> &ComplexMatrix {
        &self.p
    }

    /// `p a u b + (1 - p) b u a`, without membership checks.
    pub fn product(&self, a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
        let aub = a * &self.u * b;
        let bua = b * &self.u * a;
        &self.p * aub + &self.complement * bua
    }

    /// `u* a* u*`, without membership checks.
    pub fn star(&self, a: &ComplexMatrix) -> ComplexMatrix {
        &self.u_adj * a.adjoint() * &self.u_adj
    }

    /// The unit `u*`.
    pub fn unit(&self) -> ComplexMatrix {
        self.u_adj.clone()
    }

    fn require_member(&self, a: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<()> {
        let m = contains(&self.base, a, cfg)?;
        if m.holds {
            Ok(())
        } else {
            Err(Error::NotMember {
                residual: m.residual,
            })
        }
    }
}

pub fn deformed_mul(
    d: &DeformedAlgebra,
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    cfg: &ToleranceConfig,
) -> Result<ComplexMatrix> {
    d.require_member(a, cfg)?;
    d.require_member(b, cfg)?;
    Ok(d.product(a, b))
}

pub fn deformed_star(
    d: &DeformedAlgebra,
    a: &ComplexMatrix,
    cfg: &ToleranceConfig,
) -> Result<ComplexMatrix> {
    d.require_member(a, cfg)?;
    Ok(d.star(a))
}

pub fn deformed_unit(d: &DeformedAlgebra) -> ComplexMatrix {
    d.unit()
}

/// `a★ = a`, tested as `a u = u* a*`. Does not depend on `p`.
pub fn is_selfadjoint_deformed(
    d: &DeformedAlgebra,
    a: &ComplexMatrix,
    cfg: &ToleranceConfig,
) -> Result<Check> {
    d.require_member(a, cfg)?;
    let residual = (a * &d.u - &d.u_adj * a.adjoint()).frobenius_norm();
    Ok(Check {
        holds: cfg.accepts(residual, operator_norm(a)),
        residual,
    })
}

/// Positivity verdict in a deformed algebra.
#[derive(Debug, Clone)]
pub struct Positivity {
    pub positive: bool,
    /// PSD defect of `u a`.
    pub residual: f64,
    /// Self-adjoint `b` with `b∘b = a`, present when positive.
    pub witness: Option<ComplexMatrix>,
}

/// `a` is positive in `A(u, p)` iff `u a` is PSD; the witness is
/// `b = u* sqrt(u a)`. Never reads `p`.
pub fn is_positive_deformed(
    d: &DeformedAlgebra,
    a: &ComplexMatrix,
    cfg: &ToleranceConfig,
) -> Result<Positivity> {
    d.require_member(a, cfg)?;
    let ua = &d.u * a;
    let check = psd_check(&ua, cfg);
    if !check.holds {
        return Ok(Positivity {
            positive: false,
            residual: check.residual,
            witness: None,
        });
    }
    let hermitian = (&ua + ua.adjoint()).scale_real(0.5);
    let root = sqrt_psd(&hermitian, cfg)?;
    Ok(Positivity {
        positive: true,
        residual: check.residual,
        witness: Some(&d.u_adj * root),
    })
}

/// The unitary `u ∈ A` for which `a` is positive in `A(u*, p)` for every `p`:
/// the polar factor `a |a|⁻¹`.
pub fn positivizing_unitary(
    alg: &StarAlgebra,
    a: &ComplexMatrix,
    cfg: &ToleranceConfig,
) -> Result<ComplexMatrix> {
    let m = contains(alg, a, cfg)?;
    if !m.holds {
        return Err(Error::NotMember {
            residual: m.residual,
        });
    }
    let u = polar_decompose(a, cfg)?.unitary;
    let um = contains(alg, &u, cfg)?;
    if !um.holds {
        // |a| is in any C*-subalgebra containing a, so this is a numerical fault.
        return Err(Error::NotMember {
            residual: um.residual,
        });
    }
    Ok(u)
}

/// Counts unitaries `w ≠ I` for which both `a` and `w a` are PSD.
pub(crate) fn tally_double_positives(
    tally: &mut Tally,
    sublaw: &str,
    a: &ComplexMatrix,
    ws: impl IntoIterator<Item = ComplexMatrix>,
    cfg: &ToleranceConfig,
) {
    let a_positive = psd_check(a, cfg).holds;
    let n = a.dim();
    for w in ws {
        let distance = w.distance(&ComplexMatrix::identity(n));
        let double = a_positive && psd_check(&(&w * a), cfg).holds;
        let residual = if double { distance } else { 0.0 };
        tally.outcome(sublaw, !double, residual, || json!({ "a": a, "w": w }));
    }
}

/// Draws `trials` unitaries `w ≠ I` in `alg` and checks that `a` and `w a`
/// are never both PSD, for `a` itself and for its modulus `|a|` (the form
/// uniqueness reduces to).
pub fn check_positivizer_uniqueness(
    alg: &StarAlgebra,
    a: &ComplexMatrix,
    trials: usize,
    seed: Seed,
    cfg: &ToleranceConfig,
) -> Result<LawReport> {
    let m = contains(alg, a, cfg)?;
    if !m.holds {
        return Err(Error::NotMember {
            residual: m.residual,
        });
    }
    let modulus = polar_decompose(a, cfg)?.modulus;
    let ws = nontrivial_unitaries(alg, trials, seed, cfg);
    let mut tally = Tally::new("positivizer_uniqueness", seed, cfg);
    tally_double_positives(&mut tally, "element", a, ws.iter().cloned(), cfg);
    tally_double_positives(&mut tally, "modulus", &modulus, ws, cfg);
    Ok(tally.finish())
}

/// Random unitaries of `alg` at distance more than `tol_rel` from `I`.
pub(crate) fn nontrivial_unitaries(
    alg: &StarAlgebra,
    count: usize,
    seed: Seed,
    cfg: &ToleranceConfig,
) -> Vec<ComplexMatrix> {
    let id = ComplexMatrix::identity(alg.ambient_dim());
    let mut out = Vec::with_capacity(count);
    let mut index = 0;
    while out.len() < count && index < 64 * (count as u64 + 1) {
        let w = random_unitary_with(alg, &mut seed.derive("w", index).rng());
        index += 1;
        if w.distance(&id) > cfg.tol_rel {
            out.push(w);
        }
    }
    out
}

/// Every diagonal unitary `w` (with `±1` on the kernel of `a`) making `w a`
/// PSD, for diagonal `a`. More than one result means the positivizer is
/// not unique, which happens exactly when `a` is singular.
pub fn diagonal_positivizers(
    a: &ComplexMatrix,
    cfg: &ToleranceConfig,
) -> Result<Vec<ComplexMatrix>> {
    let n = a.dim();
    let off: f64 = (0..n)
        .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
        .map(|(i, j)| a[(i, j)].norm_sqr())
        .sum::<f64>()
        .sqrt();
    let scale = a.diagonal().iter().fold(0.0_f64, |m, z| m.max(z.norm()));
    if !cfg.accepts(off, scale) {
        return Err(Error::InvalidInput("element is not diagonal".into()));
    }
    let choices: Vec<Vec<C64>> = a
        .diagonal()
        .iter()
        .map(|z| {
            if z.norm() > cfg.invertibility_floor * scale {
                vec![z.conj() / z.norm()]
            } else {
                vec![ONE, -ONE]
            }
        })
        .collect();
    let mut out = vec![Vec::new()];
    for options in &choices {
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<C64>| {
                options.iter().map(move |&c| {
                    let mut v = prefix.clone();
                    v.push(c);
                    v
                })
            })
            .collect();
    }
    Ok(out
        .iter()
        .map(|d| ComplexMatrix::from_diagonal(d))
        .collect())
}

/// Coefficients of `basis_i ∘ basis_j` in the algebra's basis.
#[derive(Debug, Clone, PartialEq)]
pub struct StructureConstants {
    pub dim: usize,
    /// `table[i][j][k]`.
    pub table: Vec<Vec<Vec<C64>>>,
}

/// Coefficients of `basis_i★`; extended conjugate-linearly.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct StarTable(pub Vec<Vec<C64>>);

/// Structure constants and involution table of a deformed algebra.
pub fn structure_constants(d: &DeformedAlgebra) -> (StructureConstants, StarTable) {
    let space = d.base.space();
    let basis = d.base.basis();
    let table = basis
        .iter()
        .map(|a| {
            basis
                .iter()
                .map(|b| space.coordinates(&d.product(a, b)))
                .collect()
        })
        .collect();
    let star = basis
        .iter()
        .map(|a| space.coordinates(&d.star(a)))
        .collect();
    (
        StructureConstants {
            dim: basis.len(),
            table,
        },
        StarTable(star),
    )
}

/// `(u, p)` recovered from a candidate product.
#[derive(Debug, Clone)]
pub struct DeformationRecovery {
    pub u: ComplexMatrix,
    pub p: ComplexMatrix,
    /// Indices of the minimal central projections summing to `p`.
    pub selector: Vec<usize>,
    /// Worst Frobenius error reproducing the table from `(u, p)`.
    pub max_residual: f64,
    /// Worst Frobenius error reproducing the involution table.
    pub star_residual: f64,
}

const EXHAUSTIVE_LIMIT: usize = 12;

/// Recovers `(u, p)` from the structure constants of a candidate product.
///
/// The unit `e` of the product is found by least squares; `u = e*` must be
/// unitary and reproduce the involution table as `a ↦ u* a* u*`. Then `p`
/// is chosen from the central-projection lattice by minimizing the
/// reconstruction residual, exhaustively for up to 12 minimal projections
/// and blockwise beyond that. Summands where `A` is commutative cannot
/// distinguish `p` and are always included in the selector.
pub fn recover_deformation(
    alg: &StarAlgebra,
    sc: &StructureConstants,
    star: &StarTable,
    cfg: &ToleranceConfig,
) -> Result<DeformationRecovery> {
    let d = alg.dim();
    check_table_shape(d, sc, star)?;
    let space = alg.space();
    let basis = alg.basis();
    let n = alg.ambient_dim();

    // unit: e∘b_j = b_j = b_j∘e for all j
    let rows = 2 * d * d;
    let mut system = DMatrix::<C64>::zeros(rows, d);
    let mut rhs = DVector::<C64>::zeros(rows);
    for j in 0..d {
        for k in 0..d {
            let r = j * d + k;
            for i in 0..d {
                system[(r, i)] = sc.table[i][j][k];
                system[(d * d + r, i)] = sc.table[j][i][k];
            }
            if j == k {
                rhs[r] = ONE;
                rhs[d * d + r] = ONE;
            }
        }
    }
    let x = least_squares(&system, &rhs, cfg.tol_rel);
    let unit_residual = (&system * &x - &rhs).norm();
    if !cfg.accepts(unit_residual, 1.0) {
        return Err(Error::NoUnit {
            residual: unit_residual,
        });
    }
    let unit = space.combine(x.as_slice());
    let u = unit.adjoint();
    let unitarity = unitarity_residual(&u).max(unitarity_residual(&unit));
    if !cfg.accepts(unitarity, 1.0) {
        return Err(Error::NotDeformation {
            reason: "the unit is not the adjoint of a unitary".into(),
            residual: unitarity,
        });
    }

    let u_adj = &unit;
    let star_residual = basis
        .iter()
        .zip(&star.0)
        .map(|(b, coeffs)| {
            space
                .combine(coeffs)
                .distance(&(u_adj * b.adjoint() * u_adj))
        })
        .fold(0.0, f64::max);
    if !cfg.accepts(star_residual, 1.0) {
        return Err(Error::NotDeformation {
            reason: "the involution is not a ↦ u* a* u*".into(),
            residual: star_residual,
        });
    }

    let products: Vec<Vec<ComplexMatrix>> = sc
        .table
        .iter()
        .map(|row| row.iter().map(|c| space.combine(c)).collect())
        .collect();
    let twisted: Vec<Vec<ComplexMatrix>> = basis
        .iter()
        .map(|a| basis.iter().map(|b| a * &u * b).collect())
        .collect();
    let projections = central_projections(alg, cfg)?;
    let mask = choose_projection(&projections, &products, &twisted);
    let mut selector = mask_to_selector(mask, projections.count());
    selector = projections.canonical_selector(alg, &selector, cfg);
    let p = projections.sum(&selector)?;
    let complement = ComplexMatrix::identity(n) - &p;

    let mut max_residual: f64 = 0.0;
    for i in 0..d {
        for j in 0..d {
            let model = &p * &twisted[i][j] + &complement * &twisted[j][i];
            max_residual = max_residual.max(products[i][j].distance(&model));
        }
    }
    if !cfg.accepts(max_residual, 1.0) {
        return Err(Error::NotDeformation {
            reason: "no central projection reproduces the product".into(),
            residual: max_residual,
        });
    }
    Ok(DeformationRecovery {
        u,
        p,
        selector,
        max_residual,
        star_residual,
    })
}

fn check_table_shape(d: usize, sc: &StructureConstants, star: &StarTable) -> Result<()> {
    let bad = |what: &str| {
        Err(Error::InvalidInput(format!(
            "structure table does not match algebra dimension {d}: {what}"
        )))
    };
    if sc.dim != d || sc.table.len() != d {
        return bad("table dimension");
    }
    for (i, row) in sc.table.iter().enumerate() {
        if row.len() != d {
            return bad(&format!("row {i}"));
        }
        if let Some(j) = row.iter().position(|c| c.len() != d) {
            return bad(&format!("entry ({i}, {j})"));
        }
    }
    if star.0.len() != d {
        return bad("star table length");
    }
    if let Some(i) = star.0.iter().position(|c| c.len() != d) {
        return bad(&format!("star entry {i}"));
    }
    Ok(())
}

// The residual of pair (i, j) splits over the orthogonal central summands:
// ‖R‖² = Σ_k ‖q_k R‖², with the k-th term depending only on whether q_k ≤ p.
fn choose_projection(
    projections: &CentralProjectionSet,
    products: &[Vec<ComplexMatrix>],
    twisted: &[Vec<ComplexMatrix>],
) -> u64 {
    let k = projections.count();
    let d = products.len();
    // cost[pair][block][choice]
    let mut cost = vec![vec![[0.0_f64; 2]; k]; d * d];
    for i in 0..d {
        for j in 0..d {
            let without = &products[i][j] - &twisted[j][i];
            let with = &products[i][j] - &twisted[i][j];
            for (b, q) in projections.minimal.iter().enumerate() {
                cost[i * d + j][b] = [
                    (q * &without).frobenius_norm().powi(2),
                    (q * &with).frobenius_norm().powi(2),
                ];
            }
        }
    }
    if k <= EXHAUSTIVE_LIMIT {
        let eval = |mask: u64| -> f64 {
            cost.iter()
                .map(|blocks| {
                    blocks
                        .iter()
                        .enumerate()
                        .map(|(b, c)| c[(mask >> b & 1) as usize])
                        .sum::<f64>()
                })
                .fold(0.0, f64::max)
        };
        let mut best = (u64::MAX, f64::INFINITY);
        // Descending so that ties resolve toward including summands.
        for mask in (0..1u64 << k).rev() {
            let c = eval(mask);
            if c < best.1 {
                best = (mask, c);
            }
        }
        best.0
    } else {
        (0..k)
            .filter(|&b| {
                let total =
                    |choice: usize| cost.iter().map(|blocks| blocks[b][choice]).sum::<f64>();
                total(1) <= total(0)
            })
            .fold(0u64, |mask, b| mask | 1 << b)
    }
}

/// Samples `a` (the basis plus `samples` random elements) and checks
/// `‖a★∘a‖ = ‖a‖²` and `‖a★∘a‖ = max(‖pa‖, ‖(1-p)a‖)²`.
pub fn verify_cstar_identity(
    d: &DeformedAlgebra,
    samples: usize,
    seed: Seed,
    cfg: &ToleranceConfig,
) -> LawReport {
    let mut tally = Tally::new("cstar_identity", seed, cfg);
    let randoms = (0..samples)
        .map(|i| random_element_with(&d.base, &mut seed.derive("cstar", i as u64).rng()));
    let elements: Vec<ComplexMatrix> = d.base.basis().iter().cloned().chain(randoms).collect();
    for a in &elements {
        let norm = operator_norm(a);
        let scale = (norm * norm).max(1.0);
        let lhs = operator_norm(&d.product(&d.star(a), a));
        tally.record(
            "cstar",
            (lhs - norm * norm).abs() / scale,
            || json!({ "a": a, "u": d.u, "p": d.p }),
        );
        let block = operator_norm(&(&d.p * a)).max(operator_norm(&(&d.complement * a)));
        tally.record(
            "block_max",
            (lhs - block * block).abs() / scale,
            || json!({ "a": a, "u": d.u, "p": d.p }),
        );
    }
    tally.finish()
}
