//! Unital *-subalgebras of `M_n` and their structure: closure from
//! generators, commutant, bicommutant, center and central projections.
//!
//! Every subspace is carried by a Hilbert–Schmidt-orthonormal basis so
//! that membership, projection and span comparisons are plain inner
//! products.

use std::cmp::Ordering;

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::matcore::{
    eigh, gram_null_space, operator_norm, singular_values, Check, ComplexMatrix, ToleranceConfig,
    C64, I, ZERO,
};
use crate::seed::Seed;

/// Linear subspace of `M_n` with an HS-orthonormal basis.
#[derive(Debug, Clone)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Vec<ComplexMatrix>,
}

impl Subspace {
    pub fn zero(ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            basis: Vec::new(),
        }
    }

    /// Orthonormalizes `candidates` in order, dropping dependent ones.
    pub fn span<'a>(
        ambient_dim: usize,
        candidates: impl IntoIterator<Item = &'a ComplexMatrix>,
        cfg: &ToleranceConfig,
    ) -> Result<Self> {
        let mut space = Self::zero(ambient_dim);
        for (idx, c) in candidates.into_iter().enumerate() {
            if c.dim() != ambient_dim {
                return Err(Error::DimensionMismatch(format!(
                    "element {idx} is {0}x{0}, expected {1}x{1}",
                    c.dim(),
                    ambient_dim
                )));
            }
            space.try_extend(c, cfg);
        }
        Ok(space)
    }

    /// Modified Gram–Schmidt with one re-orthogonalization pass. Returns
    /// whether `c` added a new direction.
    pub fn try_extend(&mut self, c: &ComplexMatrix, cfg: &ToleranceConfig) -> bool {
        let norm = c.frobenius_norm();
        if norm <= cfg.tol_abs {
            return false;
        }
        let mut r = c.scale_real(1.0 / norm);
        for _ in 0..2 {
            for b in &self.basis {
                let coeff = b.hs_inner(&r);
                r = &r - b.scale(coeff);
            }
        }
        let rn = r.frobenius_norm();
        if rn <= cfg.tol_rel {
            return false;
        }
        self.basis.push(r.scale_real(1.0 / rn));
        true
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[ComplexMatrix] {
        &self.basis
    }

    pub fn coordinates(&self, a: &ComplexMatrix) -> Vec<C64> {
        self.basis.iter().map(|b| b.hs_inner(a)).collect()
    }

    pub fn combine(&self, coeffs: &[C64]) -> ComplexMatrix {
        debug_assert_eq!(coeffs.len(), self.basis.len());
        let mut acc = ComplexMatrix::zeros(self.ambient_dim);
        for (b, &c) in self.basis.iter().zip(coeffs) {
            if c != ZERO {
                acc = acc + b.scale(c);
            }
        }
        acc
    }

    /// Orthogonal projection onto the span.
    pub fn project(&self, a: &ComplexMatrix) -> ComplexMatrix {
        self.combine(&self.coordinates(a))
    }

    /// HS norm of the component of `a` orthogonal to the span.
    pub fn residual(&self, a: &ComplexMatrix) -> f64 {
        a.distance(&self.project(a))
    }

    /// Worst residual of `other`'s basis against `self`; zero iff `other ⊆ self`.
    pub fn containment_residual(&self, other: &Subspace) -> f64 {
        other
            .basis
            .iter()
            .map(|b| self.residual(b))
            .fold(0.0, f64::max)
    }

    /// Mutual containment residual; infinite when dimensions differ.
    pub fn equality_residual(&self, other: &Subspace) -> f64 {
        if self.dim() != other.dim() {
            return f64::INFINITY;
        }
        self.containment_residual(other)
            .max(other.containment_residual(self))
    }

    /// Kernel of a linear map restricted to this subspace.
    ///
    /// `images(x)` returns the components of the map at `x`; the kernel is
    /// the common null space, read off the Gram matrix of the images of the
    /// basis.
    pub fn kernel_of<F>(&self, images: F, cfg: &ToleranceConfig) -> Subspace
    where
        F: Fn(&ComplexMatrix) -> Vec<ComplexMatrix>,
    {
        let d = self.dim();
        let imgs: Vec<Vec<ComplexMatrix>> = self.basis.iter().map(&images).collect();
        let mut gram = DMatrix::<C64>::zeros(d, d);
        for i in 0..d {
            for j in i..d {
                let g: C64 = imgs[i]
                    .iter()
                    .zip(&imgs[j])
                    .map(|(x, y)| x.hs_inner(y))
                    .sum();
                gram[(i, j)] = g;
                gram[(j, i)] = g.conj();
            }
        }
        let mut kernel = Subspace::zero(self.ambient_dim);
        for v in gram_null_space(&gram, cfg.tol_rel) {
            kernel.try_extend(&self.combine(v.as_slice()), cfg);
        }
        kernel
    }

    fn full(n: usize) -> Self {
        let basis = (0..n)
            .flat_map(|i| (0..n).map(move |j| ComplexMatrix::matrix_unit(n, i, j)))
            .collect();
        Self {
            ambient_dim: n,
            basis,
        }
    }
}

/// Unital *-subalgebra of `M_n`, stored as an HS-orthonormal basis.
#[derive(Debug, Clone)]
pub struct StarAlgebra {
    space: Subspace,
}

impl StarAlgebra {
    /// Wraps a subspace already known to be a unital *-subalgebra.
    pub(crate) fn from_space(space: Subspace) -> Self {
        Self { space }
    }

    /// Wraps and validates a basis.
    pub fn from_basis(
        ambient_dim: usize,
        basis: &[ComplexMatrix],
        cfg: &ToleranceConfig,
    ) -> Result<Self> {
        let alg = Self {
            space: Subspace::span(ambient_dim, basis, cfg)?,
        };
        alg.validate(cfg)?;
        Ok(alg)
    }

    /// `M_n`.
    pub fn full(n: usize) -> Self {
        Self {
            space: Subspace::full(n),
        }
    }

    /// Diagonal matrices `D_n`.
    pub fn diagonal(n: usize) -> Self {
        Self::block_diagonal(&vec![1; n]).expect("positive block sizes")
    }

    /// Scalars `C·I` in `M_n`.
    pub fn scalars(n: usize) -> Self {
        let mut space = Subspace::zero(n);
        space
            .basis
            .push(ComplexMatrix::identity(n).scale_real(1.0 / (n as f64).sqrt()));
        Self { space }
    }

    /// `M_{n1} ⊕ M_{n2} ⊕ ...` embedded block-diagonally, basis of matrix units.
    pub fn block_diagonal(block_sizes: &[usize]) -> Result<Self> {
        if block_sizes.is_empty() || block_sizes.contains(&0) {
            return Err(Error::InvalidInput(
                "block sizes must be a non-empty list of positive integers".into(),
            ));
        }
        let n: usize = block_sizes.iter().sum();
        let mut basis = Vec::new();
        let mut offset = 0;
        for &size in block_sizes {
            for i in 0..size {
                for j in 0..size {
                    basis.push(ComplexMatrix::matrix_unit(n, offset + i, offset + j));
                }
            }
            offset += size;
        }
        Ok(Self {
            space: Subspace {
                ambient_dim: n,
                basis,
            },
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.space.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn basis(&self) -> &[ComplexMatrix] {
        self.space.basis()
    }

    pub fn space(&self) -> &Subspace {
        &self.space
    }

    /// Checks orthonormality, unit, adjoint closure and product closure.
    pub fn validate(&self, cfg: &ToleranceConfig) -> Result<()> {
        let basis = self.basis();
        let n = self.ambient_dim();
        let fail = |what: String| {
            Err(Error::InvalidInput(format!(
                "not a unital *-algebra: {what}"
            )))
        };
        for (i, a) in basis.iter().enumerate() {
            for (j, b) in basis.iter().enumerate().skip(i) {
                let expected = if i == j { 1.0 } else { 0.0 };
                if (a.hs_inner(b) - C64::new(expected, 0.0)).norm()
                    > cfg.tol_rel.max(1e3 * f64::EPSILON)
                {
                    return fail(format!("basis elements {i} and {j} are not orthonormal"));
                }
            }
        }
        let id = ComplexMatrix::identity(n);
        if !cfg.accepts(self.space.residual(&id), 1.0) {
            return fail("identity is not in the span".into());
        }
        for (i, b) in basis.iter().enumerate() {
            if !cfg.accepts(self.space.residual(&b.adjoint()), 1.0) {
                return fail(format!("adjoint of basis element {i} is not in the span"));
            }
            for (j, c) in basis.iter().enumerate() {
                if !cfg.accepts(self.space.residual(&(b * c)), 1.0) {
                    return fail(format!(
                        "product of basis elements {i} and {j} is not in the span"
                    ));
                }
            }
        }
        Ok(())
    }

    /// True when all basis elements pairwise commute.
    pub fn is_commutative(&self, cfg: &ToleranceConfig) -> bool {
        let basis = self.basis();
        basis.iter().enumerate().all(|(i, a)| {
            basis[i + 1..]
                .iter()
                .all(|b| cfg.accepts(a.commutator(b).frobenius_norm(), 1.0))
        })
    }
}

/// Smallest unital *-subalgebra of `M_n` containing `generators`.
///
/// Starts from the identity, the generators and their adjoints, then adds
/// pairwise products of basis elements until the span stops growing.
pub fn generate_algebra(
    ambient_dim: usize,
    generators: &[ComplexMatrix],
    cfg: &ToleranceConfig,
) -> Result<StarAlgebra> {
    if ambient_dim == 0 {
        return Err(Error::DimensionMismatch(
            "ambient dimension must be positive".into(),
        ));
    }
    if let Some((idx, g)) = generators
        .iter()
        .enumerate()
        .find(|(_, g)| g.dim() != ambient_dim)
    {
        return Err(Error::DimensionMismatch(format!(
            "generator {idx} is {0}x{0}, expected {1}x{1}",
            g.dim(),
            ambient_dim
        )));
    }
    let mut seeds = vec![ComplexMatrix::identity(ambient_dim)];
    for g in generators {
        seeds.push(g.clone());
        seeds.push(g.adjoint());
    }
    let mut space = Subspace::span(ambient_dim, &seeds, cfg)?;

    let cap = ambient_dim * ambient_dim;
    // Pairs among [0, done) have already been multiplied.
    let mut done = 0;
    for _ in 0..2 * cap {
        let len = space.dim();
        if len == done || len >= cap {
            break;
        }
        for i in 0..len {
            let start = if i < done { done } else { 0 };
            for j in start..len {
                let prod = &space.basis[i] * &space.basis[j];
                space.try_extend(&prod, cfg);
                if space.dim() >= cap {
                    break;
                }
            }
        }
        done = len;
    }
    Ok(StarAlgebra { space })
}

/// All matrices commuting with every element of `alg`.
pub fn commutant(alg: &StarAlgebra, cfg: &ToleranceConfig) -> StarAlgebra {
    let basis = alg.basis();
    let kernel = Subspace::full(alg.ambient_dim())
        .kernel_of(|x| basis.iter().map(|b| x.commutator(b)).collect(), cfg);
    StarAlgebra::from_space(kernel)
}

pub fn bicommutant(alg: &StarAlgebra, cfg: &ToleranceConfig) -> StarAlgebra {
    commutant(&commutant(alg, cfg), cfg)
}

/// `Z(A) = A ∩ A^c`, solved directly in the coordinates of `alg`.
pub fn center(alg: &StarAlgebra, cfg: &ToleranceConfig) -> StarAlgebra {
    let basis = alg.basis();
    let kernel = alg
        .space
        .kernel_of(|x| basis.iter().map(|b| x.commutator(b)).collect(), cfg);
    StarAlgebra::from_space(kernel)
}

/// Membership of `a` in `alg`; the residual is the HS distance to the span.
pub fn contains(alg: &StarAlgebra, a: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<Check> {
    if a.dim() != alg.ambient_dim() {
        return Err(Error::DimensionMismatch(format!(
            "element is {0}x{0}, algebra acts on C^{1}",
            a.dim(),
            alg.ambient_dim()
        )));
    }
    let residual = alg.space.residual(a);
    Ok(Check {
        holds: cfg.accepts(residual, operator_norm(a)),
        residual,
    })
}

/// Minimal central projections of an algebra, in canonical order.
#[derive(Debug, Clone)]
pub struct CentralProjectionSet {
    pub minimal: Vec<ComplexMatrix>,
}

impl CentralProjectionSet {
    pub fn count(&self) -> usize {
        self.minimal.len()
    }

    /// Sum of the selected minimal projections.
    pub fn sum(&self, selector: &[usize]) -> Result<ComplexMatrix> {
        let n = self.minimal[0].dim();
        let mut p = ComplexMatrix::zeros(n);
        let mut seen = vec![false; self.count()];
        for &k in selector {
            if k >= self.count() {
                return Err(Error::InvalidInput(format!(
                    "projection index {k} out of range (algebra has {} minimal central projections)",
                    self.count()
                )));
            }
            if std::mem::replace(&mut seen[k], true) {
                return Err(Error::InvalidInput(format!(
                    "projection index {k} repeated"
                )));
            }
            p = p + &self.minimal[k];
        }
        Ok(p)
    }

    /// Lattice element for a bit mask over the minimal projections.
    pub fn from_mask(&self, mask: u64) -> ComplexMatrix {
        let n = self.minimal[0].dim();
        self.minimal
            .iter()
            .enumerate()
            .filter(|(k, _)| mask >> k & 1 == 1)
            .fold(ComplexMatrix::zeros(n), |acc, (_, q)| acc + q)
    }

    /// All `2^k` lattice elements with their selectors.
    pub fn lattice(&self) -> Vec<(Vec<usize>, ComplexMatrix)> {
        assert!(self.count() < 24, "lattice too large to materialize");
        (0..1u64 << self.count())
            .map(|mask| (mask_to_selector(mask, self.count()), self.from_mask(mask)))
            .collect()
    }

    /// Whether the summand `q_k A` is commutative, for each minimal `q_k`.
    ///
    /// A deformation's `p` is unobservable on commutative summands.
    pub fn commutative_summands(&self, alg: &StarAlgebra, cfg: &ToleranceConfig) -> Vec<bool> {
        let basis = alg.basis();
        self.minimal
            .iter()
            .map(|q| {
                basis.iter().enumerate().all(|(i, a)| {
                    basis[i + 1..]
                        .iter()
                        .all(|b| cfg.accepts((q * a.commutator(b)).frobenius_norm(), 1.0))
                })
            })
            .collect()
    }

    /// Canonical representative of a selector: commutative summands are
    /// always included, since `p` cannot be distinguished there.
    pub fn canonical_selector(
        &self,
        alg: &StarAlgebra,
        selector: &[usize],
        cfg: &ToleranceConfig,
    ) -> Vec<usize> {
        let commutative = self.commutative_summands(alg, cfg);
        (0..self.count())
            .filter(|k| commutative[*k] || selector.contains(k))
            .collect()
    }
}

pub(crate) fn mask_to_selector(mask: u64, k: usize) -> Vec<usize> {
    (0..k).filter(|i| mask >> i & 1 == 1).collect()
}

const PROBE_ATTEMPTS: usize = 8;

/// Minimal central projections, as spectral projections of a generic
/// Hermitian element of the center.
pub fn central_projections(
    alg: &StarAlgebra,
    cfg: &ToleranceConfig,
) -> Result<CentralProjectionSet> {
    let z = center(alg, cfg);
    let k = z.dim();
    let n = alg.ambient_dim();
    if k == 1 {
        return Ok(CentralProjectionSet {
            minimal: vec![ComplexMatrix::identity(n)],
        });
    }
    let base = Seed(0x00c3_9a1e_5eed);
    for attempt in 0..PROBE_ATTEMPTS {
        let probe =
            random_hermitian_with(&z, &mut base.derive("center-probe", attempt as u64).rng());
        let eig = eigh(probe.as_matrix());
        let scale = eig.eigenvalues.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
        if scale == 0.0 {
            continue;
        }
        let Some(groups) = split_spectrum(&eig.eigenvalues, scale) else {
            continue;
        };
        if groups.len() != k {
            continue;
        }
        let v = eig.eigenvectors.as_matrix();
        let mut minimal: Vec<ComplexMatrix> = groups
            .iter()
            .map(|g| {
                let cols = DMatrix::from_fn(n, g.len(), |i, j| v[(i, g[j])]);
                let q = ComplexMatrix::wrap(&cols * cols.adjoint());
                (&q + q.adjoint()).scale_real(0.5)
            })
            .collect();
        minimal.sort_by(canonical_order);
        return Ok(CentralProjectionSet { minimal });
    }
    Err(Error::CenterDegenerate {
        attempts: PROBE_ATTEMPTS,
    })
}

/// Groups ascending eigenvalues into exact clusters. `None` when some gap
/// is neither clearly a repeat nor clearly a separation.
fn split_spectrum(eigenvalues: &[f64], scale: f64) -> Option<Vec<Vec<usize>>> {
    let same = 1e-7 * scale;
    let apart = 1e-3 * scale;
    let mut groups = vec![vec![0]];
    for k in 1..eigenvalues.len() {
        let gap = eigenvalues[k] - eigenvalues[k - 1];
        if gap <= same {
            groups.last_mut().unwrap().push(k);
        } else if gap >= apart {
            groups.push(vec![k]);
        } else {
            return None;
        }
    }
    Some(groups)
}

// Descending lexicographic on (diagonal, then all entries), with a tolerance.
fn canonical_order(a: &ComplexMatrix, b: &ComplexMatrix) -> Ordering {
    let key = |m: &ComplexMatrix| -> Vec<f64> {
        let n = m.dim();
        let mut k: Vec<f64> = (0..n).map(|i| m[(i, i)].re).collect();
        for i in 0..n {
            for j in 0..n {
                k.push(m[(i, j)].re);
                k.push(m[(i, j)].im);
            }
        }
        k
    };
    for (x, y) in key(a).iter().zip(key(b)) {
        if (x - y).abs() > 1e-6 {
            return y.total_cmp(x);
        }
    }
    Ordering::Equal
}

/// Random element with independent complex Gaussian coordinates.
pub fn random_element_with<R: Rng + ?Sized>(space: &StarAlgebra, rng: &mut R) -> ComplexMatrix {
    let coeffs: Vec<C64> = (0..space.dim())
        .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    space.space.combine(&coeffs)
}

/// Real Gaussian combination of `b + b*` and `i(b - b*)` over the basis.
pub fn random_hermitian_with<R: Rng + ?Sized>(alg: &StarAlgebra, rng: &mut R) -> ComplexMatrix {
    let n = alg.ambient_dim();
    let mut h = ComplexMatrix::zeros(n);
    for b in alg.basis() {
        let s: f64 = rng.sample(StandardNormal);
        let t: f64 = rng.sample(StandardNormal);
        let bs = b.adjoint();
        h = h + (b + &bs).scale_real(s) + (b - &bs).scale(I * t);
    }
    // exact Hermitian symmetry
    (&h + h.adjoint()).scale_real(0.5)
}

pub fn random_hermitian(alg: &StarAlgebra, seed: Seed) -> ComplexMatrix {
    random_hermitian_with(alg, &mut seed.rng())
}

/// `exp(i h)` for a random Hermitian `h` in the algebra.
pub fn random_unitary_with<R: Rng + ?Sized>(alg: &StarAlgebra, rng: &mut R) -> ComplexMatrix {
    let h = random_hermitian_with(alg, rng);
    eigh(h.as_matrix()).map(|t| C64::new(t.cos(), t.sin()))
}

pub fn random_unitary_in(alg: &StarAlgebra, seed: Seed) -> ComplexMatrix {
    random_unitary_with(alg, &mut seed.rng())
}

const INVERTIBLE_ATTEMPTS: usize = 16;

pub fn random_invertible_with<R: Rng + ?Sized>(
    alg: &StarAlgebra,
    rng: &mut R,
    cfg: &ToleranceConfig,
) -> Result<ComplexMatrix> {
    let a = random_element_with(alg, rng);
    let id = ComplexMatrix::identity(alg.ambient_dim());
    let step = 0.1 * operator_norm(&a).max(1.0);
    for k in 0..INVERTIBLE_ATTEMPTS {
        let candidate = &a + id.scale_real(step * k as f64);
        let sv = singular_values(&candidate);
        let (min, max) = (sv[0], *sv.last().unwrap());
        if max > 0.0 && min >= cfg.invertibility_floor * max {
            return Ok(candidate);
        }
    }
    Err(Error::CouldNotInvert {
        attempts: INVERTIBLE_ATTEMPTS,
    })
}

pub fn random_invertible_in(
    alg: &StarAlgebra,
    seed: Seed,
    cfg: &ToleranceConfig,
) -> Result<ComplexMatrix> {
    random_invertible_with(alg, &mut seed.rng(), cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::unitarity_residual;

    fn cfg() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    #[test]
    fn closure_of_matrix_unit_is_full() {
        let alg = generate_algebra(2, &[ComplexMatrix::matrix_unit(2, 0, 1)], &cfg()).unwrap();
        assert_eq!(alg.dim(), 4);
        alg.validate(&cfg()).unwrap();
    }

    #[test]
    fn closure_of_nothing_is_scalars() {
        let alg = generate_algebra(3, &[], &cfg()).unwrap();
        assert_eq!(alg.dim(), 1);
    }

    #[test]
    fn closure_of_distinct_diagonal_is_diagonal_algebra() {
        let alg =
            generate_algebra(2, &[ComplexMatrix::from_real_diagonal(&[1.0, 2.0])], &cfg()).unwrap();
        assert_eq!(alg.dim(), 2);
        assert!(
            alg.space()
                .equality_residual(StarAlgebra::diagonal(2).space())
                < 1e-12
        );
    }

    #[test]
    fn generator_dimension_mismatch_names_index() {
        let err = generate_algebra(
            2,
            &[ComplexMatrix::identity(2), ComplexMatrix::identity(3)],
            &cfg(),
        )
        .unwrap_err();
        assert!(err.to_string().contains("generator 1"), "{err}");
    }

    #[test]
    fn commutant_examples() {
        assert_eq!(commutant(&StarAlgebra::full(2), &cfg()).dim(), 1);
        assert_eq!(commutant(&StarAlgebra::scalars(2), &cfg()).dim(), 4);
        let d2 = StarAlgebra::diagonal(2);
        let c = commutant(&d2, &cfg());
        assert!(c.space().equality_residual(d2.space()) < 1e-12);
    }

    #[test]
    fn center_examples() {
        let z = center(&StarAlgebra::full(2), &cfg());
        assert_eq!(z.dim(), 1);
        assert!(z.space().residual(&ComplexMatrix::identity(2)) < 1e-12);

        let blocks = StarAlgebra::block_diagonal(&[2, 3]).unwrap();
        let z = center(&blocks, &cfg());
        let expected = Subspace::span(
            5,
            &[
                ComplexMatrix::from_real_diagonal(&[1.0, 1.0, 0.0, 0.0, 0.0]),
                ComplexMatrix::from_real_diagonal(&[0.0, 0.0, 1.0, 1.0, 1.0]),
            ],
            &cfg(),
        )
        .unwrap();
        assert!(z.space().equality_residual(&expected) < 1e-12);

        let d2 = StarAlgebra::diagonal(2);
        assert!(center(&d2, &cfg()).space().equality_residual(d2.space()) < 1e-12);
    }

    #[test]
    fn central_projection_examples() {
        let set = central_projections(&StarAlgebra::full(2), &cfg()).unwrap();
        assert_eq!(set.count(), 1);
        assert!(set.minimal[0].distance(&ComplexMatrix::identity(2)) < 1e-12);

        let set =
            central_projections(&StarAlgebra::block_diagonal(&[2, 3]).unwrap(), &cfg()).unwrap();
        assert_eq!(set.count(), 2);
        assert!(
            set.minimal[0].distance(&ComplexMatrix::from_real_diagonal(&[
                1.0, 1.0, 0.0, 0.0, 0.0
            ])) < 1e-10
        );
        assert!(
            set.minimal[1].distance(&ComplexMatrix::from_real_diagonal(&[
                0.0, 0.0, 1.0, 1.0, 1.0
            ])) < 1e-10
        );

        let set = central_projections(&StarAlgebra::diagonal(3), &cfg()).unwrap();
        assert_eq!(set.count(), 3);
        for (k, q) in set.minimal.iter().enumerate() {
            assert!(q.distance(&ComplexMatrix::matrix_unit(3, k, k)) < 1e-10);
        }
    }

    #[test]
    fn lattice_and_selectors() {
        let set =
            central_projections(&StarAlgebra::block_diagonal(&[1, 2]).unwrap(), &cfg()).unwrap();
        assert_eq!(set.lattice().len(), 4);
        let p = set.sum(&[1]).unwrap();
        assert!(p.distance(&ComplexMatrix::from_real_diagonal(&[0.0, 1.0, 1.0])) < 1e-10);
        assert!(set.sum(&[2]).is_err());
        assert!(set.sum(&[0, 0]).is_err());
        let alg = StarAlgebra::block_diagonal(&[1, 2]).unwrap();
        assert_eq!(set.commutative_summands(&alg, &cfg()), vec![true, false]);
        assert_eq!(set.canonical_selector(&alg, &[1], &cfg()), vec![0, 1]);
    }

    #[test]
    fn membership_examples() {
        let d2 = StarAlgebra::diagonal(2);
        let m = contains(&d2, &ComplexMatrix::from_real_diagonal(&[1.0, 5.0]), &cfg()).unwrap();
        assert!(m.holds && m.residual < 1e-14);
        let m = contains(&d2, &ComplexMatrix::matrix_unit(2, 0, 1), &cfg()).unwrap();
        assert!(!m.holds);
        assert!((m.residual - 1.0).abs() < 1e-14);
        assert!(contains(&d2, &ComplexMatrix::identity(3), &cfg()).is_err());
    }

    #[test]
    fn random_elements_in_scalars() {
        let alg = StarAlgebra::scalars(2);
        let h = random_hermitian(&alg, Seed(3));
        assert!(h[(0, 1)].norm() < 1e-14 && h[(0, 0)].im.abs() < 1e-14);
        assert!((h[(0, 0)] - h[(1, 1)]).norm() < 1e-14);
        let u = random_unitary_in(&alg, Seed(3));
        assert!((u[(0, 0)].norm() - 1.0).abs() < 1e-12);
        let a = random_invertible_in(&alg, Seed(3), &cfg()).unwrap();
        assert!(a[(0, 0)].norm() > 0.0);
    }

    #[test]
    fn random_unitary_in_diagonal_algebra() {
        let d2 = StarAlgebra::diagonal(2);
        let h = random_hermitian(&d2, Seed(11));
        let u = random_unitary_in(&d2, Seed(11));
        for k in 0..2 {
            let theta = h[(k, k)].re;
            assert!((u[(k, k)] - C64::new(theta.cos(), theta.sin())).norm() < 1e-12);
        }
        assert!(u[(0, 1)].norm() < 1e-12);
        assert_eq!(random_unitary_in(&d2, Seed(11)), u);
    }

    #[test]
    fn random_unitary_is_member_and_unitary() {
        let alg = StarAlgebra::block_diagonal(&[2, 1]).unwrap();
        for s in 0..10 {
            let u = random_unitary_in(&alg, Seed(s));
            assert!(unitarity_residual(&u) < 1e-10);
            assert!(contains(&alg, &u, &cfg()).unwrap().holds);
        }
    }
}
