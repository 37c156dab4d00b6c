//! Dense complex matrices and the spectral toolkit built on one kernel.
//!
//! Only a Hermitian eigendecomposition is computed numerically. The
//! operator norm, the PSD square root, the modulus, the exponential and
//! the polar factor are all functional calculus on top of it.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use nalgebra::{Complex, DMatrix, DVector};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Complex scalar used throughout.
pub type C64 = Complex<f64>;

/// Wire encoding of a matrix: row-major rows of `[re, im]` pairs.
pub type MatrixRepr = Vec<Vec<[f64; 2]>>;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);
pub(crate) const I: C64 = C64::new(0.0, 1.0);

/// Numerical thresholds shared by every check in the crate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToleranceConfig {
    pub tol_rel: f64,
    pub tol_abs: f64,
    /// Minimum singular value, relative to the norm, for a matrix to count as invertible.
    pub invertibility_floor: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            tol_rel: 1e-9,
            tol_abs: 1e-12,
            invertibility_floor: 1e-8,
        }
    }
}

impl ToleranceConfig {
    pub fn new(tol_rel: f64, tol_abs: f64, invertibility_floor: f64) -> Result<Self> {
        let cfg = Self {
            tol_rel,
            tol_abs,
            invertibility_floor,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Single-knob override: `tol_rel = tol`, `tol_abs = tol * 1e-3`.
    pub fn with_tol(tol: f64) -> Result<Self> {
        Self::new(tol, tol * 1e-3, Self::default().invertibility_floor)
    }

    pub fn validate(&self) -> Result<()> {
        let all_positive = [self.tol_rel, self.tol_abs, self.invertibility_floor]
            .iter()
            .all(|t| t.is_finite() && *t > 0.0);
        if !all_positive {
            return Err(Error::InvalidTolerance(
                "tolerances must be finite and strictly positive".into(),
            ));
        }
        if self.tol_abs > self.tol_rel {
            return Err(Error::InvalidTolerance(format!(
                "tol_abs ({}) must not exceed tol_rel ({})",
                self.tol_abs, self.tol_rel
            )));
        }
        Ok(())
    }

    /// `residual <= tol_rel * max(1, scale)`.
    pub fn accepts(&self, residual: f64, scale: f64) -> bool {
        residual <= self.tol_rel * scale.max(1.0)
    }
}

/// A boolean verdict together with the residual that decided it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub holds: bool,
    pub residual: f64,
}

/// Dense square complex matrix with finite entries.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix(DMatrix<C64>);

impl ComplexMatrix {
    /// Wraps a nalgebra matrix, rejecting non-square or non-finite input.
    pub fn from_matrix(m: DMatrix<C64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::InvalidMatrix(format!(
                "matrix is {}x{}, expected square",
                m.nrows(),
                m.ncols()
            )));
        }
        if m.nrows() == 0 {
            return Err(Error::InvalidMatrix(
                "matrix dimension must be positive".into(),
            ));
        }
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidMatrix("matrix has non-finite entries".into()));
        }
        Ok(Self(m))
    }

    pub(crate) fn wrap(m: DMatrix<C64>) -> Self {
        debug_assert_eq!(m.nrows(), m.ncols());
        Self(m)
    }

    pub fn zeros(n: usize) -> Self {
        Self(DMatrix::zeros(n, n))
    }

    pub fn identity(n: usize) -> Self {
        Self(DMatrix::identity(n, n))
    }

    /// The matrix unit `E_ij` (zero-based indices).
    pub fn matrix_unit(n: usize, i: usize, j: usize) -> Self {
        let mut m = DMatrix::zeros(n, n);
        m[(i, j)] = ONE;
        Self(m)
    }

    pub fn from_diagonal(diag: &[C64]) -> Self {
        Self(DMatrix::from_diagonal(&DVector::from_column_slice(diag)))
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let d: Vec<C64> = diag.iter().map(|&x| C64::new(x, 0.0)).collect();
        Self::from_diagonal(&d)
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let n = rows.len();
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(Error::InvalidMatrix(format!(
                "row {i} has {} entries, expected {n}",
                r.len()
            )));
        }
        Self::from_matrix(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let rows: Vec<Vec<C64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| C64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn from_repr(repr: &MatrixRepr) -> Result<Self> {
        let rows: Vec<Vec<C64>> = repr
            .iter()
            .map(|r| r.iter().map(|[re, im]| C64::new(*re, *im)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn to_repr(&self) -> MatrixRepr {
        (0..self.dim())
            .map(|i| {
                (0..self.dim())
                    .map(|j| [self[(i, j)].re, self[(i, j)].im])
                    .collect()
            })
            .collect()
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_matrix(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.0
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    pub fn diagonal(&self) -> Vec<C64> {
        (0..self.dim()).map(|i| self.0[(i, i)]).collect()
    }

    /// Hilbert–Schmidt norm.
    pub fn frobenius_norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Hilbert–Schmidt inner product `tr(self* other)`, conjugate-linear in `self`.
    pub fn hs_inner(&self, other: &Self) -> C64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn scale(&self, c: C64) -> Self {
        Self(&self.0 * c)
    }

    pub fn scale_real(&self, x: f64) -> Self {
        self.scale(C64::new(x, 0.0))
    }

    /// `self * other - other * self`.
    pub fn commutator(&self, other: &Self) -> Self {
        Self(&self.0 * &other.0 - &other.0 * &self.0)
    }

    /// Frobenius distance to `other`.
    pub fn distance(&self, other: &Self) -> f64 {
        (self - other).frobenius_norm()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ComplexMatrix{:?}", self.to_repr())
    }
}

impl fmt::Display for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.dim() {
            let row: Vec<String> = (0..self.dim())
                .map(|j| {
                    let z = self[(i, j)];
                    format!("{:+.6}{:+.6}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    fn index(&self, idx: (usize, usize)) -> &C64 {
        &self.0[idx]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, idx: (usize, usize)) -> &mut C64 {
        &mut self.0[idx]
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&ComplexMatrix> for &ComplexMatrix {
            type Output = ComplexMatrix;
            fn $method(self, rhs: &ComplexMatrix) -> ComplexMatrix {
                ComplexMatrix((&self.0).$method(&rhs.0))
            }
        }
        impl $trait<ComplexMatrix> for ComplexMatrix {
            type Output = ComplexMatrix;
            fn $method(self, rhs: ComplexMatrix) -> ComplexMatrix {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&ComplexMatrix> for ComplexMatrix {
            type Output = ComplexMatrix;
            fn $method(self, rhs: &ComplexMatrix) -> ComplexMatrix {
                (&self).$method(rhs)
            }
        }
        impl $trait<ComplexMatrix> for &ComplexMatrix {
            type Output = ComplexMatrix;
            fn $method(self, rhs: ComplexMatrix) -> ComplexMatrix {
                self.$method(&rhs)
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        ComplexMatrix(-&self.0)
    }
}

impl Neg for ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        -&self
    }
}

impl Serialize for ComplexMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_repr().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = MatrixRepr::deserialize(deserializer)?;
        ComplexMatrix::from_repr(&repr).map_err(serde::de::Error::custom)
    }
}

/// Eigendecomposition `a = V diag(λ) V*` of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEig {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Unitary, eigenvectors in columns matching `eigenvalues`.
    pub eigenvectors: ComplexMatrix,
}

impl HermitianEig {
    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map(|x| C64::new(x, 0.0))
    }

    /// `V diag(f(λ)) V*`.
    pub fn map(&self, f: impl Fn(f64) -> C64) -> ComplexMatrix {
        let v = &self.eigenvectors.0;
        let mut scaled = v.clone();
        for (j, &lambda) in self.eigenvalues.iter().enumerate() {
            let fj = f(lambda);
            for i in 0..scaled.nrows() {
                scaled[(i, j)] *= fj;
            }
        }
        ComplexMatrix(scaled * v.adjoint())
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }
}

/// The kernel: eigendecomposition of the Hermitian part of `m`, ascending.
pub(crate) fn eigh(m: &DMatrix<C64>) -> HermitianEig {
    let n = m.nrows();
    let h = faer::Mat::<faer::c64>::from_fn(n, n, |i, j| {
        let z = (m[(i, j)] + m[(j, i)].conj()) * 0.5;
        faer::c64::new(z.re, z.im)
    });
    let eig = h
        .self_adjoint_eigen(faer::Side::Lower)
        .expect("self-adjoint eigensolver converges on finite input");
    let (values, vectors) = (eig.S(), eig.U());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].re.total_cmp(&values[b].re));
    let eigenvalues = order.iter().map(|&k| values[k].re).collect();
    let eigenvectors = DMatrix::from_fn(n, n, |i, j| {
        let z = vectors[(i, order[j])];
        C64::new(z.re, z.im)
    });
    HermitianEig {
        eigenvalues,
        eigenvectors: ComplexMatrix(eigenvectors),
    }
}

pub fn adjoint(a: &ComplexMatrix) -> ComplexMatrix {
    a.adjoint()
}

/// Frobenius norm of `a - a*`.
pub fn hermitian_residual(a: &ComplexMatrix) -> f64 {
    (a - a.adjoint()).frobenius_norm()
}

/// Largest singular value, `sqrt(λmax(a* a))`.
pub fn operator_norm(a: &ComplexMatrix) -> f64 {
    let gram = a.0.adjoint() * &a.0;
    eigh(&gram).max_eigenvalue().max(0.0).sqrt()
}

pub fn hermitian_eig(a: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<HermitianEig> {
    let residual = hermitian_residual(a);
    if !cfg.accepts(residual, operator_norm(a)) {
        return Err(Error::NotHermitian { residual });
    }
    Ok(eigh(&a.0))
}

/// Eigenvalues of a normal matrix, found by diagonalizing a generic real
/// combination of its Hermitian and skew-Hermitian parts.
pub fn normal_eigenvalues(a: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<Vec<C64>> {
    let norm = operator_norm(a);
    let normality = (a.adjoint() * a - a * a.adjoint()).frobenius_norm();
    if !cfg.accepts(normality, norm * norm) {
        return Err(Error::NotNormal {
            residual: normality,
        });
    }
    let half = C64::new(0.5, 0.0);
    let re_part = (&a.0 + a.0.adjoint()) * half;
    let im_part = (&a.0 - a.0.adjoint()) * (half / I);
    let mut worst = f64::INFINITY;
    // Fixed probe angles keep the result deterministic.
    for theta in [0.618_033_988_7_f64, 1.234_567_8, 2.75, 0.3] {
        let probe = &re_part * C64::new(theta.cos(), 0.0) + &im_part * C64::new(theta.sin(), 0.0);
        let v = eigh(&probe).eigenvectors.0;
        let rayleigh = v.adjoint() * &a.0 * &v;
        let lambdas: Vec<C64> = (0..a.dim()).map(|k| rayleigh[(k, k)]).collect();
        let diag = DMatrix::from_diagonal(&DVector::from_column_slice(&lambdas));
        let residual = (&a.0 * &v - &v * diag).norm();
        if cfg.accepts(residual, norm) {
            return Ok(lambdas);
        }
        worst = worst.min(residual);
    }
    Err(Error::NotNormal { residual: worst })
}

/// `r(a)` for normal `a`, the largest eigenvalue modulus.
pub fn spectral_radius_normal(a: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<f64> {
    Ok(normal_eigenvalues(a, cfg)?
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max))
}

/// Functional calculus `f(a) = V diag(f(λ)) V*` for Hermitian `a`.
pub fn apply_hermitian_function(
    a: &ComplexMatrix,
    f: impl Fn(f64) -> C64,
    cfg: &ToleranceConfig,
) -> Result<ComplexMatrix> {
    Ok(hermitian_eig(a, cfg)?.map(f))
}

/// PSD square root. Eigenvalues in `[-tol_rel * ‖a‖, 0)` are clamped to zero.
pub fn sqrt_psd(a: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<ComplexMatrix> {
    let eig = hermitian_eig(a, cfg)?;
    let norm = eig.eigenvalues.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    let min = eig.min_eigenvalue();
    if min < -cfg.tol_rel * norm.max(cfg.tol_abs) {
        return Err(Error::NotPsd {
            min_eigenvalue: min,
        });
    }
    Ok(eig.map(|x| C64::new(x.max(0.0).sqrt(), 0.0)))
}

/// PSD test: Hermitian within tolerance and no eigenvalue below `-tol_rel * max(1, ‖m‖)`.
///
/// The residual is the larger of the Hermitian defect and the negative part
/// of the spectrum of the Hermitian part.
pub fn psd_check(m: &ComplexMatrix, cfg: &ToleranceConfig) -> Check {
    let eig = eigh(&m.0);
    let scale = eig
        .eigenvalues
        .iter()
        .fold(0.0_f64, |acc, x| acc.max(x.abs()));
    let residual = hermitian_residual(m).max((-eig.min_eigenvalue()).max(0.0));
    Check {
        holds: cfg.accepts(residual, scale),
        residual,
    }
}

/// `‖u* u - I‖_F`.
pub fn unitarity_residual(u: &ComplexMatrix) -> f64 {
    (u.adjoint() * u - ComplexMatrix::identity(u.dim())).frobenius_norm()
}

/// Singular values, ascending.
pub fn singular_values(a: &ComplexMatrix) -> Vec<f64> {
    let gram = a.0.adjoint() * &a.0;
    eigh(&gram)
        .eigenvalues
        .iter()
        .map(|x| x.max(0.0).sqrt())
        .collect()
}

/// Polar decomposition `a = unitary * modulus` of an invertible matrix.
#[derive(Debug, Clone)]
pub struct PolarParts {
    pub unitary: ComplexMatrix,
    pub modulus: ComplexMatrix,
}

pub fn polar_decompose(a: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<PolarParts> {
    let gram = a.0.adjoint() * &a.0;
    let eig = eigh(&gram);
    let sigma: Vec<f64> = eig.eigenvalues.iter().map(|x| x.max(0.0).sqrt()).collect();
    let norm = sigma.last().copied().unwrap_or(0.0);
    let min = sigma.first().copied().unwrap_or(0.0);
    if norm == 0.0 || min < cfg.invertibility_floor * norm {
        return Err(Error::Singular {
            min_singular: min,
            norm,
        });
    }
    let sigma_of = |x: f64| x.max(0.0).sqrt();
    let modulus = eig.map(|x| C64::new(sigma_of(x), 0.0));
    let inv_modulus = eig.map(|x| C64::new(1.0 / sigma_of(x), 0.0));
    Ok(PolarParts {
        unitary: a * inv_modulus,
        modulus,
    })
}

/// Inverse through the polar factors, `a⁻¹ = |a|⁻¹ u*`.
pub fn inverse(a: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<ComplexMatrix> {
    let polar = polar_decompose(a, cfg)?;
    let gram = a.0.adjoint() * &a.0;
    let inv_modulus = eigh(&gram).map(|x| C64::new(1.0 / x.max(0.0).sqrt(), 0.0));
    Ok(inv_modulus * polar.unitary.adjoint())
}

/// Orthonormal basis of the numerical kernel of a Hermitian PSD Gram matrix.
///
/// Eigenvalues at or below `tol * max(1, λmax)` count as zero.
pub(crate) fn gram_null_space(gram: &DMatrix<C64>, tol: f64) -> Vec<DVector<C64>> {
    let eig = eigh(gram);
    let cutoff = tol * eig.max_eigenvalue().max(1.0);
    eig.eigenvalues
        .iter()
        .enumerate()
        .filter(|(_, &lambda)| lambda <= cutoff)
        .map(|(k, _)| eig.eigenvectors.0.column(k).into_owned())
        .collect()
}

/// Minimum-norm least-squares solution of `a x = b` via the pseudo-inverse
/// of the normal equations.
pub(crate) fn least_squares(a: &DMatrix<C64>, b: &DVector<C64>, tol: f64) -> DVector<C64> {
    let normal = a.adjoint() * a;
    let rhs = a.adjoint() * b;
    let eig = eigh(&normal);
    let cutoff = tol * eig.max_eigenvalue().max(1.0);
    let v = &eig.eigenvectors.0;
    let mut coeffs = v.adjoint() * rhs;
    for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
        coeffs[k] = if lambda > cutoff {
            coeffs[k] / lambda
        } else {
            ZERO
        };
    }
    v * coeffs
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn cfg() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    #[test]
    fn adjoint_of_shift_and_scalar() {
        let shift = ComplexMatrix::from_real_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap();
        let expected = ComplexMatrix::from_real_rows(&[vec![0.0, 0.0], vec![1.0, 0.0]]).unwrap();
        assert_eq!(adjoint(&shift), expected);
        let i = ComplexMatrix::from_diagonal(&[c(0.0, 1.0)]);
        assert_eq!(adjoint(&i), ComplexMatrix::from_diagonal(&[c(0.0, -1.0)]));
    }

    #[test]
    fn eigenvalues_of_simple_hermitians() {
        let eig = hermitian_eig(&ComplexMatrix::from_real_diagonal(&[3.0, 1.0]), &cfg()).unwrap();
        assert_eq!(eig.eigenvalues.len(), 2);
        assert!((eig.eigenvalues[0] - 1.0).abs() < 1e-14);
        assert!((eig.eigenvalues[1] - 3.0).abs() < 1e-14);

        let x = ComplexMatrix::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let eig = hermitian_eig(&x, &cfg()).unwrap();
        assert!((eig.eigenvalues[0] + 1.0).abs() < 1e-14);
        assert!((eig.eigenvalues[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn non_hermitian_rejected() {
        let shift = ComplexMatrix::from_real_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap();
        assert!(matches!(
            hermitian_eig(&shift, &cfg()),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn norms_of_small_matrices() {
        let d = ComplexMatrix::from_real_diagonal(&[1.0, -3.0]);
        assert!((operator_norm(&d) - 3.0).abs() < 1e-14);
        let shift = ComplexMatrix::from_real_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap();
        assert!((operator_norm(&shift) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn spectral_radius_examples() {
        let d = ComplexMatrix::from_diagonal(&[c(0.0, 1.0), c(-2.0, 0.0)]);
        assert!((spectral_radius_normal(&d, &cfg()).unwrap() - 2.0).abs() < 1e-12);
        let x = ComplexMatrix::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert!((spectral_radius_normal(&x, &cfg()).unwrap() - 1.0).abs() < 1e-12);
        let shift = ComplexMatrix::from_real_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap();
        assert!(matches!(
            spectral_radius_normal(&shift, &cfg()),
            Err(Error::NotNormal { .. })
        ));
    }

    #[test]
    fn function_calculus_examples() {
        let a = ComplexMatrix::from_real_diagonal(&[1.0, 4.0]);
        let root = apply_hermitian_function(&a, |x| c(x.sqrt(), 0.0), &cfg()).unwrap();
        assert!(root.distance(&ComplexMatrix::from_real_diagonal(&[1.0, 2.0])) < 1e-14);

        // f(λ1) = 1/2, f(λ2) = 1 on a diagonal with distinct entries
        let a = ComplexMatrix::from_real_diagonal(&[1.0, 5.0]);
        let f = |x: f64| if x < 3.0 { c(0.5, 0.0) } else { c(1.0, 0.0) };
        let fa = apply_hermitian_function(&a, f, &cfg()).unwrap();
        assert!(fa.distance(&ComplexMatrix::from_real_diagonal(&[0.5, 1.0])) < 1e-14);
    }

    #[test]
    fn sqrt_examples() {
        let root = sqrt_psd(&ComplexMatrix::from_real_diagonal(&[4.0, 9.0]), &cfg()).unwrap();
        assert!(root.distance(&ComplexMatrix::from_real_diagonal(&[2.0, 3.0])) < 1e-14);
        let id = ComplexMatrix::identity(3);
        assert!(sqrt_psd(&id, &cfg()).unwrap().distance(&id) < 1e-14);
        assert!(matches!(
            sqrt_psd(&ComplexMatrix::from_real_diagonal(&[-1.0, 1.0]), &cfg()),
            Err(Error::NotPsd { .. })
        ));
        // tiny negative drift is clamped
        let drift = ComplexMatrix::from_real_diagonal(&[-1e-14, 1.0]);
        let root = sqrt_psd(&drift, &cfg()).unwrap();
        assert!(root.distance(&ComplexMatrix::from_real_diagonal(&[0.0, 1.0])) < 1e-14);
    }

    #[test]
    fn polar_examples() {
        let a = ComplexMatrix::from_real_diagonal(&[-2.0, 3.0]);
        let parts = polar_decompose(&a, &cfg()).unwrap();
        assert!(
            parts
                .unitary
                .distance(&ComplexMatrix::from_real_diagonal(&[-1.0, 1.0]))
                < 1e-14
        );
        assert!(
            parts
                .modulus
                .distance(&ComplexMatrix::from_real_diagonal(&[2.0, 3.0]))
                < 1e-14
        );

        let rot = ComplexMatrix::from_real_rows(&[vec![0.0, -1.0], vec![1.0, 0.0]]).unwrap();
        let parts = polar_decompose(&rot, &cfg()).unwrap();
        assert!(parts.unitary.distance(&rot) < 1e-14);
        assert!(parts.modulus.distance(&ComplexMatrix::identity(2)) < 1e-14);

        let singular = ComplexMatrix::from_real_diagonal(&[0.0, 1.0]);
        assert!(matches!(
            polar_decompose(&singular, &cfg()),
            Err(Error::Singular { .. })
        ));
        assert!(matches!(
            polar_decompose(&ComplexMatrix::zeros(2), &cfg()),
            Err(Error::Singular { .. })
        ));
    }

    #[test]
    fn inverse_of_diagonal() {
        let a = ComplexMatrix::from_diagonal(&[c(0.0, 2.0), c(-4.0, 0.0)]);
        let inv = inverse(&a, &cfg()).unwrap();
        let expected = ComplexMatrix::from_diagonal(&[c(0.0, -0.5), c(-0.25, 0.0)]);
        assert!(inv.distance(&expected) < 1e-14);
    }

    #[test]
    fn tolerance_validation() {
        assert!(ToleranceConfig::new(1e-9, 1e-8, 1e-8).is_err());
        assert!(ToleranceConfig::new(0.0, 0.0, 1e-8).is_err());
        let cfg = ToleranceConfig::with_tol(1e-6).unwrap();
        assert_eq!(cfg.tol_abs, 1e-9);
    }

    #[test]
    fn rejects_bad_matrices() {
        assert!(ComplexMatrix::from_real_rows(&[vec![1.0, 2.0]]).is_err());
        assert!(ComplexMatrix::from_real_rows(&[vec![f64::NAN]]).is_err());
        assert!(ComplexMatrix::from_real_rows(&[]).is_err());
    }

    #[test]
    fn repr_round_trip() {
        let a = ComplexMatrix::from_rows(&[
            vec![c(1.0, 2.0), c(0.0, -1.0)],
            vec![c(3.0, 0.0), c(0.5, 0.25)],
        ])
        .unwrap();
        let json = serde_json::to_string(&a).unwrap();
        assert_eq!(json, "[[[1.0,2.0],[0.0,-1.0]],[[3.0,0.0],[0.5,0.25]]]");
        let back: ComplexMatrix = serde_json::from_str(&json).unwrap();
        assert_eq!(back, a);
        assert!(serde_json::from_str::<ComplexMatrix>("[[[1.0,0.0],[2.0,0.0]]]").is_err());
    }

    fn assert_decomposes(h: &ComplexMatrix) {
        let e = eigh(h.as_matrix());
        let v = &e.eigenvectors;
        let n = h.dim();
        assert!((v.adjoint() * v).distance(&ComplexMatrix::identity(n)) < 1e-12);
        assert!(e.reconstruct().distance(h) < 1e-12 * h.frobenius_norm().max(1.0));
        assert!(e.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn eigh_handles_decoupled_complex_blocks() {
        let z = ZERO;
        let h = ComplexMatrix::from_rows(&[
            vec![c(2.0, 0.0), c(0.0, 1.0), z, z],
            vec![c(0.0, -1.0), c(2.0, 0.0), z, z],
            vec![z, z, c(1.0, 0.0), c(0.5, -0.5)],
            vec![z, z, c(0.5, 0.5), c(3.0, 0.0)],
        ])
        .unwrap();
        assert_decomposes(&h);
        assert_decomposes(&ComplexMatrix::zeros(3));
        assert_decomposes(&ComplexMatrix::identity(4).scale_real(-2.0));
        let degenerate = ComplexMatrix::from_rows(&[
            vec![c(1.0, 0.0), c(0.0, 1.0), z],
            vec![c(0.0, -1.0), c(1.0, 0.0), z],
            vec![z, z, c(2.0, 0.0)],
        ])
        .unwrap();
        assert_decomposes(&degenerate);
        let e = eigh(degenerate.as_matrix());
        assert!((e.eigenvalues[0]).abs() < 1e-14);
        assert!((e.eigenvalues[1] - 2.0).abs() < 1e-14 && (e.eigenvalues[2] - 2.0).abs() < 1e-14);
    }
}
