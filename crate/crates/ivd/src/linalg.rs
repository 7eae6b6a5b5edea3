//! Dense complex linear algebra primitives: validated quantum state and
//! measurement types, trace norms, partial traces, tensor products, and
//! seeded Haar-random sampling.
//!
//! Conventions, fixed once for the whole crate:
//! - matrices are indexed `(row, col)`; composite systems use row-major
//!   composite indices with the *first* tensor factor as the slow index,
//!   so a vector on `C^{d1} ⊗ C^{d2}` has component `a·d2 + b`;
//! - eigenvalues of nominally PSD matrices in `[-tol, 0)` are clipped to 0;
//! - trace norms always go through a full Hermitian eigendecomposition.

use crate::{Error, Result, DEFAULT_TOL};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, StandardNormal};

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

pub const ZERO: C64 = Complex::new(0.0, 0.0);
pub const ONE: C64 = Complex::new(1.0, 0.0);

/// Largest entry modulus of `a`.
pub fn max_abs(a: &CMatrix) -> f64 {
    a.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Largest entrywise modulus of `a - b`.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    debug_assert_eq!(a.shape(), b.shape());
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn all_finite(a: &CMatrix) -> bool {
    a.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// Deviation of `a` from its own adjoint (0 for exactly Hermitian input).
pub fn hermitian_deviation(a: &CMatrix) -> f64 {
    max_abs_diff(a, &a.adjoint())
}

/// Deviation of `u` from unitarity, as the largest entry of `u†u - I`.
pub fn unitary_deviation(u: &CMatrix) -> f64 {
    let n = u.ncols();
    max_abs_diff(&(u.adjoint() * u), &CMatrix::identity(n, n))
}

/// Eigendecomposition of a Hermitian matrix.
///
/// Symmetrizes the input as `(A + A†)/2` before solving and fails if the
/// input deviates from Hermiticity by more than `tol`. Returns eigenvalues
/// in ascending order with matching eigenvector columns.
pub fn hermitian_eigen(a: &CMatrix, tol: f64) -> Result<(Vec<f64>, CMatrix)> {
    if a.nrows() != a.ncols() {
        return Err(Error::NotSquare {
            rows: a.nrows(),
            cols: a.ncols(),
        });
    }
    if !all_finite(a) {
        return Err(Error::NonFinite);
    }
    let dev = hermitian_deviation(a);
    if dev > tol {
        return Err(Error::NotHermitian {
            deviation: dev,
            tol,
        });
    }
    let sym = (a + a.adjoint()).scale(0.5);
    let eig = sym
        .try_symmetric_eigen(f64::EPSILON, 20_000)
        .ok_or(Error::EigenFailed)?;
    let n = a.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = CMatrix::zeros(n, n);
    for (col, &src) in order.iter().enumerate() {
        vectors.set_column(col, &eig.eigenvectors.column(src));
    }
    Ok((values, vectors))
}

/// Eigenvalues only, ascending.
pub fn hermitian_eigenvalues(a: &CMatrix, tol: f64) -> Result<Vec<f64>> {
    Ok(hermitian_eigen(a, tol)?.0)
}

/// Trace norm `Tr|A|` of a Hermitian matrix: the sum of the absolute
/// eigenvalues.
pub fn trace_norm(a: &CMatrix, tol: f64) -> Result<f64> {
    let values = hermitian_eigenvalues(a, tol)?;
    Ok(values.iter().map(|v| v.abs()).sum())
}

/// Kronecker product with the first factor as the slow index:
/// `(A ⊗ B)[(i·rB + k), (j·cB + l)] = A[i,j]·B[k,l]`.
pub fn tensor(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Kronecker product of vectors, first factor slow.
pub fn tensor_vec(a: &CVector, b: &CVector) -> CVector {
    let mut out = CVector::zeros(a.len() * b.len());
    for i in 0..a.len() {
        for k in 0..b.len() {
            out[i * b.len() + k] = a[i] * b[k];
        }
    }
    out
}

fn ginibre(rows: usize, cols: usize, rng: &mut ChaCha12Rng) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
    })
}

/// Haar-distributed random isometry: `cols` orthonormal columns in
/// dimension `rows`, via QR of a Ginibre matrix with the phases of the R
/// diagonal absorbed. Deterministic given the seed.
pub fn random_haar_isometry(rows: usize, cols: usize, seed: u64) -> CMatrix {
    assert!(cols <= rows, "isometry needs cols <= rows");
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let g = ginibre(rows, cols, &mut rng);
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..cols {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { ONE };
        for i in 0..rows {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Haar-distributed random unitary, deterministic given the seed.
pub fn random_haar_unitary(dim: usize, seed: u64) -> CMatrix {
    assert!(dim >= 1, "dimension must be positive");
    random_haar_isometry(dim, dim, seed)
}

/// A normalized state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    dim: usize,
    amplitudes: CVector,
}

impl PureState {
    /// Validates the squared norm against 1 within `tol`.
    pub fn new(amplitudes: CVector, tol: f64) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::WrongArity {
                expected: 1,
                got: 0,
            });
        }
        if !amplitudes
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
        {
            return Err(Error::NonFinite);
        }
        let norm_sq: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > tol {
            return Err(Error::NotNormalized { norm: norm_sq, tol });
        }
        Ok(Self {
            dim: amplitudes.len(),
            amplitudes,
        })
    }

    pub fn basis_state(dim: usize, index: usize) -> Self {
        assert!(index < dim);
        let mut v = CVector::zeros(dim);
        v[index] = ONE;
        Self {
            dim,
            amplitudes: v,
        }
    }

    pub fn random(dim: usize, seed: u64) -> Self {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let g = ginibre(dim, 1, &mut rng);
        let v = g.column(0).into_owned();
        let norm = v.norm();
        Self {
            dim,
            amplitudes: v.unscale(norm),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    /// Inner product `⟨self|other⟩`.
    pub fn inner(&self, other: &PureState) -> Result<C64> {
        if self.dim != other.dim {
            return Err(Error::DimMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        Ok(self.amplitudes.dotc(&other.amplitudes))
    }

    pub fn projector(&self) -> CMatrix {
        &self.amplitudes * self.amplitudes.adjoint()
    }
}

/// Trace norm distance between two pure states, `2√(1 - |⟨ψ|φ⟩|²)`.
pub fn pure_trace_distance(psi: &PureState, phi: &PureState) -> Result<f64> {
    let overlap = psi.inner(phi)?;
    Ok(2.0 * (1.0 - overlap.norm_sqr()).max(0.0).sqrt())
}

/// A validated density matrix: Hermitian, PSD and unit trace within `tol`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dim: usize,
    mat: CMatrix,
}

impl DensityMatrix {
    pub fn new(mat: CMatrix, tol: f64) -> Result<Self> {
        if mat.nrows() != mat.ncols() {
            return Err(Error::NotSquare {
                rows: mat.nrows(),
                cols: mat.ncols(),
            });
        }
        let values = hermitian_eigenvalues(&mat, tol)?;
        let min_eig = values.first().copied().unwrap_or(0.0);
        if min_eig < -tol {
            return Err(Error::NotPsd {
                min_eigenvalue: min_eig,
            });
        }
        let trace: f64 = mat.diagonal().iter().map(|z| z.re).sum();
        if (trace - 1.0).abs() > tol {
            return Err(Error::BadTrace { trace, tol });
        }
        Ok(Self {
            dim: mat.nrows(),
            mat,
        })
    }

    pub fn from_pure(psi: &PureState) -> Self {
        Self {
            dim: psi.dim(),
            mat: psi.projector(),
        }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            dim,
            mat: CMatrix::identity(dim, dim).unscale(dim as f64),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    /// Eigenvalues ascending, with values in `[-tol, 0)` clipped to 0.
    pub fn eigenvalues_clipped(&self, tol: f64) -> Result<Vec<f64>> {
        let values = hermitian_eigenvalues(&self.mat, tol)?;
        Ok(values
            .into_iter()
            .map(|v| if v < 0.0 && v >= -tol { 0.0 } else { v })
            .collect())
    }

    pub fn purity(&self) -> f64 {
        (&self.mat * &self.mat).diagonal().iter().map(|z| z.re).sum()
    }
}

/// Upper bound `2√(1 - ⟨ψ|ρ|ψ⟩)` on the trace norm distance between a
/// state and a pure state.
pub fn mixed_pure_bound(rho: &DensityMatrix, psi: &PureState) -> Result<f64> {
    if rho.dim() != psi.dim() {
        return Err(Error::DimMismatch {
            left: rho.dim(),
            right: psi.dim(),
        });
    }
    let overlap = (psi.amplitudes().adjoint() * rho.matrix() * psi.amplitudes())[(0, 0)].re;
    Ok(2.0 * (1.0 - overlap).max(0.0).sqrt())
}

/// Which tensor factor to keep in a partial trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Keep {
    First,
    Second,
}

/// Partial trace of a state on `C^{d1} ⊗ C^{d2}` (composite index
/// `a·d2 + b`), keeping the named subsystem.
pub fn partial_trace(rho: &DensityMatrix, d1: usize, d2: usize, keep: Keep) -> Result<DensityMatrix> {
    if d1 * d2 != rho.dim() {
        return Err(Error::BadFactorization {
            dim: rho.dim(),
            d1,
            d2,
        });
    }
    let out = partial_trace_matrix(rho.matrix(), d1, d2, keep);
    DensityMatrix::new(out, DEFAULT_TOL)
}

/// Partial trace of an arbitrary matrix on the composite space; used where
/// the input is a difference of states rather than a state.
pub fn partial_trace_matrix(m: &CMatrix, d1: usize, d2: usize, keep: Keep) -> CMatrix {
    assert_eq!(m.nrows(), d1 * d2);
    assert_eq!(m.ncols(), d1 * d2);
    match keep {
        Keep::First => {
            let mut out = CMatrix::zeros(d1, d1);
            for a in 0..d1 {
                for a2 in 0..d1 {
                    let mut acc = ZERO;
                    for b in 0..d2 {
                        acc += m[(a * d2 + b, a2 * d2 + b)];
                    }
                    out[(a, a2)] = acc;
                }
            }
            out
        }
        Keep::Second => {
            let mut out = CMatrix::zeros(d2, d2);
            for b in 0..d2 {
                for b2 in 0..d2 {
                    let mut acc = ZERO;
                    for a in 0..d1 {
                        acc += m[(a * d2 + b, a * d2 + b2)];
                    }
                    out[(b, b2)] = acc;
                }
            }
            out
        }
    }
}

/// Random density matrix of the given numerical rank, `GG†/Tr(GG†)` with
/// `G` a `dim × rank` Ginibre matrix. Deterministic given the seed.
pub fn random_density(dim: usize, rank: usize, seed: u64) -> Result<DensityMatrix> {
    if rank < 1 || rank > dim {
        return Err(Error::RankOutOfRange { rank, dim });
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let g = ginibre(dim, rank, &mut rng);
    let m = &g * g.adjoint();
    let trace: f64 = m.diagonal().iter().map(|z| z.re).sum();
    DensityMatrix::new(m.unscale(trace), DEFAULT_TOL)
}

/// A positive-operator-valued measure: PSD elements summing to identity.
#[derive(Debug, Clone)]
pub struct Povm {
    dim: usize,
    elements: Vec<CMatrix>,
}

impl Povm {
    pub fn new(elements: Vec<CMatrix>, tol: f64) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::WrongArity {
                expected: 1,
                got: 0,
            });
        }
        let dim = elements[0].nrows();
        let mut sum = CMatrix::zeros(dim, dim);
        for e in &elements {
            if e.nrows() != dim || e.ncols() != dim {
                return Err(Error::DimMismatch {
                    left: dim,
                    right: e.nrows(),
                });
            }
            let values = hermitian_eigenvalues(e, tol)?;
            let min_eig = values.first().copied().unwrap_or(0.0);
            if min_eig < -tol {
                return Err(Error::NotPsd {
                    min_eigenvalue: min_eig,
                });
            }
            sum += e;
        }
        let dev = max_abs_diff(&sum, &CMatrix::identity(dim, dim));
        if dev > tol {
            return Err(Error::PovmIncomplete { deviation: dev });
        }
        Ok(Self { dim, elements })
    }

    /// Projectors onto the computational basis.
    pub fn computational(dim: usize) -> Self {
        let elements = (0..dim)
            .map(|i| PureState::basis_state(dim, i).projector())
            .collect();
        Self { dim, elements }
    }

    /// Projectors onto the columns of a unitary.
    pub fn from_basis_columns(basis: &CMatrix, tol: f64) -> Result<Self> {
        let dev = unitary_deviation(basis);
        if dev > tol {
            return Err(Error::NotUnitary {
                deviation: dev,
                tol,
            });
        }
        let dim = basis.nrows();
        let elements = (0..dim)
            .map(|j| {
                let col = basis.column(j).into_owned();
                &col * col.adjoint()
            })
            .collect();
        Ok(Self { dim, elements })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_outcomes(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[CMatrix] {
        &self.elements
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    #[test]
    fn trace_norm_zero_matrix() {
        let z = CMatrix::zeros(3, 3);
        assert_close(trace_norm(&z, DEFAULT_TOL).unwrap(), 0.0, 1e-15);
    }

    #[test]
    fn trace_norm_orthogonal_projector_difference() {
        let a = PureState::basis_state(2, 0).projector() - PureState::basis_state(2, 1).projector();
        assert_close(trace_norm(&a, DEFAULT_TOL).unwrap(), 2.0, 1e-12);
    }

    #[test]
    fn trace_norm_projector_minus_half_identity() {
        // |0><0| - I/2 has eigenvalues ±1/2.
        let a = PureState::basis_state(2, 0).projector() - CMatrix::identity(2, 2).unscale(2.0);
        assert_close(trace_norm(&a, DEFAULT_TOL).unwrap(), 1.0, 1e-12);
    }

    #[test]
    fn trace_norm_rejects_non_square_and_non_hermitian() {
        let rect = CMatrix::zeros(2, 3);
        assert!(matches!(
            trace_norm(&rect, DEFAULT_TOL),
            Err(Error::NotSquare { .. })
        ));
        let mut m = CMatrix::zeros(2, 2);
        m[(0, 1)] = ONE;
        assert!(matches!(
            trace_norm(&m, DEFAULT_TOL),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn pure_distance_examples() {
        let psi = PureState::basis_state(2, 0);
        let phi = PureState::basis_state(2, 1);
        assert_close(pure_trace_distance(&psi, &psi).unwrap(), 0.0, 1e-15);
        assert_close(pure_trace_distance(&psi, &phi).unwrap(), 2.0, 1e-15);
        // overlap 1/sqrt(2) gives 2 sqrt(1 - 1/2) = sqrt(2)
        let plus = PureState::new(
            CVector::from_vec(vec![ONE, ONE]).unscale(2.0_f64.sqrt()),
            DEFAULT_TOL,
        )
        .unwrap();
        assert_close(
            pure_trace_distance(&psi, &plus).unwrap(),
            std::f64::consts::SQRT_2,
            1e-12,
        );
        let bigger = PureState::basis_state(3, 0);
        assert!(matches!(
            pure_trace_distance(&psi, &bigger),
            Err(Error::DimMismatch { .. })
        ));
    }

    #[test]
    fn pure_distance_matches_trace_norm_of_projector_difference() {
        for seed in 0..20u64 {
            let dim = 2 + (seed as usize % 7);
            let psi = PureState::random(dim, 1000 + seed);
            let phi = PureState::random(dim, 2000 + seed);
            let formula = pure_trace_distance(&psi, &phi).unwrap();
            let direct = trace_norm(&(psi.projector() - phi.projector()), DEFAULT_TOL).unwrap();
            assert_close(formula, direct, 1e-10);
        }
    }

    #[test]
    fn mixed_pure_bound_examples() {
        let psi = PureState::basis_state(2, 0);
        let rho_pure = DensityMatrix::from_pure(&psi);
        assert_close(mixed_pure_bound(&rho_pure, &psi).unwrap(), 0.0, 1e-12);
        assert_close(
            trace_norm(&(rho_pure.matrix() - psi.projector()), DEFAULT_TOL).unwrap(),
            0.0,
            1e-12,
        );

        let mixed = DensityMatrix::maximally_mixed(2);
        let bound = mixed_pure_bound(&mixed, &psi).unwrap();
        assert_close(bound, std::f64::consts::SQRT_2, 1e-12);
        let exact = trace_norm(&(mixed.matrix() - psi.projector()), DEFAULT_TOL).unwrap();
        assert_close(exact, 1.0, 1e-12);
        assert!(bound >= exact - 1e-9);

        let phi = PureState::basis_state(2, 1);
        let rho_orth = DensityMatrix::from_pure(&phi);
        assert_close(mixed_pure_bound(&rho_orth, &psi).unwrap(), 2.0, 1e-12);
        assert_close(
            trace_norm(&(rho_orth.matrix() - psi.projector()), DEFAULT_TOL).unwrap(),
            2.0,
            1e-12,
        );
    }

    #[test]
    fn partial_trace_product_state() {
        let rho1 = random_density(2, 2, 11).unwrap();
        let rho2 = random_density(3, 1, 12).unwrap();
        let joint =
            DensityMatrix::new(tensor(rho1.matrix(), rho2.matrix()), DEFAULT_TOL).unwrap();
        let red1 = partial_trace(&joint, 2, 3, Keep::First).unwrap();
        let red2 = partial_trace(&joint, 2, 3, Keep::Second).unwrap();
        assert!(max_abs_diff(red1.matrix(), rho1.matrix()) < 1e-12);
        assert!(max_abs_diff(red2.matrix(), rho2.matrix()) < 1e-12);
    }

    #[test]
    fn partial_trace_maximally_entangled() {
        let mut v = CVector::zeros(4);
        v[0] = ONE;
        v[3] = ONE;
        let psi = PureState::new(v.unscale(2.0_f64.sqrt()), DEFAULT_TOL).unwrap();
        let rho = DensityMatrix::from_pure(&psi);
        let red = partial_trace(&rho, 2, 2, Keep::First).unwrap();
        assert!(max_abs_diff(red.matrix(), DensityMatrix::maximally_mixed(2).matrix()) < 1e-12);
    }

    #[test]
    fn partial_trace_rejects_bad_factorization() {
        let rho = random_density(6, 2, 3).unwrap();
        assert!(matches!(
            partial_trace(&rho, 4, 2, Keep::First),
            Err(Error::BadFactorization { .. })
        ));
    }

    #[test]
    fn tensor_examples() {
        let i2 = CMatrix::identity(2, 2);
        assert!(max_abs_diff(&tensor(&i2, &i2), &CMatrix::identity(4, 4)) < 1e-15);

        let p0 = PureState::basis_state(2, 0).projector();
        let p1 = PureState::basis_state(2, 1).projector();
        let t = tensor(&p0, &p1);
        let mut expected = CMatrix::zeros(4, 4);
        expected[(1, 1)] = ONE; // slow index 0, fast index 1
        assert!(max_abs_diff(&t, &expected) < 1e-15);
    }

    #[test]
    fn tensor_mixed_product_identity() {
        // (A⊗B)(C⊗D) = AC ⊗ BD on random inputs
        let mut rng = ChaCha12Rng::seed_from_u64(5);
        let a = ginibre(2, 2, &mut rng);
        let b = ginibre(2, 2, &mut rng);
        let c = ginibre(2, 2, &mut rng);
        let d = ginibre(2, 2, &mut rng);
        let left = tensor(&a, &b) * tensor(&c, &d);
        let right = tensor(&(&a * &c), &(&b * &d));
        assert!(max_abs_diff(&left, &right) < 1e-12);
    }

    #[test]
    fn haar_unitary_properties() {
        let u1 = random_haar_unitary(1, 9);
        assert_close(u1[(0, 0)].norm(), 1.0, 1e-12);

        let u = random_haar_unitary(5, 42);
        assert!(unitary_deviation(&u) < 1e-10);

        let again = random_haar_unitary(5, 42);
        assert!(u
            .iter()
            .zip(again.iter())
            .all(|(a, b)| a.re == b.re && a.im == b.im));
    }

    #[test]
    fn random_density_properties() {
        let pure = random_density(3, 1, 21).unwrap();
        assert_close(pure.purity(), 1.0, 1e-9);

        let full = random_density(2, 2, 22).unwrap();
        let trace: f64 = full.matrix().diagonal().iter().map(|z| z.re).sum();
        assert_close(trace, 1.0, 1e-12);
        let eigs = full.eigenvalues_clipped(DEFAULT_TOL).unwrap();
        assert!(eigs.iter().all(|&v| v >= -1e-12));

        assert!(matches!(
            random_density(2, 3, 1),
            Err(Error::RankOutOfRange { .. })
        ));
        assert!(matches!(
            random_density(2, 0, 1),
            Err(Error::RankOutOfRange { .. })
        ));
    }

    #[test]
    fn povm_validation() {
        let povm = Povm::computational(3);
        assert!(Povm::new(povm.elements().to_vec(), DEFAULT_TOL).is_ok());

        // Elements not summing to identity are rejected.
        let bad = vec![PureState::basis_state(2, 0).projector()];
        assert!(matches!(
            Povm::new(bad, DEFAULT_TOL),
            Err(Error::PovmIncomplete { .. })
        ));
    }
}
