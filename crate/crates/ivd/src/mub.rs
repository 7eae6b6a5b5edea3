//! Generalized Hadamard matrices and mutually unbiased bases.
//!
//! A generalized Hadamard matrix is a unitary whose entries all have
//! modulus `1/√D`; its columns form a basis mutually unbiased to the
//! computational one. Constructions here are certified numerically before
//! they are returned, so correctness is a runtime invariant rather than a
//! trusted fact.

use crate::linalg::{unitary_deviation, CMatrix, C64};
use crate::{Error, Result};

pub const HADAMARD_TOL: f64 = 1e-10;

/// A certified generalized Hadamard matrix with a stable label.
#[derive(Debug, Clone)]
pub struct GeneralizedHadamard {
    dim: usize,
    mat: CMatrix,
    id: String,
}

impl GeneralizedHadamard {
    /// Validates unitarity and the flat-modulus property within `tol`.
    pub fn new(mat: CMatrix, id: impl Into<String>, tol: f64) -> Result<Self> {
        if mat.nrows() != mat.ncols() {
            return Err(Error::NotSquare {
                rows: mat.nrows(),
                cols: mat.ncols(),
            });
        }
        let dim = mat.nrows();
        let u_dev = unitary_deviation(&mat);
        if u_dev > tol {
            return Err(Error::NotUnitary {
                deviation: u_dev,
                tol,
            });
        }
        let target = 1.0 / (dim as f64).sqrt();
        let m_dev = mat
            .iter()
            .map(|z| (z.norm() - target).abs())
            .fold(0.0, f64::max);
        if m_dev > tol {
            return Err(Error::InvariantViolation(format!(
                "entry modulus deviates from 1/sqrt({dim}) by {m_dev:.3e}"
            )));
        }
        Ok(Self {
            dim,
            mat,
            id: id.into(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn id(&self) -> &str {
        &self.id
    }
}

/// Discrete Fourier matrix `F[j,k] = ω^{jk}/√D` with `ω = exp(2πi/D)`.
pub fn fourier_matrix(dim: usize) -> Result<GeneralizedHadamard> {
    if dim < 2 {
        return Err(Error::OutOfRange {
            what: "dim",
            value: dim as f64,
            lo: 2.0,
            hi: f64::INFINITY,
        });
    }
    let scale = 1.0 / (dim as f64).sqrt();
    let mat = CMatrix::from_fn(dim, dim, |j, k| {
        // reduce j*k mod D before multiplying by 2π/D for precision
        let phase = 2.0 * std::f64::consts::PI * ((j * k) % dim) as f64 / dim as f64;
        let (s, c) = phase.sin_cos();
        C64::new(c * scale, s * scale)
    });
    GeneralizedHadamard::new(mat, format!("fourier-{dim}"), HADAMARD_TOL)
}

/// Real Hadamard matrix of order `2^n`: `H[i,j] = (-1)^{i·j}/√D` with the
/// bitwise dot product in the exponent.
pub fn sylvester_hadamard(n: u32) -> Result<GeneralizedHadamard> {
    if n < 1 {
        return Err(Error::OutOfRange {
            what: "n",
            value: n as f64,
            lo: 1.0,
            hi: f64::INFINITY,
        });
    }
    let dim = 1usize << n;
    let scale = 1.0 / (dim as f64).sqrt();
    let mat = CMatrix::from_fn(dim, dim, |i, j| {
        let parity = ((i & j).count_ones() & 1) as i32;
        C64::new(if parity == 0 { scale } else { -scale }, 0.0)
    });
    GeneralizedHadamard::new(mat, format!("sylvester-{dim}"), HADAMARD_TOL)
}

/// Checks whether two orthonormal bases (given as unitaries whose columns
/// are the basis vectors) are mutually unbiased within `tol`. Returns the
/// verdict together with the worst deviation of `|⟨φᵢ|ψⱼ⟩|` from `1/√D`.
pub fn is_mub_pair(b1: &CMatrix, b2: &CMatrix, tol: f64) -> Result<(bool, f64)> {
    if b1.nrows() != b2.nrows() || b1.ncols() != b2.ncols() {
        return Err(Error::DimMismatch {
            left: b1.nrows(),
            right: b2.nrows(),
        });
    }
    for (name, b) in [("b1", b1), ("b2", b2)] {
        let dev = unitary_deviation(b);
        if dev > tol.max(1e-9) {
            let _ = name;
            return Err(Error::NotUnitary {
                deviation: dev,
                tol: tol.max(1e-9),
            });
        }
    }
    let dim = b1.nrows();
    let overlaps = b1.adjoint() * b2;
    let target = 1.0 / (dim as f64).sqrt();
    let worst = overlaps
        .iter()
        .map(|z| (z.norm() - target).abs())
        .fold(0.0, f64::max);
    Ok((worst <= tol, worst))
}

/// Group law a Hadamard matrix may respect on its row indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HadamardGroup {
    /// Addition modulo D.
    Cyclic,
    /// Bitwise XOR (requires D a power of two).
    Xor,
}

impl HadamardGroup {
    pub fn add(&self, a: usize, b: usize, dim: usize) -> usize {
        match self {
            HadamardGroup::Cyclic => (a + b) % dim,
            HadamardGroup::Xor => a ^ b,
        }
    }

    pub fn sub(&self, a: usize, b: usize, dim: usize) -> usize {
        match self {
            HadamardGroup::Cyclic => (a + dim - b) % dim,
            HadamardGroup::Xor => a ^ b,
        }
    }
}

/// Worst entrywise deviation from the group-Hadamard identities
/// `H[i,k]·H[j,k] = H[i+j,k]/√D` and `H[i,k]·H*[j,k] = H[i-j,k]/√D`.
pub fn group_hadamard_deviation(mat: &CMatrix, group: HadamardGroup) -> f64 {
    let dim = mat.nrows();
    if group == HadamardGroup::Xor && !dim.is_power_of_two() {
        return f64::INFINITY;
    }
    let inv_sqrt = 1.0 / (dim as f64).sqrt();
    let mut worst = 0.0f64;
    for i in 0..dim {
        for j in 0..dim {
            let sum_idx = group.add(i, j, dim);
            let diff_idx = group.sub(i, j, dim);
            for k in 0..dim {
                let prod = mat[(i, k)] * mat[(j, k)];
                let want = mat[(sum_idx, k)] * inv_sqrt;
                worst = worst.max((prod - want).norm());

                let prod_c = mat[(i, k)] * mat[(j, k)].conj();
                let want_c = mat[(diff_idx, k)] * inv_sqrt;
                worst = worst.max((prod_c - want_c).norm());
            }
        }
    }
    worst
}

/// True when the Hadamard respects the named group law within `tol`.
pub fn is_group_hadamard(h: &GeneralizedHadamard, group: HadamardGroup, tol: f64) -> bool {
    group_hadamard_deviation(h.matrix(), group) <= tol
}

/// Detects which supported group law a Hadamard respects, if any.
pub fn detect_group(h: &GeneralizedHadamard, tol: f64) -> Option<HadamardGroup> {
    if is_group_hadamard(h, HadamardGroup::Cyclic, tol) {
        Some(HadamardGroup::Cyclic)
    } else if is_group_hadamard(h, HadamardGroup::Xor, tol) {
        Some(HadamardGroup::Xor)
    } else {
        None
    }
}

/// A certified set of mutually unbiased bases; columns of each matrix are
/// the basis vectors.
#[derive(Debug, Clone)]
pub struct MubSet {
    dim: usize,
    bases: Vec<CMatrix>,
    labels: Vec<String>,
    construction: String,
    max_deviation: f64,
}

impl MubSet {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_bases(&self) -> usize {
        self.bases.len()
    }

    pub fn bases(&self) -> &[CMatrix] {
        &self.bases
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn construction(&self) -> &str {
        &self.construction
    }

    pub fn max_deviation(&self) -> f64 {
        self.max_deviation
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Complete MUB set in prime dimension.
///
/// For odd primes this is the quadratic-phase construction: basis `m` has
/// vectors with components `ω^{m j² + k j}/√p`. Dimension 2 uses the
/// eigenbases of the three Pauli operators. Every pair is certified
/// unbiased within `1e-10` before the set is returned.
pub fn prime_mub_set(p: u64, include_computational: bool) -> Result<MubSet> {
    if !is_prime(p) || p > 97 {
        return Err(Error::NotSupportedPrime(p));
    }
    let dim = p as usize;
    let mut bases = Vec::new();
    let mut labels = Vec::new();
    if include_computational {
        bases.push(CMatrix::identity(dim, dim));
        labels.push("computational".to_string());
    }
    if p == 2 {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let x = CMatrix::from_row_slice(
            2,
            2,
            &[
                C64::new(s, 0.0),
                C64::new(s, 0.0),
                C64::new(s, 0.0),
                C64::new(-s, 0.0),
            ],
        );
        let y = CMatrix::from_row_slice(
            2,
            2,
            &[
                C64::new(s, 0.0),
                C64::new(s, 0.0),
                C64::new(0.0, s),
                C64::new(0.0, -s),
            ],
        );
        bases.push(x);
        labels.push("pauli-x".to_string());
        bases.push(y);
        labels.push("pauli-y".to_string());
    } else {
        let scale = 1.0 / (dim as f64).sqrt();
        for m in 0..dim {
            let mat = CMatrix::from_fn(dim, dim, |j, k| {
                let exponent = (m * j * j + k * j) % dim;
                let phase = 2.0 * std::f64::consts::PI * exponent as f64 / dim as f64;
                let (s, c) = phase.sin_cos();
                C64::new(c * scale, s * scale)
            });
            bases.push(mat);
            labels.push(format!("quad-{dim}-m{m}"));
        }
    }

    let mut max_deviation = 0.0f64;
    for a in 0..bases.len() {
        for b in (a + 1)..bases.len() {
            let (ok, dev) = is_mub_pair(&bases[a], &bases[b], HADAMARD_TOL)?;
            max_deviation = max_deviation.max(dev);
            if !ok {
                return Err(Error::InvariantViolation(format!(
                    "bases {} and {} fail unbiasedness (deviation {dev:.3e})",
                    labels[a], labels[b]
                )));
            }
        }
    }
    Ok(MubSet {
        dim,
        bases,
        labels,
        construction: if p == 2 {
            "pauli-eigenbases".to_string()
        } else {
            "quadratic-phase".to_string()
        },
        max_deviation,
    })
}

/// The certified Hadamards to test disturbance against in dimension `d`:
/// every non-computational basis of the complete prime MUB set when `d` is
/// prime, otherwise the Fourier matrix plus (for `d = 2^n`) the real
/// Hadamard.
pub fn hadamards_for_dim(d: usize) -> Result<Vec<GeneralizedHadamard>> {
    if is_prime(d as u64) && d <= 97 {
        let set = prime_mub_set(d as u64, true)?;
        set.bases()
            .iter()
            .zip(set.labels())
            .filter(|(_, label)| label.as_str() != "computational")
            .map(|(b, label)| GeneralizedHadamard::new(b.clone(), label.clone(), HADAMARD_TOL))
            .collect()
    } else {
        let mut out = vec![fourier_matrix(d)?];
        if d.is_power_of_two() {
            out.push(sylvester_hadamard(d.trailing_zeros())?);
        }
        Ok(out)
    }
}
