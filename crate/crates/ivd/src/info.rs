//! Exact classical and quantum information functionals.
//!
//! Everything is measured in bits (log base 2). Probabilities below 1e-15
//! are treated as exact zeros inside logarithms; distributions whose sum
//! drifts from 1 by less than the tolerance are renormalized, anything
//! worse is a hard error.

use crate::linalg::{hermitian_eigenvalues, max_abs_diff, CMatrix, DensityMatrix, Povm};
use crate::{Error, Result, DEFAULT_TOL};
use nalgebra::DMatrix;

const LOG_ZERO_CUTOFF: f64 = 1e-15;

/// `-Σ p log₂ p` over a slice, with `0·log 0 := 0`.
pub fn entropy_bits(probs: &[f64]) -> f64 {
    probs
        .iter()
        .filter(|&&p| p > LOG_ZERO_CUTOFF)
        .map(|&p| -p * p.log2())
        .sum()
}

/// Binary entropy `H(p)` in bits.
pub fn binary_entropy(p: f64) -> f64 {
    entropy_bits(&[p, 1.0 - p])
}

/// A probability distribution: nonnegative entries summing to 1.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbVector {
    probs: Vec<f64>,
}

impl ProbVector {
    /// Validates nonnegativity and normalization within `tol`; small drift
    /// is renormalized away.
    pub fn new(probs: Vec<f64>, tol: f64) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidDistribution {
                reason: "empty distribution".into(),
            });
        }
        let mut cleaned = Vec::with_capacity(probs.len());
        for (i, &p) in probs.iter().enumerate() {
            if !p.is_finite() {
                return Err(Error::InvalidDistribution {
                    reason: format!("entry {i} is not finite"),
                });
            }
            if p < -tol {
                return Err(Error::InvalidDistribution {
                    reason: format!("entry {i} = {p} is negative"),
                });
            }
            cleaned.push(p.max(0.0));
        }
        let sum: f64 = cleaned.iter().sum();
        if (sum - 1.0).abs() > tol {
            return Err(Error::InvalidDistribution {
                reason: format!("entries sum to {sum}, not 1"),
            });
        }
        for p in &mut cleaned {
            *p /= sum;
        }
        Ok(Self { probs: cleaned })
    }

    pub fn uniform(n: usize) -> Self {
        Self {
            probs: vec![1.0 / n as f64; n],
        }
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn is_uniform(&self, tol: f64) -> bool {
        let target = 1.0 / self.len() as f64;
        self.probs.iter().all(|&p| (p - target).abs() <= tol)
    }
}

/// Shannon entropy `H(p)` in bits; bounded by `log₂(len)`.
pub fn shannon_entropy(p: &ProbVector) -> f64 {
    entropy_bits(p.probs())
}

/// A source that emits one of several quantum states with given priors.
#[derive(Debug, Clone)]
pub struct QuantumSource {
    states: Vec<DensityMatrix>,
    priors: ProbVector,
}

impl QuantumSource {
    pub fn new(states: Vec<DensityMatrix>, priors: ProbVector) -> Result<Self> {
        if states.len() != priors.len() {
            return Err(Error::WrongArity {
                expected: states.len(),
                got: priors.len(),
            });
        }
        if states.is_empty() {
            return Err(Error::WrongArity {
                expected: 1,
                got: 0,
            });
        }
        let dim = states[0].dim();
        for s in &states {
            if s.dim() != dim {
                return Err(Error::DimMismatch {
                    left: dim,
                    right: s.dim(),
                });
            }
        }
        Ok(Self { states, priors })
    }

    pub fn uniform(states: Vec<DensityMatrix>) -> Result<Self> {
        let priors = ProbVector::uniform(states.len());
        Self::new(states, priors)
    }

    pub fn dim(&self) -> usize {
        self.states[0].dim()
    }

    pub fn n_states(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[DensityMatrix] {
        &self.states
    }

    pub fn priors(&self) -> &ProbVector {
        &self.priors
    }

    /// The ensemble average `ρ = Σ pₛ ρₛ`.
    pub fn average_state(&self) -> DensityMatrix {
        let dim = self.dim();
        let mut acc = CMatrix::zeros(dim, dim);
        for (p, s) in self.priors.probs().iter().zip(&self.states) {
            acc += s.matrix().scale(*p);
        }
        DensityMatrix::new(acc, DEFAULT_TOL).expect("mixture of valid states is valid")
    }
}

/// Von Neumann entropy `H(ρ)` in bits: the Shannon entropy of the spectrum.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    let eigs = rho.eigenvalues_clipped(DEFAULT_TOL)?;
    Ok(entropy_bits(&eigs))
}

/// Mutual information `I(X;Y) = H(X) + H(Y) - H(X,Y)` of a joint
/// distribution given as a matrix `p(x, y)`.
pub fn mutual_info_classical(joint: &DMatrix<f64>, tol: f64) -> Result<f64> {
    let mut total = 0.0;
    for (idx, &p) in joint.iter().enumerate() {
        if !p.is_finite() {
            return Err(Error::InvalidDistribution {
                reason: format!("joint entry {idx} is not finite"),
            });
        }
        if p < -tol {
            return Err(Error::InvalidDistribution {
                reason: format!("joint entry {idx} = {p} is negative"),
            });
        }
        total += p.max(0.0);
    }
    if (total - 1.0).abs() > tol {
        return Err(Error::InvalidDistribution {
            reason: format!("joint sums to {total}, not 1"),
        });
    }
    let scale = 1.0 / total;
    let (rows, cols) = joint.shape();
    let mut px = vec![0.0; rows];
    let mut py = vec![0.0; cols];
    let mut h_joint = 0.0;
    for x in 0..rows {
        for y in 0..cols {
            let p = joint[(x, y)].max(0.0) * scale;
            px[x] += p;
            py[y] += p;
            if p > LOG_ZERO_CUTOFF {
                h_joint -= p * p.log2();
            }
        }
    }
    Ok((entropy_bits(&px) + entropy_bits(&py) - h_joint).max(0.0))
}

/// Outcome probabilities `p(e|s) = Tr(E_e ρₛ)` as a `n_states × n_outcomes`
/// matrix. Tiny negative traces are clipped to 0.
pub fn conditional_probs(src: &QuantumSource, povm: &Povm) -> Result<DMatrix<f64>> {
    if povm.dim() != src.dim() {
        return Err(Error::DimMismatch {
            left: src.dim(),
            right: povm.dim(),
        });
    }
    let n_s = src.n_states();
    let n_e = povm.n_outcomes();
    let mut cond = DMatrix::zeros(n_s, n_e);
    for (s, state) in src.states().iter().enumerate() {
        for (e, effect) in povm.elements().iter().enumerate() {
            // Tr(E ρ) = Σ_{ij} E_{ij} ρ_{ji}
            let mut tr = 0.0;
            for i in 0..src.dim() {
                for j in 0..src.dim() {
                    let prod = effect[(i, j)] * state.matrix()[(j, i)];
                    tr += prod.re;
                }
            }
            cond[(s, e)] = tr.max(0.0);
        }
    }
    Ok(cond)
}

/// Mutual information `I(S;E)` between the source label and the outcome of
/// the given measurement.
pub fn measurement_mutual_info(src: &QuantumSource, povm: &Povm) -> Result<f64> {
    let cond = conditional_probs(src, povm)?;
    let mut joint = cond;
    for (s, &p) in src.priors().probs().iter().enumerate() {
        for e in 0..joint.ncols() {
            joint[(s, e)] *= p;
        }
    }
    mutual_info_classical(&joint, 1e-6)
}

/// Holevo bound `H(ρ) - Σ pₛ H(ρₛ)` on the accessible information of a
/// source, in bits.
pub fn holevo_bound(src: &QuantumSource) -> Result<f64> {
    let avg = von_neumann_entropy(&src.average_state())?;
    let mut cond = 0.0;
    for (p, s) in src.priors().probs().iter().zip(src.states()) {
        if *p > LOG_ZERO_CUTOFF {
            cond += p * von_neumann_entropy(s)?;
        }
    }
    Ok((avg - cond).max(0.0))
}

/// Spectral check helper used by tests and suites: entropy of `UρU†`.
pub fn entropy_after_unitary(rho: &DensityMatrix, u: &CMatrix) -> Result<f64> {
    let rotated = u * rho.matrix() * u.adjoint();
    let eigs = hermitian_eigenvalues(&rotated, 1e-8)?;
    Ok(entropy_bits(
        &eigs
            .into_iter()
            .map(|v| if v < 0.0 { 0.0 } else { v })
            .collect::<Vec<_>>(),
    ))
}

/// True when two sources have entrywise-close average states; test helper.
pub fn states_close(a: &DensityMatrix, b: &DensityMatrix, tol: f64) -> bool {
    a.dim() == b.dim() && max_abs_diff(a.matrix(), b.matrix()) <= tol
}
