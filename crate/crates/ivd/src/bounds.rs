//! Evaluators for the information bounds.
//!
//! Each function returns the bound value in bits so callers can check
//! dominance over exactly computed quantities. Logs are base 2 throughout;
//! priors exactly equal to 1/2 are accepted wherever "at most 1/2" is
//! required.

use crate::info::{binary_entropy, shannon_entropy, ProbVector, QuantumSource};
use crate::linalg::trace_norm;
use crate::{Error, Result, DEFAULT_TOL};
use nalgebra::DMatrix;

const HALF_SLOP: f64 = 1e-12;

/// Linear lower bound on a concave entropy-like function:
/// `H(p_ref) - (H(p_ref)/p_ref)·|p - p_ref|` with `H` the binary entropy.
/// Never exceeds `H(p)`, with equality at `p = p_ref`.
pub fn entropy_linear_lower(p: f64, p_ref: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::OutOfRange {
            what: "p",
            value: p,
            lo: 0.0,
            hi: 1.0,
        });
    }
    if p_ref <= 0.0 || p_ref > 0.5 + HALF_SLOP {
        return Err(Error::OutOfRange {
            what: "p_ref",
            value: p_ref,
            lo: 0.0,
            hi: 0.5,
        });
    }
    let h_ref = binary_entropy(p_ref);
    Ok(h_ref - (h_ref / p_ref) * (p - p_ref).abs())
}

/// Entropy lower bound for full distributions:
/// `H(p_ref) - Σᵢ log₂(1/p_refᵢ)·|pᵢ - p_refᵢ|`, valid when every
/// reference probability is in (0, 1/2].
pub fn gen_entropy_lower(p: &ProbVector, p_ref: &ProbVector) -> Result<f64> {
    if p.len() != p_ref.len() {
        return Err(Error::WrongArity {
            expected: p_ref.len(),
            got: p.len(),
        });
    }
    for (i, &r) in p_ref.probs().iter().enumerate() {
        if r <= 0.0 || r > 0.5 + HALF_SLOP {
            return Err(Error::PriorAboveHalf {
                index: i,
                value: r,
                hint: " (reference probability must lie in (0, 1/2])".into(),
            });
        }
    }
    let mut value = shannon_entropy(p_ref);
    for (&pi, &ri) in p.probs().iter().zip(p_ref.probs()) {
        value -= (1.0 / ri).log2() * (pi - ri).abs();
    }
    Ok(value)
}

fn check_cond_rows(cond: &DMatrix<f64>) -> Result<()> {
    for s in 0..cond.nrows() {
        let mut sum = 0.0;
        for e in 0..cond.ncols() {
            let p = cond[(s, e)];
            if !p.is_finite() || p < -1e-9 {
                return Err(Error::InvalidDistribution {
                    reason: format!("conditional row {s} has invalid entry {p}"),
                });
            }
            sum += p;
        }
        if (sum - 1.0).abs() > 1e-6 {
            return Err(Error::InvalidDistribution {
                reason: format!("conditional row {s} sums to {sum}"),
            });
        }
    }
    Ok(())
}

fn check_priors_at_most_half(priors: &ProbVector, n_states: usize) -> Result<()> {
    for (i, &p) in priors.probs().iter().enumerate() {
        if p > 0.5 + HALF_SLOP {
            let hint = if n_states == 2 {
                " (for a two-state source use onebit_trace_bound, whose corollary form has no prior restriction)"
            } else {
                ""
            };
            return Err(Error::PriorAboveHalf {
                index: i,
                value: p,
                hint: hint.into(),
            });
        }
    }
    Ok(())
}

/// Variational mutual-information bound
/// `Σₛ pₛ log₂(1/pₛ) Σₑ |p(e|s) - p(e)|` for priors all at most 1/2.
/// Dominates `I(S;E)` of the induced joint.
pub fn mi_variational_bound(priors: &ProbVector, cond: &DMatrix<f64>) -> Result<f64> {
    if priors.len() != cond.nrows() {
        return Err(Error::WrongArity {
            expected: cond.nrows(),
            got: priors.len(),
        });
    }
    check_priors_at_most_half(priors, priors.len())?;
    check_cond_rows(cond)?;
    let n_e = cond.ncols();
    let mut marginal = vec![0.0; n_e];
    for (s, &p) in priors.probs().iter().enumerate() {
        for e in 0..n_e {
            marginal[e] += p * cond[(s, e)];
        }
    }
    let mut bound = 0.0;
    for (s, &p) in priors.probs().iter().enumerate() {
        if p <= 0.0 {
            continue;
        }
        let l1: f64 = (0..n_e).map(|e| (cond[(s, e)] - marginal[e]).abs()).sum();
        bound += p * (1.0 / p).log2() * l1;
    }
    Ok(bound)
}

/// Trace-norm mutual-information bound
/// `Σₛ pₛ log₂(1/pₛ) Tr|ρₛ - ρ|`, valid for any measurement when all
/// priors are at most 1/2.
pub fn mi_trace_bound(src: &QuantumSource) -> Result<f64> {
    check_priors_at_most_half(src.priors(), src.n_states())?;
    let avg = src.average_state();
    let mut bound = 0.0;
    for (&p, state) in src.priors().probs().iter().zip(src.states()) {
        if p <= 0.0 {
            continue;
        }
        let dist = trace_norm(&(state.matrix() - avg.matrix()), DEFAULT_TOL)?;
        bound += p * (1.0 / p).log2() * dist;
    }
    Ok(bound)
}

/// Uniform-prior specialization `log₂(n) Σₛ (1/n) Tr|ρₛ - ρ|`; equal to
/// [`mi_trace_bound`] whenever the priors are uniform.
pub fn mi_trace_bound_uniform(src: &QuantumSource) -> Result<f64> {
    if src.n_states() < 2 {
        return Err(Error::WrongArity {
            expected: 2,
            got: src.n_states(),
        });
    }
    if !src.priors().is_uniform(1e-12) {
        return Err(Error::InvalidDistribution {
            reason: "priors are not uniform".into(),
        });
    }
    mi_trace_bound(src)
}

/// One-bit mutual-information bound
/// `H(S)·p_max·Σₑ |p(e|1) - p(e|0)|` for a two-symbol source; the larger
/// prior plays the role of `p(s=0)`.
pub fn onebit_mi_bound(priors: &ProbVector, cond: &DMatrix<f64>) -> Result<f64> {
    if priors.len() != 2 || cond.nrows() != 2 {
        return Err(Error::WrongArity {
            expected: 2,
            got: priors.len().max(cond.nrows()),
        });
    }
    check_cond_rows(cond)?;
    let h = shannon_entropy(priors);
    let p_max = priors.probs()[0].max(priors.probs()[1]);
    let l1: f64 = (0..cond.ncols())
        .map(|e| (cond[(1, e)] - cond[(0, e)]).abs())
        .sum();
    Ok(h * p_max * l1)
}

/// Both forms of the one-bit trace-norm bound for a two-state source.
#[derive(Debug, Clone, Copy)]
pub struct OneBitTraceBounds {
    /// `H(S)·p_max·Tr|ρ₀ - ρ₁|` (labels ordered so the larger prior leads).
    pub labeled: f64,
    /// `H(S)·Tr|ρ₀ - ρ₁|`, valid without any prior restriction.
    pub corollary: f64,
}

pub fn onebit_trace_bound(src: &QuantumSource) -> Result<OneBitTraceBounds> {
    if src.n_states() != 2 {
        return Err(Error::WrongArity {
            expected: 2,
            got: src.n_states(),
        });
    }
    let dist = trace_norm(
        &(src.states()[0].matrix() - src.states()[1].matrix()),
        DEFAULT_TOL,
    )?;
    let h = shannon_entropy(src.priors());
    let p_max = src.priors().probs()[0].max(src.priors().probs()[1]);
    Ok(OneBitTraceBounds {
        labeled: h * p_max * dist,
        corollary: h * dist,
    })
}

/// Information-vs-disturbance bound `4 log₂(D) √P̃ₑ`: what a measurement
/// on the eavesdropper's states can reveal about a basis vector, given the
/// error probability she would cause in a mutually unbiased basis.
pub fn ivd_bound(dim: usize, p_err_mub: f64) -> Result<f64> {
    if dim < 2 {
        return Err(Error::OutOfRange {
            what: "dim",
            value: dim as f64,
            lo: 2.0,
            hi: f64::INFINITY,
        });
    }
    let p = clamp_probability("p_err_mub", p_err_mub)?;
    Ok(4.0 * (dim as f64).log2() * p.sqrt())
}

/// Function-of-message bound `H(f(K)) · 4√P̃ₑ`.
pub fn fm_bound(h_fk: f64, p_err_mub: f64) -> Result<f64> {
    if !h_fk.is_finite() || h_fk < 0.0 {
        return Err(Error::OutOfRange {
            what: "h_fk",
            value: h_fk,
            lo: 0.0,
            hi: f64::INFINITY,
        });
    }
    let p = clamp_probability("p_err_mub", p_err_mub)?;
    Ok(h_fk * 4.0 * p.sqrt())
}

/// Fidelity-based key-information bound
/// `-(1-δ)log₂(1-δ) - δ log₂(δ/(2^{2R}-1))`, reported for comparison.
pub fn lo_chau_bound(delta: f64, r: u32) -> Result<f64> {
    if delta <= 0.0 || delta >= 1.0 {
        return Err(Error::OutOfRange {
            what: "delta",
            value: delta,
            lo: 0.0,
            hi: 1.0,
        });
    }
    if r < 1 {
        return Err(Error::OutOfRange {
            what: "R",
            value: r as f64,
            lo: 1.0,
            hi: f64::INFINITY,
        });
    }
    let denom = 2f64.powi(2 * r as i32) - 1.0;
    Ok(-(1.0 - delta) * (1.0 - delta).log2() - delta * (delta / denom).log2())
}

fn clamp_probability(what: &'static str, p: f64) -> Result<f64> {
    if !p.is_finite() || p < -1e-12 || p > 1.0 + 1e-12 {
        return Err(Error::OutOfRange {
            what,
            value: p,
            lo: 0.0,
            hi: 1.0,
        });
    }
    Ok(p.clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::info::{measurement_mutual_info, mutual_info_classical};
    use crate::linalg::{CVector, DensityMatrix, Povm, PureState, ONE};

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    #[test]
    fn entropy_linear_lower_examples() {
        assert_close(entropy_linear_lower(0.5, 0.5).unwrap(), 1.0, 1e-15);
        assert_close(binary_entropy(0.5), 1.0, 1e-15);

        assert_close(entropy_linear_lower(1.0, 0.5).unwrap(), 0.0, 1e-15);
        assert_close(binary_entropy(1.0), 0.0, 1e-15);

        let b = entropy_linear_lower(0.7, 0.5).unwrap();
        assert_close(b, 0.6, 1e-12);
        assert!(b <= binary_entropy(0.7) + 1e-12);

        assert!(entropy_linear_lower(0.3, 0.7).is_err());
        assert!(entropy_linear_lower(0.3, 0.0).is_err());
        assert!(entropy_linear_lower(1.2, 0.5).is_err());
    }

    #[test]
    fn gen_entropy_lower_examples() {
        let u4 = ProbVector::uniform(4);
        assert_close(gen_entropy_lower(&u4, &u4).unwrap(), 2.0, 1e-12);

        let u2 = ProbVector::uniform(2);
        let det = ProbVector::new(vec![1.0, 0.0], DEFAULT_TOL).unwrap();
        assert_close(gen_entropy_lower(&det, &u2).unwrap(), 0.0, 1e-12);
        assert_close(shannon_entropy(&det), 0.0, 1e-15);

        let p = ProbVector::new(vec![0.4, 0.3, 0.2, 0.1], DEFAULT_TOL).unwrap();
        let b = gen_entropy_lower(&p, &u4).unwrap();
        assert_close(b, 1.2, 1e-12);
        assert!(b <= shannon_entropy(&p) + 1e-12);

        // the offending index is named in the error
        let bad_ref = ProbVector::new(vec![0.6, 0.4], DEFAULT_TOL).unwrap();
        match gen_entropy_lower(&u2, &bad_ref) {
            Err(Error::PriorAboveHalf { index, .. }) => assert_eq!(index, 0),
            other => panic!("expected PriorAboveHalf, got {other:?}"),
        }
    }

    #[test]
    fn mi_variational_examples() {
        let u2 = ProbVector::uniform(2);
        let same = DMatrix::from_row_slice(2, 2, &[0.5, 0.5, 0.5, 0.5]);
        assert_close(mi_variational_bound(&u2, &same).unwrap(), 0.0, 1e-15);

        // perfectly distinguishing 2-state uniform source: the bound is
        // 2 * (1/2 * log2(2) * 1) = 1 and equals the exact information.
        let perfect = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 1.0]);
        let b = mi_variational_bound(&u2, &perfect).unwrap();
        assert_close(b, 1.0, 1e-15);
        let joint = DMatrix::from_row_slice(2, 2, &[0.5, 0.0, 0.0, 0.5]);
        assert_close(
            mutual_info_classical(&joint, DEFAULT_TOL).unwrap(),
            1.0,
            1e-15,
        );

        // uniform 4-state source, identity channel: brute-force double sum.
        let u4 = ProbVector::uniform(4);
        let id4 = DMatrix::from_fn(4, 4, |i, j| if i == j { 1.0 } else { 0.0 });
        let brute = {
            let mut marg = [0.0f64; 4];
            for s in 0..4 {
                for e in 0..4 {
                    marg[e] += 0.25 * id4[(s, e)];
                }
            }
            let mut total = 0.0;
            for s in 0..4 {
                for e in 0..4 {
                    total += 0.25 * 4.0f64.log2() * (id4[(s, e)] - marg[e]).abs();
                }
            }
            total
        };
        assert_close(brute, 3.0, 1e-12);
        assert_close(mi_variational_bound(&u4, &id4).unwrap(), brute, 1e-12);

        let skew = ProbVector::new(vec![0.7, 0.3], DEFAULT_TOL).unwrap();
        assert!(mi_variational_bound(&skew, &perfect).is_err());
    }

    fn plus_state() -> PureState {
        PureState::new(
            CVector::from_vec(vec![ONE, ONE]).unscale(2.0_f64.sqrt()),
            DEFAULT_TOL,
        )
        .unwrap()
    }

    #[test]
    fn mi_trace_bound_examples() {
        let same = QuantumSource::uniform(vec![
            DensityMatrix::maximally_mixed(2),
            DensityMatrix::maximally_mixed(2),
        ])
        .unwrap();
        assert_close(mi_trace_bound(&same).unwrap(), 0.0, 1e-12);

        let orth = QuantumSource::uniform(vec![
            DensityMatrix::from_pure(&PureState::basis_state(2, 0)),
            DensityMatrix::from_pure(&PureState::basis_state(2, 1)),
        ])
        .unwrap();
        let b = mi_trace_bound(&orth).unwrap();
        assert_close(b, 1.0, 1e-12);
        // tight: the best measurement extracts exactly 1 bit
        let exact = measurement_mutual_info(&orth, &Povm::computational(2)).unwrap();
        assert_close(b, exact, 1e-12);
        assert_close(mi_trace_bound_uniform(&orth).unwrap(), b, 0.0);

        let skew = QuantumSource::new(
            orth.states().to_vec(),
            ProbVector::new(vec![0.75, 0.25], DEFAULT_TOL).unwrap(),
        )
        .unwrap();
        match mi_trace_bound(&skew) {
            Err(Error::PriorAboveHalf { hint, .. }) => {
                assert!(hint.contains("onebit_trace_bound"))
            }
            other => panic!("expected PriorAboveHalf, got {other:?}"),
        }
        assert!(mi_trace_bound_uniform(&skew).is_err());
    }

    #[test]
    fn onebit_bounds_examples() {
        let u2 = ProbVector::uniform(2);
        let same = DMatrix::from_row_slice(2, 2, &[0.5, 0.5, 0.5, 0.5]);
        assert_close(onebit_mi_bound(&u2, &same).unwrap(), 0.0, 1e-15);

        let perfect = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 1.0]);
        assert_close(onebit_mi_bound(&u2, &perfect).unwrap(), 1.0, 1e-15);

        let skew = ProbVector::new(vec![0.75, 0.25], DEFAULT_TOL).unwrap();
        let b = onebit_mi_bound(&skew, &perfect).unwrap();
        assert_close(b, 1.2169171866886992, 1e-12);
        let joint = DMatrix::from_row_slice(2, 2, &[0.75, 0.0, 0.0, 0.25]);
        let exact = mutual_info_classical(&joint, DEFAULT_TOL).unwrap();
        assert_close(exact, 0.8112781244591328, 1e-12);
        assert!(b >= exact - 1e-9);

        let three = ProbVector::uniform(3);
        assert!(onebit_mi_bound(&three, &perfect).is_err());
    }

    #[test]
    fn onebit_trace_bound_examples() {
        let z = DensityMatrix::from_pure(&PureState::basis_state(2, 0));
        let same = QuantumSource::uniform(vec![z.clone(), z.clone()]).unwrap();
        let b = onebit_trace_bound(&same).unwrap();
        assert_close(b.labeled, 0.0, 1e-12);
        assert_close(b.corollary, 0.0, 1e-12);

        let orth = QuantumSource::uniform(vec![
            z.clone(),
            DensityMatrix::from_pure(&PureState::basis_state(2, 1)),
        ])
        .unwrap();
        let b = onebit_trace_bound(&orth).unwrap();
        assert_close(b.labeled, 1.0, 1e-12);

        let zx = QuantumSource::uniform(vec![z, DensityMatrix::from_pure(&plus_state())]).unwrap();
        let b = onebit_trace_bound(&zx).unwrap();
        // Tr|rho0 - rho1| = sqrt(2) (eigenvalues ±1/sqrt(2))
        assert_close(b.corollary, std::f64::consts::SQRT_2, 1e-12);
        assert!(b.corollary >= 0.6008760366928562 - 1e-9);

        let single = QuantumSource::uniform(vec![DensityMatrix::maximally_mixed(2)]).unwrap();
        assert!(onebit_trace_bound(&single).is_err());
    }

    #[test]
    fn ivd_bound_examples() {
        assert_close(ivd_bound(2, 0.0).unwrap(), 0.0, 1e-15);
        assert_close(ivd_bound(2, 0.5).unwrap(), 2.0 * std::f64::consts::SQRT_2, 1e-12);
        assert_close(ivd_bound(4, 0.01).unwrap(), 0.8, 1e-12);
        assert!(ivd_bound(2, -0.1).is_err());
        assert!(ivd_bound(2, 1.1).is_err());
        assert!(ivd_bound(1, 0.1).is_err());
    }

    #[test]
    fn fm_bound_examples() {
        assert_close(fm_bound(0.0, 0.3).unwrap(), 0.0, 1e-15);
        assert_close(
            fm_bound(1.0, 0.5).unwrap(),
            ivd_bound(2, 0.5).unwrap(),
            1e-15,
        );
        assert_close(fm_bound(0.8112781244591328, 0.04).unwrap(), 0.6490224995673062, 1e-12);
        assert!(fm_bound(-0.1, 0.5).is_err());
    }

    #[test]
    fn lo_chau_examples() {
        // vanishes as delta -> 0+
        assert!(lo_chau_bound(1e-5, 1).unwrap() < 1e-3);
        assert!(lo_chau_bound(1e-6, 1).unwrap() < lo_chau_bound(1e-4, 1).unwrap());
        assert_close(lo_chau_bound(0.5, 1).unwrap(), 1.792481250360578, 1e-12);
        // monotone increasing in R at fixed delta
        let mut prev = 0.0;
        for r in 1..6 {
            let v = lo_chau_bound(0.3, r).unwrap();
            assert!(v > prev);
            prev = v;
        }
        assert!(lo_chau_bound(0.0, 1).is_err());
        assert!(lo_chau_bound(1.0, 1).is_err());
    }
}
