//! Numerical lower bounds on accessible information.
//!
//! The upper bounds elsewhere in the crate hold for *any* measurement; to
//! see how tight they are we need good concrete measurements. This module
//! provides the standard candidates (pretty-good measurement, eigenbasis
//! projectors) and a local ascent over POVMs parameterized as
//! `M_e = A_e†A_e` followed by the symmetric normalization
//! `E_e = S^{-1/2} M_e S^{-1/2}` with `S = Σ M_e`, which keeps every
//! iterate a valid POVM.

use crate::attack::{builtin_attack, disturbance, eve_states, extract_kraus_vectors, AttackKind, AttackKraus};
use crate::bounds::{ivd_bound, mi_trace_bound_uniform};
use crate::info::{entropy_bits, holevo_bound, QuantumSource};
use crate::linalg::{hermitian_eigen, CMatrix, Povm, C64};
use crate::mub::GeneralizedHadamard;
use crate::{derive_seed, Error, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

/// Configuration for the POVM ascent.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OptimizerConfig {
    /// Outcomes used for randomly initialized restarts.
    pub n_outcomes: usize,
    /// Ascent iterations per restart; 0 means candidates only.
    pub max_iters: usize,
    /// Initial step length along the normalized gradient.
    pub step: f64,
    /// Relative-improvement threshold for plateau detection.
    pub tol: f64,
    pub seed: u64,
    /// Restarts: pretty-good measurement, eigenbasis projectors, and
    /// seeded random starts beyond those two.
    pub restarts: usize,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            n_outcomes: 4,
            max_iters: 60,
            step: 0.25,
            tol: 1e-6,
            seed: 0,
            restarts: 4,
        }
    }
}

impl OptimizerConfig {
    fn validate(&self) -> Result<()> {
        if self.n_outcomes < 2 {
            return Err(Error::OutOfRange {
                what: "n_outcomes",
                value: self.n_outcomes as f64,
                lo: 2.0,
                hi: f64::INFINITY,
            });
        }
        if self.step <= 0.0 || self.tol <= 0.0 {
            return Err(Error::OutOfRange {
                what: "step/tol",
                value: self.step.min(self.tol),
                lo: 0.0,
                hi: f64::INFINITY,
            });
        }
        Ok(())
    }

    /// Budget adjusted to the probe dimension: full ascent is affordable
    /// only on small spaces; on larger ones the candidate measurements
    /// carry the search.
    pub fn scaled_for(&self, dim: usize, n_states: usize) -> Self {
        let mut cfg = self.clone();
        cfg.n_outcomes = (n_states + 1).clamp(2, dim.max(2));
        cfg.max_iters = if dim <= 4 {
            self.max_iters
        } else if dim <= 9 {
            self.max_iters.min(15)
        } else {
            0
        };
        cfg
    }
}

fn hermitian_sqrt(m: &CMatrix) -> Result<CMatrix> {
    let (values, vectors) = hermitian_eigen(m, 1e-7)?;
    let dim = m.nrows();
    let mut out = CMatrix::zeros(dim, dim);
    for (idx, &v) in values.iter().enumerate() {
        let root = v.max(0.0).sqrt();
        if root > 0.0 {
            let col = vectors.column(idx);
            for i in 0..dim {
                for j in 0..dim {
                    out[(i, j)] += col[i] * col[j].conj() * root;
                }
            }
        }
    }
    Ok(out)
}

/// Pretty-good measurement `Eₛ = ρ^{-1/2} pₛρₛ ρ^{-1/2}` on the support
/// of the average state, with the kernel projector appended as a slack
/// outcome when the average is rank-deficient.
pub fn pretty_good_measurement(src: &QuantumSource) -> Result<Povm> {
    let avg = src.average_state();
    let dim = src.dim();
    let (values, vectors) = hermitian_eigen(avg.matrix(), 1e-8)?;
    let max_eig = values.last().copied().unwrap_or(0.0);
    let kernel_cut = 1e-12 * max_eig.max(1.0);

    let mut inv_sqrt = CMatrix::zeros(dim, dim);
    let mut kernel = CMatrix::zeros(dim, dim);
    let mut rank = 0usize;
    for (idx, &v) in values.iter().enumerate() {
        let col = vectors.column(idx);
        if v > kernel_cut {
            rank += 1;
            let w = 1.0 / v.sqrt();
            for i in 0..dim {
                for j in 0..dim {
                    inv_sqrt[(i, j)] += col[i] * col[j].conj() * w;
                }
            }
        } else {
            for i in 0..dim {
                for j in 0..dim {
                    kernel[(i, j)] += col[i] * col[j].conj();
                }
            }
        }
    }

    let mut elements = Vec::with_capacity(src.n_states() + 1);
    for (p, state) in src.priors().probs().iter().zip(src.states()) {
        elements.push(&inv_sqrt * state.matrix().scale(*p) * &inv_sqrt);
    }
    if rank < dim {
        elements.push(kernel);
    }
    Povm::new(elements, 1e-8)
}

/// Projective measurement in the eigenbasis of the average state.
pub fn average_eigenbasis_povm(src: &QuantumSource) -> Result<Povm> {
    let avg = src.average_state();
    let (_, vectors) = hermitian_eigen(avg.matrix(), 1e-8)?;
    let dim = src.dim();
    let elements = (0..dim)
        .map(|idx| {
            let col = vectors.column(idx).into_owned();
            &col * col.adjoint()
        })
        .collect();
    Povm::new(elements, 1e-8)
}

/// Seeded random POVM through the same normalization used by the ascent.
pub fn random_povm(dim: usize, n_outcomes: usize, seed: u64) -> Result<Povm> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let params: Vec<f64> = (0..n_outcomes * 2 * dim * dim)
        .map(|_| StandardNormal.sample(&mut rng))
        .collect();
    let elements = povm_elements_from_params(&params, dim, n_outcomes)
        .ok_or_else(|| Error::InvariantViolation("degenerate random POVM".into()))?;
    Povm::new(elements, 1e-8)
}

fn povm_elements_from_params(params: &[f64], dim: usize, n_out: usize) -> Option<Vec<CMatrix>> {
    let per = 2 * dim * dim;
    debug_assert_eq!(params.len(), n_out * per);
    let mut ms = Vec::with_capacity(n_out);
    let mut s = CMatrix::zeros(dim, dim);
    for e in 0..n_out {
        let base = e * per;
        let a = CMatrix::from_fn(dim, dim, |i, j| {
            let off = base + 2 * (i * dim + j);
            C64::new(params[off], params[off + 1])
        });
        let m = a.adjoint() * a;
        s += &m;
        ms.push(m);
    }
    let eig = ((&s + s.adjoint()).scale(0.5)).try_symmetric_eigen(f64::EPSILON, 20_000)?;
    let max_eig = eig.eigenvalues.iter().cloned().fold(0.0f64, f64::max);
    let min_eig = eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
    if min_eig <= 1e-12 * max_eig.max(1.0) {
        return None;
    }
    let mut inv_sqrt = CMatrix::zeros(dim, dim);
    for idx in 0..dim {
        let col = eig.eigenvectors.column(idx);
        let w = 1.0 / eig.eigenvalues[idx].sqrt();
        for i in 0..dim {
            for j in 0..dim {
                inv_sqrt[(i, j)] += col[i] * col[j].conj() * w;
            }
        }
    }
    Some(ms.into_iter().map(|m| &inv_sqrt * m * &inv_sqrt).collect())
}

fn info_of_elements(states: &[&CMatrix], priors: &[f64], elements: &[CMatrix]) -> f64 {
    let n_s = states.len();
    let n_e = elements.len();
    let mut joint = vec![0.0f64; n_s * n_e];
    let mut px = vec![0.0f64; n_s];
    let mut py = vec![0.0f64; n_e];
    for (s, state) in states.iter().enumerate() {
        for (e, effect) in elements.iter().enumerate() {
            let mut tr = 0.0;
            for i in 0..state.nrows() {
                for j in 0..state.ncols() {
                    tr += (effect[(i, j)] * state[(j, i)]).re;
                }
            }
            let p = (priors[s] * tr).max(0.0);
            joint[s * n_e + e] = p;
            px[s] += p;
            py[e] += p;
        }
    }
    (entropy_bits(&px) + entropy_bits(&py) - entropy_bits(&joint)).max(0.0)
}

fn params_from_elements(elements: &[CMatrix], dim: usize) -> Result<Vec<f64>> {
    let mut params = Vec::with_capacity(elements.len() * 2 * dim * dim);
    for m in elements {
        let a = hermitian_sqrt(m)?;
        for i in 0..dim {
            for j in 0..dim {
                params.push(a[(i, j)].re);
                params.push(a[(i, j)].im);
            }
        }
    }
    Ok(params)
}

/// Outcome of a POVM optimization run.
#[derive(Debug, Clone)]
pub struct OptimizeOutcome {
    pub povm: Povm,
    pub info_bits: f64,
    /// Accepted objective values of the winning restart, in order.
    pub trace: Vec<f64>,
    /// True when the run stopped on plateau detection rather than on the
    /// iteration cap.
    pub converged: bool,
}

/// Local ascent over POVMs, restarted from the candidate measurements and
/// from seeded random points; the best restart wins (ties go to the
/// earlier restart). Because the candidates are included as starting
/// points, the result is never materially below the better of them.
pub fn optimize_povm(src: &QuantumSource, cfg: &OptimizerConfig) -> Result<OptimizeOutcome> {
    cfg.validate()?;
    let dim = src.dim();
    let states: Vec<&CMatrix> = src.states().iter().map(|s| s.matrix()).collect();
    let priors = src.priors().probs().to_vec();

    let mut starts: Vec<(Vec<f64>, usize)> = Vec::new();
    let pgm = pretty_good_measurement(src)?;
    starts.push((
        params_from_elements(pgm.elements(), dim)?,
        pgm.n_outcomes(),
    ));
    let eigen = average_eigenbasis_povm(src)?;
    starts.push((
        params_from_elements(eigen.elements(), dim)?,
        eigen.n_outcomes(),
    ));
    let n_random = cfg.restarts.saturating_sub(2);
    for r in 0..n_random {
        let mut rng = ChaCha12Rng::seed_from_u64(derive_seed(cfg.seed, 0xb0, r as u64));
        let params: Vec<f64> = (0..cfg.n_outcomes * 2 * dim * dim)
            .map(|_| StandardNormal.sample(&mut rng))
            .collect();
        starts.push((params, cfg.n_outcomes));
    }

    let mut best: Option<(f64, Vec<f64>, usize, Vec<f64>, bool)> = None;
    for (params, n_out) in starts {
        let (x, trace, converged) = ascend(&params, n_out, dim, &states, &priors, cfg);
        let value = *trace.last().expect("trace never empty");
        let better = match &best {
            None => true,
            Some((b, ..)) => value > *b,
        };
        if better {
            best = Some((value, x, n_out, trace, converged));
        }
    }
    let (info, params, n_out, trace, converged) = best.expect("at least two restarts");
    let elements = povm_elements_from_params(&params, dim, n_out)
        .ok_or_else(|| Error::InvariantViolation("optimizer produced a degenerate POVM".into()))?;
    let povm = Povm::new(elements, 1e-8)?;
    Ok(OptimizeOutcome {
        povm,
        info_bits: info,
        trace,
        converged,
    })
}

fn ascend(
    start: &[f64],
    n_out: usize,
    dim: usize,
    states: &[&CMatrix],
    priors: &[f64],
    cfg: &OptimizerConfig,
) -> (Vec<f64>, Vec<f64>, bool) {
    let objective = |x: &[f64]| -> Option<f64> {
        povm_elements_from_params(x, dim, n_out).map(|els| info_of_elements(states, priors, &els))
    };
    let mut x = start.to_vec();
    let mut f0 = objective(&x).unwrap_or(0.0);
    let mut trace = vec![f0];
    let mut stall = 0usize;
    let mut converged = false;
    let fd_step = 1e-6;

    for _ in 0..cfg.max_iters {
        let mut grad = vec![0.0f64; x.len()];
        let mut gnorm_sq = 0.0;
        for i in 0..x.len() {
            let old = x[i];
            x[i] = old + fd_step;
            let fi = objective(&x).unwrap_or(f64::NEG_INFINITY);
            x[i] = old;
            let g = if fi.is_finite() { (fi - f0) / fd_step } else { 0.0 };
            grad[i] = g;
            gnorm_sq += g * g;
        }
        let gnorm = gnorm_sq.sqrt();

        let mut improvement = 0.0;
        if gnorm > 1e-14 {
            let mut step = cfg.step;
            for _ in 0..20 {
                let trial: Vec<f64> = x
                    .iter()
                    .zip(&grad)
                    .map(|(xi, gi)| xi + step * gi / gnorm)
                    .collect();
                if let Some(ft) = objective(&trial) {
                    if ft > f0 {
                        improvement = ft - f0;
                        x = trial;
                        f0 = ft;
                        trace.push(ft);
                        break;
                    }
                }
                step *= 0.5;
            }
        }

        let relative = improvement / f0.abs().max(1e-12);
        if relative < cfg.tol {
            stall += 1;
            if stall >= 25 {
                converged = true;
                break;
            }
        } else {
            stall = 0;
        }
    }
    (x, trace, converged)
}

/// One row of a tightness sweep.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScanRow {
    pub dim: usize,
    pub probe_dim: usize,
    pub attack_kind: String,
    pub theta: f64,
    pub hadamard_id: String,
    pub p_err_mub: f64,
    pub corollary_bound_bits: f64,
    pub thm1_bound_bits: f64,
    pub povm_info_bits: f64,
    pub holevo_bits: f64,
    pub seed: u64,
}

/// Attack family swept by [`tightness_scan`].
#[derive(Debug, Clone)]
pub enum ScanFamily {
    Identity,
    BasisCopy,
    InterceptResend,
    PartialCopy { thetas: Vec<f64> },
    RandomHaar { trials: usize },
}

/// Sweeps one attack family, computing per point the disturbance, both
/// bounds, the Holevo value and the optimized measurement information, and
/// asserting the ordering
/// `optimized ≤ min(Holevo, corollary) ≤ corollary ≤ bound`.
pub fn tightness_scan(
    family: &ScanFamily,
    sys_dim: usize,
    probe_dim: usize,
    h: &GeneralizedHadamard,
    cfg: &OptimizerConfig,
    master_seed: u64,
) -> Result<Vec<ScanRow>> {
    let mut points: Vec<(AttackKind, Option<u64>)> = Vec::new();
    match family {
        ScanFamily::Identity => points.push((AttackKind::Identity, None)),
        ScanFamily::BasisCopy => points.push((AttackKind::BasisCopy, None)),
        ScanFamily::InterceptResend => {
            points.push((AttackKind::InterceptResend { basis: None }, None))
        }
        ScanFamily::PartialCopy { thetas } => {
            let mut sorted = thetas.clone();
            sorted.sort_by(f64::total_cmp);
            for theta in sorted {
                points.push((AttackKind::PartialCopy { theta }, None));
            }
        }
        ScanFamily::RandomHaar { trials } => {
            for t in 0..*trials {
                points.push((AttackKind::Identity, Some(derive_seed(master_seed, 0xa7, t as u64))));
            }
        }
    }

    let mut rows = Vec::with_capacity(points.len());
    for (kind, random_seed) in points {
        let kraus = match random_seed {
            Some(seed) => AttackKraus::random_haar(sys_dim, probe_dim, seed)?,
            None => extract_kraus_vectors(&builtin_attack(&kind, sys_dim, probe_dim)?)?,
        };
        let row_seed = random_seed.unwrap_or(master_seed);
        let eve = eve_states(&kraus)?;
        let rep = disturbance(&kraus, h)?;
        let corollary = mi_trace_bound_uniform(&eve)?;
        let thm1 = ivd_bound(sys_dim, rep.p_err_mub)?;
        let holevo = holevo_bound(&eve)?;
        let scaled = cfg.scaled_for(eve.dim(), eve.n_states());
        let optimized = optimize_povm(&eve, &scaled)?.info_bits;

        for (label, lo, hi) in [
            ("optimized vs holevo", optimized, holevo),
            ("optimized vs corollary", optimized, corollary),
            ("corollary vs disturbance bound", corollary, thm1),
        ] {
            if lo > hi + 1e-9 {
                return Err(Error::InvariantViolation(format!(
                    "{label}: {lo} > {hi} on {} at theta {}",
                    kind.name(),
                    kind.theta()
                )));
            }
        }

        rows.push(ScanRow {
            dim: sys_dim,
            probe_dim,
            attack_kind: match random_seed {
                Some(_) => "random_haar".to_string(),
                None => kind.name().to_string(),
            },
            theta: kind.theta(),
            hadamard_id: h.id().to_string(),
            p_err_mub: rep.p_err_mub,
            corollary_bound_bits: corollary,
            thm1_bound_bits: thm1,
            povm_info_bits: optimized,
            holevo_bits: holevo,
            seed: row_seed,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::info::measurement_mutual_info;
    use crate::linalg::{CVector, DensityMatrix, PureState, ONE};
    use crate::mub::fourier_matrix;
    use crate::DEFAULT_TOL;

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    fn plus_state() -> PureState {
        PureState::new(
            CVector::from_vec(vec![ONE, ONE]).unscale(2.0_f64.sqrt()),
            DEFAULT_TOL,
        )
        .unwrap()
    }

    fn zero_plus_source() -> QuantumSource {
        QuantumSource::uniform(vec![
            DensityMatrix::from_pure(&PureState::basis_state(2, 0)),
            DensityMatrix::from_pure(&plus_state()),
        ])
        .unwrap()
    }

    #[test]
    fn pgm_examples() {
        let orth = QuantumSource::uniform(vec![
            DensityMatrix::from_pure(&PureState::basis_state(2, 0)),
            DensityMatrix::from_pure(&PureState::basis_state(2, 1)),
        ])
        .unwrap();
        let pgm = pretty_good_measurement(&orth).unwrap();
        assert_close(measurement_mutual_info(&orth, &pgm).unwrap(), 1.0, 1e-9);

        let same = QuantumSource::uniform(vec![
            DensityMatrix::maximally_mixed(2),
            DensityMatrix::maximally_mixed(2),
        ])
        .unwrap();
        let pgm = pretty_good_measurement(&same).unwrap();
        assert_close(measurement_mutual_info(&same, &pgm).unwrap(), 0.0, 1e-12);

        // regression value computed once with an independent implementation
        let src = zero_plus_source();
        let pgm = pretty_good_measurement(&src).unwrap();
        let info = measurement_mutual_info(&src, &pgm).unwrap();
        assert_close(info, 0.39912396330714417, 1e-9);
        assert!((0.38..=0.45).contains(&info));
        assert!(info <= holevo_bound(&src).unwrap() + 1e-9);
    }

    #[test]
    fn pgm_handles_rank_deficient_average() {
        // two states supported on a 2-dim slice of a 3-dim space
        let src = QuantumSource::uniform(vec![
            DensityMatrix::from_pure(&PureState::basis_state(3, 0)),
            DensityMatrix::from_pure(&PureState::basis_state(3, 1)),
        ])
        .unwrap();
        let pgm = pretty_good_measurement(&src).unwrap();
        assert_eq!(pgm.n_outcomes(), 3); // two states plus the kernel outcome
        assert_close(measurement_mutual_info(&src, &pgm).unwrap(), 1.0, 1e-9);
    }

    #[test]
    fn optimize_orthogonal_source_reaches_prior_entropy() {
        let orth = QuantumSource::uniform(vec![
            DensityMatrix::from_pure(&PureState::basis_state(2, 0)),
            DensityMatrix::from_pure(&PureState::basis_state(2, 1)),
        ])
        .unwrap();
        let out = optimize_povm(&orth, &OptimizerConfig::default()).unwrap();
        assert_close(out.info_bits, 1.0, 1e-6);
    }

    #[test]
    fn optimize_single_state_source() {
        let src = QuantumSource::uniform(vec![crate::linalg::random_density(2, 2, 4).unwrap()])
            .unwrap();
        let out = optimize_povm(&src, &OptimizerConfig::default()).unwrap();
        assert_close(out.info_bits, 0.0, 1e-9);
    }

    #[test]
    fn optimize_beats_candidates_and_stays_under_holevo() {
        // two pure states with overlap cos(π/8)
        let angle = std::f64::consts::PI / 8.0;
        let rotated = PureState::new(
            CVector::from_vec(vec![
                C64::new(angle.cos(), 0.0),
                C64::new(angle.sin(), 0.0),
            ]),
            DEFAULT_TOL,
        )
        .unwrap();
        let src = QuantumSource::uniform(vec![
            DensityMatrix::from_pure(&PureState::basis_state(2, 0)),
            DensityMatrix::from_pure(&rotated),
        ])
        .unwrap();
        let pgm_info =
            measurement_mutual_info(&src, &pretty_good_measurement(&src).unwrap()).unwrap();
        let cfg = OptimizerConfig {
            max_iters: 30,
            ..OptimizerConfig::default()
        };
        let out = optimize_povm(&src, &cfg).unwrap();
        assert!(out.info_bits >= pgm_info - 1e-6);
        assert!(out.info_bits <= holevo_bound(&src).unwrap() + 1e-6);
        // accepted objective values never decrease
        for w in out.trace.windows(2) {
            assert!(w[1] >= w[0]);
        }
    }

    #[test]
    fn optimizer_is_deterministic() {
        let src = zero_plus_source();
        let cfg = OptimizerConfig {
            max_iters: 10,
            seed: 3,
            ..OptimizerConfig::default()
        };
        let a = optimize_povm(&src, &cfg).unwrap();
        let b = optimize_povm(&src, &cfg).unwrap();
        assert_eq!(a.info_bits.to_bits(), b.info_bits.to_bits());
        assert_eq!(a.trace.len(), b.trace.len());
        for (x, y) in a
            .povm
            .elements()
            .iter()
            .zip(b.povm.elements().iter())
        {
            assert_eq!(crate::linalg::max_abs_diff(x, y), 0.0);
        }
    }

    #[test]
    fn random_povm_is_valid() {
        for dim in [2usize, 3, 5] {
            let p = random_povm(dim, 4, 99).unwrap();
            assert_eq!(p.dim(), dim);
        }
    }

    #[test]
    fn scan_endpoints() {
        let f2 = fourier_matrix(2).unwrap();
        let cfg = OptimizerConfig::default();

        let rows = tightness_scan(
            &ScanFamily::PartialCopy {
                thetas: vec![0.0, std::f64::consts::FRAC_PI_2],
            },
            2,
            4,
            &f2,
            &cfg,
            1,
        )
        .unwrap();
        assert_eq!(rows.len(), 2);
        let first = &rows[0];
        assert_close(first.p_err_mub, 0.0, 1e-12);
        assert_close(first.povm_info_bits, 0.0, 1e-9);
        // √P̃ₑ amplifies ~1e-16 noise in P̃ₑ to ~1e-8
        assert_close(first.thm1_bound_bits, 0.0, 1e-6);
        let last = &rows[1];
        assert_close(last.povm_info_bits, 1.0, 1e-6);
        assert_close(last.thm1_bound_bits, 2.0 * std::f64::consts::SQRT_2, 1e-9);
    }

    #[test]
    fn scan_grid_monotone_in_disturbance() {
        let f3 = fourier_matrix(3).unwrap();
        let cfg = OptimizerConfig {
            max_iters: 0,
            ..OptimizerConfig::default()
        };
        let thetas: Vec<f64> = (0..8)
            .map(|i| std::f64::consts::FRAC_PI_2 * i as f64 / 7.0)
            .collect();
        let rows = tightness_scan(
            &ScanFamily::PartialCopy { thetas },
            3,
            3,
            &f3,
            &cfg,
            1,
        )
        .unwrap();
        assert_eq!(rows.len(), 8);
        for w in rows.windows(2) {
            assert!(w[1].p_err_mub >= w[0].p_err_mub - 1e-9);
        }
    }
}
