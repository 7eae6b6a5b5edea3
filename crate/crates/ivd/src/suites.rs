//! Numerical verification suites.
//!
//! Each suite stress-tests one family of invariants over seeded random
//! instances and reports the worst margin it saw. A margin is the signed
//! distance from violation: a check passes while its margin stays above
//! minus the suite tolerance. Suites are deterministic given the
//! configuration seed.

use crate::attack::{
    bob_channel, builtin_kraus, disturbance, eve_states, p0_quadruple_sum, AttackKind, AttackKraus,
};
use crate::bounds::{
    entropy_linear_lower, fm_bound, gen_entropy_lower, ivd_bound, mi_trace_bound,
    mi_trace_bound_uniform, mi_variational_bound, onebit_mi_bound, onebit_trace_bound,
};
use crate::fm::{function_entropy, sigma_states, FunctionSpec, GroupLaw};
use crate::info::{
    binary_entropy, conditional_probs, entropy_after_unitary, holevo_bound,
    measurement_mutual_info, mutual_info_classical, shannon_entropy, von_neumann_entropy,
    ProbVector, QuantumSource,
};
use crate::linalg::{
    max_abs_diff, mixed_pure_bound, partial_trace_matrix, pure_trace_distance, random_density,
    random_haar_unitary, trace_norm, CMatrix, Keep, Povm, PureState,
};
use crate::mub::{
    fourier_matrix, group_hadamard_deviation, hadamards_for_dim, is_mub_pair, prime_mub_set,
    sylvester_hadamard, GeneralizedHadamard, HadamardGroup,
};
use crate::optimizer::{
    average_eigenbasis_povm, optimize_povm, pretty_good_measurement, random_povm, OptimizerConfig,
};
use crate::{derive_seed, Result, DEFAULT_TOL};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

/// Configuration shared by all suites.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SuiteConfig {
    /// System dimensions for the attack-driven suites.
    pub dims: Vec<usize>,
    /// Attack count per dimension; instance counts pinned by the suites
    /// (500, 10⁴, …) scale proportionally to `trials / 200`.
    pub trials: usize,
    pub seed: u64,
    /// Multiplier on every suite tolerance (1.0 keeps the documented
    /// tolerances).
    pub tol_scale: f64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            dims: vec![2, 3, 4, 5, 8],
            trials: 200,
            seed: 1,
            tol_scale: 1.0,
        }
    }
}

impl SuiteConfig {
    fn count(&self, pinned: usize) -> usize {
        ((pinned * self.trials).div_ceil(200)).max(1)
    }

    fn tol(&self, base: f64) -> f64 {
        base * self.tol_scale
    }
}

/// Outcome of one suite.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SuiteResult {
    pub name: String,
    pub passed: bool,
    /// The smallest margin seen; negative values beyond the tolerance mean
    /// failure.
    pub worst_slack: f64,
    pub checks: usize,
    pub detail: String,
}

struct Tracker {
    worst: f64,
    checks: usize,
}

impl Tracker {
    fn new() -> Self {
        Self {
            worst: f64::INFINITY,
            checks: 0,
        }
    }

    fn record(&mut self, margin: f64) {
        self.checks += 1;
        if margin < self.worst {
            self.worst = margin;
        }
    }

    /// Margin for an equality check: distance of the deviation from zero.
    fn record_eq(&mut self, deviation: f64) {
        self.record(-deviation.abs());
    }
}

fn run_suite<F>(name: &str, tol: f64, body: F) -> SuiteResult
where
    F: FnOnce(&mut Tracker) -> Result<()>,
{
    let mut t = Tracker::new();
    match body(&mut t) {
        Ok(()) => SuiteResult {
            passed: t.checks > 0 && t.worst >= -tol,
            name: name.to_string(),
            worst_slack: if t.checks > 0 { t.worst } else { f64::NAN },
            checks: t.checks,
            detail: format!("tolerance {tol:.1e}"),
        },
        Err(e) => SuiteResult {
            passed: false,
            name: name.to_string(),
            worst_slack: if t.checks > 0 { t.worst } else { f64::NAN },
            checks: t.checks,
            detail: e.to_string(),
        },
    }
}

/// Seeded random-attack corpus for one dimension, probe dimension D².
pub fn attack_corpus(dim: usize, trials: usize, master: u64) -> Result<Vec<(u64, AttackKraus)>> {
    (0..trials)
        .map(|t| {
            let seed = derive_seed(master, dim as u64, t as u64);
            Ok((seed, AttackKraus::random_haar(dim, dim * dim, seed)?))
        })
        .collect()
}

fn canonical_kraus(dim: usize) -> Result<Vec<AttackKraus>> {
    let mut out = vec![
        builtin_kraus(&AttackKind::Identity, dim)?,
        builtin_kraus(&AttackKind::BasisCopy, dim)?,
        builtin_kraus(
            &AttackKind::PartialCopy {
                theta: std::f64::consts::FRAC_PI_3,
            },
            dim,
        )?,
    ];
    out.push(builtin_kraus(&AttackKind::InterceptResend { basis: None }, dim)?);
    Ok(out)
}

fn random_distribution(rng: &mut ChaCha12Rng, len: usize) -> Vec<f64> {
    let mut v: Vec<f64> = (0..len).map(|_| rng.random_range(1e-3..1.0)).collect();
    let sum: f64 = v.iter().sum();
    for x in &mut v {
        *x /= sum;
    }
    v
}

fn random_source(seed: u64, max_dim: usize, max_states: usize) -> Result<(QuantumSource, u64)> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let dim = rng.random_range(2..=max_dim);
    let n_states = rng.random_range(2..=max_states);
    let mut states = Vec::with_capacity(n_states);
    for s in 0..n_states {
        let rank = rng.random_range(1..=dim);
        states.push(random_density(dim, rank, derive_seed(seed, 0x51, s as u64))?);
    }
    let priors = ProbVector::new(random_distribution(&mut rng, n_states), 1e-6)?;
    Ok((QuantumSource::new(states, priors)?, derive_seed(seed, 0x52, 0)))
}

fn suite_trace_norm_two_outcome(cfg: &SuiteConfig) -> SuiteResult {
    run_suite("linalg.trace_norm_two_outcome", cfg.tol(1e-8), |t| {
        for i in 0..cfg.count(200) {
            let dim = 2 + i % 3;
            let seed = derive_seed(cfg.seed, 0x01, i as u64);
            let rho = random_density(dim, 1 + i % dim, seed)?;
            let sigma = random_density(dim, dim, derive_seed(seed, 1, 0))?;
            let a = rho.matrix() - sigma.matrix();
            let tn = trace_norm(&a, DEFAULT_TOL)?;
            // brute force over all two-outcome tests built from the
            // eigenbasis of A
            let (_, vectors) = crate::linalg::hermitian_eigen(&a, DEFAULT_TOL)?;
            let mut best = 0.0f64;
            for mask in 0..(1usize << dim) {
                let mut proj = CMatrix::zeros(dim, dim);
                for k in 0..dim {
                    if mask & (1 << k) != 0 {
                        let col = vectors.column(k);
                        for x in 0..dim {
                            for y in 0..dim {
                                proj[(x, y)] += col[x] * col[y].conj();
                            }
                        }
                    }
                }
                let complement = CMatrix::identity(dim, dim) - &proj;
                let tr_p = (&proj * &a).diagonal().iter().map(|z| z.re).sum::<f64>();
                let tr_c = (&complement * &a).diagonal().iter().map(|z| z.re).sum::<f64>();
                best = best.max(tr_p.abs() + tr_c.abs());
            }
            t.record_eq(tn - best);
        }
        Ok(())
    })
}

fn suite_partial_trace_monotone(cfg: &SuiteConfig) -> SuiteResult {
    run_suite("linalg.partial_trace_monotone", cfg.tol(1e-9), |t| {
        let factors = [(2, 2), (2, 3), (3, 2), (2, 4), (4, 2), (3, 3), (3, 5), (4, 4)];
        for i in 0..cfg.count(500) {
            let (d1, d2) = factors[i % factors.len()];
            let seed = derive_seed(cfg.seed, 0x02, i as u64);
            let rho = random_density(d1 * d2, 1 + i % (d1 * d2), seed)?;
            let sigma = random_density(d1 * d2, d1 * d2, derive_seed(seed, 1, 0))?;
            let diff = rho.matrix() - sigma.matrix();
            let full = trace_norm(&diff, DEFAULT_TOL)?;
            let reduced = trace_norm(&partial_trace_matrix(&diff, d1, d2, Keep::First), DEFAULT_TOL)?;
            t.record(full - reduced);
        }
        Ok(())
    })
}

fn suite_pure_distance(cfg: &SuiteConfig) -> SuiteResult {
    run_suite("linalg.pure_distance_eigensolver", cfg.tol(1e-10), |t| {
        for i in 0..cfg.count(500) {
            let dim = 2 + i % 7;
            let seed = derive_seed(cfg.seed, 0x03, i as u64);
            let psi = PureState::random(dim, seed);
            let phi = PureState::random(dim, derive_seed(seed, 1, 0));
            let formula = pure_trace_distance(&psi, &phi)?;
            let direct = trace_norm(&(psi.projector() - phi.projector()), DEFAULT_TOL)?;
            t.record_eq(formula - direct);
        }
        Ok(())
    })
}

fn suite_mixed_pure(cfg: &SuiteConfig) -> SuiteResult {
    run_suite("linalg.mixed_pure_dominance", cfg.tol(1e-9), |t| {
        for i in 0..cfg.count(500) {
            let dim = 2 + i % 5;
            let seed = derive_seed(cfg.seed, 0x04, i as u64);
            let rho = random_density(dim, 1 + i % dim, seed)?;
            let psi = PureState::random(dim, derive_seed(seed, 1, 0));
            let bound = mixed_pure_bound(&rho, &psi)?;
            let exact = trace_norm(&(rho.matrix() - psi.projector()), DEFAULT_TOL)?;
            t.record(bound - exact);
        }
        Ok(())
    })
}

fn holevo_corpus_instance(cfg: &SuiteConfig, i: usize) -> Result<(QuantumSource, Povm)> {
    let seed = derive_seed(cfg.seed, 0x05, i as u64);
    let (src, povm_seed) = random_source(seed, 4, 4)?;
    let mut rng = ChaCha12Rng::seed_from_u64(povm_seed);
    let n_out = rng.random_range(2..=8);
    let povm = random_povm(src.dim(), n_out, povm_seed)?;
    Ok((src, povm))
}

fn suite_holevo_dominance(cfg: &SuiteConfig) -> SuiteResult {
    run_suite("info.holevo_dominance", cfg.tol(1e-9), |t| {
        for i in 0..cfg.count(500) {
            let (src, povm) = holevo_corpus_instance(cfg, i)?;
            let mi = measurement_mutual_info(&src, &povm)?;
            t.record(holevo_bound(&src)? - mi);
        }
        Ok(())
    })
}

fn suite_mi_prior_cap(cfg: &SuiteConfig) -> SuiteResult {
    run_suite("info.mi_prior_cap", cfg.tol(1e-9), |t| {
        for i in 0..cfg.count(500) {
            let (src, povm) = holevo_corpus_instance(cfg, i)?;
            let mi = measurement_mutual_info(&src, &povm)?;
            t.record(shannon_entropy(src.priors()) - mi);
        }
        Ok(())
    })
}

fn suite_vn_unitary_invariance(cfg: &SuiteConfig) -> SuiteResult {
    run_suite("info.vn_unitary_invariance", cfg.tol(1e-9), |t| {
        for i in 0..cfg.count(200) {
            let dim = 2 + i % 5;
            let seed = derive_seed(cfg.seed, 0x06, i as u64);
            let rho = random_density(dim, 1 + i % dim, seed)?;
            let u = random_haar_unitary(dim, derive_seed(seed, 1, 0));
            let before = von_neumann_entropy(&rho)?;
            let after = entropy_after_unitary(&rho, &u)?;
            t.record_eq(before - after);
        }
        Ok(())
    })
}

fn suite_shannon_concavity(cfg: &SuiteConfig) -> SuiteResult {
    run_suite("info.shannon_concavity", cfg.tol(1e-9), |t| {
        for i in 0..cfg.count(500) {
            let seed = derive_seed(cfg.seed, 0x07, i as u64);
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            let len = rng.random_range(2..=6);
            let p = ProbVector::new(random_distribution(&mut rng, len), 1e-6)?;
            let q = ProbVector::new(random_distribution(&mut rng, len), 1e-6)?;
            let lambda: f64 = rng.random_range(0.0..1.0);
            let mix: Vec<f64> = p
                .probs()
                .iter()
                .zip(q.probs())
                .map(|(a, b)| lambda * a + (1.0 - lambda) * b)
                .collect();
            let mix = ProbVector::new(mix, 1e-6)?;
            t.record(
                shannon_entropy(&mix)
                    - lambda * shannon_entropy(&p)
                    - (1.0 - lambda) * shannon_entropy(&q),
            );
        }
        Ok(())
    })
}

fn suite_gen_entropy_lower(cfg: &SuiteConfig) -> SuiteResult {
    run_suite("bounds.entropy_lower_bounds", cfg.tol(1e-12), |t| {
        for i in 0..cfg.count(10_000) {
            let seed = derive_seed(cfg.seed, 0x08, i as u64);
            let mut rng = ChaCha12Rng::seed_from_u64(seed);

            // binary form
            let p: f64 = rng.random_range(0.0..=1.0);
            let p_ref: f64 = rng.random_range(1e-6..=0.5);
            t.record(binary_entropy(p) - entropy_linear_lower(p, p_ref)?);
            t.record_eq(entropy_linear_lower(p_ref, p_ref)? - binary_entropy(p_ref));

            // general form; reference entries must stay at or below 1/2
            let len = rng.random_range(3..=6);
            let p_ref_vec = loop {
                let v = random_distribution(&mut rng, len);
                if v.iter().all(|&x| x <= 0.5) {
                    break ProbVector::new(v, 1e-6)?;
                }
            };
            let p_vec = ProbVector::new(random_distribution(&mut rng, len), 1e-6)?;
            t.record(shannon_entropy(&p_vec) - gen_entropy_lower(&p_vec, &p_ref_vec)?);
            t.record_eq(gen_entropy_lower(&p_ref_vec, &p_ref_vec)? - shannon_entropy(&p_ref_vec));
        }
        Ok(())
    })
}

fn suite_tight_examples(cfg: &SuiteConfig) -> SuiteResult {
    run_suite("bounds.tight_examples", cfg.tol(1e-9), |t| {
        t.record_eq(entropy_linear_lower(0.5, 0.5)? - 1.0);
        t.record_eq(entropy_linear_lower(1.0, 0.5)? - binary_entropy(1.0));
        let u4 = ProbVector::uniform(4);
        t.record_eq(gen_entropy_lower(&u4, &u4)? - 2.0);

        let u2 = ProbVector::uniform(2);
        let same_rows = DMatrix::from_row_slice(2, 2, &[0.5, 0.5, 0.5, 0.5]);
        t.record_eq(mi_variational_bound(&u2, &same_rows)?);
        let perfect = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 1.0]);
        let exact = mutual_info_classical(
            &DMatrix::from_row_slice(2, 2, &[0.5, 0.0, 0.0, 0.5]),
            DEFAULT_TOL,
        )?;
        t.record_eq(mi_variational_bound(&u2, &perfect)? - exact);
        t.record_eq(onebit_mi_bound(&u2, &perfect)? - exact);

        let orth = QuantumSource::uniform(vec![
            crate::linalg::DensityMatrix::from_pure(&PureState::basis_state(2, 0)),
            crate::linalg::DensityMatrix::from_pure(&PureState::basis_state(2, 1)),
        ])?;
        let best = measurement_mutual_info(&orth, &Povm::computational(2))?;
        t.record_eq(mi_trace_bound(&orth)? - best);
        t.record_eq(onebit_trace_bound(&orth)?.labeled - best);

        t.record_eq(ivd_bound(2, 0.0)?);
        t.record_eq(fm_bound(0.0, 0.7)?);
        Ok(())
    })
}

fn suite_variational_vs_trace(cfg: &SuiteConfig) -> SuiteResult {
    run_suite("bounds.variational_vs_trace", cfg.tol(1e-9), |t| {
        for i in 0..cfg.count(500) {
            let seed = derive_seed(cfg.seed, 0x09, i as u64);
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            let dim = rng.random_range(2..=4);
            let n_states = rng.random_range(2..=4);
            let priors = if n_states == 2 {
                ProbVector::uniform(2)
            } else {
                loop {
                    let v = random_distribution(&mut rng, n_states);
                    if v.iter().all(|&x| x <= 0.5) {
                        break ProbVector::new(v, 1e-6)?;
                    }
                }
            };
            let states = (0..n_states)
                .map(|s| random_density(dim, 1 + (i + s) % dim, derive_seed(seed, 0x10, s as u64)))
                .collect::<Result<Vec<_>>>()?;
            let src = QuantumSource::new(states, priors.clone())?;
            let povm = random_povm(dim, rng.random_range(2..=6), derive_seed(seed, 0x11, 0))?;
            let cond = conditional_probs(&src, &povm)?;
            let variational = mi_variational_bound(&priors, &cond)?;
            let trace = mi_trace_bound(&src)?;
            t.record(trace - variational);
            // the variational bound itself dominates the exact information
            let mut joint = cond.clone();
            for (s, &p) in priors.probs().iter().enumerate() {
                for e in 0..joint.ncols() {
                    joint[(s, e)] *= p;
                }
            }
            t.record(variational - mutual_info_classical(&joint, 1e-6)?);
        }
        Ok(())
    })
}

/// The best information over a list of competitive measurements plus the
/// configured ascent; used by the dominance-chain suite.
pub fn best_measured_info(
    eve: &QuantumSource,
    opt_seed: u64,
    base: &OptimizerConfig,
) -> Result<f64> {
    let mut best = measurement_mutual_info(eve, &pretty_good_measurement(eve)?)?;
    best = best.max(measurement_mutual_info(eve, &average_eigenbasis_povm(eve)?)?);
    let rand_povm = random_povm(eve.dim(), (eve.n_states() + 1).min(eve.dim().max(2)), opt_seed)?;
    best = best.max(measurement_mutual_info(eve, &rand_povm)?);
    let mut cfg = base.scaled_for(eve.dim(), eve.n_states());
    cfg.seed = opt_seed;
    best = best.max(optimize_povm(eve, &cfg)?.info_bits);
    Ok(best)
}

fn suite_dominance_chain(cfg: &SuiteConfig) -> SuiteResult {
    run_suite("bounds.dominance_chain", cfg.tol(1e-9), |t| {
        let base = OptimizerConfig::default();
        for &dim in &cfg.dims {
            let hadamards = hadamards_for_dim(dim)?;
            for (seed, kraus) in attack_corpus(dim, cfg.trials, cfg.seed)? {
                let eve = eve_states(&kraus)?;
                let exact = best_measured_info(&eve, derive_seed(seed, 0x20, 0), &base)?;
                let corollary = mi_trace_bound_uniform(&eve)?;
                t.record(corollary - exact);
                for h in &hadamards {
                    let rep = disturbance(&kraus, h)?;
                    t.record(ivd_bound(dim, rep.p_err_mub)? - corollary);
                }
            }
        }
        Ok(())
    })
}

fn suite_mub_fourier_pair(cfg: &SuiteConfig) -> SuiteResult {
    run_suite("mub.fourier_computational_pair", cfg.tol(1e-10), |t| {
        for dim in 2..=16 {
            let f = fourier_matrix(dim)?;
            let (_, dev) = is_mub_pair(&CMatrix::identity(dim, dim), f.matrix(), 1e-10)?;
            t.record_eq(dev);
        }
        Ok(())
    })
}

fn suite_mub_prime_sets(cfg: &SuiteConfig) -> SuiteResult {
    run_suite("mub.prime_sets", cfg.tol(1e-10), |t| {
        for p in [2u64, 3, 5, 7, 11] {
            let set = prime_mub_set(p, true)?;
            if set.n_bases() != p as usize + 1 {
                return Err(crate::Error::InvariantViolation(format!(
                    "expected {} bases for p={p}, got {}",
                    p + 1,
                    set.n_bases()
                )));
            }
            t.record_eq(set.max_deviation());
        }
        Ok(())
    })
}

fn suite_mub_group_hadamard(cfg: &SuiteConfig) -> SuiteResult {
    run_suite("mub.group_hadamard", cfg.tol(1e-10), |t| {
        for dim in 2..=8 {
            let f = fourier_matrix(dim)?;
            t.record_eq(group_hadamard_deviation(f.matrix(), HadamardGroup::Cyclic));
        }
        for n in 1..=4 {
            let s = sylvester_hadamard(n)?;
            t.record_eq(group_hadamard_deviation(s.matrix(), HadamardGroup::Xor));
        }
        Ok(())
    })
}

fn suite_attack_unitarity(cfg: &SuiteConfig) -> SuiteResult {
    run_suite("attack.unitarity", cfg.tol(1e-9), |t| {
        for &dim in &cfg.dims {
            let mut all = canonical_kraus(dim)?;
            all.extend(attack_corpus(dim, cfg.trials, cfg.seed)?.into_iter().map(|(_, k)| k));
            for kraus in &all {
                for i in 0..dim {
                    let total: f64 = (0..dim).map(|j| kraus.vector(i, j).norm_squared()).sum();
                    t.record_eq(total - 1.0);
                }
            }
        }
        Ok(())
    })
}

fn suite_attack_p0_two_route(cfg: &SuiteConfig) -> SuiteResult {
    run_suite("attack.p0_two_route", cfg.tol(1e-9), |t| {
        for &dim in &cfg.dims {
            let hadamards = hadamards_for_dim(dim)?;
            let mut all = canonical_kraus(dim)?;
            all.extend(attack_corpus(dim, cfg.trials, cfg.seed)?.into_iter().map(|(_, k)| k));
            for kraus in &all {
                for h in &hadamards {
                    let diag = bob_channel(kraus, Some(h))?.diagonal().sum() / dim as f64;
                    let quad = p0_quadruple_sum(kraus, h);
                    t.record_eq(diag - quad);
                }
            }
        }
        Ok(())
    })
}

fn suite_attack_purification(cfg: &SuiteConfig) -> SuiteResult {
    run_suite("attack.purification_identities", cfg.tol(1e-9), |t| {
        for &dim in &cfg.dims {
            let hadamards = hadamards_for_dim(dim)?;
            let group_hadamards: Vec<&GeneralizedHadamard> = hadamards
                .iter()
                .filter(|h| crate::mub::detect_group(h, 1e-10).is_some())
                .collect();
            let mut all = canonical_kraus(dim)?;
            all.extend(attack_corpus(dim, cfg.trials, cfg.seed)?.into_iter().map(|(_, k)| k));
            for kraus in &all {
                for h in &hadamards {
                    // build_purification verifies orthonormality of the
                    // auxiliary bases and the partial-trace identity
                    let bundle = crate::attack::build_purification(kraus, h)?;
                    let p0 = bob_channel(kraus, Some(h))?.diagonal().sum() / dim as f64;
                    t.record_eq(bundle.phi_tilde[0].norm_squared() - dim as f64 * p0);
                }
                for h in &group_hadamards {
                    let bundle = crate::attack::build_purification(kraus, h)?;
                    let spectrum = crate::attack::footnote_error_spectrum(&bundle, h, kraus)?;
                    let channel = bob_channel(kraus, Some(h))?;
                    let group = crate::mub::detect_group(h, 1e-10).expect("filtered above");
                    for (e, &p_pur) in spectrum.iter().enumerate() {
                        let p_ch: f64 = (0..dim)
                            .map(|i| channel[(i, group.add(i, e, dim))])
                            .sum::<f64>()
                            / dim as f64;
                        t.record_eq(p_pur - p_ch);
                    }
                }
            }
        }
        Ok(())
    })
}

fn suite_attack_thm1_chain(cfg: &SuiteConfig) -> SuiteResult {
    run_suite("attack.thm1_chain", cfg.tol(1e-9), |t| {
        for &dim in &cfg.dims {
            let hadamards = hadamards_for_dim(dim)?;
            for (_, kraus) in attack_corpus(dim, cfg.trials, cfg.seed)? {
                let eve = eve_states(&kraus)?;
                let corollary = mi_trace_bound_uniform(&eve)?;
                for h in &hadamards {
                    let rep = disturbance(&kraus, h)?;
                    t.record(ivd_bound(dim, rep.p_err_mub)? - corollary);
                }
            }
        }
        Ok(())
    })
}

fn suite_partial_copy_monotone(cfg: &SuiteConfig) -> SuiteResult {
    run_suite("attack.partial_copy_monotone", cfg.tol(1e-9), |t| {
        for &dim in &cfg.dims {
            let h = fourier_matrix(dim)?;
            let mut previous: Option<(f64, f64)> = None;
            for k in 0..32 {
                let theta = std::f64::consts::FRAC_PI_2 * k as f64 / 31.0;
                let attack = crate::attack::builtin_attack(
                    &AttackKind::PartialCopy { theta },
                    dim,
                    dim,
                )?;
                let kraus = crate::attack::extract_kraus_vectors(&attack)?;
                let pe = disturbance(&kraus, &h)?.p_err_mub;
                let corollary = mi_trace_bound_uniform(&eve_states(&kraus)?)?;
                if let Some((prev_pe, prev_cor)) = previous {
                    t.record(pe - prev_pe);
                    t.record(corollary - prev_cor);
                }
                previous = Some((pe, corollary));
            }
        }
        Ok(())
    })
}

fn fm_dims(cfg: &SuiteConfig) -> Vec<usize> {
    let dims: Vec<usize> = cfg.dims.iter().copied().filter(|&d| d <= 4).collect();
    if dims.is_empty() {
        vec![2, 3]
    } else {
        dims
    }
}

fn random_function(rng: &mut ChaCha12Rng, d: usize) -> FunctionSpec {
    let n_labels = rng.random_range(1..=d);
    let table: Vec<i64> = (0..d).map(|_| rng.random_range(0..n_labels as i64)).collect();
    FunctionSpec::from_table(table).expect("nonempty table")
}

fn groups_for(d: usize) -> Vec<GroupLaw> {
    let mut out = vec![GroupLaw::cyclic(d)];
    if d.is_power_of_two() {
        out.push(GroupLaw::xor_for_dim(d).expect("power of two"));
    }
    out
}

fn suite_fm_sigma_averaging(cfg: &SuiteConfig) -> SuiteResult {
    run_suite("fm.sigma_averaging", cfg.tol(1e-9), |t| {
        for &dim in &fm_dims(cfg) {
            for i in 0..cfg.count(50) {
                let seed = derive_seed(cfg.seed, 0x30 + dim as u64, i as u64);
                let kraus = AttackKraus::random_haar(dim, dim * dim, seed)?;
                let eve = eve_states(&kraus)?;
                let rho = eve.average_state();
                let mut rng = ChaCha12Rng::seed_from_u64(derive_seed(seed, 2, 0));
                let f = random_function(&mut rng, dim);
                for g in groups_for(dim) {
                    for a in 0..dim {
                        let sigmas = sigma_states(&eve, &f, a, &g)?;
                        let mut mix = CMatrix::zeros(eve.dim(), eve.dim());
                        for s in &sigmas {
                            mix += s.state.matrix().scale(s.weight);
                        }
                        t.record_eq(max_abs_diff(&mix, rho.matrix()));
                    }
                }
            }
        }
        Ok(())
    })
}

fn suite_fm_announcement_avg(cfg: &SuiteConfig) -> SuiteResult {
    run_suite("fm.announcement_average", cfg.tol(1e-9), |t| {
        for &dim in &fm_dims(cfg) {
            for i in 0..cfg.count(50) {
                let seed = derive_seed(cfg.seed, 0x40 + dim as u64, i as u64);
                let kraus = AttackKraus::random_haar(dim, dim * dim, seed)?;
                let eve = eve_states(&kraus)?;
                let rho = eve.average_state();
                let mut rng = ChaCha12Rng::seed_from_u64(derive_seed(seed, 2, 0));
                let f = random_function(&mut rng, dim);
                for g in groups_for(dim) {
                    let reference = sigma_states(&eve, &f, 0, &g)?;
                    let mut sums = vec![CMatrix::zeros(eve.dim(), eve.dim()); reference.len()];
                    for a in 0..dim {
                        let sigmas = sigma_states(&eve, &f, a, &g)?;
                        for (idx, s) in sigmas.iter().enumerate() {
                            sums[idx] += s.state.matrix().scale(1.0 / dim as f64);
                        }
                    }
                    for acc in &sums {
                        t.record_eq(max_abs_diff(acc, rho.matrix()));
                    }
                }
            }
        }
        Ok(())
    })
}

fn suite_fm_q_independence(cfg: &SuiteConfig) -> SuiteResult {
    run_suite("fm.q_announcement_independence", 0.0, |t| {
        for &dim in &fm_dims(cfg) {
            for i in 0..cfg.count(50) {
                let seed = derive_seed(cfg.seed, 0x60 + dim as u64, i as u64);
                let kraus = AttackKraus::random_haar(dim, dim * dim, seed)?;
                let eve = eve_states(&kraus)?;
                let mut rng = ChaCha12Rng::seed_from_u64(derive_seed(seed, 2, 0));
                let f = random_function(&mut rng, dim);
                for g in groups_for(dim) {
                    let q0: Vec<f64> = sigma_states(&eve, &f, 0, &g)?
                        .iter()
                        .map(|s| s.weight)
                        .collect();
                    for a in 1..dim {
                        let q: Vec<f64> = sigma_states(&eve, &f, a, &g)?
                            .iter()
                            .map(|s| s.weight)
                            .collect();
                        let worst = q0
                            .iter()
                            .zip(&q)
                            .map(|(x, y)| (x - y).abs())
                            .fold(0.0, f64::max);
                        t.record_eq(worst);
                    }
                }
            }
        }
        Ok(())
    })
}

fn suite_fm_identity_consistency(cfg: &SuiteConfig) -> SuiteResult {
    run_suite("fm.identity_bound_consistency", cfg.tol(1e-12), |t| {
        for &dim in &fm_dims(cfg) {
            let h = fourier_matrix(dim)?;
            for i in 0..cfg.count(20) {
                let seed = derive_seed(cfg.seed, 0x70 + dim as u64, i as u64);
                let kraus = AttackKraus::random_haar(dim, dim * dim, seed)?;
                let pe = disturbance(&kraus, &h)?.p_err_mub;
                let via_fm = fm_bound(function_entropy(&FunctionSpec::identity(dim)), pe)?;
                let via_thm1 = ivd_bound(dim, pe)?;
                t.record_eq(via_fm - via_thm1);
            }
        }
        Ok(())
    })
}

fn povm_validity_margin(povm: &Povm) -> Result<f64> {
    let dim = povm.dim();
    let mut worst = 0.0f64;
    let mut sum = CMatrix::zeros(dim, dim);
    for e in povm.elements() {
        let eigs = crate::linalg::hermitian_eigenvalues(e, 1e-7)?;
        worst = worst.max((-eigs.first().copied().unwrap_or(0.0)).max(0.0));
        sum += e;
    }
    worst = worst.max(max_abs_diff(&sum, &CMatrix::identity(dim, dim)));
    Ok(-worst)
}

fn suite_optimizer_valid_povm(cfg: &SuiteConfig) -> SuiteResult {
    run_suite("optimizer.valid_povm", cfg.tol(1e-8), |t| {
        for i in 0..cfg.count(20) {
            let seed = derive_seed(cfg.seed, 0x80, i as u64);
            let (src, opt_seed) = random_source(seed, 3, 3)?;
            let mut opt_cfg = OptimizerConfig {
                seed: opt_seed,
                ..OptimizerConfig::default()
            }
            .scaled_for(src.dim(), src.n_states());
            opt_cfg.max_iters = opt_cfg.max_iters.min(10);
            let out = optimize_povm(&src, &opt_cfg)?;
            t.record(povm_validity_margin(&out.povm)?);
            t.record(povm_validity_margin(&pretty_good_measurement(&src)?)?);
        }
        Ok(())
    })
}

fn suite_optimizer_holevo_cap(cfg: &SuiteConfig) -> SuiteResult {
    run_suite("optimizer.holevo_cap", cfg.tol(1e-6), |t| {
        for i in 0..cfg.count(20) {
            let seed = derive_seed(cfg.seed, 0x81, i as u64);
            let (src, opt_seed) = random_source(seed, 3, 3)?;
            let mut opt_cfg = OptimizerConfig {
                seed: opt_seed,
                ..OptimizerConfig::default()
            }
            .scaled_for(src.dim(), src.n_states());
            opt_cfg.max_iters = opt_cfg.max_iters.min(10);
            let out = optimize_povm(&src, &opt_cfg)?;
            t.record(holevo_bound(&src)? - out.info_bits);
        }
        Ok(())
    })
}

fn suite_optimizer_determinism(cfg: &SuiteConfig) -> SuiteResult {
    run_suite("optimizer.determinism", 0.0, |t| {
        for i in 0..cfg.count(3) {
            let seed = derive_seed(cfg.seed, 0x82, i as u64);
            let (src, opt_seed) = random_source(seed, 3, 3)?;
            let opt_cfg = OptimizerConfig {
                max_iters: 5,
                seed: opt_seed,
                ..OptimizerConfig::default()
            }
            .scaled_for(src.dim(), src.n_states());
            let a = optimize_povm(&src, &opt_cfg)?;
            let b = optimize_povm(&src, &opt_cfg)?;
            t.record_eq(a.info_bits - b.info_bits);
            for (x, y) in a.povm.elements().iter().zip(b.povm.elements()) {
                t.record_eq(max_abs_diff(x, y));
            }
        }
        Ok(())
    })
}

pub type SuiteFn = fn(&SuiteConfig) -> SuiteResult;

/// Every suite, in a stable order.
pub fn all_suites() -> Vec<(&'static str, SuiteFn)> {
    vec![
        ("linalg.trace_norm_two_outcome", suite_trace_norm_two_outcome),
        ("linalg.partial_trace_monotone", suite_partial_trace_monotone),
        ("linalg.pure_distance_eigensolver", suite_pure_distance),
        ("linalg.mixed_pure_dominance", suite_mixed_pure),
        ("info.holevo_dominance", suite_holevo_dominance),
        ("info.mi_prior_cap", suite_mi_prior_cap),
        ("info.vn_unitary_invariance", suite_vn_unitary_invariance),
        ("info.shannon_concavity", suite_shannon_concavity),
        ("bounds.entropy_lower_bounds", suite_gen_entropy_lower),
        ("bounds.tight_examples", suite_tight_examples),
        ("bounds.variational_vs_trace", suite_variational_vs_trace),
        ("bounds.dominance_chain", suite_dominance_chain),
        ("mub.fourier_computational_pair", suite_mub_fourier_pair),
        ("mub.prime_sets", suite_mub_prime_sets),
        ("mub.group_hadamard", suite_mub_group_hadamard),
        ("attack.unitarity", suite_attack_unitarity),
        ("attack.p0_two_route", suite_attack_p0_two_route),
        ("attack.purification_identities", suite_attack_purification),
        ("attack.thm1_chain", suite_attack_thm1_chain),
        ("attack.partial_copy_monotone", suite_partial_copy_monotone),
        ("fm.sigma_averaging", suite_fm_sigma_averaging),
        ("fm.announcement_average", suite_fm_announcement_avg),
        ("fm.q_announcement_independence", suite_fm_q_independence),
        ("fm.identity_bound_consistency", suite_fm_identity_consistency),
        ("optimizer.valid_povm", suite_optimizer_valid_povm),
        ("optimizer.holevo_cap", suite_optimizer_holevo_cap),
        ("optimizer.determinism", suite_optimizer_determinism),
    ]
}

/// Runs every suite with the given configuration.
pub fn run_all(cfg: &SuiteConfig) -> Vec<SuiteResult> {
    all_suites().into_iter().map(|(_, f)| f(cfg)).collect()
}
