//! The encrypted-message scenario.
//!
//! Alice sends the basis vector `|k⟩` with `k` uniform, then publicly
//! announces `a = m + k` for a message `m` (group addition). Given the
//! announcement, the eavesdropper's state consistent with a function value
//! `f(m) = i` is the mixture `σᵢᵃ` of her states over the matching keys.
//! This module computes those conditional states, the exact conditional
//! information `I(f(M);E|A)` for given measurements, and the bound
//! `H(f(K)) · 4√P̃ₑ`.

use crate::attack::{disturbance, eve_states, AttackKraus};
use crate::bounds::fm_bound;
use crate::info::{entropy_bits, mutual_info_classical, QuantumSource};
use crate::linalg::{CMatrix, DensityMatrix, Povm};
use crate::mub::GeneralizedHadamard;
use crate::{Error, Result, DEFAULT_TOL};
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

/// A function on the key/message alphabet `{0, …, D-1}`, given by its
/// value table. Only the induced partition of the domain matters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionSpec {
    values: Vec<i64>,
}

impl FunctionSpec {
    pub fn from_table(values: Vec<i64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::WrongArity {
                expected: 1,
                got: 0,
            });
        }
        Ok(Self { values })
    }

    pub fn identity(domain_size: usize) -> Self {
        Self {
            values: (0..domain_size as i64).collect(),
        }
    }

    pub fn constant(domain_size: usize, label: i64) -> Self {
        Self {
            values: vec![label; domain_size],
        }
    }

    /// Indicator of a single point: 1 at `point`, 0 elsewhere.
    pub fn indicator(domain_size: usize, point: usize) -> Self {
        let mut values = vec![0i64; domain_size];
        values[point] = 1;
        Self { values }
    }

    pub fn domain_size(&self) -> usize {
        self.values.len()
    }

    pub fn value(&self, k: usize) -> i64 {
        self.values[k]
    }

    /// Distinct values in ascending order.
    pub fn range(&self) -> Vec<i64> {
        let mut r = self.values.clone();
        r.sort_unstable();
        r.dedup();
        r
    }
}

/// The group operation used for announcements `a = m + k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GroupLaw {
    /// Addition modulo D.
    Cyclic { order: usize },
    /// Bitwise XOR on `{0, …, 2^n - 1}`.
    Xor { order: usize },
}

impl GroupLaw {
    pub fn cyclic(order: usize) -> Self {
        GroupLaw::Cyclic { order }
    }

    pub fn xor_for_dim(order: usize) -> Result<Self> {
        if !order.is_power_of_two() {
            return Err(Error::OutOfRange {
                what: "xor group order",
                value: order as f64,
                lo: 2.0,
                hi: f64::INFINITY,
            });
        }
        Ok(GroupLaw::Xor { order })
    }

    pub fn order(&self) -> usize {
        match self {
            GroupLaw::Cyclic { order } | GroupLaw::Xor { order } => *order,
        }
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        match self {
            GroupLaw::Cyclic { order } => (a + b) % order,
            GroupLaw::Xor { .. } => a ^ b,
        }
    }

    pub fn sub(&self, a: usize, b: usize) -> usize {
        match self {
            GroupLaw::Cyclic { order } => (a + order - b) % order,
            GroupLaw::Xor { .. } => a ^ b,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            GroupLaw::Cyclic { .. } => "cyclic",
            GroupLaw::Xor { .. } => "xor",
        }
    }
}

/// Entropy `H(f(K))` in bits for a uniformly random input: the Shannon
/// entropy of the value histogram.
pub fn function_entropy(f: &FunctionSpec) -> f64 {
    let d = f.domain_size() as f64;
    let range = f.range();
    let probs: Vec<f64> = range
        .iter()
        .map(|&v| f.values.iter().filter(|&&x| x == v).count() as f64 / d)
        .collect();
    entropy_bits(&probs)
}

/// The information profile of the single-point indicator function on a
/// uniform D-symbol message: `(H(M), H(f(M)), I(f(M);M))`, with
/// `H(f(M)) = (1/d)·log₂(d) - (1-1/d)·log₂(1-1/d)` and `I = H(f(M))`.
pub fn indicator_info_profile(d: usize) -> Result<(f64, f64, f64)> {
    if d < 2 {
        return Err(Error::OutOfRange {
            what: "d",
            value: d as f64,
            lo: 2.0,
            hi: f64::INFINITY,
        });
    }
    let df = d as f64;
    let h_m = df.log2();
    let h_fm = (1.0 / df) * df.log2() - (1.0 - 1.0 / df) * (1.0 - 1.0 / df).log2();
    Ok((h_m, h_fm, h_fm))
}

/// One conditional state: the function value, its probability `qᵢ`, and
/// the normalized mixture `σᵢᵃ` of the eavesdropper states over the keys
/// consistent with that value at announcement `a`.
#[derive(Debug, Clone)]
pub struct SigmaState {
    pub value: i64,
    pub weight: f64,
    pub state: DensityMatrix,
}

/// Conditional states `σᵢᵃ = (1/qᵢ) Σ_{k: f(a-k)=i} pₖ ρₖ` for a uniform
/// source. Only values with `qᵢ > 0` appear; entries are sorted by value.
pub fn sigma_states(
    eve: &QuantumSource,
    f: &FunctionSpec,
    a: usize,
    g: &GroupLaw,
) -> Result<Vec<SigmaState>> {
    let d = eve.n_states();
    if f.domain_size() != d || g.order() != d {
        return Err(Error::DimMismatch {
            left: d,
            right: f.domain_size(),
        });
    }
    if a >= d {
        return Err(Error::OutOfRange {
            what: "a",
            value: a as f64,
            lo: 0.0,
            hi: (d - 1) as f64,
        });
    }
    if !eve.priors().is_uniform(1e-12) {
        return Err(Error::InvalidDistribution {
            reason: "the announcement scenario requires uniform priors".into(),
        });
    }
    let dim = eve.dim();
    let mut out = Vec::new();
    for value in f.range() {
        let keys: Vec<usize> = (0..d).filter(|&k| f.value(g.sub(a, k)) == value).collect();
        if keys.is_empty() {
            continue;
        }
        let q = keys.len() as f64 / d as f64;
        let mut acc = CMatrix::zeros(dim, dim);
        for &k in &keys {
            acc += eve.states()[k].matrix();
        }
        let state = DensityMatrix::new(acc.unscale(keys.len() as f64), DEFAULT_TOL)?;
        out.push(SigmaState {
            value,
            weight: q,
            state,
        });
    }
    Ok(out)
}

/// Exact conditional information `I(f(M);E|A) = Σₐ pₐ I(f(M);E|A=a)` for
/// one measurement; returns the average and the per-announcement values.
pub fn fm_mutual_info(
    eve: &QuantumSource,
    povm: &Povm,
    f: &FunctionSpec,
    g: &GroupLaw,
) -> Result<(f64, Vec<f64>)> {
    if povm.dim() != eve.dim() {
        return Err(Error::DimMismatch {
            left: eve.dim(),
            right: povm.dim(),
        });
    }
    let d = eve.n_states();
    let mut per_a = Vec::with_capacity(d);
    for a in 0..d {
        let sigmas = sigma_states(eve, f, a, g)?;
        per_a.push(announcement_info(&sigmas, povm)?);
    }
    let avg = per_a.iter().sum::<f64>() / d as f64;
    Ok((avg, per_a))
}

/// Extended mode: a different measurement at each announcement.
pub fn fm_mutual_info_varying(
    eve: &QuantumSource,
    povms: &[Povm],
    f: &FunctionSpec,
    g: &GroupLaw,
) -> Result<(f64, Vec<f64>)> {
    let d = eve.n_states();
    if povms.len() != d {
        return Err(Error::WrongArity {
            expected: d,
            got: povms.len(),
        });
    }
    let mut per_a = Vec::with_capacity(d);
    for (a, povm) in povms.iter().enumerate() {
        let sigmas = sigma_states(eve, f, a, g)?;
        per_a.push(announcement_info(&sigmas, povm)?);
    }
    let avg = per_a.iter().sum::<f64>() / d as f64;
    Ok((avg, per_a))
}

fn announcement_info(sigmas: &[SigmaState], povm: &Povm) -> Result<f64> {
    let n_e = povm.n_outcomes();
    let mut joint = DMatrix::zeros(sigmas.len(), n_e);
    for (row, sig) in sigmas.iter().enumerate() {
        for (e, effect) in povm.elements().iter().enumerate() {
            let mut tr = 0.0;
            for x in 0..effect.nrows() {
                for y in 0..effect.ncols() {
                    tr += (effect[(x, y)] * sig.state.matrix()[(y, x)]).re;
                }
            }
            joint[(row, e)] = sig.weight * tr.max(0.0);
        }
    }
    mutual_info_classical(&joint, 1e-6)
}

/// Report for one function-of-message evaluation.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FmReport {
    pub h_fk: f64,
    pub exact_cond_info: f64,
    pub bound: f64,
    pub p_err_mub: f64,
    pub per_announcement_info: Vec<f64>,
}

/// Evaluates the function-of-message bound for one attack: the exact
/// conditional information is the best over the supplied measurements and
/// must stay below `H(f(K)) · 4√P̃ₑ`.
pub fn check_theorem2(
    kraus: &AttackKraus,
    h: &GeneralizedHadamard,
    f: &FunctionSpec,
    g: &GroupLaw,
    povms: &[Povm],
) -> Result<FmReport> {
    if povms.is_empty() {
        return Err(Error::WrongArity {
            expected: 1,
            got: 0,
        });
    }
    let eve = eve_states(kraus)?;
    let p_err_mub = disturbance(kraus, h)?.p_err_mub;
    let h_fk = function_entropy(f);
    let bound = fm_bound(h_fk, p_err_mub)?;

    let mut exact = f64::NEG_INFINITY;
    let mut best_per_a = Vec::new();
    for povm in povms {
        let (avg, per_a) = fm_mutual_info(&eve, povm, f, g)?;
        if avg > exact {
            exact = avg;
            best_per_a = per_a;
        }
    }
    if exact > bound + 1e-9 {
        return Err(Error::InvariantViolation(format!(
            "conditional information {exact} exceeds the bound {bound}"
        )));
    }
    Ok(FmReport {
        h_fk,
        exact_cond_info: exact,
        bound,
        p_err_mub,
        per_announcement_info: best_per_a,
    })
}
