//! Probe-unitary eavesdropping attacks and their verifiable structure.
//!
//! An attack attaches a probe in a fixed basis state and applies a unitary
//! to probe⊗system. Everything downstream is computed from the extracted
//! Kraus vectors `|E_{i,j}⟩`: the states the eavesdropper holds, the
//! channel Alice→Bob in the computational basis and in any mutually
//! unbiased basis, and the purification whose transformed norm ties the
//! no-error probability to the eavesdropper's information.
//!
//! Composite indices put the probe on the slow axis: a vector on
//! probe⊗system has component `m·D + j`.

use crate::info::QuantumSource;
use crate::linalg::{
    tensor_vec, unitary_deviation, CMatrix, CVector, DensityMatrix, C64, ONE, ZERO,
};
use crate::mub::{detect_group, GeneralizedHadamard};
use crate::{Error, Result, DEFAULT_TOL};
use nalgebra::DMatrix;

/// A probe-plus-system unitary attack.
#[derive(Debug, Clone)]
pub struct EveAttack {
    sys_dim: usize,
    probe_dim: usize,
    unitary: CMatrix,
    probe_init: usize,
}

impl EveAttack {
    pub fn new(
        sys_dim: usize,
        probe_dim: usize,
        unitary: CMatrix,
        probe_init: usize,
    ) -> Result<Self> {
        let total = sys_dim * probe_dim;
        if unitary.nrows() != total || unitary.ncols() != total {
            return Err(Error::DimMismatch {
                left: total,
                right: unitary.nrows(),
            });
        }
        if probe_init >= probe_dim {
            return Err(Error::OutOfRange {
                what: "probe_init",
                value: probe_init as f64,
                lo: 0.0,
                hi: (probe_dim - 1) as f64,
            });
        }
        let dev = unitary_deviation(&unitary);
        if dev > 1e-10 {
            return Err(Error::NotUnitary {
                deviation: dev,
                tol: 1e-10,
            });
        }
        Ok(Self {
            sys_dim,
            probe_dim,
            unitary,
            probe_init,
        })
    }

    /// Haar-random attack unitary on the full probe⊗system space.
    pub fn random_haar(sys_dim: usize, probe_dim: usize, seed: u64) -> Result<Self> {
        let u = crate::linalg::random_haar_unitary(sys_dim * probe_dim, seed);
        Self::new(sys_dim, probe_dim, u, 0)
    }

    pub fn sys_dim(&self) -> usize {
        self.sys_dim
    }

    pub fn probe_dim(&self) -> usize {
        self.probe_dim
    }

    pub fn unitary(&self) -> &CMatrix {
        &self.unitary
    }

    pub fn probe_init(&self) -> usize {
        self.probe_init
    }
}

/// The extracted vector table `|E_{i,j}⟩`: the (unnormalized) probe state
/// left behind when Alice sends `i` and Bob receives `j`.
#[derive(Debug, Clone)]
pub struct AttackKraus {
    sys_dim: usize,
    probe_dim: usize,
    vectors: Vec<Vec<CVector>>,
}

impl AttackKraus {
    /// Builds the table after checking the unitarity invariant
    /// `Σⱼ ⟨E_{i,j}|E_{i,j}⟩ = 1` for every `i`.
    pub fn new(sys_dim: usize, probe_dim: usize, vectors: Vec<Vec<CVector>>) -> Result<Self> {
        if vectors.len() != sys_dim {
            return Err(Error::WrongArity {
                expected: sys_dim,
                got: vectors.len(),
            });
        }
        for (i, row) in vectors.iter().enumerate() {
            if row.len() != sys_dim {
                return Err(Error::WrongArity {
                    expected: sys_dim,
                    got: row.len(),
                });
            }
            let mut norm = 0.0;
            for v in row {
                if v.len() != probe_dim {
                    return Err(Error::DimMismatch {
                        left: probe_dim,
                        right: v.len(),
                    });
                }
                norm += v.norm_squared();
            }
            if (norm - 1.0).abs() > DEFAULT_TOL {
                return Err(Error::InvariantViolation(format!(
                    "Kraus row {i} has total norm {norm}, not 1"
                )));
            }
        }
        Ok(Self {
            sys_dim,
            probe_dim,
            vectors,
        })
    }

    /// Haar-random attack, sampled directly as a random isometry from the
    /// system into probe⊗system (the distribution of a Haar unitary
    /// restricted to the probe-init block).
    pub fn random_haar(sys_dim: usize, probe_dim: usize, seed: u64) -> Result<Self> {
        let iso = crate::linalg::random_haar_isometry(probe_dim * sys_dim, sys_dim, seed);
        let mut vectors = Vec::with_capacity(sys_dim);
        for i in 0..sys_dim {
            let mut row = Vec::with_capacity(sys_dim);
            for j in 0..sys_dim {
                let mut v = CVector::zeros(probe_dim);
                for m in 0..probe_dim {
                    v[m] = iso[(m * sys_dim + j, i)];
                }
                row.push(v);
            }
            vectors.push(row);
        }
        Self::new(sys_dim, probe_dim, vectors)
    }

    pub fn sys_dim(&self) -> usize {
        self.sys_dim
    }

    pub fn probe_dim(&self) -> usize {
        self.probe_dim
    }

    pub fn vector(&self, i: usize, j: usize) -> &CVector {
        &self.vectors[i][j]
    }
}

/// Extracts `|E_{i,j}⟩ = (I ⊗ ⟨j|) U (|probe_init⟩ ⊗ |i⟩)`.
pub fn extract_kraus_vectors(attack: &EveAttack) -> Result<AttackKraus> {
    let d = attack.sys_dim;
    let de = attack.probe_dim;
    let mut vectors = Vec::with_capacity(d);
    for i in 0..d {
        let col = attack.unitary.column(attack.probe_init * d + i);
        let mut row = Vec::with_capacity(d);
        for j in 0..d {
            let mut v = CVector::zeros(de);
            for m in 0..de {
                v[m] = col[m * d + j];
            }
            row.push(v);
        }
        vectors.push(row);
    }
    AttackKraus::new(d, de, vectors)
}

/// The states the eavesdropper holds, `ρᵢ = Σⱼ |E_{i,j}⟩⟨E_{i,j}|`, with
/// uniform priors.
pub fn eve_states(kraus: &AttackKraus) -> Result<QuantumSource> {
    let de = kraus.probe_dim;
    let mut states = Vec::with_capacity(kraus.sys_dim);
    for i in 0..kraus.sys_dim {
        let mut rho = CMatrix::zeros(de, de);
        for j in 0..kraus.sys_dim {
            let v = &kraus.vectors[i][j];
            rho += v * v.adjoint();
        }
        states.push(DensityMatrix::new(rho, DEFAULT_TOL)?);
    }
    QuantumSource::uniform(states)
}

/// The Kraus table seen in the rotated bases:
/// `Ẽ_{i,j} = Σ_{i',j'} H_{i'i} H*_{j'j} E_{i',j'}`.
pub fn hadamard_transform_kraus(
    kraus: &AttackKraus,
    h: &GeneralizedHadamard,
) -> Result<AttackKraus> {
    let d = kraus.sys_dim;
    if h.dim() != d {
        return Err(Error::DimMismatch {
            left: d,
            right: h.dim(),
        });
    }
    let de = kraus.probe_dim;
    let hm = h.matrix();
    // contract over the sent index first, then the received index
    let mut half = vec![vec![CVector::zeros(de); d]; d]; // half[i][j'] = Σ_{i'} H_{i'i} E_{i',j'}
    for i in 0..d {
        for jp in 0..d {
            let mut acc = CVector::zeros(de);
            for ip in 0..d {
                acc += kraus.vectors[ip][jp].scale_c(hm[(ip, i)]);
            }
            half[i][jp] = acc;
        }
    }
    let mut vectors = vec![vec![CVector::zeros(de); d]; d];
    for i in 0..d {
        for j in 0..d {
            let mut acc = CVector::zeros(de);
            for jp in 0..d {
                acc += half[i][jp].scale_c(hm[(jp, j)].conj());
            }
            vectors[i][j] = acc;
        }
    }
    AttackKraus::new(d, de, vectors)
}

trait ScaleC {
    fn scale_c(&self, z: C64) -> CVector;
}

impl ScaleC for CVector {
    fn scale_c(&self, z: C64) -> CVector {
        self.map(|x| x * z)
    }
}

/// Transition probabilities `P(j|i)` for Bob, in the computational basis
/// (no `basis`) or with both ends rotated by a generalized Hadamard.
pub fn bob_channel(
    kraus: &AttackKraus,
    basis: Option<&GeneralizedHadamard>,
) -> Result<DMatrix<f64>> {
    let table;
    let kraus = match basis {
        None => kraus,
        Some(h) => {
            table = hadamard_transform_kraus(kraus, h)?;
            &table
        }
    };
    let d = kraus.sys_dim;
    let mut p = DMatrix::zeros(d, d);
    for i in 0..d {
        let mut row_sum = 0.0;
        for j in 0..d {
            let prob = kraus.vectors[i][j].norm_squared();
            p[(i, j)] = prob;
            row_sum += prob;
        }
        if (row_sum - 1.0).abs() > DEFAULT_TOL {
            return Err(Error::InvariantViolation(format!(
                "channel row {i} sums to {row_sum}"
            )));
        }
    }
    Ok(p)
}

/// No-error probability in the rotated basis, evaluated by the literal
/// quadruple sum
/// `P₀ = (1/D) Σ_{k,l,k',l'} ⟨E_{l,k}|E_{l',k'}⟩ Σᵢ H*_{li} H_{ki} H_{l'i} H*_{k'i}`.
///
/// This is an independent route from the channel-diagonal average and is
/// cross-checked against it in [`disturbance`].
pub fn p0_quadruple_sum(kraus: &AttackKraus, h: &GeneralizedHadamard) -> f64 {
    let d = kraus.sys_dim;
    let hm = h.matrix();
    let mut total = ZERO;
    for l in 0..d {
        for k in 0..d {
            for lp in 0..d {
                for kp in 0..d {
                    let gram = kraus.vectors[l][k].dotc(&kraus.vectors[lp][kp]);
                    let mut phases = ZERO;
                    for i in 0..d {
                        phases += hm[(l, i)].conj() * hm[(k, i)] * hm[(lp, i)] * hm[(kp, i)].conj();
                    }
                    total += gram * phases;
                }
            }
        }
    }
    total.re / d as f64
}

/// Channel matrices and disturbance figures for one attack and one
/// mutually unbiased basis.
#[derive(Debug, Clone)]
pub struct DisturbanceReport {
    pub channel: DMatrix<f64>,
    pub channel_mub: DMatrix<f64>,
    pub p0: f64,
    pub p_err_mub: f64,
    pub hadamard_id: String,
}

/// Computes the no-error probability both by the quadruple sum and by the
/// channel-diagonal average; disagreement beyond `1e-7` is an error
/// (it would signal an implementation fault, not physics).
pub fn disturbance(kraus: &AttackKraus, h: &GeneralizedHadamard) -> Result<DisturbanceReport> {
    let channel = bob_channel(kraus, None)?;
    let channel_mub = bob_channel(kraus, Some(h))?;
    let d = kraus.sys_dim as f64;
    let p0_diag = channel_mub.diagonal().sum() / d;
    let p0_quad = p0_quadruple_sum(kraus, h);
    if (p0_diag - p0_quad).abs() > 1e-7 {
        return Err(Error::RouteMismatch {
            a: p0_quad,
            b: p0_diag,
        });
    }
    Ok(DisturbanceReport {
        channel,
        channel_mub,
        p0: p0_diag,
        p_err_mub: 1.0 - p0_diag,
        hadamard_id: h.id().to_string(),
    })
}

/// The purification data from the information-vs-disturbance argument:
/// `|φᵢ⟩ = Σⱼ |E_{i,j}⟩ ⊗ |ψⁱⱼ⟩` with `ψ` built from the coefficient
/// tensor `α_{lki} = H_{li} H*_{ki} / H*_{l0}`, and the Hadamard-
/// transformed vectors `|φ̃ⱼ⟩ = Σᵢ H*_{ij} |φᵢ⟩`.
#[derive(Debug, Clone)]
pub struct PurificationBundle {
    sys_dim: usize,
    probe_dim: usize,
    /// `phi[i]` lives on probe⊗auxiliary with the auxiliary of dimension D.
    pub phi: Vec<CVector>,
    pub phi_tilde: Vec<CVector>,
    /// `alpha[l]` is the D×D matrix with entry `(k, i)` equal to `α_{lki}`.
    pub alpha: Vec<CMatrix>,
}

impl PurificationBundle {
    pub fn sys_dim(&self) -> usize {
        self.sys_dim
    }

    pub fn probe_dim(&self) -> usize {
        self.probe_dim
    }
}

/// Builds the purification and verifies its defining identities:
/// orthonormality of each `{ψˡₖ}ₖ`, `Tr₂|φᵢ⟩⟨φᵢ| = ρᵢ`, and
/// `⟨φ̃₀|φ̃₀⟩ = D·P₀`.
pub fn build_purification(
    kraus: &AttackKraus,
    h: &GeneralizedHadamard,
) -> Result<PurificationBundle> {
    let d = kraus.sys_dim;
    if h.dim() != d {
        return Err(Error::DimMismatch {
            left: d,
            right: h.dim(),
        });
    }
    let de = kraus.probe_dim;
    let hm = h.matrix();

    let mut alpha = Vec::with_capacity(d);
    for l in 0..d {
        let denom = hm[(l, 0)].conj();
        let a = CMatrix::from_fn(d, d, |k, i| hm[(l, i)] * hm[(k, i)].conj() / denom);
        // each row must be a unit vector orthogonal to the others
        let gram = a.conjugate() * a.transpose();
        let dev = crate::linalg::max_abs_diff(&gram, &CMatrix::identity(d, d));
        if dev > DEFAULT_TOL {
            return Err(Error::InvariantViolation(format!(
                "auxiliary basis for l={l} deviates from orthonormality by {dev:.3e}"
            )));
        }
        alpha.push(a);
    }

    let mut phi = Vec::with_capacity(d);
    for i in 0..d {
        let mut v = CVector::zeros(de * d);
        for j in 0..d {
            let psi = alpha[i].row(j).transpose().into_owned();
            v += tensor_vec(&kraus.vectors[i][j], &psi);
        }
        phi.push(v);
    }

    let mut phi_tilde = Vec::with_capacity(d);
    for j in 0..d {
        let mut v = CVector::zeros(de * d);
        for (i, phi_i) in phi.iter().enumerate() {
            v += phi_i.scale_c(hm[(i, j)].conj());
        }
        phi_tilde.push(v);
    }

    // Tr over the auxiliary factor must recover the eavesdropper states.
    let eve = eve_states(kraus)?;
    for (i, phi_i) in phi.iter().enumerate() {
        let mut worst = 0.0f64;
        let rho = eve.states()[i].matrix();
        for m in 0..de {
            for mp in 0..de {
                let mut acc = ZERO;
                for t in 0..d {
                    acc += phi_i[m * d + t] * phi_i[mp * d + t].conj();
                }
                worst = worst.max((acc - rho[(m, mp)]).norm());
            }
        }
        if worst > DEFAULT_TOL {
            return Err(Error::InvariantViolation(format!(
                "partial trace of |φ_{i}⟩⟨φ_{i}| deviates from ρ_{i} by {worst:.3e}"
            )));
        }
    }

    // ⟨φ̃₀|φ̃₀⟩ = D · P₀
    let channel_mub = bob_channel(kraus, Some(h))?;
    let p0 = channel_mub.diagonal().sum() / d as f64;
    let norm0 = phi_tilde[0].norm_squared();
    if (norm0 - d as f64 * p0).abs() > DEFAULT_TOL {
        return Err(Error::InvariantViolation(format!(
            "⟨φ̃₀|φ̃₀⟩ = {norm0}, expected D·P₀ = {}",
            d as f64 * p0
        )));
    }

    Ok(PurificationBundle {
        sys_dim: d,
        probe_dim: de,
        phi,
        phi_tilde,
        alpha,
    })
}

/// Error spectrum from the purification route, `P_e = ⟨φ̃ₑ|φ̃ₑ⟩/D`, valid
/// when the Hadamard respects a group law. Cross-checked against the
/// channel-derived spectrum `P_e = (1/D) Σᵢ P̃(i+e|i)`.
pub fn footnote_error_spectrum(
    bundle: &PurificationBundle,
    h: &GeneralizedHadamard,
    kraus: &AttackKraus,
) -> Result<Vec<f64>> {
    let d = bundle.sys_dim;
    if h.dim() != d || kraus.sys_dim != d {
        return Err(Error::DimMismatch {
            left: d,
            right: h.dim(),
        });
    }
    let group = detect_group(h, 1e-10).ok_or(Error::NotGroupHadamard)?;

    let spectrum: Vec<f64> = bundle
        .phi_tilde
        .iter()
        .map(|v| v.norm_squared() / d as f64)
        .collect();

    let channel_mub = bob_channel(kraus, Some(h))?;
    for (e, &p_pur) in spectrum.iter().enumerate() {
        let mut p_ch = 0.0;
        for i in 0..d {
            p_ch += channel_mub[(i, group.add(i, e, d))];
        }
        p_ch /= d as f64;
        if (p_pur - p_ch).abs() > DEFAULT_TOL {
            return Err(Error::RouteMismatch { a: p_pur, b: p_ch });
        }
    }

    let total: f64 = spectrum.iter().sum();
    if (total - 1.0).abs() > DEFAULT_TOL {
        return Err(Error::InvariantViolation(format!(
            "error spectrum sums to {total}"
        )));
    }
    Ok(spectrum)
}

/// Canonical attack families for sweeps.
#[derive(Debug, Clone)]
pub enum AttackKind {
    /// No interaction; the probe stays in its initial state.
    Identity,
    /// Copies the computational label onto the probe.
    BasisCopy,
    /// Measures in the given basis (columns of the unitary; `None` means
    /// computational) and resends the outcome state.
    InterceptResend { basis: Option<CMatrix> },
    /// Branch-controlled partial copy: strength 0 is the identity attack,
    /// strength π/2 copies the basis exactly.
    PartialCopy { theta: f64 },
}

impl AttackKind {
    pub fn name(&self) -> &'static str {
        match self {
            AttackKind::Identity => "identity",
            AttackKind::BasisCopy => "basis_copy",
            AttackKind::InterceptResend { .. } => "intercept_resend",
            AttackKind::PartialCopy { .. } => "partial_copy",
        }
    }

    pub fn theta(&self) -> f64 {
        match self {
            AttackKind::PartialCopy { theta } => *theta,
            _ => 0.0,
        }
    }
}

/// Builds the attack unitary for one of the canonical families.
pub fn builtin_attack(kind: &AttackKind, sys_dim: usize, probe_dim: usize) -> Result<EveAttack> {
    let d = sys_dim;
    let de = probe_dim;
    let total = d * de;
    match kind {
        AttackKind::Identity => EveAttack::new(d, de, CMatrix::identity(total, total), 0),
        AttackKind::BasisCopy => {
            if de < d {
                return Err(Error::InsufficientProbe { needed: d, got: de });
            }
            let columns = (0..d)
                .map(|i| {
                    let mut v = CVector::zeros(total);
                    v[i * d + i] = ONE;
                    (i, v)
                })
                .collect::<Vec<_>>();
            EveAttack::new(d, de, complete_unitary(&columns, total)?, 0)
        }
        AttackKind::PartialCopy { theta } => {
            if !(0.0..=std::f64::consts::FRAC_PI_2 + 1e-12).contains(theta) {
                return Err(Error::OutOfRange {
                    what: "theta",
                    value: *theta,
                    lo: 0.0,
                    hi: std::f64::consts::FRAC_PI_2,
                });
            }
            if de < d {
                return Err(Error::InsufficientProbe { needed: d, got: de });
            }
            let columns = (0..d)
                .map(|i| {
                    let mut v = CVector::zeros(total);
                    if i == 0 {
                        v[i] = ONE; // probe stays |0⟩ on the 0 branch
                    } else {
                        v[i] = C64::new(theta.cos(), 0.0);
                        v[i * d + i] = C64::new(theta.sin(), 0.0);
                    }
                    (i, v)
                })
                .collect::<Vec<_>>();
            EveAttack::new(d, de, complete_unitary(&columns, total)?, 0)
        }
        AttackKind::InterceptResend { basis } => {
            if de < d * d {
                return Err(Error::InsufficientProbe {
                    needed: d * d,
                    got: de,
                });
            }
            let ident = CMatrix::identity(d, d);
            let b = basis.as_ref().unwrap_or(&ident);
            if b.nrows() != d || b.ncols() != d {
                return Err(Error::DimMismatch {
                    left: d,
                    right: b.nrows(),
                });
            }
            let dev = unitary_deviation(b);
            if dev > 1e-10 {
                return Err(Error::NotUnitary {
                    deviation: dev,
                    tol: 1e-10,
                });
            }
            let columns = (0..d)
                .map(|i| {
                    let mut v = CVector::zeros(total);
                    for m in 0..d {
                        // amplitude ⟨b_m|i⟩, probe records m, system becomes b_m
                        let amp = b[(i, m)].conj();
                        for j in 0..d {
                            v[m * d + j] += amp * b[(j, m)];
                        }
                    }
                    (i, v)
                })
                .collect::<Vec<_>>();
            EveAttack::new(d, de, complete_unitary(&columns, total)?, 0)
        }
    }
}

/// Completes a set of orthonormal columns (pinned to given input indices)
/// to a full unitary, filling the remaining inputs deterministically by
/// Gram–Schmidt over the standard basis.
fn complete_unitary(specified: &[(usize, CVector)], n: usize) -> Result<CMatrix> {
    let mut u = CMatrix::zeros(n, n);
    let mut accepted: Vec<CVector> = Vec::with_capacity(n);
    let mut filled = vec![false; n];
    for (input, v) in specified {
        u.set_column(*input, v);
        filled[*input] = true;
        accepted.push(v.clone());
    }
    let mut next_candidate = 0usize;
    for input in 0..n {
        if filled[input] {
            continue;
        }
        loop {
            if next_candidate >= n {
                return Err(Error::InvariantViolation(
                    "ran out of completion candidates".into(),
                ));
            }
            let mut v = CVector::zeros(n);
            v[next_candidate] = ONE;
            next_candidate += 1;
            // two Gram-Schmidt passes for numerical stability
            for _ in 0..2 {
                for a in &accepted {
                    let coeff = a.dotc(&v);
                    v -= a.scale_c(coeff);
                }
            }
            let norm = v.norm();
            if norm > 1e-6 {
                let v = v.unscale(norm);
                u.set_column(input, &v);
                accepted.push(v);
                break;
            }
        }
    }
    let dev = unitary_deviation(&u);
    if dev > 1e-10 {
        return Err(Error::NotUnitary {
            deviation: dev,
            tol: 1e-10,
        });
    }
    Ok(u)
}

/// Convenience: extracted Kraus table of a canonical attack with the
/// default probe dimension D².
pub fn builtin_kraus(kind: &AttackKind, sys_dim: usize) -> Result<AttackKraus> {
    let probe_dim = sys_dim * sys_dim;
    extract_kraus_vectors(&builtin_attack(kind, sys_dim, probe_dim)?)
}
