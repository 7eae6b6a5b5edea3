//! Report records for bound evaluations, with a stable digest of the
//! inputs so emitted files can be audited and reproduced.

use crate::linalg::{CMatrix, CVector};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// One evaluated bound, optionally paired with the exact quantity it must
/// dominate.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundReport {
    pub bound_name: String,
    pub bound_value: f64,
    pub exact_value: Option<f64>,
    pub slack: Option<f64>,
    pub inputs_digest: String,
}

impl BoundReport {
    /// Builds a report; when an exact value is supplied the slack
    /// `bound - exact` must not be below `-1e-9`.
    pub fn new(
        bound_name: impl Into<String>,
        bound_value: f64,
        exact_value: Option<f64>,
        inputs_digest: String,
    ) -> Result<Self> {
        let slack = exact_value.map(|e| bound_value - e);
        if let Some(s) = slack {
            if s < -1e-9 {
                return Err(Error::InvariantViolation(format!(
                    "bound {} undercuts the exact value by {:.3e}",
                    bound_value, -s
                )));
            }
        }
        Ok(Self {
            bound_name: bound_name.into(),
            bound_value,
            exact_value,
            slack,
            inputs_digest,
        })
    }
}

/// Incremental SHA-256 digest over a canonical byte encoding of numeric
/// inputs. The encoding is little-endian IEEE-754 bit patterns, so equal
/// inputs always hash equally.
pub struct InputsDigest {
    hasher: Sha256,
}

impl Default for InputsDigest {
    fn default() -> Self {
        Self::new()
    }
}

impl InputsDigest {
    pub fn new() -> Self {
        Self {
            hasher: Sha256::new(),
        }
    }

    pub fn push_bytes(&mut self, bytes: &[u8]) -> &mut Self {
        self.hasher.update(bytes);
        self
    }

    pub fn push_str(&mut self, s: &str) -> &mut Self {
        self.hasher.update(s.as_bytes());
        self.hasher.update([0u8]);
        self
    }

    pub fn push_u64(&mut self, v: u64) -> &mut Self {
        self.hasher.update(v.to_le_bytes());
        self
    }

    pub fn push_f64(&mut self, v: f64) -> &mut Self {
        self.hasher.update(v.to_bits().to_le_bytes());
        self
    }

    pub fn push_f64s(&mut self, vs: &[f64]) -> &mut Self {
        for v in vs {
            self.push_f64(*v);
        }
        self
    }

    pub fn push_matrix(&mut self, m: &CMatrix) -> &mut Self {
        self.push_u64(m.nrows() as u64);
        self.push_u64(m.ncols() as u64);
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                self.push_f64(m[(i, j)].re);
                self.push_f64(m[(i, j)].im);
            }
        }
        self
    }

    pub fn push_vector(&mut self, v: &CVector) -> &mut Self {
        self.push_u64(v.len() as u64);
        for z in v.iter() {
            self.push_f64(z.re);
            self.push_f64(z.im);
        }
        self
    }

    /// Hex digest, truncated to 16 characters for compact report columns.
    pub fn finish(self) -> String {
        let full = hex_encode(&self.hasher.finalize());
        full[..16].to_string()
    }
}

/// Full SHA-256 hex digest of a byte slice; used for file digests.
pub fn sha256_hex(bytes: &[u8]) -> String {
    let mut h = Sha256::new();
    h.update(bytes);
    hex_encode(&h.finalize())
}

fn hex_encode(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_is_stable_and_input_sensitive() {
        let mut a = InputsDigest::new();
        a.push_u64(3).push_f64(0.5).push_str("fourier-3");
        let mut b = InputsDigest::new();
        b.push_u64(3).push_f64(0.5).push_str("fourier-3");
        assert_eq!(a.finish(), b.finish());

        let mut c = InputsDigest::new();
        c.push_u64(3).push_f64(0.5000001).push_str("fourier-3");
        let mut d = InputsDigest::new();
        d.push_u64(3).push_f64(0.5).push_str("fourier-3");
        assert_ne!(c.finish(), d.finish());
    }

    #[test]
    fn bound_report_enforces_slack() {
        let ok = BoundReport::new("b", 1.0, Some(0.5), "x".into()).unwrap();
        assert_eq!(ok.slack, Some(0.5));
        assert!(BoundReport::new("b", 0.4, Some(0.5), "x".into()).is_err());
        // Slightly negative slack within tolerance is accepted.
        assert!(BoundReport::new("b", 0.5 - 1e-10, Some(0.5), "x".into()).is_ok());
    }
}
