use crate::error::{Error, Result};

/// Working precision of the extended-precision oracle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PrecisionPolicy {
    working_bits: usize,
    target_rel_err: f64,
}

impl PrecisionPolicy {
    pub const DEFAULT_BITS: usize = 256;
    pub const MIN_BITS: usize = 64;
    /// Escalation never goes beyond this.
    pub const CAP_BITS: usize = 16384;

    pub fn new(working_bits: usize, target_rel_err: f64) -> Result<Self> {
        if working_bits < Self::MIN_BITS || working_bits > Self::CAP_BITS {
            return Err(Error::InvalidParameter(format!(
                "working_bits must lie in [{}, {}], got {working_bits}",
                Self::MIN_BITS,
                Self::CAP_BITS
            )));
        }
        if !(target_rel_err > 0.0 && target_rel_err.is_finite()) {
            return Err(Error::InvalidParameter(format!("target_rel_err must be positive, got {target_rel_err}")));
        }
        Ok(Self { working_bits, target_rel_err })
    }

    pub fn working_bits(&self) -> usize {
        self.working_bits
    }

    pub fn target_rel_err(&self) -> f64 {
        self.target_rel_err
    }

    /// Same target at a different starting precision.
    pub fn with_bits(&self, bits: usize) -> Result<Self> {
        Self::new(bits, self.target_rel_err)
    }

    pub fn with_target(&self, target_rel_err: f64) -> Result<Self> {
        Self::new(self.working_bits, target_rel_err)
    }

    /// Runs `eval` at doubling precisions until two consecutive levels agree.
    ///
    /// Returns the higher-precision result and the bits it was computed at.
    pub fn escalate<R>(
        &self,
        mut eval: impl FnMut(usize) -> R,
        rel_diff: impl Fn(&R, &R) -> f64,
    ) -> Result<(R, usize)> {
        let mut bits = self.working_bits;
        let mut prev = eval(bits);
        loop {
            let next_bits = bits * 2;
            if next_bits > Self::CAP_BITS {
                return Err(Error::PrecisionExhausted { bits });
            }
            let next = eval(next_bits);
            if rel_diff(&prev, &next) <= self.target_rel_err {
                return Ok((next, next_bits));
            }
            prev = next;
            bits = next_bits;
        }
    }
}

impl Default for PrecisionPolicy {
    fn default() -> Self {
        Self { working_bits: Self::DEFAULT_BITS, target_rel_err: 1e-40 }
    }
}
