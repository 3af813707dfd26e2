//! Channel parameters and interference-regime classification.
//!
//! Users are indexed `0..K` internally and printed `1..=K`. Transmitter `i`
//! reaches its own receiver `i` and interferes only at receiver `i-1` (mod K).

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Index of the user after `i` on the cycle.
pub fn next(i: usize, k: usize) -> usize {
    (i + 1) % k
}

/// Index of the user before `i` on the cycle.
pub fn prev(i: usize, k: usize) -> usize {
    (i + k - 1) % k
}

/// Physical description: power gains, transmit powers and noise variance, all linear.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChannelInstance {
    /// `|h_{i,i}|^2`
    pub direct_gains: Vec<f64>,
    /// `|h_{i,i-1}|^2`, the gain from transmitter `i` to receiver `i-1`.
    pub cross_gains: Vec<f64>,
    pub powers: Vec<f64>,
    pub noise: f64,
}

impl ChannelInstance {
    pub fn users(&self) -> usize {
        self.powers.len()
    }

    pub fn validate(&self) -> Result<()> {
        let k = self.users();
        if k < 2 {
            return Err(Error::Validation(format!("need at least 2 users, got {k}")));
        }
        if self.direct_gains.len() != k || self.cross_gains.len() != k {
            return Err(Error::Validation(format!(
                "gain vectors must have {k} entries (direct {}, cross {})",
                self.direct_gains.len(),
                self.cross_gains.len()
            )));
        }
        if !(self.noise.is_finite() && self.noise > 0.0) {
            return Err(Error::Validation(format!(
                "noise variance must be positive, got {}",
                self.noise
            )));
        }
        for (name, v) in [
            ("direct gain", &self.direct_gains),
            ("cross gain", &self.cross_gains),
            ("power", &self.powers),
        ] {
            check_nonnegative(name, v)?;
        }
        Ok(())
    }
}

fn check_nonnegative(name: &str, values: &[f64]) -> Result<()> {
    for (i, &v) in values.iter().enumerate() {
        if !(v.is_finite() && v >= 0.0) {
            return Err(Error::Validation(format!(
                "{name} of user {} must be finite and >= 0, got {v}",
                i + 1
            )));
        }
    }
    Ok(())
}

/// Per-user SNR and INR. `inr[i]` is caused by transmitter `i` at receiver `i-1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChannelRatios {
    snr: Vec<f64>,
    inr: Vec<f64>,
}

impl ChannelRatios {
    pub fn new(snr: Vec<f64>, inr: Vec<f64>) -> Result<Self> {
        let k = snr.len();
        if k < 2 {
            return Err(Error::Validation(format!("need at least 2 users, got {k}")));
        }
        if inr.len() != k {
            return Err(Error::Validation(format!(
                "snr has {k} entries but inr has {}",
                inr.len()
            )));
        }
        check_nonnegative("SNR", &snr)?;
        check_nonnegative("INR", &inr)?;
        Ok(Self { snr, inr })
    }

    pub fn symmetric(k: usize, snr: f64, inr: f64) -> Result<Self> {
        Self::new(vec![snr; k], vec![inr; k])
    }

    pub fn users(&self) -> usize {
        self.snr.len()
    }

    pub fn snr(&self) -> &[f64] {
        &self.snr
    }

    pub fn inr(&self) -> &[f64] {
        &self.inr
    }

    /// Converts dB values to linear ratios.
    pub fn from_db(snr_db: &[f64], inr_db: &[f64]) -> Result<Self> {
        let lin = |v: &[f64]| v.iter().map(|x| db_to_linear(*x)).collect();
        Self::new(lin(snr_db), lin(inr_db))
    }

    /// First user (0-based) with `INR < SNR`, if any.
    pub fn first_weak_user(&self) -> Option<usize> {
        (0..self.users()).find(|&i| self.inr[i] < self.snr[i])
    }
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn derive_ratios(ch: &ChannelInstance) -> Result<ChannelRatios> {
    ch.validate()?;
    let k = ch.users();
    let snr = (0..k)
        .map(|i| ch.direct_gains[i] * ch.powers[i] / ch.noise)
        .collect();
    let inr = (0..k)
        .map(|i| ch.cross_gains[i] * ch.powers[i] / ch.noise)
        .collect();
    ChannelRatios::new(snr, inr)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Weak,
    Strong,
    VeryStrong,
    Mixed,
}

impl Regime {
    /// True for both strong labels.
    pub fn is_strong(self) -> bool {
        matches!(self, Regime::Strong | Regime::VeryStrong)
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::Weak => "weak",
            Regime::Strong => "strong",
            Regime::VeryStrong => "very strong",
            Regime::Mixed => "mixed",
        })
    }
}

/// Channels with `INR_i = SNR_i` for every user satisfy both orderings and are
/// reported as strong.
pub fn classify_regime(r: &ChannelRatios) -> Regime {
    let k = r.users();
    let (snr, inr) = (r.snr(), r.inr());
    let strong = (0..k).all(|i| inr[i] >= snr[i]);
    if strong {
        let very = (0..k).all(|i| inr[i] >= (1.0 + snr[prev(i, k)]) * snr[i]);
        return if very { Regime::VeryStrong } else { Regime::Strong };
    }
    if (0..k).all(|i| inr[i] <= snr[i]) {
        Regime::Weak
    } else {
        Regime::Mixed
    }
}
