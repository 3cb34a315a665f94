//! KMS transition rates.

use alloc::collections::BTreeMap;
use alloc::format;

use crate::error::{Error, Result};
use crate::model::{energy_to_f64, Energy};

#[derive(Clone, Debug, PartialEq)]
pub enum BathKind {
    /// `min(1, e^{βω})`.
    Metropolis,
    /// `1/(1 + e^{−βω})`.
    Glauber,
    /// Rates looked up by exact frequency.
    Table(BTreeMap<Energy, f64>),
}

impl BathKind {
    pub fn name(&self) -> &'static str {
        match self {
            BathKind::Metropolis => "metropolis",
            BathKind::Glauber => "glauber",
            BathKind::Table(_) => "table",
        }
    }
}

/// Rate function `h(ω)` at inverse temperature `beta`, shared by every coupling operator.
#[derive(Clone, Debug, PartialEq)]
pub struct Bath {
    pub kind: BathKind,
    pub beta: f64,
}

impl Bath {
    pub fn new(kind: BathKind, beta: f64) -> Result<Self> {
        if !(beta >= 0.0) || !beta.is_finite() {
            return Err(Error::InvalidArgument(format!("beta must be finite and >= 0, got {beta}")));
        }
        if let BathKind::Table(t) = &kind {
            if let Some(&r) = t.values().find(|&&r| !(r >= 0.0)) {
                return Err(Error::NegativeRate(r));
            }
        }
        Ok(Self { kind, beta })
    }

    pub fn metropolis(beta: f64) -> Result<Self> {
        Self::new(BathKind::Metropolis, beta)
    }

    pub fn glauber(beta: f64) -> Result<Self> {
        Self::new(BathKind::Glauber, beta)
    }

    pub fn rate(&self, omega: &Energy) -> Result<f64> {
        match &self.kind {
            BathKind::Table(t) => {
                let r = *t.get(omega).ok_or_else(|| Error::TableMiss(format!("{omega}")))?;
                if r < 0.0 {
                    return Err(Error::NegativeRate(r));
                }
                Ok(r)
            }
            _ => Ok(self.rate_f64(energy_to_f64(omega))),
        }
    }

    /// Closed form for the builtin kinds; tables are not supported here.
    pub fn rate_f64(&self, omega: f64) -> f64 {
        let x = self.beta * omega;
        match self.kind {
            BathKind::Metropolis => {
                if x >= 0.0 {
                    1.0
                } else {
                    libm::exp(x)
                }
            }
            BathKind::Glauber => {
                if x >= 0.0 {
                    1.0 / (1.0 + libm::exp(-x))
                } else {
                    let e = libm::exp(x);
                    e / (1.0 + e)
                }
            }
            BathKind::Table(_) => panic!("table baths need exact frequencies"),
        }
    }

    /// `h(0)`.
    pub fn rate_at_zero(&self) -> Result<f64> {
        self.rate(&Energy::from_integer(0))
    }

    /// Largest relative KMS defect `|h(−ω) − e^{−βω} h(ω)| / max(h)` over the given frequencies.
    pub fn kms_defect<'a>(&self, omegas: impl IntoIterator<Item = &'a Energy>) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for w in omegas {
            let a = self.rate(&-*w)?;
            let b = self.rate(w)?;
            let target = libm::exp(-self.beta * energy_to_f64(w)) * b;
            worst = worst.max((a - target).abs() / a.max(b).max(f64::MIN_POSITIVE));
        }
        Ok(worst)
    }
}
