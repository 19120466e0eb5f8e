//! Network parameters, power splits and the elementary rate function.
//!
//! All powers are noise-normalized: every receiver sees unit-power noise, so
//! a transmit power is also a signal-to-noise ratio. Rates are in bits per
//! channel use.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// `log2(1 + x)`, for arguments already known to be non-negative.
#[inline]
pub(crate) fn c2(x: f64) -> f64 {
    (1.0 + x).log2()
}

/// Capacity of a unit-noise Gaussian channel at the given SINR.
pub fn capacity(x: f64) -> Result<f64> {
    if !x.is_finite() || x < 0.0 {
        return Err(domain(format!(
            "capacity needs a finite SINR >= 0, got {x}"
        )));
    }
    Ok(c2(x))
}

pub fn db_to_linear(x_db: f64) -> f64 {
    10f64.powf(x_db / 10.0)
}

pub fn linear_to_db(x: f64) -> Result<f64> {
    if !x.is_finite() || x <= 0.0 {
        return Err(domain(format!("cannot express {x} in decibels")));
    }
    Ok(10.0 * x.log10())
}

/// Relay duplexing mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Duplex {
    #[default]
    Full,
    /// Terminals and relays alternate blocks, so every rate halves. With
    /// `power_boost` both powers are doubled first, as permitted under an
    /// average power constraint.
    Half { power_boost: bool },
}

/// A symmetric linear two-hop network.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NetworkParams {
    /// Inter-cell power gain of the first hop (terminal to neighbouring relay).
    pub alpha2: f64,
    /// Intra-cell power gain of the first hop.
    pub beta2: f64,
    /// Intra-cell power gain of the second hop.
    pub gamma2: f64,
    /// Inter-cell power gain of the second hop (relay to neighbouring base station).
    pub eta2: f64,
    /// Per-terminal transmit power.
    pub p1: f64,
    /// Per-relay transmit power.
    pub p2: f64,
    #[serde(default)]
    pub duplex: Duplex,
}

impl NetworkParams {
    /// Full-duplex parameters, validated.
    pub fn new(alpha2: f64, beta2: f64, gamma2: f64, eta2: f64, p1: f64, p2: f64) -> Result<Self> {
        let params = Self {
            alpha2,
            beta2,
            gamma2,
            eta2,
            p1,
            p2,
            duplex: Duplex::Full,
        };
        params.validate()?;
        Ok(params)
    }

    /// Parameters with matched hops: `gamma2 = beta2`, `eta2 = alpha2`.
    pub fn symmetric(alpha2: f64, beta2: f64, p1: f64, p2: f64) -> Result<Self> {
        Self::new(alpha2, beta2, beta2, alpha2, p1, p2)
    }

    pub fn with_duplex(mut self, duplex: Duplex) -> Self {
        self.duplex = duplex;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let gains = [
            ("alpha2", self.alpha2),
            ("beta2", self.beta2),
            ("gamma2", self.gamma2),
            ("eta2", self.eta2),
        ];
        for (name, g) in gains {
            if !g.is_finite() || g < 0.0 {
                return Err(domain(format!("{name} must be finite and >= 0, got {g}")));
            }
        }
        for (name, p) in [("p1", self.p1), ("p2", self.p2)] {
            if !p.is_finite() || p <= 0.0 {
                return Err(domain(format!("{name} must be finite and > 0, got {p}")));
            }
        }
        Ok(())
    }

    /// Whether each hop's cross gain is at most its direct gain. The reduced
    /// four-constraint hop regions are exact only in this regime; elsewhere
    /// computations still run but the regions are outer bounds.
    pub fn cross_gains_dominated(&self) -> bool {
        self.alpha2 <= self.beta2 && self.eta2 <= self.gamma2
    }

    pub fn hop(&self, hop: Hop) -> HopChannel {
        match hop {
            Hop::First => HopChannel {
                direct: self.beta2,
                cross: self.alpha2,
                power: self.p1,
            },
            Hop::Second => HopChannel {
                direct: self.gamma2,
                cross: self.eta2,
                power: self.p2,
            },
        }
    }

    /// Full-duplex parameters whose rates, multiplied by the returned
    /// factor, give this network's rates.
    pub fn full_duplex_equivalent(&self) -> (NetworkParams, f64) {
        let mut eff = *self;
        eff.duplex = Duplex::Full;
        match self.duplex {
            Duplex::Full => (eff, 1.0),
            Duplex::Half { power_boost } => {
                if power_boost {
                    eff.p1 *= 2.0;
                    eff.p2 *= 2.0;
                }
                (eff, 0.5)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Hop {
    First,
    Second,
}

/// One hop seen as a symmetric interference channel: every receiver hears
/// its own transmitter through `direct` and its two neighbours through
/// `cross`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HopChannel {
    pub direct: f64,
    pub cross: f64,
    pub power: f64,
}

/// Fraction of a hop's power placed on the private codebook.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HopSplit(f64);

impl HopSplit {
    pub const ALL_PRIVATE: HopSplit = HopSplit(1.0);
    pub const ALL_COMMON: HopSplit = HopSplit(0.0);

    pub fn new(f_private: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&f_private) {
            return Err(domain(format!(
                "private fraction must lie in [0, 1], got {f_private}"
            )));
        }
        Ok(Self(f_private))
    }

    pub fn f_private(self) -> f64 {
        self.0
    }

    /// `(private, common)` powers; they sum to `total` with the common part
    /// taking the remainder so `f = 1` leaves exactly zero common power.
    pub fn powers(self, total: f64) -> (f64, f64) {
        let private = self.0 * total;
        (private, total - private)
    }
}

/// Private and common rates of one user.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct RatePair {
    pub r_private: f64,
    pub r_common: f64,
}

impl RatePair {
    pub fn new(r_private: f64, r_common: f64) -> Result<Self> {
        for r in [r_private, r_common] {
            if !r.is_finite() || r < 0.0 {
                return Err(domain(format!("rates must be finite and >= 0, got {r}")));
            }
        }
        Ok(Self {
            r_private,
            r_common,
        })
    }

    pub fn sum(&self) -> f64 {
        self.r_private + self.r_common
    }

    pub(crate) fn scaled(self, factor: f64) -> Self {
        Self {
            r_private: self.r_private * factor,
            r_common: self.r_common * factor,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn capacity_trivial_points() {
        assert_eq!(capacity(0.0).unwrap(), 0.0);
        assert_eq!(capacity(1.0).unwrap(), 1.0);
        assert_eq!(capacity(3.0).unwrap(), 2.0);
    }

    #[test]
    fn capacity_rejects_bad_input() {
        assert!(capacity(-1e-3).is_err());
        assert!(capacity(f64::NAN).is_err());
        assert!(capacity(f64::INFINITY).is_err());
    }

    #[test]
    fn decibels() {
        assert_eq!(db_to_linear(0.0), 1.0);
        assert_eq!(db_to_linear(10.0), 10.0);
        assert!((db_to_linear(3.0) - 1.9953).abs() < 5e-5);
        assert!(linear_to_db(0.0).is_err());
    }

    #[test]
    fn split_powers_sum_exactly() {
        for f in [0.0, 0.1, 0.3, 0.5, 0.77, 1.0] {
            let (p, c) = HopSplit::new(f).unwrap().powers(1.9953);
            assert_eq!(p + c, 1.9953);
        }
        assert_eq!(HopSplit::ALL_PRIVATE.powers(3.0), (3.0, 0.0));
        assert!(HopSplit::new(1.01).is_err());
        assert!(HopSplit::new(-0.01).is_err());
    }

    #[test]
    fn params_validation() {
        assert!(NetworkParams::new(0.1, 1.0, 1.0, 0.1, 1.0, 1.0).is_ok());
        assert!(NetworkParams::new(-0.1, 1.0, 1.0, 0.1, 1.0, 1.0).is_err());
        assert!(NetworkParams::new(0.1, 1.0, 1.0, 0.1, 0.0, 1.0).is_err());
        assert!(NetworkParams::new(0.1, 1.0, 1.0, f64::NAN, 1.0, 1.0).is_err());
        let p = NetworkParams::new(1.5, 1.0, 1.0, 0.1, 1.0, 1.0).unwrap();
        assert!(!p.cross_gains_dominated());
    }

    #[test]
    fn half_duplex_equivalent() {
        let p = NetworkParams::new(0.1, 1.0, 1.0, 0.1, 2.0, 1.0).unwrap();
        let (eff, k) = p
            .with_duplex(Duplex::Half { power_boost: true })
            .full_duplex_equivalent();
        assert_eq!((eff.p1, eff.p2, k), (4.0, 2.0, 0.5));
        assert_eq!(eff.duplex, Duplex::Full);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn capacity_strictly_increasing(x in 0.0..1e6f64, d in 1e-6..1e3f64) {
                prop_assert!(capacity(x).unwrap() < capacity(x + d).unwrap());
            }

            #[test]
            fn capacity_concave(x in 0.0..1e4f64, y in 0.0..1e4f64) {
                let mid = capacity(0.5 * (x + y)).unwrap();
                let chord = 0.5 * (capacity(x).unwrap() + capacity(y).unwrap());
                prop_assert!(mid >= chord - 1e-12);
            }

            #[test]
            fn db_round_trip(x in 1e-6..1e6f64) {
                let back = db_to_linear(linear_to_db(x).unwrap());
                prop_assert!(((back - x) / x).abs() <= 1e-12);
            }
        }
    }
}
