//! Outlet half-width profiles g and their regularity data.

use crate::scalar::{sc, Scalar};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// Analytic family of outlet profiles.
#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ProfileKind {
    /// g(t) = scale
    Constant { scale: f64 },
    /// g(t) = scale * (1 + t)^alpha
    Power { alpha: f64, scale: f64 },
}

/// The outlet half-width g with its Lipschitz constant and derivative bounds.
/// The bounds are estimated by sampling and asserted, not assumed.
#[derive(Clone, Debug)]
pub struct OutletProfile<S> {
    pub kind: ProfileKind,
    pub r_star: S,
    /// Numerically estimated Lipschitz constant sup |g'|.
    pub lipschitz: S,
    /// Effective constant used in the ladder step rule: max(L, 1/2).
    pub l_eff: S,
    /// Sampled sup of |g'| and |g g''| (finite by assertion).
    pub sup_dg: S,
    pub sup_g_ddg: S,
}

impl<S: Scalar> OutletProfile<S> {
    /// Build a profile and estimate its constants on [r_star, r_star + span].
    pub fn new(kind: ProfileKind, r_star: S) -> Result<Self> {
        let span = sc::<S>(400.0);
        let n = 4000;
        let mut sup_dg = S::zero();
        let mut sup_g_ddg = S::zero();
        for i in 0..=n {
            let t = r_star + span * sc::<S>(i as f64 / n as f64);
            let g = Self::g_of(kind, t);
            if g <= S::zero() || !g.is_finite() {
                return Err(Error::Hypothesis(format!(
                    "profile invalid: g({}) = {} is not positive",
                    t.to_f64_lossy(),
                    g.to_f64_lossy()
                )));
            }
            let dg = Self::dg_of(kind, t).abs();
            let gddg = (g * Self::ddg_of(kind, t)).abs();
            if !dg.is_finite() || !gddg.is_finite() {
                return Err(Error::Hypothesis(
                    "profile invalid: derivative bounds not finite".into(),
                ));
            }
            sup_dg = sup_dg.max(dg);
            sup_g_ddg = sup_g_ddg.max(gddg);
        }
        let lipschitz = sup_dg;
        let l_eff = lipschitz.max(sc::<S>(0.5));
        Ok(Self {
            kind,
            r_star,
            lipschitz,
            l_eff,
            sup_dg,
            sup_g_ddg,
        })
    }

    fn g_of(kind: ProfileKind, t: S) -> S {
        match kind {
            ProfileKind::Constant { scale } => sc::<S>(scale),
            ProfileKind::Power { alpha, scale } => {
                sc::<S>(scale) * (S::one() + t).powf(sc::<S>(alpha))
            }
        }
    }

    fn dg_of(kind: ProfileKind, t: S) -> S {
        match kind {
            ProfileKind::Constant { .. } => S::zero(),
            ProfileKind::Power { alpha, scale } => {
                sc::<S>(scale * alpha) * (S::one() + t).powf(sc::<S>(alpha - 1.0))
            }
        }
    }

    fn ddg_of(kind: ProfileKind, t: S) -> S {
        match kind {
            ProfileKind::Constant { .. } => S::zero(),
            ProfileKind::Power { alpha, scale } => {
                sc::<S>(scale * alpha * (alpha - 1.0)) * (S::one() + t).powf(sc::<S>(alpha - 2.0))
            }
        }
    }

    pub fn g(&self, t: S) -> S {
        Self::g_of(self.kind, t)
    }

    pub fn dg(&self, t: S) -> S {
        Self::dg_of(self.kind, t)
    }

    pub fn ddg(&self, t: S) -> S {
        Self::ddg_of(self.kind, t)
    }

    /// Lipschitz spot-check on sampled pairs; returns the worst ratio
    /// |g(t1)-g(t2)| / (L |t1-t2|), which must be <= 1 (up to rounding).
    pub fn lipschitz_check(&self, lo: S, hi: S, pairs: usize, seed: u64) -> S {
        let mut rng = crate::rng::SplitMix::new(seed);
        let mut worst = S::zero();
        for _ in 0..pairs {
            let t1 = sc::<S>(rng.uniform(lo.to_f64_lossy(), hi.to_f64_lossy()));
            let t2 = sc::<S>(rng.uniform(lo.to_f64_lossy(), hi.to_f64_lossy()));
            if (t1 - t2).abs() < sc::<S>(1e-12) {
                continue;
            }
            let lhs = (self.g(t1) - self.g(t2)).abs();
            let rhs = self.lipschitz.max(sc::<S>(1e-300)) * (t1 - t2).abs();
            if rhs > S::zero() {
                worst = worst.max(lhs / rhs);
            }
        }
        worst
    }
}
