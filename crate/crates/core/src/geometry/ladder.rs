//! The truncation ladder R_{l+1} = R_l + g(R_l)/(2 L_eff) and the g^{-3}
//! tail integrals that steer the two growth regimes.

use super::profile::{OutletProfile, ProfileKind};
use crate::quad;
use crate::scalar::{sc, Scalar};
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub struct TruncationLadder<S> {
    pub radii: Vec<S>,
    pub l_eff: S,
}

impl<S: Scalar> TruncationLadder<S> {
    pub fn top(&self) -> S {
        *self.radii.last().unwrap()
    }

    pub fn levels(&self) -> usize {
        self.radii.len() - 1
    }

    /// Cell index of abscissa t, i.e. k with R_k <= t < R_{k+1}.
    pub fn cell_of(&self, t: S) -> Option<usize> {
        if t < self.radii[0] || t >= self.top() {
            return None;
        }
        match self
            .radii
            .binary_search_by(|r| r.partial_cmp(&t).unwrap())
        {
            Ok(k) => Some(k.min(self.levels() - 1)),
            Err(k) => Some(k - 1),
        }
    }
}

/// Build the ladder with K steps starting at R0. The Remark-3.1 sandwich
/// 1/2 g(R_k) <= g(t) <= 3/2 g(R_k) is verified on a sample grid.
pub fn build_ladder<S: Scalar>(
    profile: &OutletProfile<S>,
    r0: S,
    k_count: usize,
) -> Result<TruncationLadder<S>> {
    if r0 < profile.r_star {
        return Err(Error::Geometry(format!(
            "ladder start {} below outlet start {}",
            r0.to_f64_lossy(),
            profile.r_star.to_f64_lossy()
        )));
    }
    if k_count < 1 {
        return Err(Error::Geometry("ladder needs K >= 1".into()));
    }
    let two_l = sc::<S>(2.0) * profile.l_eff;
    let mut radii = Vec::with_capacity(k_count + 1);
    radii.push(r0);
    for _ in 0..k_count {
        let r = *radii.last().unwrap();
        let g = profile.g(r);
        if g <= S::zero() || !g.is_finite() {
            return Err(Error::Hypothesis(format!(
                "profile invalid: nonpositive g at {}",
                r.to_f64_lossy()
            )));
        }
        radii.push(r + g / two_l);
    }
    let ladder = TruncationLadder {
        radii,
        l_eff: profile.l_eff,
    };
    verify_sandwich(profile, &ladder, 100)?;
    Ok(ladder)
}

/// Remark-3.1 bounds on `samples` points per cell.
pub fn verify_sandwich<S: Scalar>(
    profile: &OutletProfile<S>,
    ladder: &TruncationLadder<S>,
    samples: usize,
) -> Result<()> {
    let slack = sc::<S>(1.0 + 1e-12);
    for k in 0..ladder.levels() {
        let (a, b) = (ladder.radii[k], ladder.radii[k + 1]);
        let g_rk = profile.g(a);
        for i in 0..=samples {
            let t = a + (b - a) * sc::<S>(i as f64 / samples as f64);
            let g = profile.g(t);
            let lo = sc::<S>(0.5) * g_rk;
            let hi = sc::<S>(1.5) * g_rk;
            if g * slack < lo || g > hi * slack {
                return Err(Error::Geometry(format!(
                    "Remark-3.1 sandwich violated in cell {k} at t = {}",
                    t.to_f64_lossy()
                )));
            }
        }
    }
    Ok(())
}

/// Convergence classification of the tail integral of g^{-3}.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TailCase {
    /// case (i): the tail integral converges
    Finite,
    /// case (ii): the tail integral diverges
    Infinite,
}

#[derive(Clone, Debug)]
pub struct Gm3Integral<S> {
    pub value: S,
    pub case: TailCase,
    /// Fitted decay exponent p of the per-cell integrals (I_k ~ k^{-p}).
    pub decay_exponent: f64,
}

/// Adaptive quadrature of the finite integral of g^{-3} over [a, b],
/// relative tolerance 1e-10.
pub fn integral_g_minus3_finite<S: Scalar>(profile: &OutletProfile<S>, a: S, b: S) -> Result<S> {
    if a >= b {
        return Err(Error::Geometry("integral bounds must satisfy a < b".into()));
    }
    let mut f = |t: S| {
        let g = profile.g(t);
        S::one() / (g * g * g)
    };
    quad::adaptive(&mut f, a, b, 1e-10, 1e-14)
}

/// Integral of g^{-3} over [a, b] (b may be infinite for convergent tails)
/// plus the case classification extrapolated from the ladder cells.
pub fn integral_g_minus3<S: Scalar>(
    profile: &OutletProfile<S>,
    ladder: &TruncationLadder<S>,
    a: S,
    b: S,
) -> Result<Gm3Integral<S>> {
    let (case, decay_exponent) = classify_tail(profile, ladder)?;
    let value = if b.is_finite() {
        integral_g_minus3_finite(profile, a, b)?
    } else {
        match (case, profile.kind) {
            (TailCase::Infinite, _) => {
                return Err(Error::Numeric(
                    "integral of g^-3 diverges on an infinite interval".into(),
                ))
            }
            (TailCase::Finite, ProfileKind::Power { alpha, scale }) => {
                // finite part by quadrature, analytic tail beyond T
                let t_cut = ladder.top().max(a + sc::<S>(1.0));
                let finite = integral_g_minus3_finite(profile, a, t_cut)?;
                let p = 3.0 * alpha;
                let tail = sc::<S>(scale.powi(-3))
                    * (S::one() + t_cut).powf(sc::<S>(1.0 - p))
                    / sc::<S>(p - 1.0);
                finite + tail
            }
            (TailCase::Finite, ProfileKind::Constant { .. }) => {
                return Err(Error::Numeric(
                    "constant profile cannot have a convergent tail".into(),
                ))
            }
        }
    };
    Ok(Gm3Integral {
        value,
        case,
        decay_exponent,
    })
}

/// Fit the decay exponent of the per-cell integrals I_k over the upper half
/// of the ladder; I_k ~ k^{-p} with p > 1 means a convergent tail.
fn classify_tail<S: Scalar>(
    profile: &OutletProfile<S>,
    ladder: &TruncationLadder<S>,
) -> Result<(TailCase, f64)> {
    let levels = ladder.levels();
    if levels < 3 {
        // fall back to the analytic criterion for the closed profile family
        return Ok(analytic_case(profile.kind));
    }
    let mut cells = Vec::new();
    for k in 0..levels {
        let v = integral_g_minus3_finite(profile, ladder.radii[k], ladder.radii[k + 1])?;
        cells.push(v.to_f64_lossy());
    }
    // least squares fit of ln I_k against ln(k+1) on the upper half
    let lo = levels / 2;
    let pts: Vec<(f64, f64)> = (lo..levels)
        .filter(|&k| cells[k] > 0.0)
        .map(|k| (((k + 1) as f64).ln(), cells[k].ln()))
        .collect();
    if pts.len() < 2 {
        return Ok(analytic_case(profile.kind));
    }
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    let denom = n * sxx - sx * sx;
    let slope = if denom.abs() > 1e-14 {
        (n * sxy - sx * sy) / denom
    } else {
        0.0
    };
    let p = -slope;
    let case = if p > 1.0 {
        TailCase::Finite
    } else {
        TailCase::Infinite
    };
    Ok((case, p))
}

fn analytic_case(kind: ProfileKind) -> (TailCase, f64) {
    match kind {
        ProfileKind::Constant { .. } => (TailCase::Infinite, 0.0),
        ProfileKind::Power { alpha, .. } => {
            if 3.0 * alpha > 1.0 {
                (TailCase::Finite, f64::INFINITY)
            } else {
                (TailCase::Infinite, 0.0)
            }
        }
    }
}

/// The per-step bound of the Saint-Venant chain: the cumulative integrals
/// satisfy I(R0, R_{k+1}) <= 109 I(R0, R_k) for k >= 1.
pub fn verify_109_chain<S: Scalar>(
    profile: &OutletProfile<S>,
    ladder: &TruncationLadder<S>,
) -> Result<Vec<(S, S)>> {
    let mut out = Vec::new();
    let r0 = ladder.radii[0];
    let mut cum = integral_g_minus3_finite(profile, r0, ladder.radii[1])?;
    for k in 1..ladder.levels() {
        let next = cum + integral_g_minus3_finite(profile, ladder.radii[k], ladder.radii[k + 1])?;
        out.push((next, cum));
        if next > sc::<S>(109.0) * cum * sc::<S>(1.0 + 1e-12) {
            return Err(Error::Hypothesis(format!(
                "109-factor chain violated at k = {k}: {} > 109 * {}",
                next.to_f64_lossy(),
                cum.to_f64_lossy()
            )));
        }
        cum = next;
    }
    Ok(out)
}
