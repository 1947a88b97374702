//! Smooth cutoffs: the quintic transition Psi, the outlet cutoff xi with its
//! analytic first and second derivatives, the strip variant xi_delta, the
//! truncation cutoff theta_k, and the Hopf collar profile chi.

use crate::geometry::{OutletProfile, ProfileKind, TruncationLadder};
use crate::scalar::{sc, Scalar, Vec2};
use crate::{Error, Result};

/// C^2 quintic transition: 0 for t <= 0, 1 for t >= 1, 10t^3 - 15t^4 + 6t^5
/// in between. Monotone, with Psi' = 30 t^2 (1-t)^2 bounded by 15/8.
#[derive(Clone, Copy, Debug, Default)]
pub struct TransitionPsi;

impl TransitionPsi {
    pub const SUP_D1: f64 = 15.0 / 8.0;

    pub fn eval<S: Scalar>(t: S, order: u8) -> S {
        if t <= S::zero() || t >= S::one() {
            return if order == 0 && t >= S::one() {
                S::one()
            } else {
                S::zero()
            };
        }
        let t2 = t * t;
        match order {
            0 => t2 * t * (sc::<S>(10.0) - sc::<S>(15.0) * t + sc::<S>(6.0) * t2),
            1 => {
                let omt = S::one() - t;
                sc::<S>(30.0) * t2 * omt * omt
            }
            2 => sc::<S>(60.0) * t * (S::one() - t) * (S::one() - sc::<S>(2.0) * t),
            _ => panic!("Psi derivatives available up to order 2"),
        }
    }
}

pub fn psi_eval<S: Scalar>(t: S, order: u8) -> S {
    TransitionPsi::eval(t, order)
}

/// First and second partial derivatives of xi at a point.
#[derive(Clone, Copy, Debug, Default)]
pub struct XiDerivatives<S> {
    pub value: S,
    pub grad: Vec2<S>,
    pub d11: S,
    pub d12: S,
    pub d22: S,
}

/// The outlet cutoff xi(x) = Psi(eps ln(gamma (g(x1) - x2) / x2)), defined
/// on the upper half of the outlet; callers mirror for x2 < 0.
#[derive(Clone, Debug)]
pub struct OutletCutoff<S> {
    pub profile: OutletProfile<S>,
    pub gamma: S,
    pub eps: S,
}

impl<S: Scalar> OutletCutoff<S> {
    pub fn new(profile: OutletProfile<S>, gamma: S, eps: S) -> Result<Self> {
        if gamma <= S::zero() || eps <= S::zero() {
            return Err(Error::Geometry("gamma and eps must be positive".into()));
        }
        Ok(Self {
            profile,
            gamma,
            eps,
        })
    }

    /// Strip cutoff xi_delta: the same construction with g = delta, gamma = 1.
    pub fn strip(delta: S, eps: S) -> Result<Self> {
        let profile = OutletProfile::new(
            ProfileKind::Constant {
                scale: delta.to_f64_lossy(),
            },
            S::zero() - sc::<S>(1e6), // valid everywhere; the strip clips in x1
        )?;
        Self::new(profile, S::one(), eps)
    }

    /// Height below which xi is identically 1 (the Psi argument exceeds 1):
    /// x2 <= gamma g / (gamma + e^{1/eps}).
    pub fn plateau_height(&self, x1: S) -> S {
        let g = self.profile.g(x1);
        self.gamma * g / (self.gamma + (S::one() / self.eps).exp())
    }

    /// Height above which xi vanishes: x2 >= gamma g / (gamma + 1).
    pub fn zero_height(&self, x1: S) -> S {
        let g = self.profile.g(x1);
        self.gamma * g / (self.gamma + S::one())
    }

    /// Map band coordinate theta in [0,1] to the height where the Psi
    /// argument equals theta.
    pub fn band_height(&self, x1: S, theta: S) -> S {
        let g = self.profile.g(x1);
        self.gamma * g / (self.gamma + (theta / self.eps).exp())
    }

    /// Value, gradient and second derivatives at (x1, x2), x2 >= 0.
    pub fn eval_full(&self, x: Vec2<S>) -> Result<XiDerivatives<S>> {
        let g = self.profile.g(x.x1);
        if g <= S::zero() || !g.is_finite() {
            return Err(Error::Geometry("cutoff: profile nonpositive here".into()));
        }
        if x.x2 < S::zero() || x.x2 > g {
            return Err(Error::Geometry(format!(
                "cutoff: point ({}, {}) outside the outlet half 0 <= x2 <= g",
                x.x1.to_f64_lossy(),
                x.x2.to_f64_lossy()
            )));
        }
        let mut out = XiDerivatives::default();
        // vanishing region (argument of Psi <= 0)
        if x.x2 >= self.zero_height(x.x1) {
            return Ok(out);
        }
        // plateau: short-circuit before the logarithm can overflow
        if x.x2 <= self.plateau_height(x.x1) {
            out.value = S::one();
            return Ok(out);
        }
        let gm = g - x.x2;
        let theta = self.eps * (self.gamma * gm / x.x2).ln();
        let p1 = TransitionPsi::eval(theta, 1);
        let p2 = TransitionPsi::eval(theta, 2);
        let dg = self.profile.dg(x.x1);
        let ddg = self.profile.ddg(x.x1);
        let e = self.eps;
        out.value = TransitionPsi::eval(theta, 0);
        // first derivatives (the x1 one is the displayed quotient rule)
        let t1 = e * dg / gm;
        let t2 = e * (-(S::one() / gm) - S::one() / x.x2);
        out.grad = Vec2::new(p1 * t1, p1 * t2);
        // second derivatives
        out.d11 = p2 * t1 * t1 + p1 * e * (ddg * gm - dg * dg) / (gm * gm);
        out.d12 = p2 * t1 * t2 + p1 * e * dg / (gm * gm);
        out.d22 = p2 * t2 * t2 + p1 * e * (-(S::one() / (gm * gm)) + S::one() / (x.x2 * x.x2));
        Ok(out)
    }

    /// Value and gradient; the plateau returns (1, 0) exactly.
    pub fn eval(&self, x: Vec2<S>, want_grad: bool) -> Result<(S, Vec2<S>)> {
        let full = self.eval_full(x)?;
        Ok((full.value, if want_grad { full.grad } else { Vec2::zero() }))
    }
}

/// Report of the sampled suprema behind the gradient bounds.
#[derive(Clone, Debug)]
pub struct XiBoundReport {
    /// sup |dxi/dx_i| x2 / eps  (the eps-normalized first bound)
    pub sup_grad_x2_over_eps: f64,
    /// sup |dxi/dx_i| g(x1)
    pub sup_grad_g: f64,
    /// sup |d2 xi| g(x1)^2
    pub sup_hess_g2: f64,
    /// same suprema with twice the samples, for the stability check
    pub doubled: Option<Box<XiBoundReport>>,
    /// worst violation of the support condition (should be <= 0)
    pub support_violation: f64,
}

/// Sample the three suprema of the gradient/Hessian bounds over the band,
/// with a doubled-sample pass for stability.
pub fn xi_bound_check<S: Scalar>(
    cutoff: &OutletCutoff<S>,
    x1_range: (S, S),
    samples: usize,
) -> Result<XiBoundReport> {
    if samples < 100 {
        return Err(Error::Geometry("bound check needs >= 100 samples".into()));
    }
    let run = |n: usize| -> Result<XiBoundReport> {
        let mut s1 = 0.0f64;
        let mut s2 = 0.0f64;
        let mut s3 = 0.0f64;
        let mut viol = f64::NEG_INFINITY;
        let m = (n as f64).sqrt().ceil() as usize;
        for i in 0..m {
            let x1 = x1_range.0
                + (x1_range.1 - x1_range.0) * sc::<S>((i as f64 + 0.5) / m as f64);
            let g = cutoff.profile.g(x1).to_f64_lossy();
            for j in 0..m {
                let theta = sc::<S>((j as f64 + 0.5) / m as f64);
                let x2 = cutoff.band_height(x1, theta);
                let d = cutoff.eval_full(Vec2::new(x1, x2))?;
                let gnorm = d.grad.x1.abs().max(d.grad.x2.abs()).to_f64_lossy();
                let x2f = x2.to_f64_lossy();
                let epsf = cutoff.eps.to_f64_lossy();
                s1 = s1.max(gnorm * x2f / epsf);
                s2 = s2.max(gnorm * g);
                let hess = d
                    .d11
                    .abs()
                    .max(d.d12.abs())
                    .max(d.d22.abs())
                    .to_f64_lossy();
                s3 = s3.max(hess * g * g);
                if gnorm > 0.0 {
                    // Eq-4.4 band: (1+gamma) x2/gamma <= g <= (e^{1/eps}+gamma) x2/gamma
                    let gamma = cutoff.gamma.to_f64_lossy();
                    let lo = (1.0 + gamma) * x2f / gamma;
                    let hi = ((1.0 / epsf).exp() + gamma) * x2f / gamma;
                    viol = viol.max(lo - g).max(g - hi);
                }
            }
        }
        Ok(XiBoundReport {
            sup_grad_x2_over_eps: s1,
            sup_grad_g: s2,
            sup_hess_g2: s3,
            doubled: None,
            support_violation: viol,
        })
    };
    let mut base = run(samples)?;
    base.doubled = Some(Box::new(run(samples * 2)?));
    Ok(base)
}

/// Truncation cutoff theta_k: 1 on Omega_k, 0 beyond Omega_{k+1}, smooth in
/// x1 only, even in x2 by construction.
#[derive(Clone, Debug)]
pub struct TruncationCutoff<S> {
    pub r_k: S,
    pub r_k1: S,
    /// g(R_k), kept for the reported gradient-bound constant
    pub g_rk: S,
    pub l_eff: S,
}

impl<S: Scalar> TruncationCutoff<S> {
    pub fn new(profile: &OutletProfile<S>, ladder: &TruncationLadder<S>, k: usize) -> Result<Self> {
        if k + 1 > ladder.levels() {
            return Err(Error::Geometry(format!(
                "theta_{k} needs ladder level {}",
                k + 1
            )));
        }
        Ok(Self {
            r_k: ladder.radii[k],
            r_k1: ladder.radii[k + 1],
            g_rk: profile.g(ladder.radii[k]),
            l_eff: ladder.l_eff,
        })
    }

    pub fn eval(&self, x: Vec2<S>, want_grad: bool) -> (S, Vec2<S>) {
        let width = self.r_k1 - self.r_k;
        let arg = (self.r_k1 - x.x1) / width;
        let v = TransitionPsi::eval(arg, 0);
        if !want_grad {
            return (v, Vec2::zero());
        }
        let dv = -TransitionPsi::eval(arg, 1) / width;
        (v, Vec2::new(dv, S::zero()))
    }

    /// The constant c in |grad theta_k| <= c / g(R_k): with the step rule the
    /// width is g(R_k)/(2 L_eff), so c = 2 L_eff sup|Psi'|.
    pub fn gradient_bound_constant(&self) -> S {
        sc::<S>(2.0 * TransitionPsi::SUP_D1) * self.l_eff
    }
}

/// Hopf collar profile chi(d) = Psi(eps ln(w/d)): identically 1 in a small
/// collar of the curve, 0 beyond width w, with |chi'| <= c eps / d.
#[derive(Clone, Copy, Debug)]
pub struct HopfChi<S> {
    pub width: S,
    pub eps: S,
}

impl<S: Scalar> HopfChi<S> {
    pub fn new(width: S, eps: S) -> Self {
        Self { width, eps }
    }

    /// (chi, chi', chi'') as functions of the distance d >= 0.
    pub fn eval(&self, d: S) -> (S, S, S) {
        if d >= self.width {
            return (S::zero(), S::zero(), S::zero());
        }
        let plateau = self.width * (-(S::one() / self.eps)).exp();
        if d <= plateau {
            return (S::one(), S::zero(), S::zero());
        }
        let arg = self.eps * (self.width / d).ln();
        let p0 = TransitionPsi::eval(arg, 0);
        let p1 = TransitionPsi::eval(arg, 1);
        let p2 = TransitionPsi::eval(arg, 2);
        let d1 = -p1 * self.eps / d;
        let d2 = p2 * self.eps * self.eps / (d * d) + p1 * self.eps / (d * d);
        (p0, d1, d2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::build_ladder;
    use crate::rng::SplitMix;

    fn channel_cutoff(eps: f64) -> OutletCutoff<f64> {
        let p = OutletProfile::new(ProfileKind::Constant { scale: 1.0 }, 0.0).unwrap();
        OutletCutoff::new(p, 1.0, eps).unwrap()
    }

    fn power_cutoff(eps: f64) -> OutletCutoff<f64> {
        let p = OutletProfile::new(
            ProfileKind::Power {
                alpha: 2.0 / 3.0,
                scale: 1.0,
            },
            0.0,
        )
        .unwrap();
        OutletCutoff::new(p, 1.0, eps).unwrap()
    }

    #[test]
    fn psi_flat_regions_and_midpoint() {
        assert_eq!(psi_eval::<f64>(-1.0, 0), 0.0);
        assert_eq!(psi_eval::<f64>(2.0, 0), 1.0);
        // the odd-symmetric quintic passes through 1/2 at 1/2
        assert!((psi_eval::<f64>(0.5, 0) - 0.5).abs() < 1e-15);
        assert_eq!(psi_eval::<f64>(-0.5, 1), 0.0);
        assert_eq!(psi_eval::<f64>(1.5, 1), 0.0);
    }

    #[test]
    fn psi_derivatives_match_finite_differences() {
        let h = 1e-6;
        for &t in &[0.1, 0.3, 0.5, 0.77, 0.93] {
            let fd = (psi_eval::<f64>(t + h, 0) - psi_eval::<f64>(t - h, 0)) / (2.0 * h);
            let an = psi_eval::<f64>(t, 1);
            assert!((fd - an).abs() <= 1e-8 * (1.0 + an.abs()), "t={t}");
            let fd2 = (psi_eval::<f64>(t + h, 1) - psi_eval::<f64>(t - h, 1)) / (2.0 * h);
            let an2 = psi_eval::<f64>(t, 2);
            assert!((fd2 - an2).abs() <= 1e-6 * (1.0 + an2.abs()), "t={t}");
        }
    }

    #[test]
    fn xi_is_one_near_axis_and_zero_near_wall() {
        let c = channel_cutoff(0.1);
        let (v, g) = c.eval(Vec2::new(1.0, 1e-9), true).unwrap();
        assert_eq!(v, 1.0);
        assert_eq!(g.x1, 0.0);
        assert_eq!(g.x2, 0.0);
        let (v, _) = c.eval(Vec2::new(1.0, 1.0 - 1e-6), true).unwrap();
        assert_eq!(v, 0.0);
        assert!(c.eval(Vec2::new(1.0, 1.5), false).is_err());
        assert!(c.eval(Vec2::new(1.0, -0.1), false).is_err());
    }

    #[test]
    fn xi_gradient_matches_finite_differences_at_random_band_points() {
        let mut rng = SplitMix::new(4);
        for cutoff in [channel_cutoff(0.15), power_cutoff(0.12)] {
            let mut checked = 0;
            while checked < 50 {
                let x1 = rng.uniform(1.0, 6.0);
                let theta = rng.uniform(0.05, 0.95);
                let x2 = cutoff.band_height(x1, theta);
                let d = cutoff.eval_full(Vec2::new(x1, x2)).unwrap();
                if d.grad.x1.abs() + d.grad.x2.abs() == 0.0 {
                    continue;
                }
                let h1 = 1e-7 * (1.0 + x1.abs());
                let h2 = 1e-7 * x2.abs();
                let vp = cutoff.eval(Vec2::new(x1 + h1, x2), false).unwrap().0;
                let vm = cutoff.eval(Vec2::new(x1 - h1, x2), false).unwrap().0;
                let fd1 = (vp - vm) / (2.0 * h1);
                let vp = cutoff.eval(Vec2::new(x1, x2 + h2), false).unwrap().0;
                let vm = cutoff.eval(Vec2::new(x1, x2 - h2), false).unwrap().0;
                let fd2 = (vp - vm) / (2.0 * h2);
                let scale = d.grad.x1.abs().max(d.grad.x2.abs());
                assert!(
                    (fd1 - d.grad.x1).abs() <= 1e-6 * scale.max(1.0),
                    "d1 at ({x1}, {x2}): fd {fd1} vs {}",
                    d.grad.x1
                );
                assert!(
                    (fd2 - d.grad.x2).abs() <= 1e-6 * scale.max(1.0),
                    "d2 at ({x1}, {x2}): fd {fd2} vs {}",
                    d.grad.x2
                );
                checked += 1;
            }
        }
    }

    #[test]
    fn xi_second_derivatives_match_finite_differences() {
        let cutoff = power_cutoff(0.15);
        let mut rng = SplitMix::new(5);
        let mut checked = 0;
        while checked < 25 {
            let x1 = rng.uniform(1.0, 5.0);
            let theta = rng.uniform(0.15, 0.85);
            let x2 = cutoff.band_height(x1, theta);
            let d = cutoff.eval_full(Vec2::new(x1, x2)).unwrap();
            let h1 = 1e-6 * (1.0 + x1.abs());
            let h2 = 1e-6 * x2.abs();
            let g = |x1: f64, x2: f64| cutoff.eval_full(Vec2::new(x1, x2)).unwrap().grad;
            let fd11 = (g(x1 + h1, x2).x1 - g(x1 - h1, x2).x1) / (2.0 * h1);
            let fd12 = (g(x1, x2 + h2).x1 - g(x1, x2 - h2).x1) / (2.0 * h2);
            let fd22 = (g(x1, x2 + h2).x2 - g(x1, x2 - h2).x2) / (2.0 * h2);
            let scale = d.d11.abs().max(d.d12.abs()).max(d.d22.abs()).max(1.0);
            assert!((fd11 - d.d11).abs() <= 1e-4 * scale, "d11");
            assert!((fd12 - d.d12).abs() <= 1e-4 * scale, "d12");
            assert!((fd22 - d.d22).abs() <= 1e-4 * scale, "d22");
            checked += 1;
        }
    }

    #[test]
    fn bound_check_first_supremum_is_eps_stable() {
        // channel g = 1, gamma = 1: the eps-normalized first supremum should
        // agree within 10% across the eps ladder
        let mut sups = Vec::new();
        for eps in [0.2, 0.1, 0.05] {
            let c = channel_cutoff(eps);
            let rep = xi_bound_check(&c, (1.0, 6.0), 400).unwrap();
            assert!(rep.support_violation <= 1e-9, "support condition violated");
            let doubled = rep.doubled.as_ref().unwrap();
            assert!(
                (doubled.sup_grad_x2_over_eps - rep.sup_grad_x2_over_eps).abs()
                    <= 0.10 * rep.sup_grad_x2_over_eps
            );
            sups.push(rep.sup_grad_x2_over_eps);
        }
        let max = sups.iter().cloned().fold(f64::MIN, f64::max);
        let min = sups.iter().cloned().fold(f64::MAX, f64::min);
        assert!(max / min <= 1.10, "sups {sups:?}");
    }

    #[test]
    fn bound_check_hessian_supremum_finite_for_power_profile() {
        let c = power_cutoff(0.1);
        let rep = xi_bound_check(&c, (1.0, 6.0), 400).unwrap();
        assert!(rep.sup_hess_g2.is_finite() && rep.sup_hess_g2 > 0.0);
        let doubled = rep.doubled.as_ref().unwrap();
        assert!((doubled.sup_hess_g2 - rep.sup_hess_g2).abs() <= 0.10 * rep.sup_hess_g2);
    }

    #[test]
    fn theta_k_plateaus_and_gradient_bound() {
        let p = OutletProfile::<f64>::new(ProfileKind::Constant { scale: 1.0 }, 0.5).unwrap();
        let ladder = build_ladder(&p, 1.0, 7).unwrap();
        let mut normalized = Vec::new();
        for k in 0..6 {
            let theta = TruncationCutoff::new(&p, &ladder, k).unwrap();
            let (v, g) = theta.eval(Vec2::new(ladder.radii[k] - 0.01, 0.3), true);
            assert_eq!(v, 1.0);
            assert_eq!(g.x1, 0.0);
            let (v, g) = theta.eval(Vec2::new(ladder.radii[k + 1] + 0.01, 0.3), true);
            assert_eq!(v, 0.0);
            assert_eq!(g.x1, 0.0);
            // sampled sup of |grad theta| g(R_k)
            let mut sup = 0.0f64;
            for i in 0..200 {
                let x1 = ladder.radii[k]
                    + (ladder.radii[k + 1] - ladder.radii[k]) * (i as f64 + 0.5) / 200.0;
                let (_, g) = theta.eval(Vec2::new(x1, 0.0), true);
                sup = sup.max(g.x1.abs() * theta.g_rk);
            }
            assert!(sup <= theta.gradient_bound_constant() + 1e-9);
            normalized.push(sup);
        }
        // identical transition shape across k for the channel
        for w in normalized.windows(2) {
            assert!((w[0] - w[1]).abs() <= 1e-9 * w[0].max(1.0));
        }
    }

    #[test]
    fn hopf_chi_profile_and_gradient_bound() {
        let chi = HopfChi::new(0.5, 0.3);
        assert_eq!(chi.eval(0.6).0, 0.0);
        assert_eq!(chi.eval(1e-6).0, 1.0);
        let mut d = 0.5 * (-(1.0f64 / 0.3)).exp() * 1.5;
        while d < 0.5 {
            let (_, d1, _) = chi.eval(d);
            assert!(d1.abs() <= TransitionPsi::SUP_D1 * 0.3 / d + 1e-12);
            // finite difference check
            let h = d * 1e-6;
            let fd = (chi.eval(d + h).0 - chi.eval(d - h).0) / (2.0 * h);
            assert!((fd - d1).abs() <= 1e-5 * (1.0 + d1.abs()));
            d *= 1.7;
        }
    }
}
