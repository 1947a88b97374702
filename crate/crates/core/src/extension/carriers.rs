//! Flux carriers: thin-strip fields moving each component's flux to the
//! boundary piece nearest the outlet, and the drain field moving the total
//! flux to infinity.

use super::boundary::CurveId;
use super::tilde_xi::{tilde_xi, tilde_xi_with_grad};
use crate::cutoffs::OutletCutoff;
use crate::geometry::DomainSpec;
use crate::scalar::{sc, Mat2, Scalar, Vec2};
use crate::{Error, Result};

/// Strip corridors: one per flux source (the outer boundary and every hole
/// except the one nearest the outlet), all ending inside that last hole.
#[derive(Clone, Debug)]
pub struct StripSpec<S> {
    /// strip half-height delta
    pub delta: S,
    /// transition parameter of the strip cutoff
    pub eps: S,
    /// carrier corridors: (source curve, left end of the corridor)
    pub corridors: Vec<(CurveId, S)>,
    /// common right end, inside the last hole (or at infinity if none)
    pub x_hi: S,
}

impl<S: Scalar> StripSpec<S> {
    /// Choose corridors automatically: delta is half the smallest hole
    /// radius, hole corridors start half a radius inside their hole, and
    /// everything ends half a radius inside the last hole.
    pub fn auto(spec: &DomainSpec<S>, eps: S) -> Result<Self> {
        let Some(last) = spec.last_hole() else {
            return Ok(Self {
                delta: S::zero(),
                eps,
                corridors: Vec::new(),
                x_hi: S::zero(),
            });
        };
        let min_r = spec
            .holes
            .iter()
            .map(|h| h.radius)
            .fold(f64::INFINITY, f64::min);
        let delta = sc::<S>(0.5 * min_r);
        let hn = spec.holes[last];
        let x_hi = sc::<S>(hn.center_x1 - 0.5 * hn.radius);
        let mut corridors = vec![(CurveId::Outer, spec.x_left - sc::<S>(0.25))];
        for (i, h) in spec.holes.iter().enumerate() {
            if i != last {
                corridors.push((CurveId::Hole(i), sc::<S>(h.center_x1 + 0.5 * h.radius)));
            }
        }
        let s = Self {
            delta,
            eps,
            corridors,
            x_hi,
        };
        s.validate(spec)?;
        Ok(s)
    }

    /// The geometric hypotheses: the line x2 = delta cuts every hole twice,
    /// corridor end faces are buried in holes (or outside the domain), and
    /// the strip stays below the outer wall.
    pub fn validate(&self, spec: &DomainSpec<S>) -> Result<()> {
        if self.corridors.is_empty() {
            return Ok(());
        }
        let delta = self.delta.to_f64_lossy();
        for (i, h) in spec.holes.iter().enumerate() {
            if delta >= h.radius {
                return Err(Error::Geometry(format!(
                    "strip half-height {delta} does not cut hole {i} at two points"
                )));
            }
        }
        let last = spec.last_hole().unwrap();
        let top_at = |hole: &crate::geometry::Hole, x: f64| -> f64 {
            let dx = x - hole.center_x1;
            (hole.radius * hole.radius - dx * dx).max(0.0).sqrt()
        };
        let hn = &spec.holes[last];
        if top_at(hn, self.x_hi.to_f64_lossy()) < delta {
            return Err(Error::Geometry(
                "strip end face is not buried inside the last hole".into(),
            ));
        }
        for (id, x_lo) in &self.corridors {
            match id {
                CurveId::Outer => {
                    if *x_lo >= spec.x_left {
                        return Err(Error::Geometry(
                            "outer corridor must start outside the domain".into(),
                        ));
                    }
                }
                CurveId::Hole(i) => {
                    let h = &spec.holes[*i];
                    if top_at(h, x_lo.to_f64_lossy()) < delta {
                        return Err(Error::Geometry(format!(
                            "corridor start face is not buried inside hole {i}"
                        )));
                    }
                    if sc::<S>(h.center_x1) >= self.x_hi {
                        return Err(Error::Geometry(format!(
                            "corridor from hole {i} does not reach the last hole"
                        )));
                    }
                }
            }
        }
        // the strip must stay strictly below the outer wall
        let mut x = spec.x_left.to_f64_lossy();
        let hi = self.x_hi.to_f64_lossy();
        while x < hi {
            if spec.wall_half_width(sc::<S>(x)).to_f64_lossy() <= delta {
                return Err(Error::Geometry(
                    "strip half-height reaches the outer wall".into(),
                ));
            }
            x += 0.02 * (hi - spec.x_left.to_f64_lossy()).max(1e-3);
        }
        Ok(())
    }
}

/// Carrier of one source's flux along its corridor: -F_i/2 times the strip
/// drain field, clipped to the corridor (the clip faces are buried).
#[derive(Clone, Debug)]
pub struct StripCarrier<S> {
    pub source: CurveId,
    pub flux: S,
    pub x_lo: S,
    pub x_hi: S,
    pub cutoff: OutletCutoff<S>,
}

impl<S: Scalar> StripCarrier<S> {
    pub fn new(strips: &StripSpec<S>, source: CurveId, flux: S) -> Result<Self> {
        let (_, x_lo) = strips
            .corridors
            .iter()
            .find(|(id, _)| *id == source)
            .ok_or_else(|| Error::Geometry(format!("no corridor for {source:?}")))?;
        Ok(Self {
            source,
            flux,
            x_lo: *x_lo,
            x_hi: strips.x_hi,
            cutoff: OutletCutoff::strip(strips.delta, strips.eps)?,
        })
    }

    pub fn eval(&self, x: Vec2<S>) -> Vec2<S> {
        if self.flux == S::zero() || x.x1 <= self.x_lo || x.x1 >= self.x_hi {
            return Vec2::zero();
        }
        if x.x2.abs() >= self.cutoff.zero_height(x.x1) {
            return Vec2::zero();
        }
        let t = tilde_xi(&self.cutoff, x).expect("strip point inside cutoff domain");
        t.scale(-self.flux * sc::<S>(0.5))
    }

    pub fn eval_with_grad(&self, x: Vec2<S>) -> (Vec2<S>, Mat2<S>) {
        if self.flux == S::zero() || x.x1 <= self.x_lo || x.x1 >= self.x_hi {
            return (Vec2::zero(), Mat2::zero());
        }
        if x.x2.abs() >= self.cutoff.zero_height(x.x1) {
            return (Vec2::zero(), Mat2::zero());
        }
        let (v, g) = tilde_xi_with_grad(&self.cutoff, x).expect("strip point inside cutoff domain");
        let s = -self.flux * sc::<S>(0.5);
        (
            v.scale(s),
            Mat2 {
                a11: g.a11 * s,
                a12: g.a12 * s,
                a21: g.a21 * s,
                a22: g.a22 * s,
            },
        )
    }
}

/// Drain of the total flux to infinity: -F/2 times the outlet drain field,
/// active right of a cut abscissa buried in the last hole (or at the left
/// wall when there are no holes).
#[derive(Clone, Debug)]
pub struct OutletCarrier<S> {
    pub flux: S,
    pub x_cut: S,
    pub cutoff: OutletCutoff<S>,
}

impl<S: Scalar> OutletCarrier<S> {
    pub fn new(spec: &DomainSpec<S>, eps: S, flux: S) -> Result<Self> {
        spec.assert_gamma_crossing()?;
        let cutoff = OutletCutoff::new(spec.profile.clone(), spec.gamma, eps)?;
        let x_cut = match spec.last_hole() {
            None => spec.x_left,
            Some(n) => {
                let h = spec.holes[n];
                // abscissa maximizing the depth of the drain band inside the
                // hole; the whole band must be swallowed there
                let mut best = (f64::NEG_INFINITY, h.center_x1);
                for j in 0..=512 {
                    let x = h.center_x1 - h.radius + 2.0 * h.radius * j as f64 / 512.0;
                    let dx = x - h.center_x1;
                    let top = (h.radius * h.radius - dx * dx).max(0.0).sqrt();
                    let band_top = cutoff.zero_height(sc::<S>(x)).to_f64_lossy();
                    let margin = top - band_top;
                    if margin > best.0 {
                        best = (margin, x);
                    }
                }
                if best.0 <= 0.0 {
                    return Err(Error::Geometry(
                        "drain band is nowhere swallowed by the last hole".into(),
                    ));
                }
                sc::<S>(best.1)
            }
        };
        Ok(Self {
            flux,
            x_cut,
            cutoff,
        })
    }

    pub fn eval(&self, x: Vec2<S>) -> Vec2<S> {
        if self.flux == S::zero() || x.x1 <= self.x_cut {
            return Vec2::zero();
        }
        let t = tilde_xi(&self.cutoff, x).expect("outlet point inside cutoff domain");
        t.scale(-self.flux * sc::<S>(0.5))
    }

    pub fn eval_with_grad(&self, x: Vec2<S>) -> (Vec2<S>, Mat2<S>) {
        if self.flux == S::zero() || x.x1 <= self.x_cut {
            return (Vec2::zero(), Mat2::zero());
        }
        let (v, g) = tilde_xi_with_grad(&self.cutoff, x).expect("outlet point inside cutoff");
        let s = -self.flux * sc::<S>(0.5);
        (
            v.scale(s),
            Mat2 {
                a11: g.a11 * s,
                a12: g.a12 * s,
                a21: g.a21 * s,
                a22: g.a22 * s,
            },
        )
    }

    /// Sampled decay report: sup over the range of |b_inf| g(x1) and
    /// |grad b_inf| g^2(x1), each with a doubled-sample stability pass.
    pub fn decay_report(&self, x1_range: (S, S), samples: usize) -> (f64, f64, f64, f64) {
        let run = |n: usize| -> (f64, f64) {
            let mut s_val = 0.0f64;
            let mut s_grad = 0.0f64;
            let m = (n as f64).sqrt().ceil() as usize;
            for i in 0..m {
                let x1 = x1_range.0
                    + (x1_range.1 - x1_range.0) * sc::<S>((i as f64 + 0.5) / m as f64);
                let g = self.cutoff.profile.g(x1).to_f64_lossy();
                for j in 0..m {
                    let theta = sc::<S>((j as f64 + 0.5) / m as f64);
                    let x2 = self.cutoff.band_height(x1, theta);
                    let (v, gr) = self.eval_with_grad(Vec2::new(x1, x2));
                    s_val = s_val.max(v.norm().to_f64_lossy() * g);
                    s_grad = s_grad.max(gr.frobenius_sq().sqrt().to_f64_lossy() * g * g);
                }
            }
            (s_val, s_grad)
        };
        let (a, b) = run(samples);
        let (a2, b2) = run(samples * 2);
        (a, b, a2, b2)
    }
}
