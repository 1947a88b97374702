//! Boundary curves, symmetric boundary traces, and flux quadrature.

use crate::geometry::DomainSpec;
use crate::quad::gauss_legendre;
use crate::scalar::{sc, Scalar, Vec2};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Boundary component identifier: the outer boundary or one of the holes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CurveId {
    Outer,
    Hole(usize),
}

/// Concrete geometry of a boundary component. Holes are circles centered on
/// the axis; the data-carrying part of the outer boundary is the left wall.
#[derive(Clone, Copy, Debug)]
pub enum CurveGeom<S> {
    /// hole circle; Omega lies outside, so the outward normal of Omega
    /// points toward the center
    Circle { center_x1: S, radius: S },
    /// left wall {x1 = x} x [-half_height, half_height]; outward normal -e1
    Segment { x1: S, half_height: S },
}

impl<S: Scalar> CurveGeom<S> {
    pub fn for_curve(spec: &DomainSpec<S>, id: CurveId) -> Self {
        match id {
            CurveId::Outer => CurveGeom::Segment {
                x1: spec.x_left,
                half_height: spec.wall_half_width(spec.x_left),
            },
            CurveId::Hole(i) => CurveGeom::Circle {
                center_x1: sc::<S>(spec.holes[i].center_x1),
                radius: sc::<S>(spec.holes[i].radius),
            },
        }
    }

    /// Natural parameter range (circle: angle in [-pi, pi); segment: x2).
    pub fn param_range(&self) -> (S, S) {
        match self {
            CurveGeom::Circle { .. } => (
                -sc::<S>(std::f64::consts::PI),
                sc::<S>(std::f64::consts::PI),
            ),
            CurveGeom::Segment { half_height, .. } => (-*half_height, *half_height),
        }
    }

    pub fn is_closed(&self) -> bool {
        matches!(self, CurveGeom::Circle { .. })
    }

    pub fn point(&self, t: S) -> Vec2<S> {
        match self {
            CurveGeom::Circle { center_x1, radius } => Vec2::new(
                *center_x1 + *radius * t.cos(),
                *radius * t.sin(),
            ),
            CurveGeom::Segment { x1, .. } => Vec2::new(*x1, t),
        }
    }

    /// Outward normal of Omega at parameter t.
    pub fn normal_out(&self, t: S) -> Vec2<S> {
        match self {
            CurveGeom::Circle { .. } => Vec2::new(-t.cos(), -t.sin()),
            CurveGeom::Segment { .. } => Vec2::new(-S::one(), S::zero()),
        }
    }

    /// Unit tangent in the direction of increasing parameter.
    pub fn tangent(&self, t: S) -> Vec2<S> {
        match self {
            CurveGeom::Circle { .. } => Vec2::new(-t.sin(), t.cos()),
            CurveGeom::Segment { .. } => Vec2::new(S::zero(), S::one()),
        }
    }

    /// |d point / d t|, the arc-length factor.
    pub fn arc_factor(&self) -> S {
        match self {
            CurveGeom::Circle { radius, .. } => *radius,
            CurveGeom::Segment { .. } => S::one(),
        }
    }

    pub fn length(&self) -> S {
        let (lo, hi) = self.param_range();
        (hi - lo) * self.arc_factor()
    }
}

/// Analytic trace shapes with the symmetry of the problem built in
/// (first component even, second odd under x2 -> -x2).
#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TraceKind {
    /// uniform radial field on a circle carrying the given flux
    Radial { flux: f64 },
    /// odd tangential slip on a circle (zero flux): amp sin(phi) tangent
    Tangential { amplitude: f64 },
    /// wall-to-wall parabolic inflow on the left wall carrying the flux
    Parabolic { flux: f64 },
    /// odd along-wall slip on the left wall (zero flux)
    WallSlip { amplitude: f64 },
}

/// Per-component boundary traces plus flux bookkeeping.
#[derive(Clone, Debug, Default)]
pub struct BoundaryData {
    pub traces: BTreeMap<CurveId, Vec<TraceKind>>,
}

impl BoundaryData {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, id: CurveId, kind: TraceKind) -> Self {
        self.traces.entry(id).or_default().push(kind);
        self
    }

    pub fn validate<S: Scalar>(&self, spec: &DomainSpec<S>) -> Result<()> {
        for (&id, kinds) in &self.traces {
            let is_circle = matches!(id, CurveId::Hole(_));
            if let CurveId::Hole(i) = id {
                if i >= spec.holes.len() {
                    return Err(Error::config(
                        format!("/boundary/{i}"),
                        "trace references a hole that does not exist",
                    ));
                }
            }
            for kind in kinds {
                let ok = match kind {
                    TraceKind::Radial { .. } | TraceKind::Tangential { .. } => is_circle,
                    TraceKind::Parabolic { .. } | TraceKind::WallSlip { .. } => !is_circle,
                };
                if !ok {
                    return Err(Error::config(
                        "/boundary",
                        format!("trace {kind:?} is not valid on {id:?}"),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Trace value at curve parameter t.
    pub fn eval<S: Scalar>(&self, spec: &DomainSpec<S>, id: CurveId, t: S) -> Vec2<S> {
        let geom = CurveGeom::for_curve(spec, id);
        let mut a = Vec2::zero();
        let Some(kinds) = self.traces.get(&id) else {
            return a;
        };
        for kind in kinds {
            match (*kind, geom) {
                (TraceKind::Radial { flux }, CurveGeom::Circle { radius, .. }) => {
                    // int a . n_out = -q 2 pi r  =>  q = -flux / (2 pi r)
                    let q = sc::<S>(-flux / (2.0 * std::f64::consts::PI))
                        / radius;
                    a = a + Vec2::new(t.cos(), t.sin()).scale(q);
                }
                (TraceKind::Tangential { amplitude }, CurveGeom::Circle { .. }) => {
                    a = a + geom.tangent(t).scale(sc::<S>(amplitude) * t.sin());
                }
                (TraceKind::Parabolic { flux }, CurveGeom::Segment { half_height, .. }) => {
                    // int a . (-e1) dx2 = flux  =>  peak = -3 flux / (4 W)
                    let peak = sc::<S>(-0.75 * flux) / half_height;
                    let u = t / half_height;
                    a = a + Vec2::new(peak * (S::one() - u * u), S::zero());
                }
                (TraceKind::WallSlip { amplitude }, CurveGeom::Segment { half_height, .. }) => {
                    let u = t / half_height;
                    let bump = (S::one() - u * u) * (S::one() - u * u);
                    a = a + Vec2::new(S::zero(), sc::<S>(amplitude) * u * bump);
                }
                _ => unreachable!("validated trace/curve pairing"),
            }
        }
        a
    }

    /// All boundary components of the domain, data-bearing or not.
    pub fn curves<S: Scalar>(spec: &DomainSpec<S>) -> Vec<CurveId> {
        let mut ids = vec![CurveId::Outer];
        ids.extend((0..spec.holes.len()).map(CurveId::Hole));
        ids
    }

    /// Flux of the trace over one component, by composite Gauss quadrature.
    pub fn flux<S: Scalar>(&self, spec: &DomainSpec<S>, id: CurveId) -> S {
        let data = |t: S| self.eval(spec, id, t);
        flux_over_curve(spec, id, &data)
    }

    pub fn total_flux<S: Scalar>(&self, spec: &DomainSpec<S>) -> S {
        Self::curves(spec)
            .into_iter()
            .fold(S::zero(), |acc, id| acc + self.flux(spec, id))
    }
}

/// Composite-Gauss flux of an arbitrary field over a boundary component:
/// 256 panels of order 6 (tolerance well under 1e-8 for smooth fields).
pub fn flux_over_curve<S: Scalar>(
    spec: &DomainSpec<S>,
    id: CurveId,
    field: &dyn Fn(S) -> Vec2<S>,
) -> S {
    let geom = CurveGeom::for_curve(spec, id);
    curve_integral(&geom, 256, &|t| field(t).dot(geom.normal_out(t)))
}

/// Integral of a scalar density over a curve (density given in the natural
/// parameter; the arc factor is applied here).
pub fn curve_integral<S: Scalar>(
    geom: &CurveGeom<S>,
    panels: usize,
    density: &dyn Fn(S) -> S,
) -> S {
    let (lo, hi) = geom.param_range();
    let (nodes, weights) = gauss_legendre(6);
    let step = (hi - lo) / sc::<S>(panels as f64);
    let mut acc = S::zero();
    for p in 0..panels {
        let a = lo + step * sc::<S>(p as f64);
        let half = step * sc::<S>(0.5);
        let mid = a + half;
        for (x, w) in nodes.iter().zip(weights.iter()) {
            let t = mid + half * sc::<S>(*x);
            acc += sc::<S>(*w) * density(t) * half;
        }
    }
    acc * geom.arc_factor()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{DomainSpec, Hole, OutletProfile, OutletSelector, ProfileKind};

    fn spec_two_holes() -> DomainSpec<f64> {
        let p = OutletProfile::new(ProfileKind::Constant { scale: 1.0 }, 0.5).unwrap();
        DomainSpec::new(
            p,
            0.5,
            OutletSelector::Out,
            4.0,
            vec![
                Hole {
                    center_x1: 1.2,
                    radius: 0.35,
                },
                Hole {
                    center_x1: 2.8,
                    radius: 0.45,
                },
            ],
        )
        .unwrap()
    }

    #[test]
    fn radial_trace_carries_requested_flux() {
        let spec = spec_two_holes();
        let data = BoundaryData::new().with(CurveId::Hole(0), TraceKind::Radial { flux: 2.0 });
        let f = data.flux(&spec, CurveId::Hole(0));
        assert!((f - 2.0).abs() < 1e-12, "{f}");
        assert_eq!(data.flux(&spec, CurveId::Hole(1)), 0.0);
    }

    #[test]
    fn parabolic_trace_carries_requested_flux() {
        let spec = spec_two_holes();
        let data = BoundaryData::new().with(CurveId::Outer, TraceKind::Parabolic { flux: -0.5 });
        let f = data.flux(&spec, CurveId::Outer);
        assert!((f + 0.5).abs() < 1e-12, "{f}");
    }

    #[test]
    fn tangential_and_slip_traces_have_zero_flux() {
        let spec = spec_two_holes();
        let data = BoundaryData::new()
            .with(CurveId::Hole(1), TraceKind::Tangential { amplitude: 0.7 })
            .with(CurveId::Outer, TraceKind::WallSlip { amplitude: 0.3 });
        assert!(data.flux(&spec, CurveId::Hole(1)).abs() < 1e-13);
        assert!(data.flux(&spec, CurveId::Outer).abs() < 1e-13);
    }

    #[test]
    fn traces_are_symmetric() {
        let spec = spec_two_holes();
        let data = BoundaryData::new()
            .with(CurveId::Hole(0), TraceKind::Radial { flux: 1.3 })
            .with(CurveId::Hole(0), TraceKind::Tangential { amplitude: 0.7 })
            .with(CurveId::Outer, TraceKind::Parabolic { flux: -0.5 })
            .with(CurveId::Outer, TraceKind::WallSlip { amplitude: 0.2 });
        for id in [CurveId::Hole(0), CurveId::Outer] {
            let geom = CurveGeom::for_curve(&spec, id);
            let (lo, hi) = geom.param_range();
            for k in 0..50 {
                let t = lo + (hi - lo) * (k as f64 + 0.31) / 50.0;
                let a = data.eval(&spec, id, t);
                let am = data.eval(&spec, id, -t);
                let p = geom.point(t);
                let pm = geom.point(-t);
                assert!((p.x1 - pm.x1).abs() < 1e-12 && (p.x2 + pm.x2).abs() < 1e-12);
                assert!((a.x1 - am.x1).abs() < 1e-12, "a1 must be even");
                assert!((a.x2 + am.x2).abs() < 1e-12, "a2 must be odd");
            }
        }
    }

    #[test]
    fn misplaced_trace_kind_is_rejected() {
        let spec = spec_two_holes();
        let bad = BoundaryData::new().with(CurveId::Outer, TraceKind::Radial { flux: 1.0 });
        assert!(bad.validate(&spec).is_err());
        let bad = BoundaryData::new().with(CurveId::Hole(0), TraceKind::Parabolic { flux: 1.0 });
        assert!(bad.validate(&spec).is_err());
    }
}
