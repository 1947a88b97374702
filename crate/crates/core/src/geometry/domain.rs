//! The symmetric domain: bounded core with circular holes on the axis plus
//! one outlet to infinity, and deterministic point classification.

use super::ladder::TruncationLadder;
use super::profile::OutletProfile;
use crate::scalar::{sc, Scalar, Vec2};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// Circular hole centered on the symmetry axis.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct Hole {
    pub center_x1: f64,
    pub radius: f64,
}

/// Which outlet the domain actually uses; D^(in) is the gamma-shrunk one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutletSelector {
    In,
    Out,
}

/// Symmetric domain:0 < x1, |x2| < W(x1), minus the holes. The outer
/// boundary is the left wall at x1 = 0 joined to the outlet walls; every
/// boundary component crosses the x1-axis.
#[derive(Clone, Debug)]
pub struct DomainSpec<S> {
    pub profile: OutletProfile<S>,
    pub gamma: S,
    pub selector: OutletSelector,
    /// Junction abscissa separating the bounded core from the outlet.
    pub r0: S,
    pub holes: Vec<Hole>,
    pub x_left: S,
}

/// Region tag returned by `classify_point`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RegionTag {
    Omega0,
    /// ladder cell omega_k
    OmegaCell(usize),
    /// inside the outlet beyond the built ladder
    OutletBeyond,
    Exterior,
    Boundary(BoundaryTag),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundaryTag {
    LeftWall,
    OuterWall,
    Hole(usize),
}

impl<S: Scalar> DomainSpec<S> {
    pub fn new(
        profile: OutletProfile<S>,
        gamma: S,
        selector: OutletSelector,
        r0: S,
        holes: Vec<Hole>,
    ) -> Result<Self> {
        if gamma <= S::zero() {
            return Err(Error::Geometry("gamma must be positive".into()));
        }
        if r0 <= profile.r_star {
            return Err(Error::Geometry(
                "junction abscissa R0 must exceed the outlet start R_*".into(),
            ));
        }
        let spec = Self {
            profile,
            gamma,
            selector,
            r0,
            holes,
            x_left: S::zero(),
        };
        spec.assert_invariants()?;
        Ok(spec)
    }

    /// Half-width of the domain wall at abscissa x1.
    pub fn wall_half_width(&self, x1: S) -> S {
        let g = self.profile.g(x1);
        match self.selector {
            OutletSelector::Out => g,
            OutletSelector::In => self.gamma / (self.gamma + S::one()) * g,
        }
    }

    /// Height of the gamma-curve x2 = gamma/(gamma+1) g(x1).
    pub fn gamma_curve(&self, x1: S) -> S {
        self.gamma / (self.gamma + S::one()) * self.profile.g(x1)
    }

    pub fn hole_contains(&self, i: usize, p: Vec2<S>) -> bool {
        let h = &self.holes[i];
        let dx = p.x1 - sc::<S>(h.center_x1);
        dx * dx + p.x2 * p.x2 < sc::<S>(h.radius * h.radius)
    }

    pub fn inside(&self, p: Vec2<S>) -> bool {
        if p.x1 <= self.x_left {
            return false;
        }
        if p.x2.abs() >= self.wall_half_width(p.x1) {
            return false;
        }
        for i in 0..self.holes.len() {
            if self.hole_contains(i, p) {
                return false;
            }
        }
        true
    }

    /// Rough domain diameter up to the top of the ladder; used to scale the
    /// boundary classification tolerance.
    pub fn diameter(&self, ladder: &TruncationLadder<S>) -> S {
        let span = ladder.top() - self.x_left;
        let mut w_max = S::zero();
        for i in 0..=64 {
            let x1 = self.x_left + span * sc::<S>(i as f64 / 64.0);
            w_max = w_max.max(self.wall_half_width(x1));
        }
        span.max(sc::<S>(2.0) * w_max)
    }

    /// Signed distance-like proximity to the nearest boundary piece along
    /// with its tag (exact for holes and the left wall, vertical-distance
    /// proxy for the outlet walls, adequate for the tolerance band).
    fn boundary_proximity(&self, p: Vec2<S>) -> (S, BoundaryTag) {
        let mut best = (p.x1 - self.x_left).abs();
        let mut tag = BoundaryTag::LeftWall;
        let wall = (self.wall_half_width(p.x1) - p.x2.abs()).abs();
        if wall < best {
            best = wall;
            tag = BoundaryTag::OuterWall;
        }
        for (i, h) in self.holes.iter().enumerate() {
            let dx = p.x1 - sc::<S>(h.center_x1);
            let d = (dx * dx + p.x2 * p.x2).sqrt() - sc::<S>(h.radius);
            if d.abs() < best {
                best = d.abs();
                tag = BoundaryTag::Hole(i);
            }
        }
        (best, tag)
    }

    /// Deterministic region tag with a documented tolerance band of
    /// 1e-9 x diameter around the boundary.
    pub fn classify_point(&self, ladder: &TruncationLadder<S>, p: Vec2<S>) -> RegionTag {
        let tol = sc::<S>(1e-9) * self.diameter(ladder);
        let (d, tag) = self.boundary_proximity(p);
        if d <= tol {
            return RegionTag::Boundary(tag);
        }
        if !self.inside(p) {
            return RegionTag::Exterior;
        }
        if p.x1 < ladder.radii[0] {
            return RegionTag::Omega0;
        }
        match ladder.cell_of(p.x1) {
            Some(k) => RegionTag::OmegaCell(k),
            None => RegionTag::OutletBeyond,
        }
    }

    fn assert_invariants(&self) -> Result<()> {
        // holes: positive radius (axis crossing), pairwise disjoint, inside the core
        for (i, h) in self.holes.iter().enumerate() {
            if h.radius <= 0.0 {
                return Err(Error::Geometry(format!(
                    "hole {i} has nonpositive radius (must cross the axis)"
                )));
            }
            let lo = h.center_x1 - h.radius;
            let hi = h.center_x1 + h.radius;
            if sc::<S>(lo) <= self.x_left || sc::<S>(hi) >= self.r0 {
                return Err(Error::Geometry(format!(
                    "hole {i} not contained in the bounded core (0, R0)"
                )));
            }
            // must not touch the walls
            for j in 0..=32 {
                let x1 = sc::<S>(lo + (hi - lo) * j as f64 / 32.0);
                let top = sc::<S>(h.radius * h.radius)
                    - (x1 - sc::<S>(h.center_x1)) * (x1 - sc::<S>(h.center_x1));
                let top = top.max(S::zero()).sqrt();
                if top >= self.wall_half_width(x1) {
                    return Err(Error::Geometry(format!("hole {i} touches the outer wall")));
                }
            }
            for (j, other) in self.holes.iter().enumerate() {
                if j > i {
                    let gap = (other.center_x1 - h.center_x1).abs();
                    if gap <= h.radius + other.radius {
                        return Err(Error::Geometry(format!("holes {i} and {j} overlap")));
                    }
                }
            }
        }
        Ok(())
    }

    /// Index of the hole nearest to the outlet (Gamma_N); None if there are
    /// no holes, in which case the outer boundary takes that role.
    pub fn last_hole(&self) -> Option<usize> {
        (0..self.holes.len()).max_by(|&a, &b| {
            self.holes[a]
                .center_x1
                .partial_cmp(&self.holes[b].center_x1)
                .unwrap()
        })
    }

    /// Assert that the curve x2 = gamma/(gamma+1) g(x1) crosses the last
    /// inner boundary, which lets the outlet carrier pick up the flux there.
    /// With no holes the drain starts from the left wall, which the curve
    /// always meets.
    pub fn assert_gamma_crossing(&self) -> Result<()> {
        let Some(n) = self.last_hole() else {
            return Ok(());
        };
        let h = self.holes[n];
        let mut saw_above = false;
        let mut saw_below = false;
        for j in 0..=256 {
            let x1 = h.center_x1 - h.radius + 2.0 * h.radius * j as f64 / 256.0;
            let dx = x1 - h.center_x1;
            let top = (h.radius * h.radius - dx * dx).max(0.0).sqrt();
            let curve = self.gamma_curve(sc::<S>(x1)).to_f64_lossy();
            if top > curve {
                saw_above = true;
            } else {
                saw_below = true;
            }
        }
        if saw_above && saw_below {
            Ok(())
        } else {
            Err(Error::Geometry(format!(
                "gamma-curve does not cross the last hole (hole {n}); adjust gamma or the hole"
            )))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::ladder::build_ladder;
    use crate::geometry::profile::ProfileKind;
    use crate::rng::SplitMix;

    fn channel_spec(holes: Vec<Hole>) -> DomainSpec<f64> {
        let p = OutletProfile::new(ProfileKind::Constant { scale: 1.0 }, 0.5).unwrap();
        DomainSpec::new(p, 0.5, OutletSelector::Out, 4.0, holes).unwrap()
    }

    #[test]
    fn axis_point_in_core_is_omega0() {
        let spec = channel_spec(vec![]);
        let ladder = build_ladder(&spec.profile, 4.0, 4).unwrap();
        assert_eq!(
            spec.classify_point(&ladder, Vec2::new(1.0, 0.0)),
            RegionTag::Omega0
        );
    }

    #[test]
    fn just_past_rk_lands_in_cell_k() {
        let spec = channel_spec(vec![]);
        let ladder = build_ladder(&spec.profile, 4.0, 4).unwrap();
        for k in 0..4 {
            let x = Vec2::new(ladder.radii[k] + 1e-3, 0.0);
            assert_eq!(spec.classify_point(&ladder, x), RegionTag::OmegaCell(k));
        }
    }

    #[test]
    fn classification_is_mirror_symmetric() {
        let spec = channel_spec(vec![Hole {
            center_x1: 1.5,
            radius: 0.4,
        }]);
        let ladder = build_ladder(&spec.profile, 4.0, 4).unwrap();
        let mut rng = SplitMix::new(99);
        for _ in 0..1000 {
            let p = Vec2::new(rng.uniform(-0.5, 9.0), rng.uniform(-1.5, 1.5));
            assert_eq!(
                spec.classify_point(&ladder, p),
                spec.classify_point(&ladder, p.mirror()),
                "asymmetric tag at {p:?}"
            );
        }
    }

    #[test]
    fn overlapping_holes_are_rejected() {
        let p = OutletProfile::new(ProfileKind::Constant { scale: 1.0 }, 0.5).unwrap();
        let bad = DomainSpec::new(
            p,
            0.5,
            OutletSelector::Out,
            4.0,
            vec![
                Hole {
                    center_x1: 1.0,
                    radius: 0.4,
                },
                Hole {
                    center_x1: 1.5,
                    radius: 0.4,
                },
            ],
        );
        assert!(bad.is_err());
    }

    #[test]
    fn gamma_crossing_detects_both_outcomes() {
        // big hole near the junction: the gamma-curve (height ~ g/3) crosses it
        let spec = channel_spec(vec![Hole {
            center_x1: 3.0,
            radius: 0.6,
        }]);
        // wall g = 1, gamma = 0.5 -> curve height 1/3 < 0.6 peak
        spec.assert_gamma_crossing().unwrap();
        // tiny hole fully below the curve: no crossing
        let spec = channel_spec(vec![Hole {
            center_x1: 3.0,
            radius: 0.2,
        }]);
        assert!(spec.assert_gamma_crossing().is_err());
    }
}
