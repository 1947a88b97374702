//! Structured cut-cell meshes of the truncations Omega_k: a tensor grid on
//! the strip map (s, t) -> (s, t W(s)) with hole cells removed.

use super::domain::DomainSpec;
use super::ladder::TruncationLadder;
use crate::scalar::{sc, Scalar, Vec2};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MeshBoundaryTag {
    LeftWall,
    OuterWall,
    /// artificial boundary sigma(R_k)
    Truncation,
    Hole(usize),
}

#[derive(Clone, Debug)]
pub struct TruncationMesh<S> {
    /// truncation level this mesh covers (Omega_k)
    pub level: usize,
    /// s-direction cell boundaries; ladder radii appear exactly
    pub s_breaks: Vec<S>,
    /// number of t-direction cells (even; t = 0 is a node row)
    pub nt: usize,
    pub nodes: Vec<Vec2<S>>,
    /// active (fluid) cells as node-id quads, CCW
    pub cells: Vec<[usize; 4]>,
    /// hole ownership of removed cells, for diagnostics
    pub removed: Vec<(usize, usize, usize)>,
    /// boundary edges (node a, node b, tag)
    pub boundary: Vec<(usize, usize, MeshBoundaryTag)>,
    /// mirror partner of each node (axis nodes map to themselves)
    pub mirror: Vec<usize>,
    /// node chains along sigma(R_m) for each ladder radius R_m <= R_k
    pub sigma_chains: Vec<Vec<usize>>,
    pub h_target: S,
}

impl<S: Scalar> TruncationMesh<S> {
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn cell_count(&self) -> usize {
        self.cells.len()
    }

    /// Euler characteristic V - E + F of the active cell complex.
    pub fn euler_characteristic(&self) -> isize {
        use std::collections::HashSet;
        let mut verts: HashSet<usize> = HashSet::new();
        let mut edges: HashSet<(usize, usize)> = HashSet::new();
        for c in &self.cells {
            for i in 0..4 {
                verts.insert(c[i]);
                let a = c[i];
                let b = c[(i + 1) % 4];
                edges.insert((a.min(b), a.max(b)));
            }
        }
        verts.len() as isize - edges.len() as isize + self.cells.len() as isize
    }
}

/// Mesh Omega_k with target cell size h. Returns a mesh whose boundary tags
/// partition the boundary and whose node set is exactly mirror-paired.
pub fn mesh_truncation<S: Scalar>(
    spec: &DomainSpec<S>,
    ladder: &TruncationLadder<S>,
    k: usize,
    h: S,
) -> Result<TruncationMesh<S>> {
    if k > ladder.levels() {
        return Err(Error::Geometry(format!(
            "truncation level {k} exceeds ladder ({} levels)",
            ladder.levels()
        )));
    }
    if h <= S::zero() {
        return Err(Error::Geometry("cell size must be positive".into()));
    }
    // s breakpoints: core [x_left, R0], then ladder cells up to R_k
    let mut s_breaks = vec![spec.x_left];
    let extend = |from: S, to: S, breaks: &mut Vec<S>| {
        let len = to - from;
        let n = (len / h).to_f64_lossy().ceil().max(1.0) as usize;
        for i in 1..=n {
            breaks.push(from + len * sc::<S>(i as f64 / n as f64));
        }
    };
    extend(spec.x_left, ladder.radii[0], &mut s_breaks);
    for m in 0..k {
        extend(ladder.radii[m], ladder.radii[m + 1], &mut s_breaks);
    }
    let ns = s_breaks.len() - 1;
    // transverse resolution from the widest section
    let mut w_max = S::zero();
    for i in 0..=ns {
        w_max = w_max.max(spec.wall_half_width(s_breaks[i]));
    }
    let nt = ((w_max * sc::<S>(2.0) / h).to_f64_lossy().ceil() as usize).max(2);
    let nt = nt + nt % 2; // even: axis is a node row

    // nodes (all structured positions kept; cells reference them)
    let mut nodes = Vec::with_capacity((ns + 1) * (nt + 1));
    for i in 0..=ns {
        let s = s_breaks[i];
        let w = spec.wall_half_width(s);
        for j in 0..=nt {
            let t = sc::<S>(-1.0 + 2.0 * j as f64 / nt as f64);
            nodes.push(Vec2::new(s, t * w));
        }
    }
    let nid = |i: usize, j: usize| i * (nt + 1) + j;

    // cell activity: removed if center inside a hole
    let mut active = vec![true; ns * nt];
    let mut hole_of = vec![None::<usize>; ns * nt];
    let mut removed = Vec::new();
    let mut removed_per_hole = vec![0usize; spec.holes.len()];
    for ci in 0..ns {
        let s_c = (s_breaks[ci] + s_breaks[ci + 1]) * sc::<S>(0.5);
        let w_c = spec.wall_half_width(s_c);
        for cj in 0..nt {
            let t_c = sc::<S>(-1.0 + 2.0 * (cj as f64 + 0.5) / nt as f64);
            let p = Vec2::new(s_c, t_c * w_c);
            for (hi, _) in spec.holes.iter().enumerate() {
                if spec.hole_contains(hi, p) {
                    active[ci * nt + cj] = false;
                    hole_of[ci * nt + cj] = Some(hi);
                    removed.push((ci, cj, hi));
                    removed_per_hole[hi] += 1;
                    break;
                }
            }
        }
    }
    // resolution checks: every hole must remove cells, removed cells must not
    // touch the outer rows/columns, and distinct holes must not be adjacent
    for (hi, &cnt) in removed_per_hole.iter().enumerate() {
        if cnt == 0 {
            return Err(Error::Geometry(format!(
                "mesh resolution: hole {hi} is smaller than the cell size"
            )));
        }
    }
    for &(ci, cj, hi) in &removed {
        if ci == 0 || ci + 1 == ns || cj == 0 || cj + 1 == nt {
            return Err(Error::Geometry(format!(
                "mesh resolution: hole {hi} overlaps the outer boundary at this h"
            )));
        }
        let neighbors = [(ci - 1, cj), (ci + 1, cj), (ci, cj - 1), (ci, cj + 1)];
        for (ni, nj) in neighbors {
            if let Some(other) = hole_of[ni * nt + nj] {
                if other != hi {
                    return Err(Error::Geometry(format!(
                        "mesh resolution: holes {hi} and {other} merge at this h"
                    )));
                }
            }
        }
    }

    // active cells and boundary edges
    let mut cells = Vec::new();
    let mut boundary = Vec::new();
    for ci in 0..ns {
        for cj in 0..nt {
            if !active[ci * nt + cj] {
                continue;
            }
            let q = [
                nid(ci, cj),
                nid(ci + 1, cj),
                nid(ci + 1, cj + 1),
                nid(ci, cj + 1),
            ];
            cells.push(q);
            // left edge
            if ci == 0 {
                boundary.push((q[0], q[3], MeshBoundaryTag::LeftWall));
            } else if !active[(ci - 1) * nt + cj] {
                let hi = hole_of[(ci - 1) * nt + cj].unwrap();
                boundary.push((q[0], q[3], MeshBoundaryTag::Hole(hi)));
            }
            // right edge
            if ci + 1 == ns {
                boundary.push((q[1], q[2], MeshBoundaryTag::Truncation));
            } else if !active[(ci + 1) * nt + cj] {
                let hi = hole_of[(ci + 1) * nt + cj].unwrap();
                boundary.push((q[1], q[2], MeshBoundaryTag::Hole(hi)));
            }
            // bottom edge
            if cj == 0 {
                boundary.push((q[0], q[1], MeshBoundaryTag::OuterWall));
            } else if !active[ci * nt + cj - 1] {
                let hi = hole_of[ci * nt + cj - 1].unwrap();
                boundary.push((q[0], q[1], MeshBoundaryTag::Hole(hi)));
            }
            // top edge
            if cj + 1 == nt {
                boundary.push((q[3], q[2], MeshBoundaryTag::OuterWall));
            } else if !active[ci * nt + cj + 1] {
                let hi = hole_of[ci * nt + cj + 1].unwrap();
                boundary.push((q[3], q[2], MeshBoundaryTag::Hole(hi)));
            }
        }
    }

    // mirror pairing
    let mut mirror = vec![0usize; nodes.len()];
    for i in 0..=ns {
        for j in 0..=nt {
            mirror[nid(i, j)] = nid(i, nt - j);
        }
    }

    // sigma chains at each ladder radius present in the mesh
    let mut sigma_chains = Vec::new();
    for m in 0..=k {
        let r = ladder.radii[m];
        let idx = s_breaks
            .iter()
            .position(|&s| (s - r).abs() <= sc::<S>(1e-12) * (S::one() + r.abs()))
            .ok_or_else(|| Error::Numeric("ladder radius missing from s-grid".into()))?;
        sigma_chains.push((0..=nt).map(|j| nid(idx, j)).collect());
    }

    Ok(TruncationMesh {
        level: k,
        s_breaks,
        nt,
        nodes,
        cells,
        removed,
        boundary,
        mirror,
        sigma_chains,
        h_target: h,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::domain::{DomainSpec, Hole, OutletSelector};
    use crate::geometry::ladder::build_ladder;
    use crate::geometry::profile::{OutletProfile, ProfileKind};

    fn channel(holes: Vec<Hole>) -> (DomainSpec<f64>, TruncationLadder<f64>) {
        let p = OutletProfile::new(ProfileKind::Constant { scale: 1.0 }, 0.5).unwrap();
        let spec = DomainSpec::new(p, 0.5, OutletSelector::Out, 4.0, holes).unwrap();
        let ladder = build_ladder(&spec.profile, 4.0, 5).unwrap();
        (spec, ladder)
    }

    #[test]
    fn channel_mesh_is_mirror_paired_rectangle_strip() {
        let (spec, ladder) = channel(vec![]);
        let mesh = mesh_truncation(&spec, &ladder, 1, 0.25).unwrap();
        // involution, axis row self-paired
        for (id, &m) in mesh.mirror.iter().enumerate() {
            assert_eq!(mesh.mirror[m], id);
            let a = mesh.nodes[id];
            let b = mesh.nodes[m];
            assert!((a.x1 - b.x1).abs() < 1e-14);
            assert!((a.x2 + b.x2).abs() < 1e-14);
        }
        let self_paired = mesh.mirror.iter().enumerate().filter(|(i, &m)| *i == m).count();
        // exactly the axis row
        assert_eq!(self_paired, mesh.s_breaks.len());
        assert_eq!(mesh.euler_characteristic(), 1);
    }

    #[test]
    fn hole_crossing_axis_gives_annulus_topology() {
        let (spec, ladder) = channel(vec![Hole {
            center_x1: 2.0,
            radius: 0.45,
        }]);
        let mesh = mesh_truncation(&spec, &ladder, 1, 0.1).unwrap();
        assert_eq!(mesh.euler_characteristic(), 0, "one hole => chi = 0");
        let hole_edges = mesh
            .boundary
            .iter()
            .filter(|(_, _, t)| matches!(t, MeshBoundaryTag::Hole(0)))
            .count();
        assert!(hole_edges > 8, "hole boundary must be tagged");
    }

    #[test]
    fn refinement_quadruples_cell_count() {
        let (spec, ladder) = channel(vec![]);
        let coarse = mesh_truncation(&spec, &ladder, 2, 0.2).unwrap();
        let fine = mesh_truncation(&spec, &ladder, 2, 0.1).unwrap();
        let ratio = fine.cell_count() as f64 / coarse.cell_count() as f64;
        assert!((3.5..=4.5).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn too_coarse_hole_is_a_resolution_error() {
        let (spec, ladder) = channel(vec![Hole {
            center_x1: 2.0,
            radius: 0.45,
        }]);
        // cells of size 1.0 cannot resolve a radius-0.45 hole cleanly:
        // either no cell is removed or the staircase touches the wall
        assert!(mesh_truncation(&spec, &ladder, 1, 1.0).is_err());
    }

    #[test]
    fn sigma_chains_are_vertical_node_columns() {
        let (spec, ladder) = channel(vec![]);
        let mesh = mesh_truncation(&spec, &ladder, 2, 0.25).unwrap();
        assert_eq!(mesh.sigma_chains.len(), 3);
        for (m, chain) in mesh.sigma_chains.iter().enumerate() {
            for &id in chain {
                assert!((mesh.nodes[id].x1 - ladder.radii[m]).abs() < 1e-12);
            }
            assert_eq!(chain.len(), mesh.nt + 1);
        }
    }

    #[test]
    fn boundary_tags_partition_the_boundary() {
        use std::collections::HashMap;
        let (spec, ladder) = channel(vec![Hole {
            center_x1: 2.0,
            radius: 0.45,
        }]);
        let mesh = mesh_truncation(&spec, &ladder, 1, 0.1).unwrap();
        // each boundary edge appears exactly once with exactly one tag
        let mut seen: HashMap<(usize, usize), usize> = HashMap::new();
        for (a, b, _) in &mesh.boundary {
            *seen.entry((*a.min(b), *a.max(b))).or_default() += 1;
        }
        assert!(seen.values().all(|&c| c == 1));
        // and they are exactly the edges shared by one active cell
        let mut edge_count: HashMap<(usize, usize), usize> = HashMap::new();
        for c in &mesh.cells {
            for i in 0..4 {
                let (a, b) = (c[i], c[(i + 1) % 4]);
                *edge_count.entry((a.min(b), a.max(b))).or_default() += 1;
            }
        }
        let boundary_edges: Vec<_> = edge_count
            .iter()
            .filter(|(_, &c)| c == 1)
            .map(|(&e, _)| e)
            .collect();
        assert_eq!(boundary_edges.len(), seen.len());
        for e in boundary_edges {
            assert!(seen.contains_key(&e));
        }
    }
}
