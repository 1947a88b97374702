//! Domain geometry: outlet profiles, the truncation ladder, the symmetric
//! domain with holes, and structured meshes of the truncations.

pub mod domain;
pub mod ladder;
pub mod mesh;
pub mod profile;

pub use domain::{BoundaryTag, DomainSpec, Hole, OutletSelector, RegionTag};
pub use ladder::{
    build_ladder, integral_g_minus3, integral_g_minus3_finite, verify_109_chain, verify_sandwich,
    Gm3Integral, TailCase, TruncationLadder,
};
pub use mesh::{mesh_truncation, MeshBoundaryTag, TruncationMesh};
pub use profile::{OutletProfile, ProfileKind};
