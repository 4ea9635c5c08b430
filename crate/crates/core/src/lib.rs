//! Exact construction and classification of the finite-dimensional blocks
//! that arise when a cubic NLS Hamiltonian on a torus is put in normal form
//! around a family of tangential sites.
//!
//! The pipeline, bottom to top:
//!
//! * [`lattice`]: the group `Z^m x| Z/2`, vertex colors, quadratic and scalar
//!   energies, edge rules and tangential site families.
//! * [`poly`]: exact multivariate polynomials over big integers, determinants,
//!   root elimination, and univariate factorization (mod p and over Z).
//! * [`graphs`]: enumeration and classification of the combinatorial colored
//!   marked graphs (degeneracy, resonance, allowability, projections).
//! * [`blocks`]: the block matrix of a graph and its characteristic
//!   polynomial in `Z[xi, t]`, with translation and twist covariance.
//! * [`certify`]: irreducibility and separation certificates for the
//!   characteristic polynomials.
//! * [`geometry`]: exact solving of the geometric realization equations of a
//!   graph over a site family.
//! * [`spectral`]: floating-point spectra of blocks on the positive cone and
//!   search for elliptic (all-real, separated) frequency regions.
//! * [`verify`]: the end-to-end checks wired into the CLI and the acceptance
//!   suite.

pub mod error;
pub mod lattice;
pub mod poly;
pub mod graphs;
pub mod blocks;
pub mod certify;
pub mod geometry;
pub mod spectral;
pub mod verify;

pub use error::{GeometryError, GraphError, PolyError, SpectralError};
pub use lattice::{
    edge_between, edge_between_colored, quad_energy, scalar_energy, Color, EdgeKind, GroupElement,
    QuadForm, TangentialSites,
};
pub use poly::{Mono, MultiPoly};
pub use graphs::{
    complete_closure, enumerate_graphs, ColoredGraph, GraphClass, MarkedGraph, RelationBasis,
};
pub use blocks::{build_matrix, charpoly_block, translate_block, BlockMatrix};
pub use certify::{
    certify_irreducible, separation_check, specialization_tree, Certificate, Verdict,
};
pub use geometry::{
    avoidable_constraint, geometric_edges, random_generic_sites, realization_system,
    realized_points, solve_realization, RealizationSystem, RealizationVerdict,
};
pub use spectral::{
    eigenvalues_at, eigenvalues_marked, homogeneity_check, search_elliptic, simplex_grid,
    EllipticReport, SpectrumSample,
};
pub use verify::{all_passed, run_all, run_criterion, CriterionOutcome};
