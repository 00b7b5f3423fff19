//! Lattice point enumerators, successive minima, and perturbation-stability
//! experiments for o-symmetric convex bodies against the integer lattice.
//!
//! The toolkit computes, at desk scale (dimension <= 6, brute force with
//! certificates):
//!
//! - gauge functions of boxes, L_p balls, and their non-singular linear
//!   images ([`geometry`]);
//! - exact lattice point counts and listings, the boundary gap of a box,
//!   and lattice-set comparison ([`enumeration`]);
//! - successive minima with integer witness vectors and the perturbation
//!   sandwich `lambda_i(K)/(1+eps) <= lambda_i(TK) <= lambda_i(K)/(1-eps')`
//!   ([`minima`]);
//! - both sides of the inequality `G(K) <= prod floor(2/lambda_i + 1)`
//!   (Betke-Henk-Wills) with its continuous envelope and box closed forms
//!   ([`bhw`]);
//! - rotation sweeps around boxes, the explicit stability radius
//!   `Delta / (sqrt(d)(alpha_1 + Delta))`, and the discrete-drop audit
//!   ([`stability`]);
//! - the L_p deformation thresholds and integer-hull verification
//!   ([`lp`]).
//!
//! Everything is deterministic under explicit seeds; counting and sweeps
//! may shard across threads without changing a single output byte. The
//! `latstab` binary exposes each experiment as a subcommand emitting JSON
//! or CSV reports; see the crate examples for library usage.

pub mod bhw;
pub mod enumeration;
pub mod error;
pub mod geometry;
pub mod lp;
pub mod minima;
pub mod report;
pub mod stability;

pub use bhw::{
    box_closed_forms, check_bhw, phi_envelope, rhs_floor_product, scalar_floor_lemma, BhwReport,
};
pub use enumeration::{
    boundary_gap_box, count_lattice_points, lattice_set_equal, list_lattice_points, CountReport,
    LatticePoint, SetComparison, DEFAULT_BUDGET,
};
pub use error::{Error, Result};
pub use geometry::{
    operator_norm, reduce_to_standard_lattice, rotation_2d, sample_rotation, transform_body,
    BoxBody, ConvexBody, LpBallBody, MembershipClass, SquareMatrix, TransformedBody, DEFAULT_TAU,
};
pub use lp::{
    lp_bhw_comparison, lp_threshold_report, p0_exact, p0_paper, verify_lp_hull_stability,
    HullStability, HullVerdict, LpThresholdReport,
};
pub use minima::{check_lipschitz_sandwich, integer_rank, successive_minima, MinimaResult};
pub use report::{Report, RunManifest};
pub use stability::{
    audit_radius_guarantee, rotation_sweep, stability_radius, RotationSweepRecord,
    StabilityRadiusReport,
};
