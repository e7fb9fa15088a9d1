//! Lorenz cones whose base is a Dikin ellipsoid (or a central slice of one).
//!
//! The crate covers four pieces of machinery:
//!
//! - [`geometry`]: hyperplanes with complementary bases, Dikin ellipsoids,
//!   general ellipsoids and the ellipsoidal slice through the center.
//! - [`spectral`]: arrowhead eigenvalues by interlacing bisection, inertia,
//!   closed-form determinants and eigenvalue brackets for the constructed cones.
//! - [`cone`]: construction of the cone matrix from a Dikin base (general
//!   normal, coordinate axis, all-ones normal, sphere tangent), condition
//!   checks, standardization and membership.
//! - [`invariance`]: the scalar LMI certificate `QA + AᵀQ + aQ ⪯ 0`, boundary
//!   falsification and trajectory simulation for `ẋ = Ax`.
//!
//! The [`cli`] module backs the `conectl` binary.

pub mod cli;
pub mod cone;
pub mod error;
pub mod geometry;
pub mod invariance;
pub mod linalg;
pub mod mesh;
pub mod spectral;

pub use cone::{
    construct_axis, construct_general, construct_ones, construct_tangent_sphere,
    sandwich_decompose, ConditionResiduals, ConeConstruction, ConstructionKind, LorenzCone,
    Membership, Region, SandwichDecomposition, StandardLorenzCone, StandardizingTransform,
};
pub use error::{Error, Result};
pub use geometry::{
    complementary_basis, distance_to_hyperplane, ones_complement_basis, BoundarySampler,
    DikinEllipsoid, Ellipsoid, EllipsoidSlice, Hyperplane,
};
pub use invariance::{
    certificate_scan, certify_cone, certify_ellipsoid, nagumo_falsify, simulate, Integrator,
    InvarianceCertificate, LinearSystem, NagumoCounterexample, ScanPoint, SimulationOptions,
    TargetSet, TrajectoryRecord,
};
pub use spectral::{
    arrowhead_charpoly, arrowhead_eigenvalues, det_axis_cone, det_identity_plus_rank_one,
    equal_c_spectrum, inertia, lambda1_bounds_axis_cone, rank_one_spectrum, ArrowheadMatrix,
    Inertia, RankOneSpectrum, SpectralReport,
};
