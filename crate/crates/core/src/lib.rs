//! Exact index calculus for strongly non-degenerate symplectic path data.
//!
//! * [`descriptor`] and [`index`]: Conley-Zehnder index and jump sequences
//!   from the loop, negative-hyperbolic and decorated elliptic invariants,
//!   the divisibility conditions and reconstruction from jumps.
//! * [`torus`]: eigenvalue vectors on the torus, the index cycle and signed
//!   intersection counts of lifted paths.
//! * [`cpn`]: rotations of complex projective space, recapped mean indices,
//!   marked action spectra, matching rotations and resonance relations.

pub mod angle;
pub mod cpn;
pub mod descriptor;
pub mod error;
pub mod index;
pub mod rational;
pub mod torus;

pub use angle::{Angle, Horizon};
pub use descriptor::{
    direct_sum, inverse, validate_descriptor, validate_right_limit, DecoratedEigenvalue,
    DescriptorSpec, EllipticSpec, PathDescriptor,
};
pub use error::{Error, Result};
pub use index::{
    check_condition_a, check_condition_b, cz_index, index_sequence, jump_a, jump_sequence,
    mean_index, reconstruct_from_jumps, ConditionA, ConditionB, IndexSequence, JumpSequence,
    Reconstruction,
};
pub use rational::Rational;
pub use torus::{
    arc_intersection, eigenvalue_vector, iterated_arc, path_intersection, translated_arc,
    verify_intersect_divisibility, IndexCycle, IntersectionReport, LiftedPath, LiftedPathSpec,
    TorusPoint,
};
pub use cpn::{
    action_spectrum, check_matching_hypotheses, floquet_multipliers, is_balanced,
    is_trivial_loop, make_rotation, matching_rotation, recapped_fixed_points, resonance_lattice,
    s2_antisymmetry_check, trivial_mean_indices, FixedPointTable, MarkedSpectrum, Rotation,
    RotationSpec, TableSpec,
};
