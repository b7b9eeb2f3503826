//! Geometric-algebra steering of the `(3,6)` and `(4,7)` step-2 Carnot
//! groups: a dense Clifford algebra kernel, rotor alignment of complete
//! flags, closed-form geodesics and their SO(3) moduli invariants, a
//! multistart Newton solver on the moduli space and an end-to-end steering
//! pipeline.

pub mod align;
pub mod error;
pub mod ga;
pub mod io;
pub mod models;
pub mod rk4;
pub mod solver;
pub mod steer;

pub use align::{
    align_bases, align_flags, align_flags_with_steps, flag_from_basis, frame_flag, frame_flag_36,
    frame_flag_47, rotor_between_vectors, Flag, FramePair,
};
pub use error::{Error, Result};
pub use ga::{Multivector, Rotor};
pub use models::{GeodesicParams, Invariants, Model, Point};
pub use solver::{solve, SolveRequest, SolveResult, Solution};
pub use steer::{steer, verify, SteerOptions, SteerReport};
