//! Momentum-space toolkit for a three-step discrete-time quantum walk.
//!
//! The walk alternates two coin rotations C[θ₁], C[θ₂] with spin-dependent
//! shifts; in momentum space one Floquet period is a 2×2 unitary whose Bloch
//! vector (d₀, 0, d₂, d₃) carries the whole band structure. The crate builds
//! that unitary and, on top of it:
//!
//! * the gapped topological phase diagram over (θ₁, θ₂) with winding numbers
//!   w ∈ {±1, ±3} ([`phase_topology`]),
//! * the catalog of gapless (critical) lines and their multicritical
//!   intersection points, with linear/quadratic dispersion classification,
//! * the curvature function restricted to critical lines, Ornstein–Zernike
//!   peak fits and critical exponents γ, ν, z ([`criticality`]),
//! * the curvature renormalization-group flow on each critical-line family
//!   ([`rg_flow`]),
//! * Wannier-state correlations, group velocity and gapless winding numbers
//!   w_c ([`observables`]),
//! * a self-contained acceptance suite pinning all reproduction targets
//!   ([`acceptance`]).
//!
//! All quantities are pure functions of (θ₁, θ₂, k); everything parallelizes
//! over parameter grids without shared state. Angles are radians throughout.

pub mod acceptance;
pub mod criticality;
pub mod numerics;
pub mod observables;
pub mod phase_topology;
pub mod rg_flow;
pub mod walk_core;

mod error;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
