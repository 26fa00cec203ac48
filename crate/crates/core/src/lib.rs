//! Differential geometry of space curves in 3-dimensional gauge spaces.
//!
//! A gauge (convex distance function) is positive, positively homogeneous and
//! subadditive, but need not be symmetric. Its unit sphere is assumed smooth and
//! strictly convex. Along a regular curve the crate builds the moving basis
//! `{e1, e1', v}` where `v` is the Birkhoff normal of the osculating plane,
//! decomposes `e1''` and `v'` in it, and derives a Frenet-type frame together with
//! four invariants `I1..I4` that do not depend on the remaining frame freedom.
//!
//! The crate is `no_std` and only needs `alloc` for grid-valued results.

#![no_std]
// `!(x > 0.0)` is used on purpose: it also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod curve;
pub mod error;
pub mod frame;
pub mod gauge;
pub mod invariants;
pub mod numerics;
pub mod translation;

pub use curve::{ArcJet, Curve, CurveJet};
pub use error::{Error, Result};
pub use frame::{FrameCoefficients, FrameFreedom, FrenetFrame};
pub use gauge::{
    EllipsoidGauge, EuclideanGauge, Gauge, ImplicitGauge, RandersGauge, TranslatedGauge,
};
pub use invariants::{CurveClass, Invariants};
pub use numerics::{ToleranceConfig, Vec3};
