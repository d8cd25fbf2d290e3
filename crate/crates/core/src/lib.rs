//! Weak R-duals of finite frames.
//!
//! A family `w` is a weak R-dual of a frame `f` with respect to Parseval
//! families `u` and `v` when `w_j = sum_i <f_i, u_j> v_i` and
//! `(G(v, v)^t - I) G(f, u) = 0`. This crate certifies that relation,
//! constructs the families the theory promises, and runs the finite Gabor
//! experiments around it.

pub mod error;
pub mod fixtures;
pub mod frames;
pub mod gabor;
pub mod numerics;
pub mod rduality;
pub mod sampling;

pub use error::{Error, Result};
pub use frames::{CrossGram, FrameAnalysis, VectorFamily};
pub use numerics::{CMatrix, CVector, Tolerance, C64};
