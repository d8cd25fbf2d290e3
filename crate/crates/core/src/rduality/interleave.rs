//! Index-doubling interleavings with zero vectors.

use crate::error::{Error, Result};
use crate::frames::VectorFamily;
use crate::numerics::CMatrix;

/// Builds a family whose slot `i` holds `h[src(i)]`, or zero for `None`.
fn rearrange(h: &VectorFamily, len: usize, src: impl Fn(usize) -> Option<usize>) -> Result<VectorFamily> {
    let t = h.synthesis_matrix();
    let mut out = CMatrix::zeros(h.dim(), len);
    for i in 0..len {
        if let Some(k) = src(i) {
            out.set_column(i, &t.column(k));
        }
    }
    VectorFamily::from_synthesis(out, h.label().to_string())
}

/// `{h_1, 0, h_2, 0, ...}`.
pub fn interleave_prime(h: &VectorFamily) -> Result<VectorFamily> {
    rearrange(h, 2 * h.len(), |i| (i % 2 == 0).then_some(i / 2))
}

/// `{0, h_1, 0, h_2, ...}`.
pub fn interleave_double_prime(h: &VectorFamily) -> Result<VectorFamily> {
    rearrange(h, 2 * h.len(), |i| (i % 2 == 1).then_some(i / 2))
}

fn check_cutoff(h: &VectorFamily, n: usize) -> Result<()> {
    if n > h.len() {
        Err(Error::BadCutoff {
            cutoff: n,
            len: h.len(),
        })
    } else {
        Ok(())
    }
}

/// `{h_1, 0, ..., h_n, 0, h_{n+1}, h_{n+2}, ...}`: interleaved up to slot `2n`, dense after.
pub fn interleave_star(h: &VectorFamily, n: usize) -> Result<VectorFamily> {
    check_cutoff(h, n)?;
    rearrange(h, h.len() + n, |i| {
        if i < 2 * n {
            (i % 2 == 0).then_some(i / 2)
        } else {
            Some(i - n)
        }
    })
}

/// `{0, h_1, ..., 0, h_n, h_{n+1}, h_{n+2}, ...}`.
pub fn interleave_double_star(h: &VectorFamily, n: usize) -> Result<VectorFamily> {
    check_cutoff(h, n)?;
    rearrange(h, h.len() + n, |i| {
        if i < 2 * n {
            (i % 2 == 1).then_some(i / 2)
        } else {
            Some(i - n)
        }
    })
}
