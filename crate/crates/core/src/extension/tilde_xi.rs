//! The solenoidal unit-drain field built from the outlet cutoff: the rotated
//! gradient of xi in the upper half, mirrored symmetrically below the axis.
//! Every cross-section carries flux exactly 2.

use crate::cutoffs::OutletCutoff;
use crate::scalar::{Mat2, Scalar, Vec2};
use crate::Result;

/// Value of the drain field at x (any sign of x2).
pub fn tilde_xi<S: Scalar>(cutoff: &OutletCutoff<S>, x: Vec2<S>) -> Result<Vec2<S>> {
    if x.x2 >= S::zero() {
        let d = cutoff.eval_full(x)?;
        Ok(Vec2::new(-d.grad.x2, d.grad.x1))
    } else {
        let d = cutoff.eval_full(x.mirror())?;
        Ok(Vec2::new(-d.grad.x2, -d.grad.x1))
    }
}

/// Value and spatial gradient of the drain field.
pub fn tilde_xi_with_grad<S: Scalar>(
    cutoff: &OutletCutoff<S>,
    x: Vec2<S>,
) -> Result<(Vec2<S>, Mat2<S>)> {
    if x.x2 >= S::zero() {
        let d = cutoff.eval_full(x)?;
        let val = Vec2::new(-d.grad.x2, d.grad.x1);
        let grad = Mat2 {
            a11: -d.d12, // d/dx1 of -xi_2
            a12: -d.d22, // d/dx2 of -xi_2
            a21: d.d11,  // d/dx1 of  xi_1
            a22: d.d12,  // d/dx2 of  xi_1
        };
        Ok((val, grad))
    } else {
        let d = cutoff.eval_full(x.mirror())?;
        let val = Vec2::new(-d.grad.x2, -d.grad.x1);
        // components are f(x1, -x2) of the upper-half fields
        let grad = Mat2 {
            a11: -d.d12,
            a12: d.d22,
            a21: -d.d11,
            a22: d.d12,
        };
        Ok((val, grad))
    }
}
