use super::scalar::ComplexScalar;
use crate::error::{Error, Result};

/// Outcome of a numerical Cauchy-Riemann check at one point.
///
/// For `f = u + iv` the two conditions are `du/dx = dv/dy` and
/// `du/dy = -dv/dx`; the residuals are the absolute defects of each.
#[derive(Clone, Copy, Debug)]
pub struct CauchyRiemannCheck {
    pub holds: bool,
    pub residual_ux_vy: f64,
    pub residual_uy_vx: f64,
}

/// Estimates the four partials of `f` at `z` by central differences with
/// step `h` and tests the Cauchy-Riemann equations against `tol`.
pub fn cauchy_riemann_check(
    f: impl Fn(ComplexScalar) -> ComplexScalar,
    z: ComplexScalar,
    h: f64,
    tol: f64,
) -> Result<CauchyRiemannCheck> {
    let eval = |p: ComplexScalar| -> Result<ComplexScalar> {
        let v = f(p);
        if !v.is_finite() {
            return Err(Error::NonFinite(format!("f({p}) in Cauchy-Riemann check")));
        }
        Ok(v)
    };

    let fxp = eval(ComplexScalar::new(z.re + h, z.im))?;
    let fxm = eval(ComplexScalar::new(z.re - h, z.im))?;
    let fyp = eval(ComplexScalar::new(z.re, z.im + h))?;
    let fym = eval(ComplexScalar::new(z.re, z.im - h))?;

    let du_dx = (fxp.re - fxm.re) / (2.0 * h);
    let dv_dx = (fxp.im - fxm.im) / (2.0 * h);
    let du_dy = (fyp.re - fym.re) / (2.0 * h);
    let dv_dy = (fyp.im - fym.im) / (2.0 * h);

    let residual_ux_vy = (du_dx - dv_dy).abs();
    let residual_uy_vx = (du_dy + dv_dx).abs();
    Ok(CauchyRiemannCheck {
        holds: residual_ux_vy <= tol && residual_uy_vx <= tol,
        residual_ux_vy,
        residual_uy_vx,
    })
}

/// Default step for the central differences.
pub const DEFAULT_CR_STEP: f64 = 1e-5;
/// Default residual tolerance, balancing truncation against round-off for
/// `f64` at the default step.
pub const DEFAULT_CR_TOL: f64 = 1e-4;
