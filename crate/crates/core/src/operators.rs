//! Momentum-space operators acting on [`GridSpinorField`]s.
//!
//! Position acts as `x = i d/dp` (so that `<x|p> = exp(ipx)/sqrt(2 pi)`).
//! With that convention the Dirac time-of-arrival operator reads
//!
//! ```text
//! T = (1/p) (alpha_1 p + beta m) (-i d/dp) + i beta m / (2 p^2)
//! ```
//!
//! and the nonrelativistic one `T_non = -(m/2) (p^-1 x + x p^-1)`.

use crate::error::{Error, Result};
use crate::grid::{DerivOrder, GridSpinorField};
use crate::spinor::{alpha1_apply, beta_apply, hamiltonian_apply, Spinor4, C64};

const I: C64 = C64::new(0.0, 1.0);

/// Source of `df/dp` for an operator application.
#[derive(Debug, Clone, Copy)]
pub enum Derivative<'a> {
    /// The grid's finite-difference stencil.
    Stencil,
    /// A closed-form derivative sampled on the same grid.
    Analytic(&'a GridSpinorField),
}

/// Result of applying a differential operator.
#[derive(Debug, Clone)]
pub struct Applied {
    pub field: GridSpinorField,
    /// Nodes whose stencil was shifted off-centre near `p_min` or `p_max`.
    pub one_sided_nodes: usize,
}

fn resolve(f: &GridSpinorField, deriv: Derivative<'_>) -> Result<(GridSpinorField, usize)> {
    match deriv {
        Derivative::Stencil => {
            if f.grid().deriv_order() == DerivOrder::Analytic {
                return Err(Error::MissingDerivative);
            }
            Ok((f.derivative(), f.grid().one_sided_nodes()))
        }
        Derivative::Analytic(df) => {
            if !f.same_grid(df) {
                return Err(Error::GridMismatch);
            }
            Ok((df.clone(), 0))
        }
    }
}

/// Node-wise `H(p) f(p)` with `H(p) = alpha_1 p + beta m`.
pub fn apply_hamiltonian(f: &GridSpinorField, mass: f64) -> GridSpinorField {
    f.map(|p, v| hamiltonian_apply(p, mass, v))
}

fn t_dirac_node(p: f64, mass: f64, v: &Spinor4, dv: &Spinor4) -> Spinor4 {
    let minus_i_dv = dv * (-I);
    hamiltonian_apply(p, mass, &minus_i_dv) / C64::from(p)
        + beta_apply(v) * (I * (mass / (2.0 * p * p)))
}

/// Dirac time-of-arrival operator in momentum representation.
pub fn apply_t_dirac(f: &GridSpinorField, mass: f64, deriv: Derivative<'_>) -> Result<Applied> {
    let (df, one_sided_nodes) = resolve(f, deriv)?;
    let field = f.zip_map(&df, |p, v, dv| t_dirac_node(p, mass, v, dv))?;
    Ok(Applied {
        field,
        one_sided_nodes,
    })
}

/// Nonrelativistic (proper) time-of-arrival operator, component-wise:
/// `T_non f = -i m f'/p + i m f/(2 p^2)`.
pub fn apply_t_nonrel(f: &GridSpinorField, mass: f64, deriv: Derivative<'_>) -> Result<Applied> {
    let (df, one_sided_nodes) = resolve(f, deriv)?;
    let field = f.zip_map(&df, |p, v, dv| {
        dv * (-I * (mass / p)) + v * (I * (mass / (2.0 * p * p)))
    })?;
    Ok(Applied {
        field,
        one_sided_nodes,
    })
}

/// `-alpha_1 x f` with `x = i d/dp`; equals `T f` when `m = 0`.
pub fn apply_minus_alpha1_position(f: &GridSpinorField, deriv: Derivative<'_>) -> Result<Applied> {
    let (df, one_sided_nodes) = resolve(f, deriv)?;
    let field = df.map(|_, dv| -alpha1_apply(&(dv * I)));
    Ok(Applied {
        field,
        one_sided_nodes,
    })
}

/// `||([T, H] + i) f|| / ||f||` in the grid norm.
///
/// With an analytic `df`, the derivative of `H f` is `alpha_1 f + H df`.
pub fn commutator_residual(f: &GridSpinorField, mass: f64, deriv: Derivative<'_>) -> Result<f64> {
    let norm = f.norm();
    if norm == 0.0 || !norm.is_finite() {
        return Err(Error::ZeroField);
    }
    let hf = apply_hamiltonian(f, mass);
    let th = match deriv {
        Derivative::Stencil => apply_t_dirac(&hf, mass, Derivative::Stencil)?,
        Derivative::Analytic(df) => {
            let dhf = f.zip_map(df, |p, v, dv| {
                alpha1_apply(v) + hamiltonian_apply(p, mass, dv)
            })?;
            apply_t_dirac(&hf, mass, Derivative::Analytic(&dhf))?
        }
    };
    let ht = apply_hamiltonian(&apply_t_dirac(f, mass, deriv)?.field, mass);
    let residual = th.field.sub(&ht)?.add(&f.scale(I))?;
    Ok(residual.norm() / norm)
}

/// Least-squares slope of `log(err)` against `log(h)`.
pub fn loglog_slope(h: &[f64], err: &[f64]) -> f64 {
    let n = h.len() as f64;
    let xs: Vec<f64> = h.iter().map(|v| v.ln()).collect();
    let ys: Vec<f64> = err.iter().map(|v| v.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}
