//! Eigenfunction families of the Dirac time-of-arrival operator.
//!
//! * time-labelled: `[p^2/(p^2+m^2)]^{1/4} phi_{lambda s}(p) exp(i lambda E_p t) / sqrt(2 pi)`,
//!   a true eigenfunction with eigenvalue `t`;
//! * position-labelled: the same weight and spinor with `exp(-ipx)`; the
//!   operator acts on it as multiplication by `-(lambda E_p / p) x`, which
//!   depends on `p`, so it is checked as a node-wise identity;
//! * event-labelled: `[x^2/(x^2+tau^2)]^{1/4} xi_{bs}(x) exp(-ipx) / sqrt(2 pi)`
//!   with `tau = x m / p` per node and node-wise "eigenvalue" `-b t_x`.
//!
//! At each node the event-labelled function coincides with the
//! position-labelled one for `lambda = b sign(x p)`.

use std::f64::consts::PI;
use std::sync::Arc;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{inner_product, GridSpinorField, MomentumGrid};
use crate::operators::{apply_t_dirac, Derivative};
use crate::par::{self, Execution};
use crate::spinor::{
    check_mass, energy_spinor, energy_spinor_derivative, event_spinor, EventPoint, KinematicPoint,
    Sign, Spin, Spinor4, C64,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    Time { t: f64, lambda: Sign },
    Position { x: f64, lambda: Sign },
    Event { x: f64, b: Sign },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToaEigenfunction {
    pub family: Family,
    pub spin: Spin,
    pub mass: f64,
}

fn inv_sqrt_2pi() -> f64 {
    1.0 / (2.0 * PI).sqrt()
}

/// `[p^2/(p^2+m^2)]^{1/4} / sqrt(2 pi)`.
pub fn weight(p: f64, m: f64) -> f64 {
    (p.abs() / p.hypot(m)).sqrt() * inv_sqrt_2pi()
}

fn weight_derivative(p: f64, m: f64) -> f64 {
    let e2 = p * p + m * m;
    weight(p, m) * m * m / (2.0 * p * e2)
}

pub fn build_eigenfunction_t(t: f64, lambda: Sign, s: Spin, m: f64) -> Result<ToaEigenfunction> {
    check_mass(m)?;
    Ok(ToaEigenfunction {
        family: Family::Time { t, lambda },
        spin: s,
        mass: m,
    })
}

pub fn build_eigenfunction_x(x: f64, lambda: Sign, s: Spin, m: f64) -> Result<ToaEigenfunction> {
    check_mass(m)?;
    Ok(ToaEigenfunction {
        family: Family::Position { x, lambda },
        spin: s,
        mass: m,
    })
}

pub fn build_eigenfunction_xb(x: f64, b: Sign, s: Spin, m: f64) -> Result<ToaEigenfunction> {
    check_mass(m)?;
    if x == 0.0 {
        return Err(Error::DegenerateEvent);
    }
    Ok(ToaEigenfunction {
        family: Family::Event { x, b },
        spin: s,
        mass: m,
    })
}

impl ToaEigenfunction {
    fn kin(&self, p: f64, lambda: Sign) -> KinematicPoint {
        KinematicPoint {
            m: self.mass,
            p,
            lambda,
            s: self.spin,
        }
    }

    /// Energy branch realised at momentum `p`.
    pub fn branch_at(&self, p: f64) -> Sign {
        match self.family {
            Family::Time { lambda, .. } | Family::Position { lambda, .. } => lambda,
            Family::Event { x, b } => {
                if (x * p) > 0.0 {
                    b
                } else {
                    b.flip()
                }
            }
        }
    }

    pub fn value(&self, p: f64) -> Spinor4 {
        let m = self.mass;
        match self.family {
            Family::Time { t, lambda } => {
                let e = lambda.value() * p.hypot(m);
                energy_spinor(&self.kin(p, lambda)) * C64::from_polar(weight(p, m), e * t)
            }
            Family::Position { x, lambda } => {
                energy_spinor(&self.kin(p, lambda)) * C64::from_polar(weight(p, m), -p * x)
            }
            Family::Event { x, b } => {
                let ev = EventPoint {
                    x,
                    tau: x * m / p,
                    b,
                    s: self.spin,
                };
                let w = (x * x / (x * x + ev.tau * ev.tau)).powf(0.25) * inv_sqrt_2pi();
                event_spinor(&ev) * C64::from_polar(w, -p * x)
            }
        }
    }

    /// Closed-form `d/dp` of [`value`](Self::value).
    ///
    /// The event family is differentiated through its node-wise identity with
    /// the position family (`lambda = b sign(xp)` is constant on each half-line).
    pub fn derivative(&self, p: f64) -> Spinor4 {
        let m = self.mass;
        let (lambda, phase, dphase) = match self.family {
            Family::Time { t, lambda } => {
                let e = p.hypot(m);
                let arg = lambda.value() * e * t;
                (lambda, arg, lambda.value() * (p / e) * t)
            }
            Family::Position { x, lambda } => (lambda, -p * x, -x),
            Family::Event { x, .. } => (self.branch_at(p), -p * x, -x),
        };
        let k = self.kin(p, lambda);
        let spinor = energy_spinor(&k);
        let dspinor = energy_spinor_derivative(&k);
        let w = weight(p, m);
        let dw = weight_derivative(p, m);
        let e = C64::from_polar(1.0, phase);
        (spinor * C64::from(dw) + dspinor * C64::from(w) + spinor * C64::new(0.0, w * dphase)) * e
    }

    /// The value `t(p)` with `(T phi)(p) = t(p) phi(p)`.
    pub fn eigenvalue_at(&self, p: f64) -> f64 {
        let m = self.mass;
        match self.family {
            Family::Time { t, .. } => t,
            Family::Position { x, lambda } => -lambda.value() * p.hypot(m) / p * x,
            Family::Event { x, b } => {
                let tau = x * m / p;
                -b.value() * x.hypot(tau)
            }
        }
    }

    pub fn sample(&self, grid: &Arc<MomentumGrid>) -> GridSpinorField {
        GridSpinorField::from_fn(Arc::clone(grid), |p| self.value(p))
    }

    pub fn sample_derivative(&self, grid: &Arc<MomentumGrid>) -> GridSpinorField {
        GridSpinorField::from_fn(Arc::clone(grid), |p| self.derivative(p))
    }

    /// Node-wise `|T phi - t(p) phi|` using the requested derivative.
    pub fn pointwise_residuals(
        &self,
        grid: &Arc<MomentumGrid>,
        analytic: bool,
    ) -> Result<Vec<f64>> {
        let f = self.sample(grid);
        let tf = if analytic {
            let df = self.sample_derivative(grid);
            apply_t_dirac(&f, self.mass, Derivative::Analytic(&df))?
        } else {
            apply_t_dirac(&f, self.mass, Derivative::Stencil)?
        };
        Ok(grid
            .nodes()
            .iter()
            .zip(f.values().iter().zip(tf.field.values()))
            .map(|(&p, (v, tv))| (tv - v * C64::from(self.eigenvalue_at(p))).norm())
            .collect())
    }

    /// `||T phi - t phi|| / ||phi||` in the grid norm.
    pub fn eigen_residual(&self, grid: &Arc<MomentumGrid>, analytic: bool) -> Result<f64> {
        let res = self.pointwise_residuals(grid, analytic)?;
        let f = self.sample(grid);
        let num: f64 = res.iter().zip(grid.weights()).map(|(r, w)| w * r * r).sum();
        Ok((num / f.norm_sqr()).sqrt())
    }

    /// Largest label that the grid still resolves: phase advance between
    /// neighbouring nodes must stay below pi.
    pub fn max_resolvable_label(grid: &MomentumGrid) -> f64 {
        PI / grid.max_spacing()
    }

    pub fn label(&self) -> f64 {
        match self.family {
            Family::Time { t, .. } => t,
            Family::Position { x, .. } | Family::Event { x, .. } => x,
        }
    }

    pub fn check_resolvable(&self, grid: &MomentumGrid) -> Result<()> {
        let max = Self::max_resolvable_label(grid);
        // |dE/dp| <= 1 so the same bound covers the time label
        if self.label().abs() > max {
            return Err(Error::LabelOutOfRange {
                label: self.label(),
                max,
            });
        }
        Ok(())
    }
}

/// Gram matrix `<f_i | f_j>` of eigenfunctions under grid quadrature.
pub fn overlap_scan(
    functions: &[ToaEigenfunction],
    grid: &Arc<MomentumGrid>,
    exec: Execution,
) -> Result<Vec<Vec<C64>>> {
    let sampled: Vec<GridSpinorField> = par::map_slice(functions, exec, |f| f.sample(grid));
    let rows = par::map_indexed(sampled.len(), exec, |i| {
        sampled
            .iter()
            .map(|g| inner_product(&sampled[i], g))
            .collect::<Result<Vec<C64>>>()
    });
    rows.into_iter().collect()
}

/// `|<phi_{x' lambda s} | phi_{x lambda s}>|` over the offsets `x' - x`.
pub fn concentration_profile(
    x: f64,
    lambda: Sign,
    s: Spin,
    m: f64,
    grid: &Arc<MomentumGrid>,
    offsets: &[f64],
    exec: Execution,
) -> Result<Vec<f64>> {
    let base = build_eigenfunction_x(x, lambda, s, m)?.sample(grid);
    let out = par::map_slice(offsets, exec, |&d| {
        let other = build_eigenfunction_x(x + d, lambda, s, m)?.sample(grid);
        inner_product(&other, &base).map(|z| z.norm())
    });
    out.into_iter().collect()
}

/// Full width at half maximum of a sampled profile (linear interpolation).
pub fn full_width_half_max(offsets: &[f64], profile: &[f64]) -> Option<f64> {
    let (imax, &peak) = profile
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))?;
    let half = 0.5 * peak;
    let cross = |range: &mut dyn Iterator<Item = usize>| -> Option<f64> {
        let mut prev = imax;
        for i in range {
            if profile[i] < half {
                let (x0, x1) = (offsets[prev], offsets[i]);
                let (y0, y1) = (profile[prev], profile[i]);
                return Some(x0 + (half - y0) * (x1 - x0) / (y1 - y0));
            }
            prev = i;
        }
        None
    };
    let right = cross(&mut (imax + 1..profile.len()))?;
    let left = cross(&mut (0..imax).rev())?;
    Some(right - left)
}

/// Exact-rational comparison of the position-family and event-family labels.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalLabelCheck {
    pub tau: Rational64,
    pub t_x: Rational64,
    /// `-x lambda E / p` with `lambda = b sign(xp)`.
    pub position_label: Rational64,
    /// `-b t_x`.
    pub event_label: Rational64,
    pub lambda: Sign,
}

impl RationalLabelCheck {
    pub fn consistent(&self) -> bool {
        self.position_label == self.event_label
    }
}

fn rabs(r: Rational64) -> Rational64 {
    if r < Rational64::from_integer(0) {
        -r
    } else {
        r
    }
}

fn rsign(r: Rational64) -> i64 {
    if r < Rational64::from_integer(0) {
        -1
    } else {
        1
    }
}

/// Cross-check on a Pythagorean triple `E^2 = p^2 + m^2` (all rational).
///
/// Returns `None` when `(m, p, E)` is not a triple or `x p = 0`.
pub fn rational_label_check(
    x: Rational64,
    m: Rational64,
    p: Rational64,
    e: Rational64,
    b: Sign,
) -> Option<RationalLabelCheck> {
    let zero = Rational64::from_integer(0);
    if e * e != p * p + m * m || e <= zero || x == zero || p == zero {
        return None;
    }
    let tau = x * m / p;
    let t_x = rabs(x) * e / rabs(p);
    if t_x * t_x != x * x + tau * tau {
        return None;
    }
    let lambda = if rsign(x) * rsign(p) > 0 { b } else { b.flip() };
    let lam = Rational64::from_integer(if lambda == Sign::Plus { 1 } else { -1 });
    let bb = Rational64::from_integer(if b == Sign::Plus { 1 } else { -1 });
    Some(RationalLabelCheck {
        tau,
        t_x,
        position_label: -x * lam * e / p,
        event_label: -bb * t_x,
        lambda,
    })
}

/// Per-node branch data of a state: `c_{lambda s}(p) = phi_{lambda s}(p)^dagger psi(p)`.
#[derive(Debug, Clone)]
pub struct BranchProjection {
    pub mass: f64,
    /// `w_i * [p^2/(p^2+m^2)]^{1/4} / sqrt(2 pi)` per node.
    pub weighted: Vec<f64>,
    pub energy: Vec<f64>,
    /// `[lambda][s]` coefficients per node.
    pub coeffs: Vec<[[C64; 2]; 2]>,
    pub n_side: usize,
}

impl BranchProjection {
    pub fn new(psi: &GridSpinorField, mass: f64) -> Result<Self> {
        check_mass(mass)?;
        let grid = psi.grid();
        let mut weighted = Vec::with_capacity(grid.len());
        let mut energy = Vec::with_capacity(grid.len());
        let mut coeffs = Vec::with_capacity(grid.len());
        for ((&p, &w), v) in grid.nodes().iter().zip(grid.weights()).zip(psi.values()) {
            weighted.push(w * weight(p, mass));
            energy.push(p.hypot(mass));
            let mut c = [[C64::new(0.0, 0.0); 2]; 2];
            for lambda in Sign::BOTH {
                for s in Spin::BOTH {
                    let phi = energy_spinor(&KinematicPoint {
                        m: mass,
                        p,
                        lambda,
                        s,
                    });
                    c[lambda.index()][s.index()] = phi.dotc(v);
                }
            }
            coeffs.push(c);
        }
        Ok(Self {
            mass,
            weighted,
            energy,
            coeffs,
            n_side: grid.n_side(),
        })
    }

    /// Side index `d`: 0 for `p > 0`, 1 for `p < 0`.
    pub fn side(&self, i: usize) -> usize {
        usize::from(i < self.n_side)
    }
}

/// `A[lambda][s][d](t) = <phi_{t lambda s}|psi>` restricted to the half-line `d`.
pub type TimeAmplitudes = [[[C64; 2]; 2]; 2];

pub fn time_amplitudes(proj: &BranchProjection, t: f64) -> TimeAmplitudes {
    let mut a = [[[C64::new(0.0, 0.0); 2]; 2]; 2];
    for i in 0..proj.energy.len() {
        let d = proj.side(i);
        let phase = C64::from_polar(proj.weighted[i], -proj.energy[i] * t);
        let conj = phase.conj();
        for s in 0..2 {
            a[0][s][d] += phase * proj.coeffs[i][0][s];
            a[1][s][d] += conj * proj.coeffs[i][1][s];
        }
    }
    a
}

/// Rebuild a state from amplitudes on a uniform time lattice (trapezoid in t).
pub fn resynthesize(
    grid: &Arc<MomentumGrid>,
    mass: f64,
    times: &[f64],
    amplitudes: &[TimeAmplitudes],
) -> GridSpinorField {
    let dt = if times.len() > 1 {
        times[1] - times[0]
    } else {
        1.0
    };
    let n = times.len();
    GridSpinorField::from_fn(Arc::clone(grid), |p| {
        let d = usize::from(p < 0.0);
        let e = p.hypot(mass);
        let w = weight(p, mass);
        let mut out = Spinor4::zeros();
        for lambda in Sign::BOTH {
            let l = lambda.value();
            for s in Spin::BOTH {
                let mut acc = C64::new(0.0, 0.0);
                for (j, (&t, amp)) in times.iter().zip(amplitudes).enumerate() {
                    let tw = if j == 0 || j + 1 == n { 0.5 * dt } else { dt };
                    acc += C64::from_polar(tw, l * e * t) * amp[lambda.index()][s.index()][d];
                }
                let phi = energy_spinor(&KinematicPoint {
                    m: mass,
                    p,
                    lambda,
                    s,
                });
                out += phi * (acc * w);
            }
        }
        out
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{build_grid, DerivOrder};

    fn r(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    #[test]
    fn time_family_at_zero_is_real() {
        let f = build_eigenfunction_t(0.0, Sign::Plus, Spin::Up, 1.0).unwrap();
        for p in [-2.0, 0.3, 1.7] {
            let v = f.value(p);
            assert!(v.iter().all(|z| z.im == 0.0));
            let phi = energy_spinor(&KinematicPoint::new(1.0, p, Sign::Plus, Spin::Up).unwrap());
            assert!((v - phi * C64::from(weight(p, 1.0))).norm() < 1e-16);
        }
    }

    #[test]
    fn modulus_independent_of_t() {
        for t in [-3.0, 0.0, 1.5, 7.0] {
            let f = build_eigenfunction_t(t, Sign::Minus, Spin::Down, 0.7).unwrap();
            let g = build_eigenfunction_t(0.0, Sign::Minus, Spin::Down, 0.7).unwrap();
            for p in [-1.0, 0.2, 3.0] {
                assert!((f.value(p).norm() - g.value(p).norm()).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let funcs = [
            build_eigenfunction_t(1.3, Sign::Plus, Spin::Up, 1.0).unwrap(),
            build_eigenfunction_t(-2.0, Sign::Minus, Spin::Down, 3.0).unwrap(),
            build_eigenfunction_x(0.7, Sign::Minus, Spin::Up, 0.5).unwrap(),
            build_eigenfunction_xb(-1.2, Sign::Plus, Spin::Down, 2.0).unwrap(),
        ];
        for f in funcs {
            for p in [-2.5, -0.4, 0.6, 3.1] {
                let h = 1e-6;
                let fd = (f.value(p + h) - f.value(p - h)) / C64::from(2.0 * h);
                assert!((f.derivative(p) - fd).norm() < 1e-7, "{f:?} at {p}");
            }
        }
    }

    #[test]
    fn position_family_3_4_5() {
        let f = build_eigenfunction_x(2.0, Sign::Plus, Spin::Up, 3.0).unwrap();
        assert_eq!(f.eigenvalue_at(4.0), -2.5);
        let f = build_eigenfunction_x(2.0, Sign::Minus, Spin::Up, 0.0).unwrap();
        assert_eq!(f.eigenvalue_at(1.5), 2.0);
        assert_eq!(f.eigenvalue_at(-1.5), -2.0);
    }

    #[test]
    fn event_family_3_4_5() {
        let f = build_eigenfunction_xb(3.0, Sign::Plus, Spin::Up, 3.0).unwrap();
        assert_eq!(f.eigenvalue_at(4.0), -3.75);
        let g = build_eigenfunction_x(3.0, Sign::Plus, Spin::Up, 3.0).unwrap();
        assert_eq!(g.eigenvalue_at(4.0), -3.75);
        // spinor factor at that node is the event spinor example
        let spin = f.value(4.0)
            / C64::from_polar(
                (3.0f64 * 3.0 / (9.0 + 2.25 * 2.25)).powf(0.25) / (2.0 * PI).sqrt(),
                -12.0,
            );
        let expect = [0.4f64.sqrt(), 0.4f64.sqrt(), 0.1f64.sqrt(), 0.1f64.sqrt()];
        for (z, e) in spin.iter().zip(expect) {
            assert!((z - C64::from(e)).norm() < 1e-14);
        }
        assert!(build_eigenfunction_xb(0.0, Sign::Plus, Spin::Up, 1.0).is_err());
    }

    #[test]
    fn event_family_massless_form() {
        let f = build_eigenfunction_xb(1.5, Sign::Minus, Spin::Up, 0.0).unwrap();
        for p in [-2.0, 0.5] {
            let eta = crate::spinor::helicity_spinor(Spin::Up);
            let spin = crate::spinor::stack(eta, crate::spinor::sigma1() * eta * C64::from(-1.0))
                * C64::from(std::f64::consts::FRAC_1_SQRT_2);
            let expect = spin * C64::from_polar(inv_sqrt_2pi(), -p * 1.5);
            assert!((f.value(p) - expect).norm() < 1e-15);
            assert_eq!(f.eigenvalue_at(p), 1.5);
        }
    }

    #[test]
    fn event_equals_relabelled_position() {
        for &(x, m) in &[(3.0, 3.0), (-1.3, 0.8), (0.4, 2.0)] {
            for b in Sign::BOTH {
                let ev = build_eigenfunction_xb(x, b, Spin::Down, m).unwrap();
                for p in [-3.0, -0.2, 0.9, 4.0] {
                    let pos = build_eigenfunction_x(x, ev.branch_at(p), Spin::Down, m).unwrap();
                    assert!((ev.value(p) - pos.value(p)).norm() < 1e-12);
                    assert!(
                        (ev.eigenvalue_at(p) - pos.eigenvalue_at(p)).abs()
                            < 1e-12 * (1.0 + pos.eigenvalue_at(p).abs())
                    );
                }
            }
        }
    }

    #[test]
    fn rational_cross_check() {
        let c = rational_label_check(r(3, 1), r(3, 1), r(4, 1), r(5, 1), Sign::Plus).unwrap();
        assert_eq!(c.tau, r(9, 4));
        assert_eq!(c.t_x, r(15, 4));
        assert_eq!(c.event_label, r(-15, 4));
        assert!(c.consistent());
        assert!(rational_label_check(r(1, 1), r(1, 1), r(1, 1), r(2, 1), Sign::Plus).is_none());
    }

    #[test]
    fn eigen_residual_family_t() {
        let g = build_grid(1e-3, 10.0, 128, DerivOrder::Analytic).unwrap();
        for m in [0.0, 1.0, 3.0] {
            for lambda in Sign::BOTH {
                let f = build_eigenfunction_t(2.0, lambda, Spin::Up, m).unwrap();
                assert!(f.eigen_residual(&g, true).unwrap() < 1e-9);
            }
        }
    }

    #[test]
    fn gram_orthogonality() {
        let g = build_grid(1e-3, 10.0, 128, DerivOrder::Fourth).unwrap();
        let fs: Vec<_> = [
            (Sign::Plus, Spin::Up),
            (Sign::Minus, Spin::Up),
            (Sign::Plus, Spin::Down),
        ]
        .iter()
        .map(|&(l, s)| build_eigenfunction_x(1.0, l, s, 1.0).unwrap())
        .collect();
        let gram = overlap_scan(&fs, &g, Execution::Sequential).unwrap();
        assert!(gram[0][1].norm() < 1e-10);
        assert!(gram[0][2].norm() < 1e-10);
        assert!(gram[0][0].re > 0.0);
    }

    #[test]
    fn fwhm_of_triangle() {
        let xs: Vec<f64> = (-10..=10).map(|k| k as f64 * 0.1).collect();
        let ys: Vec<f64> = xs.iter().map(|x: &f64| (1.0 - x.abs()).max(0.0)).collect();
        assert!((full_width_half_max(&xs, &ys).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn label_range() {
        let g = build_grid(1e-3, 10.0, 64, DerivOrder::Fourth).unwrap();
        let ok = build_eigenfunction_x(1.0, Sign::Plus, Spin::Up, 1.0).unwrap();
        assert!(ok.check_resolvable(&g).is_ok());
        let bad = build_eigenfunction_x(1e4, Sign::Plus, Spin::Up, 1.0).unwrap();
        assert!(matches!(
            bad.check_resolvable(&g),
            Err(Error::LabelOutOfRange { .. })
        ));
    }
}
