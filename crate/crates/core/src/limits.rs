//! Nonrelativistic limit, the dual time equation, and deficiency indices.

use std::f64::consts::PI;

use num_rational::Rational64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::operators::loglog_slope;
use crate::quad;
use crate::spinor::{
    energy_spinor, event_spinor, nr_limit_spinor, uw_spinors, EventPoint, KinematicPoint, Sign,
    Spin, Spinor4, C64,
};

/// Errors along a sequence of ratios `p/m` and the fitted order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimitReport {
    pub ratios: Vec<f64>,
    pub errors: Vec<f64>,
    pub slope: f64,
}

impl LimitReport {
    pub fn new(ratios: Vec<f64>, errors: Vec<f64>) -> Self {
        let slope = loglog_slope(&ratios, &errors);
        Self {
            ratios,
            errors,
            slope,
        }
    }

    /// Errors decrease strictly as the ratio decreases.
    pub fn monotone(&self) -> bool {
        let mut pairs: Vec<(f64, f64)> = self
            .ratios
            .iter()
            .copied()
            .zip(self.errors.iter().copied())
            .collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        pairs.windows(2).all(|w| w[0].1 < w[1].1)
    }
}

/// `r = 10^{-1}, ..., 10^{-4}` with `per_decade` points per decade.
pub fn ratio_lattice(per_decade: usize) -> Vec<f64> {
    let n = 3 * per_decade;
    (0..=n)
        .map(|k| 10f64.powf(-1.0 - 3.0 * k as f64 / n as f64))
        .collect()
}

/// `(||u(p,s) - zeta_{+s}||, ||w(p,s) - zeta_{-s}||)` at `m = 1`, `p = r`,
/// maximised over `s`.
pub fn nr_spinor_error(r: f64) -> Result<(f64, f64)> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::InvalidWindow(format!(
            "ratio must be positive, got {r}"
        )));
    }
    let mut worst = (0.0f64, 0.0f64);
    for s in Spin::BOTH {
        let (u, w) = uw_spinors(&KinematicPoint::new(1.0, r, Sign::Plus, s)?)?;
        worst.0 = worst.0.max((u - nr_limit_spinor(Sign::Plus, s)).norm());
        worst.1 = worst.1.max((w - nr_limit_spinor(Sign::Minus, s)).norm());
    }
    Ok(worst)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpinorLimitTable {
    pub ratio: Vec<f64>,
    pub u_error: Vec<f64>,
    pub w_error: Vec<f64>,
    pub u_slope: f64,
    pub w_slope: f64,
}

pub fn spinor_limit_table(ratios: &[f64]) -> Result<SpinorLimitTable> {
    let mut u_error = Vec::with_capacity(ratios.len());
    let mut w_error = Vec::with_capacity(ratios.len());
    for &r in ratios {
        let (u, w) = nr_spinor_error(r)?;
        u_error.push(u);
        w_error.push(w);
    }
    Ok(SpinorLimitTable {
        ratio: ratios.to_vec(),
        u_slope: loglog_slope(ratios, &u_error),
        w_slope: loglog_slope(ratios, &w_error),
        u_error,
        w_error,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EigenGap {
    /// `-x E_p / p`.
    pub t_rel: f64,
    /// `-x m / p`.
    pub t_non: f64,
    pub gap: f64,
    /// `gap / |t_non| = E_p/m - 1`, zero when `x = 0`.
    pub relative_gap: f64,
}

/// Relativistic against nonrelativistic position-labelled eigenvalue.
pub fn nr_eigen_limit_check(x: f64, p: f64, m: f64) -> Result<EigenGap> {
    if p == 0.0 {
        return Err(Error::ZeroMomentum);
    }
    if !(m > 0.0 && m.is_finite()) {
        return Err(Error::NegativeMass(m));
    }
    let e = p.hypot(m);
    // E - m without cancellation
    let excess = p * p / (e + m);
    let relative_gap = if x == 0.0 { 0.0 } else { excess / m };
    Ok(EigenGap {
        t_rel: -x * e / p,
        t_non: -x * m / p,
        gap: (x * excess / p).abs(),
        relative_gap,
    })
}

/// Distance in `L^2` with the weight `exp(-p^2 / (2 sigma^2))`,
/// `sigma = ratio m`, between the time-labelled eigenfunction with its
/// rest-mass phase removed and the nonrelativistic one
/// `(p^2/m^2)^{1/4} zeta_s exp(i p^2 t / 2m) / sqrt(2 pi)`.
pub fn nr_eigenfunction_limit(t: f64, s: Spin, m: f64, ratio: f64) -> Result<f64> {
    if !(m > 0.0 && m.is_finite()) {
        return Err(Error::NegativeMass(m));
    }
    if !(ratio > 0.0 && ratio.is_finite()) {
        return Err(Error::InvalidWindow(format!(
            "ratio must be positive, got {ratio}"
        )));
    }
    let sigma = ratio * m;
    let inv = 1.0 / (2.0 * PI).sqrt();
    let zeta = nr_limit_spinor(Sign::Plus, s);
    let rel = |p: f64| -> Spinor4 {
        let e = p.hypot(m);
        let phi = energy_spinor(&KinematicPoint {
            m,
            p,
            lambda: Sign::Plus,
            s,
        });
        // exp(i (E - m) t) with E - m = p^2/(E + m)
        phi * C64::from_polar((p.abs() / e).sqrt() * inv, p * p / (e + m) * t)
    };
    let non = |p: f64| -> Spinor4 {
        zeta * C64::from_polar((p.abs() / m).sqrt() * inv, p * p * t / (2.0 * m))
    };
    let rho = |p: f64| (-p * p / (2.0 * sigma * sigma)).exp();
    let integrate = |f: &dyn Fn(f64) -> f64| {
        quad::integrate(-10.0 * sigma, 0.0, 64, 16, f)
            + quad::integrate(0.0, 10.0 * sigma, 64, 16, f)
    };
    Ok(integrate(&|p| rho(p) * (rel(p) - non(p)).norm_squared()).sqrt())
}

pub fn eigenfunction_limit_table(t: f64, s: Spin, m: f64, ratios: &[f64]) -> Result<LimitReport> {
    let errors = ratios
        .iter()
        .map(|&r| nr_eigenfunction_limit(t, s, m, r))
        .collect::<Result<Vec<_>>>()?;
    Ok(LimitReport::new(ratios.to_vec(), errors))
}

/// Solution of the dual equation `-i d phi/dE = T phi` with `E` and `p`
/// independent:
/// `[x^2/(x^2+tau^2)]^{1/4} xi_{bs}(x) exp(i(tE - xp)) / sqrt(2 pi)`, `t = b t_x`.
///
/// Here `tau` is a fixed label supplied by the caller.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DualSolution {
    pub x: f64,
    pub b: Sign,
    pub s: Spin,
    pub tau: f64,
    pub t: f64,
}

pub fn dual_solution(x: f64, b: Sign, s: Spin, tau: f64) -> Result<DualSolution> {
    let ev = EventPoint::new(x, tau, b, s)?;
    Ok(DualSolution {
        x,
        b,
        s,
        tau,
        t: b.value() * ev.t_x(),
    })
}

impl DualSolution {
    fn event(&self) -> EventPoint {
        EventPoint {
            x: self.x,
            tau: self.tau,
            b: self.b,
            s: self.s,
        }
    }

    fn amplitude(&self) -> f64 {
        (self.x.abs() / self.x.hypot(self.tau)).sqrt() / (2.0 * PI).sqrt()
    }

    pub fn spinor(&self) -> Spinor4 {
        event_spinor(&self.event())
    }

    pub fn value(&self, e: f64, p: f64) -> Spinor4 {
        self.spinor() * C64::from_polar(self.amplitude(), self.t * e - self.x * p)
    }

    /// `d phi / dE`, from differentiating the phase.
    pub fn d_energy(&self, e: f64, p: f64) -> Spinor4 {
        self.value(e, p) * C64::new(0.0, self.t)
    }

    /// `t^2 - x^2 - tau^2`, zero up to rounding.
    pub fn interval_defect(&self) -> f64 {
        self.t * self.t - self.x * self.x - self.tau * self.tau
    }
}

/// `max |(-i d/dE - t) phi(E, p)| / |phi|` over the sample points.
pub fn dual_residual(ds: &DualSolution, points: &[(f64, f64)]) -> f64 {
    let mi = C64::new(0.0, -1.0);
    points
        .iter()
        .map(|&(e, p)| {
            let v = ds.value(e, p);
            let n = v.norm();
            if n == 0.0 {
                0.0
            } else {
                (ds.d_energy(e, p) * mi - v * C64::from(ds.t)).norm() / n
            }
        })
        .fold(0.0, f64::max)
}

/// Componentwise comparison of a dual solution with the plane-wave solution
/// under `(x, tau, t_x, b) <-> (p, m, E_p, lambda)`, `(E, p) <-> (t, x)`.
///
/// The spinors must coincide and the phases must be complex conjugates:
/// `exp(i(b t_x E - x p))` against `exp(i(p x - lambda E_p t))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DualityDefect {
    pub spinor: f64,
    pub weight: f64,
    pub phase: f64,
}

impl DualityDefect {
    pub fn max(&self) -> f64 {
        self.spinor.max(self.weight).max(self.phase)
    }
}

pub fn duality_defect(x: f64, tau: f64, b: Sign, s: Spin, e: f64, p: f64) -> Result<DualityDefect> {
    let ds = dual_solution(x, b, s, tau)?;
    // the image of (x, tau) is a momentum-space point (p, m) with m >= 0
    let k = KinematicPoint::new(tau, x, b, s)?;
    let spinor = (ds.spinor() - energy_spinor(&k)).norm();
    let weight = (ds.amplitude() - crate::eigen::weight(k.p, k.m)).abs();
    let dual_phase = C64::from_polar(1.0, ds.t * e - x * p);
    // plane wave with momentum x at position p and time e
    let wave_phase = C64::from_polar(1.0, x * p - k.energy() * e);
    let phase = (dual_phase - wave_phase.conj()).norm();
    Ok(DualityDefect {
        spinor,
        weight,
        phase,
    })
}

fn rational_sqrt(r: Rational64) -> Option<Rational64> {
    let isqrt = |n: i64| -> Option<i64> {
        if n < 0 {
            return None;
        }
        let mut k = (n as f64).sqrt() as i64;
        while k * k > n {
            k -= 1;
        }
        while (k + 1) * (k + 1) <= n {
            k += 1;
        }
        (k * k == n).then_some(k)
    };
    Some(Rational64::new(isqrt(*r.numer())?, isqrt(*r.denom())?))
}

/// Dual label `t = b sqrt(x^2 + tau^2)` in exact arithmetic, when rational.
pub fn dual_time_exact(x: Rational64, tau: Rational64, b: Sign) -> Option<Rational64> {
    let t = rational_sqrt(x * x + tau * tau)?;
    Some(if b == Sign::Plus { t } else { -t })
}

/// One branch of the spectrum checked for a square-integrable solution.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BranchIntegral {
    /// `+1` for `-i phi' = +i phi`, `-1` for `-i phi' = -i phi`.
    pub equation: i8,
    /// `+1` for `(m, inf)`, `-1` for `(-inf, -m)`.
    pub branch: i8,
    pub integral: f64,
    pub integral_doubled: f64,
    pub class: Convergence,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Convergence {
    Convergent,
    Divergent,
    Undetermined,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeficiencyReport {
    pub n_plus: u32,
    pub n_minus: u32,
    pub equal: bool,
    pub mass: f64,
    pub e_max: f64,
    pub branches: Vec<BranchIntegral>,
}

/// Relative growth under `E_max -> 2 E_max` below which a truncated
/// integral counts as converged, and above which as diverging.
pub const CONVERGED_GROWTH: f64 = 0.1;
pub const DIVERGED_GROWTH: f64 = 1.0;

/// Counts square-integrable solutions of `-i dphi/dE = +-i phi` on the spectrum.
///
/// The solutions are `exp(-+E)` on each branch; `int |phi|^2` is computed on
/// the truncated branch and on one twice as long.
pub fn deficiency_diagnostic(m: f64, e_max: f64) -> Result<DeficiencyReport> {
    if !(m > 0.0 && m.is_finite()) {
        return Err(Error::NegativeMass(m));
    }
    if !(e_max > m && e_max.is_finite()) {
        return Err(Error::InvalidWindow(format!("need e_max > m, got {e_max}")));
    }
    let branch_integral = |eq: f64, br: f64, top: f64| {
        // |exp(-eq E)|^2 over the branch side between m and top
        let f = |e: f64| (-2.0 * eq * e).exp();
        let panels = (top - m).ceil() as usize * 4;
        if br > 0.0 {
            quad::integrate(m, top, panels, 16, f)
        } else {
            quad::integrate(-top, -m, panels, 16, f)
        }
    };
    let mut branches = Vec::new();
    let (mut n_plus, mut n_minus) = (0, 0);
    for eq in [1i8, -1] {
        for br in [1i8, -1] {
            let a = branch_integral(eq as f64, br as f64, e_max);
            let b = branch_integral(eq as f64, br as f64, 2.0 * e_max);
            let growth = b / a - 1.0;
            let class = if growth < CONVERGED_GROWTH {
                Convergence::Convergent
            } else if growth > DIVERGED_GROWTH {
                Convergence::Divergent
            } else {
                Convergence::Undetermined
            };
            if class == Convergence::Convergent {
                if eq > 0 {
                    n_plus += 1;
                } else {
                    n_minus += 1;
                }
            }
            branches.push(BranchIntegral {
                equation: eq,
                branch: br,
                integral: a,
                integral_doubled: b,
                class,
            });
        }
    }
    Ok(DeficiencyReport {
        n_plus,
        n_minus,
        equal: n_plus == n_minus,
        mass: m,
        e_max,
        branches,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spinor_error_leading_order() {
        let (u, w) = nr_spinor_error(0.1).unwrap();
        assert!((u / 0.05 - 1.0).abs() < 0.2, "{u}");
        assert!((w / 0.05 - 1.0).abs() < 0.2, "{w}");
        let (u, _) = nr_spinor_error(0.01).unwrap();
        assert!((0.9..=1.1).contains(&(u / 0.005)));
        let table = spinor_limit_table(&ratio_lattice(3)).unwrap();
        assert!((table.u_slope - 1.0).abs() < 0.05);
        assert!((table.w_slope - 1.0).abs() < 0.05);
        let r: Vec<f64> = (1..=50).map(|k| 0.01 * k as f64).collect();
        let report = LimitReport::new(
            r.clone(),
            r.iter().map(|&r| nr_spinor_error(r).unwrap().0).collect(),
        );
        assert!(report.monotone());
    }

    #[test]
    fn eigenvalue_gap() {
        let g = nr_eigen_limit_check(3.0, 4.0, 3.0).unwrap();
        assert_eq!(g.t_rel, -3.75);
        assert_eq!(g.t_non, -2.25);
        assert_eq!(g.gap, 1.5);
        let g = nr_eigen_limit_check(1.0, 0.01, 1.0).unwrap();
        assert!((g.relative_gap - 4.999875006249609e-5).abs() < 1e-18);
        let g = nr_eigen_limit_check(0.0, 0.5, 1.0).unwrap();
        assert_eq!((g.t_rel, g.t_non, g.gap), (0.0, 0.0, 0.0));
        assert!(nr_eigen_limit_check(1.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn eigenfunction_limit_shrinks() {
        let a = nr_eigenfunction_limit(3.0, Spin::Up, 1.0, 0.1).unwrap();
        let b = nr_eigenfunction_limit(3.0, Spin::Up, 1.0, 0.01).unwrap();
        assert!(a / b >= 5.0, "{a} {b}");
        assert!(nr_eigenfunction_limit(0.0, Spin::Down, 1.0, 0.1).unwrap() > 0.0);
        let t = eigenfunction_limit_table(3.0, Spin::Up, 1.0, &ratio_lattice(2)).unwrap();
        assert!(t.slope >= 1.0 - 1e-9, "{}", t.slope);
    }

    #[test]
    fn dual_solutions() {
        let pts: Vec<(f64, f64)> = (0..20)
            .map(|k| (-5.0 + 0.7 * k as f64, 3.0 - 0.4 * k as f64))
            .collect();
        for &(x, tau) in &[
            (3.0, 4.0),
            (-2.0, 0.5),
            (0.0, 1.0),
            (1.5, 0.0),
            (-7.0, -3.0),
        ] {
            for b in Sign::BOTH {
                let ds = dual_solution(x, b, Spin::Up, tau).unwrap();
                assert!(dual_residual(&ds, &pts) <= 1e-14);
                assert!(ds.interval_defect().abs() <= 1e-13);
                let n = ds.value(1.0, 2.0).norm();
                assert!((n - ds.value(-3.0, 0.1).norm()).abs() < 1e-15);
            }
        }
        assert!(matches!(
            dual_solution(0.0, Sign::Plus, Spin::Up, 0.0),
            Err(Error::DegenerateEvent)
        ));
    }

    #[test]
    fn duality_map_on_fixed_labels() {
        for &(x, tau) in &[(4.0, 3.0), (-1.2, 0.7), (0.3, 0.0)] {
            for b in Sign::BOTH {
                for s in Spin::BOTH {
                    let d = duality_defect(x, tau, b, s, 0.9, -1.3).unwrap();
                    assert!(d.max() <= 1e-14, "{d:?}");
                }
            }
        }
    }

    #[test]
    fn exact_dual_times() {
        let r = |n: i64, d: i64| Rational64::new(n, d);
        let t = dual_time_exact(r(3, 1), r(4, 1), Sign::Minus).unwrap();
        assert_eq!(t, r(-5, 1));
        let (x, tau) = (r(5, 13), r(12, 13));
        let t = dual_time_exact(x, tau, Sign::Plus).unwrap();
        assert_eq!(t * t - x * x, tau * tau);
        assert!(dual_time_exact(r(1, 1), r(1, 1), Sign::Plus).is_none());
    }

    #[test]
    fn deficiency_indices() {
        for e_max in [10.0, 20.0, 40.0] {
            let d = deficiency_diagnostic(1.0, e_max).unwrap();
            assert_eq!((d.n_plus, d.n_minus, d.equal), (1, 1, true));
            let conv = &d.branches[0];
            assert_eq!((conv.equation, conv.branch), (1, 1));
            assert!((conv.integral - (-2f64).exp() / 2.0).abs() < 1e-8);
            assert_eq!(d.branches[1].class, Convergence::Divergent);
            assert_eq!(d.branches[2].class, Convergence::Divergent);
            assert_eq!(d.branches[3].class, Convergence::Convergent);
        }
    }
}
