//! Wave packets, free evolution and arrival-time distributions at `x = 0`.
//!
//! The distribution is the spectral measure of the time-of-arrival operator:
//! the state is projected on the time-labelled eigenfunctions,
//! `A_{lambda s d}(t) = <phi_{t lambda s}|psi>` restricted to the half-line
//! `d = sign(p)`, and
//!
//! ```text
//! Pi(t) = sum_{s,d} |A_{+ s d}(t) + A_{- s d}(t)|^2
//! ```
//!
//! which splits into the two branch densities and their interference term.
//! The probability current at the origin is provided as an independent check.

use std::f64::consts::PI;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::eigen::{time_amplitudes, BranchProjection};
use crate::error::{Error, Result};
use crate::grid::{inner_product, GridSpinorField, MomentumGrid};
use crate::operators::apply_hamiltonian;
use crate::par::{self, Execution};
use crate::quad;
use crate::spinor::{
    check_mass, energy_spinor, nr_limit_spinor, KinematicPoint, Sign, Spin, Spinor4, C64,
};

/// Captured mass below which a window is flagged as too narrow.
pub const CAPTURE_WARNING: f64 = 0.99;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PacketSpec {
    pub m: f64,
    pub x0: f64,
    pub p0: f64,
    pub sigma_p: f64,
    pub c_plus: C64,
    pub c_minus: C64,
    pub s: Spin,
}

impl PacketSpec {
    /// Single-branch packet.
    pub fn single(m: f64, x0: f64, p0: f64, sigma_p: f64, lambda: Sign, s: Spin) -> Self {
        let (c_plus, c_minus) = match lambda {
            Sign::Plus => (C64::from(1.0), C64::from(0.0)),
            Sign::Minus => (C64::from(0.0), C64::from(1.0)),
        };
        Self {
            m,
            x0,
            p0,
            sigma_p,
            c_plus,
            c_minus,
            s,
        }
    }

    /// Checks the constraints and returns advisory warnings.
    pub fn validate(&self) -> Result<Vec<String>> {
        check_mass(self.m)?;
        if !(self.sigma_p > 0.0 && self.sigma_p.is_finite()) {
            return Err(Error::InvalidPacket(format!(
                "sigma_p must be positive, got {}",
                self.sigma_p
            )));
        }
        if !self.x0.is_finite() || !self.p0.is_finite() {
            return Err(Error::InvalidPacket("x0 and p0 must be finite".into()));
        }
        let w = self.c_plus.norm_sqr() + self.c_minus.norm_sqr();
        if (w - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidPacket(format!(
                "|c_plus|^2 + |c_minus|^2 = {w}, expected 1"
            )));
        }
        let mut warnings = Vec::new();
        if self.p0.abs() <= 3.0 * self.sigma_p {
            warnings.push(format!(
                "|p0| = {} is within 3 sigma_p of p = 0; mass near the excluded origin is lost",
                self.p0.abs()
            ));
        }
        Ok(warnings)
    }

    /// Normalised Gaussian amplitude `(2 pi sigma^2)^{-1/4} exp(-(p-p0)^2/(4 sigma^2)) exp(-i p x0)`.
    pub fn amplitude(&self, p: f64) -> C64 {
        let s2 = self.sigma_p * self.sigma_p;
        let g = (2.0 * PI * s2).powf(-0.25) * (-(p - self.p0).powi(2) / (4.0 * s2)).exp();
        C64::from_polar(g, -p * self.x0)
    }
}

/// `psi(p) = sum_lambda c_lambda G(p) exp(-i p x0) phi_{lambda s}(p)`, renormalised on the grid.
pub fn build_packet(spec: &PacketSpec, grid: &Arc<MomentumGrid>) -> Result<GridSpinorField> {
    spec.validate()?;
    let needed = spec.p0.abs() + 6.0 * spec.sigma_p;
    if grid.p_max() < needed {
        return Err(Error::InsufficientCoverage {
            needed,
            p_max: grid.p_max(),
        });
    }
    let psi = GridSpinorField::from_fn(Arc::clone(grid), |p| {
        let g = spec.amplitude(p);
        let mut v = Spinor4::zeros();
        for (lambda, c) in [(Sign::Plus, spec.c_plus), (Sign::Minus, spec.c_minus)] {
            if c != C64::from(0.0) {
                let k = KinematicPoint {
                    m: spec.m,
                    p,
                    lambda,
                    s: spec.s,
                };
                v += energy_spinor(&k) * (c * g);
            }
        }
        v
    });
    let norm = psi.norm();
    if norm == 0.0 {
        return Err(Error::ZeroField);
    }
    Ok(psi.scale(C64::from(1.0 / norm)))
}

/// `<psi|H psi>`.
pub fn energy_expectation(psi: &GridSpinorField, mass: f64) -> Result<f64> {
    Ok(inner_product(psi, &apply_hamiltonian(psi, mass))?.re)
}

/// Free evolution: each branch component picks up `exp(-i lambda E_p t)`.
pub fn evolve(psi: &GridSpinorField, t: f64, mass: f64) -> Result<GridSpinorField> {
    check_mass(mass)?;
    Ok(psi.map(|p, v| {
        let e = p.hypot(mass);
        let mut out = Spinor4::zeros();
        for lambda in Sign::BOTH {
            let phase = C64::from_polar(1.0, -lambda.value() * e * t);
            for s in Spin::BOTH {
                let phi = energy_spinor(&KinematicPoint {
                    m: mass,
                    p,
                    lambda,
                    s,
                });
                out += phi * (phi.dotc(v) * phase);
            }
        }
        out
    }))
}

/// `psi(x) = sum_i w_i exp(i p_i x) psi(p_i) / sqrt(2 pi)`.
fn synthesize(psi: &GridSpinorField, x: f64) -> Spinor4 {
    let grid = psi.grid();
    let mut acc = Spinor4::zeros();
    for ((&p, &w), v) in grid.nodes().iter().zip(grid.weights()).zip(psi.values()) {
        acc += v * C64::from_polar(w, p * x);
    }
    acc / C64::from((2.0 * PI).sqrt())
}

/// `psi(t, x)` at the requested positions.
pub fn position_profile(
    psi: &GridSpinorField,
    mass: f64,
    t: f64,
    xs: &[f64],
    exec: Execution,
) -> Result<Vec<Spinor4>> {
    let evolved = evolve(psi, t, mass)?;
    Ok(par::map_slice(xs, exec, |&x| synthesize(&evolved, x)))
}

/// Uniform sampling of a time interval, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeWindow {
    pub t_min: f64,
    pub t_max: f64,
    pub n_t: usize,
}

impl TimeWindow {
    pub fn new(t_min: f64, t_max: f64, n_t: usize) -> Result<Self> {
        let w = Self { t_min, t_max, n_t };
        w.validate()?;
        Ok(w)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t_min.is_finite() && self.t_max.is_finite() && self.t_max > self.t_min) {
            return Err(Error::InvalidWindow(format!(
                "need t_min < t_max, got [{}, {}]",
                self.t_min, self.t_max
            )));
        }
        if self.n_t < 2 {
            return Err(Error::InvalidWindow(format!(
                "need n_t >= 2, got {}",
                self.n_t
            )));
        }
        Ok(())
    }

    pub fn dt(&self) -> f64 {
        (self.t_max - self.t_min) / (self.n_t - 1) as f64
    }

    pub fn samples(&self) -> Vec<f64> {
        let dt = self.dt();
        (0..self.n_t)
            .map(|j| {
                if j + 1 == self.n_t {
                    self.t_max
                } else {
                    self.t_min + dt * j as f64
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ArrivalDistribution {
    pub t: Vec<f64>,
    pub total: Vec<f64>,
    pub pos: Vec<f64>,
    pub neg: Vec<f64>,
    pub interf: Vec<f64>,
    /// Window integral of the raw density, i.e. the fraction of the norm captured.
    pub captured_mass: f64,
    pub warnings: Vec<String>,
}

impl ArrivalDistribution {
    fn from_raw(t: Vec<f64>, rows: Vec<[f64; 4]>, dt: f64, norm_sqr: f64) -> Self {
        let raw_total: Vec<f64> = rows.iter().map(|r| r[0]).collect();
        let integral = quad::trapezoid(&raw_total, dt);
        let captured_mass = integral / norm_sqr;
        let mut warnings = Vec::new();
        if captured_mass < CAPTURE_WARNING {
            warnings.push(format!(
                "time window captures only {captured_mass:.6} of the arrival probability"
            ));
        }
        let scale = if integral > 0.0 { 1.0 / integral } else { 0.0 };
        let col = |k: usize| rows.iter().map(|r| r[k] * scale).collect::<Vec<_>>();
        Self {
            total: col(0),
            pos: col(1),
            neg: col(2),
            interf: col(3),
            t,
            captured_mass,
            warnings,
        }
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    /// Location of the maximum of `Pi_total`, refined by a parabola through
    /// the three samples around it.
    pub fn peak_time(&self) -> f64 {
        peak_time(&self.t, &self.total)
    }

    /// `max_t |Pi_total - Pi_pos - Pi_neg - Pi_interf|`.
    pub fn decomposition_defect(&self) -> f64 {
        (0..self.len())
            .map(|j| (self.total[j] - self.pos[j] - self.neg[j] - self.interf[j]).abs())
            .fold(0.0, f64::max)
    }

    pub fn integral(&self) -> f64 {
        let dt = if self.len() > 1 {
            self.t[1] - self.t[0]
        } else {
            0.0
        };
        quad::trapezoid(&self.total, dt)
    }
}

/// Sample location of the maximum of `y`, with parabolic refinement.
pub fn peak_time(t: &[f64], y: &[f64]) -> f64 {
    let Some((j, _)) = y.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)) else {
        return f64::NAN;
    };
    if j == 0 || j + 1 == y.len() {
        return t[j];
    }
    let (a, b, c) = (y[j - 1], y[j], y[j + 1]);
    let denom = a - 2.0 * b + c;
    if denom == 0.0 {
        return t[j];
    }
    let h = t[j + 1] - t[j];
    t[j] + 0.5 * h * (a - c) / denom
}

/// Arrival-time distribution at the origin over `window`.
pub fn arrival_distribution(
    psi: &GridSpinorField,
    mass: f64,
    window: &TimeWindow,
    exec: Execution,
) -> Result<ArrivalDistribution> {
    window.validate()?;
    let norm_sqr = psi.norm_sqr();
    if norm_sqr == 0.0 {
        return Err(Error::ZeroField);
    }
    let proj = BranchProjection::new(psi, mass)?;
    let t = window.samples();
    let rows = par::map_slice(&t, exec, |&t| {
        let a = time_amplitudes(&proj, t);
        let mut row = [0.0; 4];
        for s in 0..2 {
            for d in 0..2 {
                let (ap, am) = (a[0][s][d], a[1][s][d]);
                row[0] += (ap + am).norm_sqr();
                row[1] += ap.norm_sqr();
                row[2] += am.norm_sqr();
                row[3] += 2.0 * (ap.conj() * am).re;
            }
        }
        row
    });
    Ok(ArrivalDistribution::from_raw(
        t,
        rows,
        window.dt(),
        norm_sqr,
    ))
}

/// Arrival-time distribution built on the nonrelativistic eigenfunctions
/// `(p^2/m^2)^{1/4} zeta_s exp(i p^2 t / 2m) / sqrt(2 pi)`.
///
/// The relativistic amplitudes differ from these by the rest-mass phase
/// `exp(-imt)` among other things; the phase has no effect on `|A|^2`.
pub fn arrival_distribution_nonrel(
    psi: &GridSpinorField,
    mass: f64,
    window: &TimeWindow,
    exec: Execution,
) -> Result<ArrivalDistribution> {
    window.validate()?;
    if !(mass > 0.0 && mass.is_finite()) {
        return Err(Error::NegativeMass(mass));
    }
    let norm_sqr = psi.norm_sqr();
    if norm_sqr == 0.0 {
        return Err(Error::ZeroField);
    }
    let grid = psi.grid();
    let n_side = grid.n_side();
    let inv = 1.0 / (2.0 * PI).sqrt();
    // per node: (weighted factor, p^2 / 2m, zeta_s^dagger psi)
    let nodes: Vec<(f64, f64, [C64; 2])> = grid
        .nodes()
        .iter()
        .zip(grid.weights())
        .zip(psi.values())
        .map(|((&p, &w), v)| {
            let c = [
                nr_limit_spinor(Sign::Plus, Spin::Up).dotc(v),
                nr_limit_spinor(Sign::Plus, Spin::Down).dotc(v),
            ];
            (w * (p.abs() / mass).sqrt() * inv, p * p / (2.0 * mass), c)
        })
        .collect();
    let t = window.samples();
    let rows = par::map_slice(&t, exec, |&t| {
        let mut a = [[C64::from(0.0); 2]; 2];
        for (i, (k, kin, c)) in nodes.iter().enumerate() {
            let d = usize::from(i < n_side);
            let phase = C64::from_polar(*k, -kin * t);
            for s in 0..2 {
                a[s][d] += phase * c[s];
            }
        }
        let total: f64 = a.iter().flatten().map(|z| z.norm_sqr()).sum();
        [total, total, 0.0, 0.0]
    });
    Ok(ArrivalDistribution::from_raw(
        t,
        rows,
        window.dt(),
        norm_sqr,
    ))
}

/// `int |a(t) - b(t)| dt` between two distributions on the same samples.
pub fn l1_distance(a: &ArrivalDistribution, b: &ArrivalDistribution) -> Result<f64> {
    if a.t != b.t {
        return Err(Error::GridMismatch);
    }
    let diff: Vec<f64> = a
        .total
        .iter()
        .zip(&b.total)
        .map(|(x, y)| (x - y).abs())
        .collect();
    let dt = if a.len() > 1 { a.t[1] - a.t[0] } else { 0.0 };
    Ok(quad::trapezoid(&diff, dt))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FluxSeries {
    pub t: Vec<f64>,
    pub j: Vec<f64>,
}

impl FluxSeries {
    pub fn peak_time(&self) -> f64 {
        peak_time(&self.t, &self.j)
    }

    pub fn integral(&self) -> f64 {
        let dt = if self.t.len() > 1 {
            self.t[1] - self.t[0]
        } else {
            0.0
        };
        quad::trapezoid(&self.j, dt)
    }

    pub fn max_abs(&self) -> f64 {
        self.j.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Probability current `J(t) = psi^dagger(t,0) alpha_1 psi(t,0)` at the origin.
pub fn flux_at_origin(
    psi: &GridSpinorField,
    mass: f64,
    window: &TimeWindow,
    exec: Execution,
) -> Result<FluxSeries> {
    window.validate()?;
    check_mass(mass)?;
    let proj = BranchProjection::new(psi, mass)?;
    let grid = psi.grid();
    // keep only what each sample needs: spinor basis times branch coefficient
    let basis: Vec<[[Spinor4; 2]; 2]> = grid
        .nodes()
        .iter()
        .zip(grid.weights())
        .zip(&proj.coeffs)
        .map(|((&p, &w), c)| {
            let mut b = [[Spinor4::zeros(); 2]; 2];
            for lambda in Sign::BOTH {
                for s in Spin::BOTH {
                    let phi = energy_spinor(&KinematicPoint {
                        m: mass,
                        p,
                        lambda,
                        s,
                    });
                    b[lambda.index()][s.index()] = phi * (c[lambda.index()][s.index()] * w);
                }
            }
            b
        })
        .collect();
    let inv = C64::from(1.0 / (2.0 * PI).sqrt());
    let t = window.samples();
    let j = par::map_slice(&t, exec, |&t| {
        let mut v = Spinor4::zeros();
        for (b, &e) in basis.iter().zip(&proj.energy) {
            let phase = C64::from_polar(1.0, -e * t);
            v += (b[0][0] + b[0][1]) * phase + (b[1][0] + b[1][1]) * phase.conj();
        }
        v *= inv;
        2.0 * (v[0].conj() * v[3] + v[1].conj() * v[2]).re
    });
    Ok(FluxSeries { t, j })
}
