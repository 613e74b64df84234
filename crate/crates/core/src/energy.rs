//! Energy representation on the spectrum `(-inf, -m) U (m, inf)`.
//!
//! States are carried over from the momentum grid without interpolation:
//! each positive momentum node `p` maps to `E = lambda E_p` on both branches,
//! the quadrature weight becomes `w |p| / E_p` (from `dE = p dp / E`), and the
//! amplitude picks up the factor `[E^2/(E^2-m^2)]^{1/4} = (E_p/|p|)^{1/2}`.
//!
//! One energy is reached from `p` and `-p`, so every node carries four
//! channels: spin `s` times momentum direction `d` (`0` for `p > 0`).

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::grid::{fornberg_first_derivative, GridSpinorField, MomentumGrid};
use crate::quad;
use crate::spinor::{energy_spinor, KinematicPoint, Sign, Spin, C64};

const ZERO: C64 = C64::new(0.0, 0.0);

/// Channel amplitudes `[s][d]`.
pub type Channels = [[C64; 2]; 2];

fn channel_norm_sqr(c: &Channels) -> f64 {
    c.iter().flatten().map(|z| z.norm_sqr()).sum()
}

/// Relative size of `|g|` at the node next to `E = +-m` that still counts as
/// `g(+-m) = 0`.
pub const BOUNDARY_TOLERANCE: f64 = 1e-6;

/// Nodes used to extrapolate to the spectral edge.
const EDGE_STENCIL: usize = 4;

/// A function on one branch of the spectrum.
#[derive(Debug, Clone)]
pub struct EnergyGridFunction {
    branch: Sign,
    mass: f64,
    grid: Arc<MomentumGrid>,
    /// `|p|` per node, ascending; node 0 is the one closest to `E = +-m`.
    momenta: Vec<f64>,
    energies: Vec<f64>,
    weights: Vec<f64>,
    values: Vec<Channels>,
}

impl EnergyGridFunction {
    fn layout(
        grid: &Arc<MomentumGrid>,
        mass: f64,
        branch: Sign,
    ) -> Result<(Vec<f64>, Vec<f64>, Vec<f64>)> {
        if !(mass > 0.0 && mass.is_finite()) {
            return Err(Error::MasslessEnergyMap);
        }
        let range = grid.positive_range();
        let momenta: Vec<f64> = grid.nodes()[range.clone()].to_vec();
        let energies = momenta
            .iter()
            .map(|p| branch.value() * p.hypot(mass))
            .collect();
        let weights = momenta
            .iter()
            .zip(&grid.weights()[range])
            .map(|(p, w)| w * p / p.hypot(mass))
            .collect();
        Ok((momenta, energies, weights))
    }

    /// Sample `f(E)` on the energy nodes induced by `grid`.
    pub fn from_fn<F: FnMut(f64) -> Channels>(
        grid: &Arc<MomentumGrid>,
        mass: f64,
        branch: Sign,
        mut f: F,
    ) -> Result<Self> {
        let (momenta, energies, weights) = Self::layout(grid, mass, branch)?;
        let values = energies.iter().map(|&e| f(e)).collect();
        Ok(Self {
            branch,
            mass,
            grid: Arc::clone(grid),
            momenta,
            energies,
            weights,
            values,
        })
    }

    /// The same function in every channel.
    pub fn scalar<F: FnMut(f64) -> C64>(
        grid: &Arc<MomentumGrid>,
        mass: f64,
        branch: Sign,
        mut f: F,
    ) -> Result<Self> {
        Self::from_fn(grid, mass, branch, |e| {
            let v = f(e);
            [[v, v], [v, v]]
        })
    }

    pub fn branch(&self) -> Sign {
        self.branch
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    /// `|p|` per node.
    pub fn momenta(&self) -> &[f64] {
        &self.momenta
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn values(&self) -> &[Channels] {
        &self.values
    }

    fn compatible(&self, other: &Self) -> bool {
        self.branch == other.branch && self.mass == other.mass && self.energies == other.energies
    }

    fn with_values(&self, values: Vec<Channels>) -> Self {
        Self {
            values,
            ..self.clone()
        }
    }

    pub fn inner(&self, other: &Self) -> Result<C64> {
        if !self.compatible(other) {
            return Err(Error::GridMismatch);
        }
        let mut acc = ZERO;
        for ((a, b), &w) in self.values.iter().zip(&other.values).zip(&self.weights) {
            for s in 0..2 {
                for d in 0..2 {
                    acc += a[s][d].conj() * b[s][d] * w;
                }
            }
        }
        Ok(acc)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.values
            .iter()
            .zip(&self.weights)
            .map(|(c, w)| w * channel_norm_sqr(c))
            .sum()
    }

    /// `|g|` at the node adjacent to the spectral edge.
    /// `|g(+-m)|`, extrapolated in `E` from the nodes adjacent to the edge.
    ///
    /// The nodes closest to the edge sit a finite distance `~p^2/2m` away, so a
    /// function that vanishes linearly there still reads as nonzero on them.
    pub fn edge_value(&self) -> f64 {
        let k = EDGE_STENCIL.min(self.values.len());
        let e0 = self.edge_energy();
        let mut acc = [[ZERO; 2]; 2];
        for i in 0..k {
            let mut l = 1.0;
            for j in 0..k {
                if j != i {
                    l *= (e0 - self.energies[j]) / (self.energies[i] - self.energies[j]);
                }
            }
            for s in 0..2 {
                for d in 0..2 {
                    acc[s][d] += self.values[i][s][d] * l;
                }
            }
        }
        channel_norm_sqr(&acc).sqrt()
    }

    pub fn edge_energy(&self) -> f64 {
        self.branch.value() * self.mass
    }

    /// Reject functions that do not vanish at `E = +-m`.
    pub fn check_boundary(&self) -> Result<()> {
        let norm = self.norm_sqr().sqrt();
        let limit = BOUNDARY_TOLERANCE * norm;
        let value = self.edge_value();
        if value > limit {
            return Err(Error::BoundaryViolation {
                edge: self.edge_energy(),
                value,
                limit,
            });
        }
        Ok(())
    }

    /// `dg/dE` from finite-difference stencils built on the energy nodes.
    ///
    /// Differentiating in `|p|` and dividing by `dE/dp = p/E` would amplify
    /// the stencil error near the edge, where `dE/dp -> 0`.
    pub fn stencil_derivative(&self) -> Self {
        let n = self.energies.len();
        let order = self.grid.deriv_order().stencil_order().min(n - 1);
        let half = order / 2;
        let out = (0..n)
            .map(|i| {
                let start = i.saturating_sub(half).min(n - (order + 1));
                let w = fornberg_first_derivative(
                    self.energies[i],
                    &self.energies[start..start + order + 1],
                );
                let mut acc = [[ZERO; 2]; 2];
                for (k, &wk) in w.iter().enumerate() {
                    for s in 0..2 {
                        for d in 0..2 {
                            acc[s][d] += self.values[start + k][s][d] * wk;
                        }
                    }
                }
                acc
            })
            .collect();
        self.with_values(out)
    }
}

/// Source of `dg/dE`.
#[derive(Debug, Clone, Copy)]
pub enum EnergyDerivative<'a> {
    Stencil,
    Analytic(&'a EnergyGridFunction),
}

/// `-i dg/dE` on one branch; `g` must vanish at the spectral edge.
pub fn t_energy_rep(
    g: &EnergyGridFunction,
    deriv: EnergyDerivative<'_>,
) -> Result<EnergyGridFunction> {
    g.check_boundary()?;
    let dg = match deriv {
        EnergyDerivative::Stencil => g.stencil_derivative(),
        EnergyDerivative::Analytic(dg) => {
            if !g.compatible(dg) {
                return Err(Error::GridMismatch);
            }
            dg.clone()
        }
    };
    let values = dg
        .values
        .iter()
        .map(|c| c.map(|row| row.map(|z| z * C64::new(0.0, -1.0))))
        .collect();
    Ok(g.with_values(values))
}

/// `<g1|T g2> - <T g1|g2>`.
pub fn symmetry_defect(
    g1: &EnergyGridFunction,
    d1: EnergyDerivative<'_>,
    g2: &EnergyGridFunction,
    d2: EnergyDerivative<'_>,
) -> Result<C64> {
    let tg1 = t_energy_rep(g1, d1)?;
    let tg2 = t_energy_rep(g2, d2)?;
    Ok(g1.inner(&tg2)? - tg1.inner(g2)?)
}

/// A state on both branches of the spectrum.
#[derive(Debug, Clone)]
pub struct EnergyRep {
    pub plus: EnergyGridFunction,
    pub minus: EnergyGridFunction,
}

impl EnergyRep {
    pub fn norm_sqr(&self) -> f64 {
        self.plus.norm_sqr() + self.minus.norm_sqr()
    }

    pub fn branch(&self, lambda: Sign) -> &EnergyGridFunction {
        match lambda {
            Sign::Plus => &self.plus,
            Sign::Minus => &self.minus,
        }
    }
}

/// Project a momentum-space state onto `|E, s>`.
pub fn to_energy_rep(f: &GridSpinorField, mass: f64) -> Result<EnergyRep> {
    let grid = f.grid();
    let n = grid.n_side();
    let build = |lambda: Sign| -> Result<EnergyGridFunction> {
        let mut j = 0usize;
        EnergyGridFunction::from_fn(grid, mass, lambda, |_| {
            let p = grid.nodes()[n + j];
            let scale = (p.hypot(mass) / p).sqrt();
            let mut c = [[ZERO; 2]; 2];
            for (d, idx) in [(0usize, n + j), (1usize, n - 1 - j)] {
                let pd = grid.nodes()[idx];
                for s in Spin::BOTH {
                    let phi = energy_spinor(&KinematicPoint {
                        m: mass,
                        p: pd,
                        lambda,
                        s,
                    });
                    c[s.index()][d] = phi.dotc(&f.values()[idx]) * scale;
                }
            }
            j += 1;
            c
        })
    };
    Ok(EnergyRep {
        plus: build(Sign::Plus)?,
        minus: build(Sign::Minus)?,
    })
}

/// Both sides of `sum_lambda int dp (p/E_p) h(lambda E_p) = int_{R_m} h(E) dE`
/// over the region the grid covers.
///
/// The left side uses the momentum grid; the right side is an independent
/// composite Gauss-Legendre rule in `E` on `[E(p_min), E(p_max)]` and its mirror.
pub fn measure_identity<H: Fn(f64) -> f64>(h: H, grid: &MomentumGrid, mass: f64) -> (f64, f64) {
    let pos = grid.positive_range();
    let mut lhs = 0.0;
    for (&p, &w) in grid.nodes()[pos.clone()].iter().zip(&grid.weights()[pos]) {
        let e = p.hypot(mass);
        lhs += w * (p / e) * (h(e) + h(-e));
    }
    let lo = grid.p_min().hypot(mass);
    let hi = grid.p_max().hypot(mass);
    let panels = 256;
    let rhs = quad::integrate(lo, hi, panels, 16, &h) + quad::integrate(-hi, -lo, panels, 16, &h);
    (lhs, rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{build_grid, inner_product, DerivOrder};

    fn packet(grid: &Arc<MomentumGrid>, mass: f64) -> GridSpinorField {
        GridSpinorField::from_fn(Arc::clone(grid), |p| {
            let a = energy_spinor(&KinematicPoint {
                m: mass,
                p,
                lambda: Sign::Plus,
                s: Spin::Up,
            });
            let b = energy_spinor(&KinematicPoint {
                m: mass,
                p,
                lambda: Sign::Minus,
                s: Spin::Down,
            });
            a * C64::new((-(p - 1.5).powi(2)).exp(), 0.2) * C64::from((-(p * p) / 8.0).exp())
                + b * C64::new(0.0, 0.5 * (-(p + 1.0).powi(2)).exp())
        })
    }

    #[test]
    fn parseval() {
        let g = build_grid(1e-3, 12.0, 256, DerivOrder::Fourth).unwrap();
        let f = packet(&g, 1.0);
        let rep = to_energy_rep(&f, 1.0).unwrap();
        let lhs = inner_product(&f, &f).unwrap().re;
        assert!((lhs - rep.norm_sqr()).abs() < 1e-8 * lhs);
    }

    #[test]
    fn single_branch_has_no_negative_content() {
        let g = build_grid(1e-3, 12.0, 128, DerivOrder::Fourth).unwrap();
        let f = GridSpinorField::from_fn(Arc::clone(&g), |p| {
            energy_spinor(&KinematicPoint {
                m: 1.0,
                p,
                lambda: Sign::Plus,
                s: Spin::Up,
            }) * C64::from((-(p - 2.0).powi(2)).exp())
        });
        let rep = to_energy_rep(&f, 1.0).unwrap();
        assert!(rep.minus.norm_sqr().sqrt() < 1e-12);
        assert!(rep.plus.norm_sqr() > 0.1);
    }

    #[test]
    fn massless_is_rejected() {
        let g = build_grid(1e-3, 2.0, 16, DerivOrder::Fourth).unwrap();
        let f = GridSpinorField::zeros(Arc::clone(&g));
        assert!(matches!(
            to_energy_rep(&f, 0.0),
            Err(Error::MasslessEnergyMap)
        ));
    }

    #[test]
    fn measure_identity_gaussian() {
        let g = build_grid(1e-3, 12.0, 256, DerivOrder::Fourth).unwrap();
        let (lhs, rhs) = measure_identity(|e| (-(e - 2.0).powi(2)).exp(), &g, 1.0);
        assert!((lhs - rhs).abs() < 1e-8, "{lhs} {rhs}");
    }

    #[test]
    fn boundary_gate() {
        let g = build_grid(1e-3, 30.0, 256, DerivOrder::Fourth).unwrap();
        let m = 1.0;
        let bad =
            EnergyGridFunction::scalar(&g, m, Sign::Plus, |e| C64::from((-(e - m)).exp())).unwrap();
        assert!(matches!(
            t_energy_rep(&bad, EnergyDerivative::Stencil),
            Err(Error::BoundaryViolation { .. })
        ));
    }

    #[test]
    fn symmetric_on_boundary_respecting_states() {
        let g = build_grid(1e-3, 40.0, 512, DerivOrder::Fourth).unwrap();
        let m = 1.0;
        let f = EnergyGridFunction::scalar(&g, m, Sign::Plus, |e| {
            C64::from((e - m) * (-(e - m)).exp())
        })
        .unwrap();
        let df = EnergyGridFunction::scalar(&g, m, Sign::Plus, |e| {
            C64::from((1.0 - (e - m)) * (-(e - m)).exp())
        })
        .unwrap();
        let d = symmetry_defect(
            &f,
            EnergyDerivative::Analytic(&df),
            &f,
            EnergyDerivative::Analytic(&df),
        )
        .unwrap();
        assert!(d.norm() < 1e-8, "{d}");
    }

    #[test]
    fn stencil_symmetry_defect_converges() {
        let m = 1.0;
        let defect = |n: usize| {
            let g = build_grid(1e-3, 40.0, n, DerivOrder::Fourth).unwrap();
            let f = EnergyGridFunction::scalar(&g, m, Sign::Plus, |e| {
                C64::from((e - m) * (-(e - m)).exp())
            })
            .unwrap();
            symmetry_defect(&f, EnergyDerivative::Stencil, &f, EnergyDerivative::Stencil)
                .unwrap()
                .norm()
        };
        let (coarse, fine) = (defect(512), defect(1024));
        assert!(coarse < 1e-4 && fine < coarse / 8.0, "{coarse} {fine}");
    }

    #[test]
    fn phase_times_bump() {
        let m = 1.0;
        let t0 = 1.7;
        let bump = |e: f64| (e - m) * (-(e - 4.0).powi(2) / 8.0).exp();
        let dbump = |e: f64| (1.0 - (e - m) * (e - 4.0) / 4.0) * (-(e - 4.0).powi(2) / 8.0).exp();
        let worst = |n: usize| {
            let g = build_grid(1e-3, 20.0, n, DerivOrder::Fourth).unwrap();
            let f =
                EnergyGridFunction::scalar(&g, m, Sign::Plus, |e| C64::from_polar(bump(e), e * t0))
                    .unwrap();
            let tf = t_energy_rep(&f, EnergyDerivative::Stencil).unwrap();
            let mut worst = 0.0f64;
            for (j, &e) in f.energies().iter().enumerate() {
                let expect = C64::from_polar(1.0, e * t0)
                    * (C64::from(t0 * bump(e)) - C64::new(0.0, dbump(e)));
                worst = worst.max((tf.values()[j][0][0] - expect).norm());
            }
            worst
        };
        let (coarse, fine) = (worst(512), worst(1024));
        assert!(coarse < 1e-4 && fine < coarse / 8.0, "{coarse} {fine}");
    }

    #[test]
    fn negative_branch_layout() {
        let g = build_grid(0.01, 3.0, 16, DerivOrder::Fourth).unwrap();
        // E^2 - m^2 = p^2 is differentiated exactly by the stencil
        let f =
            EnergyGridFunction::scalar(&g, 2.0, Sign::Minus, |e| C64::from(e * e - 4.0)).unwrap();
        assert!(f.energies().iter().all(|&e| e < -2.0));
        assert!((f.edge_energy() + 2.0).abs() < 1e-15);
        assert!(f.edge_value() < 1e-10);
        let df = f.stencil_derivative();
        for (v, &e) in df.values().iter().zip(f.energies()) {
            assert!((v[0][0] - C64::from(2.0 * e)).norm() < 1e-9 * e.abs());
        }
    }
}
