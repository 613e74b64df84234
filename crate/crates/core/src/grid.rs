//! Symmetric momentum grids with a hole around `p = 0`, stencils and fields.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad;
use crate::spinor::{Spinor4, C64};

/// Gauss-Legendre points per panel.
pub const PANEL_ORDER: usize = 8;

/// How `d/dp` is taken on a grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DerivOrder {
    Second,
    Fourth,
    /// Callers supply closed-form derivatives.
    Analytic,
}

impl DerivOrder {
    pub fn from_order(k: u32) -> Option<Self> {
        match k {
            2 => Some(Self::Second),
            4 => Some(Self::Fourth),
            _ => None,
        }
    }

    /// Stencil order used when a finite difference is needed.
    pub fn stencil_order(self) -> usize {
        match self {
            Self::Second => 2,
            Self::Fourth | Self::Analytic => 4,
        }
    }
}

impl fmt::Display for DerivOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Second => write!(f, "2"),
            Self::Fourth => write!(f, "4"),
            Self::Analytic => write!(f, "analytic"),
        }
    }
}

/// Default exclusion radius around `p = 0`: `1e-3 m`, or `1e-3` when massless.
pub fn default_p_min(mass: f64) -> f64 {
    if mass > 0.0 {
        1e-3 * mass
    } else {
        1e-3
    }
}

/// Finite-difference weights for the first derivative at `x0` (Fornberg).
pub fn fornberg_first_derivative(x0: f64, xs: &[f64]) -> Vec<f64> {
    let n = xs.len();
    // c[j][k]: weight of xs[j] for derivative order k (k = 0, 1)
    let mut c = vec![[0.0f64; 2]; n];
    let mut c1 = 1.0;
    let mut c4 = xs[0] - x0;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(1);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = xs[i] - x0;
        for j in 0..i {
            let c3 = xs[i] - xs[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.iter().map(|w| w[1]).collect()
}

#[derive(Debug, Clone, PartialEq)]
struct Stencil {
    start: usize,
    weights: Vec<f64>,
    one_sided: bool,
}

/// Symmetric composite Gauss-Legendre grid on `[-p_max, -p_min] U [p_min, p_max]`.
///
/// Nodes are stored ascending: the negative half first, then the positive
/// half, so `nodes[n + i] = -nodes[n - 1 - i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentumGrid {
    p_min: f64,
    p_max: f64,
    n_side: usize,
    deriv_order: DerivOrder,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    stencils: Vec<Stencil>,
}

impl MomentumGrid {
    pub fn new(p_min: f64, p_max: f64, n_points: usize, deriv_order: DerivOrder) -> Result<Self> {
        if !(p_min.is_finite() && p_max.is_finite()) || p_min <= 0.0 || p_min >= p_max {
            return Err(Error::InvalidGrid(format!(
                "need 0 < p_min < p_max, got p_min = {p_min}, p_max = {p_max}"
            )));
        }
        if n_points < PANEL_ORDER {
            return Err(Error::InvalidGrid(format!(
                "need n_points >= {PANEL_ORDER}, got {n_points}"
            )));
        }
        // panel count scales with n_points; a remainder is spread one point
        // at a time over the leading panels
        let panels = n_points / PANEL_ORDER;
        let extra = n_points % PANEL_ORDER;
        let width = (p_max - p_min) / panels as f64;
        let mut pos_nodes = Vec::with_capacity(n_points);
        let mut pos_weights = Vec::with_capacity(n_points);
        for k in 0..panels {
            let order = PANEL_ORDER + extra / panels + usize::from(k < extra % panels);
            let lo = p_min + width * k as f64;
            let hi = if k + 1 == panels { p_max } else { lo + width };
            let (x, w) = quad::composite(lo, hi, 1, order);
            pos_nodes.extend(x);
            pos_weights.extend(w);
        }
        let mut nodes: Vec<f64> = pos_nodes.iter().rev().map(|p| -p).collect();
        nodes.extend(&pos_nodes);
        let mut weights: Vec<f64> = pos_weights.iter().rev().copied().collect();
        weights.extend(&pos_weights);

        let order = deriv_order.stencil_order();
        let mut stencils = Vec::with_capacity(2 * n_points);
        for side in 0..2 {
            let base = side * n_points;
            for i in 0..n_points {
                let half = order / 2;
                let start = i.saturating_sub(half).min(n_points - (order + 1));
                let xs = &nodes[base + start..base + start + order + 1];
                stencils.push(Stencil {
                    start: base + start,
                    weights: fornberg_first_derivative(nodes[base + i], xs),
                    one_sided: start + half != i,
                });
            }
        }
        Ok(Self {
            p_min,
            p_max,
            n_side: n_points,
            deriv_order,
            nodes,
            weights,
            stencils,
        })
    }

    pub fn p_min(&self) -> f64 {
        self.p_min
    }

    pub fn p_max(&self) -> f64 {
        self.p_max
    }

    /// Points per side.
    pub fn n_side(&self) -> usize {
        self.n_side
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn deriv_order(&self) -> DerivOrder {
        self.deriv_order
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Index range of the `p > 0` half.
    pub fn positive_range(&self) -> std::ops::Range<usize> {
        self.n_side..2 * self.n_side
    }

    /// Index range of the `p < 0` half.
    pub fn negative_range(&self) -> std::ops::Range<usize> {
        0..self.n_side
    }

    /// Index of `-p_i`.
    pub fn mirror(&self, i: usize) -> usize {
        2 * self.n_side - 1 - i
    }

    /// Largest gap between neighbouring nodes on one side.
    pub fn max_spacing(&self) -> f64 {
        self.nodes[self.positive_range()]
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(0.0, f64::max)
    }

    /// Number of nodes whose stencil had to be shifted off-centre.
    pub fn one_sided_nodes(&self) -> usize {
        self.stencils.iter().filter(|s| s.one_sided).count()
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&p, &w)| w * f(p))
            .sum()
    }

    /// Stencil derivative of sampled data, each half treated separately.
    pub fn differentiate<T>(&self, values: &[T]) -> Vec<T>
    where
        T: Copy + std::ops::Mul<C64, Output = T> + std::ops::Add<Output = T>,
    {
        assert_eq!(values.len(), self.len());
        self.stencils
            .iter()
            .map(|s| {
                let mut acc = values[s.start] * C64::from(s.weights[0]);
                for (k, &w) in s.weights.iter().enumerate().skip(1) {
                    acc = acc + values[s.start + k] * C64::from(w);
                }
                acc
            })
            .collect()
    }

    pub fn with_deriv_order(&self, deriv_order: DerivOrder) -> Result<Self> {
        Self::new(self.p_min, self.p_max, self.n_side, deriv_order)
    }
}

/// Build a shared grid; the returned `Arc` is what fields hold on to.
pub fn build_grid(
    p_min: f64,
    p_max: f64,
    n_points: usize,
    deriv_order: DerivOrder,
) -> Result<Arc<MomentumGrid>> {
    MomentumGrid::new(p_min, p_max, n_points, deriv_order).map(Arc::new)
}

/// A spinor-valued wave function sampled on a momentum grid.
#[derive(Debug, Clone)]
pub struct GridSpinorField {
    grid: Arc<MomentumGrid>,
    values: Vec<Spinor4>,
}

impl GridSpinorField {
    pub fn new(grid: Arc<MomentumGrid>, values: Vec<Spinor4>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidGrid(format!(
                "{} values for {} nodes",
                values.len(),
                grid.len()
            )));
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: Arc<MomentumGrid>) -> Self {
        let values = vec![Spinor4::zeros(); grid.len()];
        Self { grid, values }
    }

    pub fn from_fn<F: FnMut(f64) -> Spinor4>(grid: Arc<MomentumGrid>, f: F) -> Self {
        let values = grid.nodes().iter().copied().map(f).collect();
        Self { grid, values }
    }

    pub fn grid(&self) -> &Arc<MomentumGrid> {
        &self.grid
    }

    pub fn values(&self) -> &[Spinor4] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Spinor4] {
        &mut self.values
    }

    pub fn same_grid(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.grid, &other.grid) || *self.grid == *other.grid
    }

    /// Node-wise map with access to the momentum.
    pub fn map<F: FnMut(f64, &Spinor4) -> Spinor4>(&self, mut f: F) -> Self {
        let values = self
            .grid
            .nodes()
            .iter()
            .zip(&self.values)
            .map(|(&p, v)| f(p, v))
            .collect();
        Self {
            grid: Arc::clone(&self.grid),
            values,
        }
    }

    pub fn zip_map<F: FnMut(f64, &Spinor4, &Spinor4) -> Spinor4>(
        &self,
        other: &Self,
        mut f: F,
    ) -> Result<Self> {
        if !self.same_grid(other) {
            return Err(Error::GridMismatch);
        }
        let values = self
            .grid
            .nodes()
            .iter()
            .zip(self.values.iter().zip(&other.values))
            .map(|(&p, (a, b))| f(p, a, b))
            .collect();
        Ok(Self {
            grid: Arc::clone(&self.grid),
            values,
        })
    }

    pub fn scale(&self, c: C64) -> Self {
        self.map(|_, v| v * c)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_map(other, |_, a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_map(other, |_, a, b| a - b)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.values
            .iter()
            .zip(self.grid.weights())
            .map(|(v, &w)| w * v.norm_squared())
            .sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Stencil derivative `d/dp`.
    pub fn derivative(&self) -> Self {
        Self {
            grid: Arc::clone(&self.grid),
            values: self.grid.differentiate(&self.values),
        }
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        if !self.same_grid(other) {
            return Err(Error::GridMismatch);
        }
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }
}

/// Quadrature inner product `sum_i w_i f_i^dagger g_i`.
pub fn inner_product(f: &GridSpinorField, g: &GridSpinorField) -> Result<C64> {
    if !f.same_grid(g) {
        return Err(Error::GridMismatch);
    }
    Ok(f.values
        .iter()
        .zip(&g.values)
        .zip(f.grid.weights())
        .map(|((a, b), &w)| a.dotc(b) * w)
        .sum())
}
