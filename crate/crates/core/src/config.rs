//! Run configuration, read from JSON.
//!
//! Every section is optional; missing values fall back to the benchmark
//! setup (m = 1, p0 = 2, sigma_p = 0.1, x0 = -10, positive branch).

use std::fs;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::arrival::{PacketSpec, TimeWindow};
use crate::eigen::{Family, ToaEigenfunction};
use crate::error::{Error, Result};
use crate::grid::{build_grid, DerivOrder, MomentumGrid};
use crate::spinor::{Sign, Spin, C64};

/// `2`, `4` or `"analytic"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DerivSetting {
    Order(u32),
    Named(String),
}

impl DerivSetting {
    pub fn resolve(&self) -> Result<DerivOrder> {
        match self {
            DerivSetting::Order(k) => DerivOrder::from_order(*k).ok_or_else(|| {
                Error::Config(format!(
                    "grid.deriv_order must be 2, 4 or \"analytic\", got {k}"
                ))
            }),
            DerivSetting::Named(s) if s == "analytic" => Ok(DerivOrder::Analytic),
            DerivSetting::Named(s) => Err(Error::Config(format!(
                "grid.deriv_order must be 2, 4 or \"analytic\", got \"{s}\""
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    pub p_min: f64,
    pub p_max: f64,
    pub n_points: usize,
    pub deriv_order: DerivSetting,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            p_min: 1e-3,
            p_max: 8.0,
            n_points: 256,
            deriv_order: DerivSetting::Order(4),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PacketConfig {
    pub x0: f64,
    pub p0: f64,
    pub sigma_p: f64,
    /// `[re, im]`
    pub c_plus: [f64; 2],
    pub c_minus: [f64; 2],
    pub spin: Spin,
}

impl Default for PacketConfig {
    fn default() -> Self {
        Self {
            x0: -10.0,
            p0: 2.0,
            sigma_p: 0.1,
            c_plus: [1.0, 0.0],
            c_minus: [0.0, 0.0],
            spin: Spin::Up,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TimeConfig {
    pub t_min: f64,
    pub t_max: f64,
    pub n_t: usize,
}

impl Default for TimeConfig {
    fn default() -> Self {
        Self {
            t_min: -30.0,
            t_max: 55.0,
            n_t: 1701,
        }
    }
}

/// One requested eigenfunction, e.g. `{"family":"time","t":2.0,"lambda":"plus","spin":"up"}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenRequest {
    #[serde(flatten)]
    pub family: Family,
    pub spin: Spin,
}

fn default_eigen() -> Vec<EigenRequest> {
    vec![
        EigenRequest {
            family: Family::Time {
                t: 5.0,
                lambda: Sign::Plus,
            },
            spin: Spin::Up,
        },
        EigenRequest {
            family: Family::Position {
                x: -3.0,
                lambda: Sign::Plus,
            },
            spin: Spin::Up,
        },
        EigenRequest {
            family: Family::Event {
                x: 3.0,
                b: Sign::Plus,
            },
            spin: Spin::Down,
        },
    ]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub mass: f64,
    pub grid: GridConfig,
    pub packet: PacketConfig,
    pub time: TimeConfig,
    pub seed: u64,
    #[serde(default = "default_eigen")]
    pub eigen: Vec<EigenRequest>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            mass: 1.0,
            grid: GridConfig::default(),
            packet: PacketConfig::default(),
            time: TimeConfig::default(),
            seed: 20240917,
            eigen: default_eigen(),
        }
    }
}

impl RunConfig {
    /// Parses and validates; parse errors carry line and column.
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: RunConfig = serde_json::from_str(text)
            .map_err(|e| Error::Config(format!("invalid config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text).map_err(|e| match e {
            Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if !(self.mass >= 0.0 && self.mass.is_finite()) {
            return bad(format!("mass must be finite and >= 0, got {}", self.mass));
        }
        let g = &self.grid;
        if !(g.p_min > 0.0 && g.p_min.is_finite()) {
            return bad(format!("grid.p_min must be > 0, got {}", g.p_min));
        }
        if !(g.p_max > g.p_min && g.p_max.is_finite()) {
            return bad(format!(
                "grid.p_max must exceed p_min, got {} <= {}",
                g.p_max, g.p_min
            ));
        }
        g.deriv_order.resolve()?;
        self.build_grid()
            .map_err(|e| Error::Config(format!("grid: {e}")))?;
        let spec = self.packet_spec();
        spec.validate()
            .map_err(|e| Error::Config(format!("packet: {e}")))?;
        let needed = spec.p0.abs() + 6.0 * spec.sigma_p;
        if needed > g.p_max {
            return bad(format!(
                "packet: grid.p_max = {} does not cover |p0| + 6 sigma_p = {needed}",
                g.p_max
            ));
        }
        self.window()
            .map_err(|e| Error::Config(format!("time: {e}")))?;
        for req in &self.eigen {
            if let Family::Event { x, .. } = req.family {
                if x == 0.0 && self.mass > 0.0 {
                    return bad("eigen: event family needs x != 0".into());
                }
            }
        }
        Ok(())
    }

    pub fn deriv_order(&self) -> Result<DerivOrder> {
        self.grid.deriv_order.resolve()
    }

    pub fn build_grid(&self) -> Result<Arc<MomentumGrid>> {
        build_grid(
            self.grid.p_min,
            self.grid.p_max,
            self.grid.n_points,
            self.deriv_order()?,
        )
    }

    pub fn packet_spec(&self) -> PacketSpec {
        let p = &self.packet;
        PacketSpec {
            m: self.mass,
            x0: p.x0,
            p0: p.p0,
            sigma_p: p.sigma_p,
            c_plus: C64::new(p.c_plus[0], p.c_plus[1]),
            c_minus: C64::new(p.c_minus[0], p.c_minus[1]),
            s: p.spin,
        }
    }

    pub fn window(&self) -> Result<TimeWindow> {
        TimeWindow::new(self.time.t_min, self.time.t_max, self.time.n_t)
    }

    pub fn eigenfunctions(&self) -> Vec<ToaEigenfunction> {
        self.eigen
            .iter()
            .map(|r| ToaEigenfunction {
                family: r.family,
                spin: r.spin,
                mass: self.mass,
            })
            .collect()
    }
}
