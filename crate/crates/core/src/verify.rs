//! The verification suite behind `dirac-toa verify`.
//!
//! Each check reduces to one number compared against a tolerance. Randomised
//! lattices are drawn from a ChaCha stream seeded by the config, so a report
//! is reproducible bit for bit.

use std::sync::Arc;

use num_rational::Rational64;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::arrival::{
    arrival_distribution, arrival_distribution_nonrel, build_packet, evolve, flux_at_origin,
    l1_distance, PacketSpec, TimeWindow,
};
use crate::config::RunConfig;
use crate::eigen::{
    build_eigenfunction_t, build_eigenfunction_x, build_eigenfunction_xb, concentration_profile,
    full_width_half_max, overlap_scan, rational_label_check, resynthesize, time_amplitudes,
    BranchProjection,
};
use crate::energy::{
    measure_identity, symmetry_defect, t_energy_rep, to_energy_rep, EnergyDerivative,
    EnergyGridFunction,
};
use crate::error::{Error, Result};
use crate::grid::{build_grid, DerivOrder, GridSpinorField, MomentumGrid};
use crate::limits::{
    deficiency_diagnostic, dual_residual, dual_solution, dual_time_exact, duality_defect,
    nr_eigen_limit_check, ratio_lattice, spinor_limit_table,
};
use crate::operators::{commutator_residual, loglog_slope, Derivative};
use crate::par::Execution;
use crate::spinor::{
    energy_spinor, event_spinor, hamiltonian_apply, is_hermitian, uw_spinors, DiracBasis,
    EventPoint, KinematicPoint, Sign, Spin, Spinor4, C64,
};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl CheckRecord {
    pub fn new(name: &str, max_residual: f64, tolerance: f64) -> Self {
        Self {
            name: name.to_string(),
            max_residual,
            tolerance,
            pass: max_residual <= tolerance,
        }
    }

    /// A yes/no check, recorded as residual 0 or 1 against tolerance 0.
    pub fn flag(name: &str, ok: bool) -> Self {
        Self::new(name, if ok { 0.0 } else { 1.0 }, 0.0)
    }

    fn failed(name: &str, err: &Error) -> Self {
        let mut r = Self::new(name, f64::INFINITY, 0.0);
        r.name = format!("{name} ({err})");
        r
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub checks: Vec<CheckRecord>,
    pub all_pass: bool,
}

fn push_all(out: &mut Vec<CheckRecord>, name: &str, r: Result<Vec<CheckRecord>>) {
    match r {
        Ok(v) => out.extend(v),
        Err(e) => out.push(CheckRecord::failed(name, &e)),
    }
}

/// Runs every check; grid-dependent checks use the config's grid and packet.
pub fn run_all(cfg: &RunConfig, exec: Execution) -> VerifyReport {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut checks = Vec::new();
    checks.extend(algebra_checks());
    push_all(
        &mut checks,
        "spinor_lattice",
        spinor_lattice_checks(&mut rng),
    );
    push_all(&mut checks, "commutator", commutator_checks(cfg));
    push_all(&mut checks, "eigen", eigen_checks(&mut rng, exec));
    push_all(&mut checks, "energy", energy_checks());
    push_all(&mut checks, "arrival", arrival_checks(cfg, exec));
    push_all(&mut checks, "limits", limit_checks(exec));
    push_all(&mut checks, "duality", duality_checks(&mut rng));
    let all_pass = checks.iter().all(|c| c.pass);
    VerifyReport { checks, all_pass }
}

pub fn algebra_checks() -> Vec<CheckRecord> {
    let d = DiracBasis::new();
    let herm = [d.alpha[0], d.beta]
        .iter()
        .map(|m| crate::spinor::max_abs(&(m - m.adjoint())))
        .fold(0.0, f64::max);
    vec![
        CheckRecord::new("clifford_anticommutators", d.clifford_defect(), 1e-15),
        CheckRecord::new("alpha1_beta_hermitian", herm, 1e-15),
        CheckRecord::flag(
            "hamiltonian_matrix_hermitian",
            is_hermitian(&d.hamiltonian(1.7, 0.4), 1e-15),
        ),
    ]
}

fn random_momentum(rng: &mut ChaCha8Rng) -> f64 {
    let p: f64 = rng.random_range(0.01..10.0);
    if rng.random_bool(0.5) {
        -p
    } else {
        p
    }
}

fn random_sign(rng: &mut ChaCha8Rng) -> Sign {
    if rng.random_bool(0.5) {
        Sign::Plus
    } else {
        Sign::Minus
    }
}

fn random_spin(rng: &mut ChaCha8Rng) -> Spin {
    if rng.random_bool(0.5) {
        Spin::Up
    } else {
        Spin::Down
    }
}

/// Norms, Hamiltonian eigen-equation and the `w` relation on 200 random points.
pub fn spinor_lattice_checks(rng: &mut ChaCha8Rng) -> Result<Vec<CheckRecord>> {
    let big_sigma1 = DiracBasis::new().big_sigma1;
    let (mut norm, mut eig, mut xi_norm, mut w_rel) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for _ in 0..200 {
        let m: f64 = rng.random_range(0.0..5.0);
        let p = random_momentum(rng);
        let k = KinematicPoint::new(m, p, random_sign(rng), random_spin(rng))?;
        let phi = energy_spinor(&k);
        norm = norm.max((phi.norm() - 1.0).abs());
        eig = eig.max((hamiltonian_apply(p, m, &phi) - phi * C64::from(k.energy())).norm());
        let tau: f64 = rng.random_range(-5.0..5.0);
        let ev = EventPoint::new(random_momentum(rng), tau, random_sign(rng), k.s)?;
        xi_norm = xi_norm.max((event_spinor(&ev).norm() - 1.0).abs());
        if m > 0.0 {
            // w(p,s) = Sigma_1 sign(p) phi_{-,s}(-p)
            let (_, w) = uw_spinors(&KinematicPoint {
                lambda: Sign::Plus,
                ..k
            })?;
            let mirror = energy_spinor(&KinematicPoint {
                m,
                p: -p,
                lambda: Sign::Minus,
                s: k.s,
            });
            let rhs = big_sigma1 * mirror * C64::from(p.signum());
            let worst = (w - rhs).iter().map(|z| z.norm()).fold(0.0, f64::max);
            w_rel = w_rel.max(worst);
        }
    }
    Ok(vec![
        CheckRecord::new("energy_spinor_norm", norm, 1e-13),
        CheckRecord::new("event_spinor_norm", xi_norm, 1e-13),
        CheckRecord::new("hamiltonian_eigen_equation", eig, 1e-12),
        CheckRecord::new("w_relation", w_rel, 1e-14),
    ])
}

/// Smooth test state: a Gaussian bump at `p = 2`, width 0.5, times a fixed spinor.
pub fn bump_state(grid: &Arc<MomentumGrid>) -> (GridSpinorField, GridSpinorField) {
    let spin = Spinor4::new(
        C64::new(1.0, 0.0),
        C64::new(0.0, 0.5),
        C64::new(0.3, 0.0),
        C64::new(-0.2, 0.1),
    );
    let g = |p: f64| (-(p - 2.0).powi(2) / (2.0 * 0.25)).exp();
    let f = GridSpinorField::from_fn(Arc::clone(grid), |p| spin * C64::from(g(p)));
    let df = GridSpinorField::from_fn(Arc::clone(grid), |p| {
        spin * C64::from(-(p - 2.0) / 0.25 * g(p))
    });
    (f, df)
}

/// `||([T,H] + i) f|| / ||f||` for the bump state on a grid `[1e-3, 8]`.
pub fn commutator_on(n: usize, order: DerivOrder, mass: f64) -> Result<f64> {
    let g = build_grid(1e-3, 8.0, n, order)?;
    let (f, df) = bump_state(&g);
    match order {
        DerivOrder::Analytic => commutator_residual(&f, mass, Derivative::Analytic(&df)),
        _ => commutator_residual(&f, mass, Derivative::Stencil),
    }
}

pub fn commutator_checks(cfg: &RunConfig) -> Result<Vec<CheckRecord>> {
    let ns = [128usize, 256, 512];
    let mut err = Vec::new();
    for &n in &ns {
        err.push(commutator_on(n, DerivOrder::Fourth, 1.0)?);
    }
    let h: Vec<f64> = ns.iter().map(|&n| 1.0 / n as f64).collect();
    let slope = loglog_slope(&h, &err);
    // configured grid and scheme
    let grid = cfg.build_grid()?;
    let (f, df) = bump_state(&grid);
    let config_residual = match cfg.deriv_order()? {
        DerivOrder::Analytic => commutator_residual(&f, cfg.mass, Derivative::Analytic(&df))?,
        _ => commutator_residual(&f, cfg.mass, Derivative::Stencil)?,
    };
    // analytic derivatives on time-labelled eigenfunctions
    let ga = build_grid(1e-3, 10.0, 256, DerivOrder::Analytic)?;
    let mut analytic = 0.0f64;
    for m in [0.0, 1.0, 3.0] {
        for lambda in Sign::BOTH {
            let e = build_eigenfunction_t(1.5, lambda, Spin::Up, m)?;
            let f = e.sample(&ga);
            let df = e.sample_derivative(&ga);
            analytic = analytic.max(commutator_residual(&f, m, Derivative::Analytic(&df))?);
        }
    }
    Ok(vec![
        CheckRecord::new("commutator_order4_slope", (slope - 4.0).abs(), 0.5),
        CheckRecord::new("commutator_config_grid", config_residual, 1e-2),
        CheckRecord::new("commutator_analytic_time_family", analytic, 1e-9),
    ])
}

pub fn eigen_checks(rng: &mut ChaCha8Rng, exec: Execution) -> Result<Vec<CheckRecord>> {
    let g = build_grid(1e-3, 10.0, 256, DerivOrder::Analytic)?;
    let mut fam15 = 0.0f64;
    for t in -5..=5 {
        for m in [0.0, 0.5, 1.0, 3.0] {
            for lambda in Sign::BOTH {
                for s in Spin::BOTH {
                    let e = build_eigenfunction_t(t as f64, lambda, s, m)?;
                    fam15 = fam15.max(e.eigen_residual(&g, true)?);
                }
            }
        }
    }
    let (mut fam16, mut fam17) = (0.0f64, 0.0f64);
    for x in [-3.0, -0.5, 1.0, 2.5] {
        for m in [0.0, 1.0, 3.0] {
            for b in Sign::BOTH {
                for s in Spin::BOTH {
                    let e = build_eigenfunction_x(x, b, s, m)?;
                    let r = e.pointwise_residuals(&g, true)?;
                    fam16 = r.iter().fold(fam16, |a, &v| a.max(v));
                    let e = build_eigenfunction_xb(x, b, s, m)?;
                    let r = e.pointwise_residuals(&g, true)?;
                    fam17 = r.iter().fold(fam17, |a, &v| a.max(v));
                }
            }
        }
    }
    // event family equals the position family with lambda = b sign(xp)
    let mut relabel = 0.0f64;
    for _ in 0..100 {
        let x: f64 = random_momentum(rng);
        let p = random_momentum(rng);
        let m: f64 = rng.random_range(0.0..5.0);
        let b = random_sign(rng);
        let s = random_spin(rng);
        let ev = build_eigenfunction_xb(x, b, s, m)?;
        let lambda = if x * p > 0.0 { b } else { b.flip() };
        let pos = build_eigenfunction_x(x, lambda, s, m)?;
        relabel = relabel.max((ev.value(p) - pos.value(p)).norm());
        relabel = relabel
            .max((ev.eigenvalue_at(p) - pos.eigenvalue_at(p)).abs() / ev.eigenvalue_at(p).abs());
    }
    let r = |n: i64| Rational64::from_integer(n);
    let mut exact = true;
    for (m, p, e) in [(3, 4, 5), (4, 3, 5), (5, 12, 13), (12, 5, 13), (8, 15, 17)] {
        for x in [-3, 1, 2, 7] {
            for b in Sign::BOTH {
                for sp in [1, -1] {
                    exact &= rational_label_check(r(x), r(m), r(sp * p), r(e), b)
                        .is_some_and(|c| c.consistent());
                }
            }
        }
    }
    // orthogonality at equal x
    let go = build_grid(1e-3, 10.0, 256, DerivOrder::Fourth)?;
    let fs: Vec<_> = [
        (Sign::Plus, Spin::Up),
        (Sign::Minus, Spin::Up),
        (Sign::Plus, Spin::Down),
        (Sign::Minus, Spin::Down),
    ]
    .iter()
    .map(|&(l, s)| build_eigenfunction_x(1.3, l, s, 1.0))
    .collect::<Result<_>>()?;
    let gram = overlap_scan(&fs, &go, exec)?;
    let mut ortho = 0.0f64;
    for (i, row) in gram.iter().enumerate() {
        for (j, z) in row.iter().enumerate() {
            if i != j {
                ortho = ortho.max(z.norm());
            }
        }
    }
    let width_ratio = concentration_width_ratio(exec)?;
    let completeness = completeness_error()?;
    Ok(vec![
        CheckRecord::new("time_family_eigen_residual", fam15, 1e-9),
        CheckRecord::new("position_family_pointwise", fam16, 1e-9),
        CheckRecord::new("event_family_pointwise", fam17, 1e-9),
        CheckRecord::new("event_position_relabelling", relabel, 1e-12),
        CheckRecord::flag("rational_label_cross_check", exact),
        CheckRecord::new("equal_x_orthogonality", ortho, 1e-10),
        CheckRecord::new("concentration_width_ratio", (width_ratio - 2.0).abs(), 0.2),
        CheckRecord::new("time_family_completeness", completeness, 1e-6),
    ])
}

/// FWHM of the position-family overlap profile at `p_max = 20` over that at `40`.
pub fn concentration_width_ratio(exec: Execution) -> Result<f64> {
    let offsets: Vec<f64> = (0..=400).map(|k| -0.5 + 0.0025 * k as f64).collect();
    let mut widths = Vec::new();
    for p_max in [20.0, 40.0] {
        let g = build_grid(1e-3, p_max, 512, DerivOrder::Fourth)?;
        let prof = concentration_profile(1.5, Sign::Plus, Spin::Up, 1.0, &g, &offsets, exec)?;
        widths.push(
            full_width_half_max(&offsets, &prof)
                .ok_or_else(|| Error::InvalidWindow("profile has no half-maximum".into()))?,
        );
    }
    Ok(widths[0] / widths[1])
}

/// Relative error of projecting a band-limited state on time-labelled
/// eigenfunctions at `dt = 0.1`, `t` in `[-40, 40]`, and resynthesising.
pub fn completeness_error() -> Result<f64> {
    let g = build_grid(1e-3, 8.0, 256, DerivOrder::Fourth)?;
    let m = 1.0;
    // bumps well away from p = 0 on both half-lines
    let f = GridSpinorField::from_fn(Arc::clone(&g), |p| {
        Spinor4::new(
            C64::new(1.0, 0.0),
            C64::new(0.0, 0.5),
            C64::new(0.3, 0.0),
            C64::new(-0.2, 0.1),
        ) * C64::from((-(p - 2.0).powi(2) / 0.18).exp())
    });
    let f = f.add(&GridSpinorField::from_fn(Arc::clone(&g), |p| {
        let q = -p;
        Spinor4::new(
            C64::from(0.4),
            C64::from(-0.1),
            C64::new(0.0, 0.2),
            C64::from(0.3),
        ) * C64::from((-(q - 2.0).powi(2) / 0.18).exp())
    }))?;
    let proj = BranchProjection::new(&f, m)?;
    let w = TimeWindow::new(-40.0, 40.0, 801)?;
    let times = w.samples();
    let amps: Vec<_> = times.iter().map(|&t| time_amplitudes(&proj, t)).collect();
    let back = resynthesize(&g, m, &times, &amps);
    Ok(back.sub(&f)?.norm() / f.norm())
}

pub fn energy_checks() -> Result<Vec<CheckRecord>> {
    let m = 1.0;
    // measure identity on a grid that reaches far into the tails
    let g = build_grid(1e-3, 12.0, 256, DerivOrder::Fourth)?;
    let (lhs, rhs) = measure_identity(
        |e| (-(e - 2.0).powi(2)).exp() + 0.5 * (-(e + 3.0).powi(2)).exp(),
        &g,
        m,
    );
    // Parseval between the momentum and energy representations
    let (f, _) = bump_state(&g);
    let f = f.add(&GridSpinorField::from_fn(Arc::clone(&g), |p| {
        Spinor4::new(
            C64::from(0.2),
            C64::from(0.0),
            C64::new(0.0, 0.1),
            C64::from(0.0),
        ) * C64::from((-(p + 1.5).powi(2)).exp())
    }))?;
    let rep = to_energy_rep(&f, m)?;
    let parseval = (rep.norm_sqr() - f.norm_sqr()).abs() / f.norm_sqr();
    // symmetry of -i d/dE on a boundary-respecting state
    let gs = build_grid(1e-3, 40.0, 512, DerivOrder::Fourth)?;
    let good = EnergyGridFunction::scalar(&gs, m, Sign::Plus, |e| {
        C64::from((e - m) * (-(e - m)).exp())
    })?;
    let dgood = EnergyGridFunction::scalar(&gs, m, Sign::Plus, |e| {
        C64::from((1.0 - (e - m)) * (-(e - m)).exp())
    })?;
    let defect = symmetry_defect(
        &good,
        EnergyDerivative::Analytic(&dgood),
        &good,
        EnergyDerivative::Analytic(&dgood),
    )?
    .norm();
    let bad = EnergyGridFunction::scalar(&gs, m, Sign::Plus, |e| C64::from((-(e - m)).exp()))?;
    let rejected = matches!(
        t_energy_rep(&bad, EnergyDerivative::Stencil),
        Err(Error::BoundaryViolation { .. })
    );
    let mut stable = true;
    for k in [10.0, 20.0, 40.0] {
        let d = deficiency_diagnostic(m, k * m)?;
        stable &= d.n_plus == 1 && d.n_minus == 1 && d.equal;
    }
    Ok(vec![
        CheckRecord::new("measure_identity", (lhs - rhs).abs(), 1e-8),
        CheckRecord::new("energy_parseval", parseval, 1e-8),
        CheckRecord::new("energy_symmetry_defect", defect, 1e-8),
        CheckRecord::flag("energy_boundary_rejection", rejected),
        CheckRecord::flag("deficiency_indices_equal", stable),
    ])
}

fn single_branch(spec: &PacketSpec) -> Option<Sign> {
    let zero = C64::from(0.0);
    match (spec.c_plus == zero, spec.c_minus == zero) {
        (false, true) => Some(Sign::Plus),
        (true, false) => Some(Sign::Minus),
        _ => None,
    }
}

pub fn arrival_checks(cfg: &RunConfig, exec: Execution) -> Result<Vec<CheckRecord>> {
    let grid = cfg.build_grid()?;
    let spec = cfg.packet_spec();
    let window = cfg.window()?;
    let psi = build_packet(&spec, &grid)?;
    let mut drift = 0.0f64;
    for t in [
        window.t_min,
        0.5 * (window.t_min + window.t_max),
        window.t_max,
        1e3,
    ] {
        drift = drift.max((evolve(&psi, t, cfg.mass)?.norm() - 1.0).abs());
    }
    let dist = arrival_distribution(&psi, cfg.mass, &window, exec)?;
    let mut out = vec![
        CheckRecord::new("evolution_norm_drift", drift, 1e-12),
        CheckRecord::new("arrival_decomposition", dist.decomposition_defect(), 1e-12),
        CheckRecord::new(
            "arrival_normalisation",
            (dist.integral() - 1.0).abs(),
            1e-12,
        ),
    ];
    if let Some(lambda) = single_branch(&spec) {
        let interf = dist.interf.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        out.push(CheckRecord::new(
            "arrival_interference_single_branch",
            interf,
            1e-12,
        ));
        if spec.m > 0.0 || spec.p0 != 0.0 {
            let e0 = spec.p0.hypot(spec.m);
            let classical = -lambda.value() * spec.x0 * e0 / spec.p0;
            let tol = 0.5f64.max(3.0 * arrival_spread(&dist));
            let peak = dist.peak_time();
            out.push(CheckRecord::new(
                "arrival_peak_classical",
                (peak - classical).abs(),
                tol,
            ));
            if lambda == Sign::Plus {
                let flux = flux_at_origin(&psi, cfg.mass, &window, exec)?;
                out.push(CheckRecord::new(
                    "flux_peak_agreement",
                    (flux.peak_time() - peak).abs(),
                    tol,
                ));
            }
        }
    }
    Ok(out)
}

/// Standard deviation of `Pi_total` over its window.
pub fn arrival_spread(dist: &crate::arrival::ArrivalDistribution) -> f64 {
    let dt = dist.t[1] - dist.t[0];
    let mean = crate::quad::trapezoid(
        &dist
            .t
            .iter()
            .zip(&dist.total)
            .map(|(t, p)| t * p)
            .collect::<Vec<_>>(),
        dt,
    );
    let var = crate::quad::trapezoid(
        &dist
            .t
            .iter()
            .zip(&dist.total)
            .map(|(t, p)| (t - mean).powi(2) * p)
            .collect::<Vec<_>>(),
        dt,
    );
    var.max(0.0).sqrt()
}

/// L1 distance between the relativistic and nonrelativistic arrival
/// distributions of a slow packet (`p0/m = 0.01`).
pub fn nonrel_arrival_distance(exec: Execution) -> Result<f64> {
    let grid = build_grid(1e-4, 0.03, 1024, DerivOrder::Fourth)?;
    let spec = PacketSpec::single(1.0, -2000.0, 0.01, 0.0015, Sign::Plus, Spin::Up);
    let psi = build_packet(&spec, &grid)?;
    let w = TimeWindow::new(0.0, 5e5, 2001)?;
    let a = arrival_distribution(&psi, 1.0, &w, exec)?;
    let b = arrival_distribution_nonrel(&psi, 1.0, &w, exec)?;
    l1_distance(&a, &b)
}

pub fn limit_checks(exec: Execution) -> Result<Vec<CheckRecord>> {
    let table = spinor_limit_table(&ratio_lattice(3))?;
    let slope = (table.u_slope - 1.0).abs().max((table.w_slope - 1.0).abs());
    let mut gap = 0.0f64;
    for &r in &ratio_lattice(3) {
        let g = nr_eigen_limit_check(2.0, r, 1.0)?;
        let exact = (r * r).ln_1p() * 0.5;
        // sqrt(1 + r^2) - 1 = expm1(ln(1 + r^2) / 2)
        gap = gap.max((g.relative_gap - exact.exp_m1()).abs());
    }
    Ok(vec![
        CheckRecord::new("nr_spinor_slope", slope, 0.05),
        CheckRecord::new("nr_eigenvalue_gap", gap, 1e-12),
        CheckRecord::new("nr_arrival_l1", nonrel_arrival_distance(exec)?, 0.05),
    ])
}

pub fn duality_checks(rng: &mut ChaCha8Rng) -> Result<Vec<CheckRecord>> {
    let pts: Vec<(f64, f64)> = (0..16)
        .map(|k| (-4.0 + 0.55 * k as f64, 2.0 - 0.3 * k as f64))
        .collect();
    let mut residual = 0.0f64;
    for x in [-2.0, 0.0, 0.7, 3.0] {
        for tau in [-1.0, 0.0, 0.5, 4.0] {
            if x == 0.0 && tau == 0.0 {
                continue;
            }
            for b in Sign::BOTH {
                for s in Spin::BOTH {
                    let ds = dual_solution(x, b, s, tau)?;
                    residual = residual.max(dual_residual(&ds, &pts));
                }
            }
        }
    }
    let mut bijection = 0.0f64;
    for _ in 0..100 {
        let x = random_momentum(rng);
        let tau: f64 = rng.random_range(0.0..5.0);
        let e: f64 = rng.random_range(-10.0..10.0);
        let p: f64 = rng.random_range(-10.0..10.0);
        let d = duality_defect(x, tau, random_sign(rng), random_spin(rng), e, p)?;
        bijection = bijection.max(d.max());
    }
    let r = |n: i64, d: i64| Rational64::new(n, d);
    let mut exact = true;
    for (x, tau) in [
        (r(3, 1), r(4, 1)),
        (r(-5, 2), r(6, 1)),
        (r(8, 7), r(15, 7)),
        (r(20, 1), r(-21, 1)),
    ] {
        for b in Sign::BOTH {
            exact &= dual_time_exact(x, tau, b).is_some_and(|t| t * t - x * x == tau * tau);
        }
    }
    Ok(vec![
        CheckRecord::new("dual_residual", residual, 1e-13),
        CheckRecord::new("duality_bijection", bijection, 1e-12),
        CheckRecord::flag("dual_interval_exact", exact),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_config_passes() {
        let report = run_all(&RunConfig::default(), Execution::Parallel);
        for c in &report.checks {
            eprintln!(
                "{:40} {:.3e} <= {:.1e} {}",
                c.name, c.max_residual, c.tolerance, c.pass
            );
        }
        assert!(report.all_pass);
    }
}
