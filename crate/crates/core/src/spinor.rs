//! Closed-form Dirac matrices and spinors for motion along the x axis.
//!
//! Spinor component order is `(upper_1, upper_2, lower_1, lower_2)` in the
//! Dirac representation, where `beta = diag(1, 1, -1, -1)`.

use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::{Matrix2, Matrix4, Vector2, Vector4};
pub use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type CVec2 = Vector2<C64>;
pub type Spinor4 = Vector4<C64>;
pub type CMat2 = Matrix2<C64>;
pub type CMat4 = Matrix4<C64>;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);
const I: C64 = C64::new(0.0, 1.0);

/// A sign label: energy branch `lambda` or event branch `b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub const BOTH: [Sign; 2] = [Sign::Plus, Sign::Minus];

    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn of(x: f64) -> Sign {
        if x < 0.0 {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn index(self) -> usize {
        match self {
            Sign::Plus => 0,
            Sign::Minus => 1,
        }
    }
}

/// Spin label `s = +1/2` or `s = -1/2`, quantised along x.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spin {
    Up,
    Down,
}

impl Spin {
    pub const BOTH: [Spin; 2] = [Spin::Up, Spin::Down];

    /// `s` itself, `+-1/2`.
    pub fn value(self) -> f64 {
        0.5 * self.sign()
    }

    /// `2s`, the sigma_1 eigenvalue of `eta_s`.
    pub fn sign(self) -> f64 {
        match self {
            Spin::Up => 1.0,
            Spin::Down => -1.0,
        }
    }

    pub fn index(self) -> usize {
        match self {
            Spin::Up => 0,
            Spin::Down => 1,
        }
    }
}

pub fn sigma1() -> CMat2 {
    CMat2::new(ZERO, ONE, ONE, ZERO)
}

pub fn sigma2() -> CMat2 {
    CMat2::new(ZERO, -I, I, ZERO)
}

pub fn sigma3() -> CMat2 {
    CMat2::new(ONE, ZERO, ZERO, -ONE)
}

fn blocks(a: &CMat2, b: &CMat2, c: &CMat2, d: &CMat2) -> CMat4 {
    let mut m = CMat4::zeros();
    m.fixed_view_mut::<2, 2>(0, 0).copy_from(a);
    m.fixed_view_mut::<2, 2>(0, 2).copy_from(b);
    m.fixed_view_mut::<2, 2>(2, 0).copy_from(c);
    m.fixed_view_mut::<2, 2>(2, 2).copy_from(d);
    m
}

/// Dirac-representation gamma matrices together with the derived alpha/beta.
#[derive(Debug, Clone)]
pub struct DiracBasis {
    pub gamma: [CMat4; 4],
    pub alpha: [CMat4; 3],
    pub beta: CMat4,
    pub sigma1: CMat2,
    /// `diag(sigma_1, sigma_1)`.
    pub big_sigma1: CMat4,
}

impl Default for DiracBasis {
    fn default() -> Self {
        Self::new()
    }
}

impl DiracBasis {
    pub fn new() -> Self {
        let zero = CMat2::zeros();
        let id = CMat2::identity();
        let pauli = [sigma1(), sigma2(), sigma3()];
        let beta = blocks(&id, &zero, &zero, &(-id));
        let gamma_i = pauli.map(|s| blocks(&zero, &s, &(-s), &zero));
        let gamma = [beta, gamma_i[0], gamma_i[1], gamma_i[2]];
        let alpha = gamma_i.map(|g| beta * g);
        let s1 = sigma1();
        Self {
            gamma,
            alpha,
            beta,
            sigma1: s1,
            big_sigma1: blocks(&s1, &zero, &zero, &s1),
        }
    }

    /// Minkowski metric `diag(1, -1, -1, -1)`.
    pub fn metric(mu: usize, nu: usize) -> f64 {
        match (mu, nu) {
            (0, 0) => 1.0,
            (a, b) if a == b => -1.0,
            _ => 0.0,
        }
    }

    /// Largest entry of `{gamma^mu, gamma^nu} - 2 g^{mu nu} I` over all 16 pairs.
    pub fn clifford_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for mu in 0..4 {
            for nu in 0..4 {
                let anti = self.gamma[mu] * self.gamma[nu] + self.gamma[nu] * self.gamma[mu];
                let target = CMat4::identity() * C64::from(2.0 * Self::metric(mu, nu));
                worst = worst.max(max_abs(&(anti - target)));
            }
        }
        worst
    }

    /// Free Hamiltonian matrix `alpha_1 p + beta m`.
    pub fn hamiltonian(&self, p: f64, m: f64) -> CMat4 {
        self.alpha[0] * C64::from(p) + self.beta * C64::from(m)
    }
}

pub fn max_abs(m: &CMat4) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn is_hermitian(m: &CMat4, tol: f64) -> bool {
    max_abs(&(m - m.adjoint())) <= tol
}

/// `alpha_1 v` without building the matrix: swaps the 2-blocks through sigma_1.
pub fn alpha1_apply(v: &Spinor4) -> Spinor4 {
    Spinor4::new(v[3], v[2], v[1], v[0])
}

/// `beta v`.
pub fn beta_apply(v: &Spinor4) -> Spinor4 {
    Spinor4::new(v[0], v[1], -v[2], -v[3])
}

/// `(alpha_1 p + beta m) v`.
pub fn hamiltonian_apply(p: f64, m: f64, v: &Spinor4) -> Spinor4 {
    alpha1_apply(v) * C64::from(p) + beta_apply(v) * C64::from(m)
}

pub fn stack(upper: CVec2, lower: CVec2) -> Spinor4 {
    Spinor4::new(upper[0], upper[1], lower[0], lower[1])
}

/// Energy-momentum data for one plane wave: `E_p = sqrt(p^2 + m^2)`, `E = lambda E_p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KinematicPoint {
    pub m: f64,
    pub p: f64,
    pub lambda: Sign,
    pub s: Spin,
}

impl KinematicPoint {
    pub fn new(m: f64, p: f64, lambda: Sign, s: Spin) -> Result<Self> {
        check_mass(m)?;
        if p == 0.0 || !p.is_finite() {
            return Err(Error::ZeroMomentum);
        }
        Ok(Self { m, p, lambda, s })
    }

    pub fn energy_p(&self) -> f64 {
        self.p.hypot(self.m)
    }

    pub fn energy(&self) -> f64 {
        self.lambda.value() * self.energy_p()
    }
}

pub(crate) fn check_mass(m: f64) -> Result<()> {
    if m.is_finite() && m >= 0.0 {
        Ok(())
    } else {
        Err(Error::NegativeMass(m))
    }
}

/// A space-time event on the x axis with proper arrival time `tau`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EventPoint {
    pub x: f64,
    pub tau: f64,
    pub b: Sign,
    pub s: Spin,
}

impl EventPoint {
    pub fn new(x: f64, tau: f64, b: Sign, s: Spin) -> Result<Self> {
        if x == 0.0 && tau == 0.0 {
            return Err(Error::DegenerateEvent);
        }
        Ok(Self { x, tau, b, s })
    }

    /// `tau = x m / p`, the proper (nonrelativistic) arrival time.
    pub fn from_momentum(x: f64, m: f64, p: f64, b: Sign, s: Spin) -> Result<Self> {
        if p == 0.0 {
            return Err(Error::ZeroMomentum);
        }
        Self::new(x, x * m / p, b, s)
    }

    pub fn t_x(&self) -> f64 {
        self.x.hypot(self.tau)
    }
}

/// Helicity spinor `eta_s`: the sigma_1 eigenvector `(1, +-1)/sqrt(2)`.
pub fn helicity_spinor(s: Spin) -> CVec2 {
    CVec2::new(
        C64::from(FRAC_1_SQRT_2),
        C64::from(s.sign() * FRAC_1_SQRT_2),
    )
}

/// Positive-branch amplitudes `(A, B)` with `phi_{+,s} = (A eta; B sigma_1 eta)`.
///
/// `A = sqrt((E+m)/2E)`, `B = p / sqrt(2E(E+m))`. Both stay finite at `m = 0`.
fn positive_amplitudes(p: f64, m: f64) -> (f64, f64, f64) {
    let e = p.hypot(m);
    let a = ((e + m) / (2.0 * e)).sqrt();
    let b = p / (2.0 * e * (e + m)).sqrt();
    (e, a, b)
}

fn positive_amplitude_derivatives(p: f64, m: f64) -> (f64, f64) {
    let (e, a, _) = positive_amplitudes(p, m);
    let da = -m * p / (4.0 * e * e * e * a);
    let db = m * (e + m) / (2.0 * e * e * (2.0 * e * (e + m)).sqrt());
    (da, db)
}

/// Amplitudes of `phi_{lambda,s}` in the form `(A eta; B sigma_1 eta)`.
///
/// The negative branch uses `E - m = p^2/(E + m)` so the square root of the
/// ratio of two negative numbers never appears; the sign sits in `B`.
fn branch_amplitudes(p: f64, m: f64, lambda: Sign) -> (f64, f64) {
    let (_, a, b) = positive_amplitudes(p, m);
    match lambda {
        Sign::Plus => (a, b),
        Sign::Minus => (p.signum() * b, -p.signum() * a),
    }
}

fn branch_amplitude_derivatives(p: f64, m: f64, lambda: Sign) -> (f64, f64) {
    let (da, db) = positive_amplitude_derivatives(p, m);
    match lambda {
        Sign::Plus => (da, db),
        Sign::Minus => (p.signum() * db, -p.signum() * da),
    }
}

fn assemble(upper: f64, lower: f64, s: Spin) -> Spinor4 {
    let eta = helicity_spinor(s);
    // sigma_1 eta_s = 2s eta_s
    stack(eta * C64::from(upper), eta * C64::from(lower * s.sign()))
}

/// Momentum-space Dirac spinor `phi_{lambda s}(p)`, eigenvector of
/// `alpha_1 p + beta m` with eigenvalue `lambda E_p`.
pub fn energy_spinor(k: &KinematicPoint) -> Spinor4 {
    let (a, b) = branch_amplitudes(k.p, k.m, k.lambda);
    assemble(a, b, k.s)
}

/// `d phi_{lambda s} / dp`, from the closed forms.
pub fn energy_spinor_derivative(k: &KinematicPoint) -> Spinor4 {
    let (da, db) = branch_amplitude_derivatives(k.p, k.m, k.lambda);
    assemble(da, db, k.s)
}

/// Event spinor `xi_{bs}(x)` built on `(x, tau, t_x)` the way the energy
/// spinor is built on `(p, m, E_p)`.
pub fn event_spinor(e: &EventPoint) -> Spinor4 {
    let t = e.t_x();
    let b = e.b.value();
    // q = t + b tau >= 0, evaluated without cancellation
    let q = if b * e.tau >= 0.0 {
        t + e.tau.abs()
    } else {
        e.x * e.x / (t + e.tau.abs())
    };
    let (upper, lower) = if q == 0.0 {
        // x = 0 with b tau < 0: eigenvector of beta with eigenvalue -1
        (0.0, b)
    } else {
        ((q / (2.0 * t)).sqrt(), b * e.x / (2.0 * t * q).sqrt())
    };
    assemble(upper, lower, e.s)
}

/// The pair `(u(p,s), w(p,s))` of positive-energy and charge-conjugate-type spinors.
pub fn uw_spinors(k: &KinematicPoint) -> Result<(Spinor4, Spinor4)> {
    if k.m <= 0.0 {
        return Err(Error::NegativeMass(k.m));
    }
    let (_, a, b) = positive_amplitudes(k.p, k.m);
    let eta = helicity_spinor(k.s);
    let u = assemble(a, b, k.s);
    let w = stack(eta * C64::from(b * k.s.sign()), eta * C64::from(a));
    Ok((u, w))
}

/// Nonrelativistic limit `zeta_{+s} = (eta_s; 0)`, `zeta_{-s} = (0; eta_s)`.
pub fn nr_limit_spinor(lambda: Sign, s: Spin) -> Spinor4 {
    let eta = helicity_spinor(s);
    match lambda {
        Sign::Plus => stack(eta, CVec2::zeros()),
        Sign::Minus => stack(CVec2::zeros(), eta),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &Spinor4, b: &[f64; 4], tol: f64) -> bool {
        a.iter()
            .zip(b)
            .all(|(z, &r)| (z.re - r).abs() <= tol && z.im.abs() <= tol)
    }

    #[test]
    fn helicity_spinors() {
        let up = helicity_spinor(Spin::Up);
        let down = helicity_spinor(Spin::Down);
        assert!((up[0].re - FRAC_1_SQRT_2).abs() < 1e-16);
        assert!((up[1].re - FRAC_1_SQRT_2).abs() < 1e-16);
        assert!((down[1].re + FRAC_1_SQRT_2).abs() < 1e-16);
        assert!(up.dotc(&down).norm() < 1e-16);
        let s1 = sigma1();
        for s in Spin::BOTH {
            let eta = helicity_spinor(s);
            assert!((s1 * eta - eta * C64::from(s.sign())).norm() < 1e-16);
        }
        let completeness = up * up.adjoint() + down * down.adjoint();
        assert!((completeness - CMat2::identity()).norm() < 1e-15);
    }

    #[test]
    fn energy_spinor_3_4_5() {
        let k = KinematicPoint::new(3.0, 4.0, Sign::Plus, Spin::Up).unwrap();
        let expect = [0.4f64.sqrt(), 0.4f64.sqrt(), 0.1f64.sqrt(), 0.1f64.sqrt()];
        assert!(close(&energy_spinor(&k), &expect, 1e-15));
        let k = KinematicPoint::new(3.0, 4.0, Sign::Minus, Spin::Up).unwrap();
        let expect = [0.1f64.sqrt(), 0.1f64.sqrt(), -0.4f64.sqrt(), -0.4f64.sqrt()];
        assert!(close(&energy_spinor(&k), &expect, 1e-15));
    }

    #[test]
    fn energy_spinor_matches_literal_formula() {
        // direct transcription with complex square roots as a cross-check
        for &(m, p) in &[(1.0f64, 0.3f64), (2.0, -1.7), (0.5, 4.0), (3.0, -0.01)] {
            for lambda in Sign::BOTH {
                for s in Spin::BOTH {
                    let e = lambda.value() * (p * p + m * m).sqrt();
                    let pref = ((m + e) / (2.0 * e)).sqrt();
                    let eta = helicity_spinor(s);
                    let lower = sigma1() * eta * C64::from(p / (m + e));
                    let literal = stack(eta, lower) * C64::from(pref);
                    let k = KinematicPoint::new(m, p, lambda, s).unwrap();
                    // the literal form loses digits to m + e when lambda = -1 and p << m
                    let gap = p * p / (p.hypot(m) + m);
                    let tol = 1e-12f64.max(1e-15 * p.hypot(m) / gap);
                    let d = (energy_spinor(&k) - literal).norm();
                    assert!(d < tol, "{m} {p} {lambda:?} {s:?} {d}");
                }
            }
        }
    }

    #[test]
    fn rejects_bad_kinematics() {
        assert!(matches!(
            KinematicPoint::new(1.0, 0.0, Sign::Plus, Spin::Up),
            Err(Error::ZeroMomentum)
        ));
        assert!(matches!(
            KinematicPoint::new(-1.0, 1.0, Sign::Plus, Spin::Up),
            Err(Error::NegativeMass(_))
        ));
        assert!(matches!(
            EventPoint::new(0.0, 0.0, Sign::Plus, Spin::Up),
            Err(Error::DegenerateEvent)
        ));
    }

    #[test]
    fn massless_branch_is_continuous() {
        for p in [-2.0, -0.1, 0.5, 3.0] {
            for lambda in Sign::BOTH {
                let k = KinematicPoint::new(0.0, p, lambda, Spin::Up).unwrap();
                let expected = {
                    let eta = helicity_spinor(Spin::Up);
                    stack(
                        eta,
                        sigma1() * eta * C64::from(lambda.value() * f64::signum(p)),
                    ) * C64::from(FRAC_1_SQRT_2)
                };
                assert!((energy_spinor(&k) - expected).norm() < 1e-15);
                let tiny = KinematicPoint::new(1e-9, p, lambda, Spin::Up).unwrap();
                assert!((energy_spinor(&tiny) - expected).norm() < 1e-8);
            }
        }
    }

    #[test]
    fn event_spinor_example() {
        let e = EventPoint::new(3.0, 2.25, Sign::Plus, Spin::Up).unwrap();
        assert_eq!(e.t_x(), 3.75);
        let expect = [0.4f64.sqrt(), 0.4f64.sqrt(), 0.1f64.sqrt(), 0.1f64.sqrt()];
        assert!(close(&event_spinor(&e), &expect, 1e-15));
        // tau = 0
        for x in [-2.0, 1.5] {
            let e = EventPoint::new(x, 0.0, Sign::Plus, Spin::Down).unwrap();
            let eta = helicity_spinor(Spin::Down);
            let expected =
                stack(eta, sigma1() * eta * C64::from(f64::signum(x))) * C64::from(FRAC_1_SQRT_2);
            assert!((event_spinor(&e) - expected).norm() < 1e-15);
        }
    }

    #[test]
    fn event_spinor_at_x_zero() {
        for (tau, b) in [
            (1.0, Sign::Plus),
            (-1.0, Sign::Minus),
            (1.0, Sign::Minus),
            (-2.0, Sign::Plus),
        ] {
            let e = EventPoint::new(0.0, tau, b, Spin::Up).unwrap();
            let xi = event_spinor(&e);
            assert!((xi.norm() - 1.0).abs() < 1e-15);
            // beta xi = sign(b tau) xi
            let lhs = beta_apply(&xi);
            assert!((lhs - xi * C64::from(f64::signum(b.value() * tau))).norm() < 1e-15);
        }
    }

    #[test]
    fn uw_example_and_relation() {
        let k = KinematicPoint::new(3.0, 4.0, Sign::Plus, Spin::Up).unwrap();
        let (u, w) = uw_spinors(&k).unwrap();
        let expect = [0.1f64.sqrt(), 0.1f64.sqrt(), 0.4f64.sqrt(), 0.4f64.sqrt()];
        assert!(close(&w, &expect, 1e-15));
        assert!((u.norm() - 1.0).abs() < 1e-15);
        assert!(uw_spinors(&KinematicPoint::new(0.0, 1.0, Sign::Plus, Spin::Up).unwrap()).is_err());
    }

    #[test]
    fn nr_limit_spinors() {
        let z = nr_limit_spinor(Sign::Plus, Spin::Up);
        assert!(close(&z, &[FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0, 0.0], 1e-16));
        let z = nr_limit_spinor(Sign::Minus, Spin::Down);
        assert!(close(&z, &[0.0, 0.0, FRAC_1_SQRT_2, -FRAC_1_SQRT_2], 1e-16));
        for s in Spin::BOTH {
            for s2 in Spin::BOTH {
                let a = nr_limit_spinor(Sign::Plus, s);
                let b = nr_limit_spinor(Sign::Minus, s2);
                assert_eq!(a.dotc(&b).norm(), 0.0);
            }
        }
    }

    #[test]
    fn derivative_matches_central_difference() {
        for &(m, p) in &[(1.0, 0.7), (3.0, -2.0), (0.5, 5.0)] {
            for lambda in Sign::BOTH {
                let h = 1e-5;
                let at =
                    |q: f64| energy_spinor(&KinematicPoint::new(m, q, lambda, Spin::Down).unwrap());
                let fd = (at(p + h) - at(p - h)) / C64::from(2.0 * h);
                let k = KinematicPoint::new(m, p, lambda, Spin::Down).unwrap();
                assert!((energy_spinor_derivative(&k) - fd).norm() < 1e-8);
            }
        }
    }

    #[test]
    fn clifford_and_hermiticity() {
        let d = DiracBasis::new();
        assert!(d.clifford_defect() <= 1e-15);
        assert!(is_hermitian(&d.alpha[0], 0.0));
        assert!(is_hermitian(&d.beta, 0.0));
        let a1 = d.alpha[0];
        assert!(max_abs(&(a1 * a1 - CMat4::identity())) == 0.0);
        assert!(max_abs(&(a1 * d.beta + d.beta * a1)) == 0.0);
        let v = Spinor4::new(
            C64::new(1.0, 2.0),
            C64::new(-0.5, 0.1),
            C64::new(0.3, 0.0),
            C64::new(0.0, -1.0),
        );
        assert!((alpha1_apply(&v) - a1 * v).norm() == 0.0);
        assert!((hamiltonian_apply(0.7, 1.3, &v) - d.hamiltonian(0.7, 1.3) * v).norm() < 1e-15);
    }
}
