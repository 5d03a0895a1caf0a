//! Method-of-lines solver for 1D scalar conservation laws and the 1D Euler
//! system: Lax-Friedrichs splitting, WENO flux assembly, boundary handling,
//! and TVD-RK3 time stepping.

use crate::error::{Error, Result};
use crate::euler::{char_line_rhs, family_speeds, Euler1d};
use crate::weno::{reconstruct, Stencil, WeightingFn};

/// Uniform cell-centered grid on [a, b].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1d {
    pub a: f64,
    pub b: f64,
    pub n: usize,
}

impl Grid1d {
    pub fn new(a: f64, b: f64, n: usize) -> Result<Self> {
        if !(b > a) {
            return Err(Error::Config(format!("empty domain [{a}, {b}]")));
        }
        if n < 5 {
            return Err(Error::Config(format!(
                "grid needs at least 5 cells for the stencil and ghosts, got {n}"
            )));
        }
        Ok(Grid1d { a, b, n })
    }

    #[inline]
    pub fn dx(&self) -> f64 {
        (self.b - self.a) / self.n as f64
    }

    /// Cell center x_i = a + dx/2 + i dx.
    #[inline]
    pub fn center(&self, i: usize) -> f64 {
        self.a + 0.5 * self.dx() + i as f64 * self.dx()
    }

    pub fn centers(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.center(i)).collect()
    }
}

/// Boundary treatment of one domain side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bc<T> {
    /// Wraparound copy from the opposite side.
    Periodic,
    /// Zeroth-order extrapolation of the edge cell.
    Outflow,
    /// Mirror copy; system components are reflected by the caller's rule.
    Reflective,
    /// Ghost cells held at a fixed state.
    Dirichlet(T),
}

/// Boundary pair for a 1D field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BcPair<T> {
    pub left: Bc<T>,
    pub right: Bc<T>,
}

impl<T> BcPair<T> {
    pub fn periodic() -> Self {
        BcPair {
            left: Bc::Periodic,
            right: Bc::Periodic,
        }
    }

    pub fn outflow() -> Self {
        BcPair {
            left: Bc::Outflow,
            right: Bc::Outflow,
        }
    }

    pub fn reflective() -> Self {
        BcPair {
            left: Bc::Reflective,
            right: Bc::Reflective,
        }
    }
}

/// Extends a field with two ghost cells per side.
///
/// `mirror` maps a cell value to its wall-reflected counterpart (identity for
/// scalars, momentum negation for Euler states).
pub fn fill_ghosts<T: Copy>(
    interior: &[T],
    bc: &BcPair<T>,
    mirror: impl Fn(T) -> T,
) -> Vec<T> {
    let n = interior.len();
    debug_assert!(n >= 2);
    let mut ext = Vec::with_capacity(n + 4);
    match bc.left {
        Bc::Periodic => {
            ext.push(interior[n - 2]);
            ext.push(interior[n - 1]);
        }
        Bc::Outflow => {
            ext.push(interior[0]);
            ext.push(interior[0]);
        }
        Bc::Reflective => {
            ext.push(mirror(interior[1]));
            ext.push(mirror(interior[0]));
        }
        Bc::Dirichlet(state) => {
            ext.push(state);
            ext.push(state);
        }
    }
    ext.extend_from_slice(interior);
    match bc.right {
        Bc::Periodic => {
            ext.push(interior[0]);
            ext.push(interior[1]);
        }
        Bc::Outflow => {
            ext.push(interior[n - 1]);
            ext.push(interior[n - 1]);
        }
        Bc::Reflective => {
            ext.push(mirror(interior[n - 1]));
            ext.push(mirror(interior[n - 2]));
        }
        Bc::Dirichlet(state) => {
            ext.push(state);
            ext.push(state);
        }
    }
    ext
}

/// Scalar flux functions of the benchmark problems.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Flux {
    /// f(u) = u
    Advection,
    /// f(u) = u^2 / 2
    Burgers,
    /// f(u) = 4u^2 / (4u^2 + (1-u)^2)
    BuckleyLeverett,
    /// f(u) = (u^2 - 1)(u^2 - 4) / 4
    Quartic,
}

impl Flux {
    #[inline]
    pub fn value(&self, u: f64) -> f64 {
        match self {
            Flux::Advection => u,
            Flux::Burgers => 0.5 * u * u,
            Flux::BuckleyLeverett => {
                let a = 4.0 * u * u;
                let b = (1.0 - u) * (1.0 - u);
                a / (a + b)
            }
            Flux::Quartic => 0.25 * (u * u - 1.0) * (u * u - 4.0),
        }
    }

    #[inline]
    pub fn dvalue(&self, u: f64) -> f64 {
        match self {
            Flux::Advection => 1.0,
            Flux::Burgers => u,
            Flux::BuckleyLeverett => {
                let d = 4.0 * u * u + (1.0 - u) * (1.0 - u);
                8.0 * u * (1.0 - u) / (d * d)
            }
            Flux::Quartic => 0.5 * u * (2.0 * u * u - 5.0),
        }
    }

    /// Maximum wave speed over a value interval, the splitting speed.
    ///
    /// The nonconvex fluxes are sampled densely over [umin, umax]; the
    /// interval matters, not just its endpoints.
    pub fn alpha(&self, umin: f64, umax: f64) -> f64 {
        match self {
            Flux::Advection => 1.0,
            Flux::Burgers => umin.abs().max(umax.abs()),
            Flux::BuckleyLeverett | Flux::Quartic => {
                const SAMPLES: usize = 2048;
                let span = umax - umin;
                let mut a = self.dvalue(umin).abs().max(self.dvalue(umax).abs());
                for k in 1..SAMPLES {
                    let u = umin + span * k as f64 / SAMPLES as f64;
                    a = a.max(self.dvalue(u).abs());
                }
                a
            }
        }
    }
}

/// Lax-Friedrichs splitting of one point value: (f + alpha u, f - alpha u)/2.
#[inline]
pub fn lf_split(f_value: f64, u_value: f64, alpha: f64) -> (f64, f64) {
    (
        0.5 * (f_value + alpha * u_value),
        0.5 * (f_value - alpha * u_value),
    )
}

/// Interface fluxes of a ghost-extended scalar line (n + 1 values).
pub fn scalar_line_fluxes<W: WeightingFn + ?Sized>(
    u_ext: &[f64],
    flux: Flux,
    alpha: f64,
    weighting: &W,
) -> Vec<f64> {
    let n = u_ext.len() - 4;
    let mut fp = Vec::with_capacity(u_ext.len());
    let mut fm = Vec::with_capacity(u_ext.len());
    for &u in u_ext {
        let (p, m) = lf_split(flux.value(u), u, alpha);
        fp.push(p);
        fm.push(m);
    }
    let mut h = Vec::with_capacity(n + 1);
    for j in 0..=n {
        let plus = Stencil {
            f0: fp[j],
            f1: fp[j + 1],
            f2: fp[j + 2],
        };
        let minus = Stencil {
            f0: fm[j + 3],
            f1: fm[j + 2],
            f2: fm[j + 1],
        };
        h.push(
            reconstruct(&plus, &weighting.weights(&plus))
                + reconstruct(&minus, &weighting.weights(&minus)),
        );
    }
    h
}

fn check_finite_scalar(rhs: &[f64], t: f64) -> Result<()> {
    for (i, v) in rhs.iter().enumerate() {
        if !v.is_finite() {
            return Err(Error::NonFinite {
                location: format!("i={i}"),
                time: t,
            });
        }
    }
    Ok(())
}

/// Spatial operator of a 1D scalar conservation law in flux-difference form.
///
/// The splitting speed is the maximum of |f'| over the interval spanned by
/// the current solution, recomputed on every call (one call per RK stage).
pub fn spatial_operator_scalar<W: WeightingFn + ?Sized>(
    u: &[f64],
    flux: Flux,
    grid: &Grid1d,
    bc: &BcPair<f64>,
    weighting: &W,
    t: f64,
) -> Result<Vec<f64>> {
    let ext = fill_ghosts(u, bc, |v| v);
    let (mut umin, mut umax) = (f64::INFINITY, f64::NEG_INFINITY);
    for &v in &ext {
        if !v.is_finite() {
            return Err(Error::NonFinite {
                location: "ghost-extended field".into(),
                time: t,
            });
        }
        umin = umin.min(v);
        umax = umax.max(v);
    }
    let alpha = flux.alpha(umin, umax);
    let h = scalar_line_fluxes(&ext, flux, alpha, weighting);
    let inv_dx = 1.0 / grid.dx();
    let rhs: Vec<f64> = (0..grid.n).map(|i| -(h[i + 1] - h[i]) * inv_dx).collect();
    check_finite_scalar(&rhs, t)?;
    Ok(rhs)
}

/// Wall reflection of a 1D Euler state: momentum flips sign.
#[inline]
pub fn euler_mirror(q: [f64; 3]) -> [f64; 3] {
    [q[0], -q[1], q[2]]
}

/// Spatial operator of the 1D Euler system under characteristic-wise
/// Lax-Friedrichs splitting with per-family speeds.
pub fn spatial_operator_euler<W: WeightingFn + ?Sized>(
    q: &[[f64; 3]],
    grid: &Grid1d,
    bc: &BcPair<[f64; 3]>,
    gamma: f64,
    weighting: &W,
    t: f64,
) -> Result<Vec<[f64; 3]>> {
    let sys = Euler1d { gamma };
    let ext = fill_ghosts(q, bc, euler_mirror);
    let alphas = family_speeds(&sys, &ext).map_err(|e| locate_euler(e, t))?;
    let rhs = char_line_rhs(&sys, &ext, &alphas, grid.dx(), weighting)
        .map_err(|e| locate_euler(e, t))?;
    for (i, cell) in rhs.iter().enumerate() {
        if !cell.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite {
                location: format!("i={i}"),
                time: t,
            });
        }
    }
    Ok(rhs)
}

fn locate_euler(e: Error, t: f64) -> Error {
    match e {
        Error::InvalidInput(msg) => Error::Positivity {
            quantity: "density or pressure",
            location: msg,
            time: t,
        },
        other => other,
    }
}

/// State vectors supporting the three-stage RK combinations.
pub trait RkVec: Clone {
    /// a x + c z
    fn lc2(a: f64, x: &Self, c: f64, z: &Self) -> Self;
    /// a x + b y + c z
    fn lc3(a: f64, x: &Self, b: f64, y: &Self, c: f64, z: &Self) -> Self;
}

impl RkVec for Vec<f64> {
    fn lc2(a: f64, x: &Self, c: f64, z: &Self) -> Self {
        x.iter().zip(z).map(|(xi, zi)| a * xi + c * zi).collect()
    }

    fn lc3(a: f64, x: &Self, b: f64, y: &Self, c: f64, z: &Self) -> Self {
        x.iter()
            .zip(y)
            .zip(z)
            .map(|((xi, yi), zi)| a * xi + b * yi + c * zi)
            .collect()
    }
}

impl<const NC: usize> RkVec for Vec<[f64; NC]> {
    fn lc2(a: f64, x: &Self, c: f64, z: &Self) -> Self {
        x.iter()
            .zip(z)
            .map(|(xi, zi)| {
                let mut out = [0.0; NC];
                for r in 0..NC {
                    out[r] = a * xi[r] + c * zi[r];
                }
                out
            })
            .collect()
    }

    fn lc3(a: f64, x: &Self, b: f64, y: &Self, c: f64, z: &Self) -> Self {
        x.iter()
            .zip(y)
            .zip(z)
            .map(|((xi, yi), zi)| {
                let mut out = [0.0; NC];
                for r in 0..NC {
                    out[r] = a * xi[r] + b * yi[r] + c * zi[r];
                }
                out
            })
            .collect()
    }
}

/// One step of the three-stage TVD Runge-Kutta method.
pub fn rk3_step<V: RkVec>(
    u: &V,
    dt: f64,
    mut operator: impl FnMut(&V) -> Result<V>,
) -> Result<V> {
    let l0 = operator(u)?;
    let u1 = V::lc2(1.0, u, dt, &l0);
    let l1 = operator(&u1)?;
    let u2 = V::lc3(0.75, u, 0.25, &u1, 0.25 * dt, &l1);
    let l2 = operator(&u2)?;
    Ok(V::lc3(
        1.0 / 3.0,
        u,
        2.0 / 3.0,
        &u2,
        2.0 / 3.0 * dt,
        &l2,
    ))
}

/// Time-step policy of a problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DtPolicy {
    /// dt = CFL dx, the linear-advection benchmark convention.
    FixedDxMultiple,
    /// dt = CFL dx / max wave speed, recomputed each step.
    CflOverMaxSpeed,
}

/// CFL number and step policy.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SolverConfig {
    pub cfl: f64,
    pub dt_policy: DtPolicy,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            cfl: 0.4,
            dt_policy: DtPolicy::CflOverMaxSpeed,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if self.cfl > 0.0 && self.cfl <= 1.0 {
            Ok(())
        } else {
            Err(Error::Config(format!("CFL must lie in (0, 1], got {}", self.cfl)))
        }
    }
}

/// Step history of an advance call.
#[derive(Debug, Clone, Default)]
pub struct AdvanceStats {
    pub steps: usize,
    pub dts: Vec<f64>,
}

/// Splits the remaining interval into the next step size, clamping the last
/// step so the final time is hit exactly.
fn next_dt(t: f64, tfinal: f64, dt_nominal: f64) -> (f64, bool) {
    let remaining = tfinal - t;
    if dt_nominal >= remaining * (1.0 - 1e-12) {
        (remaining, true)
    } else {
        (dt_nominal, false)
    }
}

/// A 1D scalar solution with its grid, boundary pair, and flux.
#[derive(Debug, Clone)]
pub struct ScalarState1d {
    pub grid: Grid1d,
    pub u: Vec<f64>,
    pub t: f64,
    pub bc: BcPair<f64>,
    pub flux: Flux,
}

impl ScalarState1d {
    pub fn new(grid: Grid1d, bc: BcPair<f64>, flux: Flux, ic: impl Fn(f64) -> f64) -> Self {
        let u = (0..grid.n).map(|i| ic(grid.center(i))).collect();
        ScalarState1d {
            grid,
            u,
            t: 0.0,
            bc,
            flux,
        }
    }

    /// Advances the state to exactly `tfinal`.
    pub fn advance_to<W: WeightingFn + ?Sized>(
        &mut self,
        tfinal: f64,
        cfg: &SolverConfig,
        weighting: &W,
    ) -> Result<AdvanceStats> {
        cfg.validate()?;
        if tfinal < self.t {
            return Err(Error::Config(format!(
                "final time {tfinal} is before current time {}",
                self.t
            )));
        }
        let mut stats = AdvanceStats::default();
        let dx = self.grid.dx();
        while self.t < tfinal {
            let dt_nominal = match cfg.dt_policy {
                DtPolicy::FixedDxMultiple => cfg.cfl * dx,
                DtPolicy::CflOverMaxSpeed => {
                    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
                    for &v in &self.u {
                        lo = lo.min(v);
                        hi = hi.max(v);
                    }
                    let alpha = self.flux.alpha(lo, hi);
                    if alpha > 0.0 {
                        cfg.cfl * dx / alpha
                    } else {
                        cfg.cfl * dx
                    }
                }
            };
            let (dt, last) = next_dt(self.t, tfinal, dt_nominal);
            let grid = self.grid;
            let bc = self.bc;
            let flux = self.flux;
            let t_now = self.t;
            self.u = rk3_step(&self.u, dt, |u| {
                spatial_operator_scalar(u, flux, &grid, &bc, weighting, t_now)
            })?;
            self.t = if last { tfinal } else { self.t + dt };
            stats.steps += 1;
            stats.dts.push(dt);
        }
        Ok(stats)
    }
}

/// A 1D Euler solution in conserved variables.
#[derive(Debug, Clone)]
pub struct EulerState1d {
    pub grid: Grid1d,
    pub q: Vec<[f64; 3]>,
    pub t: f64,
    pub bc: BcPair<[f64; 3]>,
    pub gamma: f64,
}

impl EulerState1d {
    /// Builds the state from a primitive-variable initial condition.
    pub fn from_primitive(
        grid: Grid1d,
        bc: BcPair<[f64; 3]>,
        gamma: f64,
        ic: impl Fn(f64) -> (f64, f64, f64),
    ) -> Result<Self> {
        let mut q = Vec::with_capacity(grid.n);
        for i in 0..grid.n {
            let (rho, u, p) = ic(grid.center(i));
            q.push(crate::euler::euler_prim_to_cons(rho, u, p, gamma)?);
        }
        Ok(EulerState1d {
            grid,
            q,
            t: 0.0,
            bc,
            gamma,
        })
    }

    /// Maximum |u| + c over the current field.
    pub fn max_wave_speed(&self) -> Result<f64> {
        let mut a: f64 = 0.0;
        for (i, cell) in self.q.iter().enumerate() {
            let (rho, u, p) =
                crate::euler::euler_cons_to_prim(cell, self.gamma).map_err(|_| {
                    Error::Positivity {
                        quantity: "density or pressure",
                        location: format!("i={i}"),
                        time: self.t,
                    }
                })?;
            a = a.max(u.abs() + (self.gamma * p / rho).sqrt());
        }
        Ok(a)
    }

    /// Advances the state to exactly `tfinal`.
    pub fn advance_to<W: WeightingFn + ?Sized>(
        &mut self,
        tfinal: f64,
        cfg: &SolverConfig,
        weighting: &W,
    ) -> Result<AdvanceStats> {
        cfg.validate()?;
        if tfinal < self.t {
            return Err(Error::Config(format!(
                "final time {tfinal} is before current time {}",
                self.t
            )));
        }
        let mut stats = AdvanceStats::default();
        let dx = self.grid.dx();
        while self.t < tfinal {
            let dt_nominal = match cfg.dt_policy {
                DtPolicy::FixedDxMultiple => cfg.cfl * dx,
                DtPolicy::CflOverMaxSpeed => {
                    let alpha = self.max_wave_speed()?;
                    if alpha > 0.0 {
                        cfg.cfl * dx / alpha
                    } else {
                        cfg.cfl * dx
                    }
                }
            };
            let (dt, last) = next_dt(self.t, tfinal, dt_nominal);
            let grid = self.grid;
            let bc = self.bc;
            let gamma = self.gamma;
            let t_now = self.t;
            self.q = rk3_step(&self.q, dt, |q| {
                spatial_operator_euler(q, &grid, &bc, gamma, weighting, t_now)
            })?;
            self.t = if last { tfinal } else { self.t + dt };
            stats.steps += 1;
            stats.dts.push(dt);
        }
        Ok(stats)
    }

    /// Primitive-variable view (rho, u, P) of the current field.
    pub fn primitives(&self) -> Result<Vec<(f64, f64, f64)>> {
        self.q
            .iter()
            .map(|q| crate::euler::euler_cons_to_prim(q, self.gamma))
            .collect()
    }

    pub fn density(&self) -> Vec<f64> {
        self.q.iter().map(|q| q[0]).collect()
    }
}
