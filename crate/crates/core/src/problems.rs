//! Registry of the benchmark problems: initial conditions, fluxes, domains,
//! final times, boundary kinds, and exact or reference solutions.

use std::path::Path;

use crate::error::{Error, Result};
use crate::riemann::{self, RiemannStates};
use crate::solver1d::{Bc, BcPair, DtPolicy, Flux, Grid1d, SolverConfig};
use crate::weno::{KernelConfig, ZWeighting};

/// What kind of equation and dimensionality a problem uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProblemKind {
    Scalar1d,
    Euler1d,
    Scalar2d,
    Euler2d,
}

/// How the reference solution of a problem is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExactHandle {
    /// Closed-form pointwise solution.
    Exact,
    /// Sampled from the exact Riemann solver.
    RiemannExact,
    /// Self-generated fine-grid run restricted to the coarse grid.
    FineGridReference,
    /// No reference; qualitative runs only.
    None,
}

/// Boundary prescription, problem-level.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryDesc {
    Periodic,
    Outflow,
    Reflective,
    /// Fixed post-shock inflow on the left, outflow on the right.
    ShockEntropyInflow,
    /// Quadrant symmetry: reflective on the low sides, outflow on the high.
    ExplosionQuadrant,
    /// The classical double Mach reflection prescription.
    DoubleMach,
}

/// Identifier of every registered benchmark.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProblemId {
    AdvectionSine,
    AdvectionComposite,
    BurgersRiemann,
    BuckleyLeverett,
    QuarticNonconvexA,
    QuarticNonconvexB,
    EulerDensityWave,
    Sod,
    Lax,
    One23,
    DoubleRarefaction,
    ShockEntropyK5,
    ShockEntropyK10,
    Blastwaves,
    Advection2dSquare,
    Burgers2d,
    Riemann2d,
    Explosion,
    DoubleMach,
    KelvinHelmholtz,
}

/// A fully populated benchmark description.
#[derive(Debug, Clone, Copy)]
pub struct ProblemSpec {
    pub id: ProblemId,
    pub name: &'static str,
    pub kind: ProblemKind,
    pub flux: Option<Flux>,
    /// x-range, and y-range for 2D problems.
    pub domain: ((f64, f64), (f64, f64)),
    pub default_n: (usize, usize),
    pub tfinal: f64,
    pub cfl: f64,
    pub dt_policy: DtPolicy,
    pub boundary: BoundaryDesc,
    pub exact: ExactHandle,
    /// Excluded from default test runs; run explicitly via the CLI.
    pub long_running: bool,
}

pub const GAMMA: f64 = 1.4;

const SQRT3: f64 = 1.732050807568877293527446341505872367_f64;

/// All registry entries in a fixed order.
pub fn all_problems() -> Vec<ProblemSpec> {
    use BoundaryDesc as B;
    use DtPolicy::*;
    use ExactHandle as E;
    use ProblemId::*;
    use ProblemKind::*;
    let p = |id,
             name,
             kind,
             flux,
             domain,
             default_n,
             tfinal,
             dt_policy,
             boundary,
             exact,
             long_running| ProblemSpec {
        id,
        name,
        kind,
        flux,
        domain,
        default_n,
        tfinal,
        cfl: 0.4,
        dt_policy,
        boundary,
        exact,
        long_running,
    };
    let d1 = |a, b| ((a, b), (0.0, 0.0));
    vec![
        p(AdvectionSine, "advection-sine", Scalar1d, Some(Flux::Advection),
          d1(-1.0, 1.0), (160, 1), 2.0, FixedDxMultiple, B::Periodic, E::Exact, false),
        p(AdvectionComposite, "advection-composite", Scalar1d, Some(Flux::Advection),
          d1(-1.0, 1.0), (200, 1), 8.0, FixedDxMultiple, B::Periodic, E::Exact, false),
        p(BurgersRiemann, "burgers-riemann", Scalar1d, Some(Flux::Burgers),
          d1(-1.0, 1.0), (100, 1), 1.0, CflOverMaxSpeed, B::Outflow, E::Exact, false),
        p(BuckleyLeverett, "buckley-leverett", Scalar1d, Some(Flux::BuckleyLeverett),
          d1(-1.0, 1.0), (80, 1), 0.5, CflOverMaxSpeed, B::Outflow, E::FineGridReference, false),
        p(QuarticNonconvexA, "quartic-nonconvex-a", Scalar1d, Some(Flux::Quartic),
          d1(-1.0, 1.0), (40, 1), 1.0, CflOverMaxSpeed, B::Outflow, E::FineGridReference, false),
        p(QuarticNonconvexB, "quartic-nonconvex-b", Scalar1d, Some(Flux::Quartic),
          d1(-1.0, 1.0), (40, 1), 0.05, CflOverMaxSpeed, B::Outflow, E::FineGridReference, false),
        p(EulerDensityWave, "euler-density-wave", Euler1d, None,
          d1(-1.0, 1.0), (160, 1), 2.0, FixedDxMultiple, B::Periodic, E::Exact, false),
        p(Sod, "sod", Euler1d, None,
          d1(-5.0, 5.0), (200, 1), 2.0, CflOverMaxSpeed, B::Outflow, E::RiemannExact, false),
        p(Lax, "lax", Euler1d, None,
          d1(-5.0, 5.0), (200, 1), 1.3, CflOverMaxSpeed, B::Outflow, E::RiemannExact, false),
        p(One23, "one23", Euler1d, None,
          d1(-5.0, 5.0), (200, 1), 1.0, CflOverMaxSpeed, B::Outflow, E::RiemannExact, false),
        p(DoubleRarefaction, "double-rarefaction", Euler1d, None,
          d1(-1.0, 1.0), (200, 1), 0.6, CflOverMaxSpeed, B::Outflow, E::RiemannExact, false),
        p(ShockEntropyK5, "shock-entropy-k5", Euler1d, None,
          d1(-5.0, 5.0), (200, 1), 2.0, CflOverMaxSpeed, B::ShockEntropyInflow, E::FineGridReference, false),
        p(ShockEntropyK10, "shock-entropy-k10", Euler1d, None,
          d1(-5.0, 5.0), (400, 1), 2.0, CflOverMaxSpeed, B::ShockEntropyInflow, E::FineGridReference, false),
        p(Blastwaves, "blastwaves", Euler1d, None,
          d1(0.0, 1.0), (400, 1), 0.038, CflOverMaxSpeed, B::Reflective, E::FineGridReference, false),
        p(Advection2dSquare, "advection-2d-square", Scalar2d, Some(Flux::Advection),
          ((-1.0, 1.0), (-1.0, 1.0)), (80, 80), 4.0, CflOverMaxSpeed, B::Periodic, E::Exact, false),
        p(Burgers2d, "burgers-2d", Scalar2d, Some(Flux::Burgers),
          ((-2.0, 2.0), (-2.0, 2.0)), (80, 80), 2.0 / std::f64::consts::PI, CflOverMaxSpeed,
          B::Periodic, E::Exact, false),
        p(Riemann2d, "riemann-2d", Euler2d, None,
          ((0.0, 1.0), (0.0, 1.0)), (400, 400), 0.3, CflOverMaxSpeed, B::Outflow, E::None, false),
        p(Explosion, "explosion", Euler2d, None,
          ((0.0, 1.5), (0.0, 1.5)), (400, 400), 3.2, CflOverMaxSpeed, B::ExplosionQuadrant,
          E::None, false),
        p(DoubleMach, "double-mach", Euler2d, None,
          ((0.0, 4.0), (0.0, 1.0)), (800, 200), 0.2, CflOverMaxSpeed, B::DoubleMach, E::None, true),
        p(KelvinHelmholtz, "kelvin-helmholtz", Euler2d, None,
          ((-0.5, 0.5), (-0.5, 0.5)), (200, 200), 4.0, CflOverMaxSpeed, B::Periodic, E::None, true),
    ]
}

/// All registered problem names, in registry order.
pub fn problem_names() -> Vec<&'static str> {
    all_problems().iter().map(|p| p.name).collect()
}

/// Registry lookup by name.
pub fn get_problem(name: &str) -> Result<ProblemSpec> {
    all_problems()
        .into_iter()
        .find(|p| p.name == name)
        .ok_or_else(|| Error::UnknownProblem {
            name: name.to_string(),
            available: problem_names().join(", "),
        })
}

/// The piecewise training initial condition: a smoothed Gaussian triple, a
/// plateau, a triangle, and a smoothed half-ellipse on [-1, 1].
pub fn eval_train_ic(x: f64) -> f64 {
    const DELTA: f64 = 0.005;
    const Z: f64 = -0.7;
    const ALPHA: f64 = 10.0;
    const Y: f64 = 0.5;
    let beta = std::f64::consts::LN_2 / (36.0 * DELTA * DELTA);
    let g = |x: f64, z: f64| (-beta * (x - z) * (x - z)).exp();
    let f = |x: f64, y: f64| (1.0 - ALPHA * ALPHA * (x - y) * (x - y)).max(0.0).sqrt();
    if (-0.8..=-0.6).contains(&x) {
        (g(x, Z - DELTA) + 4.0 * g(x, Z) + g(x, Z + DELTA)) / 6.0
    } else if (-0.4..=-0.2).contains(&x) {
        1.0
    } else if (0.0..=0.2).contains(&x) {
        1.0 - (10.0 * (x - 0.1)).abs()
    } else if (0.4..=0.6).contains(&x) {
        (f(x, Y - DELTA) + 4.0 * f(x, Y) + f(x, Y + DELTA)) / 6.0
    } else {
        0.0
    }
}

fn wrap_periodic(x: f64, a: f64, b: f64) -> f64 {
    a + (x - a).rem_euclid(b - a)
}

impl ProblemSpec {
    /// Scalar initial condition; panics when called on a system problem.
    pub fn scalar_ic(&self, x: f64) -> f64 {
        match self.id {
            ProblemId::AdvectionSine => (std::f64::consts::PI * x).sin(),
            ProblemId::AdvectionComposite => eval_train_ic(x),
            ProblemId::BurgersRiemann | ProblemId::BuckleyLeverett => {
                if x <= 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
            ProblemId::QuarticNonconvexA => {
                if x <= 0.0 {
                    2.0
                } else {
                    -2.0
                }
            }
            ProblemId::QuarticNonconvexB => {
                if x <= 0.0 {
                    -3.0
                } else {
                    3.0
                }
            }
            _ => panic!("{} is not a 1D scalar problem", self.name),
        }
    }

    /// 1D Euler initial condition in primitive variables.
    pub fn euler_ic(&self, x: f64) -> (f64, f64, f64) {
        match self.id {
            ProblemId::EulerDensityWave => (1.0 + 0.5 * (std::f64::consts::PI * x).sin(), 1.0, 1.0),
            ProblemId::Sod | ProblemId::Lax | ProblemId::One23 | ProblemId::DoubleRarefaction => {
                let st = self.riemann_states().unwrap();
                if x <= 0.0 {
                    st.left
                } else {
                    st.right
                }
            }
            ProblemId::ShockEntropyK5 | ProblemId::ShockEntropyK10 => {
                let k = if self.id == ProblemId::ShockEntropyK5 { 5.0 } else { 10.0 };
                if x < -4.0 {
                    (3.857143, 2.629369, 10.333333)
                } else {
                    (1.0 + 0.2 * (k * x).sin(), 0.0, 1.0)
                }
            }
            ProblemId::Blastwaves => {
                if x < 0.1 {
                    (1.0, 0.0, 1000.0)
                } else if x < 0.9 {
                    (1.0, 0.0, 0.01)
                } else {
                    (1.0, 0.0, 100.0)
                }
            }
            _ => panic!("{} is not a 1D Euler problem", self.name),
        }
    }

    /// 2D scalar initial condition.
    pub fn scalar_ic_2d(&self, x: f64, y: f64) -> f64 {
        match self.id {
            ProblemId::Advection2dSquare => {
                let s = 1.0 / 2f64.sqrt();
                if (x + y).abs() < s && (x - y).abs() < s {
                    1.0
                } else {
                    0.0
                }
            }
            ProblemId::Burgers2d => {
                0.25 + 0.5 * (std::f64::consts::PI * (x + y) / 2.0).sin()
            }
            _ => panic!("{} is not a 2D scalar problem", self.name),
        }
    }

    /// 2D Euler initial condition in primitive variables (rho, u, v, P).
    pub fn euler_ic_2d(&self, x: f64, y: f64) -> (f64, f64, f64, f64) {
        match self.id {
            ProblemId::Riemann2d => {
                if x > 0.5 && y > 0.5 {
                    (1.0, 0.75, -0.5, 1.0)
                } else if x <= 0.5 && y > 0.5 {
                    (2.0, 0.75, 0.5, 1.0)
                } else if x <= 0.5 && y <= 0.5 {
                    (1.0, -0.75, 0.5, 1.0)
                } else {
                    (3.0, -0.75, -0.5, 1.0)
                }
            }
            ProblemId::Explosion => {
                if x * x + y * y < 0.16 {
                    (1.0, 0.0, 0.0, 1.0)
                } else {
                    (0.125, 0.0, 0.0, 0.1)
                }
            }
            ProblemId::DoubleMach => {
                if x < 1.0 / 6.0 + y / SQRT3 {
                    double_mach_post_shock()
                } else {
                    (1.4, 0.0, 0.0, 1.0)
                }
            }
            ProblemId::KelvinHelmholtz => {
                const L: f64 = 0.00625;
                let (rho, u) = if y < -0.25 {
                    (1.0, -0.5 + 0.5 * ((y + 0.25) / L).exp())
                } else if y < 0.0 {
                    (2.0, 0.5 - 0.5 * ((-y - 0.25) / L).exp())
                } else if y < 0.25 {
                    (2.0, 0.5 - 0.5 * ((y - 0.25) / L).exp())
                } else {
                    (1.0, -0.5 + 0.5 * ((-y + 0.25) / L).exp())
                };
                let v = 0.01 * (4.0 * std::f64::consts::PI * x).sin();
                (rho, u, v, 1.5)
            }
            _ => panic!("{} is not a 2D Euler problem", self.name),
        }
    }

    /// Riemann data of the four shock-tube problems.
    pub fn riemann_states(&self) -> Option<RiemannStates> {
        let (l, r) = match self.id {
            ProblemId::Sod => ((1.0, 0.0, 1.0), (0.125, 0.0, 0.1)),
            ProblemId::Lax => ((0.445, 0.698, 3.528), (0.5, 0.0, 0.571)),
            ProblemId::One23 => ((1.0, -2.0, 0.4), (1.0, 2.0, 0.4)),
            ProblemId::DoubleRarefaction => ((7.0, -1.0, 0.2), (7.0, 1.0, 0.2)),
            _ => return None,
        };
        Some(RiemannStates::new(l, r, GAMMA).expect("registry states are positive"))
    }

    /// 1D boundary pair for a scalar field.
    pub fn scalar_bc(&self) -> BcPair<f64> {
        match self.boundary {
            BoundaryDesc::Periodic => BcPair::periodic(),
            BoundaryDesc::Outflow => BcPair::outflow(),
            BoundaryDesc::Reflective => BcPair::reflective(),
            _ => panic!("{} has no scalar 1D boundary", self.name),
        }
    }

    /// 1D boundary pair for an Euler field.
    pub fn euler_bc(&self) -> BcPair<[f64; 3]> {
        match self.boundary {
            BoundaryDesc::Periodic => BcPair::periodic(),
            BoundaryDesc::Outflow => BcPair::outflow(),
            BoundaryDesc::Reflective => BcPair::reflective(),
            BoundaryDesc::ShockEntropyInflow => {
                let (rho, u, p) = (3.857143, 2.629369, 10.333333);
                let state = crate::euler::euler_prim_to_cons(rho, u, p, GAMMA)
                    .expect("post-shock state is positive");
                BcPair {
                    left: Bc::Dirichlet(state),
                    right: Bc::Outflow,
                }
            }
            _ => panic!("{} has no 1D Euler boundary", self.name),
        }
    }

    /// Default solver configuration of the problem.
    pub fn solver_config(&self) -> SolverConfig {
        SolverConfig {
            cfl: self.cfl,
            dt_policy: self.dt_policy,
        }
    }

    /// 1D grid with an optional cell-count override.
    pub fn grid1d(&self, n: Option<usize>) -> Result<Grid1d> {
        Grid1d::new(self.domain.0 .0, self.domain.0 .1, n.unwrap_or(self.default_n.0))
    }
}

/// Post-shock state of the double Mach reflection problem.
pub fn double_mach_post_shock() -> (f64, f64, f64, f64) {
    let theta = std::f64::consts::PI / 6.0;
    (8.0, 8.25 * theta.cos(), -8.25 * theta.sin(), 116.5)
}

/// Exact pointwise solution of a scalar problem.
pub fn exact_scalar_solution(spec: &ProblemSpec, x: f64, t: f64) -> Result<f64> {
    match spec.id {
        ProblemId::AdvectionSine => Ok((std::f64::consts::PI * (x - t)).sin()),
        ProblemId::AdvectionComposite => Ok(eval_train_ic(wrap_periodic(x - t, -1.0, 1.0))),
        ProblemId::BurgersRiemann => Ok(if x - 0.5 * t <= 0.0 { 1.0 } else { 0.0 }),
        _ => Err(Error::NoExactSolution(spec.name.to_string())),
    }
}

/// Exact primitive solution of a 1D Euler problem.
pub fn exact_euler_solution(spec: &ProblemSpec, x: f64, t: f64) -> Result<(f64, f64, f64)> {
    match spec.id {
        ProblemId::EulerDensityWave => Ok((
            1.0 + 0.5 * (std::f64::consts::PI * (x - t)).sin(),
            1.0,
            1.0,
        )),
        ProblemId::Sod | ProblemId::Lax | ProblemId::One23 | ProblemId::DoubleRarefaction => {
            let states = spec.riemann_states().unwrap();
            if t <= 0.0 {
                return Ok(spec.euler_ic(x));
            }
            riemann::exact_riemann_euler(&states, x / t)
        }
        _ => Err(Error::NoExactSolution(spec.name.to_string())),
    }
}

/// Exact solution of a 2D scalar problem.
pub fn exact_scalar_solution_2d(spec: &ProblemSpec, x: f64, y: f64, t: f64) -> Result<f64> {
    match spec.id {
        ProblemId::Advection2dSquare => {
            let xs = wrap_periodic(x - t, -1.0, 1.0);
            let ys = wrap_periodic(y - t, -1.0, 1.0);
            Ok(spec.scalar_ic_2d(xs, ys))
        }
        ProblemId::Burgers2d => burgers2d_exact(x + y, t),
        _ => Err(Error::NoExactSolution(spec.name.to_string())),
    }
}

/// Implicit solution of the 2D Burgers problem: u = 1/4 + sin(pi (s - 2ut)/2)/2
/// with s = x + y, solved by bisection (monotone for t <= 2/pi).
fn burgers2d_exact(s: f64, t: f64) -> Result<f64> {
    let g = |u: f64| u - 0.25 - 0.5 * (std::f64::consts::PI * (s - 2.0 * u * t) / 2.0).sin();
    let (mut lo, mut hi) = (-0.2500001, 0.7500001);
    let (glo, ghi) = (g(lo), g(hi));
    if glo > 0.0 || ghi < 0.0 {
        return Err(Error::InvalidInput(format!(
            "implicit bracket failed at s={s}, t={t}"
        )));
    }
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if g(mid) <= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Fine-grid self-reference, restricted to coarse centers.
#[derive(Debug, Clone)]
pub struct Reference {
    pub x: Vec<f64>,
    /// Scalar value, or density for Euler problems.
    pub values: Vec<f64>,
    pub fine_n: usize,
}

/// Computes a fine-grid reference run (Z weighting) for a 1D problem and
/// restricts it to the coarse cell centers, taking the fine cell containing
/// each coarse center.
pub fn fine_grid_reference(
    spec: &ProblemSpec,
    coarse_n: usize,
    refinement: usize,
) -> Result<Reference> {
    if refinement == 0 {
        return Err(Error::Config("refinement must be >= 1".into()));
    }
    let fine_n = coarse_n * refinement;
    let weighting = ZWeighting(KernelConfig::default());
    let cfg = spec.solver_config();
    let fine_values: Vec<f64> = match spec.kind {
        ProblemKind::Scalar1d => {
            let grid = spec.grid1d(Some(fine_n))?;
            let mut state = crate::solver1d::ScalarState1d::new(
                grid,
                spec.scalar_bc(),
                spec.flux.expect("scalar problem has a flux"),
                |x| spec.scalar_ic(x),
            );
            state.advance_to(spec.tfinal, &cfg, &weighting)?;
            state.u
        }
        ProblemKind::Euler1d => {
            let grid = spec.grid1d(Some(fine_n))?;
            let mut state = crate::solver1d::EulerState1d::from_primitive(
                grid,
                spec.euler_bc(),
                GAMMA,
                |x| spec.euler_ic(x),
            )?;
            state.advance_to(spec.tfinal, &cfg, &weighting)?;
            state.density()
        }
        _ => {
            return Err(Error::Config(format!(
                "fine-grid references cover 1D problems only, not {}",
                spec.name
            )))
        }
    };

    let coarse = spec.grid1d(Some(coarse_n))?;
    let fine = spec.grid1d(Some(fine_n))?;
    let mut x = Vec::with_capacity(coarse_n);
    let mut values = Vec::with_capacity(coarse_n);
    for i in 0..coarse_n {
        let xc = coarse.center(i);
        let j = (((xc - fine.a) / fine.dx()).floor() as usize).min(fine_n - 1);
        x.push(xc);
        values.push(fine_values[j]);
    }
    Ok(Reference { x, values, fine_n })
}

/// Cached variant: stores references as CSV under `dir`, guarded by a lock
/// file so concurrent builders do not interleave writes.
pub fn fine_grid_reference_cached(
    spec: &ProblemSpec,
    coarse_n: usize,
    refinement: usize,
    dir: &Path,
) -> Result<Reference> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join(format!("{}_n{}_r{}.csv", spec.name, coarse_n, refinement));
    if let Some(reference) = read_reference_csv(&path, spec, coarse_n, refinement)? {
        return Ok(reference);
    }

    let lock_path = dir.join(format!(".{}_n{}_r{}.lock", spec.name, coarse_n, refinement));
    let _lock = acquire_lock(&lock_path)?;
    // another writer may have finished while we waited
    if let Some(reference) = read_reference_csv(&path, spec, coarse_n, refinement)? {
        return Ok(reference);
    }
    let reference = fine_grid_reference(spec, coarse_n, refinement)?;
    write_reference_csv(&path, spec, coarse_n, refinement, &reference)?;
    Ok(reference)
}

struct LockGuard(std::path::PathBuf);

impl Drop for LockGuard {
    fn drop(&mut self) {
        let _ = std::fs::remove_file(&self.0);
    }
}

fn acquire_lock(path: &Path) -> Result<LockGuard> {
    for _ in 0..600 {
        match std::fs::OpenOptions::new()
            .write(true)
            .create_new(true)
            .open(path)
        {
            Ok(_) => return Ok(LockGuard(path.to_path_buf())),
            Err(e) if e.kind() == std::io::ErrorKind::AlreadyExists => {
                std::thread::sleep(std::time::Duration::from_millis(100));
            }
            Err(e) => return Err(e.into()),
        }
    }
    Err(Error::Config(format!(
        "could not acquire reference lock {}",
        path.display()
    )))
}

fn reference_header(spec: &ProblemSpec, coarse_n: usize, refinement: usize) -> String {
    format!(
        "# problem={} scheme=weno3-z coarse_n={} refinement={}",
        spec.name, coarse_n, refinement
    )
}

fn write_reference_csv(
    path: &Path,
    spec: &ProblemSpec,
    coarse_n: usize,
    refinement: usize,
    reference: &Reference,
) -> Result<()> {
    use std::io::Write;
    let mut body = String::new();
    body.push_str(&reference_header(spec, coarse_n, refinement));
    body.push('\n');
    body.push_str("x,value\n");
    for (x, v) in reference.x.iter().zip(&reference.values) {
        body.push_str(&format!("{x:.17e},{v:.17e}\n"));
    }
    let hash = crate::snn::io::crc64(body.as_bytes());
    let mut file = std::fs::File::create(path)?;
    write!(file, "{body}# content-crc64={hash:016x}\n")?;
    Ok(())
}

fn read_reference_csv(
    path: &Path,
    spec: &ProblemSpec,
    coarse_n: usize,
    refinement: usize,
) -> Result<Option<Reference>> {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
        Err(e) => return Err(e.into()),
    };
    let Some((body, trailer)) = text.rsplit_once("# content-crc64=") else {
        return Ok(None);
    };
    let stored = u64::from_str_radix(trailer.trim(), 16).unwrap_or(0);
    if crate::snn::io::crc64(body.as_bytes()) != stored {
        return Ok(None);
    }
    if !body.starts_with(&reference_header(spec, coarse_n, refinement)) {
        return Ok(None);
    }
    let mut x = Vec::new();
    let mut values = Vec::new();
    for line in body.lines().skip(2) {
        let mut parts = line.split(',');
        let (Some(a), Some(b)) = (parts.next(), parts.next()) else {
            continue;
        };
        let (Ok(a), Ok(b)) = (a.parse::<f64>(), b.parse::<f64>()) else {
            continue;
        };
        x.push(a);
        values.push(b);
    }
    if x.len() != coarse_n {
        return Ok(None);
    }
    Ok(Some(Reference {
        x,
        values,
        fine_n: coarse_n * refinement,
    }))
}
