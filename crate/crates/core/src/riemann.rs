//! Exact Riemann solver for the 1D Euler equations: Newton iteration on the
//! pressure function with a two-rarefaction initial guess, plus self-similar
//! sampling of the resulting wave fan.

use crate::error::{Error, Result};

/// Left/right primitive states (rho, u, P) of a Riemann problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiemannStates {
    pub left: (f64, f64, f64),
    pub right: (f64, f64, f64),
    pub gamma: f64,
}

impl RiemannStates {
    pub fn new(left: (f64, f64, f64), right: (f64, f64, f64), gamma: f64) -> Result<Self> {
        for (rho, _, p) in [left, right] {
            if rho <= 0.0 || p <= 0.0 {
                return Err(Error::InvalidInput(format!(
                    "non-positive Riemann state (rho={rho}, P={p})"
                )));
            }
        }
        Ok(RiemannStates { left, right, gamma })
    }
}

/// Solved star region plus everything needed to sample the fan.
#[derive(Debug, Clone, Copy)]
pub struct RiemannSolution {
    pub states: RiemannStates,
    pub pstar: f64,
    pub ustar: f64,
    pub iterations: usize,
}

fn sound_speed(rho: f64, p: f64, gamma: f64) -> f64 {
    (gamma * p / rho).sqrt()
}

/// Pressure function of one side and its derivative.
fn side_fn(p: f64, rho_k: f64, p_k: f64, gamma: f64) -> (f64, f64) {
    let c_k = sound_speed(rho_k, p_k, gamma);
    if p > p_k {
        // shock branch
        let a_k = 2.0 / ((gamma + 1.0) * rho_k);
        let b_k = (gamma - 1.0) / (gamma + 1.0) * p_k;
        let root = (a_k / (p + b_k)).sqrt();
        let f = (p - p_k) * root;
        let df = root * (1.0 - 0.5 * (p - p_k) / (b_k + p));
        (f, df)
    } else {
        // rarefaction branch
        let z = (gamma - 1.0) / (2.0 * gamma);
        let f = 2.0 * c_k / (gamma - 1.0) * ((p / p_k).powf(z) - 1.0);
        let df = (1.0 / (rho_k * c_k)) * (p / p_k).powf(-(gamma + 1.0) / (2.0 * gamma));
        (f, df)
    }
}

/// Solves for the star-region pressure and velocity.
pub fn solve(states: &RiemannStates) -> Result<RiemannSolution> {
    let g = states.gamma;
    let (rl, ul, pl) = states.left;
    let (rr, ur, pr) = states.right;
    let cl = sound_speed(rl, pl, g);
    let cr = sound_speed(rr, pr, g);
    let du = ur - ul;

    // Pressure positivity condition. The margin test leaves room for data
    // sitting exactly on the boundary up to rounding, where the star
    // pressure degenerates to (numerical) zero but the fan is still
    // well-defined.
    let margin = 2.0 * (cl + cr) / (g - 1.0) - du;
    if margin < -1e-9 * du.abs().max(1.0) {
        return Err(Error::Vacuum);
    }

    // two-rarefaction initial guess
    let z = (g - 1.0) / (2.0 * g);
    let num = (cl + cr - 0.5 * (g - 1.0) * du).max(0.0);
    let den = cl / pl.powf(z) + cr / pr.powf(z);
    let p_floor = 1e-300;
    let mut p = (num / den).powf(1.0 / z).max(p_floor);

    let mut iterations = 0;
    loop {
        let (fl, dfl) = side_fn(p, rl, pl, g);
        let (fr, dfr) = side_fn(p, rr, pr, g);
        let f = fl + fr + du;
        let df = dfl + dfr;
        let mut p_new = p - f / df;
        if p_new <= 0.0 {
            p_new = 0.5 * p;
        }
        let change = 2.0 * (p_new - p).abs() / (p_new + p);
        p = p_new;
        iterations += 1;
        if change < 1e-12 || p <= p_floor {
            p = p.max(p_floor);
            break;
        }
        if iterations >= 200 {
            return Err(Error::RiemannNoConvergence(iterations));
        }
    }

    let (fl, _) = side_fn(p, rl, pl, g);
    let (fr, _) = side_fn(p, rr, pr, g);
    let ustar = 0.5 * (ul + ur) + 0.5 * (fr - fl);
    Ok(RiemannSolution {
        states: *states,
        pstar: p,
        ustar,
        iterations,
    })
}

impl RiemannSolution {
    /// Samples the self-similar solution at xi = x / t, returning the
    /// primitive state (rho, u, P).
    pub fn sample(&self, xi: f64) -> (f64, f64, f64) {
        let g = self.states.gamma;
        let gm1 = g - 1.0;
        let gp1 = g + 1.0;
        let (pstar, ustar) = (self.pstar, self.ustar);

        if xi <= ustar {
            // left of the contact
            let (rl, ul, pl) = self.states.left;
            let cl = sound_speed(rl, pl, g);
            if pstar > pl {
                // left shock
                let ratio = pstar / pl;
                let sl = ul - cl * (0.5 * gp1 / g * ratio + 0.5 * gm1 / g).sqrt();
                if xi <= sl {
                    (rl, ul, pl)
                } else {
                    let rho = rl * ((ratio + gm1 / gp1) / (gm1 / gp1 * ratio + 1.0));
                    (rho, ustar, pstar)
                }
            } else {
                // left rarefaction
                let head = ul - cl;
                let cstar = cl * (pstar / pl).powf(gm1 / (2.0 * g));
                let tail = ustar - cstar;
                if xi <= head {
                    (rl, ul, pl)
                } else if xi >= tail {
                    let rho = rl * (pstar / pl).powf(1.0 / g);
                    (rho, ustar, pstar)
                } else {
                    let factor = 2.0 / gp1 + gm1 / (gp1 * cl) * (ul - xi);
                    let rho = rl * factor.powf(2.0 / gm1);
                    let u = 2.0 / gp1 * (cl + 0.5 * gm1 * ul + xi);
                    let p = pl * factor.powf(2.0 * g / gm1);
                    (rho, u, p)
                }
            }
        } else {
            // right of the contact
            let (rr, ur, pr) = self.states.right;
            let cr = sound_speed(rr, pr, g);
            if pstar > pr {
                // right shock
                let ratio = pstar / pr;
                let sr = ur + cr * (0.5 * gp1 / g * ratio + 0.5 * gm1 / g).sqrt();
                if xi >= sr {
                    (rr, ur, pr)
                } else {
                    let rho = rr * ((ratio + gm1 / gp1) / (gm1 / gp1 * ratio + 1.0));
                    (rho, ustar, pstar)
                }
            } else {
                // right rarefaction
                let head = ur + cr;
                let cstar = cr * (pstar / pr).powf(gm1 / (2.0 * g));
                let tail = ustar + cstar;
                if xi >= head {
                    (rr, ur, pr)
                } else if xi <= tail {
                    let rho = rr * (pstar / pr).powf(1.0 / g);
                    (rho, ustar, pstar)
                } else {
                    let factor = 2.0 / gp1 - gm1 / (gp1 * cr) * (ur - xi);
                    let rho = rr * factor.powf(2.0 / gm1);
                    let u = 2.0 / gp1 * (-cr + 0.5 * gm1 * ur + xi);
                    let p = pr * factor.powf(2.0 * g / gm1);
                    (rho, u, p)
                }
            }
        }
    }
}

/// Solves and samples in one call.
pub fn exact_riemann_euler(states: &RiemannStates, xi: f64) -> Result<(f64, f64, f64)> {
    Ok(solve(states)?.sample(xi))
}
