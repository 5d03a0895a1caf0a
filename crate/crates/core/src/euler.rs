//! Euler-equation state conversions, Roe-averaged eigensystems, and the
//! characteristic-wise flux sweep shared by the 1D and 2D solvers.
//!
//! The sweep projects split fluxes onto local characteristic fields, applies
//! the scalar WENO reconstruction per family with a per-family splitting
//! speed, and projects back. The 2D solver reuses it line by line with the
//! x- or y-direction eigensystem.

use crate::error::{Error, Result};
use crate::weno::{reconstruct, Stencil, WeightingFn};

/// Ideal-gas ratio of specific heats used throughout the benchmarks.
pub const GAMMA: f64 = 1.4;

/// Converts primitive (rho, u, P) to conserved (rho, rho u, E).
pub fn euler_prim_to_cons(rho: f64, u: f64, p: f64, gamma: f64) -> Result<[f64; 3]> {
    if rho <= 0.0 {
        return Err(Error::InvalidInput(format!("non-positive density {rho}")));
    }
    if p <= 0.0 {
        return Err(Error::InvalidInput(format!("non-positive pressure {p}")));
    }
    Ok([rho, rho * u, p / (gamma - 1.0) + 0.5 * rho * u * u])
}

/// Converts conserved (rho, rho u, E) to primitive (rho, u, P).
pub fn euler_cons_to_prim(q: &[f64; 3], gamma: f64) -> Result<(f64, f64, f64)> {
    let rho = q[0];
    if rho <= 0.0 {
        return Err(Error::InvalidInput(format!("non-positive density {rho}")));
    }
    let u = q[1] / rho;
    let p = (gamma - 1.0) * (q[2] - 0.5 * rho * u * u);
    if p <= 0.0 {
        return Err(Error::InvalidInput(format!("non-positive pressure {p}")));
    }
    Ok((rho, u, p))
}

/// 2D variants for (rho, rho u, rho v, E).
pub fn euler2d_prim_to_cons(rho: f64, u: f64, v: f64, p: f64, gamma: f64) -> Result<[f64; 4]> {
    if rho <= 0.0 {
        return Err(Error::InvalidInput(format!("non-positive density {rho}")));
    }
    if p <= 0.0 {
        return Err(Error::InvalidInput(format!("non-positive pressure {p}")));
    }
    Ok([
        rho,
        rho * u,
        rho * v,
        p / (gamma - 1.0) + 0.5 * rho * (u * u + v * v),
    ])
}

pub fn euler2d_cons_to_prim(q: &[f64; 4], gamma: f64) -> Result<(f64, f64, f64, f64)> {
    let rho = q[0];
    if rho <= 0.0 {
        return Err(Error::InvalidInput(format!("non-positive density {rho}")));
    }
    let u = q[1] / rho;
    let v = q[2] / rho;
    let p = (gamma - 1.0) * (q[3] - 0.5 * rho * (u * u + v * v));
    if p <= 0.0 {
        return Err(Error::InvalidInput(format!("non-positive pressure {p}")));
    }
    Ok((rho, u, v, p))
}

/// Left/right eigenvector matrices at a Roe-averaged interface state.
#[derive(Debug, Clone, Copy)]
pub struct EigenPair<const NC: usize> {
    /// Rows are left eigenvectors.
    pub left: [[f64; NC]; NC],
    /// Columns are right eigenvectors: `right[row][family]`.
    pub right: [[f64; NC]; NC],
}

/// Roe-averaged interface quantities of the 1D Euler eigensystem.
#[derive(Debug, Clone, Copy)]
pub struct EulerEigenContext {
    pub velocity: f64,
    pub enthalpy: f64,
    pub sound_speed: f64,
    pub eigen: EigenPair<3>,
}

fn roe_average_1d(ql: &[f64; 3], qr: &[f64; 3], gamma: f64) -> Result<(f64, f64, f64)> {
    let (rl, ul, pl) = euler_cons_to_prim(ql, gamma)?;
    let (rr, ur, pr) = euler_cons_to_prim(qr, gamma)?;
    let hl = (ql[2] + pl) / rl;
    let hr = (qr[2] + pr) / rr;
    let sl = rl.sqrt();
    let sr = rr.sqrt();
    let w = sl / (sl + sr);
    let u = w * ul + (1.0 - w) * ur;
    let h = w * hl + (1.0 - w) * hr;
    let c2 = (gamma - 1.0) * (h - 0.5 * u * u);
    if c2 <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "non-positive Roe sound speed squared {c2}"
        )));
    }
    Ok((u, h, c2.sqrt()))
}

/// Eigen decomposition of the 1D Euler flux Jacobian at the Roe average of
/// two conserved states. Eigenvalue order: u - c, u, u + c.
pub fn euler_eigensystem(ql: &[f64; 3], qr: &[f64; 3], gamma: f64) -> Result<EulerEigenContext> {
    let (u, h, c) = roe_average_1d(ql, qr, gamma)?;
    let b1 = (gamma - 1.0) / (c * c);
    let b2 = 0.5 * b1 * u * u;
    let right = [
        [1.0, 1.0, 1.0],
        [u - c, u, u + c],
        [h - u * c, 0.5 * u * u, h + u * c],
    ];
    let left = [
        [
            0.5 * (b2 + u / c),
            0.5 * (-b1 * u - 1.0 / c),
            0.5 * b1,
        ],
        [1.0 - b2, b1 * u, -b1],
        [
            0.5 * (b2 - u / c),
            0.5 * (-b1 * u + 1.0 / c),
            0.5 * b1,
        ],
    ];
    Ok(EulerEigenContext {
        velocity: u,
        enthalpy: h,
        sound_speed: c,
        eigen: EigenPair { left, right },
    })
}

/// A hyperbolic system viewed through its characteristic decomposition.
pub trait CharSystem<const NC: usize>: Sync {
    /// Point flux of a conserved state.
    fn flux(&self, q: &[f64; NC]) -> Result<[f64; NC]>;
    /// Signed eigenvalues of a conserved state, in family order.
    fn eigenvalues(&self, q: &[f64; NC]) -> Result<[f64; NC]>;
    /// Eigenvector pair at the Roe average of two neighboring states.
    fn eigen(&self, ql: &[f64; NC], qr: &[f64; NC]) -> Result<EigenPair<NC>>;
}

/// 1D Euler equations.
#[derive(Debug, Clone, Copy)]
pub struct Euler1d {
    pub gamma: f64,
}

impl CharSystem<3> for Euler1d {
    fn flux(&self, q: &[f64; 3]) -> Result<[f64; 3]> {
        let (rho, u, p) = euler_cons_to_prim(q, self.gamma)?;
        Ok([rho * u, rho * u * u + p, u * (q[2] + p)])
    }

    fn eigenvalues(&self, q: &[f64; 3]) -> Result<[f64; 3]> {
        let (rho, u, p) = euler_cons_to_prim(q, self.gamma)?;
        let c = (self.gamma * p / rho).sqrt();
        Ok([u - c, u, u + c])
    }

    fn eigen(&self, ql: &[f64; 3], qr: &[f64; 3]) -> Result<EigenPair<3>> {
        Ok(euler_eigensystem(ql, qr, self.gamma)?.eigen)
    }
}

/// 2D Euler equations swept along x (normal velocity u).
#[derive(Debug, Clone, Copy)]
pub struct Euler2dX {
    pub gamma: f64,
}

/// 2D Euler equations swept along y (normal velocity v).
#[derive(Debug, Clone, Copy)]
pub struct Euler2dY {
    pub gamma: f64,
}

fn roe_average_2d(
    ql: &[f64; 4],
    qr: &[f64; 4],
    gamma: f64,
) -> Result<(f64, f64, f64, f64)> {
    let (rl, ul, vl, pl) = euler2d_cons_to_prim(ql, gamma)?;
    let (rr, ur, vr, pr) = euler2d_cons_to_prim(qr, gamma)?;
    let hl = (ql[3] + pl) / rl;
    let hr = (qr[3] + pr) / rr;
    let sl = rl.sqrt();
    let sr = rr.sqrt();
    let w = sl / (sl + sr);
    let u = w * ul + (1.0 - w) * ur;
    let v = w * vl + (1.0 - w) * vr;
    let h = w * hl + (1.0 - w) * hr;
    let c2 = (gamma - 1.0) * (h - 0.5 * (u * u + v * v));
    if c2 <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "non-positive Roe sound speed squared {c2}"
        )));
    }
    Ok((u, v, h, c2.sqrt()))
}

impl CharSystem<4> for Euler2dX {
    fn flux(&self, q: &[f64; 4]) -> Result<[f64; 4]> {
        let (rho, u, v, p) = euler2d_cons_to_prim(q, self.gamma)?;
        Ok([rho * u, rho * u * u + p, rho * u * v, u * (q[3] + p)])
    }

    fn eigenvalues(&self, q: &[f64; 4]) -> Result<[f64; 4]> {
        let (rho, u, _v, p) = euler2d_cons_to_prim(q, self.gamma)?;
        let c = (self.gamma * p / rho).sqrt();
        Ok([u - c, u, u, u + c])
    }

    fn eigen(&self, ql: &[f64; 4], qr: &[f64; 4]) -> Result<EigenPair<4>> {
        let (u, v, h, c) = roe_average_2d(ql, qr, self.gamma)?;
        let q2 = u * u + v * v;
        let b1 = (self.gamma - 1.0) / (c * c);
        let b2 = 0.5 * b1 * q2;
        let right = [
            [1.0, 1.0, 0.0, 1.0],
            [u - c, u, 0.0, u + c],
            [v, v, 1.0, v],
            [h - u * c, 0.5 * q2, v, h + u * c],
        ];
        let left = [
            [
                0.5 * (b2 + u / c),
                0.5 * (-b1 * u - 1.0 / c),
                0.5 * (-b1 * v),
                0.5 * b1,
            ],
            [1.0 - b2, b1 * u, b1 * v, -b1],
            [-v, 0.0, 1.0, 0.0],
            [
                0.5 * (b2 - u / c),
                0.5 * (-b1 * u + 1.0 / c),
                0.5 * (-b1 * v),
                0.5 * b1,
            ],
        ];
        Ok(EigenPair { left, right })
    }
}

impl CharSystem<4> for Euler2dY {
    fn flux(&self, q: &[f64; 4]) -> Result<[f64; 4]> {
        let (rho, u, v, p) = euler2d_cons_to_prim(q, self.gamma)?;
        Ok([rho * v, rho * u * v, rho * v * v + p, v * (q[3] + p)])
    }

    fn eigenvalues(&self, q: &[f64; 4]) -> Result<[f64; 4]> {
        let (rho, _u, v, p) = euler2d_cons_to_prim(q, self.gamma)?;
        let c = (self.gamma * p / rho).sqrt();
        Ok([v - c, v, v, v + c])
    }

    fn eigen(&self, ql: &[f64; 4], qr: &[f64; 4]) -> Result<EigenPair<4>> {
        let (u, v, h, c) = roe_average_2d(ql, qr, self.gamma)?;
        let q2 = u * u + v * v;
        let b1 = (self.gamma - 1.0) / (c * c);
        let b2 = 0.5 * b1 * q2;
        let right = [
            [1.0, 1.0, 0.0, 1.0],
            [u, u, 1.0, u],
            [v - c, v, 0.0, v + c],
            [h - v * c, 0.5 * q2, u, h + v * c],
        ];
        let left = [
            [
                0.5 * (b2 + v / c),
                0.5 * (-b1 * u),
                0.5 * (-b1 * v - 1.0 / c),
                0.5 * b1,
            ],
            [1.0 - b2, b1 * u, b1 * v, -b1],
            [-u, 1.0, 0.0, 0.0],
            [
                0.5 * (b2 - v / c),
                0.5 * (-b1 * u),
                0.5 * (-b1 * v + 1.0 / c),
                0.5 * b1,
            ],
        ];
        Ok(EigenPair { left, right })
    }
}

#[inline]
fn project<const NC: usize>(row: &[f64; NC], vec: &[f64; NC]) -> f64 {
    let mut acc = 0.0;
    for r in 0..NC {
        acc += row[r] * vec[r];
    }
    acc
}

/// Per-family maxima of |eigenvalue| over a field; the splitting speeds.
pub fn family_speeds<const NC: usize, S: CharSystem<NC>>(
    sys: &S,
    q: &[[f64; NC]],
) -> Result<[f64; NC]> {
    let mut alphas = [0.0f64; NC];
    for cell in q {
        let lam = sys.eigenvalues(cell)?;
        for k in 0..NC {
            alphas[k] = alphas[k].max(lam[k].abs());
        }
    }
    Ok(alphas)
}

/// Interface fluxes of a ghost-extended line (two ghost cells per side)
/// under characteristic-wise Lax-Friedrichs splitting.
///
/// Returns n + 1 interface fluxes for n interior cells.
pub fn char_line_fluxes<const NC: usize, S, W>(
    sys: &S,
    q_ext: &[[f64; NC]],
    alphas: &[f64; NC],
    weighting: &W,
) -> Result<Vec<[f64; NC]>>
where
    S: CharSystem<NC>,
    W: WeightingFn + ?Sized,
{
    let n = q_ext.len() - 4;
    let mut point_flux = Vec::with_capacity(q_ext.len());
    for cell in q_ext {
        point_flux.push(sys.flux(cell)?);
    }

    let mut interface = Vec::with_capacity(n + 1);
    for j in 0..=n {
        // interface between ext cells j+1 and j+2; stencils span ext j..j+4
        let pair = sys.eigen(&q_ext[j + 1], &q_ext[j + 2])?;
        let mut h = [0.0; NC];
        for k in 0..NC {
            let row = &pair.left[k];
            let mut cf = [0.0; 4];
            let mut cu = [0.0; 4];
            for m in 0..4 {
                cf[m] = project(row, &point_flux[j + m]);
                cu[m] = project(row, &q_ext[j + m]);
            }
            let a = alphas[k];
            let plus = Stencil {
                f0: 0.5 * (cf[0] + a * cu[0]),
                f1: 0.5 * (cf[1] + a * cu[1]),
                f2: 0.5 * (cf[2] + a * cu[2]),
            };
            let minus = Stencil {
                f0: 0.5 * (cf[3] - a * cu[3]),
                f1: 0.5 * (cf[2] - a * cu[2]),
                f2: 0.5 * (cf[1] - a * cu[1]),
            };
            let hk = reconstruct(&plus, &weighting.weights(&plus))
                + reconstruct(&minus, &weighting.weights(&minus));
            for r in 0..NC {
                h[r] += pair.right[r][k] * hk;
            }
        }
        interface.push(h);
    }
    Ok(interface)
}

/// Flux-difference form of the characteristic sweep: du/dt per interior cell.
pub fn char_line_rhs<const NC: usize, S, W>(
    sys: &S,
    q_ext: &[[f64; NC]],
    alphas: &[f64; NC],
    dx: f64,
    weighting: &W,
) -> Result<Vec<[f64; NC]>>
where
    S: CharSystem<NC>,
    W: WeightingFn + ?Sized,
{
    let n = q_ext.len() - 4;
    let h = char_line_fluxes(sys, q_ext, alphas, weighting)?;
    let inv_dx = 1.0 / dx;
    let mut rhs = Vec::with_capacity(n);
    for i in 0..n {
        let mut d = [0.0; NC];
        for r in 0..NC {
            d[r] = -(h[i + 1][r] - h[i][r]) * inv_dx;
        }
        rhs.push(d);
    }
    Ok(rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn prim_cons_examples() {
        let q = euler_prim_to_cons(1.0, 0.0, 1.0, 1.4).unwrap();
        assert_eq!(q, [1.0, 0.0, 2.5]);
        let (rho, u, p) = euler_cons_to_prim(&q, 1.4).unwrap();
        assert_eq!((rho, u, p), (1.0, 0.0, 1.0));

        // Lax left state round trip
        let q = euler_prim_to_cons(0.445, 0.698, 3.528, 1.4).unwrap();
        let (rho, u, p) = euler_cons_to_prim(&q, 1.4).unwrap();
        assert!((rho - 0.445).abs() < 1e-14 * 0.445);
        assert!((u - 0.698).abs() < 1e-14);
        assert!((p - 3.528).abs() < 1e-14 * 3.528);

        // a state implying non-positive pressure must fail
        let bad = [1.0, 2.0, 1.0]; // E - rho u^2 / 2 = -1
        assert!(euler_cons_to_prim(&bad, 1.4).is_err());
        assert!(euler_prim_to_cons(-1.0, 0.0, 1.0, 1.4).is_err());
    }

    #[test]
    fn eigensystem_sound_speed_and_identity() {
        let q = euler_prim_to_cons(1.0, 0.0, 1.0, 1.4).unwrap();
        let ctx = euler_eigensystem(&q, &q, 1.4).unwrap();
        assert!((ctx.sound_speed - 1.4f64.sqrt()).abs() < 1e-14);
        assert_eq!(ctx.velocity, 0.0);

        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..100 {
            let ql = euler_prim_to_cons(
                rng.gen_range(0.1..5.0),
                rng.gen_range(-3.0..3.0),
                rng.gen_range(0.1..5.0),
                1.4,
            )
            .unwrap();
            let qr = euler_prim_to_cons(
                rng.gen_range(0.1..5.0),
                rng.gen_range(-3.0..3.0),
                rng.gen_range(0.1..5.0),
                1.4,
            )
            .unwrap();
            let ctx = euler_eigensystem(&ql, &qr, 1.4).unwrap();
            check_inverse_pair(&ctx.eigen.left, &ctx.eigen.right);
        }
    }

    fn check_inverse_pair<const NC: usize>(left: &[[f64; NC]; NC], right: &[[f64; NC]; NC]) {
        for i in 0..NC {
            for j in 0..NC {
                let mut acc = 0.0;
                for k in 0..NC {
                    acc += left[i][k] * right[k][j];
                }
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!(
                    (acc - expect).abs() < 1e-12,
                    "L.R[{i}][{j}] = {acc}"
                );
            }
        }
    }

    #[test]
    fn eigensystem_2d_inverse_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..100 {
            let mk = |rng: &mut ChaCha8Rng| {
                euler2d_prim_to_cons(
                    rng.gen_range(0.1..5.0),
                    rng.gen_range(-3.0..3.0),
                    rng.gen_range(-3.0..3.0),
                    rng.gen_range(0.1..5.0),
                    1.4,
                )
                .unwrap()
            };
            let (ql, qr) = (mk(&mut rng), mk(&mut rng));
            let px = Euler2dX { gamma: 1.4 }.eigen(&ql, &qr).unwrap();
            check_inverse_pair(&px.left, &px.right);
            let py = Euler2dY { gamma: 1.4 }.eigen(&ql, &qr).unwrap();
            check_inverse_pair(&py.left, &py.right);
        }
    }

    #[test]
    fn mirrored_states_negate_and_reorder_eigenvalues() {
        let sys = Euler1d { gamma: 1.4 };
        let q = euler_prim_to_cons(0.8, 1.3, 2.0, 1.4).unwrap();
        let qm = euler_prim_to_cons(0.8, -1.3, 2.0, 1.4).unwrap();
        let lam = sys.eigenvalues(&q).unwrap();
        let lam_m = sys.eigenvalues(&qm).unwrap();
        assert!((lam[0] + lam_m[2]).abs() < 1e-14);
        assert!((lam[1] + lam_m[1]).abs() < 1e-14);
        assert!((lam[2] + lam_m[0]).abs() < 1e-14);
    }

    #[test]
    fn family_speeds_take_abs_max() {
        let sys = Euler1d { gamma: 1.4 };
        let field = vec![
            euler_prim_to_cons(1.0, -2.0, 0.4, 1.4).unwrap(),
            euler_prim_to_cons(1.0, 2.0, 0.4, 1.4).unwrap(),
        ];
        let a = family_speeds(&sys, &field).unwrap();
        let c = (1.4 * 0.4f64).sqrt();
        assert!((a[0] - (2.0 + c)).abs() < 1e-14);
        assert!((a[1] - 2.0).abs() < 1e-14);
        assert!((a[2] - (2.0 + c)).abs() < 1e-14);
    }
}
