//! Radial solutions of the biharmonic equation for a fixed angular degree.
//!
//! Writing `u = alpha(r) beta(phi)` with `beta` a degree-`k` spherical
//! harmonic, `alpha` solves a fourth-order Euler equation whose characteristic
//! roots are `k, 2-n-k, k+2, 4-n-k`. When two roots coincide the repeated one
//! picks up a `log r` partner.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{tau, Dimension};
use crate::scalar::Real;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum RadialRegime {
    /// n = 2, k = 0: two double roots.
    #[serde(rename = "Log2_0")]
    LogN2K0,
    /// n = 2, k = 1: the root 1 is double.
    #[serde(rename = "Log2_1")]
    LogN2K1,
    /// n = 4, k = 0: the root 0 is double.
    #[serde(rename = "Log4_0")]
    LogN4K0,
    Generic,
}

/// `r^exponent (log r)^log_power`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BasisFunction {
    pub exponent: i64,
    pub log_power: u32,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RadialFamily {
    pub n: Dimension,
    pub k: u32,
    pub regime: RadialRegime,
    /// Characteristic roots `(k, 2-n-k, k+2, 4-n-k)`.
    pub exponents: [i64; 4],
    /// Basis in coefficient order `(a, b, c, d)`.
    pub basis: [BasisFunction; 4],
}

impl RadialFamily {
    pub fn tau(&self) -> i64 {
        tau(self.n, self.k)
    }
}

const fn bf(exponent: i64, log_power: u32) -> BasisFunction {
    BasisFunction { exponent, log_power }
}

pub fn radial_family(n: Dimension, k: u32) -> RadialFamily {
    let (nn, kk) = (n.get() as i64, k as i64);
    let exponents = [kk, 2 - nn - kk, kk + 2, 4 - nn - kk];
    let (regime, basis) = match (nn, kk) {
        (2, 0) => (RadialRegime::LogN2K0, [bf(0, 0), bf(0, 1), bf(2, 0), bf(2, 1)]),
        (2, 1) => (RadialRegime::LogN2K1, [bf(1, 0), bf(-1, 0), bf(3, 0), bf(1, 1)]),
        (4, 0) => (RadialRegime::LogN4K0, [bf(0, 0), bf(-2, 0), bf(2, 0), bf(0, 1)]),
        _ => (
            RadialRegime::Generic,
            [
                bf(exponents[0], 0),
                bf(exponents[1], 0),
                bf(exponents[2], 0),
                bf(exponents[3], 0),
            ],
        ),
    };
    RadialFamily {
        n,
        k,
        regime,
        exponents,
        basis,
    }
}

/// Radial quantities entering the boundary conditions: `alpha`, `alpha'`,
/// the radial part `D` of the Laplacian and `D'`.
#[derive(Clone, Debug, PartialEq)]
pub struct RadialState {
    pub alpha: Real,
    pub alpha_r: Real,
    pub lap: Real,
    pub lap_r: Real,
}

/// `x (x-1) ... (x-j+1)` and its derivative in `x`.
fn falling(x: i64, j: usize) -> (i64, i64) {
    let mut value = 1i64;
    let mut deriv = 0i64;
    for l in 0..j as i64 {
        deriv = deriv * (x - l) + value;
        value *= x - l;
    }
    (value, deriv)
}

/// `d^j/dr^j [r^x (log r)^m]` for `m` in `{0, 1}`.
pub fn basis_derivative(f: BasisFunction, r: &Real, log_r: &Real, j: usize) -> Real {
    let (v, dv) = falling(f.exponent, j);
    let pw = r.powi(f.exponent - j as i64);
    match f.log_power {
        0 => pw * v,
        1 => pw * (log_r * v + dv),
        m => unreachable!("log power {m} does not occur"),
    }
}

/// `derivs[j][i]`: `j`-th derivative of basis function `i` at `r`, for `j <= order`.
pub fn basis_derivatives(f: &RadialFamily, r: &Real, order: usize) -> Result<Vec<[Real; 4]>> {
    if !r.is_positive() {
        return Err(Error::Domain("radius must be positive".into()));
    }
    let log_r = r.ln();
    Ok((0..=order)
        .map(|j| std::array::from_fn(|i| basis_derivative(f.basis[i], r, &log_r, j)))
        .collect())
}

/// State of a single function from its derivatives `alpha, alpha', alpha'', alpha'''`.
pub fn state_from_derivatives(n: Dimension, tau: i64, r: &Real, d: &[Real; 4]) -> RadialState {
    let n1 = n.get() as i64 - 1;
    let r2 = r.square();
    let r3 = &r2 * r;
    let lap = &d[2] + &d[1] * n1 / r - &d[0] * tau / &r2;
    let lap_r = &d[3] + &d[2] * n1 / r - &d[1] * (n1 + tau) / &r2 + &d[0] * (2 * tau) / &r3;
    RadialState {
        alpha: d[0].clone(),
        alpha_r: d[1].clone(),
        lap,
        lap_r,
    }
}

/// States of the four basis functions at `r`.
pub fn basis_states(f: &RadialFamily, r: &Real) -> Result<[RadialState; 4]> {
    let d = basis_derivatives(f, r, 3)?;
    let tau = f.tau();
    Ok(std::array::from_fn(|i| {
        let di = [d[0][i].clone(), d[1][i].clone(), d[2][i].clone(), d[3][i].clone()];
        state_from_derivatives(f.n, tau, r, &di)
    }))
}

/// State of `a phi_1 + b phi_2 + c phi_3 + d phi_4` at `r`.
pub fn eval_state(f: &RadialFamily, coeffs: &[Real; 4], r: &Real) -> Result<RadialState> {
    let states = basis_states(f, r)?;
    let combine = |get: fn(&RadialState) -> &Real| {
        let mut acc = Real::zero_like(r);
        for (c, s) in coeffs.iter().zip(states.iter()) {
            acc += c * get(s);
        }
        acc
    };
    Ok(RadialState {
        alpha: combine(|s| &s.alpha),
        alpha_r: combine(|s| &s.alpha_r),
        lap: combine(|s| &s.lap),
        lap_r: combine(|s| &s.lap_r),
    })
}

/// Relative residual of the radial biharmonic operator on a function given by
/// its derivatives `alpha, ..., alpha''''` at `r`: the operator value divided
/// by the sum of magnitudes of its terms.
pub fn euler_residual(n: Dimension, tau: i64, r: &Real, d: &[Real; 5]) -> Real {
    let n1 = n.get() as i64 - 1;
    // r^4 Delta_k^2 alpha = sum_j c_j r^j alpha^(j)
    let c = [
        tau * tau + 2 * tau * n1 - 6 * tau,
        2 * n1 + 4 * tau - n1 * n1 - 2 * n1 * tau,
        n1 * n1 - 2 * n1 - 2 * tau,
        2 * n1,
        1,
    ];
    let mut value = Real::zero_like(r);
    let mut scale = Real::zero_like(r);
    let mut rj = Real::int_like(1, r);
    for (cj, dj) in c.iter().zip(d.iter()) {
        let t = dj * &rj * *cj;
        scale += t.abs();
        value += t;
        rj *= r;
    }
    if scale.is_zero() {
        value
    } else {
        value.abs() / scale
    }
}

/// Relative biharmonic residual of `a phi_1 + b phi_2 + c phi_3 + d phi_4` at `r`.
pub fn biharmonic_residual(f: &RadialFamily, coeffs: &[Real; 4], r: &Real) -> Result<Real> {
    let derivs = basis_derivatives(f, r, 4)?;
    let combined: Vec<Real> = derivs
        .iter()
        .map(|row| {
            let mut acc = Real::zero_like(r);
            for (c, v) in coeffs.iter().zip(row.iter()) {
                acc += c * v;
            }
            acc
        })
        .collect();
    let d: [Real; 5] = std::array::from_fn(|j| combined[j].clone());
    Ok(euler_residual(f.n, f.tau(), r, &d))
}
