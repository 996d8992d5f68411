//! Upper bounds for the first non-zero eigenvalue `rho_1` of the Steklov
//! problem with parameter `tau`, in terms of volume and boundary area.
//!
//! The bounds assume a star-shaped, mean convex boundary. That hypothesis is
//! asserted by the caller and carried along in the result, never checked.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{sphere_area, Dimension};
use crate::scalar::{Precision, Real};

#[derive(Clone, Debug, Serialize)]
pub struct DomainMeasures {
    pub n: u32,
    pub volume: Real,
    pub boundary_area: Real,
    pub tau: Real,
    pub star_shaped_mean_convex: bool,
    #[serde(skip)]
    precision: Precision,
}

impl DomainMeasures {
    /// Rejects non-positive inputs and measures violating the isoperimetric
    /// inequality (beyond rounding).
    pub fn new(
        n: Dimension,
        volume: &Real,
        boundary_area: &Real,
        tau: &Real,
        star_shaped_mean_convex: bool,
        p: Precision,
    ) -> Result<Self> {
        if !volume.is_positive() || !boundary_area.is_positive() || !tau.is_positive() {
            return Err(Error::Domain("volume, boundary area and tau must be positive".into()));
        }
        let m = DomainMeasures {
            n: n.get(),
            volume: volume.with_bits(p.bits()),
            boundary_area: boundary_area.with_bits(p.bits()),
            tau: tau.with_bits(p.bits()),
            star_shaped_mean_convex,
            precision: p,
        };
        let iso = isoperimetric_area(n, &m.volume, p);
        if m.boundary_area < &iso * (1 - p.tolerance(5)) {
            return Err(Error::Domain(format!(
                "boundary area {} is below the isoperimetric minimum {}",
                m.boundary_area.to_decimal(15),
                iso.to_decimal(15)
            )));
        }
        Ok(m)
    }

    /// Measures of the ball of radius `r`.
    pub fn ball(n: Dimension, r: &Real, tau: &Real, p: Precision) -> Result<Self> {
        if !r.is_positive() {
            return Err(Error::Domain("ball radius must be positive".into()));
        }
        let omega = sphere_area(n, p);
        let nn = n.get() as i64;
        Self::new(n, &(&omega * r.powi(nn) / nn), &(omega * r.powi(nn - 1)), tau, true, p)
    }

    fn dim(&self) -> Dimension {
        Dimension::new(self.n).expect("validated at construction")
    }
}

/// Boundary area of the ball with the given volume.
pub fn isoperimetric_area(n: Dimension, volume: &Real, p: Precision) -> Real {
    let nn = n.get() as i64;
    let omega = sphere_area(n, p);
    let r = (volume * nn / &omega).pow(&Real::ratio(1, nn, p));
    omega * r.powi(nn - 1)
}

#[derive(Clone, Debug, Serialize)]
pub struct Bound {
    pub value: Real,
    pub hypotheses_verified: bool,
}

impl Bound {
    pub fn label(&self) -> &'static str {
        if self.hypotheses_verified {
            "hypotheses asserted"
        } else {
            "hypotheses unverified"
        }
    }
}

/// `n tau |Omega| |dOmega| ((n-1)/n omega (|dOmega|/omega)^{n/(n-1)} + |Omega|)^{-2}`.
pub fn theorem5_bound(m: &DomainMeasures) -> Bound {
    let n = m.n as i64;
    let omega = sphere_area(m.dim(), m.precision);
    let expo = Real::int_like(n, &m.volume) / (n - 1);
    let inner = &omega * (n - 1) / n * (&m.boundary_area / &omega).pow(&expo) + &m.volume;
    Bound {
        value: &m.tau * n * &m.volume * &m.boundary_area / inner.square(),
        hypotheses_verified: m.star_shaped_mean_convex,
    }
}

/// `n^{1-2/n} omega^{2/n} tau |Omega|^{1-2/n} / |dOmega|`, the bound weakened
/// by Young's inequality.
pub fn theorem5_weak_bound(m: &DomainMeasures) -> Bound {
    Bound {
        value: &m.tau * p1_bound(m),
        hypotheses_verified: m.star_shaped_mean_convex,
    }
}

/// `n^{1-2/n} omega^{2/n} |Omega|^{1-2/n} / |dOmega|`, the resulting bound for
/// the first non-zero second-order Steklov eigenvalue `p_1`.
pub fn p1_bound(m: &DomainMeasures) -> Real {
    let n = m.n as i64;
    let omega = sphere_area(m.dim(), m.precision);
    let two_n = Real::int_like(2, &m.volume) / n;
    let one_minus = 1 - &two_n;
    Real::int_like(n, &m.volume).pow(&one_minus) * omega.pow(&two_n) * m.volume.pow(&one_minus) / &m.boundary_area
}

/// `rho_1` of the ball of radius `r`: `tau / r`.
pub fn ball_rho1(r: &Real, tau: &Real) -> Result<Real> {
    if !r.is_positive() || !tau.is_positive() {
        return Err(Error::Domain("radius and tau must be positive".into()));
    }
    Ok(tau / r)
}

/// Lower bound `tau p_k` for `rho_k` from the second-order eigenvalue `p_k`.
pub fn steklov2_comparison(tau: &Real, p_k: &Real) -> Result<Real> {
    if p_k.is_negative() {
        return Err(Error::Domain("p_k must be non-negative".into()));
    }
    Ok(tau * p_k)
}
