//! Shooting solver for the annulus eigenvalues, independent of the closed-form
//! radial basis.
//!
//! With `t = log r` the radial equation for degree `k` has constant
//! coefficients, its characteristic polynomial being
//! `(x^2 + (n-2)x - tau)(x^2 + (n-6)x - 2(n-4) - tau)`. The fundamental matrix
//! from `t = log eps` to `t = 0` is built by a fixed-step order-12 Taylor
//! method, and the boundary conditions are imposed on its columns.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use crate::annulus_pencil::{Annulus, Problem};
use crate::error::{Error, Result};
use crate::geometry::tau;
use crate::linalg::{det4, identity4, mat_mul, Mat4};
use crate::scalar::{Precision, Real};

/// Taylor order of one integration step.
pub const ORDER: usize = 12;

#[derive(Clone, Debug)]
pub struct ShootingConfig {
    pub steps: usize,
    /// Absolute tolerance on the eigenvalue.
    pub root_tolerance: Real,
    pub precision: Precision,
    /// Smallest hole radius accepted.
    pub min_eps: Real,
}

impl ShootingConfig {
    pub fn new(p: Precision) -> Self {
        ShootingConfig {
            steps: 2048,
            root_tolerance: Real::parse("1e-30", p).expect("literal"),
            precision: p,
            min_eps: Real::parse("0.05", p).expect("literal"),
        }
    }

    fn validate(&self) -> Result<()> {
        if self.steps < 64 {
            return Err(Error::Domain("at least 64 integration steps are required".into()));
        }
        if !self.root_tolerance.is_positive() {
            return Err(Error::Domain("root tolerance must be positive".into()));
        }
        Ok(())
    }

    fn bits(&self) -> u32 {
        self.precision.bits() + 64
    }
}

/// Coefficients `c0..c3` of the monic quartic `x^4 + c3 x^3 + c2 x^2 + c1 x + c0`.
fn characteristic(n: i64, t: i64) -> [i64; 4] {
    // (x^2 + a x + b)(x^2 + c x + d)
    let (a, b) = (n - 2, -t);
    let (c, d) = (n - 6, -2 * (n - 4) - t);
    [b * d, a * d + b * c, b + d + a * c, a + c]
}

fn companion(n: i64, t: i64, like: &Real) -> Mat4 {
    let c = characteristic(n, t);
    let z = || Real::zero_like(like);
    let o = || Real::int_like(1, like);
    [
        [z(), o(), z(), z()],
        [z(), z(), o(), z()],
        [z(), z(), z(), o()],
        [
            Real::int_like(-c[0], like),
            Real::int_like(-c[1], like),
            Real::int_like(-c[2], like),
            Real::int_like(-c[3], like),
        ],
    ]
}

/// `sum_{j <= ORDER} (hA)^j / j!`.
fn taylor_step(a: &Mat4, h: &Real) -> Mat4 {
    let mut term = identity4(h);
    let mut sum = identity4(h);
    for j in 1..=ORDER {
        term = mat_mul(&term, a);
        for row in term.iter_mut() {
            for x in row.iter_mut() {
                *x = &*x * h / j as i64;
            }
        }
        for (srow, trow) in sum.iter_mut().zip(&term) {
            for (s, t) in srow.iter_mut().zip(trow) {
                *s += t;
            }
        }
    }
    sum
}

fn is_finite(m: &Mat4) -> bool {
    m.iter().flatten().all(Real::is_finite)
}

type CacheKey = (u32, u32, String, usize, u32);

fn cache() -> &'static Mutex<HashMap<CacheKey, Mat4>> {
    static CACHE: OnceLock<Mutex<HashMap<CacheKey, Mat4>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Fundamental matrix of the state `(y, y', y'', y''')` in `t` from `log eps`
/// to `0`, integrated with exactly `steps` Taylor steps.
pub fn fundamental_matrix(dom: &Annulus, k: u32, steps: usize, bits: u32) -> Result<Mat4> {
    let key = (dom.n().get(), k, dom.eps().to_decimal(40), steps, bits);
    if let Some(m) = cache().lock().unwrap().get(&key) {
        return Ok(m.clone());
    }
    let eps = dom.eps().with_bits(bits);
    let n = dom.n().get() as i64;
    let a = companion(n, tau(dom.n(), k), &eps);
    let h = -eps.ln() / steps as i64;
    let step = taylor_step(&a, &h);
    let mut phi = identity4(&eps);
    for _ in 0..steps {
        phi = mat_mul(&step, &phi);
    }
    if !is_finite(&phi) {
        return Err(Error::Integration(format!(
            "fundamental matrix overflowed with {steps} steps"
        )));
    }
    cache().lock().unwrap().insert(key, phi.clone());
    Ok(phi)
}

/// `|det Phi / eps^{2(n-4)} - 1|`: Abel's identity for the companion system,
/// whose trace is `-(2n - 8)`.
pub fn abel_defect(dom: &Annulus, phi: &Mat4) -> Real {
    let n = dom.n().get() as i64;
    let want = dom.eps().with_bits(phi[0][0].prec_bits()).powi(2 * (n - 4));
    (det4(phi) / want - 1).abs()
}

/// Fundamental matrix with the step count doubled (up to three times) while
/// Abel's identity fails at relative `1e-15`.
fn checked_fundamental(dom: &Annulus, k: u32, cfg: &ShootingConfig) -> Result<Mat4> {
    let limit = Real::parse("1e-15", cfg.precision)?;
    let mut steps = cfg.steps;
    let mut last = String::new();
    for _ in 0..4 {
        match fundamental_matrix(dom, k, steps, cfg.bits()) {
            Ok(phi) => {
                let defect = abel_defect(dom, &phi);
                if defect <= limit {
                    return Ok(phi);
                }
                last = format!("Abel defect {} with {steps} steps", defect.to_decimal(5));
            }
            Err(e) => last = e.to_string(),
        }
        steps *= 2;
    }
    Err(Error::Integration(format!("n={} k={k}: {last}", dom.n().get())))
}

/// `(alpha, alpha_r, D, D_r)` at radius `r` from the `t`-state, with
/// `D = alpha'' + (n-1)/r alpha' - tau/r^2 alpha`.
fn radial_quantities(n: i64, t: i64, r: &Real, y: &[Real; 4]) -> [Real; 4] {
    let alpha = y[0].clone();
    let alpha_r = &y[1] / r;
    let lap = (&y[2] + &y[1] * (n - 2) - &y[0] * t) / r.square();
    let lap_r = (&y[3] + &y[2] * (n - 4) - &y[1] * (2 * (n - 2) + t) + &y[0] * (2 * t)) / r.powi(3);
    [alpha, alpha_r, lap, lap_r]
}

/// Row-scaled boundary determinant at `lambda` for the degree-`k` separated
/// problem on the annulus.
pub fn shoot_determinant(kind: Problem, dom: &Annulus, k: u32, lambda: &Real, cfg: &ShootingConfig) -> Result<Real> {
    cfg.validate()?;
    if !lambda.is_finite() {
        return Err(Error::Domain("lambda must be finite".into()));
    }
    if *dom.eps() < cfg.min_eps {
        return Err(Error::Domain(format!(
            "eps below the oracle's minimum {}",
            cfg.min_eps.to_decimal(6)
        )));
    }
    let phi = checked_fundamental(dom, k, cfg)?;
    let bits = cfg.bits();
    let n = dom.n().get() as i64;
    let t = tau(dom.n(), k);
    let eps = dom.eps().with_bits(bits);
    let one = Real::int_like(1, &eps);
    let lam = lambda.with_bits(bits);
    let mut rows: Mat4 = identity4(&eps);
    for j in 0..4 {
        let start: [Real; 4] = std::array::from_fn(|i| Real::int_like((i == j) as i64, &eps));
        let end: [Real; 4] = std::array::from_fn(|i| phi[i][j].clone());
        let [a1, ar1, d1, dr1] = radial_quantities(n, t, &one, &end);
        let [ae, are, de, dre] = radial_quantities(n, t, &eps, &start);
        let column = match kind {
            Problem::Type1 => [ar1, are, dr1 + &lam * a1, -dre + &lam * ae],
            Problem::Type2 => [a1, ae, d1 - &lam * ar1, de + &lam * are],
        };
        for (i, v) in column.into_iter().enumerate() {
            rows[i][j] = v;
        }
    }
    for row in rows.iter_mut() {
        let scale = row.iter().map(Real::abs).reduce(|a, b| a.max(b)).expect("four entries");
        if !scale.is_zero() {
            for x in row.iter_mut() {
                *x = &*x / &scale;
            }
        }
    }
    Ok(det4(&rows))
}

/// Bisection for a sign change of [`shoot_determinant`] on `[lo, hi]`.
pub fn oracle_eigenvalue(
    kind: Problem,
    dom: &Annulus,
    k: u32,
    lo: &Real,
    hi: &Real,
    cfg: &ShootingConfig,
) -> Result<Real> {
    if lo >= hi {
        return Err(Error::Domain("bracket must satisfy lo < hi".into()));
    }
    let mut a = lo.with_bits(cfg.bits());
    let mut b = hi.with_bits(cfg.bits());
    let fa = shoot_determinant(kind, dom, k, &a, cfg)?;
    let fb = shoot_determinant(kind, dom, k, &b, cfg)?;
    if fa.is_zero() {
        return Ok(a);
    }
    if fb.is_zero() {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::NoSignChange {
            lo: lo.to_decimal(20),
            hi: hi.to_decimal(20),
        });
    }
    let sa = fa.signum();
    while (&b - &a) > cfg.root_tolerance {
        let mid = (&a + &b) / 2;
        let fm = shoot_determinant(kind, dom, k, &mid, cfg)?;
        if fm.is_zero() {
            return Ok(mid);
        }
        if fm.signum() == sa {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok((a + b) / 2)
}

/// Brackets around reference roots: 1% either side, cut at the midpoint
/// between neighbours, and `(-0.01, 0.01)` for a zero root.
pub fn brackets_around(roots: &[Real]) -> Vec<(Real, Real)> {
    let mut sorted: Vec<Real> = roots.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    let width = |r: &Real| {
        if r.abs() < Real::parse("1e-20", Precision::DEFAULT).expect("literal") {
            Real::parse("0.01", Precision::DEFAULT)
                .expect("literal")
                .with_bits(r.prec_bits())
        } else {
            r.abs() / 100
        }
    };
    (0..sorted.len())
        .map(|i| {
            let r = &sorted[i];
            let mut lo = r - width(r);
            let mut hi = r + width(r);
            if i > 0 {
                lo = lo.max((&sorted[i - 1] + r) / 2);
            }
            if i + 1 < sorted.len() {
                hi = hi.min((&sorted[i + 1] + r) / 2);
            }
            (lo, hi)
        })
        .collect()
}
