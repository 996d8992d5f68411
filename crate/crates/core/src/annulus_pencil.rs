//! Separated eigenvalue problems on the annulus `B_1 \ B_eps`.
//!
//! For each angular degree `k` the four boundary conditions at `r = 1` and
//! `r = eps` give a 4x4 linear system `M(lambda) (a, b, c, d) = 0` in the
//! radial coefficients. The eigenvalue enters two rows linearly, so
//! `det M(lambda)` is a quadratic whose roots are the eigenvalues of degree `k`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{harmonic_multiplicity, Dimension};
use crate::linalg::{det4_with_scale, null_vector4, Mat4};
use crate::radial_basis::{basis_states, radial_family, RadialState};
use crate::scalar::{Precision, Real};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Problem {
    /// `du/dnu = 0`, `d(Delta u)/dnu + xi u = 0`.
    Type1,
    /// `u = 0`, `Delta u = eta du/dnu`.
    Type2,
}

impl Problem {
    pub fn name(self) -> &'static str {
        match self {
            Problem::Type1 => "type1",
            Problem::Type2 => "type2",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Annulus {
    n: Dimension,
    eps: Real,
    precision: Precision,
}

impl Annulus {
    pub fn new(n: Dimension, eps: &Real, precision: Precision) -> Result<Self> {
        if !eps.is_positive() || *eps >= 1 {
            return Err(Error::Domain(format!(
                "inner radius must lie in (0, 1), got {}",
                eps.to_decimal(20)
            )));
        }
        Ok(Annulus {
            n,
            eps: eps.with_bits(precision.bits()),
            precision,
        })
    }

    pub fn n(&self) -> Dimension {
        self.n
    }

    pub fn eps(&self) -> &Real {
        &self.eps
    }

    pub fn precision(&self) -> Precision {
        self.precision
    }

    /// Working precision in bits: the requested precision plus headroom for
    /// the cancellation that grows like a fixed power of `1/eps`.
    pub fn work_bits(&self) -> u32 {
        let lost = (8.0 * -self.eps.to_f64().log2()).ceil() as u32;
        self.precision.bits() + lost + 32
    }
}

/// Boundary matrix split as `M(lambda) = m0 + lambda m1`.
///
/// Rows are the first condition at `r = 1`, at `r = eps`, then the second
/// condition at `r = 1`, at `r = eps`. The outward normal is `+d/dr` on the
/// outer sphere and `-d/dr` on the inner one.
#[derive(Clone, Debug)]
pub struct BoundaryParts {
    pub m0: Mat4,
    pub m1: Mat4,
}

impl BoundaryParts {
    pub fn at(&self, lambda: &Real) -> Mat4 {
        std::array::from_fn(|i| std::array::from_fn(|j| &self.m0[i][j] + &(&self.m1[i][j] * lambda)))
    }
}

pub fn boundary_parts(kind: Problem, dom: &Annulus, k: u32) -> Result<BoundaryParts> {
    let bits = dom.work_bits();
    let one = Real::int_like(1, &dom.eps.with_bits(bits));
    let eps = dom.eps.with_bits(bits);
    let f = radial_family(dom.n, k);
    let outer = basis_states(&f, &one)?;
    let inner = basis_states(&f, &eps)?;
    let zero = || Real::zero_like(&one);
    let row = |states: &[RadialState; 4], get: &dyn Fn(&RadialState) -> Real| -> [Real; 4] {
        std::array::from_fn(|j| get(&states[j]))
    };
    let zeros = || [zero(), zero(), zero(), zero()];
    let (m0, m1) = match kind {
        Problem::Type1 => (
            [
                row(&outer, &|s| s.alpha_r.clone()),
                row(&inner, &|s| s.alpha_r.clone()),
                row(&outer, &|s| s.lap_r.clone()),
                row(&inner, &|s| -&s.lap_r),
            ],
            [
                zeros(),
                zeros(),
                row(&outer, &|s| s.alpha.clone()),
                row(&inner, &|s| s.alpha.clone()),
            ],
        ),
        Problem::Type2 => (
            [
                row(&outer, &|s| s.alpha.clone()),
                row(&inner, &|s| s.alpha.clone()),
                row(&outer, &|s| s.lap.clone()),
                row(&inner, &|s| s.lap.clone()),
            ],
            [
                zeros(),
                zeros(),
                row(&outer, &|s| -&s.alpha_r),
                row(&inner, &|s| s.alpha_r.clone()),
            ],
        ),
    };
    Ok(BoundaryParts { m0, m1 })
}

pub fn boundary_matrix(kind: Problem, dom: &Annulus, k: u32, lambda: &Real) -> Result<Mat4> {
    Ok(boundary_parts(kind, dom, k)?.at(lambda))
}

/// `A lambda^2 + B lambda + C`, equal to `sign * eps^scaling_exponent * det M(lambda)`.
#[derive(Clone, Debug)]
pub struct QuadraticPencil {
    pub a: Real,
    pub b: Real,
    pub c: Real,
    pub scaling_exponent: i64,
    pub scale_sign: i32,
}

impl QuadraticPencil {
    pub fn eval(&self, lambda: &Real) -> Real {
        (&self.a * lambda + &self.b) * lambda + &self.c
    }

    /// Largest of `|A lambda^2|, |B lambda|, |C|`.
    pub fn max_term(&self, lambda: &Real) -> Real {
        let a = (&self.a * &lambda.square()).abs();
        let b = (&self.b * lambda).abs();
        a.max(b).max(self.c.abs())
    }
}

fn scaling(kind: Problem, dom: &Annulus, k: u32) -> (i64, i32) {
    let (n, k) = (dom.n.get() as i64, k as i64);
    match kind {
        Problem::Type1 => (2 * n + 2 * k - 2, 1),
        Problem::Type2 => (2 * n + 2 * k - 4, -1),
    }
}

/// `sign * eps^s * det M(lambda)` and an upper bound on its rounding error.
fn scaled_det(parts: &BoundaryParts, lambda: &Real, factor: &Real) -> (Real, Real) {
    let (det, abs) = det4_with_scale(&parts.at(lambda));
    let bits = det.prec_bits();
    let ulp = Real::int_like(2, &det).powi(-(bits as i64) + 8);
    (det * factor, abs * factor.abs() * ulp)
}

/// The scaled determinant at `lambda`, for sampling the pencil identity.
pub fn scaled_determinant(kind: Problem, dom: &Annulus, k: u32, lambda: &Real) -> Result<Real> {
    let parts = boundary_parts(kind, dom, k)?;
    let (s, sign) = scaling(kind, dom, k);
    let factor = dom.eps.with_bits(dom.work_bits()).powi(s) * sign as i64;
    Ok(scaled_det(&parts, &lambda.with_bits(dom.work_bits()), &factor).0)
}

pub fn extract_pencil(kind: Problem, dom: &Annulus, k: u32) -> Result<QuadraticPencil> {
    let parts = boundary_parts(kind, dom, k)?;
    let bits = dom.work_bits();
    let (s, sign) = scaling(kind, dom, k);
    let factor = dom.eps.with_bits(bits).powi(s) * sign as i64;
    let lam = |v: i64| Real::int_like(v, &factor);
    let (dp, ep) = scaled_det(&parts, &lam(1), &factor);
    let (dm, em) = scaled_det(&parts, &lam(-1), &factor);
    let (d0, e0) = scaled_det(&parts, &lam(0), &factor);
    let pencil = QuadraticPencil {
        a: (&dp + &dm - &d0 * 2) / 2,
        b: (&dp - &dm) / 2,
        c: d0,
        scaling_exponent: s,
        scale_sign: sign,
    };
    let (d2, e2) = scaled_det(&parts, &lam(2), &factor);
    let mismatch = (&d2 - &pencil.eval(&lam(2))).abs();
    let allowed = (e2 + (ep + em + e0) * 8) * 4;
    if mismatch > allowed {
        return Err(Error::Integrity(format!(
            "{} n={} k={}: sampled determinant differs from quadratic by {}",
            kind.name(),
            dom.n.get(),
            k,
            mismatch.to_decimal(6)
        )));
    }
    Ok(pencil)
}

#[derive(Clone, Debug)]
pub struct PencilRoot {
    pub value: Real,
    pub branch: u8,
}

#[derive(Clone, Debug, Default)]
pub struct PencilRoots {
    /// Real roots in ascending order, branch 1 first.
    pub roots: Vec<PencilRoot>,
    /// The discriminant was negative.
    pub complex: bool,
    /// `A = 0`, so the second branch has gone to infinity.
    pub at_infinity: bool,
}

pub fn solve_pencil(p: &QuadraticPencil) -> Result<PencilRoots> {
    if p.a.is_zero() && p.b.is_zero() && p.c.is_zero() {
        return Err(Error::ZeroPencil);
    }
    if p.a.is_zero() {
        if p.b.is_zero() {
            // nonzero constant: no roots at all
            return Ok(PencilRoots {
                at_infinity: true,
                ..Default::default()
            });
        }
        return Ok(PencilRoots {
            roots: vec![PencilRoot {
                value: -(&p.c / &p.b),
                branch: 1,
            }],
            complex: false,
            at_infinity: true,
        });
    }
    let disc = p.b.square() - &p.a * &p.c * 4;
    if disc.is_negative() {
        return Ok(PencilRoots {
            complex: true,
            ..Default::default()
        });
    }
    let root_disc = disc.sqrt();
    let q = if p.b.is_negative() {
        -(&p.b - &root_disc) / 2
    } else {
        -(&p.b + &root_disc) / 2
    };
    let (x1, x2) = if q.is_zero() {
        (Real::zero_like(&p.a), Real::zero_like(&p.a))
    } else {
        (&q / &p.a, &p.c / &q)
    };
    let (lo, hi) = if x1 <= x2 { (x1, x2) } else { (x2, x1) };
    Ok(PencilRoots {
        roots: vec![PencilRoot { value: lo, branch: 1 }, PencilRoot { value: hi, branch: 2 }],
        complex: false,
        at_infinity: false,
    })
}

pub fn pencil_roots(kind: Problem, dom: &Annulus, k: u32) -> Result<PencilRoots> {
    solve_pencil(&extract_pencil(kind, dom, k)?)
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Pencil,
    ClosedForm,
    Oracle,
}

impl Provenance {
    pub fn name(self) -> &'static str {
        match self {
            Provenance::Pencil => "pencil",
            Provenance::ClosedForm => "closed_form",
            Provenance::Oracle => "oracle",
        }
    }
}

#[derive(Clone, Debug)]
pub struct SpectrumEntry {
    pub value: Real,
    pub k: u32,
    pub branch: u8,
    pub multiplicity: u64,
    pub provenance: Provenance,
}

/// Eigenvalues in ascending order, each repeated according to its multiplicity.
#[derive(Clone, Debug, Default)]
pub struct Spectrum {
    pub entries: Vec<SpectrumEntry>,
    /// Eigenvalues from degrees beyond the enumerated range might belong
    /// among the reported ones, or fewer than the requested count were found.
    pub tail_warning: bool,
    /// Degrees whose pencil had complex roots.
    pub complex_degrees: Vec<u32>,
}

impl Spectrum {
    /// One entry per distinct `(k, branch)` eigenvalue, in order.
    pub fn distinct(&self) -> Vec<&SpectrumEntry> {
        let mut out: Vec<&SpectrumEntry> = Vec::new();
        for e in &self.entries {
            if out.last().is_none_or(|l| l.k != e.k || l.branch != e.branch) {
                out.push(e);
            }
        }
        out
    }

    pub fn values(&self) -> Vec<&Real> {
        self.entries.iter().map(|e| &e.value).collect()
    }
}

fn expand_and_truncate(mut distinct: Vec<SpectrumEntry>, count: usize) -> (Vec<SpectrumEntry>, bool) {
    distinct.sort_by(|x, y| {
        x.value
            .partial_cmp(&y.value)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(x.k.cmp(&y.k))
            .then(x.branch.cmp(&y.branch))
    });
    let mut out = Vec::with_capacity(count);
    for e in distinct {
        for _ in 0..e.multiplicity {
            if out.len() == count {
                return (out, false);
            }
            out.push(e.clone());
        }
    }
    let short = out.len() < count;
    (out, short)
}

/// The first `count` eigenvalues, with multiplicity, from degrees `0..=k_max`.
///
/// With `positive_only`, the zero eigenvalue of the Type 1 problem is left out.
pub fn annulus_spectrum(
    kind: Problem,
    dom: &Annulus,
    k_max: u32,
    count: usize,
    positive_only: bool,
) -> Result<Spectrum> {
    if count == 0 {
        return Err(Error::Domain("count must be at least 1".into()));
    }
    let mut distinct = Vec::new();
    let mut complex_degrees = Vec::new();
    for k in 0..=k_max {
        let roots = pencil_roots(kind, dom, k)?;
        if roots.complex {
            complex_degrees.push(k);
        }
        for r in roots.roots {
            if positive_only && r.value.is_zero() {
                continue;
            }
            distinct.push(SpectrumEntry {
                value: r.value,
                k,
                branch: r.branch,
                multiplicity: harmonic_multiplicity(dom.n, k),
                provenance: Provenance::Pencil,
            });
        }
    }
    let (entries, short) = expand_and_truncate(distinct, count);
    let mut tail_warning = short;
    if let Some(last) = entries.last() {
        let next = pencil_roots(kind, dom, k_max + 1)?;
        let ball = ball_value(kind, dom.n, k_max + 1, &Real::one(dom.precision));
        let bound = next
            .roots
            .first()
            .map(|r| r.value.clone().min(ball.clone()))
            .unwrap_or(ball);
        if last.value > bound {
            tail_warning = true;
        }
    }
    Ok(Spectrum {
        entries,
        tail_warning,
        complex_degrees,
    })
}

/// Degree-`k` eigenvalue of the ball of radius `r`.
pub fn ball_value(kind: Problem, n: Dimension, k: u32, r: &Real) -> Real {
    let (n, k) = (n.get() as i64, k as i64);
    match kind {
        Problem::Type1 => Real::int_like(k * k * (n + 2 * k), r) / r.powi(3),
        Problem::Type2 => Real::int_like(n + 2 * k, r) / r,
    }
}

/// Closed-form spectrum of the ball of radius `r`: `k^2 (n+2k) / r^3` for
/// Type 1 and `(n+2k) / r` for Type 2.
pub fn ball_spectrum(kind: Problem, n: Dimension, r: &Real, k_max: u32, count: usize) -> Result<Spectrum> {
    if !r.is_positive() {
        return Err(Error::Domain("ball radius must be positive".into()));
    }
    if count == 0 {
        return Err(Error::Domain("count must be at least 1".into()));
    }
    let distinct = (0..=k_max)
        .map(|k| SpectrumEntry {
            value: ball_value(kind, n, k, r),
            k,
            branch: 1,
            multiplicity: harmonic_multiplicity(n, k),
            provenance: Provenance::ClosedForm,
        })
        .collect();
    let (entries, short) = expand_and_truncate(distinct, count);
    Ok(Spectrum {
        entries,
        tail_warning: short,
        complex_degrees: Vec::new(),
    })
}

/// Radial coefficients `(a, b, c, d)` of an eigenfunction and the relative
/// residual of its four boundary conditions.
#[derive(Clone, Debug)]
pub struct Eigenpair {
    pub lambda: Real,
    pub coeffs: [Real; 4],
    pub residual: Real,
}

/// Largest over the four conditions of `|sum_j M_ij v_j|` divided by
/// `sum_j |v_j| (|m0_ij| + |lambda m1_ij|)`.
pub fn boundary_residual(parts: &BoundaryParts, lambda: &Real, v: &[Real; 4]) -> Real {
    let mut worst = Real::zero_like(lambda);
    for i in 0..4 {
        let mut value = Real::zero_like(lambda);
        let mut scale = Real::zero_like(lambda);
        for j in 0..4 {
            let p0 = &parts.m0[i][j] * &v[j];
            let p1 = &parts.m1[i][j] * &v[j] * lambda;
            scale += p0.abs() + p1.abs();
            value += p0 + p1;
        }
        let rel = if scale.is_zero() {
            value.abs()
        } else {
            value.abs() / scale
        };
        worst = worst.max(rel);
    }
    worst
}

pub fn eigenpair(kind: Problem, dom: &Annulus, k: u32, lambda: &Real) -> Result<Eigenpair> {
    let parts = boundary_parts(kind, dom, k)?;
    let lambda = lambda.with_bits(dom.work_bits());
    let coeffs = null_vector4(&parts.at(&lambda));
    if coeffs.iter().all(|c| c.is_zero()) {
        return Err(Error::Domain(format!(
            "no null vector at {}: the eigenvalue is not simple in its degree",
            lambda.to_decimal(20)
        )));
    }
    let residual = boundary_residual(&parts, &lambda, &coeffs);
    Ok(Eigenpair {
        lambda,
        coeffs,
        residual,
    })
}
