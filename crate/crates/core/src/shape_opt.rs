//! Scale-invariant normalized eigenvalues and annulus versus ball comparisons.

use serde::{Deserialize, Serialize};

use crate::annulus_pencil::{ball_value, pencil_roots, Annulus, Problem};
use crate::error::{Error, Result};
use crate::geometry::{ball_boundary_area, ball_volume, sphere_area, Dimension};
use crate::scalar::{Precision, Real};

/// Largest hole radius for which comparison verdicts are reported as validated.
pub const EPS_CEILING: &str = "0.1";

#[derive(Clone, Debug, Serialize)]
pub struct Measures {
    pub volume: Real,
    pub boundary_area: Real,
}

/// `|Omega| = omega (1 - eps^n) / n`, `|dOmega| = omega (1 + eps^{n-1})`.
pub fn annulus_measures(dom: &Annulus) -> Measures {
    let n = dom.n().get() as i64;
    let omega = sphere_area(dom.n(), dom.precision());
    let e = dom.eps();
    Measures {
        volume: &omega * (1 - e.powi(n)) / n,
        boundary_area: omega * (1 + e.powi(n - 1)),
    }
}

pub fn ball_measures(n: Dimension, r: &Real, p: Precision) -> Result<Measures> {
    Ok(Measures {
        volume: ball_volume(n, r, p)?,
        boundary_area: ball_boundary_area(n, r, p)?,
    })
}

#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    BoundaryAreaPow,
    VolumePow,
    /// `area^{a alpha} volume^{b (1 - alpha)}`.
    Mixed(f64),
}

impl Normalization {
    pub fn label(self) -> String {
        match self {
            Normalization::BoundaryAreaPow => "boundary_area_pow".into(),
            Normalization::VolumePow => "volume_pow".into(),
            Normalization::Mixed(a) => format!("mixed({a})"),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct NormalizedValue {
    pub raw: Real,
    pub normalization: Normalization,
    pub value: Real,
}

/// Scaling degree of the eigenvalue: 3 for Type 1, 1 for Type 2.
fn degree(kind: Problem) -> i64 {
    match kind {
        Problem::Type1 => 3,
        Problem::Type2 => 1,
    }
}

pub fn normalized_eigenvalue(
    kind: Problem,
    value: &Real,
    m: &Measures,
    n: Dimension,
    normalization: Normalization,
) -> Result<NormalizedValue> {
    if !m.volume.is_positive() || !m.boundary_area.is_positive() {
        return Err(Error::Domain("measures must be positive".into()));
    }
    let d = degree(kind);
    let n = n.get() as i64;
    let area_exp = Real::int_like(d, value) / (n - 1);
    let vol_exp = Real::int_like(d, value) / n;
    let area_part = m.boundary_area.pow(&area_exp);
    let vol_part = m.volume.pow(&vol_exp);
    let factor = match normalization {
        Normalization::BoundaryAreaPow => area_part,
        Normalization::VolumePow => vol_part,
        Normalization::Mixed(alpha) => {
            if !alpha.is_finite() {
                return Err(Error::Domain("alpha must be finite".into()));
            }
            let a = Real::from_f64(alpha, Precision::DEFAULT).with_bits(value.prec_bits());
            area_part.pow(&a) * vol_part.pow(&(1 - &a))
        }
    };
    Ok(NormalizedValue {
        raw: value.clone(),
        normalization,
        value: value * factor,
    })
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    AnnulusGreater,
    BallGreater,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::AnnulusGreater => "annulus_greater",
            Verdict::BallGreater => "ball_greater",
        }
    }
}

/// Sign established for small holes: Type 1 annuli beat the ball for every
/// `k >= 1`; Type 2 annuli (n >= 4) lose for `k <= 1` and win for `k >= 2`.
pub fn expected_verdict(kind: Problem, n: Dimension, k: u32) -> Option<Verdict> {
    match kind {
        Problem::Type1 if k >= 1 => Some(Verdict::AnnulusGreater),
        Problem::Type2 if n.get() >= 4 => Some(if k <= 1 {
            Verdict::BallGreater
        } else {
            Verdict::AnnulusGreater
        }),
        _ => None,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Comparison {
    pub kind: Problem,
    pub n: u32,
    pub k: u32,
    pub eps: Real,
    pub annulus: NormalizedValue,
    pub ball: NormalizedValue,
    /// Normalized difference divided by the ball's area factor, so it is
    /// measured in eigenvalue units of the unit ball.
    pub margin: Real,
    pub verdict: Verdict,
    /// `eps` is within the validated small-hole regime.
    pub validated: bool,
}

impl Comparison {
    pub fn label(&self) -> String {
        if self.validated {
            self.verdict.name().to_string()
        } else {
            format!("{} (outside validated regime)", self.verdict.name())
        }
    }
}

/// Compares `lambda_(k) |dOmega|^{d/(n-1)}` of the annulus `B_1 \ B_eps`
/// (first pencil branch at degree `k`) with the unit ball.
///
/// Holes larger than [`EPS_CEILING`] are rejected unless `allow_outside`.
pub fn compare_annulus_vs_ball(
    kind: Problem,
    n: Dimension,
    k: u32,
    eps: &Real,
    p: Precision,
    allow_outside: bool,
) -> Result<Comparison> {
    if kind == Problem::Type2 && n.get() <= 3 {
        return Err(Error::Unsupported(
            "Type 2 comparison is only meaningful for n >= 4".into(),
        ));
    }
    if kind == Problem::Type1 && k == 0 {
        return Err(Error::Unsupported(
            "degree 0 carries the zero eigenvalue for Type 1".into(),
        ));
    }
    let ceiling = Real::parse(EPS_CEILING, p)?;
    let validated = *eps <= ceiling;
    if !validated && !allow_outside {
        return Err(Error::Domain(format!(
            "eps = {} exceeds the validated ceiling {EPS_CEILING}",
            eps.to_decimal(10)
        )));
    }
    let dom = Annulus::new(n, eps, p)?;
    let roots = pencil_roots(kind, &dom, k)?;
    let first = roots
        .roots
        .into_iter()
        .find(|r| r.branch == 1)
        .ok_or_else(|| Error::Integrity(format!("no real root at degree {k}")))?;
    let one = Real::one(p);
    let ball_lambda = ball_value(kind, n, k, &one);
    let am = annulus_measures(&dom);
    let bm = ball_measures(n, &one, p)?;
    let annulus = normalized_eigenvalue(kind, &first.value, &am, n, Normalization::BoundaryAreaPow)?;
    let ball = normalized_eigenvalue(kind, &ball_lambda, &bm, n, Normalization::BoundaryAreaPow)?;
    let margin = (&annulus.value - &ball.value) / (&ball.value / &ball_lambda);
    let verdict = if margin.is_positive() {
        Verdict::AnnulusGreater
    } else {
        Verdict::BallGreater
    };
    Ok(Comparison {
        kind,
        n: n.get(),
        k,
        eps: eps.clone(),
        annulus,
        ball,
        margin,
        verdict,
        validated,
    })
}

/// Log-log slope of `|margin|` between two hole radii.
pub fn margin_slope(kind: Problem, n: Dimension, k: u32, e1: &Real, e2: &Real, p: Precision) -> Result<f64> {
    let m1 = compare_annulus_vs_ball(kind, n, k, e1, p, true)?.margin.abs();
    let m2 = compare_annulus_vs_ball(kind, n, k, e2, p, true)?.margin.abs();
    if m1.is_zero() || m2.is_zero() {
        return Err(Error::Domain("zero margin".into()));
    }
    Ok(((m1 / m2).ln() / (e1 / e2).ln()).to_f64())
}

/// `|dOmega| / |Omega|`, an upper bound for the first Type 2 eigenvalue.
pub fn kuttler_bound(m: &Measures) -> Real {
    &m.boundary_area / &m.volume
}

/// `(n+2) |dOmega| / (n |Omega| (|Omega| / |B|)^{2/n})`, an upper bound for the
/// first non-zero Type 1 eigenvalue.
pub fn xia_wang_bound(n: Dimension, m: &Measures, p: Precision) -> Result<Real> {
    let nn = n.get() as i64;
    let ball = ball_volume(n, &Real::one(p), p)?;
    let ratio = (&m.volume / ball).pow(&Real::ratio(2, nn, p));
    Ok(&m.boundary_area * (nn + 2) / (&m.volume * nn * ratio))
}
