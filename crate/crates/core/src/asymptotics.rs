//! Small-hole expansions of annulus eigenvalues and their empirical checks.
//!
//! A model is a short sum of terms `c eps^p (log eps)^q` with exact rational
//! coefficients, plus the shape of the neglected remainder.

use std::cmp::Ordering;

use num_rational::Ratio;
use serde::Serialize;

use crate::annulus_pencil::{pencil_roots, Annulus, Problem};
use crate::error::{Error, Result};
use crate::geometry::Dimension;
use crate::scalar::{Precision, Real};

pub type Rational = Ratio<i64>;

fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

fn int(n: i64) -> Rational {
    Rational::from_integer(n)
}

/// `coeff * eps^power * (log eps)^log_power`.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct ExpansionTerm {
    pub coeff: Rational,
    pub power: Rational,
    pub log_power: i32,
}

impl ExpansionTerm {
    pub fn new(coeff: Rational, power: i64, log_power: i32) -> Self {
        ExpansionTerm {
            coeff,
            power: int(power),
            log_power,
        }
    }

    /// Order shape with unit coefficient.
    pub fn order(power: i64, log_power: i32) -> Self {
        ExpansionTerm::new(int(1), power, log_power)
    }

    /// `Greater` when `self` is larger than `other` as `eps -> 0+`.
    pub fn dominance(&self, other: &ExpansionTerm) -> Ordering {
        other.power.cmp(&self.power).then(self.log_power.cmp(&other.log_power))
    }

    pub fn shape(&self, eps: &Real) -> Real {
        let pw = if self.power.is_integer() {
            eps.powi(*self.power.numer())
        } else {
            eps.pow(&(Real::int_like(*self.power.numer(), eps) / *self.power.denom()))
        };
        match self.log_power {
            0 => pw,
            q => pw * eps.ln().powi(q as i64),
        }
    }

    pub fn eval(&self, eps: &Real) -> Real {
        let c = Real::int_like(*self.coeff.numer(), eps) / *self.coeff.denom();
        c * self.shape(eps)
    }
}

/// A value known in closed form, `numer / (1 - eps)`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExactReciprocal {
    pub numer: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModelSource {
    pub problem: Problem,
    pub case: &'static str,
    pub n: u32,
    pub k: u32,
    pub branch: u8,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AsymptoticModel {
    /// Terms in decreasing size as `eps -> 0+`.
    pub terms: Vec<ExpansionTerm>,
    pub remainder: ExpansionTerm,
    pub source: ModelSource,
    pub exact: Option<ExactReciprocal>,
}

impl AsymptoticModel {
    pub fn leading(&self) -> &ExpansionTerm {
        &self.terms[0]
    }

    /// The first correction, if the model has one.
    pub fn correction(&self) -> Option<&ExpansionTerm> {
        self.terms.get(1)
    }
}

fn model(
    problem: Problem,
    case: &'static str,
    n: Dimension,
    k: u32,
    branch: u8,
    terms: Vec<ExpansionTerm>,
    remainder: ExpansionTerm,
) -> AsymptoticModel {
    AsymptoticModel {
        terms,
        remainder,
        source: ModelSource {
            problem,
            case,
            n: n.get(),
            k,
            branch,
        },
        exact: None,
    }
}

/// `-k^2 (n+2k) [k(n+2k)/(n+k-2) + 2]`, the correction coefficient of the
/// generic degree, which is also what the determinant gives for every
/// `n + 2k >= 5`.
pub fn type1_generic_coefficient(n: Dimension, k: u32) -> Rational {
    let (n, k) = (n.get() as i64, k as i64);
    let m = n + 2 * k;
    -int(k * k * m) * (rat(k * m, n + k - 2) + int(2))
}

/// Correction coefficient printed for `n + 2k = 6`.
pub fn type1_case_ii_coefficient(n: Dimension, k: u32) -> Rational {
    let (n, k) = (n.get() as i64, k as i64);
    let m = n + 2 * k;
    -int(k * k * m) * (rat(k * m, n + k - 2) + rat((m - 3).pow(3), 2) + rat(m + 1, 2))
}

/// Correction coefficient for `n + 2k = 5` in the longer form carrying the
/// `(n+2k-2)^2 (n+2k-4)^4 / 64` term.
pub fn type1_case_iii_long_form(n: Dimension, k: u32) -> Rational {
    let (n, k) = (n.get() as i64, k as i64);
    let m = n + 2 * k;
    -int(k * k * m) * (rat(k * m, n + k - 2) + int(2) + rat((m - 2).pow(2) * (m - 4).pow(4), 64))
}

/// Published expansion of the degree-`k` Type 1 eigenvalue, `k >= 1`.
pub fn expansion_type1(n: Dimension, k: u32) -> Result<AsymptoticModel> {
    if k == 0 {
        return Err(Error::Unsupported(
            "degree 0 of the Type 1 problem has eigenvalues 0 and a diverging branch only".into(),
        ));
    }
    let (nn, kk) = (n.get() as i64, k as i64);
    let m = nn + 2 * kk;
    let lead = ExpansionTerm::new(int(kk * kk * m), 0, 0);
    let t1 = Problem::Type1;
    Ok(match m {
        4 => model(
            t1,
            "iv",
            n,
            k,
            1,
            vec![lead, ExpansionTerm::new(int(-24), 2, 0)],
            ExpansionTerm::order(2, -1),
        ),
        5 => model(
            t1,
            "iii",
            n,
            k,
            1,
            vec![lead, ExpansionTerm::new(rat(-1485, 64), 3, 0)],
            ExpansionTerm::order(4, 0),
        ),
        6 => model(
            t1,
            "ii",
            n,
            k,
            1,
            vec![lead, ExpansionTerm::new(type1_case_ii_coefficient(n, k), 4, 0)],
            ExpansionTerm::order(5, 0),
        ),
        _ => model(
            t1,
            "i",
            n,
            k,
            1,
            vec![lead, ExpansionTerm::new(type1_generic_coefficient(n, k), m - 2, 0)],
            ExpansionTerm::order(m - 1, 0),
        ),
    })
}

/// The generic-degree formula applied to any `n + 2k >= 5`, for comparison
/// with the published special cases.
pub fn expansion_type1_generic(n: Dimension, k: u32) -> Result<AsymptoticModel> {
    let (nn, kk) = (n.get() as i64, k as i64);
    let m = nn + 2 * kk;
    if k == 0 || m < 5 {
        return Err(Error::Unsupported(format!(
            "generic expansion needs k >= 1 and n + 2k >= 5, got n={nn} k={kk}"
        )));
    }
    Ok(model(
        Problem::Type1,
        "i*",
        n,
        k,
        1,
        vec![
            ExpansionTerm::new(int(kk * kk * m), 0, 0),
            ExpansionTerm::new(type1_generic_coefficient(n, k), m - 2, 0),
        ],
        ExpansionTerm::order(m - 1, 0),
    ))
}

/// Published expansion of the Type 2 eigenvalue of degree `k`.
///
/// Both branches are modelled for `(n, k) = (2, 0)` and `(3, 0)`; elsewhere
/// only branch 1, the second root diverging as `eps -> 0`.
pub fn expansion_type2(n: Dimension, k: u32, branch: u8) -> Result<AsymptoticModel> {
    let (nn, kk) = (n.get() as i64, k as i64);
    let m = nn + 2 * kk;
    let t2 = Problem::Type2;
    let two_branches = matches!((nn, kk), (2, 0) | (3, 0));
    if branch != 1 && !(branch == 2 && two_branches) {
        return Err(Error::Unsupported(format!(
            "no expansion for branch {branch} of the Type 2 problem at n={nn} k={kk}"
        )));
    }
    Ok(match (nn, kk) {
        (2, 0) => {
            let log_term = ExpansionTerm::new(int(4), 1, 2);
            let terms = if branch == 1 {
                vec![log_term]
            } else {
                vec![ExpansionTerm::new(int(4), 0, 0), log_term]
            };
            model(t2, "ii", n, k, branch, terms, ExpansionTerm::order(1, 1))
        }
        (3, 0) => {
            let numer = if branch == 1 { 2 } else { 6 };
            let mut md = model(
                t2,
                "iii",
                n,
                k,
                branch,
                vec![
                    ExpansionTerm::new(int(numer), 0, 0),
                    ExpansionTerm::new(int(numer), 1, 0),
                ],
                ExpansionTerm::order(2, 0),
            );
            md.exact = Some(ExactReciprocal { numer });
            md
        }
        (2, 1) | (4, 0) => model(
            t2,
            "iv",
            n,
            k,
            1,
            vec![ExpansionTerm::new(int(4), 0, 0), ExpansionTerm::new(int(-4), 1, 0)],
            ExpansionTerm::order(1, -1),
        ),
        _ => model(
            t2,
            "i",
            n,
            k,
            1,
            vec![
                ExpansionTerm::new(int(m), 0, 0),
                ExpansionTerm::new(-rat(m * (m - 2) * (m - 2), 4), m - 3, 0),
            ],
            ExpansionTerm::order(m - 2, 0),
        ),
    })
}

pub fn expansion(kind: Problem, n: Dimension, k: u32, branch: u8) -> Result<AsymptoticModel> {
    match kind {
        Problem::Type1 if branch == 1 => expansion_type1(n, k),
        Problem::Type1 => Err(Error::Unsupported(
            "the second Type 1 branch diverges as eps -> 0".into(),
        )),
        Problem::Type2 => expansion_type2(n, k, branch),
    }
}

fn check_eps(eps: &Real) -> Result<()> {
    if !eps.is_positive() || *eps >= 1 {
        return Err(Error::Domain(format!(
            "eps must lie in (0, 1), got {}",
            eps.to_decimal(20)
        )));
    }
    Ok(())
}

/// Value of the model at `eps`; exact models use their closed form.
pub fn evaluate(m: &AsymptoticModel, eps: &Real) -> Result<Real> {
    check_eps(eps)?;
    if let Some(ExactReciprocal { numer }) = m.exact {
        return Ok(Real::int_like(numer, eps) / (1 - eps));
    }
    let mut acc = Real::zero_like(eps);
    for t in &m.terms {
        acc += t.eval(eps);
    }
    Ok(acc)
}

/// Pencil root of the given degree and branch.
pub fn pencil_branch(kind: Problem, dom: &Annulus, k: u32, branch: u8) -> Result<Real> {
    let roots = pencil_roots(kind, dom, k)?;
    roots
        .roots
        .into_iter()
        .find(|r| r.branch == branch)
        .map(|r| r.value)
        .ok_or_else(|| {
            Error::Domain(format!(
                "no real root on branch {branch} for {} n={} k={k}",
                kind.name(),
                dom.n().get()
            ))
        })
}

#[derive(Clone, Debug)]
pub struct OrderReport {
    pub model: AsymptoticModel,
    pub eps: [Real; 2],
    pub roots: [Real; 2],
    pub model_values: [Real; 2],
    /// `|root - model|`.
    pub errors: [Real; 2],
    /// Power of the declared remainder.
    pub expected_order: f64,
    /// Fitted power after dividing out the remainder's log factor; `None`
    /// when both errors sit at rounding level.
    pub fitted_order: Option<f64>,
    pub rounding_floor: Real,
}

impl OrderReport {
    /// For exact models, both errors at rounding level; otherwise the fitted
    /// order within `tol` of the declared one.
    pub fn passes(&self, tol: f64) -> bool {
        match self.fitted_order {
            None => self.errors.iter().all(|e| *e <= self.rounding_floor),
            Some(p) => (p - self.expected_order).abs() <= tol,
        }
    }
}

/// Compares pencil roots with the published model at `eps1` and `eps2 < eps1`
/// and fits the order of the difference.
pub fn verify_order(
    kind: Problem,
    n: Dimension,
    k: u32,
    branch: u8,
    eps1: &Real,
    eps2: &Real,
    p: Precision,
) -> Result<OrderReport> {
    verify_model(expansion(kind, n, k, branch)?, eps1, eps2, p)
}

/// As [`verify_order`] for an arbitrary model of a pencil branch.
pub fn verify_model(m: AsymptoticModel, eps1: &Real, eps2: &Real, p: Precision) -> Result<OrderReport> {
    check_eps(eps1)?;
    check_eps(eps2)?;
    if (eps1 / eps2) < 2 {
        return Err(Error::Domain("eps1 / eps2 must be at least 2".into()));
    }
    let kind = m.source.problem;
    let n = Dimension::new(m.source.n)?;
    let (k, branch) = (m.source.k, m.source.branch);
    let mut roots = Vec::new();
    let mut values = Vec::new();
    let mut errors = Vec::new();
    for eps in [eps1, eps2] {
        let dom = Annulus::new(n, eps, p)?;
        let root = pencil_branch(kind, &dom, k, branch)?;
        let value = evaluate(&m, dom.eps())?;
        errors.push((&root - &value).abs());
        roots.push(root);
        values.push(value);
    }
    let floor = p.tolerance(12) * roots[0].abs().max(Real::one(p));
    let fitted = if errors.iter().all(|e| *e <= floor) {
        None
    } else {
        let q = m.remainder.log_power as i64;
        let scaled: Vec<Real> = errors
            .iter()
            .zip([eps1, eps2])
            .map(|(e, eps)| e / eps.ln().abs().powi(q))
            .collect();
        let ratio = eps1 / eps2;
        Some(((&scaled[0] / &scaled[1]).ln() / ratio.ln()).to_f64())
    };
    let expected = *m.remainder.power.numer() as f64 / *m.remainder.power.denom() as f64;
    let pair = |v: Vec<Real>| -> [Real; 2] { [v[0].clone(), v[1].clone()] };
    Ok(OrderReport {
        model: m,
        eps: [eps1.clone(), eps2.clone()],
        roots: pair(roots),
        model_values: pair(values),
        errors: pair(errors),
        expected_order: expected,
        fitted_order: fitted,
        rounding_floor: floor,
    })
}

/// `(root - leading) / shape` where `shape` is the correction term's
/// `eps^p (log eps)^q`: the first-order coefficient seen by the pencil.
pub fn recover_coefficient(kind: Problem, n: Dimension, k: u32, branch: u8, eps: &Real, p: Precision) -> Result<Real> {
    let m = expansion(kind, n, k, branch)?;
    let dom = Annulus::new(n, eps, p)?;
    let root = pencil_branch(kind, &dom, k, branch)?;
    let (lead, corr) = match m.correction() {
        Some(c) if m.leading().power == int(0) => (m.leading().eval(dom.eps()), c),
        _ => (Real::zero_like(dom.eps()), m.leading()),
    };
    Ok((root - lead) / corr.shape(dom.eps()))
}
