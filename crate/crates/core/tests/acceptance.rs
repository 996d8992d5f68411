//! Acceptance checks, one line per criterion. Exits non-zero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use steklov_core::annulus_pencil::{eigenpair, extract_pencil, pencil_roots, scaled_determinant, Annulus, Problem};
use steklov_core::asymptotics::{expansion, recover_coefficient, verify_order};
use steklov_core::cylinder::{
    boundary_residual, existence_scan, family_values, mode_entries, weyl_gap_report, Cylinder,
};
use steklov_core::geometry::{cross_section_volume, CrossSection, CrossSectionEntry, Dimension};
use steklov_core::ode_oracle::{brackets_around, oracle_eigenvalue, ShootingConfig};
use steklov_core::scalar::rel_diff;
use steklov_core::shape_opt::{compare_annulus_vs_ball, expected_verdict};
use steklov_core::type3_bound::{ball_rho1, isoperimetric_area, theorem5_bound, theorem5_weak_bound, DomainMeasures};
use steklov_core::{Precision, Real, Result};

const KINDS: [Problem; 2] = [Problem::Type1, Problem::Type2];

fn p() -> Precision {
    Precision::DEFAULT
}

fn real(s: &str) -> Real {
    Real::parse(s, p()).expect("literal")
}

fn dim(n: u32) -> Dimension {
    Dimension::new(n).expect("n >= 2")
}

fn annulus(n: u32, eps: &str) -> Result<Annulus> {
    Annulus::new(dim(n), &real(eps), p())
}

fn sci(x: &Real) -> String {
    format!("{:.2e}", x.to_f64())
}

/// Outcome of one criterion: pass flag and a summary of what was measured.
struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Outcome {
            pass,
            detail: detail.into(),
        }
    }
}

fn exact_spectrum() -> Result<Outcome> {
    let mut worst = Real::zero(p());
    for eps in ["0.1", "0.5", "0.9"] {
        let dom = annulus(3, eps)?;
        let roots = pencil_roots(Problem::Type2, &dom, 0)?.roots;
        let gap = 1 - real(eps);
        for (r, numer) in roots.iter().zip([2, 6]) {
            worst = worst.max(rel_diff(&r.value, &(Real::int(numer, p()) / &gap)));
        }
    }
    Ok(Outcome::new(
        worst <= real("1e-30"),
        format!("max rel err {}", sci(&worst)),
    ))
}

fn type1_coefficients() -> Result<Outcome> {
    let mut pass = true;
    let mut parts = Vec::new();
    for (n, k) in [(3, 1), (4, 1), (5, 1), (2, 2)] {
        let r = verify_order(Problem::Type1, dim(n), k, 1, &real("1e-2"), &real("1e-3"), p())?;
        let fitted = r.fitted_order.unwrap_or(f64::NAN);
        let order_ok = r.passes(0.5);
        let model = expansion(Problem::Type1, dim(n), k, 1)?;
        let published = model.correction().expect("two terms").coeff;
        let want = Real::from_rational(&published, p());
        let got = recover_coefficient(Problem::Type1, dim(n), k, 1, &real("1e-3"), p())?;
        let coeff_ok = rel_diff(&got, &want) <= real("5e-2");
        pass &= order_ok && coeff_ok;
        parts.push(format!(
            "({n},{k}) p^={fitted:.2}/{} {} c={:.4}/{published} {}",
            r.expected_order,
            if order_ok { "ok" } else { "BAD" },
            got.to_f64(),
            if coeff_ok { "ok" } else { "BAD" },
        ));
    }
    let r = verify_order(Problem::Type1, dim(2), 1, 1, &real("1e-3"), &real("1e-4"), p())?;
    let ok = r.passes(1.0);
    pass &= ok;
    parts.push(format!(
        "(2,1) log-corrected p^={:.2}/{} {}",
        r.fitted_order.unwrap_or(f64::NAN),
        r.expected_order,
        if ok { "ok" } else { "BAD" }
    ));
    Ok(Outcome::new(pass, parts.join("; ")))
}

fn type2_coefficients() -> Result<Outcome> {
    let mut pass = true;
    let mut parts = Vec::new();
    for (n, k) in [(5, 0), (6, 0), (5, 1)] {
        let r = verify_order(Problem::Type2, dim(n), k, 1, &real("1e-2"), &real("1e-3"), p())?;
        let m = n as i64 + 2 * k as i64;
        let want = Real::ratio(-m * (m - 2) * (m - 2), 4, p());
        let got = recover_coefficient(Problem::Type2, dim(n), k, 1, &real("1e-3"), p())?;
        let ok = r.passes(0.5) && rel_diff(&got, &want) <= real("5e-2");
        pass &= ok;
        parts.push(format!(
            "({n},{k}) p^={:.2} c={:.3} {}",
            r.fitted_order.unwrap_or(f64::NAN),
            got.to_f64(),
            if ok { "ok" } else { "BAD" }
        ));
    }
    let e = real("1e-3");
    for (n, k) in [(2, 1), (4, 0)] {
        let dom = Annulus::new(dim(n), &e, p())?;
        let v = pencil_roots(Problem::Type2, &dom, k)?.roots[0].value.clone();
        let gap = (&v - (4 - &e * 4)).abs();
        let ok = gap <= real("1e-2");
        pass &= ok;
        parts.push(format!(
            "({n},{k}) |v-(4-4e)|={} {}",
            sci(&gap),
            if ok { "ok" } else { "BAD" }
        ));
    }
    Ok(Outcome::new(pass, parts.join("; ")))
}

fn oracle_equivalence() -> Result<Outcome> {
    let cfg = ShootingConfig::new(p());
    let mut worst = Real::zero(p());
    let mut count = 0;
    for kind in KINDS {
        for n in 2..=5 {
            for k in 0..=3 {
                for eps in ["0.2", "0.5", "0.8"] {
                    let dom = annulus(n, eps)?;
                    let roots: Vec<Real> = pencil_roots(kind, &dom, k)?
                        .roots
                        .into_iter()
                        .map(|r| r.value)
                        .collect();
                    for ((lo, hi), want) in brackets_around(&roots).iter().zip(&roots) {
                        let got = oracle_eigenvalue(kind, &dom, k, lo, hi, &cfg)?;
                        worst = worst.max((got - want).abs());
                        count += 1;
                    }
                }
            }
        }
    }
    Ok(Outcome::new(
        worst <= real("1e-20"),
        format!("{count} roots, max |oracle - pencil| {}", sci(&worst)),
    ))
}

fn cylinder_closed_forms() -> Result<Outcome> {
    let mut pass = true;
    let l = real("0.7");
    let zero_mode = CrossSectionEntry {
        value: Real::zero(p()),
        multiplicity: 1,
    };
    let t1 = mode_entries(Problem::Type1, &l, &zero_mode, 0);
    pass &= t1[0].value.is_zero() && t1[1].value == Real::int(3, p()) / l.powi(3);
    let t2 = mode_entries(Problem::Type2, &l, &zero_mode, 0);
    pass &= t2[0].value == l.recip() && t2[1].value == Real::int(3, p()) / &l;
    let k0 = pass;

    let mut worst = Real::zero(p());
    let one = Real::one(p());
    for kind in KINDS {
        let (o, e) = family_values(kind, &one, &real("10"));
        worst = worst.max((o - 2).abs()).max((e - 2).abs());
    }
    pass &= worst <= real("1e-4");

    let dom = Cylinder::new(&one, CrossSection::Sphere { m: 2 }, &one, p())?;
    let mut weyl = true;
    for kind in KINDS {
        weyl &= weyl_gap_report(kind, &dom, 6)?.strictly_decreasing;
    }
    pass &= weyl;
    Ok(Outcome::new(
        pass,
        format!(
            "k=0 exact {k0}; L=10 max gap {}; Weyl gaps decreasing {weyl}",
            sci(&worst)
        ),
    ))
}

fn eigenfunction_residuals() -> Result<Outcome> {
    let mut worst_annulus = Real::zero(p());
    for kind in KINDS {
        for n in 2..=6 {
            for k in 0..=4 {
                for eps in ["0.1", "0.5", "0.9"] {
                    let dom = annulus(n, eps)?;
                    for r in pencil_roots(kind, &dom, k)?.roots {
                        let pair = eigenpair(kind, &dom, k, &r.value)?;
                        worst_annulus = worst_annulus.max(pair.residual);
                    }
                }
            }
        }
    }
    let mut worst_cylinder = Real::zero(p());
    for kind in KINDS {
        for l in ["0.5", "1", "5"] {
            let lr = real(l);
            for k in 0..=6i64 {
                let mode = CrossSectionEntry {
                    value: Real::int(k * (k + 1), p()),
                    multiplicity: (2 * k + 1) as u64,
                };
                for e in mode_entries(kind, &lr, &mode, k as u32) {
                    worst_cylinder = worst_cylinder.max(boundary_residual(kind, &lr, &e));
                }
            }
        }
    }
    let tol = real("1e-35");
    Ok(Outcome::new(
        worst_annulus <= tol && worst_cylinder <= tol,
        format!(
            "annulus max {}, cylinder max {}",
            sci(&worst_annulus),
            sci(&worst_cylinder)
        ),
    ))
}

fn shape_signs() -> Result<Outcome> {
    let mut checked = 0;
    let mut wrong = Vec::new();
    for eps in ["0.01", "0.05"] {
        for kind in KINDS {
            let ns = if kind == Problem::Type1 { 2..=8 } else { 4..=8 };
            for n in ns {
                for k in 0..=4 {
                    let Some(want) = expected_verdict(kind, dim(n), k) else {
                        continue;
                    };
                    let c = compare_annulus_vs_ball(kind, dim(n), k, &real(eps), p(), false)?;
                    checked += 1;
                    if c.verdict != want {
                        wrong.push(format!("{} n={n} k={k} eps={eps}", kind.name()));
                    }
                }
            }
        }
    }
    Ok(Outcome::new(
        wrong.is_empty(),
        format!(
            "{checked} comparisons, mismatches: {}",
            if wrong.is_empty() {
                "none".into()
            } else {
                wrong.join(", ")
            }
        ),
    ))
}

fn theorem5() -> Result<Outcome> {
    let mut worst = Real::zero(p());
    for n in 2..=8 {
        for r in [Real::ratio(1, 2, p()), Real::one(p()), Real::int(2, p())] {
            for tau in [Real::one(p()), Real::int(5, p())] {
                let m = DomainMeasures::ball(dim(n), &r, &tau, p())?;
                worst = worst.max(rel_diff(&theorem5_bound(&m).value, &ball_rho1(&r, &tau)?));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_501);
    let mut violations = 0;
    let mut samples = 0;
    for n in 2..=8 {
        for _ in 0..100 {
            let v = Real::from_f64(rng.gen_range(0.1..10.0), p());
            let stretch = Real::from_f64(rng.gen_range(0.0..3.0), p());
            let a = isoperimetric_area(dim(n), &v, p()) * (1 + stretch);
            let tau = Real::from_f64(rng.gen_range(0.1..10.0), p());
            let m = DomainMeasures::new(dim(n), &v, &a, &tau, true, p())?;
            samples += 1;
            if theorem5_weak_bound(&m).value < theorem5_bound(&m).value {
                violations += 1;
            }
        }
    }
    Ok(Outcome::new(
        worst <= real("1e-30") && violations == 0,
        format!(
            "ball max rel err {}; weak < sharp in {violations}/{samples}",
            sci(&worst)
        ),
    ))
}

fn existence() -> Result<Outcome> {
    let grid: Vec<Real> = ["1", "0.5", "0.1", "0.05", "0.01"].iter().map(|s| real(s)).collect();
    let one = Real::one(p());
    let area = cross_section_volume(&CrossSection::Sphere { m: 2 }, &one, p());
    let t1 = existence_scan(Problem::Type1, &one, &grid, area.as_ref())?;
    let last = t1.rows.last().expect("grid not empty").value.clone();
    let areas_constant = t1.rows.windows(2).all(|w| w[0].boundary_area == w[1].boundary_area);
    let small = last < real("1e-3");
    let short = real("1e-3");
    let t2 = existence_scan(Problem::Type2, &one, &[one.clone(), short], None)?;
    let first = t2.rows[1].value.clone();
    let big = rel_diff(&first, &Real::int(1000, p())) < p().tolerance(5) || first > 1000;
    Ok(Outcome::new(
        t1.monotone && areas_constant && small && big,
        format!(
            "Type 1 monotone {}, area constant {areas_constant}, value at L=0.01 {} (< 1e-3: {small}); Type 2 1/L at L=1e-3 = {}",
            t1.monotone,
            last.to_decimal(8),
            first.to_decimal(8)
        ),
    ))
}

fn pencil_structure() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut worst = Real::zero(p());
    let mut samples = 0;
    for kind in KINDS {
        for n in 2..=6 {
            for k in 0..=4 {
                for eps in ["0.1", "0.5", "0.9"] {
                    let dom = annulus(n, eps)?;
                    let q = extract_pencil(kind, &dom, k)?;
                    for _ in 0..5 {
                        let lam = Real::from_f64(rng.gen_range(-10.0..10.0), p());
                        let det = scaled_determinant(kind, &dom, k, &lam)?;
                        let rel = (det - q.eval(&lam)).abs() / q.max_term(&lam);
                        worst = worst.max(rel);
                        samples += 1;
                    }
                }
            }
        }
    }
    Ok(Outcome::new(
        worst <= real("1e-38"),
        format!("{samples} samples, max rel gap {}", sci(&worst)),
    ))
}

type Check = fn() -> Result<Outcome>;

fn main() -> ExitCode {
    let criteria: [(u32, &str, Check, u64); 10] = [
        (1, "exact spectrum n=3 k=0", exact_spectrum, 1),
        (2, "Type 1 asymptotic coefficients", type1_coefficients, 10),
        (3, "Type 2 asymptotic coefficients", type2_coefficients, 10),
        (4, "oracle equivalence", oracle_equivalence, 60),
        (5, "cylinder closed forms and limits", cylinder_closed_forms, 5),
        (6, "eigenfunction residuals", eigenfunction_residuals, 10),
        (7, "shape-optimization signs", shape_signs, 30),
        (8, "isoperimetric-type bound", theorem5, 5),
        (9, "existence demonstrations", existence, 1),
        (10, "pencil structure", pencil_structure, 10),
    ];
    let mut failures = 0;
    for (id, name, check, budget) in criteria {
        let start = Instant::now();
        let outcome = check().unwrap_or_else(|e| Outcome::new(false, format!("error: {e}")));
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs(budget);
        let pass = outcome.pass && in_time;
        if !pass {
            failures += 1;
        }
        println!(
            "[{}] {id:>2} {name}: {} ({:.2}s of {budget}s)",
            if pass { "PASS" } else { "FAIL" },
            outcome.detail,
            elapsed.as_secs_f64()
        );
    }
    println!("{} of 10 criteria passed", 10 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
