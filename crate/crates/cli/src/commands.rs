use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use steklov_core::annulus_pencil::{
    annulus_spectrum, ball_spectrum, ball_value, pencil_roots, Annulus, Problem, Spectrum,
};
use steklov_core::asymptotics::{expansion, expansion_type1_generic, pencil_branch, verify_model, AsymptoticModel};
use steklov_core::cylinder::{cylinder_spectrum, family_limit, limit_gaps, Cylinder};
use steklov_core::geometry::{CrossSection, Dimension};
use steklov_core::ode_oracle::{brackets_around, oracle_eigenvalue, ShootingConfig};
use steklov_core::scalar::rel_diff;
use steklov_core::shape_opt::{
    annulus_measures, ball_measures, compare_annulus_vs_ball, expected_verdict, normalized_eigenvalue, Normalization,
};
use steklov_core::type3_bound::{
    ball_rho1, isoperimetric_area, p1_bound, theorem5_bound, theorem5_weak_bound, DomainMeasures,
};
use steklov_core::Real;

use crate::output::{render_report, render_spectrum, EntryOut, Report, SpectrumDoc};
use crate::{
    problems, AsymptoticsArgs, BoundsArgs, CrossSectionArg, Failure, InequalitiesArgs, LimitsArgs, ModelArg,
    OracleArgs, Output, Run, ScanArgs, Shape, SpectrumArgs, Type3Args,
};

fn dim(n: u32) -> Result<Dimension, Failure> {
    Ok(Dimension::new(n)?)
}

fn required<'a, T>(v: &'a Option<T>, flag: &str, what: &str) -> Result<&'a T, Failure> {
    v.as_ref()
        .ok_or_else(|| Failure::Usage(format!("{what} needs --{flag}")))
}

fn sci(x: &Real) -> String {
    format!("{:.3e}", x.to_f64())
}

fn short(x: &Real) -> String {
    x.to_decimal(20)
}

fn report_output(ctx: &Run, r: Report) -> Output {
    Output {
        passed: r.passed,
        text: render_report(&r, ctx.format),
    }
}

fn pencil_entries(ctx: &Run, s: &Spectrum) -> Vec<EntryOut> {
    if s.tail_warning {
        eprintln!("warning: higher degrees may contribute; raise --kmax to be sure");
    }
    if !s.complex_degrees.is_empty() {
        eprintln!("warning: complex pencil roots at degrees {:?}", s.complex_degrees);
    }
    s.entries
        .iter()
        .map(|e| EntryOut {
            value: ctx.full(&e.value),
            k: e.k,
            branch_or_family: format!("branch_{}", e.branch),
            multiplicity: e.multiplicity,
            provenance: e.provenance.name(),
        })
        .collect()
}

pub fn spectrum(ctx: &Run, a: &SpectrumArgs) -> Result<Output, Failure> {
    let kind = a.problem.get();
    let p = ctx.precision;
    let count = a.count as usize;
    let (domain, entries) = match a.shape {
        Shape::Annulus => {
            let n = *required(&a.dim, "dim", "an annulus")?;
            let eps = required(&a.eps, "eps", "an annulus")?;
            let dom = Annulus::new(dim(n)?, &ctx.real(eps)?, p)?;
            let s = annulus_spectrum(kind, &dom, a.kmax, count, false)?;
            (json!({"shape": "annulus", "n": n, "eps": eps}), pencil_entries(ctx, &s))
        }
        Shape::Ball => {
            let n = *required(&a.dim, "dim", "a ball")?;
            let s = ball_spectrum(kind, dim(n)?, &ctx.real(&a.radius)?, a.kmax, count)?;
            (
                json!({"shape": "ball", "n": n, "radius": a.radius}),
                pencil_entries(ctx, &s),
            )
        }
        Shape::Cylinder => {
            let l = required(&a.half_length, "half-length", "a cylinder")?;
            let cs = required(&a.cross_section, "cross-section", "a cylinder")?;
            let (section, radius) = match cs {
                CrossSectionArg::Sphere { m, radius } => (CrossSection::Sphere { m: *m }, radius),
                CrossSectionArg::Torus { m, radius } => (CrossSection::Torus { m: *m }, radius),
            };
            let label = section.label();
            let dom = Cylinder::new(&ctx.real(l)?, section, &ctx.real(radius)?, p)?;
            let s = cylinder_spectrum(kind, &dom, count)?;
            if s.tail_warning {
                eprintln!("warning: cross-section modes ran out before the list was complete");
            }
            let entries = s
                .entries
                .iter()
                .map(|e| EntryOut {
                    value: ctx.full(&e.value),
                    k: e.k,
                    branch_or_family: e.family.name().to_string(),
                    multiplicity: e.multiplicity,
                    provenance: "closed_form",
                })
                .collect();
            (
                json!({"shape": "cylinder", "half_length": l, "cross_section": label, "radius": radius}),
                entries,
            )
        }
    };
    let doc = SpectrumDoc {
        problem: kind.name(),
        domain,
        precision_digits: p.digits(),
        entries,
    };
    Ok(Output {
        text: render_spectrum(&doc, ctx.format),
        passed: true,
    })
}

/// `(root - leading) / shape` of the model's first correction.
fn recovered_coefficient(m: &AsymptoticModel, root: &Real, eps: &Real) -> Real {
    let zero_power = *m.leading().power.numer() == 0;
    match m.correction() {
        Some(c) if zero_power => (root - m.leading().eval(eps)) / c.shape(eps),
        _ => root / m.leading().shape(eps),
    }
}

const TYPE1_GRID: [(u32, u32); 4] = [(3, 1), (4, 1), (5, 1), (2, 2)];
const TYPE2_GRID: [(u32, u32); 3] = [(5, 0), (6, 0), (5, 1)];

pub fn verify_asymptotics(ctx: &Run, a: &AsymptoticsArgs) -> Result<Output, Failure> {
    let p = ctx.precision;
    let (e1, e2) = (ctx.real(&a.eps1)?, ctx.real(&a.eps2)?);
    let coeff_tol = ctx.real("5e-2")?;
    let mut r = Report::new(
        "fitted remainder orders of the small-hole expansions",
        &[
            "problem",
            "n",
            "k",
            "branch",
            "expected",
            "fitted",
            "coefficient",
            "model",
            "ok",
        ],
    );
    r.note(format!("eps = {}, {}; order tolerance {}", a.eps1, a.eps2, a.tol));
    for kind in problems(a.problem) {
        let cases: Vec<(u32, u32)> = match (a.dim, a.k) {
            (Some(n), Some(k)) => vec![(n, k)],
            _ if kind == Problem::Type1 => TYPE1_GRID.to_vec(),
            _ => TYPE2_GRID.to_vec(),
        };
        for (n, k) in cases {
            let model = match (kind, a.model) {
                (Problem::Type1, ModelArg::Generic) => expansion_type1_generic(dim(n)?, k)?,
                _ => expansion(kind, dim(n)?, k, a.branch)?,
            };
            let report = verify_model(model, &e1, &e2, p)?;
            let order_ok = report.passes(a.tol);
            let (coeff, want, coeff_ok) = match report.model.correction() {
                Some(c) => {
                    let got = recovered_coefficient(&report.model, &report.roots[1], &report.eps[1]);
                    let want = Real::from_rational(&c.coeff, p);
                    let ok = rel_diff(&got, &want) <= coeff_tol;
                    (got.to_decimal(8), c.coeff.to_string(), ok)
                }
                None => ("-".into(), "-".into(), true),
            };
            let ok = order_ok && coeff_ok;
            r.passed &= ok;
            r.row(vec![
                kind.name().into(),
                n.to_string(),
                k.to_string(),
                a.branch.to_string(),
                format!("{}", report.expected_order),
                report
                    .fitted_order
                    .map_or_else(|| "exact".into(), |f| format!("{f:.3}")),
                coeff,
                want,
                ok.to_string(),
            ]);
        }
    }
    Ok(report_output(ctx, r))
}

pub fn verify_oracle(ctx: &Run, a: &OracleArgs) -> Result<Output, Failure> {
    let p = ctx.precision;
    let tol = ctx.real(&a.tol)?;
    let mut cfg = ShootingConfig::new(p);
    cfg.steps = a.steps;
    let mut r = Report::new(
        "pencil roots against the shooting solver",
        &[
            "problem",
            "n",
            "k",
            "eps",
            "branch",
            "pencil",
            "oracle",
            "difference",
            "ok",
        ],
    );
    r.note(format!("tolerance {}, {} Taylor steps", a.tol, a.steps));
    for kind in problems(a.problem) {
        for &n in &a.dim {
            for k in 0..=a.kmax {
                for eps in &a.eps {
                    let dom = Annulus::new(dim(n)?, &ctx.real(eps)?, p)?;
                    let roots = pencil_roots(kind, &dom, k)?.roots;
                    let values: Vec<Real> = roots.iter().map(|x| x.value.clone()).collect();
                    let brackets = brackets_around(&values);
                    let mut order: Vec<usize> = (0..values.len()).collect();
                    order.sort_by(|&i, &j| values[i].partial_cmp(&values[j]).expect("finite roots"));
                    for (slot, &i) in order.iter().enumerate() {
                        let (lo, hi) = &brackets[slot];
                        let got = oracle_eigenvalue(kind, &dom, k, lo, hi, &cfg)?;
                        let diff = (&got - &values[i]).abs();
                        let ok = diff <= tol;
                        r.passed &= ok;
                        r.row(vec![
                            kind.name().into(),
                            n.to_string(),
                            k.to_string(),
                            eps.clone(),
                            roots[i].branch.to_string(),
                            short(&values[i]),
                            short(&got),
                            sci(&diff),
                            ok.to_string(),
                        ]);
                    }
                }
            }
        }
    }
    Ok(report_output(ctx, r))
}

pub fn verify_limits(ctx: &Run, a: &LimitsArgs) -> Result<Output, Failure> {
    if !a.cylinder {
        return Err(Failure::Usage("only cylinder limits are available".into()));
    }
    let c = ctx.real(&a.c)?;
    if !c.is_positive() {
        return Err(Failure::Domain("c must be positive".into()));
    }
    let mut grid = Vec::new();
    for l in &a.half_lengths {
        let v = ctx.real(l)?;
        if !v.is_positive() {
            return Err(Failure::Domain(format!("half-length {l} must be positive")));
        }
        grid.push(v);
    }
    grid.sort_by(|x, y| x.partial_cmp(y).expect("finite"));
    grid.dedup();
    let mut r = Report::new(
        "cylinder families against their long-cylinder limits",
        &["problem", "L", "limit", "gap_odd", "gap_even", "ok"],
    );
    r.note(format!("c = {}", a.c));
    for kind in problems(a.problem) {
        let limit = family_limit(kind, &c);
        let rows = limit_gaps(kind, &c, &grid);
        for (i, row) in rows.iter().enumerate() {
            let ok = i == 0 || (row.gap_odd < rows[i - 1].gap_odd && row.gap_even < rows[i - 1].gap_even);
            r.passed &= ok;
            r.row(vec![
                kind.name().into(),
                short(&row.half_length),
                short(&limit),
                sci(&row.gap_odd),
                sci(&row.gap_even),
                ok.to_string(),
            ]);
        }
    }
    Ok(report_output(ctx, r))
}

pub fn verify_inequalities(ctx: &Run, a: &InequalitiesArgs) -> Result<Output, Failure> {
    let p = ctx.precision;
    let eps = ctx.real(&a.eps)?;
    let dims: Vec<u32> = match a.dim {
        Some(n) => vec![n],
        None => (2..=8).collect(),
    };
    let mut r = Report::new(
        "normalized first-branch eigenvalue of B_1 \\ B_eps against the unit ball",
        &[
            "problem", "n", "k", "annulus", "ball", "margin", "verdict", "expected", "ok",
        ],
    );
    r.note(format!("eps = {}, boundary-area normalization", a.eps));
    for kind in problems(a.problem) {
        for &n in &dims {
            for k in 0..=a.kmax {
                let Some(want) = expected_verdict(kind, dim(n)?, k) else {
                    continue;
                };
                let c = compare_annulus_vs_ball(kind, dim(n)?, k, &eps, p, a.allow_outside)?;
                let ok = c.verdict == want;
                r.passed &= ok;
                r.row(vec![
                    kind.name().into(),
                    n.to_string(),
                    k.to_string(),
                    short(&c.annulus.value),
                    short(&c.ball.value),
                    sci(&c.margin),
                    c.label(),
                    want.name().into(),
                    ok.to_string(),
                ]);
            }
        }
    }
    if r.rows.is_empty() {
        r.note("no case with an established sign in the requested range");
    }
    Ok(report_output(ctx, r))
}

pub fn verify_bounds(ctx: &Run, a: &BoundsArgs) -> Result<Output, Failure> {
    let p = ctx.precision;
    let tol = p.tolerance(20);
    let mut r = Report::new(
        "Type 3 bound: equality on balls, weak bound above the sharp one",
        &["check", "n", "measured", "ok"],
    );
    r.note(format!("ball tolerance {}, seed {}", sci(&tol), ctx.seed));
    let radii = [Real::ratio(1, 2, p), Real::one(p), Real::int(2, p)];
    let taus = [Real::one(p), Real::int(5, p)];
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    for n in 2..=a.max_dim {
        let d = dim(n)?;
        let mut worst = Real::zero(p);
        for rad in &radii {
            for tau in &taus {
                let m = DomainMeasures::ball(d, rad, tau, p)?;
                worst = worst.max(rel_diff(&theorem5_bound(&m).value, &ball_rho1(rad, tau)?));
            }
        }
        let ok = worst <= tol;
        r.passed &= ok;
        r.row(vec!["ball_equality".into(), n.to_string(), sci(&worst), ok.to_string()]);

        let mut violations = 0;
        for _ in 0..a.samples {
            let v = Real::from_f64(rng.gen_range(0.1..10.0), p);
            let stretch = Real::from_f64(rng.gen_range(0.0..3.0), p);
            let area = isoperimetric_area(d, &v, p) * (1 + stretch);
            let tau = Real::from_f64(rng.gen_range(0.1..10.0), p);
            let m = DomainMeasures::new(d, &v, &area, &tau, true, p)?;
            if theorem5_weak_bound(&m).value < theorem5_bound(&m).value {
                violations += 1;
            }
        }
        let ok = violations == 0;
        r.passed &= ok;
        r.row(vec![
            "weak_at_least_sharp".into(),
            n.to_string(),
            format!("{violations}/{} violations", a.samples),
            ok.to_string(),
        ]);
    }
    Ok(report_output(ctx, r))
}

pub fn scan_normalized(ctx: &Run, a: &ScanArgs) -> Result<Output, Failure> {
    let p = ctx.precision;
    let kind = a.problem.get();
    let n = dim(a.dim)?;
    let norm = match a.alpha {
        None => Normalization::BoundaryAreaPow,
        Some(alpha) => Normalization::Mixed(alpha),
    };
    let start = ctx.real(&a.eps_grid.start)?;
    let end = ctx.real(&a.eps_grid.end)?;
    let steps = a.eps_grid.steps;
    let one = Real::one(p);
    let ball = normalized_eigenvalue(
        kind,
        &ball_value(kind, n, a.k, &one),
        &ball_measures(n, &one, p)?,
        n,
        norm,
    )?;
    let mut r = Report::new(
        format!(
            "{} n={} k={} branch={} normalization={}",
            kind.name(),
            a.dim,
            a.k,
            a.branch,
            norm.label()
        ),
        &["eps", "normalized"],
    );
    r.note(format!("ball_reference {}", ctx.full(&ball.value)));
    for i in 0..steps {
        let eps = if steps == 1 {
            start.clone()
        } else {
            &start + (&end - &start) * i as i64 / (steps as i64 - 1)
        };
        let dom = Annulus::new(n, &eps, p)?;
        let root = pencil_branch(kind, &dom, a.k, a.branch)?;
        let v = normalized_eigenvalue(kind, &root, &annulus_measures(&dom), n, norm)?;
        r.row(vec![short(&eps), ctx.full(&v.value)]);
    }
    Ok(report_output(ctx, r))
}

pub fn bound_type3(ctx: &Run, a: &Type3Args) -> Result<Output, Failure> {
    let p = ctx.precision;
    let m = DomainMeasures::new(
        dim(a.dim)?,
        &ctx.real(&a.volume)?,
        &ctx.real(&a.area)?,
        &ctx.real(&a.tau)?,
        a.assert_hypotheses,
        p,
    )?;
    let sharp = theorem5_bound(&m);
    let weak = theorem5_weak_bound(&m);
    let mut r = Report::new(
        format!("first Type 3 eigenvalue, n={} tau={}", a.dim, a.tau),
        &["quantity", "value"],
    );
    r.note(sharp.label());
    r.row(vec!["sharp".into(), ctx.full(&sharp.value)]);
    r.row(vec!["weak".into(), ctx.full(&weak.value)]);
    r.row(vec!["p1_bound".into(), ctx.full(&p1_bound(&m))]);
    Ok(report_output(ctx, r))
}
