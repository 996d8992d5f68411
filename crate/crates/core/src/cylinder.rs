//! Closed-form spectra on the cylinder `[-L, L] x M`.
//!
//! Separating `u = T(s) beta(x)` with `Delta_M beta = -c^2 beta` leaves a
//! constant-coefficient fourth-order equation for `T`. Constant modes `c = 0`
//! give polynomial eigenfunctions; every `c > 0` gives one odd and one even
//! eigenfunction built from `e^{+-cs}` and `s e^{+-cs}`.

use serde::{Deserialize, Serialize};

use crate::annulus_pencil::Problem;
use crate::error::{Error, Result};
use crate::geometry::{cross_section_spectrum, CrossSection, CrossSectionEntry};
use crate::scalar::{Precision, Real};

#[derive(Clone, Debug)]
pub struct Cylinder {
    half_length: Real,
    cross_section: CrossSection,
    radius: Real,
    precision: Precision,
}

impl Cylinder {
    pub fn new(half_length: &Real, cross_section: CrossSection, radius: &Real, p: Precision) -> Result<Self> {
        if !half_length.is_positive() {
            return Err(Error::Domain("half-length must be positive".into()));
        }
        // validates the cross-section
        cross_section_spectrum(&cross_section, radius, 1, p)?;
        Ok(Cylinder {
            half_length: half_length.with_bits(p.bits()),
            cross_section,
            radius: radius.with_bits(p.bits()),
            precision: p,
        })
    }

    pub fn half_length(&self) -> &Real {
        &self.half_length
    }

    pub fn cross_section(&self) -> &CrossSection {
        &self.cross_section
    }

    pub fn radius(&self) -> &Real {
        &self.radius
    }

    pub fn precision(&self) -> Precision {
        self.precision
    }

    fn modes(&self, count: usize) -> Result<Vec<CrossSectionEntry>> {
        Ok(cross_section_spectrum(&self.cross_section, &self.radius, count, self.precision)?.entries)
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CylinderFamily {
    /// Lower polynomial mode: `1` (Type 1) or `s^2 - L^2` (Type 2).
    Poly1,
    /// Upper polynomial mode: `s^3 - 3L^2 s` (Type 1) or `s^3 - L^2 s` (Type 2).
    Poly2,
    EvenK,
    OddK,
}

impl CylinderFamily {
    pub fn name(self) -> &'static str {
        match self {
            CylinderFamily::Poly1 => "poly1",
            CylinderFamily::Poly2 => "poly2",
            CylinderFamily::EvenK => "even_k",
            CylinderFamily::OddK => "odd_k",
        }
    }
}

/// Axial factor of an eigenfunction.
#[derive(Clone, Debug)]
pub enum Axial {
    /// `sum_j p_j s^j`.
    Poly([Real; 4]),
    /// `d1 e^{cs} + d2 s e^{cs} + d3 e^{-cs} + d4 s e^{-cs}`.
    Exp { c: Real, d: [Real; 4] },
}

impl Axial {
    /// Values of the basis pieces' `j`-th derivatives at `s`, each already
    /// multiplied by its coefficient.
    fn pieces(&self, s: &Real, j: usize) -> [Real; 4] {
        match self {
            Axial::Poly(p) => std::array::from_fn(|i| {
                if i < j {
                    return Real::zero_like(s);
                }
                let mut f = 1i64;
                for l in 0..j {
                    f *= (i - l) as i64;
                }
                &p[i] * s.powi((i - j) as i64) * f
            }),
            Axial::Exp { c, d } => {
                let ep = (c * s).exp();
                let em = (-(c * s)).exp();
                // d^j/ds^j [s e^{cs}] = (c^j s + j c^{j-1}) e^{cs}
                let cj = c.powi(j as i64);
                let mc = -c;
                let mcj = mc.powi(j as i64);
                let lower = |base: &Real| {
                    if j == 0 {
                        Real::zero_like(s)
                    } else {
                        base.powi(j as i64 - 1) * j as i64
                    }
                };
                [
                    &d[0] * &cj * &ep,
                    &d[1] * (&cj * s + lower(c)) * &ep,
                    &d[2] * &mcj * &em,
                    &d[3] * (&mcj * s + lower(&mc)) * &em,
                ]
            }
        }
    }

    /// `j`-th derivative at `s`, `j <= 3`.
    pub fn derivative(&self, s: &Real, j: usize) -> Real {
        let mut acc = Real::zero_like(s);
        for x in self.pieces(s, j) {
            acc += x;
        }
        acc
    }

    pub fn value(&self, s: &Real) -> Real {
        self.derivative(s, 0)
    }
}

#[derive(Clone, Debug)]
pub struct CylinderEntry {
    pub value: Real,
    /// Index of the cross-section eigenvalue.
    pub k: u32,
    pub family: CylinderFamily,
    pub multiplicity: u64,
    /// `c_k = sqrt(lambda_k)`.
    pub c: Real,
    pub axial: Axial,
}

#[derive(Clone, Debug, Default)]
pub struct CylinderSpectrum {
    /// Ascending, each eigenvalue repeated by multiplicity.
    pub entries: Vec<CylinderEntry>,
    /// Cross-section modes ran out before the enumeration could stop.
    pub tail_warning: bool,
}

impl CylinderSpectrum {
    /// One entry per `(k, family)`.
    pub fn distinct(&self) -> Vec<&CylinderEntry> {
        let mut out: Vec<&CylinderEntry> = Vec::new();
        for e in &self.entries {
            if out.last().is_none_or(|l| l.k != e.k || l.family != e.family) {
                out.push(e);
            }
        }
        out
    }
}

/// The two non-polynomial eigenvalues of a mode `c > 0` as (odd, even).
pub fn family_values(kind: Problem, c: &Real, l: &Real) -> (Real, Real) {
    let lc = l * c;
    let x = (-(&lc * 2)).exp();
    let x2 = x.square();
    let minus = 1 - &lc * &x * 4 - &x2;
    let plus = 1 + &lc * &x * 4 - &x2;
    let up = (1 + &x).square();
    let down = (1 - &x).square();
    match kind {
        Problem::Type1 => {
            let c3 = c.powi(3) * 2;
            (&c3 * up / minus, c3 * down / plus)
        }
        Problem::Type2 => {
            let c2 = c * 2;
            (&c2 * down / minus, c2 * up / plus)
        }
    }
}

/// Limit of both non-polynomial families as `L -> infinity`.
pub fn family_limit(kind: Problem, c: &Real) -> Real {
    match kind {
        Problem::Type1 => c.powi(3) * 2,
        Problem::Type2 => c * 2,
    }
}

fn poly_entries(kind: Problem, l: &Real, k: u32, mult: u64) -> Vec<CylinderEntry> {
    let z = || Real::zero_like(l);
    let one = || Real::int_like(1, l);
    let l2 = l.square();
    let (v1, p1, v2, p2) = match kind {
        Problem::Type1 => (
            z(),
            [one(), z(), z(), z()],
            Real::int_like(3, l) / l.powi(3),
            [z(), -(&l2 * 3), z(), one()],
        ),
        Problem::Type2 => (
            l.recip(),
            [-&l2, z(), one(), z()],
            Real::int_like(3, l) / l,
            [z(), -&l2, z(), one()],
        ),
    };
    vec![
        CylinderEntry {
            value: v1,
            k,
            family: CylinderFamily::Poly1,
            multiplicity: mult,
            c: z(),
            axial: Axial::Poly(p1),
        },
        CylinderEntry {
            value: v2,
            k,
            family: CylinderFamily::Poly2,
            multiplicity: mult,
            c: z(),
            axial: Axial::Poly(p2),
        },
    ]
}

fn exp_entries(kind: Problem, l: &Real, c: &Real, k: u32, mult: u64) -> Vec<CylinderEntry> {
    let (odd, even) = family_values(kind, c, l);
    let e = (l * c * 2).exp();
    let one = Real::int_like(1, l);
    let (d_odd, d_even) = match kind {
        Problem::Type1 => {
            let p = (1 + l * c) * &e;
            let cl = l * c;
            let a_odd = (&cl - 1 - &p) / (c * &e + c);
            let a_even = (&cl - 1 + &p) / (c * &e - c);
            (
                [a_odd.clone(), one.clone(), -a_odd, one.clone()],
                [a_even.clone(), -&one, a_even, one.clone()],
            )
        }
        Problem::Type2 => {
            let a_odd = -((l * &e + l) / (&e - 1));
            let a_even = (l * &e - l) / (&e + 1);
            (
                [a_odd.clone(), one.clone(), -a_odd, one.clone()],
                [a_even.clone(), -&one, a_even, one.clone()],
            )
        }
    };
    vec![
        CylinderEntry {
            value: odd,
            k,
            family: CylinderFamily::OddK,
            multiplicity: mult,
            c: c.clone(),
            axial: Axial::Exp { c: c.clone(), d: d_odd },
        },
        CylinderEntry {
            value: even,
            k,
            family: CylinderFamily::EvenK,
            multiplicity: mult,
            c: c.clone(),
            axial: Axial::Exp {
                c: c.clone(),
                d: d_even,
            },
        },
    ]
}

/// Eigenvalues and eigenfunctions contributed by one cross-section mode.
pub fn mode_entries(kind: Problem, l: &Real, mode: &CrossSectionEntry, k: u32) -> Vec<CylinderEntry> {
    if mode.value.is_zero() {
        poly_entries(kind, l, k, mode.multiplicity)
    } else {
        exp_entries(kind, l, &mode.value.sqrt(), k, mode.multiplicity)
    }
}

fn sort_entries(v: &mut [CylinderEntry]) {
    v.sort_by(|x, y| {
        x.value
            .partial_cmp(&y.value)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(x.k.cmp(&y.k))
            .then(x.family.name().cmp(y.family.name()))
    });
}

/// Value of the `count`-th eigenvalue counted with multiplicity, if there are that many.
fn nth_with_multiplicity(sorted: &[CylinderEntry], count: usize) -> Option<&Real> {
    let mut seen = 0u64;
    for e in sorted {
        seen += e.multiplicity;
        if seen >= count as u64 {
            return Some(&e.value);
        }
    }
    None
}

/// The first `count` eigenvalues, with multiplicity.
///
/// Modes are added in order of increasing `c` and enumeration stops once the
/// smaller family value of a mode exceeds the current `count`-th eigenvalue;
/// both family values increase with `c`, so later modes cannot contribute.
pub fn cylinder_spectrum(kind: Problem, dom: &Cylinder, count: usize) -> Result<CylinderSpectrum> {
    if count == 0 {
        return Err(Error::Domain("count must be at least 1".into()));
    }
    let l = &dom.half_length;
    let mut requested = 8usize;
    let mut distinct: Vec<CylinderEntry> = Vec::new();
    let mut next = 0usize;
    let mut stopped = false;
    let mut exhausted = false;
    while !stopped && !exhausted {
        let modes = dom.modes(requested)?;
        exhausted = modes.len() < requested;
        while next < modes.len() {
            let mode_vals = mode_entries(kind, l, &modes[next], next as u32);
            let lowest = mode_vals
                .iter()
                .map(|e| e.value.clone())
                .reduce(|a, b| a.min(b))
                .expect("two families per mode");
            let mut sorted = distinct.clone();
            sort_entries(&mut sorted);
            if let Some(threshold) = nth_with_multiplicity(&sorted, count) {
                if lowest > *threshold {
                    stopped = true;
                    break;
                }
            }
            distinct.extend(mode_vals);
            next += 1;
        }
        requested *= 2;
    }
    sort_entries(&mut distinct);
    let mut entries = Vec::with_capacity(count);
    'outer: for e in distinct {
        for _ in 0..e.multiplicity {
            if entries.len() == count {
                break 'outer;
            }
            entries.push(e.clone());
        }
    }
    let tail_warning = !stopped || entries.len() < count;
    Ok(CylinderSpectrum { entries, tail_warning })
}

/// Largest over the four boundary conditions of the relative residual of
/// `entry`'s eigenfunction.
pub fn boundary_residual(kind: Problem, l: &Real, entry: &CylinderEntry) -> Real {
    let c2 = entry.c.square();
    let lam = &entry.value;
    let f = &entry.axial;
    let mut worst = Real::zero_like(l);
    for (s, sign) in [(l.clone(), 1i64), (-l, -1i64)] {
        let d: Vec<[Real; 4]> = (0..4).map(|j| f.pieces(&s, j)).collect();
        // each condition as a list of per-piece contributions
        let conditions: Vec<Vec<Real>> = match kind {
            Problem::Type1 => vec![
                d[1].to_vec(),
                (0..4)
                    .flat_map(|i| [&d[3][i] * sign, -(&c2 * &d[1][i]) * sign, lam * &d[0][i]])
                    .collect(),
            ],
            Problem::Type2 => vec![
                d[0].to_vec(),
                (0..4)
                    .flat_map(|i| [d[2][i].clone(), -(&c2 * &d[0][i]), -(lam * &d[1][i]) * sign])
                    .collect(),
            ],
        };
        for terms in conditions {
            let mut value = Real::zero_like(l);
            let mut scale = Real::zero_like(l);
            for t in terms {
                scale += t.abs();
                value += t;
            }
            let rel = if scale.is_zero() {
                value.abs()
            } else {
                value.abs() / scale
            };
            worst = worst.max(rel);
        }
    }
    worst
}

/// `|value - limit|` per cross-section mode with `c > 0`, taking the larger
/// of the two families.
#[derive(Clone, Debug)]
pub struct WeylGapRow {
    pub k: u32,
    pub lambda: Real,
    pub limit: Real,
    pub gap_odd: Real,
    pub gap_even: Real,
    pub gap: Real,
}

#[derive(Clone, Debug)]
pub struct WeylGapReport {
    pub rows: Vec<WeylGapRow>,
    pub strictly_decreasing: bool,
}

pub fn weyl_gap_report(kind: Problem, dom: &Cylinder, m_max: usize) -> Result<WeylGapReport> {
    if m_max < 2 {
        return Err(Error::Domain("need at least two modes".into()));
    }
    let modes = dom.modes(m_max + 1)?;
    let mut rows = Vec::new();
    for (k, mode) in modes.iter().enumerate() {
        if mode.value.is_zero() {
            continue;
        }
        let c = mode.value.sqrt();
        let limit = family_limit(kind, &c);
        let (odd, even) = family_values(kind, &c, &dom.half_length);
        let gap_odd = (&odd - &limit).abs();
        let gap_even = (&even - &limit).abs();
        rows.push(WeylGapRow {
            k: k as u32,
            lambda: mode.value.clone(),
            gap: gap_odd.clone().max(gap_even.clone()),
            limit,
            gap_odd,
            gap_even,
        });
        if rows.len() == m_max {
            break;
        }
    }
    let strictly_decreasing = rows.windows(2).all(|w| w[1].gap < w[0].gap);
    Ok(WeylGapReport {
        rows,
        strictly_decreasing,
    })
}

#[derive(Clone, Debug)]
pub struct ExistenceRow {
    pub half_length: Real,
    pub value: Real,
    pub boundary_area: Option<Real>,
}

#[derive(Clone, Debug)]
pub struct ExistenceReport {
    pub kind: Problem,
    pub rows: Vec<ExistenceRow>,
    /// Type 1 values decreasing, Type 2 values increasing along the grid.
    pub monotone: bool,
}

/// Tabulates the even Type 1 family at mode `c` (which tends to 0 as the
/// cylinder shortens) or the Type 2 value `1/L` (which blows up), along a
/// decreasing grid of half-lengths. The boundary, two copies of the cross
/// section, has the same area for every `L`.
pub fn existence_scan(
    kind: Problem,
    c: &Real,
    l_grid: &[Real],
    cross_section_area: Option<&Real>,
) -> Result<ExistenceReport> {
    if l_grid.is_empty() {
        return Err(Error::Domain("empty half-length grid".into()));
    }
    if l_grid.iter().any(|l| !l.is_positive()) {
        return Err(Error::Domain("half-lengths must be positive".into()));
    }
    if l_grid.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::Domain("half-length grid must be decreasing".into()));
    }
    if kind == Problem::Type1 && !c.is_positive() {
        return Err(Error::Domain("mode c must be positive".into()));
    }
    let rows: Vec<ExistenceRow> = l_grid
        .iter()
        .map(|l| ExistenceRow {
            half_length: l.clone(),
            value: match kind {
                Problem::Type1 => family_values(kind, c, l).1,
                Problem::Type2 => l.recip(),
            },
            boundary_area: cross_section_area.map(|a| a * 2),
        })
        .collect();
    let monotone = rows.windows(2).all(|w| match kind {
        Problem::Type1 => w[1].value < w[0].value,
        Problem::Type2 => w[1].value > w[0].value,
    });
    Ok(ExistenceReport { kind, rows, monotone })
}

#[derive(Clone, Debug)]
pub struct LimitRow {
    pub half_length: Real,
    pub gap_odd: Real,
    pub gap_even: Real,
}

/// Distances of the two families at mode `c` from their long-cylinder limit.
pub fn limit_gaps(kind: Problem, c: &Real, l_grid: &[Real]) -> Vec<LimitRow> {
    let limit = family_limit(kind, c);
    l_grid
        .iter()
        .map(|l| {
            let (odd, even) = family_values(kind, c, l);
            LimitRow {
                half_length: l.clone(),
                gap_odd: (odd - &limit).abs(),
                gap_even: (even - &limit).abs(),
            }
        })
        .collect()
}
