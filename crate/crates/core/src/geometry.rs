//! Dimension-dependent constants: sphere and ball measures, spherical
//! harmonic multiplicities, and Laplace spectra of the built-in cross-sections.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use rug::Float;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{Precision, Real};

/// Ambient dimension `n >= 2`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Dimension(u32);

impl Dimension {
    pub fn new(n: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::Domain(format!("dimension must be at least 2, got {n}")));
        }
        Ok(Dimension(n))
    }

    pub fn get(self) -> u32 {
        self.0
    }
}

fn omega_cache() -> &'static Mutex<HashMap<(u32, u32), Float>> {
    static CACHE: OnceLock<Mutex<HashMap<(u32, u32), Float>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Area of the unit sphere `S^{n-1}`, `2 pi^{n/2} / Gamma(n/2)`.
pub fn sphere_area(n: Dimension, p: Precision) -> Real {
    let key = (n.get(), p.bits());
    if let Some(v) = omega_cache().lock().unwrap().get(&key) {
        return Real::from_float(v.clone());
    }
    let half_n = Real::ratio(n.get() as i64, 2, p);
    let value = Real::pi(p).pow(&half_n) * 2 / half_n.gamma();
    omega_cache().lock().unwrap().insert(key, value.as_float().clone());
    value
}

/// Volume of the ball of radius `r`.
pub fn ball_volume(n: Dimension, r: &Real, p: Precision) -> Result<Real> {
    if !r.is_positive() {
        return Err(Error::Domain("ball radius must be positive".into()));
    }
    Ok(sphere_area(n, p) * r.powi(n.get() as i64) / n.get() as i64)
}

/// Boundary area of the ball of radius `r`.
pub fn ball_boundary_area(n: Dimension, r: &Real, p: Precision) -> Result<Real> {
    if !r.is_positive() {
        return Err(Error::Domain("ball radius must be positive".into()));
    }
    Ok(sphere_area(n, p) * r.powi(n.get() as i64 - 1))
}

pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Dimension of the space of degree-`k` spherical harmonics on `S^{n-1}`.
pub fn harmonic_multiplicity(n: Dimension, k: u32) -> u64 {
    let n = n.get() as u64;
    let k = k as u64;
    match k {
        0 => 1,
        1 => n,
        _ => (binomial(n + k - 1, n - 1) - binomial(n + k - 3, n - 1)) as u64,
    }
}

/// `k(n+k-2)` as an integer.
pub fn tau(n: Dimension, k: u32) -> i64 {
    let (n, k) = (n.get() as i64, k as i64);
    k * (n + k - 2)
}

/// Laplace eigenvalue of degree-`k` harmonics on the unit `S^{n-1}`.
pub fn sphere_laplace_eigenvalue(n: Dimension, k: u32, p: Precision) -> Real {
    Real::int(tau(n, k), p)
}

/// A closed manifold whose Laplace spectrum is known.
#[derive(Clone, Debug)]
pub enum CrossSection {
    /// Round sphere `S^m`.
    Sphere { m: u32 },
    /// Flat torus `R^m / 2 pi Z^m`.
    Torus { m: u32 },
    /// Eigenvalues with multiplicities, given for unit scale.
    List(Vec<(Real, u64)>),
}

impl CrossSection {
    pub fn label(&self) -> String {
        match self {
            CrossSection::Sphere { m } => format!("sphere:{m}"),
            CrossSection::Torus { m } => format!("torus:{m}"),
            CrossSection::List(v) => format!("list:{}", v.len()),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CrossSectionEntry {
    pub value: Real,
    pub multiplicity: u64,
}

/// Leading part of a cross-section spectrum, eigenvalues distinct and ascending.
#[derive(Clone, Debug)]
pub struct CrossSectionSpectrum {
    pub kind: CrossSection,
    pub radius: Real,
    pub entries: Vec<CrossSectionEntry>,
}

/// Volume of a cross-section at the given radius, where available.
pub fn cross_section_volume(kind: &CrossSection, r: &Real, p: Precision) -> Option<Real> {
    match kind {
        CrossSection::Sphere { m } => {
            let d = Dimension::new(m + 1).ok()?;
            Some(sphere_area(d, p) * r.powi(*m as i64))
        }
        CrossSection::Torus { m } => Some((Real::pi(p) * 2 * r).powi(*m as i64)),
        CrossSection::List(_) => None,
    }
}

/// First `count` distinct eigenvalues of the cross-section scaled to radius `r`.
///
/// A user list is truncated to its own length if it is shorter than `count`.
pub fn cross_section_spectrum(
    kind: &CrossSection,
    r: &Real,
    count: usize,
    p: Precision,
) -> Result<CrossSectionSpectrum> {
    if count == 0 {
        return Err(Error::Domain("count must be at least 1".into()));
    }
    if !r.is_positive() {
        return Err(Error::Domain("cross-section radius must be positive".into()));
    }
    let r2 = r.square();
    let entries = match kind {
        CrossSection::Sphere { m } => {
            if *m == 0 {
                return Err(Error::Unsupported("sphere dimension must be at least 1".into()));
            }
            let n = Dimension::new(m + 1)?;
            (0..count as u32)
                .map(|k| CrossSectionEntry {
                    value: Real::int(tau(n, k), p) / &r2,
                    multiplicity: harmonic_multiplicity(n, k),
                })
                .collect()
        }
        CrossSection::Torus { m } => {
            if *m == 0 {
                return Err(Error::Unsupported("torus dimension must be at least 1".into()));
            }
            lattice_norm_counts(*m, count)
                .into_iter()
                .map(|(s, mult)| CrossSectionEntry {
                    value: Real::int(s as i64, p) / &r2,
                    multiplicity: mult,
                })
                .collect()
        }
        CrossSection::List(values) => {
            for w in values.windows(2) {
                if w[1].0 < w[0].0 {
                    return Err(Error::Domain("cross-section list must be ascending".into()));
                }
            }
            if let Some((v, mult)) = values.iter().find(|(v, m)| v.is_negative() || *m == 0) {
                return Err(Error::Domain(format!(
                    "invalid cross-section entry ({}, {mult})",
                    v.to_decimal(10)
                )));
            }
            values
                .iter()
                .take(count)
                .map(|(v, mult)| CrossSectionEntry {
                    value: v.with_bits(p.bits()) / &r2,
                    multiplicity: *mult,
                })
                .collect()
        }
    };
    Ok(CrossSectionSpectrum {
        kind: kind.clone(),
        radius: r.clone(),
        entries,
    })
}

/// The `count` smallest values of `|v|^2` over `v` in `Z^m`, with the number
/// of lattice points attaining each.
fn lattice_norm_counts(m: u32, count: usize) -> Vec<(u64, u64)> {
    let mut bound: u64 = 4;
    loop {
        // reps[s] = #{v in Z^m : |v|^2 = s} for s <= bound, by convolution
        let mut reps = vec![0u64; bound as usize + 1];
        reps[0] = 1;
        for _ in 0..m {
            let mut next = vec![0u64; bound as usize + 1];
            for (s, &c) in reps.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                let mut j: u64 = 0;
                while s as u64 + j * j <= bound {
                    let w = if j == 0 { 1 } else { 2 };
                    next[s + (j * j) as usize] += c * w;
                    j += 1;
                }
            }
            reps = next;
        }
        let found: Vec<(u64, u64)> = reps
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(s, &c)| (s as u64, c))
            .take(count)
            .collect();
        if found.len() == count {
            return found;
        }
        bound *= 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dim(n: u32) -> Dimension {
        Dimension::new(n).unwrap()
    }

    #[test]
    fn dimension_rejects_one() {
        assert!(Dimension::new(1).is_err());
    }

    #[test]
    fn multiplicity_small_cases() {
        assert_eq!(harmonic_multiplicity(dim(3), 2), 5);
        assert_eq!(harmonic_multiplicity(dim(7), 0), 1);
        assert_eq!(harmonic_multiplicity(dim(4), 1), 4);
        assert_eq!(harmonic_multiplicity(dim(2), 5), 2);
    }

    #[test]
    fn tau_values() {
        assert_eq!(tau(dim(3), 1), 2);
        assert_eq!(tau(dim(5), 2), 10);
        assert_eq!(tau(dim(9), 0), 0);
    }

    #[test]
    fn torus_counts() {
        assert_eq!(lattice_norm_counts(1, 3), vec![(0, 1), (1, 2), (4, 2)]);
        assert_eq!(lattice_norm_counts(2, 4), vec![(0, 1), (1, 4), (2, 4), (4, 4)]);
        // 5 = 1+4 in 8 ways on Z^2; 3 is not a sum of two squares
        let t = lattice_norm_counts(2, 6);
        assert_eq!(t[4], (5, 8));
        assert!(t.iter().all(|(s, _)| *s != 3));
    }

    #[test]
    fn user_list_must_be_sorted() {
        let p = Precision::DEFAULT;
        let list = CrossSection::List(vec![(Real::int(2, p), 1), (Real::int(1, p), 1)]);
        assert!(cross_section_spectrum(&list, &Real::one(p), 2, p).is_err());
    }
}
