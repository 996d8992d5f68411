use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use steklov_core::geometry::{
    ball_boundary_area, ball_volume, binomial, cross_section_spectrum, harmonic_multiplicity, sphere_area,
    sphere_laplace_eigenvalue, tau, CrossSection, Dimension,
};
use steklov_core::scalar::rel_diff;
use steklov_core::{Precision, Real};

fn p() -> Precision {
    Precision::DEFAULT
}

fn dim(n: u32) -> Dimension {
    Dimension::new(n).unwrap()
}

fn pi() -> Real {
    Real::pi(p())
}

fn close(a: &Real, b: &Real) -> bool {
    rel_diff(a, b) < p().tolerance(5)
}

/// Exponent vectors of the degree-`k` monomials in `n` variables.
fn monomials(n: usize, k: u32) -> Vec<Vec<u32>> {
    if n == 1 {
        return vec![vec![k]];
    }
    let mut out = Vec::new();
    for first in 0..=k {
        for mut rest in monomials(n - 1, k - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn rank(mut rows: Vec<Vec<BigRational>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(pivot) = (r..rows.len()).find(|&i| rows[i][c] != BigRational::from_integer(0.into())) else {
            continue;
        };
        rows.swap(r, pivot);
        let lead = rows[r][c].clone();
        for i in 0..rows.len() {
            if i != r && rows[i][c] != BigRational::from_integer(0.into()) {
                let f = &rows[i][c] / &lead;
                for j in c..cols {
                    let delta = &f * &rows[r][j];
                    rows[i][j] -= delta;
                }
            }
        }
        r += 1;
    }
    r
}

/// Dimension of the kernel of the Laplacian on degree-`k` homogeneous
/// polynomials in `n` variables, by exact linear algebra.
fn harmonic_dimension(n: usize, k: u32) -> usize {
    let src = monomials(n, k);
    if k < 2 {
        return src.len();
    }
    let dst = monomials(n, k - 2);
    let index: HashMap<Vec<u32>, usize> = dst.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
    // matrix of the Laplacian: rows are target monomials, columns source ones
    let zero = BigRational::from_integer(BigInt::from(0));
    let mut rows = vec![vec![zero; src.len()]; dst.len()];
    for (j, m) in src.iter().enumerate() {
        for v in 0..n {
            if m[v] >= 2 {
                let mut t = m.clone();
                t[v] -= 2;
                let coeff = BigInt::from(m[v] as i64 * (m[v] as i64 - 1));
                rows[index[&t]][j] += BigRational::from_integer(coeff);
            }
        }
    }
    src.len() - rank(rows)
}

#[test]
fn sphere_area_examples() {
    assert!(close(&sphere_area(dim(2), p()), &(pi() * 2)));
    assert!(close(&sphere_area(dim(3), p()), &(pi() * 4)));
    assert!(close(&sphere_area(dim(4), p()), &(pi().square() * 2)));
}

#[test]
fn sphere_area_against_factorial_forms() {
    // even n: 2 pi^{n/2} / (n/2 - 1)!; odd n: 2^{(n+1)/2} pi^{(n-1)/2} / (n-2)!!
    for n in 2..=14i64 {
        let want = if n % 2 == 0 {
            let fact: i64 = (1..n / 2).product();
            pi().powi(n / 2) * 2 / fact
        } else {
            let dfact: i64 = (1..=n - 2).rev().step_by(2).product();
            Real::int(2, p()).powi((n + 1) / 2) * pi().powi((n - 1) / 2) / dfact
        };
        assert!(close(&sphere_area(dim(n as u32), p()), &want), "n={n}");
    }
}

#[test]
fn ball_measures() {
    let one = Real::one(p());
    assert!(close(&ball_volume(dim(2), &one, p()).unwrap(), &pi()));
    assert!(close(&ball_volume(dim(3), &one, p()).unwrap(), &(pi() * 4 / 3)));
    assert!(close(
        &ball_volume(dim(3), &Real::int(2, p()), p()).unwrap(),
        &(pi() * 32 / 3)
    ));
    assert!(close(
        &ball_boundary_area(dim(3), &Real::int(2, p()), p()).unwrap(),
        &(pi() * 16)
    ));
    assert!(ball_volume(dim(3), &Real::zero(p()), p()).is_err());
}

#[test]
fn multiplicity_examples() {
    assert_eq!(harmonic_multiplicity(dim(3), 2), 5);
    assert_eq!(harmonic_multiplicity(dim(4), 3), 16);
    for n in 2..10 {
        assert_eq!(harmonic_multiplicity(dim(n), 0), 1);
        assert_eq!(harmonic_multiplicity(dim(n), 1), n as u64);
        let nn = n as u64;
        assert_eq!(harmonic_multiplicity(dim(n), 2), (nn * nn + nn - 2) / 2);
    }
}

#[test]
fn multiplicities_by_brute_force() {
    for n in 2..=5u32 {
        let mut total = 0u64;
        for k in 0..=6u32 {
            let brute = harmonic_dimension(n as usize, k) as u64;
            let mu = harmonic_multiplicity(dim(n), k);
            assert_eq!(mu, brute, "n={n} k={k}");
            total += mu;
            let nn = n as u64;
            let kk = k as u64;
            let want = binomial(nn + kk - 1, nn - 1) + if kk >= 1 { binomial(nn + kk - 2, nn - 1) } else { 0 };
            assert_eq!(total as u128, want, "n={n} k={k}");
        }
    }
}

#[test]
fn tau_examples() {
    assert_eq!(tau(dim(3), 1), 2);
    assert_eq!(tau(dim(5), 2), 10);
    for n in 2..8 {
        assert_eq!(sphere_laplace_eigenvalue(dim(n), 0, p()), 0);
        for k in 0..10 {
            assert!(tau(dim(n), k + 1) > tau(dim(n), k));
        }
    }
}

#[test]
fn cross_section_examples() {
    let one = Real::one(p());
    let s = cross_section_spectrum(&CrossSection::Sphere { m: 2 }, &one, 2, p()).unwrap();
    assert_eq!(
        (s.entries[0].value.clone(), s.entries[0].multiplicity),
        (Real::zero(p()), 1)
    );
    assert_eq!(
        (s.entries[1].value.clone(), s.entries[1].multiplicity),
        (Real::int(2, p()), 3)
    );

    let t = cross_section_spectrum(&CrossSection::Torus { m: 1 }, &one, 2, p()).unwrap();
    assert_eq!(t.entries[0].multiplicity, 1);
    assert_eq!(
        (t.entries[1].value.clone(), t.entries[1].multiplicity),
        (Real::one(p()), 2)
    );

    for kind in [CrossSection::Sphere { m: 3 }, CrossSection::Torus { m: 3 }] {
        let s = cross_section_spectrum(&kind, &one, 1, p()).unwrap();
        assert_eq!(s.entries.len(), 1);
        assert!(s.entries[0].value.is_zero());
        assert_eq!(s.entries[0].multiplicity, 1);
    }

    let s = cross_section_spectrum(&CrossSection::Sphere { m: 2 }, &Real::int(2, p()), 3, p()).unwrap();
    assert_eq!(s.entries[2].value, Real::ratio(6, 4, p()));
}

#[test]
fn torus_against_lattice_enumeration() {
    for m in 1..=3u32 {
        let count = 12;
        let s = cross_section_spectrum(&CrossSection::Torus { m }, &Real::one(p()), count, p()).unwrap();
        let bound = 6i64;
        let mut tally: HashMap<i64, u64> = HashMap::new();
        let mut v = vec![-bound; m as usize];
        loop {
            *tally.entry(v.iter().map(|x| x * x).sum()).or_default() += 1;
            let mut i = 0;
            while i < v.len() && v[i] == bound {
                v[i] = -bound;
                i += 1;
            }
            if i == v.len() {
                break;
            }
            v[i] += 1;
        }
        let mut norms: Vec<i64> = tally.keys().copied().filter(|&q| q <= bound * bound).collect();
        norms.sort();
        for (e, q) in s.entries.iter().zip(&norms) {
            assert_eq!(e.value, Real::int(*q, p()), "m={m}");
            assert_eq!(e.multiplicity, tally[q], "m={m} |v|^2={q}");
        }
    }
}

#[test]
fn user_list_is_checked() {
    let one = Real::one(p());
    let good = CrossSection::List(vec![(Real::zero(p()), 1), (Real::int(3, p()), 2)]);
    let s = cross_section_spectrum(&good, &Real::int(2, p()), 5, p()).unwrap();
    assert_eq!(s.entries.len(), 2);
    assert_eq!(s.entries[1].value, Real::ratio(3, 4, p()));
    let unsorted = CrossSection::List(vec![(Real::int(3, p()), 1), (Real::zero(p()), 1)]);
    assert!(cross_section_spectrum(&unsorted, &one, 2, p()).is_err());
    let zero_mult = CrossSection::List(vec![(Real::zero(p()), 0)]);
    assert!(cross_section_spectrum(&zero_mult, &one, 2, p()).is_err());
}

proptest! {
    #[test]
    fn cross_sections_are_ordered(m in 1u32..=4, count in 1usize..40, torus in any::<bool>(), r in 0.1f64..10.0) {
        let kind = if torus { CrossSection::Torus { m } } else { CrossSection::Sphere { m } };
        let s = cross_section_spectrum(&kind, &Real::from_f64(r, p()), count, p()).unwrap();
        prop_assert_eq!(s.entries.len(), count);
        prop_assert!(s.entries[0].value.is_zero() && s.entries[0].multiplicity == 1);
        for w in s.entries.windows(2) {
            prop_assert!(w[1].value > w[0].value);
        }
        prop_assert!(s.entries.iter().all(|e| e.multiplicity > 0));
    }

    #[test]
    fn multiplicity_recurrence(n in 2u32..=12, k in 2u32..=20) {
        // mu_k(n) = C(n+k-1, n-1) - C(n+k-3, n-1)
        let (nn, kk) = (n as u64, k as u64);
        let want = binomial(nn + kk - 1, nn - 1) - binomial(nn + kk - 3, nn - 1);
        prop_assert_eq!(harmonic_multiplicity(dim(n), k) as u128, want);
    }
}
