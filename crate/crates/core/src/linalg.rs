//! Fixed-size dense matrices over [`Real`].

use crate::scalar::Real;

pub type Mat4 = [[Real; 4]; 4];

fn permutations4() -> Vec<([usize; 4], bool)> {
    let mut out = Vec::with_capacity(24);
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let p = [a, b, c, d];
                    let distinct = (0..4).all(|i| (i + 1..4).all(|j| p[i] != p[j]));
                    if distinct {
                        let inversions = (0..4)
                            .flat_map(|i| (i + 1..4).map(move |j| (i, j)))
                            .filter(|&(i, j)| p[i] > p[j])
                            .count();
                        out.push((p, inversions % 2 == 1));
                    }
                }
            }
        }
    }
    out
}

/// Determinant by full expansion, together with the sum of the absolute
/// values of its 24 terms, which bounds the rounding error.
pub fn det4_with_scale(m: &Mat4) -> (Real, Real) {
    let mut det = Real::zero_like(&m[0][0]);
    let mut scale = Real::zero_like(&m[0][0]);
    for (p, odd) in permutations4() {
        let term = &m[0][p[0]] * &m[1][p[1]] * &m[2][p[2]] * &m[3][p[3]];
        scale += term.abs();
        if odd {
            det -= term;
        } else {
            det += term;
        }
    }
    (det, scale)
}

pub fn det4(m: &Mat4) -> Real {
    det4_with_scale(m).0
}

fn det3(m: [[&Real; 3]; 3]) -> Real {
    m[0][0] * &(m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * &(m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * &(m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Classical adjugate, so that `m * adj(m) = det(m) I`.
pub fn adjugate4(m: &Mat4) -> Mat4 {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            // adj[i][j] = (-1)^{i+j} * minor of m without row j and column i
            let rows: Vec<usize> = (0..4).filter(|&r| r != j).collect();
            let cols: Vec<usize> = (0..4).filter(|&c| c != i).collect();
            let minor = det3(std::array::from_fn(|a| std::array::from_fn(|b| &m[rows[a]][cols[b]])));
            if (i + j) % 2 == 1 {
                -minor
            } else {
                minor
            }
        })
    })
}

pub fn mat_vec(m: &Mat4, v: &[Real; 4]) -> [Real; 4] {
    std::array::from_fn(|i| {
        let mut acc = Real::zero_like(&v[0]);
        for j in 0..4 {
            acc += &m[i][j] * &v[j];
        }
        acc
    })
}

pub fn mat_mul(a: &Mat4, b: &Mat4) -> Mat4 {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            let mut acc = Real::zero_like(&a[0][0]);
            for l in 0..4 {
                acc += &a[i][l] * &b[l][j];
            }
            acc
        })
    })
}

pub fn identity4(like: &Real) -> Mat4 {
    std::array::from_fn(|i| std::array::from_fn(|j| Real::int_like(i64::from(i == j), like)))
}

/// A null vector of a rank-3 matrix: the adjugate column of largest norm.
pub fn null_vector4(m: &Mat4) -> [Real; 4] {
    let adj = adjugate4(m);
    let mut best = 0;
    let mut best_norm = Real::zero_like(&m[0][0]);
    for j in 0..4 {
        let mut norm = Real::zero_like(&m[0][0]);
        for row in adj.iter() {
            norm += row[j].abs();
        }
        if norm > best_norm {
            best_norm = norm;
            best = j;
        }
    }
    std::array::from_fn(|i| adj[i][best].clone())
}
