//! Smith and Hermite normal forms over the integers, plus rational linear algebra helpers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::vector::Q;

pub type BigMatrix = Vec<Vec<BigInt>>;

/// `U·A·V = diag` with `U`, `V` unimodular and each factor dividing the next.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub u: BigMatrix,
    pub v: BigMatrix,
    /// Length `min(rows, cols)`; zeros come last.
    pub diag: Vec<BigInt>,
    pub rows: usize,
    pub cols: usize,
}

impl SmithDecomposition {
    pub fn rank(&self) -> usize {
        self.diag.iter().filter(|d| !d.is_zero()).count()
    }

    pub fn diag_i64(&self) -> Vec<i64> {
        self.diag
            .iter()
            .map(|d| d.to_i64().expect("invariant factor exceeds i64"))
            .collect()
    }
}

pub fn to_big(a: &[Vec<i64>]) -> BigMatrix {
    a.iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect()
}

pub fn identity_big(n: usize) -> BigMatrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        BigInt::one()
                    } else {
                        BigInt::zero()
                    }
                })
                .collect()
        })
        .collect()
}

pub fn mat_mul_big(a: &BigMatrix, b: &BigMatrix) -> BigMatrix {
    let m = a.len();
    let k = b.len();
    let n = if k == 0 { 0 } else { b[0].len() };
    let mut out = vec![vec![BigInt::zero(); n]; m];
    for i in 0..m {
        for (l, brow) in b.iter().enumerate() {
            if a[i][l].is_zero() {
                continue;
            }
            for j in 0..n {
                out[i][j] += &a[i][l] * &brow[j];
            }
        }
    }
    out
}

/// Smith normal form of an `m × n` integer matrix given as rows.
///
/// Pivoting rule: the entry of least absolute value in the remaining block,
/// first in row-major order.
pub fn smith(a: &[Vec<i64>]) -> SmithDecomposition {
    let cols = a.first().map_or(0, |r| r.len());
    smith_big(&to_big(a), cols)
}

pub fn smith_big(a: &BigMatrix, cols: usize) -> SmithDecomposition {
    let m = a.len();
    let n = cols;
    let mut d = a.clone();
    let mut u = identity_big(m);
    let mut v = identity_big(n);
    let k = m.min(n);
    for t in 0..k {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    if d[i][j].is_zero() {
                        continue;
                    }
                    match best {
                        None => best = Some((i, j)),
                        Some((bi, bj)) => {
                            if d[i][j].abs() < d[bi][bj].abs() {
                                best = Some((i, j));
                            }
                        }
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return finish(d, u, v, m, n);
            };
            d.swap(t, pi);
            u.swap(t, pi);
            if pj != t {
                for row in d.iter_mut() {
                    row.swap(t, pj);
                }
                for row in v.iter_mut() {
                    row.swap(t, pj);
                }
            }
            let mut dirty = false;
            for i in (t + 1)..m {
                if d[i][t].is_zero() {
                    continue;
                }
                let qt = d[i][t].div_floor(&d[t][t]);
                let (pivot_row_d, pivot_row_u) = (d[t].clone(), u[t].clone());
                for j in t..n {
                    let s = &qt * &pivot_row_d[j];
                    d[i][j] -= s;
                }
                for j in 0..m {
                    let s = &qt * &pivot_row_u[j];
                    u[i][j] -= s;
                }
                if !d[i][t].is_zero() {
                    dirty = true;
                }
            }
            for j in (t + 1)..n {
                if d[t][j].is_zero() {
                    continue;
                }
                let qt = d[t][j].div_floor(&d[t][t]);
                for i in 0..m {
                    let s = &qt * &d[i][t];
                    d[i][j] -= s;
                }
                for i in 0..n {
                    let s = &qt * &v[i][t];
                    v[i][j] -= s;
                }
                if !d[t][j].is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            let mut fix = None;
            'outer: for i in (t + 1)..m {
                for j in (t + 1)..n {
                    if !d[i][j].is_multiple_of(&d[t][t]) {
                        fix = Some(i);
                        break 'outer;
                    }
                }
            }
            if let Some(i) = fix {
                for j in t..n {
                    let s = d[i][j].clone();
                    d[t][j] += s;
                }
                for j in 0..m {
                    let s = u[i][j].clone();
                    u[t][j] += s;
                }
                continue;
            }
            if d[t][t].is_negative() {
                for j in t..n {
                    d[t][j] = -&d[t][j];
                }
                for j in 0..m {
                    u[t][j] = -&u[t][j];
                }
            }
            break;
        }
    }
    finish(d, u, v, m, n)
}

fn finish(d: BigMatrix, u: BigMatrix, v: BigMatrix, m: usize, n: usize) -> SmithDecomposition {
    let diag = (0..m.min(n)).map(|i| d[i][i].clone()).collect();
    SmithDecomposition {
        u,
        v,
        diag,
        rows: m,
        cols: n,
    }
}

/// Row-style Hermite normal form of the lattice spanned by the given rows.
///
/// Output rows are the nonzero rows: pivots positive, entries above each pivot
/// reduced into `[0, pivot)`.
pub fn hnf_rows(rows: &[Vec<BigInt>], cols: usize) -> Vec<Vec<BigInt>> {
    let mut a: Vec<Vec<BigInt>> = rows.to_vec();
    let m = a.len();
    let mut r = 0;
    for c in 0..cols {
        if r >= m {
            break;
        }
        loop {
            let mut best: Option<usize> = None;
            for i in r..m {
                if !a[i][c].is_zero() && best.is_none_or(|b| a[i][c].abs() < a[b][c].abs()) {
                    best = Some(i);
                }
            }
            let Some(b) = best else { break };
            a.swap(r, b);
            let mut done = true;
            for i in (r + 1)..m {
                if a[i][c].is_zero() {
                    continue;
                }
                let qt = a[i][c].div_floor(&a[r][c]);
                let prow = a[r].clone();
                for j in c..cols {
                    let s = &qt * &prow[j];
                    a[i][j] -= s;
                }
                if !a[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if r < m && !a[r][c].is_zero() {
            if a[r][c].is_negative() {
                for j in 0..cols {
                    a[r][j] = -&a[r][j];
                }
            }
            let prow = a[r].clone();
            for i in 0..r {
                let qt = a[i][c].div_floor(&prow[c]);
                if qt.is_zero() {
                    continue;
                }
                for j in 0..cols {
                    let s = &qt * &prow[j];
                    a[i][j] -= s;
                }
            }
            r += 1;
        }
    }
    a.truncate(r);
    a
}

/// Integer basis of `{x : A x = 0}` in Hermite form; `A` has `cols` columns.
pub fn integer_kernel(a: &[Vec<BigInt>], cols: usize) -> Vec<Vec<BigInt>> {
    if a.is_empty() {
        return identity_big(cols);
    }
    let s = smith_big(&a.to_vec(), cols);
    let r = s.rank();
    let basis: Vec<Vec<BigInt>> = (r..cols)
        .map(|j| (0..cols).map(|i| s.v[i][j].clone()).collect())
        .collect();
    hnf_rows(&basis, cols)
}

/// Row-echelon rank over the rationals.
pub fn rank_q(rows: &[Vec<Q>]) -> usize {
    let mut a = rows.to_vec();
    let m = a.len();
    let n = a.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..m).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        for i in (r + 1)..m {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] / &a[r][c];
            for j in c..n {
                let s = &f * &a[r][j];
                a[i][j] -= s;
            }
        }
        r += 1;
        if r == m {
            break;
        }
    }
    r
}

pub fn rank_i64(rows: &[Vec<i64>]) -> usize {
    let q: Vec<Vec<Q>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| super::vector::q(x)).collect())
        .collect();
    rank_q(&q)
}

/// Solve `M x = b` for square nonsingular rational `M`.
pub fn solve_q(m: &[Vec<Q>], b: &[Q]) -> Option<Vec<Q>> {
    let n = m.len();
    let mut a: Vec<Vec<Q>> = m
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !a[i][c].is_zero())?;
        a.swap(c, p);
        let piv = a[c][c].clone();
        for j in c..=n {
            a[c][j] = &a[c][j] / &piv;
        }
        for i in 0..n {
            if i == c || a[i][c].is_zero() {
                continue;
            }
            let f = a[i][c].clone();
            for j in c..=n {
                let s = &f * &a[c][j];
                a[i][j] -= s;
            }
        }
    }
    Some(a.into_iter().map(|mut r| r.pop().unwrap()).collect())
}

/// Determinant of a square integer matrix (Bareiss).
pub fn det_i64(m: &[Vec<i64>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = to_big(m);
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(p) = ((k + 1)..n).find(|&i| !a[i][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                let val = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = val;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}
