//! Vectors of prescribed square with bounded pairing against a positive class.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use super::smith::{integer_kernel, smith_big, solve_q};
use super::vector::{floor_sqrt, q, ClassVec, Q};
use super::{is_positive_definite, IntLattice};
use crate::error::{Error, Result};

/// All `v` with `v² = s` and `c_lo ≤ v·H ≤ c_hi`, sorted by `v·H` then coordinates.
pub fn enumerate_with_square(
    l: &IntLattice,
    s: i64,
    h: &ClassVec,
    c_lo: i64,
    c_hi: i64,
) -> Result<Vec<ClassVec>> {
    let h2 = l.checked_inner(h, h)?;
    if h2 <= 0 {
        return Err(Error::NotPositive(h2.to_string()));
    }
    enumerate_by_functional(l, &l.dual(h), s, c_lo, c_hi)
}

/// All `v` with `v² = s` and `c_lo ≤ f(v) ≤ c_hi` for an integer functional `f`.
///
/// The form must be negative definite on `ker f`; the output is sorted by `f(v)`
/// then coordinates.
pub fn enumerate_by_functional(
    l: &IntLattice,
    f: &[i64],
    s: i64,
    c_lo: i64,
    c_hi: i64,
) -> Result<Vec<ClassVec>> {
    let r = l.rank();
    if f.len() != r {
        return Err(Error::DimensionMismatch {
            expected: r,
            got: f.len(),
        });
    }
    if c_lo > c_hi {
        return Ok(Vec::new());
    }
    let eval = |v: &ClassVec| -> i64 {
        let acc: i128 = f
            .iter()
            .zip(v.coords())
            .map(|(&a, &b)| a as i128 * b as i128)
            .sum();
        i64::try_from(acc).expect("pairing overflow")
    };
    let hv: Vec<BigInt> = f.iter().map(|&x| BigInt::from(x)).collect();
    let kernel: Vec<ClassVec> = integer_kernel(std::slice::from_ref(&hv), r)
        .into_iter()
        .map(|row| ClassVec(row.iter().map(|x| x.to_i64().unwrap()).collect()))
        .collect();
    let kernel = size_reduce(l, kernel);
    let m = kernel.len();
    let p: Vec<Vec<i64>> = kernel
        .iter()
        .map(|a| kernel.iter().map(|b| -l.inner(a, b)).collect())
        .collect();
    if !is_positive_definite(&p) {
        return Err(Error::NotHyperbolic);
    }

    let (xg, g) = if f.iter().all(|&x| x == 0) {
        (ClassVec::zero(r), 0)
    } else {
        let sd = smith_big(&vec![hv.clone()], r);
        let sign = sd.u[0][0].clone();
        let xg = ClassVec(
            (0..r)
                .map(|i| (&sign * &sd.v[i][0]).to_i64().expect("coordinate overflow"))
                .collect(),
        );
        (xg, sd.diag[0].to_i64().unwrap())
    };
    debug_assert_eq!(eval(&xg), g);

    let chol = Decomposition::new(&p);
    let pq: Vec<Vec<Q>> = p
        .iter()
        .map(|r| r.iter().map(|&x| q(x)).collect())
        .collect();

    let levels: Vec<i64> = if g == 0 {
        if c_lo <= 0 && 0 <= c_hi {
            vec![0]
        } else {
            Vec::new()
        }
    } else {
        let first = -((-c_lo).div_euclid(g)) * g;
        (0..)
            .map(|k| first + k * g)
            .take_while(|&c| c <= c_hi)
            .collect()
    };
    let mut out = Vec::new();
    for c in levels {
        let xc = if g == 0 { xg.clone() } else { xg.scale(c / g) };
        let b: Vec<Q> = kernel.iter().map(|k| q(l.inner(&xc, k))).collect();
        let t0 = if m == 0 {
            Vec::new()
        } else {
            solve_q(&pq, &b).expect("definite system")
        };
        let t0b: Q = t0.iter().zip(&b).map(|(a, bb)| a * bb).sum();
        let radius = q(l.square(&xc)) - q(s) + t0b;
        if radius.is_negative() {
            continue;
        }
        let mut t = vec![BigInt::zero(); m];
        chol.search(&t0, &radius, m, Q::zero(), &mut t, &mut |t: &[BigInt]| {
            let mut v = xc.clone();
            for (tj, k) in t.iter().zip(&kernel) {
                if tj.is_zero() {
                    continue;
                }
                v = &v + &k.scale(tj.to_i64().expect("coordinate overflow"));
            }
            if l.square(&v) == s {
                out.push(v);
            }
        });
    }
    out.sort_by(|a, b| eval(a).cmp(&eval(b)).then_with(|| a.cmp(b)));
    out.dedup();
    Ok(out)
}

/// LLL reduction (`δ = 0.99`) of a basis on which the form is negative definite.
///
/// Floating-point Gram–Schmidt data only steers the integer basis operations, so the result
/// always spans the same lattice.
fn size_reduce(l: &IntLattice, mut basis: Vec<ClassVec>) -> Vec<ClassVec> {
    let n = basis.len();
    let gso = |b: &[ClassVec]| -> (Vec<Vec<f64>>, Vec<f64>) {
        let mut mu = vec![vec![0.0; n]; n];
        let mut bs = vec![0.0; n];
        for i in 0..n {
            for j in 0..i {
                let mut x = -(l.inner(&b[i], &b[j]) as f64);
                for t in 0..j {
                    x -= mu[j][t] * mu[i][t] * bs[t];
                }
                mu[i][j] = x / bs[j];
            }
            let mut x = -(l.square(&b[i]) as f64);
            for t in 0..i {
                x -= mu[i][t] * mu[i][t] * bs[t];
            }
            bs[i] = x;
        }
        (mu, bs)
    };
    let mut k = 1;
    let mut steps = 0;
    while k < n && steps < 100_000 {
        steps += 1;
        for j in (0..k).rev() {
            let r = gso(&basis).0[k][j].round();
            if r != 0.0 && r.is_finite() {
                basis[k] = &basis[k] - &basis[j].scale(r as i64);
            }
        }
        let (mu, bs) = gso(&basis);
        if bs[k] >= (0.99 - mu[k][k - 1] * mu[k][k - 1]) * bs[k - 1] {
            k += 1;
        } else {
            basis.swap(k, k - 1);
            k = (k - 1).max(1);
        }
    }
    basis
}

/// `P = Σ_i d_i (y_i + Σ_{j>i} u_ij y_j)²`.
struct Decomposition {
    d: Vec<Q>,
    u: Vec<Vec<Q>>,
}

impl Decomposition {
    fn new(p: &[Vec<i64>]) -> Self {
        let m = p.len();
        let mut a: Vec<Vec<Q>> = p
            .iter()
            .map(|r| r.iter().map(|&x| q(x)).collect())
            .collect();
        let mut d = vec![Q::zero(); m];
        let mut u = vec![vec![Q::zero(); m]; m];
        for i in 0..m {
            d[i] = a[i][i].clone();
            for j in (i + 1)..m {
                u[i][j] = &a[i][j] / &d[i];
            }
            for j in (i + 1)..m {
                for k in (i + 1)..m {
                    let s = &u[i][j] * &a[i][k];
                    a[j][k] -= s;
                }
            }
        }
        Decomposition { d, u }
    }

    /// Visits every integer `t` with `(t - t0)ᵀ P (t - t0) ≤ radius`, fixing coordinates from the last.
    fn search<F: FnMut(&[BigInt])>(
        &self,
        t0: &[Q],
        radius: &Q,
        level: usize,
        used: Q,
        t: &mut Vec<BigInt>,
        visit: &mut F,
    ) {
        if level == 0 {
            visit(t);
            return;
        }
        let i = level - 1;
        let m = t.len();
        let mut center = t0[i].clone();
        for j in (i + 1)..m {
            let y = Q::from_integer(t[j].clone()) - &t0[j];
            center -= &self.u[i][j] * y;
        }
        let budget = radius - &used;
        if budget.is_negative() {
            return;
        }
        let w = &budget / &self.d[i];
        let r = floor_sqrt(&w);
        let lo: BigInt = center.floor().to_integer() - &r - 1;
        let hi = center.ceil().to_integer() + &r + 1;
        let mut ti = lo;
        while ti <= hi {
            let diff = Q::from_integer(ti.clone()) - &center;
            let term = &self.d[i] * &diff * &diff;
            if term <= budget {
                t[i] = ti.clone();
                self.search(t0, radius, i, &used + term, t, visit);
            }
            ti += 1;
        }
        t[i] = BigInt::zero();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn brute(l: &IntLattice, s: i64, h: &ClassVec, lo: i64, hi: i64, bx: i64) -> Vec<ClassVec> {
        let r = l.rank();
        let mut out = Vec::new();
        let mut cur = vec![-bx; r];
        loop {
            let v = ClassVec(cur.clone());
            let c = l.inner(&v, h);
            if l.square(&v) == s && c >= lo && c <= hi {
                out.push(v);
            }
            let mut k = 0;
            while k < r {
                cur[k] += 1;
                if cur[k] <= bx {
                    break;
                }
                cur[k] = -bx;
                k += 1;
            }
            if k == r {
                break;
            }
        }
        out.sort_by(|a, b| l.inner(a, h).cmp(&l.inner(b, h)).then_with(|| a.cmp(b)));
        out
    }

    #[test]
    fn p2_roots_at_level_zero() {
        let l = IntLattice::diagonal(&[1, -1, -1, -1]);
        let h = ClassVec(vec![3, -1, -1, -1]);
        let got = enumerate_with_square(&l, -2, &h, 0, 0).unwrap();
        assert_eq!(got, brute(&l, -2, &h, 0, 0, 5));
        assert_eq!(got.len(), 8);
        assert!(got.contains(&ClassVec(vec![1, -1, -1, -1])));
        assert!(got.contains(&ClassVec(vec![-1, 1, 1, 1])));
    }

    #[test]
    fn rank_two_oracle() {
        let l = IntLattice::diagonal(&[1, -1]);
        let h = ClassVec(vec![2, -1]);
        let got = enumerate_with_square(&l, -1, &h, 1, 1).unwrap();
        assert_eq!(got, brute(&l, -1, &h, 1, 1, 6));
        assert_eq!(got, vec![ClassVec(vec![0, 1])]);
    }

    #[test]
    fn functional_on_definite_lattice() {
        let a2 = IntLattice::from_gram(vec![vec![-2, 1], vec![1, -2]]).unwrap();
        let all = enumerate_by_functional(&a2, &[0, 0], -2, -5, 5).unwrap();
        assert_eq!(all.len(), 6);
        let pos = enumerate_by_functional(&a2, &[1, 0], -2, 1, 5).unwrap();
        assert_eq!(pos, vec![ClassVec(vec![1, 0]), ClassVec(vec![1, 1])]);
    }

    #[test]
    fn empty_range_and_bad_h() {
        let l = IntLattice::diagonal(&[1, -1]);
        assert!(enumerate_with_square(&l, -1, &ClassVec(vec![1, 0]), 2, 1)
            .unwrap()
            .is_empty());
        assert!(matches!(
            enumerate_with_square(&l, -1, &ClassVec(vec![1, 1]), 0, 1),
            Err(Error::NotPositive(_))
        ));
    }

    #[test]
    fn non_diagonal_lattices_match_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let grams = [
            vec![vec![0, 1, 0], vec![1, -1, 0], vec![0, 0, -2]],
            vec![
                vec![1, 0, 0, 0],
                vec![0, -1, 0, 0],
                vec![0, 0, -1, 0],
                vec![0, 0, 0, -1],
            ],
            vec![vec![2, 1, 0], vec![1, -2, 1], vec![0, 1, -2]],
        ];
        for g in grams {
            let l = IntLattice::from_gram(g).unwrap();
            let r = l.rank();
            for _ in 0..6 {
                let h = loop {
                    let h = ClassVec((0..r).map(|_| rng.gen_range(-3..=3)).collect());
                    if l.square(&h) > 0 {
                        break h;
                    }
                };
                let s = rng.gen_range(-3..=1);
                let got = enumerate_with_square(&l, s, &h, -3, 4).unwrap();
                let bx = 12;
                let want = brute(&l, s, &h, -3, 4, bx);
                for v in &got {
                    assert_eq!(l.square(v), s);
                }
                let inbox: Vec<_> = got
                    .iter()
                    .filter(|v| v.coords().iter().all(|c| c.abs() <= bx))
                    .cloned()
                    .collect();
                assert_eq!(inbox, want, "gram {:?} h {h} s {s}", l.gram());
            }
        }
    }
}
