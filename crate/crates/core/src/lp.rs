//! Exact feasibility for linear systems over the rationals (simplex, Bland's rule).

use num_traits::{One, Signed, Zero};

use crate::lattice::Q;

/// Outcome of `A x = b, x ≥ 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Feasibility {
    Feasible(Vec<Q>),
    /// `y` with `Aᵀy ≥ 0` and `bᵀy < 0`.
    Infeasible(Vec<Q>),
}

/// Phase-one simplex on `A x = b`, `x ≥ 0`; `a` is given by rows.
pub fn feasible_nonneg(a: &[Vec<Q>], b: &[Q]) -> Feasibility {
    let m = a.len();
    let n = a.first().map_or(0, |r| r.len());
    let flip: Vec<bool> = b.iter().map(|x| x.is_negative()).collect();
    // Tableau columns: n structural, m artificial, then rhs.
    let width = n + m + 1;
    let mut t: Vec<Vec<Q>> = Vec::with_capacity(m + 1);
    for i in 0..m {
        let sgn = if flip[i] { -Q::one() } else { Q::one() };
        let mut row = vec![Q::zero(); width];
        for j in 0..n {
            row[j] = &a[i][j] * &sgn;
        }
        row[n + i] = Q::one();
        row[width - 1] = &b[i] * &sgn;
        t.push(row);
    }
    // Objective row holds reduced costs for minimizing the artificial sum.
    let mut obj = vec![Q::zero(); width];
    for j in n..(n + m) {
        obj[j] = Q::one();
    }
    for row in &t {
        for j in 0..width {
            obj[j] -= &row[j];
        }
    }
    let mut basis: Vec<usize> = (n..n + m).collect();
    while let Some(enter) = (0..n + m).find(|&j| obj[j].is_negative()) {
        let mut leave: Option<(usize, Q)> = None;
        for i in 0..m {
            if t[i][enter].is_positive() {
                let ratio = &t[i][width - 1] / &t[i][enter];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((r, _)) = leave else {
            break;
        };
        pivot(&mut t, &mut obj, r, enter);
        basis[r] = enter;
    }
    if obj[width - 1].is_zero() {
        let mut x = vec![Q::zero(); n];
        for (i, &bj) in basis.iter().enumerate() {
            if bj < n {
                x[bj] = t[i][width - 1].clone();
            }
        }
        return Feasibility::Feasible(x);
    }
    // Duals of the phase-one problem: y_i = 1 - reduced cost of artificial i.
    let y: Vec<Q> = (0..m)
        .map(|i| {
            let yi = Q::one() - &obj[n + i];
            let yi = if flip[i] { -yi } else { yi };
            -yi
        })
        .collect();
    Feasibility::Infeasible(y)
}

fn pivot(t: &mut [Vec<Q>], obj: &mut [Q], r: usize, c: usize) {
    let width = obj.len();
    let p = t[r][c].clone();
    for j in 0..width {
        t[r][j] = &t[r][j] / &p;
    }
    let prow = t[r].clone();
    for (i, row) in t.iter_mut().enumerate() {
        if i == r || row[c].is_zero() {
            continue;
        }
        let f = row[c].clone();
        for j in 0..width {
            if !prow[j].is_zero() {
                row[j] -= &f * &prow[j];
            }
        }
    }
    if !obj[c].is_zero() {
        let f = obj[c].clone();
        for j in 0..width {
            if !prow[j].is_zero() {
                obj[j] -= &f * &prow[j];
            }
        }
    }
}

/// Cone membership result in coordinate space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConeMembership {
    /// Coefficients on `gens` (nonnegative) then on `lines` (free).
    Inside(Vec<Q>, Vec<Q>),
    /// A functional `y` with `y·g ≥ 0` on gens, `y·l = 0` on lines, `y·target < 0`.
    Separated(Vec<Q>),
}

/// Is `target` in `cone(gens) + span(lines)`? Vectors are coordinate vectors.
pub fn cone_membership(target: &[Q], gens: &[Vec<Q>], lines: &[Vec<Q>]) -> ConeMembership {
    let dim = target.len();
    let mut cols: Vec<&Vec<Q>> = gens.iter().collect();
    let negs: Vec<Vec<Q>> = lines
        .iter()
        .map(|l| l.iter().map(|x| -x).collect())
        .collect();
    for (l, nl) in lines.iter().zip(&negs) {
        cols.push(l);
        cols.push(nl);
    }
    let a: Vec<Vec<Q>> = (0..dim)
        .map(|i| cols.iter().map(|c| c[i].clone()).collect())
        .collect();
    match feasible_nonneg(&a, target) {
        Feasibility::Feasible(x) => {
            let g = gens.len();
            let lam = x[..g].to_vec();
            let mu = (0..lines.len())
                .map(|k| &x[g + 2 * k] - &x[g + 2 * k + 1])
                .collect();
            ConeMembership::Inside(lam, mu)
        }
        Feasibility::Infeasible(y) => ConeMembership::Separated(y),
    }
}

/// Some `x` (free) with `M x ≥ rhs` componentwise, if one exists.
pub fn solve_inequalities(m: &[Vec<Q>], rhs: &[Q]) -> Option<Vec<Q>> {
    let rows = m.len();
    let n = m.first().map_or(0, |r| r.len());
    // variables: x+ (n), x- (n), slack (rows)
    let a: Vec<Vec<Q>> = (0..rows)
        .map(|i| {
            let mut row = Vec::with_capacity(2 * n + rows);
            row.extend(m[i].iter().cloned());
            row.extend(m[i].iter().map(|x| -x));
            for k in 0..rows {
                row.push(if k == i { -Q::one() } else { Q::zero() });
            }
            row
        })
        .collect();
    match feasible_nonneg(&a, rhs) {
        Feasibility::Feasible(x) => Some((0..n).map(|j| &x[j] - &x[n + j]).collect()),
        Feasibility::Infeasible(_) => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::q;

    fn qv(v: &[i64]) -> Vec<Q> {
        v.iter().map(|&x| q(x)).collect()
    }

    fn dot(a: &[Q], b: &[Q]) -> Q {
        a.iter().zip(b).map(|(x, y)| x * y).sum()
    }

    #[test]
    fn membership_inside_and_outside() {
        let gens = vec![qv(&[1, 0]), qv(&[1, 1])];
        match cone_membership(&qv(&[3, 1]), &gens, &[]) {
            ConeMembership::Inside(l, _) => {
                assert_eq!(l, vec![q(2), q(1)]);
            }
            other => panic!("{other:?}"),
        }
        match cone_membership(&qv(&[0, 1]), &gens, &[]) {
            ConeMembership::Separated(y) => {
                for g in &gens {
                    assert!(!dot(&y, g).is_negative());
                }
                assert!(dot(&y, &qv(&[0, 1])).is_negative());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn lines_allow_both_signs() {
        let lines = vec![qv(&[0, 1])];
        let gens = vec![qv(&[1, 0])];
        assert!(matches!(
            cone_membership(&qv(&[2, -5]), &gens, &lines),
            ConeMembership::Inside(..)
        ));
        match cone_membership(&qv(&[-1, 3]), &gens, &lines) {
            ConeMembership::Separated(y) => {
                assert!(dot(&y, &lines[0]).is_zero());
                assert!(dot(&y, &qv(&[-1, 3])).is_negative());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn inequalities() {
        let m = vec![qv(&[1, 1]), qv(&[-1, 2])];
        let x = solve_inequalities(&m, &qv(&[1, 1])).unwrap();
        for row in &m {
            assert!(dot(row, &x) >= q(1));
        }
        let m = vec![qv(&[1]), qv(&[-1])];
        assert!(solve_inequalities(&m, &qv(&[1, 1])).is_none());
    }

    mod prop {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn certificates_are_valid(raw in proptest::collection::vec(-4i64..5, 3 * 6), t in proptest::collection::vec(-4i64..5, 3)) {
                let gens: Vec<Vec<Q>> = raw.chunks(3).map(qv).collect();
                let target = qv(&t);
                match cone_membership(&target, &gens, &[]) {
                    ConeMembership::Inside(l, _) => {
                        let mut sum = vec![Q::zero(); 3];
                        for (c, g) in l.iter().zip(&gens) {
                            prop_assert!(!c.is_negative());
                            for i in 0..3 { sum[i] += c * &g[i]; }
                        }
                        prop_assert_eq!(sum, target);
                    }
                    ConeMembership::Separated(y) => {
                        for g in &gens { prop_assert!(!dot(&y, g).is_negative()); }
                        prop_assert!(dot(&y, &target).is_negative());
                    }
                }
            }
        }
    }
}
