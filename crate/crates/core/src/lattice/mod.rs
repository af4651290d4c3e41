//! Integer lattices with a symmetric bilinear form.

mod enumerate;
mod smith;
mod vector;

pub use enumerate::{enumerate_by_functional, enumerate_with_square};
pub use smith::{
    det_i64, hnf_rows, integer_kernel, rank_i64, rank_q, smith, smith_big, solve_q, to_big,
    BigMatrix, SmithDecomposition,
};
pub use vector::{floor_sqrt, q, q_frac, ClassVec, QVec, Q};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type IntMatrix = Vec<Vec<i64>>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntLattice {
    gram: IntMatrix,
    labels: Vec<String>,
}

impl IntLattice {
    pub fn new(gram: IntMatrix, labels: Vec<String>) -> Result<Self> {
        let n = gram.len();
        for row in &gram {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: row.len(),
                });
            }
        }
        if labels.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: labels.len(),
            });
        }
        for i in 0..n {
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::NotSymmetric);
                }
            }
        }
        Ok(IntLattice { gram, labels })
    }

    /// Lattice with default labels `e1, e2, ...`.
    pub fn from_gram(gram: IntMatrix) -> Result<Self> {
        let labels = (1..=gram.len()).map(|i| format!("e{i}")).collect();
        Self::new(gram, labels)
    }

    pub fn diagonal(entries: &[i64]) -> Self {
        let n = entries.len();
        let mut gram = vec![vec![0; n]; n];
        for (i, &e) in entries.iter().enumerate() {
            gram[i][i] = e;
        }
        Self::from_gram(gram).expect("diagonal gram is symmetric")
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn checked_inner(&self, a: &ClassVec, b: &ClassVec) -> Result<i64> {
        for v in [a, b] {
            if v.len() != self.rank() {
                return Err(Error::DimensionMismatch {
                    expected: self.rank(),
                    got: v.len(),
                });
            }
        }
        let mut acc: i128 = 0;
        for (i, row) in self.gram.iter().enumerate() {
            if a[i] == 0 {
                continue;
            }
            let mut r: i128 = 0;
            for (j, &g) in row.iter().enumerate() {
                r += g as i128 * b[j] as i128;
            }
            acc += a[i] as i128 * r;
        }
        Ok(i64::try_from(acc).expect("intersection number overflow"))
    }

    /// `aᵀ·G·b`. Panics on a length mismatch; see [`IntLattice::checked_inner`].
    pub fn inner(&self, a: &ClassVec, b: &ClassVec) -> i64 {
        self.checked_inner(a, b).unwrap()
    }

    pub fn square(&self, a: &ClassVec) -> i64 {
        self.inner(a, a)
    }

    pub fn inner_q(&self, a: &QVec, b: &QVec) -> Q {
        assert_eq!(a.len(), self.rank());
        assert_eq!(b.len(), self.rank());
        let mut acc = Q::zero();
        for (i, row) in self.gram.iter().enumerate() {
            if a[i].is_zero() {
                continue;
            }
            let mut r = Q::zero();
            for (j, &g) in row.iter().enumerate() {
                if g != 0 && !b[j].is_zero() {
                    r += &b[j] * Q::from_integer(BigInt::from(g));
                }
            }
            acc += &a[i] * r;
        }
        acc
    }

    pub fn inner_qc(&self, a: &QVec, b: &ClassVec) -> Q {
        self.inner_q(a, &b.to_q())
    }

    pub fn square_q(&self, a: &QVec) -> Q {
        self.inner_q(a, a)
    }

    /// `G·v` as an integer vector (the functional `x ↦ v·x`).
    pub fn dual(&self, v: &ClassVec) -> Vec<i64> {
        (0..self.rank())
            .map(|i| self.inner(&ClassVec::unit(self.rank(), i), v))
            .collect()
    }

    pub fn gram_of(&self, vs: &[ClassVec]) -> IntMatrix {
        vs.iter()
            .map(|a| vs.iter().map(|b| self.inner(a, b)).collect())
            .collect()
    }

    /// `(positive, negative, zero)` counts of the form.
    pub fn signature(&self) -> (usize, usize, usize) {
        signature_of(&self.gram)
    }

    pub fn is_unimodular(&self) -> bool {
        det_i64(&self.gram).abs().is_one()
    }

    /// Saturated sublattice `{x : x·s = 0 for s in S}` in Hermite form.
    pub fn orthogonal_complement(&self, s: &[ClassVec]) -> Vec<ClassVec> {
        let rows: Vec<Vec<BigInt>> = s
            .iter()
            .map(|v| self.dual(v).into_iter().map(BigInt::from).collect())
            .collect();
        integer_kernel(&rows, self.rank())
            .into_iter()
            .map(|r| {
                ClassVec(
                    r.iter()
                        .map(|x| x.to_i64().expect("coordinate overflow"))
                        .collect(),
                )
            })
            .collect()
    }

    pub fn label_of(&self, v: &ClassVec) -> String {
        let mut out = String::new();
        for (c, l) in v.coords().iter().zip(&self.labels) {
            if *c == 0 {
                continue;
            }
            let sign = if *c < 0 {
                "-"
            } else if out.is_empty() {
                ""
            } else {
                "+"
            };
            let mag = c.abs();
            if mag == 1 {
                out.push_str(&format!("{sign}{l}"));
            } else {
                out.push_str(&format!("{sign}{mag}{l}"));
            }
        }
        if out.is_empty() {
            "0".into()
        } else {
            out
        }
    }
}

pub fn orthogonal_complement(l: &IntLattice, s: &[ClassVec]) -> Vec<ClassVec> {
    l.orthogonal_complement(s)
}

pub fn inner(l: &IntLattice, a: &ClassVec, b: &ClassVec) -> Result<i64> {
    l.checked_inner(a, b)
}

/// Signature by rational congruence diagonalization.
pub fn signature_of(gram: &[Vec<i64>]) -> (usize, usize, usize) {
    let mut a: Vec<Vec<Q>> = gram
        .iter()
        .map(|r| r.iter().map(|&x| q(x)).collect())
        .collect();
    let n = a.len();
    let (mut pos, mut neg, mut zero) = (0, 0, 0);
    for k in 0..n {
        if a[k][k].is_zero() {
            if let Some(j) = ((k + 1)..n).find(|&j| !a[j][j].is_zero()) {
                a.swap(k, j);
                for row in a.iter_mut() {
                    row.swap(k, j);
                }
            } else if let Some(j) = ((k + 1)..n).find(|&j| !a[k][j].is_zero()) {
                for c in 0..n {
                    let s = a[j][c].clone();
                    a[k][c] += s;
                }
                for r in 0..n {
                    let s = a[r][j].clone();
                    a[r][k] += s;
                }
            } else {
                zero += 1;
                continue;
            }
        }
        let p = a[k][k].clone();
        if p.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        for i in (k + 1)..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] / &p;
            for j in k..n {
                let s = &f * &a[k][j];
                a[i][j] -= s;
            }
        }
        for i in (k + 1)..n {
            a[k][i] = Q::zero();
            a[i][k] = Q::zero();
        }
    }
    (pos, neg, zero)
}

/// Positive definiteness via leading pivots.
pub fn is_positive_definite(gram: &[Vec<i64>]) -> bool {
    let (p, _, _) = signature_of(gram);
    p == gram.len()
}

/// An integer isometry; column `j` of `matrix` is the image of basis vector `j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LatticeIsometry {
    pub matrix: IntMatrix,
    pub source: IntLattice,
    pub target: IntLattice,
}

impl LatticeIsometry {
    pub fn new(matrix: IntMatrix, source: IntLattice, target: IntLattice) -> Result<Self> {
        let n = source.rank();
        if target.rank() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: target.rank(),
            });
        }
        if matrix.len() != n || matrix.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: matrix.len(),
            });
        }
        if !det_i64(&matrix).abs().is_one() {
            return Err(Error::NotUnimodular);
        }
        let iso = LatticeIsometry {
            matrix,
            source,
            target,
        };
        for i in 0..n {
            for j in 0..=i {
                let ei = iso.column(i);
                let ej = iso.column(j);
                if iso.target.inner(&ei, &ej) != iso.source.gram()[i][j] {
                    return Err(Error::NotAnIsometry);
                }
            }
        }
        Ok(iso)
    }

    pub fn identity(l: &IntLattice) -> Self {
        let n = l.rank();
        let matrix = (0..n)
            .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
            .collect();
        LatticeIsometry {
            matrix,
            source: l.clone(),
            target: l.clone(),
        }
    }

    /// Build from the images of the basis vectors.
    pub fn from_images(
        images: &[ClassVec],
        source: IntLattice,
        target: IntLattice,
    ) -> Result<Self> {
        let n = images.len();
        let matrix = (0..target.rank())
            .map(|i| (0..n).map(|j| images[j][i]).collect())
            .collect();
        Self::new(matrix, source, target)
    }

    pub fn column(&self, j: usize) -> ClassVec {
        ClassVec(self.matrix.iter().map(|r| r[j]).collect())
    }

    pub fn apply(&self, v: &ClassVec) -> ClassVec {
        assert_eq!(v.len(), self.source.rank());
        ClassVec(
            self.matrix
                .iter()
                .map(|row| {
                    let s: i128 = row
                        .iter()
                        .zip(v.coords())
                        .map(|(&a, &b)| a as i128 * b as i128)
                        .sum();
                    i64::try_from(s).expect("coordinate overflow")
                })
                .collect(),
        )
    }

    pub fn apply_q(&self, v: &QVec) -> QVec {
        QVec(
            self.matrix
                .iter()
                .map(|row| {
                    row.iter()
                        .zip(&v.0)
                        .filter(|(a, _)| **a != 0)
                        .map(|(&a, b)| b * q(a))
                        .sum()
                })
                .collect(),
        )
    }

    /// `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &LatticeIsometry) -> LatticeIsometry {
        assert_eq!(other.target.rank(), self.source.rank());
        let n = self.matrix.len();
        let k = other.matrix.len();
        let m = if k == 0 { 0 } else { other.matrix[0].len() };
        let mut matrix = vec![vec![0i64; m]; n];
        for (i, row) in matrix.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                let s: i128 = (0..k)
                    .map(|l| self.matrix[i][l] as i128 * other.matrix[l][j] as i128)
                    .sum();
                *cell = i64::try_from(s).expect("coordinate overflow");
            }
        }
        LatticeIsometry {
            matrix,
            source: other.source.clone(),
            target: self.target.clone(),
        }
    }

    pub fn inverse(&self) -> LatticeIsometry {
        let s = smith(&self.matrix);
        let inv = smith::mat_mul_big(&s.v, &s.u);
        let matrix = inv
            .iter()
            .map(|r| {
                r.iter()
                    .map(|x| x.to_i64().expect("coordinate overflow"))
                    .collect()
            })
            .collect();
        LatticeIsometry {
            matrix,
            source: self.target.clone(),
            target: self.source.clone(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.matrix
            .iter()
            .enumerate()
            .all(|(i, r)| r.iter().enumerate().all(|(j, &x)| x == i64::from(i == j)))
    }

    /// Recheck unimodularity and form preservation.
    pub fn validate(&self) -> Result<()> {
        Self::new(
            self.matrix.clone(),
            self.source.clone(),
            self.target.clone(),
        )
        .map(|_| ())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p2_lattice() -> IntLattice {
        IntLattice::diagonal(&[1, -1, -1, -1])
    }

    #[test]
    fn inner_examples() {
        let l = p2_lattice();
        let a = ClassVec(vec![1, -1, -1, -1]);
        assert_eq!(l.inner(&a, &a), -2);
        assert_eq!(l.inner(&ClassVec::zero(4), &a), 0);
        assert_eq!(l.inner(&a, &ClassVec(vec![0, 1, 0, 0])), 1);
        assert!(matches!(
            l.checked_inner(&a, &ClassVec(vec![1])),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn complement_of_p2_boundary() {
        let l = p2_lattice();
        let s = vec![
            ClassVec(vec![1, -1, 0, 0]),
            ClassVec(vec![1, 0, -1, 0]),
            ClassVec(vec![1, 0, 0, -1]),
        ];
        assert_eq!(
            l.orthogonal_complement(&s),
            vec![ClassVec(vec![1, -1, -1, -1])]
        );
        assert_eq!(l.orthogonal_complement(&[]).len(), 4);
        let full: Vec<ClassVec> = (0..4).map(|i| ClassVec::unit(4, i)).collect();
        assert!(l.orthogonal_complement(&full).is_empty());
    }

    #[test]
    fn complement_is_saturated() {
        let l = IntLattice::diagonal(&[1, -1, -1]);
        let c = l.orthogonal_complement(&[ClassVec(vec![2, 0, 0])]);
        assert_eq!(c, vec![ClassVec(vec![0, 1, 0]), ClassVec(vec![0, 0, 1])]);
        let c = l.orthogonal_complement(&[ClassVec(vec![0, 2, 2])]);
        assert_eq!(c, vec![ClassVec(vec![1, 0, 0]), ClassVec(vec![0, 1, -1])]);
    }

    #[test]
    fn signature_counts() {
        assert_eq!(p2_lattice().signature(), (1, 3, 0));
        assert_eq!(signature_of(&[vec![0, 1], vec![1, 0]]), (1, 1, 0));
        assert_eq!(signature_of(&[vec![-2, 1], vec![1, -2]]), (0, 2, 0));
        assert_eq!(signature_of(&[vec![0, 0], vec![0, -1]]), (0, 1, 1));
        assert_eq!(signature_of(&[vec![-2, 2], vec![2, -2]]), (0, 1, 1));
    }

    #[test]
    fn isometry_rules() {
        let l = p2_lattice();
        let swap = LatticeIsometry::new(
            vec![
                vec![1, 0, 0, 0],
                vec![0, 0, 1, 0],
                vec![0, 1, 0, 0],
                vec![0, 0, 0, 1],
            ],
            l.clone(),
            l.clone(),
        )
        .unwrap();
        assert!(swap.compose(&swap).is_identity());
        assert_eq!(swap.inverse().matrix, swap.matrix);
        let bad = LatticeIsometry::new(
            vec![
                vec![1, 1, 0, 0],
                vec![0, 1, 0, 0],
                vec![0, 0, 1, 0],
                vec![0, 0, 0, 1],
            ],
            l.clone(),
            l,
        );
        assert_eq!(bad, Err(Error::NotAnIsometry));
    }

    #[test]
    fn label_rendering() {
        let l = IntLattice::new(
            IntLattice::diagonal(&[1, -1, -1]).gram().clone(),
            vec!["L".into(), "E1".into(), "E2".into()],
        )
        .unwrap();
        assert_eq!(l.label_of(&ClassVec(vec![3, -1, 2])), "3L-E1+2E2");
        assert_eq!(l.label_of(&ClassVec(vec![0, 0, 0])), "0");
    }
}
