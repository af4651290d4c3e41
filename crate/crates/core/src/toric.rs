//! Smooth complete two-dimensional fans and their Picard lattices.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{ClassVec, IntLattice};

pub type Ray = [i64; 2];

fn det(a: Ray, b: Ray) -> i64 {
    (a[0] as i128 * b[1] as i128 - a[1] as i128 * b[0] as i128)
        .try_into()
        .expect("ray coordinate overflow")
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// 0 for the upper half plane together with the positive x-axis, 1 otherwise.
fn half(v: Ray) -> u8 {
    if v[1] > 0 || (v[1] == 0 && v[0] > 0) {
        0
    } else {
        1
    }
}

/// Rays listed counterclockwise; the node `D_i ∩ D_{i+1}` is the cone on `(v_i, v_{i+1})`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Ray>", into = "Vec<Ray>")]
pub struct Fan2D {
    rays: Vec<Ray>,
}

impl TryFrom<Vec<Ray>> for Fan2D {
    type Error = Error;
    fn try_from(rays: Vec<Ray>) -> Result<Self> {
        Fan2D::new(rays)
    }
}

impl From<Fan2D> for Vec<Ray> {
    fn from(f: Fan2D) -> Self {
        f.rays
    }
}

impl Fan2D {
    pub fn new(rays: Vec<Ray>) -> Result<Self> {
        let n = rays.len();
        if n < 3 {
            return Err(Error::InvalidFan(format!("need at least 3 rays, got {n}")));
        }
        for (i, &v) in rays.iter().enumerate() {
            if gcd(v[0], v[1]) != 1 {
                return Err(Error::InvalidFan(format!(
                    "ray {} = {:?} is not primitive",
                    i + 1,
                    v
                )));
            }
        }
        for i in 0..n {
            let d = det(rays[i], rays[(i + 1) % n]);
            if d != 1 {
                return Err(Error::InvalidFan(format!(
                    "det(v{}, v{}) = {d}, expected 1",
                    i + 1,
                    (i + 1) % n + 1
                )));
            }
        }
        let winding = (0..n)
            .filter(|&i| half(rays[i]) == 1 && half(rays[(i + 1) % n]) == 0)
            .count();
        if winding != 1 {
            return Err(Error::InvalidFan(format!(
                "rays wind {winding} times around the origin"
            )));
        }
        Ok(Fan2D { rays })
    }

    pub fn rays(&self) -> &[Ray] {
        &self.rays
    }

    pub fn len(&self) -> usize {
        self.rays.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rays.is_empty()
    }

    fn ray(&self, i: isize) -> Ray {
        let n = self.rays.len() as isize;
        self.rays[i.rem_euclid(n) as usize]
    }

    /// `d_i = D̄_i²`, from `v_{i-1} + v_{i+1} = -d_i v_i`.
    pub fn selfintersections(&self) -> Vec<i64> {
        (0..self.len() as isize)
            .map(|i| -det(self.ray(i - 1), self.ray(i + 1)))
            .collect()
    }

    /// Blow up the node between components `i` and `i+1` (0-based); the new ray sits at `i+1`.
    pub fn corner_blowup(&self, i: usize) -> Fan2D {
        let n = self.len();
        assert!(i < n, "component index {i} out of range");
        let a = self.rays[i];
        let b = self.rays[(i + 1) % n];
        let mut rays = self.rays.clone();
        rays.insert(i + 1, [a[0] + b[0], a[1] + b[1]]);
        Fan2D::new(rays).expect("corner blowup of a smooth fan is smooth")
    }

    /// Remove ray `i` when it is the sum of its neighbours (a `(-1)`-component).
    pub fn contract(&self, i: usize) -> Result<Fan2D> {
        let n = self.len();
        if n <= 3 || i >= n {
            return Err(Error::InvalidFan(format!(
                "cannot contract ray {i} of an {n}-ray fan"
            )));
        }
        let p = self.ray(i as isize - 1);
        let q = self.ray(i as isize + 1);
        if self.rays[i] != [p[0] + q[0], p[1] + q[1]] {
            return Err(Error::InvalidFan(format!(
                "component {i} is not a (-1)-curve"
            )));
        }
        let mut rays = self.rays.clone();
        rays.remove(i);
        Fan2D::new(rays)
    }
}

/// The fan with prescribed self-intersection sequence, starting from `(1,0), (0,1)`.
pub fn fan_from_selfintersections(d: &[i64]) -> Result<Fan2D> {
    let n = d.len();
    if n < 3 {
        return Err(Error::UnrealizableSequence(format!(
            "{d:?}: need at least 3 entries"
        )));
    }
    let mut rays: Vec<Ray> = vec![[1, 0], [0, 1]];
    let step = |prev: Ray, cur: Ray, di: i64| -> Option<Ray> {
        let x = di
            .checked_mul(cur[0])?
            .checked_neg()?
            .checked_sub(prev[0])?;
        let y = di
            .checked_mul(cur[1])?
            .checked_neg()?
            .checked_sub(prev[1])?;
        Some([x, y])
    };
    let overflow = || Error::UnrealizableSequence(format!("{d:?}: rays grow without bound"));
    for i in 1..n {
        let next = step(rays[i - 1], rays[i], d[i]).ok_or_else(overflow)?;
        rays.push(next);
    }
    let closing = rays.pop().unwrap();
    let wrap = step(rays[n - 1], rays[0], d[0]).ok_or_else(overflow)?;
    if closing != [1, 0] || wrap != [0, 1] {
        return Err(Error::UnrealizableSequence(format!(
            "{d:?}: propagation does not close"
        )));
    }
    Fan2D::new(rays).map_err(|e| Error::UnrealizableSequence(format!("{d:?}: {e}")))
}

pub fn selfintersections(f: &Fan2D) -> Vec<i64> {
    f.selfintersections()
}

pub fn corner_blowup(f: &Fan2D, i: usize) -> Fan2D {
    f.corner_blowup(i)
}

/// Picard lattice of the toric surface, with basis `D̄_1, …, D̄_{n-2}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ToricPic {
    pub lattice: IntLattice,
    pub boundary: Vec<ClassVec>,
    /// Images of the dual basis of `M` in `Z^n`: `(⟨e*, v_i⟩)_i` for `e* = x, y`.
    pub relations: [Vec<i64>; 2],
}

pub fn toric_pic(f: &Fan2D) -> ToricPic {
    let n = f.len();
    let r = n - 2;
    let d = f.selfintersections();
    let mut gram = vec![vec![0i64; r]; r];
    for i in 0..r {
        gram[i][i] = d[i];
        if i + 1 < r {
            gram[i][i + 1] = 1;
            gram[i + 1][i] = 1;
        }
    }
    let labels = (1..=r).map(|i| format!("B{i}")).collect();
    let lattice = IntLattice::new(gram, labels).expect("symmetric");
    let v = f.rays();
    let mut boundary: Vec<ClassVec> = (0..r).map(|i| ClassVec::unit(r, i)).collect();
    boundary.push(ClassVec((0..r).map(|i| -det(v[i], v[n - 1])).collect()));
    boundary.push(ClassVec((0..r).map(|i| -det(v[n - 2], v[i])).collect()));
    let relations = [
        v.iter().map(|r| r[0]).collect(),
        v.iter().map(|r| r[1]).collect(),
    ];
    ToricPic {
        lattice,
        boundary,
        relations,
    }
}

impl ToricPic {
    pub fn rank(&self) -> usize {
        self.lattice.rank()
    }

    /// Class of `Σ a_i D̄_i`.
    pub fn class_of(&self, coeffs: &[i64]) -> ClassVec {
        let r = self.rank();
        let mut out = ClassVec::zero(r);
        for (a, b) in coeffs.iter().zip(&self.boundary) {
            out = &out + &b.scale(*a);
        }
        out
    }
}
