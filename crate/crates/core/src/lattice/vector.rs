use std::fmt;
use std::ops::{Add, Index, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Exact rational scalar.
pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Integer coordinates of a class in a lattice basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ClassVec(pub Vec<i64>);

impl ClassVec {
    pub fn zero(rank: usize) -> Self {
        ClassVec(vec![0; rank])
    }

    pub fn unit(rank: usize, i: usize) -> Self {
        let mut v = vec![0; rank];
        v[i] = 1;
        ClassVec(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn scale(&self, k: i64) -> Self {
        ClassVec(self.0.iter().map(|&c| checked_mul(c, k)).collect())
    }

    pub fn to_q(&self) -> QVec {
        QVec(self.0.iter().map(|&c| q(c)).collect())
    }
}

pub(crate) fn checked_mul(a: i64, b: i64) -> i64 {
    a.checked_mul(b).expect("lattice coordinate overflow")
}

pub(crate) fn checked_add(a: i64, b: i64) -> i64 {
    a.checked_add(b).expect("lattice coordinate overflow")
}

impl Index<usize> for ClassVec {
    type Output = i64;
    fn index(&self, i: usize) -> &i64 {
        &self.0[i]
    }
}

impl Add for &ClassVec {
    type Output = ClassVec;
    fn add(self, rhs: &ClassVec) -> ClassVec {
        assert_eq!(self.len(), rhs.len());
        ClassVec(
            self.0
                .iter()
                .zip(&rhs.0)
                .map(|(&a, &b)| checked_add(a, b))
                .collect(),
        )
    }
}

impl Sub for &ClassVec {
    type Output = ClassVec;
    fn sub(self, rhs: &ClassVec) -> ClassVec {
        assert_eq!(self.len(), rhs.len());
        ClassVec(
            self.0
                .iter()
                .zip(&rhs.0)
                .map(|(&a, &b)| a.checked_sub(b).expect("lattice coordinate overflow"))
                .collect(),
        )
    }
}

impl Add for ClassVec {
    type Output = ClassVec;
    fn add(self, rhs: ClassVec) -> ClassVec {
        &self + &rhs
    }
}

impl Sub for ClassVec {
    type Output = ClassVec;
    fn sub(self, rhs: ClassVec) -> ClassVec {
        &self - &rhs
    }
}

impl Neg for &ClassVec {
    type Output = ClassVec;
    fn neg(self) -> ClassVec {
        ClassVec(self.0.iter().map(|&c| -c).collect())
    }
}

impl Neg for ClassVec {
    type Output = ClassVec;
    fn neg(self) -> ClassVec {
        -&self
    }
}

impl From<Vec<i64>> for ClassVec {
    fn from(v: Vec<i64>) -> Self {
        ClassVec(v)
    }
}

impl fmt::Display for ClassVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// A class with rational coordinates (a point of `Pic ⊗ Q`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QVec(pub Vec<Q>);

impl QVec {
    pub fn zero(rank: usize) -> Self {
        QVec(vec![Q::zero(); rank])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }

    pub fn scale(&self, k: &Q) -> QVec {
        QVec(self.0.iter().map(|c| c * k).collect())
    }

    pub fn add_scaled(&self, k: &Q, other: &QVec) -> QVec {
        assert_eq!(self.len(), other.len());
        QVec(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + k * b)
                .collect(),
        )
    }

    /// Smallest positive integer multiple with integral coordinates, and that multiplier.
    pub fn clear_denominators(&self) -> (Vec<BigInt>, BigInt) {
        let mut den = BigInt::one();
        for c in &self.0 {
            den = den.lcm(c.denom());
        }
        let coords = self
            .0
            .iter()
            .map(|c| (c * Q::from_integer(den.clone())).to_integer())
            .collect();
        (coords, den)
    }

    /// Primitive integral class on the same ray, if coordinates fit in `i64`.
    pub fn primitive_class(&self) -> Option<ClassVec> {
        let (coords, _) = self.clear_denominators();
        let mut g = BigInt::zero();
        for c in &coords {
            g = g.gcd(c);
        }
        if g.is_zero() {
            return Some(ClassVec::zero(self.len()));
        }
        coords
            .iter()
            .map(|c| (c / &g).to_i64())
            .collect::<Option<Vec<_>>>()
            .map(ClassVec)
    }

    pub fn to_class(&self) -> Option<ClassVec> {
        self.0
            .iter()
            .map(|c| {
                if c.is_integer() {
                    c.to_integer().to_i64()
                } else {
                    None
                }
            })
            .collect::<Option<Vec<_>>>()
            .map(ClassVec)
    }

    pub fn abs_max(&self) -> Q {
        self.0.iter().map(|c| c.abs()).max().unwrap_or_else(Q::zero)
    }
}

impl Index<usize> for QVec {
    type Output = Q;
    fn index(&self, i: usize) -> &Q {
        &self.0[i]
    }
}

impl Add for &QVec {
    type Output = QVec;
    fn add(self, rhs: &QVec) -> QVec {
        assert_eq!(self.len(), rhs.len());
        QVec(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &QVec {
    type Output = QVec;
    fn sub(self, rhs: &QVec) -> QVec {
        assert_eq!(self.len(), rhs.len());
        QVec(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &QVec {
    type Output = QVec;
    fn neg(self) -> QVec {
        QVec(self.0.iter().map(|c| -c).collect())
    }
}

impl From<&ClassVec> for QVec {
    fn from(v: &ClassVec) -> Self {
        v.to_q()
    }
}

impl From<ClassVec> for QVec {
    fn from(v: ClassVec) -> Self {
        v.to_q()
    }
}

impl fmt::Display for QVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// `floor(sqrt(x))` for a nonnegative rational.
pub fn floor_sqrt(x: &Q) -> BigInt {
    if !x.is_positive() {
        return BigInt::zero();
    }
    let fl = x.floor().to_integer();
    // floor(sqrt(x)) == floor(sqrt(floor(x))) for x >= 0
    fl.sqrt()
}
