//! A divisible multiplicative group: `±1 × ∏ p^{Q} × ∏ t^{Q}` for primes `p` and formal symbols `t`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicU64, Ordering};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::lattice::Q;

static FRESH: AtomicU64 = AtomicU64::new(1);

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GmElem {
    negative: bool,
    primes: BTreeMap<u64, Q>,
    symbols: BTreeMap<String, Q>,
}

impl Default for GmElem {
    fn default() -> Self {
        Self::one()
    }
}

fn factor(mut n: u64) -> Vec<(u64, i64)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn add_exp<K: Ord + Clone>(map: &mut BTreeMap<K, Q>, k: &K, e: &Q) {
    let entry = map.entry(k.clone()).or_insert_with(Q::zero);
    *entry += e;
    if entry.is_zero() {
        map.remove(k);
    }
}

impl GmElem {
    pub fn one() -> Self {
        GmElem {
            negative: false,
            primes: BTreeMap::new(),
            symbols: BTreeMap::new(),
        }
    }

    pub fn minus_one() -> Self {
        GmElem {
            negative: true,
            ..Self::one()
        }
    }

    pub fn from_int(n: i64) -> Result<Self> {
        Self::from_rational(&Q::from_integer(BigInt::from(n)))
    }

    pub fn from_ratio(n: i64, d: i64) -> Result<Self> {
        if d == 0 {
            return Err(Error::Parse("zero denominator".into()));
        }
        Self::from_rational(&Q::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn from_rational(x: &Q) -> Result<Self> {
        if x.is_zero() {
            return Err(Error::Parse("0 is not invertible".into()));
        }
        let mut out = Self::one();
        out.negative = x.is_negative();
        let num = x
            .numer()
            .abs()
            .to_u64()
            .ok_or_else(|| Error::Parse(format!("{x}: numerator too large")))?;
        let den = x
            .denom()
            .to_u64()
            .ok_or_else(|| Error::Parse(format!("{x}: denominator too large")))?;
        for (p, e) in factor(num) {
            add_exp(&mut out.primes, &p, &Q::from_integer(BigInt::from(e)));
        }
        for (p, e) in factor(den) {
            add_exp(&mut out.primes, &p, &Q::from_integer(BigInt::from(-e)));
        }
        Ok(out)
    }

    pub fn symbol(name: &str) -> Self {
        let mut out = Self::one();
        out.symbols.insert(name.to_string(), Q::one());
        out
    }

    /// A new symbol independent of all previously issued fresh symbols.
    pub fn fresh() -> Self {
        let n = FRESH.fetch_add(1, Ordering::Relaxed);
        Self::symbol(&format!("gen{n}"))
    }

    pub fn is_one(&self) -> bool {
        !self.negative && self.primes.is_empty() && self.symbols.is_empty()
    }

    pub fn is_negative_unit(&self) -> bool {
        self.negative && self.primes.is_empty() && self.symbols.is_empty()
    }

    pub fn sign(&self) -> i64 {
        if self.negative {
            -1
        } else {
            1
        }
    }

    pub fn has_symbols(&self) -> bool {
        !self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &BTreeMap<String, Q> {
        &self.symbols
    }

    pub fn primes(&self) -> &BTreeMap<u64, Q> {
        &self.primes
    }

    pub fn mul(&self, other: &GmElem) -> GmElem {
        let mut out = self.clone();
        out.negative ^= other.negative;
        for (p, e) in &other.primes {
            add_exp(&mut out.primes, p, e);
        }
        for (s, e) in &other.symbols {
            add_exp(&mut out.symbols, s, e);
        }
        out
    }

    pub fn div(&self, other: &GmElem) -> GmElem {
        self.mul(&other.inv())
    }

    pub fn inv(&self) -> GmElem {
        GmElem {
            negative: self.negative,
            primes: self.primes.iter().map(|(k, v)| (*k, -v)).collect(),
            symbols: self.symbols.iter().map(|(k, v)| (k.clone(), -v)).collect(),
        }
    }

    pub fn pow(&self, k: i64) -> GmElem {
        if k == 0 {
            return Self::one();
        }
        let kq = Q::from_integer(BigInt::from(k));
        GmElem {
            negative: self.negative && k.is_odd(),
            primes: self.primes.iter().map(|(p, e)| (*p, e * &kq)).collect(),
            symbols: self
                .symbols
                .iter()
                .map(|(s, e)| (s.clone(), e * &kq))
                .collect(),
        }
    }

    /// `x^{a/b}`; fails only when `x` has sign `-1` and `b` is even.
    pub fn pow_q(&self, e: &Q) -> Result<GmElem> {
        if e.is_zero() {
            return Ok(Self::one());
        }
        let negative = if self.negative {
            if e.denom().is_even() {
                return Err(Error::Obstruction(format!(
                    "({self})^({e}) has no exact value"
                )));
            }
            e.numer().is_odd()
        } else {
            false
        };
        Ok(GmElem {
            negative,
            primes: self.primes.iter().map(|(p, x)| (*p, x * e)).collect(),
            symbols: self
                .symbols
                .iter()
                .map(|(s, x)| (s.clone(), x * e))
                .collect(),
        })
    }

    pub fn root(&self, d: i64) -> Result<GmElem> {
        self.pow_q(&Q::new(BigInt::one(), BigInt::from(d)))
    }

    /// The rational value when there are no symbols and all exponents are integers.
    pub fn to_rational(&self) -> Option<Q> {
        if !self.symbols.is_empty() {
            return None;
        }
        let mut out = Q::one();
        for (p, e) in &self.primes {
            if !e.is_integer() {
                return None;
            }
            let k = e.to_integer().to_i32()?;
            let base = Q::from_integer(BigInt::from(*p));
            out *= if k >= 0 {
                num_traits::pow(base, k as usize)
            } else {
                num_traits::pow(base.recip(), (-k) as usize)
            };
        }
        if self.negative {
            out = -out;
        }
        Some(out)
    }

    /// Product of the given elements.
    pub fn product<'a, I: IntoIterator<Item = &'a GmElem>>(it: I) -> GmElem {
        it.into_iter().fold(Self::one(), |acc, x| acc.mul(x))
    }

    /// Replace every symbol by an independent fresh one.
    pub fn with_fresh_symbols(&self, renames: &mut BTreeMap<String, String>) -> GmElem {
        let mut out = self.clone();
        out.symbols = self
            .symbols
            .iter()
            .map(|(s, e)| {
                let new = renames.entry(s.clone()).or_insert_with(|| {
                    let g = GmElem::fresh();
                    g.symbols.keys().next().unwrap().clone()
                });
                (new.clone(), e.clone())
            })
            .collect();
        out
    }
}

fn fmt_exp(base: &str, e: &Q) -> String {
    if e.is_one() {
        base.to_string()
    } else if e.is_integer() {
        format!("{base}^{e}")
    } else {
        format!("{base}^({e})")
    }
}

impl fmt::Display for GmElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        let unsigned = Self {
            negative: false,
            primes: self.primes.clone(),
            symbols: BTreeMap::new(),
        };
        if let Some(r) = unsigned.to_rational() {
            if !r.is_one() {
                parts.push(r.to_string());
            }
        } else {
            for (p, e) in &self.primes {
                parts.push(fmt_exp(&p.to_string(), e));
            }
        }
        for (s, e) in &self.symbols {
            parts.push(fmt_exp(s, e));
        }
        let body = if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        };
        if self.negative {
            write!(f, "-{body}")
        } else {
            write!(f, "{body}")
        }
    }
}

#[derive(Serialize, Deserialize)]
struct GmJson {
    sign: i64,
    #[serde(default)]
    primes: BTreeMap<String, String>,
    #[serde(default)]
    symbols: BTreeMap<String, String>,
}

impl Serialize for GmElem {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GmJson {
            sign: self.sign(),
            primes: self
                .primes
                .iter()
                .map(|(p, e)| (p.to_string(), e.to_string()))
                .collect(),
            symbols: self
                .symbols
                .iter()
                .map(|(k, e)| (k.clone(), e.to_string()))
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for GmElem {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = GmJson::deserialize(d)?;
        let negative = match j.sign {
            1 => false,
            -1 => true,
            other => {
                return Err(D::Error::custom(format!(
                    "sign must be 1 or -1, got {other}"
                )))
            }
        };
        let mut out = GmElem {
            negative,
            ..GmElem::one()
        };
        for (p, e) in j.primes {
            let pv: u64 = p.parse().map_err(D::Error::custom)?;
            let f = factor(pv);
            if f.len() != 1 || f[0].1 != 1 {
                return Err(D::Error::custom(format!("{p} is not prime")));
            }
            let ev = Q::from_str(&e).map_err(|_| D::Error::custom(format!("bad exponent {e}")))?;
            add_exp(&mut out.primes, &pv, &ev);
        }
        for (s, e) in j.symbols {
            let ev = Q::from_str(&e).map_err(|_| D::Error::custom(format!("bad exponent {e}")))?;
            add_exp(&mut out.symbols, &s, &ev);
        }
        Ok(out)
    }
}
