//! Positive, nef, Mori and Tits cones: exact membership tests with certificates.

use std::collections::BTreeSet;
use std::sync::Mutex;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{
    enumerate_by_functional, enumerate_with_square, floor_sqrt, q, rank_i64, solve_q, ClassVec,
    IntLattice, QVec, Q,
};
use crate::lp::{cone_membership, ConeMembership};
use crate::pair::PairModel;
use crate::period::phi_y;

/// Why a class failed the ample test.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum AmpleFailure {
    NonPositiveSquare {
        certificate: QVec,
    },
    WrongComponent,
    Boundary {
        component: usize,
        certificate: ClassVec,
    },
    MinusOneWall {
        certificate: ClassVec,
    },
    MinusTwoWall {
        certificate: ClassVec,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum AmpleResult {
    Ample { bound: i64 },
    NotAmple(AmpleFailure),
}

impl AmpleResult {
    pub fn is_ample(&self) -> bool {
        matches!(self, AmpleResult::Ample { .. })
    }

    pub fn certificate(&self) -> Option<ClassVec> {
        match self {
            AmpleResult::Ample { .. } => None,
            AmpleResult::NotAmple(f) => match f {
                AmpleFailure::NonPositiveSquare { certificate } => certificate.primitive_class(),
                AmpleFailure::WrongComponent => None,
                AmpleFailure::Boundary { certificate, .. }
                | AmpleFailure::MinusOneWall { certificate }
                | AmpleFailure::MinusTwoWall { certificate } => Some(certificate.clone()),
            },
        }
    }
}

impl serde::Serialize for QVec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        v.serialize(s)
    }
}

#[derive(Debug, Default, Clone)]
struct Cache {
    minus_one: Option<(i64, Vec<ClassVec>)>,
    minus_two: Option<(i64, Vec<ClassVec>)>,
}

/// Membership oracle for the cones of one pair, anchored at an ample class.
#[derive(Debug)]
pub struct ConeOracle {
    pair: PairModel,
    ample0: ClassVec,
    generic: bool,
    dperp: Vec<ClassVec>,
    cache: Mutex<Cache>,
}

impl Clone for ConeOracle {
    fn clone(&self) -> Self {
        ConeOracle {
            pair: self.pair.clone(),
            ample0: self.ample0.clone(),
            generic: self.generic,
            dperp: self.dperp.clone(),
            cache: Mutex::new(self.cache.lock().unwrap().clone()),
        }
    }
}

impl ConeOracle {
    pub fn new(pair: PairModel) -> Result<Self> {
        let ample0 = pair.certified_ample()?;
        Ok(Self::with_ample(pair, ample0))
    }

    /// Trusts `ample0` to be ample.
    pub fn with_ample(pair: PairModel, ample0: ClassVec) -> Self {
        let generic = pair.is_generic();
        let dperp = pair.pic().orthogonal_complement(pair.boundary());
        ConeOracle {
            pair,
            ample0,
            generic,
            dperp,
            cache: Mutex::new(Cache::default()),
        }
    }

    /// Oracle for the generic deformation (fresh symbols); classes use the same coordinates.
    pub fn generic(pair: &PairModel) -> Result<Self> {
        if pair.is_generic() {
            Self::new(pair.clone())
        } else {
            Self::new(pair.generic_deformation())
        }
    }

    pub fn pair(&self) -> &PairModel {
        &self.pair
    }

    pub fn ample0(&self) -> &ClassVec {
        &self.ample0
    }

    pub fn is_generic(&self) -> bool {
        self.generic
    }

    pub fn lattice(&self) -> &IntLattice {
        self.pair.pic()
    }

    /// Hermite basis of `D^⊥`.
    pub fn dperp(&self) -> &[ClassVec] {
        &self.dperp
    }

    pub fn in_positive_cone(&self, x: &QVec) -> bool {
        let l = self.lattice();
        l.square_q(x).is_positive() && l.inner_qc(x, &self.ample0).is_positive()
    }

    /// In the closure of the positive cone: `x² ≥ 0`, `x·A ≥ 0`.
    pub fn in_positive_closure(&self, x: &QVec) -> bool {
        let l = self.lattice();
        !l.square_q(x).is_negative() && !l.inner_qc(x, &self.ample0).is_negative()
    }

    /// `floor(sqrt(-s · ((A·x)²/x² - A²)))`: the largest `v·A` of a class of square `s` orthogonal to a point of `[A, x]`.
    pub fn segment_bound(&self, x: &QVec, s: i64) -> i64 {
        let l = self.lattice();
        let ax = l.inner_qc(x, &self.ample0);
        let x2 = l.square_q(x);
        let a2 = q(l.square(&self.ample0));
        let t = &ax * &ax / x2 - a2;
        floor_sqrt(&(t * q(-s)))
            .to_i64()
            .expect("segment bound overflow")
    }

    /// Classes with `v² = -1`, `K·v = -1`, `1 ≤ v·A ≤ bound`.
    pub fn minus_one_classes(&self, bound: i64) -> Vec<ClassVec> {
        let l = self.lattice();
        let a = &self.ample0;
        {
            let c = self.cache.lock().unwrap();
            if let Some((b, list)) = &c.minus_one {
                if *b >= bound {
                    return list
                        .iter()
                        .filter(|v| l.inner(v, a) <= bound)
                        .cloned()
                        .collect();
                }
            }
        }
        let k = self.pair.canonical();
        let list: Vec<ClassVec> = enumerate_with_square(l, -1, a, 1, bound)
            .expect("ample class has positive square")
            .into_iter()
            .filter(|v| l.inner(v, k) == -1)
            .collect();
        self.cache.lock().unwrap().minus_one = Some((bound, list.clone()));
        list
    }

    /// Classes in `D^⊥` with `v² = -2` and `1 ≤ v·A ≤ bound`.
    pub fn minus_two_classes(&self, bound: i64) -> Vec<ClassVec> {
        let l = self.lattice();
        let a = &self.ample0;
        {
            let c = self.cache.lock().unwrap();
            if let Some((b, list)) = &c.minus_two {
                if *b >= bound {
                    return list
                        .iter()
                        .filter(|v| l.inner(v, a) <= bound)
                        .cloned()
                        .collect();
                }
            }
        }
        let list = self.dperp_vectors(-2, 1, bound);
        self.cache.lock().unwrap().minus_two = Some((bound, list.clone()));
        list
    }

    /// Vectors of `D^⊥` with square `s` and `lo ≤ v·A ≤ hi`.
    pub fn dperp_vectors(&self, s: i64, lo: i64, hi: i64) -> Vec<ClassVec> {
        if self.dperp.is_empty() {
            return Vec::new();
        }
        let l = self.lattice();
        let sub = IntLattice::from_gram(l.gram_of(&self.dperp)).expect("symmetric");
        let f: Vec<i64> = self
            .dperp
            .iter()
            .map(|b| l.inner(b, &self.ample0))
            .collect();
        let ys = enumerate_by_functional(&sub, &f, s, lo, hi)
            .expect("D-perp is negative definite off the ample class");
        let rank = l.rank();
        let mut out: Vec<ClassVec> = ys
            .into_iter()
            .map(|y| {
                y.coords()
                    .iter()
                    .zip(&self.dperp)
                    .fold(ClassVec::zero(rank), |acc, (&c, b)| &acc + &b.scale(c))
            })
            .collect();
        out.sort_by(|a, b| {
            l.inner(a, &self.ample0)
                .cmp(&l.inner(b, &self.ample0))
                .then_with(|| a.cmp(b))
        });
        out
    }

    fn effective_minus_two(&self, bound: i64) -> Vec<ClassVec> {
        if self.generic {
            return Vec::new();
        }
        self.minus_two_classes(bound)
            .into_iter()
            .filter(|v| phi_y(&self.pair, v).map(|g| g.is_one()).unwrap_or(false))
            .collect()
    }

    /// Is `x` in the interior of the nef cone?
    pub fn ample_test(&self, x: &QVec) -> AmpleResult {
        self.ample_checks(x, 1, |o| o.minus_one_crossing(x, true).into_iter().next())
    }

    /// As [`ConeOracle::ample_test`], with the `(-1)`-classes enumerated around `A` up to `factor` times the segment bound.
    pub fn ample_test_scaled(&self, x: &QVec, factor: i64) -> AmpleResult {
        let l = self.lattice();
        self.ample_checks(x, factor, |o| {
            o.minus_one_classes(o.segment_bound(x, -1) * factor)
                .into_iter()
                .find(|v| !l.inner_qc(x, v).is_positive())
        })
    }

    fn ample_checks(
        &self,
        x: &QVec,
        factor: i64,
        minus_one_wall: impl FnOnce(&Self) -> Option<ClassVec>,
    ) -> AmpleResult {
        let l = self.lattice();
        if !l.square_q(x).is_positive() {
            return AmpleResult::NotAmple(AmpleFailure::NonPositiveSquare {
                certificate: x.clone(),
            });
        }
        if !l.inner_qc(x, &self.ample0).is_positive() {
            return AmpleResult::NotAmple(AmpleFailure::WrongComponent);
        }
        for (i, d) in self.pair.boundary().iter().enumerate() {
            if !l.inner_qc(x, d).is_positive() {
                return AmpleResult::NotAmple(AmpleFailure::Boundary {
                    component: i,
                    certificate: d.clone(),
                });
            }
        }
        if let Some(v) = minus_one_wall(self) {
            return AmpleResult::NotAmple(AmpleFailure::MinusOneWall { certificate: v });
        }
        let b1 = self.segment_bound(x, -1) * factor;
        let b2 = self.segment_bound(x, -2) * factor;
        for v in self.effective_minus_two(b2) {
            if !l.inner_qc(x, &v).is_positive() {
                return AmpleResult::NotAmple(AmpleFailure::MinusTwoWall { certificate: v });
            }
        }
        AmpleResult::Ample { bound: b1.max(b2) }
    }

    /// The `(-1)`-classes `v` with `v·A ≥ 1` and `v·x ≤ 0` (or `< 0` when not `strict`), by increasing `v·A`.
    ///
    /// `[A, x]` is cut at points `mA + X` or `A + mX` (with `X` an integral multiple of `x`) into pieces of hyperbolic
    /// length about one. A wall crossing a piece is orthogonal to one of its points, so its pairing with a
    /// reference point `h` of the piece is bounded by the larger of the two endpoint bounds.
    fn minus_one_crossing(&self, x: &QVec, strict: bool) -> Vec<ClassVec> {
        let l = self.lattice();
        let a = &self.ample0;
        let (num, _) = x.clear_denominators();
        let xi = ClassVec(
            num.iter()
                .map(|c| c.to_i64().expect("class coordinate overflow"))
                .collect(),
        );
        let (a2, x2) = (l.square(a) as f64, l.square(&xi) as f64);
        let scale = (x2 / a2).sqrt();
        let dist = (l.inner(a, &xi) as f64 / (a2 * x2).sqrt()).max(1.0).acosh();
        let pieces = dist.ceil().max(1.0) as usize;
        let point = |s: f64| -> ClassVec {
            let c = (dist - s).sinh() / s.sinh() * scale;
            if c >= 1.0 {
                &a.scale(c.round() as i64) + &xi
            } else {
                a + &xi.scale((1.0 / c).round() as i64)
            }
        };
        let mut cuts: Vec<QVec> = vec![a.to_q()];
        cuts.extend((1..pieces).map(|j| point(dist * j as f64 / pieces as f64).to_q()));
        cuts.push(x.clone());
        let k = self.pair.canonical();
        let mut found = BTreeSet::new();
        for j in 0..pieces {
            let h = if pieces == 1 {
                &a.scale(scale.round().max(1.0) as i64) + &xi
            } else {
                point(dist * (j as f64 + 0.5) / pieces as f64)
            };
            let bound =
                reference_bound(l, &h, &cuts[j], -1).max(reference_bound(l, &h, &cuts[j + 1], -1));
            for v in enumerate_with_square(l, -1, &h, -bound, bound)
                .expect("reference class has positive square")
            {
                if l.inner(&v, k) != -1 || l.inner(&v, a) < 1 {
                    continue;
                }
                let t = l.inner_qc(x, &v);
                if (strict && !t.is_positive()) || t.is_negative() {
                    found.insert(v);
                }
            }
        }
        let mut out: Vec<ClassVec> = found.into_iter().collect();
        out.sort_by_key(|v| (l.inner(v, a), v.clone()));
        out
    }

    /// Every negative class with `1 ≤ v·A ≤ bound` on which `x` is not positive.
    pub fn violations_up_to(&self, x: &QVec, bound: i64) -> Vec<ClassVec> {
        let l = self.lattice();
        self.minus_one_classes(bound)
            .into_iter()
            .chain(self.effective_minus_two(bound))
            .filter(|v| !l.inner_qc(x, v).is_positive())
            .collect()
    }

    /// `x` is nef: in the closed positive cone and nonnegative on every negative curve class.
    ///
    /// Requires `x² > 0` so that the wall search is finite.
    pub fn nef_test(&self, x: &QVec) -> Option<bool> {
        let l = self.lattice();
        if !l.square_q(x).is_positive() {
            return None;
        }
        if !l.inner_qc(x, &self.ample0).is_positive() {
            return Some(false);
        }
        if self
            .pair
            .boundary()
            .iter()
            .any(|d| l.inner_qc(x, d).is_negative())
        {
            return Some(false);
        }
        let b2 = self.segment_bound(x, -2);
        let bad = !self.minus_one_crossing(x, false).is_empty()
            || self
                .effective_minus_two(b2)
                .iter()
                .any(|v| l.inner_qc(x, v).is_negative());
        Some(!bad)
    }
}

/// `floor(sqrt(-s · ((h·y)²/y² - h²)))` for an integral reference `h` and a target `y`.
fn reference_bound(l: &IntLattice, h: &ClassVec, y: &QVec, s: i64) -> i64 {
    let hy = l.inner_qc(y, h);
    let t = &hy * &hy / l.square_q(y) - q(l.square(h));
    floor_sqrt(&(t * q(-s)))
        .to_i64()
        .expect("segment bound overflow")
}

/// `x = P + Σ a_i N_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Zariski {
    pub positive: QVec,
    pub support: Vec<ClassVec>,
    pub coefficients: Vec<Q>,
}

impl Zariski {
    pub fn negative(&self) -> QVec {
        let rank = self.positive.len();
        self.support
            .iter()
            .zip(&self.coefficients)
            .fold(QVec::zero(rank), |acc, (c, a)| acc.add_scaled(a, &c.to_q()))
    }
}

/// `P` on a support: subtract the combination of `support` making `P` orthogonal to it.
pub fn project_off(l: &IntLattice, x: &QVec, support: &[ClassVec]) -> Option<(QVec, Vec<Q>)> {
    if support.is_empty() {
        return Some((x.clone(), Vec::new()));
    }
    let g: Vec<Vec<Q>> = support
        .iter()
        .map(|a| support.iter().map(|b| q(l.inner(a, b))).collect())
        .collect();
    let rhs: Vec<Q> = support.iter().map(|c| l.inner_qc(x, c)).collect();
    let a = solve_q(&g, &rhs)?;
    let p = support
        .iter()
        .zip(&a)
        .fold(x.clone(), |acc, (c, ai)| acc.add_scaled(&-ai, &c.to_q()));
    Some((p, a))
}

pub fn is_negative_definite(l: &IntLattice, vs: &[ClassVec]) -> bool {
    let g: Vec<Vec<i64>> = l
        .gram_of(vs)
        .iter()
        .map(|r| r.iter().map(|x| -x).collect())
        .collect();
    crate::lattice::is_positive_definite(&g)
}

/// Zariski decomposition relative to the candidate curves `negatives` (boundary components of negative square are added).
pub fn zariski_decompose(o: &ConeOracle, x: &QVec, negatives: &[ClassVec]) -> Result<Zariski> {
    let l = o.lattice();
    let mut candidates: Vec<ClassVec> = Vec::new();
    let mut seen = BTreeSet::new();
    for c in negatives
        .iter()
        .chain(o.pair().boundary().iter().filter(|d| l.square(d) < 0))
    {
        if seen.insert(c.clone()) {
            candidates.push(c.clone());
        }
    }
    let mut support: Vec<ClassVec> = Vec::new();
    for _ in 0..=l.rank() + 1 {
        let (p, a) = project_off(l, x, &support)
            .ok_or_else(|| Error::NonConvergence("support Gram matrix is singular".into()))?;
        let grow: Vec<ClassVec> = candidates
            .iter()
            .filter(|c| !support.contains(c) && l.inner_qc(&p, c).is_negative())
            .cloned()
            .collect();
        if grow.is_empty() {
            if a.iter().any(|ai| ai.is_negative()) {
                return Err(Error::NonConvergence(
                    "negative coefficient in the negative part".into(),
                ));
            }
            return Ok(Zariski {
                positive: p,
                support,
                coefficients: a,
            });
        }
        support.extend(grow);
        if !is_negative_definite(l, &support) {
            return Err(Error::NonConvergence(
                "support is not negative definite; the candidate list is not a set of curves"
                    .into(),
            ));
        }
    }
    Err(Error::NonConvergence(format!(
        "no decomposition within {} steps",
        l.rank() + 1
    )))
}

/// Three-valued answer of the Tits cone semidecision.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "answer", rename_all = "snake_case")]
pub enum TitsAnswer {
    Inside,
    /// A nef class `u` with `u·D_i = 0` and `u·x < 0`.
    Outside {
        certificate: QVec,
    },
    Unknown {
        bound: i64,
    },
}

/// Is `x` in the closure of `NE(Y_gen) + span(D_i)`? `o` should be a generic oracle.
pub fn tits_membership(o: &ConeOracle, x: &QVec, bound: i64) -> TitsAnswer {
    let l = o.lattice();
    let p = o.pair();
    if o.in_positive_closure(x) {
        return TitsAnswer::Inside;
    }
    let coords = |v: &QVec| v.0.clone();
    let mut gens: Vec<Vec<Q>> = Vec::new();
    let a = &o.ample0;
    gens.push(coords(&a.to_q()));
    let a2 = q(l.square(a));
    let perp = l.orthogonal_complement(std::slice::from_ref(a));
    for u in &perp {
        let u2 = q(-l.square(u));
        let c = Q::from_integer(floor_sqrt(&(&u2 / &a2)) + BigInt::from(1));
        for sign in [1, -1] {
            let z = a.to_q().scale(&c).add_scaled(&q(sign), &u.to_q());
            debug_assert!(o.in_positive_closure(&z));
            gens.push(coords(&z));
        }
    }
    for v in o.minus_one_classes(bound) {
        gens.push(coords(&v.to_q()));
    }
    let lines: Vec<Vec<Q>> = p.boundary().iter().map(|d| coords(&d.to_q())).collect();
    match cone_membership(&x.0, &gens, &lines) {
        ConeMembership::Inside(..) => return TitsAnswer::Inside,
        ConeMembership::Separated(y) => {
            if let Some(u) = functional_to_class(l, &y) {
                if certifies_outside(o, &u, x) {
                    return TitsAnswer::Outside { certificate: u };
                }
            }
        }
    }
    let total = p.anticanonical().to_q();
    let mut candidates = vec![total];
    if let Some(proj) = boundary_projection(l, p.boundary(), &a.to_q()) {
        candidates.push(proj);
    }
    for u in candidates {
        if certifies_outside(o, &u, x) {
            return TitsAnswer::Outside { certificate: u };
        }
    }
    TitsAnswer::Unknown { bound }
}

fn functional_to_class(l: &IntLattice, y: &[Q]) -> Option<QVec> {
    let g: Vec<Vec<Q>> = l
        .gram()
        .iter()
        .map(|r| r.iter().map(|&x| q(x)).collect())
        .collect();
    solve_q(&g, y).map(QVec)
}

fn boundary_projection(l: &IntLattice, boundary: &[ClassVec], a: &QVec) -> Option<QVec> {
    let rows: Vec<Vec<i64>> = boundary.iter().map(|d| d.0.clone()).collect();
    let r = rank_i64(&rows);
    let mut basis: Vec<ClassVec> = Vec::new();
    for d in boundary {
        let mut trial: Vec<Vec<i64>> = basis.iter().map(|b| b.0.clone()).collect();
        trial.push(d.0.clone());
        if rank_i64(&trial) > basis.len() {
            basis.push(d.clone());
        }
        if basis.len() == r {
            break;
        }
    }
    let g: Vec<Vec<Q>> = basis
        .iter()
        .map(|x| basis.iter().map(|y| q(l.inner(x, y))).collect())
        .collect();
    let rhs: Vec<Q> = basis.iter().map(|d| l.inner_qc(a, d)).collect();
    let c = solve_q(&g, &rhs)?;
    Some(
        basis
            .iter()
            .zip(&c)
            .fold(a.clone(), |acc, (d, ci)| acc.add_scaled(&-ci, &d.to_q())),
    )
}

/// `u` nef on the generic pair, orthogonal to every `D_i`, and negative on `x`.
fn certifies_outside(o: &ConeOracle, u: &QVec, x: &QVec) -> bool {
    let l = o.lattice();
    let p = o.pair();
    if u.is_zero() || !l.inner_q(u, x).is_negative() {
        return false;
    }
    if p.boundary().iter().any(|d| !l.inner_qc(u, d).is_zero()) {
        return false;
    }
    if !o.in_positive_closure(u) {
        return false;
    }
    let u2 = l.square_q(u);
    if u2.is_zero() {
        // An isotropic class orthogonal to all D_i is nef when it is the total boundary.
        let total = p.anticanonical().to_q();
        return is_positive_multiple(u, &total);
    }
    o.nef_test(u) == Some(true)
}

fn is_positive_multiple(u: &QVec, v: &QVec) -> bool {
    let Some(i) = v.0.iter().position(|c| !c.is_zero()) else {
        return false;
    };
    let r = &u.0[i] / &v.0[i];
    r.is_positive() && v.scale(&r) == *u
}

pub fn in_positive_cone(o: &ConeOracle, x: &QVec) -> bool {
    o.in_positive_cone(x)
}

pub fn ample_test(o: &ConeOracle, x: &QVec) -> AmpleResult {
    o.ample_test(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pair::{build_pair, BlowupEntry};
    use crate::period::GmElem;
    use crate::toric::fan_from_selfintersections;

    fn p2_axes(c: [GmElem; 3]) -> PairModel {
        let [a, b, d] = c;
        build_pair(
            fan_from_selfintersections(&[1, 1, 1]).unwrap(),
            vec![
                BlowupEntry::point(0, a),
                BlowupEntry::point(1, b),
                BlowupEntry::point(2, d),
            ],
        )
        .unwrap()
    }

    fn generic() -> ConeOracle {
        ConeOracle::new(p2_axes([GmElem::fresh(), GmElem::fresh(), GmElem::fresh()])).unwrap()
    }

    fn cv(v: &[i64]) -> QVec {
        ClassVec(v.to_vec()).to_q()
    }

    #[test]
    fn positive_cone() {
        let o = generic();
        let a = o.ample0().to_q();
        assert!(o.in_positive_cone(&a));
        assert!(!o.in_positive_cone(&-&a));
        assert!(!o.in_positive_cone(&cv(&[1, -1, -1, -1])));
    }

    #[test]
    fn ample_examples() {
        let o = generic();
        assert!(o.ample_test(&cv(&[3, -1, -1, -1])).is_ample());
        let r = o.ample_test(&cv(&[0, 1, 0, 0]));
        assert_eq!(r.certificate(), Some(ClassVec(vec![0, 1, 0, 0])));
        let r = o.ample_test(&cv(&[1, 0, 0, 0]));
        let cert = r.certificate().unwrap();
        assert!(matches!(
            r,
            AmpleResult::NotAmple(AmpleFailure::MinusOneWall { .. })
        ));
        assert_eq!(o.lattice().inner(&ClassVec(vec![1, 0, 0, 0]), &cert), 0);
        assert_eq!(o.lattice().square(&cert), -1);
        // scaling invariance
        let x = cv(&[5, -1, -2, -1]);
        assert_eq!(
            o.ample_test(&x).is_ample(),
            o.ample_test(&x.scale(&q(7))).is_ample()
        );
    }

    #[test]
    fn nef_cone_grid_matches_mori_generators() {
        let o = generic();
        let l = o.lattice().clone();
        let curves: Vec<ClassVec> = vec![
            ClassVec(vec![0, 1, 0, 0]),
            ClassVec(vec![0, 0, 1, 0]),
            ClassVec(vec![0, 0, 0, 1]),
            ClassVec(vec![1, 0, -1, -1]),
            ClassVec(vec![1, -1, 0, -1]),
            ClassVec(vec![1, -1, -1, 0]),
            ClassVec(vec![1, -1, 0, 0]),
            ClassVec(vec![1, 0, -1, 0]),
            ClassVec(vec![1, 0, 0, -1]),
        ];
        for a in 1..=6 {
            for b in 0..=4 {
                for c in 0..=4 {
                    for d in 0..=4 {
                        let x = ClassVec(vec![a, -b, -c, -d]);
                        let want = l.square(&x) > 0 && curves.iter().all(|e| l.inner(&x, e) > 0);
                        assert_eq!(o.ample_test(&x.to_q()).is_ample(), want, "{x}");
                    }
                }
            }
        }
    }

    #[test]
    fn nongeneric_walls() {
        let m = GmElem::minus_one();
        let o = ConeOracle::new(p2_axes([m.clone(), m.clone(), m])).unwrap();
        assert_eq!(o.ample0(), &ClassVec(vec![4, -1, -1, -1]));
        let r = o.ample_test(&cv(&[3, -1, -1, -1]));
        assert!(!r.is_ample());
        assert_eq!(r.certificate(), Some(ClassVec(vec![1, -1, -1, -1])));
    }

    #[test]
    fn zariski_examples() {
        let o = generic();
        let l = o.lattice().clone();
        let negs = o.minus_one_classes(10);
        let a = o.ample0().to_q();
        let z = zariski_decompose(&o, &a, &negs).unwrap();
        assert_eq!(z.positive, a);
        assert!(z.support.is_empty());
        let e1 = cv(&[0, 1, 0, 0]);
        let z = zariski_decompose(&o, &e1, &negs).unwrap();
        assert!(z.positive.is_zero());
        assert_eq!(z.negative(), e1);
        let x = a.add_scaled(&q(2), &e1);
        let z = zariski_decompose(&o, &x, &negs).unwrap();
        assert_eq!(z.support, vec![ClassVec(vec![0, 1, 0, 0])]);
        assert_eq!(z.coefficients, vec![q(1)]);
        assert!(l.inner_qc(&z.positive, &z.support[0]).is_zero());
    }

    #[test]
    fn tits_examples() {
        let o = generic();
        assert_eq!(
            tits_membership(&o, &o.ample0().to_q(), 5),
            TitsAnswer::Inside
        );
        assert_eq!(
            tits_membership(&o, &o.pair().boundary()[0].to_q(), 5),
            TitsAnswer::Inside
        );
        assert_eq!(
            tits_membership(&o, &cv(&[-3, 1, 1, 5]), 5),
            TitsAnswer::Inside
        );
    }
}
