//! Roots, reflections, Weyl group words and chamber reduction.

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::cones::ConeOracle;
use crate::error::{Error, Result};
use crate::lattice::{q, q_frac, ClassVec, IntLattice, LatticeIsometry, QVec, Q};
use crate::lp::{cone_membership, ConeMembership};
use crate::pair::PairModel;
use crate::period::{marked_period, BoundaryMarking, PeriodPoint};

/// `s_α(v) = v + (v·α) α`.
pub fn reflection(l: &IntLattice, alpha: &ClassVec) -> Result<LatticeIsometry> {
    let s = l.checked_inner(alpha, alpha)?;
    if s != -2 {
        return Err(Error::NotARoot(s));
    }
    let r = l.rank();
    let images: Vec<ClassVec> = (0..r)
        .map(|j| {
            let e = ClassVec::unit(r, j);
            let c = l.inner(&e, alpha);
            &e + &alpha.scale(c)
        })
        .collect();
    LatticeIsometry::from_images(&images, l.clone(), l.clone())
}

pub fn reflect_q(l: &IntLattice, alpha: &ClassVec, x: &QVec) -> QVec {
    x.add_scaled(&l.inner_qc(x, alpha), &alpha.to_q())
}

/// `10 · max |G_ij|`.
pub fn default_bound(l: &IntLattice) -> i64 {
    10 * l
        .gram()
        .iter()
        .flatten()
        .map(|x| x.abs())
        .max()
        .unwrap_or(1)
        .max(1)
}

/// A product of reflections; `word[0]` is applied last.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeylElement {
    pub word: Vec<usize>,
    #[serde(serialize_with = "matrix_only")]
    pub matrix: LatticeIsometry,
}

fn matrix_only<S: serde::Serializer>(
    m: &LatticeIsometry,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    m.matrix.serialize(s)
}

impl WeylElement {
    pub fn identity(l: &IntLattice) -> Self {
        WeylElement {
            word: Vec::new(),
            matrix: LatticeIsometry::identity(l),
        }
    }

    /// `s_{roots[w_0]} ∘ s_{roots[w_1]} ∘ …`.
    pub fn from_word(l: &IntLattice, roots: &[ClassVec], word: &[usize]) -> Result<Self> {
        let mut m = LatticeIsometry::identity(l);
        for &i in word.iter().rev() {
            m = reflection(l, &roots[i])?.compose(&m);
        }
        Ok(WeylElement {
            word: word.to_vec(),
            matrix: m,
        })
    }

    pub fn apply(&self, v: &ClassVec) -> ClassVec {
        self.matrix.apply(v)
    }

    pub fn apply_q(&self, v: &QVec) -> QVec {
        self.matrix.apply_q(v)
    }

    pub fn is_identity(&self) -> bool {
        self.matrix.is_identity()
    }
}

/// Height-bounded fragment of the root system of a pair.
#[derive(Clone, Debug, Serialize)]
pub struct RootDatum {
    #[serde(skip)]
    pub pair: PairModel,
    pub bound: i64,
    /// Ample class of the generic deformation; heights are measured against it.
    pub ample0: ClassVec,
    /// Base point of the nef chamber used to orient `delta_y`.
    pub base: QVec,
    pub roots: Vec<ClassVec>,
    /// Generically ample class on `α^⊥`, one per root.
    pub witnesses: Vec<QVec>,
    pub undetermined: Vec<ClassVec>,
    pub phi_y: Vec<ClassVec>,
    pub delta_y: Vec<ClassVec>,
}

impl RootDatum {
    pub fn lattice(&self) -> &IntLattice {
        self.pair.pic()
    }

    pub fn index_of(&self, alpha: &ClassVec) -> Option<usize> {
        self.roots.iter().position(|r| r == alpha)
    }

    pub fn reflection(&self, i: usize) -> LatticeIsometry {
        reflection(self.lattice(), &self.roots[i]).expect("roots have square -2")
    }
}

/// Search `α^⊥` for a generically ample class.
fn friedman_witness(go: &ConeOracle, alpha: &ClassVec) -> Option<QVec> {
    let l = go.lattice();
    let a = go.ample0().to_q();
    let project = |v: &QVec| v.add_scaled(&(l.inner_qc(v, alpha) / q(2)), &alpha.to_q());
    let x0 = project(&a);
    if go.ample_test(&x0).is_ample() {
        return Some(x0);
    }
    for eps in [q_frac(1, 10), q_frac(1, 100)] {
        for k in 0..l.rank() {
            let u = project(&ClassVec::unit(l.rank(), k).to_q());
            for sign in [1, -1] {
                let x = x0.add_scaled(&(&eps * q(sign)), &u);
                if go.ample_test(&x).is_ample() {
                    return Some(x);
                }
            }
        }
    }
    None
}

/// All `α ∈ D^⊥` with `α² = -2` and `|α·A| ≤ bound`, split into certified roots and undetermined classes.
pub fn find_roots(pair: &PairModel, bound: i64) -> Result<RootDatum> {
    let go = ConeOracle::generic(pair)?;
    let l = pair.pic();
    let candidates = go.dperp_vectors(-2, -bound, bound);
    let mut roots: Vec<ClassVec> = Vec::new();
    let mut witnesses: Vec<QVec> = Vec::new();
    let mut undetermined = Vec::new();
    for alpha in &candidates {
        let neg = -alpha;
        if let Some(i) = roots.iter().position(|r| r == &neg) {
            let w = witnesses[i].clone();
            roots.push(alpha.clone());
            witnesses.push(w);
            continue;
        }
        if undetermined.contains(&neg) {
            undetermined.push(alpha.clone());
            continue;
        }
        match friedman_witness(&go, alpha) {
            Some(x) => {
                roots.push(alpha.clone());
                witnesses.push(x);
            }
            None => undetermined.push(alpha.clone()),
        }
    }
    let base = match pair.certified_ample() {
        Ok(h) => h.to_q(),
        Err(_) => go.ample0().to_q(),
    };
    let mut rd = RootDatum {
        pair: pair.clone(),
        bound,
        ample0: go.ample0().clone(),
        base,
        roots,
        witnesses,
        undetermined,
        phi_y: Vec::new(),
        delta_y: Vec::new(),
    };
    let phi = marked_period(pair, &BoundaryMarking::standard(pair.n()), None)?;
    rd.phi_y = phi_y(&rd, &phi);
    rd.base = off_walls(l, &rd.base, &rd.phi_y);
    rd.delta_y = walls(l, &rd.base, &rd.phi_y);
    Ok(rd)
}

/// Roots with trivial period value.
pub fn phi_y(rd: &RootDatum, phi: &PeriodPoint) -> Vec<ClassVec> {
    rd.roots
        .iter()
        .filter(|a| phi.eval(a).is_one())
        .cloned()
        .collect()
}

/// Walls of the chamber of the `Φ_Y`-arrangement containing the base point.
pub fn delta_y(rd: &RootDatum, phi: &PeriodPoint) -> Vec<ClassVec> {
    let l = rd.lattice();
    let phiy = phi_y(rd, phi);
    let base = off_walls(l, &rd.base, &phiy);
    walls(l, &base, &phiy)
}

/// Move `x` off every hyperplane `β^⊥` by `ε·w` with `ε = 1/1000`, keeping the signs of the other pairings.
pub fn off_walls(l: &IntLattice, x: &QVec, roots: &[ClassVec]) -> QVec {
    if roots.iter().all(|b| !l.inner_qc(x, b).is_zero()) {
        return x.clone();
    }
    let r = l.rank();
    let mut directions = vec![QVec(vec![q(1); r])];
    directions.extend((0..r).map(|k| ClassVec::unit(r, k).to_q()));
    let sign = |v: &QVec, b: &ClassVec| {
        let t = l.inner_qc(v, b);
        i8::from(t.is_positive()) - i8::from(t.is_negative())
    };
    for w in &directions {
        let mut eps = q_frac(1, 1000);
        for _ in 0..20 {
            let y = x.add_scaled(&eps, w);
            let ok = roots.iter().all(|b| {
                let s0 = sign(x, b);
                let s1 = sign(&y, b);
                s1 != 0 && (s0 == 0 || s0 == s1)
            });
            if ok && l.square_q(&y) > q(0) {
                return y;
            }
            eps /= q(2);
        }
    }
    x.clone()
}

fn walls(l: &IntLattice, base: &QVec, roots: &[ClassVec]) -> Vec<ClassVec> {
    let positive: Vec<ClassVec> = roots
        .iter()
        .filter(|b| l.inner_qc(base, b) > q(0))
        .cloned()
        .collect();
    let dual = |v: &ClassVec| -> Vec<Q> { l.dual(v).into_iter().map(q).collect() };
    positive
        .iter()
        .enumerate()
        .filter(|(i, b)| {
            let others: Vec<Vec<Q>> = positive
                .iter()
                .enumerate()
                .filter(|(j, _)| j != i)
                .map(|(_, g)| dual(g))
                .collect();
            matches!(
                cone_membership(&dual(b), &others, &[]),
                ConeMembership::Separated(_)
            )
        })
        .map(|(_, b)| b.clone())
        .collect()
}

/// Reflect `x` in violated walls of `delta_y` until it lies in the fundamental chamber.
pub fn chamber_reduce(rd: &RootDatum, x: &QVec) -> Result<(WeylElement, QVec)> {
    chamber_reduce_by(rd, x, &mut |_| 0)
}

/// As [`chamber_reduce`]; `pick` chooses among the currently violated walls (indices into `delta_y`).
pub fn chamber_reduce_by(
    rd: &RootDatum,
    x: &QVec,
    pick: &mut dyn FnMut(&[usize]) -> usize,
) -> Result<(WeylElement, QVec)> {
    let l = rd.lattice();
    if !(l.square_q(x) > q(0) && l.inner_q(x, &rd.base) > q(0)) {
        return Err(Error::OutsidePositiveCone);
    }
    let mut y = x.clone();
    let mut word: Vec<usize> = Vec::new();
    let mut m = LatticeIsometry::identity(l);
    for _ in 0..100_000 {
        let violated: Vec<usize> = rd
            .delta_y
            .iter()
            .enumerate()
            .filter(|(_, b)| l.inner_qc(&y, b) < q(0))
            .map(|(i, _)| i)
            .collect();
        if violated.is_empty() {
            return Ok((WeylElement { word, matrix: m }, y));
        }
        let beta = &rd.delta_y[violated[pick(&violated) % violated.len()]];
        y = reflect_q(l, beta, &y);
        m = reflection(l, beta)?.compose(&m);
        word.insert(0, rd.index_of(beta).expect("walls are roots"));
    }
    Err(Error::NonConvergence(
        "chamber reduction exceeded 100000 reflections".into(),
    ))
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

    fn fresh() -> PairModel {
        p2_axes([GmElem::fresh(), GmElem::fresh(), GmElem::fresh()])
    }

    fn ye() -> PairModel {
        let m = GmElem::minus_one();
        p2_axes([m.clone(), m.clone(), m])
    }

    const ALPHA: [i64; 4] = [1, -1, -1, -1];

    #[test]
    fn reflection_rules() {
        let p = fresh();
        let l = p.pic();
        let a = ClassVec(ALPHA.to_vec());
        let s = reflection(l, &a).unwrap();
        assert_eq!(
            s.apply(&ClassVec(vec![0, 1, 0, 0])),
            ClassVec(vec![1, 0, -1, -1])
        );
        assert_eq!(s.apply(&a), -&a);
        assert!(s.compose(&s).is_identity());
        for d in p.boundary() {
            assert_eq!(&s.apply(d), d);
        }
        assert_eq!(
            reflection(l, &ClassVec(vec![0, 1, 0, 0])),
            Err(Error::NotARoot(-1))
        );
    }

    #[test]
    fn p2_roots() {
        let rd = find_roots(&fresh(), 6).unwrap();
        let a = ClassVec(ALPHA.to_vec());
        assert_eq!(rd.roots.len(), 2);
        assert!(rd.roots.contains(&a) && rd.roots.contains(&-&a));
        assert!(rd.undetermined.is_empty());
        assert!(rd.phi_y.is_empty());
        assert!(rd.delta_y.is_empty());
    }

    #[test]
    fn ye_roots_and_chambers() {
        let rd = find_roots(&ye(), 6).unwrap();
        let a = ClassVec(ALPHA.to_vec());
        assert_eq!(rd.phi_y.len(), 2);
        assert_eq!(rd.delta_y, vec![a.clone()]);
        let l = rd.lattice().clone();
        let x = ClassVec(vec![4, -1, -1, -1]).to_q();
        let (w, x2) = chamber_reduce(&rd, &x).unwrap();
        assert!(w.is_identity());
        assert_eq!(x2, x);
        let y = ClassVec(vec![5, -2, -2, -2]).to_q();
        assert!(l.inner_qc(&y, &a) < q(0));
        let (w, y2) = chamber_reduce(&rd, &y).unwrap();
        assert_eq!(w.word.len(), 1);
        assert!(l.inner_qc(&y2, &a) > q(0));
        assert_eq!(w.apply_q(&y), y2);
        let (w2, _) = chamber_reduce(&rd, &y2).unwrap();
        assert!(w2.is_identity());
    }

    #[test]
    fn collinear_points_give_both_roots() {
        // φ(α) = -1/(q1 q2 q3) is trivial at q = (2, 3, -1/6).
        let p = p2_axes([
            GmElem::from_int(2).unwrap(),
            GmElem::from_int(3).unwrap(),
            GmElem::from_ratio(-1, 6).unwrap(),
        ]);
        let rd = find_roots(&p, 6).unwrap();
        assert_eq!(rd.phi_y.len(), 2);
    }

    #[test]
    fn roots_do_not_depend_on_fresh_symbols() {
        let a = find_roots(&fresh(), 8).unwrap();
        let b = find_roots(&fresh(), 8).unwrap();
        assert_eq!(a.roots, b.roots);
        assert_eq!(a.undetermined, b.undetermined);
    }

    #[test]
    fn toric_pair_has_no_roots() {
        let p = build_pair(fan_from_selfintersections(&[1, 1, 1]).unwrap(), vec![]).unwrap();
        assert!(find_roots(&p, 10).unwrap().roots.is_empty());
    }

    #[test]
    fn off_walls_is_deterministic() {
        let p = fresh();
        let l = p.pic();
        let a = ClassVec(ALPHA.to_vec());
        let x = ClassVec(vec![3, -1, -1, -1]).to_q();
        let y = off_walls(l, &x, &[a.clone(), -&a]);
        assert_eq!(y, off_walls(l, &x, &[a.clone(), -&a]));
        assert!(l.inner_qc(&y, &a) > q(0));
    }
}
