//! Global and weak Torelli decision procedures, admissibility, and the torsor `Hom(N′, G_m)`.

use serde::Serialize;

use crate::cones::{AmpleFailure, AmpleResult, ConeOracle};
use crate::error::{Error, Result};
use crate::lattice::{rank_i64, smith, ClassVec, LatticeIsometry};
use crate::pair::PairModel;
use crate::period::{phi_y, GmElem};
use crate::roots::{chamber_reduce, find_roots, RootDatum, WeylElement};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Yes,
    No,
    UndeterminedAtBound,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    BoundarySquares {
        component: usize,
        left: Option<i64>,
        right: Option<i64>,
    },
    BoundaryImage {
        component: usize,
        image: ClassVec,
    },
    Class {
        class: ClassVec,
    },
    Wall {
        class: ClassVec,
    },
    Period {
        class: ClassVec,
        left: GmElem,
        right: GmElem,
    },
    Undetermined {
        classes: Vec<ClassVec>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TorelliVerdict {
    pub verdict: Verdict,
    pub failed_condition: Option<u8>,
    pub witness: Option<Witness>,
    pub torsor: Option<Vec<i64>>,
    pub bound: i64,
}

impl TorelliVerdict {
    fn no(condition: u8, witness: Witness, bound: i64) -> Self {
        TorelliVerdict {
            verdict: Verdict::No,
            failed_condition: Some(condition),
            witness: Some(witness),
            torsor: None,
            bound,
        }
    }

    pub fn is_yes(&self) -> bool {
        self.verdict == Verdict::Yes
    }
}

fn check_shapes(p1: &PairModel, p2: &PairModel, mu: &LatticeIsometry) -> Result<()> {
    if mu.source.rank() != p1.rank() {
        return Err(Error::DimensionMismatch {
            expected: p1.rank(),
            got: mu.source.rank(),
        });
    }
    if mu.target.rank() != p2.rank() {
        return Err(Error::DimensionMismatch {
            expected: p2.rank(),
            got: mu.target.rank(),
        });
    }
    if mu.source.gram() != p1.pic().gram() || mu.target.gram() != p2.pic().gram() {
        return Err(Error::NotAnIsometry);
    }
    Ok(())
}

fn boundary_squares_witness(p1: &PairModel, p2: &PairModel) -> Option<Witness> {
    let (a, b) = (p1.boundary_squares(), p2.boundary_squares());
    if a == b {
        return None;
    }
    let i = (0..a.len().max(b.len()))
        .find(|&i| a.get(i) != b.get(i))
        .unwrap_or(0);
    Some(Witness::BoundarySquares {
        component: i,
        left: a.get(i).copied(),
        right: b.get(i).copied(),
    })
}

fn boundary_witness(p1: &PairModel, p2: &PairModel, mu: &LatticeIsometry) -> Option<Witness> {
    p1.boundary()
        .iter()
        .zip(p2.boundary())
        .enumerate()
        .find_map(|(i, (d1, d2))| {
            let image = mu.apply(d1);
            (&image != d2).then_some(Witness::BoundaryImage {
                component: i,
                image,
            })
        })
}

fn period_witness(p1: &PairModel, p2: &PairModel, mu: &LatticeIsometry) -> Result<Option<Witness>> {
    for b in p1.pic().orthogonal_complement(p1.boundary()) {
        let left = phi_y(p2, &mu.apply(&b))?;
        let right = phi_y(p1, &b)?;
        if left != right {
            return Ok(Some(Witness::Period {
                class: b,
                left,
                right,
            }));
        }
    }
    Ok(None)
}

/// Does `μ` carry the generic ample cone of `p1` onto that of `p2`?
fn preserves_generic_cone(
    p1: &PairModel,
    p2: &PairModel,
    mu: &LatticeIsometry,
) -> Result<AmpleResult> {
    let h = ConeOracle::generic(p1)?.ample0().clone();
    Ok(ConeOracle::generic(p2)?.ample_test(&mu.apply(&h).to_q()))
}

/// Compare `μ(Δ_1)` with `Δ_2` on the classes whose heights are within the bound on both sides.
fn delta_witness(r1: &RootDatum, r2: &RootDatum, mu: &LatticeIsometry) -> Option<Witness> {
    let inv = mu.inverse();
    let h1 = |v: &ClassVec| r1.lattice().inner(v, &r1.ample0).abs();
    let h2 = |v: &ClassVec| r2.lattice().inner(v, &r2.ample0).abs();
    for d in &r1.delta_y {
        let image = mu.apply(d);
        if h2(&image) <= r2.bound && !r2.delta_y.contains(&image) {
            return Some(Witness::Wall { class: d.clone() });
        }
    }
    for d in &r2.delta_y {
        let pre = inv.apply(d);
        if h1(&pre) <= r1.bound && !r1.delta_y.contains(&pre) {
            return Some(Witness::Wall { class: pre });
        }
    }
    None
}

/// Decide whether `μ: Pic(Y_1) → Pic(Y_2)` satisfies the four Torelli conditions.
pub fn check_global_torelli(
    p1: &PairModel,
    p2: &PairModel,
    mu: &LatticeIsometry,
    bound: i64,
) -> Result<TorelliVerdict> {
    check_shapes(p1, p2, mu)?;
    if let Some(w) = boundary_squares_witness(p1, p2) {
        return Ok(TorelliVerdict::no(1, w, bound));
    }
    if let Some(w) = boundary_witness(p1, p2, mu) {
        return Ok(TorelliVerdict::no(1, w, bound));
    }
    let g = preserves_generic_cone(p1, p2, mu)?;
    if !g.is_ample() {
        let class = g.certificate().unwrap_or_else(|| ClassVec::zero(p2.rank()));
        return Ok(TorelliVerdict::no(2, Witness::Class { class }, bound));
    }
    let h1 = p1.certified_ample()?;
    let o2 = ConeOracle::new(p2.clone())?;
    let r = o2.ample_test(&mu.apply(&h1).to_q());
    if let AmpleResult::NotAmple(f) = &r {
        let cond = if matches!(f, AmpleFailure::MinusTwoWall { .. }) {
            3
        } else {
            2
        };
        let class = r.certificate().unwrap_or_else(|| ClassVec::zero(p2.rank()));
        return Ok(TorelliVerdict::no(cond, Witness::Class { class }, bound));
    }
    let r1 = find_roots(p1, bound)?;
    let r2 = find_roots(p2, bound)?;
    if let Some(w) = delta_witness(&r1, &r2, mu) {
        return Ok(TorelliVerdict::no(3, w, bound));
    }
    if let Some(w) = period_witness(p1, p2, mu)? {
        return Ok(TorelliVerdict::no(4, w, bound));
    }
    if !r1.undetermined.is_empty() || !r2.undetermined.is_empty() {
        let mut classes = r1.undetermined.clone();
        classes.extend(r2.undetermined.iter().cloned());
        return Ok(TorelliVerdict {
            verdict: Verdict::UndeterminedAtBound,
            failed_condition: None,
            witness: Some(Witness::Undetermined { classes }),
            torsor: None,
            bound,
        });
    }
    Ok(TorelliVerdict {
        verdict: Verdict::Yes,
        failed_condition: None,
        witness: None,
        torsor: Some(torsor_group(p1)),
        bound,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeakTorelli {
    pub g: Option<WeylElement>,
    /// The roots named by the indices of `g.word`.
    pub word_roots: Vec<ClassVec>,
    pub failed_condition: Option<u8>,
    pub witness: Option<Witness>,
    pub verdict: Option<TorelliVerdict>,
}

/// Find the unique `g ∈ W_{Y_1}` with `μ∘g` satisfying all four conditions.
pub fn weak_torelli(
    p1: &PairModel,
    p2: &PairModel,
    mu: &LatticeIsometry,
    bound: i64,
) -> Result<WeakTorelli> {
    check_shapes(p1, p2, mu)?;
    let fail = |c: u8, w: Witness| WeakTorelli {
        g: None,
        word_roots: Vec::new(),
        failed_condition: Some(c),
        witness: Some(w),
        verdict: None,
    };
    if let Some(w) = boundary_squares_witness(p1, p2).or_else(|| boundary_witness(p1, p2, mu)) {
        return Ok(fail(1, w));
    }
    let r = preserves_generic_cone(p1, p2, mu)?;
    if !r.is_ample() {
        let class = r.certificate().unwrap_or_else(|| ClassVec::zero(p2.rank()));
        return Ok(fail(2, Witness::Class { class }));
    }
    if let Some(w) = period_witness(p1, p2, mu)? {
        return Ok(fail(4, w));
    }
    let rd1 = find_roots(p1, bound)?;
    let h2 = p2.certified_ample()?;
    let x = mu.inverse().apply(&h2).to_q();
    let (w, _) = chamber_reduce(&rd1, &x)?;
    let word: Vec<usize> = w.word.iter().rev().copied().collect();
    let g = WeylElement::from_word(rd1.lattice(), &rd1.roots, &word)?;
    let verdict = check_global_torelli(p1, p2, &mu.compose(&g.matrix), bound)?;
    let ok = verdict.is_yes();
    let word_roots = if ok {
        word.iter().map(|&i| rd1.roots[i].clone()).collect()
    } else {
        Vec::new()
    };
    Ok(WeakTorelli {
        word_roots,
        g: ok.then_some(g),
        failed_condition: if ok { None } else { verdict.failed_condition },
        witness: verdict.witness.clone(),
        verdict: Some(verdict),
    })
}

/// `θ` fixes every `[D_i]` and maps the generic ample cone to itself.
pub fn adm_membership(p: &PairModel, theta: &LatticeIsometry) -> Result<bool> {
    if theta.source.rank() != p.rank() || theta.target.rank() != p.rank() {
        return Ok(false);
    }
    if p.boundary().iter().any(|d| &theta.apply(d) != d) {
        return Ok(false);
    }
    Ok(preserves_generic_cone(p, p, theta)?.is_ample())
}

/// `φ_Y ∘ θ = φ_Y` on `D^⊥`.
pub fn fixes_period(p: &PairModel, theta: &LatticeIsometry) -> Result<bool> {
    Ok(period_witness(p, p, theta)?.is_none())
}

/// Invariant factors of `N′ = coker(Pic(Y) → Z^n, L ↦ (L·D_i))`, padded with zeros to length `n`.
pub fn torsor_group(p: &PairModel) -> Vec<i64> {
    let n = p.n();
    let m: Vec<Vec<i64>> = p.boundary().iter().map(|d| p.pic().dual(d)).collect();
    let s = smith(&m);
    let mut out: Vec<i64> = s.diag_i64();
    out.truncate(n);
    out.resize(n, 0);
    out
}

/// Rank of `⟨D⟩^⊥ / ⟨D_1, …, D_n⟩`; needs `D² = 0`.
pub fn mw_rank(p: &PairModel) -> Result<usize> {
    let d = p.total_boundary();
    let d2 = p.pic().square(&d);
    if d2 != 0 {
        return Err(Error::BoundaryNotIsotropic(d2));
    }
    let rows: Vec<Vec<i64>> = p.boundary().iter().map(|b| b.0.clone()).collect();
    Ok(p.rank() - 1 - rank_i64(&rows))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::roots::reflection;

    const ALPHA: [i64; 4] = [1, -1, -1, -1];

    #[test]
    fn identity_is_yes() {
        for p in [corpus::p2_axes(), corpus::ye_p2_axes(), corpus::f1_base()] {
            let id = LatticeIsometry::identity(p.pic());
            let v = check_global_torelli(&p, &p, &id, 6).unwrap();
            assert!(v.is_yes(), "{v:?}");
            assert_eq!(v.torsor, Some(torsor_group(&p)));
        }
    }

    #[test]
    fn fresh_symbols_differ_in_period() {
        let p1 = corpus::p2_axes().generic_deformation();
        let p2 = corpus::p2_axes().generic_deformation();
        let id = LatticeIsometry::identity(p1.pic());
        let v = check_global_torelli(&p1, &p2, &id, 6).unwrap();
        assert_eq!(v.verdict, Verdict::No);
        assert_eq!(v.failed_condition, Some(4));
        match v.witness {
            Some(Witness::Period { class, .. }) => assert_eq!(
                class.0.iter().map(|x| x.abs()).collect::<Vec<_>>(),
                vec![1; 4]
            ),
            w => panic!("{w:?}"),
        }
    }

    #[test]
    fn weak_torelli_examples() {
        let ye = corpus::ye_p2_axes();
        let s = reflection(ye.pic(), &ClassVec(ALPHA.to_vec())).unwrap();
        let w = weak_torelli(&ye, &ye, &s, 6).unwrap();
        let g = w.g.expect("g exists");
        assert_eq!(g.matrix, s);
        assert_eq!(w.word_roots.len(), 1);
        assert_eq!(
            w.word_roots[0]
                .0
                .iter()
                .map(|x| x.abs())
                .collect::<Vec<_>>(),
            vec![1; 4]
        );
        assert!(s.compose(&g.matrix).is_identity());
        let id = LatticeIsometry::identity(ye.pic());
        assert!(weak_torelli(&ye, &ye, &id, 6)
            .unwrap()
            .g
            .unwrap()
            .is_identity());
        let gen = corpus::p2_axes();
        let w = weak_torelli(&gen, &gen, &s, 6).unwrap();
        assert!(w.g.is_none());
        assert_eq!(w.failed_condition, Some(4));
        let v = check_global_torelli(&ye, &ye, &s, 6).unwrap();
        assert_eq!(v.failed_condition, Some(3));
    }

    #[test]
    fn admissibility() {
        let p = corpus::p2_axes();
        let l = p.pic();
        assert!(adm_membership(&p, &LatticeIsometry::identity(l)).unwrap());
        let s = reflection(l, &ClassVec(ALPHA.to_vec())).unwrap();
        assert!(adm_membership(&p, &s).unwrap());
        let mut m = vec![vec![0i64; 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = if i == 1 { -1 } else { 1 };
        }
        let flip = LatticeIsometry::new(m, l.clone(), l.clone()).unwrap();
        assert!(!adm_membership(&p, &flip).unwrap());
    }

    #[test]
    fn torsor_values() {
        assert_eq!(torsor_group(&corpus::p2_axes()), vec![1, 1, 1]);
        let toric = crate::pair::build_pair(
            crate::toric::fan_from_selfintersections(&[1, 1, 1]).unwrap(),
            vec![],
        )
        .unwrap();
        assert_eq!(torsor_group(&toric), vec![1, 0, 0]);
        assert!(torsor_group(&corpus::cycle7()).iter().all(|&d| d != 0));
    }

    #[test]
    fn mordell_weil_ranks() {
        assert_eq!(mw_rank(&corpus::cycle8()).unwrap(), 1);
        assert_eq!(mw_rank(&corpus::cycle7()).unwrap(), 2);
        assert_eq!(
            mw_rank(&corpus::p2_axes()),
            Err(Error::BoundaryNotIsotropic(6))
        );
    }
}
