//! Looijenga pairs presented as a toric fan plus interior blowups.

use std::collections::BTreeMap;

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::cones::ConeOracle;
use crate::error::{Error, Result};
use crate::lattice::{q, ClassVec, IntLattice, Q};
use crate::lp::solve_inequalities;
use crate::period::GmElem;
use crate::toric::{toric_pic, Fan2D, ToricPic};

/// A chain of `chain_length` infinitely near points over `coordinate` on boundary component `component`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlowupEntry {
    pub component: usize,
    pub coordinate: GmElem,
    #[serde(default = "one")]
    pub chain_length: usize,
}

fn one() -> usize {
    1
}

impl BlowupEntry {
    pub fn new(component: usize, coordinate: GmElem, chain_length: usize) -> Self {
        BlowupEntry {
            component,
            coordinate,
            chain_length,
        }
    }

    pub fn point(component: usize, coordinate: GmElem) -> Self {
        Self::new(component, coordinate, 1)
    }
}

#[derive(Serialize, Deserialize)]
struct PairJson {
    fan: Fan2D,
    blowups: Vec<BlowupEntry>,
}

/// Classes `E` with `E² = K·E = -1`, each meeting exactly one boundary component.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExceptionalConfiguration {
    pub classes: Vec<ClassVec>,
    pub components: Vec<usize>,
}

impl ExceptionalConfiguration {
    /// Infers each class's component from its boundary degrees.
    pub fn from_classes(p: &PairModel, classes: Vec<ClassVec>) -> Result<Self> {
        let mut components = Vec::with_capacity(classes.len());
        for c in &classes {
            if c.len() != p.rank() {
                return Err(Error::DimensionMismatch {
                    expected: p.rank(),
                    got: c.len(),
                });
            }
            let degs: Vec<i64> = p.boundary().iter().map(|d| p.pic().inner(c, d)).collect();
            let hits: Vec<usize> = (0..degs.len()).filter(|&i| degs[i] == 1).collect();
            if hits.len() != 1 || degs.iter().filter(|&&x| x != 0).count() != 1 {
                return Err(Error::InvalidConfiguration(format!(
                    "class {} has boundary degrees {degs:?}",
                    p.pic().label_of(c)
                )));
            }
            components.push(hits[0]);
        }
        let cfg = ExceptionalConfiguration {
            classes,
            components,
        };
        cfg.validate(p)?;
        Ok(cfg)
    }

    pub fn validate(&self, p: &PairModel) -> Result<()> {
        if self.classes.len() != self.components.len() {
            return Err(Error::InvalidConfiguration(
                "classes and components differ in length".into(),
            ));
        }
        let l = p.pic();
        for (idx, (c, &comp)) in self.classes.iter().zip(&self.components).enumerate() {
            let name = l.label_of(c);
            if c.len() != l.rank() {
                return Err(Error::DimensionMismatch {
                    expected: l.rank(),
                    got: c.len(),
                });
            }
            if l.square(c) != -1 {
                return Err(Error::InvalidConfiguration(format!(
                    "{name} has square {}",
                    l.square(c)
                )));
            }
            if l.inner(c, p.canonical()) != -1 {
                return Err(Error::InvalidConfiguration(format!(
                    "{name} has K-degree {}",
                    l.inner(c, p.canonical())
                )));
            }
            for (i, d) in p.boundary().iter().enumerate() {
                let want = i64::from(i == comp);
                if l.inner(c, d) != want {
                    return Err(Error::InvalidConfiguration(format!(
                        "{name} meets D{} with degree {}, expected {want}",
                        i + 1,
                        l.inner(c, d)
                    )));
                }
            }
            for other in &self.classes[..idx] {
                if l.inner(c, other) != 0 {
                    return Err(Error::InvalidConfiguration(format!(
                        "{name} and {} are not orthogonal",
                        l.label_of(other)
                    )));
                }
            }
        }
        Ok(())
    }

    /// Number of classes on each of the `n` components.
    pub fn combinatorial_type(&self, n: usize) -> Vec<usize> {
        let mut t = vec![0; n];
        for &c in &self.components {
            t[c] += 1;
        }
        t
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct PairModel {
    fan: Fan2D,
    blowups: Vec<BlowupEntry>,
    toric: ToricPic,
    pic: IntLattice,
    boundary: Vec<ClassVec>,
    canonical: ClassVec,
    /// First basis index of each entry's chain.
    offsets: Vec<usize>,
}

impl PartialEq for PairModel {
    fn eq(&self, other: &Self) -> bool {
        self.fan == other.fan && self.blowups == other.blowups
    }
}

impl Eq for PairModel {}

impl Serialize for PairModel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PairJson {
            fan: self.fan.clone(),
            blowups: self.blowups.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PairModel {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = PairJson::deserialize(d)?;
        build_pair(j.fan, j.blowups).map_err(serde::de::Error::custom)
    }
}

pub fn build_pair(fan: Fan2D, blowups: Vec<BlowupEntry>) -> Result<PairModel> {
    let n = fan.len();
    for (j, b) in blowups.iter().enumerate() {
        if b.component >= n {
            return Err(Error::InvalidBlowup(format!(
                "entry {} names component {} but the fan has {n} components",
                j + 1,
                b.component
            )));
        }
        if b.chain_length == 0 {
            return Err(Error::InvalidBlowup(format!(
                "entry {} has chain length 0",
                j + 1
            )));
        }
        for (k, other) in blowups[..j].iter().enumerate() {
            if other.component == b.component && other.coordinate == b.coordinate {
                return Err(Error::InvalidBlowup(format!(
                    "entries {} and {} blow up the same point; use a chain instead",
                    k + 1,
                    j + 1
                )));
            }
        }
    }
    let toric = toric_pic(&fan);
    let r0 = toric.rank();
    let total: usize = blowups.iter().map(|b| b.chain_length).sum();
    let rank = r0 + total;
    let mut gram = vec![vec![0i64; rank]; rank];
    for i in 0..r0 {
        for j in 0..r0 {
            gram[i][j] = toric.lattice.gram()[i][j];
        }
    }
    for (i, row) in gram.iter_mut().enumerate().skip(r0) {
        row[i] = -1;
    }
    let mut labels: Vec<String> = toric.lattice.labels().to_vec();
    let mut offsets = Vec::with_capacity(blowups.len());
    let mut next = r0;
    for (j, b) in blowups.iter().enumerate() {
        offsets.push(next);
        if b.chain_length == 1 {
            labels.push(format!("E{}", j + 1));
        } else {
            for k in 1..=b.chain_length {
                labels.push(format!("E{}.{}", j + 1, k));
            }
        }
        next += b.chain_length;
    }
    let pic = IntLattice::new(gram, labels)?;
    let mut boundary: Vec<ClassVec> = toric
        .boundary
        .iter()
        .map(|c| pullback_coords(c, rank))
        .collect();
    for (b, &off) in blowups.iter().zip(&offsets) {
        for k in 0..b.chain_length {
            boundary[b.component].0[off + k] -= 1;
        }
    }
    let mut canonical = ClassVec::zero(rank);
    for d in &boundary {
        canonical = &canonical - d;
    }
    Ok(PairModel {
        fan,
        blowups,
        toric,
        pic,
        boundary,
        canonical,
        offsets,
    })
}

fn pullback_coords(c: &ClassVec, rank: usize) -> ClassVec {
    let mut v = c.0.clone();
    v.resize(rank, 0);
    ClassVec(v)
}

impl PairModel {
    pub fn fan(&self) -> &Fan2D {
        &self.fan
    }

    pub fn blowups(&self) -> &[BlowupEntry] {
        &self.blowups
    }

    pub fn toric(&self) -> &ToricPic {
        &self.toric
    }

    pub fn pic(&self) -> &IntLattice {
        &self.pic
    }

    pub fn rank(&self) -> usize {
        self.pic.rank()
    }

    pub fn n(&self) -> usize {
        self.fan.len()
    }

    pub fn boundary(&self) -> &[ClassVec] {
        &self.boundary
    }

    pub fn canonical(&self) -> &ClassVec {
        &self.canonical
    }

    pub fn anticanonical(&self) -> ClassVec {
        -&self.canonical
    }

    pub fn toric_rank(&self) -> usize {
        self.toric.rank()
    }

    /// Basis indices `e_{j,1}, …, e_{j,r}` of entry `j`.
    pub fn chain_indices(&self, j: usize) -> std::ops::Range<usize> {
        let off = self.offsets[j];
        off..off + self.blowups[j].chain_length
    }

    /// Basis index → (entry, position in chain), for exceptional basis vectors.
    pub fn exceptional_owner(&self, idx: usize) -> Option<(usize, usize)> {
        (0..self.blowups.len()).find_map(|j| {
            let r = self.chain_indices(j);
            r.contains(&idx).then(|| (j, idx - r.start))
        })
    }

    pub fn boundary_squares(&self) -> Vec<i64> {
        self.boundary.iter().map(|d| self.pic.square(d)).collect()
    }

    /// `π*` of a toric class.
    pub fn pullback(&self, c: &ClassVec) -> ClassVec {
        pullback_coords(c, self.rank())
    }

    /// Toric part of a class: the coordinates on `π*Pic(Ȳ)`.
    pub fn toric_part(&self, c: &ClassVec) -> ClassVec {
        ClassVec(c.0[..self.toric_rank()].to_vec())
    }

    pub fn total_boundary(&self) -> ClassVec {
        self.anticanonical()
    }

    pub fn interior_euler(&self) -> i64 {
        2 + self.rank() as i64 - self.n() as i64
    }

    pub fn is_toric(&self) -> bool {
        self.blowups.is_empty()
    }

    /// All blowup coordinates are formal symbols with no relation among them.
    pub fn is_generic(&self) -> bool {
        let mut seen = BTreeMap::new();
        for b in &self.blowups {
            let c = &b.coordinate;
            if c.sign() != 1 || !c.primes().is_empty() || c.symbols().len() != 1 {
                return false;
            }
            let (name, e) = c.symbols().iter().next().unwrap();
            if !e.is_integer() || e.abs() != q(1) || seen.insert(name.clone(), ()).is_some() {
                return false;
            }
        }
        true
    }

    /// The same pair with every blowup coordinate replaced by a fresh symbol.
    pub fn generic_deformation(&self) -> PairModel {
        let blowups = self
            .blowups
            .iter()
            .map(|b| BlowupEntry::new(b.component, GmElem::fresh(), b.chain_length))
            .collect();
        build_pair(self.fan.clone(), blowups).expect("fresh symbols are distinct")
    }

    pub fn with_coordinates(&self, coords: &[GmElem]) -> Result<PairModel> {
        if coords.len() != self.blowups.len() {
            return Err(Error::DimensionMismatch {
                expected: self.blowups.len(),
                got: coords.len(),
            });
        }
        let blowups = self
            .blowups
            .iter()
            .zip(coords)
            .map(|(b, c)| BlowupEntry::new(b.component, c.clone(), b.chain_length))
            .collect();
        build_pair(self.fan.clone(), blowups)
    }

    /// Blow up one more chain in the interior of component `component`.
    pub fn with_blowup(&self, entry: BlowupEntry) -> Result<PairModel> {
        let mut blowups = self.blowups.clone();
        blowups.push(entry);
        build_pair(self.fan.clone(), blowups)
    }

    /// Blow up the node `D_i ∩ D_{i+1}`; the new component is `i+1`.
    pub fn toric_blowup(&self, node: usize) -> Result<PairModel> {
        let n = self.n();
        if node >= n {
            return Err(Error::InvalidBlowup(format!(
                "node {node} out of range for {n} components"
            )));
        }
        let fan = self.fan.corner_blowup(node);
        let blowups = self
            .blowups
            .iter()
            .map(|b| {
                let c = if node + 1 < n && b.component > node {
                    b.component + 1
                } else {
                    b.component
                };
                BlowupEntry::new(c, b.coordinate.clone(), b.chain_length)
            })
            .collect();
        build_pair(fan, blowups)
    }

    /// The pullback of the old lattice into the lattice of `self.toric_blowup(node)`.
    pub fn toric_blowup_embedding(&self, node: usize, new: &PairModel) -> Vec<ClassVec> {
        let old_tp = &self.toric;
        let new_tp = new.toric();
        let n = self.n();
        let shift = |i: usize| if node + 1 < n && i > node { i + 1 } else { i };
        let exc_new = if node + 1 < n { node + 1 } else { n };
        (0..self.rank())
            .map(|idx| {
                if idx < old_tp.rank() {
                    // π*D̄_idx = D̄'_idx + exceptional if idx touches the node
                    let i = idx;
                    let mut v = new_tp.boundary[shift(i)].clone();
                    if i == node || i == (node + 1) % n {
                        v = &v + &new_tp.boundary[exc_new];
                    }
                    new.pullback(&v)
                } else {
                    let (j, k) = self.exceptional_owner(idx).unwrap();
                    ClassVec::unit(new.rank(), new.chain_indices(j).start + k)
                }
            })
            .collect()
    }

    /// Top classes `C_1, …, C_r` of every chain (here `C_k = e_{r-k+1}`).
    pub fn defining_configuration(&self) -> ExceptionalConfiguration {
        let mut classes = Vec::new();
        let mut components = Vec::new();
        for (j, b) in self.blowups.iter().enumerate() {
            let idx = self.chain_indices(j);
            for i in idx.rev() {
                classes.push(ClassVec::unit(self.rank(), i));
                components.push(b.component);
            }
        }
        ExceptionalConfiguration {
            classes,
            components,
        }
    }

    /// Classes of the chain curves `E_k = e_k - e_{k+1}` and `E_r = e_r` of entry `j`.
    pub fn chain_curves(&self, j: usize) -> Vec<ClassVec> {
        let idx: Vec<usize> = self.chain_indices(j).collect();
        let rank = self.rank();
        idx.iter()
            .enumerate()
            .map(|(k, &i)| {
                let mut v = ClassVec::unit(rank, i);
                if k + 1 < idx.len() {
                    v = &v - &ClassVec::unit(rank, idx[k + 1]);
                }
                v
            })
            .collect()
    }

    /// An ample class, provably so and then shrunk as far as the exact test allows.
    pub fn certified_ample(&self) -> Result<ClassVec> {
        let base = self.geometric_ample()?;
        let (n0, hbar) = base;
        let h0 = self.ample_candidate(n0, &hbar);
        if self.blowups.is_empty() {
            return Ok(h0);
        }
        let oracle = ConeOracle::with_ample(self.clone(), h0.clone());
        let mut best = h0;
        let mut n = n0 - 1;
        while n >= 1 {
            let cand = self.ample_candidate(n, &hbar);
            if self.pic.square(&cand) <= 0 || !oracle.ample_test(&cand.to_q()).is_ample() {
                break;
            }
            best = cand;
            n -= 1;
        }
        Ok(best)
    }

    fn ample_candidate(&self, n: i64, hbar: &ClassVec) -> ClassVec {
        let mut h = self.pullback(&hbar.scale(n));
        for j in 0..self.blowups.len() {
            let idx: Vec<usize> = self.chain_indices(j).collect();
            let r = idx.len() as i64;
            for (k, &i) in idx.iter().enumerate() {
                h.0[i] -= r - k as i64;
            }
        }
        h
    }

    /// `(N, H̄)` with `N·π*H̄ - Σ weighted chains` ample by the toric Nakai criterion.
    fn geometric_ample(&self) -> Result<(i64, ClassVec)> {
        let hbar = toric_ample(&self.fan, &self.toric)?;
        let tl = &self.toric.lattice;
        let kbar = self
            .toric
            .boundary
            .iter()
            .fold(ClassVec::zero(self.toric_rank()), |acc, d| &acc - d);
        let rmax = self
            .blowups
            .iter()
            .map(|b| b.chain_length as i64)
            .max()
            .unwrap_or(0);
        let degs_h: Vec<i64> = self
            .toric
            .boundary
            .iter()
            .map(|d| tl.inner(&hbar, d))
            .collect();
        let degs_k: Vec<i64> = self
            .toric
            .boundary
            .iter()
            .map(|d| tl.inner(&kbar, d))
            .collect();
        for n in 1..=1_000_000i64 {
            let toric_ok = degs_h
                .iter()
                .zip(&degs_k)
                .all(|(&h, &k)| n * h + rmax * k > 0);
            if !toric_ok {
                continue;
            }
            let cand = self.ample_candidate(n, &hbar);
            if self.pic.square(&cand) > 0
                && self.boundary.iter().all(|d| self.pic.inner(&cand, d) > 0)
            {
                return Ok((n, hbar));
            }
        }
        Err(Error::AmpleCertification(1_000_000))
    }
}

/// A toric class with positive degree on every boundary divisor.
pub fn toric_ample(fan: &Fan2D, tp: &ToricPic) -> Result<ClassVec> {
    let n = fan.len();
    let d = fan.selfintersections();
    // a_{i-1} + d_i a_i + a_{i+1} ≥ 1 for Σ a_i D̄_i
    let rows: Vec<Vec<Q>> = (0..n)
        .map(|i| {
            let mut row = vec![q(0); n];
            row[(i + n - 1) % n] += q(1);
            row[(i + 1) % n] += q(1);
            row[i] += q(d[i]);
            row
        })
        .collect();
    let a = solve_inequalities(&rows, &vec![q(1); n])
        .ok_or_else(|| Error::InvalidFan("no ample class found".into()))?;
    let (ints, _) = crate::lattice::QVec(a).clear_denominators();
    let coeffs: Vec<i64> = ints
        .iter()
        .map(|x| num_traits::ToPrimitive::to_i64(x).ok_or(Error::AmpleCertification(0)))
        .collect::<Result<_>>()?;
    let h = tp.class_of(&coeffs);
    let prim = h
        .to_q()
        .primitive_class()
        .ok_or(Error::AmpleCertification(0))?;
    debug_assert!(tp.boundary.iter().all(|b| tp.lattice.inner(&prim, b) > 0));
    Ok(prim)
}

pub fn interior_euler(p: &PairModel) -> i64 {
    p.interior_euler()
}

pub fn certified_ample(p: &PairModel) -> Result<ClassVec> {
    p.certified_ample()
}

pub fn defining_configuration(p: &PairModel) -> ExceptionalConfiguration {
    p.defining_configuration()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::toric::fan_from_selfintersections;

    fn p2_axes(coords: [GmElem; 3]) -> PairModel {
        let fan = fan_from_selfintersections(&[1, 1, 1]).unwrap();
        let [a, b, c] = coords;
        build_pair(
            fan,
            vec![
                BlowupEntry::point(0, a),
                BlowupEntry::point(1, b),
                BlowupEntry::point(2, c),
            ],
        )
        .unwrap()
    }

    fn generic_p2() -> PairModel {
        p2_axes([GmElem::fresh(), GmElem::fresh(), GmElem::fresh()])
    }

    #[test]
    fn p2_three_points() {
        let p = generic_p2();
        assert_eq!(p.rank(), 4);
        assert_eq!(p.boundary_squares(), vec![0, 0, 0]);
        assert_eq!(p.boundary()[0], ClassVec(vec![1, -1, 0, 0]));
        assert_eq!(p.interior_euler(), 3);
        assert_eq!(p.pic().square(p.canonical()), 9 - 3);
        assert_eq!(p.pic().signature(), (1, 3, 0));
        let cfg = p.defining_configuration();
        assert_eq!(cfg.combinatorial_type(3), vec![1, 1, 1]);
        cfg.validate(&p).unwrap();
        assert!(p.is_generic());
    }

    #[test]
    fn toric_pairs() {
        let fan = fan_from_selfintersections(&[-1, 0, 1, 0]).unwrap();
        let p = build_pair(fan, vec![]).unwrap();
        assert_eq!(p.interior_euler(), 0);
        assert!(p.defining_configuration().is_empty());
        let h = p.certified_ample().unwrap();
        for d in p.boundary() {
            assert!(p.pic().inner(&h, d) > 0);
        }
    }

    #[test]
    fn chains() {
        let fan = fan_from_selfintersections(&[1, 1, 1]).unwrap();
        let p = build_pair(fan, vec![BlowupEntry::new(0, GmElem::fresh(), 2)]).unwrap();
        assert_eq!(p.rank(), 3);
        assert_eq!(p.boundary_squares(), vec![-1, 1, 1]);
        let cfg = p.defining_configuration();
        assert_eq!(cfg.len(), 2);
        cfg.validate(&p).unwrap();
        // C_2 = E_2 + E_1 as curves, which is the first total transform e_1.
        let curves = p.chain_curves(0);
        let c2 = &curves[0] + &curves[1];
        assert_eq!(p.pic().square(&c2), -1);
        assert!(cfg.classes.contains(&c2));
        assert_eq!(p.pic().square(&curves[0]), -2);
        assert_eq!(p.pic().inner(&curves[0], &p.boundary()[0]), 0);
        assert_eq!(p.pic().inner(&curves[1], &p.boundary()[0]), 1);
        let h = p.certified_ample().unwrap();
        for c in curves.iter().chain(p.boundary()) {
            assert!(p.pic().inner(&h, c) > 0);
        }
    }

    #[test]
    fn invalid_entries() {
        let fan = fan_from_selfintersections(&[1, 1, 1]).unwrap();
        assert!(matches!(
            build_pair(fan.clone(), vec![BlowupEntry::point(3, GmElem::one())]),
            Err(Error::InvalidBlowup(_))
        ));
        assert!(build_pair(fan.clone(), vec![BlowupEntry::new(0, GmElem::one(), 0)]).is_err());
        let t = GmElem::symbol("t");
        assert!(build_pair(
            fan,
            vec![BlowupEntry::point(0, t.clone()), BlowupEntry::point(0, t)]
        )
        .is_err());
    }

    #[test]
    fn certified_ample_examples() {
        let p = generic_p2();
        assert_eq!(p.certified_ample().unwrap(), ClassVec(vec![3, -1, -1, -1]));
        let m = GmElem::minus_one();
        let ye = p2_axes([m.clone(), m.clone(), m]);
        assert_eq!(ye.certified_ample().unwrap(), ClassVec(vec![4, -1, -1, -1]));
    }

    #[test]
    fn toric_blowup_keeps_euler() {
        let p = generic_p2();
        for node in 0..3 {
            let b = p.toric_blowup(node).unwrap();
            assert_eq!(b.interior_euler(), p.interior_euler());
            assert_eq!(b.n(), 4);
            let emb = p.toric_blowup_embedding(node, &b);
            for i in 0..p.rank() {
                for j in 0..p.rank() {
                    assert_eq!(b.pic().inner(&emb[i], &emb[j]), p.pic().gram()[i][j]);
                }
            }
        }
        let q = p
            .with_blowup(BlowupEntry::new(1, GmElem::fresh(), 2))
            .unwrap();
        assert_eq!(q.interior_euler(), p.interior_euler() + 2);
    }

    #[test]
    fn json_round_trip() {
        let p = p2_axes([
            GmElem::symbol("q1"),
            GmElem::symbol("q2"),
            GmElem::symbol("q3"),
        ]);
        let s = serde_json::to_string(&p).unwrap();
        let back: PairModel = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
        assert_eq!(serde_json::to_string(&back).unwrap(), s);
    }
}
