//! Built-in example pairs.

use crate::error::{Error, Result};
use crate::pair::{build_pair, BlowupEntry, PairModel};
use crate::period::GmElem;
use crate::toric::fan_from_selfintersections;

pub const NAMES: [&str; 5] = ["p2-axes", "ye-p2-axes", "f1-base", "cycle7", "cycle8"];

/// P² with one point on each coordinate line, at `q1, q2, q3`.
pub fn p2_axes() -> PairModel {
    p2_axes_with([
        GmElem::symbol("q1"),
        GmElem::symbol("q2"),
        GmElem::symbol("q3"),
    ])
}

pub fn p2_axes_with(coords: [GmElem; 3]) -> PairModel {
    let [a, b, c] = coords;
    build_pair(
        fan_from_selfintersections(&[1, 1, 1]).expect("P2 fan"),
        vec![
            BlowupEntry::point(0, a),
            BlowupEntry::point(1, b),
            BlowupEntry::point(2, c),
        ],
    )
    .expect("valid pair")
}

/// The P² pair with trivial period point.
pub fn ye_p2_axes() -> PairModel {
    let m = GmElem::minus_one();
    p2_axes_with([m.clone(), m.clone(), m])
}

/// The toric pair `F_1` with boundary squares `(-1, 0, 1, 0)`.
pub fn f1_base() -> PairModel {
    build_pair(
        fan_from_selfintersections(&[-1, 0, 1, 0]).expect("F1 fan"),
        Vec::new(),
    )
    .expect("toric pair")
}

/// Blow up the interior of every `(-1)`-component at the canonical point `-1`.
fn minus_one_components_blown_up(toric: PairModel) -> PairModel {
    let entries = toric
        .boundary_squares()
        .iter()
        .enumerate()
        .filter(|(_, &d)| d == -1)
        .map(|(i, _)| BlowupEntry::point(i, GmElem::minus_one()))
        .collect();
    build_pair(toric.fan().clone(), entries).expect("valid pair")
}

/// Three corner blowups of `F_1`, then one interior blowup on each of the five `(-1)`-components.
pub fn cycle7() -> PairModel {
    let t = f1_base()
        .toric_blowup(0)
        .and_then(|p| p.toric_blowup(2))
        .and_then(|p| p.toric_blowup(4))
        .expect("corner blowups");
    minus_one_components_blown_up(t)
}

/// Three corner blowups of `F_1` and one more at the node between the last exceptional curve and `D_4`, then one interior blowup on each of the four `(-1)`-components.
pub fn cycle8() -> PairModel {
    let t = f1_base()
        .toric_blowup(0)
        .and_then(|p| p.toric_blowup(2))
        .and_then(|p| p.toric_blowup(4))
        .and_then(|p| p.toric_blowup(5))
        .expect("corner blowups");
    minus_one_components_blown_up(t)
}

pub fn example(name: &str) -> Result<PairModel> {
    match name {
        "p2-axes" => Ok(p2_axes()),
        "ye-p2-axes" => Ok(ye_p2_axes()),
        "f1-base" => Ok(f1_base()),
        "cycle7" => Ok(cycle7()),
        "cycle8" => Ok(cycle8()),
        _ => Err(Error::Parse(format!(
            "unknown example {name:?}; available: {}",
            NAMES.join(", ")
        ))),
    }
}
