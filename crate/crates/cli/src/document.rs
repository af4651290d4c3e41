use serde::{Deserialize, Serialize};

use looijenga::pair::{BlowupEntry, PairModel};
use looijenga::period::BoundaryMarking;
use looijenga::toric::Fan2D;

/// A pair on disk: fan, blowups, and optionally a boundary marking and a name.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub fan: Fan2D,
    pub blowups: Vec<BlowupEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub marking: Option<BoundaryMarking>,
}

impl PairDocument {
    pub fn from_pair(
        name: Option<String>,
        p: &PairModel,
        marking: Option<BoundaryMarking>,
    ) -> Self {
        PairDocument {
            name,
            fan: p.fan().clone(),
            blowups: p.blowups().to_vec(),
            marking,
        }
    }

    pub fn pair(&self) -> looijenga::Result<PairModel> {
        looijenga::pair::build_pair(self.fan.clone(), self.blowups.clone())
    }

    pub fn marking_or_standard(&self) -> BoundaryMarking {
        self.marking
            .clone()
            .unwrap_or_else(|| BoundaryMarking::standard(self.fan.len()))
    }
}

/// Pretty JSON with keys in sorted order.
pub fn canonical_json<T: Serialize>(v: &T) -> serde_json::Result<String> {
    let value = serde_json::to_value(v)?;
    let mut s = serde_json::to_string_pretty(&value)?;
    s.push('\n');
    Ok(s)
}
