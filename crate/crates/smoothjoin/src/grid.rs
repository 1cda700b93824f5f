//! Grid files: patches, adjacencies and a continuity order.

use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};
use smoothjoin_core::continuity::{auto_adjacencies, Patch};
use smoothjoin_core::geometry::{RationalPoint, Simplotope};

use crate::error::CliError;
use crate::json::Q;

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct PatchSpec {
    pub id: String,
    pub base: Vec<Q>,
    /// Displacement vectors per factor, relative to `base`.
    pub blocks: Vec<Vec<Vec<Q>>>,
    pub degrees: Vec<u32>,
}

#[derive(Serialize, Deserialize, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Auto {
    #[serde(rename = "auto")]
    Auto,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct AdjacencySpec {
    pub left: String,
    pub right: String,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(untagged)]
pub enum Adjacencies {
    Auto(Auto),
    List(Vec<AdjacencySpec>),
}

impl Default for Adjacencies {
    fn default() -> Self {
        Adjacencies::List(Vec::new())
    }
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct GridFile {
    pub patches: Vec<PatchSpec>,
    #[serde(default)]
    pub adjacencies: Adjacencies,
    #[serde(default)]
    pub order: u32,
}

impl GridFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Read { path: path.into(), source })?;
        serde_json::from_str(&text).map_err(|source| CliError::Json { path: path.into(), source })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("grid serializes")
    }

    /// Builds the patches, checking ids, dimensions and degree counts.
    pub fn patches(&self) -> Result<Vec<Patch>, CliError> {
        let mut ids = BTreeSet::new();
        let ambient = self.patches.first().map_or(0, |p| p.base.len());
        self.patches
            .iter()
            .map(|spec| {
                if !ids.insert(spec.id.as_str()) {
                    return Err(CliError::Invalid(format!("duplicate patch id `{}`", spec.id)));
                }
                if spec.base.len() != ambient {
                    return Err(CliError::Invalid(format!("patch `{}`: base has dimension {}, expected {ambient}", spec.id, spec.base.len())));
                }
                if spec.degrees.len() != spec.blocks.len() {
                    return Err(CliError::Invalid(format!(
                        "patch `{}`: {} degrees for {} factors",
                        spec.id,
                        spec.degrees.len(),
                        spec.blocks.len()
                    )));
                }
                let mut blocks = Vec::with_capacity(spec.blocks.len());
                for block in &spec.blocks {
                    let mut b = Vec::with_capacity(block.len());
                    for d in block {
                        if d.len() != ambient {
                            return Err(CliError::Invalid(format!("patch `{}`: displacement of dimension {}", spec.id, d.len())));
                        }
                        b.push(d.iter().map(|q| q.0.clone()).collect());
                    }
                    blocks.push(b);
                }
                let base = RationalPoint::new(spec.base.iter().map(|q| q.0.clone()).collect());
                let s = Simplotope::new(base, blocks).map_err(|e| CliError::Invalid(format!("patch `{}`: {e}", spec.id)))?;
                Ok(Patch::new(spec.id.clone(), s, spec.degrees.clone())?)
            })
            .collect()
    }

    pub fn adjacency_indices(&self, patches: &[Patch]) -> Result<Vec<(usize, usize)>, CliError> {
        match &self.adjacencies {
            Adjacencies::Auto(_) => Ok(auto_adjacencies(patches)?),
            Adjacencies::List(list) => list
                .iter()
                .map(|a| {
                    let find = |id: &str| {
                        patches
                            .iter()
                            .position(|p| p.id == id)
                            .ok_or_else(|| CliError::Invalid(format!("adjacency names unknown patch `{id}`")))
                    };
                    Ok((find(&a.left)?, find(&a.right)?))
                })
                .collect(),
        }
    }
}
