//! JSON schemas for the wire types and conversions to the core types.
//!
//! Tree vertex: `{"h": k, "branch": {"level": label, ...}}`.
//! DL vertex: an array of tree vertices.
//! Lamp stand: `{"lamps": {"pos": state, ...}, "pos": k}`.
//! Boundary point: `{"side": 0|1, "head": {...}, "tail": [...], "tail_from": p}`
//! (side 0 tails repeat toward +∞ from `tail_from`, side 1 toward -∞).
//! Ray descriptor: `{"base": [...], "moves": ["0(1)-1", ...], "eventual":
//! {"up": i, "labels": [...], "down": j}}`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use dl_core::boundary2::{BoundaryPoint, ClassIndex, Side};
use dl_core::dlgraph::GraphParams;
use dl_core::lamplighter::LampStand;
use dl_core::paths::Path;
use dl_core::rays::{AsymptoticCertificate, EventualPattern, RayDescriptor, SharedPrefix};
use dl_core::{DLVertex, Move, TreeVertex};

pub type JsonError = String;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TreeVertexDto {
    pub h: i64,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub branch: BTreeMap<String, u8>,
}

impl TreeVertexDto {
    pub fn from_core(v: &TreeVertex) -> Self {
        TreeVertexDto {
            h: v.height(),
            branch: v
                .branch()
                .iter()
                .map(|(&level, &label)| (level.to_string(), label))
                .collect(),
        }
    }

    pub fn to_core(&self) -> Result<TreeVertex, JsonError> {
        let mut branch = BTreeMap::new();
        for (level, &label) in &self.branch {
            let level: i64 = level
                .parse()
                .map_err(|_| format!("bad branch level '{level}'"))?;
            branch.insert(level, label);
        }
        TreeVertex::new(self.h, branch).map_err(|e| e.to_string())
    }
}

pub fn dl_vertex_to_dto(v: &DLVertex) -> Vec<TreeVertexDto> {
    v.coords().iter().map(TreeVertexDto::from_core).collect()
}

pub fn dl_vertex_from_dto(dto: &[TreeVertexDto]) -> Result<DLVertex, JsonError> {
    let coords = dto
        .iter()
        .map(TreeVertexDto::to_core)
        .collect::<Result<Vec<_>, _>>()?;
    DLVertex::new(coords).map_err(|e| e.to_string())
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LampStandDto {
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub lamps: BTreeMap<String, u8>,
    pub pos: i64,
}

impl LampStandDto {
    pub fn from_core(g: &LampStand) -> Self {
        LampStandDto {
            lamps: g
                .lamps()
                .iter()
                .map(|(&p, &s)| (p.to_string(), s))
                .collect(),
            pos: g.pos(),
        }
    }

    pub fn to_core(&self, q: u8) -> Result<LampStand, JsonError> {
        let mut lamps = BTreeMap::new();
        for (p, &s) in &self.lamps {
            let p: i64 = p.parse().map_err(|_| format!("bad lamp position '{p}'"))?;
            lamps.insert(p, s);
        }
        LampStand::new(lamps, self.pos, q).map_err(|e| e.to_string())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundaryPointDto {
    pub side: u8,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub head: BTreeMap<String, u8>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub tail: Vec<u8>,
    #[serde(default)]
    pub tail_from: i64,
}

impl BoundaryPointDto {
    pub fn from_core(x: &BoundaryPoint) -> Self {
        BoundaryPointDto {
            side: x.side().index(),
            head: x
                .config()
                .head_literal()
                .iter()
                .map(|(&p, &s)| (p.to_string(), s))
                .collect(),
            tail: x.config().tail_literal().to_vec(),
            tail_from: x.config().tail_from_literal(),
        }
    }

    pub fn to_core(&self, q: u8) -> Result<BoundaryPoint, JsonError> {
        let side = Side::from_index(self.side).ok_or("side must be 0 or 1")?;
        let mut head = BTreeMap::new();
        for (p, &s) in &self.head {
            let p: i64 = p.parse().map_err(|_| format!("bad head position '{p}'"))?;
            head.insert(p, s);
        }
        BoundaryPoint::from_parts(side, head, self.tail.clone(), self.tail_from, q)
            .map_err(|e| e.to_string())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClassIndexDto {
    pub side: u8,
    pub n: u64,
}

impl ClassIndexDto {
    pub fn from_core(c: ClassIndex) -> Self {
        ClassIndexDto {
            side: c.side.index(),
            n: c.n,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EventualDto {
    pub up: usize,
    pub labels: Vec<u8>,
    pub down: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RayDescriptorDto {
    pub base: Vec<TreeVertexDto>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub moves: Vec<String>,
    pub eventual: EventualDto,
}

impl RayDescriptorDto {
    pub fn from_core(r: &RayDescriptor) -> Self {
        RayDescriptorDto {
            base: dl_vertex_to_dto(r.base()),
            moves: r.prefix().moves().iter().map(|m| m.to_string()).collect(),
            eventual: EventualDto {
                up: r.eventual().up_tree,
                labels: r.eventual().labels.clone(),
                down: r.eventual().down_tree,
            },
        }
    }

    pub fn to_core(&self, params: &GraphParams) -> Result<RayDescriptor, JsonError> {
        let base = dl_vertex_from_dto(&self.base)?;
        let moves = self
            .moves
            .iter()
            .map(|m| m.parse::<Move>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| e.to_string())?;
        let prefix = Path::new(base, moves, params).map_err(|e| e.to_string())?;
        RayDescriptor::new(
            prefix,
            EventualPattern {
                up_tree: self.eventual.up,
                labels: self.eventual.labels.clone(),
                down_tree: self.eventual.down,
            },
            params,
        )
        .map_err(|e| e.to_string())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CertificateDto {
    pub merge_index: usize,
    pub window: usize,
    pub tree_distances: Vec<u64>,
    pub distance_bound: u64,
}

impl CertificateDto {
    pub fn from_core(c: &AsymptoticCertificate) -> Self {
        CertificateDto {
            merge_index: c.merge_index,
            window: c.window,
            tree_distances: c.tree_distances.clone(),
            distance_bound: c.distance_bound,
        }
    }
}

/// Shared prefix length; `null` means the witness rays coincide entirely.
pub fn shared_prefix_to_json(s: SharedPrefix) -> serde_json::Value {
    match s {
        SharedPrefix::Forever => serde_json::Value::Null,
        SharedPrefix::Upto(k) => serde_json::json!(k),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PathDto {
    pub base: Vec<TreeVertexDto>,
    pub moves: Vec<String>,
    pub endpoint: Vec<TreeVertexDto>,
    pub turns_per_tree: Vec<u64>,
}

impl PathDto {
    pub fn from_core(p: &Path) -> Self {
        PathDto {
            base: dl_vertex_to_dto(p.base()),
            moves: p.moves().iter().map(|m| m.to_string()).collect(),
            endpoint: dl_vertex_to_dto(&p.endpoint()),
            turns_per_tree: p.turns_per_tree(),
        }
    }
}
