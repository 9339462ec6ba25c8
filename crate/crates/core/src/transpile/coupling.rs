use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const IBMQX2_JSON: &str = include_str!("../../data/maps/ibmqx2.json");
const VIGO_JSON: &str = include_str!("../../data/maps/vigo.json");

/// Names accepted by [`CouplingMap::preset`].
pub const PRESET_MAPS: [&str; 2] = ["ibmqx2", "vigo"];

/// Undirected connectivity of a device's physical qubits.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CouplingMap {
    pub name: String,
    pub qubits: usize,
    pub edges: Vec<[usize; 2]>,
    /// Optional named initial layout (logical → physical).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub layout: Option<Vec<usize>>,
}

impl CouplingMap {
    pub fn new(name: impl Into<String>, qubits: usize, edges: Vec<[usize; 2]>) -> Result<Self> {
        let map = CouplingMap {
            name: name.into(),
            qubits,
            edges,
            layout: None,
        };
        map.validate()?;
        Ok(map)
    }

    pub fn full(qubits: usize) -> Self {
        let edges = (0..qubits)
            .flat_map(|a| (a + 1..qubits).map(move |b| [a, b]))
            .collect();
        CouplingMap {
            name: format!("full{qubits}"),
            qubits,
            edges,
            layout: None,
        }
    }

    pub fn line(qubits: usize) -> Self {
        CouplingMap {
            name: format!("line{qubits}"),
            qubits,
            edges: (1..qubits).map(|b| [b - 1, b]).collect(),
            layout: None,
        }
    }

    /// Shipped device maps: `ibmqx2` (bow tie) and `vigo` (T shape).
    pub fn preset(name: &str) -> Result<Self> {
        let json = match name.to_ascii_lowercase().as_str() {
            "ibmqx2" => IBMQX2_JSON,
            "vigo" | "ibmq_vigo" => VIGO_JSON,
            _ => return Err(Error::UnknownPreset(name.to_string())),
        };
        Self::from_json(json)
    }

    pub fn from_json(json: &str) -> Result<Self> {
        let map: CouplingMap = serde_json::from_str(json)?;
        map.validate()?;
        Ok(map)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    fn validate(&self) -> Result<()> {
        for &[a, b] in &self.edges {
            for q in [a, b] {
                if q >= self.qubits {
                    return Err(Error::QubitOutOfRange {
                        index: q,
                        num_qubits: self.qubits,
                    });
                }
            }
            if a == b {
                return Err(Error::InvalidArgument(format!("self-loop on qubit {a}")));
            }
        }
        if let Some(layout) = &self.layout {
            check_layout(layout, self.qubits)?;
        }
        Ok(())
    }

    /// Copy with the edge `{a, b}` removed.
    pub fn without_edge(&self, a: usize, b: usize) -> Self {
        let mut out = self.clone();
        out.edges
            .retain(|&[x, y]| !((x == a && y == b) || (x == b && y == a)));
        out.name = format!("{}-{a}{b}", self.name);
        out
    }

    pub fn are_coupled(&self, a: usize, b: usize) -> bool {
        self.edges
            .iter()
            .any(|&[x, y]| (x == a && y == b) || (x == b && y == a))
    }

    /// Neighbors in ascending order.
    pub fn neighbors(&self, q: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .edges
            .iter()
            .filter_map(|&[x, y]| {
                if x == q {
                    Some(y)
                } else if y == q {
                    Some(x)
                } else {
                    None
                }
            })
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn is_connected(&self) -> bool {
        if self.qubits == 0 {
            return true;
        }
        self.bfs_parents(0).iter().all(Option::is_some)
    }

    /// BFS parent pointers from `source`; ties go to the lowest index.
    fn bfs_parents(&self, source: usize) -> Vec<Option<usize>> {
        let adjacency: Vec<Vec<usize>> = (0..self.qubits).map(|q| self.neighbors(q)).collect();
        let mut parent = vec![None; self.qubits];
        parent[source] = Some(source);
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            for &v in &adjacency[u] {
                if parent[v].is_none() {
                    parent[v] = Some(u);
                    queue.push_back(v);
                }
            }
        }
        parent
    }

    /// Shortest path `from → to` inclusive of both ends.
    pub fn shortest_path(&self, from: usize, to: usize) -> Option<Vec<usize>> {
        // Search from `to` so that following parents walks forward from `from`.
        let parent = self.bfs_parents(to);
        parent[from]?;
        let mut path = vec![from];
        let mut cur = from;
        while cur != to {
            cur = parent[cur]?;
            path.push(cur);
        }
        Some(path)
    }
}

pub(crate) fn check_layout(layout: &[usize], physical: usize) -> Result<()> {
    let mut seen = vec![false; physical];
    for &p in layout {
        if p >= physical {
            return Err(Error::InvalidLayout(format!(
                "physical qubit {p} out of range"
            )));
        }
        if std::mem::replace(&mut seen[p], true) {
            return Err(Error::InvalidLayout(format!(
                "physical qubit {p} used twice"
            )));
        }
    }
    Ok(())
}
