//! Network coding instances: a directed acyclic multigraph with sources,
//! terminals, a demand matrix and per-edge alphabet sizes.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub id: String,
    pub tail: String,
    pub head: String,
    pub alphabet_size: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Source {
    pub node: String,
    pub alphabet_size: usize,
}

/// `demands[s][t]` is 1 iff terminal `t` requests source `s`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NetworkInstance {
    pub nodes: Vec<String>,
    pub edges: Vec<Edge>,
    pub sources: Vec<Source>,
    pub terminals: Vec<String>,
    pub demands: Vec<Vec<u8>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub kind: String,
    pub detail: String,
}

impl Violation {
    fn new(kind: &str, detail: impl Into<String>) -> Self {
        Violation {
            kind: kind.into(),
            detail: detail.into(),
        }
    }
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.kind, self.detail)
    }
}

impl NetworkInstance {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Invalid(format!("instance: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance serializes")
    }

    pub fn edge(&self, id: &str) -> Option<&Edge> {
        self.edges.iter().find(|e| e.id == id)
    }

    pub fn edge_index(&self, id: &str) -> Result<usize> {
        self.edges
            .iter()
            .position(|e| e.id == id)
            .ok_or_else(|| Error::domain(format!("unknown edge {id:?}")))
    }

    pub fn source_index(&self, node: &str) -> Option<usize> {
        self.sources.iter().position(|s| s.node == node)
    }

    pub fn terminal_index(&self, node: &str) -> Option<usize> {
        self.terminals.iter().position(|t| t == node)
    }

    /// Indices of edges entering `node`, sorted by edge id.
    pub fn in_edges(&self, node: &str) -> Vec<usize> {
        let mut v: Vec<usize> = (0..self.edges.len())
            .filter(|&i| self.edges[i].head == node)
            .collect();
        v.sort_by(|&a, &b| self.edges[a].id.cmp(&self.edges[b].id));
        v
    }

    /// Source indices demanded by terminal index `t`, in source order.
    pub fn demanded_by(&self, t: usize) -> Vec<usize> {
        (0..self.sources.len())
            .filter(|&s| self.demands.get(s).and_then(|r| r.get(t)) == Some(&1))
            .collect()
    }

    pub fn source_sizes(&self) -> Vec<usize> {
        self.sources.iter().map(|s| s.alphabet_size).collect()
    }

    /// Every violated model constraint; empty iff the instance is valid.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let node_set: BTreeSet<&str> = self.nodes.iter().map(String::as_str).collect();
        if node_set.len() != self.nodes.len() {
            out.push(Violation::new("duplicate node", "node ids must be unique"));
        }
        let mut edge_ids = BTreeSet::new();
        for e in &self.edges {
            if !edge_ids.insert(e.id.as_str()) {
                out.push(Violation::new(
                    "duplicate edge",
                    format!("edge id {:?} repeats", e.id),
                ));
            }
            for end in [&e.tail, &e.head] {
                if !node_set.contains(end.as_str()) {
                    out.push(Violation::new(
                        "unknown node",
                        format!("edge {:?} references node {end:?}", e.id),
                    ));
                }
            }
            if e.alphabet_size == 0 {
                out.push(Violation::new(
                    "empty alphabet",
                    format!("edge {:?} has alphabet size 0", e.id),
                ));
            }
        }

        let mut source_nodes = BTreeSet::new();
        for s in &self.sources {
            if !source_nodes.insert(s.node.as_str()) {
                out.push(Violation::new(
                    "duplicate source",
                    format!("source {:?} repeats", s.node),
                ));
            }
            if !node_set.contains(s.node.as_str()) {
                out.push(Violation::new(
                    "unknown node",
                    format!("source {:?} is not a node", s.node),
                ));
            }
            if s.alphabet_size == 0 {
                out.push(Violation::new(
                    "empty alphabet",
                    format!("source {:?} has alphabet size 0", s.node),
                ));
            }
            if self.edges.iter().any(|e| e.head == s.node) {
                out.push(Violation::new(
                    "source has incoming edge",
                    format!("source {:?}", s.node),
                ));
            }
        }

        let mut terminal_nodes = BTreeSet::new();
        for t in &self.terminals {
            if !terminal_nodes.insert(t.as_str()) {
                out.push(Violation::new(
                    "duplicate terminal",
                    format!("terminal {t:?} repeats"),
                ));
            }
            if !node_set.contains(t.as_str()) {
                out.push(Violation::new(
                    "unknown node",
                    format!("terminal {t:?} is not a node"),
                ));
            }
            if self.edges.iter().any(|e| &e.tail == t) {
                out.push(Violation::new(
                    "terminal has outgoing edge",
                    format!("terminal {t:?}"),
                ));
            }
            if source_nodes.contains(t.as_str()) {
                out.push(Violation::new("source is terminal", format!("node {t:?}")));
            }
        }

        if self.demands.len() != self.sources.len()
            || self.demands.iter().any(|r| r.len() != self.terminals.len())
        {
            out.push(Violation::new(
                "demand shape",
                format!(
                    "demand matrix must be {} x {}",
                    self.sources.len(),
                    self.terminals.len()
                ),
            ));
        } else {
            if self.demands.iter().flatten().any(|&d| d > 1) {
                out.push(Violation::new(
                    "demand entry",
                    "demand entries must be 0 or 1",
                ));
            }
            for (t, name) in self.terminals.iter().enumerate() {
                if self.demanded_by(t).is_empty() {
                    out.push(Violation::new(
                        "terminal without demand",
                        format!("terminal {name:?} demands no source"),
                    ));
                }
            }
        }

        if self.topological_order().is_err() {
            out.push(Violation::new(
                "graph not acyclic",
                "the edge set contains a cycle",
            ));
        }
        out
    }

    /// Edge indices such that every edge follows all edges into its tail.
    /// Among ready edges the smallest id goes first.
    pub fn topological_order(&self) -> Result<Vec<usize>> {
        let mut pending_in: BTreeMap<&str, usize> = BTreeMap::new();
        for e in &self.edges {
            *pending_in.entry(e.head.as_str()).or_default() += 1;
        }
        let waiting =
            |node: &str, pending: &BTreeMap<&str, usize>| pending.get(node).copied().unwrap_or(0);
        let mut ready: BTreeSet<(&str, usize)> = self
            .edges
            .iter()
            .enumerate()
            .filter(|(_, e)| waiting(&e.tail, &pending_in) == 0)
            .map(|(i, e)| (e.id.as_str(), i))
            .collect();
        let mut order = Vec::with_capacity(self.edges.len());
        while let Some((_, i)) = ready.pop_first() {
            order.push(i);
            let head = self.edges[i].head.as_str();
            let left = pending_in.get_mut(head).expect("head counted");
            *left -= 1;
            if *left == 0 {
                for (j, e) in self.edges.iter().enumerate() {
                    if e.tail == head {
                        ready.insert((e.id.as_str(), j));
                    }
                }
            }
        }
        if order.len() != self.edges.len() {
            return Err(Error::precondition("graph is not acyclic"));
        }
        Ok(order)
    }

    /// The same instance without edge `id`.
    pub fn remove_edge(&self, id: &str) -> Result<NetworkInstance> {
        let idx = self.edge_index(id)?;
        let mut out = self.clone();
        out.edges.remove(idx);
        Ok(out)
    }
}
