//! The out-degree-one transfer digraph of a perfect matching, its
//! dicycles, and the canonical first dicycle.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::grid::{corners_of, winding_of, GridEdge, Node, ParityClass, TorusDims, Traversal};
use crate::matching::{MatchType, PerfectMatching};

/// Successor structure over the grid nodes: black nodes follow their
/// matching edge; a white node matched to u continues one step past u,
/// collinear with the matched edge.
#[derive(Debug, Clone)]
pub struct TransferDigraph {
    dims: TorusDims,
    succ: Vec<usize>,
}

impl TransferDigraph {
    pub fn from_matching(m: &PerfectMatching) -> Self {
        let dims = m.dims();
        let (rows, cols) = (dims.m(), dims.n());
        let succ = (0..dims.node_count())
            .map(|id| {
                let v = dims.node_from_id(id);
                let u = m.partner(v);
                if v.is_black() {
                    return dims.node_id(u);
                }
                let w = if u.row == v.row {
                    if u.col == (v.col + 1) % cols {
                        Node::new(v.row, (v.col + cols - 1) % cols)
                    } else {
                        Node::new(v.row, (v.col + 1) % cols)
                    }
                } else if u.row == (v.row + 1) % rows {
                    Node::new((v.row + rows - 1) % rows, v.col)
                } else {
                    Node::new((v.row + 1) % rows, v.col)
                };
                dims.node_id(w)
            })
            .collect();
        TransferDigraph { dims, succ }
    }

    pub fn dims(&self) -> TorusDims {
        self.dims
    }

    pub fn successor(&self, v: Node) -> Node {
        self.dims.node_from_id(self.succ[self.dims.node_id(v)])
    }

    /// All dicycles, found by successor chasing with three-color marking.
    /// Out-degree one makes them pairwise vertex disjoint.
    pub fn dicycles(&self) -> Vec<DiCycle> {
        let mn = self.dims.node_count();
        let mut color = vec![0u8; mn];
        let mut pos = vec![usize::MAX; mn];
        let mut cycles = Vec::new();
        for start in 0..mn {
            if color[start] != 0 {
                continue;
            }
            let mut path = Vec::new();
            let mut v = start;
            while color[v] == 0 {
                color[v] = 1;
                pos[v] = path.len();
                path.push(v);
                v = self.succ[v];
            }
            if color[v] == 1 {
                cycles.push(self.make_cycle(&path[pos[v]..]));
            }
            for &u in &path {
                color[u] = 2;
            }
        }
        cycles
    }

    fn make_cycle(&self, ids: &[usize]) -> DiCycle {
        // Rotate so the smallest node leads; the successor order itself
        // is preserved.
        let min_at = ids
            .iter()
            .enumerate()
            .min_by_key(|&(_, id)| id)
            .map(|(i, _)| i)
            .expect("cycle is nonempty");
        let nodes: Vec<Node> = (0..ids.len())
            .map(|k| self.dims.node_from_id(ids[(min_at + k) % ids.len()]))
            .collect();
        let shadow = (0..nodes.len())
            .map(|i| {
                GridEdge::between(self.dims, nodes[i], nodes[(i + 1) % nodes.len()])
                    .expect("successors are adjacent")
            })
            .collect();
        DiCycle {
            dims: self.dims,
            nodes,
            shadow,
        }
    }

    /// The dicycle whose sorted node list is lexicographically smallest.
    /// Distinct dicycles are vertex disjoint, so the order is total, and
    /// it ignores edge orientation as required for the involution.
    pub fn canonical_first(&self) -> DiCycle {
        self.dicycles()
            .into_iter()
            .min_by_key(|c| {
                let mut key = c.nodes.clone();
                key.sort_unstable();
                key
            })
            .expect("an out-degree-one digraph always has a dicycle")
    }
}

/// Convenience for the cycle that drives the involution.
pub fn canonical_cycle(m: &PerfectMatching) -> DiCycle {
    TransferDigraph::from_matching(m).canonical_first()
}

/// A dicycle together with its undirected shadow edge set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiCycle {
    dims: TorusDims,
    nodes: Vec<Node>,
    shadow: BTreeSet<GridEdge>,
}

impl DiCycle {
    pub fn dims(&self) -> TorusDims {
        self.dims
    }

    /// Nodes in successor order, starting from the smallest node.
    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Undirected edges traversed by the cycle.
    pub fn shadow(&self) -> &BTreeSet<GridEdge> {
        &self.shadow
    }

    pub fn sorted_nodes(&self) -> Vec<Node> {
        let mut nodes = self.nodes.clone();
        nodes.sort_unstable();
        nodes
    }

    pub fn layer_a_count(&self) -> usize {
        self.shadow.iter().filter(|e| e.in_layer_a(self.dims)).count()
    }

    pub fn layer_b_count(&self) -> usize {
        self.shadow.iter().filter(|e| e.in_layer_b(self.dims)).count()
    }

    pub fn cycle_type(&self) -> CycleType {
        match (self.layer_a_count() % 2 == 0, self.layer_b_count() % 2 == 0) {
            (true, true) => CycleType::Ee,
            (true, false) => CycleType::Eo,
            (false, true) => CycleType::Oe,
            (false, false) => CycleType::Oo,
        }
    }

    pub fn winding(&self, t: Traversal) -> (i64, i64) {
        winding_of(self.dims, &self.nodes, t)
    }

    pub fn corners(&self) -> Vec<(Node, ParityClass)> {
        corners_of(self.dims, &self.nodes)
    }

    /// True iff consecutive shadow edges strictly alternate between edges
    /// and non-edges of `m`.
    pub fn alternates_with(&self, m: &PerfectMatching) -> bool {
        let len = self.nodes.len();
        let membership: Vec<bool> = (0..len)
            .map(|i| {
                let e = GridEdge::between(self.dims, self.nodes[i], self.nodes[(i + 1) % len])
                    .expect("successors are adjacent");
                m.contains(&e)
            })
            .collect();
        (0..len).all(|i| membership[i] != membership[(i + 1) % len])
    }
}

/// Dicycle parity type; e/o give the parities of |U(C) n A| and |U(C) n B|.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CycleType {
    Ee,
    Eo,
    Oe,
    Oo,
}

impl CycleType {
    pub fn as_str(&self) -> &'static str {
        match self {
            CycleType::Ee => "ee",
            CycleType::Eo => "eo",
            CycleType::Oe => "oe",
            CycleType::Oo => "oo",
        }
    }

    pub fn to_match_type(self) -> MatchType {
        match self {
            CycleType::Ee => MatchType::EE,
            CycleType::Eo => MatchType::EO,
            CycleType::Oe => MatchType::OE,
            CycleType::Oo => MatchType::OO,
        }
    }
}

impl std::fmt::Display for CycleType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}
