//! Perfect matchings: representation, validation, streaming enumeration,
//! per-cycle edge profiles, parity types, and the matching file format.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{Direction, GridEdge, Node, TorusDims};

const UNCOVERED: usize = usize::MAX;

/// A perfect matching of the torus grid. The edge set is kept in canonical
/// sorted order; a node-to-partner table is derived at construction.
#[derive(Debug, Clone)]
pub struct PerfectMatching {
    dims: TorusDims,
    edges: BTreeSet<GridEdge>,
    partner: Vec<usize>,
}

impl PartialEq for PerfectMatching {
    fn eq(&self, other: &Self) -> bool {
        self.dims == other.dims && self.edges == other.edges
    }
}

impl Eq for PerfectMatching {}

impl PerfectMatching {
    pub fn new(dims: TorusDims, edges: impl IntoIterator<Item = GridEdge>) -> Result<Self> {
        let edges: BTreeSet<GridEdge> = edges.into_iter().collect();
        match partner_table(dims, &edges)? {
            Ok(partner) => Ok(PerfectMatching {
                dims,
                edges,
                partner,
            }),
            Err(reason) => Err(Error::NotPerfectMatching(reason)),
        }
    }

    pub(crate) fn from_partner_unchecked(dims: TorusDims, partner: Vec<usize>) -> Self {
        let mut edges = BTreeSet::new();
        for (id, &p) in partner.iter().enumerate() {
            if p > id {
                let e = GridEdge::between(dims, dims.node_from_id(id), dims.node_from_id(p))
                    .expect("partner table holds adjacent pairs");
                edges.insert(e);
            }
        }
        PerfectMatching {
            dims,
            edges,
            partner,
        }
    }

    pub fn dims(&self) -> TorusDims {
        self.dims
    }

    pub fn edges(&self) -> &BTreeSet<GridEdge> {
        &self.edges
    }

    pub fn contains(&self, e: &GridEdge) -> bool {
        self.edges.contains(e)
    }

    /// The unique node matched with `v`.
    pub fn partner(&self, v: Node) -> Node {
        self.dims
            .node_from_id(self.partner[self.dims.node_id(v)])
    }

    /// Edge counts per horizontal and per vertical cycle.
    pub fn profile(&self) -> Profile {
        let mut h = vec![0u32; self.dims.m()];
        let mut v = vec![0u32; self.dims.n()];
        for e in &self.edges {
            match e.dir {
                Direction::Horizontal => h[e.origin.row] += 1,
                Direction::Vertical => v[e.origin.col] += 1,
            }
        }
        Profile { h, v }
    }

    pub fn layer_a_count(&self) -> usize {
        self.edges.iter().filter(|e| e.in_layer_a(self.dims)).count()
    }

    pub fn layer_b_count(&self) -> usize {
        self.edges.iter().filter(|e| e.in_layer_b(self.dims)).count()
    }

    /// Parity type from the layer intersections: the first letter is the
    /// parity of |M n A|, the second of |M n B|.
    pub fn match_type(&self) -> MatchType {
        match (self.layer_a_count() % 2 == 0, self.layer_b_count() % 2 == 0) {
            (true, true) => MatchType::EE,
            (true, false) => MatchType::EO,
            (false, true) => MatchType::OE,
            (false, false) => MatchType::OO,
        }
    }

    /// Symmetric difference with an edge set, validated as a matching.
    pub fn symmetric_difference(&self, other: &BTreeSet<GridEdge>) -> Result<PerfectMatching> {
        let edges: BTreeSet<GridEdge> = self.edges.symmetric_difference(other).copied().collect();
        PerfectMatching::new(self.dims, edges)
    }

    /// Canonical single-line JSON form, `{"m":..,"n":..,"edges":[[i,j,"H"],..]}`
    /// with edges sorted by (row, col, direction).
    pub fn to_json(&self) -> String {
        let file = MatchingFile {
            m: self.dims.m(),
            n: self.dims.n(),
            edges: self
                .edges
                .iter()
                .map(|e| {
                    (
                        e.origin.row,
                        e.origin.col,
                        match e.dir {
                            Direction::Horizontal => "H".to_string(),
                            Direction::Vertical => "V".to_string(),
                        },
                    )
                })
                .collect(),
        };
        serde_json::to_string(&file).expect("matching serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: MatchingFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let dims = TorusDims::new(file.m, file.n)
            .map_err(|e| Error::Parse(e.to_string()))?;
        let mut edges = BTreeSet::new();
        for (row, col, dir) in &file.edges {
            let dir = match dir.as_str() {
                "H" => Direction::Horizontal,
                "V" => Direction::Vertical,
                other => {
                    return Err(Error::Parse(format!(
                        "edge direction must be \"H\" or \"V\", got {other:?}"
                    )))
                }
            };
            let e = GridEdge {
                origin: Node::new(*row, *col),
                dir,
            };
            if !edges.insert(e) {
                return Err(Error::Parse(format!(
                    "duplicate edge [{row},{col},{:?}]",
                    dir
                )));
            }
        }
        PerfectMatching::new(dims, edges).map_err(|e| Error::Parse(e.to_string()))
    }

    /// All-horizontal matching pairing columns (0,1), (2,3), ... in every row.
    pub fn horizontal_bricks(dims: TorusDims) -> Self {
        let edges = (0..dims.m())
            .flat_map(|i| (0..dims.n() / 2).map(move |k| GridEdge::horizontal(i, 2 * k)))
            .collect::<Vec<_>>();
        PerfectMatching::new(dims, edges).expect("brick matching is perfect")
    }

    /// All-vertical matching pairing rows (0,1), (2,3), ... in every column.
    pub fn vertical_bricks(dims: TorusDims) -> Self {
        let edges = (0..dims.n())
            .flat_map(|j| (0..dims.m() / 2).map(move |k| GridEdge::vertical(2 * k, j)))
            .collect::<Vec<_>>();
        PerfectMatching::new(dims, edges).expect("brick matching is perfect")
    }
}

/// True iff the edge set covers every node exactly once. Out-of-range
/// edges are an error rather than `false`.
pub fn is_perfect_cover(dims: TorusDims, edges: &BTreeSet<GridEdge>) -> Result<bool> {
    Ok(partner_table(dims, edges)?.is_ok())
}

fn partner_table(
    dims: TorusDims,
    edges: &BTreeSet<GridEdge>,
) -> Result<std::result::Result<Vec<usize>, String>> {
    let mut partner = vec![UNCOVERED; dims.node_count()];
    for e in edges {
        if !dims.contains(e.origin) {
            return Err(Error::EdgeOutOfRange {
                row: e.origin.row,
                col: e.origin.col,
                m: dims.m(),
                n: dims.n(),
            });
        }
        let (a, b) = e.endpoints(dims);
        let (ia, ib) = (dims.node_id(a), dims.node_id(b));
        for (id, v) in [(ia, a), (ib, b)] {
            if partner[id] != UNCOVERED {
                return Ok(Err(format!("node ({},{}) covered twice", v.row, v.col)));
            }
        }
        partner[ia] = ib;
        partner[ib] = ia;
    }
    if let Some(id) = partner.iter().position(|&p| p == UNCOVERED) {
        let v = dims.node_from_id(id);
        return Ok(Err(format!("node ({},{}) is uncovered", v.row, v.col)));
    }
    Ok(Ok(partner))
}

#[derive(Serialize, Deserialize)]
struct MatchingFile {
    m: usize,
    n: usize,
    edges: Vec<(usize, usize, String)>,
}

/// Per-cycle edge counts: `h[i]` horizontal edges in row i, `v[j]`
/// vertical edges in column j.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Profile {
    pub h: Vec<u32>,
    pub v: Vec<u32>,
}

/// Matching parity type; E/O give the parities of |M n A| and |M n B|.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MatchType {
    EE,
    EO,
    OE,
    OO,
}

impl MatchType {
    pub fn as_str(&self) -> &'static str {
        match self {
            MatchType::EE => "EE",
            MatchType::EO => "EO",
            MatchType::OE => "OE",
            MatchType::OO => "OO",
        }
    }

    pub fn to_cycle_type(self) -> crate::digraph::CycleType {
        use crate::digraph::CycleType;
        match self {
            MatchType::EE => CycleType::Ee,
            MatchType::EO => CycleType::Eo,
            MatchType::OE => CycleType::Oe,
            MatchType::OO => CycleType::Oo,
        }
    }
}

impl std::fmt::Display for MatchType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Streams every perfect matching exactly once, in the deterministic
/// order given by backtracking that always matches the first uncovered
/// node (row-major) against its neighbors in east, south, west, north
/// order.
pub fn enumerate(dims: TorusDims) -> Enumerator {
    Enumerator::new(dims)
}

#[derive(Debug)]
pub struct Enumerator {
    dims: TorusDims,
    partner: Vec<usize>,
    stack: Vec<Frame>,
    neighbor_ids: Vec<[usize; 4]>,
    first_choices: (u8, u8),
    started: bool,
    done: bool,
}

#[derive(Debug, Clone, Copy)]
struct Frame {
    v: usize,
    u: usize,
    next_choice: u8,
}

impl Enumerator {
    /// Number of independent branches the enumeration splits into by the
    /// first node's choice of partner.
    pub const BRANCHES: u8 = 4;

    pub fn new(dims: TorusDims) -> Self {
        Self::with_first_choices(dims, 0, Self::BRANCHES)
    }

    /// Restricts the first node's partner to choice `k`; the full stream
    /// is the concatenation of branches 0..4 in order.
    pub fn branch(dims: TorusDims, k: u8) -> Self {
        assert!(k < Self::BRANCHES);
        Self::with_first_choices(dims, k, k + 1)
    }

    fn with_first_choices(dims: TorusDims, lo: u8, hi: u8) -> Self {
        let mn = dims.node_count();
        let neighbor_ids = (0..mn)
            .map(|id| {
                let nb = dims
                    .neighbors(dims.node_from_id(id))
                    .expect("id in range");
                [
                    dims.node_id(nb[0]),
                    dims.node_id(nb[1]),
                    dims.node_id(nb[2]),
                    dims.node_id(nb[3]),
                ]
            })
            .collect();
        Enumerator {
            dims,
            partner: vec![UNCOVERED; mn],
            stack: Vec::with_capacity(mn / 2),
            neighbor_ids,
            first_choices: (lo, hi),
            started: false,
            done: false,
        }
    }

    fn first_uncovered(&self) -> Option<usize> {
        let from = self.stack.last().map_or(0, |f| f.v + 1);
        (from..self.partner.len()).find(|&id| self.partner[id] == UNCOVERED)
    }

    fn choice_range(&self) -> (u8, u8) {
        if self.stack.is_empty() {
            self.first_choices
        } else {
            (0, Self::BRANCHES)
        }
    }

    /// Matches `v` against its first available neighbor with choice index
    /// in [from, to); pushes a frame and reports success.
    fn try_choices(&mut self, v: usize, from: u8, to: u8) -> bool {
        for k in from..to {
            let u = self.neighbor_ids[v][k as usize];
            if self.partner[u] == UNCOVERED {
                self.partner[v] = u;
                self.partner[u] = v;
                self.stack.push(Frame {
                    v,
                    u,
                    next_choice: k + 1,
                });
                return true;
            }
        }
        false
    }

    fn search(&mut self, mut backtracking: bool) -> bool {
        loop {
            if backtracking {
                let Some(Frame { v, u, next_choice }) = self.stack.pop() else {
                    self.done = true;
                    return false;
                };
                self.partner[v] = UNCOVERED;
                self.partner[u] = UNCOVERED;
                let (_, hi) = self.choice_range();
                backtracking = !self.try_choices(v, next_choice, hi);
            } else {
                match self.first_uncovered() {
                    None => return true,
                    Some(v) => {
                        let (lo, hi) = self.choice_range();
                        backtracking = !self.try_choices(v, lo, hi);
                    }
                }
            }
        }
    }
}

impl Iterator for Enumerator {
    type Item = PerfectMatching;

    fn next(&mut self) -> Option<PerfectMatching> {
        if self.done {
            return None;
        }
        let resume = self.started;
        self.started = true;
        if self.search(resume) {
            Some(PerfectMatching::from_partner_unchecked(
                self.dims,
                self.partner.clone(),
            ))
        } else {
            None
        }
    }
}
