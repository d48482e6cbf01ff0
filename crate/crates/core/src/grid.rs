//! Geometry and topology of the toroidal square grid: nodes, canonical
//! edges, the two seam layers, cycle winding numbers, and disk interiors
//! of contractible cycles.

use std::collections::{BTreeSet, HashSet, VecDeque};

use crate::error::{Error, Result};

/// Grid dimensions. Both sides are even and at least 4: a 2-wide torus
/// wraps into a multigraph with parallel edges, which the canonical edge
/// representation below cannot express.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TorusDims {
    m: usize,
    n: usize,
}

impl TorusDims {
    pub fn new(m: usize, n: usize) -> Result<Self> {
        if m < 4 || n < 4 || m % 2 != 0 || n % 2 != 0 {
            return Err(Error::InvalidDims { m, n });
        }
        Ok(TorusDims { m, n })
    }

    /// Number of rows.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Number of columns.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn node_count(&self) -> usize {
        self.m * self.n
    }

    pub fn contains(&self, v: Node) -> bool {
        v.row < self.m && v.col < self.n
    }

    pub fn node_id(&self, v: Node) -> usize {
        v.row * self.n + v.col
    }

    pub fn node_from_id(&self, id: usize) -> Node {
        Node::new(id / self.n, id % self.n)
    }

    /// The four neighbors of `v`, in the fixed order east, south, west,
    /// north (with wraparound). The order is relied on by the matching
    /// enumerator's branch numbering.
    pub fn neighbors(&self, v: Node) -> Result<[Node; 4]> {
        if !self.contains(v) {
            return Err(Error::NodeOutOfRange {
                row: v.row,
                col: v.col,
                m: self.m,
                n: self.n,
            });
        }
        Ok([
            Node::new(v.row, (v.col + 1) % self.n),
            Node::new((v.row + 1) % self.m, v.col),
            Node::new(v.row, (v.col + self.n - 1) % self.n),
            Node::new((v.row + self.m - 1) % self.m, v.col),
        ])
    }
}

/// A grid node, addressed by row and column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Node {
    pub row: usize,
    pub col: usize,
}

impl Node {
    pub fn new(row: usize, col: usize) -> Self {
        Node { row, col }
    }

    /// Checkerboard color: black iff row + col is even.
    pub fn is_black(&self) -> bool {
        (self.row + self.col) % 2 == 0
    }

    /// Row/column index parity class: `Even` when both indices are even,
    /// `Odd` when both are odd, `Mixed` otherwise.
    pub fn parity_class(&self) -> ParityClass {
        match (self.row % 2, self.col % 2) {
            (0, 0) => ParityClass::Even,
            (1, 1) => ParityClass::Odd,
            _ => ParityClass::Mixed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ParityClass {
    Even,
    Odd,
    Mixed,
}

/// Edge direction. `Horizontal` sorts before `Vertical`, which fixes the
/// canonical edge order used by the matching file format.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Direction {
    Horizontal,
    Vertical,
}

/// Canonical undirected edge: a horizontal edge joins its origin (i,j) to
/// (i, j+1 mod n), a vertical edge joins (i,j) to (i+1 mod m, j). Every
/// undirected grid edge has exactly one such form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GridEdge {
    pub origin: Node,
    pub dir: Direction,
}

impl GridEdge {
    pub fn horizontal(row: usize, col: usize) -> Self {
        GridEdge {
            origin: Node::new(row, col),
            dir: Direction::Horizontal,
        }
    }

    pub fn vertical(row: usize, col: usize) -> Self {
        GridEdge {
            origin: Node::new(row, col),
            dir: Direction::Vertical,
        }
    }

    /// Both endpoints, origin first. The origin must lie inside `d`.
    pub fn endpoints(&self, d: TorusDims) -> (Node, Node) {
        let o = self.origin;
        let head = match self.dir {
            Direction::Horizontal => Node::new(o.row, (o.col + 1) % d.n()),
            Direction::Vertical => Node::new((o.row + 1) % d.m(), o.col),
        };
        (o, head)
    }

    /// Layer A: vertical edges joining rows m-1 and 0.
    pub fn in_layer_a(&self, d: TorusDims) -> bool {
        self.dir == Direction::Vertical && self.origin.row == d.m() - 1
    }

    /// Layer B: horizontal edges joining columns n-1 and 0.
    pub fn in_layer_b(&self, d: TorusDims) -> bool {
        self.dir == Direction::Horizontal && self.origin.col == d.n() - 1
    }

    /// Canonical form of the undirected edge between two adjacent nodes.
    pub fn between(d: TorusDims, u: Node, v: Node) -> Result<GridEdge> {
        for w in [u, v] {
            if !d.contains(w) {
                return Err(Error::NodeOutOfRange {
                    row: w.row,
                    col: w.col,
                    m: d.m(),
                    n: d.n(),
                });
            }
        }
        match step(d, u, v) {
            Some(Step::East) => Ok(GridEdge::horizontal(u.row, u.col)),
            Some(Step::West) => Ok(GridEdge::horizontal(v.row, v.col)),
            Some(Step::South) => Ok(GridEdge::vertical(u.row, u.col)),
            Some(Step::North) => Ok(GridEdge::vertical(v.row, v.col)),
            None => Err(Error::InvalidCycle(format!(
                "nodes ({},{}) and ({},{}) are not adjacent",
                u.row, u.col, v.row, v.col
            ))),
        }
    }
}

/// Unit step between adjacent nodes (with wraparound).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Step {
    East,
    South,
    West,
    North,
}

pub(crate) fn step(d: TorusDims, u: Node, v: Node) -> Option<Step> {
    let (m, n) = (d.m(), d.n());
    if u.row == v.row {
        if v.col == (u.col + 1) % n {
            return Some(Step::East);
        }
        if u.col == (v.col + 1) % n {
            return Some(Step::West);
        }
    } else if u.col == v.col {
        if v.row == (u.row + 1) % m {
            return Some(Step::South);
        }
        if u.row == (v.row + 1) % m {
            return Some(Step::North);
        }
    }
    None
}

/// Signed layer crossings of the step u -> v: the first component counts
/// layer-A crossings (row m-1 -> 0 is +1), the second layer-B crossings
/// (column n-1 -> 0 is +1).
pub(crate) fn step_crossing(d: TorusDims, u: Node, v: Node) -> (i64, i64) {
    match step(d, u, v) {
        Some(Step::South) if u.row == d.m() - 1 => (1, 0),
        Some(Step::North) if v.row == d.m() - 1 => (-1, 0),
        Some(Step::East) if u.col == d.n() - 1 => (0, 1),
        Some(Step::West) if v.col == d.n() - 1 => (0, -1),
        _ => (0, 0),
    }
}

/// Traversal direction along a stored node sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Traversal {
    Forward,
    Reverse,
}

pub(crate) fn winding_of(d: TorusDims, nodes: &[Node], t: Traversal) -> (i64, i64) {
    let len = nodes.len();
    let mut wv = 0i64;
    let mut wh = 0i64;
    for i in 0..len {
        let (u, v) = match t {
            Traversal::Forward => (nodes[i], nodes[(i + 1) % len]),
            Traversal::Reverse => (nodes[(i + 1) % len], nodes[i]),
        };
        let (a, b) = step_crossing(d, u, v);
        wv += a;
        wh += b;
    }
    (wv, wh)
}

pub(crate) fn corners_of(d: TorusDims, nodes: &[Node]) -> Vec<(Node, ParityClass)> {
    let len = nodes.len();
    let mut out = Vec::new();
    for i in 0..len {
        let prev = nodes[(i + len - 1) % len];
        let v = nodes[i];
        let next = nodes[(i + 1) % len];
        let din = step(d, prev, v).map(is_horizontal_step);
        let dout = step(d, v, next).map(is_horizontal_step);
        if let (Some(a), Some(b)) = (din, dout) {
            if a != b {
                out.push((v, v.parity_class()));
            }
        }
    }
    out
}

fn is_horizontal_step(s: Step) -> bool {
    matches!(s, Step::East | Step::West)
}

/// A simple cycle of the grid, stored as its cyclic node sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridCycle {
    dims: TorusDims,
    nodes: Vec<Node>,
}

impl GridCycle {
    pub fn new(dims: TorusDims, nodes: Vec<Node>) -> Result<Self> {
        if nodes.len() < 4 {
            return Err(Error::InvalidCycle(format!(
                "a cycle needs at least 4 nodes, got {}",
                nodes.len()
            )));
        }
        let mut seen = HashSet::new();
        for v in &nodes {
            if !dims.contains(*v) {
                return Err(Error::NodeOutOfRange {
                    row: v.row,
                    col: v.col,
                    m: dims.m(),
                    n: dims.n(),
                });
            }
            if !seen.insert(*v) {
                return Err(Error::InvalidCycle(format!(
                    "repeated node ({},{})",
                    v.row, v.col
                )));
            }
        }
        for i in 0..nodes.len() {
            let u = nodes[i];
            let v = nodes[(i + 1) % nodes.len()];
            if step(dims, u, v).is_none() {
                return Err(Error::InvalidCycle(format!(
                    "consecutive nodes ({},{}) and ({},{}) are not adjacent",
                    u.row, u.col, v.row, v.col
                )));
            }
        }
        Ok(GridCycle { dims, nodes })
    }

    pub fn dims(&self) -> TorusDims {
        self.dims
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn reversed(&self) -> GridCycle {
        let mut nodes = self.nodes.clone();
        nodes.reverse();
        GridCycle {
            dims: self.dims,
            nodes,
        }
    }

    /// Canonical undirected edges traversed by the cycle.
    pub fn edges(&self) -> Vec<GridEdge> {
        let len = self.nodes.len();
        (0..len)
            .map(|i| {
                GridEdge::between(self.dims, self.nodes[i], self.nodes[(i + 1) % len])
                    .expect("validated cycle")
            })
            .collect()
    }

    /// Nodes whose two incident cycle edges have different directions,
    /// tagged with their row/column parity class.
    pub fn corners(&self) -> Vec<(Node, ParityClass)> {
        corners_of(self.dims, &self.nodes)
    }

    /// Signed winding numbers (layer-A crossings, layer-B crossings) for
    /// the given traversal direction. A cycle is contractible iff this is
    /// (0, 0).
    pub fn winding(&self, t: Traversal) -> (i64, i64) {
        winding_of(self.dims, &self.nodes, t)
    }

    /// Nodes strictly inside the disk bounded by a contractible cycle.
    ///
    /// The cycle is lifted to the universal cover (possible exactly when
    /// the winding is zero), where it is a simple closed lattice polygon;
    /// even-odd crossing parity in the lift identifies the disk side, and
    /// the lift projects injectively back onto the torus.
    pub fn disk_interior(&self) -> Result<BTreeSet<Node>> {
        let (wv, wh) = self.winding(Traversal::Forward);
        if (wv, wh) != (0, 0) {
            return Err(Error::NonContractible {
                vertical: wv,
                horizontal: wh,
            });
        }
        let d = self.dims;
        let len = self.nodes.len();

        // Lift: accumulate unit steps in the plane.
        let mut lift = Vec::with_capacity(len);
        let mut cur = (self.nodes[0].row as i64, self.nodes[0].col as i64);
        lift.push(cur);
        for i in 0..len - 1 {
            let delta = match step(d, self.nodes[i], self.nodes[i + 1]).expect("validated cycle") {
                Step::East => (0, 1),
                Step::West => (0, -1),
                Step::South => (1, 0),
                Step::North => (-1, 0),
            };
            cur = (cur.0 + delta.0, cur.1 + delta.1);
            lift.push(cur);
        }

        let on_curve: HashSet<(i64, i64)> = lift.iter().copied().collect();
        // Vertical unit segments of the lifted polygon: (column, lower row).
        let mut vsegs = Vec::new();
        for i in 0..len {
            let a = lift[i];
            let b = lift[(i + 1) % len];
            if a.1 == b.1 && a.0 != b.0 {
                vsegs.push((a.1, a.0.min(b.0)));
            }
        }

        let min_r = lift.iter().map(|p| p.0).min().unwrap();
        let max_r = lift.iter().map(|p| p.0).max().unwrap();
        let min_c = lift.iter().map(|p| p.1).min().unwrap();
        let max_c = lift.iter().map(|p| p.1).max().unwrap();

        let mut interior = BTreeSet::new();
        for r in min_r..=max_r {
            for c in min_c..=max_c {
                if on_curve.contains(&(r, c)) {
                    continue;
                }
                // Eastward ray at height r + epsilon: a vertical segment
                // [r0, r0+1) at column sc crosses it iff r0 == r.
                let crossings = vsegs.iter().filter(|&&(sc, sr)| sc > c && sr == r).count();
                if crossings % 2 == 1 {
                    interior.insert(Node::new(
                        r.rem_euclid(d.m() as i64) as usize,
                        c.rem_euclid(d.n() as i64) as usize,
                    ));
                }
            }
        }
        Ok(interior)
    }
}

/// Number of connected components of `nodes` under torus adjacency.
pub fn component_count(d: TorusDims, nodes: &BTreeSet<Node>) -> usize {
    let mut unvisited: BTreeSet<Node> = nodes.clone();
    let mut components = 0;
    while let Some(&start) = unvisited.iter().next() {
        components += 1;
        unvisited.remove(&start);
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for w in d.neighbors(v).expect("nodes validated by caller") {
                if unvisited.remove(&w) {
                    queue.push_back(w);
                }
            }
        }
    }
    components
}
