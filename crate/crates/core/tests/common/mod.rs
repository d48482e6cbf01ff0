//! Shared helpers for the integration suites: axis-aligned rectangle
//! cycles, random contractible same-parity-corner cycles, and a
//! flood-fill interior oracle independent of the library's
//! crossing-parity implementation.

// Not every test binary uses every helper.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};

use rand::Rng;
use torus_match_core::{GridCycle, Node, TorusDims, Traversal};

/// Perimeter cycle of the axis-aligned rectangle with opposite corners
/// (r1,c1) and (r2,c2), requiring r1 < r2 and c1 < c2; drawn without
/// wrapping, hence contractible.
pub fn rectangle_cycle(d: TorusDims, r1: usize, c1: usize, r2: usize, c2: usize) -> GridCycle {
    let mut pts = Vec::new();
    for c in c1..c2 {
        pts.push(Node::new(r1, c));
    }
    for r in r1..r2 {
        pts.push(Node::new(r, c2));
    }
    for c in (c1 + 1..=c2).rev() {
        pts.push(Node::new(r2, c));
    }
    for r in (r1 + 1..=r2).rev() {
        pts.push(Node::new(r, c1));
    }
    GridCycle::new(d, pts).expect("rectangle perimeters are simple cycles")
}

/// Every axis-aligned rectangle whose four corners share one parity
/// class (all even nodes or all odd nodes).
pub fn same_parity_rectangles(d: TorusDims) -> Vec<GridCycle> {
    let mut out = Vec::new();
    for r1 in 0..d.m() {
        for r2 in (r1 + 2..d.m()).step_by(2) {
            for c1 in (r1 % 2..d.n()).step_by(2) {
                for c2 in (c1 + 2..d.n()).step_by(2) {
                    out.push(rectangle_cycle(d, r1, c1, r2, c2));
                }
            }
        }
    }
    out
}

/// Random contractible cycle whose corners all share one parity class.
///
/// A random simply-connected polyomino is grown on the coarse (2x2-cell)
/// lattice inside a window small enough that the refined boundary cannot
/// touch itself after projection; its boundary walk, doubled to unit
/// steps, has corners only at coarse vertices, and a random equal-parity
/// translation places them on either parity class.
pub fn random_same_parity_cycle<R: Rng>(d: TorusDims, rng: &mut R) -> GridCycle {
    let coarse_rows = (d.m() - 2) / 2;
    let coarse_cols = (d.n() - 2) / 2;
    loop {
        let target = rng.gen_range(1..=coarse_rows * coarse_cols);
        let mut cells: BTreeSet<(i64, i64)> = BTreeSet::new();
        cells.insert((
            rng.gen_range(0..coarse_rows) as i64,
            rng.gen_range(0..coarse_cols) as i64,
        ));
        while cells.len() < target {
            let frontier: Vec<(i64, i64)> = cells
                .iter()
                .flat_map(|&(r, c)| [(r - 1, c), (r + 1, c), (r, c - 1), (r, c + 1)])
                .filter(|&(r, c)| {
                    r >= 0
                        && c >= 0
                        && (r as usize) < coarse_rows
                        && (c as usize) < coarse_cols
                        && !cells.contains(&(r, c))
                })
                .collect();
            if frontier.is_empty() {
                break;
            }
            let pick = frontier[rng.gen_range(0..frontier.len())];
            cells.insert(pick);
        }
        let Some(walk) = boundary_walk(&cells) else {
            continue; // pinched vertex or an interior hole
        };

        let mut dr = rng.gen_range(0..d.m());
        let mut dc = rng.gen_range(0..d.n());
        if dr % 2 != dc % 2 {
            dc = (dc + 1) % d.n();
        }
        dr %= d.m();
        dc %= d.n();

        let mut nodes = Vec::with_capacity(2 * walk.len());
        for k in 0..walk.len() {
            let a = walk[k];
            let b = walk[(k + 1) % walk.len()];
            for p in [(2 * a.0, 2 * a.1), (a.0 + b.0, a.1 + b.1)] {
                nodes.push(Node::new(
                    (p.0 as usize + dr) % d.m(),
                    (p.1 as usize + dc) % d.n(),
                ));
            }
        }
        let cycle = GridCycle::new(d, nodes).expect("refined boundary is a simple cycle");
        assert_eq!(cycle.winding(Traversal::Forward), (0, 0));
        let corners = cycle.corners();
        assert!(!corners.is_empty());
        assert!(corners.windows(2).all(|w| w[0].1 == w[1].1));
        return cycle;
    }
}

/// Counterclockwise-or-clockwise walk around a polyomino boundary, in
/// coarse vertex coordinates. Returns `None` when the boundary is not a
/// single simple loop.
fn boundary_walk(cells: &BTreeSet<(i64, i64)>) -> Option<Vec<(i64, i64)>> {
    let mut succ: BTreeMap<(i64, i64), (i64, i64)> = BTreeMap::new();
    let mut add = |from: (i64, i64), to: (i64, i64)| succ.insert(from, to).is_none();
    for &(i, j) in cells {
        // Directed so the cell sits on the left of each boundary side.
        if !cells.contains(&(i - 1, j)) && !add((i, j + 1), (i, j)) {
            return None;
        }
        if !cells.contains(&(i + 1, j)) && !add((i + 1, j), (i + 1, j + 1)) {
            return None;
        }
        if !cells.contains(&(i, j - 1)) && !add((i, j), (i + 1, j)) {
            return None;
        }
        if !cells.contains(&(i, j + 1)) && !add((i + 1, j + 1), (i, j + 1)) {
            return None;
        }
    }
    let start = *succ.keys().next()?;
    let mut walk = vec![start];
    let mut v = *succ.get(&start)?;
    while v != start {
        walk.push(v);
        v = *succ.get(&v)?;
    }
    (walk.len() == succ.len()).then_some(walk)
}

/// Interior of a contractible cycle by flood fill: lift the cycle to the
/// plane, flood the padded bounding box from outside, and keep the
/// lattice points that are neither reached nor on the curve.
pub fn flood_fill_interior(c: &GridCycle) -> BTreeSet<Node> {
    let d = c.dims();
    let nodes = c.nodes();
    let mut lift = vec![(nodes[0].row as i64, nodes[0].col as i64)];
    for w in nodes.windows(2) {
        let (r, c0) = *lift.last().unwrap();
        lift.push((
            r + wrap_delta(w[1].row, w[0].row, d.m()),
            c0 + wrap_delta(w[1].col, w[0].col, d.n()),
        ));
    }
    let curve: HashSet<(i64, i64)> = lift.iter().copied().collect();
    let lo_r = lift.iter().map(|p| p.0).min().unwrap() - 1;
    let hi_r = lift.iter().map(|p| p.0).max().unwrap() + 1;
    let lo_c = lift.iter().map(|p| p.1).min().unwrap() - 1;
    let hi_c = lift.iter().map(|p| p.1).max().unwrap() + 1;

    let mut outside = HashSet::new();
    let mut queue = VecDeque::from([(lo_r, lo_c)]);
    outside.insert((lo_r, lo_c));
    while let Some((r, c0)) = queue.pop_front() {
        for next in [(r - 1, c0), (r + 1, c0), (r, c0 - 1), (r, c0 + 1)] {
            if next.0 < lo_r || next.0 > hi_r || next.1 < lo_c || next.1 > hi_c {
                continue;
            }
            if curve.contains(&next) || !outside.insert(next) {
                continue;
            }
            queue.push_back(next);
        }
    }

    let mut interior = BTreeSet::new();
    for r in lo_r..=hi_r {
        for c0 in lo_c..=hi_c {
            if !curve.contains(&(r, c0)) && !outside.contains(&(r, c0)) {
                interior.insert(Node::new(
                    r.rem_euclid(d.m() as i64) as usize,
                    c0.rem_euclid(d.n() as i64) as usize,
                ));
            }
        }
    }
    interior
}

fn wrap_delta(to: usize, from: usize, modulus: usize) -> i64 {
    if to == (from + 1) % modulus {
        1
    } else if from == (to + 1) % modulus {
        -1
    } else if to == from {
        0
    } else {
        unreachable!("nodes of a validated cycle are adjacent")
    }
}
