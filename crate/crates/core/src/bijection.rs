//! The profile-preserving involution that swaps even and odd matchings,
//! the well-behaved predicate, and the type-preserving embedding into the
//! grid enlarged by four rows and four columns.

use std::collections::BTreeSet;

use crate::digraph::canonical_cycle;
use crate::error::{Error, Result};
use crate::grid::{Direction, GridEdge, TorusDims};
use crate::matching::{MatchType, PerfectMatching};

/// Symmetric difference of the matching with the shadow of its canonical
/// dicycle. Postconditions are verified on every call: the result is a
/// perfect matching with the same profile, and its type is EE exactly
/// when the input's was not.
pub fn phi(m: &PerfectMatching) -> Result<PerfectMatching> {
    let cycle = canonical_cycle(m);
    let out = m
        .symmetric_difference(cycle.shadow())
        .map_err(|e| Error::Internal(format!("involution produced a non-matching: {e}")))?;
    if out.profile() != m.profile() {
        return Err(Error::Internal(
            "involution changed the matching profile".into(),
        ));
    }
    let t_in = m.match_type();
    let t_out = out.match_type();
    if (t_in == MatchType::EE) != (t_out != MatchType::EE) {
        return Err(Error::Internal(format!(
            "involution mapped type {t_in} to type {t_out}"
        )));
    }
    if t_in == MatchType::EE && t_out != cycle.cycle_type().to_match_type() {
        return Err(Error::Internal(format!(
            "image type {t_out} does not match cycle type {}",
            cycle.cycle_type()
        )));
    }
    Ok(out)
}

/// The involution without its postcondition checks; for timing-sensitive
/// callers on large grids.
pub fn phi_unchecked(m: &PerfectMatching) -> PerfectMatching {
    let cycle = canonical_cycle(m);
    m.symmetric_difference(cycle.shadow())
        .expect("the shadow of a dicycle alternates, so the difference is a matching")
}

/// True iff the canonical dicycle avoids horizontal edges lying in rows 0
/// or m-1 and vertical edges lying in columns 0 or n-1.
pub fn is_well_behaved(m: &PerfectMatching) -> bool {
    let d = m.dims();
    let cycle = canonical_cycle(m);
    cycle.shadow().iter().all(|e| match e.dir {
        Direction::Horizontal => e.origin.row != 0 && e.origin.row != d.m() - 1,
        Direction::Vertical => e.origin.col != 0 && e.origin.col != d.n() - 1,
    })
}

/// Embeds a matching of the m x n torus into the (m+4) x (n+4) torus as a
/// well-behaved matching of the same type whose canonical dicycle keeps
/// its type.
///
/// Interior edges shift by (+2,+2). A seam edge of layer A at column j
/// becomes the enlarged grid's layer-A edge at column j+2 and the four
/// then-uncovered nodes of that column pair as rows (1,2) and (m+1,m+2);
/// columns without a seam edge pair rows (0,1) and (m+2,m+3). Layer B is
/// handled the same way with rows and columns exchanged, and the four
/// remaining 2x2 corner groups pair vertically.
pub fn embed_well_behaved(m: &PerfectMatching) -> Result<PerfectMatching> {
    let small = m.dims();
    let (sm, sn) = (small.m(), small.n());
    let big = TorusDims::new(sm + 4, sn + 4).expect("enlarged dims stay even and >= 4");
    let (bm, bn) = (big.m(), big.n());

    let mut a_cols = BTreeSet::new();
    let mut b_rows = BTreeSet::new();
    let mut edges = Vec::with_capacity(big.node_count() / 2);
    for e in m.edges() {
        if e.in_layer_a(small) {
            a_cols.insert(e.origin.col);
        } else if e.in_layer_b(small) {
            b_rows.insert(e.origin.row);
        } else {
            edges.push(GridEdge {
                origin: crate::grid::Node::new(e.origin.row + 2, e.origin.col + 2),
                dir: e.dir,
            });
        }
    }
    for j in 0..sn {
        let c = j + 2;
        if a_cols.contains(&j) {
            edges.push(GridEdge::vertical(bm - 1, c));
            edges.push(GridEdge::vertical(1, c));
            edges.push(GridEdge::vertical(sm + 1, c));
        } else {
            edges.push(GridEdge::vertical(0, c));
            edges.push(GridEdge::vertical(sm + 2, c));
        }
    }
    for i in 0..sm {
        let r = i + 2;
        if b_rows.contains(&i) {
            edges.push(GridEdge::horizontal(r, bn - 1));
            edges.push(GridEdge::horizontal(r, 1));
            edges.push(GridEdge::horizontal(r, sn + 1));
        } else {
            edges.push(GridEdge::horizontal(r, 0));
            edges.push(GridEdge::horizontal(r, sn + 2));
        }
    }
    for r0 in [0, sm + 2] {
        for c0 in [0, sn + 2] {
            edges.push(GridEdge::vertical(r0, c0));
            edges.push(GridEdge::vertical(r0, c0 + 1));
        }
    }

    let lifted = PerfectMatching::new(big, edges)
        .map_err(|e| Error::Internal(format!("embedding produced a non-matching: {e}")))?;

    if lifted.match_type() != m.match_type() {
        return Err(Error::Internal(format!(
            "embedding changed the matching type from {} to {}",
            m.match_type(),
            lifted.match_type()
        )));
    }
    let small_cycle_type = canonical_cycle(m).cycle_type();
    let lifted_cycle_type = canonical_cycle(&lifted).cycle_type();
    if lifted_cycle_type != small_cycle_type {
        return Err(Error::Internal(format!(
            "embedding changed the canonical cycle type from {small_cycle_type} to {lifted_cycle_type}"
        )));
    }
    if !is_well_behaved(&lifted) {
        return Err(Error::Internal(
            "embedding produced a matching that is not well behaved".into(),
        ));
    }
    Ok(lifted)
}
