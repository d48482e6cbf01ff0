//! Acceptance suite: every release-gating property, one test per
//! criterion, each printing a PASS line with the scale it verified.
//! All tolerances are zero; everything here is exact combinatorics.

mod common;

use num::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use torus_match_core::{
    canonical_cycle, certify, component_count, count_combination, count_table, embed_well_behaved,
    enumerate, four_pfaffians, is_perfect_cover, is_well_behaved, phi, signed_matching_sum,
    vanishing_indices, CertifyOptions, CycleType, GridEdge, MatchType, Orientation, ParityClass,
    PerfectMatching, TorusDims, TransferDigraph, Traversal, DEFAULT_GUARD, ORIENTATION_FLIPS,
};

fn dims(m: usize, n: usize) -> TorusDims {
    TorusDims::new(m, n).unwrap()
}

#[test]
fn cancellation_identity_holds_in_every_profile_cell() {
    let mut cells_checked = 0usize;
    for (m, n) in [(4, 4), (4, 6), (6, 6)] {
        let table = count_table(dims(m, n), DEFAULT_GUARD, None).unwrap();
        for (profile, counts) in table.cells() {
            assert_eq!(
                counts.ee,
                counts.odd(),
                "FAIL cancellation identity: cell h={:?} v={:?} on the {m}x{n} torus has \
                 {} even but {} odd matchings",
                profile.h,
                profile.v,
                counts.ee,
                counts.odd()
            );
        }
        cells_checked += table.cells().len();
        let totals = table.type_totals();
        assert_eq!(totals.ee, totals.odd());
    }
    println!(
        "PASS cancellation identity: even count equals odd count in all {cells_checked} \
         profile cells of the 4x4, 4x6, and 6x6 tori"
    );
}

#[test]
fn involution_and_profile_invariance_exhaustive() {
    let mut checked = 0u64;
    for (m, n) in [(4, 4), (4, 6)] {
        for matching in enumerate(dims(m, n)) {
            let once = phi(&matching).unwrap();
            assert_eq!(
                once.profile(),
                matching.profile(),
                "FAIL profile invariance on {m}x{n}: {}",
                matching.to_json()
            );
            let twice = phi(&once).unwrap();
            assert_eq!(
                twice,
                matching,
                "FAIL involution on {m}x{n}: {}",
                matching.to_json()
            );
            checked += 1;
        }
    }
    println!(
        "PASS involution and profile invariance: exhaustive over {checked} matchings \
         of the 4x4 and 4x6 tori, zero failures"
    );
}

#[test]
fn type_mapping_exhaustive() {
    let mut checked = 0u64;
    for (m, n) in [(4, 4), (4, 6)] {
        for matching in enumerate(dims(m, n)) {
            let cycle = canonical_cycle(&matching);
            let image = phi(&matching).unwrap();
            let t_in = matching.match_type();
            let t_out = image.match_type();
            assert_eq!(
                t_in == MatchType::EE,
                t_out != MatchType::EE,
                "FAIL type bipartition on {m}x{n}: {t_in} -> {t_out} for {}",
                matching.to_json()
            );
            if t_in == MatchType::EE {
                assert_eq!(
                    t_out,
                    cycle.cycle_type().to_match_type(),
                    "FAIL image type on {m}x{n}: cycle type {} but image {t_out} for {}",
                    cycle.cycle_type(),
                    matching.to_json()
                );
            } else {
                assert_eq!(
                    cycle.cycle_type(),
                    t_in.to_cycle_type(),
                    "FAIL cycle-type match on {m}x{n}: type {t_in} but cycle {} for {}",
                    cycle.cycle_type(),
                    matching.to_json()
                );
            }
            checked += 1;
        }
    }
    println!(
        "PASS type mapping: EE flips to non-EE and cycle types agree with matching \
         types over {checked} matchings of the 4x4 and 4x6 tori"
    );
}

#[test]
fn transfer_digraph_structure_exhaustive() {
    let mut checked = 0u64;
    for (m, n) in [(4, 4), (4, 6)] {
        let d = dims(m, n);
        for matching in enumerate(d) {
            let digraph = TransferDigraph::from_matching(&matching);
            for id in 0..d.node_count() {
                let v = d.node_from_id(id);
                let s = digraph.successor(v);
                let edge = GridEdge::between(d, v, s).expect("successor must be adjacent");
                if v.is_black() {
                    assert!(matching.contains(&edge), "black rule broken at ({},{})", v.row, v.col);
                } else {
                    let u = matching.partner(v);
                    assert!(s != u && !matching.contains(&edge), "white rule broken");
                    assert_eq!(
                        u.row == v.row,
                        s.row == v.row,
                        "white successor not collinear with the matched edge"
                    );
                }
            }
            let cycles = digraph.dicycles();
            let mut seen = std::collections::BTreeSet::new();
            for cycle in &cycles {
                for node in cycle.nodes() {
                    assert!(seen.insert(*node), "dicycles share a vertex");
                }
                let corners = cycle.corners();
                assert!(
                    corners.windows(2).all(|w| w[0].1 == w[1].1),
                    "corners of one dicycle differ in parity"
                );
                assert!(
                    corners.iter().all(|&(_, p)| p != ParityClass::Mixed),
                    "mixed-parity corner on a dicycle"
                );
                assert_ne!(cycle.cycle_type(), CycleType::Ee, "dicycle of type ee");
                assert_ne!(
                    cycle.winding(Traversal::Forward),
                    (0, 0),
                    "contractible dicycle"
                );
            }
            checked += 1;
        }
    }
    println!(
        "PASS transfer digraph structure: successor rules, disjointness, corner parity, \
         no ee dicycles, and non-contractibility over {checked} matchings of the 4x4 \
         and 4x6 tori"
    );
}

#[test]
fn disk_interiors_are_single_odd_components() {
    let mut rectangles = 0usize;
    let mut random_cycles = 0usize;
    for (m, n, samples, seed) in [(6, 6, 500u32, 11u64), (8, 8, 600, 12)] {
        let d = dims(m, n);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let all_rectangles = common::same_parity_rectangles(d);
        rectangles += all_rectangles.len();
        let randoms: Vec<_> = (0..samples)
            .map(|_| common::random_same_parity_cycle(d, &mut rng))
            .collect();
        random_cycles += randoms.len();
        for cycle in all_rectangles.iter().chain(randoms.iter()) {
            let interior = cycle.disk_interior().unwrap();
            assert_eq!(
                interior,
                common::flood_fill_interior(cycle),
                "interior disagrees with the flood-fill oracle"
            );
            assert_eq!(
                interior.len() % 2,
                1,
                "even interior for a same-parity-corner cycle on {m}x{n}"
            );
            assert_eq!(
                component_count(d, &interior),
                1,
                "interior splits into several components on {m}x{n}"
            );
        }
    }
    assert!(random_cycles >= 1000);
    println!(
        "PASS disk interiors: one connected component with an odd node count for all \
         {rectangles} same-parity rectangles and {random_cycles} random contractible \
         same-parity-corner cycles on the 6x6 and 8x8 tori"
    );
}

#[test]
fn vanishing_pfaffian_and_signed_sums() {
    for (m, n) in [(4, 4), (4, 6)] {
        let d = dims(m, n);
        let pfaffians = four_pfaffians(d);
        let zeros = vanishing_indices(&pfaffians);
        assert_eq!(
            zeros.len(),
            1,
            "FAIL: {} of the four pfaffians vanish on {m}x{n}",
            zeros.len()
        );
        for (i, (theta, tau)) in ORIENTATION_FLIPS.iter().enumerate() {
            let oracle = signed_matching_sum(d, &Orientation::new(d, *theta, *tau));
            assert_eq!(
                pfaffians[i], oracle,
                "FAIL: pfaffian and signed matching sum disagree at flips \
                 ({theta},{tau}) on {m}x{n}"
            );
        }
        let total = BigInt::from(enumerate(d).count());
        let signs = count_combination(&pfaffians, &total);
        assert!(
            signs.is_some(),
            "FAIL: no sign combination of the four pfaffians recovers the count on {m}x{n}"
        );
    }
    println!(
        "PASS vanishing pfaffian: exactly one of four pfaffians is zero, each equals its \
         brute-force signed matching sum, and a half sign combination recovers the \
         matching count on the 4x4 and 4x6 tori"
    );
}

#[test]
fn embedding_preserves_types_exhaustive() {
    let d = dims(4, 4);
    let mut checked = 0u64;
    for matching in enumerate(d) {
        let lifted = embed_well_behaved(&matching).unwrap();
        assert_eq!(lifted.dims().m(), 8);
        assert_eq!(lifted.dims().n(), 8);
        assert!(is_perfect_cover(lifted.dims(), lifted.edges()).unwrap());
        assert!(is_well_behaved(&lifted), "lift of {} is not well behaved", matching.to_json());
        assert_eq!(lifted.match_type(), matching.match_type());
        assert_eq!(
            canonical_cycle(&lifted).cycle_type(),
            canonical_cycle(&matching).cycle_type()
        );
        checked += 1;
    }
    println!(
        "PASS embedding: all {checked} matchings of the 4x4 torus lift to valid \
         well-behaved 8x8 matchings with the same matching and cycle types"
    );
}

#[test]
fn certification_report_is_deterministic() {
    let d = dims(4, 4);
    let base = CertifyOptions::default();
    let first = certify(d, &base).unwrap().to_json();
    let second = certify(d, &base).unwrap().to_json();
    assert_eq!(first, second, "FAIL: repeated runs differ");
    for threads in [1, 8] {
        let opts = CertifyOptions {
            threads: Some(threads),
            ..Default::default()
        };
        let report = certify(d, &opts).unwrap();
        assert!(report.all_passed);
        assert_eq!(
            report.to_json(),
            first,
            "FAIL: report differs with {threads} threads"
        );
    }
    println!(
        "PASS determinism: certification JSON is byte-identical across repeated runs \
         and across 1 and 8 worker threads on the 4x4 torus"
    );
}

/// Cross-method total: enumeration, the count table, and the pfaffian
/// combination must all see the same number of matchings.
#[test]
fn totals_agree_across_methods() {
    for (m, n) in [(4, 4), (4, 6), (6, 6)] {
        let d = dims(m, n);
        let table = count_table(d, DEFAULT_GUARD, None).unwrap();
        let pfaffians = four_pfaffians(d);
        let total = BigInt::from(table.total());
        assert!(count_combination(&pfaffians, &total).is_some());
    }
    // Frozen from the enumeration oracle, cross-checked above against the
    // independent pfaffian route.
    assert_eq!(enumerate(dims(4, 4)).count(), 272);
    assert_eq!(enumerate(dims(4, 6)).count(), 3108);
    assert_eq!(enumerate(dims(6, 6)).count(), 90176);
    println!("PASS cross-method totals: 272 (4x4), 3108 (4x6), 90176 (6x6)");
}

/// The smaller grid's involution restricted to any profile cell pairs
/// even with odd matchings; spot-check the brick cell explicitly.
#[test]
fn brick_cell_is_nonempty_and_balanced() {
    let d = dims(4, 4);
    let table = count_table(d, DEFAULT_GUARD, None).unwrap();
    let brick = PerfectMatching::horizontal_bricks(d);
    let cell = table.cells().get(&brick.profile()).expect("brick cell exists");
    assert!(cell.total() > 0);
    assert_eq!(cell.ee, cell.odd());
    println!(
        "PASS brick cell: profile h=(2,2,2,2), v=(0,0,0,0) holds {} matchings, \
         {} even and {} odd",
        cell.total(),
        cell.ee,
        cell.odd()
    );
}
