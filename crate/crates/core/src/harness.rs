//! Oracle-driven verification: per-profile count tables, the exhaustive
//! per-matching invariant suite, and deterministic certification reports.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::digraph::{CycleType, DiCycle, TransferDigraph};
use crate::error::{Error, Result};
use crate::grid::{GridEdge, TorusDims, Traversal};
use crate::matching::{Enumerator, MatchType, PerfectMatching, Profile};
use crate::pfaffian::{
    four_pfaffians, matching_sign, vanishing_indices, Orientation, ORIENTATION_FLIPS,
};

/// Largest node count certified or tabulated exhaustively without an
/// explicit override.
pub const DEFAULT_GUARD: usize = 48;

/// Stated layer convention, echoed in every report: reversing the roles
/// of A and B leaves all results intact but changes the EO/OE labels.
pub const LAYER_CONVENTION: &str =
    "A = vertical edges joining rows m-1 and 0; B = horizontal edges joining columns n-1 and 0";

const MATCHING_CHECK_COUNT: usize = 12;
const MATCHING_CHECK_NAMES: [&str; MATCHING_CHECK_COUNT] = [
    "out_degree_one",
    "dicycles_disjoint",
    "dicycle_corner_parity",
    "no_ee_dicycle",
    "dicycles_noncontractible",
    "dicycle_alternation",
    "dicycles_equal_type",
    "involution",
    "profile_preserved",
    "type_mapping",
    "cycle_type_matches_matching_type",
    "parity_bookkeeping",
];

const EXAMPLES_PER_BRANCH: usize = 8;
const MAX_COUNTEREXAMPLES: usize = 16;

/// Matching counts split by parity type.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct TypeCounts {
    #[serde(rename = "EE")]
    pub ee: u64,
    #[serde(rename = "EO")]
    pub eo: u64,
    #[serde(rename = "OE")]
    pub oe: u64,
    #[serde(rename = "OO")]
    pub oo: u64,
}

impl TypeCounts {
    fn bump(&mut self, t: MatchType) {
        match t {
            MatchType::EE => self.ee += 1,
            MatchType::EO => self.eo += 1,
            MatchType::OE => self.oe += 1,
            MatchType::OO => self.oo += 1,
        }
    }

    fn add(&mut self, other: &TypeCounts) {
        self.ee += other.ee;
        self.eo += other.eo;
        self.oe += other.oe;
        self.oo += other.oo;
    }

    pub fn total(&self) -> u64 {
        self.ee + self.eo + self.oe + self.oo
    }

    /// Number of odd matchings in the cell.
    pub fn odd(&self) -> u64 {
        self.eo + self.oe + self.oo
    }
}

/// Exact per-profile, per-type matching counts.
#[derive(Debug, Clone)]
pub struct CountTable {
    dims: TorusDims,
    cells: BTreeMap<Profile, TypeCounts>,
}

#[derive(Serialize)]
struct CellOut<'a> {
    h: &'a [u32],
    v: &'a [u32],
    #[serde(flatten)]
    counts: &'a TypeCounts,
}

#[derive(Serialize)]
struct TableOut<'a> {
    m: usize,
    n: usize,
    layer_convention: &'static str,
    total: u64,
    cells: Vec<CellOut<'a>>,
}

impl CountTable {
    pub fn dims(&self) -> TorusDims {
        self.dims
    }

    pub fn cells(&self) -> &BTreeMap<Profile, TypeCounts> {
        &self.cells
    }

    pub fn total(&self) -> u64 {
        self.cells.values().map(TypeCounts::total).sum()
    }

    pub fn type_totals(&self) -> TypeCounts {
        let mut out = TypeCounts::default();
        for c in self.cells.values() {
            out.add(c);
        }
        out
    }

    /// Cells where the even count differs from the odd count.
    pub fn cancellation_violations(&self) -> Vec<(&Profile, &TypeCounts)> {
        self.cells
            .iter()
            .filter(|(_, c)| c.ee != c.odd())
            .collect()
    }

    pub fn to_json(&self) -> String {
        let out = TableOut {
            m: self.dims.m(),
            n: self.dims.n(),
            layer_convention: LAYER_CONVENTION,
            total: self.total(),
            cells: self
                .cells
                .iter()
                .map(|(p, counts)| CellOut {
                    h: &p.h,
                    v: &p.v,
                    counts,
                })
                .collect(),
        };
        serde_json::to_string(&out).expect("table serialization cannot fail")
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("h,v,EE,EO,OE,OO\n");
        for (p, c) in &self.cells {
            let h = p.h.iter().map(u32::to_string).collect::<Vec<_>>().join(" ");
            let v = p.v.iter().map(u32::to_string).collect::<Vec<_>>().join(" ");
            out.push_str(&format!("{h},{v},{},{},{},{}\n", c.ee, c.eo, c.oe, c.oo));
        }
        out
    }
}

/// Runs each enumeration branch to completion, in parallel when the pool
/// has more than one thread, and returns the per-branch states in branch
/// order so that any merge is independent of the thread count.
fn fold_branches<S, I, F>(dims: TorusDims, threads: Option<usize>, init: I, step: F) -> Vec<S>
where
    S: Send,
    I: Fn() -> S + Sync,
    F: Fn(&mut S, PerfectMatching) + Sync,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.unwrap_or(0))
        .build()
        .expect("failed to build worker pool");
    pool.install(|| {
        (0..Enumerator::BRANCHES)
            .into_par_iter()
            .map(|k| {
                let mut state = init();
                for m in Enumerator::branch(dims, k) {
                    step(&mut state, m);
                }
                state
            })
            .collect()
    })
}

/// Exact count table from full enumeration. Refuses grids above the
/// guard limit.
pub fn count_table(
    dims: TorusDims,
    guard_limit: usize,
    threads: Option<usize>,
) -> Result<CountTable> {
    if dims.node_count() > guard_limit {
        return Err(Error::GuardExceeded {
            m: dims.m(),
            n: dims.n(),
            limit: guard_limit,
        });
    }
    let parts = fold_branches(
        dims,
        threads,
        BTreeMap::<Profile, TypeCounts>::new,
        |table, m| {
            table.entry(m.profile()).or_default().bump(m.match_type());
        },
    );
    let mut cells: BTreeMap<Profile, TypeCounts> = BTreeMap::new();
    for part in parts {
        for (p, c) in part {
            cells.entry(p).or_default().add(&c);
        }
    }
    Ok(CountTable { dims, cells })
}

#[derive(Debug, Clone, Copy)]
pub struct SampleSpec {
    pub count: u64,
    pub seed: u64,
}

#[derive(Debug, Clone)]
pub struct CertifyOptions {
    /// Exhaustive runs refuse grids with more nodes than this.
    pub guard_limit: usize,
    /// Worker threads; `None` uses the default pool size. The report is
    /// byte-identical for every choice.
    pub threads: Option<usize>,
    /// When set, checks run on seeded random matchings instead of the
    /// full enumeration, which also bypasses the guard.
    pub samples: Option<SampleSpec>,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions {
            guard_limit: DEFAULT_GUARD,
            threads: None,
            samples: None,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub failures: u64,
    pub counterexamples: Vec<String>,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct VanishingOrientation {
    pub theta: u8,
    pub tau: u8,
}

/// Outcome of a certification run. Serialization is deterministic:
/// wall-clock timings stay out of the JSON and are reported separately.
#[derive(Debug, Serialize)]
pub struct CertificationReport {
    pub m: usize,
    pub n: usize,
    pub mode: &'static str,
    pub samples: Option<u64>,
    pub seed: Option<u64>,
    pub layer_convention: &'static str,
    pub matchings_checked: u64,
    pub type_counts: TypeCounts,
    pub vanishing_orientation: Option<VanishingOrientation>,
    pub even_matching_sign: Option<i64>,
    pub checks: Vec<CheckResult>,
    pub all_passed: bool,
    #[serde(skip)]
    pub timings: Vec<(String, Duration)>,
}

impl CertificationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serialization cannot fail")
    }
}

/// The full invariant suite over a grid, with the library involution.
pub fn certify(dims: TorusDims, opts: &CertifyOptions) -> Result<CertificationReport> {
    certify_with_phi(dims, opts, &crate::bijection::phi)
}

/// Same as [`certify`] but with the involution injected, which lets the
/// suite be turned against a deliberately broken mapping to prove the
/// checks can fail.
pub fn certify_with_phi<F>(
    dims: TorusDims,
    opts: &CertifyOptions,
    phi_fn: &F,
) -> Result<CertificationReport>
where
    F: Fn(&PerfectMatching) -> Result<PerfectMatching> + Sync,
{
    match opts.samples {
        None => certify_exhaustive(dims, opts, phi_fn),
        Some(spec) => Ok(certify_sampled(dims, spec, phi_fn)),
    }
}

/// Names of the per-matching checks that fail on `m`; used to replay a
/// counterexample from a report.
pub fn run_matching_checks<F>(m: &PerfectMatching, phi_fn: &F) -> Vec<&'static str>
where
    F: Fn(&PerfectMatching) -> Result<PerfectMatching>,
{
    let mut timings = [Duration::ZERO; MATCHING_CHECK_COUNT];
    let failed = evaluate_matching(m, phi_fn, &mut timings);
    (0..MATCHING_CHECK_COUNT)
        .filter(|i| failed & (1 << i) != 0)
        .map(|i| MATCHING_CHECK_NAMES[i])
        .collect()
}

/// Runs the twelve per-matching checks, accumulating per-check wall time,
/// and returns a bitmask of failures.
fn evaluate_matching<F>(
    m: &PerfectMatching,
    phi_fn: &F,
    timings: &mut [Duration; MATCHING_CHECK_COUNT],
) -> u16
where
    F: Fn(&PerfectMatching) -> Result<PerfectMatching>,
{
    let dims = m.dims();
    let mut failed = 0u16;

    // 0: successor rules hold at every node (out-degree one is structural;
    // this re-checks the defining black/white conditions).
    let t = Instant::now();
    let digraph = TransferDigraph::from_matching(m);
    let rules_ok = (0..dims.node_count()).all(|id| {
        let v = dims.node_from_id(id);
        let s = digraph.successor(v);
        let Ok(edge) = GridEdge::between(dims, v, s) else {
            return false;
        };
        if v.is_black() {
            m.contains(&edge)
        } else {
            let u = m.partner(v);
            s != u && !m.contains(&edge) && ((u.row == v.row) == (s.row == v.row))
        }
    });
    if !rules_ok {
        failed |= 1 << 0;
    }
    timings[0] += t.elapsed();

    let cycles = digraph.dicycles();

    // 1: dicycles are pairwise vertex disjoint.
    let t = Instant::now();
    let total_len: usize = cycles.iter().map(DiCycle::len).sum();
    let distinct: std::collections::BTreeSet<_> = cycles
        .iter()
        .flat_map(|c| c.nodes().iter().copied())
        .collect();
    if distinct.len() != total_len {
        failed |= 1 << 1;
    }
    timings[1] += t.elapsed();

    // 2: all corners of a dicycle share one (non-mixed) parity class.
    let t = Instant::now();
    let corners_ok = cycles.iter().all(|c| {
        let corners = c.corners();
        corners.windows(2).all(|w| w[0].1 == w[1].1)
            && corners
                .first()
                .is_none_or(|&(_, p)| p != crate::grid::ParityClass::Mixed)
    });
    if !corners_ok {
        failed |= 1 << 2;
    }
    timings[2] += t.elapsed();

    // 3: no dicycle of type ee.
    let t = Instant::now();
    if !cycles.iter().all(|c| c.cycle_type() != CycleType::Ee) {
        failed |= 1 << 3;
    }
    timings[3] += t.elapsed();

    // 4: every dicycle is non-contractible.
    let t = Instant::now();
    if !cycles
        .iter()
        .all(|c| c.winding(Traversal::Forward) != (0, 0))
    {
        failed |= 1 << 4;
    }
    timings[4] += t.elapsed();

    // 5: shadows alternate between edges and non-edges of the matching.
    let t = Instant::now();
    if !cycles.iter().all(|c| c.alternates_with(m)) {
        failed |= 1 << 5;
    }
    timings[5] += t.elapsed();

    // 6: coexisting dicycles all have the same type. Observed, not proved;
    // nothing else in the suite relies on it.
    let t = Instant::now();
    if !cycles
        .windows(2)
        .all(|w| w[0].cycle_type() == w[1].cycle_type())
    {
        failed |= 1 << 6;
    }
    timings[6] += t.elapsed();

    let canonical = cycles
        .iter()
        .min_by_key(|c| c.sorted_nodes())
        .expect("out-degree-one digraph always has a dicycle");

    // 10: for non-EE matchings the canonical cycle type is the lowercase
    // of the matching type. Independent of the injected involution.
    let t = Instant::now();
    let t_in = m.match_type();
    if t_in != MatchType::EE && canonical.cycle_type() != t_in.to_cycle_type() {
        failed |= 1 << 10;
    }
    timings[10] += t.elapsed();

    // 7, 8, 9, 11 exercise the involution.
    let t = Instant::now();
    let image = phi_fn(m);
    match &image {
        Err(_) => {
            failed |= (1 << 7) | (1 << 8) | (1 << 9) | (1 << 11);
        }
        Ok(once) => {
            let involutive = match phi_fn(once) {
                Err(_) => false,
                Ok(twice) => &twice == m,
            };
            if !involutive {
                failed |= 1 << 7;
            }
            if once.profile() != m.profile() {
                failed |= 1 << 8;
            }
            let t_out = once.match_type();
            let flips = (t_in == MatchType::EE) == (t_out != MatchType::EE);
            let uppercase_ok =
                t_in != MatchType::EE || t_out == canonical.cycle_type().to_match_type();
            if !(flips && uppercase_ok) {
                failed |= 1 << 9;
            }
            let parity_a = (m.layer_a_count() + canonical.layer_a_count()) % 2
                == once.layer_a_count() % 2;
            let parity_b = (m.layer_b_count() + canonical.layer_b_count()) % 2
                == once.layer_b_count() % 2;
            if !(parity_a && parity_b) {
                failed |= 1 << 11;
            }
        }
    }
    timings[7] += t.elapsed();

    failed
}

struct BranchAgg {
    checked: u64,
    table: BTreeMap<Profile, TypeCounts>,
    fails: [u64; MATCHING_CHECK_COUNT],
    examples: Vec<Vec<String>>,
    sign_cells: [[u64; 2]; 2],
    sign_examples: [[Vec<String>; 2]; 2],
    timings: [Duration; MATCHING_CHECK_COUNT],
}

impl BranchAgg {
    fn new() -> Self {
        BranchAgg {
            checked: 0,
            table: BTreeMap::new(),
            fails: [0; MATCHING_CHECK_COUNT],
            examples: vec![Vec::new(); MATCHING_CHECK_COUNT],
            sign_cells: [[0; 2]; 2],
            sign_examples: Default::default(),
            timings: [Duration::ZERO; MATCHING_CHECK_COUNT],
        }
    }

    fn absorb<F>(&mut self, m: &PerfectMatching, phi_fn: &F, vanishing: Option<&Orientation>)
    where
        F: Fn(&PerfectMatching) -> Result<PerfectMatching>,
    {
        self.checked += 1;
        self.table
            .entry(m.profile())
            .or_default()
            .bump(m.match_type());
        let failed = evaluate_matching(m, phi_fn, &mut self.timings);
        for i in 0..MATCHING_CHECK_COUNT {
            if failed & (1 << i) != 0 {
                self.fails[i] += 1;
                if self.examples[i].len() < EXAMPLES_PER_BRANCH {
                    self.examples[i].push(m.to_json());
                }
            }
        }
        if let Some(o) = vanishing {
            let is_ee = usize::from(m.match_type() == MatchType::EE);
            let positive = usize::from(matching_sign(m, o) > 0);
            self.sign_cells[is_ee][positive] += 1;
            if self.sign_examples[is_ee][positive].len() < EXAMPLES_PER_BRANCH {
                self.sign_examples[is_ee][positive].push(m.to_json());
            }
        }
    }
}

fn merge_examples(mut lists: Vec<Vec<String>>) -> Vec<String> {
    let mut merged: Vec<String> = lists.drain(..).flatten().collect();
    merged.sort();
    merged.dedup();
    merged.truncate(MAX_COUNTEREXAMPLES);
    merged
}

fn certify_exhaustive<F>(
    dims: TorusDims,
    opts: &CertifyOptions,
    phi_fn: &F,
) -> Result<CertificationReport>
where
    F: Fn(&PerfectMatching) -> Result<PerfectMatching> + Sync,
{
    if dims.node_count() > opts.guard_limit {
        return Err(Error::GuardExceeded {
            m: dims.m(),
            n: dims.n(),
            limit: opts.guard_limit,
        });
    }

    let mut timings = Vec::new();
    let t0 = Instant::now();
    let pfaffians = four_pfaffians(dims);
    let zeros = vanishing_indices(&pfaffians);
    let vanishing_flips = (zeros.len() == 1).then(|| ORIENTATION_FLIPS[zeros[0]]);
    let vanishing = vanishing_flips.map(|(theta, tau)| Orientation::new(dims, theta, tau));
    timings.push(("pfaffians".to_string(), t0.elapsed()));

    let t0 = Instant::now();
    let branches = fold_branches(dims, opts.threads, BranchAgg::new, |agg, m| {
        agg.absorb(&m, phi_fn, vanishing.as_ref());
    });
    timings.push(("enumeration".to_string(), t0.elapsed()));

    let t0 = Instant::now();
    let mut checked = 0u64;
    let mut table: BTreeMap<Profile, TypeCounts> = BTreeMap::new();
    let mut fails = [0u64; MATCHING_CHECK_COUNT];
    let mut examples: Vec<Vec<Vec<String>>> = vec![Vec::new(); MATCHING_CHECK_COUNT];
    let mut sign_cells = [[0u64; 2]; 2];
    let mut sign_examples: Vec<Vec<String>> = vec![Vec::new(); 4];
    let mut check_times = [Duration::ZERO; MATCHING_CHECK_COUNT];
    for agg in branches {
        checked += agg.checked;
        for (p, c) in agg.table {
            table.entry(p).or_default().add(&c);
        }
        for i in 0..MATCHING_CHECK_COUNT {
            fails[i] += agg.fails[i];
            check_times[i] += agg.timings[i];
        }
        for (i, list) in agg.examples.into_iter().enumerate() {
            examples[i].push(list);
        }
        for (row, agg_row) in sign_cells.iter_mut().zip(agg.sign_cells) {
            for (cell, agg_cell) in row.iter_mut().zip(agg_row) {
                *cell += agg_cell;
            }
        }
        for (i, cell) in agg.sign_examples.into_iter().flatten().enumerate() {
            sign_examples[i].extend(cell);
        }
    }

    let mut checks: Vec<CheckResult> = (0..MATCHING_CHECK_COUNT)
        .map(|i| CheckResult {
            name: MATCHING_CHECK_NAMES[i],
            passed: fails[i] == 0,
            failures: fails[i],
            counterexamples: merge_examples(std::mem::take(&mut examples[i])),
        })
        .collect();
    for (i, name) in MATCHING_CHECK_NAMES.iter().enumerate() {
        timings.push((format!("check:{name}"), check_times[i]));
    }

    // Per-profile cancellation: even count equals odd count in every cell.
    let table = CountTable { dims, cells: table };
    let violations = table.cancellation_violations();
    checks.push(CheckResult {
        name: "profile_cancellation",
        passed: violations.is_empty(),
        failures: violations.len() as u64,
        counterexamples: violations
            .iter()
            .take(MAX_COUNTEREXAMPLES)
            .map(|(p, counts)| {
                serde_json::to_string(&CellOut {
                    h: &p.h,
                    v: &p.v,
                    counts,
                })
                .expect("cell serialization cannot fail")
            })
            .collect(),
    });

    // The vanishing orientation must sign matchings by their type, up to
    // one global flip, whose realized value is recorded.
    let mut even_matching_sign = None;
    let sign_check = match vanishing_flips {
        None => CheckResult {
            name: "pfaffian_sign_matches_type",
            passed: false,
            failures: 1,
            counterexamples: vec![format!("{} of the four pfaffians vanish", zeros.len())],
        },
        Some(_) => {
            let (ee_minus, ee_plus) = (sign_cells[1][0], sign_cells[1][1]);
            let g: i64 = if ee_plus >= ee_minus { 1 } else { -1 };
            even_matching_sign = Some(g);
            let bad_ee = if g == 1 { ee_minus } else { ee_plus };
            let bad_odd = if g == 1 {
                sign_cells[0][1]
            } else {
                sign_cells[0][0]
            };
            let mut bad_lists = Vec::new();
            // sign_examples layout: [odd-, odd+, ee-, ee+].
            bad_lists.push(std::mem::take(
                &mut sign_examples[if g == 1 { 2 } else { 3 }],
            ));
            bad_lists.push(std::mem::take(
                &mut sign_examples[if g == 1 { 1 } else { 0 }],
            ));
            CheckResult {
                name: "pfaffian_sign_matches_type",
                passed: bad_ee + bad_odd == 0,
                failures: bad_ee + bad_odd,
                counterexamples: merge_examples(bad_lists),
            }
        }
    };
    checks.push(sign_check);
    timings.push(("aggregation".to_string(), t0.elapsed()));

    let all_passed = checks.iter().all(|c| c.passed);
    Ok(CertificationReport {
        m: dims.m(),
        n: dims.n(),
        mode: "exhaustive",
        samples: None,
        seed: None,
        layer_convention: LAYER_CONVENTION,
        matchings_checked: checked,
        type_counts: table.type_totals(),
        vanishing_orientation: vanishing_flips.map(|(theta, tau)| VanishingOrientation {
            theta: theta as u8,
            tau: tau as u8,
        }),
        even_matching_sign,
        checks,
        all_passed,
        timings,
    })
}

fn certify_sampled<F>(dims: TorusDims, spec: SampleSpec, phi_fn: &F) -> CertificationReport
where
    F: Fn(&PerfectMatching) -> Result<PerfectMatching>,
{
    let t0 = Instant::now();
    let mut agg = BranchAgg::new();
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    for _ in 0..spec.count {
        let m = random_matching(dims, &mut rng);
        agg.absorb(&m, phi_fn, None);
    }
    let checks: Vec<CheckResult> = (0..MATCHING_CHECK_COUNT)
        .map(|i| CheckResult {
            name: MATCHING_CHECK_NAMES[i],
            passed: agg.fails[i] == 0,
            failures: agg.fails[i],
            counterexamples: merge_examples(vec![std::mem::take(&mut agg.examples[i])]),
        })
        .collect();
    let mut type_counts = TypeCounts::default();
    for c in agg.table.values() {
        type_counts.add(c);
    }
    let all_passed = checks.iter().all(|c| c.passed);
    let mut timings = vec![("sampling".to_string(), t0.elapsed())];
    for (i, name) in MATCHING_CHECK_NAMES.iter().enumerate() {
        timings.push((format!("check:{name}"), agg.timings[i]));
    }
    CertificationReport {
        m: dims.m(),
        n: dims.n(),
        mode: "sampled",
        samples: Some(spec.count),
        seed: Some(spec.seed),
        layer_convention: LAYER_CONVENTION,
        matchings_checked: agg.checked,
        type_counts,
        vanishing_orientation: None,
        even_matching_sign: None,
        checks,
        all_passed,
        timings,
    }
}

/// A random perfect matching: randomized descent through the enumeration
/// tree, shuffling the candidate order at every branch point and keeping
/// the first completion.
pub fn random_matching<R: Rng>(dims: TorusDims, rng: &mut R) -> PerfectMatching {
    const UNCOVERED: usize = usize::MAX;
    let mn = dims.node_count();
    let neighbor_ids: Vec<[usize; 4]> = (0..mn)
        .map(|id| {
            let nb = dims.neighbors(dims.node_from_id(id)).expect("id in range");
            [
                dims.node_id(nb[0]),
                dims.node_id(nb[1]),
                dims.node_id(nb[2]),
                dims.node_id(nb[3]),
            ]
        })
        .collect();
    let mut partner = vec![UNCOVERED; mn];

    fn complete<R: Rng>(
        neighbor_ids: &[[usize; 4]],
        partner: &mut [usize],
        from: usize,
        rng: &mut R,
    ) -> bool {
        const UNCOVERED: usize = usize::MAX;
        let Some(v) = (from..partner.len()).find(|&i| partner[i] == UNCOVERED) else {
            return true;
        };
        let mut order = [0usize, 1, 2, 3];
        order.shuffle(rng);
        for &k in &order {
            let u = neighbor_ids[v][k];
            if partner[u] == UNCOVERED {
                partner[v] = u;
                partner[u] = v;
                if complete(neighbor_ids, partner, v + 1, rng) {
                    return true;
                }
                partner[v] = UNCOVERED;
                partner[u] = UNCOVERED;
            }
        }
        false
    }

    let ok = complete(&neighbor_ids, &mut partner, 0, rng);
    debug_assert!(ok, "even-by-even torus grids always have perfect matchings");
    PerfectMatching::from_partner_unchecked(dims, partner)
}

/// Seeded batch of random matchings; deterministic across runs.
pub fn sample_matchings(dims: TorusDims, count: u64, seed: u64) -> Vec<PerfectMatching> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_matching(dims, &mut rng)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::canonical_cycle;

    fn dims(m: usize, n: usize) -> TorusDims {
        TorusDims::new(m, n).unwrap()
    }

    #[test]
    fn count_table_cancels_per_profile_on_4x4() {
        let table = count_table(dims(4, 4), DEFAULT_GUARD, None).unwrap();
        assert!(table.cancellation_violations().is_empty());
        let brick_cell = Profile {
            h: vec![2, 2, 2, 2],
            v: vec![0, 0, 0, 0],
        };
        assert!(table.cells().get(&brick_cell).map_or(0, TypeCounts::total) > 0);
    }

    #[test]
    fn count_table_respects_guard() {
        assert!(matches!(
            count_table(dims(8, 8), DEFAULT_GUARD, None),
            Err(Error::GuardExceeded { .. })
        ));
    }

    #[test]
    fn csv_has_header_and_rows() {
        let table = count_table(dims(4, 4), DEFAULT_GUARD, None).unwrap();
        let csv = table.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("h,v,EE,EO,OE,OO"));
        assert_eq!(csv.lines().count(), table.cells().len() + 1);
    }

    #[test]
    fn certify_4x4_passes_and_is_deterministic() {
        let opts = CertifyOptions::default();
        let a = certify(dims(4, 4), &opts).unwrap();
        assert!(a.all_passed, "{}", a.to_json());
        let b = certify(dims(4, 4), &opts).unwrap();
        assert_eq!(a.to_json(), b.to_json());
    }

    #[test]
    fn certify_is_thread_count_independent() {
        let single = certify(
            dims(4, 4),
            &CertifyOptions {
                threads: Some(1),
                ..Default::default()
            },
        )
        .unwrap();
        let eight = certify(
            dims(4, 4),
            &CertifyOptions {
                threads: Some(8),
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(single.to_json(), eight.to_json());
    }

    #[test]
    fn corrupted_involution_is_caught_with_replayable_counterexample() {
        // Drop one shadow edge from the symmetric difference; the image is
        // no longer a perfect matching and the involution check must fail.
        let broken = |m: &PerfectMatching| -> Result<PerfectMatching> {
            let cycle = canonical_cycle(m);
            let mut shadow = cycle.shadow().clone();
            let first = *shadow.iter().next().expect("cycles are nonempty");
            shadow.remove(&first);
            m.symmetric_difference(&shadow)
        };
        let report = certify_with_phi(dims(4, 4), &CertifyOptions::default(), &broken).unwrap();
        assert!(!report.all_passed);
        let involution = report
            .checks
            .iter()
            .find(|c| c.name == "involution")
            .unwrap();
        assert!(!involution.passed);
        assert!(involution.failures > 0);
        let witness = PerfectMatching::from_json(&involution.counterexamples[0]).unwrap();
        let failed = run_matching_checks(&witness, &broken);
        assert!(failed.contains(&"involution"));
        // The genuine involution clears the same witness.
        assert!(run_matching_checks(&witness, &crate::bijection::phi).is_empty());
    }

    #[test]
    fn sampled_mode_passes_beyond_the_guard() {
        let opts = CertifyOptions {
            samples: Some(SampleSpec {
                count: 40,
                seed: 7,
            }),
            ..Default::default()
        };
        let report = certify(dims(8, 8), &opts).unwrap();
        assert_eq!(report.mode, "sampled");
        assert_eq!(report.matchings_checked, 40);
        assert!(report.all_passed, "{}", report.to_json());
        let again = certify(dims(8, 8), &opts).unwrap();
        assert_eq!(report.to_json(), again.to_json());
    }

    #[test]
    fn random_matchings_are_valid_and_seeded() {
        let d = dims(6, 8);
        let a = sample_matchings(d, 5, 42);
        let b = sample_matchings(d, 5, 42);
        assert_eq!(a, b);
        for m in &a {
            assert!(crate::matching::is_perfect_cover(d, m.edges()).unwrap());
        }
    }
}
