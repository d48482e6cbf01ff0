//! Exact Kasteleyn machinery: the four twisted orientations of the torus
//! grid, their skew adjacency matrices, integer Pfaffians, and the
//! brute-force signed matching sum they must equal.

use num::{BigInt, BigRational, One, Zero};

use crate::error::{Error, Result};
use crate::grid::{Direction, GridEdge, Node, TorusDims};
use crate::matching::{enumerate, PerfectMatching};

/// One of the four Kasteleyn orientations. The base orientation points
/// horizontal edges east and vertical edges south on even columns, north
/// on odd ones, which makes every unit face of the fundamental domain
/// clockwise-odd. The two flip bits reverse the layer-A and layer-B seam
/// edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Orientation {
    dims: TorusDims,
    theta: bool,
    tau: bool,
}

impl Orientation {
    pub fn new(dims: TorusDims, theta: bool, tau: bool) -> Self {
        Orientation { dims, theta, tau }
    }

    pub fn dims(&self) -> TorusDims {
        self.dims
    }

    pub fn theta(&self) -> bool {
        self.theta
    }

    pub fn tau(&self) -> bool {
        self.tau
    }

    /// True iff the edge is oriented from its canonical origin to its head.
    pub fn forward(&self, e: &GridEdge) -> bool {
        let base = match e.dir {
            Direction::Horizontal => true,
            Direction::Vertical => e.origin.col % 2 == 0,
        };
        let flip = (e.in_layer_a(self.dims) && self.theta) || (e.in_layer_b(self.dims) && self.tau);
        base != flip
    }

    /// Sign of the matrix entry for the ordered pair (u, v) of adjacent
    /// nodes: +1 when the edge points u -> v.
    pub fn entry_sign(&self, u: Node, v: Node) -> Result<i64> {
        let e = GridEdge::between(self.dims, u, v)?;
        let (origin, _) = e.endpoints(self.dims);
        let toward_head = origin == u;
        Ok(if self.forward(&e) == toward_head { 1 } else { -1 })
    }
}

/// Skew-symmetric integer matrix with entries in {-1, 0, +1}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkewMatrix {
    size: usize,
    entries: Vec<i64>,
}

impl SkewMatrix {
    pub fn zero(size: usize) -> Self {
        SkewMatrix {
            size,
            entries: vec![0; size * size],
        }
    }

    pub fn from_rows(rows: Vec<Vec<i64>>) -> Result<Self> {
        let size = rows.len();
        let mut entries = Vec::with_capacity(size * size);
        for row in &rows {
            if row.len() != size {
                return Err(Error::Internal("matrix rows must be square".into()));
            }
            entries.extend_from_slice(row);
        }
        let m = SkewMatrix { size, entries };
        m.check_antisymmetric()?;
        Ok(m)
    }

    fn check_antisymmetric(&self) -> Result<()> {
        for r in 0..self.size {
            for c in r..self.size {
                if self.entry(r, c) != -self.entry(c, r) {
                    return Err(Error::NotAntisymmetric(r, c));
                }
            }
        }
        Ok(())
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn entry(&self, r: usize, c: usize) -> i64 {
        self.entries[r * self.size + c]
    }

    fn set_pair(&mut self, r: usize, c: usize, val: i64) {
        self.entries[r * self.size + c] = val;
        self.entries[c * self.size + r] = -val;
    }

    pub fn nonzeros_in_row(&self, r: usize) -> usize {
        (0..self.size).filter(|&c| self.entry(r, c) != 0).count()
    }
}

/// Signed adjacency matrix of the torus under the (theta, tau) twisted
/// Kasteleyn orientation, indexed by row-major node ids.
pub fn kasteleyn_matrix(dims: TorusDims, theta: bool, tau: bool) -> SkewMatrix {
    let o = Orientation::new(dims, theta, tau);
    let mut k = SkewMatrix::zero(dims.node_count());
    for id in 0..dims.node_count() {
        let v = dims.node_from_id(id);
        for e in [
            GridEdge::horizontal(v.row, v.col),
            GridEdge::vertical(v.row, v.col),
        ] {
            let (a, b) = e.endpoints(dims);
            let val = if o.forward(&e) { 1 } else { -1 };
            k.set_pair(dims.node_id(a), dims.node_id(b), val);
        }
    }
    k
}

/// Exact integer Pfaffian by skew Gaussian elimination over rationals,
/// normalized so that Pf [[0,1],[-1,0]] = +1.
pub fn pfaffian_exact(s: &SkewMatrix) -> Result<BigInt> {
    let n = s.size();
    if n % 2 == 1 {
        return Err(Error::OddMatrixSize(n));
    }
    if n == 0 {
        return Ok(BigInt::one());
    }
    let idx = |r: usize, c: usize| r * n + c;
    let mut a: Vec<BigRational> = s
        .entries
        .iter()
        .map(|&e| BigRational::from_integer(e.into()))
        .collect();
    let mut sign = BigInt::one();
    let mut prod = BigRational::one();
    for k in (0..n).step_by(2) {
        let Some(p) = ((k + 1)..n).find(|&j| !a[idx(k, j)].is_zero()) else {
            return Ok(BigInt::zero());
        };
        if p != k + 1 {
            // Swap rows and columns p and k+1; one transposition pair
            // flips the Pfaffian's sign once.
            for c in 0..n {
                a.swap(idx(p, c), idx(k + 1, c));
            }
            for r in 0..n {
                a.swap(idx(r, p), idx(r, k + 1));
            }
            sign = -sign;
        }
        let piv = a[idx(k, k + 1)].clone();
        prod *= &piv;
        for i in (k + 2)..n {
            let f = &a[idx(k, i)] / &piv;
            if f.is_zero() {
                continue;
            }
            for c in 0..n {
                let delta = &f * &a[idx(k + 1, c)];
                a[idx(i, c)] -= delta;
            }
            for r in 0..n {
                let delta = &f * &a[idx(r, k + 1)];
                a[idx(r, i)] -= delta;
            }
        }
    }
    let value = prod * BigRational::from_integer(sign);
    if !value.is_integer() {
        return Err(Error::Internal(
            "pfaffian of an integer matrix must be an integer".into(),
        ));
    }
    Ok(value.to_integer())
}

/// Exact determinant by fraction-free Bareiss elimination; used as an
/// independent cross-check of the Pfaffian (Pf^2 = det).
pub fn determinant_exact(s: &SkewMatrix) -> BigInt {
    let n = s.size();
    if n == 0 {
        return BigInt::one();
    }
    let idx = |r: usize, c: usize| r * n + c;
    let mut a: Vec<BigInt> = s.entries.iter().map(|&e| BigInt::from(e)).collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[idx(k, k)].is_zero() {
            let Some(p) = ((k + 1)..n).find(|&r| !a[idx(r, k)].is_zero()) else {
                return BigInt::zero();
            };
            for c in 0..n {
                a.swap(idx(k, c), idx(p, c));
            }
            sign = -sign;
        }
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                let num = &a[idx(i, j)] * &a[idx(k, k)] - &a[idx(i, k)] * &a[idx(k, j)];
                a[idx(i, j)] = num / &prev;
            }
        }
        prev = a[idx(k, k)].clone();
    }
    sign * a[idx(n - 1, n - 1)].clone()
}

/// Sign with which a matching contributes to the Pfaffian expansion of
/// the orientation's matrix: the permutation sign of its pair listing
/// times the product of the oriented entry signs.
pub fn matching_sign(m: &PerfectMatching, o: &Orientation) -> i64 {
    let dims = m.dims();
    let mut perm = Vec::with_capacity(dims.node_count());
    let mut entry_product = 1i64;
    for id in 0..dims.node_count() {
        let v = dims.node_from_id(id);
        let u = m.partner(v);
        let uid = dims.node_id(u);
        if uid > id {
            perm.push(id);
            perm.push(uid);
            entry_product *= o
                .entry_sign(v, u)
                .expect("matching edges join adjacent nodes");
        }
    }
    permutation_sign(&perm) * entry_product
}

fn permutation_sign(perm: &[usize]) -> i64 {
    let n = perm.len();
    let mut visited = vec![false; n];
    let mut transpositions = 0usize;
    for start in 0..n {
        if visited[start] {
            continue;
        }
        let mut len = 0;
        let mut v = start;
        while !visited[v] {
            visited[v] = true;
            v = perm[v];
            len += 1;
        }
        transpositions += len - 1;
    }
    if transpositions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// The Pfaffian's defining expansion computed by direct enumeration of
/// all perfect matchings; the oracle that `pfaffian_exact` must match.
pub fn signed_matching_sum(dims: TorusDims, o: &Orientation) -> BigInt {
    let mut sum = BigInt::zero();
    for m in enumerate(dims) {
        sum += BigInt::from(matching_sign(&m, o));
    }
    sum
}

pub const ORIENTATION_FLIPS: [(bool, bool); 4] =
    [(false, false), (false, true), (true, false), (true, true)];

/// The four Pfaffians in flip order (0,0), (0,1), (1,0), (1,1).
pub fn four_pfaffians(dims: TorusDims) -> [BigInt; 4] {
    ORIENTATION_FLIPS.map(|(theta, tau)| {
        pfaffian_exact(&kasteleyn_matrix(dims, theta, tau))
            .expect("kasteleyn matrices are even-sized")
    })
}

/// Indices of the vanishing Pfaffians among the four.
pub fn vanishing_indices(pfaffians: &[BigInt; 4]) -> Vec<usize> {
    (0..4).filter(|&i| pfaffians[i].is_zero()).collect()
}

/// Searches the sixteen sign vectors for one with
/// (e0*Pf0 + e1*Pf1 + e2*Pf2 + e3*Pf3) / 2 equal to `total`.
pub fn count_combination(pfaffians: &[BigInt; 4], total: &BigInt) -> Option<[i64; 4]> {
    for mask in 0..16u32 {
        let signs = [0, 1, 2, 3].map(|i| if mask & (1 << i) != 0 { -1i64 } else { 1i64 });
        let mut sum = BigInt::zero();
        for (s, pf) in signs.iter().zip(pfaffians.iter()) {
            sum += BigInt::from(*s) * pf;
        }
        if sum == total * BigInt::from(2) {
            return Some(signs);
        }
    }
    None
}
