//! Dense linear algebra over the prime field `F_k`.
//!
//! Everything the topology layer needs reduces to three primitives on small
//! dense matrices: incremental rank (feed vectors, watch the rank grow),
//! nullspace bases, and "which of these vectors are independent modulo that
//! span". All three are served by a reduced-row-echelon accumulator.

/// `a^{-1} mod k` for prime `k` and `a != 0`, via Fermat.
pub(crate) fn inv_mod(a: u64, k: u64) -> u64 {
    debug_assert!(a % k != 0);
    let mut base = a % k;
    let mut exp = k - 2;
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % k;
        }
        base = base * base % k;
        exp >>= 1;
    }
    acc
}

/// Reduce a signed integer to its class in `{0..k-1}`.
pub(crate) fn reduce_signed(x: i64, k: u64) -> u64 {
    let k = k as i64;
    (((x % k) + k) % k) as u64
}

/// Incremental Gaussian elimination over `F_k`.
///
/// Stored rows are kept in reduced echelon form: each has a leading `1` at
/// its pivot column and zeros at every other row's pivot. [`Eliminator::insert`]
/// therefore decides span membership in a single pass, and the rank is just
/// the number of stored rows.
pub(crate) struct Eliminator {
    k: u64,
    rows: Vec<(usize, Vec<u64>)>,
}

impl Eliminator {
    pub(crate) fn new(k: u64) -> Self {
        Eliminator { k, rows: Vec::new() }
    }

    /// Insert a vector; returns `true` when it was independent of the span so
    /// far (and the rank grew by one).
    pub(crate) fn insert(&mut self, mut v: Vec<u64>) -> bool {
        let k = self.k;
        for (p, row) in &self.rows {
            let c = v[*p] % k;
            if c != 0 {
                for (vi, ri) in v.iter_mut().zip(row) {
                    *vi = (*vi + (k - c) * ri) % k;
                }
            }
        }
        let Some(p) = v.iter().position(|&x| x % k != 0) else {
            return false;
        };
        let inv = inv_mod(v[p], k);
        for x in v.iter_mut() {
            *x = *x % k * inv % k;
        }
        for (_, row) in &mut self.rows {
            let c = row[p];
            if c != 0 {
                for (ri, vi) in row.iter_mut().zip(&v) {
                    *ri = (*ri + (k - c) * vi) % k;
                }
            }
        }
        self.rows.push((p, v));
        true
    }

    pub(crate) fn rank(&self) -> usize {
        self.rows.len()
    }
}

/// Rank of a set of vectors.
pub(crate) fn rank_of(k: u64, vectors: impl IntoIterator<Item = Vec<u64>>) -> usize {
    let mut e = Eliminator::new(k);
    for v in vectors {
        e.insert(v);
    }
    e.rank()
}

/// Rank of the classes of `extra` modulo the span of `base`:
/// `rank(base ∪ extra) - rank(base)`.
pub(crate) fn rank_modulo(
    k: u64,
    base: impl IntoIterator<Item = Vec<u64>>,
    extra: impl IntoIterator<Item = Vec<u64>>,
) -> usize {
    let mut e = Eliminator::new(k);
    for v in base {
        e.insert(v);
    }
    let r0 = e.rank();
    for v in extra {
        e.insert(v);
    }
    e.rank() - r0
}

/// Basis of the right kernel `{v : A v = 0}` of the matrix whose rows are
/// `rows` (each of length `cols`), over `F_k`.
pub(crate) fn nullspace(k: u64, cols: usize, rows: impl IntoIterator<Item = Vec<u64>>) -> Vec<Vec<u64>> {
    let mut e = Eliminator::new(k);
    for r in rows {
        debug_assert_eq!(r.len(), cols);
        e.insert(r);
    }
    let mut is_pivot = vec![false; cols];
    for (p, _) in &e.rows {
        is_pivot[*p] = true;
    }
    let mut basis = Vec::with_capacity(cols - e.rank());
    for f in 0..cols {
        if is_pivot[f] {
            continue;
        }
        let mut v = vec![0u64; cols];
        v[f] = 1;
        for (p, row) in &e.rows {
            v[*p] = (k - row[f] % k) % k;
        }
        basis.push(v);
    }
    basis
}

/// From `candidates`, keep a maximal subset whose classes modulo the span of
/// `base` are linearly independent. Returns the kept vectors (clones).
pub(crate) fn complete_modulo(k: u64, base: impl IntoIterator<Item = Vec<u64>>, candidates: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let mut e = Eliminator::new(k);
    for v in base {
        e.insert(v);
    }
    let mut kept = Vec::new();
    for c in candidates {
        if e.insert(c.clone()) {
            kept.push(c.clone());
        }
    }
    kept
}
