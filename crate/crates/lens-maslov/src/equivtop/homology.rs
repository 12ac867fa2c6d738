//! Homology and cohomology over `Z_k`, and the Bockstein.
//!
//! All ranks come from Gaussian elimination over the prime field. The one
//! genuinely integral computation is the Bockstein `B` of the exact sequence
//! `0 → Z_k → Z_{k^2} → Z_k → 0`: lift a mod-`k` cocycle to integers in
//! `{0..k-1}`, apply the *integral* coboundary, divide by `k`, reduce. On
//! lens spaces `B` climbs the ladder of generators — it takes the degree
//! `2i+1` generator to the degree `2i+2` one and kills even generators —
//! which is what makes odd-degree classes detectable by joins.

use super::modk;
use super::quotient::{ChainVector, QuotientComplex};
use crate::equivtop::EquivComplex;
use crate::{Error, Result};

/// Betti numbers over `Z_k` together with representing cycles.
#[derive(Debug, Clone)]
pub struct HomologyReport {
    pub k: u32,
    /// `betti[d] = dim H_d`.
    pub betti: Vec<usize>,
    /// `generators[d]`: one cycle per basis class of `H_d`.
    pub generators: Vec<Vec<ChainVector>>,
}

/// Homology of a quotient complex over its own `Z_k`.
pub fn homology(q: &QuotientComplex) -> HomologyReport {
    let betti = q.betti_cached().to_vec();
    let generators = (0..=q.dim())
        .map(|d| {
            q.cycle_gens(d)
                .iter()
                .map(|v| ChainVector::from_u64(d, v.clone()))
                .collect()
        })
        .collect();
    HomologyReport { k: q.k(), betti, generators }
}

/// Betti numbers of a bare simplicial complex over `F_k` (no group in play;
/// used to sanity-check the sphere models upstairs).
pub fn simplicial_betti(x: &EquivComplex, k: u32) -> Vec<usize> {
    let kk = u64::from(k);
    let cols = x.boundary_columns();
    let sizes: Vec<usize> = (0..=x.dim()).map(|d| x.simplices(d).len()).collect();
    let to_mod = |c: &Vec<i64>| -> Vec<u64> { c.iter().map(|&e| modk::reduce_signed(e, kk)).collect() };
    (0..=x.dim())
        .map(|d| {
            let rank_d = if d == 0 {
                0
            } else {
                modk::rank_of(kk, cols[d].iter().map(&to_mod))
            };
            let rank_d1 = if d < x.dim() {
                modk::rank_of(kk, cols[d + 1].iter().map(&to_mod))
            } else {
                0
            };
            sizes[d] - rank_d - rank_d1
        })
        .collect()
}

/// One representing cocycle per basis class of `H^d(q)` — the inputs the
/// Bockstein ladder climbs. Degrees past the dimension have no classes.
pub fn cohomology_generators(q: &QuotientComplex, d: usize) -> Vec<ChainVector> {
    if d > q.dim() {
        return Vec::new();
    }
    q.cocycle_gens(d).iter().map(|v| ChainVector::from_u64(d, v.clone())).collect()
}

/// The Bockstein of a mod-`k` cocycle (as a cochain on `q`, degree `d` with
/// one coefficient per `d`-cell): lift to `{0..k-1} ⊂ ℤ`, apply the integral
/// coboundary `δ = ∂_{d+1}^T`, divide by `k`, reduce mod `k`.
///
/// Errors if the input is not a cocycle, which is detected exactly: `δ` of
/// the lift must vanish mod `k`.
pub fn bockstein(q: &QuotientComplex, c: &ChainVector) -> Result<ChainVector> {
    let d = c.degree;
    if d >= q.dim() {
        // δ lands in degree d+1, which is zero; so is the Bockstein.
        return Ok(ChainVector::zero(d + 1, 0));
    }
    if c.coeffs.len() != q.size(d) {
        return Err(Error::DimensionMismatch(format!(
            "cochain has {} coefficients, degree {d} has {} cells",
            c.coeffs.len(),
            q.size(d)
        )));
    }
    let k = i64::from(q.k());
    let boundary = q.boundary_int(d + 1);
    let mut out = Vec::with_capacity(q.size(d + 1));
    for j in 0..q.size(d + 1) {
        // (δ lift)(cell j) = lift(∂ of cell j).
        let mut v: i64 = 0;
        for i in 0..q.size(d) {
            v += boundary[(i, j)] * i64::from(c.coeffs[i]);
        }
        if v.rem_euclid(k) != 0 {
            return Err(Error::NotCocycle(format!(
                "integral coboundary at cell ({}, {j}) is {v}, not divisible by k = {k}",
                d + 1
            )));
        }
        out.push(v.div_euclid(k));
    }
    Ok(ChainVector::new(d + 1, &out, q.k()))
}

/// Whether a cocycle on the full complex represents zero in `H^d(q)`, i.e.
/// lies in the image of `δ`.
pub fn cochain_class_is_zero(q: &QuotientComplex, c: &ChainVector) -> bool {
    let d = c.degree;
    if d > q.dim() {
        return true;
    }
    let kk = u64::from(q.k());
    // im δ_{d-1} is the row space of ∂_d.
    let image = (0..q.boundary_int(d).nrows())
        .map(|i| q.boundary_mod(d).iter().map(|col| col[i]).collect::<Vec<u64>>());
    modk::rank_modulo(kk, image, [c.as_u64()]) == 0
}

/// Whether a cycle on the full complex represents zero in `H_d(q)`, i.e. is
/// a boundary.
pub fn cycle_class_is_zero(q: &QuotientComplex, c: &ChainVector) -> bool {
    let d = c.degree;
    if d >= q.dim() + 1 {
        return true;
    }
    let kk = u64::from(q.k());
    let image = if d < q.dim() {
        q.boundary_mod(d + 1).to_vec()
    } else {
        Vec::new()
    };
    modk::rank_modulo(kk, image, [c.as_u64()]) == 0
}
