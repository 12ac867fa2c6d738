//! The cohomological index of subcomplexes of lens-space models.
//!
//! For `A ⊂ L = L_k^{2M-1}` the index is the total rank of the restriction
//! `ι^*: H^*(L) → H^*(A)` over `Z_k`. Lens spaces have one cohomology line
//! per degree and no products are needed to see the key structural fact
//! ("no holes"): the image of `ι^*` has rank exactly 1 in every degree below
//! the index and rank 0 from the index upwards. Both routes below compute
//! per-degree ranks and check that profile, so a violation — impossible for
//! genuine subcomplexes — can only mean an internal bug, and is reported as
//! an error rather than silently summed over.
//!
//! [`cohom_index`] is the definition (cochain restriction); [`homology_index`]
//! is the dual route (`ι_*: H_*(A) → H_*(L)` on cycles), kept deliberately
//! separate so the two can confirm each other on every sample.

use super::modk;
use super::quotient::{QuotientComplex, Subcomplex};
use crate::{Error, Result};

/// Boundary columns of `A` in its own indexing: the ambient columns
/// restricted to `A`'s rows, one per `A`-cell of degree `d`.
fn sub_boundary_cols(q: &QuotientComplex, a: &Subcomplex, d: usize) -> Vec<Vec<u64>> {
    let rows = a.cells(d - 1);
    a.cells(d)
        .iter()
        .map(|&j| {
            let col = &q.boundary_mod(d)[j];
            rows.iter().map(|&i| col[i]).collect()
        })
        .collect()
}

fn check_no_holes(ranks: &[usize], what: &str) -> Result<usize> {
    let total: usize = ranks.iter().sum();
    for (d, &r) in ranks.iter().enumerate() {
        let expected = usize::from(d < total);
        if r != expected {
            return Err(Error::IndexShape(format!(
                "{what} rank in degree {d} is {r}, want {expected} (profile {ranks:?})"
            )));
        }
    }
    Ok(total)
}

/// The cohomological index of a subcomplex: the rank of
/// `ι^*: H^*(L) → H^*(A)` summed over degrees.
///
/// Errors when `a` is not closed under faces, and when the computed rank
/// profile is not of no-holes shape (rank 1 below the index, 0 at and above
/// it) — the latter cannot happen for a correct engine.
pub fn cohom_index(q: &QuotientComplex, a: &Subcomplex) -> Result<usize> {
    a.validate_in(q)?;
    if a.is_empty() {
        return Ok(0);
    }
    let kk = u64::from(q.k());
    let mut ranks = Vec::with_capacity(q.dim() + 1);
    for d in 0..=q.dim() {
        let cells = a.cells(d);
        if cells.is_empty() {
            ranks.push(0);
            continue;
        }
        // Generating cocycles of H^d(L), restricted to A's cells.
        let restricted = q
            .cocycle_gens(d)
            .iter()
            .map(|z| cells.iter().map(|&i| z[i]).collect::<Vec<u64>>());
        // Their rank in H^d(A) = rank modulo im δ_{d-1}^A, the row space of
        // A's boundary matrix ∂_d^A.
        let n_faces = a.cells(d.saturating_sub(1)).len();
        let cols = if d > 0 { sub_boundary_cols(q, a, d) } else { Vec::new() };
        let coimage = (0..if d > 0 { n_faces } else { 0 })
            .map(|i| cols.iter().map(|c| c[i]).collect::<Vec<u64>>());
        ranks.push(modk::rank_modulo(kk, coimage, restricted));
    }
    check_no_holes(&ranks, "restriction")
}

/// The homology route to the same number: per degree, the rank of
/// `ι_*: H_d(A) → H_d(L)`, i.e. of the classes in `H_d(L)` of the cycles of
/// `A`. Agrees with [`cohom_index`] by field duality; computed from scratch
/// so the agreement is a real cross-check.
pub fn homology_index(q: &QuotientComplex, a: &Subcomplex) -> Result<usize> {
    a.validate_in(q)?;
    if a.is_empty() {
        return Ok(0);
    }
    let kk = u64::from(q.k());
    let mut ranks = Vec::with_capacity(q.dim() + 1);
    for d in 0..=q.dim() {
        let cells = a.cells(d);
        if cells.is_empty() {
            ranks.push(0);
            continue;
        }
        // Cycles of A: kernel of ∂_d^A.
        let cols = if d > 0 { sub_boundary_cols(q, a, d) } else { Vec::new() };
        let n_faces = a.cells(d.saturating_sub(1)).len();
        let rows = (0..if d > 0 { n_faces } else { 0 })
            .map(|i| cols.iter().map(|c| c[i]).collect::<Vec<u64>>());
        let kernel = modk::nullspace(kk, cells.len(), rows);
        // Embed each cycle into C_d(L) and take its rank modulo boundaries.
        let embedded = kernel.iter().map(|v| {
            let mut w = vec![0u64; q.size(d)];
            for (vi, &cell) in v.iter().zip(&cells) {
                w[cell] = *vi;
            }
            w
        });
        let image = if d < q.dim() { q.boundary_mod(d + 1).to_vec() } else { Vec::new() };
        ranks.push(modk::rank_modulo(kk, image, embedded));
    }
    check_no_holes(&ranks, "inclusion image")
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use super::*;
    use crate::equivtop::{lens_model, Subcomplex};
    use crate::sampling;

    #[test]
    fn the_full_model_attains_twice_the_factor_count() {
        for (k, m) in [(3u32, 1usize), (3, 2), (5, 2), (2, 2), (3, 3)] {
            let q = lens_model(k, &vec![1; m]).unwrap();
            let full = Subcomplex::full(&q);
            assert_eq!(cohom_index(&q, &full).unwrap(), 2 * m, "k = {k}, M = {m}");
        }
    }

    #[test]
    fn a_point_has_index_one_and_nothing_has_index_zero() {
        let q = lens_model(3, &[1, 1]).unwrap();
        assert_eq!(cohom_index(&q, &Subcomplex::vertex(&q, 0)).unwrap(), 1);
        assert_eq!(cohom_index(&q, &Subcomplex::vertex(&q, 1)).unwrap(), 1);
        assert_eq!(cohom_index(&q, &Subcomplex::empty(&q)).unwrap(), 0);
    }

    #[test]
    fn lens_subspaces_have_even_index_twice_their_factor_count() {
        let q = lens_model(3, &[1, 1, 1]).unwrap();
        for r in 1..=3usize {
            let h = Subcomplex::lens_subspace(&q, &(0..r).collect::<BTreeSet<_>>());
            assert_eq!(cohom_index(&q, &h).unwrap(), 2 * r, "r = {r}");
        }
        let q5 = lens_model(5, &[1, 2]).unwrap();
        let h = Subcomplex::lens_subspace(&q5, &BTreeSet::from([1]));
        assert_eq!(cohom_index(&q5, &h).unwrap(), 2);
    }

    #[test]
    fn both_routes_agree_on_random_subcomplexes() {
        let q = lens_model(3, &[1, 1]).unwrap();
        let mut rng = sampling::rng(0x1009);
        for trial in 0..40 {
            let a = Subcomplex::random(&q, 0.1 + 0.8 * (trial as f64) / 40.0, &mut rng);
            let via_cochains = cohom_index(&q, &a).unwrap();
            let via_cycles = homology_index(&q, &a).unwrap();
            assert_eq!(via_cochains, via_cycles, "trial {trial}");
        }
    }

    #[test]
    fn non_subcomplexes_are_rejected() {
        let q = lens_model(3, &[1, 1]).unwrap();
        // An edge with no vertices is not closed under faces.
        let mut cells = vec![BTreeSet::new(); q.dim() + 1];
        cells[1].insert(0usize);
        let broken = Subcomplex::from_raw(cells);
        assert!(matches!(cohom_index(&q, &broken), Err(crate::Error::BadComplex(_))));
        assert!(matches!(homology_index(&q, &broken), Err(crate::Error::BadComplex(_))));
    }

    #[test]
    fn monotonicity_of_intersections_holds_on_seeded_samples() {
        let q = lens_model(3, &[1, 1]).unwrap();
        let mut rng = sampling::rng(0xA11CE);
        for _ in 0..25 {
            let a = Subcomplex::random(&q, 0.6, &mut rng);
            let b = Subcomplex::random(&q, 0.6, &mut rng);
            let cap = a.intersect(&b);
            let ia = cohom_index(&q, &a).unwrap();
            let ib = cohom_index(&q, &b).unwrap();
            let icap = cohom_index(&q, &cap).unwrap();
            assert!(icap <= ia.min(ib));
        }
    }
}
