//! Quotients of free equivariant complexes, and chains on them.
//!
//! Dividing a simplicial complex by a free simplicial `Z_k`-action gives a
//! Δ-complex: one cell per simplex orbit, glued along the projected faces.
//! Each orbit gets a canonical representative (the lexicographically least
//! member), and the covering projection becomes a *signed* map on oriented
//! simplices: `proj([s]) = ε · e_orbit`, where `ε` is the parity of the
//! permutation that sorts the image of `s` under the power of the generator
//! that lands on the representative.
//!
//! The boundary operator downstairs is `∂(e_r) = proj(∂[r])`. It is computed
//! over `ℤ` — the integral matrices feed the Bockstein — and reduced mod `k`
//! for all homology work. Identifications can cancel integrally: the quotient
//! of the `k`-gon is a single vertex and a single edge with `∂(edge) =
//! v - v = 0`.

use std::collections::{BTreeSet, HashMap};

use nalgebra::DMatrix;
use rand::Rng;

use super::complex::{circle_complex, join_complex, EquivComplex};
use super::modk;
use crate::{Error, Result};

/// A chain (or cochain) over `Z_k`, one coefficient per cell of the given
/// degree of some [`QuotientComplex`]. Coefficients always live in
/// `{0..k-1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainVector {
    pub degree: usize,
    pub coeffs: Vec<u32>,
}

impl ChainVector {
    /// Build from signed integer coefficients, reducing mod `k`.
    pub fn new(degree: usize, coeffs: &[i64], k: u32) -> Self {
        ChainVector {
            degree,
            coeffs: coeffs
                .iter()
                .map(|&c| modk::reduce_signed(c, u64::from(k)) as u32)
                .collect(),
        }
    }

    pub fn zero(degree: usize, len: usize) -> Self {
        ChainVector { degree, coeffs: vec![0; len] }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub(crate) fn as_u64(&self) -> Vec<u64> {
        self.coeffs.iter().map(|&c| u64::from(c)).collect()
    }

    pub(crate) fn from_u64(degree: usize, v: Vec<u64>) -> Self {
        ChainVector { degree, coeffs: v.into_iter().map(|c| c as u32).collect() }
    }
}

/// The Δ-complex quotient of an [`EquivComplex`] by its `Z_k`-action.
#[derive(Debug, Clone)]
pub struct QuotientComplex {
    k: u32,
    upstairs: EquivComplex,
    /// `reps[d][i]`: the lexicographically least upstairs simplex in orbit `i`.
    reps: Vec<Vec<Vec<u32>>>,
    /// Signed projection: upstairs simplex -> (orbit index, orientation sign).
    orbit_of: Vec<HashMap<Vec<u32>, (usize, i64)>>,
    /// `boundary_int[d]`: the `n_{d-1} x n_d` boundary matrix over `ℤ`
    /// (index 0 holds the empty `0 x n_0` map).
    boundary_int: Vec<DMatrix<i64>>,
    /// The same matrices mod `k`, stored per column.
    boundary_mod: Vec<Vec<Vec<u64>>>,
    /// `faces[d][i]`: orbit indices of the geometric faces of cell `i`
    /// (deduplicated; kept separately from the matrices because integral
    /// cancellation can hide a face from `boundary_int`).
    faces: Vec<Vec<Vec<usize>>>,
    betti: Vec<usize>,
    cycle_gens: Vec<Vec<Vec<u64>>>,
    cocycle_gens: Vec<Vec<Vec<u64>>>,
}

impl QuotientComplex {
    pub fn new(upstairs: EquivComplex) -> Result<Self> {
        let k = upstairs.k();
        let dim = upstairs.dim();
        let mut reps: Vec<Vec<Vec<u32>>> = vec![Vec::new(); dim + 1];
        let mut orbit_of: Vec<HashMap<Vec<u32>, (usize, i64)>> = vec![HashMap::new(); dim + 1];

        for d in 0..=dim {
            // Scanning in lexicographic order makes the first unassigned
            // member of each orbit its least one, hence the representative.
            for s in upstairs.simplices(d) {
                if orbit_of[d].contains_key(s) {
                    continue;
                }
                let idx = reps[d].len();
                reps[d].push(s.clone());
                for c in 0..k {
                    let (sign, image) = upstairs.act_signed(c, s);
                    let prev = orbit_of[d].insert(image, (idx, sign));
                    assert!(prev.is_none(), "free action produced a collapsed orbit");
                }
            }
            assert_eq!(
                reps[d].len() * k as usize,
                upstairs.simplices(d).len(),
                "orbit count times k must equal the upstairs simplex count"
            );
        }

        let mut boundary_int = vec![DMatrix::<i64>::zeros(0, reps[0].len())];
        let mut boundary_mod = vec![vec![vec![]; reps[0].len()]];
        let mut faces = vec![reps[0].iter().map(|_| Vec::new()).collect::<Vec<_>>()];
        for d in 1..=dim {
            let (nr, nc) = (reps[d - 1].len(), reps[d].len());
            let mut mat = DMatrix::<i64>::zeros(nr, nc);
            let mut cols = Vec::with_capacity(nc);
            let mut face_lists = Vec::with_capacity(nc);
            for (j, r) in reps[d].iter().enumerate() {
                let mut fl: Vec<usize> = Vec::with_capacity(r.len());
                for i in 0..r.len() {
                    let mut f = r.clone();
                    f.remove(i);
                    let (row, sign) = orbit_of[d - 1][&f];
                    mat[(row, j)] += if i % 2 == 0 { sign } else { -sign };
                    fl.push(row);
                }
                fl.sort_unstable();
                fl.dedup();
                face_lists.push(fl);
                cols.push(
                    (0..nr)
                        .map(|i| modk::reduce_signed(mat[(i, j)], u64::from(k)))
                        .collect(),
                );
            }
            boundary_int.push(mat);
            boundary_mod.push(cols);
            faces.push(face_lists);
        }
        for d in 2..=dim {
            let square = &boundary_int[d - 1] * &boundary_int[d];
            assert!(square.iter().all(|&x| x == 0), "∂∘∂ != 0 over Z in degree {d}");
        }

        let kk = u64::from(k);
        let mut betti = Vec::with_capacity(dim + 1);
        let mut cycle_gens = Vec::with_capacity(dim + 1);
        let mut cocycle_gens = Vec::with_capacity(dim + 1);
        for d in 0..=dim {
            let n_d = reps[d].len();
            // Cycles: kernel of ∂_d, read off the matrix rows; generators are
            // the kernel vectors independent modulo the columns of ∂_{d+1}.
            let rows_d: Vec<Vec<u64>> = if d == 0 {
                Vec::new()
            } else {
                (0..reps[d - 1].len())
                    .map(|i| boundary_mod[d].iter().map(|col| col[i]).collect())
                    .collect()
            };
            let kernel = modk::nullspace(kk, n_d, rows_d);
            let image_cols = if d < dim { boundary_mod[d + 1].clone() } else { Vec::new() };
            let gens = modk::complete_modulo(kk, image_cols, &kernel);
            // Cocycles: kernel of δ_d = (∂_{d+1})^T, whose rows are the
            // columns of ∂_{d+1}; quotient by the rows of ∂_d.
            let corows = if d < dim { boundary_mod[d + 1].clone() } else { Vec::new() };
            let cokernel = modk::nullspace(kk, n_d, corows);
            let coimage = (0..boundary_int[d].nrows())
                .map(|i| boundary_mod[d].iter().map(|col| col[i]).collect::<Vec<u64>>());
            let cogens = modk::complete_modulo(kk, coimage, &cokernel);
            assert_eq!(
                gens.len(),
                cogens.len(),
                "field duality: dim H_{d} must equal dim H^{d}"
            );
            betti.push(gens.len());
            cycle_gens.push(gens);
            cocycle_gens.push(cogens);
        }

        Ok(QuotientComplex {
            k,
            upstairs,
            reps,
            orbit_of,
            boundary_int,
            boundary_mod,
            faces,
            betti,
            cycle_gens,
            cocycle_gens,
        })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn dim(&self) -> usize {
        self.reps.len() - 1
    }

    /// Number of cells in degree `d`.
    pub fn size(&self, d: usize) -> usize {
        self.reps.get(d).map(|r| r.len()).unwrap_or(0)
    }

    pub fn total_cells(&self) -> usize {
        self.reps.iter().map(|r| r.len()).sum()
    }

    pub fn f_vector(&self) -> Vec<usize> {
        self.reps.iter().map(|r| r.len()).collect()
    }

    pub fn upstairs(&self) -> &EquivComplex {
        &self.upstairs
    }

    /// Representative upstairs simplices, one per cell.
    pub fn reps(&self, d: usize) -> &[Vec<u32>] {
        &self.reps[d]
    }

    /// Signed projection of an upstairs simplex: `(cell index, sign)` such
    /// that the oriented simplex maps to `sign` times the cell.
    pub fn proj(&self, simplex: &[u32]) -> Option<(usize, i64)> {
        self.orbit_of
            .get(simplex.len().wrapping_sub(1))?
            .get(simplex)
            .copied()
    }

    pub fn boundary_int(&self, d: usize) -> &DMatrix<i64> {
        &self.boundary_int[d]
    }

    pub(crate) fn boundary_mod(&self, d: usize) -> &[Vec<u64>] {
        &self.boundary_mod[d]
    }

    pub(crate) fn faces(&self, d: usize) -> &[Vec<usize>] {
        &self.faces[d]
    }

    pub(crate) fn betti_cached(&self) -> &[usize] {
        &self.betti
    }

    pub(crate) fn cycle_gens(&self, d: usize) -> &[Vec<u64>] {
        &self.cycle_gens[d]
    }

    pub(crate) fn cocycle_gens(&self, d: usize) -> &[Vec<u64>] {
        &self.cocycle_gens[d]
    }

    /// `∂x` over `Z_k`; `None` for degree 0 (there is no degree -1).
    pub fn boundary_chain(&self, x: &ChainVector) -> Option<ChainVector> {
        if x.degree == 0 {
            return None;
        }
        let d = x.degree;
        assert_eq!(x.coeffs.len(), self.size(d), "chain length mismatch");
        let kk = u64::from(self.k);
        let mut out = vec![0u64; self.size(d - 1)];
        for (j, &c) in x.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (i, o) in out.iter_mut().enumerate() {
                *o = (*o + u64::from(c) * self.boundary_mod[d][j][i]) % kk;
            }
        }
        Some(ChainVector::from_u64(d - 1, out))
    }
}

/// The standard model of `L_k^{2M-1}(w_1, ..., w_M)`: the quotient of the
/// `M`-fold join of weighted polygons by the diagonal rotation.
pub fn lens_model(k: u32, weights: &[u32]) -> Result<QuotientComplex> {
    if weights.is_empty() {
        return Err(Error::NoWeights);
    }
    let mut sphere = circle_complex(k, weights[0])?;
    for &w in &weights[1..] {
        sphere = join_complex(&sphere, &circle_complex(k, w)?)?;
    }
    QuotientComplex::new(sphere)
}

/// A subcomplex of a [`QuotientComplex`]: a set of cells closed under faces,
/// stored per degree. These are the test universe for the cohomological
/// index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subcomplex {
    /// `cells[d]`: sorted cell indices present in degree `d`; always indexed
    /// relative to a fixed ambient complex.
    cells: Vec<BTreeSet<usize>>,
}

impl Subcomplex {
    pub fn empty(ambient: &QuotientComplex) -> Self {
        Subcomplex { cells: vec![BTreeSet::new(); ambient.dim() + 1] }
    }

    pub fn full(ambient: &QuotientComplex) -> Self {
        Subcomplex {
            cells: (0..=ambient.dim())
                .map(|d| (0..ambient.size(d)).collect())
                .collect(),
        }
    }

    /// The subcomplex generated by the given cells: close under faces.
    pub fn generated_by(
        ambient: &QuotientComplex,
        seeds: impl IntoIterator<Item = (usize, usize)>,
    ) -> Self {
        let mut sub = Subcomplex::empty(ambient);
        let mut stack: Vec<(usize, usize)> = seeds.into_iter().collect();
        while let Some((d, i)) = stack.pop() {
            if !sub.cells[d].insert(i) {
                continue;
            }
            if d > 0 {
                for &f in &ambient.faces(d)[i] {
                    stack.push((d - 1, f));
                }
            }
        }
        sub
    }

    /// A single vertex.
    pub fn vertex(ambient: &QuotientComplex, index: usize) -> Self {
        Subcomplex::generated_by(ambient, [(0, index)])
    }

    /// The lens subspace spanned by the given join factors: all cells whose
    /// representatives only use vertices of those factors. Dropping to `r`
    /// of the `M` factors models `L_k^{2r-1}` inside `L_k^{2M-1}`.
    pub fn lens_subspace(ambient: &QuotientComplex, factors: &BTreeSet<usize>) -> Self {
        let table = ambient.upstairs().factor_of_vertex();
        let mut sub = Subcomplex::empty(ambient);
        for d in 0..=ambient.dim() {
            for (i, rep) in ambient.reps(d).iter().enumerate() {
                if rep.iter().all(|&v| factors.contains(&table[v as usize])) {
                    sub.cells[d].insert(i);
                }
            }
        }
        sub
    }

    /// Include each top-dimensional cell independently with probability
    /// `density`, then close under faces.
    pub fn random(ambient: &QuotientComplex, density: f64, rng: &mut impl Rng) -> Self {
        let top = ambient.dim();
        let seeds: Vec<(usize, usize)> = (0..ambient.size(top))
            .filter(|_| rng.gen::<f64>() < density)
            .map(|i| (top, i))
            .collect();
        Subcomplex::generated_by(ambient, seeds)
    }

    /// The join `A ∗ B` inside the join model: cells of `ambient_join` whose
    /// representative splits into an `A`-part and a `B`-part (either side may
    /// be empty, not both). `ambient_join` must be the quotient of
    /// `join_complex(x, y)` where `a` lives on the quotient of `x` and `b` on
    /// the quotient of `y`.
    pub fn join(
        qx: &QuotientComplex,
        qy: &QuotientComplex,
        ambient_join: &QuotientComplex,
        a: &Subcomplex,
        b: &Subcomplex,
    ) -> Self {
        let nx = qx.upstairs().vertex_count();
        let mut sub = Subcomplex::empty(ambient_join);
        for d in 0..=ambient_join.dim() {
            'cells: for (i, rep) in ambient_join.reps(d).iter().enumerate() {
                let split = rep.iter().position(|&v| v >= nx).unwrap_or(rep.len());
                let (xs, ys) = rep.split_at(split);
                if !xs.is_empty() {
                    let (cell, _) = qx.proj(xs).expect("X-part of a join simplex");
                    if !a.cells[xs.len() - 1].contains(&cell) {
                        continue 'cells;
                    }
                }
                if !ys.is_empty() {
                    let shifted: Vec<u32> = ys.iter().map(|&v| v - nx).collect();
                    let (cell, _) = qy.proj(&shifted).expect("Y-part of a join simplex");
                    if !b.cells[shifted.len() - 1].contains(&cell) {
                        continue 'cells;
                    }
                }
                sub.cells[d].insert(i);
            }
        }
        sub
    }

    pub fn intersect(&self, other: &Subcomplex) -> Subcomplex {
        Subcomplex {
            cells: self
                .cells
                .iter()
                .zip(&other.cells)
                .map(|(a, b)| a.intersection(b).copied().collect())
                .collect(),
        }
    }

    pub fn union(&self, other: &Subcomplex) -> Subcomplex {
        Subcomplex {
            cells: self
                .cells
                .iter()
                .zip(&other.cells)
                .map(|(a, b)| a.union(b).copied().collect())
                .collect(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.cells.iter().all(|c| c.is_empty())
    }

    pub fn total_cells(&self) -> usize {
        self.cells.iter().map(|c| c.len()).sum()
    }

    /// Cells in degree `d`, ascending.
    pub fn cells(&self, d: usize) -> Vec<usize> {
        self.cells.get(d).map(|s| s.iter().copied().collect()).unwrap_or_default()
    }

    pub fn contains(&self, d: usize, cell: usize) -> bool {
        self.cells.get(d).is_some_and(|s| s.contains(&cell))
    }

    /// Top dimension of the subcomplex itself, or `None` when empty.
    pub fn dim(&self) -> Option<usize> {
        self.cells.iter().rposition(|c| !c.is_empty())
    }

    /// Assemble from raw per-degree cell sets, skipping closure; tests use
    /// this to manufacture invalid inputs.
    #[cfg(test)]
    pub(crate) fn from_raw(cells: Vec<BTreeSet<usize>>) -> Self {
        Subcomplex { cells }
    }

    /// Check closure under faces in the given ambient complex.
    pub fn validate_in(&self, ambient: &QuotientComplex) -> Result<()> {
        if self.cells.len() != ambient.dim() + 1 {
            return Err(Error::BadComplex(format!(
                "subcomplex indexed over {} degrees, ambient has {}",
                self.cells.len(),
                ambient.dim() + 1
            )));
        }
        for d in 0..self.cells.len() {
            for &i in &self.cells[d] {
                if i >= ambient.size(d) {
                    return Err(Error::BadComplex(format!(
                        "subcomplex cell ({d}, {i}) does not exist in the ambient complex"
                    )));
                }
                if d > 0 {
                    for &f in &ambient.faces(d)[i] {
                        if !self.cells[d - 1].contains(&f) {
                            return Err(Error::BadComplex(format!(
                                "subcomplex is not closed under faces: cell ({d}, {i}) \
                                 is present but its face ({}, {f}) is not",
                                d - 1
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// The maximal cells (those not a face of another cell of the
    /// subcomplex); these regenerate it under [`Subcomplex::generated_by`].
    pub fn maximal_cells(&self, ambient: &QuotientComplex) -> Vec<(usize, usize)> {
        let mut covered: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); self.cells.len()];
        for d in 1..self.cells.len() {
            for &i in &self.cells[d] {
                for &f in &ambient.faces(d)[i] {
                    covered[d - 1].insert(f);
                }
            }
        }
        let mut out = Vec::new();
        for d in 0..self.cells.len() {
            for &i in &self.cells[d] {
                if !covered[d].contains(&i) {
                    out.push((d, i));
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling;

    #[test]
    fn the_circle_quotient_is_one_vertex_and_one_edge() {
        let q = lens_model(3, &[1]).unwrap();
        assert_eq!(q.f_vector(), vec![1, 1]);
        // Both endpoints of the edge project to the single vertex, so the
        // boundary cancels integrally.
        assert_eq!(q.boundary_int(1)[(0, 0)], 0);
    }

    #[test]
    fn lens_three_cells_count_and_bettis_match_the_sphere_quotient() {
        let q = lens_model(3, &[1, 1]).unwrap();
        assert_eq!(q.f_vector(), vec![2, 5, 6, 3]);
        assert_eq!(q.upstairs().f_vector(), vec![6, 15, 18, 9]);
        for d in 0..=q.dim() {
            assert_eq!(q.size(d) * 3, q.upstairs().simplices(d).len());
        }
    }

    #[test]
    fn model_sizes_scale_with_order_and_dimension() {
        assert_eq!(lens_model(3, &[1, 1]).unwrap().total_cells(), 16);
        assert_eq!(lens_model(3, &[1, 1, 1]).unwrap().total_cells(), 114);
        assert_eq!(lens_model(5, &[1, 2, 3]).unwrap().total_cells(), 266);
        assert_eq!(lens_model(2, &[1, 1, 1]).unwrap().total_cells(), 364);
    }

    #[test]
    fn boundary_squares_to_zero_mod_k_as_well() {
        let q = lens_model(5, &[1, 2]).unwrap();
        for d in 2..=q.dim() {
            for col in q.boundary_mod(d) {
                let chain = ChainVector::from_u64(d - 1, col.clone());
                let dd = q.boundary_chain(&chain).unwrap();
                assert!(dd.is_zero(), "∂∂ != 0 mod k in degree {d}");
            }
        }
    }

    #[test]
    fn projection_signs_are_consistent_with_the_action() {
        let q = lens_model(3, &[1, 1]).unwrap();
        // proj(g^c . [rep]) must equal sign(g^c on [rep]) * proj([rep]).
        for d in 0..=q.dim() {
            for rep in q.reps(d) {
                let (idx0, s0) = q.proj(rep).unwrap();
                assert_eq!(s0, 1, "representatives project with sign +1");
                for c in 0..3 {
                    let (sign, image) = q.upstairs().act_signed(c, rep);
                    let (idx, s) = q.proj(&image).unwrap();
                    assert_eq!(idx, idx0);
                    assert_eq!(s, sign, "sign mismatch at degree {d}, power {c}");
                }
            }
        }
    }

    #[test]
    fn subcomplex_closure_validation_and_maximal_cells_round_trip() {
        let q = lens_model(3, &[1, 1]).unwrap();
        let mut rng = sampling::rng(7);
        for _ in 0..10 {
            let a = Subcomplex::random(&q, 0.5, &mut rng);
            a.validate_in(&q).unwrap();
            let rebuilt = Subcomplex::generated_by(&q, a.maximal_cells(&q));
            assert_eq!(rebuilt, a);
        }
    }

    #[test]
    fn a_missing_face_fails_validation() {
        let q = lens_model(3, &[1, 1]).unwrap();
        let full = Subcomplex::full(&q);
        let mut broken = full.clone();
        broken.cells[0].clear();
        assert!(matches!(broken.validate_in(&q), Err(Error::BadComplex(_))));
    }

    #[test]
    fn lens_subspaces_are_lens_models_of_lower_dimension() {
        let q = lens_model(3, &[1, 1, 1]).unwrap();
        let h = Subcomplex::lens_subspace(&q, &BTreeSet::from([0, 1]));
        h.validate_in(&q).unwrap();
        // The sub-join of two of the three circle factors is the L_3^3 model:
        // same cell counts (2, 5, 6, 3), nothing above degree 3.
        assert_eq!(
            (0..=q.dim()).map(|d| h.cells(d).len()).collect::<Vec<_>>(),
            vec![2, 5, 6, 3, 0, 0]
        );
    }

    #[test]
    fn joins_of_subcomplexes_split_into_expected_cells() {
        let qc = lens_model(3, &[1]).unwrap();
        let qj = QuotientComplex::new(join_complex(qc.upstairs(), qc.upstairs()).unwrap()).unwrap();
        let full = Subcomplex::full(&qc);
        // full * full is everything; full * empty is the left factor only.
        assert_eq!(Subcomplex::join(&qc, &qc, &qj, &full, &full), Subcomplex::full(&qj));
        let left = Subcomplex::join(&qc, &qc, &qj, &full, &Subcomplex::empty(&qc));
        left.validate_in(&qj).unwrap();
        assert_eq!(left.total_cells(), 2);
        assert_eq!(
            Subcomplex::join(&qc, &qc, &qj, &Subcomplex::empty(&qc), &Subcomplex::empty(&qc)),
            Subcomplex::empty(&qj)
        );
        // vertex * vertex: two vertex cells and the three edge orbits of the
        // complete bipartite graph upstairs.
        let v = Subcomplex::vertex(&qc, 0);
        let vv = Subcomplex::join(&qc, &qc, &qj, &v, &v);
        vv.validate_in(&qj).unwrap();
        assert_eq!(vv.cells(0).len(), 2);
        assert_eq!(vv.cells(1).len(), 3);
        assert_eq!(vv.cells(2).len(), 0);
    }
}
