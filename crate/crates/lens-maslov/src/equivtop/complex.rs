//! Equivariant simplicial complexes: weighted polygons, their joins, and the
//! freeness bookkeeping that makes the quotients honest Δ-complexes.
//!
//! The sphere `S^{2M-1}(w_1, ..., w_M)` with its weighted `Z_k`-rotation is
//! modelled as the `M`-fold join of polygons: one `k`-gon per complex
//! coordinate (a square when `k = 2`), the generator rotating the `j`-th
//! polygon by `w_j` steps. The join of simplicial complexes is again
//! simplicial — a simplex is a pair (simplex or ∅ from each side, not both
//! empty) — so the whole tower stays closed-form.
//!
//! Vertices are numbered `0..n` and every simplex is stored as an ascending
//! id tuple; that global order orients everything downstream (boundary signs
//! upstairs, projection signs to the quotient, join signs). In a join the
//! left factor's vertices come before the right factor's, so the concatenation
//! of two ascending tuples is already ascending.

use std::collections::{HashMap, HashSet};

use crate::lens::{gcd, is_prime};
use crate::{Error, Result};

/// A finite simplicial complex with a free simplicial `Z_k`-action.
///
/// "Free on simplices" means no non-identity power maps a simplex to itself
/// (as a set). This is stronger than freeness on vertices and is exactly what
/// makes the quotient a Δ-complex whose cells are the simplex orbits.
#[derive(Debug, Clone, PartialEq)]
pub struct EquivComplex {
    k: u32,
    /// Vertex ids; always the contiguous range `0..n`, kept explicit because
    /// the file format names vertices individually.
    vertices: Vec<u32>,
    /// `simplices[d]` lists the `d`-simplices as ascending vertex tuples, in
    /// lexicographic order.
    simplices: Vec<Vec<Vec<u32>>>,
    /// Image of each vertex under the generator of `Z_k`.
    generator: Vec<u32>,
    /// Which join factor each vertex belongs to (all `0` for a polygon).
    factor_of_vertex: Vec<usize>,
}

impl EquivComplex {
    /// Build a complex from its top simplices, closing under faces and
    /// validating the action.
    pub fn from_top_simplices(
        k: u32,
        n_vertices: u32,
        generator: Vec<u32>,
        top_simplices: &[Vec<u32>],
        factor_of_vertex: Vec<usize>,
    ) -> Result<Self> {
        if !is_prime(k) {
            return Err(Error::CompositeOrder(k));
        }
        let n = n_vertices as usize;
        if generator.len() != n {
            return Err(Error::BadComplex(format!(
                "generator permutation has {} entries for {} vertices",
                generator.len(),
                n
            )));
        }
        let mut seen = vec![false; n];
        for &img in &generator {
            if img as usize >= n || seen[img as usize] {
                return Err(Error::BadComplex(format!(
                    "generator is not a permutation of 0..{n}"
                )));
            }
            seen[img as usize] = true;
        }
        let factor_of_vertex = if factor_of_vertex.is_empty() {
            vec![0; n]
        } else if factor_of_vertex.len() == n {
            factor_of_vertex
        } else {
            return Err(Error::BadComplex(format!(
                "factor table has {} entries for {} vertices",
                factor_of_vertex.len(),
                n
            )));
        };

        // Close under faces. Every face of an ascending tuple is the tuple
        // with one entry dropped, so closure never needs re-sorting.
        let mut by_dim: Vec<HashSet<Vec<u32>>> = Vec::new();
        let mut stack: Vec<Vec<u32>> = Vec::new();
        for s in top_simplices {
            let mut t = s.clone();
            t.sort_unstable();
            t.dedup();
            if t.len() != s.len() {
                return Err(Error::BadComplex(format!("simplex {s:?} repeats a vertex")));
            }
            if t.is_empty() {
                return Err(Error::BadComplex("empty simplex listed".into()));
            }
            if let Some(&v) = t.iter().find(|&&v| v as usize >= n) {
                return Err(Error::BadComplex(format!("simplex {s:?} uses unknown vertex {v}")));
            }
            stack.push(t);
        }
        while let Some(s) = stack.pop() {
            let d = s.len() - 1;
            if by_dim.len() <= d {
                by_dim.resize_with(d + 1, HashSet::new);
            }
            if !by_dim[d].insert(s.clone()) {
                continue;
            }
            if d > 0 {
                for i in 0..s.len() {
                    let mut f = s.clone();
                    f.remove(i);
                    stack.push(f);
                }
            }
        }
        if by_dim.is_empty() {
            return Err(Error::BadComplex("complex has no simplices".into()));
        }
        if by_dim[0].len() != n {
            return Err(Error::BadComplex(format!(
                "{} of {} vertices appear in no simplex",
                n - by_dim[0].len(),
                n
            )));
        }

        let mut simplices: Vec<Vec<Vec<u32>>> = by_dim
            .into_iter()
            .map(|set| {
                let mut v: Vec<Vec<u32>> = set.into_iter().collect();
                v.sort();
                v
            })
            .collect();
        simplices.shrink_to_fit();

        let complex = EquivComplex {
            k,
            vertices: (0..n_vertices).collect(),
            simplices,
            generator,
            factor_of_vertex,
        };
        complex.validate_action()?;
        Ok(complex)
    }

    /// Check that the action is simplicial (images of simplices are
    /// simplices) and free on simplices. Since `k` is prime, a simplex fixed
    /// by any non-identity power is fixed by the generator itself, so one
    /// power suffices for the freeness check; simpliciality of the generator
    /// propagates to all powers.
    fn validate_action(&self) -> Result<()> {
        if self.k >= 2 {
            let mut v = 0u32;
            for _ in 0..self.k {
                v = self.generator[v as usize];
            }
            if v != 0 {
                return Err(Error::BadComplex(format!(
                    "generator does not have order {}",
                    self.k
                )));
            }
        }
        for list in &self.simplices {
            let index: HashSet<&[u32]> = list.iter().map(|s| s.as_slice()).collect();
            for s in list {
                let (_, image) = self.act_signed(1, s);
                if !index.contains(image.as_slice()) {
                    return Err(Error::BadComplex(format!(
                        "action is not simplicial: image {image:?} of {s:?} is missing"
                    )));
                }
                if image == *s {
                    return Err(Error::ActionNotFree(format!(
                        "simplex {s:?} is fixed by the generator"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn vertex_count(&self) -> u32 {
        self.vertices.len() as u32
    }

    /// Top dimension.
    pub fn dim(&self) -> usize {
        self.simplices.len() - 1
    }

    pub fn simplices(&self, d: usize) -> &[Vec<u32>] {
        self.simplices.get(d).map(|v| v.as_slice()).unwrap_or(&[])
    }

    pub fn generator(&self) -> &[u32] {
        &self.generator
    }

    pub fn factor_of_vertex(&self) -> &[usize] {
        &self.factor_of_vertex
    }

    /// Number of join factors.
    pub fn factor_count(&self) -> usize {
        self.factor_of_vertex.iter().copied().max().unwrap_or(0) + 1
    }

    /// Apply `g^c` to an ascending tuple; returns the sign of the permutation
    /// that re-sorts the image together with the sorted image. This is the
    /// action on *oriented* simplices.
    pub fn act_signed(&self, c: u32, simplex: &[u32]) -> (i64, Vec<u32>) {
        let mut image: Vec<u32> = simplex
            .iter()
            .map(|&v| {
                let mut x = v;
                for _ in 0..(c % self.k) {
                    x = self.generator[x as usize];
                }
                x
            })
            .collect();
        let sign = sort_sign(&mut image);
        (sign, image)
    }

    /// Simplices not contained in any higher simplex. These regenerate the
    /// complex under face closure, and are what the file format stores.
    pub fn maximal_simplices(&self) -> Vec<Vec<u32>> {
        let mut maximal = Vec::new();
        for d in 0..self.simplices.len() {
            if d + 1 == self.simplices.len() {
                maximal.extend(self.simplices[d].iter().cloned());
                continue;
            }
            let covers: HashSet<Vec<u32>> = self.simplices[d + 1]
                .iter()
                .flat_map(|s| {
                    (0..s.len()).map(move |i| {
                        let mut f = s.clone();
                        f.remove(i);
                        f
                    })
                })
                .collect();
            for s in &self.simplices[d] {
                if !covers.contains(s) {
                    maximal.push(s.clone());
                }
            }
        }
        maximal
    }

    pub fn f_vector(&self) -> Vec<usize> {
        self.simplices.iter().map(|l| l.len()).collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.f_vector()
            .iter()
            .enumerate()
            .map(|(d, &c)| if d % 2 == 0 { c as i64 } else { -(c as i64) })
            .sum()
    }

    /// Simplicial boundary matrices with the ascending-tuple orientation:
    /// `columns[d][j]` is `∂` of the `j`-th `d`-simplex as a signed vector
    /// over the `(d-1)`-simplices. Index `0` is the empty map.
    pub(crate) fn boundary_columns(&self) -> Vec<Vec<Vec<i64>>> {
        let mut index_of: Vec<HashMap<&[u32], usize>> = Vec::new();
        for list in &self.simplices {
            index_of.push(list.iter().enumerate().map(|(i, s)| (s.as_slice(), i)).collect());
        }
        let mut all = vec![Vec::new()];
        for d in 1..self.simplices.len() {
            let mut cols = Vec::with_capacity(self.simplices[d].len());
            for s in &self.simplices[d] {
                let mut col = vec![0i64; self.simplices[d - 1].len()];
                for i in 0..s.len() {
                    let mut f = s.clone();
                    f.remove(i);
                    let row = index_of[d - 1][f.as_slice()];
                    col[row] += if i % 2 == 0 { 1 } else { -1 };
                }
                cols.push(col);
            }
            all.push(cols);
        }
        all
    }
}

/// Sort in place, returning the sign of the sorting permutation. Tuples are
/// short (at most the complex dimension plus one), so counting inversions
/// pairwise is the cheapest correct thing.
pub(crate) fn sort_sign(v: &mut [u32]) -> i64 {
    let mut inversions = 0u32;
    for i in 0..v.len() {
        for j in (i + 1)..v.len() {
            if v[i] > v[j] {
                inversions += 1;
            }
        }
    }
    v.sort_unstable();
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// The equivariant circle `S^1(w)`: a polygon with the `Z_k`-rotation by `w`
/// steps. For `k >= 3` this is the `k`-gon with vertex `j` sent to `j + w`;
/// for `k = 2` a rotating 2-gon is not simplicial, so the model is the square
/// with the antipodal map.
pub fn circle_complex(k: u32, w: u32) -> Result<EquivComplex> {
    if !is_prime(k) {
        return Err(Error::CompositeOrder(k));
    }
    if gcd(w % k, k) != 1 {
        return Err(Error::WeightNotCoprime { weight: w, k });
    }
    let sides = if k == 2 { 4u32 } else { k };
    let step = if k == 2 { 2 } else { w % k };
    let edges: Vec<Vec<u32>> = (0..sides)
        .map(|j| {
            let mut e = vec![j, (j + 1) % sides];
            e.sort_unstable();
            e
        })
        .collect();
    let generator: Vec<u32> = (0..sides).map(|j| (j + step) % sides).collect();
    EquivComplex::from_top_simplices(k, sides, generator, &edges, vec![0; sides as usize])
}

/// The join `X * Y` with the diagonal `Z_k`-action.
///
/// Simplices are unions `σ ⊔ τ` with `σ` a simplex of `X` or empty and `τ` a
/// simplex of `Y` or empty, not both empty. `Y`'s vertex ids are shifted past
/// `X`'s, so the global ascending order lists `X` before `Y` and the join of
/// oriented simplices is plain concatenation, with no sign.
pub fn join_complex(x: &EquivComplex, y: &EquivComplex) -> Result<EquivComplex> {
    if x.k != y.k {
        return Err(Error::BadComplex(format!(
            "cannot join complexes with different group orders {} and {}",
            x.k, y.k
        )));
    }
    let nx = x.vertex_count();
    let n = nx + y.vertex_count();
    let mut generator = x.generator.clone();
    generator.extend(y.generator.iter().map(|&v| v + nx));
    let fx = x.factor_count();
    let mut factors = x.factor_of_vertex.clone();
    factors.extend(y.factor_of_vertex.iter().map(|&f| f + fx));

    // Emitting top simplices (top of X joined with top of Y) is enough: face
    // closure regenerates every mixed-dimension pair, including the bare
    // copies of X and Y (empty other side).
    let mut tops = Vec::new();
    for s in x.simplices(x.dim()) {
        for t in y.simplices(y.dim()) {
            let mut joined = s.clone();
            joined.extend(t.iter().map(|&v| v + nx));
            tops.push(joined);
        }
    }
    EquivComplex::from_top_simplices(x.k, n, generator, &tops, factors)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_and_pentagon_polygons() {
        let c3 = circle_complex(3, 1).unwrap();
        assert_eq!(c3.f_vector(), vec![3, 3]);
        assert_eq!(c3.generator(), &[1, 2, 0]);

        let c5 = circle_complex(5, 2).unwrap();
        assert_eq!(c5.f_vector(), vec![5, 5]);
        assert_eq!(c5.generator(), &[2, 3, 4, 0, 1]);
        assert_eq!(c5.euler_characteristic(), 0);
    }

    #[test]
    fn the_two_torsion_circle_is_a_square() {
        let c2 = circle_complex(2, 1).unwrap();
        assert_eq!(c2.f_vector(), vec![4, 4]);
        assert_eq!(c2.generator(), &[2, 3, 0, 1]);
        // No edge is fixed by the antipodal map; validation in the
        // constructor already asserts this, so construction succeeding is
        // the test.
    }

    #[test]
    fn composite_orders_and_bad_weights_are_rejected() {
        assert!(matches!(circle_complex(4, 1), Err(Error::CompositeOrder(4))));
        assert!(matches!(
            circle_complex(3, 3),
            Err(Error::WeightNotCoprime { .. })
        ));
    }

    #[test]
    fn join_of_two_triangles_is_the_three_sphere() {
        let c = circle_complex(3, 1).unwrap();
        let s3 = join_complex(&c, &c).unwrap();
        assert_eq!(s3.f_vector(), vec![6, 15, 18, 9]);
        assert_eq!(s3.euler_characteristic(), 0);
        assert_eq!(s3.factor_count(), 2);
        assert_eq!(s3.dim(), 3);
    }

    #[test]
    fn joins_with_mismatched_group_orders_are_rejected() {
        let a = circle_complex(3, 1).unwrap();
        let b = circle_complex(5, 1).unwrap();
        assert!(matches!(join_complex(&a, &b), Err(Error::BadComplex(_))));
    }

    #[test]
    fn a_fixed_simplex_is_caught() {
        // The 1-gon... a triangle with the identity "rotation" fixes every
        // simplex; freeness validation must reject it.
        let err = EquivComplex::from_top_simplices(
            3,
            3,
            vec![0, 1, 2],
            &[vec![0, 1], vec![1, 2], vec![0, 2]],
            vec![],
        );
        assert!(matches!(err, Err(Error::ActionNotFree(_))));
    }

    #[test]
    fn orientation_signs_track_sorting_parity() {
        let c = circle_complex(3, 1).unwrap();
        // Edge {2, 0} maps to {0, 1} under the rotation: images (0, 1) of
        // (2, 0)... the tuple is stored ascending as [0, 2], images [1, 0],
        // one inversion, sign -1.
        let (sign, image) = c.act_signed(1, &[0, 2]);
        assert_eq!(image, vec![0, 1]);
        assert_eq!(sign, -1);
        // Edge [0, 1] maps to [1, 2] with no inversion.
        let (sign, image) = c.act_signed(1, &[0, 1]);
        assert_eq!(image, vec![1, 2]);
        assert_eq!(sign, 1);
    }

    #[test]
    fn maximal_simplices_regenerate_the_complex() {
        let c = circle_complex(3, 1).unwrap();
        let s3 = join_complex(&c, &c).unwrap();
        let tops = s3.maximal_simplices();
        assert_eq!(tops.len(), 9);
        let rebuilt = EquivComplex::from_top_simplices(
            3,
            s3.vertex_count(),
            s3.generator().to_vec(),
            &tops,
            s3.factor_of_vertex().to_vec(),
        )
        .unwrap();
        assert_eq!(rebuilt, s3);
    }
}
