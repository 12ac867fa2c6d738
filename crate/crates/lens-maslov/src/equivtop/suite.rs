//! Randomized verification of the index axioms on seeded subcomplex pairs.
//!
//! For subcomplexes `A`, `B` of a lens-space model the cohomological index
//! obeys, with no exceptions:
//!
//! * **duality** — the cocycle-restriction and cycle-image routes compute the
//!   same number;
//! * **monotonicity** — `A ⊂ B` implies `ind(A) ≤ ind(B)`, applied to
//!   `A ∩ B ⊂ A ⊂ A ∪ B ⊂ L`;
//! * **hyperplane** — cutting with a lens subspace of codimension two costs
//!   at most two: `ind(A ∩ H) ≥ ind(A) - 2`;
//! * **subadditivity** — `ind(A ∪ B) ≤ ind(A) + ind(B) + 1`, with the `+1`
//!   dropped when either index is even;
//! * **join additivity** — `|ind(A ∗ B) - ind(A) - ind(B)| ≤ 1`, exact when
//!   either index is even, and exactly `+2` when the right factor is a full
//!   one-dimensional lens space.
//!
//! [`property_suite`] samples random face-closed subcomplexes from a seeded
//! generator, checks every property on every pair, and reports violations
//! with reproduction certificates (the maximal cells of the offending pair).
//! A violation here means a bug in the index computation, not a counter-
//! example; the tolerance is zero.
//!
//! Join ambients square the cell count, so each join-based check runs only
//! when its ambient stays under a size cap; anything skipped is named in the
//! report. On a three-dimensional model everything runs; on a five-
//! dimensional one the self-join is out of reach but the stabilizing join
//! with a circle still fits.

use std::collections::BTreeSet;
use std::fmt;

use super::complex::join_complex;
use super::index::{cohom_index, homology_index};
use super::quotient::{lens_model, QuotientComplex, Subcomplex};
use crate::{sampling, Error, Result};

/// Ambient models above this many orbit cells are refused: the suite is
/// meant to run in seconds, and join models square the count.
const MAX_CELLS: usize = 10_000;

/// One failed property instance, with enough detail to reproduce it.
#[derive(Debug, Clone)]
pub struct PropertyViolation {
    /// Which property failed (`"duality"`, `"monotonicity"`, ...).
    pub property: String,
    /// Index of the sample pair, counting pinned pairs first.
    pub sample: usize,
    /// Human-readable indices and the maximal cells of the offending pair.
    pub detail: String,
}

/// Outcome of a [`property_suite`] run.
#[derive(Debug, Clone)]
pub struct PropertyReport {
    pub k: u32,
    pub weights: Vec<u32>,
    /// Number of subcomplex pairs examined (pinned + random).
    pub samples: usize,
    /// Number of individual property instances checked.
    pub checks: usize,
    /// Properties whose join ambient was too large to build, if any.
    pub skipped: Vec<String>,
    pub violations: Vec<PropertyViolation>,
}

impl PropertyReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for PropertyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} pairs, {} checks, {} violations on L_{}({:?})",
            self.samples,
            self.checks,
            self.violations.len(),
            self.k,
            self.weights
        )?;
        if !self.skipped.is_empty() {
            write!(f, " (skipped: {})", self.skipped.join(", "))?;
        }
        Ok(())
    }
}

struct Session {
    lens: QuotientComplex,
    circle: QuotientComplex,
    join_self: Option<QuotientComplex>,
    join_circle: Option<QuotientComplex>,
    hyperplane: Subcomplex,
    full_circle: Subcomplex,
    checks: usize,
    violations: Vec<PropertyViolation>,
}

impl Session {
    /// Both index routes, recording a duality violation if they disagree.
    /// The cocycle route's answer is used either way.
    fn index_checked(
        &mut self,
        ambient_is_lens: bool,
        a: &Subcomplex,
        sample: usize,
        who: &str,
    ) -> Result<usize> {
        let ambient = if ambient_is_lens {
            &self.lens
        } else {
            self.join_self.as_ref().expect("join checks only run when the ambient exists")
        };
        let via_cocycles = cohom_index(ambient, a)?;
        let via_cycles = homology_index(ambient, a)?;
        let mismatch = (via_cocycles != via_cycles).then(|| {
            format!(
                "{who}: cocycle route {via_cocycles}, cycle route {via_cycles}; cells {:?}",
                a.maximal_cells(ambient)
            )
        });
        self.checks += 1;
        if let Some(detail) = mismatch {
            self.violations.push(PropertyViolation { property: "duality".into(), sample, detail });
        }
        Ok(via_cocycles)
    }

    fn expect(&mut self, ok: bool, property: &str, sample: usize, detail: String) {
        self.checks += 1;
        if !ok {
            self.violations.push(PropertyViolation { property: property.into(), sample, detail });
        }
    }

    fn run_pair(&mut self, sample: usize, a: &Subcomplex, b: &Subcomplex) -> Result<()> {
        let ia = self.index_checked(true, a, sample, "A")?;
        let ib = self.index_checked(true, b, sample, "B")?;
        let max_index = 2 * self.lens.upstairs().factor_count();
        let certificate = format!(
            "ind(A) = {ia}, ind(B) = {ib}; A = {:?}, B = {:?}",
            a.maximal_cells(&self.lens),
            b.maximal_cells(&self.lens)
        );

        let meet = cohom_index(&self.lens, &a.intersect(b))?;
        let union = cohom_index(&self.lens, &a.union(b))?;
        self.expect(
            meet <= ia.min(ib) && ia.max(ib) <= union && union <= max_index,
            "monotonicity",
            sample,
            format!("ind(A∩B) = {meet}, ind(A∪B) = {union}; {certificate}"),
        );

        let cut = cohom_index(&self.lens, &a.intersect(&self.hyperplane))?;
        self.expect(
            cut + 2 >= ia,
            "hyperplane",
            sample,
            format!("ind(A∩H) = {cut}; {certificate}"),
        );

        let bound = ia + ib + usize::from(ia % 2 == 1 && ib % 2 == 1);
        self.expect(
            union <= bound,
            "subadditivity",
            sample,
            format!("ind(A∪B) = {union} exceeds {bound}; {certificate}"),
        );

        if self.join_self.is_some() {
            let joined = Subcomplex::join(
                &self.lens,
                &self.lens,
                self.join_self.as_ref().unwrap(),
                a,
                b,
            );
            let ij = self.index_checked(false, &joined, sample, "A∗B")?;
            let additive = ia + ib;
            let exact_expected = ia % 2 == 0 || ib % 2 == 0;
            let ok = if exact_expected {
                ij == additive
            } else {
                ij + 1 >= additive && ij <= additive + 1
            };
            self.expect(
                ok,
                "join-additivity",
                sample,
                format!(
                    "ind(A∗B) = {ij}, expected {additive} ± 1 (exact: {exact_expected}); \
                     {certificate}"
                ),
            );
        }

        let stability = match &self.join_circle {
            Some(join_circle) => {
                let stabilized =
                    Subcomplex::join(&self.lens, &self.circle, join_circle, a, &self.full_circle);
                Some(cohom_index(join_circle, &stabilized)?)
            }
            None => None,
        };
        if let Some(stabilized_index) = stability {
            self.expect(
                stabilized_index == ia + 2,
                "join-stability",
                sample,
                format!("ind(A∗L¹) = {stabilized_index}, expected {}; {certificate}", ia + 2),
            );
        }

        Ok(())
    }
}

/// Orbit cells of the model with this many circle factors, without building
/// it: each factor contributes `2k` upstairs cells (`8` when `k = 2`) plus
/// the empty simplex to the join-counting product.
fn predicted_cells(k: u32, factors: usize) -> usize {
    let per_factor = if k == 2 { 9usize } else { 2 * k as usize + 1 };
    (per_factor.pow(factors as u32) - 1) / k as usize
}

/// Check every index axiom on pinned and seeded-random subcomplex pairs of
/// the lens-space model `L_k^{2M-1}(weights)`.
///
/// Runs five pinned pairs (empty, single-vertex, and full combinations) and
/// then `samples` random pairs drawn by including top cells at a sweeping
/// density and closing under faces. Identical `(k, weights, samples, seed)`
/// always examines identical pairs.
pub fn property_suite(
    k: u32,
    weights: &[u32],
    samples: usize,
    seed: u64,
) -> Result<PropertyReport> {
    if weights.is_empty() {
        return Err(Error::NoWeights);
    }
    let base_cells = predicted_cells(k, weights.len());
    if base_cells > MAX_CELLS {
        return Err(Error::BadComplex(format!(
            "this model would have {base_cells} cells (limit {MAX_CELLS}); use fewer factors"
        )));
    }
    let lens = lens_model(k, weights)?;
    let circle = lens_model(k, &[1])?;

    let mut skipped = Vec::new();
    let join_self = if predicted_cells(k, 2 * weights.len()) <= MAX_CELLS {
        Some(QuotientComplex::new(join_complex(lens.upstairs(), lens.upstairs())?)?)
    } else {
        skipped.push("join-additivity".to_string());
        None
    };
    let join_circle = if predicted_cells(k, weights.len() + 1) <= MAX_CELLS {
        Some(QuotientComplex::new(join_complex(lens.upstairs(), circle.upstairs())?)?)
    } else {
        skipped.push("join-stability".to_string());
        None
    };

    let all_but_last: BTreeSet<usize> = (0..weights.len().saturating_sub(1)).collect();
    let mut session = Session {
        hyperplane: Subcomplex::lens_subspace(&lens, &all_but_last),
        full_circle: Subcomplex::full(&circle),
        lens,
        circle,
        join_self,
        join_circle,
        checks: 0,
        violations: Vec::new(),
    };

    let pinned: Vec<(Subcomplex, Subcomplex)> = vec![
        (Subcomplex::empty(&session.lens), Subcomplex::empty(&session.lens)),
        (Subcomplex::empty(&session.lens), Subcomplex::full(&session.lens)),
        (Subcomplex::vertex(&session.lens, 0), Subcomplex::vertex(&session.lens, 0)),
        (Subcomplex::vertex(&session.lens, 0), Subcomplex::full(&session.lens)),
        (Subcomplex::full(&session.lens), Subcomplex::full(&session.lens)),
    ];
    let pinned_count = pinned.len();
    for (sample, (a, b)) in pinned.into_iter().enumerate() {
        session.run_pair(sample, &a, &b)?;
    }

    let densities = [0.15, 0.3, 0.5, 0.7, 0.85];
    let mut rng = sampling::rng(seed);
    for i in 0..samples {
        let da = densities[i % densities.len()];
        let db = densities[(i / densities.len() + i) % densities.len()];
        let a = Subcomplex::random(&session.lens, da, &mut rng);
        let b = Subcomplex::random(&session.lens, db, &mut rng);
        session.run_pair(pinned_count + i, &a, &b)?;
    }

    Ok(PropertyReport {
        k,
        weights: weights.to_vec(),
        samples: pinned_count + samples,
        checks: session.checks,
        skipped,
        violations: session.violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a_short_run_on_the_three_dimensional_model_is_clean() {
        let report = property_suite(3, &[1, 1], 12, 0x5EED).unwrap();
        assert_eq!(report.samples, 17);
        assert!(report.skipped.is_empty());
        assert!(report.checks > 100);
        assert!(report.passed(), "violations: {:#?}", report.violations);
    }

    #[test]
    fn the_five_dimensional_model_runs_without_its_self_join() {
        let report = property_suite(3, &[1, 1, 1], 2, 0xF1FE).unwrap();
        assert_eq!(report.skipped, vec!["join-additivity".to_string()]);
        assert!(report.passed(), "violations: {:#?}", report.violations);
    }

    #[test]
    fn the_join_of_two_vertices_has_index_two() {
        // Both factors have odd index 1, so quasi-additivity allows any of
        // 1, 2, 3. The true value is 2: the joined pair is a theta graph
        // downstairs whose Z_3-cover (a complete bipartite K_{3,3}) is
        // connected, so the degree-one class restricts nontrivially.
        let lens = lens_model(3, &[1, 1]).unwrap();
        let join =
            QuotientComplex::new(join_complex(lens.upstairs(), lens.upstairs()).unwrap())
                .unwrap();
        let v = Subcomplex::vertex(&lens, 0);
        let joined = Subcomplex::join(&lens, &lens, &join, &v, &v);
        assert_eq!(cohom_index(&join, &joined).unwrap(), 2);
        assert_eq!(homology_index(&join, &joined).unwrap(), 2);
    }

    #[test]
    fn oversized_base_models_are_refused_before_building() {
        assert!(matches!(
            property_suite(3, &[1, 1, 1, 1, 1, 1], 1, 0),
            Err(Error::BadComplex(_))
        ));
    }

    #[test]
    fn identical_seeds_tell_identical_stories() {
        let a = property_suite(3, &[1, 1], 6, 99).unwrap();
        let b = property_suite(3, &[1, 1], 6, 99).unwrap();
        assert_eq!(a.checks, b.checks);
        assert_eq!(a.samples, b.samples);
        assert_eq!(a.violations.len(), b.violations.len());
    }
}
