//! The ten guaranteed-value checks behind the `reproduce` command and the
//! `acceptance` test target.
//!
//! Each criterion recomputes one headline value from scratch — no fixtures,
//! no caching — and returns the computed value alongside its verdict, so a
//! failure prints the number that actually came out. Some criteria carry a
//! runtime budget; [`Outcome::within_budget`] reports it separately from the
//! mathematical verdict because a slow pass and a wrong value are different
//! kinds of bad news.

use std::f64::consts::TAU;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::Rng;

use lens_maslov::contact::{
    discriminant_times, flow, translated_points, DiscriminantOptions, FlowMap, Hamiltonian,
    Harmonic, Monomial, TranslatedPointOptions,
};
use lens_maslov::equivtop::{
    bockstein, chain_join_equivariant, circle_complex, cochain_class_is_zero,
    cohomology_generators, cycle_class_is_zero, homology, join_complex, lens_model,
    property_suite, twist_check, ChainVector, QuotientComplex,
};
use lens_maslov::genfun::{quasiadd_embed, ConicalGF};
use lens_maslov::lens::{rotation, tau, LensSpace};
use lens_maslov::maslov::{
    crossing_report, nu_sp_path, random_sp_loop, reeb_mu, CrossingOptions, MuOptions, SpPath,
};
use lens_maslov::quadform::{sharp_quad, QuadForm};
use lens_maslov::sampling;

/// One named check with an optional stated runtime budget.
pub struct Criterion {
    pub name: &'static str,
    pub budget: Option<Duration>,
    run: fn() -> Check,
}

impl Criterion {
    pub fn run(&self) -> Check {
        (self.run)()
    }
}

/// A computed value and its verdict.
pub struct Check {
    pub value: String,
    pub pass: bool,
}

impl Check {
    fn new(pass: bool, value: String) -> Check {
        Check { value, pass }
    }
    fn error(e: impl std::fmt::Display) -> Check {
        Check { value: format!("error: {e}"), pass: false }
    }
}

/// The result of running one criterion.
pub struct Outcome {
    pub name: &'static str,
    pub value: String,
    pub pass: bool,
    pub elapsed: Duration,
    pub budget: Option<Duration>,
}

impl Outcome {
    pub fn within_budget(&self) -> bool {
        self.budget.map_or(true, |b| self.elapsed <= b)
    }
}

/// The checks, in a fixed order.
pub fn all() -> Vec<Criterion> {
    fn secs(s: u64) -> Option<Duration> {
        Some(Duration::from_secs(s))
    }
    vec![
        Criterion { name: "standard-loop-nu", budget: secs(1), run: standard_loop_nu },
        Criterion { name: "reeb-iterate-mu", budget: secs(10), run: reeb_iterate_mu },
        Criterion { name: "loop-homomorphism", budget: secs(30), run: loop_homomorphism },
        Criterion { name: "zero-tower-additivity", budget: secs(5), run: zero_tower_additivity },
        Criterion { name: "composition-graph", budget: None, run: composition_graph },
        Criterion { name: "lens-homology-ladder", budget: secs(60), run: lens_homology_ladder },
        Criterion { name: "join-calculus", budget: None, run: join_calculus },
        Criterion { name: "index-property-suite", budget: secs(300), run: index_property_suite },
        Criterion { name: "translated-point-count", budget: secs(120), run: translated_point_count },
        Criterion { name: "discriminant-times", budget: None, run: discriminant_times_check },
    ]
}

/// Run every criterion, timing each.
pub fn run_all() -> Vec<Outcome> {
    all()
        .into_iter()
        .map(|c| {
            let start = Instant::now();
            let check = c.run();
            Outcome {
                name: c.name,
                value: check.value,
                pass: check.pass,
                elapsed: start.elapsed(),
                budget: c.budget,
            }
        })
        .collect()
}

/// The standard circle in Sp(2; R), decomposed into three frozen pieces:
/// the start tower has index 6, the end tower 4, so nu = 2.
fn standard_loop_nu() -> Check {
    let path: SpPath = Arc::new(|s| rotation(1, TAU * s));
    match nu_sp_path(&path, Some(3), &MuOptions::default()) {
        Err(e) => Check::error(e),
        Ok(rep) => {
            let i0 = rep.ind_start.unwrap_or(0);
            let i1 = rep.ind_end.unwrap_or(0);
            let nu = rep.mu.unwrap_or(i64::MIN);
            Check::new(
                (i0, i1, nu) == (6, 4, 2),
                format!("nu = {nu} via tower indices {i0} -> {i1}"),
            )
        }
    }
}

/// mu of l full Reeb turns on L_k^{2n-1} is 2nl, across a 27-point grid.
fn reeb_iterate_mu() -> Check {
    let opts = MuOptions { locate_jumps: false, ..MuOptions::default() };
    let mut cases = 0;
    for n in [1usize, 2, 3] {
        for k in [2u32, 3, 5] {
            for l in [1usize, 2, 3] {
                let lens = match LensSpace::new(k, vec![1; n]) {
                    Ok(lens) => lens,
                    Err(e) => return Check::error(e),
                };
                let mu = match reeb_mu(&lens, l, &opts) {
                    Ok(rep) => rep.mu.unwrap_or(i64::MIN),
                    Err(e) => return Check::error(e),
                };
                if mu != 2 * (n * l) as i64 {
                    return Check::new(
                        false,
                        format!("mu = {mu} at (n, k, l) = ({n}, {k}, {l}); 2nl = {}", 2 * n * l),
                    );
                }
                cases += 1;
            }
        }
    }
    Check::new(true, format!("mu = 2nl on all {cases} grid points"))
}

/// nu is a homomorphism on loops: additive on random pairs, n = 1 and 2.
fn loop_homomorphism() -> Check {
    let opts = MuOptions { locate_jumps: false, ..MuOptions::default() };
    let mut rng = sampling::rng(0x3A11);
    fn draw<R: Rng>(n: usize, rng: &mut R) -> (SpPath, i64) {
        let w: Vec<i64> = (0..n).map(|_| rng.gen_range(-2..=2)).collect();
        random_sp_loop(n, &w, 0.3, rng.gen())
    }
    let mut pairs = 0;
    for n in [1usize, 2] {
        for _ in 0..10 {
            let (x, ex) = draw(n, &mut rng);
            let (y, ey) = draw(n, &mut rng);
            let (xc, yc) = (x.clone(), y.clone());
            let product: SpPath = Arc::new(move |s| xc(s) * yc(s));
            let nu = |p: &SpPath| nu_sp_path(p, None, &opts).map(|r| r.mu.unwrap_or(i64::MIN));
            let (nx, ny, nxy) = match (nu(&x), nu(&y), nu(&product)) {
                (Ok(a), Ok(b), Ok(c)) => (a, b, c),
                (Err(e), ..) | (_, Err(e), _) | (.., Err(e)) => return Check::error(e),
            };
            if nxy != nx + ny || (nx, ny) != (ex, ey) {
                return Check::new(
                    false,
                    format!("pair {pairs} (n = {n}): nu {nx} + {ny} vs nu(xy) = {nxy}"),
                );
            }
            pairs += 1;
        }
    }
    Check::new(true, format!("nu additive on all {pairs} random loop pairs (n = 1, 2)"))
}

/// i is exactly additive under the coupling composition of towers built
/// from the zero form.
fn zero_tower_additivity() -> Check {
    let mut cases = 0;
    for n in [1usize, 2] {
        let tower = |height: usize| -> lens_maslov::Result<QuadForm> {
            let mut t = QuadForm::zero(2 * n);
            for _ in 1..height {
                t = sharp_quad(&t, &QuadForm::zero(2 * n))?;
            }
            Ok(t)
        };
        for n1 in 1..=3usize {
            for n2 in 1..=3usize {
                let (t1, t2) = match (tower(n1), tower(n2)) {
                    (Ok(a), Ok(b)) => (a, b),
                    (Err(e), _) | (_, Err(e)) => return Check::error(e),
                };
                let joined = match sharp_quad(&t1, &t2) {
                    Ok(q) => q,
                    Err(e) => return Check::error(e),
                };
                if joined.index_i() != t1.index_i() + t2.index_i() {
                    return Check::new(
                        false,
                        format!(
                            "towers ({n1}, {n2}) at n = {n}: i = {} vs {} + {}",
                            joined.index_i(),
                            t1.index_i(),
                            t2.index_i()
                        ),
                    );
                }
                cases += 1;
            }
        }
    }
    Check::new(true, format!("i additive on all {cases} zero-tower pairs"))
}

/// A random flow close to the identity, invariant for k = 3, weights (1, 1):
/// small random coefficients on invariant monomials, short random duration.
fn random_small_flow<R: Rng>(rng: &mut R) -> FlowMap {
    let menu: [(Harmonic, [(u32, u32); 2]); 6] = [
        (Harmonic::Re, [(1, 1), (0, 0)]), // |z1|^2
        (Harmonic::Re, [(0, 0), (1, 1)]), // |z2|^2
        (Harmonic::Re, [(1, 0), (0, 1)]), // Re z1 conj(z2)
        (Harmonic::Im, [(1, 0), (0, 1)]), // Im z1 conj(z2)
        (Harmonic::Re, [(2, 0), (0, 2)]), // Re z1^2 conj(z2)^2
        (Harmonic::Re, [(3, 0), (0, 0)]), // Re z1^3 — invariant mod 3 only
    ];
    let mut terms = Vec::new();
    for (h, powers) in &menu {
        if rng.gen_bool(0.6) {
            terms.push(Monomial {
                coeff: rng.gen_range(-0.08..0.08),
                harmonic: h.clone(),
                powers: powers.to_vec(),
            });
        }
    }
    FlowMap {
        ham: Hamiltonian { constant: rng.gen_range(0.7..1.2), terms },
        duration: rng.gen_range(0.08..0.3),
        dim: 4,
    }
}

/// The composed generating function's fibre-critical image lies on the
/// graph of the composed map, and restricting to the diagonal embedding
/// recovers the direct sum.
fn composition_graph() -> Check {
    let mut rng = sampling::rng(0xC0A7);
    let mut worst_graph = 0.0f64;
    let mut worst_embed = 0.0f64;
    for _ in 0..50 {
        let m1 = random_small_flow(&mut rng);
        let m2 = random_small_flow(&mut rng);
        let f1 = ConicalGF::primitive(m1.clone());
        let f2 = ConicalGF::primitive(m2.clone());
        let sharp = match f1.clone().sharp(f2.clone()) {
            Ok(s) => s,
            Err(e) => return Check::error(e),
        };
        let witnesses = sampling::sphere_points(4, 8, rng.gen());
        let pts = match sharp.fibre_critical(&witnesses) {
            Ok(p) => p,
            Err(e) => return Check::error(e),
        };
        for (z, fc) in witnesses.iter().zip(&pts) {
            let mid = flow(&m1.ham, m1.duration, z);
            let fz = flow(&m2.ham, m2.duration, &mid);
            let (q, p) = tau(z, &fz);
            worst_graph = worst_graph.max((&fc.image_q - q).norm());
            worst_graph = worst_graph.max((&fc.image_p - p).norm());
        }
        match quasiadd_embed(&f1, &f2, 20, rng.gen()) {
            Ok(r) => worst_embed = worst_embed.max(r),
            Err(e) => return Check::error(e),
        }
    }
    Check::new(
        worst_graph <= 1e-7 && worst_embed <= 1e-12,
        format!(
            "50 pairs: graph error {worst_graph:.2e} (tol 1e-7), \
             codimension residual {worst_embed:.2e} (tol 1e-12)"
        ),
    )
}

/// Expected Bockstein verdict in degree `d` of a (2m-1)-dimensional lens
/// model: nonzero exactly on the odd-to-even rungs below the top.
fn bockstein_expected(d: usize, dim: usize) -> &'static str {
    if d % 2 == 1 && d < dim {
        "nonzero"
    } else {
        "zero"
    }
}

/// Every H_j of the nine lens models is one line over Z_k, and the
/// Bockstein climbs exactly the odd rungs.
fn lens_homology_ladder() -> Check {
    let mut models = 0;
    for k in [2u32, 3, 5] {
        for m in 1..=3usize {
            let q = match lens_model(k, &vec![1; m]) {
                Ok(q) => q,
                Err(e) => return Check::error(e),
            };
            let dim = q.dim();
            let hom = homology(&q);
            if hom.betti.iter().any(|&b| b != 1) {
                return Check::new(
                    false,
                    format!("betti = {:?} on (k, M) = ({k}, {m})", hom.betti),
                );
            }
            for d in 0..=dim {
                let image = match bockstein(&q, &cohomology_generators(&q, d)[0]) {
                    Ok(b) => b,
                    Err(e) => return Check::error(e),
                };
                let got =
                    if cochain_class_is_zero(&q, &image) { "zero" } else { "nonzero" };
                if got != bockstein_expected(d, dim) {
                    return Check::new(
                        false,
                        format!("Bockstein {got} in degree {d} on (k, M) = ({k}, {m})"),
                    );
                }
            }
            models += 1;
        }
    }
    Check::new(true, format!("{models} models: betti all 1, Bockstein climbs odd rungs only"))
}

fn random_chain<R: Rng>(q: &QuotientComplex, degree: usize, rng: &mut R) -> ChainVector {
    let k = q.k();
    ChainVector { degree, coeffs: (0..q.size(degree)).map(|_| rng.gen_range(0..k)).collect() }
}

/// The chain-level join calculus: the vertex self-join bounds, generator
/// joins detect parity, the boundary rule is exact on random chains, and
/// the twist carries the block-swap sign.
fn join_calculus() -> Check {
    let circle_and_join = |k: u32| -> lens_maslov::Result<(QuotientComplex, QuotientComplex)> {
        let c = circle_complex(k, 1)?;
        let j = join_complex(&c, &c)?;
        Ok((QuotientComplex::new(c)?, QuotientComplex::new(j)?))
    };

    // x0 * x0 = 0 in H_1 for odd k.
    for k in [3u32, 5] {
        let (qc, qj) = match circle_and_join(k) {
            Ok(pair) => pair,
            Err(e) => return Check::error(e),
        };
        let mut x0 = ChainVector::zero(0, qc.size(0));
        x0.coeffs[0] = 1;
        let joined = match chain_join_equivariant(&qc, &qc, &qj, &x0, &x0) {
            Ok(j) => j,
            Err(e) => return Check::error(e),
        };
        if !cycle_class_is_zero(&qj, &joined) {
            return Check::new(false, format!("x0 * x0 is nonzero in H_1 for k = {k}"));
        }
    }

    // Generator joins vanish exactly when both degrees are even.
    let (qc, qj) = match circle_and_join(3) {
        Ok(pair) => pair,
        Err(e) => return Check::error(e),
    };
    let gens = homology(&qc).generators;
    for m in 0..=1usize {
        for mp in 0..=1usize {
            let joined =
                match chain_join_equivariant(&qc, &qc, &qj, &gens[m][0], &gens[mp][0]) {
                    Ok(j) => j,
                    Err(e) => return Check::error(e),
                };
            let vanishes = cycle_class_is_zero(&qj, &joined);
            if vanishes != (m % 2 == 0 && mp % 2 == 0) {
                return Check::new(
                    false,
                    format!(
                        "generator join of degrees ({m}, {mp}) {} in homology",
                        if vanishes { "vanishes" } else { "survives" }
                    ),
                );
            }
        }
    }

    // Boundary rule, exactly, on 200 random chains (100 pairs).
    let mut rng = sampling::rng(0x0DE1);
    for i in 0..100 {
        let x = random_chain(&qc, rng.gen_range(0..=1), &mut rng);
        let y = random_chain(&qc, rng.gen_range(0..=1), &mut rng);
        let joined = match chain_join_equivariant(&qc, &qc, &qj, &x, &y) {
            Ok(j) => j,
            Err(e) => return Check::error(e),
        };
        let lhs = qj.boundary_chain(&joined);
        let rhs = match lens_maslov::equivtop::boundary_rule_rhs(&qc, &qc, &qj, &x, &y) {
            Ok(r) => r,
            Err(e) => return Check::error(e),
        };
        if lhs.as_ref() != Some(&rhs) {
            return Check::new(false, format!("boundary rule broke on random pair {i}"));
        }
    }

    // Twist sign on the generator grid and on random chain pairs.
    let mut twists = 0;
    for m in 0..=1usize {
        for mp in 0..=1usize {
            match twist_check(&qc, &qc, &qj, &qj, &gens[m][0], &gens[mp][0]) {
                Ok(true) => twists += 1,
                Ok(false) => {
                    return Check::new(
                        false,
                        format!("twist sign failed on generators of degrees ({m}, {mp})"),
                    )
                }
                Err(e) => return Check::error(e),
            }
        }
    }
    for i in 0..20 {
        let x = random_chain(&qc, rng.gen_range(0..=1), &mut rng);
        let y = random_chain(&qc, rng.gen_range(0..=1), &mut rng);
        match twist_check(&qc, &qc, &qj, &qj, &x, &y) {
            Ok(true) => twists += 1,
            Ok(false) => {
                return Check::new(false, format!("twist sign failed on random pair {i}"))
            }
            Err(e) => return Check::error(e),
        }
    }

    Check::new(
        true,
        format!(
            "vertex self-joins bound (k = 3, 5); parity grid exact; \
             boundary rule 100/100 pairs; twist sign {twists}/{twists}"
        ),
    )
}

/// The five index laws hold on 200+ seeded random subcomplex pairs across
/// the 3- and 5-dimensional models.
fn index_property_suite() -> Check {
    let a = match property_suite(3, &[1, 1], 100, 0xACCE) {
        Ok(r) => r,
        Err(e) => return Check::error(e),
    };
    let b = match property_suite(3, &[1, 1, 1], 100, 0xACCF) {
        Ok(r) => r,
        Err(e) => return Check::error(e),
    };
    let pairs = a.samples + b.samples;
    let checks = a.checks + b.checks;
    let violations = a.violations.len() + b.violations.len();
    if violations > 0 {
        let first = a.violations.first().or_else(|| b.violations.first()).unwrap();
        return Check::new(
            false,
            format!(
                "{violations} violations over {pairs} pairs; first: {} @ pair {}: {}",
                first.property, first.sample, first.detail
            ),
        );
    }
    Check::new(
        pairs >= 200,
        format!("{pairs} subcomplex pairs, {checks} property checks, 0 violations"),
    )
}

/// Five perturbed Reeb contactomorphisms each carry at least 2n = 4
/// distinct nondegenerate translated points with tiny residuals.
fn translated_point_count() -> Check {
    let lens = match LensSpace::new(3, vec![1, 1]) {
        Ok(l) => l,
        Err(e) => return Check::error(e),
    };
    let mut min_found = usize::MAX;
    let mut worst_residual = 0.0f64;
    for (i, eps) in [0.02, 0.04, 0.06, 0.08, 0.1].into_iter().enumerate() {
        let map = FlowMap {
            ham: Hamiltonian::perturbed_reeb(eps),
            duration: TAU,
            dim: lens.ambient_dim(),
        };
        let opts = TranslatedPointOptions {
            grid_density: 24,
            eta_samples: 4,
            seed: 0x7A9 + i as u64,
            ..TranslatedPointOptions::default()
        };
        let outcome = translated_points(&map, &lens, &opts);
        if outcome.degenerate_family {
            return Check::new(false, format!("eps = {eps}: degenerate family reported"));
        }
        let good: Vec<_> =
            outcome.points.iter().filter(|p| p.nondegenerate && p.residual <= 1e-8).collect();
        for p in &good {
            worst_residual = worst_residual.max(p.residual);
        }
        min_found = min_found.min(good.len());
        if good.len() < 4 {
            return Check::new(
                false,
                format!("eps = {eps}: only {} certified translated points", good.len()),
            );
        }
    }
    Check::new(
        true,
        format!(
            "5 maps (eps 0.02..0.1): at least {min_found} nondegenerate translated points \
             each (need 4), residuals <= {worst_residual:.1e}"
        ),
    )
}

/// The Reeb discriminant times on the 3-sphere model over a full turn, and
/// the zero jump bound of a crossing-free stretch.
fn discriminant_times_check() -> Check {
    let lens = match LensSpace::new(3, vec![1, 1]) {
        Ok(l) => l,
        Err(e) => return Check::error(e),
    };
    let ham = Hamiltonian::reeb();
    let dt = discriminant_times(&ham, &lens, TAU, &DiscriminantOptions::default());
    if dt.continuum {
        return Check::new(false, "discriminant set reported as a continuum".into());
    }
    let expected = [TAU / 3.0, 2.0 * TAU / 3.0, TAU];
    if dt.times.len() != expected.len() {
        return Check::new(false, format!("found times {:?}", dt.times));
    }
    let deviation = dt
        .times
        .iter()
        .zip(&expected)
        .map(|(t, e)| (t - e).abs())
        .fold(0.0f64, f64::max);
    if deviation > 1e-8 {
        return Check::new(false, format!("times off by {deviation:.2e} (tol 1e-8)"));
    }

    let rep = match crossing_report(&ham, &lens, 2.0, &CrossingOptions::default()) {
        Ok(r) => r,
        Err(e) => return Check::error(e),
    };
    let clean = rep.jumps.is_empty()
        && rep.jump_bound_sum() == (0, 0)
        && rep.segments.len() == 1
        && rep.segments[0].0 <= 1e-9
        && rep.segments[0].1 >= 2.0 - 1e-9;
    Check::new(
        clean,
        format!(
            "three crossings at multiples of 2pi/3, off by {deviation:.1e}; \
             crossing-free stretch reports jump sum [0, 0]"
        ),
    )
}
