//! Translated points and discriminant times.
//!
//! A *discriminant point* of a contactomorphism `phi` of the lens space is a
//! point with `phi(p) = p` and vanishing conformal factor at `p`; a
//! *translated point* with time-shift `eta` is a discriminant point of
//! `r_{-eta} . phi`. On conical lifts both conditions collapse to the single
//! sphere equation
//!
//! ```text
//! Phi(p) = e^{i eta} zeta^m p,        |p| = 1,
//! ```
//!
//! for some deck power `m` (norm preservation encodes the conformal-factor
//! condition). When all weights agree mod `k` the deck rotations are global
//! phases, so only `m = 0` is solved and `eta` runs over a full period.
//!
//! Solutions are found by a damped Newton iteration on `(p, eta)` from a
//! seeded grid, then deduplicated modulo the `Z_k x U(1)` phase orbit. When
//! the map commutes with the simultaneous rotation `e^{i theta}` (every
//! built-in Hamiltonian here does), solutions come in `U(1)`-circles; a
//! solution is reported *nondegenerate* when the linearized system has full
//! rank transverse to that symmetry direction.

use nalgebra::{DMatrix, DVector};

use crate::lens::{mul_i, rotation, LensSpace};
use crate::sampling;

use super::flow::{flow, flow_checkpoints, ConicalMap};
use super::ham::Hamiltonian;

#[derive(Debug, Clone)]
pub struct TranslatedPoint {
    /// Unit-sphere representative.
    pub p: DVector<f64>,
    /// Time-shift, reported as the smallest non-negative representative
    /// (mod 2 pi).
    pub eta: f64,
    /// Deck power `m` in the solved branch (0 unless the weights differ mod k).
    pub deck_power: i64,
    pub nondegenerate: bool,
    /// `|Phi(p) - e^{i eta} zeta^m p|`, including the norm defect.
    pub residual: f64,
    /// Smallest singular value of the linearization transverse to the
    /// solution's symmetry directions, relative to its largest.
    pub transverse_sigma: f64,
}

#[derive(Debug, Clone)]
pub struct TranslatedPointsOutcome {
    /// Set when the solutions form a continuum (identity, exact rotations):
    /// the `points` then hold a single representative rather than a census.
    pub degenerate_family: bool,
    pub points: Vec<TranslatedPoint>,
}

#[derive(Debug, Clone)]
pub struct TranslatedPointOptions {
    /// Number of sphere seeds.
    pub grid_density: usize,
    /// Number of eta starts per seed.
    pub eta_samples: usize,
    pub eta_range: (f64, f64),
    pub seed: u64,
    pub max_iter: usize,
    /// Largest residual accepted as a solution.
    pub accept_tol: f64,
    /// Quotient-metric tolerance for deduplication.
    pub dedup_tol: f64,
    /// Relative singular-value threshold for nondegeneracy.
    pub nondegenerate_tol: f64,
    /// Flag a degenerate family when more than this fraction of the sphere
    /// seeds produce pairwise-distinct solution classes (a continuum's
    /// signature: every seed converges to its own nearby solution).
    pub degenerate_fraction: f64,
}

impl Default for TranslatedPointOptions {
    fn default() -> Self {
        TranslatedPointOptions {
            grid_density: 48,
            eta_samples: 6,
            eta_range: (0.0, std::f64::consts::TAU),
            seed: 0x7a9,
            max_iter: 60,
            accept_tol: 1e-9,
            dedup_tol: 1e-6,
            nondegenerate_tol: 1e-6,
            degenerate_fraction: 0.5,
        }
    }
}

fn complex_pair_sum(q: &DVector<f64>, p: &DVector<f64>) -> (f64, f64) {
    // sum_j conj(q_j) p_j over the complex coordinates
    let mut re = 0.0;
    let mut im = 0.0;
    for j in 0..q.len() / 2 {
        let (a, b) = (q[2 * j], q[2 * j + 1]);
        let (c, d) = (p[2 * j], p[2 * j + 1]);
        re += a * c + b * d;
        im += a * d - b * c;
    }
    (re, im)
}

/// Distance from `p2` to the `U(1)`-orbit `{e^{i theta} p1}` of unit vectors.
fn circle_orbit_distance(p1: &DVector<f64>, p2: &DVector<f64>) -> f64 {
    let (re, im) = complex_pair_sum(p1, p2);
    let overlap = (re * re + im * im).sqrt();
    (2.0 - 2.0 * overlap).max(0.0).sqrt()
}

fn angular_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(std::f64::consts::TAU);
    d.min(std::f64::consts::TAU - d)
}

struct NewtonResult {
    p: DVector<f64>,
    eta: f64,
    residual: f64,
}

/// Residual of the translated-point system, `2n + 1` components.
fn residual(
    map: &dyn ConicalMap,
    lens: &LensSpace,
    m: i64,
    p: &DVector<f64>,
    eta: f64,
) -> DVector<f64> {
    let dim = map.dim();
    let target = rotation(dim / 2, eta) * lens.act(m, p);
    let mut r = map.eval(p) - target;
    let norm_row = (p.norm_squared() - 1.0) / 2.0;
    r = r.insert_row(dim, norm_row);
    r
}

fn newton_solve(
    map: &dyn ConicalMap,
    lens: &LensSpace,
    m: i64,
    p0: &DVector<f64>,
    eta0: f64,
    opts: &TranslatedPointOptions,
) -> Option<NewtonResult> {
    let dim = map.dim();
    let mut p = p0.clone();
    let mut eta = eta0;
    for _ in 0..opts.max_iter {
        let r = residual(map, lens, m, &p, eta);
        let rn = r.norm();
        if rn < 1e-12 {
            break;
        }
        let jac = system_jacobian(map, lens, m, &p, eta);
        let svd = jac.svd(true, true);
        let mut step = svd.solve(&(-r), 1e-10).ok()?;
        let sn = step.norm();
        if sn > 0.5 {
            step *= 0.5 / sn;
        }
        p += step.rows(0, dim).clone_owned();
        eta += step[dim];
        if sn < 1e-14 {
            break;
        }
    }
    let rn = residual(map, lens, m, &p, eta).norm();
    if rn <= opts.accept_tol && p.norm() > 0.5 {
        Some(NewtonResult { p, eta: eta.rem_euclid(std::f64::consts::TAU), residual: rn })
    } else {
        None
    }
}

/// Full `(2n+1) x (2n+1)` Jacobian of the system at `(p, eta)`. The `D Phi`
/// block comes from the map's own (finite-difference or exact) Jacobian; the
/// rotation derivative is analytic.
fn system_jacobian(
    map: &dyn ConicalMap,
    lens: &LensSpace,
    m: i64,
    p: &DVector<f64>,
    eta: f64,
) -> DMatrix<f64> {
    let dim = map.dim();
    let rot = rotation(dim / 2, eta) * lens.deck(m);
    let dphi = map.jacobian(p);
    let mut jac = DMatrix::zeros(dim + 1, dim + 1);
    jac.view_mut((0, 0), (dim, dim)).copy_from(&(&dphi - &rot));
    let deta = -mul_i(&(&rot * p));
    for i in 0..dim {
        jac[(i, dim)] = deta[i];
    }
    for j in 0..dim {
        jac[(dim, j)] = p[j];
    }
    jac
}

/// Does the map commute with the simultaneous rotation `e^{i theta}`?
/// (Decided by sampling; governs which symmetry direction is quotiented out
/// of the nondegeneracy test and the dedup metric.)
fn commutes_with_global_phase(map: &dyn ConicalMap, probe: &DVector<f64>) -> bool {
    let theta = 0.7;
    let n = map.dim() / 2;
    let a = map.eval(&(rotation(n, theta) * probe));
    let b = rotation(n, theta) * map.eval(probe);
    (a - &b).norm() < 1e-7 * (1.0 + b.norm())
}

/// Orthonormal basis of the hyperplane orthogonal to `u` (Householder
/// reflection columns).
fn orthogonal_complement(u: &DVector<f64>) -> DMatrix<f64> {
    let n = u.len();
    let mut v = u / u.norm();
    let sign = if v[0] >= 0.0 { 1.0 } else { -1.0 };
    v[0] += sign;
    let h = DMatrix::identity(n, n) - &v * v.transpose() * (2.0 / v.norm_squared());
    h.columns(1, n - 1).clone_owned()
}

fn classify_nondegeneracy(
    map: &dyn ConicalMap,
    lens: &LensSpace,
    m: i64,
    p: &DVector<f64>,
    eta: f64,
    u1_symmetric: bool,
    tol: f64,
) -> (bool, f64) {
    let dim = map.dim();
    let jac = system_jacobian(map, lens, m, p, eta);
    let sv = jac.clone().svd(false, false).singular_values;
    let sigma_max = sv.iter().fold(0.0f64, |a, &b| a.max(b)).max(1e-300);
    let restricted = if u1_symmetric {
        let mut dir = mul_i(p);
        dir = dir.insert_row(dim, 0.0);
        let basis = orthogonal_complement(&dir);
        &jac * basis
    } else {
        jac
    };
    let rsv = restricted.svd(false, false).singular_values;
    let sigma_min = rsv.iter().fold(f64::INFINITY, |a, &b| a.min(b));
    let rel = sigma_min / sigma_max;
    (rel > tol, rel)
}

/// Find translated points of the conical lift `map` on the lens space.
///
/// Solves `Phi(p) = e^{i eta} zeta^m p, |p| = 1` by Newton iteration from a
/// `grid_density x eta_samples` seed set, deduplicates modulo the
/// `Z_k x U(1)` phase orbit (spatial tolerance `dedup_tol`), and classifies
/// each surviving solution's transverse nondegeneracy. Continua of solutions
/// (identity, exact rotations) are reported with the `degenerate_family`
/// flag and a single representative.
pub fn translated_points(
    map: &dyn ConicalMap,
    lens: &LensSpace,
    opts: &TranslatedPointOptions,
) -> TranslatedPointsOutcome {
    let dim = map.dim();
    assert_eq!(dim, lens.ambient_dim(), "map and lens space dimensions differ");
    let seeds = sampling::sphere_points(dim, opts.grid_density, opts.seed);
    let u1_symmetric = commutes_with_global_phase(map, &seeds[0]);
    let deck_branches: Vec<i64> = if lens.weights_equal_mod_k() {
        vec![0]
    } else {
        (0..lens.k() as i64).collect()
    };
    let (eta_lo, eta_hi) = opts.eta_range;
    let span = eta_hi - eta_lo;

    let mut found: Vec<TranslatedPoint> = Vec::new();
    for &m in &deck_branches {
        for p0 in &seeds {
            for i in 0..opts.eta_samples {
                let eta0 = eta_lo + span * (i as f64 + 0.5) / opts.eta_samples as f64;
                let Some(sol) = newton_solve(map, lens, m, p0, eta0, opts) else {
                    continue;
                };
                let duplicate = found.iter().any(|tp| {
                    if angular_distance(tp.eta, sol.eta) > 1e-5 {
                        return false;
                    }
                    (0..lens.k() as i64).any(|mm| {
                        let q = lens.act(mm, &tp.p);
                        let d = if u1_symmetric {
                            circle_orbit_distance(&q, &sol.p)
                        } else {
                            (&q - &sol.p).norm()
                        };
                        d < opts.dedup_tol.max(1e-7)
                    })
                });
                if duplicate {
                    continue;
                }
                let (nondeg, rel) = classify_nondegeneracy(
                    map,
                    lens,
                    m,
                    &sol.p,
                    sol.eta,
                    u1_symmetric,
                    opts.nondegenerate_tol,
                );
                found.push(TranslatedPoint {
                    p: sol.p,
                    eta: sol.eta,
                    deck_power: m,
                    nondegenerate: nondeg,
                    residual: sol.residual,
                    transverse_sigma: rel,
                });
            }
        }
    }
    found.sort_by(|a, b| {
        a.eta
            .partial_cmp(&b.eta)
            .unwrap()
            .then(a.p.iter().partial_cmp(b.p.iter()).unwrap())
    });
    let class_cap = ((opts.grid_density as f64 * opts.degenerate_fraction) as usize).max(2);
    let degenerate_family = found.len() > class_cap;
    if degenerate_family {
        found.truncate(1);
    }
    TranslatedPointsOutcome { degenerate_family, points: found }
}

#[derive(Debug, Clone)]
pub struct DiscriminantTimes {
    /// Set when the whole interval is discriminant (e.g. the zero
    /// Hamiltonian); `times` then holds only `0.0`.
    pub continuum: bool,
    pub times: Vec<f64>,
    /// One witness point per reported time.
    pub witnesses: Vec<DVector<f64>>,
}

#[derive(Debug, Clone)]
pub struct DiscriminantOptions {
    /// Scan grid size over `[0, t_max]`.
    pub grid: usize,
    /// Number of seed trajectories.
    pub seeds: usize,
    pub seed: u64,
    /// A grid local minimum below this triggers refinement.
    pub coarse_threshold: f64,
    /// Width to which the bracket is narrowed.
    pub refine_tol: f64,
    /// Largest refined distance accepted as an actual discriminant time.
    pub accept_tol: f64,
}

impl Default for DiscriminantOptions {
    fn default() -> Self {
        DiscriminantOptions {
            grid: 2048,
            seeds: 96,
            seed: 0xd15c,
            coarse_threshold: 0.05,
            refine_tol: 1e-9,
            accept_tol: 1e-7,
        }
    }
}

/// `min_m |Phi_t(p) - zeta^m p|` for a single seed.
fn deck_distance(lens: &LensSpace, state: &DVector<f64>, p: &DVector<f64>) -> f64 {
    (0..lens.k() as i64)
        .map(|m| (state - lens.act(m, p)).norm())
        .fold(f64::INFINITY, f64::min)
}

/// Joint Newton solve for `Phi_t(p) = zeta^m p`, `|p| = 1` in the unknowns
/// `(p, t)`, tried deck branch by deck branch (closest first). This is how a
/// measure-zero witness set — circles a passive seed never hits — is still
/// pinned down: the seed only has to sit in the Newton basin. Solutions with
/// `t` in the first grid cell are discarded, since the identity at `t = 0`
/// solves the `m = 0` branch for every `p`.
fn polish_crossing(
    ham: &Hamiltonian,
    lens: &LensSpace,
    seed: &DVector<f64>,
    t0: f64,
    t_max: f64,
    opts: &DiscriminantOptions,
) -> Option<(f64, DVector<f64>)> {
    let dim = seed.len();
    let residual = |m: i64, p: &DVector<f64>, t: f64| -> DVector<f64> {
        let img = flow(ham, t, p);
        let target = lens.act(m, p);
        let mut r = DVector::zeros(dim + 1);
        for i in 0..dim {
            r[i] = img[i] - target[i];
        }
        r[dim] = p.norm_squared() - 1.0;
        r
    };
    let img0 = flow(ham, t0, seed);
    let mut branches: Vec<i64> = (0..lens.k() as i64).collect();
    branches.sort_by(|&a, &b| {
        let da = (&img0 - lens.act(a, seed)).norm();
        let db = (&img0 - lens.act(b, seed)).norm();
        da.partial_cmp(&db).unwrap()
    });
    let converge_tol = opts.accept_tol.min(1e-9);
    let fd = 1e-6;
    for m in branches {
        let mut p = seed.clone();
        let mut t = t0;
        for _ in 0..60 {
            let r = residual(m, &p, t);
            if r.norm() < converge_tol {
                let lower = t_max / opts.grid as f64;
                if t > lower && t <= t_max * (1.0 + 1e-9) {
                    return Some((t.min(t_max), p));
                }
                break;
            }
            let mut jac = DMatrix::zeros(dim + 1, dim + 1);
            for c in 0..dim {
                let mut pp = p.clone();
                pp[c] += fd;
                let rp = residual(m, &pp, t);
                for i in 0..=dim {
                    jac[(i, c)] = (rp[i] - r[i]) / fd;
                }
            }
            let rt = residual(m, &p, t + fd);
            for i in 0..=dim {
                jac[(i, dim)] = (rt[i] - r[i]) / fd;
            }
            let step = match jac.svd(true, true).solve(&r, 1e-10) {
                Ok(s) => s,
                Err(_) => break,
            };
            for c in 0..dim {
                p[c] -= step[c];
            }
            t -= step[dim];
            if !t.is_finite() || !(-0.1 * t_max..=1.5 * t_max).contains(&t) {
                break;
            }
        }
    }
    None
}

/// Find the times `t` in `[0, t_max]` at which the flow of `ham` has a
/// discriminant point, i.e. `Phi_t(p) = zeta^m p` for some point `p` and deck
/// power `m`.
///
/// Strategy: integrate a seed set once, recording states on a uniform grid;
/// interior local minima of the seed-wise deck distance below
/// `coarse_threshold` bracket candidate times, which are then refined by
/// golden-section search on the best witness's distance function and accepted
/// below `accept_tol`. A valley that bottoms out above `accept_tol` is not
/// discarded outright: its witness set may simply be too thin for passive
/// seeds to hit, so the bracket is handed to a joint Newton solve in `(p, t)`
/// ([`polish_crossing`]) before giving up. The left endpoint `t = 0` (where
/// the flow is the identity) is excluded unless the distance stays flat at
/// zero, in which case the whole interval is discriminant and the
/// `continuum` flag is set.
pub fn discriminant_times(
    ham: &Hamiltonian,
    lens: &LensSpace,
    t_max: f64,
    opts: &DiscriminantOptions,
) -> DiscriminantTimes {
    assert!(t_max > 0.0);
    let dim = lens.ambient_dim();
    let seeds = sampling::sphere_points(dim, opts.seeds, opts.seed);
    let times: Vec<f64> = (0..=opts.grid)
        .map(|j| t_max * j as f64 / opts.grid as f64)
        .collect();

    // coarse sweep: one integration per seed
    let mut dist = vec![vec![f64::INFINITY; times.len()]; seeds.len()];
    let mut dhat = vec![f64::INFINITY; times.len()];
    let mut best_seed = vec![0usize; times.len()];
    for (si, p) in seeds.iter().enumerate() {
        let states = flow_checkpoints(ham, &times, p);
        for (j, st) in states.iter().enumerate() {
            let d = deck_distance(lens, st, p);
            dist[si][j] = d;
            if d < dhat[j] {
                dhat[j] = d;
                best_seed[j] = si;
            }
        }
    }

    let flat = dhat.iter().filter(|&&d| d < 10.0 * opts.accept_tol).count();
    if flat as f64 > 0.9 * dhat.len() as f64 {
        return DiscriminantTimes {
            continuum: true,
            times: vec![0.0],
            witnesses: vec![seeds[0].clone()],
        };
    }

    // candidate brackets around interior local minima (plus the right edge)
    let mut candidates: Vec<(f64, f64, usize)> = Vec::new();
    for j in 1..times.len() - 1 {
        if dhat[j] < opts.coarse_threshold && dhat[j] <= dhat[j - 1] && dhat[j] <= dhat[j + 1] {
            candidates.push((times[j - 1], times[j + 1], j));
        }
    }
    let last = times.len() - 1;
    if dhat[last] < opts.coarse_threshold && dhat[last] <= dhat[last - 1] {
        candidates.push((times[last - 1], times[last], last));
    }

    let mut out_times: Vec<f64> = Vec::new();
    let mut out_witnesses: Vec<DVector<f64>> = Vec::new();
    for (mut lo, mut hi, jc) in candidates {
        let si = best_seed[jc];
        let p = &seeds[si];
        let f = |t: f64| deck_distance(lens, &flow(ham, t, p), p);
        // golden-section narrowing of the (locally unimodal) distance valley
        let phi = (5.0f64.sqrt() - 1.0) / 2.0;
        let (mut a, mut b) = (hi - phi * (hi - lo), lo + phi * (hi - lo));
        let (mut fa, mut fb) = (f(a), f(b));
        while hi - lo > opts.refine_tol {
            if fa <= fb {
                hi = b;
                b = a;
                fb = fa;
                a = hi - phi * (hi - lo);
                fa = f(a);
            } else {
                lo = a;
                a = b;
                fa = fb;
                b = lo + phi * (hi - lo);
                fb = f(b);
            }
        }
        // the valley may bottom out exactly at the scan boundary
        let mut t_star = 0.5 * (lo + hi);
        let mut f_star = f(t_star);
        for boundary in [times[last]] {
            if (boundary - t_star).abs() < 10.0 * opts.refine_tol {
                let fb = f(boundary);
                if fb < f_star {
                    t_star = boundary;
                    f_star = fb;
                }
            }
        }
        if f_star <= opts.accept_tol && t_star > opts.refine_tol {
            if out_times.iter().all(|t| (t - t_star).abs() > 1e-7) {
                out_times.push(t_star);
                out_witnesses.push(p.clone());
            }
        } else if f_star < opts.coarse_threshold {
            // The valley floor stays strictly positive at every sampled
            // trajectory: the witness set has measure zero (isolated circles
            // rather than the whole fibre), so no passive seed hits it. Chase
            // the crossing with a joint Newton solve in (p, t), seeded from
            // the closest few trajectories at this bracket.
            let mut ranked: Vec<usize> = (0..seeds.len()).collect();
            ranked.sort_by(|&a, &b| dist[a][jc].partial_cmp(&dist[b][jc]).unwrap());
            for &si in ranked.iter().take(3) {
                if let Some((t, w)) = polish_crossing(ham, lens, &seeds[si], t_star, t_max, opts) {
                    if out_times.iter().all(|prev| (prev - t).abs() > 1e-7) {
                        out_times.push(t);
                        out_witnesses.push(w);
                    }
                    break;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..out_times.len()).collect();
    order.sort_by(|&i, &j| out_times[i].partial_cmp(&out_times[j]).unwrap());
    DiscriminantTimes {
        continuum: false,
        times: order.iter().map(|&i| out_times[i]).collect(),
        witnesses: order.iter().map(|&i| out_witnesses[i].clone()).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contact::flow::{FlowMap, LinearMap};
    use approx::assert_relative_eq;

    fn small_opts() -> TranslatedPointOptions {
        TranslatedPointOptions {
            grid_density: 14,
            eta_samples: 4,
            ..TranslatedPointOptions::default()
        }
    }

    #[test]
    fn identity_is_a_degenerate_family_at_eta_zero() {
        let lens = LensSpace::new(3, vec![1, 1]).unwrap();
        let map = LinearMap(DMatrix::identity(4, 4));
        let out = translated_points(&map, &lens, &small_opts());
        assert!(out.degenerate_family);
        assert_eq!(out.points.len(), 1);
        assert!(out.points[0].eta < 1e-8 || out.points[0].eta > std::f64::consts::TAU - 1e-8);
    }

    #[test]
    fn exact_rotation_is_a_degenerate_family_at_eta_s() {
        let lens = LensSpace::new(3, vec![1, 1]).unwrap();
        let s = 0.9;
        let map = LinearMap(rotation(2, s));
        let out = translated_points(&map, &lens, &small_opts());
        assert!(out.degenerate_family);
        assert_relative_eq!(out.points[0].eta, s, epsilon = 1e-7);
    }

    #[test]
    fn perturbed_reeb_has_the_predicted_translated_circles() {
        // For h = 1 + eps Re(z1^2 conj(z2)^2), the flow splits as e^{iT}
        // composed with the perturbation flow; translated circles sit at the
        // coordinate circles (eta = T mod 2pi) and on the Clifford torus at
        // the four critical phases (eta = T +- eps T / 4 mod 2pi).
        let eps = 0.1;
        let t = std::f64::consts::TAU;
        let lens = LensSpace::new(3, vec![1, 1]).unwrap();
        let map = FlowMap { ham: Hamiltonian::perturbed_reeb(eps), duration: t, dim: 4 };
        let opts = TranslatedPointOptions {
            grid_density: 40,
            eta_samples: 5,
            ..TranslatedPointOptions::default()
        };
        let out = translated_points(&map, &lens, &opts);
        assert!(!out.degenerate_family);
        let nondeg: Vec<_> = out.points.iter().filter(|p| p.nondegenerate).collect();
        assert!(
            nondeg.len() >= 4,
            "expected at least 2n = 4 nondegenerate translated points, got {}",
            nondeg.len()
        );
        for p in &out.points {
            assert!(p.residual <= 1e-9);
        }
        // the predicted shifts: 0 (coordinate circles) and -+ eps*T/4
        let shift = eps * t / 4.0;
        let expected = [0.0, shift, std::f64::consts::TAU - shift];
        for p in &out.points {
            assert!(
                expected.iter().any(|e| angular_distance(p.eta, *e) < 1e-6),
                "unexpected eta {}",
                p.eta
            );
        }
    }

    #[test]
    fn composing_with_a_reeb_rotation_shifts_eta() {
        // a translated point of Phi with shift eta is one of r_s . Phi with
        // shift eta + s, and conversely; verified pointwise on the solved set
        let lens = LensSpace::new(3, vec![1, 1]).unwrap();
        let eps = 0.1;
        let t = std::f64::consts::TAU;
        let base = FlowMap { ham: Hamiltonian::perturbed_reeb(eps), duration: t, dim: 4 };
        let s = 0.37;
        let shifted = crate::contact::flow::Composed(base.clone(), LinearMap(rotation(2, s)));
        let opts = TranslatedPointOptions {
            grid_density: 24,
            eta_samples: 5,
            ..TranslatedPointOptions::default()
        };
        let a = translated_points(&base, &lens, &opts);
        assert!(a.points.len() >= 4);
        for pa in &a.points {
            let r = residual(&shifted, &lens, 0, &pa.p, pa.eta + s);
            assert!(r.norm() < 1e-8, "shifted residual {} at eta {}", r.norm(), pa.eta);
        }
        let b = translated_points(&shifted, &lens, &opts);
        assert!(!b.degenerate_family);
        for pb in &b.points {
            let r = residual(&base, &lens, 0, &pb.p, pb.eta - s);
            assert!(r.norm() < 1e-8, "unshifted residual {} at eta {}", r.norm(), pb.eta);
        }
    }

    #[test]
    fn reeb_discriminant_times_on_l3() {
        let lens = LensSpace::new(3, vec![1, 1]).unwrap();
        let tau = std::f64::consts::TAU;
        let out = discriminant_times(&Hamiltonian::reeb(), &lens, tau, &DiscriminantOptions::default());
        assert!(!out.continuum);
        assert_eq!(out.times.len(), 3);
        for (got, want) in out.times.iter().zip([tau / 3.0, 2.0 * tau / 3.0, tau]) {
            assert!((got - want).abs() < 1e-8, "got {got}, want {want}");
        }
    }

    #[test]
    fn reeb_discriminant_times_on_l2() {
        let lens = LensSpace::new(2, vec![1, 1]).unwrap();
        let tau = std::f64::consts::TAU;
        let out = discriminant_times(&Hamiltonian::reeb(), &lens, tau, &DiscriminantOptions::default());
        assert_eq!(out.times.len(), 2);
        for (got, want) in out.times.iter().zip([tau / 2.0, tau]) {
            assert!((got - want).abs() < 1e-8, "got {got}, want {want}");
        }
    }

    #[test]
    fn zero_hamiltonian_is_a_continuum() {
        let lens = LensSpace::new(3, vec![1, 1]).unwrap();
        let zero = Hamiltonian { constant: 0.0, terms: vec![] };
        let out = discriminant_times(&zero, &lens, 1.0, &DiscriminantOptions {
            grid: 128,
            seeds: 8,
            ..DiscriminantOptions::default()
        });
        assert!(out.continuum);
        assert_eq!(out.times, vec![0.0]);
    }
}
