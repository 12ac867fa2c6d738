//! The non-linear Maslov index in its computable regimes.
//!
//! For a path of contactomorphisms generated by quadratic data the index is
//! exact: freeze the path into graphical pieces, turn each piece into a
//! quadratic primitive, chain them with [`sharp_quad`], and read off
//!
//! ```text
//! mu = i(Q_0) - i(Q_1)
//! ```
//!
//! where `i` counts non-positive eigenvalues ([`QuadForm::index_i`]). On
//! loops in `Sp(2n; R)` this recovers the linear Maslov class (value 2 on the
//! standard circle, additive under pointwise products); on the Reeb rotation
//! it evaluates to `2nl` per `l` full turns. For general Hamiltonian
//! isotopies the exact index is out of reach, but its jumps are confined to
//! discriminant times, so [`crossing_report`] segments `[0, T]` with
//! [`discriminant_times`], certifies a sign from the Hamiltonian where it
//! can, and emits interval bounds per crossing instead of a number.

use std::f64::consts::TAU;
use std::sync::Arc;

use nalgebra::DMatrix;

use crate::contact::{
    discriminant_times, flow, translated_points, DiscriminantOptions, FlowMap, Hamiltonian,
    TranslatedPointOptions,
};
use crate::lens::{i_matrix, rotation, LensSpace};
use crate::quadform::{quad_primitive_of_linear, sharp_quad, QuadForm, KERNEL_BAND};
use crate::sampling;
use crate::{Error, Result};

/// A path `[0, 1] -> Sp(2n; R)`, sampled on demand.
pub type SpPath = Arc<dyn Fn(f64) -> DMatrix<f64> + Send + Sync>;

/// A family `t in [0, 1] |-> Q_t` of quadratic forms with shared dimensions.
///
/// The family is stored as a closure rather than a sample table so that jump
/// location can refine `t` freely; `samples` is the default grid used to
/// bracket jumps, and `provenance` records which construction (constant,
/// frozen path decomposition, Reeb rotation) produced the closure.
#[derive(Clone)]
pub struct QuadraticFamily {
    eval: Arc<dyn Fn(f64) -> Result<QuadForm> + Send + Sync>,
    pub samples: usize,
    pub provenance: String,
}

impl std::fmt::Debug for QuadraticFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "QuadraticFamily({}, {} samples)", self.provenance, self.samples)
    }
}

impl QuadraticFamily {
    pub fn new(
        eval: impl Fn(f64) -> Result<QuadForm> + Send + Sync + 'static,
        samples: usize,
        provenance: impl Into<String>,
    ) -> Self {
        QuadraticFamily { eval: Arc::new(eval), samples, provenance: provenance.into() }
    }

    /// The family that sits at `q` for every `t`.
    pub fn constant(q: QuadForm) -> Self {
        QuadraticFamily::new(move |_| Ok(q.clone()), 33, "constant")
    }

    /// Evaluate the family at `t in [0, 1]`.
    pub fn at(&self, t: f64) -> Result<QuadForm> {
        assert!((0.0..=1.0).contains(&t), "family parameter {t} outside [0, 1]");
        (self.eval)(t)
    }

    /// Freeze a symplectic path into `pieces` graphical transitions and chain
    /// their quadratic primitives.
    ///
    /// The path is first normalized to start at the identity. Piece `j`
    /// contributes the transition
    ///
    /// ```text
    /// T_j(s) = g(min(s, s_{j+1})) g(min(s, s_j))^{-1},
    /// ```
    ///
    /// which equals the identity until `s` enters the piece and freezes once
    /// `s` leaves it, so the chained tower interpolates from the all-zero
    /// tower at `s = 0` to the full decomposition at `s = 1` while every
    /// factor stays graphical. With `pieces = None` the piece count starts at
    /// 4 and doubles (up to 512) until each transition admits a quadratic
    /// primitive along the whole family.
    pub fn from_sp_path(path: SpPath, pieces: Option<usize>) -> Result<QuadraticFamily> {
        let g0 = path(0.0);
        let dim = g0.nrows();
        if g0.ncols() != dim || dim == 0 || dim % 2 != 0 {
            return Err(Error::DimensionMismatch(format!(
                "symplectic path must produce square even-dimensional matrices, got {}x{}",
                g0.nrows(),
                g0.ncols()
            )));
        }
        let g0_inv = g0
            .try_inverse()
            .ok_or_else(|| Error::Numerical("path start is a singular matrix".into()))?;

        let transition = {
            let path = path.clone();
            move |a: f64, b: f64| -> Result<DMatrix<f64>> {
                let lo = path(a) * &g0_inv;
                let hi = path(b) * &g0_inv;
                let lo_inv = lo.try_inverse().ok_or_else(|| {
                    Error::Numerical(format!("path value at {a} is a singular matrix"))
                })?;
                Ok(hi * lo_inv)
            }
        };

        let candidates: Vec<usize> = match pieces {
            Some(p) => {
                assert!(p >= 1, "piece count must be at least 1");
                vec![p]
            }
            None => (2..=9).map(|e| 1usize << e).collect(),
        };
        let forced = pieces.is_some();

        let mut chosen = None;
        'grid: for &npieces in &candidates {
            // Certify each transition where it varies: nine fractions across
            // its own piece. Only graphicality can fail here; anything else
            // (e.g. a non-symplectic input) is a hard error.
            for j in 0..npieces {
                let a = j as f64 / npieces as f64;
                let b = (j + 1) as f64 / npieces as f64;
                for f in 0..=8 {
                    let s = a + (b - a) * f as f64 / 8.0;
                    let t = transition(s.min(a), s.min(b))?;
                    match quad_primitive_of_linear(&t) {
                        Ok(_) => {}
                        Err(Error::NotGraphical { .. }) if !forced => continue 'grid,
                        Err(e) => return Err(e),
                    }
                }
            }
            chosen = Some(npieces);
            break;
        }
        let npieces = chosen.ok_or(Error::DecompositionTooLong(*candidates.last().unwrap()))?;

        let eval = move |s: f64| -> Result<QuadForm> {
            let mut tower: Option<QuadForm> = None;
            for j in 0..npieces {
                let a = j as f64 / npieces as f64;
                let b = (j + 1) as f64 / npieces as f64;
                let piece = quad_primitive_of_linear(&transition(s.min(a), s.min(b))?)?;
                tower = Some(match tower {
                    None => piece,
                    Some(t) => sharp_quad(&t, &piece)?,
                });
            }
            Ok(tower.expect("at least one piece"))
        };
        let fam = QuadraticFamily::new(
            eval,
            33,
            format!("sp-path in {npieces} frozen pieces"),
        );
        // The all-identity tower at s = 0 is maximally degenerate: its index
        // is half the kernel-padded spectrum, dim * npieces.
        debug_assert_eq!(fam.at(0.0)?.index_i(), dim * npieces);
        Ok(fam)
    }
}

#[derive(Debug, Clone)]
pub struct MuOptions {
    /// Grid size used to bracket index jumps.
    pub samples: usize,
    /// When false, only the endpoint indices (hence `mu`) are computed.
    pub locate_jumps: bool,
    /// Width to which a jump's `t` is narrowed by bisection.
    pub bisect_tol: f64,
}

impl Default for MuOptions {
    fn default() -> Self {
        MuOptions { samples: 33, locate_jumps: true, bisect_tol: 1e-10 }
    }
}

/// One localized index event.
///
/// For quadratic families `delta` is the exact contribution
/// `i(before) - i(after)` and `bound` collapses to it. For crossing analysis
/// of a general isotopy `delta` is unknown and `bound` comes from the
/// witness census at the crossing: `[-1, 1]` when every witness class is
/// nondegenerate, `[-2, 2]` when the classes are finite, `[-(2n+1), 2n+1]`
/// otherwise — one-sided when the Hamiltonian's sign is certified.
#[derive(Debug, Clone)]
pub struct JumpReport {
    pub t: f64,
    pub delta: Option<i64>,
    pub bound: (i64, i64),
    /// Deduplicated witness classes at the crossing (quadratic route: kernel
    /// dimension at the located jump). `None` when the witnesses form a
    /// continuum.
    pub witnesses: Option<usize>,
    pub finite: Option<bool>,
    pub all_nondegenerate: Option<bool>,
}

/// The outcome of an index computation, exact or bounded.
///
/// Exactly one of two shapes occurs: the quadratic route fills `mu`,
/// `ind_start`, `ind_end` (with `mu = ind_start - ind_end`) and exact jumps;
/// the crossing route fills `initial` (the short-time value, pinned down by
/// the sign of the Hamiltonian), per-crossing bounded jumps, and `bounds =
/// initial + sum of jump bounds`. On the crossing-free stretches listed in
/// `segments` the index is constant. `degenerate` flags a discriminant set
/// that fills the whole time interval, where segmentation — and hence any
/// bound beyond an identity flow's — is unavailable.
#[derive(Debug, Clone)]
pub struct MaslovReport {
    pub mu: Option<i64>,
    pub ind_start: Option<usize>,
    pub ind_end: Option<usize>,
    /// Bounds on the value accumulated before the first crossing. A short
    /// piece of the isotopy admits fibreless quadratic data, which confines
    /// the index to `[0, 2n]`; a certified positive Hamiltonian pins it to
    /// exactly `2n`, a certified non-positive one to `0`.
    pub initial: Option<(i64, i64)>,
    pub jumps: Vec<JumpReport>,
    /// Open intervals of `t` free of index events.
    pub segments: Vec<(f64, f64)>,
    pub bounds: Option<(i64, i64)>,
    pub degenerate: bool,
}

impl MaslovReport {
    /// Sum of the per-jump bounds: the change relative to the short-time
    /// value. Crossing-free isotopies get exactly `(0, 0)`.
    pub fn jump_bound_sum(&self) -> (i64, i64) {
        self.jumps
            .iter()
            .fold((0, 0), |(lo, hi), j| (lo + j.bound.0, hi + j.bound.1))
    }
}

/// Reject an endpoint whose kernel is numerically ambiguous: any eigenvalue
/// in `(band, 1000 band)` — with `band` the kernel cutoff used by
/// [`QuadForm::inertia`] — could flip `index_i` under refinement.
fn endpoint_conditioning(q: &QuadForm, which: &str) -> Result<()> {
    let eigs = q.matrix().clone().symmetric_eigenvalues();
    let radius = eigs.iter().fold(0.0f64, |m, &l| m.max(l.abs())).max(1e-300);
    let band = KERNEL_BAND * radius;
    let suspicious: Vec<f64> = eigs
        .iter()
        .copied()
        .filter(|l| {
            let a = l.abs();
            a > band && a < 1e3 * band
        })
        .collect();
    if suspicious.is_empty() {
        Ok(())
    } else {
        Err(Error::Numerical(format!(
            "kernel of the {which} endpoint is ambiguous: eigenvalues {suspicious:?} sit in \
             the uncertainty band ({band:.3e}, {:.3e}); full spectrum: {:?}",
            1e3 * band,
            eigs.as_slice()
        )))
    }
}

fn locate_jumps(
    fam: &QuadraticFamily,
    a: f64,
    ia: usize,
    b: f64,
    ib: usize,
    tol: f64,
    out: &mut Vec<JumpReport>,
) -> Result<()> {
    if ia == ib {
        return Ok(());
    }
    let mid = 0.5 * (a + b);
    if b - a <= tol {
        let delta = ia as i64 - ib as i64;
        let kernel = fam.at(mid)?.inertia().1;
        out.push(JumpReport {
            t: mid,
            delta: Some(delta),
            bound: (delta, delta),
            witnesses: Some(kernel),
            finite: Some(true),
            all_nondegenerate: None,
        });
        return Ok(());
    }
    let im = fam.at(mid)?.index_i();
    locate_jumps(fam, a, ia, mid, im, tol, out)?;
    locate_jumps(fam, mid, im, b, ib, tol, out)
}

/// Exact index of a quadratic family: `i(Q_0) - i(Q_1)`.
///
/// With `locate_jumps` set, the index is additionally sampled on a grid of
/// `samples` points and each sign change is narrowed to `bisect_tol` in `t`;
/// the per-jump `delta`s then telescope to `mu` by construction. A pair of
/// jumps cancelling inside one grid cell goes unnoticed — raise `samples` if
/// the family is suspected of that.
///
/// Errors when an endpoint spectrum has eigenvalues too close to the kernel
/// cutoff for `index_i` to be trustworthy.
pub fn mu_quadratic(fam: &QuadraticFamily, opts: &MuOptions) -> Result<MaslovReport> {
    let q0 = fam.at(0.0)?;
    let q1 = fam.at(1.0)?;
    endpoint_conditioning(&q0, "start")?;
    endpoint_conditioning(&q1, "end")?;
    let ind_start = q0.index_i();
    let ind_end = q1.index_i();
    let mu = ind_start as i64 - ind_end as i64;

    let mut jumps = Vec::new();
    let mut segments = Vec::new();
    if opts.locate_jumps {
        let m = opts.samples.max(2);
        let grid: Vec<f64> = (0..m).map(|j| j as f64 / (m - 1) as f64).collect();
        let mut inds = Vec::with_capacity(m);
        for &t in &grid {
            inds.push(fam.at(t)?.index_i());
        }
        for w in 0..m - 1 {
            locate_jumps(fam, grid[w], inds[w], grid[w + 1], inds[w + 1], opts.bisect_tol, &mut jumps)?;
        }
        let mut lo = 0.0;
        for j in &jumps {
            segments.push((lo, j.t));
            lo = j.t;
        }
        segments.push((lo, 1.0));
        segments.retain(|(a, b)| b - a > 10.0 * opts.bisect_tol);
    }

    Ok(MaslovReport {
        mu: Some(mu),
        ind_start: Some(ind_start),
        ind_end: Some(ind_end),
        initial: None,
        jumps,
        segments,
        bounds: Some((mu, mu)),
        degenerate: false,
    })
}

/// Index of a (not necessarily closed) symplectic path, via the frozen-piece
/// quadratic family. `pieces = None` auto-refines the decomposition; the
/// result is independent of the decomposition, forced or not.
pub fn nu_sp_path(path: &SpPath, pieces: Option<usize>, opts: &MuOptions) -> Result<MaslovReport> {
    let fam = QuadraticFamily::from_sp_path(path.clone(), pieces)?;
    mu_quadratic(&fam, opts)
}

/// Index of a loop in `Sp(2n; R)`. Errors unless `gamma(1) = gamma(0)` to
/// `1e-9`. Additive under pointwise loop products, value 2 on the standard
/// `Sp(2; R)` circle.
pub fn nu_sp_loop(path: &SpPath, opts: &MuOptions) -> Result<i64> {
    let gap = (path(1.0) - path(0.0)).norm();
    if gap > 1e-9 {
        return Err(Error::Numerical(format!(
            "loop is not closed: |gamma(1) - gamma(0)| = {gap:.3e} exceeds 1e-9"
        )));
    }
    let rep = nu_sp_path(path, None, opts)?;
    Ok(rep.mu.expect("quadratic route is exact"))
}

#[derive(Debug, Clone)]
pub struct AsymptoticReport {
    /// `(m, mu(x^m))` for `m = 1..=m_max`.
    pub values: Vec<(usize, i64)>,
    /// The common value of `mu(x^m) / m` when the sequence is constant (it
    /// is, exactly, for loops and for rotation paths).
    pub stabilized: Option<f64>,
}

/// Homogenization along pointwise powers: `mu(x^m) / m` for `m = 1..=m_max`.
pub fn asymptotic_mu_linear(path: &SpPath, m_max: usize, opts: &MuOptions) -> Result<AsymptoticReport> {
    assert!(m_max >= 1);
    let mut values = Vec::with_capacity(m_max);
    for m in 1..=m_max {
        let base = path.clone();
        let powered: SpPath = Arc::new(move |s| {
            let g = base(s);
            let mut out = DMatrix::identity(g.nrows(), g.nrows());
            for _ in 0..m {
                out = out * &g;
            }
            out
        });
        let rep = nu_sp_path(&powered, None, opts)?;
        values.push((m, rep.mu.expect("quadratic route is exact")));
    }
    let ratios: Vec<f64> = values.iter().map(|&(m, v)| v as f64 / m as f64).collect();
    let stabilized = if ratios.windows(2).all(|w| (w[0] - w[1]).abs() < 1e-12) {
        ratios.last().copied()
    } else {
        None
    };
    Ok(AsymptoticReport { values, stabilized })
}

/// Index of `l` full Reeb turns on `L_k^{2n-1}`: always `2 n l`.
///
/// The Reeb lift rotates every complex coordinate at unit speed regardless
/// of the weights, so the quadratic computation sees only `n` and `l`; the
/// lens space fixes `n` and certifies that the rotation loop descends to the
/// quotient (it does for every `k`, since `r_{2 pi} = id`). The arithmetic
/// of `k` resurfaces in crossing analysis, not here.
pub fn reeb_mu(lens: &LensSpace, l: usize, opts: &MuOptions) -> Result<MaslovReport> {
    assert!(l >= 1, "need at least one Reeb turn");
    let n = lens.n();
    let omega = TAU * l as f64;
    let path: SpPath = Arc::new(move |s| rotation(n, omega * s));
    // 3l pieces make each transition a 2pi/3 turn, comfortably graphical.
    nu_sp_path(&path, Some(3 * l), opts)
}

/// A seeded loop in `Sp(2n; R)` of known index, for exercising the
/// homomorphism property: a per-block rotation with winding `windings[j]` in
/// block `j`, conjugated by a fixed random symplectic matrix and multiplied
/// by a contractible `exp(sin(pi s) J S)` wiggle. Returns the loop and its
/// index `2 sum(windings)`.
pub fn random_sp_loop(n: usize, windings: &[i64], wiggle: f64, seed: u64) -> (SpPath, i64) {
    assert_eq!(windings.len(), n, "one winding per block");
    let mut rng = sampling::rng(seed);
    let j_mat = i_matrix(n);
    let s_wiggle = sampling::symmetric_matrix(&mut rng, 2 * n, wiggle);
    let s_conj = sampling::symmetric_matrix(&mut rng, 2 * n, 0.4);
    let conj = (&j_mat * s_conj).exp();
    let conj_inv = conj.clone().try_inverse().expect("exp(JS) is invertible");
    let j_s = j_mat * s_wiggle;
    let w = windings.to_vec();
    let expected = 2 * windings.iter().sum::<i64>();
    let path: SpPath = Arc::new(move |s: f64| {
        let wig = (&j_s * (std::f64::consts::PI * s).sin()).exp();
        let mut rot = DMatrix::zeros(2 * n, 2 * n);
        for (j, &m) in w.iter().enumerate() {
            let th = TAU * m as f64 * s;
            rot[(2 * j, 2 * j)] = th.cos();
            rot[(2 * j, 2 * j + 1)] = -th.sin();
            rot[(2 * j + 1, 2 * j)] = th.sin();
            rot[(2 * j + 1, 2 * j + 1)] = th.cos();
        }
        wig * &conj * rot * &conj_inv
    });
    (path, expected)
}

/// `mu(xy) - mu(x) - mu(y)` for pointwise products of symplectic paths. The
/// quasimorphism property bounds this by `2n + 1` in absolute value (and for
/// towers built from the zero form it vanishes identically).
pub fn quasimorphism_defect(x: &SpPath, y: &SpPath, opts: &MuOptions) -> Result<i64> {
    let (xc, yc) = (x.clone(), y.clone());
    let product: SpPath = Arc::new(move |s| xc(s) * yc(s));
    let mu_x = nu_sp_path(x, None, opts)?.mu.expect("exact");
    let mu_y = nu_sp_path(y, None, opts)?.mu.expect("exact");
    let mu_xy = nu_sp_path(&product, None, opts)?.mu.expect("exact");
    Ok(mu_xy - mu_x - mu_y)
}

#[derive(Debug, Clone)]
pub struct CrossingOptions {
    pub discriminant: DiscriminantOptions,
    /// Census options for the witness sweep at each crossing. The defaults
    /// deduplicate at the cluster separation `1e-3`, under which "finitely
    /// many" means at most `10 * 2n` classes.
    pub witness: TranslatedPointOptions,
    /// Sphere samples behind the sign certificate.
    pub sign_samples: usize,
    pub seed: u64,
}

impl Default for CrossingOptions {
    fn default() -> Self {
        CrossingOptions {
            discriminant: DiscriminantOptions::default(),
            witness: TranslatedPointOptions {
                grid_density: 32,
                eta_samples: 4,
                dedup_tol: 1e-3,
                ..TranslatedPointOptions::default()
            },
            sign_samples: 512,
            seed: 0x5167,
        }
    }
}

/// Bound the index of the isotopy of `ham` over `[0, t_max]` by crossing
/// analysis.
///
/// The index can change only at discriminant times, so the report segments
/// the interval with [`discriminant_times`]: on the listed crossing-free
/// `segments` the index is constant, and each crossing carries a bound from
/// its witness census — `1` when every deduplicated witness class is
/// nondegenerate, `2` when the classes are finite, `2n + 1` otherwise. The
/// sign of the Hamiltonian (certified by sampling `h` on the sphere) turns
/// the bounds one-sided: a non-negative `h` makes the generating data grow
/// monotonically, so no crossing can push the index up, and the short-time
/// value (`initial`) is `2n` exactly when `h > 0`, `0` when `h <= 0`, and in
/// `[0, 2n]` in general. `bounds` totals `initial` plus the jump bounds.
///
/// `mu` is filled exactly only when the flow is linear (a constant
/// Hamiltonian, i.e. a Reeb rotation), via the quadratic route. When the
/// discriminant set fills the whole interval the report comes back
/// `degenerate` with no bounds — except for an identity flow, which is
/// certified by `h = 0` and reported as exactly zero.
pub fn crossing_report(
    ham: &Hamiltonian,
    lens: &LensSpace,
    t_max: f64,
    opts: &CrossingOptions,
) -> Result<MaslovReport> {
    assert!(t_max > 0.0);
    ham.certify_invariance(lens, 64, opts.seed, 1e-8)?;
    let dim = lens.ambient_dim();
    let n = lens.n();
    let two_n = 2 * n as i64;

    let (h_min, h_max) = ham.sign_range(dim, opts.sign_samples, opts.seed);
    let strictly_positive = h_min > 1e-9;
    let non_negative = h_min > -1e-9;
    let non_positive = h_max < 1e-9;
    let initial: (i64, i64) = if strictly_positive {
        (two_n, two_n)
    } else if non_positive {
        (0, 0)
    } else {
        (0, two_n)
    };

    let dt = discriminant_times(ham, lens, t_max, &opts.discriminant);
    if dt.continuum {
        // Identity flows are the one continuum we can still resolve.
        let identity = non_negative && non_positive;
        return Ok(MaslovReport {
            mu: if identity { Some(0) } else { None },
            ind_start: None,
            ind_end: None,
            initial: Some(if identity { (0, 0) } else { initial }),
            jumps: Vec::new(),
            segments: Vec::new(),
            bounds: if identity { Some((0, 0)) } else { None },
            degenerate: true,
        });
    }

    let mut jumps = Vec::new();
    for &tc in &dt.times {
        // A continuum crossing (the flow meeting a deck rotation outright, as
        // the Reeb flow does) makes the deck distance vanish at generic
        // points; probe it directly, since a Newton census systematically
        // under-counts a continuum.
        let probes = sampling::sphere_points(dim, 64, opts.seed ^ 0x9e37_79b9);
        let vanishing = probes
            .iter()
            .filter(|p| {
                let img = flow(ham, tc, p);
                let d = (0..lens.k() as i64)
                    .map(|m| (&img - lens.act(m, p)).norm())
                    .fold(f64::INFINITY, f64::min);
                d < 1e-6
            })
            .count();
        let continuum = 2 * vanishing > probes.len();

        let (witnesses, finite, all_nondegenerate) = if continuum {
            (None, false, false)
        } else {
            let map = FlowMap { ham: ham.clone(), duration: tc, dim };
            let census = translated_points(&map, lens, &opts.witness);
            // Witnesses of the crossing are the classes whose solved relation
            // `Phi(p) = e^{i eta} zeta^m p` lands on a deck transformation.
            let on_deck: Vec<_> = census
                .points
                .iter()
                .filter(|p| {
                    let shifted = rotation(n, p.eta) * lens.act(p.deck_power, &p.p);
                    (0..lens.k() as i64)
                        .any(|m| (&shifted - lens.act(m, &p.p)).norm() < 1e-3)
                })
                .collect();
            if census.degenerate_family {
                (None, false, false)
            } else {
                let count = on_deck.len();
                let finite = count >= 1 && count <= 10 * 2 * n;
                let nd = finite && on_deck.iter().all(|p| p.nondegenerate);
                (Some(count), finite, nd)
            }
        };
        let cap: i64 = if all_nondegenerate {
            1
        } else if finite {
            2
        } else {
            two_n + 1
        };
        let bound = if non_negative {
            (0, cap)
        } else if non_positive {
            (-cap, 0)
        } else {
            (-cap, cap)
        };
        jumps.push(JumpReport {
            t: tc,
            delta: None,
            bound,
            witnesses,
            finite: Some(finite),
            all_nondegenerate: Some(all_nondegenerate),
        });
    }

    let mut segments = Vec::new();
    let mut lo = 0.0;
    for j in &jumps {
        if j.t - lo > 1e-9 {
            segments.push((lo, j.t));
        }
        lo = j.t;
    }
    if t_max - lo > 1e-9 {
        segments.push((lo, t_max));
    }

    let jump_sum = jumps
        .iter()
        .fold((0i64, 0i64), |(a, b), j| (a + j.bound.0, b + j.bound.1));
    let bounds = (initial.0 + jump_sum.0, initial.1 + jump_sum.1);

    let (mu, ind_start, ind_end) = if ham.terms.is_empty() {
        let omega = ham.constant * t_max;
        let path: SpPath = Arc::new(move |s| rotation(n, omega * s));
        let exact = nu_sp_path(&path, None, &MuOptions { locate_jumps: false, ..Default::default() })?;
        (exact.mu, exact.ind_start, exact.ind_end)
    } else {
        (None, None, None)
    };

    Ok(MaslovReport {
        mu,
        ind_start,
        ind_end,
        initial: Some(initial),
        jumps,
        segments,
        bounds: Some(bounds),
        degenerate: false,
    })
}
