//! One function per subcommand: resolve defaults, run the library, and pack
//! the result into a [`CommandOutput`].
//!
//! Two kinds of commands exist. *Measuring* commands (`translated-points`,
//! `crossings`) report what they find and always succeed. *Checking*
//! commands (`linear-maslov`, `reeb-mu`, the equivtop pair, both suites)
//! know what the mathematics guarantees for their run and fill
//! [`CommandOutput::violation`] when the computation disagrees — the
//! certificate lands in the report either way.

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::path::Path;
use std::sync::Arc;

use rand::Rng;

use lens_maslov::contact::{translated_points, FlowMap, Hamiltonian, TranslatedPointOptions};
use lens_maslov::equivtop::{
    bockstein, cochain_class_is_zero, cohom_index, cohomology_generators, homology,
    homology_index, lens_model, load_model, property_suite, resolve_subcomplex, QuotientComplex,
    Subcomplex,
};
use lens_maslov::lens::{rotation, LensSpace};
use lens_maslov::maslov::{
    crossing_report, nu_sp_path, quasimorphism_defect, random_sp_loop, reeb_mu, CrossingOptions,
    MaslovReport, MuOptions, SpPath,
};
use lens_maslov::report::{fmt_float, Report};
use lens_maslov::sampling;

use crate::config::*;
use crate::{CommandOutput, RunError};

/// Process-level settings that are not per-command flags.
pub struct RunContext {
    /// Value of `LENS_MASLOV_THREADS`, validated by `main`. Recorded in
    /// every report for reproducibility; the computations are currently
    /// single-threaded, so it only reserves the knob.
    pub threads: Option<usize>,
}

impl RunContext {
    fn stamp(&self, report: &mut Report) {
        if let Some(t) = self.threads {
            report.push_config("threads", t);
        }
    }
}

fn fmt_ints<T: std::fmt::Display>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

fn fmt_pair((lo, hi): (i64, i64)) -> String {
    format!("[{lo}, {hi}]")
}

/// Exact jump list of a quadratic-route report.
fn push_jumps(report: &mut Report, rep: &MaslovReport) {
    report.push("jumps", rep.jumps.len());
    for (i, j) in rep.jumps.iter().enumerate() {
        report.push(format!("jump[{i}].t"), fmt_float(j.t));
        match j.delta {
            Some(d) => report.push(format!("jump[{i}].delta"), d),
            None => report.push(format!("jump[{i}].bound"), fmt_pair(j.bound)),
        };
    }
}

/// nu of a loop in Sp(2n; R): the standard circle, or a seeded random loop
/// whose construction pins the expected value.
pub fn linear_maslov(o: &LinearMaslovOpts, ctx: &RunContext) -> Result<CommandOutput, RunError> {
    if o.standard_loop == Some(true) && o.windings.is_some() {
        return Err(RunError::Usage(
            "--standard-loop and --windings are mutually exclusive".into(),
        ));
    }
    if o.pieces == Some(0) {
        return Err(RunError::Usage("--pieces must be at least 1".into()));
    }
    let mut report = Report::new("linear-maslov");
    let (path, expected): (SpPath, i64) = match &o.windings {
        None => {
            let n = o.n.unwrap_or(1);
            if n == 0 {
                return Err(RunError::Usage("--n must be at least 1".into()));
            }
            report.push_config("mode", "standard-loop");
            report.push_config("n", n);
            (Arc::new(move |s| rotation(n, TAU * s)), 2 * n as i64)
        }
        Some(w) => {
            if let Some(n) = o.n {
                if n != w.len() {
                    return Err(RunError::Usage(format!(
                        "--n {n} disagrees with {} windings",
                        w.len()
                    )));
                }
            }
            let wiggle = o.wiggle.unwrap_or(0.3);
            let seed = o.seed.unwrap_or(0xA5);
            report.push_config("mode", "random-loop");
            report.push_config("n", w.len());
            report.push_config("windings", fmt_ints(w));
            report.push_config("wiggle", fmt_float(wiggle));
            report.push_config("seed", seed);
            random_sp_loop(w.len(), w, wiggle, seed)
        }
    };
    match o.pieces {
        Some(p) => report.push_config("pieces", p),
        None => report.push_config("pieces", "auto"),
    };
    ctx.stamp(&mut report);

    let rep = nu_sp_path(&path, o.pieces, &MuOptions::default())?;
    let nu = rep.mu.expect("quadratic route is exact");
    report.push("nu", nu);
    report.push("expected", expected);
    report.push("ind_start", rep.ind_start.expect("quadratic route"));
    report.push("ind_end", rep.ind_end.expect("quadratic route"));
    push_jumps(&mut report, &rep);

    let violation = (nu != expected)
        .then(|| format!("nu = {nu}, but the loop was built with index {expected}"));
    let summary = format!("nu = {nu} (expected {expected})");
    Ok(CommandOutput { report, summary, violation })
}

fn resolve_weights(n: Option<usize>, weights: Option<&Vec<u32>>) -> Result<Vec<u32>, RunError> {
    match (n, weights) {
        (Some(n), Some(w)) if n != w.len() => Err(RunError::Usage(format!(
            "--n {n} disagrees with {} weights",
            w.len()
        ))),
        (_, Some(w)) => Ok(w.clone()),
        (n, None) => Ok(vec![1; n.unwrap_or(2)]),
    }
}

/// mu of the l-th full Reeb turn on a lens space: always 2nl.
pub fn reeb_mu_cmd(o: &ReebMuOpts, ctx: &RunContext) -> Result<CommandOutput, RunError> {
    let k = o.k.unwrap_or(3);
    let weights = resolve_weights(o.n, o.weights.as_ref())?;
    let l = o.l.unwrap_or(1);
    if l == 0 {
        return Err(RunError::Usage("--l must be at least 1".into()));
    }
    let lens = LensSpace::new(k, weights.clone())?;
    let n = lens.n();

    let mut report = Report::new("reeb-mu");
    report.push_config("k", k);
    report.push_config("n", n);
    report.push_config("l", l);
    report.push_config("weights", fmt_ints(&weights));
    ctx.stamp(&mut report);

    let rep = reeb_mu(&lens, l, &MuOptions::default())?;
    let mu = rep.mu.expect("quadratic route is exact");
    let expected = 2 * (n * l) as i64;
    report.push("mu", mu);
    report.push("expected", expected);
    report.push("ind_start", rep.ind_start.expect("quadratic route"));
    report.push("ind_end", rep.ind_end.expect("quadratic route"));
    push_jumps(&mut report, &rep);

    let violation =
        (mu != expected).then(|| format!("mu = {mu} for n = {n}, l = {l}; 2nl = {expected}"));
    let summary = format!("mu = {mu} (2nl = {expected})");
    Ok(CommandOutput { report, summary, violation })
}

/// The built-in perturbation `1 + eps Re(z1^2 zbar2^2)/|u|^4`, checked to be
/// invariant for the requested lens space before any flow is integrated.
fn perturbed_hamiltonian(eps: f64, lens: &LensSpace, seed: u64) -> Result<Hamiltonian, RunError> {
    if eps == 0.0 {
        return Ok(Hamiltonian::reeb());
    }
    if lens.n() != 2 {
        return Err(RunError::Usage(format!(
            "the built-in perturbation is a function of two complex coordinates; \
             this lens space has n = {}",
            lens.n()
        )));
    }
    let ham = Hamiltonian::perturbed_reeb(eps);
    ham.certify_invariance(lens, 64, seed, 1e-8).map_err(|e| {
        RunError::Usage(format!("perturbation is not invariant for these weights: {e}"))
    })?;
    Ok(ham)
}

/// Translated points of the time-`time` flow of the perturbed Reeb
/// Hamiltonian: solver-certified solutions of `Phi(p) = e^{i eta} p`.
pub fn translated_points_cmd(
    o: &TranslatedPointsOpts,
    ctx: &RunContext,
) -> Result<CommandOutput, RunError> {
    let k = o.k.unwrap_or(3);
    let weights = o.weights.clone().unwrap_or_else(|| vec![1, 1]);
    let eps = o.eps.unwrap_or(0.1);
    let time = o.time.unwrap_or(TAU);
    if !(time > 0.0) {
        return Err(RunError::Usage("--time must be positive".into()));
    }
    let lens = LensSpace::new(k, weights.clone())?;
    let defaults = TranslatedPointOptions::default();
    let opts = TranslatedPointOptions {
        grid_density: o.grid_density.unwrap_or(defaults.grid_density),
        eta_samples: o.eta_samples.unwrap_or(defaults.eta_samples),
        seed: o.seed.unwrap_or(defaults.seed),
        ..defaults
    };

    let mut report = Report::new("translated-points");
    report.push_config("k", k);
    report.push_config("weights", fmt_ints(&weights));
    report.push_config("eps", fmt_float(eps));
    report.push_config("time", fmt_float(time));
    report.push_config("grid_density", opts.grid_density);
    report.push_config("eta_samples", opts.eta_samples);
    report.push_config("seed", opts.seed);
    ctx.stamp(&mut report);

    let ham = perturbed_hamiltonian(eps, &lens, opts.seed)?;
    let map = FlowMap { ham, duration: time, dim: lens.ambient_dim() };
    let outcome = translated_points(&map, &lens, &opts);

    let nondegenerate = outcome.points.iter().filter(|p| p.nondegenerate).count();
    report.push("degenerate_family", outcome.degenerate_family);
    report.push("found", outcome.points.len());
    report.push("nondegenerate", nondegenerate);
    for (i, p) in outcome.points.iter().enumerate() {
        report.push(format!("point[{i}].eta"), fmt_float(p.eta));
        report.push(format!("point[{i}].deck"), p.deck_power);
        report.push(format!("point[{i}].residual"), fmt_float(p.residual));
        report.push(format!("point[{i}].nondegenerate"), p.nondegenerate);
        report.push(format!("point[{i}].sigma"), fmt_float(p.transverse_sigma));
    }

    let summary = if outcome.degenerate_family {
        "a continuum of translated points (degenerate family)".to_string()
    } else {
        format!("{} translated points ({nondegenerate} nondegenerate)", outcome.points.len())
    };
    Ok(CommandOutput { report, summary, violation: None })
}

/// Discriminant crossings of a contact flow and the index bounds they allow.
pub fn crossings(o: &CrossingsOpts, ctx: &RunContext) -> Result<CommandOutput, RunError> {
    let k = o.k.unwrap_or(3);
    let weights = o.weights.clone().unwrap_or_else(|| vec![1, 1]);
    let kind = o.hamiltonian.unwrap_or(HamKind::Reeb);
    let t_max = o.t_max.unwrap_or(TAU);
    if !(t_max > 0.0) {
        return Err(RunError::Usage("--t-max must be positive".into()));
    }
    let lens = LensSpace::new(k, weights.clone())?;
    let opts = CrossingOptions {
        seed: o.seed.unwrap_or_else(|| CrossingOptions::default().seed),
        ..CrossingOptions::default()
    };

    let mut report = Report::new("crossings");
    report.push_config("k", k);
    report.push_config("weights", fmt_ints(&weights));
    let (ham, kind_name) = match kind {
        HamKind::Reeb => (Hamiltonian::reeb(), "reeb"),
        HamKind::PerturbedReeb => {
            let eps = o.eps.unwrap_or(0.1);
            report.push_config("eps", fmt_float(eps));
            (perturbed_hamiltonian(eps, &lens, opts.seed)?, "perturbed-reeb")
        }
    };
    report.push_config("hamiltonian", kind_name);
    report.push_config("t_max", fmt_float(t_max));
    report.push_config("seed", opts.seed);
    ctx.stamp(&mut report);

    let rep = crossing_report(&ham, &lens, t_max, &opts)?;
    report.push("degenerate", rep.degenerate);
    if let Some(initial) = rep.initial {
        report.push("initial", fmt_pair(initial));
    }
    report.push("crossings", rep.jumps.len());
    for (i, j) in rep.jumps.iter().enumerate() {
        report.push(format!("crossing[{i}].t"), fmt_float(j.t));
        report.push(format!("crossing[{i}].bound"), fmt_pair(j.bound));
        match j.witnesses {
            Some(w) => report.push(format!("crossing[{i}].witnesses"), w),
            None => report.push(format!("crossing[{i}].witnesses"), "continuum"),
        };
        if let Some(f) = j.finite {
            report.push(format!("crossing[{i}].finite"), f);
        }
        if let Some(nd) = j.all_nondegenerate {
            report.push(format!("crossing[{i}].nondegenerate"), nd);
        }
    }
    for (i, (a, b)) in rep.segments.iter().enumerate() {
        report.push(format!("segment[{i}]"), format!("({}, {})", fmt_float(*a), fmt_float(*b)));
    }
    report.push("jump_sum", fmt_pair(rep.jump_bound_sum()));
    if let Some(bounds) = rep.bounds {
        report.push("bounds", fmt_pair(bounds));
    }
    if let Some(mu) = rep.mu {
        report.push("mu", mu);
    }

    let summary = if rep.degenerate {
        "discriminant set fills the interval (degenerate isotopy)".to_string()
    } else {
        let bounds = rep.bounds.map(fmt_pair).unwrap_or_else(|| "unknown".into());
        format!("{} crossings; index bounds {bounds}", rep.jumps.len())
    };
    Ok(CommandOutput { report, summary, violation: None })
}

/// Where an equivariant complex comes from: a lens model built in memory, or
/// a file with optional named subcomplexes.
fn resolve_model(
    k: Option<u32>,
    m: Option<usize>,
    weights: Option<&Vec<u32>>,
    file: Option<&Path>,
    report: &mut Report,
) -> Result<(QuotientComplex, BTreeMap<String, Subcomplex>), RunError> {
    if let Some(path) = file {
        if k.is_some() || m.is_some() || weights.is_some() {
            return Err(RunError::Usage(
                "--file already fixes the complex; drop --k/--M/--weights".into(),
            ));
        }
        let text = std::fs::read_to_string(path)
            .map_err(|e| RunError::Usage(format!("cannot read {}: {e}", path.display())))?;
        let (quotient, subs) = load_model(&text)?;
        report.push_config("file", path.display());
        report.push_config("k", quotient.k());
        Ok((quotient, subs))
    } else {
        let k = k.unwrap_or(3);
        let weights = match (m, weights) {
            (Some(m), Some(w)) if m != w.len() => {
                return Err(RunError::Usage(format!(
                    "--M {m} disagrees with {} weights",
                    w.len()
                )))
            }
            (_, Some(w)) => w.clone(),
            (m, None) => vec![1; m.unwrap_or(2)],
        };
        report.push_config("k", k);
        report.push_config("weights", fmt_ints(&weights));
        let quotient = lens_model(k, &weights)?;
        Ok((quotient, BTreeMap::new()))
    }
}

/// Betti numbers over Z_k and the Bockstein ladder. For a lens model both
/// are guaranteed: one homology line per degree, Bockstein climbing exactly
/// the odd-to-even rungs.
pub fn equivtop_homology(o: &HomologyOpts, ctx: &RunContext) -> Result<CommandOutput, RunError> {
    let mut report = Report::new("equivtop-homology");
    let (quotient, _) =
        resolve_model(o.k, o.m, o.weights.as_ref(), o.file.as_deref(), &mut report)?;
    ctx.stamp(&mut report);
    let lens_built = o.file.is_none();

    let hom = homology(&quotient);
    let dim = quotient.dim();
    report.push("dim", dim);
    report.push("betti", fmt_ints(&hom.betti));

    let mut bock = Vec::with_capacity(dim + 1);
    for d in 0..=dim {
        let verdict = if hom.betti[d] == 1 {
            let gen = &cohomology_generators(&quotient, d)[0];
            let image = bockstein(&quotient, gen)?;
            if cochain_class_is_zero(&quotient, &image) {
                "zero"
            } else {
                "nonzero"
            }
        } else {
            "ambiguous"
        };
        report.push(format!("bockstein[{d}]"), verdict);
        bock.push(verdict);
    }

    let mut violation = None;
    if lens_built {
        if let Some(d) = (0..=dim).find(|&d| hom.betti[d] != 1) {
            violation = Some(format!(
                "dim H_{d} = {} on a lens model; every degree must be a line",
                hom.betti[d]
            ));
        } else if let Some(d) =
            (0..=dim).find(|&d| (bock[d] == "nonzero") != (d % 2 == 1 && d < dim))
        {
            violation = Some(format!(
                "Bockstein is {} in degree {d}; the ladder climbs exactly the \
                 odd-to-even rungs",
                bock[d]
            ));
        }
    }

    let summary = format!("betti = {}; bockstein = {}", fmt_ints(&hom.betti), bock.join(","));
    Ok(CommandOutput { report, summary, violation })
}

/// Cohomological index of one subcomplex, computed by restriction ranks and
/// cross-checked against the homology-side route.
pub fn equivtop_index(o: &IndexOpts, ctx: &RunContext) -> Result<CommandOutput, RunError> {
    let mut report = Report::new("equivtop-index");
    let (quotient, subs) =
        resolve_model(o.k, o.m, o.weights.as_ref(), o.file.as_deref(), &mut report)?;
    let name = o.sub.as_deref().unwrap_or("full");
    report.push_config("sub", name);
    ctx.stamp(&mut report);

    let sub = resolve_subcomplex(&quotient, &subs, name)?;
    report.push("cells", sub.total_cells());

    // A file-loaded complex may sit outside the family whose restriction
    // profile the index theory guarantees; a profile error there is the
    // input's shape, not a regression.
    let soften = |e: lens_maslov::Error| -> RunError {
        match (&e, o.file.is_some()) {
            (lens_maslov::Error::IndexShape(_), true) => RunError::Usage(e.to_string()),
            _ => e.into(),
        }
    };
    let ind = cohom_index(&quotient, &sub).map_err(soften)?;
    let dual = homology_index(&quotient, &sub).map_err(soften)?;
    report.push("ind", ind);
    report.push("ind_homology", dual);

    let violation = (ind != dual).then(|| {
        format!("cohomology route gives ind = {ind}, homology route {dual}; the two are dual")
    });
    let summary = format!("ind({name}) = {ind}");
    Ok(CommandOutput { report, summary, violation })
}

/// Seeded stress test of the five index laws on random subcomplex pairs.
pub fn property_suite_cmd(
    o: &PropertySuiteOpts,
    ctx: &RunContext,
) -> Result<CommandOutput, RunError> {
    let k = o.k.unwrap_or(3);
    let weights = match (o.m, &o.weights) {
        (Some(m), Some(w)) if m != w.len() => {
            return Err(RunError::Usage(format!("--M {m} disagrees with {} weights", w.len())))
        }
        (_, Some(w)) => w.clone(),
        (m, None) => vec![1; m.unwrap_or(2)],
    };
    let samples = o.samples.unwrap_or(60);
    let seed = o.seed.unwrap_or(0x5EED);

    let mut report = Report::new("property-suite");
    report.push_config("k", k);
    report.push_config("weights", fmt_ints(&weights));
    report.push_config("samples", samples);
    report.push_config("seed", seed);
    ctx.stamp(&mut report);

    let rep = property_suite(k, &weights, samples, seed)?;
    report.push("pairs", rep.samples);
    report.push("checks", rep.checks);
    let skipped =
        if rep.skipped.is_empty() { "none".to_string() } else { rep.skipped.join(",") };
    report.push("skipped", skipped);
    report.push("violations", rep.violations.len());
    for (i, v) in rep.violations.iter().enumerate() {
        report.push(
            format!("violation[{i}]"),
            format!("{} @ pair {}: {}", v.property, v.sample, v.detail),
        );
    }

    let violation = (!rep.passed()).then(|| {
        let v = &rep.violations[0];
        format!(
            "{} index-law checks failed; first: {} @ pair {}: {}",
            rep.violations.len(),
            v.property,
            v.sample,
            v.detail
        )
    });
    let summary = format!(
        "{} checks over {} pairs; {} violations",
        rep.checks,
        rep.samples,
        rep.violations.len()
    );
    Ok(CommandOutput { report, summary, violation })
}

/// Draw one random loop: windings uniform in `[-w, w]` per coordinate.
fn draw_loop(
    n: usize,
    max_winding: i64,
    wiggle: f64,
    rng: &mut impl Rng,
) -> (SpPath, i64, String) {
    let windings: Vec<i64> = (0..n).map(|_| rng.gen_range(-max_winding..=max_winding)).collect();
    let seed = rng.gen::<u64>();
    let (path, expected) = random_sp_loop(n, &windings, wiggle, seed);
    (path, expected, fmt_ints(&windings))
}

/// Run `body` until it returns or fails for a reason other than numerical
/// conditioning; a conditioning refusal redraws the sample (deterministic,
/// since the RNG stream is fixed) and is tallied in `resamples`.
fn redraw_on_conditioning<R: Rng>(
    rng: &mut R,
    resamples: &mut usize,
    mut body: impl FnMut(&mut R) -> lens_maslov::Result<String>,
) -> Result<String, RunError> {
    for _ in 0..5 {
        match body(rng) {
            Ok(line) => return Ok(line),
            Err(lens_maslov::Error::Numerical(_)) => *resamples += 1,
            Err(e) => return Err(e.into()),
        }
    }
    Err(RunError::Contract(
        "five consecutive random samples failed the conditioning certificate".into(),
    ))
}

/// Loop additivity and the quasimorphism defect.
///
/// Phase one: on `pairs` random loop pairs the index is a homomorphism —
/// `nu(xy) = nu(x) + nu(y)` exactly, and each factor matches the index its
/// construction pinned. Phase two: the same kind of loops truncated to
/// random sub-intervals are no longer closed, and there the defect
/// `nu(xy) - nu(x) - nu(y)` is only bounded, by `2n + 1`.
pub fn defect_suite(o: &DefectSuiteOpts, ctx: &RunContext) -> Result<CommandOutput, RunError> {
    let n = o.n.unwrap_or(2);
    if n == 0 {
        return Err(RunError::Usage("--n must be at least 1".into()));
    }
    let pairs = o.pairs.unwrap_or(12);
    let max_winding = o.max_winding.unwrap_or(2);
    if max_winding < 0 {
        return Err(RunError::Usage("--max-winding must be non-negative".into()));
    }
    let wiggle = o.wiggle.unwrap_or(0.3);
    let seed = o.seed.unwrap_or(0xD3F);
    let bound = 2 * n as i64 + 1;

    let mut report = Report::new("defect-suite");
    report.push_config("n", n);
    report.push_config("pairs", pairs);
    report.push_config("max_winding", max_winding);
    report.push_config("wiggle", fmt_float(wiggle));
    report.push_config("seed", seed);
    ctx.stamp(&mut report);
    report.push("bound", bound);

    let opts = MuOptions { locate_jumps: false, ..MuOptions::default() };
    let nu = |path: &SpPath| -> lens_maslov::Result<i64> {
        Ok(nu_sp_path(path, None, &opts)?.mu.expect("quadratic route is exact"))
    };
    let mut rng = sampling::rng(seed);
    let mut resamples = 0usize;
    let mut violations: Vec<String> = Vec::new();

    for i in 0..pairs {
        let line = redraw_on_conditioning(&mut rng, &mut resamples, |rng| {
            let (x, ex, wx) = draw_loop(n, max_winding, wiggle, rng);
            let (y, ey, wy) = draw_loop(n, max_winding, wiggle, rng);
            let (xc, yc) = (x.clone(), y.clone());
            let product: SpPath = Arc::new(move |s| xc(s) * yc(s));
            let (nx, ny, nxy) = (nu(&x)?, nu(&y)?, nu(&product)?);
            if (nx, ny) != (ex, ey) || nxy != nx + ny {
                violations.push(format!(
                    "loop pair {i} (windings {wx} | {wy}): nu {nx} + {ny} vs nu(xy) = {nxy}"
                ));
            }
            Ok(format!("windings {wx} | {wy}; nu {nx} + {ny} = {nxy}"))
        })?;
        report.push(format!("loop[{i}]"), line);
    }

    let mut max_defect = 0i64;
    for i in 0..pairs {
        let line = redraw_on_conditioning(&mut rng, &mut resamples, |rng| {
            let (x, _, _) = draw_loop(n, max_winding, wiggle, rng);
            let (y, _, _) = draw_loop(n, max_winding, wiggle, rng);
            let (fx, fy) = (rng.gen_range(0.3..0.9), rng.gen_range(0.3..0.9));
            let px: SpPath = Arc::new(move |s| x(s * fx));
            let py: SpPath = Arc::new(move |s| y(s * fy));
            let defect = quasimorphism_defect(&px, &py, &opts)?;
            if defect.abs() > bound {
                violations
                    .push(format!("path pair {i}: defect {defect} exceeds the bound {bound}"));
            }
            max_defect = max_defect.max(defect.abs());
            Ok(defect.to_string())
        })?;
        report.push(format!("path[{i}].defect"), line);
    }
    report.push("max_defect", max_defect);
    report.push("resamples", resamples);
    report.push("violations", violations.len());
    for (i, v) in violations.iter().enumerate() {
        report.push(format!("violation[{i}]"), v);
    }

    let violation = (!violations.is_empty())
        .then(|| format!("{} defect checks failed; first: {}", violations.len(), violations[0]));
    let summary = format!(
        "{pairs} loop pairs additive, max path defect {max_defect} <= {bound}; {} violations",
        violations.len()
    );
    Ok(CommandOutput { report, summary, violation })
}
