//! Conical generating functions as expression trees.
//!
//! A generating function for a conical symplectomorphism `Phi` close to the
//! identity describes the graph of `Phi` as the image of the differential of
//! a function: under the identification `tau` the graph becomes a section
//! `q -> dF(q)` over the base. Compositions of such maps are far from the
//! identity, and no single function suffices — instead the `sharp`
//! composition introduces auxiliary fibre variables, and the graph of the
//! composition is cut out by the *fibre-critical* set of
//! `F(q; zeta, nu)`.
//!
//! This module represents such functions as immutable trees:
//!
//! * [`ConicalGF::primitive`] wraps a `C^1`-small [`ConicalMap`] — its value
//!   at `q` is produced by a Newton solve of the midpoint equation
//!   `(z + Phi z)/2 = q`, with the value recovered from the gradient via the
//!   Euler identity `F = <q, grad F>/2` (legitimate because `F` is
//!   homogeneous of degree two);
//! * [`ConicalGF::quadratic`] embeds an explicit [`QuadForm`];
//! * [`ConicalGF::sharp`], [`ConicalGF::multisharp`] and
//!   [`ConicalGF::stabilize`] build composite functions whose generated maps
//!   compose and whose fibre dimensions accumulate.
//!
//! [`ConicalGF::fibre_critical`] solves the vertical-derivative system in
//! closed form by cascading witnesses through the tree, never by root
//! finding on the assembled gradient — the gradient is then evaluated only
//! to *certify* the residual, which keeps the two routes independent.

use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::contact::ConicalMap;
use crate::lens::{mul_i, LensSpace};
use crate::quadform::QuadForm;
use crate::sampling;
use crate::{Error, Result};

/// `<a, i b>`, the rotated pairing both coupling terms are built from.
pub fn pair_i(a: &DVector<f64>, b: &DVector<f64>) -> f64 {
    a.dot(&mul_i(b))
}

enum Node {
    Primitive(Arc<dyn ConicalMap + Send + Sync>),
    Quadratic(QuadForm),
    Sharp(Box<ConicalGF>, Box<ConicalGF>),
    MultiSharp(Vec<ConicalGF>),
    Stabilize(Box<ConicalGF>, QuadForm),
}

/// A conical generating function, as an expression tree.
///
/// Coordinates are always `(q; fibre)` with `q` in the `2n`-dimensional
/// base. A [sharp](ConicalGF::sharp) node orders its fibre as
/// `(zeta_1, zeta_2, nu_1, nu_2)`; a [multisharp](ConicalGF::multisharp)
/// node as `(zeta_1, ..., zeta_N)`; a [stabilization](ConicalGF::stabilize)
/// appends its extra fibre variables last.
pub struct ConicalGF {
    node: Node,
    dim_base: usize,
    dim_fibre: usize,
}

impl Clone for ConicalGF {
    fn clone(&self) -> Self {
        let node = match &self.node {
            Node::Primitive(m) => Node::Primitive(m.clone()),
            Node::Quadratic(q) => Node::Quadratic(q.clone()),
            Node::Sharp(l, r) => Node::Sharp(l.clone(), r.clone()),
            Node::MultiSharp(c) => Node::MultiSharp(c.clone()),
            Node::Stabilize(c, q) => Node::Stabilize(c.clone(), q.clone()),
        };
        ConicalGF { node, dim_base: self.dim_base, dim_fibre: self.dim_fibre }
    }
}

impl fmt::Debug for ConicalGF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.describe())
    }
}

impl ConicalGF {
    /// The generating function of a single `C^1`-small conical map.
    ///
    /// The smallness precondition is the caller's: a map whose midpoint
    /// equation Newton cannot solve surfaces as a [`Error::Numerical`] at
    /// evaluation time, carrying the failing base point.
    pub fn primitive(map: impl ConicalMap + Send + Sync + 'static) -> Self {
        let dim_base = map.dim();
        ConicalGF { node: Node::Primitive(Arc::new(map)), dim_base, dim_fibre: 0 }
    }

    /// An explicit quadratic form as a (possibly fibred) generating function.
    pub fn quadratic(q: QuadForm) -> Self {
        let (b, f) = (q.dim_base(), q.dim_fibre());
        ConicalGF { node: Node::Quadratic(q), dim_base: b, dim_fibre: f }
    }

    /// The two-factor composition: generates `Phi_right . Phi_left`.
    pub fn sharp(self, right: ConicalGF) -> Result<Self> {
        if self.dim_base != right.dim_base {
            return Err(Error::DimensionMismatch(format!(
                "sharp factors have bases {} and {}",
                self.dim_base, right.dim_base
            )));
        }
        let dim_base = self.dim_base;
        let dim_fibre = 2 * dim_base + self.dim_fibre + right.dim_fibre;
        Ok(ConicalGF {
            node: Node::Sharp(Box::new(self), Box::new(right)),
            dim_base,
            dim_fibre,
        })
    }

    /// The flat even-count composition of fibreless factors: generates
    /// `Phi_N . ... . Phi_1`.
    pub fn multisharp(children: Vec<ConicalGF>) -> Result<Self> {
        if children.is_empty() || children.len() % 2 != 0 {
            return Err(Error::DimensionMismatch(format!(
                "multisharp needs a positive even number of factors, got {}",
                children.len()
            )));
        }
        let dim_base = children[0].dim_base;
        for c in &children {
            if c.dim_base != dim_base {
                return Err(Error::DimensionMismatch("mixed base dimensions".into()));
            }
            if c.dim_fibre != 0 {
                return Err(Error::DimensionMismatch(
                    "multisharp factors must be fibreless".into(),
                ));
            }
        }
        let dim_fibre = dim_base * children.len();
        Ok(ConicalGF { node: Node::MultiSharp(children), dim_base, dim_fibre })
    }

    /// Direct-sum stabilization `F (+) Q` by a pure-fibre quadratic form:
    /// the generated map is unchanged.
    pub fn stabilize(self, extra: QuadForm) -> Result<Self> {
        if extra.dim_base() != 0 {
            return Err(Error::DimensionMismatch(
                "stabilizing form must be pure fibre (dim_base 0)".into(),
            ));
        }
        let dim_base = self.dim_base;
        let dim_fibre = self.dim_fibre + extra.dim_fibre();
        Ok(ConicalGF {
            node: Node::Stabilize(Box::new(self), extra),
            dim_base,
            dim_fibre,
        })
    }

    pub fn dim_base(&self) -> usize {
        self.dim_base
    }

    pub fn dim_fibre(&self) -> usize {
        self.dim_fibre
    }

    pub fn dim(&self) -> usize {
        self.dim_base + self.dim_fibre
    }

    /// `F(x)` with `x = (q; fibre)` in the tree's layout.
    pub fn value(&self, x: &DVector<f64>) -> Result<f64> {
        Ok(self.value_and_gradient(x)?.0)
    }

    /// `grad F(x)`, assembled by the tree chain rule.
    pub fn gradient(&self, x: &DVector<f64>) -> Result<DVector<f64>> {
        Ok(self.value_and_gradient(x)?.1)
    }

    /// One-pass evaluation of the value and full gradient.
    pub fn value_and_gradient(&self, x: &DVector<f64>) -> Result<(f64, DVector<f64>)> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "point has dimension {}, tree needs {}",
                x.len(),
                self.dim()
            )));
        }
        let nb = self.dim_base;
        match &self.node {
            Node::Primitive(map) => {
                let q = x.clone();
                let z = solve_midpoint(map.as_ref(), &q)?;
                let grad = mul_i(&(&z - map.eval(&z)));
                let val = 0.5 * q.dot(&grad);
                Ok((val, grad))
            }
            Node::Quadratic(form) => Ok((form.value(x), form.gradient(x))),
            Node::Sharp(left, right) => {
                let q = x.rows(0, nb).clone_owned();
                let z1 = x.rows(nb, nb).clone_owned();
                let z2 = x.rows(2 * nb, nb).clone_owned();
                let (fl, fr) = (left.dim_fibre, right.dim_fibre);
                let xl = stack(&z1, &x.rows(3 * nb, fl).clone_owned());
                let xr = stack(&z2, &x.rows(3 * nb + fl, fr).clone_owned());
                let (vl, gl) = left.value_and_gradient(&xl)?;
                let (vr, gr) = right.value_and_gradient(&xr)?;
                let coupling = -2.0 * pair_i(&(&z2 - &q), &(&z1 - &q));
                let mut grad = DVector::zeros(self.dim());
                // base: 2i(zeta_1 - zeta_2)
                grad.rows_mut(0, nb).copy_from(&(2.0 * mul_i(&(&z1 - &z2))));
                // zeta_1: dF_1 + 2i(zeta_2 - q); zeta_2: dF_2 - 2i(zeta_1 - q)
                grad.rows_mut(nb, nb)
                    .copy_from(&(gl.rows(0, nb) + 2.0 * mul_i(&(&z2 - &q))));
                grad.rows_mut(2 * nb, nb)
                    .copy_from(&(gr.rows(0, nb) - 2.0 * mul_i(&(&z1 - &q))));
                grad.rows_mut(3 * nb, fl).copy_from(&gl.rows(nb, fl));
                grad.rows_mut(3 * nb + fl, fr).copy_from(&gr.rows(nb, fr));
                Ok((vl + vr + coupling, grad))
            }
            Node::MultiSharp(children) => {
                let q = x.rows(0, nb).clone_owned();
                let count = children.len();
                let zeta = |j: usize| x.rows(nb * j, nb).clone_owned(); // 1-based
                let sign = |j: usize| if j % 2 == 0 { 1.0 } else { -1.0 };
                let mut val = 0.0;
                let mut grad = DVector::zeros(self.dim());
                for (idx, child) in children.iter().enumerate() {
                    let j = idx + 1;
                    let zj = zeta(j);
                    let (vj, gj) = child.value_and_gradient(&zj)?;
                    val += vj + 2.0 * sign(j) * pair_i(&zj, &q);
                    let mut gz = gj + 2.0 * sign(j) * mul_i(&q);
                    for l in 1..=count {
                        if l > j {
                            val += 2.0 * sign(j + l + 1) * pair_i(&zj, &zeta(l));
                            gz += 2.0 * sign(j + l + 1) * mul_i(&zeta(l));
                        } else if l < j {
                            gz -= 2.0 * sign(l + j + 1) * mul_i(&zeta(l));
                        }
                    }
                    grad.rows_mut(nb * j, nb).copy_from(&gz);
                    let gq = grad.rows(0, nb) - 2.0 * sign(j) * mul_i(&zj);
                    grad.rows_mut(0, nb).copy_from(&gq);
                }
                Ok((val, grad))
            }
            Node::Stabilize(child, extra) => {
                let inner = child.dim();
                let xin = x.rows(0, inner).clone_owned();
                let nu = x.rows(inner, extra.dim_fibre()).clone_owned();
                let (v, g) = child.value_and_gradient(&xin)?;
                let mut grad = DVector::zeros(self.dim());
                grad.rows_mut(0, inner).copy_from(&g);
                grad.rows_mut(inner, extra.dim_fibre())
                    .copy_from(&extra.gradient(&nu));
                Ok((v + extra.value(&nu), grad))
            }
        }
    }

    /// Apply the generated map `Phi_F` directly (composing the leaves).
    pub fn apply_generated(&self, z: &DVector<f64>) -> Result<DVector<f64>> {
        Ok(self.cascade(z)?.0)
    }

    /// Walk the tree resolving fibre-critical coordinates in closed form
    /// from a witness `z` at the input of the composition; returns
    /// `(Phi_F(z), fibre coordinates)`.
    fn cascade(&self, z: &DVector<f64>) -> Result<(DVector<f64>, Vec<f64>)> {
        match &self.node {
            Node::Primitive(map) => Ok((map.eval(z), Vec::new())),
            Node::Quadratic(form) => {
                let phi = form.generated_linear_map()?;
                let out = &phi * z;
                let mut fibre = Vec::new();
                if form.dim_fibre() > 0 {
                    // vertical criticality: M_fb zeta + M_ff nu = 0
                    let (b, f) = (form.dim_base(), form.dim_fibre());
                    let m = form.matrix();
                    let mfb = m.view((b, 0), (f, b)).clone_owned();
                    let mff = m.view((b, b), (f, f)).clone_owned();
                    let zeta = (z + &out) / 2.0;
                    let nu = mff.lu().solve(&(-(&mfb * zeta))).ok_or_else(|| {
                        Error::SingularFibre("quadratic node has singular fibre block".into())
                    })?;
                    fibre.extend(nu.iter());
                }
                Ok((out, fibre))
            }
            Node::Sharp(left, right) => {
                let (z_mid, fl) = left.cascade(z)?;
                let (z_out, fr) = right.cascade(&z_mid)?;
                let zeta1 = (z + &z_mid) / 2.0;
                let zeta2 = (&z_mid + &z_out) / 2.0;
                let mut fibre: Vec<f64> = zeta1.iter().copied().collect();
                fibre.extend(zeta2.iter());
                fibre.extend(fl);
                fibre.extend(fr);
                Ok((z_out, fibre))
            }
            Node::MultiSharp(children) => {
                let mut fibre = Vec::new();
                let mut current = z.clone();
                for child in children {
                    let (next, _) = child.cascade(&current)?;
                    let zeta = (&current + &next) / 2.0;
                    fibre.extend(zeta.iter());
                    current = next;
                }
                Ok((current, fibre))
            }
            Node::Stabilize(child, extra) => {
                let (out, mut fibre) = child.cascade(z)?;
                // nu = 0 is always vertical-critical for a pure quadratic
                fibre.extend(std::iter::repeat(0.0).take(extra.dim_fibre()));
                Ok((out, fibre))
            }
        }
    }

    /// Solve the fibre-critical system for each witness and certify the
    /// result against the assembled gradient.
    ///
    /// Each witness `z` is the input point of the composed map; the closed
    /// cascade produces the unique fibre-critical point over
    /// `q = (z + Phi_F z)/2`, whose image under `i_F = (q, d_q F)` lies on
    /// the `tau`-graph of the generated map. `residual` is the norm of the
    /// vertical derivative at the assembled point, computed through the
    /// independent gradient route.
    pub fn fibre_critical(&self, witnesses: &[DVector<f64>]) -> Result<Vec<FibreCriticalPoint>> {
        let nb = self.dim_base;
        let mut out = Vec::with_capacity(witnesses.len());
        for z in witnesses {
            if z.len() != nb {
                return Err(Error::DimensionMismatch(format!(
                    "witness has dimension {}, base is {nb}",
                    z.len()
                )));
            }
            let (z_out, fibre) = self.cascade(z)?;
            let q = (z + &z_out) / 2.0;
            let mut point = DVector::zeros(self.dim());
            point.rows_mut(0, nb).copy_from(&q);
            point
                .rows_mut(nb, self.dim_fibre)
                .copy_from(&DVector::from_vec(fibre));
            let grad = self.gradient(&point)?;
            let residual = grad.rows(nb, self.dim_fibre).norm();
            out.push(FibreCriticalPoint {
                image_q: q,
                image_p: grad.rows(0, nb).clone_owned(),
                point,
                witness: z.clone(),
                residual,
            });
        }
        Ok(out)
    }

    /// Nested structured-text description of the tree; primitives are
    /// referenced by id in build order.
    pub fn describe(&self) -> String {
        fn walk(gf: &ConicalGF, depth: usize, next_id: &mut usize, out: &mut String) {
            let pad = "  ".repeat(depth);
            match &gf.node {
                Node::Primitive(m) => {
                    out.push_str(&format!("{pad}primitive #{} dim {}\n", next_id, m.dim()));
                    *next_id += 1;
                }
                Node::Quadratic(q) => out.push_str(&format!(
                    "{pad}quadratic base {} fibre {}\n",
                    q.dim_base(),
                    q.dim_fibre()
                )),
                Node::Sharp(l, r) => {
                    out.push_str(&format!("{pad}sharp\n"));
                    walk(l, depth + 1, next_id, out);
                    walk(r, depth + 1, next_id, out);
                }
                Node::MultiSharp(c) => {
                    out.push_str(&format!("{pad}multisharp x{}\n", c.len()));
                    for child in c {
                        walk(child, depth + 1, next_id, out);
                    }
                }
                Node::Stabilize(c, q) => {
                    out.push_str(&format!("{pad}stabilize +{}\n", q.dim_fibre()));
                    walk(c, depth + 1, next_id, out);
                }
            }
        }
        let mut s = String::new();
        let mut id = 0;
        walk(self, 0, &mut id, &mut s);
        s
    }

    /// Max residuals of the three type invariants over seeded sphere
    /// samples: 2-homogeneity, gradient vs central finite differences, and
    /// (when a lens space is supplied) invariance under the diagonal deck
    /// action on every `R^{2n}` block.
    pub fn check_invariants(
        &self,
        lens: Option<&LensSpace>,
        samples: usize,
        seed: u64,
    ) -> Result<InvariantReport> {
        let dim = self.dim();
        let points = sampling::sphere_points(dim, samples, seed);
        let mut rep = InvariantReport::default();
        for x in &points {
            let (v, g) = self.value_and_gradient(x)?;
            let scale = 1.0 + v.abs();
            for lambda in [0.5, 2.0] {
                let scaled = self.value(&(x * lambda))?;
                let res = (scaled - lambda * lambda * v).abs() / (lambda * lambda * scale);
                rep.homogeneity = rep.homogeneity.max(res);
            }
            let h = 1e-5;
            for j in 0..dim {
                let mut xp = x.clone();
                let mut xm = x.clone();
                xp[j] += h;
                xm[j] -= h;
                let fd = (self.value(&xp)? - self.value(&xm)?) / (2.0 * h);
                rep.gradient = rep.gradient.max((fd - g[j]).abs() / scale);
            }
            if let Some(l) = lens {
                let n2 = l.ambient_dim();
                if dim % n2 != 0 {
                    return Err(Error::DimensionMismatch(format!(
                        "total dimension {dim} is not a stack of R^{n2} blocks"
                    )));
                }
                let mut gx = x.clone();
                for blk in 0..dim / n2 {
                    let moved = l.act(1, &x.rows(blk * n2, n2).clone_owned());
                    gx.rows_mut(blk * n2, n2).copy_from(&moved);
                }
                let res = (self.value(&gx)? - v).abs() / scale;
                rep.invariance = rep.invariance.max(res);
            }
        }
        Ok(rep)
    }
}

/// Worst-case residuals from [`ConicalGF::check_invariants`].
#[derive(Debug, Default, Clone, Copy)]
pub struct InvariantReport {
    pub homogeneity: f64,
    pub gradient: f64,
    pub invariance: f64,
}

/// A solved point of the vertical-derivative system.
#[derive(Debug, Clone)]
pub struct FibreCriticalPoint {
    /// Full coordinates `(q; fibre)` in the tree's layout.
    pub point: DVector<f64>,
    /// The input point of the composed map this solution came from.
    pub witness: DVector<f64>,
    /// Base coordinate of the `i_F` image.
    pub image_q: DVector<f64>,
    /// Momentum coordinate of the `i_F` image, `d_q F` at the point.
    pub image_p: DVector<f64>,
    /// Vertical-derivative norm at the point (independent certification).
    pub residual: f64,
}

fn stack(a: &DVector<f64>, b: &DVector<f64>) -> DVector<f64> {
    let mut v = DVector::zeros(a.len() + b.len());
    v.rows_mut(0, a.len()).copy_from(a);
    v.rows_mut(a.len(), b.len()).copy_from(b);
    v
}

/// Newton solve of the midpoint equation `(z + Phi z)/2 = q`, seeded at
/// `z = q`.
fn solve_midpoint(map: &dyn ConicalMap, q: &DVector<f64>) -> Result<DVector<f64>> {
    let dim = map.dim();
    let tol = 1e-12 * (1.0 + q.norm());
    let mut z = q.clone();
    for _ in 0..50 {
        let g = (&z + map.eval(&z)) / 2.0 - q;
        if g.norm() <= tol {
            // reject "solutions" across a vertical tangency: a C1-small map
            // keeps the midpoint linearization uniformly invertible
            let jac = (DMatrix::identity(dim, dim) + map.jacobian(&z)) / 2.0;
            let sigma =
                jac.svd(false, false).singular_values.iter().fold(f64::INFINITY, |a, &b| a.min(b));
            if sigma <= 1e-6 {
                return Err(Error::NotGraphical { got: sigma, required: 1e-6 });
            }
            return Ok(z);
        }
        let jac = (DMatrix::identity(dim, dim) + map.jacobian(&z)) / 2.0;
        let step = jac.lu().solve(&g).ok_or_else(|| {
            Error::Numerical(format!(
                "midpoint equation has singular linearization at q = {:?}",
                q.as_slice()
            ))
        })?;
        z -= step;
    }
    Err(Error::Numerical(format!(
        "midpoint Newton did not converge at q = {:?} (map not C1-small?)",
        q.as_slice()
    )))
}

/// Quasi-additivity residual: embeds the direct-sum domain by
/// `iota(zeta_1, zeta_2, nu_1, nu_2) = (zeta_1; zeta_1, zeta_2, nu_1, nu_2)`
/// and returns the max over seeded unit samples of
/// `|(F1 # F2)(iota x) - F1(zeta_1, nu_1) - F2(zeta_2, nu_2)|`.
///
/// The coupling term vanishes identically on the image of `iota` (there
/// `zeta_1 - q = 0`), so the residual is pure evaluation noise.
pub fn quasiadd_embed(
    f1: &ConicalGF,
    f2: &ConicalGF,
    samples: usize,
    seed: u64,
) -> Result<f64> {
    let nb = f1.dim_base();
    let sharp = f1.clone().sharp(f2.clone())?;
    let (fib1, fib2) = (f1.dim_fibre(), f2.dim_fibre());
    let points = sampling::sphere_points(2 * nb + fib1 + fib2, samples, seed);
    let mut worst = 0.0f64;
    for x in &points {
        let zeta1 = x.rows(0, nb).clone_owned();
        let zeta2 = x.rows(nb, nb).clone_owned();
        let nu1 = x.rows(2 * nb, fib1).clone_owned();
        let nu2 = x.rows(2 * nb + fib1, fib2).clone_owned();
        let mut embedded = DVector::zeros(sharp.dim());
        embedded.rows_mut(0, nb).copy_from(&zeta1);
        embedded.rows_mut(nb, nb).copy_from(&zeta1);
        embedded.rows_mut(2 * nb, nb).copy_from(&zeta2);
        embedded.rows_mut(3 * nb, fib1).copy_from(&nu1);
        embedded.rows_mut(3 * nb + fib1, fib2).copy_from(&nu2);
        let lhs = sharp.value(&embedded)?;
        let rhs = f1.value(&stack(&zeta1, &nu1))? + f2.value(&stack(&zeta2, &nu2))?;
        worst = worst.max((lhs - rhs).abs());
    }
    Ok(worst)
}

/// Monotonicity report for the canonical family of generating functions of
/// a contact flow.
#[derive(Debug, Clone)]
pub struct MonotoneReport {
    /// Smallest sampled `dF_t/dt`.
    pub min_derivative: f64,
    /// Largest sampled `dF_t/dt`.
    pub max_derivative: f64,
    /// Magnitude scale of the sampled values (for relative thresholds).
    pub scale: f64,
    pub samples: usize,
}

/// Sample the `t`-derivative of the canonical family `F_t` generating the
/// flow of `ham` up to `total_time`.
///
/// The family freezes a decomposition `0 = t_0 < ... < t_K` of the full
/// interval (so the fibre dimension is constant in `t`) and sets
/// `F_t = GF(piece_1(t)) # ... # GF(piece_K(t))` with
/// `piece_j(t)` the flow over `[t_j, clamp(t, t_j, t_{j+1})]`. The
/// derivative is sampled by central differences in `t` at seeded sphere
/// points of the total space; when the Hamiltonian is non-negative the
/// family is non-decreasing.
pub fn monotone_family_check(
    ham: &crate::contact::Hamiltonian,
    dim: usize,
    total_time: f64,
    samples: usize,
    seed: u64,
) -> Result<MonotoneReport> {
    if !(total_time > 0.0) {
        return Err(Error::Numerical("total_time must be positive".into()));
    }
    let breaks = crate::contact::decompose(ham, dim, total_time, &Default::default())?;
    let family = |t: f64| -> Result<ConicalGF> {
        let mut tree: Option<ConicalGF> = None;
        for win in breaks.windows(2) {
            let (lo, hi) = (win[0], win[1]);
            let dur = t.clamp(lo, hi) - lo;
            let piece = ConicalGF::primitive(crate::contact::FlowMap {
                ham: ham.clone(),
                duration: dur,
                dim,
            });
            tree = Some(match tree {
                None => piece,
                Some(acc) => acc.sharp(piece)?,
            });
        }
        Ok(tree.expect("positive total_time yields at least one piece"))
    };
    let total_dim = family(0.0)?.dim();
    let points = sampling::sphere_points(total_dim, samples, seed);
    let mut rng = sampling::rng(seed ^ 0x6d6f6e6f);
    let dt = 1e-4 * total_time;
    let mut report = MonotoneReport {
        min_derivative: f64::INFINITY,
        max_derivative: f64::NEG_INFINITY,
        scale: 0.0,
        samples: 0,
    };
    use rand::Rng;
    for x in &points {
        // stay a step away from the breakpoints, where t -> F_t has corners
        let t = loop {
            let c: f64 = rng.gen_range(0.0..total_time);
            if breaks.iter().all(|b| (c - b).abs() > 2.0 * dt) {
                break c;
            }
        };
        let plus = family(t + dt)?.value(x)?;
        let minus = family(t - dt)?.value(x)?;
        let d = (plus - minus) / (2.0 * dt);
        report.min_derivative = report.min_derivative.min(d);
        report.max_derivative = report.max_derivative.max(d);
        report.scale = report.scale.max(plus.abs()).max(1.0);
        report.samples += 1;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contact::{FlowMap, Hamiltonian, LinearMap};
    use crate::lens::rotation;
    use crate::quadform::{multisharp_quad, reeb_quad, sharp_quad};
    use approx::assert_relative_eq;
    use std::f64::consts::{PI, TAU};

    fn reeb_flow(dim: usize, duration: f64) -> FlowMap {
        FlowMap { ham: Hamiltonian::reeb(), duration, dim }
    }

    #[test]
    fn identity_primitive_is_the_zero_function() {
        let f = ConicalGF::primitive(LinearMap(DMatrix::identity(4, 4)));
        for x in sampling::sphere_points(4, 10, 3) {
            assert!(f.value(&x).unwrap().abs() < 1e-13);
            assert!(f.gradient(&x).unwrap().norm() < 1e-13);
        }
    }

    #[test]
    fn rotation_primitive_is_the_tangent_form() {
        // one third of a full turn: F(q) = tan(pi/3) |q|^2
        let f = ConicalGF::primitive(LinearMap(rotation(2, TAU / 3.0)));
        let quad = ConicalGF::quadratic(reeb_quad(2, 1.0 / 3.0).unwrap());
        for x in sampling::sphere_points(4, 20, 5) {
            let expect = (PI / 3.0).tan() * x.norm_squared();
            assert_relative_eq!(f.value(&x).unwrap(), expect, epsilon = 1e-10);
            assert_relative_eq!(quad.value(&x).unwrap(), expect, epsilon = 1e-12);
            assert_relative_eq!(
                f.gradient(&x).unwrap(),
                quad.gradient(&x).unwrap(),
                epsilon = 1e-10
            );
        }
    }

    #[test]
    fn flow_primitive_matches_the_linear_one() {
        let f = ConicalGF::primitive(reeb_flow(2, TAU / 3.0));
        for x in sampling::sphere_points(2, 8, 7) {
            let expect = (PI / 3.0).tan() * x.norm_squared();
            assert_relative_eq!(f.value(&x).unwrap(), expect, epsilon = 1e-7);
        }
    }

    #[test]
    fn primitive_image_is_the_tau_graph() {
        // a genuinely nonlinear C1-small map
        let map = FlowMap { ham: Hamiltonian::perturbed_reeb(0.08), duration: 0.4, dim: 4 };
        let f = ConicalGF::primitive(map.clone());
        for z in sampling::sphere_points(4, 30, 11) {
            let fz = crate::contact::flow(&map.ham, map.duration, &z);
            let (q, p) = crate::lens::tau(&z, &fz);
            assert!((f.gradient(&q).unwrap() - &p).norm() < 1e-7);
        }
    }

    #[test]
    fn newton_fails_cleanly_far_from_the_identity() {
        // the half turn (both in exact arithmetic and up to the sin(pi)
        // floating-point dust) has no graphical generating function
        for phi in [rotation(1, PI), DMatrix::identity(2, 2) * -1.0] {
            let f = ConicalGF::primitive(LinearMap(phi));
            let x = DVector::from_column_slice(&[1.0, 0.0]);
            assert!(f.value(&x).is_err());
        }
    }

    #[test]
    fn sharp_of_zeros_is_the_pure_coupling() {
        let z1 = ConicalGF::quadratic(QuadForm::zero(2));
        let z2 = ConicalGF::quadratic(QuadForm::zero(2));
        let s = z1.sharp(z2).unwrap();
        for x in sampling::sphere_points(6, 25, 13) {
            let q = x.rows(0, 2).clone_owned();
            let zeta1 = x.rows(2, 2).clone_owned();
            let zeta2 = x.rows(4, 2).clone_owned();
            let expect = -2.0 * pair_i(&(&zeta2 - &q), &(&zeta1 - &q));
            assert_relative_eq!(s.value(&x).unwrap(), expect, epsilon = 1e-14);
        }
    }

    #[test]
    fn quadratic_trees_agree_with_matrix_assembly() {
        let q1 = reeb_quad(1, 0.13).unwrap();
        let q2 = reeb_quad(1, -0.21).unwrap();
        let tree = ConicalGF::quadratic(q1.clone())
            .sharp(ConicalGF::quadratic(q2.clone()))
            .unwrap();
        let matrix = sharp_quad(&q1, &q2).unwrap();
        for x in sampling::sphere_points(matrix.dim(), 50, 17) {
            assert_relative_eq!(tree.value(&x).unwrap(), matrix.value(&x), epsilon = 1e-12);
            assert_relative_eq!(
                tree.gradient(&x).unwrap(),
                matrix.gradient(&x),
                epsilon = 1e-12
            );
        }
        let children: Vec<ConicalGF> = (0..4)
            .map(|i| ConicalGF::quadratic(reeb_quad(1, 0.05 * (i as f64 + 1.0)).unwrap()))
            .collect();
        let forms: Vec<QuadForm> =
            (0..4).map(|i| reeb_quad(1, 0.05 * (i as f64 + 1.0)).unwrap()).collect();
        let tree = ConicalGF::multisharp(children).unwrap();
        let matrix = multisharp_quad(&forms).unwrap();
        for x in sampling::sphere_points(matrix.dim(), 50, 19) {
            assert_relative_eq!(tree.value(&x).unwrap(), matrix.value(&x), epsilon = 1e-12);
            assert_relative_eq!(
                tree.gradient(&x).unwrap(),
                matrix.gradient(&x),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn fibre_critical_points_track_the_composition() {
        // two flow pieces of a third of a turn each
        let a = ConicalGF::primitive(reeb_flow(2, TAU / 3.0));
        let b = ConicalGF::primitive(reeb_flow(2, TAU / 3.0));
        let s = a.sharp(b).unwrap();
        let witnesses = sampling::sphere_points(2, 12, 23);
        let pts = s.fibre_critical(&witnesses).unwrap();
        let two_thirds = rotation(1, 2.0 * TAU / 3.0);
        for (z, fc) in witnesses.iter().zip(&pts) {
            assert!(fc.residual < 1e-9, "vertical residual {}", fc.residual);
            let phi_z = &two_thirds * z;
            let (q, p) = crate::lens::tau(z, &phi_z);
            assert!((&fc.image_q - q).norm() < 1e-8);
            assert!((&fc.image_p - p).norm() < 1e-8);
            // the interior relations: zeta_1 = (z_1 + z_2)/2 with z_2 = Phi1 z_1
            let z2 = rotation(1, TAU / 3.0) * z;
            let zeta1 = fc.point.rows(2, 2).clone_owned();
            assert!((zeta1 - (z + &z2) / 2.0).norm() < 1e-8);
        }
    }

    #[test]
    fn multisharp_four_eighth_turns_generate_the_half_turn() {
        let children: Vec<ConicalGF> =
            (0..4).map(|_| ConicalGF::primitive(reeb_flow(2, TAU / 8.0))).collect();
        let m = ConicalGF::multisharp(children).unwrap();
        let witnesses = sampling::sphere_points(2, 10, 29);
        let pts = m.fibre_critical(&witnesses).unwrap();
        for (z, fc) in witnesses.iter().zip(&pts) {
            assert!((m.apply_generated(z).unwrap() + z).norm() < 1e-8);
            assert!(fc.residual < 1e-9);
            let (q, p) = crate::lens::tau(z, &(-z));
            assert!((&fc.image_q - q).norm() < 1e-8);
            assert!((&fc.image_p - p).norm() < 1e-8);
        }
    }

    #[test]
    fn reparenthesized_trees_generate_the_same_graph() {
        let piece = || ConicalGF::primitive(reeb_flow(2, 0.9));
        let left = piece().sharp(piece()).unwrap().sharp(piece()).unwrap();
        let right = piece().sharp(piece().sharp(piece()).unwrap()).unwrap();
        let witnesses = sampling::sphere_points(2, 8, 31);
        let lp = left.fibre_critical(&witnesses).unwrap();
        let rp = right.fibre_critical(&witnesses).unwrap();
        for (l, r) in lp.iter().zip(&rp) {
            assert!((&l.image_q - &r.image_q).norm() < 1e-9);
            assert!((&l.image_p - &r.image_p).norm() < 1e-9);
            assert!(l.residual < 1e-9 && r.residual < 1e-9);
        }
    }

    #[test]
    fn stabilization_preserves_the_generated_graph() {
        let mut extra = DMatrix::zeros(2, 2);
        extra[(0, 0)] = 1.0;
        extra[(1, 1)] = -3.0;
        let q = QuadForm::new(0, 2, extra).unwrap();
        let base = ConicalGF::primitive(reeb_flow(2, 0.7));
        let stab = base.clone().stabilize(q).unwrap();
        assert_eq!(stab.dim_fibre(), 2);
        let witnesses = sampling::sphere_points(2, 6, 37);
        let a = base.fibre_critical(&witnesses).unwrap();
        let b = stab.fibre_critical(&witnesses).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((&x.image_q - &y.image_q).norm() < 1e-12);
            assert!((&x.image_p - &y.image_p).norm() < 1e-12);
            assert!(y.residual < 1e-9);
        }
    }

    #[test]
    fn quasiadditivity_residual_is_noise_and_scale_free() {
        // trivial case: both zero
        let z = || ConicalGF::quadratic(QuadForm::zero(2));
        assert_eq!(quasiadd_embed(&z(), &z(), 100, 41).unwrap(), 0.0);

        // random quadratics, fibreless and fibred
        let mut rng = sampling::rng(43);
        for _ in 0..5 {
            let m1 = sampling::symmetric_matrix(&mut rng, 4, 1.0);
            let m2 = sampling::symmetric_matrix(&mut rng, 2, 1.0);
            let f1 = ConicalGF::quadratic(QuadForm::new(2, 2, m1).unwrap());
            let f2 = ConicalGF::quadratic(QuadForm::new(2, 0, m2).unwrap());
            assert!(quasiadd_embed(&f1, &f2, 1000, 47).unwrap() < 1e-12);
        }

        // scale independence: residual of scaled quadratics stays relative
        let m = DMatrix::identity(2, 2) * 1e6;
        let big = ConicalGF::quadratic(QuadForm::new(2, 0, m).unwrap());
        assert!(quasiadd_embed(&big, &big, 200, 53).unwrap() < 1e-12 * 1e6);
    }

    #[test]
    fn invariants_hold_on_flow_trees() {
        let lens = LensSpace::new(3, vec![1, 1]).unwrap();
        let ham = Hamiltonian::perturbed_reeb(0.1);
        let a = ConicalGF::primitive(FlowMap { ham: ham.clone(), duration: 0.5, dim: 4 });
        let b = ConicalGF::primitive(FlowMap { ham, duration: 0.3, dim: 4 });
        let tree = a.sharp(b).unwrap();
        let rep = tree.check_invariants(Some(&lens), 60, 59).unwrap();
        assert!(rep.homogeneity < 1e-8, "homogeneity {}", rep.homogeneity);
        assert!(rep.invariance < 1e-8, "invariance {}", rep.invariance);
        assert!(rep.gradient < 1e-6, "gradient {}", rep.gradient);
    }

    #[test]
    fn invariants_hold_on_rotation_trees_with_unequal_weights() {
        let lens = LensSpace::new(5, vec![1, 2]).unwrap();
        let tree = ConicalGF::primitive(reeb_flow(4, 0.8))
            .sharp(ConicalGF::quadratic(reeb_quad(2, 0.2).unwrap()))
            .unwrap();
        let rep = tree.check_invariants(Some(&lens), 60, 61).unwrap();
        assert!(rep.homogeneity < 1e-8);
        assert!(rep.invariance < 1e-8);
        assert!(rep.gradient < 1e-6);
    }

    #[test]
    fn monotone_in_the_hamiltonian_sign() {
        let reeb = Hamiltonian::reeb();
        let rep = monotone_family_check(&reeb, 2, TAU, 25, 67).unwrap();
        assert!(rep.min_derivative > 0.0, "min {}", rep.min_derivative);

        let zero = Hamiltonian { constant: 0.0, terms: vec![] };
        let rep = monotone_family_check(&zero, 2, 1.0, 15, 71).unwrap();
        assert!(rep.min_derivative.abs() < 1e-9 && rep.max_derivative.abs() < 1e-9);

        let minus = Hamiltonian { constant: -1.0, terms: vec![] };
        let rep = monotone_family_check(&minus, 2, TAU, 25, 73).unwrap();
        assert!(rep.max_derivative < 0.0, "max {}", rep.max_derivative);
    }

    #[test]
    fn describe_references_primitives_by_id() {
        let tree = ConicalGF::primitive(reeb_flow(2, 0.1))
            .sharp(ConicalGF::primitive(reeb_flow(2, 0.2)))
            .unwrap()
            .stabilize(QuadForm::new(0, 2, DMatrix::identity(2, 2)).unwrap())
            .unwrap();
        let text = tree.describe();
        assert!(text.contains("stabilize +2"));
        assert!(text.contains("sharp"));
        assert!(text.contains("primitive #0 dim 2"));
        assert!(text.contains("primitive #1 dim 2"));
    }
}
