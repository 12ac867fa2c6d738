//! Quadratic generating forms and their inertia calculus.
//!
//! A `QuadForm` is a symmetric form `Q(v) = <v, M v> / 2` on coordinates
//! `(q; nu)` split into a base block of dimension `2n` and a fibre block.
//! Three operations make these forms a calculus:
//!
//! * [`reeb_quad`] produces the fibreless primitive `tan(pi t) |q|^2` of the
//!   rotation `e^{2 pi i t}`, and [`quad_primitive_of_linear`] the analogue
//!   for any `C^1`-small linear symplectomorphism;
//! * [`sharp_quad`] and [`multisharp_quad`] compose forms so that the
//!   generated maps compose;
//! * [`QuadForm::index_i`] counts non-positive eigenvalues — the integer all
//!   index computations downstream reduce to.
//!
//! Everything here is exact linear algebra; tolerances appear only in the
//! symmetry/invariance validation and the eigenvalue zero-band.

use nalgebra::{DMatrix, DVector};

use crate::lens::{i_matrix, LensSpace};
use crate::{Error, Result};

/// Relative half-width of the eigenvalue band counted as kernel by
/// [`QuadForm::index_i`].
pub const KERNEL_BAND: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct QuadForm {
    dim_base: usize,
    dim_fibre: usize,
    mat: DMatrix<f64>,
    lens: Option<LensSpace>,
}

impl QuadForm {
    /// Wrap a symmetric matrix as a form with the given base/fibre split.
    pub fn new(dim_base: usize, dim_fibre: usize, mat: DMatrix<f64>) -> Result<Self> {
        let dim = dim_base + dim_fibre;
        if mat.nrows() != dim || mat.ncols() != dim {
            return Err(Error::DimensionMismatch(format!(
                "matrix is {}x{}, want {dim}x{dim}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        let asym = (&mat - mat.transpose()).norm();
        if asym > 1e-12 * (1.0 + mat.norm()) {
            return Err(Error::NotSymmetric(asym));
        }
        // store the exactly symmetric part
        let mat = (&mat + mat.transpose()) / 2.0;
        Ok(QuadForm { dim_base, dim_fibre, mat, lens: None })
    }

    /// The zero form on a fibreless base (generates the identity).
    pub fn zero(dim_base: usize) -> Self {
        QuadForm {
            dim_base,
            dim_fibre: 0,
            mat: DMatrix::zeros(dim_base, dim_base),
            lens: None,
        }
    }

    /// Attach a lens space and validate `Z_k`-invariance of the form under
    /// the block-diagonal deck action on every `R^{2n}` factor. Requires the
    /// standard shape (base `2n`, fibre a multiple of `2n`).
    pub fn with_lens(mut self, lens: LensSpace) -> Result<Self> {
        let n2 = lens.ambient_dim();
        if self.dim_base != n2 || self.dim_fibre % n2 != 0 {
            return Err(Error::DimensionMismatch(format!(
                "form of shape {}+{} is not made of R^{n2} factors",
                self.dim_base, self.dim_fibre
            )));
        }
        let r = self.deck_action(&lens, 1);
        let violation = (r.transpose() * &self.mat * &r - &self.mat).norm();
        if violation > 1e-12 * (1.0 + self.mat.norm()) {
            return Err(Error::NotInvariant(violation));
        }
        self.lens = Some(lens);
        Ok(self)
    }

    fn deck_action(&self, lens: &LensSpace, m: i64) -> DMatrix<f64> {
        let n2 = lens.ambient_dim();
        let copies = (self.dim_base + self.dim_fibre) / n2;
        let g = lens.deck(m);
        let mut r = DMatrix::zeros(copies * n2, copies * n2);
        for c in 0..copies {
            r.view_mut((c * n2, c * n2), (n2, n2)).copy_from(&g);
        }
        r
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

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.mat
    }

    pub fn lens(&self) -> Option<&LensSpace> {
        self.lens.as_ref()
    }

    /// `Q(v) = <v, M v> / 2`.
    pub fn value(&self, v: &DVector<f64>) -> f64 {
        0.5 * (v.transpose() * &self.mat * v)[(0, 0)]
    }

    /// `grad Q(v) = M v`.
    pub fn gradient(&self, v: &DVector<f64>) -> DVector<f64> {
        &self.mat * v
    }

    /// Signature `(negative, zero, positive)` with the relative kernel band
    /// [`KERNEL_BAND`].
    pub fn inertia(&self) -> (usize, usize, usize) {
        if self.dim() == 0 {
            return (0, 0, 0);
        }
        let eigen = self.mat.clone().symmetric_eigen();
        let radius = eigen.eigenvalues.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
        let tol = KERNEL_BAND * radius;
        let mut neg = 0;
        let mut zero = 0;
        let mut pos = 0;
        for &l in eigen.eigenvalues.iter() {
            if l < -tol {
                neg += 1;
            } else if l > tol {
                pos += 1;
            } else {
                zero += 1;
            }
        }
        (neg, zero, pos)
    }

    /// `i(Q)`: the maximal dimension of a subspace on which `Q` is negative
    /// semi-definite, i.e. the number of non-positive eigenvalues (kernel
    /// included).
    pub fn index_i(&self) -> usize {
        let (neg, zero, _) = self.inertia();
        neg + zero
    }

    /// Direct sum `Q (+) Q'` on the concatenated base and fibre blocks;
    /// eigenvalues are the disjoint union, so `i` adds exactly.
    pub fn direct_sum(&self, other: &QuadForm) -> QuadForm {
        let b = self.dim_base + other.dim_base;
        let f = self.dim_fibre + other.dim_fibre;
        let dim = b + f;
        let mut m = DMatrix::zeros(dim, dim);
        // output layout: [base1, base2, fibre1, fibre2]
        for (form, base_off, fibre_off) in
            [(self, 0, b), (other, self.dim_base, b + self.dim_fibre)]
        {
            let (fb, ff) = (form.dim_base, form.dim_fibre);
            for &((r0, rl, rs), (c0, cl, cs)) in &[
                ((base_off, fb, 0), (base_off, fb, 0)),
                ((base_off, fb, 0), (fibre_off, ff, fb)),
                ((fibre_off, ff, fb), (base_off, fb, 0)),
                ((fibre_off, ff, fb), (fibre_off, ff, fb)),
            ] {
                if rl == 0 || cl == 0 {
                    continue;
                }
                let src = form.mat.view((rs, cs), (rl, cl));
                m.view_mut((r0, c0), (rl, cl)).copy_from(&src);
            }
        }
        QuadForm { dim_base: b, dim_fibre: f, mat: m, lens: self.lens.clone() }
    }

    /// The linear symplectomorphism whose `tau`-graph is the fibre-critical
    /// image of this form (for fibred forms the fibre must be nondegenerate).
    ///
    /// With `N` the Schur complement of the fibre block onto the base, the
    /// graph is `p = N q` and the generated map is
    /// `Phi = (I + J N / 2)(I - J N / 2)^{-1}`.
    pub fn generated_linear_map(&self) -> Result<DMatrix<f64>> {
        let nb = self.dim_base;
        let nf = self.dim_fibre;
        let a = self.mat.view((0, 0), (nb, nb)).clone_owned();
        let n = if nf == 0 {
            a
        } else {
            let b = self.mat.view((0, nb), (nb, nf)).clone_owned();
            let c = self.mat.view((nb, nb), (nf, nf)).clone_owned();
            let c_inv = c.clone().try_inverse().ok_or_else(|| {
                Error::SingularFibre("fibre block is not invertible".into())
            })?;
            &a - &b * c_inv * b.transpose()
        };
        let j = i_matrix(nb / 2);
        let plus = DMatrix::identity(nb, nb) + &j * &n / 2.0;
        let minus = DMatrix::identity(nb, nb) - &j * &n / 2.0;
        let minus_inv = minus
            .try_inverse()
            .ok_or_else(|| Error::Numerical("graph is vertical: I - JN/2 singular".into()))?;
        Ok(plus * minus_inv)
    }

    /// Reduce a form that generates the identity to its pure fibre part.
    ///
    /// Writing the matrix in blocks `[[a, b], [b^T, c]]` over (base, fibre),
    /// the preconditions are `c` invertible and vanishing Schur complement
    /// `a - b c^{-1} b^T = 0` (to 1e-8, relative); the fibre-preserving shear
    /// `Psi(zeta, nu) = (zeta, nu - c^{-1} b^T zeta)` then makes the form
    /// independent of the base variable (asserted to 1e-9), leaving the fibre
    /// form `<nu, c nu>/2`. Returns `(fibre_form, Psi)`; the congruence by
    /// `Psi` preserves the full form's inertia, and `Psi` commutes with the
    /// diagonal deck action.
    pub fn reduce_identity_form(&self) -> Result<(QuadForm, DMatrix<f64>)> {
        let nb = self.dim_base;
        let nf = self.dim_fibre;
        let scale = 1.0 + self.mat.norm();
        if nf == 0 {
            return Err(Error::NotIdentityForm(
                "form has no fibre variables to reduce onto".into(),
            ));
        }
        let a = self.mat.view((0, 0), (nb, nb)).clone_owned();
        let b = self.mat.view((0, nb), (nb, nf)).clone_owned();
        let c = self.mat.view((nb, nb), (nf, nf)).clone_owned();
        let c_svd = c.clone().svd(false, false);
        let sigma_min = c_svd.singular_values.iter().fold(f64::INFINITY, |x, &y| x.min(y));
        if sigma_min <= 1e-8 * scale {
            return Err(Error::SingularFibre(format!(
                "fibre block has smallest singular value {sigma_min:.3e}"
            )));
        }
        let c_inv = c
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::SingularFibre("fibre block inversion failed".into()))?;
        let schur = &a - &b * &c_inv * b.transpose();
        if schur.norm() > 1e-8 * scale {
            return Err(Error::NotIdentityForm(format!(
                "Schur complement has norm {:.3e}",
                schur.norm()
            )));
        }
        let dim = nb + nf;
        let mut psi = DMatrix::identity(dim, dim);
        psi.view_mut((nb, 0), (nf, nb))
            .copy_from(&(-(&c_inv) * b.transpose()));
        let reduced = psi.transpose() * &self.mat * &psi;
        let corner = reduced.view((0, 0), (nb, dim)).norm();
        assert!(
            corner <= 1e-9 * scale,
            "sheared form still depends on the base variable ({corner:.3e})"
        );
        let fibre_form = QuadForm { dim_base: 0, dim_fibre: nf, mat: c, lens: None };
        Ok((fibre_form, psi))
    }
}

/// `Q_t(q) = tan(pi t) |q|^2` on `R^{2n}`: the quadratic primitive of the
/// rotation `e^{2 pi i t}`, defined for `|t| < 1/2` (at the half turn the
/// graph ceases to be a section).
pub fn reeb_quad(n: usize, t: f64) -> Result<QuadForm> {
    let denom = 1.0 + (std::f64::consts::TAU * t).cos();
    if !(denom > 1e-9) || t.abs() >= 0.5 {
        return Err(Error::Numerical(format!(
            "rotation parameter t = {t} is outside (-1/2, 1/2): no graphical primitive"
        )));
    }
    let lambda = (std::f64::consts::PI * t).tan();
    Ok(QuadForm {
        dim_base: 2 * n,
        dim_fibre: 0,
        mat: DMatrix::identity(2 * n, 2 * n) * (2.0 * lambda),
        lens: None,
    })
}

/// The fibreless quadratic primitive of a `C^1`-small linear
/// symplectomorphism: `M = 2 J (I - Phi)(I + Phi)^{-1}`, which is symmetric
/// exactly when `Phi` preserves the symplectic form.
pub fn quad_primitive_of_linear(phi: &DMatrix<f64>) -> Result<QuadForm> {
    let dim = phi.nrows();
    if dim % 2 != 0 || phi.ncols() != dim {
        return Err(Error::DimensionMismatch(format!(
            "expected a square even-dimensional matrix, got {}x{}",
            phi.nrows(),
            phi.ncols()
        )));
    }
    let half = (DMatrix::identity(dim, dim) + phi) / 2.0;
    let sigma_min = half
        .clone()
        .svd(false, false)
        .singular_values
        .iter()
        .fold(f64::INFINITY, |a, &b| a.min(b));
    if sigma_min <= crate::contact::GRAPHICAL_DELTA {
        return Err(Error::NotGraphical {
            got: sigma_min,
            required: crate::contact::GRAPHICAL_DELTA,
        });
    }
    let inv = (DMatrix::identity(dim, dim) + phi)
        .try_inverse()
        .expect("sigma_min > 0 guarantees invertibility");
    let m = i_matrix(dim / 2) * (DMatrix::identity(dim, dim) - phi) * inv * 2.0;
    QuadForm::new(dim, 0, m)
}

fn add_pairing(m: &mut DMatrix<f64>, n: usize, row: usize, col: usize, coeff: f64) {
    // adds coeff * <v_row, i v_col> = coeff * v_row^T J v_col to Q = v^T M v / 2
    let j = i_matrix(n);
    let mut block = m.view_mut((row, col), (2 * n, 2 * n));
    block += &j * coeff;
    let mut block_t = m.view_mut((col, row), (2 * n, 2 * n));
    block_t += j.transpose() * coeff;
}

/// The `sharp` composition of quadratic forms:
///
/// ```text
/// (Q1 # Q2)(q; zeta_1, zeta_2, nu_1, nu_2)
///     = Q1(zeta_1, nu_1) + Q2(zeta_2, nu_2) - 2 <zeta_2 - q, i (zeta_1 - q)>,
/// ```
///
/// which generates `Phi_2 . Phi_1` when `Q_j` generates `Phi_j`. The fibre
/// coordinates are ordered `(zeta_1, zeta_2, nu_1, nu_2)`.
pub fn sharp_quad(q1: &QuadForm, q2: &QuadForm) -> Result<QuadForm> {
    if q1.dim_base != q2.dim_base {
        return Err(Error::DimensionMismatch(format!(
            "base dimensions differ: {} vs {}",
            q1.dim_base, q2.dim_base
        )));
    }
    let nb = q1.dim_base;
    let n = nb / 2;
    let (f1, f2) = (q1.dim_fibre, q2.dim_fibre);
    let dim = nb + 2 * nb + f1 + f2;
    // offsets in the new coordinate layout
    let (oq, oz1, oz2, on1, on2) = (0, nb, 2 * nb, 3 * nb, 3 * nb + f1);
    let mut m = DMatrix::zeros(dim, dim);

    // embed Q1 on (zeta_1, nu_1) and Q2 on (zeta_2, nu_2)
    for (form, oz, on) in [(q1, oz1, on1), (q2, oz2, on2)] {
        let src = &form.mat;
        let fb = form.dim_base;
        let ff = form.dim_fibre;
        m.view_mut((oz, oz), (fb, fb)).copy_from(&src.view((0, 0), (fb, fb)));
        if ff > 0 {
            m.view_mut((oz, on), (fb, ff)).copy_from(&src.view((0, fb), (fb, ff)));
            m.view_mut((on, oz), (ff, fb)).copy_from(&src.view((fb, 0), (ff, fb)));
            m.view_mut((on, on), (ff, ff)).copy_from(&src.view((fb, fb), (ff, ff)));
        }
    }

    // the coupling -2<zeta_2 - q, i(zeta_1 - q)> expands to
    // -2<zeta_2, i zeta_1> + 2<zeta_2, i q> + 2<q, i zeta_1>
    add_pairing(&mut m, n, oz2, oz1, -2.0);
    add_pairing(&mut m, n, oz2, oq, 2.0);
    add_pairing(&mut m, n, oq, oz1, 2.0);

    let lens = q1.lens.clone().or_else(|| q2.lens.clone());
    let mut out = QuadForm { dim_base: nb, dim_fibre: dim - nb, mat: m, lens: None };
    if let Some(l) = lens {
        out = out.with_lens(l)?;
    }
    Ok(out)
}

/// The flat `N`-factor composition (`N` even, all factors fibreless):
///
/// ```text
/// F(q; zeta_1..zeta_N) = sum_j Q_j(zeta_j) + h(q, zeta),
/// h = 2 sum_j (-1)^j <zeta_j, i q>
///   + 2 sum_{j<l} (-1)^{j+l-1} <zeta_j, i zeta_l>,
/// ```
///
/// generating `Phi_N . ... . Phi_1`.
pub fn multisharp_quad(forms: &[QuadForm]) -> Result<QuadForm> {
    let count = forms.len();
    if count == 0 || count % 2 != 0 {
        return Err(Error::DimensionMismatch(format!(
            "multisharp needs a positive even number of factors, got {count}"
        )));
    }
    let nb = forms[0].dim_base;
    let n = nb / 2;
    for f in forms {
        if f.dim_base != nb {
            return Err(Error::DimensionMismatch("mixed base dimensions".into()));
        }
        if f.dim_fibre != 0 {
            return Err(Error::DimensionMismatch(
                "multisharp factors must be fibreless".into(),
            ));
        }
    }
    let dim = nb * (count + 1);
    let mut m = DMatrix::zeros(dim, dim);
    let off = |j: usize| nb * j; // j = 0 is q, j >= 1 is zeta_j
    for (idx, f) in forms.iter().enumerate() {
        let j = idx + 1;
        m.view_mut((off(j), off(j)), (nb, nb)).copy_from(&f.mat);
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        add_pairing(&mut m, n, off(j), off(0), 2.0 * sign);
    }
    for j in 1..=count {
        for l in (j + 1)..=count {
            let sign = if (j + l) % 2 == 0 { -1.0 } else { 1.0 };
            add_pairing(&mut m, n, off(j), off(l), 2.0 * sign);
        }
    }
    let lens = forms.iter().find_map(|f| f.lens.clone());
    let mut out = QuadForm { dim_base: nb, dim_fibre: dim - nb, mat: m, lens: None };
    if let Some(l) = lens {
        out = out.with_lens(l)?;
    }
    Ok(out)
}

/// Serialize in the text format `quadform n N k` followed by the dense
/// row-major matrix (one row per line). `n` is the complex base dimension,
/// `N = dim_fibre / (2n)` the number of fibre factors, and `k` the attached
/// group order (0 when none; weights are not carried by the format and must
/// be re-supplied on load). Only standard-shape forms serialize.
pub fn to_text(q: &QuadForm) -> Result<String> {
    let nb = q.dim_base;
    if nb == 0 || nb % 2 != 0 || q.dim_fibre % nb != 0 {
        return Err(Error::DimensionMismatch(
            "only standard-shape forms (base 2n, fibre 2nN) serialize".into(),
        ));
    }
    let n = nb / 2;
    let big_n = q.dim_fibre / nb;
    let k = q.lens.as_ref().map_or(0, |l| l.k());
    let mut s = format!("quadform {n} {big_n} {k}\n");
    for r in 0..q.dim() {
        let row: Vec<String> = (0..q.dim()).map(|c| format!("{:?}", q.mat[(r, c)])).collect();
        s.push_str(&row.join(" "));
        s.push('\n');
    }
    Ok(s)
}

/// Parse the format written by [`to_text`]. A nonzero `k` in the header is
/// surfaced for the caller to reattach via [`QuadForm::with_lens`].
pub fn from_text(text: &str) -> Result<(QuadForm, u32)> {
    let mut lines = text.lines().enumerate();
    let (ln, header) = lines
        .next()
        .ok_or(Error::Parse { line: 1, reason: "empty input".into() })?;
    let toks: Vec<&str> = header.split_whitespace().collect();
    if toks.len() != 4 || toks[0] != "quadform" {
        return Err(Error::Parse {
            line: ln + 1,
            reason: format!("expected `quadform n N k`, got {header:?}"),
        });
    }
    let parse_num = |s: &str, what: &str| -> Result<usize> {
        s.parse().map_err(|_| Error::Parse {
            line: ln + 1,
            reason: format!("bad {what}: {s:?}"),
        })
    };
    let n = parse_num(toks[1], "n")?;
    let big_n = parse_num(toks[2], "N")?;
    let k = parse_num(toks[3], "k")? as u32;
    if n == 0 {
        return Err(Error::Parse { line: ln + 1, reason: "n must be positive".into() });
    }
    let dim = 2 * n * (big_n + 1);
    let mut mat = DMatrix::zeros(dim, dim);
    let mut r = 0;
    for (ln, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        if r >= dim {
            return Err(Error::Parse { line: ln + 1, reason: "too many rows".into() });
        }
        let entries: Vec<&str> = line.split_whitespace().collect();
        if entries.len() != dim {
            return Err(Error::Parse {
                line: ln + 1,
                reason: format!("row has {} entries, want {dim}", entries.len()),
            });
        }
        for (c, e) in entries.iter().enumerate() {
            mat[(r, c)] = e.parse().map_err(|_| Error::Parse {
                line: ln + 1,
                reason: format!("bad float {e:?}"),
            })?;
        }
        r += 1;
    }
    if r != dim {
        return Err(Error::Parse { line: 0, reason: format!("expected {dim} rows, got {r}") });
    }
    Ok((QuadForm::new(2 * n, 2 * n * big_n, mat)?, k))
}
