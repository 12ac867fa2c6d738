//! Contact Hamiltonians on the unit sphere and their conical lifts.
//!
//! A contact Hamiltonian is a `Z_k`-invariant function `h` on `S^{2n-1}`. Its
//! lift to `R^{2n} \ {0}` is the 2-homogeneous function
//!
//! ```text
//! H(z) = |z|^2 h(z / |z|) / 2,
//! ```
//!
//! whose Hamiltonian vector field (for `omega = sum dx_j ^ dy_j`, with the
//! sign convention `i_X omega = -dH`) is `X_H = i grad H`. The flow of `X_H`
//! commutes with positive scalings and descends to the contact flow of `h` on
//! the quotient.
//!
//! We represent `h` exactly as a constant plus real/imaginary parts of
//! complex monomials, each normalized to homogeneity degree zero:
//!
//! ```text
//! h(u) = c_0 + sum_i  c_i * ReIm( prod_j u_j^{a_ij} conj(u_j)^{b_ij} ) / |u|^{d_i},
//! ```
//!
//! with `d_i` the total degree of the i-th monomial. This closed shape gives
//! exact gradients and an exact `Z_k`-invariance test: the monomial is
//! invariant under the weighted rotation by `2 pi / k` if and only if
//! `sum_j w_j (a_ij - b_ij) = 0 mod k`.

use nalgebra::{Complex, DVector};

use crate::lens::LensSpace;
use crate::{Error, Result};

type C64 = Complex<f64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Harmonic {
    Re,
    Im,
}

/// One term `coeff * ReIm( prod_j z_j^{a_j} conj(z_j)^{b_j} )`.
#[derive(Debug, Clone, PartialEq)]
pub struct Monomial {
    pub coeff: f64,
    pub harmonic: Harmonic,
    /// `(a_j, b_j)` per complex coordinate; the length fixes `n`.
    pub powers: Vec<(u32, u32)>,
}

impl Monomial {
    pub fn degree(&self) -> u32 {
        self.powers.iter().map(|&(a, b)| a + b).sum()
    }

    /// `sum_j w_j (a_j - b_j) mod k`; the term is `Z_k`-invariant iff this is 0.
    pub fn rotation_class(&self, lens: &LensSpace) -> i64 {
        let k = lens.k() as i64;
        let mut s = 0i64;
        for (&(a, b), &w) in self.powers.iter().zip(lens.weights()) {
            s += (w as i64) * (a as i64 - b as i64);
        }
        s.rem_euclid(k)
    }

    fn value(&self, z: &[C64]) -> C64 {
        let mut w = C64::new(1.0, 0.0);
        for (j, &(a, b)) in self.powers.iter().enumerate() {
            w *= z[j].powu(a) * z[j].conj().powu(b);
        }
        w
    }

    /// Wirtinger derivatives `(dW/dz_j, dW/dzbar_j)` for all `j`.
    fn wirtinger(&self, z: &[C64]) -> Vec<(C64, C64)> {
        let n = self.powers.len();
        let mut out = Vec::with_capacity(n);
        for j in 0..n {
            let mut dz = C64::new(self.powers[j].0 as f64, 0.0);
            let mut dzb = C64::new(self.powers[j].1 as f64, 0.0);
            for (l, &(a, b)) in self.powers.iter().enumerate() {
                let (za, zb) = (z[l].powu(a), z[l].conj().powu(b));
                if l == j {
                    dz *= if a >= 1 { z[l].powu(a - 1) } else { C64::new(0.0, 0.0) } * zb;
                    dzb *= za * if b >= 1 { z[l].conj().powu(b - 1) } else { C64::new(0.0, 0.0) };
                } else {
                    dz *= za * zb;
                    dzb *= za * zb;
                }
            }
            out.push((dz, dzb));
        }
        out
    }
}

/// A contact Hamiltonian in exact monomial form; see the module docs.
#[derive(Debug, Clone, PartialEq)]
pub struct Hamiltonian {
    pub constant: f64,
    pub terms: Vec<Monomial>,
}

fn complexify(z: &DVector<f64>) -> Vec<C64> {
    (0..z.len() / 2)
        .map(|j| C64::new(z[2 * j], z[2 * j + 1]))
        .collect()
}

impl Hamiltonian {
    /// `h = 1`: the lift generates the Reeb flow `z -> e^{it} z`.
    pub fn reeb() -> Self {
        Hamiltonian { constant: 1.0, terms: vec![] }
    }

    /// `h(u) = 1 + eps Re(u_1^2 conj(u_2)^2) / |u|^4` on `S^3`.
    ///
    /// The perturbation is `Z_k`-invariant for the weights `(1, 1)` (indeed
    /// whenever `2(w_1 - w_2) = 0 mod k`), and it is invariant under the
    /// simultaneous rotation `u -> e^{i theta} u`, so its flow commutes with
    /// the Reeb flow.
    pub fn perturbed_reeb(eps: f64) -> Self {
        Hamiltonian {
            constant: 1.0,
            terms: vec![Monomial {
                coeff: eps,
                harmonic: Harmonic::Re,
                powers: vec![(2, 0), (0, 2)],
            }],
        }
    }

    /// Number of complex coordinates the terms require, if any term does.
    pub fn term_arity(&self) -> Option<usize> {
        self.terms.iter().map(|t| t.powers.len()).max()
    }

    fn check_dim(&self, real_dim: usize) {
        assert!(real_dim % 2 == 0, "phase space must have even dimension");
        if let Some(n) = self.term_arity() {
            assert!(
                real_dim / 2 >= n,
                "Hamiltonian has monomials in {n} complex variables but the point has {}",
                real_dim / 2
            );
        }
    }

    /// The degree-zero extension of `h` to `R^{2n} \ {0}` (restricts to `h`
    /// on the sphere).
    pub fn h(&self, u: &DVector<f64>) -> f64 {
        self.check_dim(u.len());
        let r2 = u.norm_squared();
        assert!(r2 > 0.0, "h is undefined at the origin");
        let z = complexify(u);
        let mut v = self.constant;
        for t in &self.terms {
            let w = t.value(&z);
            let part = match t.harmonic {
                Harmonic::Re => w.re,
                Harmonic::Im => w.im,
            };
            v += t.coeff * part / r2.powf(t.degree() as f64 / 2.0);
        }
        v
    }

    /// The conical lift `H(z) = |z|^2 h(z/|z|) / 2`.
    pub fn lift(&self, z: &DVector<f64>) -> f64 {
        0.5 * z.norm_squared() * self.h(z)
    }

    /// Exact gradient of the lift.
    ///
    /// For a term `c ReIm(W)/|z|^{d-2}` (as it appears in `H`), the real
    /// gradient of `ReIm(W)` has components
    /// `d/dx_j = ReIm(dW/dz_j + dW/dzbar_j)` and
    /// `d/dy_j = ReIm(i (dW/dz_j - dW/dzbar_j))`.
    pub fn grad_lift(&self, z: &DVector<f64>) -> DVector<f64> {
        self.check_dim(z.len());
        let r2 = z.norm_squared();
        assert!(r2 > 0.0, "the lift is not differentiable at the origin");
        let mut g = z * self.constant;
        if self.terms.is_empty() {
            return g;
        }
        let zc = complexify(z);
        for t in &self.terms {
            let d = t.degree() as i32;
            let rpow = r2.powf((d - 2) as f64 / 2.0);
            let w = t.value(&zc);
            let wir = t.wirtinger(&zc);
            let part = |c: C64| match t.harmonic {
                Harmonic::Re => c.re,
                Harmonic::Im => c.im,
            };
            let f = part(w);
            for (j, &(dz, dzb)) in wir.iter().enumerate() {
                let fx = part(dz + dzb);
                let fy = part(C64::i() * (dz - dzb));
                g[2 * j] += 0.5 * t.coeff * fx / rpow;
                g[2 * j + 1] += 0.5 * t.coeff * fy / rpow;
            }
            // gradient of the |z|^{-(d-2)} factor
            if d != 2 {
                let c = -0.5 * t.coeff * f * (d - 2) as f64 / (rpow * r2);
                g += z * c;
            }
        }
        g
    }

    /// True iff every term satisfies the exact invariance congruence
    /// `sum_j w_j (a_j - b_j) = 0 mod k`.
    pub fn is_invariant_exact(&self, lens: &LensSpace) -> bool {
        if let Some(n) = self.term_arity() {
            if n > lens.n() {
                return false;
            }
        }
        self.terms.iter().all(|t| t.rotation_class(lens) == 0)
    }

    /// Sampled invariance check of `h` along `Z_k`-orbits on the sphere;
    /// returns the largest violation, erring above `tol`.
    pub fn certify_invariance(&self, lens: &LensSpace, samples: usize, seed: u64, tol: f64) -> Result<f64> {
        let mut worst = 0.0f64;
        for u in crate::sampling::sphere_points(lens.ambient_dim(), samples, seed) {
            let h0 = self.h(&u);
            for m in 1..lens.k() as i64 {
                let v = (self.h(&lens.act(m, &u)) - h0).abs();
                worst = worst.max(v);
            }
        }
        if worst > tol {
            return Err(Error::HamiltonianNotInvariant(worst));
        }
        Ok(worst)
    }

    /// `(min, max)` of `h` over a sampled sphere grid; used to certify the
    /// sign of an isotopy (non-negative / positive).
    pub fn sign_range(&self, real_dim: usize, samples: usize, seed: u64) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for u in crate::sampling::sphere_points(real_dim, samples, seed) {
            let v = self.h(&u);
            lo = lo.min(v);
            hi = hi.max(v);
        }
        (lo, hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn fd_grad(ham: &Hamiltonian, z: &DVector<f64>) -> DVector<f64> {
        let h = 1e-6;
        DVector::from_fn(z.len(), |i, _| {
            let mut zp = z.clone();
            let mut zm = z.clone();
            zp[i] += h;
            zm[i] -= h;
            (ham.lift(&zp) - ham.lift(&zm)) / (2.0 * h)
        })
    }

    #[test]
    fn reeb_lift_is_half_norm_squared() {
        let ham = Hamiltonian::reeb();
        let z = DVector::from_column_slice(&[0.3, -0.4, 1.0, 2.0]);
        assert_relative_eq!(ham.lift(&z), 0.5 * z.norm_squared(), epsilon = 1e-14);
        assert_relative_eq!(ham.grad_lift(&z), z, epsilon = 1e-14);
    }

    #[test]
    fn perturbed_reeb_matches_the_hand_expanded_formula() {
        // Re(z1^2 conj(z2)^2) = (x1^2-y1^2)(x2^2-y2^2) + 4 x1 y1 x2 y2
        let eps = 0.17;
        let ham = Hamiltonian::perturbed_reeb(eps);
        for z in crate::sampling::sphere_points(4, 10, 3) {
            let z = &z * 1.3; // exercise the conical extension off the sphere
            let (x1, y1, x2, y2) = (z[0], z[1], z[2], z[3]);
            let p = (x1 * x1 - y1 * y1) * (x2 * x2 - y2 * y2) + 4.0 * x1 * y1 * x2 * y2;
            let r2 = z.norm_squared();
            assert_relative_eq!(ham.h(&z), 1.0 + eps * p / (r2 * r2), epsilon = 1e-12);
            assert_relative_eq!(
                ham.lift(&z),
                0.5 * r2 + 0.5 * eps * p / r2,
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn gradients_match_finite_differences() {
        let hams = [
            Hamiltonian::perturbed_reeb(0.21),
            // a degree-3 monomial with nontrivial Im part: Im(z1^2 conj(z2))
            Hamiltonian {
                constant: 0.4,
                terms: vec![Monomial {
                    coeff: -0.8,
                    harmonic: Harmonic::Im,
                    powers: vec![(2, 0), (0, 1)],
                }],
            },
        ];
        for ham in &hams {
            for z in crate::sampling::sphere_points(4, 6, 11) {
                let z = &z * 0.9;
                assert_relative_eq!(ham.grad_lift(&z), fd_grad(ham, &z), epsilon = 1e-6);
            }
        }
    }

    #[test]
    fn lift_is_two_homogeneous_and_h_is_invariant_under_scaling() {
        let ham = Hamiltonian::perturbed_reeb(0.1);
        let z = DVector::from_column_slice(&[0.4, 0.1, -0.3, 0.8]);
        assert_relative_eq!(ham.lift(&(&z * 2.0)), 4.0 * ham.lift(&z), epsilon = 1e-12);
        assert_relative_eq!(ham.h(&(&z * 2.0)), ham.h(&z), epsilon = 1e-12);
    }

    #[test]
    fn exact_invariance_agrees_with_sampling() {
        let l311 = LensSpace::new(3, vec![1, 1]).unwrap();
        let l512 = LensSpace::new(5, vec![1, 2]).unwrap();
        let ham = Hamiltonian::perturbed_reeb(0.3);
        // 2(w1 - w2) = 0 mod 3 for (1,1)
        assert!(ham.is_invariant_exact(&l311));
        assert!(ham.certify_invariance(&l311, 25, 5, 1e-12).is_ok());
        // 2(1 - 2) = -2 != 0 mod 5
        assert!(!ham.is_invariant_exact(&l512));
        assert!(matches!(
            ham.certify_invariance(&l512, 25, 5, 1e-9),
            Err(Error::HamiltonianNotInvariant(_))
        ));
    }

    #[test]
    fn sign_range_brackets_the_perturbation() {
        let ham = Hamiltonian::perturbed_reeb(0.1);
        let (lo, hi) = ham.sign_range(4, 400, 9);
        assert!(lo > 0.85 && lo < 1.0, "min {lo}");
        assert!(hi < 1.15 && hi > 1.0, "max {hi}");
    }
}
