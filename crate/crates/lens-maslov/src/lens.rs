//! Lens spaces as sphere quotients, and the linear-algebra conventions used
//! everywhere else in the crate.
//!
//! A point of `C^n` is stored as a real vector of length `2n` with coordinates
//! interleaved as `(x_1, y_1, ..., x_n, y_n)`, where `z_j = x_j + i y_j`.
//! Multiplication by `i` is the linear map `(x, y) |-> (-y, x)` on each
//! complex factor.

use nalgebra::{DMatrix, DVector};

use crate::{Error, Result};

/// The lens space `L_k^{2n-1}(w_1, ..., w_n)`: the quotient of the unit
/// sphere `S^{2n-1}` in `C^n` by the `Z_k`-action generated by
///
/// ```text
/// zeta . (z_1, ..., z_n) = (e^{2 pi i w_1 / k} z_1, ..., e^{2 pi i w_n / k} z_n).
/// ```
///
/// The order `k` must be prime (this is what makes every nonzero element of
/// `Z_k` act freely once the weights are units mod `k`, and it is what the
/// mod-`k` topology downstream relies on), and every weight must be coprime
/// to `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct LensSpace {
    k: u32,
    weights: Vec<u32>,
}

pub(crate) fn is_prime(k: u32) -> bool {
    if k < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= k {
        if k % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl LensSpace {
    pub fn new(k: u32, weights: Vec<u32>) -> Result<Self> {
        if !is_prime(k) {
            return Err(Error::CompositeOrder(k));
        }
        if weights.is_empty() {
            return Err(Error::NoWeights);
        }
        for &w in &weights {
            if gcd(w % k, k) != 1 {
                return Err(Error::WeightNotCoprime { weight: w, k });
            }
        }
        Ok(LensSpace { k, weights })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    /// Number of complex coordinates `n`; the lens space has dimension `2n - 1`.
    pub fn n(&self) -> usize {
        self.weights.len()
    }

    /// Real dimension `2n` of the ambient symplectic vector space.
    pub fn ambient_dim(&self) -> usize {
        2 * self.weights.len()
    }

    pub fn weights_equal_mod_k(&self) -> bool {
        let w0 = self.weights[0] % self.k;
        self.weights.iter().all(|w| w % self.k == w0)
    }

    /// The generator `zeta` of the `Z_k`-action as a `2n x 2n` rotation matrix.
    pub fn generator(&self) -> DMatrix<f64> {
        self.deck(1)
    }

    /// The deck transformation `zeta^m` as a matrix.
    pub fn deck(&self, m: i64) -> DMatrix<f64> {
        let n = self.n();
        let mut g = DMatrix::zeros(2 * n, 2 * n);
        for (j, &w) in self.weights.iter().enumerate() {
            let theta = std::f64::consts::TAU * (m as f64) * (w as f64) / (self.k as f64);
            let (s, c) = theta.sin_cos();
            g[(2 * j, 2 * j)] = c;
            g[(2 * j, 2 * j + 1)] = -s;
            g[(2 * j + 1, 2 * j)] = s;
            g[(2 * j + 1, 2 * j + 1)] = c;
        }
        g
    }

    /// Apply `zeta^m` to a point, without building the matrix.
    pub fn act(&self, m: i64, z: &DVector<f64>) -> DVector<f64> {
        let mut out = z.clone();
        for (j, &w) in self.weights.iter().enumerate() {
            let theta = std::f64::consts::TAU * (m as f64) * (w as f64) / (self.k as f64);
            let (s, c) = theta.sin_cos();
            let (x, y) = (z[2 * j], z[2 * j + 1]);
            out[2 * j] = c * x - s * y;
            out[2 * j + 1] = s * x + c * y;
        }
        out
    }

    /// The full orbit `z, zeta.z, ..., zeta^{k-1}.z`.
    pub fn orbit(&self, z: &DVector<f64>) -> Vec<DVector<f64>> {
        (0..self.k as i64).map(|m| self.act(m, z)).collect()
    }
}

/// Multiplication by `i` on `C^n = R^{2n}`: `(x, y) |-> (-y, x)` blockwise.
pub fn mul_i(z: &DVector<f64>) -> DVector<f64> {
    let n2 = z.len();
    assert!(n2 % 2 == 0, "odd-length vector has no complex structure");
    let mut out = DVector::zeros(n2);
    for j in 0..n2 / 2 {
        out[2 * j] = -z[2 * j + 1];
        out[2 * j + 1] = z[2 * j];
    }
    out
}

/// The matrix of [`mul_i`] on `R^{2n}`.
pub fn i_matrix(n: usize) -> DMatrix<f64> {
    let mut j = DMatrix::zeros(2 * n, 2 * n);
    for b in 0..n {
        j[(2 * b, 2 * b + 1)] = -1.0;
        j[(2 * b + 1, 2 * b)] = 1.0;
    }
    j
}

/// Multiplication by `e^{i theta}` on `C^n = R^{2n}` as a matrix.
pub fn rotation(n: usize, theta: f64) -> DMatrix<f64> {
    let (s, c) = theta.sin_cos();
    let mut g = DMatrix::zeros(2 * n, 2 * n);
    for j in 0..n {
        g[(2 * j, 2 * j)] = c;
        g[(2 * j, 2 * j + 1)] = -s;
        g[(2 * j + 1, 2 * j)] = s;
        g[(2 * j + 1, 2 * j + 1)] = c;
    }
    g
}

/// The symplectic identification `tau` of `C^n x C^n` (domain cross target of
/// a symplectomorphism) with `T^* C^n`, chosen so that the diagonal goes to
/// the zero section:
///
/// ```text
/// tau(z, Z) = (q, p)   with   q = (z + Z) / 2,   p = i (z - Z).
/// ```
pub fn tau(z: &DVector<f64>, big_z: &DVector<f64>) -> (DVector<f64>, DVector<f64>) {
    assert_eq!(z.len(), big_z.len());
    let q = (z + big_z) / 2.0;
    let p = mul_i(&(z - big_z));
    (q, p)
}

/// Inverse of [`tau`]: `z = q - i p / 2`, `Z = q + i p / 2`.
pub fn tau_inverse(q: &DVector<f64>, p: &DVector<f64>) -> (DVector<f64>, DVector<f64>) {
    assert_eq!(q.len(), p.len());
    let ip = mul_i(p);
    let z = q - &ip / 2.0;
    let big_z = q + &ip / 2.0;
    (z, big_z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn rejects_composite_orders() {
        for k in [0, 1, 4, 6, 8, 9, 10, 12] {
            assert!(matches!(
                LensSpace::new(k, vec![1]),
                Err(Error::CompositeOrder(_))
            ));
        }
        for k in [2, 3, 5, 7, 11, 13] {
            assert!(LensSpace::new(k, vec![1, 1]).is_ok());
        }
    }

    #[test]
    fn rejects_non_invertible_weights() {
        assert!(matches!(
            LensSpace::new(3, vec![1, 3]),
            Err(Error::WeightNotCoprime { weight: 3, k: 3 })
        ));
        assert!(matches!(
            LensSpace::new(2, vec![2]),
            Err(Error::WeightNotCoprime { .. })
        ));
        // weights are read mod k, so w = 4 is a unit mod 3
        assert!(LensSpace::new(3, vec![4]).is_ok());
        assert!(matches!(LensSpace::new(5, vec![]), Err(Error::NoWeights)));
    }

    #[test]
    fn generator_has_order_k() {
        for (k, w) in [(2u32, vec![1, 1]), (3, vec![1, 2]), (5, vec![1, 2, 3])] {
            let lens = LensSpace::new(k, w).unwrap();
            let g = lens.generator();
            let mut p = DMatrix::identity(lens.ambient_dim(), lens.ambient_dim());
            for _ in 0..k {
                p = &g * p;
            }
            assert_relative_eq!(
                p,
                DMatrix::identity(lens.ambient_dim(), lens.ambient_dim()),
                epsilon = 1e-12
            );
            // and no smaller power is the identity (the action is free on the sphere)
            let mut p = DMatrix::identity(lens.ambient_dim(), lens.ambient_dim());
            for _ in 0..k - 1 {
                p = &g * p;
                assert!((&p - DMatrix::identity(lens.ambient_dim(), lens.ambient_dim())).norm() > 0.5);
            }
        }
    }

    #[test]
    fn orbit_of_first_basis_vector_is_the_w1_rotation_orbit() {
        let lens = LensSpace::new(3, vec![1, 1]).unwrap();
        let e1 = DVector::from_column_slice(&[1.0, 0.0, 0.0, 0.0]);
        let orbit = lens.orbit(&e1);
        assert_eq!(orbit.len(), 3);
        let c = (std::f64::consts::TAU / 3.0).cos();
        let s = (std::f64::consts::TAU / 3.0).sin();
        assert_relative_eq!(orbit[1][0], c, epsilon = 1e-12);
        assert_relative_eq!(orbit[1][1], s, epsilon = 1e-12);
        assert_relative_eq!(orbit[2][0], c, epsilon = 1e-12);
        assert_relative_eq!(orbit[2][1], -s, epsilon = 1e-12);
    }

    #[test]
    fn act_matches_generator_matrix() {
        let lens = LensSpace::new(5, vec![1, 2]).unwrap();
        let z = DVector::from_column_slice(&[0.3, -0.7, 1.1, 0.2]);
        for m in -3..7 {
            assert_relative_eq!(lens.act(m, &z), lens.deck(m) * &z, epsilon = 1e-12);
        }
    }

    #[test]
    fn mul_i_squares_to_minus_one() {
        let z = DVector::from_column_slice(&[0.5, -1.0, 2.0, 3.0, -0.25, 0.75]);
        assert_relative_eq!(mul_i(&mul_i(&z)), -&z, epsilon = 1e-15);
        // i . (1, 0) = (0, 1)
        let e1 = DVector::from_column_slice(&[1.0, 0.0]);
        assert_relative_eq!(mul_i(&e1), DVector::from_column_slice(&[0.0, 1.0]));
    }

    #[test]
    fn rotations_compose() {
        let a = rotation(2, 0.7);
        let b = rotation(2, -1.9);
        assert_relative_eq!(&a * &b, rotation(2, 0.7 - 1.9), epsilon = 1e-12);
        assert_relative_eq!(rotation(2, std::f64::consts::FRAC_PI_2) * DVector::from_column_slice(&[1.0, 0.0, 2.0, 0.0]),
            mul_i(&DVector::from_column_slice(&[1.0, 0.0, 2.0, 0.0])), epsilon = 1e-12);
    }

    #[test]
    fn tau_roundtrips_and_kills_the_diagonal() {
        let z = DVector::from_column_slice(&[0.1, 0.2, -0.4, 1.3]);
        let big_z = DVector::from_column_slice(&[-0.9, 0.5, 0.0, 2.0]);
        let (q, p) = tau(&z, &big_z);
        let (z2, big_z2) = tau_inverse(&q, &p);
        assert_relative_eq!(z, z2, epsilon = 1e-14);
        assert_relative_eq!(big_z, big_z2, epsilon = 1e-14);

        let (q, p) = tau(&z, &z);
        assert_relative_eq!(q, z, epsilon = 1e-15);
        assert_relative_eq!(p.norm(), 0.0, epsilon = 1e-15);
    }
}
