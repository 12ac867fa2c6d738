//! Flows of conical Hamiltonian vector fields, and the `ConicalMap`
//! abstraction shared by the certification and point-detection code.

use nalgebra::{DMatrix, DVector};

use crate::lens::mul_i;

use super::ham::Hamiltonian;

/// Fixed integrator resolution: RK4 with uniform step `t / ceil(t / MAX_STEP)`.
pub const MAX_STEP: f64 = 0.01;

fn vector_field(ham: &Hamiltonian, z: &DVector<f64>) -> DVector<f64> {
    mul_i(&ham.grad_lift(z))
}

/// The time-`t` map of `X_H = i grad H` (classical RK4, fixed step).
/// Negative `t` integrates backwards.
pub fn flow(ham: &Hamiltonian, t: f64, z0: &DVector<f64>) -> DVector<f64> {
    if t == 0.0 {
        return z0.clone();
    }
    let steps = (t.abs() / MAX_STEP).ceil().max(1.0) as usize;
    let h = t / steps as f64;
    let mut z = z0.clone();
    for _ in 0..steps {
        let k1 = vector_field(ham, &z);
        let k2 = vector_field(ham, &(&z + &k1 * (h / 2.0)));
        let k3 = vector_field(ham, &(&z + &k2 * (h / 2.0)));
        let k4 = vector_field(ham, &(&z + &k3 * h));
        z += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
    }
    z
}

/// States at each of the (sorted, non-negative) `times`, from one pass of the
/// integrator. Each leg between consecutive requested times is integrated
/// with the same uniform-step policy as [`flow`].
pub fn flow_checkpoints(ham: &Hamiltonian, times: &[f64], z0: &DVector<f64>) -> Vec<DVector<f64>> {
    let mut out = Vec::with_capacity(times.len());
    let mut z = z0.clone();
    let mut t_cur = 0.0;
    for &t in times {
        debug_assert!(t >= t_cur, "checkpoint times must be sorted and non-negative");
        z = flow(ham, t - t_cur, &z);
        t_cur = t;
        out.push(z.clone());
    }
    out
}

/// A map of `R^{2n} \ {0}` commuting with positive scalings. Implementors
/// supply the evaluation; the Jacobian defaults to central differences.
pub trait ConicalMap {
    fn dim(&self) -> usize;
    fn eval(&self, z: &DVector<f64>) -> DVector<f64>;

    fn jacobian(&self, z: &DVector<f64>) -> DMatrix<f64> {
        let dim = self.dim();
        let h = 1e-6 * (1.0 + z.norm());
        let mut jac = DMatrix::zeros(dim, dim);
        for j in 0..dim {
            let mut zp = z.clone();
            let mut zm = z.clone();
            zp[j] += h;
            zm[j] -= h;
            let col = (self.eval(&zp) - self.eval(&zm)) / (2.0 * h);
            jac.set_column(j, &col);
        }
        jac
    }
}

/// The lift of a contact isotopy at a fixed time: `z -> Phi_duration(z)`.
#[derive(Debug, Clone)]
pub struct FlowMap {
    pub ham: Hamiltonian,
    pub duration: f64,
    pub dim: usize,
}

impl ConicalMap for FlowMap {
    fn dim(&self) -> usize {
        self.dim
    }
    fn eval(&self, z: &DVector<f64>) -> DVector<f64> {
        flow(&self.ham, self.duration, z)
    }
}

/// A linear conical map (e.g. a rotation `e^{i theta}` or a deck
/// transformation); its Jacobian is itself, exactly.
#[derive(Debug, Clone)]
pub struct LinearMap(pub DMatrix<f64>);

impl ConicalMap for LinearMap {
    fn dim(&self) -> usize {
        self.0.nrows()
    }
    fn eval(&self, z: &DVector<f64>) -> DVector<f64> {
        &self.0 * z
    }
    fn jacobian(&self, _z: &DVector<f64>) -> DMatrix<f64> {
        self.0.clone()
    }
}

/// `then(first(z))`.
pub struct Composed<A, B>(pub A, pub B);

impl<A: ConicalMap, B: ConicalMap> ConicalMap for Composed<A, B> {
    fn dim(&self) -> usize {
        self.0.dim()
    }
    fn eval(&self, z: &DVector<f64>) -> DVector<f64> {
        self.1.eval(&self.0.eval(z))
    }
}
