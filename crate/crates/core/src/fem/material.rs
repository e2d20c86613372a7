use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Fourth-order tensor `c_ijkl` on `R^{d x d}`, stored densely.
#[derive(Clone, Debug, PartialEq)]
pub struct Tensor4 {
    dim: usize,
    data: Vec<f64>,
}

impl Tensor4 {
    pub fn zeros(dim: usize) -> Self {
        Tensor4 {
            dim,
            data: vec![0.0; dim.pow(4)],
        }
    }

    /// Coefficients in `i, j, k, l` row-major order (`d^4` values).
    pub fn from_table(dim: usize, data: Vec<f64>) -> Result<Self> {
        if dim != 2 && dim != 3 {
            return Err(Error::InvalidInput(format!(
                "tensor dimension must be 2 or 3, got {dim}"
            )));
        }
        if data.len() != dim.pow(4) {
            return Err(Error::InvalidInput(format!(
                "tensor table needs {} coefficients, got {}",
                dim.pow(4),
                data.len()
            )));
        }
        Ok(Tensor4 { dim, data })
    }

    /// `c_ijkl = lambda d_ij d_kl + mu (d_ik d_jl + d_il d_jk)`.
    pub fn isotropic(dim: usize, lambda: f64, mu: f64) -> Self {
        let mut t = Tensor4::zeros(dim);
        let delta = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    for l in 0..dim {
                        let idx = t.index(i, j, k, l);
                        t.data[idx] = lambda * delta(i, j) * delta(k, l)
                            + mu * (delta(i, k) * delta(j, l) + delta(i, l) * delta(j, k));
                    }
                }
            }
        }
        t
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn table(&self) -> &[f64] {
        &self.data
    }

    fn index(&self, i: usize, j: usize, k: usize, l: usize) -> usize {
        ((i * self.dim + j) * self.dim + k) * self.dim + l
    }

    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.data[self.index(i, j, k, l)]
    }

    /// `c_ijkl x_ij y_kl` for row-major `d x d` matrices.
    pub fn contract(&self, x: &[f64], y: &[f64]) -> f64 {
        let d = self.dim;
        let mut s = 0.0;
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    for l in 0..d {
                        s += self.get(i, j, k, l) * x[i * d + j] * y[k * d + l];
                    }
                }
            }
        }
        s
    }

    /// Minor and major symmetries `c_ijkl = c_jikl = c_klij`, checked exactly.
    pub fn has_symmetries(&self) -> bool {
        let d = self.dim;
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    for l in 0..d {
                        let c = self.get(i, j, k, l);
                        if c != self.get(j, i, k, l) || c != self.get(k, l, i, j) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|c| c.is_finite())
    }
}

/// Number of random symmetric matrices used for the coercivity checks.
pub const COERCIVITY_SAMPLES: usize = 2000;

/// Smallest sampled ratio `c(xi, xi) / |xi|^2` over random symmetric matrices.
pub fn sampled_coercivity(t: &Tensor4, samples: usize, seed: u64) -> f64 {
    let d = t.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = f64::INFINITY;
    let mut xi = vec![0.0; d * d];
    for _ in 0..samples {
        for i in 0..d {
            for j in i..d {
                let v: f64 = rng.gen_range(-1.0..1.0);
                xi[i * d + j] = v;
                xi[j * d + i] = v;
            }
        }
        let norm2: f64 = xi.iter().map(|v| v * v).sum();
        if norm2 == 0.0 {
            continue;
        }
        worst = worst.min(t.contract(&xi, &xi) / norm2);
    }
    worst
}

/// Viscosity tensor `A`, elasticity tensor `B` and the declared coercivity bound `alpha` of `A`.
#[derive(Clone, Debug, PartialEq)]
pub struct MaterialModel {
    pub viscosity: Tensor4,
    pub elasticity: Tensor4,
    pub coercivity_alpha: f64,
}

impl MaterialModel {
    /// Validates finiteness, exact symmetries, sampled coercivity of `A` with the declared
    /// `alpha > 0` and sampled positive semidefiniteness of `B`.
    pub fn new(viscosity: Tensor4, elasticity: Tensor4, coercivity_alpha: f64, seed: u64) -> Result<Self> {
        if viscosity.dim() != elasticity.dim() {
            return Err(Error::InvalidInput(
                "viscosity and elasticity tensors differ in dimension".into(),
            ));
        }
        for (name, t) in [("viscosity", &viscosity), ("elasticity", &elasticity)] {
            if !t.is_finite() {
                return Err(Error::Hypothesis(format!("{name} coefficients must be finite")));
            }
            if !t.has_symmetries() {
                return Err(Error::Hypothesis(format!(
                    "{name} tensor must satisfy c_ijkl = c_jikl = c_klij"
                )));
            }
        }
        if !(coercivity_alpha > 0.0) {
            return Err(Error::Hypothesis(format!(
                "viscosity coercivity constant alpha must be positive, got {coercivity_alpha}"
            )));
        }
        let a_min = sampled_coercivity(&viscosity, COERCIVITY_SAMPLES, seed);
        if a_min < coercivity_alpha * (1.0 - 1e-12) {
            return Err(Error::Hypothesis(format!(
                "viscosity tensor is not coercive with alpha = {coercivity_alpha} (sampled minimum {a_min})"
            )));
        }
        let b_scale = elasticity.table().iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let b_min = sampled_coercivity(&elasticity, COERCIVITY_SAMPLES, seed.wrapping_add(1));
        if b_min < -1e-12 * b_scale.max(1.0) {
            return Err(Error::Hypothesis(format!(
                "elasticity tensor must be positive semidefinite (sampled minimum {b_min})"
            )));
        }
        Ok(MaterialModel {
            viscosity,
            elasticity,
            coercivity_alpha,
        })
    }

    /// Isotropic viscosity `(a_lambda, a_mu)` and elasticity `(b_lambda, b_mu)`. The coercivity
    /// constant is the exact one, `min(2 a_mu, 2 a_mu + d a_lambda)`.
    pub fn isotropic(dim: usize, a_lambda: f64, a_mu: f64, b_lambda: f64, b_mu: f64, seed: u64) -> Result<Self> {
        let alpha = isotropic_coercivity(dim, a_lambda, a_mu);
        MaterialModel::new(
            Tensor4::isotropic(dim, a_lambda, a_mu),
            Tensor4::isotropic(dim, b_lambda, b_mu),
            alpha,
            seed,
        )
    }

    pub fn dim(&self) -> usize {
        self.viscosity.dim()
    }
}

/// Exact lower bound of `lambda tr(xi)^2 + 2 mu |xi|^2` over unit symmetric `xi`.
pub fn isotropic_coercivity(dim: usize, lambda: f64, mu: f64) -> f64 {
    (2.0 * mu).min(2.0 * mu + dim as f64 * lambda)
}
