use crate::error::{Error, Result};
use crate::sparse::SparseOperator;

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Iteration count and final relative residual of a CG solve.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolveStats {
    pub iterations: usize,
    pub relative_residual: f64,
}

/// Solves `A x = b` for symmetric positive definite `A` to relative residual
/// `|Ax - b| / |b| <= tol`, starting from zero.
pub fn solve_spd(a: &SparseOperator, b: &[f64], tol: f64) -> Result<Vec<f64>> {
    solve_spd_from(a, b, None, tol).map(|(x, _)| x)
}

/// Jacobi-preconditioned conjugate gradients with an optional initial guess.
///
/// The iteration cap is `10 n`. Convergence is confirmed on the true residual; if the recursively
/// updated residual has drifted the iteration restarts from the current iterate.
pub fn solve_spd_from(a: &SparseOperator, b: &[f64], x0: Option<&[f64]>, tol: f64) -> Result<(Vec<f64>, SolveStats)> {
    if !(tol > 0.0 && tol < 1.0) {
        return Err(Error::InvalidInput(format!(
            "linear tolerance must lie in (0, 1), got {tol}"
        )));
    }
    let n = a.dim();
    if b.len() != n {
        return Err(Error::InvalidInput(format!(
            "right-hand side has length {}, expected {n}",
            b.len()
        )));
    }
    if let Some(i) = b.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite(format!("right-hand side entry {i}")));
    }
    let bnorm = norm(b);
    if bnorm == 0.0 {
        return Ok((
            vec![0.0; n],
            SolveStats {
                iterations: 0,
                relative_residual: 0.0,
            },
        ));
    }
    let inv_diag: Vec<f64> = a
        .diagonal()
        .iter()
        .map(|&d| if d > 0.0 { 1.0 / d } else { 1.0 })
        .collect();
    let cap = 10 * n.max(1);
    let mut x = x0.map_or_else(|| vec![0.0; n], <[f64]>::to_vec);
    let mut ax = vec![0.0; n];
    let mut iterations = 0;

    loop {
        a.mul_into(&x, &mut ax);
        let mut r: Vec<f64> = b.iter().zip(&ax).map(|(bi, ai)| bi - ai).collect();
        let true_res = norm(&r) / bnorm;
        if true_res <= tol {
            return Ok((
                x,
                SolveStats {
                    iterations,
                    relative_residual: true_res,
                },
            ));
        }
        if iterations >= cap || !true_res.is_finite() {
            return Err(Error::LinearSolver {
                iterations,
                residual: true_res,
            });
        }

        let mut z: Vec<f64> = r.iter().zip(&inv_diag).map(|(ri, di)| ri * di).collect();
        let mut p = z.clone();
        let mut rz = dot(&r, &z);
        let mut ap = vec![0.0; n];
        while iterations < cap {
            a.mul_into(&p, &mut ap);
            let pap = dot(&p, &ap);
            if !(pap > 0.0) {
                return Err(Error::LinearSolver {
                    iterations,
                    residual: norm(&r) / bnorm,
                });
            }
            let alpha = rz / pap;
            for i in 0..n {
                x[i] += alpha * p[i];
                r[i] -= alpha * ap[i];
            }
            iterations += 1;
            if norm(&r) / bnorm <= tol {
                break;
            }
            for i in 0..n {
                z[i] = r[i] * inv_diag[i];
            }
            let rz_new = dot(&r, &z);
            let beta = rz_new / rz;
            rz = rz_new;
            for i in 0..n {
                p[i] = z[i] + beta * p[i];
            }
        }
    }
}
