//! One-dimensional Hermite-function building blocks and Gauss–Hermite quadrature.
//!
//! `ψ_k(x) = p_k(x) e^{-x²/2}` with `p_k` orthonormal for the weight `e^{-x²}`.

use nalgebra::{DMatrix, DVector};

use crate::error::{invalid, Error, Result};
use crate::linalg;

const NEWTON_STEPS: usize = 3;

/// Multiplication by `x` on `ψ_0..ψ_{k_max}`.
pub fn position_matrix(k_max: usize) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(k_max + 1, k_max + 1);
    for k in 0..k_max {
        let a = ((k + 1) as f64 / 2.0).sqrt();
        m[(k + 1, k)] = a;
        m[(k, k + 1)] = a;
    }
    m
}

/// `d/dx` on `ψ_0..ψ_{k_max}`. Antisymmetric.
pub fn derivative_matrix(k_max: usize) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(k_max + 1, k_max + 1);
    for k in 0..k_max {
        let a = ((k + 1) as f64 / 2.0).sqrt();
        m[(k + 1, k)] = -a;
        m[(k, k + 1)] = a;
    }
    m
}

/// Orthonormal `p_0..p_{k_max}` at `x`.
pub fn orthonormal_polys(k_max: usize, x: f64) -> Vec<f64> {
    let mut p = Vec::with_capacity(k_max + 1);
    p.push(std::f64::consts::PI.powf(-0.25));
    if k_max >= 1 {
        p.push(x * std::f64::consts::SQRT_2 * p[0]);
    }
    for k in 1..k_max {
        let kf = k as f64;
        let next = x * (2.0 / (kf + 1.0)).sqrt() * p[k] - (kf / (kf + 1.0)).sqrt() * p[k - 1];
        p.push(next);
    }
    p
}

/// Nodes and weights of the `nodes`-point rule for `∫ f(x) e^{-x²} dx`.
///
/// Nodes start from the Jacobi-matrix eigenvalues and are polished by Newton
/// steps on `p_N`; weights are the Christoffel numbers `1 / Σ p_k(x)²`.
pub fn gauss_hermite(nodes: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if nodes == 0 {
        return Err(invalid("quadrature needs at least one node"));
    }
    if nodes == 1 {
        return Ok((vec![0.0], vec![std::f64::consts::PI.sqrt()]));
    }
    let jacobi = position_matrix(nodes - 1);
    let mut xs = linalg::eigvalsh(&jacobi)?;
    for x in xs.iter_mut() {
        for _ in 0..NEWTON_STEPS {
            let p = orthonormal_polys(nodes, *x);
            let dp = (2.0 * nodes as f64).sqrt() * p[nodes - 1];
            if dp == 0.0 {
                break;
            }
            *x -= p[nodes] / dp;
        }
    }
    // Enforce exact symmetry of the rule.
    let n = xs.len();
    for i in 0..n / 2 {
        let m = 0.5 * (xs[n - 1 - i] - xs[i]);
        xs[i] = -m;
        xs[n - 1 - i] = m;
    }
    if n % 2 == 1 {
        xs[n / 2] = 0.0;
    }
    let ws: Vec<f64> = xs
        .iter()
        .map(|&x| 1.0 / orthonormal_polys(nodes - 1, x).iter().map(|p| p * p).sum::<f64>())
        .collect();
    if ws.iter().any(|w| !w.is_finite()) {
        return Err(Error::Quadrature);
    }
    Ok((xs, ws))
}

/// `a_k(x_i) = sqrt(w_i) p_k(x_i)`, shape `(k_max + 1) × nodes`. Then
/// `Σ_i a_j(x_i) a_k(x_i) h(x_i)` approximates `⟨ψ_j | h ψ_k⟩`.
pub fn weighted_values(k_max: usize, xs: &[f64], ws: &[f64]) -> DMatrix<f64> {
    let mut a = DMatrix::zeros(k_max + 1, xs.len());
    for (i, (&x, &w)) in xs.iter().zip(ws).enumerate() {
        let sw = w.sqrt();
        for (k, p) in orthonormal_polys(k_max, x).into_iter().enumerate() {
            a[(k, i)] = sw * p;
        }
    }
    a
}

/// Matrix of multiplication by a scalar `h` on `ψ_0..ψ_level`.
pub fn function_matrix(level: usize, nodes: usize, h: impl Fn(f64) -> f64) -> Result<DMatrix<f64>> {
    let (xs, ws) = gauss_hermite(nodes)?;
    let a = weighted_values(level, &xs, &ws);
    let hv = DVector::from_iterator(xs.len(), xs.iter().map(|&x| h(x)));
    let out = &a * DMatrix::from_diagonal(&hv) * a.transpose();
    if out.iter().any(|v| !v.is_finite()) {
        return Err(Error::Quadrature);
    }
    Ok(out)
}

/// Node count for multiplication-operator matrix elements up to `level`.
/// With a polynomial `h` of degree `d` the rule is exact; otherwise the
/// count is doubled with a margin.
pub fn quadrature_nodes(level: usize, poly_degree: Option<usize>) -> usize {
    match poly_degree {
        Some(d) => (2 * level + d).div_ceil(2) + 2,
        None => 2 * (level + 9),
    }
}
