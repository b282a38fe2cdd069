//! Legendre-family quadrature rules on [−1, 1].

use std::f64::consts::PI;

/// `(P_n(x), P_{n−1}(x))` by the three-term recurrence.
pub fn legendre_pair(n: usize, x: f64) -> (f64, f64) {
    if n == 0 {
        return (1.0, 0.0);
    }
    let (mut p_prev, mut p) = (1.0, x);
    for k in 2..=n {
        let kf = k as f64;
        let next = ((2.0 * kf - 1.0) * x * p - (kf - 1.0) * p_prev) / kf;
        p_prev = p;
        p = next;
    }
    (p, p_prev)
}

pub fn legendre(n: usize, x: f64) -> f64 {
    legendre_pair(n, x).0
}

/// Gauss–Legendre nodes (ascending) and weights with `n` points.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, p1) = legendre_pair(n, x);
            dp = nf * (x * p - p1) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (p, p1) = legendre_pair(n, x);
        dp = if p.is_finite() { nf * (x * p - p1) / (x * x - 1.0) } else { dp };
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// Gauss–Legendre–Lobatto rule of polynomial degree `degree`: `degree + 1`
/// ascending nodes including ±1, exact for polynomials up to degree `2·degree − 1`.
pub fn gauss_lobatto(degree: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(degree >= 1);
    let n = degree;
    let nf = n as f64;
    let mut nodes: Vec<f64> = (0..=n).map(|j| -(PI * j as f64 / nf).cos()).collect();
    for x in nodes.iter_mut().take(n).skip(1) {
        for _ in 0..100 {
            let (p, p1) = legendre_pair(n, *x);
            // Newton on (1 − x²) P'_n, written through P_n and P_{n−1}.
            let dx = (*x * p - p1) / ((nf + 1.0) * p);
            *x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
    }
    // symmetrize to remove round-off asymmetry
    for j in 0..=n / 2 {
        let s = 0.5 * (nodes[n - j] - nodes[j]);
        nodes[j] = -s;
        nodes[n - j] = s;
    }
    if n.is_multiple_of(2) {
        nodes[n / 2] = 0.0;
    }
    let weights = nodes
        .iter()
        .map(|&x| {
            let p = legendre(n, x);
            2.0 / (nf * (nf + 1.0) * p * p)
        })
        .collect();
    (nodes, weights)
}

/// First-derivative matrix `D[k][i] = ℓ_i'(x_k)` of the Lagrange basis on Lobatto nodes.
pub fn lobatto_derivative_matrix(nodes: &[f64]) -> Vec<Vec<f64>> {
    let m = nodes.len();
    let n = m - 1;
    let nf = n as f64;
    let p: Vec<f64> = nodes.iter().map(|&x| legendre(n, x)).collect();
    let mut d = vec![vec![0.0; m]; m];
    for k in 0..m {
        for i in 0..m {
            d[k][i] = if k != i {
                p[k] / (p[i] * (nodes[k] - nodes[i]))
            } else if k == 0 {
                -nf * (nf + 1.0) / 4.0
            } else if k == n {
                nf * (nf + 1.0) / 4.0
            } else {
                0.0
            };
        }
    }
    d
}

/// Barycentric weights for interpolation through `nodes`, scaled to unit maximum.
pub fn barycentric_weights(nodes: &[f64]) -> Vec<f64> {
    let logs: Vec<(f64, f64)> = nodes
        .iter()
        .enumerate()
        .map(|(j, &xj)| {
            let mut log = 0.0;
            let mut sign = 1.0;
            for (k, &xk) in nodes.iter().enumerate() {
                if k != j {
                    let d = xj - xk;
                    log -= d.abs().ln();
                    if d < 0.0 {
                        sign = -sign;
                    }
                }
            }
            (sign, log)
        })
        .collect();
    let max = logs.iter().map(|&(_, l)| l).fold(f64::NEG_INFINITY, f64::max);
    logs.into_iter().map(|(s, l)| s * (l - max).exp()).collect()
}

/// Evaluates the interpolant of `values` at `x` (second barycentric form).
pub fn barycentric_eval(nodes: &[f64], bary: &[f64], values: &[f64], x: f64) -> f64 {
    let mut num = 0.0;
    let mut den = 0.0;
    for ((&xj, &wj), &fj) in nodes.iter().zip(bary).zip(values) {
        let d = x - xj;
        if d == 0.0 {
            return fj;
        }
        let t = wj / d;
        num += t * fj;
        den += t;
    }
    num / den
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn gauss_legendre_exactness() {
        let (x, w) = gauss_legendre(7);
        assert_abs_diff_eq!(w.iter().sum::<f64>(), 2.0, epsilon = 1e-14);
        let m12: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(12)).sum();
        assert_abs_diff_eq!(m12, 2.0 / 13.0, epsilon = 1e-14);
        let (x, w) = gauss_legendre(400);
        let m: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(2)).sum();
        assert_abs_diff_eq!(m, 2.0 / 3.0, epsilon = 1e-13);
    }

    #[test]
    fn lobatto_exactness_and_layout() {
        let (x, w) = gauss_lobatto(33);
        assert_eq!(x.len(), 34);
        assert_eq!(x[0], -1.0);
        assert_eq!(x[33], 1.0);
        assert!(x.windows(2).all(|p| p[1] > p[0]));
        let m64: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(64)).sum();
        assert_abs_diff_eq!(m64, 2.0 / 65.0, epsilon = 1e-14);
    }

    #[test]
    fn derivative_matrix_differentiates_polynomials() {
        let (x, _) = gauss_lobatto(12);
        let d = lobatto_derivative_matrix(&x);
        let f: Vec<f64> = x.iter().map(|x| x.powi(7) - 2.0 * x).collect();
        for (k, row) in d.iter().enumerate() {
            let df: f64 = row.iter().zip(&f).map(|(a, b)| a * b).sum();
            assert_abs_diff_eq!(df, 7.0 * x[k].powi(6) - 2.0, epsilon = 1e-11);
        }
    }

    #[test]
    fn barycentric_reproduces_polynomial() {
        let (x, _) = gauss_lobatto(201);
        let bw = barycentric_weights(&x);
        let f: Vec<f64> = x.iter().map(|x| (3.0 * x).sin()).collect();
        for t in [-0.9993, -0.3, 0.123, 0.77] {
            assert_abs_diff_eq!(barycentric_eval(&x, &bw, &f, t), (3.0 * t).sin(), epsilon = 1e-13);
        }
    }
}
