//! Brute-force interface interpolation: interpolating polynomials from a
//! Vandermonde solve, smoothness indicators from exact polynomial integration,
//! then the weight formulas applied verbatim.

#![allow(dead_code)]

use fsaweno::interpolation::WenoParams;

/// Coefficients `c[k]` of `sum c[k] ξ^k` through the points `(xs[m], ys[m])`.
pub fn fit(xs: &[f64], ys: &[f64]) -> Vec<f64> {
    let n = xs.len();
    let mut a: Vec<Vec<f64>> = (0..n)
        .map(|r| {
            let mut row: Vec<f64> = (0..n).map(|c| xs[r].powi(c as i32)).collect();
            row.push(ys[r]);
            row
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&p, &q| a[p][col].abs().total_cmp(&a[q][col].abs()))
            .unwrap();
        a.swap(col, pivot);
        for r in 0..n {
            if r != col {
                let f = a[r][col] / a[col][col];
                for c in col..=n {
                    a[r][c] -= f * a[col][c];
                }
            }
        }
    }
    (0..n).map(|r| a[r][n] / a[r][r]).collect()
}

pub fn eval(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, k| acc * x + k)
}

fn derive(c: &[f64]) -> Vec<f64> {
    c.iter().enumerate().skip(1).map(|(k, v)| k as f64 * v).collect()
}

fn square(c: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; (2 * c.len()).saturating_sub(1)];
    for (i, a) in c.iter().enumerate() {
        for (j, b) in c.iter().enumerate() {
            out[i + j] += a * b;
        }
    }
    out
}

/// ∫_{-1/2}^{1/2} of a polynomial.
fn integrate_cell(c: &[f64]) -> f64 {
    c.iter()
        .enumerate()
        .map(|(k, v)| v * (0.5f64.powi(k as i32 + 1) - (-0.5f64).powi(k as i32 + 1)) / (k as f64 + 1.0))
        .sum()
}

/// Σ_{α=1..degree} ∫ (d^α p)² over the target cell, in units where h = 1.
pub fn indicator(c: &[f64]) -> f64 {
    let mut d = c.to_vec();
    let mut beta = 0.0;
    for _ in 1..c.len() {
        d = derive(&d);
        beta += integrate_cell(&square(&d));
    }
    beta
}

pub fn oracle_us(u: [f64; 5], p: &WenoParams) -> f64 {
    let p1 = fit(&[-2.0, -1.0, 0.0, 1.0, 2.0], &u);
    let p2 = fit(&[-1.0, 0.0], &u[1..3]);
    let p3 = fit(&[0.0, 1.0], &u[2..4]);
    let beta = [indicator(&p1), indicator(&p2), indicator(&p3)];
    let tau = (((beta[0] - beta[1]).abs() + (beta[0] - beta[2]).abs()) / 2.0).powi(2);
    let g = p.gamma_us;
    let raw: Vec<f64> = (0..3).map(|k| g[k] * (1.0 + tau / (p.eps + beta[k]))).collect();
    let s: f64 = raw.iter().sum();
    let w: Vec<f64> = raw.iter().map(|r| r / s).collect();
    let (v1, v2, v3) = (eval(&p1, 0.5), eval(&p2, 0.5), eval(&p3, 0.5));
    w[0] * (v1 / g[0] - g[1] / g[0] * v2 - g[2] / g[0] * v3) + w[1] * v2 + w[2] * v3
}

pub fn oracle_es(u: [f64; 5], p: &WenoParams) -> f64 {
    let subs = [([-2.0, -1.0, 0.0], 0), ([-1.0, 0.0, 1.0], 1), ([0.0, 1.0, 2.0], 2)];
    let mut num = 0.0;
    let mut den = 0.0;
    for (xs, start) in subs {
        let q = fit(&xs, &u[start..start + 3]);
        let w = p.gamma_es[start] / (p.eps + indicator(&q)).powi(2);
        num += w * eval(&q, 0.5);
        den += w;
    }
    num / den
}
