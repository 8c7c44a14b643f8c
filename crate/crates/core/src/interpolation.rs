//! Fifth-order point-value interpolation to a cell interface.
//!
//! All routines act on a five-point window `(u[i-2], ..., u[i+2])` of one conserved
//! component and return the left-biased value `u⁻` at `x[i+1/2]`. The right-biased
//! value `u⁺` at the same interface comes from the mirrored window centered at `i+1`.
//! Formulas are written in the scaled coordinate `ξ = (x - x[i]) / h`, in which the
//! grid spacing cancels.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Five consecutive point values of one component, centered at the target point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StencilWindow(pub [f64; 5]);

impl StencilWindow {
    /// Window centered at `center` of `line`.
    pub fn centered(line: &[f64], center: usize) -> Result<Self> {
        if center < 2 || center + 2 >= line.len() {
            return Err(Error::OutOfRange {
                index: center,
                len: line.len(),
            });
        }
        Ok(Self([
            line[center - 2],
            line[center - 1],
            line[center],
            line[center + 1],
            line[center + 2],
        ]))
    }

    /// The window seen from the other side of the target point.
    #[inline]
    pub fn reversed(&self) -> Self {
        let [a, b, c, d, e] = self.0;
        Self([e, d, c, b, a])
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WenoParams {
    pub eps: f64,
    /// Linear weights of the quartic and the two linear substencils.
    pub gamma_us: [f64; 3],
    /// Optimal weights of the three quadratic substencils.
    pub gamma_es: [f64; 3],
}

impl Default for WenoParams {
    fn default() -> Self {
        Self {
            eps: 1e-6,
            gamma_us: [0.98, 0.01, 0.01],
            gamma_es: [1.0 / 16.0, 5.0 / 8.0, 5.0 / 16.0],
        }
    }
}

impl WenoParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.eps > 0.0) {
            return Err(Error::Config(format!("eps must be positive, got {}", self.eps)));
        }
        for (name, g) in [("gamma_us", self.gamma_us), ("gamma_es", self.gamma_es)] {
            let sum: f64 = g.iter().sum();
            if g.iter().any(|&x| !(x > 0.0)) || (sum - 1.0).abs() > 1e-12 {
                return Err(Error::Config(format!(
                    "{name} must be positive and sum to one, got {g:?}"
                )));
            }
        }
        Ok(())
    }
}

/// Interface interpolation variant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InterpKind {
    /// Quartic interpolant on the full five-point stencil (linear upwind scheme).
    LinearUs,
    /// WENO on one quartic and two linear substencils.
    WenoUs,
    /// Classical WENO on three quadratic substencils.
    WenoEs,
    /// Quartic where no substencil quadratic has an interior extremum, `WenoUs` elsewhere.
    HybridUs,
}

impl fmt::Display for InterpKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InterpKind::LinearUs => "linear-us",
            InterpKind::WenoUs => "weno-us",
            InterpKind::WenoEs => "weno-es",
            InterpKind::HybridUs => "hybrid-us",
        })
    }
}

impl FromStr for InterpKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "linear-us" => Ok(InterpKind::LinearUs),
            "weno-us" => Ok(InterpKind::WenoUs),
            "weno-es" => Ok(InterpKind::WenoEs),
            "hybrid-us" => Ok(InterpKind::HybridUs),
            other => Err(Error::Config(format!(
                "unknown scheme `{other}` (expected linear-us|weno-us|weno-es|hybrid-us)"
            ))),
        }
    }
}

/// Quadratic interpolants on the three three-point substencils, as
/// `(a, b)` with `q(ξ) = a ξ² + b ξ + u[i]`.
#[inline]
fn quadratic_coefficients(w: &StencilWindow) -> [(f64, f64); 3] {
    let [um2, um1, u0, up1, up2] = w.0;
    [
        (0.5 * (um2 - 2.0 * um1 + u0), 0.5 * (um2 - 4.0 * um1 + 3.0 * u0)),
        (0.5 * (um1 - 2.0 * u0 + up1), 0.5 * (up1 - um1)),
        (0.5 * (u0 - 2.0 * up1 + up2), 0.5 * (-3.0 * u0 + 4.0 * up1 - up2)),
    ]
}

/// Equal-sized-substencil WENO interpolation.
pub fn interp_es(w: &StencilWindow, params: &WenoParams) -> f64 {
    let u0 = w.0[2];
    let mut num = 0.0;
    let mut den = 0.0;
    for ((a, b), gamma) in quadratic_coefficients(w).into_iter().zip(params.gamma_es) {
        // ∫ over the target cell of h(q')² + h³(q'')²
        let beta = b * b + 13.0 / 3.0 * a * a;
        let weight = gamma / ((params.eps + beta) * (params.eps + beta));
        num += weight * (0.25 * a + 0.5 * b + u0);
        den += weight;
    }
    num / den
}

/// Quartic interpolant through all five points, evaluated at `ξ = 1/2`.
#[inline]
pub fn interp_us_linear(w: &StencilWindow) -> f64 {
    let [um2, um1, u0, up1, up2] = w.0;
    (3.0 * um2 - 20.0 * um1 + 90.0 * u0 + 60.0 * up1 - 5.0 * up2) / 128.0
}

/// Smoothness indicators of the quartic and the two linear substencil interpolants.
#[inline]
pub fn smoothness_us(w: &StencilWindow) -> [f64; 3] {
    let [um2, um1, u0, up1, up2] = w.0;
    let beta1 = (1228889.0 * um1 * um1
        + (-3495756.0 * u0 - 601771.0 * um2 + 2100862.0 * up1 - 461113.0 * up2) * um1
        + 82364.0 * um2 * um2
        + (799977.0 * u0 - 461113.0 * up1 + 98179.0 * up2) * um2
        + 1228889.0 * up1 * up1
        + (-3495756.0 * u0 - 601771.0 * up2) * up1
        + 2695779.0 * u0 * u0
        + 799977.0 * u0 * up2
        + 82364.0 * up2 * up2)
        / 60480.0;
    let beta2 = (um1 - u0) * (um1 - u0);
    let beta3 = (u0 - up1) * (u0 - up1);
    [beta1, beta2, beta3]
}

/// Normalized nonlinear weights of the unequal-sized-substencil scheme.
#[inline]
pub fn weights_us(beta: &[f64; 3], params: &WenoParams) -> [f64; 3] {
    let t = 0.5 * ((beta[0] - beta[1]).abs() + (beta[0] - beta[2]).abs());
    let tau = t * t;
    let g = params.gamma_us;
    let raw = [
        g[0] * (1.0 + tau / (params.eps + beta[0])),
        g[1] * (1.0 + tau / (params.eps + beta[1])),
        g[2] * (1.0 + tau / (params.eps + beta[2])),
    ];
    let sum = raw[0] + raw[1] + raw[2];
    [raw[0] / sum, raw[1] / sum, raw[2] / sum]
}

/// Unequal-sized-substencil WENO interpolation.
pub fn interp_us_weno(w: &StencilWindow, params: &WenoParams) -> f64 {
    let [_, um1, u0, up1, _] = w.0;
    let p1 = interp_us_linear(w);
    let p2 = u0 + 0.5 * (u0 - um1);
    let p3 = 0.5 * (u0 + up1);
    let omega = weights_us(&smoothness_us(w), params);
    let g = params.gamma_us;
    omega[0] * (p1 / g[0] - g[1] / g[0] * p2 - g[2] / g[0] * p3) + omega[1] * p2 + omega[2] * p3
}

/// Substencil intervals in `ξ` units: `T1 = [-5/2, 1/2]`, `T2 = [-3/2, 3/2]`, `T3 = [-1/2, 5/2]`.
const SUBSTENCIL_SPANS: [(f64, f64); 3] = [(-2.5, 0.5), (-1.5, 1.5), (-0.5, 2.5)];

/// Whether the target point is a troubled cell: some substencil quadratic has its
/// extremum inside (or on the boundary of) its own substencil.
#[inline]
pub fn detect_troubled(w: &StencilWindow) -> bool {
    let scale = w.0.iter().fold(1.0f64, |m, x| m.max(x.abs()));
    let zero = 1e-14 * scale;
    for ((a, b), (lo, hi)) in quadratic_coefficients(w).into_iter().zip(SUBSTENCIL_SPANS) {
        if a.abs() <= zero {
            continue;
        }
        // root = -b / 2a, compared after multiplying through by 2|a|
        let t = if a > 0.0 { -b } else { b };
        let two_a = 2.0 * a.abs();
        if two_a * lo <= t && t <= two_a * hi {
            return true;
        }
    }
    false
}

#[inline]
pub fn interp_hybrid(w: &StencilWindow, params: &WenoParams) -> f64 {
    if detect_troubled(w) {
        interp_us_weno(w, params)
    } else {
        interp_us_linear(w)
    }
}

/// Left-biased interface value of the given kind.
#[inline]
pub fn interpolate(kind: InterpKind, w: &StencilWindow, params: &WenoParams) -> f64 {
    match kind {
        InterpKind::LinearUs => interp_us_linear(w),
        InterpKind::WenoUs => interp_us_weno(w, params),
        InterpKind::WenoEs => interp_es(w, params),
        InterpKind::HybridUs => interp_hybrid(w, params),
    }
}

/// `(u⁻, u⁺)` at the interface between `line[i]` and `line[i+1]`.
pub fn interp_minus_plus(
    line: &[f64],
    i: usize,
    kind: InterpKind,
    params: &WenoParams,
) -> Result<(f64, f64)> {
    if i < 2 || i + 3 >= line.len() {
        return Err(Error::OutOfRange {
            index: i,
            len: line.len(),
        });
    }
    let minus = StencilWindow::centered(line, i)?;
    let plus = StencilWindow::centered(line, i + 1)?.reversed();
    Ok((interpolate(kind, &minus, params), interpolate(kind, &plus, params)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(v: [f64; 5]) -> StencilWindow {
        StencilWindow(v)
    }

    #[test]
    fn constant_windows_are_reproduced() {
        let p = WenoParams::default();
        let c = StencilWindow([2.75; 5]);
        assert_eq!(interp_es(&c, &p), 2.75);
        assert_eq!(interp_us_linear(&c), 2.75);
        assert_eq!(interp_us_weno(&c, &p), 2.75);
        assert_eq!(interp_hybrid(&c, &p), 2.75);
        assert_eq!(smoothness_us(&c), [0.0, 0.0, 0.0]);
    }

    #[test]
    fn linear_windows_are_reproduced() {
        let p = WenoParams::default();
        // u = 0.3 + 1.7 x on h = 0.1 centered at x = 2
        let h = 0.1;
        let vals = std::array::from_fn(|k| 0.3 + 1.7 * (2.0 + (k as f64 - 2.0) * h));
        let exact = 0.3 + 1.7 * (2.0 + 0.5 * h);
        let win = w(vals);
        for value in [
            interp_es(&win, &p),
            interp_us_linear(&win),
            interp_us_weno(&win, &p),
            interp_hybrid(&win, &p),
        ] {
            assert!((value - exact).abs() < 1e-12, "{value} vs {exact}");
        }
    }

    #[test]
    fn quartic_reproduced_by_linear_scheme() {
        let win = w([16.0, 1.0, 0.0, 1.0, 16.0]);
        assert_eq!(interp_us_linear(&win), 0.0625);
    }

    #[test]
    fn frozen_formula_values() {
        let p = WenoParams::default();
        let win = w([1.0, 2.0, 4.0, 8.0, 16.0]);
        assert_eq!(interp_us_linear(&win), 5.6484375);
        assert!((interp_es(&win, &p) - 5.6367579292179969172).abs() < 1e-13);
        assert!((interp_us_weno(&win, &p) - 5.6355262713284305544).abs() < 1e-13);
    }

    #[test]
    fn smoothness_indicator_values() {
        let b = smoothness_us(&w([0.0, 0.0, 1.0, 0.0, 0.0]));
        assert!((b[0] - 2695779.0 / 60480.0).abs() < 1e-12);
        assert_eq!((b[1], b[2]), (1.0, 1.0));
        // linear data u = b ξ: every indicator reduces to b²
        let b = smoothness_us(&w([-6.0, -3.0, 0.0, 3.0, 6.0]));
        assert!((b[0] - 9.0).abs() < 1e-10);
        assert_eq!((b[1], b[2]), (9.0, 9.0));
    }

    #[test]
    fn step_window_stays_bounded() {
        let p = WenoParams::default();
        let v = interp_us_weno(&w([1.0, 1.0, 1.0, 0.0, 0.0]), &p);
        assert!((v - 0.99999553912032529476).abs() < 1e-13);
        assert!((0.0..=1.0).contains(&v));
    }

    #[test]
    fn troubled_cell_detection() {
        assert!(!detect_troubled(&w([1.0, 2.0, 3.0, 4.0, 5.0])));
        assert!(detect_troubled(&w([1.0, 2.0, 3.0, 2.0, 1.0])));
        // u = (ξ+2)²: the first quadratic has its vertex at ξ = -2 inside T1
        assert!(detect_troubled(&w([0.0, 1.0, 4.0, 9.0, 16.0])));
        // exponential data puts root1 exactly on the closed boundary ξ = -5/2
        assert!(detect_troubled(&w([1.0, 2.0, 4.0, 8.0, 16.0])));
        // smooth monotone convex data whose vertices all lie far outside their spans
        assert!(!detect_troubled(&w([-2.0, -1.0, 0.0, 1.0, 2.0].map(|k: f64| (0.1 * k).exp()))));
    }

    #[test]
    fn hybrid_selects_by_detector() {
        let p = WenoParams::default();
        let lin = w([1.0, 2.0, 3.0, 4.0, 5.0]);
        assert_eq!(interp_hybrid(&lin, &p), interp_us_linear(&lin));
        let peak = w([1.0, 2.0, 3.0, 2.0, 1.0]);
        assert_eq!(interp_hybrid(&peak, &p), interp_us_weno(&peak, &p));
    }

    #[test]
    fn hybrid_is_linear_on_monotone_sine_samples() {
        let p = WenoParams::default();
        let h = 0.05;
        let line: Vec<f64> = (0..200).map(|k| (k as f64 * h).sin()).collect();
        let mut linear_points = 0;
        for i in 2..line.len() - 2 {
            let win = StencilWindow::centered(&line, i).unwrap();
            if !detect_troubled(&win) {
                linear_points += 1;
                assert_eq!(interp_hybrid(&win, &p), interp_us_linear(&win));
            }
        }
        // only the neighbourhoods of the extrema are flagged
        assert!(linear_points > 150, "{linear_points}");
    }

    #[test]
    fn minus_plus_symmetry() {
        let p = WenoParams::default();
        let line = [0.3, 1.0, 2.0, 2.0, 1.0, 0.3];
        for kind in [InterpKind::LinearUs, InterpKind::WenoUs, InterpKind::WenoEs, InterpKind::HybridUs] {
            let (m, pl) = interp_minus_plus(&line, 2, kind, &p).unwrap();
            assert_eq!(m, pl);
            let (m, pl) = interp_minus_plus(&[4.0; 6], 2, kind, &p).unwrap();
            assert!((m - 4.0).abs() < 1e-14 && (pl - 4.0).abs() < 1e-14);
        }
        assert!(interp_minus_plus(&line, 1, InterpKind::WenoUs, &p).is_err());
        assert!(interp_minus_plus(&line, 3, InterpKind::WenoUs, &p).is_err());
    }

    #[test]
    fn params_validation() {
        assert!(WenoParams::default().validate().is_ok());
        let bad = WenoParams {
            gamma_us: [0.5, 0.5, 0.0],
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        let bad = WenoParams {
            eps: 0.0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn parse_kinds() {
        for kind in [InterpKind::LinearUs, InterpKind::WenoUs, InterpKind::WenoEs, InterpKind::HybridUs] {
            assert_eq!(kind.to_string().parse::<InterpKind>().unwrap(), kind);
        }
        assert!("weno-z".parse::<InterpKind>().is_err());
    }
}
