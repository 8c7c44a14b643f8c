//! Fifth-order alternative-WENO numerical flux.
//!
//! The interface flux is a monotone flux of interpolated conservative states plus
//! central-difference corrections for the second and fourth flux derivatives:
//!
//! f̂(i+1/2) = h(u⁻, u⁺) − (Δx²/24) f_xx + (7 Δx⁴/5760) f_xxxx

use crate::error::{Error, Result};
use std::fmt;
use std::str::FromStr;

use crate::euler::{flux, Axis, ConservedState, Eigensystem, GasModel};
use crate::interpolation::{interpolate, InterpKind, StencilWindow, WenoParams};
use crate::riemann::{numerical_flux, FluxKind, SpeedBound};

/// Numerical flux at an interface `(i+1/2, j)` or `(i, j+1/2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterfaceFlux(pub [f64; 4]);

/// Variables the interface interpolation acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum InterpVariables {
    /// Each conserved component on its own.
    Conserved,
    /// Local characteristic fields of the Roe-averaged Jacobian at the interface.
    #[default]
    Characteristic,
}

impl fmt::Display for InterpVariables {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InterpVariables::Conserved => "conserved",
            InterpVariables::Characteristic => "characteristic",
        })
    }
}

impl FromStr for InterpVariables {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "conserved" => Ok(InterpVariables::Conserved),
            "characteristic" => Ok(InterpVariables::Characteristic),
            other => Err(Error::Config(format!(
                "unknown interpolation variables `{other}` (expected conserved|characteristic)"
            ))),
        }
    }
}

/// Scheme choices shared by every interface of a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluxScheme {
    pub interp: InterpKind,
    pub flux: FluxKind,
    pub variables: InterpVariables,
    pub speed_bound: SpeedBound,
    pub weno: WenoParams,
    pub gas: GasModel,
}

impl FluxScheme {
    pub fn new(interp: InterpKind, flux: FluxKind) -> Self {
        Self {
            interp,
            flux,
            variables: InterpVariables::default(),
            speed_bound: SpeedBound::default(),
            weno: WenoParams::default(),
            gas: GasModel::default(),
        }
    }

    pub fn with_variables(mut self, variables: InterpVariables) -> Self {
        self.variables = variables;
        self
    }

    pub fn with_speed_bound(mut self, speed_bound: SpeedBound) -> Self {
        self.speed_bound = speed_bound;
        self
    }
}

fn check_span<T>(line: &[T], i: usize) -> Result<()> {
    if i < 2 || i + 3 >= line.len() {
        return Err(Error::OutOfRange {
            index: i,
            len: line.len(),
        });
    }
    Ok(())
}

#[inline]
fn stencil_sum(f: &[[f64; 4]], weights: [f64; 6]) -> [f64; 4] {
    std::array::from_fn(|k| {
        weights
            .iter()
            .zip(f)
            .fold(0.0, |acc, (w, fk)| acc + w * fk[k])
    })
}

const FXX_WEIGHTS: [f64; 6] = [-5.0, 39.0, -34.0, -34.0, 39.0, -5.0];
const FXXXX_WEIGHTS: [f64; 6] = [1.0, -3.0, 2.0, 2.0, -3.0, 1.0];

/// Second derivative of the flux at `i+1/2` from `f[i-2..=i+3]`.
pub fn correction_fxx(fline: &[[f64; 4]], i: usize, dx: f64) -> Result<[f64; 4]> {
    check_span(fline, i)?;
    Ok(fxx(&fline[i - 2..i + 4], dx))
}

/// Fourth derivative of the flux at `i+1/2` from `f[i-2..=i+3]`.
pub fn correction_fxxxx(fline: &[[f64; 4]], i: usize, dx: f64) -> Result<[f64; 4]> {
    check_span(fline, i)?;
    Ok(fxxxx(&fline[i - 2..i + 4], dx))
}

#[inline]
fn fxx(f: &[[f64; 4]], dx: f64) -> [f64; 4] {
    let s = stencil_sum(f, FXX_WEIGHTS);
    let scale = 1.0 / (48.0 * dx * dx);
    s.map(|x| x * scale)
}

#[inline]
fn fxxxx(f: &[[f64; 4]], dx: f64) -> [f64; 4] {
    let s = stencil_sum(f, FXXXX_WEIGHTS);
    let scale = 1.0 / (2.0 * dx * dx * dx * dx);
    s.map(|x| x * scale)
}

#[inline]
fn interpolate_components(comps: &[[f64; 4]; 6], kind: InterpKind, params: &WenoParams) -> ([f64; 4], [f64; 4]) {
    let mut minus = [0.0; 4];
    let mut plus = [0.0; 4];
    for k in 0..4 {
        let c: [f64; 6] = std::array::from_fn(|m| comps[m][k]);
        let left = StencilWindow([c[0], c[1], c[2], c[3], c[4]]);
        let right = StencilWindow([c[5], c[4], c[3], c[2], c[1]]);
        minus[k] = interpolate(kind, &left, params);
        plus[k] = interpolate(kind, &right, params);
    }
    (minus, plus)
}

/// Interface states `(u⁻, u⁺)` between `states[2]` and `states[3]`, interpolated
/// componentwise.
#[inline]
pub fn interface_states(
    states: &[ConservedState],
    kind: InterpKind,
    params: &WenoParams,
) -> (ConservedState, ConservedState) {
    debug_assert_eq!(states.len(), 6);
    let comps: [[f64; 4]; 6] = std::array::from_fn(|m| states[m].to_array());
    let (minus, plus) = interpolate_components(&comps, kind, params);
    (ConservedState::from_array(minus), ConservedState::from_array(plus))
}

/// Interface states interpolated in the local characteristic fields of `axis`.
pub fn interface_states_characteristic(
    states: &[ConservedState],
    axis: Axis,
    scheme: &FluxScheme,
) -> Result<(ConservedState, ConservedState)> {
    debug_assert_eq!(states.len(), 6);
    let eig = Eigensystem::roe(&states[2], &states[3], axis, &scheme.gas)?;
    let comps: [[f64; 4]; 6] = std::array::from_fn(|m| eig.to_characteristic(states[m].to_array()));
    let (minus, plus) = interpolate_components(&comps, scheme.interp, &scheme.weno);
    Ok((
        ConservedState::from_array(eig.from_characteristic(minus)),
        ConservedState::from_array(eig.from_characteristic(plus)),
    ))
}

/// Flux at the interface between `states[2]` and `states[3]` given the six states
/// `u[i-2..=i+3]` and their physical fluxes along `axis`. `lambda` is the grid-wide
/// bound, read only by LLF with [`SpeedBound::Global`].
#[inline]
pub fn interface_flux_window(
    states: &[ConservedState],
    phys: &[[f64; 4]],
    dx: f64,
    axis: Axis,
    lambda: f64,
    scheme: &FluxScheme,
) -> Result<[f64; 4]> {
    let (minus, plus) = match scheme.variables {
        InterpVariables::Conserved => interface_states(states, scheme.interp, &scheme.weno),
        InterpVariables::Characteristic => interface_states_characteristic(states, axis, scheme)?,
    };
    let bound = match scheme.speed_bound {
        SpeedBound::Local => None,
        SpeedBound::Global => Some(lambda),
    };
    let h = numerical_flux(scheme.flux, &minus, &plus, bound, axis, &scheme.gas)?;
    let d2 = fxx(phys, dx);
    let d4 = fxxxx(phys, dx);
    let c2 = dx * dx / 24.0;
    let c4 = 7.0 * dx * dx * dx * dx / 5760.0;
    Ok(std::array::from_fn(|k| h[k] - c2 * d2[k] + c4 * d4[k]))
}

/// Numerical flux at `i+1/2` along a line of conserved states.
pub fn interface_flux(
    uline: &[ConservedState],
    i: usize,
    dx: f64,
    axis: Axis,
    lambda: f64,
    scheme: &FluxScheme,
) -> Result<InterfaceFlux> {
    check_span(uline, i)?;
    let states = &uline[i - 2..i + 4];
    let mut phys = [[0.0; 4]; 6];
    for (p, s) in phys.iter_mut().zip(states) {
        *p = flux(s, axis, &scheme.gas)?;
    }
    interface_flux_window(states, &phys, dx, axis, lambda, scheme).map(InterfaceFlux)
}
