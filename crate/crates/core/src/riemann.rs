//! Monotone two-state numerical fluxes: local Lax-Friedrichs and HLLC.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::euler::{primitive_flux, Axis, ConservedState, GasModel, PrimitiveState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FluxKind {
    Llf,
    Hllc,
}

impl fmt::Display for FluxKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FluxKind::Llf => "llf",
            FluxKind::Hllc => "hllc",
        })
    }
}

impl FromStr for FluxKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "llf" => Ok(FluxKind::Llf),
            "hllc" => Ok(FluxKind::Hllc),
            other => Err(Error::Config(format!("unknown flux `{other}` (expected llf|hllc)"))),
        }
    }
}

/// Dissipation speed of the LLF flux.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum SpeedBound {
    /// Largest `|v_n| + c` of the two interface states.
    #[default]
    Local,
    /// One per-direction bound for the whole grid, supplied by the caller.
    Global,
}

impl fmt::Display for SpeedBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SpeedBound::Local => "local",
            SpeedBound::Global => "global",
        })
    }
}

impl FromStr for SpeedBound {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "local" => Ok(SpeedBound::Local),
            "global" => Ok(SpeedBound::Global),
            other => Err(Error::Config(format!(
                "unknown speed bound `{other}` (expected local|global)"
            ))),
        }
    }
}

/// `max(|v_n| + c)` over the two states.
#[inline]
pub fn local_speed_bound(w_l: &PrimitiveState, w_r: &PrimitiveState, axis: Axis, gas: &GasModel) -> f64 {
    (w_l.normal_velocity(axis).abs() + gas.sound_speed(w_l.rho, w_l.p))
        .max(w_r.normal_velocity(axis).abs() + gas.sound_speed(w_r.rho, w_r.p))
}

/// Acoustic and contact wave-speed estimates of the HLLC fan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveSpeeds {
    pub s_l: f64,
    pub s_r: f64,
    pub s_m: f64,
}

/// Below this magnitude the contact-speed quotient is treated as undefined.
const DEGENERATE_DENOMINATOR: f64 = 1e-300;

/// `½[F(U_l) + F(U_r) − λ(U_r − U_l)]` along `axis`.
pub fn llf_flux(
    u_l: &ConservedState,
    u_r: &ConservedState,
    lambda: f64,
    axis: Axis,
    gas: &GasModel,
) -> Result<[f64; 4]> {
    let w_l = u_l.to_primitive(gas)?;
    let w_r = u_r.to_primitive(gas)?;
    Ok(llf_from_parts(u_l, u_r, &w_l, &w_r, lambda, axis, gas))
}

#[inline]
fn llf_from_parts(
    u_l: &ConservedState,
    u_r: &ConservedState,
    w_l: &PrimitiveState,
    w_r: &PrimitiveState,
    lambda: f64,
    axis: Axis,
    gas: &GasModel,
) -> [f64; 4] {
    let f_l = primitive_flux(w_l, axis, gas);
    let f_r = primitive_flux(w_r, axis, gas);
    let a = u_l.to_array();
    let b = u_r.to_array();
    let mut out = [0.0; 4];
    for k in 0..4 {
        out[k] = 0.5 * (f_l[k] + f_r[k] - lambda * (b[k] - a[k]));
    }
    out
}

/// Einfeldt-type acoustic bounds built on Roe-averaged normal velocity and enthalpy,
/// with the contact speed from the momentum balance across the fan.
pub fn hllc_wave_speeds(
    w_l: &PrimitiveState,
    w_r: &PrimitiveState,
    axis: Axis,
    gas: &GasModel,
) -> Result<WaveSpeeds> {
    w_l.check()?;
    w_r.check()?;
    let (speeds, den) = wave_speeds_unchecked(w_l, w_r, axis, gas);
    if den.abs() < DEGENERATE_DENOMINATOR {
        return Err(Error::Config(
            "degenerate HLLC contact-speed denominator".to_string(),
        ));
    }
    Ok(speeds)
}

#[inline]
fn enthalpy(w: &PrimitiveState, gas: &GasModel) -> f64 {
    let energy = w.p / (gas.gamma - 1.0) + 0.5 * w.rho * (w.u * w.u + w.v * w.v);
    (energy + w.p) / w.rho
}

/// Returns the speeds and the denominator of the contact-speed quotient.
#[inline]
fn wave_speeds_unchecked(
    w_l: &PrimitiveState,
    w_r: &PrimitiveState,
    axis: Axis,
    gas: &GasModel,
) -> (WaveSpeeds, f64) {
    let v_l = w_l.normal_velocity(axis);
    let v_r = w_r.normal_velocity(axis);
    let c_l = gas.sound_speed(w_l.rho, w_l.p);
    let c_r = gas.sound_speed(w_r.rho, w_r.p);
    let ratio = (w_r.rho / w_l.rho).sqrt();
    let h_avg = (enthalpy(w_l, gas) + enthalpy(w_r, gas) * ratio) / (1.0 + ratio);
    let v_avg = (v_l + v_r * ratio) / (1.0 + ratio);
    let c_avg = ((gas.gamma - 1.0) * (h_avg - 0.5 * v_avg * v_avg)).sqrt();
    let s_l = (v_l - c_l).min(v_avg - c_avg);
    let s_r = (v_r + c_r).max(v_avg + c_avg);
    let num = w_r.rho * v_r * (s_r - v_r) - w_l.rho * v_l * (s_l - v_l) + w_l.p - w_r.p;
    let den = w_r.rho * (s_r - v_r) - w_l.rho * (s_l - v_l);
    (WaveSpeeds { s_l, s_r, s_m: num / den }, den)
}

/// Intermediate state between the acoustic wave `s` and the contact `s_m`.
/// The normal momentum slot carries `S_M`; the tangential velocity is advected unchanged.
#[inline]
fn star_state(w: &PrimitiveState, u: &ConservedState, s: f64, s_m: f64, axis: Axis) -> [f64; 4] {
    let v_n = w.normal_velocity(axis);
    let factor = w.rho * (s - v_n) / (s - s_m);
    let energy = factor * (u.energy / w.rho + (s_m - v_n) * (s_m + w.p / (w.rho * (s - v_n))));
    match axis {
        Axis::X => [factor, factor * s_m, factor * w.v, energy],
        Axis::Y => [factor, factor * w.u, factor * s_m, energy],
    }
}

pub fn hllc_flux(
    u_l: &ConservedState,
    u_r: &ConservedState,
    axis: Axis,
    gas: &GasModel,
) -> Result<[f64; 4]> {
    let w_l = u_l.to_primitive(gas)?;
    let w_r = u_r.to_primitive(gas)?;
    Ok(hllc_from_parts(u_l, u_r, &w_l, &w_r, axis, gas))
}

#[inline]
fn hllc_from_parts(
    u_l: &ConservedState,
    u_r: &ConservedState,
    w_l: &PrimitiveState,
    w_r: &PrimitiveState,
    axis: Axis,
    gas: &GasModel,
) -> [f64; 4] {
    let (WaveSpeeds { s_l, s_r, s_m }, den) = wave_speeds_unchecked(w_l, w_r, axis, gas);
    if den.abs() < DEGENERATE_DENOMINATOR || !s_m.is_finite() {
        let lambda = local_speed_bound(w_l, w_r, axis, gas);
        return llf_from_parts(u_l, u_r, w_l, w_r, lambda, axis, gas);
    }
    if s_l > 0.0 {
        primitive_flux(w_l, axis, gas)
    } else if s_m > 0.0 {
        let f = primitive_flux(w_l, axis, gas);
        let star = star_state(w_l, u_l, s_l, s_m, axis);
        let u = u_l.to_array();
        std::array::from_fn(|k| f[k] + s_l * (star[k] - u[k]))
    } else if s_r > 0.0 {
        let f = primitive_flux(w_r, axis, gas);
        let star = star_state(w_r, u_r, s_r, s_m, axis);
        let u = u_r.to_array();
        std::array::from_fn(|k| f[k] + s_r * (star[k] - u[k]))
    } else {
        primitive_flux(w_r, axis, gas)
    }
}

/// Dispatch to the selected monotone flux. `lambda` is only used by LLF; `None`
/// selects the local bound of the two states.
#[inline]
pub fn numerical_flux(
    kind: FluxKind,
    u_l: &ConservedState,
    u_r: &ConservedState,
    lambda: Option<f64>,
    axis: Axis,
    gas: &GasModel,
) -> Result<[f64; 4]> {
    let w_l = u_l.to_primitive(gas)?;
    let w_r = u_r.to_primitive(gas)?;
    Ok(match kind {
        FluxKind::Llf => {
            let lambda = lambda.unwrap_or_else(|| local_speed_bound(&w_l, &w_r, axis, gas));
            llf_from_parts(u_l, u_r, &w_l, &w_r, lambda, axis, gas)
        }
        FluxKind::Hllc => hllc_from_parts(u_l, u_r, &w_l, &w_r, axis, gas),
    })
}
