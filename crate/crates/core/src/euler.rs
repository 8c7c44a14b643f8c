//! Euler-equation algebra for an ideal gas: state conversions, physical fluxes
//! and characteristic-speed bounds.

use std::ops::{Add, Mul, Sub};

use crate::error::{Error, Result};

/// Coordinate direction of a flux or a stencil line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
}

/// Ideal-gas model, parameterized by the ratio of specific heats.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GasModel {
    pub gamma: f64,
}

impl Default for GasModel {
    fn default() -> Self {
        Self { gamma: 1.4 }
    }
}

impl GasModel {
    pub fn new(gamma: f64) -> Result<Self> {
        if !(gamma > 1.0) {
            return Err(Error::Config(format!("gamma must exceed 1, got {gamma}")));
        }
        Ok(Self { gamma })
    }

    #[inline]
    pub fn sound_speed(&self, rho: f64, p: f64) -> f64 {
        (self.gamma * p / rho).sqrt()
    }
}

/// Conservative variables `(rho, rho u, rho v, E)` at a grid point.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ConservedState {
    pub rho: f64,
    pub mx: f64,
    pub my: f64,
    pub energy: f64,
}

/// Primitive variables `(rho, u, v, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PrimitiveState {
    pub rho: f64,
    pub u: f64,
    pub v: f64,
    pub p: f64,
}

impl PrimitiveState {
    pub const fn new(rho: f64, u: f64, v: f64, p: f64) -> Self {
        Self { rho, u, v, p }
    }

    /// Velocity component along `axis`.
    #[inline]
    pub fn normal_velocity(&self, axis: Axis) -> f64 {
        match axis {
            Axis::X => self.u,
            Axis::Y => self.v,
        }
    }

    pub fn check(&self) -> Result<()> {
        if self.rho > 0.0 && self.p > 0.0 && self.u.is_finite() && self.v.is_finite() {
            Ok(())
        } else {
            Err(Error::InvalidState {
                rho: self.rho,
                p: self.p,
                location: None,
            })
        }
    }

    pub fn to_conserved(&self, gas: &GasModel) -> Result<ConservedState> {
        self.check()?;
        Ok(to_conserved_unchecked(self, gas))
    }
}

#[inline]
fn to_conserved_unchecked(w: &PrimitiveState, gas: &GasModel) -> ConservedState {
    ConservedState {
        rho: w.rho,
        mx: w.rho * w.u,
        my: w.rho * w.v,
        energy: w.p / (gas.gamma - 1.0) + 0.5 * w.rho * (w.u * w.u + w.v * w.v),
    }
}

impl ConservedState {
    pub const fn new(rho: f64, mx: f64, my: f64, energy: f64) -> Self {
        Self {
            rho,
            mx,
            my,
            energy,
        }
    }

    #[inline]
    pub fn from_array(a: [f64; 4]) -> Self {
        Self::new(a[0], a[1], a[2], a[3])
    }

    #[inline]
    pub fn to_array(self) -> [f64; 4] {
        [self.rho, self.mx, self.my, self.energy]
    }

    /// Pressure without validity checks.
    #[inline]
    pub fn pressure(&self, gas: &GasModel) -> f64 {
        (gas.gamma - 1.0) * (self.energy - 0.5 * (self.mx * self.mx + self.my * self.my) / self.rho)
    }

    pub fn is_finite(&self) -> bool {
        self.rho.is_finite() && self.mx.is_finite() && self.my.is_finite() && self.energy.is_finite()
    }

    pub fn to_primitive(&self, gas: &GasModel) -> Result<PrimitiveState> {
        let p = self.pressure(gas);
        if !(self.rho > 0.0 && p > 0.0) || !self.is_finite() {
            return Err(Error::InvalidState {
                rho: self.rho,
                p,
                location: None,
            });
        }
        Ok(PrimitiveState {
            rho: self.rho,
            u: self.mx / self.rho,
            v: self.my / self.rho,
            p,
        })
    }

    /// Momentum component along `axis`.
    #[inline]
    pub fn normal_momentum(&self, axis: Axis) -> f64 {
        match axis {
            Axis::X => self.mx,
            Axis::Y => self.my,
        }
    }

    /// Mirror image across a wall normal to `axis`: the normal momentum flips sign.
    #[inline]
    pub fn reflected(&self, axis: Axis) -> Self {
        match axis {
            Axis::X => Self { mx: -self.mx, ..*self },
            Axis::Y => Self { my: -self.my, ..*self },
        }
    }

    /// Swap the roles of the two velocity components.
    #[inline]
    pub fn swapped(&self) -> Self {
        Self {
            mx: self.my,
            my: self.mx,
            ..*self
        }
    }
}

impl Add for ConservedState {
    type Output = Self;
    #[inline]
    fn add(self, o: Self) -> Self {
        Self::new(self.rho + o.rho, self.mx + o.mx, self.my + o.my, self.energy + o.energy)
    }
}

impl Sub for ConservedState {
    type Output = Self;
    #[inline]
    fn sub(self, o: Self) -> Self {
        Self::new(self.rho - o.rho, self.mx - o.mx, self.my - o.my, self.energy - o.energy)
    }
}

impl Mul<ConservedState> for f64 {
    type Output = ConservedState;
    #[inline]
    fn mul(self, s: ConservedState) -> ConservedState {
        ConservedState::new(self * s.rho, self * s.mx, self * s.my, self * s.energy)
    }
}

pub fn to_primitive(u: &ConservedState, gas: &GasModel) -> Result<PrimitiveState> {
    u.to_primitive(gas)
}

pub fn to_conserved(w: &PrimitiveState, gas: &GasModel) -> Result<ConservedState> {
    w.to_conserved(gas)
}

/// Physical flux of a primitive state along `axis`.
#[inline]
pub fn primitive_flux(w: &PrimitiveState, axis: Axis, gas: &GasModel) -> [f64; 4] {
    let energy = w.p / (gas.gamma - 1.0) + 0.5 * w.rho * (w.u * w.u + w.v * w.v);
    match axis {
        Axis::X => {
            let m = w.rho * w.u;
            [m, m * w.u + w.p, m * w.v, w.u * (energy + w.p)]
        }
        Axis::Y => {
            let m = w.rho * w.v;
            [m, m * w.u, m * w.v + w.p, w.v * (energy + w.p)]
        }
    }
}

/// Physical flux `F(U)` or `G(U)` of a conserved state along `axis`.
#[inline]
pub fn flux(u: &ConservedState, axis: Axis, gas: &GasModel) -> Result<[f64; 4]> {
    let p = u.pressure(gas);
    if !(u.rho > 0.0 && p > 0.0) {
        return Err(Error::InvalidState {
            rho: u.rho,
            p,
            location: None,
        });
    }
    let vel_x = u.mx / u.rho;
    let vel_y = u.my / u.rho;
    Ok(match axis {
        Axis::X => [u.mx, u.mx * vel_x + p, u.mx * vel_y, vel_x * (u.energy + p)],
        Axis::Y => [u.my, u.my * vel_x, u.my * vel_y + p, vel_y * (u.energy + p)],
    })
}

pub fn flux_x(u: &ConservedState, gas: &GasModel) -> Result<[f64; 4]> {
    flux(u, Axis::X, gas)
}

pub fn flux_y(u: &ConservedState, gas: &GasModel) -> Result<[f64; 4]> {
    flux(u, Axis::Y, gas)
}

/// Left and right eigenvector matrices of the flux Jacobian along `axis` at the
/// Roe average of two states. Rows of `left` and columns of `right` are ordered by
/// the eigenvalues `v_n - c, v_n, v_n, v_n + c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Eigensystem {
    pub left: [[f64; 4]; 4],
    pub right: [[f64; 4]; 4],
}

impl Eigensystem {
    pub fn roe(u_l: &ConservedState, u_r: &ConservedState, axis: Axis, gas: &GasModel) -> Result<Self> {
        let w_l = u_l.to_primitive(gas)?;
        let w_r = u_r.to_primitive(gas)?;
        let (sl, sr) = (w_l.rho.sqrt(), w_r.rho.sqrt());
        let avg = |a: f64, b: f64| (sl * a + sr * b) / (sl + sr);
        let enthalpy = |u: &ConservedState, w: &PrimitiveState| (u.energy + w.p) / w.rho;
        let u = avg(w_l.u, w_r.u);
        let v = avg(w_l.v, w_r.v);
        let h = avg(enthalpy(u_l, &w_l), enthalpy(u_r, &w_r));
        // positive for any pair of valid states
        let c = ((gas.gamma - 1.0) * (h - 0.5 * (u * u + v * v))).sqrt();
        Ok(Self::at(u, v, h, c, axis, gas))
    }

    fn at(u: f64, v: f64, h: f64, c: f64, axis: Axis, gas: &GasModel) -> Self {
        let q2 = u * u + v * v;
        let b1 = (gas.gamma - 1.0) / (c * c);
        let b2 = 0.5 * b1 * q2;
        match axis {
            Axis::X => Self {
                left: [
                    [0.5 * (b2 + u / c), -0.5 * (b1 * u + 1.0 / c), -0.5 * b1 * v, 0.5 * b1],
                    [1.0 - b2, b1 * u, b1 * v, -b1],
                    [-v, 0.0, 1.0, 0.0],
                    [0.5 * (b2 - u / c), -0.5 * (b1 * u - 1.0 / c), -0.5 * b1 * v, 0.5 * b1],
                ],
                right: [
                    [1.0, 1.0, 0.0, 1.0],
                    [u - c, u, 0.0, u + c],
                    [v, v, 1.0, v],
                    [h - u * c, 0.5 * q2, v, h + u * c],
                ],
            },
            Axis::Y => Self {
                left: [
                    [0.5 * (b2 + v / c), -0.5 * b1 * u, -0.5 * (b1 * v + 1.0 / c), 0.5 * b1],
                    [1.0 - b2, b1 * u, b1 * v, -b1],
                    [-u, 1.0, 0.0, 0.0],
                    [0.5 * (b2 - v / c), -0.5 * b1 * u, -0.5 * (b1 * v - 1.0 / c), 0.5 * b1],
                ],
                right: [
                    [1.0, 1.0, 0.0, 1.0],
                    [u, u, 1.0, u],
                    [v - c, v, 0.0, v + c],
                    [h - v * c, 0.5 * q2, u, h + v * c],
                ],
            },
        }
    }

    #[inline]
    pub fn to_characteristic(&self, u: [f64; 4]) -> [f64; 4] {
        mat_vec(&self.left, u)
    }

    #[inline]
    pub fn from_characteristic(&self, w: [f64; 4]) -> [f64; 4] {
        mat_vec(&self.right, w)
    }
}

#[inline]
fn mat_vec(m: &[[f64; 4]; 4], x: [f64; 4]) -> [f64; 4] {
    std::array::from_fn(|r| m[r][0] * x[0] + m[r][1] * x[1] + m[r][2] * x[2] + m[r][3] * x[3])
}

/// Largest characteristic speeds `(max |u|+c, max |v|+c)` over a set of states.
pub fn max_wave_speeds<'a, I>(states: I, gas: &GasModel) -> Result<(f64, f64)>
where
    I: IntoIterator<Item = &'a ConservedState>,
{
    let mut alpha = (0.0f64, 0.0f64);
    for s in states {
        let w = s.to_primitive(gas)?;
        let c = gas.sound_speed(w.rho, w.p);
        alpha.0 = alpha.0.max(w.u.abs() + c);
        alpha.1 = alpha.1.max(w.v.abs() + c);
    }
    Ok(alpha)
}
