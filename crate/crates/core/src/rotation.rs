//! Single-qubit rotations `R(theta, n) = exp(-i theta/2 n.sigma)` in the `{|g>, |e>}` basis.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Tolerance on `|n| - 1` accepted for rotation axes.
pub const AXIS_TOLERANCE: f64 = 1e-12;

/// Unit rotation axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    x: f64,
    y: f64,
    z: f64,
}

impl Axis {
    pub const X: Axis = Axis {
        x: 1.0,
        y: 0.0,
        z: 0.0,
    };
    pub const Y: Axis = Axis {
        x: 0.0,
        y: 1.0,
        z: 0.0,
    };
    pub const Z: Axis = Axis {
        x: 0.0,
        y: 0.0,
        z: 1.0,
    };
    /// `(1, 0, 1)/sqrt(2)`: a pi rotation about it is a Hadamard up to a global phase.
    pub const HADAMARD: Axis = Axis {
        x: FRAC_1_SQRT_2,
        y: 0.0,
        z: FRAC_1_SQRT_2,
    };

    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let norm = (x * x + y * y + z * z).sqrt();
        if !norm.is_finite() || (norm - 1.0).abs() > AXIS_TOLERANCE {
            return Err(Error::AxisNotUnit(x, y, z));
        }
        Ok(Axis { x, y, z })
    }

    /// Normalizes an arbitrary nonzero vector.
    pub fn normalized(x: f64, y: f64, z: f64) -> Result<Self> {
        let norm = (x * x + y * y + z * z).sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::AxisNotUnit(x, y, z));
        }
        Ok(Axis {
            x: x / norm,
            y: y / norm,
            z: z / norm,
        })
    }

    pub fn components(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.z)
    }
}

/// Dense 2x2 complex matrix, row-major.
pub type Mat2 = [[C64; 2]; 2];

/// `cos(h), sin(h)`, exact when `h` is a multiple of pi/2 so pi and 2pi pulses
/// produce clean basis permutations.
fn cos_sin(h: f64) -> (f64, f64) {
    let k = (h / FRAC_PI_2).round();
    if (h - k * FRAC_PI_2).abs() <= 1e-14 * h.abs().max(1.0) {
        match (k as i64).rem_euclid(4) {
            0 => (1.0, 0.0),
            1 => (0.0, 1.0),
            2 => (-1.0, 0.0),
            _ => (0.0, -1.0),
        }
    } else {
        (h.cos(), h.sin())
    }
}

/// `exp(-i theta/2 n.sigma)` with standard Pauli matrices, `|g> = (1, 0)`.
pub fn rotation_matrix(theta: f64, axis: &Axis) -> Mat2 {
    let (c, s) = cos_sin(theta / 2.0);
    let [nx, ny, nz] = axis.components();
    // n.sigma = [[nz, nx - i ny], [nx + i ny, -nz]]
    [
        [C64::new(c, -s * nz), C64::new(-s * ny, -s * nx)],
        [C64::new(s * ny, -s * nx), C64::new(c, s * nz)],
    ]
}

/// Checks `theta` lies in `[-2pi, 2pi]` (with a little slack for parsed decimals).
pub fn check_angle(theta: f64) -> Result<()> {
    if !theta.is_finite() || theta.abs() > 2.0 * PI * (1.0 + 1e-15) {
        return Err(Error::AngleOutOfRange(theta));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: C64, b: C64) -> bool {
        (a - b).norm() < 1e-15
    }

    #[test]
    fn pi_about_x_is_minus_i_sigma_x() {
        let m = rotation_matrix(PI, &Axis::X);
        let mi = C64::new(0.0, -1.0);
        assert_eq!(m, [[C64::new(0.0, 0.0), mi], [mi, C64::new(0.0, 0.0)]]);
    }

    #[test]
    fn full_turn_is_minus_identity() {
        for axis in [Axis::X, Axis::Y, Axis::Z, Axis::HADAMARD] {
            let m = rotation_matrix(2.0 * PI, &axis);
            assert_eq!(m[0][0], C64::new(-1.0, 0.0));
            assert_eq!(m[1][1], C64::new(-1.0, 0.0));
            assert_eq!(m[0][1].norm(), 0.0);
            assert_eq!(m[1][0].norm(), 0.0);
        }
    }

    #[test]
    fn hadamard_axis() {
        let m = rotation_matrix(PI, &Axis::HADAMARD);
        let h = FRAC_1_SQRT_2;
        let mi = C64::new(0.0, -1.0);
        assert!(close(m[0][0], mi * h));
        assert!(close(m[0][1], mi * h));
        assert!(close(m[1][0], mi * h));
        assert!(close(m[1][1], -mi * h));
    }

    #[test]
    fn axis_validation() {
        assert!(Axis::new(1.0, 1.0, 0.0).is_err());
        assert!(Axis::new(0.6, 0.8, 0.0).is_ok());
        assert!(Axis::normalized(0.0, 0.0, 0.0).is_err());
        assert!(check_angle(7.0).is_err());
        assert!(check_angle(-2.0 * PI).is_ok());
    }
}
