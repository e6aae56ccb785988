//! Polar decompositions of the three phase-bearing sectors: complex scalars
//! `α + βI`, complex vectors `a + bI`, and bivectors.

use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::algebra::{grades, Multivector};
use crate::error::{Error, Result};

/// Relative threshold below which a contraction counts as null.
pub const NULL_TOL: f64 = 1e-12;

/// A complex scalar `α + βI` built from the scalar and pseudoscalar grades.
#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct ComplexScalar {
    pub alpha: f64,
    pub beta: f64,
}

impl ComplexScalar {
    pub const fn new(alpha: f64, beta: f64) -> Self {
        ComplexScalar { alpha, beta }
    }

    /// Reads the scalar and pseudoscalar coefficients of `m`.
    pub fn of(m: &Multivector) -> Self {
        ComplexScalar::new(m.scalar_part(), m.pseudoscalar_part())
    }

    pub fn to_multivector(self) -> Multivector {
        Multivector::complex(self.alpha, self.beta)
    }

    pub fn conj(self) -> Self {
        ComplexScalar::new(self.alpha, -self.beta)
    }

    pub fn norm_sq(self) -> f64 {
        self.alpha * self.alpha + self.beta * self.beta
    }

    pub fn abs(self) -> f64 {
        self.alpha.hypot(self.beta)
    }

    /// Principal argument in (−π, π].
    pub fn arg(self) -> f64 {
        self.beta.atan2(self.alpha)
    }

    /// `exp(Iθ)`.
    pub fn cis(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        ComplexScalar::new(c, s)
    }
}

impl Add for ComplexScalar {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        ComplexScalar::new(self.alpha + o.alpha, self.beta + o.beta)
    }
}

impl Sub for ComplexScalar {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        ComplexScalar::new(self.alpha - o.alpha, self.beta - o.beta)
    }
}

impl Neg for ComplexScalar {
    type Output = Self;
    fn neg(self) -> Self {
        ComplexScalar::new(-self.alpha, -self.beta)
    }
}

impl Mul for ComplexScalar {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        ComplexScalar::new(
            self.alpha * o.alpha - self.beta * o.beta,
            self.alpha * o.beta + self.beta * o.alpha,
        )
    }
}

/// Which sector a [`PolarForm`] belongs to; fixes whether the phase enters whole or halved.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sector {
    Scalar,
    Vector,
    Bivector,
}

/// A canonical part together with its pseudoscalar phase.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PolarForm {
    pub canonical: Multivector,
    pub phase: f64,
    pub magnitude: f64,
    pub is_null: bool,
    pub sector: Sector,
}

impl PolarForm {
    /// Reassembles the input: `canonical·exp(Iφ)` for scalars, `canonical·exp(Iφ/2)` otherwise.
    pub fn reconstruct(&self) -> Multivector {
        let angle = match self.sector {
            Sector::Scalar => self.phase,
            Sector::Vector | Sector::Bivector => 0.5 * self.phase,
        };
        self.canonical * Multivector::phase(angle)
    }
}

/// `ζ = |ζ| exp(Iφ)`.
pub fn scalar_polar(zeta: ComplexScalar) -> PolarForm {
    let magnitude = zeta.abs();
    if magnitude == 0.0 {
        return PolarForm {
            canonical: Multivector::ZERO,
            phase: 0.0,
            magnitude: 0.0,
            is_null: true,
            sector: Sector::Scalar,
        };
    }
    PolarForm {
        canonical: Multivector::scalar(magnitude),
        phase: zeta.arg(),
        magnitude,
        is_null: false,
        sector: Sector::Scalar,
    }
}

/// Polar form of a complex vector `z = a + bI` from the contraction `z~z`.
pub fn vector_polar(z: &Multivector) -> Result<PolarForm> {
    if !z.has_only_grades(grades::ODD, NULL_TOL) {
        return Err(Error::WrongGrade {
            context: "vector_polar",
            expected: "an odd multivector with grades {1, 3}",
        });
    }
    let contraction = ComplexScalar::of(&(z.reverse() * *z));
    Ok(from_contraction(*z, contraction, Sector::Vector))
}

/// Polar form of a bivector `F` from `F² = |A|² − |B|² + 2(A·B)I`.
pub fn bivector_polar(f: &Multivector) -> Result<PolarForm> {
    if !f.has_only_grades(grades::BIVECTOR, NULL_TOL) {
        return Err(Error::WrongGrade {
            context: "bivector_polar",
            expected: "a homogeneous grade-2 multivector",
        });
    }
    let square = ComplexScalar::of(&(*f * *f));
    Ok(from_contraction(*f, square, Sector::Bivector))
}

fn from_contraction(x: Multivector, contraction: ComplexScalar, sector: Sector) -> PolarForm {
    if contraction.abs() <= NULL_TOL * x.norm_sq() {
        return PolarForm {
            canonical: x,
            phase: 0.0,
            magnitude: 0.0,
            is_null: true,
            sector,
        };
    }
    let phase = contraction.arg();
    PolarForm {
        canonical: x * Multivector::phase(-0.5 * phase),
        phase,
        magnitude: contraction.abs().sqrt(),
        is_null: false,
        sector,
    }
}
