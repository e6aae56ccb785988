//! Electromagnetism with a complex 4-vector potential `z = λ−a_e + λ+a_m I`.
//!
//! The measurable field is the spinor `ψ = ∇z = W_e/c² + F + (W_m/c)I` with
//! `F = E/c + μH I`; the power fields `W_e`, `W_m` vanish only in Lorenz gauge.
//! Source equations read `∇ψ = μj` with `j = j_e + (j_m/c)I`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{grades, Frame, Grade, Multivector, Vec3};
use crate::envelope::{self, CVec3};
use crate::error::{Error, Result};
use crate::field::{Analytic, Event, SpacetimeField};
use crate::lattice::{self, MultivectorField};

/// A linear, isotropic, lossless medium together with the potential couplings λ±.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmMedium {
    pub epsilon: f64,
    pub mu: f64,
    pub c: f64,
    pub zeta: f64,
    pub lambda_minus: f64,
    pub lambda_plus: f64,
}

/// Vacuum permittivity (F/m).
pub const EPSILON_0: f64 = 8.854_187_818_8e-12;
/// Vacuum permeability (H/m).
pub const MU_0: f64 = 1.256_637_061_27e-6;

impl EmMedium {
    pub fn new(epsilon: f64, mu: f64) -> Result<Self> {
        if !(epsilon > 0.0 && mu > 0.0 && epsilon.is_finite() && mu.is_finite()) {
            return Err(Error::invalid(
                "EmMedium",
                "permittivity and permeability must be positive",
            ));
        }
        let c = 1.0 / (epsilon * mu).sqrt();
        Ok(EmMedium {
            epsilon,
            mu,
            c,
            zeta: mu * c,
            lambda_minus: 0.5,
            lambda_plus: 0.5,
        })
    }

    pub fn vacuum() -> Self {
        EmMedium::new(EPSILON_0, MU_0).expect("vacuum constants are positive")
    }

    /// ε = μ = 1, so c = ζ = 1.
    pub fn natural() -> Self {
        EmMedium::new(1.0, 1.0).expect("unit constants are positive")
    }

    pub fn with_couplings(mut self, lambda_minus: f64, lambda_plus: f64) -> Self {
        self.lambda_minus = lambda_minus;
        self.lambda_plus = lambda_plus;
        self
    }

    /// Largest relative inconsistency among `c`, `ζ`, `ε`, `μ`.
    pub fn consistency_defect(&self) -> f64 {
        let c = 1.0 / (self.epsilon * self.mu).sqrt();
        ((self.c - c) / c)
            .abs()
            .max(((self.zeta - self.mu * c) / (self.mu * c)).abs())
    }
}

/// Frame-relative content of an EM spinor.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct EmFields3 {
    pub e: Vec3,
    pub h: Vec3,
    pub w_e: f64,
    pub w_m: f64,
}

/// Assembles `ψ = W_e/c² + E/c + μH I + (W_m/c)I`.
pub fn em_spinor_from_fields(fields: &EmFields3, frame: &Frame, medium: &EmMedium) -> Multivector {
    let c = medium.c;
    Multivector::complex(fields.w_e / (c * c), fields.w_m / c) + frame.join_bivector(fields.e / c, fields.h * medium.mu)
}

/// Splits `ψ` into `(E, H, W_e, W_m)` in `frame`.
pub fn em_fields_3d(psi: &Multivector, frame: &Frame, medium: &EmMedium) -> Result<EmFields3> {
    let (alpha, a, b, beta) = frame.split_even(psi)?;
    let c = medium.c;
    Ok(EmFields3 {
        e: a * c,
        h: b / medium.mu,
        w_e: alpha * c * c,
        w_m: beta * c,
    })
}

/// Electric and magnetic 4-potentials on a lattice.
#[derive(Clone, Debug)]
pub struct EmPotential {
    pub a_e: MultivectorField,
    pub a_m: MultivectorField,
    pub lambda_minus: f64,
    pub lambda_plus: f64,
}

impl EmPotential {
    pub fn new(a_e: MultivectorField, a_m: MultivectorField, medium: &EmMedium) -> Result<Self> {
        a_e.check_same(&a_m)?;
        for f in [&a_e, &a_m] {
            if f.data().iter().any(|a| !a.has_only_grades(grades::VECTOR, 1e-12)) {
                return Err(Error::WrongGrade {
                    context: "EmPotential",
                    expected: "grade-1 electric and magnetic potentials",
                });
            }
        }
        Ok(EmPotential {
            a_e,
            a_m,
            lambda_minus: medium.lambda_minus,
            lambda_plus: medium.lambda_plus,
        })
    }

    /// `z = λ−a_e + λ+a_m I`.
    pub fn combined(&self) -> MultivectorField {
        let (lm, lp) = (self.lambda_minus, self.lambda_plus);
        self.a_e
            .zip_map(&self.a_m, |e, m| *e * lm + *m * Multivector::I * lp)
            .expect("potentials share a lattice")
    }
}

/// `a_m` built from a magnetic scalar and vector potential: `ζ(φ_m/c + A_m)γ0`.
pub fn magnetic_potential(phi_m: f64, a_m: Vec3, frame: &Frame, medium: &EmMedium) -> Multivector {
    frame.join_vector(phi_m / medium.c, a_m) * medium.zeta
}

/// `a_e = (φ_e/c + A_e)γ0`.
pub fn electric_potential(phi_e: f64, a_e: Vec3, frame: &Frame, medium: &EmMedium) -> Multivector {
    frame.join_vector(phi_e / medium.c, a_e)
}

/// `ψ = ∇z` on a lattice.
pub fn em_spinor_from_potentials(z: &EmPotential) -> MultivectorField {
    lattice::vector_derivative(&z.combined())
}

/// `ψ = ∇z` at an event for any field backend; `z` must be odd.
pub fn em_spinor_at<F: SpacetimeField + ?Sized>(z: &F, r: &Event) -> Result<Multivector> {
    z.value(r)
        .require_grades(grades::ODD, "em_spinor_at", "a potential with grades {1, 3}")?;
    Ok(z.vector_derivative(r))
}

/// Charge and current densities; the combined source is `j_e + (j_m/c)I`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct EmSource {
    /// `(ρ_e c + J_e)γ0`.
    pub j_e: Multivector,
    /// `(ρ_m c + J_m)γ0`.
    pub j_m: Multivector,
}

impl EmSource {
    pub fn from_densities(rho_e: f64, current_e: Vec3, rho_m: f64, current_m: Vec3, frame: &Frame, c: f64) -> Self {
        EmSource {
            j_e: frame.join_vector(rho_e * c, current_e),
            j_m: frame.join_vector(rho_m * c, current_m),
        }
    }

    pub fn combined(&self, c: f64) -> Multivector {
        self.j_e + self.j_m * Multivector::I / c
    }
}

/// `∇ψ − μj` on a lattice; `source` returns the combined current at each event.
pub fn maxwell_residual<J>(psi: &MultivectorField, source: J, medium: &EmMedium) -> MultivectorField
where
    J: Fn(&Event) -> Multivector + Sync,
{
    let spec = *psi.spec();
    let d = lattice::vector_derivative(psi);
    let j = MultivectorField::from_fn(spec, source);
    d.zip_map(&j, |a, b| *a - *b * medium.mu)
        .expect("fields share a lattice")
}

/// `∇ψ − μj` at one event.
pub fn maxwell_residual_at<F: SpacetimeField + ?Sized>(
    psi: &F,
    j: &Multivector,
    medium: &EmMedium,
    r: &Event,
) -> Multivector {
    psi.vector_derivative(r) - *j * medium.mu
}

/// The four 3D equations read off a Maxwell residual `R = ∇ψ − μj`.
///
/// Each entry is zero on shell:
///
/// ```text
/// gauss_e  = ∇·E + ∂_t W_e/c² − ρ_e/ε
/// ampere   = −∂_t E/c² + μ∇×H − ∇W_e/c² − μJ_e
/// faraday  = −μ∂_t H − ∇×E − ∇W_m − μJ_m
/// gauss_m  = μ∇·H + ∂_t W_m/c² − μρ_m
/// ```
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct MaxwellComponents {
    pub gauss_e: f64,
    pub ampere: Vec3,
    pub faraday: Vec3,
    pub gauss_m: f64,
}

pub fn maxwell_components(residual: &Multivector, frame: &Frame, medium: &EmMedium) -> Result<MaxwellComponents> {
    residual.require_grades(grades::ODD, "maxwell_components", "an odd residual")?;
    let (r0, rv) = frame.split_vector(&residual.part(Grade::Vector))?;
    let (q0, qv) = frame.split_vector(&(residual.part(Grade::Trivector) * -Multivector::I))?;
    Ok(MaxwellComponents {
        gauss_e: r0 * medium.c,
        ampere: rv,
        faraday: qv * medium.c,
        gauss_m: q0,
    })
}

/// `T(b) = (ψ~bψ + ψbψ~)/(4μc)`.
pub fn em_stress_tensor(psi: &Multivector, b: &Multivector, medium: &EmMedium) -> Result<Multivector> {
    b.require_grades(grades::VECTOR, "em_stress_tensor", "a grade-1 direction")?;
    let rev = psi.reverse();
    Ok((rev * *b * *psi + *psi * *b * rev) / (4.0 * medium.mu * medium.c))
}

/// Energy density and momentum density `(ℰ, p)` from `T(γ0) = (ℰ/c + p)γ0`.
pub fn em_energy_momentum(psi: &Multivector, frame: &Frame, medium: &EmMedium) -> Result<(f64, Vec3)> {
    let t = em_stress_tensor(psi, &frame.gamma0(), medium)?;
    let (s, p) = frame.split_vector(&t.part(Grade::Vector))?;
    Ok((s * medium.c, p))
}

/// Electric and magnetic charge of a point probe.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct EmCharges {
    pub q_e: f64,
    pub q_m: f64,
}

/// Lab-frame power and force on a probe moving with relative velocity `v` through `ψ`.
///
/// Uses `dp/dτ = ⟨ψ j_p⟩₁` with `j_p = (q_e − q_m I/c)u`, then divides by the Lorentz factor.
/// This reproduces every term of the 3D force law, including the `q W v/c²` power terms.
pub fn em_lorentz_force(
    psi: &Multivector,
    charges: &EmCharges,
    velocity: Vec3,
    frame: &Frame,
    medium: &EmMedium,
) -> Result<(f64, Vec3)> {
    let c = medium.c;
    let speed = velocity.norm();
    if speed >= c {
        return Err(Error::Superluminal { speed, c });
    }
    let gamma = 1.0 / (1.0 - (speed / c).powi(2)).sqrt();
    let u = frame.join_vector(c, velocity) * gamma;
    let q = Multivector::complex(charges.q_e, -charges.q_m / c);
    let dp_dtau = (*psi * q * u).part(Grade::Vector);
    let (s, f) = frame.split_vector(&dp_dtau)?;
    Ok((s * c / gamma, f / gamma))
}

/// Pointwise Lagrangian densities `(L_trad, L_dual)`; `L_dual` is the coefficient of `I`.
pub fn em_lagrangians_at<F: SpacetimeField + ?Sized>(z: &F, r: &Event, medium: &EmMedium) -> (f64, f64) {
    let psi = z.vector_derivative(r);
    let dual = z.reversed_vector_derivative(r) * Multivector::I / medium.zeta;
    lagrangian_pair(&psi, &dual, medium)
}

fn lagrangian_pair(psi: &Multivector, dual_rev: &Multivector, medium: &EmMedium) -> (f64, f64) {
    let trad = -(psi.reverse() * *psi).scalar_part() / (2.0 * medium.mu);
    let dual = 0.5 * medium.c * (*dual_rev * *psi).pseudoscalar_part();
    (trad, dual)
}

/// Per-site Lagrangian densities on a lattice.
pub fn em_lagrangians(z: &EmPotential, medium: &EmMedium) -> Vec<(f64, f64)> {
    let combined = z.combined();
    let psi = lattice::vector_derivative(&combined);
    let dual = lattice::vector_derivative(&combined.map(|a| a.reverse())).map(|a| *a * Multivector::I / medium.zeta);
    psi.data()
        .iter()
        .zip(dual.data())
        .map(|(p, d)| lagrangian_pair(p, d, medium))
        .collect()
}

/// `L_trad = −⟨ψ~ψ⟩₀/(2μ)` for a given spinor value.
pub fn em_lagrangian_trad(psi: &Multivector, medium: &EmMedium) -> f64 {
    -(psi.reverse() * *psi).scalar_part() / (2.0 * medium.mu)
}

/// Result of a gauge transformation.
#[derive(Clone, Debug)]
pub struct EmGaugeShift {
    pub potential: EmPotential,
    /// Predicted `ΔW_e = λ−c²∇²χ_e` (compact stencil), scalar-valued.
    pub delta_w_e: MultivectorField,
    /// Predicted `ΔW_m = λ+c∇²χ_m` (compact stencil), scalar-valued.
    pub delta_w_m: MultivectorField,
}

/// `a_e ↦ a_e + ∇χ_e`, `a_m I ↦ a_m I + ∇χ_m I` for scalar generators on the lattice.
pub fn em_gauge_transform(
    z: &EmPotential,
    chi_e: &MultivectorField,
    chi_m: &MultivectorField,
    medium: &EmMedium,
) -> Result<EmGaugeShift> {
    for chi in [chi_e, chi_m] {
        z.a_e.check_same(chi)?;
        if chi.data().iter().any(|a| !a.has_only_grades(grades::SCALAR, 1e-12)) {
            return Err(Error::WrongGrade {
                context: "em_gauge_transform",
                expected: "scalar gauge generators",
            });
        }
    }
    let c = medium.c;
    let potential = EmPotential {
        a_e: z.a_e.add(&lattice::vector_derivative(chi_e))?,
        a_m: z.a_m.add(&lattice::vector_derivative(chi_m))?,
        lambda_minus: z.lambda_minus,
        lambda_plus: z.lambda_plus,
    };
    Ok(EmGaugeShift {
        potential,
        delta_w_e: lattice::dalembertian(chi_e).scale(z.lambda_minus * c * c),
        delta_w_m: lattice::dalembertian(chi_m).scale(z.lambda_plus * c),
    })
}

/// The sign `s` in the plane-wave phase `e^{−sI(k·r) + Iφ0}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum WaveSign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl WaveSign {
    pub fn value(self) -> f64 {
        match self {
            WaveSign::Plus => 1.0,
            WaveSign::Minus => -1.0,
        }
    }
}

/// Null wave vector `k = (ω/c)(1 + k̂)γ0`; `k̂` must be a unit vector and `ω > 0`.
pub(crate) fn null_wave_vector(context: &'static str, khat: Vec3, omega: f64, c: f64) -> Result<Multivector> {
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(Error::invalid(context, "angular frequency must be positive"));
    }
    if (khat.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::invalid(
            context,
            format!("propagation direction must be a unit vector (|k̂| = {})", khat.norm()),
        ));
    }
    Ok(Frame::standard().join_vector(omega / c, khat * (omega / c)))
}

/// Phase `θ = −s(k·r) + φ0` and its gradient components `∂_μθ`.
pub(crate) fn wave_phase(k: &Multivector, sign: f64, phi0: f64, r: &Event) -> (f64, [f64; 4]) {
    let kc = k.vector_components();
    let lower = [kc[0], -kc[1], -kc[2], -kc[3]];
    let k_dot_r: f64 = (0..4).map(|mu| lower[mu] * r[mu]).sum();
    (-sign * k_dot_r + phi0, lower.map(|k| -sign * k))
}

/// Closed-form circularly or elliptically polarized plane wave `z = −z0 I e^{−sI(k·r) + Iφ0}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EmPlaneWave {
    pub medium: EmMedium,
    pub khat: Vec3,
    pub omega: f64,
    pub sign: WaveSign,
    pub phi0: f64,
    k: Multivector,
    z0: Multivector,
    psi0: Multivector,
}

impl EmPlaneWave {
    /// Builds the wave from canonical potentials `a_e0`, `a_m0` (grade-1, mutually orthogonal).
    pub fn new(
        medium: EmMedium,
        khat: Vec3,
        omega: f64,
        sign: WaveSign,
        a_e0: Multivector,
        a_m0: Multivector,
        phi0: f64,
    ) -> Result<Self> {
        let k = null_wave_vector("em_plane_wave", khat, omega, medium.c)?;
        for a in [&a_e0, &a_m0] {
            a.require_grades(grades::VECTOR, "em_plane_wave", "grade-1 canonical potentials")?;
        }
        let overlap = a_e0.dot(&a_m0).scalar_part();
        if overlap.abs() > 1e-12 * a_e0.norm() * a_m0.norm() {
            return Err(Error::invalid(
                "em_plane_wave",
                format!("canonical potentials must be orthogonal (a_e0·a_m0 = {overlap:e})"),
            ));
        }
        let z0 = a_e0 * medium.lambda_minus + a_m0 * Multivector::I * medium.lambda_plus;
        let psi0 = k * z0 * -sign.value();
        Ok(EmPlaneWave {
            medium,
            khat,
            omega,
            sign,
            phi0,
            k,
            z0,
            psi0,
        })
    }

    pub fn wave_vector(&self) -> Multivector {
        self.k
    }

    /// `z0 = λ−a_e0 + λ+a_m0 I`.
    pub fn canonical_potential(&self) -> Multivector {
        self.z0
    }

    /// `ψ0 = −s k z0`.
    pub fn canonical_spinor(&self) -> Multivector {
        self.psi0
    }

    fn phase(&self, r: &Event) -> (f64, [f64; 4]) {
        wave_phase(&self.k, self.sign.value(), self.phi0, r)
    }

    pub fn potential(&self, r: &Event) -> Multivector {
        let (theta, _) = self.phase(r);
        -(self.z0 * Multivector::I) * Multivector::phase(theta)
    }

    pub fn potential_partial(&self, r: &Event, axis: usize) -> Multivector {
        let (theta, grad) = self.phase(r);
        self.z0 * Multivector::phase(theta) * grad[axis]
    }

    pub fn spinor(&self, r: &Event) -> Multivector {
        let (theta, _) = self.phase(r);
        self.psi0 * Multivector::phase(theta)
    }

    pub fn spinor_partial(&self, r: &Event, axis: usize) -> Multivector {
        let (theta, grad) = self.phase(r);
        self.psi0 * Multivector::I * Multivector::phase(theta) * grad[axis]
    }

    pub fn potential_field(&self) -> impl SpacetimeField + '_ {
        Analytic::new(
            move |r: &Event| self.potential(r),
            move |r: &Event, a| self.potential_partial(r, a),
        )
    }

    pub fn spinor_field(&self) -> impl SpacetimeField + '_ {
        Analytic::new(
            move |r: &Event| self.spinor(r),
            move |r: &Event, a| self.spinor_partial(r, a),
        )
    }

    /// Complex envelopes `(Ē, H̄)` at a spatial point, with `E(t) = Re(Ē e^{−iωt})`.
    pub fn envelopes(&self, position: Vec3) -> Result<(CVec3, CVec3)> {
        let frame = Frame::standard();
        let f0 = em_fields_3d(&self.psi0, &frame, &self.medium)?;
        let c = self.medium.c;
        let mu = self.medium.mu;
        let s = self.sign.value();
        let beta = s * (self.omega / c) * self.khat.dot(&position) + self.phi0;
        let e = envelope::envelope_from_quadratures(f0.e, -(f0.h * (c * mu)), s, beta);
        let h = envelope::envelope_from_quadratures(f0.h, f0.e / (c * mu), s, beta);
        Ok((e, h))
    }
}

/// Dual-symmetric cycle-averaged spin `Im(εĒ*×Ē + μH̄*×H̄)/(4ω)`.
pub fn em_spin_density(e: &CVec3, h: &CVec3, omega: f64, medium: &EmMedium) -> Result<Vec3> {
    check_omega("em_spin_density", omega)?;
    Ok((envelope::im_conj_cross(e) * medium.epsilon + envelope::im_conj_cross(h) * medium.mu) / (4.0 * omega))
}

/// Electric-biased cycle-averaged spin `ε Im(Ē*×Ē)/(2ω)`.
pub fn em_spin_density_electric(e: &CVec3, omega: f64, medium: &EmMedium) -> Result<Vec3> {
    check_omega("em_spin_density_electric", omega)?;
    Ok(envelope::im_conj_cross(e) * (medium.epsilon / (2.0 * omega)))
}

/// Cycle-averaged energy density `(ε|Ē|² + μ|H̄|²)/4`.
pub fn em_mean_energy(e: &CVec3, h: &CVec3, medium: &EmMedium) -> f64 {
    0.25 * (medium.epsilon * envelope::norm_sq(e) + medium.mu * envelope::norm_sq(h))
}

pub(crate) fn check_omega(context: &'static str, omega: f64) -> Result<()> {
    if omega > 0.0 && omega.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(context, "angular frequency must be positive"))
    }
}

/// Circular envelope `E0(σ1 + iσ2)/√2` along σ3 with its matching `H̄ = k̂×Ē/ζ`.
pub fn circular_envelopes(e0: f64, medium: &EmMedium) -> (CVec3, CVec3) {
    let r = e0 / 2f64.sqrt();
    let e = [Complex64::new(r, 0.0), Complex64::new(0.0, r), Complex64::new(0.0, 0.0)];
    let h = [-e[1], e[0], Complex64::new(0.0, 0.0)].map(|c| c / medium.zeta);
    (e, h)
}
