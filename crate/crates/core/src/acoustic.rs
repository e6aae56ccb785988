//! Linear acoustics as a complex 4-vector field `z = p + wI = −∇ψ_ac` with
//! spinor potential `ψ_ac = λ−φ + λ+M/3 + λ4φ_w I`.
//!
//! `p = (P/c + ρv)γ0` is the energy-momentum density deviation from the
//! equilibrium background `p0 = (ρc)γ0`, and `wI = (P_w/c + ρw)γ0 I` carries the
//! rotational energy and momentum. `M = (ρc)(x + yI)` holds the mean and rotational
//! displacement fields.

use serde::{Deserialize, Serialize};

use crate::algebra::{grades, Frame, Grade, Multivector, Rotor, Vec3};
use crate::em::{check_omega, null_wave_vector, wave_phase, WaveSign};
use crate::envelope::{self, CVec3};
use crate::error::{Error, Result};
use crate::field::{Analytic, Event, SpacetimeField};
use crate::lattice::{self, MultivectorField};

/// Fluid parameters and potential couplings.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AcMedium {
    pub rho: f64,
    pub beta: f64,
    pub c: f64,
    pub zeta: f64,
    /// Equilibrium pressure `ρc²`.
    pub p0: f64,
    pub lambda_minus: f64,
    pub lambda_plus: f64,
    pub lambda_4: f64,
}

impl AcMedium {
    pub fn new(rho: f64, beta: f64) -> Result<Self> {
        if !(rho > 0.0 && beta > 0.0 && rho.is_finite() && beta.is_finite()) {
            return Err(Error::invalid(
                "AcMedium",
                "density and compressibility must be positive",
            ));
        }
        let c = 1.0 / (rho * beta).sqrt();
        Ok(AcMedium {
            rho,
            beta,
            c,
            zeta: rho * c,
            p0: rho * c * c,
            lambda_minus: 0.5,
            lambda_plus: 0.5,
            lambda_4: 0.5,
        })
    }

    /// Air at 20 °C.
    pub fn air() -> Self {
        AcMedium::new(1.204, 1.0 / (1.204 * 343.0 * 343.0)).expect("positive constants")
    }

    /// ρ = β = 1.
    pub fn natural() -> Self {
        AcMedium::new(1.0, 1.0).expect("positive constants")
    }

    pub fn with_couplings(mut self, lambda_minus: f64, lambda_plus: f64, lambda_4: f64) -> Self {
        self.lambda_minus = lambda_minus;
        self.lambda_plus = lambda_plus;
        self.lambda_4 = lambda_4;
        self
    }

    pub fn consistency_defect(&self) -> f64 {
        let c = 1.0 / (self.rho * self.beta).sqrt();
        [
            (self.c - c) / c,
            (self.zeta - self.rho * c) / (self.rho * c),
            (self.p0 - self.rho * c * c) / (self.rho * c * c),
        ]
        .iter()
        .fold(0.0f64, |m, d| m.max(d.abs()))
    }

    /// Equilibrium energy-momentum `p0 = (ρc)γ0` in `frame`.
    pub fn background(&self, frame: &Frame) -> Multivector {
        frame.gamma0() * self.zeta
    }

    /// The background as seen by an observer moving with `velocity` through the medium.
    pub fn observed_background(&self, velocity: Vec3) -> Result<Multivector> {
        let boost = Rotor::observer_boost(velocity, self.c)?;
        Ok(boost.apply(&self.background(&Frame::standard())))
    }
}

/// Frame-relative content of an acoustic field.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct AcFields3 {
    pub pressure: f64,
    pub velocity: Vec3,
    pub pressure_w: f64,
    pub velocity_w: Vec3,
}

/// Assembles `z = (P/c + ρv)γ0 + (P_w/c + ρw)γ0 I`.
pub fn ac_field_from_components(f: &AcFields3, frame: &Frame, medium: &AcMedium) -> Multivector {
    let (c, rho) = (medium.c, medium.rho);
    frame.join_vector(f.pressure / c, f.velocity * rho)
        + frame.join_vector(f.pressure_w / c, f.velocity_w * rho) * Multivector::I
}

/// Splits `z` into `(P, v, P_w, w)`.
pub fn ac_fields_3d(z: &Multivector, frame: &Frame, medium: &AcMedium) -> Result<AcFields3> {
    z.require_grades(grades::ODD, "ac_fields_3d", "an odd field with grades {1, 3}")?;
    let (c, rho) = (medium.c, medium.rho);
    let (s, v) = frame.split_vector(&z.part(Grade::Vector))?;
    let (sw, vw) = frame.split_vector(&(z.part(Grade::Trivector) * -Multivector::I))?;
    Ok(AcFields3 {
        pressure: s * c,
        velocity: v / rho,
        pressure_w: sw * c,
        velocity_w: vw / rho,
    })
}

/// `M = (ρc)(x + yI)`.
pub fn bivector_potential(x: Vec3, y: Vec3, frame: &Frame, medium: &AcMedium) -> Multivector {
    frame.join_bivector(x, y) * medium.zeta
}

/// Mean and rotational displacements `(x, y)` of a bivector potential.
pub fn ac_displacements(m: &Multivector, frame: &Frame, medium: &AcMedium) -> Result<(Vec3, Vec3)> {
    m.require_grades(grades::BIVECTOR, "ac_displacements", "a grade-2 potential")?;
    let (x, y) = frame.split_bivector(m)?;
    Ok((x / medium.zeta, y / medium.zeta))
}

/// Scalar, bivector and pseudoscalar potentials on a lattice.
#[derive(Clone, Debug)]
pub struct AcPotentialSpinor {
    pub phi: MultivectorField,
    pub m: MultivectorField,
    pub phi_w: MultivectorField,
    pub lambda_minus: f64,
    pub lambda_plus: f64,
    pub lambda_4: f64,
}

impl AcPotentialSpinor {
    /// `phi` and `phi_w` are scalar-valued fields; `phi_w` holds the coefficient of `I`.
    pub fn new(phi: MultivectorField, m: MultivectorField, phi_w: MultivectorField, medium: &AcMedium) -> Result<Self> {
        phi.check_same(&m)?;
        phi.check_same(&phi_w)?;
        let ok = |f: &MultivectorField, mask| f.data().iter().all(|a| a.has_only_grades(mask, 1e-12));
        if !(ok(&phi, grades::SCALAR) && ok(&m, grades::BIVECTOR) && ok(&phi_w, grades::SCALAR)) {
            return Err(Error::WrongGrade {
                context: "AcPotentialSpinor",
                expected: "scalar φ, bivector M and scalar φ_w",
            });
        }
        Ok(AcPotentialSpinor {
            phi,
            m,
            phi_w,
            lambda_minus: medium.lambda_minus,
            lambda_plus: medium.lambda_plus,
            lambda_4: medium.lambda_4,
        })
    }

    /// `ψ_ac = λ−φ + λ+M/3 + λ4φ_w I`.
    pub fn combined(&self) -> MultivectorField {
        let (lm, lp, l4) = (self.lambda_minus, self.lambda_plus, self.lambda_4);
        let partial = self
            .phi
            .zip_map(&self.m, |phi, m| *phi * lm + *m * (lp / 3.0))
            .expect("same lattice");
        partial
            .zip_map(&self.phi_w, |a, w| *a + *w * Multivector::I * l4)
            .expect("same lattice")
    }
}

/// `z = −∇ψ_ac` on a lattice.
pub fn ac_field_from_potentials(psi: &AcPotentialSpinor) -> MultivectorField {
    lattice::vector_derivative(&psi.combined()).scale(-1.0)
}

/// `z = −∇ψ_ac` at an event; `ψ_ac` must be even.
pub fn ac_field_at<F: SpacetimeField + ?Sized>(psi: &F, r: &Event) -> Result<Multivector> {
    psi.value(r)
        .require_grades(grades::EVEN, "ac_field_at", "an even spinor potential")?;
    Ok(-psi.vector_derivative(r))
}

/// Acoustic sources; the combined source is `ψ_N = ν + N + ν_w I`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct AcSource {
    /// Mass-density rate `ρ̇`.
    pub rho_dot: f64,
    /// Force density `F`.
    pub force: Vec3,
    /// Vorticity density `ρΩ`.
    pub vorticity: Vec3,
    /// Pseudoscalar rate `ρ̇_w`.
    pub rho_w_dot: f64,
}

impl AcSource {
    /// `ψ_N = ρ̇ + F/c + ρΩ I + ρ̇_w I`.
    pub fn combined(&self, frame: &Frame, c: f64) -> Multivector {
        Multivector::complex(self.rho_dot, self.rho_w_dot) + frame.join_bivector(self.force / c, self.vorticity)
    }
}

/// `∇z + ψ_N` on a lattice; `source` returns the combined even source.
pub fn ac_residual<S>(z: &MultivectorField, source: S) -> MultivectorField
where
    S: Fn(&Event) -> Multivector + Sync,
{
    let spec = *z.spec();
    let d = lattice::vector_derivative(z);
    d.add(&MultivectorField::from_fn(spec, source)).expect("same lattice")
}

/// The four 3D equations read off an acoustic residual `∇z + ψ_N`; each vanishes on shell.
///
/// ```text
/// continuity   = ∂_t P + c²∇·(ρv) + ρ̇c²
/// euler        = ∂_t(ρv) + ∇P + ∇×(ρcw) − F
/// rotation     = ∂_t(ρw) + ∇P_w − ∇×(ρcv) − ρcΩ
/// continuity_w = ∂_t P_w + c²∇·(ρw) + ρ̇_w c²
/// ```
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct AcComponents {
    pub continuity: f64,
    pub euler: Vec3,
    pub rotation: Vec3,
    pub continuity_w: f64,
}

pub fn ac_components(residual: &Multivector, frame: &Frame, medium: &AcMedium) -> Result<AcComponents> {
    let (alpha, a, b, beta) = frame.split_even(residual)?;
    let c = medium.c;
    Ok(AcComponents {
        continuity: alpha * c * c,
        euler: -(a * c),
        rotation: -(b * c),
        continuity_w: beta * c * c,
    })
}

/// `T(b) = (z~bz + zbz~)/(4ρc)`.
pub fn ac_stress_tensor(z: &Multivector, b: &Multivector, medium: &AcMedium) -> Result<Multivector> {
    b.require_grades(grades::VECTOR, "ac_stress_tensor", "a grade-1 direction")?;
    let rev = z.reverse();
    Ok((rev * *b * *z + *z * *b * rev) / (4.0 * medium.zeta))
}

/// Energy and momentum densities `(ℰ, p)` from `T(γ0) = (ℰ/c + p)γ0`.
pub fn ac_energy_momentum(z: &Multivector, frame: &Frame, medium: &AcMedium) -> Result<(f64, Vec3)> {
    let t = ac_stress_tensor(z, &frame.gamma0(), medium)?;
    let (s, p) = frame.split_vector(&t.part(Grade::Vector))?;
    Ok((s * medium.c, p))
}

/// Power and force `(℘, F)` on a probe acting as the source `ψ_N`, from `⟨z~ψ_N⟩₁/ρ`.
pub fn ac_force(z: &Multivector, probe: &AcSource, frame: &Frame, medium: &AcMedium) -> Result<(f64, Vec3)> {
    let psi_n = probe.combined(frame, medium.c);
    let dp = (z.reverse() * psi_n).part(Grade::Vector) / medium.rho;
    let (s, f) = frame.split_vector(&dp)?;
    Ok((s * medium.c, f))
}

/// `L_trad = −⟨z~z⟩₀/(2ρ)`.
pub fn ac_lagrangian_trad(z: &Multivector, medium: &AcMedium) -> f64 {
    -(z.reverse() * *z).scalar_part() / (2.0 * medium.rho)
}

fn lagrangian_pair(z: &Multivector, dual_rev: &Multivector, medium: &AcMedium) -> (f64, f64) {
    let dual = 0.5 * medium.c * (*dual_rev * *z).pseudoscalar_part();
    (ac_lagrangian_trad(z, medium), dual)
}

/// Pointwise `(L_trad, L_dual)` from a spinor potential; `L_dual` is the coefficient of `I`.
///
/// The dual field is `z~_dual = −ζ⁻¹(∇ψ~)I`.
pub fn ac_lagrangians_at<F: SpacetimeField + ?Sized>(psi: &F, r: &Event, medium: &AcMedium) -> (f64, f64) {
    let z = -psi.vector_derivative(r);
    let dual = -(psi.reversed_vector_derivative(r) * Multivector::I) / medium.zeta;
    lagrangian_pair(&z, &dual, medium)
}

/// Per-site `(L_trad, L_dual)` on a lattice.
pub fn ac_lagrangians(psi: &AcPotentialSpinor, medium: &AcMedium) -> Vec<(f64, f64)> {
    let combined = psi.combined();
    let z = lattice::vector_derivative(&combined).scale(-1.0);
    let dual = lattice::vector_derivative(&combined.map(|a| a.reverse())).map(|a| -(*a * Multivector::I) / medium.zeta);
    z.data()
        .iter()
        .zip(dual.data())
        .map(|(z, d)| lagrangian_pair(z, d, medium))
        .collect()
}

/// Gauge generator `bI` with `b = (ρc)γ0(b0/c − b)`.
pub fn gauge_generator(b0: f64, b: Vec3, frame: &Frame, medium: &AcMedium) -> Multivector {
    frame.join_vector_left(b0 / medium.c, b) * medium.zeta * Multivector::I
}

/// Result of `M ↦ M + ∇·(bI)`.
#[derive(Clone, Debug)]
pub struct AcGaugeShift {
    pub m: MultivectorField,
    /// Induced change in `∇∧M`, i.e. `∇∧(∇·(bI))`.
    pub delta_wedge: MultivectorField,
}

/// Shifts the bivector potential by `∇·(bI)` for a pseudovector generator field `bI`.
pub fn ac_gauge_transform(m: &MultivectorField, b_i: &MultivectorField) -> Result<AcGaugeShift> {
    m.check_same(b_i)?;
    if b_i.data().iter().any(|a| !a.has_only_grades(grades::TRIVECTOR, 1e-12)) {
        return Err(Error::WrongGrade {
            context: "ac_gauge_transform",
            expected: "a grade-3 generator bI",
        });
    }
    let shift = lattice::vector_derivative(b_i).part(Grade::Bivector);
    let delta_wedge = lattice::vector_derivative(&shift).part(Grade::Trivector);
    Ok(AcGaugeShift {
        m: m.add(&shift)?,
        delta_wedge,
    })
}

/// Which potential supports a plane wave; fixes the couplings λ−, λ+, λ4.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AcBranch {
    /// Complex scalar potential only, λ− = λ4 = 1.
    ScalarOnly,
    /// Full spinor potential, λ− = λ4 = 1/3 and λ+ = 1.
    FullSpinor,
}

impl AcBranch {
    pub fn couplings(self) -> (f64, f64, f64) {
        match self {
            AcBranch::ScalarOnly => (1.0, 1.0, 1.0),
            AcBranch::FullSpinor => (1.0 / 3.0, 1.0, 1.0 / 3.0),
        }
    }
}

/// Orbital and intrinsic parts of the canonical angular momentum `M0 = c N + J I`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AngularMomentumSplit {
    pub n_orbital: Vec3,
    pub n_spin: Vec3,
    pub l: Vec3,
    pub s: Vec3,
}

/// Closed-form longitudinal acoustic plane wave `z = s p̄ e^{−sI(k·r) + Iφ0}` with `p̄ = (P̄/ω)k`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AcPlaneWave {
    pub medium: AcMedium,
    pub khat: Vec3,
    pub omega: f64,
    pub sign: WaveSign,
    pub amplitude: f64,
    pub phi0: f64,
    pub branch: AcBranch,
    pub r_n: Multivector,
    pub r_s: Multivector,
    k: Multivector,
    pbar: Multivector,
}

impl AcPlaneWave {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        medium: AcMedium,
        khat: Vec3,
        omega: f64,
        sign: WaveSign,
        amplitude: f64,
        phi0: f64,
        branch: AcBranch,
        r_n: Multivector,
        r_s: Multivector,
    ) -> Result<Self> {
        let k = null_wave_vector("ac_plane_wave", khat, omega, medium.c)?;
        if !(amplitude > 0.0 && amplitude.is_finite()) {
            return Err(Error::invalid("ac_plane_wave", "pressure amplitude must be positive"));
        }
        for r in [&r_n, &r_s] {
            r.require_grades(grades::VECTOR, "ac_plane_wave", "grade-1 offsets r_n, r_s")?;
        }
        let (lm, lp, l4) = branch.couplings();
        Ok(AcPlaneWave {
            medium: medium.with_couplings(lm, lp, l4),
            khat,
            omega,
            sign,
            amplitude,
            phi0,
            branch,
            r_n,
            r_s,
            k,
            pbar: k * (amplitude / omega),
        })
    }

    /// Scalar-branch wave with no intrinsic offsets.
    pub fn scalar(medium: AcMedium, khat: Vec3, omega: f64, sign: WaveSign, amplitude: f64, phi0: f64) -> Result<Self> {
        AcPlaneWave::new(
            medium,
            khat,
            omega,
            sign,
            amplitude,
            phi0,
            AcBranch::ScalarOnly,
            Multivector::ZERO,
            Multivector::ZERO,
        )
    }

    pub fn wave_vector(&self) -> Multivector {
        self.k
    }

    /// `p̄ = (P̄/ω)k = (P̄/c + ρv)γ0`.
    pub fn canonical_momentum(&self) -> Multivector {
        self.pbar
    }

    fn s(&self) -> f64 {
        self.sign.value()
    }

    fn phase(&self, r: &Event) -> (f64, [f64; 4]) {
        wave_phase(&self.k, self.s(), self.phi0, r)
    }

    /// Canonical spinor `ψ0(r)` before the phase factor.
    pub fn canonical_potential(&self, r: &Event) -> Multivector {
        let scalar = Multivector::pseudoscalar(-self.amplitude / self.omega);
        match self.branch {
            AcBranch::ScalarOnly => scalar,
            AcBranch::FullSpinor => {
                let pos = Multivector::vector(*r);
                (scalar + self.pbar * pos * self.s() + self.pbar * (self.r_n + self.r_s * Multivector::I)) / 3.0
            }
        }
    }

    fn canonical_partial(&self, axis: usize) -> Multivector {
        match self.branch {
            AcBranch::ScalarOnly => Multivector::ZERO,
            AcBranch::FullSpinor => self.pbar * Multivector::gamma(axis) * (self.s() / 3.0),
        }
    }

    /// `ψ_ac(r) = ψ0(r) e^{Iθ}`.
    pub fn potential(&self, r: &Event) -> Multivector {
        let (theta, _) = self.phase(r);
        self.canonical_potential(r) * Multivector::phase(theta)
    }

    pub fn potential_partial(&self, r: &Event, axis: usize) -> Multivector {
        let (theta, grad) = self.phase(r);
        let e = Multivector::phase(theta);
        self.canonical_partial(axis) * e + self.canonical_potential(r) * Multivector::I * e * grad[axis]
    }

    /// `z(r) = s p̄ e^{Iθ}`.
    pub fn field(&self, r: &Event) -> Multivector {
        let (theta, _) = self.phase(r);
        self.pbar * Multivector::phase(theta) * self.s()
    }

    pub fn field_partial(&self, r: &Event, axis: usize) -> Multivector {
        let (theta, grad) = self.phase(r);
        self.pbar * Multivector::I * Multivector::phase(theta) * (self.s() * grad[axis])
    }

    pub fn potential_field(&self) -> impl SpacetimeField + '_ {
        Analytic::new(
            move |r: &Event| self.potential(r),
            move |r: &Event, a| self.potential_partial(r, a),
        )
    }

    pub fn field_field(&self) -> impl SpacetimeField + '_ {
        Analytic::new(
            move |r: &Event| self.field(r),
            move |r: &Event, a| self.field_partial(r, a),
        )
    }

    /// Bivector potential `M(r) = 3⟨ψ_ac⟩₂/λ+`.
    pub fn bivector_potential(&self, r: &Event) -> Multivector {
        self.potential(r).part(Grade::Bivector) * (3.0 / self.medium.lambda_plus)
    }

    /// Displacements `(x, y)` of the phase-free canonical bivector `M0(r)`.
    pub fn canonical_displacements(&self, r: &Event) -> Result<(Vec3, Vec3)> {
        let m0 = self.canonical_potential(r).part(Grade::Bivector) * (3.0 / self.medium.lambda_plus);
        ac_displacements(&m0, &Frame::standard(), &self.medium)
    }

    /// Closed-form `(x, y)` of `M0(r)` built from `ρv`, `P̄` and the offsets.
    pub fn canonical_displacements_closed_form(&self, r: &Event) -> (Vec3, Vec3) {
        if self.branch == AcBranch::ScalarOnly {
            return (Vec3::ZERO, Vec3::ZERO);
        }
        let frame = Frame::standard();
        let (c, rho, s) = (self.medium.c, self.medium.rho, self.s());
        let v = self.khat * (self.amplitude / (rho * c));
        let pr = self.amplitude / (rho * c * c);
        let t = r[0] / c;
        let pos = Vec3::new(r[1], r[2], r[3]);
        let (ctau_n, rn) = frame.split_vector(&self.r_n).expect("grade-1 offset");
        let (ctau_s, rs) = frame.split_vector(&self.r_s).expect("grade-1 offset");
        let (tau_n, tau_s) = (ctau_n / c, ctau_s / c);
        let x = v * (s * t + tau_n) - (pos * s + rn) * pr - rs.cross(&v) / c;
        let y = (pos * s + rn).cross(&v) / c + v * tau_s - rs * pr;
        (x, y)
    }

    /// Orbital and spin parts of `N = ρx` and `J = (ρc)y`.
    pub fn angular_momentum_split(&self, r: &Event) -> AngularMomentumSplit {
        if self.branch == AcBranch::ScalarOnly {
            return AngularMomentumSplit {
                n_orbital: Vec3::ZERO,
                n_spin: Vec3::ZERO,
                l: Vec3::ZERO,
                s: Vec3::ZERO,
            };
        }
        let frame = Frame::standard();
        let (c, s) = (self.medium.c, self.s());
        let momentum = self.khat * (self.amplitude / c);
        let t = r[0] / c;
        let pos = Vec3::new(r[1], r[2], r[3]);
        let (ctau_n, rn) = frame.split_vector(&self.r_n).expect("grade-1 offset");
        let (ctau_s, rs) = frame.split_vector(&self.r_s).expect("grade-1 offset");
        let p_c2 = self.amplitude / (c * c);
        AngularMomentumSplit {
            n_orbital: (momentum * t - pos * p_c2) * s,
            n_spin: momentum * (ctau_n / c) - rn * p_c2 - rs.cross(&momentum) / c,
            l: pos.cross(&momentum) * s,
            s: rn.cross(&momentum) + momentum * ctau_s - rs * (self.amplitude / c),
        }
    }

    /// Complex velocity envelope `v̄` with `v(t) = Re(v̄ e^{−iωt})`.
    pub fn velocity_envelope(&self, position: Vec3) -> CVec3 {
        let (c, rho, s) = (self.medium.c, self.medium.rho, self.s());
        let a = self.khat * (s * self.amplitude / (rho * c));
        let beta = s * (self.omega / c) * self.khat.dot(&position) + self.phi0;
        envelope::envelope_from_quadratures(a, Vec3::ZERO, s, beta)
    }

    /// Vorticity-free displacement `x = ∫v dt = −(P̄/(ρcω)) k̂ sin θ`.
    pub fn oscillating_displacement(&self, r: &Event) -> Vec3 {
        let (theta, _) = self.phase(r);
        let (c, rho) = (self.medium.c, self.medium.rho);
        self.khat * (-self.amplitude / (rho * c * self.omega) * theta.sin())
    }

    /// Momentum density `ρv` at an event.
    pub fn momentum_density(&self, r: &Event) -> Vec3 {
        let f = ac_fields_3d(&self.field(r), &Frame::standard(), &self.medium).expect("odd field");
        f.velocity * self.medium.rho
    }
}

/// Instantaneous spin `½ x×(ρv)`.
pub fn ac_spin_density(x: Vec3, rho_v: Vec3) -> Vec3 {
    x.cross(&rho_v) * 0.5
}

/// Spin together with the violation `|∇×x + ∂_t y/c|` of the vorticity-free gauge.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpinSample {
    pub spin: Vec3,
    pub gauge_violation: f64,
}

/// `½ x×(ρv)` with `x` read from a bivector potential field, checking `∇×x = −∂_t y/c`.
pub fn ac_spin_density_checked<F: SpacetimeField + ?Sized>(
    m: &F,
    rho_v: Vec3,
    r: &Event,
    medium: &AcMedium,
) -> Result<SpinSample> {
    let frame = Frame::standard();
    let (x, _) = ac_displacements(&m.value(r), &frame, medium)?;
    let mut d = [Vec3::ZERO; 3];
    for (k, dk) in d.iter_mut().enumerate() {
        *dk = ac_displacements(&m.partial(r, k + 1), &frame, medium)?.0;
    }
    let curl_x = Vec3::new(d[1][2] - d[2][1], d[2][0] - d[0][2], d[0][1] - d[1][0]);
    // ∂_ct y = ∂_t y / c.
    let (_, dy_ct) = ac_displacements(&m.partial(r, 0), &frame, medium)?;
    let violation = (curl_x + dy_ct).norm();
    Ok(SpinSample {
        spin: ac_spin_density(x, rho_v),
        gauge_violation: violation,
    })
}

/// Cycle-averaged spin `ρ Im(v̄*×v̄)/(4ω)`.
pub fn ac_spin_cycle_avg(v: &CVec3, omega: f64, rho: f64) -> Result<Vec3> {
    check_omega("ac_spin_cycle_avg", omega)?;
    Ok(envelope::im_conj_cross(v) * (rho / (4.0 * omega)))
}

/// Spin predicted by a scalar-potential-only theory, which carries no intrinsic angular momentum.
pub fn ac_spin_scalar_theory(_v: &CVec3, omega: f64) -> Result<Vec3> {
    check_omega("ac_spin_scalar_theory", omega)?;
    Ok(Vec3::ZERO)
}
