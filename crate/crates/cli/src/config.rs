//! Scenario configuration: JSON schema, validation and resolution into core types.

use std::f64::consts::TAU;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use sta_fields::acoustic::{AcMedium, AcPlaneWave, AcSource};
use sta_fields::algebra::grades;
use sta_fields::em::{EmCharges, EmMedium, EmPlaneWave, WaveSign};
use sta_fields::envelope::CVec3;
use sta_fields::simulator::{lattice_omega, Coupling, Probe, SourceFn, SpatialGrid, Theory};
use sta_fields::{Analytic, Event, Frame, Multivector, SpacetimeField, Vec3};

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TheoryKind {
    Em,
    Acoustic,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub theory: TheoryKind,
    #[serde(default)]
    pub medium: MediumConfig,
    pub lattice: LatticeConfig,
    #[serde(default)]
    pub waves: Vec<WaveConfig>,
    #[serde(default)]
    pub sources: Vec<SourceConfig>,
    #[serde(default)]
    pub probes: Vec<ProbeConfig>,
    #[serde(default)]
    pub output: OutputConfig,
}

/// Material constants; unset entries take natural-unit defaults.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MediumConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda_minus: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda_plus: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda_4: Option<f64>,
}

/// How a configured wave's frequency relates to its wave vector.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Dispersion {
    /// `ω = c|k|`.
    #[default]
    Continuum,
    /// Frequency of the leapfrog scheme for the mode, so the lattice carries it exactly.
    Lattice,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeConfig {
    pub dims: [usize; 3],
    pub spacing: [f64; 3],
    /// Start time; the evaluation time for `wave` and `spin`.
    #[serde(default)]
    pub time: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    /// Time step as a fraction of the CFL limit; used when `dt` is absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub courant: Option<f64>,
    #[serde(default)]
    pub steps: usize,
    #[serde(default)]
    pub dispersion: Dispersion,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Sign {
    #[default]
    Plus,
    Minus,
}

impl From<Sign> for WaveSign {
    fn from(s: Sign) -> Self {
        match s {
            Sign::Plus => WaveSign::Plus,
            Sign::Minus => WaveSign::Minus,
        }
    }
}

/// A plane wave given either by an integer lattice mode or by a direction and frequency.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WaveConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<[i32; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub direction: Option<[f64; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<f64>,
    #[serde(default)]
    pub sign: Sign,
    #[serde(default = "one")]
    pub amplitude: f64,
    #[serde(default)]
    pub phase: f64,
    /// Direction of the electric canonical potential; EM only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub polarization: Option<[f64; 3]>,
}

fn one() -> f64 {
    1.0
}

/// Gaussian blob `value·exp(−d²/2w²)`, optionally modulated by `sin(ωt + phase)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SourceConfig {
    pub value: Multivector,
    pub center: [f64; 3],
    pub width: f64,
    #[serde(default)]
    pub frequency: f64,
    #[serde(default)]
    pub phase: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub enum CouplingConfig {
    Em {
        #[serde(default)]
        q_e: f64,
        #[serde(default)]
        q_m: f64,
    },
    Acoustic {
        #[serde(default)]
        rho_dot: f64,
        #[serde(default)]
        force: [f64; 3],
        #[serde(default)]
        vorticity: [f64; 3],
        #[serde(default)]
        rho_w_dot: f64,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProbeConfig {
    pub coupling: CouplingConfig,
    pub mass: f64,
    pub position: [f64; 3],
    #[serde(default)]
    pub velocity: [f64; 3],
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Column {
    /// The 16 blade coefficients of the potential.
    Potential,
    /// Frame components: E, H, W_e, W_m or P, v, P_w, w.
    Fields,
    Energy,
    Momentum,
    /// Cycle-averaged spin density; needs a single frequency.
    Spin,
    Residual,
}

pub const DEFAULT_COLUMNS: [Column; 5] = [
    Column::Fields,
    Column::Energy,
    Column::Momentum,
    Column::Spin,
    Column::Residual,
];

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub directory: Option<PathBuf>,
    /// Snapshot every `cadence` steps; 0 keeps only the first and last.
    #[serde(default)]
    pub cadence: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub columns: Option<Vec<Column>>,
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            CliError::Config(format!("{path}: {}", e.into_inner()))
        })
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn columns(&self) -> Vec<Column> {
        self.output.columns.clone().unwrap_or_else(|| DEFAULT_COLUMNS.to_vec())
    }

    pub fn theory(&self) -> Result<Theory, CliError> {
        let m = &self.medium;
        let misplaced = |names: &[(&str, Option<f64>)]| {
            names
                .iter()
                .find(|(_, v)| v.is_some())
                .map(|(n, _)| CliError::Config(format!("medium.{n}: not a parameter of the {:?} theory", self.theory)))
        };
        match self.theory {
            TheoryKind::Em => {
                if let Some(e) = misplaced(&[("rho", m.rho), ("beta", m.beta), ("lambda_4", m.lambda_4)]) {
                    return Err(e);
                }
                let medium = EmMedium::new(m.epsilon.unwrap_or(1.0), m.mu.unwrap_or(1.0)).map_err(config("medium"))?;
                let medium = medium.with_couplings(m.lambda_minus.unwrap_or(0.5), m.lambda_plus.unwrap_or(0.5));
                Ok(Theory::Em(medium))
            }
            TheoryKind::Acoustic => {
                if let Some(e) = misplaced(&[("epsilon", m.epsilon), ("mu", m.mu)]) {
                    return Err(e);
                }
                let medium = AcMedium::new(m.rho.unwrap_or(1.0), m.beta.unwrap_or(1.0)).map_err(config("medium"))?;
                let medium = medium.with_couplings(
                    m.lambda_minus.unwrap_or(0.5),
                    m.lambda_plus.unwrap_or(0.5),
                    m.lambda_4.unwrap_or(0.5),
                );
                Ok(Theory::Acoustic(medium))
            }
        }
    }

    pub fn grid(&self) -> Result<SpatialGrid, CliError> {
        SpatialGrid::new(self.lattice.dims, self.lattice.spacing).map_err(config("lattice"))
    }

    /// Explicit `dt`, or `courant` (default 0.5) times the CFL limit.
    pub fn dt(&self, theory: &Theory) -> Result<f64, CliError> {
        let grid = self.grid()?;
        match (self.lattice.dt, self.lattice.courant) {
            (Some(_), Some(_)) => Err(CliError::Config("lattice: give either dt or courant, not both".into())),
            (Some(dt), None) if dt > 0.0 && dt.is_finite() => Ok(dt),
            (Some(dt), None) => Err(CliError::Config(format!("lattice.dt: must be positive, got {dt}"))),
            (None, courant) => {
                let courant = courant.unwrap_or(0.5);
                if !(courant > 0.0 && courant.is_finite()) {
                    return Err(CliError::Config(format!(
                        "lattice.courant: must be positive, got {courant}"
                    )));
                }
                Ok(courant * grid.cfl_limit() / theory.c())
            }
        }
    }

    pub fn wave_set(&self, theory: &Theory) -> Result<WaveSet, CliError> {
        let grid = self.grid()?;
        let c = theory.c();
        let dt = match self.lattice.dispersion {
            Dispersion::Lattice => Some(self.dt(theory)?),
            Dispersion::Continuum => None,
        };
        let mut waves = Vec::with_capacity(self.waves.len());
        for (n, w) in self.waves.iter().enumerate() {
            let at = |field: &str| format!("waves[{n}]{field}");
            let (kvec, omega) = match (w.mode, w.direction, w.omega) {
                (Some(mode), None, None) => {
                    let extent = grid.extent();
                    let k = Vec3([0, 1, 2].map(|i| TAU * mode[i] as f64 / extent[i]));
                    if k.norm() == 0.0 {
                        return Err(CliError::Config(format!("{}: zero mode", at(".mode"))));
                    }
                    (k, c * k.norm())
                }
                (None, Some(d), Some(omega)) => {
                    if dt.is_some() {
                        return Err(CliError::Config(format!(
                            "{}: lattice dispersion needs an integer mode",
                            at("")
                        )));
                    }
                    let d = Vec3(d);
                    if d.norm() == 0.0 {
                        return Err(CliError::Config(format!("{}: zero direction", at(".direction"))));
                    }
                    (d / d.norm() * (omega / c), omega)
                }
                _ => {
                    return Err(CliError::Config(format!(
                        "{}: give either mode, or direction together with omega",
                        at("")
                    )))
                }
            };
            let khat = kvec / kvec.norm();
            let effective = match dt {
                Some(dt) => lattice_omega(&grid, kvec, c, dt)?,
                None => omega,
            };
            let sign = WaveSign::from(w.sign);
            let shape = match theory {
                Theory::Em(medium) => {
                    if !(w.amplitude != 0.0 && w.amplitude.is_finite()) {
                        return Err(CliError::Config(format!(
                            "{}: must be finite and nonzero",
                            at(".amplitude")
                        )));
                    }
                    let a = match w.polarization {
                        Some(p) => {
                            let p = Vec3(p);
                            let transverse = p - khat * khat.dot(&p);
                            if transverse.norm() <= 1e-12 * p.norm().max(1.0) {
                                return Err(CliError::Config(format!(
                                    "{}: needs a component transverse to the propagation direction",
                                    at(".polarization")
                                )));
                            }
                            transverse / transverse.norm()
                        }
                        None => perpendicular(khat),
                    };
                    let b = khat.cross(&a);
                    let frame = Frame::standard();
                    let wave = EmPlaneWave::new(
                        *medium,
                        khat,
                        omega,
                        sign,
                        frame.join_vector(0.0, a) * w.amplitude,
                        frame.join_vector(0.0, b) * (w.amplitude * medium.zeta),
                        w.phase,
                    )
                    .map_err(config(&at("")))?;
                    WaveShape::Em(wave)
                }
                Theory::Acoustic(medium) => {
                    if w.polarization.is_some() {
                        return Err(CliError::Config(format!(
                            "{}: acoustic waves are longitudinal",
                            at(".polarization")
                        )));
                    }
                    let wave = AcPlaneWave::scalar(*medium, khat, omega, sign, w.amplitude, w.phase)
                        .map_err(config(&at("")))?;
                    WaveShape::Acoustic(wave)
                }
            };
            waves.push(Wave {
                shape,
                rate: effective / omega,
            });
        }
        Ok(WaveSet { waves })
    }

    pub fn source(&self, theory: &Theory) -> Result<Option<SourceFn>, CliError> {
        if self.sources.is_empty() {
            return Ok(None);
        }
        let allowed = match theory {
            Theory::Em(_) => grades::ODD,
            Theory::Acoustic(_) => grades::EVEN,
        };
        let grid = self.grid()?;
        let extent = grid.extent();
        let c = theory.c();
        for (n, s) in self.sources.iter().enumerate() {
            if !s.value.has_only_grades(allowed, 0.0) {
                let expected = if allowed == grades::ODD { "{1, 3}" } else { "{0, 2, 4}" };
                return Err(CliError::Config(format!(
                    "sources[{n}].value: grades must lie in {expected}"
                )));
            }
            if !(s.width > 0.0 && s.width.is_finite()) {
                return Err(CliError::Config(format!("sources[{n}].width: must be positive")));
            }
        }
        let sources = self.sources.clone();
        Ok(Some(Arc::new(move |r: &Event| {
            sources
                .iter()
                .map(|s| {
                    // Minimum-image distance in the periodic box.
                    let d2: f64 = (0..3)
                        .map(|i| {
                            let d = r[i + 1] - s.center[i];
                            let d = d - extent[i] * (d / extent[i]).round();
                            d * d
                        })
                        .sum();
                    let envelope = (-d2 / (2.0 * s.width * s.width)).exp();
                    let modulation = if s.frequency > 0.0 {
                        (s.frequency * r[0] / c + s.phase).sin()
                    } else {
                        1.0
                    };
                    s.value * (envelope * modulation)
                })
                .sum()
        })))
    }

    pub fn probes(&self, theory: &Theory) -> Result<Vec<Probe>, CliError> {
        self.probes
            .iter()
            .enumerate()
            .map(|(n, p)| {
                let coupling = match (&p.coupling, theory) {
                    (CouplingConfig::Em { q_e, q_m }, Theory::Em(_)) => {
                        Coupling::Em(EmCharges { q_e: *q_e, q_m: *q_m })
                    }
                    (
                        CouplingConfig::Acoustic {
                            rho_dot,
                            force,
                            vorticity,
                            rho_w_dot,
                        },
                        Theory::Acoustic(_),
                    ) => Coupling::Acoustic(AcSource {
                        rho_dot: *rho_dot,
                        force: Vec3(*force),
                        vorticity: Vec3(*vorticity),
                        rho_w_dot: *rho_w_dot,
                    }),
                    _ => {
                        return Err(CliError::Config(format!(
                            "probes[{n}].coupling: does not match the {:?} theory",
                            self.theory
                        )))
                    }
                };
                Probe::new(coupling, p.mass, Vec3(p.position), Vec3(p.velocity), theory.c()).map_err(|e| {
                    if e.is_numeric_abort() {
                        CliError::Core(e)
                    } else {
                        CliError::Config(format!("probes[{n}]: {e}"))
                    }
                })
            })
            .collect()
    }
}

fn config(path: &str) -> impl Fn(sta_fields::Error) -> CliError + '_ {
    move |e| CliError::Config(format!("{path}: {e}"))
}

fn perpendicular(k: Vec3) -> Vec3 {
    let trial = if k[0].abs() < 0.9 { Vec3::unit(0) } else { Vec3::unit(1) };
    let a = trial - k * k.dot(&trial);
    a / a.norm()
}

#[derive(Clone, Copy, Debug)]
pub enum WaveShape {
    Em(EmPlaneWave),
    Acoustic(AcPlaneWave),
}

/// A closed-form wave whose phase runs at `rate` times its continuum frequency.
#[derive(Clone, Copy, Debug)]
pub struct Wave {
    pub shape: WaveShape,
    pub rate: f64,
}

impl Wave {
    fn retimed(&self, r: &Event) -> Event {
        [r[0] * self.rate, r[1], r[2], r[3]]
    }

    pub fn omega(&self) -> f64 {
        let omega = match self.shape {
            WaveShape::Em(w) => w.omega,
            WaveShape::Acoustic(w) => w.omega,
        };
        omega * self.rate
    }

    pub fn potential(&self, r: &Event) -> Multivector {
        let r = self.retimed(r);
        match self.shape {
            WaveShape::Em(w) => w.potential(&r),
            WaveShape::Acoustic(w) => w.potential(&r),
        }
    }

    pub fn field(&self, r: &Event) -> Multivector {
        let r = self.retimed(r);
        match self.shape {
            WaveShape::Em(w) => w.spinor(&r),
            WaveShape::Acoustic(w) => w.field(&r),
        }
    }

    pub fn field_partial(&self, r: &Event, axis: usize) -> Multivector {
        let scale = if axis == 0 { self.rate } else { 1.0 };
        let r = self.retimed(r);
        let d = match self.shape {
            WaveShape::Em(w) => w.spinor_partial(&r, axis),
            WaveShape::Acoustic(w) => w.field_partial(&r, axis),
        };
        d * scale
    }

    /// Complex envelopes: `(Ē, H̄)` for EM, `(v̄, 0)` for acoustics.
    pub fn envelopes(&self, position: Vec3) -> Result<(CVec3, CVec3), CliError> {
        match self.shape {
            WaveShape::Em(w) => Ok(w.envelopes(position)?),
            WaveShape::Acoustic(w) => Ok((w.velocity_envelope(position), CVec3::default())),
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct WaveSet {
    pub waves: Vec<Wave>,
}

impl WaveSet {
    pub fn potential(&self, r: &Event) -> Multivector {
        self.waves.iter().map(|w| w.potential(r)).sum()
    }

    pub fn field(&self, r: &Event) -> Multivector {
        self.waves.iter().map(|w| w.field(r)).sum()
    }

    pub fn field_source(&self) -> impl SpacetimeField + '_ {
        Analytic::new(
            move |r: &Event| self.field(r),
            move |r: &Event, axis| self.waves.iter().map(|w| w.field_partial(r, axis)).sum(),
        )
    }

    /// The common angular frequency, if every wave shares one.
    pub fn single_frequency(&self) -> Option<f64> {
        let first = self.waves.first()?.omega();
        self.waves
            .iter()
            .all(|w| (w.omega() - first).abs() <= 1e-12 * first)
            .then_some(first)
    }
}
