//! Time-domain evolution on a periodic spatial grid.
//!
//! [`SimState`] advances the potential with a leapfrog on `∂²_ct Z = ΔZ + s`,
//! where `s = μj` for electromagnetism and `s = ψ_N` for acoustics. The
//! measurable field is recovered at half steps from two potential levels.
//! [`DiracState`] evolves the measurable field directly through the
//! first-order equation and exists to cross-check the wave stepper.

use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::Path;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::acoustic::{ac_energy_momentum, ac_force, AcMedium, AcSource};
use crate::algebra::{grades, Frame, Multivector, Vec3, BLADE_NAMES};
use crate::em::{em_energy_momentum, em_lorentz_force, EmCharges, EmMedium};
use crate::error::{Error, Result};
use crate::field::Event;
use crate::lattice::{parse_field, sidecar_path};

/// Combined source evaluated at an event: the current `j` (EM) or `ψ_N` (acoustic).
pub type SourceFn = Arc<dyn Fn(&Event) -> Multivector + Send + Sync>;

/// Shape and spacing of a periodic 3D grid.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpatialGrid {
    pub dims: [usize; 3],
    pub spacing: [f64; 3],
}

impl SpatialGrid {
    pub const MIN_DIM: usize = 4;

    pub fn new(dims: [usize; 3], spacing: [f64; 3]) -> Result<Self> {
        if dims.iter().any(|d| *d < Self::MIN_DIM) {
            return Err(Error::invalid(
                "spatial grid",
                format!("every dimension must be at least {}", Self::MIN_DIM),
            ));
        }
        if spacing.iter().any(|h| !(h.is_finite() && *h > 0.0)) {
            return Err(Error::invalid("spatial grid", "spacings must be finite and positive"));
        }
        Ok(SpatialGrid { dims, spacing })
    }

    /// `n³` cube of side `length`.
    pub fn cube(n: usize, length: f64) -> Result<Self> {
        SpatialGrid::new([n; 3], [length / n as f64; 3])
    }

    pub fn sites(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn extent(&self) -> Vec3 {
        Vec3([0, 1, 2].map(|a| self.dims[a] as f64 * self.spacing[a]))
    }

    pub fn coords(&self, index: usize) -> [usize; 3] {
        let [_, ny, nz] = self.dims;
        [index / (ny * nz), (index / nz) % ny, index % nz]
    }

    pub fn index(&self, c: [usize; 3]) -> usize {
        let [_, ny, nz] = self.dims;
        (c[0] * ny + c[1]) * nz + c[2]
    }

    pub fn position(&self, index: usize) -> Vec3 {
        let c = self.coords(index);
        Vec3([0, 1, 2].map(|a| c[a] as f64 * self.spacing[a]))
    }

    /// Periodic neighbour `offset` sites along spatial `axis` (0..3).
    pub fn shift(&self, index: usize, axis: usize, offset: isize) -> usize {
        let mut c = self.coords(index);
        let n = self.dims[axis] as isize;
        c[axis] = (c[axis] as isize + offset).rem_euclid(n) as usize;
        self.index(c)
    }

    pub fn min_spacing(&self) -> f64 {
        self.spacing.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Largest stable `cΔt`.
    pub fn cfl_limit(&self) -> f64 {
        self.min_spacing() / 3f64.sqrt()
    }

    pub fn check_cfl(&self, c: f64, dt: f64) -> Result<()> {
        let cdt = c * dt.abs();
        let limit = self.cfl_limit();
        if !(cdt.is_finite() && cdt > 0.0) {
            return Err(Error::invalid("time step", "Δt must be finite and nonzero"));
        }
        if cdt > limit * (1.0 + 1e-12) {
            return Err(Error::Cfl { cdt, limit });
        }
        Ok(())
    }
}

/// Multivector samples on a [`SpatialGrid`].
#[derive(Clone, Debug, PartialEq)]
pub struct SpatialField {
    grid: SpatialGrid,
    data: Vec<Multivector>,
}

impl SpatialField {
    pub fn zeros(grid: SpatialGrid) -> Self {
        SpatialField {
            grid,
            data: vec![Multivector::ZERO; grid.sites()],
        }
    }

    pub fn from_fn<F>(grid: SpatialGrid, f: F) -> Self
    where
        F: Fn(Vec3) -> Multivector + Sync + Send,
    {
        let data = (0..grid.sites()).into_par_iter().map(|i| f(grid.position(i))).collect();
        SpatialField { grid, data }
    }

    pub fn grid(&self) -> &SpatialGrid {
        &self.grid
    }

    pub fn data(&self) -> &[Multivector] {
        &self.data
    }

    pub fn at(&self, index: usize) -> &Multivector {
        &self.data[index]
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, a| m.max(a.max_abs()))
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        if self.grid != other.grid {
            return Err(Error::SpecMismatch(format!("{:?} vs {:?}", self.grid, other.grid)));
        }
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .fold(0.0, |m, (a, b)| m.max((*a - *b).max_abs())))
    }

    pub fn grades_present(&self, tol: f64) -> u8 {
        self.data.iter().fold(0, |m, a| m | a.grades_present(tol))
    }

    /// Periodic trilinear interpolation.
    pub fn interpolate(&self, r: Vec3) -> Multivector {
        let g = &self.grid;
        let mut base = [0usize; 3];
        let mut frac = [0.0; 3];
        for a in 0..3 {
            let s = r[a] / g.spacing[a];
            let fl = s.floor();
            frac[a] = s - fl;
            base[a] = (fl as i64).rem_euclid(g.dims[a] as i64) as usize;
        }
        let mut out = Multivector::ZERO;
        for corner in 0..8 {
            let mut c = base;
            let mut w = 1.0;
            for a in 0..3 {
                if corner >> a & 1 == 1 {
                    c[a] = (c[a] + 1) % g.dims[a];
                    w *= frac[a];
                } else {
                    w *= 1.0 - frac[a];
                }
            }
            if w != 0.0 {
                out += self.data[g.index(c)] * w;
            }
        }
        out
    }

    /// CSV with columns `t, x, y, z` and one per blade.
    /// Writes the lattice snapshot format: integer `x,y,z` indices, 16 blade
    /// columns and a JSON sidecar holding the grid and time.
    pub fn write_snapshot(&self, path: &Path, time: f64) -> Result<()> {
        let mut w = csv::Writer::from_writer(BufWriter::new(File::create(path)?));
        let mut header = vec!["x", "y", "z"];
        header.extend(BLADE_NAMES);
        w.write_record(&header).map_err(csv_error)?;
        for (i, a) in self.data.iter().enumerate() {
            let mut row: Vec<String> = self.grid.coords(i).iter().map(|c| c.to_string()).collect();
            row.extend(a.coeffs.iter().map(|x| fmt17(*x)));
            w.write_record(&row).map_err(csv_error)?;
        }
        w.flush()?;
        let meta = SnapshotMeta { grid: self.grid, time };
        serde_json::to_writer_pretty(BufWriter::new(File::create(sidecar_path(path))?), &meta)?;
        Ok(())
    }

    /// Reads a snapshot written by [`SpatialField::write_snapshot`], returning the field and its time.
    pub fn read_snapshot(path: &Path) -> Result<(Self, f64)> {
        let meta: SnapshotMeta = serde_json::from_reader(BufReader::new(File::open(sidecar_path(path))?))?;
        let grid = SpatialGrid::new(meta.grid.dims, meta.grid.spacing)?;
        let mut reader = csv::Reader::from_reader(BufReader::new(File::open(path)?));
        let mut data = vec![Multivector::ZERO; grid.sites()];
        let mut seen = 0usize;
        for record in reader.records() {
            let record = record.map_err(csv_error)?;
            if record.len() != 3 + BLADE_NAMES.len() {
                return Err(Error::Parse(format!("expected 19 columns, found {}", record.len())));
            }
            let mut coords = [0usize; 3];
            for (a, c) in coords.iter_mut().enumerate() {
                *c = parse_field(&record[a])?;
                if *c >= grid.dims[a] {
                    return Err(Error::Parse(format!("index {c} outside axis {a}")));
                }
            }
            let value = &mut data[grid.index(coords)];
            for b in 0..BLADE_NAMES.len() {
                value.coeffs[b] = parse_field(&record[3 + b])?;
            }
            seen += 1;
        }
        if seen != grid.sites() {
            return Err(Error::SpecMismatch(format!(
                "snapshot has {seen} rows for {} sites",
                grid.sites()
            )));
        }
        Ok((SpatialField { grid, data }, meta.time))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SnapshotMeta {
    grid: SpatialGrid,
    time: f64,
}

fn csv_error(e: csv::Error) -> Error {
    Error::Parse(e.to_string())
}

/// Round-trip float formatting with 17 significant digits.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

/// The theory being evolved, with its medium.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Theory {
    Em(EmMedium),
    Acoustic(AcMedium),
}

impl Theory {
    pub fn c(&self) -> f64 {
        match self {
            Theory::Em(m) => m.c,
            Theory::Acoustic(m) => m.c,
        }
    }

    /// Grades carried by the evolved potential.
    pub fn potential_grades(&self) -> u8 {
        match self {
            Theory::Em(_) => grades::ODD,
            Theory::Acoustic(_) => grades::EVEN,
        }
    }

    /// Grades carried by the measurable field.
    pub fn field_grades(&self) -> u8 {
        match self {
            Theory::Em(_) => grades::EVEN,
            Theory::Acoustic(_) => grades::ODD,
        }
    }

    /// Right-hand side `s` of `∇²Z = s` for the combined source.
    fn wave_source(&self, src: &Multivector) -> Multivector {
        match self {
            Theory::Em(m) => *src * m.mu,
            Theory::Acoustic(_) => *src,
        }
    }

    /// Right-hand side of `∇f = s_f` for the measurable field.
    fn dirac_source(&self, src: &Multivector) -> Multivector {
        match self {
            Theory::Em(m) => *src * m.mu,
            Theory::Acoustic(_) => -*src,
        }
    }

    /// `ψ = ∇Z` (EM) or `z = −∇ψ` (acoustic).
    fn field_sign(&self) -> f64 {
        match self {
            Theory::Em(_) => 1.0,
            Theory::Acoustic(_) => -1.0,
        }
    }

    pub fn energy_density(&self, f: &Multivector) -> Result<f64> {
        let frame = Frame::standard();
        Ok(match self {
            Theory::Em(m) => em_energy_momentum(f, &frame, m)?.0,
            Theory::Acoustic(m) => ac_energy_momentum(f, &frame, m)?.0,
        })
    }
}

/// Leapfrog frequency of a lattice plane wave `e^{i(k·x − ωt)}` under the compact Laplacian.
///
/// Seeding [`SimState`] with this `ω` makes the discrete solution exact to round-off.
pub fn lattice_omega(grid: &SpatialGrid, k: Vec3, c: f64, dt: f64) -> Result<f64> {
    let kappa2: f64 = (0..3)
        .map(|a| {
            let h = grid.spacing[a];
            (2.0 / h * (k[a] * h / 2.0).sin()).powi(2)
        })
        .sum();
    let s = 0.5 * c * dt * kappa2.sqrt();
    if s > 1.0 {
        return Err(Error::Cfl {
            cdt: c * dt,
            limit: grid.cfl_limit(),
        });
    }
    Ok(2.0 * s.asin() / dt)
}

/// Compact 7-point Laplacian at one site.
fn laplacian(grid: &SpatialGrid, f: &[Multivector], i: usize) -> Multivector {
    let centre = f[i];
    (0..3)
        .map(|a| {
            let h2 = grid.spacing[a] * grid.spacing[a];
            (f[grid.shift(i, a, 1)] + f[grid.shift(i, a, -1)] - centre * 2.0) / h2
        })
        .sum()
}

/// `Σ_k γ^k ∂_k f` with central differences at one site.
fn spatial_derivative(grid: &SpatialGrid, f: &[Multivector], i: usize) -> Multivector {
    (0..3)
        .map(|a| {
            let d = (f[grid.shift(i, a, 1)] - f[grid.shift(i, a, -1)]) / (2.0 * grid.spacing[a]);
            d.left_reciprocal_gamma(a + 1)
        })
        .sum()
}

fn check_finite(data: &[Multivector], context: &'static str) -> Result<()> {
    if data.par_iter().all(|a| a.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite(context))
    }
}

fn check_grades(data: &[Multivector], mask: u8, context: &'static str, expected: &'static str) -> Result<()> {
    if data.iter().all(|a| a.has_only_grades(mask, 1e-12)) {
        Ok(())
    } else {
        Err(Error::WrongGrade { context, expected })
    }
}

/// How a probe couples to the field.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Coupling {
    Em(EmCharges),
    Acoustic(AcSource),
}

/// A point probe with lab-frame state.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Probe {
    pub coupling: Coupling,
    pub time: f64,
    pub position: Vec3,
    pub momentum: Vec3,
    /// Total energy `γmc²`.
    pub energy: f64,
    pub rest_mass: f64,
    pub proper_time: f64,
    /// Mechanical work `∫ F·v dt`.
    pub work: f64,
    /// Largest relative rest-mass drift seen so far.
    pub mass_drift: f64,
}

impl Probe {
    pub fn new(coupling: Coupling, mass: f64, position: Vec3, velocity: Vec3, c: f64) -> Result<Self> {
        if !(mass > 0.0 && mass.is_finite()) {
            return Err(Error::invalid("probe", "mass must be positive"));
        }
        let speed = velocity.norm();
        if speed >= c {
            return Err(Error::Superluminal { speed, c });
        }
        let gamma = 1.0 / (1.0 - (speed / c).powi(2)).sqrt();
        Ok(Probe {
            coupling,
            time: 0.0,
            position,
            momentum: velocity * (gamma * mass),
            energy: gamma * mass * c * c,
            rest_mass: mass,
            proper_time: 0.0,
            work: 0.0,
            mass_drift: 0.0,
        })
    }

    pub fn velocity(&self, c: f64) -> Vec3 {
        self.momentum * (c * c / self.energy)
    }

    pub fn kinetic_energy(&self, c: f64) -> f64 {
        self.energy - self.rest_mass * c * c
    }
}

#[derive(Clone, Copy)]
struct ProbeRate {
    dx: Vec3,
    dp: Vec3,
    de: f64,
    dw: f64,
    dtau: f64,
}

fn probe_rate<F>(theory: &Theory, coupling: &Coupling, field: &F, t: f64, x: Vec3, p: Vec3, e: f64) -> Result<ProbeRate>
where
    F: Fn(&Event) -> Multivector + ?Sized,
{
    let c = theory.c();
    let v = p * (c * c / e);
    let speed = v.norm();
    if !e.is_finite() || e <= 0.0 || speed >= c || !speed.is_finite() {
        return Err(Error::Superluminal { speed, c });
    }
    let f = field(&[c * t, x[0], x[1], x[2]]);
    let frame = Frame::standard();
    let (power, force) = match (theory, coupling) {
        (Theory::Em(m), Coupling::Em(q)) => em_lorentz_force(&f, q, v, &frame, m)?,
        (Theory::Acoustic(m), Coupling::Acoustic(s)) => ac_force(&f, s, &frame, m)?,
        _ => {
            return Err(Error::invalid(
                "integrate_probe",
                "probe coupling does not match the theory",
            ))
        }
    };
    Ok(ProbeRate {
        dx: v,
        dp: force,
        de: power,
        dw: force.dot(&v),
        dtau: (1.0 - (speed / c).powi(2)).sqrt(),
    })
}

/// One classical RK4 step of `dx/dt = v`, `dp/dt = F`, `dE/dt = ℘` in lab time.
///
/// `field` returns the measurable field at an event `(ct, x, y, z)`. The
/// velocity is always derived from `(E, p)`, so `u² = c²` holds by
/// construction and the rest mass is free to drift; that drift is recorded.
pub fn integrate_probe<F>(probe: &Probe, theory: &Theory, field: &F, dt: f64) -> Result<Probe>
where
    F: Fn(&Event) -> Multivector + ?Sized,
{
    let t0 = probe.time;
    let rate = |t: f64, x: Vec3, p: Vec3, e: f64| probe_rate(theory, &probe.coupling, field, t, x, p, e);
    let k1 = rate(t0, probe.position, probe.momentum, probe.energy)?;
    let stage = |k: &ProbeRate, s: f64| {
        (
            probe.position + k.dx * s,
            probe.momentum + k.dp * s,
            probe.energy + k.de * s,
        )
    };
    let (x, p, e) = stage(&k1, dt / 2.0);
    let k2 = rate(t0 + dt / 2.0, x, p, e)?;
    let (x, p, e) = stage(&k2, dt / 2.0);
    let k3 = rate(t0 + dt / 2.0, x, p, e)?;
    let (x, p, e) = stage(&k3, dt);
    let k4 = rate(t0 + dt, x, p, e)?;

    let w = dt / 6.0;
    let mut next = *probe;
    next.time = t0 + dt;
    next.position += (k1.dx + (k2.dx + k3.dx) * 2.0 + k4.dx) * w;
    next.momentum += (k1.dp + (k2.dp + k3.dp) * 2.0 + k4.dp) * w;
    next.energy += (k1.de + 2.0 * (k2.de + k3.de) + k4.de) * w;
    next.work += (k1.dw + 2.0 * (k2.dw + k3.dw) + k4.dw) * w;
    next.proper_time += (k1.dtau + 2.0 * (k2.dtau + k3.dtau) + k4.dtau) * w;

    let c = theory.c();
    let shell = next.energy * next.energy - next.momentum.norm_sq() * c * c;
    if shell.is_nan() || shell <= 0.0 || !next.energy.is_finite() {
        return Err(Error::Superluminal {
            speed: next.velocity(c).norm(),
            c,
        });
    }
    let mass = shell.sqrt() / (c * c);
    next.mass_drift = next.mass_drift.max((mass - probe.rest_mass).abs() / probe.rest_mass);
    Ok(next)
}

/// Energy bookkeeping for one moment of a run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct ContinuityReport {
    pub time: f64,
    pub field_energy: f64,
    /// Change of probe energy since the start of the run.
    pub probe_energy: f64,
    /// Work done on probes since the start of the run.
    pub work: f64,
    /// Always zero on a periodic grid.
    pub boundary_flux: f64,
    /// `field_energy + probe_energy − work`.
    pub total: f64,
    pub drift: f64,
}

/// Leapfrog state for the potential.
#[derive(Clone)]
pub struct SimState {
    pub theory: Theory,
    grid: SpatialGrid,
    prev: Vec<Multivector>,
    curr: Vec<Multivector>,
    /// Time of the `curr` level.
    time: f64,
    dt: f64,
    steps: usize,
    source: Option<SourceFn>,
    pub probes: Vec<Probe>,
    probe_energy0: f64,
    initial_total: f64,
}

impl SimState {
    /// Starts from explicit potential levels at `t0 − Δt` and `t0`.
    pub fn from_levels(theory: Theory, prev: SpatialField, curr: SpatialField, t0: f64, dt: f64) -> Result<Self> {
        let grid = curr.grid;
        if prev.grid != grid {
            return Err(Error::SpecMismatch("potential levels differ in grid".into()));
        }
        grid.check_cfl(theory.c(), dt)?;
        for f in [&prev, &curr] {
            check_grades(
                &f.data,
                theory.potential_grades(),
                "SimState",
                "potential grades of the theory",
            )?;
            check_finite(&f.data, "SimState")?;
        }
        let mut state = SimState {
            theory,
            grid,
            prev: prev.data,
            curr: curr.data,
            time: t0,
            dt,
            steps: 0,
            source: None,
            probes: Vec::new(),
            probe_energy0: 0.0,
            initial_total: 0.0,
        };
        state.initial_total = state.field_energy()?;
        Ok(state)
    }

    /// Samples a potential `Z(ct, x, y, z)` at `t0 − Δt` and `t0`.
    pub fn from_potential<F>(theory: Theory, grid: SpatialGrid, t0: f64, dt: f64, z: F) -> Result<Self>
    where
        F: Fn(&Event) -> Multivector + Sync + Send,
    {
        let c = theory.c();
        let level = |t: f64| SpatialField::from_fn(grid, |p| z(&[c * t, p[0], p[1], p[2]]));
        SimState::from_levels(theory, level(t0 - dt), level(t0), t0, dt)
    }

    pub fn with_source(mut self, source: SourceFn) -> Self {
        self.source = Some(source);
        self
    }

    pub fn with_probes(mut self, probes: Vec<Probe>) -> Self {
        self.probe_energy0 = probes.iter().map(|p| p.energy).sum();
        self.probes = probes;
        self
    }

    pub fn grid(&self) -> &SpatialGrid {
        &self.grid
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn potential(&self) -> SpatialField {
        SpatialField {
            grid: self.grid,
            data: self.curr.clone(),
        }
    }

    pub fn previous_potential(&self) -> SpatialField {
        SpatialField {
            grid: self.grid,
            data: self.prev.clone(),
        }
    }

    /// Time at which [`SimState::field`] is centred.
    pub fn field_time(&self) -> f64 {
        self.time - self.dt / 2.0
    }

    fn half_level_field(&self, older: &[Multivector], newer: &[Multivector], dt: f64) -> Vec<Multivector> {
        let grid = self.grid;
        let cdt = self.theory.c() * dt;
        let sign = self.theory.field_sign();
        let mid: Vec<Multivector> = older.par_iter().zip(newer).map(|(a, b)| (*a + *b) * 0.5).collect();
        (0..grid.sites())
            .into_par_iter()
            .map(|i| {
                let dt_part = ((newer[i] - older[i]) / cdt).left_reciprocal_gamma(0);
                (dt_part + spatial_derivative(&grid, &mid, i)) * sign
            })
            .collect()
    }

    /// Measurable field between the two stored levels, at [`SimState::field_time`].
    pub fn field(&self) -> SpatialField {
        SpatialField {
            grid: self.grid,
            data: self.half_level_field(&self.prev, &self.curr, self.dt),
        }
    }

    /// [`SimState::field`] at a single site.
    pub fn field_at_site(&self, index: usize) -> Multivector {
        let grid = self.grid;
        let cdt = self.theory.c() * self.dt;
        let (old, new) = (&self.prev, &self.curr);
        let dt_part = ((new[index] - old[index]) / cdt).left_reciprocal_gamma(0);
        let spatial: Multivector = (0..3)
            .map(|a| {
                let (p, m) = (grid.shift(index, a, 1), grid.shift(index, a, -1));
                let d = (new[p] + old[p] - new[m] - old[m]) / (4.0 * grid.spacing[a]);
                d.left_reciprocal_gamma(a + 1)
            })
            .sum();
        (dt_part + spatial) * self.theory.field_sign()
    }

    /// `Σ ℰ h³` of the half-level field.
    pub fn field_energy(&self) -> Result<f64> {
        let f = self.half_level_field(&self.prev, &self.curr, self.dt);
        let densities: Vec<f64> = f
            .par_iter()
            .map(|a| self.theory.energy_density(a))
            .collect::<Result<_>>()?;
        let cell: f64 = self.grid.spacing.iter().product();
        Ok(densities.iter().sum::<f64>() * cell)
    }

    /// Advances the potential by one leapfrog step, then the probes.
    pub fn step_wave(&mut self) -> Result<()> {
        let grid = self.grid;
        let c = self.theory.c();
        let cdt2 = (c * self.dt).powi(2);
        let t = self.time;
        let theory = self.theory;
        let source = self.source.clone();
        let (prev, curr) = (&self.prev, &self.curr);
        let next: Vec<Multivector> = (0..grid.sites())
            .into_par_iter()
            .map(|i| {
                let mut rhs = laplacian(&grid, curr, i);
                if let Some(s) = &source {
                    let p = grid.position(i);
                    rhs += theory.wave_source(&s(&[c * t, p[0], p[1], p[2]]));
                }
                curr[i] * 2.0 - prev[i] + rhs * cdt2
            })
            .collect();
        check_finite(&next, "step_wave")?;

        if !self.probes.is_empty() {
            let older = self.half_level_field(&self.prev, &self.curr, self.dt);
            let newer = self.half_level_field(&self.curr, &next, self.dt);
            let (f0, f1) = (SpatialField { grid, data: older }, SpatialField { grid, data: newer });
            // Linear in time between the half levels bracketing [t, t + Δt].
            let t_old = t - self.dt / 2.0;
            let dt = self.dt;
            let eval = |r: &Event| {
                let s = (r[0] / c - t_old) / dt;
                let x = Vec3::new(r[1], r[2], r[3]);
                f0.interpolate(x) * (1.0 - s) + f1.interpolate(x) * s
            };
            for p in &mut self.probes {
                *p = integrate_probe(p, &theory, &eval, dt)?;
            }
        }

        self.prev = std::mem::replace(&mut self.curr, next);
        self.time += self.dt;
        self.steps += 1;
        Ok(())
    }

    pub fn run(&mut self, steps: usize) -> Result<()> {
        (0..steps).try_for_each(|_| self.step_wave())
    }

    /// Reverses the direction of time; further steps retrace the run.
    pub fn reverse_time(&mut self) {
        std::mem::swap(&mut self.prev, &mut self.curr);
        self.time -= self.dt;
        self.dt = -self.dt;
    }

    pub fn continuity_audit(&self) -> Result<ContinuityReport> {
        let field_energy = self.field_energy()?;
        let probe_energy = self.probes.iter().map(|p| p.energy).sum::<f64>() - self.probe_energy0;
        let work: f64 = self.probes.iter().map(|p| p.work).sum();
        let total = field_energy + probe_energy - work;
        let change = (total - self.initial_total).abs();
        let drift = if change == 0.0 {
            0.0
        } else {
            change / self.initial_total.abs()
        };
        Ok(ContinuityReport {
            time: self.field_time(),
            field_energy,
            probe_energy,
            work,
            boundary_flux: 0.0,
            total,
            drift,
        })
    }
}

/// First-order leapfrog on the measurable field, `∂_ct f = γ0(s_f − Σ_k γ^k ∂_k f)`.
#[derive(Clone)]
pub struct DiracState {
    pub theory: Theory,
    grid: SpatialGrid,
    prev: Vec<Multivector>,
    curr: Vec<Multivector>,
    time: f64,
    dt: f64,
    source: Option<SourceFn>,
}

impl DiracState {
    pub fn from_field<F>(theory: Theory, grid: SpatialGrid, t0: f64, dt: f64, f: F) -> Result<Self>
    where
        F: Fn(&Event) -> Multivector + Sync + Send,
    {
        grid.check_cfl(theory.c(), dt)?;
        let c = theory.c();
        let level = |t: f64| SpatialField::from_fn(grid, |p| f(&[c * t, p[0], p[1], p[2]])).data;
        let (prev, curr) = (level(t0 - dt), level(t0));
        for d in [&prev, &curr] {
            check_grades(d, theory.field_grades(), "DiracState", "field grades of the theory")?;
            check_finite(d, "DiracState")?;
        }
        Ok(DiracState {
            theory,
            grid,
            prev,
            curr,
            time: t0,
            dt,
            source: None,
        })
    }

    pub fn with_source(mut self, source: SourceFn) -> Self {
        self.source = Some(source);
        self
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn field(&self) -> SpatialField {
        SpatialField {
            grid: self.grid,
            data: self.curr.clone(),
        }
    }

    /// Average of the two stored levels, centred like [`SimState::field`].
    pub fn midpoint_field(&self) -> SpatialField {
        SpatialField {
            grid: self.grid,
            data: self.prev.iter().zip(&self.curr).map(|(a, b)| (*a + *b) * 0.5).collect(),
        }
    }

    pub fn step_dirac(&mut self) -> Result<()> {
        let grid = self.grid;
        let c = self.theory.c();
        let t = self.time;
        let two_cdt = 2.0 * c * self.dt;
        let theory = self.theory;
        let source = self.source.clone();
        let g0 = Multivector::gamma(0);
        let (prev, curr) = (&self.prev, &self.curr);
        let next: Vec<Multivector> = (0..grid.sites())
            .into_par_iter()
            .map(|i| {
                let mut rhs = -spatial_derivative(&grid, curr, i);
                if let Some(s) = &source {
                    let p = grid.position(i);
                    rhs += theory.dirac_source(&s(&[c * t, p[0], p[1], p[2]]));
                }
                prev[i] + g0 * rhs * two_cdt
            })
            .collect();
        check_finite(&next, "step_dirac")?;
        self.prev = std::mem::replace(&mut self.curr, next);
        self.time += self.dt;
        Ok(())
    }

    pub fn run(&mut self, steps: usize) -> Result<()> {
        (0..steps).try_for_each(|_| self.step_dirac())
    }
}
