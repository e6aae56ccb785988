//! `sta-fields simulate`: leapfrog evolution of the potential with sources and probes.

use std::path::Path;

use serde::Serialize;
use sta_fields::simulator::{Probe, SimState};

use crate::config::ScenarioConfig;
use crate::error::Result;
use crate::output::{prepare_dir, write_json, Table};
use crate::wave::theory_name;

#[derive(Clone, Debug, Serialize)]
pub struct SimSummary {
    pub theory: String,
    pub steps: usize,
    pub dt: f64,
    pub start_time: f64,
    pub end_time: f64,
    pub snapshots: Vec<usize>,
    pub initial_energy: f64,
    pub final_energy: f64,
    pub max_drift: f64,
    pub probes: Vec<Probe>,
}

const AUDIT_HEADER: [&str; 8] = [
    "step",
    "time",
    "field_energy",
    "probe_energy",
    "work",
    "boundary_flux",
    "total",
    "drift",
];

const TRAJECTORY_HEADER: [&str; 14] = [
    "step",
    "probe",
    "time",
    "x",
    "y",
    "z",
    "p_x",
    "p_y",
    "p_z",
    "energy",
    "proper_time",
    "work",
    "rest_mass_drift",
    "speed",
];

fn snapshot(state: &SimState, dir: &Path) -> Result<()> {
    let step = state.steps();
    state
        .potential()
        .write_snapshot(&dir.join(format!("potential_{step:06}.csv")), state.time())?;
    state
        .field()
        .write_snapshot(&dir.join(format!("field_{step:06}.csv")), state.field_time())?;
    Ok(())
}

fn record(state: &SimState, audit: &mut Table, trajectory: &mut Table) -> Result<f64> {
    let a = state.continuity_audit()?;
    audit.row(
        &[state.steps()],
        &[
            a.time,
            a.field_energy,
            a.probe_energy,
            a.work,
            a.boundary_flux,
            a.total,
            a.drift,
        ],
    )?;
    let c = state.theory.c();
    for (n, p) in state.probes.iter().enumerate() {
        trajectory.row(
            &[state.steps(), n],
            &[
                p.time,
                p.position[0],
                p.position[1],
                p.position[2],
                p.momentum[0],
                p.momentum[1],
                p.momentum[2],
                p.energy,
                p.proper_time,
                p.work,
                p.mass_drift,
                p.velocity(c).norm(),
            ],
        )?;
    }
    Ok(a.drift)
}

pub fn run(cfg: &ScenarioConfig, out: &Path) -> Result<SimSummary> {
    let theory = cfg.theory()?;
    let grid = cfg.grid()?;
    let dt = cfg.dt(&theory)?;
    let waves = cfg.wave_set(&theory)?;
    let t0 = cfg.lattice.time;
    let mut state = SimState::from_potential(theory, grid, t0, dt, |r| waves.potential(r))?;
    if let Some(source) = cfg.source(&theory)? {
        state = state.with_source(source);
    }
    let mut probes = cfg.probes(&theory)?;
    for p in &mut probes {
        p.time = t0;
    }
    state = state.with_probes(probes);

    let dir = prepare_dir(out)?;
    let mut audit = Table::create(&dir.join("audit.csv"), &AUDIT_HEADER)?;
    let mut trajectory = Table::create(&dir.join("trajectory.csv"), &TRAJECTORY_HEADER)?;
    let initial_energy = state.field_energy()?;
    let steps = cfg.lattice.steps;
    let cadence = cfg.output.cadence;
    let mut snapshots = vec![0];
    snapshot(&state, &dir)?;
    let mut max_drift = record(&state, &mut audit, &mut trajectory)?;
    for step in 1..=steps {
        state.step_wave()?;
        max_drift = max_drift.max(record(&state, &mut audit, &mut trajectory)?);
        if (cadence > 0 && step % cadence == 0) || step == steps {
            snapshot(&state, &dir)?;
            snapshots.push(step);
        }
    }
    audit.finish()?;
    trajectory.finish()?;
    let summary = SimSummary {
        theory: theory_name(&theory),
        steps,
        dt,
        start_time: t0,
        end_time: state.time(),
        snapshots,
        initial_energy,
        final_energy: state.field_energy()?,
        max_drift,
        probes: state.probes.clone(),
    };
    write_json(&dir.join("summary.json"), &summary)?;
    Ok(summary)
}
