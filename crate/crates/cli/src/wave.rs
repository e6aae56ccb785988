//! `sta-fields wave`: closed-form plane-wave superpositions sampled on the grid.

use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;
use sta_fields::acoustic::{ac_energy_momentum, ac_fields_3d, ac_spin_cycle_avg};
use sta_fields::algebra::BLADE_NAMES;
use sta_fields::em::{em_energy_momentum, em_fields_3d, em_spin_density, maxwell_residual_at};
use sta_fields::envelope::{self, CVec3};
use sta_fields::simulator::{SpatialGrid, Theory};
use sta_fields::{Event, Frame, Multivector, SpacetimeField, Vec3};

use crate::config::{Column, ScenarioConfig, WaveSet};
use crate::error::{CliError, Result};
use crate::output::{prepare_dir, write_json, xyz, Table};

#[derive(Clone, Debug, Serialize)]
pub struct WaveSummary {
    pub theory: String,
    pub time: f64,
    pub sites: usize,
    pub waves: usize,
    pub columns: Vec<Column>,
    /// Grid sums weighted by the cell volume.
    pub energy: f64,
    pub momentum: [f64; 3],
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spin: Option<[f64; 3]>,
    pub max_residual: f64,
}

/// Summed complex envelopes of every wave at one point.
pub(crate) fn envelopes_at(waves: &WaveSet, position: Vec3) -> Result<(CVec3, CVec3)> {
    let mut sum = (CVec3::default(), CVec3::default());
    for w in &waves.waves {
        let (a, b) = w.envelopes(position)?;
        sum = (envelope::add(&sum.0, &a), envelope::add(&sum.1, &b));
    }
    Ok(sum)
}

/// The one frequency a cycle average needs; `None` when there are no waves.
pub(crate) fn common_frequency(waves: &WaveSet, command: &str) -> Result<Option<f64>> {
    if waves.waves.is_empty() {
        return Ok(None);
    }
    waves
        .single_frequency()
        .map(Some)
        .ok_or_else(|| CliError::Config(format!("waves: {command} needs every wave to share one frequency")))
}

fn header(theory: &Theory, columns: &[Column]) -> Vec<String> {
    let mut h: Vec<String> = ["i", "j", "k", "x", "y", "z"].map(String::from).to_vec();
    for col in columns {
        match (col, theory) {
            (Column::Potential, _) => h.extend(BLADE_NAMES.iter().map(|b| format!("z_{b}"))),
            (Column::Fields, Theory::Em(_)) => {
                h.extend(xyz("E"));
                h.extend(xyz("H"));
                h.extend(["W_e".into(), "W_m".into()]);
            }
            (Column::Fields, Theory::Acoustic(_)) => {
                h.push("P".into());
                h.extend(xyz("v"));
                h.push("P_w".into());
                h.extend(xyz("w"));
            }
            (Column::Energy, _) => h.push("energy".into()),
            (Column::Momentum, _) => h.extend(xyz("p")),
            (Column::Spin, _) => h.extend(xyz("S")),
            (Column::Residual, _) => h.push("residual".into()),
        }
    }
    h
}

struct Site {
    values: Vec<f64>,
    energy: f64,
    momentum: Vec3,
    spin: Vec3,
    residual: f64,
}

fn sample(theory: &Theory, waves: &WaveSet, columns: &[Column], omega: Option<f64>, r: &Event) -> Result<Site> {
    let frame = Frame::standard();
    let position = Vec3::new(r[1], r[2], r[3]);
    let f = waves.field(r);
    let (energy, momentum) = match theory {
        Theory::Em(m) => em_energy_momentum(&f, &frame, m)?,
        Theory::Acoustic(m) => ac_energy_momentum(&f, &frame, m)?,
    };
    let spin = match omega {
        None => Vec3::ZERO,
        Some(omega) => {
            let (a, b) = envelopes_at(waves, position)?;
            match theory {
                Theory::Em(m) => em_spin_density(&a, &b, omega, m)?,
                Theory::Acoustic(m) => ac_spin_cycle_avg(&a, omega, m.rho)?,
            }
        }
    };
    let residual = if waves.waves.is_empty() {
        0.0
    } else {
        let source = waves.field_source();
        match theory {
            Theory::Em(m) => maxwell_residual_at(&source, &Multivector::ZERO, m, r).max_abs(),
            Theory::Acoustic(_) => source.vector_derivative(r).max_abs(),
        }
    };
    let mut values = Vec::new();
    for col in columns {
        match col {
            Column::Potential => values.extend(waves.potential(r).coeffs),
            Column::Fields => match theory {
                Theory::Em(m) => {
                    let g = em_fields_3d(&f, &frame, m)?;
                    values.extend(g.e.0);
                    values.extend(g.h.0);
                    values.extend([g.w_e, g.w_m]);
                }
                Theory::Acoustic(m) => {
                    let g = ac_fields_3d(&f, &frame, m)?;
                    values.push(g.pressure);
                    values.extend(g.velocity.0);
                    values.push(g.pressure_w);
                    values.extend(g.velocity_w.0);
                }
            },
            Column::Energy => values.push(energy),
            Column::Momentum => values.extend(momentum.0),
            Column::Spin => values.extend(spin.0),
            Column::Residual => values.push(residual),
        }
    }
    Ok(Site {
        values,
        energy,
        momentum,
        spin,
        residual,
    })
}

pub(crate) fn theory_name(theory: &Theory) -> String {
    match theory {
        Theory::Em(_) => "em".into(),
        Theory::Acoustic(_) => "acoustic".into(),
    }
}

pub(crate) fn site_event(grid: &SpatialGrid, index: usize, ct: f64) -> Event {
    let p = grid.position(index);
    [ct, p[0], p[1], p[2]]
}

pub fn run(cfg: &ScenarioConfig, out: &Path) -> Result<WaveSummary> {
    let theory = cfg.theory()?;
    let grid = cfg.grid()?;
    let waves = cfg.wave_set(&theory)?;
    let columns = cfg.columns();
    let omega = if columns.contains(&Column::Spin) {
        common_frequency(&waves, "the spin column")?
    } else {
        None
    };
    let ct = theory.c() * cfg.lattice.time;
    let sites: Vec<Site> = (0..grid.sites())
        .into_par_iter()
        .map(|i| sample(&theory, &waves, &columns, omega, &site_event(&grid, i, ct)))
        .collect::<Result<_>>()?;

    let dir = prepare_dir(out)?;
    let mut table = Table::create(&dir.join("fields.csv"), &header(&theory, &columns))?;
    let cell: f64 = grid.spacing.iter().product();
    let (mut energy, mut momentum, mut spin, mut max_residual) = (0.0, Vec3::ZERO, Vec3::ZERO, 0.0f64);
    for (i, s) in sites.iter().enumerate() {
        let [a, b, c] = grid.coords(i);
        let p = grid.position(i);
        let mut values = p.0.to_vec();
        values.extend_from_slice(&s.values);
        table.row(&[a, b, c], &values)?;
        energy += s.energy * cell;
        momentum += s.momentum * cell;
        spin += s.spin * cell;
        max_residual = max_residual.max(s.residual);
    }
    table.finish()?;
    let summary = WaveSummary {
        theory: theory_name(&theory),
        time: cfg.lattice.time,
        sites: grid.sites(),
        waves: waves.waves.len(),
        columns,
        energy,
        momentum: momentum.0,
        spin: omega.map(|_| spin.0),
        max_residual,
    };
    write_json(&dir.join("wave_summary.json"), &summary)?;
    Ok(summary)
}
