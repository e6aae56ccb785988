//! `sta-fields spin`: the traditional and corrected spin densities side by side.
//!
//! For EM the traditional density is the electric-biased `ε Im(Ē*×Ē)/(2ω)` and the
//! corrected one is dual-symmetric. For acoustics the traditional scalar theory has no
//! intrinsic spin and the corrected density is `ρ Im(v̄*×v̄)/(4ω)`.

use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;
use sta_fields::acoustic::{ac_spin_cycle_avg, ac_spin_scalar_theory};
use sta_fields::em::{em_spin_density, em_spin_density_electric};
use sta_fields::simulator::Theory;
use sta_fields::Vec3;

use crate::config::ScenarioConfig;
use crate::error::{CliError, Result};
use crate::output::{prepare_dir, write_json, xyz, Table};
use crate::wave::{common_frequency, envelopes_at, theory_name};

#[derive(Clone, Debug, Serialize)]
pub struct SpinSummary {
    pub theory: String,
    pub omega: f64,
    pub sites: usize,
    /// Grid sums weighted by the cell volume.
    pub traditional: [f64; 3],
    pub corrected: [f64; 3],
    pub max_difference: f64,
}

pub fn run(cfg: &ScenarioConfig, out: &Path) -> Result<SpinSummary> {
    let theory = cfg.theory()?;
    let grid = cfg.grid()?;
    let waves = cfg.wave_set(&theory)?;
    let omega = common_frequency(&waves, "spin")?
        .ok_or_else(|| CliError::Config("waves: spin needs at least one wave".into()))?;
    let pairs: Vec<(Vec3, Vec3)> = (0..grid.sites())
        .into_par_iter()
        .map(|i| {
            let (a, b) = envelopes_at(&waves, grid.position(i))?;
            Ok(match &theory {
                Theory::Em(m) => (
                    em_spin_density_electric(&a, omega, m)?,
                    em_spin_density(&a, &b, omega, m)?,
                ),
                Theory::Acoustic(m) => (ac_spin_scalar_theory(&a, omega)?, ac_spin_cycle_avg(&a, omega, m.rho)?),
            })
        })
        .collect::<Result<_>>()?;

    let dir = prepare_dir(out)?;
    let mut header: Vec<String> = ["i", "j", "k", "x", "y", "z"].map(String::from).to_vec();
    header.extend(xyz("traditional"));
    header.extend(xyz("corrected"));
    let mut table = Table::create(&dir.join("spin.csv"), &header)?;
    let cell: f64 = grid.spacing.iter().product();
    let (mut trad, mut corr, mut diff) = (Vec3::ZERO, Vec3::ZERO, 0.0f64);
    for (i, (t, s)) in pairs.iter().enumerate() {
        let [a, b, c] = grid.coords(i);
        let mut values = grid.position(i).0.to_vec();
        values.extend(t.0);
        values.extend(s.0);
        table.row(&[a, b, c], &values)?;
        trad += *t * cell;
        corr += *s * cell;
        diff = diff.max((*s - *t).max_abs());
    }
    table.finish()?;
    let summary = SpinSummary {
        theory: theory_name(&theory),
        omega,
        sites: grid.sites(),
        traditional: trad.0,
        corrected: corr.0,
        max_difference: diff,
    };
    write_json(&dir.join("spin_summary.json"), &summary)?;
    Ok(summary)
}
