use std::f64::consts::TAU;

use sta_fields::acoustic::AcPlaneWave;
use sta_fields::em::{EmMedium, EmPlaneWave, WaveSign};
use sta_fields::lattice::discrete_wavenumber;
use sta_fields::simulator::{lattice_omega, SimState, SpatialField, SpatialGrid, Theory};
use sta_fields::{Event, Frame, Multivector, Vec3};

/// Circular wave along `m·(1, 1, 0)` in a unit box.
pub fn diagonal_wave(m: f64, sign: WaveSign) -> EmPlaneWave {
    let medium = EmMedium::natural();
    let khat = Vec3::new(1.0, 1.0, 0.0) / 2f64.sqrt();
    let omega = TAU * m * 2f64.sqrt() * medium.c;
    let pol = Frame::standard().join_vector(0.0, Vec3::new(1.0, -1.0, 0.0) / 2f64.sqrt());
    EmPlaneWave::new(medium, khat, omega, sign, Multivector::gamma(3), pol * medium.zeta, 0.4).unwrap()
}

/// Evaluates `f` with time rescaled so the phase advances at `omega_h` instead of `omega`.
pub fn retimed(r: &Event, omega: f64, omega_h: f64) -> Event {
    [r[0] * omega_h / omega, r[1], r[2], r[3]]
}

type Mode = (Box<dyn Fn(&Event) -> Multivector + Sync + Send>, f64, f64);

/// Superposition of lattice-exact modes for either theory.
pub fn exact_modes(theory: Theory, grid: SpatialGrid, dt: f64) -> impl Fn(&Event) -> Multivector + Sync + Send {
    let c = theory.c();
    let dirs: [([f64; 3], f64); 3] = [([1.0, 0.0, 0.0], 1.0), ([0.0, 2.0, 1.0], 0.6), ([1.0, -1.0, 2.0], 0.3)];
    let modes: Vec<Mode> = dirs
        .iter()
        .enumerate()
        .map(|(n, (d, amp))| {
            let kvec = Vec3(*d) * TAU;
            let khat = kvec / kvec.norm();
            let omega = c * kvec.norm();
            let omega_h = lattice_omega(&grid, kvec, c, dt).unwrap();
            let sign = if n % 2 == 0 { WaveSign::Plus } else { WaveSign::Minus };
            let f: Box<dyn Fn(&Event) -> Multivector + Sync + Send> = match theory {
                Theory::Em(medium) => {
                    // Polarized against the central-difference wave vector so the lattice field is W-free.
                    let kappa = Vec3([0, 1, 2].map(|i| discrete_wavenumber(kvec[i], grid.spacing[i])));
                    let khat_h = kappa / kappa.norm();
                    let a = perpendicular(khat_h);
                    let b = khat_h.cross(&a);
                    let frame = Frame::standard();
                    let wave = EmPlaneWave::new(
                        medium,
                        khat,
                        omega,
                        sign,
                        frame.join_vector(0.0, a) * *amp,
                        frame.join_vector(0.0, b) * (*amp * medium.zeta),
                        0.3 * n as f64,
                    )
                    .unwrap();
                    Box::new(move |r: &Event| wave.potential(r))
                }
                Theory::Acoustic(medium) => {
                    let wave = AcPlaneWave::scalar(medium, khat, omega, sign, *amp, 0.3 * n as f64).unwrap();
                    Box::new(move |r: &Event| wave.potential(r))
                }
            };
            (f, omega, omega_h)
        })
        .collect();
    move |r: &Event| modes.iter().map(|(f, w, wh)| f(&retimed(r, *w, *wh))).sum()
}

pub fn perpendicular(k: Vec3) -> Vec3 {
    let trial = if k[0].abs() < 0.9 { Vec3::unit(0) } else { Vec3::unit(1) };
    let a = trial - k * k.dot(&trial);
    a / a.norm()
}

/// Max error of the half-level field against the closed form, relative to the field scale.
pub fn circular_wave_error(m: f64, steps: usize) -> f64 {
    let grid = SpatialGrid::cube(32, 1.0).unwrap();
    let dt = 0.4 * grid.spacing[0] / EmMedium::natural().c;
    let wave = diagonal_wave(m, WaveSign::Plus);
    let mut s =
        SimState::from_potential(Theory::Em(EmMedium::natural()), grid, 0.0, dt, |r| wave.potential(r)).unwrap();
    s.run(steps).unwrap();
    let c = wave.medium.c;
    let t = s.field_time();
    let exact = SpatialField::from_fn(grid, |p| wave.spinor(&[c * t, p[0], p[1], p[2]]));
    s.field().max_abs_diff(&exact).unwrap() / exact.max_abs()
}

pub fn uniform(psi: Multivector) -> impl Fn(&Event) -> Multivector {
    move |_: &Event| psi
}

/// Exact relativistic motion under a constant electric force `qE` along x.
pub fn constant_force_exact(m: f64, c: f64, qe: f64, p0: Vec3, t: f64) -> (Vec3, Vec3) {
    let p = p0 + Vec3::new(qe * t, 0.0, 0.0);
    let energy = |p: Vec3| (m * m * c.powi(4) + p.norm_sq() * c * c).sqrt();
    let x_par = (energy(p) - energy(p0)) / qe;
    let p_perp = Vec3::new(0.0, p0[1], p0[2]);
    let e_perp = (m * m * c.powi(4) + p_perp.norm_sq() * c * c).sqrt();
    let arg = |px: f64| (px * c / e_perp).asinh();
    let x_perp = p_perp * (c / qe * (arg(p[0]) - arg(p0[0])));
    (Vec3::new(x_par, 0.0, 0.0) + x_perp, p)
}
