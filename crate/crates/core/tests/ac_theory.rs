mod common;

use common::*;
use proptest::prelude::*;
use sta_fields::acoustic::*;
use sta_fields::algebra::grades;
use sta_fields::em::WaveSign;
use sta_fields::envelope;
use sta_fields::field::finite_difference;
use sta_fields::{Analytic, Event, Frame, Grade, LatticeSpec, Multivector, MultivectorField, SpacetimeField, Vec3};

fn frame() -> Frame {
    Frame::standard()
}

fn fluid() -> AcMedium {
    AcMedium::new(1.3, 0.45).unwrap().with_couplings(0.7, 0.4, 0.9)
}

fn vec3() -> impl Strategy<Value = Vec3> {
    prop::array::uniform3(-2.0f64..2.0).prop_map(Vec3)
}

fn fields() -> impl Strategy<Value = AcFields3> {
    (-2.0f64..2.0, vec3(), -2.0f64..2.0, vec3()).prop_map(|(p, v, pw, w)| AcFields3 {
        pressure: p,
        velocity: v,
        pressure_w: pw,
        velocity_w: w,
    })
}

fn sources() -> impl Strategy<Value = AcSource> {
    (-2.0f64..2.0, vec3(), vec3(), -2.0f64..2.0).prop_map(|(r, f, o, rw)| AcSource {
        rho_dot: r,
        force: f,
        vorticity: o,
        rho_w_dot: rw,
    })
}

#[test]
fn medium_constants() {
    let air = AcMedium::air();
    assert!((air.c - 343.0).abs() < 1e-9);
    assert!(air.consistency_defect() < 1e-12);
    assert_eq!((air.lambda_minus, air.lambda_plus, air.lambda_4), (0.5, 0.5, 0.5));
    assert!(AcMedium::new(1.0, 0.0).is_err());
}

#[test]
fn moving_observer_sees_increased_pressure() {
    let m = fluid();
    let v = Vec3::new(0.3, -0.2, 0.5) * m.c;
    let gamma = 1.0 / (1.0 - v.norm_sq() / (m.c * m.c)).sqrt();
    let seen = m.observed_background(v).unwrap();
    let (s, p) = frame().split_vector(&seen).unwrap();
    assert!(close(s * m.c / m.p0, gamma, 1e-13));
    assert!(close3(p, -(v * (gamma * m.rho)), 1e-13));
}

proptest! {
    #[test]
    fn components_roundtrip(f in fields()) {
        let m = fluid();
        let z = ac_field_from_components(&f, &frame(), &m);
        prop_assert!(z.has_only_grades(grades::ODD, 0.0));
        let back = ac_fields_3d(&z, &frame(), &m).unwrap();
        prop_assert!(close(back.pressure, f.pressure, 1e-13) && close(back.pressure_w, f.pressure_w, 1e-13));
        prop_assert!(close3(back.velocity, f.velocity, 1e-13) && close3(back.velocity_w, f.velocity_w, 1e-13));
    }

    #[test]
    fn energy_momentum_matches_3d(f in fields()) {
        let m = fluid();
        let z = ac_field_from_components(&f, &frame(), &m);
        let (energy, p) = ac_energy_momentum(&z, &frame(), &m).unwrap();
        let expected = 0.5 * (m.rho * f.velocity.norm_sq() + m.beta * f.pressure.powi(2))
            + 0.5 * (m.rho * f.velocity_w.norm_sq() + m.beta * f.pressure_w.powi(2));
        prop_assert!(close(energy, expected, 1e-12));
        let c2 = m.c * m.c;
        prop_assert!(close3(p, f.velocity * (f.pressure / c2) + f.velocity_w * (f.pressure_w / c2), 1e-12));
        prop_assert!(energy >= 0.0);
    }

    /// `−c⟨T(1)⟩₀ = −⟨z~z⟩₀/(2ρ)`; its `w` sector enters with the sign of `−w²`.
    #[test]
    fn lagrangian_identity(f in fields()) {
        let m = fluid();
        let z = ac_field_from_components(&f, &frame(), &m);
        let rev = z.reverse();
        let t1 = (rev * z + z * rev) / (4.0 * m.zeta);
        let l = ac_lagrangian_trad(&z, &m);
        prop_assert!(close(-m.c * t1.scalar_part(), l, 1e-12));
        let expected = 0.5 * (m.rho * f.velocity.norm_sq() - m.beta * f.pressure.powi(2))
            + 0.5 * (m.beta * f.pressure_w.powi(2) - m.rho * f.velocity_w.norm_sq());
        prop_assert!(close(l, expected, 1e-12));
    }

    /// Componentwise oracle for the 3D acoustic power and force on a probe.
    #[test]
    fn force_matches_3d_law(f in fields(), s in sources()) {
        let m = fluid();
        let c = m.c;
        let z = ac_field_from_components(&f, &frame(), &m);
        let (power, force) = ac_force(&z, &s, &frame(), &m).unwrap();
        let (v, w, p, pw) = (f.velocity, f.velocity_w, f.pressure, f.pressure_w);
        let co = s.vorticity * c;
        let expected_power = p / m.rho * s.rho_dot + pw / m.rho * s.rho_w_dot - v.dot(&s.force) - w.dot(&co);
        let expected_force = -(s.force * (p / (m.rho * c * c))) - (v / c).cross(&co) + v * s.rho_dot
            - co * (pw / (m.rho * c * c)) + (w / c).cross(&s.force) + w * s.rho_w_dot;
        prop_assert!(close(power, expected_power, 1e-12), "{power} vs {expected_power}");
        prop_assert!(close3(force, expected_force, 1e-12), "{force:?} vs {expected_force:?}");
    }
}

#[test]
fn force_examples() {
    let m = fluid();
    let flow = AcFields3 {
        velocity: Vec3::new(0.2, 0.0, -0.1),
        ..Default::default()
    };
    let z = ac_field_from_components(&flow, &frame(), &m);
    let mass = AcSource {
        rho_dot: 0.8,
        ..Default::default()
    };
    let (_, f) = ac_force(&z, &mass, &frame(), &m).unwrap();
    assert!(close3(f, flow.velocity * 0.8, 1e-14));

    let still = AcFields3 {
        pressure: 1.0,
        pressure_w: 0.6,
        ..Default::default()
    };
    let z = ac_field_from_components(&still, &frame(), &m);
    let spin = AcSource {
        vorticity: Vec3::new(0.0, 0.0, 2.0),
        ..Default::default()
    };
    let (_, f) = ac_force(&z, &spin, &frame(), &m).unwrap();
    assert!(close3(f, spin.vorticity * (-0.6 * m.c / (m.rho * m.c * m.c)), 1e-14));
    let (p, f) = ac_force(&z, &AcSource::default(), &frame(), &m).unwrap();
    assert_eq!((p, f), (0.0, Vec3::ZERO));
}

/// Even quadratic spinor potential with exact derivatives.
fn spinor_fixture(seed: u64) -> QuadraticField {
    QuadraticField::random(&mut rng(seed), grades::EVEN)
}

#[test]
fn potentials_reproduce_3d_field_relations() {
    let m = fluid();
    let (c, rho) = (m.c, m.rho);
    let (lm, lp, l4) = (m.lambda_minus, m.lambda_plus, m.lambda_4);
    let psi = spinor_fixture(7);
    let mut g = rng(8);
    for _ in 0..20 {
        let r = random_event(&mut g, 2.0);
        let z = ac_field_at(&psi, &r).unwrap();
        let got = ac_fields_3d(&z, &frame(), &m).unwrap();
        // Undo the couplings to read φ, M, φ_w and their partials.
        let parts = |a: &Multivector| {
            let phi = a.scalar_part() / lm;
            let phi_w = a.pseudoscalar_part() / l4;
            let (x, y) = ac_displacements(&(a.part(Grade::Bivector) * (3.0 / lp)), &frame(), &m).unwrap();
            (phi, x, y, phi_w)
        };
        let d: Vec<_> = (0..4).map(|ax| parts(&psi.partial(&r, ax))).collect();
        let dt_phi = d[0].0 * c;
        let grad_phi = Vec3::new(d[1].0, d[2].0, d[3].0);
        let dt_x = d[0].1 * c;
        let dt_y = d[0].2 * c;
        let div = |k: usize| {
            (1..4)
                .map(|a| if k == 1 { d[a].1[a - 1] } else { d[a].2[a - 1] })
                .sum::<f64>()
        };
        let curl = |k: usize| {
            let comp = |a: usize, i: usize| if k == 1 { d[a].1[i] } else { d[a].2[i] };
            Vec3::new(
                comp(2, 2) - comp(3, 1),
                comp(3, 0) - comp(1, 2),
                comp(1, 1) - comp(2, 0),
            )
        };
        let dt_phiw = d[0].3 * c;
        let grad_phiw = Vec3::new(d[1].3, d[2].3, d[3].3);

        let p = -lm * dt_phi - lp / 3.0 * rho * c * c * div(1);
        let rho_v = grad_phi * lm + (dt_x * rho - curl(2) * (rho * c)) * (lp / 3.0);
        let pw = -lp / 3.0 * rho * c * c * div(2) - l4 * dt_phiw;
        let rho_w = (dt_y * rho + curl(1) * (rho * c)) * (lp / 3.0) + grad_phiw * l4;
        assert!(close(got.pressure, p, 1e-12), "{} vs {}", got.pressure, p);
        assert!(close3(got.velocity * rho, rho_v, 1e-12));
        assert!(close(got.pressure_w, pw, 1e-12));
        assert!(close3(got.velocity_w * rho, rho_w, 1e-12));
    }
}

#[test]
fn residual_reproduces_3d_equations_of_motion() {
    let m = fluid();
    let c = m.c;
    let psi = spinor_fixture(11);
    let z_at = |r: &Event| -psi.vector_derivative(r);
    // z is linear, so its partials are constant: −Σγ^ν ∂_μ∂_ν ψ.
    let z = Analytic::new(z_at, |_: &Event, mu| {
        -(0..4)
            .map(|nu| psi.second(mu, nu).left_reciprocal_gamma(nu))
            .sum::<Multivector>()
    });
    let src = AcSource {
        rho_dot: 0.3,
        force: Vec3::new(-0.2, 0.5, 0.1),
        vorticity: Vec3::new(0.4, 0.0, -0.7),
        rho_w_dot: -0.25,
    };
    let r: Event = [0.2, -0.4, 0.9, 0.3];
    let residual = z.vector_derivative(&r) + src.combined(&frame(), c);
    let comps = ac_components(&residual, &frame(), &m).unwrap();

    let flat = |e: &Event| {
        let f = ac_fields_3d(&z_at(e), &frame(), &m).unwrap();
        let (v, w) = (f.velocity * m.rho, f.velocity_w * m.rho);
        [f.pressure, v[0], v[1], v[2], f.pressure_w, w[0], w[1], w[2]]
    };
    let d: Vec<[f64; 8]> = (0..4).map(|ax| fd(flat, &r, ax, 1e-2)).collect();
    let dt = |i: usize| d[0][i] * c;
    let div = |o: usize| d[1][o] + d[2][o + 1] + d[3][o + 2];
    let curl = |o: usize| Vec3::new(d[2][o + 2] - d[3][o + 1], d[3][o] - d[1][o + 2], d[1][o + 1] - d[2][o]);
    let grad = |i: usize| Vec3::new(d[1][i], d[2][i], d[3][i]);
    let dtv = |o: usize| Vec3::new(dt(o), dt(o + 1), dt(o + 2));

    let continuity = dt(0) + c * c * div(1) + src.rho_dot * c * c;
    let euler = dtv(1) + grad(0) + curl(5) * c - src.force;
    let rotation = dtv(5) + grad(4) - curl(1) * c - src.vorticity * c;
    let continuity_w = dt(4) + c * c * div(5) + src.rho_w_dot * c * c;
    assert!(
        close(comps.continuity, continuity, 1e-10),
        "{} vs {}",
        comps.continuity,
        continuity
    );
    assert!(close3(comps.euler, euler, 1e-10), "{:?} vs {:?}", comps.euler, euler);
    assert!(
        close3(comps.rotation, rotation, 1e-10),
        "{:?} vs {:?}",
        comps.rotation,
        rotation
    );
    assert!(close(comps.continuity_w, continuity_w, 1e-10));
    assert!(curl(5).norm() > 1e-3, "fixture must exercise the w-curl correction");
}

#[test]
fn odd_potential_is_rejected() {
    let odd = QuadraticField::random(&mut rng(3), grades::ODD);
    assert!(ac_field_at(&odd, &[0.0; 4]).is_err());
}

#[test]
fn rigid_displacement_gives_no_field() {
    let m = fluid();
    let spec = LatticeSpec::new([4; 4], [0.5; 4]).unwrap();
    let mconst = bivector_potential(Vec3::new(1.0, 2.0, -1.0), Vec3::ZERO, &frame(), &m);
    let psi = AcPotentialSpinor::new(
        MultivectorField::zeros(spec),
        MultivectorField::from_fn(spec, |_| mconst),
        MultivectorField::zeros(spec),
        &m,
    )
    .unwrap();
    assert_eq!(ac_field_from_potentials(&psi).max_abs(), 0.0);
    assert!(AcPotentialSpinor::new(
        MultivectorField::zeros(spec),
        MultivectorField::from_fn(spec, |_| Multivector::gamma(0)),
        MultivectorField::zeros(spec),
        &m,
    )
    .is_err());
}

#[test]
fn orbital_angular_momentum_overcounts_by_three() {
    let p = Multivector::vector([0.7, -0.3, 1.1, 0.4]);
    let l = Analytic::new(
        move |r: &Event| p.wedge(&Multivector::vector(*r)),
        move |_: &Event, mu| p.wedge(&Multivector::gamma(mu)),
    );
    let mut g = rng(5);
    for _ in 0..10 {
        let r = random_event(&mut g, 3.0);
        let div = -l.vector_derivative(&r).part(Grade::Vector);
        assert!((div - p * 3.0).max_abs() < 1e-14);
    }
}

fn full_wave(sign: WaveSign, r_n: Multivector, r_s: Multivector) -> AcPlaneWave {
    AcPlaneWave::new(
        AcMedium::new(1.3, 0.45).unwrap(),
        Vec3::new(0.6, 0.0, 0.8),
        2.1,
        sign,
        0.9,
        0.4,
        AcBranch::FullSpinor,
        r_n,
        r_s,
    )
    .unwrap()
}

#[test]
fn plane_wave_potentials_generate_field() {
    let mut g = rng(2024);
    let offsets = (
        Multivector::vector([0.3, 0.1, -0.4, 0.2]),
        Multivector::vector([-0.5, 0.2, 0.0, 0.6]),
    );
    for sign in [WaveSign::Plus, WaveSign::Minus] {
        let waves = [
            AcPlaneWave::scalar(AcMedium::new(1.3, 0.45).unwrap(), Vec3::unit(1), 2.1, sign, 0.9, 0.4).unwrap(),
            full_wave(sign, offsets.0, offsets.1),
        ];
        for w in &waves {
            assert!((w.wave_vector() * w.wave_vector()).max_abs() < 1e-14);
            let psi = w.potential_field();
            let z = w.field_field();
            for _ in 0..100 {
                let r = random_event(&mut g, 3.0);
                let derived = ac_field_at(&psi, &r).unwrap();
                assert!((derived - z.value(&r)).max_abs() <= 1e-12, "{:?}", w.branch);
                assert!(z.vector_derivative(&r).max_abs() <= 1e-12);
            }
            let r = random_event(&mut g, 1.0);
            for ax in 0..4 {
                assert!((finite_difference(&psi, &r, ax, 1e-3) - psi.partial(&r, ax)).max_abs() < 1e-9);
                assert!((finite_difference(&z, &r, ax, 1e-3) - z.partial(&r, ax)).max_abs() < 1e-9);
            }
            // Longitudinal: ρv = (P/c)k̂ everywhere.
            let f = ac_fields_3d(&w.field(&r), &frame(), &w.medium).unwrap();
            assert!(close3(
                f.velocity * w.medium.rho,
                w.khat * (f.pressure / w.medium.c),
                1e-13
            ));
        }
    }
}

#[test]
fn plane_wave_rejects_bad_input() {
    let m = AcMedium::natural();
    let z = Multivector::ZERO;
    let b = AcBranch::FullSpinor;
    assert!(AcPlaneWave::new(m, Vec3::new(0.0, 0.0, 2.0), 1.0, WaveSign::Plus, 1.0, 0.0, b, z, z).is_err());
    assert!(AcPlaneWave::new(m, Vec3::unit(0), 1.0, WaveSign::Plus, 0.0, 0.0, b, z, z).is_err());
    assert!(AcPlaneWave::new(m, Vec3::unit(0), 1.0, WaveSign::Plus, 1.0, 0.0, b, Multivector::ONE, z).is_err());
}

#[test]
fn dual_lagrangian_vanishes_on_waves() {
    let mut g = rng(77);
    let offsets = (
        Multivector::vector([0.3, 0.1, -0.4, 0.2]),
        Multivector::vector([-0.5, 0.2, 0.0, 0.6]),
    );
    for sign in [WaveSign::Plus, WaveSign::Minus] {
        let w = full_wave(sign, offsets.0, offsets.1);
        let scale = w.canonical_momentum().norm_sq();
        for _ in 0..50 {
            let r = random_event(&mut g, 3.0);
            let (trad, dual) = ac_lagrangians_at(&w.potential_field(), &r, &w.medium);
            assert!(dual.abs() <= 1e-10 * scale, "{dual}");
            assert!(trad.abs() <= 1e-10 * scale, "{trad}");
        }
    }
}

#[test]
fn displacement_closed_forms() {
    for sign in [WaveSign::Plus, WaveSign::Minus] {
        let s = sign.value();
        let offsets = (
            Multivector::vector([0.3, 0.1, -0.4, 0.2]),
            Multivector::vector([-0.5, 0.2, 0.0, 0.6]),
        );
        let w = full_wave(sign, offsets.0, offsets.1);
        let mut g = rng(99);
        for _ in 0..20 {
            let r = random_event(&mut g, 2.0);
            let (x, y) = w.canonical_displacements(&r).unwrap();
            let (xc, yc) = w.canonical_displacements_closed_form(&r);
            assert!(close3(x, xc, 1e-12) && close3(y, yc, 1e-12));
            let split = w.angular_momentum_split(&r);
            let m = w.medium;
            assert!(close3(x * m.rho, split.n_orbital + split.n_spin, 1e-12));
            assert!(close3(y * m.zeta, split.l + split.s, 1e-12));
            let rho_v = w.khat * (w.amplitude / m.c);
            let pos = Vec3::new(r[1], r[2], r[3]);
            assert!(close3(split.l, pos.cross(&rho_v) * s, 1e-12));
        }
    }
}

#[test]
fn spin_part_is_intrinsic() {
    let m = AcMedium::new(1.3, 0.45).unwrap();
    let build = |r_n| {
        AcPlaneWave::new(
            m,
            Vec3::unit(0),
            2.1,
            WaveSign::Plus,
            0.9,
            0.0,
            AcBranch::FullSpinor,
            r_n,
            Multivector::ZERO,
        )
        .unwrap()
    };
    let plain = build(Multivector::ZERO);
    let rho_v = Vec3::unit(0) * (0.9 / m.c);
    let shifted = build(Multivector::gamma(2) * 0.7);
    let mut g = rng(4);
    let first = shifted.angular_momentum_split(&[0.0; 4]).s;
    assert!(close3(first, Vec3::new(0.0, 0.7, 0.0).cross(&rho_v), 1e-14));
    for _ in 0..10 {
        let r = random_event(&mut g, 5.0);
        let pos = Vec3::new(r[1], r[2], r[3]);
        let a = plain.angular_momentum_split(&r);
        assert!(close3(a.l, pos.cross(&rho_v), 1e-13));
        assert_eq!(a.s, Vec3::ZERO);
        assert_eq!(shifted.angular_momentum_split(&r).s, first);
    }
}

#[test]
fn velocity_envelope_reproduces_signal() {
    for sign in [WaveSign::Plus, WaveSign::Minus] {
        let w = full_wave(sign, Multivector::ZERO, Multivector::ZERO);
        let pos = Vec3::new(0.2, -0.7, 1.3);
        let env = w.velocity_envelope(pos);
        for t in [0.0, 0.3, 1.9] {
            let r = [w.medium.c * t, pos[0], pos[1], pos[2]];
            let v = w.momentum_density(&r) / w.medium.rho;
            assert!(close3(envelope::evaluate(&env, w.omega, t), v, 1e-13));
        }
    }
}

fn perpendicular_pair(m: AcMedium) -> (AcPlaneWave, AcPlaneWave) {
    let a = AcPlaneWave::scalar(m, Vec3::unit(0), 3.0, WaveSign::Plus, 1.0, 0.0).unwrap();
    let b = AcPlaneWave::scalar(m, Vec3::unit(1), 3.0, WaveSign::Plus, 1.0, std::f64::consts::FRAC_PI_2).unwrap();
    (a, b)
}

#[test]
fn spin_of_single_and_crossed_waves() {
    let m = AcMedium::new(1.3, 0.45).unwrap();
    let pos = Vec3::new(0.1, 0.2, 0.0);
    let single = AcPlaneWave::scalar(m, Vec3::unit(0), 3.0, WaveSign::Plus, 1.0, 0.0).unwrap();
    let s = ac_spin_cycle_avg(&single.velocity_envelope(pos), 3.0, m.rho).unwrap();
    assert_eq!(s, Vec3::ZERO);

    let (a, b) = perpendicular_pair(m);
    let v = envelope::add(&a.velocity_envelope(pos), &b.velocity_envelope(pos));
    let spin = ac_spin_cycle_avg(&v, 3.0, m.rho).unwrap();
    assert!(spin[2].abs() > 1e-3 && spin[0] == 0.0 && spin[1] == 0.0);
    assert_eq!(ac_spin_scalar_theory(&v, 3.0).unwrap(), Vec3::ZERO);
    assert!(ac_spin_cycle_avg(&v, -1.0, m.rho).is_err());

    // Time average of ½x×ρv over one period equals the envelope formula.
    let n = 16;
    let period = std::f64::consts::TAU / 3.0;
    let mut avg = Vec3::ZERO;
    for i in 0..n {
        let t = period * i as f64 / n as f64;
        let r = [m.c * t, pos[0], pos[1], pos[2]];
        let x = a.oscillating_displacement(&r) + b.oscillating_displacement(&r);
        let rho_v = a.momentum_density(&r) + b.momentum_density(&r);
        avg += ac_spin_density(x, rho_v) / n as f64;
    }
    assert!(close3(avg, spin, 1e-12), "{avg:?} vs {spin:?}");
}

#[test]
fn gauge_check_on_vorticity_free_displacement() {
    // M with x = a sin(kx − ωt) along σ1 and y = 0 satisfies ∇×x = −∂_t y/c = 0.
    let m = AcMedium::natural();
    let mfield = Analytic::new(
        move |r: &Event| {
            bivector_potential(
                Vec3::new((r[1] - r[0]).sin(), 0.0, 0.0),
                Vec3::ZERO,
                &Frame::standard(),
                &m,
            )
        },
        move |r: &Event, ax| {
            let d = (r[1] - r[0]).cos() * [-1.0, 1.0, 0.0, 0.0][ax];
            bivector_potential(Vec3::new(d, 0.0, 0.0), Vec3::ZERO, &Frame::standard(), &m)
        },
    );
    let r = [0.3, 0.1, 0.0, 0.0];
    let sample = ac_spin_density_checked(&mfield, Vec3::new(0.0, 1.0, 0.0), &r, &m).unwrap();
    assert!(sample.gauge_violation < 1e-15);
    assert!(close3(sample.spin, Vec3::new(0.0, 0.0, 0.5 * (-0.2f64).sin()), 1e-15));

    let twisted = Analytic::new(
        move |r: &Event| bivector_potential(Vec3::new(0.0, r[1], 0.0), Vec3::ZERO, &Frame::standard(), &m),
        move |_: &Event, ax| {
            bivector_potential(
                Vec3::new(0.0, [0.0, 1.0, 0.0, 0.0][ax], 0.0),
                Vec3::ZERO,
                &Frame::standard(),
                &m,
            )
        },
    );
    let sample = ac_spin_density_checked(&twisted, Vec3::ZERO, &r, &m).unwrap();
    assert!((sample.gauge_violation - 1.0).abs() < 1e-15);
}

#[test]
fn gauge_transform_shifts_displacement_and_keeps_p() {
    let m = AcMedium::natural();
    let spec = LatticeSpec::new([8; 4], [0.125; 4]).unwrap();
    let tau = std::f64::consts::TAU;
    let mfield = MultivectorField::from_fn(spec, |r| {
        bivector_potential(
            Vec3::new((tau * r[1]).sin(), 0.0, (tau * r[0]).cos()),
            Vec3::new(0.0, (tau * r[3]).sin(), 0.0),
            &Frame::standard(),
            &m,
        )
    });
    let b_i = MultivectorField::from_fn(spec, |r| {
        let b = Vec3::new(
            (tau * r[2]).sin() * (tau * r[0]).cos(),
            (tau * r[3]).cos(),
            (tau * r[1]).sin(),
        );
        gauge_generator((tau * (r[1] + r[2])).sin(), b, &Frame::standard(), &m)
    });
    let shift = ac_gauge_transform(&mfield, &b_i).unwrap();
    let p_before = sta_fields::lattice::vector_derivative(&mfield).part(Grade::Vector);
    let p_after = sta_fields::lattice::vector_derivative(&shift.m).part(Grade::Vector);
    assert!(p_after.max_abs_diff(&p_before).unwrap() <= 1e-10);
    assert!(shift.delta_wedge.max_abs() > 1e-2);

    // Stencil oracle: x ↦ x − ∇×b with the same central differences.
    let bvec = |i: usize| {
        let f = b_i.at(i);
        let (_, b) = Frame::standard()
            .split_vector(&(f.part(Grade::Trivector) * -Multivector::I))
            .unwrap();
        b / m.zeta
    };
    let b_field: Vec<Vec3> = (0..spec.sites()).map(bvec).collect();
    for i in (0..spec.sites()).step_by(37) {
        let d = |axis: usize| {
            let (pl, mi) = (spec.shift(i, axis, 1), spec.shift(i, axis, -1));
            (b_field[pl] - b_field[mi]) / (2.0 * spec.spacing[axis])
        };
        let curl = Vec3::new(d(2)[2] - d(3)[1], d(3)[0] - d(1)[2], d(1)[1] - d(2)[0]);
        let (x0, _) = ac_displacements(mfield.at(i), &Frame::standard(), &m).unwrap();
        let (x1, _) = ac_displacements(shift.m.at(i), &Frame::standard(), &m).unwrap();
        assert!(close3(x1 - x0, -curl, 1e-12), "{:?} vs {:?}", x1 - x0, -curl);
    }

    // Constant b0 with b = 0 is the identity.
    let trivial = MultivectorField::from_fn(spec, |_| gauge_generator(3.0, Vec3::ZERO, &Frame::standard(), &m));
    let id = ac_gauge_transform(&mfield, &trivial).unwrap();
    assert!(id.m.max_abs_diff(&mfield).unwrap() == 0.0 && id.delta_wedge.max_abs() == 0.0);
}
