mod common;

use std::f64::consts::PI;

use common::*;
use proptest::prelude::*;
use sta_fields::algebra::grades;
use sta_fields::*;

fn odd() -> impl Strategy<Value = Multivector> {
    (prop::array::uniform4(-1.0f64..1.0), prop::array::uniform4(-1.0f64..1.0))
        .prop_map(|(a, b)| Multivector::vector(a) + Multivector::vector(b) * Multivector::I)
}

fn bivector() -> impl Strategy<Value = Multivector> {
    (prop::array::uniform3(-1.0f64..1.0), prop::array::uniform3(-1.0f64..1.0)).prop_map(|(a, b)| {
        let f = Frame::standard();
        f.relative(Vec3(a)) + f.axial(Vec3(b))
    })
}

#[test]
fn vector_examples() {
    let p = vector_polar(&Multivector::gamma(0)).unwrap();
    assert!(!p.is_null && p.phase == 0.0 && p.magnitude == 1.0);
    assert_eq!(p.canonical, Multivector::gamma(0));
    let z = Multivector::gamma(0) + Multivector::gamma(1) * Multivector::I;
    let c = ComplexScalar::of(&(z.reverse() * z));
    assert_eq!((c.alpha, c.beta), (2.0, 0.0));
    assert_eq!(vector_polar(&z).unwrap().phase, 0.0);
    assert!(vector_polar(&Multivector::sigma(1)).is_err());
    assert!(vector_polar(&Multivector::ONE).is_err());
}

#[test]
fn gradient_of_null_plane_wave_is_null() {
    // z = αIk for null k.
    let k = Multivector::vector([2.5, 1.5, 0.0, 2.0]);
    assert_eq!(k.dot(&k).scalar_part(), 0.0);
    for theta in [0.0, 0.4, 2.5, -1.1] {
        let z = Multivector::complex(0.0, 1.3) * Multivector::phase(theta) * k;
        let p = vector_polar(&z).unwrap();
        assert!(p.is_null && p.magnitude == 0.0 && p.phase == 0.0);
        assert_eq!(p.canonical, z);
    }
}

#[test]
fn bivector_examples() {
    let p = bivector_polar(&Multivector::sigma(1)).unwrap();
    assert!(!p.is_null && p.phase == 0.0 && p.magnitude == 1.0);
    let p = bivector_polar(&(Multivector::I * Multivector::sigma(1))).unwrap();
    assert!((p.phase - PI).abs() < 1e-15 && p.magnitude == 1.0);
    assert!((p.reconstruct() - Multivector::I * Multivector::sigma(1)).max_abs() < 1e-15);
    let circular = Multivector::sigma(1) + Multivector::I * Multivector::sigma(2);
    assert!(bivector_polar(&circular).unwrap().is_null);
    assert!(bivector_polar(&Multivector::gamma(1)).is_err());
}

#[test]
fn threshold_is_scale_invariant() {
    let circular = Multivector::sigma(1) + Multivector::I * Multivector::sigma(2);
    for scale in [1e-150, 1e-20, 1.0, 1e20, 1e150] {
        assert!(bivector_polar(&(circular * scale)).unwrap().is_null);
        assert!(!bivector_polar(&(Multivector::sigma(3) * scale)).unwrap().is_null);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn scalar_polar_reconstructs(alpha in -5.0f64..5.0, beta in -5.0f64..5.0) {
        let zeta = ComplexScalar::new(alpha, beta);
        let p = scalar_polar(zeta);
        prop_assert!((p.reconstruct() - zeta.to_multivector()).max_abs() <= 1e-14 * (1.0 + p.magnitude));
        prop_assert!(p.phase > -PI && p.phase <= PI);
        prop_assert!(ComplexScalar::of(&(zeta.conj().to_multivector() * zeta.to_multivector())).beta.abs() <= 1e-15);
        prop_assert!(close((zeta * zeta.conj()).alpha, zeta.norm_sq(), 1e-14));
    }

    #[test]
    fn vector_polar_invariants(z in odd()) {
        let p = vector_polar(&z).unwrap();
        prop_assume!(!p.is_null);
        let tol = 1e-10 * z.norm_sq().max(1.0);
        prop_assert!((p.reconstruct() - z).max_abs() <= tol);
        let z0 = p.canonical;
        let m2 = p.magnitude * p.magnitude;
        prop_assert!((z0.reverse() * z0 - Multivector::scalar(m2)).max_abs() <= tol);
        prop_assert!((z0 * z0.reverse() - Multivector::scalar(m2)).max_abs() <= tol);
        prop_assert!((z0.reverse() * z0).pseudoscalar_part().abs() <= tol);
        prop_assert!((z * z - z0 * z0).max_abs() <= tol);
        prop_assert!(z0.has_only_grades(grades::ODD, 0.0));
    }

    #[test]
    fn square_is_phase_invariant(z in odd(), theta in -PI..PI) {
        let rotated = z * Multivector::phase(theta);
        prop_assert!((rotated * rotated - z * z).max_abs() <= 1e-12);
    }

    #[test]
    fn bivector_polar_invariants(f in bivector()) {
        let p = bivector_polar(&f).unwrap();
        prop_assume!(!p.is_null);
        let tol = 1e-10 * f.norm_sq().max(1.0);
        prop_assert!((p.reconstruct() - f).max_abs() <= tol);
        let sq = p.canonical * p.canonical;
        prop_assert!(sq.pseudoscalar_part().abs() <= tol);
        prop_assert!(close(sq.scalar_part().abs(), p.magnitude * p.magnitude, tol));
        prop_assert!(sq.has_only_grades(grades::SCALAR | grades::PSEUDOSCALAR, tol));
    }

    #[test]
    fn nullity_survives_any_phase(a in prop::array::uniform3(-1.0f64..1.0), theta in -PI..PI, boost in prop::array::uniform3(-0.4f64..0.4)) {
        let frame = Frame::standard();
        let e = Vec3(a);
        prop_assume!(e.norm() > 0.1);
        // Equal-magnitude orthogonal electric and magnetic parts give a null bivector.
        let helper = if e[0].abs() < 0.9 * e.norm() { Vec3::new(1.0, 0.0, 0.0) } else { Vec3::new(0.0, 1.0, 0.0) };
        let b = e.cross(&helper);
        let b = b * (e.norm() / b.norm());
        let f = frame.relative(e) + frame.axial(b);
        prop_assert!(bivector_polar(&f).unwrap().is_null);
        prop_assert!(bivector_polar(&(f * Multivector::phase(theta))).unwrap().is_null);
        let r = Rotor::observer_boost(Vec3(boost), 1.0).unwrap();
        prop_assert!(bivector_polar(&r.apply(&f)).unwrap().is_null);
        let z = Multivector::gamma(0) + Multivector::gamma(3);
        prop_assert!(vector_polar(&(z * Multivector::phase(theta))).unwrap().is_null);
    }
}
