#![allow(dead_code)]

pub mod oracles;
pub mod waves;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sta_fields::{Event, Multivector, SpacetimeField, Vec3};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}

pub fn close3(a: Vec3, b: Vec3, tol: f64) -> bool {
    (a - b).max_abs() <= tol * (1.0 + a.max_abs().max(b.max_abs()))
}

pub fn random_event(rng: &mut impl Rng, scale: f64) -> Event {
    [0; 4].map(|_| rng.gen_range(-scale..scale))
}

pub fn random_vec3(rng: &mut impl Rng) -> Vec3 {
    Vec3([0; 3].map(|_| rng.gen_range(-1.0..1.0)))
}

/// A multivector field whose every blade coefficient is a quadratic polynomial in the event
/// coordinates, with exact first and second derivatives.
#[derive(Clone)]
pub struct QuadraticField {
    constant: [f64; 16],
    linear: [[f64; 4]; 16],
    quadratic: [[[f64; 4]; 4]; 16],
}

impl QuadraticField {
    /// Random coefficients restricted to the blades with `GRADE_OF` in `mask`.
    pub fn random(rng: &mut impl Rng, mask: u8) -> Self {
        let mut f = QuadraticField {
            constant: [0.0; 16],
            linear: [[0.0; 4]; 16],
            quadratic: [[[0.0; 4]; 4]; 16],
        };
        for b in 0..16 {
            if mask & (1 << sta_fields::algebra::GRADE_OF[b]) == 0 {
                continue;
            }
            f.constant[b] = rng.gen_range(-1.0..1.0);
            for n in 0..4 {
                f.linear[b][n] = rng.gen_range(-1.0..1.0);
                for l in n..4 {
                    let v = rng.gen_range(-1.0..1.0);
                    f.quadratic[b][n][l] = v;
                    f.quadratic[b][l][n] = v;
                }
            }
        }
        f
    }

    pub fn second(&self, mu: usize, nu: usize) -> Multivector {
        Multivector::new(std::array::from_fn(|b| 2.0 * self.quadratic[b][mu][nu]))
    }
}

impl SpacetimeField for QuadraticField {
    fn value(&self, r: &Event) -> Multivector {
        Multivector::new(std::array::from_fn(|b| {
            let mut s = self.constant[b];
            for n in 0..4 {
                s += self.linear[b][n] * r[n];
                for l in 0..4 {
                    s += self.quadratic[b][n][l] * r[n] * r[l];
                }
            }
            s
        }))
    }

    fn partial(&self, r: &Event, axis: usize) -> Multivector {
        Multivector::new(std::array::from_fn(|b| {
            self.linear[b][axis] + (0..4).map(|n| 2.0 * self.quadratic[b][axis][n] * r[n]).sum::<f64>()
        }))
    }
}

/// Fourth-order central difference of a vector-valued function of an event.
pub fn fd<const N: usize>(f: impl Fn(&Event) -> [f64; N], r: &Event, axis: usize, h: f64) -> [f64; N] {
    let at = |s: f64| {
        let mut e = *r;
        e[axis] += s * h;
        f(&e)
    };
    let (m2, m1, p1, p2) = (at(-2.0), at(-1.0), at(1.0), at(2.0));
    std::array::from_fn(|i| (m2[i] - 8.0 * m1[i] + 8.0 * p1[i] - p2[i]) / (12.0 * h))
}

/// Dense random multivector with coefficients in [−1, 1) on the grades in `mask`.
pub fn random_multivector(rng: &mut impl Rng, mask: u8) -> Multivector {
    Multivector::new(std::array::from_fn(|b| {
        if mask & (1 << sta_fields::algebra::GRADE_OF[b]) != 0 {
            rng.gen_range(-1.0..1.0)
        } else {
            0.0
        }
    }))
}
