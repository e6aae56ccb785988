//! Monochromatic complex envelopes for cycle-averaged quantities.
//!
//! The unit imaginary `i` used here is ordinary complex bookkeeping: a real
//! field `f(t) = Re(f̄ e^{−iωt})`. It is unrelated to the geometric
//! pseudoscalar `I`, and conversion happens only through
//! [`envelope_from_quadratures`].

use num_complex::Complex64;

use crate::algebra::Vec3;

/// A complex 3-vector envelope.
pub type CVec3 = [Complex64; 3];

pub fn real_part(v: &CVec3) -> Vec3 {
    Vec3(v.map(|c| c.re))
}

pub fn add(a: &CVec3, b: &CVec3) -> CVec3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

pub fn scale(a: &CVec3, s: Complex64) -> CVec3 {
    a.map(|c| c * s)
}

pub fn from_real(v: Vec3) -> CVec3 {
    v.0.map(|x| Complex64::new(x, 0.0))
}

/// `Im(a* × a)`.
pub fn im_conj_cross(a: &CVec3) -> Vec3 {
    let c = |x: Complex64, y: Complex64| x.conj() * y;
    Vec3([
        (c(a[1], a[2]) - c(a[2], a[1])).im,
        (c(a[2], a[0]) - c(a[0], a[2])).im,
        (c(a[0], a[1]) - c(a[1], a[0])).im,
    ])
}

/// `Σ |a_k|²`.
pub fn norm_sq(a: &CVec3) -> f64 {
    a.iter().map(|c| c.norm_sqr()).sum()
}

/// Envelope of `f(t) = A cos θ + B sin θ` with `θ = −s ω t + β` and `s = ±1`.
pub fn envelope_from_quadratures(a: Vec3, b: Vec3, s: f64, beta: f64) -> CVec3 {
    let pair = |x: f64, y: f64| {
        if s > 0.0 {
            Complex64::new(x, -y) * Complex64::cis(beta)
        } else {
            Complex64::new(x, y) * Complex64::cis(-beta)
        }
    };
    [0, 1, 2].map(|k| pair(a.0[k], b.0[k]))
}

/// Real field value at time `t` from an envelope.
pub fn evaluate(v: &CVec3, omega: f64, t: f64) -> Vec3 {
    let phase = Complex64::cis(-omega * t);
    Vec3(v.map(|c| (c * phase).re))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadrature_envelope_reproduces_signal() {
        let a = Vec3::new(1.0, -0.5, 0.25);
        let b = Vec3::new(0.3, 0.7, -1.1);
        let (omega, beta) = (2.3, 0.4);
        for s in [1.0, -1.0] {
            let env = envelope_from_quadratures(a, b, s, beta);
            for t in [0.0, 0.17, 1.3] {
                let theta = -s * omega * t + beta;
                let direct = a * theta.cos() + b * theta.sin();
                assert!((evaluate(&env, omega, t) - direct).max_abs() < 1e-14);
            }
        }
    }

    #[test]
    fn real_envelope_has_no_spin() {
        assert_eq!(im_conj_cross(&from_real(Vec3::new(1.0, 2.0, 3.0))), Vec3::ZERO);
    }
}
