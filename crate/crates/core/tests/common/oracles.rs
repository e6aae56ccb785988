use num_complex::Complex64;
use sta_fields::algebra::BLADE_NAMES;
use sta_fields::{Multivector, Vec3};

pub type Mat4 = [[Complex64; 4]; 4];

pub fn matmul(a: &Mat4, b: &Mat4) -> Mat4 {
    std::array::from_fn(|i| std::array::from_fn(|j| (0..4).map(|k| a[i][k] * b[k][j]).sum()))
}

pub fn mat_add(a: &Mat4, b: &Mat4, s: f64) -> Mat4 {
    std::array::from_fn(|i| std::array::from_fn(|j| a[i][j] + b[i][j] * s))
}

pub fn mat_diff(a: &Mat4, b: &Mat4) -> f64 {
    (0..16)
        .map(|n| (a[n / 4][n % 4] - b[n / 4][n % 4]).norm())
        .fold(0.0, f64::max)
}

/// Dirac representation: γ0 = diag(1, 1, −1, −1), γk = [[0, σk], [−σk, 0]].
pub fn dirac_gamma(mu: usize) -> Mat4 {
    let z = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    let pauli: [[[Complex64; 2]; 2]; 3] = [[[z, one], [one, z]], [[z, -i], [i, z]], [[one, z], [z, -one]]];
    let mut m = [[z; 4]; 4];
    if mu == 0 {
        for (d, s) in [(0, 1.0), (1, 1.0), (2, -1.0), (3, -1.0)] {
            m[d][d] = Complex64::new(s, 0.0);
        }
    } else {
        let s = pauli[mu - 1];
        for r in 0..2 {
            for c in 0..2 {
                m[r][c + 2] = s[r][c];
                m[r + 2][c] = -s[r][c];
            }
        }
    }
    m
}

pub fn identity() -> Mat4 {
    std::array::from_fn(|i| std::array::from_fn(|j| Complex64::new(if i == j { 1.0 } else { 0.0 }, 0.0)))
}

/// Matrix of each canonical basis blade, built from its name.
pub fn blade_matrices() -> Vec<Mat4> {
    let pseudo = (0..4).fold(identity(), |m, mu| matmul(&m, &dirac_gamma(mu)));
    BLADE_NAMES
        .iter()
        .map(|name| {
            let mut m = identity();
            let mut rest = *name;
            if let Some(r) = rest.strip_prefix('I') {
                m = pseudo;
                rest = r;
            }
            for g in rest.split('g').skip(1) {
                m = matmul(&m, &dirac_gamma(g.parse().unwrap()));
            }
            m
        })
        .collect()
}

pub fn to_matrix(a: &Multivector, basis: &[Mat4]) -> Mat4 {
    let zero = [[Complex64::new(0.0, 0.0); 4]; 4];
    (0..16).fold(zero, |m, b| mat_add(&m, &basis[b], a.coeffs[b]))
}

/// Observer boost as a 4×4 matrix on contravariant `(p⁰, p)`.
pub fn boost_matrix(beta: Vec3) -> [[f64; 4]; 4] {
    let b2 = beta.norm_sq();
    let gamma = 1.0 / (1.0 - b2).sqrt();
    let mut m = [[0.0; 4]; 4];
    m[0][0] = gamma;
    for i in 0..3 {
        m[0][i + 1] = -gamma * beta[i];
        m[i + 1][0] = -gamma * beta[i];
        for j in 0..3 {
            m[i + 1][j + 1] = if i == j { 1.0 } else { 0.0 } + (gamma - 1.0) * beta[i] * beta[j] / b2;
        }
    }
    m
}
