//! The real Clifford algebra Cl(1,3) of spacetime, signature (+,−,−,−).
//!
//! A [`Multivector`] stores 16 coefficients in the canonical order
//!
//! ```text
//! 1 | γ0 γ1 γ2 γ3 | γ0γ1 γ0γ2 γ0γ3 γ1γ2 γ1γ3 γ2γ3 | Iγ0 Iγ1 Iγ2 Iγ3 | I
//! ```
//!
//! with `I = γ0γ1γ2γ3`. Every product sign is generated at compile time from
//! the generator words below by sorting bitmask blades and contracting with
//! the metric; nothing in the multiplication table is typed in by hand.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Index, IndexMut, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Number of basis blades.
pub const BLADES: usize = 16;

/// Blade names used in text, JSON and CSV forms.
pub const BLADE_NAMES: [&str; BLADES] = [
    "1", "g0", "g1", "g2", "g3", "g0g1", "g0g2", "g0g3", "g1g2", "g1g3", "g2g3", "Ig0", "Ig1", "Ig2", "Ig3", "I",
];

/// Grade of each basis blade.
pub const GRADE_OF: [usize; BLADES] = [0, 1, 1, 1, 1, 2, 2, 2, 2, 2, 2, 3, 3, 3, 3, 4];

/// Each basis element as an ordered product of generators γ_i.
const WORDS: [&[u8]; BLADES] = [
    &[],
    &[0],
    &[1],
    &[2],
    &[3],
    &[0, 1],
    &[0, 2],
    &[0, 3],
    &[1, 2],
    &[1, 3],
    &[2, 3],
    &[0, 1, 2, 3, 0],
    &[0, 1, 2, 3, 1],
    &[0, 1, 2, 3, 2],
    &[0, 1, 2, 3, 3],
    &[0, 1, 2, 3],
];

const fn metric(generator: u32) -> i8 {
    if generator == 0 {
        1
    } else {
        -1
    }
}

/// Product of two canonically ordered bitmask blades, returned as `(sign, mask)`.
pub const fn bitmask_product(a: u8, b: u8) -> (i8, u8) {
    let mut swaps = 0u32;
    let mut shifted = a >> 1;
    while shifted != 0 {
        swaps += (shifted & b).count_ones();
        shifted >>= 1;
    }
    let mut sign: i8 = if swaps.is_multiple_of(2) { 1 } else { -1 };
    let common = a & b;
    let mut g = 0;
    while g < 4 {
        if common & (1 << g) != 0 {
            sign *= metric(g);
        }
        g += 1;
    }
    (sign, a ^ b)
}

const fn word_blade(word: &[u8]) -> (i8, u8) {
    let mut sign = 1i8;
    let mut mask = 0u8;
    let mut i = 0;
    while i < word.len() {
        let (s, m) = bitmask_product(mask, 1 << word[i]);
        sign *= s;
        mask = m;
        i += 1;
    }
    (sign, mask)
}

const fn basis_blades() -> ([i8; BLADES], [u8; BLADES]) {
    let mut signs = [0i8; BLADES];
    let mut masks = [0u8; BLADES];
    let mut i = 0;
    while i < BLADES {
        let (s, m) = word_blade(WORDS[i]);
        signs[i] = s;
        masks[i] = m;
        i += 1;
    }
    (signs, masks)
}

const fn build_cayley() -> ([[i8; BLADES]; BLADES], [[u8; BLADES]; BLADES]) {
    let (signs, masks) = basis_blades();
    let mut sign = [[0i8; BLADES]; BLADES];
    let mut index = [[0u8; BLADES]; BLADES];
    let mut i = 0;
    while i < BLADES {
        let mut j = 0;
        while j < BLADES {
            let (s, m) = bitmask_product(masks[i], masks[j]);
            let mut k = 0;
            while masks[k] != m {
                k += 1;
            }
            sign[i][j] = signs[i] * signs[j] * s * signs[k];
            index[i][j] = k as u8;
            j += 1;
        }
        i += 1;
    }
    (sign, index)
}

const CAYLEY: ([[i8; BLADES]; BLADES], [[u8; BLADES]; BLADES]) = build_cayley();

/// Sign of `e_i e_j` in the canonical basis.
pub const CAYLEY_SIGN: [[i8; BLADES]; BLADES] = CAYLEY.0;
/// Blade index of `e_i e_j` in the canonical basis.
pub const CAYLEY_INDEX: [[u8; BLADES]; BLADES] = CAYLEY.1;

/// Homogeneous grades.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Grade {
    Scalar = 0,
    Vector = 1,
    Bivector = 2,
    Trivector = 3,
    Pseudoscalar = 4,
}

impl Grade {
    pub const ALL: [Grade; 5] = [
        Grade::Scalar,
        Grade::Vector,
        Grade::Bivector,
        Grade::Trivector,
        Grade::Pseudoscalar,
    ];

    pub fn from_index(k: usize) -> Result<Self> {
        Grade::ALL.get(k).copied().ok_or(Error::GradeOutOfRange(k))
    }

    fn blades(self) -> std::ops::Range<usize> {
        match self {
            Grade::Scalar => 0..1,
            Grade::Vector => 1..5,
            Grade::Bivector => 5..11,
            Grade::Trivector => 11..15,
            Grade::Pseudoscalar => 15..16,
        }
    }
}

/// A general element of the spacetime algebra.
#[derive(Clone, Copy, PartialEq, Default)]
pub struct Multivector {
    pub coeffs: [f64; BLADES],
}

impl Multivector {
    pub const ZERO: Multivector = Multivector { coeffs: [0.0; BLADES] };
    pub const ONE: Multivector = Multivector::basis(0);
    pub const I: Multivector = Multivector::basis(15);

    pub const fn new(coeffs: [f64; BLADES]) -> Self {
        Multivector { coeffs }
    }

    pub const fn basis(index: usize) -> Self {
        let mut coeffs = [0.0; BLADES];
        coeffs[index] = 1.0;
        Multivector { coeffs }
    }

    pub const fn scalar(s: f64) -> Self {
        let mut coeffs = [0.0; BLADES];
        coeffs[0] = s;
        Multivector { coeffs }
    }

    pub const fn pseudoscalar(p: f64) -> Self {
        let mut coeffs = [0.0; BLADES];
        coeffs[15] = p;
        Multivector { coeffs }
    }

    /// `α + βI`.
    pub const fn complex(alpha: f64, beta: f64) -> Self {
        let mut coeffs = [0.0; BLADES];
        coeffs[0] = alpha;
        coeffs[15] = beta;
        Multivector { coeffs }
    }

    /// The generator γ_μ.
    pub const fn gamma(mu: usize) -> Self {
        Multivector::basis(1 + mu)
    }

    /// The reciprocal generator γ^μ (γ^0 = γ0, γ^k = −γk).
    pub fn reciprocal_gamma(mu: usize) -> Self {
        let g = Multivector::gamma(mu);
        if mu == 0 {
            g
        } else {
            -g
        }
    }

    /// `Σ_μ v[μ] γ_μ`.
    pub const fn vector(v: [f64; 4]) -> Self {
        let mut coeffs = [0.0; BLADES];
        coeffs[1] = v[0];
        coeffs[2] = v[1];
        coeffs[3] = v[2];
        coeffs[4] = v[3];
        Multivector { coeffs }
    }

    /// The relative vector σ_k = γ_k γ_0 of the standard frame, k ∈ {1,2,3}.
    pub fn sigma(k: usize) -> Self {
        Multivector::gamma(k) * Multivector::gamma(0)
    }

    /// `cos θ + I sin θ`.
    pub fn phase(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Multivector::complex(c, s)
    }

    pub fn scalar_part(&self) -> f64 {
        self.coeffs[0]
    }

    pub fn pseudoscalar_part(&self) -> f64 {
        self.coeffs[15]
    }

    /// Vector components `[a^0, a^1, a^2, a^3]` along γ_μ.
    pub fn vector_components(&self) -> [f64; 4] {
        [self.coeffs[1], self.coeffs[2], self.coeffs[3], self.coeffs[4]]
    }

    /// Grade projection ⟨a⟩_k with a checked grade index.
    pub fn grade(&self, k: usize) -> Result<Self> {
        Ok(self.part(Grade::from_index(k)?))
    }

    /// Grade projection ⟨a⟩_g.
    pub fn part(&self, g: Grade) -> Self {
        let mut out = Multivector::ZERO;
        for i in g.blades() {
            out.coeffs[i] = self.coeffs[i];
        }
        out
    }

    pub fn even(&self) -> Self {
        self.part(Grade::Scalar) + self.part(Grade::Bivector) + self.part(Grade::Pseudoscalar)
    }

    pub fn odd(&self) -> Self {
        self.part(Grade::Vector) + self.part(Grade::Trivector)
    }

    /// Reversion: flips the sign of grades 2 and 3.
    pub fn reverse(&self) -> Self {
        let mut out = *self;
        for i in 5..15 {
            out.coeffs[i] = -out.coeffs[i];
        }
        out
    }

    /// Grade involution: flips the sign of odd grades.
    pub fn involute(&self) -> Self {
        let mut out = *self;
        for i in (1..5).chain(11..15) {
            out.coeffs[i] = -out.coeffs[i];
        }
        out
    }

    /// Right dual `aI`.
    pub fn dual(&self) -> Self {
        *self * Multivector::I
    }

    /// Hestenes inner product Σ ⟨A_r B_s⟩_{|r−s|}, zero when either grade is 0.
    pub fn dot(&self, other: &Self) -> Self {
        self.graded_product(other, |r, s| (r > 0 && s > 0).then(|| r.abs_diff(s)))
    }

    /// Outer product Σ ⟨A_r B_s⟩_{r+s}.
    pub fn wedge(&self, other: &Self) -> Self {
        self.graded_product(other, |r, s| (r + s <= 4).then_some(r + s))
    }

    /// `(ab − ba)/2`.
    pub fn commutator(&self, other: &Self) -> Self {
        (*self * *other - *other * *self) * 0.5
    }

    fn graded_product(&self, other: &Self, target: impl Fn(usize, usize) -> Option<usize>) -> Self {
        let mut out = Multivector::ZERO;
        for i in 0..BLADES {
            let a = self.coeffs[i];
            if a == 0.0 {
                continue;
            }
            for j in 0..BLADES {
                let k = CAYLEY_INDEX[i][j] as usize;
                if target(GRADE_OF[i], GRADE_OF[j]) == Some(GRADE_OF[k]) {
                    out.coeffs[k] += f64::from(CAYLEY_SIGN[i][j]) * a * other.coeffs[j];
                }
            }
        }
        out
    }

    /// Left multiplication by γ^μ split into the grade-raising and grade-lowering parts.
    pub fn reciprocal_gamma_split(&self, mu: usize) -> (Self, Self) {
        let row = 1 + mu;
        let metric_sign = if mu == 0 { 1.0 } else { -1.0 };
        let mut raise = Multivector::ZERO;
        let mut lower = Multivector::ZERO;
        for j in 0..BLADES {
            let c = self.coeffs[j];
            if c == 0.0 {
                continue;
            }
            let k = CAYLEY_INDEX[row][j] as usize;
            let v = metric_sign * f64::from(CAYLEY_SIGN[row][j]) * c;
            if GRADE_OF[k] > GRADE_OF[j] {
                raise.coeffs[k] += v;
            } else {
                lower.coeffs[k] += v;
            }
        }
        (raise, lower)
    }

    /// Left multiplication by γ^μ.
    pub fn left_reciprocal_gamma(&self, mu: usize) -> Self {
        let row = 1 + mu;
        let metric_sign = if mu == 0 { 1.0 } else { -1.0 };
        let mut out = Multivector::ZERO;
        for j in 0..BLADES {
            let k = CAYLEY_INDEX[row][j] as usize;
            out.coeffs[k] += metric_sign * f64::from(CAYLEY_SIGN[row][j]) * self.coeffs[j];
        }
        out
    }

    /// Sum of squared coefficients.
    pub fn norm_sq(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum()
    }

    /// Euclidean norm of the coefficient vector.
    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// Largest absolute coefficient.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_finite())
    }

    /// Bitmask of grades carrying a coefficient above `tol`.
    pub fn grades_present(&self, tol: f64) -> u8 {
        let mut mask = 0;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.abs() > tol {
                mask |= 1 << GRADE_OF[i];
            }
        }
        mask
    }

    /// True when all content outside `allowed` (a grade bitmask) is below `rel_tol·‖a‖`.
    pub fn has_only_grades(&self, allowed: u8, rel_tol: f64) -> bool {
        let tol = rel_tol * self.norm();
        self.coeffs
            .iter()
            .enumerate()
            .all(|(i, c)| allowed & (1 << GRADE_OF[i]) != 0 || c.abs() <= tol)
    }

    pub(crate) fn require_grades(&self, allowed: u8, context: &'static str, expected: &'static str) -> Result<()> {
        if self.has_only_grades(allowed, STRUCTURAL_TOL) {
            Ok(())
        } else {
            Err(Error::WrongGrade { context, expected })
        }
    }

    /// Parse a sparse `{"blade-name": coefficient}` map.
    pub fn from_blade_map(map: &BTreeMap<String, f64>) -> Result<Self> {
        let mut out = Multivector::ZERO;
        for (name, value) in map {
            let i = blade_index(name).ok_or_else(|| Error::Parse(format!("unknown blade name {name:?}")))?;
            out.coeffs[i] = *value;
        }
        Ok(out)
    }

    /// Sparse map of nonzero coefficients.
    pub fn to_blade_map(&self) -> BTreeMap<String, f64> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != 0.0)
            .map(|(i, c)| (BLADE_NAMES[i].to_string(), *c))
            .collect()
    }

    /// Sixteen whitespace-separated reals in canonical order, 17 significant digits.
    pub fn to_text(&self) -> String {
        self.coeffs
            .iter()
            .map(|c| format!("{c:.16e}"))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Absolute tolerance for structural predicates on unit-normalized inputs.
pub const STRUCTURAL_TOL: f64 = 1e-12;

/// Grade bitmasks for [`Multivector::has_only_grades`].
pub mod grades {
    pub const SCALAR: u8 = 1 << 0;
    pub const VECTOR: u8 = 1 << 1;
    pub const BIVECTOR: u8 = 1 << 2;
    pub const TRIVECTOR: u8 = 1 << 3;
    pub const PSEUDOSCALAR: u8 = 1 << 4;
    pub const EVEN: u8 = SCALAR | BIVECTOR | PSEUDOSCALAR;
    pub const ODD: u8 = VECTOR | TRIVECTOR;
}

/// Index of a blade by name.
pub fn blade_index(name: &str) -> Option<usize> {
    BLADE_NAMES.iter().position(|n| *n == name)
}

impl fmt::Debug for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Multivector[{self}]")
    }
}

impl fmt::Display for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != 0.0)
            .map(|(i, c)| format!("{c}*{}", BLADE_NAMES[i]))
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl FromStr for Multivector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let values: Vec<f64> = s
            .split_whitespace()
            .map(|t| t.parse::<f64>().map_err(|e| Error::Parse(format!("{t:?}: {e}"))))
            .collect::<Result<_>>()?;
        let coeffs: [f64; BLADES] = values
            .try_into()
            .map_err(|v: Vec<f64>| Error::Parse(format!("expected 16 coefficients, found {}", v.len())))?;
        Ok(Multivector { coeffs })
    }
}

impl Serialize for Multivector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.coeffs.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Multivector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Dense([f64; BLADES]),
            Sparse(BTreeMap<String, f64>),
        }
        match Repr::deserialize(deserializer)? {
            Repr::Dense(coeffs) => Ok(Multivector { coeffs }),
            Repr::Sparse(map) => Multivector::from_blade_map(&map).map_err(serde::de::Error::custom),
        }
    }
}

impl Index<usize> for Multivector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.coeffs[i]
    }
}

impl IndexMut<usize> for Multivector {
    fn index_mut(&mut self, i: usize) -> &mut f64 {
        &mut self.coeffs[i]
    }
}

impl Add for Multivector {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        self += rhs;
        self
    }
}

impl AddAssign for Multivector {
    fn add_assign(&mut self, rhs: Self) {
        for (a, b) in self.coeffs.iter_mut().zip(rhs.coeffs) {
            *a += b;
        }
    }
}

impl Sub for Multivector {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        self -= rhs;
        self
    }
}

impl SubAssign for Multivector {
    fn sub_assign(&mut self, rhs: Self) {
        for (a, b) in self.coeffs.iter_mut().zip(rhs.coeffs) {
            *a -= b;
        }
    }
}

impl Neg for Multivector {
    type Output = Self;
    fn neg(mut self) -> Self {
        for a in &mut self.coeffs {
            *a = -*a;
        }
        self
    }
}

impl Mul for Multivector {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut out = [0.0; BLADES];
        for i in 0..BLADES {
            let a = self.coeffs[i];
            if a == 0.0 {
                continue;
            }
            let signs = &CAYLEY_SIGN[i];
            let index = &CAYLEY_INDEX[i];
            for j in 0..BLADES {
                out[index[j] as usize] += f64::from(signs[j]) * a * rhs.coeffs[j];
            }
        }
        Multivector { coeffs: out }
    }
}

impl Mul<f64> for Multivector {
    type Output = Self;
    fn mul(mut self, rhs: f64) -> Self {
        self *= rhs;
        self
    }
}

impl Mul<Multivector> for f64 {
    type Output = Multivector;
    fn mul(self, rhs: Multivector) -> Multivector {
        rhs * self
    }
}

impl MulAssign<f64> for Multivector {
    fn mul_assign(&mut self, rhs: f64) {
        for a in &mut self.coeffs {
            *a *= rhs;
        }
    }
}

impl Div<f64> for Multivector {
    type Output = Self;
    fn div(self, rhs: f64) -> Self {
        self * (1.0 / rhs)
    }
}

impl std::iter::Sum for Multivector {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Multivector::ZERO, |a, b| a + b)
    }
}

/// Geometric product `ab`.
pub fn geometric_product(a: &Multivector, b: &Multivector) -> Multivector {
    *a * *b
}

/// Grade projection ⟨a⟩_k; `k` outside 0..=4 is rejected.
pub fn grade_project(a: &Multivector, k: usize) -> Result<Multivector> {
    a.grade(k)
}

pub fn reverse(a: &Multivector) -> Multivector {
    a.reverse()
}

pub fn dual(a: &Multivector) -> Multivector {
    a.dual()
}

/// A relative (frame-dependent) Euclidean 3-vector given by components on σ1, σ2, σ3.
#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Vec3(pub [f64; 3]);

impl Vec3 {
    pub const ZERO: Vec3 = Vec3([0.0; 3]);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3([x, y, z])
    }

    pub const fn unit(k: usize) -> Self {
        let mut v = [0.0; 3];
        v[k] = 1.0;
        Vec3(v)
    }

    pub fn dot(&self, o: &Vec3) -> f64 {
        self.0[0] * o.0[0] + self.0[1] * o.0[1] + self.0[2] * o.0[2]
    }

    pub fn cross(&self, o: &Vec3) -> Vec3 {
        let [a1, a2, a3] = self.0;
        let [b1, b2, b3] = o.0;
        Vec3([a2 * b3 - a3 * b2, a3 * b1 - a1 * b3, a1 * b2 - a2 * b1])
    }

    pub fn norm_sq(&self) -> f64 {
        self.dot(self)
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, c| m.max(c.abs()))
    }
}

impl Index<usize> for Vec3 {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl From<[f64; 3]> for Vec3 {
    fn from(v: [f64; 3]) -> Self {
        Vec3(v)
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2]])
    }
}

impl AddAssign for Vec3 {
    fn add_assign(&mut self, o: Vec3) {
        *self = *self + o;
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3([self.0[0] - o.0[0], self.0[1] - o.0[1], self.0[2] - o.0[2]])
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3([-self.0[0], -self.0[1], -self.0[2]])
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, s: f64) -> Vec3 {
        Vec3([self.0[0] * s, self.0[1] * s, self.0[2] * s])
    }
}

impl Mul<Vec3> for f64 {
    type Output = Vec3;
    fn mul(self, v: Vec3) -> Vec3 {
        v * self
    }
}

impl Div<f64> for Vec3 {
    type Output = Vec3;
    fn div(self, s: f64) -> Vec3 {
        self * (1.0 / s)
    }
}

/// An observer frame: an orthonormal set γ'_μ with γ'_0 the observer's unit timelike velocity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Frame {
    gammas: [Multivector; 4],
}

impl Default for Frame {
    fn default() -> Self {
        Frame::standard()
    }
}

impl Frame {
    pub fn standard() -> Self {
        Frame {
            gammas: [0, 1, 2, 3].map(Multivector::gamma),
        }
    }

    /// The frame obtained by rotating the standard basis with `R γ_μ R~`.
    pub fn from_rotor(r: &Rotor) -> Self {
        Frame {
            gammas: [0, 1, 2, 3].map(|mu| r.apply(&Multivector::gamma(mu))),
        }
    }

    pub fn gamma0(&self) -> Multivector {
        self.gammas[0]
    }

    pub fn gamma(&self, mu: usize) -> Multivector {
        self.gammas[mu]
    }

    /// σ_k = γ_k γ_0 for k ∈ {1,2,3}.
    pub fn sigma(&self, k: usize) -> Multivector {
        self.gammas[k] * self.gammas[0]
    }

    /// `Σ v_k σ_k`.
    pub fn relative(&self, v: Vec3) -> Multivector {
        (1..4).map(|k| self.sigma(k) * v.0[k - 1]).sum()
    }

    /// `Σ v_k Iσ_k`.
    pub fn axial(&self, v: Vec3) -> Multivector {
        self.relative(v) * Multivector::I
    }

    /// Splits a grade-1 `a` as `(s, v)` with `a = (s + v)γ0`.
    pub fn split_vector(&self, a: &Multivector) -> Result<(f64, Vec3)> {
        a.require_grades(grades::VECTOR, "frame_split", "a grade-1 multivector")?;
        let ag = *a * self.gammas[0];
        let s = ag.scalar_part();
        let v = Vec3([1, 2, 3].map(|k| (ag * self.sigma(k)).scalar_part()));
        Ok((s, v))
    }

    /// Reassembles `(s + v)γ0`.
    pub fn join_vector(&self, s: f64, v: Vec3) -> Multivector {
        (Multivector::scalar(s) + self.relative(v)) * self.gammas[0]
    }

    /// The complementary factorization `γ0(s − v)`, equal to `join_vector(s, v)`.
    pub fn join_vector_left(&self, s: f64, v: Vec3) -> Multivector {
        self.gammas[0] * (Multivector::scalar(s) - self.relative(v))
    }

    /// Components of a multivector lying in span{σ1, σ2, σ3}.
    pub fn split_relative(&self, u: &Multivector) -> Result<Vec3> {
        let v = Vec3([1, 2, 3].map(|k| (*u * self.sigma(k)).scalar_part()));
        let residual = (*u - self.relative(v)).norm();
        if residual > STRUCTURAL_TOL * u.norm() {
            return Err(Error::WrongGrade {
                context: "relative vector",
                expected: "an element of span{σ1, σ2, σ3}",
            });
        }
        Ok(v)
    }

    /// Splits a bivector as `F = A + B I` with `A = Σ A_k σ_k`, `B = Σ B_k σ_k`.
    pub fn split_bivector(&self, f: &Multivector) -> Result<(Vec3, Vec3)> {
        f.require_grades(grades::BIVECTOR, "bivector split", "a grade-2 multivector")?;
        Ok(self.split_bivector_unchecked(f))
    }

    fn split_bivector_unchecked(&self, f: &Multivector) -> (Vec3, Vec3) {
        let a = Vec3([1, 2, 3].map(|k| (*f * self.sigma(k)).scalar_part()));
        let b = Vec3([1, 2, 3].map(|k| -(*f * self.sigma(k) * Multivector::I).scalar_part()));
        (a, b)
    }

    pub fn join_bivector(&self, a: Vec3, b: Vec3) -> Multivector {
        self.relative(a) + self.axial(b)
    }

    /// Splits an even multivector as `α + A + B I + βI`; returns `(α, A, B, β)`.
    pub fn split_even(&self, psi: &Multivector) -> Result<(f64, Vec3, Vec3, f64)> {
        psi.require_grades(grades::EVEN, "even split", "an even multivector")?;
        let (a, b) = self.split_bivector_unchecked(&psi.part(Grade::Bivector));
        Ok((psi.scalar_part(), a, b, psi.pseudoscalar_part()))
    }
}

/// Frame split of a grade-1 multivector: `(a·γ0, a∧γ0)` as scalar and relative vector.
pub fn frame_split(a: &Multivector, f: &Frame) -> Result<(f64, Vec3)> {
    f.split_vector(a)
}

/// Gibbs cross product `−I(u∧v)` of two relative vectors of the standard frame.
pub fn cross3(u: &Multivector, v: &Multivector) -> Result<Multivector> {
    let frame = Frame::standard();
    frame.split_relative(u)?;
    frame.split_relative(v)?;
    Ok(-(Multivector::I * u.commutator(v)))
}

/// A unit even multivector acting by `R a R~`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rotor {
    value: Multivector,
}

impl Rotor {
    pub const IDENTITY: Rotor = Rotor {
        value: Multivector::ONE,
    };

    /// Validates `R R~ = 1` within `1e-12·max(1, ‖R‖²)` and even grade.
    pub fn new(value: Multivector) -> Result<Self> {
        value.require_grades(grades::EVEN, "rotor", "an even multivector")?;
        let rr = value * value.reverse();
        let scale = value.norm_sq().max(1.0);
        let defect = (rr - Multivector::ONE).max_abs();
        if defect > 1e-12 * scale {
            return Err(Error::invalid("rotor", format!("R R~ deviates from 1 by {defect:.3e}")));
        }
        Ok(Rotor { value })
    }

    /// `exp(θB/2)` for a unit plane `B` with `B² = ±1`.
    pub fn exp(plane: &Multivector, theta: f64) -> Result<Self> {
        plane.require_grades(grades::BIVECTOR, "rotor_exp", "a homogeneous grade-2 plane")?;
        let sq = *plane * *plane;
        let s = sq.scalar_part();
        let off = (sq - Multivector::scalar(s)).max_abs();
        if off > STRUCTURAL_TOL || ((s.abs() - 1.0).abs() > STRUCTURAL_TOL) {
            return Err(Error::invalid(
                "rotor_exp",
                format!("plane must square to ±1, found {sq}"),
            ));
        }
        let half = 0.5 * theta;
        let value = if s > 0.0 {
            Multivector::scalar(half.cosh()) + *plane * half.sinh()
        } else {
            Multivector::scalar(half.cos()) + *plane * half.sin()
        };
        Ok(Rotor { value })
    }

    /// The rotor `exp(−α v̂/2)` taking rest-frame quantities to the frame of an observer
    /// moving with relative velocity `v`, with `tanh α = |v|/c`.
    pub fn observer_boost(velocity: Vec3, c: f64) -> Result<Self> {
        let speed = velocity.norm();
        if speed >= c {
            return Err(Error::Superluminal { speed, c });
        }
        if speed == 0.0 {
            return Ok(Rotor::IDENTITY);
        }
        let plane = Frame::standard().relative(velocity / speed);
        Rotor::exp(&plane, -(speed / c).atanh())
    }

    pub fn value(&self) -> Multivector {
        self.value
    }

    pub fn reverse(&self) -> Rotor {
        Rotor {
            value: self.value.reverse(),
        }
    }

    /// `R a R~`.
    pub fn apply(&self, a: &Multivector) -> Multivector {
        self.value * *a * self.value.reverse()
    }

    /// The rotor applying `self` first and then `next`.
    pub fn then(&self, next: &Rotor) -> Rotor {
        Rotor {
            value: next.value * self.value,
        }
    }
}

/// `exp(θB/2)`; see [`Rotor::exp`].
pub fn rotor_exp(plane: &Multivector, theta: f64) -> Result<Rotor> {
    Rotor::exp(plane, theta)
}

/// `R a R~`.
pub fn sandwich(r: &Rotor, a: &Multivector) -> Multivector {
    r.apply(a)
}

/// Polar form `ab = s·C²|a||b| exp(θC)` of the product of two grade-1 vectors.
///
/// `s` is an extra sign, only ever −1 for hyperbolic planes with `a·b < 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VectorProductPolar {
    pub plane: Multivector,
    pub plane_square: f64,
    pub magnitude: f64,
    pub angle: f64,
    pub sign: f64,
}

impl VectorProductPolar {
    pub fn reconstruct(&self) -> Multivector {
        let rotor = if self.plane_square > 0.0 {
            Multivector::scalar(self.angle.cosh()) + self.plane * self.angle.sinh()
        } else {
            Multivector::scalar(self.angle.cos()) + self.plane * self.angle.sin()
        };
        rotor * (self.sign * self.plane_square * self.magnitude)
    }
}

/// Polar decomposition of `ab` for non-null, non-parallel grade-1 `a`, `b` of like signature.
pub fn vector_product_polar(a: &Multivector, b: &Multivector) -> Result<VectorProductPolar> {
    a.require_grades(grades::VECTOR, "vector_product_polar", "grade-1 vectors")?;
    b.require_grades(grades::VECTOR, "vector_product_polar", "grade-1 vectors")?;
    let scale = a.norm_sq() * b.norm_sq();
    let a2b2 = (*a * *a).scalar_part() * (*b * *b).scalar_part();
    let w = a.wedge(b);
    let w2 = (w * w).scalar_part();
    if a2b2.abs() <= STRUCTURAL_TOL * scale || w2.abs() <= STRUCTURAL_TOL * scale {
        return Err(Error::invalid(
            "vector_product_polar",
            "null or parallel vectors have no polar form",
        ));
    }
    if a2b2 < 0.0 {
        return Err(Error::invalid(
            "vector_product_polar",
            "vectors of opposite signature have no polar form",
        ));
    }
    let d = a.dot(b).scalar_part();
    let wn = w2.abs().sqrt();
    let plane = w / wn;
    let magnitude = a2b2.sqrt();
    if w2 < 0.0 {
        Ok(VectorProductPolar {
            plane,
            plane_square: -1.0,
            magnitude,
            angle: (-wn).atan2(-d),
            sign: 1.0,
        })
    } else {
        Ok(VectorProductPolar {
            plane,
            plane_square: 1.0,
            magnitude,
            angle: (d.signum() * wn / d.abs()).atanh(),
            sign: d.signum(),
        })
    }
}
