//! Periodic 4D lattices of multivector values and their difference operators.
//!
//! Axis 0 is `ct`, axes 1..=3 are `x, y, z`. Sites are stored site-major with
//! `t` slowest and `z` fastest. All first derivatives are central differences,
//! which commute exactly on a periodic lattice; that is what makes the discrete
//! Bianchi identities hold to round-off.

use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{Grade, Multivector, BLADES, BLADE_NAMES, GRADE_OF};
use crate::error::{Error, Result};
use crate::field::{Event, SpacetimeField};

/// Shape and spacing of a periodic 4D lattice.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeSpec {
    pub dims: [usize; 4],
    pub spacing: [f64; 4],
}

impl LatticeSpec {
    /// Central stencils need at least four sites per axis.
    pub const MIN_DIM: usize = 4;

    pub fn new(dims: [usize; 4], spacing: [f64; 4]) -> Result<Self> {
        if let Some(d) = dims.iter().find(|d| **d < Self::MIN_DIM) {
            return Err(Error::invalid(
                "lattice spec",
                format!("every dimension must be at least {}, found {d}", Self::MIN_DIM),
            ));
        }
        if spacing.iter().any(|h| !(h.is_finite() && *h > 0.0)) {
            return Err(Error::invalid("lattice spec", "spacings must be finite and positive"));
        }
        Ok(LatticeSpec { dims, spacing })
    }

    pub fn sites(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn strides(&self) -> [usize; 4] {
        let [_, nx, ny, nz] = self.dims;
        [nx * ny * nz, ny * nz, nz, 1]
    }

    pub fn coords(&self, index: usize) -> [usize; 4] {
        let s = self.strides();
        let mut rest = index;
        let mut out = [0; 4];
        for axis in 0..4 {
            out[axis] = rest / s[axis];
            rest %= s[axis];
        }
        out
    }

    pub fn index(&self, coords: [usize; 4]) -> usize {
        let s = self.strides();
        (0..4).map(|a| coords[a] * s[a]).sum()
    }

    pub fn position(&self, index: usize) -> Event {
        let c = self.coords(index);
        [0, 1, 2, 3].map(|a| c[a] as f64 * self.spacing[a])
    }

    /// Index of the periodic neighbour `offset` steps along `axis`.
    pub fn shift(&self, index: usize, axis: usize, offset: isize) -> usize {
        let stride = self.strides()[axis];
        let n = self.dims[axis] as isize;
        let c = ((index / stride) % self.dims[axis]) as isize;
        let moved = (c + offset).rem_euclid(n);
        (index as isize + (moved - c) * stride as isize) as usize
    }

    /// Nearest lattice site to an event, wrapping periodically.
    pub fn nearest_site(&self, r: &Event) -> usize {
        let coords = [0, 1, 2, 3].map(|a| {
            let n = self.dims[a] as i64;
            ((r[a] / self.spacing[a]).round() as i64).rem_euclid(n) as usize
        });
        self.index(coords)
    }
}

/// Dense per-site multivector storage on a [`LatticeSpec`].
#[derive(Clone, Debug, PartialEq)]
pub struct MultivectorField {
    spec: LatticeSpec,
    data: Vec<Multivector>,
}

impl MultivectorField {
    pub fn new(spec: LatticeSpec, data: Vec<Multivector>) -> Result<Self> {
        if data.len() != spec.sites() {
            return Err(Error::SpecMismatch(format!(
                "{} values for {} sites",
                data.len(),
                spec.sites()
            )));
        }
        Ok(MultivectorField { spec, data })
    }

    pub fn zeros(spec: LatticeSpec) -> Self {
        MultivectorField {
            spec,
            data: vec![Multivector::ZERO; spec.sites()],
        }
    }

    /// Samples `f` at every site position.
    pub fn from_fn<F>(spec: LatticeSpec, f: F) -> Self
    where
        F: Fn(&Event) -> Multivector + Sync,
    {
        let data = (0..spec.sites())
            .into_par_iter()
            .map(|i| f(&spec.position(i)))
            .collect();
        MultivectorField { spec, data }
    }

    /// Fills each site from its integer coordinates.
    pub fn from_sites<F>(spec: LatticeSpec, f: F) -> Self
    where
        F: Fn([usize; 4]) -> Multivector + Sync,
    {
        let data = (0..spec.sites()).into_par_iter().map(|i| f(spec.coords(i))).collect();
        MultivectorField { spec, data }
    }

    pub fn spec(&self) -> &LatticeSpec {
        &self.spec
    }

    pub fn data(&self) -> &[Multivector] {
        &self.data
    }

    pub fn into_data(self) -> Vec<Multivector> {
        self.data
    }

    pub fn at(&self, index: usize) -> &Multivector {
        &self.data[index]
    }

    pub fn map<F>(&self, f: F) -> Self
    where
        F: Fn(&Multivector) -> Multivector + Sync + Send,
    {
        MultivectorField {
            spec: self.spec,
            data: self.data.par_iter().map(f).collect(),
        }
    }

    /// Site-wise combination of two fields on the same lattice.
    pub fn zip_map<F>(&self, other: &Self, f: F) -> Result<Self>
    where
        F: Fn(&Multivector, &Multivector) -> Multivector + Sync,
    {
        self.check_same(other)?;
        Ok(MultivectorField {
            spec: self.spec,
            data: self
                .data
                .par_iter()
                .zip(other.data.par_iter())
                .map(|(a, b)| f(a, b))
                .collect(),
        })
    }

    pub fn check_same(&self, other: &Self) -> Result<()> {
        if self.spec != other.spec {
            return Err(Error::SpecMismatch(format!("{:?} vs {:?}", self.spec, other.spec)));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_map(other, |a, b| *a + *b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_map(other, |a, b| *a - *b)
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map(|a| *a * s)
    }

    pub fn part(&self, g: Grade) -> Self {
        self.map(|a| a.part(g))
    }

    /// Largest absolute coefficient over all sites.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, a| m.max(a.max_abs()))
    }

    /// Largest absolute coefficient of `self − other`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.check_same(other)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .fold(0.0, |m, (a, b)| m.max((*a - *b).max_abs())))
    }

    /// Central difference `(f(x+e) − f(x−e))/(2h)` at one site.
    pub fn partial_at(&self, index: usize, axis: usize) -> Multivector {
        let plus = self.spec.shift(index, axis, 1);
        let minus = self.spec.shift(index, axis, -1);
        (self.data[plus] - self.data[minus]) * (0.5 / self.spec.spacing[axis])
    }

    /// Central difference along `axis` at every site.
    pub fn partial(&self, axis: usize) -> Self {
        let data = (0..self.spec.sites())
            .into_par_iter()
            .map(|i| self.partial_at(i, axis))
            .collect();
        MultivectorField { spec: self.spec, data }
    }

    /// `Σ_μ γ^μ ∂_μ f` at one site.
    pub fn vector_derivative_at(&self, index: usize) -> Multivector {
        (0..4)
            .map(|mu| self.partial_at(index, mu).left_reciprocal_gamma(mu))
            .sum()
    }

    fn per_site<F>(&self, f: F) -> Self
    where
        F: Fn(usize) -> Multivector + Sync + Send,
    {
        MultivectorField {
            spec: self.spec,
            data: (0..self.spec.sites()).into_par_iter().map(f).collect(),
        }
    }

    /// Writes `path` (CSV) and the sidecar `path.json` carrying the lattice spec.
    pub fn write_snapshot(&self, path: &Path) -> Result<()> {
        let mut writer = csv::Writer::from_writer(BufWriter::new(File::create(path)?));
        let mut header = vec!["t", "x", "y", "z"];
        header.extend(BLADE_NAMES);
        writer.write_record(&header).map_err(csv_error)?;
        for (i, value) in self.data.iter().enumerate() {
            let mut row: Vec<String> = self.spec.coords(i).iter().map(|c| c.to_string()).collect();
            row.extend(value.coeffs.iter().map(|c| format!("{c:.16e}")));
            writer.write_record(&row).map_err(csv_error)?;
        }
        writer.flush()?;
        let sidecar = File::create(sidecar_path(path))?;
        serde_json::to_writer_pretty(BufWriter::new(sidecar), &self.spec)?;
        Ok(())
    }

    /// Reads a snapshot written by [`MultivectorField::write_snapshot`].
    pub fn read_snapshot(path: &Path) -> Result<Self> {
        let spec: LatticeSpec = serde_json::from_reader(BufReader::new(File::open(sidecar_path(path))?))?;
        let spec = LatticeSpec::new(spec.dims, spec.spacing)?;
        let mut reader = csv::Reader::from_reader(BufReader::new(File::open(path)?));
        let mut data = vec![Multivector::ZERO; spec.sites()];
        let mut seen = 0usize;
        for record in reader.records() {
            let record = record.map_err(csv_error)?;
            if record.len() != 4 + BLADES {
                return Err(Error::Parse(format!(
                    "expected {} columns, found {}",
                    4 + BLADES,
                    record.len()
                )));
            }
            let mut coords = [0usize; 4];
            for (a, c) in coords.iter_mut().enumerate() {
                *c = parse_field(&record[a])?;
                if *c >= spec.dims[a] {
                    return Err(Error::Parse(format!("index {c} outside axis {a}")));
                }
            }
            let mut value = Multivector::ZERO;
            for b in 0..BLADES {
                value.coeffs[b] = parse_field(&record[4 + b])?;
            }
            data[spec.index(coords)] = value;
            seen += 1;
        }
        if seen != spec.sites() {
            return Err(Error::SpecMismatch(format!(
                "snapshot has {seen} rows for {} sites",
                spec.sites()
            )));
        }
        Ok(MultivectorField { spec, data })
    }
}

pub(crate) fn parse_field<T: std::str::FromStr>(s: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    s.trim().parse().map_err(|e| Error::Parse(format!("{s:?}: {e}")))
}

fn csv_error(e: csv::Error) -> Error {
    Error::Parse(e.to_string())
}

/// The JSON sidecar path belonging to a CSV snapshot.
pub fn sidecar_path(path: &Path) -> PathBuf {
    let mut name = path.as_os_str().to_owned();
    name.push(".json");
    PathBuf::from(name)
}

impl SpacetimeField for MultivectorField {
    fn value(&self, r: &Event) -> Multivector {
        self.data[self.spec.nearest_site(r)]
    }

    fn partial(&self, r: &Event, axis: usize) -> Multivector {
        self.partial_at(self.spec.nearest_site(r), axis)
    }
}

/// `∇f = Σ_μ γ^μ ∂_μ f` with central differences.
pub fn vector_derivative(f: &MultivectorField) -> MultivectorField {
    f.per_site(|i| f.vector_derivative_at(i))
}

fn split_derivative(f: &MultivectorField, raising: bool) -> MultivectorField {
    f.per_site(|i| {
        (0..4)
            .map(|mu| {
                let (raise, lower) = f.partial_at(i, mu).reciprocal_gamma_split(mu);
                if raising {
                    raise
                } else {
                    lower
                }
            })
            .sum()
    })
}

/// Grade-raising part `∇∧f`.
pub fn curl4(f: &MultivectorField) -> MultivectorField {
    split_derivative(f, true)
}

/// Grade-lowering part `∇·f`.
pub fn div4(f: &MultivectorField) -> MultivectorField {
    split_derivative(f, false)
}

/// Max-norms of `∇∧(∇∧f)` and `∇·(∇·f)`.
pub fn bianchi_residuals(f: &MultivectorField) -> (f64, f64) {
    let curl_curl = curl4(&curl4(f)).max_abs();
    let div_div = div4(&div4(f)).max_abs();
    (curl_curl, div_div)
}

/// `(∂²_ct − Σ_k ∂²_k) f` with the compact three-point stencil on each axis.
pub fn dalembertian(f: &MultivectorField) -> MultivectorField {
    let spec = *f.spec();
    let weights = [0, 1, 2, 3].map(|a| {
        let w = 1.0 / (spec.spacing[a] * spec.spacing[a]);
        if a == 0 {
            w
        } else {
            -w
        }
    });
    f.per_site(|i| {
        let centre = f.data[i];
        (0..4)
            .map(|a| {
                let plus = f.data[spec.shift(i, a, 1)];
                let minus = f.data[spec.shift(i, a, -1)];
                (plus - centre * 2.0 + minus) * weights[a]
            })
            .sum()
    })
}

/// `∇(∇f)`, the wide-stencil d'Alembertian used for cross-checks.
pub fn dalembertian_composed(f: &MultivectorField) -> MultivectorField {
    vector_derivative(&vector_derivative(f))
}

/// Lattice wave number `sin(k h)/h` seen by a central difference.
pub fn discrete_wavenumber(k: f64, h: f64) -> f64 {
    (k * h).sin() / h
}

/// Grade bitmask of a field, counting coefficients above `tol`.
pub fn grades_present(f: &MultivectorField, tol: f64) -> u8 {
    f.data.iter().fold(0, |m, a| {
        m | a
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| c.abs() > tol)
            .fold(0u8, |g, (b, _)| g | (1 << GRADE_OF[b]))
    })
}
