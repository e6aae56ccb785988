//! The field-closure interface shared by analytic evaluators and lattice fields.

use crate::algebra::Multivector;

/// A spacetime event `(ct, x, y, z)` in the standard frame.
pub type Event = [f64; 4];

/// Anything that can report a multivector value and its partial derivatives at an event.
///
/// Partials are taken with respect to the coordinates of [`Event`], so axis 0 is `∂/∂(ct)`.
pub trait SpacetimeField: Sync {
    fn value(&self, r: &Event) -> Multivector;

    fn partial(&self, r: &Event, axis: usize) -> Multivector;

    /// `∇f = Σ_μ γ^μ ∂_μ f`.
    fn vector_derivative(&self, r: &Event) -> Multivector {
        (0..4).map(|mu| self.partial(r, mu).left_reciprocal_gamma(mu)).sum()
    }

    /// `∇(f~)`, the derivative of the reversed field.
    fn reversed_vector_derivative(&self, r: &Event) -> Multivector {
        (0..4)
            .map(|mu| self.partial(r, mu).reverse().left_reciprocal_gamma(mu))
            .sum()
    }
}

/// A field given by closed-form value and partial-derivative closures.
pub struct Analytic<V, D> {
    value: V,
    partial: D,
}

impl<V, D> Analytic<V, D>
where
    V: Fn(&Event) -> Multivector + Sync,
    D: Fn(&Event, usize) -> Multivector + Sync,
{
    pub fn new(value: V, partial: D) -> Self {
        Analytic { value, partial }
    }
}

impl<V, D> SpacetimeField for Analytic<V, D>
where
    V: Fn(&Event) -> Multivector + Sync,
    D: Fn(&Event, usize) -> Multivector + Sync,
{
    fn value(&self, r: &Event) -> Multivector {
        (self.value)(r)
    }

    fn partial(&self, r: &Event, axis: usize) -> Multivector {
        (self.partial)(r, axis)
    }
}

/// Spacetime position vector `r = x^μ γ_μ` of an event.
pub fn position_vector(r: &Event) -> Multivector {
    Multivector::vector(*r)
}

/// Fourth-order central finite difference of `f` along `axis`, used as an independent oracle.
pub fn finite_difference<F: SpacetimeField + ?Sized>(f: &F, r: &Event, axis: usize, h: f64) -> Multivector {
    let at = |s: f64| {
        let mut e = *r;
        e[axis] += s * h;
        f.value(&e)
    };
    (at(-2.0) - at(-1.0) * 8.0 + at(1.0) * 8.0 - at(2.0)) / (12.0 * h)
}
