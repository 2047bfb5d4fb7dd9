use super::form::{interior_product, same_grid, wedge, DiscreteForm, VectorField, N};
use super::grid::Axis;
use super::stencil::{integrate, partial};
use crate::error::{Error, Result};

/// Exterior derivative by fourth-order finite differences.
pub fn exterior_derivative(a: &DiscreteForm) -> Result<DiscreteForm> {
    let g = *a.grid();
    match a.degree() {
        0 => {
            let f = a.comp(0);
            DiscreteForm::one_form(g, partial(f, Axis::X, &g), partial(f, Axis::Y, &g))
        }
        1 => {
            let dx_b = partial(a.comp(1), Axis::X, &g);
            let dy_a = partial(a.comp(0), Axis::Y, &g);
            DiscreteForm::top_form(g, dx_b - dy_a)
        }
        degree => Err(Error::Degree {
            op: "exterior_derivative",
            degree,
        }),
    }
}

/// Lie derivative `L_v a`, assembled from `d` and `ι_v` by Cartan's formula.
pub fn lie_derivative(v: &VectorField, a: &DiscreteForm) -> Result<DiscreteForm> {
    same_grid("lie_derivative", v.grid(), a.grid())?;
    match a.degree() {
        0 => interior_product(v, &exterior_derivative(a)?),
        1 => exterior_derivative(&interior_product(v, a)?)?
            .add(&interior_product(v, &exterior_derivative(a)?)?),
        _ => exterior_derivative(&interior_product(v, a)?),
    }
}

/// The 0-form `div(v)` with `L_v μ_vol = div(v) μ_vol`.
///
/// With a constant metric the volume density is constant and the divergence
/// reduces to the coordinate expression.
pub fn divergence(v: &VectorField) -> DiscreteForm {
    let g = *v.grid();
    let d = partial(v.x(), Axis::X, &g) + partial(v.y(), Axis::Y, &g);
    DiscreteForm::function(g, d).expect("shape preserved by partial")
}

/// Integral of a top form over the domain.
pub fn integrate_top(a: &DiscreteForm) -> Result<f64> {
    if a.degree() != N {
        return Err(Error::Degree {
            op: "integrate_top",
            degree: a.degree(),
        });
    }
    Ok(integrate(a.comp(0), a.grid()))
}

/// Duality pairing `⟨a | b⟩ = ∫_M a∧b`.
pub fn pairing(a: &DiscreteForm, b: &DiscreteForm) -> Result<f64> {
    if a.degree() + b.degree() != N {
        return Err(Error::DegreeMismatch {
            op: "pairing",
            left: a.degree(),
            right: b.degree(),
        });
    }
    integrate_top(&wedge(a, b)?)
}

/// Quadrature of `|a∧b|`, the natural magnitude against which a pairing
/// defect is judged.
pub fn pairing_scale(a: &DiscreteForm, b: &DiscreteForm) -> Result<f64> {
    if a.degree() + b.degree() != N {
        return Err(Error::DegreeMismatch {
            op: "pairing_scale",
            left: a.degree(),
            right: b.degree(),
        });
    }
    integrate_top(&wedge(a, b)?.map(f64::abs))
}
