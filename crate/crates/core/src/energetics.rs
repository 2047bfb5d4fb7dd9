//! Kinetic-energy Hamiltonians, variational derivatives and the two
//! Lie-Poisson structure maps, with the coordinate change between them.

use ndarray::Array2;

use crate::algebra::{ad_star_g, AlgebraElement, DualAlgebraElement};
use crate::error::{Error, Result};
use crate::forms::{
    exterior_derivative, flat, hodge_star, interior_product, pairing, sharp, vol_sharp, wedge,
    DiscreteForm, Grid,
};

/// States with `min(*μ)` below this are rejected.
pub const DENSITY_FLOOR: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Representation {
    /// `(α, μ)` with `α` the momentum 1-form.
    Momentum,
    /// `(ṽ, μ)` with `ṽ` the velocity 1-form.
    Velocity,
}

impl Representation {
    pub fn name(self) -> &'static str {
        match self {
            Representation::Momentum => "momentum",
            Representation::Velocity => "velocity",
        }
    }
}

/// Flow state in either representation: a 1-form and the mass form `μ`.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowState {
    repr: Representation,
    first: DiscreteForm,
    mass: DiscreteForm,
}

/// A pair of efforts `(e_first, e_μ)` or, equivalently, of flows.
#[derive(Debug, Clone, PartialEq)]
pub struct EffortPair {
    pub first: DiscreteForm,
    pub mass: DiscreteForm,
}

impl EffortPair {
    pub fn new(first: DiscreteForm, mass: DiscreteForm) -> Result<Self> {
        if first.degree() != 1 || mass.degree() != 0 {
            return Err(Error::DegreeMismatch {
                op: "effort pair",
                left: first.degree(),
                right: mass.degree(),
            });
        }
        Ok(EffortPair { first, mass })
    }
}

/// Time derivative (or flow) of a state: a 1-form and a 2-form.
#[derive(Debug, Clone, PartialEq)]
pub struct StateRate {
    pub first: DiscreteForm,
    pub mass: DiscreteForm,
}

impl StateRate {
    pub fn new(first: DiscreteForm, mass: DiscreteForm) -> Result<Self> {
        if first.degree() != 1 || mass.degree() != 2 {
            return Err(Error::DegreeMismatch {
                op: "state rate",
                left: first.degree(),
                right: mass.degree(),
            });
        }
        Ok(StateRate { first, mass })
    }

    pub fn max_abs(&self) -> f64 {
        self.first.max_abs().max(self.mass.max_abs())
    }

    pub fn max_diff(&self, other: &Self) -> Result<f64> {
        Ok(self
            .first
            .max_diff(&other.first)?
            .max(self.mass.max_diff(&other.mass)?))
    }
}

/// `⟨(ẋ₁, ẋ₂) | (e₁, e₂)⟩_𝔰 = ∫ ẋ₁∧e₁ + ẋ₂∧e₂`.
pub fn pairing_rate(rate: &StateRate, e: &EffortPair) -> Result<f64> {
    Ok(pairing(&rate.first, &e.first)? + pairing(&rate.mass, &e.mass)?)
}

impl FlowState {
    pub fn new(repr: Representation, first: DiscreteForm, mass: DiscreteForm) -> Result<Self> {
        if first.degree() != 1 || mass.degree() != 2 {
            return Err(Error::DegreeMismatch {
                op: "flow state",
                left: first.degree(),
                right: mass.degree(),
            });
        }
        if first.grid() != mass.grid() {
            return Err(Error::GridMismatch { op: "flow state" });
        }
        let state = FlowState { repr, first, mass };
        state.density_checked("flow state")?;
        Ok(state)
    }

    pub fn momentum(alpha: DiscreteForm, mass: DiscreteForm) -> Result<Self> {
        Self::new(Representation::Momentum, alpha, mass)
    }

    pub fn velocity(v: DiscreteForm, mass: DiscreteForm) -> Result<Self> {
        Self::new(Representation::Velocity, v, mass)
    }

    pub fn representation(&self) -> Representation {
        self.repr
    }

    pub fn first(&self) -> &DiscreteForm {
        &self.first
    }

    pub fn mass(&self) -> &DiscreteForm {
        &self.mass
    }

    pub fn grid(&self) -> &Grid {
        self.first.grid()
    }

    pub fn into_parts(self) -> (DiscreteForm, DiscreteForm) {
        (self.first, self.mass)
    }

    /// Density `ρ = *μ`.
    pub fn density(&self) -> Array2<f64> {
        hodge_star(&self.mass).into_comps().remove(0)
    }

    fn density_checked(&self, op: &'static str) -> Result<Array2<f64>> {
        let rho = self.density();
        let min = rho
            .iter()
            .copied()
            .fold(f64::INFINITY, |m, r| if r.is_nan() || r < m { r } else { m });
        if !(min >= DENSITY_FLOOR && min.is_finite()) {
            return Err(Error::Density { op, min });
        }
        Ok(rho)
    }

    fn expect(&self, op: &'static str, repr: Representation) -> Result<Array2<f64>> {
        if self.repr != repr {
            return Err(Error::Representation {
                op,
                expected: repr.name(),
            });
        }
        self.density_checked(op)
    }

    /// State advanced by `dt · rate`, without revalidating density.
    pub fn advanced(&self, rate: &StateRate, dt: f64) -> Result<Self> {
        Ok(FlowState {
            repr: self.repr,
            first: self.first.axpy(dt, &rate.first)?,
            mass: self.mass.axpy(dt, &rate.mass)?,
        })
    }

    /// Replaces the components without validation; used by time integrators
    /// that check density explicitly.
    pub(crate) fn with_parts(&self, first: DiscreteForm, mass: DiscreteForm) -> Self {
        FlowState {
            repr: self.repr,
            first,
            mass,
        }
    }

    pub fn min_density(&self) -> f64 {
        self.density().iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_diff(&self, other: &Self) -> Result<f64> {
        Ok(self
            .first
            .max_diff(&other.first)?
            .max(self.mass.max_diff(&other.mass)?))
    }
}

/// `H = ∫ (1/(2*μ)) α∧*α`.
pub fn hamiltonian_momentum(state: &FlowState) -> Result<f64> {
    let rho = state.expect("hamiltonian_momentum", Representation::Momentum)?;
    let a = state.first();
    pairing(&a.div_field(&rho), &hodge_star(a)).map(|h| 0.5 * h)
}

/// `(δ_α H, δ_μ H) = (*α/(*μ), −ι_α̂ α / (2 (*μ)²))`.
pub fn var_deriv_momentum(state: &FlowState) -> Result<EffortPair> {
    let rho = state.expect("var_deriv_momentum", Representation::Momentum)?;
    let a = state.first();
    let e_alpha = hodge_star(a).div_field(&rho);
    let speed2 = interior_product(&sharp(a)?, a)?;
    let rho2 = &rho * &rho;
    let e_mass = speed2.div_field(&rho2).scale(-0.5);
    Ok(EffortPair {
        first: e_alpha,
        mass: e_mass,
    })
}

/// Momentum-representation structure map
/// `J_x(e) = (−L_ê α − div(ê) α − (*μ) d e_μ, −d((*μ) e_α))`, `ê = Ψ_vol⁻¹(e_α)`.
pub fn jx_momentum(state: &FlowState, e: &EffortPair) -> Result<StateRate> {
    let rho = state.expect("jx_momentum", Representation::Momentum)?;
    let omega = AlgebraElement::new(e.first.clone())?;
    let alpha = DualAlgebraElement::new(state.first().clone())?;
    let first = ad_star_g(&omega, &alpha)?
        .into_form()
        .add(&exterior_derivative(&e.mass)?.mul_field(&rho))?
        .neg();
    let mass = exterior_derivative(&e.first.mul_field(&rho))?.neg();
    Ok(StateRate { first, mass })
}

/// `Φ(α, μ) = (α/(*μ), μ)`.
pub fn to_velocity(state: &FlowState) -> Result<FlowState> {
    let rho = state.expect("to_velocity", Representation::Momentum)?;
    Ok(FlowState {
        repr: Representation::Velocity,
        first: state.first().div_field(&rho),
        mass: state.mass().clone(),
    })
}

/// `Φ⁻¹(ṽ, μ) = ((*μ) ṽ, μ)`.
pub fn from_velocity(state: &FlowState) -> Result<FlowState> {
    let rho = state.expect("from_velocity", Representation::Velocity)?;
    Ok(FlowState {
        repr: Representation::Momentum,
        first: state.first().mul_field(&rho),
        mass: state.mass().clone(),
    })
}

fn velocity_of(state: &FlowState, rho: &Array2<f64>) -> DiscreteForm {
    match state.repr {
        Representation::Velocity => state.first.clone(),
        Representation::Momentum => state.first.div_field(rho),
    }
}

/// Pushforward of the coordinate change at `state` (either representation):
/// `(α̇, μ̇) ↦ ((α̇ − (*μ̇) ṽ)/(*μ), μ̇)`.
pub fn pushforward_phi(state: &FlowState, rate: &StateRate) -> Result<StateRate> {
    let rho = state.density_checked("pushforward_phi")?;
    let v = velocity_of(state, &rho);
    let rho_dot = hodge_star(&rate.mass);
    let first = rate.first.sub(&v.mul_field(rho_dot.comp(0)))?.div_field(&rho);
    Ok(StateRate {
        first,
        mass: rate.mass.clone(),
    })
}

/// Pullback of the coordinate change at `state` (either representation):
/// `(e_ṽ, e_μ̃) ↦ (e_ṽ/(*μ), e_μ̃ − *(ṽ∧e_ṽ)/(*μ))`.
pub fn pullback_phi(state: &FlowState, e: &EffortPair) -> Result<EffortPair> {
    let rho = state.density_checked("pullback_phi")?;
    let v = velocity_of(state, &rho);
    let first = e.first.div_field(&rho);
    let cross = hodge_star(&wedge(&v, &e.first)?).div_field(&rho);
    Ok(EffortPair {
        first,
        mass: e.mass.sub(&cross)?,
    })
}

/// `H = ∫ ½ (*μ) ṽ∧*ṽ`.
pub fn hamiltonian_velocity(state: &FlowState) -> Result<f64> {
    let rho = state.expect("hamiltonian_velocity", Representation::Velocity)?;
    let v = state.first();
    pairing(&v.mul_field(&rho), &hodge_star(v)).map(|h| 0.5 * h)
}

/// Kinetic energy of a state in either representation.
pub fn hamiltonian(state: &FlowState) -> Result<f64> {
    match state.repr {
        Representation::Momentum => hamiltonian_momentum(state),
        Representation::Velocity => hamiltonian_velocity(state),
    }
}

/// `(δ_ṽ H, δ_μ H) = (ι_v μ, ½ ι_v ṽ)` with `v = ṽ♯`.
pub fn var_deriv_velocity(state: &FlowState) -> Result<EffortPair> {
    state.expect("var_deriv_velocity", Representation::Velocity)?;
    let v = state.first();
    let vs = sharp(v)?;
    Ok(EffortPair {
        first: interior_product(&vs, state.mass())?,
        mass: interior_product(&vs, v)?.scale(0.5),
    })
}

/// Variational derivatives of the Hamiltonian in the state's own representation.
pub fn var_deriv(state: &FlowState) -> Result<EffortPair> {
    match state.repr {
        Representation::Momentum => var_deriv_momentum(state),
        Representation::Velocity => var_deriv_velocity(state),
    }
}

/// Velocity-representation structure map
/// `J̃(e) = (−d e_μ − (1/(*μ)) ι_ê dṽ, −d e_ṽ)`, `ê = Ψ_vol⁻¹(e_ṽ)`.
pub fn jx_velocity(state: &FlowState, e: &EffortPair) -> Result<StateRate> {
    let rho = state.expect("jx_velocity", Representation::Velocity)?;
    let ehat = vol_sharp(&e.first)?;
    let w = exterior_derivative(state.first())?;
    let first = exterior_derivative(&e.mass)?
        .add(&interior_product(&ehat, &w)?.div_field(&rho))?
        .neg();
    let mass = exterior_derivative(&e.first)?.neg();
    Ok(StateRate { first, mass })
}

/// Structure map in the state's own representation.
pub fn structure_map(state: &FlowState, e: &EffortPair) -> Result<StateRate> {
    match state.repr {
        Representation::Momentum => jx_momentum(state, e),
        Representation::Velocity => jx_velocity(state, e),
    }
}

/// Velocity form of a state in either representation.
pub fn velocity_form(state: &FlowState) -> Result<DiscreteForm> {
    let rho = state.density_checked("velocity_form")?;
    Ok(velocity_of(state, &rho))
}

/// Velocity vector field `v = ṽ♯`.
pub fn velocity_field(state: &FlowState) -> Result<crate::forms::VectorField> {
    sharp(&velocity_form(state)?)
}

/// Momentum 1-form `α = flat(v)·ρ` built from a coordinate velocity.
pub fn momentum_from_vector(v: &crate::forms::VectorField, rho: &Array2<f64>) -> DiscreteForm {
    flat(v).mul_field(rho)
}
