//! Port variables of the open kinetic-energy subsystem, membership residuals
//! of its Stokes-Dirac structure, and power accounting.
//!
//! Every port is oriented into the structure and the storage flow is `−ẋ`.

use crate::energetics::{
    jx_momentum, jx_velocity, var_deriv_momentum, var_deriv_velocity, EffortPair, FlowState,
    Representation, StateRate,
};
use crate::error::{Error, Result};
use crate::forms::{
    boundary_integral, boundary_wedge, exterior_derivative, interior_product, pairing, trace,
    vol_sharp, BoundaryForm, DiscreteForm,
};

/// Storage, boundary and distributed port variables.
#[derive(Debug, Clone, PartialEq)]
pub struct PortSet {
    pub representation: Representation,
    /// `f_s = −ẋ`.
    pub f_storage: StateRate,
    /// `e_s = δH`.
    pub e_storage: EffortPair,
    pub f_boundary: BoundaryForm,
    pub e_boundary: BoundaryForm,
    pub f_distributed: DiscreteForm,
    pub e_distributed: DiscreteForm,
}

impl PortSet {
    /// `⟨e_s | f_s⟩_𝔰`.
    pub fn storage_power(&self) -> Result<f64> {
        Ok(pairing(&self.f_storage.first, &self.e_storage.first)?
            + pairing(&self.f_storage.mass, &self.e_storage.mass)?)
    }

    /// `∮ e_∂ ∧ f_∂`.
    pub fn boundary_power(&self) -> Result<f64> {
        boundary_integral(&boundary_wedge(&self.e_boundary, &self.f_boundary)?)
    }

    /// `∫ e_d ∧ f_d`.
    pub fn distributed_power(&self) -> Result<f64> {
        pairing(&self.e_distributed, &self.f_distributed)
    }

    /// `⟨e_s | f_s⟩ + ∮ e_∂∧f_∂ + ∫ e_d∧f_d`, zero for a power-continuous tuple.
    pub fn power_sum(&self) -> Result<f64> {
        Ok(self.storage_power()? + self.boundary_power()? + self.distributed_power()?)
    }

    /// The state rate `ẋ = −f_s`.
    pub fn state_rate(&self) -> StateRate {
        StateRate {
            first: self.f_storage.first.neg(),
            mass: self.f_storage.mass.neg(),
        }
    }
}

fn check_force(state: &FlowState, force: &DiscreteForm) -> Result<()> {
    if force.degree() != 1 {
        return Err(Error::Degree {
            op: "distributed force",
            degree: force.degree(),
        });
    }
    if force.grid() != state.grid() {
        return Err(Error::GridMismatch {
            op: "distributed force",
        });
    }
    Ok(())
}

/// Port variables in the momentum representation for a distributed force `f_s`.
pub fn ports_momentum(state: &FlowState, force: &DiscreteForm) -> Result<PortSet> {
    check_force(state, force)?;
    let e = var_deriv_momentum(state)?;
    let rho = state.density();
    let j = jx_momentum(state, &e)?;
    let f_storage = StateRate {
        first: j.first.add(force)?.neg(),
        mass: j.mass.neg(),
    };
    let (e_boundary, f_boundary) = momentum_boundary(state, &e, &rho)?;
    Ok(PortSet {
        representation: Representation::Momentum,
        f_storage,
        f_distributed: e.first.clone(),
        e_storage: e,
        f_boundary,
        e_boundary,
        e_distributed: force.clone(),
    })
}

fn momentum_boundary(
    state: &FlowState,
    e: &EffortPair,
    rho: &ndarray::Array2<f64>,
) -> Result<(BoundaryForm, BoundaryForm)> {
    let ehat = vol_sharp(&e.first)?;
    let bernoulli = interior_product(&ehat, state.first())?
        .div_field(rho)
        .add(&e.mass)?;
    Ok((trace(&bernoulli)?, trace(&e.first.mul_field(rho))?.scale(-1.0)))
}

/// Port variables in the velocity representation for a distributed force `f_s`.
pub fn ports_velocity(state: &FlowState, force: &DiscreteForm) -> Result<PortSet> {
    check_force(state, force)?;
    let e = var_deriv_velocity(state)?;
    let rho = state.density();
    let j = jx_velocity(state, &e)?;
    let f_storage = StateRate {
        first: j.first.add(&force.div_field(&rho))?.neg(),
        mass: j.mass.neg(),
    };
    Ok(PortSet {
        representation: Representation::Velocity,
        f_storage,
        f_boundary: trace(&e.first)?.scale(-1.0),
        e_boundary: trace(&e.mass)?,
        f_distributed: e.first.div_field(&rho),
        e_distributed: force.clone(),
        e_storage: e,
    })
}

/// Port variables in the state's own representation.
pub fn ports(state: &FlowState, force: &DiscreteForm) -> Result<PortSet> {
    match state.representation() {
        Representation::Momentum => ports_momentum(state, force),
        Representation::Velocity => ports_velocity(state, force),
    }
}

/// Max-norm residual of each defining relation of the Stokes-Dirac structure.
#[derive(Debug, Clone, Copy, PartialEq, Default, serde::Serialize)]
pub struct DiracResidual {
    /// Momentum or velocity row of the storage flow.
    pub storage_first: f64,
    /// Mass row of the storage flow.
    pub storage_mass: f64,
    pub distributed: f64,
    pub boundary_effort: f64,
    pub boundary_flow: f64,
}

impl DiracResidual {
    pub fn max(&self) -> f64 {
        [
            self.storage_first,
            self.storage_mass,
            self.distributed,
            self.boundary_effort,
            self.boundary_flow,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

fn boundary_residual(a: &BoundaryForm, b: &BoundaryForm) -> Result<f64> {
    Ok(a.sub(b)?.max_abs())
}

/// Evaluates the defining relations of the structure at `state` for the
/// tuple `ports`. The effort variables are taken from the tuple; the state
/// enters only through the modulated coefficients (`α` or `ṽ`, and `*μ`).
pub fn dirac_residual(ports: &PortSet, state: &FlowState) -> Result<DiracResidual> {
    if ports.representation != state.representation() {
        return Err(Error::Representation {
            op: "dirac_residual",
            expected: ports.representation.name(),
        });
    }
    let e = &ports.e_storage;
    let rho = state.density();
    match ports.representation {
        Representation::Momentum => {
            let j = jx_momentum(state, e)?;
            let f_first = j.first.add(&ports.e_distributed)?.neg();
            let (e_b, f_b) = momentum_boundary(state, e, &rho)?;
            Ok(DiracResidual {
                storage_first: ports.f_storage.first.max_diff(&f_first)?,
                storage_mass: ports.f_storage.mass.max_diff(&j.mass.neg())?,
                distributed: ports.f_distributed.max_diff(&e.first)?,
                boundary_effort: boundary_residual(&ports.e_boundary, &e_b)?,
                boundary_flow: boundary_residual(&ports.f_boundary, &f_b)?,
            })
        }
        Representation::Velocity => {
            let ehat = vol_sharp(&e.first)?;
            let w = exterior_derivative(state.first())?;
            let f_first = exterior_derivative(&e.mass)?
                .add(&interior_product(&ehat, &w)?.div_field(&rho))?
                .sub(&ports.e_distributed.div_field(&rho))?;
            let f_mass = exterior_derivative(&e.first)?;
            Ok(DiracResidual {
                storage_first: ports.f_storage.first.max_diff(&f_first)?,
                storage_mass: ports.f_storage.mass.max_diff(&f_mass)?,
                distributed: ports.f_distributed.max_diff(&e.first.div_field(&rho))?,
                boundary_effort: boundary_residual(&ports.e_boundary, &trace(&e.mass)?)?,
                boundary_flow: boundary_residual(&ports.f_boundary, &trace(&e.first)?.scale(-1.0))?,
            })
        }
    }
}

/// One row of the energy balance.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct EnergyReport {
    pub time: f64,
    pub h: f64,
    pub dh_dt: f64,
    pub p_boundary: f64,
    pub p_distributed: f64,
    /// `dH/dt − P_∂ − P_d`.
    pub residual: f64,
}

/// Second-order finite-difference derivative of a uniformly sampled series;
/// one-sided second-order formulas at the ends.
pub fn series_derivative(values: &[f64], dt: f64) -> Vec<f64> {
    let n = values.len();
    match n {
        0 => Vec::new(),
        1 => vec![0.0],
        2 => {
            let d = (values[1] - values[0]) / dt;
            vec![d, d]
        }
        _ => (0..n)
            .map(|i| {
                if i == 0 {
                    (-3.0 * values[0] + 4.0 * values[1] - values[2]) / (2.0 * dt)
                } else if i == n - 1 {
                    (3.0 * values[n - 1] - 4.0 * values[n - 2] + values[n - 3]) / (2.0 * dt)
                } else {
                    (values[i + 1] - values[i - 1]) / (2.0 * dt)
                }
            })
            .collect(),
    }
}

/// Energy balance rows from sampled `H` and port powers at times `t₀ + k·dt`.
pub fn power_balance(
    t0: f64,
    dt: f64,
    h: &[f64],
    p_boundary: &[f64],
    p_distributed: &[f64],
) -> Result<Vec<EnergyReport>> {
    for other in [p_boundary.len(), p_distributed.len()] {
        if other != h.len() {
            return Err(Error::LengthMismatch {
                op: "power_balance",
                left: h.len(),
                right: other,
            });
        }
    }
    let dh = series_derivative(h, dt);
    Ok((0..h.len())
        .map(|k| EnergyReport {
            time: t0 + k as f64 * dt,
            h: h[k],
            dh_dt: dh[k],
            p_boundary: p_boundary[k],
            p_distributed: p_distributed[k],
            residual: dh[k] - p_boundary[k] - p_distributed[k],
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::energetics::{to_velocity, hamiltonian};
    use crate::fields::{random_mass, random_one_form, rng};
    use crate::forms::{Edge, Grid};
    use std::f64::consts::PI;

    fn torus(n: usize) -> Grid {
        Grid::periodic([2.0 * PI, 2.0 * PI], [n, n]).unwrap()
    }

    fn square(n: usize) -> Grid {
        Grid::bounded([1.0, 1.0], [n, n]).unwrap()
    }

    fn random_state(g: Grid, seed: u64) -> FlowState {
        let r = &mut rng(seed);
        FlowState::momentum(random_one_form(g, r), random_mass(g, 0.5, r)).unwrap()
    }

    #[test]
    fn uniform_flow_ports() {
        let g = square(9);
        let s = FlowState::momentum(
            DiscreteForm::one_form_fn(g, |_, _| (1.0, 0.0)),
            DiscreteForm::volume(g),
        )
        .unwrap();
        let p = ports_momentum(&s, &DiscreteForm::zeros(g, 1).unwrap()).unwrap();
        for e in Edge::ALL {
            assert!(p.e_boundary.edge(e).iter().all(|&v| (v - 0.5).abs() < 1e-15));
        }
        let expected = trace(&DiscreteForm::one_form_fn(g, |_, _| (0.0, 1.0))).unwrap().scale(-1.0);
        assert_eq!(p.f_boundary, expected);

        let sv = to_velocity(&s).unwrap();
        let pv = ports_velocity(&sv, &DiscreteForm::zeros(g, 1).unwrap()).unwrap();
        assert_eq!(pv.f_boundary, expected);
        assert!(pv.e_boundary.edge(Edge::Top).iter().all(|&v| v == 0.5));
    }

    #[test]
    fn periodic_ports_have_no_boundary() {
        let g = torus(16);
        let s = random_state(g, 1);
        let p = ports_momentum(&s, &DiscreteForm::zeros(g, 1).unwrap()).unwrap();
        assert!(p.e_boundary.is_empty() && p.f_boundary.is_empty());
        assert_eq!(p.boundary_power().unwrap(), 0.0);
    }

    #[test]
    fn still_fluid_only_carries_the_force() {
        let g = square(12);
        let s = FlowState::velocity(DiscreteForm::zeros(g, 1).unwrap(), random_mass(g, 0.3, &mut rng(2))).unwrap();
        let f = random_one_form(g, &mut rng(3));
        let p = ports_velocity(&s, &f).unwrap();
        assert_eq!(p.e_boundary.max_abs() + p.f_boundary.max_abs(), 0.0);
        assert_eq!(p.f_distributed.max_abs(), 0.0);
        assert_eq!(p.e_distributed, f);
    }

    #[test]
    fn distributed_flow_is_mass_flux_per_density() {
        let g = torus(16);
        let sv = to_velocity(&random_state(g, 4)).unwrap();
        let p = ports_velocity(&sv, &DiscreteForm::zeros(g, 1).unwrap()).unwrap();
        let v = crate::energetics::velocity_field(&sv).unwrap();
        let omega_v = interior_product(&v, &DiscreteForm::volume(g)).unwrap();
        assert!(p.f_distributed.max_diff(&omega_v).unwrap() < 1e-14);
    }

    #[test]
    fn impermeable_walls_carry_no_power() {
        let g = square(16);
        let v = crate::forms::VectorField::from_fn(g, crate::fields::taylor_green_velocity(g, 1.0));
        let rho = DiscreteForm::top_form_fn(g, |x, y| 1.0 + 0.2 * (x * y).sin());
        let alpha = crate::energetics::momentum_from_vector(&v, rho.comp(0));
        let s = FlowState::momentum(alpha, rho).unwrap();
        let mut alpha = s.first().clone();
        // remove stray roundoff in the wall-normal components
        let (nx, ny) = g.shape();
        for j in 0..ny {
            alpha.comps_mut()[0][[0, j]] = 0.0;
            alpha.comps_mut()[0][[nx - 1, j]] = 0.0;
        }
        for i in 0..nx {
            alpha.comps_mut()[1][[i, 0]] = 0.0;
            alpha.comps_mut()[1][[i, ny - 1]] = 0.0;
        }
        let s = FlowState::momentum(alpha, s.mass().clone()).unwrap();
        let p = ports_momentum(&s, &DiscreteForm::zeros(g, 1).unwrap()).unwrap();
        assert_eq!(p.f_boundary.max_abs(), 0.0);
        assert_eq!(p.boundary_power().unwrap(), 0.0);
    }

    #[test]
    fn residuals_of_generated_tuples_vanish() {
        for g in [torus(24), square(24)] {
            let s = random_state(g, 5);
            let f = random_one_form(g, &mut rng(6));
            for st in [s.clone(), to_velocity(&s).unwrap()] {
                let p = ports(&st, &f).unwrap();
                assert!(dirac_residual(&p, &st).unwrap().max() <= 1e-12);
            }
        }
    }

    #[test]
    fn perturbed_boundary_flow_shows_in_its_row() {
        let g = square(16);
        let s = to_velocity(&random_state(g, 7)).unwrap();
        let mut p = ports_velocity(&s, &DiscreteForm::zeros(g, 1).unwrap()).unwrap();
        p.f_boundary = p.f_boundary.map(|v| v + 1.0);
        let r = dirac_residual(&p, &s).unwrap();
        assert!((r.boundary_flow - 1.0).abs() < 1e-12);
        assert!(r.storage_first < 1e-12 && r.boundary_effort < 1e-12);
    }

    #[test]
    fn zero_tuple_has_zero_residual() {
        let g = square(12);
        let s = FlowState::momentum(DiscreteForm::zeros(g, 1).unwrap(), DiscreteForm::volume(g)).unwrap();
        let p = ports_momentum(&s, &DiscreteForm::zeros(g, 1).unwrap()).unwrap();
        assert_eq!(dirac_residual(&p, &s).unwrap().max(), 0.0);
    }

    #[test]
    fn power_continuity_on_torus() {
        let g = torus(32);
        let s = random_state(g, 8);
        let f = random_one_form(g, &mut rng(9));
        for st in [s.clone(), to_velocity(&s).unwrap()] {
            let p = ports(&st, &f).unwrap();
            let scale = hamiltonian(&st).unwrap();
            assert!(p.power_sum().unwrap().abs() <= 1e-12 * scale);
        }
    }

    #[test]
    fn representations_agree_on_port_powers() {
        let g = square(32);
        let s = random_state(g, 10);
        let f = random_one_form(g, &mut rng(11));
        let pm = ports_momentum(&s, &f).unwrap();
        let pv = ports_velocity(&to_velocity(&s).unwrap(), &f).unwrap();
        assert!((pm.boundary_power().unwrap() - pv.boundary_power().unwrap()).abs() < 1e-9);
        assert!((pm.distributed_power().unwrap() - pv.distributed_power().unwrap()).abs() < 1e-9);
    }

    #[test]
    fn series_derivative_is_exact_on_quadratics() {
        let dt = 0.1;
        let h: Vec<f64> = (0..6).map(|k| {
            let t = k as f64 * dt;
            1.0 + 2.0 * t - 3.0 * t * t
        }).collect();
        let d = series_derivative(&h, dt);
        for (k, v) in d.iter().enumerate() {
            let t = k as f64 * dt;
            assert!((v - (2.0 - 6.0 * t)).abs() < 1e-12);
        }
    }

    #[test]
    fn power_balance_rejects_ragged_series() {
        assert!(power_balance(0.0, 0.1, &[1.0, 2.0], &[0.0], &[0.0, 0.0]).is_err());
        let rows = power_balance(0.0, 0.5, &[1.0, 2.0, 3.0], &[0.5; 3], &[1.5; 3]).unwrap();
        assert!(rows.iter().all(|r| r.residual.abs() < 1e-15));
        assert_eq!(rows[2].time, 1.0);
    }
}
