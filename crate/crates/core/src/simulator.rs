//! Fixed-step RK4 time integration of the open kinetic-energy subsystem.

use serde::{Deserialize, Serialize};

use crate::dirac::{dirac_residual, ports, power_balance, EnergyReport, PortSet};
use crate::energetics::{
    hamiltonian, jx_momentum, var_deriv_momentum, velocity_form, FlowState,
    Representation, StateRate, DENSITY_FLOOR,
};
use crate::error::{Error, Result};
use crate::fields;
use crate::forms::{
    exterior_derivative, flat, integrate_top, interior_product, sharp, stencil::partial, Axis,
    DiscreteForm, Grid, VectorField,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub extents: [f64; 2],
    pub resolution: [usize; 2],
    pub periodic: [bool; 2],
    #[serde(default = "unit_metric")]
    pub metric: [f64; 2],
}

fn unit_metric() -> [f64; 2] {
    [1.0, 1.0]
}

impl GridConfig {
    pub fn build(&self) -> Result<Grid> {
        Grid::new(self.extents, self.resolution, self.periodic, self.metric)
    }
}

/// Named initial velocity fields (coordinate components).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum VelocityInit {
    Uniform { velocity: [f64; 2] },
    /// `v = (A sin Y, 0)`.
    Shear { amplitude: f64 },
    /// `v = A (sin X cos Y, −cos X sin Y)`.
    TaylorGreen { amplitude: f64 },
}

/// Named initial densities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DensityInit {
    Constant { value: f64 },
    /// `ρ = 1 + ε cos X cos Y`.
    Perturbed { amplitude: f64 },
    /// `ρ = 1 + ε f` with `f` a seeded random trigonometric field, `|f| ≤ 1`.
    Random { amplitude: f64 },
}

/// Component of a force 1-form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Component {
    X,
    Y,
}

/// Spatial shape of the distributed force.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ForceShape {
    Zero,
    /// `A sin(kx X + ky Y)` in the chosen component (`dx` or `dy`).
    Trig {
        amplitude: f64,
        component: Component,
        wavenumber: [f64; 2],
    },
}

/// Time modulation of the distributed force.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Modulation {
    Constant,
    /// `sin(ω t)`.
    Sine { omega: f64 },
    /// `min(t / duration, 1)`.
    Ramp { duration: f64 },
}

impl Modulation {
    pub fn at(&self, t: f64) -> f64 {
        match *self {
            Modulation::Constant => 1.0,
            Modulation::Sine { omega } => (omega * t).sin(),
            Modulation::Ramp { duration } => (t / duration).min(1.0),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ForceConfig {
    pub shape: ForceShape,
    #[serde(default = "constant_modulation")]
    pub modulation: Modulation,
}

fn constant_modulation() -> Modulation {
    Modulation::Constant
}

impl Default for ForceConfig {
    fn default() -> Self {
        ForceConfig {
            shape: ForceShape::Zero,
            modulation: Modulation::Constant,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Watchdog {
    /// Abort when any velocity gradient entry exceeds this.
    #[serde(default = "default_max_gradient")]
    pub max_gradient: f64,
    /// Abort when the density drops below this.
    #[serde(default = "default_min_density")]
    pub min_density: f64,
}

fn default_max_gradient() -> f64 {
    1e3
}

fn default_min_density() -> f64 {
    0.1
}

impl Default for Watchdog {
    fn default() -> Self {
        Watchdog {
            max_gradient: default_max_gradient(),
            min_density: default_min_density(),
        }
    }
}

/// Pass/fail thresholds applied by the report command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    /// Bound on `max |dH/dt − P_∂ − P_d| / H(0)`.
    #[serde(default = "default_residual_tol")]
    pub residual: f64,
    /// Bound on `|ΔH − ∫(P_∂ + P_d) dt| / H(0)`.
    #[serde(default = "default_balance_tol")]
    pub balance_drift: f64,
    /// Bound on `|M(T) − M(0)| / M(0)`.
    #[serde(default = "default_mass_tol")]
    pub mass_drift: f64,
}

fn default_residual_tol() -> f64 {
    1e-5
}

fn default_balance_tol() -> f64 {
    1e-5
}

fn default_mass_tol() -> f64 {
    1e-10
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            residual: default_residual_tol(),
            balance_drift: default_balance_tol(),
            mass_drift: default_mass_tol(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimConfig {
    pub grid: GridConfig,
    pub representation: Representation,
    pub velocity: VelocityInit,
    pub density: DensityInit,
    #[serde(default)]
    pub force: ForceConfig,
    pub dt: f64,
    pub steps: usize,
    #[serde(default = "default_stride")]
    pub output_stride: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub watchdog: Watchdog,
    #[serde(default)]
    pub tolerances: Tolerances,
}

fn default_stride() -> usize {
    1
}

impl ForceShape {
    pub fn form(&self, grid: Grid) -> DiscreteForm {
        match *self {
            ForceShape::Zero => DiscreteForm::zeros(grid, 1).expect("degree 1"),
            ForceShape::Trig {
                amplitude,
                component,
                wavenumber,
            } => DiscreteForm::one_form_fn(grid, |x, y| {
                let f = amplitude
                    * (wavenumber[0] * fields::wall_phase(&grid, Axis::X, x)
                        + wavenumber[1] * fields::wall_phase(&grid, Axis::Y, y))
                    .sin();
                match component {
                    Component::X => (f, 0.0),
                    Component::Y => (0.0, f),
                }
            }),
        }
    }
}

/// The distributed force as a function of time.
#[derive(Debug, Clone)]
pub struct Force {
    shape: DiscreteForm,
    modulation: Modulation,
    zero: bool,
}

impl Force {
    pub fn new(config: &ForceConfig, grid: Grid) -> Self {
        Force {
            shape: config.shape.form(grid),
            modulation: config.modulation.clone(),
            zero: config.shape == ForceShape::Zero,
        }
    }

    pub fn zero(grid: Grid) -> Self {
        Self::new(&ForceConfig::default(), grid)
    }

    pub fn at(&self, t: f64) -> DiscreteForm {
        if self.zero {
            return self.shape.clone();
        }
        self.shape.scale(self.modulation.at(t))
    }
}

impl SimConfig {
    /// Validates the configuration and builds the initial state.
    pub fn initial_state(&self) -> Result<FlowState> {
        let grid = self.grid.build()?;
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::Config(format!("dt must be positive, got {}", self.dt)));
        }
        if self.output_stride == 0 {
            return Err(Error::Config("output_stride must be at least 1".into()));
        }
        let v = match &self.velocity {
            VelocityInit::Uniform { velocity } => {
                VectorField::from_fn(grid, fields::uniform_velocity(*velocity))
            }
            VelocityInit::Shear { amplitude } => {
                VectorField::from_fn(grid, fields::shear_velocity(grid, *amplitude))
            }
            VelocityInit::TaylorGreen { amplitude } => {
                VectorField::from_fn(grid, fields::taylor_green_velocity(grid, *amplitude))
            }
        };
        let s = grid.volume_factor();
        let rho = match &self.density {
            DensityInit::Constant { value } => DiscreteForm::top_form_fn(grid, |_, _| *value),
            DensityInit::Perturbed { amplitude } => {
                DiscreteForm::top_form_fn(grid, fields::perturbed_density(grid, *amplitude))
            }
            DensityInit::Random { amplitude } => {
                let f = fields::TrigField::random(&mut fields::rng(self.seed));
                DiscreteForm::top_form_fn(grid, |x, y| 1.0 + amplitude * f.eval(&grid, x, y))
            }
        };
        let min_rho = rho.comp(0).iter().copied().fold(f64::INFINITY, f64::min);
        if !(min_rho >= self.watchdog.min_density) {
            return Err(Error::Config(format!(
                "initial density minimum {min_rho} is below {}",
                self.watchdog.min_density
            )));
        }
        let vmax = v.max_norm();
        let h = grid.min_spacing();
        if vmax > 0.0 && self.dt > 0.5 * h / vmax {
            return Err(Error::Config(format!(
                "CFL guard violated: dt = {} exceeds 0.5 h / max|v| = {}",
                self.dt,
                0.5 * h / vmax
            )));
        }
        let v_form = flat(&v);
        let mut first = match self.representation {
            Representation::Velocity => v_form,
            Representation::Momentum => v_form.mul_field(rho.comp(0)),
        };
        impose_walls(&mut first);
        let mass = rho.scale(s);
        FlowState::new(self.representation, first, mass)
    }
}

/// Zeroes the wall-normal component of a 1-form on every bounded edge.
pub fn impose_walls(first: &mut DiscreteForm) {
    let g = *first.grid();
    let (nx, ny) = g.shape();
    let comps = first.comps_mut();
    if !g.is_periodic(Axis::X) {
        for j in 0..ny {
            comps[0][[0, j]] = 0.0;
            comps[0][[nx - 1, j]] = 0.0;
        }
    }
    if !g.is_periodic(Axis::Y) {
        for i in 0..nx {
            comps[1][[i, 0]] = 0.0;
            comps[1][[i, ny - 1]] = 0.0;
        }
    }
}

/// `ẋ = J_x(δH) + (f_s, 0)`.
pub fn rhs_momentum(state: &FlowState, force: &DiscreteForm) -> Result<StateRate> {
    let e = var_deriv_momentum(state)?;
    let j = jx_momentum(state, &e)?;
    Ok(StateRate {
        first: j.first.add(force)?,
        mass: j.mass,
    })
}

/// `ṽ̇ = −d(½ ι_v ṽ) − ι_v dṽ + f_s/(*μ)`, `μ̇ = −d(ι_v μ)`.
pub fn rhs_velocity(state: &FlowState, force: &DiscreteForm) -> Result<StateRate> {
    if state.representation() != Representation::Velocity {
        return Err(Error::Representation {
            op: "rhs_velocity",
            expected: "velocity",
        });
    }
    let rho = state.density();
    let vt = state.first();
    let v = sharp(vt)?;
    let bernoulli = interior_product(&v, vt)?.scale(0.5);
    let w = exterior_derivative(vt)?;
    let first = exterior_derivative(&bernoulli)?
        .add(&interior_product(&v, &w)?)?
        .neg()
        .add(&force.div_field(&rho))?;
    let mass = exterior_derivative(&interior_product(&v, state.mass())?)?.neg();
    Ok(StateRate { first, mass })
}

/// Right-hand side in the state's own representation.
pub fn rhs(state: &FlowState, force: &DiscreteForm) -> Result<StateRate> {
    match state.representation() {
        Representation::Momentum => rhs_momentum(state, force),
        Representation::Velocity => rhs_velocity(state, force),
    }
}

fn check_density(state: &FlowState) -> Result<()> {
    let min = state.min_density();
    if !(min >= DENSITY_FLOOR) {
        return Err(Error::Density { op: "rk4_step", min });
    }
    Ok(())
}

/// One classical Runge-Kutta step. With `walls`, the wall-normal component
/// of every stage state and of the result is zeroed.
pub fn rk4_step(
    state: &FlowState,
    force: &Force,
    t: f64,
    dt: f64,
    walls: bool,
) -> Result<FlowState> {
    let stage = |base: &FlowState, k: &StateRate, c: f64| -> Result<FlowState> {
        let mut s = base.advanced(k, c)?;
        if walls {
            let (mut first, mass) = s.into_parts();
            impose_walls(&mut first);
            s = base.with_parts(first, mass);
        }
        check_density(&s)?;
        Ok(s)
    };
    let k1 = rhs(state, &force.at(t))?;
    let s2 = stage(state, &k1, 0.5 * dt)?;
    let k2 = rhs(&s2, &force.at(t + 0.5 * dt))?;
    let s3 = stage(state, &k2, 0.5 * dt)?;
    let k3 = rhs(&s3, &force.at(t + 0.5 * dt))?;
    let s4 = stage(state, &k3, dt)?;
    let k4 = rhs(&s4, &force.at(t + dt))?;
    let combine = |a: &DiscreteForm, b: &DiscreteForm, c: &DiscreteForm, d: &DiscreteForm| {
        a.axpy(2.0, b)?.axpy(2.0, c)?.add(d)
    };
    let incr = StateRate {
        first: combine(&k1.first, &k2.first, &k3.first, &k4.first)?,
        mass: combine(&k1.mass, &k2.mass, &k3.mass, &k4.mass)?,
    };
    stage(state, &incr, dt / 6.0)
}

/// Vorticity `w = dṽ` and the max-norm residual of the vorticity equation
/// `ẇ + d ι_v w − d(f_s/(*μ)) = 0` with `ẇ = d(ṽ̇)` from the current rhs.
pub fn vorticity_diagnostic(state: &FlowState, force: &DiscreteForm) -> Result<(DiscreteForm, f64)> {
    if state.representation() != Representation::Velocity {
        return Err(Error::Representation {
            op: "vorticity_diagnostic",
            expected: "velocity",
        });
    }
    let vt = state.first();
    let w = exterior_derivative(vt)?;
    let v = sharp(vt)?;
    let rho = state.density();
    let w_dot = exterior_derivative(&rhs_velocity(state, force)?.first)?;
    let residual = w_dot
        .add(&exterior_derivative(&interior_product(&v, &w)?)?)?
        .sub(&exterior_derivative(&force.div_field(&rho))?)?;
    Ok((w, residual.max_abs()))
}

/// Largest absolute entry of the coordinate velocity gradient.
pub fn max_velocity_gradient(state: &FlowState) -> Result<f64> {
    let v = sharp(&velocity_form(state)?)?;
    let g = *state.grid();
    let mut m: f64 = 0.0;
    for c in [v.x(), v.y()] {
        for axis in [Axis::X, Axis::Y] {
            m = partial(c, axis, &g).iter().fold(m, |m, d| m.max(d.abs()));
        }
    }
    Ok(m)
}

/// Scalar diagnostics of one state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepSample {
    pub step: usize,
    pub time: f64,
    pub h: f64,
    pub p_boundary: f64,
    pub p_distributed: f64,
    pub mass: f64,
    pub max_vorticity: f64,
    /// Largest Stokes-Dirac membership residual of this step's port tuple.
    pub dirac_residual: f64,
    /// Power continuity defect `⟨e_s|f_s⟩ + P_∂ + P_d`.
    pub power_sum: f64,
}

/// Why a run stopped early.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    /// Step at which the failure was detected.
    pub step: usize,
    /// Last step with a valid state.
    pub last_good_step: usize,
    pub reason: String,
    /// True when the density or gradient watchdog tripped.
    pub watchdog: bool,
}

#[derive(Debug, Clone)]
pub struct Snapshot {
    pub step: usize,
    pub time: f64,
    pub state: FlowState,
    pub ports: PortSet,
}

/// Everything a run produces. On failure the data up to the last good step
/// is kept.
#[derive(Debug, Clone)]
pub struct SimOutput {
    pub samples: Vec<StepSample>,
    pub reports: Vec<EnergyReport>,
    pub snapshots: Vec<Snapshot>,
    pub failure: Option<Failure>,
}

/// A running simulation.
#[derive(Debug, Clone)]
pub struct Simulation {
    config: SimConfig,
    state: FlowState,
    force: Force,
    step: usize,
    walls: bool,
}

impl Simulation {
    pub fn new(config: SimConfig) -> Result<Self> {
        let state = config.initial_state()?;
        let grid = *state.grid();
        Ok(Simulation {
            force: Force::new(&config.force, grid),
            walls: !grid.is_closed(),
            config,
            state,
            step: 0,
        })
    }

    pub fn from_state(config: SimConfig, state: FlowState) -> Result<Self> {
        let grid = *state.grid();
        Ok(Simulation {
            force: Force::new(&config.force, grid),
            walls: !grid.is_closed(),
            config,
            state,
            step: 0,
        })
    }

    pub fn state(&self) -> &FlowState {
        &self.state
    }

    pub fn config(&self) -> &SimConfig {
        &self.config
    }

    pub fn step_index(&self) -> usize {
        self.step
    }

    pub fn time(&self) -> f64 {
        self.step as f64 * self.config.dt
    }

    pub fn force_at(&self, t: f64) -> DiscreteForm {
        self.force.at(t)
    }

    pub fn ports(&self) -> Result<PortSet> {
        ports(&self.state, &self.force.at(self.time()))
    }

    /// Diagnostics of the current state together with its port tuple.
    pub fn sample(&self) -> Result<(StepSample, PortSet)> {
        let p = self.ports()?;
        let v = velocity_form(&self.state)?;
        let sample = StepSample {
            step: self.step,
            time: self.time(),
            h: hamiltonian(&self.state)?,
            p_boundary: p.boundary_power()?,
            p_distributed: p.distributed_power()?,
            mass: integrate_top(self.state.mass())?,
            max_vorticity: exterior_derivative(&v)?.max_abs(),
            dirac_residual: dirac_residual(&p, &self.state)?.max(),
            power_sum: p.power_sum()?,
        };
        Ok((sample, p))
    }

    /// Advances one step, then applies the watchdog.
    pub fn advance(&mut self) -> Result<()> {
        let next = rk4_step(&self.state, &self.force, self.time(), self.config.dt, self.walls)?;
        let step = self.step + 1;
        if !next.first().is_finite() || !next.mass().is_finite() {
            return Err(Error::Watchdog {
                step,
                reason: "non-finite state".into(),
            });
        }
        let min = next.min_density();
        if min < self.config.watchdog.min_density {
            return Err(Error::Watchdog {
                step,
                reason: format!("density {min:e} below {}", self.config.watchdog.min_density),
            });
        }
        let grad = max_velocity_gradient(&next)?;
        if grad > self.config.watchdog.max_gradient {
            return Err(Error::Watchdog {
                step,
                reason: format!(
                    "velocity gradient {grad:e} above {}",
                    self.config.watchdog.max_gradient
                ),
            });
        }
        self.state = next;
        self.step = step;
        Ok(())
    }
}

/// Runs `config.steps` steps, sampling every step and keeping snapshots at
/// the output stride (including step 0 and the final step).
pub fn simulate(config: &SimConfig) -> Result<SimOutput> {
    let mut sim = Simulation::new(config.clone())?;
    Ok(run(&mut sim))
}

/// Drives an existing simulation to `config.steps`.
pub fn run(sim: &mut Simulation) -> SimOutput {
    let mut samples = Vec::new();
    let mut snapshots = Vec::new();
    let mut failure = None;
    let steps = sim.config.steps;
    let stride = sim.config.output_stride.max(1);
    loop {
        let (sample, p) = match sim.sample() {
            Ok(x) => x,
            Err(e) => {
                failure = Some(Failure {
                    step: sim.step,
                    last_good_step: sim.step.saturating_sub(1),
                    reason: e.to_string(),
                    watchdog: false,
                });
                break;
            }
        };
        samples.push(sample);
        if sim.step % stride == 0 || sim.step == steps {
            snapshots.push(Snapshot {
                step: sim.step,
                time: sim.time(),
                state: sim.state.clone(),
                ports: p,
            });
        }
        if sim.step >= steps {
            break;
        }
        if let Err(e) = sim.advance() {
            failure = Some(Failure {
                step: sim.step + 1,
                last_good_step: sim.step,
                watchdog: matches!(e, Error::Watchdog { .. } | Error::Density { .. }),
                reason: match e {
                    Error::Watchdog { .. } | Error::Density { .. } => {
                        format!("density/gradient watchdog: {e}")
                    }
                    _ => e.to_string(),
                },
            });
            break;
        }
    }
    let reports = energy_reports(&samples, sim.config.dt);
    SimOutput {
        samples,
        reports,
        snapshots,
        failure,
    }
}

/// Energy balance rows for an every-step sample series.
pub fn energy_reports(samples: &[StepSample], dt: f64) -> Vec<EnergyReport> {
    let h: Vec<f64> = samples.iter().map(|s| s.h).collect();
    let pb: Vec<f64> = samples.iter().map(|s| s.p_boundary).collect();
    let pd: Vec<f64> = samples.iter().map(|s| s.p_distributed).collect();
    let t0 = samples.first().map_or(0.0, |s| s.time);
    power_balance(t0, dt, &h, &pb, &pd).expect("series have equal length")
}

/// Trapezoid-rule time integral of an every-step series.
pub fn integrate_series(values: &[f64], dt: f64) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let inner: f64 = values[1..values.len() - 1].iter().sum();
    dt * (0.5 * (values[0] + values[values.len() - 1]) + inner)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::energetics::{from_velocity, to_velocity};
    use std::f64::consts::PI;

    fn config(repr: Representation, n: usize) -> SimConfig {
        SimConfig {
            grid: GridConfig {
                extents: [2.0 * PI, 2.0 * PI],
                resolution: [n, n],
                periodic: [true, true],
                metric: [1.0, 1.0],
            },
            representation: repr,
            velocity: VelocityInit::TaylorGreen { amplitude: 0.5 },
            density: DensityInit::Perturbed { amplitude: 0.1 },
            force: ForceConfig::default(),
            dt: 1e-2,
            steps: 10,
            output_stride: 5,
            seed: 0,
            watchdog: Watchdog::default(),
            tolerances: Tolerances::default(),
        }
    }

    #[test]
    fn config_validation() {
        let mut c = config(Representation::Velocity, 16);
        c.dt = 0.0;
        assert!(matches!(c.initial_state(), Err(Error::Config(_))));
        let mut c = config(Representation::Velocity, 16);
        c.dt = 1.0;
        assert!(matches!(c.initial_state(), Err(Error::Config(_))));
        let mut c = config(Representation::Velocity, 16);
        c.density = DensityInit::Perturbed { amplitude: 0.95 };
        assert!(matches!(c.initial_state(), Err(Error::Config(_))));
        let mut c = config(Representation::Velocity, 16);
        c.grid.resolution = [4, 16];
        assert!(c.initial_state().is_err());
    }

    #[test]
    fn config_round_trips_through_json() {
        let mut c = config(Representation::Momentum, 16);
        c.force = ForceConfig {
            shape: ForceShape::Trig {
                amplitude: 0.1,
                component: Component::X,
                wavenumber: [1.0, 0.0],
            },
            modulation: Modulation::Ramp { duration: 0.5 },
        };
        let text = serde_json::to_string(&c).unwrap();
        let back: SimConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn uniform_state_is_steady() {
        let mut c = config(Representation::Momentum, 16);
        c.velocity = VelocityInit::Uniform { velocity: [0.7, -0.2] };
        c.density = DensityInit::Constant { value: 1.0 };
        let s = c.initial_state().unwrap();
        let r = rhs_momentum(&s, &DiscreteForm::zeros(*s.grid(), 1).unwrap()).unwrap();
        assert!(r.max_abs() < 1e-14);
        let next = rk4_step(&s, &Force::zero(*s.grid()), 0.0, 1e-2, false).unwrap();
        assert!(next.max_diff(&s).unwrap() <= 1e-12);
    }

    #[test]
    fn force_on_fluid_at_rest() {
        let g = Grid::periodic([2.0 * PI, 2.0 * PI], [16, 16]).unwrap();
        let s = FlowState::momentum(DiscreteForm::zeros(g, 1).unwrap(), DiscreteForm::volume(g)).unwrap();
        let f = DiscreteForm::one_form_fn(g, |_, _| (1.0, 0.0));
        let r = rhs_momentum(&s, &f).unwrap();
        assert_eq!(r.first, f);
        assert_eq!(r.mass.max_abs(), 0.0);
    }

    #[test]
    fn velocity_rhs_matches_structure_map() {
        let s = config(Representation::Velocity, 32).initial_state().unwrap();
        let f = DiscreteForm::one_form_fn(*s.grid(), |x, _| (0.1 * x.sin(), 0.0));
        let direct = rhs_velocity(&s, &f).unwrap();
        let e = crate::energetics::var_deriv_velocity(&s).unwrap();
        let j = crate::energetics::jx_velocity(&s, &e).unwrap();
        let via_j = StateRate {
            first: j.first.add(&f.div_field(&s.density())).unwrap(),
            mass: j.mass,
        };
        assert!(direct.max_diff(&via_j).unwrap() < 1e-13);
    }

    #[test]
    fn momentum_rhs_is_conjugate_to_velocity_rhs() {
        let sv = config(Representation::Velocity, 128).initial_state().unwrap();
        let sm = from_velocity(&sv).unwrap();
        let f = DiscreteForm::one_form_fn(*sv.grid(), |x, _| (0.1 * x.sin(), 0.0));
        let pushed = crate::energetics::pushforward_phi(&sm, &rhs_momentum(&sm, &f).unwrap()).unwrap();
        let direct = rhs_velocity(&sv, &f).unwrap();
        assert!(pushed.max_diff(&direct).unwrap() <= 1e-6);
    }

    #[test]
    fn mass_change_equals_boundary_flux() {
        let g = Grid::bounded([1.0, 1.0], [48, 48]).unwrap();
        let v = DiscreteForm::one_form_fn(g, |x, y| (1.0 + 0.5 * y.sin(), 0.3 * x));
        let mu = DiscreteForm::top_form_fn(g, |x, y| 1.0 + 0.2 * (x - y).cos());
        let s = FlowState::velocity(v.clone(), mu.clone()).unwrap();
        let r = rhs_velocity(&s, &DiscreteForm::zeros(g, 1).unwrap()).unwrap();
        let flux = interior_product(&sharp(&v).unwrap(), &mu).unwrap();
        let out = crate::forms::boundary_integral(&crate::forms::trace(&flux).unwrap()).unwrap();
        assert!((integrate_top(&r.mass).unwrap() + out).abs() < 1e-8);
    }

    #[test]
    fn vorticity_of_shear_flow() {
        let g = Grid::periodic([2.0 * PI, 2.0 * PI], [64, 64]).unwrap();
        let s = FlowState::velocity(
            DiscreteForm::one_form_fn(g, |_, y| (y.sin(), 0.0)),
            DiscreteForm::volume(g),
        )
        .unwrap();
        let (w, res) = vorticity_diagnostic(&s, &DiscreteForm::zeros(g, 1).unwrap()).unwrap();
        assert!(w.max_diff(&DiscreteForm::top_form_fn(g, |_, y| -y.cos())).unwrap() < 1e-5);
        assert!(res < 1e-10);
        let phi = DiscreteForm::function_fn(g, |x, y| (x + 2.0 * y).sin());
        let grad = FlowState::velocity(exterior_derivative(&phi).unwrap(), DiscreteForm::volume(g)).unwrap();
        let (w, _) = vorticity_diagnostic(&grad, &DiscreteForm::zeros(g, 1).unwrap()).unwrap();
        assert!(w.max_abs() < 1e-12);
    }

    #[test]
    fn rk4_is_fourth_order_in_time() {
        let c = config(Representation::Velocity, 16);
        let s0 = c.initial_state().unwrap();
        let force = Force::zero(*s0.grid());
        let run = |dt: f64, n: usize| {
            let mut s = s0.clone();
            for k in 0..n {
                s = rk4_step(&s, &force, k as f64 * dt, dt, false).unwrap();
            }
            s
        };
        let reference = run(0.0125, 16);
        let e1 = run(0.1, 2).max_diff(&reference).unwrap();
        let e2 = run(0.05, 4).max_diff(&reference).unwrap();
        let order = (e1 / e2).log2();
        assert!(order > 3.7, "order {order}");
    }

    #[test]
    fn runs_are_deterministic() {
        let c = config(Representation::Momentum, 16);
        let a = simulate(&c).unwrap();
        let b = simulate(&c).unwrap();
        assert_eq!(a.snapshots.last().unwrap().state, b.snapshots.last().unwrap().state);
        assert_eq!(a.samples, b.samples);
        assert_eq!(a.snapshots.len(), 3);
        assert!(a.failure.is_none());
    }

    #[test]
    fn watchdog_stops_run_and_keeps_prefix() {
        let mut c = config(Representation::Velocity, 16);
        c.watchdog.max_gradient = 0.51;
        c.steps = 200;
        c.dt = 0.05;
        let out = simulate(&c).unwrap();
        let f = out.failure.expect("gradient grows past the threshold");
        assert!(f.watchdog);
        assert!(f.reason.contains("watchdog"));
        assert_eq!(out.samples.len(), f.last_good_step + 1);
    }

    #[test]
    fn representations_agree_after_a_few_steps() {
        let cm = config(Representation::Momentum, 32);
        let cv = config(Representation::Velocity, 32);
        let m = simulate(&cm).unwrap();
        let v = simulate(&cv).unwrap();
        let sm = to_velocity(&m.snapshots.last().unwrap().state).unwrap();
        let sv = &v.snapshots.last().unwrap().state;
        assert!(sm.max_diff(sv).unwrap() < 1e-4);
    }

    #[test]
    fn series_integral_is_trapezoid() {
        assert_eq!(integrate_series(&[1.0, 2.0, 3.0], 0.5), 2.0);
        assert_eq!(integrate_series(&[4.0], 0.5), 0.0);
    }
}
