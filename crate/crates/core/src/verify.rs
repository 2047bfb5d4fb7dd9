//! Identity suite with grid-refinement order fits.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::algebra::{
    coadjoint_defect, diamond_defect, interconnection_defect, lie_bracket_g, semidirect_defect,
    surface_phi, AdvectedKind, AdvectedQuantity, AlgebraElement, DualAlgebraElement,
    SemidirectDual, SemidirectElement,
};
use crate::energetics::{
    jx_momentum, jx_velocity, pullback_phi, pushforward_phi, from_velocity, EffortPair, FlowState,
};
use crate::error::Result;
use crate::fields::{self, FieldRng};
use crate::forms::{
    hodge_star, stencil::partial, vol_flat, wedge, Axis, DiscreteForm, Grid, VectorField,
};

/// Values below this are treated as roundoff and excluded from order fits.
pub const EXACT_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Domain {
    Periodic,
    Bounded,
}

impl Domain {
    pub fn name(self) -> &'static str {
        match self {
            Domain::Periodic => "periodic",
            Domain::Bounded => "bounded",
        }
    }
}

/// The checked identities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Identity {
    /// `α∧*β = ⟨α, β⟩ μ_vol` for forms of every degree.
    HodgeInner,
    /// `Ψ_vol(−[ω̂, β̂]) = [ω, β]_𝔤`.
    BracketIsomorphism,
    /// `⟨ad*_ω α|β⟩ = ⟨α|ad_ω β⟩ + ∮ η`.
    CoadjointDuality,
    /// `⟨φ*_a ā|ω⟩ = ⟨ā|φ_a ω⟩ + ∮ η` for a top-form `a`.
    InterconnectionTop,
    /// The same for a function `a`; the surface form vanishes identically.
    InterconnectionFunction,
    /// `⟨ā ⋄ a|ω⟩ = ±(⟨ā|φ_a ω⟩ + ∮ η)` over both kinds of `a`.
    DiamondDuality,
    /// Coadjoint duality on the semidirect product.
    SemidirectDuality,
    /// `J̃ = Φ_* ∘ J ∘ Φ*` at matched states.
    RepresentationConjugacy,
}

impl Identity {
    pub const ALL: [Identity; 8] = [
        Identity::HodgeInner,
        Identity::BracketIsomorphism,
        Identity::CoadjointDuality,
        Identity::InterconnectionTop,
        Identity::InterconnectionFunction,
        Identity::DiamondDuality,
        Identity::SemidirectDuality,
        Identity::RepresentationConjugacy,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Identity::HodgeInner => "hodge_inner",
            Identity::BracketIsomorphism => "bracket_isomorphism",
            Identity::CoadjointDuality => "coadjoint_duality",
            Identity::InterconnectionTop => "interconnection_top",
            Identity::InterconnectionFunction => "interconnection_function",
            Identity::DiamondDuality => "diamond_duality",
            Identity::SemidirectDuality => "semidirect_duality",
            Identity::RepresentationConjugacy => "representation_conjugacy",
        }
    }

    /// Duality defects are relative; the two map comparisons are max-norm.
    pub fn is_duality(self) -> bool {
        !matches!(
            self,
            Identity::BracketIsomorphism | Identity::RepresentationConjugacy
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyTolerances {
    #[serde(default = "default_periodic")]
    pub periodic_duality: f64,
    #[serde(default = "default_bounded")]
    pub bounded_duality: f64,
    /// Max-norm bound for the bracket isomorphism and representation conjugacy.
    #[serde(default = "default_map")]
    pub map_max_norm: f64,
    /// Minimum fitted order for identities limited by truncation error.
    #[serde(default = "default_order")]
    pub min_order: f64,
}

fn default_periodic() -> f64 {
    1e-10
}

fn default_bounded() -> f64 {
    1e-8
}

fn default_map() -> f64 {
    1e-6
}

fn default_order() -> f64 {
    3.0
}

impl Default for VerifyTolerances {
    fn default() -> Self {
        VerifyTolerances {
            periodic_duality: default_periodic(),
            bounded_duality: default_bounded(),
            map_max_norm: default_map(),
            min_order: default_order(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyConfig {
    #[serde(default)]
    pub seed: u64,
    /// Random draws per identity; the worst one is reported.
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default = "default_resolutions")]
    pub resolutions: Vec<usize>,
    #[serde(default = "default_domains")]
    pub domains: Vec<Domain>,
    #[serde(default = "default_identities")]
    pub identities: Vec<Identity>,
    #[serde(default = "default_periodic_extents")]
    pub periodic_extents: [f64; 2],
    #[serde(default = "default_bounded_extents")]
    pub bounded_extents: [f64; 2],
    #[serde(default = "default_metric")]
    pub metric: [f64; 2],
    /// Density variation of the random states used for conjugacy.
    #[serde(default = "default_density_amplitude")]
    pub density_amplitude: f64,
    #[serde(default)]
    pub tolerances: VerifyTolerances,
}

fn default_samples() -> usize {
    3
}

fn default_resolutions() -> Vec<usize> {
    vec![32, 64, 128]
}

fn default_domains() -> Vec<Domain> {
    vec![Domain::Periodic, Domain::Bounded]
}

fn default_identities() -> Vec<Identity> {
    Identity::ALL.to_vec()
}

fn default_periodic_extents() -> [f64; 2] {
    [2.0 * PI, 2.0 * PI]
}

fn default_bounded_extents() -> [f64; 2] {
    [1.0, 1.0]
}

fn default_metric() -> [f64; 2] {
    [1.0, 1.0]
}

fn default_density_amplitude() -> f64 {
    0.1
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            seed: 0,
            samples: default_samples(),
            resolutions: default_resolutions(),
            domains: default_domains(),
            identities: default_identities(),
            periodic_extents: default_periodic_extents(),
            bounded_extents: default_bounded_extents(),
            metric: default_metric(),
            density_amplitude: default_density_amplitude(),
            tolerances: VerifyTolerances::default(),
        }
    }
}

impl VerifyConfig {
    pub fn grid(&self, domain: Domain, n: usize) -> Result<Grid> {
        match domain {
            Domain::Periodic => Grid::new(self.periodic_extents, [n, n], [true, true], self.metric),
            Domain::Bounded => Grid::new(self.bounded_extents, [n, n], [false, false], self.metric),
        }
    }
}

/// One identity evaluated at one resolution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Measurement {
    pub resolution: usize,
    /// Relative defect (duality) or max-norm difference (maps); worst draw.
    pub value: f64,
    /// Largest absolute boundary term that entered the balance.
    pub surface: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub identity: Identity,
    pub domain: Domain,
    pub measurements: Vec<Measurement>,
    /// Least-squares slope of `log value` against `log h`; absent when the
    /// identity holds to roundoff or fewer than two resolutions were run.
    pub order: Option<f64>,
    pub tolerance: f64,
    pub pass: bool,
    pub failures: Vec<String>,
}

impl IdentityReport {
    pub fn finest(&self) -> Option<&Measurement> {
        self.measurements.iter().max_by_key(|m| m.resolution)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub config: VerifyConfig,
    pub identities: Vec<IdentityReport>,
    pub pass: bool,
}

impl VerifyReport {
    pub fn failures(&self) -> Vec<String> {
        self.identities
            .iter()
            .flat_map(|r| r.failures.iter().cloned())
            .collect()
    }

    pub fn get(&self, identity: Identity, domain: Domain) -> Option<&IdentityReport> {
        self.identities
            .iter()
            .find(|r| r.identity == identity && r.domain == domain)
    }
}

fn alg(f: DiscreteForm) -> AlgebraElement {
    AlgebraElement::new(f).expect("1-form")
}

fn dual(f: DiscreteForm) -> DualAlgebraElement {
    DualAlgebraElement::new(f).expect("1-form")
}

fn one(g: Grid, rng: &mut FieldRng) -> DiscreteForm {
    fields::random_one_form(g, rng)
}

/// Max-norm of `α∧*β − ⟨α,β⟩ μ_vol` relative to the largest term, with the
/// pointwise inner product computed from the inverse metric directly.
pub fn hodge_inner_defect(a: &DiscreteForm, b: &DiscreteForm) -> Result<f64> {
    let g = *a.grid();
    let [m1, m2] = g.metric();
    let s = g.volume_factor();
    let lhs = wedge(a, &hodge_star(b))?;
    let inner = match a.degree() {
        0 => a.comp(0) * b.comp(0),
        1 => a.comp(0) * b.comp(0) / m1 + a.comp(1) * b.comp(1) / m2,
        _ => a.comp(0) * b.comp(0) / (m1 * m2),
    };
    let rhs = inner * s;
    let scale = lhs.comp(0).iter().fold(0.0f64, |m, x| m.max(x.abs())).max(f64::MIN_POSITIVE);
    let diff = (lhs.comp(0) - &rhs).iter().fold(0.0f64, |m, x| m.max(x.abs()));
    Ok(diff / scale)
}

/// Coordinate bracket of vector fields `L_u w = u·∇w − w·∇u`.
pub fn vector_bracket(u: &VectorField, w: &VectorField) -> VectorField {
    let g = *u.grid();
    let comp = |i: usize| {
        let (ui, wi) = if i == 0 { (u.x(), w.x()) } else { (u.y(), w.y()) };
        u.x() * &partial(wi, Axis::X, &g) + u.y() * &partial(wi, Axis::Y, &g)
            - w.x() * &partial(ui, Axis::X, &g)
            - w.y() * &partial(ui, Axis::Y, &g)
    };
    VectorField::new(g, comp(0), comp(1)).expect("same grid")
}

/// Max-norm of `Ψ_vol(−L_ω̂ β̂) − [ω, β]_𝔤`.
pub fn bracket_isomorphism_defect(omega: &AlgebraElement, beta: &AlgebraElement) -> Result<f64> {
    let lhs = vol_flat(&vector_bracket(&omega.vector(), &beta.vector())).neg();
    lhs.max_diff(lie_bracket_g(omega, beta)?.form())
}

/// Max-norm of `J̃(ẽ) − Φ_* J(Φ* ẽ)` at the velocity state `x̃`.
pub fn conjugacy_defect(state: &FlowState, e: &EffortPair) -> Result<f64> {
    let momentum = from_velocity(state)?;
    let direct = jx_velocity(state, e)?;
    let via = pushforward_phi(&momentum, &jx_momentum(&momentum, &pullback_phi(state, e)?)?)?;
    direct.max_diff(&via)
}

/// Worst value and surface term of one identity over `samples` draws.
pub fn measure(
    identity: Identity,
    grid: Grid,
    samples: usize,
    density_amplitude: f64,
    rng: &mut FieldRng,
) -> Result<(f64, f64)> {
    let mut worst = 0.0f64;
    let mut surface = 0.0f64;
    for _ in 0..samples.max(1) {
        let (v, s) = match identity {
            Identity::HodgeInner => {
                let mut m = 0.0f64;
                for k in 0..=2 {
                    let a = fields::random_form(grid, k, rng);
                    let b = fields::random_form(grid, k, rng);
                    m = m.max(hodge_inner_defect(&a, &b)?);
                }
                (m, 0.0)
            }
            Identity::BracketIsomorphism => {
                (bracket_isomorphism_defect(&alg(one(grid, rng)), &alg(one(grid, rng)))?, 0.0)
            }
            Identity::CoadjointDuality => {
                let d = coadjoint_defect(
                    &alg(one(grid, rng)),
                    &dual(one(grid, rng)),
                    &alg(one(grid, rng)),
                )?;
                (d.relative(), d.surface.abs())
            }
            Identity::InterconnectionTop | Identity::InterconnectionFunction => {
                let kind = if identity == Identity::InterconnectionTop {
                    AdvectedKind::Top
                } else {
                    AdvectedKind::Function
                };
                let a = AdvectedQuantity::new(fields::random_form(grid, kind.degree(), rng), kind)?;
                let abar = fields::random_form(grid, a.dual_degree(), rng);
                let omega = alg(one(grid, rng));
                let d = interconnection_defect(&a, &omega, &abar)?;
                if kind == AdvectedKind::Function {
                    // the surface form itself is identically zero in this case
                    let eta = surface_phi(&a, &omega, &abar)?;
                    (d.relative().max(eta.max_abs()), d.surface.abs())
                } else {
                    (d.relative(), d.surface.abs())
                }
            }
            Identity::DiamondDuality => {
                let mut m = 0.0f64;
                let mut s = 0.0f64;
                for kind in [AdvectedKind::Top, AdvectedKind::Function] {
                    let a =
                        AdvectedQuantity::new(fields::random_form(grid, kind.degree(), rng), kind)?;
                    let abar = fields::random_form(grid, a.dual_degree(), rng);
                    let d = diamond_defect(&abar, &a, &alg(one(grid, rng)))?;
                    m = m.max(d.relative());
                    s = s.max(d.surface.abs());
                }
                (m, s)
            }
            Identity::SemidirectDuality => {
                let kind = AdvectedKind::Top;
                let a = AdvectedQuantity::new(fields::random_form(grid, 2, rng), kind)?;
                let y = SemidirectDual::new(dual(one(grid, rng)), a)?;
                let x1 = SemidirectElement::new(
                    alg(one(grid, rng)),
                    fields::random_form(grid, 0, rng),
                )?;
                let x2 = SemidirectElement::new(
                    alg(one(grid, rng)),
                    fields::random_form(grid, 0, rng),
                )?;
                let d = semidirect_defect(&x1, &y, &x2)?;
                (d.relative(), d.surface.abs())
            }
            Identity::RepresentationConjugacy => {
                let state = FlowState::velocity(
                    one(grid, rng),
                    fields::random_mass(grid, density_amplitude, rng),
                )?;
                let e = EffortPair::new(one(grid, rng), fields::random_form(grid, 0, rng))?;
                (conjugacy_defect(&state, &e)?, 0.0)
            }
        };
        worst = worst.max(v);
        surface = surface.max(s);
    }
    Ok((worst, surface))
}

/// Least-squares slope of `log value` against `log h` (positive for
/// convergent sequences).
pub fn fit_order(points: &[(f64, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|(h, v)| *h > 0.0 && *v > 0.0)
        .map(|(h, v)| (h.ln(), v.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    if sxx == 0.0 {
        None
    } else {
        Some(sxy / sxx)
    }
}

fn tolerance(config: &VerifyConfig, identity: Identity, domain: Domain) -> f64 {
    if !identity.is_duality() {
        config.tolerances.map_max_norm
    } else if domain == Domain::Periodic {
        config.tolerances.periodic_duality
    } else {
        config.tolerances.bounded_duality
    }
}

/// Runs one identity on one domain over all resolutions. The tolerance is
/// applied at the finest resolution; an order fit is required whenever the
/// finest value sits above roundoff.
pub fn verify_identity(config: &VerifyConfig, identity: Identity, domain: Domain) -> Result<IdentityReport> {
    let mut resolutions = config.resolutions.clone();
    resolutions.sort_unstable();
    let mut measurements = Vec::new();
    let mut points = Vec::new();
    for &n in &resolutions {
        let grid = config.grid(domain, n)?;
        // same fields at every resolution
        let mut rng = fields::rng(config.seed);
        let (value, surface) = measure(identity, grid, config.samples, config.density_amplitude, &mut rng)?;
        points.push((grid.min_spacing(), value));
        measurements.push(Measurement {
            resolution: n,
            value,
            surface,
        });
    }
    let tol = tolerance(config, identity, domain);
    let finest = measurements.last().map_or(0.0, |m| m.value);
    let limited = finest > EXACT_FLOOR;
    let order = if limited { fit_order(&points) } else { None };
    let mut failures = Vec::new();
    let label = format!("{} ({})", identity.name(), domain.name());
    if !(finest <= tol) {
        failures.push(format!("{label}: {finest:.3e} exceeds {tol:.1e}"));
    }
    if limited && resolutions.len() >= 2 {
        match order {
            Some(p) if p >= config.tolerances.min_order => {}
            Some(p) => failures.push(format!(
                "{label}: fitted order {p:.2} below {}",
                config.tolerances.min_order
            )),
            None => failures.push(format!("{label}: order fit unavailable")),
        }
    }
    Ok(IdentityReport {
        identity,
        domain,
        measurements,
        order,
        tolerance: tol,
        pass: failures.is_empty(),
        failures,
    })
}

/// Runs the full suite.
pub fn verify(config: &VerifyConfig) -> Result<VerifyReport> {
    let mut identities = Vec::new();
    for &domain in &config.domains {
        for &identity in &config.identities {
            identities.push(verify_identity(config, identity, domain)?);
        }
    }
    let pass = identities.iter().all(|r| r.pass);
    Ok(VerifyReport {
        config: config.clone(),
        identities,
        pass,
    })
}
