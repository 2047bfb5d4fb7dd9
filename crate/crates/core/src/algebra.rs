//! Lie-algebraic operators on `𝔤 = Ω¹`, its dual, the advected-quantity
//! spaces, and the semidirect product `𝔰 = 𝔤 ⋉ V`, with their surface terms.

use crate::error::{Error, Result};
use crate::forms::{
    boundary_integral, boundary_scale, divergence, exterior_derivative, hodge_star,
    interior_product, lie_derivative, pairing, pairing_scale, trace, vol_flat, vol_sharp, wedge,
    DiscreteForm, Grid, VectorField, N,
};

fn expect_degree(op: &'static str, form: &DiscreteForm, degree: usize) -> Result<()> {
    if form.degree() == degree {
        Ok(())
    } else {
        Err(Error::Degree {
            op,
            degree: form.degree(),
        })
    }
}

macro_rules! role {
    ($(#[$doc:meta])* $name:ident, $op:literal) => {
        $(#[$doc])*
        #[derive(Debug, Clone, PartialEq)]
        pub struct $name(DiscreteForm);

        impl $name {
            pub fn new(form: DiscreteForm) -> Result<Self> {
                expect_degree($op, &form, N - 1)?;
                Ok($name(form))
            }

            pub fn form(&self) -> &DiscreteForm {
                &self.0
            }

            pub fn into_form(self) -> DiscreteForm {
                self.0
            }

            pub fn grid(&self) -> &Grid {
                self.0.grid()
            }
        }
    };
}

role!(
    /// An element `ω ∈ 𝔤`, an (n−1)-form standing for the vector field `ω̂`.
    AlgebraElement,
    "algebra element"
);
role!(
    /// An element `α ∈ 𝔤*`, a 1-form (momentum).
    DualAlgebraElement,
    "dual algebra element"
);

impl AlgebraElement {
    /// `ω̂ = Ψ_vol⁻¹(ω)`.
    pub fn vector(&self) -> VectorField {
        vol_sharp(&self.0).expect("degree checked on construction")
    }

    pub fn from_vector(v: &VectorField) -> Self {
        AlgebraElement(vol_flat(v))
    }
}

/// Kind of advected quantity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdvectedKind {
    /// A top form, such as the mass form `μ`.
    Top,
    /// A function, such as the entropy `s`.
    Function,
}

impl AdvectedKind {
    pub fn degree(self) -> usize {
        match self {
            AdvectedKind::Top => N,
            AdvectedKind::Function => 0,
        }
    }
}

/// An advected quantity `a ∈ V*`.
#[derive(Debug, Clone, PartialEq)]
pub struct AdvectedQuantity {
    a: DiscreteForm,
    kind: AdvectedKind,
}

impl AdvectedQuantity {
    pub fn new(a: DiscreteForm, kind: AdvectedKind) -> Result<Self> {
        expect_degree("advected quantity", &a, kind.degree())?;
        Ok(AdvectedQuantity { a, kind })
    }

    /// Infers the kind from the degree (0 or n).
    pub fn from_form(a: DiscreteForm) -> Result<Self> {
        let kind = match a.degree() {
            0 => AdvectedKind::Function,
            N => AdvectedKind::Top,
            degree => {
                return Err(Error::Degree {
                    op: "advected quantity",
                    degree,
                })
            }
        };
        Ok(AdvectedQuantity { a, kind })
    }

    pub fn form(&self) -> &DiscreteForm {
        &self.a
    }

    pub fn kind(&self) -> AdvectedKind {
        self.kind
    }

    /// Degree of the dual quantities `ā ∈ V`.
    pub fn dual_degree(&self) -> usize {
        N - self.a.degree()
    }
}

/// `(ω, ā) ∈ 𝔰 = 𝔤 × V`.
#[derive(Debug, Clone, PartialEq)]
pub struct SemidirectElement {
    pub omega: AlgebraElement,
    pub abar: DiscreteForm,
}

/// `(α, a) ∈ 𝔰* = 𝔤* × V*`.
#[derive(Debug, Clone, PartialEq)]
pub struct SemidirectDual {
    pub alpha: DualAlgebraElement,
    pub a: AdvectedQuantity,
}

impl SemidirectElement {
    pub fn new(omega: AlgebraElement, abar: DiscreteForm) -> Result<Self> {
        check_grids("semidirect", omega.grid(), abar.grid())?;
        Ok(SemidirectElement { omega, abar })
    }
}

impl SemidirectDual {
    pub fn new(alpha: DualAlgebraElement, a: AdvectedQuantity) -> Result<Self> {
        check_grids("semidirect", alpha.grid(), a.form().grid())?;
        Ok(SemidirectDual { alpha, a })
    }
}

fn check_grids(op: &'static str, a: &Grid, b: &Grid) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::GridMismatch { op })
    }
}

/// `(−1)^(c+1)` with `c = k(n−k)`.
pub fn diamond_sign(k: usize) -> f64 {
    if (k * (N - k)) % 2 == 0 {
        -1.0
    } else {
        1.0
    }
}

/// `[ω, β]_𝔤 = −L_ω̂ β + div(ω̂) β`.
pub fn lie_bracket_g(omega: &AlgebraElement, beta: &AlgebraElement) -> Result<AlgebraElement> {
    check_grids("lie_bracket_g", omega.grid(), beta.grid())?;
    let u = omega.vector();
    let div = divergence(&u);
    let out = beta
        .form()
        .mul_field(div.comp(0))
        .sub(&lie_derivative(&u, beta.form())?)?;
    Ok(AlgebraElement(out))
}

/// `ad_ω β = [ω, β]_𝔤`.
pub fn ad_g(omega: &AlgebraElement, beta: &AlgebraElement) -> Result<AlgebraElement> {
    lie_bracket_g(omega, beta)
}

/// `ad*_ω α = L_ω̂ α + div(ω̂) α`.
pub fn ad_star_g(omega: &AlgebraElement, alpha: &DualAlgebraElement) -> Result<DualAlgebraElement> {
    check_grids("ad_star_g", omega.grid(), alpha.grid())?;
    let u = omega.vector();
    let div = divergence(&u);
    let out = lie_derivative(&u, alpha.form())?.add(&alpha.form().mul_field(div.comp(0)))?;
    Ok(DualAlgebraElement(out))
}

/// Surface form `η_{ad_ω}(α, β) = ι_ω̂(α∧β)`.
pub fn surface_ad(
    omega: &AlgebraElement,
    alpha: &DualAlgebraElement,
    beta: &AlgebraElement,
) -> Result<DiscreteForm> {
    check_grids("surface_ad", omega.grid(), alpha.grid())?;
    interior_product(&omega.vector(), &wedge(alpha.form(), beta.form())?)
}

/// `φ_a(ω) = L_ω̂ a`; the advection law reads `ȧ = −φ_a(ω)`.
pub fn phi_a(a: &AdvectedQuantity, omega: &AlgebraElement) -> Result<AdvectedQuantity> {
    check_grids("phi_a", a.form().grid(), omega.grid())?;
    Ok(AdvectedQuantity {
        a: lie_derivative(&omega.vector(), &a.a)?,
        kind: a.kind,
    })
}

fn check_dual(op: &'static str, a: &AdvectedQuantity, abar: &DiscreteForm) -> Result<()> {
    check_grids(op, a.form().grid(), abar.grid())?;
    if abar.degree() != a.dual_degree() {
        return Err(Error::DegreeMismatch {
            op,
            left: abar.degree(),
            right: a.form().degree(),
        });
    }
    Ok(())
}

/// Formal dual of `φ_a`.
///
/// For a top form `a` and a function `ā`: `φ*_a(ā) = −(*a) dā`.
/// For a function `a` and a top form `ā`: `φ*_a(ā) = (*ā) da`.
pub fn phi_a_star(a: &AdvectedQuantity, abar: &DiscreteForm) -> Result<DualAlgebraElement> {
    check_dual("phi_a_star", a, abar)?;
    let out = match a.kind {
        AdvectedKind::Top => exterior_derivative(abar)?
            .mul_field(hodge_star(&a.a).comp(0))
            .neg(),
        AdvectedKind::Function => exterior_derivative(&a.a)?.mul_field(hodge_star(abar).comp(0)),
    };
    Ok(DualAlgebraElement(out))
}

/// Surface form `η_{φ_a}(ω, ā)` accompanying `phi_a_star`: `−(*a) ω∧ā` for a
/// top-form quantity, identically zero for a function.
pub fn surface_phi(
    a: &AdvectedQuantity,
    omega: &AlgebraElement,
    abar: &DiscreteForm,
) -> Result<DiscreteForm> {
    check_dual("surface_phi", a, abar)?;
    check_grids("surface_phi", omega.grid(), abar.grid())?;
    match a.kind {
        AdvectedKind::Top => Ok(wedge(omega.form(), abar)?
            .mul_field(hodge_star(&a.a).comp(0))
            .neg()),
        AdvectedKind::Function => DiscreteForm::zeros(*abar.grid(), N - 1),
    }
}

/// `ā ⋄ a = (−1)^(c+1) φ*_a(ā)`, `c = k(n−k)`, `k = deg ā`.
pub fn diamond(abar: &DiscreteForm, a: &AdvectedQuantity) -> Result<DualAlgebraElement> {
    let phi = phi_a_star(a, abar)?;
    Ok(DualAlgebraElement(phi.0.scale(diamond_sign(abar.degree()))))
}

fn check_semidirect(op: &'static str, x: &SemidirectElement, y: &SemidirectElement) -> Result<()> {
    check_grids(op, x.omega.grid(), y.omega.grid())?;
    if x.abar.degree() != y.abar.degree() {
        return Err(Error::DegreeMismatch {
            op,
            left: x.abar.degree(),
            right: y.abar.degree(),
        });
    }
    Ok(())
}

/// `[(ω₁, ā₁), (ω₂, ā₂)] = ([ω₁, ω₂]_𝔤, L_ω̂₂ ā₁ − L_ω̂₁ ā₂)`.
pub fn lie_bracket_s(x: &SemidirectElement, y: &SemidirectElement) -> Result<SemidirectElement> {
    check_semidirect("lie_bracket_s", x, y)?;
    let omega = lie_bracket_g(&x.omega, &y.omega)?;
    let abar = lie_derivative(&y.omega.vector(), &x.abar)?
        .sub(&lie_derivative(&x.omega.vector(), &y.abar)?)?;
    Ok(SemidirectElement { omega, abar })
}

/// `ad*_{(ω, ā)}(α, a) = (ad*_ω α + ā ⋄ a, L_ω̂ a)`.
pub fn ad_s_star(x: &SemidirectElement, dual: &SemidirectDual) -> Result<SemidirectDual> {
    let alpha = ad_star_g(&x.omega, &dual.alpha)?
        .0
        .add(&diamond(&x.abar, &dual.a)?.0)?;
    let a = phi_a(&dual.a, &x.omega)?;
    Ok(SemidirectDual {
        alpha: DualAlgebraElement(alpha),
        a,
    })
}

/// Surface form of the semidirect coadjoint duality:
/// `η_{ad_ω₁}(α, ω₂) + (−1)^(c+1) η_{φ_a}(ω₂, ā₁) − ι_ω̂₂(a∧ā₁) + ι_ω̂₁(a∧ā₂)`.
pub fn surface_ad_s(
    x1: &SemidirectElement,
    dual: &SemidirectDual,
    x2: &SemidirectElement,
) -> Result<DiscreteForm> {
    check_semidirect("surface_ad_s", x1, x2)?;
    let a = dual.a.form();
    let sign = diamond_sign(x1.abar.degree());
    surface_ad(&x1.omega, &dual.alpha, &x2.omega)?
        .axpy(sign, &surface_phi(&dual.a, &x2.omega, &x1.abar)?)?
        .sub(&interior_product(&x2.omega.vector(), &wedge(a, &x1.abar)?)?)?
        .add(&interior_product(&x1.omega.vector(), &wedge(a, &x2.abar)?)?)
}

/// `⟨(α, a) | (ω, ā)⟩_𝔰 = ∫ α∧ω + a∧ā`.
pub fn pairing_s(dual: &SemidirectDual, x: &SemidirectElement) -> Result<f64> {
    Ok(pairing(dual.alpha.form(), x.omega.form())? + pairing(dual.a.form(), &x.abar)?)
}

/// A duality relation `lhs = rhs + ∮ surface`, evaluated numerically.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Defect {
    pub lhs: f64,
    pub rhs: f64,
    pub surface: f64,
    /// Sum of the L¹ magnitudes of the integrands, used for relative error.
    pub scale: f64,
}

impl Defect {
    pub fn value(&self) -> f64 {
        self.lhs - self.rhs - self.surface
    }

    pub fn relative(&self) -> f64 {
        if self.scale > 0.0 {
            self.value().abs() / self.scale
        } else {
            self.value().abs()
        }
    }
}

fn surface_terms(eta: &DiscreteForm) -> Result<(f64, f64)> {
    let t = trace(eta)?;
    Ok((boundary_integral(&t)?, boundary_scale(&t)?))
}

/// `⟨ad*_ω α | β⟩ = ⟨α | ad_ω β⟩ + ∮ η_{ad_ω}(α, β)`.
pub fn coadjoint_defect(
    omega: &AlgebraElement,
    alpha: &DualAlgebraElement,
    beta: &AlgebraElement,
) -> Result<Defect> {
    let ads = ad_star_g(omega, alpha)?;
    let ad = ad_g(omega, beta)?;
    let (surface, sscale) = surface_terms(&surface_ad(omega, alpha, beta)?)?;
    Ok(Defect {
        lhs: pairing(ads.form(), beta.form())?,
        rhs: pairing(alpha.form(), ad.form())?,
        surface,
        scale: pairing_scale(ads.form(), beta.form())?
            + pairing_scale(alpha.form(), ad.form())?
            + sscale,
    })
}

/// `⟨φ*_a(ā) | ω⟩ = ⟨ā | φ_a(ω)⟩ + ∮ η_{φ_a}(ω, ā)`.
pub fn interconnection_defect(
    a: &AdvectedQuantity,
    omega: &AlgebraElement,
    abar: &DiscreteForm,
) -> Result<Defect> {
    let star = phi_a_star(a, abar)?;
    let phi = phi_a(a, omega)?;
    let (surface, sscale) = surface_terms(&surface_phi(a, omega, abar)?)?;
    Ok(Defect {
        lhs: pairing(star.form(), omega.form())?,
        rhs: pairing(abar, phi.form())?,
        surface,
        scale: pairing_scale(star.form(), omega.form())? + pairing_scale(abar, phi.form())? + sscale,
    })
}

/// `⟨ā ⋄ a | ω⟩ = (−1)^(c+1) (⟨ā | φ_a(ω)⟩ + ∮ η_{φ_a}(ω, ā))`.
pub fn diamond_defect(
    abar: &DiscreteForm,
    a: &AdvectedQuantity,
    omega: &AlgebraElement,
) -> Result<Defect> {
    let sign = diamond_sign(abar.degree());
    let dia = diamond(abar, a)?;
    let phi = phi_a(a, omega)?;
    let (surface, sscale) = surface_terms(&surface_phi(a, omega, abar)?)?;
    Ok(Defect {
        lhs: pairing(dia.form(), omega.form())?,
        rhs: sign * pairing(abar, phi.form())?,
        surface: sign * surface,
        scale: pairing_scale(dia.form(), omega.form())? + pairing_scale(abar, phi.form())? + sscale,
    })
}

/// `⟨ad*_{x₁} y | x₂⟩_𝔰 = ⟨y | ad_{x₁} x₂⟩_𝔰 + ∮ η`.
pub fn semidirect_defect(
    x1: &SemidirectElement,
    dual: &SemidirectDual,
    x2: &SemidirectElement,
) -> Result<Defect> {
    let ads = ad_s_star(x1, dual)?;
    let ad = lie_bracket_s(x1, x2)?;
    let (surface, sscale) = surface_terms(&surface_ad_s(x1, dual, x2)?)?;
    let scale = pairing_scale(ads.alpha.form(), x2.omega.form())?
        + pairing_scale(ads.a.form(), &x2.abar)?
        + pairing_scale(dual.alpha.form(), ad.omega.form())?
        + pairing_scale(dual.a.form(), &ad.abar)?
        + sscale;
    Ok(Defect {
        lhs: pairing_s(&ads, x2)?,
        rhs: pairing_s(dual, &ad)?,
        surface,
        scale,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{random_form, random_one_form, rng};
    use std::f64::consts::PI;

    fn torus(n: usize) -> Grid {
        Grid::periodic([2.0 * PI, 2.0 * PI], [n, n]).unwrap()
    }

    fn one(g: Grid, f: impl Fn(f64, f64) -> (f64, f64)) -> DiscreteForm {
        DiscreteForm::one_form_fn(g, f)
    }

    fn alg(f: DiscreteForm) -> AlgebraElement {
        AlgebraElement::new(f).unwrap()
    }

    fn dual(f: DiscreteForm) -> DualAlgebraElement {
        DualAlgebraElement::new(f).unwrap()
    }

    #[test]
    fn roles_check_degree() {
        let g = torus(16);
        assert!(AlgebraElement::new(DiscreteForm::volume(g)).is_err());
        assert!(AdvectedQuantity::new(DiscreteForm::volume(g), AdvectedKind::Function).is_err());
        assert!(AdvectedQuantity::from_form(one(g, |_, _| (1.0, 0.0))).is_err());
    }

    #[test]
    fn bracket_examples() {
        let g = torus(64);
        let dy = alg(one(g, |_, _| (0.0, 1.0)));
        assert!(lie_bracket_g(&dy, &dy).unwrap().form().max_abs() < 1e-12);
        let beta = alg(one(g, |x, _| (0.0, x.sin())));
        let b = lie_bracket_g(&dy, &beta).unwrap();
        assert!(b.form().max_diff(&one(g, |x, _| (0.0, -x.cos()))).unwrap() < 1e-5);
    }

    #[test]
    fn bracket_rejects_grid_mismatch() {
        let a = alg(one(torus(16), |_, _| (0.0, 1.0)));
        let b = alg(one(torus(32), |_, _| (0.0, 1.0)));
        assert!(matches!(lie_bracket_g(&a, &b), Err(Error::GridMismatch { .. })));
    }

    #[test]
    fn coadjoint_examples() {
        let g = torus(64);
        let c = ad_star_g(&alg(one(g, |_, _| (0.3, 1.0))), &dual(one(g, |_, _| (2.0, -1.0)))).unwrap();
        assert!(c.form().max_abs() < 1e-12);
        let c = ad_star_g(&alg(one(g, |_, _| (0.0, 1.0))), &dual(one(g, |x, _| (x.sin(), 0.0)))).unwrap();
        assert!(c.form().max_diff(&one(g, |x, _| (x.cos(), 0.0))).unwrap() < 1e-5);
    }

    #[test]
    fn surface_ad_examples() {
        let g = Grid::bounded([1.0, 1.0], [9, 9]).unwrap();
        let eta = surface_ad(
            &alg(one(g, |_, _| (0.0, 1.0))),
            &dual(one(g, |_, _| (1.0, 0.0))),
            &alg(one(g, |_, _| (0.0, 1.0))),
        )
        .unwrap();
        assert_eq!(eta, one(g, |_, _| (0.0, 1.0)));
        let zero = surface_ad(
            &alg(DiscreteForm::zeros(g, 1).unwrap()),
            &dual(one(g, |x, _| (x, 1.0))),
            &alg(one(g, |_, y| (y, 0.0))),
        )
        .unwrap();
        assert_eq!(zero.max_abs(), 0.0);
    }

    #[test]
    fn phi_examples() {
        let g = torus(64);
        let c = AdvectedQuantity::from_form(DiscreteForm::function_fn(g, |_, _| 4.0)).unwrap();
        let w = alg(one(g, |x, y| (x.cos(), y.sin())));
        assert!(phi_a(&c, &w).unwrap().form().max_abs() < 1e-12);

        let vol = AdvectedQuantity::from_form(DiscreteForm::volume(g)).unwrap();
        let w = AlgebraElement::from_vector(&VectorField::from_fn(g, |x, _| (x.sin(), 0.0)));
        let p = phi_a(&vol, &w).unwrap();
        assert!(p.form().max_diff(&DiscreteForm::top_form_fn(g, |x, _| x.cos())).unwrap() < 1e-5);

        // divergence-free transport leaves the volume form unchanged
        let w = AlgebraElement::from_vector(&VectorField::from_fn(g, |x, y| (y.sin(), x.cos())));
        assert!(phi_a(&vol, &w).unwrap().form().max_abs() < 1e-12);
    }

    #[test]
    fn phi_star_examples() {
        let g = torus(64);
        let a = AdvectedQuantity::from_form(DiscreteForm::top_form_fn(g, |_, _| 2.0)).unwrap();
        let s = phi_a_star(&a, &DiscreteForm::function_fn(g, |_, y| y.sin())).unwrap();
        assert!(s.form().max_diff(&one(g, |_, y| (0.0, -2.0 * y.cos()))).unwrap() < 1e-5);
        let s = phi_a_star(&a, &DiscreteForm::function_fn(g, |_, _| 1.5)).unwrap();
        assert!(s.form().max_abs() < 1e-12);

        let s_fn = AdvectedQuantity::from_form(DiscreteForm::function_fn(g, |x, _| x.sin())).unwrap();
        let vol = DiscreteForm::volume(g);
        let s = phi_a_star(&s_fn, &vol).unwrap();
        assert!(s.form().max_diff(&one(g, |x, _| (x.cos(), 0.0))).unwrap() < 1e-5);
        let w = alg(random_one_form(g, &mut rng(1)));
        let eta = surface_phi(&s_fn, &w, &vol).unwrap();
        assert!(eta.comps().iter().all(|c| c.iter().all(|&v| v == 0.0)));
        assert!(phi_a_star(&s_fn, &DiscreteForm::function_fn(g, |_, _| 1.0)).is_err());
    }

    #[test]
    fn diamond_examples() {
        let g = torus(64);
        let a = AdvectedQuantity::from_form(DiscreteForm::volume(g)).unwrap();
        let z = diamond(&DiscreteForm::zeros(g, 0).unwrap(), &a).unwrap();
        assert_eq!(z.form().max_abs(), 0.0);
        let d = diamond(&DiscreteForm::function_fn(g, |_, y| y.sin()), &a).unwrap();
        assert!(d.form().max_diff(&one(g, |_, y| (0.0, y.cos()))).unwrap() < 1e-5);
        assert_eq!(diamond_sign(0), -1.0);
        assert_eq!(diamond_sign(1), 1.0);
        assert_eq!(diamond_sign(2), -1.0);
    }

    #[test]
    fn semidirect_bracket_examples() {
        let g = torus(64);
        let x = SemidirectElement::new(alg(random_one_form(g, &mut rng(2))), random_form(g, 0, &mut rng(3))).unwrap();
        let b = lie_bracket_s(&x, &x).unwrap();
        assert!(b.omega.form().max_abs() < 1e-13 && b.abar.max_abs() < 1e-13);

        let x1 = SemidirectElement::new(alg(one(g, |_, _| (0.0, 1.0))), DiscreteForm::zeros(g, 0).unwrap()).unwrap();
        let x2 = SemidirectElement::new(
            alg(DiscreteForm::zeros(g, 1).unwrap()),
            DiscreteForm::function_fn(g, |x, _| x.sin()),
        )
        .unwrap();
        let b = lie_bracket_s(&x1, &x2).unwrap();
        assert!(b.omega.form().max_abs() < 1e-12);
        assert!(b.abar.max_diff(&DiscreteForm::function_fn(g, |x, _| -x.cos())).unwrap() < 1e-5);
    }

    #[test]
    fn semidirect_coadjoint_example() {
        let g = torus(64);
        let x = SemidirectElement::new(alg(one(g, |_, _| (0.0, 1.0))), DiscreteForm::zeros(g, 0).unwrap()).unwrap();
        let y = SemidirectDual::new(
            dual(one(g, |x, _| (x.sin(), 0.0))),
            AdvectedQuantity::from_form(DiscreteForm::volume(g)).unwrap(),
        )
        .unwrap();
        let r = ad_s_star(&x, &y).unwrap();
        assert!(r.alpha.form().max_diff(&one(g, |x, _| (x.cos(), 0.0))).unwrap() < 1e-5);
        assert!(r.a.form().max_abs() < 1e-12);

        let c = SemidirectElement::new(alg(one(g, |_, _| (1.0, 2.0))), DiscreteForm::zeros(g, 0).unwrap()).unwrap();
        let cy = SemidirectDual::new(
            dual(one(g, |_, _| (0.5, 0.0))),
            AdvectedQuantity::from_form(DiscreteForm::top_form_fn(g, |x, y| 1.0 + x * y)).unwrap(),
        )
        .unwrap();
        let r = ad_s_star(&c, &cy).unwrap();
        assert!(r.alpha.form().max_abs() < 1e-12);
    }

    #[test]
    fn semidirect_pairing_example() {
        let g = torus(32);
        let y = SemidirectDual::new(
            dual(one(g, |_, _| (1.0, 0.0))),
            AdvectedQuantity::from_form(DiscreteForm::zeros(g, 2).unwrap()).unwrap(),
        )
        .unwrap();
        let x = SemidirectElement::new(alg(one(g, |_, _| (0.0, 1.0))), DiscreteForm::zeros(g, 0).unwrap()).unwrap();
        assert!((pairing_s(&y, &x).unwrap() - 4.0 * PI * PI).abs() < 1e-11);
    }

    #[test]
    fn surface_ad_s_reduces_without_advected_parts() {
        let g = Grid::bounded([1.0, 1.0], [16, 16]).unwrap();
        let r = &mut rng(11);
        let w1 = alg(random_one_form(g, r));
        let w2 = alg(random_one_form(g, r));
        let al = dual(random_one_form(g, r));
        let zero_a = AdvectedQuantity::from_form(DiscreteForm::zeros(g, 2).unwrap()).unwrap();
        let x1 = SemidirectElement::new(w1.clone(), DiscreteForm::zeros(g, 0).unwrap()).unwrap();
        let x2 = SemidirectElement::new(w2.clone(), DiscreteForm::zeros(g, 0).unwrap()).unwrap();
        let y = SemidirectDual::new(al.clone(), zero_a).unwrap();
        let s = surface_ad_s(&x1, &y, &x2).unwrap();
        assert_eq!(s, surface_ad(&w1, &al, &w2).unwrap());
    }

    #[test]
    fn periodic_defects_vanish_to_roundoff() {
        let g = torus(32);
        let r = &mut rng(5);
        let w = alg(random_one_form(g, r));
        let al = dual(random_one_form(g, r));
        let b = alg(random_one_form(g, r));
        assert!(coadjoint_defect(&w, &al, &b).unwrap().relative() < 1e-13);
        let mass = AdvectedQuantity::from_form(random_form(g, 2, r)).unwrap();
        let f = random_form(g, 0, r);
        assert!(interconnection_defect(&mass, &w, &f).unwrap().relative() < 1e-13);
        assert!(diamond_defect(&f, &mass, &w).unwrap().relative() < 1e-13);
    }
}
