use ndarray::{Array2, Zip};

use super::grid::{Axis, Grid};
use crate::error::{Error, Result};

/// Top degree of forms on the 2D domain.
pub const N: usize = 2;

/// A degree-k differential form sampled at the grid nodes.
///
/// Degree 0 and 2 carry one component (the function, or the coefficient of
/// `dx∧dy`); degree 1 carries the coefficients of `dx` and `dy`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteForm {
    degree: usize,
    comps: Vec<Array2<f64>>,
    grid: Grid,
}

fn n_comps(degree: usize) -> usize {
    if degree == 1 {
        2
    } else {
        1
    }
}

pub(crate) fn same_grid(op: &'static str, a: &Grid, b: &Grid) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::GridMismatch { op })
    }
}

fn sample(grid: &Grid, f: impl Fn(f64, f64) -> f64) -> Array2<f64> {
    let xs = grid.coords(Axis::X);
    let ys = grid.coords(Axis::Y);
    Array2::from_shape_fn(grid.shape(), |(i, j)| f(xs[i], ys[j]))
}

impl DiscreteForm {
    pub fn new(grid: Grid, degree: usize, comps: Vec<Array2<f64>>) -> Result<Self> {
        if degree > N {
            return Err(Error::Degree { op: "form", degree });
        }
        if comps.len() != n_comps(degree) {
            return Err(Error::LengthMismatch {
                op: "form components",
                left: comps.len(),
                right: n_comps(degree),
            });
        }
        for c in &comps {
            if c.dim() != grid.shape() {
                return Err(Error::InvalidGrid(format!(
                    "component shape {:?} does not match resolution {:?}",
                    c.dim(),
                    grid.shape()
                )));
            }
        }
        Ok(DiscreteForm { degree, comps, grid })
    }

    pub fn zeros(grid: Grid, degree: usize) -> Result<Self> {
        let comps = vec![Array2::zeros(grid.shape()); n_comps(degree)];
        Self::new(grid, degree, comps)
    }

    pub fn function(grid: Grid, f: Array2<f64>) -> Result<Self> {
        Self::new(grid, 0, vec![f])
    }

    pub fn one_form(grid: Grid, a: Array2<f64>, b: Array2<f64>) -> Result<Self> {
        Self::new(grid, 1, vec![a, b])
    }

    pub fn top_form(grid: Grid, f: Array2<f64>) -> Result<Self> {
        Self::new(grid, 2, vec![f])
    }

    pub fn function_fn(grid: Grid, f: impl Fn(f64, f64) -> f64) -> Self {
        DiscreteForm {
            degree: 0,
            comps: vec![sample(&grid, f)],
            grid,
        }
    }

    pub fn one_form_fn(grid: Grid, f: impl Fn(f64, f64) -> (f64, f64)) -> Self {
        let a = sample(&grid, |x, y| f(x, y).0);
        let b = sample(&grid, |x, y| f(x, y).1);
        DiscreteForm {
            degree: 1,
            comps: vec![a, b],
            grid,
        }
    }

    pub fn top_form_fn(grid: Grid, f: impl Fn(f64, f64) -> f64) -> Self {
        DiscreteForm {
            degree: 2,
            comps: vec![sample(&grid, f)],
            grid,
        }
    }

    /// The Riemannian volume form `√(m1 m2) dx∧dy`.
    pub fn volume(grid: Grid) -> Self {
        let s = grid.volume_factor();
        Self::top_form_fn(grid, |_, _| s)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn comps(&self) -> &[Array2<f64>] {
        &self.comps
    }

    pub fn comp(&self, k: usize) -> &Array2<f64> {
        &self.comps[k]
    }

    pub fn comps_mut(&mut self) -> &mut [Array2<f64>] {
        &mut self.comps
    }

    /// The single coefficient array of a 0- or 2-form.
    pub fn scalar(&self) -> Result<&Array2<f64>> {
        if self.degree == 1 {
            return Err(Error::Degree {
                op: "scalar",
                degree: 1,
            });
        }
        Ok(&self.comps[0])
    }

    pub fn into_comps(self) -> Vec<Array2<f64>> {
        self.comps
    }

    fn check_same(&self, op: &'static str, other: &Self) -> Result<()> {
        same_grid(op, &self.grid, &other.grid)?;
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch {
                op,
                left: self.degree,
                right: other.degree,
            });
        }
        Ok(())
    }

    fn zip_with(&self, other: &Self, op: &'static str, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        self.check_same(op, other)?;
        let comps = self
            .comps
            .iter()
            .zip(&other.comps)
            .map(|(a, b)| Zip::from(a).and(b).map_collect(|&x, &y| f(x, y)))
            .collect();
        Ok(DiscreteForm {
            degree: self.degree,
            comps,
            grid: self.grid,
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, "add", |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, "sub", |a, b| a - b)
    }

    /// `self + c * other`.
    pub fn axpy(&self, c: f64, other: &Self) -> Result<Self> {
        self.zip_with(other, "axpy", |a, b| a + c * b)
    }

    pub fn scale(&self, c: f64) -> Self {
        self.map(|v| c * v)
    }

    pub fn neg(&self) -> Self {
        self.map(|v| -v)
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        DiscreteForm {
            degree: self.degree,
            comps: self.comps.iter().map(|c| c.mapv(&f)).collect(),
            grid: self.grid,
        }
    }

    /// Multiplies every component by a nodal scalar field.
    pub fn mul_field(&self, f: &Array2<f64>) -> Self {
        DiscreteForm {
            degree: self.degree,
            comps: self.comps.iter().map(|c| c * f).collect(),
            grid: self.grid,
        }
    }

    /// Divides every component by a nodal scalar field.
    pub fn div_field(&self, f: &Array2<f64>) -> Self {
        DiscreteForm {
            degree: self.degree,
            comps: self.comps.iter().map(|c| c / f).collect(),
            grid: self.grid,
        }
    }

    /// Largest absolute coefficient over all components.
    pub fn max_abs(&self) -> f64 {
        self.comps
            .iter()
            .flat_map(|c| c.iter())
            .fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Max-norm distance to another form of the same degree.
    pub fn max_diff(&self, other: &Self) -> Result<f64> {
        Ok(self.sub(other)?.max_abs())
    }

    pub fn is_finite(&self) -> bool {
        self.comps.iter().all(|c| c.iter().all(|v| v.is_finite()))
    }
}

/// A vector field sampled at the grid nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField {
    comps: [Array2<f64>; 2],
    grid: Grid,
}

impl VectorField {
    pub fn new(grid: Grid, vx: Array2<f64>, vy: Array2<f64>) -> Result<Self> {
        if vx.dim() != grid.shape() || vy.dim() != grid.shape() {
            return Err(Error::InvalidGrid(
                "vector field shape does not match resolution".into(),
            ));
        }
        Ok(VectorField {
            comps: [vx, vy],
            grid,
        })
    }

    pub fn from_fn(grid: Grid, f: impl Fn(f64, f64) -> (f64, f64)) -> Self {
        let vx = sample(&grid, |x, y| f(x, y).0);
        let vy = sample(&grid, |x, y| f(x, y).1);
        VectorField {
            comps: [vx, vy],
            grid,
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn x(&self) -> &Array2<f64> {
        &self.comps[0]
    }

    pub fn y(&self) -> &Array2<f64> {
        &self.comps[1]
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        same_grid("vector sub", &self.grid, &other.grid)?;
        Ok(VectorField {
            comps: [&self.comps[0] - &other.comps[0], &self.comps[1] - &other.comps[1]],
            grid: self.grid,
        })
    }

    /// Largest Euclidean coordinate magnitude `sqrt(vx² + vy²)` over the grid.
    pub fn max_norm(&self) -> f64 {
        Zip::from(&self.comps[0])
            .and(&self.comps[1])
            .fold(0.0, |m, &a, &b| m.max(a.hypot(b)))
    }
}

/// Pointwise wedge product.
pub fn wedge(a: &DiscreteForm, b: &DiscreteForm) -> Result<DiscreteForm> {
    same_grid("wedge", &a.grid, &b.grid)?;
    let degree = a.degree + b.degree;
    if degree > N {
        return Err(Error::DegreeMismatch {
            op: "wedge",
            left: a.degree,
            right: b.degree,
        });
    }
    let comps = match (a.degree, b.degree) {
        (0, _) => b.comps.iter().map(|c| c * &a.comps[0]).collect(),
        (_, 0) => a.comps.iter().map(|c| c * &b.comps[0]).collect(),
        _ => {
            let c = Zip::from(&a.comps[0])
                .and(&a.comps[1])
                .and(&b.comps[0])
                .and(&b.comps[1])
                .map_collect(|&a1, &a2, &b1, &b2| a1 * b2 - a2 * b1);
            vec![c]
        }
    };
    Ok(DiscreteForm {
        degree,
        comps,
        grid: a.grid,
    })
}

/// Metric Hodge star for the constant diagonal metric.
pub fn hodge_star(a: &DiscreteForm) -> DiscreteForm {
    let [m1, m2] = a.grid.metric();
    let s = a.grid.volume_factor();
    let comps = match a.degree {
        0 => vec![a.comps[0].mapv(|v| v * s)],
        1 => vec![a.comps[1].mapv(|v| -v * s / m2), a.comps[0].mapv(|v| v * s / m1)],
        _ => vec![a.comps[0].mapv(|v| v / s)],
    };
    DiscreteForm {
        degree: N - a.degree,
        comps,
        grid: a.grid,
    }
}

/// Index lowering `v ↦ 𝕄(v, ·)`.
pub fn flat(v: &VectorField) -> DiscreteForm {
    let [m1, m2] = v.grid.metric();
    DiscreteForm {
        degree: 1,
        comps: vec![v.comps[0].mapv(|c| c * m1), v.comps[1].mapv(|c| c * m2)],
        grid: v.grid,
    }
}

/// Index raising of a 1-form.
pub fn sharp(a: &DiscreteForm) -> Result<VectorField> {
    if a.degree != 1 {
        return Err(Error::Degree {
            op: "sharp",
            degree: a.degree,
        });
    }
    let [m1, m2] = a.grid.metric();
    Ok(VectorField {
        comps: [a.comps[0].mapv(|c| c / m1), a.comps[1].mapv(|c| c / m2)],
        grid: a.grid,
    })
}

/// `Ψ_vol(v) = ι_v μ_vol`, the (n−1)-form representing a vector field.
pub fn vol_flat(v: &VectorField) -> DiscreteForm {
    let s = v.grid.volume_factor();
    DiscreteForm {
        degree: 1,
        comps: vec![v.comps[1].mapv(|c| -s * c), v.comps[0].mapv(|c| s * c)],
        grid: v.grid,
    }
}

/// `Ψ_vol⁻¹(ω)`: the vector field `ω̂` with `ι_ω̂ μ_vol = ω`.
pub fn vol_sharp(w: &DiscreteForm) -> Result<VectorField> {
    if w.degree != N - 1 {
        return Err(Error::Degree {
            op: "vol_sharp",
            degree: w.degree,
        });
    }
    let s = w.grid.volume_factor();
    Ok(VectorField {
        comps: [w.comps[1].mapv(|c| c / s), w.comps[0].mapv(|c| -c / s)],
        grid: w.grid,
    })
}

/// Pointwise contraction `ι_v a`.
pub fn interior_product(v: &VectorField, a: &DiscreteForm) -> Result<DiscreteForm> {
    same_grid("interior_product", &v.grid, &a.grid)?;
    let [vx, vy] = &v.comps;
    let comps = match a.degree {
        0 => {
            return Err(Error::Degree {
                op: "interior_product",
                degree: 0,
            })
        }
        1 => vec![Zip::from(vx)
            .and(vy)
            .and(&a.comps[0])
            .and(&a.comps[1])
            .map_collect(|&v1, &v2, &a1, &a2| a1 * v1 + a2 * v2)],
        _ => {
            let f = &a.comps[0];
            vec![
                Zip::from(f).and(vy).map_collect(|&f, &v2| -f * v2),
                Zip::from(f).and(vx).map_collect(|&f, &v1| f * v1),
            ]
        }
    };
    Ok(DiscreteForm {
        degree: a.degree - 1,
        comps,
        grid: a.grid,
    })
}
