use super::form::{same_grid, DiscreteForm};
use super::grid::{Axis, Grid};
use super::stencil::{axis_weights, integrate_line};
use crate::error::{Error, Result};

/// Boundary edges in counterclockwise order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Edge {
    /// `y = 0`
    Bottom,
    /// `x = Lx`
    Right,
    /// `y = Ly`
    Top,
    /// `x = 0`
    Left,
}

impl Edge {
    pub const ALL: [Edge; 4] = [Edge::Bottom, Edge::Right, Edge::Top, Edge::Left];

    /// Axis the edge runs along.
    pub fn along(self) -> Axis {
        match self {
            Edge::Bottom | Edge::Top => Axis::X,
            Edge::Right | Edge::Left => Axis::Y,
        }
    }

    /// An edge exists only when the axis normal to it is bounded.
    pub fn exists(self, grid: &Grid) -> bool {
        let normal = match self.along() {
            Axis::X => Axis::Y,
            Axis::Y => Axis::X,
        };
        !grid.is_periodic(normal)
    }
}

/// A 0- or 1-form on the boundary, stored as one sample array per edge.
///
/// Samples run in the direction of increasing coordinate. A 1-form stores its
/// coefficient against the counterclockwise unit-speed tangent (the orientation
/// induced by the outward normal), so the line integral over an edge is the
/// plain quadrature of its samples. Missing edges hold empty arrays.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryForm {
    degree: usize,
    edges: [Vec<f64>; 4],
    grid: Grid,
}

impl BoundaryForm {
    pub fn new(grid: Grid, degree: usize, edges: [Vec<f64>; 4]) -> Result<Self> {
        if degree > 1 {
            return Err(Error::Degree {
                op: "boundary form",
                degree,
            });
        }
        for (e, samples) in Edge::ALL.iter().zip(&edges) {
            let expected = if e.exists(&grid) {
                grid.resolution()[e.along().index()]
            } else {
                0
            };
            if samples.len() != expected {
                return Err(Error::LengthMismatch {
                    op: "boundary form edge",
                    left: samples.len(),
                    right: expected,
                });
            }
        }
        Ok(BoundaryForm { degree, edges, grid })
    }

    pub fn zeros(grid: Grid, degree: usize) -> Result<Self> {
        let edges = Edge::ALL.map(|e| {
            if e.exists(&grid) {
                vec![0.0; grid.resolution()[e.along().index()]]
            } else {
                Vec::new()
            }
        });
        Self::new(grid, degree, edges)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn edge(&self, e: Edge) -> &[f64] {
        &self.edges[e as usize]
    }

    pub fn edge_mut(&mut self, e: Edge) -> &mut Vec<f64> {
        &mut self.edges[e as usize]
    }

    pub fn is_empty(&self) -> bool {
        self.edges.iter().all(Vec::is_empty)
    }

    pub fn max_abs(&self) -> f64 {
        self.edges
            .iter()
            .flatten()
            .fold(0.0, |m, v| m.max(v.abs()))
    }

    fn zip_with(&self, other: &Self, op: &'static str, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        same_grid(op, &self.grid, &other.grid)?;
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch {
                op,
                left: self.degree,
                right: other.degree,
            });
        }
        let edges = [0, 1, 2, 3].map(|k| {
            self.edges[k]
                .iter()
                .zip(&other.edges[k])
                .map(|(&a, &b)| f(a, b))
                .collect()
        });
        Ok(BoundaryForm {
            degree: self.degree,
            edges,
            grid: self.grid,
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, "boundary add", |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, "boundary sub", |a, b| a - b)
    }

    pub fn scale(&self, c: f64) -> Self {
        BoundaryForm {
            degree: self.degree,
            edges: self.edges.clone().map(|e| e.into_iter().map(|v| c * v).collect()),
            grid: self.grid,
        }
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        BoundaryForm {
            degree: self.degree,
            edges: self.edges.clone().map(|e| e.into_iter().map(&f).collect()),
            grid: self.grid,
        }
    }
}

/// Pullback of a 0- or 1-form to the boundary.
pub fn trace(a: &DiscreteForm) -> Result<BoundaryForm> {
    let g = *a.grid();
    if a.degree() > 1 {
        return Err(Error::Degree {
            op: "trace",
            degree: a.degree(),
        });
    }
    let (nx, ny) = g.shape();
    let mut out = BoundaryForm::zeros(g, a.degree())?;
    for e in Edge::ALL {
        if !e.exists(&g) {
            continue;
        }
        // Tangential coefficient and its sign relative to the counterclockwise tangent.
        let (comp, sign) = match (a.degree(), e) {
            (0, _) => (0, 1.0),
            (_, Edge::Bottom) => (0, 1.0),
            (_, Edge::Right) => (1, 1.0),
            (_, Edge::Top) => (0, -1.0),
            (_, Edge::Left) => (1, -1.0),
        };
        let c = a.comp(comp);
        out.edges[e as usize] = match e {
            Edge::Bottom => (0..nx).map(|i| sign * c[[i, 0]]).collect(),
            Edge::Top => (0..nx).map(|i| sign * c[[i, ny - 1]]).collect(),
            Edge::Left => (0..ny).map(|j| sign * c[[0, j]]).collect(),
            Edge::Right => (0..ny).map(|j| sign * c[[nx - 1, j]]).collect(),
        };
    }
    Ok(out)
}

/// Pointwise wedge of boundary forms (the boundary is one-dimensional).
pub fn boundary_wedge(a: &BoundaryForm, b: &BoundaryForm) -> Result<BoundaryForm> {
    if a.degree + b.degree > 1 {
        return Err(Error::DegreeMismatch {
            op: "boundary_wedge",
            left: a.degree,
            right: b.degree,
        });
    }
    let mut out = a.zip_with_any(b, |x, y| x * y)?;
    out.degree = a.degree + b.degree;
    Ok(out)
}

impl BoundaryForm {
    fn zip_with_any(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        same_grid("boundary_wedge", &self.grid, &other.grid)?;
        let edges = [0, 1, 2, 3].map(|k| {
            self.edges[k]
                .iter()
                .zip(&other.edges[k])
                .map(|(&x, &y)| f(x, y))
                .collect()
        });
        Ok(BoundaryForm {
            degree: self.degree,
            edges,
            grid: self.grid,
        })
    }
}

/// `∮_{∂M} η` for a boundary 1-form; zero on a fully periodic grid.
pub fn boundary_integral(eta: &BoundaryForm) -> Result<f64> {
    if eta.degree != 1 {
        return Err(Error::Degree {
            op: "boundary_integral",
            degree: eta.degree,
        });
    }
    let g = eta.grid;
    let mut total = 0.0;
    for e in Edge::ALL {
        if e.exists(&g) {
            total += integrate_line(eta.edge(e), &axis_weights(&g, e.along()));
        }
    }
    Ok(total)
}

/// Quadrature of `|η|` over the boundary.
pub fn boundary_scale(eta: &BoundaryForm) -> Result<f64> {
    boundary_integral(&eta.map(f64::abs))
}
