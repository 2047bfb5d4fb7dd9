use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Smallest admissible sample count per axis; the one-sided boundary stencils
/// and the end-corrected quadrature both reach five points into the domain.
pub const MIN_RESOLUTION: usize = 8;

/// Coordinate axis of the 2D grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
}

impl Axis {
    pub fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
        }
    }
}

/// A flat rectangular domain `[0, Lx] x [0, Ly]` sampled at collocated nodes,
/// carrying a constant diagonal metric `diag(m1, m2)`.
///
/// Periodic axes place `N` nodes at `i * L / N`; bounded axes place `N` nodes
/// at `i * L / (N - 1)`, including both end points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GridSpec", into = "GridSpec")]
pub struct Grid {
    extents: [f64; 2],
    resolution: [usize; 2],
    periodic: [bool; 2],
    metric: [f64; 2],
    spacing: [f64; 2],
}

/// Serialized form of a [`Grid`]; the spacing is recomputed on load.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub extents: [f64; 2],
    pub resolution: [usize; 2],
    pub periodic: [bool; 2],
    pub metric: [f64; 2],
}

impl TryFrom<GridSpec> for Grid {
    type Error = Error;

    fn try_from(s: GridSpec) -> Result<Self> {
        Grid::new(s.extents, s.resolution, s.periodic, s.metric)
    }
}

impl From<Grid> for GridSpec {
    fn from(g: Grid) -> Self {
        GridSpec {
            extents: g.extents,
            resolution: g.resolution,
            periodic: g.periodic,
            metric: g.metric,
        }
    }
}

impl Grid {
    pub fn new(
        extents: [f64; 2],
        resolution: [usize; 2],
        periodic: [bool; 2],
        metric: [f64; 2],
    ) -> Result<Self> {
        for a in 0..2 {
            if !(extents[a].is_finite() && extents[a] > 0.0) {
                return Err(Error::InvalidGrid(format!(
                    "extent {} must be positive, got {}",
                    a, extents[a]
                )));
            }
            if resolution[a] < MIN_RESOLUTION {
                return Err(Error::InvalidGrid(format!(
                    "resolution {} must be at least {}, got {}",
                    a, MIN_RESOLUTION, resolution[a]
                )));
            }
            if !(metric[a].is_finite() && metric[a] > 0.0) {
                return Err(Error::InvalidGrid(format!(
                    "metric entry {} must be positive, got {}",
                    a, metric[a]
                )));
            }
        }
        let spacing = [0, 1].map(|a| {
            if periodic[a] {
                extents[a] / resolution[a] as f64
            } else {
                extents[a] / (resolution[a] - 1) as f64
            }
        });
        Ok(Grid {
            extents,
            resolution,
            periodic,
            metric,
            spacing,
        })
    }

    /// Fully periodic Euclidean grid.
    pub fn periodic(extents: [f64; 2], resolution: [usize; 2]) -> Result<Self> {
        Self::new(extents, resolution, [true, true], [1.0, 1.0])
    }

    /// Fully bounded Euclidean grid (both axes carry walls).
    pub fn bounded(extents: [f64; 2], resolution: [usize; 2]) -> Result<Self> {
        Self::new(extents, resolution, [false, false], [1.0, 1.0])
    }

    pub fn extents(&self) -> [f64; 2] {
        self.extents
    }

    pub fn resolution(&self) -> [usize; 2] {
        self.resolution
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.resolution[0], self.resolution[1])
    }

    pub fn periodic_axes(&self) -> [bool; 2] {
        self.periodic
    }

    pub fn is_periodic(&self, axis: Axis) -> bool {
        self.periodic[axis.index()]
    }

    /// True when the domain has no boundary at all.
    pub fn is_closed(&self) -> bool {
        self.periodic[0] && self.periodic[1]
    }

    pub fn metric(&self) -> [f64; 2] {
        self.metric
    }

    /// Square root of the metric determinant, i.e. the density of the volume form.
    pub fn volume_factor(&self) -> f64 {
        (self.metric[0] * self.metric[1]).sqrt()
    }

    pub fn spacing(&self) -> [f64; 2] {
        self.spacing
    }

    pub fn h(&self, axis: Axis) -> f64 {
        self.spacing[axis.index()]
    }

    pub fn min_spacing(&self) -> f64 {
        self.spacing[0].min(self.spacing[1])
    }

    /// Node coordinates along `axis`.
    pub fn coords(&self, axis: Axis) -> Vec<f64> {
        let a = axis.index();
        (0..self.resolution[a])
            .map(|i| i as f64 * self.spacing[a])
            .collect()
    }

    pub fn len(&self) -> usize {
        self.resolution[0] * self.resolution[1]
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
