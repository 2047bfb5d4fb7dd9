//! State snapshots as JSON with hex-float field values.

use std::path::Path;

use anyhow::{bail, Context, Result};
use ndarray::Array2;
use phfluid::energetics::{FlowState, Representation};
use phfluid::{DiscreteForm, Grid};
use serde::{Deserialize, Serialize};

use crate::hexfloat;

/// On-disk form of one state. Each component is stored row-major over the
/// `(x, y)` node grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SnapshotFile {
    pub step: usize,
    pub time: String,
    pub representation: Representation,
    pub grid: Grid,
    pub first: Vec<Vec<String>>,
    pub mass: Vec<String>,
}

fn encode(a: &Array2<f64>) -> Vec<String> {
    a.iter().map(|&x| hexfloat::format(x)).collect()
}

fn decode(values: &[String], grid: &Grid) -> Result<Array2<f64>> {
    let data = values
        .iter()
        .map(|s| hexfloat::parse(s))
        .collect::<Result<Vec<f64>, _>>()?;
    Array2::from_shape_vec(grid.shape(), data).context("component has the wrong number of values")
}

impl SnapshotFile {
    pub fn from_state(step: usize, time: f64, state: &FlowState) -> Self {
        SnapshotFile {
            step,
            time: hexfloat::format(time),
            representation: state.representation(),
            grid: *state.grid(),
            first: state.first().comps().iter().map(encode).collect(),
            mass: encode(state.mass().comp(0)),
        }
    }

    pub fn time(&self) -> Result<f64> {
        Ok(hexfloat::parse(&self.time)?)
    }

    pub fn to_state(&self) -> Result<FlowState> {
        let g = self.grid;
        if self.first.len() != 2 {
            bail!("first slot must have 2 components, found {}", self.first.len());
        }
        let comps = self
            .first
            .iter()
            .map(|c| decode(c, &g))
            .collect::<Result<Vec<_>>>()?;
        let first = DiscreteForm::new(g, 1, comps)?;
        let mass = DiscreteForm::new(g, 2, vec![decode(&self.mass, &g)?])?;
        Ok(FlowState::new(self.representation, first, mass)?)
    }
}

pub fn file_name(step: usize) -> String {
    format!("state_{step}.json")
}

pub fn write(path: &Path, step: usize, time: f64, state: &FlowState) -> Result<()> {
    let text = serde_json::to_string(&SnapshotFile::from_state(step, time, state))?;
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

pub fn read(path: &Path) -> Result<(usize, f64, FlowState)> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let file: SnapshotFile = serde_json::from_str(&text)?;
    Ok((file.step, file.time()?, file.to_state()?))
}
