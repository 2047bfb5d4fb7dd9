//! Fourth-order finite differences and tensor-product quadrature weights.

use ndarray::{Array2, ArrayView1, ArrayViewMut1, Zip};

use super::grid::{Axis, Grid};

const INV12: f64 = 1.0 / 12.0;

// One-sided fourth-order stencils for the first two nodes of a bounded axis.
// The last two nodes use the mirrored stencils with negated coefficients.
const EDGE0: [f64; 5] = [-25.0, 48.0, -36.0, 16.0, -3.0];
const EDGE1: [f64; 5] = [-3.0, -10.0, 18.0, -6.0, 1.0];

// End corrections of the Gregory quadrature rule, applied to forward and
// backward differences of order 1..=4.
const GREGORY: [f64; 4] = [1.0 / 12.0, 1.0 / 24.0, 19.0 / 720.0, 3.0 / 160.0];

fn diff_line(f: ArrayView1<f64>, mut out: ArrayViewMut1<f64>, h: f64, periodic: bool) {
    let n = f.len();
    let s = INV12 / h;
    for i in 2..n - 2 {
        out[i] = (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) * s;
    }
    if periodic {
        for i in [0, 1, n - 2, n - 1] {
            let m2 = f[(i + n - 2) % n];
            let m1 = f[(i + n - 1) % n];
            let p1 = f[(i + 1) % n];
            let p2 = f[(i + 2) % n];
            out[i] = (m2 - 8.0 * m1 + 8.0 * p1 - p2) * s;
        }
        return;
    }
    let mut lo0 = 0.0;
    let mut lo1 = 0.0;
    let mut hi0 = 0.0;
    let mut hi1 = 0.0;
    for k in 0..5 {
        lo0 += EDGE0[k] * f[k];
        lo1 += EDGE1[k] * f[k];
        hi0 += EDGE0[k] * f[n - 1 - k];
        hi1 += EDGE1[k] * f[n - 1 - k];
    }
    out[0] = lo0 * s;
    out[1] = lo1 * s;
    out[n - 2] = -hi1 * s;
    out[n - 1] = -hi0 * s;
}

/// Partial derivative of a nodal field along `axis`.
pub fn partial(f: &Array2<f64>, axis: Axis, grid: &Grid) -> Array2<f64> {
    let mut out = Array2::zeros(f.raw_dim());
    let ax = ndarray::Axis(axis.index());
    let h = grid.h(axis);
    let periodic = grid.is_periodic(axis);
    Zip::from(f.lanes(ax))
        .and(out.lanes_mut(ax))
        .for_each(|src, dst| diff_line(src, dst, h, periodic));
    out
}

/// Quadrature weights for one axis: the rectangle rule on periodic axes and
/// the Gregory end-corrected trapezoid rule on bounded axes.
pub fn weights_1d(n: usize, h: f64, periodic: bool) -> Vec<f64> {
    if periodic {
        return vec![h; n];
    }
    let mut w = vec![h; n];
    w[0] = 0.5 * h;
    w[n - 1] = 0.5 * h;
    // Δ^j f_0 = Σ_m (-1)^(j-m) C(j,m) f_m and ∇^j f_N = Σ_m (-1)^m C(j,m) f_(N-m);
    // the rule subtracts h γ_j (∇^j f_N + (-1)^j Δ^j f_0).
    for (jm1, &g) in GREGORY.iter().enumerate() {
        let j = jm1 + 1;
        let mut c = 1.0;
        for m in 0..=j {
            if m > 0 {
                c = c * (j + 1 - m) as f64 / m as f64;
            }
            let bwd = if m % 2 == 0 { c } else { -c };
            // (-1)^j (-1)^(j-m) = (-1)^m, so both ends share the same coefficient.
            w[m] -= h * g * bwd;
            w[n - 1 - m] -= h * g * bwd;
        }
    }
    w
}

/// Weights for the periodic axis or for an edge line, matching `weights_1d`.
pub fn axis_weights(grid: &Grid, axis: Axis) -> Vec<f64> {
    weights_1d(
        grid.resolution()[axis.index()],
        grid.h(axis),
        grid.is_periodic(axis),
    )
}

/// Ordered tensor-product quadrature of a nodal field in coordinate measure.
pub fn integrate(f: &Array2<f64>, grid: &Grid) -> f64 {
    let wx = axis_weights(grid, Axis::X);
    let wy = axis_weights(grid, Axis::Y);
    let mut total = 0.0;
    for (i, row) in f.outer_iter().enumerate() {
        let mut acc = 0.0;
        for (j, v) in row.iter().enumerate() {
            acc += wy[j] * v;
        }
        total += wx[i] * acc;
    }
    total
}

/// Ordered 1D quadrature of edge samples.
pub fn integrate_line(f: &[f64], w: &[f64]) -> f64 {
    f.iter().zip(w).map(|(a, b)| a * b).sum()
}
