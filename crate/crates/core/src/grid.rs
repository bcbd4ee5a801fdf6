//! Rectangular lattices in `C^n` (`n ≤ 2`) and sampled holomorphic fields on them.

use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::csymplectic::RealQuadraticWeight;
use crate::linalg::c;
use crate::{Error, Result, C64};

const MODULE: &str = "grid";

/// Uniform axis `min, min + Δ, .., max` with `steps` nodes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl Axis {
    pub fn new(min: f64, max: f64, steps: usize) -> Result<Self> {
        if !(min.is_finite() && max.is_finite()) || steps < 2 || !(max > min) {
            return Err(Error::input(
                MODULE,
                "axis needs finite min < max and at least two nodes",
            ));
        }
        Ok(Axis { min, max, steps })
    }

    /// Axis covering `[min, max]` with spacing at most `spacing`.
    pub fn with_spacing(min: f64, max: f64, spacing: f64) -> Result<Self> {
        if !(spacing > 0.0) {
            return Err(Error::input(MODULE, "spacing must be positive"));
        }
        let steps = ((max - min) / spacing).ceil() as usize + 1;
        Axis::new(min, max, steps.max(2))
    }

    pub fn spacing(&self) -> f64 {
        (self.max - self.min) / (self.steps - 1) as f64
    }

    pub fn node(&self, i: usize) -> f64 {
        self.min + self.spacing() * i as f64
    }
}

/// Lattice in `C^n`. Axes are ordered `(Re x₁, .., Re x_n, Im x₁, .., Im x_n)`; node index
/// runs fastest along the first axis.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    axes: Vec<Axis>,
}

impl Grid {
    pub fn new(axes: Vec<Axis>) -> Result<Self> {
        if axes.is_empty() || axes.len() % 2 != 0 || axes.len() > 4 {
            return Err(Error::dim(MODULE, "grids live in C^n with n ∈ {1, 2}"));
        }
        Ok(Grid { axes })
    }

    /// Square-ish grid `[re.0, re.1] × [im.0, im.1]` in `C` with spacing at most `spacing`.
    pub fn rect_1d(re: (f64, f64), im: (f64, f64), spacing: f64) -> Result<Self> {
        Grid::new(alloc::vec![
            Axis::with_spacing(re.0, re.1, spacing)?,
            Axis::with_spacing(im.0, im.1, spacing)?
        ])
    }

    pub fn n(&self) -> usize {
        self.axes.len() / 2
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    pub fn len(&self) -> usize {
        self.axes.iter().map(|a| a.steps).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Riemann cell volume `Π Δ`.
    pub fn cell_volume(&self) -> f64 {
        self.axes.iter().map(|a| a.spacing()).product()
    }

    pub fn max_spacing(&self) -> f64 {
        self.axes.iter().map(|a| a.spacing()).fold(0.0, f64::max)
    }

    pub fn multi_index(&self, mut k: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.axes.len());
        for a in &self.axes {
            out.push(k % a.steps);
            k /= a.steps;
        }
        out
    }

    pub fn flat_index(&self, idx: &[usize]) -> usize {
        let mut k = 0;
        for (a, i) in self.axes.iter().zip(idx).rev() {
            k = k * a.steps + i;
        }
        k
    }

    pub fn node(&self, k: usize) -> Vec<C64> {
        let idx = self.multi_index(k);
        let n = self.n();
        (0..n)
            .map(|j| c(self.axes[j].node(idx[j]), self.axes[n + j].node(idx[n + j])))
            .collect()
    }

    pub fn nodes(&self) -> Vec<Vec<C64>> {
        (0..self.len()).map(|k| self.node(k)).collect()
    }

    /// Nodes at least `margin` away from every face.
    pub fn interior(&self, margin: f64) -> Vec<usize> {
        (0..self.len())
            .filter(|&k| {
                let idx = self.multi_index(k);
                self.axes.iter().zip(&idx).all(|(a, &i)| {
                    let t = a.node(i);
                    t - a.min >= margin - 1e-12 && a.max - t >= margin - 1e-12
                })
            })
            .collect()
    }

    /// Sub-lattice of every `stride`-th node along each axis, with the parent index of each node.
    pub fn coarsen(&self, stride: usize) -> Result<(Grid, Vec<usize>)> {
        let stride = stride.max(1);
        if self.axes.iter().any(|a| a.steps <= stride) {
            return Err(Error::input(
                MODULE,
                "stride leaves fewer than two nodes on an axis",
            ));
        }
        let axes: Vec<Axis> = self
            .axes
            .iter()
            .map(|a| {
                let steps = (a.steps - 1) / stride + 1;
                Axis {
                    min: a.min,
                    max: a.node((steps - 1) * stride),
                    steps,
                }
            })
            .collect();
        let coarse = Grid { axes };
        let parents = (0..coarse.len())
            .map(|k| {
                let idx: Vec<usize> = coarse.multi_index(k).iter().map(|i| i * stride).collect();
                self.flat_index(&idx)
            })
            .collect();
        Ok((coarse, parents))
    }

    /// Every `stride`-th node along each axis.
    pub fn subsample(&self, stride: usize) -> Vec<usize> {
        (0..self.len())
            .filter(|&k| self.multi_index(k).iter().all(|i| i % stride.max(1) == 0))
            .collect()
    }
}

/// Samples of a holomorphic function in `H_Φ` on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct HoloSample {
    pub weight: RealQuadraticWeight,
    pub h: f64,
    pub grid: Grid,
    pub values: Vec<C64>,
}

impl HoloSample {
    pub fn new(weight: RealQuadraticWeight, h: f64, grid: Grid, values: Vec<C64>) -> Result<Self> {
        if weight.n() != grid.n() {
            return Err(Error::dim(MODULE, "weight and grid dimensions differ"));
        }
        if values.len() != grid.len() {
            return Err(Error::dim(MODULE, "one value per grid node is required"));
        }
        if !(h > 0.0) {
            return Err(Error::input(MODULE, "h must be positive"));
        }
        if values
            .iter()
            .any(|v| !(v.re.is_finite() && v.im.is_finite()))
        {
            return Err(Error::numerical(MODULE, "non-finite sample"));
        }
        Ok(HoloSample {
            weight,
            h,
            grid,
            values,
        })
    }

    pub fn from_fn(
        weight: RealQuadraticWeight,
        h: f64,
        grid: Grid,
        f: impl Fn(&[C64]) -> C64,
    ) -> Result<Self> {
        let values = (0..grid.len()).map(|k| f(&grid.node(k))).collect();
        HoloSample::new(weight, h, grid, values)
    }

    pub fn zeros_like(&self) -> HoloSample {
        HoloSample {
            values: alloc::vec![c(0.0, 0.0); self.values.len()],
            ..self.clone()
        }
    }

    /// `e^{−2Φ(x)/h}` at node `k`.
    pub fn density(&self, k: usize) -> f64 {
        (-2.0 * self.weight.eval(&self.grid.node(k)) / self.h).exp()
    }

    /// Weighted inner product over the listed nodes (all nodes when `None`).
    pub fn inner_on(&self, other: &HoloSample, nodes: Option<&[usize]>) -> C64 {
        let dv = self.grid.cell_volume();
        let mut acc = c(0.0, 0.0);
        // Split the density between the two factors so large samples do not overflow.
        let mut add = |k: usize| {
            let d = (-self.weight.eval(&self.grid.node(k)) / self.h).exp();
            acc += (self.values[k] * d) * (other.values[k] * d).conj()
        };
        match nodes {
            Some(ks) => ks.iter().for_each(|&k| add(k)),
            None => (0..self.values.len()).for_each(&mut add),
        }
        acc * dv
    }

    pub fn norm_on(&self, nodes: Option<&[usize]>) -> f64 {
        self.inner_on(self, nodes).re.max(0.0).sqrt()
    }

    pub fn scale(&self, a: C64) -> HoloSample {
        HoloSample {
            values: self.values.iter().map(|v| v * a).collect(),
            ..self.clone()
        }
    }

    pub fn sub(&self, other: &HoloSample) -> Result<HoloSample> {
        if self.grid != other.grid {
            return Err(Error::dim(MODULE, "fields live on different grids"));
        }
        Ok(HoloSample {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a - b)
                .collect(),
            ..self.clone()
        })
    }

    pub fn add(&self, other: &HoloSample) -> Result<HoloSample> {
        if self.grid != other.grid {
            return Err(Error::dim(MODULE, "fields live on different grids"));
        }
        Ok(HoloSample {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a + b)
                .collect(),
            ..self.clone()
        })
    }
}

/// Uniform real-side samples `u(y_j)` (`n = 1`).
#[derive(Debug, Clone, PartialEq)]
pub struct RealSamples {
    pub axis: Axis,
    pub values: Vec<C64>,
}

impl RealSamples {
    pub fn new(axis: Axis, values: Vec<C64>) -> Result<Self> {
        if values.len() != axis.steps {
            return Err(Error::dim(MODULE, "one value per real node is required"));
        }
        Ok(RealSamples { axis, values })
    }

    pub fn from_fn(axis: Axis, f: impl Fn(f64) -> C64) -> Self {
        let values = (0..axis.steps).map(|i| f(axis.node(i))).collect();
        RealSamples { axis, values }
    }

    pub fn norm(&self) -> f64 {
        (self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.axis.spacing()).sqrt()
    }

    pub fn inner(&self, other: &RealSamples) -> C64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a * b.conj())
            .sum::<C64>()
            * self.axis.spacing()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_roundtrip_and_volume() {
        let g = Grid::new(alloc::vec![
            Axis::new(-1.0, 1.0, 5).unwrap(),
            Axis::new(0.0, 1.0, 3).unwrap(),
            Axis::new(0.0, 2.0, 3).unwrap(),
            Axis::new(-2.0, 2.0, 2).unwrap(),
        ])
        .unwrap();
        assert_eq!(g.len(), 90);
        for k in [0, 7, 45, 89] {
            assert_eq!(g.flat_index(&g.multi_index(k)), k);
        }
        assert!((g.cell_volume() - 0.5 * 0.5 * 1.0 * 4.0).abs() < 1e-15);
        let x = g.node(1);
        assert_eq!(x[0], c(-0.5, 0.0));
    }

    #[test]
    fn gaussian_norm_on_grid() {
        let h = 0.1;
        let g = Grid::rect_1d((-3.0, 3.0), (-3.0, 3.0), 0.05).unwrap();
        let w = RealQuadraticWeight::standard(1);
        let one = HoloSample::from_fn(w, h, g, |_| c(1.0, 0.0)).unwrap();
        // ∫ e^{−|x|²/h} dA = πh
        assert!((one.norm_on(None).powi(2) - core::f64::consts::PI * h).abs() < 1e-10);
        let two = one.scale(c(2.0, 0.0));
        assert!((two.norm_on(None) - 2.0 * one.norm_on(None)).abs() < 1e-14);
    }
}
