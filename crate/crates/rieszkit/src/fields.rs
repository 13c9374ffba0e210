//! Grid data model: geometry, sampled scalar fields, phantoms, convolution
//! and error metrics. The numerical substrate under every operator.

use crate::constants::KernelSpec;
use crate::conv;
use crate::error::{Error, Result};
use crate::kernels;

/// Uniformly sampled box grid in R^n, row-major with the last axis
/// contiguous. Kernel sampling requires symmetric grids that contain the
/// origin as a node; [`GridGeometry::symmetric`] builds those.
#[derive(Debug, Clone, PartialEq)]
pub struct GridGeometry {
    shape: Vec<usize>,
    origin: Vec<f64>,
    spacing: Vec<f64>,
}

impl GridGeometry {
    pub fn new(shape: Vec<usize>, origin: Vec<f64>, spacing: Vec<f64>) -> Result<Self> {
        if shape.is_empty() || shape.len() != origin.len() || shape.len() != spacing.len() {
            return Err(Error::InvalidGrid(
                "shape, origin and spacing must share one length >= 1".into(),
            ));
        }
        if shape.iter().any(|&s| s < 2) {
            return Err(Error::InvalidGrid("need at least 2 points per axis".into()));
        }
        if spacing.iter().any(|&h| !h.is_finite() || h <= 0.0) {
            return Err(Error::InvalidGrid("spacing must be positive".into()));
        }
        if origin.iter().any(|o| !o.is_finite()) {
            return Err(Error::InvalidGrid("origin must be finite".into()));
        }
        Ok(GridGeometry {
            shape,
            origin,
            spacing,
        })
    }

    /// Symmetric grid spanning [-half_extent, half_extent) with `points`
    /// nodes per axis; node k sits at (k - points/2) * spacing, so the origin
    /// is always a node.
    pub fn symmetric(ndim: usize, points: usize, half_extent: f64) -> Result<Self> {
        if points < 2 {
            return Err(Error::InvalidGrid("need at least 2 points per axis".into()));
        }
        let spacing = 2.0 * half_extent / points as f64;
        let origin = -((points / 2) as f64) * spacing;
        Self::new(
            vec![points; ndim],
            vec![origin; ndim],
            vec![spacing; ndim],
        )
    }

    pub fn ndim(&self) -> usize {
        self.shape.len()
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn origin(&self) -> &[f64] {
        &self.origin
    }

    pub fn spacing(&self) -> &[f64] {
        &self.spacing
    }

    pub fn len(&self) -> usize {
        self.shape.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn cell_volume(&self) -> f64 {
        self.spacing.iter().product()
    }

    pub fn axis_coordinates(&self, axis: usize) -> Vec<f64> {
        (0..self.shape[axis])
            .map(|i| self.origin[axis] + i as f64 * self.spacing[axis])
            .collect()
    }

    pub fn flat_index(&self, multi: &[usize]) -> usize {
        let mut idx = 0;
        for (a, &i) in multi.iter().enumerate() {
            idx = idx * self.shape[a] + i;
        }
        idx
    }

    pub fn multi_index(&self, mut flat: usize) -> Vec<usize> {
        let mut multi = vec![0usize; self.ndim()];
        for a in (0..self.ndim()).rev() {
            multi[a] = flat % self.shape[a];
            flat /= self.shape[a];
        }
        multi
    }

    pub fn position(&self, multi: &[usize]) -> Vec<f64> {
        multi
            .iter()
            .enumerate()
            .map(|(a, &i)| self.origin[a] + i as f64 * self.spacing[a])
            .collect()
    }

    /// Index of the node at the origin, when the grid has one.
    pub fn zero_node_index(&self) -> Option<Vec<usize>> {
        let mut idx = Vec::with_capacity(self.ndim());
        for a in 0..self.ndim() {
            let k = (-self.origin[a] / self.spacing[a]).round();
            if k < 0.0 || k >= self.shape[a] as f64 {
                return None;
            }
            if (self.origin[a] + k * self.spacing[a]).abs() > 1e-9 * self.spacing[a] {
                return None;
            }
            idx.push(k as usize);
        }
        Some(idx)
    }

    /// Largest node radius (attained at a corner).
    pub fn circumradius(&self) -> f64 {
        let mut sum = 0.0;
        for a in 0..self.ndim() {
            let lo = self.origin[a].abs();
            let hi = (self.origin[a] + (self.shape[a] - 1) as f64 * self.spacing[a]).abs();
            let m = lo.max(hi);
            sum += m * m;
        }
        sum.sqrt()
    }

    pub fn min_spacing(&self) -> f64 {
        self.spacing.iter().cloned().fold(f64::INFINITY, f64::min)
    }
}

/// Fixed-order compensated (Kahan) accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Kahan {
    sum: f64,
    carry: f64,
}

impl Kahan {
    pub fn add(&mut self, x: f64) {
        let y = x - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum
    }
}

/// A real scalar function sampled on a [`GridGeometry`]. Immutable by
/// convention: operators return new fields.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    geometry: GridGeometry,
    data: Vec<f64>,
}

impl ScalarField {
    pub fn new(geometry: GridGeometry, data: Vec<f64>) -> Result<Self> {
        if data.len() != geometry.len() {
            return Err(Error::InvalidGrid(format!(
                "data length {} does not match grid size {}",
                data.len(),
                geometry.len()
            )));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidGrid("field values must be finite".into()));
        }
        Ok(ScalarField { geometry, data })
    }

    pub fn zeros(geometry: GridGeometry) -> Self {
        let len = geometry.len();
        ScalarField {
            geometry,
            data: vec![0.0; len],
        }
    }

    /// Sample a function of position on every node.
    pub fn from_fn<F: FnMut(&[f64]) -> f64>(geometry: GridGeometry, mut f: F) -> Self {
        let ndim = geometry.ndim();
        let axes: Vec<Vec<f64>> = (0..ndim).map(|a| geometry.axis_coordinates(a)).collect();
        let mut data = Vec::with_capacity(geometry.len());
        let mut multi = vec![0usize; ndim];
        let mut pos = vec![0.0f64; ndim];
        for a in 0..ndim {
            pos[a] = axes[a][0];
        }
        loop {
            data.push(f(&pos));
            // odometer increment, last axis fastest
            let mut a = ndim;
            loop {
                if a == 0 {
                    return ScalarField { geometry, data };
                }
                a -= 1;
                multi[a] += 1;
                if multi[a] < geometry.shape()[a] {
                    pos[a] = axes[a][multi[a]];
                    break;
                }
                multi[a] = 0;
                pos[a] = axes[a][0];
            }
        }
    }

    pub fn geometry(&self) -> &GridGeometry {
        &self.geometry
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    pub fn value(&self, multi: &[usize]) -> f64 {
        self.data[self.geometry.flat_index(multi)]
    }

    pub fn map<F: Fn(f64) -> f64>(&self, f: F) -> ScalarField {
        ScalarField {
            geometry: self.geometry.clone(),
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn scaled(&self, s: f64) -> ScalarField {
        self.map(|v| v * s)
    }

    pub fn zip_with<F: Fn(f64, f64) -> f64>(&self, other: &ScalarField, f: F) -> Result<ScalarField> {
        self.check_same_geometry(other)?;
        Ok(ScalarField {
            geometry: self.geometry.clone(),
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    pub fn add(&self, other: &ScalarField) -> Result<ScalarField> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &ScalarField) -> Result<ScalarField> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn check_same_geometry(&self, other: &ScalarField) -> Result<()> {
        if self.geometry != other.geometry {
            return Err(Error::GeometryMismatch(format!(
                "shapes {:?} vs {:?}",
                self.geometry.shape(),
                other.geometry.shape()
            )));
        }
        Ok(())
    }

    /// Riemann-sum mass: cell volume times the compensated sum of values.
    pub fn mass(&self) -> f64 {
        let mut acc = Kahan::default();
        for &v in &self.data {
            acc.add(v);
        }
        acc.value() * self.geometry.cell_volume()
    }

    pub fn sup_norm(&self) -> f64 {
        self.data.iter().fold(0.0f64, |m, &v| m.max(v.abs()))
    }

    /// Grid L2 norm sqrt(cellvol * sum f^2).
    pub fn l2_norm(&self) -> f64 {
        let mut acc = Kahan::default();
        for &v in &self.data {
            acc.add(v * v);
        }
        (acc.value() * self.geometry.cell_volume()).sqrt()
    }

    pub fn l1_norm(&self) -> f64 {
        let mut acc = Kahan::default();
        for &v in &self.data {
            acc.add(v.abs());
        }
        acc.value() * self.geometry.cell_volume()
    }

    /// max |f| over boundary nodes divided by max |f| overall; large values
    /// mean the zero-extension boundary policy will bite.
    pub fn boundary_peak_ratio(&self) -> f64 {
        let sup = self.sup_norm();
        if sup == 0.0 {
            return 0.0;
        }
        let ndim = self.geometry.ndim();
        let mut bmax = 0.0f64;
        for (flat, &v) in self.data.iter().enumerate() {
            let multi = self.geometry.multi_index(flat);
            let on_boundary =
                (0..ndim).any(|a| multi[a] == 0 || multi[a] == self.geometry.shape()[a] - 1);
            if on_boundary {
                bmax = bmax.max(v.abs());
            }
        }
        bmax / sup
    }

    /// True when the field has decayed below `threshold` times its peak at
    /// the grid boundary (the documented requirement for convolutions).
    pub fn decays_at_boundary(&self, threshold: f64) -> bool {
        self.boundary_peak_ratio() <= threshold
    }
}

/// Discrete convolution of two fields on the same grid, scaled by the cell
/// volume (a Riemann-sum approximation of the continuous convolution), with
/// zero extension outside the grid. Fast path: zero-padded FFT with at least
/// 2x padding per axis.
pub fn convolve(f: &ScalarField, g: &ScalarField) -> Result<ScalarField> {
    f.check_same_geometry(g)?;
    let kern = conv::OffsetKernel::from_field(g)?;
    Ok(conv::convolve_offset_fft(f, &kern))
}

/// Reference O(N^2) implementation of [`convolve`]; same semantics.
pub fn convolve_direct(f: &ScalarField, g: &ScalarField) -> Result<ScalarField> {
    f.check_same_geometry(g)?;
    let kern = conv::OffsetKernel::from_field(g)?;
    Ok(conv::convolve_offset_direct(f, &kern))
}

/// Built-in analytic phantoms.
#[derive(Debug, Clone)]
pub enum Phantom {
    /// exp(-|x|^2 / sigma^2)
    Gaussian { sigma: f64 },
    /// indicator of |x| <= radius
    Disk { radius: f64 },
    /// the reconstructing kernel w for a spec
    KernelW(KernelSpec),
    /// its Riesz image h
    KernelH(KernelSpec),
}

pub fn phantom(kind: &Phantom, geometry: &GridGeometry) -> ScalarField {
    match kind {
        Phantom::Gaussian { sigma } => {
            assert!(*sigma > 0.0, "gaussian width must be positive");
            let inv = 1.0 / (sigma * sigma);
            ScalarField::from_fn(geometry.clone(), |x| {
                let r2: f64 = x.iter().map(|v| v * v).sum();
                (-r2 * inv).exp()
            })
        }
        Phantom::Disk { radius } => {
            assert!(*radius > 0.0, "disk radius must be positive");
            let r2max = radius * radius;
            ScalarField::from_fn(geometry.clone(), |x| {
                let r2: f64 = x.iter().map(|v| v * v).sum();
                if r2 <= r2max {
                    1.0
                } else {
                    0.0
                }
            })
        }
        Phantom::KernelW(spec) => {
            let w = kernels::build_w(spec);
            kernels::sample_scaled(&w, 1.0, geometry)
        }
        Phantom::KernelH(spec) => {
            let h = kernels::build_h(spec).expect("validated spec has a != 0");
            kernels::sample_scaled(&h, 1.0, geometry)
        }
    }
}

/// Error metrics of `f` against the reference `g`.
#[derive(Debug, Clone, Copy)]
pub struct Metrics {
    pub sup_err: f64,
    pub l2_rel: f64,
    pub l1_rel: f64,
    /// set when the reference norm vanishes and absolute norms are reported
    pub reference_zero: bool,
}

pub fn metrics(f: &ScalarField, g: &ScalarField) -> Result<Metrics> {
    f.check_same_geometry(g)?;
    let diff = f.sub(g)?;
    let l2_ref = g.l2_norm();
    let l1_ref = g.l1_norm();
    let reference_zero = l2_ref == 0.0;
    Ok(Metrics {
        sup_err: diff.sup_norm(),
        l2_rel: if reference_zero {
            diff.l2_norm()
        } else {
            diff.l2_norm() / l2_ref
        },
        l1_rel: if l1_ref == 0.0 {
            diff.l1_norm()
        } else {
            diff.l1_norm() / l1_ref
        },
        reference_zero,
    })
}
