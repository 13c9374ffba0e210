//! Zero-padded FFT convolution of grid fields with kernels given on offset
//! grids, plus the O(N^2) reference implementation.
//!
//! A kernel is a function of the node-offset vector: entry `k` holds the
//! kernel value at offset `(k - zero) * spacing`. A field convolved with a
//! kernel sampled on its own geometry only sees offsets up to one grid
//! half-width; operators that need the full range (every pair of nodes)
//! build kernels on the doubled offset grid instead.

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::fields::{GridGeometry, ScalarField};

/// Kernel samples on an offset grid.
#[derive(Debug, Clone)]
pub struct OffsetKernel {
    pub shape: Vec<usize>,
    /// index of the zero offset, per axis
    pub zero: Vec<usize>,
    pub data: Vec<f64>,
}

impl OffsetKernel {
    /// Reinterpret a field on a symmetric grid as a kernel of offsets.
    pub fn from_field(g: &ScalarField) -> Result<Self> {
        let zero = g.geometry().zero_node_index().ok_or_else(|| {
            Error::GeometryMismatch(
                "convolution kernel grid must contain the origin as a node".into(),
            )
        })?;
        Ok(OffsetKernel {
            shape: g.geometry().shape().to_vec(),
            zero,
            data: g.data().to_vec(),
        })
    }

    /// Sample a function of the offset vector on the doubled offset grid of
    /// `geometry` (offsets (i - j) h for every node pair i, j).
    pub fn from_offset_fn<F: FnMut(&[f64]) -> f64>(geometry: &GridGeometry, mut f: F) -> Self {
        let ndim = geometry.ndim();
        let shape: Vec<usize> = geometry.shape().iter().map(|&n| 2 * n - 1).collect();
        let zero: Vec<usize> = geometry.shape().iter().map(|&n| n - 1).collect();
        let len: usize = shape.iter().product();
        let mut data = Vec::with_capacity(len);
        let mut multi = vec![0usize; ndim];
        let mut off = vec![0.0f64; ndim];
        for a in 0..ndim {
            off[a] = -(zero[a] as f64) * geometry.spacing()[a];
        }
        loop {
            data.push(f(&off));
            let mut a = ndim;
            loop {
                if a == 0 {
                    return OffsetKernel { shape, zero, data };
                }
                a -= 1;
                multi[a] += 1;
                if multi[a] < shape[a] {
                    off[a] = (multi[a] as f64 - zero[a] as f64) * geometry.spacing()[a];
                    break;
                }
                multi[a] = 0;
                off[a] = -(zero[a] as f64) * geometry.spacing()[a];
            }
        }
    }
}

fn multi_from_flat(shape: &[usize], mut flat: usize) -> Vec<usize> {
    let mut multi = vec![0usize; shape.len()];
    for a in (0..shape.len()).rev() {
        multi[a] = flat % shape[a];
        flat /= shape[a];
    }
    multi
}

/// In-place complex FFT along every axis of a row-major n-d array.
pub fn fft_nd(data: &mut [Complex<f64>], shape: &[usize], inverse: bool) {
    let mut planner = FftPlanner::new();
    let total: usize = shape.iter().product();
    assert_eq!(data.len(), total);
    for axis in 0..shape.len() {
        let len = shape[axis];
        let fft = if inverse {
            planner.plan_fft_inverse(len)
        } else {
            planner.plan_fft_forward(len)
        };
        let stride: usize = shape[axis + 1..].iter().product();
        let outer: usize = shape[..axis].iter().product();
        let mut line = vec![Complex::default(); len];
        for o in 0..outer {
            for s in 0..stride {
                let base = o * len * stride + s;
                for k in 0..len {
                    line[k] = data[base + k * stride];
                }
                fft.process(&mut line);
                for k in 0..len {
                    data[base + k * stride] = line[k];
                }
            }
        }
    }
    if inverse {
        let norm = 1.0 / total as f64;
        for v in data.iter_mut() {
            *v *= norm;
        }
    }
}

fn pad_shape(field_shape: &[usize], kern_shape: &[usize]) -> Vec<usize> {
    field_shape
        .iter()
        .zip(kern_shape)
        .map(|(&n, &k)| (n + k - 1).next_power_of_two())
        .collect()
}

fn embed(dst: &mut [Complex<f64>], dst_shape: &[usize], src: &[f64], src_shape: &[usize]) {
    let ndim = dst_shape.len();
    for (flat, &v) in src.iter().enumerate() {
        let multi = multi_from_flat(src_shape, flat);
        let mut idx = 0;
        for a in 0..ndim {
            idx = idx * dst_shape[a] + multi[a];
        }
        dst[idx] = Complex::new(v, 0.0);
    }
}

/// out[i] = cellvol * sum_j f[j] K(i - j), zero extension outside the grid.
pub fn convolve_offset_fft(f: &ScalarField, kern: &OffsetKernel) -> ScalarField {
    let geom = f.geometry();
    let fshape = geom.shape();
    let padded = pad_shape(fshape, &kern.shape);
    let total: usize = padded.iter().product();

    let mut fa = vec![Complex::default(); total];
    embed(&mut fa, &padded, f.data(), fshape);
    let mut ka = vec![Complex::default(); total];
    embed(&mut ka, &padded, &kern.data, &kern.shape);

    fft_nd(&mut fa, &padded, false);
    fft_nd(&mut ka, &padded, false);
    for (a, b) in fa.iter_mut().zip(&ka) {
        *a *= *b;
    }
    fft_nd(&mut fa, &padded, true);

    let cellvol = geom.cell_volume();
    let mut out = Vec::with_capacity(geom.len());
    for flat in 0..geom.len() {
        let multi = geom.multi_index(flat);
        let mut idx = 0;
        for a in 0..padded.len() {
            idx = idx * padded[a] + multi[a] + kern.zero[a];
        }
        out.push(fa[idx].re * cellvol);
    }
    ScalarField::new(geom.clone(), out).expect("convolution output finite")
}

/// Reference direct implementation of [`convolve_offset_fft`].
pub fn convolve_offset_direct(f: &ScalarField, kern: &OffsetKernel) -> ScalarField {
    let geom = f.geometry();
    let ndim = geom.ndim();
    let fshape = geom.shape();
    let cellvol = geom.cell_volume();
    let mut out = vec![0.0f64; geom.len()];
    for (oflat, slot) in out.iter_mut().enumerate() {
        let omulti = geom.multi_index(oflat);
        let mut acc = 0.0;
        for (jflat, &fv) in f.data().iter().enumerate() {
            if fv == 0.0 {
                continue;
            }
            let jmulti = multi_from_flat(fshape, jflat);
            let mut kidx = 0;
            let mut ok = true;
            for a in 0..ndim {
                let k = omulti[a] as isize - jmulti[a] as isize + kern.zero[a] as isize;
                if k < 0 || k >= kern.shape[a] as isize {
                    ok = false;
                    break;
                }
                kidx = kidx * kern.shape[a] + k as usize;
            }
            if ok {
                acc += fv * kern.data[kidx];
            }
        }
        *slot = acc * cellvol;
    }
    ScalarField::new(geom.clone(), out).expect("convolution output finite")
}
