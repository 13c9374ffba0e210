//! Forward Riesz potential I^alpha on sampled fields, by singular-kernel
//! quadrature and by a Fourier multiplier, plus Fourier-side checks of the
//! reconstructing-kernel constants.

use rustfft::num_complex::Complex;

use crate::constants::{gamma_n, sigma};
use crate::conv::{self, OffsetKernel};
use crate::error::{Error, Result};
use crate::fields::ScalarField;

use std::f64::consts::TAU;

fn check_alpha(f: &ScalarField, alpha: f64) -> Result<usize> {
    let n = f.geometry().ndim();
    if !alpha.is_finite() || alpha <= 0.0 || alpha >= n as f64 {
        return Err(Error::Domain { alpha, n });
    }
    Ok(n)
}

/// I^alpha f by Riemann-sum convolution with the kernel
/// |z|^{alpha-n} / gamma_n(alpha), sampled on the doubled offset grid so
/// every node pair contributes. The singular cell is replaced by the exact
/// integral of the kernel over the volume-equivalent ball: the cell at z = 0
/// contributes f(x) sigma_{n-1} rho^alpha / (alpha gamma_n(alpha)) with
/// vol(B_rho) = cellvol. Zero extension outside the grid.
pub fn riesz_quadrature(f: &ScalarField, alpha: f64) -> Result<ScalarField> {
    let n = check_alpha(f, alpha)?;
    let geom = f.geometry();
    let gam = gamma_n(n, alpha)?;
    let cellvol = geom.cell_volume();
    let surf = sigma(n - 1);
    // volume-equivalent ball: cellvol = sigma_{n-1} rho^n / n
    let rho = (n as f64 * cellvol / surf).powf(1.0 / n as f64);
    let center = surf * rho.powf(alpha) / (alpha * gam * cellvol);
    let kern = OffsetKernel::from_offset_fn(geom, |off| {
        let r2: f64 = off.iter().map(|v| v * v).sum();
        if r2 == 0.0 {
            center
        } else {
            r2.powf(0.5 * (alpha - n as f64)) / gam
        }
    });
    Ok(conv::convolve_offset_fft(f, &kern))
}

/// Mean of |xi|^{-alpha} over the frequency cell centered at `center` with
/// per-axis widths `dxi`, by midpoint subsampling; the singular subcell at
/// the origin integrates exactly over the volume-equivalent ball.
fn multiplier_cell_mean(center: &[f64], dxi: &[f64], alpha: f64) -> f64 {
    let ndim = center.len();
    let sub = 17usize;
    let subvol: f64 = dxi.iter().map(|d| d / sub as f64).product();
    let cellvol: f64 = dxi.iter().product();
    let mut idx = vec![0usize; ndim];
    let mut acc = 0.0;
    loop {
        let mut xi2 = 0.0;
        for a in 0..ndim {
            let x = center[a] + (idx[a] as f64 - (sub as f64 - 1.0) / 2.0) * dxi[a] / sub as f64;
            xi2 += x * x;
        }
        if xi2 == 0.0 {
            // int_{B_rho} |xi|^{-alpha} = sigma_{n-1} rho^{n-alpha} / (n - alpha),
            // with vol(B_rho) = subvol
            let surf = sigma(ndim - 1);
            let rho = (ndim as f64 * subvol / surf).powf(1.0 / ndim as f64);
            acc += surf * rho.powf(ndim as f64 - alpha) / (ndim as f64 - alpha);
        } else {
            acc += xi2.powf(-0.5 * alpha) * subvol;
        }
        let mut a = ndim;
        loop {
            if a == 0 {
                return acc / cellvol;
            }
            a -= 1;
            idx[a] += 1;
            if idx[a] < sub {
                break;
            }
            idx[a] = 0;
        }
    }
}

/// I^alpha f as the Fourier multiplier |xi|^{-alpha} on a grid zero-padded
/// 4x per axis. Bins within two steps of zero frequency (the zero bin
/// included) carry the exact cell mean of the multiplier instead of its
/// point value: |xi|^{-alpha} is integrable but singular there, and point
/// sampling the zero-adjacent cells leaves a flat bias on the output.
/// Carries a periodization bias from the implicit tiling; intended for fast
/// experimentation.
pub fn riesz_spectral(f: &ScalarField, alpha: f64) -> Result<ScalarField> {
    check_alpha(f, alpha)?;
    let geom = f.geometry();
    let shape = geom.shape();
    let ndim = geom.ndim();
    let padded: Vec<usize> = shape.iter().map(|&n| (4 * n).next_power_of_two()).collect();
    let total: usize = padded.iter().product();

    let mut data = vec![Complex::default(); total];
    for (flat, &v) in f.data().iter().enumerate() {
        let multi = geom.multi_index(flat);
        let mut idx = 0;
        for a in 0..ndim {
            idx = idx * padded[a] + multi[a];
        }
        data[idx] = Complex::new(v, 0.0);
    }
    conv::fft_nd(&mut data, &padded, false);

    // frequency step per axis
    let dxi: Vec<f64> = (0..ndim)
        .map(|a| TAU / (padded[a] as f64 * geom.spacing()[a]))
        .collect();

    let mut multi = vec![0usize; ndim];
    let mut signed = vec![0f64; ndim];
    let mut center = vec![0f64; ndim];
    for (idx, v) in data.iter_mut().enumerate() {
        let mut rem = idx;
        for a in (0..ndim).rev() {
            multi[a] = rem % padded[a];
            rem /= padded[a];
        }
        let mut near_zero = true;
        let mut xi2 = 0.0;
        for a in 0..ndim {
            let k = multi[a];
            let s = if k <= padded[a] / 2 {
                k as f64
            } else {
                k as f64 - padded[a] as f64
            };
            signed[a] = s;
            near_zero &= s.abs() <= 2.0;
            let x = s * dxi[a];
            center[a] = x;
            xi2 += x * x;
        }
        let mult = if near_zero {
            multiplier_cell_mean(&center, &dxi, alpha)
        } else {
            xi2.powf(-0.5 * alpha)
        };
        *v *= mult;
    }

    conv::fft_nd(&mut data, &padded, true);
    let mut out = Vec::with_capacity(geom.len());
    for flat in 0..geom.len() {
        let multi = geom.multi_index(flat);
        let mut idx = 0;
        for a in 0..ndim {
            idx = idx * padded[a] + multi[a];
        }
        out.push(data[idx].re);
    }
    ScalarField::new(geom.clone(), out)
}
