//! Normalizing constants for Riesz potentials and Radon-John transforms,
//! evaluated in closed form with explicit pole detection.
//!
//! Everything here reduces to the Euler gamma function. The inversion
//! formulas divide by these constants, so a vanishing or infinite value is
//! reported as an error instead of leaking a NaN into a pipeline.

use crate::error::{Error, PoleEffect, Result};

use std::f64::consts::PI;

/// Arguments this close to a nonpositive integer are treated as gamma poles.
/// Inputs are user-supplied reals; exact comparison would be brittle.
pub const POLE_TOLERANCE: f64 = 1e-9;

// Lanczos coefficients, g = 7, 9 terms (GNU Scientific Library values).
#[allow(clippy::excessive_precision)]
const LANCZOS: [f64; 9] = [
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
];

/// True when `x` lies within [`POLE_TOLERANCE`] of a nonpositive integer.
pub fn is_gamma_pole(x: f64) -> bool {
    x < 0.5 && (x - x.round()).abs() <= POLE_TOLERANCE && x.round() <= 0.0
}

/// Euler gamma function via the Lanczos approximation (g = 7, 9 coefficients),
/// with the reflection formula for arguments below 1/2.
///
/// Relative accuracy is ~1e-14 on [-50, 50] away from poles; at a pole the
/// result is infinite or NaN, so callers that care use [`is_gamma_pole`].
pub fn gamma(x: f64) -> f64 {
    if x < 0.5 {
        // sin(pi x) by argument reduction: x = k + d with |d| <= 1/2 keeps the
        // relative accuracy of the reflection formula near negative integers.
        let k = x.round();
        let d = x - k;
        let sin_pi_x = if (k as i64) % 2 == 0 {
            (PI * d).sin()
        } else {
            -(PI * d).sin()
        };
        PI / (sin_pi_x * gamma(1.0 - x))
    } else {
        let z = x - 1.0;
        let mut acc = LANCZOS[0];
        for (i, &p) in LANCZOS.iter().enumerate().skip(1) {
            acc += p / (z + i as f64);
        }
        let t = z + 7.5;
        (2.0 * PI).sqrt() * t.powf(z + 0.5) * (-t).exp() * acc
    }
}

/// Surface area of the unit k-sphere embedded in R^{k+1}:
/// sigma_k = 2 pi^{(k+1)/2} / Gamma((k+1)/2).
pub fn sigma(k: usize) -> f64 {
    let half = (k as f64 + 1.0) / 2.0;
    2.0 * PI.powf(half) / gamma(half)
}

/// The Riesz-potential normalizing constant
/// gamma_n(alpha) = 2^alpha pi^{n/2} Gamma(alpha/2) / Gamma((n - alpha)/2).
///
/// Fails with [`Error::Pole`]: an `Infinite` effect when Gamma(alpha/2) poles
/// (alpha in {0, -2, -4, ...}), a `Vanishing` effect when the denominator
/// poles (alpha in {n, n+2, ...}), which drives the whole constant to zero.
pub fn gamma_n(n: usize, alpha: f64) -> Result<f64> {
    let num_arg = alpha / 2.0;
    let den_arg = (n as f64 - alpha) / 2.0;
    if is_gamma_pole(num_arg) {
        return Err(Error::Pole {
            arg: num_arg,
            effect: PoleEffect::Infinite,
        });
    }
    if is_gamma_pole(den_arg) {
        return Err(Error::Pole {
            arg: den_arg,
            effect: PoleEffect::Vanishing,
        });
    }
    Ok(2f64.powf(alpha) * PI.powf(n as f64 / 2.0) * gamma(num_arg) / gamma(den_arg))
}

/// Kernel configuration (n, alpha, m) threaded through every pipeline.
///
/// Invariants enforced at construction: 0 < alpha < n, 2m > alpha, and
/// c_{alpha,m} = gamma_n(2m - alpha) is finite and nonzero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelSpec {
    n: usize,
    alpha: f64,
    m: u32,
}

/// The default smoothness order: m = floor((alpha + 2) / 2).
///
/// For integer alpha this is the choice that guarantees c_{alpha,m} != 0;
/// for non-integer alpha any m > alpha/2 works and the same rule is kept.
pub fn default_m(alpha: f64) -> u32 {
    (((alpha + 2.0) / 2.0).floor() as u32).max(1)
}

impl KernelSpec {
    pub fn new(n: usize, alpha: f64, m: u32) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidSpec(format!("dimension must be >= 1, got {n}")));
        }
        if !alpha.is_finite() || alpha <= 0.0 || alpha >= n as f64 {
            return Err(Error::Domain { alpha, n });
        }
        if m < 1 {
            return Err(Error::InvalidSpec("smoothness order m must be >= 1".into()));
        }
        if 2.0 * m as f64 <= alpha {
            return Err(Error::InvalidSpec(format!(
                "need 2m > alpha, got m={m}, alpha={alpha}"
            )));
        }
        let spec = KernelSpec { n, alpha, m };
        // the inversion formulas divide by c, so reject degenerate choices now
        spec.c()?;
        Ok(spec)
    }

    /// Construct with the default m = floor((alpha + 2)/2).
    pub fn with_default_m(n: usize, alpha: f64) -> Result<Self> {
        Self::new(n, alpha, default_m(alpha))
    }

    /// Range checks only, without the c_{alpha,m} degeneracy check. Lets the
    /// constant landscape be inspected (a_{alpha,m} legitimately vanishes at
    /// the same parameters where c does).
    pub fn new_relaxed(n: usize, alpha: f64, m: u32) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidSpec(format!("dimension must be >= 1, got {n}")));
        }
        if !alpha.is_finite() || alpha <= 0.0 || alpha >= n as f64 {
            return Err(Error::Domain { alpha, n });
        }
        if m < 1 || 2.0 * m as f64 <= alpha {
            return Err(Error::InvalidSpec(format!(
                "need m >= 1 and 2m > alpha, got m={m}, alpha={alpha}"
            )));
        }
        Ok(KernelSpec { n, alpha, m })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// c_{alpha,m} = gamma_n(2m - alpha).
    pub fn c(&self) -> Result<f64> {
        c_alpha_m(self)
    }

    /// d_{alpha,m} = (2m - alpha) c_{alpha,m}.
    pub fn d(&self) -> Result<f64> {
        d_alpha_m(self)
    }

    /// a_{alpha,m}, the amplitude of the closed-form Riesz image h.
    pub fn a(&self) -> f64 {
        a_alpha_m(self)
    }
}

impl std::fmt::Display for KernelSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(n={}, alpha={}, m={})", self.n, self.alpha, self.m)
    }
}

/// a_{alpha,m} = 2^{2m-alpha} Gamma((n+2m-alpha)/2) / Gamma((n+alpha-2m)/2).
///
/// Returns exactly 0 when the denominator argument hits a nonpositive
/// integer; the vanishing is meaningful (h degenerates) rather than an error.
///
/// When 2m - alpha is an integer k, the gamma ratio telescopes to the exact
/// product prod_{j=0}^{k-1} ((n+alpha-2m)/2 + j) of half-integers, and the
/// result is exact in f64 (the vanishing case falls out as a zero factor).
pub fn a_alpha_m(spec: &KernelSpec) -> f64 {
    let n = spec.n as f64;
    let two_m = 2.0 * spec.m as f64;
    let order = two_m - spec.alpha;
    let den_arg = (n + spec.alpha - two_m) / 2.0;
    if order == order.round() && order > 0.0 {
        let k = order as u32;
        let mut prod = 1.0;
        for j in 0..k {
            prod *= den_arg + j as f64;
        }
        return 2f64.powi(k as i32) * prod;
    }
    if is_gamma_pole(den_arg) {
        return 0.0;
    }
    let num_arg = (n + two_m - spec.alpha) / 2.0;
    2f64.powf(order) * gamma(num_arg) / gamma(den_arg)
}

/// c_{alpha,m} = gamma_n(2m - alpha), the constant of the approximate
/// inversion formula. Degenerate (zero or infinite) values are errors: the
/// reconstruction divides by this number.
pub fn c_alpha_m(spec: &KernelSpec) -> Result<f64> {
    let order = 2.0 * spec.m as f64 - spec.alpha;
    match gamma_n(spec.n, order) {
        Ok(c) => Ok(c),
        Err(Error::Pole { arg, effect }) => Err(Error::DegenerateConstant(format!(
            "c_{{alpha,m}} for {spec} is {} (gamma pole at {arg}); pick a different m",
            match effect {
                PoleEffect::Vanishing => "zero",
                PoleEffect::Infinite => "infinite",
            }
        ))),
        Err(e) => Err(e),
    }
}

/// d_{alpha,m} = (2m - alpha) c_{alpha,m}, the constant of the scale-integral
/// (wavelet) inversion formula.
pub fn d_alpha_m(spec: &KernelSpec) -> Result<f64> {
    Ok((2.0 * spec.m as f64 - spec.alpha) * c_alpha_m(spec)?)
}

fn check_plane_codim(n: usize, k: usize) -> Result<()> {
    if k < 1 || k >= n {
        return Err(Error::InvalidSpec(format!(
            "plane dimension must satisfy 1 <= k < n, got k={k}, n={n}"
        )));
    }
    Ok(())
}

/// The Fuglede-formula constant d_{k,n} = (2 pi)^k sigma_{n-k-1} / sigma_{n-1}
/// in R* R = d_{k,n} I^k.
pub fn fuglede_const(n: usize, k: usize) -> Result<f64> {
    check_plane_codim(n, k)?;
    Ok((2.0 * PI).powi(k as i32) * sigma(n - k - 1) / sigma(n - 1))
}

/// lambda_k = 4^m pi^{(n+k)/2} Gamma(n/2) Gamma(m - k/2)
///          / [Gamma((n-k)/2) Gamma((n+k)/2 - m)], with m = floor((k+2)/2):
/// the constant of the approximate Radon inversion formula.
pub fn lambda_k(n: usize, k: usize) -> Result<f64> {
    check_plane_codim(n, k)?;
    let m = default_m(k as f64) as f64;
    let nf = n as f64;
    let kf = k as f64;
    let den1 = (nf - kf) / 2.0;
    let den2 = (nf + kf) / 2.0 - m;
    for arg in [den1, den2] {
        if is_gamma_pole(arg) {
            return Err(Error::DegenerateConstant(format!(
                "lambda_k(n={n}, k={k}) vanishes (gamma pole at {arg})"
            )));
        }
    }
    let num1 = nf / 2.0;
    let num2 = m - kf / 2.0;
    for arg in [num1, num2] {
        if is_gamma_pole(arg) {
            return Err(Error::DegenerateConstant(format!(
                "lambda_k(n={n}, k={k}) is infinite (gamma pole at {arg})"
            )));
        }
    }
    Ok(4f64.powf(m) * PI.powf((nf + kf) / 2.0) * gamma(num1) * gamma(num2)
        / (gamma(den1) * gamma(den2)))
}

/// delta_k = (2m - k) lambda_k, the constant of the scale-integral Radon
/// inversion formula, with m = floor((k+2)/2).
pub fn delta_k(n: usize, k: usize) -> Result<f64> {
    let m = default_m(k as f64) as f64;
    Ok((2.0 * m - k as f64) * lambda_k(n, k)?)
}
