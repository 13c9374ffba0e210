//! Closed-form radial kernel profiles and the exact symbolic calculus on them.
//!
//! Every kernel in the reconstruction family is of the form
//! `x -> p(|x|^2) (1 + |x|^2)^g` with a polynomial `p` and a real exponent
//! `g`. The radial part of the Laplacian maps this class to itself:
//! applying `L f = 2n f' + 4 r f''` (so that `Delta[f(|x|^2)] = (Lf)(|x|^2)`)
//! lowers the exponent by 2 and raises the polynomial degree by at most 1.
//! Coefficients are kept as exact big rationals; f64 inputs are dyadic
//! rationals, so the whole symbolic path is exact and rounding only enters
//! when a profile is evaluated.

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};

use crate::constants::{sigma, KernelSpec};
use crate::error::{Error, Result};
use crate::fields::{GridGeometry, ScalarField};

type Rat = Ratio<BigInt>;

fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

fn rat_from_f64(x: f64) -> Rat {
    Rat::from_float(x).expect("finite float")
}

/// A radial function `x -> p(|x|^2) (1 + |x|^2)^gamma` with exact rational
/// polynomial coefficients. Immutable once built; the zero function is the
/// empty polynomial.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialProfile {
    /// p's coefficients, constant term first, no trailing zeros.
    coeffs: Vec<Rat>,
    gamma: Rat,
    // f64 copies for evaluation
    eval_coeffs: Vec<f64>,
    eval_gamma: f64,
}

impl RadialProfile {
    /// Canonical form: trailing zero coefficients stripped, common `(1 + r)`
    /// factors of `p` absorbed into the exponent.
    pub fn new(mut coeffs: Vec<Rat>, mut gamma: Rat) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            gamma = Rat::zero();
        }
        // absorb (1+r) | p(r) into the exponent: keeps representations unique
        while coeffs.len() > 1 && poly_eval_at_minus_one(&coeffs).is_zero() {
            coeffs = poly_div_one_plus_r(&coeffs);
            gamma += rat(1);
        }
        let eval_coeffs = coeffs.iter().map(|c| c.to_f64().unwrap()).collect();
        let eval_gamma = gamma.to_f64().unwrap();
        RadialProfile {
            coeffs,
            gamma,
            eval_coeffs,
            eval_gamma,
        }
    }

    pub fn from_f64_coeffs(coeffs: &[f64], gamma: f64) -> Self {
        Self::new(
            coeffs.iter().map(|&c| rat_from_f64(c)).collect(),
            rat_from_f64(gamma),
        )
    }

    pub fn zero() -> Self {
        Self::new(Vec::new(), Rat::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree of p; the zero profile reports degree 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coefficients(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn coefficients_f64(&self) -> &[f64] {
        &self.eval_coeffs
    }

    pub fn gamma_exp(&self) -> &Rat {
        &self.gamma
    }

    pub fn gamma_exp_f64(&self) -> f64 {
        self.eval_gamma
    }

    /// deg(p) + gamma: the profile decays like |x|^{2 (deg + gamma)}.
    pub fn decay_sum(&self) -> Rat {
        rat(self.degree() as i64) + self.gamma.clone()
    }

    /// Integrable over R^n iff 2 (deg + gamma) < -n, decided exactly.
    pub fn is_integrable(&self, n: usize) -> bool {
        self.is_zero() || rat(2) * self.decay_sum() < rat(-(n as i64))
    }

    /// Value at r = |x|^2.
    pub fn value_r2(&self, r: f64) -> f64 {
        if self.eval_coeffs.is_empty() {
            return 0.0;
        }
        let mut p = 0.0;
        for &c in self.eval_coeffs.iter().rev() {
            p = p * r + c;
        }
        p * (1.0 + r).powf(self.eval_gamma)
    }

    /// Value at a point of R^n.
    pub fn value_at(&self, x: &[f64]) -> f64 {
        self.value_r2(x.iter().map(|v| v * v).sum())
    }

    /// Values at a list of r = |x|^2 abscissas.
    pub fn evaluate(&self, radii_squared: &[f64]) -> Vec<f64> {
        radii_squared.iter().map(|&r| self.value_r2(r)).collect()
    }

    /// Value of the scaled kernel t^{-n} f(x/t) at radius-squared r = |x|^2.
    pub fn value_scaled_r2(&self, t: f64, n: usize, r: f64) -> f64 {
        t.powi(-(n as i32)) * self.value_r2(r / (t * t))
    }

    /// The radial Laplacian `L f = 2n f' + 4 r f''` applied symbolically:
    /// `Delta[f(|x|^2)] = (Lf)(|x|^2)`. Exponent drops by 2 (before
    /// canonical cancellation), degree grows by at most 1.
    pub fn apply_l(&self, n: usize) -> RadialProfile {
        if self.is_zero() {
            return RadialProfile::zero();
        }
        let p = &self.coeffs;
        let g = &self.gamma;
        let two_n = rat(2 * n as i64);
        let p1 = poly_derivative(p);
        let p2 = poly_derivative(&p1);

        // q = 2n (1+r)^2 p' + 2n g (1+r) p + 4 r (1+r)^2 p''
        //     + 8 g r (1+r) p' + 4 g (g-1) r p
        let mut q = poly_scale(&poly_mul_one_plus_r(&poly_mul_one_plus_r(&p1)), &two_n);
        q = poly_add(
            &q,
            &poly_scale(&poly_mul_one_plus_r(p), &(two_n.clone() * g.clone())),
        );
        q = poly_add(
            &q,
            &poly_scale(
                &poly_mul_r(&poly_mul_one_plus_r(&poly_mul_one_plus_r(&p2))),
                &rat(4),
            ),
        );
        q = poly_add(
            &q,
            &poly_scale(
                &poly_mul_r(&poly_mul_one_plus_r(&p1)),
                &(rat(8) * g.clone()),
            ),
        );
        q = poly_add(
            &q,
            &poly_scale(
                &poly_mul_r(p),
                &(rat(4) * g.clone() * (g.clone() - rat(1))),
            ),
        );
        RadialProfile::new(q, g.clone() - rat(2))
    }

    pub fn negated(&self) -> RadialProfile {
        RadialProfile::new(
            self.coeffs.iter().map(|c| -c.clone()).collect(),
            self.gamma.clone(),
        )
    }

    pub fn scaled(&self, factor: &Rat) -> RadialProfile {
        if factor.is_zero() {
            return RadialProfile::zero();
        }
        RadialProfile::new(
            self.coeffs.iter().map(|c| c * factor).collect(),
            self.gamma.clone(),
        )
    }

    pub fn scaled_f64(&self, factor: f64) -> RadialProfile {
        self.scaled(&rat_from_f64(factor))
    }
}

impl std::fmt::Display for RadialProfile {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        write!(f, "(")?;
        for (k, c) in self.coeffs.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}")?;
            if k == 1 {
                write!(f, " r")?;
            } else if k > 1 {
                write!(f, " r^{k}")?;
            }
        }
        write!(f, ") (1+r)^({})", self.gamma)
    }
}

fn poly_eval_at_minus_one(p: &[Rat]) -> Rat {
    let mut acc = Rat::zero();
    for c in p.iter().rev() {
        acc = -acc + c;
    }
    acc
}

fn poly_div_one_plus_r(p: &[Rat]) -> Vec<Rat> {
    // synthetic division by (r + 1); caller guarantees zero remainder
    let d = p.len() - 1;
    let mut q = vec![Rat::zero(); d];
    let mut carry = p[d].clone();
    for k in (1..=d).rev() {
        q[k - 1] = carry.clone();
        carry = &p[k - 1] - &carry;
    }
    q
}

fn poly_derivative(p: &[Rat]) -> Vec<Rat> {
    if p.len() <= 1 {
        return Vec::new();
    }
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * rat(k as i64))
        .collect()
}

fn poly_add(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut out = vec![Rat::zero(); a.len().max(b.len())];
    for (k, c) in a.iter().enumerate() {
        out[k] += c;
    }
    for (k, c) in b.iter().enumerate() {
        out[k] += c;
    }
    out
}

fn poly_scale(p: &[Rat], s: &Rat) -> Vec<Rat> {
    p.iter().map(|c| c * s).collect()
}

fn poly_mul_r(p: &[Rat]) -> Vec<Rat> {
    if p.is_empty() {
        return Vec::new();
    }
    let mut out = Vec::with_capacity(p.len() + 1);
    out.push(Rat::zero());
    out.extend_from_slice(p);
    out
}

fn poly_mul_one_plus_r(p: &[Rat]) -> Vec<Rat> {
    if p.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rat::zero(); p.len() + 1];
    for (k, c) in p.iter().enumerate() {
        out[k] += c;
        out[k + 1] += c;
    }
    out
}

fn gamma_base(spec: &KernelSpec) -> Rat {
    // m - (n + alpha)/2, exactly
    rat(spec.m() as i64) - (rat(spec.n() as i64) + rat_from_f64(spec.alpha())) / rat(2)
}

fn gamma_h(spec: &KernelSpec) -> Rat {
    // (alpha - n)/2 - m
    (rat_from_f64(spec.alpha()) - rat(spec.n() as i64)) / rat(2) - rat(spec.m() as i64)
}

/// The reconstructing kernel `w = (-Delta)^m [(1+|x|^2)^{m-(n+alpha)/2}]`,
/// built by m symbolic applications of `-L`.
///
/// The output decays at least as fast as `(1+|x|^2)^{-(n+alpha)/2}`; for most
/// specs this holds with equality, but when the starting exponent hits a root
/// of the leading-coefficient recursion (even integer alpha, e.g. n=3,
/// alpha=2, m=2) a leading term cancels and the kernel decays strictly
/// faster.
pub fn build_w(spec: &KernelSpec) -> RadialProfile {
    let mut profile = RadialProfile::new(vec![rat(1)], gamma_base(spec));
    for _ in 0..spec.m() {
        profile = profile.apply_l(spec.n());
        profile = profile.negated();
    }
    let bound = -(rat(spec.n() as i64) + rat_from_f64(spec.alpha())) / rat(2);
    assert!(
        profile.decay_sum() <= bound,
        "w decay invariant violated for {spec}"
    );
    assert!(profile.is_integrable(spec.n()), "w not integrable for {spec}");
    profile
}

/// The Riesz image `h = I^alpha w = a_{alpha,m} (1+|x|^2)^{(alpha-n)/2-m}`.
pub fn build_h(spec: &KernelSpec) -> Result<RadialProfile> {
    let a = spec.a();
    if a == 0.0 {
        return Err(Error::DegenerateConstant(format!(
            "a_{{alpha,m}} vanishes for {spec}: h degenerates"
        )));
    }
    let profile = RadialProfile::new(vec![rat_from_f64(a)], gamma_h(spec));
    assert!(profile.is_integrable(spec.n()), "h not integrable for {spec}");
    Ok(profile)
}

/// The differentiated kernel `w~ = -Delta w`.
pub fn build_w_tilde(spec: &KernelSpec) -> RadialProfile {
    let wt = build_w(spec).apply_l(spec.n()).negated();
    assert!(wt.is_integrable(spec.n()), "w~ not integrable for {spec}");
    wt
}

/// Its Riesz image `h~ = I^alpha w~ = -a_{alpha,m} Delta[(1+|x|^2)^{(alpha-n)/2-m}]`.
pub fn build_h_tilde(spec: &KernelSpec) -> Result<RadialProfile> {
    let ht = build_h(spec)?.apply_l(spec.n()).negated();
    assert!(ht.is_integrable(spec.n()), "h~ not integrable for {spec}");
    Ok(ht)
}

/// The integrated-scale kernel from the wavelet inversion proof:
/// `psi = a_{alpha,m} (n + 2m - alpha) (1+|x|^2)^{(alpha-n)/2-m-1}`, a
/// positive approximate identity with total mass d_{alpha,m}.
pub fn build_psi(spec: &KernelSpec) -> Result<RadialProfile> {
    let a = spec.a();
    if a == 0.0 {
        return Err(Error::DegenerateConstant(format!(
            "a_{{alpha,m}} vanishes for {spec}: psi degenerates"
        )));
    }
    let amp = rat_from_f64(a)
        * (rat(spec.n() as i64) + rat(2 * spec.m() as i64) - rat_from_f64(spec.alpha()));
    let profile = RadialProfile::new(vec![amp], gamma_h(spec) - rat(1));
    assert!(
        profile.is_integrable(spec.n()),
        "psi not integrable for {spec}"
    );
    Ok(profile)
}

/// Sample the scaled kernel `t^{-n} f(x/t)` on a grid; values are exact point
/// evaluations at the nodes.
pub fn sample_scaled(profile: &RadialProfile, t: f64, geometry: &GridGeometry) -> ScalarField {
    assert!(t > 0.0, "scale must be positive");
    let n = geometry.ndim();
    let scale = t.powi(-(n as i32));
    let inv_t2 = 1.0 / (t * t);
    ScalarField::from_fn(geometry.clone(), |x| {
        let r: f64 = x.iter().map(|v| v * v).sum();
        scale * profile.value_r2(r * inv_t2)
    })
}

// ---------------------------------------------------------------------------
// radial quadrature over R^n

// 15-point Kronrod / 7-point Gauss pair (QUADPACK abscissas and weights).
#[allow(clippy::excessive_precision)]
const XGK15: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
#[allow(clippy::excessive_precision)]
const WGK15: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
#[allow(clippy::excessive_precision)]
const WG7: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut kron = WGK15[7] * f(mid);
    let mut gauss = WG7[3] * f(mid);
    for j in 0..7 {
        let dx = half * XGK15[j];
        let pair = f(mid - dx) + f(mid + dx);
        kron += WGK15[j] * pair;
        if j % 2 == 1 {
            gauss += WG7[j / 2] * pair;
        }
    }
    (kron * half, (kron - gauss) * half)
}

fn adaptive_gk<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64, depth: usize) -> f64 {
    let (val, err) = gk15(f, a, b);
    if err.abs() <= tol || depth == 0 {
        return val;
    }
    let mid = 0.5 * (a + b);
    adaptive_gk(f, a, mid, tol * 0.5, depth - 1) + adaptive_gk(f, mid, b, tol * 0.5, depth - 1)
}

/// Analytic estimate of `(sigma_{n-1}/2) int_{S^2}^inf p(u)(1+u)^g u^{n/2-1} du`
/// from the three leading terms of the binomial expansion of (1+1/u)^g.
/// Relative accuracy O(S^-6) on the tail itself.
fn tail_estimate(profile: &RadialProfile, n: usize, s: f64) -> f64 {
    let u0 = s * s;
    let g = profile.gamma_exp_f64();
    let half_sigma = 0.5 * sigma(n - 1);
    let mut tail = 0.0;
    for (k, &c) in profile.coefficients_f64().iter().enumerate() {
        // int_{u0}^inf u^e du = -u0^{e+1} / (e+1), e < -1
        let e0 = k as f64 + g + n as f64 / 2.0 - 1.0;
        let binom = [1.0, g, g * (g - 1.0) / 2.0];
        for (j, &bc) in binom.iter().enumerate() {
            let e = e0 - j as f64;
            tail += c * bc * (-u0.powf(e + 1.0) / (e + 1.0));
        }
    }
    half_sigma * tail
}

/// `int_{R^n} f = sigma_{n-1} int_0^inf f0(s^2) s^{n-1} ds`, by adaptive
/// Gauss-Kronrod on geometrically growing segments plus the analytic tail.
/// Requires an integrable profile. Relative accuracy ~1e-12.
pub fn integral_over_rn(profile: &RadialProfile, n: usize) -> f64 {
    assert!(profile.is_integrable(n), "profile not integrable over R^n");
    if profile.is_zero() {
        return 0.0;
    }
    let surf = sigma(n - 1);
    let f = |s: f64| profile.value_r2(s * s) * s.powi(n as i32 - 1);
    let mut acc = surf * adaptive_gk(&f, 0.0, 1.0, 1e-15, 30);
    let mut left = 1.0f64;
    loop {
        let right = left * 2.0;
        acc += surf * adaptive_gk(&f, left, right, 1e-15 * acc.abs().max(1.0), 30);
        left = right;
        let tail = tail_estimate(profile, n, left);
        if tail.abs() <= 1e-13 * acc.abs().max(1e-4) || left > 1e18 {
            return acc + tail;
        }
    }
}

/// L1 norm over R^n; same segmentation with |f| in the integrand, tail from
/// the (eventually single-signed) leading behaviour.
pub fn l1_norm_over_rn(profile: &RadialProfile, n: usize) -> f64 {
    if profile.is_zero() {
        return 0.0;
    }
    assert!(profile.is_integrable(n));
    let surf = sigma(n - 1);
    let f = |s: f64| profile.value_r2(s * s).abs() * s.powi(n as i32 - 1);
    let mut acc = surf * adaptive_gk(&f, 0.0, 1.0, 1e-14, 30);
    let mut left = 1.0f64;
    loop {
        let right = left * 2.0;
        acc += surf * adaptive_gk(&f, left, right, 1e-14 * acc.max(1.0), 30);
        left = right;
        let tail = tail_estimate(profile, n, left).abs();
        if tail <= 1e-11 * acc.max(1e-6) || left > 1e18 {
            return acc + tail;
        }
    }
}

/// L2 norm over R^n (finite whenever 4(deg+gamma) < -n).
pub fn l2_norm_over_rn(profile: &RadialProfile, n: usize) -> f64 {
    if profile.is_zero() {
        return 0.0;
    }
    let surf = sigma(n - 1);
    let f = |s: f64| {
        let v = profile.value_r2(s * s);
        v * v * s.powi(n as i32 - 1)
    };
    let mut acc = surf * adaptive_gk(&f, 0.0, 1.0, 1e-14, 30);
    let mut left = 1.0f64;
    // squared profile decays twice as fast; plain doubling without the
    // analytic tail is enough at these tolerances
    loop {
        let right = left * 2.0;
        let seg = surf * adaptive_gk(&f, left, right, 1e-14 * acc.max(1.0), 30);
        acc += seg;
        left = right;
        if seg <= 1e-12 * acc.max(1e-6) || left > 1e12 {
            return acc.sqrt();
        }
    }
}
