//! Print the normalizing constants of the kernel family for a few specs,
//! and show that the Radon reconstruction constant factors through the
//! Fuglede constant times the Riesz inversion constant.
//!
//! Run with: cargo run --example report_constants

use rieszkit::constants::{default_m, delta_k, fuglede_const, gamma_n, lambda_k};
use rieszkit::KernelSpec;

fn main() {
    for (n, alpha) in [(2usize, 1.0f64), (3, 1.0), (3, 2.0), (4, 1.0), (2, 0.5)] {
        let spec = KernelSpec::with_default_m(n, alpha).unwrap();
        println!("spec {spec}");
        println!("  gamma_n(alpha) = {:.15}", gamma_n(n, alpha).unwrap());
        println!("  a = {:.15}", spec.a());
        println!("  c = {:.15}", spec.c().unwrap());
        println!("  d = {:.15}", spec.d().unwrap());
    }

    println!("\nlambda_k = d_{{k,n}} c_{{k,m}} across plane dimensions:");
    for n in 2..=6usize {
        for k in 1..n {
            let spec = KernelSpec::new(n, k as f64, default_m(k as f64)).unwrap();
            let lam = lambda_k(n, k).unwrap();
            let product = fuglede_const(n, k).unwrap() * spec.c().unwrap();
            println!(
                "  n={n} k={k}: lambda = {lam:>18.12}, d_kn * c = {product:>18.12}, \
                 delta = {:>18.12}",
                delta_k(n, k).unwrap()
            );
        }
    }
}
