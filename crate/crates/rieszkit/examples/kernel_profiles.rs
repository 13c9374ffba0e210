//! Build the five closed-form kernels symbolically and verify their radial
//! integrals against the constants: int h = c, int psi = d, int w = 0.
//!
//! Run with: cargo run --example kernel_profiles

use rieszkit::kernels::{
    build_h, build_h_tilde, build_psi, build_w, build_w_tilde, integral_over_rn,
};
use rieszkit::KernelSpec;

fn main() {
    for (n, alpha, m) in [(2usize, 1.0f64, 1u32), (3, 2.0, 2), (2, 0.5, 1)] {
        let spec = KernelSpec::new(n, alpha, m).unwrap();
        let w = build_w(&spec);
        let h = build_h(&spec).unwrap();
        let wt = build_w_tilde(&spec);
        let ht = build_h_tilde(&spec).unwrap();
        let psi = build_psi(&spec).unwrap();

        println!("spec {spec}  (profiles in r = |x|^2)");
        println!("  w    = {w}");
        println!("  h    = {h}");
        println!("  w~   = {wt}");
        println!("  h~   = {ht}");
        println!("  psi  = {psi}");

        let c = spec.c().unwrap();
        let d = spec.d().unwrap();
        println!(
            "  int w   = {:+.3e}   (exact 0)",
            integral_over_rn(&w, n)
        );
        println!(
            "  int w~  = {:+.3e}   (exact 0)",
            integral_over_rn(&wt, n)
        );
        println!(
            "  int h   = {:.12}  vs c = {:.12}",
            integral_over_rn(&h, n),
            c
        );
        println!(
            "  int psi = {:.12}  vs d = {:.12}",
            integral_over_rn(&psi, n),
            d
        );
        println!();
    }
}
