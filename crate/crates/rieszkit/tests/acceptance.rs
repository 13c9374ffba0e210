//! Acceptance suite: one test per criterion, each printing a
//! measured-vs-target line per clause before asserting.
//!
//! The tolerances are pinned here, not tuned to the implementation. Some
//! clauses are known to be unattainable on these grids because the kernel
//! family has heavy algebraic tails (h ~ |x|^{-(n+2m-alpha)} makes the
//! approximate identity converge like t log t with a large constant, w's
//! |x|^{-3} tail puts ~9% of the oracle comparison outside any +-8 box, and
//! the scale integral truncated at T leaves an O(1/T) remainder). Those
//! clauses fail with the measured numbers on record; the analysis lives in
//! the repository notes.

use std::time::Instant;

use rieszkit::constants::{default_m, delta_k, fuglede_const, gamma_n, lambda_k};
use rieszkit::fields::{convolve, metrics, phantom, GridGeometry, Phantom};
use rieszkit::inversion::{
    fourier_check_c, invert_approx, invert_psi, invert_wavelet_quadrature,
};
use rieszkit::kernels::{
    build_h, build_psi, build_w, build_w_tilde, integral_over_rn, sample_scaled,
};
use rieszkit::radon::{fuglede_check, radon_2d_default, reconstruct_radon, Formula};
use rieszkit::riesz::riesz_quadrature;
use rieszkit::KernelSpec;

use std::f64::consts::TAU;

struct Clause {
    name: String,
    measured: f64,
    target: f64,
    pass: bool,
}

struct Criterion {
    number: usize,
    title: &'static str,
    clauses: Vec<Clause>,
}

impl Criterion {
    fn new(number: usize, title: &'static str) -> Self {
        Criterion {
            number,
            title,
            clauses: Vec::new(),
        }
    }

    /// measured <= target
    fn le(&mut self, name: impl Into<String>, measured: f64, target: f64) {
        self.clauses.push(Clause {
            name: name.into(),
            measured,
            target,
            pass: measured.is_finite() && measured <= target,
        });
    }

    fn flag(&mut self, name: impl Into<String>, pass: bool) {
        self.clauses.push(Clause {
            name: name.into(),
            measured: if pass { 1.0 } else { 0.0 },
            target: 1.0,
            pass,
        });
    }

    fn finish(self) {
        let ok = self.clauses.iter().all(|c| c.pass);
        println!(
            "ACCEPTANCE {:02} {}: {}",
            self.number,
            self.title,
            if ok { "PASS" } else { "FAIL" }
        );
        for c in &self.clauses {
            println!(
                "    {} {:<68} measured {:>12.5e}  target {:>12.5e}",
                if c.pass { "pass" } else { "FAIL" },
                c.name,
                c.measured,
                c.target
            );
        }
        assert!(
            ok,
            "criterion {:02} ({}) failed: {}",
            self.number,
            self.title,
            self.clauses
                .iter()
                .filter(|c| !c.pass)
                .map(|c| format!("{} measured {:.5e} vs target {:.5e}", c.name, c.measured, c.target))
                .collect::<Vec<_>>()
                .join("; ")
        );
    }
}

fn spec211() -> KernelSpec {
    KernelSpec::new(2, 1.0, 1).unwrap()
}

fn grid2(points: usize, extent: f64) -> GridGeometry {
    GridGeometry::symmetric(2, points, extent).unwrap()
}

#[test]
fn acceptance_01_kernel_pair_oracle() {
    let start = Instant::now();
    let mut cr = Criterion::new(1, "kernel-pair oracle I^1 w = h");
    let spec = spec211();

    let geom = grid2(128, 8.0);
    let w = phantom(&Phantom::KernelW(spec), &geom);
    let h = phantom(&Phantom::KernelH(spec), &geom);
    let out = riesz_quadrature(&w, 1.0).unwrap();
    let m = metrics(&out, &h).unwrap();
    cr.le("rel L2 |I^1 w - h| on 128^2 +-8", m.l2_rel, 0.02);

    let geom2 = grid2(256, 8.0);
    let w2 = phantom(&Phantom::KernelW(spec), &geom2);
    let h2 = phantom(&Phantom::KernelH(spec), &geom2);
    let out2 = riesz_quadrature(&w2, 1.0).unwrap();
    let m2 = metrics(&out2, &h2).unwrap();
    cr.flag(
        format!(
            "refining to 256^2 strictly reduces the error ({:.5e} -> {:.5e})",
            m.l2_rel, m2.l2_rel
        ),
        m2.l2_rel < m.l2_rel,
    );
    cr.le("runtime (s)", start.elapsed().as_secs_f64(), 60.0);
    cr.finish();
}

#[test]
fn acceptance_02_constant_identities() {
    let mut cr = Criterion::new(2, "constant identities");
    let spec = spec211();
    let rel = |a: f64, b: f64| (a - b).abs() / b.abs();
    cr.le("c_{1,1} = gamma_2(1) = 2 pi", rel(spec.c().unwrap(), TAU), 1e-12);
    cr.le(
        "c_{1,1} = gamma_n(2, 1) exactly",
        rel(spec.c().unwrap(), gamma_n(2, 1.0).unwrap()),
        0.0,
    );
    cr.le("d_{1,1} = 2 pi", rel(spec.d().unwrap(), TAU), 1e-12);
    cr.le("a_{1,1} = 1", rel(spec.a(), 1.0), 1e-12);
    cr.le("lambda_1 = 4 pi", rel(lambda_k(2, 1).unwrap(), 2.0 * TAU), 1e-12);
    cr.le("delta_1 = 4 pi", rel(delta_k(2, 1).unwrap(), 2.0 * TAU), 1e-12);
    cr.le("d_{1,2} = 2", rel(fuglede_const(2, 1).unwrap(), 2.0), 1e-12);

    let mut worst = 0.0f64;
    for n in 2..=6usize {
        for k in 1..n {
            let spec_k = KernelSpec::new(n, k as f64, default_m(k as f64)).unwrap();
            let dev = rel(
                lambda_k(n, k).unwrap(),
                fuglede_const(n, k).unwrap() * spec_k.c().unwrap(),
            );
            worst = worst.max(dev);
        }
    }
    cr.le(
        "lambda_k = d_{k,n} c_{k,m} for all 1 <= k < n <= 6 (worst case)",
        worst,
        1e-12,
    );
    cr.finish();
}

#[test]
fn acceptance_03_quadrature_vs_symbol_integrals() {
    let mut cr = Criterion::new(3, "radial quadrature matches the closed-form constants");
    for &(n, alpha, m) in &[
        (2usize, 1.0f64, 1u32),
        (3, 1.0, 1),
        (3, 2.0, 2),
        (4, 1.0, 1),
        (2, 0.5, 1),
        (3, 1.5, 1),
    ] {
        let spec = KernelSpec::new(n, alpha, m).unwrap();
        let c = spec.c().unwrap();
        let d = spec.d().unwrap();
        let ih = integral_over_rn(&build_h(&spec).unwrap(), n);
        let ipsi = integral_over_rn(&build_psi(&spec).unwrap(), n);
        cr.le(
            format!("int h = c at (n={n}, alpha={alpha}, m={m})"),
            (ih - c).abs() / c.abs(),
            1e-8,
        );
        cr.le(
            format!("int psi = d at (n={n}, alpha={alpha}, m={m})"),
            (ipsi - d).abs() / d.abs(),
            1e-8,
        );
        cr.le(
            format!("int w = 0 at (n={n}, alpha={alpha}, m={m}) (absolute)"),
            integral_over_rn(&build_w(&spec), n).abs(),
            1e-6,
        );
        cr.le(
            format!("int w~ = 0 at (n={n}, alpha={alpha}, m={m}) (absolute)"),
            integral_over_rn(&build_w_tilde(&spec), n).abs(),
            1e-6,
        );
    }
    cr.finish();
}

#[test]
fn acceptance_04_approximate_inversion() {
    let start = Instant::now();
    let mut cr = Criterion::new(4, "approximate inversion from the analytic Riesz image");
    let spec = spec211();
    let geom = grid2(128, 8.0);
    let g = phantom(&Phantom::KernelH(spec), &geom);
    let w = phantom(&Phantom::KernelW(spec), &geom);
    let t_list = [1.0, 0.5, 0.25, 0.125];
    let (_, report) = invert_approx(&g, &spec, &t_list, Some(&w)).unwrap();
    let errs = report.errors_per_scale.unwrap();
    let sups: Vec<f64> = errs.iter().map(|m| m.sup_err).collect();
    cr.flag(
        format!("sup error strictly decreasing over t: {sups:.4?}"),
        sups.windows(2).all(|p| p[1] < p[0]),
    );
    let w_sup = w.sup_norm();
    cr.le(
        "final sup error at t = 0.125 (relative to sup |w|)",
        sups[3] / w_sup,
        0.02,
    );
    cr.le("runtime (s)", start.elapsed().as_secs_f64(), 120.0);
    cr.finish();
}

#[test]
fn acceptance_05_wavelet_inversion() {
    let mut cr = Criterion::new(5, "scale-integral (wavelet) inversion");
    let spec = spec211();
    // eps = 0.05 is two grid steps at 640^2 over +-8: the finest sampling
    // that keeps the padded FFT at 2048^2
    let geom = grid2(640, 8.0);
    let g = phantom(&Phantom::KernelH(spec), &geom);
    let w = phantom(&Phantom::KernelW(spec), &geom);
    let eps = 0.05;
    let t_upper = 4.0;
    let (rec, report) = invert_wavelet_quadrature(&g, &spec, eps, t_upper, 80).unwrap();
    let vs_w = metrics(&rec, &w).unwrap();
    cr.le("rel L2 vs w (eps=0.05, T=4, 80 nodes)", vs_w.l2_rel, 0.05);

    let full_oracle = invert_psi(Some(&w), &spec, eps, None).unwrap();
    let vs_oracle = metrics(&rec, &full_oracle).unwrap();
    cr.le(
        "rel L2 vs psi-oracle w * psi_eps / d at matching eps",
        vs_oracle.l2_rel,
        0.01,
    );
    // diagnostic: with the oracle truncated at the same upper cutoff the
    // scale-exchange identity itself holds to quadrature accuracy
    let matched = invert_psi(Some(&w), &spec, eps, Some(t_upper)).unwrap();
    let vs_matched = metrics(&rec, &matched).unwrap();
    println!(
        "    info: vs matched-truncation oracle w * (psi_eps - psi_T) / d: {:.5e}; \
         reported tail bound {:.5e}",
        vs_matched.l2_rel,
        report.tail_bound.unwrap()
    );
    cr.finish();
}

#[test]
fn acceptance_06_fourier_side_constant() {
    let mut cr = Criterion::new(6, "Fourier-side constant recovery");
    let spec = spec211();
    let geom = grid2(128, 32.0);
    let chk = fourier_check_c(&spec, &geom).unwrap();
    let c = spec.c().unwrap();
    cr.le(
        "extrapolated |xi|^{-1} what(xi) vs 2 pi (relative)",
        (chk.estimate - c).abs() / c,
        0.05,
    );
    cr.le(
        "DC bin |what(0)| vs max |what|",
        chk.dc.abs() / chk.max_abs_ft,
        1e-3,
    );
    cr.finish();
}

#[test]
fn acceptance_07_fuglede_identity() {
    let start = Instant::now();
    let mut cr = Criterion::new(7, "Fuglede identity R*R = 2 I^1 on a Gaussian");
    let geom = grid2(256, 8.0);
    let f = phantom(&Phantom::Gaussian { sigma: 1.0 }, &geom);
    let report = fuglede_check(&f, 360).unwrap();
    cr.le(
        "central-half rel L2 between R*Rf and 2 I^1 f",
        report.rel_l2_central,
        0.05,
    );
    cr.le("runtime (s)", start.elapsed().as_secs_f64(), 180.0);
    cr.finish();
}

#[test]
fn acceptance_08_radon_end_to_end() {
    let mut cr = Criterion::new(8, "end-to-end Radon reconstruction of a Gaussian");
    let spec = spec211();
    let geom = grid2(128, 8.0);
    let f = phantom(&Phantom::Gaussian { sigma: 1.0 }, &geom);
    let phi = radon_2d_default(&f).unwrap();

    let (rec_a, _) = reconstruct_radon(
        &phi,
        &spec,
        &Formula::Approx {
            t_list: vec![1.0, 0.5, 0.25],
        },
        &geom,
    )
    .unwrap();
    let ma = metrics(&rec_a, &f).unwrap();
    cr.le("approx formula rel L2 at t = 0.25", ma.l2_rel, 0.05);

    let (rec_w, _) = reconstruct_radon(
        &phi,
        &spec,
        &Formula::Wavelet {
            eps: 0.25,
            t_upper: 4.0,
            n_nodes: 80,
        },
        &geom,
    )
    .unwrap();
    let mw = metrics(&rec_w, &f).unwrap();
    cr.le("wavelet formula rel L2", mw.l2_rel, 0.08);

    let ratio = rec_a.mass() / f.mass();
    cr.le(
        "approx reconstruction mass ratio vs phantom, |ratio - 1|",
        (ratio - 1.0).abs(),
        0.05,
    );
    println!(
        "    info: wavelet mass ratio {:.5}; approx mass ratio {:.5}",
        rec_w.mass() / f.mass(),
        ratio
    );
    cr.finish();
}

#[test]
fn acceptance_09_approximate_identity_monotone() {
    let mut cr = Criterion::new(9, "approximate-identity error decreases monotonically");
    let spec = spec211();
    let geom = grid2(128, 8.0);
    let c = spec.c().unwrap();
    let h_prof = build_h(&spec).unwrap();
    let gauss = phantom(&Phantom::Gaussian { sigma: 1.0 }, &geom);
    let disk = phantom(&Phantom::Disk { radius: 3.0 }, &geom);
    let mollifier = phantom(&Phantom::Gaussian { sigma: 0.5 }, &geom);
    let smoothed_disk = convolve(&disk, &mollifier).unwrap().scaled(1.0 / mollifier.mass());

    for (name, f) in [("gaussian", &gauss), ("smoothed disk", &smoothed_disk)] {
        let mut errs = Vec::new();
        for &t in &[1.0, 0.5, 0.25, 0.125] {
            let ht = sample_scaled(&h_prof, t, &geom);
            let conv = convolve(f, &ht).unwrap().scaled(1.0 / c);
            errs.push(metrics(&conv, f).unwrap().l2_rel);
        }
        cr.flag(
            format!("{name}: L2 error decreasing over t = 1, 0.5, 0.25, 0.125: {errs:.4?}"),
            errs.windows(2).all(|p| p[1] < p[0]),
        );
    }
    cr.finish();
}

#[test]
fn acceptance_10_determinism_and_roundtrips() {
    let mut cr = Criterion::new(10, "determinism and file-format round-trips");

    // byte-identical outputs from two selftest runs of the binary
    let bin = env!("CARGO_BIN_EXE_rieszkit");
    let dir = tempfile::tempdir().unwrap();
    let run = |out: &std::path::Path| {
        let status = std::process::Command::new(bin)
            .args(["selftest", "--out-dir"])
            .arg(out)
            .stdout(std::process::Stdio::null())
            .status()
            .expect("run selftest");
        assert!(status.success(), "selftest exited with {status:?}");
    };
    let out1 = dir.path().join("run1");
    let out2 = dir.path().join("run2");
    run(&out1);
    run(&out2);
    let mut names: Vec<_> = std::fs::read_dir(&out1)
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    names.sort();
    cr.flag(
        format!("selftest wrote {} artifacts", names.len()),
        !names.is_empty(),
    );
    let mut identical = true;
    for name in &names {
        let a = std::fs::read(out1.join(name)).unwrap();
        let b = std::fs::read(out2.join(name)).unwrap();
        identical &= a == b;
    }
    cr.flag("two selftest runs produce bit-identical outputs", identical);

    // RGF round-trip through the real files
    let spec = spec211();
    let geom = grid2(32, 4.0);
    let w = phantom(&Phantom::KernelW(spec), &geom);
    let path = dir.path().join("w.rgf");
    rieszkit::io::write_rgf(&path, &w).unwrap();
    let back = rieszkit::io::read_rgf(&path).unwrap();
    let rgf_ok = w.geometry() == back.geometry()
        && w
            .data()
            .iter()
            .zip(back.data())
            .all(|(a, b)| a.to_bits() == b.to_bits());
    cr.flag("RGF1 write/read round-trip is bit-exact", rgf_ok);

    let sino = rieszkit::radon::radon_2d_default(&w).unwrap();
    let spath = dir.path().join("w.rsg");
    rieszkit::io::write_rsg(&spath, &sino).unwrap();
    let sback = rieszkit::io::read_rsg(&spath).unwrap();
    let rsg_ok = sino.n_angles() == sback.n_angles()
        && sino.s_max().to_bits() == sback.s_max().to_bits()
        && sino
            .data()
            .iter()
            .zip(sback.data())
            .all(|(a, b)| a.to_bits() == b.to_bits());
    cr.flag("RSG1 write/read round-trip is bit-exact", rsg_ok);

    cr.finish();
}
