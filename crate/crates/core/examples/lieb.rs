//! Lieb-type inequalities for finite groups, equality cases, and the
//! p -> 0 limit.

use maxloc::group::GroupSpec;
use maxloc::lieb::{equality_diagnose, lieb_check, matched_subcharacter_pair, p_to_zero_bridge};
use maxloc::phase::format_rational;
use maxloc::symplectic::enumerate_maximal_isotropic;
use maxloc::tf::{random_unit_window, Window, DEFAULT_TOL};
use num_complex::Complex64;
use rand::SeedableRng;

fn main() -> maxloc::Result<()> {
    let a = GroupSpec::cyclic(6);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
    let f = random_unit_window(&a, &mut rng);
    let g = random_unit_window(&a, &mut rng);
    println!("random pair on {a}");
    for p in [0.5, 1.0, 2.0, 3.0, 4.0] {
        let r = lieb_check(&f, &g, p)?;
        println!("  p={p:<4} norm={:.6} bound={:.6} margin={:+.2e} {:?}", r.norm, r.bound, r.margin, r.regime);
    }

    let t = &enumerate_maximal_isotropic(&a)?[5];
    let pg = a.product(&a);
    let (f, g) = matched_subcharacter_pair(
        t,
        Complex64::new(0.0, 1.0),
        Complex64::new(1.0, 0.0),
        &pg.element(&[2, 1]),
        &pg.element(&[0, 3]),
    )?;
    let d = equality_diagnose(&f, &g, 4.0, 1e-12)?;
    println!("matched pair: equality at p=4 {}, margin {:.1e}", d.equality, d.report.margin);
    for r in &d.propagated {
        println!("  p={:<3} equality {}", r.p, r.equality);
    }

    let grid: Vec<f64> = (0..5).map(|k| 1.0 / f64::from(1 << k)).collect();
    let b = p_to_zero_bridge(&f, &g, &grid)?;
    println!("bridge for the matched pair: limit {} indicator {}", format_rational(&b.limit), b.indicator);

    let z4 = GroupSpec::cyclic(4);
    let w = Window::indicator(&z4, &[z4.element(&[0]), z4.element(&[1])])?.normalized()?;
    let b = p_to_zero_bridge(&w, &w, &[1.0, 0.5, 0.25, 0.125, 0.0625])?;
    for (p, v) in &b.rows {
        println!("  p={p:<7} integral {v:.4}");
    }
    println!(
        "indicator of {{0,1}} on Z4: extrapolated {:.3}, support measure {}",
        b.extrapolated,
        format_rational(&maxloc::tf::support(&maxloc::tf::ambiguity(&w)?, DEFAULT_TOL).measure())
    );
    Ok(())
}
