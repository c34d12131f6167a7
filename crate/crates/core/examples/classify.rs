//! Classify windows: shifted and modulated subcharacters are recognized
//! together with their parameters; small perturbations are rejected.

use maxloc::gabor::{classify_optimizer, Verdict};
use maxloc::group::GroupSpec;
use maxloc::phase::format_rational;
use maxloc::second_degree::cyclic_subcharacter;
use maxloc::tf::{tf_shift, Window, DEFAULT_TOL};
use num_complex::Complex64;

fn report(name: &str, f: &Window) -> maxloc::Result<()> {
    match classify_optimizer(f, DEFAULT_TOL)? {
        Verdict::Optimizer { witness, .. } => println!(
            "{name}: optimizer, x0={} c={:.3} H=<{:?}> residual={:.1e}",
            witness.x0,
            witness.c,
            witness.h.domain().generators(),
            witness.residual
        ),
        Verdict::NotOptimizer { support_measure, failed } => println!(
            "{name}: not an optimizer ({}, measure {})",
            failed.as_str(),
            format_rational(&support_measure)
        ),
    }
    Ok(())
}

fn main() -> maxloc::Result<()> {
    let a = GroupSpec::cyclic(12);
    let h = cyclic_subcharacter(12, 4, 3, 0)?.normalized_window();
    report("h", &h)?;

    let pg = a.product(&a);
    let z = pg.element(&[5, 2]);
    let f = tf_shift(&h, &z)?.scale(Complex64::from_polar(2.0, 0.7));
    report("2e^{0.7i} pi(5,2) h", &f)?;

    let bump = Window::delta(&a, &a.element(&[1]))?.scale(Complex64::new(0.1, 0.0));
    report("h + 0.1 delta_1", &h.add(&bump)?)?;

    report("delta_3", &Window::delta(&a, &a.element(&[3]))?)?;
    Ok(())
}
