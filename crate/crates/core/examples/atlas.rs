//! Maximal isotropic subgroups of A × Â for a few small groups.
//!
//! cargo run --example atlas -- Z2xZ4

use maxloc::group::GroupSpec;
use maxloc::phase::format_rational;
use maxloc::symplectic::{brute_force_maximal_isotropic, enumerate_maximal_isotropic};

fn main() -> maxloc::Result<()> {
    let arg = std::env::args().nth(1).unwrap_or_else(|| "Z6".into());
    let a: GroupSpec = arg.parse()?;
    let atlas = enumerate_maximal_isotropic(&a)?;
    println!("{a}: {} maximal isotropic subgroups", atlas.len());
    for (i, t) in atlas.iter().enumerate() {
        let h: Vec<_> = t.h().canonical_basis().iter().map(|(e, o)| format!("{e}:{o}")).collect();
        let phi: Vec<_> = t.phi().images().iter().map(|e| e.to_string()).collect();
        println!(
            "  #{i:<3} H=<{}> |H|={} phi={} measure={}",
            h.join(","),
            t.h().order(),
            phi.join(","),
            format_rational(&t.measure())
        );
    }

    if a.order() <= 12 {
        let brute = brute_force_maximal_isotropic(&a)?;
        println!("brute force agrees: {}", brute.len() == atlas.len());
    }

    // cyclic groups: the count is the divisor sum
    for n in 1..=12u64 {
        let count = enumerate_maximal_isotropic(&GroupSpec::cyclic(n))?.len();
        let sigma: u64 = (1..=n).filter(|d| n % d == 0).sum();
        println!("Z{n:<2} count={count:<3} divisor sum={sigma}");
    }
    Ok(())
}
