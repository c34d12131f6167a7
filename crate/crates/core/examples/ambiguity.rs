//! Ambiguity functions and their supports. A subcharacter has support of
//! measure 1; a delta or random window does not.

use maxloc::group::GroupSpec;
use maxloc::phase::format_rational;
use maxloc::second_degree::{ambiguity_closed_form, cyclic_subcharacter};
use maxloc::tf::{ambiguity, random_unit_window, support, Window, DEFAULT_TOL};
use rand::SeedableRng;

fn show(name: &str, f: &Window) -> maxloc::Result<()> {
    let v = ambiguity(f)?;
    let s = support(&v, DEFAULT_TOL);
    println!(
        "{name:<22} exact={:<5} |supp|={:<3} measure={}",
        f.is_exact(),
        s.len(),
        format_rational(&s.measure())
    );
    Ok(())
}

fn main() -> maxloc::Result<()> {
    let a = GroupSpec::cyclic(8);
    let h = cyclic_subcharacter(8, 4, 1, 0)?;
    show("subcharacter b=4 p=1", &h.window())?;
    show("delta at 0", &Window::delta(&a, &a.zero())?)?;
    show("constant", &Window::indicator(&a, &a.elements().collect::<Vec<_>>())?)?;

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    show("random", &random_unit_window(&a, &mut rng))?;

    let direct = ambiguity(&h.window())?;
    let closed = ambiguity_closed_form(&h)?;
    println!("closed form matches exactly: {:?}", closed.exact_eq(&direct));

    // |H| conj h(-x) on the isotropic subgroup, zero elsewhere
    let space = direct.space();
    for z in 0..space.len() {
        let v = direct.value_idx(z);
        if v.norm() > 1e-9 {
            let (x, xi) = space.split_idx(z);
            println!("  A({x},{xi}) = {:+.3}{:+.3}i", v.re, v.im);
        }
    }
    Ok(())
}
