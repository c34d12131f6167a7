//! Common eigenfunctions of commuting time-frequency shifts.

use maxloc::gabor::{common_eigenfunction_basis, EigenOutcome};
use maxloc::group::GroupSpec;
use maxloc::symplectic::PhaseSpace;

fn main() -> maxloc::Result<()> {
    let a = GroupSpec::cyclic(4);
    let space = PhaseSpace::new(&a);
    let pg = space.group();
    for s in [[[2, 0], [0, 2]], [[1, 0], [0, 1]], [[1, 1], [2, 2]]] {
        let pts: Vec<_> = s.iter().map(|c| pg.element(c)).collect();
        match common_eigenfunction_basis(&space, &pts)? {
            EigenOutcome::Basis { basis, eigenvalues, residual } => {
                println!("S={s:?}: basis of {} vectors, residual {residual:.1e}", basis.lattice.len());
                for (z, l) in eigenvalues {
                    println!("  pi({z}) f = ({:+.3}{:+.3}i) f", l.re, l.im);
                }
            }
            EigenOutcome::NonCommuting { z, w, sigma } => {
                println!("S={s:?}: pi({z}) and pi({w}) do not commute, sigma = {sigma}");
            }
        }
    }
    Ok(())
}
