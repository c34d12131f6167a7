//! Orthonormal bases from a maximally localized window, and what happens
//! when the lattice is corrupted.

use maxloc::gabor::{build_max_localized_basis, is_orthonormal_basis, GaborSystem};
use maxloc::group::GroupSpec;
use maxloc::symplectic::enumerate_maximal_isotropic;

fn main() -> maxloc::Result<()> {
    for name in ["Z6", "Z2xZ2", "Z3xZ3"] {
        let a: GroupSpec = name.parse()?;
        let atlas = enumerate_maximal_isotropic(&a)?;
        let mut bases = 0;
        for t in &atlas {
            let b = build_max_localized_basis(t)?;
            let r = is_orthonormal_basis(&b.system(), 1e-12)?;
            bases += usize::from(r.is_basis);
        }
        println!("{name}: {bases}/{} windows give an orthonormal basis", atlas.len());
    }

    let a = GroupSpec::cyclic(6);
    let t = &enumerate_maximal_isotropic(&a)?[3];
    let b = build_max_localized_basis(t)?;
    let r = is_orthonormal_basis(&b.system(), 1e-12)?;
    println!("lattice {:?}: rank {} of {}, basis {}", b.lattice, r.rank, r.dimension, r.is_basis);

    // a second point in the coset of the first
    let pg = t.space().group();
    let mut dup = b.lattice.clone();
    dup[1] = pg.add_idx(dup[0], b.subgroup.members()[1]);
    let r = is_orthonormal_basis(&GaborSystem::from_indices(b.window.clone(), dup)?, 1e-12)?;
    println!("two points in one coset: gram off-diagonal {:.3}, basis {}", r.gram_max_offdiag, r.is_basis);

    let mut dropped = b.lattice.clone();
    dropped.pop();
    let r = is_orthonormal_basis(&GaborSystem::from_indices(b.window.clone(), dropped)?, 1e-12)?;
    println!("dropped point: rank {} of {}, basis {}", r.rank, r.dimension, r.is_basis);
    Ok(())
}
