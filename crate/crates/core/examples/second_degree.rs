//! Second-degree characters: construct one for a symmetric phi, then list
//! all of them and check that any two differ by a character.

use maxloc::group::{enumerate_subgroups, enumerate_symmetric_homs, GroupSpec};
use maxloc::second_degree::{
    brute, construct_second_degree, enumerate_second_degree, is_character, verify_second_degree,
};

fn main() -> maxloc::Result<()> {
    let a: GroupSpec = "Z2xZ4".parse()?;
    let mut total = 0;
    for h in enumerate_subgroups(&a)? {
        for phi in enumerate_symmetric_homs(&h)? {
            let f = construct_second_degree(&h, &phi)?;
            assert!(verify_second_degree(&f, &phi));
            total += 1;
            if h.order() == 4 && total % 3 == 0 {
                let vals: Vec<_> = h
                    .elements()
                    .map(|x| format!("{x}->{}", f.phase(&x).unwrap()))
                    .collect();
                println!("|H|=4 phi={:?}: {}", phi.images(), vals.join(" "));
            }
        }
    }
    println!("constructed {total} second-degree characters on {a}");

    let h = maxloc::group::SubgroupHandle::whole(&GroupSpec::cyclic(4));
    for phi in enumerate_symmetric_homs(&h)? {
        let all = enumerate_second_degree(&h, &phi)?;
        let ratios_ok = all.iter().all(|f| is_character(&h, &f.ratio(&all[0])));
        let by_search = brute::solve_all(&h, &phi).len();
        println!(
            "Z4 phi(1)={}: {} solutions (search finds {by_search}), ratios are characters: {ratios_ok}",
            phi.images()[0],
            all.len()
        );
    }
    Ok(())
}
