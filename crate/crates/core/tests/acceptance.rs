//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each,
//! and exits nonzero if any fails.

use std::time::Instant;

use maxloc::gabor::{
    build_max_localized_basis, classify_optimizer, classify_pair, common_eigenfunction_basis,
    is_orthonormal_basis, EigenOutcome, GaborSystem,
};
use maxloc::group::{all_groups_up_to, enumerate_subgroups, enumerate_symmetric_homs, GroupSpec};
use maxloc::lieb::{lieb_check, matched_subcharacter_pair, matched_subcharacter_pair_exact, p_to_zero_bridge};
use maxloc::phase::{format_rational, CyclotomicValue, ExactScalar, Rational, UnitPhase};
use maxloc::second_degree::{
    ambiguity_closed_form, brute, construct_second_degree, enumerate_second_degree, is_character,
    verify_second_degree, Subcharacter,
};
use maxloc::symplectic::{
    brute_force_maximal_isotropic, enumerate_maximal_isotropic, symplectic_pairing, PhaseSpace,
};
use maxloc::tf::{ambiguity, random_unit_window, stft, support, tf_shift, Window};
use num_complex::Complex64;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn g(s: &str) -> GroupSpec {
    s.parse().unwrap()
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn unit_c(r: &mut ChaCha8Rng) -> Complex64 {
    Complex64::from_polar(1.0, r.random_range(0.0..std::f64::consts::TAU))
}

/// Dense window with random values on a random nonempty support.
fn sparse_window(a: &GroupSpec, r: &mut ChaCha8Rng) -> Window {
    let n = a.order();
    let k = r.random_range(1..=n);
    let mut v = vec![Complex64::new(0.0, 0.0); n];
    for i in sample(r, n, k) {
        v[i] = Complex64::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0));
    }
    Window::dense(a, v).unwrap()
}

fn c1_support_uncertainty() -> Outcome {
    let mut r = rng(1);
    let mut min = f64::INFINITY;
    let mut count = 0;
    for name in ["Z6", "Z8", "Z12", "Z2xZ4", "Z3xZ3"] {
        let a = g(name);
        for i in 0..200 {
            let f = if i % 2 == 0 {
                random_unit_window(&a, &mut r)
            } else {
                sparse_window(&a, &mut r)
            };
            let m = support(&ambiguity(&f).unwrap(), 1e-10).measure();
            let m = *m.numer() as f64 / *m.denom() as f64;
            min = min.min(m);
            count += 1;
            ensure(m >= 1.0 - 1e-9, || format!("{name}: measure {m}"))?;
        }
    }
    Ok(format!("{count} windows, min measure {min}"))
}

fn c2_cyclic_counts() -> Outcome {
    for n in 1..=20u64 {
        let a = GroupSpec::cyclic(n);
        let sigma: u64 = (1..=n).filter(|d| n % d == 0).sum();
        let listed = enumerate_maximal_isotropic(&a).unwrap();
        let brute = brute_force_maximal_isotropic(&a).unwrap();
        ensure(listed.len() as u64 == sigma, || format!("Z{n}: {} != {sigma}", listed.len()))?;
        let mut x: Vec<_> = listed.iter().map(|t| t.subgroup().members().to_vec()).collect();
        let mut y: Vec<_> = brute.iter().map(|s| s.members().to_vec()).collect();
        x.sort();
        y.sort();
        ensure(x == y, || format!("Z{n}: enumeration differs from brute force"))?;
    }
    Ok("N = 1..20 match divisor sums and brute force".into())
}

fn c3_closed_form() -> Outcome {
    let mut triples = 0;
    let groups = all_groups_up_to(16);
    for a in &groups {
        for t in enumerate_maximal_isotropic(a).unwrap() {
            let h = Subcharacter::from_triple(&t).unwrap();
            let direct = ambiguity(&h.window()).unwrap();
            let closed = ambiguity_closed_form(&h).unwrap();
            ensure(closed.exact_eq(&direct) == Some(true), || {
                format!("{a}: H {:?} phi {:?}", h.domain().generators(), h.phi().images())
            })?;
            triples += 1;
        }
    }
    Ok(format!("{triples} triples over {} groups, exact", groups.len()))
}

fn c4_second_degree() -> Outcome {
    let mut checked = 0;
    let mut enumerated = 0;
    for a in all_groups_up_to(16) {
        for h in enumerate_subgroups(&a).unwrap() {
            for phi in enumerate_symmetric_homs(&h).unwrap() {
                let f = construct_second_degree(&h, &phi).map_err(|e| format!("{a}: {e}"))?;
                ensure(verify_second_degree(&f, &phi), || format!("{a}: {:?}", phi.images()))?;
                checked += 1;
                if h.order() <= 8 {
                    let all = enumerate_second_degree(&h, &phi).unwrap();
                    ensure(all.len() == h.order(), || format!("{a}: {} solutions", all.len()))?;
                    for f1 in &all {
                        ensure(verify_second_degree(f1, &phi), || format!("{a}: enumerated fails"))?;
                        for f2 in &all {
                            ensure(is_character(&h, &f1.ratio(f2)), || format!("{a}: ratio"))?;
                        }
                    }
                    let oracle = brute::solve_all(&h, &phi).len();
                    ensure(oracle == h.order(), || format!("{a}: search finds {oracle}"))?;
                    enumerated += 1;
                }
            }
        }
    }
    Ok(format!("{checked} (H, phi) constructed, {enumerated} fully enumerated"))
}

fn c5_onb() -> Outcome {
    let mut n = 0;
    let mut worst = 0.0f64;
    for a in all_groups_up_to(12) {
        for t in enumerate_maximal_isotropic(&a).unwrap() {
            let b = build_max_localized_basis(&t).unwrap();
            let r = is_orthonormal_basis(&b.system(), 1e-12).unwrap();
            worst = worst.max(r.gram_max_offdiag);
            ensure(r.is_basis && r.gram_max_offdiag <= 1e-12 && r.rank == a.order(), || {
                format!("{a}: {r:?}")
            })?;
            if a.order() > 1 {
                let pg = t.space().group();
                let mut dup = b.lattice.clone();
                dup[1] = pg.add_idx(dup[0], b.subgroup.members()[1]);
                let sys = GaborSystem::from_indices(b.window.clone(), dup).unwrap();
                let r = is_orthonormal_basis(&sys, 1e-12).unwrap();
                ensure(!r.is_basis, || format!("{a}: duplicate coset accepted"))?;
                let mut dropped = b.lattice.clone();
                dropped.pop();
                let sys = GaborSystem::from_indices(b.window.clone(), dropped).unwrap();
                let r = is_orthonormal_basis(&sys, 1e-12).unwrap();
                ensure(!r.is_basis, || format!("{a}: truncated lattice accepted"))?;
            }
            n += 1;
        }
    }
    Ok(format!("{n} bases, max off-diagonal {worst:.1e}, corruptions rejected"))
}

fn c6_non_optimizer() -> Outcome {
    for n in [4u64, 6, 8, 10] {
        let a = GroupSpec::cyclic(n);
        let f = Window::indicator(&a, &[a.element(&[0]), a.element(&[1])]).unwrap();
        let s = support(&ambiguity(&f).unwrap(), 1e-10);
        let want = Rational::new(3 * n as i64 - 1, n as i64);
        ensure(s.measure() == want, || format!("Z{n}: measure {}", format_rational(&s.measure())))?;
        let mut expected = Vec::new();
        for x in [0, 1, n - 1] {
            for xi in 0..n {
                if !(x == 0 && xi == n / 2) {
                    expected.push((x * n + xi) as usize);
                }
            }
        }
        expected.sort();
        ensure(s.points() == expected.as_slice(), || format!("Z{n}: support set differs"))?;
        let v = classify_optimizer(&f.normalized().unwrap(), 1e-10).unwrap();
        ensure(!v.is_optimizer(), || format!("Z{n}: classified as optimizer"))?;
    }
    Ok("N = 4, 6, 8, 10: measure 3 - 1/N with the expected support".into())
}

fn c7_classification() -> Outcome {
    let mut r = rng(7);
    let mut worst = 0.0f64;
    let mut n = 0;
    for a in all_groups_up_to(12) {
        let atlas = enumerate_maximal_isotropic(&a).unwrap();
        let pg = a.product(&a);
        for _ in 0..100 {
            let t = &atlas[r.random_range(0..atlas.len())];
            let h = Subcharacter::from_triple(t).unwrap().normalized_window();
            let z = pg.element_at(r.random_range(0..pg.order()));
            let c = Complex64::from_polar(r.random_range(0.5..2.0), r.random_range(0.0..std::f64::consts::TAU));
            let f = tf_shift(&h, &z).unwrap().scale(c);
            let v = classify_optimizer(&f, 1e-10).unwrap();
            let w = v.witness().ok_or_else(|| format!("{a}: optimizer rejected"))?;
            let res = w.reconstruct().distance(&f).unwrap();
            worst = worst.max(res);
            ensure(res <= 1e-9, || format!("{a}: residual {res}"))?;

            n += 1;
            if a.order() == 1 {
                continue;
            }
            // perturb a point inside the support unless f is a single delta
            let supp = f.support_indices();
            let x = if supp.len() > 1 {
                supp[r.random_range(0..supp.len())]
            } else {
                (supp[0] + 1 + r.random_range(0..a.order() - 1)) % a.order()
            };
            let bump = Window::delta(&a, &a.element_at(x)).unwrap().scale(Complex64::new(0.1, 0.0));
            let v = classify_optimizer(&f.add(&bump).unwrap(), 1e-10).unwrap();
            ensure(!v.is_optimizer(), || format!("{a}: perturbed window accepted"))?;
        }
    }
    Ok(format!("{n} instances, max residual {worst:.1e}, perturbations rejected"))
}

fn c8_pairs() -> Outcome {
    let mut r = rng(8);
    let mut worst = 0.0f64;
    let mut n = 0;
    for name in ["Z6", "Z2xZ4"] {
        let a = g(name);
        let space = PhaseSpace::new(&a);
        let pg = space.group().clone();
        for t in enumerate_maximal_isotropic(&a).unwrap() {
            for _ in 0..5 {
                let z1 = pg.element_at(r.random_range(0..pg.order()));
                let z2 = pg.element_at(r.random_range(0..pg.order()));
                let (f, gw) = matched_subcharacter_pair(&t, unit_c(&mut r), unit_c(&mut r), &z1, &z2).unwrap();
                let s = support(&stft(&f, &gw).unwrap(), 1e-10);
                let shift = pg.index(&pg.sub(&z1, &z2));
                let gsub = t.subgroup();
                let mut coset: Vec<usize> = gsub.members().iter().map(|&m| pg.add_idx(shift, m)).collect();
                coset.sort();
                ensure(s.points() == coset.as_slice(), || format!("{name}: support is not z1 - z2 + G"))?;

                let v = classify_pair(&f, &gw, 1e-10).unwrap();
                let w = v.witness().ok_or_else(|| format!("{name}: pair not matched"))?;
                let h = w.h.normalized_window();
                let f2 = tf_shift(&h, &w.z1).unwrap().scale(w.c1);
                let g2 = tf_shift(&h, &w.z2).unwrap().scale(w.c2);
                let res = f2.distance(&f).unwrap().max(g2.distance(&gw).unwrap()).max(w.residual);
                worst = worst.max(res);
                ensure(res <= 1e-9, || format!("{name}: residual {res}"))?;
                n += 1;
            }
        }
    }
    Ok(format!("{n} pairs, max residual {worst:.1e}"))
}

fn c9_lieb() -> Outcome {
    let ps = [0.5, 1.0, 1.5, 2.0, 3.0, 4.0];
    let groups = ["Z5", "Z6", "Z8", "Z2xZ4", "Z3xZ3", "Z12"].map(g);
    let mut r = rng(9);
    let mut min_slack = f64::INFINITY;
    for i in 0..2000 {
        let a = &groups[i % groups.len()];
        let f = random_unit_window(a, &mut r);
        let gw = random_unit_window(a, &mut r);
        for p in ps {
            let rep = lieb_check(&f, &gw, p).unwrap();
            min_slack = min_slack.min(rep.margin);
            ensure(rep.margin >= -1e-12, || format!("{a} p={p}: margin {}", rep.margin))?;
        }
        // p = 4 equality agrees with the single-window verdict
        for w in [&f, &gw] {
            let eq = lieb_check(w, w, 4.0).unwrap().equality;
            let opt = classify_optimizer(w, 1e-10).unwrap().is_optimizer();
            ensure(eq == opt, || format!("{a}: equality {eq}, optimizer {opt}"))?;
        }
    }

    let mut worst = 0.0f64;
    let mut pairs = 0;
    for a in ["Z4", "Z6", "Z8", "Z2xZ2", "Z2xZ4", "Z3xZ3"].map(g) {
        let pg = a.product(&a);
        for t in enumerate_maximal_isotropic(&a).unwrap() {
            let z1 = pg.element_at(r.random_range(0..pg.order()));
            let z2 = pg.element_at(r.random_range(0..pg.order()));
            let c1 = ExactScalar::unit(UnitPhase::new(r.random_range(0..12), 12));
            let c2 = ExactScalar::unit(UnitPhase::new(r.random_range(0..12), 12));
            let (f, gw) = matched_subcharacter_pair_exact(&t, &c1, &c2, &z1, &z2).unwrap();
            // unit-norm versions where the normalization is rational
            let (f, gw) = (f.normalized().unwrap(), gw.normalized().unwrap());
            for p in ps {
                let rep = lieb_check(&f, &gw, p).unwrap();
                worst = worst.max(rep.margin.abs());
                ensure(rep.margin.abs() <= 1e-12, || format!("{a} p={p}: optimizer margin {}", rep.margin))?;
            }
            for w in [&f, &gw] {
                ensure(lieb_check(w, w, 4.0).unwrap().equality, || format!("{a}: p=4 equality missed"))?;
                ensure(classify_optimizer(w, 1e-10).unwrap().is_optimizer(), || {
                    format!("{a}: optimizer rejected")
                })?;
            }
            pairs += 1;
        }
    }
    Ok(format!(
        "2000 random pairs, min slack {min_slack:.2e}; {pairs} optimizer pairs, max |margin| {worst:.1e}"
    ))
}

/// |V_g f|² is exactly 0 or ‖f‖²‖g‖² at every point.
fn exact_indicator(f: &Window, gw: &Window) -> Option<bool> {
    let v = stft(f, gw).ok()?;
    let vals = v.exact_values()?;
    let target = f.norm_sq_exact()? * gw.norm_sq_exact()?;
    Some(vals.iter().all(|x| {
        let sq = x.mul(&x.conj());
        sq.is_zero() || sq == CyclotomicValue::from_rational(sq.order(), target)
    }))
}

fn c10_bridge() -> Outcome {
    let grid: Vec<f64> = (0..=4).map(|k| 1.0 / f64::from(1u32 << k)).collect();
    let mut cases = 0;
    for a in ["Z4", "Z6", "Z2xZ2", "Z8"].map(g) {
        let pg = a.product(&a);
        for (i, t) in enumerate_maximal_isotropic(&a).unwrap().iter().enumerate() {
            let z = pg.element_at(i % pg.order());
            let (f, gw) = matched_subcharacter_pair_exact(t, &ExactScalar::one(), &ExactScalar::one(), &z, &pg.zero())
                .unwrap();
            let b = p_to_zero_bridge(&f, &gw, &grid).unwrap();
            let m = *b.limit.numer() as f64 / *b.limit.denom() as f64;
            let last = b.rows.last().unwrap().1;
            ensure(b.indicator && b.identity_holds, || format!("{a}: not an indicator case"))?;
            ensure((last - m).abs() <= 0.1 * m, || format!("{a}: {last} vs {m}"))?;
            ensure(exact_indicator(&f, &gw) == Some(true), || format!("{a}: exact identity fails"))?;
            cases += 1;
        }
    }

    let z4 = GroupSpec::cyclic(4);
    let f = Window::indicator(&z4, &[z4.element(&[0]), z4.element(&[1])]).unwrap();
    let b = p_to_zero_bridge(&f, &f, &grid).unwrap();
    let last = b.rows.last().unwrap().1;
    ensure(b.limit == Rational::new(11, 4), || format!("limit {}", format_rational(&b.limit)))?;
    ensure((last - 2.75).abs() <= 0.275, || format!("p=1/16 gives {last}"))?;
    ensure(b.monotone && !b.indicator, || "bridge shape".into())?;
    ensure(exact_indicator(&f, &f) == Some(false), || "non-optimizer looks like an indicator".into())?;
    Ok(format!(
        "{cases} indicator cases; Z4 non-optimizer limit 11/4, p=1/16 gives {last:.4}"
    ))
}

fn c11_eigen() -> Outcome {
    let mut commuting = 0;
    let mut witnesses = 0;
    let mut worst = 0.0f64;
    for a in all_groups_up_to(8) {
        let space = PhaseSpace::new(&a);
        let pg = space.group().clone();
        for i in 0..pg.order() {
            for j in i + 1..pg.order() {
                let (z, w) = (pg.element_at(i), pg.element_at(j));
                let sigma = symplectic_pairing(&space, &z, &w).unwrap();
                match common_eigenfunction_basis(&space, &[z.clone(), w.clone()]).unwrap() {
                    EigenOutcome::Basis { basis, residual, .. } => {
                        ensure(sigma.is_zero(), || format!("{a}: basis for non-commuting {z} {w}"))?;
                        ensure(residual <= 1e-12, || format!("{a}: residual {residual}"))?;
                        let r = is_orthonormal_basis(&basis.system(), 1e-12).unwrap();
                        ensure(r.is_basis, || format!("{a}: eigenbasis is not orthonormal"))?;
                        worst = worst.max(residual);
                        commuting += 1;
                    }
                    EigenOutcome::NonCommuting { z: z1, w: w1, sigma: s } => {
                        ensure(!sigma.is_zero() && !s.is_zero(), || format!("{a}: spurious witness"))?;
                        ensure(symplectic_pairing(&space, &z1, &w1).unwrap() == s, || format!("{a}: witness phase"))?;
                        witnesses += 1;
                    }
                }
            }
        }
    }
    Ok(format!(
        "{commuting} commuting pairs (max residual {worst:.1e}), {witnesses} non-commuting witnesses"
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("support uncertainty", c1_support_uncertainty),
        ("maximal isotropic counts", c2_cyclic_counts),
        ("closed-form ambiguity", c3_closed_form),
        ("second-degree constructor", c4_second_degree),
        ("orthonormal bases", c5_onb),
        ("non-optimizer 3 - 1/N", c6_non_optimizer),
        ("classification round trip", c7_classification),
        ("two-window support", c8_pairs),
        ("Lieb inequalities", c9_lieb),
        ("p -> 0 bridge", c10_bridge),
        ("common eigenbases", c11_eigen),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match out {
            Ok(d) => println!("criterion {:>2} {name}: PASS ({d}) [{secs:.2}s]", i + 1),
            Err(d) => {
                failed += 1;
                println!("criterion {:>2} {name}: FAIL ({d}) [{secs:.2}s]", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
