//! Invariant-factor bases of subgroups via Smith normal form.
//!
//! For a subgroup `S = ⟨g_1..g_m⟩` of `Z_{n_1} × … × Z_{n_k}`, let `L` be the
//! lattice spanned by lifts of the `g_j` and the relations `n_i e_i`, and
//! `N = diag(n)·Z^k`. Then `S ≅ L/N`. With `B` a triangular basis of `L`,
//! the relation matrix `R = diag(n)·B⁻¹` presents `S` as `Z^k / rowspan(R)`;
//! diagonalising `R` by unimodular row and column moves (column moves are
//! mirrored on the rows of `B`) yields independent generators.

use super::{GroupElement, GroupSpec, SubgroupHandle};

/// The canonical basis `(g_i, d_i)` of `S`, with `d_1 | d_2 | …`, each
/// `d_i > 1`; the internal direct sum of the `⟨g_i⟩` is `S`.
pub fn smith_canonicalize(s: &SubgroupHandle) -> Vec<(GroupElement, u64)> {
    s.canonical_basis().to_vec()
}

pub(crate) fn canonical_basis(
    parent: &GroupSpec,
    gens: &[GroupElement],
) -> Vec<(GroupElement, u64)> {
    let k = parent.rank();
    let n: Vec<i64> = parent.cyclic_orders().iter().map(|&x| x as i64).collect();

    let mut rows: Vec<Vec<i64>> = gens
        .iter()
        .map(|g| g.0.iter().map(|&c| c as i64).collect())
        .collect();
    for i in 0..k {
        let mut r = vec![0i64; k];
        r[i] = n[i];
        rows.push(r);
    }
    let basis = hermite_basis(rows, k);
    let relations = relation_matrix(&basis, &n);
    let (diag, b) = smith_diagonal(relations, basis);

    diag.into_iter()
        .zip(b)
        .filter(|(d, _)| *d > 1)
        .map(|(d, row)| (parent.element(&row), d as u64))
        .collect()
}

/// Upper-triangular basis (k × k) of the row lattice of `rows`, which must
/// have full rank.
fn hermite_basis(mut rows: Vec<Vec<i64>>, k: usize) -> Vec<Vec<i64>> {
    let mut pivot_row = 0;
    for col in 0..k {
        loop {
            let mut best: Option<usize> = None;
            for r in pivot_row..rows.len() {
                if rows[r][col] != 0
                    && best.is_none_or(|b| rows[r][col].abs() < rows[b][col].abs())
                {
                    best = Some(r);
                }
            }
            let Some(b) = best else {
                panic!("relation lattice is not of full rank");
            };
            rows.swap(pivot_row, b);
            let p = rows[pivot_row][col];
            let mut done = true;
            for r in pivot_row + 1..rows.len() {
                let v = rows[r][col];
                if v != 0 {
                    let q = v.div_euclid(p);
                    for c in col..k {
                        rows[r][c] -= q * rows[pivot_row][c];
                    }
                    if rows[r][col] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if rows[pivot_row][col] < 0 {
            for c in col..k {
                rows[pivot_row][c] = -rows[pivot_row][c];
            }
        }
        pivot_row += 1;
    }
    rows.truncate(k);
    rows
}

/// Solves `R·B = diag(n)` for upper-triangular `B`.
fn relation_matrix(b: &[Vec<i64>], n: &[i64]) -> Vec<Vec<i64>> {
    let k = n.len();
    let mut r = vec![vec![0i64; k]; k];
    for i in 0..k {
        for j in 0..k {
            let target = if i == j { n[i] } else { 0 };
            let mut acc = target;
            for l in 0..j {
                acc -= r[i][l] * b[l][j];
            }
            debug_assert_eq!(acc % b[j][j], 0, "relation lattice must contain N");
            r[i][j] = acc / b[j][j];
        }
    }
    r
}

/// Diagonalises `r` in place; column operations are mirrored on `b` so that
/// row `t` of the returned `b` generates the `t`-th cyclic summand.
fn smith_diagonal(mut r: Vec<Vec<i64>>, mut b: Vec<Vec<i64>>) -> (Vec<i64>, Vec<Vec<i64>>) {
    let k = r.len();
    for t in 0..k {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..k {
                for j in t..k {
                    if r[i][j] != 0
                        && best.is_none_or(|(bi, bj)| r[i][j].abs() < r[bi][bj].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                break;
            };
            r.swap(t, pi);
            if pj != t {
                for row in r.iter_mut() {
                    row.swap(t, pj);
                }
                b.swap(t, pj);
            }
            let p = r[t][t];
            let mut clean = true;
            for i in t + 1..k {
                let q = r[i][t].div_euclid(p);
                if q != 0 {
                    for j in t..k {
                        r[i][j] -= q * r[t][j];
                    }
                }
                if r[i][t] != 0 {
                    clean = false;
                }
            }
            for j in t + 1..k {
                let q = r[t][j].div_euclid(p);
                if q != 0 {
                    // column j -= q·column t
                    for row in r.iter_mut() {
                        row[j] -= q * row[t];
                    }
                    // mirrored: row_t(B) += q·row_j(B)
                    let rj = b[j].clone();
                    for (x, y) in b[t].iter_mut().zip(rj) {
                        *x += q * y;
                    }
                }
                if r[t][j] != 0 {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            let mut bad_row = None;
            'outer: for i in t + 1..k {
                for j in t + 1..k {
                    if r[i][j] % p != 0 {
                        bad_row = Some(i);
                        break 'outer;
                    }
                }
            }
            match bad_row {
                Some(i) => {
                    for j in t..k {
                        r[t][j] += r[i][j];
                    }
                }
                None => break,
            }
        }
        if r[t][t] < 0 {
            for row in r.iter_mut() {
                row[t] = -row[t];
            }
            for x in b[t].iter_mut() {
                *x = -*x;
            }
        }
    }
    let diag = (0..k).map(|t| r[t][t]).collect();
    (diag, b)
}
