//! Exact linear algebra over an ordered field: rank, and a phase-one simplex
//! deciding whether `M w = 0` has a strictly positive solution.

use crate::scalar::Exact;

/// Rank by Gaussian elimination.
pub fn rank<Q: Exact>(rows: &[Vec<Q>]) -> usize {
    let mut a: Vec<Vec<Q>> = rows.to_vec();
    let ncols = a.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..ncols {
        let Some(piv) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, piv);
        for i in 0..a.len() {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone() / a[r][c].clone();
                for k in c..ncols {
                    let d = f.clone() * a[r][k].clone();
                    a[i][k] = a[i][k].clone() - d;
                }
            }
        }
        r += 1;
        if r == a.len() {
            break;
        }
    }
    r
}

/// Some `s >= 0` with `A s = b`, or `None` if the polyhedron is empty.
///
/// Phase one of the simplex method with one artificial per row and Bland's
/// rule, so it terminates without cycling.
pub fn nonnegative_solution<Q: Exact>(a: &[Vec<Q>], b: &[Q]) -> Option<Vec<Q>> {
    let m = a.len();
    let n = a.first().map_or(0, |r| r.len());
    // tableau columns: n structural, m artificial, rhs
    let width = n + m + 1;
    let mut t: Vec<Vec<Q>> = Vec::with_capacity(m);
    for (i, row) in a.iter().enumerate() {
        let flip = b[i].is_negative();
        let mut tr = vec![Q::zero(); width];
        for (j, v) in row.iter().enumerate() {
            tr[j] = if flip { -v.clone() } else { v.clone() };
        }
        tr[n + i] = Q::one();
        tr[width - 1] = if flip { -b[i].clone() } else { b[i].clone() };
        t.push(tr);
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    // reduced costs of "minimise the sum of artificials"
    let reduced = |t: &Vec<Vec<Q>>, basis: &[usize], j: usize| -> Q {
        let cost = |k: usize| {
            if k >= n && k < n + m {
                Q::one()
            } else {
                Q::zero()
            }
        };
        let mut z = Q::zero();
        for (i, &bk) in basis.iter().enumerate() {
            z = z + cost(bk) * t[i][j].clone();
        }
        cost(j) - z
    };

    loop {
        let entering =
            (0..n + m).find(|&j| !basis.contains(&j) && reduced(&t, &basis, j).is_negative());
        let Some(e) = entering else { break };
        let mut leave: Option<(usize, Q)> = None;
        for i in 0..m {
            if t[i][e].is_positive() {
                let ratio = t[i][width - 1].clone() / t[i][e].clone();
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        // the phase-one objective is bounded below by 0
        let (r, _) = leave.expect("phase one is bounded");
        pivot(&mut t, r, e);
        basis[r] = e;
    }

    let infeasible = basis
        .iter()
        .enumerate()
        .any(|(i, &bk)| bk >= n && t[i][width - 1].is_positive());
    if infeasible {
        return None;
    }
    let mut s = vec![Q::zero(); n];
    for (i, &bk) in basis.iter().enumerate() {
        if bk < n {
            s[bk] = t[i][width - 1].clone();
        }
    }
    Some(s)
}

fn pivot<Q: Exact>(t: &mut [Vec<Q>], r: usize, c: usize) {
    let p = t[r][c].clone();
    for v in t[r].iter_mut() {
        *v = v.clone() / p.clone();
    }
    for i in 0..t.len() {
        if i != r && !t[i][c].is_zero() {
            let f = t[i][c].clone();
            for k in 0..t[i].len() {
                let d = f.clone() * t[r][k].clone();
                t[i][k] = t[i][k].clone() - d;
            }
        }
    }
}

/// A vector `w` with every `w_i >= 1` and `M w = 0`, if the kernel of `M`
/// meets the open positive orthant. Solved as `M s = -M 1`, `s >= 0`,
/// `w = 1 + s`.
pub fn positive_kernel_vector<Q: Exact>(m: &[Vec<Q>], ncols: usize) -> Option<Vec<Q>> {
    if ncols == 0 {
        return None;
    }
    let b: Vec<Q> = m
        .iter()
        .map(|row| row.iter().fold(Q::zero(), |acc, v| acc - v.clone()))
        .collect();
    let s = nonnegative_solution(m, &b)?;
    Some(s.into_iter().map(|x| x + Q::one()).collect())
}
