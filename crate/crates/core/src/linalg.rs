//! Exact linear algebra over the integers and the rationals.
//!
//! Matrices are plain `Vec` of rows. Everything here is small-dimensional,
//! so the algorithms favour clarity over asymptotics.

use crate::arith::{is_zero_vec, lcm_denominators, ri, IVec, Int, QVec, Rat};
use num::{Integer, One, Signed, Zero};

fn sub_row_multiple(m: &mut [IVec], target: usize, src: usize, q: &Int, from: usize) {
    if q.is_zero() {
        return;
    }
    let src_row = m[src].clone();
    for (j, x) in src_row.iter().enumerate().skip(from) {
        m[target][j] -= q * x;
    }
}

/// Row echelon form by unimodular row operations, pivoting only on the first
/// `pivot_cols` columns. Returns the transformed rows and the pivot columns.
fn echelon(mut m: Vec<IVec>, pivot_cols: usize, reduce_above: bool) -> (Vec<IVec>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut prow = 0;
    for c in 0..pivot_cols {
        if prow == m.len() {
            break;
        }
        loop {
            let mut best: Option<usize> = None;
            for r in prow..m.len() {
                if !m[r][c].is_zero() && best.map_or(true, |b| m[r][c].abs() < m[b][c].abs()) {
                    best = Some(r);
                }
            }
            let Some(b) = best else { break };
            m.swap(prow, b);
            let mut clean = true;
            for r in prow + 1..m.len() {
                if !m[r][c].is_zero() {
                    let q = m[r][c].div_floor(&m[prow][c]);
                    sub_row_multiple(&mut m, r, prow, &q, c);
                    if !m[r][c].is_zero() {
                        clean = false;
                    }
                }
            }
            if clean {
                break;
            }
        }
        if prow < m.len() && !m[prow][c].is_zero() {
            if m[prow][c].is_negative() {
                for x in m[prow].iter_mut() {
                    *x = -x.clone();
                }
            }
            if reduce_above {
                for r in 0..prow {
                    let q = m[r][c].div_floor(&m[prow][c]);
                    sub_row_multiple(&mut m, r, prow, &q, c);
                }
            }
            pivots.push(c);
            prow += 1;
        }
    }
    (m, pivots)
}

/// Row Hermite normal form basis of the lattice spanned by `rows`.
pub fn hnf_rows(rows: &[IVec]) -> Vec<IVec> {
    let m: Vec<IVec> = rows.iter().filter(|r| !is_zero_vec(r)).cloned().collect();
    if m.is_empty() {
        return m;
    }
    let n = m[0].len();
    let (mut h, pivots) = echelon(m, n, true);
    h.truncate(pivots.len());
    h
}

/// Basis (in HNF) of the integer solutions of `a x = 0`, with `n` unknowns.
pub fn int_kernel(a: &[IVec], n: usize) -> Vec<IVec> {
    let m = a.len();
    let aug: Vec<IVec> = (0..n)
        .map(|i| {
            let mut row: IVec = a.iter().map(|eq| eq[i].clone()).collect();
            row.extend((0..n).map(|j| if i == j { Int::one() } else { Int::zero() }));
            row
        })
        .collect();
    let (h, pivots) = echelon(aug, m, false);
    let kernel: Vec<IVec> = h[pivots.len()..].iter().map(|row| row[m..].to_vec()).collect();
    hnf_rows(&kernel)
}

/// One integer solution of `a x = b`, if any.
pub fn int_solve(a: &[IVec], b: &[Int], n: usize) -> Option<IVec> {
    let m = a.len();
    let aug: Vec<IVec> = (0..n)
        .map(|i| {
            let mut row: IVec = a.iter().map(|eq| eq[i].clone()).collect();
            row.extend((0..n).map(|j| if i == j { Int::one() } else { Int::zero() }));
            row
        })
        .collect();
    let (h, pivots) = echelon(aug, m, false);
    let mut residual: IVec = b.to_vec();
    let mut x: IVec = vec![Int::zero(); n];
    for (i, &c) in pivots.iter().enumerate() {
        let p = &h[i][c];
        if !(&residual[c] % p).is_zero() {
            return None;
        }
        let y = &residual[c] / p;
        for j in 0..m {
            residual[j] -= &y * &h[i][j];
        }
        for j in 0..n {
            x[j] += &y * &h[i][m + j];
        }
    }
    if is_zero_vec(&residual) {
        Some(x)
    } else {
        None
    }
}

/// Clears denominators row by row in a rational system `a x = b`.
pub fn integerize_system(a: &[QVec], b: &[Rat]) -> (Vec<IVec>, IVec) {
    let mut ia = Vec::with_capacity(a.len());
    let mut ib = Vec::with_capacity(a.len());
    for (row, rhs) in a.iter().zip(b) {
        let mut all = row.clone();
        all.push(rhs.clone());
        let d = ri(&lcm_denominators(&all));
        ia.push(row.iter().map(|x| (x * &d).to_integer()).collect());
        ib.push((rhs * &d).to_integer());
    }
    (ia, ib)
}

/// Diagonal of the Smith normal form (non-negative, zeros omitted).
pub fn smith_diagonal(a: &[IVec]) -> Vec<Int> {
    let mut m: Vec<IVec> = a.to_vec();
    let rows = m.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = m[0].len();
    let mut diag = Vec::new();
    for t in 0..rows.min(cols) {
        // Bring the smallest nonzero entry of the remaining block to (t, t).
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !m[i][j].is_zero() && best.map_or(true, |(bi, bj)| m[i][j].abs() < m[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        m.swap(t, bi);
        for row in m.iter_mut() {
            row.swap(t, bj);
        }
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                let q = m[i][t].div_floor(&m[t][t]);
                sub_row_multiple(&mut m, i, t, &q, t);
                if !m[i][t].is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                let q = m[t][j].div_floor(&m[t][t]);
                if !q.is_zero() {
                    for i in t..rows {
                        let v = &q * &m[i][t];
                        m[i][j] -= v;
                    }
                }
                if !m[t][j].is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                let mut best = (t, t);
                for i in t..rows {
                    if !m[i][t].is_zero() && m[i][t].abs() < m[best.0][best.1].abs() {
                        best = (i, t);
                    }
                }
                for j in t..cols {
                    if !m[t][j].is_zero() && m[t][j].abs() < m[best.0][best.1].abs() {
                        best = (t, j);
                    }
                }
                if best.0 != t {
                    m.swap(t, best.0);
                }
                if best.1 != t {
                    for row in m.iter_mut() {
                        row.swap(t, best.1);
                    }
                }
                continue;
            }
            // Pivot must divide the rest of the block.
            let mut fix = None;
            'outer: for i in t + 1..rows {
                for j in t + 1..cols {
                    if !(&m[i][j] % &m[t][t]).is_zero() {
                        fix = Some(i);
                        break 'outer;
                    }
                }
            }
            match fix {
                Some(i) => {
                    let src = m[i].clone();
                    for (j, x) in src.iter().enumerate() {
                        m[t][j] += x;
                    }
                }
                None => break,
            }
        }
        diag.push(m[t][t].abs());
    }
    diag
}

/// Rank of a rational matrix.
pub fn rank_q(rows: &[QVec]) -> usize {
    let (_, pivots) = rref_q(rows);
    pivots.len()
}

/// Reduced row echelon form over the rationals.
pub fn rref_q(rows: &[QVec]) -> (Vec<QVec>, Vec<usize>) {
    let mut m: Vec<QVec> = rows.to_vec();
    let mut pivots = Vec::new();
    if m.is_empty() {
        return (m, pivots);
    }
    let cols = m[0].len();
    let mut prow = 0;
    for c in 0..cols {
        if prow == m.len() {
            break;
        }
        let Some(p) = (prow..m.len()).find(|&r| !m[r][c].is_zero()) else { continue };
        m.swap(prow, p);
        let inv = m[prow][c].recip();
        for x in m[prow].iter_mut() {
            *x *= &inv;
        }
        let pr = m[prow].clone();
        for r in 0..m.len() {
            if r != prow && !m[r][c].is_zero() {
                let f = m[r][c].clone();
                for j in c..cols {
                    let v = &f * &pr[j];
                    m[r][j] -= v;
                }
            }
        }
        pivots.push(c);
        prow += 1;
    }
    (m, pivots)
}

/// Basis of the rational null space of `rows` (vectors x with rows * x = 0).
pub fn nullspace_q(rows: &[QVec], ncols: usize) -> Vec<QVec> {
    if rows.is_empty() {
        return (0..ncols)
            .map(|i| (0..ncols).map(|j| if i == j { Rat::one() } else { Rat::zero() }).collect())
            .collect();
    }
    let (r, pivots) = rref_q(rows);
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Rat::zero(); ncols];
        v[free] = Rat::one();
        for (i, &pc) in pivots.iter().enumerate() {
            v[pc] = -r[i][free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Solves a square nonsingular system.
pub fn solve_q(a: &[QVec], b: &[Rat]) -> Option<QVec> {
    let n = a.len();
    let aug: Vec<QVec> = a
        .iter()
        .zip(b)
        .map(|(row, x)| {
            let mut r = row.clone();
            r.push(x.clone());
            r
        })
        .collect();
    let (r, pivots) = rref_q(&aug);
    if pivots.len() != n || pivots.iter().any(|&c| c >= n) {
        return None;
    }
    Some((0..n).map(|i| r[i][n].clone()).collect())
}

pub fn inverse_q(a: &[QVec]) -> Option<Vec<QVec>> {
    let n = a.len();
    let aug: Vec<QVec> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }));
            r
        })
        .collect();
    let (r, pivots) = rref_q(&aug);
    if pivots.len() < n || pivots[n - 1] >= n {
        return None;
    }
    Some(r.into_iter().map(|row| row[n..].to_vec()).collect())
}

pub fn det_q(a: &[QVec]) -> Rat {
    let n = a.len();
    let mut m = a.to_vec();
    let mut det = Rat::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !m[r][c].is_zero()) else { return Rat::zero() };
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        let piv = m[c][c].clone();
        det *= &piv;
        for r in c + 1..n {
            if !m[r][c].is_zero() {
                let f = &m[r][c] / &piv;
                for j in c..n {
                    let v = &f * &m[c][j];
                    m[r][j] -= v;
                }
            }
        }
    }
    det
}

/// Sylvester inertia (positive, negative, zero) of a symmetric rational matrix,
/// by symmetric congruence reduction.
pub fn inertia(sym: &[QVec]) -> (usize, usize, usize) {
    let mut a: Vec<QVec> = sym.to_vec();
    let (mut p, mut q, mut z) = (0, 0, 0);
    while !a.is_empty() {
        let n = a.len();
        if let Some(i) = (0..n).find(|&i| !a[i][i].is_zero()) {
            let d = a[i][i].clone();
            if d.is_positive() {
                p += 1;
            } else {
                q += 1;
            }
            let piv_row = a[i].clone();
            let mut next = Vec::with_capacity(n - 1);
            for r in (0..n).filter(|&r| r != i) {
                let f = &a[r][i] / &d;
                let row: QVec = (0..n)
                    .filter(|&c| c != i)
                    .map(|c| &a[r][c] - &f * &piv_row[c])
                    .collect();
                next.push(row);
            }
            a = next;
            continue;
        }
        let off = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).find(|&(i, j)| i != j && !a[i][j].is_zero());
        match off {
            Some((i, j)) => {
                // Replace e_i by e_i + e_j; the new diagonal entry is 2 a_ij.
                for c in 0..n {
                    let v = a[j][c].clone();
                    a[i][c] += v;
                }
                for r in 0..n {
                    let v = a[r][j].clone();
                    a[r][i] += v;
                }
            }
            None => {
                z += n;
                break;
            }
        }
    }
    (p, q, z)
}

pub fn mat_vec_q(a: &[QVec], v: &[Rat]) -> QVec {
    a.iter().map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum()).collect()
}

pub fn transpose<T: Clone>(a: &[Vec<T>]) -> Vec<Vec<T>> {
    if a.is_empty() {
        return Vec::new();
    }
    (0..a[0].len()).map(|j| a.iter().map(|row| row[j].clone()).collect()).collect()
}

/// Determinant of an integer matrix.
pub fn det_i(a: &[IVec]) -> Int {
    let q: Vec<QVec> = a.iter().map(|r| r.iter().map(ri).collect()).collect();
    det_q(&q).to_integer()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, ivec, rat};

    #[test]
    fn hnf_is_canonical() {
        let a = hnf_rows(&[ivec(&[2, 4]), ivec(&[3, 1])]);
        let b = hnf_rows(&[ivec(&[5, 5]), ivec(&[3, 1]), ivec(&[0, 10])]);
        assert_eq!(a, b);
        assert_eq!(a, vec![ivec(&[1, 7]), ivec(&[0, 10])]);
    }

    #[test]
    fn kernel_and_solve() {
        let a = vec![ivec(&[2, 3, 5])];
        let k = int_kernel(&a, 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            let s: Int = v.iter().zip(&a[0]).map(|(x, y)| x * y).sum();
            assert_eq!(s, int(0));
        }
        let x = int_solve(&a, &ivec(&[7]), 3).unwrap();
        let s: Int = x.iter().zip(&a[0]).map(|(p, q)| p * q).sum();
        assert_eq!(s, int(7));
        assert!(int_solve(&[ivec(&[2, 4])], &ivec(&[1]), 2).is_none());
    }

    #[test]
    fn smith_of_a2() {
        assert_eq!(smith_diagonal(&[ivec(&[2, -1]), ivec(&[-1, 2])]), ivec(&[1, 3]));
        assert_eq!(smith_diagonal(&[ivec(&[1, 0]), ivec(&[0, -106])]), ivec(&[1, 106]));
        assert_eq!(smith_diagonal(&[ivec(&[2, 0]), ivec(&[0, 3])]), ivec(&[1, 6]));
    }

    #[test]
    fn inertia_of_hyperbolic_plane() {
        let h = vec![vec![rat(0, 1), rat(1, 1)], vec![rat(1, 1), rat(0, 1)]];
        assert_eq!(inertia(&h), (1, 1, 0));
        let d = vec![vec![rat(1, 1), rat(1, 1)], vec![rat(1, 1), rat(1, 1)]];
        assert_eq!(inertia(&d), (1, 0, 1));
    }

    #[test]
    fn rational_solve_and_inverse() {
        let a = vec![vec![rat(2, 1), rat(1, 1)], vec![rat(1, 1), rat(3, 1)]];
        let x = solve_q(&a, &[rat(3, 1), rat(4, 1)]).unwrap();
        assert_eq!(x, vec![rat(1, 1), rat(1, 1)]);
        let inv = inverse_q(&a).unwrap();
        assert_eq!(inv[0][0], rat(3, 5));
        assert_eq!(det_q(&a), rat(5, 1));
    }
}
