use super::{dot, scale, sub, Point};
use crate::rat::Rat;

/// Reduced row echelon form in place; returns the pivot columns.
fn rref(m: &mut [Vec<Rat>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        if row == m.len() {
            break;
        }
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = m[row][col].recip();
        for v in m[row].iter_mut() {
            *v *= &inv;
        }
        let prow = m[row].clone();
        for (r, other) in m.iter_mut().enumerate() {
            if r == row || other[col].is_zero() {
                continue;
            }
            let f = other[col].clone();
            for (j, pv) in prow.iter().enumerate() {
                if !pv.is_zero() {
                    other[j] -= &(&f * pv);
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

pub fn rank(rows: &[Point]) -> usize {
    let Some(first) = rows.first() else {
        return 0;
    };
    let mut m = rows.to_vec();
    rref(&mut m, first.len()).len()
}

/// Basis of `{x : rows · x = 0}` in `ℚ^n`, one vector per free column,
/// with a 1 in that column.
pub fn nullspace(rows: &[Point], n: usize) -> Vec<Point> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m, n);
    let mut basis = Vec::new();
    for free in (0..n).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Rat::zero(); n];
        v[free] = Rat::one();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = -&m[r][free];
        }
        basis.push(v);
    }
    basis
}

/// Unique solution of `a x = b` for square `a`, or `None` when singular.
pub fn solve_square(a: &[Point], b: &[Rat]) -> Option<Point> {
    let n = a.len();
    let mut m: Vec<Vec<Rat>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref(&mut m, n);
    if pivots.len() < n {
        return None;
    }
    Some(m.iter().map(|r| r[n].clone()).collect())
}

/// Orthogonalizes in order over the rationals, dropping vectors that become zero.
pub fn gram_schmidt(vs: &[Point]) -> Vec<Point> {
    let mut out: Vec<Point> = Vec::new();
    for v in vs {
        let mut w = v.clone();
        for b in &out {
            let c = dot(&w, b) / dot(b, b);
            if !c.is_zero() {
                w = sub(&w, &scale(&c, b));
            }
        }
        if !w.iter().all(Rat::is_zero) {
            out.push(w);
        }
    }
    out
}
