//! Dense Gaussian elimination over `k`.

use super::FieldElem;

/// Row-reduced echelon form; returns pivot columns.
pub fn rref(rows: &mut Vec<Vec<FieldElem>>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == rows.len() {
            break;
        }
        // the smallest pivot keeps intermediate fractions small
        let Some(sel) = (r..rows.len()).filter(|&i| !rows[i][col].is_zero()).min_by_key(|&i| rows[i][col].size()) else {
            continue;
        };
        rows.swap(r, sel);
        let inv = rows[r][col].inv().expect("nonzero pivot");
        for c in col..ncols {
            if !rows[r][c].is_zero() {
                rows[r][c] = rows[r][c].mul(&inv);
            }
        }
        for i in 0..rows.len() {
            if i == r || rows[i][col].is_zero() {
                continue;
            }
            let f = rows[i][col].clone();
            for c in col..ncols {
                if rows[r][c].is_zero() {
                    continue;
                }
                let d = f.mul(&rows[r][c]);
                rows[i][c] = rows[i][c].sub(&d);
            }
        }
        pivots.push(col);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

pub fn rank(rows: &[Vec<FieldElem>], ncols: usize) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m, ncols).len()
}

/// Basis of `{x : M x = 0}` for `M` given by rows of length `ncols`.
pub fn kernel(rows: &[Vec<FieldElem>], ncols: usize, p: u32) -> Vec<Vec<FieldElem>> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![FieldElem::zero(p); ncols];
            v[f] = FieldElem::one(p);
            for (row, &pc) in m.iter().zip(&pivots) {
                if !row[f].is_zero() {
                    v[pc] = row[f].neg();
                }
            }
            v
        })
        .collect()
}

/// Whether `v` lies in the row span of `basis`.
pub fn in_span(basis: &[Vec<FieldElem>], v: &[FieldElem]) -> bool {
    let mut m = basis.to_vec();
    let pivots = rref(&mut m, v.len());
    let mut rest = v.to_vec();
    for (row, &pc) in m.iter().zip(&pivots) {
        let f = rest[pc].clone();
        if f.is_zero() {
            continue;
        }
        for (x, y) in rest.iter_mut().zip(row) {
            if !y.is_zero() {
                *x = x.sub(&f.mul(y));
            }
        }
    }
    rest.iter().all(FieldElem::is_zero)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_of_rank_one_matrix() {
        let p = 3;
        let t0 = FieldElem::var(0, p);
        let rows = vec![vec![FieldElem::one(p), t0.clone()]];
        let ker = kernel(&rows, 2, p);
        assert_eq!(ker.len(), 1);
        assert_eq!(ker[0], vec![t0.neg(), FieldElem::one(p)]);
        assert!(in_span(&ker, &[t0.scale(2), FieldElem::constant(2, p).neg()]));
    }
}
