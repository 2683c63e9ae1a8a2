//! Row reduction over a single field level (in practice F_q).

use super::{FFElem, Field};

/// Reduced row-echelon form of `rows`; zero rows are dropped. Returns the
/// nonzero rows and their pivot columns.
pub fn rref(field: &Field, rows: &[Vec<FFElem>]) -> (Vec<Vec<FFElem>>, Vec<usize>) {
    let mut m: Vec<Vec<FFElem>> = rows.to_vec();
    let ncols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(piv) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, piv);
        let inv = field.inv(&m[r][c]).expect("pivot is nonzero");
        for x in m[r].iter_mut() {
            *x = field.mul(x, &inv);
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let factor = m[i][c].clone();
                for j in 0..ncols {
                    let t = field.mul(&factor, &m[r][j]);
                    m[i][j] = field.sub(&m[i][j], &t);
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank(field: &Field, rows: &[Vec<FFElem>]) -> usize {
    rref(field, rows).1.len()
}

/// Basis of the left null space `{x : x·M = 0}` of a matrix given by rows,
/// returned in reduced row-echelon form.
pub fn nullspace(field: &Field, rows: &[Vec<FFElem>]) -> Vec<Vec<FFElem>> {
    let nrows = rows.len();
    if nrows == 0 {
        return Vec::new();
    }
    // x·M = 0  ⟺  Mᵀ·xᵀ = 0
    let ncols = rows[0].len();
    let transposed: Vec<Vec<FFElem>> = (0..ncols)
        .map(|j| (0..nrows).map(|i| rows[i][j].clone()).collect())
        .collect();
    let (red, pivots) = rref(field, &transposed);
    let free: Vec<usize> = (0..nrows).filter(|c| !pivots.contains(c)).collect();
    let basis: Vec<Vec<FFElem>> = free
        .iter()
        .map(|&fc| {
            let mut v = vec![field.zero(); nrows];
            v[fc] = field.one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = field.neg(&red[r][fc]);
            }
            v
        })
        .collect();
    rref(field, &basis).0
}

/// Some `x` with `x·M = target`, where M is given by rows; `None` if the
/// system is inconsistent.
pub fn solve_row_system(
    field: &Field,
    rows: &[Vec<FFElem>],
    target: &[FFElem],
) -> Option<Vec<FFElem>> {
    let nrows = rows.len();
    let ncols = target.len();
    // augmented system Mᵀ x = target
    let aug: Vec<Vec<FFElem>> = (0..ncols)
        .map(|j| {
            let mut row: Vec<FFElem> = (0..nrows).map(|i| rows[i][j].clone()).collect();
            row.push(target[j].clone());
            row
        })
        .collect();
    let (red, pivots) = rref(field, &aug);
    if pivots.last() == Some(&nrows) {
        return None;
    }
    let mut x = vec![field.zero(); nrows];
    for (r, &pc) in pivots.iter().enumerate() {
        x[pc] = red[r][nrows].clone();
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::{FieldCtx, Level};

    #[test]
    fn nullspace_of_rank_one() {
        let ctx = FieldCtx::new(3, 1, 2, 1).unwrap();
        let b = ctx.level(Level::Base);
        let one = b.one();
        let two = b.constant(2);
        // rows (1,2),(2,1): second = 2·first over F_3
        let rows = vec![
            vec![one.clone(), two.clone()],
            vec![two.clone(), one.clone()],
        ];
        assert_eq!(rank(b, &rows), 1);
        let ns = nullspace(b, &rows);
        assert_eq!(ns.len(), 1);
        // x·M = 0
        let x = &ns[0];
        for j in 0..2 {
            let s = b.add(&b.mul(&x[0], &rows[0][j]), &b.mul(&x[1], &rows[1][j]));
            assert!(s.is_zero());
        }
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let ctx = FieldCtx::new(5, 1, 2, 1).unwrap();
        let b = ctx.level(Level::Base);
        let rows = vec![
            vec![b.constant(1), b.constant(2)],
            vec![b.constant(2), b.constant(4)],
        ];
        assert!(solve_row_system(b, &rows, &[b.constant(1), b.constant(1)]).is_none());
        let x = solve_row_system(b, &rows, &[b.constant(3), b.constant(1)]).unwrap();
        for j in 0..2 {
            let s = b.add(&b.mul(&x[0], &rows[0][j]), &b.mul(&x[1], &rows[1][j]));
            assert_eq!(s, [b.constant(3), b.constant(1)][j]);
        }
    }
}
