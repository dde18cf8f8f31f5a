use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// Canonical Hermite basis of the ℤ-span of `vectors` in ℤ^dim.
///
/// Returned vectors are in echelon order: vector `k` is zero before its pivot
/// coordinate, pivots strictly increase and are positive, and every earlier
/// vector's entry at a later pivot coordinate lies in `[0, pivot)`. Read as
/// the columns of a matrix this is the lower-triangular column Hermite form,
/// so two spans are equal exactly when their bases are equal.
pub fn hermite_basis(dim: usize, vectors: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let mut rows: Vec<Vec<BigInt>> = vectors
        .iter()
        .filter(|v| v.iter().any(|x| !x.is_zero()))
        .cloned()
        .collect();
    for v in &rows {
        assert_eq!(v.len(), dim, "vector length mismatch");
    }
    let mut pivot_row = 0;
    for col in 0..dim {
        loop {
            let best = (pivot_row..rows.len())
                .filter(|&i| !rows[i][col].is_zero())
                .min_by_key(|&i| rows[i][col].abs());
            let Some(best) = best else { break };
            rows.swap(pivot_row, best);
            let mut clean = true;
            for i in pivot_row + 1..rows.len() {
                if rows[i][col].is_zero() {
                    continue;
                }
                let q = &rows[i][col] / &rows[pivot_row][col];
                let (lo, hi) = rows.split_at_mut(i);
                for (x, y) in hi[0].iter_mut().zip(&lo[pivot_row]) {
                    *x -= &q * y;
                }
                if !rows[i][col].is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if pivot_row >= rows.len() || rows[pivot_row][col].is_zero() {
            continue;
        }
        if rows[pivot_row][col].is_negative() {
            for x in rows[pivot_row].iter_mut() {
                *x = -std::mem::take(x);
            }
        }
        let p = rows[pivot_row][col].clone();
        for k in 0..pivot_row {
            let q = rows[k][col].div_floor(&p);
            if q.is_zero() {
                continue;
            }
            let (lo, hi) = rows.split_at_mut(pivot_row);
            for (x, y) in lo[k].iter_mut().zip(&hi[0]) {
                *x -= &q * y;
            }
        }
        pivot_row += 1;
        rows.retain(|v| v.iter().any(|x| !x.is_zero()));
    }
    rows.truncate(pivot_row);
    rows
}


#[cfg(test)]
mod proptests {
    use super::*;
    use crate::testutil::matrix;
    use crate::zmatrix::ColumnSpan;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn canonical_under_basis_change(a in matrix(3, 4, 9), k in -5i64..=5) {
            let cols: Vec<Vec<BigInt>> = (0..4).map(|j| a.column(j)).collect();
            let mut other = cols.clone();
            other.rotate_left(1);
            let extra: Vec<BigInt> = other[0].iter().zip(&other[1]).map(|(x, y)| x + y * k).collect();
            other[0] = extra;
            prop_assert_eq!(hermite_basis(3, &cols), hermite_basis(3, &other));
            let span = ColumnSpan::new(&a);
            for b in hermite_basis(3, &cols) {
                prop_assert!(span.contains(&b));
            }
        }
    }
}
