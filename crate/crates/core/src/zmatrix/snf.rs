use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::IntMatrix;

/// `u * a * v == s` with `u`, `v` unimodular and `s` diagonal,
/// `s[0,0] | s[1,1] | ...`, all diagonal entries non-negative.
#[derive(Clone, Debug)]
pub struct SnfDecomposition {
    pub u: IntMatrix,
    /// Inverse of `u`, tracked alongside it.
    pub u_inv: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
}

impl SnfDecomposition {
    /// Diagonal of `s` (length `min(rows, cols)`).
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.s.rows().min(self.s.cols()))
            .map(|i| self.s[(i, i)].clone())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().take_while(|d| !d.is_zero()).count()
    }

    /// Invariant factors of the cokernel `ℤ^rows / im(a)`: the diagonal,
    /// padded with zeros when there are fewer columns than rows.
    pub fn cokernel_factors(&self) -> Vec<BigInt> {
        let mut d = self.diagonal();
        d.resize(self.s.rows(), BigInt::zero());
        d
    }
}

struct Work {
    a: Vec<Vec<BigInt>>,
    u: Vec<Vec<BigInt>>,
    u_inv: Vec<Vec<BigInt>>,
    v: Vec<Vec<BigInt>>,
}

impl Work {
    // row_i += k * row_j
    fn add_row(&mut self, i: usize, j: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for m in [&mut self.a, &mut self.u] {
            let src = m[j].clone();
            for (x, y) in m[i].iter_mut().zip(&src) {
                *x += k * y;
            }
        }
        for row in &mut self.u_inv {
            let t = k * &row[i];
            row[j] -= t;
        }
    }

    // col_i += k * col_j
    fn add_col(&mut self, i: usize, j: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for m in [&mut self.a, &mut self.v] {
            for row in m.iter_mut() {
                let t = k * &row[j];
                row[i] += t;
            }
        }
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.a.swap(i, j);
        self.u.swap(i, j);
        for row in &mut self.u_inv {
            row.swap(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for m in [&mut self.a, &mut self.v] {
            for row in m.iter_mut() {
                row.swap(i, j);
            }
        }
    }

    fn negate_col(&mut self, j: usize) {
        for m in [&mut self.a, &mut self.v] {
            for row in m.iter_mut() {
                row[j] = -std::mem::take(&mut row[j]);
            }
        }
    }

    /// Smallest nonzero |entry| in rows/cols `t..`, restricted to row t and
    /// column t when `cross_only`.
    fn min_pivot(&self, t: usize, cross_only: bool) -> Option<(usize, usize)> {
        let rows = self.a.len();
        let cols = self.a.first().map_or(0, Vec::len);
        let mut best: Option<(usize, usize)> = None;
        let consider = |i: usize, j: usize, best: &mut Option<(usize, usize)>| {
            let x = &self.a[i][j];
            if x.is_zero() {
                return;
            }
            match best {
                Some((bi, bj)) if self.a[*bi][*bj].abs() <= x.abs() => {}
                _ => *best = Some((i, j)),
            }
        };
        if cross_only {
            for i in t..rows {
                consider(i, t, &mut best);
            }
            for j in t + 1..cols {
                consider(t, j, &mut best);
            }
        } else {
            for i in t..rows {
                for j in t..cols {
                    consider(i, j, &mut best);
                }
            }
        }
        best
    }
}

/// Smith normal form with minimal-absolute-value pivoting.
pub fn snf(a: &IntMatrix) -> SnfDecomposition {
    let rows = a.rows();
    let cols = a.cols();
    let mut w = Work {
        a: a.to_rows(),
        u: IntMatrix::identity(rows).to_rows(),
        u_inv: IntMatrix::identity(rows).to_rows(),
        v: IntMatrix::identity(cols).to_rows(),
    };

    for t in 0..rows.min(cols) {
        let Some((pi, pj)) = w.min_pivot(t, false) else {
            break;
        };
        w.swap_rows(t, pi);
        w.swap_cols(t, pj);
        loop {
            let p = w.a[t][t].clone();
            for i in t + 1..rows {
                if !w.a[i][t].is_zero() {
                    let q = -(&w.a[i][t] / &p);
                    w.add_row(i, t, &q);
                }
            }
            for j in t + 1..cols {
                if !w.a[t][j].is_zero() {
                    let q = -(&w.a[t][j] / &p);
                    w.add_col(j, t, &q);
                }
            }
            let cross_clear = (t + 1..rows).all(|i| w.a[i][t].is_zero())
                && (t + 1..cols).all(|j| w.a[t][j].is_zero());
            if !cross_clear {
                // A remainder smaller than the pivot is left; it becomes the new pivot.
                let (pi, pj) = w.min_pivot(t, true).expect("nonzero remainder");
                w.swap_rows(t, pi);
                w.swap_cols(t, pj);
                continue;
            }
            let p = w.a[t][t].clone();
            let offender =
                (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !w.a[i][j].is_multiple_of(&p)));
            match offender {
                Some(i) => {
                    let one = BigInt::from(1);
                    w.add_row(t, i, &one);
                }
                None => break,
            }
        }
        if w.a[t][t].is_negative() {
            w.negate_col(t);
        }
    }

    let to_matrix = |m: Vec<Vec<BigInt>>, r: usize, c: usize| {
        IntMatrix::from_vec(r, c, m.into_iter().flatten().collect()).expect("shape preserved")
    };
    SnfDecomposition {
        s: to_matrix(w.a, rows, cols),
        u: to_matrix(w.u, rows, rows),
        u_inv: to_matrix(w.u_inv, rows, rows),
        v: to_matrix(w.v, cols, cols),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn check(a: &IntMatrix) -> SnfDecomposition {
        let d = snf(a);
        assert_eq!(d.u.mul(a).mul(&d.v), d.s);
        assert_eq!(d.u.mul(&d.u_inv), IntMatrix::identity(a.rows()));
        assert_eq!(d.u.det().unwrap().abs(), BigInt::one());
        assert_eq!(d.v.det().unwrap().abs(), BigInt::one());
        for i in 0..d.s.rows() {
            for j in 0..d.s.cols() {
                if i != j {
                    assert!(d.s[(i, j)].is_zero());
                }
            }
        }
        let diag = d.diagonal();
        for w in diag.windows(2) {
            assert!(!w[0].is_negative());
            if w[0].is_zero() {
                assert!(w[1].is_zero());
            } else {
                assert!(w[1].is_multiple_of(&w[0]));
            }
        }
        d
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn identity_is_its_own_form() {
        let d = check(&IntMatrix::identity(3));
        assert_eq!(d.s, IntMatrix::identity(3));
    }

    #[test]
    fn two_by_two() {
        let d = check(&IntMatrix::from_rows(&[vec![2, 4], vec![6, 8]]));
        assert_eq!(d.diagonal(), ints(&[2, 4]));
    }

    #[test]
    fn zero_matrix() {
        let d = check(&IntMatrix::zeros(2, 3));
        assert!(d.s.is_zero());
        assert_eq!(d.rank(), 0);
    }

    #[test]
    fn rectangular_and_empty() {
        let d = check(&IntMatrix::from_rows(&[
            vec![6, -4],
            vec![-4, 6],
            vec![2, 2],
        ]));
        assert_eq!(d.diagonal(), ints(&[2, 10]));
        let d = check(&IntMatrix::from_rows(&[vec![3], vec![0]]));
        assert_eq!(d.cokernel_factors(), ints(&[3, 0]));
        let e = snf(&IntMatrix::zeros(2, 0));
        assert_eq!(e.cokernel_factors(), ints(&[0, 0]));
    }

    #[test]
    fn scalar_keeps_trivial_left_transform() {
        let d = check(&IntMatrix::from_rows(&[vec![-3]]));
        assert_eq!(d.u, IntMatrix::identity(1));
        assert_eq!(d.diagonal(), ints(&[3]));
    }

    #[test]
    fn already_diagonal_chain_is_untouched() {
        let a = IntMatrix::diagonal(&ints(&[2, 10]));
        let d = check(&a);
        assert_eq!(d.u, IntMatrix::identity(2));
        assert_eq!(d.s, a);
    }

    #[test]
    fn coprime_diagonal_is_fixed() {
        let d = check(&IntMatrix::diagonal(&ints(&[4, 6])));
        assert_eq!(d.diagonal(), ints(&[2, 12]));
    }
}
