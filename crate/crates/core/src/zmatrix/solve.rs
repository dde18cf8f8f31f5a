use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use super::{snf, IntMatrix, SnfDecomposition};

/// All integer solutions of `A x = b`: `particular + span(kernel)`.
#[derive(Clone, Debug)]
pub struct LinearSolution {
    pub particular: Vec<BigInt>,
    pub kernel: Vec<Vec<BigInt>>,
}

/// Some `x` with `a * x == b` over ℤ, or `None` if no integer solution exists.
pub fn solve_linear(a: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    solve_linear_general(a, b).map(|s| s.particular)
}

pub fn solve_linear_general(a: &IntMatrix, b: &[BigInt]) -> Option<LinearSolution> {
    let span = ColumnSpan::new(a);
    let particular = span.solve(b)?;
    debug_assert_eq!(a.mul_vec(&particular), b);
    let kernel = (span.rank..a.cols())
        .map(|j| span.snf.v.column(j))
        .collect();
    Some(LinearSolution { particular, kernel })
}

/// The lattice spanned by the columns of a matrix, with its Smith form
/// computed once so that repeated membership queries are cheap.
#[derive(Clone, Debug)]
pub struct ColumnSpan {
    snf: SnfDecomposition,
    diag: Vec<BigInt>,
    rank: usize,
}

impl ColumnSpan {
    pub fn new(a: &IntMatrix) -> Self {
        let snf = snf(a);
        let diag = snf.diagonal();
        let rank = snf.rank();
        ColumnSpan { snf, diag, rank }
    }

    pub fn dim(&self) -> usize {
        self.snf.u.rows()
    }

    /// Coefficients `x` with `a * x == b`, if any.
    pub fn solve(&self, b: &[BigInt]) -> Option<Vec<BigInt>> {
        assert_eq!(self.dim(), b.len(), "right-hand side length mismatch");
        let c = self.snf.u.mul_vec(b);
        let mut y = vec![BigInt::zero(); self.snf.v.rows()];
        for (i, ci) in c.iter().enumerate() {
            if i < self.rank {
                let (q, r) = ci.div_rem(&self.diag[i]);
                if !r.is_zero() {
                    return None;
                }
                y[i] = q;
            } else if !ci.is_zero() {
                return None;
            }
        }
        Some(self.snf.v.mul_vec(&y))
    }

    pub fn contains(&self, b: &[BigInt]) -> bool {
        assert_eq!(self.dim(), b.len(), "vector length mismatch");
        let c = self.snf.u.mul_vec(b);
        c.iter().enumerate().all(|(i, ci)| {
            if i < self.rank {
                ci.is_multiple_of(&self.diag[i])
            } else {
                ci.is_zero()
            }
        })
    }
}
