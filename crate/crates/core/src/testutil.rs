use num_bigint::BigInt;
use proptest::prelude::*;

use crate::polyring::IntPoly;
use crate::zmatrix::IntMatrix;

pub fn matrix(rows: usize, cols: usize, bound: i64) -> impl Strategy<Value = IntMatrix> {
    proptest::collection::vec(-bound..=bound, rows * cols).prop_map(move |v| {
        IntMatrix::from_vec(rows, cols, v.into_iter().map(BigInt::from).collect()).unwrap()
    })
}

pub fn any_matrix(max_dim: usize, bound: i64) -> impl Strategy<Value = IntMatrix> {
    (1..=max_dim, 1..=max_dim).prop_flat_map(move |(r, c)| matrix(r, c, bound))
}

pub fn square(max_dim: usize, bound: i64) -> impl Strategy<Value = IntMatrix> {
    (1..=max_dim).prop_flat_map(move |n| matrix(n, n, bound))
}

pub fn poly(max_len: usize, bound: i64) -> impl Strategy<Value = IntPoly> {
    proptest::collection::vec(-bound..=bound, 0..=max_len).prop_map(|c| IntPoly::from_i64(&c))
}

/// Square matrices with entries in `0..=max_entry`; a zero row gets a loop.
pub fn regular_graph(
    max_dim: usize,
    max_entry: u64,
) -> impl Strategy<Value = crate::graphs::DirectedGraph> {
    (1..=max_dim).prop_flat_map(move |n| {
        proptest::collection::vec(proptest::collection::vec(0..=max_entry, n), n).prop_map(
            move |mut rows| {
                for (i, r) in rows.iter_mut().enumerate() {
                    if r.iter().all(|&x| x == 0) {
                        r[i] = 1;
                    }
                }
                let ids = (0..n).map(|i| format!("w{i}")).collect();
                crate::graphs::DirectedGraph::new(ids, rows).unwrap()
            },
        )
    })
}
