//! ℤ[x], the group ring ℤ[C_m] = ℤ[x]/(x^m − 1), matrices over it,
//! real-rootedness, and ideals of ℤ[x] containing x^m − 1.

mod group_ring;
mod ideal;
mod poly;
mod sturm;

use num_bigint::BigInt;

pub use group_ring::{reduce_mod_cyclotomic, GRMatrix, GroupRingElem};
pub use ideal::{ideal_equal, ideal_lattice, ideal_member, ideal_quotient_order, IdealLattice};
pub use poly::IntPoly;
pub use sturm::{count_distinct_real_roots, sturm_all_real};

/// `x³ + (2n−1)x² − (n+2)x + 1`, the cubic presenting the Bowen-Franks
/// module of the spliced rose as a cyclic ℤ[C_m]-module.
pub fn xi_poly(n: u64) -> IntPoly {
    let n = BigInt::from(n);
    IntPoly::new(vec![
        BigInt::from(1),
        -(&n + 2u32),
        BigInt::from(2u32) * &n - 1u32,
        BigInt::from(1),
    ])
}

/// `1 − n·x`
pub fn one_minus_nx(n: u64) -> IntPoly {
    IntPoly::linear(-BigInt::from(n), 1)
}
