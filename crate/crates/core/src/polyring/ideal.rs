use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{GroupRingElem, IntPoly};
use crate::error::{Error, Result};
use crate::order::Order;
use crate::zmatrix::{hermite_basis, solve_linear, IntMatrix};

/// An ideal of ℤ[x] containing `x^m − 1`, stored as its image in
/// ℤ[x]/(x^m − 1) ≅ ℤ^m: the Hermite basis of the ℤ-span of every
/// `x^i·g mod (x^m − 1)`.
#[derive(Clone, Debug)]
pub struct IdealLattice {
    m: usize,
    generators: Vec<IntPoly>,
    basis: Vec<Vec<BigInt>>,
}

/// The ideal `⟨x^m − 1, gens…⟩`. `x^m − 1` is adjoined implicitly.
pub fn ideal_lattice(m: usize, gens: &[IntPoly]) -> Result<IdealLattice> {
    if m < 2 {
        return Err(Error::BadModulus(m));
    }
    let mut span = Vec::with_capacity(m * gens.len());
    for g in gens {
        let mut e = GroupRingElem::from_poly(g, m);
        let tau = GroupRingElem::tau(m);
        for _ in 0..m {
            span.push(e.coeffs().to_vec());
            e = &e * &tau;
        }
    }
    Ok(IdealLattice {
        m,
        generators: gens.to_vec(),
        basis: hermite_basis(m, &span),
    })
}

impl IdealLattice {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn generators(&self) -> &[IntPoly] {
        &self.generators
    }

    /// Hermite basis vectors, i.e. the columns of the canonical form.
    pub fn basis(&self) -> &[Vec<BigInt>] {
        &self.basis
    }

    pub fn basis_matrix(&self) -> IntMatrix {
        IntMatrix::from_columns(self.m, &self.basis)
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn contains(&self, p: &IntPoly) -> bool {
        let target = GroupRingElem::from_poly(p, self.m);
        if target.is_zero() {
            return true;
        }
        if self.basis.is_empty() {
            return false;
        }
        solve_linear(&self.basis_matrix(), target.coeffs()).is_some()
    }

    /// Same `m` and same lattice.
    pub fn same_as(&self, other: &IdealLattice) -> bool {
        self.m == other.m && self.basis == other.basis
    }

    /// `|ℤ[x]/I|`: product of the Hermite pivots when the lattice has full rank.
    pub fn quotient_order(&self) -> Order {
        if self.rank() < self.m {
            return Order::Infinite;
        }
        let mut acc = BigInt::one();
        for (k, v) in self.basis.iter().enumerate() {
            debug_assert!(v[..k].iter().all(Zero::is_zero));
            acc *= &v[k];
        }
        Order::Finite(acc)
    }
}

pub fn ideal_member(p: &IntPoly, lattice: &IdealLattice) -> bool {
    lattice.contains(p)
}

pub fn ideal_equal(a: &IdealLattice, b: &IdealLattice) -> bool {
    a.same_as(b)
}

pub fn ideal_quotient_order(lattice: &IdealLattice) -> Order {
    lattice.quotient_order()
}


#[cfg(test)]
mod proptests {
    use super::*;
    use crate::testutil::poly;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn lattice_is_an_ideal(m in 2usize..6, gens in proptest::collection::vec(poly(4, 9), 1..3), q in poly(5, 5)) {
            let l = ideal_lattice(m, &gens).unwrap();
            for b in l.basis() {
                let p = IntPoly::new(b.clone());
                prop_assert!(l.contains(&(&IntPoly::x() * &p)));
                prop_assert!(l.contains(&(&q * &p)));
            }
            for g in &gens {
                prop_assert!(l.contains(g));
            }
            let x_m = &IntPoly::monomial(1, m) - &IntPoly::one();
            prop_assert!(l.contains(&x_m));
        }

        #[test]
        fn generator_order_is_irrelevant(m in 2usize..6, gens in proptest::collection::vec(poly(4, 9), 1..4)) {
            let mut rev = gens.clone();
            rev.reverse();
            let a = ideal_lattice(m, &gens).unwrap();
            let b = ideal_lattice(m, &rev).unwrap();
            prop_assert_eq!(a.basis(), b.basis());
            prop_assert!(ideal_equal(&a, &b));
        }
    }
}
