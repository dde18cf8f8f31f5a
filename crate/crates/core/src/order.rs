use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

/// Cardinality of a finitely generated abelian group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Order {
    Finite(BigInt),
    Infinite,
}

impl Order {
    /// Product of invariant factors; a zero factor means a free summand.
    pub fn from_factors<'a>(factors: impl IntoIterator<Item = &'a BigInt>) -> Order {
        let mut acc = BigInt::one();
        for d in factors {
            if d.is_zero() {
                return Order::Infinite;
            }
            acc *= d;
        }
        Order::Finite(acc)
    }

    pub fn finite(&self) -> Option<&BigInt> {
        match self {
            Order::Finite(n) => Some(n),
            Order::Infinite => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Order::Finite(_))
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(n) => write!(f, "finite {n}"),
            Order::Infinite => f.write_str("infinite"),
        }
    }
}

impl Serialize for Order {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}
