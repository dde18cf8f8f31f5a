//! Exact real-root counting with Sturm sequences over ℚ.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::IntPoly;

type QPoly = Vec<BigRational>;

fn to_q(p: &IntPoly) -> QPoly {
    p.coeffs()
        .iter()
        .cloned()
        .map(BigRational::from_integer)
        .collect()
}

fn trim(p: &mut QPoly) {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

fn rem(a: &QPoly, b: &QPoly) -> QPoly {
    let mut r = a.clone();
    let db = b.len() - 1;
    let lead = b.last().expect("nonzero divisor");
    while r.len() > db {
        let c = r.last().expect("nonempty") / lead;
        let shift = r.len() - 1 - db;
        for (i, bi) in b.iter().enumerate() {
            r[shift + i] -= &c * bi;
        }
        r.pop();
        trim(&mut r);
    }
    r
}

fn gcd(a: &QPoly, b: &QPoly) -> QPoly {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_empty() {
        let r = rem(&a, &b);
        a = b;
        b = r;
    }
    a
}

fn div_exact(a: &QPoly, b: &QPoly) -> QPoly {
    let mut r = a.clone();
    let db = b.len() - 1;
    let mut q = vec![BigRational::zero(); a.len() - db];
    let lead = b.last().expect("nonzero divisor");
    while r.len() > db {
        let c = r.last().expect("nonempty") / lead;
        let shift = r.len() - 1 - db;
        for (i, bi) in b.iter().enumerate() {
            r[shift + i] -= &c * bi;
        }
        q[shift] = c;
        r.pop();
    }
    trim(&mut q);
    q
}

fn derivative(p: &QPoly) -> QPoly {
    let mut d: QPoly = p
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * BigRational::from_integer(BigInt::from(k)))
        .collect();
    trim(&mut d);
    d
}

fn sign_changes(signs: impl Iterator<Item = i8>) -> usize {
    let mut last = 0i8;
    let mut changes = 0;
    for s in signs.filter(|&s| s != 0) {
        if last != 0 && s != last {
            changes += 1;
        }
        last = s;
    }
    changes
}

fn sign(x: &BigRational) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

/// Square-free part of `p` over ℚ.
fn square_free(p: &QPoly) -> QPoly {
    let g = gcd(p, &derivative(p));
    div_exact(p, &g)
}

/// Number of distinct real roots of a nonzero polynomial.
pub fn count_distinct_real_roots(p: &IntPoly) -> usize {
    assert!(!p.is_zero(), "zero polynomial has no finite root count");
    let sf = square_free(&to_q(p));
    if sf.len() <= 1 {
        return 0;
    }
    let mut seq = vec![sf.clone(), derivative(&sf)];
    loop {
        let n = seq.len();
        let r = rem(&seq[n - 2], &seq[n - 1]);
        if r.is_empty() {
            break;
        }
        seq.push(r.into_iter().map(|c| -c).collect());
    }
    let at_pos_inf = sign_changes(seq.iter().map(|s| sign(s.last().expect("nonzero"))));
    let at_neg_inf = sign_changes(seq.iter().map(|s| {
        let lead = sign(s.last().expect("nonzero"));
        if (s.len() - 1) % 2 == 0 {
            lead
        } else {
            -lead
        }
    }));
    at_neg_inf - at_pos_inf
}

/// True iff every complex root of `p` is real.
pub fn sturm_all_real(p: &IntPoly) -> bool {
    assert!(!p.is_zero(), "zero polynomial");
    let sf_degree = square_free(&to_q(p)).len() - 1;
    count_distinct_real_roots(p) == sf_degree
}
