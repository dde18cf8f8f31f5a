use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::IntPoly;
use crate::error::{Error, Result};
use crate::zmatrix::IntMatrix;

/// Element `Σ c_i τ^i` of ℤ[C_m] ≅ ℤ[x]/(x^m − 1).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GroupRingElem {
    coeffs: Vec<BigInt>,
}

impl GroupRingElem {
    pub fn new(m: usize, coeffs: Vec<BigInt>) -> Result<Self> {
        check_modulus(m)?;
        if coeffs.len() != m {
            return Err(Error::Dimension(format!(
                "{} coefficients for C_{m}",
                coeffs.len()
            )));
        }
        Ok(GroupRingElem { coeffs })
    }

    pub fn zero(m: usize) -> Self {
        assert!(m >= 2, "C_m needs m >= 2");
        GroupRingElem {
            coeffs: vec![BigInt::zero(); m],
        }
    }

    pub fn scalar(m: usize, c: impl Into<BigInt>) -> Self {
        let mut e = Self::zero(m);
        e.coeffs[0] = c.into();
        e
    }

    pub fn one(m: usize) -> Self {
        Self::scalar(m, 1)
    }

    /// `τ^k`, with `k` taken modulo `m`.
    pub fn tau_pow(m: usize, k: usize) -> Self {
        let mut e = Self::zero(m);
        e.coeffs[k % m] = BigInt::one();
        e
    }

    pub fn tau(m: usize) -> Self {
        Self::tau_pow(m, 1)
    }

    /// Image of `p` under `x ↦ τ`, i.e. reduction modulo `x^m − 1`.
    pub fn from_poly(p: &IntPoly, m: usize) -> Self {
        let mut e = Self::zero(m);
        for (k, c) in p.coeffs().iter().enumerate() {
            e.coeffs[k % m] += c;
        }
        e
    }

    pub fn m(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn to_poly(&self) -> IntPoly {
        IntPoly::new(self.coeffs.clone())
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        GroupRingElem {
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self> {
        let m = self.m();
        if m != rhs.m() {
            return Err(Error::ModulusMismatch(m, rhs.m()));
        }
        let mut out = vec![BigInt::zero(); m];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[(i + j) % m] += a * b;
            }
        }
        Ok(GroupRingElem { coeffs: out })
    }

    /// Matrix of `y ↦ self·y` in the basis `1, τ, …, τ^{m−1}`; column `j` is `self·τ^j`.
    pub fn regular_representation(&self) -> IntMatrix {
        let m = self.m();
        let mut rep = IntMatrix::zeros(m, m);
        for j in 0..m {
            for (i, c) in self.coeffs.iter().enumerate() {
                rep[((i + j) % m, j)] = c.clone();
            }
        }
        rep
    }

    /// Units of ℤ[C_m] are exactly the elements whose regular representation has determinant ±1.
    pub fn is_unit(&self) -> bool {
        self.regular_representation()
            .det()
            .expect("square")
            .abs()
            .is_one()
    }
}

fn check_modulus(m: usize) -> Result<()> {
    if m < 2 {
        Err(Error::BadModulus(m))
    } else {
        Ok(())
    }
}

/// Reduction `ℤ[x] → ℤ[C_m]`, `x ↦ τ`.
pub fn reduce_mod_cyclotomic(p: &IntPoly, m: usize) -> GroupRingElem {
    GroupRingElem::from_poly(p, m)
}

impl Add for &GroupRingElem {
    type Output = GroupRingElem;

    fn add(self, rhs: &GroupRingElem) -> GroupRingElem {
        assert_eq!(self.m(), rhs.m(), "group ring order mismatch");
        GroupRingElem {
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &GroupRingElem {
    type Output = GroupRingElem;

    fn sub(self, rhs: &GroupRingElem) -> GroupRingElem {
        assert_eq!(self.m(), rhs.m(), "group ring order mismatch");
        GroupRingElem {
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Mul for &GroupRingElem {
    type Output = GroupRingElem;

    fn mul(self, rhs: &GroupRingElem) -> GroupRingElem {
        self.try_mul(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Neg for &GroupRingElem {
    type Output = GroupRingElem;

    fn neg(self) -> GroupRingElem {
        GroupRingElem {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl fmt::Display for GroupRingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Same layout as IntPoly, lowest power first, with τ for x.
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            match (first, c.is_negative()) {
                (true, true) => f.write_str("-")?,
                (true, false) => {}
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
            }
            first = false;
            if k == 0 || !mag.is_one() {
                write!(f, "{mag}")?;
            }
            match k {
                0 => {}
                1 => f.write_str("τ")?,
                _ => write!(f, "τ^{k}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for GroupRingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupRingElem[C_{}]({self})", self.m())
    }
}

/// Matrix over ℤ[C_m].
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GRMatrix {
    rows: usize,
    cols: usize,
    m: usize,
    entries: Vec<GroupRingElem>,
}

impl GRMatrix {
    pub fn new(rows: usize, cols: usize, m: usize, entries: Vec<GroupRingElem>) -> Result<Self> {
        check_modulus(m)?;
        if entries.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        if let Some(bad) = entries.iter().find(|e| e.m() != m) {
            return Err(Error::ModulusMismatch(m, bad.m()));
        }
        Ok(GRMatrix {
            rows,
            cols,
            m,
            entries,
        })
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        m: usize,
        mut f: impl FnMut(usize, usize) -> GroupRingElem,
    ) -> Result<Self> {
        let entries = (0..rows)
            .flat_map(|i| (0..cols).map(move |j| (i, j)))
            .map(|(i, j)| f(i, j))
            .collect();
        Self::new(rows, cols, m, entries)
    }

    /// Entrywise reduction of a polynomial matrix.
    pub fn from_polys(m: usize, rows: &[Vec<IntPoly>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged polynomial matrix".into()));
        }
        Self::from_fn(r, c, m, |i, j| GroupRingElem::from_poly(&rows[i][j], m))
    }

    /// Integer matrix viewed inside M(ℤ[C_m]).
    pub fn from_int(a: &IntMatrix, m: usize) -> Result<Self> {
        Self::from_fn(a.rows(), a.cols(), m, |i, j| {
            GroupRingElem::scalar(m, a[(i, j)].clone())
        })
    }

    pub fn identity(n: usize, m: usize) -> Result<Self> {
        Self::from_fn(n, n, m, |i, j| {
            if i == j {
                GroupRingElem::one(m)
            } else {
                GroupRingElem::zero(m)
            }
        })
    }

    pub fn diagonal(m: usize, diag: &[GroupRingElem]) -> Result<Self> {
        let n = diag.len();
        Self::from_fn(n, n, m, |i, j| {
            if i == j {
                diag[i].clone()
            } else {
                GroupRingElem::zero(m)
            }
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn get(&self, i: usize, j: usize) -> &GroupRingElem {
        &self.entries[i * self.cols + j]
    }

    pub fn mul(&self, rhs: &GRMatrix) -> Result<GRMatrix> {
        if self.m != rhs.m {
            return Err(Error::ModulusMismatch(self.m, rhs.m));
        }
        if self.cols != rhs.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Self::from_fn(self.rows, rhs.cols, self.m, |i, j| {
            (0..self.cols).fold(GroupRingElem::zero(self.m), |acc, k| {
                &acc + &(self.get(i, k) * rhs.get(k, j))
            })
        })
    }

    pub fn sub(&self, rhs: &GRMatrix) -> Result<GRMatrix> {
        if self.m != rhs.m {
            return Err(Error::ModulusMismatch(self.m, rhs.m));
        }
        if (self.rows, self.cols) != (rhs.rows, rhs.cols) {
            return Err(Error::Dimension("shape mismatch in subtraction".into()));
        }
        Self::from_fn(self.rows, self.cols, self.m, |i, j| {
            self.get(i, j) - rhs.get(i, j)
        })
    }

    /// Every entry multiplied on the left by `e`.
    pub fn scale(&self, e: &GroupRingElem) -> Result<GRMatrix> {
        if e.m() != self.m {
            return Err(Error::ModulusMismatch(self.m, e.m()));
        }
        Self::from_fn(self.rows, self.cols, self.m, |i, j| e * self.get(i, j))
    }

    pub fn apply(&self, v: &[GroupRingElem]) -> Result<Vec<GroupRingElem>> {
        if v.len() != self.cols {
            return Err(Error::Dimension(format!(
                "vector of length {} for {} columns",
                v.len(),
                self.cols
            )));
        }
        if let Some(bad) = v.iter().find(|e| e.m() != self.m) {
            return Err(Error::ModulusMismatch(self.m, bad.m()));
        }
        Ok((0..self.rows)
            .map(|i| {
                (0..self.cols).fold(GroupRingElem::zero(self.m), |acc, k| {
                    &acc + &(self.get(i, k) * &v[k])
                })
            })
            .collect())
    }

    /// The (m·rows)×(m·cols) integer matrix of this ℤ[C_m]-linear map on
    /// ℤ[C_m]^cols, in the basis `e_j τ^i` ordered `j·m + i`.
    pub fn expand(&self) -> IntMatrix {
        let m = self.m;
        let mut out = IntMatrix::zeros(self.rows * m, self.cols * m);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let block = self.get(i, j).regular_representation();
                for a in 0..m {
                    for b in 0..m {
                        out[(i * m + a, j * m + b)] = block[(a, b)].clone();
                    }
                }
            }
        }
        out
    }

    /// Invertible in M(ℤ[C_m]) iff the expanded integer matrix is unimodular.
    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.expand().det().expect("square").abs().is_one()
    }
}
