//! Existence of unit-preserving ℤ[C_m]-module homomorphisms.
//!
//! A homomorphism `M → N` between presented modules is an integer matrix `F`
//! (target rank × source rank) such that
//!
//! 1. `F` sends every relation of `M` into the relation lattice of `N`,
//! 2. `F·τ_M − τ_N·F` sends every basis vector into that lattice,
//! 3. `F·u_M − u_N` lies in that lattice.
//!
//! [`hom_exists`] decides this with one integer linear system. Membership in
//! `N`'s relation lattice is rewritten through its Smith form `P·Rel_N·Q = D`
//! as congruences `(P v)_i ≡ 0 (mod d_i)`, with one multiplier per nontrivial
//! `d_i`. [`hom_exists_bruteforce`] enumerates images of generators in a finite
//! target and serves as an independent check.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};
use serde_json::Value;

use crate::bfmod::{bf_module, bf_splice_presentation, FPModule};
use crate::error::{Error, Result};
use crate::graphs::rose;
use crate::json;
use crate::zmatrix::{snf, solve_linear_general, IntMatrix, LinearSolution};

pub const DEFAULT_BRUTE_LIMIT: u64 = 1_000_000;
pub const BRUTE_LIMIT_ENV: &str = "SPLICEGUARD_BRUTE_LIMIT";

/// Brute-force bound, overridable through `SPLICEGUARD_BRUTE_LIMIT`.
pub fn brute_limit_from_env() -> u64 {
    std::env::var(BRUTE_LIMIT_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_BRUTE_LIMIT)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    LinearSystem,
    BruteForce,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomVerdict {
    pub exists: bool,
    #[serde(serialize_with = "json::ser_opt_matrix")]
    pub witness: Option<IntMatrix>,
    pub method: Method,
}

fn check_moduli(source: &FPModule, target: &FPModule) -> Result<()> {
    if source.m() != target.m() {
        return Err(Error::ModulusMismatch(source.m(), target.m()));
    }
    Ok(())
}

/// Direct substitution of `f` into the three constraint families.
pub fn check_hom(f: &IntMatrix, source: &FPModule, target: &FPModule) -> bool {
    if f.rows() != target.ambient_rank()
        || f.cols() != source.ambient_rank()
        || source.m() != target.m()
    {
        return false;
    }
    let span = target.relation_span();
    let relations_ok = {
        let img = f.mul(source.relations());
        (0..img.cols()).all(|j| span.contains(&img.column(j)))
    };
    let equivariant = {
        let diff = f.mul(source.action()).sub(&target.action().mul(f));
        (0..diff.cols()).all(|j| span.contains(&diff.column(j)))
    };
    let unit_ok = {
        let image = f.mul_vec(source.unit());
        let diff: Vec<BigInt> = image
            .iter()
            .zip(target.unit())
            .map(|(a, b)| a - b)
            .collect();
        span.contains(&diff)
    };
    relations_ok && equivariant && unit_ok
}

/// The integer system whose solutions are `(vec(F), multipliers)`; `F` is
/// stored row-major in the first `target_rank * source_rank` unknowns.
struct HomSystem {
    matrix: IntMatrix,
    rhs: Vec<BigInt>,
    rows_f: usize,
    cols_f: usize,
}

impl HomSystem {
    fn build(source: &FPModule, target: &FPModule) -> HomSystem {
        let rs = source.ambient_rank();
        let rt = target.ambient_rank();
        let nf = rt * rs;
        let d = snf(target.relations());
        let factors = d.cokernel_factors();
        let p = &d.u;
        let p_action = p.mul(target.action());
        let kept: Vec<usize> = (0..rt).filter(|&i| !factors[i].is_one()).collect();

        let mut rows: Vec<(Vec<BigInt>, BigInt)> = Vec::new();
        // Row for (P·F·w)_i, optionally minus (P·τ_N·F·e_j)_i.
        let push_image = |rows: &mut Vec<(Vec<BigInt>, BigInt)>,
                          w: &[BigInt],
                          col: Option<usize>,
                          rhs: BigInt,
                          i: usize| {
            let mut coef = vec![BigInt::zero(); nf];
            for a in 0..rt {
                if p[(i, a)].is_zero() {
                    continue;
                }
                for (b, wb) in w.iter().enumerate() {
                    if !wb.is_zero() {
                        coef[a * rs + b] += &p[(i, a)] * wb;
                    }
                }
            }
            if let Some(j) = col {
                for c in 0..rt {
                    coef[c * rs + j] -= &p_action[(i, c)];
                }
            }
            rows.push((coef, rhs));
        };

        let pu = p.mul_vec(target.unit());
        for &i in &kept {
            for k in 0..source.relations().cols() {
                push_image(
                    &mut rows,
                    &source.relations().column(k),
                    None,
                    BigInt::zero(),
                    i,
                );
            }
            for j in 0..rs {
                push_image(
                    &mut rows,
                    &source.action().column(j),
                    Some(j),
                    BigInt::zero(),
                    i,
                );
            }
            push_image(&mut rows, source.unit(), None, pu[i].clone(), i);
        }

        // One multiplier per equation whose modulus is a nontrivial d_i.
        let moduli: Vec<&BigInt> = {
            let per_factor = source.relations().cols() + rs + 1;
            kept.iter()
                .flat_map(|&i| std::iter::repeat_n(&factors[i], per_factor))
                .collect()
        };
        let extra = moduli.iter().filter(|d| !d.is_zero()).count();
        let mut matrix = IntMatrix::zeros(rows.len(), nf + extra);
        let mut rhs = Vec::with_capacity(rows.len());
        let mut next = nf;
        for (e, ((coef, r), modulus)) in rows.into_iter().zip(moduli).enumerate() {
            for (v, c) in coef.into_iter().enumerate() {
                matrix[(e, v)] = c;
            }
            if !modulus.is_zero() {
                matrix[(e, next)] = -modulus.clone();
                next += 1;
            }
            rhs.push(r);
        }
        HomSystem {
            matrix,
            rhs,
            rows_f: rt,
            cols_f: rs,
        }
    }

    fn witness(&self, solution: &[BigInt]) -> IntMatrix {
        let n = self.rows_f * self.cols_f;
        IntMatrix::from_vec(self.rows_f, self.cols_f, solution[..n].to_vec()).expect("shape")
    }

    fn solve(&self) -> Option<LinearSolution> {
        if self.matrix.rows() == 0 {
            let zero = vec![BigInt::zero(); self.matrix.cols()];
            let kernel = (0..self.matrix.cols())
                .map(|j| {
                    (0..self.matrix.cols())
                        .map(|i| BigInt::from(u8::from(i == j)))
                        .collect()
                })
                .collect();
            return Some(LinearSolution {
                particular: zero,
                kernel,
            });
        }
        solve_linear_general(&self.matrix, &self.rhs)
    }
}

/// Decides whether a unit-preserving ℤ[C_m]-homomorphism `source → target` exists.
pub fn hom_exists(source: &FPModule, target: &FPModule) -> Result<HomVerdict> {
    check_moduli(source, target)?;
    let system = HomSystem::build(source, target);
    let verdict = match system.solve() {
        Some(sol) => {
            let f = system.witness(&sol.particular);
            assert!(
                check_hom(&f, source, target),
                "linear-system witness failed substitution"
            );
            HomVerdict {
                exists: true,
                witness: Some(f),
                method: Method::LinearSystem,
            }
        }
        None => HomVerdict {
            exists: false,
            witness: None,
            method: Method::LinearSystem,
        },
    };
    Ok(verdict)
}

fn reduce_vec(v: &mut [BigInt], moduli: &[BigInt]) {
    for (x, d) in v.iter_mut().zip(moduli) {
        *x = x.mod_floor(d);
    }
}

/// All tuples `0 <= x_j < d_j` in lexicographic order.
fn elements(moduli: &[BigInt]) -> Vec<Vec<BigInt>> {
    let mut out = vec![Vec::new()];
    for d in moduli {
        let d = d.to_u64().expect("bounded order");
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..d).map(move |x| {
                    let mut p = prefix.clone();
                    p.push(BigInt::from(x));
                    p
                })
            })
            .collect();
    }
    out
}

/// Exhaustive search over images of the source's cyclic generators in a
/// finite target. Candidates are tried in lexicographic order, so the witness
/// is deterministic.
pub fn hom_exists_bruteforce(
    source: &FPModule,
    target: &FPModule,
    limit: u64,
) -> Result<HomVerdict> {
    check_moduli(source, target)?;
    let st = source.structure();
    let tt = target.structure();
    let d = tt.invariant_factors.clone();
    if d.iter().any(Zero::is_zero) {
        return Err(Error::InfiniteTarget);
    }
    let order: BigInt = d.iter().product();
    if order > BigInt::from(limit) {
        return Err(Error::BruteForceBound {
            needed: order.to_string(),
            limit,
        });
    }
    let all = elements(&d);
    let candidates: Vec<Vec<&Vec<BigInt>>> = st
        .invariant_factors
        .iter()
        .map(|e| {
            all.iter()
                .filter(|x| x.iter().zip(&d).all(|(xi, di)| (e * xi).is_multiple_of(di)))
                .collect()
        })
        .collect();
    let needed: BigInt = candidates.iter().map(|c| BigInt::from(c.len())).product();
    if needed > BigInt::from(limit) {
        return Err(Error::BruteForceBound {
            needed: needed.to_string(),
            limit,
        });
    }

    let k = candidates.len();
    let kt = d.len();
    let accepts = |imgs: &[&Vec<BigInt>]| -> bool {
        for i in 0..k {
            let mut lhs = vec![BigInt::zero(); kt];
            for (j, img) in imgs.iter().enumerate() {
                let c = &st.action[(j, i)];
                for (l, x) in lhs.iter_mut().zip(img.iter()) {
                    *l += c * x;
                }
            }
            let mut rhs = tt.action.mul_vec(imgs[i]);
            reduce_vec(&mut lhs, &d);
            reduce_vec(&mut rhs, &d);
            if lhs != rhs {
                return false;
            }
        }
        let mut u = vec![BigInt::zero(); kt];
        for (c, img) in st.unit.iter().zip(imgs) {
            for (l, x) in u.iter_mut().zip(img.iter()) {
                *l += c * x;
            }
        }
        reduce_vec(&mut u, &d);
        u == tt.unit
    };

    let mut idx = vec![0usize; k];
    if candidates.iter().any(Vec::is_empty) {
        return Ok(HomVerdict {
            exists: false,
            witness: None,
            method: Method::BruteForce,
        });
    }
    loop {
        let imgs: Vec<&Vec<BigInt>> = idx.iter().zip(&candidates).map(|(&i, c)| c[i]).collect();
        if accepts(&imgs) {
            let cols: Vec<Vec<BigInt>> = imgs.into_iter().cloned().collect();
            let f_struct = IntMatrix::from_columns(kt, &cols);
            let f = tt.from_structure.mul(&f_struct).mul(&st.to_structure);
            assert!(
                check_hom(&f, source, target),
                "brute-force witness failed substitution"
            );
            return Ok(HomVerdict {
                exists: true,
                witness: Some(f),
                method: Method::BruteForce,
            });
        }
        // Odometer, last generator fastest.
        let mut pos = k;
        loop {
            if pos == 0 {
                return Ok(HomVerdict {
                    exists: false,
                    witness: None,
                    method: Method::BruteForce,
                });
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < candidates[pos].len() {
                break;
            }
            idx[pos] = 0;
        }
    }
}

/// `f` is a homomorphism inducing a bijection of the quotients.
pub fn is_isomorphism(f: &IntMatrix, source: &FPModule, target: &FPModule) -> bool {
    if !check_hom(f, source, target) {
        return false;
    }
    let rt = target.ambient_rank();
    let surjective = {
        let d = snf(&f.hcat(target.relations()));
        d.cokernel_factors().iter().all(One::is_one)
    };
    if !surjective {
        return false;
    }
    // Kernel: x with F x ∈ span(Rel_N), i.e. (x, y) with F x − Rel_N y = 0.
    let stacked = f.hcat(&target.relations().scale(&BigInt::from(-1)));
    let Some(sol) = solve_linear_general(&stacked, &vec![BigInt::zero(); rt]) else {
        return false;
    };
    let span = source.relation_span();
    sol.kernel
        .iter()
        .all(|k| span.contains(&k[..source.ambient_rank()]))
}

/// Searches the affine family of unit-preserving homomorphisms for an
/// isomorphism, sampling with a fixed seed. `None` means none was found in
/// `attempts` samples, not that none exists.
pub fn find_isomorphism(
    source: &FPModule,
    target: &FPModule,
    attempts: usize,
) -> Result<Option<IntMatrix>> {
    check_moduli(source, target)?;
    let system = HomSystem::build(source, target);
    let Some(sol) = system.solve() else {
        return Ok(None);
    };
    let base = system.witness(&sol.particular);
    if is_isomorphism(&base, source, target) {
        return Ok(Some(base));
    }
    let spread = match target.order().finite() {
        Some(n) => target
            .structure()
            .invariant_factors
            .last()
            .cloned()
            .unwrap_or_else(|| n.clone())
            .to_i64()
            .unwrap_or(i64::MAX),
        None => 3,
    }
    .max(2);
    let directions: Vec<IntMatrix> = sol
        .kernel
        .iter()
        .map(|k| system.witness(k))
        .filter(|k| !k.is_zero())
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..attempts {
        let mut f = base.clone();
        for dir in &directions {
            let c = BigInt::from(rng.random_range(0..spread));
            if !c.is_zero() {
                f = f.add(&dir.scale(&c));
            }
        }
        if is_isomorphism(&f, source, target) {
            return Ok(Some(f));
        }
    }
    Ok(None)
}

/// Arithmetic obstruction for maps from the spliced rose's module to the rose's.
///
/// The target is `ℤ/d` with τ acting as multiplication by `a`; any
/// equivariant `φ` sends `1 − nτ` to `φ(1)·(1 − n·a)`. When `1 − n·a ≡ 0`
/// but the target unit is nonzero, no unit-preserving `φ` exists.
#[derive(Clone, Debug, Serialize)]
pub struct Main1Certificate {
    pub n: u64,
    pub m: usize,
    #[serde(serialize_with = "ser_int")]
    pub modulus: BigInt,
    #[serde(serialize_with = "ser_int")]
    pub tau_action: BigInt,
    #[serde(serialize_with = "ser_int")]
    pub target_unit: BigInt,
    /// `(1 − n·a) mod d`
    #[serde(serialize_with = "ser_int")]
    pub unit_multiplier: BigInt,
    /// `(1 − n^m) mod d`
    #[serde(serialize_with = "ser_int")]
    pub one_minus_n_pow_m: BigInt,
    pub contradiction: bool,
    pub hom_exists: bool,
}

fn ser_int<S: Serializer>(n: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    json::number(n).serialize(s)
}

impl Main1Certificate {
    /// The obstruction holds and the linear-system decision agrees with it.
    pub fn consistent(&self) -> bool {
        self.contradiction && !self.hom_exists
    }
}

pub fn theorem_main1_certificate(n: u64, m: usize) -> Result<Main1Certificate> {
    if n < 2 {
        return Err(Error::Precondition(format!("n = {n}, need n >= 2")));
    }
    let target = bf_module(&rose(n)?, m)?;
    let st = target.structure();
    if st.invariant_factors.len() != 1 || st.invariant_factors[0].is_zero() {
        return Err(Error::Precondition(
            "rose module is not finite cyclic".into(),
        ));
    }
    let d = st.invariant_factors[0].clone();
    let a = st.action[(0, 0)].clone();
    let u = st.unit[0].clone();
    let multiplier = (BigInt::one() - BigInt::from(n) * &a).mod_floor(&d);
    let direct = (BigInt::one() - BigInt::from(n).pow(m as u32)).mod_floor(&d);
    let contradiction = multiplier.is_zero() && !u.mod_floor(&d).is_zero();
    let source = bf_splice_presentation(n, m)?;
    let hom = hom_exists(&source, &target)?;
    Ok(Main1Certificate {
        n,
        m,
        modulus: d,
        tau_action: a,
        target_unit: u,
        unit_multiplier: multiplier,
        one_minus_n_pow_m: direct,
        contradiction,
        hom_exists: hom.exists,
    })
}

/// Answer for the infinite cyclic grading, obtained from the `C_2` case.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InfiniteVerdict {
    /// No unit-preserving map at m = 2, hence none for C_∞.
    NonexistenceViaC2(HomVerdict),
    /// A map exists at m = 2; this says nothing about C_∞.
    Inconclusive(HomVerdict),
}

impl InfiniteVerdict {
    pub fn to_json(&self) -> Value {
        let (exists, label, reduced) = match self {
            InfiniteVerdict::NonexistenceViaC2(v) => {
                (Value::Bool(false), "nonexistence via C₂ reduction", v)
            }
            InfiniteVerdict::Inconclusive(v) => (Value::Null, "inconclusive for m = inf", v),
        };
        let mut map = serde_json::Map::new();
        map.insert("m".into(), Value::from("inf"));
        map.insert("exists".into(), exists);
        map.insert("verdict".into(), Value::from(label));
        map.insert(
            "reduced_m2".into(),
            serde_json::to_value(reduced).expect("verdict serializes"),
        );
        Value::Object(map)
    }
}

/// `source_m2`, `target_m2` are the m = 2 modules of the two graphs.
pub fn hom_exists_infinite(source_m2: &FPModule, target_m2: &FPModule) -> Result<InfiniteVerdict> {
    if source_m2.m() != 2 || target_m2.m() != 2 {
        return Err(Error::Precondition(
            "C_∞ queries are answered from the m = 2 modules".into(),
        ));
    }
    let v = hom_exists(source_m2, target_m2)?;
    Ok(if v.exists {
        InfiniteVerdict::Inconclusive(v)
    } else {
        InfiniteVerdict::NonexistenceViaC2(v)
    })
}

/// Absolute value helper for witness display.
pub fn witness_height(f: &IntMatrix) -> BigInt {
    f.max_abs().abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::spliced_rose;

    fn cyclic(m: usize, d: i64, tau: i64, unit: i64) -> FPModule {
        FPModule::new(
            m,
            IntMatrix::from_rows(&[vec![d]]),
            IntMatrix::from_rows(&[vec![tau]]),
            vec![BigInt::from(unit)],
        )
        .unwrap()
    }

    #[test]
    fn identity_is_found() {
        let m = bf_module(&spliced_rose(3).unwrap(), 2).unwrap();
        let v = hom_exists(&m, &m).unwrap();
        assert!(v.exists);
        assert!(check_hom(&IntMatrix::identity(3), &m, &m));
    }

    #[test]
    fn splice_to_rose_and_back_at_two_two() {
        let rose2 = bf_module(&rose(2).unwrap(), 2).unwrap();
        let splice2 = bf_module(&spliced_rose(2).unwrap(), 2).unwrap();
        assert!(!hom_exists(&splice2, &rose2).unwrap().exists);
        assert!(!hom_exists(&rose2, &splice2).unwrap().exists);
    }

    #[test]
    fn bruteforce_examples() {
        let z3 = cyclic(2, 3, 2, 1);
        let z7 = cyclic(2, 7, 6, 3);
        assert!(
            !hom_exists_bruteforce(&z3, &z7, DEFAULT_BRUTE_LIMIT)
                .unwrap()
                .exists
        );
        assert!(
            hom_exists_bruteforce(&z7, &z7, DEFAULT_BRUTE_LIMIT)
                .unwrap()
                .exists
        );
        assert!(
            hom_exists_bruteforce(&z3, &z3, DEFAULT_BRUTE_LIMIT)
                .unwrap()
                .exists
        );
        assert!(!hom_exists(&z3, &z7).unwrap().exists);
    }

    #[test]
    fn bruteforce_bound_and_infinite_target() {
        let big = cyclic(2, 1_000_003, 1, 1);
        assert!(matches!(
            hom_exists_bruteforce(&big, &big, 1000),
            Err(Error::BruteForceBound { .. })
        ));
        let free = FPModule::new(
            2,
            IntMatrix::zeros(1, 0),
            IntMatrix::identity(1),
            vec![BigInt::one()],
        )
        .unwrap();
        assert!(matches!(
            hom_exists_bruteforce(&free, &free, 1000),
            Err(Error::InfiniteTarget)
        ));
        assert!(hom_exists(&free, &free).unwrap().exists);
    }

    #[test]
    fn mismatched_m() {
        let a = cyclic(2, 3, 2, 1);
        let b = cyclic(3, 7, 4, 1);
        assert!(matches!(
            hom_exists(&a, &b),
            Err(Error::ModulusMismatch(2, 3))
        ));
    }

    #[test]
    fn trivial_target_accepts_everything() {
        let trivial = cyclic(2, 1, 1, 0);
        let z3 = cyclic(2, 3, 2, 1);
        assert!(hom_exists(&z3, &trivial).unwrap().exists);
        assert!(hom_exists_bruteforce(&z3, &trivial, 10).unwrap().exists);
        assert!(!hom_exists(&trivial, &z3).unwrap().exists);
        assert!(!hom_exists_bruteforce(&trivial, &z3, 10).unwrap().exists);
    }

    #[test]
    fn main1_certificates() {
        for (n, m, d) in [(2u64, 2usize, 3i64), (3, 2, 8), (2, 3, 7)] {
            let c = theorem_main1_certificate(n, m).unwrap();
            assert_eq!(c.modulus, BigInt::from(d));
            assert!(c.unit_multiplier.is_zero());
            assert!(c.one_minus_n_pow_m.is_zero());
            assert!(c.consistent());
        }
    }

    #[test]
    fn isomorphism_detection() {
        let z7 = cyclic(2, 7, 6, 3);
        assert!(is_isomorphism(&IntMatrix::identity(1), &z7, &z7));
        let z7b = cyclic(2, 7, 6, 6);
        // x ↦ 2x sends 3 to 6 and is bijective on ℤ/7.
        assert!(is_isomorphism(&IntMatrix::from_rows(&[vec![2]]), &z7, &z7b));
        let z21 = cyclic(2, 21, 20, 9);
        assert!(!is_isomorphism(
            &IntMatrix::from_rows(&[vec![3]]),
            &z7,
            &z21
        ));
        assert!(find_isomorphism(&z7, &z7b, 10).unwrap().is_some());
    }

    #[test]
    fn infinite_grading_verdicts() {
        let rose2 = bf_module(&rose(2).unwrap(), 2).unwrap();
        let splice2 = bf_module(&spliced_rose(2).unwrap(), 2).unwrap();
        assert!(matches!(
            hom_exists_infinite(&rose2, &splice2).unwrap(),
            InfiniteVerdict::NonexistenceViaC2(_)
        ));
        assert!(matches!(
            hom_exists_infinite(&rose2, &rose2).unwrap(),
            InfiniteVerdict::Inconclusive(_)
        ));
        let rose3 = bf_module(&rose(2).unwrap(), 3).unwrap();
        assert!(hom_exists_infinite(&rose3, &rose3).is_err());
    }
}
