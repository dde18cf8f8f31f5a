//! Executable checks of the diagonalization, polynomial certificates, ideal
//! case analysis and nonexistence sweeps for roses and their Cuntz splices.
//!
//! Every check returns a [`VerificationReport`] whose evidence is enough to
//! re-run the defining identity with [`replay`].

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::bfmod::{bf_module, bf_order};
use crate::error::{Error, Result};
use crate::graphs::{rose, spliced_rose};
use crate::homdec::{hom_exists, theorem_main1_certificate};
use crate::json;
use crate::order::Order;
use crate::polyring::{
    ideal_lattice, one_minus_nx, xi_poly, GRMatrix, GroupRingElem, IdealLattice, IntPoly,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    fn from_bool(ok: bool) -> Status {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub check: String,
    pub params: Map<String, Value>,
    pub status: Status,
    pub evidence: Value,
}

impl VerificationReport {
    fn new(check: &str, params: Value, ok: bool, evidence: Value) -> Self {
        let params = match params {
            Value::Object(map) => map,
            _ => Map::new(),
        };
        VerificationReport {
            check: check.to_string(),
            params,
            status: Status::from_bool(ok),
            evidence,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// One JSON object, no trailing newline.
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }

    pub fn from_json_line(line: &str) -> Result<Self> {
        Ok(serde_json::from_str(line)?)
    }

    fn param_u64(&self, key: &str) -> Result<u64> {
        self.params
            .get(key)
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Precondition(format!("report has no integer parameter {key:?}")))
    }
}

fn poly_json(p: &IntPoly) -> Value {
    json::vector(p.coeffs())
}

fn poly_from(v: &Value) -> Option<IntPoly> {
    json::to_vector(v).map(IntPoly::new)
}

fn elem_json(e: &GroupRingElem) -> Value {
    json::vector(e.coeffs())
}

fn gr_json(a: &GRMatrix) -> Value {
    Value::Array(
        (0..a.rows())
            .map(|i| Value::Array((0..a.cols()).map(|j| elem_json(a.get(i, j))).collect()))
            .collect(),
    )
}

fn gr_from(v: &Value, m: usize) -> Option<GRMatrix> {
    let rows = v.as_array()?;
    let polys: Vec<Vec<IntPoly>> = rows
        .iter()
        .map(|r| r.as_array().and_then(|r| r.iter().map(poly_from).collect()))
        .collect::<Option<_>>()?;
    GRMatrix::from_polys(m, &polys).ok()
}

fn lattice_json(l: &IdealLattice) -> Value {
    json!({
        "generators": l.generators().iter().map(poly_json).collect::<Vec<_>>(),
        "hermite_basis": l.basis().iter().map(|b| json::vector(b)).collect::<Vec<_>>(),
        "quotient_order": order_json(&l.quotient_order()),
    })
}

fn order_json(o: &Order) -> Value {
    match o {
        Order::Finite(n) => json::int(n),
        Order::Infinite => Value::from("infinite"),
    }
}

/// Horner evaluation of an integer polynomial in `n`, coefficients from the top degree down.
fn in_n(n: &BigInt, high_first: &[i64]) -> BigInt {
    high_first
        .iter()
        .fold(BigInt::zero(), |acc, &c| acc * n + c)
}

fn require_n(n: u64, min: u64) -> Result<()> {
    if n < min {
        return Err(Error::Precondition(format!("n = {n}, need n >= {min}")));
    }
    Ok(())
}

fn require_m(m: usize) -> Result<()> {
    if m < 2 {
        return Err(Error::BadModulus(m));
    }
    Ok(())
}

/// The row and column operations diagonalizing `I − τB` for the spliced rose.
pub fn diag_splice_matrices(n: u64, m: usize) -> Result<(GRMatrix, GRMatrix)> {
    let n = n as i64;
    let p = IntPoly::from_i64;
    let r = vec![
        vec![p(&[1]), p(&[-n]), p(&[0])],
        vec![p(&[0, 1]), p(&[1, -n]), p(&[-(n + 1), n - 1])],
        vec![p(&[0, 0, 1]), p(&[0, 1, -n]), p(&[1, -(n + 1), n - 1])],
    ];
    let c = vec![
        vec![
            p(&[1]),
            p(&[n, 1 - n]),
            p(&[n * (n + 1), 1 - 3 * n * n, 2 * n * n - 4 * n + 1, n - 1]),
        ],
        vec![p(&[0]), p(&[1]), p(&[n + 1, 1 - 2 * n, -1])],
        vec![p(&[0]), p(&[0]), p(&[1])],
    ];
    Ok((GRMatrix::from_polys(m, &r)?, GRMatrix::from_polys(m, &c)?))
}

fn diag_splice_check(n: u64, m: usize, r: &GRMatrix, c: &GRMatrix) -> Result<(bool, Value)> {
    let b = spliced_rose(n)?.adjacency_matrix().transpose();
    let tau = GroupRingElem::tau(m);
    let lhs = GRMatrix::identity(3, m)?.sub(&GRMatrix::from_int(&b, m)?.scale(&tau)?)?;
    let product = r.mul(&lhs)?.mul(c)?;
    let one = GroupRingElem::one(m);
    let xi = GroupRingElem::from_poly(&xi_poly(n), m);
    let expected = GRMatrix::diagonal(m, &[one.clone(), one.clone(), xi])?;
    let mismatches: Vec<Value> = (0..3)
        .flat_map(|i| (0..3).map(move |j| (i, j)))
        .filter(|&(i, j)| product.get(i, j) != expected.get(i, j))
        .map(|(i, j)| json!({"row": i, "col": j, "got": elem_json(product.get(i, j)), "want": elem_json(expected.get(i, j))}))
        .collect();
    let r_inv = r.is_invertible();
    let c_inv = c.is_invertible();
    let transported = r.apply(&[one.clone(), one.clone(), one])?;
    let nb = BigInt::from(n);
    let want_unit = vec![
        GroupRingElem::scalar(m, BigInt::one() - &nb),
        GroupRingElem::scalar(m, -nb.clone()),
        &GroupRingElem::one(m) - &GroupRingElem::tau(m).scale(&nb),
    ];
    let unit_ok = transported == want_unit;
    let ok = mismatches.is_empty() && r_inv && c_inv && unit_ok;
    let evidence = json!({
        "B": json::matrix(&b),
        "R": gr_json(r),
        "C": gr_json(c),
        "product": gr_json(&product),
        "R_invertible": r_inv,
        "C_invertible": c_inv,
        "mismatches": mismatches,
        "transported_unit": transported.iter().map(elem_json).collect::<Vec<_>>(),
        "expected_unit": want_unit.iter().map(elem_json).collect::<Vec<_>>(),
    });
    Ok((ok, evidence))
}

/// `R(I − τB)C = diag(1, 1, ξ_n(τ))` over ℤ[C_m], with `R`, `C` invertible and
/// `R·(1,1,1) = (1−n, −n, 1−nτ)`.
pub fn verify_diag_splice(n: u64, m: usize) -> Result<VerificationReport> {
    require_n(n, 1)?;
    require_m(m)?;
    let (r, c) = diag_splice_matrices(n, m)?;
    let (ok, evidence) = diag_splice_check(n, m, &r, &c)?;
    Ok(VerificationReport::new(
        "diag-splice",
        json!({"n": n, "m": m}),
        ok,
        evidence,
    ))
}

/// `(p_n, q_n)` with `p_n·ξ_n + q_n·(1 − nx)² = (n − 1)²`.
pub fn certificate_step1_polys(n: u64) -> (IntPoly, IntPoly) {
    let n = BigInt::from(n);
    let a = in_n(&n, &[-1, 2, -2, 3, 0, 0]);
    let b = in_n(&n, &[-2, 5, -7, 10, -4, 2, 0]);
    let c = in_n(&n, &[1, -2, 3, -4, 1, -2, 1]);
    let p1 = in_n(&n, &[1, -2, 2, -3, 0, 0, 0, 0]);
    let p0 = in_n(&n, &[-1, 2, -3, 4, 0, 0, 0]);
    (IntPoly::new(vec![p0, p1]), IntPoly::new(vec![c, b, a]))
}

/// Checks `p·ξ_n + q·(1 − nx)² − (n − 1)² = 0` for the given `p`, `q`.
pub fn check_certificate_step1(n: u64, p: &IntPoly, q: &IntPoly) -> VerificationReport {
    let target = IntPoly::constant(BigInt::from(n - 1).pow(2));
    let residual = p * &xi_poly(n) + q * &one_minus_nx(n).pow(2) - target;
    let evidence = json!({
        "p": poly_json(p),
        "q": poly_json(q),
        "xi": poly_json(&xi_poly(n)),
        "residual": poly_json(&residual),
    });
    VerificationReport::new(
        "certificate-step1",
        json!({"n": n}),
        residual.is_zero(),
        evidence,
    )
}

pub fn verify_certificate_step1(n: u64) -> Result<VerificationReport> {
    require_n(n, 2)?;
    let (p, q) = certificate_step1_polys(n);
    Ok(check_certificate_step1(n, &p, &q))
}

/// `(q̃_n, r_n)` with `n³·ξ_n = (1 − nx)²·q̃_n + r_n`.
pub fn certificate_step2_polys(n: u64) -> (IntPoly, IntPoly) {
    let nb = BigInt::from(n);
    let q = IntPoly::new(vec![in_n(&nb, &[2, -1, 2]), nb.clone()]);
    let r = IntPoly::new(vec![
        in_n(&nb, &[1, -2, 1, -2]),
        in_n(&nb, &[-1, 2, -2, 3, 0]),
    ]);
    (q, r)
}

pub fn check_certificate_step2(n: u64, q: &IntPoly, r: &IntPoly) -> VerificationReport {
    let nb = BigInt::from(n);
    let lhs = xi_poly(n).scale(&nb.pow(3));
    let residual = &lhs - &(&(&one_minus_nx(n).pow(2) * q) + r);
    let modulus = BigInt::from(n - 1).pow(2);
    let congruence = r - &IntPoly::linear(&nb + 1u32, -2);
    let ok = residual.is_zero() && congruence.all_divisible_by(&modulus);
    let evidence = json!({
        "q_tilde": poly_json(q),
        "r": poly_json(r),
        "residual": poly_json(&residual),
        "r_minus_target": poly_json(&congruence),
        "modulus": json::int(&modulus),
    });
    VerificationReport::new("certificate-step2", json!({"n": n}), ok, evidence)
}

pub fn verify_certificate_step2(n: u64) -> Result<VerificationReport> {
    require_n(n, 2)?;
    let (q, r) = certificate_step2_polys(n);
    Ok(check_certificate_step2(n, &q, &r))
}

/// `I_{m,n} + ⟨(1 − nx)²⟩` as a lattice in ℤ[x]/(x^m − 1).
pub fn j_lattice(n: u64, m: usize) -> Result<IdealLattice> {
    ideal_lattice(m, &[xi_poly(n), one_minus_nx(n).pow(2)])
}

fn k_generators(n: u64, m: usize) -> Vec<IntPoly> {
    let x1 = IntPoly::linear(1, -1);
    vec![
        x1.pow(2),
        x1.scale(&BigInt::from(m)),
        IntPoly::linear(3 * n as i64 - 1, -(3 * n as i64 - 1) + n as i64 - 1),
    ]
}

/// `I_{m,n} + ⟨(1 − nx)²⟩ = ⟨(x − 1)², m(x − 1), (3n − 1)(x − 1) + n − 1⟩`.
pub fn verify_genej_ideal(n: u64, m: usize) -> Result<VerificationReport> {
    require_n(n, 2)?;
    require_m(m)?;
    let j = j_lattice(n, m)?;
    let k = ideal_lattice(m, &k_generators(n, m))?;
    let ok = j.same_as(&k);
    let evidence = json!({"J": lattice_json(&j), "K": lattice_json(&k)});
    Ok(VerificationReport::new(
        "genej-ideal",
        json!({"n": n, "m": m}),
        ok,
        evidence,
    ))
}

pub fn is_prime(m: usize) -> bool {
    m >= 2
        && (2..)
            .take_while(|d| d * d <= m)
            .all(|d| !m.is_multiple_of(d))
}

/// `3n² − 2n − 1`
pub fn splice_order_bound(n: u64) -> BigInt {
    in_n(&BigInt::from(n), &[3, -2, -1])
}

/// The case split of the `L_n → L_{n⁻}` argument for prime `m`.
pub fn verify_main2_cases(n: u64, m: usize) -> Result<VerificationReport> {
    require_n(n, 2)?;
    if !is_prime(m) {
        return Err(Error::NotPrime(m));
    }
    let j = j_lattice(n, m)?;
    let bound = splice_order_bound(n);
    let actual = bf_order(&spliced_rose(n)?, m)?;
    let actual_big = actual.finite().cloned();
    let x1 = IntPoly::linear(1, -1);
    let n1 = n - 1;
    let mb = m as u64;

    let (case, expected_gens, order_ok, extra) = if n1.gcd(&mb) == 1 {
        let gens = vec![x1.clone(), IntPoly::constant(n1)];
        let want = BigInt::from(n1);
        let q = j.quotient_order();
        ("coprime", gens, q.finite() == Some(&want), json!({}))
    } else if m == 2 {
        let a = n1 / 2;
        let gens = vec![
            x1.pow(2),
            x1.scale(&BigInt::from(2)),
            IntPoly::constant(2 * a),
        ];
        let cap = BigInt::from(4 * a * a);
        let q = j.quotient_order();
        let ok = q.finite().is_some_and(|o| *o <= cap) && cap < bound;
        (
            "m=2",
            gens,
            ok,
            json!({"a": a, "four_a_squared": json::int(&cap)}),
        )
    } else {
        let a = n1 / mb;
        let b = (mb - 1) / 2;
        let am2 = BigInt::from(a) * BigInt::from(mb).pow(2);
        let shift = BigInt::from(1 + a * b * mb);
        let gens = vec![IntPoly::constant(am2.clone()), IntPoly::linear(1, -shift)];
        let q = j.quotient_order();
        let next_sq = BigInt::from(a * mb + 1).pow(2);
        let ok = q.finite() == Some(&am2) && am2 < next_sq && next_sq <= bound;
        (
            "odd-prime",
            gens,
            ok,
            json!({"a": a, "b": b, "am_squared": json::int(&am2)}),
        )
    };
    let expected = ideal_lattice(m, &expected_gens)?;
    let lattice_ok = j.same_as(&expected);
    let q = j.quotient_order();
    let strict = match (q.finite(), &actual_big) {
        (Some(q), Some(actual)) => *q < bound && bound <= *actual,
        _ => false,
    };
    let hom = hom_exists(&bf_module(&rose(n)?, m)?, &bf_module(&spliced_rose(n)?, m)?)?;
    let ok = lattice_ok && order_ok && strict && !hom.exists;
    let evidence = json!({
        "case": case,
        "J": lattice_json(&j),
        "expected": lattice_json(&expected),
        "case_data": extra,
        "splice_order_bound": json::int(&bound),
        "bf_order": order_json(&actual),
        "hom_rose_to_splice": hom.exists,
    });
    Ok(VerificationReport::new(
        "main2-cases",
        json!({"n": n, "m": m}),
        ok,
        evidence,
    ))
}

#[derive(Clone, Debug, Serialize)]
struct SweepCell {
    n: u64,
    m: usize,
    rose_to_splice: bool,
    splice_to_rose: bool,
    main1_certificate: bool,
}

fn sweep_cell(n: u64, m: usize) -> Result<SweepCell> {
    let r = bf_module(&rose(n)?, m)?;
    let s = bf_module(&spliced_rose(n)?, m)?;
    let forward = hom_exists(&r, &s)?.exists;
    let backward = hom_exists(&s, &r)?.exists;
    let cert = theorem_main1_certificate(n, m)?;
    Ok(SweepCell {
        n,
        m,
        rose_to_splice: forward,
        splice_to_rose: backward,
        main1_certificate: cert.consistent(),
    })
}

fn cross_cell(n: u64, k: u64, m: usize) -> Result<Value> {
    let r = bf_module(&rose(n)?, m)?;
    let s = bf_module(&spliced_rose(k)?, m)?;
    Ok(json!({
        "rose": n,
        "splice": k,
        "m": m,
        "rose_to_splice": hom_exists(&r, &s)?.exists,
        "splice_to_rose": hom_exists(&s, &r)?.exists,
    }))
}

/// Both nonexistence statements for every `2 ≤ n ≤ n_max`, `2 ≤ m ≤ m_max`.
///
/// Pairs of a rose and a splice with different `n` are recorded under
/// `exploratory` and do not affect the status.
pub fn verify_theorems_sweep(n_max: u64, m_max: usize) -> Result<VerificationReport> {
    require_n(n_max, 2)?;
    require_m(m_max)?;
    let grid: Vec<(u64, usize)> = (2..=n_max)
        .flat_map(|n| (2..=m_max).map(move |m| (n, m)))
        .collect();
    let cells = grid
        .par_iter()
        .map(|&(n, m)| sweep_cell(n, m))
        .collect::<Result<Vec<_>>>()?;
    let cross_grid: Vec<(u64, u64, usize)> = grid
        .iter()
        .flat_map(|&(n, m)| (2..=n_max).filter(move |&k| k != n).map(move |k| (n, k, m)))
        .collect();
    let cross = cross_grid
        .par_iter()
        .map(|&(n, k, m)| cross_cell(n, k, m))
        .collect::<Result<Vec<_>>>()?;
    let failures: Vec<&SweepCell> = cells
        .iter()
        .filter(|c| c.rose_to_splice || c.splice_to_rose || !c.main1_certificate)
        .collect();
    let ok = failures.is_empty();
    let evidence = json!({
        "cells": cells,
        "failures": failures,
        "exploratory": cross,
    });
    Ok(VerificationReport::new(
        "theorems-sweep",
        json!({"n_max": n_max, "m_max": m_max}),
        ok,
        evidence,
    ))
}

/// The `L_{n⁻} → L_n` obstruction alone, one report per cell.
pub fn verify_main1(n: u64, m: usize) -> Result<VerificationReport> {
    require_n(n, 2)?;
    require_m(m)?;
    let cert = theorem_main1_certificate(n, m)?;
    let ok = cert.consistent();
    Ok(VerificationReport::new(
        "main1",
        json!({"n": n, "m": m}),
        ok,
        serde_json::to_value(&cert)?,
    ))
}

/// Re-runs a report's defining identity. Certificate and diagonalization
/// reports are re-checked from the polynomials and matrices in their
/// evidence; the rest are recomputed from their parameters.
pub fn replay(report: &VerificationReport) -> Result<VerificationReport> {
    let bad = || Error::Precondition(format!("evidence of {} is malformed", report.check));
    let ev = &report.evidence;
    match report.check.as_str() {
        "certificate-step1" => {
            let n = report.param_u64("n")?;
            let p = ev.get("p").and_then(poly_from).ok_or_else(bad)?;
            let q = ev.get("q").and_then(poly_from).ok_or_else(bad)?;
            Ok(check_certificate_step1(n, &p, &q))
        }
        "certificate-step2" => {
            let n = report.param_u64("n")?;
            let q = ev.get("q_tilde").and_then(poly_from).ok_or_else(bad)?;
            let r = ev.get("r").and_then(poly_from).ok_or_else(bad)?;
            Ok(check_certificate_step2(n, &q, &r))
        }
        "diag-splice" => {
            let n = report.param_u64("n")?;
            let m = report.param_u64("m")? as usize;
            let r = ev.get("R").and_then(|v| gr_from(v, m)).ok_or_else(bad)?;
            let c = ev.get("C").and_then(|v| gr_from(v, m)).ok_or_else(bad)?;
            let (ok, evidence) = diag_splice_check(n, m, &r, &c)?;
            Ok(VerificationReport::new(
                "diag-splice",
                json!({"n": n, "m": m}),
                ok,
                evidence,
            ))
        }
        "genej-ideal" => {
            verify_genej_ideal(report.param_u64("n")?, report.param_u64("m")? as usize)
        }
        "main2-cases" => {
            verify_main2_cases(report.param_u64("n")?, report.param_u64("m")? as usize)
        }
        "main1" => verify_main1(report.param_u64("n")?, report.param_u64("m")? as usize),
        "theorems-sweep" => verify_theorems_sweep(
            report.param_u64("n_max")?,
            report.param_u64("m_max")? as usize,
        ),
        other => Err(Error::Precondition(format!("unknown check {other:?}"))),
    }
}
