//! Bowen-Franks ℤ[C_m]-modules `coker(I − τ·A^t)` of finite regular graphs.
//!
//! A module is carried as a finite presentation over ℤ: an ambient lattice
//! ℤ^r, a relation matrix whose columns span the submodule being quotiented
//! out, the matrix of τ on ℤ^r, and a distinguished element (the class of the
//! sum of all vertices). Two presentations are produced for a graph `E` with
//! `B = A_E^t`:
//!
//! * compact: `ℤ^{|E⁰|} / (I − B^m)` with τ acting as `B^{m−1}`;
//! * block: `ℤ[C_m]^{|E⁰|} / (I − τB)` expanded over the ℤ-basis `v·τ^i`.
//!
//! The two are isomorphic via `[v] ↦ [v]`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::graphs::DirectedGraph;
use crate::json;
use crate::order::Order;
use crate::polyring::{sturm_all_real, xi_poly, GRMatrix, GroupRingElem};
use crate::zmatrix::{snf, ColumnSpan, IntMatrix};

/// Finitely presented ℤ[C_m]-module `ℤ^r / span(relations)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FPModule {
    m: usize,
    relations: IntMatrix,
    action: IntMatrix,
    unit: Vec<BigInt>,
}

impl FPModule {
    pub fn new(
        m: usize,
        relations: IntMatrix,
        action: IntMatrix,
        unit: Vec<BigInt>,
    ) -> Result<Self> {
        if m < 2 {
            return Err(Error::BadModulus(m));
        }
        let r = relations.rows();
        if action.rows() != r || action.cols() != r {
            return Err(Error::Dimension(format!(
                "action is {}x{} on an ambient lattice of rank {r}",
                action.rows(),
                action.cols()
            )));
        }
        if unit.len() != r {
            return Err(Error::Dimension(format!(
                "unit has {} coordinates, rank is {r}",
                unit.len()
            )));
        }
        Ok(FPModule {
            m,
            relations,
            action,
            unit,
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn ambient_rank(&self) -> usize {
        self.relations.rows()
    }

    pub fn relations(&self) -> &IntMatrix {
        &self.relations
    }

    pub fn action(&self) -> &IntMatrix {
        &self.action
    }

    pub fn unit(&self) -> &[BigInt] {
        &self.unit
    }

    pub fn relation_span(&self) -> ColumnSpan {
        ColumnSpan::new(&self.relations)
    }

    /// τ preserves the relation lattice and τ^m acts as the identity on the quotient.
    pub fn is_well_formed(&self) -> bool {
        let span = self.relation_span();
        let moved = self.action.mul(&self.relations);
        let preserves = (0..moved.cols()).all(|j| span.contains(&moved.column(j)));
        let Ok(power) = self.action.pow(self.m as u64) else {
            return false;
        };
        let periodic = power.sub(&IntMatrix::identity(self.ambient_rank()));
        preserves && (0..periodic.cols()).all(|j| span.contains(&periodic.column(j)))
    }

    pub fn structure(&self) -> ModuleStructure {
        ModuleStructure::of(self)
    }

    pub fn order(&self) -> Order {
        Order::from_factors(&self.structure().invariant_factors)
    }

    /// Same module with ambient coordinates permuted by `perm` (new index `i`
    /// holds old coordinate `perm[i]`) and relation columns reversed.
    pub fn relabeled(&self, perm: &[usize]) -> Result<FPModule> {
        let r = self.ambient_rank();
        let mut sorted = perm.to_vec();
        sorted.sort_unstable();
        if sorted != (0..r).collect::<Vec<_>>() {
            return Err(Error::Dimension(
                "not a permutation of the ambient coordinates".into(),
            ));
        }
        let cols: Vec<usize> = (0..self.relations.cols()).rev().collect();
        let relations = self.relations.select_rows(perm).select_cols(&cols);
        let action = self.action.select_rows(perm).select_cols(perm);
        let unit = perm.iter().map(|&i| self.unit[i].clone()).collect();
        FPModule::new(self.m, relations, action, unit)
    }
}

/// The module rewritten as `⊕ ℤ/d_i` with `d_1 | d_2 | …` (`d_i = 0` is a
/// free summand, `d_i = 1` summands are dropped), together with the action of
/// τ and the distinguished element in that basis.
#[derive(Clone, Debug)]
pub struct ModuleStructure {
    pub invariant_factors: Vec<BigInt>,
    pub action: IntMatrix,
    pub unit: Vec<BigInt>,
    /// Ambient coordinates → structure coordinates (k × r).
    pub to_structure: IntMatrix,
    /// Structure generators written in ambient coordinates (r × k).
    pub from_structure: IntMatrix,
}

impl ModuleStructure {
    fn of(module: &FPModule) -> ModuleStructure {
        let d = snf(&module.relations);
        let factors = d.cokernel_factors();
        let keep: Vec<usize> = (0..factors.len())
            .filter(|&i| !factors[i].is_one())
            .collect();
        let invariant_factors: Vec<BigInt> = keep.iter().map(|&i| factors[i].clone()).collect();
        let to_structure = d.u.select_rows(&keep);
        let from_structure = d.u_inv.select_cols(&keep);
        let mut action = to_structure.mul(&module.action).mul(&from_structure);
        let mut unit = to_structure.mul_vec(&module.unit);
        for (a, di) in invariant_factors.iter().enumerate() {
            if di.is_zero() {
                continue;
            }
            for b in 0..keep.len() {
                action[(a, b)] = action[(a, b)].mod_floor(di);
            }
            unit[a] = unit[a].mod_floor(di);
        }
        ModuleStructure {
            invariant_factors,
            action,
            unit,
            to_structure,
            from_structure,
        }
    }

    pub fn order(&self) -> Order {
        Order::from_factors(&self.invariant_factors)
    }

    /// Number of cyclic summands.
    pub fn num_generators(&self) -> usize {
        self.invariant_factors.len()
    }

    /// `⊕ ℤ/d_i` as a presentation in its own right.
    pub fn to_module(&self, m: usize) -> Result<FPModule> {
        FPModule::new(
            m,
            IntMatrix::diagonal(&self.invariant_factors),
            self.action.clone(),
            self.unit.clone(),
        )
    }

    /// Reduces ambient coordinates to canonical structure coordinates.
    pub fn coordinates(&self, v: &[BigInt]) -> Vec<BigInt> {
        let mut c = self.to_structure.mul_vec(v);
        for (x, d) in c.iter_mut().zip(&self.invariant_factors) {
            if !d.is_zero() {
                *x = x.mod_floor(d);
            }
        }
        c
    }

    /// Same factors, action and unit (the change-of-basis data is ignored).
    pub fn same_shape(&self, other: &ModuleStructure) -> bool {
        self.invariant_factors == other.invariant_factors
            && self.action == other.action
            && self.unit == other.unit
    }
}

impl Serialize for ModuleStructure {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Wire {
            invariant_factors: Value,
            action: Value,
            unit: Value,
            order: Order,
        }
        Wire {
            invariant_factors: json::vector(&self.invariant_factors),
            action: json::matrix(&self.action),
            unit: json::vector(&self.unit),
            order: self.order(),
        }
        .serialize(s)
    }
}

/// Which presentation of the Bowen-Franks module to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Presentation {
    #[default]
    Compact,
    Block,
}

fn check_input(g: &DirectedGraph, m: usize) -> Result<()> {
    if m < 2 {
        return Err(Error::BadModulus(m));
    }
    g.require_regular()
}

/// Compact presentation: relations `I − B^m`, τ acting as `B^{m−1}`, `B = A^t`.
pub fn bf_module(g: &DirectedGraph, m: usize) -> Result<FPModule> {
    bf_module_with(g, m, Presentation::Compact)
}

pub fn bf_module_with(g: &DirectedGraph, m: usize, presentation: Presentation) -> Result<FPModule> {
    check_input(g, m)?;
    let b = g.adjacency_matrix().transpose();
    let r = g.len();
    match presentation {
        Presentation::Compact => {
            let relations = IntMatrix::identity(r).sub(&b.pow(m as u64)?);
            let action = b.pow(m as u64 - 1)?;
            FPModule::new(m, relations, action, vec![BigInt::one(); r])
        }
        Presentation::Block => {
            let tau = GroupRingElem::tau(m);
            let tau_b = GRMatrix::from_int(&b, m)?.scale(&tau)?;
            let relations = GRMatrix::identity(r, m)?.sub(&tau_b)?.expand();
            let action = GRMatrix::identity(r, m)?.scale(&tau)?.expand();
            let mut unit = vec![BigInt::zero(); r * m];
            for v in 0..r {
                unit[v * m] = BigInt::one();
            }
            FPModule::new(m, relations, action, unit)
        }
    }
}

/// The isomorphism from the block presentation to the compact one, `v·τ^i ↦ B^{(m−1)i} v`,
/// as an `|E⁰| × m|E⁰|` integer matrix.
pub fn block_to_compact_map(g: &DirectedGraph, m: usize) -> Result<IntMatrix> {
    check_input(g, m)?;
    let r = g.len();
    let step = g.adjacency_matrix().transpose().pow(m as u64 - 1)?;
    let mut map = IntMatrix::zeros(r, r * m);
    for v in 0..r {
        let mut image: Vec<BigInt> = (0..r)
            .map(|w| {
                if w == v {
                    BigInt::one()
                } else {
                    BigInt::zero()
                }
            })
            .collect();
        for i in 0..m {
            for (w, x) in image.iter().enumerate() {
                map[(w, v * m + i)] = x.clone();
            }
            image = step.mul_vec(&image);
        }
    }
    Ok(map)
}

pub fn bf_structure(module: &FPModule) -> ModuleStructure {
    module.structure()
}

/// `|χ_{A^m}(1)|`, or infinite when it vanishes.
pub fn bf_order(g: &DirectedGraph, m: usize) -> Result<Order> {
    check_input(g, m)?;
    let chi = g.adjacency_matrix().pow(m as u64)?.char_poly()?;
    let at_one = chi.eval(&BigInt::one()).abs();
    Ok(if at_one.is_zero() {
        Order::Infinite
    } else {
        Order::Finite(at_one)
    })
}

/// `ℤ[C_m] / ⟨gens⟩` with distinguished element `unit`.
pub fn quotient_module(m: usize, gens: &[GroupRingElem], unit: &GroupRingElem) -> Result<FPModule> {
    if m < 2 {
        return Err(Error::BadModulus(m));
    }
    if let Some(bad) = gens
        .iter()
        .chain(std::iter::once(unit))
        .find(|e| e.m() != m)
    {
        return Err(Error::ModulusMismatch(m, bad.m()));
    }
    let relations = gens
        .iter()
        .map(GroupRingElem::regular_representation)
        .fold(IntMatrix::zeros(m, 0), |acc, rep| acc.hcat(&rep));
    FPModule::new(
        m,
        relations,
        GroupRingElem::tau(m).regular_representation(),
        unit.coeffs().to_vec(),
    )
}

/// `ℤ[C_m] / ⟨ξ_n(τ)⟩` with distinguished element `1 − nτ`, the cyclic
/// presentation of the spliced rose's module.
pub fn bf_splice_presentation(n: u64, m: usize) -> Result<FPModule> {
    if m < 2 {
        return Err(Error::BadModulus(m));
    }
    let xi = GroupRingElem::from_poly(&xi_poly(n), m);
    let unit = &GroupRingElem::one(m) - &GroupRingElem::tau(m).scale(&BigInt::from(n));
    quotient_module(m, &[xi], &unit)
}

/// Orders `|𝔅𝔉_m(g)|` for `m = 2..=m_max` via the characteristic polynomial.
pub fn bf_orders(g: &DirectedGraph, m_max: usize) -> Result<Vec<Order>> {
    (2..=m_max).map(|m| bf_order(g, m)).collect()
}

/// For a graph whose characteristic polynomial is real-rooted and whose
/// m = 2 module is finite and nontrivial, checks that
/// `|𝔅𝔉_m| > |𝔅𝔉_2| > 1` and that the orders strictly increase over
/// `2..=m_max`. A failed precondition is an `Err`; `Ok(false)` means the
/// conclusion itself failed.
pub fn verify_monotone_orders(g: &DirectedGraph, m_max: usize) -> Result<bool> {
    g.require_regular()?;
    let chi = g.adjacency_matrix().char_poly()?;
    if !sturm_all_real(&chi) {
        return Err(Error::Precondition(format!(
            "characteristic polynomial {chi} has non-real roots"
        )));
    }
    let base = match bf_order(g, 2)? {
        Order::Finite(n) if n > BigInt::one() => n,
        other => {
            return Err(Error::Precondition(format!(
                "order of the m = 2 module is {other}, need finite and > 1"
            )));
        }
    };
    let mut prev = base.clone();
    for m in 3..=m_max {
        let Order::Finite(cur) = bf_order(g, m)? else {
            return Ok(false);
        };
        if cur <= prev || cur <= base {
            return Ok(false);
        }
        prev = cur;
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{rose, spliced_rose};

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn rose_two_at_m_two() {
        let s = bf_module(&rose(2).unwrap(), 2).unwrap().structure();
        assert_eq!(s.invariant_factors, ints(&[3]));
        assert_eq!(s.action, IntMatrix::from_rows(&[vec![2]]));
        assert_eq!(s.unit, ints(&[1]));
    }

    #[test]
    fn rose_three_at_m_two() {
        let s = bf_module(&rose(3).unwrap(), 2).unwrap().structure();
        assert_eq!(s.invariant_factors, ints(&[8]));
        assert_eq!(s.action, IntMatrix::from_rows(&[vec![3]]));
    }

    #[test]
    fn spliced_rose_two_at_m_two() {
        let s = bf_module(&spliced_rose(2).unwrap(), 2).unwrap().structure();
        assert_eq!(s.invariant_factors, ints(&[7]));
        assert_eq!(s.action, IntMatrix::from_rows(&[vec![6]]));
        let cyclic = bf_splice_presentation(2, 2).unwrap().structure();
        assert_eq!(cyclic.invariant_factors, ints(&[7]));
        assert_eq!(cyclic.action, IntMatrix::from_rows(&[vec![6]]));
        // The class of 1 − 2τ: with τ = 6, 1 − 12 ≡ 3 (mod 7), up to the choice of generator.
        let generator_image = &cyclic.to_structure.mul_vec(&ints(&[1, 0]))[0];
        assert_eq!(
            (generator_image * BigInt::from(3)).mod_floor(&BigInt::from(7)),
            cyclic.unit[0]
        );
    }

    #[test]
    fn spliced_rose_three_at_m_two() {
        let s = bf_module(&spliced_rose(3).unwrap(), 2).unwrap().structure();
        assert_eq!(s.invariant_factors, ints(&[2, 10]));
        let c = bf_splice_presentation(3, 2).unwrap().structure();
        assert_eq!(c.invariant_factors, ints(&[2, 10]));
    }

    #[test]
    fn splice_presentation_at_two_two() {
        let p = bf_splice_presentation(2, 2).unwrap();
        assert_eq!(
            p.relations(),
            &IntMatrix::from_rows(&[vec![4, -3], vec![-3, 4]])
        );
        assert_eq!(p.unit(), ints(&[1, -2]).as_slice());
        assert_eq!(p.order(), Order::Finite(BigInt::from(7)));
    }

    #[test]
    fn free_module_of_rank_one() {
        let m = FPModule::new(
            2,
            IntMatrix::zeros(1, 0),
            IntMatrix::identity(1),
            ints(&[1]),
        )
        .unwrap();
        let s = m.structure();
        assert_eq!(s.invariant_factors, ints(&[0]));
        assert_eq!(s.order(), Order::Infinite);
    }

    #[test]
    fn orders() {
        assert_eq!(
            bf_order(&rose(2).unwrap(), 3).unwrap(),
            Order::Finite(BigInt::from(7))
        );
        assert_eq!(
            bf_order(&spliced_rose(2).unwrap(), 3).unwrap(),
            Order::Finite(BigInt::from(43))
        );
        assert_eq!(bf_order(&rose(1).unwrap(), 2).unwrap(), Order::Infinite);
    }

    #[test]
    fn non_regular_graph_rejected() {
        let g =
            DirectedGraph::new(vec!["a".into(), "b".into()], vec![vec![1, 1], vec![0, 0]]).unwrap();
        assert!(matches!(bf_module(&g, 2), Err(Error::NotRegular(_))));
        assert!(matches!(bf_order(&g, 2), Err(Error::NotRegular(_))));
        assert!(matches!(
            bf_module(&rose(2).unwrap(), 1),
            Err(Error::BadModulus(1))
        ));
    }

    #[test]
    fn monotone_orders() {
        for n in 2..=10 {
            assert!(verify_monotone_orders(&spliced_rose(n).unwrap(), 8).unwrap());
        }
        assert!(verify_monotone_orders(&rose(2).unwrap(), 8).unwrap());
        assert!(matches!(
            verify_monotone_orders(&rose(1).unwrap(), 8),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn constructed_modules_are_well_formed() {
        for n in 1..5 {
            for m in 2..5 {
                for g in [rose(n).unwrap(), spliced_rose(n).unwrap()] {
                    assert!(bf_module(&g, m).unwrap().is_well_formed());
                    assert!(bf_module_with(&g, m, Presentation::Block)
                        .unwrap()
                        .is_well_formed());
                }
                assert!(bf_splice_presentation(n, m).unwrap().is_well_formed());
            }
        }
    }

    #[test]
    fn structure_is_idempotent() {
        let s = bf_module(&spliced_rose(3).unwrap(), 3).unwrap().structure();
        let again = s.to_module(3).unwrap().structure();
        assert!(s.same_shape(&again));
    }
}
