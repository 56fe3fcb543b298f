//! Finite-order differential operators with expression coefficients.
//!
//! A [`DiffOp`] is a sum of terms `coeff(t, x, ...) * d^k/dt^k * d^|a|/dx^a`.
//! Application to an [`Expr`] is total; composition uses the Leibniz rule and
//! is associative.

use crate::expr::Expr;
use std::collections::BTreeMap;
use std::fmt;

/// Derivative multi-index over `d/dt` and `d/dx_i`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct DerivIdx {
    pub dt: u32,
    /// spatial index -> order, no zero entries
    pub dx: BTreeMap<u8, u32>,
}

impl DerivIdx {
    pub fn t(order: u32) -> Self {
        DerivIdx {
            dt: order,
            dx: BTreeMap::new(),
        }
    }

    pub fn x(i: u8) -> Self {
        let mut dx = BTreeMap::new();
        dx.insert(i, 1);
        DerivIdx { dt: 0, dx }
    }

    pub fn total_order(&self) -> u32 {
        self.dt + self.dx.values().sum::<u32>()
    }

    fn merge(&self, other: &DerivIdx) -> DerivIdx {
        let mut dx = self.dx.clone();
        for (i, o) in &other.dx {
            *dx.entry(*i).or_insert(0) += o;
        }
        DerivIdx {
            dt: self.dt + other.dt,
            dx,
        }
    }

    /// All componentwise sub-indices, paired with the complement and the
    /// multinomial factor `prod C(n_j, k_j)`.
    fn splittings(&self) -> Vec<(DerivIdx, DerivIdx, u64)> {
        let mut out = vec![(DerivIdx::default(), DerivIdx::default(), 1u64)];
        let components: Vec<(Option<u8>, u32)> = std::iter::once((None, self.dt))
            .chain(self.dx.iter().map(|(i, o)| (Some(*i), *o)))
            .collect();
        for (which, total) in components {
            if total == 0 {
                continue;
            }
            let mut next = Vec::new();
            for (lo, hi, mult) in &out {
                for k in 0..=total {
                    let mut lo2 = lo.clone();
                    let mut hi2 = hi.clone();
                    match which {
                        None => {
                            lo2.dt += k;
                            hi2.dt += total - k;
                        }
                        Some(i) => {
                            if k > 0 {
                                *lo2.dx.entry(i).or_insert(0) += k;
                            }
                            if total - k > 0 {
                                *hi2.dx.entry(i).or_insert(0) += total - k;
                            }
                        }
                    }
                    next.push((lo2, hi2, mult * binomial(total, k)));
                }
            }
            out = next;
        }
        out
    }
}

fn binomial(n: u32, k: u32) -> u64 {
    let k = k.min(n - k);
    let mut acc = 1u64;
    for j in 0..k {
        acc = acc * (n - j) as u64 / (j + 1) as u64;
    }
    acc
}

/// Linear differential operator in canonical form: like multi-indices merged,
/// zero coefficients dropped.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct DiffOp {
    terms: BTreeMap<DerivIdx, Expr>,
}

impl DiffOp {
    pub fn zero() -> DiffOp {
        DiffOp::default()
    }

    pub fn from_term(coeff: Expr, idx: DerivIdx) -> DiffOp {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(idx, coeff);
        }
        DiffOp { terms }
    }

    /// `coeff * d/dx_i`
    pub fn first_order_x(coeff: Expr, i: u8) -> DiffOp {
        DiffOp::from_term(coeff, DerivIdx::x(i))
    }

    /// `coeff * d/dt`
    pub fn first_order_t(coeff: Expr) -> DiffOp {
        DiffOp::from_term(coeff, DerivIdx::t(1))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&DerivIdx, &Expr)> {
        self.terms.iter()
    }

    pub fn order(&self) -> u32 {
        self.terms
            .keys()
            .map(DerivIdx::total_order)
            .max()
            .unwrap_or(0)
    }

    pub fn add(&self, rhs: &DiffOp) -> DiffOp {
        let mut terms = self.terms.clone();
        for (idx, c) in &rhs.terms {
            let entry = terms.entry(idx.clone()).or_insert_with(Expr::zero);
            *entry = entry.add_ref(c);
        }
        terms.retain(|_, c| !c.is_zero());
        DiffOp { terms }
    }

    pub fn neg(&self) -> DiffOp {
        DiffOp {
            terms: self
                .terms
                .iter()
                .map(|(i, c)| (i.clone(), c.neg_ref()))
                .collect(),
        }
    }

    pub fn sub(&self, rhs: &DiffOp) -> DiffOp {
        self.add(&rhs.neg())
    }

    pub fn scale(&self, factor: &Expr) -> DiffOp {
        if factor.is_zero() {
            return DiffOp::zero();
        }
        DiffOp {
            terms: self
                .terms
                .iter()
                .map(|(i, c)| (i.clone(), c.mul_ref(factor)))
                .collect(),
        }
    }

    /// Applies the operator to an expression.
    pub fn apply(&self, e: &Expr) -> Expr {
        let mut out = Expr::zero();
        for (idx, coeff) in &self.terms {
            out = out.add_ref(&coeff.mul_ref(&apply_idx(idx, e)));
        }
        out
    }

    /// Operator composition `self . rhs` (apply `rhs` first).
    pub fn compose(&self, rhs: &DiffOp) -> DiffOp {
        let mut terms: BTreeMap<DerivIdx, Expr> = BTreeMap::new();
        for (i1, c1) in &self.terms {
            for (i2, c2) in &rhs.terms {
                // Leibniz: d^{i1}(c2 . d^{i2} f) over all splittings of i1
                for (gamma, rest, mult) in i1.splittings() {
                    let dc2 = apply_idx(&gamma, c2);
                    if dc2.is_zero() {
                        continue;
                    }
                    let coeff = c1
                        .mul_ref(&dc2)
                        .scale(&crate::scalar::GaussianRational::from_int(mult as i64));
                    let idx = rest.merge(i2);
                    let entry = terms.entry(idx).or_insert_with(Expr::zero);
                    *entry = entry.add_ref(&coeff);
                }
            }
        }
        terms.retain(|_, c| !c.is_zero());
        DiffOp { terms }
    }

    pub fn commutator(&self, rhs: &DiffOp) -> DiffOp {
        self.compose(rhs).sub(&rhs.compose(self))
    }
}

fn apply_idx(idx: &DerivIdx, e: &Expr) -> Expr {
    let mut cur = e.clone();
    for _ in 0..idx.dt {
        cur = cur.diff_t();
    }
    for (i, order) in &idx.dx {
        for _ in 0..*order {
            cur = cur.diff_x_unchecked(*i);
        }
    }
    cur
}

impl fmt::Display for DiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(idx, c)| {
                let mut s = format!("({})", c);
                for _ in 0..idx.dt {
                    s.push_str("*d_t");
                }
                for (i, o) in &idx.dx {
                    for _ in 0..*o {
                        s.push_str(&format!("*d_{i}"));
                    }
                }
                s
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}
