//! The deformation machinery: twist factors as truncating exponential
//! series, star products of coordinate functions, the fifteen deformed
//! space-time tables, twisted coproducts and antipodes, and the cocycle and
//! normalization checks.
//!
//! Star product: `f * g = omega . (F^-1 |> f (x) g)` with `F = exp(i r)`,
//! each tensor slot acting through the differential-operator realization and
//! `omega(a (x) b) = a . b`. The series is summed only up to an order at
//! which a structural truncation certificate applies; without a certificate
//! the computation fails loudly rather than silently cutting the series.
//!
//! Truncation certificates (each proves every order above the bound is zero):
//!  * slot annihilation: every product of `n` carriers annihilates one of
//!    the arguments (checked by direct enumeration of carrier multisets,
//!    which is enough because the carriers commute);
//!  * spatial degree: every r-matrix term applies at least one operator that
//!    strictly lowers the spatial degree and no carrier can raise it, so
//!    order `n` terms vanish once `n` exceeds the joint spatial degree;
//!  * time degree: the same argument in the time coordinate for carriers
//!    built from `d_t` with constant coefficients, valid on arguments free
//!    of the transcendental atoms.

use crate::algebra::{Generator, LieAlgebra, Signature};
use crate::diffop::DiffOp;
use crate::expr::{Expr, ExprError, Param};
use crate::realization::{Realization, RealizationError};
use crate::rmatrix::{rmatrix_catalog, RMatrix, RMatrixError, TwistParams};
use crate::scalar::GaussianRational;
use crate::uea::{PbwMonomial, Tensor2, Tensor3, UeaElement};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum TwistError {
    #[error(transparent)]
    RMatrix(#[from] RMatrixError),
    #[error(transparent)]
    Realization(#[from] RealizationError),
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error("algebra construction failed: {0}")]
    Algebra(#[from] crate::algebra::AlgebraError),
    #[error(
        "star-product series did not visibly terminate within max_order {max_order}; \
         raise the order bound or request an explicit truncation"
    )]
    TruncationNotDetected { max_order: u32 },
    #[error("series inversion needs unit order-0 part, got {0}")]
    NonUnitLeadingTerm(String),
}

/// Default bound on the twist-series order.
pub const DEFAULT_MAX_ORDER: u32 = 8;

/// Everything needed to star-multiply: the algebra, its realization, the
/// r-matrix (with mutually commuting carriers) and the order bound.
#[derive(Clone, Debug)]
pub struct TwistContext {
    /// Catalog item id when built from the catalog.
    pub twist: Option<u8>,
    pub signature: Signature,
    pub dim: u8,
    pub algebra: LieAlgebra,
    pub realization: Realization,
    pub r: RMatrix,
    pub max_order: u32,
    /// Deformation parameter symbols occurring in `r`.
    pub deform_params: BTreeSet<Param>,
}

impl TwistContext {
    /// Builds the context for catalog item `twist`.
    pub fn catalog(
        twist: u8,
        signature: Signature,
        dim: u8,
        params: &TwistParams,
        max_order: u32,
    ) -> Result<TwistContext, TwistError> {
        let r = rmatrix_catalog(twist, dim, params)?;
        let mut ctx = TwistContext::from_rmatrix(r, signature, dim, max_order)?;
        ctx.twist = Some(twist);
        Ok(ctx)
    }

    /// Builds a context from an arbitrary r-matrix; rejects non-Abelian
    /// carrier sets.
    pub fn from_rmatrix(
        r: RMatrix,
        signature: Signature,
        dim: u8,
        max_order: u32,
    ) -> Result<TwistContext, TwistError> {
        let algebra = LieAlgebra::build(signature, dim)?;
        let realization = Realization::build(signature, dim)?;
        r.check_abelian(&algebra)?;
        let mut deform_params = BTreeSet::new();
        for (c, _, _) in r.terms() {
            deform_params.extend(c.params());
        }
        Ok(TwistContext {
            twist: None,
            signature,
            dim,
            algebra,
            realization,
            r,
            max_order,
            deform_params,
        })
    }

    fn realized_terms(&self) -> Result<Vec<(Expr, DiffOp, DiffOp)>, TwistError> {
        let mut out = Vec::new();
        for (c, a, b) in self.r.terms() {
            let op_a = self
                .realization
                .get(*a)
                .cloned()
                .ok_or_else(|| RealizationError::BadGenerator(a.to_string(), self.dim))?;
            let op_b = self
                .realization
                .get(*b)
                .cloned()
                .ok_or_else(|| RealizationError::BadGenerator(b.to_string(), self.dim))?;
            out.push((c.clone(), op_a, op_b));
        }
        Ok(out)
    }

    fn carrier_ops(&self) -> Vec<DiffOp> {
        self.r
            .carriers()
            .into_iter()
            .filter_map(|g| self.realization.get(g).cloned())
            .collect()
    }

    /// The r-matrix as a rank-2 tensor in U(g) (x) U(g).
    pub fn r_tensor(&self) -> Tensor2 {
        let mut out = Tensor2::zero();
        for (c, a, b) in self.r.terms() {
            out.add_assign(&Tensor2::term(
                [PbwMonomial::generator(*a), PbwMonomial::generator(*b)],
                c.clone(),
            ));
        }
        out
    }
}

// ---- truncation certificates ----

fn strict_x_reducer(op: &DiffOp) -> bool {
    !op.is_zero()
        && op
            .terms()
            .all(|(idx, c)| idx.dx.values().sum::<u32>() >= 1 && idx.dt == 0 && c.x_degree() == 0)
}

fn never_increases_x(op: &DiffOp) -> bool {
    op.terms()
        .all(|(idx, c)| c.x_degree() <= idx.dx.values().sum::<u32>())
}

fn strict_t_reducer(op: &DiffOp) -> bool {
    !op.is_zero()
        && op
            .terms()
            .all(|(idx, c)| idx.dt >= 1 && c.t_degree() == 0 && !c.has_transcendental())
}

fn tame_in_t(op: &DiffOp) -> bool {
    op.terms()
        .all(|(_, c)| c.t_degree() == 0 && !c.has_transcendental())
}

/// Smallest `n <= cap` such that every product of `n` carriers annihilates
/// `h`, or `None`. Sound for commuting carriers: any longer word factors
/// through a length-`n` word applied first.
fn slot_annihilation_bound(ops: &[DiffOp], h: &Expr, cap: u32) -> Option<u32> {
    if h.is_zero() {
        return Some(0);
    }
    if ops.is_empty() {
        return Some(1);
    }
    let mut level: Vec<(usize, Expr)> = vec![(0, h.clone())];
    for n in 1..=cap {
        let mut next = Vec::new();
        for (start, val) in &level {
            for (j, op) in ops.iter().enumerate().skip(*start) {
                let v = op.apply(val);
                if !v.is_zero() {
                    next.push((j, v));
                }
            }
        }
        if next.is_empty() {
            return Some(n);
        }
        level = next;
    }
    None
}

/// Highest series order that can contribute to `f * g`, or `None` when no
/// certificate applies within `max_order`.
fn truncation_bound(
    terms: &[(Expr, DiffOp, DiffOp)],
    carriers: &[DiffOp],
    f: &Expr,
    g: &Expr,
    max_order: u32,
) -> Option<u32> {
    let mut candidates: Vec<u32> = Vec::new();
    if let Some(n) = slot_annihilation_bound(carriers, f, max_order + 1) {
        candidates.push(n.saturating_sub(1));
    }
    if let Some(n) = slot_annihilation_bound(carriers, g, max_order + 1) {
        candidates.push(n.saturating_sub(1));
    }
    let x_cert = !terms.is_empty()
        && terms
            .iter()
            .all(|(_, a, b)| strict_x_reducer(a) || strict_x_reducer(b))
        && carriers.iter().all(never_increases_x);
    if x_cert {
        candidates.push(f.x_degree() + g.x_degree());
    }
    let t_cert = !terms.is_empty()
        && terms
            .iter()
            .all(|(_, a, b)| strict_t_reducer(a) || strict_t_reducer(b))
        && carriers.iter().all(tame_in_t)
        && !f.has_transcendental()
        && !g.has_transcendental();
    if t_cert {
        candidates.push(f.t_degree() + g.t_degree());
    }
    let bound = candidates.into_iter().min()?;
    (bound <= max_order).then_some(bound)
}

// ---- star product ----

/// `f * g` through the twist: expands `exp(-i r)` order by order, acting on
/// the two tensor slots through the realization and multiplying pointwise.
pub fn star_product(f: &Expr, g: &Expr, ctx: &TwistContext) -> Result<Expr, TwistError> {
    let terms = ctx.realized_terms()?;
    let carriers = ctx.carrier_ops();
    let bound = truncation_bound(&terms, &carriers, f, g, ctx.max_order).ok_or(
        TwistError::TruncationNotDetected {
            max_order: ctx.max_order,
        },
    )?;

    let mut total = f.mul_ref(g);
    let mut states: Vec<(Expr, Expr, Expr)> = vec![(Expr::one(), f.clone(), g.clone())];
    let mut factor = GaussianRational::one(); // (-i)^n / n!
    for n in 1..=bound {
        factor = &(&factor * &GaussianRational::imag_ratio(-1, 1))
            * &GaussianRational::from_ratio(1, n as i64);
        let mut next = Vec::new();
        for (coeff, fpart, gpart) in &states {
            for (c, op_a, op_b) in &terms {
                let fa = op_a.apply(fpart);
                if fa.is_zero() {
                    continue;
                }
                let gb = op_b.apply(gpart);
                if gb.is_zero() {
                    continue;
                }
                next.push((coeff.mul_ref(c), fa, gb));
            }
        }
        states = next;
        if states.is_empty() {
            break;
        }
        let mut order_sum = Expr::zero();
        for (coeff, fpart, gpart) in &states {
            order_sum = order_sum.add_ref(&coeff.mul_ref(&fpart.mul_ref(gpart)));
        }
        total = total.add_ref(&order_sum.scale(&factor));
    }
    Ok(total)
}

/// `[f, g]_* = f * g - g * f`.
pub fn star_commutator(f: &Expr, g: &Expr, ctx: &TwistContext) -> Result<Expr, TwistError> {
    Ok(star_product(f, g, ctx)?.sub_ref(&star_product(g, f, ctx)?))
}

// ---- space-time tables ----

/// The deformed commutators `[t, x_a]_*` and `[x_a, x_b]_*` (a < b) for one
/// twist, signature and dimension. Antisymmetry fixes the rest; `[t, t]_*`
/// vanishes identically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommutatorTable {
    pub twist: Option<u8>,
    pub signature: Signature,
    pub dim: u8,
    pub t_x: BTreeMap<u8, Expr>,
    pub x_x: BTreeMap<(u8, u8), Expr>,
}

impl CommutatorTable {
    pub fn is_commutative(&self) -> bool {
        self.t_x.values().all(Expr::is_zero) && self.x_x.values().all(Expr::is_zero)
    }

    /// Catalog invariant: entries stay polynomial of spatial degree <= 1.
    pub fn max_spatial_degree(&self) -> u32 {
        self.t_x
            .values()
            .chain(self.x_x.values())
            .map(Expr::x_degree)
            .max()
            .unwrap_or(0)
    }

    pub fn entries(&self) -> impl Iterator<Item = (String, String, &Expr)> {
        let tx = self
            .t_x
            .iter()
            .map(|(a, e)| ("t".to_string(), format!("x{a}"), e));
        let xx = self
            .x_x
            .iter()
            .map(|((a, b), e)| (format!("x{a}"), format!("x{b}"), e));
        tx.chain(xx)
    }
}

/// Computes every table entry with `star_commutator`.
pub fn spacetime_table(ctx: &TwistContext) -> Result<CommutatorTable, TwistError> {
    let t = Expr::t();
    let mut t_x = BTreeMap::new();
    let mut x_x = BTreeMap::new();
    for a in 1..=ctx.dim {
        t_x.insert(a, star_commutator(&t, &Expr::x(a), ctx)?);
        for b in (a + 1)..=ctx.dim {
            x_x.insert((a, b), star_commutator(&Expr::x(a), &Expr::x(b), ctx)?);
        }
    }
    Ok(CommutatorTable {
        twist: ctx.twist,
        signature: ctx.signature,
        dim: ctx.dim,
        t_x,
        x_x,
    })
}

/// Convenience wrapper: catalog table for `(twist, signature, dim)`.
pub fn catalog_table(
    twist: u8,
    signature: Signature,
    dim: u8,
    params: &TwistParams,
    max_order: u32,
) -> Result<CommutatorTable, TwistError> {
    let ctx = TwistContext::catalog(twist, signature, dim, params, max_order)?;
    spacetime_table(&ctx)
}

// ---- classification ----

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum NoncommKind {
    Commutative,
    ConstantTheta,
    LinearTheta,
    TimeQuantum,
}

/// Noncommutativity class of one table: the structural kind, the scalar
/// time profile `f(t/tau)` (normalized so that array-parameter twists match
/// the index-contracted prefactor), and the maximal total coordinate degree
/// of the entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NoncommClass {
    pub kind: NoncommKind,
    pub time_profile: Expr,
    pub coordinate_degree: u32,
}

fn is_array_twist(twist: u8) -> bool {
    matches!(twist, 1 | 2 | 3 | 4 | 6 | 7 | 8 | 10 | 11 | 12)
}

pub fn classify(table: &CommutatorTable) -> NoncommClass {
    let time_quantum = table.t_x.values().any(|e| !e.is_zero());
    let spatial_degree = table.x_x.values().map(Expr::x_degree).max().unwrap_or(0);
    let kind = if table.is_commutative() {
        NoncommKind::Commutative
    } else if time_quantum {
        NoncommKind::TimeQuantum
    } else if spatial_degree == 0 {
        NoncommKind::ConstantTheta
    } else {
        NoncommKind::LinearTheta
    };
    let coordinate_degree = table
        .t_x
        .values()
        .chain(table.x_x.values())
        .map(Expr::coordinate_degree)
        .max()
        .unwrap_or(0);
    let time_profile = extract_time_profile(table);
    NoncommClass {
        kind,
        time_profile,
        coordinate_degree,
    }
}

/// Strips the imaginary unit, the deformation parameters and the spatial
/// coordinates from the first nonzero entry; array-parameter twists are
/// halved to undo the antisymmetric index contraction.
fn extract_time_profile(table: &CommutatorTable) -> Expr {
    let entry = table
        .x_x
        .values()
        .chain(table.t_x.values())
        .find(|e| !e.is_zero());
    let Some(entry) = entry else {
        return Expr::zero();
    };
    let mut acc: BTreeMap<(crate::expr::PowerMap, i32), GaussianRational> = BTreeMap::new();
    for m in entry.terms() {
        let powers: crate::expr::PowerMap = m
            .powers
            .iter()
            .filter(|(a, _)| !matches!(a, crate::expr::Atom::X(_) | crate::expr::Atom::Param(_)))
            .map(|(a, p)| (a.clone(), *p))
            .collect();
        let e = acc
            .entry((powers, m.tau_power))
            .or_insert_with(GaussianRational::zero);
        *e = &*e + &m.coeff;
    }
    let mut profile = Expr::from_accumulator(acc).scale(&GaussianRational::imag_ratio(-1, 1)); // divide by i
    if let Some(twist) = table.twist {
        if is_array_twist(twist) {
            profile = profile.scale(&GaussianRational::from_ratio(1, 2));
        }
    }
    profile
}

// ---- twisted coproduct and antipode ----

/// A series result: `truncated_at == None` means the series terminated and
/// the value is exact; `Some(n)` means the tail beyond order `n` was not
/// proved zero and has been dropped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesResult<T> {
    pub value: T,
    pub truncated_at: Option<u32>,
}

/// Graded components of `Delta_F(g) = sum_n ad_{i r}^n (Delta_0 g) / n!`.
/// Stops early (exactness) when a component vanishes, since the adjoint
/// chain then vanishes forever.
pub fn twisted_coproduct_components(
    g: Generator,
    ctx: &TwistContext,
    series_order: u32,
) -> (Vec<Tensor2>, bool) {
    let alg = &ctx.algebra;
    let ir = ctx.r_tensor().scale(&Expr::i());
    let mut components = vec![crate::uea::primitive_coproduct(g)];
    for n in 1..=series_order {
        let prev = components.last().unwrap();
        let term = ir
            .commutator(prev, alg)
            .scale(&Expr::scalar(GaussianRational::from_ratio(1, n as i64)));
        if term.is_zero() {
            return (components, true);
        }
        components.push(term);
    }
    (components, false)
}

/// `Delta_F(g)`, summed until the adjoint series terminates or the declared
/// order is reached.
pub fn twisted_coproduct(
    g: Generator,
    ctx: &TwistContext,
    series_order: u32,
) -> SeriesResult<Tensor2> {
    let (components, exact) = twisted_coproduct_components(g, ctx, series_order);
    let mut total = Tensor2::zero();
    for c in &components {
        total.add_assign(c);
    }
    SeriesResult {
        value: total,
        truncated_at: (!exact).then_some(series_order),
    }
}

/// Graded components of the twist factor `F = exp(i r)` in U(g) (x) U(g).
pub fn twist_factor_components(ctx: &TwistContext, order: u32) -> Vec<Tensor2> {
    twist_factor_components_r(&ctx.r, &ctx.algebra, order)
}

pub fn twist_factor_components_r(r: &RMatrix, alg: &LieAlgebra, order: u32) -> Vec<Tensor2> {
    let mut ir = Tensor2::zero();
    for (c, a, b) in r.terms() {
        ir.add_assign(&Tensor2::term(
            [PbwMonomial::generator(*a), PbwMonomial::generator(*b)],
            c.mul_ref(&Expr::i()),
        ));
    }
    let mut components = vec![Tensor2::unit()];
    for n in 1..=order {
        let prev = components.last().unwrap();
        let next = prev
            .mul(&ir, alg)
            .scale(&Expr::scalar(GaussianRational::from_ratio(1, n as i64)));
        components.push(next);
    }
    components
}

/// `u = sum f_(1) S_0(f_(2))` for the truncated twist series.
fn u_element(ctx: &TwistContext, order: u32) -> UeaElement {
    let alg = &ctx.algebra;
    let mut u = UeaElement::zero();
    for component in twist_factor_components(ctx, order) {
        for (k, c) in component.terms() {
            let left = UeaElement::term(k[0].clone(), c.clone());
            let right = UeaElement::term(k[1].clone(), Expr::one()).antipode0(alg);
            u.add_assign(&left.mul(&right, alg));
        }
    }
    u
}

/// Twisted antipode `S(g) = u S_0(g) u^-1`.
///
/// For an antisymmetric r-matrix over commuting carriers the multiplication
/// map composed with `id (x) S_0` is an algebra homomorphism on the carrier
/// subalgebra, so `u = exp(-i m(r)) = exp(0) = 1` and the antipode stays
/// primitive. The first-order contraction `m . (id (x) S_0)(i r)` is checked
/// at runtime; when it vanishes the result is exact. Otherwise `u` and its
/// order-matched series inverse are expanded to `series_order`.
pub fn twisted_antipode(
    g: Generator,
    ctx: &TwistContext,
    series_order: u32,
) -> Result<SeriesResult<UeaElement>, TwistError> {
    let alg = &ctx.algebra;
    let s0 = UeaElement::generator(g).neg();
    // first-order contraction: sum -i c A B
    let mut contraction = UeaElement::zero();
    for (c, a, b) in ctx.r.terms() {
        let prod = UeaElement::generator(*a).mul(&UeaElement::generator(*b), alg);
        contraction = contraction.add(&prod.scale(&c.mul_ref(&Expr::i()).neg_ref()));
    }
    if contraction.is_zero() && ctx.r.check_abelian(alg).is_ok() {
        return Ok(SeriesResult {
            value: s0,
            truncated_at: None,
        });
    }

    let u = u_element(ctx, series_order);
    let unit_part = u.counit();
    if !unit_part.is_one() {
        // order-0 part of an exp-type twist is always 1
        return Err(TwistError::NonUnitLeadingTerm(unit_part.to_string()));
    }
    let v = u.sub(&UeaElement::one());
    // geometric series inverse, truncated by deformation-parameter degree
    let params = &ctx.deform_params;
    let truncate = |e: &UeaElement| -> UeaElement {
        let mut out = UeaElement::zero();
        for (m, c) in e.terms() {
            let kept: Vec<_> = c
                .terms()
                .iter()
                .filter(|mono| {
                    let deg: u32 = mono
                        .powers
                        .iter()
                        .map(|(a, p)| match a {
                            crate::expr::Atom::Param(q) if params.contains(q) => *p,
                            _ => 0,
                        })
                        .sum();
                    deg <= series_order
                })
                .cloned()
                .collect();
            let mut acc: BTreeMap<(crate::expr::PowerMap, i32), GaussianRational> = BTreeMap::new();
            for mono in kept {
                let e2 = acc
                    .entry((mono.powers.clone(), mono.tau_power))
                    .or_insert_with(GaussianRational::zero);
                *e2 = &*e2 + &mono.coeff;
            }
            out.add_assign(&UeaElement::term(m.clone(), Expr::from_accumulator(acc)));
        }
        out
    };
    let mut u_inv = UeaElement::one();
    for _ in 0..=series_order {
        u_inv = truncate(&UeaElement::one().sub(&v.mul(&u_inv, alg)));
    }
    let value = truncate(&u.mul(&s0, alg).mul(&u_inv, alg));
    Ok(SeriesResult {
        value,
        truncated_at: Some(series_order),
    })
}

// ---- normalization and cocycle ----

/// `(eps (x) 1) F = (1 (x) eps) F = 1`.
///
/// The identity holds at every order: each term of `(i r)^n / n!` carries a
/// word of `n >= 1` generators in each slot, and PBW rewriting only shortens
/// words down to length 1, never to the unit, so the counit annihilates
/// every positive order. The low orders are still computed and checked
/// explicitly here.
pub fn verify_normalization(ctx: &TwistContext) -> bool {
    verify_normalization_to_order(ctx, ctx.max_order.min(3))
}

pub fn verify_normalization_to_order(ctx: &TwistContext, order: u32) -> bool {
    let components = twist_factor_components(ctx, order);
    for (n, component) in components.iter().enumerate() {
        let left = component.counit_slot(0);
        let right = component.counit_slot(1);
        if n == 0 {
            if !left.is_one() || !right.is_one() {
                return false;
            }
        } else if !left.is_zero() || !right.is_zero() {
            return false;
        }
    }
    true
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CocycleReport {
    pub max_order: u32,
    pub first_failure_order: Option<u32>,
}

impl CocycleReport {
    pub fn holds(&self) -> bool {
        self.first_failure_order.is_none()
    }
}

/// Checks `F_12 . (Delta_0 (x) 1) F = F_23 . (1 (x) Delta_0) F` order by
/// order in the number of r-matrix factors.
pub fn verify_cocycle_r(alg: &LieAlgebra, r: &RMatrix, order: u32) -> CocycleReport {
    let f = twist_factor_components_r(r, alg, order);
    let f12: Vec<Tensor3> = f.iter().map(|c| c.embed(0, 1)).collect();
    let f23: Vec<Tensor3> = f.iter().map(|c| c.embed(1, 2)).collect();
    let dl: Vec<Tensor3> = f.iter().map(|c| c.coproduct0_left(alg)).collect();
    let dr: Vec<Tensor3> = f.iter().map(|c| c.coproduct0_right(alg)).collect();
    for m in 0..=order as usize {
        let mut lhs = Tensor3::zero();
        let mut rhs = Tensor3::zero();
        for p in 0..=m {
            lhs.add_assign(&f12[p].mul(&dl[m - p], alg));
            rhs.add_assign(&f23[p].mul(&dr[m - p], alg));
        }
        if lhs != rhs {
            return CocycleReport {
                max_order: order,
                first_failure_order: Some(m as u32),
            };
        }
    }
    CocycleReport {
        max_order: order,
        first_failure_order: None,
    }
}

pub fn verify_cocycle(ctx: &TwistContext, order: u32) -> CocycleReport {
    verify_cocycle_r(&ctx.algebra, &ctx.r, order)
}

// ---- coassociativity of the twisted coproduct ----

/// Graded components of `Delta_F(m)` for a PBW monomial, via the algebra-
/// homomorphism property, truncated at `cap`.
fn delta_f_monomial_components(m: &PbwMonomial, ctx: &TwistContext, cap: u32) -> Vec<Tensor2> {
    let alg = &ctx.algebra;
    let mut comps = vec![Tensor2::unit()];
    comps.resize((cap + 1) as usize, Tensor2::zero());
    for (g, p) in m.factors() {
        let (gen_comps, _) = twisted_coproduct_components(*g, ctx, cap);
        for _ in 0..*p {
            let mut next = vec![Tensor2::zero(); (cap + 1) as usize];
            for (i, a) in comps.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for (j, b) in gen_comps.iter().enumerate() {
                    if i + j > cap as usize {
                        break;
                    }
                    next[i + j].add_assign(&a.mul(b, alg));
                }
            }
            comps = next;
        }
    }
    comps
}

/// Coassociativity `(Delta_F (x) id) Delta_F(g) = (id (x) Delta_F) Delta_F(g)`
/// compared order by order up to the detected truncation order.
pub fn coproduct_coassociativity(g: Generator, ctx: &TwistContext, series_order: u32) -> bool {
    let (components, exact) = twisted_coproduct_components(g, ctx, series_order);
    let cap = if exact {
        (components.len() as u32 - 1) + series_order
    } else {
        series_order
    };

    let mut lhs = vec![Tensor3::zero(); (cap + 1) as usize];
    let mut rhs = vec![Tensor3::zero(); (cap + 1) as usize];
    for (q, comp) in components.iter().enumerate() {
        for (key, coeff) in comp.terms() {
            // (Delta_F (x) id): expand slot 0 into slots (0, 1)
            let ex = delta_f_monomial_components(&key[0], ctx, cap - q as u32);
            for (p, t2) in ex.iter().enumerate() {
                for (k2, c2) in t2.terms() {
                    lhs[p + q].add_assign(&Tensor3::term(
                        [k2[0].clone(), k2[1].clone(), key[1].clone()],
                        coeff.mul_ref(c2),
                    ));
                }
            }
            // (id (x) Delta_F): expand slot 1 into slots (1, 2)
            let ex = delta_f_monomial_components(&key[1], ctx, cap - q as u32);
            for (p, t2) in ex.iter().enumerate() {
                for (k2, c2) in t2.terms() {
                    rhs[p + q].add_assign(&Tensor3::term(
                        [key[0].clone(), k2[0].clone(), k2[1].clone()],
                        coeff.mul_ref(c2),
                    ));
                }
            }
        }
    }
    lhs == rhs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::Atom;

    fn ctx(twist: u8, sig: Signature) -> TwistContext {
        TwistContext::catalog(twist, sig, 3, &TwistParams::symbolic(), DEFAULT_MAX_ORDER).unwrap()
    }

    fn beta(twist: u8, k: u8, l: u8) -> Expr {
        Expr::param(Param::Beta { twist, k, l })
    }

    fn beta_s(twist: u8) -> Expr {
        Expr::param(Param::BetaScalar { twist })
    }

    #[test]
    fn t_star_t_is_t_squared_for_every_catalog_item() {
        for twist in 1..=15u8 {
            for sig in [Signature::NHPlus, Signature::NHMinus] {
                let ctx = ctx(twist, sig);
                let t = Expr::t();
                assert_eq!(
                    star_product(&t, &t, &ctx).unwrap(),
                    t.pow(2),
                    "twist {twist}"
                );
            }
        }
    }

    #[test]
    fn twist10_first_order_star() {
        // x1 * x2 = x1 x2 + i beta10_12 C-^2 under NH-
        let ctx = ctx(10, Signature::NHMinus);
        let product = star_product(&Expr::x(1), &Expr::x(2), &ctx).unwrap();
        let correction = Expr::i()
            .mul_ref(&beta(10, 1, 2))
            .mul_ref(&Expr::atom(Atom::CMinus).pow(2));
        let expected = (&Expr::x(1) * &Expr::x(2)).add_ref(&correction);
        assert_eq!(product, expected);
        // and the commutator doubles it
        let comm = star_commutator(&Expr::x(1), &Expr::x(2), &ctx).unwrap();
        assert_eq!(comm, correction.scale(&GaussianRational::from_int(2)));
    }

    #[test]
    fn zero_deformation_is_the_plain_product() {
        for twist in 1..=15u8 {
            let ctx = TwistContext::catalog(
                twist,
                Signature::NHPlus,
                3,
                &TwistParams::zero(),
                DEFAULT_MAX_ORDER,
            )
            .unwrap();
            let f = &(&Expr::x(1) * &Expr::t()) + &Expr::x(2);
            let g = Expr::x(3);
            assert_eq!(star_product(&f, &g, &ctx).unwrap(), f.mul_ref(&g));
        }
    }

    #[test]
    fn twist15_time_quantum_table() {
        let ctx = ctx(15, Signature::NHPlus);
        let table = spacetime_table(&ctx).unwrap();
        // [t, x_1] = 2 i beta15 x_2, [t, x_2] = -2 i beta15 x_1, [t, x_3] = 0
        let two_i_beta = Expr::i()
            .mul_ref(&beta_s(15))
            .scale(&GaussianRational::from_int(2));
        assert_eq!(table.t_x[&1], two_i_beta.mul_ref(&Expr::x(2)));
        assert_eq!(table.t_x[&2], two_i_beta.mul_ref(&Expr::x(1)).neg_ref());
        assert!(table.t_x[&3].is_zero());
        assert!(table.x_x.values().all(Expr::is_zero));
        let class = classify(&table);
        assert_eq!(class.kind, NoncommKind::TimeQuantum);
    }

    #[test]
    fn truncation_failure_is_loud() {
        // H-carrier twist acting on a transcendental coefficient: the series
        // genuinely does not terminate
        let ctx = ctx(15, Signature::NHPlus);
        let f = Expr::atom(Atom::CPlus);
        let err = star_product(&f, &Expr::x(1), &ctx).unwrap_err();
        assert!(matches!(
            err,
            TwistError::TruncationNotDetected { max_order: 8 }
        ));
    }

    #[test]
    fn twisted_coproduct_of_carrier_commutant_is_primitive() {
        let ctx = ctx(10, Signature::NHPlus);
        for i in 1..=3 {
            let res = twisted_coproduct(Generator::P(i), &ctx, 4);
            assert_eq!(res.truncated_at, None);
            assert_eq!(res.value, crate::uea::primitive_coproduct(Generator::P(i)));
        }
    }

    #[test]
    fn twisted_coproduct_twist11_h_matches_hand_expansion() {
        // ad_{i r}(Delta_0 H) = sum_{k<l} b^kl (P_k (x) P_l - P_l (x) P_k)
        //                      +/- (b^kl/tau^2)(K_k (x) K_l - K_l (x) K_k),
        // and the next order vanishes because [P, r] = [K, r] = 0.
        for (sig, sign) in [(Signature::NHPlus, 1), (Signature::NHMinus, -1)] {
            let ctx = ctx(11, sig);
            let res = twisted_coproduct(Generator::H, &ctx, 4);
            assert_eq!(res.truncated_at, None);
            let mut expected = crate::uea::primitive_coproduct(Generator::H);
            for k in 1..=3u8 {
                for l in (k + 1)..=3u8 {
                    let b = beta(11, k, l);
                    let pk = PbwMonomial::generator(Generator::P(k));
                    let pl = PbwMonomial::generator(Generator::P(l));
                    expected = expected.add(&Tensor2::term([pk.clone(), pl.clone()], b.clone()));
                    expected = expected.add(&Tensor2::term([pl, pk], b.neg_ref()));
                    let kk = PbwMonomial::generator(Generator::K(k));
                    let kl = PbwMonomial::generator(Generator::K(l));
                    let c = b
                        .mul_ref(&Expr::tau(-2))
                        .scale(&GaussianRational::from_int(sign));
                    expected = expected.add(&Tensor2::term([kk.clone(), kl.clone()], c.clone()));
                    expected = expected.add(&Tensor2::term([kl, kk], c.neg_ref()));
                }
            }
            assert_eq!(res.value, expected);
        }
    }

    #[test]
    fn twisted_antipode_stays_primitive_on_the_catalog() {
        // u = 1 for every Abelian antisymmetric twist, so S = S_0 exactly
        for twist in [10u8, 13, 15, 1] {
            let ctx = ctx(twist, Signature::NHMinus);
            for g in [Generator::P(1), Generator::H, Generator::M(1, 2)] {
                let res = twisted_antipode(g, &ctx, 3).unwrap();
                assert_eq!(res.truncated_at, None, "twist {twist} {g}");
                assert_eq!(res.value, UeaElement::generator(g).neg());
            }
        }
    }

    #[test]
    fn twisted_antipode_nonabelian_fault_deviates() {
        let b = Expr::param(Param::named("beta"));
        let r = RMatrix::from_terms(vec![
            (b.clone(), Generator::K(1), Generator::H),
            (b.neg_ref(), Generator::H, Generator::K(1)),
        ]);
        let algebra = LieAlgebra::build(Signature::NHPlus, 3).unwrap();
        let realization = Realization::build(Signature::NHPlus, 3).unwrap();
        let mut deform_params = BTreeSet::new();
        deform_params.insert(Param::named("beta"));
        let ctx = TwistContext {
            twist: None,
            signature: Signature::NHPlus,
            dim: 3,
            algebra,
            realization,
            r,
            max_order: 8,
            deform_params,
        };
        let res = twisted_antipode(Generator::H, &ctx, 2).unwrap();
        assert_eq!(res.truncated_at, Some(2));
        let defect = res.value.sub(&UeaElement::generator(Generator::H).neg());
        assert!(!defect.is_zero());
    }

    #[test]
    fn normalization_holds_for_all_catalog_items() {
        for twist in 1..=15u8 {
            for sig in [Signature::NHPlus, Signature::NHMinus] {
                assert!(verify_normalization(&ctx(twist, sig)), "twist {twist}");
            }
        }
    }

    #[test]
    fn cocycle_holds_for_catalog_and_fails_for_nonabelian_fault() {
        for twist in [1u8, 5, 10, 15] {
            for sig in [Signature::NHPlus, Signature::NHMinus] {
                let report = verify_cocycle(&ctx(twist, sig), 3);
                assert!(report.holds(), "twist {twist} {sig}");
            }
        }
        let alg = LieAlgebra::build(Signature::NHPlus, 3).unwrap();
        let b = Expr::param(Param::named("beta"));
        let r = RMatrix::from_terms(vec![
            (b.clone(), Generator::K(1), Generator::H),
            (b.neg_ref(), Generator::H, Generator::K(1)),
        ]);
        let report = verify_cocycle_r(&alg, &r, 3);
        assert_eq!(report.first_failure_order, Some(2));
    }

    #[test]
    fn classification_examples() {
        let table = spacetime_table(&ctx(10, Signature::NHMinus)).unwrap();
        let class = classify(&table);
        assert_eq!(class.kind, NoncommKind::ConstantTheta);
        assert_eq!(class.time_profile, Expr::atom(Atom::CMinus).pow(2));
        assert_eq!(class.coordinate_degree, 0);

        let table = spacetime_table(&ctx(13, Signature::NHPlus)).unwrap();
        let class = classify(&table);
        assert_eq!(class.kind, NoncommKind::LinearTheta);
        assert_eq!(
            class.time_profile,
            Expr::tau(1)
                .mul_ref(&Expr::atom(Atom::SPlus))
                .scale(&GaussianRational::from_int(2))
        );
        assert_eq!(class.coordinate_degree, 1);

        let zero = spacetime_table(
            &TwistContext::catalog(6, Signature::NHPlus, 3, &TwistParams::zero(), 8).unwrap(),
        )
        .unwrap();
        assert!(zero.is_commutative());
        assert_eq!(classify(&zero).kind, NoncommKind::Commutative);
    }

    #[test]
    fn coassociativity_spot_checks() {
        // exactly truncating case
        let c10 = ctx(10, Signature::NHPlus);
        assert!(coproduct_coassociativity(Generator::H, &c10, 3));
        // order-capped case: twist 15 rotates P_1 forever
        let c15 = ctx(15, Signature::NHMinus);
        assert!(coproduct_coassociativity(Generator::P(1), &c15, 3));
    }
}
