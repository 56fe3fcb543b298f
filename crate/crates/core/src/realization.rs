//! Differential-operator realization of the generators on functions of
//! `(t, x)`, the homomorphism check against the abstract bracket table, and
//! the finite symmetry transformations.
//!
//! NH+/NH- realization (branch sign `s`):
//!   H    = i d_t
//!   P_i  = i C_s(t/tau) d_i
//!   K_i  = i tau S_s(t/tau) d_i
//!   F_i  = s 2i tau^2 (C_s(t/tau) - 1) d_i
//!   R_i  = s 6i tau^3 (S_s(t/tau) - t/tau) d_i
//!   M_ij = i (x_i d_j - x_j d_i)
//! Galilei is the coefficient-wise tau -> infinity limit: P_i = i d_i,
//! K_i = i t d_i, F_i = i t^2 d_i, R_i = i t^3 d_i.
//!
//! Note: the printed form of the `R_i` action omits the derivative it acts
//! through; the `d_i` here is forced by the finite transformations, the
//! homomorphism property and the derived space-time tables, which are checked
//! independently in the test suite.

use crate::algebra::{Generator, LieAlgebra, LinComb, Signature};
use crate::diffop::DiffOp;
use crate::expr::{Atom, Expr, Param};
use crate::scalar::GaussianRational;
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum RealizationError {
    #[error("invalid spatial dimension {0}")]
    InvalidDimension(u8),
    #[error("generator {0} does not exist for dimension {1}")]
    BadGenerator(String, u8),
    #[error("rotation matrix is not orthogonal within 1e-10 (max defect {0})")]
    NonOrthogonalRotation(f64),
    #[error("transformation parameter vectors must have length d = {0}")]
    BadParameterLength(u8),
}

/// Branch atoms: `C_s`, `S_s` for `s = +/-`; Galilei uses plain polynomials.
fn branch_atoms(sig: Signature) -> Option<(Atom, Atom, i64)> {
    match sig {
        Signature::NHPlus => Some((Atom::CPlus, Atom::SPlus, 1)),
        Signature::NHMinus => Some((Atom::CMinus, Atom::SMinus, -1)),
        Signature::Galilei => None,
    }
}

/// The realization of one generator.
pub fn realize(g: Generator, sig: Signature, dim: u8) -> Result<DiffOp, RealizationError> {
    let check = |i: u8| -> Result<(), RealizationError> {
        if i == 0 || i > dim {
            Err(RealizationError::BadGenerator(g.to_string(), dim))
        } else {
            Ok(())
        }
    };
    let i_unit = Expr::i();
    match g {
        Generator::H => Ok(DiffOp::first_order_t(i_unit)),
        Generator::M(i, j) => {
            check(i)?;
            check(j)?;
            Ok(
                DiffOp::first_order_x(i_unit.mul_ref(&Expr::x(i)), j).add(&DiffOp::first_order_x(
                    i_unit.mul_ref(&Expr::x(j)).neg_ref(),
                    i,
                )),
            )
        }
        Generator::P(i) => {
            check(i)?;
            let coeff = match branch_atoms(sig) {
                Some((c, _, _)) => i_unit.mul_ref(&Expr::atom(c)),
                None => i_unit,
            };
            Ok(DiffOp::first_order_x(coeff, i))
        }
        Generator::K(i) => {
            check(i)?;
            let coeff = match branch_atoms(sig) {
                Some((_, s, _)) => i_unit.mul_ref(&Expr::tau(1)).mul_ref(&Expr::atom(s)),
                None => i_unit.mul_ref(&Expr::t()),
            };
            Ok(DiffOp::first_order_x(coeff, i))
        }
        Generator::F(i) => {
            check(i)?;
            let coeff = match branch_atoms(sig) {
                Some((c, _, sign)) => (&Expr::atom(c) - &Expr::one())
                    .mul_ref(&Expr::tau(2))
                    .mul_ref(&i_unit)
                    .scale(&GaussianRational::from_int(2 * sign)),
                None => i_unit.mul_ref(&Expr::t().pow(2)),
            };
            Ok(DiffOp::first_order_x(coeff, i))
        }
        Generator::R(i) => {
            check(i)?;
            let coeff = match branch_atoms(sig) {
                Some((_, s, sign)) => (&Expr::atom(s) - &(&Expr::t() * &Expr::tau(-1)))
                    .mul_ref(&Expr::tau(3))
                    .mul_ref(&i_unit)
                    .scale(&GaussianRational::from_int(6 * sign)),
                None => i_unit.mul_ref(&Expr::t().pow(3)),
            };
            Ok(DiffOp::first_order_x(coeff, i))
        }
    }
}

/// A complete generator -> operator map for one signature and dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Realization {
    pub signature: Signature,
    pub dim: u8,
    map: BTreeMap<Generator, DiffOp>,
}

impl Realization {
    pub fn build(sig: Signature, dim: u8) -> Result<Realization, RealizationError> {
        let alg =
            LieAlgebra::build(sig, dim).map_err(|_| RealizationError::InvalidDimension(dim))?;
        let mut map = BTreeMap::new();
        for &g in alg.generators() {
            map.insert(g, realize(g, sig, dim)?);
        }
        Ok(Realization {
            signature: sig,
            dim,
            map,
        })
    }

    pub fn get(&self, g: Generator) -> Option<&DiffOp> {
        self.map.get(&g)
    }

    pub fn apply_lincomb(&self, lc: &LinComb) -> DiffOp {
        let mut out = DiffOp::zero();
        for (g, c) in lc.iter() {
            if let Some(op) = self.map.get(g) {
                out = out.add(&op.scale(c));
            }
        }
        out
    }

    /// All realized operators are first order.
    pub fn all_first_order(&self) -> bool {
        self.map.values().all(|op| op.order() <= 1)
    }

    /// `[rho(a), rho(b)] = rho([a, b])` for every generator pair.
    /// Returns the violating pairs (empty = pass).
    pub fn verify_homomorphism(&self, alg: &LieAlgebra) -> Vec<HomViolation> {
        let mut out = Vec::new();
        let gens = alg.generators();
        for (n, &a) in gens.iter().enumerate() {
            for &b in &gens[n + 1..] {
                let (Some(op_a), Some(op_b)) = (self.map.get(&a), self.map.get(&b)) else {
                    out.push(HomViolation {
                        pair: (a, b),
                        defect: "missing operator".into(),
                    });
                    continue;
                };
                let lhs = op_a.commutator(op_b);
                let rhs = self.apply_lincomb(&alg.bracket(a, b));
                let defect = lhs.sub(&rhs);
                if !defect.is_zero() {
                    out.push(HomViolation {
                        pair: (a, b),
                        defect: defect.to_string(),
                    });
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomViolation {
    pub pair: (Generator, Generator),
    pub defect: String,
}

impl fmt::Display for HomViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[rho({}), rho({})] - rho([{}, {}]) = {}",
            self.pair.0, self.pair.1, self.pair.0, self.pair.1, self.defect
        )
    }
}

/// Finite symmetry transformation parameters. `alpha` is the O(d) rotation
/// matrix, `a` spatial translations, `v` boosts, `b` accelerations, `c` the
/// cubic parameters, `a0` the time translation.
#[derive(Clone, Debug)]
pub struct FiniteTransformation {
    pub signature: Signature,
    pub dim: u8,
    pub a0: Expr,
    pub a: Vec<Expr>,
    pub v: Vec<Expr>,
    pub b: Vec<Expr>,
    pub c: Vec<Expr>,
    pub alpha: Vec<Vec<Expr>>,
}

impl FiniteTransformation {
    /// Identity transformation.
    pub fn identity(signature: Signature, dim: u8) -> Self {
        let zeroes = vec![Expr::zero(); dim as usize];
        let alpha = (0..dim)
            .map(|r| {
                (0..dim)
                    .map(|c| if r == c { Expr::one() } else { Expr::zero() })
                    .collect()
            })
            .collect();
        FiniteTransformation {
            signature,
            dim,
            a0: Expr::zero(),
            a: zeroes.clone(),
            v: zeroes.clone(),
            b: zeroes.clone(),
            c: zeroes,
            alpha,
        }
    }

    fn validate(&self) -> Result<(), RealizationError> {
        let d = self.dim as usize;
        if self.a.len() != d
            || self.v.len() != d
            || self.b.len() != d
            || self.c.len() != d
            || self.alpha.len() != d
            || self.alpha.iter().any(|row| row.len() != d)
        {
            return Err(RealizationError::BadParameterLength(self.dim));
        }
        // orthogonality is checked only when alpha is numeric
        let numeric: Option<Vec<Vec<f64>>> = self
            .alpha
            .iter()
            .map(|row| {
                row.iter()
                    .map(|e| {
                        e.as_scalar()
                            .filter(|s| s.is_real())
                            .map(|s| crate::expr::f64_of(s.re()))
                    })
                    .collect()
            })
            .collect();
        if let Some(m) = numeric {
            let mut max_defect = 0.0f64;
            for r in 0..d {
                for c in 0..d {
                    let dot: f64 = (0..d).map(|k| m[k][r] * m[k][c]).sum();
                    let expect = if r == c { 1.0 } else { 0.0 };
                    max_defect = max_defect.max((dot - expect).abs());
                }
            }
            if max_defect > 1e-10 {
                return Err(RealizationError::NonOrthogonalRotation(max_defect));
            }
        }
        Ok(())
    }

    /// Applies the transformation to the canonical symbolic point `(t, x)`.
    pub fn apply_symbolic(&self) -> Result<(Expr, Vec<Expr>), RealizationError> {
        self.validate()?;
        let d = self.dim as usize;
        let t_out = &Expr::t() + &self.a0;
        let branch = branch_atoms(self.signature);
        // the four time profiles multiplying a_i, v_i, b_i, c_i
        let (pa, pv, pb, pc) = match branch {
            Some((c_atom, s_atom, sign)) => {
                let c = Expr::atom(c_atom);
                let s = Expr::atom(s_atom);
                (
                    c.clone(),
                    Expr::tau(1).mul_ref(&s),
                    (&c - &Expr::one())
                        .mul_ref(&Expr::tau(2))
                        .scale(&GaussianRational::from_int(2 * sign)),
                    (&s - &(&Expr::t() * &Expr::tau(-1)))
                        .mul_ref(&Expr::tau(3))
                        .scale(&GaussianRational::from_int(6 * sign)),
                )
            }
            None => (Expr::one(), Expr::t(), Expr::t().pow(2), Expr::t().pow(3)),
        };
        let mut x_out = Vec::with_capacity(d);
        for i in 0..d {
            let mut xi = Expr::zero();
            for j in 0..d {
                xi = xi.add_ref(&self.alpha[i][j].mul_ref(&Expr::x(j as u8 + 1)));
            }
            xi = xi.add_ref(&self.a[i].mul_ref(&pa));
            xi = xi.add_ref(&self.v[i].mul_ref(&pv));
            xi = xi.add_ref(&self.b[i].mul_ref(&pb));
            xi = xi.add_ref(&self.c[i].mul_ref(&pc));
            x_out.push(xi);
        }
        Ok((t_out, x_out))
    }

    /// Applies the transformation to a numeric point; transformation
    /// parameters may reference named symbols bound in `params`.
    pub fn apply_numeric(
        &self,
        t: f64,
        x: &[f64],
        tau: f64,
        params: &BTreeMap<Param, f64>,
    ) -> Result<(f64, Vec<f64>), RealizationError> {
        let (ts, xs) = self.apply_symbolic()?;
        let bind = crate::expr::NumericBindings { t, x, tau, params };
        let err =
            |e: crate::expr::ExprError| RealizationError::BadGenerator(e.to_string(), self.dim);
        let t_out = ts.eval_numeric(&bind).map_err(err)?.re;
        let mut x_out = Vec::new();
        for xi in &xs {
            x_out.push(xi.eval_numeric(&bind).map_err(err)?.re);
        }
        Ok((t_out, x_out))
    }
}

/// One-parameter flow consistency: the `s`-derivative at `s = 0` of the
/// finite transformation with parameter `s` along `g` equals the vector
/// field `-i rho(g)` applied to the coordinates.
pub fn check_flow_consistency(
    g: Generator,
    sig: Signature,
    dim: u8,
) -> Result<bool, RealizationError> {
    let s_param = Param::named("s");
    let s_expr = Expr::param(s_param.clone());
    let mut tr = FiniteTransformation::identity(sig, dim);
    match g {
        Generator::H => tr.a0 = s_expr,
        Generator::P(i) => tr.a[i as usize - 1] = s_expr,
        Generator::K(i) => tr.v[i as usize - 1] = s_expr,
        Generator::F(i) => tr.b[i as usize - 1] = s_expr,
        Generator::R(i) => tr.c[i as usize - 1] = s_expr,
        Generator::M(_, _) => {
            return Err(RealizationError::BadGenerator(g.to_string(), dim));
        }
    }
    let (t_out, x_out) = tr.apply_symbolic()?;
    let op = realize(g, sig, dim)?;
    let field = op.scale(&Expr::i().neg_ref()); // -i rho(g)

    // d/ds at 0 of each output coordinate = linear-in-s part
    let (dt, higher_t) = t_out.linear_part_in(&s_param);
    if higher_t || dt != field.apply(&Expr::t()) {
        return Ok(false);
    }
    for (idx, xi) in x_out.iter().enumerate() {
        let (dx, higher) = xi.linear_part_in(&s_param);
        if higher || dx != field.apply(&Expr::x(idx as u8 + 1)) {
            return Ok(false);
        }
    }
    Ok(true)
}
