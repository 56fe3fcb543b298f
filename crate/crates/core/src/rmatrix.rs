//! Classical r-matrices: the fifteen-item Abelian catalog, the Schouten
//! bracket and the classical Yang-Baxter equation check.
//!
//! Catalog layout (wedge convention `a ^ b = a (x) b - b (x) a`):
//!   1  (1/2) b1^kl  R_k ^ R_l        6  (1/2) b6^kl  F_k ^ F_l
//!   2  (1/2) b2^kl  R_k ^ F_l        7  (1/2) b7^kl  F_k ^ P_l
//!   3  (1/2) b3^kl  R_k ^ P_l        8  (1/2) b8^kl  K_k ^ F_l
//!   4  (1/2) b4^kl  K_k ^ R_l        9  b9  F_m ^ M_kl
//!   5  b5  R_m ^ M_kl               10  (1/2) b10^kl P_k ^ P_l
//!  11  (1/2) b11^kl K_k ^ P_l       13  b13 K_m ^ M_kl
//!  12  (1/2) b12^kl K_k ^ K_l       14  b14 P_m ^ M_kl
//!                                   15  b15 M_ij ^ H
//! Array parameters are antisymmetric (`b^kl = -b^lk`, canonical component
//! `k < l`); fixed-index items need `m != k, l` and hence `d >= 3`.

use crate::algebra::{Generator, LieAlgebra, LinComb};
use crate::expr::{Expr, Param};
use crate::scalar::GaussianRational;
use crate::uea::{PbwMonomial, Tensor3};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use thiserror::Error;

/// Antisymmetric element of g ^ g stored as the full term list
/// `sum c * a (x) b` (both orientations present).
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct RMatrix {
    terms: Vec<(Expr, Generator, Generator)>,
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum RMatrixError {
    #[error("twist id {0} outside 1..=15")]
    UnknownTwist(u8),
    #[error("twist {twist} requires spatial dimension >= {needed}, got {dim}")]
    DimensionTooSmall { twist: u8, needed: u8, dim: u8 },
    #[error("fixed indices must satisfy m != k, l and lie in 1..=d (got m={m}, k={k}, l={l})")]
    BadFixedIndices { m: u8, k: u8, l: u8 },
    #[error("rotation plane indices must be distinct and lie in 1..=d (got i={i}, j={j})")]
    BadPlaneIndices { i: u8, j: u8 },
    #[error("parameter component ({k},{l}) is not antisymmetric-consistent: {msg}")]
    NonAntisymmetricParams { k: u8, l: u8, msg: String },
    #[error("carriers are not mutually commuting: [{a}, {b}] != 0")]
    NonAbelianCarriers { a: String, b: String },
}

impl RMatrix {
    pub fn zero() -> RMatrix {
        RMatrix::default()
    }

    /// Builds `sum c_ab a (x) b` from raw terms, merging like pairs.
    pub fn from_terms(raw: Vec<(Expr, Generator, Generator)>) -> RMatrix {
        let mut acc: BTreeMap<(Generator, Generator), Expr> = BTreeMap::new();
        for (c, a, b) in raw {
            let entry = acc.entry((a, b)).or_insert_with(Expr::zero);
            *entry = entry.add_ref(&c);
        }
        RMatrix {
            terms: acc
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|((a, b), c)| (c, a, b))
                .collect(),
        }
    }

    /// Adds the wedge `c * (a (x) b - b (x) a)`.
    fn push_wedge(
        raw: &mut Vec<(Expr, Generator, Generator)>,
        c: Expr,
        a: Generator,
        b: Generator,
    ) {
        raw.push((c.clone(), a, b));
        raw.push((c.neg_ref(), b, a));
    }

    pub fn terms(&self) -> &[(Expr, Generator, Generator)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Distinct generators appearing anywhere in the term list.
    pub fn carriers(&self) -> BTreeSet<Generator> {
        self.terms.iter().flat_map(|(_, a, b)| [*a, *b]).collect()
    }

    /// The tensor flip with a sign; zero iff the r-matrix is antisymmetric.
    pub fn antisymmetry_defect(&self) -> RMatrix {
        let mut raw = self.terms.clone();
        for (c, a, b) in &self.terms {
            raw.push((c.clone(), *b, *a));
        }
        RMatrix::from_terms(raw)
    }

    /// Checks that all carriers mutually commute in the given algebra.
    pub fn check_abelian(&self, alg: &LieAlgebra) -> Result<(), RMatrixError> {
        let carriers: Vec<Generator> = self.carriers().into_iter().collect();
        for (n, a) in carriers.iter().enumerate() {
            for b in &carriers[n + 1..] {
                if !alg.bracket(*a, *b).is_zero() {
                    return Err(RMatrixError::NonAbelianCarriers {
                        a: a.to_string(),
                        b: b.to_string(),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn scale(&self, factor: &Expr) -> RMatrix {
        RMatrix::from_terms(
            self.terms
                .iter()
                .map(|(c, a, b)| (c.mul_ref(factor), *a, *b))
                .collect(),
        )
    }
}

impl fmt::Display for RMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(c, a, b)| format!("({}) {} (x) {}", c, a, b))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Values for the deformation parameters of one catalog twist.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BetaValues {
    /// Formal symbols `beta_k^{kl}` / `beta_k`.
    Symbolic,
    /// Numeric or expression values for array components, keyed `k < l`;
    /// missing components are zero.
    Components(BTreeMap<(u8, u8), Expr>),
    /// Value for a scalar parameter (items 5, 9, 13, 14, 15).
    Scalar(Expr),
}

/// Parameters selecting one catalog r-matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistParams {
    pub beta: BetaValues,
    /// Fixed carrier index `m` for items 5, 9, 13, 14.
    pub m: u8,
    /// Fixed rotation plane `(k, l)` for items 5, 9, 13, 14.
    pub kl: (u8, u8),
    /// Fixed rotation plane `(i, j)` for item 15.
    pub ij: (u8, u8),
}

impl Default for TwistParams {
    fn default() -> Self {
        TwistParams {
            beta: BetaValues::Symbolic,
            m: 3,
            kl: (1, 2),
            ij: (1, 2),
        }
    }
}

impl TwistParams {
    pub fn symbolic() -> Self {
        TwistParams::default()
    }

    pub fn with_components(components: BTreeMap<(u8, u8), Expr>) -> Self {
        TwistParams {
            beta: BetaValues::Components(components),
            ..TwistParams::default()
        }
    }

    pub fn with_scalar(value: Expr) -> Self {
        TwistParams {
            beta: BetaValues::Scalar(value),
            ..TwistParams::default()
        }
    }

    /// All-zero deformation (the `beta -> 0` limit).
    pub fn zero() -> Self {
        TwistParams {
            beta: BetaValues::Components(BTreeMap::new()),
            ..TwistParams::default()
        }
    }

    /// Array component `beta^{kl}` with sign resolution; `k == l` gives zero.
    fn component(&self, twist: u8, k: u8, l: u8) -> Result<Expr, RMatrixError> {
        if k == l {
            return Ok(Expr::zero());
        }
        let (lo, hi, sign) = if k < l { (k, l, 1) } else { (l, k, -1) };
        let base = match &self.beta {
            BetaValues::Symbolic => Expr::param(Param::Beta {
                twist,
                k: lo,
                l: hi,
            }),
            BetaValues::Components(map) => map.get(&(lo, hi)).cloned().unwrap_or_else(Expr::zero),
            BetaValues::Scalar(_) => {
                return Err(RMatrixError::NonAntisymmetricParams {
                    k,
                    l,
                    msg: "scalar value supplied for an array-parameter twist".into(),
                })
            }
        };
        Ok(base.scale(&GaussianRational::from_int(sign)))
    }

    fn scalar(&self, twist: u8) -> Result<Expr, RMatrixError> {
        match &self.beta {
            BetaValues::Symbolic => Ok(Expr::param(Param::BetaScalar { twist })),
            BetaValues::Scalar(v) => Ok(v.clone()),
            BetaValues::Components(map) if map.is_empty() => Ok(Expr::zero()),
            BetaValues::Components(_) => Err(RMatrixError::NonAntisymmetricParams {
                k: 0,
                l: 0,
                msg: "array components supplied for a scalar-parameter twist".into(),
            }),
        }
    }

    /// Validates user-supplied array components: keys must be `k < l` in
    /// range; a `(l, k)` duplicate contradicting antisymmetry is rejected.
    fn validate_components(&self, dim: u8) -> Result<(), RMatrixError> {
        if let BetaValues::Components(map) = &self.beta {
            for (k, l) in map.keys() {
                if k >= l || *k == 0 || *l > dim {
                    return Err(RMatrixError::NonAntisymmetricParams {
                        k: *k,
                        l: *l,
                        msg: format!(
                            "components must be keyed with 1 <= k < l <= {dim}; \
                             the (l,k) entry is implied by antisymmetry"
                        ),
                    });
                }
            }
        }
        Ok(())
    }
}

/// Generator kinds paired by the array-parameter catalog items.
type GenCtor = fn(u8) -> Generator;

fn array_twist_kinds(twist: u8) -> Option<(GenCtor, GenCtor)> {
    let r = Generator::R as GenCtor;
    let f = Generator::F as GenCtor;
    let k = Generator::K as GenCtor;
    let p = Generator::P as GenCtor;
    match twist {
        1 => Some((r, r)),
        2 => Some((r, f)),
        3 => Some((r, p)),
        4 => Some((k, r)),
        6 => Some((f, f)),
        7 => Some((f, p)),
        8 => Some((k, f)),
        10 => Some((p, p)),
        11 => Some((k, p)),
        12 => Some((k, k)),
        _ => None,
    }
}

fn fixed_twist_kind(twist: u8) -> Option<GenCtor> {
    match twist {
        5 => Some(Generator::R as GenCtor),
        9 => Some(Generator::F as GenCtor),
        13 => Some(Generator::K as GenCtor),
        14 => Some(Generator::P as GenCtor),
        _ => None,
    }
}

/// True for the items whose carriers include a rotation generator.
pub fn is_rotation_twist(twist: u8) -> bool {
    matches!(twist, 5 | 9 | 13 | 14 | 15)
}

/// Builds catalog item `twist` for spatial dimension `dim`.
pub fn rmatrix_catalog(twist: u8, dim: u8, params: &TwistParams) -> Result<RMatrix, RMatrixError> {
    if !(1..=15).contains(&twist) {
        return Err(RMatrixError::UnknownTwist(twist));
    }
    if is_rotation_twist(twist) && dim < 3 {
        return Err(RMatrixError::DimensionTooSmall {
            twist,
            needed: 3,
            dim,
        });
    }
    params.validate_components(dim)?;

    let mut raw = Vec::new();
    if let Some((ctor_a, ctor_b)) = array_twist_kinds(twist) {
        // r = (1/2) b^kl A_k ^ B_l summed over k, l
        let half = GaussianRational::from_ratio(1, 2);
        for k in 1..=dim {
            for l in 1..=dim {
                let c = params.component(twist, k, l)?.scale(&half);
                if c.is_zero() {
                    continue;
                }
                RMatrix::push_wedge(&mut raw, c, ctor_a(k), ctor_b(l));
            }
        }
    } else if let Some(ctor) = fixed_twist_kind(twist) {
        let (m, (k, l)) = (params.m, params.kl);
        let valid = m != k
            && m != l
            && k != l
            && m >= 1
            && k >= 1
            && l >= 1
            && m <= dim
            && k <= dim
            && l <= dim;
        if !valid {
            return Err(RMatrixError::BadFixedIndices { m, k, l });
        }
        let (rot, orient) = Generator::rotation(k, l).expect("k != l");
        let c = params
            .scalar(twist)?
            .scale(&GaussianRational::from_int(orient));
        if !c.is_zero() {
            RMatrix::push_wedge(&mut raw, c, ctor(m), rot);
        }
    } else {
        // item 15: b15 M_ij ^ H
        let (i, j) = params.ij;
        if i == j || i < 1 || j < 1 || i > dim || j > dim {
            return Err(RMatrixError::BadPlaneIndices { i, j });
        }
        let (rot, orient) = Generator::rotation(i, j).expect("i != j");
        let c = params
            .scalar(twist)?
            .scale(&GaussianRational::from_int(orient));
        if !c.is_zero() {
            RMatrix::push_wedge(&mut raw, c, rot, Generator::H);
        }
    }
    Ok(RMatrix::from_terms(raw))
}

/// The parameter symbols a symbolic catalog item introduces.
pub fn twist_symbols(twist: u8, dim: u8, params: &TwistParams) -> BTreeSet<Param> {
    match rmatrix_catalog(twist, dim, params) {
        Ok(r) => {
            let mut out = BTreeSet::new();
            for (c, _, _) in r.terms() {
                out.extend(c.params());
            }
            out
        }
        Err(_) => BTreeSet::new(),
    }
}

/// Schouten bracket `[[r, r]] = [r_12, r_13] + [r_12, r_23] + [r_13, r_23]`
/// computed with the Lie bracket in the shared slot of U(g)^(x)3.
pub fn schouten_bracket(r: &RMatrix, alg: &LieAlgebra) -> Tensor3 {
    let mut total = Tensor3::zero();
    for (c1, a1, b1) in r.terms() {
        for (c2, a2, b2) in r.terms() {
            let coeff = c1.mul_ref(c2);
            // [r_12, r_13] = [a1, a2] (x) b1 (x) b2
            total.add_assign(&slot_bracket(
                alg,
                &alg.bracket(*a1, *a2),
                *b1,
                *b2,
                0,
                &coeff,
            ));
            // [r_12, r_23] = a1 (x) [b1, a2] (x) b2
            total.add_assign(&slot_bracket(
                alg,
                &alg.bracket(*b1, *a2),
                *a1,
                *b2,
                1,
                &coeff,
            ));
            // [r_13, r_23] = a1 (x) a2 (x) [b1, b2]
            total.add_assign(&slot_bracket(
                alg,
                &alg.bracket(*b1, *b2),
                *a1,
                *a2,
                2,
                &coeff,
            ));
        }
    }
    total
}

fn slot_bracket(
    _alg: &LieAlgebra,
    bracket: &LinComb,
    other1: Generator,
    other2: Generator,
    slot: usize,
    coeff: &Expr,
) -> Tensor3 {
    let mut out = Tensor3::zero();
    for (g, c) in bracket.iter() {
        let mut key: [PbwMonomial; 3] = [
            PbwMonomial::generator(other1),
            PbwMonomial::generator(other2),
            PbwMonomial::unit(),
        ];
        // place the bracket result in `slot`, others keep their order
        key = match slot {
            0 => [PbwMonomial::generator(*g), key[0].clone(), key[1].clone()],
            1 => [key[0].clone(), PbwMonomial::generator(*g), key[1].clone()],
            _ => [key[0].clone(), key[1].clone(), PbwMonomial::generator(*g)],
        };
        out.add_assign(&Tensor3::term(key, coeff.mul_ref(c)));
    }
    out
}

/// Classical Yang-Baxter equation: `[[r, r]] == 0`.
pub fn verify_cybe(r: &RMatrix, alg: &LieAlgebra) -> bool {
    schouten_bracket(r, alg).is_zero()
}
