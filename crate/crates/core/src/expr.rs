//! Canonical-form symbolic expressions over Gaussian rationals.
//!
//! An [`Expr`] is a finite sum of [`Monomial`]s. Each monomial carries an
//! exact coefficient, an integer power of the distinguished parameter `tau`
//! (the only symbol allowed a negative exponent), and non-negative powers of
//! [`Atom`]s: the time coordinate `t`, spatial coordinates `x_i`, formal
//! deformation parameters, and the four transcendental atoms `C+`, `C-`,
//! `S+`, `S-` which always denote the corresponding function evaluated at
//! `t/tau` (`cosh`, `cos`, `sinh`, `sin`).
//!
//! Canonical form: like terms merged, zero coefficients dropped, terms sorted
//! by the fixed total order on (power map, tau power), where atoms compare by
//! declaration order `t < x_i < C+ < C- < S+ < S- < parameters` and parameters
//! by (kind, twist id, indices, name). Equality of canonical forms is
//! syntactic. No Pythagorean rewriting (`C+^2 - S+^2 = 1` etc.) is applied.

use crate::scalar::{rational_to_f64, GaussianRational};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use thiserror::Error;

/// Formal deformation parameters and other named symbols.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Param {
    /// Component `beta_twist^{kl}` of an antisymmetric parameter array,
    /// stored with `k < l`; the `l < k` component is the negation.
    Beta { twist: u8, k: u8, l: u8 },
    /// Scalar parameter `beta_twist` of a fixed-index twist.
    BetaScalar { twist: u8 },
    /// Free named symbol (transformation parameters, custom algebras).
    Named(String),
}

impl Param {
    pub fn named(s: &str) -> Self {
        Param::Named(s.to_string())
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Param::Beta { twist, k, l } => write!(f, "beta{twist}_{k}{l}"),
            Param::BetaScalar { twist } => write!(f, "beta{twist}"),
            Param::Named(s) => write!(f, "{s}"),
        }
    }
}

/// An indeterminate of the expression ring (other than `tau`).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    /// Time coordinate `t`.
    T,
    /// Spatial coordinate `x_i`, 1-based index.
    X(u8),
    /// `cosh(t/tau)`
    CPlus,
    /// `cos(t/tau)`
    CMinus,
    /// `sinh(t/tau)`
    SPlus,
    /// `sin(t/tau)`
    SMinus,
    Param(Param),
}

impl Atom {
    pub fn is_transcendental(&self) -> bool {
        matches!(
            self,
            Atom::CPlus | Atom::CMinus | Atom::SPlus | Atom::SMinus
        )
    }

    pub fn is_coordinate(&self) -> bool {
        matches!(self, Atom::T | Atom::X(_))
    }
}

pub type PowerMap = BTreeMap<Atom, u32>;

/// One canonical term: `coeff * tau^tau_power * prod(atom^power)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Monomial {
    pub coeff: GaussianRational,
    pub tau_power: i32,
    pub powers: PowerMap,
}

impl Monomial {
    fn key(&self) -> (PowerMap, i32) {
        (self.powers.clone(), self.tau_power)
    }

    fn x_degree(&self) -> u32 {
        self.powers
            .iter()
            .map(|(a, p)| if matches!(a, Atom::X(_)) { *p } else { 0 })
            .sum()
    }

    fn t_degree(&self) -> u32 {
        self.powers.get(&Atom::T).copied().unwrap_or(0)
    }

    fn has_cs(&self) -> bool {
        self.powers.keys().any(Atom::is_transcendental)
    }
}

/// Canonical exact symbolic expression; see module docs for the invariants.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Expr {
    terms: Vec<Monomial>,
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum ExprError {
    #[error("spatial index {index} out of range 1..={dim}")]
    SpatialIndexOutOfRange { index: u8, dim: u8 },
    #[error("unbound atom in numeric evaluation: {0}")]
    UnboundAtom(String),
    #[error("tau -> infinity limit diverges: term with positive net tau power {0}")]
    DivergentLimit(String),
    #[error("tau -> infinity limit undecided: required expansion order {required} exceeds bound {bound}")]
    UndecidedOrder { required: u32, bound: u32 },
}

/// Expansion-order bound used by [`Expr::limit_tau_inf`].
pub const LIMIT_EXPANSION_BOUND: u32 = 16;

impl Expr {
    // ---- constructors ----

    pub fn zero() -> Expr {
        Expr { terms: Vec::new() }
    }

    pub fn one() -> Expr {
        Expr::scalar(GaussianRational::one())
    }

    pub fn i() -> Expr {
        Expr::scalar(GaussianRational::i())
    }

    pub fn int(n: i64) -> Expr {
        Expr::scalar(GaussianRational::from_int(n))
    }

    pub fn ratio(p: i64, q: i64) -> Expr {
        Expr::scalar(GaussianRational::from_ratio(p, q))
    }

    pub fn scalar(c: GaussianRational) -> Expr {
        if c.is_zero() {
            return Expr::zero();
        }
        Expr {
            terms: vec![Monomial {
                coeff: c,
                tau_power: 0,
                powers: BTreeMap::new(),
            }],
        }
    }

    pub fn atom(a: Atom) -> Expr {
        let mut powers = BTreeMap::new();
        powers.insert(a, 1);
        Expr {
            terms: vec![Monomial {
                coeff: GaussianRational::one(),
                tau_power: 0,
                powers,
            }],
        }
    }

    pub fn t() -> Expr {
        Expr::atom(Atom::T)
    }

    pub fn x(i: u8) -> Expr {
        Expr::atom(Atom::X(i))
    }

    pub fn param(p: Param) -> Expr {
        Expr::atom(Atom::Param(p))
    }

    /// `tau^n` with any integer `n`.
    pub fn tau(n: i32) -> Expr {
        Expr {
            terms: vec![Monomial {
                coeff: GaussianRational::one(),
                tau_power: n,
                powers: BTreeMap::new(),
            }],
        }
    }

    pub(crate) fn from_accumulator(map: BTreeMap<(PowerMap, i32), GaussianRational>) -> Expr {
        let terms = map
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|((powers, tau_power), coeff)| Monomial {
                coeff,
                tau_power,
                powers,
            })
            .collect();
        Expr { terms }
    }

    pub fn terms(&self) -> &[Monomial] {
        &self.terms
    }

    // ---- ring operations ----

    pub fn add_ref(&self, rhs: &Expr) -> Expr {
        let mut acc: BTreeMap<(PowerMap, i32), GaussianRational> = BTreeMap::new();
        for m in self.terms.iter().chain(rhs.terms.iter()) {
            let entry = acc.entry(m.key()).or_insert_with(GaussianRational::zero);
            *entry = &*entry + &m.coeff;
        }
        Expr::from_accumulator(acc)
    }

    pub fn neg_ref(&self) -> Expr {
        Expr {
            terms: self
                .terms
                .iter()
                .map(|m| Monomial {
                    coeff: -&m.coeff,
                    tau_power: m.tau_power,
                    powers: m.powers.clone(),
                })
                .collect(),
        }
    }

    pub fn sub_ref(&self, rhs: &Expr) -> Expr {
        self.add_ref(&rhs.neg_ref())
    }

    pub fn mul_ref(&self, rhs: &Expr) -> Expr {
        let mut acc: BTreeMap<(PowerMap, i32), GaussianRational> = BTreeMap::new();
        for a in &self.terms {
            for b in &rhs.terms {
                let mut powers = a.powers.clone();
                for (atom, p) in &b.powers {
                    *powers.entry(atom.clone()).or_insert(0) += p;
                }
                let key = (powers, a.tau_power + b.tau_power);
                let coeff = &a.coeff * &b.coeff;
                let entry = acc.entry(key).or_insert_with(GaussianRational::zero);
                *entry = &*entry + &coeff;
            }
        }
        Expr::from_accumulator(acc)
    }

    pub fn scale(&self, c: &GaussianRational) -> Expr {
        if c.is_zero() {
            return Expr::zero();
        }
        Expr {
            terms: self
                .terms
                .iter()
                .map(|m| Monomial {
                    coeff: &m.coeff * c,
                    tau_power: m.tau_power,
                    powers: m.powers.clone(),
                })
                .collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Expr {
        let mut acc = Expr::one();
        for _ in 0..n {
            acc = acc.mul_ref(self);
        }
        acc
    }

    // ---- queries ----

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self.terms[0].coeff.is_one()
            && self.terms[0].tau_power == 0
            && self.terms[0].powers.is_empty()
    }

    /// Constant content if the expression is a pure scalar.
    pub fn as_scalar(&self) -> Option<GaussianRational> {
        if self.is_zero() {
            return Some(GaussianRational::zero());
        }
        if self.terms.len() == 1 && self.terms[0].tau_power == 0 && self.terms[0].powers.is_empty()
        {
            return Some(self.terms[0].coeff.clone());
        }
        None
    }

    /// Maximal total degree in the spatial coordinates.
    pub fn x_degree(&self) -> u32 {
        self.terms.iter().map(Monomial::x_degree).max().unwrap_or(0)
    }

    /// Maximal power of the time coordinate `t`.
    pub fn t_degree(&self) -> u32 {
        self.terms.iter().map(Monomial::t_degree).max().unwrap_or(0)
    }

    /// Maximal total degree in all coordinates (`t` and `x_i`).
    pub fn coordinate_degree(&self) -> u32 {
        self.terms
            .iter()
            .map(|m| m.x_degree() + m.t_degree())
            .max()
            .unwrap_or(0)
    }

    pub fn has_transcendental(&self) -> bool {
        self.terms.iter().any(Monomial::has_cs)
    }

    pub fn max_tau_power(&self) -> Option<i32> {
        self.terms.iter().map(|m| m.tau_power).max()
    }

    pub fn params(&self) -> BTreeSet<Param> {
        let mut out = BTreeSet::new();
        for m in &self.terms {
            for a in m.powers.keys() {
                if let Atom::Param(p) = a {
                    out.insert(p.clone());
                }
            }
        }
        out
    }

    /// Total power of the given parameters in each term, maximised.
    pub fn param_degree(&self, params: &BTreeSet<Param>) -> u32 {
        self.terms
            .iter()
            .map(|m| {
                m.powers
                    .iter()
                    .map(|(a, p)| match a {
                        Atom::Param(q) if params.contains(q) => *p,
                        _ => 0,
                    })
                    .sum()
            })
            .max()
            .unwrap_or(0)
    }

    /// Splits off the part exactly linear in `p` (with the `p` factor removed)
    /// and reports whether any term of higher degree in `p` exists.
    pub fn linear_part_in(&self, p: &Param) -> (Expr, bool) {
        let atom = Atom::Param(p.clone());
        let mut acc: BTreeMap<(PowerMap, i32), GaussianRational> = BTreeMap::new();
        let mut higher = false;
        for m in &self.terms {
            match m.powers.get(&atom).copied().unwrap_or(0) {
                0 => {}
                1 => {
                    let mut powers = m.powers.clone();
                    powers.remove(&atom);
                    let entry = acc
                        .entry((powers, m.tau_power))
                        .or_insert_with(GaussianRational::zero);
                    *entry = &*entry + &m.coeff;
                }
                _ => higher = true,
            }
        }
        (Expr::from_accumulator(acc), higher)
    }

    // ---- calculus ----

    /// Time derivative. `d/dt t = 1`, `d/dt C± = ±S±/tau`, `d/dt S± = C±/tau`,
    /// coordinates `x_i` and parameters are constant.
    pub fn diff_t(&self) -> Expr {
        let mut acc: BTreeMap<(PowerMap, i32), GaussianRational> = BTreeMap::new();
        for m in &self.terms {
            for (atom, power) in &m.powers {
                let deriv: Option<(Option<Atom>, i32, GaussianRational)> = match atom {
                    Atom::T => Some((None, 0, GaussianRational::one())),
                    Atom::CPlus => Some((Some(Atom::SPlus), -1, GaussianRational::one())),
                    Atom::CMinus => Some((Some(Atom::SMinus), -1, GaussianRational::from_int(-1))),
                    Atom::SPlus => Some((Some(Atom::CPlus), -1, GaussianRational::one())),
                    Atom::SMinus => Some((Some(Atom::CMinus), -1, GaussianRational::one())),
                    _ => None,
                };
                let Some((new_atom, tau_shift, factor)) = deriv else {
                    continue;
                };
                let mut powers = m.powers.clone();
                let p = *power;
                if p == 1 {
                    powers.remove(atom);
                } else {
                    powers.insert(atom.clone(), p - 1);
                }
                if let Some(a) = new_atom {
                    *powers.entry(a).or_insert(0) += 1;
                }
                let coeff = &(&m.coeff * &factor) * &GaussianRational::from_int(p as i64);
                let key = (powers, m.tau_power + tau_shift);
                let entry = acc.entry(key).or_insert_with(GaussianRational::zero);
                *entry = &*entry + &coeff;
            }
        }
        Expr::from_accumulator(acc)
    }

    /// Spatial derivative with index validation against the dimension.
    pub fn diff_x(&self, i: u8, dim: u8) -> Result<Expr, ExprError> {
        if i == 0 || i > dim {
            return Err(ExprError::SpatialIndexOutOfRange { index: i, dim });
        }
        Ok(self.diff_x_unchecked(i))
    }

    pub(crate) fn diff_x_unchecked(&self, i: u8) -> Expr {
        let atom = Atom::X(i);
        let mut acc: BTreeMap<(PowerMap, i32), GaussianRational> = BTreeMap::new();
        for m in &self.terms {
            let Some(&p) = m.powers.get(&atom) else {
                continue;
            };
            let mut powers = m.powers.clone();
            if p == 1 {
                powers.remove(&atom);
            } else {
                powers.insert(atom.clone(), p - 1);
            }
            let coeff = &m.coeff * &GaussianRational::from_int(p as i64);
            let entry = acc
                .entry((powers, m.tau_power))
                .or_insert_with(GaussianRational::zero);
            *entry = &*entry + &coeff;
        }
        Expr::from_accumulator(acc)
    }

    // ---- series and limits ----

    /// Replaces every transcendental atom by its Taylor series in `t/tau`
    /// truncated at total order `order`, then expands. The result agrees
    /// with `self` numerically up to `O(tau^-(order+1))`.
    pub fn taylor_atoms(&self, order: u32) -> Expr {
        let series = AtomSeries::new(order);
        let mut out = Expr::zero();
        for m in &self.terms {
            let mut factor = Expr::tau(m.tau_power).scale(&m.coeff);
            for (atom, p) in &m.powers {
                let sub = if atom.is_transcendental() {
                    series.get(atom).pow(*p)
                } else {
                    Expr::atom(atom.clone()).pow(*p)
                };
                factor = factor.mul_ref(&sub);
            }
            out = out.add_ref(&factor);
        }
        out
    }

    /// The `tau -> infinity` limit.
    ///
    /// Transcendental atoms are expanded to an order sufficient to decide the
    /// net tau power of every generated monomial (one order past the largest
    /// explicit tau power; omitted series tails only produce strictly negative
    /// powers). Terms with negative net power vanish, the `tau^0` part is
    /// returned, and any surviving positive power is reported as divergence.
    pub fn limit_tau_inf(&self) -> Result<Expr, ExprError> {
        self.limit_tau_inf_with_bound(LIMIT_EXPANSION_BOUND)
    }

    pub fn limit_tau_inf_with_bound(&self, bound: u32) -> Result<Expr, ExprError> {
        if self.is_zero() {
            return Ok(Expr::zero());
        }
        let max_power = self
            .terms
            .iter()
            .map(|m| m.tau_power.max(0))
            .max()
            .unwrap_or(0) as u32;
        let required = max_power + 1;
        if required > bound {
            return Err(ExprError::UndecidedOrder { required, bound });
        }
        let expanded = self.taylor_atoms(required);
        let mut kept = Vec::new();
        for m in &expanded.terms {
            match m.tau_power.cmp(&0) {
                std::cmp::Ordering::Greater => {
                    return Err(ExprError::DivergentLimit(format!(
                        "{}",
                        Expr {
                            terms: vec![m.clone()]
                        }
                    )));
                }
                std::cmp::Ordering::Equal => kept.push(m.clone()),
                std::cmp::Ordering::Less => {}
            }
        }
        Ok(Expr { terms: kept })
    }

    // ---- numeric evaluation ----

    pub fn eval_numeric(&self, b: &NumericBindings) -> Result<Complex64, ExprError> {
        let u = b.t / b.tau;
        let mut total = Complex64::new(0.0, 0.0);
        for m in &self.terms {
            let mut v = m.coeff.to_complex();
            v *= Complex64::new(b.tau.powi(m.tau_power), 0.0);
            for (atom, p) in &m.powers {
                let base = match atom {
                    Atom::T => b.t,
                    Atom::X(i) => {
                        let idx = *i as usize;
                        if idx == 0 || idx > b.x.len() {
                            return Err(ExprError::UnboundAtom(format!("x{i}")));
                        }
                        b.x[idx - 1]
                    }
                    Atom::CPlus => u.cosh(),
                    Atom::CMinus => u.cos(),
                    Atom::SPlus => u.sinh(),
                    Atom::SMinus => u.sin(),
                    Atom::Param(q) => *b
                        .params
                        .get(q)
                        .ok_or_else(|| ExprError::UnboundAtom(q.to_string()))?,
                };
                v *= Complex64::new(base.powi(*p as i32), 0.0);
            }
            total += v;
        }
        Ok(total)
    }
}

/// Cached truncated series for the four transcendental atoms.
struct AtomSeries {
    cplus: Expr,
    cminus: Expr,
    splus: Expr,
    sminus: Expr,
}

impl AtomSeries {
    fn new(order: u32) -> Self {
        AtomSeries {
            cplus: cosine_like(order, false),
            cminus: cosine_like(order, true),
            splus: sine_like(order, false),
            sminus: sine_like(order, true),
        }
    }

    fn get(&self, atom: &Atom) -> &Expr {
        match atom {
            Atom::CPlus => &self.cplus,
            Atom::CMinus => &self.cminus,
            Atom::SPlus => &self.splus,
            Atom::SMinus => &self.sminus,
            _ => unreachable!("not a transcendental atom"),
        }
    }
}

fn factorial(n: u32) -> BigInt {
    let mut acc = BigInt::from(1);
    for k in 2..=n {
        acc *= BigInt::from(k);
    }
    acc
}

/// `sum_k s^k (t/tau)^{2k} / (2k)!` truncated at total order `order`;
/// `alternating` selects `s = -1` (cos) over `s = +1` (cosh).
fn cosine_like(order: u32, alternating: bool) -> Expr {
    let mut terms = Vec::new();
    let mut k = 0;
    while 2 * k <= order {
        let mut num = BigInt::from(1);
        if alternating && k % 2 == 1 {
            num = -num;
        }
        let coeff =
            GaussianRational::new(BigRational::new(num, factorial(2 * k)), BigRational::zero());
        let mut powers = BTreeMap::new();
        if k > 0 {
            powers.insert(Atom::T, 2 * k);
        }
        terms.push(Monomial {
            coeff,
            tau_power: -(2 * k as i32),
            powers,
        });
        k += 1;
    }
    normalize_terms(terms)
}

fn sine_like(order: u32, alternating: bool) -> Expr {
    let mut terms = Vec::new();
    let mut k = 0;
    while 2 * k < order {
        let mut num = BigInt::from(1);
        if alternating && k % 2 == 1 {
            num = -num;
        }
        let coeff = GaussianRational::new(
            BigRational::new(num, factorial(2 * k + 1)),
            BigRational::zero(),
        );
        let mut powers = BTreeMap::new();
        powers.insert(Atom::T, 2 * k + 1);
        terms.push(Monomial {
            coeff,
            tau_power: -(2 * k as i32 + 1),
            powers,
        });
        k += 1;
    }
    normalize_terms(terms)
}

fn normalize_terms(terms: Vec<Monomial>) -> Expr {
    let mut acc: BTreeMap<(PowerMap, i32), GaussianRational> = BTreeMap::new();
    for m in terms {
        let entry = acc.entry(m.key()).or_insert_with(GaussianRational::zero);
        *entry = &*entry + &m.coeff;
    }
    Expr::from_accumulator(acc)
}

/// Bindings for numeric evaluation. `x[0]` binds `x_1`.
pub struct NumericBindings<'a> {
    pub t: f64,
    pub x: &'a [f64],
    pub tau: f64,
    pub params: &'a BTreeMap<Param, f64>,
}

// ---- raw expression trees ----

/// Raw expression tree: the input grammar of [`normalize`]. Sums, products
/// and non-negative integer powers of atoms and scalars, plus signed powers
/// of `tau` (the only division the grammar admits).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExprTree {
    Scalar(GaussianRational),
    Atom(Atom),
    TauPow(i32),
    Sum(Vec<ExprTree>),
    Product(Vec<ExprTree>),
    Pow(Box<ExprTree>, u32),
    Neg(Box<ExprTree>),
}

/// Evaluates a raw tree into canonical form. Total on the tree grammar;
/// `normalize` of an already-canonical expression is the identity.
pub fn normalize(tree: &ExprTree) -> Expr {
    match tree {
        ExprTree::Scalar(c) => Expr::scalar(c.clone()),
        ExprTree::Atom(a) => Expr::atom(a.clone()),
        ExprTree::TauPow(n) => Expr::tau(*n),
        ExprTree::Sum(items) => items
            .iter()
            .fold(Expr::zero(), |acc, it| acc.add_ref(&normalize(it))),
        ExprTree::Product(items) => items
            .iter()
            .fold(Expr::one(), |acc, it| acc.mul_ref(&normalize(it))),
        ExprTree::Pow(base, n) => normalize(base).pow(*n),
        ExprTree::Neg(sub) => normalize(sub).neg_ref(),
    }
}

impl Expr {
    /// Re-embeds the canonical form into the tree grammar.
    pub fn to_tree(&self) -> ExprTree {
        let mut terms = Vec::new();
        for m in &self.terms {
            let mut factors = vec![ExprTree::Scalar(m.coeff.clone())];
            if m.tau_power != 0 {
                factors.push(ExprTree::TauPow(m.tau_power));
            }
            for (atom, p) in &m.powers {
                factors.push(ExprTree::Pow(Box::new(ExprTree::Atom(atom.clone())), *p));
            }
            terms.push(ExprTree::Product(factors));
        }
        ExprTree::Sum(terms)
    }
}

// ---- operator sugar ----

impl Add for &Expr {
    type Output = Expr;
    fn add(self, rhs: &Expr) -> Expr {
        self.add_ref(rhs)
    }
}

impl Sub for &Expr {
    type Output = Expr;
    fn sub(self, rhs: &Expr) -> Expr {
        self.sub_ref(rhs)
    }
}

impl Mul for &Expr {
    type Output = Expr;
    fn mul(self, rhs: &Expr) -> Expr {
        self.mul_ref(rhs)
    }
}

impl Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        self.neg_ref()
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::render::plain(self))
    }
}

// Keep num's Signed in scope for coefficient sign queries in render.
pub(crate) fn rational_is_negative(r: &BigRational) -> bool {
    r.is_negative()
}

pub(crate) fn f64_of(r: &BigRational) -> f64 {
    rational_to_f64(r)
}
