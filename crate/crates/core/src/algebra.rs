//! Kinematical Lie algebras as exact structure-constant tables.
//!
//! Generators are rotations `M_ij` (stored with `i < j`), boosts `K_i`,
//! spatial translations `P_i`, accelerations `F_i`, the cubic generators
//! `R_i`, and the time translation `H`. The built-in families are the doubly
//! enlarged Newton-Hooke algebras NH+/NH- (distinguished by the sign of
//! `[H, P_i] = +/- (i/tau^2) K_i`) and their Galilei contraction with
//! `[H, P_i] = 0`. Custom tables can be loaded from a text file; see
//! [`crate::parse::parse_algebra_file`].

use crate::expr::Expr;
use crate::scalar::GaussianRational;
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

/// Abstract generator. The derived order `P < K < F < R < M < H` is also the
/// PBW normal order used by the enveloping algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Generator {
    P(u8),
    K(u8),
    F(u8),
    R(u8),
    /// Rotation `M_ij` with `i < j`; `M_ji` resolves to `-M_ij` at parse time.
    M(u8, u8),
    H,
}

impl Generator {
    /// Canonicalizes a rotation index pair: `None` for `i == j`, otherwise
    /// the stored generator together with the orientation sign.
    pub fn rotation(i: u8, j: u8) -> Option<(Generator, i64)> {
        match i.cmp(&j) {
            std::cmp::Ordering::Equal => None,
            std::cmp::Ordering::Less => Some((Generator::M(i, j), 1)),
            std::cmp::Ordering::Greater => Some((Generator::M(j, i), -1)),
        }
    }

    pub fn max_index(&self) -> u8 {
        match self {
            Generator::P(i) | Generator::K(i) | Generator::F(i) | Generator::R(i) => *i,
            Generator::M(i, j) => (*i).max(*j),
            Generator::H => 0,
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::P(i) => write!(f, "P{i}"),
            Generator::K(i) => write!(f, "K{i}"),
            Generator::F(i) => write!(f, "F{i}"),
            Generator::R(i) => write!(f, "R{i}"),
            Generator::M(i, j) => write!(f, "M{i}{j}"),
            Generator::H => write!(f, "H"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Signature {
    NHPlus,
    NHMinus,
    Galilei,
}

impl Signature {
    /// The sign `s` in `[H, P_i] = s (i/tau^2) K_i`; zero branch for Galilei.
    pub fn sign(&self) -> i64 {
        match self {
            Signature::NHPlus => 1,
            Signature::NHMinus => -1,
            Signature::Galilei => 0,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Signature::NHPlus => "nh+",
            Signature::NHMinus => "nh-",
            Signature::Galilei => "galilei",
        }
    }

    pub fn parse(s: &str) -> Option<Signature> {
        match s {
            "nh+" | "NH+" | "nhplus" => Some(Signature::NHPlus),
            "nh-" | "NH-" | "nhminus" => Some(Signature::NHMinus),
            "galilei" | "Galilei" | "g" => Some(Signature::Galilei),
            _ => None,
        }
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_str())
    }
}

/// Sparse linear combination of generators with expression coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LinComb(BTreeMap<Generator, Expr>);

impl LinComb {
    pub fn zero() -> LinComb {
        LinComb::default()
    }

    pub fn term(g: Generator, c: Expr) -> LinComb {
        let mut map = BTreeMap::new();
        if !c.is_zero() {
            map.insert(g, c);
        }
        LinComb(map)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Generator, &Expr)> {
        self.0.iter()
    }

    pub fn add(&self, rhs: &LinComb) -> LinComb {
        let mut map = self.0.clone();
        for (g, c) in &rhs.0 {
            let entry = map.entry(*g).or_insert_with(Expr::zero);
            *entry = entry.add_ref(c);
        }
        map.retain(|_, c| !c.is_zero());
        LinComb(map)
    }

    pub fn neg(&self) -> LinComb {
        LinComb(self.0.iter().map(|(g, c)| (*g, c.neg_ref())).collect())
    }

    pub fn scale(&self, factor: &Expr) -> LinComb {
        if factor.is_zero() {
            return LinComb::zero();
        }
        LinComb(
            self.0
                .iter()
                .map(|(g, c)| (*g, c.mul_ref(factor)))
                .collect(),
        )
    }
}

impl fmt::Display for LinComb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(g, c)| format!("({})*{}", c, g))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("invalid spatial dimension {0}; need d >= 1")]
    InvalidDimension(u8),
    #[error("generator {0} does not fit dimension {1}")]
    GeneratorOutOfRange(String, u8),
    #[error("algebra file parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// A Lie algebra given by its generator list and antisymmetric bracket table.
/// Coefficients are restricted to rationals, `i` and powers of `tau`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebra {
    pub name: String,
    pub dim: u8,
    pub signature: Option<Signature>,
    generators: Vec<Generator>,
    /// canonical pairs `(a, b)` with `a < b`, value `[a, b]`
    brackets: BTreeMap<(Generator, Generator), LinComb>,
}

impl LieAlgebra {
    /// Builds the doubly enlarged NH+/NH- algebra or its Galilei contraction.
    pub fn build(signature: Signature, dim: u8) -> Result<LieAlgebra, AlgebraError> {
        if dim == 0 {
            return Err(AlgebraError::InvalidDimension(dim));
        }
        let mut generators = Vec::new();
        for i in 1..=dim {
            generators.push(Generator::P(i));
        }
        for i in 1..=dim {
            generators.push(Generator::K(i));
        }
        for i in 1..=dim {
            generators.push(Generator::F(i));
        }
        for i in 1..=dim {
            generators.push(Generator::R(i));
        }
        for i in 1..=dim {
            for j in (i + 1)..=dim {
                generators.push(Generator::M(i, j));
            }
        }
        generators.push(Generator::H);
        generators.sort();

        let mut alg = LieAlgebra {
            name: format!("doubly-enlarged-{}", signature.as_str()),
            dim,
            signature: Some(signature),
            generators,
            brackets: BTreeMap::new(),
        };

        let i_unit = Expr::i();

        // [M_ij, M_kl] = i(d_il M_jk - d_jl M_ik + d_jk M_il - d_ik M_jl)
        for i in 1..=dim {
            for j in (i + 1)..=dim {
                for k in 1..=dim {
                    for l in (k + 1)..=dim {
                        let mut value = LinComb::zero();
                        let contributions: [(u8, u8, u8, u8, i64); 4] = [
                            (i, l, j, k, 1),
                            (j, l, i, k, -1),
                            (j, k, i, l, 1),
                            (i, k, j, l, -1),
                        ];
                        for (d1, d2, a, b, sgn) in contributions {
                            if d1 != d2 {
                                continue;
                            }
                            if let Some((g, orient)) = Generator::rotation(a, b) {
                                let coeff = i_unit.scale(&GaussianRational::from_int(sgn * orient));
                                value = value.add(&LinComb::term(g, coeff));
                            }
                        }
                        alg.set_bracket(Generator::M(i, j), Generator::M(k, l), value);
                    }
                }
            }
        }

        // rotations act vectorially: [M_ij, V_k] = i(d_jk V_i - d_ik V_j)
        type VecCtor = fn(u8) -> Generator;
        let vector_kinds: [VecCtor; 4] = [
            Generator::K as VecCtor,
            Generator::P,
            Generator::F,
            Generator::R,
        ];
        for ctor in vector_kinds {
            for i in 1..=dim {
                for j in (i + 1)..=dim {
                    for k in 1..=dim {
                        let mut value = LinComb::zero();
                        if j == k {
                            value = value.add(&LinComb::term(ctor(i), i_unit.clone()));
                        }
                        if i == k {
                            value = value.add(&LinComb::term(
                                ctor(j),
                                i_unit.scale(&GaussianRational::from_int(-1)),
                            ));
                        }
                        alg.set_bracket(Generator::M(i, j), ctor(k), value);
                    }
                }
            }
        }

        for i in 1..=dim {
            // [K_i, H] = -i P_i
            alg.set_bracket(
                Generator::K(i),
                Generator::H,
                LinComb::term(Generator::P(i), i_unit.neg_ref()),
            );
            // [H, F_i] = 2i K_i
            alg.set_bracket(
                Generator::H,
                Generator::F(i),
                LinComb::term(
                    Generator::K(i),
                    i_unit.scale(&GaussianRational::from_int(2)),
                ),
            );
            // [H, R_i] = 3i F_i
            alg.set_bracket(
                Generator::H,
                Generator::R(i),
                LinComb::term(
                    Generator::F(i),
                    i_unit.scale(&GaussianRational::from_int(3)),
                ),
            );
            // [H, P_i] = +/- (i/tau^2) K_i, zero for Galilei
            let s = signature.sign();
            let value = if s == 0 {
                LinComb::zero()
            } else {
                LinComb::term(
                    Generator::K(i),
                    i_unit
                        .mul_ref(&Expr::tau(-2))
                        .scale(&GaussianRational::from_int(s)),
                )
            };
            alg.set_bracket(Generator::H, Generator::P(i), value);
        }

        Ok(alg)
    }

    /// An empty bracket table over an explicit generator set; used by the
    /// algebra-file loader and fault-injection tests.
    pub fn custom(name: &str, dim: u8, mut generators: Vec<Generator>) -> LieAlgebra {
        generators.sort();
        generators.dedup();
        LieAlgebra {
            name: name.to_string(),
            dim,
            signature: None,
            generators,
            brackets: BTreeMap::new(),
        }
    }

    /// Stores `[a, b] = value` regardless of the orientation the caller used.
    fn set_bracket(&mut self, a: Generator, b: Generator, value: LinComb) {
        if value.is_zero() {
            return;
        }
        if a < b {
            self.brackets.insert((a, b), value);
        } else {
            self.brackets.insert((b, a), value.neg());
        }
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn contains(&self, g: &Generator) -> bool {
        self.generators.contains(g)
    }

    /// The bracket `[a, b]`, resolved through antisymmetry.
    pub fn bracket(&self, a: Generator, b: Generator) -> LinComb {
        if a == b {
            return LinComb::zero();
        }
        if a < b {
            self.brackets.get(&(a, b)).cloned().unwrap_or_default()
        } else {
            self.brackets
                .get(&(b, a))
                .map(LinComb::neg)
                .unwrap_or_default()
        }
    }

    pub fn bracket_gen_lin(&self, a: Generator, rhs: &LinComb) -> LinComb {
        let mut out = LinComb::zero();
        for (g, c) in rhs.iter() {
            out = out.add(&self.bracket(a, *g).scale(c));
        }
        out
    }

    pub fn bracket_lin(&self, lhs: &LinComb, rhs: &LinComb) -> LinComb {
        let mut out = LinComb::zero();
        for (a, ca) in lhs.iter() {
            out = out.add(&self.bracket_gen_lin(*a, rhs).scale(ca));
        }
        out
    }

    /// Direct write access for fault-injection tests and file loading.
    pub fn override_bracket(&mut self, a: Generator, b: Generator, value: LinComb) {
        if a < b {
            self.brackets.remove(&(a, b));
        } else {
            self.brackets.remove(&(b, a));
        }
        self.set_bracket(a, b, value);
    }

    /// Iterates the stored canonical pairs.
    pub fn bracket_table(&self) -> impl Iterator<Item = (&(Generator, Generator), &LinComb)> {
        self.brackets.iter()
    }

    /// Checks the Jacobi identity over every ordered generator triple.
    /// Returns the violating triples with their residuals (empty = pass).
    pub fn verify_jacobi(&self) -> Vec<JacobiViolation> {
        let mut violations = Vec::new();
        for &a in &self.generators {
            for &b in &self.generators {
                for &c in &self.generators {
                    let r1 = self.bracket_gen_lin(a, &self.bracket(b, c));
                    let r2 = self.bracket_gen_lin(b, &self.bracket(c, a));
                    let r3 = self.bracket_gen_lin(c, &self.bracket(a, b));
                    let residual = r1.add(&r2).add(&r3);
                    if !residual.is_zero() {
                        violations.push(JacobiViolation {
                            triple: (a, b, c),
                            residual: residual.to_string(),
                        });
                    }
                }
            }
        }
        violations
    }

    /// Exhaustive antisymmetry check of the stored table.
    pub fn verify_antisymmetry(&self) -> bool {
        self.generators.iter().all(|&a| {
            self.generators
                .iter()
                .all(|&b| self.bracket(a, b).add(&self.bracket(b, a)).is_zero())
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JacobiViolation {
    pub triple: (Generator, Generator, Generator),
    pub residual: String,
}

impl fmt::Display for JacobiViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b, c) = self.triple;
        write!(f, "jacobi({a}, {b}, {c}) = {}", self.residual)
    }
}
