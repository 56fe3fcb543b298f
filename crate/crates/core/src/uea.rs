//! Universal enveloping algebra in the PBW basis, plus tensor powers.
//!
//! A PBW monomial is a normal-ordered power product of generators under the
//! fixed order `P < K < F < R < M < H`. Multiplication repeatedly swaps
//! adjacent out-of-order factors via `x y = y x + [x, y]`, which terminates
//! because each rewrite either lowers the degree or removes an inversion.

use crate::algebra::{Generator, LieAlgebra, LinComb};
use crate::expr::Expr;
use crate::scalar::GaussianRational;
use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

/// Normal-ordered generator power product; factors sorted, exponents > 0.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct PbwMonomial(Vec<(Generator, u32)>);

impl PbwMonomial {
    pub fn unit() -> Self {
        PbwMonomial::default()
    }

    pub fn generator(g: Generator) -> Self {
        PbwMonomial(vec![(g, 1)])
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, p)| p).sum()
    }

    pub fn factors(&self) -> &[(Generator, u32)] {
        &self.0
    }

    fn to_sequence(&self) -> Vec<Generator> {
        let mut seq = Vec::new();
        for (g, p) in &self.0 {
            for _ in 0..*p {
                seq.push(*g);
            }
        }
        seq
    }

    fn from_sorted_sequence(seq: &[Generator]) -> Self {
        let mut out: Vec<(Generator, u32)> = Vec::new();
        for g in seq {
            match out.last_mut() {
                Some((last, p)) if last == g => *p += 1,
                _ => out.push((*g, 1)),
            }
        }
        PbwMonomial(out)
    }
}

impl fmt::Display for PbwMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(g, p)| {
                if *p == 1 {
                    g.to_string()
                } else {
                    format!("{g}^{p}")
                }
            })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// Element of U(g): canonical map from PBW monomials to coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct UeaElement {
    terms: BTreeMap<PbwMonomial, Expr>,
}

impl UeaElement {
    pub fn zero() -> Self {
        UeaElement::default()
    }

    pub fn one() -> Self {
        UeaElement::term(PbwMonomial::unit(), Expr::one())
    }

    pub fn generator(g: Generator) -> Self {
        UeaElement::term(PbwMonomial::generator(g), Expr::one())
    }

    pub fn term(m: PbwMonomial, c: Expr) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        UeaElement { terms }
    }

    pub fn from_lincomb(lc: &LinComb) -> Self {
        let mut out = UeaElement::zero();
        for (g, c) in lc.iter() {
            out.add_assign(&UeaElement::term(PbwMonomial::generator(*g), c.clone()));
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .map(|(m, c)| m.is_unit() && c.is_one())
                .unwrap_or(false)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PbwMonomial, &Expr)> {
        self.terms.iter()
    }

    pub fn add(&self, rhs: &UeaElement) -> UeaElement {
        let mut out = self.clone();
        out.add_assign(rhs);
        out
    }

    /// In-place accumulation; avoids re-cloning the left operand.
    pub fn add_assign(&mut self, rhs: &UeaElement) {
        for (m, c) in &rhs.terms {
            match self.terms.entry(m.clone()) {
                Entry::Occupied(mut e) => {
                    let v = e.get().add_ref(c);
                    if v.is_zero() {
                        e.remove();
                    } else {
                        *e.get_mut() = v;
                    }
                }
                Entry::Vacant(e) => {
                    if !c.is_zero() {
                        e.insert(c.clone());
                    }
                }
            }
        }
    }

    pub fn neg(&self) -> UeaElement {
        UeaElement {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.neg_ref()))
                .collect(),
        }
    }

    pub fn sub(&self, rhs: &UeaElement) -> UeaElement {
        self.add(&rhs.neg())
    }

    pub fn scale(&self, factor: &Expr) -> UeaElement {
        if factor.is_zero() {
            return UeaElement::zero();
        }
        UeaElement {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.mul_ref(factor)))
                .collect(),
        }
    }

    /// PBW product, normal-ordering through the algebra's brackets.
    pub fn mul(&self, rhs: &UeaElement, alg: &LieAlgebra) -> UeaElement {
        let mut out = UeaElement::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                let mut seq = m1.to_sequence();
                seq.extend(m2.to_sequence());
                let ordered = normal_order(&seq, alg);
                out.add_assign(&ordered.scale(&c1.mul_ref(c2)));
            }
        }
        out
    }

    pub fn commutator(&self, rhs: &UeaElement, alg: &LieAlgebra) -> UeaElement {
        self.mul(rhs, alg).sub(&rhs.mul(self, alg))
    }

    /// Counit: coefficient of the unit monomial.
    pub fn counit(&self) -> Expr {
        self.terms
            .get(&PbwMonomial::unit())
            .cloned()
            .unwrap_or_else(Expr::zero)
    }

    /// Primitive antipode `S_0`, the algebra anti-homomorphism with
    /// `S_0(g) = -g`.
    pub fn antipode0(&self, alg: &LieAlgebra) -> UeaElement {
        let mut out = UeaElement::zero();
        for (m, c) in &self.terms {
            let mut seq = m.to_sequence();
            seq.reverse();
            let sign = if seq.len() % 2 == 0 { 1 } else { -1 };
            let ordered = normal_order(&seq, alg);
            out.add_assign(&ordered.scale(&c.scale(&GaussianRational::from_int(sign))));
        }
        out
    }

    /// Primitive coproduct extended as an algebra homomorphism.
    pub fn coproduct0(&self, alg: &LieAlgebra) -> Tensor2 {
        let mut out = Tensor2::zero();
        for (m, c) in &self.terms {
            let mut acc = Tensor2::unit();
            for g in m.to_sequence() {
                acc = acc.mul(&primitive_coproduct(g), alg);
            }
            out.add_assign(&acc.scale(c));
        }
        out
    }

    /// Max total power of the given parameters across coefficients.
    pub fn param_degree(&self, params: &std::collections::BTreeSet<crate::expr::Param>) -> u32 {
        self.terms
            .values()
            .map(|c| c.param_degree(params))
            .max()
            .unwrap_or(0)
    }
}

impl fmt::Display for UeaElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                if m.is_unit() {
                    format!("({})", c)
                } else if c.is_one() {
                    m.to_string()
                } else {
                    format!("({})*{}", c, m)
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Normal-orders a generator word: repeatedly rewrites the first adjacent
/// inversion `x y -> y x + [x, y]`.
fn normal_order(seq: &[Generator], alg: &LieAlgebra) -> UeaElement {
    let mut out = UeaElement::zero();
    let mut stack: Vec<(Expr, Vec<Generator>)> = vec![(Expr::one(), seq.to_vec())];
    while let Some((coeff, s)) = stack.pop() {
        match first_inversion(&s) {
            None => {
                out.add_assign(&UeaElement::term(
                    PbwMonomial::from_sorted_sequence(&s),
                    coeff,
                ));
            }
            Some(i) => {
                let mut swapped = s.clone();
                swapped.swap(i, i + 1);
                let bracket = alg.bracket(s[i], s[i + 1]);
                stack.push((coeff.clone(), swapped));
                for (g, c) in bracket.iter() {
                    let mut shorter: Vec<Generator> = Vec::with_capacity(s.len() - 1);
                    shorter.extend_from_slice(&s[..i]);
                    shorter.push(*g);
                    shorter.extend_from_slice(&s[i + 2..]);
                    stack.push((coeff.mul_ref(c), shorter));
                }
            }
        }
    }
    out
}

fn first_inversion(s: &[Generator]) -> Option<usize> {
    (0..s.len().saturating_sub(1)).find(|&i| s[i] > s[i + 1])
}

/// `Delta_0(g) = g (x) 1 + 1 (x) g`.
pub fn primitive_coproduct(g: Generator) -> Tensor2 {
    let gm = PbwMonomial::generator(g);
    let unit = PbwMonomial::unit();
    Tensor2::term([gm.clone(), unit.clone()], Expr::one())
        .add(&Tensor2::term([unit, gm], Expr::one()))
}

/// `S_0(g) = -g`.
pub fn primitive_antipode(g: Generator) -> UeaElement {
    UeaElement::generator(g).neg()
}

/// `eps(g) = 0`, `eps(1) = 1`.
pub fn primitive_counit(g: Generator) -> GaussianRational {
    let _ = g;
    GaussianRational::zero()
}

/// Element of U(g)^(x)N with componentwise PBW-canonical slots.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Tensor<const N: usize> {
    terms: BTreeMap<[PbwMonomial; N], Expr>,
}

pub type Tensor2 = Tensor<2>;
pub type Tensor3 = Tensor<3>;

impl<const N: usize> Tensor<N> {
    pub fn zero() -> Self {
        Tensor {
            terms: BTreeMap::new(),
        }
    }

    pub fn unit() -> Self {
        Tensor::term(std::array::from_fn(|_| PbwMonomial::unit()), Expr::one())
    }

    pub fn term(key: [PbwMonomial; N], c: Expr) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(key, c);
        }
        Tensor { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[PbwMonomial; N], &Expr)> {
        self.terms.iter()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign(rhs);
        out
    }

    /// In-place accumulation; avoids re-cloning the left operand.
    pub fn add_assign(&mut self, rhs: &Self) {
        for (k, c) in &rhs.terms {
            match self.terms.entry(k.clone()) {
                Entry::Occupied(mut e) => {
                    let v = e.get().add_ref(c);
                    if v.is_zero() {
                        e.remove();
                    } else {
                        *e.get_mut() = v;
                    }
                }
                Entry::Vacant(e) => {
                    if !c.is_zero() {
                        e.insert(c.clone());
                    }
                }
            }
        }
    }

    pub fn neg(&self) -> Self {
        Tensor {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.clone(), c.neg_ref()))
                .collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn scale(&self, factor: &Expr) -> Self {
        if factor.is_zero() {
            return Tensor::zero();
        }
        Tensor {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.clone(), c.mul_ref(factor)))
                .collect(),
        }
    }

    /// Componentwise product: each slot multiplies in U(g).
    pub fn mul(&self, rhs: &Self, alg: &LieAlgebra) -> Self {
        let mut out = Tensor::zero();
        for (k1, c1) in &self.terms {
            for (k2, c2) in &rhs.terms {
                // slotwise PBW products, then distribute
                let slot_products: Vec<UeaElement> = (0..N)
                    .map(|s| {
                        UeaElement::term(k1[s].clone(), Expr::one())
                            .mul(&UeaElement::term(k2[s].clone(), Expr::one()), alg)
                    })
                    .collect();
                let mut partial: Vec<([PbwMonomial; N], Expr)> =
                    vec![(std::array::from_fn(|_| PbwMonomial::unit()), c1.mul_ref(c2))];
                for (s, product) in slot_products.iter().enumerate() {
                    let mut next = Vec::new();
                    for (key, coeff) in &partial {
                        for (m, mc) in product.terms() {
                            let mut key2 = key.clone();
                            key2[s] = m.clone();
                            next.push((key2, coeff.mul_ref(mc)));
                        }
                    }
                    partial = next;
                }
                for (key, coeff) in partial {
                    out.add_assign(&Tensor::term(key, coeff));
                }
            }
        }
        out
    }

    pub fn commutator(&self, rhs: &Self, alg: &LieAlgebra) -> Self {
        self.mul(rhs, alg).sub(&rhs.mul(self, alg))
    }

    pub fn param_degree(&self, params: &std::collections::BTreeSet<crate::expr::Param>) -> u32 {
        self.terms
            .values()
            .map(|c| c.param_degree(params))
            .max()
            .unwrap_or(0)
    }
}

impl Tensor2 {
    /// Embeds into U(g)^(x)3 placing the slots at `(s1, s2)` and the unit
    /// elsewhere: `(0,1) -> r_12`, `(0,2) -> r_13`, `(1,2) -> r_23`.
    pub fn embed(&self, s1: usize, s2: usize) -> Tensor3 {
        let mut out = Tensor3::zero();
        for (k, c) in &self.terms {
            let mut key: [PbwMonomial; 3] = std::array::from_fn(|_| PbwMonomial::unit());
            key[s1] = k[0].clone();
            key[s2] = k[1].clone();
            out.add_assign(&Tensor3::term(key, c.clone()));
        }
        out
    }

    /// `(Delta_0 (x) 1)` applied termwise: slot 0 expands into slots (0, 1).
    pub fn coproduct0_left(&self, alg: &LieAlgebra) -> Tensor3 {
        let mut out = Tensor3::zero();
        for (k, c) in &self.terms {
            let expanded = UeaElement::term(k[0].clone(), Expr::one()).coproduct0(alg);
            for (ek, ec) in expanded.terms() {
                out.add_assign(&Tensor3::term(
                    [ek[0].clone(), ek[1].clone(), k[1].clone()],
                    c.mul_ref(ec),
                ));
            }
        }
        out
    }

    /// `(1 (x) Delta_0)` applied termwise: slot 1 expands into slots (1, 2).
    pub fn coproduct0_right(&self, alg: &LieAlgebra) -> Tensor3 {
        let mut out = Tensor3::zero();
        for (k, c) in &self.terms {
            let expanded = UeaElement::term(k[1].clone(), Expr::one()).coproduct0(alg);
            for (ek, ec) in expanded.terms() {
                out.add_assign(&Tensor3::term(
                    [k[0].clone(), ek[0].clone(), ek[1].clone()],
                    c.mul_ref(ec),
                ));
            }
        }
        out
    }

    /// Applies the counit to one slot, projecting onto the other.
    pub fn counit_slot(&self, slot: usize) -> UeaElement {
        let mut out = UeaElement::zero();
        for (k, c) in &self.terms {
            if k[slot].is_unit() {
                out.add_assign(&UeaElement::term(k[1 - slot].clone(), c.clone()));
            }
        }
        out
    }
}

impl<const N: usize> fmt::Display for Tensor<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(k, c)| {
                let slots: Vec<String> = k.iter().map(|m| m.to_string()).collect();
                if c.is_one() {
                    slots.join(" (x) ")
                } else {
                    format!("({}) {}", c, slots.join(" (x) "))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Signature;

    fn alg() -> LieAlgebra {
        LieAlgebra::build(Signature::NHPlus, 3).unwrap()
    }

    #[test]
    fn pbw_h_times_k_normal_orders() {
        // H * K_1 = K_1 H + [H, K_1] = K_1 H + i P_1
        let alg = alg();
        let product =
            UeaElement::generator(Generator::H).mul(&UeaElement::generator(Generator::K(1)), &alg);
        let expected = UeaElement::term(
            PbwMonomial::from_sorted_sequence(&[Generator::K(1), Generator::H]),
            Expr::one(),
        )
        .add(&UeaElement::term(
            PbwMonomial::generator(Generator::P(1)),
            Expr::i(),
        ));
        assert_eq!(product, expected);
    }

    #[test]
    fn pbw_commuting_generators() {
        let alg = alg();
        let product = UeaElement::generator(Generator::P(1))
            .mul(&UeaElement::generator(Generator::P(2)), &alg);
        let expected = UeaElement::term(
            PbwMonomial::from_sorted_sequence(&[Generator::P(1), Generator::P(2)]),
            Expr::one(),
        );
        assert_eq!(product, expected);
        let u = UeaElement::generator(Generator::R(2));
        assert_eq!(UeaElement::one().mul(&u, &alg), u);
    }

    #[test]
    fn pbw_associativity_random_triples() {
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        let alg = alg();
        let gens = alg.generators().to_vec();
        let mut rng = StdRng::seed_from_u64(0x9e3779b9);
        for _ in 0..200 {
            let pick = |rng: &mut StdRng| {
                let deg = rng.random_range(0..=3);
                let mut m = UeaElement::one();
                for _ in 0..deg {
                    let g = gens[rng.random_range(0..gens.len())];
                    m = m.mul(&UeaElement::generator(g), &alg);
                }
                m
            };
            let (a, b, c) = (pick(&mut rng), pick(&mut rng), pick(&mut rng));
            let lhs = a.mul(&b, &alg).mul(&c, &alg);
            let rhs = a.mul(&b.mul(&c, &alg), &alg);
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn primitive_hopf_data() {
        let alg = alg();
        let d = primitive_coproduct(Generator::P(1));
        let unit = PbwMonomial::unit();
        let p = PbwMonomial::generator(Generator::P(1));
        let expected = Tensor2::term([p.clone(), unit.clone()], Expr::one())
            .add(&Tensor2::term([unit, p], Expr::one()));
        assert_eq!(d, expected);
        assert_eq!(
            primitive_antipode(Generator::H),
            UeaElement::generator(Generator::H).neg()
        );
        assert!(primitive_counit(Generator::M(1, 2)).is_zero());
        assert!(UeaElement::one().counit().is_one());
        let _ = alg;
    }

    #[test]
    fn antipode_is_antihomomorphism() {
        let alg = alg();
        let a = UeaElement::generator(Generator::H);
        let b = UeaElement::generator(Generator::K(1));
        let lhs = a.mul(&b, &alg).antipode0(&alg);
        let rhs = b.antipode0(&alg).mul(&a.antipode0(&alg), &alg);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn coassociativity_of_primitive_coproduct() {
        let alg = alg();
        for &g in alg.generators() {
            let d = primitive_coproduct(g);
            assert_eq!(d.coproduct0_left(&alg), d.coproduct0_right(&alg));
        }
    }

    #[test]
    fn counit_axiom_on_coproduct() {
        let alg = alg();
        for &g in alg.generators() {
            let d = primitive_coproduct(g);
            assert_eq!(d.counit_slot(0), UeaElement::generator(g));
            assert_eq!(d.counit_slot(1), UeaElement::generator(g));
        }
    }
}
