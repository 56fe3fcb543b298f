//! Independent numeric reference engine for the nhtwist test suites.
//!
//! This crate re-derives star commutators of coordinate functions purely
//! numerically: functions are dense complex-coefficient polynomials in
//! `t`, `x_1..x_d` and the two branch functions `C`, `S` (cosh/sinh or
//! cos/sin of `t/tau`), the generator actions and the twist catalog are
//! hard-coded from the published formulas, and the exponential series is
//! summed to a fixed order with floating-point coefficients. Nothing here
//! touches the exact symbolic engine, so agreement between the two paths is
//! a genuine cross-check.

use num_complex::Complex64;
use std::collections::BTreeMap;

pub const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    Plus,
    Minus,
    Galilei,
}

impl Branch {
    fn sign(&self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
            Branch::Galilei => 0.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Gen {
    P(usize),
    K(usize),
    F(usize),
    R(usize),
    M(usize, usize),
    H,
}

/// powers of (t, x_1.., C, S)
type Key = (u8, Vec<u8>, u8, u8);

/// Dense polynomial in `t`, `x_i`, `C`, `S` with complex coefficients.
#[derive(Clone, Debug, Default)]
pub struct NumPoly {
    dim: usize,
    terms: BTreeMap<Key, Complex64>,
}

const EPS: f64 = 1e-14;

impl NumPoly {
    pub fn zero(dim: usize) -> Self {
        NumPoly {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, c: Complex64) -> Self {
        let mut p = NumPoly::zero(dim);
        p.insert((0, vec![0; dim], 0, 0), c);
        p
    }

    pub fn coord_t(dim: usize) -> Self {
        let mut p = NumPoly::zero(dim);
        p.insert((1, vec![0; dim], 0, 0), Complex64::new(1.0, 0.0));
        p
    }

    pub fn coord_x(dim: usize, i: usize) -> Self {
        let mut xs = vec![0u8; dim];
        xs[i - 1] = 1;
        let mut p = NumPoly::zero(dim);
        p.insert((0, xs, 0, 0), Complex64::new(1.0, 0.0));
        p
    }

    fn insert(&mut self, key: Key, c: Complex64) {
        if c.norm() <= EPS {
            return;
        }
        *self.terms.entry(key).or_insert(Complex64::new(0.0, 0.0)) += c;
    }

    pub fn is_zero(&self) -> bool {
        self.terms.values().all(|c| c.norm() <= EPS)
    }

    pub fn add(&self, rhs: &NumPoly) -> NumPoly {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            *out.terms
                .entry(k.clone())
                .or_insert(Complex64::new(0.0, 0.0)) += *c;
        }
        out
    }

    pub fn sub(&self, rhs: &NumPoly) -> NumPoly {
        self.add(&rhs.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, c: Complex64) -> NumPoly {
        NumPoly {
            dim: self.dim,
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
        }
    }

    pub fn mul(&self, rhs: &NumPoly) -> NumPoly {
        let mut out = NumPoly::zero(self.dim);
        for ((t1, x1, c1, s1), v1) in &self.terms {
            for ((t2, x2, c2, s2), v2) in &rhs.terms {
                let xs: Vec<u8> = x1.iter().zip(x2.iter()).map(|(a, b)| a + b).collect();
                let key = (t1 + t2, xs, c1 + c2, s1 + s2);
                *out.terms.entry(key).or_insert(Complex64::new(0.0, 0.0)) += v1 * v2;
            }
        }
        out
    }

    /// `d/dt` with `dC/dt = sign * S / tau`, `dS/dt = C / tau`.
    pub fn diff_t(&self, branch: Branch, tau: f64) -> NumPoly {
        let mut out = NumPoly::zero(self.dim);
        for ((tp, xs, cp, sp), v) in &self.terms {
            if *tp > 0 {
                let key = (tp - 1, xs.clone(), *cp, *sp);
                *out.terms.entry(key).or_insert(Complex64::new(0.0, 0.0)) += v * (*tp as f64);
            }
            if *cp > 0 {
                let key = (*tp, xs.clone(), cp - 1, sp + 1);
                *out.terms.entry(key).or_insert(Complex64::new(0.0, 0.0)) +=
                    v * (*cp as f64) * branch.sign() / tau;
            }
            if *sp > 0 {
                let key = (*tp, xs.clone(), cp + 1, sp - 1);
                *out.terms.entry(key).or_insert(Complex64::new(0.0, 0.0)) += v * (*sp as f64) / tau;
            }
        }
        out
    }

    pub fn diff_x(&self, i: usize) -> NumPoly {
        let mut out = NumPoly::zero(self.dim);
        for ((tp, xs, cp, sp), v) in &self.terms {
            if xs[i - 1] > 0 {
                let mut xs2 = xs.clone();
                xs2[i - 1] -= 1;
                let key = (*tp, xs2, *cp, *sp);
                *out.terms.entry(key).or_insert(Complex64::new(0.0, 0.0)) += v * (xs[i - 1] as f64);
            }
        }
        out
    }

    pub fn eval(&self, branch: Branch, t: f64, xs: &[f64], tau: f64) -> Complex64 {
        let u = t / tau;
        let (cv, sv) = match branch {
            Branch::Plus => (u.cosh(), u.sinh()),
            Branch::Minus => (u.cos(), u.sin()),
            Branch::Galilei => (1.0, 0.0),
        };
        let mut total = Complex64::new(0.0, 0.0);
        for ((tp, xp, cp, sp), v) in &self.terms {
            let mut w = v * t.powi(*tp as i32) * cv.powi(*cp as i32) * sv.powi(*sp as i32);
            for (pow, x) in xp.iter().zip(xs.iter()) {
                w *= x.powi(*pow as i32);
            }
            total += w;
        }
        total
    }
}

/// Applies one generator through the published differential realization.
pub fn apply_gen(g: Gen, f: &NumPoly, branch: Branch, tau: f64) -> NumPoly {
    let dim = f.dim;
    let sgn = branch.sign();
    match (g, branch) {
        (Gen::H, _) => f.diff_t(branch, tau).scale(I),
        (Gen::M(i, j), _) => {
            let xi = NumPoly::coord_x(dim, i);
            let xj = NumPoly::coord_x(dim, j);
            xi.mul(&f.diff_x(j)).sub(&xj.mul(&f.diff_x(i))).scale(I)
        }
        (Gen::P(i), Branch::Galilei) => f.diff_x(i).scale(I),
        (Gen::P(i), _) => {
            let mut c = NumPoly::zero(dim);
            c.insert((0, vec![0; dim], 1, 0), Complex64::new(1.0, 0.0));
            c.mul(&f.diff_x(i)).scale(I)
        }
        (Gen::K(i), Branch::Galilei) => NumPoly::coord_t(dim).mul(&f.diff_x(i)).scale(I),
        (Gen::K(i), _) => {
            let mut s = NumPoly::zero(dim);
            s.insert((0, vec![0; dim], 0, 1), Complex64::new(tau, 0.0));
            s.mul(&f.diff_x(i)).scale(I)
        }
        (Gen::F(i), Branch::Galilei) => {
            let t = NumPoly::coord_t(dim);
            t.mul(&t).mul(&f.diff_x(i)).scale(I)
        }
        (Gen::F(i), _) => {
            // sgn * 2 i tau^2 (C - 1)
            let mut c = NumPoly::zero(dim);
            c.insert(
                (0, vec![0; dim], 1, 0),
                Complex64::new(2.0 * sgn * tau * tau, 0.0),
            );
            c.insert(
                (0, vec![0; dim], 0, 0),
                Complex64::new(-2.0 * sgn * tau * tau, 0.0),
            );
            c.mul(&f.diff_x(i)).scale(I)
        }
        (Gen::R(i), Branch::Galilei) => {
            let t = NumPoly::coord_t(dim);
            t.mul(&t).mul(&t).mul(&f.diff_x(i)).scale(I)
        }
        (Gen::R(i), _) => {
            // sgn * 6 i tau^3 (S - t/tau)
            let mut c = NumPoly::zero(dim);
            c.insert(
                (0, vec![0; dim], 0, 1),
                Complex64::new(6.0 * sgn * tau.powi(3), 0.0),
            );
            c.insert(
                (1, vec![0; dim], 0, 0),
                Complex64::new(-6.0 * sgn * tau * tau, 0.0),
            );
            c.mul(&f.diff_x(i)).scale(I)
        }
    }
}

/// Numeric deformation parameters for one catalog item.
#[derive(Clone, Debug)]
pub struct OracleParams {
    /// antisymmetric array components keyed `k < l`
    pub components: BTreeMap<(usize, usize), f64>,
    /// scalar parameter for the fixed-index items
    pub scalar: f64,
    pub m: usize,
    pub kl: (usize, usize),
    pub ij: (usize, usize),
}

impl Default for OracleParams {
    fn default() -> Self {
        OracleParams {
            components: BTreeMap::new(),
            scalar: 0.0,
            m: 3,
            kl: (1, 2),
            ij: (1, 2),
        }
    }
}

impl OracleParams {
    fn component(&self, k: usize, l: usize) -> f64 {
        if k == l {
            0.0
        } else if k < l {
            self.components.get(&(k, l)).copied().unwrap_or(0.0)
        } else {
            -self.components.get(&(l, k)).copied().unwrap_or(0.0)
        }
    }
}

/// The published r-matrix catalog as numeric tensor terms `sum c a (x) b`.
pub fn catalog_terms(twist: u8, dim: usize, p: &OracleParams) -> Vec<(Complex64, Gen, Gen)> {
    let mut out = Vec::new();
    let mut wedge = |c: f64, a: Gen, b: Gen| {
        if c != 0.0 {
            out.push((Complex64::new(c, 0.0), a, b));
            out.push((Complex64::new(-c, 0.0), b, a));
        }
    };
    type Ctor = fn(usize) -> Gen;
    let pair: Option<(Ctor, Ctor)> = match twist {
        1 => Some((Gen::R, Gen::R)),
        2 => Some((Gen::R, Gen::F)),
        3 => Some((Gen::R, Gen::P)),
        4 => Some((Gen::K, Gen::R)),
        6 => Some((Gen::F, Gen::F)),
        7 => Some((Gen::F, Gen::P)),
        8 => Some((Gen::K, Gen::F)),
        10 => Some((Gen::P, Gen::P)),
        11 => Some((Gen::K, Gen::P)),
        12 => Some((Gen::K, Gen::K)),
        _ => None,
    };
    if let Some((ca, cb)) = pair {
        for k in 1..=dim {
            for l in 1..=dim {
                wedge(0.5 * p.component(k, l), ca(k), cb(l));
            }
        }
        return out;
    }
    let fixed: Option<fn(usize) -> Gen> = match twist {
        5 => Some(Gen::R),
        9 => Some(Gen::F),
        13 => Some(Gen::K),
        14 => Some(Gen::P),
        _ => None,
    };
    if let Some(ctor) = fixed {
        let (k, l) = p.kl;
        wedge(p.scalar, ctor(p.m), Gen::M(k.min(l), k.max(l)));
        return out;
    }
    // item 15
    let (i, j) = p.ij;
    wedge(p.scalar, Gen::M(i.min(j), i.max(j)), Gen::H);
    out
}

/// Direct truncated-series star product: `sum_n (-i)^n/n! omega(r^n |> f x g)`.
pub fn star_product(
    f: &NumPoly,
    g: &NumPoly,
    terms: &[(Complex64, Gen, Gen)],
    branch: Branch,
    tau: f64,
    order: u32,
) -> NumPoly {
    let dim = f.dim;
    let mut total = f.mul(g);
    let mut states: Vec<(Complex64, NumPoly, NumPoly)> =
        vec![(Complex64::new(1.0, 0.0), f.clone(), g.clone())];
    let mut factor = Complex64::new(1.0, 0.0);
    for n in 1..=order {
        factor *= Complex64::new(0.0, -1.0) / (n as f64);
        let mut next = Vec::new();
        for (coeff, fp, gp) in &states {
            for (c, a, b) in terms {
                let fa = apply_gen(*a, fp, branch, tau);
                if fa.is_zero() {
                    continue;
                }
                let gb = apply_gen(*b, gp, branch, tau);
                if gb.is_zero() {
                    continue;
                }
                next.push((coeff * c, fa, gb));
            }
        }
        states = next;
        if states.is_empty() {
            break;
        }
        let mut order_sum = NumPoly::zero(dim);
        for (coeff, fp, gp) in &states {
            order_sum = order_sum.add(&fp.mul(gp).scale(*coeff));
        }
        total = total.add(&order_sum.scale(factor));
    }
    total
}

pub fn star_commutator(
    f: &NumPoly,
    g: &NumPoly,
    terms: &[(Complex64, Gen, Gen)],
    branch: Branch,
    tau: f64,
    order: u32,
) -> NumPoly {
    star_product(f, g, terms, branch, tau, order)
        .sub(&star_product(g, f, terms, branch, tau, order))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single_component(k: usize, l: usize, v: f64) -> OracleParams {
        let mut p = OracleParams::default();
        p.components.insert((k, l), v);
        p
    }

    #[test]
    fn item_10_commutator_matches_theta_form() {
        // [x1, x2] = 2 i beta cosh^2(t/tau) under the plus branch
        let p = single_component(1, 2, 0.75);
        let terms = catalog_terms(10, 3, &p);
        let f = NumPoly::coord_x(3, 1);
        let g = NumPoly::coord_x(3, 2);
        let comm = star_commutator(&f, &g, &terms, Branch::Plus, 2.0, 6);
        let t = 1.3;
        let got = comm.eval(Branch::Plus, t, &[0.4, -0.2, 0.9], 2.0);
        let want = 2.0 * 0.75 * (t / 2.0).cosh().powi(2);
        assert!((got - Complex64::new(0.0, want)).norm() < 1e-12, "{got}");
    }

    #[test]
    fn galilei_item_1_is_t6() {
        let mut p = OracleParams::default();
        p.components.insert((1, 2), 1.0);
        let terms = catalog_terms(1, 3, &p);
        let f = NumPoly::coord_x(3, 1);
        let g = NumPoly::coord_x(3, 2);
        let comm = star_commutator(&f, &g, &terms, Branch::Galilei, 7.0, 6);
        let t = 0.8;
        let got = comm.eval(Branch::Galilei, t, &[0.0, 0.0, 0.0], 7.0);
        let want = 2.0 * t.powi(6);
        assert!((got - Complex64::new(0.0, want)).norm() < 1e-12, "{got}");
    }

    #[test]
    fn item_15_time_commutator() {
        let p = OracleParams {
            scalar: 0.5,
            ..OracleParams::default()
        };
        let terms = catalog_terms(15, 3, &p);
        let t = NumPoly::coord_t(3);
        let x1 = NumPoly::coord_x(3, 1);
        let comm = star_commutator(&t, &x1, &terms, Branch::Minus, 3.0, 6);
        // [t, x_1] = 2 i beta15 x_2
        let got = comm.eval(Branch::Minus, 0.7, &[0.3, -1.1, 0.2], 3.0);
        let want = Complex64::new(0.0, 2.0 * 0.5 * -1.1);
        assert!((got - want).norm() < 1e-12, "{got}");
    }
}
