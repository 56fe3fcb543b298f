//! Rendering of expressions in three documented syntaxes.
//!
//! Plain grammar (also what [`crate::parse`] reads back):
//! ```text
//! expr     := "0" | term (" + " | " - ") term ...
//! term     := factor ("*" factor)*
//! factor   := rational | "i" | "tau" ["^" int] | atom ["^" uint]
//! atom     := "t" | "x"<idx> | "C+" | "C-" | "S+" | "S-" | param-name
//! ```
//! Rationals print as `n` or `n/d`; a mixed complex coefficient prints as
//! `(a + b*i)`. LaTeX follows the same structure with `C_{+}(t/tau)` style
//! function atoms. The JSON AST is a sum-of-monomials object documented in
//! the README.

use crate::expr::{rational_is_negative, Atom, Expr, Monomial, Param};
use crate::scalar::GaussianRational;
use num_traits::{One, Zero};
use serde_json::{json, Value};

// ---- plain text ----

pub fn plain(e: &Expr) -> String {
    if e.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (idx, m) in e.terms().iter().enumerate() {
        let (sign_negative, body) = monomial_plain(m);
        if idx == 0 {
            if sign_negative {
                out.push('-');
            }
        } else if sign_negative {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        out.push_str(&body);
    }
    out
}

fn monomial_plain(m: &Monomial) -> (bool, String) {
    let (negative, coeff) = split_sign(&m.coeff);
    let mut factors: Vec<String> = Vec::new();
    let coeff_str = coeff_plain(&coeff);
    if coeff_str != "1" || (m.tau_power == 0 && m.powers.is_empty()) {
        factors.push(coeff_str);
    }
    if m.tau_power != 0 {
        factors.push(if m.tau_power == 1 {
            "tau".to_string()
        } else {
            format!("tau^{}", m.tau_power)
        });
    }
    for (atom, p) in &m.powers {
        let a = atom_plain(atom);
        factors.push(if *p == 1 { a } else { format!("{a}^{p}") });
    }
    (negative, factors.join("*"))
}

/// Pulls an overall minus out of a real or purely imaginary coefficient.
fn split_sign(c: &GaussianRational) -> (bool, GaussianRational) {
    let negative = if c.im().is_zero() {
        rational_is_negative(c.re())
    } else if c.re().is_zero() {
        rational_is_negative(c.im())
    } else {
        false
    };
    if negative {
        (true, -c)
    } else {
        (false, c.clone())
    }
}

fn coeff_plain(c: &GaussianRational) -> String {
    if c.im().is_zero() {
        let r = c.re();
        if r.denom().is_one() {
            format!("{}", r.numer())
        } else {
            format!("({})", r)
        }
    } else if c.re().is_zero() {
        if c.im().is_one() {
            "i".to_string()
        } else if c.im().denom().is_one() {
            format!("{}*i", c.im().numer())
        } else {
            format!("({})*i", c.im())
        }
    } else {
        format!("({})", c)
    }
}

pub fn atom_plain(a: &Atom) -> String {
    match a {
        Atom::T => "t".to_string(),
        Atom::X(i) => format!("x{i}"),
        Atom::CPlus => "C+".to_string(),
        Atom::CMinus => "C-".to_string(),
        Atom::SPlus => "S+".to_string(),
        Atom::SMinus => "S-".to_string(),
        Atom::Param(p) => p.to_string(),
    }
}

// ---- LaTeX ----

pub fn latex(e: &Expr) -> String {
    if e.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (idx, m) in e.terms().iter().enumerate() {
        let (sign_negative, body) = monomial_latex(m);
        if idx == 0 {
            if sign_negative {
                out.push('-');
            }
        } else if sign_negative {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        out.push_str(&body);
    }
    out
}

fn monomial_latex(m: &Monomial) -> (bool, String) {
    let (negative, coeff) = split_sign(&m.coeff);
    let mut factors: Vec<String> = Vec::new();
    let coeff_str = coeff_latex(&coeff);
    if coeff_str != "1" || (m.tau_power == 0 && m.powers.is_empty()) {
        factors.push(coeff_str);
    }
    if m.tau_power != 0 {
        factors.push(if m.tau_power == 1 {
            "\\tau".to_string()
        } else {
            format!("\\tau^{{{}}}", m.tau_power)
        });
    }
    for (atom, p) in &m.powers {
        let a = atom_latex(atom);
        factors.push(if *p == 1 { a } else { format!("{a}^{{{p}}}") });
    }
    (negative, factors.join("\\,"))
}

fn rational_latex(r: &num_rational::BigRational) -> String {
    if r.denom().is_one() {
        format!("{}", r.numer())
    } else if rational_is_negative(r) {
        format!("-\\frac{{{}}}{{{}}}", -r.numer(), r.denom())
    } else {
        format!("\\frac{{{}}}{{{}}}", r.numer(), r.denom())
    }
}

fn coeff_latex(c: &GaussianRational) -> String {
    if c.im().is_zero() {
        rational_latex(c.re())
    } else if c.re().is_zero() {
        if c.im().is_one() {
            "i".to_string()
        } else {
            format!("{}\\,i", rational_latex(c.im()))
        }
    } else {
        format!(
            "\\left({} + {}\\,i\\right)",
            rational_latex(c.re()),
            rational_latex(c.im())
        )
    }
}

pub fn atom_latex(a: &Atom) -> String {
    match a {
        Atom::T => "t".to_string(),
        Atom::X(i) => format!("x_{{{i}}}"),
        Atom::CPlus => "C_{+}\\!\\left(\\tfrac{t}{\\tau}\\right)".to_string(),
        Atom::CMinus => "C_{-}\\!\\left(\\tfrac{t}{\\tau}\\right)".to_string(),
        Atom::SPlus => "S_{+}\\!\\left(\\tfrac{t}{\\tau}\\right)".to_string(),
        Atom::SMinus => "S_{-}\\!\\left(\\tfrac{t}{\\tau}\\right)".to_string(),
        Atom::Param(p) => param_latex(p),
    }
}

fn param_latex(p: &Param) -> String {
    match p {
        Param::Beta { twist, k, l } => format!("\\beta_{{{twist}}}^{{{k}{l}}}"),
        Param::BetaScalar { twist } => format!("\\beta_{{{twist}}}"),
        Param::Named(s) => format!("\\mathrm{{{s}}}"),
    }
}

// ---- JSON AST ----

pub fn json_ast(e: &Expr) -> Value {
    let terms: Vec<Value> = e
        .terms()
        .iter()
        .map(|m| {
            let factors: Vec<Value> = m
                .powers
                .iter()
                .map(|(a, p)| json!({ "atom": atom_json(a), "pow": p }))
                .collect();
            json!({
                "coeff": { "re": m.coeff.re().to_string(), "im": m.coeff.im().to_string() },
                "tau": m.tau_power,
                "factors": factors,
            })
        })
        .collect();
    json!({ "sum": terms })
}

fn atom_json(a: &Atom) -> Value {
    match a {
        Atom::T => json!({ "kind": "t" }),
        Atom::X(i) => json!({ "kind": "x", "i": i }),
        Atom::CPlus => json!({ "kind": "C+" }),
        Atom::CMinus => json!({ "kind": "C-" }),
        Atom::SPlus => json!({ "kind": "S+" }),
        Atom::SMinus => json!({ "kind": "S-" }),
        Atom::Param(Param::Beta { twist, k, l }) => {
            json!({ "kind": "beta", "twist": twist, "k": k, "l": l })
        }
        Atom::Param(Param::BetaScalar { twist }) => json!({ "kind": "beta", "twist": twist }),
        Atom::Param(Param::Named(s)) => json!({ "kind": "param", "name": s }),
    }
}

// ---- higher structures ----

/// LaTeX for a generator symbol.
pub fn generator_latex(g: &crate::algebra::Generator) -> String {
    use crate::algebra::Generator;
    match g {
        Generator::P(i) => format!("P_{{{i}}}"),
        Generator::K(i) => format!("K_{{{i}}}"),
        Generator::F(i) => format!("F_{{{i}}}"),
        Generator::R(i) => format!("R_{{{i}}}"),
        Generator::M(i, j) => format!("M_{{{i}{j}}}"),
        Generator::H => "H".to_string(),
    }
}

fn pbw_latex(m: &crate::uea::PbwMonomial) -> String {
    if m.is_unit() {
        return "1".to_string();
    }
    m.factors()
        .iter()
        .map(|(g, p)| {
            if *p == 1 {
                generator_latex(g)
            } else {
                format!("{}^{{{p}}}", generator_latex(g))
            }
        })
        .collect::<Vec<_>>()
        .join("\\,")
}

/// Plain rendering of a rank-2 tensor, e.g. `P1 (x) 1 + 1 (x) P1`.
pub fn tensor2_plain(t: &crate::uea::Tensor2) -> String {
    format!("{t}")
}

pub fn tensor2_latex(t: &crate::uea::Tensor2) -> String {
    if t.is_zero() {
        return "0".to_string();
    }
    let parts: Vec<String> = t
        .terms()
        .map(|(k, c)| {
            let body = format!("{} \\otimes {}", pbw_latex(&k[0]), pbw_latex(&k[1]));
            if c.is_one() {
                body
            } else {
                format!("\\left({}\\right) {}", latex(c), body)
            }
        })
        .collect();
    parts.join(" + ")
}

pub fn uea_latex(u: &crate::uea::UeaElement) -> String {
    if u.is_zero() {
        return "0".to_string();
    }
    let parts: Vec<String> = u
        .terms()
        .map(|(m, c)| {
            if m.is_unit() {
                format!("\\left({}\\right)", latex(c))
            } else if c.is_one() {
                pbw_latex(m)
            } else {
                format!("\\left({}\\right) {}", latex(c), pbw_latex(m))
            }
        })
        .collect();
    parts.join(" + ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::GaussianRational;

    #[test]
    fn plain_samples() {
        assert_eq!(plain(&Expr::zero()), "0");
        let e = &(&Expr::i() * &Expr::tau(-2)) * &Expr::x(1);
        assert_eq!(plain(&e), "i*tau^-2*x1");
        let e = (&Expr::t().pow(2) - &Expr::x(2)).scale(&GaussianRational::from_ratio(3, 2));
        assert_eq!(plain(&e), "(3/2)*t^2 - (3/2)*x2");
    }

    #[test]
    fn latex_samples() {
        let e = &(&Expr::i() * &Expr::tau(2)) * &Expr::atom(Atom::CPlus);
        assert_eq!(
            latex(&e),
            "i\\,\\tau^{2}\\,C_{+}\\!\\left(\\tfrac{t}{\\tau}\\right)"
        );
        let e = Expr::param(Param::Beta {
            twist: 10,
            k: 1,
            l: 2,
        });
        assert_eq!(latex(&e), "\\beta_{10}^{12}");
    }

    #[test]
    fn json_ast_is_deterministic() {
        let e = &(&Expr::x(2) + &Expr::x(1)) * &Expr::t();
        let a = serde_json::to_string(&json_ast(&e)).unwrap();
        let b = serde_json::to_string(&json_ast(&e)).unwrap();
        assert_eq!(a, b);
    }
}
