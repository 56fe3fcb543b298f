//! Named verification suites behind `verify <suite>`: Jacobi, realization
//! homomorphism, CYBE, cocycle + normalization, star-Jacobi and contraction.
//!
//! Each check is a pure function; the suite runner executes them on a rayon
//! pool and reassembles the results in declaration order, so reports are
//! deterministic. Timings are kept out of the serialized check list (they go
//! to the human-readable rendering) to keep JSON output byte-stable.

use crate::algebra::{LieAlgebra, Signature};
use crate::contraction::two_path_check;
use crate::expr::Expr;
use crate::realization::Realization;
use crate::rmatrix::{rmatrix_catalog, verify_cybe, TwistParams};
use crate::twist::{star_commutator, verify_cocycle, verify_normalization, TwistContext};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;
use std::time::Instant;

pub const SIGNATURES: [Signature; 3] = [Signature::NHPlus, Signature::NHMinus, Signature::Galilei];
pub const NH_SIGNATURES: [Signature; 2] = [Signature::NHPlus, Signature::NHMinus];
pub const COCYCLE_ORDER: u32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    All,
    Cybe,
    Cocycle,
    Homomorphism,
    Jacobi,
    StarJacobi,
    Contraction,
}

impl Suite {
    pub fn parse(s: &str) -> Option<Suite> {
        match s {
            "all" => Some(Suite::All),
            "cybe" => Some(Suite::Cybe),
            "cocycle" => Some(Suite::Cocycle),
            "homomorphism" => Some(Suite::Homomorphism),
            "jacobi" => Some(Suite::Jacobi),
            "star-jacobi" => Some(Suite::StarJacobi),
            "contraction" => Some(Suite::Contraction),
            _ => None,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Suite::All => "all",
            Suite::Cybe => "cybe",
            Suite::Cocycle => "cocycle",
            Suite::Homomorphism => "homomorphism",
            Suite::Jacobi => "jacobi",
            Suite::StarJacobi => "star-jacobi",
            Suite::Contraction => "contraction",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    #[serde(skip)]
    pub millis: u128,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub schema_version: u32,
    pub suite: String,
    pub dim: u8,
    pub passed: bool,
    pub total: usize,
    pub failed: usize,
    pub checks: Vec<CheckOutcome>,
}

impl SuiteReport {
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let mark = if c.passed { "PASS" } else { "FAIL" };
            out.push_str(&format!(
                "{mark}  {:<36} {:>6} ms  {}\n",
                c.name, c.millis, c.detail
            ));
        }
        out.push_str(&format!(
            "{}: {}/{} checks passed\n",
            self.suite,
            self.total - self.failed,
            self.total
        ));
        out
    }

    pub fn render_markdown(&self) -> String {
        let mut out = String::from("| check | status | time (ms) | detail |\n|---|---|---|---|\n");
        for c in &self.checks {
            out.push_str(&format!(
                "| `{}` | {} | {} | {} |\n",
                c.name,
                if c.passed { "pass" } else { "**fail**" },
                c.millis,
                c.detail
            ));
        }
        out.push_str(&format!(
            "\n**{}**: {}/{} checks passed\n",
            self.suite,
            self.total - self.failed,
            self.total
        ));
        out
    }
}

#[derive(Clone, Copy, Debug)]
enum CheckSpec {
    Jacobi(Signature, u8),
    Homomorphism(Signature, u8),
    Cybe(u8),
    Cocycle(u8),
    Normalization(u8),
    StarJacobi(u8, Signature),
    ContractionTwoPath(u8),
    ContractionAlgebra(Signature),
}

impl CheckSpec {
    fn name(&self) -> String {
        match self {
            CheckSpec::Jacobi(sig, d) => format!("jacobi/{sig}/d{d}"),
            CheckSpec::Homomorphism(sig, d) => format!("homomorphism/{sig}/d{d}"),
            CheckSpec::Cybe(k) => format!("cybe/twist-{k:02}"),
            CheckSpec::Cocycle(k) => format!("cocycle/twist-{k:02}"),
            CheckSpec::Normalization(k) => format!("normalization/twist-{k:02}"),
            CheckSpec::StarJacobi(k, sig) => format!("star-jacobi/{sig}/twist-{k:02}"),
            CheckSpec::ContractionTwoPath(k) => format!("contraction/twist-{k:02}"),
            CheckSpec::ContractionAlgebra(sig) => format!("contraction/algebra/{sig}"),
        }
    }

    fn run(&self, max_order: u32) -> Result<String, String> {
        match *self {
            CheckSpec::Jacobi(sig, d) => {
                let alg = LieAlgebra::build(sig, d).map_err(|e| e.to_string())?;
                let n = alg.generators().len();
                let violations = alg.verify_jacobi();
                if violations.is_empty() {
                    Ok(format!("0 violating triples of {}", n * n * n))
                } else {
                    Err(format!(
                        "{} violating triples, first: {}",
                        violations.len(),
                        violations[0]
                    ))
                }
            }
            CheckSpec::Homomorphism(sig, d) => {
                let alg = LieAlgebra::build(sig, d).map_err(|e| e.to_string())?;
                let rho = Realization::build(sig, d).map_err(|e| e.to_string())?;
                let violations = rho.verify_homomorphism(&alg);
                if violations.is_empty() {
                    let n = alg.generators().len();
                    Ok(format!("all {} pairs match", n * (n - 1) / 2))
                } else {
                    Err(format!(
                        "{} violating pairs, first: {}",
                        violations.len(),
                        violations[0]
                    ))
                }
            }
            CheckSpec::Cybe(k) => {
                let alg = LieAlgebra::build(Signature::NHPlus, 3).map_err(|e| e.to_string())?;
                let r =
                    rmatrix_catalog(k, 3, &TwistParams::symbolic()).map_err(|e| e.to_string())?;
                if verify_cybe(&r, &alg) {
                    Ok("[[r, r]] = 0".into())
                } else {
                    Err("[[r, r]] != 0".into())
                }
            }
            CheckSpec::Cocycle(k) => {
                let ctx = catalog_ctx(k, Signature::NHPlus, max_order)?;
                let report = verify_cocycle(&ctx, COCYCLE_ORDER);
                if report.holds() {
                    Ok(format!("both sides equal to order {COCYCLE_ORDER}"))
                } else {
                    Err(format!(
                        "first failure at order {}",
                        report.first_failure_order.unwrap()
                    ))
                }
            }
            CheckSpec::Normalization(k) => {
                let ctx = catalog_ctx(k, Signature::NHPlus, max_order)?;
                if verify_normalization(&ctx) {
                    Ok("(eps x 1)F = (1 x eps)F = 1".into())
                } else {
                    Err("counit of the twist factor is not 1".into())
                }
            }
            CheckSpec::StarJacobi(k, sig) => {
                let ctx = catalog_ctx(k, sig, max_order)?;
                star_jacobi_check(&ctx).map(|n| format!("{n} ordered triples"))
            }
            CheckSpec::ContractionTwoPath(k) => {
                let report = two_path_check(k, 3, &TwistParams::symbolic(), max_order)
                    .map_err(|e| e.to_string())?;
                if report.all_equal() {
                    Ok("limit(nh+) = limit(nh-) = direct galilei".into())
                } else {
                    Err(report.differences().join("; "))
                }
            }
            CheckSpec::ContractionAlgebra(sig) => {
                let nh = LieAlgebra::build(sig, 3).map_err(|e| e.to_string())?;
                let contracted =
                    crate::contraction::contract_algebra(&nh).map_err(|e| e.to_string())?;
                let galilei =
                    LieAlgebra::build(Signature::Galilei, 3).map_err(|e| e.to_string())?;
                let same = galilei.generators().iter().all(|&a| {
                    galilei
                        .generators()
                        .iter()
                        .all(|&b| contracted.bracket(a, b) == galilei.bracket(a, b))
                });
                if same && contracted.verify_jacobi().is_empty() {
                    Ok("contracted algebra equals the built Galilei table".into())
                } else {
                    Err("contracted algebra differs from the built Galilei table".into())
                }
            }
        }
    }
}

fn catalog_ctx(k: u8, sig: Signature, max_order: u32) -> Result<TwistContext, String> {
    TwistContext::catalog(k, sig, 3, &TwistParams::symbolic(), max_order).map_err(|e| e.to_string())
}

/// Star-Jacobi over every ordered coordinate triple of `(t, x_1..x_d)`.
///
/// The nested commutators for ordered triples assemble linearly from the
/// commutators of sorted pairs, so each distinct star product is computed
/// once; the assembled identity is still checked for all `(d+1)^3` triples.
pub fn star_jacobi_check(ctx: &TwistContext) -> Result<usize, String> {
    let mut coords: Vec<(String, Expr)> = vec![("t".into(), Expr::t())];
    for a in 1..=ctx.dim {
        coords.push((format!("x{a}"), Expr::x(a)));
    }
    let n = coords.len();
    // inner commutators for i < j
    let mut inner: BTreeMap<(usize, usize), Expr> = BTreeMap::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let e = star_commutator(&coords[i].1, &coords[j].1, ctx).map_err(|e| e.to_string())?;
            inner.insert((i, j), e);
        }
    }
    // outer commutators [[c_i, c_j], c_k] for i < j, any k
    let mut outer: BTreeMap<(usize, usize, usize), Expr> = BTreeMap::new();
    for (&(i, j), e) in &inner {
        for (k, coord) in coords.iter().enumerate() {
            let v = star_commutator(e, &coord.1, ctx).map_err(|e| e.to_string())?;
            outer.insert((i, j, k), v);
        }
    }
    let signed = |i: usize, j: usize, k: usize| -> Expr {
        use std::cmp::Ordering::*;
        match i.cmp(&j) {
            Equal => Expr::zero(),
            Less => outer[&(i, j, k)].clone(),
            Greater => outer[&(j, i, k)].neg_ref(),
        }
    };
    let mut count = 0;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let j = signed(a, b, c)
                    .add_ref(&signed(b, c, a))
                    .add_ref(&signed(c, a, b));
                if !j.is_zero() {
                    return Err(format!(
                        "jacobi fails on ({}, {}, {}): {}",
                        coords[a].0, coords[b].0, coords[c].0, j
                    ));
                }
                count += 1;
            }
        }
    }
    Ok(count)
}

fn specs_for(suite: Suite) -> Vec<CheckSpec> {
    let mut out = Vec::new();
    let jacobi = || {
        SIGNATURES
            .iter()
            .flat_map(|&sig| [2u8, 3, 4].map(|d| CheckSpec::Jacobi(sig, d)))
            .collect::<Vec<_>>()
    };
    let hom = || {
        SIGNATURES
            .map(|sig| CheckSpec::Homomorphism(sig, 3))
            .to_vec()
    };
    match suite {
        Suite::Jacobi => out.extend(jacobi()),
        Suite::Homomorphism => out.extend(hom()),
        Suite::Cybe => out.extend((1..=15).map(CheckSpec::Cybe)),
        Suite::Cocycle => {
            out.extend((1..=15).map(CheckSpec::Cocycle));
            out.extend((1..=15).map(CheckSpec::Normalization));
        }
        Suite::StarJacobi => {
            for sig in NH_SIGNATURES {
                out.extend((1..=15).map(move |k| CheckSpec::StarJacobi(k, sig)));
            }
        }
        Suite::Contraction => {
            out.extend((1..=15).map(CheckSpec::ContractionTwoPath));
            out.extend(NH_SIGNATURES.map(CheckSpec::ContractionAlgebra));
        }
        Suite::All => {
            for s in [
                Suite::Jacobi,
                Suite::Homomorphism,
                Suite::Cybe,
                Suite::Cocycle,
                Suite::StarJacobi,
                Suite::Contraction,
            ] {
                out.extend(specs_for(s));
            }
        }
    }
    out
}

/// Runs a suite; checks execute in parallel, the report order is fixed.
pub fn run_suite(suite: Suite, max_order: u32) -> SuiteReport {
    let specs = specs_for(suite);
    let checks: Vec<CheckOutcome> = specs
        .par_iter()
        .map(|spec| {
            let start = Instant::now();
            let result = spec.run(max_order);
            let millis = start.elapsed().as_millis();
            match result {
                Ok(detail) => CheckOutcome {
                    name: spec.name(),
                    passed: true,
                    detail,
                    millis,
                },
                Err(detail) => CheckOutcome {
                    name: spec.name(),
                    passed: false,
                    detail,
                    millis,
                },
            }
        })
        .collect();
    let failed = checks.iter().filter(|c| !c.passed).count();
    SuiteReport {
        schema_version: 1,
        suite: suite.as_str().to_string(),
        dim: 3,
        passed: failed == 0,
        total: checks.len(),
        failed,
        checks,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cybe_suite_passes() {
        let report = run_suite(Suite::Cybe, 8);
        assert!(report.passed, "{}", report.render_text());
        assert_eq!(report.total, 15);
    }

    #[test]
    fn jacobi_suite_passes() {
        let report = run_suite(Suite::Jacobi, 8);
        assert!(report.passed);
        assert_eq!(report.total, 9);
    }

    #[test]
    fn star_jacobi_single_twist() {
        let ctx =
            TwistContext::catalog(13, Signature::NHMinus, 3, &TwistParams::symbolic(), 8).unwrap();
        assert_eq!(star_jacobi_check(&ctx).unwrap(), 64);
    }

    #[test]
    fn json_rendering_is_deterministic() {
        let a = serde_json::to_string(&run_suite(Suite::Cybe, 8)).unwrap();
        let b = serde_json::to_string(&run_suite(Suite::Cybe, 8)).unwrap();
        assert_eq!(a, b);
    }
}
