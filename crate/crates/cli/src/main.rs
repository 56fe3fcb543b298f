//! `nhtwist`: build the doubly enlarged Newton-Hooke / Galilei algebras,
//! derive twist-deformed space-time tables and coproducts, and run the
//! verification suites.
//!
//! Exit codes: 0 success, 1 verification or reference-table failure,
//! 2 usage error. `NHTWIST_MAX_ORDER` overrides the default twist-series
//! order bound (8).

use clap::{Args, Parser, Subcommand};
use nhtwist_core::document::catalog_document;
use nhtwist_core::expr::{Expr, Param};
use nhtwist_core::parse::{parse_algebra_file, parse_generator, parse_param_assignments};
use nhtwist_core::render;
use nhtwist_core::rmatrix::{BetaValues, TwistParams};
use nhtwist_core::twist::{twisted_coproduct, TwistContext, DEFAULT_MAX_ORDER};
use nhtwist_core::verify::{run_suite, Suite};
use nhtwist_core::{LieAlgebra, Signature};
use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

#[derive(Parser)]
#[command(
    name = "nhtwist",
    version,
    about = "twist-deformed Newton-Hooke space-times"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct TwistArgs {
    /// catalog twist id 1..=15
    #[arg(long)]
    twist: u8,
    /// nh+ | nh- | galilei
    #[arg(long, default_value = "nh+")]
    signature: String,
    #[arg(long, default_value_t = 3)]
    dim: u8,
    /// comma-separated numeric parameter values, e.g. beta10_12=1/2
    #[arg(long)]
    params: Option<String>,
    /// fixed indices: m,k,l for twists 5/9/13/14, i,j for twist 15
    #[arg(long)]
    fixed_indices: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Print a bracket table and optionally verify the Jacobi identity
    Algebra {
        /// nh+ | nh- | galilei
        #[arg(long, default_value = "nh+")]
        signature: String,
        #[arg(long, default_value_t = 3)]
        dim: u8,
        /// run the exhaustive Jacobi check
        #[arg(long)]
        verify: bool,
        /// load a custom structure-constant file instead of a built-in family
        #[arg(long)]
        algebra_file: Option<PathBuf>,
        /// plain | md | json
        #[arg(long, default_value = "plain")]
        format: String,
    },
    /// Derive the deformed space-time commutator table of one twist
    Table {
        #[command(flatten)]
        twist: TwistArgs,
        /// plain | md | latex | json
        #[arg(long, default_value = "plain")]
        format: String,
        /// compare against the embedded reference tables
        #[arg(long)]
        check_paper: bool,
    },
    /// Run a verification suite
    Verify {
        /// all | cybe | cocycle | homomorphism | jacobi | star-jacobi | contraction
        suite: String,
        /// plain | md | json
        #[arg(long, default_value = "plain")]
        format: String,
        /// restrict to the Jacobi check of a custom algebra file
        #[arg(long)]
        algebra_file: Option<PathBuf>,
    },
    /// Twisted coproduct of one generator
    Coproduct {
        /// generator name, e.g. P1, K2, M12, H
        #[arg(long)]
        gen: String,
        #[command(flatten)]
        twist: TwistArgs,
        /// series order bound
        #[arg(long)]
        order: Option<u32>,
        /// plain | latex | json
        #[arg(long, default_value = "plain")]
        format: String,
    },
}

fn usage_error(msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn parse_signature(s: &str) -> Option<Signature> {
    Signature::parse(s)
}

fn max_order_from_env() -> Result<u32, String> {
    match std::env::var("NHTWIST_MAX_ORDER") {
        Ok(v) => v
            .parse::<u32>()
            .map_err(|_| format!("NHTWIST_MAX_ORDER must be a non-negative integer, got {v:?}")),
        Err(_) => Ok(DEFAULT_MAX_ORDER),
    }
}

fn timestamp() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

/// Resolves `--params` / `--fixed-indices` into catalog twist parameters.
/// Returns the parameter set plus the numeric bindings (empty = symbolic).
fn resolve_twist_params(args: &TwistArgs) -> Result<(TwistParams, BTreeMap<Param, Expr>), String> {
    let mut params = TwistParams::symbolic();
    if let Some(spec) = &args.fixed_indices {
        let parts: Vec<u8> = spec
            .split(',')
            .map(|p| p.trim().parse::<u8>())
            .collect::<Result<_, _>>()
            .map_err(|_| {
                format!("--fixed-indices must be a comma-separated index list, got {spec:?}")
            })?;
        match (args.twist, parts.as_slice()) {
            (5 | 9 | 13 | 14, [m, k, l]) => {
                params.m = *m;
                params.kl = (*k, *l);
            }
            (15, [i, j]) => {
                params.ij = (*i, *j);
            }
            (5 | 9 | 13 | 14, _) => {
                return Err("twists 5/9/13/14 need --fixed-indices m,k,l".into())
            }
            (15, _) => return Err("twist 15 needs --fixed-indices i,j".into()),
            _ => return Err(format!("twist {} takes no fixed indices", args.twist)),
        }
    }
    let mut bound = BTreeMap::new();
    if let Some(text) = &args.params {
        let assignments = parse_param_assignments(text).map_err(|e| format!("--params: {e}"))?;
        let mut components: BTreeMap<(u8, u8), Expr> = BTreeMap::new();
        let mut scalar: Option<Expr> = None;
        for (param, value) in assignments {
            if value.as_scalar().is_none() {
                return Err(format!(
                    "--params value for {param} must be a rational constant"
                ));
            }
            match &param {
                Param::Beta { twist, k, l } if *twist == args.twist => {
                    components.insert((*k, *l), value.clone());
                }
                Param::BetaScalar { twist } if *twist == args.twist => {
                    scalar = Some(value.clone());
                }
                _ => {
                    return Err(format!(
                        "parameter {param} does not belong to twist {}",
                        args.twist
                    ))
                }
            }
            bound.insert(param, value);
        }
        params.beta = match scalar {
            Some(v) if components.is_empty() => BetaValues::Scalar(v),
            None => BetaValues::Components(components),
            Some(_) => return Err("mixed scalar and array parameters".into()),
        };
    }
    Ok((params, bound))
}

fn build_context(
    args: &TwistArgs,
    max_order: u32,
) -> Result<(TwistContext, BTreeMap<Param, Expr>), String> {
    let signature = parse_signature(&args.signature)
        .ok_or_else(|| format!("unknown signature {:?}", args.signature))?;
    let (params, bound) = resolve_twist_params(args)?;
    let ctx = TwistContext::catalog(args.twist, signature, args.dim, &params, max_order)
        .map_err(|e| e.to_string())?;
    Ok((ctx, bound))
}

fn cmd_algebra(
    signature: &str,
    dim: u8,
    verify: bool,
    algebra_file: Option<&PathBuf>,
    format: &str,
) -> ExitCode {
    let alg = if let Some(path) = algebra_file {
        let text = match std::fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) => return usage_error(&format!("cannot read {}: {e}", path.display())),
        };
        match parse_algebra_file(&text) {
            Ok(a) => a,
            Err(e) => return usage_error(&e.to_string()),
        }
    } else {
        let Some(sig) = parse_signature(signature) else {
            return usage_error(&format!("unknown signature {signature:?}"));
        };
        match LieAlgebra::build(sig, dim) {
            Ok(a) => a,
            Err(e) => return usage_error(&e.to_string()),
        }
    };

    let violations = if verify {
        alg.verify_jacobi()
    } else {
        Vec::new()
    };

    match format {
        "json" => {
            let brackets: Vec<serde_json::Value> = algebra_rows(&alg)
                .into_iter()
                .map(|(a, b, v)| serde_json::json!({ "lhs": [a, b], "value": v }))
                .collect();
            let doc = serde_json::json!({
                "schema_version": 1,
                "name": alg.name,
                "dim": alg.dim,
                "generators": alg.generators().iter().map(|g| g.to_string()).collect::<Vec<_>>(),
                "brackets": brackets,
                "jacobi": if verify {
                    serde_json::json!({
                        "checked": true,
                        "violations": violations.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
                    })
                } else {
                    serde_json::json!({ "checked": false })
                },
            });
            println!("{}", serde_json::to_string_pretty(&doc).unwrap());
        }
        "md" => {
            println!("| bracket | value |\n|---|---|");
            for (a, b, v) in algebra_rows(&alg) {
                println!("| `[{a}, {b}]` | `{v}` |");
            }
            if verify {
                println!("\njacobi: {} violating triples", violations.len());
            }
        }
        "plain" => {
            println!("algebra {} (d = {})", alg.name, alg.dim);
            for (a, b, v) in algebra_rows(&alg) {
                println!("[{a}, {b}] = {v}");
            }
            if verify {
                if violations.is_empty() {
                    println!("jacobi: pass (0 violating triples)");
                } else {
                    println!("jacobi: FAIL ({} violating triples)", violations.len());
                    for v in violations.iter().take(5) {
                        println!("  {v}");
                    }
                }
            }
        }
        other => return usage_error(&format!("unknown format {other:?}")),
    }
    if verify && !violations.is_empty() {
        return ExitCode::from(1);
    }
    ExitCode::SUCCESS
}

/// Nonzero brackets plus the `[H, P_i]` rows that distinguish the families.
fn algebra_rows(alg: &LieAlgebra) -> Vec<(String, String, String)> {
    use nhtwist_core::Generator;
    let mut rows: Vec<(String, String, String)> = alg
        .bracket_table()
        .map(|((a, b), v)| (a.to_string(), b.to_string(), v.to_string()))
        .collect();
    for i in 1..=alg.dim {
        let (h, p) = (Generator::H, Generator::P(i));
        if alg.contains(&h) && alg.contains(&p) && alg.bracket(h, p).is_zero() {
            rows.push((h.to_string(), p.to_string(), "0".to_string()));
        }
    }
    rows.sort();
    rows
}

fn cmd_table(args: &TwistArgs, format: &str, check_paper: bool, max_order: u32) -> ExitCode {
    if check_paper && (args.params.is_some() || args.dim != 3) {
        return usage_error("--check-paper requires symbolic parameters and --dim 3");
    }
    let (ctx, bound) = match build_context(args, max_order) {
        Ok(v) => v,
        Err(e) => return usage_error(&e),
    };
    let table = match nhtwist_core::twist::spacetime_table(&ctx) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let doc = catalog_document(&table, args.params.is_none(), &bound, check_paper);
    match format {
        "json" => println!("{}", doc.to_json()),
        "md" => print!("{}", doc.render_markdown()),
        "latex" => print!("{}", doc.render_latex()),
        "plain" => {
            println!("twist {} / {} / d = {}", doc.twist, doc.signature, doc.dim);
            for rel in &doc.relations {
                println!("[{}, {}]* = {}", rel.lhs[0], rel.lhs[1], rel.plain);
            }
            println!(
                "classification: {} (time profile {}, coordinate degree {})",
                doc.classification.kind,
                doc.classification.time_profile,
                doc.classification.coordinate_degree
            );
            if let Some(check) = &doc.reference_check {
                for e in check {
                    let note = e.note.as_deref().unwrap_or("");
                    println!(
                        "reference [{}, {}]: {}{}{}",
                        e.lhs[0],
                        e.lhs[1],
                        e.status,
                        if note.is_empty() { "" } else { " -- " },
                        note
                    );
                }
            }
        }
        other => return usage_error(&format!("unknown format {other:?}")),
    }
    if check_paper {
        let failed = doc
            .reference_check
            .as_deref()
            .map(|entries| entries.iter().any(|e| e.status == "unexpected-mismatch"))
            .unwrap_or(true);
        if failed {
            eprintln!("error: computed table differs from the reference beyond the errata ledger");
            return ExitCode::from(1);
        }
    }
    ExitCode::SUCCESS
}

fn cmd_verify(
    suite: &str,
    format: &str,
    algebra_file: Option<&PathBuf>,
    max_order: u32,
) -> ExitCode {
    if let Some(path) = algebra_file {
        if suite != "jacobi" {
            return usage_error("--algebra-file only supports the jacobi suite");
        }
        let text = match std::fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) => return usage_error(&format!("cannot read {}: {e}", path.display())),
        };
        let alg = match parse_algebra_file(&text) {
            Ok(a) => a,
            Err(e) => return usage_error(&e.to_string()),
        };
        let violations = alg.verify_jacobi();
        let passed = violations.is_empty();
        match format {
            "json" => {
                let doc = serde_json::json!({
                    "schema_version": 1,
                    "suite": "jacobi",
                    "algebra": alg.name,
                    "passed": passed,
                    "violations": violations.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
                    "timestamp": timestamp(),
                });
                println!("{}", serde_json::to_string_pretty(&doc).unwrap());
            }
            _ => {
                if passed {
                    println!("PASS  jacobi/{}: 0 violating triples", alg.name);
                } else {
                    println!("FAIL  jacobi/{}", alg.name);
                    for v in &violations {
                        println!("  {v}");
                    }
                }
            }
        }
        return if passed {
            ExitCode::SUCCESS
        } else {
            ExitCode::from(1)
        };
    }

    let Some(suite) = Suite::parse(suite) else {
        return usage_error(&format!(
            "unknown suite {suite:?}; expected all|cybe|cocycle|homomorphism|jacobi|star-jacobi|contraction"
        ));
    };
    let report = run_suite(suite, max_order);
    match format {
        "json" => {
            let doc = serde_json::json!({ "report": report, "timestamp": timestamp() });
            println!("{}", serde_json::to_string_pretty(&doc).unwrap());
        }
        "md" => print!("{}", report.render_markdown()),
        "plain" => print!("{}", report.render_text()),
        other => return usage_error(&format!("unknown format {other:?}")),
    }
    if report.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn cmd_coproduct(
    gen: &str,
    args: &TwistArgs,
    order: Option<u32>,
    format: &str,
    max_order: u32,
) -> ExitCode {
    let Ok((g, sign)) = parse_generator(gen) else {
        return usage_error(&format!("unknown generator {gen:?}"));
    };
    if sign != 1 {
        return usage_error("generator must be given in canonical orientation (i < j for Mij)");
    }
    let (ctx, _) = match build_context(args, max_order) {
        Ok(v) => v,
        Err(e) => return usage_error(&e),
    };
    if !ctx.algebra.contains(&g) {
        return usage_error(&format!("generator {g} does not exist at d = {}", args.dim));
    }
    let series_order = order.unwrap_or(max_order);
    let result = twisted_coproduct(g, &ctx, series_order);
    let status = match result.truncated_at {
        None => "exact".to_string(),
        Some(n) => format!("truncated at order {n}"),
    };
    match format {
        "json" => {
            let terms: Vec<serde_json::Value> = result
                .value
                .terms()
                .map(|(k, c)| {
                    serde_json::json!({
                        "slots": [k[0].to_string(), k[1].to_string()],
                        "coeff": render::plain(c),
                    })
                })
                .collect();
            let doc = serde_json::json!({
                "schema_version": 1,
                "generator": g.to_string(),
                "twist": args.twist,
                "signature": ctx.signature.to_string(),
                "order_bound": series_order,
                "exact": result.truncated_at.is_none(),
                "terms": terms,
            });
            println!("{}", serde_json::to_string_pretty(&doc).unwrap());
        }
        "latex" => {
            println!(
                "\\Delta_F({}) = {} \\quad [{status}]",
                render::generator_latex(&g),
                render::tensor2_latex(&result.value)
            );
        }
        "plain" => {
            println!("Delta_F({g}) = {} ({status})", result.value);
        }
        other => return usage_error(&format!("unknown format {other:?}")),
    }
    ExitCode::SUCCESS
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let max_order = match max_order_from_env() {
        Ok(v) => v,
        Err(e) => return usage_error(&e),
    };
    match &cli.command {
        Command::Algebra {
            signature,
            dim,
            verify,
            algebra_file,
            format,
        } => cmd_algebra(signature, *dim, *verify, algebra_file.as_ref(), format),
        Command::Table {
            twist,
            format,
            check_paper,
        } => cmd_table(twist, format, *check_paper, max_order),
        Command::Verify {
            suite,
            format,
            algebra_file,
        } => cmd_verify(suite, format, algebra_file.as_ref(), max_order),
        Command::Coproduct {
            gen,
            twist,
            order,
            format,
        } => cmd_coproduct(gen, twist, *order, format, max_order),
    }
}
