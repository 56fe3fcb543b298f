//! Cross-checks every symbolic table entry against the independent numeric
//! series engine at random rational points.

use nhtwist_core::expr::{NumericBindings, Param};
use nhtwist_core::rmatrix::TwistParams;
use nhtwist_core::twist::catalog_table;
use nhtwist_core::Signature;
use nhtwist_oracle as oracle;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use std::collections::BTreeMap;

const TOL: f64 = 1e-10;
const SERIES_ORDER: u32 = 6;
const POINTS_PER_ENTRY: usize = 10;

fn rational(rng: &mut StdRng) -> f64 {
    let num = loop {
        let n = rng.random_range(-12i32..=12);
        if n != 0 {
            break n;
        }
    };
    let den = rng.random_range(1i32..=8);
    num as f64 / den as f64
}

fn branch_of(sig: Signature) -> oracle::Branch {
    match sig {
        Signature::NHPlus => oracle::Branch::Plus,
        Signature::NHMinus => oracle::Branch::Minus,
        Signature::Galilei => oracle::Branch::Galilei,
    }
}

/// Draws one random parameter assignment for a twist, mirrored into the
/// symbolic bindings and the oracle parameters.
fn draw_params(twist: u8, rng: &mut StdRng) -> (BTreeMap<Param, f64>, oracle::OracleParams) {
    let mut bindings = BTreeMap::new();
    let mut params = oracle::OracleParams::default();
    if matches!(twist, 5 | 9 | 13 | 14 | 15) {
        let v = rational(rng);
        bindings.insert(Param::BetaScalar { twist }, v);
        params.scalar = v;
    } else {
        for k in 1..=3u8 {
            for l in (k + 1)..=3u8 {
                let v = rational(rng);
                bindings.insert(Param::Beta { twist, k, l }, v);
                params.components.insert((k as usize, l as usize), v);
            }
        }
    }
    (bindings, params)
}

fn coordinate(dim: usize, name: &str) -> oracle::NumPoly {
    if name == "t" {
        oracle::NumPoly::coord_t(dim)
    } else {
        let idx: usize = name[1..].parse().unwrap();
        oracle::NumPoly::coord_x(dim, idx)
    }
}

#[test]
fn every_table_entry_matches_the_numeric_oracle() {
    let mut rng = StdRng::seed_from_u64(0x4e48_7477);
    for twist in 1..=15u8 {
        for sig in [Signature::NHPlus, Signature::NHMinus, Signature::Galilei] {
            let table = catalog_table(twist, sig, 3, &TwistParams::symbolic(), 8).unwrap();
            let (bindings, oracle_params) = draw_params(twist, &mut rng);
            let terms = oracle::catalog_terms(twist, 3, &oracle_params);
            let branch = branch_of(sig);
            for (lhs, rhs, entry) in table.entries() {
                let f = coordinate(3, &lhs);
                let g = coordinate(3, &rhs);
                for _ in 0..POINTS_PER_ENTRY {
                    // keep |t/tau| in [3/4, 12]: near zero the expanded
                    // profiles cancel to high order and both float paths
                    // lose the comparison tolerance itself
                    let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
                    let t = sign * rng.random_range(6i32..=24) as f64
                        / rng.random_range(1i32..=2) as f64;
                    let xs = [rational(&mut rng), rational(&mut rng), rational(&mut rng)];
                    let tau = rng.random_range(8i32..=16) as f64 / 4.0;
                    let num_comm =
                        oracle::star_commutator(&f, &g, &terms, branch, tau, SERIES_ORDER);
                    let want = num_comm.eval(branch, t, &xs, tau);
                    let got = entry
                        .eval_numeric(&NumericBindings {
                            t,
                            x: &xs,
                            tau,
                            params: &bindings,
                        })
                        .unwrap();
                    let scale = want.norm().max(1.0);
                    assert!(
                        (got - want).norm() <= TOL * scale,
                        "twist {twist} {sig} [{lhs}, {rhs}] at t={t}, tau={tau}: \
                         symbolic {got}, oracle {want}"
                    );
                }
            }
        }
    }
}

#[test]
fn twist10_entry_example_point() {
    // table entry of twist 10 at t = 1, tau = 2, beta = 1 against the direct
    // numeric star commutator
    let table = catalog_table(10, Signature::NHPlus, 3, &TwistParams::symbolic(), 8).unwrap();
    let mut bindings = BTreeMap::new();
    let mut params = oracle::OracleParams::default();
    bindings.insert(
        Param::Beta {
            twist: 10,
            k: 1,
            l: 2,
        },
        1.0,
    );
    params.components.insert((1, 2), 1.0);
    let terms = oracle::catalog_terms(10, 3, &params);
    let f = oracle::NumPoly::coord_x(3, 1);
    let g = oracle::NumPoly::coord_x(3, 2);
    let want = oracle::star_commutator(&f, &g, &terms, oracle::Branch::Plus, 2.0, SERIES_ORDER)
        .eval(oracle::Branch::Plus, 1.0, &[0.2, 0.3, 0.4], 2.0);
    let got = table.x_x[&(1, 2)]
        .eval_numeric(&NumericBindings {
            t: 1.0,
            x: &[0.2, 0.3, 0.4],
            tau: 2.0,
            params: &bindings,
        })
        .unwrap();
    assert!((got - want).norm() < 1e-12);
}
