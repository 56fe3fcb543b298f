//! Randomized property tests for the expression ring and the series
//! machinery, plus sweeps that are too broad for inline unit tests.

use nhtwist_core::expr::{normalize, Atom, Expr, NumericBindings, Param};
use nhtwist_core::scalar::GaussianRational;
use nhtwist_core::Signature;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use std::collections::BTreeMap;

fn random_expr(rng: &mut StdRng, depth: u32) -> Expr {
    let atoms = [
        Atom::T,
        Atom::X(1),
        Atom::X(2),
        Atom::X(3),
        Atom::CPlus,
        Atom::CMinus,
        Atom::SPlus,
        Atom::SMinus,
        Atom::Param(Param::named("a")),
    ];
    let mut expr = Expr::zero();
    let terms = rng.random_range(1..=3 + depth);
    for _ in 0..terms {
        let mut term = Expr::scalar(GaussianRational::from_ratio(
            rng.random_range(-6i64..=6),
            rng.random_range(1i64..=4),
        ));
        if rng.random_bool(0.4) {
            term = term.mul_ref(&Expr::i());
        }
        if rng.random_bool(0.5) {
            term = term.mul_ref(&Expr::tau(rng.random_range(-2i32..=2)));
        }
        let factors = rng.random_range(0..=3);
        for _ in 0..factors {
            let atom = atoms[rng.random_range(0..atoms.len())].clone();
            term = term.mul_ref(&Expr::atom(atom).pow(rng.random_range(1..=2)));
        }
        expr = expr.add_ref(&term);
    }
    expr
}

fn eval(e: &Expr, t: f64, tau: f64) -> num_complex::Complex64 {
    let mut params = BTreeMap::new();
    params.insert(Param::named("a"), 0.37);
    e.eval_numeric(&NumericBindings {
        t,
        x: &[0.4, -1.2, 2.3],
        tau,
        params: &params,
    })
    .unwrap()
}

#[test]
fn ring_axioms_randomized() {
    let mut rng = StdRng::seed_from_u64(11);
    for _ in 0..200 {
        let a = random_expr(&mut rng, 1);
        let b = random_expr(&mut rng, 1);
        let c = random_expr(&mut rng, 1);
        // commutativity and associativity of both operations
        assert_eq!(a.add_ref(&b), b.add_ref(&a));
        assert_eq!(a.mul_ref(&b), b.mul_ref(&a));
        assert_eq!(a.add_ref(&b).add_ref(&c), a.add_ref(&b.add_ref(&c)));
        assert_eq!(a.mul_ref(&b).mul_ref(&c), a.mul_ref(&b.mul_ref(&c)));
        // distributivity
        assert_eq!(
            a.mul_ref(&b.add_ref(&c)),
            a.mul_ref(&b).add_ref(&a.mul_ref(&c))
        );
        // additive inverse
        assert!(a.sub_ref(&a).is_zero());
    }
}

#[test]
fn derivatives_commute_randomized() {
    let mut rng = StdRng::seed_from_u64(12);
    for _ in 0..200 {
        let e = random_expr(&mut rng, 2);
        for i in 1..=3u8 {
            let a = e.diff_t().diff_x(i, 3).unwrap();
            let b = e.diff_x(i, 3).unwrap().diff_t();
            assert_eq!(a, b);
        }
    }
}

#[test]
fn normalize_is_idempotent_and_evaluation_preserving() {
    let mut rng = StdRng::seed_from_u64(13);
    for _ in 0..200 {
        let e = random_expr(&mut rng, 2);
        let renormalized = normalize(&e.to_tree());
        assert_eq!(renormalized, e);
        let v1 = eval(&e, 0.8, 1.7);
        let v2 = eval(&renormalized, 0.8, 1.7);
        let scale = v1.norm().max(1.0);
        assert!((v1 - v2).norm() <= 1e-12 * scale);
    }
}

#[test]
fn taylor_matches_numerically_at_large_tau() {
    // |taylor(e, N) - e| = O(tau^-(N+1)) at tau = 1000, t = 1. An explicit
    // tau^m prefactor shifts the error order by m, so the sample expressions
    // here are kept at non-positive tau powers.
    let mut rng = StdRng::seed_from_u64(14);
    let tau = 1000.0;
    for _ in 0..100 {
        let raw = random_expr(&mut rng, 1);
        let shift = Expr::tau(-raw.max_tau_power().unwrap_or(0).max(0));
        let e = raw.mul_ref(&shift);
        for order in [2u32, 4] {
            let approx = e.taylor_atoms(order);
            let exact = eval(&e, 1.0, tau);
            let series = eval(&approx, 1.0, tau);
            // coefficients of the dropped terms are at most 1/ (order+1)!,
            // leave two orders of magnitude of slack for term counts
            let bound = 100.0 * tau.powi(-(order as i32 + 1)) * exact.norm().max(1.0);
            assert!(
                (exact - series).norm() <= bound,
                "order {order}: |diff| = {}",
                (exact - series).norm()
            );
        }
    }
}

#[test]
fn taylor_expansion_matches_independent_series_convolution() {
    // 36 tau^6 (S+ - t/tau)^2 expanded to atom order 7, checked against a
    // convolution of the raw sinh coefficients computed from factorials
    let s_lin = &Expr::atom(Atom::SPlus) - &(&Expr::t() * &Expr::tau(-1));
    let e = s_lin
        .pow(2)
        .mul_ref(&Expr::tau(6))
        .scale(&GaussianRational::from_int(36));
    let expansion = e.taylor_atoms(7);

    // independent oracle: c_k = 1/(2k+1)! for sinh, shifted by the -u term
    let fact = |n: u64| -> i64 { (1..=n).product::<u64>() as i64 };
    // coefficients of (sinh u - u) in powers of u, up to u^7
    let mut tail = vec![GaussianRational::zero(); 8];
    for k in 1..=3u64 {
        tail[(2 * k + 1) as usize] = GaussianRational::from_ratio(1, fact(2 * k + 1));
    }
    // convolution gives (sinh u - u)^2 up to u^14
    let mut squared = vec![GaussianRational::zero(); 15];
    for p in 0..=7usize {
        for q in 0..=7usize {
            squared[p + q] = &squared[p + q] + &(&tail[p] * &tail[q]);
        }
    }
    let mut expected = Expr::zero();
    for (power, coeff) in squared.iter().enumerate() {
        if coeff.is_zero() {
            continue;
        }
        // u^power = t^power tau^-power, overall 36 tau^6
        let term = Expr::t()
            .pow(power as u32)
            .mul_ref(&Expr::tau(6 - power as i32))
            .scale(&(coeff * &GaussianRational::from_int(36)));
        expected = expected.add_ref(&term);
    }
    assert_eq!(expansion, expected);
    // leading part: t^6 plus a t^8/(10 tau^2) correction
    assert_eq!(e.limit_tau_inf().unwrap(), Expr::t().pow(6));
}

#[test]
fn coassociativity_for_every_catalog_twist_and_generator() {
    use nhtwist_core::rmatrix::TwistParams;
    use nhtwist_core::twist::{coproduct_coassociativity, TwistContext};
    for twist in 1..=15u8 {
        for sig in [Signature::NHPlus, Signature::NHMinus] {
            let ctx = TwistContext::catalog(twist, sig, 3, &TwistParams::symbolic(), 8).unwrap();
            let gens = ctx.algebra.generators().to_vec();
            for g in gens {
                assert!(
                    coproduct_coassociativity(g, &ctx, 3),
                    "twist {twist} {sig} generator {g}"
                );
            }
        }
    }
}

#[test]
fn star_commutator_of_equal_arguments_vanishes() {
    use nhtwist_core::rmatrix::TwistParams;
    use nhtwist_core::twist::{star_commutator, TwistContext};
    for twist in [1u8, 10, 15] {
        let ctx = TwistContext::catalog(twist, Signature::NHMinus, 3, &TwistParams::symbolic(), 8)
            .unwrap();
        assert!(star_commutator(&Expr::t(), &Expr::t(), &ctx)
            .unwrap()
            .is_zero());
        assert!(star_commutator(&Expr::x(1), &Expr::x(1), &ctx)
            .unwrap()
            .is_zero());
    }
}

#[test]
fn zero_deformation_twist_structures_are_trivial() {
    use nhtwist_core::rmatrix::TwistParams;
    use nhtwist_core::twist::{verify_cocycle, verify_normalization, TwistContext};
    let ctx = TwistContext::catalog(10, Signature::NHPlus, 3, &TwistParams::zero(), 8).unwrap();
    // F = 1 (x) 1: both cocycle sides are 1 (x) 1 (x) 1 and the counit is 1
    assert!(verify_cocycle(&ctx, 3).holds());
    assert!(verify_normalization(&ctx));
}

#[test]
fn diffop_composition_associative_randomized() {
    use nhtwist_core::diffop::DiffOp;
    let mut rng = StdRng::seed_from_u64(15);
    let random_op = |rng: &mut StdRng| -> DiffOp {
        let mut op = DiffOp::zero();
        for _ in 0..rng.random_range(1..=2) {
            let coeff = random_expr(rng, 0);
            let term = if rng.random_bool(0.3) {
                DiffOp::first_order_t(coeff)
            } else {
                DiffOp::first_order_x(coeff, rng.random_range(1..=3))
            };
            op = op.add(&term);
        }
        op
    };
    for _ in 0..60 {
        let a = random_op(&mut rng);
        let b = random_op(&mut rng);
        let c = random_op(&mut rng);
        assert_eq!(a.compose(&b).compose(&c), a.compose(&b.compose(&c)));
        // application agrees with nested application
        let e = random_expr(&mut rng, 1);
        assert_eq!(a.compose(&b).apply(&e), a.apply(&b.apply(&e)));
    }
}
