//! Embedded reference forms of the thirty published commutator tables
//! (fifteen twists, NH branches and Galilei limits) and the errata ledger.
//!
//! Reference tables use spatial dimension 3, symbolic deformation parameters
//! and the default fixed indices `m = 3, (k, l) = (1, 2)`, `(i, j) = (1, 2)`.
//!
//! The errata ledger records printed values that are internally inconsistent
//! with the algebra, realization and star product the same source defines.
//! Every discrepancy is adjudicated twice: the exact engine derives the
//! entry from first principles, and an independent numeric series oracle
//! confirms it in the test suite. Ledger:
//!  * items 5 and 9 (NH): the last bracket factor prints `delta_ik` where
//!    the pattern of items 13-14 (and the Galilei list) gives `delta_ak`;
//!    read as `delta_ak`.
//!  * items 7 and 8 (NH and Galilei): the printed prefactor is half the
//!    derived one (`+/-i` versus `+/-2i`; `i/2` versus `i` after the limit).
//!    Neighbouring items 2, 3, 4, 6, 9-14 all match the same derivation.
//!  * Galilei labels: item 4 drops the `kl` superscript, item 5 adds one to
//!    a scalar parameter, item 7 prints `beta_2` for `beta_7`, item 9 prints
//!    `beta_4` for `beta_9`.

use crate::algebra::Signature;
use crate::expr::{Atom, Expr, Param};
use crate::scalar::GaussianRational;
use crate::twist::CommutatorTable;
use std::collections::BTreeMap;

/// Outcome of comparing one computed entry against the printed form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GoldenStatus {
    /// Exact syntactic match with the printed table.
    MatchesPaper,
    /// Matches the printed table after resolving a recorded notational
    /// erratum (index or label typo).
    MatchesPaperWithNote,
    /// Differs from the printed value exactly as the errata ledger records;
    /// the computed value is the oracle-confirmed one.
    ComputedDiffersFromPaper,
    /// Differs in a way the ledger does not cover: a genuine failure.
    UnexpectedMismatch,
}

#[derive(Clone, Debug)]
pub struct EntryCheck {
    pub lhs: String,
    pub rhs: String,
    pub computed: Expr,
    pub printed: Expr,
    pub status: GoldenStatus,
    pub note: Option<&'static str>,
}

#[derive(Clone, Debug)]
pub struct GoldenCheck {
    pub twist: u8,
    pub signature: Signature,
    pub entries: Vec<EntryCheck>,
}

impl GoldenCheck {
    /// Passes when every entry matches the paper or a recorded erratum.
    pub fn passes(&self) -> bool {
        self.entries
            .iter()
            .all(|e| e.status != GoldenStatus::UnexpectedMismatch)
    }

    pub fn fully_matches_paper(&self) -> bool {
        self.entries.iter().all(|e| {
            matches!(
                e.status,
                GoldenStatus::MatchesPaper | GoldenStatus::MatchesPaperWithNote
            )
        })
    }
}

/// NH-sector note for a twist, if any.
fn nh_note(twist: u8) -> Option<&'static str> {
    match twist {
        5 | 9 => Some("printed bracket ends in delta_ik; read as delta_ak (items 13-14 pattern)"),
        7 | 8 => Some("printed prefactor is half the derived one (+/-i vs +/-2i)"),
        _ => None,
    }
}

/// Galilei-sector note for a twist, if any.
fn galilei_note(twist: u8) -> Option<&'static str> {
    match twist {
        4 => Some("printed without the kl superscript on beta_4"),
        5 => Some("printed with a spurious kl superscript on the scalar beta_5"),
        7 => Some("printed (i/2) beta_2^kl t^2: coefficient is half the derived one and the label should be beta_7"),
        8 => Some("printed (i/2) beta_8^kl t^3: coefficient is half the derived one"),
        9 => Some("printed beta_4 for beta_9"),
        _ => None,
    }
}

/// Twists whose printed prefactor is half the derived value (both sectors).
pub fn printed_is_half(twist: u8) -> bool {
    matches!(twist, 7 | 8)
}

fn branch(sig: Signature) -> (Expr, Expr, i64) {
    match sig {
        Signature::NHPlus => (Expr::atom(Atom::CPlus), Expr::atom(Atom::SPlus), 1),
        Signature::NHMinus => (Expr::atom(Atom::CMinus), Expr::atom(Atom::SMinus), -1),
        Signature::Galilei => unreachable!("branch profiles are NH-only"),
    }
}

/// The scalar prefactor of the printed `[x_a, x_b]` entry: everything except
/// `i`, the deformation parameter and the index pattern.
fn nh_profile(twist: u8, sig: Signature) -> Expr {
    let (c, s, sign) = branch(sig);
    let one = Expr::one();
    let s_minus_lin = &s - &(&Expr::t() * &Expr::tau(-1)); // S - t/tau
    let c_minus_one = &c - &one;
    let scaled = |e: Expr, n: i64, tau: i32| -> Expr {
        e.mul_ref(&Expr::tau(tau))
            .scale(&GaussianRational::from_int(n))
    };
    match twist {
        1 => scaled(s_minus_lin.pow(2), 36, 6),
        2 => scaled(s_minus_lin.mul_ref(&c_minus_one), 12, 5),
        3 => scaled(s_minus_lin.mul_ref(&c), 6 * sign, 3),
        4 => scaled(s_minus_lin.mul_ref(&s), 6 * sign, 4),
        5 => scaled(s_minus_lin, 12 * sign, 3),
        6 => scaled(c_minus_one.pow(2), 4, 4),
        7 => scaled(c_minus_one.mul_ref(&c), sign, 2),
        8 => scaled(c_minus_one.mul_ref(&s), sign, 3),
        9 => scaled(c_minus_one, 4 * sign, 2),
        10 => c.pow(2),
        11 => scaled(c.mul_ref(&s), 1, 1),
        12 => scaled(s.pow(2), 1, 2),
        13 => scaled(s, 2, 1),
        14 => c.scale(&GaussianRational::from_int(2)),
        _ => unreachable!("item 15 has no x-x profile"),
    }
}

/// The printed Galilei profile (the `t`-power part of items 1-14).
fn galilei_profile(twist: u8) -> Expr {
    let t = Expr::t();
    let r = |num: i64, den: i64, p: u32| t.pow(p).scale(&GaussianRational::from_ratio(num, den));
    match twist {
        1 => r(1, 1, 6),
        2 => r(1, 1, 5),
        3 => r(1, 1, 3),
        4 => r(1, 1, 4),
        5 => r(2, 1, 3),
        6 => r(1, 1, 4),
        7 => r(1, 2, 2),
        8 => r(1, 2, 3),
        9 => r(2, 1, 2),
        10 => r(1, 1, 0),
        11 => r(1, 1, 1),
        12 => r(1, 1, 2),
        13 => r(2, 1, 1),
        14 => r(2, 1, 0),
        _ => unreachable!("item 15 has no x-x profile"),
    }
}

fn is_array_twist(twist: u8) -> bool {
    matches!(twist, 1 | 2 | 3 | 4 | 6 | 7 | 8 | 10 | 11 | 12)
}

/// Rotation-bracket value for defaults `m = 3, (k, l) = (1, 2)`:
/// `d_ma (x_k d_bl - x_l d_bk) - d_mb (x_k d_al - x_l d_ak)`.
fn rotation_bracket(a: u8, b: u8) -> Expr {
    let delta = |p: u8, q: u8| -> i64 { (p == q) as i64 };
    let (m, k, l) = (3u8, 1u8, 2u8);
    let term = |x: u8, s: i64| -> Expr {
        if s == 0 {
            Expr::zero()
        } else {
            Expr::x(x).scale(&GaussianRational::from_int(s))
        }
    };
    let first = term(k, delta(m, a) * delta(b, l)).sub_ref(&term(l, delta(m, a) * delta(b, k)));
    let second = term(k, delta(m, b) * delta(a, l)).sub_ref(&term(l, delta(m, b) * delta(a, k)));
    first.sub_ref(&second)
}

/// The printed table for `(twist, signature)` at `d = 3`, symbolic
/// parameters, default fixed indices; notational errata resolved as the
/// module docs describe.
pub fn golden_table(twist: u8, signature: Signature) -> CommutatorTable {
    let dim = 3u8;
    let mut t_x: BTreeMap<u8, Expr> = (1..=dim).map(|a| (a, Expr::zero())).collect();
    let mut x_x: BTreeMap<(u8, u8), Expr> = BTreeMap::new();
    for a in 1..=dim {
        for b in (a + 1)..=dim {
            x_x.insert((a, b), Expr::zero());
        }
    }

    if twist == 15 {
        // [t, x_a] = 2 i beta15 (d_ia x_j - x_i d_ja) with (i, j) = (1, 2)
        let two_i_b = Expr::i()
            .mul_ref(&Expr::param(Param::BetaScalar { twist: 15 }))
            .scale(&GaussianRational::from_int(2));
        t_x.insert(1, two_i_b.mul_ref(&Expr::x(2)));
        t_x.insert(2, two_i_b.mul_ref(&Expr::x(1)).neg_ref());
        return CommutatorTable {
            twist: Some(15),
            signature,
            dim,
            t_x,
            x_x,
        };
    }

    let profile = match signature {
        Signature::Galilei => galilei_profile(twist),
        _ => nh_profile(twist, signature),
    };
    if is_array_twist(twist) {
        // i * profile * beta^kl (d_ak d_bl - d_al d_bk) = 2 i profile beta^ab
        for a in 1..=dim {
            for b in (a + 1)..=dim {
                let entry = Expr::i()
                    .mul_ref(&profile)
                    .mul_ref(&Expr::param(Param::Beta { twist, k: a, l: b }))
                    .scale(&GaussianRational::from_int(2));
                x_x.insert((a, b), entry);
            }
        }
    } else {
        // i * profile * beta * rotation bracket
        let i_beta = Expr::i().mul_ref(&Expr::param(Param::BetaScalar { twist }));
        for a in 1..=dim {
            for b in (a + 1)..=dim {
                let entry = i_beta.mul_ref(&profile).mul_ref(&rotation_bracket(a, b));
                x_x.insert((a, b), entry);
            }
        }
    }
    CommutatorTable {
        twist: Some(twist),
        signature,
        dim,
        t_x,
        x_x,
    }
}

/// Compares a computed table against the printed reference, classifying
/// each entry through the errata ledger.
pub fn check_against_paper(computed: &CommutatorTable) -> Option<GoldenCheck> {
    let twist = computed.twist?;
    if computed.dim != 3 {
        return None;
    }
    let reference = golden_table(twist, computed.signature);
    let note = match computed.signature {
        Signature::Galilei => galilei_note(twist),
        _ => nh_note(twist),
    };
    let half = printed_is_half(twist);
    let mut entries = Vec::new();
    for ((lhs, rhs, comp), (_, _, printed)) in computed.entries().zip(reference.entries()) {
        let status = if comp == printed {
            // label/index notes are informational and only tag entries that
            // actually exhibit the misprinted pattern
            if note.is_some() && !half && !comp.is_zero() {
                GoldenStatus::MatchesPaperWithNote
            } else {
                GoldenStatus::MatchesPaper
            }
        } else if half && *comp == printed.scale(&GaussianRational::from_int(2)) {
            GoldenStatus::ComputedDiffersFromPaper
        } else {
            GoldenStatus::UnexpectedMismatch
        };
        entries.push(EntryCheck {
            lhs,
            rhs,
            computed: comp.clone(),
            printed: printed.clone(),
            status,
            note: if status == GoldenStatus::MatchesPaper {
                None
            } else {
                note
            },
        });
    }
    Some(GoldenCheck {
        twist,
        signature: computed.signature,
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rmatrix::TwistParams;
    use crate::twist::{catalog_table, DEFAULT_MAX_ORDER};

    fn computed(twist: u8, sig: Signature) -> CommutatorTable {
        catalog_table(twist, sig, 3, &TwistParams::symbolic(), DEFAULT_MAX_ORDER).unwrap()
    }

    #[test]
    fn golden_nh_tables_match_modulo_ledger() {
        for twist in 1..=15u8 {
            for sig in [Signature::NHPlus, Signature::NHMinus] {
                let check = check_against_paper(&computed(twist, sig)).unwrap();
                assert!(check.passes(), "twist {twist} {sig}");
                if printed_is_half(twist) {
                    assert!(
                        check
                            .entries
                            .iter()
                            .any(|e| e.status == GoldenStatus::ComputedDiffersFromPaper),
                        "twist {twist} {sig} should hit the factor-2 erratum"
                    );
                } else {
                    assert!(check.fully_matches_paper(), "twist {twist} {sig}");
                }
            }
        }
    }

    #[test]
    fn golden_galilei_tables_match_modulo_ledger() {
        for twist in 1..=15u8 {
            let check = check_against_paper(&computed(twist, Signature::Galilei)).unwrap();
            assert!(check.passes(), "twist {twist} galilei");
            if printed_is_half(twist) {
                assert!(check
                    .entries
                    .iter()
                    .any(|e| e.status == GoldenStatus::ComputedDiffersFromPaper));
            } else {
                assert!(check.fully_matches_paper(), "twist {twist} galilei");
            }
        }
    }

    #[test]
    fn spot_check_item1_nh_plus() {
        // [x_1, x_2] = 36 i b1^kl tau^6 (S+ - t/tau)^2 (dd - dd) -> 72 i b1^12 (...)
        let table = computed(1, Signature::NHPlus);
        let u = &Expr::atom(Atom::CPlus); // silence unused warnings in edits
        let _ = u;
        let s_lin = &Expr::atom(Atom::SPlus) - &(&Expr::t() * &Expr::tau(-1));
        let expected = Expr::i()
            .mul_ref(&s_lin.pow(2))
            .mul_ref(&Expr::tau(6))
            .mul_ref(&Expr::param(Param::Beta {
                twist: 1,
                k: 1,
                l: 2,
            }))
            .scale(&GaussianRational::from_int(72));
        assert_eq!(table.x_x[&(1, 2)], expected);
        assert!(table.t_x.values().all(Expr::is_zero));
    }

    #[test]
    fn spot_check_item7_errata_relation() {
        // computed = 2 x printed on the minus branch as well
        let table = computed(7, Signature::NHMinus);
        let golden = golden_table(7, Signature::NHMinus);
        for (k, computed_entry) in &table.x_x {
            assert_eq!(
                *computed_entry,
                golden.x_x[k].scale(&GaussianRational::from_int(2))
            );
        }
    }

    #[test]
    fn rotation_twists_match_after_index_typo_resolution() {
        // item 5, NH-: [x_2, x_3] = -(+/-12 i) beta5 tau^3 (S- - t/tau) x_1
        let table = computed(5, Signature::NHMinus);
        let s_lin = &Expr::atom(Atom::SMinus) - &(&Expr::t() * &Expr::tau(-1));
        let expected = Expr::i()
            .mul_ref(&s_lin)
            .mul_ref(&Expr::tau(3))
            .mul_ref(&Expr::param(Param::BetaScalar { twist: 5 }))
            .mul_ref(&Expr::x(1))
            .scale(&GaussianRational::from_int(12)); // (-12 i) * (-x_1)
        assert_eq!(table.x_x[&(2, 3)], expected);
        assert!(table.x_x[&(1, 2)].is_zero());
    }

    #[test]
    fn catalog_tables_stay_spatially_linear() {
        for twist in 1..=15u8 {
            for sig in [Signature::NHPlus, Signature::NHMinus, Signature::Galilei] {
                assert!(computed(twist, sig).max_spatial_degree() <= 1);
            }
        }
    }
}
