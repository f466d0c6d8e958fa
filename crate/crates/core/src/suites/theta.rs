//! Exhaustive symplectic F_2 suites: parity counts, the translation
//! identity, the Riemann-Mumford relation, and quotient/descent
//! well-definedness.

use super::classes::outcome;
use super::SuiteOptions;
use crate::error::Result;
use crate::report::ReportBuilder;
use crate::theta::{
    descend_form, orthogonal_complement, parity, parity_counts, quotient_symplectic,
    riemann_mumford_check, QuadraticFormF2, SubgroupF2, SymplecticSpaceF2, TwoTorsionVector,
    Parity,
};

pub fn run(b: &mut ReportBuilder, opts: &SuiteOptions) -> Result<()> {
    let gmax = opts.genus.min(4);
    for g in 1..=gmax {
        let s = SymplecticSpaceF2::new(g)?;
        let expect_even = (1u64 << (g - 1)) * ((1u64 << g) + 1);
        let expect_odd = (1u64 << (g - 1)) * ((1u64 << g) - 1);
        b.timed(
            format!("theta.parity_counts_g{g}"),
            "even/odd theta-characteristic counts 2^(g-1)(2^g +- 1)",
            format!("even={expect_even} odd={expect_odd}"),
            || {
                let (e, o) = parity_counts(&s);
                format!("even={e} odd={o}")
            },
        );
    }
    if gmax >= 3 {
        b.timed(
            "theta.odd_count_is_28_at_g3",
            "28 odd theta-characteristics = 28 bitangents of a plane quartic",
            "28",
            || {
                let s = SymplecticSpaceF2::new(3).expect("genus 3");
                parity_counts(&s).1.to_string()
            },
        );
    }
    for g in 1..=gmax {
        let s = SymplecticSpaceF2::new(g)?;
        b.timed(
            format!("theta.translation_identity_g{g}"),
            "parity(q translated by mu) = parity(q) + q(mu), exhaustively",
            "true",
            || {
                let ok = s.vectors().all(|t| {
                    let q = QuadraticFormF2::new(t);
                    s.vectors().all(|mu| {
                        let lhs = parity(&s, &q.translate(mu)) == Parity::Odd;
                        let rhs = (parity(&s, &q) == Parity::Odd) ^ q.eval(&s, mu);
                        lhs == rhs
                    })
                });
                ok.to_string()
            },
        );
    }
    for g in 1..=gmax.min(3) {
        let s = SymplecticSpaceF2::new(g)?;
        b.timed(
            format!("theta.riemann_mumford_g{g}"),
            "four-term parity relation over every form and subgroup",
            "true",
            || {
                outcome((|| {
                    for t in s.vectors() {
                        let q = QuadraticFormF2::new(t);
                        for m1 in s.vectors() {
                            for m2 in s.vectors() {
                                if !riemann_mumford_check(&s, &q, [m1, m2, m1 + m2])? {
                                    return Ok("false".into());
                                }
                            }
                        }
                    }
                    Ok("true".into())
                })())
            },
        );
    }
    b.timed(
        "theta.riemann_mumford_isotropic_g7",
        "isotropic subgroup in the genus-7 configuration gives parity sum 0",
        "true",
        || {
            outcome((|| {
                let s = SymplecticSpaceF2::new(7)?;
                let m1 = TwoTorsionVector::new(1);
                let m2 = TwoTorsionVector::new(2);
                for t in [0u32, 3, 9, 1 << 13, 4321] {
                    let q = QuadraticFormF2::new(TwoTorsionVector::new(t));
                    if !riemann_mumford_check(&s, &q, [m1, m2, m1 + m2])? {
                        return Ok("false".into());
                    }
                }
                Ok("true".into())
            })())
        },
    );
    for g in 2..=gmax.min(3) {
        let s = SymplecticSpaceF2::new(g)?;
        b.timed(
            format!("theta.quotient_exact_sequence_g{g}"),
            "projection kernel is the chosen 2-torsion point; the induced pairing matches",
            "true",
            || {
                outcome((|| {
                    for eta in s.vectors().filter(|v| !v.is_zero()) {
                        let (target, map) = quotient_symplectic(&s, eta)?;
                        let eta_grp = SubgroupF2::from_generators(&s, &[eta]);
                        let perp = orthogonal_complement(&s, &eta_grp);
                        if perp.rank() + 1 != s.dim() {
                            return Ok("false".into());
                        }
                        let mut image = std::collections::BTreeSet::new();
                        for x in perp.elements() {
                            let px = map.project(x)?;
                            if px.is_zero() && !(x.is_zero() || x == eta) {
                                return Ok("false".into());
                            }
                            image.insert(px.bits);
                            for y in perp.elements() {
                                if s.pairing(x, y)
                                    != target.pairing(px, map.project(y)?)
                                {
                                    return Ok("false".into());
                                }
                            }
                        }
                        if image.len() != 1 << target.dim() {
                            return Ok("false".into());
                        }
                    }
                    Ok("true".into())
                })())
            },
        );
        b.timed(
            format!("theta.descent_well_defined_g{g}"),
            "descended parity function agrees with the form on every lift",
            "true",
            || {
                outcome((|| {
                    for t in s.vectors() {
                        let q = QuadraticFormF2::new(t);
                        for mu in s.vectors().filter(|v| !v.is_zero()) {
                            if q.eval(&s, mu) {
                                if descend_form(&s, &q, mu).is_ok() {
                                    return Ok("obstruction missed".into());
                                }
                                continue;
                            }
                            let (qbar, map) = descend_form(&s, &q, mu)?;
                            let perp = orthogonal_complement(
                                &s,
                                &SubgroupF2::from_generators(&s, &[mu]),
                            );
                            for x in perp.elements() {
                                if q.eval(&s, x) != qbar.eval(&map.target, map.project(x)?) {
                                    return Ok("false".into());
                                }
                            }
                        }
                    }
                    Ok("true".into())
                })())
            },
        );
    }
    b.timed(
        "theta.quotient_dimension_g6",
        "the 2-torsion of a genus-6 Prym has dimension 10 over F_2",
        "10",
        || {
            outcome((|| {
                let s = SymplecticSpaceF2::new(6)?;
                let (t, _) = quotient_symplectic(&s, TwoTorsionVector::new(1))?;
                Ok(t.dim().to_string())
            })())
        },
    );
    Ok(())
}
