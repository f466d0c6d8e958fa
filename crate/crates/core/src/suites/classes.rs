//! Divisor-class reproductions on the moduli Picard groups.

use crate::error::Result;
use crate::exact::field::format_rational;
use crate::picard::{
    apply_fiber_relation, canonical_class_rbar5, class_m1_74, class_t, class_t7, class_u60,
    fiber_restrict, prym6_pullback, prym6_pushforward, proportional_on, DivisorClass, Parity,
    PicardBasis,
};
use crate::report::ReportBuilder;

/// Errors inside a check become failing computed strings; they never
/// abort the suite.
pub(crate) fn outcome(r: Result<String>) -> String {
    match r {
        Ok(s) => s,
        Err(e) => format!("error: {e}"),
    }
}

fn restriction_string(c: &DivisorClass) -> Result<String> {
    let r = fiber_restrict(c)?;
    Ok(format!(
        "({}, {}) -> {}",
        format_rational(&r.lambda_coeff),
        format_rational(&r.ram_coeff),
        format_rational(&apply_fiber_relation(&r))
    ))
}

pub fn run(b: &mut ReportBuilder) -> Result<()> {
    b.timed(
        "classes.Te5_fiber_restriction",
        "restriction of the even semicanonical class to the genus-5 Prym fiber",
        "(68, -17) -> 0",
        || outcome(restriction_string(&class_t(5, Parity::Even).expect("g>=3"))),
    );
    b.timed(
        "classes.To5_fiber_restriction",
        "restriction of the odd semicanonical class to the genus-5 Prym fiber",
        "(64, -15) -> 4",
        || outcome(restriction_string(&class_t(5, Parity::Odd).expect("g>=3"))),
    );
    b.timed(
        "classes.canonical_rbar5_restriction",
        "restriction of the canonical class of the genus-5 Prym moduli space",
        "(13, -3) -> 1",
        || outcome(restriction_string(&canonical_class_rbar5())),
    );
    b.timed(
        "classes.zero_class_restriction",
        "the zero class restricts to zero",
        "(0, 0) -> 0",
        || outcome(restriction_string(&DivisorClass::zero(PicardBasis::rbar(5)))),
    );
    b.timed(
        "classes.prym6_pushforward_To6",
        "pushforward of the odd genus-6 class to the abelian moduli space",
        "10584*L + -1320*D",
        || {
            outcome((|| {
                let p = prym6_pushforward(&class_t(6, Parity::Odd)?)?;
                Ok(p.canonical_string())
            })())
        },
    );
    b.timed(
        "classes.prym6_pullback_of_pushforward",
        "pullback of that class back to the genus-6 Prym moduli space",
        "lambda=10584 delta_0'=-1320 delta_0^ram=-2646",
        || {
            outcome((|| {
                let p = prym6_pullback(&prym6_pushforward(&class_t(6, Parity::Odd)?)?)?;
                Ok(format!(
                    "lambda={} delta_0'={} delta_0^ram={}",
                    format_rational(&p.known_coeff("lambda")?),
                    format_rational(&p.known_coeff("delta_0'")?),
                    format_rational(&p.known_coeff("delta_0^ram")?)
                ))
            })())
        },
    );
    b.timed(
        "classes.roundtrip_not_proportional_To6",
        "the pulled-back class is not proportional to the odd genus-6 class",
        "false",
        || {
            outcome((|| {
                let to6 = class_t(6, Parity::Odd)?;
                let round = prym6_pullback(&prym6_pushforward(&to6)?)?;
                Ok(
                    proportional_on(&["lambda", "delta_0'", "delta_0^ram"], &round, &to6)?
                        .to_string(),
                )
            })())
        },
    );
    b.timed(
        "classes.T7_vs_tetragonal_locus",
        "genus-7 semicanonical divisor vs the tetragonal Brill-Noether divisor",
        "false",
        || {
            outcome((|| {
                Ok(
                    proportional_on(&["lambda", "delta_0"], &class_t7(), &class_m1_74())?
                        .to_string(),
                )
            })())
        },
    );
    b.timed(
        "classes.U60_vs_Te6_To6",
        "the genus-6 Prym ramification divisor differs from both semicanonical divisors",
        "false false",
        || {
            outcome((|| {
                let gens = ["lambda", "delta_0'", "delta_0^ram"];
                let u = class_u60();
                Ok(format!(
                    "{} {}",
                    proportional_on(&gens, &u, &class_t(6, Parity::Even)?)?,
                    proportional_on(&gens, &u, &class_t(6, Parity::Odd)?)?
                ))
            })())
        },
    );
    Ok(())
}
