//! The Fano-surface intersection chain: class of the nodal curve, both
//! genera, and the node partition, driven by the divisor-class inputs
//! exactly as the derivation runs.

use super::classes::outcome;
use crate::error::Result;
use crate::fano::{
    adjunction_genus, derive_gamma_multiple, desing_partition, gamma_chain, genus_i64, intersect,
    node_budget, NSClass,
};
use crate::exact::field::format_rational;
use crate::picard::{
    apply_fiber_relation, canonical_class_rbar5, class_t, fiber_restrict, DivisorClass, Parity,
    PicardBasis,
};
use crate::report::ReportBuilder;

pub fn run(b: &mut ReportBuilder) -> Result<()> {
    b.timed(
        "fano.incidence_self_intersection",
        "self-intersection of the incidence divisor on the Fano surface",
        "5",
        || intersect(NSClass::incidence(), NSClass::incidence()).to_string(),
    );
    b.timed(
        "fano.gamma_multiple_from_classes",
        "the nodal curve is 24 times the incidence class, i.e. 8K",
        "24 = 8K",
        || {
            outcome((|| {
                // canonical-class input: multiple of the fiber hyperplane class
                let k = apply_fiber_relation(&fiber_restrict(&canonical_class_rbar5())?);
                // pullback of the curve: odd component plus its mirror
                let odd = apply_fiber_relation(&fiber_restrict(&class_t(5, Parity::Odd)?)?);
                let ram = apply_fiber_relation(&fiber_restrict(&DivisorClass::generator(
                    PicardBasis::rbar(5),
                    "delta_0^ram",
                )?)?);
                let pullback = odd + ram;
                let gamma = derive_gamma_multiple(&k, &pullback)?;
                let is_8k = gamma.multiple == 8 * NSClass::canonical().multiple;
                Ok(format!(
                    "{}{}",
                    gamma.multiple,
                    if is_8k { " = 8K" } else { " != 8K" }
                ))
            })())
        },
    );
    b.timed(
        "fano.gamma_multiple_alternate_input",
        "the same pipeline on a class restricting to 4 times the hyperplane class",
        "12",
        || {
            outcome((|| {
                let k = apply_fiber_relation(&fiber_restrict(&canonical_class_rbar5())?);
                let odd = apply_fiber_relation(&fiber_restrict(&class_t(5, Parity::Odd)?)?);
                Ok(derive_gamma_multiple(&k, &odd)?.multiple.to_string())
            })())
        },
    );
    b.timed(
        "fano.second_type_genus_intermediate",
        "intersection number 6L.(6L + 3L)",
        "270",
        || intersect(NSClass::new(6), NSClass::new(9)).to_string(),
    );
    b.timed(
        "fano.second_type_genus",
        "genus of the smooth curve of second-type lines",
        "136",
        || outcome(genus_i64(NSClass::new(6)).map(|g| g.to_string())),
    );
    b.timed(
        "fano.gamma_genus_intermediate",
        "intersection number 24L.(24L + 3L)",
        "3240",
        || intersect(NSClass::new(24), NSClass::new(27)).to_string(),
    );
    b.timed(
        "fano.gamma_arithmetic_genus",
        "arithmetic genus of the nodal curve",
        "1621",
        || outcome(genus_i64(NSClass::new(24)).map(|g| g.to_string())),
    );
    b.timed(
        "fano.node_count",
        "number of nodes of the nodal curve",
        "1485",
        || node_budget().to_string(),
    );
    b.timed(
        "fano.gamma_self_intersection",
        "self-intersection of the nodal curve class",
        "2880",
        || intersect(NSClass::new(24), NSClass::new(24)).to_string(),
    );
    b.timed(
        "fano.desing_partition",
        "crossing points upstairs, shared and residual nodes",
        "crossings=1440 shared=720 residual=765 total=1485",
        || {
            let p = desing_partition();
            format!(
                "crossings={} shared={} residual={} total={}",
                p.crossing_points,
                p.shared_nodes,
                p.residual_nodes,
                p.shared_nodes + p.residual_nodes
            )
        },
    );
    b.timed(
        "fano.full_chain",
        "the whole derivation from divisor classes to the node partition",
        "24L 136 1621 1485 (2880,1440,720,765)",
        || {
            outcome((|| {
                let k = apply_fiber_relation(&fiber_restrict(&canonical_class_rbar5())?);
                let odd = apply_fiber_relation(&fiber_restrict(&class_t(5, Parity::Odd)?)?);
                let ram = apply_fiber_relation(&fiber_restrict(&DivisorClass::generator(
                    PicardBasis::rbar(5),
                    "delta_0^ram",
                )?)?);
                let (gamma, g_norm, pa, nodes, part) = gamma_chain(&k, &(odd + ram))?;
                Ok(format!(
                    "{}L {} {} {} ({},{},{},{})",
                    gamma.multiple,
                    g_norm,
                    pa,
                    nodes,
                    part.gamma_self,
                    part.crossing_points,
                    part.shared_nodes,
                    part.residual_nodes
                ))
            })())
        },
    );
    b.timed(
        "fano.adjunction_alternate_multiple",
        "adjunction genus at the multiple 12, by hand (5*12*15 + 2)/2",
        "451",
        || outcome(adjunction_genus(NSClass::new(12)).map(|g| format_rational(&g))),
    );
    Ok(())
}
