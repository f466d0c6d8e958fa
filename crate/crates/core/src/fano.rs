//! Intersection theory on the rank-one Neron-Severi group of the Fano
//! surface F(V) of lines on a smooth cubic threefold V.
//!
//! For V very general, NS(F(V)) is generated by the incidence class L
//! (lines meeting a fixed line) with L^2 = 5 and K_{F(V)} = 3L; the
//! curve of second-type lines has class 6L. Those constants are wired
//! in below; their validity is a hypothesis on V, not something this
//! module checks.

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::exact::field::{rat, rat_i64};

/// Self-intersection of the incidence generator.
pub const INCIDENCE_SELF: i64 = 5;
/// K_{F(V)} = 3L.
pub const CANONICAL_MULTIPLE: i64 = 3;
/// The curve of second-type lines is 2K = 6L.
pub const SECOND_TYPE_MULTIPLE: i64 = 6;

/// An integer multiple of the incidence generator L of NS(F(V)).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NSClass {
    pub multiple: i64,
}

impl NSClass {
    pub fn new(multiple: i64) -> NSClass {
        NSClass { multiple }
    }
    pub fn incidence() -> NSClass {
        NSClass { multiple: 1 }
    }
    pub fn canonical() -> NSClass {
        NSClass {
            multiple: CANONICAL_MULTIPLE,
        }
    }
    pub fn second_type_curve() -> NSClass {
        NSClass {
            multiple: SECOND_TYPE_MULTIPLE,
        }
    }
}

/// Intersection number a . b = 5 a b.
pub fn intersect(a: NSClass, b: NSClass) -> i64 {
    INCIDENCE_SELF * a.multiple * b.multiple
}

/// Arithmetic genus by adjunction: 2p - 2 = c.(c + K), so for c = mL
/// p = (5 m (m + 3) + 2) / 2.
pub fn adjunction_genus(c: NSClass) -> Result<BigRational> {
    if c.multiple <= 0 {
        return Err(Error::Domain(format!(
            "adjunction genus needs a positive multiple, got {}",
            c.multiple
        )));
    }
    let m = rat_i64(c.multiple);
    Ok((rat_i64(INCIDENCE_SELF) * &m * (&m + rat_i64(CANONICAL_MULTIPLE)) + rat_i64(2))
        * rat(1, 2))
}

/// Derives the NS-multiple of the curve of lines appearing with
/// multiplicity one in some plane section l + 2r.
///
/// Inputs come from the divisor-class pipeline on R_5-bar:
/// `fiber_canonical` is the multiple of iota^* lambda representing the
/// canonical class of the fiber (expected 1), and `gamma_pullback` is the
/// multiple of iota^* lambda representing the pullback of the curve
/// (expected 8). The Hurwitz relation K = phi^* K_{F(V)} = 3 phi^* L
/// identifies iota^* lambda with 3 phi^* L times `fiber_canonical`, so the
/// multiple is 3 * gamma_pullback * fiber_canonical.
pub fn derive_gamma_multiple(
    fiber_canonical: &BigRational,
    gamma_pullback: &BigRational,
) -> Result<NSClass> {
    let m = rat_i64(3) * gamma_pullback * fiber_canonical;
    if !m.denom().eq(&num_bigint::BigInt::from(1)) {
        return Err(Error::Derivation(format!(
            "non-integral curve class multiple {m}"
        )));
    }
    let m: i64 = m
        .numer()
        .try_into()
        .map_err(|_| Error::Derivation("curve class multiple overflows i64".into()))?;
    Ok(NSClass::new(m))
}

/// Node count of the multiplicity-one curve: arithmetic genus of 24L
/// minus the genus of its normalization (the second-type curve, 6L).
pub fn node_budget() -> i64 {
    let pa = adjunction_genus(NSClass::new(24)).expect("positive");
    let g = adjunction_genus(NSClass::second_type_curve()).expect("positive");
    let diff = pa - g;
    debug_assert!(diff.denom().eq(&num_bigint::BigInt::from(1)));
    i64::try_from(diff.numer().clone()).expect("small")
}

/// Bookkeeping for the partial desingularization: how the nodes split
/// between preimages of crossings with the second-type curve and genuine
/// nodes of each component upstairs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DesingPartition {
    /// Self-intersection of the curve class 24L.
    pub gamma_self: i64,
    /// Transverse crossing points of the two components upstairs.
    pub crossing_points: i64,
    /// Nodes downstairs whose preimage consists of crossing points.
    pub shared_nodes: i64,
    /// Nodes downstairs that lift to nodes of each component.
    pub residual_nodes: i64,
}

pub fn desing_partition() -> DesingPartition {
    let gamma = NSClass::new(24);
    let gamma_self = intersect(gamma, gamma);
    let crossing_points = gamma_self / 2;
    let shared_nodes = crossing_points / 2;
    let residual_nodes = node_budget() - shared_nodes;
    DesingPartition {
        gamma_self,
        crossing_points,
        shared_nodes,
        residual_nodes,
    }
}

/// Genus check helper exposed for the report: genus as i64 when integral.
pub fn genus_i64(c: NSClass) -> Result<i64> {
    let g = adjunction_genus(c)?;
    if !g.denom().eq(&num_bigint::BigInt::from(1)) {
        return Err(Error::Derivation(format!("non-integral genus {g}")));
    }
    Ok(i64::try_from(g.numer().clone()).expect("small"))
}

/// Full derivation chain from the divisor-class inputs, as the proof
/// performs it. Returns (multiple, genus of 6L, genus of mL, nodes,
/// partition) and checks the multiple equals 8 K.
pub fn gamma_chain(
    fiber_canonical: &BigRational,
    gamma_pullback: &BigRational,
) -> Result<(NSClass, i64, i64, i64, DesingPartition)> {
    let gamma = derive_gamma_multiple(fiber_canonical, gamma_pullback)?;
    if gamma.multiple != 8 * CANONICAL_MULTIPLE {
        return Err(Error::Derivation(format!(
            "expected the curve class to be 8K = {}L, derived {}L",
            8 * CANONICAL_MULTIPLE,
            gamma.multiple
        )));
    }
    let g_norm = genus_i64(NSClass::second_type_curve())?;
    let pa = genus_i64(gamma)?;
    let nodes = pa - g_norm;
    Ok((gamma, g_norm, pa, nodes, desing_partition()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn incidence_numbers() {
        assert_eq!(intersect(NSClass::incidence(), NSClass::incidence()), 5);
        assert_eq!(intersect(NSClass::new(24), NSClass::new(27)), 3240);
        assert_eq!(intersect(NSClass::new(0), NSClass::new(12)), 0);
        // symmetry and bilinearity
        assert_eq!(
            intersect(NSClass::new(7), NSClass::new(-4)),
            intersect(NSClass::new(-4), NSClass::new(7))
        );
        assert_eq!(
            intersect(NSClass::new(2 + 3), NSClass::new(5)),
            intersect(NSClass::new(2), NSClass::new(5)) + intersect(NSClass::new(3), NSClass::new(5))
        );
    }

    #[test]
    fn adjunction_values() {
        assert_eq!(genus_i64(NSClass::new(6)).unwrap(), 136);
        assert_eq!(genus_i64(NSClass::new(24)).unwrap(), 1621);
        assert_eq!(genus_i64(NSClass::new(12)).unwrap(), 451);
        // the intermediate intersection number 6L.(6L+3L) = 270
        assert_eq!(
            intersect(NSClass::new(6), NSClass::new(9)),
            270
        );
        assert!(adjunction_genus(NSClass::new(0)).is_err());
        assert!(adjunction_genus(NSClass::new(-2)).is_err());
    }

    #[test]
    fn genus_is_integral_for_all_positive_multiples() {
        for m in 1..200 {
            genus_i64(NSClass::new(m)).unwrap();
        }
    }

    #[test]
    fn gamma_multiple_derivation() {
        let one = rat_i64(1);
        let g = derive_gamma_multiple(&one, &rat_i64(8)).unwrap();
        assert_eq!(g.multiple, 24);
        assert_eq!(g.multiple, 8 * CANONICAL_MULTIPLE);
        assert_eq!(derive_gamma_multiple(&one, &rat_i64(0)).unwrap().multiple, 0);
        assert_eq!(derive_gamma_multiple(&one, &rat_i64(4)).unwrap().multiple, 12);
        assert!(derive_gamma_multiple(&rat(1, 7), &rat_i64(1)).is_err());
    }

    #[test]
    fn node_counts() {
        assert_eq!(node_budget(), 1485);
        let p = desing_partition();
        assert_eq!(p.gamma_self, 2880);
        assert_eq!(p.crossing_points, 1440);
        assert_eq!(p.shared_nodes, 720);
        assert_eq!(p.residual_nodes, 765);
        assert_eq!(p.shared_nodes + p.residual_nodes, 1485);
    }
}
