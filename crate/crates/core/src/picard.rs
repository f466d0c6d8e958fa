//! Rational divisor-class arithmetic on the Picard groups of the Prym
//! moduli spaces R_g-bar, of M_g-bar, and of A_5-bar.
//!
//! Classes are sparse vectors over a named generator basis. A
//! coefficient is either `Known(rational)` or explicitly `Unknown`; the
//! class formulas used here deliberately omit some boundary
//! coefficients, and the arithmetic refuses to invent values for them:
//! Known + Unknown = Unknown, c * Unknown = Unknown for c != 0, and
//! 0 * Unknown = Known(0).

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact::field::{format_rational, rat, rat_i64, rat_pow2};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpaceTag {
    /// Moduli of Prym curves of genus g (Deligne-Mumford compactification).
    RBar(u32),
    /// Moduli of curves of genus g.
    MBar(u32),
    /// Perfect cone compactification of A_5.
    ABar5,
}

/// An ordered basis of generator names for one of the three Picard groups.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PicardBasis {
    pub space: SpaceTag,
    generators: Vec<String>,
}

impl PicardBasis {
    pub fn rbar(g: u32) -> PicardBasis {
        let mut generators = vec![
            "lambda".to_string(),
            "delta_0'".to_string(),
            "delta_0''".to_string(),
            "delta_0^ram".to_string(),
        ];
        for i in 1..=(g / 2) {
            generators.push(format!("delta_{i}"));
            if g - i != i {
                generators.push(format!("delta_{}", g - i));
            }
            generators.push(format!("delta_{i}:{}", g - i));
        }
        PicardBasis {
            space: SpaceTag::RBar(g),
            generators,
        }
    }

    pub fn mbar(g: u32) -> PicardBasis {
        let mut generators = vec!["lambda".to_string(), "delta_0".to_string()];
        for i in 1..=(g / 2) {
            generators.push(format!("delta_{i}"));
        }
        PicardBasis {
            space: SpaceTag::MBar(g),
            generators,
        }
    }

    pub fn abar5() -> PicardBasis {
        PicardBasis {
            space: SpaceTag::ABar5,
            generators: vec!["L".to_string(), "D".to_string()],
        }
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g == name)
    }
}

/// A rational coefficient that may be explicitly unknown.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Coeff {
    Known(BigRational),
    Unknown,
}

impl Coeff {
    pub fn known_i64(n: i64) -> Coeff {
        Coeff::Known(rat_i64(n))
    }

    pub fn known(&self) -> Option<&BigRational> {
        match self {
            Coeff::Known(r) => Some(r),
            Coeff::Unknown => None,
        }
    }

    fn add(&self, other: &Coeff) -> Coeff {
        match (self, other) {
            (Coeff::Known(a), Coeff::Known(b)) => Coeff::Known(a + b),
            _ => Coeff::Unknown,
        }
    }

    fn scale(&self, c: &BigRational) -> Coeff {
        if c.is_zero() {
            return Coeff::Known(BigRational::zero());
        }
        match self {
            Coeff::Known(a) => Coeff::Known(a * c),
            Coeff::Unknown => Coeff::Unknown,
        }
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coeff::Known(r) => write!(f, "{}", format_rational(r)),
            Coeff::Unknown => write!(f, "?"),
        }
    }
}

/// A divisor class: one coefficient per basis generator.
#[derive(Clone, Debug, PartialEq)]
pub struct DivisorClass {
    basis: PicardBasis,
    coeffs: BTreeMap<String, Coeff>,
}

impl DivisorClass {
    /// The zero class (all coefficients Known(0)).
    pub fn zero(basis: PicardBasis) -> DivisorClass {
        let coeffs = basis
            .generators
            .iter()
            .map(|g| (g.clone(), Coeff::Known(BigRational::zero())))
            .collect();
        DivisorClass { basis, coeffs }
    }

    /// Builds a class from explicit coefficients; generators not listed
    /// are marked Unknown.
    pub fn with_known(
        basis: PicardBasis,
        known: impl IntoIterator<Item = (&'static str, BigRational)>,
    ) -> Result<DivisorClass> {
        let mut coeffs: BTreeMap<String, Coeff> = basis
            .generators
            .iter()
            .map(|g| (g.clone(), Coeff::Unknown))
            .collect();
        for (name, val) in known {
            if !coeffs.contains_key(name) {
                return Err(Error::Domain(format!("generator {name:?} not in basis")));
            }
            coeffs.insert(name.to_string(), Coeff::Known(val));
        }
        Ok(DivisorClass { basis, coeffs })
    }

    /// Single generator as a class; all other coefficients Known(0).
    pub fn generator(basis: PicardBasis, name: &str) -> Result<DivisorClass> {
        let mut c = DivisorClass::zero(basis);
        if !c.coeffs.contains_key(name) {
            return Err(Error::Domain(format!("generator {name:?} not in basis")));
        }
        c.coeffs.insert(name.to_string(), Coeff::known_i64(1));
        Ok(c)
    }

    pub fn basis(&self) -> &PicardBasis {
        &self.basis
    }

    pub fn coeff(&self, name: &str) -> Result<&Coeff> {
        self.coeffs
            .get(name)
            .ok_or_else(|| Error::Domain(format!("generator {name:?} not in basis")))
    }

    pub fn known_coeff(&self, name: &str) -> Result<BigRational> {
        match self.coeff(name)? {
            Coeff::Known(r) => Ok(r.clone()),
            Coeff::Unknown => Err(Error::InsufficientData(format!(
                "coefficient of {name} is unknown"
            ))),
        }
    }

    pub fn set_coeff(&mut self, name: &str, c: Coeff) -> Result<()> {
        if !self.coeffs.contains_key(name) {
            return Err(Error::Domain(format!("generator {name:?} not in basis")));
        }
        self.coeffs.insert(name.to_string(), c);
        Ok(())
    }

    pub fn add(&self, other: &DivisorClass) -> Result<DivisorClass> {
        if self.basis != other.basis {
            return Err(Error::Domain("classes over different bases".into()));
        }
        let coeffs = self
            .coeffs
            .iter()
            .map(|(g, a)| (g.clone(), a.add(&other.coeffs[g])))
            .collect();
        Ok(DivisorClass {
            basis: self.basis.clone(),
            coeffs,
        })
    }

    pub fn scale(&self, c: &BigRational) -> DivisorClass {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(g, a)| (g.clone(), a.scale(c)))
            .collect();
        DivisorClass {
            basis: self.basis.clone(),
            coeffs,
        }
    }

    /// Canonical display: coefficients in basis order, `?` for Unknown.
    pub fn canonical_string(&self) -> String {
        let parts: Vec<String> = self
            .basis
            .generators
            .iter()
            .map(|g| format!("{}*{}", self.coeffs[g], g))
            .collect();
        parts.join(" + ")
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.canonical_string())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

/// Class of the divisor of even/odd Prym semicanonical pencils in
/// Pic(R_g-bar)_Q.
///
/// Even: 2^(g-3) (2^(g-1)+1) lambda - 2^(2g-7) delta_0'
///       - 2^(g-5) (2^(g-1)+1) delta_0^ram - ...
/// Odd:  2^(2g-4) lambda - 2^(2g-7) delta_0' - 2^(2g-6) delta_0''
///       - 2^(g-5) (2^(g-1)-1) delta_0^ram - ...
///
/// The trailing boundary coefficients are deliberately not specified and
/// are stored as Unknown. In the even case the delta_0'' coefficient is
/// also Unknown: the displayed even class lists no delta_0'' term before
/// the ellipsis, and we do not guess whether that means zero.
pub fn class_t(g: u32, parity: Parity) -> Result<DivisorClass> {
    if g < 3 {
        return Err(Error::Domain(format!("class defined for genus >= 3, got {g}")));
    }
    let basis = PicardBasis::rbar(g);
    let gi = g as i64;
    let two_gm1 = rat_pow2(gi - 1);
    match parity {
        Parity::Even => {
            let lam = rat_pow2(gi - 3) * (&two_gm1 + rat_i64(1));
            let d0p = -rat_pow2(2 * gi - 7);
            let ram = -rat_pow2(gi - 5) * (&two_gm1 + rat_i64(1));
            DivisorClass::with_known(
                basis,
                [("lambda", lam), ("delta_0'", d0p), ("delta_0^ram", ram)],
            )
        }
        Parity::Odd => {
            let lam = rat_pow2(2 * gi - 4);
            let d0p = -rat_pow2(2 * gi - 7);
            let d0pp = -rat_pow2(2 * gi - 6);
            let ram = -rat_pow2(gi - 5) * (&two_gm1 - rat_i64(1));
            DivisorClass::with_known(
                basis,
                [
                    ("lambda", lam),
                    ("delta_0'", d0p),
                    ("delta_0''", d0pp),
                    ("delta_0^ram", ram),
                ],
            )
        }
    }
}

/// Canonical class of R_5-bar: 13 lambda - 2 delta_0' - 2 delta_0''
/// - 3 delta_0^ram - ... (trailing boundary terms unknown).
pub fn canonical_class_rbar5() -> DivisorClass {
    DivisorClass::with_known(
        PicardBasis::rbar(5),
        [
            ("lambda", rat_i64(13)),
            ("delta_0'", rat_i64(-2)),
            ("delta_0''", rat_i64(-2)),
            ("delta_0^ram", rat_i64(-3)),
        ],
    )
    .expect("valid generators")
}

/// Brill-Noether divisor of tetragonal curves in M_7-bar, normalized so
/// the undetermined overall scalar is 1:
/// 10 lambda - 4/3 delta_0 - 6 delta_1 - 10 delta_2 - 12 delta_3.
pub fn class_m1_74() -> DivisorClass {
    DivisorClass::with_known(
        PicardBasis::mbar(7),
        [
            ("lambda", rat_i64(10)),
            ("delta_0", rat(-4, 3)),
            ("delta_1", rat_i64(-6)),
            ("delta_2", rat_i64(-10)),
            ("delta_3", rat_i64(-12)),
        ],
    )
    .expect("valid generators")
}

/// Divisor of curves with a semicanonical pencil in M_7-bar:
/// 16 (129 lambda - 16 delta_0 - 63 delta_1 - 93 delta_2 - 105 delta_3).
pub fn class_t7() -> DivisorClass {
    DivisorClass::with_known(
        PicardBasis::mbar(7),
        [
            ("lambda", rat_i64(16 * 129)),
            ("delta_0", rat_i64(-16 * 16)),
            ("delta_1", rat_i64(-16 * 63)),
            ("delta_2", rat_i64(-16 * 93)),
            ("delta_3", rat_i64(-16 * 105)),
        ],
    )
    .expect("valid generators")
}

/// Ramification divisor of the genus-6 Prym map:
/// 7 lambda - delta_0' - 3/2 delta_0^ram - ... (other coefficients unknown).
pub fn class_u60() -> DivisorClass {
    DivisorClass::with_known(
        PicardBasis::rbar(6),
        [
            ("lambda", rat_i64(7)),
            ("delta_0'", rat_i64(-1)),
            ("delta_0^ram", rat(-3, 2)),
        ],
    )
    .expect("valid generators")
}

/// The restriction of a class to the general Prym fiber over a cubic
/// threefold: a * iota^* lambda + b * iota^* delta_0^ram. The pullback
/// annihilates every other generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberRestriction {
    pub lambda_coeff: BigRational,
    pub ram_coeff: BigRational,
}

/// Restricts a class on R_5-bar to the general fiber of the proper Prym
/// map. Requires Known coefficients on lambda and delta_0^ram; all other
/// generators are annihilated, so Unknown entries there are harmless.
pub fn fiber_restrict(c: &DivisorClass) -> Result<FiberRestriction> {
    if c.basis.space != SpaceTag::RBar(5) {
        return Err(Error::Domain("fiber restriction lives on R_5-bar".into()));
    }
    Ok(FiberRestriction {
        lambda_coeff: c.known_coeff("lambda")?,
        ram_coeff: c.known_coeff("delta_0^ram")?,
    })
}

/// Imposes the fiber relation iota^* delta_0^ram = 4 iota^* lambda,
/// returning the resulting multiple of iota^* lambda.
pub fn apply_fiber_relation(r: &FiberRestriction) -> BigRational {
    &r.lambda_coeff + rat_i64(4) * &r.ram_coeff
}

/// Pushforward along the genus-6 Prym map, Pic(R_6-bar) -> Pic(A_5-bar):
/// lambda -> 486 L - 57 D, delta_0^ram -> 1836 L - 228 D,
/// delta_0' -> 27 D, every other generator -> 0.
pub fn prym6_pushforward(c: &DivisorClass) -> Result<DivisorClass> {
    if c.basis.space != SpaceTag::RBar(6) {
        return Err(Error::Domain("pushforward is defined on R_6-bar".into()));
    }
    let lam = c.known_coeff("lambda")?;
    let d0p = c.known_coeff("delta_0'")?;
    let ram = c.known_coeff("delta_0^ram")?;
    let l = &lam * rat_i64(486) + &ram * rat_i64(1836);
    let d = &lam * rat_i64(-57) + &ram * rat_i64(-228) + &d0p * rat_i64(27);
    DivisorClass::with_known(PicardBasis::abar5(), [("L", l), ("D", d)])
}

/// Pullback along the genus-6 Prym map, Pic(A_5-bar) -> Pic(R_6-bar):
/// L -> lambda - 1/4 delta_0^ram, D -> delta_0'. The boundary
/// generators contracted by the map receive Known(0).
pub fn prym6_pullback(c: &DivisorClass) -> Result<DivisorClass> {
    if c.basis.space != SpaceTag::ABar5 {
        return Err(Error::Domain("pullback is defined on A_5-bar".into()));
    }
    let l = c.known_coeff("L")?;
    let d = c.known_coeff("D")?;
    let mut out = DivisorClass::zero(PicardBasis::rbar(6));
    out.set_coeff("lambda", Coeff::Known(l.clone()))?;
    out.set_coeff("delta_0^ram", Coeff::Known(&l * rat(-1, 4)))?;
    out.set_coeff("delta_0'", Coeff::Known(d))?;
    Ok(out)
}

/// Whether c1 = t * c2 for a single rational t on every generator in
/// `generators`. Requires both classes Known there and c2 nonzero on the
/// subset.
pub fn proportional_on(
    generators: &[&str],
    c1: &DivisorClass,
    c2: &DivisorClass,
) -> Result<bool> {
    if c1.basis != c2.basis {
        return Err(Error::Domain("classes over different bases".into()));
    }
    let mut pairs = Vec::with_capacity(generators.len());
    for g in generators {
        pairs.push((c1.known_coeff(g)?, c2.known_coeff(g)?));
    }
    let Some(anchor) = pairs.iter().position(|(_, b)| !b.is_zero()) else {
        return Err(Error::Domain(
            "second class vanishes on the whole generator subset".into(),
        ));
    };
    let t = &pairs[anchor].0 / &pairs[anchor].1;
    Ok(pairs.iter().all(|(a, b)| *a == &t * b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn class_t5_even_matches_fiber_values() {
        let c = class_t(5, Parity::Even).unwrap();
        assert_eq!(c.known_coeff("lambda").unwrap(), rat_i64(68));
        assert_eq!(c.known_coeff("delta_0^ram").unwrap(), rat_i64(-17));
        assert_eq!(c.known_coeff("delta_0'").unwrap(), rat_i64(-8));
        // delta_0'' and the boundary tail are unknown
        assert_eq!(*c.coeff("delta_0''").unwrap(), Coeff::Unknown);
        assert_eq!(*c.coeff("delta_1").unwrap(), Coeff::Unknown);
    }

    #[test]
    fn class_t5_odd_matches_fiber_values() {
        let c = class_t(5, Parity::Odd).unwrap();
        assert_eq!(c.known_coeff("lambda").unwrap(), rat_i64(64));
        assert_eq!(c.known_coeff("delta_0'").unwrap(), rat_i64(-8));
        assert_eq!(c.known_coeff("delta_0''").unwrap(), rat_i64(-16));
        assert_eq!(c.known_coeff("delta_0^ram").unwrap(), rat_i64(-15));
    }

    #[test]
    fn class_t6_odd_by_substitution() {
        let c = class_t(6, Parity::Odd).unwrap();
        assert_eq!(c.known_coeff("lambda").unwrap(), rat_i64(256));
        assert_eq!(c.known_coeff("delta_0'").unwrap(), rat_i64(-32));
        assert_eq!(c.known_coeff("delta_0''").unwrap(), rat_i64(-64));
        assert_eq!(c.known_coeff("delta_0^ram").unwrap(), rat_i64(-62));
    }

    #[test]
    fn genus_below_three_rejected() {
        assert!(class_t(2, Parity::Even).is_err());
    }

    #[test]
    fn fiber_restriction_values() {
        let e = fiber_restrict(&class_t(5, Parity::Even).unwrap()).unwrap();
        assert_eq!(e.lambda_coeff, rat_i64(68));
        assert_eq!(e.ram_coeff, rat_i64(-17));
        assert_eq!(apply_fiber_relation(&e), rat_i64(0));

        let o = fiber_restrict(&class_t(5, Parity::Odd).unwrap()).unwrap();
        assert_eq!((o.lambda_coeff.clone(), o.ram_coeff.clone()), (rat_i64(64), rat_i64(-15)));
        assert_eq!(apply_fiber_relation(&o), rat_i64(4));

        let z = fiber_restrict(&DivisorClass::zero(PicardBasis::rbar(5))).unwrap();
        assert_eq!(apply_fiber_relation(&z), rat_i64(0));

        let k = fiber_restrict(&canonical_class_rbar5()).unwrap();
        assert_eq!((k.lambda_coeff.clone(), k.ram_coeff.clone()), (rat_i64(13), rat_i64(-3)));
        assert_eq!(apply_fiber_relation(&k), rat_i64(1));
    }

    #[test]
    fn fiber_restriction_requires_known_data() {
        let mut c = DivisorClass::zero(PicardBasis::rbar(5));
        c.set_coeff("lambda", Coeff::Unknown).unwrap();
        assert!(fiber_restrict(&c).is_err());
    }

    #[test]
    fn pushforward_of_odd_class() {
        let c = class_t(6, Parity::Odd).unwrap();
        let p = prym6_pushforward(&c).unwrap();
        assert_eq!(p.known_coeff("L").unwrap(), rat_i64(10584));
        assert_eq!(p.known_coeff("D").unwrap(), rat_i64(-1320));
    }

    #[test]
    fn pushforward_of_generators() {
        let lam = DivisorClass::generator(PicardBasis::rbar(6), "lambda").unwrap();
        let p = prym6_pushforward(&lam).unwrap();
        assert_eq!(p.known_coeff("L").unwrap(), rat_i64(486));
        assert_eq!(p.known_coeff("D").unwrap(), rat_i64(-57));

        let d0pp = DivisorClass::generator(PicardBasis::rbar(6), "delta_0''").unwrap();
        let p = prym6_pushforward(&d0pp).unwrap();
        assert_eq!(p.known_coeff("L").unwrap(), rat_i64(0));
        assert_eq!(p.known_coeff("D").unwrap(), rat_i64(0));
    }

    #[test]
    fn pullback_examples() {
        let c = DivisorClass::with_known(
            PicardBasis::abar5(),
            [("L", rat_i64(10584)), ("D", rat_i64(-1320))],
        )
        .unwrap();
        let p = prym6_pullback(&c).unwrap();
        assert_eq!(p.known_coeff("lambda").unwrap(), rat_i64(10584));
        assert_eq!(p.known_coeff("delta_0'").unwrap(), rat_i64(-1320));
        assert_eq!(p.known_coeff("delta_0^ram").unwrap(), rat_i64(-2646));
        // contracted generators get literal zero
        assert_eq!(p.known_coeff("delta_0''").unwrap(), rat_i64(0));

        let zero = prym6_pullback(&DivisorClass::zero(PicardBasis::abar5())).unwrap();
        assert_eq!(zero, DivisorClass::zero(PicardBasis::rbar(6)));
    }

    #[test]
    fn proportionality_checks() {
        let t7 = class_t7();
        let m = class_m1_74();
        assert!(!proportional_on(&["lambda", "delta_0"], &t7, &m).unwrap());
        // trivial case: c vs 2c
        let c2 = t7.scale(&rat_i64(2));
        assert!(proportional_on(&["lambda", "delta_0", "delta_2"], &t7, &c2).unwrap());

        let to6 = class_t(6, Parity::Odd).unwrap();
        let round = prym6_pullback(&prym6_pushforward(&to6).unwrap()).unwrap();
        assert!(
            !proportional_on(&["lambda", "delta_0'", "delta_0^ram"], &round, &to6).unwrap()
        );
    }

    #[test]
    fn unknown_is_never_promoted() {
        let c = class_t(5, Parity::Even).unwrap();
        let sum = c.add(&c).unwrap();
        assert_eq!(*sum.coeff("delta_0''").unwrap(), Coeff::Unknown);
        let scaled = c.scale(&rat_i64(3));
        assert_eq!(*scaled.coeff("delta_1").unwrap(), Coeff::Unknown);
        // scaling by zero kills Unknown
        let zeroed = c.scale(&BigRational::zero());
        assert_eq!(zeroed.known_coeff("delta_0''").unwrap(), rat_i64(0));
        // linearity where known
        assert_eq!(sum.known_coeff("lambda").unwrap(), rat_i64(136));
    }

    #[test]
    fn u60_not_proportional_to_semicanonical_classes() {
        let u = class_u60();
        let gens = ["lambda", "delta_0'", "delta_0^ram"];
        assert!(!proportional_on(&gens, &u, &class_t(6, Parity::Even).unwrap()).unwrap());
        assert!(!proportional_on(&gens, &u, &class_t(6, Parity::Odd).unwrap()).unwrap());
    }
}
