//! Polynomial interchange format.
//!
//! ```json
//! {
//!   "vars": ["x","y","z"],
//!   "degree": 4,
//!   "field": "rational",            // or {"char": 7, "ext": 2}
//!   "terms": [{"exp": [4,0,0], "num": "1", "den": "1"}]
//! }
//! ```
//!
//! Coefficients are always rational `num`/`den` strings; loading into a
//! finite field maps them through the prime subfield, so the same file
//! describes the same form over every admissible field.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::field::{Field, Fq, Rationals};
use super::poly::HomogeneousForm;
use crate::error::{Error, Result};

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum FieldSpec {
    Rational(String),
    Finite { char: u64, ext: u32 },
}

impl FieldSpec {
    pub fn rational() -> Self {
        FieldSpec::Rational("rational".into())
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TermJson {
    pub exp: Vec<u8>,
    pub num: String,
    pub den: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PolyJson {
    pub vars: Vec<String>,
    pub degree: usize,
    pub field: FieldSpec,
    pub terms: Vec<TermJson>,
}

impl PolyJson {
    pub fn parse(text: &str) -> Result<PolyJson> {
        let p: PolyJson = serde_json::from_str(text)?;
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if let FieldSpec::Rational(tag) = &self.field {
            if tag != "rational" {
                return Err(Error::InvalidInput(format!("unknown field tag {tag:?}")));
            }
        }
        let n = self.vars.len();
        let mut seen = std::collections::BTreeSet::new();
        for t in &self.terms {
            if t.exp.len() != n {
                return Err(Error::InvalidInput(format!(
                    "exponent vector {:?} does not match {} variables",
                    t.exp, n
                )));
            }
            if t.exp.iter().map(|&e| e as usize).sum::<usize>() != self.degree {
                return Err(Error::InvalidInput(format!(
                    "exponent vector {:?} does not sum to degree {}",
                    t.exp, self.degree
                )));
            }
            if !seen.insert(t.exp.clone()) {
                return Err(Error::InvalidInput(format!(
                    "duplicate exponent vector {:?}",
                    t.exp
                )));
            }
        }
        Ok(())
    }

    fn rational_terms(&self) -> Result<Vec<(Vec<u8>, BigRational)>> {
        self.terms
            .iter()
            .map(|t| {
                let num: BigInt = t
                    .num
                    .parse()
                    .map_err(|_| Error::InvalidInput(format!("bad numerator {:?}", t.num)))?;
                let den: BigInt = t
                    .den
                    .parse()
                    .map_err(|_| Error::InvalidInput(format!("bad denominator {:?}", t.den)))?;
                if den.is_zero() {
                    return Err(Error::InvalidInput("zero denominator".into()));
                }
                Ok((t.exp.clone(), BigRational::new(num, den)))
            })
            .collect()
    }

    pub fn to_rational_form(&self) -> Result<HomogeneousForm<Rationals>> {
        HomogeneousForm::from_terms(
            Rationals,
            self.vars.len(),
            self.degree,
            self.rational_terms()?,
        )
    }

    pub fn to_fq_form(&self, fq: &Fq) -> Result<HomogeneousForm<Fq>> {
        let terms: Result<Vec<(Vec<u8>, u32)>> = self
            .rational_terms()?
            .into_iter()
            .map(|(e, r)| {
                fq.from_rational(&r)
                    .map(|v| (e, v))
                    .ok_or_else(|| {
                        Error::InvalidInput(format!(
                            "coefficient {} has no image in F_{}",
                            r,
                            fq.order()
                        ))
                    })
            })
            .collect();
        HomogeneousForm::from_terms(fq.clone(), self.vars.len(), self.degree, terms?)
    }

    pub fn from_rational_form(form: &HomogeneousForm<Rationals>, vars: &[&str]) -> PolyJson {
        let terms = form
            .terms()
            .map(|(e, c)| TermJson {
                exp: e.clone(),
                num: c.numer().to_string(),
                den: c.denom().to_string(),
            })
            .collect();
        PolyJson {
            vars: vars.iter().map(|s| s.to_string()).collect(),
            degree: form.degree(),
            field: FieldSpec::rational(),
            terms,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::field::rat;

    #[test]
    fn round_trip_rational() {
        let text = r#"{
            "vars": ["x","y"],
            "degree": 2,
            "field": "rational",
            "terms": [
                {"exp": [2,0], "num": "1", "den": "1"},
                {"exp": [1,1], "num": "-3", "den": "2"}
            ]
        }"#;
        let p = PolyJson::parse(text).unwrap();
        let f = p.to_rational_form().unwrap();
        assert_eq!(f.coeff(&[1, 1]), rat(-3, 2));
        let back = PolyJson::from_rational_form(&f, &["x", "y"]);
        assert_eq!(back.terms.len(), 2);
    }

    #[test]
    fn rejects_bad_exponents() {
        let text = r#"{
            "vars": ["x","y"],
            "degree": 2,
            "field": "rational",
            "terms": [{"exp": [2,0,0], "num": "1", "den": "1"}]
        }"#;
        assert!(PolyJson::parse(text).is_err());
        let text2 = r#"{
            "vars": ["x","y"],
            "degree": 2,
            "field": "rational",
            "terms": [{"exp": [1,0], "num": "1", "den": "1"}]
        }"#;
        assert!(PolyJson::parse(text2).is_err());
    }

    #[test]
    fn loads_into_finite_field() {
        let text = r#"{
            "vars": ["x","y","z"],
            "degree": 3,
            "field": {"char": 7, "ext": 1},
            "terms": [{"exp": [3,0,0], "num": "1", "den": "2"}]
        }"#;
        let p = PolyJson::parse(text).unwrap();
        let fq = Fq::new(7, 1).unwrap();
        let f = p.to_fq_form(&fq).unwrap();
        // 1/2 = 4 mod 7
        assert_eq!(f.coeff(&[3, 0, 0]), 4);
    }
}
