//! The explicit family of cubics through the standard three-line
//! configuration, its coefficient bookkeeping and dimension counts.
//!
//! Coordinates (x, y, z, u, v) are fixed so that
//! l = {x = y = z = 0},  r1 = {x = z = v = 0},  r2 = {x = y = u = 0},
//! with l meeting r1 at e_u and r2 at e_v. A cubic meets the planes
//! pi1 = {x = z = 0} and pi2 = {x = y = 0} in l + 2 r1 resp. l + 2 r2
//! exactly when it has the shape
//! x*Q + c15 y^2 z + c16 y z^2 + c17 y z u + c18 y z v + c19 y v^2 + c20 z u^2.

use super::{contains_line, CubicThreefold};
use crate::error::{Error, Result};
use crate::exact::{Field, HomogeneousForm, LinearSubspace, Mat};

/// Exponent vectors of the 21 family monomials, indexed by the
/// coefficient number: 0..=14 are x times the quadratic monomials in
/// the order x^2, xy, xz, xu, xv, y^2, yz, yu, yv, z^2, zu, zv, u^2,
/// uv, v^2; then y^2 z, y z^2, y z u, y z v, y v^2, z u^2.
pub const FAMILY_MONOMIALS: [[u8; 5]; 21] = [
    [3, 0, 0, 0, 0],
    [2, 1, 0, 0, 0],
    [2, 0, 1, 0, 0],
    [2, 0, 0, 1, 0],
    [2, 0, 0, 0, 1],
    [1, 2, 0, 0, 0],
    [1, 1, 1, 0, 0],
    [1, 1, 0, 1, 0],
    [1, 1, 0, 0, 1],
    [1, 0, 2, 0, 0],
    [1, 0, 1, 1, 0],
    [1, 0, 1, 0, 1],
    [1, 0, 0, 2, 0],
    [1, 0, 0, 1, 1],
    [1, 0, 0, 0, 2],
    [0, 2, 1, 0, 0],
    [0, 1, 2, 0, 0],
    [0, 1, 1, 1, 0],
    [0, 1, 1, 0, 1],
    [0, 1, 0, 0, 2],
    [0, 0, 1, 2, 0],
];

/// The standard configuration of the three lines and two planes.
#[derive(Clone, Debug)]
pub struct FamilyConfiguration<F: Field> {
    pub l: LinearSubspace<F>,
    pub r1: LinearSubspace<F>,
    pub r2: LinearSubspace<F>,
    pub pi1: LinearSubspace<F>,
    pub pi2: LinearSubspace<F>,
}

fn axis_span<F: Field>(field: &F, axes: &[usize]) -> LinearSubspace<F> {
    let rows = axes
        .iter()
        .map(|&i| {
            let mut r = vec![field.zero(); 5];
            r[i] = field.one();
            r
        })
        .collect();
    LinearSubspace::from_spanning_rows(field.clone(), 5, rows).expect("unit rows")
}

pub fn standard_configuration<F: Field>(field: &F) -> FamilyConfiguration<F> {
    FamilyConfiguration {
        l: axis_span(field, &[3, 4]),
        r1: axis_span(field, &[1, 3]),
        r2: axis_span(field, &[2, 4]),
        pi1: axis_span(field, &[1, 3, 4]),
        pi2: axis_span(field, &[2, 3, 4]),
    }
}

/// Builds the family cubic from its 21 coefficients: the 15 coefficients
/// of the quadratic Q (in the monomial order above) followed by the six
/// named tail coefficients c15..c20.
pub fn build_family_cubic<F: Field>(
    field: &F,
    q_coeffs: &[F::Elem],
    tail: &[F::Elem],
) -> Result<CubicThreefold<F>> {
    if q_coeffs.len() != 15 || tail.len() != 6 {
        return Err(Error::Shape(
            "family cubic needs 15 quadratic and 6 tail coefficients".into(),
        ));
    }
    let mut form = HomogeneousForm::zero(field.clone(), 5, 3);
    for (i, c) in q_coeffs.iter().chain(tail.iter()).enumerate() {
        form.add_term(&FAMILY_MONOMIALS[i], c.clone())?;
    }
    CubicThreefold::new(form)
}

/// Extracts the 21 family coefficients from a cubic, failing when the
/// cubic carries a monomial outside the family.
pub fn lambda_of<F: Field>(v: &CubicThreefold<F>) -> Result<Vec<F::Elem>> {
    let allowed: std::collections::BTreeSet<Vec<u8>> =
        FAMILY_MONOMIALS.iter().map(|e| e.to_vec()).collect();
    for (e, _) in v.form().terms() {
        if !allowed.contains(e) {
            return Err(Error::Domain(format!(
                "cubic is not in the family: stray monomial {e:?}"
            )));
        }
    }
    Ok(FAMILY_MONOMIALS
        .iter()
        .map(|e| v.form().coeff(e))
        .collect())
}

/// Dimension bookkeeping for the family and its projective stabilizer.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FamilyDimensions {
    pub family_linear: usize,
    pub family_projective: usize,
    pub stabilizer_linear: usize,
    pub stabilizer_projective: usize,
}

/// Enumerates the degree-3 monomials whose restrictions to both planes
/// are compatible with the divisors l + 2 r_i: the restriction to pi1
/// must be 0 or y v^2, the restriction to pi2 must be 0 or z u^2.
fn admissible_monomial(e: &[u8; 5]) -> bool {
    let to_pi1_zero = e[0] > 0 || e[2] > 0; // restriction x = z = 0
    let to_pi2_zero = e[0] > 0 || e[1] > 0; // restriction x = y = 0
    let is_yv2 = *e == [0, 1, 0, 0, 2];
    let is_zu2 = *e == [0, 0, 1, 2, 0];
    (to_pi1_zero || is_yv2) && (to_pi2_zero || is_zu2)
}

fn degree3_monomials() -> Vec<[u8; 5]> {
    let mut out = Vec::new();
    for a in 0..=3u8 {
        for b in 0..=3 - a {
            for c in 0..=3 - a - b {
                for d in 0..=3 - a - b - c {
                    let e = 3 - a - b - c - d;
                    out.push([a, b, c, d, e]);
                }
            }
        }
    }
    out
}

/// Linear conditions "A maps the subspace into itself" on the 25 entries
/// of a 5x5 matrix, solved exactly; the subspace count follows as the
/// kernel dimension.
fn stabilizer_dimension<F: Field>(field: &F, invariant: &[&LinearSubspace<F>]) -> usize {
    let mut rows: Vec<Vec<F::Elem>> = Vec::new();
    for s in invariant {
        let basis = s.basis();
        for bi in 0..basis.nrows() {
            let svec: Vec<F::Elem> = basis.row(bi).to_vec();
            // residual of A*s after reduction against the echelon basis
            // must vanish; the reduction is linear in the entries of A*s,
            // and A*s is linear in the entries of A.
            // Condition rows: for each ambient coordinate c, the c-th
            // component of  (A s) - sum_r (A s)[pivot_r] * basis_r  = 0.
            let pivots: Vec<usize> = (0..basis.nrows())
                .map(|r| {
                    (0..5)
                        .find(|&j| !field.is_zero(basis.get(r, j)))
                        .expect("nonzero basis row")
                })
                .collect();
            for c in 0..5usize {
                // coefficient of A[p][q] in the c-th residual component
                let mut row = vec![field.zero(); 25];
                for p in 0..5usize {
                    for q in 0..5usize {
                        // (A s)[p] contains A[p][q] * s[q]
                        let mut coeff = field.zero();
                        if p == c {
                            coeff = field.add(&coeff, &svec[q]);
                        }
                        for (r, &piv) in pivots.iter().enumerate() {
                            if p == piv {
                                // -(A s)[piv_r] * basis_r[c]
                                let t = field.mul(&svec[q], basis.get(r, c));
                                coeff = field.sub(&coeff, &t);
                            }
                        }
                        row[5 * p + q] = coeff;
                    }
                }
                rows.push(row);
            }
        }
    }
    if rows.is_empty() {
        return 25;
    }
    let m = Mat::from_rows(field.clone(), rows).expect("uniform rows");
    25 - m.rank()
}

pub fn family_dimension_counts<F: Field>(field: &F) -> FamilyDimensions {
    let family_linear = degree3_monomials()
        .iter()
        .filter(|e| admissible_monomial(e))
        .count();
    let config = standard_configuration(field);
    let stabilizer_linear =
        stabilizer_dimension(field, &[&config.l, &config.r1, &config.r2]);
    FamilyDimensions {
        family_linear,
        family_projective: family_linear - 1,
        stabilizer_linear,
        stabilizer_projective: stabilizer_linear - 1,
    }
}

/// Stabilizer dimension with other invariant-subspace conditions, used
/// for cross-checks.
pub fn stabilizer_dimension_of<F: Field>(
    field: &F,
    invariant: &[&LinearSubspace<F>],
) -> usize {
    stabilizer_dimension(field, invariant)
}

/// Checks that the family cubic actually contains the standard line.
pub fn family_contains_standard_line<F: Field>(v: &CubicThreefold<F>) -> Result<bool> {
    let config = standard_configuration(v.field());
    contains_line(v, &config.l)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::field::{rat_i64, Rationals};

    fn sample_lambda() -> (Vec<num_rational::BigRational>, Vec<num_rational::BigRational>) {
        let q: Vec<_> = (0..15).map(|i| rat_i64(i as i64 + 2)).collect();
        let tail: Vec<_> = [3, -2, 5, 7, 4, 9].into_iter().map(rat_i64).collect();
        (q, tail)
    }

    #[test]
    fn family_monomial_count_is_21() {
        assert_eq!(FAMILY_MONOMIALS.len(), 21);
        let by_enumeration: Vec<[u8; 5]> = degree3_monomials()
            .into_iter()
            .filter(admissible_monomial)
            .collect();
        assert_eq!(by_enumeration.len(), 21);
        let mut expect: Vec<[u8; 5]> = FAMILY_MONOMIALS.to_vec();
        expect.sort_unstable();
        let mut got = by_enumeration;
        got.sort_unstable();
        assert_eq!(got, expect);
    }

    #[test]
    fn dimension_counts() {
        let d = family_dimension_counts(&Rationals);
        assert_eq!(
            d,
            FamilyDimensions {
                family_linear: 21,
                family_projective: 20,
                stabilizer_linear: 11,
                stabilizer_projective: 10,
            }
        );
    }

    #[test]
    fn stabilizer_of_line_alone_is_19() {
        let config = standard_configuration(&Rationals);
        assert_eq!(stabilizer_dimension_of(&Rationals, &[&config.l]), 19);
        assert_eq!(stabilizer_dimension_of(&Rationals, &[]), 25);
    }

    #[test]
    fn family_cubic_contains_all_three_lines() {
        let (q, tail) = sample_lambda();
        let v = build_family_cubic(&Rationals, &q, &tail).unwrap();
        let config = standard_configuration(&Rationals);
        assert!(contains_line(&v, &config.l).unwrap());
        assert!(contains_line(&v, &config.r1).unwrap());
        assert!(contains_line(&v, &config.r2).unwrap());
        let lam = lambda_of(&v).unwrap();
        assert_eq!(lam.len(), 21);
        assert_eq!(lam[19], rat_i64(4));
        assert_eq!(lam[20], rat_i64(9));
    }

    #[test]
    fn lambda_extraction_rejects_outsiders() {
        let v = super::super::fermat_cubic_threefold(Rationals);
        assert!(lambda_of(&v).is_err());
    }
}
