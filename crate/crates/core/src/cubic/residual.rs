//! Classification of the plane sections V . pi containing a line l:
//! writing the restricted cubic as l times a conic, the divisor is one
//! of l + smooth conic, l + r + r', l + 2r, 2l + r, 3l.

use super::{check_line, contains_line, CubicThreefold};
use crate::error::{Error, Result};
use crate::exact::{Field, HomogeneousForm, LinearSubspace, Mat};

#[derive(Clone, Debug, PartialEq)]
pub enum ResidualConfig<F: Field> {
    /// l plus a smooth conic.
    SmoothConic,
    /// l plus two distinct lines; the pair is returned when it is
    /// rational, otherwise the discriminant witnessing the conjugate
    /// pair is reported.
    LPlusRPlusRPrime {
        lines: Option<(LinearSubspace<F>, LinearSubspace<F>)>,
        splitting_discriminant: F::Elem,
    },
    /// l plus a doubled line r != l.
    LPlus2R { r: LinearSubspace<F> },
    /// l doubled plus a residual line r != l.
    TwoLPlusR { r: LinearSubspace<F> },
    /// l tripled.
    ThreeL,
}

impl<F: Field> ResidualConfig<F> {
    pub fn kind(&self) -> &'static str {
        match self {
            ResidualConfig::SmoothConic => "l+conic",
            ResidualConfig::LPlusRPlusRPrime { .. } => "l+r+r'",
            ResidualConfig::LPlus2R { .. } => "l+2r",
            ResidualConfig::TwoLPlusR { .. } => "2l+r",
            ResidualConfig::ThreeL => "3l",
        }
    }

    /// Whether the section contains the base line doubled.
    pub fn doubles_base_line(&self) -> bool {
        matches!(
            self,
            ResidualConfig::TwoLPlusR { .. } | ResidualConfig::ThreeL
        )
    }
}

fn check_plane<F: Field>(p: &LinearSubspace<F>) -> Result<()> {
    if p.ambient_dim() != 5 || p.dim() != 3 {
        return Err(Error::Shape(format!(
            "expected a 2-plane (rank-3 subspace of 5-space), got rank {}",
            p.dim()
        )));
    }
    Ok(())
}

/// Coordinates of the rows of `sub` with respect to the echelon basis of
/// `ambient_sub` (requires containment).
fn coords_in<F: Field>(
    sub: &LinearSubspace<F>,
    ambient_sub: &LinearSubspace<F>,
) -> Result<Mat<F>> {
    let f = sub.field().clone();
    let big = ambient_sub.basis();
    let pivots: Vec<usize> = (0..big.nrows())
        .map(|r| {
            (0..big.ncols())
                .find(|&j| !f.is_zero(big.get(r, j)))
                .expect("nonzero basis row")
        })
        .collect();
    let rows: Vec<Vec<F::Elem>> = (0..sub.basis().nrows())
        .map(|i| {
            let v = sub.basis().row(i);
            pivots.iter().map(|&p| v[p].clone()).collect()
        })
        .collect();
    let coords = Mat::from_rows(f, rows)?;
    // verify: coords * big == sub.basis()
    let recon = coords.matmul(big)?;
    if recon != *sub.basis() {
        return Err(Error::Domain("subspace is not contained in the plane".into()));
    }
    Ok(coords)
}

/// A line inside the plane, given by a linear form on the plane's
/// coordinates, mapped back to an ambient rank-2 subspace.
fn plane_line_to_ambient<F: Field>(
    pi: &LinearSubspace<F>,
    linear: &HomogeneousForm<F>,
) -> Result<LinearSubspace<F>> {
    let f = pi.field().clone();
    let coeffs: Vec<F::Elem> = (0..3)
        .map(|j| {
            let mut e = vec![0u8; 3];
            e[j] = 1;
            linear.coeff(&e)
        })
        .collect();
    let row = Mat::from_rows(f.clone(), vec![coeffs])?;
    let kern = row.right_kernel(); // 2 x 3 plane coordinates
    let ambient = kern.matmul(pi.basis())?;
    LinearSubspace::from_spanning_rows(f, 5, ambient.rows_vec())
}

/// Gram matrix of a ternary quadratic (characteristic != 2).
fn gram<F: Field>(q: &HomogeneousForm<F>) -> Result<Mat<F>> {
    let f = q.field().clone();
    let half = f
        .inv(&f.from_i64(2))
        .ok_or_else(|| Error::UnsupportedField("characteristic 2".into()))?;
    let mut m = Mat::zero(f.clone(), 3, 3);
    for i in 0..3usize {
        for j in 0..3usize {
            let mut e = vec![0u8; 3];
            e[i] += 1;
            e[j] += 1;
            let c = q.coeff(&e);
            let val = if i == j { c } else { f.mul(&c, &half) };
            m.set(i, j, val);
        }
    }
    Ok(m)
}

/// Splits a rank-2 ternary quadratic into two linear forms over the base
/// field when possible. Returns (discriminant, Some(l1, l2)) with q
/// proportional to l1*l2, or (discriminant, None) when the factors are
/// conjugate over a quadratic extension.
fn split_conic<F: Field>(
    q: &HomogeneousForm<F>,
    g: &Mat<F>,
) -> Result<(F::Elem, Option<(HomogeneousForm<F>, HomogeneousForm<F>)>)> {
    let f = q.field().clone();
    // radical direction: kernel of the Gram matrix (1-dimensional here)
    let rad = g.right_kernel();
    // complete the radical basis to a full basis with unit vectors
    let mut rows = rad.rows_vec();
    for j in 0..3usize {
        let mut cand = vec![f.zero(); 3];
        cand[j] = f.one();
        let mut trial = rows.clone();
        trial.push(cand);
        let m = Mat::from_rows(f.clone(), trial.clone())?;
        if m.rank() == rows.len() + 1 {
            rows = trial;
        }
        if rows.len() == 3 {
            break;
        }
    }
    let basis = Mat::from_rows(f.clone(), rows)?; // rows: radical first
    let to_new = basis.transpose(); // columns are new basis vectors
    let q_new = q.substitute_linear(&to_new)?;
    let k = rad.nrows(); // number of radical coordinates in front
    if k + 2 != 3 {
        return Err(Error::Degenerate("split_conic expects a rank-2 conic".into()));
    }
    // q_new depends only on the last two variables:
    // a s^2 + b st + c t^2 in coordinates (k, k+1)
    let exp = |i: usize, j: usize| {
        let mut e = vec![0u8; 3];
        e[i] += 1;
        e[j] += 1;
        e
    };
    let a = q_new.coeff(&exp(k, k));
    let b = q_new.coeff(&exp(k, k + 1));
    let c = q_new.coeff(&exp(k + 1, k + 1));
    let disc = f.sub(&f.mul(&b, &b), &f.mul(&f.from_i64(4), &f.mul(&a, &c)));
    let factors_new: Option<(HomogeneousForm<F>, HomogeneousForm<F>)> = if f.is_zero(&a) {
        // t * (b s + c t)
        let mut t_form = HomogeneousForm::zero(f.clone(), 3, 1);
        let mut et = vec![0u8; 3];
        et[k + 1] = 1;
        t_form.add_term(&et, f.one())?;
        let mut other = HomogeneousForm::zero(f.clone(), 3, 1);
        let mut es = vec![0u8; 3];
        es[k] = 1;
        other.add_term(&es, b.clone())?;
        other.add_term(&et, c.clone())?;
        Some((t_form, other))
    } else {
        match f.sqrt(&disc) {
            None => None,
            Some(s) => {
                // 2a s + (b -+ sqrt) t
                let two_a = f.mul(&f.from_i64(2), &a);
                let mk = |shift: F::Elem| -> Result<HomogeneousForm<F>> {
                    let mut l = HomogeneousForm::zero(f.clone(), 3, 1);
                    let mut es = vec![0u8; 3];
                    es[k] = 1;
                    l.add_term(&es, two_a.clone())?;
                    let mut et = vec![0u8; 3];
                    et[k + 1] = 1;
                    l.add_term(&et, shift)?;
                    Ok(l)
                };
                Some((mk(f.sub(&b, &s))?, mk(f.add(&b, &s))?))
            }
        }
    };
    // transport the factors back to the original plane coordinates:
    // new = basis^-T ... the substitution computed q_new(y) = q(to_new y),
    // so linear forms pull back by the inverse substitution.
    let factors = match factors_new {
        None => None,
        Some((l1, l2)) => {
            let inv = invert3(&to_new)?;
            Some((l1.substitute_linear(&inv)?, l2.substitute_linear(&inv)?))
        }
    };
    Ok((disc, factors))
}

fn invert3<F: Field>(m: &Mat<F>) -> Result<Mat<F>> {
    let f = m.field.clone();
    let n = m.nrows();
    let mut aug = Mat::zero(f.clone(), n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            aug.set(i, j, m.get(i, j).clone());
        }
        aug.set(i, n + i, f.one());
    }
    aug.rref_in_place();
    for i in 0..n {
        if !f.is_one(aug.get(i, i)) {
            return Err(Error::Degenerate("matrix not invertible".into()));
        }
    }
    Ok(Mat::from_fn(f, n, n, |i, j| aug.get(i, n + j).clone()))
}

/// Classifies V . pi relative to the contained line l.
pub fn residual_configuration<F: Field>(
    v: &CubicThreefold<F>,
    l: &LinearSubspace<F>,
    pi: &LinearSubspace<F>,
) -> Result<ResidualConfig<F>> {
    check_line(l)?;
    check_plane(pi)?;
    if !contains_line(v, l)? {
        return Err(Error::Domain("line does not lie on the cubic".into()));
    }
    let f = v.field().clone();
    if f.characteristic() != 0 && f.characteristic() < 5 {
        return Err(Error::UnsupportedField(
            "residual classification needs characteristic 0 or >= 5".into(),
        ));
    }
    let line_coords = coords_in(l, pi)?; // 2 x 3
    // linear form on the plane vanishing on l: kernel of line_coords
    let lin_kernel = line_coords.right_kernel();
    if lin_kernel.nrows() != 1 {
        return Err(Error::Domain("line is not a hyperplane of the plane".into()));
    }
    let mut ell = HomogeneousForm::zero(f.clone(), 3, 1);
    for j in 0..3usize {
        let mut e = vec![0u8; 3];
        e[j] = 1;
        ell.add_term(&e, lin_kernel.get(0, j).clone())?;
    }
    let restricted = v.form().substitute_linear(&pi.parametrization())?;
    if restricted.is_zero() {
        return Err(Error::Degenerate(
            "plane lies entirely on the cubic (V singular)".into(),
        ));
    }
    let (mult, cofactor) = restricted.multiplicity_of_linear(&ell)?;
    match mult {
        0 => Err(Error::Domain(
            "restricted cubic is not divisible by the line (inconsistent input)".into(),
        )),
        3 => Ok(ResidualConfig::ThreeL),
        2 => {
            // cofactor is linear, not proportional to ell
            let r = plane_line_to_ambient(pi, &cofactor)?;
            Ok(ResidualConfig::TwoLPlusR { r })
        }
        1 => {
            let g = gram(&cofactor)?;
            match g.rank() {
                3 => Ok(ResidualConfig::SmoothConic),
                2 => {
                    let (disc, factors) = split_conic(&cofactor, &g)?;
                    let lines = match factors {
                        None => None,
                        Some((l1, l2)) => Some((
                            plane_line_to_ambient(pi, &l1)?,
                            plane_line_to_ambient(pi, &l2)?,
                        )),
                    };
                    Ok(ResidualConfig::LPlusRPlusRPrime {
                        lines,
                        splitting_discriminant: disc,
                    })
                }
                1 => {
                    // rank-1 Gram matrix is a scalar times v v^T, so any
                    // nonzero row gives the doubled linear form, always
                    // rational over the base field
                    let row = (0..3)
                        .find(|&i| (0..3).any(|j| !f.is_zero(g.get(i, j))))
                        .expect("rank 1");
                    let mut line_form = HomogeneousForm::zero(f.clone(), 3, 1);
                    for j in 0..3usize {
                        let mut e = vec![0u8; 3];
                        e[j] = 1;
                        line_form.add_term(&e, g.get(row, j).clone())?;
                    }
                    // sanity: cofactor is proportional to line_form^2
                    let sq = line_form.mul(&line_form)?;
                    let anchor = sq
                        .terms()
                        .next()
                        .map(|(e, c)| (e.clone(), c.clone()))
                        .expect("nonzero square");
                    let scale = f
                        .div(&cofactor.coeff(&anchor.0), &anchor.1)
                        .ok_or_else(|| Error::Derivation("degenerate square scaling".into()))?;
                    if sq.scale(&scale) != cofactor {
                        return Err(Error::Derivation(
                            "rank-1 conic failed to factor as a doubled line".into(),
                        ));
                    }
                    let r = plane_line_to_ambient(pi, &line_form)?;
                    Ok(ResidualConfig::LPlus2R { r })
                }
                _ => Err(Error::Degenerate("zero residual conic".into())),
            }
        }
        _ => Err(Error::Derivation(format!(
            "impossible multiplicity {mult} for a cubic section"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::super::family::{build_family_cubic, standard_configuration};
    use super::super::fermat_cubic_threefold;
    use super::*;
    use crate::exact::field::{rat_i64, Rationals};

    fn sample_family() -> CubicThreefold<Rationals> {
        let q: Vec<_> = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47]
            .into_iter()
            .map(rat_i64)
            .collect();
        let tail: Vec<_> = [53, 59, 61, 67, 71, 73].into_iter().map(rat_i64).collect();
        build_family_cubic(&Rationals, &q, &tail).unwrap()
    }

    #[test]
    fn family_sections_are_doubled_lines() {
        let v = sample_family();
        let cfg = standard_configuration(&Rationals);
        let c1 = residual_configuration(&v, &cfg.l, &cfg.pi1).unwrap();
        match c1 {
            ResidualConfig::LPlus2R { ref r } => assert_eq!(*r, cfg.r1),
            other => panic!("expected l+2r, got {}", other.kind()),
        }
        let c2 = residual_configuration(&v, &cfg.l, &cfg.pi2).unwrap();
        match c2 {
            ResidualConfig::LPlus2R { ref r } => assert_eq!(*r, cfg.r2),
            other => panic!("expected l+2r, got {}", other.kind()),
        }
    }

    fn fermat_line() -> LinearSubspace<Rationals> {
        LinearSubspace::from_spanning_rows(
            Rationals,
            5,
            vec![
                vec![rat_i64(1), rat_i64(-1), rat_i64(0), rat_i64(0), rat_i64(0)],
                vec![rat_i64(0), rat_i64(0), rat_i64(1), rat_i64(-1), rat_i64(0)],
            ],
        )
        .unwrap()
    }

    fn fermat_plane(third: [i64; 5]) -> LinearSubspace<Rationals> {
        LinearSubspace::from_spanning_rows(
            Rationals,
            5,
            vec![
                vec![rat_i64(1), rat_i64(-1), rat_i64(0), rat_i64(0), rat_i64(0)],
                vec![rat_i64(0), rat_i64(0), rat_i64(1), rat_i64(-1), rat_i64(0)],
                third.into_iter().map(rat_i64).collect(),
            ],
        )
        .unwrap()
    }

    #[test]
    fn fermat_sections_by_direct_restriction() {
        // the antidiagonal line on the Fermat cubic threefold; the
        // expected shapes below come from restricting by hand:
        // along e_v the section is w^3 (the line tripled), along
        // e_y + e_z the residual conic has full-rank Gram matrix, and
        // along e_y the residual conic is a conjugate pair of lines
        // (discriminant -3 times a square, not a rational square)
        let v = fermat_cubic_threefold(Rationals);
        let l = fermat_line();

        let c = residual_configuration(&v, &l, &fermat_plane([0, 0, 0, 0, 1])).unwrap();
        assert_eq!(c.kind(), "3l");

        let c = residual_configuration(&v, &l, &fermat_plane([0, 1, 1, 0, 0])).unwrap();
        assert_eq!(c.kind(), "l+conic");

        let c = residual_configuration(&v, &l, &fermat_plane([0, 1, 0, 0, 0])).unwrap();
        match c {
            ResidualConfig::LPlusRPlusRPrime { lines, .. } => assert!(lines.is_none()),
            other => panic!("expected l+r+r', got {}", other.kind()),
        }
    }

    #[test]
    fn conjugate_pair_splits_over_a_larger_field() {
        // the same section over F_7 splits: -3 = 4 = 2^2 there
        use crate::exact::field::Fq;
        let fq = Fq::new(7, 1).unwrap();
        let v = {
            let mut form = crate::exact::HomogeneousForm::zero(fq.clone(), 5, 3);
            for i in 0..5 {
                let mut e = vec![0u8; 5];
                e[i] = 3;
                form.add_term(&e, 1).unwrap();
            }
            CubicThreefold::new(form).unwrap()
        };
        let one = 1u32;
        let neg = fq.neg(&one);
        let l = LinearSubspace::from_spanning_rows(
            fq.clone(),
            5,
            vec![vec![one, neg, 0, 0, 0], vec![0, 0, one, neg, 0]],
        )
        .unwrap();
        let pi = LinearSubspace::from_spanning_rows(
            fq.clone(),
            5,
            vec![
                vec![one, neg, 0, 0, 0],
                vec![0, 0, one, neg, 0],
                vec![0, one, 0, 0, 0],
            ],
        )
        .unwrap();
        let c = residual_configuration(&v, &l, &pi).unwrap();
        match c {
            ResidualConfig::LPlusRPlusRPrime { lines, .. } => assert!(lines.is_some()),
            other => panic!("expected split l+r+r', got {}", other.kind()),
        }
    }

    #[test]
    fn errors_on_line_not_in_plane() {
        let v = sample_family();
        let cfg = standard_configuration(&Rationals);
        // r1 is not contained in pi2
        assert!(residual_configuration(&v, &cfg.r1, &cfg.pi2).is_err());
    }
}
