//! Transversality of the two branches of the multiplicity-one curve at
//! a node, checked exactly at rational witnesses.
//!
//! The incidence variety {(r', pi') : V . pi' contains 2r'} is cut out,
//! in a chart at r_i, by seven equations: the four coefficients of the
//! restriction of V to the moving line r' and the three coefficients of
//! the next order in the plane coordinate. Its tangent direction is the
//! kernel of the exact 7x8 Jacobian; pushing that direction through the
//! residual-line extraction with first-order jet arithmetic gives the
//! branch direction in the chart at l, with no symbolic differentiation.

use num_rational::BigRational;
use num_traits::Zero;

use super::family::lambda_of;
use super::{fano_tangent_space, CubicThreefold, LineChart};
use crate::error::{Error, Result};
use crate::exact::field::{rat_i64, Jet, Rationals};
use crate::exact::{Field, HomogeneousForm, Mat};

type JetQ = (BigRational, BigRational);

#[derive(Clone, Copy, Debug)]
enum Slot {
    Zero,
    One,
    Var(usize),
}

/// Chart data for the incidence system at one of the doubled lines:
/// the moving line r' is spanned by p1, p2 and the moving plane adds p.
struct IncidenceChart {
    p1: [Slot; 5],
    p2: [Slot; 5],
    p: [Slot; 5],
}

/// Chart at r1 = {x = z = v = 0}: p1 = (a', 1, b', 0, c'),
/// p2 = (a'', 0, b'', 1, c''), plane point p = (w1, 0, w2, 0, 1).
/// Unknowns (a', a'', b', b'', c', c'', w1, w2).
fn chart_r1() -> IncidenceChart {
    use Slot::*;
    IncidenceChart {
        p1: [Var(0), One, Var(2), Zero, Var(4)],
        p2: [Var(1), Zero, Var(3), One, Var(5)],
        p: [Var(6), Zero, Var(7), Zero, One],
    }
}

/// Chart at r2 = {x = y = u = 0}: p1 = (a', b', 1, c', 0),
/// p2 = (a'', b'', 0, c'', 1), plane point p = (w1, w2, 0, 1, 0).
fn chart_r2() -> IncidenceChart {
    use Slot::*;
    IncidenceChart {
        p1: [Var(0), Var(2), One, Var(4), Zero],
        p2: [Var(1), Var(3), Zero, Var(5), One],
        p: [Var(6), Var(7), Zero, One, Zero],
    }
}

const INCIDENCE_EXPS: [[u8; 3]; 7] = [
    [3, 0, 0],
    [2, 1, 0],
    [1, 2, 0],
    [0, 3, 0],
    [2, 0, 1],
    [1, 1, 1],
    [0, 2, 1],
];

fn slot_value(j: &Jet<Rationals>, s: Slot, direction: &[BigRational; 8]) -> JetQ {
    match s {
        Slot::Zero => j.zero(),
        Slot::One => j.one(),
        Slot::Var(i) => (BigRational::zero(), direction[i].clone()),
    }
}

/// The 5x3 substitution matrix whose columns are p1, p2, p evaluated at
/// eps times the direction vector.
fn chart_matrix(
    j: &Jet<Rationals>,
    chart: &IncidenceChart,
    direction: &[BigRational; 8],
) -> Mat<Jet<Rationals>> {
    Mat::from_fn(j.clone(), 5, 3, |i, col| {
        let slot = match col {
            0 => chart.p1[i],
            1 => chart.p2[i],
            _ => chart.p[i],
        };
        slot_value(j, slot, direction)
    })
}

fn lift_form(
    j: &Jet<Rationals>,
    f: &HomogeneousForm<Rationals>,
) -> HomogeneousForm<Jet<Rationals>> {
    f.map_field(j.clone(), |c| Some((c.clone(), BigRational::zero())))
        .expect("lift cannot fail")
}

/// Kernel direction of a 2x3 system over the jet ring. The zeroth-order
/// rank must be 2; picks a unit 2x2 minor and solves by Cramer.
fn jet_kernel_2x3(j: &Jet<Rationals>, rows: &[[JetQ; 3]; 2]) -> Result<[JetQ; 3]> {
    for free in 0..3usize {
        let (i, k) = match free {
            0 => (1, 2),
            1 => (0, 2),
            _ => (0, 1),
        };
        let a = &rows[0][i];
        let b = &rows[0][k];
        let c = &rows[1][i];
        let d = &rows[1][k];
        let det = j.sub(&j.mul(a, d), &j.mul(b, c));
        let Some(det_inv) = j.inv(&det) else { continue };
        let e = j.neg(&rows[0][free]);
        let f = j.neg(&rows[1][free]);
        // solve a xi + b xk = e, c xi + d xk = f
        let xi = j.mul(&j.sub(&j.mul(&e, d), &j.mul(b, &f)), &det_inv);
        let xk = j.mul(&j.sub(&j.mul(a, &f), &j.mul(c, &e)), &det_inv);
        let mut out = [j.zero(), j.zero(), j.zero()];
        out[free] = j.one();
        out[i] = xi;
        out[k] = xk;
        return Ok(out);
    }
    Err(Error::Degenerate(
        "2x3 jet system has no unit minor (degenerate configuration)".into(),
    ))
}

struct BranchResult {
    /// (x', x'', y', y'', z', z'') first-order components in the l-chart.
    direction: [BigRational; 6],
    /// Kernel vector of the incidence Jacobian (the tangent direction of
    /// the second-type curve in this chart, plus the plane deformation).
    kernel: [BigRational; 8],
}

/// Jacobian of the seven incidence equations at the base configuration.
fn incidence_jacobian(
    v: &CubicThreefold<Rationals>,
    chart: &IncidenceChart,
) -> Result<Mat<Rationals>> {
    let j = Jet::new(Rationals);
    let lifted = lift_form(&j, v.form());
    let mut jac = Mat::zero(Rationals, 7, 8);
    for var in 0..8usize {
        let mut dir: [BigRational; 8] = Default::default();
        dir[var] = rat_i64(1);
        let m = chart_matrix(&j, chart, &dir);
        let restricted = lifted.substitute_linear(&m)?;
        for (eq, exps) in INCIDENCE_EXPS.iter().enumerate() {
            let c = restricted.coeff(exps);
            if !c.0.is_zero() {
                return Err(Error::Domain(
                    "incidence equations do not vanish at the base configuration".into(),
                ));
            }
            jac.set(eq, var, c.1);
        }
    }
    Ok(jac)
}

/// Follows the incidence curve to first order and extracts the induced
/// deformation of the residual line l' in the standard l-chart.
fn branch_through(
    v: &CubicThreefold<Rationals>,
    chart: &IncidenceChart,
) -> Result<BranchResult> {
    let jac = incidence_jacobian(v, chart)?;
    if jac.rank() != 7 {
        return Err(Error::Domain(format!(
            "incidence Jacobian has rank {} (expected 7); lambda sample too degenerate",
            jac.rank()
        )));
    }
    let kern = jac.right_kernel();
    debug_assert_eq!(kern.nrows(), 1);
    let kernel: [BigRational; 8] = kern.row(0).to_vec().try_into().expect("eight unknowns");

    let j = Jet::new(Rationals);
    let lifted = lift_form(&j, v.form());
    let m = chart_matrix(&j, chart, &kernel);
    let restricted = lifted.substitute_linear(&m)?;
    for exps in INCIDENCE_EXPS.iter() {
        if !j.is_zero(&restricted.coeff(exps)) {
            return Err(Error::Derivation(
                "kernel direction does not satisfy the incidence equations to first order"
                    .into(),
            ));
        }
    }
    // residual linear form L = alpha s + beta t + gamma w from
    // F|pi' = w^2 (alpha s + beta t + gamma w)
    let alpha = restricted.coeff(&[1, 0, 2]);
    let beta = restricted.coeff(&[0, 1, 2]);
    let gamma = restricted.coeff(&[0, 0, 3]);

    // points of the plane: X(s,t,w) = s p1 + t p2 + w p; row i of m is
    // the coefficient triple of X_i
    let x_row = |i: usize| -> [JetQ; 3] {
        [m.get(i, 0).clone(), m.get(i, 1).clone(), m.get(i, 2).clone()]
    };
    let l_row: [JetQ; 3] = [alpha, beta, gamma];

    // point with v = 0, normalized at u = 1
    let sol_a = jet_kernel_2x3(&j, &[l_row.clone(), x_row(4)])?;
    // point with u = 0, normalized at v = 1
    let sol_b = jet_kernel_2x3(&j, &[l_row, x_row(3)])?;

    let eval_point = |sol: &[JetQ; 3]| -> Result<[JetQ; 5]> {
        let mut out = [j.zero(), j.zero(), j.zero(), j.zero(), j.zero()];
        for (i, slot) in out.iter_mut().enumerate() {
            let row = x_row(i);
            let mut acc = j.zero();
            for (coef, s) in row.iter().zip(sol.iter()) {
                acc = j.add(&acc, &j.mul(coef, s));
            }
            *slot = acc;
        }
        Ok(out)
    };
    let pa = eval_point(&sol_a)?;
    let pb = eval_point(&sol_b)?;
    let norm = |p: &[JetQ; 5], at: usize| -> Result<[JetQ; 5]> {
        let inv = j
            .inv(&p[at])
            .ok_or_else(|| Error::Derivation("point normalization failed".into()))?;
        Ok([
            j.mul(&p[0], &inv),
            j.mul(&p[1], &inv),
            j.mul(&p[2], &inv),
            j.mul(&p[3], &inv),
            j.mul(&p[4], &inv),
        ])
    };
    let pa = norm(&pa, 3)?;
    let pb = norm(&pb, 4)?;
    if !j.is_zero(&pa[4]) || !j.is_zero(&pb[3]) {
        return Err(Error::Derivation("chart normalization inconsistent".into()));
    }
    // zeroth order parts must be the base line points e_u and e_v
    for (i, p) in pa.iter().enumerate() {
        let expect = if i == 3 { rat_i64(1) } else { rat_i64(0) };
        if p.0 != expect {
            return Err(Error::Derivation("branch does not pass through l".into()));
        }
    }
    // chart order (x', x'', y', y'', z', z'')
    let direction = [
        pa[0].1.clone(),
        pb[0].1.clone(),
        pa[1].1.clone(),
        pb[1].1.clone(),
        pa[2].1.clone(),
        pb[2].1.clone(),
    ];
    Ok(BranchResult { direction, kernel })
}

#[derive(Clone, Debug)]
pub struct NodeCheck {
    /// Deformation of l induced by moving r1 along the second-type curve,
    /// in the l-chart coordinates (x', x'', y', y'', z', z'').
    pub branch1_direction: [BigRational; 6],
    /// Same for r2.
    pub branch2_direction: [BigRational; 6],
    /// Branch 1 lies in {x' = 0}.
    pub branch1_in_x_prime_zero: bool,
    /// Branch 2 lies in {x'' = 0}.
    pub branch2_in_x_dprime_zero: bool,
    /// The two directions are linearly independent (l is a node).
    pub independent: bool,
    /// Both directions lie in, and span, the kernel of the tangent
    /// system of the Fano scheme at l.
    pub spans_fano_tangent: bool,
    /// The tangent line of the second-type curve at r1 and the induced
    /// plane deformation match the closed-form coefficients (the plane
    /// deformation up to scale).
    pub gamma_prime_tangent_checks: bool,
}

impl NodeCheck {
    pub fn all_pass(&self) -> bool {
        self.branch1_in_x_prime_zero
            && self.branch2_in_x_dprime_zero
            && self.independent
            && self.spans_fano_tangent
            && self.gamma_prime_tangent_checks
    }
}

/// Runs the node-transversality verification for a family cubic with
/// sufficiently generic coefficients.
pub fn gamma_node_check(v: &CubicThreefold<Rationals>) -> Result<NodeCheck> {
    let lam = lambda_of(v)?;
    let zero = BigRational::zero();
    if lam[19] == zero || lam[20] == zero {
        return Err(Error::Domain(
            "degenerate lambda: c19 and c20 must be nonzero".into(),
        ));
    }
    let d1 = &lam[7] * &lam[20] - &lam[12] * &lam[17];
    let d2 = &lam[12] * &lam[15] - &lam[5] * &lam[20];
    if d1.is_zero() && d2.is_zero() {
        return Err(Error::Domain(
            "degenerate lambda: both tangent-line coefficients vanish".into(),
        ));
    }

    let b1 = branch_through(v, &chart_r1())?;
    let b2 = branch_through(v, &chart_r2())?;

    // kernel layout: (a', a'', b', b'', c', c'', w1, w2)
    let r1_kernel_clean = b1.kernel[0..4].iter().all(|c| c.is_zero());
    let c_prime = &b1.kernel[4];
    let c_dprime = &b1.kernel[5];
    let tangent_line_ok = (&d1 * c_prime + &d2 * c_dprime).is_zero()
        && !(c_prime.is_zero() && c_dprime.is_zero());
    // plane deformation: (w1 : w2) = (c19 c20 : -c12 c19), the direction
    // of the displayed third point of the deformed plane, and the exact
    // incidence relations w1 D1 = -2 c19 c20 c'', w2 D1 = 2 c12 c19 c''
    // coming from the s^2 w / s t w / t^2 w coefficient equations
    let w1 = &b1.kernel[6];
    let w2 = &b1.kernel[7];
    let plane_direction_ok =
        w1 * -(&lam[12] * &lam[19]) == w2 * (&lam[19] * &lam[20]);
    let two = rat_i64(2);
    let plane_exact_ok = w1 * &d1 == -(&two * &lam[19] * &lam[20] * c_dprime)
        && w2 * &d1 == &two * &lam[12] * &lam[19] * c_dprime;
    let plane_ok = plane_direction_ok && plane_exact_ok;
    let gamma_prime_tangent_checks = r1_kernel_clean && tangent_line_ok && plane_ok;

    let branch1_in_x_prime_zero = b1.direction[0].is_zero();
    let branch2_in_x_dprime_zero = b2.direction[1].is_zero();

    let dir_mat = Mat::from_rows(
        Rationals,
        vec![b1.direction.to_vec(), b2.direction.to_vec()],
    )?;
    let independent = dir_mat.rank() == 2;

    // both branches must lie in the 2-dimensional kernel of the tangent
    // system at l, hence span it when independent
    let chart_l = LineChart::standard(&Rationals, [3, 4], [0, 1, 2])?;
    let (murre, kernel) = fano_tangent_space(v, &chart_l)?;
    let in_kernel = |d: &[BigRational; 6]| -> Result<bool> {
        let img = murre.apply(&d.to_vec())?;
        Ok(img.iter().all(|x| x.is_zero()))
    };
    let spans_fano_tangent =
        kernel.dim() == 2 && in_kernel(&b1.direction)? && in_kernel(&b2.direction)? && independent;

    Ok(NodeCheck {
        branch1_direction: b1.direction,
        branch2_direction: b2.direction,
        branch1_in_x_prime_zero,
        branch2_in_x_dprime_zero,
        independent,
        spans_fano_tangent,
        gamma_prime_tangent_checks,
    })
}

#[cfg(test)]
mod tests {
    use super::super::family::build_family_cubic;
    use super::*;

    fn family(qs: [i64; 15], tail: [i64; 6]) -> CubicThreefold<Rationals> {
        let q: Vec<_> = qs.into_iter().map(rat_i64).collect();
        let t: Vec<_> = tail.into_iter().map(rat_i64).collect();
        build_family_cubic(&Rationals, &q, &t).unwrap()
    }

    #[test]
    fn node_check_at_a_generic_witness() {
        let v = family(
            [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47],
            [53, 59, 61, 67, 71, 73],
        );
        let check = gamma_node_check(&v).unwrap();
        assert!(check.branch1_in_x_prime_zero);
        assert!(check.branch2_in_x_dprime_zero);
        assert!(check.independent);
        assert!(check.spans_fano_tangent);
        assert!(check.gamma_prime_tangent_checks);
    }

    #[test]
    fn branch_direction_matches_displayed_formulas() {
        // for the r1 branch the displayed first-order deformation is
        // x' = 0, y' = -c13 c20 / D1 c'', z' = 0,
        // x'' = c19 c20 / D1 c'', y'' = -c14 c20 / D1 c'', z'' = -c12 c19 / D1 c''
        let v = family(
            [1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15],
            [4, 3, 2, 1, 5, 7],
        );
        let lam = lambda_of(&v).unwrap();
        let d1 = &lam[7] * &lam[20] - &lam[12] * &lam[17];
        assert!(!d1.is_zero());
        let check = gamma_node_check(&v).unwrap();
        let b = &check.branch1_direction;
        // read off c'' from x'' = c19 c20 / D1 * c''
        let c_dd = &b[1] * &d1 / (&lam[19] * &lam[20]);
        assert!(!c_dd.is_zero());
        assert_eq!(b[0], rat_i64(0));
        assert_eq!(b[4], rat_i64(0)); // z' = 0
        assert_eq!(b[2], -(&lam[13] * &lam[20]) / &d1 * &c_dd);
        assert_eq!(b[3], -(&lam[14] * &lam[20]) / &d1 * &c_dd);
        assert_eq!(b[5], -(&lam[12] * &lam[19]) / &d1 * &c_dd);
    }

    #[test]
    fn degenerate_lambda_rejected() {
        let v = family(
            [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47],
            [53, 59, 61, 67, 0, 73],
        );
        assert!(gamma_node_check(&v).is_err());
    }
}
