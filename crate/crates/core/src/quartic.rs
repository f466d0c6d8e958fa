//! Plane-quartic primitives: line-section divisor patterns, bitangents,
//! residual intersections, and the finite-field count of the genus-3
//! Prym fiber (lines avoiding six marked points of a conic and not
//! tangent to it).

use crate::error::{Error, Result};
use crate::exact::field::Fq;
use crate::exact::{factor_pattern, Field, HomogeneousForm, LinearSubspace, Mat, MultiplicityPattern};

/// A plane quartic curve: a nonzero degree-4 form in 3 variables.
#[derive(Clone, Debug, PartialEq)]
pub struct PlaneQuartic<F: Field> {
    form: HomogeneousForm<F>,
}

impl<F: Field> PlaneQuartic<F> {
    pub fn new(form: HomogeneousForm<F>) -> Result<Self> {
        if form.num_vars() != 3 || form.degree() != 4 {
            return Err(Error::Shape(
                "a plane quartic is a degree-4 form in 3 variables".into(),
            ));
        }
        if form.is_zero() {
            return Err(Error::Degenerate("the zero form".into()));
        }
        Ok(PlaneQuartic { form })
    }

    pub fn form(&self) -> &HomogeneousForm<F> {
        &self.form
    }
    pub fn field(&self) -> &F {
        self.form.field()
    }

    /// Whether a projective point lies on the curve.
    pub fn contains_point(&self, p: &[F::Elem]) -> Result<bool> {
        Ok(self.field().is_zero(&self.form.eval(p)?))
    }

    /// Gradient at a point.
    pub fn gradient(&self, p: &[F::Elem]) -> Result<Vec<F::Elem>> {
        (0..3).map(|i| self.form.partial(i).eval(p)).collect()
    }
}

fn check_plane_line<F: Field>(l: &LinearSubspace<F>) -> Result<()> {
    if l.ambient_dim() != 3 || l.dim() != 2 {
        return Err(Error::Shape(
            "expected a line of the projective plane (rank-2 subspace of 3-space)".into(),
        ));
    }
    Ok(())
}

/// Divisor pattern of the intersection of the quartic with a line: the
/// root multiplicities of the restricted binary quartic.
pub fn line_section_pattern<F: Field>(
    x: &PlaneQuartic<F>,
    l: &LinearSubspace<F>,
) -> Result<MultiplicityPattern> {
    check_plane_line(l)?;
    let restricted = x.form.substitute_linear(&l.parametrization())?;
    if restricted.is_zero() {
        return Err(Error::Degenerate(
            "line is a component of the quartic".into(),
        ));
    }
    factor_pattern(&restricted)
}

/// Bitangency test. A bitangent meets the curve in 2p + 2q (two tangency
/// points) or 4p (a hyperflex).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BitangentInfo {
    pub is_bitangent: bool,
    pub hyperflex: bool,
}

pub fn is_bitangent<F: Field>(
    x: &PlaneQuartic<F>,
    l: &LinearSubspace<F>,
) -> Result<BitangentInfo> {
    let pat = line_section_pattern(x, l)?;
    Ok(BitangentInfo {
        is_bitangent: pat.is(&[2, 2]) || pat.is(&[4]),
        hyperflex: pat.is(&[4]),
    })
}

/// All lines of the projective plane over F_q, as rank-2 subspaces; the
/// canonical representatives run over the dual-plane points
/// [1:b:c], [0:1:c], [0:0:1].
pub fn all_plane_lines(fq: &Fq) -> Vec<LinearSubspace<Fq>> {
    let mut duals: Vec<[u32; 3]> = Vec::new();
    for b in fq.all_elems() {
        for c in fq.all_elems() {
            duals.push([1, b, c]);
        }
    }
    for c in fq.all_elems() {
        duals.push([0, 1, c]);
    }
    duals.push([0, 0, 1]);
    duals
        .into_iter()
        .map(|d| {
            let m = Mat::from_rows(fq.clone(), vec![d.to_vec()]).expect("row");
            crate::exact::kernel_subspace(&m)
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BitangentCount {
    pub count: u64,
    pub hyperflexes: u64,
    /// No singular point of the curve was found over this field
    /// (diagnostic: rational points only).
    pub smooth_over_field: bool,
}

/// Counts F_q-rational bitangent lines by exhausting the q^2 + q + 1
/// lines of the plane. `ext` extends the curve's prime field.
pub fn count_bitangents(x: &PlaneQuartic<Fq>, ext: u32) -> Result<BitangentCount> {
    let base = x.field();
    if base.ext_degree() != 1 {
        return Err(Error::Domain(
            "count_bitangents expects a curve over a prime field".into(),
        ));
    }
    let fq = Fq::new(base.prime(), ext)?;
    let form = x.form.map_field(fq.clone(), |c| Some(*c))?;
    let xq = PlaneQuartic::new(form)?;
    let smooth = singular_point_on_curve(&xq)?.is_none();
    let mut count = 0;
    let mut hyperflexes = 0;
    for l in all_plane_lines(&fq) {
        // a line inside the curve would be a singularity witness; the
        // pattern call errors on it, so surface that as a flagged result
        match is_bitangent(&xq, &l) {
            Ok(info) => {
                if info.is_bitangent {
                    count += 1;
                }
                if info.hyperflex {
                    hyperflexes += 1;
                }
            }
            Err(Error::Degenerate(_)) => {
                return Ok(BitangentCount {
                    count: 0,
                    hyperflexes: 0,
                    smooth_over_field: false,
                });
            }
            Err(e) => return Err(e),
        }
    }
    Ok(BitangentCount {
        count,
        hyperflexes,
        smooth_over_field: smooth,
    })
}

/// Exhaustive search for a rational singular point of the quartic.
pub fn singular_point_on_curve(x: &PlaneQuartic<Fq>) -> Result<Option<[u32; 3]>> {
    let fq = x.field().clone();
    let mut points: Vec<[u32; 3]> = Vec::new();
    for b in fq.all_elems() {
        for c in fq.all_elems() {
            points.push([1, b, c]);
        }
    }
    for c in fq.all_elems() {
        points.push([0, 1, c]);
    }
    points.push([0, 0, 1]);
    for p in points {
        let pv = p.to_vec();
        if x.contains_point(&pv)? && x.gradient(&pv)?.iter().all(|g| fq.is_zero(g)) {
            return Ok(Some(p));
        }
    }
    Ok(None)
}

/// The residual divisor of the section of the quartic by the line
/// through p and q (the tangent line at p when p = q): the binary
/// quadratic cutting the two remaining intersection points, in the
/// parametrization s*p + t*q (resp. s*p + t*h for a tangent direction h).
#[derive(Clone, Debug)]
pub struct ResidualPair<F: Field> {
    /// Basis of the line: the residual quadratic lives in its (s, t).
    pub line_points: [Vec<F::Elem>; 2],
    pub quadratic: HomogeneousForm<F>,
    /// The two residual points, when rational.
    pub points: Option<(Vec<F::Elem>, Vec<F::Elem>)>,
}

fn binary_coeff_roots<F: Field>(
    f: &F,
    quad: &HomogeneousForm<F>,
) -> Result<Option<((F::Elem, F::Elem), (F::Elem, F::Elem))>> {
    // roots of a s^2 + b st + c t^2 as projective (s : t) pairs
    let a = quad.coeff(&[2, 0]);
    let b = quad.coeff(&[1, 1]);
    let c = quad.coeff(&[0, 2]);
    if f.is_zero(&a) {
        if f.is_zero(&b) {
            // c t^2: double root at [1:0]
            return Ok(Some(((f.one(), f.zero()), (f.one(), f.zero()))));
        }
        // t (b s + c t): roots [1:0] and [-c : b]
        return Ok(Some((
            (f.one(), f.zero()),
            (f.neg(&c), b),
        )));
    }
    let disc = f.sub(&f.mul(&b, &b), &f.mul(&f.from_i64(4), &f.mul(&a, &c)));
    match f.sqrt(&disc) {
        None => Ok(None),
        Some(s) => {
            let two_a = f.mul(&f.from_i64(2), &a);
            let r1 = (f.sub(&s, &b), two_a.clone());
            let r2 = (f.neg(&f.add(&b, &s)), two_a);
            Ok(Some((r1, r2)))
        }
    }
}

pub fn residual_pair<F: Field>(
    x: &PlaneQuartic<F>,
    p: &[F::Elem],
    q: &[F::Elem],
) -> Result<ResidualPair<F>> {
    let f = x.field().clone();
    if !x.contains_point(p)? || !x.contains_point(q)? {
        return Err(Error::Domain("both points must lie on the quartic".into()));
    }
    let p = p.to_vec();
    let q = q.to_vec();
    let same = {
        // projective equality: p and q span the same 1-dim space
        let m = Mat::from_rows(f.clone(), vec![p.clone(), q.clone()])?;
        m.rank() == 1
    };
    let (b0, b1, line_divisor_mults): (Vec<F::Elem>, Vec<F::Elem>, [u8; 2]) = if same {
        let grad = x.gradient(&p)?;
        if grad.iter().all(|g| f.is_zero(g)) {
            return Err(Error::Degenerate(
                "tangent line undefined at a singular point".into(),
            ));
        }
        let grow = Mat::from_rows(f.clone(), vec![grad])?;
        let tangent = crate::exact::kernel_subspace(&grow);
        debug_assert_eq!(tangent.dim(), 2);
        // pick a basis vector of the tangent line independent of p
        let mut h: Option<Vec<F::Elem>> = None;
        for i in 0..tangent.dim() {
            let cand = tangent.basis().row(i).to_vec();
            let m = Mat::from_rows(f.clone(), vec![p.clone(), cand.clone()])?;
            if m.rank() == 2 {
                h = Some(cand);
                break;
            }
        }
        let h = h.ok_or_else(|| Error::Degenerate("tangent line collapsed".into()))?;
        (p.clone(), h, [2, 0])
    } else {
        (p.clone(), q.clone(), [1, 1])
    };
    let param = Mat::from_rows(f.clone(), vec![b0.clone(), b1.clone()])?.transpose();
    let restricted = x.form.substitute_linear(&param)?;
    if restricted.is_zero() {
        return Err(Error::Degenerate("line lies on the quartic".into()));
    }
    // divide out the section at the base points: p sits at [1:0], so its
    // factor is t; q at [0:1] contributes s (tangent case: t twice)
    let lin = |sc: i64, tc: i64| -> HomogeneousForm<F> {
        let mut l = HomogeneousForm::zero(f.clone(), 2, 1);
        l.add_term(&[1, 0], f.from_i64(sc)).expect("term");
        l.add_term(&[0, 1], f.from_i64(tc)).expect("term");
        l
    };
    let mut quad = restricted;
    let t_form = lin(0, 1);
    let s_form = lin(1, 0);
    let divisions: Vec<&HomogeneousForm<F>> = if line_divisor_mults == [2, 0] {
        vec![&t_form, &t_form]
    } else {
        vec![&t_form, &s_form]
    };
    for d in divisions {
        quad = quad
            .divide_by_linear(d)?
            .ok_or_else(|| Error::Domain("section not divisible at a base point".into()))?;
    }
    let points = binary_coeff_roots(&f, &quad)?.map(|((s1, t1), (s2, t2))| {
        let mk = |s: &F::Elem, t: &F::Elem| -> Vec<F::Elem> {
            (0..3)
                .map(|i| f.add(&f.mul(s, &b0[i]), &f.mul(t, &b1[i])))
                .collect()
        };
        (mk(&s1, &t1), mk(&s2, &t2))
    });
    Ok(ResidualPair {
        line_points: [b0, b1],
        quadratic: quad,
        points,
    })
}

/// Six distinct rational points on the fixed conic xz = y^2, given by
/// their parameters on the parametrizing projective line.
#[derive(Clone, Debug)]
pub struct MarkedConic {
    fq: Fq,
    /// The conic form xz - y^2.
    pub conic: HomogeneousForm<Fq>,
    /// Marked points as projective parameters (s : t); the embedded
    /// point is [s^2 : s t : t^2].
    pub marked_params: [(u32, u32); 6],
}

fn conic_form(fq: &Fq) -> HomogeneousForm<Fq> {
    let mut c = HomogeneousForm::zero(fq.clone(), 3, 2);
    c.add_term(&[1, 0, 1], 1).expect("term");
    c.add_term(&[0, 2, 0], fq.neg(&1)).expect("term");
    c
}

impl MarkedConic {
    pub fn new(fq: &Fq, marked_params: [(u32, u32); 6]) -> Result<MarkedConic> {
        // normalize and check distinctness as projective points
        let mut normalized = Vec::new();
        for &(s, t) in &marked_params {
            if s == 0 && t == 0 {
                return Err(Error::Domain("(0,0) is not a projective point".into()));
            }
            let key = if s != 0 {
                let si = fq.inv(&s).expect("nonzero");
                (1u32, fq.mul(&t, &si))
            } else {
                (0u32, 1u32)
            };
            normalized.push(key);
        }
        normalized.sort_unstable();
        normalized.dedup();
        if normalized.len() != 6 {
            return Err(Error::Domain("marked points must be pairwise distinct".into()));
        }
        let mc = MarkedConic {
            fq: fq.clone(),
            conic: conic_form(fq),
            marked_params,
        };
        // the embedded points do satisfy the conic equation
        for &(s, t) in &marked_params {
            let p = mc.embed(s, t);
            let v = mc.conic.eval(&p.to_vec())?;
            if !fq.is_zero(&v) {
                return Err(Error::Domain("marked point is not on the conic".into()));
            }
        }
        Ok(mc)
    }

    pub fn embed(&self, s: u32, t: u32) -> [u32; 3] {
        let f = &self.fq;
        [f.mul(&s, &s), f.mul(&s, &t), f.mul(&t, &t)]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FiberCount {
    pub direct: u64,
    pub formula: u64,
    pub matches: bool,
}

/// Counts the lines of the plane through none of the six marked points
/// and not tangent to the conic, and compares with the closed form
/// C(q-5, 2) + (q^2 - q)/2 (secants through two unmarked rational points
/// of the conic, plus secants through a conjugate pair).
pub fn genus3_fiber_counts(m: &MarkedConic) -> Result<FiberCount> {
    let fq = &m.fq;
    let q = fq.order();
    if q < 7 {
        return Err(Error::Domain("fiber count needs q >= 7".into()));
    }
    // a line a x + b y + c z pulls back through the parametrization to
    // a s^2 + b st + c t^2; tangency = double root = zero discriminant
    let mut direct = 0u64;
    let mut duals: Vec<[u32; 3]> = Vec::new();
    for b in fq.all_elems() {
        for c in fq.all_elems() {
            duals.push([1, b, c]);
        }
    }
    for c in fq.all_elems() {
        duals.push([0, 1, c]);
    }
    duals.push([0, 0, 1]);
    for [a, b, c] in duals {
        let disc = fq.sub(&fq.mul(&b, &b), &fq.mul(&fq.from_i64(4), &fq.mul(&a, &c)));
        if disc == 0 {
            continue; // tangent line
        }
        let through_marked = m.marked_params.iter().any(|&(s, t)| {
            let s2 = fq.mul(&s, &s);
            let st = fq.mul(&s, &t);
            let t2 = fq.mul(&t, &t);
            let v = fq.add(
                &fq.add(&fq.mul(&a, &s2), &fq.mul(&b, &st)),
                &fq.mul(&c, &t2),
            );
            v == 0
        });
        if !through_marked {
            direct += 1;
        }
    }
    let rational_secants = (q - 5) * (q - 6) / 2;
    let conjugate_secants = (q * q - q) / 2;
    let formula = rational_secants + conjugate_secants;
    Ok(FiberCount {
        direct,
        formula,
        matches: direct == formula,
    })
}

/// Fermat quartic x^4 + y^4 + z^4.
pub fn fermat_quartic<F: Field>(field: F) -> PlaneQuartic<F> {
    let mut form = HomogeneousForm::zero(field.clone(), 3, 4);
    for i in 0..3 {
        let mut e = vec![0u8; 3];
        e[i] = 4;
        form.add_term(&e, field.one()).expect("term");
    }
    PlaneQuartic::new(form).expect("nonzero")
}

/// Klein quartic x^3 y + y^3 z + z^3 x.
pub fn klein_quartic<F: Field>(field: F) -> PlaneQuartic<F> {
    let mut form = HomogeneousForm::zero(field.clone(), 3, 4);
    form.add_term(&[3, 1, 0], field.one()).expect("term");
    form.add_term(&[0, 3, 1], field.one()).expect("term");
    form.add_term(&[1, 0, 3], field.one()).expect("term");
    PlaneQuartic::new(form).expect("nonzero")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::field::{rat_i64, Rationals};

    #[test]
    fn fermat_line_section_is_squarefree() {
        // z = 0 meets x^4 + y^4 + z^4 in s^4 + t^4: four distinct points
        let x = fermat_quartic(Rationals);
        let l = LinearSubspace::from_spanning_rows(
            Rationals,
            3,
            vec![
                vec![rat_i64(1), rat_i64(0), rat_i64(0)],
                vec![rat_i64(0), rat_i64(1), rat_i64(0)],
            ],
        )
        .unwrap();
        let pat = line_section_pattern(&x, &l).unwrap();
        assert!(pat.is(&[1, 1, 1, 1]));
        let info = is_bitangent(&x, &l).unwrap();
        assert!(!info.is_bitangent);
    }

    #[test]
    fn pattern_totals_are_4() {
        let fq = Fq::new(13, 1).unwrap();
        let x = fermat_quartic(fq.clone());
        for l in all_plane_lines(&fq).into_iter().take(40) {
            match line_section_pattern(&x, &l) {
                Ok(p) => assert_eq!(p.total(), 4),
                Err(Error::Degenerate(_)) => {}
                Err(e) => panic!("{e}"),
            }
        }
    }

    #[test]
    fn bitangent_found_over_f17() {
        let f17 = Fq::new(17, 1).unwrap();
        // x^4 + y^4 - z^4
        let mut form = HomogeneousForm::zero(f17.clone(), 3, 4);
        form.add_term(&[4, 0, 0], 1).unwrap();
        form.add_term(&[0, 4, 0], 1).unwrap();
        form.add_term(&[0, 0, 4], f17.neg(&1)).unwrap();
        let x = PlaneQuartic::new(form).unwrap();
        let found = all_plane_lines(&f17).into_iter().any(|l| {
            line_section_pattern(&x, &l)
                .map(|p| p.is(&[2, 2]))
                .unwrap_or(false)
        });
        assert!(found);
    }

    #[test]
    fn bitangent_count_is_at_most_28() {
        let x = fermat_quartic(Fq::new(17, 1).unwrap());
        let c1 = count_bitangents(&x, 1).unwrap();
        assert!(c1.smooth_over_field);
        assert!(c1.count <= 28);
        let c2 = count_bitangents(&x, 2).unwrap();
        assert!(c2.count <= 28);
        assert!(c1.count <= c2.count);
    }

    #[test]
    fn residual_pair_of_four_rational_collinear_points() {
        // quartic (x - z)(x - 2z)(x - 3z)(x - 4z) + y * g: the line y = 0
        // meets it in the four rational points (k, 0, 1)
        let f = Rationals;
        let mut lin = |a: i64| {
            let mut l = HomogeneousForm::zero(f, 3, 1);
            l.add_term(&[1, 0, 0], rat_i64(1)).unwrap();
            l.add_term(&[0, 0, 1], rat_i64(-a)).unwrap();
            l
        };
        let prod = lin(1)
            .mul(&lin(2))
            .unwrap()
            .mul(&lin(3))
            .unwrap()
            .mul(&lin(4))
            .unwrap();
        let mut ycubic = HomogeneousForm::zero(f, 3, 3);
        ycubic.add_term(&[0, 3, 0], rat_i64(1)).unwrap();
        ycubic.add_term(&[2, 1, 0], rat_i64(1)).unwrap();
        let mut y = HomogeneousForm::zero(f, 3, 1);
        y.add_term(&[0, 1, 0], rat_i64(1)).unwrap();
        let x = PlaneQuartic::new(prod.add(&ycubic.mul(&y).unwrap()).unwrap()).unwrap();

        let p = vec![rat_i64(1), rat_i64(0), rat_i64(1)];
        let q = vec![rat_i64(2), rat_i64(0), rat_i64(1)];
        let r = residual_pair(&x, &p, &q).unwrap();
        let (a, b) = r.points.expect("rational residual points");
        let normalize = |v: &Vec<num_rational::BigRational>| {
            let inv = Rationals.inv(&v[2]).unwrap();
            vec![&v[0] * &inv, &v[1] * &inv, &v[2] * &inv]
        };
        let mut got = [normalize(&a), normalize(&b)];
        got.sort_by_key(|v| v[0].clone());
        assert_eq!(got[0], vec![rat_i64(3), rat_i64(0), rat_i64(1)]);
        assert_eq!(got[1], vec![rat_i64(4), rat_i64(0), rat_i64(1)]);

        // involution consistency: the residual of the residual pair lies
        // on the same line and recovers p + q
        let r2 = residual_pair(&x, &got[0], &got[1]).unwrap();
        let (c, d) = r2.points.expect("rational again");
        let mut back = [normalize(&c), normalize(&d)];
        back.sort_by_key(|v| v[0].clone());
        assert_eq!(back[0], vec![rat_i64(1), rat_i64(0), rat_i64(1)]);
        assert_eq!(back[1], vec![rat_i64(2), rat_i64(0), rat_i64(1)]);
    }

    #[test]
    fn residual_pair_tangent_case() {
        // tangent line at a smooth point: residual divisor is the
        // remaining multiplicity-2 root structure of the section
        let fq = Fq::new(17, 1).unwrap();
        let x = fermat_quartic(fq.clone());
        // find a curve point with nondegenerate tangent
        let mut witness = None;
        'outer: for b in fq.all_elems() {
            for c in fq.all_elems() {
                let p = vec![1u32, b, c];
                if x.contains_point(&p).unwrap()
                    && !x.gradient(&p).unwrap().iter().all(|g| *g == 0)
                {
                    witness = Some(p);
                    break 'outer;
                }
            }
        }
        let p = witness.expect("curve has rational points over F_17");
        let r = residual_pair(&x, &p, &p).unwrap();
        assert_eq!(r.quadratic.degree(), 2);
        assert!(!r.quadratic.is_zero());
    }

    #[test]
    fn genus3_fiber_count_q7() {
        let fq = Fq::new(7, 1).unwrap();
        // all eight points of the conic are parametrized by P^1(F_7);
        // choose six of them
        let marked = [(1, 0), (0, 1), (1, 1), (1, 2), (1, 3), (1, 4)];
        let m = MarkedConic::new(&fq, marked).unwrap();
        let fc = genus3_fiber_counts(&m).unwrap();
        assert_eq!(fc.formula, 22); // C(2,2) + (49-7)/2 = 1 + 21
        assert_eq!(fc.direct, 22);
        assert!(fc.matches);
    }

    #[test]
    fn marked_conic_rejects_duplicates() {
        let fq = Fq::new(11, 1).unwrap();
        let marked = [(1, 0), (1, 0), (1, 1), (1, 2), (1, 3), (1, 4)];
        assert!(MarkedConic::new(&fq, marked).is_err());
    }
}
