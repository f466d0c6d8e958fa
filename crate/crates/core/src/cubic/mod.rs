//! Exact line geometry on cubic threefolds: containment, Fano-scheme
//! tangent spaces, first/second-type classification, the explicit
//! family witnessing nodes of the multiplicity-one curve, and
//! brute-force line counts over finite fields.

pub mod counting;
pub mod family;
pub mod node_check;
pub mod residual;

pub use counting::{count_lines_brute, incidence_degrees, lines_contained, singular_point_search};
pub use family::{
    build_family_cubic, family_dimension_counts, lambda_of, standard_configuration,
    FamilyConfiguration, FamilyDimensions,
};
pub use node_check::{gamma_node_check, NodeCheck};
pub use residual::{residual_configuration, ResidualConfig};

use crate::error::{Error, Result};
use crate::exact::{Field, HomogeneousForm, LinearSubspace, Mat};

/// A cubic threefold V in P^4: a nonzero degree-3 form in 5 variables.
#[derive(Clone, Debug, PartialEq)]
pub struct CubicThreefold<F: Field> {
    form: HomogeneousForm<F>,
}

impl<F: Field> CubicThreefold<F> {
    pub fn new(form: HomogeneousForm<F>) -> Result<Self> {
        if form.num_vars() != 5 || form.degree() != 3 {
            return Err(Error::Shape(
                "a cubic threefold is a degree-3 form in 5 variables".into(),
            ));
        }
        if form.is_zero() {
            return Err(Error::Degenerate("the zero form".into()));
        }
        Ok(CubicThreefold { form })
    }

    pub fn form(&self) -> &HomogeneousForm<F> {
        &self.form
    }

    pub fn field(&self) -> &F {
        self.form.field()
    }
}

/// Lines are rank-2 row spaces in the 5-dimensional coordinate space.
pub fn check_line<F: Field>(l: &LinearSubspace<F>) -> Result<()> {
    if l.ambient_dim() != 5 || l.dim() != 2 {
        return Err(Error::Shape(format!(
            "expected a line (rank-2 subspace of 5-space), got rank {} in dim {}",
            l.dim(),
            l.ambient_dim()
        )));
    }
    Ok(())
}

/// Restriction of the cubic to a line, as a binary cubic in the line's
/// parametrization.
pub fn restrict_to_line<F: Field>(
    v: &CubicThreefold<F>,
    l: &LinearSubspace<F>,
) -> Result<HomogeneousForm<F>> {
    check_line(l)?;
    v.form.substitute_linear(&l.parametrization())
}

/// Whether the line lies on the cubic.
pub fn contains_line<F: Field>(v: &CubicThreefold<F>, l: &LinearSubspace<F>) -> Result<bool> {
    Ok(restrict_to_line(v, l)?.is_zero())
}

/// Local chart on the space of lines near a base line spanned by two
/// coordinate axes. A nearby line meets {x_b = 0} in a point with
/// x_a = 1 and {x_a = 0} in a point with x_b = 1, where (a, b) are the
/// two line coordinates; the six chart coordinates are the transverse
/// components of those two points, interleaved (w', w'') per transverse
/// coordinate w.
#[derive(Clone, Debug)]
pub struct LineChart<F: Field> {
    base_line: LinearSubspace<F>,
    transverse: [usize; 3],
    line_coords: [usize; 2],
}

impl<F: Field> LineChart<F> {
    /// Chart at the span of the unit vectors at `line_coords`.
    pub fn standard(field: &F, line_coords: [usize; 2], transverse: [usize; 3]) -> Result<Self> {
        let mut all: Vec<usize> = transverse.iter().chain(line_coords.iter()).copied().collect();
        all.sort_unstable();
        if all != vec![0, 1, 2, 3, 4] {
            return Err(Error::Shape(
                "chart coordinates must partition {0,..,4}".into(),
            ));
        }
        if line_coords[0] >= line_coords[1] {
            return Err(Error::Shape(
                "line coordinates must be given in increasing order".into(),
            ));
        }
        let rows = line_coords
            .iter()
            .map(|&i| {
                let mut r = vec![field.zero(); 5];
                r[i] = field.one();
                r
            })
            .collect();
        let base_line = LinearSubspace::from_spanning_rows(field.clone(), 5, rows)?;
        Ok(LineChart {
            base_line,
            transverse,
            line_coords,
        })
    }

    pub fn base_line(&self) -> &LinearSubspace<F> {
        &self.base_line
    }
    pub fn transverse(&self) -> [usize; 3] {
        self.transverse
    }
    pub fn line_coords(&self) -> [usize; 2] {
        self.line_coords
    }
}

/// Restrictions to the base line of the partial derivatives along the
/// three transverse coordinates: three binary quadratics, returned as
/// their coefficient triples (u^2, uv, v^2).
fn transverse_partials_on_line<F: Field>(
    v: &CubicThreefold<F>,
    chart: &LineChart<F>,
) -> Result<[[F::Elem; 3]; 3]> {
    let param = chart.base_line.parametrization();
    let mut out: Vec<[F::Elem; 3]> = Vec::with_capacity(3);
    for &w in &chart.transverse {
        let partial = v.form.partial(w);
        let restricted = partial.substitute_linear(&param)?;
        out.push([
            restricted.coeff(&[2, 0]),
            restricted.coeff(&[1, 1]),
            restricted.coeff(&[0, 2]),
        ]);
    }
    Ok(out.try_into().expect("three transverse coordinates"))
}

/// The linear system cutting out the tangent space to the Fano scheme at
/// the chart's base line: four equations (the coefficients of u^3, u^2 v,
/// u v^2, v^3 of the first-order restriction) in the six chart
/// coordinates, ordered (w0', w0'', w1', w1'', w2', w2'').
pub fn fano_tangent_space<F: Field>(
    v: &CubicThreefold<F>,
    chart: &LineChart<F>,
) -> Result<(Mat<F>, LinearSubspace<F>)> {
    if !contains_line(v, &chart.base_line)? {
        return Err(Error::Domain(
            "chart base line does not lie on the cubic".into(),
        ));
    }
    let f = v.field().clone();
    let partials = transverse_partials_on_line(v, chart)?;
    let mut m = Mat::zero(f, 4, 6);
    for (j, quad) in partials.iter().enumerate() {
        let [q0, q1, q2] = quad.clone();
        let cp = 2 * j; // column of w'
        let cpp = 2 * j + 1; // column of w''
        // (w' u + w'' v) (q0 u^2 + q1 uv + q2 v^2), rows u^3, u^2 v, u v^2, v^3
        m.set(0, cp, q0.clone());
        m.set(1, cp, q1.clone());
        m.set(1, cpp, q0);
        m.set(2, cp, q2.clone());
        m.set(2, cpp, q1);
        m.set(3, cpp, q2);
    }
    let kernel = crate::exact::kernel_subspace(&m);
    Ok((m, kernel))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LineType {
    FirstType,
    SecondType,
}

/// Moves an arbitrary line on V into standard position: returns the
/// transformed cubic and a standard chart whose base line is the image.
/// The change of basis sends the unit vectors at the two chosen line
/// coordinates to the rows of the line's echelon basis.
pub fn standardize_line<F: Field>(
    v: &CubicThreefold<F>,
    l: &LinearSubspace<F>,
) -> Result<(CubicThreefold<F>, LineChart<F>)> {
    check_line(l)?;
    let f = v.field().clone();
    // pivot columns of the echelon basis
    let basis = l.basis();
    let pivot = |row: usize| (0..5).find(|&j| !f.is_zero(basis.get(row, j)));
    let p0 = pivot(0).ok_or_else(|| Error::Shape("zero basis row".into()))?;
    let p1 = pivot(1).ok_or_else(|| Error::Shape("zero basis row".into()))?;
    let others: Vec<usize> = (0..5).filter(|j| *j != p0 && *j != p1).collect();
    // columns of A: images of the new coordinates; new coords 3,4 map to
    // the line's basis vectors, new coords 0..2 to the complementary axes
    let mut a = Mat::zero(f.clone(), 5, 5);
    for (newc, &amb) in others.iter().enumerate() {
        a.set(amb, newc, f.one());
    }
    for (r, newc) in [(0usize, 3usize), (1, 4)] {
        for amb in 0..5 {
            a.set(amb, newc, basis.get(r, amb).clone());
        }
    }
    let moved = CubicThreefold::new(v.form.substitute_linear(&a)?)?;
    let chart = LineChart::standard(&f, [3, 4], [0, 1, 2])?;
    Ok((moved, chart))
}

/// First/second type classification: the line is of the second type
/// exactly when the three transverse partials restricted to the line are
/// linearly dependent binary quadratics (vanishing 3x3 determinant),
/// equivalently when some plane through the line meets V in a divisor
/// containing the line doubled.
pub fn line_type<F: Field>(v: &CubicThreefold<F>, l: &LinearSubspace<F>) -> Result<LineType> {
    if !contains_line(v, l)? {
        return Err(Error::Domain("line does not lie on the cubic".into()));
    }
    let (moved, chart) = standardize_line(v, l)?;
    let f = moved.field().clone();
    let partials = transverse_partials_on_line(&moved, &chart)?;
    let m = Mat::from_rows(
        f.clone(),
        partials.iter().map(|q| q.to_vec()).collect(),
    )?;
    let det = m.det()?;
    Ok(if f.is_zero(&det) {
        LineType::SecondType
    } else {
        LineType::FirstType
    })
}

/// Fermat cubic threefold x^3 + y^3 + z^3 + u^3 + v^3.
pub fn fermat_cubic_threefold<F: Field>(field: F) -> CubicThreefold<F> {
    let mut form = HomogeneousForm::zero(field.clone(), 5, 3);
    for i in 0..5 {
        let mut e = vec![0u8; 5];
        e[i] = 3;
        form.add_term(&e, field.one()).expect("valid term");
    }
    CubicThreefold::new(form).expect("nonzero")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::field::{rat_i64, Rationals};

    fn line_q(rows: Vec<Vec<i64>>) -> LinearSubspace<Rationals> {
        LinearSubspace::from_spanning_rows(
            Rationals,
            5,
            rows.into_iter()
                .map(|r| r.into_iter().map(rat_i64).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn fermat_contains_the_antidiagonal_line() {
        let v = fermat_cubic_threefold(Rationals);
        let l = line_q(vec![vec![1, -1, 0, 0, 0], vec![0, 0, 1, -1, 0]]);
        assert!(contains_line(&v, &l).unwrap());
        let not_l = line_q(vec![vec![1, 1, 0, 0, 0], vec![0, 0, 1, -1, 0]]);
        assert!(!contains_line(&v, &not_l).unwrap());
    }

    #[test]
    fn fermat_tangent_space_has_rank_4() {
        let v = fermat_cubic_threefold(Rationals);
        let l = line_q(vec![vec![1, -1, 0, 0, 0], vec![0, 0, 1, -1, 0]]);
        let (moved, chart) = standardize_line(&v, &l).unwrap();
        assert!(contains_line(&moved, chart.base_line()).unwrap());
        let (m, kernel) = fano_tangent_space(&moved, &chart).unwrap();
        assert_eq!(m.rank(), 4);
        assert_eq!(kernel.dim(), 2);
    }

    #[test]
    fn fermat_antidiagonal_line_is_second_type() {
        // the plane spanned by the line and e_v meets the Fermat cubic
        // in the line tripled, so this line is of the second type
        let v = fermat_cubic_threefold(Rationals);
        let l = line_q(vec![vec![1, -1, 0, 0, 0], vec![0, 0, 1, -1, 0]]);
        assert_eq!(line_type(&v, &l).unwrap(), LineType::SecondType);
    }

    #[test]
    fn family_line_types() {
        use super::family::{build_family_cubic, standard_configuration};
        let q: Vec<_> = [2i64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47]
            .into_iter()
            .map(rat_i64)
            .collect();
        let tail: Vec<_> = [53i64, 59, 61, 67, 71, 73].into_iter().map(rat_i64).collect();
        let v = build_family_cubic(&Rationals, &q, &tail).unwrap();
        let cfg = standard_configuration(&Rationals);
        assert_eq!(line_type(&v, &cfg.l).unwrap(), LineType::FirstType);
        assert_eq!(line_type(&v, &cfg.r1).unwrap(), LineType::SecondType);
        assert_eq!(line_type(&v, &cfg.r2).unwrap(), LineType::SecondType);
    }

    #[test]
    fn rejects_wrong_shapes() {
        let v = fermat_cubic_threefold(Rationals);
        let plane = LinearSubspace::from_spanning_rows(
            Rationals,
            5,
            vec![
                vec![rat_i64(1), rat_i64(0), rat_i64(0), rat_i64(0), rat_i64(0)],
                vec![rat_i64(0), rat_i64(1), rat_i64(0), rat_i64(0), rat_i64(0)],
                vec![rat_i64(0), rat_i64(0), rat_i64(1), rat_i64(0), rat_i64(0)],
            ],
        )
        .unwrap();
        assert!(contains_line(&v, &plane).is_err());
    }
}
