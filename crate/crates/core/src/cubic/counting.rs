//! Brute-force line counting over finite fields.
//!
//! Lines of P^(N-1) are enumerated through their canonical reduced
//! echelon representatives (a 2xN matrix, pivot columns c1 < c2). The
//! containment test for a cubic f factors through the binary-cubic
//! coefficients of f(s a + t b):
//!   f(a), grad f(a).b, grad f(b).a, f(b),
//! so candidates are pre-filtered by the point conditions f = 0 on each
//! row separately, which cuts the pair loop from q^4-ish to q^2-ish.
//! The enumeration stays exhaustive: every representative is visited.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact::field::Fq;
use crate::exact::{Field, HomogeneousForm};

/// Runs `body` inside a rayon pool sized by PRYM_VERIFY_THREADS when the
/// variable is set; otherwise uses the global pool.
pub fn with_thread_cap<T: Send>(body: impl FnOnce() -> T + Send) -> T {
    match std::env::var("PRYM_VERIFY_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
    {
        Some(n) if n > 0 => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .expect("thread pool")
            .install(body),
        _ => body(),
    }
}

struct Compiled<const N: usize> {
    terms: Vec<(u32, [u8; N])>,
    partials: Vec<Vec<(u32, [u8; N])>>,
}

fn compile<const N: usize>(f: &HomogeneousForm<Fq>) -> Result<Compiled<N>> {
    if f.num_vars() != N {
        return Err(Error::Shape(format!("expected {} variables", N)));
    }
    let collect = |g: &HomogeneousForm<Fq>| -> Vec<(u32, [u8; N])> {
        g.terms()
            .map(|(e, c)| {
                let mut a = [0u8; N];
                a.copy_from_slice(e);
                (*c, a)
            })
            .collect()
    };
    let terms = collect(f);
    let partials = (0..N).map(|i| collect(&f.partial(i))).collect();
    Ok(Compiled { terms, partials })
}

#[inline]
fn eval_terms<const N: usize>(fq: &Fq, terms: &[(u32, [u8; N])], p: &[u32; N]) -> u32 {
    let mut acc = 0u32;
    for (c, exps) in terms {
        let mut m = *c;
        for (i, &e) in exps.iter().enumerate() {
            for _ in 0..e {
                if m == 0 {
                    break;
                }
                m = fq.mul(&m, &p[i]);
            }
        }
        acc = fq.add(&acc, &m);
    }
    acc
}

#[inline]
fn grad<const N: usize>(fq: &Fq, c: &Compiled<N>, p: &[u32; N]) -> [u32; N] {
    let mut g = [0u32; N];
    for i in 0..N {
        g[i] = eval_terms(fq, &c.partials[i], p);
    }
    g
}

#[inline]
fn dot<const N: usize>(fq: &Fq, a: &[u32; N], b: &[u32; N]) -> u32 {
    let mut acc = 0u32;
    for i in 0..N {
        if a[i] != 0 && b[i] != 0 {
            acc = fq.add(&acc, &fq.mul(&a[i], &b[i]));
        }
    }
    acc
}

/// All vectors matching an echelon row pattern: `one_at` fixed to 1,
/// zeros elsewhere except the `free` columns, which range over the field.
fn pattern_rows<const N: usize>(fq: &Fq, one_at: usize, free: &[usize]) -> Vec<[u32; N]> {
    let q = fq.order() as usize;
    let total = q.pow(free.len() as u32);
    let mut out = Vec::with_capacity(total);
    let mut idx = vec![0u32; free.len()];
    loop {
        let mut row = [0u32; N];
        row[one_at] = 1;
        for (k, &col) in free.iter().enumerate() {
            row[col] = idx[k];
        }
        out.push(row);
        // odometer
        let mut k = 0;
        loop {
            if k == idx.len() {
                return out;
            }
            idx[k] += 1;
            if (idx[k] as u64) < fq.order() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

fn pivot_classes<const N: usize>() -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for c1 in 0..N {
        for c2 in (c1 + 1)..N {
            out.push((c1, c2));
        }
    }
    out
}

fn free_columns<const N: usize>(c1: usize, c2: usize) -> (Vec<usize>, Vec<usize>) {
    let free0: Vec<usize> = ((c1 + 1)..N).filter(|&j| j != c2).collect();
    let free1: Vec<usize> = ((c2 + 1)..N).collect();
    (free0, free1)
}

/// Visits every line of P^(N-1)(F_q) contained in the cubic {f = 0}.
/// The visitor receives the canonical echelon rows.
fn scan_lines<const N: usize>(
    f: &HomogeneousForm<Fq>,
    mut on_line: impl FnMut([[u32; N]; 2]),
) -> Result<u64> {
    let fq = f.field().clone();
    if f.degree() != 3 {
        return Err(Error::Shape("line scan expects a cubic form".into()));
    }
    let compiled = compile::<N>(f)?;
    let mut count = 0u64;
    for (c1, c2) in pivot_classes::<N>() {
        let (free0, free1) = free_columns::<N>(c1, c2);
        let s0: Vec<([u32; N], [u32; N])> = pattern_rows::<N>(&fq, c1, &free0)
            .into_iter()
            .filter(|r| eval_terms(&fq, &compiled.terms, r) == 0)
            .map(|r| (r, grad(&fq, &compiled, &r)))
            .collect();
        if s0.is_empty() {
            continue;
        }
        let s1: Vec<([u32; N], [u32; N])> = pattern_rows::<N>(&fq, c2, &free1)
            .into_iter()
            .filter(|r| eval_terms(&fq, &compiled.terms, r) == 0)
            .map(|r| (r, grad(&fq, &compiled, &r)))
            .collect();
        for (r0, g0) in &s0 {
            for (r1, g1) in &s1 {
                if dot(&fq, g0, r1) == 0 && dot(&fq, g1, r0) == 0 {
                    count += 1;
                    on_line([*r0, *r1]);
                }
            }
        }
    }
    Ok(count)
}

/// Parallel count of the lines of P^(N-1)(F_q) on the cubic {f = 0}.
pub fn count_lines<const N: usize>(f: &HomogeneousForm<Fq>) -> Result<u64> {
    let fq = f.field().clone();
    if f.degree() != 3 {
        return Err(Error::Shape("line count expects a cubic form".into()));
    }
    let compiled = compile::<N>(f)?;
    let mut total = 0u64;
    for (c1, c2) in pivot_classes::<N>() {
        let (free0, free1) = free_columns::<N>(c1, c2);
        let s0: Vec<([u32; N], [u32; N])> = pattern_rows::<N>(&fq, c1, &free0)
            .into_iter()
            .filter(|r| eval_terms(&fq, &compiled.terms, r) == 0)
            .map(|r| (r, grad(&fq, &compiled, &r)))
            .collect();
        if s0.is_empty() {
            continue;
        }
        let s1: Vec<([u32; N], [u32; N])> = pattern_rows::<N>(&fq, c2, &free1)
            .into_iter()
            .filter(|r| eval_terms(&fq, &compiled.terms, r) == 0)
            .map(|r| (r, grad(&fq, &compiled, &r)))
            .collect();
        total += with_thread_cap(|| {
            s0.par_iter()
                .map(|(r0, g0)| {
                    s1.iter()
                        .filter(|(r1, g1)| {
                            dot(&fq, g0, r1) == 0 && dot(&fq, g1, r0) == 0
                        })
                        .count() as u64
                })
                .sum::<u64>()
        });
    }
    Ok(total)
}

/// The lines themselves (canonical echelon bases), up to `cap`.
pub fn lines_contained<const N: usize>(
    f: &HomogeneousForm<Fq>,
    cap: usize,
) -> Result<Vec<[[u32; N]; 2]>> {
    let mut lines = Vec::new();
    scan_lines::<N>(f, |l| {
        if lines.len() < cap {
            lines.push(l);
        }
    })?;
    Ok(lines)
}

/// Count of F_q-lines on a cubic surface in P^3.
pub fn count_lines_brute(f: &HomogeneousForm<Fq>) -> Result<u64> {
    if f.num_vars() != 4 {
        return Err(Error::Shape(
            "surface line count expects a form in 4 variables".into(),
        ));
    }
    count_lines::<4>(f)
}

/// Whether two lines (given by spanning rows) meet in projective space:
/// the stacked 4-row matrix drops rank.
pub fn lines_meet<const N: usize>(fq: &Fq, a: &[[u32; N]; 2], b: &[[u32; N]; 2]) -> bool {
    let rows: Vec<Vec<u32>> = [a[0], a[1], b[0], b[1]]
        .iter()
        .map(|r| r.to_vec())
        .collect();
    let m = crate::exact::Mat::from_rows(fq.clone(), rows).expect("uniform");
    m.rank() < 4
}

/// For each line, how many of the others meet it.
pub fn incidence_degrees<const N: usize>(fq: &Fq, lines: &[[[u32; N]; 2]]) -> Vec<usize> {
    (0..lines.len())
        .map(|i| {
            (0..lines.len())
                .filter(|&j| j != i && lines_meet(fq, &lines[i], &lines[j]))
                .count()
        })
        .collect()
}

/// Exhaustive search for a singular point of {f = 0} over the base
/// field: a projective point with f = 0 and vanishing gradient.
/// Diagnostic only; cost grows like q^(N-1).
pub fn singular_point_search<const N: usize>(
    f: &HomogeneousForm<Fq>,
) -> Result<Option<[u32; N]>> {
    let fq = f.field().clone();
    let compiled = compile::<N>(f)?;
    for lead in 0..N {
        let free: Vec<usize> = ((lead + 1)..N).collect();
        for p in pattern_rows::<N>(&fq, lead, &free) {
            if eval_terms(&fq, &compiled.terms, &p) == 0 {
                let g = grad(&fq, &compiled, &p);
                if g.iter().all(|&x| x == 0) {
                    return Ok(Some(p));
                }
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::field::Fq;
    use crate::exact::HomogeneousForm;

    fn fermat_surface(fq: &Fq) -> HomogeneousForm<Fq> {
        let mut f = HomogeneousForm::zero(fq.clone(), 4, 3);
        for i in 0..4 {
            let mut e = vec![0u8; 4];
            e[i] = 3;
            f.add_term(&e, 1).unwrap();
        }
        f
    }

    #[test]
    fn canonical_representatives_cover_all_lines() {
        // zero form: every line is "contained"; the total must equal
        // (q^2+1)(q^2+q+1)
        let fq = Fq::new(5, 1).unwrap();
        let zero = HomogeneousForm::zero(fq.clone(), 4, 3);
        let n = count_lines::<4>(&zero).unwrap();
        assert_eq!(n, (25 + 1) * (25 + 5 + 1));
    }

    #[test]
    fn fermat_over_f7_has_27_lines() {
        // 7 = 1 mod 3, so all 27 lines are rational already over F_7
        let fq = Fq::new(7, 1).unwrap();
        let f = fermat_surface(&fq);
        assert_eq!(count_lines_brute(&f).unwrap(), 27);
        assert!(singular_point_search::<4>(&f).unwrap().is_none());
        let lines = lines_contained::<4>(&f, 100).unwrap();
        assert_eq!(lines.len(), 27);
        let deg = incidence_degrees(&fq, &lines);
        assert!(deg.iter().all(|&d| d == 10));
    }

    #[test]
    fn fermat_over_f5_has_fewer_rational_lines() {
        // 5 = 2 mod 3: only one cube root of -1, so most lines are
        // conjugate; the count then jumps to 27 over F_25
        let f5 = Fq::new(5, 1).unwrap();
        let c5 = count_lines_brute(&fermat_surface(&f5)).unwrap();
        assert!(c5 < 27);
        let f25 = Fq::new(5, 2).unwrap();
        let c25 = count_lines_brute(&fermat_surface(&f25)).unwrap();
        assert_eq!(c25, 27);
        assert!(c5 <= c25);
    }

    #[test]
    fn reducible_surface_is_flagged_and_overcounts() {
        // (x + y) * (x^2 + yz + w^2): contains the plane x + y = 0
        let fq = Fq::new(7, 1).unwrap();
        let mut lin = HomogeneousForm::zero(fq.clone(), 4, 1);
        lin.add_term(&[1, 0, 0, 0], 1).unwrap();
        lin.add_term(&[0, 1, 0, 0], 1).unwrap();
        let mut quad = HomogeneousForm::zero(fq.clone(), 4, 2);
        quad.add_term(&[2, 0, 0, 0], 1).unwrap();
        quad.add_term(&[0, 1, 1, 0], 1).unwrap();
        quad.add_term(&[0, 0, 0, 2], 1).unwrap();
        let f = lin.mul(&quad).unwrap();
        assert!(count_lines_brute(&f).unwrap() > 27);
        assert!(singular_point_search::<4>(&f).unwrap().is_some());
    }
}
