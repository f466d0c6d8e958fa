//! Symplectic F_2 machinery for 2-torsion of Jacobians: the Weil
//! pairing as the standard symplectic form, theta-characteristics as
//! quadratic forms with that polar form, parity as the Arf invariant,
//! isotropic subgroups, and the quotient construction modeling the
//! 2-torsion of a Prym variety.
//!
//! Vectors live in F_2^{2g}, packed into the low 2g bits of a u32, with
//! coordinates i and g+i paired: <u,v> = sum_i (u_i v_{g+i} + u_{g+i} v_i).

pub use crate::picard::Parity;
use crate::error::{Error, Result};

pub const MAX_GENUS: u32 = 15;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct TwoTorsionVector {
    pub bits: u32,
}

impl TwoTorsionVector {
    pub fn new(bits: u32) -> Self {
        TwoTorsionVector { bits }
    }
    pub fn zero() -> Self {
        TwoTorsionVector { bits: 0 }
    }
    pub fn is_zero(&self) -> bool {
        self.bits == 0
    }
}

impl std::ops::Add for TwoTorsionVector {
    type Output = TwoTorsionVector;
    fn add(self, rhs: TwoTorsionVector) -> TwoTorsionVector {
        TwoTorsionVector {
            bits: self.bits ^ rhs.bits,
        }
    }
}

/// F_2^{2g} with the standard symplectic pairing.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SymplecticSpaceF2 {
    genus: u32,
}

impl SymplecticSpaceF2 {
    pub fn new(genus: u32) -> Result<Self> {
        if genus == 0 || genus > MAX_GENUS {
            return Err(Error::Domain(format!(
                "genus must lie in 1..={MAX_GENUS}, got {genus}"
            )));
        }
        Ok(SymplecticSpaceF2 { genus })
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }
    pub fn dim(&self) -> u32 {
        2 * self.genus
    }
    fn mask(&self) -> u32 {
        (1u32 << self.genus) - 1
    }

    fn lo(&self, v: TwoTorsionVector) -> u32 {
        v.bits & self.mask()
    }
    fn hi(&self, v: TwoTorsionVector) -> u32 {
        (v.bits >> self.genus) & self.mask()
    }

    /// <u,v> = sum_i u_i v_{g+i} + u_{g+i} v_i over F_2.
    pub fn pairing(&self, u: TwoTorsionVector, v: TwoTorsionVector) -> bool {
        let a = self.lo(u) & self.hi(v);
        let b = self.hi(u) & self.lo(v);
        ((a.count_ones() + b.count_ones()) & 1) == 1
    }

    /// Base quadratic form q_0(x) = sum_i x_i x_{g+i}.
    pub fn q0(&self, x: TwoTorsionVector) -> bool {
        ((self.lo(x) & self.hi(x)).count_ones() & 1) == 1
    }

    pub fn vectors(&self) -> impl Iterator<Item = TwoTorsionVector> {
        (0..(1u64 << self.dim())).map(|b| TwoTorsionVector::new(b as u32))
    }

    /// The vector whose pairing functional equals x -> <x, v>, i.e. the
    /// halves of v swapped. <x,v> = popcount(x & swap(v)) mod 2.
    fn pairing_mask(&self, v: TwoTorsionVector) -> u32 {
        self.hi(v) | (self.lo(v) << self.genus)
    }
}

/// A theta-characteristic modeled as the quadratic form
/// q_t(x) = q_0(x) + <t, x>.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QuadraticFormF2 {
    pub translation: TwoTorsionVector,
}

impl QuadraticFormF2 {
    pub fn base() -> Self {
        QuadraticFormF2 {
            translation: TwoTorsionVector::zero(),
        }
    }
    pub fn new(t: TwoTorsionVector) -> Self {
        QuadraticFormF2 { translation: t }
    }
    pub fn eval(&self, s: &SymplecticSpaceF2, x: TwoTorsionVector) -> bool {
        s.q0(x) ^ s.pairing(self.translation, x)
    }
    /// The form translated by mu: q_{t + mu}.
    pub fn translate(&self, mu: TwoTorsionVector) -> Self {
        QuadraticFormF2 {
            translation: self.translation + mu,
        }
    }
}

/// Parity of a theta-characteristic: the Arf invariant of q_t, which in
/// these coordinates is q_0(t).
pub fn parity(s: &SymplecticSpaceF2, q: &QuadraticFormF2) -> Parity {
    if s.q0(q.translation) {
        Parity::Odd
    } else {
        Parity::Even
    }
}

fn parity_bit(s: &SymplecticSpaceF2, q: &QuadraticFormF2) -> bool {
    parity(s, q) == Parity::Odd
}

/// Exhaustive (even, odd) form counts for the space.
pub fn parity_counts(s: &SymplecticSpaceF2) -> (u64, u64) {
    let mut even = 0;
    let mut odd = 0;
    for t in s.vectors() {
        if s.q0(t) {
            odd += 1;
        } else {
            even += 1;
        }
    }
    (even, odd)
}

/// The Riemann-Mumford parity relation for a subgroup
/// W = {0, mu1, mu2, mu3 = mu1 + mu2}:
/// sum of the four translated parities is congruent to <mu1, mu2> mod 2.
/// Returns whether the identity holds for these inputs.
pub fn riemann_mumford_check(
    s: &SymplecticSpaceF2,
    q: &QuadraticFormF2,
    w: [TwoTorsionVector; 3],
) -> Result<bool> {
    let [m1, m2, m3] = w;
    if m3 != m1 + m2 {
        return Err(Error::Domain(
            "W is not closed under addition (mu3 != mu1 + mu2)".into(),
        ));
    }
    let sum = parity_bit(s, q)
        ^ parity_bit(s, &q.translate(m1))
        ^ parity_bit(s, &q.translate(m2))
        ^ parity_bit(s, &q.translate(m3));
    Ok(sum == s.pairing(m1, m2))
}

/// A subgroup of F_2^{2g}, canonicalized by F_2 row reduction of its
/// generator list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgroupF2 {
    dim_ambient: u32,
    basis: Vec<u32>,
}

impl SubgroupF2 {
    pub fn from_generators(s: &SymplecticSpaceF2, gens: &[TwoTorsionVector]) -> SubgroupF2 {
        let rows: Vec<u32> = gens.iter().map(|g| g.bits).collect();
        SubgroupF2 {
            dim_ambient: s.dim(),
            basis: f2_row_reduce(rows),
        }
    }

    pub fn rank(&self) -> u32 {
        self.basis.len() as u32
    }

    pub fn contains(&self, v: TwoTorsionVector) -> bool {
        let mut x = v.bits;
        for &b in &self.basis {
            let pivot = 31 - b.leading_zeros();
            if x >> pivot & 1 == 1 {
                x ^= b;
            }
        }
        x == 0
    }

    pub fn elements(&self) -> Vec<TwoTorsionVector> {
        let r = self.basis.len();
        (0..(1u64 << r))
            .map(|m| {
                let mut v = 0u32;
                for (i, &b) in self.basis.iter().enumerate() {
                    if m >> i & 1 == 1 {
                        v ^= b;
                    }
                }
                TwoTorsionVector::new(v)
            })
            .collect()
    }

    pub fn basis_vectors(&self) -> Vec<TwoTorsionVector> {
        self.basis.iter().map(|&b| TwoTorsionVector::new(b)).collect()
    }
}

/// Row reduction over F_2, highest bit as pivot; returns a canonical
/// reduced basis sorted by descending pivot.
fn f2_row_reduce(mut rows: Vec<u32>) -> Vec<u32> {
    let mut basis: Vec<u32> = Vec::new();
    for mut r in rows.drain(..) {
        for &b in &basis {
            let pivot = 31 - b.leading_zeros();
            if r >> pivot & 1 == 1 {
                r ^= b;
            }
        }
        if r != 0 {
            basis.push(r);
            basis.sort_unstable_by(|a, b| b.cmp(a));
            // re-reduce upward to keep the reduced form
            let snapshot = basis.clone();
            for (i, bi) in basis.iter_mut().enumerate() {
                for (j, &bj) in snapshot.iter().enumerate() {
                    if i != j {
                        let pivot = 31 - bj.leading_zeros();
                        if *bi >> pivot & 1 == 1 && *bi != bj {
                            *bi ^= bj;
                        }
                    }
                }
            }
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    basis
}

/// {x : <x,h> = 0 for all h in H}.
pub fn orthogonal_complement(s: &SymplecticSpaceF2, h: &SubgroupF2) -> SubgroupF2 {
    // kernel over F_2 of the matrix whose rows are the pairing masks
    let rows: Vec<u32> = h
        .basis
        .iter()
        .map(|&b| s.pairing_mask(TwoTorsionVector::new(b)))
        .collect();
    let reduced = f2_row_reduce(rows);
    let dim = s.dim();
    let mut pivots = Vec::new();
    for &r in &reduced {
        pivots.push(31 - r.leading_zeros());
    }
    let mut kern_basis = Vec::new();
    for col in 0..dim {
        if pivots.contains(&col) {
            continue;
        }
        // free column: back-substitute
        let mut v = 1u32 << col;
        for &r in &reduced {
            let pivot = 31 - r.leading_zeros();
            if (r >> col) & 1 == 1 && col != pivot {
                v |= 1 << pivot;
            }
        }
        kern_basis.push(v);
    }
    SubgroupF2 {
        dim_ambient: dim,
        basis: f2_row_reduce(kern_basis),
    }
}

/// The projection eta-perp -> eta-perp / <eta> realized in standard
/// symplectic coordinates of genus g - 1.
#[derive(Clone, Debug)]
pub struct QuotientMap {
    pub source: SymplecticSpaceF2,
    pub target: SymplecticSpaceF2,
    pub eta: TwoTorsionVector,
    /// Hyperbolic pairs (u_i, v_i) of a complement of <eta> in eta-perp.
    pairs: Vec<(TwoTorsionVector, TwoTorsionVector)>,
}

impl QuotientMap {
    /// Image of x (must lie in eta-perp). Coordinates: a_i = <x, v_i>,
    /// b_i = <x, u_i>; then x = sum a_i u_i + b_i v_i mod <eta>.
    pub fn project(&self, x: TwoTorsionVector) -> Result<TwoTorsionVector> {
        if self.source.pairing(self.eta, x) {
            return Err(Error::Domain(
                "vector is not orthogonal to eta; projection undefined".into(),
            ));
        }
        let gq = self.target.genus();
        let mut bits = 0u32;
        for (i, (u, v)) in self.pairs.iter().enumerate() {
            if self.source.pairing(x, *v) {
                bits |= 1 << i;
            }
            if self.source.pairing(x, *u) {
                bits |= 1 << (gq as usize + i);
            }
        }
        Ok(TwoTorsionVector::new(bits))
    }

    /// A lift of a quotient vector back into eta-perp.
    pub fn lift(&self, y: TwoTorsionVector) -> TwoTorsionVector {
        let gq = self.target.genus();
        let mut x = TwoTorsionVector::zero();
        for (i, (u, v)) in self.pairs.iter().enumerate() {
            if y.bits >> i & 1 == 1 {
                x = x + *u;
            }
            if y.bits >> (gq as usize + i) & 1 == 1 {
                x = x + *v;
            }
        }
        x
    }
}

/// The quotient eta-perp / <eta> with its induced symplectic structure:
/// a space of genus g - 1 together with the projection.
pub fn quotient_symplectic(
    s: &SymplecticSpaceF2,
    eta: TwoTorsionVector,
) -> Result<(SymplecticSpaceF2, QuotientMap)> {
    if eta.is_zero() {
        return Err(Error::Domain("quotient by the zero vector".into()));
    }
    if s.genus() < 2 {
        return Err(Error::Domain("quotient needs genus >= 2".into()));
    }
    let eta_group = SubgroupF2::from_generators(s, &[eta]);
    let perp = orthogonal_complement(s, &eta_group);
    debug_assert_eq!(perp.rank(), s.dim() - 1);
    // extract hyperbolic pairs from the complement of the radical <eta>
    let mut work: Vec<TwoTorsionVector> = perp.basis_vectors();
    let mut pairs = Vec::new();
    loop {
        let mut found = None;
        'outer: for i in 0..work.len() {
            for j in (i + 1)..work.len() {
                if s.pairing(work[i], work[j]) {
                    found = Some((i, j));
                    break 'outer;
                }
            }
        }
        let Some((i, j)) = found else { break };
        let u = work[i];
        let v = work[j];
        work.remove(j);
        work.remove(i);
        for w in work.iter_mut() {
            let mut nw = *w;
            if s.pairing(nw, v) {
                nw = nw + u;
            }
            if s.pairing(nw, u) {
                nw = nw + v;
            }
            *w = nw;
        }
        pairs.push((u, v));
    }
    // what remains spans the radical of eta-perp, which must be <eta>
    let radical = SubgroupF2::from_generators(s, &work);
    if !(radical.rank() <= 1 && radical.contains(eta) || radical.rank() == 0) {
        return Err(Error::Derivation(
            "radical of eta-perp is not generated by eta".into(),
        ));
    }
    let target = SymplecticSpaceF2::new(s.genus() - 1)?;
    debug_assert_eq!(pairs.len() as u32, target.genus());
    Ok((
        target,
        QuotientMap {
            source: *s,
            target,
            eta,
            pairs,
        },
    ))
}

/// Descends a quadratic form along the quotient by mu. Defined exactly
/// when q(mu) = 0; then the descended form satisfies
/// q_bar(project(x)) = q(x) for every x orthogonal to mu.
pub fn descend_form(
    s: &SymplecticSpaceF2,
    q: &QuadraticFormF2,
    mu: TwoTorsionVector,
) -> Result<(QuadraticFormF2, QuotientMap)> {
    if q.eval(s, mu) {
        return Err(Error::DescentObstruction);
    }
    let (target, map) = quotient_symplectic(s, mu)?;
    // the descended form is q0 + <t,.>; read t off the basis images
    let gq = target.genus();
    let mut t_bits = 0u32;
    for (i, (u, v)) in map.pairs.iter().enumerate() {
        if q.eval(s, *v) {
            t_bits |= 1 << i;
        }
        if q.eval(s, *u) {
            t_bits |= 1 << (gq as usize + i);
        }
    }
    Ok((QuadraticFormF2::new(TwoTorsionVector::new(t_bits)), map))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space(g: u32) -> SymplecticSpaceF2 {
        SymplecticSpaceF2::new(g).unwrap()
    }

    #[test]
    fn pairing_is_alternating_and_nondegenerate() {
        for g in 1..=3 {
            let s = space(g);
            for u in s.vectors() {
                assert!(!s.pairing(u, u));
                if !u.is_zero() {
                    assert!(s.vectors().any(|v| s.pairing(u, v)));
                }
            }
        }
    }

    #[test]
    fn polarization_identity() {
        let s = space(2);
        for t in s.vectors() {
            let q = QuadraticFormF2::new(t);
            for x in s.vectors() {
                for y in s.vectors() {
                    let lhs = q.eval(&s, x + y);
                    let rhs = q.eval(&s, x) ^ q.eval(&s, y) ^ s.pairing(x, y);
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn base_form_is_even() {
        let s = space(3);
        assert_eq!(parity(&s, &QuadraticFormF2::base()), Parity::Even);
    }

    #[test]
    fn parity_counts_match_closed_form() {
        for g in 1..=4u32 {
            let s = space(g);
            let (even, odd) = parity_counts(&s);
            let expect_even = (1u64 << (g - 1)) * ((1u64 << g) + 1);
            let expect_odd = (1u64 << (g - 1)) * ((1u64 << g) - 1);
            assert_eq!(even, expect_even);
            assert_eq!(odd, expect_odd);
        }
        // genus 3: 28 odd forms, matching the 28 bitangents of a quartic
        let (_, odd3) = parity_counts(&space(3));
        assert_eq!(odd3, 28);
        let (even2, odd2) = parity_counts(&space(2));
        assert_eq!((even2, odd2), (10, 6));
    }

    #[test]
    fn translation_shifts_parity_by_value() {
        for g in 1..=4u32 {
            let s = space(g);
            for t in s.vectors() {
                let q = QuadraticFormF2::new(t);
                for mu in s.vectors() {
                    let shifted = parity_bit(&s, &q.translate(mu));
                    assert_eq!(shifted, parity_bit(&s, &q) ^ q.eval(&s, mu));
                }
            }
        }
    }

    #[test]
    fn riemann_mumford_holds_exhaustively() {
        for g in 1..=3u32 {
            let s = space(g);
            for q in s.vectors().map(QuadraticFormF2::new) {
                for m1 in s.vectors() {
                    for m2 in s.vectors() {
                        let ok =
                            riemann_mumford_check(&s, &q, [m1, m2, m1 + m2]).unwrap();
                        assert!(ok);
                    }
                }
            }
        }
    }

    #[test]
    fn riemann_mumford_rejects_non_subgroup() {
        let s = space(2);
        let q = QuadraticFormF2::base();
        let e1 = TwoTorsionVector::new(1);
        let e2 = TwoTorsionVector::new(2);
        let bad = TwoTorsionVector::new(8);
        assert!(riemann_mumford_check(&s, &q, [e1, e2, bad]).is_err());
        // degenerate multiset {0,0,0,0} is a subgroup
        let z = TwoTorsionVector::zero();
        assert!(riemann_mumford_check(&s, &q, [z, z, z]).unwrap());
    }

    #[test]
    fn riemann_mumford_isotropic_genus7() {
        // the genus-7 configuration: W totally isotropic forces sum 0
        let s = space(7);
        let m1 = TwoTorsionVector::new(0b1); // e_1
        let m2 = TwoTorsionVector::new(0b10); // e_2
        assert!(!s.pairing(m1, m2));
        for t in [0u32, 1, 5, 77, 1 << 13, (1 << 14) - 1] {
            let q = QuadraticFormF2::new(TwoTorsionVector::new(t));
            let sum = parity_bit(&s, &q)
                ^ parity_bit(&s, &q.translate(m1))
                ^ parity_bit(&s, &q.translate(m2))
                ^ parity_bit(&s, &q.translate(m1 + m2));
            assert!(!sum);
            assert!(riemann_mumford_check(&s, &q, [m1, m2, m1 + m2]).unwrap());
        }
    }

    #[test]
    fn orthogonal_complement_dimensions() {
        let s = space(1);
        let h = SubgroupF2::from_generators(&s, &[TwoTorsionVector::new(0b01)]);
        let perp = orthogonal_complement(&s, &h);
        // isotropic line in dim 2 is its own complement
        assert_eq!(perp.rank(), 1);
        assert!(perp.contains(TwoTorsionVector::new(0b01)));

        let trivial = SubgroupF2::from_generators(&s, &[TwoTorsionVector::zero()]);
        assert_eq!(orthogonal_complement(&s, &trivial).rank(), 2);

        // rank(H) + dim(H-perp) = 2g on random-ish subgroups, g <= 4
        for g in 1..=4u32 {
            let s = space(g);
            let vs: Vec<TwoTorsionVector> = s.vectors().collect();
            for step in 1..7usize {
                let gens: Vec<TwoTorsionVector> =
                    vs.iter().step_by(step + 1).take(3).copied().collect();
                let h = SubgroupF2::from_generators(&s, &gens);
                let perp = orthogonal_complement(&s, &h);
                assert_eq!(h.rank() + perp.rank(), 2 * g);
            }
        }
    }

    #[test]
    fn quotient_structure_genus2() {
        let s = space(2);
        let eta = TwoTorsionVector::new(0b0001); // e_1
        let (t, map) = quotient_symplectic(&s, eta).unwrap();
        assert_eq!(t.genus(), 1);
        // kernel of the projection is exactly {0, eta}
        let perp = orthogonal_complement(&s, &SubgroupF2::from_generators(&s, &[eta]));
        let mut kernel = Vec::new();
        for x in perp.elements() {
            if map.project(x).unwrap().is_zero() {
                kernel.push(x);
            }
        }
        kernel.sort_by_key(|v| v.bits);
        assert_eq!(kernel, vec![TwoTorsionVector::zero(), eta]);
        // pairing of lifts equals pairing of images
        for x in perp.elements() {
            for y in perp.elements() {
                assert_eq!(
                    s.pairing(x, y),
                    t.pairing(map.project(x).unwrap(), map.project(y).unwrap())
                );
            }
        }
        // surjectivity
        let mut images: Vec<u32> = perp
            .elements()
            .iter()
            .map(|&x| map.project(x).unwrap().bits)
            .collect();
        images.sort_unstable();
        images.dedup();
        assert_eq!(images.len(), 4);
    }

    #[test]
    fn quotient_dimension_genus6() {
        let s = space(6);
        let eta = TwoTorsionVector::new(1);
        let (t, _) = quotient_symplectic(&s, eta).unwrap();
        assert_eq!(t.dim(), 10);
        assert!(quotient_symplectic(&s, TwoTorsionVector::zero()).is_err());
    }

    #[test]
    fn descend_form_well_defined_exhaustively() {
        for g in 2..=3u32 {
            let s = space(g);
            for t in s.vectors() {
                let q = QuadraticFormF2::new(t);
                for mu in s.vectors() {
                    if mu.is_zero() {
                        continue;
                    }
                    if q.eval(&s, mu) {
                        assert!(descend_form(&s, &q, mu).is_err());
                        continue;
                    }
                    let (qbar, map) = descend_form(&s, &q, mu).unwrap();
                    let perp =
                        orthogonal_complement(&s, &SubgroupF2::from_generators(&s, &[mu]));
                    for x in perp.elements() {
                        let image = map.project(x).unwrap();
                        assert_eq!(q.eval(&s, x), qbar.eval(&map.target, image));
                    }
                }
            }
        }
    }

    #[test]
    fn descended_parity_matches_direct_parity_of_descended_form() {
        // parity chain: descending q along mu and evaluating parities on
        // the quotient agrees with evaluating q upstairs on lifts
        let s = space(3);
        let q = QuadraticFormF2::base();
        let mu = TwoTorsionVector::new(0b000001);
        assert!(!q.eval(&s, mu));
        let (qbar, map) = descend_form(&s, &q, mu).unwrap();
        for y in map.target.vectors() {
            let x = map.lift(y);
            assert_eq!(qbar.eval(&map.target, y), q.eval(&s, x));
        }
    }
}
