//! Exact coefficient fields: arbitrary-precision rationals and small
//! finite fields F_{p^k}.
//!
//! Every geometric primitive in this crate is generic over [`Field`].
//! A field value acts as a context object (the extension fields carry
//! their defining polynomial and multiplication tables); elements are
//! plain data. This mirrors the usual ring/element split and keeps
//! elements `Copy`-cheap for the enumeration-heavy paths.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Context trait for an exact field (or, for [`Jet`], a local ring in
/// which only units invert).
pub trait Field: Clone + fmt::Debug + PartialEq + Send + Sync {
    type Elem: Clone + PartialEq + Eq + std::hash::Hash + fmt::Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// None when `a` is not invertible.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn from_i64(&self, n: i64) -> Self::Elem;
    /// Image of a rational number, when the denominator is invertible.
    fn from_rational(&self, r: &BigRational) -> Option<Self::Elem>;
    /// 0 for the rationals, p for F_{p^k}.
    fn characteristic(&self) -> u64;
    /// A square root when one exists.
    fn sqrt(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn fmt_elem(&self, a: &Self::Elem) -> String;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }
    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }
    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }
    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }
}

/// The field of arbitrary-precision rationals.
///
/// `BigRational` keeps values in lowest terms with positive denominator,
/// which is exactly the canonical form the reports use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
    fn from_i64(&self, n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }
    fn from_rational(&self, r: &BigRational) -> Option<BigRational> {
        Some(r.clone())
    }
    fn characteristic(&self) -> u64 {
        0
    }
    fn sqrt(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_negative() {
            return None;
        }
        let sn = a.numer().sqrt();
        let sd = a.denom().sqrt();
        if &(&sn * &sn) == a.numer() && &(&sd * &sd) == a.denom() {
            Some(BigRational::new(sn, sd))
        } else {
            None
        }
    }
    fn fmt_elem(&self, a: &BigRational) -> String {
        format_rational(a)
    }
}

/// Canonical text form of a rational: `num/den` in lowest terms,
/// denominator omitted when it is 1.
pub fn format_rational(a: &BigRational) -> String {
    if a.denom().is_one() {
        a.numer().to_string()
    } else {
        format!("{}/{}", a.numer(), a.denom())
    }
}

pub fn rat_i64(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// 2^e as an exact rational, negative exponents allowed.
pub fn rat_pow2(e: i64) -> BigRational {
    let two = BigInt::from(2);
    if e >= 0 {
        BigRational::from_integer(two.pow(e as u32))
    } else {
        BigRational::new(BigInt::one(), two.pow((-e) as u32))
    }
}

const MAX_TABLE_FIELD: u64 = 1 << 21;

/// Shared lookup tables of one F_{p^k}.
#[derive(Debug)]
struct FqTables {
    /// exp[i] = g^i in packed form, for i in 0..q-1 (index q-1 unused).
    exp: Vec<u32>,
    /// log[packed] = discrete log base g; log[0] is a sentinel.
    log: Vec<u32>,
}

/// A finite field F_{p^k}, p >= 5, with q = p^k small enough for full
/// exp/log tables.
///
/// Elements are packed base-p digit strings: the element
/// c_0 + c_1 t + ... + c_{k-1} t^{k-1} (t the class of x modulo the
/// defining polynomial) is stored as the integer c_0 + c_1 p + ... .
/// The defining polynomial is the lexicographically first monic
/// irreducible of degree k, ordered by the packed value of its
/// non-leading coefficient vector, so all runs agree on the model.
#[derive(Clone, Debug)]
pub struct Fq {
    p: u64,
    k: u32,
    q: u64,
    /// Non-leading coefficients of the monic defining polynomial, packed.
    modulus: u32,
    tables: Arc<FqTables>,
}

impl PartialEq for Fq {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.k == other.k && self.modulus == other.modulus
    }
}

impl Fq {
    pub fn new(p: u64, k: u32) -> Result<Fq> {
        if p < 5 || !is_prime(p) {
            return Err(Error::UnsupportedField(format!(
                "characteristic must be a prime >= 5, got {p}"
            )));
        }
        if k == 0 {
            return Err(Error::UnsupportedField("extension degree must be >= 1".into()));
        }
        let q = p
            .checked_pow(k)
            .filter(|&q| q <= MAX_TABLE_FIELD)
            .ok_or_else(|| {
                Error::UnsupportedField(format!(
                    "field size p^k = {p}^{k} exceeds the table bound {MAX_TABLE_FIELD}"
                ))
            })?;
        let modulus = first_irreducible(p, k);
        let raw = RawFq {
            p,
            k,
            q,
            modulus: unpack(modulus, p, k as usize + 1),
        };
        let tables = build_tables(&raw)?;
        Ok(Fq {
            p,
            k,
            q,
            modulus: modulus as u32,
            tables: Arc::new(tables),
        })
    }

    pub fn prime(&self) -> u64 {
        self.p
    }
    pub fn ext_degree(&self) -> u32 {
        self.k
    }
    pub fn order(&self) -> u64 {
        self.q
    }

    /// Element from its packed representation (must be < q).
    pub fn elem(&self, packed: u64) -> u32 {
        assert!(packed < self.q, "packed value out of range");
        packed as u32
    }

    /// All field elements, in packed order. Zero first.
    pub fn all_elems(&self) -> impl Iterator<Item = u32> + '_ {
        0..self.q as u32
    }

    fn log_of(&self, a: u32) -> u32 {
        self.tables.log[a as usize]
    }

    pub fn is_square(&self, a: u32) -> bool {
        if a == 0 {
            return true;
        }
        if self.q % 2 == 0 {
            return true;
        }
        self.log_of(a) % 2 == 0
    }

    /// A square root when one exists.
    pub fn sqrt(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return Some(0);
        }
        let l = self.log_of(a) as u64;
        if l % 2 != 0 {
            return None;
        }
        Some(self.tables.exp[(l / 2) as usize])
    }
}

impl Field for Fq {
    type Elem = u32;

    fn zero(&self) -> u32 {
        0
    }
    fn one(&self) -> u32 {
        1
    }
    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }
    fn add(&self, a: &u32, b: &u32) -> u32 {
        if self.k == 1 {
            let s = (*a as u64) + (*b as u64);
            return if s >= self.p { (s - self.p) as u32 } else { s as u32 };
        }
        let p = self.p as u32;
        let (mut a, mut b) = (*a, *b);
        let mut out = 0u32;
        let mut place = 1u32;
        while a != 0 || b != 0 {
            let s = a % p + b % p;
            out += (if s >= p { s - p } else { s }) * place;
            place *= p;
            a /= p;
            b /= p;
        }
        out
    }
    fn neg(&self, a: &u32) -> u32 {
        if self.k == 1 {
            return if *a == 0 { 0 } else { self.p as u32 - *a };
        }
        let p = self.p as u32;
        let mut a = *a;
        let mut out = 0u32;
        let mut place = 1u32;
        while a != 0 {
            let d = a % p;
            if d != 0 {
                out += (p - d) * place;
            }
            place *= p;
            a /= p;
        }
        out
    }
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        if *a == 0 || *b == 0 {
            return 0;
        }
        let n = self.q - 1;
        let l = self.log_of(*a) as u64 + self.log_of(*b) as u64;
        let l = if l >= n { l - n } else { l };
        self.tables.exp[l as usize]
    }
    fn inv(&self, a: &u32) -> Option<u32> {
        if *a == 0 {
            return None;
        }
        let n = self.q - 1;
        let l = self.log_of(*a) as u64;
        let l = if l == 0 { 0 } else { n - l };
        Some(self.tables.exp[l as usize])
    }
    fn from_i64(&self, n: i64) -> u32 {
        let p = self.p as i64;
        let r = n.rem_euclid(p);
        r as u32
    }
    fn from_rational(&self, r: &BigRational) -> Option<u32> {
        let p = BigInt::from(self.p);
        let num = r.numer().mod_floor(&p).to_u64()?;
        let den = r.denom().mod_floor(&p).to_u64()?;
        if den == 0 {
            return None;
        }
        let num = self.elem(num);
        let den = self.elem(den);
        Some(self.mul(&num, &self.inv(&den)?))
    }
    fn characteristic(&self) -> u64 {
        self.p
    }
    fn sqrt(&self, a: &u32) -> Option<u32> {
        Fq::sqrt(self, *a)
    }
    fn fmt_elem(&self, a: &u32) -> String {
        a.to_string()
    }
}

trait ModFloor {
    fn mod_floor(&self, m: &BigInt) -> BigInt;
}
impl ModFloor for BigInt {
    fn mod_floor(&self, m: &BigInt) -> BigInt {
        let r = self % m;
        if r.is_negative() {
            r + m
        } else {
            r
        }
    }
}

/// Plain coefficient-vector arithmetic used only while bootstrapping the
/// tables of an extension field.
struct RawFq {
    p: u64,
    k: u32,
    q: u64,
    /// Monic defining polynomial, k+1 coefficients, low degree first.
    modulus: Vec<u64>,
}

impl RawFq {
    fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let k = self.k as usize;
        let mut prod = vec![0u64; 2 * k - 1];
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + ai * bj) % self.p;
            }
        }
        // reduce modulo the monic defining polynomial
        for d in (k..prod.len()).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            prod[d] = 0;
            for (j, &mj) in self.modulus.iter().take(k).enumerate() {
                let idx = d - k + j;
                prod[idx] = (prod[idx] + c * (self.p - mj) % self.p) % self.p;
            }
        }
        prod.truncate(k);
        prod
    }

    fn pow(&self, a: &[u64], mut e: u64) -> Vec<u64> {
        let k = self.k as usize;
        let mut base = a.to_vec();
        base.resize(k, 0);
        let mut acc = vec![0u64; k];
        acc[0] = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }
}

fn pack(digits: &[u64], p: u64) -> u64 {
    let mut out = 0u64;
    for &d in digits.iter().rev() {
        out = out * p + d;
    }
    out
}

fn unpack(mut v: u64, p: u64, len: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push(v % p);
        v /= p;
    }
    out
}

fn build_tables(raw: &RawFq) -> Result<FqTables> {
    let q = raw.q;
    let n = q - 1;
    let factors = prime_factors(n);
    // find a generator of the multiplicative group, smallest packed value first
    let mut gen_digits = None;
    for cand in 2..q {
        let digits = unpack(cand, raw.p, raw.k as usize);
        let ok = factors.iter().all(|&f| {
            let e = raw.pow(&digits, n / f);
            pack(&e, raw.p) != 1
        });
        if ok {
            gen_digits = Some(digits);
            break;
        }
    }
    let g = gen_digits
        .ok_or_else(|| Error::UnsupportedField("no multiplicative generator found".into()))?;
    let mut exp = vec![0u32; n as usize];
    let mut log = vec![u32::MAX; q as usize];
    let mut cur = vec![0u64; raw.k as usize];
    cur[0] = 1;
    for i in 0..n {
        let packed = pack(&cur, raw.p) as u32;
        exp[i as usize] = packed;
        log[packed as usize] = i as u32;
        cur = raw.mul(&cur, &g);
    }
    debug_assert_eq!(pack(&cur, raw.p), 1, "generator order mismatch");
    Ok(FqTables { exp, log })
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Packed non-leading coefficient vector of the lexicographically first
/// monic irreducible of degree k over F_p.
fn first_irreducible(p: u64, k: u32) -> u64 {
    if k == 1 {
        // x itself; the modulus is never used for prime fields
        return 0;
    }
    let bound = p.pow(k);
    for m in 0..bound {
        if is_irreducible(p, k, m) {
            return m;
        }
    }
    unreachable!("irreducible polynomials of every degree exist")
}

/// Irreducibility of the monic polynomial x^k + (packed m) over F_p,
/// via x^{p^k} = x (mod f) and gcd(x^{p^{k/l}} - x, f) = 1 for prime l | k.
fn is_irreducible(p: u64, k: u32, m: u64) -> bool {
    let mut modulus = unpack(m, p, k as usize);
    modulus.push(1);
    let raw = RawFq {
        p,
        k,
        q: p.pow(k),
        modulus,
    };
    let x = {
        let mut v = vec![0u64; k as usize];
        if k > 1 {
            v[1] = 1;
        }
        v
    };
    // x^{p^k} must equal x
    let mut fr = x.clone();
    for _ in 0..k {
        fr = raw.pow(&fr, p);
    }
    if fr != x {
        return false;
    }
    for l in prime_factors(k as u64) {
        let d = k as u64 / l;
        let mut fr = x.clone();
        for _ in 0..d {
            fr = raw.pow(&fr, p);
        }
        // gcd(x^{p^d} - x, f) must be 1: equivalently x^{p^d} - x is a unit
        // or at least has no common factor with f. f is monic degree k;
        // compute gcd of f with the difference polynomial.
        let mut diff = fr;
        // subtract x
        if k > 1 {
            diff[1] = (diff[1] + p - 1) % p;
        }
        if poly_gcd_deg(p, &raw.modulus, &diff) != 0 {
            return false;
        }
    }
    true
}

/// Degree of gcd(a, b) over F_p (coefficient vectors, low degree first).
fn poly_gcd_deg(p: u64, a: &[u64], b: &[u64]) -> usize {
    fn deg(v: &[u64]) -> Option<usize> {
        v.iter().rposition(|&c| c != 0)
    }
    fn rem(p: u64, a: &mut Vec<u64>, b: &[u64]) {
        let db = deg(b).unwrap();
        let lead_inv = mod_inv(b[db], p);
        while let Some(da) = deg(a) {
            if da < db {
                break;
            }
            let c = a[da] * lead_inv % p;
            for j in 0..=db {
                let idx = da - db + j;
                a[idx] = (a[idx] + c * (p - b[j]) % p) % p;
            }
        }
    }
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    loop {
        match deg(&b) {
            None => return deg(&a).unwrap_or(0),
            Some(_) => {
                rem(p, &mut a, &b);
                std::mem::swap(&mut a, &mut b);
            }
        }
    }
}

fn mod_inv(a: u64, p: u64) -> u64 {
    // Fermat
    let mut e = p - 2;
    let mut base = a % p;
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

/// First-order jets a + b*eps with eps^2 = 0 over a base field.
///
/// Not a field: only elements with invertible constant part invert.
/// Used to push exact first-order deformations through the line and
/// plane constructions without symbolic differentiation.
#[derive(Clone, Debug, PartialEq)]
pub struct Jet<F: Field> {
    pub base: F,
}

impl<F: Field> Jet<F> {
    pub fn new(base: F) -> Self {
        Jet { base }
    }
    pub fn constant(&self, a: F::Elem) -> (F::Elem, F::Elem) {
        (a, self.base.zero())
    }
    pub fn eps_times(&self, b: F::Elem) -> (F::Elem, F::Elem) {
        (self.base.zero(), b)
    }
}

impl<F: Field> Field for Jet<F> {
    type Elem = (F::Elem, F::Elem);

    fn zero(&self) -> Self::Elem {
        (self.base.zero(), self.base.zero())
    }
    fn one(&self) -> Self::Elem {
        (self.base.one(), self.base.zero())
    }
    fn is_zero(&self, a: &Self::Elem) -> bool {
        self.base.is_zero(&a.0) && self.base.is_zero(&a.1)
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        (self.base.add(&a.0, &b.0), self.base.add(&a.1, &b.1))
    }
    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        (self.base.neg(&a.0), self.base.neg(&a.1))
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        (
            self.base.mul(&a.0, &b.0),
            self.base
                .add(&self.base.mul(&a.0, &b.1), &self.base.mul(&a.1, &b.0)),
        )
    }
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem> {
        let c = self.base.inv(&a.0)?;
        // (a0 + a1 e)^-1 = a0^-1 - a0^-2 a1 e
        let d = self.base.neg(&self.base.mul(&self.base.mul(&c, &c), &a.1));
        Some((c, d))
    }
    fn from_i64(&self, n: i64) -> Self::Elem {
        (self.base.from_i64(n), self.base.zero())
    }
    fn from_rational(&self, r: &BigRational) -> Option<Self::Elem> {
        Some((self.base.from_rational(r)?, self.base.zero()))
    }
    fn characteristic(&self) -> u64 {
        self.base.characteristic()
    }
    fn sqrt(&self, a: &Self::Elem) -> Option<Self::Elem> {
        // sqrt(a0 + a1 e) = s + a1/(2s) e when a0 = s^2 with s a unit
        let s = self.base.sqrt(&a.0)?;
        let two_s_inv = self.base.inv(&self.base.mul(&self.base.from_i64(2), &s))?;
        Some((s.clone(), self.base.mul(&a.1, &two_s_inv)))
    }
    fn fmt_elem(&self, a: &Self::Elem) -> String {
        format!("{} + {}*eps", self.base.fmt_elem(&a.0), self.base.fmt_elem(&a.1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_canonical_form() {
        let r = rat(4, -6);
        assert_eq!(format_rational(&r), "-2/3");
        assert_eq!(format_rational(&rat_i64(5)), "5");
    }

    #[test]
    fn fq_prime_field_arithmetic() {
        let f = Fq::new(7, 1).unwrap();
        let a = f.elem(3);
        let b = f.elem(5);
        assert_eq!(f.add(&a, &b), 1);
        assert_eq!(f.mul(&a, &b), 1);
        assert_eq!(f.inv(&a), Some(5));
        assert_eq!(f.neg(&b), 2);
        assert_eq!(f.from_i64(-1), 6);
    }

    #[test]
    fn fq_extension_field_laws() {
        let f = Fq::new(5, 2).unwrap();
        assert_eq!(f.order(), 25);
        // spot-check field axioms over all pairs
        for a in f.all_elems() {
            assert_eq!(f.add(&a, &f.neg(&a)), 0);
            if a != 0 {
                let ai = f.inv(&a).unwrap();
                assert_eq!(f.mul(&a, &ai), 1);
            }
            for b in f.all_elems() {
                assert_eq!(f.add(&a, &b), f.add(&b, &a));
                assert_eq!(f.mul(&a, &b), f.mul(&b, &a));
            }
        }
        // distributivity on a sample
        let (a, b, c) = (f.elem(7), f.elem(13), f.elem(21));
        assert_eq!(
            f.mul(&a, &f.add(&b, &c)),
            f.add(&f.mul(&a, &b), &f.mul(&a, &c))
        );
    }

    #[test]
    fn fq_requires_p_at_least_5() {
        assert!(Fq::new(2, 1).is_err());
        assert!(Fq::new(3, 2).is_err());
        assert!(Fq::new(4, 1).is_err());
        assert!(Fq::new(5, 1).is_ok());
    }

    #[test]
    fn fq_deterministic_modulus() {
        let a = Fq::new(5, 3).unwrap();
        let b = Fq::new(5, 3).unwrap();
        assert_eq!(a.modulus, b.modulus);
        assert_eq!(a, b);
    }

    #[test]
    fn fq_from_rational_matches_mod_p() {
        let f = Fq::new(11, 1).unwrap();
        let r = rat(7, 3); // 7 * 3^-1 = 7 * 4 = 28 = 6 mod 11
        assert_eq!(f.from_rational(&r), Some(6));
        let bad = rat(1, 11);
        assert_eq!(f.from_rational(&bad), None);
    }

    #[test]
    fn fq_square_detection() {
        let f = Fq::new(13, 1).unwrap();
        let squares: Vec<u32> = f.all_elems().filter(|a| f.is_square(*a)).collect();
        // 0 plus (q-1)/2 nonzero squares
        assert_eq!(squares.len(), 7);
        for a in squares {
            let s = f.sqrt(a).unwrap();
            assert_eq!(f.mul(&s, &s), a);
        }
    }

    #[test]
    fn jet_first_order_rules() {
        let j = Jet::new(Rationals);
        let x = (rat_i64(3), rat_i64(1)); // 3 + eps
        let y = (rat_i64(2), rat_i64(5)); // 2 + 5 eps
        assert_eq!(j.mul(&x, &y), (rat_i64(6), rat_i64(17)));
        let xi = j.inv(&x).unwrap();
        assert_eq!(j.mul(&x, &xi), j.one());
        assert!(j.inv(&(rat_i64(0), rat_i64(1))).is_none());
    }
}
