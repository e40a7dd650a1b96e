//! Exact scalar rings.
//!
//! [`Integer`] and [`GfPoly`] are the two supported principal ideal domains;
//! [`Frac`] is the fraction field of either, used for linear algebra over
//! the quotient field.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt::{self, Debug, Display};
use core::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand_core::RngCore;

use crate::error::{Error, Result};
use crate::valuation::{Atom, ExponentVector};

/// Commutative ring with identity and exact arithmetic.
pub trait Ring: Clone + PartialEq + Eq + Hash + Debug + Display {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    fn pow(&self, mut k: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            k >>= 1;
        }
        acc
    }
}

pub trait Field: Ring {
    /// Multiplicative inverse. Panics on zero, which callers rule out.
    fn inv(&self) -> Self;

    fn div(&self, other: &Self) -> Self {
        self.mul(&other.inv())
    }
}

/// Euclidean domain with canonical associates and a prime registry.
pub trait Pid: Ring + Ord {
    /// Short tag used in file formats, e.g. `int` or `poly2`.
    fn tag() -> String;

    /// Euclidean division with canonical remainder. Panics on a zero divisor.
    fn div_rem(&self, d: &Self) -> (Self, Self);

    /// Compares Euclidean sizes (absolute value, or degree).
    fn euclid_cmp(&self, other: &Self) -> Ordering;

    fn is_unit(&self) -> bool;

    /// The unit `u` with `self = u * self.normalized()`; one for zero.
    fn unit_part(&self) -> Self;

    /// Inverse of a unit.
    fn unit_inv(&self) -> Self;

    fn normalized(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        self.mul(&self.unit_part().unit_inv())
    }

    /// The prime element carrying `atom`.
    fn atom_element(atom: Atom) -> Result<Self>;

    /// Label of a normalized prime element.
    fn atom_label(&self) -> Result<Atom>;

    /// Prime factorization of a nonzero element into normalized primes,
    /// sorted by atom label.
    fn factor(&self) -> Result<Vec<(Self, u32)>>;

    fn from_i64(v: i64) -> Self;

    /// A small random element, used for generic perturbations.
    fn random_small(rng: &mut dyn RngCore) -> Self;

    /// Canonical representatives of `R / (m)` when that set is small enough
    /// to enumerate.
    fn residues(m: &Self, limit: usize) -> Option<Vec<Self>>;

    fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.normalized()
    }

    /// `(g, s, t)` with `s*self + t*other = g = gcd(self, other)`.
    fn ext_gcd(&self, other: &Self) -> (Self, Self, Self) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Self::one(), Self::zero());
        let (mut t0, mut t1) = (Self::zero(), Self::one());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            r0 = core::mem::replace(&mut r1, r);
            let s = s0.sub(&q.mul(&s1));
            s0 = core::mem::replace(&mut s1, s);
            let t = t0.sub(&q.mul(&t1));
            t0 = core::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, Self::one(), Self::zero());
        }
        let u = r0.unit_part().unit_inv();
        (r0.mul(&u), s0.mul(&u), t0.mul(&u))
    }

    fn lcm(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        self.mul(other).div_exact(&self.gcd(other)).expect("gcd divides product").normalized()
    }

    /// `self / d` when the division is exact.
    fn div_exact(&self, d: &Self) -> Option<Self> {
        if d.is_zero() {
            return if self.is_zero() { Some(Self::zero()) } else { None };
        }
        let (q, r) = self.div_rem(d);
        r.is_zero().then_some(q)
    }

    /// `self | other`.
    fn divides(&self, other: &Self) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other.div_rem(self).1.is_zero()
    }

    /// Canonical remainder of `self` modulo `m`; `self` itself when `m` is zero.
    fn reduce(&self, m: &Self) -> Self {
        if m.is_zero() {
            self.clone()
        } else {
            self.div_rem(m).1
        }
    }

    fn is_associate(&self, other: &Self) -> bool {
        self.normalized() == other.normalized()
    }

    /// Exponent of the prime `p` in `self`. Zero has no finite valuation and
    /// is rejected.
    fn valuation(&self, p: &Self) -> Result<u32> {
        if self.is_zero() {
            return Err(Error::Domain("valuation of zero".into()));
        }
        let mut v = 0;
        let mut x = self.clone();
        while let Some(q) = x.div_exact(p) {
            x = q;
            v += 1;
        }
        Ok(v)
    }

    fn to_exponents(&self) -> Result<ExponentVector> {
        if self.is_zero() {
            return Err(Error::Domain("zero has no exponent vector".into()));
        }
        let mut out = ExponentVector::unit();
        for (p, e) in self.factor()? {
            out.set(p.atom_label()?, e);
        }
        Ok(out)
    }

    fn from_exponents(v: &ExponentVector) -> Result<Self> {
        let mut acc = Self::one();
        for (a, e) in v.iter() {
            acc = acc.mul(&Self::atom_element(a)?.pow(e));
        }
        Ok(acc)
    }
}

// ---------------------------------------------------------------------------
// Integers

/// Arbitrary-precision integer.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Integer(pub BigInt);

impl Integer {
    pub fn new(v: i64) -> Self {
        Self(BigInt::from(v))
    }

    pub fn to_i64(&self) -> Option<i64> {
        self.0.to_i64()
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.0.to_u64()
    }

    pub fn parse(s: &str) -> Result<Self> {
        s.trim()
            .parse::<BigInt>()
            .map(Self)
            .map_err(|_| Error::Domain(format!("not an integer: {s:?}")))
    }
}

impl From<i64> for Integer {
    fn from(v: i64) -> Self {
        Self::new(v)
    }
}

impl Debug for Integer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Display for Integer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Ring for Integer {
    fn zero() -> Self {
        Self(BigInt::zero())
    }
    fn one() -> Self {
        Self(BigInt::one())
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
    fn is_one(&self) -> bool {
        self.0.is_one()
    }
    fn add(&self, o: &Self) -> Self {
        Self(&self.0 + &o.0)
    }
    fn sub(&self, o: &Self) -> Self {
        Self(&self.0 - &o.0)
    }
    fn mul(&self, o: &Self) -> Self {
        Self(&self.0 * &o.0)
    }
    fn neg(&self) -> Self {
        Self(-&self.0)
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for p in SMALL {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in SMALL {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

const TRIAL_LIMIT: u64 = 1 << 20;

impl Pid for Integer {
    fn tag() -> String {
        "int".into()
    }

    fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by zero");
        let (q, r) = self.0.div_mod_floor(&d.0);
        if r.is_negative() {
            // floor division by a negative divisor leaves r in (d, 0]
            (Self(q + 1), Self(r - &d.0))
        } else {
            (Self(q), Self(r))
        }
    }

    fn euclid_cmp(&self, other: &Self) -> Ordering {
        self.0.magnitude().cmp(other.0.magnitude())
    }

    fn is_unit(&self) -> bool {
        self.0.magnitude().is_one()
    }

    fn unit_part(&self) -> Self {
        if self.0.is_negative() {
            Self::new(-1)
        } else {
            Self::one()
        }
    }

    fn unit_inv(&self) -> Self {
        debug_assert!(self.is_unit());
        self.clone()
    }

    fn normalized(&self) -> Self {
        Self(BigInt::from(self.0.magnitude().clone()))
    }

    fn gcd(&self, other: &Self) -> Self {
        Self(self.0.gcd(&other.0))
    }

    fn atom_element(atom: Atom) -> Result<Self> {
        if is_prime_u64(atom.0) {
            Ok(Self(BigInt::from(atom.0)))
        } else {
            Err(Error::InvalidAtom(format!("{} is not a prime integer", atom.0)))
        }
    }

    fn atom_label(&self) -> Result<Atom> {
        match self.to_u64() {
            Some(p) if is_prime_u64(p) => Ok(Atom(p)),
            _ => Err(Error::InvalidAtom(format!("{self} is not a normalized prime"))),
        }
    }

    fn factor(&self) -> Result<Vec<(Self, u32)>> {
        if self.is_zero() {
            return Err(Error::Factorization("cannot factor zero".into()));
        }
        let mut n = self
            .normalized()
            .to_u64()
            .ok_or_else(|| Error::Factorization(format!("{self} exceeds 64 bits")))?;
        let mut out = Vec::new();
        let mut p = 2u64;
        while p * p <= n && p < TRIAL_LIMIT {
            if n % p == 0 {
                let mut e = 0;
                while n % p == 0 {
                    n /= p;
                    e += 1;
                }
                out.push((Self(BigInt::from(p)), e));
            }
            p += if p == 2 { 1 } else { 2 };
        }
        if n > 1 {
            if !is_prime_u64(n) {
                return Err(Error::Factorization(format!("cofactor {n} has no small prime factor")));
            }
            out.push((Self(BigInt::from(n)), 1));
        }
        Ok(out)
    }

    fn from_i64(v: i64) -> Self {
        Self::new(v)
    }

    fn random_small(rng: &mut dyn RngCore) -> Self {
        Self::new((rng.next_u64() % 19) as i64 - 9)
    }

    fn residues(m: &Self, limit: usize) -> Option<Vec<Self>> {
        let n = m.normalized().to_u64()?;
        if n == 0 || n as u128 > limit as u128 {
            return None;
        }
        Some((0..n as i64).map(Self::new).collect())
    }
}

// ---------------------------------------------------------------------------
// Polynomials over a prime field

/// Polynomial over `F_P`, coefficients in ascending degree, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GfPoly<const P: u64> {
    coeffs: Vec<u64>,
}

impl<const P: u64> GfPoly<P> {
    /// Builds from ascending coefficients, reduced mod `P`.
    pub fn from_coeffs(cs: &[i64]) -> Self {
        let p = P as i64;
        Self::trim(cs.iter().map(|c| c.rem_euclid(p) as u64).collect())
    }

    fn trim(mut coeffs: Vec<u64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn x() -> Self {
        Self { coeffs: vec![0, 1] }
    }

    pub fn constant(c: u64) -> Self {
        Self::trim(vec![c % P])
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    /// Degree; `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    fn inv_mod(c: u64) -> u64 {
        debug_assert!(!c.is_multiple_of(P));
        pow_mod(c, P - 2, P)
    }

    fn scale(&self, c: u64) -> Self {
        Self::trim(self.coeffs.iter().map(|a| a * c % P).collect())
    }

    /// All monic polynomials of the given degree.
    fn monics(deg: usize) -> impl Iterator<Item = Self> {
        let count = P.pow(deg as u32);
        (0..count).map(move |mut k| {
            let mut cs = Vec::with_capacity(deg + 1);
            for _ in 0..deg {
                cs.push(k % P);
                k /= P;
            }
            cs.push(1);
            Self { coeffs: cs }
        })
    }

    fn is_irreducible(&self) -> bool {
        let Some(d) = self.degree() else { return false };
        if d == 0 {
            return false;
        }
        (1..=d / 2).all(|k| Self::monics(k).all(|q| !q.divides(self)))
    }
}

impl<const P: u64> PartialOrd for GfPoly<P> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<const P: u64> Ord for GfPoly<P> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

impl<const P: u64> Debug for GfPoly<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        Display::fmt(self, f)
    }
}

impl<const P: u64> Display for GfPoly<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, "+")?;
            }
            first = false;
            match (i, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => write!(f, "x")?,
                (1, c) => write!(f, "{c}x")?,
                (i, 1) => write!(f, "x^{i}")?,
                (i, c) => write!(f, "{c}x^{i}")?,
            }
        }
        Ok(())
    }
}

impl<const P: u64> Ring for GfPoly<P> {
    fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }
    fn one() -> Self {
        Self { coeffs: vec![1] }
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let get = |v: &[u64], i: usize| v.get(i).copied().unwrap_or(0);
        Self::trim((0..n).map(|i| (get(&self.coeffs, i) + get(&o.coeffs, i)) % P).collect())
    }
    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut out = vec![0u64; self.coeffs.len() + o.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.coeffs.iter().enumerate() {
                out[i + j] = (out[i + j] + a * b) % P;
            }
        }
        Self::trim(out)
    }
    fn neg(&self) -> Self {
        Self::trim(self.coeffs.iter().map(|&c| (P - c) % P).collect())
    }
}

impl<const P: u64> Pid for GfPoly<P> {
    fn tag() -> String {
        format!("poly{P}")
    }

    fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let dd = d.coeffs.len() - 1;
        let inv = Self::inv_mod(d.lead());
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut q = vec![0u64; r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = r[k + dd] * inv % P;
            q[k] = c;
            if c != 0 {
                for (i, &b) in d.coeffs.iter().enumerate() {
                    r[k + i] = (r[k + i] + (P - c) * b) % P;
                }
            }
        }
        r.truncate(dd);
        (Self::trim(q), Self::trim(r))
    }

    fn euclid_cmp(&self, other: &Self) -> Ordering {
        self.coeffs.len().cmp(&other.coeffs.len())
    }

    fn is_unit(&self) -> bool {
        self.coeffs.len() == 1
    }

    fn unit_part(&self) -> Self {
        if self.is_zero() {
            Self::one()
        } else {
            Self::constant(self.lead())
        }
    }

    fn unit_inv(&self) -> Self {
        Self::constant(Self::inv_mod(self.lead()))
    }

    fn normalized(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        self.scale(Self::inv_mod(self.lead()))
    }

    fn atom_element(atom: Atom) -> Result<Self> {
        let mut k = atom.0;
        let mut cs = Vec::new();
        while k > 0 {
            cs.push(k % P);
            k /= P;
        }
        let f = Self::trim(cs);
        if f.lead() != 1 {
            return Err(Error::InvalidAtom(format!("{} does not encode a monic polynomial over F_{P}", atom.0)));
        }
        if !f.is_irreducible() {
            return Err(Error::InvalidAtom(format!("{f} (label {}) is not irreducible over F_{P}", atom.0)));
        }
        Ok(f)
    }

    fn atom_label(&self) -> Result<Atom> {
        if self.lead() != 1 || !self.is_irreducible() {
            return Err(Error::InvalidAtom(format!("{self} is not a monic irreducible")));
        }
        let mut label: u64 = 0;
        for &c in self.coeffs.iter().rev() {
            label = label
                .checked_mul(P)
                .and_then(|l| l.checked_add(c))
                .ok_or_else(|| Error::InvalidAtom(format!("label of {self} overflows 64 bits")))?;
        }
        Ok(Atom(label))
    }

    fn factor(&self) -> Result<Vec<(Self, u32)>> {
        if self.is_zero() {
            return Err(Error::Factorization("cannot factor zero".into()));
        }
        let mut f = self.normalized();
        let mut out = Vec::new();
        let mut deg = 1;
        while f.degree().unwrap_or(0) >= 2 * deg {
            if P.checked_pow(deg as u32).is_none_or(|c| c > TRIAL_LIMIT) {
                return Err(Error::Factorization(format!("{self} is too large for trial division")));
            }
            for q in Self::monics(deg) {
                let mut e = 0;
                while let Some(next) = f.div_exact(&q) {
                    f = next;
                    e += 1;
                }
                if e > 0 {
                    out.push((q, e));
                }
            }
            deg += 1;
        }
        if f.degree().unwrap_or(0) > 0 {
            out.push((f, 1));
        }
        let mut labelled = Vec::with_capacity(out.len());
        for (q, e) in out {
            labelled.push((q.atom_label()?, q, e));
        }
        labelled.sort_by_key(|(a, _, _)| *a);
        Ok(labelled.into_iter().map(|(_, q, e)| (q, e)).collect())
    }

    fn from_i64(v: i64) -> Self {
        Self::from_coeffs(&[v])
    }

    fn random_small(rng: &mut dyn RngCore) -> Self {
        let deg = (rng.next_u64() % 3) as usize;
        Self::trim((0..=deg).map(|_| rng.next_u64() % P).collect())
    }

    fn residues(m: &Self, limit: usize) -> Option<Vec<Self>> {
        let d = m.degree()?;
        let count = P.checked_pow(d as u32)?;
        if count as u128 > limit as u128 {
            return None;
        }
        Some(
            (0..count)
                .map(|mut k| {
                    let mut cs = Vec::with_capacity(d);
                    for _ in 0..d {
                        cs.push(k % P);
                        k /= P;
                    }
                    Self::trim(cs)
                })
                .collect(),
        )
    }
}

// ---------------------------------------------------------------------------
// Fraction field

/// Reduced fraction `num / den` with a normalized nonzero denominator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Frac<R: Pid> {
    num: R,
    den: R,
}

impl<R: Pid> Frac<R> {
    pub fn new(num: R, den: R) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return Self { num, den: R::one() };
        }
        let g = num.gcd(&den);
        let (mut n, mut d) = (num.div_exact(&g).unwrap(), den.div_exact(&g).unwrap());
        let u = d.unit_part().unit_inv();
        n = n.mul(&u);
        d = d.mul(&u);
        Self { num: n, den: d }
    }

    pub fn from_ring(r: R) -> Self {
        Self { num: r, den: R::one() }
    }

    pub fn num(&self) -> &R {
        &self.num
    }

    pub fn den(&self) -> &R {
        &self.den
    }

    /// The underlying ring element when the denominator is one.
    pub fn to_ring(&self) -> Option<R> {
        self.den.is_one().then(|| self.num.clone())
    }
}

impl<R: Pid> Debug for Frac<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        Display::fmt(self, f)
    }
}

impl<R: Pid> Display for Frac<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl<R: Pid> Ring for Frac<R> {
    fn zero() -> Self {
        Self::from_ring(R::zero())
    }
    fn one() -> Self {
        Self::from_ring(R::one())
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn add(&self, o: &Self) -> Self {
        if self.den == o.den {
            return Self::new(self.num.add(&o.num), self.den.clone());
        }
        Self::new(self.num.mul(&o.den).add(&o.num.mul(&self.den)), self.den.mul(&o.den))
    }
    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        Self::new(self.num.mul(&o.num), self.den.mul(&o.den))
    }
    fn neg(&self) -> Self {
        Self { num: self.num.neg(), den: self.den.clone() }
    }
}

impl<R: Pid> Field for Frac<R> {
    fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero");
        Self::new(self.den.clone(), self.num.clone())
    }
}
