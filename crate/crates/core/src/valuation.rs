//! Divisibility up to units.
//!
//! An element of a PID, up to a unit factor, is determined by its exponent at
//! every prime. [`ExponentVector`] stores exactly that, over abstract [`Atom`]
//! labels; the [`crate::ring::Pid`] implementations map labels to primes.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// Canonical label of a prime of the active PID.
///
/// Over the integers the label is the prime itself. Over `F_p[x]` it is the
/// base-`p` number whose digits are the coefficients of the monic irreducible
/// polynomial, constant term first (so over `F_2`, `x` is 2 and `x+1` is 3).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom(pub u64);

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Finitely supported map from atoms to positive exponents. The empty vector
/// is the unit.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExponentVector {
    support: BTreeMap<Atom, u32>,
}

impl ExponentVector {
    pub fn unit() -> Self {
        Self::default()
    }

    /// `atom^exp`; the unit when `exp` is zero.
    pub fn prime_power(atom: Atom, exp: u32) -> Self {
        let mut v = Self::unit();
        v.set(atom, exp);
        v
    }

    pub fn from_pairs<I: IntoIterator<Item = (Atom, u32)>>(pairs: I) -> Self {
        let mut v = Self::unit();
        for (a, e) in pairs {
            let cur = v.exponent(a);
            v.set(a, cur + e);
        }
        v
    }

    pub fn is_unit(&self) -> bool {
        self.support.is_empty()
    }

    pub fn exponent(&self, atom: Atom) -> u32 {
        self.support.get(&atom).copied().unwrap_or(0)
    }

    pub fn set(&mut self, atom: Atom, exp: u32) {
        if exp == 0 {
            self.support.remove(&atom);
        } else {
            self.support.insert(atom, exp);
        }
    }

    pub fn atoms(&self) -> impl Iterator<Item = Atom> + '_ {
        self.support.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Atom, u32)> + '_ {
        self.support.iter().map(|(a, e)| (*a, *e))
    }

    /// Total number of prime factors counted with multiplicity.
    pub fn degree(&self) -> u32 {
        self.support.values().sum()
    }

    pub fn divides(&self, other: &Self) -> bool {
        self.support.iter().all(|(a, e)| other.exponent(*a) >= *e)
    }

    fn combine(&self, other: &Self, f: impl Fn(u32, u32) -> u32) -> Self {
        let mut out = Self::unit();
        for a in self.atoms().chain(other.atoms()) {
            out.set(a, f(self.exponent(a), other.exponent(a)));
        }
        out
    }

    pub fn gcd(&self, other: &Self) -> Self {
        self.combine(other, u32::min)
    }

    pub fn lcm(&self, other: &Self) -> Self {
        self.combine(other, u32::max)
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a + b)
    }

    /// Exact quotient `self / divisor`.
    pub fn quo(&self, divisor: &Self) -> Result<Self> {
        if !divisor.divides(self) {
            return Err(Error::Domain(format!("{divisor} does not divide {self}")));
        }
        Ok(self.combine(divisor, |a, b| a - b))
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::unit();
        for (a, e) in self.iter() {
            out.set(a, e * k);
        }
        out
    }
}

impl fmt::Display for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_unit() {
            return write!(f, "1");
        }
        let mut first = true;
        for (a, e) in self.iter() {
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "[{a}]")?;
            } else {
                write!(f, "[{a}]^{e}")?;
            }
        }
        Ok(())
    }
}

pub fn divides(a: &ExponentVector, b: &ExponentVector) -> bool {
    a.divides(b)
}

/// Per-atom exponent read-off of a family: for every atom in the union of the
/// supports, the exponents of each member in input order.
pub fn localize_family(family: &[ExponentVector]) -> BTreeMap<Atom, Vec<u32>> {
    let mut atoms: Vec<Atom> = family.iter().flat_map(|v| v.atoms()).collect();
    atoms.sort();
    atoms.dedup();
    atoms
        .into_iter()
        .map(|a| (a, family.iter().map(|v| v.exponent(a)).collect()))
        .collect()
}

/// Weakly decreasing sequence of nonnegative integers, stored without
/// trailing zeros.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn empty() -> Self {
        Self(Vec::new())
    }

    /// Validates that `parts` is weakly decreasing, then strips zeros.
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Domain(format!("parts {parts:?} are not weakly decreasing")));
        }
        Ok(Self::trimmed(parts))
    }

    /// Sorts arbitrary parts into a partition.
    pub fn from_unsorted(mut parts: Vec<u32>) -> Self {
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Self::trimmed(parts)
    }

    fn trimmed(mut parts: Vec<u32>) -> Self {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Self(parts)
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    /// Part `i` (0-based); zero past the end.
    pub fn get(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }

    /// Number of nonzero parts.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Young-diagram containment `other ⊆ self`.
    pub fn contains(&self, other: &Partition) -> bool {
        other.len() <= self.len() && other.0.iter().enumerate().all(|(i, &p)| p <= self.get(i))
    }

    pub fn conjugate(&self) -> Partition {
        let width = self.get(0) as usize;
        let parts = (0..width)
            .map(|c| self.0.iter().filter(|&&p| p as usize > c).count() as u32)
            .collect();
        Partition(parts)
    }

    /// Parts padded with zeros (or truncated) to length `n`.
    pub fn padded(&self, n: usize) -> Vec<u32> {
        (0..n).map(|i| self.get(i)).collect()
    }

    /// All partitions of `weight`, in reverse lexicographic order.
    pub fn all_of_weight(weight: u32) -> Vec<Partition> {
        fn rec(rest: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
            if rest == 0 {
                out.push(Partition(cur.clone()));
                return;
            }
            for p in (1..=rest.min(max)).rev() {
                cur.push(p);
                rec(rest - p, p, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(weight, weight, &mut Vec::new(), &mut out);
        out
    }

    /// Partitions contained in the `rows × cols` rectangle.
    pub fn in_box(rows: usize, cols: u32) -> Vec<Partition> {
        fn rec(rows: usize, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
            out.push(Partition::trimmed(cur.clone()));
            if cur.len() == rows {
                return;
            }
            for p in 1..=max {
                cur.push(p);
                rec(rows, p, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(rows, cols, &mut Vec::new(), &mut out);
        out
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// Multiset union of parts.
pub fn merge(a: &Partition, b: &Partition) -> Partition {
    let mut parts = a.0.clone();
    parts.extend_from_slice(&b.0);
    Partition::from_unsorted(parts)
}

/// One partition per atom; atoms with the empty partition may be omitted.
pub type PerAtom = BTreeMap<Atom, Partition>;

/// Per-atom partitions of a divisibility chain (or any family, sorted).
pub fn per_atom(family: &[ExponentVector]) -> PerAtom {
    localize_family(family)
        .into_iter()
        .map(|(a, exps)| (a, Partition::from_unsorted(exps)))
        .collect()
}

/// Looks up an atom, treating absence as the empty partition.
pub fn partition_at(p: &PerAtom, atom: Atom) -> Partition {
    p.get(&atom).cloned().unwrap_or_default()
}

/// Rebuilds a decreasing chain of `n` exponent vectors from per-atom
/// partitions.
pub fn chain_from_partitions(p: &PerAtom, n: usize) -> Result<Vec<ExponentVector>> {
    let mut out = alloc::vec![ExponentVector::unit(); n];
    for (atom, part) in p {
        if part.len() > n {
            return Err(Error::Dimension(format!(
                "partition {part} at atom {atom} has more than {n} parts"
            )));
        }
        for (i, &e) in part.parts().iter().enumerate() {
            out[i].set(*atom, e);
        }
    }
    Ok(out)
}

/// Union of the atoms of several per-atom families.
pub fn atoms_of(families: &[&PerAtom]) -> Vec<Atom> {
    let mut atoms: Vec<Atom> = families.iter().flat_map(|f| f.keys().copied()).collect();
    atoms.sort();
    atoms.dedup();
    atoms
}
