//! Brute-force arithmetic in finite abelian p-groups `⊕ ℤ/p^{e_i}`, used as
//! an independent oracle: subgroup enumeration, types and cotypes by
//! counting, and exhaustive complement search.
//!
//! Nothing here touches the Smith or Hermite machinery.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::valuation::Partition;

/// `ℤ/p^{e_1} ⊕ ⋯ ⊕ ℤ/p^{e_N}` with elements encoded in mixed radix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PGroup {
    p: u64,
    exps: Vec<u32>,
    moduli: Vec<u64>,
    order: usize,
}

/// A subset of a [`PGroup`], as a membership table.
pub type ElementSet = Vec<bool>;

/// Largest group the oracle agrees to enumerate.
pub const MAX_ORDER: usize = 1 << 16;

impl PGroup {
    pub fn new(p: u64, exps: &[u32]) -> Result<Self> {
        if p < 2 {
            return Err(Error::InvalidAtom(alloc::format!("{p} is not a prime")));
        }
        let moduli: Vec<u64> = exps.iter().map(|&e| p.pow(e)).collect();
        let order = moduli.iter().try_fold(1usize, |acc, &m| acc.checked_mul(m as usize).filter(|&o| o <= MAX_ORDER));
        let order = order.ok_or_else(|| Error::OutOfRange("group too large for enumeration".into()))?;
        Ok(Self { p, exps: exps.to_vec(), moduli, order })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn rank(&self) -> usize {
        self.exps.len()
    }

    pub fn encode(&self, v: &[u64]) -> usize {
        let mut idx = 0usize;
        for (x, m) in v.iter().zip(&self.moduli).rev() {
            idx = idx * (*m as usize) + (*x % m) as usize;
        }
        idx
    }

    pub fn decode(&self, mut idx: usize) -> Vec<u64> {
        self.moduli
            .iter()
            .map(|&m| {
                let x = (idx % m as usize) as u64;
                idx /= m as usize;
                x
            })
            .collect()
    }

    fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).zip(&self.moduli).map(|((x, y), m)| (x + y) % m).collect()
    }

    fn scale(&self, k: u64, a: &[u64]) -> Vec<u64> {
        a.iter().zip(&self.moduli).map(|(x, m)| ((k % m) * x) % m).collect()
    }

    /// The subgroup generated by `gens`, by closure.
    pub fn span(&self, gens: &[Vec<u64>]) -> ElementSet {
        let mut set = vec![false; self.order];
        let mut members = vec![vec![0u64; self.rank()]];
        set[0] = true;
        for g in gens {
            let g = self.scale(1, g);
            if set[self.encode(&g)] {
                continue;
            }
            // new members: h + k g for all current h and multiples k g
            let mut multiples = Vec::new();
            let mut kg = g.clone();
            while !set[self.encode(&kg)] {
                multiples.push(kg.clone());
                kg = self.add(&kg, &g);
            }
            let base = members.clone();
            for mg in &multiples {
                for h in &base {
                    let x = self.add(h, mg);
                    let i = self.encode(&x);
                    if !set[i] {
                        set[i] = true;
                        members.push(x);
                    }
                }
            }
        }
        set
    }

    pub fn size(set: &ElementSet) -> usize {
        set.iter().filter(|&&b| b).count()
    }

    fn log_p(&self, mut n: usize) -> u32 {
        let mut e = 0;
        while n > 1 {
            n /= self.p as usize;
            e += 1;
        }
        e
    }

    fn multiply_set(&self, k: u64, set: &ElementSet) -> ElementSet {
        let mut out = vec![false; self.order];
        for (i, &b) in set.iter().enumerate() {
            if b {
                out[self.encode(&self.scale(k, &self.decode(i)))] = true;
            }
        }
        out
    }

    /// Partition from the sizes `|p^k H|`, `k = 0, 1, …`: the conjugate
    /// partition has parts `log_p(|p^k H| / |p^{k+1} H|)`.
    fn partition_from_sizes(&self, sizes: &[usize]) -> Partition {
        let conj: Vec<u32> = sizes.windows(2).map(|w| self.log_p(w[0] / w[1])).filter(|&c| c > 0).collect();
        Partition::from_unsorted(conj).conjugate()
    }

    fn top(&self) -> u32 {
        self.exps.iter().copied().max().unwrap_or(0)
    }

    /// Type of the subgroup `H`, from the orders of `p^k H`.
    pub fn type_of(&self, h: &ElementSet) -> Partition {
        let sizes: Vec<usize> = (0..=self.top() + 1)
            .map(|k| Self::size(&self.multiply_set(self.p.pow(k), h)))
            .collect();
        self.partition_from_sizes(&sizes)
    }

    /// Type of `M/H`, from `|p^k M + H| / |H|`.
    pub fn cotype_of(&self, h: &ElementSet) -> Partition {
        let hs = Self::size(h);
        let sizes: Vec<usize> = (0..=self.top() + 1)
            .map(|k| {
                let pk = self.p.pow(k);
                let gens: Vec<Vec<u64>> = (0..self.rank())
                    .map(|i| {
                        let mut e = vec![0u64; self.rank()];
                        e[i] = pk % self.moduli[i];
                        e
                    })
                    .chain(set_elements(h).into_iter().map(|i| self.decode(i)))
                    .collect();
                Self::size(&self.span(&gens)) / hs
            })
            .collect();
        self.partition_from_sizes(&sizes)
    }

    /// Every subgroup exactly once, as a generating list.
    ///
    /// Subgroups correspond to lattices between `diag(p^{e_i}) ℤ^N` and `ℤ^N`;
    /// each has a unique lower-triangular column basis with diagonal entries
    /// `d_j | p^{e_j}` and entries of row `i` left of the diagonal in
    /// `[0, d_i)`. Candidates are enumerated and kept when they contain the
    /// relation lattice.
    pub fn subgroups(&self) -> Vec<Vec<Vec<u64>>> {
        let n = self.rank();
        let mut out = Vec::new();
        let mut diag = vec![0u64; n];
        self.choose_diag(0, &mut diag, &mut out);
        out
    }

    fn choose_diag(&self, j: usize, diag: &mut Vec<u64>, out: &mut Vec<Vec<Vec<u64>>>) {
        let n = self.rank();
        if j == n {
            let mut h = vec![vec![0u64; n]; n];
            for (t, &d) in diag.iter().enumerate() {
                h[t][t] = d;
            }
            self.choose_below(1, 0, diag, &mut h, out);
            return;
        }
        for a in 0..=self.exps[j] {
            diag[j] = self.p.pow(a);
            self.choose_diag(j + 1, diag, out);
        }
    }

    /// Fills entry `(row, col)` (`col < row`), row by row.
    fn choose_below(&self, row: usize, col: usize, diag: &[u64], h: &mut Vec<Vec<u64>>, out: &mut Vec<Vec<Vec<u64>>>) {
        let n = self.rank();
        if row >= n {
            if self.contains_relations(h) {
                // generators: the columns, reduced
                let gens = (0..n).map(|c| (0..n).map(|r| h[r][c] % self.moduli[r]).collect()).collect();
                out.push(gens);
            }
            return;
        }
        if col == row {
            self.choose_below(row + 1, 0, diag, h, out);
            return;
        }
        for v in 0..diag[row] {
            h[row][col] = v;
            self.choose_below(row, col + 1, diag, h, out);
        }
        h[row][col] = 0;
    }

    /// Whether `p^{e_i} e_i` lies in the column lattice of `h` for every `i`.
    fn contains_relations(&self, h: &[Vec<u64>]) -> bool {
        let n = self.rank();
        (0..n).all(|i| {
            let mut b: Vec<i128> = vec![0; n];
            b[i] = self.moduli[i] as i128;
            let mut x: Vec<i128> = vec![0; n];
            for r in 0..n {
                let mut acc = b[r];
                for (c, xc) in x.iter().enumerate().take(r) {
                    acc -= h[r][c] as i128 * xc;
                }
                let d = h[r][r] as i128;
                if acc % d != 0 {
                    return false;
                }
                x[r] = acc / d;
            }
            true
        })
    }

    /// A complement of `h` found by trying every subgroup.
    pub fn exhaustive_complement(&self, h: &ElementSet) -> Option<ElementSet> {
        let hs = Self::size(h);
        for gens in self.subgroups() {
            let c = self.span(&gens);
            if hs * Self::size(&c) != self.order {
                continue;
            }
            if h.iter().zip(&c).enumerate().all(|(i, (&a, &b))| i == 0 || !(a && b)) {
                return Some(c);
            }
        }
        None
    }
}

/// Indices of the members of a set.
pub fn set_elements(set: &ElementSet) -> Vec<usize> {
    set.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::collections::BTreeSet;

    fn p(v: &[u32]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn cyclic_groups() {
        for a in 0..5 {
            let g = PGroup::new(2, &[a]).unwrap();
            assert_eq!(g.subgroups().len(), a as usize + 1);
        }
    }

    #[test]
    fn subgroup_counts() {
        // (Z/2)^2: 5 subgroups; (Z/2)^3: 16; Z/4 ⊕ Z/2: 8; (Z/3)^2: 6
        assert_eq!(PGroup::new(2, &[1, 1]).unwrap().subgroups().len(), 5);
        assert_eq!(PGroup::new(2, &[1, 1, 1]).unwrap().subgroups().len(), 16);
        assert_eq!(PGroup::new(2, &[2, 1]).unwrap().subgroups().len(), 8);
        assert_eq!(PGroup::new(3, &[1, 1]).unwrap().subgroups().len(), 6);
    }

    #[test]
    fn enumeration_matches_closure_search() {
        let g = PGroup::new(2, &[2, 1, 1]).unwrap();
        let subs: Vec<ElementSet> = g.subgroups().iter().map(|s| g.span(s)).collect();
        let listed: BTreeSet<ElementSet> = subs.iter().cloned().collect();
        assert_eq!(listed.len(), subs.len());
        // every subgroup is reached from 0 by adjoining one element at a time
        let mut found: BTreeSet<ElementSet> = BTreeSet::new();
        let mut frontier = vec![g.span(&[])];
        while let Some(h) = frontier.pop() {
            if !found.insert(h.clone()) {
                continue;
            }
            for i in 0..g.order() {
                let mut gens: Vec<Vec<u64>> = set_elements(&h).into_iter().map(|x| g.decode(x)).collect();
                gens.push(g.decode(i));
                frontier.push(g.span(&gens));
            }
        }
        assert_eq!(found, listed);
    }

    #[test]
    fn types_and_cotypes() {
        let g = PGroup::new(2, &[2, 1]).unwrap();
        let h = g.span(&[vec![2, 0]]);
        assert_eq!(g.type_of(&h), p(&[1]));
        assert_eq!(g.cotype_of(&h), p(&[1, 1]));
        let h = g.span(&[vec![1, 1]]);
        assert_eq!(g.type_of(&h), p(&[2]));
        assert_eq!(g.cotype_of(&h), p(&[1]));
        let whole = g.span(&[vec![1, 0], vec![0, 1]]);
        assert_eq!(g.type_of(&whole), p(&[2, 1]));
        assert_eq!(g.cotype_of(&whole), p(&[]));
    }

    #[test]
    fn complements() {
        let g = PGroup::new(2, &[2]).unwrap();
        assert!(g.exhaustive_complement(&g.span(&[vec![2]])).is_none());
        let g = PGroup::new(2, &[2, 1]).unwrap();
        let c = g.exhaustive_complement(&g.span(&[vec![1, 0]])).unwrap();
        assert_eq!(g.type_of(&c), p(&[1]));
    }
}
