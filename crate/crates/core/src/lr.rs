//! Littlewood–Richardson coefficients, the set/partition dictionary and
//! Horn triples.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::matrix::subsets;
use crate::valuation::Partition;

/// Three `r`-subsets of `{1, …, N}`, each strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SetTriple {
    pub n: usize,
    pub r: usize,
    pub i: Vec<usize>,
    pub j: Vec<usize>,
    pub k: Vec<usize>,
}

fn check_set(name: &str, s: &[usize], n: usize, r: usize) -> Result<()> {
    if s.len() != r {
        return Err(Error::Dimension(format!("set {name} has {} elements, expected {r}", s.len())));
    }
    if s.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Domain(format!("set {name} = {s:?} is not strictly increasing")));
    }
    if s.iter().any(|&x| x == 0 || x > n) {
        return Err(Error::OutOfRange(format!("set {name} = {s:?} leaves 1..={n}")));
    }
    Ok(())
}

impl SetTriple {
    pub fn new(n: usize, i: Vec<usize>, j: Vec<usize>, k: Vec<usize>) -> Result<Self> {
        let r = i.len();
        if r == 0 || r > n {
            return Err(Error::OutOfRange(format!("need 1 <= r <= N, got r = {r}, N = {n}")));
        }
        check_set("I", &i, n, r)?;
        check_set("J", &j, n, r)?;
        check_set("K", &k, n, r)?;
        Ok(Self { n, r, i, j, k })
    }

    /// Parses `"1,2;1,3;2,3"`.
    pub fn parse(n: usize, s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(';').collect();
        if parts.len() != 3 {
            return Err(Error::Domain(format!("triple {s:?} needs three ';'-separated sets")));
        }
        let set = |p: &str| -> Result<Vec<usize>> {
            p.split(',')
                .filter(|x| !x.trim().is_empty())
                .map(|x| x.trim().parse::<usize>().map_err(|_| Error::Domain(format!("bad index {x:?}"))))
                .collect()
        };
        Self::new(n, set(parts[0])?, set(parts[1])?, set(parts[2])?)
    }

    /// `(I, J̃, K̃)`: the triple whose intersection number governs the
    /// inequality indexed by `self`.
    pub fn reflected(&self) -> SetTriple {
        SetTriple { n: self.n, r: self.r, i: self.i.clone(), j: tilde(&self.j, self.n), k: tilde(&self.k, self.n) }
    }

    /// The same sets read inside `{1, …, n2}` for `n2 >= N`.
    pub fn embed(&self, n2: usize) -> Result<SetTriple> {
        SetTriple::new(n2, self.i.clone(), self.j.clone(), self.k.clone())
    }
}

impl fmt::Display for SetTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |s: &[usize]| s.iter().map(|x| format!("{x}")).collect::<Vec<_>>().join(",");
        write!(f, "{};{};{}", join(&self.i), join(&self.j), join(&self.k))
    }
}

/// `λ_x = i_{r+1-x} - (r+1-x)`, a partition in the `r x (N-r)` box.
pub fn set_to_partition(i: &[usize], n: usize, r: usize) -> Result<Partition> {
    if r == 0 || r > n {
        return Err(Error::OutOfRange(format!("need 1 <= r <= N, got r = {r}, N = {n}")));
    }
    check_set("I", i, n, r)?;
    let parts = (1..=r).map(|x| (i[r - x] - (r + 1 - x)) as u32).collect();
    Partition::new(parts)
}

/// `{N+1-j : j ∈ J}`, increasing.
pub fn tilde(j: &[usize], n: usize) -> Vec<usize> {
    let mut out: Vec<usize> = j.iter().map(|&x| n + 1 - x).collect();
    out.sort_unstable();
    out
}

/// Complement of `λ` in the `rows x cols` box.
pub fn box_complement(l: &Partition, rows: usize, cols: u32) -> Partition {
    Partition::new((0..rows).map(|x| cols - l.get(rows - 1 - x)).collect()).expect("complement is a partition")
}

/// An LR tableau of shape `outer / inner` with the given content. Row `x`
/// holds the entries of cells `inner_x .. outer_x`, left to right, with
/// entries numbered from 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LrTableau {
    pub outer: Partition,
    pub inner: Partition,
    pub rows: Vec<Vec<u32>>,
}

impl LrTableau {
    /// Row-reading word: rows top to bottom, each right to left.
    pub fn reverse_reading_word(&self) -> Vec<u32> {
        self.rows.iter().flat_map(|r| r.iter().rev().copied()).collect()
    }
}

struct Enumerator<'a> {
    outer: &'a Partition,
    inner: &'a Partition,
    content: &'a Partition,
    rows: Vec<Vec<u32>>,
    counts: Vec<u32>,
}

impl Enumerator<'_> {
    fn entry_above(&self, row: usize, col: u32) -> Option<u32> {
        if row == 0 {
            return None;
        }
        let start = self.inner.get(row - 1);
        (col >= start && col < self.outer.get(row - 1)).then(|| self.rows[row - 1][(col - start) as usize])
    }

    /// Fills row `row`, cell `col` (moving right to left).
    fn fill(&mut self, row: usize, col: i64, visit: &mut dyn FnMut(&[Vec<u32>])) {
        let nrows = self.outer.len();
        if row == nrows {
            visit(&self.rows);
            return;
        }
        let start = self.inner.get(row) as i64;
        if col < start {
            let next_col = self.outer.get(row + 1) as i64 - 1;
            self.fill(row + 1, next_col, visit);
            return;
        }
        let c = col as u32;
        let idx = (c - self.inner.get(row)) as usize;
        // row weakly increasing: bounded by the cell to the right
        let right = self.rows[row].get(idx + 1).copied().unwrap_or(u32::MAX);
        let above = self.entry_above(row, c).unwrap_or(0);
        let max_val = (self.content.len() as u32).min(right).min(row as u32 + 1);
        for v in above + 1..=max_val {
            let vi = (v - 1) as usize;
            if self.counts[vi] >= self.content.get(vi) {
                continue;
            }
            if vi > 0 && self.counts[vi] + 1 > self.counts[vi - 1] {
                continue;
            }
            self.counts[vi] += 1;
            self.rows[row][idx] = v;
            self.fill(row, col - 1, visit);
            self.counts[vi] -= 1;
        }
        self.rows[row][idx] = 0;
    }
}

fn enumerate(outer: &Partition, inner: &Partition, content: &Partition, visit: &mut dyn FnMut(&[Vec<u32>])) {
    if !outer.contains(inner) || outer.weight() != inner.weight() + content.weight() {
        return;
    }
    let rows = (0..outer.len()).map(|x| vec![0; (outer.get(x) - inner.get(x)) as usize]).collect();
    let mut e = Enumerator { outer, inner, content, rows, counts: vec![0; content.len()] };
    if outer.is_empty() {
        visit(&e.rows);
        return;
    }
    let first = outer.get(0) as i64 - 1;
    e.fill(0, first, visit);
}

/// `c^λ_{μν}`: the number of LR tableaux of shape `λ/μ` and content `ν`.
pub fn lr_coefficient(lambda: &Partition, mu: &Partition, nu: &Partition) -> u64 {
    let mut count = 0;
    enumerate(lambda, mu, nu, &mut |_| count += 1);
    count
}

/// All LR tableaux of shape `λ/μ` and content `ν`, in a fixed order.
pub fn lr_tableaux(lambda: &Partition, mu: &Partition, nu: &Partition) -> Vec<LrTableau> {
    let mut out = Vec::new();
    enumerate(lambda, mu, nu, &mut |rows| {
        out.push(LrTableau { outer: lambda.clone(), inner: mu.clone(), rows: rows.to_vec() })
    });
    out
}

/// `Σ_x (i_x + j_x + k_x - 3x) = 2r(N-r)`.
pub fn dimension_condition(t: &SetTriple) -> bool {
    let s: i64 = (0..t.r).map(|x| (t.i[x] + t.j[x] + t.k[x]) as i64 - 3 * (x as i64 + 1)).sum();
    s == 2 * (t.r * (t.n - t.r)) as i64
}

/// Number of points in a generic triple intersection of Schubert varieties
/// with conditions `dim(Q ∩ E_{i_x}) >= x`; zero when the dimensions do not
/// add up.
pub fn intersection_number(t: &SetTriple) -> u64 {
    if !dimension_condition(t) {
        return 0;
    }
    let (n, r) = (t.n, t.r);
    let cols = (n - r) as u32;
    let li = set_to_partition(&t.i, n, r).expect("validated triple");
    let lj = set_to_partition(&t.j, n, r).expect("validated triple");
    let lk = set_to_partition(&t.k, n, r).expect("validated triple");
    lr_coefficient(&lk, &box_complement(&li, r, cols), &box_complement(&lj, r, cols))
}

/// Which triples [`horn_triples_with`] keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TripleFilter {
    /// `c_{I J̃ K̃} = 1`.
    #[default]
    Unit,
    /// `c_{I J̃ K̃} > 0`.
    Positive,
}

/// All `(I, J, K)` with `c_{I J̃ K̃} = 1`, lexicographically ordered.
pub fn horn_triples(n: usize, r: usize) -> Result<Vec<SetTriple>> {
    horn_triples_with(n, r, TripleFilter::Unit)
}

pub fn horn_triples_with(n: usize, r: usize, filter: TripleFilter) -> Result<Vec<SetTriple>> {
    if r == 0 || r > n {
        return Err(Error::OutOfRange(format!("need 1 <= r <= N, got r = {r}, N = {n}")));
    }
    let sets: Vec<Vec<usize>> = subsets(n, r).into_iter().map(|s| s.iter().map(|x| x + 1).collect()).collect();
    let mut out = Vec::new();
    for i in &sets {
        for j in &sets {
            for k in &sets {
                let t = SetTriple { n, r, i: i.clone(), j: j.clone(), k: k.clone() };
                let c = intersection_number(&t.reflected());
                let keep = match filter {
                    TripleFilter::Unit => c == 1,
                    TripleFilter::Positive => c > 0,
                };
                if keep {
                    out.push(t);
                }
            }
        }
    }
    Ok(out)
}

/// Compares `c_{I J̃ K̃}` in `N` with `c_{I J̄ K̄}` in `n2 > N`, where the bars
/// reflect in `n2`.
pub fn stability_check(t: &SetTriple, n2: usize) -> Result<bool> {
    if n2 <= t.n {
        return Err(Error::Precondition(format!("N' = {n2} must exceed N = {}", t.n)));
    }
    let here = intersection_number(&t.reflected());
    let there = intersection_number(&t.embed(n2)?.reflected());
    Ok(here == there)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(v: &[u32]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    fn t(n: usize, i: &[usize], j: &[usize], k: &[usize]) -> SetTriple {
        SetTriple::new(n, i.to_vec(), j.to_vec(), k.to_vec()).unwrap()
    }

    #[test]
    fn dictionary_examples() {
        assert_eq!(set_to_partition(&[1, 2, 3], 5, 3).unwrap(), p(&[]));
        assert_eq!(set_to_partition(&[3, 4, 5], 5, 3).unwrap(), p(&[2, 2, 2]));
        assert_eq!(set_to_partition(&[2, 4], 4, 2).unwrap(), p(&[2, 1]));
        assert!(set_to_partition(&[0, 4], 4, 2).is_err());
        assert!(set_to_partition(&[2, 5], 4, 2).is_err());
        assert_eq!(tilde(&[1], 2), vec![2]);
        assert_eq!(tilde(&[1, 2], 2), vec![1, 2]);
    }

    #[test]
    fn lr_examples() {
        assert_eq!(lr_coefficient(&p(&[3, 1]), &p(&[3, 1]), &p(&[])), 1);
        assert_eq!(lr_coefficient(&p(&[2, 1]), &p(&[1]), &p(&[1, 1])), 1);
        assert_eq!(lr_coefficient(&p(&[3, 2, 1]), &p(&[2, 1]), &p(&[2, 1])), 2);
        assert_eq!(lr_coefficient(&p(&[2]), &p(&[1, 1]), &p(&[])), 0);
        assert_eq!(lr_coefficient(&p(&[2, 2]), &p(&[1]), &p(&[1])), 0);
        let tabs = lr_tableaux(&p(&[3, 2, 1]), &p(&[2, 1]), &p(&[2, 1]));
        assert_eq!(tabs.len(), 2);
        for tab in &tabs {
            let w = tab.reverse_reading_word();
            assert_eq!(w.iter().filter(|&&x| x == 1).count(), 2);
        }
    }

    #[test]
    fn dimension_examples() {
        assert!(!dimension_condition(&t(2, &[1], &[1], &[1])));
        assert!(dimension_condition(&t(2, &[2], &[2], &[1])));
        assert!(!dimension_condition(&t(4, &[3, 4], &[3, 4], &[3, 4])));
    }

    #[test]
    fn intersection_examples() {
        assert_eq!(intersection_number(&t(2, &[2], &[1], &[2])), 1);
        assert_eq!(intersection_number(&t(2, &[1], &[1], &[1])), 0);
        assert_eq!(intersection_number(&t(4, &[2, 4], &[2, 4], &[2, 4])), 0);
        assert_eq!(intersection_number(&t(4, &[1, 3], &[2, 4], &[3, 4])), 1);
        assert_eq!(intersection_number(&t(6, &[2, 4, 6], &[2, 4, 6], &[2, 4, 6])), 2);
    }

    #[test]
    fn horn_table_n2() {
        let got = horn_triples(2, 1).unwrap();
        assert_eq!(got, vec![t(2, &[1], &[1], &[1]), t(2, &[2], &[1], &[2]), t(2, &[2], &[2], &[1])]);
        assert_eq!(horn_triples(3, 3).unwrap(), vec![t(3, &[1, 2, 3], &[1, 2, 3], &[1, 2, 3])]);
    }

    #[test]
    fn weyl_pattern() {
        for n in 1..=6 {
            let got = horn_triples(n, 1).unwrap();
            let mut expect = Vec::new();
            for i in 1..=n {
                for j in 1..=n {
                    for k in 1..=n {
                        if i + 1 == j + k {
                            expect.push(t(n, &[i], &[j], &[k]));
                        }
                    }
                }
            }
            assert_eq!(got, expect);
        }
    }

    #[test]
    fn positive_filter_contains_unit() {
        let unit = horn_triples(4, 2).unwrap();
        let pos = horn_triples_with(4, 2, TripleFilter::Positive).unwrap();
        assert!(unit.iter().all(|x| pos.contains(x)));
    }

    #[test]
    fn stability_all_small_triples() {
        for n in 1..=4 {
            for r in 1..=n {
                let sets: Vec<Vec<usize>> = subsets(n, r).into_iter().map(|s| s.iter().map(|x| x + 1).collect()).collect();
                for i in &sets {
                    for j in &sets {
                        for k in &sets {
                            let tr = t(n, i, j, k);
                            for n2 in n + 1..=n + 3 {
                                assert!(stability_check(&tr, n2).unwrap(), "{tr} in {n2}");
                            }
                        }
                    }
                }
            }
        }
        assert!(stability_check(&t(2, &[1], &[1], &[1]), 2).is_err());
    }

    #[test]
    fn emitted_triples_have_box_weight() {
        for n in 1..=5 {
            for r in 1..=n {
                for tr in horn_triples(n, r).unwrap() {
                    let rt = tr.reflected();
                    assert!(dimension_condition(&rt));
                    let w: u32 = [&rt.i, &rt.j, &rt.k].iter().map(|s| set_to_partition(s, n, r).unwrap().weight()).sum();
                    assert_eq!(w as usize, 2 * r * (n - r));
                }
            }
        }
    }

    fn arb_partition(max_weight: u32) -> impl Strategy<Value = Partition> {
        proptest::collection::vec(0u32..5, 0..5).prop_map(move |v| {
            let mut q = Partition::from_unsorted(v).parts().to_vec();
            while q.iter().sum::<u32>() > max_weight {
                q.pop();
            }
            Partition::from_unsorted(q)
        })
    }

    fn arb_triple() -> impl Strategy<Value = SetTriple> {
        (2usize..6).prop_flat_map(|n| (Just(n), 1..n)).prop_flat_map(|(n, r)| {
            let sets: Vec<Vec<usize>> = subsets(n, r).into_iter().map(|s| s.iter().map(|x| x + 1).collect()).collect();
            let len = sets.len();
            (0..len, 0..len, 0..len).prop_map(move |(a, b, c)| SetTriple {
                n,
                r,
                i: sets[a].clone(),
                j: sets[b].clone(),
                k: sets[c].clone(),
            })
        })
    }

    proptest! {
        #[test]
        fn lr_symmetry(mu in arb_partition(5), nu in arb_partition(5)) {
            for l in Partition::all_of_weight(mu.weight() + nu.weight()) {
                prop_assert_eq!(lr_coefficient(&l, &mu, &nu), lr_coefficient(&l, &nu, &mu));
            }
        }

        #[test]
        fn intersection_symmetry(tr in arb_triple()) {
            let c = intersection_number(&tr);
            let perms = [
                (&tr.j, &tr.i, &tr.k), (&tr.k, &tr.j, &tr.i), (&tr.i, &tr.k, &tr.j),
                (&tr.j, &tr.k, &tr.i), (&tr.k, &tr.i, &tr.j),
            ];
            for (a, b, d) in perms {
                let s = SetTriple { n: tr.n, r: tr.r, i: a.clone(), j: b.clone(), k: d.clone() };
                prop_assert_eq!(intersection_number(&s), c);
            }
        }

        #[test]
        fn tilde_is_involution(tr in arb_triple()) {
            prop_assert_eq!(tilde(&tilde(&tr.j, tr.n), tr.n), tr.j.clone());
        }
    }
}
