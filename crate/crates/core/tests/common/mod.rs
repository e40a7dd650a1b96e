//! Oracles shared by the integration tests. None of them call into the
//! Smith form, the LR enumerator or the module code of the library.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashMap};

use hornlab_core::finite::PGroup;
use hornlab_core::module::{Submodule, TorsionModule};
use hornlab_core::{Atom, Integer, Partition, PerAtom};

pub const TWO: Atom = Atom(2);

pub fn part(v: &[u32]) -> Partition {
    Partition::new(v.to_vec()).unwrap()
}

pub fn at_two(p: &Partition) -> PerAtom {
    let mut m = PerAtom::new();
    if !p.is_empty() {
        m.insert(TWO, p.clone());
    }
    m
}

/// Partitions of `n` as plain vectors, largest first.
pub fn partitions(n: u32) -> Vec<Vec<u32>> {
    fn go(n: u32, max: u32, acc: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if n == 0 {
            out.push(acc.clone());
            return;
        }
        for f in (1..=n.min(max)).rev() {
            acc.push(f);
            go(n - f, f, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// Kostka number `K_{λ,β}`: semistandard tableaux of shape `λ` and content
/// `β`, counted by peeling horizontal strips of the last letter.
pub struct Kostka {
    memo: HashMap<(Vec<u32>, Vec<u32>), u64>,
}

impl Default for Kostka {
    fn default() -> Self {
        Self::new()
    }
}

impl Kostka {
    pub fn new() -> Self {
        Self { memo: HashMap::new() }
    }

    pub fn get(&mut self, shape: &[u32], content: &[u32]) -> u64 {
        let shape: Vec<u32> = shape.iter().copied().filter(|&x| x > 0).collect();
        let content: Vec<u32> = content.iter().copied().filter(|&x| x > 0).collect();
        if shape.iter().sum::<u32>() != content.iter().sum::<u32>() {
            return 0;
        }
        if content.is_empty() {
            return 1;
        }
        let key = (shape.clone(), content.clone());
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        let last = *content.last().unwrap();
        let rest = &content[..content.len() - 1];
        let mut total = 0;
        let mut inner = vec![0u32; shape.len()];
        self.strips(&shape, 0, last, &mut inner, rest, &mut total);
        self.memo.insert(key, total);
        total
    }

    /// Inner shapes `ρ` with `shape/ρ` a horizontal strip of size `left`.
    fn strips(&mut self, shape: &[u32], row: usize, left: u32, inner: &mut Vec<u32>, rest: &[u32], total: &mut u64) {
        if row == shape.len() {
            if left == 0 {
                let rho = inner.clone();
                *total += self.get(&rho, rest);
            }
            return;
        }
        let lo = shape.get(row + 1).copied().unwrap_or(0);
        for r in lo..=shape[row] {
            let take = shape[row] - r;
            if take > left {
                continue;
            }
            inner[row] = r;
            self.strips(shape, row + 1, left - take, inner, rest, total);
        }
    }
}

/// Coefficients of `s_μ s_ν` in the Schur basis, from the monomial
/// expansion in `ℓ(μ) + ℓ(ν)` variables: the coefficient of `x^α` in the
/// product is a convolution of Kostka numbers, and Schur functions are
/// peeled off in decreasing lexicographic order of `α`.
pub fn schur_product(k: &mut Kostka, mu: &[u32], nu: &[u32]) -> BTreeMap<Vec<u32>, i64> {
    let w: u32 = mu.iter().sum::<u32>() + nu.iter().sum::<u32>();
    let vars = mu.len() + nu.len();
    let mut shapes: Vec<Vec<u32>> = partitions(w).into_iter().filter(|a| a.len() <= vars.max(1)).collect();
    shapes.sort_by(|a, b| b.cmp(a));
    let mut coef: BTreeMap<Vec<u32>, i64> = BTreeMap::new();
    let wm: u32 = mu.iter().sum();
    for a in &shapes {
        let mut padded = a.clone();
        padded.resize(vars, 0);
        let mut c = 0i64;
        for beta in bounded_compositions(&padded, wm) {
            let gamma: Vec<u32> = padded.iter().zip(&beta).map(|(x, y)| x - y).collect();
            c += (k.get(mu, &sorted(&beta)) * k.get(nu, &sorted(&gamma))) as i64;
        }
        coef.insert(a.clone(), c);
    }
    let mut out = BTreeMap::new();
    for (idx, a) in shapes.iter().enumerate() {
        let c = coef[a];
        if c != 0 {
            out.insert(a.clone(), c);
            for b in &shapes[idx + 1..] {
                let kab = k.get(a, b) as i64;
                *coef.get_mut(b).unwrap() -= c * kab;
            }
        }
    }
    out
}

fn sorted(v: &[u32]) -> Vec<u32> {
    let mut v = v.to_vec();
    v.sort_unstable_by(|a, b| b.cmp(a));
    v
}

/// Vectors `β ≤ bound` componentwise with `|β| = total`.
fn bounded_compositions(bound: &[u32], total: u32) -> Vec<Vec<u32>> {
    fn go(bound: &[u32], i: usize, left: u32, acc: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == bound.len() {
            if left == 0 {
                out.push(acc.clone());
            }
            return;
        }
        let room: u32 = bound[i + 1..].iter().sum();
        for x in 0..=bound[i].min(left) {
            if left - x > room {
                continue;
            }
            acc.push(x);
            go(bound, i + 1, left - x, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    go(bound, 0, total, &mut Vec::new(), &mut out);
    out
}

/// Determinant over `i128` by cofactor expansion along the first row.
pub fn det_i128(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    match n {
        0 => 1,
        1 => m[0][0],
        _ => {
            let mut acc = 0;
            for c in 0..n {
                if m[0][c] == 0 {
                    continue;
                }
                let minor: Vec<Vec<i128>> =
                    m[1..].iter().map(|row| row.iter().enumerate().filter(|(j, _)| *j != c).map(|(_, &x)| x).collect()).collect();
                let sign = if c % 2 == 0 { 1 } else { -1 };
                acc += sign * m[0][c] * det_i128(&minor);
            }
            acc
        }
    }
}

fn gcd_i128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn choose(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, k: usize, start: usize, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if acc.len() == k {
            out.push(acc.clone());
            return;
        }
        for x in start..n {
            acc.push(x);
            go(n, k, x + 1, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    go(n, k, 0, &mut Vec::new(), &mut out);
    out
}

/// gcd of all `k x k` minors, nonnegative.
pub fn minors_gcd_oracle(a: &[Vec<i64>], k: usize) -> i128 {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    if k == 0 {
        return 1;
    }
    let mut g = 0;
    for rs in choose(rows, k) {
        for cs in choose(cols, k) {
            let sub: Vec<Vec<i128>> = rs.iter().map(|&r| cs.iter().map(|&c| a[r][c] as i128).collect()).collect();
            g = gcd_i128(g, det_i128(&sub));
        }
    }
    g
}

/// Every subgroup of `⊕ ℤ/2^{λ_i}` with its type and cotype, computed by
/// counting elements.
pub fn subgroup_table(lambda: &[u32]) -> Vec<(Vec<Vec<u64>>, Partition, Partition)> {
    let g = PGroup::new(2, lambda).unwrap();
    g.subgroups()
        .into_iter()
        .map(|gens| {
            let h = g.span(&gens);
            let t = g.type_of(&h);
            let c = g.cotype_of(&h);
            (gens, t, c)
        })
        .collect()
}

/// The pairs (type, cotype) that occur in `⊕ ℤ/2^{λ_i}`.
pub fn realizable_pairs(lambda: &[u32]) -> BTreeSet<(Partition, Partition)> {
    subgroup_table(lambda).into_iter().map(|(_, t, c)| (t, c)).collect()
}

pub fn to_integers(v: &[u64]) -> Vec<Integer> {
    v.iter().map(|&x| Integer::new(x as i64)).collect()
}

/// Type and cotype of a library submodule of a 2-primary module, recomputed
/// by counting in the corresponding finite group.
pub fn counted_types(m: &TorsionModule<Integer>, s: &Submodule<Integer>) -> (Partition, Partition) {
    let exps: Vec<u32> = m.theta().iter().map(|t| t.exponent(TWO)).collect();
    let g = PGroup::new(2, &exps).unwrap();
    let gens: Vec<Vec<u64>> = s
        .generators()
        .iter()
        .map(|v| {
            v.iter()
                .zip(&exps)
                .map(|(x, &e)| {
                    let m = 1i64 << e;
                    x.to_i64().unwrap().rem_euclid(m) as u64
                })
                .collect()
        })
        .collect();
    let h = g.span(&gens);
    (g.type_of(&h), g.cotype_of(&h))
}
