//! The finite inverse problem: given partitions `λ, μ, ν` at each atom,
//! decide whether some module of type `λ` has a submodule of type `μ` with
//! quotient of type `ν`, and build one.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::{Error, Result};
use crate::lr::{lr_coefficient, lr_tableaux, LrTableau};
use crate::matrix::Matrix;
use crate::module::{embed_primary, Submodule, TorsionModule};
use crate::ring::Pid;
use crate::snf::{snf, snf_factors};
use crate::valuation::{atoms_of, partition_at, Atom, Partition, PerAtom};

/// Random generator sets tried when the tableau construction fails.
pub const FALLBACK_BUDGET: usize = 4000;

/// Invariant data `(λ, μ, ν)` for a module, a submodule and the quotient.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct JordanData {
    pub lambda: PerAtom,
    pub mu: PerAtom,
    pub nu: PerAtom,
}

fn normalize(p: PerAtom) -> PerAtom {
    p.into_iter().filter(|(_, part)| !part.is_empty()).collect()
}

impl JordanData {
    /// Drops empty partitions so that equal data compare equal.
    pub fn new(lambda: PerAtom, mu: PerAtom, nu: PerAtom) -> Self {
        Self { lambda: normalize(lambda), mu: normalize(mu), nu: normalize(nu) }
    }

    pub fn primary(atom: Atom, lambda: Partition, mu: Partition, nu: Partition) -> Self {
        let one = |p: Partition| -> PerAtom { [(atom, p)].into_iter().collect() };
        Self::new(one(lambda), one(mu), one(nu))
    }

    pub fn atoms(&self) -> Vec<Atom> {
        atoms_of(&[&self.lambda, &self.mu, &self.nu])
    }

    /// Partitions at one atom.
    pub fn at(&self, atom: Atom) -> (Partition, Partition, Partition) {
        (partition_at(&self.lambda, atom), partition_at(&self.mu, atom), partition_at(&self.nu, atom))
    }
}

/// Verdict of [`feasible`] with one reason per failed condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Feasibility {
    pub feasible: bool,
    pub reasons: Vec<String>,
}

/// Interlacing `μ_n ≤ λ_n`, `ν_n ≤ λ_n`, the determinant condition
/// `|λ| = |μ| + |ν|` and `c^λ_{μν} ≥ 1`, atom by atom.
pub fn feasible(d: &JordanData) -> Feasibility {
    let mut reasons = Vec::new();
    for atom in d.atoms() {
        let (l, m, n) = d.at(atom);
        let len = l.len().max(m.len()).max(n.len());
        for (name, p) in [("mu", &m), ("nu", &n)] {
            for x in 0..len {
                if p.get(x) > l.get(x) {
                    reasons.push(format!("atom {atom}: {name}_{} = {} exceeds lambda_{} = {}", x + 1, p.get(x), x + 1, l.get(x)));
                }
            }
        }
        if l.weight() != m.weight() + n.weight() {
            reasons.push(format!("atom {atom}: |lambda| = {} but |mu| + |nu| = {}", l.weight(), m.weight() + n.weight()));
        }
        if lr_coefficient(&l, &m, &n) == 0 {
            reasons.push(format!("atom {atom}: LR coefficient c^{l}_({m}),({n}) is zero"));
        }
    }
    Feasibility { feasible: reasons.is_empty(), reasons }
}

fn verify<R: Pid>(s: &Submodule<R>, atom: Atom, mu: &Partition, nu: &Partition) -> bool {
    partition_at(&s.partitions(), atom) == *mu && partition_at(&s.quotient_partitions(), atom) == *nu
}

/// Relations of the extension of `S = ⊕ R/p^{μ_j} a_j` by generators `g_k`
/// with `p^{ν_k} g_k = Σ_j c[k][j] a_j`, for the first `cols.len()` parts
/// of `ν`.
fn extension_relations<R: Pid>(p: &R, mu: &Partition, nu: &Partition, cols: &[Vec<R>]) -> Matrix<R> {
    let a = mu.len();
    let n = a + cols.len();
    let mut rel = Matrix::<R>::zeros(n, n);
    for j in 0..a {
        rel[(j, j)] = p.pow(mu.get(j));
    }
    for (k, c) in cols.iter().enumerate() {
        for (j, x) in c.iter().enumerate() {
            rel[(j, a + k)] = x.clone();
        }
        rel[(a + k, a + k)] = p.pow(nu.get(k));
    }
    rel
}

/// Type at `p` of the module presented by a square relation matrix.
fn presented_type<R: Pid>(rel: &Matrix<R>, p: &R) -> Option<Partition> {
    let mut parts = Vec::new();
    for f in snf_factors(rel) {
        parts.push(f.valuation(p).ok()?);
    }
    Some(Partition::from_unsorted(parts))
}

/// Shapes `μ = λ^(0) ⊂ λ^(1) ⊂ ⋯ ⊂ λ`, where `λ^(k)` adds the cells holding
/// entries up to `k`.
pub fn tableau_chain(t: &LrTableau) -> Vec<Partition> {
    let top = t.rows.iter().flatten().copied().max().unwrap_or(0);
    (0..=top)
        .map(|k| {
            let parts = t.rows.iter().enumerate().map(|(i, row)| t.inner.get(i) + row.iter().filter(|&&x| x <= k).count() as u32);
            Partition::from_unsorted(parts.collect())
        })
        .collect()
}

/// Candidate coupling columns: entries `0` or `p^e` with `e < μ_j`, fewest
/// nonzero entries first.
fn coupling_columns<R: Pid>(p: &R, mu: &Partition) -> Vec<Vec<R>> {
    let mut out: Vec<(usize, u32, Vec<R>)> = vec![(0, 0, Vec::new())];
    for j in 0..mu.len() {
        let mut next = Vec::new();
        for (nz, sum, col) in &out {
            let mut c = col.clone();
            c.push(R::zero());
            next.push((*nz, *sum, c));
            for e in 0..mu.get(j) {
                let mut c = col.clone();
                c.push(p.pow(e));
                next.push((nz + 1, sum + e, c));
            }
        }
        out = next;
    }
    out.sort_by_key(|(nz, sum, _)| (*nz, *sum));
    out.into_iter().map(|(_, _, c)| c).collect()
}

fn chain_search<R: Pid>(p: &R, t: &LrTableau, nu: &Partition, chain: &[Partition], options: &[Vec<R>], cols: &mut Vec<Vec<R>>, budget: &mut usize) -> bool {
    let k = cols.len();
    if k == nu.len() {
        return true;
    }
    for c in options {
        if *budget == 0 {
            return false;
        }
        *budget -= 1;
        cols.push(c.clone());
        let rel = extension_relations(p, &t.inner, nu, cols);
        if presented_type(&rel, p).as_ref() == Some(&chain[k + 1]) && chain_search(p, t, nu, chain, options, cols, budget) {
            return true;
        }
        cols.pop();
    }
    false
}

/// Module and submodule presented by an extension: coordinates come from
/// the left Smith transform of the relations.
fn from_extension<R: Pid>(atom: Atom, lambda: &Partition, mu: &Partition, rel: &Matrix<R>) -> Result<(TorsionModule<R>, Submodule<R>)> {
    let m = TorsionModule::<R>::primary(atom, lambda.parts())?;
    let n = lambda.len();
    let u = snf(rel).u;
    let gens: Vec<Vec<R>> = (0..mu.len()).map(|j| u.col(j)[..n].to_vec()).collect();
    Ok((m.clone(), Submodule::new(&m, gens)?))
}

/// Realization at one atom following an LR tableau of shape `λ/μ` and
/// content `ν`.
///
/// `M` is built from `S = ⊕ R/p^{μ_j} a_j` by adjoining `g_1, g_2, …` with
/// `p^{ν_k} g_k ∈ S`, so `M/S ≅ ⊕ R/p^{ν_k}` by construction. The relation
/// for `g_k` is chosen so that `S + ⟨g_1, …, g_k⟩` has the type of the
/// tableau's shape holding entries up to `k` (see [`tableau_chain`]),
/// backtracking over columns of `p`-powers within [`FALLBACK_BUDGET`]
/// attempts.
pub fn realize_with_tableau<R: Pid>(atom: Atom, t: &LrTableau, nu: &Partition) -> Result<(TorsionModule<R>, Submodule<R>)> {
    let p = R::atom_element(atom)?;
    let (lambda, mu) = (&t.outer, &t.inner);
    let chain = tableau_chain(t);
    if chain.len() != nu.len() + 1 {
        return Err(Error::Precondition(format!("tableau content does not match {nu}")));
    }
    let options = coupling_columns(&p, mu);
    let mut cols = Vec::new();
    let mut budget = FALLBACK_BUDGET;
    if !chain_search(&p, t, nu, &chain, &options, &mut cols, &mut budget) {
        return Err(Error::NotFound(format!("no extension follows the tableau for {lambda}/{mu} with content {nu}")));
    }
    let (m, s) = from_extension(atom, lambda, mu, &extension_relations(&p, mu, nu, &cols))?;
    if !verify(&s, atom, mu, nu) {
        return Err(Error::NotFound(format!("tableau construction for {lambda}/{mu} with content {nu} did not verify")));
    }
    Ok((m, s))
}

/// Seeded random extensions, for when no tableau construction verifies.
fn random_realization<R: Pid>(atom: Atom, lambda: &Partition, mu: &Partition, nu: &Partition) -> Result<(TorsionModule<R>, Submodule<R>)> {
    let p = R::atom_element(atom)?;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..FALLBACK_BUDGET {
        let cols: Vec<Vec<R>> = (0..nu.len())
            .map(|_| {
                (0..mu.len())
                    .map(|j| {
                        let e = (rng.next_u64() % (mu.get(j) as u64 + 1)) as u32;
                        R::random_small(&mut rng).mul(&p.pow(e))
                    })
                    .collect()
            })
            .collect();
        let rel = extension_relations(&p, mu, nu, &cols);
        if presented_type(&rel, &p).as_ref() != Some(lambda) {
            continue;
        }
        let (m, s) = from_extension(atom, lambda, mu, &rel)?;
        if verify(&s, atom, mu, nu) {
            return Ok((m, s));
        }
    }
    Err(Error::BudgetExhausted(format!("no realization of {lambda} ⊃ {mu} with quotient {nu} found at random")))
}

/// Realization at one atom: the first tableau whose construction verifies,
/// then a random search.
pub fn realize_primary<R: Pid>(atom: Atom, lambda: &Partition, mu: &Partition, nu: &Partition) -> Result<(TorsionModule<R>, Submodule<R>)> {
    for t in lr_tableaux(lambda, mu, nu) {
        if let Ok(found) = realize_with_tableau(atom, &t, nu) {
            return Ok(found);
        }
    }
    random_realization(atom, lambda, mu, nu)
}

/// A module with invariants `λ` and a submodule with invariants `μ` and
/// quotient invariants `ν`, built atom by atom and recombined through the
/// primary decomposition. Infeasible data are rejected with their reasons.
pub fn realize<R: Pid>(d: &JordanData) -> Result<(TorsionModule<R>, Submodule<R>)> {
    let verdict = feasible(d);
    if !verdict.feasible {
        return Err(Error::Infeasible(verdict.reasons));
    }
    let n = d.lambda.values().map(Partition::len).max().unwrap_or(0);
    let m = TorsionModule::<R>::from_partitions(&d.lambda, n)?;
    let mut gens = Vec::new();
    for atom in d.atoms() {
        let (l, mu, nu) = d.at(atom);
        let (_, s) = realize_primary::<R>(atom, &l, &mu, &nu)?;
        let local: Vec<Vec<R>> = s
            .generators()
            .iter()
            .map(|g| {
                let mut g = g.clone();
                g.resize(n, R::zero());
                g
            })
            .collect();
        gens.extend(embed_primary(&m, atom, &local)?);
    }
    let s = Submodule::new(&m, gens)?;
    for atom in d.atoms() {
        let (_, mu, nu) = d.at(atom);
        if !verify(&s, atom, &mu, &nu) {
            return Err(Error::NotFound(format!("recombined realization failed verification at atom {atom}")));
        }
    }
    Ok((m, s))
}
