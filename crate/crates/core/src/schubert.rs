//! Complete flags over the fraction field, Schubert conditions, witnesses for
//! triple Schubert intersections, and the passage from a subspace of
//! `Frac(R)^N` to a submodule of a torsion module.

use alloc::format;
use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::{Error, Result};
use crate::linalg;
use crate::lr::{intersection_number, SetTriple};
use crate::matrix::Matrix;
use crate::module::{saturate, Basis, Submodule, TorsionModule};
use crate::ring::{Frac, Pid, Ring};
use crate::valuation::ExponentVector;

/// A subspace of `Frac(R)^N`, stored by the nonzero rows of its reduced
/// echelon form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace<R: Pid> {
    rows: Matrix<Frac<R>>,
}

impl<R: Pid> Subspace<R> {
    /// Span of `vs`, each of length `n`.
    pub fn new(vs: &[Vec<Frac<R>>], n: usize) -> Self {
        Self { rows: linalg::span(vs, n) }
    }

    pub fn from_ring_rows(vs: &[Vec<R>], n: usize) -> Self {
        let vs: Vec<Vec<Frac<R>>> = vs.iter().map(|v| v.iter().cloned().map(Frac::from_ring).collect()).collect();
        Self::new(&vs, n)
    }

    pub fn zero(n: usize) -> Self {
        Self { rows: Matrix::zeros(0, n) }
    }

    pub fn full(n: usize) -> Self {
        Self { rows: Matrix::identity(n) }
    }

    pub fn rank(&self) -> usize {
        self.rows.rows()
    }

    pub fn ambient(&self) -> usize {
        self.rows.cols()
    }

    /// Echelon matrix, one row per basis vector.
    pub fn matrix(&self) -> &Matrix<Frac<R>> {
        &self.rows
    }

    pub fn basis(&self) -> Vec<Vec<Frac<R>>> {
        self.rows.row_vecs()
    }

    pub fn contains(&self, v: &[Frac<R>]) -> bool {
        linalg::contains(&self.rows, v)
    }

    pub fn sum(&self, other: &Self) -> Self {
        Self { rows: linalg::span_sum(&self.rows, &other.rows) }
    }

    pub fn meet(&self, other: &Self) -> Self {
        Self { rows: linalg::span_intersection(&self.rows, &other.rows) }
    }

    /// Orthogonal complement for the standard bilinear pairing.
    pub fn annihilator(&self) -> Self {
        Self { rows: linalg::annihilator(&self.rows) }
    }

    pub fn is_subspace_of(&self, other: &Self) -> bool {
        linalg::is_subspace(&self.rows, &other.rows)
    }

    /// `dim(self ∩ other)` from `dim(self + other)`.
    pub fn meet_dim(&self, other: &Self) -> usize {
        self.rank() + other.rank() - self.sum(other).rank()
    }
}

/// A complete flag `E_1 ⊂ ⋯ ⊂ E_N` with `E_n = span(f_1, …, f_n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Flag<R: Pid> {
    vectors: Vec<Vec<Frac<R>>>,
    omega: Option<R>,
}

impl<R: Pid> Flag<R> {
    pub fn new(vectors: Vec<Vec<Frac<R>>>) -> Result<Self> {
        let n = vectors.len();
        if let Some(v) = vectors.iter().find(|v| v.len() != n) {
            return Err(Error::Dimension(format!("flag vector of length {} in dimension {n}", v.len())));
        }
        if n > 0 && linalg::rank(&Matrix::from_rows(&vectors, n)?) != n {
            return Err(Error::Singular("flag vectors are linearly dependent".into()));
        }
        Ok(Self { vectors, omega: None })
    }

    pub fn from_ring_vectors(vs: &[Vec<R>]) -> Result<Self> {
        Self::new(vs.iter().map(|v| v.iter().cloned().map(Frac::from_ring).collect()).collect())
    }

    pub fn standard(n: usize) -> Self {
        Self { vectors: Matrix::<Frac<R>>::identity(n).row_vecs(), omega: None }
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[Vec<Frac<R>>] {
        &self.vectors
    }

    /// The scalar multiple `ω` recorded by [`small_flag`].
    pub fn omega(&self) -> Option<&R> {
        self.omega.as_ref()
    }

    /// `E_k`.
    pub fn space(&self, k: usize) -> Subspace<R> {
        Subspace::new(&self.vectors[..k.min(self.dim())], self.dim())
    }

    /// The flag `E*` with `E*_n = E_{N-n}^⊥`: its vectors are the dual basis
    /// in reverse order.
    pub fn dual(&self) -> Self {
        let n = self.dim();
        if n == 0 {
            return self.clone();
        }
        let f = Matrix::from_rows(&self.vectors, n).expect("square");
        // rows of F are the f_j, so the columns of F^{-1} form the dual basis
        let g = linalg::inverse(&f).expect("flag vectors are independent");
        let vectors = (0..n).rev().map(|i| g.col(i)).collect();
        Self { vectors, omega: None }
    }
}

/// `dim(Q ∩ E_{i_x}) >= x` for every `x`. A set whose size differs from
/// `dim Q` gives `false`.
pub fn schubert_member<R: Pid>(q: &Subspace<R>, e: &Flag<R>, i: &[usize]) -> bool {
    if i.len() != q.rank() || q.ambient() != e.dim() {
        return false;
    }
    i.iter().enumerate().all(|(x, &ix)| ix >= 1 && ix <= e.dim() && q.meet_dim(&e.space(ix)) > x)
}

/// `{N+1-j : j ∉ I}`, the condition set satisfied by `Q^⊥` against the dual
/// flag.
pub fn dual_set(i: &[usize], n: usize) -> Vec<usize> {
    let mut out: Vec<usize> = (1..=n).filter(|j| !i.contains(j)).map(|j| n + 1 - j).collect();
    out.sort_unstable();
    out
}

fn lift<R: Pid>(v: &[R]) -> Vec<Frac<R>> {
    v.iter().cloned().map(Frac::from_ring).collect()
}

/// Appends standard vectors to `vs` until it spans `Frac(R)^n`.
fn supplement<R: Pid>(vs: &mut Vec<Vec<Frac<R>>>, n: usize) {
    for k in 0..n {
        if vs.len() == n {
            break;
        }
        let e: Vec<Frac<R>> = (0..n).map(|t| if t == k { Frac::one() } else { Frac::zero() }).collect();
        let mut trial = vs.clone();
        trial.push(e);
        if linalg::rank(&Matrix::from_rows(&trial, n).expect("uniform")) == trial.len() {
            *vs = trial;
        }
    }
}

/// The flag of the lifts `h_1, …, h_n` of a basis: `E_n = span(h_1..h_n)`
/// while `θ_n` is not a unit, completed by standard vectors.
pub fn big_flag<R: Pid>(m: &TorsionModule<R>, basis: &Basis<R>) -> Flag<R> {
    let n = m.rank();
    let mut vs: Vec<Vec<Frac<R>>> = Vec::new();
    for (h, a) in basis.vectors.iter().zip(&basis.annihilators) {
        if a.is_unit() {
            break;
        }
        let mut trial = vs.clone();
        trial.push(lift(h));
        if linalg::rank(&Matrix::from_rows(&trial, n).expect("uniform")) < trial.len() {
            break;
        }
        vs = trial;
    }
    supplement(&mut vs, n);
    Flag { vectors: vs, omega: None }
}

/// The flag `F_n = span(y_N, …, y_{N-n+1})` of the basis vectors `y_j`
/// taken as they are (not reduced), in reverse order, with `ω = θ₁²`.
/// Vectors that would make the family dependent are replaced by standard
/// vectors.
pub fn small_flag<R: Pid>(m: &TorsionModule<R>, basis: &Basis<R>) -> Flag<R> {
    let n = m.rank();
    let mut vs: Vec<Vec<Frac<R>>> = Vec::new();
    for y in basis.vectors.iter().rev() {
        let mut trial = vs.clone();
        trial.push(lift(y));
        if linalg::rank(&Matrix::from_rows(&trial, n).expect("uniform")) == trial.len() {
            vs = trial;
        }
    }
    supplement(&mut vs, n);
    let omega = m.theta_elems().first().map(|t| t.mul(t));
    Flag { vectors: vs, omega }
}

/// Unitriangular matrix with random entries on one side of the diagonal;
/// entry `(a, b)` is scaled by `scale(a, b)`.
fn unitriangular<R: Pid>(n: usize, lower: bool, scale: impl Fn(usize, usize) -> R, rng: &mut dyn RngCore) -> Matrix<R> {
    let mut out = Matrix::identity(n);
    for a in 0..n {
        for b in 0..n {
            if (lower && a > b) || (!lower && a < b) {
                out[(a, b)] = scale(a, b).mul(&R::random_small(rng));
            }
        }
    }
    out
}

/// A random `u = L·U` with `U` upper unitriangular and `L` lower
/// unitriangular whose `(n, m)` entry is a multiple of `θ_m/θ_n`. Such a
/// `u` is an admissible base change for a basis with annihilators `θ`.
pub fn big_mixing<R: Pid>(theta: &[R], rng: &mut dyn RngCore) -> Matrix<R> {
    let n = theta.len();
    let l = unitriangular(n, true, |a, b| theta[b].div_exact(&theta[a]).expect("chain"), rng);
    let u = unitriangular(n, false, |_, _| R::one(), rng);
    l.mul(&u).expect("square")
}

/// A random `W = U·L` with `L` lower unitriangular and `U` upper
/// unitriangular whose `(i, j)` entry is a multiple of `θ_i/θ_j`, so that
/// `D⁻¹ W D` is integral for `D = diag(θ)`. Replacing the columns `y_j` of
/// `Y` by those of `Y W` keeps the hypotheses of the small-flag
/// construction.
pub fn small_mixing<R: Pid>(theta: &[R], rng: &mut dyn RngCore) -> Matrix<R> {
    let n = theta.len();
    let u = unitriangular(n, false, |a, b| theta[a].div_exact(&theta[b]).expect("chain"), rng);
    let l = unitriangular(n, true, |_, _| R::one(), rng);
    u.mul(&l).expect("square")
}

/// Which rung of the solver ladder produced a witness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Strategy {
    /// Linear algebra: `r = 1` or vacuous conditions.
    S1,
    /// Exact two-plane construction for `r = 2`.
    S2,
    /// Seeded random search.
    S3,
}

impl Strategy {
    pub fn as_str(self) -> &'static str {
        match self {
            Strategy::S1 => "S1",
            Strategy::S2 => "S2",
            Strategy::S3 => "S3",
        }
    }
}

/// A verified point of `𝔖(E, I) ∩ 𝔖(F, J) ∩ 𝔖(G, K)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness<R: Pid> {
    pub q: Subspace<R>,
    pub strategy: Strategy,
    /// Whether the problem was solved for `Q^⊥` against the dual flags.
    pub dual: bool,
    pub seed: u64,
}

/// Attempts of the random search before giving up.
pub const DEFAULT_BUDGET: usize = 4000;

/// A subspace `Q` with `Q ∈ 𝔖(E, I)`, `Q ∈ 𝔖(F, J)` and `Q ∈ 𝔖(G, K)`.
///
/// Requires the triple to have intersection number one. `NotFound` means
/// that an exact rung proved these particular flags degenerate (no point);
/// `BudgetExhausted` means the random search gave up. Neither says anything
/// about generic flags.
pub fn intersect_witness<R: Pid>(
    e: &Flag<R>,
    f: &Flag<R>,
    g: &Flag<R>,
    i: &[usize],
    j: &[usize],
    k: &[usize],
    seed: u64,
) -> Result<Witness<R>> {
    intersect_witness_with_budget(e, f, g, i, j, k, seed, DEFAULT_BUDGET)
}

#[allow(clippy::too_many_arguments)]
pub fn intersect_witness_with_budget<R: Pid>(
    e: &Flag<R>,
    f: &Flag<R>,
    g: &Flag<R>,
    i: &[usize],
    j: &[usize],
    k: &[usize],
    seed: u64,
    budget: usize,
) -> Result<Witness<R>> {
    let n = e.dim();
    if f.dim() != n || g.dim() != n {
        return Err(Error::Dimension(format!("flags of dimensions {}, {}, {}", n, f.dim(), g.dim())));
    }
    let t = SetTriple::new(n, i.to_vec(), j.to_vec(), k.to_vec())?;
    let c = intersection_number(&t);
    if c != 1 {
        return Err(Error::Precondition(format!("intersection number of {t} is {c}, not 1")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r = t.r;
    let (q, strategy, dual) = if r > 2 && n - r <= 2 && n - r < r {
        let (ed, fd, gd) = (e.dual(), f.dual(), g.dual());
        let (id, jd, kd) = (dual_set(i, n), dual_set(j, n), dual_set(k, n));
        let (qd, s) = solve([&ed, &fd, &gd], [&id, &jd, &kd], n, &mut rng, budget)?;
        (qd.annihilator(), s, true)
    } else {
        let (q, s) = solve([e, f, g], [i, j, k], n, &mut rng, budget)?;
        (q, s, false)
    };
    if !(schubert_member(&q, e, i) && schubert_member(&q, f, j) && schubert_member(&q, g, k)) {
        return Err(Error::NotFound("candidate failed re-verification".into()));
    }
    Ok(Witness { q, strategy, dual, seed })
}

fn solve<R: Pid>(
    flags: [&Flag<R>; 3],
    sets: [&[usize]; 3],
    n: usize,
    rng: &mut dyn RngCore,
    budget: usize,
) -> Result<(Subspace<R>, Strategy)> {
    let r = sets[0].len();
    if r == 0 {
        return Ok((Subspace::zero(n), Strategy::S1));
    }
    let vacuous = sets.iter().all(|s| s.iter().enumerate().all(|(x, &v)| v == n - r + x + 1));
    if vacuous {
        let rows: Vec<Vec<Frac<R>>> = Matrix::<Frac<R>>::identity(n).row_vecs().into_iter().take(r).collect();
        return Ok((Subspace::new(&rows, n), Strategy::S1));
    }
    match r {
        1 => s1(flags, sets, n).map(|q| (q, Strategy::S1)),
        2 => s2(flags, sets, n).map(|q| (q, Strategy::S2)),
        _ => s3(flags, sets, n, rng, budget).map(|q| (q, Strategy::S3)),
    }
}

fn triple_meet<R: Pid>(flags: [&Flag<R>; 3], dims: [usize; 3]) -> Subspace<R> {
    flags[0].space(dims[0]).meet(&flags[1].space(dims[1])).meet(&flags[2].space(dims[2]))
}

fn s1<R: Pid>(flags: [&Flag<R>; 3], sets: [&[usize]; 3], n: usize) -> Result<Subspace<R>> {
    let w = triple_meet(flags, [sets[0][0], sets[1][0], sets[2][0]]);
    if w.rank() == 0 {
        return Err(Error::NotFound("the three flag spaces meet in zero".into()));
    }
    Ok(Subspace::new(&w.basis()[..1], n))
}

/// `Q ⊂ W = E_{i₂} ∩ F_{j₂} ∩ G_{k₂}` meeting `A = E_{i₁} ∩ W`, `B` and `C`.
fn s2<R: Pid>(flags: [&Flag<R>; 3], sets: [&[usize]; 3], n: usize) -> Result<Subspace<R>> {
    let w = triple_meet(flags, [sets[0][1], sets[1][1], sets[2][1]]);
    if w.rank() < 2 {
        return Err(Error::NotFound("the top spaces meet in dimension below 2".into()));
    }
    let parts: Vec<Subspace<R>> = (0..3).map(|t| flags[t].space(sets[t][0]).meet(&w)).collect();
    if parts.iter().any(|p| p.rank() == 0) {
        return Err(Error::NotFound("a first condition space misses the top intersection".into()));
    }
    for (a, b, c) in [(0, 1, 2), (0, 2, 1), (1, 2, 0)] {
        let ab = parts[a].meet(&parts[b]);
        if ab.rank() == 0 {
            continue;
        }
        let v = ab.basis().swap_remove(0);
        let line = Subspace::new(core::slice::from_ref(&v), n);
        let partner = parts[c]
            .basis()
            .into_iter()
            .chain(w.basis())
            .find(|z| !line.contains(z))
            .expect("W has dimension at least 2");
        return Ok(Subspace::new(&[v, partner], n));
    }
    let (a, b) = (&parts[0], &parts[1]);
    let d = a.sum(b).meet(&parts[2]);
    if d.rank() == 0 {
        return Err(Error::NotFound("no line of C lies in A + B".into()));
    }
    let c = d.basis().swap_remove(0);
    let stacked = Matrix::from_rows(&[a.basis(), b.basis()].concat(), n)?;
    let x = linalg::solve(&stacked.transpose(), &c)?;
    let av = linalg::combine(&x[..a.rank()], a.matrix());
    let bv: Vec<Frac<R>> = c.iter().zip(&av).map(|(s, t)| s.sub(t)).collect();
    Ok(Subspace::new(&[av, bv], n))
}

fn random_in<R: Pid>(s: &Subspace<R>, rng: &mut dyn RngCore) -> Vec<Frac<R>> {
    let coeffs: Vec<Frac<R>> = (0..s.rank()).map(|_| Frac::from_ring(R::random_small(rng))).collect();
    linalg::combine(&coeffs, s.matrix())
}

fn shuffle(v: &mut [usize], rng: &mut dyn RngCore) {
    for t in (1..v.len()).rev() {
        let s = (rng.next_u64() % (t as u64 + 1)) as usize;
        v.swap(t, s);
    }
}

/// Random search: the `x`-th vector is drawn from
/// `E_{i_x} ∩ F_{j_σ(x)} ∩ G_{k_τ(x)}` for random permutations `σ`, `τ`.
fn s3<R: Pid>(
    flags: [&Flag<R>; 3],
    sets: [&[usize]; 3],
    n: usize,
    rng: &mut dyn RngCore,
    budget: usize,
) -> Result<Subspace<R>> {
    let r = sets[0].len();
    let mut sigma: Vec<usize> = (0..r).collect();
    let mut tau: Vec<usize> = (0..r).collect();
    for _ in 0..budget {
        shuffle(&mut sigma, rng);
        shuffle(&mut tau, rng);
        let mut rows = Vec::with_capacity(r);
        for x in 0..r {
            let space = triple_meet(flags, [sets[0][x], sets[1][sigma[x]], sets[2][tau[x]]]);
            if space.rank() == 0 {
                break;
            }
            rows.push(random_in(&space, rng));
        }
        if rows.len() < r {
            continue;
        }
        let q = Subspace::new(&rows, n);
        if q.rank() == r && (0..3).all(|t| schubert_member(&q, flags[t], sets[t])) {
            return Ok(q);
        }
    }
    Err(Error::BudgetExhausted(format!("random search tried {budget} candidates")))
}

/// `(Q ∩ R^N + ΘR^N) / ΘR^N`: the saturated lattice of `Q` reduced into `M`.
pub fn project_to_module<R: Pid>(q: &Subspace<R>, m: &TorsionModule<R>) -> Result<Submodule<R>> {
    let n = m.rank();
    if q.ambient() != n {
        return Err(Error::Dimension(format!("subspace of Frac(R)^{} against a rank-{n} module", q.ambient())));
    }
    let gens: Vec<Vec<R>> = q.basis().iter().map(|v| linalg::primitive(v)).collect();
    let sat = saturate(n, &gens)?;
    Submodule::new(m, sat.col_vecs())
}

/// One divisibility `value | bound` or `bound | value`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundCheck {
    pub x: usize,
    pub bound: ExponentVector,
    pub value: ExponentVector,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundReport {
    /// The first `r` invariant factors of the projected submodule.
    pub invariants: Vec<ExponentVector>,
    /// Whether all invariant factors beyond the `r`-th are units.
    pub multiplicity_ok: bool,
    pub checks: Vec<BoundCheck>,
}

impl BoundReport {
    pub fn passed(&self) -> bool {
        self.multiplicity_ok && self.checks.iter().all(|c| c.pass)
    }
}

fn bound_report<R: Pid>(
    m: &TorsionModule<R>,
    q: &Subspace<R>,
    i: &[usize],
    bound_of: impl Fn(usize) -> usize,
    lower: bool,
) -> Result<BoundReport> {
    let n = m.rank();
    let r = i.len();
    if r > n || i.iter().any(|&v| v == 0 || v > n) {
        return Err(Error::OutOfRange(format!("set {i:?} is not inside 1..={n}")));
    }
    let all = project_to_module(q, m)?.invariants();
    let multiplicity_ok = all.iter().skip(r).all(ExponentVector::is_unit);
    let invariants: Vec<ExponentVector> = all.into_iter().take(r).collect();
    let checks = (0..r)
        .map(|x| {
            let bound = m.theta()[bound_of(x) - 1].clone();
            let value = invariants.get(x).cloned().unwrap_or_else(ExponentVector::unit);
            let pass = if lower { bound.divides(&value) } else { value.divides(&bound) };
            BoundCheck { x: x + 1, bound, value, pass }
        })
        .collect();
    Ok(BoundReport { invariants, multiplicity_ok, checks })
}

/// For `Q ∈ 𝔖(E, I)` with `E` a big flag: `θ_{i_x} | β_x`.
pub fn verify_big_bounds<R: Pid>(m: &TorsionModule<R>, q: &Subspace<R>, i: &[usize]) -> Result<BoundReport> {
    bound_report(m, q, i, |x| i[x], true)
}

/// For `Q ∈ 𝔖(F, I)` with `F` a small flag: `α_x | θ_{N+1-i_{r+1-x}}`.
pub fn verify_small_bounds<R: Pid>(m: &TorsionModule<R>, q: &Subspace<R>, i: &[usize]) -> Result<BoundReport> {
    let n = m.rank();
    let r = i.len();
    bound_report(m, q, i, |x| n + 1 - i[r - 1 - x], false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use crate::lr::{horn_triples, tilde};
    use crate::module::base_change;
    use crate::ring::Integer;
    use crate::valuation::Atom;
    use proptest::prelude::*;
    use proptest::strategy::Strategy as Gen;
    use rand_core::RngCore;

    use super::Strategy;

    type Z = Integer;
    type Q = Frac<Z>;

    fn q(v: i64) -> Q {
        Q::from_ring(Z::new(v))
    }

    fn qv(v: &[i64]) -> Vec<Q> {
        v.iter().map(|&x| q(x)).collect()
    }

    fn zv(v: &[i64]) -> Vec<Z> {
        v.iter().map(|&x| Z::new(x)).collect()
    }

    fn random_flag(n: usize, rng: &mut ChaCha8Rng) -> Flag<Z> {
        loop {
            let vs: Vec<Vec<Q>> = (0..n).map(|_| (0..n).map(|_| Q::from_ring(Z::random_small(rng))).collect()).collect();
            if let Ok(f) = Flag::new(vs) {
                return f;
            }
        }
    }

    fn module(parts: &[u32]) -> TorsionModule<Z> {
        TorsionModule::primary(Atom(2), parts).unwrap()
    }

    #[test]
    fn trivial_memberships() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let e = random_flag(4, &mut rng);
        let qq = Subspace::new(&[qv(&[1, 2, 0, 5]), qv(&[0, 1, 1, 1])], 4);
        assert!(schubert_member(&qq, &e, &[3, 4]));
        assert!(schubert_member(&e.space(2), &e, &[1, 2]));
        assert!(!schubert_member(&qq, &e, &[1, 2]));
        assert!(!schubert_member(&qq, &e, &[1, 2, 3]));
    }

    #[test]
    fn dual_flag_is_orthogonal() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let e = random_flag(4, &mut rng);
        let d = e.dual();
        for k in 0..=4 {
            assert_eq!(d.space(k), e.space(4 - k).annihilator());
        }
        assert_eq!(d.dual(), e);
    }

    #[test]
    fn s1_and_trivial_witnesses() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let (e, f, g) = (random_flag(3, &mut rng), random_flag(3, &mut rng), random_flag(3, &mut rng));
        let w = intersect_witness(&e, &f, &g, &[3], &[2], &[2], 0).unwrap();
        assert_eq!(w.strategy, Strategy::S1);
        assert!(w.q.is_subspace_of(&f.space(2)) && w.q.is_subspace_of(&g.space(2)));
        let w = intersect_witness(&e, &f, &g, &[2, 3], &[2, 3], &[2, 3], 0);
        // three vacuous conditions have intersection number zero, not one
        assert!(matches!(w, Err(Error::Precondition(_))));
        let w = intersect_witness(&e, &f, &g, &[2, 3], &[1, 3], &[1, 3], 0).unwrap();
        assert_eq!(w.strategy, Strategy::S2);
        assert_eq!(w.q, f.space(1).sum(&g.space(1)));
    }

    #[test]
    fn every_horn_triple_has_a_witness_on_generic_flags() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for n in 1..=5 {
            for r in 1..=n.min(3) {
                for t in horn_triples(n, r).unwrap() {
                    let (e, f, g) = (random_flag(n, &mut rng), random_flag(n, &mut rng), random_flag(n, &mut rng));
                    let (j, k) = (tilde(&t.j, n), tilde(&t.k, n));
                    let w = intersect_witness(&e, &f, &g, &t.i, &j, &k, 7).unwrap_or_else(|err| panic!("{t}: {err}"));
                    assert!(schubert_member(&w.q, &e, &t.i));
                    assert!(schubert_member(&w.q, &f, &j));
                    assert!(schubert_member(&w.q, &g, &k));
                }
            }
        }
    }

    #[test]
    fn flags_of_diagonal_modules() {
        let m = module(&[3, 2, 1]);
        let b = m.standard_basis();
        assert_eq!(big_flag(&m, &b), Flag::standard(3));
        let s = small_flag(&m, &b);
        assert_eq!(s.vectors(), Flag::<Z>::standard(3).dual().vectors());
        assert_eq!(s.omega(), Some(&Z::new(64)));
        let mut perm = b.clone();
        perm.vectors.swap(0, 1);
        let pf = big_flag(&m, &perm);
        assert_eq!(pf.vectors()[0], qv(&[0, 1, 0]));
        let z = TorsionModule::<Z>::zero();
        assert_eq!(small_flag(&z, &z.standard_basis()).dim(), 0);
        // units at the end are filled with standard vectors
        let m = module(&[2, 0]);
        assert_eq!(big_flag(&m, &m.standard_basis()), Flag::standard(2));
    }

    #[test]
    fn projections() {
        let m = module(&[2, 1]);
        assert_eq!(project_to_module(&Subspace::full(2), &m).unwrap(), Submodule::whole(&m));
        assert!(project_to_module(&Subspace::zero(2), &m).unwrap().is_zero());
        let line = Subspace::new(&[qv(&[1, 0])], 2);
        let s = project_to_module(&line, &m).unwrap();
        assert_eq!(s.invariants()[0], ExponentVector::prime_power(Atom(2), 2));
        // the line through (1/2, 1/2) saturates to (1, 1)
        let half = Subspace::new(&[vec![Q::new(Z::new(1), Z::new(2)), Q::new(Z::new(1), Z::new(2))]], 2);
        let s = project_to_module(&half, &m).unwrap();
        assert!(s.contains(&zv(&[1, 1])));
    }

    #[test]
    fn big_bounds_with_equality_on_flag_spaces() {
        let m = TorsionModule::<Z>::new(vec![
            ExponentVector::from_pairs([(Atom(2), 3), (Atom(3), 1)]),
            ExponentVector::from_pairs([(Atom(2), 1), (Atom(3), 1)]),
            ExponentVector::prime_power(Atom(2), 1),
        ])
        .unwrap();
        let e = big_flag(&m, &m.standard_basis());
        for r in 1..=3 {
            let i: Vec<usize> = (1..=r).collect();
            let rep = verify_big_bounds(&m, &e.space(r), &i).unwrap();
            assert!(rep.passed());
            assert_eq!(rep.invariants, m.theta()[..r].to_vec());
        }
    }

    fn random_member(e: &Flag<Z>, i: &[usize], rng: &mut ChaCha8Rng) -> Subspace<Z> {
        loop {
            let rows: Vec<Vec<Q>> = i.iter().map(|&ix| random_in(&e.space(ix), rng)).collect();
            let s = Subspace::new(&rows, e.dim());
            if s.rank() == i.len() {
                return s;
            }
        }
    }

    fn random_set(n: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
        let r = 1 + (rng.next_u64() % n as u64) as usize;
        let mut all: Vec<usize> = (1..=n).collect();
        shuffle(&mut all, rng);
        let mut s = all[..r].to_vec();
        s.sort_unstable();
        s
    }

    fn arb_parts() -> impl Gen<Value = Vec<u32>> {
        proptest::collection::vec(0u32..4, 1..5).prop_map(|mut v| {
            v.sort_unstable_by(|a, b| b.cmp(a));
            v
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn member_of_first_condition_is_flag_space(seed in any::<u64>(), n in 1usize..5) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let e = random_flag(n, &mut rng);
            let r = 1 + (seed as usize % n);
            let i: Vec<usize> = (1..=r).collect();
            prop_assert!(schubert_member(&e.space(r), &e, &i));
            let top: Vec<usize> = (n - r + 1..=n).collect();
            let other = if seed % 3 == 0 { e.space(r) } else { random_member(&e, &top, &mut rng) };
            prop_assert_eq!(schubert_member(&other, &e, &i), other == e.space(r));
        }

        #[test]
        fn duality_preserves_membership(seed in any::<u64>(), n in 2usize..6) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let e = random_flag(n, &mut rng);
            let i = random_set(n, &mut rng);
            let mem = random_member(&e, &i, &mut rng);
            prop_assert!(schubert_member(&mem, &e, &i));
            if i.len() < n {
                prop_assert!(schubert_member(&mem.annihilator(), &e.dual(), &dual_set(&i, n)));
            }
            let other = random_set(n, &mut rng);
            if other.len() == i.len() && other.len() < n {
                prop_assert_eq!(
                    schubert_member(&mem, &e, &other),
                    schubert_member(&mem.annihilator(), &e.dual(), &dual_set(&other, n))
                );
            }
        }

        #[test]
        fn projection_of_flag_space_is_generated_submodule(parts in arb_parts(), seed in any::<u64>()) {
            let m = module(&parts);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let u = big_mixing(m.theta_elems(), &mut rng);
            let b = base_change(&m, &m.standard_basis(), &u).unwrap();
            let e = big_flag(&m, &b);
            for k in 1..=m.rank() {
                if m.theta_elems()[k - 1].is_unit() {
                    break;
                }
                let got = project_to_module(&e.space(k), &m).unwrap();
                let want = Submodule::new(&m, b.vectors[..k].to_vec()).unwrap();
                prop_assert_eq!(got, want);
            }
        }

        #[test]
        fn big_flag_bounds(parts in arb_parts(), seed in any::<u64>()) {
            let m = module(&parts);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let u = big_mixing(m.theta_elems(), &mut rng);
            let b = base_change(&m, &m.standard_basis(), &u).unwrap();
            let e = big_flag(&m, &b);
            let i = random_set(m.rank(), &mut rng);
            let mem = random_member(&e, &i, &mut rng);
            let rep = verify_big_bounds(&m, &mem, &i).unwrap();
            prop_assert!(rep.passed(), "{:?}", rep);
        }

        #[test]
        fn small_flag_bounds(parts in arb_parts(), seed in any::<u64>()) {
            let m = module(&parts);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let w = small_mixing(m.theta_elems(), &mut rng);
            let y = Matrix::<Z>::identity(m.rank()).mul(&w).unwrap();
            let basis = Basis { vectors: y.col_vecs(), annihilators: m.theta_elems().to_vec() };
            let f = small_flag(&m, &basis);
            let i = random_set(m.rank(), &mut rng);
            let mem = random_member(&f, &i, &mut rng);
            let rep = verify_small_bounds(&m, &mem, &i).unwrap();
            prop_assert!(rep.passed(), "{:?}", rep);
        }

        #[test]
        fn first_preliminary_bound(parts in arb_parts(), seed in any::<u64>()) {
            let m = module(&parts);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let e = big_flag(&m, &m.standard_basis());
            let idx = 1 + (seed as usize % m.rank());
            let line = random_member(&e, &[idx], &mut rng);
            let rep = verify_big_bounds(&m, &line, &[idx]).unwrap();
            prop_assert!(rep.passed());
        }
    }
}
