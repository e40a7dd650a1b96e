//! Finite torsion modules `R^N / diag(θ) R^N`, their submodules, quotients,
//! bases and complements.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg;
use crate::matrix::{subsets, Matrix};
use crate::ring::{Pid, Ring};
use crate::snf::{hermite_basis, hermite_columns, snf, snf_factors};
use crate::valuation::{self, Atom, ExponentVector, PerAtom};

/// `R^N / diag(θ₁, …, θ_N) R^N` with `θ_{n+1} | θ_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorsionModule<R: Pid> {
    theta: Vec<ExponentVector>,
    elems: Vec<R>,
}

impl<R: Pid> TorsionModule<R> {
    pub fn new(theta: Vec<ExponentVector>) -> Result<Self> {
        for (n, w) in theta.windows(2).enumerate() {
            if !w[1].divides(&w[0]) {
                return Err(Error::Domain(format!(
                    "theta[{}] = {} does not divide theta[{}] = {}",
                    n + 1,
                    w[1],
                    n,
                    w[0]
                )));
            }
        }
        let elems = theta.iter().map(R::from_exponents).collect::<Result<Vec<_>>>()?;
        Ok(Self { theta, elems })
    }

    /// Module with the given per-atom partitions, padded to rank `n`.
    pub fn from_partitions(parts: &PerAtom, n: usize) -> Result<Self> {
        Self::new(valuation::chain_from_partitions(parts, n)?)
    }

    /// Single-atom module with exponents `parts`, which must be decreasing.
    pub fn primary(atom: Atom, parts: &[u32]) -> Result<Self> {
        Self::new(parts.iter().map(|&e| ExponentVector::prime_power(atom, e)).collect())
    }

    pub fn zero() -> Self {
        Self { theta: Vec::new(), elems: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.theta.len()
    }

    pub fn theta(&self) -> &[ExponentVector] {
        &self.theta
    }

    /// The ring elements `θ_n`.
    pub fn theta_elems(&self) -> &[R] {
        &self.elems
    }

    pub fn atoms(&self) -> Vec<Atom> {
        let mut a: Vec<Atom> = self.theta.iter().flat_map(|t| t.atoms()).collect();
        a.sort();
        a.dedup();
        a
    }

    /// Per-atom partitions of `θ`.
    pub fn partitions(&self) -> PerAtom {
        valuation::per_atom(&self.theta)
    }

    pub fn is_trivial(&self) -> bool {
        self.theta.iter().all(ExponentVector::is_unit)
    }

    /// `diag(θ)`.
    pub fn presentation(&self) -> Matrix<R> {
        Matrix::diagonal(&self.elems)
    }

    /// Canonical representative of a module element.
    pub fn reduce(&self, v: &[R]) -> Vec<R> {
        v.iter().zip(&self.elems).map(|(x, t)| x.reduce(t)).collect()
    }

    pub fn is_zero_elem(&self, v: &[R]) -> bool {
        v.iter().zip(&self.elems).all(|(x, t)| t.divides(x))
    }

    fn check_len(&self, v: &[R]) -> Result<()> {
        if v.len() != self.rank() {
            return Err(Error::Dimension(format!("vector of length {} in a rank-{} module", v.len(), self.rank())));
        }
        Ok(())
    }

    /// Standard generators `e_n` with annihilators `θ_n`.
    pub fn standard_basis(&self) -> Basis<R> {
        let n = self.rank();
        Basis {
            vectors: (0..n).map(|i| unit_vector(n, i)).collect(),
            annihilators: self.elems.clone(),
        }
    }

    /// Replaces every `θ_n` by its part at `atom`.
    pub fn localize(&self, atom: Atom) -> Self {
        let theta: Vec<ExponentVector> =
            self.theta.iter().map(|t| ExponentVector::prime_power(atom, t.exponent(atom))).collect();
        Self::new(theta).expect("localization keeps the chain")
    }

    /// Total exponent of `atom` in the order of the module.
    pub fn weight(&self, atom: Atom) -> u32 {
        self.theta.iter().map(|t| t.exponent(atom)).sum()
    }
}

pub fn unit_vector<R: Ring>(n: usize, i: usize) -> Vec<R> {
    (0..n).map(|k| if k == i { R::one() } else { R::zero() }).collect()
}

/// Diagonalizes a square presentation. Returns the module and the matrix
/// `U` carrying coordinates of `R^N / P R^N` to the diagonal model.
pub fn jordan_model<R: Pid>(p: &Matrix<R>) -> Result<(TorsionModule<R>, Matrix<R>)> {
    if !p.is_square() {
        return Err(Error::Dimension(format!("presentation must be square, got {}x{}", p.rows(), p.cols())));
    }
    let r = snf(p);
    if r.factors.iter().any(R::is_zero) {
        return Err(Error::Singular("presentation has zero determinant; the module is infinite".into()));
    }
    let theta = r.factors.iter().map(R::to_exponents).collect::<Result<Vec<_>>>()?;
    Ok((TorsionModule::new(theta)?, r.u))
}

/// Solves `L x = b` for a square lower-triangular `L` with nonzero diagonal.
fn solve_lower<R: Pid>(l: &Matrix<R>, b: &[R]) -> Option<Vec<R>> {
    let n = l.rows();
    let mut x: Vec<R> = Vec::with_capacity(n);
    for i in 0..n {
        let mut acc = b[i].clone();
        for (k, xk) in x.iter().enumerate() {
            acc = acc.sub(&l[(i, k)].mul(xk));
        }
        x.push(acc.div_exact(&l[(i, i)])?);
    }
    Some(x)
}

/// Canonical basis (lower-triangular column Hermite form) of the lattice
/// spanned by the columns of `g`.
pub fn lattice_basis<R: Pid>(g: &Matrix<R>) -> Matrix<R> {
    hermite_basis(g).basis()
}

/// Coordinates `X` with `A X = B` for a full-rank canonical lattice basis
/// `A`; fails when some column of `B` is outside the lattice.
pub fn lattice_coords<R: Pid>(a: &Matrix<R>, b: &Matrix<R>) -> Result<Matrix<R>> {
    let cols = b
        .col_vecs()
        .iter()
        .map(|c| solve_lower(a, c).ok_or_else(|| Error::Domain("lattice is not contained in the basis lattice".into())))
        .collect::<Result<Vec<_>>>()?;
    Matrix::from_cols(&cols, a.cols())
}

/// Invariant factors of `A / B` for full-rank lattices `B ⊆ A`, given by
/// bases; largest first.
pub fn lattice_quotient_invariants<R: Pid>(a: &Matrix<R>, b: &Matrix<R>) -> Result<Vec<R>> {
    let ha = lattice_basis(a);
    let hb = lattice_basis(b);
    if ha.cols() != ha.rows() || hb.cols() != hb.rows() {
        return Err(Error::Singular("lattices must have full rank".into()));
    }
    Ok(snf_factors(&lattice_coords(&ha, &hb)?))
}

/// Sum of two lattices.
pub fn lattice_sum<R: Pid>(a: &Matrix<R>, b: &Matrix<R>) -> Result<Matrix<R>> {
    Ok(lattice_basis(&a.hstack(b)?))
}

/// Intersection of two lattices given by column bases.
pub fn lattice_intersection<R: Pid>(a: &Matrix<R>, b: &Matrix<R>) -> Result<Matrix<R>> {
    let n = a.rows();
    let ka = a.cols();
    // A x = B y  <=>  [A | -B] (x, y) = 0
    let stacked = a.hstack(&b.scale(&R::one().neg()))?;
    let h = hermite_columns(&stacked);
    let kernel_cols: Vec<Vec<R>> = (h.rank()..stacked.cols())
        .map(|c| {
            let w = h.w.col(c);
            a.mul_vec(&w[..ka]).expect("shapes agree")
        })
        .collect();
    if kernel_cols.is_empty() {
        return Ok(Matrix::zeros(n, 0));
    }
    Ok(lattice_basis(&Matrix::from_cols(&kernel_cols, n)?))
}

/// Saturation `(K ⊗ Frac R) ∩ R^N` of the lattice spanned by `gens`
/// (vectors of length `n`), as a canonical basis.
pub fn saturate<R: Pid>(n: usize, gens: &[Vec<R>]) -> Result<Matrix<R>> {
    if gens.is_empty() {
        return Ok(Matrix::zeros(n, 0));
    }
    let g = Matrix::from_cols(gens, n)?;
    // rows spanning the annihilator of K over the fraction field
    let ann: Vec<Vec<R>> = linalg::kernel_fraction(&g.transpose()).iter().map(|v| linalg::primitive(v)).collect();
    if ann.is_empty() {
        return Ok(Matrix::identity(n));
    }
    let a = Matrix::from_rows(&ann, n)?;
    let h = hermite_columns(&a);
    let kernel: Vec<Vec<R>> = (h.rank()..n).map(|c| h.w.col(c)).collect();
    if kernel.is_empty() {
        return Ok(Matrix::zeros(n, 0));
    }
    Ok(lattice_basis(&Matrix::from_cols(&kernel, n)?))
}

/// `d(K)`: the product of the invariant factors of `K ⊆ saturate(K)`.
pub fn d_invariant<R: Pid>(n: usize, gens: &[Vec<R>]) -> Result<ExponentVector> {
    if gens.is_empty() {
        return Ok(ExponentVector::unit());
    }
    let g = Matrix::from_cols(gens, n)?;
    let prod = snf_factors(&g).iter().filter(|f| !f.is_zero()).fold(R::one(), |acc, f| acc.mul(f));
    prod.to_exponents()
}

pub fn is_saturated<R: Pid>(n: usize, gens: &[Vec<R>]) -> Result<bool> {
    Ok(d_invariant(n, gens)?.is_unit())
}

/// Submodule of a [`TorsionModule`], stored with its canonical lattice
/// `Θ″` (with `ΘR^N ⊆ Θ″R^N`) and cofactor `Θ′ = Θ″⁻¹Θ`.
#[derive(Debug, Clone)]
pub struct Submodule<R: Pid> {
    generators: Vec<Vec<R>>,
    lattice: Matrix<R>,
    cofactor: Matrix<R>,
}

/// Submodules are equal when their lattices are.
impl<R: Pid> PartialEq for Submodule<R> {
    fn eq(&self, other: &Self) -> bool {
        self.lattice == other.lattice
    }
}

impl<R: Pid> Eq for Submodule<R> {}

impl<R: Pid> Submodule<R> {
    pub fn new(m: &TorsionModule<R>, generators: Vec<Vec<R>>) -> Result<Self> {
        for g in &generators {
            m.check_len(g)?;
        }
        let generators: Vec<Vec<R>> = generators.iter().map(|g| m.reduce(g)).collect();
        let n = m.rank();
        let mut cols = generators.clone();
        cols.extend((0..n).map(|i| {
            let mut e = unit_vector::<R>(n, i);
            e[i] = m.elems[i].clone();
            e
        }));
        let lattice = lattice_basis(&Matrix::from_cols(&cols, n)?);
        let cofactor = lattice_coords(&lattice, &m.presentation())?;
        Ok(Self { generators, lattice, cofactor })
    }

    /// Submodule `L / ΘR^N` for a lattice `L ⊇ ΘR^N` given by column
    /// generators.
    pub fn from_lattice(m: &TorsionModule<R>, lattice: &Matrix<R>) -> Result<Self> {
        let s = Self::new(m, lattice.col_vecs())?;
        if lattice_basis(lattice) != s.lattice {
            return Err(Error::Domain("lattice does not contain the relation lattice".into()));
        }
        Ok(s)
    }

    pub fn zero(m: &TorsionModule<R>) -> Self {
        Self::new(m, Vec::new()).expect("empty generator list")
    }

    pub fn whole(m: &TorsionModule<R>) -> Self {
        let n = m.rank();
        Self::new(m, (0..n).map(|i| unit_vector(n, i)).collect()).expect("unit vectors")
    }

    pub fn generators(&self) -> &[Vec<R>] {
        &self.generators
    }

    /// Canonical lattice basis `Θ″`.
    pub fn lattice(&self) -> &Matrix<R> {
        &self.lattice
    }

    /// `Θ′` with `Θ = Θ″ Θ′`.
    pub fn cofactor(&self) -> &Matrix<R> {
        &self.cofactor
    }

    /// Generators with the canonical lattice columns, reduced, nonzero only.
    pub fn canonical_generators(&self, m: &TorsionModule<R>) -> Vec<Vec<R>> {
        self.lattice.col_vecs().iter().map(|c| m.reduce(c)).filter(|c| !m.is_zero_elem(c)).collect()
    }

    pub fn contains(&self, v: &[R]) -> bool {
        v.len() == self.lattice.rows() && solve_lower(&self.lattice, v).is_some()
    }

    pub fn is_submodule_of(&self, other: &Self) -> bool {
        self.lattice.col_vecs().iter().all(|c| other.contains(c))
    }

    /// Invariant factors of the submodule, largest first, length `N`.
    pub fn invariants(&self) -> Vec<ExponentVector> {
        snf_factors(&self.cofactor).iter().map(|f| f.to_exponents().expect("nonzero factor")).collect()
    }

    /// Invariant factors of the quotient.
    pub fn quotient_invariants(&self) -> Vec<ExponentVector> {
        snf_factors(&self.lattice).iter().map(|f| f.to_exponents().expect("nonzero factor")).collect()
    }

    pub fn partitions(&self) -> PerAtom {
        valuation::per_atom(&self.invariants())
    }

    pub fn quotient_partitions(&self) -> PerAtom {
        valuation::per_atom(&self.quotient_invariants())
    }

    /// The submodule as an abstract module, with a basis of it inside the
    /// parent: `vectors[j]` has annihilator `θ′_j`, largest first.
    pub fn jordan_basis(&self, m: &TorsionModule<R>) -> Result<(TorsionModule<R>, Basis<R>)> {
        let r = snf(&self.cofactor);
        let uinv = inverse_unimodular(&r.u)?;
        let y = self.lattice.mul(&uinv)?;
        let theta = r.factors.iter().map(R::to_exponents).collect::<Result<Vec<_>>>()?;
        let vectors = y.col_vecs().iter().map(|c| m.reduce(c)).collect();
        Ok((TorsionModule::new(theta)?, Basis { vectors, annihilators: r.factors }))
    }

    /// The quotient as an abstract module, with lifts to `R^N` of a basis of
    /// it: `vectors[j]` has order `θ″_j` modulo the submodule.
    pub fn quotient_basis(&self) -> Result<(TorsionModule<R>, Basis<R>)> {
        let r = snf(&self.lattice);
        let uinv = inverse_unimodular(&r.u)?;
        let theta = r.factors.iter().map(R::to_exponents).collect::<Result<Vec<_>>>()?;
        Ok((TorsionModule::new(theta)?, Basis { vectors: uinv.col_vecs(), annihilators: r.factors }))
    }

    pub fn sum(&self, m: &TorsionModule<R>, other: &Self) -> Result<Self> {
        Self::from_lattice(m, &lattice_sum(&self.lattice, &other.lattice)?)
    }

    pub fn intersection(&self, m: &TorsionModule<R>, other: &Self) -> Result<Self> {
        Self::from_lattice(m, &lattice_intersection(&self.lattice, &other.lattice)?)
    }

    pub fn is_zero(&self) -> bool {
        self.invariants().iter().all(ExponentVector::is_unit)
    }

    /// Per-atom exponent of the order of the submodule.
    pub fn weight(&self, atom: Atom) -> u32 {
        self.invariants().iter().map(|t| t.exponent(atom)).sum()
    }
}

/// Inverse of a unimodular matrix via its adjugate.
pub fn inverse_unimodular<R: Pid>(u: &Matrix<R>) -> Result<Matrix<R>> {
    let d = u.det()?;
    if !d.is_unit() {
        return Err(Error::Singular("matrix is not unimodular".into()));
    }
    Ok(u.adjugate()?.scale(&d.unit_inv()))
}

/// Generators `vectors[n]` with annihilators `annihilators[n]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Basis<R: Pid> {
    pub vectors: Vec<Vec<R>>,
    pub annihilators: Vec<R>,
}

/// Whether `vs` is a basis: the vectors generate `M` and `θ_n vs[n] = 0`.
pub fn is_basis<R: Pid>(m: &TorsionModule<R>, vs: &[Vec<R>]) -> bool {
    if vs.len() != m.rank() || vs.iter().any(|v| v.len() != m.rank()) {
        return false;
    }
    let annihilated = vs.iter().zip(&m.elems).all(|(v, t)| {
        let tv: Vec<R> = v.iter().map(|x| x.mul(t)).collect();
        m.is_zero_elem(&tv)
    });
    if !annihilated {
        return false;
    }
    match Submodule::new(m, vs.to_vec()) {
        Ok(s) => s.lattice.det().map(|d| d.is_unit()).unwrap_or(false),
        Err(_) => false,
    }
}

/// New basis `h′_n = Σ_m u[n][m] h_m`, after checking that `det u` is prime
/// to `θ₁` and that `θ_m/θ_n` divides `u[n][m]` below the diagonal.
pub fn base_change<R: Pid>(m: &TorsionModule<R>, basis: &Basis<R>, u: &Matrix<R>) -> Result<Basis<R>> {
    let n = m.rank();
    if u.rows() != n || u.cols() != n || basis.vectors.len() != n {
        return Err(Error::Dimension(format!("base change needs an {n}x{n} matrix and {n} vectors")));
    }
    let mut problems: Vec<String> = Vec::new();
    if n > 0 {
        let d = u.det()?;
        if !d.gcd(&m.elems[0]).is_unit() {
            problems.push(format!("det(u) = {d} shares a factor with theta_1 = {}", m.elems[0]));
        }
    }
    for row in 0..n {
        for col in 0..row {
            let q = m.elems[col].div_exact(&m.elems[row]).expect("chain");
            if !q.divides(&u[(row, col)]) {
                problems.push(format!("theta_{}/theta_{} = {q} does not divide u[{}][{}] = {}", col + 1, row + 1, row + 1, col + 1, u[(row, col)]));
            }
        }
    }
    if !problems.is_empty() {
        return Err(Error::BaseChange(problems));
    }
    let vectors: Vec<Vec<R>> = (0..n)
        .map(|row| {
            let mut acc = vec![R::zero(); n];
            for col in 0..n {
                for (a, h) in acc.iter_mut().zip(&basis.vectors[col]) {
                    *a = a.add(&u[(row, col)].mul(h));
                }
            }
            m.reduce(&acc)
        })
        .collect();
    if !is_basis(m, &vectors) {
        return Err(Error::Precondition("the input family is not a basis".into()));
    }
    Ok(Basis { vectors, annihilators: m.elems.clone() })
}

/// Lexicographically first `r`-subset of `allowed` whose minor in `u`
/// (an `r x N` matrix) is prime to the atom's prime.
pub fn select_unimodular_minor<R: Pid>(u: &Matrix<R>, allowed: &[usize], atom: Atom) -> Result<Vec<usize>> {
    let p = R::atom_element(atom)?;
    let r = u.rows();
    let mut allowed = allowed.to_vec();
    allowed.sort_unstable();
    allowed.dedup();
    let rows: Vec<usize> = (0..r).collect();
    for pick in subsets(allowed.len(), r) {
        let cols: Vec<usize> = pick.iter().map(|&i| allowed[i]).collect();
        let d = u.submatrix(&rows, &cols).det()?;
        if !p.divides(&d) {
            return Ok(cols);
        }
    }
    Err(Error::NotFound(format!("no {r}x{r} minor prime to atom {atom}")))
}

/// Atom-wise localizations of `(M, S)`.
pub fn primary_decompose<R: Pid>(m: &TorsionModule<R>, s: &Submodule<R>) -> Result<BTreeMap<Atom, (TorsionModule<R>, Submodule<R>)>> {
    let mut out = BTreeMap::new();
    for atom in m.atoms() {
        let mp = m.localize(atom);
        let sp = Submodule::new(&mp, s.canonical_generators(m))?;
        out.insert(atom, (mp, sp));
    }
    Ok(out)
}

/// CRT idempotents `e_n`: `e_n ≡ 1` modulo the `atom` part of `θ_n` and
/// `e_n ≡ 0` modulo the rest of `θ_n`.
fn idempotents<R: Pid>(m: &TorsionModule<R>, atom: Atom) -> Result<Vec<R>> {
    let p = R::atom_element(atom)?;
    m.elems
        .iter()
        .zip(&m.theta)
        .map(|(t, tv)| {
            let pe = p.pow(tv.exponent(atom));
            let c = t.div_exact(&pe).expect("prime power divides");
            // s*pe + t*c = 1, so t*c is the idempotent
            let (g, _, tc) = pe.ext_gcd(&c);
            debug_assert!(g.is_one());
            Ok(tc.mul(&c))
        })
        .collect()
}

/// Embeds a submodule of `M.localize(atom)` back into `M`.
pub fn embed_primary<R: Pid>(m: &TorsionModule<R>, atom: Atom, gens: &[Vec<R>]) -> Result<Vec<Vec<R>>> {
    let e = idempotents(m, atom)?;
    Ok(gens.iter().map(|g| m.reduce(&g.iter().zip(&e).map(|(x, y)| x.mul(y)).collect::<Vec<_>>())).collect())
}

/// Which route produced a complement.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComplementRoute {
    /// Basis completion by coordinate vectors.
    Completion,
    /// Lifting a quotient basis to elements of the right orders.
    Lifting,
}

/// A direct complement `C` of `S` in `M` (`S ∩ C = 0`, `S + C = M`).
///
/// A complement exists exactly when the invariant partitions of `S` and
/// `M/S` merge to those of `M`; otherwise `NoComplement` is returned.
pub fn complement<R: Pid>(m: &TorsionModule<R>, s: &Submodule<R>) -> Result<Submodule<R>> {
    complement_with_route(m, s).map(|(c, _)| c)
}

pub fn complement_with_route<R: Pid>(m: &TorsionModule<R>, s: &Submodule<R>) -> Result<(Submodule<R>, ComplementRoute)> {
    let lam = m.partitions();
    let mu = s.partitions();
    let nu = s.quotient_partitions();
    for atom in m.atoms() {
        let merged = valuation::merge(&valuation::partition_at(&mu, atom), &valuation::partition_at(&nu, atom));
        if merged != valuation::partition_at(&lam, atom) {
            return Err(Error::NoComplement(format!(
                "at atom {atom}: submodule {} and quotient {} do not merge to {}",
                valuation::partition_at(&mu, atom),
                valuation::partition_at(&nu, atom),
                valuation::partition_at(&lam, atom)
            )));
        }
    }
    let mut route = ComplementRoute::Completion;
    let mut gens: Vec<Vec<R>> = Vec::new();
    for (atom, (mp, sp)) in primary_decompose(m, s)? {
        let local = match complete_basis(&mp, &sp, atom)? {
            Some(c) => c,
            None => {
                route = ComplementRoute::Lifting;
                lift_complement(&mp, &sp)?
            }
        };
        gens.extend(embed_primary(m, atom, &local)?);
    }
    let c = Submodule::new(m, gens)?;
    verify_complement(m, s, &c)?;
    Ok((c, route))
}

/// Checks `S + C = M` and `|S||C| = |M|` at every atom.
pub fn verify_complement<R: Pid>(m: &TorsionModule<R>, s: &Submodule<R>, c: &Submodule<R>) -> Result<()> {
    let sum = s.sum(m, c)?;
    if sum != Submodule::whole(m) {
        return Err(Error::NoComplement("S + C is a proper submodule".into()));
    }
    for atom in m.atoms() {
        if s.weight(atom) + c.weight(atom) != m.weight(atom) {
            return Err(Error::NoComplement(format!("S and C intersect at atom {atom}")));
        }
    }
    Ok(())
}

/// Primary case: replace coordinate vectors by a basis of `S`, choosing the
/// replaced coordinates through unimodular minors, one order class at a
/// time. Returns the spanning coordinate vectors of the complement when the
/// completed family is a basis.
fn complete_basis<R: Pid>(m: &TorsionModule<R>, s: &Submodule<R>, atom: Atom) -> Result<Option<Vec<Vec<R>>>> {
    let n = m.rank();
    let (_, sb) = s.jordan_basis(m)?;
    let p = R::atom_element(atom)?;
    let exps: Vec<u32> = m.theta.iter().map(|t| t.exponent(atom)).collect();
    let mut chosen: Vec<Option<usize>> = vec![None; n];
    let mut used: Vec<bool> = vec![false; n];
    let orders: Vec<u32> = sb.annihilators.iter().map(|a| a.valuation(&p)).collect::<Result<_>>()?;
    let mut classes: Vec<u32> = orders.iter().copied().filter(|&e| e > 0).collect();
    classes.sort_unstable_by(|a, b| b.cmp(a));
    classes.dedup();
    for e in classes {
        let rows: Vec<usize> = (0..orders.len()).filter(|&j| orders[j] == e).collect();
        let allowed: Vec<usize> = (0..n).filter(|&k| exps[k] == e && !used[k]).collect();
        if allowed.len() < rows.len() {
            return Ok(None);
        }
        // coefficients of the class vectors, scaled to order p^e coordinates
        let u = Matrix::from_fn(rows.len(), n, |i, k| sb.vectors[rows[i]][k].clone());
        let Ok(cols) = select_unimodular_minor(&u, &allowed, atom) else { return Ok(None) };
        for (&j, &k) in rows.iter().zip(&cols) {
            chosen[k] = Some(j);
            used[k] = true;
        }
    }
    let family: Vec<Vec<R>> =
        (0..n).map(|k| match chosen[k] { Some(j) => sb.vectors[j].clone(), None => unit_vector(n, k) }).collect();
    if !is_basis(m, &family) {
        return Ok(None);
    }
    Ok(Some((0..n).filter(|&k| !used[k]).map(|k| unit_vector(n, k)).collect()))
}

/// Exact route: for each quotient basis element `ḡ` of order `d`, find a
/// lift `g ≡ ḡ (mod S)` with `d g = 0`, i.e. `ḡ ∈ L + Λ_d` where
/// `Λ_d = diag(θ_n / gcd(θ_n, d))R^N`.
fn lift_complement<R: Pid>(m: &TorsionModule<R>, s: &Submodule<R>) -> Result<Vec<Vec<R>>> {
    let n = m.rank();
    let (_, qb) = s.quotient_basis()?;
    let mut out = Vec::new();
    for (gbar, d) in qb.vectors.iter().zip(&qb.annihilators) {
        if d.is_unit() {
            continue;
        }
        let lam: Vec<R> = m.elems.iter().map(|t| t.div_exact(&t.gcd(d)).expect("gcd divides")).collect();
        let g = s.lattice.hstack(&Matrix::diagonal(&lam))?;
        let h = hermite_columns(&g);
        let x = h.solve(gbar).ok_or_else(|| Error::NoComplement("quotient generator has no lift of its order".into()))?;
        let mut coeffs = vec![R::zero(); g.cols()];
        for (c, xv) in x.iter().enumerate() {
            for (k, w) in coeffs.iter_mut().enumerate() {
                *w = w.add(&h.w[(k, c)].mul(xv));
            }
        }
        let lift: Vec<R> = (0..n).map(|i| lam[i].mul(&coeffs[n + i])).collect();
        out.push(m.reduce(&lift));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{GfPoly, Integer};
    use crate::valuation::Partition;
    use proptest::prelude::*;

    const P: Atom = Atom(2);

    fn iv(v: &[i64]) -> Vec<Integer> {
        v.iter().map(|&x| Integer::new(x)).collect()
    }

    fn im(rows: usize, cols: usize, v: &[i64]) -> Matrix<Integer> {
        Matrix::new(rows, cols, iv(v)).unwrap()
    }

    fn pm(parts: &[u32]) -> TorsionModule<Integer> {
        TorsionModule::primary(P, parts).unwrap()
    }

    fn pe(e: u32) -> ExponentVector {
        ExponentVector::prime_power(P, e)
    }

    #[test]
    fn jordan_model_examples() {
        let (m, _) = jordan_model(&Matrix::diagonal(&iv(&[4, 2]))).unwrap();
        assert_eq!(m.theta(), &[pe(2), pe(1)]);
        let uni = im(2, 2, &[1, 1, 0, 1]);
        let (m, _) = jordan_model(&im(2, 2, &[2, 0, 0, 2]).mul(&uni).unwrap()).unwrap();
        assert_eq!(m.theta(), &[pe(1), pe(1)]);
        let (m, _) = jordan_model(&im(2, 2, &[2, 1, 0, 2])).unwrap();
        assert_eq!(m.theta(), &[pe(2), ExponentVector::unit()]);
        assert!(matches!(jordan_model(&im(2, 2, &[1, 2, 2, 4])), Err(Error::Singular(_))));
    }

    #[test]
    fn jordan_transform_maps_relations() {
        let p = im(2, 2, &[2, 1, 0, 2]);
        let (m, u) = jordan_model(&p).unwrap();
        // U P R^2 lands in the relation lattice of the model
        let up = u.mul(&p).unwrap();
        for c in up.col_vecs() {
            assert!(m.is_zero_elem(&c));
        }
    }

    #[test]
    fn invariants_examples() {
        let m = pm(&[2, 1]);
        assert_eq!(Submodule::whole(&m).invariants(), m.theta());
        assert!(Submodule::zero(&m).invariants().iter().all(ExponentVector::is_unit));
        let s = Submodule::new(&m, vec![iv(&[2, 0])]).unwrap();
        assert_eq!(s.invariants(), vec![pe(1), pe(0)]);
        assert_eq!(s.quotient_invariants(), vec![pe(1), pe(1)]);
        assert_eq!(Submodule::zero(&m).quotient_invariants(), m.theta());
        assert!(Submodule::whole(&m).quotient_invariants().iter().all(ExponentVector::is_unit));
        // Θ = Θ″ Θ′
        assert_eq!(s.lattice().mul(s.cofactor()).unwrap(), m.presentation());
    }

    #[test]
    fn basis_examples() {
        let m = pm(&[2, 1]);
        assert!(is_basis(&m, &m.standard_basis().vectors));
        assert!(!is_basis(&m, &[iv(&[0, 0]), iv(&[0, 0])]));
        // right generation, wrong annihilation
        assert!(!is_basis(&m, &[iv(&[0, 1]), iv(&[1, 0])]));
        let b = base_change(&m, &m.standard_basis(), &im(2, 2, &[1, 0, 2, 1])).unwrap();
        assert!(is_basis(&m, &b.vectors));
        assert_eq!(base_change(&m, &m.standard_basis(), &Matrix::identity(2)).unwrap(), m.standard_basis());
        let upper = base_change(&m, &m.standard_basis(), &im(2, 2, &[1, 5, 0, 1])).unwrap();
        assert!(is_basis(&m, &upper.vectors));
        match base_change(&m, &m.standard_basis(), &im(2, 2, &[2, 0, 1, 1])) {
            Err(Error::BaseChange(v)) => assert_eq!(v.len(), 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn complement_examples() {
        let m = pm(&[1, 1]);
        let s = Submodule::new(&m, vec![iv(&[1, 0])]).unwrap();
        let c = complement(&m, &s).unwrap();
        verify_complement(&m, &s, &c).unwrap();
        assert!(s.intersection(&m, &c).unwrap().is_zero());
        let z = Submodule::zero(&m);
        assert_eq!(complement(&m, &z).unwrap(), Submodule::whole(&m));
        let cyc = pm(&[2]);
        let ps = Submodule::new(&cyc, vec![iv(&[2])]).unwrap();
        assert!(matches!(complement(&cyc, &ps), Err(Error::NoComplement(_))));
    }

    #[test]
    fn complement_multi_atom() {
        // Z/12 ⊕ Z/2, S = <(6, 1)>
        let m = TorsionModule::<Integer>::new(vec![
            ExponentVector::from_pairs([(Atom(2), 2), (Atom(3), 1)]),
            ExponentVector::prime_power(Atom(2), 1),
        ])
        .unwrap();
        let s = Submodule::new(&m, vec![iv(&[6, 1])]).unwrap();
        let c = complement(&m, &s).unwrap();
        assert!(s.intersection(&m, &c).unwrap().is_zero());
        assert_eq!(s.sum(&m, &c).unwrap(), Submodule::whole(&m));
    }

    #[test]
    fn primary_decompose_examples() {
        let m = TorsionModule::<Integer>::new(vec![ExponentVector::from_pairs([(Atom(2), 1), (Atom(3), 1)])]).unwrap();
        let s = Submodule::zero(&m);
        let d = primary_decompose(&m, &s).unwrap();
        assert_eq!(d.len(), 2);
        assert_eq!(d[&Atom(2)].0.theta(), &[ExponentVector::prime_power(Atom(2), 1)]);
        assert_eq!(d[&Atom(3)].0.theta(), &[ExponentVector::prime_power(Atom(3), 1)]);
        let single = pm(&[3, 1]);
        assert_eq!(primary_decompose(&single, &Submodule::zero(&single)).unwrap().len(), 1);
    }

    #[test]
    fn saturation_examples() {
        let full = vec![iv(&[1, 0]), iv(&[0, 1])];
        assert!(d_invariant(2, &full).unwrap().is_unit());
        assert!(is_saturated(2, &full).unwrap());
        let sub = vec![iv(&[2, 0]), iv(&[0, 1])];
        assert_eq!(d_invariant(2, &sub).unwrap(), pe(1));
        assert_eq!(saturate(2, &sub).unwrap(), Matrix::identity(2));
        let diag = vec![iv(&[1, 1])];
        assert!(is_saturated(2, &diag).unwrap());
        assert_eq!(saturate(2, &diag).unwrap(), im(2, 1, &[1, 1]));
        assert_eq!(saturate(2, &[iv(&[4, 6])]).unwrap(), im(2, 1, &[2, 3]));
    }

    #[test]
    fn select_minor_examples() {
        let u = im(2, 3, &[1, 0, 0, 0, 1, 0]);
        assert_eq!(select_unimodular_minor(&u, &[0, 1, 2], P).unwrap(), vec![0, 1]);
        let v = im(1, 2, &[2, 1]);
        assert_eq!(select_unimodular_minor(&v, &[0, 1], P).unwrap(), vec![1]);
        assert!(select_unimodular_minor(&im(1, 2, &[2, 4]), &[0, 1], P).is_err());
    }

    #[test]
    fn polynomial_modules() {
        type F = GfPoly<2>;
        let x = Atom(2);
        let m = TorsionModule::<F>::primary(x, &[2, 1]).unwrap();
        let s = Submodule::new(&m, vec![vec![F::x(), F::zero()]]).unwrap();
        assert_eq!(s.invariants()[0], ExponentVector::prime_power(x, 1));
        assert_eq!(valuation::partition_at(&s.quotient_partitions(), x), Partition::new(vec![1, 1]).unwrap());
    }

    fn arb_module() -> impl Strategy<Value = TorsionModule<Integer>> {
        proptest::collection::vec((0u32..3, 0u32..2), 1..4).prop_map(|mut v| {
            v.sort_by(|a, b| b.cmp(a));
            let mut theta: Vec<ExponentVector> =
                v.iter().map(|&(a, b)| ExponentVector::from_pairs([(Atom(2), a), (Atom(3), b)])).collect();
            // enforce the chain by taking running gcds from the top
            for i in 1..theta.len() {
                theta[i] = theta[i].gcd(&theta[i - 1]);
            }
            TorsionModule::new(theta).unwrap()
        })
    }

    fn arb_pair() -> impl Strategy<Value = (TorsionModule<Integer>, Submodule<Integer>)> {
        arb_module().prop_flat_map(|m| {
            let n = m.rank();
            proptest::collection::vec(proptest::collection::vec(-12i64..13, n), 0..3)
                .prop_map(move |gens| {
                    let s = Submodule::new(&m, gens.iter().map(|g| iv(g)).collect()).unwrap();
                    (m.clone(), s)
                })
        })
    }

    proptest! {
        #[test]
        fn weight_identity_and_interlacing((m, s) in arb_pair()) {
            let inv = s.invariants();
            let q = s.quotient_invariants();
            for atom in m.atoms() {
                prop_assert_eq!(m.weight(atom), s.weight(atom) + q.iter().map(|t| t.exponent(atom)).sum::<u32>());
            }
            for n in 0..m.rank() {
                prop_assert!(inv[n].divides(&m.theta()[n]));
                prop_assert!(q[n].divides(&m.theta()[n]));
            }
        }

        #[test]
        fn primary_round_trip((m, s) in arb_pair()) {
            let d = primary_decompose(&m, &s).unwrap();
            for (atom, (mp, sp)) in &d {
                prop_assert_eq!(valuation::partition_at(&mp.partitions(), *atom), valuation::partition_at(&m.partitions(), *atom));
                prop_assert_eq!(valuation::partition_at(&sp.partitions(), *atom), valuation::partition_at(&s.partitions(), *atom));
                prop_assert_eq!(valuation::partition_at(&sp.quotient_partitions(), *atom), valuation::partition_at(&s.quotient_partitions(), *atom));
            }
            // reassembly recovers S
            let mut gens = Vec::new();
            for (atom, (_, sp)) in &d {
                gens.extend(embed_primary(&m, *atom, &sp.canonical_generators(&d[atom].0)).unwrap());
            }
            prop_assert_eq!(Submodule::new(&m, gens).unwrap(), s);
        }

        #[test]
        fn complement_is_verified((m, s) in arb_pair()) {
            let splits = m.atoms().iter().all(|&a| {
                valuation::merge(&valuation::partition_at(&s.partitions(), a), &valuation::partition_at(&s.quotient_partitions(), a))
                    == valuation::partition_at(&m.partitions(), a)
            });
            match complement(&m, &s) {
                Ok(c) => {
                    prop_assert!(splits);
                    prop_assert!(s.intersection(&m, &c).unwrap().is_zero());
                    prop_assert_eq!(s.sum(&m, &c).unwrap(), Submodule::whole(&m));
                    for a in m.atoms() {
                        prop_assert_eq!(
                            valuation::merge(&valuation::partition_at(&s.partitions(), a), &valuation::partition_at(&c.partitions(), a)),
                            valuation::partition_at(&m.partitions(), a)
                        );
                    }
                }
                Err(Error::NoComplement(_)) => prop_assert!(!splits),
                Err(e) => prop_assert!(false, "{e}"),
            }
        }

        #[test]
        fn base_change_keeps_basis(m in arb_module(), seed in proptest::collection::vec(-5i64..6, 16)) {
            let n = m.rank();
            let t = m.theta_elems();
            // unit lower-triangular with admissible entries times unit upper-triangular
            let lower = Matrix::from_fn(n, n, |i, j| match i.cmp(&j) {
                core::cmp::Ordering::Equal => Integer::one(),
                core::cmp::Ordering::Less => Integer::zero(),
                core::cmp::Ordering::Greater => t[j].div_exact(&t[i]).unwrap().mul(&Integer::new(seed[i * 4 + j])),
            });
            let upper = Matrix::from_fn(n, n, |i, j| match i.cmp(&j) {
                core::cmp::Ordering::Equal => Integer::one(),
                core::cmp::Ordering::Greater => Integer::zero(),
                core::cmp::Ordering::Less => Integer::new(seed[i * 4 + j]),
            });
            let u = lower.mul(&upper).unwrap();
            let b = base_change(&m, &m.standard_basis(), &u).unwrap();
            prop_assert!(is_basis(&m, &b.vectors));
        }

        #[test]
        fn coefficient_divisibility(m in arb_module(), u in proptest::collection::vec(-30i64..31, 3)) {
            // Σ u_n e_n ∈ ΘR^N forces θ_n | u_n
            let v: Vec<Integer> = iv(&u[..m.rank()]);
            if m.is_zero_elem(&v) {
                for (x, t) in v.iter().zip(m.theta_elems()) {
                    prop_assert!(t.divides(x));
                }
            }
            let scaled: Vec<Integer> = v.iter().zip(m.theta_elems()).map(|(x, t)| x.mul(t)).collect();
            prop_assert!(m.is_zero_elem(&scaled));
        }

        #[test]
        fn saturation_agrees_with_smith(gens in proptest::collection::vec(proptest::collection::vec(-6i64..7, 3), 1..3)) {
            let g: Vec<Vec<Integer>> = gens.iter().map(|v| iv(v)).collect();
            let sat = saturate(3, &g).unwrap();
            let gm = Matrix::from_cols(&g, 3).unwrap();
            let r = snf(&gm);
            let uinv = inverse_unimodular(&r.u).unwrap();
            let cols: Vec<Vec<Integer>> = r.factors.iter().enumerate().filter(|(_, f)| !f.is_zero()).map(|(i, _)| uinv.col(i)).collect();
            let expect = if cols.is_empty() { Matrix::zeros(3, 0) } else { lattice_basis(&Matrix::from_cols(&cols, 3).unwrap()) };
            prop_assert_eq!(&sat, &expect);
            prop_assert!(is_saturated(3, &sat.col_vecs()).unwrap());
        }
    }
}
