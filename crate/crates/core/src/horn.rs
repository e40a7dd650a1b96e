//! The multiplicative Horn divisibility for a module, a submodule and a
//! Horn triple, with its certificate: a special submodule `𝓜` built from a
//! point of a triple Schubert intersection.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::SeedableRng;

use crate::error::{Error, Result};
use crate::lr::{intersection_number, tilde, SetTriple};
use crate::module::{
    base_change, complement, inverse_unimodular, lattice_intersection, lattice_quotient_invariants, lattice_sum,
    Basis, Submodule, TorsionModule,
};
use crate::ring::Pid;
use crate::schubert::{
    big_flag, big_mixing, intersect_witness, project_to_module, small_flag, small_mixing, Flag, Strategy, Subspace,
};
use crate::snf::snf;
use crate::valuation::{atoms_of, partition_at, per_atom, Atom, ExponentVector, Partition, PerAtom};

/// Reseeds allowed after the unperturbed attempt.
pub const MAX_RESEEDS: u32 = 3;

/// Sides of the inequality at one atom: `(Σ_I λ_i, Σ_J μ_j + Σ_K ν_k)`.
pub fn horn_sides(lambda: &PerAtom, mu: &PerAtom, nu: &PerAtom, t: &SetTriple) -> BTreeMap<Atom, (u32, u32)> {
    let sum = |p: &Partition, s: &[usize]| -> u32 { s.iter().map(|&x| p.get(x - 1)).sum() };
    atoms_of(&[lambda, mu, nu])
        .into_iter()
        .map(|a| {
            let left = sum(&partition_at(lambda, a), &t.i);
            let right = sum(&partition_at(mu, a), &t.j) + sum(&partition_at(nu, a), &t.k);
            (a, (left, right))
        })
        .collect()
}

/// `∏_{i∈I} θ_i | ∏_{j∈J} θ′_j ∏_{k∈K} θ″_k`, atom by atom.
pub fn horn_check(lambda: &PerAtom, mu: &PerAtom, nu: &PerAtom, t: &SetTriple) -> bool {
    horn_sides(lambda, mu, nu, t).values().all(|(l, r)| l <= r)
}

/// Whether the divisibility holds with equality at every atom.
pub fn horn_saturated(lambda: &PerAtom, mu: &PerAtom, nu: &PerAtom, t: &SetTriple) -> bool {
    horn_sides(lambda, mu, nu, t).values().all(|(l, r)| l == r)
}

/// One itemized verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &str, pass: bool, detail: String) -> Self {
        Self { name: name.into(), pass, detail }
    }
}

/// How the witness subspace was obtained.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessInfo<R: Pid> {
    pub q: Subspace<R>,
    pub strategy: Strategy,
    pub dual: bool,
    pub seed: u64,
    /// 0 for the unperturbed flags, then one per reseed.
    pub attempt: u32,
}

/// Complements produced by [`saturation_split`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Complements<R: Pid> {
    /// A complement of `𝓜` in `M`.
    pub in_module: Submodule<R>,
    /// A complement of `𝓜′` in `S`, as a submodule of `M`.
    pub in_sub: Submodule<R>,
    /// `M/S` in diagonal form.
    pub quotient: TorsionModule<R>,
    /// A complement of `𝓜″` in `M/S`.
    pub in_quotient: Submodule<R>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HornReport<R: Pid> {
    pub triple: SetTriple,
    /// Rank used for the construction, `max(N, rank M)`.
    pub n: usize,
    pub lambda: PerAtom,
    pub mu: PerAtom,
    pub nu: PerAtom,
    pub beta: Option<Vec<ExponentVector>>,
    pub beta_prime: Option<Vec<ExponentVector>>,
    pub beta_double_prime: Option<Vec<ExponentVector>>,
    pub checks: Vec<Check>,
    /// Equality in the Horn divisibility at every atom.
    pub saturation: bool,
    pub witness: Option<WitnessInfo<R>>,
    pub module: TorsionModule<R>,
    pub sub: Submodule<R>,
    /// `𝓜`, when a witness was found.
    pub special: Option<Submodule<R>>,
    /// `𝓜′ = 𝓜 ∩ S`.
    pub special_sub: Option<Submodule<R>>,
    pub complements: Option<Complements<R>>,
}

impl<R: Pid> HornReport<R> {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn witness_unavailable(&self) -> bool {
        self.witness.is_none()
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn pad<R: Pid>(m: &TorsionModule<R>, s: &Submodule<R>, n: usize) -> Result<(TorsionModule<R>, Submodule<R>)> {
    if n == m.rank() {
        return Ok((m.clone(), s.clone()));
    }
    let mut theta = m.theta().to_vec();
    theta.resize(n, ExponentVector::unit());
    let big = TorsionModule::new(theta)?;
    let gens = s
        .generators()
        .iter()
        .map(|g| {
            let mut g = g.clone();
            g.resize(n, R::zero());
            g
        })
        .collect();
    let sub = Submodule::new(&big, gens)?;
    Ok((big, sub))
}

fn show(v: &[ExponentVector]) -> String {
    let items: Vec<String> = v.iter().map(|e| format!("{e}")).collect();
    format!("[{}]", items.join(", "))
}

/// The three flags of the construction, optionally perturbed.
struct Flags<R: Pid> {
    e: Flag<R>,
    f: Flag<R>,
    g: Flag<R>,
}

fn build_flags<R: Pid>(m: &TorsionModule<R>, s: &Submodule<R>, rng: Option<&mut ChaCha8Rng>) -> Result<Flags<R>> {
    let n = m.rank();
    // submodule side: S ≅ R^N / Θ′R^N through x ↦ Θ″x, and U′Θ′V′ = D′
    let sub = snf(s.cofactor());
    let y_sub = s.lattice().mul(&inverse_unimodular(&sub.u)?)?;
    // quotient side: R^N / Θ″R^N with U″Θ″V″ = D″
    let quo = snf(s.lattice());
    let y_quo = inverse_unimodular(&quo.u)?;
    let (basis_e, y_sub, y_quo) = match rng {
        None => (m.standard_basis(), y_sub, y_quo),
        Some(rng) => {
            let u = big_mixing(m.theta_elems(), rng);
            let b = base_change(m, &m.standard_basis(), &u)?;
            let ws = small_mixing(&sub.factors, rng);
            let wq = small_mixing(&quo.factors, rng);
            (b, y_sub.mul(&ws)?, y_quo.mul(&wq)?)
        }
    };
    let m_sub = TorsionModule::new(sub.factors.iter().map(R::to_exponents).collect::<Result<Vec<_>>>()?)?;
    let m_quo = TorsionModule::new(quo.factors.iter().map(R::to_exponents).collect::<Result<Vec<_>>>()?)?;
    let e = big_flag(m, &basis_e);
    let f = small_flag(&m_sub, &Basis { vectors: y_sub.col_vecs(), annihilators: sub.factors.clone() });
    let g = small_flag(&m_quo, &Basis { vectors: y_quo.col_vecs(), annihilators: quo.factors.clone() });
    debug_assert_eq!(e.dim(), n);
    Ok(Flags { e, f, g })
}

fn divides_all(
    name: &str,
    values: &[ExponentVector],
    bounds: &[ExponentVector],
    value_divides_bound: bool,
) -> Check {
    let mut bad = Vec::new();
    for (x, (v, b)) in values.iter().zip(bounds).enumerate() {
        let ok = if value_divides_bound { v.divides(b) } else { b.divides(v) };
        if !ok {
            bad.push(format!("x={}: {v} vs {b}", x + 1));
        }
    }
    let detail = if bad.is_empty() {
        format!("values {} against {}", show(values), show(bounds))
    } else {
        format!("failed at {}", bad.join("; "))
    };
    Check::new(name, bad.is_empty(), detail)
}

/// Builds the Horn certificate for `(M, S)` and the triple `t`.
///
/// The triple must be a Horn triple (`c_{I J̃ K̃} = 1`). When the triple's
/// `N` differs from the rank of `M`, both are brought to the larger value
/// (trivial summands for `M`, the same sets for the triple). When no witness
/// is found the report carries only the witness-free checks.
pub fn analyze<R: Pid>(m: &TorsionModule<R>, s: &Submodule<R>, t: &SetTriple, seed: u64) -> Result<HornReport<R>> {
    let c = intersection_number(&t.reflected());
    if c != 1 {
        return Err(Error::Precondition(format!("{t} is not a Horn triple in N = {}: c = {c}", t.n)));
    }
    if s.lattice().rows() != m.rank() {
        return Err(Error::Dimension("submodule belongs to a module of another rank".into()));
    }
    let n = t.n.max(m.rank());
    let (m, s) = pad(m, s, n)?;
    let tt = t.embed(n)?;

    let lambda = m.partitions();
    let mu = s.partitions();
    let nu = s.quotient_partitions();
    let mut checks = Vec::new();

    let sides = horn_sides(&lambda, &mu, &nu, &tt);
    let detail: Vec<String> = sides.iter().map(|(a, (l, r))| format!("atom {a}: {l} <= {r}")).collect();
    checks.push(Check::new("horn", sides.values().all(|(l, r)| l <= r), detail.join("; ")));
    let weights_ok = atoms_of(&[&lambda, &mu, &nu]).into_iter().all(|a| {
        partition_at(&lambda, a).weight() == partition_at(&mu, a).weight() + partition_at(&nu, a).weight()
    });
    checks.push(Check::new("weight-identity", weights_ok, "|lambda| = |mu| + |nu| at every atom".into()));
    let saturation = sides.values().all(|(l, r)| l == r);

    let mut report = HornReport {
        triple: t.clone(),
        n,
        lambda,
        mu,
        nu,
        beta: None,
        beta_prime: None,
        beta_double_prime: None,
        checks,
        saturation,
        witness: None,
        module: m.clone(),
        sub: s.clone(),
        special: None,
        special_sub: None,
        complements: None,
    };

    let (j, k) = (tilde(&tt.j, n), tilde(&tt.k, n));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut last_err = String::new();
    let mut found = None;
    for attempt in 0..=MAX_RESEEDS {
        let flags = if attempt == 0 { build_flags(&m, &s, None)? } else { build_flags(&m, &s, Some(&mut rng))? };
        let wseed = seed.wrapping_add(attempt as u64);
        match intersect_witness(&flags.e, &flags.f, &flags.g, &tt.i, &j, &k, wseed) {
            Ok(w) => {
                found = Some(WitnessInfo { q: w.q, strategy: w.strategy, dual: w.dual, seed: wseed, attempt });
                break;
            }
            Err(e @ (Error::NotFound(_) | Error::BudgetExhausted(_))) => last_err = format!("{e}"),
            Err(e) => return Err(e),
        }
    }
    let Some(w) = found else {
        report.checks.push(Check::new(
            "witness",
            true,
            format!("witness-unavailable after {} attempts: {last_err}", MAX_RESEEDS + 1),
        ));
        return Ok(report);
    };

    let r = tt.r;
    let big = project_to_module(&w.q, &m)?;
    let inter = big.intersection(&m, &s)?;
    let theta = m.theta().to_vec();
    let theta_p = s.invariants();
    let theta_pp = s.quotient_invariants();

    let beta_all = big.invariants();
    let beta_p_all = inter.invariants();
    let quotient_lattice = lattice_sum(big.lattice(), s.lattice())?;
    let beta_pp_all: Vec<ExponentVector> = lattice_quotient_invariants(&quotient_lattice, s.lattice())?
        .iter()
        .map(R::to_exponents)
        .collect::<Result<_>>()?;

    let mult = [&beta_all, &beta_p_all, &beta_pp_all].iter().all(|v| v.iter().skip(r).all(ExponentVector::is_unit));
    report.checks.push(Check::new("multiplicity", mult, format!("at most {r} nontrivial invariant factors")));

    let beta: Vec<ExponentVector> = beta_all[..r].to_vec();
    let beta_p: Vec<ExponentVector> = beta_p_all[..r].to_vec();
    let beta_pp: Vec<ExponentVector> = beta_pp_all[..r].to_vec();
    let pick = |v: &[ExponentVector], s: &[usize]| -> Vec<ExponentVector> { s.iter().map(|&x| v[x - 1].clone()).collect() };
    report.checks.push(divides_all("item-1", &beta, &pick(&theta, &tt.i), false));
    report.checks.push(divides_all("item-2", &beta_p, &pick(&theta_p, &tt.j), true));
    report.checks.push(divides_all("item-3", &beta_pp, &pick(&theta_pp, &tt.k), true));

    let prod = |v: &[ExponentVector]| v.iter().fold(ExponentVector::unit(), |a, b| a.mul(b));
    let lhs = prod(&beta_all);
    let rhs = prod(&beta_p_all).mul(&prod(&beta_pp_all));
    report.checks.push(Check::new("item-4", lhs == rhs, format!("prod beta = {lhs}, prod beta' * prod beta'' = {rhs}")));

    // 𝓜′ computed directly as the image of Q ∩ Θ″R^N
    let q_lattice = crate::module::saturate(n, &w.q.basis().iter().map(|v| crate::linalg::primitive(v)).collect::<Vec<_>>())?;
    let direct = if q_lattice.cols() == 0 {
        Submodule::zero(&m)
    } else {
        Submodule::new(&m, lattice_intersection(&q_lattice, s.lattice())?.col_vecs())?
    };
    report.checks.push(Check::new(
        "projection-lemma",
        direct == inter,
        "image of Q ∩ lattice(S) equals M ∩ S".into(),
    ));
    report.checks.push(Check::new(
        "witness",
        true,
        format!("strategy {}{}, seed {}, attempt {}", w.strategy.as_str(), if w.dual { " (dual)" } else { "" }, w.seed, w.attempt),
    ));

    report.beta = Some(beta);
    report.beta_prime = Some(beta_p);
    report.beta_double_prime = Some(beta_pp);
    report.special = Some(big);
    report.special_sub = Some(inter);
    report.witness = Some(w);
    Ok(report)
}

/// Complements of `𝓜` in `M`, `𝓜′` in `S` and `𝓜″` in `M/S` for a
/// saturated report, each checked to have invariants `θ_i, i ∉ I` (resp.
/// `θ′_j, j ∉ J` and `θ″_k, k ∉ K`). Failures are recorded as failed checks.
pub fn saturation_split<R: Pid>(report: &HornReport<R>) -> Result<HornReport<R>> {
    if !report.saturation {
        return Err(Error::Precondition("the Horn divisibility is not an equality".into()));
    }
    let (Some(big), Some(inter)) = (&report.special, &report.special_sub) else {
        return Err(Error::Precondition("the report has no special submodule".into()));
    };
    let m = &report.module;
    let s = &report.sub;
    let n = report.n;
    let t = report.triple.embed(n)?;
    let mut out = report.clone();

    let unselected = |theta: &[ExponentVector], sel: &[usize]| -> PerAtom {
        let rest: Vec<ExponentVector> =
            (1..=theta.len()).filter(|x| !sel.contains(x)).map(|x| theta[x - 1].clone()).collect();
        per_atom(&rest)
    };
    let verdict = |name: &str, res: Result<PerAtom>, want: PerAtom| -> (Check, bool) {
        match res {
            Ok(got) => {
                let ok = got == want;
                let c = Check::new(name, ok, format!("complement invariants {got:?}, expected {want:?}"));
                (c, ok)
            }
            Err(e) => (Check::new(name, false, format!("{e}")), false),
        }
    };

    // 𝓜 in M
    let c_m = complement(m, big);
    let (chk, ok_m) =
        verdict("complement-module", c_m.as_ref().map(|c| c.partitions()).map_err(Clone::clone), unselected(m.theta(), &t.i));
    out.checks.push(chk);

    // 𝓜′ in S: coordinates Θ″⁻¹ then U′ into the diagonal model of S
    let sub = snf(s.cofactor());
    let m_sub = TorsionModule::new(sub.factors.iter().map(R::to_exponents).collect::<Result<Vec<_>>>()?)?;
    let coords = crate::module::lattice_coords(s.lattice(), &inter.lattice().clone())?;
    let in_sub_model = Submodule::new(&m_sub, sub.u.mul(&coords)?.col_vecs())?;
    let c_s = complement(&m_sub, &in_sub_model);
    let (chk, ok_s) = verdict(
        "complement-sub",
        c_s.as_ref().map(|c| c.partitions()).map_err(Clone::clone),
        unselected(&s.invariants(), &t.j),
    );
    out.checks.push(chk);

    // 𝓜″ in M/S: coordinates U″
    let quo = snf(s.lattice());
    let m_quo = TorsionModule::new(quo.factors.iter().map(R::to_exponents).collect::<Result<Vec<_>>>()?)?;
    let image = Submodule::new(&m_quo, quo.u.mul(big.lattice())?.col_vecs())?;
    let c_q = complement(&m_quo, &image);
    let (chk, ok_q) = verdict(
        "complement-quotient",
        c_q.as_ref().map(|c| c.partitions()).map_err(Clone::clone),
        unselected(&s.quotient_invariants(), &t.k),
    );
    out.checks.push(chk);

    if let (true, true, true, Ok(c_m), Ok(c_s), Ok(c_q)) = (ok_m, ok_s, ok_q, c_m, c_s, c_q) {
        // back from the model of S to M: x ↦ Θ″ U′⁻¹ x
        let back = s.lattice().mul(&inverse_unimodular(&sub.u)?)?;
        let gens: Vec<Vec<R>> = c_s
            .generators()
            .iter()
            .map(|g| back.mul_vec(g).map(|v| m.reduce(&v)))
            .collect::<Result<_>>()?;
        let in_sub = Submodule::new(m, gens)?;
        out.complements = Some(Complements { in_module: c_m, in_sub, quotient: m_quo, in_quotient: c_q });
    }
    Ok(out)
}

/// Runs [`analyze`] for every Horn triple with the given `r`, or every
/// `r` when `r` is `None`, in canonical order.
pub fn analyze_all<R: Pid>(
    m: &TorsionModule<R>,
    s: &Submodule<R>,
    r: Option<usize>,
    seed: u64,
) -> Result<Vec<HornReport<R>>> {
    let n = m.rank();
    let rs: Vec<usize> = match r {
        Some(r) => alloc::vec![r],
        None => (1..=n).collect(),
    };
    let mut out = Vec::new();
    for r in rs {
        for t in crate::lr::horn_triples(n, r)? {
            out.push(analyze(m, s, &t, seed)?);
        }
    }
    Ok(out)
}
