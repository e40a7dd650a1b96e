//! Reduced invariant suites behind `hornlab selftest`. Each suite compares
//! the library with a brute-force count or a closed formula.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use hornlab_core::finite::PGroup;
use hornlab_core::horn::{analyze_all, horn_check};
use hornlab_core::inverse::{realize, JordanData};
use hornlab_core::lr::{horn_triples, lr_coefficient};
use hornlab_core::module::{Submodule, TorsionModule};
use hornlab_core::snf::snf;
use hornlab_core::{Atom, Integer, Matrix, Partition, PerAtom, Pid, Ring};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::format::{CheckJson, SelftestJson};
use crate::Rendered;

type Z = Integer;
const TWO: Atom = Atom(2);

fn at_two(p: &Partition) -> PerAtom {
    let mut m = PerAtom::new();
    if !p.is_empty() {
        m.insert(TWO, p.clone());
    }
    m
}

fn small(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> i64 {
    lo + (rng.next_u64() % (hi - lo + 1) as u64) as i64
}

fn snf_suite(seed: u64) -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for case in 0..100 {
        let (r, c) = (small(&mut rng, 1, 5) as usize, small(&mut rng, 1, 5) as usize);
        let a = Matrix::new(r, c, (0..r * c).map(|_| Z::new(small(&mut rng, -20, 20))).collect()).unwrap();
        let res = snf(&a);
        let ok = res.u.mul(&a).unwrap().mul(&res.v).unwrap() == res.d
            && res.u.det().unwrap().is_unit()
            && res.v.det().unwrap().is_unit();
        if !ok {
            return Err(format!("case {case}: transforms do not reproduce D"));
        }
        let mut prod = Z::one();
        for (k, f) in res.factors.iter().rev().enumerate() {
            prod = prod.mul(f);
            if prod.normalized() != a.minors_gcd(k + 1).unwrap().normalized() {
                return Err(format!("case {case}: partial product {} differs from the minors gcd", k + 1));
            }
        }
    }
    Ok("100 matrices".into())
}

fn all_partitions(n: u32) -> Vec<Partition> {
    Partition::all_of_weight(n)
}

/// Pieri: `c^λ_{μ,(k)}` is one exactly when `λ/μ` is a horizontal strip of size `k`.
fn lr_suite() -> Result<String, String> {
    let mut count = 0;
    for w in 0..=6 {
        for lam in all_partitions(w) {
            for wm in 0..=w {
                for mu in all_partitions(wm) {
                    for nu in all_partitions(w - wm) {
                        let c = lr_coefficient(&lam, &mu, &nu);
                        if c != lr_coefficient(&lam, &nu, &mu) {
                            return Err(format!("c^{lam}_{mu},{nu} is not symmetric"));
                        }
                        if nu.len() <= 1 {
                            let strip = mu.len() <= lam.len()
                                && (0..lam.len()).all(|i| mu.get(i) <= lam.get(i) && (i == 0 || lam.get(i) <= mu.get(i - 1)));
                            if c != strip as u64 {
                                return Err(format!("Pieri fails for {lam}/{mu}"));
                            }
                        }
                        count += 1;
                    }
                }
            }
        }
    }
    Ok(format!("{count} coefficients"))
}

fn triples_suite() -> Result<String, String> {
    let got: BTreeSet<String> = horn_triples(2, 1).map_err(|e| e.to_string())?.iter().map(ToString::to_string).collect();
    let want: BTreeSet<String> = ["1;1;1", "2;1;2", "2;2;1"].iter().map(|s| s.to_string()).collect();
    if got != want {
        return Err(format!("N = 2 table is {got:?}"));
    }
    for n in 1..=5 {
        for t in horn_triples(n, 1).map_err(|e| e.to_string())? {
            if t.i[0] + 1 != t.j[0] + t.k[0] {
                return Err(format!("unexpected triple {t}"));
            }
        }
        if horn_triples(n, 1).unwrap().len() != n * (n + 1) / 2 {
            return Err(format!("wrong number of r = 1 triples at N = {n}"));
        }
    }
    Ok("N = 2 table and r = 1 rule".into())
}

fn enumerated_suite() -> Result<String, String> {
    let mut pairs = 0;
    for w in 1..=5 {
        for lam in all_partitions(w) {
            let n = lam.len();
            let triples: Vec<_> = (1..=n).flat_map(|r| horn_triples(n, r).unwrap()).collect();
            let g = PGroup::new(2, lam.parts()).map_err(|e| e.to_string())?;
            let m = TorsionModule::<Z>::primary(TWO, lam.parts()).unwrap();
            for gens in g.subgroups() {
                let h = g.span(&gens);
                let (mu, nu) = (g.type_of(&h), g.cotype_of(&h));
                let s = Submodule::new(&m, gens.iter().map(|v| v.iter().map(|&x| Z::new(x as i64)).collect()).collect())
                    .map_err(|e| e.to_string())?;
                if s.partitions() != at_two(&mu) || s.quotient_partitions() != at_two(&nu) {
                    return Err(format!("{lam}: invariants of {gens:?} disagree with counting"));
                }
                for t in &triples {
                    if !horn_check(&at_two(&lam), &at_two(&mu), &at_two(&nu), t) {
                        return Err(format!("{lam} {mu} {nu}: {t} fails"));
                    }
                }
                pairs += 1;
            }
        }
    }
    Ok(format!("{pairs} enumerated pairs"))
}

fn witness_suite(seed: u64) -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x77);
    let mut reports = 0;
    for case in 0..12 {
        let n = small(&mut rng, 1, 4) as usize;
        let mut parts: Vec<u32> = (0..n).map(|_| small(&mut rng, 0, 3) as u32).collect();
        parts.sort_unstable_by(|a, b| b.cmp(a));
        let m = TorsionModule::<Z>::primary(TWO, &parts).unwrap();
        let gens = (0..small(&mut rng, 0, 2)).map(|_| (0..n).map(|_| Z::new(small(&mut rng, -6, 6))).collect()).collect();
        let s = Submodule::new(&m, gens).unwrap();
        for rep in analyze_all(&m, &s, None, rng.next_u64()).map_err(|e| e.to_string())? {
            if !rep.passed() || rep.witness.is_none() {
                return Err(format!("case {case}, {}: {:?}", rep.triple, rep.checks));
            }
            reports += 1;
        }
    }
    Ok(format!("{reports} reports"))
}

fn inverse_suite() -> Result<String, String> {
    let mut data = 0;
    for w in 0..=4 {
        for lam in all_partitions(w) {
            let g = PGroup::new(2, lam.parts()).map_err(|e| e.to_string())?;
            let seen: BTreeSet<(Partition, Partition)> = g
                .subgroups()
                .iter()
                .map(|gens| {
                    let h = g.span(gens);
                    (g.type_of(&h), g.cotype_of(&h))
                })
                .collect();
            for wm in 0..=w {
                for mu in all_partitions(wm) {
                    for nu in all_partitions(w - wm) {
                        let d = JordanData::primary(TWO, lam.clone(), mu.clone(), nu.clone());
                        let expected = seen.contains(&(mu.clone(), nu.clone()));
                        match realize::<Z>(&d) {
                            Ok((m, s)) => {
                                let back = JordanData::new(m.partitions(), s.partitions(), s.quotient_partitions());
                                if !expected || back != d {
                                    return Err(format!("{lam} {mu} {nu}: realized incorrectly"));
                                }
                            }
                            Err(_) if !expected => {}
                            Err(e) => return Err(format!("{lam} {mu} {nu}: {e}")),
                        }
                        data += 1;
                    }
                }
            }
        }
    }
    Ok(format!("{data} data"))
}

pub(crate) fn run(seed: u64) -> Rendered {
    let suites: Vec<(&str, Result<String, String>)> = vec![
        ("snf", snf_suite(seed)),
        ("lr", lr_suite()),
        ("horn-triples", triples_suite()),
        ("horn-check", enumerated_suite()),
        ("witness", witness_suite(seed)),
        ("inverse", inverse_suite()),
    ];
    let mut text = String::new();
    let mut checks = Vec::new();
    for (name, res) in suites {
        let (pass, detail) = match res {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        let _ = writeln!(text, "selftest {name}: {} ({detail})", if pass { "PASS" } else { "FAIL" });
        checks.push(CheckJson { name: name.into(), pass, detail });
    }
    let code = if checks.iter().all(|c| c.pass) { 0 } else { 1 };
    let json = serde_json::to_value(SelftestJson { suites: checks }).expect("serializes");
    Rendered { code, text, json }
}
