//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any criterion fails.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use flipk_core::colimit::{atom_colimit, Functor};
use flipk_core::functors::{oracle_tensor, oracle_tor, tensor, tor, tensor_atoms, tor_atoms, Limits};
use flipk_core::kunneth::{classify, flip_action, flip_is_identity, kunneth, necessary_check, PartKind, Stage, Verdict};
use flipk_core::resolution::TorPair;
use flipk_core::{Atom, Decomposition, GradedGroup, PresentationMatrix};
use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const ORDERS: [u64; 7] = [2, 3, 4, 6, 8, 9, 12];

type Criterion = (&'static str, fn() -> Outcome, Duration);

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(failures: Vec<String>, summary: String) -> Outcome {
    match failures.first() {
        None => Outcome { ok: true, detail: summary },
        Some(first) => Outcome {
            ok: false,
            detail: format!("{} failures, first: {first}", failures.len()),
        },
    }
}

fn gg(g0: impl IntoIterator<Item = Atom>, g1: impl IntoIterator<Item = Atom>) -> GradedGroup {
    GradedGroup::new(Decomposition::new(g0), Decomposition::new(g1))
}

fn cyc(n: u64) -> Decomposition {
    Decomposition::cyclic(n).unwrap()
}

fn bott_sign() -> Outcome {
    let a = gg([Atom::FreeZ], [Atom::FreeZ]);
    let s = flip_action(&a);
    let k0: Vec<_> = s.block_signs(0).iter().map(|b| (b.kind, b.i, b.j, b.sign)).collect();
    let want = vec![(PartKind::Tensor, 0, 0, 1), (PartKind::Tensor, 1, 1, -1)];
    let identity = flip_is_identity(&a).identity;
    let mut fails = Vec::new();
    if k0 != want {
        fails.push(format!("K0 block signs {k0:?}"));
    }
    if identity {
        fails.push("flip reported as identity".into());
    }
    outcome(fails, "K0 signs +1 on TensorPart(0,0), -1 on TensorPart(1,1); flip is not the identity".into())
}

fn cuntz_sign() -> Outcome {
    let mut fails = Vec::new();
    for n in 2..=12 {
        let a = GradedGroup::new(cyc(n), Decomposition::zero());
        let k = kunneth(&a, &a);
        if k.collapsed.g1 != cyc(n) || k.component(PartKind::Tor, 0, 0).value != cyc(n) {
            fails.push(format!("n={n}: K1 = {}", k.collapsed.g1));
        }
        let s = flip_action(&a);
        let k1: Vec<_> = s.block_signs(1).iter().map(|b| (b.kind, b.i, b.j, b.sign)).collect();
        if k1 != vec![(PartKind::Tor, 0, 0, -1)] {
            fails.push(format!("n={n}: K1 signs {k1:?}"));
        }
        if flip_is_identity(&a).identity != (n <= 2) {
            fails.push(format!("n={n}: flip identity mismatch"));
        }
    }
    outcome(fails, "n = 2..12: K1 = Z/n on TorPart(0,0) with sign -1; identity iff n <= 2".into())
}

/// Cyclic presentations with at most two summands of the given orders.
fn cyclic_families() -> Vec<Vec<u64>> {
    let mut out = vec![vec![]];
    for (i, &a) in ORDERS.iter().enumerate() {
        out.push(vec![a]);
        for &b in &ORDERS[i..] {
            out.push(vec![a, b]);
        }
    }
    out
}

fn diag(orders: &[u64], free: usize) -> PresentationMatrix {
    let mut o: Vec<BigInt> = orders.iter().map(|&x| BigInt::from(x)).collect();
    o.extend(std::iter::repeat_n(BigInt::from(0), free));
    PresentationMatrix::diagonal(&o)
}

fn eta_identity() -> Outcome {
    let mut fails = Vec::new();
    for n in 2..=12u64 {
        let z = diag(&[n], 0);
        match TorPair::new(&z, &z).eta() {
            Ok(e) if e.is_identity() => {}
            other => fails.push(format!("eta(Z/{n}, Z/{n}) = {other:?}")),
        }
    }
    let fam = cyclic_families();
    let mut checked = 0;
    for g in &fam {
        for h in &fam {
            let pair = TorPair::new(&diag(g, 0), &diag(h, 0));
            let run = || -> flipk_core::Result<Option<String>> {
                let e = pair.eta()?;
                let back = pair.swapped().eta()?;
                if !e.then(&back)?.is_identity() {
                    return Ok(Some("eta o eta != id".into()));
                }
                for seed in 0..20 {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    if pair.eta_randomized(&mut rng)? != e {
                        return Ok(Some(format!("lift seed {seed} changes eta")));
                    }
                }
                Ok(None)
            };
            match run() {
                Ok(None) => checked += 1,
                Ok(Some(msg)) => fails.push(format!("{g:?} x {h:?}: {msg}")),
                Err(e) => fails.push(format!("{g:?} x {h:?}: {e}")),
            }
        }
    }
    outcome(
        fails,
        format!("eta = id on Z/n, n = 2..12; eta o eta = id and 20 lift seeds agree on {checked} pairs"),
    )
}

fn f_g_family() -> Vec<(Vec<u64>, usize)> {
    cyclic_families()
        .into_iter()
        .flat_map(|c| (0..=2).map(move |r| (c.clone(), r)))
        .collect()
}

fn table_decomposition(orders: &[u64], free: usize) -> Decomposition {
    orders
        .iter()
        .fold(Decomposition::free(free), |acc, &n| acc.sum(&cyc(n)))
}

fn oracle_equivalence() -> Outcome {
    let lim = Limits::default();
    let fam = f_g_family();
    let mut fails = Vec::new();
    for (g, r) in &fam {
        let (pg, dg) = (diag(g, *r), table_decomposition(g, *r));
        for (h, s) in &fam {
            let (ph, dh) = (diag(h, *s), table_decomposition(h, *s));
            match oracle_tensor(&pg, &ph, &lim) {
                Ok(t) if t == tensor(&dg, &dh) => {}
                other => fails.push(format!("{dg} ⊗ {dh}: table {} vs oracle {other:?}", tensor(&dg, &dh))),
            }
            match oracle_tor(&pg, &ph, &lim) {
                Ok(t) if t == tor(&dg, &dh) => {}
                other => fails.push(format!("Tor({dg}, {dh}): table {} vs oracle {other:?}", tor(&dg, &dh))),
            }
        }
    }
    outcome(fails, format!("{} pairs, zero mismatches", fam.len() * fam.len()))
}

fn infinite_atoms() -> Vec<Atom> {
    let q = |s: &[u64]| Atom::QLoc(s.iter().copied().collect());
    vec![
        Atom::FreeZ,
        Atom::Cyclic { p: 2, a: 1 },
        Atom::Cyclic { p: 2, a: 3 },
        Atom::Cyclic { p: 3, a: 1 },
        Atom::Cyclic { p: 3, a: 2 },
        Atom::Cyclic { p: 5, a: 1 },
        Atom::Prufer(2),
        Atom::Prufer(3),
        Atom::Prufer(5),
        q(&[2]),
        q(&[3]),
        q(&[2, 3]),
        q(&[2, 5]),
        q(&[2, 3, 5]),
    ]
}

fn colimit_tables() -> Outcome {
    let lim = Limits::default();
    let atoms = infinite_atoms();
    let mut fails = Vec::new();
    let mut entries = 0;
    for a in &atoms {
        for b in &atoms {
            if a.is_finitely_generated() && b.is_finitely_generated() {
                continue;
            }
            for (f, table) in [(Functor::Tensor, tensor_atoms(a, b)), (Functor::Tor, tor_atoms(a, b))] {
                entries += 1;
                match atom_colimit(f, a, b, &lim) {
                    Ok(d) if d == table => {}
                    other => fails.push(format!("{f:?}({a}, {b}): table {table} vs colimit {other:?}")),
                }
            }
        }
    }
    let q2 = Atom::QLoc(BTreeSet::from([2]));
    let z8 = Atom::Cyclic { p: 2, a: 3 };
    if atom_colimit(Functor::Tensor, &q2, &z8, &lim).ok() != Some(Decomposition::zero()) {
        fails.push("Q[2^inf] ⊗ Z/8 != 0".into());
    }
    if atom_colimit(Functor::Tor, &Atom::Prufer(2), &z8, &lim).ok() != Some(Decomposition::atom(z8.clone())) {
        fails.push("Tor(QZ[2^inf], Z/8) != Z/8".into());
    }
    outcome(fails, format!("{entries} entries reproduced, incl. Q[2^inf] ⊗ Z/8 = 0, Tor(QZ[2^inf], Z/8) = Z/8"))
}

fn subsets(of: &[u64]) -> Vec<BTreeSet<u64>> {
    (0..1u32 << of.len())
        .map(|mask| (0..of.len()).filter(|i| mask >> i & 1 == 1).map(|i| of[i]).collect())
        .collect()
}

fn admissible_closure() -> Outcome {
    let primes = BTreeSet::from([2, 3, 5]);
    let mut fails = Vec::new();
    let mut cases = 0;
    for sn in subsets(&[2, 3, 5]) {
        for sm in subsets(&[2, 3, 5]).into_iter().filter(|s| s.is_subset(&sn)) {
            let g1 = sm.iter().map(|&p| Atom::Prufer(p));
            let mut samples = vec![(GradedGroup::new(Decomposition::zero(), Decomposition::new(g1.clone())), None)];
            let g0 = if sn.is_empty() { Atom::FreeZ } else { Atom::QLoc(sn.clone()) };
            samples.push((GradedGroup::new(Decomposition::atom(g0), Decomposition::new(g1)), Some(sn.clone())));
            for (a, n) in samples {
                cases += 1;
                if !flip_is_identity(&a).identity {
                    fails.push(format!("{a}: flip not identity"));
                }
                if !necessary_check(&a, &primes, 2).passed {
                    fails.push(format!("{a}: necessary check fails"));
                }
                match classify(&a) {
                    Verdict::Admissible(w) if w.m_support() == sm && w.n_support() == n => {}
                    v => fails.push(format!("{a}: {v}")),
                }
            }
        }
    }
    outcome(fails, format!("{cases} admissible samples pass flip, necessary check and classifier"))
}

fn equivalence() -> Outcome {
    let q = |s: &[u64]| Atom::QLoc(s.iter().copied().collect());
    let pool = [
        Atom::FreeZ,
        Atom::Cyclic { p: 2, a: 1 },
        Atom::Cyclic { p: 2, a: 2 },
        Atom::Cyclic { p: 3, a: 1 },
        Atom::Prufer(2),
        Atom::Prufer(3),
        q(&[2]),
        q(&[2, 3]),
    ];
    let slots: Vec<Option<&Atom>> = std::iter::once(None).chain(pool.iter().map(Some)).collect();
    let sides: Vec<Decomposition> = slots
        .iter()
        .flat_map(|x| slots.iter().map(move |y| Decomposition::new(x.iter().chain(y.iter()).map(|a| (*a).clone()))))
        .collect();
    let primes = BTreeSet::from([2, 3, 5]);
    let mut fails = Vec::new();
    let mut admissible = 0;
    for g0 in &sides {
        for g1 in &sides {
            let a = GradedGroup::new(g0.clone(), g1.clone());
            let c = classify(&a).is_admissible();
            let n = necessary_check(&a, &primes, 2);
            admissible += c as usize;
            if c != n.passed {
                fails.push(format!("{a}: classify {c}, necessary {} (stage {:?})", n.passed, n.failed_stage()));
            }
        }
    }
    let z2 = GradedGroup::new(cyc(2), Decomposition::zero());
    if !necessary_check(&z2, &primes, 0).passed {
        fails.push("(Z/2, 0) rejected at depth 0".into());
    }
    let deep = necessary_check(&z2, &primes, 2);
    if deep.passed || deep.failed_stage() != Some(Stage::Square(1)) {
        fails.push(format!("(Z/2, 0) at depth 2: {:?}", deep.failed_stage()));
    }
    outcome(
        fails,
        format!(
            "{} cases, {admissible} admissible, zero disagreements; (Z/2, 0) rejected first at square(1)",
            sides.len() * sides.len()
        ),
    )
}

fn ltor_rtor() -> Outcome {
    let fam = f_g_family();
    let mut fails = Vec::new();
    for (g, r) in &fam {
        for (h, s) in &fam {
            let pair = TorPair::new(&diag(g, *r), &diag(h, *s));
            match pair.ltor_rtor_iso().and_then(|m| m.is_isomorphism()) {
                Ok(true) => {}
                other => fails.push(format!("{g:?}+Z^{r} x {h:?}+Z^{s}: {other:?}")),
            }
        }
    }
    outcome(fails, format!("{} pairs, all verified isomorphisms", fam.len() * fam.len()))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("1 Bott sign", bott_sign, Duration::from_secs(1)),
        ("2 Cuntz sign", cuntz_sign, Duration::from_secs(1)),
        ("3 eta identity", eta_identity, Duration::from_secs(30)),
        ("4 functor oracle equivalence", oracle_equivalence, Duration::from_secs(60)),
        ("5 infinite-atom tables", colimit_tables, Duration::from_secs(10)),
        ("6 admissible list closure", admissible_closure, Duration::from_secs(10)),
        ("7 classifier-machinery equivalence", equivalence, Duration::from_secs(300)),
        ("8 LTor/RTor comparison", ltor_rtor, Duration::from_secs(30)),
    ];
    let mut all = true;
    for (name, run, limit) in criteria {
        let start = Instant::now();
        let out = run();
        let took = start.elapsed();
        let ok = out.ok && took <= limit;
        all &= ok;
        println!(
            "criterion {name}: {} ({:.2}s, limit {}s) {}",
            if ok { "PASS" } else { "FAIL" },
            took.as_secs_f64(),
            limit.as_secs(),
            out.detail
        );
    }
    if !all {
        std::process::exit(1);
    }
}
