use std::collections::BTreeSet;
use std::fmt::Write as _;

use flipk_core::colimit::{atom_colimit, Functor};
use flipk_core::functors::{oracle_tensor, oracle_tor, tensor, tor, tensor_atoms, tor_atoms, Limits};
use flipk_core::kunneth::{
    basic_restrictions_check, classify, flip_action, flip_is_identity, kunneth, necessary_check, Verdict,
};
use flipk_core::linalg::{smith_normal_form, IntMatrix};
use flipk_core::resolution::{free_resolution, presentation_of, TorGroup, TorMap, TorPair};
use flipk_core::{decompose, Decomposition, Error, GradedGroup, PresentationMatrix, Result};
use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::render::{graded, ints, ints_text, matrix, matrix_text};

/// A result document and its plain-text rendering.
pub struct Output {
    pub text: String,
    pub json: Value,
}

fn output(verb: &str, text: String, mut body: Value) -> Output {
    body["verb"] = json!(verb);
    Output { text, json: body }
}

/// Parses `[[1,2],[3,4]]`; entries may be JSON integers or decimal strings.
pub fn parse_matrix(s: &str, generators: Option<usize>) -> Result<IntMatrix> {
    let bad = |msg: &str| Error::Parse {
        token: s.to_string(),
        message: msg.to_string(),
    };
    let v: Value = serde_json::from_str(s).map_err(|e| bad(&format!("not a JSON matrix: {e}")))?;
    let rows = v.as_array().ok_or_else(|| bad("expected an array of rows"))?;
    let mut out: Vec<Vec<BigInt>> = Vec::with_capacity(rows.len());
    for r in rows {
        let r = r.as_array().ok_or_else(|| bad("expected each row to be an array"))?;
        let mut row = Vec::with_capacity(r.len());
        for x in r {
            let n = match x {
                Value::Number(n) if n.is_i64() => BigInt::from(n.as_i64().unwrap()),
                Value::String(t) => t.parse().map_err(|_| bad(&format!("`{t}` is not an integer")))?,
                other => return Err(bad(&format!("`{other}` is not an integer"))),
            };
            row.push(n);
        }
        out.push(row);
    }
    let cols = match (out.first(), generators) {
        (Some(r), Some(g)) if r.len() != g => return Err(bad("row length differs from --generators")),
        (Some(r), _) => r.len(),
        (None, Some(g)) => g,
        (None, None) => return Err(bad("an empty matrix needs --generators")),
    };
    if out.iter().any(|r| r.len() != cols) {
        return Err(bad("rows have different lengths"));
    }
    Ok(IntMatrix::from_vectors(cols, &out))
}

pub fn snf(m: &IntMatrix) -> Output {
    let s = smith_normal_form(m);
    let factors = s.invariant_factors();
    let text = format!(
        "D = {}\nU = {}\nV = {}\ninvariant factors: {}",
        matrix_text(&s.d),
        matrix_text(&s.u),
        matrix_text(&s.v),
        ints_text(&factors)
    );
    output(
        "snf",
        text,
        json!({
            "input": matrix(m),
            "d": matrix(&s.d),
            "u": matrix(&s.u),
            "v": matrix(&s.v),
            "rank": s.rank(),
            "invariant_factors": ints(&factors),
        }),
    )
}

pub fn decomposition(d: &Decomposition) -> Output {
    let atoms: Vec<String> = d.atoms().iter().map(ToString::to_string).collect();
    output("decompose", d.to_string(), json!({ "group": d.to_string(), "atoms": atoms }))
}

pub fn presented(m: &IntMatrix) -> Result<Output> {
    let p = PresentationMatrix::new(m.cols(), m.clone())?;
    Ok(decomposition(&decompose(&p)))
}

pub fn functor(verb: &str, left: &Decomposition, right: &Decomposition) -> Output {
    let (symbol, value) = match verb {
        "tensor" => (format!("{left} ⊗ {right}"), tensor(left, right)),
        _ => (format!("Tor({left}, {right})"), tor(left, right)),
    };
    output(
        verb,
        format!("{symbol} = {value}"),
        json!({ "left": left.to_string(), "right": right.to_string(), "result": value.to_string() }),
    )
}

pub fn oracle_compare(left: &Decomposition, right: &Decomposition, limits: &Limits) -> Result<Output> {
    let (pl, pr) = (presentation_of(left)?, presentation_of(right)?);
    let t = (tensor(left, right), oracle_tensor(&pl, &pr, limits)?);
    let r = (tor(left, right), oracle_tor(&pl, &pr, limits)?);
    let agree = t.0 == t.1 && r.0 == r.1;
    if !agree {
        return Err(Error::Internal(format!(
            "table and oracle disagree: tensor {} vs {}, Tor {} vs {}",
            t.0, t.1, r.0, r.1
        )));
    }
    let text = format!(
        "tensor: table {} | oracle {}\nTor: table {} | oracle {}\nagree: {agree}",
        t.0, t.1, r.0, r.1
    );
    Ok(output(
        "oracle-compare",
        text,
        json!({
            "left": left.to_string(),
            "right": right.to_string(),
            "tensor": { "table": t.0.to_string(), "oracle": t.1.to_string() },
            "tor": { "table": r.0.to_string(), "oracle": r.1.to_string() },
            "agree": agree,
        }),
    ))
}

pub fn resolve(g: &Decomposition, limits: &Limits) -> Result<Output> {
    let p = presentation_of(g)?;
    limits.check("resolution", &[p.size()])?;
    let r = free_resolution(&p);
    let text = format!(
        "0 -> Z^{} -> Z^{} -> {} -> 0\ninclusion = {}",
        r.p_rank(),
        r.q_rank(),
        r.cokernel(),
        matrix_text(r.inclusion())
    );
    Ok(output(
        "resolve",
        text,
        json!({
            "group": g.to_string(),
            "p_rank": r.p_rank(),
            "q_rank": r.q_rank(),
            "inclusion": matrix(r.inclusion()),
            "cokernel": r.cokernel().to_string(),
        }),
    ))
}

fn tor_pair(left: &Decomposition, right: &Decomposition, limits: &Limits) -> Result<TorPair> {
    let (pl, pr) = (presentation_of(left)?, presentation_of(right)?);
    limits.check("Tor computation", &[pl.size() * pr.size()])?;
    Ok(TorPair::new(&pl, &pr))
}

pub fn tor_side(verb: &str, left: &Decomposition, right: &Decomposition, limits: &Limits) -> Result<Output> {
    let pair = tor_pair(left, right, limits)?;
    let t: TorGroup = if verb == "ltor" { pair.ltor()? } else { pair.rtor()? };
    let basis: Vec<Vec<BigInt>> = t.basis().iter().map(|e| e.coordinates().to_vec()).collect();
    let mut text = format!(
        "{}({left}, {right}) = {}\norders: {}",
        if verb == "ltor" { "LTor" } else { "RTor" },
        t.decomposition(),
        ints_text(&t.orders())
    );
    for b in &basis {
        let _ = write!(text, "\nbasis element: {}", ints_text(b));
    }
    Ok(output(
        verb,
        text,
        json!({
            "left": left.to_string(),
            "right": right.to_string(),
            "group": t.decomposition().to_string(),
            "orders": ints(&t.orders()),
            "basis": basis.iter().map(|b| ints(b)).collect::<Vec<_>>(),
        }),
    ))
}

pub fn eta(left: &Decomposition, right: &Decomposition, seed: Option<u64>, limits: &Limits) -> Result<Output> {
    let pair = tor_pair(left, right, limits)?;
    let map: TorMap = match seed {
        Some(s) => pair.eta_randomized(&mut ChaCha8Rng::seed_from_u64(s))?,
        None => pair.eta()?,
    };
    let identity = map.is_identity();
    let text = format!(
        "eta: LTor({left}, {right}) -> LTor({right}, {left})\nsource orders: {}\ntarget orders: {}\nmatrix: {}\nidentity: {identity}",
        ints_text(&map.source_orders),
        ints_text(&map.target_orders),
        matrix_text(&map.matrix)
    );
    Ok(output(
        "eta",
        text,
        json!({
            "left": left.to_string(),
            "right": right.to_string(),
            "source_orders": ints(&map.source_orders),
            "target_orders": ints(&map.target_orders),
            "matrix": matrix(&map.matrix),
            "identity": identity,
            "seed": seed,
        }),
    ))
}

pub fn kunneth_doc(a: &GradedGroup, b: &GradedGroup) -> Output {
    let k = kunneth(a, b);
    let mut text = format!("K_*(A ⊗ B) with A = {a}, B = {b}");
    let mut comps = Vec::new();
    for c in &k.components {
        let _ = write!(text, "\n{}({},{}) in K{}: {}", c.kind, c.i, c.j, c.degree, c.value);
        comps.push(json!({
            "kind": c.kind.to_string(),
            "i": c.i,
            "j": c.j,
            "degree": c.degree,
            "value": c.value.to_string(),
        }));
    }
    let _ = write!(text, "\nK0 = {}\nK1 = {}", k.collapsed.g0, k.collapsed.g1);
    output(
        "kunneth",
        text,
        json!({ "a": graded(a), "b": graded(b), "components": comps, "collapsed": graded(&k.collapsed) }),
    )
}

pub fn flip(a: &GradedGroup) -> Output {
    let s = flip_action(a);
    let identity = flip_is_identity(a).identity;
    let mut text = format!("flip on K_*(A ⊗ A), A = {a}");
    for d in 0..2u8 {
        let blocks: Vec<String> = s
            .block_signs(d)
            .iter()
            .map(|b| format!("{}({},{}) {:+}", b.kind, b.i, b.j, b.sign))
            .collect();
        let _ = write!(text, "\nK{d} block signs: {}", if blocks.is_empty() { "none".into() } else { blocks.join(", ") });
    }
    let _ = write!(text, "\nflip is identity: {identity}");
    let blocks: Vec<Value> = s
        .blocks
        .iter()
        .map(|b| {
            json!({
                "kind": b.kind.to_string(), "i": b.i, "j": b.j, "degree": b.degree,
                "sign": b.sign, "value": b.value.to_string(),
            })
        })
        .collect();
    let entries: Vec<Value> = s
        .entries
        .iter()
        .map(|e| {
            json!({
                "source": e.source.to_string(), "target": e.target.to_string(),
                "sign": e.sign, "value": e.value.to_string(),
            })
        })
        .collect();
    output(
        "flip",
        text,
        json!({ "a": graded(a), "blocks": blocks, "entries": entries, "identity": identity }),
    )
}

pub fn check_flip(a: &GradedGroup) -> Output {
    let cert = flip_is_identity(a);
    let restrictions = basic_restrictions_check(a);
    let certificate: Vec<String> = cert.violations.iter().map(ToString::to_string).collect();
    let pairs: Vec<String> = restrictions.violations.iter().map(ToString::to_string).collect();
    let mut text = format!("flip is identity: {}", cert.identity);
    for v in &certificate {
        let _ = write!(text, "\nviolation: {v}");
    }
    let _ = write!(text, "\nbasic restrictions: {}", if pairs.is_empty() { "pass" } else { "fail" });
    output(
        "check-flip",
        text,
        json!({
            "a": graded(a),
            "identity": cert.identity,
            "certificate": certificate,
            "restrictions": pairs,
        }),
    )
}

pub fn classify_doc(a: &GradedGroup) -> Output {
    let v = classify(a);
    let mut body = match &v {
        Verdict::Admissible(w) => json!({
            "verdict": "Admissible",
            "m": w.m.to_string(),
            "n": w.n.as_ref().map(ToString::to_string),
            "clause": null,
            "detail": null,
        }),
        Verdict::NotAdmissible { clause, detail } => json!({
            "verdict": "NotAdmissible",
            "m": null,
            "n": null,
            "clause": clause.to_string(),
            "detail": detail,
        }),
    };
    body["a"] = graded(a);
    output("classify", v.to_string(), body)
}

pub fn necessary(a: &GradedGroup, primes: &BTreeSet<u64>, depth: usize) -> Output {
    let out = necessary_check(a, primes, depth);
    let failed = out.failed_stage().map(|s| s.to_string());
    let mut text = format!(
        "necessary check: {}",
        match &failed {
            None => "pass".to_string(),
            Some(s) => format!("fail at {s}"),
        }
    );
    let mut trace = Vec::new();
    for r in &out.trace {
        let _ = write!(text, "\n{}: {} on {}", r.stage, if r.passed { "pass" } else { "fail" }, r.group);
        for d in &r.detail {
            let _ = write!(text, "\n  {d}");
        }
        trace.push(json!({
            "stage": r.stage.to_string(),
            "group": graded(&r.group),
            "passed": r.passed,
            "detail": r.detail,
        }));
    }
    output(
        "necessary",
        text,
        json!({
            "a": graded(a),
            "primes": primes.iter().collect::<Vec<_>>(),
            "depth": depth,
            "passed": out.passed,
            "failed_stage": failed,
            "trace": trace,
        }),
    )
}

pub fn colimit_verify(
    left: &Decomposition,
    right: &Decomposition,
    functors: &[Functor],
    limits: &Limits,
) -> Result<Output> {
    let mut entries = Vec::new();
    let mut text = String::new();
    let mut all = true;
    for x in left.atoms() {
        for y in right.atoms() {
            for &f in functors {
                let table = match f {
                    Functor::Tensor => tensor_atoms(x, y),
                    Functor::Tor => tor_atoms(x, y),
                };
                let colim = atom_colimit(f, x, y, limits)?;
                let agree = colim == table;
                all &= agree;
                let name = match f {
                    Functor::Tensor => "tensor",
                    Functor::Tor => "tor",
                };
                let _ = writeln!(text, "{name}({x}, {y}): table {table} | colimit {colim} | {}", if agree { "agree" } else { "DIFFER" });
                entries.push(json!({
                    "functor": name,
                    "left": x.to_string(),
                    "right": y.to_string(),
                    "table": table.to_string(),
                    "colimit": colim.to_string(),
                    "agree": agree,
                }));
            }
        }
    }
    if !all {
        return Err(Error::Internal(format!("colimit disagrees with the table:\n{text}")));
    }
    let _ = write!(text, "all entries agree ({} stages)", limits.colimit_stages);
    Ok(output(
        "colimit-verify",
        text,
        json!({
            "left": left.to_string(),
            "right": right.to_string(),
            "stages": limits.colimit_stages,
            "entries": entries,
            "agree": all,
        }),
    ))
}
