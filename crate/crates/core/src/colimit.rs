//! Direct limits of towers of finitely generated groups, used to check the
//! atom tables on non-finitely-generated entries.
//!
//! Stage `k` of `Q_n` is `Z` with `Z → Z` multiplication by `t_{k+1}/t_k`,
//! where `t_k` truncates every infinite exponent of `n` at `k + 1`. Stage `k`
//! of `Q_m/Z` is `Z/t_k` with the same maps. Tensor and Tor of two towers
//! are taken stagewise.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fg::FgGroup;
use crate::functors::{tensor_presentation, Limits};
use crate::group::{factor_bigint, support_number, Atom, Decomposition};
use crate::linalg::{hermite_basis, IntMatrix, Solver};
use crate::presentation::PresentationMatrix;
use crate::supernat::SupernaturalNumber;

/// A tower `A_0 → A_1 → …` of presented groups.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tower {
    /// Identity maps on a fixed group.
    Constant(PresentationMatrix),
    /// `Q_n` as a union of cyclic subgroups of `Q`.
    Localization(SupernaturalNumber),
    /// `Q_m / Z` as a union of finite cyclic groups.
    QuotientByZ(SupernaturalNumber),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Functor {
    Tensor,
    Tor,
}

fn truncated(n: &SupernaturalNumber, k: usize) -> Result<BigInt> {
    let bound = u32::try_from(k + 1).map_err(|_| Error::ResourceLimit("stage index too large".into()))?;
    Ok(n.truncate(bound)?.to_bigint().expect("truncation is finite"))
}

impl Tower {
    pub fn of_atom(a: &Atom) -> Tower {
        match a {
            Atom::FreeZ => Tower::Constant(PresentationMatrix::free(1)),
            Atom::Cyclic { .. } => Tower::Constant(PresentationMatrix::diagonal(&[a.order().unwrap()])),
            Atom::Prufer(p) => Tower::QuotientByZ(support_number(&BTreeSet::from([*p]))),
            Atom::QLoc(s) => Tower::Localization(support_number(s)),
        }
    }

    pub fn presentation(&self, k: usize) -> Result<PresentationMatrix> {
        Ok(match self {
            Tower::Constant(p) => p.clone(),
            Tower::Localization(_) => PresentationMatrix::free(1),
            Tower::QuotientByZ(m) => PresentationMatrix::diagonal(&[truncated(m, k)?]),
        })
    }

    /// Map from stage `k` to stage `k + 1`, on generators.
    pub fn map(&self, k: usize) -> Result<IntMatrix> {
        Ok(match self {
            Tower::Constant(p) => IntMatrix::identity(p.generators()),
            Tower::Localization(n) | Tower::QuotientByZ(n) => {
                let step = truncated(n, k + 1)? / truncated(n, k)?;
                IntMatrix::diagonal(1, 1, &[step])
            }
        })
    }
}

/// The recipe of a directed system of finitely generated groups.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SystemRecipe {
    Basic(Tower),
    Tensor(Tower, Tower),
    Tor(Tower, Tower),
}

/// A lazily generated directed system.
#[derive(Debug, Clone)]
pub struct DirectedSystem {
    pub recipe: SystemRecipe,
    pub stabilization_window: usize,
    pub stage_budget: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ColimitReport {
    pub decomposition: Decomposition,
    /// First stage of the window the answer was read from.
    pub window_start: usize,
    pub stages: usize,
}

impl DirectedSystem {
    pub fn new(recipe: SystemRecipe, limits: &Limits) -> Self {
        Self {
            recipe,
            stabilization_window: limits.stabilization_window,
            stage_budget: limits.colimit_stages,
        }
    }

    pub fn stage(&self, k: usize) -> Result<FgGroup> {
        match &self.recipe {
            SystemRecipe::Basic(t) => Ok(FgGroup::from_presentation(&t.presentation(k)?)),
            SystemRecipe::Tensor(a, b) => Ok(FgGroup::from_presentation(&tensor_presentation(
                &a.presentation(k)?,
                &b.presentation(k)?,
            ))),
            SystemRecipe::Tor(a, b) => {
                let pa = a.presentation(k)?;
                let pb = b.presentation(k)?;
                let iota = hermite_basis(pb.relations());
                let (n, bk, m) = (pa.generators(), iota.rows(), pb.generators());
                let g_p = FgGroup::presented(n * bk, &pa.relations().kron(&IntMatrix::identity(bk)));
                let g_q = FgGroup::presented(n * m, &pa.relations().kron(&IntMatrix::identity(m)));
                g_p.kernel(&g_q, &IntMatrix::identity(n).kron(&iota))
            }
        }
    }

    /// Ambient map from stage `k` to stage `k + 1`.
    pub fn map(&self, k: usize) -> Result<IntMatrix> {
        match &self.recipe {
            SystemRecipe::Basic(t) => t.map(k),
            SystemRecipe::Tensor(a, b) => Ok(a.map(k)?.kron(&b.map(k)?)),
            SystemRecipe::Tor(a, b) => {
                let iota = hermite_basis(b.presentation(k)?.relations());
                let next = Solver::new(&hermite_basis(b.presentation(k + 1)?.relations()));
                let pushed = iota.mul(&b.map(k)?);
                let mut lift = IntMatrix::zeros(0, next_rank(b, k + 1)?);
                for r in pushed.row_iter() {
                    let c = next
                        .solve(r)
                        .ok_or_else(|| Error::Internal("tower map does not preserve relations".into()))?;
                    lift.push_row(&c);
                }
                Ok(a.map(k)?.kron(&lift))
            }
        }
    }

    pub fn colimit(&self) -> Result<ColimitReport> {
        let w = self.stabilization_window.max(1);
        if self.stage_budget < w + 1 {
            return Err(Error::InvalidArgument("stage budget smaller than the window".into()));
        }
        let last = self.stage_budget - 1;
        let groups = (0..=last).map(|k| self.stage(k)).collect::<Result<Vec<_>>>()?;
        let maps = (0..last).map(|k| self.map(k)).collect::<Result<Vec<_>>>()?;

        let to_last = composites(&groups, &maps, last);
        let to_prev = composites(&groups, &maps, last - 1);
        let mut image = Vec::with_capacity(last);
        let mut stable = Vec::with_capacity(last);
        for k in 0..last {
            let j = groups[k].image(&groups[last], &to_last[k])?;
            let prev = groups[k].image(&groups[last - 1], &to_prev[k])?;
            stable.push(prev.decomposition() == j.decomposition());
            image.push(j);
        }

        let mut run = 0;
        for k in (0..last).rev() {
            run = if stable[k] { run + 1 } else { 0 };
            if run == w {
                let d = read_window(&image[k..k + w])?;
                return Ok(ColimitReport {
                    decomposition: d,
                    window_start: k,
                    stages: self.stage_budget,
                });
            }
        }
        Err(Error::Inconclusive(format!(
            "no {w} consecutive kernel-stable stages within {} stages",
            self.stage_budget
        )))
    }
}

fn next_rank(t: &Tower, k: usize) -> Result<usize> {
    Ok(hermite_basis(t.presentation(k)?.relations()).rows())
}

/// Ambient matrices from each stage `k ≤ target` to stage `target`.
fn composites(groups: &[FgGroup], maps: &[IntMatrix], target: usize) -> Vec<IntMatrix> {
    let mut out = vec![IntMatrix::identity(groups[target].ambient_dim()); target + 1];
    for k in (0..target).rev() {
        out[k] = maps[k].mul(&out[k + 1]);
    }
    out
}

/// Reads the union of a chain `J_0 ⊆ J_1 ⊆ …` of subgroups of one stage.
fn read_window(chain: &[FgGroup]) -> Result<Decomposition> {
    let inconclusive = |why: &str| Err(Error::Inconclusive(why.into()));
    let decs: Vec<Decomposition> = chain.iter().map(FgGroup::decomposition).collect();
    let mut indices = Vec::new();
    for pair in chain.windows(2) {
        let q = FgGroup::subquotient(pair[1].ambient_dim(), pair[1].carrier(), pair[0].carrier())?;
        match q.decomposition().order() {
            Some(o) => indices.push(o),
            None => return inconclusive("successive images differ by a free summand"),
        }
    }
    if indices.iter().all(One::is_one) {
        return Ok(decs[0].clone());
    }

    let rank = decs[0].free_rank();
    if decs.iter().any(|d| d.free_rank() != rank) {
        return inconclusive("free rank varies across the window");
    }

    let mut atoms = Vec::new();
    let primes: BTreeSet<u64> = decs.iter().flat_map(|d| d.torsion().primes()).collect();
    for p in primes {
        let parts: Vec<Decomposition> = decs.iter().map(|d| d.p_primary(p)).collect();
        atoms.extend(read_primary(p, &parts)?);
    }

    let torsion: Vec<BigInt> = decs.iter().map(|d| d.torsion().order().expect("finite torsion")).collect();
    let mut free_index = Vec::new();
    for (i, q) in indices.iter().enumerate() {
        let (e, r) = (q * &torsion[i]).div_rem(&torsion[i + 1]);
        if !r.is_zero() {
            return inconclusive("torsion growth does not match the index");
        }
        free_index.push(e);
    }
    let supports: Vec<BTreeSet<u64>> = free_index
        .iter()
        .map(|e| factor_bigint(e).into_iter().map(|(p, _)| p).collect())
        .collect();
    if supports.iter().any(|s| s != &supports[0]) {
        return inconclusive("free part grows irregularly");
    }
    let support = supports[0].clone();
    match (rank, support.is_empty()) {
        (_, true) => atoms.extend(std::iter::repeat_n(Atom::FreeZ, rank)),
        (1, false) => atoms.push(Atom::QLoc(support)),
        (0, false) => return inconclusive("index growth without a free part"),
        _ => return inconclusive("growing free part of rank above one"),
    }
    Ok(Decomposition::new(atoms))
}

/// A constant `p`-part, or a constant part plus one cyclic summand of
/// strictly growing exponent.
fn read_primary(p: u64, parts: &[Decomposition]) -> Result<Vec<Atom>> {
    if parts.iter().all(|d| d == &parts[0]) {
        return Ok(parts[0].atoms().to_vec());
    }
    let mut common: Vec<Atom> = parts[0].atoms().to_vec();
    for d in &parts[1..] {
        let mut rest = d.atoms().to_vec();
        common.retain(|a| match rest.iter().position(|b| b == a) {
            Some(i) => {
                rest.remove(i);
                true
            }
            None => false,
        });
    }
    let mut exponents = Vec::new();
    for d in parts {
        let mut rest = d.atoms().to_vec();
        for a in &common {
            let i = rest.iter().position(|b| b == a).expect("common atoms occur in every part");
            rest.remove(i);
        }
        match rest.as_slice() {
            [Atom::Cyclic { a, .. }] => exponents.push(*a),
            _ => {
                return Err(Error::Inconclusive(format!(
                    "{p}-primary part does not stabilize or grow cyclically"
                )))
            }
        }
    }
    if exponents.windows(2).all(|w| w[0] < w[1]) {
        common.push(Atom::Prufer(p));
        Ok(common)
    } else {
        Err(Error::Inconclusive(format!("{p}-primary part does not stabilize")))
    }
}

/// The colimit of a functor applied stagewise to the towers of two atoms.
pub fn atom_colimit(functor: Functor, a: &Atom, b: &Atom, limits: &Limits) -> Result<Decomposition> {
    let (ta, tb) = (Tower::of_atom(a), Tower::of_atom(b));
    let recipe = match functor {
        Functor::Tensor => SystemRecipe::Tensor(ta, tb),
        Functor::Tor => SystemRecipe::Tor(ta, tb),
    };
    Ok(DirectedSystem::new(recipe, limits).colimit()?.decomposition)
}

/// Atom-by-atom colimit of a functor on two decompositions.
pub fn colimit_functor(functor: Functor, a: &Decomposition, b: &Decomposition, limits: &Limits) -> Result<Decomposition> {
    let mut atoms = Vec::new();
    for x in a.atoms() {
        for y in b.atoms() {
            atoms.extend(atom_colimit(functor, x, y, limits)?.atoms().iter().cloned());
        }
    }
    Ok(Decomposition::new(atoms))
}
