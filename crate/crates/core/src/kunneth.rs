//! Graded Künneth assembly for `K_*(A ⊗ B)`, the signed flip on
//! `K_*(A ⊗ A)`, and the admissibility tests built from it.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::functors::{tensor_atoms, tor_atoms};
use crate::group::{support_number, Atom, Decomposition, GradedGroup};
use crate::supernat::SupernaturalNumber;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum PartKind {
    Tensor,
    Tor,
}

impl PartKind {
    /// Degree of the `(i, j)` part, mod 2.
    pub fn degree(self, i: u8, j: u8) -> u8 {
        match self {
            PartKind::Tensor => (i + j) % 2,
            PartKind::Tor => (i + j + 1) % 2,
        }
    }

    /// Sign of the flip on the `(i, j)` part of `K_*(A ⊗ A)`.
    pub fn flip_sign(self, i: u8, j: u8) -> i8 {
        let odd = match self {
            PartKind::Tensor => i * j % 2 == 1,
            PartKind::Tor => (1 + i * j) % 2 == 1,
        };
        if odd {
            -1
        } else {
            1
        }
    }
}

impl fmt::Display for PartKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PartKind::Tensor => "TensorPart",
            PartKind::Tor => "TorPart",
        })
    }
}

/// An atom summand of a graded group: grade and index within that grade.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Position {
    pub grade: u8,
    pub index: usize,
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "K{}[{}]", self.grade, self.index)
    }
}

fn positions(a: &GradedGroup) -> Vec<(Position, &Atom)> {
    (0..2u8)
        .flat_map(|grade| {
            a.grade(grade as usize)
                .atoms()
                .iter()
                .enumerate()
                .map(move |(index, atom)| (Position { grade, index }, atom))
        })
        .collect()
}

/// One atom pair inside a Künneth component.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Piece {
    pub left: usize,
    pub right: usize,
    pub value: Decomposition,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KunnethComponent {
    pub kind: PartKind,
    pub i: u8,
    pub j: u8,
    pub degree: u8,
    pub value: Decomposition,
    pub pieces: Vec<Piece>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KunnethGroup {
    pub components: Vec<KunnethComponent>,
    pub collapsed: GradedGroup,
}

impl KunnethGroup {
    pub fn component(&self, kind: PartKind, i: u8, j: u8) -> &KunnethComponent {
        self.components
            .iter()
            .find(|c| c.kind == kind && c.i == i && c.j == j)
            .expect("all eight components are present")
    }
}

pub fn kunneth(a: &GradedGroup, b: &GradedGroup) -> KunnethGroup {
    let mut components = Vec::with_capacity(8);
    for kind in [PartKind::Tensor, PartKind::Tor] {
        for i in 0..2u8 {
            for j in 0..2u8 {
                let f = match kind {
                    PartKind::Tensor => tensor_atoms,
                    PartKind::Tor => tor_atoms,
                };
                let mut pieces = Vec::new();
                for (l, x) in a.grade(i as usize).atoms().iter().enumerate() {
                    for (r, y) in b.grade(j as usize).atoms().iter().enumerate() {
                        pieces.push(Piece {
                            left: l,
                            right: r,
                            value: f(x, y),
                        });
                    }
                }
                let value = pieces.iter().flat_map(|p| p.value.atoms().iter().cloned()).collect();
                components.push(KunnethComponent {
                    kind,
                    i,
                    j,
                    degree: kind.degree(i, j),
                    value,
                    pieces,
                });
            }
        }
    }
    let collapsed = collapse_components(&components);
    KunnethGroup { components, collapsed }
}

fn collapse_components(components: &[KunnethComponent]) -> GradedGroup {
    let grade = |d: u8| -> Decomposition {
        components
            .iter()
            .filter(|c| c.degree == d)
            .flat_map(|c| c.value.atoms().iter().cloned())
            .collect()
    };
    GradedGroup::new(grade(0), grade(1))
}

pub fn collapse(k: &KunnethGroup) -> GradedGroup {
    collapse_components(&k.components)
}

/// Address of a piece of `kunneth(A, A)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct PieceId {
    pub kind: PartKind,
    pub i: u8,
    pub j: u8,
    pub left: usize,
    pub right: usize,
}

impl fmt::Display for PieceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({},{})[{},{}]", self.kind, self.i, self.j, self.left, self.right)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SwapEntry {
    pub source: PieceId,
    pub target: PieceId,
    pub sign: i8,
    pub value: Decomposition,
}

/// Sign of a whole `(i, j)` part.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockSign {
    pub kind: PartKind,
    pub i: u8,
    pub j: u8,
    pub degree: u8,
    pub sign: i8,
    pub value: Decomposition,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SignedSwap {
    pub entries: Vec<SwapEntry>,
    pub blocks: Vec<BlockSign>,
}

impl SignedSwap {
    pub fn target(&self, source: &PieceId) -> Option<&SwapEntry> {
        self.entries.iter().find(|e| &e.source == source)
    }

    /// The swap applied twice, as a descriptor.
    pub fn squared(&self) -> SignedSwap {
        let entries = self
            .entries
            .iter()
            .map(|e| {
                let second = self.target(&e.target).expect("targets are sources");
                SwapEntry {
                    source: e.source,
                    target: second.target,
                    sign: e.sign * second.sign,
                    value: e.value.clone(),
                }
            })
            .collect();
        SignedSwap {
            entries,
            blocks: self.blocks.iter().map(|b| BlockSign { sign: 1, ..b.clone() }).collect(),
        }
    }

    pub fn is_identity_descriptor(&self) -> bool {
        self.entries.iter().all(|e| e.source == e.target && e.sign == 1)
    }

    /// Signs of the nonzero parts in one degree.
    pub fn block_signs(&self, degree: u8) -> Vec<&BlockSign> {
        self.blocks
            .iter()
            .filter(|b| b.degree == degree && !b.value.is_zero())
            .collect()
    }
}

pub fn flip_action(a: &GradedGroup) -> SignedSwap {
    let k = kunneth(a, a);
    let mut entries = Vec::new();
    let mut blocks = Vec::new();
    for c in &k.components {
        let sign = c.kind.flip_sign(c.i, c.j);
        blocks.push(BlockSign {
            kind: c.kind,
            i: c.i,
            j: c.j,
            degree: c.degree,
            sign,
            value: c.value.clone(),
        });
        for p in &c.pieces {
            entries.push(SwapEntry {
                source: PieceId {
                    kind: c.kind,
                    i: c.i,
                    j: c.j,
                    left: p.left,
                    right: p.right,
                },
                target: PieceId {
                    kind: c.kind,
                    i: c.j,
                    j: c.i,
                    left: p.right,
                    right: p.left,
                },
                sign,
                value: p.value.clone(),
            });
        }
    }
    SignedSwap { entries, blocks }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum FlipViolation {
    /// Two distinct summands whose tensor or Tor is nonzero: the flip
    /// exchanges two nonzero pieces.
    Transposition {
        left: Position,
        right: Position,
        tensor: Decomposition,
        tor: Decomposition,
    },
    /// A piece mapped to itself by `-1` on a group with `2G != 0`.
    Negation {
        position: Position,
        kind: PartKind,
        value: Decomposition,
    },
}

impl fmt::Display for FlipViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FlipViolation::Transposition { left, right, tensor, tor } => {
                write!(f, "{left} and {right} pair nontrivially (tensor {tensor}, Tor {tor})")
            }
            FlipViolation::Negation { position, kind, value } => {
                write!(f, "{kind} of {position} with itself is {value}, acted on by -1")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FlipCertificate {
    pub identity: bool,
    pub violations: Vec<FlipViolation>,
}

fn transpositions(a: &GradedGroup) -> Vec<FlipViolation> {
    let pos = positions(a);
    let mut out = Vec::new();
    for (s, (p, x)) in pos.iter().enumerate() {
        for (q, y) in &pos[s + 1..] {
            let tensor = tensor_atoms(x, y);
            let tor = tor_atoms(x, y);
            if !tensor.is_zero() || !tor.is_zero() {
                out.push(FlipViolation::Transposition {
                    left: *p,
                    right: *q,
                    tensor,
                    tor,
                });
            }
        }
    }
    out
}

pub fn flip_is_identity(a: &GradedGroup) -> FlipCertificate {
    let mut violations = transpositions(a);
    for (p, x) in positions(a) {
        for kind in [PartKind::Tensor, PartKind::Tor] {
            if kind.flip_sign(p.grade, p.grade) == 1 {
                continue;
            }
            let value = match kind {
                PartKind::Tensor => tensor_atoms(x, x),
                PartKind::Tor => tor_atoms(x, x),
            };
            if !value.exponent_divides_two() {
                violations.push(FlipViolation::Negation { position: p, kind, value });
            }
        }
    }
    FlipCertificate {
        identity: violations.is_empty(),
        violations,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RestrictionReport {
    pub violations: Vec<FlipViolation>,
}

impl RestrictionReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Pairs of distinct summands with nonzero tensor product or Tor.
pub fn basic_restrictions_check(a: &GradedGroup) -> RestrictionReport {
    RestrictionReport {
        violations: transpositions(a),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Stage {
    /// At most one summand of positive torsion-free rank.
    Rank,
    Flip,
    /// Flip on `A ⊗ (0, Z(p^∞))`.
    Auxiliary(u64),
    /// Flip on the `k`-th iterated square `A ↦ A ⊗ A`.
    Square(usize),
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Stage::Rank => f.write_str("rank"),
            Stage::Flip => f.write_str("flip"),
            Stage::Auxiliary(p) => write!(f, "aux({p})"),
            Stage::Square(k) => write!(f, "square({k})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StageRecord {
    pub stage: Stage,
    pub group: GradedGroup,
    pub passed: bool,
    pub detail: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NecessaryOutcome {
    pub passed: bool,
    /// Stages in the order run; the last one failed if `passed` is false.
    pub trace: Vec<StageRecord>,
}

impl NecessaryOutcome {
    pub fn failed_stage(&self) -> Option<Stage> {
        self.trace.iter().find(|r| !r.passed).map(|r| r.stage)
    }
}

pub const DEFAULT_DEPTH: usize = 2;

/// Primes of `a` together with 2, 3 and 5.
pub fn default_primes(a: &GradedGroup) -> BTreeSet<u64> {
    let mut p = a.primes();
    p.extend([2, 3, 5]);
    p
}

fn flip_record(stage: Stage, group: GradedGroup) -> StageRecord {
    let cert = flip_is_identity(&group);
    StageRecord {
        stage,
        passed: cert.identity,
        detail: cert.violations.iter().map(ToString::to_string).collect(),
        group,
    }
}

pub fn necessary_check(a: &GradedGroup, primes: &BTreeSet<u64>, depth: usize) -> NecessaryOutcome {
    let mut trace = Vec::new();
    let mut push = |r: StageRecord| {
        let ok = r.passed;
        trace.push(r);
        ok
    };

    let rational = a.g0.torsion_free_rank() + a.g1.torsion_free_rank();
    let rank = StageRecord {
        stage: Stage::Rank,
        group: a.clone(),
        passed: rational <= 1,
        detail: if rational <= 1 {
            vec![]
        } else {
            vec![format!("{rational} summands of positive torsion-free rank")]
        },
    };
    let ok = push(rank)
        && push(flip_record(Stage::Flip, a.clone()))
        && primes.iter().all(|&p| {
            let t = GradedGroup::new(Decomposition::zero(), Decomposition::atom(Atom::Prufer(p)));
            push(flip_record(Stage::Auxiliary(p), collapse(&kunneth(a, &t))))
        })
        && {
            let mut g = a.clone();
            (1..=depth).all(|k| {
                g = collapse(&kunneth(&g, &g));
                push(flip_record(Stage::Square(k), g.clone()))
            })
        };
    NecessaryOutcome { passed: ok, trace }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Clause {
    /// `K1` must be a sum of Prüfer groups at pairwise distinct primes.
    G1Shape,
    /// `K0` must be `0`, `Z` or a single `Q_n`.
    G0Shape,
    /// The Prüfer primes must be among the inverted primes of `K0`.
    Divisibility,
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Clause::G1Shape => "g1-shape",
            Clause::G0Shape => "g0-shape",
            Clause::Divisibility => "divisibility",
        })
    }
}

/// `K_* ≅ (Q_n, Q_m/Z)`, or `(0, Q_m/Z)` when `n` is absent.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub m: SupernaturalNumber,
    pub n: Option<SupernaturalNumber>,
}

impl Witness {
    pub fn m_support(&self) -> BTreeSet<u64> {
        self.m.infinite_support()
    }

    pub fn n_support(&self) -> Option<BTreeSet<u64>> {
        self.n.as_ref().map(SupernaturalNumber::infinite_support)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Admissible(Witness),
    NotAdmissible { clause: Clause, detail: String },
}

impl Verdict {
    pub fn is_admissible(&self) -> bool {
        matches!(self, Verdict::Admissible(_))
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Admissible(w) => {
                write!(f, "Admissible, m={}", w.m)?;
                match &w.n {
                    Some(n) => write!(f, ", n={n}"),
                    None => f.write_str(", K0=0"),
                }
            }
            Verdict::NotAdmissible { clause, detail } => write!(f, "NotAdmissible ({clause}): {detail}"),
        }
    }
}

pub fn classify(a: &GradedGroup) -> Verdict {
    let not = |clause, detail: String| Verdict::NotAdmissible { clause, detail };

    let mut sm = BTreeSet::new();
    for atom in a.g1.atoms() {
        match atom {
            Atom::Prufer(p) if sm.insert(*p) => {}
            Atom::Prufer(p) => return not(Clause::G1Shape, format!("K1 repeats the {p}-Prüfer summand")),
            other => return not(Clause::G1Shape, format!("K1 has a summand {other} that is not a Prüfer group")),
        }
    }

    let sn = match a.g0.atoms() {
        [] => None,
        [Atom::FreeZ] => Some(BTreeSet::new()),
        [Atom::QLoc(s)] => Some(s.clone()),
        _ => return not(Clause::G0Shape, format!("K0 = {} is not 0, Z or a single Q_n", a.g0)),
    };

    if let Some(sn) = &sn {
        if let Some(p) = sm.difference(sn).next() {
            return not(
                Clause::Divisibility,
                format!("{p}^inf divides m but not n = {}", support_number(sn)),
            );
        }
    }
    Verdict::Admissible(Witness {
        m: support_number(&sm),
        n: sn.as_ref().map(support_number),
    })
}
