//! Free resolutions `0 → P → Q → G → 0` of finitely generated groups, Tor
//! as a literal kernel of a tensored resolution, and the double-complex
//! chases that compare the left and right pictures and swap the arguments.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fg::{is_isomorphism, FgGroup};
use crate::group::Decomposition;
use crate::linalg::{hermite_basis, IntMatrix, Solver};
use crate::presentation::{decompose, PresentationMatrix};

/// `0 → Z^p --inclusion--> Z^q → G → 0`. The inclusion rows are a Hermite
/// basis of the relation lattice of the presentation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FreeResolution {
    inclusion: IntMatrix,
}

impl FreeResolution {
    pub fn p_rank(&self) -> usize {
        self.inclusion.rows()
    }

    pub fn q_rank(&self) -> usize {
        self.inclusion.cols()
    }

    pub fn inclusion(&self) -> &IntMatrix {
        &self.inclusion
    }

    /// The resolved group, presented by the inclusion.
    pub fn presentation(&self) -> PresentationMatrix {
        PresentationMatrix::new(self.q_rank(), self.inclusion.clone())
            .expect("inclusion has q_rank columns")
    }

    pub fn cokernel(&self) -> Decomposition {
        decompose(&self.presentation())
    }
}

pub fn free_resolution(m: &PresentationMatrix) -> FreeResolution {
    FreeResolution {
        inclusion: hermite_basis(m.relations()),
    }
}

/// Diagonal presentation of a finitely generated decomposition; infinite
/// atoms have no finite free resolution here.
pub fn presentation_of(d: &Decomposition) -> Result<PresentationMatrix> {
    d.presentation().ok_or_else(|| {
        Error::Unsupported(format!(
            "{d} is not finitely generated; resolutions need Z and Z/p^a summands only"
        ))
    })
}

/// Which argument was resolved.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TorSide {
    Left,
    Right,
}

/// Member of `ker(P ⊗ H → Q ⊗ H)` (left) or `ker(G ⊗ P → G ⊗ Q)` (right),
/// carried in the coordinates of the tensored free module.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TorElement {
    coordinates: Vec<BigInt>,
}

impl TorElement {
    pub fn coordinates(&self) -> &[BigInt] {
        &self.coordinates
    }
}

/// Tor realised as a kernel, with canonical generators.
#[derive(Debug, Clone)]
pub struct TorGroup {
    side: TorSide,
    kernel: FgGroup,
}

impl TorGroup {
    pub fn side(&self) -> TorSide {
        self.side
    }

    pub fn decomposition(&self) -> Decomposition {
        self.kernel.decomposition()
    }

    /// Orders of the basis elements (each `>= 2`; Tor of f.g. groups is finite).
    pub fn orders(&self) -> Vec<BigInt> {
        self.kernel.orders()
    }

    pub fn basis(&self) -> Vec<TorElement> {
        self.kernel
            .generators()
            .into_iter()
            .map(|coordinates| TorElement { coordinates })
            .collect()
    }

    /// Certifies kernel membership.
    pub fn element(&self, coordinates: Vec<BigInt>) -> Result<TorElement> {
        if self.kernel.contains(&coordinates) {
            Ok(TorElement { coordinates })
        } else {
            Err(Error::Internal("vector is not a Tor cycle".into()))
        }
    }

    /// Coordinates against [`basis`](Self::basis), reduced by the orders.
    pub fn coords(&self, x: &TorElement) -> Vec<BigInt> {
        self.kernel
            .coords(&x.coordinates)
            .expect("TorElement membership is checked on construction")
    }
}

/// A homomorphism between two Tor groups, on their canonical bases.
/// Row `i` is the image of basis element `i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TorMap {
    pub source_orders: Vec<BigInt>,
    pub target_orders: Vec<BigInt>,
    pub matrix: IntMatrix,
}

impl TorMap {
    /// `other ∘ self`.
    pub fn then(&self, other: &TorMap) -> Result<TorMap> {
        if self.target_orders != other.source_orders {
            return Err(Error::InvalidArgument("composing maps with mismatched bases".into()));
        }
        let mut matrix = self.matrix.mul(&other.matrix);
        reduce_columns(&mut matrix, &other.target_orders);
        Ok(TorMap {
            source_orders: self.source_orders.clone(),
            target_orders: other.target_orders.clone(),
            matrix,
        })
    }

    pub fn is_identity(&self) -> bool {
        self.source_orders == self.target_orders
            && self.matrix == IntMatrix::identity(self.source_orders.len())
    }

    pub fn is_isomorphism(&self) -> Result<bool> {
        is_isomorphism(&self.source_orders, &self.target_orders, &self.matrix)
    }
}

fn reduce_columns(m: &mut IntMatrix, orders: &[BigInt]) {
    for i in 0..m.rows() {
        for (j, d) in orders.iter().enumerate() {
            if !d.is_zero() {
                let v = m[(i, j)].mod_floor(d);
                m[(i, j)] = v;
            }
        }
    }
}

/// Resolutions of both arguments of a Tor computation, plus the pieces of
/// the double complex `P_G⊗P_H → P_G⊗Q_H, Q_G⊗P_H → Q_G⊗Q_H`.
#[derive(Debug, Clone)]
pub struct TorPair {
    rg: FreeResolution,
    rh: FreeResolution,
}

impl TorPair {
    pub fn new(g: &PresentationMatrix, h: &PresentationMatrix) -> Self {
        Self {
            rg: free_resolution(g),
            rh: free_resolution(h),
        }
    }

    pub fn from_decompositions(g: &Decomposition, h: &Decomposition) -> Result<Self> {
        Ok(Self::new(&presentation_of(g)?, &presentation_of(h)?))
    }

    pub fn swapped(&self) -> Self {
        Self {
            rg: self.rh.clone(),
            rh: self.rg.clone(),
        }
    }

    /// `ker(P_G ⊗ H → Q_G ⊗ H)`.
    pub fn ltor(&self) -> Result<TorGroup> {
        let (a, n) = (self.rg.p_rank(), self.rg.q_rank());
        let m = self.rh.q_rank();
        let ih = self.rh.inclusion();
        let p_h = FgGroup::presented(a * m, &IntMatrix::identity(a).kron(ih));
        let q_h = FgGroup::presented(n * m, &IntMatrix::identity(n).kron(ih));
        let f = self.rg.inclusion().kron(&IntMatrix::identity(m));
        Ok(TorGroup {
            side: TorSide::Left,
            kernel: p_h.kernel(&q_h, &f)?,
        })
    }

    /// `ker(G ⊗ P_H → G ⊗ Q_H)`.
    pub fn rtor(&self) -> Result<TorGroup> {
        let n = self.rg.q_rank();
        let (b, m) = (self.rh.p_rank(), self.rh.q_rank());
        let ig = self.rg.inclusion();
        let g_p = FgGroup::presented(n * b, &ig.kron(&IntMatrix::identity(b)));
        let g_q = FgGroup::presented(n * m, &ig.kron(&IntMatrix::identity(m)));
        let f = IntMatrix::identity(n).kron(self.rh.inclusion());
        Ok(TorGroup {
            side: TorSide::Right,
            kernel: g_p.kernel(&g_q, &f)?,
        })
    }

    /// `P_G⊗H ⊇ LTor(G,H) → Q_G⊗P_H`: lift to `P_G⊗Q_H` (perturbed by
    /// `offset ∈ P_G⊗P_H`), push into `Q_G⊗Q_H`, pull back along the
    /// injection `Q_G⊗P_H → Q_G⊗Q_H`.
    fn chase(&self, x: &TorElement, offset: Option<&[BigInt]>, pullback: &Solver) -> Result<Vec<BigInt>> {
        let m = self.rh.q_rank();
        let a = self.rg.p_rank();
        let mut lift = x.coordinates.clone();
        if let Some(z) = offset {
            let shift = IntMatrix::identity(a).kron(self.rh.inclusion()).apply(z);
            lift = lift.iter().zip(&shift).map(|(u, v)| u + v).collect();
        }
        let pushed = self.rg.inclusion().kron(&IntMatrix::identity(m)).apply(&lift);
        pullback.solve(&pushed).ok_or_else(|| {
            Error::Internal("diagram chase: pushed element has no preimage in Q_G ⊗ P_H".into())
        })
    }

    fn pullback_solver(&self) -> Solver {
        Solver::new(&IntMatrix::identity(self.rg.q_rank()).kron(self.rh.inclusion()))
    }

    /// The canonical isomorphism `LTor(G,H) → RTor(G,H)`.
    pub fn ltor_rtor_iso(&self) -> Result<TorMap> {
        let left = self.ltor()?;
        let right = self.rtor()?;
        let solver = self.pullback_solver();
        let mut matrix = IntMatrix::zeros(0, right.orders().len());
        for x in left.basis() {
            let y = self.chase(&x, None, &solver)?;
            let y = right.element(y)?;
            matrix.push_row(&right.coords(&y));
        }
        let map = TorMap {
            source_orders: left.orders(),
            target_orders: right.orders(),
            matrix,
        };
        if !map.is_isomorphism()? {
            return Err(Error::Internal("LTor → RTor comparison is not bijective".into()));
        }
        Ok(map)
    }

    /// `η : LTor(G,H) → LTor(H,G)`, unsigned.
    pub fn eta(&self) -> Result<TorMap> {
        self.eta_with_lifts(&mut |_| None)
    }

    /// `η` with random lift choices in the first step of the chase.
    pub fn eta_randomized<R: Rng>(&self, rng: &mut R) -> Result<TorMap> {
        let dim = self.rg.p_rank() * self.rh.p_rank();
        self.eta_with_lifts(&mut |_| {
            Some((0..dim).map(|_| BigInt::from(rng.gen_range(-50i64..=50))).collect())
        })
    }

    fn eta_with_lifts(&self, offsets: &mut dyn FnMut(usize) -> Option<Vec<BigInt>>) -> Result<TorMap> {
        let source = self.ltor()?;
        let target = self.swapped().ltor()?;
        let solver = self.pullback_solver();
        let (n, b) = (self.rg.q_rank(), self.rh.p_rank());
        let mut matrix = IntMatrix::zeros(0, target.orders().len());
        for (i, x) in source.basis().iter().enumerate() {
            let offset = offsets(i);
            let y = self.chase(x, offset.as_deref(), &solver)?;
            // Q_G ⊗ P_H  →  P_H ⊗ Q_G, then read in P_H ⊗ G.
            let mut t = vec![BigInt::zero(); b * n];
            for gi in 0..n {
                for hk in 0..b {
                    t[hk * n + gi] = y[gi * b + hk].clone();
                }
            }
            let t = target.element(t)?;
            matrix.push_row(&target.coords(&t));
        }
        Ok(TorMap {
            source_orders: source.orders(),
            target_orders: target.orders(),
            matrix,
        })
    }
}

pub fn ltor(g: &PresentationMatrix, h: &PresentationMatrix) -> Result<TorGroup> {
    TorPair::new(g, h).ltor()
}

pub fn rtor(g: &PresentationMatrix, h: &PresentationMatrix) -> Result<TorGroup> {
    TorPair::new(g, h).rtor()
}

pub fn ltor_rtor_iso(g: &PresentationMatrix, h: &PresentationMatrix) -> Result<TorMap> {
    TorPair::new(g, h).ltor_rtor_iso()
}

pub fn eta(g: &PresentationMatrix, h: &PresentationMatrix) -> Result<TorMap> {
    TorPair::new(g, h).eta()
}

/// True when `m` is the identity modulo the orders.
pub fn is_identity_mod(orders: &[BigInt], m: &IntMatrix) -> bool {
    if m.rows() != orders.len() || m.cols() != orders.len() {
        return false;
    }
    (0..m.rows()).all(|i| {
        (0..m.cols()).all(|j| {
            let want = if i == j { BigInt::one() } else { BigInt::zero() };
            let d = &orders[j];
            if d.is_zero() {
                m[(i, j)] == want
            } else {
                (&m[(i, j)] - want).is_multiple_of(d)
            }
        })
    })
}
