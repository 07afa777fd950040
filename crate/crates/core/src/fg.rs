//! Finitely generated abelian groups realised as subquotients `K / L` of a
//! free ambient module `Z^N`, with elements carried as ambient vectors.
//!
//! This is the workhorse behind kernels of tensored resolutions, the
//! diagram chases, and the colimit towers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::group::Decomposition;
use crate::linalg::{hermite_basis, left_kernel, smith_normal_form, IntMatrix, SmithForm, Solver};
use crate::presentation::PresentationMatrix;

#[derive(Debug, Clone)]
pub struct FgGroup {
    ambient: usize,
    /// Rows form a basis of the carrier lattice `K`.
    basis: IntMatrix,
    solver: Solver,
    /// Ambient rows spanning the relation lattice `L ⊆ K`.
    relations: IntMatrix,
    /// Smith form of `L` written in the coordinates of `basis`.
    snf: SmithForm,
    /// Order of each Smith coordinate; zero means infinite.
    orders: Vec<BigInt>,
    /// Smith coordinates whose order is not one.
    visible: Vec<usize>,
}

impl FgGroup {
    /// `Z^n / rowspan(relations)`.
    pub fn presented(n: usize, relations: &IntMatrix) -> Self {
        Self::build(n, IntMatrix::identity(n), relations.clone())
            .expect("relations of a presentation lie in the free module")
    }

    pub fn from_presentation(p: &PresentationMatrix) -> Self {
        Self::presented(p.generators(), p.relations())
    }

    /// `span(carrier) / span(relations)` inside `Z^ambient`. Fails when a
    /// relation does not lie in the carrier.
    pub fn subquotient(ambient: usize, carrier: &IntMatrix, relations: &IntMatrix) -> Result<Self> {
        Self::build(ambient, hermite_basis(carrier), relations.clone())
    }

    fn build(ambient: usize, basis: IntMatrix, relations: IntMatrix) -> Result<Self> {
        assert_eq!(basis.cols(), ambient);
        assert_eq!(relations.cols(), ambient);
        let solver = Solver::new(&basis);
        let k = basis.rows();
        let mut coords = IntMatrix::zeros(0, k);
        for r in relations.row_iter() {
            let c = solver.solve(r).ok_or_else(|| {
                Error::Internal("relation outside the carrier lattice".into())
            })?;
            coords.push_row(&c);
        }
        let snf = smith_normal_form(&coords);
        let diag = snf.diagonal();
        let orders: Vec<BigInt> = (0..k)
            .map(|i| diag.get(i).cloned().unwrap_or_else(BigInt::zero))
            .collect();
        let visible = (0..k).filter(|&i| !orders[i].is_one()).collect();
        Ok(Self {
            ambient,
            basis,
            solver,
            relations,
            snf,
            orders,
            visible,
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn carrier(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn relations(&self) -> &IntMatrix {
        &self.relations
    }

    /// Orders of the canonical generators (`0` = infinite order), each
    /// dividing the next among the finite ones.
    pub fn orders(&self) -> Vec<BigInt> {
        self.visible.iter().map(|&i| self.orders[i].clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.visible.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.visible.is_empty()
    }

    pub fn decomposition(&self) -> Decomposition {
        Decomposition::from_invariant_factors(&self.orders())
    }

    /// Canonical generators as ambient vectors, in the order of
    /// [`orders`](Self::orders).
    pub fn generators(&self) -> Vec<Vec<BigInt>> {
        self.visible
            .iter()
            .map(|&i| self.basis.apply(self.snf.v_inv.row(i)))
            .collect()
    }

    pub fn contains(&self, x: &[BigInt]) -> bool {
        self.solver.solve(x).is_some()
    }

    /// Coordinates of `x` against [`generators`](Self::generators), reduced
    /// modulo the orders. `None` if `x` is outside the carrier.
    pub fn coords(&self, x: &[BigInt]) -> Option<Vec<BigInt>> {
        let c = self.solver.solve(x)?;
        let y = self.snf.v.apply(&c);
        Some(
            self.visible
                .iter()
                .map(|&i| reduce(&y[i], &self.orders[i]))
                .collect(),
        )
    }

    pub fn is_zero(&self, x: &[BigInt]) -> bool {
        self.coords(x).is_some_and(|c| c.iter().all(Zero::is_zero))
    }

    /// Preimage of the target's relations under `f` (ambient matrix),
    /// modulo this group's relations.
    pub fn kernel(&self, target: &FgGroup, f: &IntMatrix) -> Result<FgGroup> {
        let k = self.basis.rows();
        let stacked = self.basis.mul(f).vstack(target.relations());
        let ker = left_kernel(&stacked);
        let coeffs = ker.col_slice(0..k);
        let carrier = coeffs.mul(&self.basis);
        let carrier = carrier.vstack(&self.relations);
        FgGroup::subquotient(self.ambient, &carrier, &self.relations)
    }

    /// Image of this group under `f`, as a subgroup of `target`.
    pub fn image(&self, target: &FgGroup, f: &IntMatrix) -> Result<FgGroup> {
        let carrier = self.basis.mul(f).vstack(target.relations());
        FgGroup::subquotient(target.ambient, &carrier, target.relations())
    }

    /// Matrix of the induced map on canonical generators: row `i` holds the
    /// coordinates of `f(generator_i)` in `target`.
    pub fn induced_matrix(&self, target: &FgGroup, f: &IntMatrix) -> Result<IntMatrix> {
        let mut m = IntMatrix::zeros(0, target.rank());
        for g in self.generators() {
            let img = f.apply(&g);
            let c = target
                .coords(&img)
                .ok_or_else(|| Error::Internal("map leaves the target carrier".into()))?;
            m.push_row(&c);
        }
        Ok(m)
    }
}

fn reduce(x: &BigInt, order: &BigInt) -> BigInt {
    if order.is_zero() {
        x.clone()
    } else {
        x.mod_floor(order)
    }
}

/// The abstract group `⊕ Z/d_i` on canonical generators.
pub fn standard_group(orders: &[BigInt]) -> FgGroup {
    FgGroup::from_presentation(&PresentationMatrix::diagonal(orders))
}

/// Whether `m` (rows = images of source generators, in target coordinates)
/// is an isomorphism `⊕ Z/src_i → ⊕ Z/tgt_j`.
pub fn is_isomorphism(src_orders: &[BigInt], tgt_orders: &[BigInt], m: &IntMatrix) -> Result<bool> {
    let src = standard_group(src_orders);
    let tgt = standard_group(tgt_orders);
    if m.rows() != src_orders.len() || m.cols() != tgt_orders.len() {
        return Ok(false);
    }
    // Well defined: order_i * row_i must vanish in the target.
    for (i, d) in src_orders.iter().enumerate() {
        let row: Vec<BigInt> = m.row(i).iter().map(|x| x * d).collect();
        if !tgt.is_zero(&row) {
            return Ok(false);
        }
    }
    let injective = src.kernel(&tgt, m)?.is_trivial();
    let image = src.image(&tgt, m)?;
    let cokernel = FgGroup::presented(tgt_orders.len(), &image.carrier().clone());
    let surjective = cokernel.is_trivial();
    Ok(injective && surjective)
}
