use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::Decomposition;
use crate::linalg::{smith_normal_form, IntMatrix, SmithForm};

/// `Z^generators / rowspan(relations)`: each row is one relation among the
/// generators.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct PresentationMatrix {
    generators: usize,
    relations: IntMatrix,
}

impl PresentationMatrix {
    pub fn new(generators: usize, relations: IntMatrix) -> Result<Self> {
        if relations.cols() != generators {
            return Err(Error::InvalidArgument(format!(
                "relation matrix has {} columns for {generators} generators",
                relations.cols()
            )));
        }
        Ok(Self { generators, relations })
    }

    pub fn from_i64(generators: usize, rows: &[&[i64]]) -> Result<Self> {
        let owned: Vec<Vec<i64>> = rows.iter().map(|r| r.to_vec()).collect();
        if owned.iter().any(|r| r.len() != generators) {
            return Err(Error::InvalidArgument("ragged relation rows".into()));
        }
        Self::new(generators, IntMatrix::from_rows(generators, &owned))
    }

    /// Free group of the given rank.
    pub fn free(generators: usize) -> Self {
        Self {
            generators,
            relations: IntMatrix::zeros(0, generators),
        }
    }

    /// `⊕ Z/d_i`, one generator per entry; zero entries give free generators.
    pub fn diagonal(orders: &[BigInt]) -> Self {
        let nonzero: Vec<usize> = (0..orders.len()).filter(|&i| !orders[i].is_zero()).collect();
        let mut relations = IntMatrix::zeros(nonzero.len(), orders.len());
        for (r, &i) in nonzero.iter().enumerate() {
            relations[(r, i)] = orders[i].clone();
        }
        Self {
            generators: orders.len(),
            relations,
        }
    }

    pub fn generators(&self) -> usize {
        self.generators
    }

    pub fn relations(&self) -> &IntMatrix {
        &self.relations
    }

    /// Larger of relation count and generator count.
    pub fn size(&self) -> usize {
        self.relations.rows().max(self.generators)
    }

    pub fn direct_sum(&self, other: &PresentationMatrix) -> PresentationMatrix {
        let n = self.generators + other.generators;
        let mut rel = IntMatrix::zeros(self.relations.rows() + other.relations.rows(), n);
        for i in 0..self.relations.rows() {
            for j in 0..self.generators {
                rel[(i, j)] = self.relations[(i, j)].clone();
            }
        }
        let off = self.relations.rows();
        for i in 0..other.relations.rows() {
            for j in 0..other.generators {
                rel[(off + i, self.generators + j)] = other.relations[(i, j)].clone();
            }
        }
        PresentationMatrix {
            generators: n,
            relations: rel,
        }
    }
}

pub fn smith_form(m: &PresentationMatrix) -> SmithForm {
    smith_normal_form(m.relations())
}

/// Structure theorem: primary cyclic atoms for each invariant factor, one
/// free atom per generator beyond the rank.
pub fn decompose(m: &PresentationMatrix) -> Decomposition {
    let s = smith_form(m);
    let mut factors: Vec<BigInt> = s.diagonal().into_iter().filter(|d| !d.is_zero()).collect();
    let rank = factors.len();
    factors.extend(std::iter::repeat_n(BigInt::zero(), m.generators() - rank));
    Decomposition::from_invariant_factors(&factors)
}
