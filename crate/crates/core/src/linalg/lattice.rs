//! Integer lattices given by generating rows: Hermite bases, left kernels,
//! and exact solving of `x * B = b`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::matrix::IntMatrix;
use super::smith::{smith_normal_form, SmithForm};

/// Row Hermite normal form with zero rows removed: echelon, positive pivots,
/// entries above each pivot reduced into `[0, pivot)`. The rows are a basis
/// of the row span of `m`.
pub fn hermite_basis(m: &IntMatrix) -> IntMatrix {
    let mut a = m.clone();
    let (rows, cols) = (a.rows(), a.cols());
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        loop {
            let best = (r..rows)
                .filter(|&i| !a[(i, c)].is_zero())
                .min_by_key(|&i| a[(i, c)].abs());
            let Some(p) = best else { break };
            a.swap_rows(r, p);
            let pivot = a[(r, c)].clone();
            let mut done = true;
            for i in r + 1..rows {
                if a[(i, c)].is_zero() {
                    continue;
                }
                let q = a[(i, c)].div_floor(&pivot);
                a.add_row_multiple(i, r, &-q);
                done &= a[(i, c)].is_zero();
            }
            if done {
                break;
            }
        }
        if a[(r, c)].is_zero() {
            continue;
        }
        if a[(r, c)].is_negative() {
            a.negate_row(r);
        }
        let pivot = a[(r, c)].clone();
        for i in 0..r {
            let q = a[(i, c)].div_floor(&pivot);
            a.add_row_multiple(i, r, &-q);
        }
        r += 1;
    }
    a.row_slice(0..r)
}

/// Basis (Hermite-reduced) of `{x : x * a = 0}`.
pub fn left_kernel(a: &IntMatrix) -> IntMatrix {
    let s = smith_normal_form(a);
    let rank = s.rank();
    hermite_basis(&s.u.row_slice(rank..a.rows()))
}

/// Precomputed solver for `x * B = b` over the integers.
#[derive(Debug, Clone)]
pub struct Solver {
    snf: SmithForm,
    rank: usize,
}

impl Solver {
    pub fn new(b: &IntMatrix) -> Self {
        let snf = smith_normal_form(b);
        let rank = snf.rank();
        Self { snf, rank }
    }

    /// An integer `x` with `x * B = target`, or `None` when none exists.
    /// Free coordinates (beyond the rank) are set to zero, so the answer is
    /// deterministic.
    pub fn solve(&self, target: &[BigInt]) -> Option<Vec<BigInt>> {
        let y = self.snf.v.apply(target);
        let mut z = vec![BigInt::zero(); self.snf.u.rows()];
        for (i, yi) in y.iter().enumerate() {
            if i < self.rank {
                let d = &self.snf.d[(i, i)];
                let (q, r) = yi.div_rem(d);
                if !r.is_zero() {
                    return None;
                }
                z[i] = q;
            } else if !yi.is_zero() {
                return None;
            }
        }
        Some(self.snf.u.apply(&z))
    }
}

/// Solves `x * B = target` once.
pub fn solve_left(b: &IntMatrix, target: &[BigInt]) -> Option<Vec<BigInt>> {
    Solver::new(b).solve(target)
}
