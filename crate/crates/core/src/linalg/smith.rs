//! Smith normal form over the integers with unimodular certificates.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::Serialize;

use super::matrix::IntMatrix;

/// `U * M * V = D` with `U`, `V` unimodular and `D` diagonal,
/// `d1 | d2 | ... | dr`, trailing zeros last.
#[derive(Debug, Clone, Serialize)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub d: IntMatrix,
    /// Inverse of `v`, maintained alongside it.
    #[serde(skip)]
    pub v_inv: IntMatrix,
}

impl SmithForm {
    /// The `min(rows, cols)` diagonal entries of `D`.
    pub fn diagonal(&self) -> Vec<BigInt> {
        let n = self.d.rows().min(self.d.cols());
        (0..n).map(|i| self.d[(i, i)].clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().take_while(|x| !x.is_zero()).count()
    }

    /// Nonunit nonzero invariant factors.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        self.diagonal()
            .into_iter()
            .filter(|d| !d.is_zero() && *d != BigInt::from(1))
            .collect()
    }
}

/// Position of the smallest nonzero entry in the trailing block starting at
/// `(t, t)`, earliest in row-major order on ties.
fn min_pivot(a: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<((usize, usize), BigInt)> = None;
    for i in t..a.rows() {
        for j in t..a.cols() {
            let x = &a[(i, j)];
            if x.is_zero() {
                continue;
            }
            let mag = x.abs();
            if best.as_ref().is_none_or(|(_, b)| mag < *b) {
                best = Some(((i, j), mag));
            }
        }
    }
    best.map(|(pos, _)| pos)
}

pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    let mut v_inv = IntMatrix::identity(cols);

    for t in 0..rows.min(cols) {
        loop {
            let Some((pi, pj)) = min_pivot(&a, t) else {
                return finish(a, u, v, v_inv);
            };
            a.swap_rows(t, pi);
            u.swap_rows(t, pi);
            a.swap_cols(t, pj);
            v.swap_cols(t, pj);
            v_inv.swap_rows(t, pj);

            let pivot = a[(t, t)].clone();
            let mut dirty = false;
            for i in t + 1..rows {
                if a[(i, t)].is_zero() {
                    continue;
                }
                let q = a[(i, t)].div_floor(&pivot);
                let neg = -&q;
                a.add_row_multiple(i, t, &neg);
                u.add_row_multiple(i, t, &neg);
                dirty |= !a[(i, t)].is_zero();
            }
            for j in t + 1..cols {
                if a[(t, j)].is_zero() {
                    continue;
                }
                let q = a[(t, j)].div_floor(&pivot);
                let neg = -&q;
                a.add_col_multiple(j, t, &neg);
                v.add_col_multiple(j, t, &neg);
                v_inv.add_row_multiple(t, j, &q);
                dirty |= !a[(t, j)].is_zero();
            }
            if dirty {
                continue;
            }
            // Row and column of the pivot are clear; enforce divisibility.
            let offender = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !a[(i, j)].is_multiple_of(&pivot)));
            match offender {
                Some(i) => {
                    let one = BigInt::from(1);
                    a.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        if a[(t, t)].is_negative() {
            a.negate_row(t);
            u.negate_row(t);
        }
    }
    finish(a, u, v, v_inv)
}

fn finish(d: IntMatrix, u: IntMatrix, v: IntMatrix, v_inv: IntMatrix) -> SmithForm {
    SmithForm { u, v, d, v_inv }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(m: &IntMatrix) -> SmithForm {
        let s = smith_normal_form(m);
        assert_eq!(s.u.mul(m).mul(&s.v), s.d, "U M V != D for {m}");
        assert_eq!(s.v.mul(&s.v_inv), IntMatrix::identity(m.cols()));
        assert_eq!(s.u.determinant().abs(), BigInt::from(1));
        assert_eq!(s.v.determinant().abs(), BigInt::from(1));
        let diag = s.diagonal();
        for i in 0..s.d.rows() {
            for j in 0..s.d.cols() {
                if i != j {
                    assert!(s.d[(i, j)].is_zero());
                }
            }
        }
        for w in diag.windows(2) {
            assert!(!w[0].is_negative());
            if w[0].is_zero() {
                assert!(w[1].is_zero(), "zeros must trail");
            } else {
                assert!(w[1].is_multiple_of(&w[0]), "divisibility chain broken in {diag:?}");
            }
        }
        s
    }

    fn diag_i64(s: &SmithForm) -> Vec<i64> {
        s.diagonal().iter().map(|x| x.try_into().unwrap()).collect()
    }

    #[test]
    fn two_by_two() {
        let s = check(&IntMatrix::from_i64(&[&[2, 4], &[6, 8]]));
        assert_eq!(diag_i64(&s), vec![2, 4]);
    }

    #[test]
    fn identity_and_zero() {
        let s = check(&IntMatrix::identity(3));
        assert_eq!(diag_i64(&s), vec![1, 1, 1]);
        let s = check(&IntMatrix::from_i64(&[&[0]]));
        assert_eq!(diag_i64(&s), vec![0]);
    }

    #[test]
    fn empty_matrices() {
        let s = check(&IntMatrix::zeros(0, 3));
        assert!(s.diagonal().is_empty());
        assert_eq!(s.v, IntMatrix::identity(3));
        let s = check(&IntMatrix::zeros(2, 0));
        assert_eq!(s.u, IntMatrix::identity(2));
    }

    #[test]
    fn divisibility_needs_row_mixing() {
        let s = check(&IntMatrix::from_i64(&[&[2, 0], &[0, 3]]));
        assert_eq!(diag_i64(&s), vec![1, 6]);
        let s = check(&IntMatrix::from_i64(&[&[4, 0, 0], &[0, 6, 0], &[0, 0, 10]]));
        assert_eq!(diag_i64(&s), vec![2, 2, 60]);
    }

    #[test]
    fn rectangular() {
        let s = check(&IntMatrix::from_i64(&[&[2, 0, 0], &[0, 4, 0]]));
        assert_eq!(diag_i64(&s), vec![2, 4]);
        assert_eq!(s.rank(), 2);
        let s = check(&IntMatrix::from_i64(&[&[1, 2], &[2, 4], &[3, 6]]));
        assert_eq!(diag_i64(&s), vec![1, 0]);
        assert_eq!(s.rank(), 1);
    }

    #[test]
    fn deterministic() {
        let m = IntMatrix::from_i64(&[&[6, -4, 9], &[3, 12, -7], &[0, 5, 5]]);
        let a = smith_normal_form(&m);
        let b = smith_normal_form(&m);
        assert_eq!(a.u, b.u);
        assert_eq!(a.v, b.v);
    }

    proptest::proptest! {
        #[test]
        fn random_matrices(rows in 0usize..5, cols in 0usize..5,
                           entries in proptest::collection::vec(-30i64..30, 25)) {
            let data: Vec<Vec<i64>> = (0..rows).map(|i| entries[i * 5..i * 5 + cols].to_vec()).collect();
            let m = IntMatrix::from_rows(cols, &data);
            let s = check(&m);
            if rows == cols {
                let prod: BigInt = s.diagonal().iter().product();
                proptest::prop_assert_eq!(prod, m.determinant().abs());
            }
        }
    }
}
