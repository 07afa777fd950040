//! The unsigned swap on `C ⊗ C` and the unsigned `η` on `Tor(C, C)` are the
//! identity for cyclic `C`, and for the truncations `Z/p^k` of Prüfer groups.

use flipk_core::fg::FgGroup;
use flipk_core::functors::tensor_presentation;
use flipk_core::linalg::IntMatrix;
use flipk_core::resolution::{eta, is_identity_mod};
use flipk_core::PresentationMatrix;
use num_bigint::BigInt;

fn cyclic(n: u64) -> PresentationMatrix {
    PresentationMatrix::diagonal(&[BigInt::from(n)])
}

fn swap_matrix(n: usize) -> IntMatrix {
    let mut m = IntMatrix::zeros(n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            m[(i * n + j, j * n + i)] = BigInt::from(1);
        }
    }
    m
}

fn swap_is_identity(g: &PresentationMatrix) -> bool {
    let t = FgGroup::from_presentation(&tensor_presentation(g, g));
    let m = t.induced_matrix(&t, &swap_matrix(g.generators())).unwrap();
    is_identity_mod(&t.orders(), &m)
}

#[test]
fn swap_on_cyclic_tensor_squares() {
    for n in 2..=12 {
        assert!(swap_is_identity(&cyclic(n)), "Z/{n}");
    }
    assert!(swap_is_identity(&PresentationMatrix::free(1)));
}

#[test]
fn swap_on_a_noncyclic_square_is_not_identity() {
    let g = PresentationMatrix::free(2);
    assert!(!swap_is_identity(&g));
}

#[test]
fn eta_on_cyclic_groups() {
    for n in 2..=12 {
        let e = eta(&cyclic(n), &cyclic(n)).unwrap();
        assert!(e.is_identity(), "Z/{n}");
    }
}

#[test]
fn eta_on_prime_power_truncations() {
    for p in [2u64, 3, 5] {
        for k in 1..=6 {
            let c = cyclic(p.pow(k));
            assert!(eta(&c, &c).unwrap().is_identity(), "Z/{p}^{k}");
            assert!(swap_is_identity(&c));
        }
    }
}
