//! Tensor product and Tor on the atom class, extended bilinearly to direct
//! sums, together with presentation-level oracles for finitely generated
//! arguments.

use std::cmp::min;

use crate::error::{Error, Result};
use crate::group::{Atom, Decomposition};
use crate::linalg::IntMatrix;
use crate::presentation::{decompose, PresentationMatrix};
use crate::resolution::TorPair;

/// Size limits for oracle and colimit computations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest relation or generator count of a tensored presentation.
    pub presentation: usize,
    /// Number of tower stages computed by the colimit oracle.
    pub colimit_stages: usize,
    /// Consecutive stages that must agree before a colimit is reported.
    pub stabilization_window: usize,
}

impl Limits {
    /// Fails with a resource-limit error when any of `dims` exceeds the
    /// presentation cap.
    pub fn check(&self, what: &str, dims: &[usize]) -> Result<()> {
        match dims.iter().find(|&&d| d > self.presentation) {
            Some(d) => Err(Error::ResourceLimit(format!(
                "{what} needs a presentation of size {d}, above the cap of {}",
                self.presentation
            ))),
            None => Ok(()),
        }
    }
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            presentation: 64,
            colimit_stages: 12,
            stabilization_window: 3,
        }
    }
}

pub fn tensor_atoms(a: &Atom, b: &Atom) -> Decomposition {
    use Atom::*;
    let result = match (a, b) {
        (FreeZ, x) | (x, FreeZ) => Some(x.clone()),
        (Cyclic { p, a: e }, Cyclic { p: q, a: f }) => (p == q).then(|| Cyclic { p: *p, a: min(*e, *f) }),
        (Cyclic { .. }, Prufer(_)) | (Prufer(_), Cyclic { .. }) => None,
        (c @ Cyclic { p, .. }, QLoc(s)) | (QLoc(s), c @ Cyclic { p, .. }) => (!s.contains(p)).then(|| c.clone()),
        (Prufer(_), Prufer(_)) => None,
        (Prufer(p), QLoc(s)) | (QLoc(s), Prufer(p)) => (!s.contains(p)).then_some(Prufer(*p)),
        (QLoc(s), QLoc(t)) => Some(QLoc(s.union(t).copied().collect())),
    };
    result.map(Decomposition::atom).unwrap_or_default()
}

pub fn tor_atoms(a: &Atom, b: &Atom) -> Decomposition {
    use Atom::*;
    let result = match (a, b) {
        (FreeZ, _) | (_, FreeZ) | (QLoc(_), _) | (_, QLoc(_)) => None,
        (Cyclic { p, a: e }, Cyclic { p: q, a: f }) => (p == q).then(|| Cyclic { p: *p, a: min(*e, *f) }),
        (Prufer(p), c @ Cyclic { p: q, .. }) | (c @ Cyclic { p: q, .. }, Prufer(p)) => {
            (p == q).then(|| c.clone())
        }
        (Prufer(p), Prufer(q)) => (p == q).then_some(Prufer(*p)),
    };
    result.map(Decomposition::atom).unwrap_or_default()
}

fn bilinear(a: &Decomposition, b: &Decomposition, f: fn(&Atom, &Atom) -> Decomposition) -> Decomposition {
    let mut atoms = Vec::new();
    for x in a.atoms() {
        for y in b.atoms() {
            atoms.extend(f(x, y).atoms().iter().cloned());
        }
    }
    Decomposition::new(atoms)
}

pub fn tensor(a: &Decomposition, b: &Decomposition) -> Decomposition {
    bilinear(a, b, tensor_atoms)
}

pub fn tor(a: &Decomposition, b: &Decomposition) -> Decomposition {
    bilinear(a, b, tor_atoms)
}

/// `G ⊗ H` on the generator grid `g_i ⊗ h_j`, relations `r ⊗ h_j` and `g_i ⊗ s`.
pub fn tensor_presentation(g: &PresentationMatrix, h: &PresentationMatrix) -> PresentationMatrix {
    let (n, m) = (g.generators(), h.generators());
    let rel = g
        .relations()
        .kron(&IntMatrix::identity(m))
        .vstack(&IntMatrix::identity(n).kron(h.relations()));
    PresentationMatrix::new(n * m, rel).expect("tensor relations have n*m columns")
}

pub fn oracle_tensor(g: &PresentationMatrix, h: &PresentationMatrix, limits: &Limits) -> Result<Decomposition> {
    let t = tensor_presentation(g, h);
    limits.check("tensor oracle", &[t.generators(), t.relations().rows()])?;
    Ok(decompose(&t))
}

/// Kernel of `P_G ⊗ H → Q_G ⊗ H`.
pub fn oracle_tor(g: &PresentationMatrix, h: &PresentationMatrix, limits: &Limits) -> Result<Decomposition> {
    limits.check("Tor oracle", &[g.generators() * h.generators(), g.size() * h.size()])?;
    Ok(TorPair::new(g, h).ltor()?.decomposition())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn c(p: u64, a: u32) -> Atom {
        Atom::Cyclic { p, a }
    }

    fn q(s: &[u64]) -> Atom {
        Atom::QLoc(s.iter().copied().collect::<BTreeSet<_>>())
    }

    fn all_atoms() -> Vec<Atom> {
        vec![
            Atom::FreeZ,
            c(2, 1),
            c(2, 3),
            c(3, 2),
            Atom::Prufer(2),
            Atom::Prufer(3),
            q(&[2]),
            q(&[3]),
            q(&[2, 3]),
        ]
    }

    #[test]
    fn tables_are_symmetric() {
        for a in all_atoms() {
            for b in all_atoms() {
                assert_eq!(tensor_atoms(&a, &b), tensor_atoms(&b, &a), "{a} ⊗ {b}");
                assert_eq!(tor_atoms(&a, &b), tor_atoms(&b, &a), "Tor({a}, {b})");
            }
        }
    }

    #[test]
    fn tensor_entries() {
        assert_eq!(tensor_atoms(&c(3, 2), &c(3, 2)), Decomposition::atom(c(3, 2)));
        assert_eq!(tensor_atoms(&Atom::FreeZ, &Atom::Prufer(5)), Decomposition::atom(Atom::Prufer(5)));
        assert!(tensor_atoms(&q(&[2]), &c(2, 3)).is_zero());
        assert_eq!(tensor_atoms(&q(&[2]), &c(3, 1)), Decomposition::atom(c(3, 1)));
        assert_eq!(tensor_atoms(&q(&[2]), &q(&[3])), Decomposition::atom(q(&[2, 3])));
        assert!(tensor_atoms(&Atom::Prufer(2), &Atom::Prufer(2)).is_zero());
        assert_eq!(tensor_atoms(&q(&[3]), &Atom::Prufer(2)), Decomposition::atom(Atom::Prufer(2)));
    }

    #[test]
    fn tor_entries() {
        assert_eq!(tor_atoms(&c(5, 2), &c(5, 2)), Decomposition::atom(c(5, 2)));
        assert!(tor_atoms(&Atom::FreeZ, &Atom::Prufer(2)).is_zero());
        assert_eq!(tor_atoms(&Atom::Prufer(2), &c(2, 3)), Decomposition::atom(c(2, 3)));
        assert!(tor_atoms(&Atom::Prufer(2), &c(3, 3)).is_zero());
        assert_eq!(tor_atoms(&Atom::Prufer(3), &Atom::Prufer(3)), Decomposition::atom(Atom::Prufer(3)));
    }

    #[test]
    fn sums() {
        let a = Decomposition::cyclic(4).unwrap().sum(&Decomposition::cyclic(6).unwrap());
        let b = Decomposition::cyclic(10).unwrap();
        assert_eq!(tor(&a, &b), Decomposition::new([c(2, 1), c(2, 1)]));
        assert!(tensor(&Decomposition::zero(), &a).is_zero());
        assert!(tensor(&Decomposition::atom(q(&[2])), &Decomposition::atom(Atom::Prufer(2))).is_zero());
    }

    #[test]
    fn oracle_examples() {
        let lim = Limits::default();
        let p = |o: &[i64]| {
            PresentationMatrix::diagonal(&o.iter().map(|&x| num_bigint::BigInt::from(x)).collect::<Vec<_>>())
        };
        assert_eq!(oracle_tensor(&p(&[4]), &p(&[6]), &lim).unwrap(), Decomposition::cyclic(2).unwrap());
        assert_eq!(
            oracle_tensor(&PresentationMatrix::free(2), &p(&[3]), &lim).unwrap(),
            Decomposition::new([c(3, 1), c(3, 1)])
        );
        assert_eq!(
            oracle_tensor(&p(&[8, 0]), &p(&[12]), &lim).unwrap(),
            Decomposition::cyclic(4).unwrap().sum(&Decomposition::cyclic(12).unwrap())
        );
        assert_eq!(oracle_tor(&p(&[6]), &p(&[4]), &lim).unwrap(), Decomposition::cyclic(2).unwrap());
        assert!(oracle_tor(&p(&[0]), &p(&[5]), &lim).unwrap().is_zero());
    }

    #[test]
    fn oracle_cap() {
        let lim = Limits {
            presentation: 8,
            ..Limits::default()
        };
        let big = PresentationMatrix::free(3);
        assert!(matches!(oracle_tensor(&big, &big, &lim), Err(Error::ResourceLimit(_))));
        assert!(matches!(oracle_tor(&big, &big, &lim), Err(Error::ResourceLimit(_))));
    }
}
