//! Canonical forms for the groups in scope: finite direct sums of `Z`,
//! primary cyclic groups, Prüfer groups and localizations of `Z` inside `Q`.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::presentation::PresentationMatrix;
use crate::supernat::{is_prime, Exponent, SupernaturalNumber};

/// An indecomposable building block.
///
/// Variant order is the canonical sort order of a [`Decomposition`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Atom {
    FreeZ,
    /// `Z/p^a`
    Cyclic { p: u64, a: u32 },
    /// `Z(p^inf)`
    Prufer(u64),
    /// Subgroup of `Q` generated by `1/p^k` for `p` in the support.
    QLoc(BTreeSet<u64>),
}

impl Atom {
    pub fn cyclic(p: u64, a: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidArgument(format!("Z/{p}^{a}: {p} is not prime")));
        }
        if a == 0 {
            return Err(Error::InvalidArgument("cyclic exponent must be >= 1".into()));
        }
        Ok(Atom::Cyclic { p, a })
    }

    pub fn prufer(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidArgument(format!("Z({p}^inf): {p} is not prime")));
        }
        Ok(Atom::Prufer(p))
    }

    /// Empty support canonicalizes to `FreeZ`.
    pub fn qloc(support: impl IntoIterator<Item = u64>) -> Result<Self> {
        let support: BTreeSet<u64> = support.into_iter().collect();
        if let Some(p) = support.iter().find(|&&p| !is_prime(p)) {
            return Err(Error::InvalidArgument(format!("localization at {p}: not prime")));
        }
        Ok(if support.is_empty() {
            Atom::FreeZ
        } else {
            Atom::QLoc(support)
        })
    }

    pub fn is_finitely_generated(&self) -> bool {
        matches!(self, Atom::FreeZ | Atom::Cyclic { .. })
    }

    pub fn is_torsion_free(&self) -> bool {
        matches!(self, Atom::FreeZ | Atom::QLoc(_))
    }

    /// The prime of a torsion atom.
    pub fn prime(&self) -> Option<u64> {
        match self {
            Atom::Cyclic { p, .. } | Atom::Prufer(p) => Some(*p),
            _ => None,
        }
    }

    /// Order of a cyclic atom.
    pub fn order(&self) -> Option<BigInt> {
        match self {
            Atom::Cyclic { p, a } => Some(num_traits::pow(BigInt::from(*p), *a as usize)),
            _ => None,
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::FreeZ => f.write_str("Z"),
            Atom::Cyclic { .. } => write!(f, "Z/{}", self.order().expect("cyclic")),
            Atom::Prufer(p) => write!(f, "QZ[{p}^inf]"),
            Atom::QLoc(s) => {
                let n = SupernaturalNumber::infinite_over(s.iter().copied())
                    .expect("support primes validated on construction");
                write!(f, "Q[{n}]")
            }
        }
    }
}

/// Trial-division factorization of a positive integer.
pub(crate) fn factor_bigint(n: &BigInt) -> Vec<(u64, u32)> {
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut d: u64 = 2;
    loop {
        let dd = BigInt::from(d);
        if &dd * &dd > n {
            break;
        }
        let mut e = 0;
        loop {
            let (q, r) = n.div_rem(&dd);
            if !r.is_zero() {
                break;
            }
            n = q;
            e += 1;
        }
        if e > 0 {
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > BigInt::one() {
        out.push((n.to_u64().expect("prime cofactor fits in u64 at desk scale"), 1));
    }
    out
}

/// A finite direct sum of atoms, kept sorted. Two decompositions denote
/// isomorphic groups exactly when they are equal.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
pub struct Decomposition {
    atoms: Vec<Atom>,
}

impl Decomposition {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn new(atoms: impl IntoIterator<Item = Atom>) -> Self {
        let mut atoms: Vec<Atom> = atoms.into_iter().collect();
        atoms.sort();
        Self { atoms }
    }

    pub fn atom(a: Atom) -> Self {
        Self { atoms: vec![a] }
    }

    pub fn free(rank: usize) -> Self {
        Self {
            atoms: vec![Atom::FreeZ; rank],
        }
    }

    /// Primary decomposition of `Z/n`, `n >= 2`.
    pub fn cyclic(n: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArgument(format!("Z/{n} is not a nonzero cyclic group")));
        }
        Ok(Self::from_invariant_factors(&[BigInt::from(n)]))
    }

    /// Group `⊕ Z/d_i` where `0` stands for `Z` and `1` for the trivial group.
    pub fn from_invariant_factors(factors: &[BigInt]) -> Self {
        let mut atoms = Vec::new();
        for d in factors {
            if d.is_zero() {
                atoms.push(Atom::FreeZ);
            } else {
                for (p, a) in factor_bigint(d) {
                    atoms.push(Atom::Cyclic { p, a });
                }
            }
        }
        Self::new(atoms)
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Direct sum.
    pub fn sum(&self, other: &Decomposition) -> Decomposition {
        Self::new(self.atoms.iter().chain(&other.atoms).cloned())
    }

    pub fn is_finitely_generated(&self) -> bool {
        self.atoms.iter().all(Atom::is_finitely_generated)
    }

    pub fn is_torsion_free(&self) -> bool {
        self.atoms.iter().all(Atom::is_torsion_free)
    }

    pub fn free_rank(&self) -> usize {
        self.atoms.iter().filter(|a| **a == Atom::FreeZ).count()
    }

    /// Rank of `G ⊗ Q`.
    pub fn torsion_free_rank(&self) -> usize {
        self.atoms.iter().filter(|a| a.is_torsion_free()).count()
    }

    /// Torsion subgroup.
    pub fn torsion(&self) -> Decomposition {
        Self::new(self.atoms.iter().filter(|a| !a.is_torsion_free()).cloned())
    }

    pub fn p_primary(&self, p: u64) -> Decomposition {
        Self::new(self.atoms.iter().filter(|a| a.prime() == Some(p)).cloned())
    }

    /// Primes carried by torsion atoms or localizations.
    pub fn primes(&self) -> BTreeSet<u64> {
        let mut out = BTreeSet::new();
        for a in &self.atoms {
            match a {
                Atom::Cyclic { p, .. } | Atom::Prufer(p) => {
                    out.insert(*p);
                }
                Atom::QLoc(s) => out.extend(s),
                Atom::FreeZ => {}
            }
        }
        out
    }

    /// Cardinality of a finite group.
    pub fn order(&self) -> Option<BigInt> {
        self.atoms.iter().map(Atom::order).product()
    }

    /// `2G = 0`, i.e. `-id = id` on `G`.
    pub fn exponent_divides_two(&self) -> bool {
        self.atoms.iter().all(|a| *a == Atom::Cyclic { p: 2, a: 1 })
    }

    /// Diagonal presentation of a finitely generated group.
    pub fn presentation(&self) -> Option<PresentationMatrix> {
        let mut orders = Vec::with_capacity(self.atoms.len());
        for a in &self.atoms {
            match a {
                Atom::FreeZ => orders.push(BigInt::zero()),
                Atom::Cyclic { .. } => orders.push(a.order()?),
                _ => return None,
            }
        }
        Some(PresentationMatrix::diagonal(&orders))
    }
}

impl fmt::Display for Decomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.atoms.is_empty() {
            return f.write_str("0");
        }
        for (i, a) in self.atoms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

impl FromIterator<Atom> for Decomposition {
    fn from_iter<I: IntoIterator<Item = Atom>>(iter: I) -> Self {
        Self::new(iter)
    }
}

/// Multiset equality of canonical decompositions.
pub fn is_isomorphic(a: &Decomposition, b: &Decomposition) -> bool {
    a == b
}

pub fn exponent_divides_two(d: &Decomposition) -> bool {
    d.exponent_divides_two()
}

/// `(K0, K1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct GradedGroup {
    pub g0: Decomposition,
    pub g1: Decomposition,
}

impl GradedGroup {
    pub fn new(g0: Decomposition, g1: Decomposition) -> Self {
        Self { g0, g1 }
    }

    pub fn grade(&self, i: usize) -> &Decomposition {
        match i % 2 {
            0 => &self.g0,
            _ => &self.g1,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.g0.is_zero() && self.g1.is_zero()
    }

    pub fn primes(&self) -> BTreeSet<u64> {
        let mut p = self.g0.primes();
        p.extend(self.g1.primes());
        p
    }
}

impl fmt::Display for GradedGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(K0 = {}, K1 = {})", self.g0, self.g1)
    }
}

/// Supernatural number whose infinite support is `primes`.
pub(crate) fn support_number(primes: &BTreeSet<u64>) -> SupernaturalNumber {
    SupernaturalNumber::new(primes.iter().map(|&p| (p, Exponent::Inf)))
        .expect("supports hold primes only")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_order() {
        let d = Decomposition::new([
            Atom::QLoc(BTreeSet::from([2])),
            Atom::Prufer(3),
            Atom::Cyclic { p: 3, a: 1 },
            Atom::Cyclic { p: 2, a: 2 },
            Atom::FreeZ,
        ]);
        assert_eq!(d.to_string(), "Z + Z/4 + Z/3 + QZ[3^inf] + Q[2^inf]");
    }

    #[test]
    fn atom_validation() {
        assert!(Atom::cyclic(4, 1).is_err());
        assert!(Atom::cyclic(2, 0).is_err());
        assert!(Atom::prufer(1).is_err());
        assert_eq!(Atom::qloc([]).unwrap(), Atom::FreeZ);
        assert!(Atom::qloc([6]).is_err());
    }

    #[test]
    fn cyclic_is_primary() {
        let d = Decomposition::cyclic(12).unwrap();
        assert_eq!(d.atoms(), &[Atom::Cyclic { p: 2, a: 2 }, Atom::Cyclic { p: 3, a: 1 }]);
        assert!(Decomposition::cyclic(1).is_err());
        assert!(Decomposition::cyclic(0).is_err());
    }

    #[test]
    fn isomorphism_is_multiset_equality() {
        let a = Decomposition::new([Atom::Cyclic { p: 2, a: 1 }, Atom::Cyclic { p: 3, a: 1 }]);
        assert!(is_isomorphic(&a, &Decomposition::cyclic(6).unwrap()));
        assert!(!is_isomorphic(
            &Decomposition::atom(Atom::Prufer(2)),
            &Decomposition::atom(Atom::Cyclic { p: 2, a: 64 })
        ));
    }

    #[test]
    fn exponent_two() {
        let c2 = Atom::Cyclic { p: 2, a: 1 };
        assert!(Decomposition::new([c2.clone(), c2]).exponent_divides_two());
        assert!(!Decomposition::atom(Atom::Cyclic { p: 2, a: 2 }).exponent_divides_two());
        assert!(Decomposition::zero().exponent_divides_two());
        assert!(!Decomposition::atom(Atom::FreeZ).exponent_divides_two());
    }

    #[test]
    fn factoring() {
        assert_eq!(factor_bigint(&BigInt::from(360)), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(factor_bigint(&BigInt::from(97)), vec![(97, 1)]);
        assert!(factor_bigint(&BigInt::from(1)).is_empty());
    }

    #[test]
    fn orders_and_presentations() {
        let d = Decomposition::new([Atom::Cyclic { p: 2, a: 3 }, Atom::Cyclic { p: 3, a: 1 }]);
        assert_eq!(d.order(), Some(BigInt::from(24)));
        assert_eq!(Decomposition::atom(Atom::FreeZ).order(), None);
        assert!(Decomposition::atom(Atom::Prufer(2)).presentation().is_none());
        let p = Decomposition::new([Atom::FreeZ, Atom::Cyclic { p: 2, a: 1 }]).presentation().unwrap();
        assert_eq!(p.generators(), 2);
    }
}
