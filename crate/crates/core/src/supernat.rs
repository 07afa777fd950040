//! Supernatural numbers: formal products `p1^e1 * p2^e2 * ...` with exponents
//! in the naturals extended by an explicit infinity.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exponent of a prime in a supernatural number.
///
/// `Finite(_) < Inf`, so the derived ordering is the one used by
/// divisibility, gcd and lcm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Exponent {
    Finite(u32),
    Inf,
}

impl Exponent {
    pub fn is_zero(self) -> bool {
        self == Exponent::Finite(0)
    }

    fn add(self, other: Exponent) -> Exponent {
        match (self, other) {
            (Exponent::Finite(a), Exponent::Finite(b)) => Exponent::Finite(a.saturating_add(b)),
            _ => Exponent::Inf,
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(e) => write!(f, "{e}"),
            Exponent::Inf => f.write_str("inf"),
        }
    }
}

/// Trial division. Inputs are small primes supplied by hand.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Prime factorization of a positive integer by trial division, ascending.
pub fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn check_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("{p} is not prime")))
    }
}

/// A supernatural number in normal form: primes strictly ascending, no zero
/// exponents. The empty product is `1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct SupernaturalNumber {
    factors: Vec<(u64, Exponent)>,
}

impl SupernaturalNumber {
    pub fn one() -> Self {
        Self::default()
    }

    /// Builds a supernatural number from `(prime, exponent)` pairs in any
    /// order. Zero exponents are dropped; a repeated prime is rejected.
    pub fn new(factors: impl IntoIterator<Item = (u64, Exponent)>) -> Result<Self> {
        let mut factors: Vec<(u64, Exponent)> = factors.into_iter().collect();
        for &(p, _) in &factors {
            check_prime(p)?;
        }
        factors.sort_by_key(|&(p, _)| p);
        if let Some(w) = factors.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidArgument(format!("prime {} repeated", w[0].0)));
        }
        factors.retain(|&(_, e)| !e.is_zero());
        Ok(Self { factors })
    }

    pub fn prime_power(p: u64, e: Exponent) -> Result<Self> {
        Self::new([(p, e)])
    }

    /// `p1^inf * p2^inf * ...` for the given primes.
    pub fn infinite_over(primes: impl IntoIterator<Item = u64>) -> Result<Self> {
        Self::new(primes.into_iter().map(|p| (p, Exponent::Inf)))
    }

    pub fn from_u64(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("0 is not a supernatural number".into()));
        }
        Ok(Self {
            factors: factor_u64(n)
                .into_iter()
                .map(|(p, e)| (p, Exponent::Finite(e)))
                .collect(),
        })
    }

    pub fn factors(&self) -> &[(u64, Exponent)] {
        &self.factors
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    fn get(&self, p: u64) -> Exponent {
        self.factors
            .binary_search_by_key(&p, |&(q, _)| q)
            .map(|i| self.factors[i].1)
            .unwrap_or(Exponent::Finite(0))
    }

    pub fn valuation(&self, p: u64) -> Result<Exponent> {
        check_prime(p)?;
        Ok(self.get(p))
    }

    pub fn divides(&self, other: &Self) -> bool {
        self.factors.iter().all(|&(p, e)| e <= other.get(p))
    }

    fn merge(&self, other: &Self, pick: impl Fn(Exponent, Exponent) -> Exponent) -> Self {
        let primes: BTreeSet<u64> = self
            .factors
            .iter()
            .chain(&other.factors)
            .map(|&(p, _)| p)
            .collect();
        let factors = primes
            .into_iter()
            .map(|p| (p, pick(self.get(p), other.get(p))))
            .filter(|&(_, e)| !e.is_zero())
            .collect();
        Self { factors }
    }

    pub fn gcd(&self, other: &Self) -> Self {
        self.merge(other, std::cmp::min)
    }

    pub fn lcm(&self, other: &Self) -> Self {
        self.merge(other, std::cmp::max)
    }

    /// Every stored exponent is infinite. Vacuously true for `1`.
    pub fn is_infinite_type(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == Exponent::Inf)
    }

    pub fn is_finite(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e != Exponent::Inf)
    }

    /// Replaces every infinite exponent by `bound`.
    pub fn truncate(&self, bound: u32) -> Result<Self> {
        if bound == 0 {
            return Err(Error::InvalidArgument("truncation bound must be >= 1".into()));
        }
        let factors = self
            .factors
            .iter()
            .map(|&(p, e)| match e {
                Exponent::Inf => (p, Exponent::Finite(bound)),
                fin => (p, fin),
            })
            .collect();
        Ok(Self { factors })
    }

    pub fn infinite_support(&self) -> BTreeSet<u64> {
        self.factors
            .iter()
            .filter(|&&(_, e)| e == Exponent::Inf)
            .map(|&(p, _)| p)
            .collect()
    }

    /// The ordinary integer this number denotes, if all exponents are finite.
    pub fn to_bigint(&self) -> Option<BigInt> {
        let mut acc = BigInt::from(1);
        for &(p, e) in &self.factors {
            match e {
                Exponent::Finite(k) => acc *= num_traits::pow(BigInt::from(p), k as usize),
                Exponent::Inf => return None,
            }
        }
        Some(acc)
    }
}

impl Mul for &SupernaturalNumber {
    type Output = SupernaturalNumber;

    fn mul(self, rhs: &SupernaturalNumber) -> SupernaturalNumber {
        self.merge(rhs, Exponent::add)
    }
}

impl fmt::Display for SupernaturalNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("1");
        }
        for (i, &(p, e)) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            match e {
                Exponent::Finite(1) => write!(f, "{p}")?,
                e => write!(f, "{p}^{e}")?,
            }
        }
        Ok(())
    }
}

impl FromStr for SupernaturalNumber {
    type Err = Error;

    /// Parses `2^inf*3^2*5`. Primes must be ascending; `1` is the empty product.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "1" {
            return Ok(Self::one());
        }
        let mut factors = Vec::new();
        for part in s.split('*') {
            let part = part.trim();
            let (base, exp) = match part.split_once('^') {
                Some((b, e)) => (b.trim(), Some(e.trim())),
                None => (part, None),
            };
            let p: u64 = base
                .parse()
                .map_err(|_| Error::parse(part, "expected a prime"))?;
            if !is_prime(p) {
                return Err(Error::parse(part, format!("{p} is not prime")));
            }
            let e = match exp {
                None => Exponent::Finite(1),
                Some("inf") => Exponent::Inf,
                Some(e) => match e.parse::<u32>() {
                    Ok(k) if k >= 1 => Exponent::Finite(k),
                    _ => return Err(Error::parse(part, "exponent must be a positive integer or `inf`")),
                },
            };
            if let Some(&(last, _)) = factors.last() {
                if p <= last {
                    return Err(Error::parse(part, "primes must be strictly ascending"));
                }
            }
            factors.push((p, e));
        }
        Ok(Self { factors })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sn(s: &str) -> SupernaturalNumber {
        s.parse().unwrap()
    }

    #[test]
    fn valuations() {
        assert_eq!(sn("2^2*3").valuation(2).unwrap(), Exponent::Finite(2));
        assert_eq!(SupernaturalNumber::one().valuation(7).unwrap(), Exponent::Finite(0));
        assert_eq!(sn("2^inf*3").valuation(2).unwrap(), Exponent::Inf);
        assert!(sn("3").valuation(4).is_err());
    }

    #[test]
    fn from_u64_factors() {
        assert_eq!(SupernaturalNumber::from_u64(12).unwrap(), sn("2^2*3"));
        assert!(SupernaturalNumber::from_u64(0).is_err());
        assert!(SupernaturalNumber::from_u64(1).unwrap().is_one());
    }

    #[test]
    fn divisibility() {
        let one = SupernaturalNumber::one();
        assert!(one.divides(&sn("2^inf*7")));
        assert!(sn("2^inf").divides(&sn("2^inf*3")));
        assert!(sn("2^2").divides(&sn("2^inf")));
        assert!(!sn("2^3").divides(&sn("2^2*3")));
    }

    #[test]
    fn gcd_lcm_examples() {
        let twelve = SupernaturalNumber::from_u64(12).unwrap();
        let eighteen = SupernaturalNumber::from_u64(18).unwrap();
        assert_eq!(twelve.gcd(&eighteen), SupernaturalNumber::from_u64(6).unwrap());
        assert_eq!(sn("2^inf").lcm(&sn("2^2*3")), sn("2^inf*3"));
        assert_eq!(sn("2^inf*5").gcd(&SupernaturalNumber::one()), SupernaturalNumber::one());
    }

    #[test]
    fn infinite_type() {
        assert!(SupernaturalNumber::one().is_infinite_type());
        assert!(sn("2^inf*3^inf").is_infinite_type());
        assert!(!sn("2^inf*3").is_infinite_type());
    }

    #[test]
    fn truncation() {
        assert_eq!(sn("2^inf*3").truncate(5).unwrap(), sn("2^5*3"));
        assert_eq!(sn("2^2*3").truncate(99).unwrap(), sn("2^2*3"));
        assert!(SupernaturalNumber::one().truncate(4).unwrap().is_one());
        assert!(sn("2").truncate(0).is_err());
    }

    #[test]
    fn support() {
        assert_eq!(sn("2^inf*3").infinite_support(), BTreeSet::from([2]));
        assert!(SupernaturalNumber::one().infinite_support().is_empty());
        assert_eq!(sn("2^inf*5^inf").infinite_support(), BTreeSet::from([2, 5]));
    }

    #[test]
    fn text_form() {
        assert_eq!(sn("2^inf*3^2*5").to_string(), "2^inf*3^2*5");
        assert_eq!(sn("2^1*3").to_string(), "2*3");
        assert_eq!(SupernaturalNumber::one().to_string(), "1");
        assert!("3*2".parse::<SupernaturalNumber>().is_err());
        assert!("4".parse::<SupernaturalNumber>().is_err());
        assert!("2^0".parse::<SupernaturalNumber>().is_err());
        assert!("2^x".parse::<SupernaturalNumber>().is_err());
    }

    #[test]
    fn constructor_normalizes() {
        let n = SupernaturalNumber::new([(3, Exponent::Finite(1)), (2, Exponent::Finite(0))]).unwrap();
        assert_eq!(n, sn("3"));
        assert!(SupernaturalNumber::new([(2, Exponent::Inf), (2, Exponent::Finite(1))]).is_err());
        assert!(SupernaturalNumber::new([(9, Exponent::Inf)]).is_err());
    }

    fn arb_exp() -> impl Strategy<Value = Exponent> {
        prop_oneof![
            3 => (0u32..4).prop_map(Exponent::Finite),
            1 => Just(Exponent::Inf),
        ]
    }

    fn arb_sn() -> impl Strategy<Value = SupernaturalNumber> {
        (arb_exp(), arb_exp(), arb_exp(), arb_exp()).prop_map(|(a, b, c, d)| {
            SupernaturalNumber::new([(2, a), (3, b), (5, c), (7, d)]).unwrap()
        })
    }

    proptest! {
        #[test]
        fn lattice_laws(a in arb_sn(), b in arb_sn(), c in arb_sn()) {
            // partial order
            prop_assert!(a.divides(&a));
            if a.divides(&b) && b.divides(&a) { prop_assert_eq!(&a, &b); }
            if a.divides(&b) && b.divides(&c) { prop_assert!(a.divides(&c)); }
            // meet / join
            prop_assert!(a.gcd(&b).divides(&a) && a.gcd(&b).divides(&b));
            prop_assert!(a.divides(&a.lcm(&b)) && b.divides(&a.lcm(&b)));
            prop_assert_eq!(a.gcd(&b.gcd(&c)), a.gcd(&b).gcd(&c));
            prop_assert_eq!(a.lcm(&b.lcm(&c)), a.lcm(&b).lcm(&c));
            prop_assert_eq!(a.gcd(&a.lcm(&b)), a.clone());
            prop_assert_eq!(a.lcm(&a.gcd(&b)), a.clone());
        }

        #[test]
        fn divides_via_gcd_and_lcm(a in arb_sn(), b in arb_sn()) {
            let d = a.divides(&b);
            prop_assert_eq!(d, a.gcd(&b) == a);
            prop_assert_eq!(d, a.lcm(&b) == b);
        }

        #[test]
        fn truncation_chain(n in arb_sn(), b in 1u32..6) {
            let t = n.truncate(b).unwrap();
            let t1 = n.truncate(b + 1).unwrap();
            prop_assert!(t.is_finite());
            prop_assert!(t.divides(&t1));
            prop_assert!(t1.divides(&n));
        }

        #[test]
        fn infinite_type_absorbs_square(m in arb_sn()) {
            if m.is_infinite_type() {
                prop_assert_eq!(&(&m * &m), &m);
            }
        }

        #[test]
        fn text_round_trip(n in arb_sn()) {
            prop_assert_eq!(n.to_string().parse::<SupernaturalNumber>().unwrap(), n);
        }
    }
}
