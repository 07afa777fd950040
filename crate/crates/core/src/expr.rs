//! Group expressions: `0`, `Z`, `Z/12`, `Q[2^inf*3]`, `QZ[2^inf*3]` joined by `+`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{Atom, Decomposition, GradedGroup};
use crate::supernat::{Exponent, SupernaturalNumber};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Summand {
    Zero,
    Z,
    /// `Z/k`, any `k` as written.
    Cyclic(u64),
    /// `Q_n`
    Q(SupernaturalNumber),
    /// `Q_m / Z`
    QZ(SupernaturalNumber),
}

/// A direct sum as written by the user.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupExpr {
    pub summands: Vec<Summand>,
}

impl fmt::Display for Summand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Summand::Zero => f.write_str("0"),
            Summand::Z => f.write_str("Z"),
            Summand::Cyclic(k) => write!(f, "Z/{k}"),
            Summand::Q(n) => write!(f, "Q[{n}]"),
            Summand::QZ(m) => write!(f, "QZ[{m}]"),
        }
    }
}

fn parse_summand(tok: &str) -> Result<Summand> {
    let t = tok.trim();
    let bracketed = |prefix: &str| -> Option<&str> {
        t.strip_prefix(prefix)
            .and_then(|r| r.strip_prefix('['))
            .and_then(|r| r.strip_suffix(']'))
    };
    if t == "0" {
        Ok(Summand::Zero)
    } else if t == "Z" {
        Ok(Summand::Z)
    } else if let Some(k) = t.strip_prefix("Z/") {
        k.trim()
            .parse::<u64>()
            .map(Summand::Cyclic)
            .map_err(|_| Error::parse(t, "expected Z/<positive integer>"))
    } else if let Some(inner) = bracketed("QZ") {
        inner
            .parse()
            .map(Summand::QZ)
            .map_err(|e| relabel(e, t))
    } else if let Some(inner) = bracketed("Q") {
        inner.parse().map(Summand::Q).map_err(|e| relabel(e, t))
    } else {
        Err(Error::parse(t, "expected one of 0, Z, Z/k, Q[n], QZ[m]"))
    }
}

fn relabel(e: Error, outer: &str) -> Error {
    match e {
        Error::Parse { token, message } => Error::parse(outer, format!("{message} (in `{token}`)")),
        other => other,
    }
}

impl std::str::FromStr for GroupExpr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.trim().is_empty() {
            return Err(Error::parse(s, "empty group expression"));
        }
        let summands = s.split('+').map(parse_summand).collect::<Result<Vec<_>>>()?;
        Ok(GroupExpr { summands })
    }
}

impl fmt::Display for GroupExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.summands.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

fn canonical_summand(s: &Summand) -> Result<Vec<Atom>> {
    Ok(match s {
        Summand::Zero => vec![],
        Summand::Z => vec![Atom::FreeZ],
        Summand::Cyclic(k) if *k < 2 => {
            return Err(Error::parse(
                s.to_string(),
                "Z/0 and Z/1 are not accepted; write Z or 0",
            ))
        }
        Summand::Cyclic(k) => Decomposition::cyclic(*k)?.atoms().to_vec(),
        Summand::Q(n) => vec![Atom::qloc(n.infinite_support())?],
        Summand::QZ(m) => m
            .factors()
            .iter()
            .map(|&(p, e)| match e {
                Exponent::Inf => Atom::Prufer(p),
                Exponent::Finite(a) => Atom::Cyclic { p, a },
            })
            .collect(),
    })
}

/// Atom form of a user expression.
pub fn canonicalize(raw: &GroupExpr) -> Result<Decomposition> {
    let mut atoms = Vec::new();
    for s in &raw.summands {
        atoms.extend(canonical_summand(s)?);
    }
    Ok(Decomposition::new(atoms))
}

/// Parses and canonicalizes in one step.
pub fn parse_group(s: &str) -> Result<Decomposition> {
    canonicalize(&s.parse()?)
}

/// The graded-group file format: `{ "K0": "<expr>", "K1": "<expr>" }`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GradedGroupDoc {
    #[serde(rename = "K0")]
    pub k0: String,
    #[serde(rename = "K1")]
    pub k1: String,
}

impl GradedGroupDoc {
    pub fn to_graded(&self) -> Result<GradedGroup> {
        Ok(GradedGroup::new(parse_group(&self.k0)?, parse_group(&self.k1)?))
    }

    pub fn from_graded(g: &GradedGroup) -> Self {
        Self {
            k0: g.g0.to_string(),
            k1: g.g1.to_string(),
        }
    }
}
