//! Arrow facts with symbolic sizes, and the off-diagonal stepping-up rule.

use std::fmt;

use serde::Serialize;

use super::expr::TowerExpr;
use crate::error::{Error, Result};
use crate::ramsey::{verify_witness, ColoringWitness};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Polarity {
    Holds,
    Fails,
}

/// `coef·l + offset` in the symbolic parameter `l`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Affine {
    pub coef: i64,
    pub offset: i64,
}

impl Affine {
    pub fn constant(v: i64) -> Affine {
        Affine { coef: 0, offset: v }
    }

    pub fn at(self, l: i64) -> i64 {
        self.coef * l + self.offset
    }
}

impl fmt::Display for Affine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.coef, self.offset) {
            (0, c) => write!(f, "{c}"),
            (a, 0) => write!(f, "{}l", coef_str(a)),
            (a, c) if c < 0 => write!(f, "{}l-{}", coef_str(a), -c),
            (a, c) => write!(f, "{}l+{}", coef_str(a), c),
        }
    }
}

fn coef_str(a: i64) -> String {
    match a {
        1 => String::new(),
        -1 => "-".into(),
        a => a.to_string(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum Step {
    /// The starting fact and where it came from.
    Base { source: String },
    /// `n ↛ (l₁,l₂)^k`, `k ≥ 3` ⟹ `2^n ↛ (2l₁+k−4, 2l₂+k−4)^{k+1}`.
    SteppingUp,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ArrowFact {
    pub polarity: Polarity,
    pub n: TowerExpr,
    pub k: u32,
    pub targets: Vec<Affine>,
    pub provenance: Vec<Step>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub flags: Vec<String>,
    #[serde(skip)]
    base: Option<Box<ArrowFact>>,
}

/// Name of the symbolic parameter in sizes and targets.
pub const PARAM: &str = "l";

impl ArrowFact {
    pub fn new(polarity: Polarity, n: TowerExpr, k: u32, targets: Vec<Affine>, source: &str) -> ArrowFact {
        let mut fact = ArrowFact {
            polarity,
            n: n.normalize(),
            k,
            targets,
            provenance: vec![Step::Base { source: source.to_string() }],
            flags: Vec::new(),
            base: None,
        };
        fact.base = Some(Box::new(fact.clone()));
        fact
    }

    /// A negative fact certified by a verified witness.
    pub fn from_witness(w: &ColoringWitness) -> Result<ArrowFact> {
        if !verify_witness(w) {
            return Err(Error::Precondition("the witness does not verify".into()));
        }
        Ok(ArrowFact::new(
            Polarity::Fails,
            TowerExpr::lit(w.n() as u64),
            w.k() as u32,
            w.targets().iter().map(|&l| Affine::constant(l as i64)).collect(),
            "verified coloring witness",
        ))
    }

    /// `2l ↛ (l,4)³`, taken as given for every `l ≥ 4`.
    pub fn two_l_triples() -> ArrowFact {
        ArrowFact::new(
            Polarity::Fails,
            TowerExpr::mul(vec![TowerExpr::lit(2), TowerExpr::var(PARAM)]),
            3,
            vec![Affine { coef: 1, offset: 0 }, Affine::constant(4)],
            "assumed: R_3(l,4) > 2l",
        )
    }

    pub fn is_symbolic(&self) -> bool {
        self.n.has_var() || self.targets.iter().any(|t| t.coef != 0)
    }

    /// Substitutes `l`; negative targets are rejected.
    pub fn instantiate(&self, l: u64) -> Result<ArrowFact> {
        let mut fact = self.substituted(l)?;
        fact.base = match &self.base {
            Some(b) => Some(Box::new(b.substituted(l)?)),
            None => None,
        };
        Ok(fact)
    }

    fn substituted(&self, l: u64) -> Result<ArrowFact> {
        let li = i64::try_from(l).map_err(|_| Error::Domain("l is too large".into()))?;
        let targets = self
            .targets
            .iter()
            .map(|t| {
                let v = t.at(li);
                if v < 0 {
                    Err(Error::Domain(format!("target {t} is negative at l={l}")))
                } else {
                    Ok(Affine::constant(v))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        let mut fact = self.clone();
        fact.n = self.n.substitute(PARAM, &TowerExpr::lit(l)).normalize();
        fact.targets = targets;
        Ok(fact)
    }

    /// Re-applies the recorded steps to the recorded base fact.
    pub fn replay(&self) -> Result<ArrowFact> {
        let base = self
            .base
            .as_deref()
            .ok_or_else(|| Error::Invariant("fact has no recorded base".into()))?;
        let mut fact = base.clone();
        fact.base = self.base.clone();
        for step in &self.provenance[1..] {
            fact = match step {
                Step::SteppingUp => stepping_up(&fact)?,
                Step::Base { .. } => return Err(Error::Invariant("base step after the first".into())),
            };
        }
        fact.flags = self.flags.clone();
        Ok(fact)
    }
}

impl fmt::Display for ArrowFact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let arrow = match self.polarity {
            Polarity::Holds => "->",
            Polarity::Fails => "-/->",
        };
        write!(f, "{} {arrow} (", self.n)?;
        for (i, t) in self.targets.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{t}")?;
        }
        write!(f, ")^{}", self.k)
    }
}

/// `n ↛ (l₁,l₂)^k` with `k ≥ 3` gives `2^n ↛ (2l₁+k−4, 2l₂+k−4)^{k+1}`.
pub fn stepping_up(fact: &ArrowFact) -> Result<ArrowFact> {
    if fact.polarity != Polarity::Fails {
        return Err(Error::Precondition("stepping up needs a negative relation".into()));
    }
    if fact.k < 3 {
        return Err(Error::Precondition(format!("uniformity {} is below 3", fact.k)));
    }
    if fact.targets.len() != 2 {
        return Err(Error::Precondition(format!(
            "stepping up needs exactly two targets, got {}",
            fact.targets.len()
        )));
    }
    let shift = fact.k as i64 - 4;
    let mut next = fact.clone();
    next.n = TowerExpr::pow(TowerExpr::lit(2), fact.n.clone()).normalize();
    next.k = fact.k + 1;
    next.targets = fact
        .targets
        .iter()
        .map(|t| Affine { coef: 2 * t.coef, offset: 2 * t.offset + shift })
        .collect();
    next.provenance.push(Step::SteppingUp);
    Ok(next)
}
