//! Expression trees over nonnegative big integers: literals, powers,
//! products and sums, plus a named variable for symbolic parameters.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};

/// Exact evaluation stops above this many decimal digits.
pub const DEFAULT_DIGIT_CAP: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TowerExpr {
    Lit(BigUint),
    Var(String),
    Pow(Box<TowerExpr>, Box<TowerExpr>),
    Mul(Vec<TowerExpr>),
    Add(Vec<TowerExpr>),
}

use TowerExpr::*;

impl From<u64> for TowerExpr {
    fn from(v: u64) -> Self {
        Lit(BigUint::from(v))
    }
}

impl From<BigUint> for TowerExpr {
    fn from(v: BigUint) -> Self {
        Lit(v)
    }
}

fn bits_cap(digits: u64) -> u64 {
    (digits as f64 * std::f64::consts::LOG2_10).ceil() as u64
}

/// `log2` of a positive big integer, good to about 1e-15 relative.
pub(crate) fn log2_big(n: &BigUint) -> f64 {
    let bits = n.bits();
    let shift = bits.saturating_sub(64);
    let top = (n >> shift).to_u64().expect("at most 64 bits remain");
    shift as f64 + (top as f64).log2()
}

impl TowerExpr {
    pub fn lit(v: u64) -> Self {
        v.into()
    }

    pub fn var(name: &str) -> Self {
        Var(name.to_string())
    }

    pub fn pow(base: TowerExpr, exp: TowerExpr) -> Self {
        Pow(Box::new(base), Box::new(exp))
    }

    pub fn mul(items: Vec<TowerExpr>) -> Self {
        Mul(items)
    }

    pub fn add(items: Vec<TowerExpr>) -> Self {
        Add(items)
    }

    pub fn has_var(&self) -> bool {
        match self {
            Lit(_) => false,
            Var(_) => true,
            Pow(a, b) => a.has_var() || b.has_var(),
            Mul(xs) | Add(xs) => xs.iter().any(TowerExpr::has_var),
        }
    }

    pub fn as_lit(&self) -> Option<&BigUint> {
        match self {
            Lit(v) => Some(v),
            _ => None,
        }
    }

    /// Replaces every occurrence of the variable `name` with `value`.
    pub fn substitute(&self, name: &str, value: &TowerExpr) -> TowerExpr {
        match self {
            Var(v) if v == name => value.clone(),
            Lit(_) | Var(_) => self.clone(),
            Pow(a, b) => TowerExpr::pow(a.substitute(name, value), b.substitute(name, value)),
            Mul(xs) => Mul(xs.iter().map(|x| x.substitute(name, value)).collect()),
            Add(xs) => Add(xs.iter().map(|x| x.substitute(name, value)).collect()),
        }
    }

    /// Exact value with the default digit cap.
    pub fn eval(&self) -> Option<BigUint> {
        self.eval_capped(DEFAULT_DIGIT_CAP)
    }

    /// Exact value, or `None` when a variable is present or some
    /// intermediate would need more than `digits` decimal digits. The cap is
    /// applied as a bit length of `⌈digits·log₂10⌉`.
    pub fn eval_capped(&self, digits: u64) -> Option<BigUint> {
        self.eval_bits(bits_cap(digits))
    }

    fn eval_bits(&self, cap: u64) -> Option<BigUint> {
        let v = match self {
            Lit(v) => v.clone(),
            Var(_) => return None,
            Pow(a, b) => {
                let a = a.eval_bits(cap)?;
                let b = b.eval_bits(cap)?;
                if b.is_zero() || a.is_one() {
                    BigUint::one()
                } else if a.is_zero() {
                    BigUint::zero()
                } else {
                    let e = b.to_u32()?;
                    if (a.bits() - 1).saturating_mul(e as u64) > cap {
                        return None;
                    }
                    if e as f64 * log2_big(&a) > cap as f64 + 2.0 {
                        return None;
                    }
                    a.pow(e)
                }
            }
            Mul(xs) => {
                let vals = xs.iter().map(|x| x.eval_bits(cap)).collect::<Option<Vec<_>>>()?;
                if vals.iter().any(Zero::is_zero) {
                    BigUint::zero()
                } else {
                    let total: u64 = vals.iter().map(|v| v.bits()).sum();
                    if total > cap + vals.len() as u64 {
                        return None;
                    }
                    vals.iter().product()
                }
            }
            Add(xs) => xs
                .iter()
                .map(|x| x.eval_bits(cap))
                .sum::<Option<BigUint>>()?,
        };
        (v.bits() <= cap).then_some(v)
    }

    /// Canonical form: powers of powers merged into right-nested chains,
    /// exponents 0 and 1 and bases 0 and 1 folded, small literal powers
    /// evaluated, products and sums flattened with literals combined and
    /// operands sorted.
    pub fn normalize(&self) -> TowerExpr {
        match self {
            Lit(_) | Var(_) => self.clone(),
            Pow(a, b) => pow_norm(a.normalize(), b.normalize()),
            Mul(xs) => mul_norm(xs.iter().map(TowerExpr::normalize).collect()),
            Add(xs) => add_norm(xs.iter().map(TowerExpr::normalize).collect()),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Lit(v) => match v.to_u64() {
                Some(x) => json!({ "lit": x }),
                None => json!({ "lit": v.to_string() }),
            },
            Var(n) => json!({ "var": n }),
            Pow(a, b) => json!({ "pow": [a.to_json(), b.to_json()] }),
            Mul(xs) => json!({ "mul": xs.iter().map(TowerExpr::to_json).collect::<Vec<_>>() }),
            Add(xs) => json!({ "add": xs.iter().map(TowerExpr::to_json).collect::<Vec<_>>() }),
        }
    }

    pub fn from_json(v: &Value) -> Result<TowerExpr> {
        let bad = || Error::Schema(format!("not an expression: {v}"));
        let obj = v.as_object().filter(|o| o.len() == 1).ok_or_else(bad)?;
        let (key, inner) = obj.iter().next().expect("one entry");
        let list = || -> Result<Vec<TowerExpr>> {
            inner
                .as_array()
                .ok_or_else(bad)?
                .iter()
                .map(TowerExpr::from_json)
                .collect()
        };
        match key.as_str() {
            "lit" => match inner {
                Value::Number(n) => n.as_u64().map(TowerExpr::lit).ok_or_else(bad),
                Value::String(s) => s.parse::<BigUint>().map(Lit).map_err(|_| bad()),
                _ => Err(bad()),
            },
            "var" => inner.as_str().map(TowerExpr::var).ok_or_else(bad),
            "pow" => {
                let mut xs = list()?;
                if xs.len() != 2 {
                    return Err(bad());
                }
                let e = xs.pop().expect("two");
                let b = xs.pop().expect("two");
                Ok(TowerExpr::pow(b, e))
            }
            "mul" => list().map(Mul),
            "add" => list().map(Add),
            _ => Err(bad()),
        }
    }
}

impl serde::Serialize for TowerExpr {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> serde::Deserialize<'de> for TowerExpr {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        TowerExpr::from_json(&v).map_err(serde::de::Error::custom)
    }
}

fn pow_norm(a: TowerExpr, b: TowerExpr) -> TowerExpr {
    if let Lit(e) = &b {
        if e.is_zero() {
            return TowerExpr::lit(1);
        }
        if e.is_one() {
            return a;
        }
    }
    if let Lit(x) = &a {
        if x.is_one() {
            return a;
        }
        // a normalized variable-free expression that is not a literal is ≥ 2
        if x.is_zero() && !b.has_var() {
            return a;
        }
    }
    match (a, b) {
        (Pow(x, y), b) => pow_norm(*x, mul_norm(vec![*y, b])),
        (Lit(x), Lit(e)) => match small_pow(&x, &e) {
            Some(v) => Lit(v),
            None => TowerExpr::pow(Lit(x), Lit(e)),
        },
        (a, b) => TowerExpr::pow(a, b),
    }
}

/// `x^e` when it fits in 64 bits.
fn small_pow(x: &BigUint, e: &BigUint) -> Option<BigUint> {
    let e = e.to_u32()?;
    if x.bits().saturating_sub(1).saturating_mul(e as u64) >= 64 {
        return None;
    }
    let v = x.pow(e);
    (v.bits() <= 64).then_some(v)
}

fn flatten(items: Vec<TowerExpr>, is_mul: bool) -> (BigUint, Vec<TowerExpr>) {
    let mut acc = if is_mul { BigUint::one() } else { BigUint::zero() };
    let mut rest = Vec::new();
    let mut stack = items;
    stack.reverse();
    while let Some(x) = stack.pop() {
        match x {
            Lit(v) if is_mul => acc *= v,
            Lit(v) => acc += v,
            Mul(inner) if is_mul => stack.extend(inner.into_iter().rev()),
            Add(inner) if !is_mul => stack.extend(inner.into_iter().rev()),
            other => rest.push(other),
        }
    }
    (acc, rest)
}

fn mul_norm(items: Vec<TowerExpr>) -> TowerExpr {
    let (acc, mut rest) = flatten(items, true);
    if acc.is_zero() {
        return TowerExpr::lit(0);
    }
    if !acc.is_one() {
        rest.push(Lit(acc));
    }
    rest.sort();
    match rest.len() {
        0 => TowerExpr::lit(1),
        1 => rest.pop().expect("one"),
        _ => Mul(rest),
    }
}

fn add_norm(items: Vec<TowerExpr>) -> TowerExpr {
    let (acc, mut rest) = flatten(items, false);
    if !acc.is_zero() {
        rest.push(Lit(acc));
    }
    rest.sort();
    match rest.len() {
        0 => TowerExpr::lit(0),
        1 => rest.pop().expect("one"),
        _ => Add(rest),
    }
}

impl fmt::Display for TowerExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn atom(e: &TowerExpr, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            match e {
                Lit(_) | Var(_) => write!(f, "{e}"),
                _ => write!(f, "({e})"),
            }
        }
        fn join(xs: &[TowerExpr], sep: &str, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            for (i, x) in xs.iter().enumerate() {
                if i > 0 {
                    f.write_str(sep)?;
                }
                atom(x, f)?;
            }
            Ok(())
        }
        match self {
            Lit(v) => write!(f, "{v}"),
            Var(n) => f.write_str(n),
            Pow(a, b) => {
                atom(a, f)?;
                f.write_str("^")?;
                // right-nested chains read without parentheses
                match b.as_ref() {
                    Pow(..) => write!(f, "{b}"),
                    _ => atom(b, f),
                }
            }
            Mul(xs) => join(xs, "*", f),
            Add(xs) => join(xs, "+", f),
        }
    }
}
