//! Sound comparison of expressions too large to evaluate.
//!
//! A value `x ≥ 0` is bracketed as `E^L(lo) ≤ x ≤ E^L(hi)` with `E(v) = 2^v`
//! and `E(-∞) = 0`. Every floating-point step is rounded outward. A NaN lower
//! bound carries no information, so it never decides a comparison.

use std::cmp::Ordering;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use super::expr::{log2_big, TowerExpr};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Cmp {
    Less,
    Equal,
    Greater,
    Unknown,
}

impl From<Ordering> for Cmp {
    fn from(o: Ordering) -> Cmp {
        match o {
            Ordering::Less => Cmp::Less,
            Ordering::Equal => Cmp::Equal,
            Ordering::Greater => Cmp::Greater,
        }
    }
}

impl Cmp {
    pub fn reverse(self) -> Cmp {
        match self {
            Cmp::Less => Cmp::Greater,
            Cmp::Greater => Cmp::Less,
            c => c,
        }
    }
}

const REL: f64 = 1e-12;
const ABS: f64 = 1e-14;

fn down(r: f64) -> f64 {
    if r.is_finite() {
        r - r.abs() * REL - ABS
    } else {
        r
    }
}

fn up(r: f64) -> f64 {
    if r.is_finite() {
        r + r.abs() * REL + ABS
    } else {
        r
    }
}

fn exp2_down(v: f64) -> f64 {
    if v.is_nan() {
        f64::NAN
    } else if v >= 1024.0 {
        f64::MAX
    } else {
        down(v.exp2()).max(0.0)
    }
}

fn exp2_up(v: f64) -> f64 {
    if v >= 1024.0 {
        f64::INFINITY
    } else {
        up(v.exp2())
    }
}

/// Below this, `2^hi` is comfortably finite.
const LOWER_BELOW: f64 = 1000.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mag {
    pub level: u32,
    pub lo: f64,
    pub hi: f64,
}

impl Mag {
    fn from_big(n: &BigUint) -> Mag {
        if n.is_zero() {
            return Mag { level: 0, lo: 0.0, hi: 0.0 };
        }
        if n.bits() <= 1000 {
            let f = n.to_f64().expect("finite below 2^1000");
            Mag { level: 0, lo: down(f), hi: up(f) }
        } else {
            let l = log2_big(n);
            Mag { level: 1, lo: down(down(l)), hi: up(up(l)) }
        }
    }

    /// Same value one level up.
    fn lift(self) -> Mag {
        let lo = if self.lo > 0.0 {
            down(self.lo.log2())
        } else if self.level == 0 && !self.lo.is_nan() {
            f64::NEG_INFINITY
        } else {
            f64::NAN
        };
        let hi = if self.hi > 0.0 { up(self.hi.log2()) } else { f64::NEG_INFINITY };
        Mag { level: self.level + 1, lo, hi }
    }

    /// Same value one level down.
    fn lower(self) -> Mag {
        debug_assert!(self.level > 0);
        Mag {
            level: self.level - 1,
            lo: exp2_down(self.lo),
            hi: exp2_up(self.hi),
        }
    }

    fn at_level(mut self, level: u32) -> Mag {
        while self.level < level {
            self = self.lift();
        }
        while self.level > level {
            self = self.lower();
        }
        self
    }

    /// Moves to the lowest level where the numbers stay finite.
    fn settle(mut self) -> Mag {
        while self.level > 0 && self.hi < LOWER_BELOW {
            self = self.lower();
        }
        self
    }

    /// `log₂ x` for `x ≥ 1`.
    fn log2(self) -> Mag {
        if self.level > 0 {
            Mag { level: self.level - 1, ..self }.settle()
        } else {
            let lo = if self.lo > 0.0 { down(self.lo.log2()) } else { f64::NEG_INFINITY };
            let hi = if self.hi > 0.0 { up(self.hi.log2()) } else { f64::NEG_INFINITY };
            Mag { level: 0, lo, hi }
        }
    }

    fn exp2(self) -> Mag {
        Mag { level: self.level + 1, ..self }.settle()
    }

    /// `a + b` for `a, b ≥ 0`.
    fn add(a: Mag, b: Mag) -> Mag {
        let level = a.level.max(b.level);
        if level == 0 {
            return Mag {
                level: 0,
                lo: down(nonneg(a.lo) + nonneg(b.lo)),
                hi: up(a.hi + b.hi),
            };
        }
        let (a, b) = (a.at_level(level), b.at_level(level));
        // a + b ≤ 2·max(a, b); at level 1 doubling is +1 exactly, higher up
        // +1 over a nonnegative argument at least doubles
        let h = a.hi.max(b.hi);
        let h = if level == 1 { h } else { h.max(0.0) };
        Mag { level, lo: a.lo.max(b.lo), hi: up(h + 1.0) }.settle()
    }

    /// `a · b` for `a, b ≥ 1`.
    fn mul(a: Mag, b: Mag) -> Mag {
        if a.level == 0 && b.level == 0 && a.hi * b.hi < 1e300 {
            return Mag {
                level: 0,
                lo: down(nonneg(a.lo) * nonneg(b.lo)),
                hi: up(a.hi * b.hi),
            };
        }
        Mag::add(a.log2(), b.log2()).exp2()
    }

    /// Brackets a normalized, variable-free expression.
    pub fn of(e: &TowerExpr) -> Option<Mag> {
        Some(match e {
            TowerExpr::Lit(v) => Mag::from_big(v),
            TowerExpr::Var(_) => return None,
            TowerExpr::Pow(a, b) => {
                // bases of normalized powers are at least 2, so log₂ a ≥ 1
                let la = Mag::of(a)?.log2();
                let la = if la.level == 0 { Mag { lo: nonneg(la.lo).max(1.0), ..la } } else { la };
                Mag::mul(Mag::of(b)?, la).exp2()
            }
            TowerExpr::Mul(xs) => {
                let mut it = xs.iter();
                let first = Mag::of(it.next()?)?;
                it.try_fold(first, |acc, x| Some(Mag::mul(acc, Mag::of(x)?)))?
            }
            TowerExpr::Add(xs) => {
                let mut it = xs.iter();
                let first = Mag::of(it.next()?)?;
                it.try_fold(first, |acc, x| Some(Mag::add(acc, Mag::of(x)?)))?
            }
        })
    }

    pub fn compare(a: Mag, b: Mag) -> Cmp {
        let level = a.level.min(b.level);
        let (a, b) = (a.at_level(level), b.at_level(level));
        if a.lo > b.hi {
            Cmp::Greater
        } else if a.hi < b.lo {
            Cmp::Less
        } else {
            Cmp::Unknown
        }
    }
}

fn nonneg(x: f64) -> f64 {
    if x > 0.0 {
        x
    } else {
        0.0
    }
}

/// Orders two expressions without evaluating them: structural equality,
/// then equal bases, then interval magnitudes. Never claims an order that
/// exact evaluation would contradict.
pub fn compare_symbolic(x: &TowerExpr, y: &TowerExpr) -> Cmp {
    let (x, y) = (x.normalize(), y.normalize());
    compare_normalized(&x, &y)
}

fn compare_normalized(x: &TowerExpr, y: &TowerExpr) -> Cmp {
    if x == y {
        return Cmp::Equal;
    }
    if x.has_var() || y.has_var() {
        return Cmp::Unknown;
    }
    if let (TowerExpr::Pow(a, e), TowerExpr::Pow(b, f)) = (x, y) {
        // a base ≥ 2 makes a^e strictly increasing in e
        if a == b {
            return compare_normalized(e, f);
        }
    }
    match (Mag::of(x), Mag::of(y)) {
        (Some(a), Some(b)) => Mag::compare(a, b),
        _ => Cmp::Unknown,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l(v: u64) -> TowerExpr {
        TowerExpr::lit(v)
    }

    fn p(a: TowerExpr, b: TowerExpr) -> TowerExpr {
        TowerExpr::pow(a, b)
    }

    #[test]
    fn rounding_brackets() {
        for x in [0.5, 1.0, 3.0, 1e10, 1e-10] {
            assert!(down(x) < x && x < up(x));
            assert!(exp2_down(x.log2()) <= x && x <= exp2_up(x.log2()));
        }
        assert_eq!(exp2_down(2000.0), f64::MAX);
        assert_eq!(exp2_up(2000.0), f64::INFINITY);
        assert_eq!(exp2_down(f64::NEG_INFINITY), 0.0);
    }

    #[test]
    fn huge_literals_bracket_their_log() {
        let n = BigUint::from(3u8).pow(2187);
        let m = Mag::from_big(&n);
        assert_eq!(m.level, 1);
        let exact = 2187.0 * 3f64.log2();
        assert!(m.lo < exact && exact < m.hi);
    }

    #[test]
    fn symbolic_examples() {
        let a = p(l(3), l(2187));
        let b = p(l(2), l(128));
        assert_eq!(compare_symbolic(&a, &b), Cmp::Greater);
        assert_eq!(compare_symbolic(&b, &a), Cmp::Less);
        assert_eq!(compare_symbolic(&a, &a), Cmp::Equal);
        // same base: decided on the exponent
        let c = p(l(7), p(l(9), l(7)));
        let d = p(l(7), p(l(9), l(8)));
        assert_eq!(compare_symbolic(&c, &d), Cmp::Less);
        // ties stay unknown rather than guessed
        assert_eq!(compare_symbolic(&p(l(2), l(64)), &l(1 << 63).normalize()), Cmp::Greater);
        let two64 = TowerExpr::Lit(BigUint::from(2u8).pow(64));
        assert_eq!(compare_symbolic(&p(l(2), l(64)), &two64), Cmp::Unknown);
    }

    #[test]
    fn towers_separate_by_height() {
        let mut t = l(7);
        let mut towers = vec![];
        for _ in 0..8 {
            towers.push(t.clone());
            t = p(l(2), t).normalize();
        }
        for i in 0..towers.len() {
            for j in i + 1..towers.len() {
                assert_eq!(compare_symbolic(&towers[j], &towers[i]), Cmp::Greater, "{i} {j}");
            }
        }
        // 2^(2^128) vs 3^(2^127): log₂ values 2^128 and 2^127·1.585
        let x = p(l(2), p(l(2), l(128)));
        let y = p(l(3), p(l(2), l(127)));
        assert_eq!(compare_symbolic(&x, &y), Cmp::Greater);
    }

    #[test]
    fn variables_are_unknown() {
        let v = TowerExpr::var("l");
        assert_eq!(compare_symbolic(&v, &l(3)), Cmp::Unknown);
        assert_eq!(compare_symbolic(&v, &v), Cmp::Equal);
    }
}
