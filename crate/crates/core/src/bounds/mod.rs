//! Star chains, the Erdős–Rado upper bound, the `s_n` upper and `t_n` lower
//! bound expressions, and their crossover.

mod expr;
mod fact;
mod magnitude;

use num_bigint::BigUint;
use num_traits::Zero;
use serde::Serialize;

pub use expr::{TowerExpr, DEFAULT_DIGIT_CAP};
pub use fact::{stepping_up, Affine, ArrowFact, Polarity, Step, PARAM};
pub use magnitude::{compare_symbolic, Cmp, Mag};

use crate::error::{Error, Result};

/// `a ∗ b = a^b`, normalized.
pub fn star(a: &TowerExpr, b: &TowerExpr) -> Result<TowerExpr> {
    if let Some(v) = a.normalize().eval() {
        if v.is_zero() {
            return Err(Error::Domain("the base of a star must be at least 1".into()));
        }
    }
    Ok(TowerExpr::pow(a.clone(), b.clone()).normalize())
}

/// `a₁ ∗ (a₂ ∗ (⋯ ∗ aₙ))`.
pub fn star_chain(values: &[TowerExpr]) -> Result<TowerExpr> {
    let (last, rest) = values
        .split_last()
        .filter(|(_, rest)| !rest.is_empty())
        .ok_or_else(|| Error::Domain("a star chain needs at least two terms".into()))?;
    rest.iter().rev().try_fold(last.clone(), |acc, a| star(a, &acc))
}

/// `r ∗ r^{k−1} ∗ ⋯ ∗ r² ∗ [r(l−k)+1]`, an upper bound for `R_k(l; r)`.
pub fn erdos_rado_upper(k: u64, l: u64, r: &BigUint) -> Result<TowerExpr> {
    if k < 2 || l < k {
        return Err(Error::Domain(format!("need l ≥ k ≥ 2, got k={k}, l={l}")));
    }
    if *r < BigUint::from(2u8) {
        return Err(Error::Domain(format!("need r ≥ 2, got {r}")));
    }
    let r = TowerExpr::Lit(r.clone());
    let mut chain = vec![r.clone()];
    chain.extend((2..k).rev().map(|j| TowerExpr::pow(r.clone(), TowerExpr::lit(j))));
    chain.push(TowerExpr::add(vec![
        TowerExpr::mul(vec![r.clone(), TowerExpr::lit(l - k)]),
        TowerExpr::lit(1),
    ]));
    star_chain(&chain)
}

fn three_pow(e: u64) -> TowerExpr {
    TowerExpr::pow(TowerExpr::lit(3), TowerExpr::lit(e)).normalize()
}

/// Both readings of the `s_n` upper bound.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SUpper {
    pub n: u64,
    /// `3^{n+1} ∗ 3^{2n+1} ∗ (2·3^{n+1}+1)` as displayed.
    pub literal: TowerExpr,
    /// The general bound at `k=3, l=5, r=3^{n+1}`, middle term `3^{2n+2}`.
    pub erdos_rado: TowerExpr,
}

pub fn s_upper(n: u64) -> Result<SUpper> {
    let r = three_pow(n + 1);
    let bracket = TowerExpr::add(vec![
        TowerExpr::mul(vec![TowerExpr::lit(2), r.clone()]),
        TowerExpr::lit(1),
    ]);
    let literal = star_chain(&[r.clone(), three_pow(2 * n + 1), bracket])?;
    let r_big = r
        .eval()
        .ok_or_else(|| Error::Domain(format!("3^{} exceeds the digit cap", n + 1)))?;
    Ok(SUpper {
        n,
        literal,
        erdos_rado: erdos_rado_upper(3, 5, &r_big)?,
    })
}

/// `Tower₁(x) = x`, `Tower_{n+1}(x) = 2^{Tower_n(x)}`.
pub fn tower(n: u64, x: &TowerExpr) -> Result<TowerExpr> {
    if n == 0 {
        return Err(Error::Domain("tower height starts at 1".into()));
    }
    let mut t = x.normalize();
    for _ in 1..n {
        t = TowerExpr::pow(TowerExpr::lit(2), t).normalize();
    }
    Ok(t)
}

/// `Tower_n(7)`, a strict lower bound on `t_n` for `n ≥ 2`, where
/// `t₀ = 5` and `t_{n+1}` is least with `t_{n+1} → (t_n, 7)⁵`.
pub fn t_lower(n: u64) -> Result<TowerExpr> {
    if n < 2 {
        return Err(Error::Domain(format!("the lower bound is stated for n ≥ 2, got {n}")));
    }
    tower(n, &TowerExpr::lit(7))
}

/// Exact comparison when both sides evaluate under the digit cap, otherwise
/// [`compare_symbolic`].
pub fn compare(x: &TowerExpr, y: &TowerExpr) -> Cmp {
    let (x, y) = (x.normalize(), y.normalize());
    match (x.eval(), y.eval()) {
        (Some(a), Some(b)) => a.cmp(&b).into(),
        _ => compare_symbolic(&x, &y),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossoverRow {
    pub n: u64,
    pub t_lower: TowerExpr,
    pub s_literal: TowerExpr,
    pub s_erdos_rado: TowerExpr,
    /// `t_lower` against `s_literal`.
    pub vs_literal: Cmp,
    pub vs_erdos_rado: Cmp,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Crossover {
    pub rows: Vec<CrossoverRow>,
    /// Least `n` with `t_lower(n) > s_upper(n)`, per reading; `None` when no
    /// row is decided `Greater`.
    pub first_literal: Option<u64>,
    pub first_erdos_rado: Option<u64>,
}

pub fn crossover(n_max: u64) -> Result<Crossover> {
    if n_max < 2 {
        return Err(Error::Domain(format!("n_max must be at least 2, got {n_max}")));
    }
    let rows = (2..=n_max)
        .map(|n| {
            let s = s_upper(n)?;
            let t = t_lower(n)?;
            Ok(CrossoverRow {
                n,
                vs_literal: compare(&t, &s.literal),
                vs_erdos_rado: compare(&t, &s.erdos_rado),
                t_lower: t,
                s_literal: s.literal,
                s_erdos_rado: s.erdos_rado,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let first = |pick: fn(&CrossoverRow) -> Cmp| rows.iter().find(|r| pick(r) == Cmp::Greater).map(|r| r.n);
    Ok(Crossover {
        first_literal: first(|r| r.vs_literal),
        first_erdos_rado: first(|r| r.vs_erdos_rado),
        rows,
    })
}

/// One stepping-up step from `2l ↛ (l,4)³`. The result is 4-uniform while
/// the `t_n` recurrence is 5-uniform, so the fact carries a flag.
pub fn two_l_stepped() -> ArrowFact {
    let mut f = stepping_up(&ArrowFact::two_l_triples()).expect("base satisfies the preconditions");
    f.flags.push(
        "one stepping-up step from a 3-uniform relation gives a 4-uniform one; \
         the t_n recurrence uses 5-uniform relations, and that passage is not derived here"
            .into(),
    );
    f
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l(v: u64) -> TowerExpr {
        TowerExpr::lit(v)
    }

    fn value(e: &TowerExpr) -> BigUint {
        e.eval().expect("evaluable")
    }

    #[test]
    fn star_examples() {
        assert_eq!(star(&l(2), &l(3)).unwrap(), l(8));
        assert_eq!(star(&l(3), &l(7)).unwrap(), l(2187));
        assert_eq!(star(&TowerExpr::var("a"), &l(1)).unwrap(), TowerExpr::var("a"));
        assert!(star(&l(0), &l(3)).is_err());
    }

    #[test]
    fn star_chain_examples() {
        assert_eq!(star_chain(&[l(2), l(2), l(3)]).unwrap(), l(256));
        let c = star_chain(&[l(3), l(3), l(7)]).unwrap();
        assert_eq!(value(&c), BigUint::from(3u8).pow(2187));
        let all = star_chain(&[l(2), l(3), l(2), l(2)]).unwrap();
        let grouped = star_chain(&[l(2), l(3), star_chain(&[l(2), l(2)]).unwrap()]).unwrap();
        assert_eq!(value(&all), value(&grouped));
        assert!(star_chain(&[l(2)]).is_err());
        assert!(star_chain(&[]).is_err());
    }

    #[test]
    fn erdos_rado_examples() {
        let two = BigUint::from(2u8);
        assert_eq!(erdos_rado_upper(2, 3, &two).unwrap(), l(8));
        assert_eq!(erdos_rado_upper(2, 2, &two).unwrap(), l(2));
        let e = erdos_rado_upper(3, 5, &BigUint::from(3u8)).unwrap();
        assert_eq!(e, TowerExpr::pow(l(3), l(9u64.pow(7))));
        assert!(erdos_rado_upper(1, 3, &two).is_err());
        assert!(erdos_rado_upper(3, 2, &two).is_err());
        assert!(erdos_rado_upper(2, 3, &BigUint::from(1u8)).is_err());
    }

    #[test]
    fn s_upper_at_zero() {
        let s = s_upper(0).unwrap();
        let lit = value(&s.literal);
        assert_eq!(lit, BigUint::from(3u8).pow(2187));
        assert_eq!(lit.to_string().len(), 1044);
        assert!(s.erdos_rado.eval().is_none());
        assert_eq!(s.erdos_rado, TowerExpr::pow(l(3), l(4_782_969)));
        assert_eq!(compare(&s.erdos_rado, &s.literal), Cmp::Greater);
    }

    #[test]
    fn tower_examples() {
        assert_eq!(tower(1, &l(7)).unwrap(), l(7));
        assert_eq!(tower(2, &l(7)).unwrap(), l(128));
        assert_eq!(value(&tower(3, &l(7)).unwrap()), BigUint::from(2u8).pow(128));
        assert!(tower(0, &l(7)).is_err());
        assert_eq!(t_lower(2).unwrap(), l(128));
        assert!(t_lower(1).is_err());
    }

    #[test]
    fn compare_examples() {
        assert_eq!(compare(&TowerExpr::pow(l(3), l(2187)), &TowerExpr::pow(l(2), l(128))), Cmp::Greater);
        let t5 = t_lower(5).unwrap();
        assert_eq!(compare(&t5, &t5), Cmp::Equal);
        assert_eq!(compare(&t5, &s_upper(4).unwrap().literal), Cmp::Greater);
    }

    #[test]
    fn crossover_table() {
        let c = crossover(8).unwrap();
        assert_eq!(c.rows.len(), 7);
        assert_eq!(c.first_literal, Some(5));
        assert_eq!(c.first_erdos_rado, Some(5));
        for row in &c.rows {
            let expect = if row.n < 5 { Cmp::Less } else { Cmp::Greater };
            assert_eq!(row.vs_literal, expect, "n={}", row.n);
            assert_eq!(row.vs_erdos_rado, expect, "n={}", row.n);
        }
        assert!(crossover(1).is_err());
    }

    #[test]
    fn two_l_step_is_flagged() {
        let f = two_l_stepped();
        assert_eq!(f.k, 4);
        assert_eq!(f.flags.len(), 1);
        assert_eq!(f.replay().unwrap(), f);
    }
}
