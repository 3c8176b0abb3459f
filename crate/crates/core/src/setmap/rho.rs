use serde::{Deserialize, Serialize};

use crate::bits::{pair_from_index, pair_index, ElemSet, MAX_CARRIER};
use crate::error::{Error, Result};

/// The ordinals `0..size` in their natural order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Carrier(usize);

impl Carrier {
    pub fn new(size: usize) -> Result<Self> {
        if size == 0 || size > MAX_CARRIER {
            return Err(Error::Domain(format!(
                "carrier size must be in 1..={MAX_CARRIER}, got {size}"
            )));
        }
        Ok(Carrier(size))
    }

    #[inline]
    pub fn size(self) -> usize {
        self.0
    }

    pub fn elements(self) -> ElemSet {
        ElemSet::full(self.0)
    }

    pub fn contains(self, x: usize) -> bool {
        x < self.0
    }

    pub fn num_pairs(self) -> usize {
        self.0 * (self.0 - 1) / 2
    }
}

/// A symmetric pair function `[carrier]² → range`, stored as a dense
/// colex-indexed upper triangle.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Rho {
    carrier: Carrier,
    range: u32,
    table: Vec<u32>,
}

impl Rho {
    pub fn from_table(carrier: Carrier, range: u32, table: Vec<u32>) -> Result<Self> {
        if range == 0 {
            return Err(Error::Domain("range size must be positive".into()));
        }
        if table.len() != carrier.num_pairs() {
            return Err(Error::Domain(format!(
                "pair table has {} entries, carrier of size {} needs {}",
                table.len(),
                carrier.size(),
                carrier.num_pairs()
            )));
        }
        if let Some(i) = table.iter().position(|&v| v >= range) {
            let (x, y) = pair_from_index(i);
            return Err(Error::Domain(format!(
                "value {} on pair {{{x},{y}}} is outside range {range}",
                table[i]
            )));
        }
        Ok(Rho {
            carrier,
            range,
            table,
        })
    }

    /// Tabulates `f(x, y)` for every `x < y`.
    pub fn from_fn(carrier: Carrier, range: u32, mut f: impl FnMut(usize, usize) -> u32) -> Result<Self> {
        let m = carrier.size();
        let mut table = Vec::with_capacity(carrier.num_pairs());
        for hi in 1..m {
            for lo in 0..hi {
                table.push(f(lo, hi));
            }
        }
        Rho::from_table(carrier, range, table)
    }

    /// `ρ{x,y} = max{x,y}`, the bottom member of every generating family.
    pub fn max_fn(carrier: Carrier) -> Self {
        Rho::from_fn(carrier, carrier.size() as u32, |_, hi| hi as u32).expect("max fits its range")
    }

    pub fn min_fn(carrier: Carrier) -> Self {
        Rho::from_fn(carrier, carrier.size() as u32, |lo, _| lo as u32).expect("min fits its range")
    }

    pub fn constant(carrier: Carrier, value: u32) -> Self {
        Rho::from_fn(carrier, value + 1, |_, _| value).expect("constant fits its range")
    }

    #[inline]
    pub fn carrier(&self) -> Carrier {
        self.carrier
    }

    #[inline]
    pub fn range(&self) -> u32 {
        self.range
    }

    pub fn table(&self) -> &[u32] {
        &self.table
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> u32 {
        self.table[pair_index(x, y)]
    }

    /// Iterates `(x, y, value)` with `x < y`, in colex pair order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize, u32)> + '_ {
        self.table.iter().enumerate().map(|(i, &v)| {
            let (x, y) = pair_from_index(i);
            (x, y, v)
        })
    }

    /// Largest value on a pair inside `set`, or `None` if `|set| < 2`.
    pub fn max_on(&self, set: ElemSet) -> Option<u32> {
        let mut best: Option<u32> = None;
        let elems: Vec<usize> = set.iter().collect();
        for (j, &hi) in elems.iter().enumerate() {
            for &lo in &elems[..j] {
                let v = self.get(lo, hi);
                best = Some(best.map_or(v, |b| b.max(v)));
            }
        }
        best
    }

    /// Restriction to `b`, re-indexed order-preservingly onto `0..|b|`.
    pub fn restrict(&self, b: ElemSet) -> Result<Rho> {
        if !b.is_subset(self.carrier.elements()) {
            return Err(Error::Domain(format!("{b:?} is not inside the carrier")));
        }
        let elems = b.to_vec();
        let carrier = Carrier::new(elems.len())?;
        Rho::from_fn(carrier, self.range, |i, j| self.get(elems[i], elems[j]))
    }
}

/// An ordered, nonempty list of pair functions on one carrier.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GammaFamily {
    carrier: Carrier,
    rhos: Vec<Rho>,
}

impl GammaFamily {
    pub fn new(rhos: Vec<Rho>) -> Result<Self> {
        let first = rhos
            .first()
            .ok_or_else(|| Error::Domain("a generating family needs at least one pair function".into()))?;
        let carrier = first.carrier();
        if let Some(i) = rhos.iter().position(|r| r.carrier() != carrier) {
            return Err(Error::Domain(format!(
                "pair function {i} lives on a carrier of size {}, expected {}",
                rhos[i].carrier().size(),
                carrier.size()
            )));
        }
        Ok(GammaFamily { carrier, rhos })
    }

    pub fn single(rho: Rho) -> Self {
        GammaFamily {
            carrier: rho.carrier(),
            rhos: vec![rho],
        }
    }

    pub fn carrier(&self) -> Carrier {
        self.carrier
    }

    pub fn rhos(&self) -> &[Rho] {
        &self.rhos
    }

    pub fn len(&self) -> usize {
        self.rhos.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rhos.is_empty()
    }

    /// The family with `rho` appended.
    pub fn with(&self, rho: Rho) -> Result<Self> {
        let mut rhos = self.rhos.clone();
        rhos.push(rho);
        GammaFamily::new(rhos)
    }
}

/// A restricted family together with the order-preserving embedding of its
/// carrier back into the original one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Restriction {
    pub family: GammaFamily,
    /// `embedding[i]` is the original element re-indexed as `i`.
    pub embedding: Vec<usize>,
}

impl Restriction {
    /// Maps a subset of the restricted carrier back to original elements.
    pub fn lift(&self, set: ElemSet) -> ElemSet {
        set.iter().map(|i| self.embedding[i]).collect()
    }

    /// Maps a subset of the original carrier (inside the image) down.
    pub fn lower(&self, set: ElemSet) -> ElemSet {
        self.embedding
            .iter()
            .enumerate()
            .filter(|&(_, &x)| set.contains(x))
            .map(|(i, _)| i)
            .collect()
    }
}
