//! The instance document and set-mapping emission.
//!
//! ```json
//! {"carrier": 4, "k": 2, "rhos": [{"range": 4, "pairs": [[0,1,1], [0,2,2], …]}]}
//! ```
//!
//! Every unordered pair of distinct carrier elements must be listed exactly
//! once per pair function; `[y, x, v]` is accepted and normalized to `{x, y}`.

use serde::{Deserialize, Serialize};

use crate::bits::{pair_index, ElemSet};
use crate::error::{Error, Result};
use crate::setmap::{Carrier, GammaFamily, Rho, SetMapping};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceDoc {
    pub carrier: usize,
    pub k: usize,
    pub rhos: Vec<RhoDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RhoDoc {
    pub range: u32,
    pub pairs: Vec<(usize, usize, u32)>,
}

impl RhoDoc {
    pub fn from_rho(rho: &Rho) -> Self {
        RhoDoc {
            range: rho.range(),
            pairs: rho.pairs().collect(),
        }
    }

    /// Validates the pair list against `carrier`; `at` prefixes diagnostics.
    pub fn to_rho(&self, carrier: Carrier, at: &str) -> Result<Rho> {
        let m = carrier.size();
        let mut table: Vec<Option<u32>> = vec![None; carrier.num_pairs()];
        for (j, &(x, y, v)) in self.pairs.iter().enumerate() {
            let here = format!("{at}.pairs[{j}]");
            if x >= m || y >= m {
                return Err(Error::Schema(format!(
                    "{here}: pair [{x},{y}] leaves the carrier of size {m}"
                )));
            }
            if x == y {
                return Err(Error::Schema(format!("{here}: diagonal pair [{x},{y}]")));
            }
            if v >= self.range {
                return Err(Error::Schema(format!(
                    "{here}: value {v} is outside range {}",
                    self.range
                )));
            }
            let slot = &mut table[pair_index(x, y)];
            if slot.is_some() {
                return Err(Error::Schema(format!(
                    "{here}: duplicate pair {{{},{}}}",
                    x.min(y),
                    x.max(y)
                )));
            }
            *slot = Some(v);
        }
        if let Some(i) = table.iter().position(Option::is_none) {
            let (x, y) = crate::bits::pair_from_index(i);
            return Err(Error::Schema(format!("{at}: missing pair {{{x},{y}}}")));
        }
        if self.range == 0 {
            return Err(Error::Schema(format!("{at}: range must be positive")));
        }
        Rho::from_table(carrier, self.range, table.into_iter().flatten().collect())
            .map_err(|e| Error::Schema(format!("{at}: {e}")))
    }
}

impl InstanceDoc {
    pub fn from_family(gamma: &GammaFamily, k: usize) -> Self {
        InstanceDoc {
            carrier: gamma.carrier().size(),
            k,
            rhos: gamma.rhos().iter().map(RhoDoc::from_rho).collect(),
        }
    }

    pub fn to_family(&self) -> Result<(GammaFamily, usize)> {
        let carrier = Carrier::new(self.carrier).map_err(|e| Error::Schema(format!("carrier: {e}")))?;
        if self.k < 2 {
            return Err(Error::Schema(format!("k: must be at least 2, got {}", self.k)));
        }
        if self.rhos.is_empty() {
            return Err(Error::Schema("rhos: at least one pair function is required".into()));
        }
        let rhos = self
            .rhos
            .iter()
            .enumerate()
            .map(|(i, r)| r.to_rho(carrier, &format!("rhos[{i}]")))
            .collect::<Result<Vec<_>>>()?;
        Ok((GammaFamily::new(rhos)?, self.k))
    }
}

/// Parses and validates an instance document.
pub fn parse_instance(text: &str) -> Result<(GammaFamily, usize)> {
    let doc: InstanceDoc = serde_json::from_str(text)
        .map_err(|e| Error::Schema(format!("line {} column {}: {e}", e.line(), e.column())))?;
    doc.to_family()
}

/// One `{"tuple": […], "image": […]}` record.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MappingRecord {
    pub tuple: ElemSet,
    pub image: ElemSet,
}

pub fn mapping_records(f: &SetMapping) -> Vec<MappingRecord> {
    f.iter()
        .map(|(tuple, image)| MappingRecord { tuple, image })
        .collect()
}
