use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use unitri_core::polycount::{BaseValueTable, SeedValue};

/// One certified count `N_{n,e}(q)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedRecord {
    pub n: usize,
    pub e: usize,
    pub q: u64,
    pub value: String,
    pub source: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedsDoc {
    pub schema: u32,
    pub seeds: Vec<SeedRecord>,
}

impl Default for SeedsDoc {
    fn default() -> Self {
        SeedsDoc { schema: 1, seeds: Vec::new() }
    }
}

impl SeedsDoc {
    /// Inserts or replaces the record for `(n, e, q)`, keeping records sorted.
    pub fn record(&mut self, r: SeedRecord) {
        self.seeds.retain(|s| (s.n, s.e, s.q) != (r.n, r.e, r.q));
        self.seeds.push(r);
        self.seeds.sort_by_key(|s| (s.n, s.e, s.q));
    }

    /// Standard seeds plus the recorded per-q values.
    pub fn to_table(&self) -> Result<BaseValueTable, String> {
        if self.schema != 1 {
            return Err(format!("unsupported seeds schema {}", self.schema));
        }
        let mut t = BaseValueTable::standard();
        let mut per: BTreeMap<(usize, usize), BTreeMap<u64, BigInt>> = BTreeMap::new();
        for s in &self.seeds {
            let v: BigInt = s.value.parse().map_err(|_| format!("bad seed value {:?}", s.value))?;
            per.entry((s.n, s.e)).or_default().insert(s.q, v);
        }
        for (key, values) in per {
            if let Some(SeedValue::Poly(p)) = t.get(&key) {
                for (q, v) in &values {
                    if p.eval_u64(*q) != *v {
                        return Err(format!("seed N_{{{},{}}}({q}) = {v} contradicts the standard value", key.0, key.1));
                    }
                }
                continue;
            }
            for (q, v) in values {
                t.insert_value(key, q, v);
            }
        }
        Ok(t)
    }
}
