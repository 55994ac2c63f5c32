use std::cmp::Ordering;
use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use super::registry::{MemoryRecord, MemoryRegistry, RecordId};
use crate::error::Result;
use crate::formulas::domain_size;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecordSummary {
    /// 1 is the most persistent record.
    pub rank: usize,
    pub id: RecordId,
    pub n: u64,
    pub t_recorded: f64,
    pub recorded: usize,
    pub alive: usize,
    /// `alive / recorded`, zero for a record that imprinted nothing.
    pub alive_fraction: f64,
    pub max_death_time: Option<f64>,
    /// Infrared cutoff wavelength at the record's `n` and the report time.
    pub domain_size: f64,
    /// Weighted mean of `2 pi / k` over the alive modes.
    pub mean_wavelength: Option<f64>,
}

/// Two records sharing alive modes (same `n` and `k`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Overlap {
    pub first: RecordId,
    pub second: RecordId,
    pub shared_k: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PersistenceReport {
    pub t: f64,
    /// Most persistent first: ordered by latest death time, then id.
    pub records: Vec<RecordSummary>,
    pub overlaps: Vec<Overlap>,
}

fn summarize(rec: &MemoryRecord, t: f64, reg: &MemoryRegistry) -> Result<RecordSummary> {
    let n = rec.spectrum.n();
    let alive: Vec<_> = rec.alive_at(t).collect();
    let weight: f64 = alive.iter().map(|m| m.weight).sum();
    let mean_wavelength = (!alive.is_empty())
        .then(|| alive.iter().map(|m| m.weight * TAU / m.mode.k()).sum::<f64>() / weight);
    let recorded = rec.modes.len();
    Ok(RecordSummary {
        rank: 0,
        id: rec.id,
        n,
        t_recorded: rec.t_recorded,
        recorded,
        alive: alive.len(),
        alive_fraction: if recorded == 0 {
            0.0
        } else {
            alive.len() as f64 / recorded as f64
        },
        max_death_time: rec.max_death_time(),
        domain_size: domain_size(n, t, reg.params())?,
        mean_wavelength,
    })
}

fn persistence_order(a: &RecordSummary, b: &RecordSummary) -> Ordering {
    match (a.max_death_time, b.max_death_time) {
        (Some(x), Some(y)) => y.total_cmp(&x),
        (Some(_), None) => Ordering::Less,
        (None, Some(_)) => Ordering::Greater,
        (None, None) => Ordering::Equal,
    }
    .then(a.id.cmp(&b.id))
}

/// Summary of every record made at or before `t`, ranked by persistence.
pub fn persistence_report(reg: &MemoryRegistry, t: f64) -> Result<PersistenceReport> {
    let visible: Vec<&MemoryRecord> = reg.records().iter().filter(|r| r.t_recorded <= t).collect();
    let mut records = visible
        .iter()
        .map(|r| summarize(r, t, reg))
        .collect::<Result<Vec<_>>>()?;
    records.sort_by(persistence_order);
    for (i, r) in records.iter_mut().enumerate() {
        r.rank = i + 1;
    }

    let mut overlaps = Vec::new();
    for (i, a) in visible.iter().enumerate() {
        for b in &visible[i + 1..] {
            if a.spectrum.n() != b.spectrum.n() {
                continue;
            }
            let shared_k: Vec<f64> = a
                .alive_at(t)
                .filter(|ma| b.alive_at(t).any(|mb| mb.mode.k() == ma.mode.k()))
                .map(|m| m.mode.k())
                .collect();
            if !shared_k.is_empty() {
                overlaps.push(Overlap {
                    first: a.id,
                    second: b.id,
                    shared_k,
                });
            }
        }
    }
    Ok(PersistenceReport { t, records, overlaps })
}
