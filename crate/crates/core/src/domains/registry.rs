use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formulas::{k_threshold, recording_deadline, ModelParams, Mode};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RecordId(pub u64);

impl fmt::Display for RecordId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumComponent {
    pub k: f64,
    pub weight: f64,
}

/// The wavenumbers excited by one stimulus, all at a single openness `n`.
/// Weights only affect reporting.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSpectrum")]
pub struct StimulusSpectrum {
    n: u64,
    components: Vec<SpectrumComponent>,
}

#[derive(Deserialize)]
struct RawSpectrum {
    n: u64,
    components: Vec<SpectrumComponent>,
}

impl TryFrom<RawSpectrum> for StimulusSpectrum {
    type Error = Error;

    fn try_from(raw: RawSpectrum) -> Result<Self> {
        let (ks, ws): (Vec<f64>, Vec<f64>) = raw.components.iter().map(|c| (c.k, c.weight)).unzip();
        StimulusSpectrum::with_weights(raw.n, &ks, &ws)
    }
}

impl StimulusSpectrum {
    /// Unit-weight spectrum.
    pub fn new(n: u64, ks: &[f64]) -> Result<Self> {
        StimulusSpectrum::with_weights(n, ks, &vec![1.0; ks.len()])
    }

    pub fn with_weights(n: u64, ks: &[f64], weights: &[f64]) -> Result<Self> {
        if ks.is_empty() {
            return Err(Error::param("spectrum", "must contain at least one mode"));
        }
        if ks.len() != weights.len() {
            return Err(Error::param(
                "weights",
                format!("{} weights for {} modes", weights.len(), ks.len()),
            ));
        }
        let mut components = Vec::with_capacity(ks.len());
        for (&k, &weight) in ks.iter().zip(weights) {
            Mode::new(k, n)?;
            if !(weight.is_finite() && weight > 0.0) {
                return Err(Error::param("weights", format!("must be finite and > 0, got {weight}")));
            }
            components.push(SpectrumComponent { k, weight });
        }
        Ok(StimulusSpectrum { n, components })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn components(&self) -> &[SpectrumComponent] {
        &self.components
    }

    /// Same spectrum with every weight multiplied by `factor > 0`.
    pub fn rescaled(&self, factor: f64) -> Result<Self> {
        let ks: Vec<f64> = self.components.iter().map(|c| c.k).collect();
        let ws: Vec<f64> = self.components.iter().map(|c| c.weight * factor).collect();
        StimulusSpectrum::with_weights(self.n, &ks, &ws)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RecordedMode {
    pub mode: Mode,
    pub weight: f64,
    /// Absolute time `t_recorded + T_{k,n}`.
    pub death_time: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MemoryRecord {
    pub id: RecordId,
    pub t_recorded: f64,
    pub spectrum: StimulusSpectrum,
    /// Modes that passed the infrared threshold, sorted by `k`.
    pub modes: Vec<RecordedMode>,
}

impl MemoryRecord {
    /// No mode of the spectrum passed the threshold.
    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn max_death_time(&self) -> Option<f64> {
        self.modes.iter().map(|m| m.death_time).reduce(f64::max)
    }

    pub fn alive_at(&self, t: f64) -> impl Iterator<Item = &RecordedMode> + '_ {
        self.modes.iter().filter(move |m| m.death_time > t)
    }
}

/// Append-only log of memory records with a monotone clock.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RegistryDoc")]
pub struct MemoryRegistry {
    params: ModelParams,
    clock: f64,
    records: Vec<MemoryRecord>,
}

#[derive(Deserialize)]
struct RegistryDoc {
    params: ModelParams,
    clock: f64,
    records: Vec<MemoryRecord>,
}

impl TryFrom<RegistryDoc> for MemoryRegistry {
    type Error = Error;

    /// Rebuilds by replaying the stored events; stored death times are
    /// recomputed rather than trusted.
    fn try_from(doc: RegistryDoc) -> Result<Self> {
        let mut reg = MemoryRegistry::new(doc.params);
        for (i, rec) in doc.records.into_iter().enumerate() {
            if rec.id != RecordId(i as u64) {
                return Err(Error::param("records", format!("expected id {i}, found {}", rec.id)));
            }
            reg.record_event(rec.spectrum, rec.t_recorded)?;
        }
        reg.advance_clock(doc.clock)?;
        Ok(reg)
    }
}

impl MemoryRegistry {
    pub fn new(params: ModelParams) -> Self {
        MemoryRegistry {
            params,
            clock: 0.0,
            records: Vec::new(),
        }
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn clock(&self) -> f64 {
        self.clock
    }

    pub fn records(&self) -> &[MemoryRecord] {
        &self.records
    }

    pub fn get(&self, id: RecordId) -> Result<&MemoryRecord> {
        self.records
            .get(id.0 as usize)
            .ok_or(Error::UnknownRecord(id.0))
    }

    pub fn advance_clock(&mut self, t: f64) -> Result<()> {
        if !t.is_finite() {
            return Err(Error::domain("t", format!("must be finite, got {t}")));
        }
        if t < self.clock {
            return Err(Error::ClockRegression {
                clock: self.clock,
                requested: t,
            });
        }
        self.clock = t;
        Ok(())
    }

    /// Imprints the modes of `spectrum` with `k >= k~(n, t)` and advances the
    /// clock to `t`. The returned record may hold no modes.
    pub fn record_event(&mut self, spectrum: StimulusSpectrum, t: f64) -> Result<&MemoryRecord> {
        if !(t.is_finite() && t >= 0.0) {
            return Err(Error::domain("t", format!("must be finite and >= 0, got {t}")));
        }
        if t < self.clock {
            return Err(Error::ClockRegression {
                clock: self.clock,
                requested: t,
            });
        }
        let n = spectrum.n();
        let threshold = k_threshold(n, t, &self.params)?;
        let mut modes: Vec<RecordedMode> = spectrum
            .components()
            .iter()
            .filter(|c| c.k >= threshold)
            .filter_map(|c| {
                let mode = Mode::new(c.k, n).ok()?;
                let deadline = recording_deadline(&mode, &self.params).deadline?;
                Some(RecordedMode {
                    mode,
                    weight: c.weight,
                    death_time: t + deadline,
                })
            })
            .collect();
        modes.sort_by(|a, b| a.mode.k().total_cmp(&b.mode.k()));

        self.clock = t;
        let id = RecordId(self.records.len() as u64);
        self.records.push(MemoryRecord {
            id,
            t_recorded: t,
            spectrum,
            modes,
        });
        Ok(self.records.last().expect("just pushed"))
    }

    /// Modes of record `id` still alive at `t >= t_recorded`.
    pub fn alive_modes(&self, id: RecordId, t: f64) -> Result<Vec<Mode>> {
        let rec = self.get(id)?;
        if !(t >= rec.t_recorded) {
            return Err(Error::domain(
                "t",
                format!("{t} precedes the recording time {} of record {id}", rec.t_recorded),
            ));
        }
        Ok(rec.alive_at(t).map(|m| m.mode).collect())
    }
}
