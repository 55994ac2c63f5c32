//! Memory-event bookkeeping over simulated time: which modes a stimulus can
//! imprint, when each imprinted mode dies, and the lifetime curve families.

mod figures;
mod registry;
mod report;

pub use figures::{fig1_curves, fig2_curves, CurveFamily, LifetimeCurve, SkippedCurve, TimeGrid, DEFAULT_LAMBDA_MAX};
pub use registry::{MemoryRecord, MemoryRegistry, RecordId, RecordedMode, SpectrumComponent, StimulusSpectrum};
pub use report::{persistence_report, Overlap, PersistenceReport, RecordSummary};
