use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("{what} is outside its domain: {reason}")]
    Domain { what: &'static str, reason: String },

    #[error("mode k={k}, n={n} is not recordable (2*omega0/L = {ratio} <= 1)")]
    NotRecordable { k: f64, n: u64, ratio: f64 },

    #[error("t={t} is at or past the recording deadline T={deadline}")]
    PastDeadline { t: f64, deadline: f64 },

    #[error("order {order} exceeds the supported maximum {max}")]
    Capability { order: u32, max: u32 },

    #[error("integration failed at t={t}: {reason}")]
    Integration {
        reason: String,
        t: f64,
        last_state: Vec<f64>,
    },

    #[error("clock cannot move backwards: event at t={requested} precedes clock {clock}")]
    ClockRegression { clock: f64, requested: f64 },

    #[error("unknown record id {0}")]
    UnknownRecord(u64),

    #[error("usage: {0}")]
    Usage(String),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    pub(crate) fn domain(what: &'static str, reason: impl Into<String>) -> Self {
        Error::Domain {
            what,
            reason: reason.into(),
        }
    }
}
