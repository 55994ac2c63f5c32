pub mod eval;
pub mod figures;
pub mod registry;
pub mod sweep;
pub mod trace;
pub mod verify;

/// Status words printed in place of a number.
pub const NOT_RECORDABLE: &str = "not recordable";
pub const PAST_DEADLINE: &str = "past deadline";
