//! The Moran-type construction of a set of generic points.
//!
//! A [`Schedule`] fixes word lengths `l_j`, repetition counts `L_j` and word
//! sets `Γ_j` whose empirical measures stay close to approximations `μ_j` of
//! the target measure. Concatenating one word per level, joined by
//! connecting paths through `[2]`, yields prefixes of points of `G`.

mod gamma;
mod moran;
mod report;
mod schedule;

pub use gamma::{
    block_correction, build_gamma, build_gamma_blocks, build_gamma_on, Gamma, GammaEntry, Pick, Selected,
    DEFAULT_ENUM_BUDGET,
};
pub use moran::{
    birkhoff_check, count_prefixes, generic_prefix, moran_levels, Checkpoint, GenericPrefix, MoranTree, PrefixCount,
    Selector,
};
pub use report::{report_for_schedule, saturation_report, LevelRow, SaturationBudget, SaturationReport};
pub use schedule::{
    auto_schedule, eps_seq, expand_blocks, expand_schedule, Block, BlockShape, InvariantCheck, Level, Schedule,
    ScheduleOptions,
};
