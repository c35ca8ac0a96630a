use std::fmt::Write as _;

use serde::Serialize;

use crate::diagram::Diagram;
use crate::entropy::{bowen_lower_moran, bowen_upper, DEFAULT_GRID_STEP};
use crate::error::Result;
use crate::measures::MixtureMeasure;

use super::moran::{birkhoff_check, count_prefixes, generic_prefix, moran_levels, Checkpoint, MoranTree, Selector};
use super::schedule::{auto_schedule, Schedule, ScheduleOptions};

/// Everything [`saturation_report`] needs besides the measure.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SaturationBudget {
    pub epsilon: f64,
    /// Depth `M` of the weak* distance.
    pub depth: usize,
    /// Number of outer blocks built.
    pub blocks: usize,
    /// Levels are materialized until `N_k` reaches this length.
    pub target_len: usize,
    /// Bowen scale: balls `B_n(x, 2^{-m})`.
    pub scale: usize,
    /// Half-width of the bracket `h(μ) ± tolerance`.
    pub tolerance: f64,
    pub grid_step: f64,
    pub seed: u64,
    pub options: ScheduleOptions,
}

impl Default for SaturationBudget {
    fn default() -> Self {
        Self {
            epsilon: 0.1,
            depth: 2,
            blocks: 2,
            target_len: 2000,
            scale: 1,
            tolerance: 0.1,
            grid_step: DEFAULT_GRID_STEP,
            seed: 0,
            options: ScheduleOptions::default(),
        }
    }
}

/// One CSV row per inner level.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelRow {
    pub k: usize,
    pub block: usize,
    pub l: usize,
    #[serde(rename = "L")]
    pub reps: usize,
    pub t: usize,
    pub n: usize,
    #[serde(rename = "N")]
    pub end: usize,
    pub log_gamma: f64,
    pub deviation: f64,
    pub exponent: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SaturationReport {
    pub h_mu: f64,
    pub lower: f64,
    pub upper: f64,
    pub grid_step: f64,
    pub k_max: usize,
    /// `N_{k_max}`.
    pub end: usize,
    pub seed: u64,
    pub lower_ok: bool,
    pub upper_ok: bool,
    /// `lower ≤ upper`.
    pub consistent: bool,
    /// Every blockwise Birkhoff deviation of the sampled prefix is within its bound.
    pub birkhoff_ok: bool,
    pub budget: SaturationBudget,
    pub levels: Vec<LevelRow>,
    pub checkpoints: Vec<Checkpoint>,
}

impl SaturationReport {
    pub fn passed(&self) -> bool {
        self.lower_ok && self.upper_ok && self.consistent && self.birkhoff_ok
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("k,block,l,L,t,n,N,log_gamma,deviation,exponent\n");
        for r in &self.levels {
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{},{:.6},{:.6},{:.6}",
                r.k, r.block, r.l, r.reps, r.t, r.n, r.end, r.log_gamma, r.deviation, r.exponent
            );
        }
        s
    }

    pub fn to_text(&self) -> String {
        format!(
            "h(mu) {:.6}\nlower {:.6}\nupper {:.6} (grid {})\nk_max {} N {} seed {}\nbracket {} consistent {} birkhoff {}\n",
            self.h_mu,
            self.lower,
            self.upper,
            self.grid_step,
            self.k_max,
            self.end,
            self.seed,
            if self.lower_ok && self.upper_ok { "pass" } else { "fail" },
            self.consistent,
            self.birkhoff_ok,
        )
    }
}

/// Builds a schedule, evaluates the Bowen estimators on its Moran tree and
/// checks a seeded generic prefix.
pub fn saturation_report(mu: &MixtureMeasure, diagram: &Diagram, budget: &SaturationBudget) -> Result<SaturationReport> {
    let schedule = auto_schedule(mu, budget.epsilon, budget.blocks, budget.depth, diagram, &budget.options)?;
    report_for_schedule(mu, &schedule, diagram, budget)
}

/// [`saturation_report`] for an existing schedule.
pub fn report_for_schedule(
    mu: &MixtureMeasure,
    schedule: &Schedule,
    diagram: &Diagram,
    budget: &SaturationBudget,
) -> Result<SaturationReport> {
    let levels = schedule.levels_until(budget.target_len);
    let k_max = levels.len();
    let lower = bowen_lower_moran(&moran_levels(schedule, k_max)?, k_max, budget.scale)?;
    let upper = bowen_upper(&MoranTree::new(schedule, k_max)?, budget.scale, budget.grid_step)?;
    let prefix = generic_prefix(schedule, Selector::Random(budget.seed), k_max, diagram)?;
    let checkpoints = birkhoff_check(&prefix.word, mu, schedule, schedule.depth, k_max)?;
    let rows = levels
        .iter()
        .zip(&checkpoints)
        .map(|(l, c)| {
            Ok(LevelRow {
                k: l.k,
                block: l.block,
                l: l.len,
                reps: schedule.blocks[l.block - 1].reps,
                t: l.t,
                n: l.n,
                end: l.end,
                log_gamma: schedule.gamma(l).log_count(),
                deviation: c.deviation,
                exponent: count_prefixes(schedule, l.k)?.exponent,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let h = schedule.h_mu;
    Ok(SaturationReport {
        h_mu: h,
        lower,
        upper,
        grid_step: budget.grid_step,
        k_max,
        end: levels.last().map_or(0, |l| l.end),
        seed: budget.seed,
        lower_ok: lower >= h - budget.tolerance,
        upper_ok: upper <= h + budget.tolerance,
        consistent: lower <= upper + 1e-12,
        birkhoff_ok: checkpoints.iter().all(|c| c.within),
        budget: budget.clone(),
        levels: rows,
        checkpoints,
    })
}
