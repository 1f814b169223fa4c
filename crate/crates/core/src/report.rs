//! Run summaries emitted by the command-line tool.

use serde::Serialize;

use crate::model::{KnapsackInstance, SolverParams};
use crate::solver::SolveStats;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InstanceSummary {
    pub n: usize,
    pub d: usize,
    pub rotations: bool,
    pub total_profit: f64,
}

impl InstanceSummary {
    pub fn of(instance: &KnapsackInstance) -> Self {
        InstanceSummary {
            n: instance.len(),
            d: instance.d(),
            rotations: instance.rotations_allowed(),
            total_profit: instance.items().iter().map(|it| it.profit()).sum(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub instance: InstanceSummary,
    pub solver_profit: f64,
    pub oracle_profit: Option<f64>,
    /// `solver_profit / oracle_profit`; 1 when both are zero.
    pub ratio: Option<f64>,
    pub wall_ms: f64,
    pub stats: SolveStats,
    pub params: SolverParams,
}

pub fn ratio(solver: f64, oracle: f64) -> f64 {
    if oracle <= 0.0 {
        1.0
    } else {
        solver / oracle
    }
}

impl RunReport {
    pub fn new(
        instance: &KnapsackInstance,
        solver_profit: f64,
        oracle_profit: Option<f64>,
        wall_ms: f64,
        stats: SolveStats,
        params: SolverParams,
    ) -> Self {
        RunReport {
            instance: InstanceSummary::of(instance),
            solver_profit,
            oracle_profit,
            ratio: oracle_profit.map(|o| ratio(solver_profit, o)),
            wall_ms,
            stats,
            params,
        }
    }
}

pub const CSV_HEADER: &str = "seed,n,d,rotations,solver_profit,oracle_profit,ratio,configs_explored,ms";

/// One bench CSV line (no trailing newline); missing oracle fields stay empty.
pub fn csv_row(seed: u64, report: &RunReport) -> String {
    let opt = |v: Option<f64>| v.map_or(String::new(), |x| format!("{x:.6}"));
    format!(
        "{seed},{},{},{},{:.6},{},{},{},{:.3}",
        report.instance.n,
        report.instance.d,
        report.instance.rotations,
        report.solver_profit,
        opt(report.oracle_profit),
        opt(report.ratio),
        report.stats.configs_explored,
        report.wall_ms
    )
}
