//! End-to-end solver: guess a container configuration, solve the container
//! packing instance it induces, keep the best.
//!
//! Configurations are guillotine layouts of the unit square with at most
//! `c_max` leaves. Each cut sits at a candidate offset measured from either
//! the left/bottom or the right/top side of the region being split, and every
//! leaf is one container filling it. Each layout is crossed with all `4^L`
//! type labelings. A container that fills its leaf dominates any smaller one
//! anchored inside it, and an empty leaf is dominated by any container, so no
//! empty leaves are generated.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;

use crate::container::{machine_size, solve_container_packing_with, ContainerPackingInstance};
use crate::error::{Error, Result};
use crate::model::{Container, ContainerKind, Item, KnapsackInstance, Packing, Rect, SolverParams, TOL};
use crate::vmg::ptas::PtasOptions;

/// Candidate container sides, ascending and deduplicated within [`TOL`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CandidateDimensions {
    pub widths: Vec<f64>,
    pub heights: Vec<f64>,
}

fn sums_up_to(values: &[f64], depth: usize) -> Vec<f64> {
    fn go(values: &[f64], start: usize, left: usize, acc: f64, out: &mut Vec<f64>) {
        for i in start..values.len() {
            let s = acc + values[i];
            if s > 1.0 + TOL {
                // Sorted ascending: every later value overshoots too.
                break;
            }
            out.push(s.min(1.0));
            if left > 1 {
                go(values, i + 1, left - 1, s, out);
            }
        }
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut out = vec![1.0];
    go(&sorted, 0, depth, 0.0, &mut out);
    dedup_sorted(out)
}

fn dedup_sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v.dedup_by(|b, a| (*b - *a).abs() <= TOL);
    v
}

/// `{1} ∪ {sums of at most sum_depth item sides that stay ≤ 1}`. With
/// rotations both sides of an item feed both sets.
pub fn generate_candidate_dimensions(items: &[Item], rotations: bool, params: &SolverParams) -> Result<CandidateDimensions> {
    if params.sum_depth == 0 {
        return Err(Error::invalid("sum_depth must be at least 1"));
    }
    let (widths, heights): (Vec<f64>, Vec<f64>) = if rotations {
        let both: Vec<f64> = items.iter().flat_map(|it| [it.width(), it.height()]).collect();
        (both.clone(), both)
    } else {
        items.iter().map(|it| (it.width(), it.height())).unzip()
    };
    Ok(CandidateDimensions { widths: sums_up_to(&widths, params.sum_depth), heights: sums_up_to(&heights, params.sum_depth) })
}

/// One guessed configuration; `index` is its position in canonical order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContainerConfig {
    pub index: usize,
    pub containers: Vec<Container>,
}

/// Every configuration in canonical order: layouts by number of leaves, then
/// by first appearance in the recursive enumeration; labelings as base-4
/// numbers with the first container as least significant digit.
#[derive(Debug, Clone)]
pub struct ConfigStream {
    layouts: Vec<Vec<Rect>>,
    /// `offsets[l]` = index of the first configuration of layout `l`.
    offsets: Vec<usize>,
    total: usize,
}

fn cut_offsets(cands: &[f64], extent: f64) -> Vec<f64> {
    let raw = cands.iter().flat_map(|&c| [c, extent - c]).filter(|&c| c > TOL && c < extent - TOL).collect();
    dedup_sorted(raw)
}

fn layout_key(rects: &[Rect]) -> Vec<(i64, i64, i64, i64)> {
    let q = |v: f64| (v / TOL).round() as i64;
    let mut key: Vec<_> = rects.iter().map(|r| (q(r.x), q(r.y), q(r.w), q(r.h))).collect();
    key.sort_unstable();
    key
}

fn layouts_in(region: Rect, leaves: usize, cands: &CandidateDimensions, out: &mut Vec<Vec<Rect>>) {
    if leaves == 1 {
        out.push(vec![region]);
        return;
    }
    for left in 1..leaves {
        for off in cut_offsets(&cands.widths, region.w) {
            let a = Rect::new(region.x, region.y, off, region.h);
            let b = Rect::new(region.x + off, region.y, region.w - off, region.h);
            combine(a, left, b, leaves - left, cands, out);
        }
        for off in cut_offsets(&cands.heights, region.h) {
            let a = Rect::new(region.x, region.y, region.w, off);
            let b = Rect::new(region.x, region.y + off, region.w, region.h - off);
            combine(a, left, b, leaves - left, cands, out);
        }
    }
}

fn combine(a: Rect, la: usize, b: Rect, lb: usize, cands: &CandidateDimensions, out: &mut Vec<Vec<Rect>>) {
    let mut first = Vec::new();
    layouts_in(a, la, cands, &mut first);
    let mut second = Vec::new();
    layouts_in(b, lb, cands, &mut second);
    for x in &first {
        for y in &second {
            out.push(x.iter().chain(y).copied().collect());
        }
    }
}

impl ConfigStream {
    pub fn new(cands: &CandidateDimensions, c_max: usize) -> Self {
        let mut seen = BTreeSet::new();
        let mut layouts = Vec::new();
        for leaves in 1..=c_max {
            let mut raw = Vec::new();
            layouts_in(Rect::new(0.0, 0.0, 1.0, 1.0), leaves, cands, &mut raw);
            for l in raw {
                if seen.insert(layout_key(&l)) {
                    layouts.push(l);
                }
            }
        }
        let mut offsets = Vec::with_capacity(layouts.len());
        let mut total = 0usize;
        for l in &layouts {
            offsets.push(total);
            total = total.saturating_add(4usize.saturating_pow(l.len() as u32));
        }
        ConfigStream { layouts, offsets, total }
    }

    pub fn len(&self) -> usize {
        self.total
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    pub fn layouts(&self) -> &[Vec<Rect>] {
        &self.layouts
    }

    pub fn get(&self, index: usize) -> Option<ContainerConfig> {
        if index >= self.total {
            return None;
        }
        let l = self.offsets.partition_point(|&o| o <= index) - 1;
        let mut label = index - self.offsets[l];
        let containers = self.layouts[l]
            .iter()
            .map(|r| {
                let kind = ContainerKind::ALL[label % 4];
                label /= 4;
                Container::from_rect(kind, *r)
            })
            .collect();
        Some(ContainerConfig { index, containers })
    }

    pub fn iter(&self) -> impl Iterator<Item = ContainerConfig> + '_ {
        (0..self.total).map(|i| self.get(i).expect("index in range"))
    }
}

pub fn enumerate_container_configs(cands: &CandidateDimensions, params: &SolverParams) -> ConfigStream {
    ConfigStream::new(cands, params.c_max)
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct SolveStats {
    pub candidate_widths: usize,
    pub candidate_heights: usize,
    /// Size of the full configuration stream.
    pub configs_total: usize,
    /// Configurations solved with the container packing PTAS.
    pub configs_explored: usize,
    /// Configurations skipped because their profit bound could not beat the incumbent.
    pub configs_pruned: usize,
    /// Whether the configuration budget cut the stream short.
    pub truncated: bool,
    /// Canonical index of the configuration that produced the packing.
    pub best_config: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GvksSolution {
    pub packing: Packing,
    pub containers: Vec<Container>,
    pub stats: SolveStats,
}

// Configurations evaluated per parallel batch; pruning uses the incumbent from
// earlier batches only, which keeps the result independent of thread count.
const BATCH: usize = 64;

/// Profit, configuration index, packing and containers of one evaluated configuration.
type Evaluated = (f64, usize, Packing, Vec<Container>);

fn profit_bound(items: &[Item], cp: &ContainerPackingInstance) -> f64 {
    let mut bound = 0.0;
    let mut any_fit = 0.0;
    for c in &cp.containers {
        let fitting = items.iter().filter(|it| machine_size(it, c, cp.rotations, cp.eps_prime).is_finite());
        bound += match c.kind {
            ContainerKind::Large => fitting.map(Item::profit).fold(0.0, f64::max),
            _ => fitting.map(Item::profit).sum(),
        };
    }
    for it in items {
        if cp.containers.iter().any(|c| machine_size(it, c, cp.rotations, cp.eps_prime).is_finite()) {
            any_fit += it.profit();
        }
    }
    f64::min(bound, any_fit)
}

pub fn solve_gvks(instance: &KnapsackInstance, params: &SolverParams) -> Result<Packing> {
    solve_gvks_with_stats(instance, params).map(|s| s.packing)
}

pub fn solve_gvks_with_stats(instance: &KnapsackInstance, params: &SolverParams) -> Result<GvksSolution> {
    params.validate()?;
    let d = instance.d();
    let eps_limit = 1.0 / (2 * d + 3) as f64;
    if params.eps_cont >= eps_limit {
        return Err(Error::invalid(format!(
            "eps_cont = {} must be below 1/(2d+3) = {eps_limit} for d = {d}",
            params.eps_cont
        )));
    }
    let mut stats = SolveStats::default();
    // Items that can never be packed are dropped up front.
    let items: Vec<Item> =
        instance.items().iter().filter(|it| it.profit() > 0.0 && it.weights().iter().all(|&w| w <= 1.0 + TOL)).cloned().collect();
    if items.is_empty() {
        return Ok(GvksSolution { packing: Packing::empty(), containers: Vec::new(), stats });
    }
    let global_bound: f64 = items.iter().map(Item::profit).sum();
    let cands = generate_candidate_dimensions(&items, instance.rotations_allowed(), params)?;
    stats.candidate_widths = cands.widths.len();
    stats.candidate_heights = cands.heights.len();
    let stream = enumerate_container_configs(&cands, params);
    stats.configs_total = stream.len();
    let limit = params.config_budget.map_or(stream.len(), |b| b.min(stream.len()));
    stats.truncated = limit < stream.len();

    let options = PtasOptions { x_max: params.x_max, ..PtasOptions::default() };
    let sub = KnapsackInstance::new(d, instance.rotations_allowed(), items.clone())?;
    let mut best: Option<(f64, usize, Packing, Vec<Container>)> = None;
    let mut start = 0;
    while start < limit {
        let incumbent = best.as_ref().map_or(0.0, |b| b.0);
        if incumbent >= global_bound - TOL {
            break;
        }
        let end = (start + BATCH).min(limit);
        let results: Vec<Result<Option<Evaluated>>> = (start..end)
            .into_par_iter()
            .map(|i| {
                let config = stream.get(i).expect("index in range");
                let cp = ContainerPackingInstance::new(&sub, config.containers, params.eps_prime);
                if profit_bound(&items, &cp) <= incumbent + TOL {
                    return Ok(None);
                }
                let solved = solve_container_packing_with(&cp, params.eps_cont, &options)?;
                Ok(Some((solved.packing.packed_profit, i, solved.packing, cp.containers)))
            })
            .collect();
        for r in results {
            match r? {
                None => stats.configs_pruned += 1,
                Some(candidate) => {
                    stats.configs_explored += 1;
                    if candidate.0 > best.as_ref().map_or(0.0, |b| b.0) {
                        best = Some(candidate);
                    }
                }
            }
        }
        start = end;
    }
    let Some((_, index, packing, containers)) = best else {
        return Ok(GvksSolution { packing: Packing::empty(), containers: Vec::new(), stats });
    };
    stats.best_config = Some(index);
    Ok(GvksSolution { packing, containers, stats })
}
