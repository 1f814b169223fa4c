//! Approximation scheme for Vector-Max-GAP.
//!
//! For every set `X` of at most `(d+k)/ε²` items and every way of spreading
//! `X` over the machines, the items left over are restricted to those that are
//! ε-small against the capacity `X` leaves free, solved with resource
//! augmentation and trimmed back to feasibility. The best `X ∪ Z` wins; when
//! the enumeration reaches the theorem bound the result is within a factor
//! `1 − (2d+3)ε` of optimal.
//!
//! Candidates are visited by increasing `|X|`, then lexicographic `X`, then
//! lexicographic machine vector; the first maximizer in that order is kept.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::TOL;
use crate::vmg::dp::DpOptions;
use crate::vmg::rounding::assign_res_aug_with;
use crate::vmg::trim::trim_small_solution;
use crate::vmg::{GapAssignment, GapInstance};

pub const DEFAULT_CANDIDATE_BUDGET: u64 = 20_000_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PtasOptions {
    /// Largest `|X|` enumerated; `None` uses the theorem bound `(d+k)/ε²`.
    pub x_max: Option<usize>,
    /// Ceiling on the number of `(X, partition)` candidates.
    pub candidate_budget: u64,
    pub dp: DpOptions,
}

impl Default for PtasOptions {
    fn default() -> Self {
        PtasOptions { x_max: None, candidate_budget: DEFAULT_CANDIDATE_BUDGET, dp: DpOptions::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PtasOutcome {
    pub assignment: GapAssignment,
    /// `⌊(d+k)/ε²⌋`.
    pub theorem_bound: usize,
    /// Largest `|X|` actually enumerated.
    pub x_max: usize,
    /// True when the enumeration covered every `X` the guarantee needs.
    pub guarantee_applies: bool,
    /// Feasible `(X, partition)` pairs visited.
    pub candidates: u64,
    /// Candidates that needed a resource-augmented solve.
    pub solves: u64,
}

pub fn theorem_bound(d: usize, k: usize, eps: f64) -> usize {
    let b = (d + k) as f64 / (eps * eps);
    if b >= usize::MAX as f64 {
        usize::MAX
    } else {
        (b + TOL).floor() as usize
    }
}

pub fn vmg_ptas(instance: &GapInstance, eps: f64) -> Result<GapAssignment> {
    vmg_ptas_with(instance, eps, &PtasOptions::default()).map(|o| o.assignment)
}

pub fn vmg_ptas_with(instance: &GapInstance, eps: f64, options: &PtasOptions) -> Result<PtasOutcome> {
    let (k, d) = (instance.k(), instance.d());
    let eps_limit = 1.0 / (2 * d + 3) as f64;
    if !(eps > 0.0 && eps < eps_limit) {
        return Err(Error::contract(format!("eps = {eps} must lie in (0, 1/(2d+3)) = (0, {eps_limit})")));
    }

    // Items that can never be part of a feasible solution, or are worth
    // nothing everywhere, are dropped up front.
    let eligible: Vec<usize> = (0..instance.n())
        .filter(|&i| {
            instance.weights(i).iter().zip(instance.weight_limits()).all(|(w, lim)| *w <= lim + TOL)
                && (0..k).any(|j| usable(instance, i, j))
        })
        .collect();
    let best_value_of = |i: usize| -> f64 {
        (0..k).filter(|&j| usable(instance, i, j)).map(|j| instance.value(i, j)).fold(0.0, f64::max)
    };
    let item_bound: Vec<f64> = (0..instance.n()).map(best_value_of).collect();
    let everything: f64 = eligible.iter().map(|&i| item_bound[i]).sum();

    let theorem = theorem_bound(d, k, eps);
    let x_max = options.x_max.unwrap_or(theorem).min(theorem).min(eligible.len());
    let guarantee_applies = x_max >= theorem.min(eligible.len());

    let mut best = GapAssignment::empty();
    let mut candidates = 0u64;
    let mut solves = 0u64;
    let mut enumerator = Enumerator::new(instance, &eligible);
    for size in 0..=x_max {
        let done = enumerator.run(size, &mut |x_items, machines, x_value, loads, weights| {
            candidates += 1;
            if candidates > options.candidate_budget {
                return Err(Error::Budget {
                    what: "PTAS candidate",
                    needed: candidates as u128,
                    limit: options.candidate_budget as u128,
                });
            }
            if x_value + residual_bound(instance, eps, &eligible, x_items, loads, weights) <= best.total_value() {
                return Ok(false);
            }
            let (candidate, solved) =
                complete_candidate(instance, eps, options, &eligible, x_items, machines, loads, weights)?;
            solves += solved as u64;
            if candidate.total_value() > best.total_value() {
                best = candidate;
            }
            // Nothing can beat taking every eligible item at its best value.
            Ok(best.total_value() >= everything)
        })?;
        if done {
            break;
        }
    }

    Ok(PtasOutcome { assignment: best, theorem_bound: theorem, x_max, guarantee_applies, candidates, solves })
}

fn usable(instance: &GapInstance, i: usize, j: usize) -> bool {
    instance.value(i, j) > 0.0 && instance.size(i, j) <= instance.capacities()[j] + TOL
}

/// Most the residual problem of a candidate can add: every item that is
/// small against the residual capacities at its best such machine.
fn residual_bound(
    instance: &GapInstance,
    eps: f64,
    eligible: &[usize],
    x_items: &[usize],
    loads: &[f64],
    weights: &[f64],
) -> f64 {
    let (k, d) = (instance.k(), instance.d());
    eligible
        .iter()
        .filter(|i| !x_items.contains(i))
        .filter(|&&i| (0..d).all(|q| instance.weights(i)[q] <= eps * (instance.weight_limits()[q] - weights[q]).max(0.0) + TOL))
        .map(|&i| {
            (0..k)
                .filter(|&j| instance.size(i, j) <= eps * (instance.capacities()[j] - loads[j]).max(0.0) + TOL)
                .map(|j| instance.value(i, j))
                .fold(0.0, f64::max)
        })
        .sum()
}

/// Solves the small-item residual problem for one `(X, partition)` and
/// returns `X ∪ Z` together with whether a DP solve was needed.
#[allow(clippy::too_many_arguments)]
fn complete_candidate(
    instance: &GapInstance,
    eps: f64,
    options: &PtasOptions,
    eligible: &[usize],
    x_items: &[usize],
    machines: &[usize],
    loads: &[f64],
    weights: &[f64],
) -> Result<(GapAssignment, bool)> {
    let (k, d) = (instance.k(), instance.d());
    let residual_caps: Vec<f64> =
        instance.capacities().iter().zip(loads).map(|(m, l)| (m - l).max(0.0)).collect();
    let residual_limits: Vec<f64> =
        instance.weight_limits().iter().zip(weights).map(|(w, u)| (w - u).max(0.0)).collect();

    let mut x_assignment =
        GapAssignment::from_pairs(instance, x_items.iter().copied().zip(machines.iter().copied()))?;

    // Non-small items get value 0 on the machines where they are big; items
    // heavy against the residual weight budget are left out entirely.
    let mut rest = Vec::new();
    let mut values = Vec::new();
    for &i in eligible {
        if x_items.contains(&i) {
            continue;
        }
        let light = (0..d).all(|q| instance.weights(i)[q] <= eps * residual_limits[q] + TOL);
        if !light {
            continue;
        }
        let row: Vec<f64> = (0..k)
            .map(|j| {
                if instance.size(i, j) <= eps * residual_caps[j] + TOL {
                    instance.value(i, j)
                } else {
                    0.0
                }
            })
            .collect();
        if row.iter().any(|v| *v > 0.0) {
            rest.push(i);
            values.push(row);
        }
    }
    if rest.is_empty() {
        return Ok((x_assignment, false));
    }

    let sub = GapInstance::from_parts_unchecked(
        residual_caps,
        residual_limits,
        rest.iter().map(|&i| instance.sizes(i).to_vec()).collect(),
        values,
        rest.iter().map(|&i| instance.weights(i).to_vec()).collect(),
    );
    let (augmented, _) = assign_res_aug_with(&sub, eps, &options.dp)?;
    let trimmed = trim_small_solution(&augmented, &sub, eps)?;
    x_assignment.merge(&trimmed.lift(&rest, instance), instance);
    Ok((x_assignment, true))
}

/// Streams feasible `(X, machine vector)` pairs of a fixed `|X|` in canonical
/// order.
struct Enumerator<'a> {
    instance: &'a GapInstance,
    eligible: &'a [usize],
    chosen: Vec<usize>,
    machines: Vec<usize>,
    loads: Vec<f64>,
    weights: Vec<f64>,
    value: f64,
}

type Visit<'f> = dyn FnMut(&[usize], &[usize], f64, &[f64], &[f64]) -> Result<bool> + 'f;

impl<'a> Enumerator<'a> {
    fn new(instance: &'a GapInstance, eligible: &'a [usize]) -> Self {
        Enumerator {
            instance,
            eligible,
            chosen: Vec::new(),
            machines: Vec::new(),
            loads: vec![0.0; instance.k()],
            weights: vec![0.0; instance.d()],
            value: 0.0,
        }
    }

    /// Returns `Ok(true)` once the visitor asks to stop.
    fn run(&mut self, size: usize, visit: &mut Visit<'_>) -> Result<bool> {
        self.choose_items(0, size, visit)
    }

    fn choose_items(&mut self, from: usize, size: usize, visit: &mut Visit<'_>) -> Result<bool> {
        if self.chosen.len() == size {
            return self.assign_machines(0, visit);
        }
        let need = size - self.chosen.len();
        for pos in from..self.eligible.len() {
            if self.eligible.len() - pos < need {
                break;
            }
            let i = self.eligible[pos];
            let w = self.instance.weights(i);
            let fits = self
                .weights
                .iter()
                .zip(w)
                .zip(self.instance.weight_limits())
                .all(|((u, w), lim)| u + w <= lim + TOL);
            if !fits {
                continue;
            }
            self.weights.iter_mut().zip(w).for_each(|(u, w)| *u += w);
            self.chosen.push(i);
            let stop = self.choose_items(pos + 1, size, visit);
            self.chosen.pop();
            self.weights.iter_mut().zip(w).for_each(|(u, w)| *u -= w);
            if stop? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    fn assign_machines(&mut self, depth: usize, visit: &mut Visit<'_>) -> Result<bool> {
        if depth == self.chosen.len() {
            return visit(&self.chosen, &self.machines, self.value, &self.loads, &self.weights);
        }
        let i = self.chosen[depth];
        for j in 0..self.instance.k() {
            let s = self.instance.size(i, j);
            let val = self.instance.value(i, j);
            if val <= 0.0 || self.loads[j] + s > self.instance.capacities()[j] + TOL {
                continue;
            }
            self.loads[j] += s;
            self.value += val;
            self.machines.push(j);
            let stop = self.assign_machines(depth + 1, visit);
            self.machines.pop();
            self.value -= val;
            self.loads[j] -= s;
            if stop? {
                return Ok(true);
            }
        }
        Ok(false)
    }
}
