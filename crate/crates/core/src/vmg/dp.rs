//! Exact dynamic program for Vector-Max-GAP with integral sizes, weights and
//! limits.
//!
//! `VAL(t, M, W)` is the best value using the first `t` items with remaining
//! machine capacities `M` and weight budgets `W`:
//!
//! ```text
//! VAL(t, M, W) = max( VAL(t-1, M, W),
//!                     max_j val_j(t) + VAL(t-1, M - s_j(t) e_j, W - w(t)) )
//! ```
//!
//! with `VAL(0, ·, ·) = 0` and branches leaving the non-negative orthant
//! excluded. The table is dense over `(k + d)` remaining-capacity coordinates
//! and the solution is recovered by re-evaluating the maximum backwards.

use crate::error::{Error, Result};
use crate::vmg::{GapAssignment, GapInstance};

/// Default ceiling on `n · ∏(table extent)`.
pub const DEFAULT_STATE_BUDGET: u128 = 1 << 26;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DpOptions {
    pub state_budget: u128,
}

impl Default for DpOptions {
    fn default() -> Self {
        DpOptions { state_budget: DEFAULT_STATE_BUDGET }
    }
}

/// Instrumentation of one DP run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct DpStats {
    /// Number of `(t, M, W)` cells evaluated.
    pub states_visited: u128,
    /// `n · ∏(M_j + 1) · ∏(W_q + 1)` for the instance as given.
    pub state_bound: u128,
}

/// Optimal assignment of an integral instance under the default budget.
pub fn solve_integral_dp(instance: &GapInstance) -> Result<GapAssignment> {
    solve_integral_dp_with(instance, &DpOptions::default()).map(|(a, _)| a)
}

fn as_integer(v: f64, what: &str) -> Result<u64> {
    if v.fract() != 0.0 || v < 0.0 || v > (1u64 << 52) as f64 {
        return Err(Error::contract(format!("{what} {v} is not a non-negative integer")));
    }
    Ok(v as u64)
}

pub fn solve_integral_dp_with(
    instance: &GapInstance,
    options: &DpOptions,
) -> Result<(GapAssignment, DpStats)> {
    let (n, k, d) = (instance.n(), instance.k(), instance.d());

    let caps: Vec<u64> = instance
        .capacities()
        .iter()
        .map(|&m| as_integer(m, "capacity"))
        .collect::<Result<_>>()?;
    let limits: Vec<u64> = instance
        .weight_limits()
        .iter()
        .map(|&w| as_integer(w, "weight limit"))
        .collect::<Result<_>>()?;
    // None marks a machine the item can never use.
    let mut sizes: Vec<Vec<Option<u64>>> = Vec::with_capacity(n);
    let mut weights: Vec<Vec<u64>> = Vec::with_capacity(n);
    for i in 0..n {
        let row = instance
            .sizes(i)
            .iter()
            .map(|&s| if s.is_finite() { as_integer(s, "size").map(Some) } else { Ok(None) })
            .collect::<Result<Vec<_>>>()?;
        sizes.push(row);
        weights.push(
            instance.weights(i).iter().map(|&w| as_integer(w, "weight")).collect::<Result<_>>()?,
        );
    }

    let state_bound = caps
        .iter()
        .chain(&limits)
        .fold(n as u128, |acc, &c| acc.saturating_mul(c as u128 + 1));

    // Capacities beyond what all usable items could consume do not change any
    // VAL, so the table is clipped to the reachable extent.
    let mut extent: Vec<u64> = Vec::with_capacity(k + d);
    for j in 0..k {
        let demand: u64 = (0..n)
            .filter(|&i| instance.value(i, j) > 0.0)
            .filter_map(|i| sizes[i][j])
            .fold(0u64, u64::saturating_add);
        extent.push(caps[j].min(demand));
    }
    for q in 0..d {
        let demand: u64 = (0..n).map(|i| weights[i][q]).fold(0u64, u64::saturating_add);
        extent.push(limits[q].min(demand));
    }

    let states = extent.iter().fold(1u128, |acc, &e| acc.saturating_mul(e as u128 + 1));
    let needed = states.saturating_mul(n.max(1) as u128);
    if needed > options.state_budget {
        return Err(Error::Budget { what: "DP state", needed, limit: options.state_budget });
    }
    let states = states as usize;

    let mut stride = vec![1usize; k + d];
    for a in 1..k + d {
        stride[a] = stride[a - 1] * (extent[a - 1] as usize + 1);
    }

    // layers[t * states + idx] = VAL(t, state idx)
    let mut layers = vec![0.0f64; (n + 1) * states];
    let mut coords = vec![0u64; k + d];
    for t in 1..=n {
        let item = t - 1;
        let (done, rest) = layers.split_at_mut(t * states);
        let prev = &done[(t - 1) * states..];
        let cur = &mut rest[..states];
        coords.iter_mut().for_each(|c| *c = 0);
        for idx in 0..states {
            cur[idx] = best_branch(instance, item, &sizes[item], &weights[item], &coords, &stride, k, prev, idx).0;
            advance(&mut coords, &extent);
        }
    }

    // Backtrack from the full-capacity state.
    let mut idx = states - 1;
    let mut coords: Vec<u64> = extent.clone();
    let mut pairs = Vec::new();
    for t in (1..=n).rev() {
        let item = t - 1;
        let prev = &layers[(t - 1) * states..t * states];
        let (_, choice) = best_branch(instance, item, &sizes[item], &weights[item], &coords, &stride, k, prev, idx);
        if let Some(j) = choice {
            let s = sizes[item][j].unwrap_or(0);
            idx -= s as usize * stride[j];
            coords[j] -= s;
            for q in 0..d {
                idx -= weights[item][q] as usize * stride[k + q];
                coords[k + q] -= weights[item][q];
            }
            pairs.push((item, j));
        }
    }

    let assignment = GapAssignment::from_pairs(instance, pairs)?;
    let stats = DpStats { states_visited: (n as u128) * states as u128, state_bound };
    Ok((assignment, stats))
}

/// Evaluates the recurrence at one cell. Ties keep "skip", then the lowest
/// machine index.
#[allow(clippy::too_many_arguments)]
#[inline]
fn best_branch(
    instance: &GapInstance,
    item: usize,
    sizes: &[Option<u64>],
    weights: &[u64],
    coords: &[u64],
    stride: &[usize],
    k: usize,
    prev: &[f64],
    idx: usize,
) -> (f64, Option<usize>) {
    let mut best = prev[idx];
    let mut choice = None;
    let mut base = idx;
    for (q, &w) in weights.iter().enumerate() {
        if w > coords[k + q] {
            return (best, choice);
        }
        base -= w as usize * stride[k + q];
    }
    for j in 0..k {
        let val = instance.value(item, j);
        if val <= 0.0 {
            continue;
        }
        let Some(s) = sizes[j] else { continue };
        if s > coords[j] {
            continue;
        }
        let cand = val + prev[base - s as usize * stride[j]];
        if cand > best {
            best = cand;
            choice = Some(j);
        }
    }
    (best, choice)
}

fn advance(coords: &mut [u64], extent: &[u64]) {
    for (c, &e) in coords.iter_mut().zip(extent) {
        if *c < e {
            *c += 1;
            return;
        }
        *c = 0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vmg::NEVER_FITS;

    fn inst(
        caps: &[f64],
        limits: &[f64],
        items: &[(&[f64], &[f64], &[f64])],
    ) -> GapInstance {
        GapInstance::new(
            caps.to_vec(),
            limits.to_vec(),
            items.iter().map(|(s, _, _)| s.to_vec()).collect(),
            items.iter().map(|(_, v, _)| v.to_vec()).collect(),
            items.iter().map(|(_, _, w)| w.to_vec()).collect(),
        )
        .unwrap()
    }

    #[test]
    fn no_items_gives_empty_assignment() {
        let a = solve_integral_dp(&inst(&[3.0, 2.0], &[4.0], &[])).unwrap();
        assert!(a.is_empty());
        assert_eq!(a.total_value(), 0.0);
    }

    #[test]
    fn single_item_exactly_fits() {
        let a = solve_integral_dp(&inst(&[2.0], &[1.0], &[(&[2.0], &[5.0], &[1.0])])).unwrap();
        assert_eq!(a.machine_of(0), Some(0));
        assert_eq!(a.total_value(), 5.0);
    }

    #[test]
    fn items_that_cannot_coexist() {
        let i = inst(&[4.0], &[3.0], &[(&[2.0], &[5.0], &[1.0]), (&[3.0], &[6.0], &[2.0])]);
        let a = solve_integral_dp(&i).unwrap();
        assert_eq!(a.total_value(), 6.0);
        assert_eq!(a.machine_of(1), Some(0));
        assert_eq!(a.machine_of(0), None);
    }

    #[test]
    fn never_fits_sentinel_blocks_machine() {
        let i = inst(&[5.0, 5.0], &[], &[(&[NEVER_FITS, 1.0], &[9.0, 1.0], &[])]);
        let a = solve_integral_dp(&i).unwrap();
        assert_eq!(a.machine_of(0), Some(1));
        assert_eq!(a.total_value(), 1.0);
    }

    #[test]
    fn zero_value_items_stay_unassigned() {
        let i = inst(&[5.0], &[], &[(&[0.0], &[0.0], &[])]);
        assert!(solve_integral_dp(&i).unwrap().is_empty());
    }

    #[test]
    fn ties_prefer_skip_then_low_machine() {
        // Item 1 alone or item 0 alone: same value; skipping the last item wins.
        let i = inst(&[1.0, 1.0], &[1.0], &[(&[1.0, 1.0], &[3.0, 3.0], &[1.0]), (&[1.0, 1.0], &[3.0, 3.0], &[1.0])]);
        let a = solve_integral_dp(&i).unwrap();
        assert_eq!(a.iter().collect::<Vec<_>>(), vec![(0, 0)]);
    }

    #[test]
    fn rejects_fractional_and_over_budget() {
        let frac = inst(&[2.5], &[], &[(&[1.0], &[1.0], &[])]);
        assert!(matches!(solve_integral_dp(&frac), Err(Error::Contract(_))));
        let row: (&[f64], &[f64], &[f64]) = (&[500.0, 500.0], &[1.0, 1.0], &[500.0]);
        let big = inst(&[1000.0, 1000.0], &[1000.0], &[row; 40]);
        let err = solve_integral_dp_with(&big, &DpOptions { state_budget: 1000 }).unwrap_err();
        assert!(err.is_budget());
    }

    #[test]
    fn visited_states_within_bound() {
        let i = inst(&[4.0, 3.0], &[5.0], &[(&[2.0, 1.0], &[5.0, 4.0], &[2.0]), (&[3.0, 2.0], &[6.0, 1.0], &[3.0]), (&[1.0, 3.0], &[2.0, 2.0], &[1.0])]);
        let (_, stats) = solve_integral_dp_with(&i, &DpOptions::default()).unwrap();
        assert_eq!(stats.state_bound, 3 * 5 * 4 * 6);
        assert!(stats.states_visited <= stats.state_bound);
    }
}
