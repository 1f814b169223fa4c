//! Trimming: remove a cheap set of items so that a slightly overfull
//! one-dimensional stack fits into length 1 again.
//!
//! Items are laid out end to end in `[0, 1+δ]`. `k+1` windows of length `δ`
//! alternate with `k` gaps of length `ε` (`k = ⌊1/(δ+ε)⌋`). Since no item is
//! longer than `ε`, the item sets touching different windows are disjoint; the
//! cheapest one costs less than `(δ+ε)` of the total profit, and removing it
//! frees a whole window.

use crate::error::{Error, Result};
use crate::model::TOL;
use crate::vmg::{GapAssignment, GapInstance};

// Overlaps below this length do not count as touching a window.
const TOUCH: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrimItem {
    pub size: f64,
    pub profit: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrimOutcome {
    /// Indices (into the input) of the removed items, ascending.
    pub removed: Vec<usize>,
    /// Indices of the kept items, ascending.
    pub kept: Vec<usize>,
    /// Which window was cleared.
    pub window: usize,
    /// Profit of the items touching each window.
    pub window_profits: Vec<f64>,
}

/// Number of `δ`-windows minus one, i.e. `⌊1/(δ+ε)⌋`, never letting the
/// windows spill past `1+δ`.
pub fn window_count(eps: f64, delta: f64) -> usize {
    let mut k = (1.0 / (delta + eps)).floor() as usize;
    while k > 0 && (k + 1) as f64 * delta + k as f64 * eps > 1.0 + delta + TOUCH {
        k -= 1;
    }
    k
}

pub fn trim(items: &[TrimItem], eps: f64, delta: f64) -> Result<TrimOutcome> {
    if !(eps > 0.0 && delta > 0.0) {
        return Err(Error::contract(format!("trim needs eps, delta > 0 (got {eps}, {delta})")));
    }
    if let Some((i, it)) = items.iter().enumerate().find(|(_, it)| !(it.size >= 0.0 && it.size <= eps + TOL)) {
        return Err(Error::contract(format!("trim item {i} has size {} outside [0, {eps}]", it.size)));
    }
    let total: f64 = items.iter().map(|it| it.size).sum();
    if total > 1.0 + delta + TOL {
        return Err(Error::contract(format!("trim input has total size {total} > 1 + {delta}")));
    }

    let k = window_count(eps, delta);
    let mut window_profits = vec![0.0; k + 1];
    let mut touching: Vec<Option<usize>> = vec![None; items.len()];
    let mut start = 0.0;
    for (t, it) in items.iter().enumerate() {
        let end = start + it.size;
        // The first window whose right end passes this item's start.
        let first = ((start - delta) / (delta + eps)).ceil().max(0.0) as usize;
        for w in first..=k {
            let lo = w as f64 * (delta + eps);
            if lo >= end {
                break;
            }
            let overlap = end.min(lo + delta) - start.max(lo);
            if overlap > TOUCH {
                window_profits[w] += it.profit;
                touching[t] = Some(w);
                break;
            }
        }
        start = end;
    }

    let window = window_profits
        .iter()
        .enumerate()
        .fold(0, |best, (w, p)| if *p < window_profits[best] { w } else { best });
    let (removed, kept) = (0..items.len()).partition(|&t| touching[t] == Some(window));
    Ok(TrimOutcome { removed, kept, window, window_profits })
}

/// Repairs an assignment of ε-small items that is feasible for `(1+ε)M`,
/// `(1+ε)W` into one feasible for `M`, `W`: machine by machine on sizes, then
/// dimension by dimension on weights, each with `ε = δ = eps`.
pub fn trim_small_solution(
    assignment: &GapAssignment,
    instance: &GapInstance,
    eps: f64,
) -> Result<GapAssignment> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::contract(format!("eps = {eps} must lie in (0, 1)")));
    }
    let caps = instance.capacities();
    let limits = instance.weight_limits();
    let inflated_caps: Vec<f64> = caps.iter().map(|m| (1.0 + eps) * m).collect();
    let inflated_limits: Vec<f64> = limits.iter().map(|w| (1.0 + eps) * w).collect();
    if !assignment.is_feasible_for(instance, &inflated_caps, &inflated_limits) {
        return Err(Error::contract("assignment exceeds the (1+eps)-augmented limits"));
    }
    for (i, j) in assignment.iter() {
        if instance.size(i, j) > eps * caps[j] + TOL {
            return Err(Error::contract(format!("item {i} is not eps-small on machine {j}")));
        }
        if let Some(q) = (0..instance.d()).find(|&q| instance.weights(i)[q] > eps * limits[q] + TOL) {
            return Err(Error::contract(format!("item {i} is not eps-small in weight dimension {q}")));
        }
    }

    let mut current = assignment.clone();
    for j in 0..instance.k() {
        let on_machine = current.items_on(j);
        let load: f64 = on_machine.iter().map(|&i| instance.size(i, j)).sum();
        if load <= caps[j] + TOL || caps[j] <= 0.0 {
            continue;
        }
        let trim_items: Vec<TrimItem> = on_machine
            .iter()
            .map(|&i| TrimItem { size: instance.size(i, j) / caps[j], profit: instance.value(i, j) })
            .collect();
        let outcome = trim(&trim_items, eps, eps)?;
        let removed: Vec<usize> = outcome.removed.iter().map(|&t| on_machine[t]).collect();
        current = current.without(&removed, instance);
    }
    for q in 0..instance.d() {
        let chosen: Vec<(usize, usize)> = current.iter().collect();
        let total: f64 = chosen.iter().map(|&(i, _)| instance.weights(i)[q]).sum();
        if total <= limits[q] + TOL || limits[q] <= 0.0 {
            continue;
        }
        let trim_items: Vec<TrimItem> = chosen
            .iter()
            .map(|&(i, j)| TrimItem { size: instance.weights(i)[q] / limits[q], profit: instance.value(i, j) })
            .collect();
        let outcome = trim(&trim_items, eps, eps)?;
        let removed: Vec<usize> = outcome.removed.iter().map(|&t| chosen[t].0).collect();
        current = current.without(&removed, instance);
    }
    Ok(current)
}
