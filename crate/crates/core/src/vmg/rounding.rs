//! Resource augmentation: round sizes and weights up to integer multiples of
//! per-machine / per-dimension granularities so the exact DP becomes
//! polynomial, at the price of a `(1 + ε)` capacity overshoot.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::TOL;
use crate::vmg::dp::{solve_integral_dp_with, DpOptions, DpStats};
use crate::vmg::{GapAssignment, GapInstance, NEVER_FITS};

/// Granularities `mu` (one per machine) and `delta` (one per weight dimension).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RoundingScheme {
    pub mu: Vec<f64>,
    pub delta: Vec<f64>,
}

impl RoundingScheme {
    /// `mu_j = ε·M_j/n`, `delta_q = ε·W_q/n`.
    pub fn default_for(instance: &GapInstance, eps: f64) -> Self {
        let n = instance.n().max(1) as f64;
        RoundingScheme {
            mu: instance.capacities().iter().map(|m| eps * m / n).collect(),
            delta: instance.weight_limits().iter().map(|w| eps * w / n).collect(),
        }
    }
}

// Quotients that are integral in exact arithmetic must not be pushed to the
// next integer by representation error.
fn ceil_ratio(a: f64, b: f64) -> f64 {
    let r = a / b;
    let nearest = r.round();
    if (r - nearest).abs() <= TOL * nearest.abs().max(1.0) {
        nearest
    } else {
        r.ceil()
    }
}

fn floor_ratio(a: f64, b: f64) -> f64 {
    let r = a / b;
    let nearest = r.round();
    if (r - nearest).abs() <= TOL * nearest.abs().max(1.0) {
        nearest
    } else {
        r.floor()
    }
}

/// Integral instance with `s' = ⌈s/μ⌉`, `M' = ⌊M/μ⌋ + n`, `w' = ⌈w/δ⌉` and
/// `W' = ⌊W/δ⌋ + n`. Values and item order are unchanged. Sizes above `M'`
/// become infinite and weights above `W'` are capped at `W' + 1`; neither
/// changes which assignments are feasible.
pub fn round_instance(instance: &GapInstance, scheme: &RoundingScheme) -> Result<GapInstance> {
    if scheme.mu.len() != instance.k() || scheme.delta.len() != instance.d() {
        return Err(Error::contract("rounding scheme does not match the instance shape"));
    }
    if let Some(g) = scheme.mu.iter().chain(&scheme.delta).find(|g| !(**g > 0.0 && g.is_finite())) {
        return Err(Error::contract(format!("granularity {g} must be positive")));
    }
    let n = instance.n() as f64;
    let capacities: Vec<f64> = instance
        .capacities()
        .iter()
        .zip(&scheme.mu)
        .map(|(m, mu)| floor_ratio(*m, *mu) + n)
        .collect();
    let weight_limits: Vec<f64> = instance
        .weight_limits()
        .iter()
        .zip(&scheme.delta)
        .map(|(w, delta)| floor_ratio(*w, *delta) + n)
        .collect();
    let sizes = (0..instance.n())
        .map(|i| {
            instance
                .sizes(i)
                .iter()
                .zip(&scheme.mu)
                .zip(&capacities)
                .map(|((s, mu), cap): ((&f64, &f64), &f64)| {
                    let r = if s.is_finite() { ceil_ratio(*s, *mu) } else { NEVER_FITS };
                    if r > *cap { NEVER_FITS } else { r }
                })
                .collect()
        })
        .collect();
    let weights = (0..instance.n())
        .map(|i| {
            instance
                .weights(i)
                .iter()
                .zip(&scheme.delta)
                .zip(&weight_limits)
                .map(|((w, delta), lim): ((&f64, &f64), &f64)| ceil_ratio(*w, *delta).min(lim + 1.0))
                .collect()
        })
        .collect();
    let values = (0..instance.n()).map(|i| instance.values(i).to_vec()).collect();
    Ok(GapInstance::from_parts_unchecked(capacities, weight_limits, sizes, values, weights))
}

/// Optimal assignment for the rounded instance: feasible for `(1+ε)M`,
/// `(1+ε)W` and worth at least the optimum under `M`, `W`.
pub fn assign_res_aug(instance: &GapInstance, eps: f64) -> Result<GapAssignment> {
    assign_res_aug_with(instance, eps, &DpOptions::default()).map(|(a, _)| a)
}

pub fn assign_res_aug_with(
    instance: &GapInstance,
    eps: f64,
    options: &DpOptions,
) -> Result<(GapAssignment, DpStats)> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::contract(format!("eps = {eps} must lie in (0, 1)")));
    }

    // A zero limit admits only items of zero size (weight) there; such
    // machines and dimensions get unit granularity and the other items are
    // excluded up front.
    let kept: Vec<usize> = (0..instance.n())
        .filter(|&i| {
            instance
                .weights(i)
                .iter()
                .zip(instance.weight_limits())
                .all(|(w, lim)| *lim > 0.0 || *w == 0.0)
        })
        .collect();
    if kept.is_empty() {
        return Ok((GapAssignment::empty(), DpStats::default()));
    }
    let mut sub = instance.restrict(&kept);
    for (row, &orig) in sub.sizes.iter_mut().zip(&kept) {
        for (j, s) in row.iter_mut().enumerate() {
            if instance.capacities()[j] == 0.0 && instance.size(orig, j) > 0.0 {
                *s = NEVER_FITS;
            }
        }
    }

    let n = kept.len() as f64;
    let scheme = RoundingScheme {
        mu: sub.capacities().iter().map(|&m| if m > 0.0 { eps * m / n } else { 1.0 }).collect(),
        delta: sub.weight_limits().iter().map(|&w| if w > 0.0 { eps * w / n } else { 1.0 }).collect(),
    };
    let rounded = round_instance(&sub, &scheme)?;
    let (solution, stats) = solve_integral_dp_with(&rounded, options)?;
    Ok((solution.lift(&kept, instance), stats))
}
