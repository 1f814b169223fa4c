//! Vector-Max-GAP: assign items to `k` machines (per-machine sizes and
//! values, per-machine capacities) subject to `d` global weight budgets.
//!
//! [`dp`] solves integral instances exactly; [`rounding`], [`trim`],
//! [`structure`] and [`ptas`] build the approximation scheme for real data.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::TOL;

pub mod dp;
pub mod ptas;
pub mod rounding;
pub mod structure;
pub mod trim;

pub use dp::{solve_integral_dp, solve_integral_dp_with, DpOptions, DpStats};
pub use ptas::{vmg_ptas, vmg_ptas_with, PtasOptions, PtasOutcome};
pub use rounding::{assign_res_aug, assign_res_aug_with, round_instance, RoundingScheme};
pub use structure::{structural_decompose, Decomposition};
pub use trim::{trim, trim_small_solution, TrimItem, TrimOutcome};

/// Size of an item on a machine it can never be assigned to.
pub const NEVER_FITS: f64 = f64::INFINITY;

/// A Vector-Max-GAP instance. Items are addressed by their index.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GapInstance {
    capacities: Vec<f64>,
    weight_limits: Vec<f64>,
    /// `sizes[i][j]`: size of item `i` on machine `j` (may be [`NEVER_FITS`]).
    sizes: Vec<Vec<f64>>,
    /// `values[i][j]`: value of item `i` on machine `j`.
    values: Vec<Vec<f64>>,
    /// `weights[i][q]`: weight of item `i` in dimension `q`.
    weights: Vec<Vec<f64>>,
}

impl GapInstance {
    pub fn new(
        capacities: Vec<f64>,
        weight_limits: Vec<f64>,
        sizes: Vec<Vec<f64>>,
        values: Vec<Vec<f64>>,
        weights: Vec<Vec<f64>>,
    ) -> Result<Self> {
        let (k, d, n) = (capacities.len(), weight_limits.len(), sizes.len());
        if values.len() != n || weights.len() != n {
            return Err(Error::invalid("sizes, values and weights must list the same items"));
        }
        let finite_nonneg = |v: &f64| *v >= 0.0 && v.is_finite();
        if !capacities.iter().all(finite_nonneg) || !weight_limits.iter().all(finite_nonneg) {
            return Err(Error::invalid("capacities and weight limits must be finite and non-negative"));
        }
        for i in 0..n {
            if sizes[i].len() != k || values[i].len() != k || weights[i].len() != d {
                return Err(Error::invalid(format!("item {i} has mismatched row lengths")));
            }
            if !sizes[i].iter().all(|s| *s >= 0.0) {
                return Err(Error::invalid(format!("item {i} has a negative or NaN size")));
            }
            if !values[i].iter().all(finite_nonneg) || !weights[i].iter().all(finite_nonneg) {
                return Err(Error::invalid(format!("item {i} has a negative or non-finite value/weight")));
            }
        }
        Ok(GapInstance { capacities, weight_limits, sizes, values, weights })
    }

    /// Number of items.
    pub fn n(&self) -> usize {
        self.sizes.len()
    }

    /// Number of machines.
    pub fn k(&self) -> usize {
        self.capacities.len()
    }

    /// Number of weight dimensions.
    pub fn d(&self) -> usize {
        self.weight_limits.len()
    }

    pub fn capacities(&self) -> &[f64] {
        &self.capacities
    }

    pub fn weight_limits(&self) -> &[f64] {
        &self.weight_limits
    }

    pub fn size(&self, item: usize, machine: usize) -> f64 {
        self.sizes[item][machine]
    }

    pub fn value(&self, item: usize, machine: usize) -> f64 {
        self.values[item][machine]
    }

    pub fn weights(&self, item: usize) -> &[f64] {
        &self.weights[item]
    }

    pub fn sizes(&self, item: usize) -> &[f64] {
        &self.sizes[item]
    }

    pub fn values(&self, item: usize) -> &[f64] {
        &self.values[item]
    }

    /// Same items and machines under different capacities and weight limits.
    pub fn with_limits(&self, capacities: Vec<f64>, weight_limits: Vec<f64>) -> Result<Self> {
        GapInstance::new(
            capacities,
            weight_limits,
            self.sizes.clone(),
            self.values.clone(),
            self.weights.clone(),
        )
    }

    /// Sub-instance on the listed items (re-indexed in the given order).
    pub(crate) fn restrict(&self, items: &[usize]) -> GapInstance {
        GapInstance {
            capacities: self.capacities.clone(),
            weight_limits: self.weight_limits.clone(),
            sizes: items.iter().map(|&i| self.sizes[i].clone()).collect(),
            values: items.iter().map(|&i| self.values[i].clone()).collect(),
            weights: items.iter().map(|&i| self.weights[i].clone()).collect(),
        }
    }

    pub(crate) fn from_parts_unchecked(
        capacities: Vec<f64>,
        weight_limits: Vec<f64>,
        sizes: Vec<Vec<f64>>,
        values: Vec<Vec<f64>>,
        weights: Vec<Vec<f64>>,
    ) -> Self {
        GapInstance { capacities, weight_limits, sizes, values, weights }
    }
}

/// A partial item → machine map with its total value.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct GapAssignment {
    machine_of: BTreeMap<usize, usize>,
    total_value: f64,
}

impl GapAssignment {
    pub fn empty() -> Self {
        GapAssignment::default()
    }

    /// Builds an assignment from `(item, machine)` pairs, computing its value.
    pub fn from_pairs(
        instance: &GapInstance,
        pairs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let mut machine_of = BTreeMap::new();
        for (i, j) in pairs {
            if i >= instance.n() || j >= instance.k() {
                return Err(Error::contract(format!("assignment ({i}, {j}) is out of range")));
            }
            if machine_of.insert(i, j).is_some() {
                return Err(Error::contract(format!("item {i} assigned twice")));
            }
        }
        let total_value = machine_of.iter().map(|(&i, &j)| instance.value(i, j)).sum();
        Ok(GapAssignment { machine_of, total_value })
    }

    pub fn machine_of(&self, item: usize) -> Option<usize> {
        self.machine_of.get(&item).copied()
    }

    /// `(item, machine)` pairs in increasing item order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.machine_of.iter().map(|(&i, &j)| (i, j))
    }

    pub fn items(&self) -> impl Iterator<Item = usize> + '_ {
        self.machine_of.keys().copied()
    }

    pub fn len(&self) -> usize {
        self.machine_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.machine_of.is_empty()
    }

    pub fn total_value(&self) -> f64 {
        self.total_value
    }

    /// Items assigned to `machine`, in increasing item order.
    pub fn items_on(&self, machine: usize) -> Vec<usize> {
        self.iter().filter(|&(_, j)| j == machine).map(|(i, _)| i).collect()
    }

    /// Per-machine total size.
    pub fn loads(&self, instance: &GapInstance) -> Vec<f64> {
        let mut loads = vec![0.0; instance.k()];
        for (i, j) in self.iter() {
            loads[j] += instance.size(i, j);
        }
        loads
    }

    /// Per-dimension total weight.
    pub fn weight_totals(&self, instance: &GapInstance) -> Vec<f64> {
        let mut totals = vec![0.0; instance.d()];
        for i in self.items() {
            for (t, w) in totals.iter_mut().zip(instance.weights(i)) {
                *t += w;
            }
        }
        totals
    }

    /// Feasible for the given capacities and weight limits, within [`TOL`].
    pub fn is_feasible_for(&self, instance: &GapInstance, capacities: &[f64], weight_limits: &[f64]) -> bool {
        let loads_ok = self
            .loads(instance)
            .iter()
            .zip(capacities)
            .all(|(l, m)| *l <= m + TOL);
        let weights_ok = self
            .weight_totals(instance)
            .iter()
            .zip(weight_limits)
            .all(|(t, w)| *t <= w + TOL);
        loads_ok && weights_ok
    }

    pub fn is_feasible(&self, instance: &GapInstance) -> bool {
        self.is_feasible_for(instance, &instance.capacities, &instance.weight_limits)
    }

    /// Re-index through `map` (sub-instance index → parent index).
    pub(crate) fn lift(&self, map: &[usize], parent: &GapInstance) -> GapAssignment {
        let machine_of: BTreeMap<usize, usize> = self.iter().map(|(i, j)| (map[i], j)).collect();
        let total_value = machine_of.iter().map(|(&i, &j)| parent.value(i, j)).sum();
        GapAssignment { machine_of, total_value }
    }

    pub(crate) fn merge(&mut self, other: &GapAssignment, instance: &GapInstance) {
        for (i, j) in other.iter() {
            self.machine_of.insert(i, j);
        }
        self.total_value = self.machine_of.iter().map(|(&i, &j)| instance.value(i, j)).sum();
    }

    pub(crate) fn without(&self, removed: &[usize], instance: &GapInstance) -> GapAssignment {
        let machine_of: BTreeMap<usize, usize> =
            self.iter().filter(|(i, _)| !removed.contains(i)).collect();
        let total_value = machine_of.iter().map(|(&i, &j)| instance.value(i, j)).sum();
        GapAssignment { machine_of, total_value }
    }
}
