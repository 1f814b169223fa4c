//! Constructive split of a feasible assignment `J` into `X` (few big items),
//! `Y` (cheap) and `Z` (small relative to what `X` leaves free).
//!
//! Round `t` collects the items of `J` outside `R_1 ∪ … ∪ R_{t-1}` that are
//! big against the residual capacities. The first round whose set is worth
//! at most `ε·val(J)` becomes `Y`; all earlier rounds form `X`.

use serde::Serialize;

use crate::vmg::{GapAssignment, GapInstance};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Decomposition {
    pub x: Vec<usize>,
    pub y: Vec<usize>,
    pub z: Vec<usize>,
    /// Index `T` of the round that produced `Y`.
    pub rounds: usize,
}

pub fn structural_decompose(
    assignment: &GapAssignment,
    instance: &GapInstance,
    eps: f64,
) -> Decomposition {
    let total = assignment.total_value();
    let value_of = |set: &[usize]| -> f64 {
        set.iter()
            .map(|&i| instance.value(i, assignment.machine_of(i).expect("assigned item")))
            .sum()
    };

    let mut remaining: Vec<usize> = assignment.items().collect();
    let mut x: Vec<usize> = Vec::new();
    let mut used_caps = vec![0.0; instance.k()];
    let mut used_weight = vec![0.0; instance.d()];
    let mut rounds = 0;
    loop {
        rounds += 1;
        let big: Vec<usize> = remaining
            .iter()
            .copied()
            .filter(|&i| {
                let j = assignment.machine_of(i).expect("assigned item");
                let residual = instance.capacities()[j] - used_caps[j];
                instance.size(i, j) > eps * residual
                    || instance
                        .weights(i)
                        .iter()
                        .zip(instance.weight_limits())
                        .zip(&used_weight)
                        .any(|((w, lim), used)| *w > eps * (lim - used))
            })
            .collect();
        if value_of(&big) <= eps * total {
            remaining.retain(|i| !big.contains(i));
            x.sort_unstable();
            return Decomposition { x, y: big, z: remaining, rounds };
        }
        for &i in &big {
            let j = assignment.machine_of(i).expect("assigned item");
            used_caps[j] += instance.size(i, j);
            for (u, w) in used_weight.iter_mut().zip(instance.weights(i)) {
                *u += w;
            }
        }
        remaining.retain(|i| !big.contains(i));
        x.extend(big);
    }
}
