//! Random instance builders shared by the integration tests.
#![allow(dead_code)]

use gvks::container::ContainerPackingInstance;
use gvks::model::{Container, ContainerKind, Item, KnapsackInstance};
use gvks::vmg::{GapAssignment, GapInstance, NEVER_FITS};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Multiples of 2^-20: sums and differences of a few of them are exact.
pub fn dyadic(rng: &mut impl Rng, lo: f64, hi: f64) -> f64 {
    let q = (1u64 << 20) as f64;
    let v = (rng.gen_range(lo..hi) * q).round() / q;
    v.clamp(lo, hi)
}

/// Integral instance: n ≤ `n_max`, k ∈ {1,2}, d ∈ {0,1,2}, capacities and
/// limits in 0..=8, occasional infinite sizes.
pub fn integral_gap(rng: &mut impl Rng, n_max: usize) -> GapInstance {
    let n = rng.gen_range(0..=n_max);
    let k = rng.gen_range(1..=2);
    let d = rng.gen_range(0..=2);
    let caps = (0..k).map(|_| rng.gen_range(0..=8) as f64).collect();
    let limits = (0..d).map(|_| rng.gen_range(0..=8) as f64).collect();
    let sizes = (0..n)
        .map(|_| (0..k).map(|_| if rng.gen_bool(0.1) { NEVER_FITS } else { rng.gen_range(0..=6) as f64 }).collect())
        .collect();
    let values = (0..n).map(|_| (0..k).map(|_| rng.gen_range(0..=9) as f64).collect()).collect();
    let weights = (0..n).map(|_| (0..d).map(|_| rng.gen_range(0..=5) as f64).collect()).collect();
    GapInstance::new(caps, limits, sizes, values, weights).unwrap()
}

/// Real-valued instance with the given shape.
pub fn real_gap(rng: &mut impl Rng, n: usize, k: usize, d: usize) -> GapInstance {
    let caps = (0..k).map(|_| rng.gen_range(0.3..1.5)).collect();
    let limits = (0..d).map(|_| rng.gen_range(0.3..1.5)).collect();
    let sizes = (0..n)
        .map(|_| {
            (0..k)
                .map(|_| if rng.gen_bool(0.05) { NEVER_FITS } else { rng.gen_range(0.0..0.9) })
                .collect()
        })
        .collect();
    let values = (0..n).map(|_| (0..k).map(|_| rng.gen_range(0.0..1.0)).collect()).collect();
    let weights = (0..n).map(|_| (0..d).map(|_| rng.gen_range(0.0..0.7)).collect()).collect();
    GapInstance::new(caps, limits, sizes, values, weights).unwrap()
}

/// Random assignment made feasible under the given limits by dropping items
/// in random order.
pub fn random_feasible(rng: &mut impl Rng, inst: &GapInstance, caps: &[f64], limits: &[f64]) -> GapAssignment {
    let mut pairs: Vec<(usize, usize)> = (0..inst.n())
        .filter_map(|i| {
            let j = rng.gen_range(0..=inst.k());
            (j < inst.k() && inst.size(i, j).is_finite()).then_some((i, j))
        })
        .collect();
    pairs.shuffle(rng);
    loop {
        let a = GapAssignment::from_pairs(inst, pairs.iter().copied()).unwrap();
        if a.is_feasible_for(inst, caps, limits) {
            return a;
        }
        pairs.pop();
    }
}

pub fn item(id: impl Into<String>, w: f64, h: f64, p: f64, v: Vec<f64>) -> Item {
    Item::new(id, w, h, p, v).unwrap()
}

pub fn random_item(rng: &mut impl Rng, id: usize, d: usize, max_side: f64) -> Item {
    item(
        format!("i{id}"),
        rng.gen_range(0.02..max_side),
        rng.gen_range(0.02..max_side),
        rng.gen_range(0.05..1.0),
        (0..d).map(|_| rng.gen_range(0.0..0.5)).collect(),
    )
}

pub fn random_kind(rng: &mut impl Rng) -> ContainerKind {
    ContainerKind::ALL[rng.gen_range(0..4)]
}

/// 1 to 3 disjoint containers: vertical strips of random widths and heights.
pub fn random_containers(rng: &mut impl Rng) -> Vec<Container> {
    let c = rng.gen_range(1..=3);
    let mut cuts: Vec<f64> = (0..c - 1).map(|_| rng.gen_range(0.1..0.9)).collect();
    cuts.push(0.0);
    cuts.push(1.0);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    cuts.windows(2)
        .map(|w| Container::new(random_kind(rng), w[0], 0.0, w[1] - w[0], rng.gen_range(0.2..=1.0)))
        .collect()
}

pub fn random_container_instance(rng: &mut impl Rng, n: usize, d: usize, rotations: bool) -> ContainerPackingInstance {
    let items = (0..n)
        .map(|i| {
            let side = if rng.gen_bool(0.3) { 0.12 } else { 0.7 };
            random_item(rng, i, d, side)
        })
        .collect();
    ContainerPackingInstance { items, containers: random_containers(rng), eps_prime: 0.2, rotations, d }
}

pub fn random_knapsack(rng: &mut impl Rng, n: usize, d: usize, rotations: bool) -> KnapsackInstance {
    let items = (0..n).map(|i| random_item(rng, i, d, 0.7)).collect();
    KnapsackInstance::new(d, rotations, items).unwrap()
}
