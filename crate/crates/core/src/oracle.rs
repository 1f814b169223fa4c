//! Exponential-time exact solvers used as ground truth at desk scale.
//!
//! Nothing here shares code with the approximation algorithms beyond the data
//! model, so agreement between the two is meaningful.

use std::collections::HashSet;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::container::ContainerPackingInstance;
use crate::error::{Error, Result};
use crate::model::{ContainerKind, Item, KnapsackInstance, Packing, Placement, Rect, TOL};
use crate::vmg::{GapAssignment, GapInstance};

/// Limits beyond which an oracle refuses to run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleBudget {
    pub max_items: usize,
    /// Search nodes visited before giving up.
    pub max_states: u64,
    pub timeout: Option<Duration>,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget { max_items: 12, max_states: 200_000_000, timeout: Some(Duration::from_secs(120)) }
    }
}

struct Meter {
    budget: OracleBudget,
    started: Instant,
    states: u64,
}

impl Meter {
    fn new(budget: OracleBudget) -> Self {
        Meter { budget, started: Instant::now(), states: 0 }
    }

    fn items(&self, n: usize) -> Result<()> {
        if n > self.budget.max_items {
            return Err(Error::Budget { what: "oracle items", needed: n as u128, limit: self.budget.max_items as u128 });
        }
        Ok(())
    }

    fn tick(&mut self) -> Result<()> {
        self.states += 1;
        if self.states > self.budget.max_states {
            return Err(Error::Budget {
                what: "oracle states",
                needed: self.states as u128,
                limit: self.budget.max_states as u128,
            });
        }
        if self.states.is_multiple_of(4096) {
            if let Some(t) = self.budget.timeout {
                if self.started.elapsed() > t {
                    return Err(Error::Budget {
                        what: "oracle milliseconds",
                        needed: self.started.elapsed().as_millis(),
                        limit: t.as_millis(),
                    });
                }
            }
        }
        Ok(())
    }
}

/// Optimal assignment by enumerating every vector in `{unassigned, 0, …, k-1}^n`
/// in lexicographic order (unassigned first); the first maximizer wins.
pub fn exact_vmg(instance: &GapInstance, budget: &OracleBudget) -> Result<GapAssignment> {
    let mut meter = Meter::new(*budget);
    meter.items(instance.n())?;
    let n = instance.n();
    let mut loads = vec![0.0; instance.k()];
    let mut weights = vec![0.0; instance.d()];
    let mut current: Vec<Option<usize>> = vec![None; n];
    let mut best: (f64, Vec<Option<usize>>) = (0.0, current.clone());

    #[allow(clippy::too_many_arguments)]
    fn go(
        i: usize,
        value: f64,
        inst: &GapInstance,
        loads: &mut [f64],
        weights: &mut [f64],
        current: &mut Vec<Option<usize>>,
        best: &mut (f64, Vec<Option<usize>>),
        meter: &mut Meter,
    ) -> Result<()> {
        meter.tick()?;
        if i == inst.n() {
            if value > best.0 {
                *best = (value, current.clone());
            }
            return Ok(());
        }
        go(i + 1, value, inst, loads, weights, current, best, meter)?;
        let w = inst.weights(i);
        if w.iter().zip(weights.iter()).zip(inst.weight_limits()).any(|((a, b), lim)| a + b > lim + TOL) {
            return Ok(());
        }
        for j in 0..inst.k() {
            let s = inst.size(i, j);
            if !s.is_finite() || loads[j] + s > inst.capacities()[j] + TOL {
                continue;
            }
            loads[j] += s;
            weights.iter_mut().zip(w).for_each(|(a, b)| *a += b);
            current[i] = Some(j);
            let r = go(i + 1, value + inst.value(i, j), inst, loads, weights, current, best, meter);
            current[i] = None;
            weights.iter_mut().zip(w).for_each(|(a, b)| *a -= b);
            loads[j] -= s;
            r?;
        }
        Ok(())
    }

    go(0, 0.0, instance, &mut loads, &mut weights, &mut current, &mut best, &mut meter)?;
    GapAssignment::from_pairs(instance, best.1.iter().enumerate().filter_map(|(i, m)| m.map(|j| (i, j))))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContainerOracleResult {
    pub value: f64,
    /// Per item: `(container, rotated)` or `None`.
    pub assignment: Vec<Option<(usize, bool)>>,
}

/// Optimal container packing value from the geometric constraints directly:
/// a large container takes one fitting item; wide containers stack fitting
/// items whose heights sum to at most the container height; tall containers
/// do the same with widths; area containers take ε′-small unrotated items of
/// total area at most `(1−ε′)²·area`; weights sum to at most 1 per dimension.
pub fn exact_container_packing(cp: &ContainerPackingInstance, budget: &OracleBudget) -> Result<ContainerOracleResult> {
    let mut meter = Meter::new(*budget);
    meter.items(cp.items.len())?;
    let m = cp.containers.len();

    // Per item: every (container, rotated) it can physically occupy.
    let options: Vec<Vec<(usize, bool)>> = cp
        .items
        .iter()
        .map(|it| {
            let mut opts = Vec::new();
            for (j, c) in cp.containers.iter().enumerate() {
                for rotated in [false, true] {
                    if rotated && !cp.rotations {
                        continue;
                    }
                    let (w, h) = it.dims(rotated);
                    let ok = match c.kind {
                        ContainerKind::Area => {
                            !rotated && w <= cp.eps_prime * c.width + TOL && h <= cp.eps_prime * c.height + TOL
                        }
                        _ => w <= c.width + TOL && h <= c.height + TOL,
                    };
                    if ok {
                        opts.push((j, rotated));
                    }
                }
            }
            opts
        })
        .collect();

    struct State<'a> {
        cp: &'a ContainerPackingInstance,
        options: Vec<Vec<(usize, bool)>>,
        used: Vec<f64>,
        weights: Vec<f64>,
        current: Vec<Option<(usize, bool)>>,
        best: ContainerOracleResult,
    }

    fn usage(it: &Item, kind: ContainerKind, rotated: bool) -> f64 {
        let (w, h) = it.dims(rotated);
        match kind {
            ContainerKind::Large => 1.0,
            ContainerKind::Wide => h,
            ContainerKind::Tall => w,
            ContainerKind::Area => w * h,
        }
    }

    fn go(i: usize, value: f64, st: &mut State, meter: &mut Meter) -> Result<()> {
        meter.tick()?;
        if i == st.cp.items.len() {
            if value > st.best.value {
                st.best = ContainerOracleResult { value, assignment: st.current.clone() };
            }
            return Ok(());
        }
        go(i + 1, value, st, meter)?;
        let it = &st.cp.items[i];
        if it.weights().iter().zip(&st.weights).any(|(a, b)| a + b > 1.0 + TOL) {
            return Ok(());
        }
        for t in 0..st.options[i].len() {
            let (j, rotated) = st.options[i][t];
            let c = &st.cp.containers[j];
            let cap = match c.kind {
                ContainerKind::Large => 1.0,
                ContainerKind::Wide => c.height,
                ContainerKind::Tall => c.width,
                ContainerKind::Area => (1.0 - st.cp.eps_prime).powi(2) * c.width * c.height,
            };
            let u = usage(it, c.kind, rotated);
            if st.used[j] + u > cap + TOL {
                continue;
            }
            st.used[j] += u;
            st.weights.iter_mut().zip(it.weights()).for_each(|(a, b)| *a += b);
            st.current[i] = Some((j, rotated));
            let r = go(i + 1, value + it.profit(), st, meter);
            st.current[i] = None;
            let it = &st.cp.items[i];
            st.weights.iter_mut().zip(it.weights()).for_each(|(a, b)| *a -= b);
            st.used[j] -= u;
            r?;
        }
        Ok(())
    }

    let n = cp.items.len();
    let mut st = State {
        cp,
        options,
        used: vec![0.0; m],
        weights: vec![0.0; cp.d],
        current: vec![None; n],
        best: ContainerOracleResult { value: 0.0, assignment: vec![None; n] },
    };
    go(0, 0.0, &mut st, &mut meter)?;
    Ok(st.best)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GvksOracleResult {
    pub profit: f64,
    pub witness: Packing,
}

/// Maximum profit of a packing of the instance, with a witness.
///
/// Subsets are tried by decreasing profit; the first one that satisfies the
/// vector constraint and packs geometrically is optimal. Packability is
/// decided by placing items one at a time at points whose x is 0 or the right
/// edge of a placed item and whose y is 0 or the top edge of a placed item.
/// Any packing can be slid left and down until every item is blocked in both
/// directions, and the blocking relation of disjoint rectangles is acyclic,
/// so some placement order reaches it through such points.
pub fn exact_gvks_small(instance: &KnapsackInstance, budget: &OracleBudget) -> Result<GvksOracleResult> {
    let mut meter = Meter::new(*budget);
    let n = instance.len();
    meter.items(n)?;
    if n >= 63 {
        return Err(Error::Budget { what: "oracle items", needed: n as u128, limit: 62 });
    }
    let items = instance.items();
    let mut subsets: Vec<(f64, u64)> = (0..1u64 << n)
        .map(|mask| (bits(mask).map(|i| items[i].profit()).sum::<f64>(), mask))
        .collect();
    subsets.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));

    for (profit, mask) in subsets {
        let chosen: Vec<usize> = bits(mask).collect();
        if profit <= 0.0 {
            break;
        }
        let area: f64 = chosen.iter().map(|&i| items[i].area()).sum();
        if area > 1.0 + TOL {
            continue;
        }
        let over = (0..instance.d()).any(|q| chosen.iter().map(|&i| items[i].weights()[q]).sum::<f64>() > 1.0 + TOL);
        if over {
            continue;
        }
        if let Some(placements) = pack_exactly(items, &chosen, instance.rotations_allowed(), &mut meter)? {
            let witness = Packing::from_placements(placements, instance);
            return Ok(GvksOracleResult { profit: witness.packed_profit, witness });
        }
    }
    Ok(GvksOracleResult { profit: 0.0, witness: Packing::empty() })
}

fn bits(mask: u64) -> impl Iterator<Item = usize> {
    (0..64).filter(move |i| mask >> i & 1 == 1)
}

type Key = Vec<(usize, i64, i64, bool)>;

fn quantize(v: f64) -> i64 {
    (v / TOL).round() as i64
}

/// Places all of `chosen` inside the unit square, or proves it impossible.
fn pack_exactly(items: &[Item], chosen: &[usize], rotations: bool, meter: &mut Meter) -> Result<Option<Vec<Placement>>> {
    let mut placed: Vec<(usize, Rect, bool)> = Vec::new();
    let mut seen: HashSet<Key> = HashSet::new();
    if place(items, chosen, rotations, &mut placed, &mut seen, meter)? {
        Ok(Some(placed.iter().map(|(i, r, rot)| Placement::new(items[*i].id(), r.x, r.y, *rot)).collect()))
    } else {
        Ok(None)
    }
}

fn place(
    items: &[Item],
    chosen: &[usize],
    rotations: bool,
    placed: &mut Vec<(usize, Rect, bool)>,
    seen: &mut HashSet<Key>,
    meter: &mut Meter,
) -> Result<bool> {
    meter.tick()?;
    if placed.len() == chosen.len() {
        return Ok(true);
    }
    let mut key: Key = placed.iter().map(|(i, r, rot)| (*i, quantize(r.x), quantize(r.y), *rot)).collect();
    key.sort_unstable();
    if !seen.insert(key) {
        return Ok(false);
    }
    let mut xs: Vec<f64> = std::iter::once(0.0).chain(placed.iter().map(|(_, r, _)| r.right())).collect();
    let mut ys: Vec<f64> = std::iter::once(0.0).chain(placed.iter().map(|(_, r, _)| r.top())).collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup_by(|a, b| (*a - *b).abs() <= TOL);
    ys.sort_by(f64::total_cmp);
    ys.dedup_by(|a, b| (*a - *b).abs() <= TOL);

    for &i in chosen {
        if placed.iter().any(|(j, _, _)| *j == i) {
            continue;
        }
        let it = &items[i];
        let orientations: &[bool] = if rotations && (it.width() - it.height()).abs() > TOL { &[false, true] } else { &[false] };
        for &rot in orientations {
            let (w, h) = it.dims(rot);
            for &x in &xs {
                if x + w > 1.0 + TOL {
                    continue;
                }
                for &y in &ys {
                    if y + h > 1.0 + TOL {
                        continue;
                    }
                    let r = Rect::new(x, y, w, h);
                    if placed.iter().any(|(_, q, _)| q.overlaps(&r)) {
                        continue;
                    }
                    placed.push((i, r, rot));
                    if place(items, chosen, rotations, placed, seen, meter)? {
                        return Ok(true);
                    }
                    placed.pop();
                }
            }
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::validate_packing;

    #[test]
    fn exact_vmg_two_item_example() {
        let inst =
            GapInstance::new(vec![4.0], vec![3.0], vec![vec![2.0], vec![3.0]], vec![vec![5.0], vec![6.0]], vec![vec![1.0], vec![2.0]])
                .unwrap();
        let a = exact_vmg(&inst, &OracleBudget::default()).unwrap();
        assert_eq!(a.total_value(), 6.0);
        assert_eq!(a.iter().collect::<Vec<_>>(), vec![(1, 0)]);
    }

    #[test]
    fn exact_vmg_empty() {
        let inst = GapInstance::new(vec![1.0], vec![], vec![], vec![], vec![]).unwrap();
        assert_eq!(exact_vmg(&inst, &OracleBudget::default()).unwrap().total_value(), 0.0);
    }

    #[test]
    fn budgets_are_enforced() {
        let inst = GapInstance::new(vec![1.0], vec![], vec![vec![0.1]; 5], vec![vec![1.0]; 5], vec![vec![]; 5]).unwrap();
        let tight = OracleBudget { max_items: 4, ..Default::default() };
        assert!(exact_vmg(&inst, &tight).unwrap_err().is_budget());
        let few = OracleBudget { max_states: 10, ..Default::default() };
        assert!(exact_vmg(&inst, &few).unwrap_err().is_budget());
    }

    #[test]
    fn two_big_squares_do_not_share_the_knapsack() {
        let items = vec![Item::new("a", 0.6, 0.6, 2.0, vec![]).unwrap(), Item::new("b", 0.6, 0.6, 3.0, vec![]).unwrap()];
        let inst = KnapsackInstance::new(0, true, items).unwrap();
        let r = exact_gvks_small(&inst, &OracleBudget::default()).unwrap();
        assert_eq!(r.profit, 3.0);
        assert!(validate_packing(&r.witness, &inst).unwrap().is_valid());
    }

    #[test]
    fn rotation_enables_a_packing() {
        let items = vec![Item::new("a", 1.0, 0.5, 1.0, vec![]).unwrap(), Item::new("b", 0.5, 1.0, 1.0, vec![]).unwrap()];
        let fixed = KnapsackInstance::new(0, false, items).unwrap();
        assert_eq!(exact_gvks_small(&fixed, &OracleBudget::default()).unwrap().profit, 1.0);
        let free = fixed.with_rotations(true);
        let r = exact_gvks_small(&free, &OracleBudget::default()).unwrap();
        assert_eq!(r.profit, 2.0);
        assert!(validate_packing(&r.witness, &free).unwrap().is_valid());
    }

    #[test]
    fn l_shaped_gap_is_used() {
        // 0.6×0.4, 0.4×0.6, 0.6×0.4, 0.4×0.6 pinwheel around a 0.2 hole.
        let items = vec![
            Item::new("a", 0.6, 0.4, 1.0, vec![]).unwrap(),
            Item::new("b", 0.4, 0.6, 1.0, vec![]).unwrap(),
            Item::new("c", 0.6, 0.4, 1.0, vec![]).unwrap(),
            Item::new("d", 0.4, 0.6, 1.0, vec![]).unwrap(),
        ];
        let inst = KnapsackInstance::new(0, false, items).unwrap();
        let r = exact_gvks_small(&inst, &OracleBudget::default()).unwrap();
        assert_eq!(r.profit, 4.0);
        assert!(validate_packing(&r.witness, &inst).unwrap().is_valid());
    }
}
