//! Next-Fit-Decreasing-Height shelf packing, and the profit-density greedy
//! that fills identical area containers with small items.

use std::collections::VecDeque;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{Container, ContainerKind, Item, Packing, Placement, TOL};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Shelf {
    pub base_y: f64,
    /// Height of the first (tallest) item on the shelf.
    pub shelf_height: f64,
    pub cursor_x: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NfdhOutcome {
    /// Placements relative to the bin's lower-left corner.
    pub packing: Packing,
    pub shelves: Vec<Shelf>,
    /// Indices (into the input) of the items left over, in processing order.
    pub unpacked: Vec<usize>,
}

/// Processing order: decreasing height, ties by id.
fn height_order(items: &[Item]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..items.len()).collect();
    order.sort_by(|&a, &b| {
        items[b]
            .height()
            .total_cmp(&items[a].height())
            .then_with(|| items[a].id().cmp(items[b].id()))
    });
    order
}

/// Packs items into a `width × height` bin shelf by shelf. Packing stops at
/// the first item that fits neither at the cursor nor on a fresh shelf; it
/// and everything after it are returned as unpacked.
pub fn nfdh_pack(items: &[Item], width: f64, height: f64) -> Result<NfdhOutcome> {
    if let Some(it) = items.iter().find(|it| it.width() > width + TOL || it.height() > height + TOL) {
        return Err(Error::contract(format!(
            "item `{}` ({} x {}) does not fit the {width} x {height} bin",
            it.id(),
            it.width(),
            it.height()
        )));
    }
    let order = height_order(items);
    let mut shelves: Vec<Shelf> = Vec::new();
    let mut placements = Vec::with_capacity(items.len());
    let mut profit = 0.0;

    for (pos, &idx) in order.iter().enumerate() {
        let it = &items[idx];
        let fits_here = shelves.last().is_some_and(|s| s.cursor_x + it.width() <= width + TOL);
        if !fits_here {
            let base_y = shelves.last().map_or(0.0, |s| s.base_y + s.shelf_height);
            if base_y + it.height() > height + TOL {
                return Ok(NfdhOutcome {
                    packing: Packing { placements, packed_profit: profit },
                    shelves,
                    unpacked: order[pos..].to_vec(),
                });
            }
            shelves.push(Shelf { base_y, shelf_height: it.height(), cursor_x: 0.0 });
        }
        let shelf = shelves.last_mut().expect("a shelf is open");
        placements.push(Placement::new(it.id(), shelf.cursor_x, shelf.base_y, false));
        shelf.cursor_x += it.width();
        profit += it.profit();
    }
    Ok(NfdhOutcome { packing: Packing { placements, packed_profit: profit }, shelves, unpacked: Vec::new() })
}

#[derive(Debug, Clone, PartialEq)]
pub struct GreedyOutcome {
    /// Indices (into the input) of the packed items.
    pub packed: Vec<usize>,
    /// Absolute placements inside the containers.
    pub packing: Packing,
}

/// Orders items by non-increasing profit density and fills the containers one
/// after another: each receives the longest remaining prefix whose area stays
/// within `(1−ε)²` of the container area, packed by NFDH.
pub fn pack_small_greedy(items: &[Item], containers: &[Container], eps: f64) -> Result<GreedyOutcome> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::contract(format!("eps = {eps} must lie in (0, 1)")));
    }
    if let Some(first) = containers.first() {
        let identical = containers
            .iter()
            .all(|c| (c.width - first.width).abs() <= TOL && (c.height - first.height).abs() <= TOL);
        if !identical || containers.iter().any(|c| c.kind != ContainerKind::Area) {
            return Err(Error::contract("pack_small_greedy needs identical area containers"));
        }
        if let Some(it) = items
            .iter()
            .find(|it| it.width() > eps * first.width + TOL || it.height() > eps * first.height + TOL)
        {
            return Err(Error::contract(format!("item `{}` is not eps-small for the containers", it.id())));
        }
    }

    let mut order: Vec<usize> = (0..items.len()).collect();
    order.sort_by(|&a, &b| {
        let da = items[a].profit() / items[a].area();
        let db = items[b].profit() / items[b].area();
        db.total_cmp(&da).then_with(|| items[a].id().cmp(items[b].id()))
    });

    let mut queue: VecDeque<usize> = order.into();
    let mut packed = Vec::new();
    let mut placements = Vec::new();
    let mut profit = 0.0;
    for c in containers {
        if queue.is_empty() {
            break;
        }
        let budget = (1.0 - eps).powi(2) * c.area();
        let mut area = 0.0;
        let mut prefix_idx = Vec::new();
        while let Some(&i) = queue.front() {
            if area + items[i].area() > budget + TOL {
                break;
            }
            area += items[i].area();
            prefix_idx.push(i);
            queue.pop_front();
        }
        let prefix: Vec<Item> = prefix_idx.iter().map(|&i| items[i].clone()).collect();
        let mut out = nfdh_pack(&prefix, c.width, c.height)?;
        out.packing.translate(c.x, c.y);
        // NFDH places the whole prefix by the area lemma; anything it could
        // not place goes back to the front of the queue.
        let mut returned: Vec<usize> = out.unpacked.iter().map(|&p| prefix_idx[p]).collect();
        returned.sort_by_key(|i| prefix_idx.iter().position(|j| j == i));
        for &i in returned.iter().rev() {
            queue.push_front(i);
        }
        for p in out.packing.placements {
            let idx = prefix_idx
                .iter()
                .copied()
                .find(|&i| items[i].id() == p.id)
                .expect("placed item comes from the prefix");
            packed.push(idx);
            profit += items[idx].profit();
            placements.push(p);
        }
    }
    Ok(GreedyOutcome { packed, packing: Packing { placements, packed_profit: profit } })
}
