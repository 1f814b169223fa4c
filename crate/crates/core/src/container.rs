//! The container packing problem, its reduction to Vector-Max-GAP and the
//! way back from an assignment to a geometric packing.
//!
//! One machine per container, global weight limit 1 in every dimension:
//!
//! | container | size of a fitting item              | capacity              |
//! |-----------|-------------------------------------|-----------------------|
//! | large     | 1                                   | 1                     |
//! | wide      | item height (stacked)               | container height      |
//! | tall      | item width (side by side)           | container width       |
//! | area      | item area, if ε′-small              | (1−ε′)² · area        |
//!
//! Items that do not fit get [`NEVER_FITS`]. With rotations, wide and tall
//! containers use whichever orientation fits, and the smaller stacking side
//! when both do.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{
    container_config_valid, Container, ContainerKind, Item, KnapsackInstance, Packing, Placement, TOL,
};
use crate::nfdh::nfdh_pack;
use crate::vmg::ptas::{vmg_ptas_with, PtasOptions, PtasOutcome};
use crate::vmg::{GapAssignment, GapInstance, NEVER_FITS};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContainerPackingInstance {
    pub items: Vec<Item>,
    pub containers: Vec<Container>,
    pub eps_prime: f64,
    pub rotations: bool,
    pub d: usize,
}

impl ContainerPackingInstance {
    pub fn new(instance: &KnapsackInstance, containers: Vec<Container>, eps_prime: f64) -> Self {
        ContainerPackingInstance {
            items: instance.items().to_vec(),
            containers,
            eps_prime,
            rotations: instance.rotations_allowed(),
            d: instance.d(),
        }
    }

    pub fn area_budget(&self, c: &Container) -> f64 {
        (1.0 - self.eps_prime).powi(2) * c.area()
    }
}

fn fits(w: f64, h: f64, c: &Container) -> bool {
    w <= c.width + TOL && h <= c.height + TOL
}

pub fn is_eps_small(item: &Item, c: &Container, eps_prime: f64) -> bool {
    item.width() <= eps_prime * c.width + TOL && item.height() <= eps_prime * c.height + TOL
}

/// Orientation an item takes inside a container: `Some(rotated)`, or `None`
/// if it cannot go there. Square-ish ties stay unrotated.
pub fn orientation(item: &Item, c: &Container, rotations: bool, eps_prime: f64) -> Option<bool> {
    let plain = fits(item.width(), item.height(), c);
    let turned = rotations && fits(item.height(), item.width(), c);
    match c.kind {
        ContainerKind::Area => is_eps_small(item, c, eps_prime).then_some(false),
        ContainerKind::Large => {
            if plain {
                Some(false)
            } else if turned {
                Some(true)
            } else {
                None
            }
        }
        ContainerKind::Wide | ContainerKind::Tall => match (plain, turned) {
            (false, false) => None,
            (true, false) => Some(false),
            (false, true) => Some(true),
            (true, true) => {
                // Stacking side: height in a wide container, width in a tall one.
                let (w, h) = (item.width(), item.height());
                Some(if c.kind == ContainerKind::Wide { w < h } else { h < w })
            }
        },
    }
}

/// Machine size of `item` in container `c`.
pub fn machine_size(item: &Item, c: &Container, rotations: bool, eps_prime: f64) -> f64 {
    let Some(rotated) = orientation(item, c, rotations, eps_prime) else {
        return NEVER_FITS;
    };
    let (w, h) = item.dims(rotated);
    match c.kind {
        ContainerKind::Large => 1.0,
        ContainerKind::Wide => h,
        ContainerKind::Tall => w,
        ContainerKind::Area => w * h,
    }
}

pub fn machine_capacity(c: &Container, eps_prime: f64) -> f64 {
    match c.kind {
        ContainerKind::Large => 1.0,
        ContainerKind::Wide => c.height,
        ContainerKind::Tall => c.width,
        ContainerKind::Area => (1.0 - eps_prime).powi(2) * c.area(),
    }
}

pub fn reduce_to_vmg(cp: &ContainerPackingInstance) -> Result<GapInstance> {
    let report = container_config_valid(&cp.containers);
    if !report.is_valid() {
        return Err(Error::contract(format!("invalid container configuration: {}", report.violations[0])));
    }
    let capacities = cp.containers.iter().map(|c| machine_capacity(c, cp.eps_prime)).collect();
    let sizes = cp
        .items
        .iter()
        .map(|it| cp.containers.iter().map(|c| machine_size(it, c, cp.rotations, cp.eps_prime)).collect())
        .collect();
    let values = cp.items.iter().map(|it| vec![it.profit(); cp.containers.len()]).collect();
    let weights = cp.items.iter().map(|it| it.weights().to_vec()).collect();
    GapInstance::new(capacities, vec![1.0; cp.d], sizes, values, weights)
}

/// Lays out the items of a feasible assignment inside their containers:
/// large at the corner, wide stacked bottom-up, tall left to right (all in
/// item order), area by NFDH.
pub fn realize_assignment(assignment: &GapAssignment, cp: &ContainerPackingInstance) -> Result<Packing> {
    let gap = reduce_to_vmg(cp)?;
    if assignment.iter().any(|(i, j)| !gap.size(i, j).is_finite()) || !assignment.is_feasible(&gap) {
        return Err(Error::contract("assignment is infeasible for the container instance"));
    }
    let mut placements = Vec::with_capacity(assignment.len());
    for (j, c) in cp.containers.iter().enumerate() {
        let members = assignment.items_on(j);
        match c.kind {
            ContainerKind::Large | ContainerKind::Wide | ContainerKind::Tall => {
                let mut cursor = 0.0;
                for i in members {
                    let item = &cp.items[i];
                    let rotated = orientation(item, c, cp.rotations, cp.eps_prime).expect("finite size");
                    let (w, h) = item.dims(rotated);
                    let (x, y) = match c.kind {
                        ContainerKind::Wide => (c.x, c.y + cursor),
                        ContainerKind::Tall => (c.x + cursor, c.y),
                        _ => (c.x, c.y),
                    };
                    cursor += if c.kind == ContainerKind::Wide { h } else { w };
                    placements.push(Placement::new(item.id(), x, y, rotated));
                }
            }
            ContainerKind::Area => {
                let members: Vec<Item> = members.iter().map(|&i| cp.items[i].clone()).collect();
                let mut out = nfdh_pack(&members, c.width, c.height)?;
                if !out.unpacked.is_empty() {
                    return Err(Error::contract(format!("NFDH could not fill area container {j}")));
                }
                out.packing.translate(c.x, c.y);
                placements.extend(out.packing.placements);
            }
        }
    }
    let packed_profit = assignment.iter().map(|(i, _)| cp.items[i].profit()).sum();
    Ok(Packing { placements, packed_profit })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContainerSolution {
    pub packing: Packing,
    pub ptas: PtasOutcome,
}

/// Reduce, solve with the Vector-Max-GAP PTAS, realize.
pub fn solve_container_packing(cp: &ContainerPackingInstance, eps_cont: f64) -> Result<Packing> {
    solve_container_packing_with(cp, eps_cont, &PtasOptions::default()).map(|s| s.packing)
}

pub fn solve_container_packing_with(
    cp: &ContainerPackingInstance,
    eps_cont: f64,
    options: &PtasOptions,
) -> Result<ContainerSolution> {
    let gap = reduce_to_vmg(cp)?;
    let ptas = vmg_ptas_with(&gap, eps_cont, options)?;
    let packing = realize_assignment(&ptas.assignment, cp)?;
    Ok(ContainerSolution { packing, ptas })
}
