//! Domain types shared by every solver, plus the geometric and vector
//! feasibility validators.
//!
//! The knapsack is always the unit square `[0,1]²`. All comparisons use the
//! absolute tolerance [`TOL`]; shared edges never count as overlap.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance for every feasibility comparison.
pub const TOL: f64 = 1e-9;

/// Axis-parallel rectangle given by its lower-left corner and extent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub x: f64,
    pub y: f64,
    pub w: f64,
    pub h: f64,
}

impl Rect {
    pub fn new(x: f64, y: f64, w: f64, h: f64) -> Self {
        Rect { x, y, w, h }
    }

    pub fn right(&self) -> f64 {
        self.x + self.w
    }

    pub fn top(&self) -> f64 {
        self.y + self.h
    }

    pub fn area(&self) -> f64 {
        self.w * self.h
    }

    /// Length of the interior intersection along each axis (zero or negative
    /// when the rectangles are disjoint or only touch).
    pub fn overlap_extent(&self, other: &Rect) -> (f64, f64) {
        let ox = self.right().min(other.right()) - self.x.max(other.x);
        let oy = self.top().min(other.top()) - self.y.max(other.y);
        (ox, oy)
    }

    /// True if the open rectangles intersect by more than `TOL` in both axes.
    pub fn overlaps(&self, other: &Rect) -> bool {
        let (ox, oy) = self.overlap_extent(other);
        ox > TOL && oy > TOL
    }

    /// How far the rectangle sticks out of the unit square (0 if inside).
    pub fn unit_square_overshoot(&self) -> f64 {
        [-self.x, -self.y, self.right() - 1.0, self.top() - 1.0]
            .into_iter()
            .fold(0.0, f64::max)
    }

    pub fn contains(&self, inner: &Rect) -> bool {
        inner.x >= self.x - TOL
            && inner.y >= self.y - TOL
            && inner.right() <= self.right() + TOL
            && inner.top() <= self.top() + TOL
    }
}

/// A rectangle with a profit and a `d`-dimensional weight vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawItem", into = "RawItem")]
pub struct Item {
    id: String,
    width: f64,
    height: f64,
    profit: f64,
    weights: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct RawItem {
    id: String,
    w: f64,
    h: f64,
    p: f64,
    #[serde(default)]
    v: Vec<f64>,
}

impl TryFrom<RawItem> for Item {
    type Error = Error;

    fn try_from(raw: RawItem) -> Result<Self> {
        Item::new(raw.id, raw.w, raw.h, raw.p, raw.v)
    }
}

impl From<Item> for RawItem {
    fn from(item: Item) -> Self {
        RawItem {
            id: item.id,
            w: item.width,
            h: item.height,
            p: item.profit,
            v: item.weights,
        }
    }
}

impl Item {
    pub fn new(
        id: impl Into<String>,
        width: f64,
        height: f64,
        profit: f64,
        weights: Vec<f64>,
    ) -> Result<Self> {
        let id = id.into();
        if !(width > 0.0 && width <= 1.0) {
            return Err(Error::invalid(format!("item `{id}`: width {width} not in (0,1]")));
        }
        if !(height > 0.0 && height <= 1.0) {
            return Err(Error::invalid(format!("item `{id}`: height {height} not in (0,1]")));
        }
        if !(profit >= 0.0 && profit.is_finite()) {
            return Err(Error::invalid(format!("item `{id}`: profit {profit} is negative or not finite")));
        }
        if let Some(v) = weights.iter().find(|v| !(**v >= 0.0 && **v <= 1.0)) {
            return Err(Error::invalid(format!("item `{id}`: weight {v} not in [0,1]")));
        }
        Ok(Item { id, width, height, profit, weights })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn height(&self) -> f64 {
        self.height
    }

    pub fn profit(&self) -> f64 {
        self.profit
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn area(&self) -> f64 {
        self.width * self.height
    }

    /// Width and height after an optional 90° rotation.
    pub fn dims(&self, rotated: bool) -> (f64, f64) {
        if rotated {
            (self.height, self.width)
        } else {
            (self.width, self.height)
        }
    }
}

/// A (2,d) knapsack instance. The knapsack itself is the unit square.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawInstance", into = "RawInstance")]
pub struct KnapsackInstance {
    d: usize,
    rotations: bool,
    items: Vec<Item>,
}

#[derive(Serialize, Deserialize)]
struct RawInstance {
    d: usize,
    rotations: bool,
    items: Vec<Item>,
}

impl TryFrom<RawInstance> for KnapsackInstance {
    type Error = Error;

    fn try_from(raw: RawInstance) -> Result<Self> {
        KnapsackInstance::new(raw.d, raw.rotations, raw.items)
    }
}

impl From<KnapsackInstance> for RawInstance {
    fn from(inst: KnapsackInstance) -> Self {
        RawInstance { d: inst.d, rotations: inst.rotations, items: inst.items }
    }
}

impl KnapsackInstance {
    pub fn new(d: usize, rotations: bool, items: Vec<Item>) -> Result<Self> {
        let mut seen = HashMap::with_capacity(items.len());
        for (idx, item) in items.iter().enumerate() {
            if item.weights.len() != d {
                return Err(Error::invalid(format!(
                    "item `{}` has {} weights, instance dimension is {d}",
                    item.id,
                    item.weights.len()
                )));
            }
            if seen.insert(item.id.as_str(), idx).is_some() {
                return Err(Error::invalid(format!("duplicate item id `{}`", item.id)));
            }
        }
        Ok(KnapsackInstance { d, rotations, items })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn rotations_allowed(&self) -> bool {
        self.rotations
    }

    pub fn items(&self) -> &[Item] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.items.iter().position(|it| it.id == id)
    }

    /// Same items with a different rotation flag.
    pub fn with_rotations(&self, rotations: bool) -> Self {
        KnapsackInstance { rotations, ..self.clone() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Placement {
    pub id: String,
    pub x: f64,
    pub y: f64,
    #[serde(rename = "rot", default)]
    pub rotated: bool,
}

impl Placement {
    pub fn new(id: impl Into<String>, x: f64, y: f64, rotated: bool) -> Self {
        Placement { id: id.into(), x, y, rotated }
    }

    pub fn rect(&self, item: &Item) -> Rect {
        let (w, h) = item.dims(self.rotated);
        Rect::new(self.x, self.y, w, h)
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Packing {
    pub placements: Vec<Placement>,
    #[serde(rename = "profit")]
    pub packed_profit: f64,
}

impl Packing {
    pub fn empty() -> Self {
        Packing::default()
    }

    /// Builds a packing and sets `packed_profit` from the instance.
    pub fn from_placements(placements: Vec<Placement>, instance: &KnapsackInstance) -> Self {
        let packed_profit = placements
            .iter()
            .filter_map(|p| instance.index_of(&p.id))
            .map(|i| instance.items[i].profit)
            .sum();
        Packing { placements, packed_profit }
    }

    pub fn len(&self) -> usize {
        self.placements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.placements.is_empty()
    }

    /// Shifts every placement by `(dx, dy)`.
    pub fn translate(&mut self, dx: f64, dy: f64) {
        for p in &mut self.placements {
            p.x += dx;
            p.y += dy;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ContainerKind {
    /// Holds at most one item.
    Large,
    /// Items stacked on top of each other.
    Wide,
    /// Items side by side.
    Tall,
    /// Only ε′-small items, packed by NFDH up to an area budget.
    Area,
}

impl ContainerKind {
    pub const ALL: [ContainerKind; 4] =
        [ContainerKind::Large, ContainerKind::Wide, ContainerKind::Tall, ContainerKind::Area];
}

impl fmt::Display for ContainerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ContainerKind::Large => "large",
            ContainerKind::Wide => "wide",
            ContainerKind::Tall => "tall",
            ContainerKind::Area => "area",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Container {
    pub kind: ContainerKind,
    pub x: f64,
    pub y: f64,
    pub width: f64,
    pub height: f64,
}

impl Container {
    pub fn new(kind: ContainerKind, x: f64, y: f64, width: f64, height: f64) -> Self {
        Container { kind, x, y, width, height }
    }

    pub fn from_rect(kind: ContainerKind, r: Rect) -> Self {
        Container::new(kind, r.x, r.y, r.w, r.h)
    }

    pub fn rect(&self) -> Rect {
        Rect::new(self.x, self.y, self.width, self.height)
    }

    pub fn area(&self) -> f64 {
        self.width * self.height
    }
}

/// One broken invariant found by a validator.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    OutOfBounds { id: String, overshoot: f64 },
    Overlap { first: String, second: String, overlap_area: f64 },
    WeightExceeded { dimension: usize, total: f64, overshoot: f64 },
    RotationNotAllowed { id: String },
    ProfitMismatch { reported: f64, actual: f64 },
    ContainerOutOfBounds { index: usize, overshoot: f64 },
    ContainerOverlap { first: usize, second: usize, overlap_area: f64 },
    NonPositiveContainer { index: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::OutOfBounds { id, overshoot } => {
                write!(f, "item `{id}` leaves the knapsack by {overshoot:.3e}")
            }
            Violation::Overlap { first, second, overlap_area } => {
                write!(f, "items `{first}` and `{second}` overlap (area {overlap_area:.3e})")
            }
            Violation::WeightExceeded { dimension, total, overshoot } => write!(
                f,
                "weight dimension {dimension} totals {total} (overshoot {overshoot:.3e})"
            ),
            Violation::RotationNotAllowed { id } => {
                write!(f, "item `{id}` is rotated but rotations are disabled")
            }
            Violation::ProfitMismatch { reported, actual } => {
                write!(f, "reported profit {reported} but placed items sum to {actual}")
            }
            Violation::ContainerOutOfBounds { index, overshoot } => {
                write!(f, "container {index} leaves the knapsack by {overshoot:.3e}")
            }
            Violation::ContainerOverlap { first, second, overlap_area } => {
                write!(f, "containers {first} and {second} overlap (area {overlap_area:.3e})")
            }
            Violation::NonPositiveContainer { index } => {
                write!(f, "container {index} has a non-positive side")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct ValidityReport {
    pub violations: Vec<Violation>,
}

impl ValidityReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks geometric and vector feasibility of `packing` for `instance`.
///
/// Unknown or repeated item ids are structural errors, not violations. The
/// verdict and the order of the reported violations do not depend on the order
/// of the placements.
pub fn validate_packing(packing: &Packing, instance: &KnapsackInstance) -> Result<ValidityReport> {
    let index: HashMap<&str, usize> =
        instance.items.iter().enumerate().map(|(i, it)| (it.id.as_str(), i)).collect();

    let mut placed: Vec<(usize, &Placement)> = Vec::with_capacity(packing.placements.len());
    let mut used = vec![false; instance.len()];
    for p in &packing.placements {
        let &i = index.get(p.id.as_str()).ok_or_else(|| Error::UnknownItem(p.id.clone()))?;
        if std::mem::replace(&mut used[i], true) {
            return Err(Error::DuplicatePlacement(p.id.clone()));
        }
        placed.push((i, p));
    }
    // Canonical order makes the report independent of the input order.
    placed.sort_by_key(|(i, _)| *i);

    let mut violations = Vec::new();
    let rects: Vec<Rect> = placed.iter().map(|(i, p)| p.rect(&instance.items[*i])).collect();

    for ((i, p), r) in placed.iter().zip(&rects) {
        if p.rotated && !instance.rotations {
            violations.push(Violation::RotationNotAllowed { id: instance.items[*i].id.clone() });
        }
        let overshoot = r.unit_square_overshoot();
        if overshoot > TOL || !(r.x.is_finite() && r.y.is_finite()) {
            violations.push(Violation::OutOfBounds { id: instance.items[*i].id.clone(), overshoot });
        }
    }

    for a in 0..rects.len() {
        for b in a + 1..rects.len() {
            if rects[a].overlaps(&rects[b]) {
                let (ox, oy) = rects[a].overlap_extent(&rects[b]);
                violations.push(Violation::Overlap {
                    first: instance.items[placed[a].0].id.clone(),
                    second: instance.items[placed[b].0].id.clone(),
                    overlap_area: ox * oy,
                });
            }
        }
    }

    for q in 0..instance.d {
        let total: f64 = placed.iter().map(|(i, _)| instance.items[*i].weights[q]).sum();
        if total > 1.0 + TOL {
            violations.push(Violation::WeightExceeded { dimension: q, total, overshoot: total - 1.0 });
        }
    }

    let actual: f64 = placed.iter().map(|(i, _)| instance.items[*i].profit).sum();
    if (actual - packing.packed_profit).abs() > TOL * (1.0 + actual.abs()) {
        violations.push(Violation::ProfitMismatch { reported: packing.packed_profit, actual });
    }

    Ok(ValidityReport { violations })
}

/// Checks that containers lie inside the unit square and are pairwise
/// interior-disjoint.
pub fn container_config_valid(containers: &[Container]) -> ValidityReport {
    let mut violations = Vec::new();
    for (i, c) in containers.iter().enumerate() {
        if !(c.width > 0.0 && c.height > 0.0) {
            violations.push(Violation::NonPositiveContainer { index: i });
        }
        let overshoot = c.rect().unit_square_overshoot();
        if overshoot > TOL {
            violations.push(Violation::ContainerOutOfBounds { index: i, overshoot });
        }
    }
    for a in 0..containers.len() {
        for b in a + 1..containers.len() {
            let (ra, rb) = (containers[a].rect(), containers[b].rect());
            if ra.overlaps(&rb) {
                let (ox, oy) = ra.overlap_extent(&rb);
                violations.push(Violation::ContainerOverlap { first: a, second: b, overlap_area: ox * oy });
            }
        }
    }
    ValidityReport { violations }
}

/// Every tunable constant of the end-to-end solver.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverParams {
    /// Target accuracy of the overall (1/2 − ε) guarantee.
    pub eps: f64,
    /// Profit lost to the container structure.
    pub eps_struct: f64,
    /// Accuracy of the container packing PTAS.
    pub eps_cont: f64,
    /// Area-container slack ε′.
    pub eps_prime: f64,
    /// Maximum number of containers per configuration.
    pub c_max: usize,
    /// Maximum number of item sides summed into a candidate container side.
    pub sum_depth: usize,
    /// Cap on the number of configurations evaluated (`None`: all of them).
    pub config_budget: Option<usize>,
    /// Cap on the size of the enumerated big-item set in the Vector-Max-GAP
    /// PTAS (`None`: the theorem bound (d+k)/ε²).
    pub x_max: Option<usize>,
}

impl SolverParams {
    /// Defaults derived from a single ε: ε_struct = ε/2, ε_cont = ε, ε′ = ε_cont.
    pub fn with_eps(eps: f64) -> Self {
        SolverParams {
            eps,
            eps_struct: eps / 2.0,
            eps_cont: eps,
            eps_prime: eps,
            c_max: 2,
            sum_depth: 2,
            config_budget: None,
            x_max: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("eps", self.eps),
            ("eps_struct", self.eps_struct),
            ("eps_cont", self.eps_cont),
            ("eps_prime", self.eps_prime),
        ] {
            if !(v > 0.0 && v < 0.5) {
                return Err(Error::invalid(format!("{name} = {v} must lie in (0, 1/2)")));
            }
        }
        if self.c_max == 0 {
            return Err(Error::invalid("c_max must be at least 1"));
        }
        if self.sum_depth == 0 {
            return Err(Error::invalid("sum_depth must be at least 1"));
        }
        Ok(())
    }
}

impl Default for SolverParams {
    fn default() -> Self {
        SolverParams::with_eps(0.1)
    }
}
