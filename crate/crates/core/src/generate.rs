//! Seeded random instance generator.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{Item, KnapsackInstance};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Profile {
    /// Sides, profits and weights drawn uniformly.
    Uniform,
    /// Every item is more than twice as wide as it is tall.
    SkewedWide,
    /// Every item is more than twice as tall as it is wide.
    SkewedTall,
    /// Weights per dimension sum to about 2, so the vector constraint binds.
    HeavyVector,
}

impl Profile {
    pub const ALL: [Profile; 4] = [Profile::Uniform, Profile::SkewedWide, Profile::SkewedTall, Profile::HeavyVector];
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Profile::Uniform => "uniform",
            Profile::SkewedWide => "skewed-wide",
            Profile::SkewedTall => "skewed-tall",
            Profile::HeavyVector => "heavy-vector",
        })
    }
}

impl FromStr for Profile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Profile::ALL
            .into_iter()
            .find(|p| p.to_string() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown profile `{s}` (expected uniform, skewed-wide, skewed-tall or heavy-vector)")))
    }
}

// Four decimals keep the JSON readable; sides never round to zero.
fn round4(v: f64) -> f64 {
    (v * 1e4).round() / 1e4
}

pub fn generate_instance(seed: u64, n: usize, d: usize, profile: Profile, rotations: bool) -> Result<KnapsackInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut items = Vec::with_capacity(n);
    let heavy: Vec<Vec<f64>> = if profile == Profile::HeavyVector {
        // Per dimension: shares of a total of 2, each capped at 1.
        (0..d)
            .map(|_| {
                let raw: Vec<f64> = (0..n).map(|_| rng.gen_range(0.5..1.5)).collect();
                let sum: f64 = raw.iter().sum();
                raw.iter().map(|x| round4((2.0 * x / sum).min(1.0))).collect()
            })
            .collect()
    } else {
        Vec::new()
    };
    for i in 0..n {
        let (w, h) = match profile {
            Profile::Uniform | Profile::HeavyVector => (rng.gen_range(0.05..0.6), rng.gen_range(0.05..0.6)),
            Profile::SkewedWide | Profile::SkewedTall => {
                let long = rng.gen_range(0.3..0.95);
                let short = rng.gen_range(0.02..long / 2.2);
                if profile == Profile::SkewedWide {
                    (long, short)
                } else {
                    (short, long)
                }
            }
        };
        let p = rng.gen_range(0.1..1.0);
        let weights: Vec<f64> = if profile == Profile::HeavyVector {
            (0..d).map(|q| heavy[q][i]).collect()
        } else {
            (0..d).map(|_| round4(rng.gen_range(0.0..0.3))).collect()
        };
        items.push(Item::new(format!("i{i}"), round4(w), round4(h), round4(p), weights)?);
    }
    KnapsackInstance::new(d, rotations, items)
}
