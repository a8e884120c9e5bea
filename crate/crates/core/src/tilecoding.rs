//! Hashed tile coding in the style of Sutton's `tiles3`.
//!
//! For `n` tilings each scaled float is quantised to `floor(x · n)`. Tiling `k`
//! shifts dimension `i` by `k · (2i + 1)` quantised units (offsets 1, 3, 5, …)
//! before integer division by `n`, producing a coordinate tuple
//! `(k, c_0, …, c_d, ints…)`. Tuples are mapped to dense indices through an
//! [`IndexHashTable`].

use std::collections::HashMap;

use crate::{Error, Result};

/// Assigns dense indices to coordinate tuples on first sight.
///
/// Once `capacity` tuples are stored, unseen tuples fall back to
/// `fnv1a(tuple) mod capacity` and `overflow_count` is incremented; those
/// indices may collide with assigned ones.
#[derive(Debug, Clone)]
pub struct IndexHashTable {
    capacity: usize,
    map: HashMap<Box<[i64]>, usize>,
    overflow_count: u64,
}

impl IndexHashTable {
    pub fn new(capacity: usize) -> Result<Self> {
        if capacity == 0 || !capacity.is_power_of_two() {
            return Err(Error::InvalidParameter(format!(
                "index table capacity must be a power of two, got {capacity}"
            )));
        }
        Ok(Self {
            capacity,
            map: HashMap::new(),
            overflow_count: 0,
        })
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn overflow_count(&self) -> u64 {
        self.overflow_count
    }

    pub fn index(&mut self, coords: &[i64]) -> usize {
        if let Some(&i) = self.map.get(coords) {
            return i;
        }
        let next = self.map.len();
        if next < self.capacity {
            self.map.insert(coords.into(), next);
            next
        } else {
            self.overflow_count += 1;
            (fnv1a(coords) % self.capacity as u64) as usize
        }
    }

    /// Lookup without insertion.
    pub fn get(&self, coords: &[i64]) -> Option<usize> {
        self.map.get(coords).copied()
    }
}

fn fnv1a(coords: &[i64]) -> u64 {
    const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
    const PRIME: u64 = 0x0000_0100_0000_01b3;
    coords
        .iter()
        .flat_map(|c| c.to_le_bytes())
        .fold(OFFSET, |h, b| (h ^ u64::from(b)).wrapping_mul(PRIME))
}

/// Coordinate tuples, one per tiling, for already-scaled inputs.
pub fn tile_coordinates(num_tilings: usize, scaled: &[f64], ints: &[i64]) -> Vec<Vec<i64>> {
    let mut out = Vec::with_capacity(num_tilings);
    let mut buf = Vec::new();
    for tiling in 0..num_tilings {
        fill_coordinates(&mut buf, num_tilings, tiling, scaled, ints);
        out.push(buf.clone());
    }
    out
}

fn fill_coordinates(buf: &mut Vec<i64>, num_tilings: usize, tiling: usize, scaled: &[f64], ints: &[i64]) {
    let n = num_tilings as i64;
    let k = tiling as i64;
    buf.clear();
    buf.push(k);
    let mut offset = k;
    for &x in scaled {
        let q = (x * num_tilings as f64).floor() as i64;
        buf.push((q + offset).div_euclid(n));
        offset += 2 * k;
    }
    buf.extend_from_slice(ints);
}

/// Active feature indices: exactly `num_tilings` of them, one per tiling.
pub fn tiles(iht: &mut IndexHashTable, num_tilings: usize, scaled: &[f64], ints: &[i64]) -> Vec<usize> {
    let mut out = Vec::with_capacity(num_tilings);
    tiles_into(&mut out, iht, num_tilings, scaled, ints);
    out
}

/// Like [`tiles`] but writes into `out`, reusing its allocation.
pub fn tiles_into(out: &mut Vec<usize>, iht: &mut IndexHashTable, num_tilings: usize, scaled: &[f64], ints: &[i64]) {
    out.clear();
    let mut buf = Vec::with_capacity(scaled.len() + ints.len() + 1);
    for tiling in 0..num_tilings {
        fill_coordinates(&mut buf, num_tilings, tiling, scaled, ints);
        out.push(iht.index(&buf));
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TileCoderConfig {
    pub num_tilings: usize,
    /// Multiplier applied to each (clipped) raw dimension.
    pub scales: Vec<f64>,
    /// Optional per-dimension clip range applied before scaling.
    pub clip: Vec<Option<(f64, f64)>>,
    pub capacity: usize,
}

impl TileCoderConfig {
    pub fn new(num_tilings: usize, scales: Vec<f64>, capacity: usize) -> Self {
        let clip = vec![None; scales.len()];
        Self {
            num_tilings,
            scales,
            clip,
            capacity,
        }
    }

    pub fn with_clip(mut self, clip: Vec<Option<(f64, f64)>>) -> Self {
        self.clip = clip;
        self
    }

    /// Position range 1.7 and velocity range 0.14, each split 8 ways.
    pub fn mountain_car() -> Self {
        Self::new(8, vec![8.0 / 1.7, 8.0 / 0.14], 4096)
    }

    /// Cart position ±2.4, velocity clipped to ±3, angle ±12°, angular velocity clipped to ±3.5.
    pub fn cart_pole() -> Self {
        let angle_range = 2.0 * 12.0f64.to_radians();
        Self::new(8, vec![8.0 / 4.8, 8.0 / 6.0, 8.0 / angle_range, 8.0 / 7.0], 8192).with_clip(vec![
            None,
            Some((-3.0, 3.0)),
            None,
            Some((-3.5, 3.5)),
        ])
    }

    fn validate(&self) -> Result<()> {
        if self.num_tilings == 0 {
            return Err(Error::InvalidParameter("num_tilings must be at least 1".into()));
        }
        if self.scales.iter().any(|s| !(s.is_finite() && *s > 0.0)) {
            return Err(Error::InvalidParameter(format!(
                "scales must be finite and positive: {:?}",
                self.scales
            )));
        }
        if self.clip.len() != self.scales.len() {
            return Err(Error::LengthMismatch {
                left: self.clip.len(),
                right: self.scales.len(),
            });
        }
        Ok(())
    }
}

/// Tile coder bound to one index table.
#[derive(Debug, Clone)]
pub struct TileCoder {
    config: TileCoderConfig,
    iht: IndexHashTable,
    scaled: Vec<f64>,
}

impl TileCoder {
    pub fn new(config: TileCoderConfig) -> Result<Self> {
        config.validate()?;
        let iht = IndexHashTable::new(config.capacity)?;
        let scaled = Vec::with_capacity(config.scales.len());
        Ok(Self { config, iht, scaled })
    }

    pub fn config(&self) -> &TileCoderConfig {
        &self.config
    }

    pub fn table(&self) -> &IndexHashTable {
        &self.iht
    }

    pub fn num_tilings(&self) -> usize {
        self.config.num_tilings
    }

    pub fn capacity(&self) -> usize {
        self.config.capacity
    }

    /// Clip and scale a raw observation.
    pub fn scale(&self, raw: &[f64]) -> Vec<f64> {
        let mut out = Vec::with_capacity(raw.len());
        scale_into(&mut out, &self.config, raw);
        out
    }

    /// Active indices for `raw` observation and action `action`.
    pub fn features_into(&mut self, out: &mut Vec<usize>, raw: &[f64], action: usize) {
        let mut scaled = std::mem::take(&mut self.scaled);
        scale_into(&mut scaled, &self.config, raw);
        tiles_into(out, &mut self.iht, self.config.num_tilings, &scaled, &[action as i64]);
        self.scaled = scaled;
    }

    pub fn features(&mut self, raw: &[f64], action: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.config.num_tilings);
        self.features_into(&mut out, raw, action);
        out
    }
}

fn scale_into(out: &mut Vec<f64>, config: &TileCoderConfig, raw: &[f64]) {
    out.clear();
    out.extend(
        raw.iter()
            .zip(&config.scales)
            .zip(&config.clip)
            .map(|((&x, &s), clip)| {
                let x = match clip {
                    Some((lo, hi)) => x.clamp(*lo, *hi),
                    None => x,
                };
                x * s
            }),
    );
}
