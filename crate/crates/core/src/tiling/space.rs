use num_bigint::BigUint;

use crate::delta::{DeltaElement, DiagonalProduct, LampConfig};
use crate::error::{Error, Result};

/// A set of elements of `Δ` described by independent lamp slots: a range of
/// cursor values and, per level, a union of position intervals where the
/// level-0 value (any id of `Γ_0`) or the derived value (any element of
/// `Γ'_m`) is free. Elements are ranked in mixed radix, cursor most
/// significant, then level-0 slots left to right, then level 1, and so on.
#[derive(Clone, Debug)]
pub struct SlotSpace {
    cursor_start: i64,
    cursor_count: u64,
    /// Disjoint sorted closed intervals per level `0..=M`.
    intervals: Vec<Vec<(i64, i64)>>,
    radix: Vec<u64>,
    cardinality: BigUint,
}

impl SlotSpace {
    pub fn new(dp: &DiagonalProduct, cursor_start: i64, cursor_count: u64, intervals: Vec<Vec<(i64, i64)>>) -> Result<Self> {
        if intervals.len() != dp.depth() + 1 {
            return Err(Error::Invariant(format!(
                "slot space lists {} levels, the product has {}",
                intervals.len(),
                dp.depth() + 1
            )));
        }
        let intervals: Vec<Vec<(i64, i64)>> = intervals
            .into_iter()
            .map(|mut v| {
                v.retain(|&(lo, hi)| lo <= hi);
                v.sort_unstable();
                v
            })
            .collect();
        for v in &intervals {
            if v.windows(2).any(|w| w[1].0 <= w[0].1) {
                return Err(Error::Invariant("slot intervals overlap".into()));
            }
        }
        let radix: Vec<u64> = (0..=dp.depth())
            .map(|m| {
                if m == 0 {
                    dp.base_order() as u64
                } else {
                    dp.backend(m).expect("level within depth").derived_order() as u64
                }
            })
            .collect();
        let mut cardinality = BigUint::from(cursor_count);
        for (m, v) in intervals.iter().enumerate() {
            let slots: u64 = v.iter().map(|&(lo, hi)| (hi - lo + 1) as u64).sum();
            cardinality *= BigUint::from(radix[m]).pow(slots as u32);
        }
        Ok(Self { cursor_start, cursor_count, intervals, radix, cardinality })
    }

    pub fn cardinality(&self) -> &BigUint {
        &self.cardinality
    }

    /// The cardinality as a machine integer, when it fits.
    pub fn len(&self) -> Option<u64> {
        u64::try_from(&self.cardinality).ok()
    }

    pub fn is_empty(&self) -> bool {
        self.cursor_count == 0
    }

    pub fn cursor_range(&self) -> (i64, i64) {
        (self.cursor_start, self.cursor_start + self.cursor_count as i64 - 1)
    }

    pub fn intervals(&self, level: usize) -> &[(i64, i64)] {
        &self.intervals[level]
    }

    /// Number of free slots on `level`.
    pub fn slot_count(&self, level: usize) -> u64 {
        self.intervals[level].iter().map(|&(lo, hi)| (hi - lo + 1) as u64).sum()
    }

    fn in_intervals(v: &[(i64, i64)], p: i64) -> bool {
        let i = v.partition_point(|&(_, hi)| hi < p);
        i < v.len() && v[i].0 <= p
    }

    pub fn contains(&self, x: &DeltaElement) -> bool {
        let (lo, hi) = self.cursor_range();
        if x.cursor < lo || x.cursor > hi {
            return false;
        }
        if !x.base.positions().all(|p| Self::in_intervals(&self.intervals[0], p)) {
            return false;
        }
        x.derived
            .iter()
            .enumerate()
            .all(|(i, cfg)| cfg.positions().all(|p| Self::in_intervals(&self.intervals[i + 1], p)))
    }

    /// Mixed-radix index of `x`, or `None` when `x` is not in the set.
    pub fn rank(&self, dp: &DiagonalProduct, x: &DeltaElement) -> Option<u64> {
        if !self.contains(x) {
            return None;
        }
        let mut r: u64 = (x.cursor - self.cursor_start) as u64;
        for (m, v) in self.intervals.iter().enumerate() {
            let cfg = if m == 0 { &x.base } else { &x.derived[m - 1] };
            let backend = dp.backend(m).ok()?;
            for &(lo, hi) in v {
                for p in lo..=hi {
                    let value = cfg.get(p);
                    let digit = if m == 0 { value as u64 } else { backend.derived_index(value)? as u64 };
                    r = r.checked_mul(self.radix[m])?.checked_add(digit)?;
                }
            }
        }
        Some(r)
    }

    /// The element of index `r`.
    pub fn unrank(&self, dp: &DiagonalProduct, mut r: u64) -> Result<DeltaElement> {
        let size = self.len().ok_or_else(|| Error::CapExceeded {
            what: "slot space".into(),
            size: self.cardinality.to_string(),
            cap: u64::MAX,
        })?;
        if r >= size {
            return Err(Error::AddressOutOfRange { level: 0, index: r, size });
        }
        let mut configs: Vec<Vec<(i64, u32)>> = vec![Vec::new(); self.intervals.len()];
        for (m, v) in self.intervals.iter().enumerate().rev() {
            let radix = self.radix[m];
            let backend = dp.backend(m)?;
            for &(lo, hi) in v.iter().rev() {
                for p in (lo..=hi).rev() {
                    let digit = (r % radix) as usize;
                    r /= radix;
                    let value = if m == 0 { digit as u32 } else { backend.derived_elements()[digit] };
                    if value != 0 {
                        configs[m].push((p, value));
                    }
                }
            }
        }
        let cursor = self.cursor_start + r as i64;
        let mut levels = configs.into_iter().map(|mut c| {
            c.reverse();
            LampConfig::from_pairs(c).expect("slot positions are distinct")
        });
        let base = levels.next().expect("level 0 present");
        Ok(DeltaElement { cursor, base, derived: levels.collect() })
    }

    /// All elements in rank order; fails above `cap`.
    pub fn enumerate(&self, dp: &DiagonalProduct, cap: u64) -> Result<Vec<DeltaElement>> {
        let n = self.len().filter(|&n| n <= cap).ok_or_else(|| Error::CapExceeded {
            what: "element enumeration".into(),
            size: self.cardinality.to_string(),
            cap,
        })?;
        (0..n).map(|r| self.unrank(dp, r)).collect()
    }
}
