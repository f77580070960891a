use std::fmt;

use crate::error::{Error, Result};
use crate::groups::ElemId;

/// A finitely supported map `ℤ → G`, stored as a position-sorted list of
/// non-identity values.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LampConfig {
    entries: Vec<(i64, ElemId)>,
}

impl LampConfig {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a configuration from arbitrary pairs. Identity values are
    /// dropped; a repeated position is an error.
    pub fn from_pairs(mut pairs: Vec<(i64, ElemId)>) -> Result<Self> {
        pairs.retain(|&(_, v)| v != 0);
        pairs.sort_unstable_by_key(|&(p, _)| p);
        if pairs.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::Parse("repeated position in lamp configuration".into()));
        }
        Ok(Self { entries: pairs })
    }

    /// Assumes `entries` is sorted by position with no identity values.
    pub(crate) fn from_sorted(entries: Vec<(i64, ElemId)>) -> Self {
        debug_assert!(entries.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(entries.iter().all(|&(_, v)| v != 0));
        Self { entries }
    }

    pub fn single(pos: i64, value: ElemId) -> Self {
        if value == 0 {
            Self::new()
        } else {
            Self { entries: vec![(pos, value)] }
        }
    }

    #[inline]
    pub fn get(&self, pos: i64) -> ElemId {
        match self.entries.binary_search_by_key(&pos, |&(p, _)| p) {
            Ok(i) => self.entries[i].1,
            Err(_) => 0,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, ElemId)> + '_ {
        self.entries.iter().copied()
    }

    pub fn positions(&self) -> impl Iterator<Item = i64> + '_ {
        self.entries.iter().map(|&(p, _)| p)
    }

    /// Smallest and largest support positions.
    pub fn bounds(&self) -> Option<(i64, i64)> {
        Some((self.entries.first()?.0, self.entries.last()?.0))
    }

    /// Whether the support lies in `[lo, hi]`.
    pub fn supported_in(&self, lo: i64, hi: i64) -> bool {
        self.bounds().map_or(true, |(a, b)| lo <= a && b <= hi)
    }

    /// Restriction to positions in `[lo, hi]`.
    pub fn restrict(&self, lo: i64, hi: i64) -> Self {
        Self {
            entries: self.entries.iter().copied().filter(|&(p, _)| lo <= p && p <= hi).collect(),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(Self::new());
        }
        let pairs = text
            .split(',')
            .map(|item| {
                let (p, v) = item
                    .trim()
                    .split_once(':')
                    .ok_or_else(|| Error::Parse(format!("expected pos:val, got {item:?}")))?;
                let p = p.trim().parse::<i64>().map_err(|e| Error::Parse(format!("position {p:?}: {e}")))?;
                let v = v.trim().parse::<ElemId>().map_err(|e| Error::Parse(format!("value {v:?}: {e}")))?;
                Ok((p, v))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_pairs(pairs)
    }
}

impl fmt::Display for LampConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (p, v)) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}:{v}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_values_are_not_stored() {
        let c = LampConfig::from_pairs(vec![(3, 0), (1, 2), (-4, 1)]).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c.get(3), 0);
        assert_eq!(c.bounds(), Some((-4, 1)));
    }

    #[test]
    fn display_round_trips() {
        let c = LampConfig::from_pairs(vec![(5, 3), (-2, 1)]).unwrap();
        assert_eq!(c.to_string(), "-2:1,5:3");
        assert_eq!(LampConfig::parse(&c.to_string()).unwrap(), c);
        assert_eq!(LampConfig::parse("").unwrap(), LampConfig::new());
    }

    #[test]
    fn duplicate_positions_rejected() {
        assert!(LampConfig::parse("1:1,1:2").is_err());
    }
}
