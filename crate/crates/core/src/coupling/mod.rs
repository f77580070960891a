//! Finite truncation of the orbit-equivalence coupling between `Δ` and `ℤ`.
//!
//! A point is an address `(i_0, …, i_N)` with `i_n < |Σ_n|`. It decodes to
//! `σ_N ··· σ_0 ∈ T_N` and to the integer `Σ i_n |T_{n−1}| ∈ T'_N`; points
//! are identified with that integer throughout. `Δ` acts by right
//! multiplication, which is the side on which the tiles are Følner.

mod series;
mod sweep;

#[cfg(test)]
mod tests;

use rayon::prelude::*;

use crate::delta::{DeltaElement, DiagonalProduct, ExactMetric, Generator};
use crate::error::{Error, Result};
use crate::tiling::{ShiftSet, SlotSpace, Tiling, ZTiling};

pub use series::{phi_eps, phi_eps_ln, series_report, SeriesReport, SeriesRow};
pub use sweep::{simulate, GeneratorStats, IntegrabilityReport, SweepConfig, C_GRID};

/// Result of a partial action on the truncation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome<T> {
    Inside(T),
    /// The image leaves `T_N`; at full scale it is settled at a higher level.
    OutOfTruncation,
}

impl<T> Outcome<T> {
    pub fn inside(self) -> Option<T> {
        match self {
            Outcome::Inside(x) => Some(x),
            Outcome::OutOfTruncation => None,
        }
    }

    pub fn is_out(&self) -> bool {
        matches!(self, Outcome::OutOfTruncation)
    }
}

/// `d_Δ` between a point and its `ℤ`-translate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DeltaDistance {
    pub upper: u128,
    /// Exact word length, when the search finished under its caps.
    pub exact: Option<u32>,
}

/// Lookup tables between point integers and ranks in `T_N = F_{κ^N}`.
#[derive(Clone, Debug)]
struct Tables {
    int_to_rank: Vec<u64>,
    rank_to_int: Vec<u64>,
}

pub struct Coupling {
    tiling: Tiling,
    big_n: u32,
    shifts: Vec<ShiftSet>,
    tile: SlotSpace,
    z: ZTiling,
    size: u64,
    tables: Option<Tables>,
}

impl Coupling {
    /// The truncation at level `N`; points are tabulated when `|T_N|` is
    /// within the tiling's cap.
    pub fn new(tiling: Tiling, big_n: u32) -> Result<Self> {
        let shifts = tiling.shifts(big_n + 1)?;
        let z = ZTiling::new(shifts.iter().map(ShiftSet::len).collect())?;
        let tile = tiling.tile(big_n)?;
        let size = z.tile_len(big_n as usize);
        if u64::try_from(tile.cardinality()).ok() != Some(size) {
            return Err(Error::Invariant(format!(
                "∏|Σ_n| = {size} but |T_{big_n}| = {}",
                tile.cardinality()
            )));
        }
        let mut c = Self { tiling, big_n, shifts, tile, z, size, tables: None };
        if size <= c.tiling.cap() {
            c.tables = Some(c.tabulate()?);
        }
        Ok(c)
    }

    /// Decodes every point and checks that the ranks form a permutation.
    fn tabulate(&self) -> Result<Tables> {
        let int_to_rank: Vec<u64> = (0..self.size)
            .into_par_iter()
            .map(|x| {
                let d = self.element_slow(x)?;
                self.tile.rank(self.dp(), &d).ok_or_else(|| Error::Invariant(format!("point {x} decodes outside T_N")))
            })
            .collect::<Result<_>>()?;
        let mut rank_to_int = vec![u64::MAX; self.size as usize];
        for (x, &r) in int_to_rank.iter().enumerate() {
            let slot = &mut rank_to_int[r as usize];
            if *slot != u64::MAX {
                return Err(Error::Invariant(format!("points {} and {x} decode to the same element", *slot)));
            }
            *slot = x as u64;
        }
        Ok(Tables { int_to_rank, rank_to_int })
    }

    pub fn dp(&self) -> &DiagonalProduct {
        self.tiling.dp()
    }

    pub fn tiling(&self) -> &Tiling {
        &self.tiling
    }

    pub fn level(&self) -> u32 {
        self.big_n
    }

    /// `|T_N|`, the number of points.
    pub fn len(&self) -> u64 {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    pub fn is_tabulated(&self) -> bool {
        self.tables.is_some()
    }

    pub fn z_tiling(&self) -> &ZTiling {
        &self.z
    }

    pub fn shifts(&self) -> &[ShiftSet] {
        &self.shifts
    }

    pub fn addr_to_int(&self, addr: &[u64]) -> Result<u64> {
        self.check_len(addr)?;
        self.z.addr_to_int(addr)
    }

    pub fn int_to_addr(&self, x: u64) -> Result<Vec<u64>> {
        self.z.int_to_addr(self.big_n as usize + 1, x)
    }

    fn check_len(&self, addr: &[u64]) -> Result<()> {
        if addr.len() != self.big_n as usize + 1 {
            return Err(Error::Invariant(format!("address has {} levels, expected {}", addr.len(), self.big_n + 1)));
        }
        Ok(())
    }

    pub fn addr_to_delta(&self, addr: &[u64]) -> Result<DeltaElement> {
        self.check_len(addr)?;
        self.tiling.compose_with(&self.shifts, addr)
    }

    pub fn delta_to_addr(&self, x: &DeltaElement) -> Result<Vec<u64>> {
        self.tiling.decompose(self.big_n, x)
    }

    fn element_slow(&self, x: u64) -> Result<DeltaElement> {
        self.addr_to_delta(&self.int_to_addr(x)?)
    }

    /// The element of `T_N` at point `x`.
    pub fn element(&self, x: u64) -> Result<DeltaElement> {
        match &self.tables {
            Some(t) => {
                let r = *t.int_to_rank.get(x as usize).ok_or(Error::AddressOutOfRange {
                    level: self.big_n as usize,
                    index: x,
                    size: self.size,
                })?;
                self.tile.unrank(self.dp(), r)
            }
            None => self.element_slow(x),
        }
    }

    /// The point of `d ∈ T_N`, or `None` outside the tile.
    pub fn point_of(&self, d: &DeltaElement) -> Result<Option<u64>> {
        let Some(r) = self.tile.rank(self.dp(), d) else {
            return Ok(None);
        };
        match &self.tables {
            Some(t) => Ok(Some(t.rank_to_int[r as usize])),
            None => self.addr_to_int(&self.delta_to_addr(d)?).map(Some),
        }
    }

    /// `x · s`, when it stays in `T_N`.
    pub fn act_delta(&self, s: Generator, x: u64) -> Result<Outcome<u64>> {
        let d = self.element(x)?;
        let y = self.dp().multiply(&d, &self.dp().generator(s))?;
        Ok(match self.point_of(&y)? {
            Some(p) => Outcome::Inside(p),
            None => Outcome::OutOfTruncation,
        })
    }

    /// [`act_delta`](Self::act_delta) on addresses.
    pub fn act_delta_addr(&self, s: Generator, addr: &[u64]) -> Result<Outcome<Vec<u64>>> {
        match self.act_delta(s, self.addr_to_int(addr)?)? {
            Outcome::Inside(y) => Ok(Outcome::Inside(self.int_to_addr(y)?)),
            Outcome::OutOfTruncation => Ok(Outcome::OutOfTruncation),
        }
    }

    /// `x + d` on `[0, |T_N| − 1]`.
    pub fn act_z(&self, d: i64, x: u64) -> Outcome<u64> {
        match x.checked_add_signed(d) {
            Some(y) if y < self.size => Outcome::Inside(y),
            _ => Outcome::OutOfTruncation,
        }
    }

    /// `|x·s − x|` in `ℤ`.
    pub fn schreier_distance_z(&self, x: u64, s: Generator) -> Result<Outcome<u64>> {
        Ok(match self.act_delta(s, x)? {
            Outcome::Inside(y) => Outcome::Inside(y.abs_diff(x)),
            Outcome::OutOfTruncation => Outcome::OutOfTruncation,
        })
    }

    /// `|δ_x^{-1} δ_{x+d}|_Δ`: always the upper bound, and the exact length
    /// when `metric` is given and finishes within `node_cap`.
    pub fn schreier_distance_delta(
        &self,
        x: u64,
        d: i64,
        metric: Option<(&ExactMetric<'_>, usize)>,
    ) -> Result<Outcome<DeltaDistance>> {
        let Outcome::Inside(y) = self.act_z(d, x) else {
            return Ok(Outcome::OutOfTruncation);
        };
        let z = self.displacement(x, y)?;
        let upper = self.dp().metric_upper_bound(&z)?;
        let exact = metric.and_then(|(m, cap)| m.word_length_exact(&z, u32::try_from(upper).unwrap_or(u32::MAX), cap));
        Ok(Outcome::Inside(DeltaDistance { upper, exact }))
    }

    /// `δ_x^{-1} δ_y`.
    pub fn displacement(&self, x: u64, y: u64) -> Result<DeltaElement> {
        let dp = self.dp();
        dp.multiply(&dp.inverse(&self.element(x)?)?, &self.element(y)?)
    }
}
