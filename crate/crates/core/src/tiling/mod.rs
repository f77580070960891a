//! Følner sets `F_n`, the shift sets `Σ_n` and tiles `T_n = Σ_n T_{n−1}` of
//! the diagonal product, the matching tiling of `ℤ`, and the size and
//! quantification data attached to them.

mod space;
mod stats;
mod zline;


use std::sync::Arc;

use num_bigint::BigUint;
use rayon::prelude::*;

use crate::delta::{DeltaElement, DiagonalProduct, ExactMetric, Generator, LampConfig};
use crate::error::{Error, Result};

pub use space::SlotSpace;
pub use stats::{TileConstants, TileStats};
pub use zline::{ZShift, ZTiling};

/// Default bound on the number of elements materialized per tile.
pub const DEFAULT_CAP: u64 = 1_000_000;

/// `Σ_n` as its `κ` parts `Σ^j_n`, all of equal size. Index `i` of the
/// canonical order lies in part `i / |Σ^j_n|`, at the mixed-radix rank
/// `i mod |Σ^j_n|` (base digits before derived digits).
#[derive(Clone, Debug)]
pub struct ShiftSet {
    pub n: u32,
    parts: Vec<SlotSpace>,
    part_len: u64,
}

impl ShiftSet {
    pub fn parts(&self) -> &[SlotSpace] {
        &self.parts
    }

    pub fn part_len(&self) -> u64 {
        self.part_len
    }

    pub fn len(&self) -> u64 {
        self.part_len * self.parts.len() as u64
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn element(&self, dp: &DiagonalProduct, i: u64) -> Result<DeltaElement> {
        if i >= self.len() {
            return Err(Error::AddressOutOfRange { level: self.n as usize, index: i, size: self.len() });
        }
        self.parts[(i / self.part_len) as usize].unrank(dp, i % self.part_len)
    }

    pub fn index_of(&self, dp: &DiagonalProduct, x: &DeltaElement) -> Option<u64> {
        self.parts
            .iter()
            .enumerate()
            .find_map(|(j, p)| p.rank(dp, x).map(|r| j as u64 * self.part_len + r))
    }
}

/// Outcome of checking `T_n = ⊔_{σ ∈ Σ_n} σT_{n−1} = F_{κ^n}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelCheck {
    pub n: u32,
    pub tile_len: u64,
    pub shift_len: u64,
    /// Distinct products `σδ` found, all inside `F_{κ^n}`.
    pub covered: u64,
    pub formula: BigUint,
}

/// Right-multiplication boundary counts `|{δ ∈ F : δs ∉ F}|` per generator.
#[derive(Clone, Debug)]
pub struct BoundaryCount {
    pub size: u64,
    pub per_generator: Vec<(Generator, u64)>,
}

impl BoundaryCount {
    pub fn total(&self) -> u64 {
        self.per_generator.iter().map(|&(_, c)| c).sum()
    }

    pub fn count(&self, s: Generator) -> u64 {
        self.per_generator.iter().find(|&&(g, _)| g == s).map_or(0, |&(_, c)| c)
    }
}

/// The tiling shift of a diagonal product whose finite `k_m` are powers of `κ`.
#[derive(Clone, Debug)]
pub struct Tiling {
    dp: Arc<DiagonalProduct>,
    kappa: u64,
    cap: u64,
}

impl Tiling {
    pub fn new(dp: Arc<DiagonalProduct>, kappa: u64, cap: u64) -> Result<Self> {
        if kappa < 2 {
            return Err(Error::Hypothesis(format!("κ = {kappa} must be at least 2")));
        }
        for (m, level) in dp.levels().iter().enumerate() {
            let mut k = level.k;
            while k % kappa == 0 {
                k /= kappa;
            }
            if k != 1 {
                return Err(Error::Hypothesis(format!("k_{} = {} is not a power of κ = {kappa}", m + 1, level.k)));
            }
        }
        Ok(Self { dp, kappa, cap })
    }

    pub fn dp(&self) -> &DiagonalProduct {
        &self.dp
    }

    pub fn dp_arc(&self) -> &Arc<DiagonalProduct> {
        &self.dp
    }

    pub fn kappa(&self) -> u64 {
        self.kappa
    }

    pub fn cap(&self) -> u64 {
        self.cap
    }

    /// `κ^n`.
    pub fn scale(&self, n: u32) -> Result<u64> {
        self.kappa
            .checked_pow(n)
            .filter(|&q| q <= crate::delta::MAX_K)
            .ok_or_else(|| Error::Schedule(format!("κ^{n} is too large")))
    }

    /// `𝔏(n) = 𝔩(κ^n − 1)`.
    pub fn big_l(&self, n: u32) -> Result<usize> {
        let q = self.scale(n)?;
        self.require_cover(q - 1)?;
        Ok(self.dp.little_l(q - 1))
    }

    fn require_cover(&self, n: u64) -> Result<()> {
        if self.dp.covers(n) {
            Ok(())
        } else {
            Err(Error::Schedule(format!("level index of {n} lies past the stored schedule")))
        }
    }

    fn empty_levels(&self) -> Vec<Vec<(i64, i64)>> {
        vec![Vec::new(); self.dp.depth() + 1]
    }

    /// `F_n` for `n ≥ 1`: cursor and `g_0` in `[0, n−1]`, and `g'_m` in
    /// `[k_m, n−1]` for `m ≤ 𝔩(n−1)`.
    pub fn folner(&self, n: u64) -> Result<SlotSpace> {
        if n == 0 {
            return Err(Error::Invariant("F_0 is empty; sizes start at 1".into()));
        }
        self.require_cover(n - 1)?;
        let top = n as i64 - 1;
        let mut iv = self.empty_levels();
        iv[0].push((0, top));
        for m in 1..=self.dp.little_l(n - 1) {
            iv[m].push((self.dp.k(m)? as i64, top));
        }
        SlotSpace::new(&self.dp, 0, n, iv)
    }

    /// `T_n = F_{κ^n}`.
    pub fn tile(&self, n: u32) -> Result<SlotSpace> {
        self.folner(self.scale(n)?)
    }

    /// `Σ_n`, with `Σ_0 = F_1`.
    pub fn shift(&self, n: u32) -> Result<ShiftSet> {
        let dp = &*self.dp;
        if n == 0 {
            let part = self.folner(1)?;
            let part_len = self.fit(part.cardinality(), "Σ_0")?;
            return Ok(ShiftSet { n, parts: vec![part], part_len });
        }
        let q = self.scale(n - 1)? as i64;
        let big_q = self.scale(n)? as i64;
        let lp = self.big_l(n - 1)?;
        let ln = self.big_l(n)?;
        if ln > lp + 1 {
            return Err(Error::Hypothesis(format!(
                "two levels start between κ^{} and κ^{n}; k_{{m+1}} ≥ κ k_m is needed",
                n - 1
            )));
        }
        let mut parts = Vec::with_capacity(self.kappa as usize);
        for j in 0..self.kappa as i64 {
            let mut iv = self.empty_levels();
            iv[0] = vec![(0, j * q - 1), ((j + 1) * q, big_q - 1)];
            for m in 1..=lp {
                let k = dp.k(m)? as i64;
                iv[m] = vec![(k, j * q + k - 1), ((j + 1) * q, big_q - 1)];
            }
            if ln == lp + 1 {
                iv[ln] = vec![(dp.k(ln)? as i64, big_q - 1)];
            }
            parts.push(SlotSpace::new(dp, j * q, 1, iv)?);
        }
        let part_len = self.fit(parts[0].cardinality(), "Σ^j")?;
        if parts.iter().any(|p| p.cardinality() != parts[0].cardinality()) {
            return Err(Error::Invariant(format!("parts of Σ_{n} differ in size")));
        }
        Ok(ShiftSet { n, parts, part_len })
    }

    fn fit(&self, size: &BigUint, what: &str) -> Result<u64> {
        u64::try_from(size).ok().filter(|&s| s <= self.cap).ok_or_else(|| Error::CapExceeded {
            what: what.to_string(),
            size: size.to_string(),
            cap: self.cap,
        })
    }

    /// `κ^n (|A||B|)^{κ^n} ∏_{m ≤ 𝔏(n)} |Γ'_m|^{κ^n − k_m}`.
    pub fn tile_cardinality(&self, n: u32) -> Result<BigUint> {
        let q = self.scale(n)?;
        let e = u32::try_from(q).map_err(|_| Error::Schedule(format!("κ^{n} is too large for an exact count")))?;
        let mut c = BigUint::from(q) * BigUint::from(self.dp.base_order()).pow(e);
        for m in 1..=self.big_l(n)? {
            let k = self.dp.k(m)? as u32;
            c *= BigUint::from(self.dp.backend(m)?.derived_order()).pow(e - k);
        }
        Ok(c)
    }

    /// Checks that the products `σδ`, `σ ∈ Σ_n`, `δ ∈ T_{n−1}`, are pairwise
    /// distinct and fill `F_{κ^n}`, and that the count matches the formula.
    pub fn verify_level(&self, n: u32) -> Result<LevelCheck> {
        let dp = &*self.dp;
        let tile = self.tile(n)?;
        let tile_len = self.fit(tile.cardinality(), "tile")?;
        let formula = self.tile_cardinality(n)?;
        if n == 0 {
            let covered = tile.enumerate(dp, self.cap)?.len() as u64;
            let shift_len = self.shift(0)?.len();
            return self.finish_check(n, tile_len, shift_len, covered, formula);
        }
        let prev = self.tile(n - 1)?.enumerate(dp, self.cap)?;
        let shift = self.shift(n)?;
        if BigUint::from(shift.len()) * BigUint::from(prev.len()) != *tile.cardinality() {
            return Err(Error::Invariant(format!("|Σ_{n}||T_{}| ≠ |T_{n}|", n - 1)));
        }
        let ranks: Vec<Vec<u64>> = (0..shift.len())
            .into_par_iter()
            .map(|i| {
                let sigma = shift.element(dp, i)?;
                prev.iter()
                    .map(|d| {
                        let p = dp.mul_unchecked(&sigma, d);
                        tile.rank(dp, &p).ok_or_else(|| {
                            Error::Invariant(format!("σ·δ = {p} left T_{n} (σ = {sigma}, δ = {d})"))
                        })
                    })
                    .collect()
            })
            .collect::<Result<_>>()?;
        let mut bits = vec![0u64; (tile_len as usize).div_ceil(64)];
        let mut covered = 0u64;
        for (i, rs) in ranks.iter().enumerate() {
            for &r in rs {
                let (w, b) = ((r / 64) as usize, r % 64);
                if bits[w] >> b & 1 == 1 {
                    return Err(Error::Invariant(format!(
                        "translates overlap at rank {r} of T_{n} (shift index {i})"
                    )));
                }
                bits[w] |= 1 << b;
                covered += 1;
            }
        }
        self.finish_check(n, tile_len, shift.len(), covered, formula)
    }

    fn finish_check(&self, n: u32, tile_len: u64, shift_len: u64, covered: u64, formula: BigUint) -> Result<LevelCheck> {
        if covered != tile_len {
            return Err(Error::Invariant(format!("translates cover {covered} of {tile_len} elements of T_{n}")));
        }
        if formula != BigUint::from(covered) {
            return Err(Error::Invariant(format!("|T_{n}| = {covered} but the product formula gives {formula}")));
        }
        Ok(LevelCheck { n, tile_len, shift_len, covered, formula })
    }

    /// Runs [`verify_level`](Self::verify_level) for `0..=big_n`.
    pub fn build_tiles(&self, big_n: u32) -> Result<Vec<LevelCheck>> {
        (0..=big_n).map(|n| self.verify_level(n)).collect()
    }

    /// `|{δ ∈ F : δs ∉ F}|` for every generator `s`.
    pub fn right_boundary(&self, set: &SlotSpace) -> Result<BoundaryCount> {
        let dp = &*self.dp;
        let size = self.fit(set.cardinality(), "boundary set")?;
        let gens: Vec<(Generator, DeltaElement)> = dp.generators().into_iter().map(|s| (s, dp.generator(s))).collect();
        let counts = (0..size)
            .into_par_iter()
            .map(|r| -> Result<Vec<u64>> {
                let x = set.unrank(dp, r)?;
                Ok(gens.iter().map(|(_, g)| u64::from(!set.contains(&dp.mul_unchecked(&x, g)))).collect())
            })
            .try_reduce(|| vec![0; gens.len()], |a, b| Ok(a.iter().zip(&b).map(|(x, y)| x + y).collect()))?;
        Ok(BoundaryCount { size, per_generator: gens.iter().map(|&(s, _)| s).zip(counts).collect() })
    }

    /// Splits `h ∈ T_n` as `h = σ f` with `σ ∈ Σ^j_n`, `f ∈ T_{n−1}`, where
    /// `j` is the top base-`κ` digit of the cursor and `f` is `h` read on the
    /// window `[jκ^{n−1}, (j+1)κ^{n−1} − 1]`.
    pub fn split(&self, n: u32, h: &DeltaElement) -> Result<(DeltaElement, DeltaElement)> {
        let dp = &*self.dp;
        let q = self.scale(n - 1)? as i64;
        let j = h.cursor.div_euclid(q);
        let lo = j * q;
        let shifted = |cfg: &LampConfig, from: i64| -> LampConfig {
            LampConfig::from_pairs(cfg.restrict(lo + from, lo + q - 1).iter().map(|(p, v)| (p - lo, v)).collect())
                .expect("restriction keeps positions distinct")
        };
        let lp = self.big_l(n - 1)?;
        let mut f = dp.identity();
        f.cursor = h.cursor - lo;
        f.base = shifted(&h.base, 0);
        for m in 1..=lp {
            f.derived[m - 1] = shifted(&h.derived[m - 1], dp.k(m)? as i64);
        }
        let sigma = dp.multiply(h, &dp.inverse(&f)?)?;
        Ok((sigma, f))
    }

    /// The address `(i_0, …, i_N)` of `h ∈ T_N`.
    pub fn decompose(&self, big_n: u32, h: &DeltaElement) -> Result<Vec<u64>> {
        let dp = &*self.dp;
        if !self.tile(big_n)?.contains(h) {
            return Err(Error::Invariant(format!("{h} is not in T_{big_n}")));
        }
        let mut addr = vec![0u64; big_n as usize + 1];
        let mut h = h.clone();
        for n in (1..=big_n).rev() {
            let (sigma, f) = self.split(n, &h)?;
            let shift = self.shift(n)?;
            addr[n as usize] = shift
                .index_of(dp, &sigma)
                .ok_or_else(|| Error::Invariant(format!("{sigma} is not in Σ_{n}")))?;
            h = f;
        }
        addr[0] = self.shift(0)?.index_of(dp, &h).ok_or_else(|| Error::Invariant(format!("{h} is not in Σ_0")))?;
        Ok(addr)
    }

    /// `σ_N ··· σ_1 σ_0` for the address `(i_0, …, i_N)`.
    pub fn compose(&self, addr: &[u64]) -> Result<DeltaElement> {
        self.compose_with(&self.shifts(addr.len() as u32)?, addr)
    }

    /// `Σ_0, …, Σ_{levels−1}`.
    pub fn shifts(&self, levels: u32) -> Result<Vec<ShiftSet>> {
        (0..levels).map(|n| self.shift(n)).collect()
    }

    /// [`compose`](Self::compose) with precomputed shift sets.
    pub fn compose_with(&self, shifts: &[ShiftSet], addr: &[u64]) -> Result<DeltaElement> {
        let dp = &*self.dp;
        let mut x = dp.identity();
        for (n, &i) in addr.iter().enumerate().rev() {
            let sigma = shifts[n].element(dp, i)?;
            x = dp.mul_unchecked(&x, &sigma);
        }
        Ok(x)
    }

    /// `diam T_n` in the word metric, from exact lengths of every `x^{-1}y`;
    /// `None` when some length stays unknown under the caps.
    pub fn exact_tile_diameter(&self, n: u32, ball_cap: usize, node_cap: usize, radius_cap: u32) -> Result<Option<u32>> {
        let dp = &*self.dp;
        let elems = self.tile(n)?.enumerate(dp, self.cap)?;
        if (elems.len() as u64).saturating_mul(elems.len() as u64) > self.cap.saturating_mul(16) {
            return Err(Error::CapExceeded {
                what: "pairwise diameter".into(),
                size: (elems.len() as u128 * elems.len() as u128).to_string(),
                cap: self.cap * 16,
            });
        }
        let mut diffs = std::collections::HashSet::new();
        for x in &elems {
            let xi = dp.inverse(x)?;
            for y in &elems {
                diffs.insert(dp.mul_unchecked(&xi, y));
            }
        }
        let metric = ExactMetric::new(dp, ball_cap);
        let diffs: Vec<DeltaElement> = diffs.into_iter().collect();
        let lengths: Vec<Option<u32>> =
            diffs.par_iter().map(|z| metric.word_length_exact(z, radius_cap, node_cap)).collect();
        Ok(lengths.into_iter().try_fold(0, |acc, l| l.map(|l| acc.max(l))))
    }
}
