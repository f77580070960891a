//! Exact arithmetic in the diagonal product `Δ ⊂ (∏ Γ_m) ≀ ℤ`.
//!
//! Elements are stored compactly as `(t, g_0, g'_1, …, g'_M)`: the cursor, the
//! level-0 configuration valued in `Γ_0 = A × B`, and the derived
//! configurations valued in `Γ'_m`. The full level configurations are
//! recovered on demand through
//! `g_m(x) = g'_m(x) · θ^A_m(g_0(x)) · θ^B_m(g_0(x − k_m))`.
//!
//! Levels with `k_m = ∞` are trivial groups and are simply absent.

mod lamp;
mod word;

use std::fmt;
use std::sync::Arc;

pub use lamp::LampConfig;
pub use word::{word_range, ExactMetric, Generator};

use crate::error::{Error, Result};
use crate::groups::{ElemId, FiniteTable, GroupBackend};

/// Largest admissible finite `k_m`; keeps every position arithmetic in `i64`.
pub const MAX_K: u64 = 1 << 48;

/// One finite level `m ≥ 1` of the product.
#[derive(Clone, Debug)]
pub struct Level {
    pub k: u64,
    pub backend: Arc<GroupBackend>,
}

/// Cursor position plus the compact lamp data of an element of `Δ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DeltaElement {
    pub cursor: i64,
    pub base: LampConfig,
    pub derived: Vec<LampConfig>,
}

/// A closed integer interval `[lo, hi]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RangeInterval {
    pub lo: i64,
    pub hi: i64,
}

impl RangeInterval {
    pub fn point(x: i64) -> Self {
        Self { lo: x, hi: x }
    }

    /// Number of sites, `hi − lo + 1`.
    pub fn sites(&self) -> u64 {
        (self.hi - self.lo) as u64 + 1
    }

    /// `hi − lo`, the diameter of the interval.
    pub fn diameter(&self) -> u64 {
        (self.hi - self.lo) as u64
    }

    pub fn include(&mut self, x: i64) {
        self.lo = self.lo.min(x);
        self.hi = self.hi.max(x);
    }

    pub fn hull(&self, other: &Self) -> Self {
        Self { lo: self.lo.min(other.lo), hi: self.hi.max(other.hi) }
    }

    pub fn shift(&self, t: i64) -> Self {
        Self { lo: self.lo + t, hi: self.hi + t }
    }

    pub fn contains(&self, other: &Self) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }
}

impl fmt::Display for RangeInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.lo, self.hi)
    }
}

/// The group `Δ` determined by the factors `A`, `B`, the finite levels
/// `(k_m, Γ_m)` and the first non-materialized `k` (`None` when it is `∞`).
#[derive(Clone, Debug)]
pub struct DiagonalProduct {
    a: FiniteTable,
    b: FiniteTable,
    gamma0: GroupBackend,
    levels: Vec<Level>,
    horizon: Option<u64>,
}

impl DiagonalProduct {
    pub fn new(a: FiniteTable, b: FiniteTable, levels: Vec<Level>, horizon: Option<u64>) -> Result<Self> {
        let gamma0 = GroupBackend::direct_product(&a, &b)?;
        let mut prev = 0u64;
        for (idx, level) in levels.iter().enumerate() {
            let m = idx + 1;
            if level.k == 0 || level.k > MAX_K {
                return Err(Error::Schedule(format!("k_{m} = {} is out of range [1, 2^48]", level.k)));
            }
            if level.k < 2 * prev {
                return Err(Error::Hypothesis(format!(
                    "k_{m} = {} violates k_{{m+1}} ≥ 2k_m (k_{} = {prev})",
                    level.k, idx
                )));
            }
            let g = &level.backend;
            if g.a_elems().len() != a.order() || g.b_elems().len() != b.order() {
                return Err(Error::Hypothesis(format!(
                    "level {m}: marked subgroups have orders {}/{}, expected |A| = {}, |B| = {}",
                    g.a_elems().len(),
                    g.b_elems().len(),
                    a.order(),
                    b.order()
                )));
            }
            for i in 0..a.order() as ElemId {
                for j in 0..a.order() as ElemId {
                    if g.mul(g.embed_a(i), g.embed_a(j)) != g.embed_a(a.mul(i, j)) {
                        return Err(Error::Hypothesis(format!("level {m}: A_m is not a copy of A")));
                    }
                }
            }
            for i in 0..b.order() as ElemId {
                for j in 0..b.order() as ElemId {
                    if g.mul(g.embed_b(i), g.embed_b(j)) != g.embed_b(b.mul(i, j)) {
                        return Err(Error::Hypothesis(format!("level {m}: B_m is not a copy of B")));
                    }
                }
            }
            prev = level.k;
        }
        if let Some(h) = horizon {
            if h < 2 * prev || h == 0 {
                return Err(Error::Hypothesis(format!(
                    "next k = {h} violates k_{{m+1}} ≥ 2k_m after k = {prev}"
                )));
            }
        }
        Ok(Self { a, b, gamma0, levels, horizon })
    }

    /// `(A × B) ≀ ℤ` with cyclic factors: every `k_m` with `m ≥ 1` is infinite.
    pub fn lamplighter(a_order: usize, b_order: usize) -> Result<Self> {
        Self::new(FiniteTable::cyclic(a_order)?, FiniteTable::cyclic(b_order)?, Vec::new(), None)
    }

    /// `A = B = ℤ/2` with dihedral levels `Γ_m = D_{l_m}` and `k_{M+1} = ∞`.
    pub fn dihedral(ks: &[u64], ls: &[u64]) -> Result<Self> {
        if ks.len() != ls.len() {
            return Err(Error::Config(format!("{} k values but {} l values", ks.len(), ls.len())));
        }
        let levels = ks
            .iter()
            .zip(ls)
            .map(|(&k, &l)| Ok(Level { k, backend: Arc::new(GroupBackend::dihedral(l)?) }))
            .collect::<Result<Vec<_>>>()?;
        Self::new(FiniteTable::cyclic(2)?, FiniteTable::cyclic(2)?, levels, None)
    }

    pub fn factor_a(&self) -> &FiniteTable {
        &self.a
    }

    pub fn factor_b(&self) -> &FiniteTable {
        &self.b
    }

    /// `|A|·|B|`, the order of `Γ_0`.
    pub fn base_order(&self) -> usize {
        self.gamma0.order()
    }

    pub fn gamma0(&self) -> &GroupBackend {
        &self.gamma0
    }

    /// Number `M` of finite levels `m ≥ 1`.
    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    pub fn horizon(&self) -> Option<u64> {
        self.horizon
    }

    /// `k_m`, with `k_0 = 0`.
    pub fn k(&self, m: usize) -> Result<u64> {
        match m {
            0 => Ok(0),
            m if m <= self.levels.len() => Ok(self.levels[m - 1].k),
            m => Err(Error::InfiniteLevel(m)),
        }
    }

    /// The backend `Γ_m`, with `Γ_0 = A × B`.
    pub fn backend(&self, m: usize) -> Result<&GroupBackend> {
        match m {
            0 => Ok(&self.gamma0),
            m if m <= self.levels.len() => Ok(&self.levels[m - 1].backend),
            m => Err(Error::InfiniteLevel(m)),
        }
    }

    /// Whether every `n' ≤ n` has its level index determined by the stored data.
    pub fn covers(&self, n: u64) -> bool {
        self.horizon.map_or(true, |h| n < h)
    }

    /// `𝔩(n)`: the level with `k_{𝔩(n)} ≤ n < k_{𝔩(n)+1}`, capped at the depth.
    pub fn little_l(&self, n: u64) -> usize {
        self.levels.partition_point(|l| l.k <= n)
    }

    #[inline]
    pub fn base_id(&self, i: ElemId, j: ElemId) -> ElemId {
        i + self.a.order() as ElemId * j
    }

    #[inline]
    pub fn split_base(&self, id: ElemId) -> (ElemId, ElemId) {
        let na = self.a.order() as ElemId;
        (id % na, id / na)
    }

    pub fn identity(&self) -> DeltaElement {
        DeltaElement { cursor: 0, base: LampConfig::new(), derived: vec![LampConfig::new(); self.depth()] }
    }

    /// Checks ids, derived-subgroup membership and depth.
    pub fn check_element(&self, x: &DeltaElement) -> Result<()> {
        if x.derived.len() != self.depth() {
            return Err(Error::ScheduleMismatch { left: x.derived.len(), right: self.depth() });
        }
        for (_, v) in x.base.iter() {
            self.gamma0.check_id(v)?;
        }
        for (m, level) in self.levels.iter().enumerate() {
            for (p, v) in x.derived[m].iter() {
                level.backend.check_id(v)?;
                if !level.backend.is_derived(v) {
                    return Err(Error::Invariant(format!(
                        "g'_{}({p}) = {v} is not in the derived subgroup",
                        m + 1
                    )));
                }
            }
        }
        Ok(())
    }

    fn check_pair(&self, x: &DeltaElement, y: &DeltaElement) -> Result<()> {
        if x.derived.len() != self.depth() || y.derived.len() != self.depth() {
            return Err(Error::ScheduleMismatch { left: x.derived.len(), right: y.derived.len() });
        }
        Ok(())
    }

    /// `g_m(pos)`, the full level-`m` value (`m = 0` reads `g_0`).
    pub fn reconstruct_level(&self, x: &DeltaElement, m: usize, pos: i64) -> Result<ElemId> {
        if x.derived.len() != self.depth() {
            return Err(Error::ScheduleMismatch { left: x.derived.len(), right: self.depth() });
        }
        match m {
            0 => Ok(x.base.get(pos)),
            m if m <= self.depth() => Ok(self.level_value(x, m, pos)),
            m => Err(Error::InfiniteLevel(m)),
        }
    }

    #[inline]
    fn level_value(&self, x: &DeltaElement, m: usize, pos: i64) -> ElemId {
        let level = &self.levels[m - 1];
        self.level_value_from(&x.derived[m - 1], &x.base, level, pos)
    }

    #[inline]
    fn section(&self, base: &LampConfig, level: &Level, pos: i64) -> ElemId {
        let g = &level.backend;
        let (i, _) = self.split_base(base.get(pos));
        let (_, j) = self.split_base(base.get(pos - level.k as i64));
        g.mul(g.embed_a(i), g.embed_b(j))
    }

    #[inline]
    fn level_value_from(&self, derived: &LampConfig, base: &LampConfig, level: &Level, pos: i64) -> ElemId {
        level.backend.mul(derived.get(pos), self.section(base, level, pos))
    }

    /// Positions where level `m` of `x`, translated by `shift`, may be non-trivial.
    fn level_candidates(&self, x: &DeltaElement, m: usize, shift: i64, out: &mut Vec<i64>) {
        let k = self.levels[m - 1].k as i64;
        out.extend(x.derived[m - 1].positions().map(|p| p + shift));
        for p in x.base.positions() {
            out.push(p + shift);
            out.push(p + k + shift);
        }
    }

    /// Splits full level values into the derived configuration relative to
    /// the (already computed) base configuration.
    fn decompose_level<F>(&self, base: &LampConfig, m: usize, positions: &mut Vec<i64>, value: F) -> LampConfig
    where
        F: Fn(i64) -> ElemId,
    {
        positions.sort_unstable();
        positions.dedup();
        let level = &self.levels[m - 1];
        let g = &level.backend;
        let mut out = Vec::new();
        for &p in positions.iter() {
            let v = g.mul(value(p), g.inv(self.section(base, level, p)));
            debug_assert!(g.is_derived(v), "level {m} value at {p} escapes the derived subgroup");
            if v != 0 {
                out.push((p, v));
            }
        }
        LampConfig::from_sorted(out)
    }

    /// The product `x·y` under the wreath law `(f, t)(g, s) = (f · g(· − t), t + s)`.
    pub fn multiply(&self, x: &DeltaElement, y: &DeltaElement) -> Result<DeltaElement> {
        self.check_pair(x, y)?;
        Ok(self.mul_unchecked(x, y))
    }

    pub(crate) fn mul_unchecked(&self, x: &DeltaElement, y: &DeltaElement) -> DeltaElement {
        let t = x.cursor;
        let base = self.base_product(&x.base, &y.base, t);
        let mut derived = Vec::with_capacity(self.depth());
        let mut positions = Vec::new();
        for m in 1..=self.depth() {
            positions.clear();
            self.level_candidates(x, m, 0, &mut positions);
            self.level_candidates(y, m, t, &mut positions);
            let g = &self.levels[m - 1].backend;
            let cfg = self.decompose_level(&base, m, &mut positions, |p| {
                g.mul(self.level_value(x, m, p), self.level_value(y, m, p - t))
            });
            derived.push(cfg);
        }
        DeltaElement { cursor: t + y.cursor, base, derived }
    }

    fn base_product(&self, x: &LampConfig, y: &LampConfig, shift: i64) -> LampConfig {
        let mut out = Vec::with_capacity(x.len() + y.len());
        let mut xs = x.iter().peekable();
        let mut ys = y.iter().map(|(p, v)| (p + shift, v)).peekable();
        loop {
            let next = match (xs.peek().copied(), ys.peek().copied()) {
                (None, None) => break,
                (Some(a), None) => {
                    xs.next();
                    a
                }
                (None, Some(b)) => {
                    ys.next();
                    b
                }
                (Some(a), Some(b)) => {
                    if a.0 < b.0 {
                        xs.next();
                        a
                    } else if b.0 < a.0 {
                        ys.next();
                        b
                    } else {
                        xs.next();
                        ys.next();
                        (a.0, self.gamma0.mul(a.1, b.1))
                    }
                }
            };
            if next.1 != 0 {
                out.push(next);
            }
        }
        LampConfig::from_sorted(out)
    }

    /// `x^{-1} = (f^{-1}(· + t), −t)`.
    pub fn inverse(&self, x: &DeltaElement) -> Result<DeltaElement> {
        self.check_pair(x, x)?;
        let t = x.cursor;
        let base = LampConfig::from_sorted(x.base.iter().map(|(p, v)| (p - t, self.gamma0.inv(v))).collect());
        let mut derived = Vec::with_capacity(self.depth());
        let mut positions = Vec::new();
        for m in 1..=self.depth() {
            positions.clear();
            self.level_candidates(x, m, -t, &mut positions);
            let g = &self.levels[m - 1].backend;
            derived.push(self.decompose_level(&base, m, &mut positions, |p| g.inv(self.level_value(x, m, p + t))));
        }
        Ok(DeltaElement { cursor: -t, base, derived })
    }

    /// The minimal cursor interval of a representing word: the hull of
    /// `{0, t} ∪ supp g_0 ∪ ⋃_m (supp g'_m ∪ (supp g'_m − k_m))`.
    pub fn compute_range(&self, x: &DeltaElement) -> RangeInterval {
        let mut r = RangeInterval::point(0);
        r.include(x.cursor);
        if let Some((lo, hi)) = x.base.bounds() {
            r.include(lo);
            r.include(hi);
        }
        for (level, cfg) in self.levels.iter().zip(&x.derived) {
            if let Some((lo, hi)) = cfg.bounds() {
                r.include(lo - level.k as i64);
                r.include(hi);
            }
        }
        r
    }

    /// `E_m`: `k_m` times the sum over blocks `I^m_j` meeting the range of the
    /// largest excess word length `(|f_m(x)| − 1)_+` in the block. Blocks have
    /// width `max(1, ⌊k_m/2⌋)`; `E_0 = 0`.
    pub fn essential_contribution(&self, x: &DeltaElement, m: usize) -> Result<u64> {
        if m == 0 {
            return Ok(0);
        }
        if m > self.depth() {
            return Err(Error::InfiniteLevel(m));
        }
        self.check_pair(x, x)?;
        let level = &self.levels[m - 1];
        let width = (level.k / 2).max(1) as i64;
        let r = self.compute_range(x);
        let (jlo, jhi) = (r.lo.div_euclid(width), r.hi.div_euclid(width));
        let mut positions = Vec::new();
        self.level_candidates(x, m, 0, &mut positions);
        positions.sort_unstable();
        positions.dedup();
        let mut total = 0u64;
        let mut current: Option<(i64, u32)> = None;
        for p in positions {
            let j = p.div_euclid(width);
            if j < jlo || j > jhi {
                continue;
            }
            let excess = level.backend.word_length(self.level_value(x, m, p)).saturating_sub(1);
            current = match current {
                Some((cj, best)) if cj == j => Some((j, best.max(excess))),
                Some((_, best)) => {
                    total += best as u64;
                    Some((j, excess))
                }
                None => Some((j, excess)),
            };
        }
        if let Some((_, best)) = current {
            total += best as u64;
        }
        Ok(level.k * total)
    }

    /// `500 · Σ_{m ≤ 𝔩(range)} 9 (range_m + E_m)`, where `range_m` is the
    /// number of sites of the range interval (zero when `(f_m, t)` is trivial).
    pub fn metric_upper_bound(&self, x: &DeltaElement) -> Result<u128> {
        self.check_pair(x, x)?;
        let r = self.compute_range(x);
        let top = self.little_l(r.diameter());
        let mut sum = 0u128;
        for m in 0..=top {
            let trivial = x.cursor == 0 && x.base.is_empty() && (m == 0 || x.derived[m - 1].is_empty());
            let range_m = if trivial { 0 } else { r.sites() as u128 };
            sum += 9 * (range_m + self.essential_contribution(x, m)? as u128);
        }
        Ok(500 * sum)
    }
}

impl fmt::Display for DeltaElement {
    /// `t | pos:val,… | m=1 pos:val,… | …`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} | {}", self.cursor, self.base)?;
        for (m, cfg) in self.derived.iter().enumerate() {
            if cfg.is_empty() {
                write!(f, " | m={}", m + 1)?;
            } else {
                write!(f, " | m={} {}", m + 1, cfg)?;
            }
        }
        Ok(())
    }
}

impl DeltaElement {
    /// Parses the line format produced by `Display`.
    pub fn parse(line: &str) -> Result<Self> {
        let mut parts = line.split('|').map(str::trim);
        let cursor = parts
            .next()
            .filter(|s| !s.is_empty())
            .ok_or_else(|| Error::Parse("missing cursor".into()))?;
        let cursor = cursor.parse::<i64>().map_err(|e| Error::Parse(format!("cursor {cursor:?}: {e}")))?;
        let base = LampConfig::parse(parts.next().ok_or_else(|| Error::Parse("missing base configuration".into()))?)?;
        let mut derived = Vec::new();
        for (idx, part) in parts.enumerate() {
            let rest = part
                .strip_prefix(&format!("m={}", idx + 1))
                .ok_or_else(|| Error::Parse(format!("expected level tag m={} in {part:?}", idx + 1)))?;
            derived.push(LampConfig::parse(rest)?);
        }
        Ok(Self { cursor, base, derived })
    }
}
