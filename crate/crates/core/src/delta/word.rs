use std::collections::{HashMap, HashSet};

use super::{DeltaElement, DiagonalProduct, LampConfig, RangeInterval};
use crate::groups::{ElemId, Letter};

/// An element of the generating set `S_Δ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    /// Cursor `+1`.
    Forward,
    /// Cursor `−1`.
    Backward,
    /// `a` written at the cursor on every level.
    A(ElemId),
    /// `b` written at cursor `+ k_m` on level `m`.
    B(ElemId),
}

impl Generator {
    pub fn step(&self) -> i64 {
        match self {
            Generator::Forward => 1,
            Generator::Backward => -1,
            _ => 0,
        }
    }

    pub fn inverse_in(&self, dp: &DiagonalProduct) -> Generator {
        match *self {
            Generator::Forward => Generator::Backward,
            Generator::Backward => Generator::Forward,
            Generator::A(i) => Generator::A(dp.factor_a().inv(i)),
            Generator::B(j) => Generator::B(dp.factor_b().inv(j)),
        }
    }
}

impl std::fmt::Display for Generator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Generator::Forward => f.write_str("t+"),
            Generator::Backward => f.write_str("t-"),
            Generator::A(i) => write!(f, "a{i}"),
            Generator::B(j) => write!(f, "b{j}"),
        }
    }
}

impl std::str::FromStr for Generator {
    type Err = crate::error::Error;

    fn from_str(s: &str) -> crate::error::Result<Self> {
        let bad = || crate::error::Error::Parse(format!("unknown generator {s:?}"));
        match s {
            "t+" => Ok(Generator::Forward),
            "t-" => Ok(Generator::Backward),
            _ if s.starts_with('a') => s[1..].parse().map(Generator::A).map_err(|_| bad()),
            _ if s.starts_with('b') => s[1..].parse().map(Generator::B).map_err(|_| bad()),
            _ => Err(bad()),
        }
    }
}

/// Hull of the cursor positions visited by a word, starting at `0`.
pub fn word_range(word: &[Generator]) -> RangeInterval {
    let mut r = RangeInterval::point(0);
    let mut pos = 0;
    for s in word {
        pos += s.step();
        r.include(pos);
    }
    r
}

impl DiagonalProduct {
    /// `S_Δ`: both cursor moves, then every non-trivial `a`, then every `b`.
    pub fn generators(&self) -> Vec<Generator> {
        let mut gens = vec![Generator::Forward, Generator::Backward];
        gens.extend((1..self.factor_a().order() as ElemId).map(Generator::A));
        gens.extend((1..self.factor_b().order() as ElemId).map(Generator::B));
        gens
    }

    /// The compact form of a generator. Writes live entirely in `g_0`;
    /// reconstruction places `a_m` at `0` and `b_m` at `k_m` on every level.
    pub fn generator(&self, s: Generator) -> DeltaElement {
        let mut x = self.identity();
        match s {
            Generator::Forward => x.cursor = 1,
            Generator::Backward => x.cursor = -1,
            Generator::A(i) => x.base = LampConfig::single(0, self.base_id(i, 0)),
            Generator::B(j) => x.base = LampConfig::single(0, self.base_id(0, j)),
        }
        x
    }

    pub fn eval_word(&self, word: &[Generator]) -> DeltaElement {
        word.iter().fold(self.identity(), |acc, &s| self.mul_unchecked(&acc, &self.generator(s)))
    }

    /// A word representing `x` whose cursor stays inside `compute_range(x)`.
    ///
    /// Every derived value `g'_m(p)` is written first by a cursor-returning
    /// word (its `A`-letters at `p`, its `B`-letters from `p − k_m`); the
    /// `g_0` values follow, visited right to left so that on each level the
    /// `A` contribution at a site precedes the `B` contribution arriving from
    /// `k_m` sites to the left. The cursor finally moves to `t`.
    pub fn write_word(&self, x: &DeltaElement) -> Vec<Generator> {
        let mut word = Vec::new();
        let mut pos = 0i64;
        let goto = |word: &mut Vec<Generator>, pos: &mut i64, target: i64| {
            while *pos < target {
                word.push(Generator::Forward);
                *pos += 1;
            }
            while *pos > target {
                word.push(Generator::Backward);
                *pos -= 1;
            }
        };
        for (level, cfg) in self.levels.iter().zip(&x.derived) {
            let k = level.k as i64;
            for (p, v) in cfg.iter() {
                for letter in level.backend.word_for(v) {
                    match letter {
                        Letter::A(i) => {
                            goto(&mut word, &mut pos, p);
                            word.push(Generator::A(i));
                        }
                        Letter::B(j) => {
                            goto(&mut word, &mut pos, p - k);
                            word.push(Generator::B(j));
                        }
                    }
                }
            }
        }
        goto(&mut word, &mut pos, 0);
        for (p, v) in x.base.iter().collect::<Vec<_>>().into_iter().rev() {
            let (i, j) = self.split_base(v);
            goto(&mut word, &mut pos, p);
            if i != 0 {
                word.push(Generator::A(i));
            }
            if j != 0 {
                word.push(Generator::B(j));
            }
        }
        goto(&mut word, &mut pos, x.cursor);
        word
    }
}

/// Exact word length in `Δ` by meet-in-the-middle: a stored ball around the
/// identity and a bounded breadth-first search from the target.
pub struct ExactMetric<'a> {
    dp: &'a DiagonalProduct,
    gens: Vec<DeltaElement>,
    ball: HashMap<DeltaElement, u32>,
    radius: u32,
}

impl<'a> ExactMetric<'a> {
    /// Stores every complete sphere around the identity while the ball has at
    /// most `node_cap` elements.
    pub fn new(dp: &'a DiagonalProduct, node_cap: usize) -> Self {
        let gens: Vec<DeltaElement> = dp.generators().into_iter().map(|s| dp.generator(s)).collect();
        let mut ball = HashMap::new();
        let id = dp.identity();
        ball.insert(id.clone(), 0);
        let mut layer = vec![id];
        let mut radius = 0;
        loop {
            let mut next = Vec::new();
            let mut fresh = HashSet::new();
            for x in &layer {
                for s in &gens {
                    let y = dp.mul_unchecked(x, s);
                    if !ball.contains_key(&y) && fresh.insert(y.clone()) {
                        next.push(y);
                    }
                }
            }
            if next.is_empty() || ball.len() + next.len() > node_cap {
                break;
            }
            radius += 1;
            for y in &next {
                ball.insert(y.clone(), radius);
            }
            layer = next;
        }
        Self { dp, gens, ball, radius }
    }

    /// Radius of the stored ball.
    pub fn ball_radius(&self) -> u32 {
        self.radius
    }

    pub fn ball_size(&self) -> usize {
        self.ball.len()
    }

    /// `|z|_Δ` when it is at most `radius_cap` and the search from `z` stays
    /// under `node_cap` visited elements; `None` means unknown.
    pub fn word_length_exact(&self, z: &DeltaElement, radius_cap: u32, node_cap: usize) -> Option<u32> {
        if let Some(&d) = self.ball.get(z) {
            return (d <= radius_cap).then_some(d);
        }
        let r = self.radius;
        let mut seen = HashSet::new();
        seen.insert(z.clone());
        let mut layer = vec![z.clone()];
        let mut best: Option<u32> = None;
        let mut j = 0u32;
        loop {
            // Any geodesic not yet met has length ≥ j + 1 + r.
            if let Some(b) = best {
                if b <= j + 1 + r {
                    return (b <= radius_cap).then_some(b);
                }
            }
            if j + 1 + r > radius_cap {
                return None;
            }
            let mut next = Vec::new();
            for x in &layer {
                for s in &self.gens {
                    let y = self.dp.mul_unchecked(x, s);
                    if seen.insert(y.clone()) {
                        if let Some(&d) = self.ball.get(&y) {
                            let total = j + 1 + d;
                            best = Some(best.map_or(total, |b| b.min(total)));
                        }
                        next.push(y);
                    }
                }
            }
            if seen.len() > node_cap {
                return best.filter(|&b| b <= j + 2 + r && b <= radius_cap);
            }
            j += 1;
            layer = next;
        }
    }
}
