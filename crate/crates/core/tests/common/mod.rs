//! An independent model of `Δ`: every level stored in full, multiplied by the
//! wreath law, with its own dihedral arithmetic.

#![allow(dead_code)]

use std::collections::BTreeMap;

use diagprod::delta::{DeltaElement, DiagonalProduct, Generator};

/// `r^j a^s` in `D_l`, encoded `j + l·s`.
#[derive(Clone, Copy, Debug)]
pub struct Dihedral {
    pub l: u32,
}

impl Dihedral {
    pub fn mul(&self, g: u32, h: u32) -> u32 {
        let (j, s) = (g % self.l, g / self.l);
        let (k, t) = (h % self.l, h / self.l);
        let rot = if s == 0 { j + k } else { j + self.l - k } % self.l;
        rot + self.l * (s ^ t)
    }
    pub fn a(&self) -> u32 {
        self.l
    }
    pub fn b(&self) -> u32 {
        self.l - 1 + self.l
    }
}

/// The A = B = ℤ/2 diagonal product with dihedral levels.
#[derive(Clone, Debug)]
pub struct FullModel {
    pub ks: Vec<i64>,
    pub groups: Vec<Dihedral>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FullElement {
    pub cursor: i64,
    /// Level 0 holds `(i, j) ∈ ℤ/2 × ℤ/2` as `i + 2j`.
    pub levels: Vec<BTreeMap<i64, u32>>,
}

impl FullModel {
    pub fn new(ks: &[u64], ls: &[u64]) -> Self {
        Self {
            ks: ks.iter().map(|&k| k as i64).collect(),
            groups: ls.iter().map(|&l| Dihedral { l: l as u32 }).collect(),
        }
    }

    pub fn identity(&self) -> FullElement {
        FullElement { cursor: 0, levels: vec![BTreeMap::new(); self.ks.len() + 1] }
    }

    fn op(&self, m: usize, g: u32, h: u32) -> u32 {
        if m == 0 {
            g ^ h
        } else {
            self.groups[m - 1].mul(g, h)
        }
    }

    pub fn mul(&self, x: &FullElement, y: &FullElement) -> FullElement {
        let mut out = x.clone();
        out.cursor = x.cursor + y.cursor;
        for (m, level) in y.levels.iter().enumerate() {
            for (&p, &v) in level {
                let q = p + x.cursor;
                let w = self.op(m, out.levels[m].get(&q).copied().unwrap_or(0), v);
                if w == 0 {
                    out.levels[m].remove(&q);
                } else {
                    out.levels[m].insert(q, w);
                }
            }
        }
        out
    }

    pub fn generator(&self, s: Generator) -> FullElement {
        let mut x = self.identity();
        match s {
            Generator::Forward => x.cursor = 1,
            Generator::Backward => x.cursor = -1,
            Generator::A(_) => {
                x.levels[0].insert(0, 1);
                for (m, g) in self.groups.iter().enumerate() {
                    x.levels[m + 1].insert(0, g.a());
                }
            }
            Generator::B(_) => {
                x.levels[0].insert(0, 2);
                for (m, g) in self.groups.iter().enumerate() {
                    x.levels[m + 1].insert(self.ks[m], g.b());
                }
            }
        }
        x
    }

    pub fn eval(&self, word: &[Generator]) -> FullElement {
        word.iter().fold(self.identity(), |acc, &s| self.mul(&acc, &self.generator(s)))
    }

    /// Whether the compact element has the same cursor and the same value at
    /// every level and every position of `[lo, hi]`.
    pub fn agrees(&self, dp: &DiagonalProduct, x: &DeltaElement, full: &FullElement, lo: i64, hi: i64) -> bool {
        x.cursor == full.cursor
            && (0..=self.ks.len()).all(|m| {
                (lo..=hi).all(|p| {
                    dp.reconstruct_level(x, m, p).unwrap() == full.levels[m].get(&p).copied().unwrap_or(0)
                })
            })
            && full.levels.iter().all(|l| l.keys().all(|&p| (lo..=hi).contains(&p)))
    }
}

pub fn d4_product() -> DiagonalProduct {
    DiagonalProduct::dihedral(&[2], &[4]).unwrap()
}

pub fn d4_model() -> FullModel {
    FullModel::new(&[2], &[4])
}

/// All words of length at most `len`.
pub fn words_up_to(gens: &[Generator], len: usize) -> Vec<Vec<Generator>> {
    let mut all = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..len {
        layer = layer
            .iter()
            .flat_map(|w: &Vec<Generator>| {
                gens.iter().map(move |&s| {
                    let mut w = w.clone();
                    w.push(s);
                    w
                })
            })
            .collect();
        all.extend(layer.iter().cloned());
    }
    all
}
