//! Finite group backends `Γ_m` with marked subgroups `A_m`, `B_m`.
//!
//! Every backend exposes canonical element ids (`0` is the identity), the
//! abelianized projection onto `A_m × B_m`, the derived-part decomposition
//! `g = g' · θ^A(g) · θ^B(g)` and the word metric over `A_m ∪ B_m`.
//!
//! Two kinds are provided. The dihedral group `D_l` (order `2l`, `l` even) is
//! evaluated in closed form; arbitrary groups are given by a multiplication
//! table, in which case the quotient by `⟨⟨[A_m, B_m]⟩⟩` is computed by
//! normal-closure and coset enumeration.

use std::collections::VecDeque;
use std::fmt;

use crate::error::{Error, Result};

pub type ElemId = u32;

/// Groups above this order are never materialized.
pub const MAX_BACKEND_ORDER: usize = 1 << 24;

/// A finite group stored as a full multiplication table. Used for the
/// abstract factors `A` and `B` and for table backends.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteTable {
    order: usize,
    table: Vec<ElemId>,
    inv: Vec<ElemId>,
}

impl FiniteTable {
    /// The cyclic group `ℤ/n` with `i·j = i + j mod n`.
    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidTable("cyclic group of order 0".into()));
        }
        let table = (0..n)
            .flat_map(|i| (0..n).map(move |j| ((i + j) % n) as ElemId))
            .collect();
        let inv = (0..n).map(|i| ((n - i) % n) as ElemId).collect();
        Ok(Self { order: n, table, inv })
    }

    /// Builds a table from rows, checking identity, the Latin-square property
    /// and associativity.
    pub fn from_rows(rows: &[Vec<ElemId>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidTable("empty table".into()));
        }
        if n > MAX_BACKEND_ORDER {
            return Err(Error::InvalidTable(format!("order {n} too large")));
        }
        let mut table = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidTable(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            for &v in row {
                if v as usize >= n {
                    return Err(Error::InvalidTable(format!("entry {v} out of range in row {i}")));
                }
            }
            table.extend_from_slice(row);
        }
        for i in 0..n {
            if table[i] as usize != i || table[i * n] as usize != i {
                return Err(Error::InvalidTable("element 0 is not the identity".into()));
            }
        }
        for i in 0..n {
            let mut seen_row = vec![false; n];
            let mut seen_col = vec![false; n];
            for j in 0..n {
                let r = table[i * n + j] as usize;
                let c = table[j * n + i] as usize;
                if seen_row[r] || seen_col[c] {
                    return Err(Error::InvalidTable(format!("not a Latin square at index {i}")));
                }
                seen_row[r] = true;
                seen_col[c] = true;
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = table[a * n + b] as usize;
                for c in 0..n {
                    let bc = table[b * n + c] as usize;
                    if table[ab * n + c] != table[a * n + bc] {
                        return Err(Error::InvalidTable(format!(
                            "not associative: ({a}·{b})·{c} ≠ {a}·({b}·{c})"
                        )));
                    }
                }
            }
        }
        let mut inv = vec![0; n];
        for a in 0..n {
            for b in 0..n {
                if table[a * n + b] == 0 {
                    inv[a] = b as ElemId;
                    break;
                }
            }
        }
        Ok(Self { order: n, table, inv })
    }

    /// Parses a whitespace-separated square integer matrix.
    pub fn parse(text: &str) -> Result<Self> {
        let mut rows = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let row = line
                .split_whitespace()
                .map(|t| {
                    t.parse::<ElemId>()
                        .map_err(|e| Error::Parse(format!("table entry {t:?}: {e}")))
                })
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
        Self::from_rows(&rows)
    }

    /// `A × B` with ids `i + |A|·j`.
    pub fn direct_product(a: &FiniteTable, b: &FiniteTable) -> Self {
        let n = a.order * b.order;
        let split = |x: usize| (x % a.order, x / a.order);
        let mut table = Vec::with_capacity(n * n);
        for x in 0..n {
            let (xa, xb) = split(x);
            for y in 0..n {
                let (ya, yb) = split(y);
                let za = a.mul(xa as ElemId, ya as ElemId) as usize;
                let zb = b.mul(xb as ElemId, yb as ElemId) as usize;
                table.push((za + a.order * zb) as ElemId);
            }
        }
        let inv = (0..n)
            .map(|x| {
                let (xa, xb) = split(x);
                (a.inv(xa as ElemId) as usize + a.order * b.inv(xb as ElemId) as usize) as ElemId
            })
            .collect();
        Self { order: n, table, inv }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, x: ElemId, y: ElemId) -> ElemId {
        self.table[x as usize * self.order + y as usize]
    }

    #[inline]
    pub fn inv(&self, x: ElemId) -> ElemId {
        self.inv[x as usize]
    }

    pub fn rows(&self) -> Vec<Vec<ElemId>> {
        self.table.chunks(self.order).map(|r| r.to_vec()).collect()
    }
}

/// A letter of the alphabet `A_m ∪ B_m`, named by its abstract index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Letter {
    A(ElemId),
    B(ElemId),
}

#[derive(Clone, Debug)]
enum Law {
    /// `D_l`: id `j + l·s` is `r^j a^s`, with `a = (0,1)` and `b = r^{-1}a`.
    Dihedral { l: u32 },
    Table(FiniteTable),
}

/// A finite group `Γ_m` with marked copies of the abstract factors.
#[derive(Clone, Debug)]
pub struct GroupBackend {
    law: Law,
    order: usize,
    diameter_target: u64,
    a_elems: Vec<ElemId>,
    b_elems: Vec<ElemId>,
    inv: Vec<ElemId>,
    theta: Vec<(ElemId, ElemId)>,
    derived_index: Vec<u32>,
    derived_elems: Vec<ElemId>,
    word_len: Vec<u32>,
    parent: Vec<(ElemId, Letter)>,
}

const NOT_DERIVED: u32 = u32::MAX;

impl GroupBackend {
    /// The dihedral group of order `2l` marked by its two standard reflections.
    /// Both factors are `ℤ/2`. Odd `l` is rejected: the abelianization would be
    /// `ℤ/2` instead of `ℤ/2 × ℤ/2`.
    pub fn dihedral(l: u64) -> Result<Self> {
        if l == 0 || l % 2 == 1 {
            return Err(Error::Hypothesis(format!(
                "dihedral backend needs an even rotation order, got l = {l}; \
                 the quotient by the normal closure of [A,B] would not be A×B"
            )));
        }
        let order = 2 * l as usize;
        if order > MAX_BACKEND_ORDER {
            return Err(Error::CapExceeded {
                what: format!("dihedral group D_{l}"),
                size: order.to_string(),
                cap: MAX_BACKEND_ORDER as u64,
            });
        }
        let l32 = l as u32;
        let law = Law::Dihedral { l: l32 };
        let a = l32; // (0, 1)
        let b = (l32 - 1) + l32; // (l-1, 1)
        let inv = (0..order as u32)
            .map(|g| {
                let (j, s) = (g % l32, g / l32);
                if s == 1 {
                    g
                } else {
                    (l32 - j) % l32
                }
            })
            .collect();
        let theta: Vec<(ElemId, ElemId)> = (0..order as u32)
            .map(|g| {
                let (j, s) = (g % l32, g / l32);
                let parity = j % 2;
                (s ^ parity, parity)
            })
            .collect();
        let mut backend = Self {
            law,
            order,
            diameter_target: l,
            a_elems: vec![0, a],
            b_elems: vec![0, b],
            inv,
            theta,
            derived_index: Vec::new(),
            derived_elems: Vec::new(),
            word_len: Vec::new(),
            parent: Vec::new(),
        };
        backend.finish_derived()?;
        backend.compute_word_metric()?;
        Ok(backend)
    }

    /// A backend given by an explicit multiplication table. `a_elems[i]` is the
    /// copy of abstract element `i` of `a_factor` (same for `b`).
    pub fn from_table(
        table: FiniteTable,
        a_factor: &FiniteTable,
        b_factor: &FiniteTable,
        a_elems: Vec<ElemId>,
        b_elems: Vec<ElemId>,
        diameter_target: u64,
    ) -> Result<Self> {
        let order = table.order();
        let inv = (0..order as ElemId).map(|g| table.inv(g)).collect();
        let mut backend = Self {
            law: Law::Table(table),
            order,
            diameter_target,
            a_elems,
            b_elems,
            inv,
            theta: Vec::new(),
            derived_index: Vec::new(),
            derived_elems: Vec::new(),
            word_len: Vec::new(),
            parent: Vec::new(),
        };
        backend.check_embedding(a_factor, true)?;
        backend.check_embedding(b_factor, false)?;
        backend.theta = backend.quotient_by_coset_enumeration()?;
        backend.finish_derived()?;
        backend.compute_word_metric()?;
        Ok(backend)
    }

    /// `Γ_0 = A × B`, marked by the two coordinate factors.
    pub fn direct_product(a_factor: &FiniteTable, b_factor: &FiniteTable) -> Result<Self> {
        let table = FiniteTable::direct_product(a_factor, b_factor);
        let na = a_factor.order() as ElemId;
        let a_elems = (0..na).collect();
        let b_elems = (0..b_factor.order() as ElemId).map(|j| j * na).collect();
        Self::from_table(table, a_factor, b_factor, a_elems, b_elems, 1)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn diameter_target(&self) -> u64 {
        self.diameter_target
    }

    pub fn is_dihedral(&self) -> bool {
        matches!(self.law, Law::Dihedral { .. })
    }

    /// Multiplication table rows (materialized on demand for dihedral backends).
    pub fn table_rows(&self) -> Vec<Vec<ElemId>> {
        (0..self.order as ElemId)
            .map(|g| (0..self.order as ElemId).map(|h| self.mul(g, h)).collect())
            .collect()
    }

    pub fn check_id(&self, g: ElemId) -> Result<()> {
        if (g as usize) < self.order {
            Ok(())
        } else {
            Err(Error::InvalidElement { id: g, order: self.order })
        }
    }

    #[inline]
    pub fn mul(&self, g: ElemId, h: ElemId) -> ElemId {
        match &self.law {
            Law::Dihedral { l } => {
                let (j1, s1) = (g % l, g / l);
                let (j2, s2) = (h % l, h / l);
                let j = if s1 == 0 { (j1 + j2) % l } else { (j1 + l - j2) % l };
                j + l * (s1 ^ s2)
            }
            Law::Table(t) => t.mul(g, h),
        }
    }

    pub fn try_mul(&self, g: ElemId, h: ElemId) -> Result<ElemId> {
        self.check_id(g)?;
        self.check_id(h)?;
        Ok(self.mul(g, h))
    }

    #[inline]
    pub fn inv(&self, g: ElemId) -> ElemId {
        self.inv[g as usize]
    }

    /// The copy `a_m` of abstract element `i` of `A`.
    #[inline]
    pub fn embed_a(&self, i: ElemId) -> ElemId {
        self.a_elems[i as usize]
    }

    #[inline]
    pub fn embed_b(&self, j: ElemId) -> ElemId {
        self.b_elems[j as usize]
    }

    pub fn a_elems(&self) -> &[ElemId] {
        &self.a_elems
    }

    pub fn b_elems(&self) -> &[ElemId] {
        &self.b_elems
    }

    /// Abelianized image in `A_m × B_m`, as abstract factor indices.
    #[inline]
    pub fn theta(&self, g: ElemId) -> (ElemId, ElemId) {
        self.theta[g as usize]
    }

    /// The section `θ^A(g)·θ^B(g)` as an element of `Γ_m`.
    #[inline]
    pub fn theta_section(&self, g: ElemId) -> ElemId {
        let (i, j) = self.theta(g);
        self.mul(self.embed_a(i), self.embed_b(j))
    }

    /// `g' = g · (θ^A(g) θ^B(g))^{-1}`, the unique element of `Γ'_m` with
    /// `g = g' · θ^A(g) · θ^B(g)`.
    #[inline]
    pub fn derived_part(&self, g: ElemId) -> ElemId {
        self.mul(g, self.inv(self.theta_section(g)))
    }

    #[inline]
    pub fn is_derived(&self, g: ElemId) -> bool {
        self.derived_index[g as usize] != NOT_DERIVED
    }

    /// Elements of `Γ'_m` in increasing id order; the identity comes first.
    pub fn derived_elements(&self) -> &[ElemId] {
        &self.derived_elems
    }

    /// Position of `g` inside [`derived_elements`](Self::derived_elements).
    #[inline]
    pub fn derived_index(&self, g: ElemId) -> Option<u32> {
        match self.derived_index[g as usize] {
            NOT_DERIVED => None,
            i => Some(i),
        }
    }

    pub fn derived_order(&self) -> usize {
        self.derived_elems.len()
    }

    /// Distance to the identity in the Cayley graph over `A_m ∪ B_m`.
    #[inline]
    pub fn word_length(&self, g: ElemId) -> u32 {
        self.word_len[g as usize]
    }

    pub fn diameter(&self) -> u32 {
        self.word_len.iter().copied().max().unwrap_or(0)
    }

    /// A geodesic word over `A_m ∪ B_m` whose product is `g`.
    pub fn word_for(&self, g: ElemId) -> Vec<Letter> {
        let mut letters = Vec::with_capacity(self.word_len[g as usize] as usize);
        let mut cur = g;
        while cur != 0 {
            let (prev, letter) = self.parent[cur as usize];
            letters.push(letter);
            cur = prev;
        }
        letters.reverse();
        letters
    }

    /// Evaluates a word over `A_m ∪ B_m`.
    pub fn eval_word(&self, letters: &[Letter]) -> ElemId {
        letters.iter().fold(0, |acc, l| self.mul(acc, self.letter_elem(*l)))
    }

    pub fn letter_elem(&self, l: Letter) -> ElemId {
        match l {
            Letter::A(i) => self.embed_a(i),
            Letter::B(j) => self.embed_b(j),
        }
    }

    /// Re-derives the quotient structure generically (normal closure of the
    /// commutators, coset enumeration, generation by `A_m ∪ B_m`) and checks it
    /// against the stored projection. Used to validate closed-form backends.
    pub fn check_hypotheses(&self) -> Result<()> {
        let generic = self.quotient_by_coset_enumeration()?;
        if generic != self.theta {
            return Err(Error::Invariant(
                "closed-form projection disagrees with coset enumeration".into(),
            ));
        }
        Ok(())
    }

    fn check_embedding(&self, factor: &FiniteTable, is_a: bool) -> Result<()> {
        let name = if is_a { "A" } else { "B" };
        let elems = if is_a { &self.a_elems } else { &self.b_elems };
        if elems.len() != factor.order() {
            return Err(Error::Hypothesis(format!(
                "{name}_m lists {} elements but the factor has order {}",
                elems.len(),
                factor.order()
            )));
        }
        for &e in elems {
            self.check_id(e)?;
        }
        for i in 0..elems.len() {
            for j in 0..elems.len() {
                let prod = self.mul(elems[i], elems[j]);
                let expected = elems[factor.mul(i as ElemId, j as ElemId) as usize];
                if prod != expected {
                    return Err(Error::Hypothesis(format!(
                        "{name}_m is not an isomorphic copy of {name}: images of {i} and {j} do not multiply correctly"
                    )));
                }
            }
        }
        let mut sorted = elems.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != elems.len() {
            return Err(Error::Hypothesis(format!("{name}_m embedding is not injective")));
        }
        Ok(())
    }

    fn generators(&self) -> Vec<(ElemId, Letter)> {
        let a = self.a_elems.iter().enumerate().skip(1);
        let b = self.b_elems.iter().enumerate().skip(1);
        a.map(|(i, &g)| (g, Letter::A(i as ElemId)))
            .chain(b.map(|(j, &g)| (g, Letter::B(j as ElemId))))
            .collect()
    }

    /// Computes `θ` by enumerating the cosets of `⟨⟨[A_m, B_m]⟩⟩`, failing when
    /// `A_m × B_m → Γ_m / ⟨⟨[A_m, B_m]⟩⟩` is not a bijection or `A_m ∪ B_m` does
    /// not generate.
    fn quotient_by_coset_enumeration(&self) -> Result<Vec<(ElemId, ElemId)>> {
        let n = self.order;
        let gens: Vec<ElemId> = self.generators().into_iter().map(|(g, _)| g).collect();

        let mut reached = vec![false; n];
        reached[0] = true;
        let mut queue = VecDeque::from([0u32]);
        let mut count = 1;
        while let Some(g) = queue.pop_front() {
            for &s in &gens {
                let h = self.mul(g, s) as usize;
                if !reached[h] {
                    reached[h] = true;
                    count += 1;
                    queue.push_back(h as ElemId);
                }
            }
        }
        if count != n {
            return Err(Error::Hypothesis(format!(
                "A_m ∪ B_m generates a subgroup of order {count}, not the whole group of order {n}"
            )));
        }

        let mut commutators = Vec::new();
        for &a in &self.a_elems {
            for &b in &self.b_elems {
                let c = self.mul(self.mul(a, b), self.mul(self.inv(a), self.inv(b)));
                if c != 0 && !commutators.contains(&c) {
                    commutators.push(c);
                }
            }
        }
        let mut in_closure = vec![false; n];
        in_closure[0] = true;
        let mut queue = VecDeque::from([0u32]);
        while let Some(x) = queue.pop_front() {
            let next = commutators
                .iter()
                .map(|&c| self.mul(x, c))
                .chain(gens.iter().map(|&g| self.mul(self.mul(g, x), self.inv(g))));
            for y in next.collect::<Vec<_>>() {
                if !in_closure[y as usize] {
                    in_closure[y as usize] = true;
                    queue.push_back(y);
                }
            }
        }
        let closure: Vec<ElemId> = (0..n as ElemId).filter(|&g| in_closure[g as usize]).collect();

        let unset = (ElemId::MAX, ElemId::MAX);
        let mut theta = vec![unset; n];
        for (i, &a) in self.a_elems.iter().enumerate() {
            for (j, &b) in self.b_elems.iter().enumerate() {
                let ab = self.mul(a, b);
                for &c in &closure {
                    let g = self.mul(ab, c) as usize;
                    if theta[g] != unset {
                        return Err(Error::Hypothesis(format!(
                            "A_m × B_m → Γ_m/⟨⟨[A_m,B_m]⟩⟩ is not injective (index {} instead of {})",
                            n / closure.len(),
                            self.a_elems.len() * self.b_elems.len()
                        )));
                    }
                    theta[g] = (i as ElemId, j as ElemId);
                }
            }
        }
        if theta.iter().any(|&t| t == unset) {
            return Err(Error::Hypothesis(format!(
                "A_m × B_m → Γ_m/⟨⟨[A_m,B_m]⟩⟩ is not surjective (index {} instead of {})",
                n / closure.len(),
                self.a_elems.len() * self.b_elems.len()
            )));
        }
        Ok(theta)
    }

    fn finish_derived(&mut self) -> Result<()> {
        let n = self.order;
        self.derived_index = vec![NOT_DERIVED; n];
        self.derived_elems.clear();
        for g in 0..n as ElemId {
            let (i, j) = self.theta(g);
            if i == 0 && j == 0 {
                self.derived_index[g as usize] = self.derived_elems.len() as u32;
                self.derived_elems.push(g);
            }
        }
        if self.derived_elems.first() != Some(&0) {
            return Err(Error::Invariant("identity missing from the derived subgroup".into()));
        }
        Ok(())
    }

    fn compute_word_metric(&mut self) -> Result<()> {
        let n = self.order;
        let gens = self.generators();
        let mut dist = vec![u32::MAX; n];
        let mut parent = vec![(0, Letter::A(0)); n];
        dist[0] = 0;
        let mut queue = VecDeque::from([0u32]);
        while let Some(g) = queue.pop_front() {
            for &(s, letter) in &gens {
                let h = self.mul(g, s) as usize;
                if dist[h] == u32::MAX {
                    dist[h] = dist[g as usize] + 1;
                    parent[h] = (g, letter);
                    queue.push_back(h as ElemId);
                }
            }
        }
        if dist.contains(&u32::MAX) {
            return Err(Error::Hypothesis("A_m ∪ B_m does not generate the group".into()));
        }
        self.word_len = dist;
        self.parent = parent;
        Ok(())
    }
}

impl fmt::Display for GroupBackend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.law {
            Law::Dihedral { l } => write!(f, "D_{l}"),
            Law::Table(_) => write!(f, "table(order {})", self.order),
        }
    }
}
