//! Profiles `ρ ∈ 𝒞` and the parameter sequences `(k_m)`, `(l_m)` they induce.
//!
//! `k_m = κ^{e_m}` and `l_m = λ^{d_m}` are stored by their exponents, so
//! schedules of any depth are exact even when the values overflow 64 bits.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Slack used when rounding a real logarithm up to an integer exponent.
const EXPONENT_SLACK: f64 = 1e-7;
/// Values beyond this are treated as infinite.
const FLOAT_HORIZON: f64 = 1e300;
const GRID_POINTS: usize = 1000;
const GRID_DECADES: f64 = 15.0;

type ProfileFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A prescribed profile `ρ : [1, ∞) → [1, ∞)`.
#[derive(Clone)]
pub enum Profile {
    /// `ρ(x) = x^{1/(1+α)}`.
    Power { alpha: f64 },
    /// `ρ(x) = x`.
    Identity,
    Custom { name: String, rho: ProfileFn },
}

impl fmt::Debug for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Profile::Power { alpha } => write!(f, "Power {{ alpha: {alpha} }}"),
            Profile::Identity => f.write_str("Identity"),
            Profile::Custom { name, .. } => write!(f, "Custom({name})"),
        }
    }
}

impl Profile {
    pub fn power(alpha: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha >= 0.0) {
            return Err(Error::Profile(format!("power profile needs α ≥ 0, got {alpha}")));
        }
        Ok(Profile::Power { alpha })
    }

    pub fn custom(name: impl Into<String>, rho: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Profile::Custom { name: name.into(), rho: Arc::new(rho) }
    }

    /// The exponent `α` of a power-type profile (`0` for the identity).
    pub fn alpha(&self) -> Option<f64> {
        match self {
            Profile::Power { alpha } => Some(*alpha),
            Profile::Identity => Some(0.0),
            Profile::Custom { .. } => None,
        }
    }

    pub fn rho(&self, x: f64) -> f64 {
        match self {
            Profile::Power { alpha } => x.powf(1.0 / (1.0 + alpha)),
            Profile::Identity => x,
            Profile::Custom { rho, .. } => rho(x),
        }
    }

    /// `f(x) = x / ρ(x)`.
    pub fn f(&self, x: f64) -> f64 {
        match self {
            Profile::Power { alpha } => x.powf(alpha / (1.0 + alpha)),
            Profile::Identity => 1.0,
            Profile::Custom { .. } => x / self.rho(x),
        }
    }

    /// Checks `ρ(1) = 1` and that `ρ` and `x ↦ x/ρ(x)` are non-decreasing on
    /// a logarithmic grid of `[1, 10^15]`.
    pub fn check_membership(&self) -> Result<()> {
        let one = self.rho(1.0);
        if (one - 1.0).abs() > 1e-9 {
            return Err(Error::Profile(format!("ρ(1) = {one}, expected 1")));
        }
        let mut prev: Option<(f64, f64, f64)> = None;
        for i in 0..GRID_POINTS {
            let x = 10f64.powf(GRID_DECADES * i as f64 / (GRID_POINTS - 1) as f64);
            let r = self.rho(x);
            if !r.is_finite() || r < 1.0 - 1e-12 {
                return Err(Error::Profile(format!("ρ({x:e}) = {r} is not a value in [1, ∞)")));
            }
            let q = x / r;
            if let Some((px, pr, pq)) = prev {
                if r < pr * (1.0 - 1e-12) {
                    return Err(Error::Profile(format!("ρ decreases between {px:e} and {x:e}")));
                }
                if q < pq * (1.0 - 1e-12) {
                    return Err(Error::Profile(format!("x/ρ(x) decreases between {px:e} and {x:e}")));
                }
            }
            prev = Some((x, r, q));
        }
        Ok(())
    }
}

/// What follows the last materialized level.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Tail {
    /// `k_{M+1} = ∞`; the schedule is complete.
    Infinite,
    /// `k_{M+1} = κ^e` is known but `l_{M+1}` is not.
    Next(u32),
    /// Nothing is known beyond level `M`.
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParameterSchedule {
    kappa: u64,
    lambda: u64,
    /// `e_m` with `k_m = κ^{e_m}`, for `m = 1..=M`.
    k_exp: Vec<u32>,
    /// `d_m` with `l_m = λ^{d_m}`, for `m = 0..=M`.
    l_exp: Vec<u32>,
    tail: Tail,
}

impl ParameterSchedule {
    /// A schedule given by exponents; `l_exp[0]` belongs to level `0`.
    pub fn from_exponents(kappa: u64, lambda: u64, k_exp: Vec<u32>, l_exp: Vec<u32>, tail: Tail) -> Result<Self> {
        if kappa < 2 || lambda < 2 {
            return Err(Error::Schedule(format!("κ = {kappa} and λ = {lambda} must both be at least 2")));
        }
        if l_exp.len() != k_exp.len() + 1 {
            return Err(Error::Schedule(format!(
                "{} finite k-levels need {} l-values, got {}",
                k_exp.len(),
                k_exp.len() + 1,
                l_exp.len()
            )));
        }
        // k_{m+1} ≥ 2k_m holds for powers of κ ≥ 2 exactly when exponents increase.
        if k_exp.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Hypothesis("k_{m+1} ≥ 2k_m fails: k exponents must increase".into()));
        }
        if l_exp.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::Hypothesis("(l_m) must be non-decreasing".into()));
        }
        if let (Tail::Next(e), Some(&last)) = (tail, k_exp.last()) {
            if e <= last {
                return Err(Error::Hypothesis("k_{m+1} ≥ 2k_m fails at the tail".into()));
            }
        }
        Ok(Self { kappa, lambda, k_exp, l_exp, tail })
    }

    /// A schedule from explicit values; `ks[0]` must be `Some(0)` and `None`
    /// marks `∞` (only allowed as the last entry).
    pub fn explicit(kappa: u64, lambda: u64, ks: &[Option<u64>], ls: &[u64]) -> Result<Self> {
        if ks.first() != Some(&Some(0)) {
            return Err(Error::Schedule("k_0 must be 0".into()));
        }
        let (finite, tail) = match ks.iter().position(Option::is_none) {
            Some(i) if i + 1 == ks.len() => (&ks[1..i], Tail::Infinite),
            Some(_) => return Err(Error::Schedule("once k_m = ∞ every later k must be ∞".into())),
            None => (&ks[1..], Tail::Unknown),
        };
        let k_exp = finite
            .iter()
            .map(|k| exact_log(k.unwrap(), kappa).ok_or_else(|| Error::Hypothesis(format!("k = {} is not a power of κ = {kappa}", k.unwrap()))))
            .collect::<Result<Vec<_>>>()?;
        if ls.len() < k_exp.len() + 1 {
            return Err(Error::Schedule(format!("need {} l-values, got {}", k_exp.len() + 1, ls.len())));
        }
        let l_exp = ls[..k_exp.len() + 1]
            .iter()
            .map(|&l| exact_log(l, lambda).ok_or_else(|| Error::Hypothesis(format!("l = {l} is not a power of λ = {lambda}"))))
            .collect::<Result<Vec<_>>>()?;
        Self::from_exponents(kappa, lambda, k_exp, l_exp, tail)
    }

    pub fn kappa(&self) -> u64 {
        self.kappa
    }

    pub fn lambda(&self) -> u64 {
        self.lambda
    }

    /// Number `M` of finite levels `m ≥ 1`.
    pub fn depth(&self) -> usize {
        self.k_exp.len()
    }

    pub fn tail(&self) -> Tail {
        self.tail
    }

    pub fn terminated(&self) -> bool {
        self.tail == Tail::Infinite
    }

    /// `e_m` for `1 ≤ m ≤ M`.
    pub fn k_exponent(&self, m: usize) -> Option<u32> {
        (m >= 1).then(|| self.k_exp.get(m - 1).copied()).flatten()
    }

    pub fn l_exponent(&self, m: usize) -> Option<u32> {
        self.l_exp.get(m).copied()
    }

    /// `k_m` as a real (`∞` for levels past a terminated schedule).
    pub fn k_f64(&self, m: usize) -> Result<f64> {
        if m == 0 {
            return Ok(0.0);
        }
        match self.k_exp.get(m - 1) {
            Some(&e) => Ok((self.kappa as f64).powi(e as i32)),
            None => match self.tail {
                Tail::Infinite => Ok(f64::INFINITY),
                Tail::Next(e) if m == self.depth() + 1 => Ok((self.kappa as f64).powi(e as i32)),
                _ => Err(Error::Schedule(format!("k_{m} lies beyond the synthesized depth {}", self.depth()))),
            },
        }
    }

    /// `k_m` as an integer; `None` is `∞`.
    pub fn k_u64(&self, m: usize) -> Result<Option<u64>> {
        if m == 0 {
            return Ok(Some(0));
        }
        match self.k_exp.get(m - 1) {
            Some(&e) => checked_pow(self.kappa, e).map(Some),
            None if self.tail == Tail::Infinite => Ok(None),
            None => Err(Error::Schedule(format!("k_{m} lies beyond the synthesized depth {}", self.depth()))),
        }
    }

    /// `l_m`; levels past a terminated schedule repeat `l_M`.
    pub fn l_f64(&self, m: usize) -> Result<f64> {
        Ok((self.lambda as f64).powi(self.l_exp_at(m)? as i32))
    }

    pub fn ln_l(&self, m: usize) -> Result<f64> {
        Ok(self.l_exp_at(m)? as f64 * (self.lambda as f64).ln())
    }

    pub fn l_u64(&self, m: usize) -> Result<u64> {
        checked_pow(self.lambda, self.l_exp_at(m)?)
    }

    fn l_exp_at(&self, m: usize) -> Result<u32> {
        match self.l_exp.get(m) {
            Some(&d) => Ok(d),
            None if self.tail == Tail::Infinite => Ok(*self.l_exp.last().expect("l_0 is always present")),
            None => Err(Error::Schedule(format!("l_{m} lies beyond the synthesized depth {}", self.depth()))),
        }
    }

    /// `𝔩(n)`: the level with `k_{𝔩(n)} ≤ n < k_{𝔩(n)+1}`.
    pub fn little_l(&self, n: u128) -> Result<usize> {
        let count = self
            .k_exp
            .iter()
            .take_while(|&&e| pow_u128(self.kappa, e).map_or(false, |k| k <= n))
            .count();
        if count == self.depth() {
            let beyond = match self.tail {
                Tail::Infinite => false,
                Tail::Next(e) => pow_u128(self.kappa, e).map_or(false, |k| k <= n),
                Tail::Unknown => true,
            };
            if beyond {
                return Err(Error::Schedule(format!("𝔩({n}) needs levels past depth {}", self.depth())));
            }
        }
        Ok(count)
    }

    /// `𝔏(n) = 𝔩(κ^n − 1)`, the number of levels with `e_m < n`.
    pub fn big_l(&self, n: u32) -> Result<usize> {
        let count = self.k_exp.iter().take_while(|&&e| e < n).count();
        if count == self.depth() {
            let beyond = match self.tail {
                Tail::Infinite => false,
                Tail::Next(e) => e < n,
                Tail::Unknown => true,
            };
            if beyond {
                return Err(Error::Schedule(format!("𝔏({n}) needs levels past depth {}", self.depth())));
            }
        }
        Ok(count)
    }

    /// Largest `x` for which [`fbar`](Self::fbar) is determined.
    pub fn fbar_coverage(&self) -> f64 {
        let m = self.depth();
        let l = self.l_f64(m).unwrap_or(f64::NAN);
        match self.tail {
            Tail::Infinite => f64::INFINITY,
            Tail::Next(e) => (self.kappa as f64).powi(e as i32) * l,
            Tail::Unknown => self.k_f64(m).unwrap_or(0.0) * l,
        }
    }

    /// The piecewise approximation of `f`: `l_m` on `[k_m l_m, k_{m+1} l_m]`
    /// and `x / k_{m+1}` on `[k_{m+1} l_m, k_{m+1} l_{m+1}]`.
    pub fn fbar(&self, x: f64) -> Result<f64> {
        if !(x >= 1.0 - 1e-12) {
            return Err(Error::Schedule(format!("f̄ is defined on [1, ∞), got {x}")));
        }
        let x = x.max(1.0);
        if x > self.fbar_coverage() {
            return Err(Error::Schedule(format!(
                "x = {x:e} lies beyond the covered range {:e}",
                self.fbar_coverage()
            )));
        }
        let mut m = 0;
        loop {
            let l = self.l_f64(m)?;
            let k_next = self.k_f64(m + 1)?;
            if x <= k_next * l {
                return Ok(l);
            }
            let l_next = self.l_f64(m + 1)?;
            if x <= k_next * l_next {
                return Ok(x / k_next);
            }
            m += 1;
        }
    }

    /// `ρ̄(x) = x / f̄(x)`.
    pub fn rhobar(&self, x: f64) -> Result<f64> {
        Ok(x / self.fbar(x)?)
    }

    /// Extremes of `f̄/f` on a logarithmic grid of `[1, x_max]`.
    pub fn fbar_ratio_range(&self, profile: &Profile, x_max: f64, points: usize) -> Result<(f64, f64)> {
        let mut lo = f64::INFINITY;
        let mut hi = 0f64;
        for i in 0..points {
            let x = x_max.powf(i as f64 / (points - 1).max(1) as f64);
            let r = self.fbar(x)? / profile.f(x);
            lo = lo.min(r);
            hi = hi.max(r);
        }
        Ok((lo, hi))
    }

    /// `𝔏(n+1) ∈ {𝔏(n), 𝔏(n)+1}`, with `k_{𝔏(n+1)} = κ^n` in the second case.
    pub fn check_landing(&self, n_max: u32) -> Result<()> {
        for n in 0..n_max {
            let (a, b) = (self.big_l(n)?, self.big_l(n + 1)?);
            if b == a + 1 {
                if self.k_exponent(b) != Some(n) {
                    return Err(Error::Invariant(format!("𝔏({}) = 𝔏({n}) + 1 but k_{b} ≠ κ^{n}", n + 1)));
                }
            } else if b != a {
                return Err(Error::Invariant(format!("𝔏 jumps from {a} to {b} at n = {n}")));
            }
        }
        Ok(())
    }

    /// `c'·ρ̄(x') ≤ ρ̄(c'x')` for `0 < c' < 1`, `x' ≥ 1/c'`, sampled on a grid.
    pub fn check_rhobar_scaling(&self, x_max: f64) -> Result<()> {
        let x_max = x_max.min(self.fbar_coverage());
        for ci in 1..20 {
            let c = ci as f64 / 20.0;
            for xi in 0..200 {
                let x = (1.0 / c) * (x_max * c).powf(xi as f64 / 199.0);
                let lhs = c * self.rhobar(x)?;
                let rhs = self.rhobar(c * x)?;
                if lhs > rhs * (1.0 + 1e-9) {
                    return Err(Error::Invariant(format!("c'ρ̄(x') > ρ̄(c'x') at c' = {c}, x' = {x:e}")));
                }
            }
        }
        Ok(())
    }
}

/// Builds `(k_m)`, `(l_m)` from `ρ` level by level.
///
/// From `(k_m, l_m)`: `x* = sup{x ≥ k_m l_m : f(x) ≤ l_m}`; `k_{m+1}` is the
/// smallest power of `κ` that is at least `x*/l_m` and at least `2k_m`
/// (`∞` when `x* = ∞`); `l_{m+1}` is the smallest power of `λ` at least the
/// solution of `l = f(k_{m+1} l)`. If that power does not exceed `l_m`,
/// `k_{m+1}` moves to the next power of `κ`.
pub fn synthesize(profile: &Profile, kappa: u64, lambda: u64, depth: usize) -> Result<ParameterSchedule> {
    if kappa < 2 || lambda < 2 {
        return Err(Error::Schedule(format!("κ = {kappa} and λ = {lambda} must both be at least 2")));
    }
    profile.check_membership()?;
    let (kf, lf) = (kappa as f64, lambda as f64);
    let mut k_exp: Vec<u32> = Vec::new();
    let mut l_exp: Vec<u32> = vec![0];
    let mut tail = Tail::Infinite;
    for m in 0..=depth {
        let l_m = lf.powi(l_exp[m] as i32);
        let k_m = if m == 0 { 0.0 } else { kf.powi(k_exp[m - 1] as i32) };
        let Some(x_star) = plateau_end(profile, l_m, (k_m * l_m).max(1.0)) else {
            tail = Tail::Infinite;
            break;
        };
        let min_e = if m == 0 { 0 } else { k_exp[m - 1] + 1 };
        let mut e = ceil_log(x_star / l_m, kf).max(min_e);
        if m == depth {
            tail = Tail::Next(e);
            break;
        }
        let mut bumps = 0;
        let d = loop {
            let k = kf.powi(e as i32);
            if !k.is_finite() || k > FLOAT_HORIZON {
                return Err(Error::Schedule(format!("k_{} overflows the floating-point range", m + 1)));
            }
            let d = ceil_log(solve_fixed_point(profile, k)?, lf);
            if d > l_exp[m] {
                break d;
            }
            e += 1;
            bumps += 1;
            if bumps > 256 {
                return Err(Error::Schedule(format!("l_{} does not grow past l_{m}", m + 1)));
            }
        };
        k_exp.push(e);
        l_exp.push(d);
    }
    ParameterSchedule::from_exponents(kappa, lambda, k_exp, l_exp, tail)
}

/// `sup{x ≥ start : f(x) ≤ level}`, or `None` when unbounded.
fn plateau_end(profile: &Profile, level: f64, start: f64) -> Option<f64> {
    let tol = level * 1e-12;
    if profile.f(start) > level + tol {
        return Some(start);
    }
    let (mut lo, mut hi) = (start, start * 2.0);
    while profile.f(hi) <= level + tol {
        lo = hi;
        hi *= 2.0;
        if hi > FLOAT_HORIZON {
            return None;
        }
    }
    for _ in 0..200 {
        let mid = (lo * hi).sqrt();
        if profile.f(mid) <= level + tol {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi / lo - 1.0 < 1e-12 {
            break;
        }
    }
    Some(hi)
}

/// The solution of `l = f(k·l)`, unique because `f(x)/x` is non-increasing.
fn solve_fixed_point(profile: &Profile, k: f64) -> Result<f64> {
    let ratio = |l: f64| profile.f(k * l) / l;
    if ratio(1.0) <= 1.0 {
        return Ok(1.0);
    }
    let (mut lo, mut hi) = (1.0, 2.0);
    while ratio(hi) > 1.0 {
        lo = hi;
        hi *= 2.0;
        if hi > FLOAT_HORIZON {
            return Err(Error::Profile(format!("l = f({k:e}·l) has no solution")));
        }
    }
    for _ in 0..200 {
        let mid = (lo * hi).sqrt();
        if ratio(mid) > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi / lo - 1.0 < 1e-12 {
            break;
        }
    }
    Ok(hi)
}

/// Smallest `e ≥ 0` with `base^e ≥ v`, absorbing float error.
fn ceil_log(v: f64, base: f64) -> u32 {
    if v <= 1.0 {
        return 0;
    }
    (v.ln() / base.ln() - EXPONENT_SLACK).ceil().max(0.0) as u32
}

fn exact_log(v: u64, base: u64) -> Option<u32> {
    let mut e = 0;
    let mut p = 1u64;
    while p < v {
        p = p.checked_mul(base)?;
        e += 1;
    }
    (p == v).then_some(e)
}

fn pow_u128(base: u64, e: u32) -> Option<u128> {
    (base as u128).checked_pow(e)
}

fn checked_pow(base: u64, e: u32) -> Result<u64> {
    base.checked_pow(e)
        .ok_or_else(|| Error::Schedule(format!("{base}^{e} does not fit in 64 bits")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn power(alpha: f64) -> Profile {
        Profile::power(alpha).unwrap()
    }

    #[test]
    fn identity_profile_is_lamplighter() {
        let s = synthesize(&Profile::Identity, 2, 2, 10).unwrap();
        assert_eq!(s.depth(), 0);
        assert!(s.terminated());
        for m in 0..20 {
            assert_eq!(s.l_f64(m).unwrap(), 1.0);
        }
        assert_eq!(s.k_u64(1).unwrap(), None);
        assert_eq!(s.fbar(1e12).unwrap(), 1.0);
    }

    #[test]
    fn power_profiles_reproduce_geometric_schedules() {
        for kappa in [2u64, 3, 5] {
            for alpha in [1u32, 2] {
                let lambda = kappa.pow(alpha);
                let s = synthesize(&power(alpha as f64), kappa, lambda, 12).unwrap();
                for m in 1..=12 {
                    assert_eq!(s.k_exponent(m), Some(m as u32), "κ={kappa} α={alpha} m={m}");
                    assert_eq!(s.l_f64(m).unwrap(), (kappa as f64).powi((alpha as usize * m) as i32));
                }
            }
        }
        // λ = 2 represents 2^{αm} as well
        let s = synthesize(&power(2.0), 2, 2, 40).unwrap();
        for m in 1..=40 {
            assert_eq!(s.k_exponent(m), Some(m as u32));
            assert_eq!(s.l_exponent(m), Some(2 * m as u32));
        }
    }

    #[test]
    fn fbar_examples() {
        let s = synthesize(&power(1.0), 2, 2, 20).unwrap();
        assert_eq!(s.fbar(4.0).unwrap(), 2.0);
        for m in 0..15 {
            let x = s.k_f64(m).unwrap() * s.l_f64(m).unwrap();
            if x >= 1.0 {
                assert_eq!(s.fbar(x).unwrap(), s.l_f64(m).unwrap());
            }
        }
        for n in 1..20u32 {
            let big = s.big_l(n).unwrap();
            let x = 2f64.powi(n as i32) * s.l_f64(big).unwrap();
            assert_eq!(s.rhobar(x).unwrap(), 2f64.powi(n as i32));
        }
    }

    #[test]
    fn index_maps() {
        let s = synthesize(&power(1.0), 2, 2, 20).unwrap();
        assert_eq!(s.little_l(6).unwrap(), 2);
        assert_eq!(s.little_l(0).unwrap(), 0);
        for n in 1..=20 {
            assert_eq!(s.big_l(n).unwrap(), n as usize - 1);
        }
        s.check_landing(20).unwrap();
        assert!(s.big_l(25).is_err());
    }

    #[test]
    fn fbar_is_monotone_and_continuous() {
        let s = synthesize(&power(1.0), 3, 3, 15).unwrap();
        let mut prev = (0.0, 0.0);
        for i in 0..2000 {
            let x = 10f64.powf(i as f64 * 12.0 / 1999.0);
            let (f, r) = (s.fbar(x).unwrap(), s.rhobar(x).unwrap());
            assert!(f >= prev.0 * (1.0 - 1e-12) && r >= prev.1 * (1.0 - 1e-12));
            prev = (f, r);
        }
    }

    #[test]
    fn generic_profile_stays_comparable() {
        let p = Profile::custom("x/(1+ln x)", |x: f64| x / (1.0 + x.ln()));
        p.check_membership().unwrap();
        let s = synthesize(&p, 2, 2, 6).unwrap();
        assert!(s.k_exp.windows(2).all(|w| w[1] > w[0]));
        let (lo, hi) = s.fbar_ratio_range(&p, s.fbar_coverage().min(1e300), 500).unwrap();
        assert!(lo > 0.0 && hi.is_finite());
        s.check_rhobar_scaling(1e12).unwrap();
    }

    #[test]
    fn non_member_profiles_rejected() {
        let decreasing = Profile::custom("bad", |x: f64| if x < 10.0 { x } else { 1.0 });
        assert!(matches!(synthesize(&decreasing, 2, 2, 3), Err(Error::Profile(_))));
        let superlinear = Profile::custom("square", |x: f64| x * x);
        assert!(superlinear.check_membership().is_err());
        assert!(Profile::power(-1.0).is_err());
    }

    #[test]
    fn explicit_schedule_validation() {
        let s = ParameterSchedule::explicit(2, 2, &[Some(0), Some(2), None], &[1, 4]).unwrap();
        assert_eq!(s.depth(), 1);
        assert!(s.terminated());
        assert_eq!(s.k_u64(1).unwrap(), Some(2));
        assert_eq!(s.l_u64(1).unwrap(), 4);
        assert_eq!(s.big_l(1).unwrap(), 0);
        assert_eq!(s.big_l(2).unwrap(), 1);
        assert!(ParameterSchedule::explicit(2, 2, &[Some(0), Some(3)], &[1, 2]).is_err());
        assert!(ParameterSchedule::explicit(2, 2, &[Some(0), Some(4), Some(4)], &[1, 2, 4]).is_err());
    }
}
