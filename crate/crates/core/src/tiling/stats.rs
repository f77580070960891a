use crate::error::{Error, Result};
use crate::schedule::ParameterSchedule;

/// Constants of the diameter and cardinality estimates, computed from the
/// finite schedule. `ln|Γ'_m|` is supplied per level: either the true value
/// of a materialized backend or the synthetic `c_1 l_m + c_2`.
#[derive(Clone, Debug)]
pub struct TileConstants {
    schedule: ParameterSchedule,
    ln_base: f64,
    ln_derived: Vec<f64>,
    /// `max_j Σ_{m ≤ j} (3 l_m + 1) / l_j`.
    pub c_l: f64,
    /// `4500 C_l`.
    pub c_r: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    /// Synthetic size parameters, when used.
    pub synthetic: Option<(f64, f64)>,
}

/// Size and quantification of `T_n` and of the matching interval of `ℤ`.
#[derive(Clone, Debug, PartialEq)]
pub struct TileStats {
    pub n: u32,
    pub ln_cardinality: f64,
    /// `R_n = C_R κ^n l_{𝔏(n)}`.
    pub r: f64,
    /// `ε_n = 2/κ^n`.
    pub eps: f64,
    /// `ln R'_n = ln|T_n|`.
    pub ln_r_z: f64,
    /// `ln ε'_n = ln 2 − ln|T_n|`.
    pub ln_eps_z: f64,
    /// `C_2 κ^{n−1} l_{𝔏(n)}` and `C_3 κ^n l_{𝔏(n)}`.
    pub lower: f64,
    pub upper: f64,
}

impl TileStats {
    pub fn bounds_hold(&self) -> bool {
        let slack = 1e-9 * self.ln_cardinality.abs().max(1.0);
        self.lower <= self.ln_cardinality + slack && self.ln_cardinality <= self.upper + slack
    }

    pub fn r_z(&self) -> f64 {
        self.ln_r_z.exp()
    }

    pub fn eps_z(&self) -> f64 {
        self.ln_eps_z.exp()
    }
}

impl TileConstants {
    /// Synthetic mode: `ln|Γ'_m| = c_1 l_m + c_2`.
    pub fn synthetic(schedule: &ParameterSchedule, base_order: usize, c1: f64, c2: f64) -> Result<Self> {
        let sizes = (1..=schedule.depth()).map(|m| Ok(c1 * schedule.l_f64(m)? + c2)).collect::<Result<Vec<_>>>()?;
        let mut c = Self::with_sizes(schedule, base_order, sizes)?;
        c.synthetic = Some((c1, c2));
        Ok(c)
    }

    /// `ln_derived[m − 1] = ln|Γ'_m|` for `m = 1..=M`.
    pub fn with_sizes(schedule: &ParameterSchedule, base_order: usize, ln_derived: Vec<f64>) -> Result<Self> {
        if ln_derived.len() != schedule.depth() {
            return Err(Error::Invariant(format!(
                "{} derived sizes for a schedule of depth {}",
                ln_derived.len(),
                schedule.depth()
            )));
        }
        if base_order < 2 {
            return Err(Error::Hypothesis("|A||B| must be at least 2".into()));
        }
        let depth = schedule.depth();
        let l = (0..=depth).map(|m| schedule.l_f64(m)).collect::<Result<Vec<_>>>()?;
        let mut c_l: f64 = 0.0;
        let mut acc = 0.0;
        for j in 0..=depth {
            acc += 3.0 * l[j] + 1.0;
            c_l = c_l.max(acc / l[j]);
        }
        let mut c1: f64 = 0.0;
        let mut acc = 0.0;
        for j in 1..=depth {
            acc += ln_derived[j - 1];
            c1 = c1.max(acc / l[j]);
        }
        let ln_base = (base_order as f64).ln();
        let kappa = schedule.kappa() as f64;
        let c2 = (1..=depth).map(|j| ln_derived[j - 1] / l[j]).fold(kappa * ln_base / l[0], f64::min);
        let c3 = kappa.ln() + ln_base + c1;
        Ok(Self {
            schedule: schedule.clone(),
            ln_base,
            ln_derived,
            c_l,
            c_r: 4500.0 * c_l,
            c1,
            c2,
            c3,
            synthetic: None,
        })
    }

    pub fn schedule(&self) -> &ParameterSchedule {
        &self.schedule
    }

    /// `ln|T_n| = n ln κ + κ^n ln(|A||B|) + Σ_{m ≤ 𝔏(n)} (κ^n − k_m) ln|Γ'_m|`.
    pub fn ln_cardinality(&self, n: u32) -> Result<f64> {
        let s = &self.schedule;
        let q = (s.kappa() as f64).powi(n as i32);
        let mut total = n as f64 * (s.kappa() as f64).ln() + q * self.ln_base;
        for m in 1..=s.big_l(n)? {
            total += (q - s.k_f64(m)?) * self.ln_derived[m - 1];
        }
        Ok(total)
    }

    pub fn stats(&self, n: u32) -> Result<TileStats> {
        let s = &self.schedule;
        let kappa = s.kappa() as f64;
        let q = kappa.powi(n as i32);
        let l = s.l_f64(s.big_l(n)?)?;
        let ln_card = self.ln_cardinality(n)?;
        Ok(TileStats {
            n,
            ln_cardinality: ln_card,
            r: self.c_r * q * l,
            eps: 2.0 / q,
            ln_r_z: ln_card,
            ln_eps_z: 2f64.ln() - ln_card,
            lower: self.c2 * q / kappa * l,
            upper: self.c3 * q * l,
        })
    }
}
