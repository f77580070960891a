use crate::error::{Error, Result};
use crate::schedule::Profile;
use crate::tiling::TileConstants;

/// `φ_ε` from `ln x`: `ρ(ln x) / (ln ρ(ln x))^{1+ε}`. The argument of `ρ` is
/// floored at `1` and its value at `e^{1+ε}`, past which the quotient is
/// increasing, so small distances give a constant instead of a pole.
pub fn phi_eps_ln(profile: &Profile, eps: f64, ln_x: f64) -> f64 {
    let y = profile.rho(ln_x.max(1.0)).max((1.0 + eps).exp());
    y / y.ln().powf(1.0 + eps)
}

pub fn phi_eps(profile: &Profile, eps: f64, x: f64) -> f64 {
    phi_eps_ln(profile, eps, x.max(f64::MIN_POSITIVE).ln())
}

#[derive(Clone, Debug, PartialEq)]
pub struct SeriesRow {
    pub n: u32,
    /// `ln[Ψ(2R_n) ε'_{n−1}]` with `Ψ = exp ∘ ρ`.
    pub ln_psi_term: f64,
    pub psi_term: f64,
    /// `φ_ε(2R'_n) ε_{n−1}`.
    pub phi_term: f64,
    /// `κ / ((n−1) ln κ)^{1+ε}`; undefined at `n = 1`.
    pub comparator: Option<f64>,
    pub psi_partial: f64,
    pub phi_partial: f64,
    /// `ln[exp(c_φ 2R_n) ε'_{n−1}]` for power-type profiles.
    pub ln_remark_term: Option<f64>,
}

impl SeriesRow {
    pub fn phi_ratio(&self) -> Option<f64> {
        self.comparator.map(|c| self.phi_term / c)
    }
}

#[derive(Clone, Debug)]
pub struct SeriesReport {
    pub eps: f64,
    pub rows: Vec<SeriesRow>,
    /// `c_φ = C_2 / (2 C_R 2^{3+α})`, half the admissible bound.
    pub c_phi: Option<f64>,
}

impl SeriesReport {
    pub fn row(&self, n: u32) -> Option<&SeriesRow> {
        self.rows.iter().find(|r| r.n == n)
    }

    /// Smallest `n_0` from which the `Ψ`-terms decrease strictly through the
    /// end of the table.
    pub fn psi_decreasing_from(&self) -> Option<u32> {
        let last = self.rows.len().checked_sub(1)?;
        let mut i = last;
        while i > 0 && self.rows[i].ln_psi_term < self.rows[i - 1].ln_psi_term {
            i -= 1;
        }
        (i < last).then(|| self.rows[i].n)
    }

    /// Same for the `c_φ` variant.
    pub fn remark_decreasing_from(&self) -> Option<u32> {
        let terms: Vec<f64> = self.rows.iter().map(|r| r.ln_remark_term).collect::<Option<_>>()?;
        let last = terms.len().checked_sub(1)?;
        let mut i = last;
        while i > 0 && terms[i] < terms[i - 1] {
            i -= 1;
        }
        (i < last).then(|| self.rows[i].n)
    }

    /// `max φ-term / comparator` over `lo ≤ n ≤ hi`.
    pub fn phi_ratio_max(&self, lo: u32, hi: u32) -> Option<f64> {
        self.rows
            .iter()
            .filter(|r| (lo..=hi).contains(&r.n))
            .map(|r| r.phi_ratio())
            .collect::<Option<Vec<_>>>()?
            .into_iter()
            .reduce(f64::max)
    }
}

/// Tabulates both series of the integrability argument for `1 ≤ n ≤ n_max`.
pub fn series_report(profile: &Profile, constants: &TileConstants, eps: f64, n_max: u32) -> Result<SeriesReport> {
    if !(eps > 0.0) {
        return Err(Error::Config(format!("ε must be positive, got {eps}")));
    }
    let kappa = constants.schedule().kappa() as f64;
    let c_phi = profile.alpha().map(|a| constants.c2 / (2.0 * constants.c_r * 2f64.powf(3.0 + a)));
    let mut rows = Vec::with_capacity(n_max as usize);
    let (mut psi_partial, mut phi_partial) = (0.0, 0.0);
    for n in 1..=n_max {
        let here = constants.stats(n)?;
        let prev = constants.stats(n - 1)?;
        let ln_eps_z_prev = prev.ln_eps_z;
        let ln_psi_term = profile.rho(2.0 * here.r) + ln_eps_z_prev;
        let psi_term = ln_psi_term.exp();
        let eps_prev = 2.0 / kappa.powi(n as i32 - 1);
        let phi_term = phi_eps_ln(profile, eps, 2f64.ln() + here.ln_cardinality) * eps_prev;
        let comparator = (n >= 2).then(|| kappa / ((n - 1) as f64 * kappa.ln()).powf(1.0 + eps));
        psi_partial += psi_term;
        phi_partial += phi_term;
        rows.push(SeriesRow {
            n,
            ln_psi_term,
            psi_term,
            phi_term,
            comparator,
            psi_partial,
            phi_partial,
            ln_remark_term: c_phi.map(|c| c * 2.0 * here.r + ln_eps_z_prev),
        });
    }
    Ok(SeriesReport { eps, rows, c_phi })
}
