//! CSV tables for the command-line tools.

use std::io::Write;
use std::path::Path;

use crate::coupling::{IntegrabilityReport, SeriesReport};
use crate::error::{Error, Result};
use crate::schedule::{ParameterSchedule, Tail};
use crate::tiling::TileStats;

/// A real with 12 significant digits, trailing zeros dropped.
pub fn g12(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..12).contains(&exp) {
        let s = format!("{:.*}", (11 - exp).max(0) as usize, x);
        trim_fraction(&s).to_string()
    } else {
        let s = format!("{:.11e}", x);
        let (mant, e) = s.split_once('e').expect("scientific format");
        format!("{}e{}", trim_fraction(mant), e)
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let csv_err = |e: csv::Error| Error::Io(std::io::Error::other(e));
        w.write_record(&self.header).map_err(csv_err)?;
        for r in &self.rows {
            w.write_record(r).map_err(csv_err)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(std::io::Error::other(e.to_string())))?;
        String::from_utf8(bytes).map_err(|e| Error::Invariant(e.to_string()))
    }
}

/// Writes `contents` next to `path` and renames it into place.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    std::fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

pub fn schedule_table(s: &ParameterSchedule) -> Result<Table> {
    let mut t = Table::new(&["m", "k_m", "l_m"]);
    for m in 0..=s.depth() {
        let k = s.k_u64(m)?.expect("finite below the depth");
        t.push(vec![m.to_string(), k.to_string(), s.l_u64(m)?.to_string()]);
    }
    let next = (s.depth() + 1).to_string();
    match s.tail() {
        Tail::Infinite => t.push(vec![next, "inf".into(), s.l_u64(s.depth())?.to_string()]),
        Tail::Next(e) => t.push(vec![next, (s.kappa() as u128).pow(e).to_string(), String::new()]),
        Tail::Unknown => {}
    }
    Ok(t)
}

/// `n, |T_n|, ln|T_n|, R_n, ε_n, R'_n, ε'_n`; exact sizes when known.
pub fn stats_table(stats: &[TileStats], exact: Option<&[num_bigint::BigUint]>) -> Table {
    let mut t = Table::new(&["n", "T_n", "ln_T_n", "R_n", "eps_n", "R'_n", "eps'_n"]);
    for (i, s) in stats.iter().enumerate() {
        let size = exact.and_then(|e| e.get(i)).map(|v| v.to_string());
        t.push(vec![
            s.n.to_string(),
            size.clone().unwrap_or_else(|| g12(s.r_z())),
            g12(s.ln_cardinality),
            g12(s.r),
            g12(s.eps),
            size.unwrap_or_else(|| g12(s.r_z())),
            g12(s.eps_z()),
        ]);
    }
    t
}

pub fn histogram_table(reports: &[IntegrabilityReport]) -> Table {
    let mut t = Table::new(&["eps", "generator", "distance", "count"]);
    for r in reports {
        for g in r.delta_to_z.iter().chain(&r.z_to_delta) {
            for (d, c) in &g.histogram {
                t.push(vec![g12(r.eps), g.label.clone(), d.to_string(), c.to_string()]);
            }
        }
    }
    t
}

pub fn moments_table(reports: &[IntegrabilityReport]) -> Table {
    let mut t = Table::new(&[
        "eps",
        "generator",
        "c",
        "moment",
        "points",
        "out_of_truncation",
        "injective",
        "exhaustive",
        "seed",
    ]);
    for r in reports {
        for g in r.delta_to_z.iter().chain(&r.z_to_delta) {
            for &(c, m) in &g.moments {
                t.push(vec![
                    g12(r.eps),
                    g.label.clone(),
                    g12(c),
                    g12(m),
                    g.points.to_string(),
                    g.out_of_truncation.to_string(),
                    g.injective.map_or("unknown".into(), |b| b.to_string()),
                    r.exhaustive.to_string(),
                    r.seed.to_string(),
                ]);
            }
        }
    }
    t
}

pub fn series_table(reports: &[SeriesReport]) -> Table {
    let mut t = Table::new(&[
        "eps",
        "n",
        "psi_term",
        "ln_psi_term",
        "phi_term",
        "comparator",
        "phi_ratio",
        "psi_partial",
        "phi_partial",
        "ln_remark_term",
    ]);
    for r in reports {
        for row in &r.rows {
            t.push(vec![
                g12(r.eps),
                row.n.to_string(),
                g12(row.psi_term),
                g12(row.ln_psi_term),
                g12(row.phi_term),
                row.comparator.map(g12).unwrap_or_default(),
                row.phi_ratio().map(g12).unwrap_or_default(),
                g12(row.psi_partial),
                g12(row.phi_partial),
                row.ln_remark_term.map(g12).unwrap_or_default(),
            ]);
        }
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_digits() {
        assert_eq!(g12(0.5), "0.5");
        assert_eq!(g12(2.0), "2");
        assert_eq!(g12(1.0 / 3.0), "0.333333333333");
        assert_eq!(g12(123456.7890123456), "123456.789012");
        assert_eq!(g12(6.02214076e23), "6.02214076e23");
        assert_eq!(g12(-1.5e-9), "-1.5e-9");
        assert_eq!(g12(f64::INFINITY), "inf");
    }

    #[test]
    fn csv_header_and_quoting() {
        let mut t = Table::new(&["a", "b"]);
        t.push(vec!["1".into(), "x,y".into()]);
        assert_eq!(t.to_csv().unwrap(), "a,b\n1,\"x,y\"\n");
    }
}
