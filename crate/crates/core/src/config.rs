//! Plain `key = value` run configuration.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use crate::delta::{DiagonalProduct, Level};
use crate::error::{Error, Result};
use crate::groups::{FiniteTable, GroupBackend};
use crate::schedule::{synthesize, ParameterSchedule, Profile, Tail};
use crate::tiling::{TileConstants, Tiling, DEFAULT_CAP};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Materialized,
    Synthetic,
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "materialized" => Ok(Mode::Materialized),
            "synthetic" => Ok(Mode::Synthetic),
            _ => Err(Error::Config(format!("mode must be materialized or synthetic, got {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Backend {
    /// `A = B = ℤ/2`, `Γ_m = D_{l_m}`.
    Dihedral,
    /// Cyclic `A`, `B` and no finite level past `0`.
    Lamplighter { a_order: usize, b_order: usize },
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub profile: Option<Profile>,
    pub kappa: u64,
    pub lambda: u64,
    pub depth: usize,
    pub backend: Backend,
    /// Explicit `k_0, k_1, …` (`None` is `∞`) and `l_0, l_1, …`.
    pub explicit: Option<(Vec<Option<u64>>, Vec<u64>)>,
    pub cap: u64,
    pub level: u32,
    pub eps: Vec<f64>,
    pub c_grid: Vec<f64>,
    pub seed: u64,
    pub samples: u64,
    pub mode: Mode,
    pub out: PathBuf,
    pub c1: f64,
    pub c2: f64,
    pub exact_node_cap: usize,
    pub exact_samples: u64,
    pub n_max: u32,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            profile: None,
            kappa: 2,
            lambda: 2,
            depth: 8,
            backend: Backend::Dihedral,
            explicit: None,
            cap: DEFAULT_CAP,
            level: 1,
            eps: vec![0.5],
            c_grid: crate::coupling::C_GRID.to_vec(),
            seed: 0,
            samples: 100_000,
            mode: Mode::Materialized,
            out: PathBuf::from("out"),
            c1: 1.0,
            c2: 0.0,
            exact_node_cap: 100_000,
            exact_samples: 0,
            n_max: 40,
        }
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse().map_err(|_| Error::Config(format!("{key}: cannot parse {v:?}")))
}

fn parse_list<T: std::str::FromStr>(key: &str, v: &str) -> Result<Vec<T>> {
    v.split(',').map(|s| parse_num(key, s.trim())).collect()
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut c = RunConfig::default();
        let (mut family, mut alpha) = (None::<String>, None::<f64>);
        let (mut ks, mut ls) = (None, None);
        let (mut a_order, mut b_order) = (2usize, 2usize);
        let mut backend = "dihedral".to_string();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .map(|(k, v)| (k.trim(), v.trim()))
                .ok_or_else(|| Error::Parse(format!("line {}: expected key = value", lineno + 1)))?;
            match key {
                "profile.family" => family = Some(value.to_string()),
                "profile.alpha" => alpha = Some(parse_num(key, value)?),
                "kappa" => c.kappa = parse_num(key, value)?,
                "lambda" => c.lambda = parse_num(key, value)?,
                "depth" => c.depth = parse_num(key, value)?,
                "backend" => backend = value.to_string(),
                "backend.a_order" => a_order = parse_num(key, value)?,
                "backend.b_order" => b_order = parse_num(key, value)?,
                "schedule.k" => {
                    ks = Some(
                        value
                            .split(',')
                            .map(|s| match s.trim() {
                                "inf" | "∞" => Ok(None),
                                s => parse_num(key, s).map(Some),
                            })
                            .collect::<Result<Vec<_>>>()?,
                    )
                }
                "schedule.l" => ls = Some(parse_list(key, value)?),
                "cap" => c.cap = parse_num(key, value)?,
                "level" => c.level = parse_num(key, value)?,
                "eps" => c.eps = parse_list(key, value)?,
                "c_grid" => c.c_grid = parse_list(key, value)?,
                "seed" => c.seed = parse_num(key, value)?,
                "samples" => c.samples = parse_num(key, value)?,
                "mode" => c.mode = value.parse()?,
                "out" => c.out = PathBuf::from(value),
                "synthetic.c1" => c.c1 = parse_num(key, value)?,
                "synthetic.c2" => c.c2 = parse_num(key, value)?,
                "exact.node_cap" => c.exact_node_cap = parse_num(key, value)?,
                "exact.samples" => c.exact_samples = parse_num(key, value)?,
                "report.n_max" => c.n_max = parse_num(key, value)?,
                _ => return Err(Error::Config(format!("line {}: unknown key {key:?}", lineno + 1))),
            }
        }
        c.profile = match family.as_deref() {
            None => None,
            Some("identity") => Some(Profile::Identity),
            Some("power") => Some(Profile::power(
                alpha.ok_or_else(|| Error::Config("profile.family = power needs profile.alpha".into()))?,
            )?),
            Some(f) => return Err(Error::Config(format!("unknown profile family {f:?}"))),
        };
        c.backend = match backend.as_str() {
            "dihedral" => Backend::Dihedral,
            "lamplighter" => Backend::Lamplighter { a_order, b_order },
            b => return Err(Error::Config(format!("unknown backend {b:?}"))),
        };
        c.explicit = match (ks, ls) {
            (Some(k), Some(l)) => Some((k, l)),
            (None, None) => None,
            _ => return Err(Error::Config("schedule.k and schedule.l go together".into())),
        };
        if c.explicit.is_none() && c.profile.is_none() {
            return Err(Error::Config("give either profile.family or schedule.k/schedule.l".into()));
        }
        Ok(c)
    }

    pub fn schedule(&self) -> Result<ParameterSchedule> {
        match (&self.explicit, &self.profile) {
            (Some((ks, ls)), _) => ParameterSchedule::explicit(self.kappa, self.lambda, ks, ls),
            (None, Some(p)) => synthesize(p, self.kappa, self.lambda, self.depth),
            (None, None) => Err(Error::Config("no schedule source".into())),
        }
    }

    /// The group realizing the schedule with the configured backend.
    pub fn diagonal_product(&self, s: &ParameterSchedule) -> Result<DiagonalProduct> {
        let (a, b) = match self.backend {
            Backend::Dihedral => (FiniteTable::cyclic(2)?, FiniteTable::cyclic(2)?),
            Backend::Lamplighter { a_order, b_order } => {
                if s.depth() > 0 {
                    return Err(Error::Config("the lamplighter backend has no levels m ≥ 1; use dihedral".into()));
                }
                (FiniteTable::cyclic(a_order)?, FiniteTable::cyclic(b_order)?)
            }
        };
        let levels = (1..=s.depth())
            .map(|m| {
                let k = s.k_u64(m)?.expect("finite below the depth");
                Ok(Level { k, backend: Arc::new(GroupBackend::dihedral(s.l_u64(m)?)?) })
            })
            .collect::<Result<Vec<_>>>()?;
        let horizon = match s.tail() {
            Tail::Infinite => None,
            Tail::Next(e) => Some(
                s.kappa().checked_pow(e).ok_or_else(|| Error::Schedule("next k overflows".into()))?,
            ),
            Tail::Unknown => Some(match s.depth() {
                0 => 1,
                m => s.k_u64(m)?.expect("finite") * s.kappa(),
            }),
        };
        DiagonalProduct::new(a, b, levels, horizon)
    }

    pub fn tiling(&self, s: &ParameterSchedule) -> Result<Tiling> {
        Tiling::new(Arc::new(self.diagonal_product(s)?), self.kappa, self.cap)
    }

    pub fn base_order(&self) -> usize {
        match self.backend {
            Backend::Dihedral => 4,
            Backend::Lamplighter { a_order, b_order } => a_order * b_order,
        }
    }

    /// Size constants for the configured mode: synthetic `c_1 l_m + c_2`, or
    /// the true `ln|Γ'_m|` of the materialized backends.
    pub fn constants(&self, s: &ParameterSchedule) -> Result<TileConstants> {
        match self.mode {
            Mode::Synthetic => TileConstants::synthetic(s, self.base_order(), self.c1, self.c2),
            Mode::Materialized => {
                let dp = self.diagonal_product(s)?;
                let sizes = (1..=s.depth())
                    .map(|m| Ok((dp.backend(m)?.derived_order() as f64).ln()))
                    .collect::<Result<Vec<_>>>()?;
                TileConstants::with_sizes(s, self.base_order(), sizes)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_explicit_d4() {
        let c = RunConfig::parse("kappa = 2\nlambda = 2\nschedule.k = 0, 2, inf  # D_4\nschedule.l = 1, 4\n").unwrap();
        let s = c.schedule().unwrap();
        assert_eq!(s.depth(), 1);
        let dp = c.diagonal_product(&s).unwrap();
        assert_eq!(dp.k(1).unwrap(), 2);
        assert_eq!(dp.horizon(), None);
    }

    #[test]
    fn odd_dihedral_level_is_a_hypothesis_error() {
        let c = RunConfig::parse("lambda = 3\nschedule.k = 0, 2, inf\nschedule.l = 1, 3\n").unwrap();
        let s = c.schedule().unwrap();
        assert!(matches!(c.diagonal_product(&s), Err(Error::Hypothesis(_))));
    }

    #[test]
    fn rejects_unknown_keys() {
        assert!(matches!(RunConfig::parse("profile.family = identity\ncolour = red"), Err(Error::Config(_))));
        assert!(matches!(RunConfig::parse("kappa 2"), Err(Error::Parse(_))));
    }

    #[test]
    fn power_profile_horizon() {
        let c = RunConfig::parse("profile.family = power\nprofile.alpha = 1\ndepth = 3").unwrap();
        let s = c.schedule().unwrap();
        let dp = c.diagonal_product(&s).unwrap();
        assert_eq!(dp.depth(), 3);
        assert_eq!(dp.horizon(), Some(16));
    }
}
