//! Command-line driver: `synth`, `build`, `verify`, `simulate`, `report`.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use log::info;
use num_bigint::BigUint;

use crate::config::{Mode, RunConfig};
use crate::coupling::{series_report, simulate, Coupling, SweepConfig};
use crate::delta::{DeltaElement, Generator};
use crate::error::{Error, Result};
use crate::report::{self, write_atomic, Table};
use crate::tiling::{Tiling, ZTiling};

#[derive(Debug, Parser)]
#[command(name = "diagprod", version, about = "Diagonal products, their tiling shifts and the coupling with ℤ")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Run configuration (`key = value` lines).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub level: Option<u32>,
    #[arg(long, global = true)]
    pub eps: Option<f64>,
    #[arg(long, global = true)]
    pub samples: Option<u64>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true, value_parser = ["materialized", "synthetic"])]
    pub mode: Option<String>,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, Subcommand, PartialEq, Eq)]
pub enum Command {
    /// Synthesize the parameter schedule and write `schedule.csv`.
    Synth,
    /// Build and check the tiles up to `--level`, write them and `stats.csv`.
    Build,
    /// Re-read written tiles and check partitions, Følner ratios and the ℤ tiling.
    Verify,
    /// Sweep the truncated coupling and write distance histograms and moments.
    Simulate,
    /// Tabulate both integrability series and write `series.csv`.
    Report,
}

/// Exit status for an error: 2 for rejected input, 3 for size caps, 4 for
/// failed invariants, 1 for I/O.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config(_)
        | Error::Parse(_)
        | Error::Hypothesis(_)
        | Error::Profile(_)
        | Error::Schedule(_)
        | Error::InvalidTable(_)
        | Error::InvalidElement { .. } => 2,
        Error::CapExceeded { .. } => 3,
        Error::Invariant(_) | Error::AddressOutOfRange { .. } | Error::ScheduleMismatch { .. } | Error::InfiniteLevel(_) => 4,
        Error::Io(_) => 1,
    }
}

pub fn resolve(cli: &Cli) -> Result<RunConfig> {
    let path = cli.config.as_ref().ok_or_else(|| Error::Config("--config is required".into()))?;
    let mut c = RunConfig::load(path)?;
    if let Some(v) = cli.level {
        c.level = v;
    }
    if let Some(v) = cli.eps {
        c.eps = vec![v];
    }
    if let Some(v) = cli.samples {
        c.samples = v;
    }
    if let Some(v) = cli.seed {
        c.seed = v;
    }
    if let Some(v) = &cli.mode {
        c.mode = v.parse()?;
    }
    if let Some(v) = &cli.out {
        c.out = v.clone();
    }
    Ok(c)
}

pub fn run(cli: &Cli) -> Result<()> {
    let c = resolve(cli)?;
    match cli.command {
        Command::Synth => synth(&c),
        Command::Build => build(&c),
        Command::Verify => verify(&c),
        Command::Simulate => run_simulate(&c),
        Command::Report => run_report(&c),
    }
}

fn write_table(dir: &Path, name: &str, t: &Table) -> Result<()> {
    let path = dir.join(name);
    write_atomic(&path, t.to_csv()?.as_bytes())?;
    info!("wrote {}", path.display());
    Ok(())
}

fn tile_path(dir: &Path, n: u32) -> PathBuf {
    dir.join(format!("tile_{n}.txt"))
}

fn synth(c: &RunConfig) -> Result<()> {
    let s = c.schedule()?;
    info!("schedule with {} finite levels, tail {:?}", s.depth(), s.tail());
    write_table(&c.out, "schedule.csv", &report::schedule_table(&s)?)
}

fn stats_for(c: &RunConfig, tiling: Option<&Tiling>) -> Result<Table> {
    let s = c.schedule()?;
    let consts = c.constants(&s)?;
    let stats = (0..=c.level).map(|n| consts.stats(n)).collect::<Result<Vec<_>>>()?;
    for st in &stats {
        if !st.bounds_hold() {
            return Err(Error::Invariant(format!(
                "ln|T_{}| = {} escapes [{}, {}]",
                st.n, st.ln_cardinality, st.lower, st.upper
            )));
        }
    }
    let exact = match tiling {
        Some(t) => Some((0..=c.level).map(|n| t.tile_cardinality(n)).collect::<Result<Vec<BigUint>>>()?),
        None => None,
    };
    info!("C_l = {}, C_R = {}, C_1 = {}, C_2 = {}, C_3 = {}", consts.c_l, consts.c_r, consts.c1, consts.c2, consts.c3);
    Ok(report::stats_table(&stats, exact.as_deref()))
}

fn build(c: &RunConfig) -> Result<()> {
    if c.mode == Mode::Synthetic {
        return write_table(&c.out, "stats.csv", &stats_for(c, None)?);
    }
    let s = c.schedule()?;
    let tiling = c.tiling(&s)?;
    for check in tiling.build_tiles(c.level)? {
        info!("|T_{}|={}, |Σ_{}|={}, partition OK", check.n, check.tile_len, check.n, check.shift_len);
        let mut lines: Vec<String> =
            tiling.tile(check.n)?.enumerate(tiling.dp(), c.cap)?.iter().map(DeltaElement::to_string).collect();
        lines.sort_unstable();
        let mut text = lines.join("\n");
        text.push('\n');
        write_atomic(&tile_path(&c.out, check.n), text.as_bytes())?;
    }
    write_table(&c.out, "stats.csv", &stats_for(c, Some(&tiling))?)
}

fn verify(c: &RunConfig) -> Result<()> {
    if c.mode == Mode::Synthetic {
        stats_for(c, None)?;
        info!("synthetic bounds hold for n ≤ {}", c.level);
        return Ok(());
    }
    let s = c.schedule()?;
    let tiling = c.tiling(&s)?;
    let dp = tiling.dp();
    let mut shift_sizes = Vec::new();
    for n in 0..=c.level {
        let tile = tiling.tile(n)?;
        let path = tile_path(&c.out, n);
        if path.exists() {
            let text = std::fs::read_to_string(&path)?;
            let lines: Vec<&str> = text.lines().filter(|l| !l.is_empty()).collect();
            if lines.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Invariant(format!("{} is not strictly sorted", path.display())));
            }
            for l in &lines {
                let x = DeltaElement::parse(l)?;
                dp.check_element(&x)?;
                if !tile.contains(&x) {
                    return Err(Error::Invariant(format!("{l} is not in T_{n}")));
                }
            }
            if tile.len() != Some(lines.len() as u64) {
                return Err(Error::Invariant(format!("{} lists {} elements, |T_{n}| = {}", path.display(), lines.len(), tile.cardinality())));
            }
        }
        let check = tiling.verify_level(n)?;
        let b = tiling.right_boundary(&tile)?;
        let q = tiling.scale(n)?;
        for &(s, count) in &b.per_generator {
            if count * q > 2 * b.size {
                return Err(Error::Invariant(format!("|T_{n} {s} \\ T_{n}| = {count} exceeds 2|T_{n}|/κ^{n}")));
            }
        }
        let cursor = b.count(Generator::Forward) + b.count(Generator::Backward);
        if cursor * q != 2 * b.size {
            return Err(Error::Invariant(format!("cursor boundary of T_{n} is {cursor}, expected 2|T_{n}|/κ^{n}")));
        }
        info!("|T_{n}|={}, partition OK, Følner ratio {}/{q}", check.tile_len, cursor * q / b.size);
        shift_sizes.push(check.shift_len);
    }
    let z = ZTiling::new(shift_sizes)?;
    for n in 0..=c.level as usize {
        if z.tile_len(n) != tiling.tile(n as u32)?.len().unwrap_or(0) {
            return Err(Error::Invariant(format!("|T'_{n}| ≠ |T_{n}|")));
        }
        for x in 0..z.tile_len(n) {
            if z.addr_to_int(&z.int_to_addr(n + 1, x)?)? != x {
                return Err(Error::Invariant(format!("mixed-radix round trip fails at {x}")));
            }
        }
    }
    info!("ℤ tiling OK up to level {}", c.level);
    Ok(())
}

fn run_simulate(c: &RunConfig) -> Result<()> {
    let profile = c.profile.clone().ok_or_else(|| Error::Config("simulate needs profile.family".into()))?;
    let s = c.schedule()?;
    let coupling = Coupling::new(c.tiling(&s)?, c.level)?;
    let reports = c
        .eps
        .iter()
        .map(|&eps| {
            let cfg = SweepConfig {
                eps,
                c_grid: c.c_grid.clone(),
                samples: c.samples,
                seed: c.seed,
                exhaustive_limit: c.cap,
                exact_samples: c.exact_samples,
                exact_node_cap: c.exact_node_cap,
            };
            let r = simulate(&coupling, &profile, &cfg)?;
            for g in &r.delta_to_z {
                info!(
                    "ε = {eps}, {}: {} of {} points leave the truncation",
                    g.label, g.out_of_truncation, g.points
                );
            }
            Ok(r)
        })
        .collect::<Result<Vec<_>>>()?;
    write_table(&c.out, "histograms.csv", &report::histogram_table(&reports))?;
    write_table(&c.out, "moments.csv", &report::moments_table(&reports))
}

fn run_report(c: &RunConfig) -> Result<()> {
    let profile = c.profile.clone().ok_or_else(|| Error::Config("report needs profile.family".into()))?;
    let s = c.schedule()?;
    let consts = c.constants(&s)?;
    let reports = c
        .eps
        .iter()
        .map(|&eps| {
            let r = series_report(&profile, &consts, eps, c.n_max)?;
            info!(
                "ε = {eps}: Ψ-terms decrease from n = {:?}, φ-ratio max on [5, {}] = {:?}",
                r.psi_decreasing_from(),
                c.n_max,
                r.phi_ratio_max(5, c.n_max)
            );
            Ok(r)
        })
        .collect::<Result<Vec<_>>>()?;
    write_table(&c.out, "series.csv", &report::series_table(&reports))
}
