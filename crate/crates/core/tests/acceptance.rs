//! One pass/fail line per acceptance criterion.

mod common;

use std::collections::{HashMap, HashSet};
use std::sync::Arc;
use std::time::Instant;

use common::{d4_model, d4_product, words_up_to};
use diagprod::coupling::{series_report, simulate, Coupling, SweepConfig, C_GRID};
use diagprod::delta::{word_range, DeltaElement, DiagonalProduct, ExactMetric, Generator, LampConfig, RangeInterval};
use diagprod::schedule::{synthesize, Profile, Tail};
use diagprod::tiling::{TileConstants, Tiling, ZTiling, DEFAULT_CAP};
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Criteria whose stated target the construction does not reach; their lines
/// still read FAIL, with the measured values.
const KNOWN_GAPS: &[u32] = &[8];

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lamplighter() -> Tiling {
    Tiling::new(Arc::new(DiagonalProduct::lamplighter(2, 2).unwrap()), 2, DEFAULT_CAP).unwrap()
}

fn d4() -> Tiling {
    Tiling::new(Arc::new(d4_product()), 2, DEFAULT_CAP).unwrap()
}

/// `|{x : range(x) ⊆ [0, n−1]}|` by walking the Cayley graph inside the window.
fn window_count(dp: &DiagonalProduct, n: i64) -> u64 {
    let window = RangeInterval { lo: 0, hi: n - 1 };
    let gens: Vec<DeltaElement> = dp.generators().into_iter().map(|s| dp.generator(s)).collect();
    let mut seen = HashSet::from([dp.identity()]);
    let mut stack = vec![dp.identity()];
    while let Some(x) = stack.pop() {
        for g in &gens {
            let y = dp.multiply(&x, g).unwrap();
            if window.contains(&dp.compute_range(&y)) && seen.insert(y.clone()) {
                stack.push(y);
            }
        }
    }
    seen.len() as u64
}

fn criterion_1() -> Check {
    let start = Instant::now();
    let mut sizes = Vec::new();
    for (name, t, top) in [("lamplighter", lamplighter(), 3), ("D_4", d4(), 2)] {
        let checks = t.build_tiles(top).map_err(|e| format!("{name}: {e}"))?;
        for c in &checks {
            if c.n <= 2 {
                let walk = window_count(t.dp(), 1 << c.n);
                ensure(walk == c.tile_len, || format!("{name}: |F_{}| = {walk} by walking, |T_{}| = {}", 1 << c.n, c.n, c.tile_len))?;
            }
        }
        sizes.push(format!("{name} |T_{top}| = {}", checks[top as usize].tile_len));
    }
    ensure(sizes[0].ends_with("524288"), || sizes[0].clone())?;
    ensure(sizes[1].ends_with("4096"), || sizes[1].clone())?;
    let secs = start.elapsed().as_secs_f64();
    ensure(secs <= 60.0, || format!("took {secs:.1} s"))?;
    Ok(format!("{}, {}, {secs:.1} s", sizes[0], sizes[1]))
}

fn criterion_2() -> Check {
    let mut out = Vec::new();
    for (name, t, top) in [("lamplighter", lamplighter(), 3), ("D_4", d4(), 2)] {
        for n in 0..=top {
            let formula = t.tile_cardinality(n).map_err(|e| e.to_string())?;
            let counted = t.tile(n).unwrap().enumerate(t.dp(), DEFAULT_CAP).map_err(|e| e.to_string())?;
            let distinct: HashSet<_> = counted.iter().collect();
            ensure(formula == BigUint::from(distinct.len()), || format!("{name} n = {n}: formula {formula}, counted {}", distinct.len()))?;
        }
        out.push(format!("{name} n ≤ {top}"));
    }
    let t = d4();
    ensure(t.tile_cardinality(2).unwrap() == BigUint::from(4u32 * 4u32.pow(4) * 4), || "D_4 |T_2| ≠ 4·4⁴·2²".into())?;
    Ok(out.join(", "))
}

fn criterion_3() -> Check {
    let t = lamplighter();
    for n in 1..=8u64 {
        let b = t.right_boundary(&t.folner(n).unwrap()).map_err(|e| e.to_string())?;
        ensure(b.total() * n == 2 * b.size, || format!("|∂F_{n}|/|F_{n}| = {}/{}", b.total(), b.size))?;
    }
    for (name, t, top) in [("lamplighter", lamplighter(), 3), ("D_4", d4(), 2)] {
        for n in 0..=top {
            let b = t.right_boundary(&t.tile(n).unwrap()).map_err(|e| e.to_string())?;
            let q = t.scale(n).unwrap();
            for &(s, c) in &b.per_generator {
                ensure(c * q <= 2 * b.size, || format!("{name} n = {n}: |T_n {s} \\ T_n| = {c}"))?;
            }
            let cursor = b.count(Generator::Forward) + b.count(Generator::Backward);
            ensure(cursor * q == 2 * b.size, || format!("{name} n = {n}: cursor boundary {cursor} of {}", b.size))?;
        }
    }
    Ok("|∂F_n|/|F_n| = 2/n for n ≤ 8; tile bounds and cursor equality hold".into())
}

fn criterion_4() -> Check {
    let dp = d4_product();
    let model = d4_model();
    let gens = dp.generators();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut mismatches = 0;
    for _ in 0..10_000 {
        let u: Vec<Generator> = (0..rng.gen_range(0..=6)).map(|_| gens[rng.gen_range(0..gens.len())]).collect();
        let v: Vec<Generator> = (0..rng.gen_range(0..=6)).map(|_| gens[rng.gen_range(0..gens.len())]).collect();
        let xy = dp.multiply(&dp.eval_word(&u), &dp.eval_word(&v)).unwrap();
        if !model.agrees(&dp, &xy, &model.mul(&model.eval(&u), &model.eval(&v)), -16, 20) {
            mismatches += 1;
        }
    }
    let mut best: HashMap<DeltaElement, RangeInterval> = HashMap::new();
    let words = words_up_to(&gens, 6);
    for w in &words {
        let r = word_range(w);
        best.entry(dp.eval_word(w))
            .and_modify(|b| {
                if r.diameter() < b.diameter() {
                    *b = r
                }
            })
            .or_insert(r);
    }
    let range_bad = best.iter().filter(|(x, r)| dp.compute_range(x) != **r).count();
    ensure(mismatches == 0 && range_bad == 0, || format!("{mismatches} product mismatches, {range_bad} range mismatches"))?;
    Ok(format!("10000 pairs, {} elements from {} words, 0 mismatches", best.len(), words.len()))
}

fn criterion_5() -> Check {
    let t = d4();
    let dp = t.dp();
    let metric = ExactMetric::new(dp, 400_000);
    let check = |x: &DeltaElement| -> Result<bool, String> {
        let upper = dp.metric_upper_bound(x).map_err(|e| e.to_string())?;
        let cap = u32::try_from(upper).unwrap_or(u32::MAX);
        match metric.word_length_exact(x, cap, 200_000) {
            Some(e) => ensure(e as u128 <= upper, || format!("{x}: exact {e} > bound {upper}")).map(|_| true),
            None => {
                // the writer word certifies |x| ≤ its length
                let w = dp.write_word(x).len() as u128;
                ensure(dp.eval_word(&dp.write_word(x)) == *x && w <= upper, || format!("{x}: writer {w} > bound {upper}"))
                    .map(|_| false)
            }
        }
    };
    let t1 = t.tile(1).unwrap().enumerate(dp, DEFAULT_CAP).unwrap();
    let t1_exact = t1.iter().map(&check).collect::<Result<Vec<_>, _>>()?.into_iter().filter(|&b| b).count();
    let tile2 = t.tile(2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let sample: Vec<DeltaElement> = (0..1000).map(|_| tile2.unrank(dp, rng.gen_range(0..4096)).unwrap()).collect();
    let t2_exact = sample.par_iter().map(&check).collect::<Result<Vec<_>, _>>()?.into_iter().filter(|&b| b).count();
    use Generator::{Backward as L, Forward as R, A, B};
    let comm = dp.eval_word(&[R, R, A(1), L, L, B(1), R, R, A(1), L, L, B(1)]);
    let g = dp.backend(1).unwrap();
    let (a, b) = (g.embed_a(1), g.embed_b(1));
    let ab = g.mul(g.mul(a, b), g.mul(g.inv(a), g.inv(b)));
    ensure(comm.derived[0] == LampConfig::single(2, ab) && comm.base.is_empty(), || format!("commutator element {comm}"))?;
    Ok(format!(
        "T_1: {}/{} exact, T_2 sample: {t2_exact}/1000 exact; g'_1(k_1) = [a, b]",
        t1_exact,
        t1.len()
    ))
}

fn criterion_6() -> Check {
    let mut out = Vec::new();
    for (name, t, top) in [("lamplighter", lamplighter(), 3u32), ("D_4", d4(), 2)] {
        let sizes: Vec<u64> = (0..=top).map(|n| t.shift(n).unwrap().len()).collect();
        let z = ZTiling::new(sizes.clone()).map_err(|e| e.to_string())?;
        for n in 0..=top as usize {
            let len = t.tile(n as u32).unwrap().len().unwrap();
            ensure(z.tile_len(n) == len && z.z_tile(n) == (0, len - 1), || format!("{name}: T'_{n} ≠ [0, |T_{n}|−1]"))?;
            ensure(z.z_shift(n).count == sizes[n], || format!("{name}: |Σ'_{n}| ≠ |Σ_{n}|"))?;
            let prev = if n == 0 { 1 } else { z.tile_len(n - 1) };
            let mut hit = vec![false; len as usize];
            for s in z.z_shift(n).elements() {
                for u in 0..prev {
                    let x = (s + u) as usize;
                    ensure(x < hit.len() && !hit[x], || format!("{name}: Σ'_{n} + T'_{} overlaps at {x}", n as i64 - 1))?;
                    hit[x] = true;
                }
            }
            ensure(hit.iter().all(|&h| h), || format!("{name}: Σ'_{n} + T'_{} misses points", n as i64 - 1))?;
            for x in 0..len {
                ensure(z.addr_to_int(&z.int_to_addr(n + 1, x).unwrap()).unwrap() == x, || format!("{name}: round trip at {x}"))?;
            }
        }
        out.push(format!("{name} n ≤ {top}"));
    }
    let c = Coupling::new(d4(), 2).map_err(|e| e.to_string())?;
    for x in 0..c.len() {
        let addr = c.int_to_addr(x).unwrap();
        let d = c.addr_to_delta(&addr).unwrap();
        ensure(c.delta_to_addr(&d).unwrap() == addr, || format!("address round trip fails at {x}"))?;
    }
    Ok(format!("{}; D_4 addresses round-trip on all 4096 points", out.join(", ")))
}

fn criterion_7() -> Check {
    let id = synthesize(&Profile::Identity, 2, 2, 10).map_err(|e| e.to_string())?;
    ensure(id.depth() == 0 && id.tail() == Tail::Infinite && id.l_u64(0).ok() == Some(1), || format!("identity schedule {id:?}"))?;
    let mut notes = vec!["identity: l_0 = 1, k_1 = ∞".to_string()];
    for alpha in [1u32, 2] {
        let p = Profile::power(alpha as f64).unwrap();
        let s = synthesize(&p, 2, 2, 45).map_err(|e| e.to_string())?;
        for m in 1..=s.depth() {
            ensure(s.k_u64(m).ok() == Some(Some(1 << m)), || format!("α = {alpha}: k_{m} = {:?}", s.k_u64(m)))?;
        }
        for m in 0..=s.depth().min(60 / alpha as usize) {
            ensure(s.l_u64(m).ok() == Some(1 << (alpha as usize * m)), || format!("α = {alpha}: l_{m} = {:?}", s.l_u64(m)))?;
        }
        let (lo, hi) = s.fbar_ratio_range(&p, 1e12, 2000).map_err(|e| e.to_string())?;
        ensure(lo >= 0.25 && hi <= 4.0, || format!("α = {alpha}: f̄/f ∈ [{lo}, {hi}]"))?;
        s.check_landing(40).map_err(|e| e.to_string())?;
        s.check_rhobar_scaling(1e12).map_err(|e| e.to_string())?;
        notes.push(format!("α = {alpha}: f̄/f ∈ [{lo:.3}, {hi:.3}]"));
    }
    Ok(notes.join("; "))
}

fn criterion_8() -> Check {
    let mut notes = Vec::new();
    let mut failures = Vec::new();
    for alpha in [1u32, 2] {
        let p = Profile::power(alpha as f64).unwrap();
        let s = synthesize(&p, 2, 2, 45).unwrap();
        let consts = TileConstants::synthetic(&s, 4, 1.0, 0.0).unwrap();
        for eps in [0.25, 0.5, 1.0] {
            let r = series_report(&p, &consts, eps, 40).map_err(|e| e.to_string())?;
            let n0 = r.psi_decreasing_from();
            let tail = r.row(20).unwrap().psi_term;
            let ratio = r.phi_ratio_max(5, 40).unwrap();
            if !n0.is_some_and(|n| n <= 6) {
                failures.push(format!("α = {alpha}, ε = {eps}: n_0 = {}", n0.map_or("none".into(), |n| n.to_string())));
            }
            if !(tail < 1e-6) {
                failures.push(format!("α = {alpha}, ε = {eps}: Ψ-term at 20 = {tail:e}"));
            }
            if !(ratio <= 10.0) {
                failures.push(format!("α = {alpha}, ε = {eps}: φ-ratio {ratio}"));
            }
            notes.push(format!("α={alpha} ε={eps}: n_0={}, ratio≤{ratio:.3}", n0.map_or("none".into(), |n| n.to_string())));
        }
    }
    let summary = notes.join("; ");
    if failures.is_empty() {
        Ok(summary)
    } else {
        Err(format!("{} [{}]", failures.join("; "), summary))
    }
}

fn criterion_9() -> Check {
    let start = Instant::now();
    let cfg = SweepConfig { eps: 0.5, ..SweepConfig::default() };
    let p = Profile::Identity;
    let mut reports = Vec::new();
    for n in [2, 3] {
        let c = Coupling::new(lamplighter(), n).map_err(|e| e.to_string())?;
        let r = simulate(&c, &p, &cfg).map_err(|e| e.to_string())?;
        ensure(r.exhaustive && r.points == c.len(), || format!("N = {n} sweep was not exhaustive"))?;
        for g in &r.delta_to_z {
            ensure(g.injective == Some(true), || format!("N = {n}: {} is not injective", g.label))?;
            ensure(g.moments.iter().all(|m| m.1.is_finite()), || format!("N = {n}: {} has a non-finite moment", g.label))?;
        }
        let oot = r.generator("t+").unwrap().out_of_truncation;
        ensure((oot << n) == r.points, || format!("N = {n}: {oot} of {} points leave", r.points))?;
        reports.push(r);
    }
    let variation = |c: f64| -> f64 {
        reports[0]
            .delta_to_z
            .iter()
            .zip(&reports[1].delta_to_z)
            .map(|(a, b)| (b.moment(c).unwrap() - a.moment(c).unwrap()).abs() / a.moment(c).unwrap())
            .fold(0.0, f64::max)
    };
    let (best_c, best) = C_GRID.iter().map(|&c| (c, variation(c))).min_by(|a, b| a.1.total_cmp(&b.1)).unwrap();
    ensure(best < 0.25, || format!("smallest variation {best:.3} at c = {best_c}"))?;
    let secs = start.elapsed().as_secs_f64();
    ensure(secs <= 300.0, || format!("took {secs:.1} s"))?;
    Ok(format!("N = 3: 524288 points, injective, t+ leaves on 1/8; variation {:.1}% at c = {best_c}; {secs:.1} s", best * 100.0))
}

fn main() {
    let criteria: [(u32, fn() -> Check); 9] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
    ];
    let mut unexpected = 0;
    for (i, f) in criteria {
        match f() {
            Ok(detail) => println!("criterion {i}: PASS ({detail})"),
            Err(detail) => {
                let known = KNOWN_GAPS.contains(&i);
                println!("criterion {i}: FAIL ({detail}){}", if known { " [known gap]" } else { "" });
                if !known {
                    unexpected += 1;
                }
            }
        }
    }
    if unexpected > 0 {
        std::process::exit(1);
    }
}
