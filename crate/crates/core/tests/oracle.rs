mod common;

use std::collections::HashMap;

use common::{d4_model, d4_product, words_up_to, FullModel};
use diagprod::delta::{word_range, DiagonalProduct, Generator, RangeInterval};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn compact_product_matches_full_levels() {
    let dp = d4_product();
    let model = d4_model();
    let gens = dp.generators();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let word = |rng: &mut ChaCha8Rng| -> Vec<Generator> {
        let len = rng.gen_range(0..=6);
        (0..len).map(|_| gens[rng.gen_range(0..gens.len())]).collect()
    };
    for _ in 0..10_000 {
        let (u, v) = (word(&mut rng), word(&mut rng));
        let x = dp.eval_word(&u);
        let y = dp.eval_word(&v);
        let xy = dp.multiply(&x, &y).unwrap();
        let full = model.mul(&model.eval(&u), &model.eval(&v));
        assert!(model.agrees(&dp, &xy, &full, -16, 20), "{u:?} · {v:?}");
        let xi = dp.inverse(&x).unwrap();
        assert_eq!(dp.multiply(&xi, &x).unwrap(), dp.identity());
    }
}

#[test]
fn deeper_schedule_matches_full_levels() {
    let dp = DiagonalProduct::dihedral(&[1, 2, 4], &[2, 4, 8]).unwrap();
    let model = FullModel::new(&[1, 2, 4], &[2, 4, 8]);
    for w in words_up_to(&dp.generators(), 5) {
        assert!(model.agrees(&dp, &dp.eval_word(&w), &model.eval(&w), -10, 14), "{w:?}");
    }
}

#[test]
fn range_is_the_smallest_word_range() {
    let dp = d4_product();
    let mut best: HashMap<_, RangeInterval> = HashMap::new();
    for w in words_up_to(&dp.generators(), 6) {
        let x = dp.eval_word(&w);
        let r = word_range(&w);
        best.entry(x).and_modify(|b| {
            if r.diameter() < b.diameter() {
                *b = r;
            }
        })
        .or_insert(r);
    }
    for (x, r) in &best {
        let range = dp.compute_range(x);
        assert_eq!(*r, range, "{x}");
    }
}
