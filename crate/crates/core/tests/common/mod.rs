//! Seeded random generators shared by the integration tests.
#![allow(dead_code)]

use luka_core::geometry::{gram_schmidt, Point};
use proptest::prelude::*;
use luka_core::{DifferentialValuation, Formula, Rat};
pub use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;
pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random formula over `X1..Xn` with exactly `size` connectives.
pub fn formula(rng: &mut TestRng, n: usize, size: usize) -> Formula {
    if size == 0 {
        return Formula::var(rng.gen_range(1..=n));
    }
    let op = rng.gen_range(0..6);
    if op == 0 {
        return Formula::neg(formula(rng, n, size - 1));
    }
    let left = rng.gen_range(0..size);
    let a = formula(rng, n, left);
    let b = formula(rng, n, size - 1 - left);
    match op {
        1 => Formula::implies(a, b),
        2 => Formula::oplus(a, b),
        3 => Formula::otimes(a, b),
        4 => Formula::max(a, b),
        _ => Formula::min(a, b),
    }
}

/// Random formula with at most `max_size` connectives.
pub fn small_formula(rng: &mut TestRng, n: usize, max_size: usize) -> Formula {
    let size = rng.gen_range(0..=max_size);
    formula(rng, n, size)
}

pub fn rational(rng: &mut TestRng, max_den: i64) -> Rat {
    let q = rng.gen_range(1..=max_den);
    Rat::new(rng.gen_range(0..=q), q)
}

/// Point of `[0,1]^n` with denominators at most `max_den`.
pub fn point(rng: &mut TestRng, n: usize, max_den: i64) -> Point {
    (0..n).map(|_| rational(rng, max_den)).collect()
}

/// Point of the open cube.
pub fn interior_point(rng: &mut TestRng, n: usize, max_den: i64) -> Point {
    (0..n)
        .map(|_| {
            let q = rng.gen_range(2..=max_den.max(2));
            Rat::new(rng.gen_range(1..q), q)
        })
        .collect()
}

/// Nonzero integer vector with entries in `-k..=k`.
pub fn direction(rng: &mut TestRng, n: usize, k: i64) -> Point {
    loop {
        let v: Point = (0..n).map(|_| Rat::from_int(rng.gen_range(-k..=k))).collect();
        if v.iter().any(|x| !x.is_zero()) {
            return v;
        }
    }
}

/// Base points favour a coarse grid so that boundary and kink cases occur.
fn base_point(rng: &mut TestRng, n: usize) -> Point {
    (0..n)
        .map(|_| {
            let q = [1, 2, 3, 4, 8][rng.gen_range(0..5)];
            Rat::new(rng.gen_range(0..=q), q)
        })
        .collect()
}

/// Valid differential valuation in dimension `n` of order at most `max_order`.
pub fn valuation(rng: &mut TestRng, n: usize, max_order: usize) -> DifferentialValuation {
    loop {
        let base = base_point(rng, n);
        let t = rng.gen_range(0..=max_order.min(n));
        let raw: Vec<Point> = (0..t).map(|_| direction(rng, n, 2)).collect();
        let dirs = gram_schmidt(&raw);
        if dirs.len() != t {
            continue;
        }
        let u = DifferentialValuation::new(base, dirs);
        if u.validate().is_valid() {
            return u;
        }
    }
}

/// A valuation over `k` whose projection to `h` reproduces `u`, or a random one.
pub fn lift(r: &mut TestRng, u: &DifferentialValuation, h: &[usize], k: usize) -> DifferentialValuation {
    let extra: Vec<usize> = (0..k).filter(|i| !h.contains(i)).collect();
    loop {
        let mut base = vec![Rat::zero(); k];
        for (j, &pos) in h.iter().enumerate() {
            base[pos] = u.base()[j].clone();
        }
        for &pos in &extra {
            base[pos] = rational(r, 4);
        }
        let mut dirs: Vec<Point> = u
            .directions()
            .iter()
            .map(|d| {
                let mut w = vec![Rat::zero(); k];
                for (j, &pos) in h.iter().enumerate() {
                    w[pos] = d[j].clone() * Rat::from_int(r.gen_range(1..=3));
                }
                w
            })
            .collect();
        if !extra.is_empty() && dirs.len() < k && r.gen_bool(0.5) {
            let mut w = vec![Rat::zero(); k];
            w[extra[r.gen_range(0..extra.len())]] = Rat::from_int(if r.gen_bool(0.5) { 1 } else { -1 });
            let at = r.gen_range(0..=dirs.len());
            dirs.insert(at, w);
        }
        let v = DifferentialValuation::new(base, dirs);
        if v.validate().is_valid() {
            return v;
        }
    }
}


pub fn arb_formula(n: usize, depth: u32) -> impl Strategy<Value = Formula> {
    let leaf = (1..=n).prop_map(Formula::var);
    leaf.prop_recursive(depth, 40, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::neg),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::oplus(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::otimes(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::max(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Formula::min(a, b)),
        ]
    })
}

pub fn arb_rat(max_den: i64) -> impl Strategy<Value = Rat> {
    (1..=max_den).prop_flat_map(|q| (0..=q).prop_map(move |p| Rat::new(p, q)))
}

pub fn arb_point(n: usize, max_den: i64) -> impl Strategy<Value = Point> {
    proptest::collection::vec(arb_rat(max_den), n)
}

pub fn arb_direction(n: usize) -> impl Strategy<Value = Point> {
    proptest::collection::vec(-3i64..=3, n)
        .prop_filter("nonzero", |v| v.iter().any(|x| *x != 0))
        .prop_map(|v| v.into_iter().map(Rat::from_int).collect())
}

/// Valid valuation of order at most `n`, drawn from a seeded generator.
pub fn arb_valuation(n: usize) -> impl Strategy<Value = DifferentialValuation> {
    any::<u64>().prop_map(move |seed| valuation(&mut rng(seed), n, n))
}
