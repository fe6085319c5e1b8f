#![allow(dead_code)]

use arcmult::{DMono, DPoly, DVar, Rational};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};

/// 100 cases from a fixed seed, no persistence files.
pub fn pinned(seed: u64) -> Config {
    Config { cases: 100, rng_seed: RngSeed::Fixed(seed), failure_persistence: None, ..Config::default() }
}

pub fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

pub fn x(k: u32) -> DPoly {
    DPoly::var(DVar::new(0, k))
}

pub fn arb_mono(bases: u32, max_ord: u32, max_deg: usize) -> impl Strategy<Value = DMono> {
    prop::collection::vec((0..bases, 0..=max_ord), 0..=max_deg)
        .prop_map(|vs| DMono::from_pairs(vs.into_iter().map(|(b, o)| (DVar::new(b, o), 1))))
}

pub fn arb_poly(bases: u32, max_ord: u32, max_deg: usize, terms: usize) -> impl Strategy<Value = DPoly> {
    prop::collection::vec((arb_mono(bases, max_ord, max_deg), -4i64..=4), 0..=terms)
        .prop_map(|ts| DPoly::from_terms(ts.into_iter().map(|(m, c)| (m, q(c)))))
}

/// Nonzero polynomial without a constant term.
pub fn arb_proper(bases: u32, max_ord: u32, max_deg: usize, terms: usize) -> impl Strategy<Value = DPoly> {
    arb_poly(bases, max_ord, max_deg, terms)
        .prop_map(|p| DPoly::from_terms(p.terms().filter(|(m, _)| !m.is_one()).map(|(m, c)| (m.clone(), c.clone()))))
        .prop_filter("nonzero", |p| !p.is_zero())
}

/// Sorted order sequences of length `<= max_deg` over `0..=max_ord`.
pub fn order_multisets(max_deg: usize, max_ord: u32) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    let mut frontier: Vec<Vec<u32>> = vec![Vec::new()];
    for _ in 0..max_deg {
        let mut next = Vec::new();
        for s in &frontier {
            for o in s.last().copied().unwrap_or(0)..=max_ord {
                let mut t = s.clone();
                t.push(o);
                next.push(t);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}
