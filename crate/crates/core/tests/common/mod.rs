//! Random instances shared by the integration tests.
#![allow(dead_code)]

use std::sync::Arc;

use gerbes::cech::{CechCochain, Cover, Inner, TotalCochain, TotalShape};
use gerbes::cochain::{Cochain, CoefficientGroup};
use gerbes::exact::{frac, int};
use gerbes::simplicial::{FiniteGroup, SimplicialComplex};
use gerbes::words::{BgWord, EgWord};
use gerbes::Rational;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn value(coeff: CoefficientGroup, rng: &mut ChaCha8Rng) -> Rational {
    match coeff {
        CoefficientGroup::Integers => int(rng.gen_range(-4..5)),
        CoefficientGroup::Rationals => frac(rng.gen_range(-5..6), rng.gen_range(1..5)),
        CoefficientGroup::RationalsModOne => coeff.reduce(&frac(rng.gen_range(0..12), 12)),
        CoefficientGroup::Cyclic(n) => int(rng.gen_range(0..n as i64)),
    }
}

pub fn cochain(k: &Arc<SimplicialComplex>, p: usize, coeff: CoefficientGroup, rng: &mut ChaCha8Rng) -> Cochain {
    let vals: Vec<_> = (0..k.count(p)).map(|i| (i, value(coeff, rng))).collect();
    Cochain::from_values(k, p, coeff, vals).unwrap()
}

/// Form-valued Čech cochain, each local form supported on its intersection.
pub fn forms(cover: &Arc<Cover>, p: usize, q: usize, coeff: CoefficientGroup, rng: &mut ChaCha8Rng) -> CechCochain {
    let mut out = CechCochain::zero(cover, p, Inner::Form(q), coeff);
    for i in 0..cover.nerve().count(p) {
        let u = cover.intersection(p, i);
        let mut vals = Vec::new();
        for &s in u.simplices(q) {
            if rng.gen_bool(0.7) {
                vals.push((s, value(coeff, rng)));
            }
        }
        out.set_form(i, Cochain::from_values(cover.base(), q, coeff, vals).unwrap()).unwrap();
    }
    out
}

/// Random total cochain of degree `n` filling every available piece.
pub fn total(shape: &TotalShape, n: usize, rng: &mut ChaCha8Rng) -> TotalCochain {
    let cover = &shape.cover;
    let mut x = TotalCochain::zero(shape, n);
    for q in 0..=n {
        if shape.top.is_some_and(|t| q > t) || n - q > cover.nerve().dim() || q > cover.base().dim() {
            continue;
        }
        x = x.with_piece(forms(cover, n - q, q, shape.coeff, rng)).unwrap();
    }
    if let Some(c) = shape.constants {
        if n < cover.nerve().dim() {
            x = x.with_constant(cochain(cover.nerve(), n + 1, c, rng)).unwrap();
        }
    }
    x
}

/// Raw times with ties, including the endpoints.
pub fn times(len: usize, rng: &mut ChaCha8Rng) -> Vec<Rational> {
    let mut ts: Vec<Rational> = (0..len).map(|_| frac(rng.gen_range(0..=8), 8)).collect();
    ts.sort();
    ts
}

pub fn eg_word(g: &Arc<FiniteGroup>, rng: &mut ChaCha8Rng) -> EgWord {
    let len = rng.gen_range(0..6);
    let letters = (0..len).map(|_| rng.gen_range(0..g.order())).collect();
    EgWord::new(g, times(len, rng), rng.gen_range(0..g.order()), letters).unwrap()
}

pub fn bg_word(g: &Arc<FiniteGroup>, rng: &mut ChaCha8Rng) -> BgWord {
    let len = rng.gen_range(0..6);
    let letters = (0..len).map(|_| rng.gen_range(0..g.order())).collect();
    BgWord::new(g, times(len, rng), letters).unwrap()
}
