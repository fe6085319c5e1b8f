//! Dense-exponent Buchberger engine over a fixed finite set of variables.
//!
//! Polynomials are monic and kept sorted descending. Pairs are handled with
//! the Gebauer–Möller update, which includes the coprime-leading-monomial
//! (first Buchberger) criterion; the pair with the smallest lcm is processed
//! first.

use std::cmp::Ordering;

use num_traits::{One, Zero};

use crate::diffpoly::{DMono, DPoly, DVar, OrderKind, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Ring {
    vars: Vec<DVar>,
}

impl Ring {
    /// `vars` must be sorted ascending.
    pub(crate) fn new(vars: Vec<DVar>) -> Self {
        debug_assert!(vars.windows(2).all(|w| w[0] < w[1]));
        Ring { vars }
    }

    pub(crate) fn len(&self) -> usize {
        self.vars.len()
    }

    pub(crate) fn vars(&self) -> &[DVar] {
        &self.vars
    }

    fn index(&self, v: DVar) -> Option<usize> {
        self.vars.binary_search(&v).ok()
    }

    pub(crate) fn mono(&self, m: &DMono) -> Option<Mono> {
        let mut e = vec![0u16; self.vars.len()];
        for &(v, k) in m.exps() {
            e[self.index(v)?] = k as u16;
        }
        Some(Mono::new(e, &self.vars))
    }

    pub(crate) fn poly(&self, p: &DPoly, o: Order) -> Option<Poly> {
        let mut terms = Vec::with_capacity(p.len());
        for (m, c) in p.terms() {
            terms.push((self.mono(m)?, c.clone()));
        }
        terms.sort_by(|a, b| o.cmp(&b.0, &a.0));
        Some(Poly { terms })
    }

    pub(crate) fn to_dmono(&self, m: &Mono) -> DMono {
        DMono::from_pairs(
            m.e.iter()
                .zip(&self.vars)
                .filter(|(&k, _)| k > 0)
                .map(|(&k, &v)| (v, k as u32)),
        )
    }

    pub(crate) fn to_dpoly(&self, p: &Poly) -> DPoly {
        DPoly::from_terms(p.terms.iter().map(|(m, c)| (self.to_dmono(m), c.clone())))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) struct Mono {
    e: Box<[u16]>,
    deg: u32,
    wt: u32,
    mask: u64,
}

impl Mono {
    fn new(e: Vec<u16>, vars: &[DVar]) -> Self {
        let mut deg = 0;
        let mut wt = 0;
        let mut mask = 0u64;
        for (i, (&k, v)) in e.iter().zip(vars).enumerate() {
            if k > 0 {
                deg += k as u32;
                wt += k as u32 * v.order;
                mask |= 1 << (i % 64);
            }
        }
        Mono { e: e.into_boxed_slice(), deg, wt, mask }
    }

    fn from_parts(e: Box<[u16]>, deg: u32, wt: u32) -> Self {
        let mut mask = 0u64;
        for (i, &k) in e.iter().enumerate() {
            if k > 0 {
                mask |= 1 << (i % 64);
            }
        }
        Mono { e, deg, wt, mask }
    }

    pub(crate) fn exps(&self) -> &[u16] {
        &self.e
    }

    pub(crate) fn divides(&self, other: &Mono) -> bool {
        self.deg <= other.deg
            && self.mask & !other.mask == 0
            && self.e.iter().zip(other.e.iter()).all(|(a, b)| a <= b)
    }

    fn mul(&self, other: &Mono) -> Mono {
        let e: Box<[u16]> = self.e.iter().zip(other.e.iter()).map(|(a, b)| a + b).collect();
        Mono { e, deg: self.deg + other.deg, wt: self.wt + other.wt, mask: self.mask | other.mask }
    }

    /// `self / other`; caller guarantees divisibility.
    fn div(&self, other: &Mono) -> Mono {
        let e: Box<[u16]> = self.e.iter().zip(other.e.iter()).map(|(a, b)| a - b).collect();
        Mono::from_parts(e, self.deg - other.deg, self.wt - other.wt)
    }

    fn lcm(&self, other: &Mono, vars: &[DVar]) -> Mono {
        let e: Vec<u16> = self.e.iter().zip(other.e.iter()).map(|(a, b)| *a.max(b)).collect();
        Mono::new(e, vars)
    }

    fn coprime(&self, other: &Mono) -> bool {
        self.mask & other.mask == 0 || self.e.iter().zip(other.e.iter()).all(|(a, b)| *a == 0 || *b == 0)
    }

    fn padded(&self, n: usize) -> Mono {
        let mut e = self.e.to_vec();
        e.resize(n, 0);
        Mono { e: e.into_boxed_slice(), deg: self.deg, wt: self.wt, mask: self.mask }
    }
}

/// Engine-side monomial order. `Elim` compares the degree in the variables
/// with index `>= split` first, then falls back to `DegLex`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Order {
    Kind(OrderKind),
    Elim { split: usize },
}

fn lex(a: &[u16], b: &[u16]) -> Ordering {
    for (x, y) in a.iter().rev().zip(b.iter().rev()) {
        match x.cmp(y) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    Ordering::Equal
}

fn inv_var_lex(a: &[u16], b: &[u16]) -> Ordering {
    for (x, y) in a.iter().zip(b.iter()) {
        match x.cmp(y) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    Ordering::Equal
}

impl Order {
    pub(crate) fn cmp(self, a: &Mono, b: &Mono) -> Ordering {
        match self {
            Order::Kind(OrderKind::Lex) => lex(&a.e, &b.e),
            Order::Kind(OrderKind::DegLex) => a.deg.cmp(&b.deg).then_with(|| lex(&a.e, &b.e)),
            Order::Kind(OrderKind::WLex) => a.wt.cmp(&b.wt).then_with(|| lex(&a.e, &b.e)),
            Order::Kind(OrderKind::WDegInvLex) => a
                .wt
                .cmp(&b.wt)
                .then(a.deg.cmp(&b.deg))
                .then_with(|| inv_var_lex(&b.e, &a.e)),
            Order::Elim { split } => {
                let da: u32 = a.e[split..].iter().map(|&k| k as u32).sum();
                let db: u32 = b.e[split..].iter().map(|&k| k as u32).sum();
                da.cmp(&db)
                    .then(a.deg.cmp(&b.deg))
                    .then_with(|| lex(&a.e, &b.e))
            }
        }
    }
}

/// Terms sorted descending under the order they were built with.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Poly {
    pub(crate) terms: Vec<(Mono, Rational)>,
}

impl Poly {
    pub(crate) fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub(crate) fn lm(&self) -> &Mono {
        &self.terms[0].0
    }

    fn lc(&self) -> &Rational {
        &self.terms[0].1
    }

    fn make_monic(&mut self) {
        if self.is_zero() || self.lc().is_one() {
            return;
        }
        let inv = self.lc().recip();
        for (_, c) in &mut self.terms {
            *c *= &inv;
        }
    }

    pub(crate) fn padded(&self, n: usize) -> Poly {
        Poly { terms: self.terms.iter().map(|(m, c)| (m.padded(n), c.clone())).collect() }
    }

    /// `self - c * t * g` where the terms of `g` from `skip` on are used.
    fn sub_scaled(&self, c: &Rational, t: &Mono, g: &Poly, skip: usize, o: Order) -> Poly {
        let mut out = Vec::with_capacity(self.terms.len() + g.terms.len());
        let mut a = self.terms.iter().peekable();
        let mut b = g.terms[skip..].iter().map(|(m, k)| (t.mul(m), k * c)).peekable();
        loop {
            match (a.peek(), b.peek()) {
                (Some(x), Some(y)) => match o.cmp(&x.0, &y.0) {
                    Ordering::Greater => out.push(a.next().unwrap().clone()),
                    Ordering::Less => {
                        let (m, k) = b.next().unwrap();
                        out.push((m, -k));
                    }
                    Ordering::Equal => {
                        let (m, k1) = a.next().unwrap();
                        let (_, k2) = b.next().unwrap();
                        let s = k1 - k2;
                        if !s.is_zero() {
                            out.push((m.clone(), s));
                        }
                    }
                },
                (Some(_), None) => out.push(a.next().unwrap().clone()),
                (None, Some(_)) => {
                    let (m, k) = b.next().unwrap();
                    out.push((m, -k));
                }
                (None, None) => break,
            }
        }
        Poly { terms: out }
    }
}

/// Finds the first (in list order) monic divisor of `m`.
fn find_divisor<'a>(m: &Mono, basis: impl Iterator<Item = &'a Poly>) -> Option<&'a Poly> {
    basis.into_iter().find(|g| g.lm().divides(m))
}

/// Full reduction: the largest reducible term is rewritten first, against
/// the first applicable divisor. Divisors must be monic.
pub(crate) fn normal_form<'a, I>(f: &Poly, divisors: I, o: Order) -> Poly
where
    I: Iterator<Item = &'a Poly> + Clone,
{
    let mut rest = f.clone();
    let mut done: Vec<(Mono, Rational)> = Vec::new();
    while let Some((m, c)) = rest.terms.first().cloned() {
        match find_divisor(&m, divisors.clone()) {
            Some(g) => {
                let t = m.div(g.lm());
                let mut tail = Poly { terms: rest.terms[1..].to_vec() };
                if g.terms.len() > 1 {
                    tail = tail.sub_scaled(&c, &t, g, 1, o);
                }
                rest = tail;
            }
            None => {
                done.push((m, c));
                rest.terms.remove(0);
            }
        }
    }
    Poly { terms: done }
}

/// Division for general (not necessarily monic) divisors, used by the
/// public `normal_form`.
pub(crate) fn normal_form_general(f: &Poly, divisors: &[Poly], o: Order) -> Poly {
    let monic: Vec<Poly> = divisors
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| {
            let mut g = g.clone();
            g.make_monic();
            g
        })
        .collect();
    normal_form(f, monic.iter(), o)
}

#[derive(Clone, Debug)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Mono,
}

pub(crate) struct Buchberger<'r> {
    ring: &'r Ring,
    order: Order,
    basis: Vec<Poly>,
    active: Vec<bool>,
    pairs: Vec<Pair>,
}

impl<'r> Buchberger<'r> {
    pub(crate) fn new(ring: &'r Ring, order: Order) -> Self {
        Buchberger { ring, order, basis: Vec::new(), active: Vec::new(), pairs: Vec::new() }
    }

    /// Adds polynomials already forming a Gröbner basis (monic, pairwise
    /// non-redundant). No pairs among them are scheduled.
    pub(crate) fn seed(&mut self, gb: Vec<Poly>) {
        for g in gb {
            self.basis.push(g);
            self.active.push(true);
        }
    }

    fn active_basis(&self) -> impl Iterator<Item = &Poly> + Clone {
        self.basis.iter().zip(&self.active).filter(|(_, &a)| a).map(|(g, _)| g)
    }

    pub(crate) fn add(&mut self, p: Poly) {
        let mut r = normal_form(&p, self.active_basis(), self.order);
        if r.is_zero() {
            return;
        }
        r.make_monic();
        self.insert(r);
    }

    fn insert(&mut self, h: Poly) {
        let vars = self.ring.vars();
        let idx = self.basis.len();
        let t = h.lm().clone();

        let mut cands: Vec<(Pair, bool)> = self
            .basis
            .iter()
            .enumerate()
            .filter(|(i, _)| self.active[*i])
            .map(|(i, g)| {
                let lcm = g.lm().lcm(&t, vars);
                let coprime = g.lm().coprime(&t);
                (Pair { i, j: idx, lcm }, coprime)
            })
            .collect();

        // Chain criterion on the new pairs: drop when another new lcm properly divides.
        let keep: Vec<bool> = cands
            .iter()
            .map(|(p, _)| {
                !cands
                    .iter()
                    .any(|(q, _)| q.lcm.divides(&p.lcm) && q.lcm != p.lcm)
            })
            .collect();
        let mut filtered: Vec<(Pair, bool)> =
            cands.drain(..).zip(keep).filter(|(_, k)| *k).map(|(c, _)| c).collect();
        // Equal lcms: one representative, or none if any is coprime.
        let mut new_pairs: Vec<Pair> = Vec::new();
        filtered.sort_by(|a, b| a.0.lcm.exps().cmp(b.0.lcm.exps()));
        let mut k = 0;
        while k < filtered.len() {
            let mut l = k + 1;
            while l < filtered.len() && filtered[l].0.lcm == filtered[k].0.lcm {
                l += 1;
            }
            if !filtered[k..l].iter().any(|(_, cop)| *cop) {
                new_pairs.push(filtered[k].0.clone());
            }
            k = l;
        }

        // Old pairs made redundant by the new leading monomial.
        let basis = &self.basis;
        self.pairs.retain(|p| {
            if !t.divides(&p.lcm) {
                return true;
            }
            let li = basis[p.i].lm().lcm(&t, vars);
            let lj = basis[p.j].lm().lcm(&t, vars);
            li == p.lcm || lj == p.lcm
        });

        for (i, g) in self.basis.iter().enumerate() {
            if self.active[i] && t.divides(g.lm()) {
                self.active[i] = false;
            }
        }

        self.basis.push(h);
        self.active.push(true);
        self.pairs.extend(new_pairs);
    }

    fn spoly(&self, p: &Pair) -> Poly {
        let f = &self.basis[p.i];
        let g = &self.basis[p.j];
        let tf = p.lcm.div(f.lm());
        let tg = p.lcm.div(g.lm());
        let fpart = Poly { terms: f.terms[1..].iter().map(|(m, c)| (tf.mul(m), c.clone())).collect() };
        fpart.sub_scaled(&Rational::one(), &tg, g, 1, self.order)
    }

    pub(crate) fn run(&mut self) {
        while !self.pairs.is_empty() {
            let order = self.order;
            let (best, _) = self
                .pairs
                .iter()
                .enumerate()
                .min_by(|a, b| order.cmp(&a.1.lcm, &b.1.lcm).then((a.1.i, a.1.j).cmp(&(b.1.i, b.1.j))))
                .unwrap();
            let pair = self.pairs.swap_remove(best);
            let s = self.spoly(&pair);
            if s.is_zero() {
                continue;
            }
            let mut r = normal_form(&s, self.active_basis(), self.order);
            if r.is_zero() {
                continue;
            }
            r.make_monic();
            self.insert(r);
        }
    }

    /// Reduced basis, sorted ascending by leading monomial.
    pub(crate) fn reduced(&self) -> Vec<Poly> {
        let mut minimal: Vec<Poly> = self.active_basis().cloned().collect();
        minimal.sort_by(|a, b| self.order.cmp(a.lm(), b.lm()));
        let mut out = Vec::with_capacity(minimal.len());
        for k in 0..minimal.len() {
            let g = &minimal[k];
            let tail = Poly { terms: g.terms[1..].to_vec() };
            let others = minimal.iter().enumerate().filter(|(l, _)| *l != k).map(|(_, p)| p);
            let mut r = normal_form(&tail, others, self.order);
            r.terms.insert(0, g.terms[0].clone());
            out.push(r);
        }
        out
    }
}

/// Reduced Gröbner basis of `gens` (any order, zero inputs ignored).
pub(crate) fn groebner(ring: &Ring, order: Order, gens: Vec<Poly>) -> Vec<Poly> {
    let mut b = Buchberger::new(ring, order);
    for g in gens {
        if !g.is_zero() {
            b.add(g);
            b.run();
        }
    }
    b.reduced()
}

/// S-polynomial of two monic polynomials (used by invariant checks).
pub(crate) fn s_polynomial(ring: &Ring, order: Order, f: &Poly, g: &Poly) -> Poly {
    let mut b = Buchberger::new(ring, order);
    b.seed(vec![f.clone(), g.clone()]);
    let lcm = f.lm().lcm(g.lm(), ring.vars());
    b.spoly(&Pair { i: 0, j: 1, lcm })
}
