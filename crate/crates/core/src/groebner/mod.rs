//! Gröbner bases over finite truncations `Q[x^(<=H)]`: division, reduced
//! bases, elimination of high-order derivatives and staircase enumeration.

pub(crate) mod engine;

use std::collections::BTreeSet;
use std::fmt;

use crate::diffpoly::{compare, DMono, DPoly, DVar, OrderKind};
use crate::error::{Error, Result};
use engine::{Order, Poly, Ring};

/// The finite variable set `{x_b^(j) : b in bases, j <= max_order}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Truncation {
    bases: Vec<u32>,
    max_order: u32,
}

impl Truncation {
    pub fn new<I: IntoIterator<Item = u32>>(bases: I, max_order: u32) -> Self {
        let bases: BTreeSet<u32> = bases.into_iter().collect();
        Truncation { bases: bases.into_iter().collect(), max_order }
    }

    /// The smallest truncation containing every variable of `polys`.
    pub fn of_polys(polys: &[DPoly]) -> Self {
        let bases = polys.iter().flat_map(|p| p.bases()).collect::<BTreeSet<_>>();
        let max_order = polys.iter().filter_map(DPoly::ord).max().unwrap_or(0);
        Truncation::new(bases, max_order)
    }

    pub fn bases(&self) -> &[u32] {
        &self.bases
    }

    pub fn max_order(&self) -> u32 {
        self.max_order
    }

    pub fn with_max_order(&self, max_order: u32) -> Self {
        Truncation { bases: self.bases.clone(), max_order }
    }

    /// Variables in ascending `(order, base)` order.
    pub fn vars(&self) -> Vec<DVar> {
        (0..=self.max_order)
            .flat_map(|o| self.bases.iter().map(move |&b| DVar::new(b, o)))
            .collect()
    }

    pub fn contains(&self, m: &DMono) -> bool {
        m.vars().all(|v| v.order <= self.max_order && self.bases.binary_search(&v.base).is_ok())
    }

    pub fn contains_poly(&self, p: &DPoly) -> bool {
        p.monomials().all(|m| self.contains(m))
    }

    pub(crate) fn ring(&self) -> Ring {
        Ring::new(self.vars())
    }
}

/// A reduced Gröbner basis: monic elements sorted ascending by leading
/// monomial, tagged with its order and ambient truncation.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GBasis {
    gens: Vec<DPoly>,
    leads: Vec<DMono>,
    order: OrderKind,
    truncation: Truncation,
}

impl fmt::Debug for GBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GBasis")
            .field("order", &self.order)
            .field("truncation", &self.truncation)
            .field("gens", &self.gens)
            .finish()
    }
}

impl GBasis {
    pub(crate) fn from_engine(ring: &Ring, polys: &[Poly], order: OrderKind, truncation: Truncation) -> Self {
        let gens: Vec<DPoly> = polys.iter().map(|p| ring.to_dpoly(p)).collect();
        let leads = polys.iter().map(|p| ring.to_dmono(p.lm())).collect();
        GBasis { gens, leads, order, truncation }
    }

    /// Rebuilds a basis from stored monic generators (e.g. a cache entry),
    /// re-deriving the leading monomials and the canonical sort.
    pub fn from_reduced_parts(gens: Vec<DPoly>, order: OrderKind, truncation: Truncation) -> Result<Self> {
        let mut pairs = Vec::with_capacity(gens.len());
        for g in gens {
            if !truncation.contains_poly(&g) {
                return Err(Error::InvalidArgument("generator outside truncation".into()));
            }
            let g = g.monic(order)?;
            let (lm, _) = g.leading(order)?;
            pairs.push((lm, g));
        }
        pairs.sort_by(|a, b| compare(&a.0, &b.0, order));
        let (leads, gens) = pairs.into_iter().unzip();
        Ok(GBasis { gens, leads, order, truncation })
    }

    pub fn gens(&self) -> &[DPoly] {
        &self.gens
    }

    pub fn leading_monomials(&self) -> &[DMono] {
        &self.leads
    }

    pub fn order(&self) -> OrderKind {
        self.order
    }

    pub fn truncation(&self) -> &Truncation {
        &self.truncation
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn reduce(&self, f: &DPoly) -> DPoly {
        normal_form(f, &self.gens, self.order)
    }

    pub fn contains(&self, f: &DPoly) -> bool {
        self.reduce(f).is_zero()
    }

    pub fn is_standard(&self, m: &DMono) -> bool {
        !self.leads.iter().any(|l| l.divides(m))
    }
}

fn ring_of(polys: &[&DPoly]) -> Ring {
    let vars: BTreeSet<DVar> = polys.iter().flat_map(|p| p.monomials().flat_map(|m| m.vars())).collect();
    Ring::new(vars.into_iter().collect())
}

/// Multivariate division of `f` by `g`: the `o`-largest reducible monomial is
/// rewritten first, against the first applicable element of `g`.
pub fn normal_form(f: &DPoly, g: &[DPoly], o: OrderKind) -> DPoly {
    let mut all: Vec<&DPoly> = vec![f];
    all.extend(g.iter());
    let ring = ring_of(&all);
    let ord = Order::Kind(o);
    let fp = ring.poly(f, ord).expect("ring covers f");
    let gs: Vec<Poly> = g.iter().map(|p| ring.poly(p, ord).expect("ring covers g")).collect();
    ring.to_dpoly(&engine::normal_form_general(&fp, &gs, ord))
}

/// S-polynomial of the monic forms of `f` and `g`.
pub fn s_polynomial(f: &DPoly, g: &DPoly, o: OrderKind) -> Result<DPoly> {
    let ring = ring_of(&[f, g]);
    let ord = Order::Kind(o);
    let fp = ring.poly(&f.monic(o)?, ord).expect("ring covers f");
    let gp = ring.poly(&g.monic(o)?, ord).expect("ring covers g");
    Ok(ring.to_dpoly(&engine::s_polynomial(&ring, ord, &fp, &gp)))
}

/// Reduced Gröbner basis of `gens` in the smallest truncation containing them.
pub fn buchberger(gens: &[DPoly], o: OrderKind) -> Result<GBasis> {
    buchberger_in(gens, o, &Truncation::of_polys(gens))
}

/// Reduced Gröbner basis of `gens` inside an explicit truncation.
pub fn buchberger_in(gens: &[DPoly], o: OrderKind, truncation: &Truncation) -> Result<GBasis> {
    if !o.is_admissible_for_basis() {
        return Err(Error::OrderNotAdmissible);
    }
    if let Some(p) = gens.iter().find(|p| !truncation.contains_poly(p)) {
        return Err(Error::InvalidArgument(format!("generator {p:?} lies outside the truncation")));
    }
    let ring = truncation.ring();
    let ord = Order::Kind(o);
    let polys = gens.iter().map(|p| ring.poly(p, ord).expect("checked above")).collect();
    let gb = engine::groebner(&ring, ord, polys);
    Ok(GBasis::from_engine(&ring, &gb, o, truncation.clone()))
}

/// How high-order derivatives are eliminated before restricting to `x^(<=h)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Elimination {
    /// Pure lexicographic basis over the whole truncation.
    Lex,
    /// Block order: degree in the eliminated variables first, then `DegLex`.
    #[default]
    Block,
}

impl Elimination {
    pub(crate) fn order(self, truncation: &Truncation, h: u32) -> Order {
        match self {
            Elimination::Lex => Order::Kind(OrderKind::Lex),
            Elimination::Block => Order::Elim { split: truncation.bases().len() * (h as usize + 1) },
        }
    }
}

/// Selects the elements of an ambient elimination basis that live in
/// `x^(<=h)` and recomputes their reduced basis under `target`.
pub(crate) fn restrict(ring: &Ring, ambient: &[Poly], h: u32, bases: &[u32], target: OrderKind) -> Result<GBasis> {
    let low = Truncation::new(bases.iter().copied(), h);
    let selected: Vec<DPoly> = ambient
        .iter()
        .map(|p| ring.to_dpoly(p))
        .filter(|p| p.ord().is_none_or(|o| o <= h))
        .collect();
    buchberger_in(&selected, target, &low)
}

/// Reduced `DegLex` basis of `<gens> ∩ Q[x^(<=h)]`, where `gens` live in
/// `Q[x^(<=ambient)]`.
pub fn eliminate_above(gens: &[DPoly], h: u32, ambient: u32) -> Result<GBasis> {
    eliminate_above_with(gens, h, ambient, Elimination::default(), OrderKind::DegLex)
}

pub fn eliminate_above_with(
    gens: &[DPoly],
    h: u32,
    ambient: u32,
    strategy: Elimination,
    target: OrderKind,
) -> Result<GBasis> {
    if h > ambient {
        return Err(Error::BoundOutOfRange { h, ambient });
    }
    if !target.is_admissible_for_basis() {
        return Err(Error::OrderNotAdmissible);
    }
    let bases = gens.iter().flat_map(|p| p.bases()).collect::<BTreeSet<_>>();
    let trunc = Truncation::new(bases, ambient);
    if let Some(p) = gens.iter().find(|p| !trunc.contains_poly(p)) {
        return Err(Error::InvalidArgument(format!("generator {p:?} has order above {ambient}")));
    }
    let ring = trunc.ring();
    let ord = strategy.order(&trunc, h);
    let polys = gens.iter().map(|p| ring.poly(p, ord).expect("checked above")).collect();
    let gb = engine::groebner(&ring, ord, polys);
    restrict(&ring, &gb, h, trunc.bases(), target)
}

/// Vector-space dimension of a quotient by a monomial staircase.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum QuotientDim {
    Finite(u64),
    Infinite,
}

impl QuotientDim {
    pub fn finite(self) -> Option<u64> {
        match self {
            QuotientDim::Finite(d) => Some(d),
            QuotientDim::Infinite => None,
        }
    }
}

impl fmt::Display for QuotientDim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuotientDim::Finite(d) => write!(f, "{d}"),
            QuotientDim::Infinite => write!(f, "infinite"),
        }
    }
}

fn has_pure_powers(g: &GBasis) -> bool {
    g.truncation.vars().iter().all(|&v| {
        g.leads.iter().any(|l| l.exps().len() == 1 && l.exps()[0].0 == v)
    })
}

/// Depth-first walk over the staircase; calls `visit` on every standard
/// monomial (as a dense exponent vector over `vars`).
fn walk_staircase(vars: &[DVar], leads: &[Vec<u32>], visit: &mut dyn FnMut(&[u32])) {
    fn go(k: usize, cur: &mut Vec<u32>, leads: &[Vec<u32>], visit: &mut dyn FnMut(&[u32])) {
        if k == cur.len() {
            visit(cur);
            return;
        }
        loop {
            // Later variables are still zero, so divisibility here is final for all extensions.
            if leads.iter().any(|l| l.iter().zip(cur.iter()).all(|(a, b)| a <= b)) {
                break;
            }
            go(k + 1, cur, leads, visit);
            cur[k] += 1;
        }
        cur[k] = 0;
    }
    let mut cur = vec![0; vars.len()];
    if vars.is_empty() {
        if !leads.iter().any(|l| l.is_empty()) {
            visit(&cur);
        }
        return;
    }
    go(0, &mut cur, leads, visit);
}

fn dense_leads(g: &GBasis, vars: &[DVar]) -> Vec<Vec<u32>> {
    g.leads.iter().map(|l| vars.iter().map(|&v| l.exponent(v)).collect()).collect()
}

/// Number of standard monomials, or `Infinite` when some variable of the
/// truncation has no pure power among the leading monomials.
pub fn quotient_dimension(g: &GBasis) -> QuotientDim {
    if !has_pure_powers(g) {
        return QuotientDim::Infinite;
    }
    let vars = g.truncation.vars();
    let leads = dense_leads(g, &vars);
    let mut count = 0u64;
    walk_staircase(&vars, &leads, &mut |_| count += 1);
    QuotientDim::Finite(count)
}

/// All standard monomials, sorted ascending under the basis order.
pub fn standard_monomials(g: &GBasis) -> Result<Vec<DMono>> {
    if !has_pure_powers(g) {
        return Err(Error::InfiniteQuotient);
    }
    let vars = g.truncation.vars();
    let leads = dense_leads(g, &vars);
    let mut out = Vec::new();
    walk_staircase(&vars, &leads, &mut |e| {
        out.push(DMono::from_pairs(vars.iter().zip(e).map(|(&v, &k)| (v, k))));
    });
    out.sort_by(|a, b| compare(a, b, g.order));
    Ok(out)
}

/// Canonical comparison of two bases' generator sets.
pub fn same_ideal_basis(a: &GBasis, b: &GBasis) -> bool {
    a.order == b.order
        && a.gens.len() == b.gens.len()
        && a.gens.iter().zip(&b.gens).all(|(x, y)| x == y)
}
