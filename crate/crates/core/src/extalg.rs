//! The differential exterior algebra `Λ(η^(∞)) ⊗ Λ(ξ^(∞))` and the
//! embedding `x -> Σ_j η_j ⊗ ξ_j` whose kernel is `<x^m>^(∞)`.
//!
//! Each side's wedge monomial is a bit set over generators keyed by
//! `(index, order)`; bit `index * 32 + order`. The product is the plain tensor
//! product `(a⊗b)(c⊗d) = (a∧c)⊗(b∧d)`, each side contributing the sign of
//! the permutation that sorts its wedge.

use std::collections::hash_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::diffpoly::{compare, rat, DMono, DPoly, DVar, OrderKind, Rational};
use crate::error::{Error, Result};

/// Orders per generator index in a [`Wedge`].
pub const ORDER_SLOTS: u32 = 32;
/// Generator indices per side; supports multiplicities `m <= 5`.
pub const INDEX_SLOTS: u32 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Eta,
    Xi,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExtGen {
    pub side: Side,
    pub index: u32,
    pub order: u32,
}

impl ExtGen {
    pub fn eta(index: u32, order: u32) -> Self {
        ExtGen { side: Side::Eta, index, order }
    }

    pub fn xi(index: u32, order: u32) -> Self {
        ExtGen { side: Side::Xi, index, order }
    }

    fn bit(self) -> Result<u32> {
        if self.index >= INDEX_SLOTS || self.order >= ORDER_SLOTS {
            return Err(Error::GeneratorOutOfRange { index: self.index, order: self.order });
        }
        Ok(self.index * ORDER_SLOTS + self.order)
    }
}

/// A sorted wedge of distinct generators on one side.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Wedge(u128);

impl Wedge {
    pub const EMPTY: Wedge = Wedge(0);

    pub fn len(self) -> u32 {
        self.0.count_ones()
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, index: u32, order: u32) -> bool {
        index < INDEX_SLOTS && order < ORDER_SLOTS && self.0 >> (index * ORDER_SLOTS + order) & 1 == 1
    }

    /// `(index, order)` pairs in canonical order.
    pub fn gens(self) -> impl Iterator<Item = (u32, u32)> {
        let bits = self.0;
        (0..128u32).filter(move |b| bits >> b & 1 == 1).map(|b| (b / ORDER_SLOTS, b % ORDER_SLOTS))
    }

    pub fn weight(self) -> u64 {
        self.gens().map(|(_, o)| o as u64).sum()
    }

    /// `self ∧ other` as `(wedge, sign)`, or `None` if a generator repeats.
    fn wedge(self, other: Wedge) -> Option<(Wedge, bool)> {
        if self.0 & other.0 != 0 {
            return None;
        }
        // Sign: pairs (p in self, q in other) with p > q must be swapped.
        let mut swaps = 0u32;
        let mut rest = other.0;
        while rest != 0 {
            let q = rest.trailing_zeros();
            rest &= rest - 1;
            swaps += if q == 127 { 0 } else { (self.0 >> (q + 1)).count_ones() };
        }
        Some((Wedge(self.0 | other.0), swaps % 2 == 1))
    }

    /// Leibniz derivative: every generator in turn raised by one order. The
    /// raised generator keeps its sorted position, so no sign arises.
    fn derive(self) -> Result<Vec<Wedge>> {
        let mut out = Vec::new();
        let mut rest = self.0;
        while rest != 0 {
            let p = rest.trailing_zeros();
            rest &= rest - 1;
            if p % ORDER_SLOTS == ORDER_SLOTS - 1 {
                return Err(Error::GeneratorOutOfRange { index: p / ORDER_SLOTS, order: ORDER_SLOTS });
            }
            if self.0 >> (p + 1) & 1 == 0 {
                out.push(Wedge(self.0 & !(1 << p) | 1 << (p + 1)));
            }
        }
        Ok(out)
    }
}

/// A basis element `η-wedge ⊗ ξ-wedge`.
pub type ExtBasis = (Wedge, Wedge);

/// An element of `Λ(η) ⊗ Λ(ξ)` with exact rational coefficients.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct ExtElem {
    terms: BTreeMap<ExtBasis, Rational>,
}

impl ExtElem {
    pub fn zero() -> Self {
        ExtElem::default()
    }

    pub fn one() -> Self {
        ExtElem::basis(Wedge::EMPTY, Wedge::EMPTY, Rational::one())
    }

    pub fn basis(eta: Wedge, xi: Wedge, c: Rational) -> Self {
        let mut e = ExtElem::zero();
        e.add_term((eta, xi), c);
        e
    }

    /// The signed basis element `c · (g_1 ∧ ... ) ⊗ (k_1 ∧ ...)` with the
    /// wedges multiplied in the given (not necessarily sorted) order.
    pub fn from_gens(eta: &[(u32, u32)], xi: &[(u32, u32)], c: Rational) -> Result<Self> {
        let mut acc = ExtElem::basis(Wedge::EMPTY, Wedge::EMPTY, c);
        for &(i, o) in eta {
            let w = Wedge(1 << ExtGen::eta(i, o).bit()?);
            acc = acc.mul(&ExtElem::basis(w, Wedge::EMPTY, Rational::one()));
        }
        for &(i, o) in xi {
            let w = Wedge(1 << ExtGen::xi(i, o).bit()?);
            acc = acc.mul(&ExtElem::basis(Wedge::EMPTY, w, Rational::one()));
        }
        Ok(acc)
    }

    /// `η_i^(a) ⊗ ξ_i^(b)` style single pair.
    pub fn pair(eta: ExtGen, xi: ExtGen) -> Result<Self> {
        Ok(ExtElem::basis(Wedge(1 << eta.bit()?), Wedge(1 << xi.bit()?), Rational::one()))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExtBasis, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, b: &ExtBasis) -> Rational {
        self.terms.get(b).cloned().unwrap_or_else(Rational::zero)
    }

    fn add_term(&mut self, b: ExtBasis, c: Rational) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(b).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&b);
        }
    }

    pub fn add(&self, other: &ExtElem) -> ExtElem {
        let mut out = self.clone();
        for (b, c) in &other.terms {
            out.add_term(*b, c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> ExtElem {
        if c.is_zero() {
            return ExtElem::zero();
        }
        ExtElem { terms: self.terms.iter().map(|(b, a)| (*b, a * c)).collect() }
    }

    pub fn sub(&self, other: &ExtElem) -> ExtElem {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn mul(&self, other: &ExtElem) -> ExtElem {
        let mut out = ExtElem::zero();
        for ((ea, xa), ca) in &self.terms {
            for ((eb, xb), cb) in &other.terms {
                let Some((e, se)) = ea.wedge(*eb) else { continue };
                let Some((x, sx)) = xa.wedge(*xb) else { continue };
                let c = ca * cb;
                out.add_term((e, x), if se != sx { -c } else { c });
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> ExtElem {
        let mut acc = ExtElem::one();
        for _ in 0..k {
            acc = acc.mul(self);
            if acc.is_zero() {
                break;
            }
        }
        acc
    }

    fn derive_side(&self, side: Side) -> Result<ExtElem> {
        let mut out = ExtElem::zero();
        for (&(e, x), c) in &self.terms {
            let w = if side == Side::Eta { e } else { x };
            for d in w.derive()? {
                let b = if side == Side::Eta { (d, x) } else { (e, d) };
                out.add_term(b, c.clone());
            }
        }
        Ok(out)
    }

    /// Derivation acting on the η factor only.
    pub fn eta_derive(&self) -> Result<ExtElem> {
        self.derive_side(Side::Eta)
    }

    /// Derivation acting on the ξ factor only.
    pub fn xi_derive(&self) -> Result<ExtElem> {
        self.derive_side(Side::Xi)
    }

    /// The tensor-product derivation `∂⊗1 + 1⊗∂`.
    pub fn ext_derive(&self) -> Result<ExtElem> {
        Ok(self.eta_derive()?.add(&self.xi_derive()?))
    }

    pub fn ext_derive_n(&self, k: u32) -> Result<ExtElem> {
        let mut u = self.clone();
        for _ in 0..k {
            u = u.ext_derive()?;
        }
        Ok(u)
    }

    /// Sum of the orders of all generators in a basis element.
    pub fn weight_of(b: &ExtBasis) -> u64 {
        b.0.weight() + b.1.weight()
    }

    /// Every term has an even total number of generators.
    pub fn is_even(&self) -> bool {
        self.terms.keys().all(|(e, x)| (e.len() + x.len()) % 2 == 0)
    }

    /// Component of minimal weight.
    pub fn lowest_weight(&self) -> Result<ExtElem> {
        let w = self.terms.keys().map(ExtElem::weight_of).min().ok_or(Error::ZeroElement)?;
        Ok(ExtElem {
            terms: self
                .terms
                .iter()
                .filter(|(b, _)| ExtElem::weight_of(b) == w)
                .map(|(b, c)| (*b, c.clone()))
                .collect(),
        })
    }
}

fn fmt_wedge(f: &mut fmt::Formatter<'_>, name: &str, w: Wedge) -> fmt::Result {
    if w.is_empty() {
        return write!(f, "1");
    }
    write!(f, "(")?;
    for (k, (i, o)) in w.gens().enumerate() {
        if k > 0 {
            write!(f, " ^ ")?;
        }
        if o <= 3 {
            write!(f, "{name}{i}{}", "'".repeat(o as usize))?;
        } else {
            write!(f, "{name}{i}({o})")?;
        }
    }
    write!(f, ")")
}

impl fmt::Display for ExtElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by_key(|(b, _)| (ExtElem::weight_of(b), **b));
        for (k, ((e, x), c)) in terms.into_iter().enumerate() {
            if k == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            }
            let a = c.abs();
            if !a.is_one() {
                write!(f, "{a} ")?;
            }
            fmt_wedge(f, "eta", *e)?;
            write!(f, " (x) ")?;
            fmt_wedge(f, "xi", *x)?;
        }
        Ok(())
    }
}

impl fmt::Debug for ExtElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// `Σ_{j < m-1} η_j ⊗ ξ_j`, the image of `x`.
pub fn phi_x(m: u32) -> Result<ExtElem> {
    if m < 2 {
        return Err(Error::MultiplicityTooSmall(m));
    }
    if m - 1 > INDEX_SLOTS {
        return Err(Error::GeneratorOutOfRange { index: m - 2, order: 0 });
    }
    let mut v = ExtElem::zero();
    for j in 0..m - 1 {
        v = v.add(&ExtElem::pair(ExtGen::eta(j, 0), ExtGen::xi(j, 0))?);
    }
    Ok(v)
}

/// Image of a univariate differential polynomial under the embedding.
pub fn phi(p: &DPoly, m: u32) -> Result<ExtElem> {
    let base = phi_x(m)?;
    if p.bases().len() > 1 {
        return Err(Error::NotUnivariate);
    }
    let mut derivs: HashMap<u32, ExtElem> = HashMap::new();
    let mut out = ExtElem::zero();
    for (mono, c) in p.terms() {
        let mut acc = ExtElem::basis(Wedge::EMPTY, Wedge::EMPTY, c.clone());
        for &(v, e) in mono.exps() {
            let img = match derivs.entry(v.order) {
                Entry::Occupied(o) => o.into_mut(),
                Entry::Vacant(slot) => slot.insert(base.ext_derive_n(v.order)?),
            };
            for _ in 0..e {
                acc = acc.mul(img);
                if acc.is_zero() {
                    break;
                }
            }
            if acc.is_zero() {
                break;
            }
        }
        out = out.add(&acc);
    }
    Ok(out)
}

/// Membership in `M`: sorted orders satisfy `h_{i+m-1} > h_i + 1`.
pub fn is_reduced_support(mono: &DMono, m: u32) -> bool {
    let h = mono.orders();
    let step = m.max(1) as usize - 1;
    (0..h.len()).all(|i| i + step >= h.len() || h[i + step] > h[i] + 1)
}

/// The witness term `Π_i η_{i % (m-1)}^([i/(m-1)]) ⊗ ξ_{i % (m-1)}^(h_i - [i/(m-1)])`,
/// multiplied out left to right.
pub fn psi(mono: &DMono, m: u32) -> Result<ExtElem> {
    if m < 2 {
        return Err(Error::MultiplicityTooSmall(m));
    }
    mono.single_base()?;
    if !is_reduced_support(mono, m) {
        return Err(Error::NotReducedSupport);
    }
    let mut acc = ExtElem::one();
    for (i, &h) in mono.orders().iter().enumerate() {
        let i = i as u32;
        let (j, q) = (i % (m - 1), i / (m - 1));
        acc = acc.mul(&ExtElem::pair(ExtGen::eta(j, q), ExtGen::xi(j, h - q))?);
    }
    Ok(acc)
}

/// `(x^(q))^(m-r) (x^(q+1))^r` for `h = q m + r`.
pub fn power_derivative_lead(base: u32, m: u32, h: u32) -> DMono {
    let (q, r) = (h / m, h % m);
    DMono::from_pairs([(DVar::new(base, q), m - r), (DVar::new(base, q + 1), r)])
}

/// Reduction by `x^m, (x^m)', (x^m)'', ...` under `WDegInvLex`: the largest
/// reducible monomial is rewritten first, using the smallest applicable `h`.
/// The result is supported on `M` and congruent to `p` modulo `<x^m>^(∞)`.
pub fn reduce_by_power_derivatives(p: &DPoly, m: u32) -> Result<DPoly> {
    if m == 0 {
        return Err(Error::InvalidArgument("multiplicity must be positive".into()));
    }
    let bases = p.bases();
    if bases.len() > 1 {
        return Err(Error::NotUnivariate);
    }
    let base = bases.into_iter().next().unwrap_or(0);
    let xm = DPoly::var(DVar::new(base, 0)).pow(m);
    let mut reducers: HashMap<u32, (DMono, DPoly, Rational)> = HashMap::new();
    let o = OrderKind::WDegInvLex;
    let mut rest = p.clone();
    let mut done = DPoly::zero();
    while !rest.is_zero() {
        let mut terms: Vec<(DMono, Rational)> = rest.terms().map(|(a, b)| (a.clone(), b.clone())).collect();
        terms.sort_by(|a, b| compare(&b.0, &a.0, o));
        let mut rewritten = false;
        for (mono, c) in terms {
            let hit = (0..=mono.tord() as u32).find(|&h| power_derivative_lead(base, m, h).divides(&mono));
            let Some(h) = hit else {
                done.add_term(mono.clone(), c.clone());
                rest.add_term(mono, -c);
                continue;
            };
            let (lead, g, lc) = reducers.entry(h).or_insert_with(|| {
                let g = xm.derive(h);
                let lead = power_derivative_lead(base, m, h);
                let lc = g.coeff(&lead);
                (lead, g, lc)
            });
            let t = mono.div(lead).expect("divisibility checked");
            let factor = &c / &*lc;
            rest = rest - g.mul_mono(&t).scale(&factor);
            rewritten = true;
            break;
        }
        if !rewritten {
            break;
        }
    }
    Ok(done)
}

/// Whether every term contains `η_j` and `ξ_j` (order zero) for some
/// `r - 1 <= j <= m - 2`, i.e. membership in the two-sided ideal generated
/// by those diagonal pairs.
pub fn in_diagonal_ideal(u: &ExtElem, r: u32, m: u32) -> Result<bool> {
    if r == 0 || r >= m {
        return Err(Error::InvalidArgument(format!("need 1 <= r < m, got r = {r}, m = {m}")));
    }
    Ok(u.terms.keys().all(|(e, x)| (r - 1..=m - 2).any(|j| e.contains(j, 0) && x.contains(j, 0))))
}

/// `v_i = ((1 + ∂η)(1 + ∂ξ))^i v_0` and `u_i = (∂η + ∂ξ + ∂η∂ξ)^i v_0`
/// for `i = 0..=h`, with `v_0 = Σ_j η_j ⊗ ξ_j`.
pub fn deformation_vectors(m: u32, h: u32) -> Result<(Vec<ExtElem>, Vec<ExtElem>)> {
    let v0 = phi_x(m)?;
    let mut v = vec![v0.clone()];
    let mut u = vec![v0];
    for i in 1..=h as usize {
        let pv = &v[i - 1];
        let de = pv.eta_derive()?;
        let dx = pv.xi_derive()?;
        let dex = de.xi_derive()?;
        v.push(pv.add(&de).add(&dx).add(&dex));

        let pu = &u[i - 1];
        let de = pu.eta_derive()?;
        let dx = pu.xi_derive()?;
        let dex = de.xi_derive()?;
        u.push(de.add(&dx).add(&dex));
    }
    Ok((v, u))
}

/// Binomial coefficient as a rational, for the `v_i = Σ C(i,j) u_j` identity.
pub fn binomial(n: u32, k: u32) -> Rational {
    if k > n {
        return Rational::zero();
    }
    let mut acc = rat(1);
    for j in 0..k {
        acc = acc * rat((n - j) as i64) / rat((j + 1) as i64);
    }
    acc
}
