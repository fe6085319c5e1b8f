//! Differential polynomial ring `Q[x_i^(j)]` with the derivation `(x_i^(j))' = x_i^(j+1)`.
//!
//! Variables are [`DVar`]s, monomials are sparse exponent maps ([`DMono`]) and
//! polynomials ([`DPoly`]) carry exact rational coefficients. Monomial orders
//! are selected by [`OrderKind`] and evaluated with [`compare`].

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact coefficient type.
pub type Rational = BigRational;

pub(crate) fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// A derivative `x_base^(order)`.
///
/// Variables compare by `(order, base)`, so `x < x' < x'' < ...` and every
/// derivative of order `k + 1` is larger than every derivative of order `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DVar {
    pub base: u32,
    pub order: u32,
}

impl DVar {
    pub const fn new(base: u32, order: u32) -> Self {
        DVar { base, order }
    }

    pub fn derive(self) -> Self {
        DVar { base: self.base, order: self.order + 1 }
    }
}

impl Ord for DVar {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.order, self.base).cmp(&(other.order, other.base))
    }
}

impl PartialOrd for DVar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A monomial: variables with positive exponents, sorted ascending by [`DVar`].
///
/// The empty monomial is `1`. `deg` and `tord` (sum of orders counted with
/// multiplicity) are cached.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct DMono {
    exps: Vec<(DVar, u32)>,
    deg: u32,
    tord: u64,
}

impl DMono {
    pub fn one() -> Self {
        DMono::default()
    }

    pub fn var(v: DVar) -> Self {
        DMono::var_pow(v, 1)
    }

    pub fn var_pow(v: DVar, e: u32) -> Self {
        if e == 0 {
            return DMono::one();
        }
        DMono { exps: vec![(v, e)], deg: e, tord: v.order as u64 * e as u64 }
    }

    /// Builds a monomial from arbitrary `(var, exponent)` pairs; repeated
    /// variables are merged and zero exponents dropped.
    pub fn from_pairs<I: IntoIterator<Item = (DVar, u32)>>(pairs: I) -> Self {
        let mut map: BTreeMap<DVar, u32> = BTreeMap::new();
        for (v, e) in pairs {
            *map.entry(v).or_insert(0) += e;
        }
        DMono::from_sorted(map.into_iter().filter(|&(_, e)| e > 0).collect())
    }

    /// Univariate monomial in base `base` from a list of derivative orders
    /// (with repetition), e.g. `[0, 1, 1]` is `x (x')^2`.
    pub fn from_orders(base: u32, orders: &[u32]) -> Self {
        DMono::from_pairs(orders.iter().map(|&o| (DVar::new(base, o), 1)))
    }

    fn from_sorted(exps: Vec<(DVar, u32)>) -> Self {
        let deg = exps.iter().map(|&(_, e)| e).sum();
        let tord = exps.iter().map(|&(v, e)| v.order as u64 * e as u64).sum();
        DMono { exps, deg, tord }
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn exps(&self) -> &[(DVar, u32)] {
        &self.exps
    }

    pub fn exponent(&self, v: DVar) -> u32 {
        self.exps
            .binary_search_by(|&(w, _)| w.cmp(&v))
            .map(|i| self.exps[i].1)
            .unwrap_or(0)
    }

    pub fn deg(&self) -> u32 {
        self.deg
    }

    pub fn tord(&self) -> u64 {
        self.tord
    }

    /// Largest derivative order present; `None` for `1` (read as −∞).
    pub fn ord(&self) -> Option<u32> {
        self.exps.iter().map(|(v, _)| v.order).max()
    }

    /// Smallest derivative order present; `None` for `1` (read as +∞).
    pub fn lord(&self) -> Option<u32> {
        self.exps.iter().map(|(v, _)| v.order).min()
    }

    pub fn vars(&self) -> impl Iterator<Item = DVar> + '_ {
        self.exps.iter().map(|&(v, _)| v)
    }

    pub fn bases(&self) -> BTreeSet<u32> {
        self.exps.iter().map(|(v, _)| v.base).collect()
    }

    /// The base variable of a univariate monomial, `None` for `1`.
    pub fn single_base(&self) -> Result<Option<u32>> {
        let bases = self.bases();
        match bases.len() {
            0 => Ok(None),
            1 => Ok(bases.into_iter().next()),
            _ => Err(Error::NotUnivariate),
        }
    }

    /// Derivative orders with multiplicity, ascending: `h_0 <= h_1 <= ...`.
    pub fn orders(&self) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.deg as usize);
        for &(v, e) in &self.exps {
            out.extend(std::iter::repeat_n(v.order, e as usize));
        }
        out.sort_unstable();
        out
    }

    pub fn divides(&self, other: &DMono) -> bool {
        if self.deg > other.deg {
            return false;
        }
        let mut it = other.exps.iter().peekable();
        'outer: for &(v, e) in &self.exps {
            while let Some(&&(w, f)) = it.peek() {
                match w.cmp(&v) {
                    Ordering::Less => {
                        it.next();
                    }
                    Ordering::Equal => {
                        if f < e {
                            return false;
                        }
                        it.next();
                        continue 'outer;
                    }
                    Ordering::Greater => return false,
                }
            }
            return false;
        }
        true
    }

    /// `self / other`, or `None` when `other` does not divide `self`.
    pub fn div(&self, other: &DMono) -> Option<DMono> {
        if !other.divides(self) {
            return None;
        }
        let exps = self
            .exps
            .iter()
            .filter_map(|&(v, e)| {
                let r = e - other.exponent(v);
                (r > 0).then_some((v, r))
            })
            .collect();
        Some(DMono::from_sorted(exps))
    }

    fn zip_with(&self, other: &DMono, f: impl Fn(u32, u32) -> u32) -> DMono {
        let mut out = Vec::with_capacity(self.exps.len() + other.exps.len());
        let (mut i, mut j) = (0, 0);
        while i < self.exps.len() || j < other.exps.len() {
            let a = self.exps.get(i);
            let b = other.exps.get(j);
            let (v, ea, eb) = match (a, b) {
                (Some(&(va, ea)), Some(&(vb, eb))) => match va.cmp(&vb) {
                    Ordering::Less => {
                        i += 1;
                        (va, ea, 0)
                    }
                    Ordering::Greater => {
                        j += 1;
                        (vb, 0, eb)
                    }
                    Ordering::Equal => {
                        i += 1;
                        j += 1;
                        (va, ea, eb)
                    }
                },
                (Some(&(va, ea)), None) => {
                    i += 1;
                    (va, ea, 0)
                }
                (None, Some(&(vb, eb))) => {
                    j += 1;
                    (vb, 0, eb)
                }
                (None, None) => unreachable!(),
            };
            let e = f(ea, eb);
            if e > 0 {
                out.push((v, e));
            }
        }
        DMono::from_sorted(out)
    }

    pub fn lcm(&self, other: &DMono) -> DMono {
        self.zip_with(other, u32::max)
    }

    pub fn is_coprime(&self, other: &DMono) -> bool {
        self.exps.iter().all(|&(v, _)| other.exponent(v) == 0)
    }

    /// The monomial with every variable replaced by `rename(var)`.
    pub fn map_vars(&self, rename: impl Fn(DVar) -> DVar) -> DMono {
        DMono::from_pairs(self.exps.iter().map(|&(v, e)| (rename(v), e)))
    }
}

impl Mul for &DMono {
    type Output = DMono;

    fn mul(self, rhs: &DMono) -> DMono {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Mul for DMono {
    type Output = DMono;

    fn mul(self, rhs: DMono) -> DMono {
        &self * &rhs
    }
}

impl Ord for DMono {
    // Structural order for use as a map key; monomial orders go through `compare`.
    fn cmp(&self, other: &Self) -> Ordering {
        self.exps.cmp(&other.exps)
    }
}

impl PartialOrd for DMono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for DMono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", VarNames::default().mono(self))
    }
}

/// Monomial orders.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OrderKind {
    /// Pure lexicographic; higher derivatives are larger variables.
    Lex,
    /// Total degree, ties broken by `Lex`.
    DegLex,
    /// Total order (sum of derivative orders), ties broken by `Lex`.
    WLex,
    /// Total order, then degree, then *inverse* lex with `x > x' > x'' > ...`.
    WDegInvLex,
}

impl OrderKind {
    pub fn is_admissible_for_basis(self) -> bool {
        !matches!(self, OrderKind::WDegInvLex)
    }

    pub fn name(self) -> &'static str {
        match self {
            OrderKind::Lex => "lex",
            OrderKind::DegLex => "deglex",
            OrderKind::WLex => "wlex",
            OrderKind::WDegInvLex => "wdeginvlex",
        }
    }
}

impl std::str::FromStr for OrderKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "lex" => Ok(OrderKind::Lex),
            "deglex" => Ok(OrderKind::DegLex),
            "wlex" => Ok(OrderKind::WLex),
            "wdeginvlex" => Ok(OrderKind::WDegInvLex),
            _ => Err(Error::UnknownOrder(s.to_string())),
        }
    }
}

/// Lex with the variable order `(order, base)`: the first differing variable,
/// scanning from the largest, decides.
fn lex(a: &DMono, b: &DMono) -> Ordering {
    let mut ia = a.exps.iter().rev();
    let mut ib = b.exps.iter().rev();
    loop {
        match (ia.next(), ib.next()) {
            (None, None) => return Ordering::Equal,
            (Some(_), None) => return Ordering::Greater,
            (None, Some(_)) => return Ordering::Less,
            (Some(&(va, ea)), Some(&(vb, eb))) => match va.cmp(&vb) {
                Ordering::Equal => match ea.cmp(&eb) {
                    Ordering::Equal => continue,
                    o => return o,
                },
                o => return o,
            },
        }
    }
}

/// Lex with the variable order reversed (`x > x' > ...`).
fn inv_var_lex(a: &DMono, b: &DMono) -> Ordering {
    let mut ia = a.exps.iter();
    let mut ib = b.exps.iter();
    loop {
        match (ia.next(), ib.next()) {
            (None, None) => return Ordering::Equal,
            (Some(_), None) => return Ordering::Greater,
            (None, Some(_)) => return Ordering::Less,
            (Some(&(va, ea)), Some(&(vb, eb))) => match va.cmp(&vb) {
                Ordering::Equal => match ea.cmp(&eb) {
                    Ordering::Equal => continue,
                    o => return o,
                },
                // `va` is smaller in (order, base), hence larger here.
                o => return o.reverse(),
            },
        }
    }
}

pub fn compare(a: &DMono, b: &DMono, o: OrderKind) -> Ordering {
    match o {
        OrderKind::Lex => lex(a, b),
        OrderKind::DegLex => a.deg.cmp(&b.deg).then_with(|| lex(a, b)),
        OrderKind::WLex => a.tord.cmp(&b.tord).then_with(|| lex(a, b)),
        OrderKind::WDegInvLex => a
            .tord
            .cmp(&b.tord)
            .then(a.deg.cmp(&b.deg))
            .then_with(|| inv_var_lex(b, a)),
    }
}

/// A polynomial with exact rational coefficients. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct DPoly {
    terms: BTreeMap<DMono, Rational>,
}

impl DPoly {
    pub fn zero() -> Self {
        DPoly::default()
    }

    pub fn one() -> Self {
        DPoly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        DPoly::term(DMono::one(), c)
    }

    pub fn term(m: DMono, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        DPoly { terms }
    }

    pub fn mono(m: DMono) -> Self {
        DPoly::term(m, Rational::one())
    }

    pub fn var(v: DVar) -> Self {
        DPoly::mono(DMono::var(v))
    }

    pub fn from_terms<I: IntoIterator<Item = (DMono, Rational)>>(terms: I) -> Self {
        let mut p = DPoly::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
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

    pub fn terms(&self) -> impl Iterator<Item = (&DMono, &Rational)> {
        self.terms.iter()
    }

    pub fn monomials(&self) -> impl Iterator<Item = &DMono> {
        self.terms.keys()
    }

    pub fn coeff(&self, m: &DMono) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, m: DMono, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get() + c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> DPoly {
        if c.is_zero() {
            return DPoly::zero();
        }
        DPoly { terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect() }
    }

    pub fn mul_mono(&self, t: &DMono) -> DPoly {
        DPoly { terms: self.terms.iter().map(|(m, a)| (m * t, a.clone())).collect() }
    }

    pub fn pow(&self, e: u32) -> DPoly {
        let mut acc = DPoly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn bases(&self) -> BTreeSet<u32> {
        self.terms.keys().flat_map(|m| m.vars().map(|v| v.base)).collect()
    }

    /// Largest derivative order among all variables; `None` for constants.
    pub fn ord(&self) -> Option<u32> {
        self.terms.keys().filter_map(DMono::ord).max()
    }

    pub fn max_deg(&self) -> u32 {
        self.terms.keys().map(DMono::deg).max().unwrap_or(0)
    }

    /// One application of the derivation (Leibniz rule on each monomial).
    pub fn derive_once(&self) -> DPoly {
        let mut out = DPoly::zero();
        for (m, c) in &self.terms {
            for &(v, e) in m.exps() {
                let rest = m.div(&DMono::var(v)).expect("variable divides its monomial");
                let dm = &rest * &DMono::var(v.derive());
                out.add_term(dm, c * rat(e as i64));
            }
        }
        out
    }

    /// The `k`-th derivative.
    pub fn derive(&self, k: u32) -> DPoly {
        let mut p = self.clone();
        for _ in 0..k {
            p = p.derive_once();
        }
        p
    }

    /// Leading monomial and its coefficient under `o`.
    pub fn leading(&self, o: OrderKind) -> Result<(DMono, Rational)> {
        self.terms
            .iter()
            .max_by(|a, b| compare(a.0, b.0, o))
            .map(|(m, c)| (m.clone(), c.clone()))
            .ok_or(Error::NoLeadingTerm)
    }

    /// Terms sorted descending under `o`.
    pub fn sorted_terms(&self, o: OrderKind) -> Vec<(&DMono, &Rational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| compare(b.0, a.0, o));
        v
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self, o: OrderKind) -> Result<DPoly> {
        let (_, c) = self.leading(o)?;
        Ok(self.scale(&c.recip()))
    }

    /// Integer-cleared, content-free, positive leading coefficient.
    pub fn primitive(&self, o: OrderKind) -> Result<DPoly> {
        use num_integer::Integer;
        let (_, lc) = self.leading(o)?;
        let mut den = BigInt::one();
        for c in self.terms.values() {
            den = den.lcm(c.denom());
        }
        let mut content = BigInt::zero();
        for c in self.terms.values() {
            let n = c.numer() * (&den / c.denom());
            content = content.gcd(&n);
        }
        let mut factor = Rational::new(den, content);
        if lc.is_negative() {
            factor = -factor;
        }
        Ok(self.scale(&factor))
    }

    /// Image under `x^(k) -> y_1^(k) + ... + y_s^(k)`; the `y_j` get base
    /// indices `0..s`.
    pub fn substitute_sum(&self, s: u32) -> Result<DPoly> {
        if s == 0 {
            return Err(Error::InvalidArgument("substitute_sum needs s >= 1".into()));
        }
        if self.bases().len() > 1 {
            return Err(Error::NotUnivariate);
        }
        let mut cache: BTreeMap<u32, DPoly> = BTreeMap::new();
        let mut out = DPoly::zero();
        for (m, c) in &self.terms {
            let mut acc = DPoly::constant(c.clone());
            for &(v, e) in m.exps() {
                let img = cache
                    .entry(v.order)
                    .or_insert_with(|| {
                        DPoly::from_terms((0..s).map(|j| (DMono::var(DVar::new(j, v.order)), Rational::one())))
                    })
                    .clone();
                acc = &acc * &img.pow(e);
            }
            out = out + acc;
        }
        Ok(out)
    }

    /// Rewrites `self` in Taylor-coefficient coordinates `u_k = x^(k) / k!`
    /// (the coefficients of the arc `Σ u_k t^k`), i.e. substitutes
    /// `x^(k) -> k! u_k`. Monomials and leading monomials are unchanged.
    pub fn to_taylor(&self) -> DPoly {
        self.rescale_orders(|c, f| c * f)
    }

    /// Inverse of [`DPoly::to_taylor`].
    pub fn from_taylor(&self) -> DPoly {
        self.rescale_orders(|c, f| c / f)
    }

    fn rescale_orders(&self, apply: impl Fn(Rational, Rational) -> Rational) -> DPoly {
        DPoly::from_terms(self.terms.iter().map(|(m, c)| {
            let mut f = BigInt::one();
            for &(v, e) in m.exps() {
                let fact: BigInt = (1..=v.order).map(BigInt::from).product();
                f *= num_traits::pow(fact, e as usize);
            }
            (m.clone(), apply(c.clone(), Rational::from_integer(f)))
        }))
    }
}

impl Add for DPoly {
    type Output = DPoly;

    fn add(mut self, rhs: DPoly) -> DPoly {
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
        self
    }
}

impl Add for &DPoly {
    type Output = DPoly;

    fn add(self, rhs: &DPoly) -> DPoly {
        self.clone() + rhs.clone()
    }
}

impl Neg for DPoly {
    type Output = DPoly;

    fn neg(self) -> DPoly {
        DPoly { terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect() }
    }
}

impl Sub for DPoly {
    type Output = DPoly;

    fn sub(self, rhs: DPoly) -> DPoly {
        self + (-rhs)
    }
}

impl Sub for &DPoly {
    type Output = DPoly;

    fn sub(self, rhs: &DPoly) -> DPoly {
        self.clone() - rhs.clone()
    }
}

impl Mul for &DPoly {
    type Output = DPoly;

    fn mul(self, rhs: &DPoly) -> DPoly {
        let mut out = DPoly::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &rhs.terms {
                out.add_term(a * b, ca * cb);
            }
        }
        out
    }
}

impl Mul for DPoly {
    type Output = DPoly;

    fn mul(self, rhs: DPoly) -> DPoly {
        &self * &rhs
    }
}

impl fmt::Debug for DPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", VarNames::default().poly(self))
    }
}

/// Base-variable names used for printing. Index `i` names base `i`; missing
/// entries fall back to `x`, `y`, `z`, then `v<i>`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VarNames {
    names: Vec<String>,
}

impl VarNames {
    pub fn new<I: IntoIterator<Item = S>, S: Into<String>>(names: I) -> Self {
        VarNames { names: names.into_iter().map(Into::into).collect() }
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<u32> {
        self.names.iter().position(|n| n == name).map(|i| i as u32)
    }

    /// Index of `name`, registering it when unknown.
    pub fn intern(&mut self, name: &str) -> u32 {
        match self.index_of(name) {
            Some(i) => i,
            None => {
                self.names.push(name.to_string());
                (self.names.len() - 1) as u32
            }
        }
    }

    pub fn name(&self, base: u32) -> String {
        if let Some(n) = self.names.get(base as usize) {
            return n.clone();
        }
        match base {
            0 => "x".into(),
            1 => "y".into(),
            2 => "z".into(),
            b => format!("v{b}"),
        }
    }

    /// `x`, `x'`, `x''`, `x'''`, then `D(x,k)`.
    pub fn dvar(&self, v: DVar) -> String {
        let n = self.name(v.base);
        if v.order <= 3 {
            format!("{n}{}", "'".repeat(v.order as usize))
        } else {
            format!("D({n},{})", v.order)
        }
    }

    pub fn mono(&self, m: &DMono) -> String {
        if m.is_one() {
            return "1".into();
        }
        m.exps()
            .iter()
            .map(|&(v, e)| {
                let s = self.dvar(v);
                match (e, v.order) {
                    (1, _) => s,
                    (_, 1..=3) => format!("({s})^{e}"),
                    _ => format!("{s}^{e}"),
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }

    /// Canonical text: terms descending in `DegLex`, `a/b*m` coefficients,
    /// `" + "` / `" - "` separators.
    pub fn poly(&self, p: &DPoly) -> String {
        self.poly_in(p, OrderKind::DegLex)
    }

    pub fn poly_in(&self, p: &DPoly, o: OrderKind) -> String {
        if p.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (m, c)) in p.sorted_terms(o).into_iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = self.mono(m);
            if m.is_one() {
                out.push_str(&a.to_string());
            } else if a.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{a}*{mono}"));
            }
        }
        out
    }
}
