//! Fair and strongly fair monomials and the classes `F_{a,b} = F^a · F_s^b`.
//!
//! A univariate monomial with sorted orders `h_0 <= ... <= h_l` is fair when
//! `lord >= deg - 1` and strongly fair when `lord >= deg`. Membership in
//! `F_{a,b}` is decided by peeling off the longest admissible tail factor,
//! which also yields a non-overlapping decomposition.

use std::fmt;

use crate::diffpoly::DMono;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FairClass {
    /// Number of fair factors.
    pub a: u32,
    /// Number of strongly fair factors.
    pub b: u32,
}

impl FairClass {
    pub const fn new(a: u32, b: u32) -> Self {
        FairClass { a, b }
    }
}

impl fmt::Display for FairClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{{{},{}}}", self.a, self.b)
    }
}

/// Fairness of a sorted order sequence.
pub fn orders_fair(orders: &[u32]) -> bool {
    orders.first().is_none_or(|&lo| lo as usize + 1 >= orders.len())
}

pub fn orders_strongly_fair(orders: &[u32]) -> bool {
    orders.first().is_none_or(|&lo| lo as usize >= orders.len())
}

fn univariate_orders(m: &DMono) -> Result<Vec<u32>> {
    m.single_base()?;
    Ok(m.orders())
}

/// `(is_fair, is_strongly_fair)`; `1` is both.
pub fn classify(m: &DMono) -> Result<(bool, bool)> {
    let o = univariate_orders(m)?;
    Ok((orders_fair(&o), orders_strongly_fair(&o)))
}

/// Length of the longest suffix of `orders` passing `pred`.
fn longest_tail(orders: &[u32], pred: impl Fn(&[u32]) -> bool) -> usize {
    let n = orders.len();
    // Admissible tail lengths form an initial segment 0..=d.
    (1..=n).take_while(|&d| pred(&orders[n - d..])).last().unwrap_or(0)
}

/// Splits sorted `orders` into `a + b` consecutive factor lengths (fair
/// first, strongly fair last), or `None` when not in `F_{a,b}`.
fn peel(orders: &[u32], a: u32, b: u32) -> Option<Vec<usize>> {
    if a == 0 && b == 0 {
        return orders.is_empty().then(Vec::new);
    }
    let n = orders.len();
    let (d, head_ok, rest) = if b > 0 {
        let d = longest_tail(orders, orders_strongly_fair);
        let ok = n == d || orders[n - d - 1] as usize <= d;
        (d, ok, (a, b - 1))
    } else {
        let d = longest_tail(orders, orders_fair);
        let ok = n == d || (orders[n - d - 1] as usize) < d;
        (d, ok, (a - 1, 0))
    };
    if !head_ok {
        return None;
    }
    let mut lens = peel(&orders[..n - d], rest.0, rest.1)?;
    lens.push(d);
    Some(lens)
}

pub fn in_class(m: &DMono, c: FairClass) -> bool {
    match univariate_orders(m) {
        Ok(o) => peel(&o, c.a, c.b).is_some(),
        Err(_) => false,
    }
}

/// Factors `P_1, ..., P_{a+b}` (some possibly `1`) with the first `a` fair,
/// the last `b` strongly fair and `ord P_i <= lord P_{i+1}`; the last factor
/// has the largest possible degree at every step. `None` for non-members.
pub fn nonoverlap_decompose(m: &DMono, c: FairClass) -> Option<Vec<DMono>> {
    let base = m.single_base().ok()?.unwrap_or(0);
    let orders = m.orders();
    let lens = peel(&orders, c.a, c.b)?;
    let mut out = Vec::with_capacity(lens.len());
    let mut start = 0;
    for len in lens {
        out.push(DMono::from_orders(base, &orders[start..start + len]));
        start += len;
    }
    Some(out)
}

/// Order sequences of all fair monomials of order `<= h`, via the inverse of
/// [`degree_bijection`] on subsets of `{0..h}`. `h < 0` yields only `1`.
fn fair_orders(h: i64, strong: bool) -> Vec<Vec<u32>> {
    if h < 0 {
        return vec![Vec::new()];
    }
    let lo = if strong { 1 } else { 0 };
    let universe: Vec<u32> = (lo..=h as u32).collect();
    let mut out = Vec::with_capacity(1 << universe.len());
    for mask in 0u64..(1u64 << universe.len()) {
        let subset: Vec<u32> =
            universe.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &s)| s).collect();
        out.push(invert_sequence(&subset));
    }
    out
}

fn invert_sequence(s: &[u32]) -> Vec<u32> {
    let l = s.len().saturating_sub(1) as u32;
    s.iter().enumerate().map(|(j, &v)| v + (l - j as u32)).collect()
}

fn enumerate_orders(a: u32, b: u32, h: i64) -> Vec<Vec<u32>> {
    if a == 0 && b == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    if b > 0 {
        for tail in fair_orders(h, true) {
            let bound = h.min(tail.len() as i64);
            for mut head in enumerate_orders(a, b - 1, bound) {
                head.extend_from_slice(&tail);
                out.push(head);
            }
        }
    } else {
        for tail in fair_orders(h, false) {
            let bound = h.min(tail.len() as i64 - 1);
            for mut head in enumerate_orders(a - 1, 0, bound) {
                head.extend_from_slice(&tail);
                out.push(head);
            }
        }
    }
    out
}

/// All monomials of `F_{a,b} ∩ Q[x^(<=h)]` in base variable 0.
pub fn enumerate_class(c: FairClass, h: u32) -> Vec<DMono> {
    enumerate_class_in(0, c, h)
}

pub fn enumerate_class_in(base: u32, c: FairClass, h: u32) -> Vec<DMono> {
    enumerate_orders(c.a, c.b, h as i64).iter().map(|o| DMono::from_orders(base, o)).collect()
}

/// `(a + 1) * (a + b + 1)^h`.
pub fn count_class(c: FairClass, h: u32) -> u128 {
    (c.a as u128 + 1) * (c.a as u128 + c.b as u128 + 1).pow(h)
}

/// All fair (or strongly fair) monomials of order `<= h` in base 0.
pub fn fair_monomials(h: u32, strong: bool) -> Vec<DMono> {
    fair_orders(h as i64, strong).iter().map(|o| DMono::from_orders(0, o)).collect()
}

/// `(h_0, ..., h_l) -> (h_j - (l - j))_j`, a strictly increasing sequence.
pub fn degree_bijection(orders: &[u32]) -> Result<Vec<u32>> {
    if orders.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidArgument("orders must be sorted ascending".into()));
    }
    if !orders_fair(orders) {
        return Err(Error::NotFair);
    }
    let l = orders.len().saturating_sub(1) as u32;
    Ok(orders.iter().enumerate().map(|(j, &h)| h - (l - j as u32)).collect())
}

pub fn degree_bijection_inverse(seq: &[u32]) -> Result<Vec<u32>> {
    if seq.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("sequence must be strictly increasing".into()));
    }
    Ok(invert_sequence(seq))
}
