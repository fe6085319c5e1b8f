//! Truncated differential ideals and the stabilization loop for
//! `I^(<=H) ∩ Q[x^(<=h)]`, plus verification routines that tie the
//! Gröbner, combinatorial and exterior-algebra sides together.

use std::collections::BTreeSet;

use num_traits::One;

use crate::diffpoly::{DMono, DPoly, DVar, OrderKind};
use crate::error::{Error, Result};
use crate::extalg;
use crate::fairmono::{self, FairClass};
use crate::groebner::engine::{Buchberger, Poly, Ring};
use crate::groebner::{
    self, buchberger_in, quotient_dimension, standard_monomials, Elimination, GBasis, QuotientDim, Truncation,
};
use crate::par::{map_cells, Execution};

/// Generators of an ideal `<algebraic, differential^(∞)>`: derivatives are
/// taken of the differential generators only.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DiffIdeal {
    pub differential: Vec<DPoly>,
    pub algebraic: Vec<DPoly>,
}

impl DiffIdeal {
    pub fn differential(gens: Vec<DPoly>) -> Self {
        DiffIdeal { differential: gens, algebraic: Vec::new() }
    }

    /// `<x^i, (x^m)^(∞)>` in base 0.
    pub fn fat_point_with_power(m: u32, i: u32) -> Self {
        let x = DPoly::var(DVar::new(0, 0));
        DiffIdeal { differential: vec![x.pow(m)], algebraic: vec![x.pow(i)] }
    }

    pub fn bases(&self) -> BTreeSet<u32> {
        self.differential.iter().chain(&self.algebraic).flat_map(|p| p.bases()).collect()
    }

    /// Generators whose order stays `<= ambient`.
    pub fn truncated(&self, ambient: u32) -> Vec<DPoly> {
        let mut out = truncated_generators(&self.differential, ambient);
        out.extend(self.algebraic.iter().filter(|p| p.ord().unwrap_or(0) <= ambient).cloned());
        out
    }
}

/// `f^(j)` for every generator `f` and `j <= ambient - ord f`.
pub fn truncated_generators(gens: &[DPoly], ambient: u32) -> Vec<DPoly> {
    let mut out = Vec::new();
    for f in gens.iter().filter(|f| !f.is_zero()) {
        let ord = f.ord().unwrap_or(0);
        if ord > ambient {
            continue;
        }
        let mut d = f.clone();
        for j in 0..=ambient - ord {
            if j > 0 {
                d = d.derive_once();
            }
            if d.is_zero() {
                break;
            }
            out.push(d.clone());
        }
    }
    out
}

/// Cache for intersection bases keyed by ideal, target order, `h` and `H`.
pub trait BasisCache: Sync {
    fn get(&self, key: &StageKey<'_>) -> Option<GBasis>;
    fn put(&self, key: &StageKey<'_>, basis: &GBasis);
}

#[derive(Clone, Copy, Debug)]
pub struct StageKey<'a> {
    pub ideal: &'a DiffIdeal,
    pub order: OrderKind,
    pub h: u32,
    pub ambient: u32,
}

/// Ambient elimination basis of `I^(<=H)`, extended one order at a time.
/// The elimination order does not change when variables of higher order are
/// appended, so the previous basis seeds the next stage.
struct Tower {
    ideal: DiffIdeal,
    bases: Vec<u32>,
    h: u32,
    strategy: Elimination,
    ambient: u32,
    ring: Ring,
    basis: Vec<Poly>,
}

impl Tower {
    fn new(ideal: &DiffIdeal, h: u32, strategy: Elimination) -> Self {
        let trunc = Truncation::new(ideal.bases(), h);
        let ring = trunc.ring();
        let order = strategy.order(&trunc, h);
        let gens = ideal.truncated(h);
        let polys = gens.iter().map(|p| ring.poly(p, order).expect("generator in truncation")).collect();
        let basis = groebner::engine::groebner(&ring, order, polys);
        Tower { ideal: ideal.clone(), bases: trunc.bases().to_vec(), h, strategy, ambient: h, ring, basis }
    }

    fn advance_to(&mut self, ambient: u32) {
        while self.ambient < ambient {
            let next = self.ambient + 1;
            let trunc = Truncation::new(self.bases.iter().copied(), next);
            let ring = trunc.ring();
            let order = self.strategy.order(&trunc, self.h);
            let n = ring.len();
            let seeded: Vec<Poly> = self.basis.iter().map(|p| p.padded(n)).collect();
            let fresh: Vec<DPoly> = self
                .ideal
                .truncated(next)
                .into_iter()
                .filter(|p| p.ord().unwrap_or(0) == next)
                .collect();
            let mut engine = Buchberger::new(&ring, order);
            engine.seed(seeded);
            for p in &fresh {
                engine.add(ring.poly(p, order).expect("generator in truncation"));
            }
            engine.run();
            self.basis = engine.reduced();
            self.ring = ring;
            self.ambient = next;
        }
    }

    fn intersection(&self, target: OrderKind) -> Result<GBasis> {
        groebner::restrict(&self.ring, &self.basis, self.h, &self.bases, target)
    }
}

/// Options for the stabilization loop.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ArcOptions {
    pub strategy: Elimination,
    /// Order of the returned intersection bases.
    pub order: OrderKind,
}

impl Default for ArcOptions {
    fn default() -> Self {
        ArcOptions { strategy: Elimination::default(), order: OrderKind::DegLex }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArcResult {
    pub dimension: QuotientDim,
    pub h: u32,
    /// Ambient cutoff `H` whose intersection basis is reported.
    pub h_used: u32,
    pub stabilized: bool,
    pub basis: GBasis,
}

/// Intersection bases `I^(<=H) ∩ Q[x^(<=h)]` for increasing `H`, computed
/// on demand and optionally served from a cache.
pub struct Stages<'a> {
    ideal: &'a DiffIdeal,
    h: u32,
    opts: ArcOptions,
    cache: Option<&'a dyn BasisCache>,
    tower: Option<Tower>,
}

impl<'a> Stages<'a> {
    pub fn new(ideal: &'a DiffIdeal, h: u32, opts: ArcOptions, cache: Option<&'a dyn BasisCache>) -> Self {
        Stages { ideal, h, opts, cache, tower: None }
    }

    pub fn at(&mut self, ambient: u32) -> Result<GBasis> {
        if ambient < self.h {
            return Err(Error::BoundOutOfRange { h: self.h, ambient });
        }
        let key = StageKey { ideal: self.ideal, order: self.opts.order, h: self.h, ambient };
        if let Some(hit) = self.cache.and_then(|c| c.get(&key)) {
            return Ok(hit);
        }
        let tower = match &mut self.tower {
            Some(t) if t.ambient <= ambient => t,
            slot => slot.insert(Tower::new(self.ideal, self.h, self.opts.strategy)),
        };
        tower.advance_to(ambient);
        let basis = tower.intersection(self.opts.order)?;
        if let Some(c) = self.cache {
            c.put(&key, &basis);
        }
        Ok(basis)
    }
}

/// Stabilization loop starting at `H = h`: stops once the quotient is finite
/// and two consecutive intersection bases coincide, or when `max_ambient`
/// is reached (then `stabilized` is false and the last data is returned).
pub fn arc_dimension(gens: &[DPoly], h: u32, max_ambient: u32) -> Result<ArcResult> {
    arc_dimension_with(&DiffIdeal::differential(gens.to_vec()), h, max_ambient, ArcOptions::default(), None)
}

pub fn arc_dimension_with(
    ideal: &DiffIdeal,
    h: u32,
    max_ambient: u32,
    opts: ArcOptions,
    cache: Option<&dyn BasisCache>,
) -> Result<ArcResult> {
    if h > max_ambient {
        return Err(Error::BoundOutOfRange { h, ambient: max_ambient });
    }
    let mut stages = Stages::new(ideal, h, opts, cache);
    let mut ambient = h;
    let mut current = stages.at(ambient)?;
    loop {
        let dim = quotient_dimension(&current);
        if ambient == max_ambient {
            return Ok(ArcResult { dimension: dim, h, h_used: ambient, stabilized: false, basis: current });
        }
        let next = stages.at(ambient + 1)?;
        if dim != QuotientDim::Infinite && groebner::same_ideal_basis(&current, &next) {
            return Ok(ArcResult { dimension: dim, h, h_used: ambient, stabilized: true, basis: current });
        }
        ambient += 1;
        current = next;
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesReport {
    pub results: Vec<ArcResult>,
    /// For `<x^m>`: whether the dimensions equal `m^(h+1)`, the coefficients of `m / (1 - m t)`.
    pub geometric: Option<bool>,
}

impl SeriesReport {
    pub fn dimensions(&self) -> Vec<QuotientDim> {
        self.results.iter().map(|r| r.dimension).collect()
    }

    pub fn all_stabilized(&self) -> bool {
        self.results.iter().all(|r| r.stabilized)
    }
}

/// If `gens` is a single pure power `x^m`, returns `m`.
pub fn pure_power_exponent(gens: &[DPoly]) -> Option<u32> {
    let [g] = gens else { return None };
    let (m, c) = g.terms().next()?;
    if g.len() != 1 || !c.is_one() {
        return None;
    }
    match m.exps() {
        [(v, e)] if v.order == 0 => Some(*e),
        _ => None,
    }
}

/// Dimensions for `h = 0..=h_max`.
pub fn dimension_series(gens: &[DPoly], h_max: u32, max_extra: u32, exec: Execution) -> Result<SeriesReport> {
    let ideal = DiffIdeal::differential(gens.to_vec());
    let hs: Vec<u32> = (0..=h_max).collect();
    let results = map_cells(&hs, exec, |&h| {
        arc_dimension_with(&ideal, h, h + max_extra, ArcOptions::default(), None)
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let geometric = pure_power_exponent(gens).map(|m| {
        results
            .iter()
            .all(|r| r.dimension == QuotientDim::Finite((m as u64).pow(r.h + 1)))
    });
    Ok(SeriesReport { results, geometric })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerifyStatus {
    Pass,
    Fail,
    /// The loop hit its cutoff before stabilizing.
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StandardReport {
    pub status: VerifyStatus,
    pub computed: Vec<DMono>,
    /// In the fair class but not standard.
    pub missing: Vec<DMono>,
    /// Standard but not in the fair class.
    pub extra: Vec<DMono>,
}

/// Default ambient head-room above `h` for the verification routines.
pub const DEFAULT_EXTRA: u32 = 12;

/// Standard monomials of `<x^i, (x^m)^(∞)> ∩ Q[x^(<=h)]` versus `F_{i-1,m-i}`.
pub fn verify_standard_monomials(m: u32, i: u32, h: u32) -> Result<StandardReport> {
    verify_standard_monomials_in(m, i, h, OrderKind::DegLex)
}

pub fn verify_standard_monomials_in(m: u32, i: u32, h: u32, order: OrderKind) -> Result<StandardReport> {
    if i == 0 || i > m {
        return Err(Error::InvalidArgument(format!("need 1 <= i <= m, got i = {i}, m = {m}")));
    }
    let ideal = DiffIdeal::fat_point_with_power(m, i);
    let opts = ArcOptions { order, ..ArcOptions::default() };
    let res = arc_dimension_with(&ideal, h, h + DEFAULT_EXTRA, opts, None)?;
    if !res.stabilized {
        return Ok(StandardReport { status: VerifyStatus::Inconclusive, computed: vec![], missing: vec![], extra: vec![] });
    }
    let computed = standard_monomials(&res.basis)?;
    let expected: BTreeSet<DMono> = fairmono::enumerate_class(FairClass::new(i - 1, m - i), h).into_iter().collect();
    let got: BTreeSet<DMono> = computed.iter().cloned().collect();
    let missing: Vec<DMono> = expected.difference(&got).cloned().collect();
    let extra: Vec<DMono> = got.difference(&expected).cloned().collect();
    let status = if missing.is_empty() && extra.is_empty() { VerifyStatus::Pass } else { VerifyStatus::Fail };
    Ok(StandardReport { status, computed, missing, extra })
}

/// Dimension of `<x^i, (x^m)^(∞)> ∩ Q[x^(<=h)]` equals `i * m^h`.
pub fn verify_upper_bound(m: u32, i: u32, h: u32) -> Result<(VerifyStatus, QuotientDim)> {
    let ideal = DiffIdeal::fat_point_with_power(m, i);
    let res = arc_dimension_with(&ideal, h, h + DEFAULT_EXTRA, ArcOptions::default(), None)?;
    if !res.stabilized {
        return Ok((VerifyStatus::Inconclusive, res.dimension));
    }
    let want = QuotientDim::Finite(i as u64 * (m as u64).pow(h));
    let status = if res.dimension == want { VerifyStatus::Pass } else { VerifyStatus::Fail };
    Ok((status, res.dimension))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExteriorReport {
    pub status: VerifyStatus,
    /// Standard monomials with vanishing image (should be empty).
    pub vanishing_standard: Vec<DMono>,
    /// Basis elements with nonvanishing image (should be empty).
    pub surviving_basis: Vec<DPoly>,
}

/// Standard monomials of `<x^m>^(∞) ∩ Q[x^(<=h)]` have nonzero image under
/// the embedding and basis elements have zero image.
pub fn verify_exterior(m: u32, h: u32) -> Result<ExteriorReport> {
    let ideal = DiffIdeal::fat_point_with_power(m, m);
    let res = arc_dimension_with(&ideal, h, h + DEFAULT_EXTRA, ArcOptions::default(), None)?;
    if !res.stabilized {
        return Ok(ExteriorReport { status: VerifyStatus::Inconclusive, vanishing_standard: vec![], surviving_basis: vec![] });
    }
    let mut vanishing_standard = Vec::new();
    for s in standard_monomials(&res.basis)? {
        if extalg::phi(&DPoly::mono(s.clone()), m)?.is_zero() {
            vanishing_standard.push(s);
        }
    }
    let mut surviving_basis = Vec::new();
    for g in res.basis.gens() {
        if !extalg::phi(g, m)?.is_zero() {
            surviving_basis.push(g.clone());
        }
    }
    let status = if vanishing_standard.is_empty() && surviving_basis.is_empty() {
        VerifyStatus::Pass
    } else {
        VerifyStatus::Fail
    };
    Ok(ExteriorReport { status, vanishing_standard, surviving_basis })
}

/// For `1 <= i < m`: images of the basis of `<x^i, (x^m)^(∞)> ∩ Q[x^(<=h)]`
/// lie in the diagonal ideal for `r = i`, images of standard monomials do not.
pub fn verify_diagonal(m: u32, i: u32, h: u32) -> Result<VerifyStatus> {
    let ideal = DiffIdeal::fat_point_with_power(m, i);
    let res = arc_dimension_with(&ideal, h, h + DEFAULT_EXTRA, ArcOptions::default(), None)?;
    if !res.stabilized {
        return Ok(VerifyStatus::Inconclusive);
    }
    for g in res.basis.gens() {
        if !extalg::in_diagonal_ideal(&extalg::phi(g, m)?, i, m)? {
            return Ok(VerifyStatus::Fail);
        }
    }
    for s in standard_monomials(&res.basis)? {
        if extalg::in_diagonal_ideal(&extalg::phi(&DPoly::mono(s), m)?, i, m)? {
            return Ok(VerifyStatus::Fail);
        }
    }
    Ok(VerifyStatus::Pass)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeformationReport {
    pub binomial_identity: bool,
    pub lowest_weight_identity: bool,
    pub nilpotent: bool,
}

impl DeformationReport {
    pub fn passed(&self) -> bool {
        self.binomial_identity && self.lowest_weight_identity && self.nilpotent
    }
}

/// Checks `v_i = Σ_j C(i,j) u_j`, `gr(u_i) = v_0^(i)` and `v_i^m = 0` for `i <= h`.
pub fn verify_deformation(m: u32, h: u32) -> Result<DeformationReport> {
    let (v, u) = extalg::deformation_vectors(m, h)?;
    let mut binomial_identity = true;
    let mut lowest_weight_identity = true;
    let mut nilpotent = true;
    let v0 = &v[0];
    for i in 0..=h as usize {
        let mut sum = extalg::ExtElem::zero();
        for (j, uj) in u.iter().enumerate().take(i + 1) {
            sum = sum.add(&uj.scale(&extalg::binomial(i as u32, j as u32)));
        }
        binomial_identity &= sum == v[i];
        lowest_weight_identity &= u[i].lowest_weight()? == v0.ext_derive_n(i as u32)?;
        nilpotent &= v[i].pow(m).is_zero();
    }
    Ok(DeformationReport { binomial_identity, lowest_weight_identity, nilpotent })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplittingReport {
    pub status: VerifyStatus,
    /// Joint basis of the blocks equals the union of the per-block bases.
    pub union_is_basis: bool,
    pub checked: usize,
    /// Monomials of `M` whose image reduces to zero (should be empty).
    pub failures: Vec<DMono>,
}

/// Products `m_1 ... m_s` of per-block standard monomials with
/// `ord m_j <= lord m_{j+1}`, as monomials in base 0 of order `<= h`.
pub fn splitting_monomials(per_block: &[Vec<DMono>], h: u32) -> Vec<DMono> {
    fn go(k: usize, per_block: &[Vec<DMono>], prev_ord: Option<u32>, acc: DMono, out: &mut BTreeSet<DMono>) {
        if k == per_block.len() {
            out.insert(acc);
            return;
        }
        for m in &per_block[k] {
            let ok = match (prev_ord, m.lord()) {
                (Some(p), Some(l)) => p <= l,
                _ => true,
            };
            if !ok {
                continue;
            }
            let next_ord = m.ord().or(prev_ord);
            go(k + 1, per_block, next_ord, &acc * m, out);
        }
    }
    let mut out = BTreeSet::new();
    go(0, per_block, None, DMono::one(), &mut out);
    out.into_iter().filter(|m| m.ord().is_none_or(|o| o <= h)).collect()
}

/// Splitting check for blocks `I_j = <y_j^2>^(∞)`: every monomial of the
/// non-overlapping product set `M` has nonzero normal form after
/// `x^(k) -> Σ_j y_j^(k)`, and the joint basis is the union of block bases.
pub fn verify_splitting(s: u32, h: u32) -> Result<SplittingReport> {
    if s == 0 {
        return Err(Error::InvalidArgument("need at least one block".into()));
    }
    let x = DPoly::var(DVar::new(0, 0));
    let block = arc_dimension(&[x.pow(2)], h, h + DEFAULT_EXTRA)?;
    if !block.stabilized {
        return Ok(SplittingReport { status: VerifyStatus::Inconclusive, union_is_basis: false, checked: 0, failures: vec![] });
    }
    let std0 = standard_monomials(&block.basis)?;
    let mut union = Vec::new();
    for j in 0..s {
        union.extend(block.basis.gens().iter().map(|g| rename_base(g, j)));
    }
    let joint_trunc = Truncation::new(0..s, h);
    let joint = buchberger_in(&union, OrderKind::DegLex, &joint_trunc)?;
    let union_basis = GBasis::from_reduced_parts(union, OrderKind::DegLex, joint_trunc)?;
    let union_is_basis = joint == union_basis;

    let per_block: Vec<Vec<DMono>> = (0..s).map(|_| std0.clone()).collect();
    let mset = splitting_monomials(&per_block, h);
    let mut failures = Vec::new();
    for p in &mset {
        let img = DPoly::mono(p.clone()).substitute_sum(s)?;
        if joint.reduce(&img).is_zero() {
            failures.push(p.clone());
        }
    }
    let status = if failures.is_empty() && union_is_basis { VerifyStatus::Pass } else { VerifyStatus::Fail };
    Ok(SplittingReport { status, union_is_basis, checked: mset.len(), failures })
}

fn rename_base(p: &DPoly, base: u32) -> DPoly {
    DPoly::from_terms(p.terms().map(|(m, c)| (m.map_vars(|v| DVar::new(base, v.order)), c.clone())))
}

/// One cell of the dimension sweep `arc_dimension(<x^m>, h)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimCell {
    pub m: u32,
    pub h: u32,
    pub result: ArcResult,
}

pub fn fat_point_dimensions(cells: &[(u32, u32)], exec: Execution) -> Result<Vec<DimCell>> {
    map_cells(cells, exec, |&(m, h)| {
        let x = DPoly::var(DVar::new(0, 0));
        arc_dimension(&[x.pow(m)], h, h + DEFAULT_EXTRA).map(|result| DimCell { m, h, result })
    })
    .into_iter()
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffpoly::rat;

    fn x(k: u32) -> DPoly {
        DPoly::var(DVar::new(0, k))
    }

    fn y(k: u32) -> DPoly {
        DPoly::var(DVar::new(1, k))
    }

    #[test]
    fn truncated_generator_examples() {
        let g = truncated_generators(&[x(0).pow(2)], 2);
        let expect = vec![
            x(0).pow(2),
            (&x(0) * &x(1)).scale(&rat(2)),
            (&x(0) * &x(2)).scale(&rat(2)) + (&x(1) * &x(1)).scale(&rat(2)),
        ];
        assert_eq!(g, expect);
        assert_eq!(truncated_generators(&[x(0)], 1), vec![x(0), x(1)]);
        assert_eq!(truncated_generators(&[x(0).pow(2), y(0).pow(2), &x(0) * &y(0)], 1).len(), 6);
    }

    #[test]
    fn small_dimensions() {
        let r = arc_dimension(&[x(0).pow(2)], 2, 12).unwrap();
        assert!(r.stabilized);
        assert_eq!(r.dimension, QuotientDim::Finite(8));
        let r = arc_dimension(&[x(0)], 2, 6).unwrap();
        assert_eq!(r.dimension, QuotientDim::Finite(1));
    }

    #[test]
    fn cutoff_reported_not_failed() {
        let r = arc_dimension(&[x(0).pow(3)], 2, 3).unwrap();
        assert!(!r.stabilized);
        assert_eq!(r.h_used, 3);
        assert_eq!(r.dimension, QuotientDim::Infinite);
        assert!(matches!(arc_dimension(&[x(0)], 3, 2), Err(Error::BoundOutOfRange { .. })));
    }

    #[test]
    fn incremental_matches_direct() {
        let ideal = DiffIdeal::differential(vec![x(0).pow(3)]);
        let mut stages = Stages::new(&ideal, 1, ArcOptions::default(), None);
        for ambient in 1..=6 {
            let inc = stages.at(ambient).unwrap();
            let direct = groebner::eliminate_above(&truncated_generators(&ideal.differential, ambient), 1, ambient).unwrap();
            assert_eq!(inc, direct, "H = {ambient}");
        }
    }

    #[test]
    fn splitting_single_and_double() {
        let one = verify_splitting(1, 2).unwrap();
        assert_eq!(one.status, VerifyStatus::Pass);
        let two = verify_splitting(2, 2).unwrap();
        assert!(two.union_is_basis);
        assert_eq!(two.status, VerifyStatus::Pass);
        let xx2 = DMono::from_orders(0, &[0, 2]);
        let per_block = vec![fairmono::fair_monomials(2, false); 2];
        assert!(splitting_monomials(&per_block, 2).contains(&xx2));
    }
}
