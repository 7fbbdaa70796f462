//! The hom-structure λ_[X,Y] on finite sets of functions X → Y, the
//! contraction default m_⊕, and checks of the continuity theorem that links
//! the two.
//!
//! For a filter 𝓕 on a function set and an element f, λ_[X,Y](𝓕)(f) is the
//! least α such that λ_Y(⟨𝓖,𝓕⟩)(f(x)) ≤ λ_X(𝓖)(x) ∨ α for every filter 𝓖
//! on X and point x, where ⟨𝓖,𝓕⟩ is the evaluation filter.  Because both
//! sides decompose over joins in 𝓖, the quantifier collapses to singleton
//! cores, giving the closed form
//! max_{x,b} residuate_∨(⋁_{h∈core 𝓕} d_Y(f(x), h(b)), d_X(x,b)).
//! The collapse is not trusted silently: `hom_limit_scan` evaluates the
//! defining quantifier verbatim over all principal 𝓖 and tests keep the two
//! in agreement.
//!
//! The ⊕-default of contraction m_⊕(f) is the least α with
//! λ_Y(f[𝓖]) ∘ f ≤ λ_X(𝓖) ⊕ α for every 𝓖; maps with m_⊕(f) = 0 are
//! exactly the contractions.

use std::collections::BTreeSet;
use std::fmt;

use crate::filters::{self, Carrier, CarrierMap, PrincipalFilter};
use crate::properties::is_regular;
use crate::quantale::{Tensor, Weight};
use crate::spaces::{FiniteCapSpace, SpaceMap};
use crate::{Error, Result};

/// Default bound on materialized function sets.
pub const FUNCTION_SPACE_CAP: usize = 1_000_000;

/// A finite set of total maps X → Y, each indexable and usable as the
/// carrier of principal filters.
#[derive(Debug, Clone)]
pub struct FunctionSpace {
    source: FiniteCapSpace,
    target: FiniteCapSpace,
    carrier: Carrier,
    tables: Vec<Vec<usize>>,
}

impl FunctionSpace {
    /// All |Y|^|X| maps, named h0, h1, … in odometer order: map i sends
    /// point x to Y-index (i / |Y|^x) mod |Y|.
    pub fn full(source: &FiniteCapSpace, target: &FiniteCapSpace) -> Result<FunctionSpace> {
        FunctionSpace::full_with_cap(source, target, FUNCTION_SPACE_CAP)
    }

    /// As [`FunctionSpace::full`] with an explicit materialization cap.
    pub fn full_with_cap(
        source: &FiniteCapSpace,
        target: &FiniteCapSpace,
        cap: usize,
    ) -> Result<FunctionSpace> {
        let n = source.len() as u32;
        let size = (target.len() as u128).pow(n);
        if size > cap as u128 {
            return Err(Error::FunctionSpaceCap { size, cap });
        }
        let size = size as usize;
        let mut tables = Vec::with_capacity(size);
        for i in 0..size {
            let mut table = Vec::with_capacity(source.len());
            let mut rest = i;
            for _ in 0..source.len() {
                table.push(rest % target.len());
                rest /= target.len();
            }
            tables.push(table);
        }
        let carrier = Carrier::new((0..size).map(|i| format!("h{i}")).collect())?;
        Ok(FunctionSpace {
            source: source.clone(),
            target: target.clone(),
            carrier,
            tables,
        })
    }

    /// A designated subset of maps, each given as a name and a table of
    /// Y-indices per X-point.
    pub fn from_elements(
        source: &FiniteCapSpace,
        target: &FiniteCapSpace,
        elements: Vec<(String, Vec<usize>)>,
    ) -> Result<FunctionSpace> {
        let mut names = Vec::with_capacity(elements.len());
        let mut tables = Vec::with_capacity(elements.len());
        for (name, table) in elements {
            if table.len() != source.len() {
                return Err(Error::CarrierMismatch(format!(
                    "function `{name}` has {} values for {} source points",
                    table.len(),
                    source.len()
                )));
            }
            if let Some(&index) = table.iter().find(|&&v| v >= target.len()) {
                return Err(Error::PointOutOfRange {
                    index,
                    len: target.len(),
                });
            }
            names.push(name);
            tables.push(table);
        }
        let carrier = Carrier::new(names)?;
        Ok(FunctionSpace {
            source: source.clone(),
            target: target.clone(),
            carrier,
            tables,
        })
    }

    pub fn source(&self) -> &FiniteCapSpace {
        &self.source
    }

    pub fn target(&self) -> &FiniteCapSpace {
        &self.target
    }

    /// The carrier whose points are the functions themselves.
    pub fn carrier(&self) -> &Carrier {
        &self.carrier
    }

    pub fn len(&self) -> usize {
        self.tables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tables.is_empty()
    }

    pub fn name(&self, index: usize) -> &str {
        self.carrier.name(index)
    }

    pub fn table(&self, index: usize) -> &[usize] {
        &self.tables[index]
    }

    pub fn index_of(&self, table: &[usize]) -> Option<usize> {
        self.tables.iter().position(|t| t == table)
    }

    /// The function as a carrier map, e.g. for building evaluation filters.
    pub fn as_carrier_map(&self, index: usize) -> CarrierMap {
        CarrierMap::new(
            self.source.carrier().clone(),
            self.target.carrier().clone(),
            self.tables[index].clone(),
        )
        .expect("stored tables are validated at construction")
    }

    pub fn point_filter(&self, index: usize) -> Result<PrincipalFilter> {
        PrincipalFilter::point(self.carrier.clone(), index)
    }

    pub fn filter_of(&self, core: &BTreeSet<usize>) -> Result<PrincipalFilter> {
        PrincipalFilter::new(self.carrier.clone(), core.clone())
    }

    /// The filter whose core is the whole function set.
    pub fn full_filter(&self) -> PrincipalFilter {
        PrincipalFilter::new(self.carrier.clone(), self.carrier.full_set())
            .expect("a function space is never empty")
    }
}

/// Closed form shared by the hom operations: the least α such that every
/// core function h keeps ⋁_h d_Y(f(x), h(b)) within d_X(x,b) ∨ α.
fn hom_value(
    source: &FiniteCapSpace,
    target: &FiniteCapSpace,
    core: &[&[usize]],
    f_table: &[usize],
) -> Weight {
    let n = source.len();
    let mut worst = Weight::zero();
    for x in 0..n {
        for b in 0..n {
            let mut reach = Weight::zero();
            for h in core {
                reach = reach.join(target.entry(f_table[x], h[b]));
            }
            worst = worst.join(Tensor::Max.residuate(reach, source.entry(x, b)));
        }
    }
    worst
}

/// λ_[X,Y](𝓕)(f) by the closed form.
pub fn hom_limit(space: &FunctionSpace, filter: &PrincipalFilter, f: usize) -> Result<Weight> {
    if filter.carrier() != space.carrier() {
        return Err(Error::CarrierMismatch(
            "filter does not live on this function set".into(),
        ));
    }
    if f >= space.len() {
        return Err(Error::PointOutOfRange {
            index: f,
            len: space.len(),
        });
    }
    let core: Vec<&[usize]> = filter.core().iter().map(|&h| space.table(h)).collect();
    Ok(hom_value(&space.source, &space.target, &core, space.table(f)))
}

/// Definition-level oracle for [`hom_limit`]: scan candidate α values in
/// ascending order and return the first one for which
/// λ_Y(⟨𝓖,𝓕⟩)(f(x)) ≤ λ_X(𝓖)(x) ∨ α holds for every principal 𝓖 and every
/// x, with the evaluation filter built literally from the core functions.
///
/// Candidate values are 0, ∞, and the target's matrix entries — the
/// left-hand side of the defining inequality is an envelope of target
/// entries, so the infimum lands in this set.
pub fn hom_limit_scan(space: &FunctionSpace, filter: &PrincipalFilter, f: usize) -> Result<Weight> {
    if filter.carrier() != space.carrier() {
        return Err(Error::CarrierMismatch(
            "filter does not live on this function set".into(),
        ));
    }
    if f >= space.len() {
        return Err(Error::PointOutOfRange {
            index: f,
            len: space.len(),
        });
    }
    let source = &space.source;
    let target = &space.target;
    let n = source.len();
    if n > 16 {
        return Err(Error::EnumerationCap {
            size: 1u128 << n,
            cap: 1 << 16,
        });
    }
    let core_maps: Vec<CarrierMap> = filter
        .core()
        .iter()
        .map(|&h| space.as_carrier_map(h))
        .collect();
    let f_table = space.table(f);

    let mut candidates = target.value_grid();
    candidates.insert(0, Weight::zero());
    candidates.sort();
    candidates.dedup();

    'alpha: for alpha in candidates {
        for g_mask in 1u32..(1 << n) {
            let g_core: BTreeSet<usize> = (0..n).filter(|&b| g_mask & (1 << b) != 0).collect();
            let g = PrincipalFilter::new(source.carrier().clone(), g_core.clone())?;
            let evaluated = filters::evaluate(&g, &core_maps)?;
            for x in 0..n {
                let lhs = target.limit(&evaluated, f_table[x])?;
                let rhs = source.limit_of_set(&g_core, x).join(alpha);
                if lhs > rhs {
                    continue 'alpha;
                }
            }
        }
        return Ok(alpha);
    }
    unreachable!("α = ∞ always satisfies the defining inequality")
}

/// ⋀_{𝓕 ∈ 𝔽(Y^X)} λ_[X,Y](𝓕)(f), computed as the minimum of
/// [`hom_limit`] over single-function filters in a pre-materialized
/// function set.  Coarser filters only increase the limit (their cores are
/// larger and every side is a join), so singletons realize the infimum.
pub fn hom_min_in(space: &FunctionSpace, f_table: &[usize]) -> Result<Weight> {
    if f_table.len() != space.source.len() {
        return Err(Error::CarrierMismatch(format!(
            "map has {} values for {} source points",
            f_table.len(),
            space.source.len()
        )));
    }
    if let Some(&index) = f_table.iter().find(|&&v| v >= space.target.len()) {
        return Err(Error::PointOutOfRange {
            index,
            len: space.target.len(),
        });
    }
    let mut best = Weight::INF;
    for h in 0..space.len() {
        let value = hom_value(
            &space.source,
            &space.target,
            &[space.table(h)],
            f_table,
        );
        best = best.min(value);
        if best.is_zero() {
            break;
        }
    }
    Ok(best)
}

/// [`hom_min_in`] over the full function set Y^X of the map's own source
/// and target.
pub fn hom_min(f: &SpaceMap) -> Result<Weight> {
    let space = FunctionSpace::full(f.source(), f.target())?;
    hom_min_in(&space, f.table())
}

/// Brute-force variant of [`hom_min_in`] minimizing over every principal
/// filter on the function set, not only the single-function ones.  Kept as
/// the oracle that justifies the singleton reduction.
pub fn hom_min_exhaustive(space: &FunctionSpace, f_table: &[usize]) -> Result<Weight> {
    let m = space.len();
    if m > 20 {
        return Err(Error::EnumerationCap {
            size: 1u128 << m,
            cap: 1 << 20,
        });
    }
    if f_table.len() != space.source.len() {
        return Err(Error::CarrierMismatch(format!(
            "map has {} values for {} source points",
            f_table.len(),
            space.source.len()
        )));
    }
    let mut best = Weight::INF;
    for mask in 1u64..(1 << m) {
        let core: Vec<&[usize]> = (0..m)
            .filter(|&h| mask & (1 << h) != 0)
            .map(|h| space.table(h))
            .collect();
        best = best.min(hom_value(&space.source, &space.target, &core, f_table));
    }
    Ok(best)
}

/// The ⊕-default of contraction m_⊕(f): the maximal residuation
/// residuate(λ_Y(f[{B}↑])(f(x)), λ_X({B}↑)(x), ⊕) over nonempty B ⊆ X and
/// x ∈ X.
///
/// For ⊕ = ∨ the maximum over sets B is attained on singletons (every side
/// is a join and ∨-residuation in the first argument decomposes), so only
/// pairs (b, x) are scanned.  For ⊕ = + all 2^|X|−1 subsets are enumerated.
pub fn contraction_default(f: &SpaceMap, tensor: Tensor) -> Weight {
    let source = f.source();
    let target = f.target();
    let n = source.len();
    let mut worst = Weight::zero();
    match tensor {
        Tensor::Max => {
            for b in 0..n {
                for x in 0..n {
                    let v = target.entry(f.apply(x), f.apply(b));
                    worst = worst.join(tensor.residuate(v, source.entry(x, b)));
                }
            }
        }
        Tensor::Plus => {
            assert!(
                n <= 20,
                "contraction default enumerates 2^|X| subsets; |X| = {n} is too large"
            );
            for mask in 1u32..(1 << n) {
                for x in 0..n {
                    let mut u = Weight::zero();
                    let mut v = Weight::zero();
                    for b in 0..n {
                        if mask & (1 << b) != 0 {
                            u = u.join(source.entry(x, b));
                            v = v.join(target.entry(f.apply(x), f.apply(b)));
                        }
                    }
                    worst = worst.join(tensor.residuate(v, u));
                }
            }
        }
    }
    worst
}

/// Definition-level oracle for [`contraction_default`]: scan candidate α
/// levels in ascending order and return the first for which
/// λ_Y(f[𝓖])(f(x)) ≤ λ_X(𝓖)(x) ⊕ α holds for every principal 𝓖 and x,
/// with image filters built literally.
///
/// Candidates are 0, ∞, every target entry, and every difference
/// (target entry − source entry) — for ⊕ = + the residuation can land on a
/// difference, for ⊕ = ∨ on an entry, and the scan only needs a superset.
pub fn contraction_default_scan(f: &SpaceMap, tensor: Tensor) -> Result<Weight> {
    let source = f.source();
    let target = f.target();
    let n = source.len();
    if n > 16 {
        return Err(Error::EnumerationCap {
            size: 1u128 << n,
            cap: 1 << 16,
        });
    }
    let mut candidates = vec![Weight::zero(), Weight::INF];
    for v in target.matrix() {
        candidates.push(*v);
        if let (Some(vf), true) = (v.finite(), v.is_finite()) {
            for u in source.matrix() {
                if let Some(uf) = u.finite() {
                    if vf >= uf {
                        candidates.push(Weight::Finite(vf - uf));
                    }
                }
            }
        }
    }
    candidates.sort();
    candidates.dedup();

    'alpha: for alpha in candidates {
        for mask in 1u32..(1 << n) {
            let core: BTreeSet<usize> = (0..n).filter(|&b| mask & (1 << b) != 0).collect();
            let g = PrincipalFilter::new(source.carrier().clone(), core.clone())?;
            let image = f.image(&g)?;
            for x in 0..n {
                let lhs = target.limit(&image, f.apply(x))?;
                let rhs = tensor.combine(source.limit_of_set(&core, x), alpha);
                if lhs > rhs {
                    continue 'alpha;
                }
            }
        }
        return Ok(alpha);
    }
    unreachable!("α = ∞ always satisfies the defining inequality")
}

/// f is a contraction exactly when its default of contraction vanishes;
/// the + and ∨ defaults vanish together.
pub fn is_contraction(f: &SpaceMap) -> bool {
    contraction_default(f, Tensor::Plus).is_zero()
}

/// Both sides of the continuity bound m_⊕(f) ≤ c ⊕ c with
/// c = ⋀_𝓕 λ_[X,Y](𝓕)(f).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomTheoremReport {
    pub map: String,
    pub m: Weight,
    pub c: Weight,
    pub bound: Weight,
    pub holds: bool,
}

impl fmt::Display for HomTheoremReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: m={} hom_min={} bound={} holds={}",
            self.map, self.m, self.c, self.bound, self.holds
        )
    }
}

/// Check m_⊕(f) ≤ c ⊕ c for a map into a ⊕-regular target, where c is the
/// hom-structure infimum at f.  The regularity of the target is the
/// theorem's hypothesis and is enforced as a precondition.
pub fn verify_thm_continuouslimits(f: &SpaceMap, tensor: Tensor) -> Result<HomTheoremReport> {
    if let Some(violation) = is_regular(f.target(), tensor) {
        return Err(Error::Precondition(format!(
            "target `{}` is not regular for {tensor}: {}",
            f.target().name(),
            violation.render(f.target())
        )));
    }
    let c = hom_min(f)?;
    let m = contraction_default(f, tensor);
    let bound = tensor.combine(c, c);
    Ok(HomTheoremReport {
        map: f.name().to_string(),
        m,
        c,
        bound,
        holds: m <= bound,
    })
}

/// Outcome of the evaluation-lemma check: whether the premise held and, if
/// so, whether every principal filter satisfied the conclusion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LemmaRegReport {
    /// Premise failed — nothing to check.
    pub vacuous: bool,
    pub holds: bool,
    pub filters_checked: usize,
}

impl fmt::Display for LemmaRegReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "vacuous={} holds={} filters_checked={}",
            self.vacuous, self.holds, self.filters_checked
        )
    }
}

/// Evaluation lemma: if λ_Y(⟨{x}↑,𝓕⟩)(f(x)) ≤ α for every point x, then
/// f[𝓖] ≥ ⟨𝓖,𝓕⟩^{(α)} for every filter 𝓖 — in principal terms, f(core 𝓖)
/// lands inside the α-enlargement of the evaluation core.
pub fn verify_lemma_reg(
    space: &FunctionSpace,
    filter: &PrincipalFilter,
    f: usize,
    alpha: Weight,
) -> Result<LemmaRegReport> {
    if filter.carrier() != space.carrier() {
        return Err(Error::CarrierMismatch(
            "filter does not live on this function set".into(),
        ));
    }
    if f >= space.len() {
        return Err(Error::PointOutOfRange {
            index: f,
            len: space.len(),
        });
    }
    let source = &space.source;
    let target = &space.target;
    let n = source.len();
    if n > 16 {
        return Err(Error::EnumerationCap {
            size: 1u128 << n,
            cap: 1 << 16,
        });
    }
    let core_maps: Vec<CarrierMap> = filter
        .core()
        .iter()
        .map(|&h| space.as_carrier_map(h))
        .collect();
    let f_table = space.table(f);

    for x in 0..n {
        let at_x = filters::evaluate(&source.point_filter(x), &core_maps)?;
        if target.limit(&at_x, f_table[x])? > alpha {
            return Ok(LemmaRegReport {
                vacuous: true,
                holds: true,
                filters_checked: 0,
            });
        }
    }

    let mut checked = 0;
    for g_mask in 1u32..(1 << n) {
        let g_core: BTreeSet<usize> = (0..n).filter(|&b| g_mask & (1 << b) != 0).collect();
        let g = PrincipalFilter::new(source.carrier().clone(), g_core.clone())?;
        let evaluated = filters::evaluate(&g, &core_maps)?;
        let enlarged = target.enlarge(evaluated.core(), alpha);
        checked += 1;
        if !g_core.iter().all(|&b| enlarged.contains(&f_table[b])) {
            return Ok(LemmaRegReport {
                vacuous: false,
                holds: false,
                filters_checked: checked,
            });
        }
    }
    Ok(LemmaRegReport {
        vacuous: false,
        holds: true,
        filters_checked: checked,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{self, m3, u3, y3, SplitMix64};

    fn one_point() -> FiniteCapSpace {
        FiniteCapSpace::discrete("P1", vec!["star"], true).unwrap()
    }

    #[test]
    fn full_function_space_enumerates_every_map() {
        let fs = FunctionSpace::full(&one_point(), &y3()).unwrap();
        assert_eq!(fs.len(), 3);
        assert_eq!(fs.table(0), [0]);
        assert_eq!(fs.table(1), [1]);
        assert_eq!(fs.table(2), [2]);
        assert_eq!(fs.name(1), "h1");

        let x2 = FiniteCapSpace::discrete("X2", vec!["u", "v"], true).unwrap();
        let fs = FunctionSpace::full(&x2, &x2).unwrap();
        assert_eq!(fs.len(), 4);
        assert_eq!(fs.index_of(&[0, 1]), Some(2));
        assert_eq!(fs.index_of(&[1, 0]), Some(1));

        let big = FiniteCapSpace::discrete(
            "B",
            (0..10).map(|i| format!("b{i}")).collect::<Vec<_>>(),
            true,
        )
        .unwrap();
        let seven = FiniteCapSpace::discrete(
            "S",
            (0..7).map(|i| format!("s{i}")).collect::<Vec<_>>(),
            true,
        )
        .unwrap();
        assert!(matches!(
            FunctionSpace::full(&seven, &big),
            Err(Error::FunctionSpaceCap { size: 10_000_000, .. })
        ));
    }

    #[test]
    fn hom_limit_of_two_constant_maps_at_a_third() {
        let fs = FunctionSpace::full(&one_point(), &y3()).unwrap();
        let filter = fs.filter_of(&BTreeSet::from([0, 1])).unwrap();
        // Evaluating the pair {x→a, x→b} at the constant-to-y map needs to
        // absorb d(y,a) ∨ d(y,b) = 5 above the zero source entry.
        assert_eq!(hom_limit(&fs, &filter, 2).unwrap(), Weight::int(5));
        assert_eq!(hom_limit_scan(&fs, &filter, 2).unwrap(), Weight::int(5));

        // A contraction sitting in its own filter costs nothing.
        assert_eq!(hom_limit(&fs, &fs.point_filter(0).unwrap(), 0).unwrap(), Weight::zero());
    }

    #[test]
    fn hom_limit_with_the_whole_function_set_as_core() {
        let x2 = FiniteCapSpace::discrete("X2", vec!["u", "v"], true).unwrap();
        let fs = FunctionSpace::full(&x2, &m3()).unwrap();
        let full = fs.full_filter();
        for f in 0..fs.len() {
            let direct = {
                let mut worst = Weight::zero();
                for x in 0..x2.len() {
                    for b in 0..x2.len() {
                        let reach = (0..m3().len())
                            .map(|y| m3().entry(fs.table(f)[x], y))
                            .fold(Weight::zero(), Weight::join);
                        worst = worst.join(Tensor::Max.residuate(reach, x2.entry(x, b)));
                    }
                }
                worst
            };
            assert_eq!(hom_limit(&fs, &full, f).unwrap(), direct);
        }
    }

    #[test]
    fn hom_limit_rejects_foreign_filters_and_bad_indices() {
        let fs = FunctionSpace::full(&one_point(), &y3()).unwrap();
        let x2 = FiniteCapSpace::discrete("X2", vec!["u", "v"], true).unwrap();
        let other = FunctionSpace::full(&x2, &x2).unwrap();
        assert!(matches!(
            hom_limit(&fs, &other.point_filter(0).unwrap(), 0),
            Err(Error::CarrierMismatch(_))
        ));
        assert!(matches!(
            hom_limit(&fs, &fs.point_filter(0).unwrap(), 9),
            Err(Error::PointOutOfRange { .. })
        ));
    }

    #[test]
    fn hom_min_vanishes_exactly_on_contractions() {
        let m = m3();
        let identity = SpaceMap::identity(&m);
        assert_eq!(hom_min(&identity).unwrap(), Weight::zero());

        // One-point source: the minimum is realized at h = f itself.
        let f = SpaceMap::constant(&one_point(), &y3(), 2).unwrap();
        assert_eq!(hom_min(&f).unwrap(), Weight::zero());

        let fs = FunctionSpace::full(&one_point(), &y3()).unwrap();
        assert_eq!(
            hom_min_in(&fs, &[2]).unwrap(),
            hom_min_exhaustive(&fs, &[2]).unwrap()
        );
    }

    #[test]
    fn singleton_filters_realize_the_hom_infimum() {
        let x2 = FiniteCapSpace::discrete("X2", vec!["u", "v"], true).unwrap();
        for target in [m3(), y3(), u3()] {
            let fs = FunctionSpace::full(&x2, &target).unwrap();
            for f in 0..fs.len() {
                assert_eq!(
                    hom_min_in(&fs, fs.table(f)).unwrap(),
                    hom_min_exhaustive(&fs, fs.table(f)).unwrap(),
                    "target {} map {f}",
                    target.name()
                );
            }
        }
    }

    #[test]
    fn contraction_defaults_of_the_reference_arrows() {
        let y = y3();
        let m = m3();
        for space in [&y, &m] {
            let identity = SpaceMap::identity(space);
            assert_eq!(contraction_default(&identity, Tensor::Plus), Weight::zero());
            assert_eq!(contraction_default(&identity, Tensor::Max), Weight::zero());
            assert!(is_contraction(&identity));

            let from_core = SpaceMap::identity_between(&space.coreflection_c(), space).unwrap();
            assert!(is_contraction(&from_core));
        }

        // The reflection collapses the finite entries of the three-point
        // example to zero, so running the identity back into it must pay
        // the full d(y,b) = 5 at the pair B = {b}, x = y.
        let r = y.reflection_r();
        let back = SpaceMap::identity_between(&r, &y).unwrap();
        assert_eq!(r.entry(2, 1), Weight::zero());
        assert_eq!(
            Tensor::Plus.residuate(y.entry(2, 1), r.entry(2, 1)),
            Weight::int(5)
        );
        assert_eq!(contraction_default(&back, Tensor::Plus), Weight::int(5));
        assert_eq!(contraction_default(&back, Tensor::Max), Weight::int(5));
        assert!(!is_contraction(&back));

        let constant = SpaceMap::constant(&y, &m, 1).unwrap();
        assert!(is_contraction(&constant));
    }

    #[test]
    fn contraction_default_agrees_with_the_definition_scan() {
        let mut rng = SplitMix64::new(2024);
        let grid = corpus::default_entry_grid();
        for trial in 0..24 {
            let source = corpus::random_space(&mut rng, "X", 2 + (trial % 2), &grid).unwrap();
            let target = corpus::random_space(&mut rng, "Y", 3, &grid).unwrap();
            let table: Vec<usize> = (0..source.len())
                .map(|_| rng.next_below(target.len() as u64) as usize)
                .collect();
            let f = SpaceMap::new("f", source.clone(), target.clone(), table).unwrap();
            for tensor in Tensor::BOTH {
                assert_eq!(
                    contraction_default(&f, tensor),
                    contraction_default_scan(&f, tensor).unwrap(),
                    "trial {trial} {tensor}"
                );
            }
            assert!(
                contraction_default(&f, Tensor::Plus)
                    <= contraction_default(&f, Tensor::Max),
                "the +-default is bounded by the ∨-default"
            );
        }
    }

    #[test]
    fn hom_limit_scan_agrees_with_the_closed_form() {
        let mut rng = SplitMix64::new(77);
        let grid = corpus::default_entry_grid();
        for trial in 0..12 {
            let source = corpus::random_space(&mut rng, "X", 2, &grid).unwrap();
            let target = corpus::random_space(&mut rng, "Y", 2 + (trial % 2), &grid).unwrap();
            let fs = FunctionSpace::full(&source, &target).unwrap();
            let core: BTreeSet<usize> = (0..fs.len())
                .filter(|_| rng.next_below(2) == 0)
                .collect();
            let filter = if core.is_empty() {
                fs.full_filter()
            } else {
                fs.filter_of(&core).unwrap()
            };
            for f in 0..fs.len() {
                assert_eq!(
                    hom_limit(&fs, &filter, f).unwrap(),
                    hom_limit_scan(&fs, &filter, f).unwrap(),
                    "trial {trial} map {f}"
                );
            }
        }
    }

    #[test]
    fn hom_structure_satisfies_the_meet_axiom_and_antitonicity() {
        let fs = FunctionSpace::full(&one_point(), &m3()).unwrap();
        let filters: Vec<PrincipalFilter> = (1u32..(1 << fs.len()))
            .map(|mask| {
                let core: BTreeSet<usize> =
                    (0..fs.len()).filter(|&h| mask & (1 << h) != 0).collect();
                fs.filter_of(&core).unwrap()
            })
            .collect();
        for f in 0..fs.len() {
            for a in &filters {
                for b in &filters {
                    let meet = a.meet(b).unwrap();
                    let left = hom_limit(&fs, &meet, f).unwrap();
                    let right = hom_limit(&fs, a, f)
                        .unwrap()
                        .join(hom_limit(&fs, b, f).unwrap());
                    assert_eq!(left, right, "meet axiom at map {f}");
                    if a.leq(b).unwrap() {
                        assert!(
                            hom_limit(&fs, a, f).unwrap() >= hom_limit(&fs, b, f).unwrap(),
                            "coarser filters may only increase the limit"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn membership_limit_vanishes_exactly_for_contractions() {
        // λ({f}↑)(f) = 0 iff f is a contraction: check across all maps of a
        // two-point source into the non-regular three-point target.
        let x2 = FiniteCapSpace::discrete("X2", vec!["u", "v"], true).unwrap();
        let y = y3();
        let fs = FunctionSpace::full(&x2, &y).unwrap();
        for f in 0..fs.len() {
            let at_self = hom_limit(&fs, &fs.point_filter(f).unwrap(), f).unwrap();
            let map = SpaceMap::new("f", x2.clone(), y.clone(), fs.table(f).to_vec()).unwrap();
            assert_eq!(at_self.is_zero(), is_contraction(&map), "map {f}");
        }
    }

    #[test]
    fn continuity_theorem_holds_for_regular_targets() {
        let mut rng = SplitMix64::new(11);
        let grid = corpus::default_entry_grid();
        for trial in 0..20 {
            let source = corpus::random_space(&mut rng, "X", 3, &grid).unwrap();
            let (target, tensor) = if trial % 2 == 0 {
                (corpus::random_metric(&mut rng, "Y", 3, &grid).unwrap(), Tensor::Plus)
            } else {
                (
                    corpus::random_ultrametric(&mut rng, "Y", 3, &grid).unwrap(),
                    Tensor::Max,
                )
            };
            let table: Vec<usize> = (0..source.len())
                .map(|_| rng.next_below(target.len() as u64) as usize)
                .collect();
            let f = SpaceMap::new("f", source.clone(), target.clone(), table).unwrap();
            let report = verify_thm_continuouslimits(&f, tensor).unwrap();
            assert!(report.holds, "trial {trial}: {report}");
        }

        let into_nonregular = SpaceMap::constant(&one_point(), &y3(), 0).unwrap();
        assert!(matches!(
            verify_thm_continuouslimits(&into_nonregular, Tensor::Plus),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn evaluation_lemma_on_points_filters_and_random_trials() {
        let fs = FunctionSpace::full(&one_point(), &m3()).unwrap();
        // α = ∞ is vacuously safe and never fails.
        let report =
            verify_lemma_reg(&fs, &fs.full_filter(), 0, Weight::INF).unwrap();
        assert!(!report.vacuous && report.holds);

        // A filter containing only f itself converges pointwise at α = 0.
        let report = verify_lemma_reg(&fs, &fs.point_filter(1).unwrap(), 1, Weight::zero())
            .unwrap();
        assert!(!report.vacuous && report.holds);

        let mut rng = SplitMix64::new(5);
        let grid = corpus::default_entry_grid();
        for _ in 0..20 {
            let source = corpus::random_space(&mut rng, "X", 3, &grid).unwrap();
            let target = corpus::random_space(&mut rng, "Y", 3, &grid).unwrap();
            let fs = FunctionSpace::full_with_cap(&source, &target, 1_000_000).unwrap();
            let core: BTreeSet<usize> = [
                rng.next_below(fs.len() as u64) as usize,
                rng.next_below(fs.len() as u64) as usize,
            ]
            .into_iter()
            .collect();
            let filter = fs.filter_of(&core).unwrap();
            let f = rng.next_below(fs.len() as u64) as usize;
            for alpha in target.value_grid() {
                let report = verify_lemma_reg(&fs, &filter, f, alpha).unwrap();
                assert!(report.vacuous || report.holds, "the lemma must hold");
            }
        }
    }
}
