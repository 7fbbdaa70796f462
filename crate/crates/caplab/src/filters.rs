//! Filters on finite carriers.
//!
//! On a finite carrier every filter is principal, so a filter is stored as its
//! nonempty core A (the filter is {A}↑, the sets containing A).  The order is
//! refinement: 𝓕 ≤ 𝓖 iff core(𝓖) ⊆ core(𝓕), and the meet takes the union of
//! cores.  Ultrafilters are exactly the point filters ẋ = {x}↑.
//!
//! Carrier identity is structural: two carriers agree iff their point-name
//! lists agree, and mixing carriers is a construction-time error.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::{Error, Result};

/// A finite nonempty carrier: an ordered list of distinct point names.
///
/// Cloning is cheap (shared backing); equality compares the name lists.
#[derive(Debug, Clone)]
pub struct Carrier(Arc<Vec<String>>);

impl PartialEq for Carrier {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for Carrier {}

impl Carrier {
    /// Point names must be nonempty, free of whitespace and of the reserved
    /// characters `, { } #`, and pairwise distinct.
    pub fn new<S: Into<String>>(names: Vec<S>) -> Result<Carrier> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(Error::EmptyCarrier);
        }
        let mut seen = BTreeSet::new();
        for name in &names {
            if name.is_empty()
                || name.chars().any(|c| c.is_whitespace() || ",{}#".contains(c))
            {
                return Err(Error::BadPointName(name.clone()));
            }
            if !seen.insert(name.clone()) {
                return Err(Error::DuplicatePointName(name.clone()));
            }
        }
        Ok(Carrier(Arc::new(names)))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn name(&self, index: usize) -> &str {
        &self.0[index]
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.0
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownPoint(name.to_string()))
    }

    /// All point indices as a set.
    pub fn full_set(&self) -> BTreeSet<usize> {
        (0..self.len()).collect()
    }

    /// Renders a subset as `{a,b,c}` in carrier order.
    pub fn render_subset(&self, set: &BTreeSet<usize>) -> String {
        let mut out = String::from("{");
        for (k, &i) in set.iter().enumerate() {
            if k > 0 {
                out.push(',');
            }
            out.push_str(self.name(i));
        }
        out.push('}');
        out
    }

    fn check_index(&self, index: usize) -> Result<()> {
        if index < self.len() {
            Ok(())
        } else {
            Err(Error::PointOutOfRange {
                index,
                len: self.len(),
            })
        }
    }
}

/// A principal filter {A}↑ on a carrier, stored by its nonempty core A.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrincipalFilter {
    carrier: Carrier,
    core: BTreeSet<usize>,
}

impl PrincipalFilter {
    pub fn new(carrier: Carrier, core: BTreeSet<usize>) -> Result<PrincipalFilter> {
        if core.is_empty() {
            return Err(Error::EmptyCore);
        }
        for &i in &core {
            carrier.check_index(i)?;
        }
        Ok(PrincipalFilter { carrier, core })
    }

    /// The point filter ẋ = {x}↑.
    pub fn point(carrier: Carrier, index: usize) -> Result<PrincipalFilter> {
        PrincipalFilter::new(carrier, BTreeSet::from([index]))
    }

    pub fn from_names(carrier: Carrier, names: &[&str]) -> Result<PrincipalFilter> {
        let core = names
            .iter()
            .map(|n| carrier.index_of(n))
            .collect::<Result<BTreeSet<usize>>>()?;
        PrincipalFilter::new(carrier, core)
    }

    pub fn carrier(&self) -> &Carrier {
        &self.carrier
    }

    pub fn core(&self) -> &BTreeSet<usize> {
        &self.core
    }

    /// Refinement order: self ≤ other iff core(other) ⊆ core(self).
    pub fn leq(&self, other: &PrincipalFilter) -> Result<bool> {
        self.same_carrier(other)?;
        Ok(other.core.is_subset(&self.core))
    }

    /// The meet 𝓕 ∧ 𝓖: core is the union of cores.
    pub fn meet(&self, other: &PrincipalFilter) -> Result<PrincipalFilter> {
        self.same_carrier(other)?;
        let core = self.core.union(&other.core).copied().collect();
        PrincipalFilter::new(self.carrier.clone(), core)
    }

    pub fn is_ultra(&self) -> bool {
        self.core.len() == 1
    }

    /// The ultrafilters finer than this filter: the point filters of the core
    /// elements, in carrier order.
    pub fn ultrafilters(&self) -> Vec<PrincipalFilter> {
        self.core
            .iter()
            .map(|&i| PrincipalFilter::point(self.carrier.clone(), i).expect("core index valid"))
            .collect()
    }

    fn same_carrier(&self, other: &PrincipalFilter) -> Result<()> {
        if self.carrier == other.carrier {
            Ok(())
        } else {
            Err(Error::CarrierMismatch(format!(
                "filters on {} and {}",
                self.carrier.render_subset(&self.carrier.full_set()),
                other.carrier.render_subset(&other.carrier.full_set()),
            )))
        }
    }
}

impl fmt::Display for PrincipalFilter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}↑", self.carrier.render_subset(&self.core))
    }
}

/// A total point map between carriers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CarrierMap {
    source: Carrier,
    target: Carrier,
    table: Vec<usize>,
}

impl CarrierMap {
    pub fn new(source: Carrier, target: Carrier, table: Vec<usize>) -> Result<CarrierMap> {
        if table.len() != source.len() {
            return Err(Error::CarrierMismatch(format!(
                "map table has {} entries for a carrier of size {}",
                table.len(),
                source.len()
            )));
        }
        for &i in &table {
            target.check_index(i)?;
        }
        Ok(CarrierMap {
            source,
            target,
            table,
        })
    }

    pub fn source(&self) -> &Carrier {
        &self.source
    }

    pub fn target(&self) -> &Carrier {
        &self.target
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn apply(&self, index: usize) -> usize {
        self.table[index]
    }

    /// The image filter f[𝓕], with core f(core(𝓕)).
    pub fn image(&self, filter: &PrincipalFilter) -> Result<PrincipalFilter> {
        if filter.carrier() != &self.source {
            return Err(Error::CarrierMismatch(
                "image of a filter living on a different carrier".to_string(),
            ));
        }
        let core = filter.core().iter().map(|&i| self.table[i]).collect();
        PrincipalFilter::new(self.target.clone(), core)
    }
}

impl fmt::Display for CarrierMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, &j) in self.table.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}->{}", self.source.name(i), self.target.name(j))?;
        }
        Ok(())
    }
}

/// A selection: one filter on the target carrier for every point of the
/// domain carrier.
#[derive(Debug, Clone)]
pub struct Selection {
    domain: Carrier,
    target: Carrier,
    choices: Vec<PrincipalFilter>,
}

impl Selection {
    pub fn new(
        domain: Carrier,
        target: Carrier,
        choices: Vec<PrincipalFilter>,
    ) -> Result<Selection> {
        if choices.len() != domain.len() {
            return Err(Error::CarrierMismatch(format!(
                "selection has {} choices for a domain of size {}",
                choices.len(),
                domain.len()
            )));
        }
        for choice in &choices {
            if choice.carrier() != &target {
                return Err(Error::CarrierMismatch(
                    "selection choice lives on the wrong carrier".to_string(),
                ));
            }
        }
        Ok(Selection {
            domain,
            target,
            choices,
        })
    }

    pub fn domain(&self) -> &Carrier {
        &self.domain
    }

    pub fn target(&self) -> &Carrier {
        &self.target
    }

    pub fn choice(&self, index: usize) -> &PrincipalFilter {
        &self.choices[index]
    }

    /// The compression (Kowalsky sum) S(𝓕): its core is the union of the
    /// cores of the chosen filters over the core of 𝓕.
    pub fn kowalsky(&self, filter: &PrincipalFilter) -> Result<PrincipalFilter> {
        if filter.carrier() != &self.domain {
            return Err(Error::CarrierMismatch(
                "compression of a filter living on a different carrier".to_string(),
            ));
        }
        let mut core = BTreeSet::new();
        for &i in filter.core() {
            core.extend(self.choices[i].core().iter().copied());
        }
        PrincipalFilter::new(self.target.clone(), core)
    }
}

/// The evaluation filter ⟨𝓖, 𝓕⟩ of a filter 𝓖 on X under a filter 𝓕 on a set
/// of maps X → Y, given 𝓕 by its core; its core is {h(b) : h ∈ core(𝓕),
/// b ∈ core(𝓖)}.
pub fn evaluate(g: &PrincipalFilter, f_core: &[CarrierMap]) -> Result<PrincipalFilter> {
    let first = f_core.first().ok_or(Error::EmptyCore)?;
    let target = first.target().clone();
    let mut core = BTreeSet::new();
    for map in f_core {
        if map.source() != g.carrier() || map.target() != &target {
            return Err(Error::CarrierMismatch(
                "evaluation needs maps X → Y with 𝓖 on X".to_string(),
            ));
        }
        for &b in g.core() {
            core.insert(map.apply(b));
        }
    }
    PrincipalFilter::new(target, core)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn abc() -> Carrier {
        Carrier::new(vec!["a", "b", "c"]).unwrap()
    }

    fn filt(carrier: &Carrier, names: &[&str]) -> PrincipalFilter {
        PrincipalFilter::from_names(carrier.clone(), names).unwrap()
    }

    #[test]
    fn carrier_rejects_bad_names() {
        assert!(Carrier::new(Vec::<String>::new()).is_err());
        assert!(Carrier::new(vec!["a", "a"]).is_err());
        assert!(Carrier::new(vec!["a b"]).is_err());
        assert!(Carrier::new(vec!["a,b"]).is_err());
        assert!(Carrier::new(vec![""]).is_err());
        assert!(Carrier::new(vec!["x#1"]).is_err());
    }

    #[test]
    fn meet_unions_cores() {
        let c = abc();
        let f = filt(&c, &["a", "b"]);
        let g = filt(&c, &["b", "c"]);
        let m = f.meet(&g).unwrap();
        assert_eq!(m, filt(&c, &["a", "b", "c"]));
    }

    #[test]
    fn refinement_is_core_containment() {
        let c = abc();
        let f = filt(&c, &["a", "b"]);
        let g = filt(&c, &["b"]);
        assert!(f.leq(&g).unwrap());
        assert!(!g.leq(&f).unwrap());
        assert!(f.leq(&f).unwrap());
    }

    #[test]
    fn ultrafilters_are_point_filters_of_the_core() {
        let c = abc();
        let f = filt(&c, &["a", "b"]);
        let ultras = f.ultrafilters();
        assert_eq!(ultras.len(), 2);
        assert_eq!(ultras[0], filt(&c, &["a"]));
        assert_eq!(ultras[1], filt(&c, &["b"]));
        assert!(ultras.iter().all(|u| u.is_ultra()));
        assert!(!f.is_ultra());
    }

    #[test]
    fn image_maps_the_core() {
        let c = abc();
        let pq = Carrier::new(vec!["p", "q"]).unwrap();
        let map = CarrierMap::new(c.clone(), pq.clone(), vec![0, 0, 1]).unwrap();
        let f = filt(&c, &["a", "b"]);
        assert_eq!(map.image(&f).unwrap(), filt(&pq, &["p"]));
        let g = filt(&c, &["b", "c"]);
        assert_eq!(map.image(&g).unwrap(), filt(&pq, &["p", "q"]));
    }

    #[test]
    fn kowalsky_compression_unions_chosen_cores() {
        let xy = Carrier::new(vec!["x", "y"]).unwrap();
        let c = abc();
        let s = Selection::new(
            xy.clone(),
            c.clone(),
            vec![filt(&c, &["a"]), filt(&c, &["a", "b"])],
        )
        .unwrap();
        let f = filt(&xy, &["x", "y"]);
        assert_eq!(s.kowalsky(&f).unwrap(), filt(&c, &["a", "b"]));
        let just_x = filt(&xy, &["x"]);
        assert_eq!(s.kowalsky(&just_x).unwrap(), filt(&c, &["a"]));
    }

    #[test]
    fn evaluation_filter_collects_values() {
        let xy = Carrier::new(vec!["x", "y"]).unwrap();
        let c = abc();
        // h: x↦a, y↦b    k: x↦c, y↦b
        let h = CarrierMap::new(xy.clone(), c.clone(), vec![0, 1]).unwrap();
        let k = CarrierMap::new(xy.clone(), c.clone(), vec![2, 1]).unwrap();
        let g = filt(&xy, &["x"]);
        assert_eq!(evaluate(&g, &[h.clone(), k.clone()]).unwrap(), filt(&c, &["a", "c"]));
        let g2 = filt(&xy, &["x", "y"]);
        assert_eq!(evaluate(&g2, &[h, k]).unwrap(), filt(&c, &["a", "b", "c"]));
    }

    #[test]
    fn carrier_mismatch_is_an_error() {
        let c = abc();
        let other = Carrier::new(vec!["a", "b", "z"]).unwrap();
        let f = filt(&c, &["a"]);
        let g = filt(&other, &["z"]);
        assert!(f.meet(&g).is_err());
        assert!(f.leq(&g).is_err());
    }

    fn core_strategy(n: usize) -> impl Strategy<Value = BTreeSet<usize>> {
        prop::collection::btree_set(0..n, 1..=n)
    }

    proptest! {
        #[test]
        fn meet_is_commutative_associative_idempotent(
            a in core_strategy(4),
            b in core_strategy(4),
            c in core_strategy(4),
        ) {
            let carrier = Carrier::new(vec!["p0", "p1", "p2", "p3"]).unwrap();
            let f = PrincipalFilter::new(carrier.clone(), a).unwrap();
            let g = PrincipalFilter::new(carrier.clone(), b).unwrap();
            let h = PrincipalFilter::new(carrier, c).unwrap();
            prop_assert_eq!(f.meet(&g).unwrap(), g.meet(&f).unwrap());
            prop_assert_eq!(
                f.meet(&g).unwrap().meet(&h).unwrap(),
                f.meet(&g.meet(&h).unwrap()).unwrap()
            );
            prop_assert_eq!(f.meet(&f).unwrap(), f.clone());
            // The meet is the finest filter below both arguments.
            prop_assert!(f.meet(&g).unwrap().leq(&f).unwrap());
            prop_assert!(f.meet(&g).unwrap().leq(&g).unwrap());
        }

        #[test]
        fn image_is_monotone(
            a in core_strategy(4),
            b in core_strategy(4),
            table in prop::collection::vec(0..3usize, 4),
        ) {
            let carrier = Carrier::new(vec!["p0", "p1", "p2", "p3"]).unwrap();
            let target = Carrier::new(vec!["q0", "q1", "q2"]).unwrap();
            let map = CarrierMap::new(carrier.clone(), target, table).unwrap();
            let f = PrincipalFilter::new(carrier.clone(), a).unwrap();
            let g = PrincipalFilter::new(carrier, b).unwrap();
            if f.leq(&g).unwrap() {
                prop_assert!(map.image(&f).unwrap().leq(&map.image(&g).unwrap()).unwrap());
            }
        }

        #[test]
        fn kowalsky_is_monotone(
            a in core_strategy(3),
            b in core_strategy(3),
            cores in prop::collection::vec(core_strategy(3), 3),
        ) {
            let carrier = Carrier::new(vec!["p0", "p1", "p2"]).unwrap();
            let choices = cores
                .into_iter()
                .map(|core| PrincipalFilter::new(carrier.clone(), core).unwrap())
                .collect();
            let s = Selection::new(carrier.clone(), carrier.clone(), choices).unwrap();
            let f = PrincipalFilter::new(carrier.clone(), a).unwrap();
            let g = PrincipalFilter::new(carrier, b).unwrap();
            if f.leq(&g).unwrap() {
                prop_assert!(s.kowalsky(&f).unwrap().leq(&s.kowalsky(&g).unwrap()).unwrap());
            }
        }
    }
}
