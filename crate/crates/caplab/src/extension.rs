//! Extending a contraction f : S → Y beyond S.
//!
//! For a subset S of an ambient space X, a level ε, and a point x, the
//! filters H_S^ε(x) = {nonempty B ⊆ S : λ_X({B}↑)(x) ≤ ε} collect the
//! S-material converging to x at cost ε, and
//! F_S^ε(x) = {y ∈ Y : ∀B ∈ H_S^ε(x), λ_Y(f[B])(y) ≤ ε} the target points
//! compatible with all of it (F_S^ε(x) = Y when H_S^ε(x) is empty).  A map
//! g defined on h(S,f,α) = S^{(α)} ∩ {x : ⋂_ε F_S^ε(x) ≠ ∅} that restricts
//! to f on S and picks g(x) from that intersection is an admissible
//! extension; it is a regular extension when every value is a regularity
//! point of Y.  The extension theorem bounds the contraction default of
//! every regular extension by α ⊕ α provided S is α-⊕-strict in X.
//!
//! The intersection over ε ∈ [0,∞] is evaluated on X's value grid: between
//! consecutive grid values the family H_S^ε(x) is constant and the bound
//! `≤ ε` is tightest at the lower endpoint, and at ε = ∞ the constraint is
//! vacuous, so the finite grid decides the full intersection.  A refinement
//! cross-check with interval midpoints guards that argument in the tests.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::homspace::{contraction_default, is_contraction};
use crate::properties::{is_strict, regularity_points};
use crate::quantale::{Tensor, Weight};
use crate::spaces::{FiniteCapSpace, SpaceMap};
use crate::{Error, Result};

/// Default ceiling on the number of enumerated extensions.
pub const EXTENSION_CAP: usize = 1_000_000;

/// A contraction on a subspace together with the ambient data needed to
/// extend it: ambient X, subset S, target Y, tensor, and level α.
#[derive(Debug, Clone)]
pub struct ExtensionProblem {
    ambient: FiniteCapSpace,
    target: FiniteCapSpace,
    subset: BTreeSet<usize>,
    assignment: BTreeMap<usize, usize>,
    restricted: FiniteCapSpace,
    tensor: Tensor,
    alpha: Weight,
}

impl ExtensionProblem {
    /// `assignment` must be defined exactly on `subset` and be a
    /// contraction from the subspace of `ambient` on `subset` into
    /// `target`.
    pub fn new(
        ambient: &FiniteCapSpace,
        target: &FiniteCapSpace,
        subset: BTreeSet<usize>,
        assignment: BTreeMap<usize, usize>,
        tensor: Tensor,
        alpha: Weight,
    ) -> Result<ExtensionProblem> {
        if subset.is_empty() {
            return Err(Error::Precondition(
                "extension needs a nonempty subset S".into(),
            ));
        }
        if let Some(&index) = subset.iter().find(|&&p| p >= ambient.len()) {
            return Err(Error::PointOutOfRange {
                index,
                len: ambient.len(),
            });
        }
        if assignment.keys().copied().collect::<BTreeSet<usize>>() != subset {
            return Err(Error::Precondition(
                "the map must be defined exactly on S".into(),
            ));
        }
        if let Some(&index) = assignment.values().find(|&&v| v >= target.len()) {
            return Err(Error::PointOutOfRange {
                index,
                len: target.len(),
            });
        }
        let restricted = ambient.subspace(&subset)?;
        let on_subspace = SpaceMap::new(
            "f",
            restricted.clone(),
            target.clone(),
            subset.iter().map(|p| assignment[p]).collect(),
        )?;
        if !is_contraction(&on_subspace) {
            return Err(Error::Precondition(format!(
                "the map is not a contraction from the subspace of `{}` on {} into `{}`",
                ambient.name(),
                ambient.carrier().render_subset(&subset),
                target.name()
            )));
        }
        Ok(ExtensionProblem {
            ambient: ambient.clone(),
            target: target.clone(),
            subset,
            assignment,
            restricted,
            tensor,
            alpha,
        })
    }

    pub fn ambient(&self) -> &FiniteCapSpace {
        &self.ambient
    }

    pub fn target(&self) -> &FiniteCapSpace {
        &self.target
    }

    pub fn subset(&self) -> &BTreeSet<usize> {
        &self.subset
    }

    pub fn assignment(&self) -> &BTreeMap<usize, usize> {
        &self.assignment
    }

    pub fn tensor(&self) -> Tensor {
        self.tensor
    }

    pub fn alpha(&self) -> Weight {
        self.alpha
    }

    /// f as a map from the subspace on S.
    pub fn restriction_map(&self) -> SpaceMap {
        SpaceMap::new(
            "f",
            self.restricted.clone(),
            self.target.clone(),
            self.subset.iter().map(|p| self.assignment[p]).collect(),
        )
        .expect("validated at construction")
    }

    /// ⋂_{ε} F_S^ε(x), evaluated over X's finite value grid.
    pub fn candidate_targets(&self, x: usize) -> Result<BTreeSet<usize>> {
        self.targets_on_grid(x, &self.ambient.finite_grid())
    }

    /// The intersection of the F_S^ε(x) over an explicit set of levels.
    fn targets_on_grid(&self, x: usize, grid: &[Weight]) -> Result<BTreeSet<usize>> {
        if x >= self.ambient.len() {
            return Err(Error::PointOutOfRange {
                index: x,
                len: self.ambient.len(),
            });
        }
        let s: Vec<usize> = self.subset.iter().copied().collect();
        if s.len() > 16 {
            return Err(Error::EnumerationCap {
                size: 1u128 << s.len(),
                cap: 1 << 16,
            });
        }
        let mut targets: BTreeSet<usize> = (0..self.target.len()).collect();
        for &eps in grid {
            for mask in 1u32..(1 << s.len()) {
                let b: BTreeSet<usize> = s
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| mask & (1 << i) != 0)
                    .map(|(_, &p)| p)
                    .collect();
                if self.ambient.limit_of_set(&b, x) > eps {
                    continue;
                }
                let image: BTreeSet<usize> = b.iter().map(|p| self.assignment[p]).collect();
                targets.retain(|&y| self.target.limit_of_set(&image, y) <= eps);
            }
        }
        Ok(targets)
    }

    /// h(S,f,α): the α-enlargement of S restricted to points with at least
    /// one candidate target.
    pub fn extension_domain(&self) -> Result<BTreeSet<usize>> {
        let mut domain = BTreeSet::new();
        for x in self.ambient.enlarge(&self.subset, self.alpha) {
            if !self.candidate_targets(x)?.is_empty() {
                domain.insert(x);
            }
        }
        assert!(
            self.subset.is_subset(&domain),
            "a contraction always extends over its own subset"
        );
        Ok(domain)
    }

    /// All admissible extensions in deterministic order (the first free
    /// point of the domain cycles fastest), fixed to f on S.  With
    /// `regular_only`, only extensions valued in the ⊕-regularity points of
    /// Y are produced.
    pub fn enumerate_extensions(&self, regular_only: bool) -> Result<Vec<ExtensionCandidate>> {
        self.enumerate_extensions_capped(regular_only, EXTENSION_CAP)
    }

    /// As [`ExtensionProblem::enumerate_extensions`] with an explicit cap on
    /// the number of candidates.
    pub fn enumerate_extensions_capped(
        &self,
        regular_only: bool,
        cap: usize,
    ) -> Result<Vec<ExtensionCandidate>> {
        let regular = regularity_points(&self.target, self.tensor);
        if regular_only && self.assignment.values().any(|v| !regular.contains(v)) {
            return Ok(Vec::new());
        }
        let domain = self.extension_domain()?;
        let free: Vec<usize> = domain.difference(&self.subset).copied().collect();
        let mut choices: Vec<Vec<usize>> = Vec::with_capacity(free.len());
        for &x in &free {
            let targets = self.candidate_targets(x)?;
            let allowed: Vec<usize> = targets
                .into_iter()
                .filter(|y| !regular_only || regular.contains(y))
                .collect();
            choices.push(allowed);
        }
        let mut total: u128 = 1;
        for c in &choices {
            total = total.saturating_mul(c.len() as u128);
        }
        if total > cap as u128 {
            return Err(Error::EnumerationCap { size: total, cap });
        }
        if total == 0 {
            return Ok(Vec::new());
        }

        let mut out = Vec::with_capacity(total as usize);
        let mut odometer = vec![0usize; free.len()];
        loop {
            let mut assignment = self.assignment.clone();
            for (i, &x) in free.iter().enumerate() {
                assignment.insert(x, choices[i][odometer[i]]);
            }
            let is_regular_candidate = assignment.values().all(|v| regular.contains(v));
            out.push(ExtensionCandidate {
                domain: domain.clone(),
                assignment,
                admissible: true,
                regular: is_regular_candidate,
            });
            let mut i = 0;
            loop {
                if i == free.len() {
                    return Ok(out);
                }
                odometer[i] += 1;
                if odometer[i] < choices[i].len() {
                    break;
                }
                odometer[i] = 0;
                i += 1;
            }
        }
    }
}

/// One extension of f: a domain h(S,f,α) and a choice of target for each of
/// its points, restricting to f on S.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionCandidate {
    domain: BTreeSet<usize>,
    assignment: BTreeMap<usize, usize>,
    /// Every value lies in the point's candidate-target set (true for all
    /// enumerated candidates; recorded for reporting).
    pub admissible: bool,
    /// Every value is a ⊕-regularity point of the target.
    pub regular: bool,
}

impl ExtensionCandidate {
    pub fn domain(&self) -> &BTreeSet<usize> {
        &self.domain
    }

    pub fn assignment(&self) -> &BTreeMap<usize, usize> {
        &self.assignment
    }

    /// The candidate as a map from the subspace of the ambient space on its
    /// domain into the target.
    pub fn to_map(&self, problem: &ExtensionProblem) -> Result<SpaceMap> {
        let source = problem.ambient().subspace(&self.domain)?;
        SpaceMap::new(
            "g",
            source,
            problem.target().clone(),
            self.domain.iter().map(|p| self.assignment[p]).collect(),
        )
    }

    /// Human-readable assignment, e.g. `s1->p s2->q t->p`.
    pub fn render(&self, problem: &ExtensionProblem) -> String {
        self.assignment
            .iter()
            .map(|(&x, &y)| {
                format!(
                    "{}->{}",
                    problem.ambient().point_name(x),
                    problem.target().point_name(y)
                )
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// One enumerated extension with its contraction default.
#[derive(Debug, Clone)]
pub struct CandidateOutcome {
    pub candidate: ExtensionCandidate,
    pub description: String,
    pub m: Weight,
    pub within_bound: bool,
}

/// Outcome of checking m_⊕(g) ≤ α ⊕ α over every regular extension g.
#[derive(Debug, Clone)]
pub struct ExtensionTheoremReport {
    pub tensor: Tensor,
    pub alpha: Weight,
    pub bound: Weight,
    /// Whether S is α-⊕-strict in X (the theorem's hypothesis).
    pub precondition_met: bool,
    /// Rendered strictness failure when the hypothesis does not hold.
    pub strictness_failure: Option<String>,
    pub outcomes: Vec<CandidateOutcome>,
    /// True when the hypothesis held and every regular extension met the
    /// bound; vacuously true when the hypothesis failed.
    pub holds: bool,
}

impl fmt::Display for ExtensionTheoremReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(failure) = &self.strictness_failure {
            return write!(f, "hypothesis failed (S is not strict): {failure}");
        }
        writeln!(
            f,
            "{} regular extensions at α={} ({}), bound {}",
            self.outcomes.len(),
            self.alpha,
            self.tensor,
            self.bound
        )?;
        for outcome in &self.outcomes {
            writeln!(
                f,
                "  g: {} m={} {}",
                outcome.description,
                outcome.m,
                if outcome.within_bound { "ok" } else { "EXCEEDS" }
            )?;
        }
        write!(f, "holds={}", self.holds)
    }
}

/// Check the extension bound: if S is α-⊕-strict in X, every regular
/// extension g : h(S,f,α) → Y of f has m_⊕(g) ≤ α ⊕ α, with g's source
/// structured as the subspace of X on h(S,f,α).  A failed hypothesis is
/// reported, not raised.
pub fn verify_extension_theorem(problem: &ExtensionProblem) -> Result<ExtensionTheoremReport> {
    let tensor = problem.tensor();
    let alpha = problem.alpha();
    let bound = tensor.combine(alpha, alpha);
    if let Some(witness) = is_strict(
        problem.ambient(),
        problem.subset(),
        alpha,
        tensor,
        false,
    )? {
        return Ok(ExtensionTheoremReport {
            tensor,
            alpha,
            bound,
            precondition_met: false,
            strictness_failure: Some(witness.render(problem.ambient())),
            outcomes: Vec::new(),
            holds: true,
        });
    }
    let mut outcomes = Vec::new();
    let mut holds = true;
    for candidate in problem.enumerate_extensions(true)? {
        let g = candidate.to_map(problem)?;
        let m = contraction_default(&g, tensor);
        let within_bound = m <= bound;
        holds &= within_bound;
        outcomes.push(CandidateOutcome {
            description: candidate.render(problem),
            candidate,
            m,
            within_bound,
        });
    }
    Ok(ExtensionTheoremReport {
        tensor,
        alpha,
        bound,
        precondition_met: true,
        strictness_failure: None,
        outcomes,
        holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{self, conv4_with_nonstrict_subspace, m3, x4, y3, SplitMix64};
    use crate::properties::{is_diagonal, is_strict_on_grid};
    use crate::quantale::Rational;

    fn x4_problem(alpha: Weight) -> ExtensionProblem {
        ExtensionProblem::new(
            &x4(),
            &m3(),
            BTreeSet::from([0, 1]),
            BTreeMap::from([(0, 0), (1, 1)]),
            Tensor::Plus,
            alpha,
        )
        .unwrap()
    }

    #[test]
    fn candidate_targets_of_the_reference_problem() {
        let problem = x4_problem(Weight::zero());
        // The only S-filter converging to t at level 0 is {s1}↑, so t's
        // targets are the points at distance 0 from f(s1) = p.
        assert_eq!(problem.candidate_targets(2).unwrap(), BTreeSet::from([0]));
        assert_eq!(problem.candidate_targets(0).unwrap(), BTreeSet::from([0]));
        assert_eq!(problem.candidate_targets(1).unwrap(), BTreeSet::from([1]));
        assert!(matches!(
            problem.candidate_targets(9),
            Err(Error::PointOutOfRange { .. })
        ));
    }

    #[test]
    fn points_with_no_converging_filter_accept_every_target() {
        // d(t,s1) = ∞: no S-material reaches t at any finite level, so the
        // constraint set is empty and all of Y qualifies.
        let mut x = FiniteCapSpace::discrete("X2", vec!["s1", "t"], true).unwrap();
        x.set_entry_by_name("s1", "t", Weight::INF).unwrap();
        x.set_entry_by_name("t", "s1", Weight::INF).unwrap();
        let problem = ExtensionProblem::new(
            &x,
            &m3(),
            BTreeSet::from([0]),
            BTreeMap::from([(0, 0)]),
            Tensor::Plus,
            Weight::INF,
        )
        .unwrap();
        assert_eq!(
            problem.candidate_targets(1).unwrap(),
            BTreeSet::from([0, 1, 2])
        );
    }

    #[test]
    fn extension_domain_of_the_reference_problem() {
        assert_eq!(
            x4_problem(Weight::zero()).extension_domain().unwrap(),
            BTreeSet::from([0, 1, 2])
        );
        assert_eq!(
            x4_problem(Weight::INF).extension_domain().unwrap(),
            BTreeSet::from([0, 1, 2])
        );

        // S = X always extends to exactly X.
        let m = m3();
        let all: BTreeSet<usize> = (0..3).collect();
        let identity_on_all = ExtensionProblem::new(
            &m,
            &m,
            all.clone(),
            (0..3).map(|i| (i, i)).collect(),
            Tensor::Plus,
            Weight::zero(),
        )
        .unwrap();
        assert_eq!(identity_on_all.extension_domain().unwrap(), all);
        let candidates = identity_on_all.enumerate_extensions(false).unwrap();
        assert_eq!(candidates.len(), 1);
        assert_eq!(
            candidates[0].assignment(),
            identity_on_all.assignment(),
            "with no free points the only candidate is f itself"
        );
    }

    #[test]
    fn reference_problem_has_exactly_one_extension() {
        let problem = x4_problem(Weight::zero());
        let all = problem.enumerate_extensions(false).unwrap();
        assert_eq!(all.len(), 1);
        assert_eq!(
            all[0].assignment(),
            &BTreeMap::from([(0, 0), (1, 1), (2, 0)])
        );
        assert!(all[0].admissible && all[0].regular);
        assert_eq!(all[0].render(&problem), "s1->p s2->q t->p");

        // Every point of the metric target is a +-regularity point, so the
        // regular-only enumeration is the same list.
        let regular = problem.enumerate_extensions(true).unwrap();
        assert_eq!(regular, all);
    }

    #[test]
    fn construction_rejects_bad_problems() {
        let m = m3();
        assert!(matches!(
            ExtensionProblem::new(
                &m,
                &m,
                BTreeSet::new(),
                BTreeMap::new(),
                Tensor::Plus,
                Weight::zero()
            ),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            ExtensionProblem::new(
                &m,
                &m,
                BTreeSet::from([0, 1]),
                BTreeMap::from([(0, 0)]),
                Tensor::Plus,
                Weight::zero()
            ),
            Err(Error::Precondition(_))
        ));

        // d(p,q) = 1 in the source but the images sit at distance 5:
        // not a contraction.
        let err = ExtensionProblem::new(
            &m,
            &y3(),
            BTreeSet::from([0, 1]),
            BTreeMap::from([(0, 2), (1, 1)]),
            Tensor::Plus,
            Weight::zero(),
        );
        assert!(matches!(err, Err(Error::Precondition(_))));
    }

    #[test]
    fn enumeration_cap_is_reported() {
        let mut x = FiniteCapSpace::discrete("X2", vec!["s", "t"], true).unwrap();
        x.set_entry_by_name("s", "t", Weight::INF).unwrap();
        x.set_entry_by_name("t", "s", Weight::INF).unwrap();
        let y = FiniteCapSpace::discrete(
            "Y5",
            (0..5).map(|i| format!("y{i}")).collect::<Vec<_>>(),
            true,
        )
        .unwrap();
        let problem = ExtensionProblem::new(
            &x,
            &y,
            BTreeSet::from([0]),
            BTreeMap::from([(0, 0)]),
            Tensor::Plus,
            Weight::INF,
        )
        .unwrap();
        assert!(matches!(
            problem.enumerate_extensions_capped(false, 3),
            Err(Error::EnumerationCap { size: 5, cap: 3 })
        ));
        assert_eq!(problem.enumerate_extensions(false).unwrap().len(), 5);
    }

    #[test]
    fn domains_grow_with_alpha() {
        let mut rng = SplitMix64::new(31);
        let grid = corpus::default_entry_grid();
        for _ in 0..12 {
            let x = corpus::random_space(&mut rng, "X", 4, &grid).unwrap();
            let y = corpus::random_metric(&mut rng, "Y", 3, &grid).unwrap();
            let target = rng.next_below(3) as usize;
            let s: BTreeSet<usize> = BTreeSet::from([0, 1 + rng.next_below(3) as usize]);
            let assignment: BTreeMap<usize, usize> = s.iter().map(|&p| (p, target)).collect();
            let alphas = x.value_grid();
            let mut previous: Option<BTreeSet<usize>> = None;
            for alpha in alphas {
                let problem = ExtensionProblem::new(
                    &x,
                    &y,
                    s.clone(),
                    assignment.clone(),
                    Tensor::Plus,
                    alpha,
                )
                .unwrap();
                let domain = problem.extension_domain().unwrap();
                assert!(problem.subset().is_subset(&domain));
                if let Some(prev) = previous {
                    assert!(
                        prev.is_subset(&domain),
                        "domains must grow with α on {}",
                        x.name()
                    );
                }
                previous = Some(domain);
            }
        }
    }

    #[test]
    fn grid_refinement_does_not_change_targets() {
        let mut rng = SplitMix64::new(63);
        let grid = corpus::default_entry_grid();
        let mut spaces = vec![x4(), conv4_with_nonstrict_subspace()];
        for _ in 0..8 {
            spaces.push(corpus::random_space(&mut rng, "X", 4, &grid).unwrap());
        }
        for x in spaces {
            let y = corpus::random_metric(&mut rng, "Y", 3, &grid).unwrap();
            let target = rng.next_below(3) as usize;
            let s = BTreeSet::from([0, 1]);
            let assignment: BTreeMap<usize, usize> = s.iter().map(|&p| (p, target)).collect();
            let problem =
                ExtensionProblem::new(&x, &y, s, assignment, Tensor::Plus, Weight::zero())
                    .unwrap();

            let base = x.finite_grid();
            let mut refined = base.clone();
            for pair in base.windows(2) {
                let (a, b) = (pair[0].finite().unwrap(), pair[1].finite().unwrap());
                refined.push(Weight::Finite((a + b) / Rational::from_integer(2)));
            }
            refined.sort();
            for point in 0..x.len() {
                assert_eq!(
                    problem.targets_on_grid(point, &base).unwrap(),
                    problem.targets_on_grid(point, &refined).unwrap(),
                    "midpoint refinement changed targets at {} of {}",
                    x.point_name(point),
                    x.name()
                );
            }
        }
    }

    #[test]
    fn theorem_report_on_the_reference_problem() {
        let report = verify_extension_theorem(&x4_problem(Weight::zero())).unwrap();
        assert!(report.precondition_met);
        assert!(report.holds);
        assert_eq!(report.bound, Weight::zero());
        assert_eq!(report.outcomes.len(), 1);
        assert_eq!(report.outcomes[0].m, Weight::zero());
        assert!(report.to_string().contains("g: s1->p s2->q t->p m=0 ok"));
    }

    #[test]
    fn failed_strictness_is_reported_not_raised() {
        let space = conv4_with_nonstrict_subspace();
        let subset = BTreeSet::from([1, 2]);
        let assignment: BTreeMap<usize, usize> = subset.iter().map(|&p| (p, 0)).collect();
        let problem = ExtensionProblem::new(
            &space,
            &m3(),
            subset,
            assignment,
            Tensor::Plus,
            Weight::zero(),
        )
        .unwrap();
        let report = verify_extension_theorem(&problem).unwrap();
        assert!(!report.precondition_met);
        assert!(report.outcomes.is_empty());
        let failure = report.strictness_failure.as_deref().unwrap();
        assert!(failure.contains("B={p}"), "got: {failure}");
    }

    #[test]
    fn zero_level_extensions_into_regular_targets_are_contractions() {
        // Metric ambients are +-diagonal, hence every subset is 0-strict;
        // metric targets are +-regular.  At α = 0 the theorem then says
        // every admissible extension is a contraction.
        let mut rng = SplitMix64::new(97);
        let grid = corpus::default_entry_grid();
        let mut problems = 0;
        for _ in 0..10 {
            let x = corpus::random_metric(&mut rng, "X", 4, &grid).unwrap();
            assert!(is_diagonal(&x, Tensor::Plus).is_none());
            let y = corpus::random_metric(&mut rng, "Y", 3, &grid).unwrap();
            let s = BTreeSet::from([0, 2]);
            let target = rng.next_below(3) as usize;
            let assignment: BTreeMap<usize, usize> = s.iter().map(|&p| (p, target)).collect();
            let problem =
                ExtensionProblem::new(&x, &y, s, assignment, Tensor::Plus, Weight::zero())
                    .unwrap();
            let report = verify_extension_theorem(&problem).unwrap();
            assert!(report.precondition_met, "diagonal ⟹ strict at every α");
            assert!(report.holds);
            assert!(
                !report.outcomes.is_empty(),
                "candidate targets are nonempty on the domain, so one extension always exists"
            );
            for outcome in &report.outcomes {
                assert!(outcome.m.is_zero(), "α=0 forces contractions");
            }
            problems += report.outcomes.len();
        }
        assert!(problems >= 10);
    }

    #[test]
    fn strict_subsets_of_convergence_spaces_extend_continuously() {
        // {0,∞}-structures are convergence spaces; on a regular target the
        // level-0 theorem produces continuous (= contractive) extensions.
        let mut rng = SplitMix64::new(5);
        let y = m3().coreflection_c();
        let mut verified = 0;
        for _ in 0..30 {
            let x = corpus::random_conv(&mut rng, "C", 4).unwrap();
            let s = BTreeSet::from([0, 1]);
            if is_strict_on_grid(&x, &s, Tensor::Plus, false)
                .unwrap()
                .is_some()
            {
                continue;
            }
            let assignment: BTreeMap<usize, usize> = s.iter().map(|&p| (p, 1)).collect();
            let problem =
                ExtensionProblem::new(&x, &y, s, assignment, Tensor::Plus, Weight::zero())
                    .unwrap();
            let report = verify_extension_theorem(&problem).unwrap();
            assert!(report.precondition_met);
            assert!(report.holds);
            assert!(!report.outcomes.is_empty());
            for outcome in &report.outcomes {
                assert!(outcome.m.is_zero());
            }
            verified += 1;
        }
        assert!(verified > 0, "the corpus must contain strict instances");
    }
}
