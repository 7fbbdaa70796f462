//! Mechanized counterexample builders.
//!
//! Both constructions consume a selection-regularity witness on Y — data
//! (A, l, 𝒮, 𝓗, y₀) with λ_Y(l[𝓗])(y₀) > λ_Y(𝒮(𝓗))(y₀) ⊕ ⋁_a λ_Y(𝒮(a))(l(a))
//! — and erect an ambient space on the carrier (Y×A) ∪ A ∪ {x_∞}:
//!
//! * [`build_thm1_converse`] equips the carrier with a topological ({0,∞})
//!   structure in which each pair (y,a) is isolated, each a-copy collects
//!   core(𝒮(a))×{a} together with a, and x_∞ collects
//!   𝒩 = ⋃_{a ∈ core 𝓗} (core(𝒮(a))×{a} ∪ {a}).  The evaluation map f
//!   (first projection on pairs, l on A, y₀ at x_∞) then has a contraction
//!   default strictly above its hom-limit at the distinguished function
//!   filter 𝓕₀, refuting any hoped-for converse bound m_⊕ ≤ c.
//!
//! * [`build_extension_converse`] weights the same carrier (the a-row
//!   carries v_a = λ_Y(𝒮(a))(l(a)) on its pair block, the x_∞-row carries
//!   v_H = λ_Y(𝒮(𝓗))(y₀) on core 𝒩) and exhibits an admissible extension
//!   g of the projection f : Y×A → Y that is not a contraction, although
//!   S = Y×A is uniformly strict and g is defined on all of h(S,f,α).
//!
//! Every verification clause is recomputed from first principles on the
//! built instance; a failing clause aborts with the transcript, since it
//! would signal a defect in the builder rather than in the refuted bound.
//!
//! One reading note on the weighted structure: the proof defines
//! λ_X case-wise on filters, giving the a-row the value v_a "whenever
//! 𝓖 ≥ 𝒮(a)×{a}↑" and the x_∞-row v_H "whenever 𝓖 ≥ 𝒩".  Taken literally
//! those cases leave λ_X(𝒮(a)×{a}↑ ∧ {a}↑)(a) at ∞, which breaks the meet
//! axiom (the meet of a v_a-level filter and the point filter must stay at
//! v_a).  The matrix encoding — equivalently, reading the cases as
//! "𝓖 ≥ 𝒮(a)×{a}↑ ∧ {a}↑ and 𝓖 ≠ {a}↑" — is the meet-closed repair, and
//! the case evaluators used by the faithfulness tests spell that out.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::extension::ExtensionProblem;
use crate::filters::PrincipalFilter;
use crate::homspace::{contraction_default, hom_limit, FunctionSpace};
use crate::properties::{
    check_selection_regularity, classify, is_diagonal, is_strict, RegularityWitness,
};
use crate::quantale::{Tensor, Weight};
use crate::spaces::{FiniteCapSpace, SpaceMap};
use crate::{Error, Result};

/// Which of the two builders produced a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstructionKind {
    /// Contraction default above the hom-limit of the distinguished filter.
    HomConverse,
    /// Admissible non-contractive extension of a contraction.
    ExtensionConverse,
}

impl fmt::Display for ConstructionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstructionKind::HomConverse => write!(f, "hom-converse"),
            ConstructionKind::ExtensionConverse => write!(f, "extension-converse"),
        }
    }
}

/// A verified counterexample package: the built ambient space, the maps and
/// distinguished filter, the two sides of the strict inequality, and the
/// transcript of every checked clause.
#[derive(Debug, Clone)]
pub struct ConstructionReport {
    pub kind: ConstructionKind,
    /// The built ambient space X.
    pub space: FiniteCapSpace,
    /// The evaluation map f : X → Y (hom converse) or the contraction
    /// f : S → Y it all starts from (extension converse).
    pub f: SpaceMap,
    /// The non-contractive admissible extension g : X → Y, when applicable.
    pub g: Option<SpaceMap>,
    /// The designated function set carrying the distinguished filter, when
    /// the filter lives on functions.
    pub functions: Option<FunctionSpace>,
    /// The distinguished filter: 𝓕₀ on the function set (hom converse) or
    /// the A-copy of core 𝓗 inside X (extension converse).
    pub filter: PrincipalFilter,
    /// Extension data, when applicable.
    pub subset: Option<BTreeSet<usize>>,
    pub alpha: Option<Weight>,
    /// The violated inequality, lhs > rhs exactly.
    pub lhs: Weight,
    pub rhs: Weight,
    pub transcript: Vec<String>,
}

impl fmt::Display for ConstructionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} on `{}`:", self.kind, self.space.name())?;
        for line in &self.transcript {
            writeln!(f, "  {line}")?;
        }
        match self.kind {
            ConstructionKind::HomConverse => {
                write!(f, "  strict gap: {} > {}", self.lhs, self.rhs)
            }
            // The extension report reads bound-first: the bound the theorem
            // would impose, beaten by the actual value.
            ConstructionKind::ExtensionConverse => {
                write!(f, "  strict gap: {} < {}", self.rhs, self.lhs)
            }
        }
    }
}

/// Outcome of the end-to-end pipeline on a target space.
#[derive(Debug, Clone)]
pub enum RefutationOutcome {
    /// No selection-regularity violation exists; nothing to refute.
    Regular,
    /// Both counterexample packages, built from the sharpest violation.
    Refuted {
        witness: RegularityWitness,
        hom: Box<ConstructionReport>,
        extension: Box<ConstructionReport>,
    },
}

/// Shared resolved geometry of the carrier (Y×A) ∪ A ∪ {x_∞}.
struct Layout {
    space: FiniteCapSpace,
    y: FiniteCapSpace,
    a_count: usize,
    /// X-index of the pair (y_pt, a).
    pair: Vec<Vec<usize>>,
    /// X-index of the a-copy.
    a_copy: Vec<usize>,
    /// X-index of x_∞.
    inf: usize,
    /// core 𝒮(a) ⊆ Y per a ∈ A.
    choice_cores: Vec<BTreeSet<usize>>,
    /// l(a) ∈ Y per a ∈ A.
    l_values: Vec<usize>,
    /// core 𝓗 ⊆ A.
    h_core: BTreeSet<usize>,
    y0: usize,
    /// v_a = λ_Y(𝒮(a))(l(a)) per a ∈ A.
    v_a: Vec<Weight>,
    /// v_H = λ_Y(𝒮(𝓗))(y₀).
    v_h: Weight,
    /// ⋁_a v_a over all a ∈ A.
    sup: Weight,
    /// core 𝒩 ⊆ X.
    nu_core: BTreeSet<usize>,
}

impl Layout {
    /// Resolve the witness against Y, allocate collision-free point names
    /// ("(y.aK)", "aK", "x_inf" with A relabeled to fresh tokens), and lay
    /// out the base matrix: every point at distance 0 from itself only.
    fn new(
        name: &str,
        y: &FiniteCapSpace,
        witness: &RegularityWitness,
        tensor: Tensor,
    ) -> Result<Layout> {
        let (lhs, rhs) = witness.verify(y, tensor)?;
        debug_assert!(lhs > rhs, "verify rejects non-violating witnesses");

        let a_count = witness.index_carrier().len();
        let n_y = y.len();
        let mut names: Vec<String> = Vec::with_capacity(n_y * a_count + a_count + 1);
        let mut pair = vec![vec![0usize; a_count]; n_y];
        for a in 0..a_count {
            for y_pt in 0..n_y {
                pair[y_pt][a] = names.len();
                names.push(format!("({}.a{})", y.point_name(y_pt), a));
            }
        }
        let a_copy: Vec<usize> = (0..a_count)
            .map(|a| {
                names.push(format!("a{a}"));
                names.len() - 1
            })
            .collect();
        names.push("x_inf".to_string());
        let inf = names.len() - 1;
        let space = FiniteCapSpace::discrete(name, names, true)?;

        let choice_cores: Vec<BTreeSet<usize>> = (0..a_count)
            .map(|a| witness.selection.choice(a).core().clone())
            .collect();
        let l_values: Vec<usize> = (0..a_count).map(|a| witness.l.apply(a)).collect();
        let h_core = witness.h.core().clone();
        let y0 = witness.y0;

        let v_a: Vec<Weight> = (0..a_count)
            .map(|a| y.limit_of_set(&choice_cores[a], l_values[a]))
            .collect();
        let kowalsky_core: BTreeSet<usize> = h_core
            .iter()
            .flat_map(|&a| choice_cores[a].iter().copied())
            .collect();
        let v_h = y.limit_of_set(&kowalsky_core, y0);
        let sup = v_a.iter().copied().fold(Weight::zero(), Weight::join);

        let mut nu_core = BTreeSet::new();
        for &a in &h_core {
            for &c in &choice_cores[a] {
                nu_core.insert(pair[c][a]);
            }
            nu_core.insert(a_copy[a]);
        }

        Ok(Layout {
            space,
            y: y.clone(),
            a_count,
            pair,
            a_copy,
            inf,
            choice_cores,
            l_values,
            h_core,
            y0,
            v_a,
            v_h,
            sup,
            nu_core,
        })
    }

    /// The evaluation map: first projection on pairs, l on the A-copies,
    /// y₀ at x_∞.
    fn evaluation_table(&self) -> Vec<usize> {
        let mut table = vec![0usize; self.space.len()];
        for y_pt in 0..self.y.len() {
            for a in 0..self.a_count {
                table[self.pair[y_pt][a]] = y_pt;
            }
        }
        for a in 0..self.a_count {
            table[self.a_copy[a]] = self.l_values[a];
        }
        table[self.inf] = self.y0;
        table
    }

    fn clause(
        transcript: &mut Vec<String>,
        label: &str,
        ok: bool,
        detail: String,
    ) -> Result<()> {
        transcript.push(format!("({label}) {detail}: {}", if ok { "ok" } else { "FAILED" }));
        if ok {
            Ok(())
        } else {
            Err(Error::Construction(format!(
                "clause ({label}) failed — {detail}; transcript: {}",
                transcript.join(" | ")
            )))
        }
    }
}

/// Build and verify the topological counterexample to a hoped-for converse
/// of the continuity bound: m_⊕(f) strictly exceeds the hom-limit of f at
/// the distinguished filter 𝓕₀.
pub fn build_thm1_converse(
    y: &FiniteCapSpace,
    witness: &RegularityWitness,
    tensor: Tensor,
) -> Result<ConstructionReport> {
    let layout = Layout::new("X_hom", y, witness, tensor)?;
    let mut space = layout.space.clone();

    // a-row: 0 on core(𝒮(a))×{a} ∪ {a}; x_∞-row: 0 on core 𝒩 ∪ {x_∞}.
    for a in 0..layout.a_count {
        for &c in &layout.choice_cores[a] {
            space.set_entry(layout.a_copy[a], layout.pair[c][a], Weight::zero());
        }
    }
    for &z in &layout.nu_core {
        space.set_entry(layout.inf, z, Weight::zero());
    }

    let mut transcript = vec![format!(
        "carrier: {} points = |Y|·|A| + |A| + 1 with |Y|={}, |A|={}",
        space.len(),
        y.len(),
        layout.a_count
    )];
    assert_eq!(space.len(), y.len() * layout.a_count + layout.a_count + 1);

    let f = SpaceMap::new("f", space.clone(), y.clone(), layout.evaluation_table())?;

    // 𝓕₀: functions fixed to the projection on pairs and to y₀ at x_∞,
    // sending each a into core(𝒮(a)); the finite-intersection claim is that
    // this set is nonempty.
    let mut h_tables: Vec<Vec<usize>> = vec![Vec::new()];
    for a in 0..layout.a_count {
        let mut extended = Vec::new();
        for partial in &h_tables {
            for &c in &layout.choice_cores[a] {
                let mut next = partial.clone();
                next.push(c);
                extended.push(next);
            }
        }
        h_tables = extended;
    }
    Layout::clause(
        &mut transcript,
        "fip",
        !h_tables.is_empty(),
        format!(
            "𝓕₀ core has {} function{}",
            h_tables.len(),
            if h_tables.len() == 1 { "" } else { "s" }
        ),
    )?;
    let mut elements: Vec<(String, Vec<usize>)> = Vec::with_capacity(h_tables.len() + 1);
    let mut core = BTreeSet::new();
    let mut f_index = None;
    for (i, choices) in h_tables.iter().enumerate() {
        let mut table = layout.evaluation_table();
        for a in 0..layout.a_count {
            table[layout.a_copy[a]] = choices[a];
        }
        if table == f.table() {
            f_index = Some(i);
        }
        core.insert(i);
        elements.push((format!("h{i}"), table));
    }
    let f_index = match f_index {
        Some(i) => i,
        None => {
            elements.push(("f".to_string(), f.table().to_vec()));
            elements.len() - 1
        }
    };
    let functions = FunctionSpace::from_elements(&space, y, elements)?;
    let filter = functions.filter_of(&core)?;

    // (i) X is a topological CAP space: {0,∞}-valued, centered and
    // meet-sound, diagonal for both tensors.
    let report = classify(&space);
    Layout::clause(
        &mut transcript,
        "i",
        space.is_zero_infinity()
            && space.validate().ok()
            && is_diagonal(&space, Tensor::Plus).is_none()
            && is_diagonal(&space, Tensor::Max).is_none()
            && report.topological,
        "X is a topological structure".to_string(),
    )?;

    // (ii) the strict gap.
    let m = contraction_default(&f, tensor);
    let c0 = hom_limit(&functions, &filter, f_index)?;
    Layout::clause(
        &mut transcript,
        "ii",
        m > c0,
        format!("m_⊕(f)={m} exceeds the hom-limit {c0} at the distinguished filter"),
    )?;

    // (iii) the proof's displayed bound on that hom-limit.
    let displayed = layout.v_h.join(layout.sup);
    Layout::clause(
        &mut transcript,
        "iii",
        c0 <= displayed,
        format!("hom-limit {c0} ≤ displayed bound {displayed}"),
    )?;

    Ok(ConstructionReport {
        kind: ConstructionKind::HomConverse,
        space,
        f,
        g: None,
        functions: Some(functions),
        filter,
        subset: None,
        alpha: None,
        lhs: m,
        rhs: c0,
        transcript,
    })
}

/// Build and verify the weighted counterexample: S = Y×A is uniformly
/// ⊕-strict, f is the projection contraction, h(S,f,α) is all of X, yet
/// the admissible extension g (l on A, y₀ at x_∞) is not a contraction.
pub fn build_extension_converse(
    y: &FiniteCapSpace,
    witness: &RegularityWitness,
    tensor: Tensor,
) -> Result<ConstructionReport> {
    let layout = Layout::new("X_ext", y, witness, tensor)?;
    let mut space = layout.space.clone();

    // a-row: v_a on core(𝒮(a))×{a}, 0 at a; x_∞-row: v_H on core 𝒩, 0 at
    // x_∞.
    for a in 0..layout.a_count {
        for &c in &layout.choice_cores[a] {
            space.set_entry(layout.a_copy[a], layout.pair[c][a], layout.v_a[a]);
        }
    }
    for &z in &layout.nu_core {
        space.set_entry(layout.inf, z, layout.v_h);
    }

    let mut transcript = vec![format!(
        "carrier: {} points; v_H={}, sup v_a={}",
        space.len(),
        layout.v_h,
        layout.sup
    )];

    let alpha = layout.v_h.join(layout.sup);
    Layout::clause(
        &mut transcript,
        "alpha",
        alpha.is_finite(),
        format!("α = v_H ∨ ⋁v_a = {alpha} is finite"),
    )?;

    let subset: BTreeSet<usize> = (0..layout.a_count)
        .flat_map(|a| (0..y.len()).map(move |y_pt| (y_pt, a)))
        .map(|(y_pt, a)| layout.pair[y_pt][a])
        .collect();
    let assignment: BTreeMap<usize, usize> = (0..layout.a_count)
        .flat_map(|a| (0..y.len()).map(move |y_pt| (y_pt, a)))
        .map(|(y_pt, a)| (layout.pair[y_pt][a], y_pt))
        .collect();
    let problem = ExtensionProblem::new(&space, y, subset.clone(), assignment, tensor, alpha)?;
    let f = problem.restriction_map();

    // (i) X is ⊕-diagonal (hence an approach structure for this tensor).
    Layout::clause(
        &mut transcript,
        "i",
        space.validate().ok() && is_diagonal(&space, tensor).is_none(),
        format!("X is a {tensor}-diagonal pre-approach structure"),
    )?;

    // (ii) S is uniformly ⊕-strict at every grid level.
    let mut strict_failure = None;
    for level in space.value_grid() {
        if let Some(w) = is_strict(&space, &subset, level, tensor, true)? {
            strict_failure = Some(w.render(&space));
            break;
        }
    }
    Layout::clause(
        &mut transcript,
        "ii",
        strict_failure.is_none(),
        format!(
            "S = Y×A is uniformly strict{}",
            strict_failure
                .map(|w| format!(" (failure: {w})"))
                .unwrap_or_default()
        ),
    )?;

    // (iii) the extension domain is all of X.
    let domain = problem.extension_domain()?;
    Layout::clause(
        &mut transcript,
        "iii",
        domain == (0..space.len()).collect::<BTreeSet<usize>>(),
        format!(
            "h(S,f,α) covers all {} points (got {})",
            space.len(),
            domain.len()
        ),
    )?;

    // (iv) g = (f on S, l on A, y₀ at x_∞) is admissible.
    let g_table = layout.evaluation_table();
    let mut admissible = true;
    for x in 0..space.len() {
        if !problem.candidate_targets(x)?.contains(&g_table[x]) {
            admissible = false;
            break;
        }
    }
    Layout::clause(
        &mut transcript,
        "iv",
        admissible,
        "g picks a candidate target at every point".to_string(),
    )?;
    let g = SpaceMap::new("g", space.clone(), y.clone(), g_table)?;

    // (v) g is not a contraction, exhibited on the A-copy of core 𝓗.
    let b: BTreeSet<usize> = layout.h_core.iter().map(|&a| layout.a_copy[a]).collect();
    let image: BTreeSet<usize> = layout.h_core.iter().map(|&a| layout.l_values[a]).collect();
    let lam_x = space.limit_of_set(&b, layout.inf);
    let lam_y = y.limit_of_set(&image, layout.y0);
    let rhs = tensor.combine(lam_x, alpha);
    Layout::clause(
        &mut transcript,
        "v",
        lam_y > rhs && !contraction_default(&g, tensor).is_zero(),
        format!("λ_Y(g[𝓗])(y₀)={lam_y} exceeds λ_X(𝓗)(x_∞) ⊕ α = {lam_x} ⊕ {alpha} = {rhs}"),
    )?;

    let filter = PrincipalFilter::new(space.carrier().clone(), b)?;
    Ok(ConstructionReport {
        kind: ConstructionKind::ExtensionConverse,
        space,
        f,
        g: Some(g),
        functions: None,
        filter,
        subset: Some(subset),
        alpha: Some(alpha),
        lhs: lam_y,
        rhs,
        transcript,
    })
}

/// End-to-end pipeline: search for the sharpest selection-regularity
/// violation on Y and, if one exists, run both builders on it.
pub fn find_and_refute(y: &FiniteCapSpace, tensor: Tensor) -> Result<RefutationOutcome> {
    let k = y.len().max(1);
    match check_selection_regularity(y, tensor, k)? {
        None => Ok(RefutationOutcome::Regular),
        Some(witness) => {
            let hom = build_thm1_converse(y, &witness, tensor)?;
            let extension = build_extension_converse(y, &witness, tensor)?;
            Ok(RefutationOutcome::Refuted {
                witness,
                hom: Box::new(hom),
                extension: Box::new(extension),
            })
        }
    }
}
