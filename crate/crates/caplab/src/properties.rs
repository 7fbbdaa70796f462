//! Structural property decisions: ⊕-regularity (global, pointwise, and in
//! selection form), ⊕-diagonality, space classification, and α-⊕-strictness
//! of subspaces.
//!
//! Regularity demands λ(𝓕^{(ε)}) ≤ λ(𝓕) ⊕ ε for every filter 𝓕 and every
//! ε; diagonality demands λ(𝒮(𝓕)) ≤ λ(𝓕) ⊕ ⋁_{a∈X} λ(𝒮(a))(a) for every
//! selection 𝒮 of filters.  On a finite carrier both collapse to three-index
//! matrix inequalities, which the `is_regular` / `is_diagonal` fast paths
//! check directly.  Each fast path is paired with a brute-force oracle that
//! evaluates the defining quantifier verbatim (`enlargement_regularity_oracle`
//! over all sets and grid ε, `selection_diagonality_oracle` over all
//! selections with bounded cores); tests keep the two routes in agreement on
//! small instances but the code paths share nothing.
//!
//! `check_selection_regularity` decides the alternative characterization
//! λ(l[𝓕]) ≤ λ(𝒮(𝓕)) ⊕ ⋁_{a∈A} λ(𝒮(a))(l(a)) by exhaustive search over
//! bounded index sets, and produces replayable witnesses.

use std::collections::BTreeSet;
use std::fmt;

use crate::filters::{Carrier, CarrierMap, PrincipalFilter, Selection};
use crate::quantale::{Tensor, Weight};
use crate::scaled::{self, ScaledSpace, INF};
use crate::spaces::FiniteCapSpace;
use crate::{Error, Result};

/// A violated instance of the regularity inequality
/// d(y,b) ≤ d(y,a) ⊕ d(b,a).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriangleViolation {
    pub a: usize,
    pub b: usize,
    pub y: usize,
    pub lhs: Weight,
    pub rhs: Weight,
}

impl TriangleViolation {
    fn key(&self) -> (Weight, Weight, usize, usize, usize) {
        (self.lhs, self.rhs, self.a, self.b, self.y)
    }

    /// Human-readable rendering with point names.
    pub fn render(&self, space: &FiniteCapSpace) -> String {
        format!(
            "(a={}, b={}, y={}): d(y,b)={} > {}",
            space.point_name(self.a),
            space.point_name(self.b),
            space.point_name(self.y),
            self.lhs,
            self.rhs
        )
    }
}

/// A violated instance of the diagonality inequality
/// d(y,c) ≤ d(y,x) ⊕ d(x,c).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagonalViolation {
    pub x: usize,
    pub y: usize,
    pub c: usize,
    pub lhs: Weight,
    pub rhs: Weight,
}

impl DiagonalViolation {
    fn key(&self) -> (Weight, Weight, usize, usize, usize) {
        (self.lhs, self.rhs, self.x, self.y, self.c)
    }

    pub fn render(&self, space: &FiniteCapSpace) -> String {
        format!(
            "(x={}, y={}, c={}): d(y,c)={} > {}",
            space.point_name(self.x),
            space.point_name(self.y),
            space.point_name(self.c),
            self.lhs,
            self.rhs
        )
    }
}

/// Decide ⊕-regularity through the matrix inequality
/// ∀a,b,y: d(y,b) ≤ d(y,a) ⊕ d(b,a).
///
/// Returns `None` when the space is ⊕-regular.  When it is not, the
/// returned violation is the sharpest one: smallest left-hand side, then
/// smallest right-hand side, then lexicographically smallest (a,b,y).
/// Preferring finite left-hand sides keeps downstream refutation
/// constructions quantitative instead of saturating at ∞.
pub fn is_regular(space: &FiniteCapSpace, tensor: Tensor) -> Option<TriangleViolation> {
    let n = space.len();
    let mut best: Option<TriangleViolation> = None;
    for a in 0..n {
        for b in 0..n {
            for y in 0..n {
                let lhs = space.entry(y, b);
                let rhs = tensor.combine(space.entry(y, a), space.entry(b, a));
                if lhs > rhs {
                    let candidate = TriangleViolation { a, b, y, lhs, rhs };
                    if best.as_ref().map_or(true, |v| candidate.key() < v.key()) {
                        best = Some(candidate);
                    }
                }
            }
        }
    }
    best
}

/// The set of ⊕-regularity points: y is one exactly when the localized
/// inequality ∀a,b: d(y,b) ≤ d(y,a) ⊕ d(b,a) holds at y.
pub fn regularity_points(space: &FiniteCapSpace, tensor: Tensor) -> BTreeSet<usize> {
    let n = space.len();
    (0..n)
        .filter(|&y| {
            (0..n).all(|a| {
                (0..n).all(|b| {
                    space.entry(y, b) <= tensor.combine(space.entry(y, a), space.entry(b, a))
                })
            })
        })
        .collect()
}

/// Decide ⊕-diagonality through the matrix inequality
/// ∀x,y,c: d(y,c) ≤ d(y,x) ⊕ d(x,c).
///
/// Note the index roles relative to [`is_regular`]: here the middle point x
/// mediates between y and c.  Violation choice follows the same
/// sharpest-first order as `is_regular`.
pub fn is_diagonal(space: &FiniteCapSpace, tensor: Tensor) -> Option<DiagonalViolation> {
    let n = space.len();
    let mut best: Option<DiagonalViolation> = None;
    for x in 0..n {
        for y in 0..n {
            for c in 0..n {
                let lhs = space.entry(y, c);
                let rhs = tensor.combine(space.entry(y, x), space.entry(x, c));
                if lhs > rhs {
                    let candidate = DiagonalViolation { x, y, c, lhs, rhs };
                    if best.as_ref().map_or(true, |v| candidate.key() < v.key()) {
                        best = Some(candidate);
                    }
                }
            }
        }
    }
    best
}

/// A replayable witness against the selection characterization of
/// ⊕-regularity: an index set A (its own carrier), a map l: A → Y, a
/// selection 𝒮: A → 𝔽Y, a principal filter 𝓗 on A, and a point y₀ with
/// λ(l[𝓗])(y₀) > λ(𝒮(𝓗))(y₀) ⊕ ⋁_{a∈A} λ(𝒮(a))(l(a)).
#[derive(Debug, Clone)]
pub struct RegularityWitness {
    pub l: CarrierMap,
    pub selection: Selection,
    pub h: PrincipalFilter,
    pub y0: usize,
    pub lhs: Weight,
    pub rhs: Weight,
}

impl RegularityWitness {
    /// Recompute both sides of the violated inequality from first
    /// principles (image filter, Kowalsky sum, envelope limits) and check
    /// that the witness is genuine and matches the stored values.
    pub fn verify(&self, space: &FiniteCapSpace, tensor: Tensor) -> Result<(Weight, Weight)> {
        let image = self.l.image(&self.h)?;
        let lhs = space.limit(&image, self.y0)?;
        let compressed = self.selection.kowalsky(&self.h)?;
        let base = space.limit(&compressed, self.y0)?;
        let mut sup = Weight::zero();
        for a in 0..self.l.source().len() {
            sup = sup.join(space.limit(self.selection.choice(a), self.l.apply(a))?);
        }
        let rhs = tensor.combine(base, sup);
        if lhs != self.lhs || rhs != self.rhs {
            return Err(Error::Construction(format!(
                "witness sides recompute to {lhs} and {rhs}, stored {} and {}",
                self.lhs, self.rhs
            )));
        }
        if lhs <= rhs {
            return Err(Error::Construction(
                "stored witness does not violate the selection inequality".into(),
            ));
        }
        Ok((lhs, rhs))
    }

    /// The index carrier A.
    pub fn index_carrier(&self) -> &Carrier {
        self.l.source()
    }
}

impl fmt::Display for RegularityWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let index = self.l.source();
        let target = self.l.target();
        write!(f, "A={}", index.render_subset(&index.full_set()))?;
        write!(f, "; l: {}", self.l)?;
        for a in 0..index.len() {
            write!(f, "; S({})={}", index.name(a), self.selection.choice(a))?;
        }
        write!(
            f,
            "; H={}; y0={}; lhs={} > rhs={}",
            self.h,
            target.name(self.y0),
            self.lhs,
            self.rhs
        )
    }
}

/// One admissible (l-point, selection-core) combination in the bounded
/// selection search, with its scaled observables.
struct Role {
    l_point: usize,
    mask: u32,
    /// λ(S)(l) — the role's contribution to the ⋁-term.
    v: u64,
    /// λ(S)(y) per point y — contribution to λ(𝒮(𝓗)).
    u: Vec<u64>,
    /// d(y, l) per point y — contribution to λ(l[𝓗]).
    w: Vec<u64>,
}

/// Exhaustively search the selection characterization for a violation with
/// |A| ≤ k.
///
/// The search space is quotiented only by symmetries that leave the checked
/// inequality literally unchanged: duplicate index elements carrying the
/// same (l, 𝒮) pair collapse (every side is a maximum), filters 𝓗 with
/// core(𝓗) ⊊ A collapse to the full core on the subset core(𝓗) (dropping
/// unused index elements can only shrink the right-hand side), roles whose
/// ⋁-contribution is ∞ can never appear in a violation, and roles with
/// identical observables (v, u, w) are interchangeable.  Within the reduced
/// space the search is exhaustive: sets of roles in ascending size, then
/// lexicographic order, so reported witnesses have minimal |A|.  A found
/// violation is returned after independent re-verification with exact
/// rational arithmetic; `None` means no violation exists with |A| ≤ k.
pub fn check_selection_regularity(
    space: &FiniteCapSpace,
    tensor: Tensor,
    k: usize,
) -> Result<Option<RegularityWitness>> {
    if k == 0 {
        return Err(Error::Precondition(
            "selection search bound k must be at least 1".into(),
        ));
    }
    let n = space.len();
    if n > 16 {
        return Err(Error::EnumerationCap {
            size: 1u128 << n,
            cap: 1 << 16,
        });
    }
    let grid = ScaledSpace::new(space)?;

    let mut roles: Vec<Role> = Vec::new();
    let mut profiles: BTreeSet<(u64, Vec<u64>, Vec<u64>)> = BTreeSet::new();
    for l_point in 0..n {
        let w: Vec<u64> = (0..n).map(|y| grid.at(y, l_point)).collect();
        for mask in 1u32..(1 << n) {
            let v = envelope_scaled(&grid, mask, l_point);
            if v == INF {
                continue;
            }
            let u: Vec<u64> = (0..n).map(|y| envelope_scaled(&grid, mask, y)).collect();
            if profiles.insert((v, u.clone(), w.clone())) {
                roles.push(Role {
                    l_point,
                    mask,
                    v,
                    u,
                    w: w.clone(),
                });
            }
        }
    }

    // suffix_w_max[i][y] = max of roles[i..].w[y]; used to prune prefixes
    // whose supersets can no longer reach a violating left-hand side.
    let mut suffix_w_max = vec![vec![0u64; n]; roles.len() + 1];
    for i in (0..roles.len()).rev() {
        for y in 0..n {
            suffix_w_max[i][y] = roles[i].w[y].max(suffix_w_max[i + 1][y]);
        }
    }

    let mut chosen: Vec<usize> = Vec::new();
    for size in 1..=k.min(roles.len()) {
        if let Some((set, y0)) = search_role_sets(
            &roles,
            &suffix_w_max,
            tensor,
            n,
            size,
            0,
            &mut chosen,
            &vec![0u64; n],
            0,
            &vec![0u64; n],
        ) {
            let witness = build_witness(space, tensor, &roles, &set, y0)?;
            witness.verify(space, tensor)?;
            return Ok(Some(witness));
        }
    }
    Ok(None)
}

fn envelope_scaled(grid: &ScaledSpace, mask: u32, y: usize) -> u64 {
    let mut best = 0u64;
    for a in 0..grid.n {
        if mask & (1 << a) != 0 {
            best = best.max(grid.at(y, a));
        }
    }
    best
}

/// Depth-first enumeration of role sets of exactly `remaining` further
/// elements starting at index `start`, in lexicographic order.  Returns the
/// first violating (set, y₀), choosing within a violating set the y₀ with
/// the sharpest violation (smallest lhs, then rhs, then index).
#[allow(clippy::too_many_arguments)]
fn search_role_sets(
    roles: &[Role],
    suffix_w_max: &[Vec<u64>],
    tensor: Tensor,
    n: usize,
    remaining: usize,
    start: usize,
    chosen: &mut Vec<usize>,
    acc_u: &[u64],
    acc_v: u64,
    acc_w: &[u64],
) -> Option<(Vec<usize>, usize)> {
    if remaining == 0 {
        let mut best: Option<(u64, u64, usize)> = None;
        for y0 in 0..n {
            let rhs = scaled::combine(tensor, acc_u[y0], acc_v);
            if acc_w[y0] > rhs {
                let key = (acc_w[y0], rhs, y0);
                if best.map_or(true, |b| key < b) {
                    best = Some(key);
                }
            }
        }
        return best.map(|(_, _, y0)| (chosen.clone(), y0));
    }
    for i in start..=roles.len().saturating_sub(remaining) {
        let role = &roles[i];
        let next_u: Vec<u64> = (0..n).map(|y| acc_u[y].max(role.u[y])).collect();
        let next_v = acc_v.max(role.v);
        let next_w: Vec<u64> = (0..n).map(|y| acc_w[y].max(role.w[y])).collect();
        // Supersets only raise the right-hand side; if even the largest
        // reachable left-hand side cannot exceed it anywhere, skip.
        let reachable = (0..n).any(|y| {
            let lhs_cap = next_w[y].max(suffix_w_max[i + 1][y]);
            lhs_cap > scaled::combine(tensor, next_u[y], next_v)
        });
        if !reachable {
            continue;
        }
        chosen.push(i);
        if let Some(hit) = search_role_sets(
            roles,
            suffix_w_max,
            tensor,
            n,
            remaining - 1,
            i + 1,
            chosen,
            &next_u,
            next_v,
            &next_w,
        ) {
            return Some(hit);
        }
        chosen.pop();
    }
    None
}

fn build_witness(
    space: &FiniteCapSpace,
    tensor: Tensor,
    roles: &[Role],
    set: &[usize],
    y0: usize,
) -> Result<RegularityWitness> {
    let l_points: Vec<usize> = set.iter().map(|&i| roles[i].l_point).collect();
    let mut names: Vec<String> = l_points
        .iter()
        .map(|&p| space.point_name(p).to_string())
        .collect();
    let distinct: BTreeSet<&String> = names.iter().collect();
    if distinct.len() != names.len() {
        names = (0..set.len()).map(|i| format!("a{i}")).collect();
    }
    let index = Carrier::new(names)?;
    let l = CarrierMap::new(index.clone(), space.carrier().clone(), l_points)?;
    let mut choices = Vec::with_capacity(set.len());
    for &i in set {
        let core: BTreeSet<usize> = (0..space.len())
            .filter(|&a| roles[i].mask & (1 << a) != 0)
            .collect();
        choices.push(PrincipalFilter::new(space.carrier().clone(), core)?);
    }
    let selection = Selection::new(index.clone(), space.carrier().clone(), choices)?;
    let h = PrincipalFilter::new(index.clone(), index.full_set())?;

    let image = l.image(&h)?;
    let lhs = space.limit(&image, y0)?;
    let compressed = selection.kowalsky(&h)?;
    let mut sup = Weight::zero();
    for a in 0..index.len() {
        sup = sup.join(space.limit(selection.choice(a), l.apply(a))?);
    }
    let rhs = tensor.combine(space.limit(&compressed, y0)?, sup);
    Ok(RegularityWitness {
        l,
        selection,
        h,
        y0,
        lhs,
        rhs,
    })
}

/// Turn a violating triple from [`is_regular`] into a selection witness:
/// A = {b}, l the inclusion, 𝒮(b) = {a}↑, 𝓗 = {b}↑, y₀ = y.
///
/// Fails with a precondition error when the triple does not actually
/// violate the fast path, and re-verifies the built witness before
/// returning it.
pub fn extract_selection_witness(
    space: &FiniteCapSpace,
    tensor: Tensor,
    triple: (usize, usize, usize),
) -> Result<RegularityWitness> {
    let (a, b, y) = triple;
    let n = space.len();
    for index in [a, b, y] {
        if index >= n {
            return Err(Error::PointOutOfRange { index, len: n });
        }
    }
    let lhs = space.entry(y, b);
    let rhs = tensor.combine(space.entry(y, a), space.entry(b, a));
    if lhs <= rhs {
        return Err(Error::Precondition(format!(
            "triple (a={}, b={}, y={}) does not violate the regularity inequality: {} ≤ {}",
            space.point_name(a),
            space.point_name(b),
            space.point_name(y),
            lhs,
            rhs
        )));
    }
    let index = Carrier::new(vec![space.point_name(b).to_string()])?;
    let l = CarrierMap::new(index.clone(), space.carrier().clone(), vec![b])?;
    let choice = PrincipalFilter::new(space.carrier().clone(), BTreeSet::from([a]))?;
    let selection = Selection::new(index.clone(), space.carrier().clone(), vec![choice])?;
    let h = PrincipalFilter::new(index, BTreeSet::from([0]))?;
    let witness = RegularityWitness {
        l,
        selection,
        h,
        y0: y,
        lhs,
        rhs,
    };
    witness.verify(space, tensor)?;
    Ok(witness)
}

/// A violated instance of λ(A^{(ε)})(y) ≤ λ(A)(y) ⊕ ε.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnlargementViolation {
    pub core: BTreeSet<usize>,
    pub eps: Weight,
    pub y: usize,
    pub lhs: Weight,
    pub rhs: Weight,
}

impl EnlargementViolation {
    pub fn render(&self, space: &FiniteCapSpace) -> String {
        format!(
            "A={}, ε={}, y={}: λ(A^(ε))(y)={} > {}",
            space.carrier().render_subset(&self.core),
            self.eps,
            space.point_name(self.y),
            self.lhs,
            self.rhs
        )
    }
}

/// Definition-level regularity oracle: test λ(𝓕^{(ε)}) ≤ λ(𝓕) ⊕ ε verbatim
/// over every principal filter (every nonempty core A), every ε in the value
/// grid, and every point.
///
/// Between consecutive grid values the enlargement A^{(ε)} is constant and
/// the right-hand side is smallest at the lower endpoint, so checking grid
/// values decides the full [0,∞] quantifier.  The oracle shares no code
/// with the [`is_regular`] fast path: it works on unscaled weights through
/// the set-level `enlarge` and envelope operations.
pub fn enlargement_regularity_oracle(
    space: &FiniteCapSpace,
    tensor: Tensor,
) -> Result<Option<EnlargementViolation>> {
    let n = space.len();
    if n > 16 {
        return Err(Error::EnumerationCap {
            size: 1u128 << n,
            cap: 1 << 16,
        });
    }
    let grid = space.value_grid();
    for mask in 1u32..(1 << n) {
        let core: BTreeSet<usize> = (0..n).filter(|&a| mask & (1 << a) != 0).collect();
        for &eps in &grid {
            let enlarged = space.enlarge(&core, eps);
            for y in 0..n {
                let lhs = space.limit_of_set(&enlarged, y);
                let rhs = tensor.combine(space.limit_of_set(&core, y), eps);
                if lhs > rhs {
                    return Ok(Some(EnlargementViolation {
                        core,
                        eps,
                        y,
                        lhs,
                        rhs,
                    }));
                }
            }
        }
    }
    Ok(None)
}

/// A violated instance of λ(𝒮(𝓕))(y) ≤ λ(𝓕)(y) ⊕ ⋁_{a∈X} λ(𝒮(a))(a).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelectionDiagonalViolation {
    /// Core of 𝒮(a) for each point a.
    pub selection: Vec<BTreeSet<usize>>,
    pub filter_core: BTreeSet<usize>,
    pub y: usize,
    pub lhs: Weight,
    pub rhs: Weight,
}

impl SelectionDiagonalViolation {
    pub fn render(&self, space: &FiniteCapSpace) -> String {
        let choices: Vec<String> = self
            .selection
            .iter()
            .enumerate()
            .map(|(a, core)| {
                format!(
                    "S({})={}↑",
                    space.point_name(a),
                    space.carrier().render_subset(core)
                )
            })
            .collect();
        format!(
            "{}; F={}↑, y={}: {} > {}",
            choices.join(", "),
            space.carrier().render_subset(&self.filter_core),
            space.point_name(self.y),
            self.lhs,
            self.rhs
        )
    }
}

/// Definition-level diagonality oracle: test
/// λ(𝒮(𝓕)) ≤ λ(𝓕) ⊕ ⋁_{a∈X} λ(𝒮(a))(a) verbatim over every selection with
/// core sizes ≤ `max_core`, every principal filter, and every point.
///
/// Any fast-path violation (x,y,c) is reproduced by the singleton selection
/// 𝒮(x) = {c}↑, 𝒮(z) = {z}↑ elsewhere, with 𝓕 = {x}↑, so `max_core = 1`
/// already makes the oracle complete with respect to [`is_diagonal`] on
/// centered spaces; larger bounds widen the selection pool it actually
/// exercises.
pub fn selection_diagonality_oracle(
    space: &FiniteCapSpace,
    tensor: Tensor,
    max_core: usize,
) -> Result<Option<SelectionDiagonalViolation>> {
    let n = space.len();
    if n > 16 {
        return Err(Error::EnumerationCap {
            size: 1u128 << n,
            cap: 1 << 16,
        });
    }
    let mut cores: Vec<BTreeSet<usize>> = Vec::new();
    for mask in 1u32..(1 << n) {
        if (mask.count_ones() as usize) <= max_core.max(1) {
            cores.push((0..n).filter(|&a| mask & (1 << a) != 0).collect());
        }
    }
    let total = (cores.len() as u128).pow(n as u32);
    if total > 5_000_000 {
        return Err(Error::EnumerationCap {
            size: total,
            cap: 5_000_000,
        });
    }

    // Odometer over one core choice per point, last digit fastest.
    let mut digits = vec![0usize; n];
    loop {
        let sup = (0..n)
            .map(|a| space.limit_of_set(&cores[digits[a]], a))
            .fold(Weight::zero(), Weight::join);
        if sup.is_finite() {
            for filter_mask in 1u32..(1 << n) {
                let filter_core: BTreeSet<usize> =
                    (0..n).filter(|&a| filter_mask & (1 << a) != 0).collect();
                let mut compressed: BTreeSet<usize> = BTreeSet::new();
                for &a in &filter_core {
                    compressed.extend(cores[digits[a]].iter().copied());
                }
                for y in 0..n {
                    let lhs = space.limit_of_set(&compressed, y);
                    let rhs = tensor.combine(space.limit_of_set(&filter_core, y), sup);
                    if lhs > rhs {
                        return Ok(Some(SelectionDiagonalViolation {
                            selection: digits.iter().map(|&i| cores[i].clone()).collect(),
                            filter_core,
                            y,
                            lhs,
                            rhs,
                        }));
                    }
                }
            }
        }
        // Advance the odometer.
        let mut pos = n;
        loop {
            if pos == 0 {
                return Ok(None);
            }
            pos -= 1;
            digits[pos] += 1;
            if digits[pos] < cores.len() {
                break;
            }
            digits[pos] = 0;
        }
    }
}

/// Structural classification flags of a space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassificationReport {
    pub space: String,
    /// Matrix-backed spaces satisfy the pre-approach meet law by
    /// construction: λ of any filter intersection is the envelope join.
    pub pre_approach: bool,
    /// +-diagonal pre-approach space.
    pub approach: bool,
    /// ∨-diagonal pre-approach space.
    pub non_archimedean: bool,
    /// +-regular.
    pub regular: bool,
    /// ∨-regular.
    pub strongly_regular: bool,
    /// {0,∞}-valued, i.e. the image of a convergence space.
    pub convergence_embedded: bool,
    /// Convergence-embedded, diagonal, pre-approach.
    pub topological: bool,
}

impl fmt::Display for ClassificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut held: Vec<&str> = Vec::new();
        if self.pre_approach {
            held.push("pre-approach");
        }
        if self.approach {
            held.push("approach");
        }
        if self.non_archimedean {
            held.push("non-archimedean");
        }
        if self.regular {
            held.push("regular");
        }
        if self.strongly_regular {
            held.push("strongly-regular");
        }
        if self.convergence_embedded {
            held.push("convergence-embedded");
        }
        if self.topological {
            held.push("topological");
        }
        write!(f, "{}: {}", self.space, held.join(", "))
    }
}

/// Classify a space: diagonality for both tensors, regularity for both
/// tensors, convergence embedding, and the derived approach/topological
/// flags.
pub fn classify(space: &FiniteCapSpace) -> ClassificationReport {
    let approach = is_diagonal(space, Tensor::Plus).is_none();
    let non_archimedean = is_diagonal(space, Tensor::Max).is_none();
    let convergence_embedded = space.is_zero_infinity();
    ClassificationReport {
        space: space.name().to_string(),
        pre_approach: true,
        approach,
        non_archimedean,
        regular: is_regular(space, Tensor::Plus).is_none(),
        strongly_regular: is_regular(space, Tensor::Max).is_none(),
        convergence_embedded,
        topological: convergence_embedded && approach,
    }
}

/// Evidence that a subset fails to be α-⊕-strict: a set B (and, in
/// pointwise mode, a point x) for which no admissible C exists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrictnessWitness {
    pub alpha: Weight,
    pub b: BTreeSet<usize>,
    /// `Some` in pointwise mode; `None` when a single B defeats every
    /// uniform choice of C.
    pub x: Option<usize>,
}

impl StrictnessWitness {
    pub fn render(&self, space: &FiniteCapSpace) -> String {
        match self.x {
            Some(x) => format!(
                "α={}: B={} has no admissible C at x={}",
                self.alpha,
                space.carrier().render_subset(&self.b),
                space.point_name(x)
            ),
            None => format!(
                "α={}: B={} has no uniformly admissible C",
                self.alpha,
                space.carrier().render_subset(&self.b)
            ),
        }
    }
}

/// Decide whether S is an α-⊕-strict subspace of the space.
///
/// Pointwise mode: for every x ∈ S^{(α)} and nonempty B ⊆ S^{(α)} there is
/// a nonempty C ⊆ S with B ⊆ C^{(α)} and λ({C}↑)(x) ≤ λ({B}↑)(x) ⊕ α.
/// Uniform mode: one C per B must satisfy the λ-inequality at every
/// x ∈ S^{(α)} simultaneously.  All λ-evaluations happen in the ambient
/// space.  Returns the first failing B (ascending in the subset order
/// induced by point indices), with the first failing x in pointwise mode.
pub fn is_strict(
    space: &FiniteCapSpace,
    s: &BTreeSet<usize>,
    alpha: Weight,
    tensor: Tensor,
    uniform: bool,
) -> Result<Option<StrictnessWitness>> {
    let n = space.len();
    if s.is_empty() {
        return Err(Error::Precondition(
            "strictness needs a nonempty subset S".into(),
        ));
    }
    if let Some(&index) = s.iter().find(|&&p| p >= n) {
        return Err(Error::PointOutOfRange { index, len: n });
    }
    if n > 16 {
        return Err(Error::EnumerationCap {
            size: 1u128 << n,
            cap: 1 << 16,
        });
    }
    let s_alpha: Vec<usize> = space.enlarge(s, alpha).into_iter().collect();
    if s_alpha.is_empty() {
        return Ok(None);
    }
    let s_vec: Vec<usize> = s.iter().copied().collect();

    // Pre-compute each candidate C ⊆ S: its α-enlargement (as a point mask)
    // and its envelope at every x ∈ S^{(α)}.
    let c_count = (1usize << s_vec.len()) - 1;
    let mut c_enlarged: Vec<u32> = Vec::with_capacity(c_count);
    let mut c_limits: Vec<Vec<Weight>> = Vec::with_capacity(c_count);
    for c_mask in 1usize..=c_count {
        let core: BTreeSet<usize> = s_vec
            .iter()
            .enumerate()
            .filter(|(i, _)| c_mask & (1 << i) != 0)
            .map(|(_, &p)| p)
            .collect();
        let enlarged = space.enlarge(&core, alpha);
        let mut mask = 0u32;
        for p in enlarged {
            mask |= 1 << p;
        }
        c_enlarged.push(mask);
        c_limits.push(
            s_alpha
                .iter()
                .map(|&x| space.limit_of_set(&core, x))
                .collect(),
        );
    }

    for b_mask in 1usize..(1 << s_alpha.len()) {
        let b_points: BTreeSet<usize> = s_alpha
            .iter()
            .enumerate()
            .filter(|(i, _)| b_mask & (1 << i) != 0)
            .map(|(_, &p)| p)
            .collect();
        let mut b_point_mask = 0u32;
        for &p in &b_points {
            b_point_mask |= 1 << p;
        }
        let bounds: Vec<Weight> = s_alpha
            .iter()
            .map(|&x| tensor.combine(space.limit_of_set(&b_points, x), alpha))
            .collect();
        if uniform {
            let found = (0..c_count).any(|c| {
                c_enlarged[c] & b_point_mask == b_point_mask
                    && (0..s_alpha.len()).all(|xi| c_limits[c][xi] <= bounds[xi])
            });
            if !found {
                return Ok(Some(StrictnessWitness {
                    alpha,
                    b: b_points,
                    x: None,
                }));
            }
        } else {
            for (xi, &x) in s_alpha.iter().enumerate() {
                let found = (0..c_count).any(|c| {
                    c_enlarged[c] & b_point_mask == b_point_mask && c_limits[c][xi] <= bounds[xi]
                });
                if !found {
                    return Ok(Some(StrictnessWitness {
                        alpha,
                        b: b_points,
                        x: Some(x),
                    }));
                }
            }
        }
    }
    Ok(None)
}

/// The ⊕-strict aggregate: check α-⊕-strictness for every α in the value
/// grid (α = ∞ holds trivially but is still exercised) and return the first
/// failure.
pub fn is_strict_on_grid(
    space: &FiniteCapSpace,
    s: &BTreeSet<usize>,
    tensor: Tensor,
    uniform: bool,
) -> Result<Option<StrictnessWitness>> {
    for alpha in space.value_grid() {
        if let Some(witness) = is_strict(space, s, alpha, tensor, uniform)? {
            return Ok(Some(witness));
        }
    }
    Ok(None)
}
