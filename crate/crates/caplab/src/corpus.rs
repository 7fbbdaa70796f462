//! Reproducible test corpora: hand-crafted reference spaces and seeded
//! random generators.
//!
//! Four random classes are provided, each revalidated against its defining
//! property at generation time:
//!
//! * `random_space` — arbitrary matrices over a configurable entry grid;
//! * `random_metric` — symmetric matrices closed under the min-plus
//!   triangle inequality (hence +-regular and +-diagonal);
//! * `random_ultrametric` — symmetric matrices closed under the min-max
//!   strong triangle inequality (hence ∨-regular and ∨-diagonal);
//! * `random_conv` — {0,∞}-valued matrices (convergence spaces).
//!
//! Randomness comes from a self-contained SplitMix64 stream so corpora are
//! reproducible from a 64-bit seed across platforms and releases.

use crate::quantale::Weight;
use crate::spaces::FiniteCapSpace;
use crate::Result;

/// SplitMix64 pseudo-random generator (Steele, Lea & Flood, OOPSLA 2014).
///
/// The algorithm is spelled out here rather than imported so that corpus
/// files and suite transcripts can be regenerated from the seed alone by
/// any implementation: the state advances by the 64-bit golden-ratio
/// constant and the output is the finalizer
/// `z ^= z>>30, z *= 0xBF58476D1CE4E5B9, z ^= z>>27, z *= 0x94D049BB133111EB, z ^= z>>31`.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> SplitMix64 {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform-ish draw from `0..bound` via the multiply-high reduction.
    /// The (negligible) modulo bias of alternatives is irrelevant here; what
    /// matters is that the mapping is fixed and documented.
    pub fn next_below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0, "next_below requires a positive bound");
        ((u128::from(self.next_u64()) * u128::from(bound)) >> 64) as u64
    }

    /// Pick one element of a non-empty slice.
    pub fn choose<'a, T>(&mut self, items: &'a [T]) -> &'a T {
        &items[self.next_below(items.len() as u64) as usize]
    }
}

/// Default entry grid for random matrices: {0, 1/2, 1, 2, 5, ∞}.
pub fn default_entry_grid() -> Vec<Weight> {
    vec![
        Weight::zero(),
        Weight::ratio(1, 2),
        Weight::int(1),
        Weight::int(2),
        Weight::int(5),
        Weight::INF,
    ]
}

fn point_names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("p{i}")).collect()
}

/// Arbitrary centered space: off-diagonal entries drawn uniformly from
/// `grid`, diagonal fixed at 0.
pub fn random_space(
    rng: &mut SplitMix64,
    name: &str,
    n: usize,
    grid: &[Weight],
) -> Result<FiniteCapSpace> {
    assert!(!grid.is_empty(), "entry grid must be non-empty");
    let mut space = FiniteCapSpace::discrete(name, point_names(n), true)?;
    for x in 0..n {
        for a in 0..n {
            if x != a {
                space.set_entry(x, a, *rng.choose(grid));
            }
        }
    }
    let report = space.validate();
    assert!(report.ok(), "generated space must validate: {report}");
    Ok(space)
}

/// Symmetric finite matrix closed under the min-plus triangle inequality.
///
/// Off-diagonal entries are drawn from the finite non-zero values of
/// `grid`, then the Floyd–Warshall min-plus closure is applied; symmetry is
/// preserved by the closure, so the result is a genuine finite metric.
pub fn random_metric(
    rng: &mut SplitMix64,
    name: &str,
    n: usize,
    grid: &[Weight],
) -> Result<FiniteCapSpace> {
    let finite: Vec<Weight> = grid
        .iter()
        .copied()
        .filter(|w| w.is_finite() && !w.is_zero())
        .collect();
    assert!(
        !finite.is_empty(),
        "metric generation needs finite non-zero grid values"
    );
    let mut space = FiniteCapSpace::discrete(name, point_names(n), true)?;
    for x in 0..n {
        for a in 0..x {
            let w = *rng.choose(&finite);
            space.set_entry(x, a, w);
            space.set_entry(a, x, w);
        }
    }
    min_tensor_closure(&mut space, false);
    assert_metric(&space, false);
    Ok(space)
}

/// Symmetric matrix closed under the strong (max) triangle inequality.
pub fn random_ultrametric(
    rng: &mut SplitMix64,
    name: &str,
    n: usize,
    grid: &[Weight],
) -> Result<FiniteCapSpace> {
    let finite: Vec<Weight> = grid
        .iter()
        .copied()
        .filter(|w| w.is_finite() && !w.is_zero())
        .collect();
    assert!(
        !finite.is_empty(),
        "ultrametric generation needs finite non-zero grid values"
    );
    let mut space = FiniteCapSpace::discrete(name, point_names(n), true)?;
    for x in 0..n {
        for a in 0..x {
            let w = *rng.choose(&finite);
            space.set_entry(x, a, w);
            space.set_entry(a, x, w);
        }
    }
    min_tensor_closure(&mut space, true);
    assert_metric(&space, true);
    Ok(space)
}

/// {0,∞}-valued space: each off-diagonal entry is 0 with probability 1/3.
pub fn random_conv(rng: &mut SplitMix64, name: &str, n: usize) -> Result<FiniteCapSpace> {
    let mut space = FiniteCapSpace::discrete(name, point_names(n), true)?;
    for x in 0..n {
        for a in 0..n {
            if x != a && rng.next_below(3) == 0 {
                space.set_entry(x, a, Weight::zero());
            }
        }
    }
    assert!(space.is_zero_infinity(), "conv generation must stay {{0,∞}}-valued");
    Ok(space)
}

/// Floyd–Warshall closure of the matrix under d(x,a) ← d(x,k) ⊕ d(k,a),
/// with ⊕ = + (`strong = false`) or ⊕ = ∨ (`strong = true`).
fn min_tensor_closure(space: &mut FiniteCapSpace, strong: bool) {
    let n = space.len();
    for k in 0..n {
        for x in 0..n {
            for a in 0..n {
                let through = if strong {
                    space.entry(x, k).join(space.entry(k, a))
                } else {
                    space.entry(x, k) + space.entry(k, a)
                };
                if through < space.entry(x, a) {
                    space.set_entry(x, a, through);
                }
            }
        }
    }
}

fn assert_metric(space: &FiniteCapSpace, strong: bool) {
    let n = space.len();
    for x in 0..n {
        assert!(space.entry(x, x).is_zero(), "metric diagonal must be zero");
        for a in 0..n {
            assert_eq!(
                space.entry(x, a),
                space.entry(a, x),
                "metric matrix must be symmetric"
            );
            assert!(space.entry(x, a).is_finite(), "metric entries must be finite");
            for k in 0..n {
                let bound = if strong {
                    space.entry(x, k).join(space.entry(k, a))
                } else {
                    space.entry(x, k) + space.entry(k, a)
                };
                assert!(
                    space.entry(x, a) <= bound,
                    "triangle inequality must hold after closure"
                );
            }
        }
    }
}

/// Three points a, b, y with d(b,a) = 1, d(y,a) = 1, d(y,b) = 5 and ∞ on
/// every other off-diagonal entry. The workhorse example of a space that is
/// not ⊕-regular for either tensor.
pub fn y3() -> FiniteCapSpace {
    let mut s = FiniteCapSpace::discrete("Y3", vec!["a", "b", "y"], true)
        .expect("fixture carrier is valid");
    s.set_entry_by_name("b", "a", Weight::int(1)).unwrap();
    s.set_entry_by_name("y", "a", Weight::int(1)).unwrap();
    s.set_entry_by_name("y", "b", Weight::int(5)).unwrap();
    s
}

/// Symmetric three-point metric: d(p,q) = d(q,r) = 1, d(p,r) = 2.
pub fn m3() -> FiniteCapSpace {
    let mut s = FiniteCapSpace::discrete("M3", vec!["p", "q", "r"], true)
        .expect("fixture carrier is valid");
    for (x, a, w) in [
        ("p", "q", 1),
        ("q", "p", 1),
        ("q", "r", 1),
        ("r", "q", 1),
        ("p", "r", 2),
        ("r", "p", 2),
    ] {
        s.set_entry_by_name(x, a, Weight::int(w)).unwrap();
    }
    s
}

/// Symmetric three-point ultrametric: d(p,q) = 1, d(p,r) = d(q,r) = 2.
pub fn u3() -> FiniteCapSpace {
    let mut s = FiniteCapSpace::discrete("U3", vec!["p", "q", "r"], true)
        .expect("fixture carrier is valid");
    for (x, a, w) in [
        ("p", "q", 1),
        ("q", "p", 1),
        ("p", "r", 2),
        ("r", "p", 2),
        ("q", "r", 2),
        ("r", "q", 2),
    ] {
        s.set_entry_by_name(x, a, Weight::int(w)).unwrap();
    }
    s
}

/// Three points s1, s2, t with d(t,s1) = 0 and ∞ on the other off-diagonal
/// entries. With S = {s1, s2} and f(s1) = p, f(s2) = q into `m3()`, the
/// point t acquires the unique candidate target p.
pub fn x4() -> FiniteCapSpace {
    let mut s = FiniteCapSpace::discrete("X4", vec!["s1", "s2", "t"], true)
        .expect("fixture carrier is valid");
    s.set_entry_by_name("t", "s1", Weight::zero()).unwrap();
    s
}

/// Four-point convergence space whose subset {q,r} is not 0-⊕-strict.
///
/// Zero entries besides the diagonal: d(p,q) = d(s,p) = d(s,r) = 0. Taking
/// S = {q,r}, the enlargement S^{(0)} is all of the space; for B = {p} the
/// only subsets C ⊆ S with B ⊆ C^{(0)} contain q, yet λ({C}↑)(s) = ∞ while
/// λ({B}↑)(s) = 0, so no admissible C exists at the point s.
pub fn conv4_with_nonstrict_subspace() -> FiniteCapSpace {
    let mut s = FiniteCapSpace::discrete("C4", vec!["p", "q", "r", "s"], true)
        .expect("fixture carrier is valid");
    s.set_entry_by_name("p", "q", Weight::zero()).unwrap();
    s.set_entry_by_name("s", "p", Weight::zero()).unwrap();
    s.set_entry_by_name("s", "r", Weight::zero()).unwrap();
    s
}

/// Generation class of a corpus entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorpusClass {
    RandomMatrix,
    RandomMetric,
    RandomUltrametric,
    RandomConv,
    Crafted,
}

impl CorpusClass {
    pub fn tag(self) -> &'static str {
        match self {
            CorpusClass::RandomMatrix => "random-matrix",
            CorpusClass::RandomMetric => "random-metric",
            CorpusClass::RandomUltrametric => "random-ultrametric",
            CorpusClass::RandomConv => "random-conv",
            CorpusClass::Crafted => "crafted",
        }
    }
}

/// A tagged space.
#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub space: FiniteCapSpace,
    pub class: CorpusClass,
}

/// A reproducible bundle of tagged spaces.
#[derive(Debug, Clone, Default)]
pub struct Corpus {
    pub entries: Vec<CorpusEntry>,
}

impl Corpus {
    /// The five crafted reference spaces.
    pub fn crafted() -> Corpus {
        let entries = [y3(), m3(), u3(), x4(), conv4_with_nonstrict_subspace()]
            .into_iter()
            .map(|space| CorpusEntry {
                space,
                class: CorpusClass::Crafted,
            })
            .collect();
        Corpus { entries }
    }

    /// Crafted spaces plus `per_class` random spaces of each class, with
    /// sizes cycling through 2..=max_points.
    pub fn standard(seed: u64, per_class: usize, max_points: usize) -> Result<Corpus> {
        let mut rng = SplitMix64::new(seed);
        let grid = default_entry_grid();
        let mut corpus = Corpus::crafted();
        let size = |i: usize| 2 + i % (max_points.max(2) - 1);
        for i in 0..per_class {
            let n = size(i);
            corpus.entries.push(CorpusEntry {
                space: random_space(&mut rng, &format!("R{i}"), n, &grid)?,
                class: CorpusClass::RandomMatrix,
            });
            corpus.entries.push(CorpusEntry {
                space: random_metric(&mut rng, &format!("M{i}"), n, &grid)?,
                class: CorpusClass::RandomMetric,
            });
            corpus.entries.push(CorpusEntry {
                space: random_ultrametric(&mut rng, &format!("U{i}"), n, &grid)?,
                class: CorpusClass::RandomUltrametric,
            });
            corpus.entries.push(CorpusEntry {
                space: random_conv(&mut rng, &format!("C{i}"), n)?,
                class: CorpusClass::RandomConv,
            });
        }
        Ok(corpus)
    }

    pub fn iter(&self) -> impl Iterator<Item = &CorpusEntry> {
        self.entries.iter()
    }
}
