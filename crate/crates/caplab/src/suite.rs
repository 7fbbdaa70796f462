//! Seeded, deterministic verification suites.
//!
//! Each suite drives one family of invariants — characterization agreement,
//! fast path vs. oracle, the continuity bound and its counterexample
//! pipeline, the evaluation inequality, strictness, the extension bound and
//! its counterexample pipeline, the zero/infinity fragment, and order
//! facts — over exhaustive sweeps and a seeded corpus.  A fixed
//! [`SuiteConfig`] always produces byte-identical transcripts; any failure
//! prints a minimized witness plus the exact command that reproduces it.

use std::collections::BTreeSet;
use std::fmt;
use std::fmt::Write as _;

use crate::corpus::{
    default_entry_grid, random_metric, random_space, random_ultrametric, Corpus, SplitMix64,
};
use crate::extension::ExtensionProblem;
use crate::homspace::{
    contraction_default, hom_limit, hom_min, hom_min_in, verify_lemma_reg,
    verify_thm_continuouslimits, FunctionSpace,
};
use crate::properties::{
    check_selection_regularity, enlargement_regularity_oracle, extract_selection_witness,
    is_diagonal, is_regular, is_strict, selection_diagonality_oracle,
};
use crate::spaces::{FiniteCapSpace, SpaceMap};
use crate::{constructions, Result, Tensor, Weight};

/// Maximum failure lines kept per section; the rest are counted.
const MAX_FAILURES_SHOWN: usize = 8;
/// Resampling budget factor for the extension suite.
const EXTENSION_ATTEMPT_FACTOR: usize = 60;
/// Sampled filter rounds per instance in the hom-order suite.
const HOM_ORDER_ROUNDS: usize = 3;
/// Map-enumeration bound per space pair in the hom-order suite.
const HOM_ORDER_MAP_CAP: u128 = 256;

/// The named verification suites.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SuiteName {
    /// The two regularity characterizations agree (exhaustive + seeded).
    Equivalence,
    /// Regularity and diagonality fast paths match their oracles.
    FastPaths,
    /// Contraction defaults obey the hom-limit bound m ≤ c ⊕ c.
    Thm1,
    /// The bound is sharp: every non-regular target refutes it.
    Thm1Converse,
    /// Images of evaluated filters land in enlargements.
    Evaluation,
    /// Diagonality forces uniform strictness of every subspace.
    DiagonalStrict,
    /// Strict subspaces extend with m ≤ α ⊕ α.
    Extension,
    /// The extension bound is sharp on every non-regular target.
    ExtensionConverse,
    /// The zero/infinity fragment: regularity ⟺ limits of continuous maps
    /// are continuous.
    ConvFragment,
    /// m_+ ≤ m_∨ and the hom-structure's meet/antitone laws.
    HomOrder,
    /// Every suite above, in order.
    All,
}

impl SuiteName {
    /// All single suites, in `all` execution order.
    pub const EACH: [SuiteName; 10] = [
        SuiteName::Equivalence,
        SuiteName::FastPaths,
        SuiteName::Thm1,
        SuiteName::Thm1Converse,
        SuiteName::Evaluation,
        SuiteName::DiagonalStrict,
        SuiteName::Extension,
        SuiteName::ExtensionConverse,
        SuiteName::ConvFragment,
        SuiteName::HomOrder,
    ];

    pub fn token(self) -> &'static str {
        match self {
            SuiteName::Equivalence => "equivalence",
            SuiteName::FastPaths => "fast-paths",
            SuiteName::Thm1 => "thm1",
            SuiteName::Thm1Converse => "thm1-converse",
            SuiteName::Evaluation => "evaluation",
            SuiteName::DiagonalStrict => "diagonal-strict",
            SuiteName::Extension => "extension",
            SuiteName::ExtensionConverse => "extension-converse",
            SuiteName::ConvFragment => "conv-fragment",
            SuiteName::HomOrder => "hom-order",
            SuiteName::All => "all",
        }
    }

    pub fn parse(token: &str) -> Option<SuiteName> {
        SuiteName::EACH
            .into_iter()
            .chain([SuiteName::All])
            .find(|s| s.token() == token)
    }

    /// Default trial count: seeded trials for trial suites, spaces per
    /// random class for corpus suites.
    pub fn default_trials(self) -> usize {
        match self {
            SuiteName::Equivalence => 500,
            SuiteName::Thm1 => 200,
            SuiteName::Evaluation => 500,
            SuiteName::Extension => 100,
            SuiteName::FastPaths
            | SuiteName::Thm1Converse
            | SuiteName::DiagonalStrict
            | SuiteName::ExtensionConverse
            | SuiteName::ConvFragment
            | SuiteName::HomOrder => 4,
            SuiteName::All => 0,
        }
    }
}

impl fmt::Display for SuiteName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

/// Which tensors a suite exercises.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TensorChoice {
    #[default]
    Both,
    One(Tensor),
}

impl TensorChoice {
    pub fn tensors(self) -> Vec<Tensor> {
        match self {
            TensorChoice::Both => vec![Tensor::Plus, Tensor::Max],
            TensorChoice::One(t) => vec![t],
        }
    }

    pub fn token(self) -> &'static str {
        match self {
            TensorChoice::Both => "both",
            TensorChoice::One(Tensor::Plus) => "plus",
            TensorChoice::One(Tensor::Max) => "max",
        }
    }
}

/// Transcript flavor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Text,
    /// Line-oriented `key=value` records.
    Kv,
}

/// Everything a suite run depends on.  Identical configs produce
/// byte-identical transcripts.
#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub suite: SuiteName,
    /// 0 means the suite's default.
    pub trials: usize,
    pub seed: u64,
    /// Largest random-space size the corpus generators may draw.
    pub max_points: usize,
    /// Entry grid for random matrices.
    pub entry_grid: Vec<Weight>,
    /// Point count for the exhaustive sweep of the equivalence suite.
    pub exhaustive: usize,
    pub tensors: TensorChoice,
    pub format: OutputFormat,
}

impl SuiteConfig {
    pub fn new(suite: SuiteName) -> SuiteConfig {
        SuiteConfig {
            suite,
            trials: 0,
            seed: 0,
            max_points: 4,
            entry_grid: default_entry_grid(),
            exhaustive: 3,
            tensors: TensorChoice::default(),
            format: OutputFormat::default(),
        }
    }

    fn effective_trials(&self, suite: SuiteName) -> usize {
        if self.trials == 0 {
            suite.default_trials()
        } else {
            self.trials
        }
    }

    /// The exact command line that reruns this configuration.
    pub fn repro_command(&self, suite: SuiteName) -> String {
        let mut cmd = format!(
            "caplab verify {} --seed {} --trials {}",
            suite.token(),
            self.seed,
            self.effective_trials(suite)
        );
        if suite == SuiteName::Equivalence && self.exhaustive != 3 {
            write!(cmd, " --exhaustive {}", self.exhaustive).unwrap();
        }
        if self.max_points != 4 {
            write!(cmd, " --max-points {}", self.max_points).unwrap();
        }
        if let TensorChoice::One(_) = self.tensors {
            write!(cmd, " --oplus {}", self.tensors.token()).unwrap();
        }
        if self.format == OutputFormat::Kv {
            cmd.push_str(" --format kv");
        }
        cmd
    }
}

/// One logical block of checks inside a suite.
struct Section {
    name: String,
    checks: usize,
    skipped: usize,
    failures: Vec<String>,
    dropped_failures: usize,
    notes: Vec<String>,
}

impl Section {
    fn new(name: &str) -> Section {
        Section {
            name: name.to_string(),
            checks: 0,
            skipped: 0,
            failures: Vec::new(),
            dropped_failures: 0,
            notes: Vec::new(),
        }
    }

    fn fail(&mut self, message: impl Into<String>) {
        if self.failures.len() < MAX_FAILURES_SHOWN {
            self.failures.push(message.into());
        } else {
            self.dropped_failures += 1;
        }
    }

    fn failure_count(&self) -> usize {
        self.failures.len() + self.dropped_failures
    }

    fn note(&mut self, message: impl Into<String>) {
        self.notes.push(message.into());
    }
}

/// The result of a suite run: the transcript and its verdict.
#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub transcript: String,
    pub pass: bool,
    pub checks: usize,
    pub failures: usize,
}

impl SuiteReport {
    pub fn exit_code(&self) -> i32 {
        if self.pass {
            0
        } else {
            1
        }
    }
}

/// Run a suite and render its transcript.
pub fn run_suite(config: &SuiteConfig) -> Result<SuiteReport> {
    let suites: Vec<SuiteName> = match config.suite {
        SuiteName::All => SuiteName::EACH.to_vec(),
        one => vec![one],
    };
    let mut out = String::new();
    let mut checks = 0;
    let mut failures = 0;
    for suite in suites {
        let sections = run_sections(config, suite)?;
        render_suite(config, suite, &sections, &mut out);
        checks += sections.iter().map(|s| s.checks).sum::<usize>();
        failures += sections.iter().map(|s| s.failure_count()).sum::<usize>();
    }
    let pass = failures == 0;
    match config.format {
        OutputFormat::Text => {
            writeln!(
                out,
                "result: {} ({} checks, {} failures)",
                if pass { "pass" } else { "FAIL" },
                checks,
                failures
            )
            .unwrap();
        }
        OutputFormat::Kv => {
            writeln!(
                out,
                "result={} checks={} failures={}",
                if pass { "pass" } else { "fail" },
                checks,
                failures
            )
            .unwrap();
        }
    }
    Ok(SuiteReport {
        transcript: out,
        pass,
        checks,
        failures,
    })
}

fn render_suite(config: &SuiteConfig, suite: SuiteName, sections: &[Section], out: &mut String) {
    let trials = config.effective_trials(suite);
    match config.format {
        OutputFormat::Text => {
            writeln!(
                out,
                "suite {}: seed={} trials={} tensors={} max-points={}",
                suite.token(),
                config.seed,
                trials,
                config.tensors.token(),
                config.max_points
            )
            .unwrap();
            for section in sections {
                let verdict = if section.failure_count() == 0 { "ok" } else { "FAIL" };
                writeln!(
                    out,
                    "  {}: {} checks, {} skipped ... {}",
                    section.name, section.checks, section.skipped, verdict
                )
                .unwrap();
                for note in &section.notes {
                    writeln!(out, "    note: {note}").unwrap();
                }
                for failure in &section.failures {
                    writeln!(out, "    failure: {failure}").unwrap();
                    writeln!(out, "    reproduce: {}", config.repro_command(suite)).unwrap();
                }
                if section.dropped_failures > 0 {
                    writeln!(out, "    ... and {} more failures", section.dropped_failures).unwrap();
                }
            }
        }
        OutputFormat::Kv => {
            writeln!(
                out,
                "suite={} seed={} trials={} tensors={} max_points={}",
                suite.token(),
                config.seed,
                trials,
                config.tensors.token(),
                config.max_points
            )
            .unwrap();
            for section in sections {
                writeln!(
                    out,
                    "section={} checks={} skipped={} failures={}",
                    section.name,
                    section.checks,
                    section.skipped,
                    section.failure_count()
                )
                .unwrap();
                for note in &section.notes {
                    writeln!(out, "note={} text={note}", section.name).unwrap();
                }
                for failure in &section.failures {
                    writeln!(out, "failure={} text={failure}", section.name).unwrap();
                    writeln!(out, "reproduce={}", config.repro_command(suite)).unwrap();
                }
            }
        }
    }
}

fn run_sections(config: &SuiteConfig, suite: SuiteName) -> Result<Vec<Section>> {
    match suite {
        SuiteName::Equivalence => run_equivalence(config),
        SuiteName::FastPaths => run_fast_paths(config),
        SuiteName::Thm1 => run_thm1(config),
        SuiteName::Thm1Converse => run_thm1_converse(config),
        SuiteName::Evaluation => run_evaluation(config),
        SuiteName::DiagonalStrict => run_diagonal_strict(config),
        SuiteName::Extension => run_extension(config),
        SuiteName::ExtensionConverse => run_extension_converse(config),
        SuiteName::ConvFragment => run_conv_fragment(config),
        SuiteName::HomOrder => run_hom_order(config),
        SuiteName::All => unreachable!("expanded by run_suite"),
    }
}

/// Compact one-line rendering of a matrix for failure messages.
fn describe_space(space: &FiniteCapSpace) -> String {
    let n = space.len();
    let rows: Vec<String> = (0..n)
        .map(|x| {
            (0..n)
                .map(|a| space.entry(x, a).to_string())
                .collect::<Vec<_>>()
                .join(",")
        })
        .collect();
    format!("{} [{}]", space.name(), rows.join("; "))
}

/// All centered `n`-point spaces with off-diagonal entries drawn from
/// `values`, visited in odometer order.
pub fn for_each_exhaustive_space(
    n: usize,
    values: &[Weight],
    mut visit: impl FnMut(usize, &FiniteCapSpace) -> Result<()>,
) -> Result<()> {
    let slots = n * n - n;
    let total = (values.len() as u128).pow(slots as u32);
    let names: Vec<String> = (0..n).map(|i| format!("p{}", i + 1)).collect();
    let base = FiniteCapSpace::discrete("E", names.clone(), true)?;
    for index in 0..total {
        let mut space = base.clone();
        space.set_name(&format!("E{index}"));
        let mut rest = index;
        for x in 0..n {
            for a in 0..n {
                if x != a {
                    let choice = (rest % values.len() as u128) as usize;
                    rest /= values.len() as u128;
                    space.set_entry(x, a, values[choice]);
                }
            }
        }
        visit(index as usize, &space)?;
    }
    Ok(())
}

/// Check fast-path and selection-form regularity agreement on one space.
fn check_equivalence(
    space: &FiniteCapSpace,
    tensor: Tensor,
    section: &mut Section,
) -> Result<()> {
    let fast = is_regular(space, tensor);
    let slow = check_selection_regularity(space, tensor, space.len().max(1))?;
    section.checks += 1;
    match (&fast, &slow) {
        (None, Some(witness)) => section.fail(format!(
            "{} ({tensor}): three-point form holds but a selection violation exists: \
             lhs={} rhs={}",
            describe_space(space),
            witness.lhs,
            witness.rhs
        )),
        (Some(violation), None) => section.fail(format!(
            "{} ({tensor}): three-point violation {} but the selection search found none",
            describe_space(space),
            violation.render(space)
        )),
        _ => {}
    }
    if let Some(violation) = fast {
        let triple = (violation.a, violation.b, violation.y);
        match extract_selection_witness(space, tensor, triple) {
            Ok(witness) => {
                if let Err(err) = witness.verify(space, tensor) {
                    section.fail(format!(
                        "{} ({tensor}): extracted witness fails verification: {err}",
                        describe_space(space)
                    ));
                }
            }
            Err(err) => section.fail(format!(
                "{} ({tensor}): witness extraction failed at {}: {err}",
                describe_space(space),
                violation.render(space)
            )),
        }
    }
    Ok(())
}

fn run_equivalence(config: &SuiteConfig) -> Result<Vec<Section>> {
    let tensors = config.tensors.tensors();
    let trials = config.effective_trials(SuiteName::Equivalence);

    let mut exhaustive = Section::new(format!(
        "exhaustive {}-point sweep over {{0,1,inf}}",
        config.exhaustive
    )
    .as_str());
    let values = [Weight::zero(), Weight::int(1), Weight::INF];
    for_each_exhaustive_space(config.exhaustive, &values, |_, space| {
        for &tensor in &tensors {
            check_equivalence(space, tensor, &mut exhaustive)?;
        }
        Ok(())
    })?;

    let mut seeded = Section::new("seeded 4-point spaces over {0,1,2,inf}");
    let grid = [Weight::zero(), Weight::int(1), Weight::int(2), Weight::INF];
    let mut rng = SplitMix64::new(config.seed);
    for trial in 0..trials {
        let space = random_space(&mut rng, &format!("S{trial}"), 4, &grid)?;
        for &tensor in &tensors {
            check_equivalence(&space, tensor, &mut seeded)?;
        }
    }
    Ok(vec![exhaustive, seeded])
}

fn run_fast_paths(config: &SuiteConfig) -> Result<Vec<Section>> {
    let tensors = config.tensors.tensors();
    let per_class = config.effective_trials(SuiteName::FastPaths);
    let corpus = Corpus::standard(config.seed, per_class, config.max_points)?;

    let mut regularity = Section::new("regularity fast path vs enlargement oracle");
    let mut diagonality = Section::new("diagonality fast path vs selection oracle");
    for entry in corpus.iter() {
        let space = &entry.space;
        for &tensor in &tensors {
            regularity.checks += 1;
            let fast = is_regular(space, tensor).is_none();
            let oracle = enlargement_regularity_oracle(space, tensor)?;
            if fast != oracle.is_none() {
                regularity.fail(format!(
                    "{} ({tensor}): fast path says regular={} but oracle says {}",
                    describe_space(space),
                    fast,
                    match &oracle {
                        None => "no violation".to_string(),
                        Some(v) => v.render(space),
                    }
                ));
            }

            diagonality.checks += 1;
            let fast = is_diagonal(space, tensor).is_none();
            let oracle = selection_diagonality_oracle(space, tensor, 2)?;
            if fast != oracle.is_none() {
                diagonality.fail(format!(
                    "{} ({tensor}): fast path says diagonal={} but oracle says {}",
                    describe_space(space),
                    fast,
                    match &oracle {
                        None => "no violation".to_string(),
                        Some(v) => v.render(space),
                    }
                ));
            }
        }
    }
    Ok(vec![regularity, diagonality])
}

fn run_thm1(config: &SuiteConfig) -> Result<Vec<Section>> {
    let tensors = config.tensors.tensors();
    let trials = config.effective_trials(SuiteName::Thm1);
    let mut section = Section::new("contraction default within c ⊕ c of the hom-limit floor");
    let mut rng = SplitMix64::new(config.seed);
    for trial in 0..trials {
        for &tensor in &tensors {
            let target = match tensor {
                Tensor::Plus => {
                    random_metric(&mut rng, &format!("Y{trial}"), 3, &config.entry_grid)?
                }
                Tensor::Max => {
                    random_ultrametric(&mut rng, &format!("Y{trial}"), 3, &config.entry_grid)?
                }
            };
            let source = random_space(&mut rng, &format!("X{trial}"), 3, &config.entry_grid)?;
            let table: Vec<usize> = (0..source.len())
                .map(|_| rng.next_below(target.len() as u64) as usize)
                .collect();
            let f = SpaceMap::new("f", source, target, table)?;
            let report = verify_thm_continuouslimits(&f, tensor)?;
            section.checks += 1;
            if !report.holds {
                section.fail(format!(
                    "trial {trial} ({tensor}): {report}; source {} target {}",
                    describe_space(f.source()),
                    describe_space(f.target())
                ));
            }
        }
    }
    Ok(vec![section])
}

fn run_thm1_converse(config: &SuiteConfig) -> Result<Vec<Section>> {
    let tensors = config.tensors.tensors();
    let per_class = config.effective_trials(SuiteName::Thm1Converse);
    let corpus = Corpus::standard(config.seed, per_class, config.max_points)?;
    let mut section = Section::new("counterexample build on every non-regular target");
    let mut refuted = 0usize;
    for entry in corpus.iter() {
        for &tensor in &tensors {
            match constructions::find_and_refute(&entry.space, tensor)? {
                constructions::RefutationOutcome::Regular => section.skipped += 1,
                constructions::RefutationOutcome::Refuted { hom, .. } => {
                    refuted += 1;
                    section.checks += 1;
                    if hom.lhs <= hom.rhs {
                        section.fail(format!(
                            "{} ({tensor}): built package has no strict gap: {} ≤ {}",
                            describe_space(&entry.space),
                            hom.lhs,
                            hom.rhs
                        ));
                    }
                    if entry.space.name() == "Y3"
                        && tensor == Tensor::Plus
                        && (hom.lhs, hom.rhs) != (Weight::int(5), Weight::int(1))
                    {
                        section.fail(format!(
                            "three-point reference target: expected gap 5 > 1, got {} > {}",
                            hom.lhs, hom.rhs
                        ));
                    }
                }
            }
        }
    }
    section.note(format!("{refuted} non-regular targets refuted"));
    if refuted == 0 {
        section.fail("corpus contained no non-regular target to refute");
    }
    Ok(vec![section])
}

fn run_evaluation(config: &SuiteConfig) -> Result<Vec<Section>> {
    let trials = config.effective_trials(SuiteName::Evaluation);
    let mut section = Section::new("evaluated filters land inside enlargements");
    let mut rng = SplitMix64::new(config.seed);
    let mut vacuous = 0usize;
    for trial in 0..trials {
        let source = random_space(&mut rng, &format!("X{trial}"), 3, &config.entry_grid)?;
        let target = random_space(&mut rng, &format!("Y{trial}"), 3, &config.entry_grid)?;
        let full = FunctionSpace::full(&source, &target)?;
        let size = full.len() as u64;
        let mask = 1 + rng.next_below((1u64 << size.min(63)) - 1);
        let core: BTreeSet<usize> = (0..full.len()).filter(|&h| mask & (1 << h) != 0).collect();
        let filter = full.filter_of(&core)?;
        let f = rng.next_below(size) as usize;
        for alpha in target.value_grid() {
            let report = verify_lemma_reg(&full, &filter, f, alpha)?;
            section.checks += 1;
            if report.vacuous {
                vacuous += 1;
            }
            if !report.holds {
                section.fail(format!(
                    "trial {trial} α={alpha}: {report}; source {} target {} core size {}",
                    describe_space(&source),
                    describe_space(&target),
                    core.len()
                ));
            }
        }
    }
    section.note(format!("{vacuous} vacuous premise instances"));
    Ok(vec![section])
}

fn run_diagonal_strict(config: &SuiteConfig) -> Result<Vec<Section>> {
    let tensors = config.tensors.tensors();
    let per_class = config.effective_trials(SuiteName::DiagonalStrict);
    let corpus = Corpus::standard(config.seed, per_class, config.max_points)?;
    let mut section = Section::new("diagonal spaces have uniformly strict subspaces");
    let mut diagonal_spaces = 0usize;
    for entry in corpus.iter() {
        let space = &entry.space;
        let n = space.len();
        for &tensor in &tensors {
            if is_diagonal(space, tensor).is_some() {
                section.skipped += 1;
                continue;
            }
            diagonal_spaces += 1;
            let grid = space.value_grid();
            for mask in 1u32..(1 << n) {
                let subset: BTreeSet<usize> = (0..n).filter(|&p| mask & (1 << p) != 0).collect();
                for &alpha in &grid {
                    section.checks += 1;
                    if let Some(witness) = is_strict(space, &subset, alpha, tensor, true)? {
                        section.fail(format!(
                            "{} ({tensor}) S={} α={alpha}: {}",
                            describe_space(space),
                            space.carrier().render_subset(&subset),
                            witness.render(space)
                        ));
                    }
                }
            }
        }
    }
    section.note(format!("{diagonal_spaces} diagonal space/tensor instances"));
    Ok(vec![section])
}

fn run_extension(config: &SuiteConfig) -> Result<Vec<Section>> {
    let tensors = config.tensors.tensors();
    let trials = config.effective_trials(SuiteName::Extension);
    let mut section = Section::new("strict problems extend within α ⊕ α");
    let mut rng = SplitMix64::new(config.seed);
    let mut built = 0usize;
    let mut attempts = 0usize;
    let mut zero_alpha_checks = 0usize;
    let mut candidates_verified = 0usize;
    while built < trials && attempts < trials * EXTENSION_ATTEMPT_FACTOR {
        attempts += 1;
        let tensor = tensors[built % tensors.len()];
        // Every third problem pins α = 0 with a target whose regularity
        // matches the tensor, to exercise the zero-default corollary.
        let pin_zero = built % 3 == 2;

        let nx = 3 + (rng.next_below((config.max_points.max(3) - 2) as u64) as usize);
        let source = random_space(&mut rng, &format!("X{attempts}"), nx, &config.entry_grid)?;
        let target = if pin_zero {
            match tensor {
                Tensor::Plus => {
                    random_metric(&mut rng, &format!("Y{attempts}"), 3, &config.entry_grid)?
                }
                Tensor::Max => {
                    random_ultrametric(&mut rng, &format!("Y{attempts}"), 3, &config.entry_grid)?
                }
            }
        } else {
            random_space(&mut rng, &format!("Y{attempts}"), 3, &config.entry_grid)?
        };

        let subset_mask = 1 + rng.next_below((1u64 << nx) - 1);
        let subset: BTreeSet<usize> = (0..nx).filter(|&p| subset_mask & (1 << p) != 0).collect();
        let assignment: std::collections::BTreeMap<usize, usize> = subset
            .iter()
            .map(|&p| (p, rng.next_below(target.len() as u64) as usize))
            .collect();

        let alpha = if pin_zero {
            Weight::zero()
        } else {
            let finite = source.finite_grid();
            finite[rng.next_below(finite.len() as u64) as usize]
        };

        // The restriction must be a contraction and S must be α-strict;
        // otherwise redraw.
        let restricted = source.subspace(&subset)?;
        let f_table: Vec<usize> = subset.iter().map(|p| assignment[p]).collect();
        let f = SpaceMap::new("f", restricted, target.clone(), f_table)?;
        if !crate::homspace::is_contraction(&f) {
            continue;
        }
        if is_strict(&source, &subset, alpha, tensor, false)?.is_some() {
            continue;
        }

        let problem = ExtensionProblem::new(&source, &target, subset, assignment, tensor, alpha)?;
        let report = crate::extension::verify_extension_theorem(&problem)?;
        built += 1;
        section.checks += 1;
        candidates_verified += report.outcomes.len();
        if report.strictness_failure.is_some() {
            section.fail(format!(
                "attempt {attempts} ({tensor}): strictness hypothesis lost between check and report"
            ));
            continue;
        }
        if !report.holds {
            section.fail(format!(
                "attempt {attempts} ({tensor}) α={}: {report}; ambient {} target {}",
                problem.alpha(),
                describe_space(problem.ambient()),
                describe_space(problem.target())
            ));
        }
        if pin_zero && is_regular(problem.target(), tensor).is_none() {
            zero_alpha_checks += 1;
            for outcome in &report.outcomes {
                if !outcome.m.is_zero() {
                    section.fail(format!(
                        "attempt {attempts} ({tensor}) α=0 regular target: extension {} has m={}, \
                         expected a contraction",
                        outcome.description, outcome.m
                    ));
                }
            }
        }
    }
    section.note(format!(
        "{built} strict problems from {attempts} attempts; {candidates_verified} extensions \
         verified; {zero_alpha_checks} zero-default problems"
    ));
    if built < trials {
        section.fail(format!(
            "assembled only {built} of {trials} strict problems in {attempts} attempts"
        ));
    }
    Ok(vec![section])
}

fn run_extension_converse(config: &SuiteConfig) -> Result<Vec<Section>> {
    let tensors = config.tensors.tensors();
    let per_class = config.effective_trials(SuiteName::ExtensionConverse);
    let corpus = Corpus::standard(config.seed, per_class, config.max_points)?;
    let mut section = Section::new("admissible non-contractive extension on every non-regular target");
    let mut refuted = 0usize;
    for entry in corpus.iter() {
        for &tensor in &tensors {
            match constructions::find_and_refute(&entry.space, tensor)? {
                constructions::RefutationOutcome::Regular => section.skipped += 1,
                constructions::RefutationOutcome::Refuted { extension, .. } => {
                    refuted += 1;
                    section.checks += 1;
                    if extension.lhs <= extension.rhs {
                        section.fail(format!(
                            "{} ({tensor}): built package has no strict gap: {} ≤ {}",
                            describe_space(&entry.space),
                            extension.lhs,
                            extension.rhs
                        ));
                    }
                    if entry.space.name() == "Y3" && tensor == Tensor::Plus {
                        let display = extension.to_string();
                        if !display.ends_with("strict gap: 2 < 5") {
                            section.fail(format!(
                                "three-point reference target: expected final display 2 < 5, got: {}",
                                display.lines().last().unwrap_or("").trim()
                            ));
                        }
                    }
                }
            }
        }
    }
    section.note(format!("{refuted} non-regular targets refuted"));
    if refuted == 0 {
        section.fail("corpus contained no non-regular target to refute");
    }
    Ok(vec![section])
}

fn run_conv_fragment(config: &SuiteConfig) -> Result<Vec<Section>> {
    let tensors = config.tensors.tensors();
    let per_class = config.effective_trials(SuiteName::ConvFragment);
    let corpus = Corpus::standard(config.seed, per_class, config.max_points)?;
    let zero_infinity_sources: Vec<&FiniteCapSpace> = corpus
        .iter()
        .map(|entry| &entry.space)
        .filter(|space| space.is_zero_infinity())
        .collect();

    let mut direct = Section::new("regular zero/infinity targets: hom_min = 0 forces contraction");
    let mut converse = Section::new("non-regular zero/infinity targets: refuted in the fragment");
    let values = [Weight::zero(), Weight::INF];
    for_each_exhaustive_space(3, &values, |_, target| {
        for &tensor in &tensors {
            if is_regular(target, tensor).is_none() {
                for source in &zero_infinity_sources {
                    let full = FunctionSpace::full(source, target)?;
                    for index in 0..full.len() {
                        let minimum = hom_min_in(&full, full.table(index))?;
                        if !minimum.is_zero() {
                            continue;
                        }
                        direct.checks += 1;
                        let f = SpaceMap::new(
                            "f",
                            (*source).clone(),
                            target.clone(),
                            full.table(index).to_vec(),
                        )?;
                        let m = contraction_default(&f, tensor);
                        if !m.is_zero() {
                            direct.fail(format!(
                                "target {} source {} ({tensor}): map {:?} has hom_min=0 \
                                 but m={m}",
                                describe_space(target),
                                describe_space(source),
                                full.table(index)
                            ));
                        }
                    }
                }
            } else {
                converse.checks += 1;
                match constructions::find_and_refute(target, tensor)? {
                    constructions::RefutationOutcome::Regular => converse.fail(format!(
                        "target {} ({tensor}): three-point form finds a violation but the \
                         pipeline reports regular",
                        describe_space(target)
                    )),
                    constructions::RefutationOutcome::Refuted { hom, .. } => {
                        if !hom.space.is_zero_infinity() {
                            converse.fail(format!(
                                "target {} ({tensor}): built ambient is not zero/infinity-valued",
                                describe_space(target)
                            ));
                        }
                        let minimum = hom_min(&hom.f)?;
                        let m = contraction_default(&hom.f, tensor);
                        if !minimum.is_zero() || m.is_zero() {
                            converse.fail(format!(
                                "target {} ({tensor}): expected hom_min=0 and m>0, got \
                                 hom_min={minimum} m={m}",
                                describe_space(target)
                            ));
                        }
                    }
                }
            }
        }
        Ok(())
    })?;
    direct.note(format!(
        "{} zero/infinity corpus sources",
        zero_infinity_sources.len()
    ));
    Ok(vec![direct, converse])
}

fn run_hom_order(config: &SuiteConfig) -> Result<Vec<Section>> {
    let per_class = config.effective_trials(SuiteName::HomOrder);
    let corpus = Corpus::standard(config.seed, per_class, config.max_points)?;

    let mut order = Section::new("plus default never exceeds the max default");
    for source_entry in corpus.iter() {
        for target_entry in corpus.iter() {
            let source = &source_entry.space;
            let target = &target_entry.space;
            let count = (target.len() as u128).pow(source.len() as u32);
            if count > HOM_ORDER_MAP_CAP {
                order.skipped += 1;
                continue;
            }
            for index in 0..count {
                let mut rest = index;
                let table: Vec<usize> = (0..source.len())
                    .map(|_| {
                        let value = (rest % target.len() as u128) as usize;
                        rest /= target.len() as u128;
                        value
                    })
                    .collect();
                let f = SpaceMap::new("f", source.clone(), target.clone(), table)?;
                order.checks += 1;
                let plus = contraction_default(&f, Tensor::Plus);
                let max = contraction_default(&f, Tensor::Max);
                if plus > max {
                    order.fail(format!(
                        "source {} target {} map {:?}: m_+={plus} > m_∨={max}",
                        describe_space(source),
                        describe_space(target),
                        f.table()
                    ));
                }
            }
        }
    }

    let mut laws = Section::new("hom-structure meet and antitone laws");
    let values = [Weight::zero(), Weight::int(1), Weight::INF];
    let mut rng = SplitMix64::new(config.seed);
    let mut source_spaces: Vec<FiniteCapSpace> = Vec::new();
    for n in 1..=2 {
        for_each_exhaustive_space(n, &values, |_, space| {
            source_spaces.push(space.clone());
            Ok(())
        })?;
    }
    for n in 1..=3 {
        for_each_exhaustive_space(n, &values, |_, target| {
            for source in &source_spaces {
                let full = FunctionSpace::full(source, target)?;
                let size = full.len() as u64;
                for _ in 0..HOM_ORDER_ROUNDS {
                    let mask1 = 1 + rng.next_below((1u64 << size.min(63)) - 1);
                    let mask2 = 1 + rng.next_below((1u64 << size.min(63)) - 1);
                    let core1: BTreeSet<usize> =
                        (0..full.len()).filter(|&h| mask1 & (1 << h) != 0).collect();
                    let core2: BTreeSet<usize> =
                        (0..full.len()).filter(|&h| mask2 & (1 << h) != 0).collect();
                    let g1 = full.filter_of(&core1)?;
                    let g2 = full.filter_of(&core2)?;
                    let meet = g1.meet(&g2)?;
                    for f in 0..full.len() {
                        laws.checks += 2;
                        let v1 = hom_limit(&full, &g1, f)?;
                        let v2 = hom_limit(&full, &g2, f)?;
                        let vm = hom_limit(&full, &meet, f)?;
                        if vm != v1.join(v2) {
                            laws.fail(format!(
                                "meet law at source {} target {} f={}: λ(𝓖₁∧𝓖₂)={vm} but \
                                 λ𝓖₁∨λ𝓖₂={}",
                                describe_space(source),
                                describe_space(target),
                                full.name(f),
                                v1.join(v2)
                            ));
                        }
                        // The meet is coarser than either argument, so its
                        // value must dominate both.
                        if vm < v1 || vm < v2 {
                            laws.fail(format!(
                                "antitone law at source {} target {} f={}: coarser filter \
                                 got a smaller value ({vm} < {v1} ∨ {v2})",
                                describe_space(source),
                                describe_space(target),
                                full.name(f)
                            ));
                        }
                    }
                }
            }
            Ok(())
        })?;
    }
    Ok(vec![order, laws])
}
