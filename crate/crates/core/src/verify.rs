//! Cross-checks between the three dynamics and the conserved quantities.
//!
//! [`run_suite`] evolves every state of a corpus and runs each [`Check`] on
//! the whole orbit. States are processed in parallel; verdicts are assembled
//! in a fixed order, so a run is a deterministic function of its inputs.
//! A failing check reports the smallest failing state it saw.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::carrier::{
    energy_profile_with, energy_sites_predicted, r_step, transfer_with, Capacity, Carrier, EnergyReport, StepOutcome,
    StepRule,
};
use crate::corpus::CorpusSpec;
use crate::matching::{match_rounds, match_rounds_padded, match_stack, stack_permutation, ParenSeq, StackPermutation};
use crate::partition::Partition;
use crate::poset::{
    antichain_decomposition, antichain_groups, depth_chains, pair_points, poset_of_seq, poset_of_word,
    PermutationPoset, BRUTE_FORCE_LIMIT,
};
use crate::rsk::p_symbol;
use crate::state::{evolve_tts, is_asymptotic, solitons, BoxBallState};
use crate::walkpath::{delete_concave, delete_convex, evolve_reflect, group_partition, groups_are_paren_blocks, to_walk, walk_to_state};

/// Upper bound on the steps spent waiting for an asymptotic state.
pub const ASYMPTOTIC_STEP_LIMIT: usize = 200;

macro_rules! checks {
    ($($variant:ident => $name:literal),* $(,)?) => {
        #[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub enum Check { $($variant),* }

        impl Check {
            pub const ALL: &'static [Check] = &[$(Check::$variant),*];

            pub fn name(self) -> &'static str {
                match self { $(Check::$variant => $name),* }
            }
        }
    };
}

checks! {
    BallCount => "ball_count_conserved",
    LeftmostAdvances => "leftmost_ball_advances",
    RoundsEqualStack => "match_rounds_equals_match_stack",
    PaddingIndependent => "matching_padding_independent",
    ParenSeqValid => "paren_seq_noncrossing_depths",
    DepthHistogram => "depth_histogram_decreasing",
    StackPermutationValid => "stack_permutation_is_bijection",
    OuterInner => "outer_comparable_inner_incomparable",
    DepthChainsOptimal => "depth_chains_attain_greene_i",
    AntichainDecomposition => "antichain_decomposition",
    GreeneDuality => "greene_duality",
    RskShape => "rsk_shape_equals_greene_lambda",
    WordRskShape => "rsk_shape_equals_greene_lambda_on_words",
    ShapeConserved => "p_symbol_shape_conserved",
    ReflectEqualsTts => "walk_reflection_equals_tts",
    WalkRoundTrip => "walk_round_trip",
    GroupsAreBlocks => "groups_contain_no_unmatched_zero",
    ConvexEqualsConcave => "convex_deletion_equals_concave_deletion",
    CornerRecursion => "corner_deletion_peels_depth",
    CarrierEqualsTts => "carrier_equals_tts",
    RStepBijective => "r_step_bijective",
    EnergySites => "energy_sites_are_shallow_closings",
    EnergyMonotone => "energy_monotone_and_stable",
    EnergyEqualsGreene => "energy_equals_greene_i",
    EnergyConserved => "energy_conserved",
    MainFormula => "energy_increments_equal_lambda",
    AsymptoticReached => "asymptotic_state_reached",
    AsymptoticFormula => "asymptotic_soliton_formula",
}

impl Serialize for Check {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for Check {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let name = String::deserialize(d)?;
        Check::ALL
            .iter()
            .copied()
            .find(|c| c.name() == name)
            .ok_or_else(|| serde::de::Error::custom(format!("unknown check {name:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub state: BoxBallState,
    pub step: usize,
    pub l: Option<usize>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub check: Check,
    pub passed: bool,
    /// Number of states (or words) the check ran on.
    pub checked: usize,
    pub counterexample: Option<Counterexample>,
}

#[derive(Clone, Copy, Debug)]
pub struct SuiteConfig {
    /// Evolution steps checked per corpus state.
    pub steps: usize,
    /// Posets larger than this skip the exhaustive Greene checks.
    pub brute_force_limit: usize,
    pub rule: StepRule,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self { steps: 20, brute_force_limit: BRUTE_FORCE_LIMIT, rule: r_step }
    }
}

/// An intentionally broken carrier rule with an off-by-one capacity test:
/// a full carrier still picks up the next ball. Used to check that the
/// suite notices.
pub fn corrupted_r_step(c: Carrier, b: u8) -> StepOutcome {
    match c.zeros() {
        Some(0) if b == 1 => StepOutcome { out: 0, carrier: Carrier { ones: c.ones + 1, ..c }, bumped: false },
        _ => r_step(c, b),
    }
}

#[derive(Default)]
struct Findings {
    failures: BTreeMap<Check, Counterexample>,
    skipped: Vec<Check>,
}

impl Findings {
    fn fail(&mut self, check: Check, state: &BoxBallState, step: usize, l: Option<usize>, detail: impl Into<String>) {
        self.failures.entry(check).or_insert_with(|| Counterexample {
            state: state.clone(),
            step,
            l,
            detail: detail.into(),
        });
    }

    fn expect(&mut self, ok: bool, check: Check, state: &BoxBallState, step: usize, l: Option<usize>, detail: impl FnOnce() -> String) {
        if !ok {
            self.fail(check, state, step, l, detail());
        }
    }
}

/// Quantities that must not change along an orbit.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Conserved {
    shape: Partition,
    energy: Vec<usize>,
}

fn rsk_shape(perm: &StackPermutation) -> Partition {
    p_symbol(&perm.word).shape()
}

/// Runs every per-state check on the orbit of `p0`.
fn check_state(p0: &BoxBallState, cfg: &SuiteConfig) -> Findings {
    let mut f = Findings::default();
    let n = p0.ball_count();
    let mut p = p0.clone();
    let mut reference: Option<Conserved> = None;
    for t in 0..=cfg.steps {
        let next = evolve_tts(&p);
        check_step(&mut f, &p, &next, t, cfg);

        let seq = match_stack(&p);
        let perm = stack_permutation(&seq);
        let conserved = Conserved {
            shape: rsk_shape(&perm),
            energy: energy_profile_with(&p, n, cfg.rule).values.into_values().collect(),
        };
        match &reference {
            None => reference = Some(conserved),
            Some(r) => {
                f.expect(r.shape == conserved.shape, Check::ShapeConserved, p0, t, None, || {
                    format!("shape {} became {}", r.shape, conserved.shape)
                });
                f.expect(r.energy == conserved.energy, Check::EnergyConserved, p0, t, None, || {
                    format!("energies {:?} became {:?}", r.energy, conserved.energy)
                });
            }
        }
        p = next;
    }

    check_brute_force(&mut f, p0, cfg);
    check_asymptotic(&mut f, p0, cfg);
    f
}

/// Checks on one state `p` of the orbit (at time `t`) and its successor.
fn check_step(f: &mut Findings, p: &BoxBallState, next: &BoxBallState, t: usize, cfg: &SuiteConfig) {
    let n = p.ball_count();

    f.expect(next.ball_count() == n, Check::BallCount, p, t, None, || format!("{n} balls became {}", next.ball_count()));
    f.expect(n == 0 || next.offset() > p.offset(), Check::LeftmostAdvances, p, t, None, || {
        format!("offset {} became {}", p.offset(), next.offset())
    });

    let seq = match_stack(p);
    let rounds = match_rounds(p);
    f.expect(seq == rounds, Check::RoundsEqualStack, p, t, None, || format!("stack {seq} vs rounds {rounds}"));
    f.expect(match_rounds_padded(p, n + 5) == rounds, Check::PaddingIndependent, p, t, None, || {
        "padding N and N+5 disagree".into()
    });
    if let Err(e) = seq.validate() {
        f.fail(Check::ParenSeqValid, p, t, None, e);
    }
    let hist = seq.depth_histogram();
    f.expect(hist.windows(2).all(|w| w[0] >= w[1]) && hist.iter().sum::<usize>() == n, Check::DepthHistogram, p, t, None, || {
        format!("histogram {hist:?}")
    });

    let perm = stack_permutation(&seq);
    let shallow_identity = seq.max_depth() > 1 || perm.word.iter().enumerate().all(|(i, &v)| v == i + 1);
    f.expect(perm.is_permutation() && perm.len() == n && shallow_identity, Check::StackPermutationValid, p, t, None, || {
        format!("stack permutation {perm}")
    });

    check_outer_inner(f, p, &seq, t);

    match antichain_groups(&seq).and_then(|groups| antichain_decomposition(&seq).map(|fam| (groups, fam))) {
        Ok((groups, fam)) => {
            let depths_ok = groups.iter().all(|g| g.iter().enumerate().all(|(k, id)| seq.pair(*id).depth == k + 1));
            let mut ids: Vec<usize> = groups.concat();
            ids.sort_unstable();
            let partition_ok = ids == (1..=n).collect::<Vec<_>>();
            let sizes_ok = fam.antichains.iter().map(Vec::len).sum::<usize>() == n;
            f.expect(depths_ok && partition_ok && sizes_ok, Check::AntichainDecomposition, p, t, None, || {
                format!("groups {groups:?}")
            });
        }
        Err(e) => f.fail(Check::AntichainDecomposition, p, t, None, e.to_string()),
    }

    check_walk(f, p, next, &seq, t);
    check_carrier(f, p, next, &seq, &perm, t, cfg);
}

fn check_outer_inner(f: &mut Findings, p: &BoxBallState, seq: &ParenSeq, t: usize) {
    let points = pair_points(seq);
    for a in &seq.pairs {
        for b in seq.pairs.iter().filter(|b| b.pair_id > a.pair_id) {
            let comparable = PermutationPoset::comparable(points[a.pair_id - 1], points[b.pair_id - 1]);
            if comparable != a.is_disjoint(b) {
                f.fail(Check::OuterInner, p, t, None, format!("pairs {} and {}", a.pair_id, b.pair_id));
                return;
            }
        }
    }
}

fn check_walk(f: &mut Findings, p: &BoxBallState, next: &BoxBallState, seq: &ParenSeq, t: usize) {
    let walk = to_walk(seq);
    f.expect(walk_to_state(&walk) == *p, Check::WalkRoundTrip, p, t, None, || format!("walk {walk}"));

    let reflected = walk_to_state(&evolve_reflect(&walk));
    f.expect(reflected == *next, Check::ReflectEqualsTts, p, t, None, || format!("reflection gave {reflected}, rule gave {next}"));

    match group_partition(&walk) {
        Ok(part) => f.expect(groups_are_paren_blocks(seq, &part), Check::GroupsAreBlocks, p, t, None, || {
            "a group contains an unmatched zero".into()
        }),
        Err(e) => f.fail(Check::GroupsAreBlocks, p, t, None, e.to_string()),
    }

    let mut peeled = walk.clone();
    let hist = seq.depth_histogram();
    for (k, &expected) in hist.iter().enumerate() {
        let convex = delete_convex(&peeled);
        if !convex.same_shape(&delete_concave(&peeled)) {
            f.fail(Check::ConvexEqualsConcave, p, t, Some(k + 1), format!("after {k} deletions: {peeled}"));
        }
        let depth_one = match_stack(&walk_to_state(&peeled)).depth_histogram().first().copied().unwrap_or(0);
        if !delete_convex(&evolve_reflect(&peeled)).same_shape(&evolve_reflect(&convex)) {
            f.fail(Check::CornerRecursion, p, t, Some(k + 1), format!("peeling does not commute with evolution: {peeled}"));
        }
        if depth_one != expected {
            f.fail(Check::CornerRecursion, p, t, Some(k + 1), format!("depth {} has {expected} pairs, peeled walk has {depth_one}", k + 1));
        }
        peeled = convex;
    }
    f.expect(peeled.steps.is_empty(), Check::CornerRecursion, p, t, None, || format!("left over after peeling: {peeled}"));
}

#[allow(clippy::too_many_arguments)]
fn check_carrier(
    f: &mut Findings,
    p: &BoxBallState,
    next: &BoxBallState,
    seq: &ParenSeq,
    perm: &StackPermutation,
    t: usize,
    cfg: &SuiteConfig,
) {
    let n = p.ball_count();
    for cap in [Capacity::Finite(n.max(1)), Capacity::Finite(n + 3), Capacity::Unbounded] {
        let out = transfer_with(p, cap, cfg.rule).state;
        if out != *next {
            f.fail(Check::CarrierEqualsTts, p, t, None, format!("{cap:?} gave {out}, rule gave {next}"));
        }
    }

    let report = energy_profile_with(p, n + 1, cfg.rule);
    for l in 1..=n {
        let predicted = energy_sites_predicted(seq, l);
        if report.sites[&l] != predicted {
            f.fail(Check::EnergySites, p, t, Some(l), format!("bumps {:?}, shallow closings {predicted:?}", report.sites[&l]));
        }
    }
    check_energy_shape(f, p, &report, seq, t);

    let shape = rsk_shape(perm);
    for l in 1..=n + 1 {
        if report.e(l).checked_sub(report.e(l - 1)) != Some(shape.part(l)) {
            f.fail(Check::MainFormula, p, t, Some(l), format!("E = {:?}, lambda = {shape}", report.values));
        }
    }
}

fn check_energy_shape(f: &mut Findings, p: &BoxBallState, report: &EnergyReport, seq: &ParenSeq, t: usize) {
    let n = p.ball_count();
    let max_depth = seq.max_depth();
    let monotone = report.values.values().collect::<Vec<_>>().windows(2).all(|w| w[0] <= w[1]);
    let nested = report.sites.values().collect::<Vec<_>>().windows(2).all(|w| w[0].iter().all(|s| w[1].contains(s)));
    let stable = report.values.iter().all(|(&l, &e)| l < max_depth || e == n) && report.infinity == n;
    f.expect(monotone && nested && stable, Check::EnergyMonotone, p, t, None, || format!("E = {:?}", report.values));
}

/// Exhaustive Greene checks at time 0.
fn check_brute_force(f: &mut Findings, p: &BoxBallState, cfg: &SuiteConfig) {
    let seq = match_stack(p);
    let poset = poset_of_seq(&seq);
    let greene = match poset.greene_with_limit(cfg.brute_force_limit) {
        Ok(g) => g,
        Err(_) => {
            f.skipped.extend([Check::DepthChainsOptimal, Check::GreeneDuality, Check::RskShape, Check::EnergyEqualsGreene]);
            return;
        }
    };
    let n = p.ball_count();
    let lambda = greene.lambda();

    match depth_chains(&seq) {
        Ok(chains) => {
            for k in 1..=n {
                if chains.covered(k) != greene.i(k) {
                    f.fail(Check::DepthChainsOptimal, p, 0, Some(k), format!("chains cover {}, I_k = {}", chains.covered(k), greene.i(k)));
                    break;
                }
            }
        }
        Err(e) => f.fail(Check::DepthChainsOptimal, p, 0, None, e.to_string()),
    }

    f.expect(greene.lambda_prime() == lambda.transpose(), Check::GreeneDuality, p, 0, None, || {
        format!("lambda {lambda}, lambda' {}", greene.lambda_prime())
    });

    let shape = rsk_shape(&stack_permutation(&seq));
    let sums_ok = (1..=n).all(|k| shape.partial_sum(k) == greene.i(k));
    f.expect(shape == lambda && sums_ok, Check::RskShape, p, 0, None, || format!("RSK {shape}, Greene {lambda}"));

    let report = energy_profile_with(p, n, cfg.rule);
    for l in 1..=n {
        if report.e(l) != greene.i(l) {
            f.fail(Check::EnergyEqualsGreene, p, 0, Some(l), format!("E = {}, I = {}", report.e(l), greene.i(l)));
            break;
        }
    }
}

/// Evolves until the state is a sorted train of free solitons and checks
/// the energies and the shape against the soliton lengths.
fn check_asymptotic(f: &mut Findings, p0: &BoxBallState, cfg: &SuiteConfig) {
    let n = p0.ball_count();
    let mut p = p0.clone();
    let mut t = 0;
    while !is_asymptotic(&p, n) {
        if t == ASYMPTOTIC_STEP_LIMIT {
            f.fail(Check::AsymptoticReached, p0, t, None, format!("still interacting: {p}"));
            return;
        }
        p = evolve_tts(&p);
        t += 1;
    }
    let profile = solitons(&p);
    let report = energy_profile_with(&p, n, cfg.rule);
    for l in 1..=n {
        if report.e(l) != profile.free_energy(l) {
            f.fail(Check::AsymptoticFormula, p0, t, Some(l), format!("E = {}, soliton sum = {}", report.e(l), profile.free_energy(l)));
            return;
        }
    }
    let shape = rsk_shape(&stack_permutation(&match_stack(&p)));
    let columns = Partition::new(profile.lengths());
    f.expect(shape.transpose() == columns, Check::AsymptoticFormula, p0, t, None, || {
        format!("lambda {shape}, soliton lengths {columns}")
    });
}

fn check_r_step(rule: StepRule) -> Option<Counterexample> {
    for l in 1..=6 {
        let mut seen = std::collections::HashSet::new();
        for c in Carrier::all(l) {
            for b in 0..=1u8 {
                let s = rule(c, b);
                let conserved = usize::from(b) + c.ones == usize::from(s.out) + s.carrier.ones;
                if !conserved || s.carrier.ones > l || !seen.insert((s.out, s.carrier.ones)) {
                    return Some(Counterexample {
                        state: BoxBallState::empty(),
                        step: 0,
                        l: Some(l),
                        detail: format!("carrier m2 = {}, cell {b} -> {s:?}", c.ones),
                    });
                }
            }
        }
    }
    None
}

/// Shape of the P-symbol against the exhaustive Greene shape of the word poset.
fn check_word(x: &[usize], limit: usize) -> Option<Result<(), String>> {
    let greene = poset_of_word(x).greene_with_limit(limit).ok()?;
    let shape = p_symbol(x).shape();
    Some(if shape == greene.lambda() {
        Ok(())
    } else {
        Err(format!("word {x:?}: P-symbol shape {shape}, Greene {}", greene.lambda()))
    })
}

/// A full verification run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub corpus: CorpusSpec,
    pub steps: usize,
    pub states: usize,
    pub verdicts: Vec<Verdict>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.passed)
    }

    pub fn verdict(&self, check: Check) -> &Verdict {
        self.verdicts.iter().find(|v| v.check == check).expect("every check has a verdict")
    }
}

/// Runs the suite on the random corpus described by `spec`.
pub fn run_suite(spec: &CorpusSpec, cfg: &SuiteConfig) -> SuiteReport {
    let words = spec.words(10, 4);
    run_suite_on(spec, &spec.states(), &words, cfg)
}

/// Runs the suite on explicit states and words.
pub fn run_suite_on(spec: &CorpusSpec, states: &[BoxBallState], words: &[Vec<usize>], cfg: &SuiteConfig) -> SuiteReport {
    let findings: Vec<Findings> = states.par_iter().map(|p| check_state(p, cfg)).collect();
    let word_results: Vec<Option<Result<(), String>>> =
        words.par_iter().map(|x| check_word(x, cfg.brute_force_limit)).collect();

    let verdicts = Check::ALL
        .iter()
        .map(|&check| {
            let (checked, counterexample) = match check {
                Check::RStepBijective => (1, check_r_step(cfg.rule)),
                Check::WordRskShape => {
                    let checked = word_results.iter().flatten().count();
                    let cx = word_results.iter().flatten().find_map(|r| r.clone().err()).map(|detail| Counterexample {
                        state: BoxBallState::empty(),
                        step: 0,
                        l: None,
                        detail,
                    });
                    (checked, cx)
                }
                _ => {
                    let checked = findings.iter().filter(|f| !f.skipped.contains(&check)).count();
                    let cx = findings
                        .iter()
                        .filter_map(|f| f.failures.get(&check))
                        .min_by_key(|c| (c.state.ball_count(), c.state.cells().len(), c.step))
                        .cloned();
                    (checked, cx)
                }
            };
            Verdict { check, passed: counterexample.is_none(), checked, counterexample }
        })
        .collect();
    SuiteReport { corpus: *spec, steps: cfg.steps, states: states.len(), verdicts }
}

/// Conserved data of one state of an orbit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepRecord {
    pub step: usize,
    pub state: BoxBallState,
    pub stack_permutation: StackPermutation,
    pub shape: Partition,
    pub depth_histogram: Vec<usize>,
    pub energy: EnergyReport,
}

impl StepRecord {
    pub fn new(step: usize, state: &BoxBallState, lmax: usize) -> Self {
        let seq = match_stack(state);
        let perm = stack_permutation(&seq);
        Self {
            step,
            state: state.clone(),
            shape: rsk_shape(&perm),
            stack_permutation: perm,
            depth_histogram: seq.depth_histogram(),
            energy: energy_profile_with(state, lmax, r_step),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitVerdict {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub counterexample: Option<Counterexample>,
}

/// Per-step conserved quantities of one orbit, with a verdict for each.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantReport {
    pub records: Vec<StepRecord>,
    pub verdicts: Vec<OrbitVerdict>,
}

impl InvariantReport {
    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.passed)
    }
}

/// Evolves `p` for `steps` steps, recording shape, depth histogram and
/// energies (`l = 1..=lmax`), and flags the first step where any changed.
pub fn orbit_invariants(p: &BoxBallState, steps: usize, lmax: usize) -> InvariantReport {
    let mut records = Vec::with_capacity(steps + 1);
    let mut state = p.clone();
    for t in 0..=steps {
        records.push(StepRecord::new(t, &state, lmax));
        state = evolve_tts(&state);
    }

    type Getter = fn(&StepRecord) -> String;
    let quantities: [(&str, Getter); 3] = [
        ("p_symbol_shape_conserved", |r| r.shape.to_string()),
        ("depth_histogram_conserved", |r| format!("{:?}", r.depth_histogram)),
        ("energy_conserved", |r| format!("{:?}", r.energy.values)),
    ];
    let mut verdicts: Vec<OrbitVerdict> = quantities
        .iter()
        .map(|(name, get)| {
            let first = get(&records[0]);
            let change = records.iter().find(|r| get(r) != first);
            OrbitVerdict {
                name: name.to_string(),
                passed: change.is_none(),
                detail: first.clone(),
                counterexample: change.map(|r| Counterexample {
                    state: r.state.clone(),
                    step: r.step,
                    l: None,
                    detail: format!("{first} became {}", get(r)),
                }),
            }
        })
        .collect();

    let bad = records.iter().find_map(|r| {
        (1..=lmax)
            .find(|&l| r.energy.e(l).checked_sub(r.energy.e(l - 1)) != Some(r.shape.part(l)))
            .map(|l| (r, l))
    });
    verdicts.push(OrbitVerdict {
        name: "energy_increments_equal_lambda".into(),
        passed: bad.is_none(),
        detail: format!("lambda {}", records[0].shape),
        counterexample: bad.map(|(r, l)| Counterexample {
            state: r.state.clone(),
            step: r.step,
            l: Some(l),
            detail: format!("E = {:?}, lambda = {}", r.energy.values, r.shape),
        }),
    });
    InvariantReport { records, verdicts }
}
