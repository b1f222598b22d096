//! Attack solvers: manipulation, bribery, electorate control (adding,
//! deleting and partitioning votes) via winning-condition systems and
//! integer feasibility, the seven candidate-control variants by direct
//! enumeration, and destructive variants by guessing the rival winner.

use std::collections::{BTreeMap, BTreeSet};

use num::{One, Zero};

use crate::conditions::{
    cowinner_systems, winning_systems, LinConstraint, LinExpr, LinearSystem, Rel, VoteSpace,
};
use crate::election::{CandidateId, Election, Profile, Vote};
use crate::ilp::{solve_feasibility, Constraint, IlpInstance, IlpVariable, Witness};
use crate::rules::{cowinners_restricted, evaluate, evaluate_restricted, Rule};
use crate::{rat_u64, Rat};

/// How tied first-stage winners are treated in two-stage control.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TieModel {
    /// Ties eliminate: a stage promotes its winner only when unique.
    Eliminate,
    /// Ties promote: every co-winner moves on.
    Promote,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Constructive,
    Destructive,
}

#[derive(Debug, Clone)]
pub enum AttackKind {
    /// `manipulators` strategic voters pick their ballots freely.
    Manipulation { manipulators: u64 },
    /// Recast up to `budget` existing ballots arbitrarily.
    Bribery { budget: u64 },
    /// Register up to `budget` ballots from the unregistered pool.
    AddVotes { budget: u64, unregistered: Profile },
    /// Remove up to `budget` ballots.
    DeleteVotes { budget: u64 },
    /// Split the profile into two first-stage elections whose promoted
    /// winners meet in a final over the full profile.
    PartitionVotes { model: TieModel },
    /// The instance election is the extended one; `spoilers` may be added
    /// to the registered candidates (at most `budget` unless unlimited).
    AddCandidates {
        unlimited: bool,
        budget: u64,
        spoilers: BTreeSet<CandidateId>,
    },
    /// Remove up to `budget` candidates other than the target.
    DeleteCandidates { budget: u64 },
    /// Split the candidates; the first group's survivors (plus the second
    /// group, or its survivors when `runoff`) meet in a final.
    PartitionCandidates { runoff: bool, model: TieModel },
}

#[derive(Debug, Clone)]
pub struct AttackInstance {
    pub rule: Rule,
    pub election: Election,
    pub target: CandidateId,
    pub kind: AttackKind,
    pub mode: Mode,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AttackWitness {
    /// Manipulator ballots, as a multiset.
    Ballots(Profile),
    /// (original ballot, recast ballot, how many voters).
    Bribes(Vec<(Vote, Vote, u64)>),
    AddedVotes(Profile),
    DeletedVotes(Profile),
    VotePartition {
        first: Profile,
        second: Profile,
    },
    AddedCandidates(BTreeSet<CandidateId>),
    DeletedCandidates(BTreeSet<CandidateId>),
    CandidatePartition {
        first: BTreeSet<CandidateId>,
        second: BTreeSet<CandidateId>,
    },
}

impl AttackWitness {
    /// One action per line, with candidates shown by name.
    pub fn render(&self, e: &Election) -> Vec<String> {
        let vote_text = |v: &Vote| -> String {
            v.ranking()
                .iter()
                .map(|&c| e.name(c))
                .collect::<Vec<_>>()
                .join(">")
        };
        let profile_lines = |prefix: &str, p: &Profile| -> Vec<String> {
            p.iter()
                .map(|(v, c)| format!("{prefix} {c}: {}", vote_text(v)))
                .collect()
        };
        let name_list = |set: &BTreeSet<CandidateId>| -> String {
            if set.is_empty() {
                "(none)".to_string()
            } else {
                set.iter().map(|&c| e.name(c)).collect::<Vec<_>>().join(",")
            }
        };
        match self {
            AttackWitness::Ballots(p) => profile_lines("cast", p),
            AttackWitness::Bribes(bribes) => bribes
                .iter()
                .map(|(from, to, count)| {
                    format!("bribe {count}: {} -> {}", vote_text(from), vote_text(to))
                })
                .collect(),
            AttackWitness::AddedVotes(p) => profile_lines("add", p),
            AttackWitness::DeletedVotes(p) => profile_lines("delete", p),
            AttackWitness::VotePartition { first, second } => {
                let mut lines = profile_lines("part-1", first);
                lines.extend(profile_lines("part-2", second));
                lines
            }
            AttackWitness::AddedCandidates(set) => set
                .iter()
                .map(|&c| format!("add-candidate {}", e.name(c)))
                .collect(),
            AttackWitness::DeletedCandidates(set) => set
                .iter()
                .map(|&c| format!("delete-candidate {}", e.name(c)))
                .collect(),
            AttackWitness::CandidatePartition { first, second } => {
                vec![
                    format!("group-1: {}", name_list(first)),
                    format!("group-2: {}", name_list(second)),
                ]
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttackResult {
    pub decision: bool,
    pub witness: Option<AttackWitness>,
}

impl AttackResult {
    fn no() -> Self {
        AttackResult {
            decision: false,
            witness: None,
        }
    }

    fn yes(witness: AttackWitness) -> Self {
        AttackResult {
            decision: true,
            witness: Some(witness),
        }
    }
}

pub fn solve(inst: &AttackInstance) -> AttackResult {
    match inst.mode {
        Mode::Constructive => solve_constructive(inst),
        Mode::Destructive => solve_destructive(inst),
    }
}

/// Destructive attacks reduce to constructive ones: make any rival the
/// winner. "Target loses" therefore means some other candidate becomes the
/// unique tie-broken winner.
pub fn solve_destructive(inst: &AttackInstance) -> AttackResult {
    for rival in inst.election.candidate_ids().filter(|&c| c != inst.target) {
        let guess = AttackInstance {
            target: rival,
            mode: Mode::Constructive,
            ..inst.clone()
        };
        let result = solve_constructive(&guess);
        if result.decision {
            return result;
        }
    }
    AttackResult::no()
}

fn solve_constructive(inst: &AttackInstance) -> AttackResult {
    let result = match &inst.kind {
        AttackKind::Manipulation { manipulators } => {
            solve_manipulation(&inst.rule, &inst.election, inst.target, *manipulators)
        }
        AttackKind::Bribery { budget } => {
            solve_bribery(&inst.rule, &inst.election, inst.target, *budget)
        }
        AttackKind::AddVotes {
            budget,
            unregistered,
        } => solve_control_add_votes(
            &inst.rule,
            &inst.election,
            inst.target,
            unregistered,
            *budget,
        ),
        AttackKind::DeleteVotes { budget } => {
            solve_control_delete_votes(&inst.rule, &inst.election, inst.target, *budget)
        }
        AttackKind::PartitionVotes { model } => {
            solve_control_partition_votes(&inst.rule, &inst.election, inst.target, *model)
        }
        AttackKind::AddCandidates { .. }
        | AttackKind::DeleteCandidates { .. }
        | AttackKind::PartitionCandidates { .. } => solve_candidate_control(inst),
    };
    debug_assert!(
        !result.decision || {
            let mut check = inst.clone();
            check.mode = Mode::Constructive;
            verify_witness(&check, result.witness.as_ref().unwrap())
        },
        "attack witness failed core-level re-verification"
    );
    result
}

/// Affine form over ILP variables, used to substitute attack variables for
/// the symbolic per-type totals of a winning condition.
#[derive(Debug, Clone, Default)]
struct Affine {
    terms: BTreeMap<usize, Rat>,
    constant: Rat,
}

impl Affine {
    fn constant(c: u64) -> Self {
        Affine {
            terms: BTreeMap::new(),
            constant: rat_u64(c),
        }
    }

    fn add(&mut self, var: usize, coeff: Rat) {
        let entry = self.terms.entry(var).or_insert_with(Rat::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&var);
        }
    }
}

/// Rewrites a system over vote-type totals into ILP constraints over the
/// attack variables, through the per-type substitution.
fn lower_system(system: &LinearSystem, subst: &[Affine]) -> Vec<Constraint> {
    system
        .constraints
        .iter()
        .map(|c| lower_constraint(c, subst))
        .collect()
}

fn lower_constraint(c: &LinConstraint, subst: &[Affine]) -> Constraint {
    let diff = c.lhs.minus(&c.rhs);
    let mut coeffs: BTreeMap<usize, Rat> = BTreeMap::new();
    let mut constant = diff.constant_part().clone();
    for (t, coeff) in diff.terms() {
        let affine = &subst[t];
        constant += coeff * &affine.constant;
        for (&v, ac) in &affine.terms {
            let entry = coeffs.entry(v).or_insert_with(Rat::zero);
            *entry += coeff * ac;
        }
    }
    Constraint {
        terms: coeffs.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        rel: c.rel,
        rhs: -constant,
    }
}

/// Tries each winning system in order; the first feasible one yields the
/// witness.
fn first_feasible(
    systems: impl Iterator<Item = LinearSystem>,
    variables: &[IlpVariable],
    shared: &[Constraint],
    subst: &[Affine],
) -> Option<Witness> {
    for system in systems {
        let mut constraints = shared.to_vec();
        constraints.extend(lower_system(&system, subst));
        let inst = IlpInstance {
            variables: variables.to_vec(),
            constraints,
        };
        if let Some(w) = solve_feasibility(&inst).witness() {
            return Some(w);
        }
    }
    None
}

fn type_counts(space: &VoteSpace, profile: &Profile) -> Vec<u64> {
    let mut counts = vec![0u64; space.len()];
    for (vote, count) in profile.iter() {
        counts[space.index_of(vote)] += count;
    }
    counts
}

fn sum_of(vars: impl Iterator<Item = usize>) -> Vec<(usize, Rat)> {
    vars.map(|v| (v, Rat::one())).collect()
}

/// Can `manipulators` extra ballots make the target win?
pub fn solve_manipulation(
    rule: &Rule,
    election: &Election,
    target: CandidateId,
    manipulators: u64,
) -> AttackResult {
    let m = election.num_candidates();
    let space = VoteSpace::new(m);
    let base = type_counts(&space, election.profile());

    // One variable per linear order: how many manipulators cast it.
    let variables: Vec<IlpVariable> = (0..space.len())
        .map(|_| IlpVariable {
            upper: manipulators,
        })
        .collect();
    let shared = vec![Constraint {
        terms: sum_of(0..space.len()),
        rel: Rel::Eq,
        rhs: rat_u64(manipulators),
    }];
    let subst: Vec<Affine> = (0..space.len())
        .map(|t| {
            let mut a = Affine::constant(base[t]);
            a.add(t, Rat::one());
            a
        })
        .collect();

    let systems = winning_systems(rule, m, target, election.tiebreak());
    match first_feasible(systems, &variables, &shared, &subst) {
        Some(w) => {
            let mut ballots = Profile::new();
            for (t, &count) in w.values.iter().enumerate() {
                ballots.add(space.vote(t).clone(), count);
            }
            AttackResult::yes(AttackWitness::Ballots(ballots))
        }
        None => AttackResult::no(),
    }
}

/// Can recasting at most `budget` existing ballots make the target win?
pub fn solve_bribery(
    rule: &Rule,
    election: &Election,
    target: CandidateId,
    budget: u64,
) -> AttackResult {
    let m = election.num_candidates();
    let space = VoteSpace::new(m);
    let base = type_counts(&space, election.profile());

    // One variable per (present source type, any other target type): how
    // many voters of the source type are recast to the target type.
    let sources: Vec<usize> = (0..space.len()).filter(|&t| base[t] > 0).collect();
    let mut variables = Vec::new();
    let mut var_meta = Vec::new(); // (source type, target type)
    for &s in &sources {
        for t in 0..space.len() {
            if t != s {
                variables.push(IlpVariable {
                    upper: base[s].min(budget),
                });
                var_meta.push((s, t));
            }
        }
    }

    let mut shared = vec![Constraint {
        terms: sum_of(0..variables.len()),
        rel: Rel::Le,
        rhs: rat_u64(budget),
    }];
    for &s in &sources {
        let outgoing = var_meta
            .iter()
            .enumerate()
            .filter(|(_, &(vs, _))| vs == s)
            .map(|(v, _)| v);
        shared.push(Constraint {
            terms: sum_of(outgoing),
            rel: Rel::Le,
            rhs: rat_u64(base[s]),
        });
    }

    let mut subst: Vec<Affine> = base.iter().map(|&c| Affine::constant(c)).collect();
    for (v, &(s, t)) in var_meta.iter().enumerate() {
        subst[s].add(v, -Rat::one());
        subst[t].add(v, Rat::one());
    }

    let systems = winning_systems(rule, m, target, election.tiebreak());
    match first_feasible(systems, &variables, &shared, &subst) {
        Some(w) => {
            let bribes: Vec<(Vote, Vote, u64)> = w
                .values
                .iter()
                .enumerate()
                .filter(|(_, &count)| count > 0)
                .map(|(v, &count)| {
                    let (s, t) = var_meta[v];
                    (space.vote(s).clone(), space.vote(t).clone(), count)
                })
                .collect();
            AttackResult::yes(AttackWitness::Bribes(bribes))
        }
        None => AttackResult::no(),
    }
}

/// Can registering at most `budget` unregistered ballots make the target
/// win?
pub fn solve_control_add_votes(
    rule: &Rule,
    election: &Election,
    target: CandidateId,
    unregistered: &Profile,
    budget: u64,
) -> AttackResult {
    let m = election.num_candidates();
    for (vote, _) in unregistered.iter() {
        assert_eq!(
            vote.num_candidates(),
            m,
            "unregistered votes over a different candidate set"
        );
    }
    let space = VoteSpace::new(m);
    let base = type_counts(&space, election.profile());
    let pool = type_counts(&space, unregistered);

    let mut variables = Vec::new();
    let mut var_meta = Vec::new(); // pool type
    for t in 0..space.len() {
        if pool[t] > 0 {
            variables.push(IlpVariable {
                upper: pool[t].min(budget),
            });
            var_meta.push(t);
        }
    }
    let shared = vec![Constraint {
        terms: sum_of(0..variables.len()),
        rel: Rel::Le,
        rhs: rat_u64(budget),
    }];
    let mut subst: Vec<Affine> = base.iter().map(|&c| Affine::constant(c)).collect();
    for (v, &t) in var_meta.iter().enumerate() {
        subst[t].add(v, Rat::one());
    }

    let systems = winning_systems(rule, m, target, election.tiebreak());
    match first_feasible(systems, &variables, &shared, &subst) {
        Some(w) => {
            let mut added = Profile::new();
            for (v, &count) in w.values.iter().enumerate() {
                added.add(space.vote(var_meta[v]).clone(), count);
            }
            AttackResult::yes(AttackWitness::AddedVotes(added))
        }
        None => AttackResult::no(),
    }
}

/// Can removing at most `budget` ballots make the target win?
pub fn solve_control_delete_votes(
    rule: &Rule,
    election: &Election,
    target: CandidateId,
    budget: u64,
) -> AttackResult {
    let m = election.num_candidates();
    let space = VoteSpace::new(m);
    let base = type_counts(&space, election.profile());

    let mut variables = Vec::new();
    let mut var_meta = Vec::new();
    for t in 0..space.len() {
        if base[t] > 0 {
            variables.push(IlpVariable {
                upper: base[t].min(budget),
            });
            var_meta.push(t);
        }
    }
    let shared = vec![Constraint {
        terms: sum_of(0..variables.len()),
        rel: Rel::Le,
        rhs: rat_u64(budget),
    }];
    let mut subst: Vec<Affine> = base.iter().map(|&c| Affine::constant(c)).collect();
    for (v, &t) in var_meta.iter().enumerate() {
        subst[t].add(v, -Rat::one());
    }

    let systems = winning_systems(rule, m, target, election.tiebreak());
    match first_feasible(systems, &variables, &shared, &subst) {
        Some(w) => {
            let mut deleted = Profile::new();
            for (v, &count) in w.values.iter().enumerate() {
                deleted.add(space.vote(var_meta[v]).clone(), count);
            }
            AttackResult::yes(AttackWitness::DeletedVotes(deleted))
        }
        None => AttackResult::no(),
    }
}

/// Outcome required of one side of a vote partition.
enum SideCondition {
    /// The side receives no votes at all.
    Empty,
    /// The side's co-winner set is exactly this set.
    Exact(BTreeSet<CandidateId>),
}

/// Can splitting the profile into two first-stage elections make the
/// target win the final? The final is the full profile restricted to the
/// promoted candidates.
pub fn solve_control_partition_votes(
    rule: &Rule,
    election: &Election,
    target: CandidateId,
    model: TieModel,
) -> AttackResult {
    let m = election.num_candidates();
    let space = VoteSpace::new(m);
    let base = type_counts(&space, election.profile());

    // One variable per present type: how many of its votes go to the first
    // part; the complement goes to the second.
    let mut variables = Vec::new();
    let mut var_meta = Vec::new();
    for t in 0..space.len() {
        if base[t] > 0 {
            variables.push(IlpVariable { upper: base[t] });
            var_meta.push(t);
        }
    }
    let mut subst_first: Vec<Affine> = (0..space.len()).map(|_| Affine::constant(0)).collect();
    let mut subst_second: Vec<Affine> = base.iter().map(|&c| Affine::constant(c)).collect();
    for (v, &t) in var_meta.iter().enumerate() {
        subst_first[t].add(v, Rat::one());
        subst_second[t].add(v, -Rat::one());
    }

    // By symmetry the target may be assumed to be promoted from the first
    // part: swapping the parts maps solutions to solutions.
    let all: Vec<CandidateId> = election.candidate_ids().collect();
    let candidate_subsets = |with: Option<CandidateId>| -> Vec<BTreeSet<CandidateId>> {
        let mut out = Vec::new();
        for mask in 0u32..(1 << m) {
            let set: BTreeSet<CandidateId> = all
                .iter()
                .copied()
                .filter(|c| mask & (1 << c.0) != 0)
                .collect();
            match with {
                Some(c) if !set.contains(&c) => continue,
                _ => out.push(set),
            }
        }
        out
    };

    // (first side condition, second side condition, promoted union).
    let mut scenarios: Vec<(SideCondition, SideCondition, BTreeSet<CandidateId>)> = Vec::new();
    match model {
        TieModel::Eliminate => {
            // First part promotes the target alone; the second promotes a
            // single rival (possibly the target again), or nobody: it is
            // empty or its co-winners tie.
            for rival in election.candidate_ids() {
                scenarios.push((
                    SideCondition::Exact([target].into()),
                    SideCondition::Exact([rival].into()),
                    [target, rival].into(),
                ));
            }
            scenarios.push((
                SideCondition::Exact([target].into()),
                SideCondition::Empty,
                [target].into(),
            ));
            for tied in candidate_subsets(None).into_iter().filter(|s| s.len() >= 2) {
                scenarios.push((
                    SideCondition::Exact([target].into()),
                    SideCondition::Exact(tied),
                    [target].into(),
                ));
            }
        }
        TieModel::Promote => {
            // Both co-winner sets are promoted wholesale; they may overlap.
            for first in candidate_subsets(Some(target)) {
                if first.is_empty() {
                    continue;
                }
                scenarios.push((
                    SideCondition::Exact(first.clone()),
                    SideCondition::Empty,
                    first.clone(),
                ));
                for second in candidate_subsets(None)
                    .into_iter()
                    .filter(|s| !s.is_empty())
                {
                    let mut union = first.clone();
                    union.extend(second.iter().copied());
                    scenarios.push((
                        SideCondition::Exact(first.clone()),
                        SideCondition::Exact(second),
                        union,
                    ));
                }
            }
        }
    }

    // The final stage runs over the full profile restricted to the
    // promoted candidates, so scenarios can be screened before any solving.
    let scenarios: Vec<(SideCondition, SideCondition)> = scenarios
        .into_iter()
        .filter(|(_, _, promoted)| evaluate_restricted(rule, election, promoted) == target)
        .map(|(a, b, _)| (a, b))
        .collect();

    let empty_side = vec![LinearSystem {
        constraints: vec![LinConstraint::new(
            LinExpr::votes_total(space.len()),
            Rel::Eq,
            LinExpr::zero(),
        )],
        description: "no votes on this side".into(),
    }];
    let mut exact_streams: BTreeMap<BTreeSet<CandidateId>, Vec<LinearSystem>> = BTreeMap::new();
    for (a, b) in &scenarios {
        for cond in [a, b] {
            if let SideCondition::Exact(set) = cond {
                exact_streams.entry(set.clone()).or_insert_with(|| {
                    cowinner_systems(rule, m, set, election.tiebreak()).collect()
                });
            }
        }
    }
    let side_systems = |cond: &SideCondition| -> &[LinearSystem] {
        match cond {
            SideCondition::Empty => &empty_side,
            SideCondition::Exact(set) => &exact_streams[set],
        }
    };

    for (first_cond, second_cond) in &scenarios {
        for sys1 in side_systems(first_cond) {
            let lowered1 = lower_system(sys1, &subst_first);
            for sys2 in side_systems(second_cond) {
                let mut constraints = lowered1.clone();
                constraints.extend(lower_system(&sys2, &subst_second));
                let inst = IlpInstance {
                    variables: variables.clone(),
                    constraints,
                };
                if let Some(w) = solve_feasibility(&inst).witness() {
                    let mut first = Profile::new();
                    let mut second = Profile::new();
                    for (v, &count) in w.values.iter().enumerate() {
                        let t = var_meta[v];
                        first.add(space.vote(t).clone(), count);
                        second.add(space.vote(t).clone(), base[t] - count);
                    }
                    return AttackResult::yes(AttackWitness::VotePartition { first, second });
                }
            }
        }
    }
    AttackResult::no()
}

/// The seven candidate-control variants, by direct enumeration of the
/// possible actions.
pub fn solve_candidate_control(inst: &AttackInstance) -> AttackResult {
    let rule = &inst.rule;
    let e = &inst.election;
    let target = inst.target;
    match &inst.kind {
        AttackKind::AddCandidates {
            unlimited,
            budget,
            spoilers,
        } => {
            assert!(
                !spoilers.contains(&target),
                "target must be a registered candidate"
            );
            let registered: BTreeSet<CandidateId> = e
                .candidate_ids()
                .filter(|c| !spoilers.contains(c))
                .collect();
            let pool: Vec<CandidateId> = spoilers.iter().copied().collect();
            let cap = if *unlimited {
                pool.len()
            } else {
                (*budget as usize).min(pool.len())
            };
            for size in 0..=cap {
                for chosen in combinations(&pool, size) {
                    let mut keep = registered.clone();
                    keep.extend(chosen.iter().copied());
                    if evaluate_restricted(rule, e, &keep) == target {
                        return AttackResult::yes(AttackWitness::AddedCandidates(
                            chosen.into_iter().collect(),
                        ));
                    }
                }
            }
            AttackResult::no()
        }
        AttackKind::DeleteCandidates { budget } => {
            let removable: Vec<CandidateId> = e.candidate_ids().filter(|&c| c != target).collect();
            let cap = (*budget as usize).min(removable.len());
            for size in 0..=cap {
                for chosen in combinations(&removable, size) {
                    let keep: BTreeSet<CandidateId> =
                        e.candidate_ids().filter(|c| !chosen.contains(c)).collect();
                    if evaluate_restricted(rule, e, &keep) == target {
                        return AttackResult::yes(AttackWitness::DeletedCandidates(
                            chosen.into_iter().collect(),
                        ));
                    }
                }
            }
            AttackResult::no()
        }
        AttackKind::PartitionCandidates { runoff, model } => {
            let m = e.num_candidates();
            let all: Vec<CandidateId> = e.candidate_ids().collect();
            for mask in 0u64..(1 << m) {
                let first: BTreeSet<CandidateId> = all
                    .iter()
                    .copied()
                    .filter(|c| mask & (1 << c.0) != 0)
                    .collect();
                let second: BTreeSet<CandidateId> =
                    all.iter().copied().filter(|c| !first.contains(c)).collect();
                let survivors1 = promoted_of_stage(rule, e, &first, *model);
                let finalists: BTreeSet<CandidateId> = if *runoff {
                    let survivors2 = promoted_of_stage(rule, e, &second, *model);
                    survivors1.union(&survivors2).copied().collect()
                } else {
                    survivors1.union(&second).copied().collect()
                };
                if finalists.is_empty() {
                    continue;
                }
                if evaluate_restricted(rule, e, &finalists) == target {
                    return AttackResult::yes(AttackWitness::CandidatePartition { first, second });
                }
            }
            AttackResult::no()
        }
        _ => unreachable!("vote attacks are handled by their own solvers"),
    }
}

/// First-stage survivors of a candidate group under the tie model.
fn promoted_of_stage(
    rule: &Rule,
    e: &Election,
    group: &BTreeSet<CandidateId>,
    model: TieModel,
) -> BTreeSet<CandidateId> {
    let winners = cowinners_restricted(rule, e, group);
    match model {
        TieModel::Promote => winners,
        TieModel::Eliminate => {
            if winners.len() == 1 {
                winners
            } else {
                BTreeSet::new()
            }
        }
    }
}

fn combinations(pool: &[CandidateId], size: usize) -> Vec<Vec<CandidateId>> {
    use itertools::Itertools;
    pool.iter().copied().combinations(size).collect()
}

/// Winner of the two-stage vote-partition election, if anyone is promoted.
pub fn two_stage_vote_partition_winner(
    rule: &Rule,
    election: &Election,
    first: &Profile,
    second: &Profile,
    model: TieModel,
) -> Option<CandidateId> {
    let promoted = |profile: &Profile| -> BTreeSet<CandidateId> {
        let winners = crate::rules::cowinners(rule, &election.with_profile(profile.clone()));
        match model {
            TieModel::Promote => winners,
            TieModel::Eliminate => {
                if winners.len() == 1 {
                    winners
                } else {
                    BTreeSet::new()
                }
            }
        }
    };
    let finalists: BTreeSet<CandidateId> =
        promoted(first).union(&promoted(second)).copied().collect();
    if finalists.is_empty() {
        None
    } else {
        Some(evaluate_restricted(rule, election, &finalists))
    }
}

/// Re-verifies a witness by applying it and re-running the direct winner
/// computation; no condition systems or integer programming involved.
pub fn verify_witness(inst: &AttackInstance, witness: &AttackWitness) -> bool {
    let rule = &inst.rule;
    let e = &inst.election;
    let achieved = |winner: CandidateId| match inst.mode {
        Mode::Constructive => winner == inst.target,
        Mode::Destructive => winner != inst.target,
    };
    match (&inst.kind, witness) {
        (AttackKind::Manipulation { manipulators }, AttackWitness::Ballots(ballots)) => {
            ballots.num_votes() == *manipulators
                && achieved(evaluate(rule, &e.with_profile(e.profile().union(ballots))))
        }
        (AttackKind::Bribery { budget }, AttackWitness::Bribes(bribes)) => {
            let total: u64 = bribes.iter().map(|(_, _, c)| c).sum();
            if total > *budget {
                return false;
            }
            let mut profile = e.profile().clone();
            for (from, to, count) in bribes {
                if profile.count(from) < *count {
                    return false;
                }
                profile.remove(from, *count);
                profile.add(to.clone(), *count);
            }
            achieved(evaluate(rule, &e.with_profile(profile)))
        }
        (
            AttackKind::AddVotes {
                budget,
                unregistered,
            },
            AttackWitness::AddedVotes(added),
        ) => {
            if added.num_votes() > *budget {
                return false;
            }
            if added.iter().any(|(v, c)| c > unregistered.count(v)) {
                return false;
            }
            achieved(evaluate(rule, &e.with_profile(e.profile().union(added))))
        }
        (AttackKind::DeleteVotes { budget }, AttackWitness::DeletedVotes(deleted)) => {
            if deleted.num_votes() > *budget {
                return false;
            }
            let mut profile = e.profile().clone();
            for (v, c) in deleted.iter() {
                if profile.count(v) < c {
                    return false;
                }
                profile.remove(v, c);
            }
            achieved(evaluate(rule, &e.with_profile(profile)))
        }
        (AttackKind::PartitionVotes { model }, AttackWitness::VotePartition { first, second }) => {
            if first.union(second) != *e.profile() {
                return false;
            }
            match two_stage_vote_partition_winner(rule, e, first, second, *model) {
                Some(w) => achieved(w),
                None => false,
            }
        }
        (
            AttackKind::AddCandidates {
                unlimited,
                budget,
                spoilers,
            },
            AttackWitness::AddedCandidates(added),
        ) => {
            if !added.is_subset(spoilers) {
                return false;
            }
            if !*unlimited && added.len() as u64 > *budget {
                return false;
            }
            let keep: BTreeSet<CandidateId> = e
                .candidate_ids()
                .filter(|c| !spoilers.contains(c) || added.contains(c))
                .collect();
            achieved(evaluate_restricted(rule, e, &keep))
        }
        (AttackKind::DeleteCandidates { budget }, AttackWitness::DeletedCandidates(deleted)) => {
            // The constructive goal is unreachable if the target itself is
            // deleted, so no explicit membership check is needed; under the
            // destructive reduction deleting the target is a legal action
            // of the constructive solve for the rival.
            if deleted.len() as u64 > *budget || deleted.len() == e.num_candidates() {
                return false;
            }
            let keep: BTreeSet<CandidateId> =
                e.candidate_ids().filter(|c| !deleted.contains(c)).collect();
            achieved(evaluate_restricted(rule, e, &keep))
        }
        (
            AttackKind::PartitionCandidates { runoff, model },
            AttackWitness::CandidatePartition { first, second },
        ) => {
            let all: BTreeSet<CandidateId> = e.candidate_ids().collect();
            if first.intersection(second).count() != 0
                || first.union(second).copied().collect::<BTreeSet<_>>() != all
            {
                return false;
            }
            let survivors1 = promoted_of_stage(rule, e, first, *model);
            let finalists: BTreeSet<CandidateId> = if *runoff {
                survivors1
                    .union(&promoted_of_stage(rule, e, second, *model))
                    .copied()
                    .collect()
            } else {
                survivors1.union(second).copied().collect()
            };
            !finalists.is_empty() && achieved(evaluate_restricted(rule, e, &finalists))
        }
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{oracle_solve, OracleBudget};
    use crate::testutil::{election, random_election, standard_rules, v};
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn instance(rule: Rule, e: Election, target: usize, kind: AttackKind) -> AttackInstance {
        AttackInstance {
            rule,
            election: e,
            target: CandidateId(target),
            kind,
            mode: Mode::Constructive,
        }
    }

    #[test]
    fn manipulation_examples() {
        // p=0 already wins: zero manipulators suffice, empty ballot set.
        let e = election(2, &[(&[0, 1], 1)], &[0, 1]);
        let r = solve_manipulation(&Rule::Plurality, &e, CandidateId(0), 0);
        assert!(r.decision);
        assert_eq!(r.witness, Some(AttackWitness::Ballots(Profile::new())));

        // 2x a>p, tiebreak (p, a): two manipulators casting p>a force the
        // tie p wins; one is not enough.
        let e = election(2, &[(&[1, 0], 2)], &[0, 1]);
        let r = solve_manipulation(&Rule::Plurality, &e, CandidateId(0), 2);
        assert!(r.decision);
        match r.witness.unwrap() {
            AttackWitness::Ballots(b) => assert_eq!(b.count(&v(&[0, 1])), 2),
            w => panic!("unexpected witness {w:?}"),
        }
        assert!(!solve_manipulation(&Rule::Plurality, &e, CandidateId(0), 1).decision);
    }

    #[test]
    fn bribery_examples() {
        // Zero budget: succeeds exactly when p already wins.
        let winning = election(2, &[(&[0, 1], 1)], &[0, 1]);
        let r = solve_bribery(&Rule::Plurality, &winning, CandidateId(0), 0);
        assert!(r.decision);
        assert_eq!(r.witness, Some(AttackWitness::Bribes(vec![])));
        let losing = election(2, &[(&[1, 0], 1)], &[1, 0]);
        assert!(!solve_bribery(&Rule::Plurality, &losing, CandidateId(0), 0).decision);

        // p=0, a=1, b=2: 2x a>b>p, 1x p>b>a; one bribe flips it for p.
        let e = election(3, &[(&[1, 2, 0], 2), (&[0, 2, 1], 1)], &[0, 1, 2]);
        assert!(solve_bribery(&Rule::Plurality, &e, CandidateId(0), 1).decision);

        // 4x a>b>p, 1x p>b>a: one bribe cannot close the gap.
        let e = election(3, &[(&[1, 2, 0], 4), (&[0, 2, 1], 1)], &[0, 1, 2]);
        assert!(!solve_bribery(&Rule::Plurality, &e, CandidateId(0), 1).decision);
    }

    #[test]
    fn add_votes_examples() {
        // Registered 2x a>p, unregistered pool 3x p>a, tiebreak (p, a).
        let e = election(2, &[(&[1, 0], 2)], &[0, 1]);
        let pool = Profile::from_entries([(v(&[0, 1]), 3)]);
        let r = solve_control_add_votes(&Rule::Plurality, &e, CandidateId(0), &pool, 2);
        assert!(r.decision);
        match r.witness.unwrap() {
            AttackWitness::AddedVotes(a) => assert_eq!(a.num_votes(), 2),
            w => panic!("unexpected witness {w:?}"),
        }
        assert!(!solve_control_add_votes(&Rule::Plurality, &e, CandidateId(0), &pool, 1).decision);

        // Zero budget: decided by the registered election alone.
        let r = solve_control_add_votes(&Rule::Plurality, &e, CandidateId(1), &pool, 0);
        assert!(r.decision);
    }

    #[test]
    fn delete_votes_examples() {
        // 2x a>p, 1x p>a, tiebreak (p, a): deleting one a>p ties it up.
        let e = election(2, &[(&[1, 0], 2), (&[0, 1], 1)], &[0, 1]);
        let r = solve_control_delete_votes(&Rule::Plurality, &e, CandidateId(0), 1);
        assert!(r.decision);
        match r.witness.unwrap() {
            AttackWitness::DeletedVotes(d) => assert_eq!(d.count(&v(&[1, 0])), 1),
            w => panic!("unexpected witness {w:?}"),
        }

        // Zero budget and p not winning.
        assert!(!solve_control_delete_votes(&Rule::Plurality, &e, CandidateId(0), 0).decision);

        // Veto, 1x a>p, tiebreak (p, a): deleting everything leaves the
        // empty profile, which elects the tie-break-first candidate.
        let e = election(2, &[(&[1, 0], 1)], &[0, 1]);
        let r = solve_control_delete_votes(&Rule::Veto, &e, CandidateId(0), 1);
        assert!(r.decision);
        match r.witness.unwrap() {
            AttackWitness::DeletedVotes(d) => assert_eq!(d.num_votes(), 1),
            w => panic!("unexpected witness {w:?}"),
        }
    }

    #[test]
    fn partition_votes_examples() {
        // 1x p>a: put the vote in the first part, second stays empty.
        let e = election(2, &[(&[0, 1], 1)], &[0, 1]);
        let r = solve_control_partition_votes(
            &Rule::Plurality,
            &e,
            CandidateId(0),
            TieModel::Eliminate,
        );
        assert!(r.decision);
        match r.witness.unwrap() {
            AttackWitness::VotePartition { first, second } => {
                assert_eq!(first.num_votes(), 1);
                assert!(second.is_empty());
            }
            w => panic!("unexpected witness {w:?}"),
        }

        // 3x a>p with a tie-break-preferred: a wins every nonempty
        // sub-election and the final.
        let e = election(2, &[(&[1, 0], 3)], &[1, 0]);
        assert!(
            !solve_control_partition_votes(
                &Rule::Plurality,
                &e,
                CandidateId(0),
                TieModel::Eliminate
            )
            .decision
        );

        // Ties-promote, p the full-profile winner: the trivial partition.
        let e = election(2, &[(&[0, 1], 2), (&[1, 0], 1)], &[1, 0]);
        assert!(
            solve_control_partition_votes(&Rule::Plurality, &e, CandidateId(0), TieModel::Promote)
                .decision
        );
    }

    #[test]
    fn candidate_control_examples() {
        // p=0, a=1, b=2: 2x a>p>b, 2x b>p>a, 1x p>a>b; deleting a hands p
        // three of five first places.
        let e = election(
            3,
            &[(&[1, 0, 2], 2), (&[2, 0, 1], 2), (&[0, 1, 2], 1)],
            &[0, 1, 2],
        );
        let inst = instance(
            Rule::Plurality,
            e.clone(),
            0,
            AttackKind::DeleteCandidates { budget: 1 },
        );
        let r = solve_candidate_control(&inst);
        assert!(r.decision);
        assert_eq!(
            r.witness,
            Some(AttackWitness::DeletedCandidates([CandidateId(1)].into()))
        );

        // Zero deletion budget and p losing.
        let inst = instance(
            Rule::Plurality,
            e.clone(),
            0,
            AttackKind::DeleteCandidates { budget: 0 },
        );
        assert!(!solve_candidate_control(&inst).decision);

        // Adding with zero budget succeeds exactly when p wins among the
        // registered candidates: here the b voters fall back to p, giving
        // p three of five registered first places.
        let inst = instance(
            Rule::Plurality,
            e,
            0,
            AttackKind::AddCandidates {
                unlimited: false,
                budget: 0,
                spoilers: [CandidateId(2)].into(),
            },
        );
        let r = solve_candidate_control(&inst);
        assert!(r.decision);
        assert_eq!(
            r.witness,
            Some(AttackWitness::AddedCandidates(BTreeSet::new()))
        );

        // p=0, a=1, b=2 with 2x a>b>p, 1x p>b>a: a wins with or without
        // the spoiler b, so adding cannot help.
        let hopeless = election(3, &[(&[1, 2, 0], 2), (&[0, 2, 1], 1)], &[0, 1, 2]);
        for budget in [0, 1] {
            let inst = instance(
                Rule::Plurality,
                hopeless.clone(),
                0,
                AttackKind::AddCandidates {
                    unlimited: false,
                    budget,
                    spoilers: [CandidateId(2)].into(),
                },
            );
            assert!(!solve_candidate_control(&inst).decision);
        }

        // A spoiler that splits a's support: p=0, a=1, d=2 with 2x d>a>p
        // and 2x p>a>d, tiebreak (a, p, d). Registered only: a and p tie at
        // two and a is preferred. With d added: p and d tie, p preferred.
        let ext = election(3, &[(&[2, 1, 0], 2), (&[0, 1, 2], 2)], &[1, 0, 2]);
        let inst = instance(
            Rule::Plurality,
            ext,
            0,
            AttackKind::AddCandidates {
                unlimited: false,
                budget: 1,
                spoilers: [CandidateId(2)].into(),
            },
        );
        let r = solve_candidate_control(&inst);
        assert!(r.decision);
        assert_eq!(
            r.witness,
            Some(AttackWitness::AddedCandidates([CandidateId(2)].into()))
        );
    }

    #[test]
    fn candidate_partition_runoff_and_tie_models() {
        // p=0, a=1, b=2; plurality, 2x a>b>p, 2x b>a>p, 1x p>a>b,
        // 1x p>b>a, tiebreak (a, b, p). Everyone ties at 2 in the full
        // election and a takes it on priority.
        let e = election(
            3,
            &[
                (&[1, 2, 0], 2),
                (&[2, 1, 0], 2),
                (&[0, 1, 2], 1),
                (&[0, 2, 1], 1),
            ],
            &[1, 2, 0],
        );
        // Non-runoff TE: {a, b} vs {p}: the first stage ties 3-3, both are
        // eliminated, p alone reaches the final.
        let inst = instance(
            Rule::Plurality,
            e.clone(),
            0,
            AttackKind::PartitionCandidates {
                runoff: false,
                model: TieModel::Eliminate,
            },
        );
        let r = solve_candidate_control(&inst);
        assert!(r.decision);
        match r.witness.unwrap() {
            AttackWitness::CandidatePartition { first, second } => {
                assert!(first.contains(&CandidateId(1)) == first.contains(&CandidateId(2)));
                let union: BTreeSet<CandidateId> = first.union(&second).copied().collect();
                assert_eq!(union.len(), 3);
            }
            w => panic!("unexpected witness {w:?}"),
        }
        // Under ties-promote both a and b survive any grouping, and they
        // beat p in every final that contains either of them.
        let inst = instance(
            Rule::Plurality,
            e,
            0,
            AttackKind::PartitionCandidates {
                runoff: false,
                model: TieModel::Promote,
            },
        );
        assert!(!solve_candidate_control(&inst).decision);
    }

    #[test]
    fn destructive_examples() {
        // Destructive manipulation with no manipulators: succeeds iff the
        // rival already wins.
        let e = election(2, &[(&[1, 0], 1)], &[0, 1]);
        let inst = AttackInstance {
            rule: Rule::Plurality,
            election: e,
            target: CandidateId(0),
            kind: AttackKind::Manipulation { manipulators: 0 },
            mode: Mode::Destructive,
        };
        assert!(solve(&inst).decision);

        // Destructive bribery: 2x p>a, tiebreak (a, p); one bribe makes a
        // tie, which a wins.
        let e = election(2, &[(&[0, 1], 2)], &[1, 0]);
        let inst = AttackInstance {
            rule: Rule::Plurality,
            election: e.clone(),
            target: CandidateId(0),
            kind: AttackKind::Bribery { budget: 1 },
            mode: Mode::Destructive,
        };
        assert!(solve(&inst).decision);

        // Zero budget while p currently wins: no way to unseat.
        let inst = AttackInstance {
            rule: Rule::Plurality,
            election: e,
            target: CandidateId(0),
            kind: AttackKind::Bribery { budget: 0 },
            mode: Mode::Destructive,
        };
        assert!(!solve(&inst).decision);
    }

    fn random_kind(rng: &mut impl Rng, m: usize) -> AttackKind {
        match rng.gen_range(0..6) {
            0 => AttackKind::Manipulation {
                manipulators: rng.gen_range(0..=2),
            },
            1 => AttackKind::Bribery {
                budget: rng.gen_range(0..=2),
            },
            2 => {
                let pool = random_election(rng, m, 3).profile().clone();
                AttackKind::AddVotes {
                    budget: rng.gen_range(0..=2),
                    unregistered: pool,
                }
            }
            3 => AttackKind::DeleteVotes {
                budget: rng.gen_range(0..=2),
            },
            4 => AttackKind::PartitionVotes {
                model: TieModel::Eliminate,
            },
            _ => AttackKind::PartitionVotes {
                model: TieModel::Promote,
            },
        }
    }

    #[test]
    fn smoke_oracle_equivalence_m3() {
        // The full sweep lives in the acceptance suite; this is a quick
        // cross-section over all rules and kinds.
        let mut rng = ChaCha8Rng::seed_from_u64(51);
        let rules = standard_rules();
        for case in 0..120 {
            let e = random_election(&mut rng, 3, 5);
            let rule = rules[rng.gen_range(0..rules.len())].clone();
            let kind = random_kind(&mut rng, 3);
            let inst = AttackInstance {
                rule,
                election: e,
                target: CandidateId(rng.gen_range(0..3)),
                kind,
                mode: Mode::Constructive,
            };
            let main = solve(&inst);
            let reference = oracle_solve(&inst, OracleBudget::default()).expect("tiny instance");
            assert_eq!(
                main.decision, reference.decision,
                "case {case}: {:?} disagrees on {:?}",
                inst.rule, inst
            );
            if main.decision {
                assert!(
                    verify_witness(&inst, main.witness.as_ref().unwrap()),
                    "case {case}"
                );
                assert!(
                    verify_witness(&inst, reference.witness.as_ref().unwrap()),
                    "case {case}"
                );
            }
        }
    }

    #[test]
    fn oracle_equivalence_m4_score_rules() {
        let mut rng = ChaCha8Rng::seed_from_u64(52);
        let rules = [Rule::Borda, Rule::Maximin, Rule::copeland_half()];
        for _ in 0..12 {
            let e = random_election(&mut rng, 4, 5);
            let rule = rules[rng.gen_range(0..rules.len())].clone();
            let kind = random_kind(&mut rng, 4);
            let inst = AttackInstance {
                rule,
                election: e,
                target: CandidateId(rng.gen_range(0..4)),
                kind,
                mode: Mode::Constructive,
            };
            let main = solve(&inst);
            let reference = oracle_solve(&inst, OracleBudget::default()).expect("tiny instance");
            assert_eq!(main.decision, reference.decision, "{:?}", inst);
        }
    }

    #[test]
    fn ranked_pairs_attacks_match_the_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(54);
        for _ in 0..40 {
            let e = random_election(&mut rng, 3, 4);
            let kind = random_kind(&mut rng, 3);
            let inst = AttackInstance {
                rule: Rule::RankedPairs,
                election: e,
                target: CandidateId(rng.gen_range(0..3)),
                kind,
                mode: Mode::Constructive,
            };
            let main = solve(&inst);
            let reference = oracle_solve(&inst, OracleBudget::default()).expect("tiny instance");
            assert_eq!(main.decision, reference.decision, "{inst:?}");
        }
    }

    #[test]
    fn destructive_candidate_control() {
        // p=0 wins plurality outright; under the guessing reduction the
        // constructive solve for a may delete p, after which a wins 3-1.
        let e = election(
            3,
            &[(&[0, 1, 2], 2), (&[1, 2, 0], 1), (&[2, 1, 0], 1)],
            &[0, 1, 2],
        );
        assert_eq!(evaluate(&Rule::Plurality, &e), CandidateId(0));
        let inst = AttackInstance {
            rule: Rule::Plurality,
            election: e.clone(),
            target: CandidateId(0),
            kind: AttackKind::DeleteCandidates { budget: 1 },
            mode: Mode::Destructive,
        };
        let r = solve(&inst);
        assert!(r.decision);
        assert!(verify_witness(&inst, r.witness.as_ref().unwrap()));

        let hopeless = AttackInstance {
            kind: AttackKind::DeleteCandidates { budget: 0 },
            ..inst
        };
        assert!(!solve(&hopeless).decision);
    }

    #[test]
    fn unlimited_add_candidates() {
        // Extended election p=0, a=1, d=2, e=3: a leads among {p, a}; both
        // spoilers together split a's support below p.
        let ext = election(
            4,
            &[(&[2, 1, 0, 3], 2), (&[3, 1, 0, 2], 2), (&[0, 1, 2, 3], 3)],
            &[1, 0, 2, 3],
        );
        let keep_registered: BTreeSet<CandidateId> = [CandidateId(0), CandidateId(1)].into();
        assert_eq!(
            evaluate_restricted(&Rule::Plurality, &ext, &keep_registered),
            CandidateId(1)
        );
        let inst = AttackInstance {
            rule: Rule::Plurality,
            election: ext,
            target: CandidateId(0),
            kind: AttackKind::AddCandidates {
                unlimited: true,
                budget: 0,
                spoilers: [CandidateId(2), CandidateId(3)].into(),
            },
            mode: Mode::Constructive,
        };
        let r = solve(&inst);
        assert!(r.decision);
        match r.witness.unwrap() {
            AttackWitness::AddedCandidates(added) => assert!(!added.is_empty()),
            w => panic!("unexpected witness {w:?}"),
        }
    }

    #[test]
    fn partition_promote_needs_overlapping_cowinner_sets() {
        // Bucklin, candidates (c0, c1, c2), target c2, tiebreak (c1, c2,
        // c0), votes 2x c0>c2>c1, 1x c1>c0>c2, 1x c2>c1>c0. Splitting off
        // one c0>c2>c1 vote promotes {c0} from that side and all three
        // (a full tie) from the other; the final over everyone elects c2.
        // Every winning split has overlapping promoted sets, so an
        // enumeration restricted to disjoint co-winner pairs answers NO.
        let e = election(
            3,
            &[(&[0, 2, 1], 2), (&[1, 0, 2], 1), (&[2, 1, 0], 1)],
            &[1, 2, 0],
        );
        let r =
            solve_control_partition_votes(&Rule::Bucklin, &e, CandidateId(2), TieModel::Promote);
        assert!(r.decision);
        let inst = AttackInstance {
            rule: Rule::Bucklin,
            election: e,
            target: CandidateId(2),
            kind: AttackKind::PartitionVotes {
                model: TieModel::Promote,
            },
            mode: Mode::Constructive,
        };
        assert!(verify_witness(&inst, r.witness.as_ref().unwrap()));
        let reference = oracle_solve(&inst, OracleBudget::default()).expect("tiny instance");
        assert!(reference.decision);
    }

    #[test]
    fn larger_counts_and_budgets_m2() {
        // Two candidates only, but bigger multiplicities and budgets than
        // the m=3 sweeps use, to stress wider variable boxes.
        let mut rng = ChaCha8Rng::seed_from_u64(55);
        let rules = [
            Rule::Plurality,
            Rule::Borda,
            Rule::Stv,
            Rule::copeland_half(),
        ];
        for _ in 0..60 {
            let e = random_election(&mut rng, 2, 12);
            let rule = rules[rng.gen_range(0..rules.len())].clone();
            let kind = match rng.gen_range(0..4) {
                0 => AttackKind::Manipulation {
                    manipulators: rng.gen_range(0..=4),
                },
                1 => AttackKind::Bribery {
                    budget: rng.gen_range(0..=4),
                },
                2 => AttackKind::DeleteVotes {
                    budget: rng.gen_range(0..=4),
                },
                _ => AttackKind::PartitionVotes {
                    model: TieModel::Promote,
                },
            };
            let inst = AttackInstance {
                rule,
                election: e,
                target: CandidateId(rng.gen_range(0..2)),
                kind,
                mode: Mode::Constructive,
            };
            let main = solve(&inst);
            let reference = oracle_solve(&inst, OracleBudget::default()).expect("m=2 stays small");
            assert_eq!(main.decision, reference.decision, "{inst:?}");
            if main.decision {
                assert!(verify_witness(&inst, main.witness.as_ref().unwrap()));
            }
        }
    }

    #[test]
    fn budget_monotonicity() {
        let mut rng = ChaCha8Rng::seed_from_u64(53);
        for _ in 0..60 {
            let e = random_election(&mut rng, 3, 5);
            let target = CandidateId(rng.gen_range(0..3));
            let rule = Rule::Plurality;
            let kappa = rng.gen_range(0..=1);
            let pool = random_election(&mut rng, 3, 3).profile().clone();
            let pairs = [
                (
                    AttackKind::Bribery { budget: kappa },
                    AttackKind::Bribery { budget: kappa + 1 },
                ),
                (
                    AttackKind::AddVotes {
                        budget: kappa,
                        unregistered: pool.clone(),
                    },
                    AttackKind::AddVotes {
                        budget: kappa + 1,
                        unregistered: pool.clone(),
                    },
                ),
                (
                    AttackKind::DeleteVotes { budget: kappa },
                    AttackKind::DeleteVotes { budget: kappa + 1 },
                ),
            ];
            for (small, large) in pairs {
                let a = solve(&instance(rule.clone(), e.clone(), target.0, small));
                let b = solve(&instance(rule.clone(), e.clone(), target.0, large));
                assert!(!a.decision || b.decision, "budget increase lost a YES");
            }
        }
    }
}
