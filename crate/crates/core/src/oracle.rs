//! Brute-force reference solvers for the vote attacks on tiny instances.
//!
//! Ground truth for the system-based solvers: plain enumeration of every
//! possible action, evaluated with the direct winner computations. Keep
//! this module free of the gsr, conditions and ilp machinery; it may only
//! use the core election model, so that agreement between the two paths
//! actually means something.

use std::collections::BTreeSet;
use std::fmt;

use itertools::Itertools;

use crate::attacks::{AttackInstance, AttackKind, AttackResult, AttackWitness, Mode, TieModel};
use crate::election::{CandidateId, Election, Profile, Vote};
use crate::rules::{cowinners, evaluate, evaluate_restricted, Rule};

#[derive(Debug, Clone, Copy)]
pub struct OracleBudget {
    /// Cap on the number of enumerated states.
    pub max_states: u64,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget {
            max_states: 2_000_000,
        }
    }
}

/// Why the oracle did not decide; distinct from a NO answer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Refusal {
    TooManyStates { estimated: u128, cap: u64 },
    UnsupportedKind,
}

impl fmt::Display for Refusal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Refusal::TooManyStates { estimated, cap } => {
                write!(f, "state space ~{estimated} exceeds the cap of {cap}")
            }
            Refusal::UnsupportedKind => {
                write!(f, "the oracle only covers vote attacks")
            }
        }
    }
}

/// Exhaustive decision of a vote-attack instance. Destructive instances
/// loop the constructive search over every rival.
pub fn oracle_solve(inst: &AttackInstance, budget: OracleBudget) -> Result<AttackResult, Refusal> {
    match inst.mode {
        Mode::Constructive => solve_constructive(inst, budget),
        Mode::Destructive => {
            for rival in inst.election.candidate_ids().filter(|&c| c != inst.target) {
                let guess = AttackInstance {
                    target: rival,
                    mode: Mode::Constructive,
                    ..inst.clone()
                };
                let result = solve_constructive(&guess, budget)?;
                if result.decision {
                    return Ok(result);
                }
            }
            Ok(AttackResult {
                decision: false,
                witness: None,
            })
        }
    }
}

fn yes(witness: AttackWitness) -> Result<AttackResult, Refusal> {
    Ok(AttackResult {
        decision: true,
        witness: Some(witness),
    })
}

fn no() -> Result<AttackResult, Refusal> {
    Ok(AttackResult {
        decision: false,
        witness: None,
    })
}

fn guard(estimated: u128, budget: OracleBudget) -> Result<(), Refusal> {
    if estimated > budget.max_states as u128 {
        Err(Refusal::TooManyStates {
            estimated,
            cap: budget.max_states,
        })
    } else {
        Ok(())
    }
}

/// Multisets of size k over n types: C(n + k - 1, k), saturating.
fn multisets(n: u128, k: u128) -> u128 {
    if n == 0 {
        return if k == 0 { 1 } else { 0 };
    }
    let mut result: u128 = 1;
    for i in 0..k {
        result = match result.checked_mul(n + i) {
            Some(r) => r / (i + 1),
            None => return u128::MAX,
        };
    }
    result
}

/// Exact count of vectors (k_i) with k_i <= caps[i] and total <= budget,
/// each entry weighted multiplicatively by `weight(k_i)`.
fn count_bounded_vectors(caps: &[u64], budget: u64, weight: impl Fn(u64) -> u128) -> u128 {
    let mut dp = vec![0u128; budget as usize + 1];
    dp[0] = 1;
    for &cap in caps {
        let mut next = vec![0u128; budget as usize + 1];
        for (used, &ways) in dp.iter().enumerate() {
            if ways == 0 {
                continue;
            }
            for k in 0..=cap.min(budget - used as u64) {
                let cell = &mut next[used + k as usize];
                *cell = cell.saturating_add(ways.saturating_mul(weight(k)));
            }
        }
        dp = next;
    }
    dp.iter().fold(0u128, |a, &b| a.saturating_add(b))
}

fn solve_constructive(
    inst: &AttackInstance,
    budget: OracleBudget,
) -> Result<AttackResult, Refusal> {
    let rule = &inst.rule;
    let e = &inst.election;
    let target = inst.target;
    match &inst.kind {
        AttackKind::Manipulation { manipulators } => {
            manipulation(rule, e, target, *manipulators, budget)
        }
        AttackKind::Bribery { budget: kappa } => bribery(rule, e, target, *kappa, budget),
        AttackKind::AddVotes {
            budget: kappa,
            unregistered,
        } => add_votes(rule, e, target, unregistered, *kappa, budget),
        AttackKind::DeleteVotes { budget: kappa } => delete_votes(rule, e, target, *kappa, budget),
        AttackKind::PartitionVotes { model } => partition_votes(rule, e, target, *model, budget),
        _ => Err(Refusal::UnsupportedKind),
    }
}

fn manipulation(
    rule: &Rule,
    e: &Election,
    target: CandidateId,
    t: u64,
    budget: OracleBudget,
) -> Result<AttackResult, Refusal> {
    let orders = Vote::all(e.num_candidates());
    guard(multisets(orders.len() as u128, t as u128), budget)?;
    for chosen in (0..orders.len()).combinations_with_replacement(t as usize) {
        let mut ballots = Profile::new();
        for idx in chosen {
            ballots.add(orders[idx].clone(), 1);
        }
        let modified = e.with_profile(e.profile().union(&ballots));
        if evaluate(rule, &modified) == target {
            return yes(AttackWitness::Ballots(ballots));
        }
    }
    no()
}

fn bribery(
    rule: &Rule,
    e: &Election,
    target: CandidateId,
    kappa: u64,
    budget: OracleBudget,
) -> Result<AttackResult, Refusal> {
    let orders = Vote::all(e.num_candidates());
    let sources: Vec<(Vote, u64)> = e.profile().iter().map(|(v, c)| (v.clone(), c)).collect();
    // Per source: some of its voters recast to a multiset of other orders.
    let caps: Vec<u64> = sources.iter().map(|(_, c)| (*c).min(kappa)).collect();
    let estimated = count_bounded_vectors(&caps, kappa, |k| {
        multisets(orders.len() as u128 - 1, k as u128)
    });
    guard(estimated, budget)?;

    fn recurse(
        rule: &Rule,
        e: &Election,
        target: CandidateId,
        orders: &[Vote],
        sources: &[(Vote, u64)],
        idx: usize,
        left: u64,
        profile: &mut Profile,
        bribes: &mut Vec<(Vote, Vote, u64)>,
    ) -> bool {
        if idx == sources.len() {
            return evaluate(rule, &e.with_profile(profile.clone())) == target;
        }
        let (source, count) = &sources[idx];
        let cap = (*count).min(left);
        let targets: Vec<&Vote> = orders.iter().filter(|o| *o != source).collect();
        for k in 0..=cap {
            for chosen in (0..targets.len()).combinations_with_replacement(k as usize) {
                profile.remove(source, k);
                let mut recast: Vec<(Vote, Vote, u64)> = Vec::new();
                for (key, group) in &chosen.iter().chunk_by(|&&i| i) {
                    let n = group.count() as u64;
                    profile.add(targets[key].clone(), n);
                    recast.push((source.clone(), targets[key].clone(), n));
                }
                bribes.extend(recast.iter().cloned());
                if recurse(
                    rule,
                    e,
                    target,
                    orders,
                    sources,
                    idx + 1,
                    left - k,
                    profile,
                    bribes,
                ) {
                    return true;
                }
                for _ in 0..recast.len() {
                    bribes.pop();
                }
                for (_, to, n) in &recast {
                    profile.remove(to, *n);
                }
                profile.add(source.clone(), k);
            }
        }
        false
    }

    let mut profile = e.profile().clone();
    let mut bribes = Vec::new();
    if recurse(
        rule,
        e,
        target,
        &orders,
        &sources,
        0,
        kappa,
        &mut profile,
        &mut bribes,
    ) {
        yes(AttackWitness::Bribes(bribes))
    } else {
        no()
    }
}

fn add_votes(
    rule: &Rule,
    e: &Election,
    target: CandidateId,
    unregistered: &Profile,
    kappa: u64,
    budget: OracleBudget,
) -> Result<AttackResult, Refusal> {
    let pool: Vec<(Vote, u64)> = unregistered.iter().map(|(v, c)| (v.clone(), c)).collect();
    let caps: Vec<u64> = pool.iter().map(|(_, c)| *c).collect();
    guard(count_bounded_vectors(&caps, kappa, |_| 1), budget)?;

    fn recurse(
        rule: &Rule,
        e: &Election,
        target: CandidateId,
        pool: &[(Vote, u64)],
        idx: usize,
        left: u64,
        added: &mut Profile,
    ) -> bool {
        if idx == pool.len() {
            let modified = e.with_profile(e.profile().union(added));
            return evaluate(rule, &modified) == target;
        }
        let (vote, count) = &pool[idx];
        for k in 0..=(*count).min(left) {
            added.add(vote.clone(), k);
            if recurse(rule, e, target, pool, idx + 1, left - k, added) {
                return true;
            }
            added.remove(vote, k);
        }
        false
    }

    let mut added = Profile::new();
    if recurse(rule, e, target, &pool, 0, kappa, &mut added) {
        yes(AttackWitness::AddedVotes(added))
    } else {
        no()
    }
}

fn delete_votes(
    rule: &Rule,
    e: &Election,
    target: CandidateId,
    kappa: u64,
    budget: OracleBudget,
) -> Result<AttackResult, Refusal> {
    let present: Vec<(Vote, u64)> = e.profile().iter().map(|(v, c)| (v.clone(), c)).collect();
    let caps: Vec<u64> = present.iter().map(|(_, c)| *c).collect();
    guard(count_bounded_vectors(&caps, kappa, |_| 1), budget)?;

    fn recurse(
        rule: &Rule,
        e: &Election,
        target: CandidateId,
        present: &[(Vote, u64)],
        idx: usize,
        left: u64,
        deleted: &mut Profile,
        remaining: &mut Profile,
    ) -> bool {
        if idx == present.len() {
            return evaluate(rule, &e.with_profile(remaining.clone())) == target;
        }
        let (vote, count) = &present[idx];
        for k in 0..=(*count).min(left) {
            deleted.add(vote.clone(), k);
            remaining.remove(vote, k);
            if recurse(
                rule,
                e,
                target,
                present,
                idx + 1,
                left - k,
                deleted,
                remaining,
            ) {
                return true;
            }
            remaining.add(vote.clone(), k);
            deleted.remove(vote, k);
        }
        false
    }

    let mut deleted = Profile::new();
    let mut remaining = e.profile().clone();
    if recurse(
        rule,
        e,
        target,
        &present,
        0,
        kappa,
        &mut deleted,
        &mut remaining,
    ) {
        yes(AttackWitness::DeletedVotes(deleted))
    } else {
        no()
    }
}

fn partition_votes(
    rule: &Rule,
    e: &Election,
    target: CandidateId,
    model: TieModel,
    budget: OracleBudget,
) -> Result<AttackResult, Refusal> {
    let present: Vec<(Vote, u64)> = e.profile().iter().map(|(v, c)| (v.clone(), c)).collect();
    let mut estimated: u128 = 1;
    for (_, count) in &present {
        estimated = estimated.saturating_mul((*count + 1) as u128);
    }
    guard(estimated, budget)?;

    // Promoted winners of one sub-election under the tie model.
    let promoted = |profile: &Profile| -> BTreeSet<CandidateId> {
        let winners = cowinners(rule, &e.with_profile(profile.clone()));
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

    fn recurse(
        present: &[(Vote, u64)],
        idx: usize,
        first: &mut Profile,
        second: &mut Profile,
        check: &mut dyn FnMut(&Profile, &Profile) -> bool,
    ) -> bool {
        if idx == present.len() {
            return check(first, second);
        }
        let (vote, count) = &present[idx];
        for k in 0..=*count {
            first.add(vote.clone(), k);
            second.add(vote.clone(), count - k);
            if recurse(present, idx + 1, first, second, check) {
                return true;
            }
            first.remove(vote, k);
            second.remove(vote, count - k);
        }
        false
    }

    let mut first = Profile::new();
    let mut second = Profile::new();
    let mut check = |first: &Profile, second: &Profile| -> bool {
        let finalists: BTreeSet<CandidateId> =
            promoted(first).union(&promoted(second)).copied().collect();
        if finalists.is_empty() {
            return false;
        }
        evaluate_restricted(rule, e, &finalists) == target
    };
    if recurse(&present, 0, &mut first, &mut second, &mut check) {
        yes(AttackWitness::VotePartition { first, second })
    } else {
        no()
    }
}
