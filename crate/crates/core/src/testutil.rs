//! Helpers shared by the unit tests.

use rand::prelude::*;

use crate::election::{CandidateId, Election, Profile, TieBreak, Vote};
use crate::rules::Rule;

pub fn v(r: &[usize]) -> Vote {
    Vote::from_indices(r)
}

pub fn election(m: usize, entries: &[(&[usize], u64)], priority: &[usize]) -> Election {
    let names = (0..m).map(|i| format!("c{i}")).collect();
    let profile = Profile::from_entries(entries.iter().map(|(r, c)| (v(r), *c)));
    Election::new(
        names,
        profile,
        TieBreak::new(priority.iter().map(|&i| CandidateId(i)).collect()),
    )
}

pub fn random_election(rng: &mut impl Rng, m: usize, max_n: u64) -> Election {
    let orders = Vote::all(m);
    let n = rng.gen_range(0..=max_n);
    let mut profile = Profile::new();
    for _ in 0..n {
        profile.add(orders[rng.gen_range(0..orders.len())].clone(), 1);
    }
    let mut priority: Vec<usize> = (0..m).collect();
    priority.shuffle(rng);
    let names = (0..m).map(|i| format!("c{i}")).collect();
    Election::new(
        names,
        profile,
        TieBreak::new(priority.into_iter().map(CandidateId).collect()),
    )
}

/// The ten rule instances exercised throughout the test suites.
pub fn standard_rules() -> Vec<Rule> {
    vec![
        Rule::Plurality,
        Rule::Veto,
        Rule::Approval(2),
        Rule::Borda,
        Rule::copeland_half(),
        Rule::Maximin,
        Rule::Bucklin,
        Rule::Stv,
        Rule::Nanson,
        Rule::Baldwin,
    ]
}

pub fn all_rules() -> Vec<Rule> {
    let mut rules = standard_rules();
    rules.push(Rule::RankedPairs);
    rules
}
