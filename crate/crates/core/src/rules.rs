//! Voting rule descriptors and direct (reference) winner computations.
//!
//! Every rule first yields a co-winner set; the unique winner is the
//! highest-priority co-winner under the election's tie-break order.
//! Multiround rules (STV, Nanson, Baldwin) break in-round ties with the
//! same order by eliminating the lowest-priority tied candidate, so their
//! co-winner set is always a singleton.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num::{BigInt, One, Signed, Zero};

use crate::election::{CandidateId, Election};
use crate::Rat;

#[derive(Debug, Clone, PartialEq)]
pub enum Rule {
    Borda,
    Plurality,
    Veto,
    /// r-Approval: the top r positions score 1.
    Approval(usize),
    /// Explicit nonincreasing scoring vector of length m.
    Positional(Vec<Rat>),
    /// Copeland with tie value alpha in [0, 1].
    Copeland(Rat),
    Maximin,
    Bucklin,
    Stv,
    Nanson,
    Baldwin,
    RankedPairs,
}

impl Rule {
    pub fn copeland_half() -> Rule {
        Rule::Copeland(Rat::new(BigInt::one(), BigInt::from(2)))
    }

    /// The scoring vector for positional rules, `None` for the rest.
    pub fn scoring_vector(&self, m: usize) -> Option<Vec<Rat>> {
        let one = Rat::one;
        let zero = Rat::zero;
        match self {
            Rule::Borda => Some(
                (0..m)
                    .rev()
                    .map(|i| Rat::from_integer(BigInt::from(i)))
                    .collect(),
            ),
            Rule::Plurality => Some(
                (0..m)
                    .map(|i| if i == 0 { one() } else { zero() })
                    .collect(),
            ),
            Rule::Veto => Some(
                (0..m)
                    .map(|i| if i + 1 == m { zero() } else { one() })
                    .collect(),
            ),
            Rule::Approval(r) => Some(
                (0..m)
                    .map(|i| if i < *r { one() } else { zero() })
                    .collect(),
            ),
            Rule::Positional(v) => Some(v.clone()),
            _ => None,
        }
    }

    pub fn is_positional(&self) -> bool {
        matches!(
            self,
            Rule::Borda | Rule::Plurality | Rule::Veto | Rule::Approval(_) | Rule::Positional(_)
        )
    }

    /// Checks the rule's parameters against a candidate count.
    pub fn validate_for(&self, m: usize) -> Result<(), String> {
        match self {
            Rule::Approval(r) => {
                if *r < 1 || *r > m {
                    return Err(format!("approval width {r} out of range 1..={m}"));
                }
            }
            Rule::Positional(v) => {
                if v.len() != m {
                    return Err(format!("scoring vector length {} != {m}", v.len()));
                }
                if v.windows(2).any(|w| w[0] < w[1]) {
                    return Err("scoring vector must be nonincreasing".into());
                }
            }
            Rule::Copeland(a) => {
                if a.is_negative() || *a > Rat::one() {
                    return Err(format!("copeland alpha {a} out of range [0, 1]"));
                }
            }
            _ => {}
        }
        Ok(())
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::Borda => write!(f, "borda"),
            Rule::Plurality => write!(f, "plurality"),
            Rule::Veto => write!(f, "veto"),
            Rule::Approval(r) => write!(f, "approval:{r}"),
            Rule::Positional(v) => {
                write!(f, "positional:")?;
                for (i, x) in v.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{x}")?;
                }
                Ok(())
            }
            Rule::Copeland(a) => write!(f, "copeland:{}/{}", a.numer(), a.denom()),
            Rule::Maximin => write!(f, "maximin"),
            Rule::Bucklin => write!(f, "bucklin"),
            Rule::Stv => write!(f, "stv"),
            Rule::Nanson => write!(f, "nanson"),
            Rule::Baldwin => write!(f, "baldwin"),
            Rule::RankedPairs => write!(f, "rankedpairs"),
        }
    }
}

impl FromStr for Rule {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "borda" => return Ok(Rule::Borda),
            "plurality" => return Ok(Rule::Plurality),
            "veto" => return Ok(Rule::Veto),
            "maximin" => return Ok(Rule::Maximin),
            "bucklin" => return Ok(Rule::Bucklin),
            "stv" => return Ok(Rule::Stv),
            "nanson" => return Ok(Rule::Nanson),
            "baldwin" => return Ok(Rule::Baldwin),
            "rankedpairs" => return Ok(Rule::RankedPairs),
            _ => {}
        }
        if let Some(r) = s.strip_prefix("approval:") {
            let r: usize = r
                .parse()
                .map_err(|_| format!("bad approval width in `{s}`"))?;
            return Ok(Rule::Approval(r));
        }
        if let Some(frac) = s.strip_prefix("copeland:") {
            let (num, den) = match frac.split_once('/') {
                Some((n, d)) => (n, d),
                None => (frac, "1"),
            };
            let num: i64 = num
                .parse()
                .map_err(|_| format!("bad copeland alpha in `{s}`"))?;
            let den: i64 = den
                .parse()
                .map_err(|_| format!("bad copeland alpha in `{s}`"))?;
            if den == 0 {
                return Err(format!("zero denominator in `{s}`"));
            }
            let alpha = Rat::new(BigInt::from(num), BigInt::from(den));
            let rule = Rule::Copeland(alpha);
            rule.validate_for(usize::MAX).map_err(|e| e.to_string())?;
            return Ok(rule);
        }
        Err(format!(
            "unknown rule `{s}` (expected borda|plurality|veto|approval:R|copeland:NUM/DEN|maximin|bucklin|stv|nanson|baldwin|rankedpairs)"
        ))
    }
}

/// N[c][c'] = number of votes preferring c to c'.
pub fn pairwise_counts(e: &Election) -> Vec<Vec<u64>> {
    let m = e.num_candidates();
    let mut n = vec![vec![0u64; m]; m];
    for (v, cnt) in e.profile().iter() {
        let r = v.ranking();
        for i in 0..m {
            for j in (i + 1)..m {
                n[r[i].0][r[j].0] += cnt;
            }
        }
    }
    n
}

fn positional_scores(lambda: &[Rat], e: &Election) -> Vec<Rat> {
    let m = e.num_candidates();
    let mut scores = vec![Rat::zero(); m];
    for (v, cnt) in e.profile().iter() {
        let cnt = Rat::from_integer(BigInt::from(cnt));
        for (pos, c) in v.ranking().iter().enumerate() {
            scores[c.0] += &lambda[pos] * &cnt;
        }
    }
    scores
}

fn argmax_set(scores: &[Rat]) -> BTreeSet<CandidateId> {
    let best = scores.iter().max().expect("no candidates");
    scores
        .iter()
        .enumerate()
        .filter(|(_, s)| *s == best)
        .map(|(i, _)| CandidateId(i))
        .collect()
}

fn maximin_scores(e: &Election) -> Vec<u64> {
    let m = e.num_candidates();
    let n = pairwise_counts(e);
    (0..m)
        .map(|c| {
            (0..m)
                .filter(|&o| o != c)
                .map(|o| n[c][o])
                .min()
                .unwrap_or(u64::MAX)
        })
        .collect()
}

fn copeland_scores(alpha: &Rat, e: &Election) -> Vec<Rat> {
    let m = e.num_candidates();
    let n = pairwise_counts(e);
    let mut scores = vec![Rat::zero(); m];
    for c in 0..m {
        for o in 0..m {
            if o == c {
                continue;
            }
            if n[c][o] > n[o][c] {
                scores[c] += Rat::one();
            } else if n[c][o] == n[o][c] {
                scores[c] += alpha;
            }
        }
    }
    scores
}

/// Bucklin level of each candidate: the smallest i such that more than half
/// of the votes rank the candidate within the top i positions. `None` only
/// for an empty profile.
fn bucklin_levels(e: &Election) -> Vec<Option<usize>> {
    let m = e.num_candidates();
    let n = e.num_votes();
    let mut cumulative = vec![vec![0u64; m + 1]; m];
    for (v, cnt) in e.profile().iter() {
        for (pos, c) in v.ranking().iter().enumerate() {
            for lvl in (pos + 1)..=m {
                cumulative[c.0][lvl] += cnt;
            }
        }
    }
    (0..m)
        .map(|c| (1..=m).find(|&lvl| 2 * cumulative[c][lvl] > n))
        .collect()
}

/// Top-choice counts within a surviving set.
fn top_counts(e: &Election, survivors: &BTreeSet<CandidateId>) -> Vec<u64> {
    let m = e.num_candidates();
    let mut counts = vec![0u64; m];
    for (v, cnt) in e.profile().iter() {
        counts[v.top_among(survivors).0] += cnt;
    }
    counts
}

/// Borda scores within a surviving set, from pairwise counts.
fn restricted_borda(n: &[Vec<u64>], survivors: &BTreeSet<CandidateId>) -> Vec<(CandidateId, u64)> {
    survivors
        .iter()
        .map(|&c| {
            (
                c,
                survivors
                    .iter()
                    .filter(|&&o| o != c)
                    .map(|&o| n[c.0][o.0])
                    .sum(),
            )
        })
        .collect()
}

fn stv_winner(e: &Election, majority_stop: bool) -> CandidateId {
    let n = e.num_votes();
    let mut survivors: BTreeSet<CandidateId> = e.candidate_ids().collect();
    loop {
        if survivors.len() == 1 {
            return *survivors.iter().next().unwrap();
        }
        let counts = top_counts(e, &survivors);
        if majority_stop {
            if let Some(&w) = survivors.iter().find(|c| 2 * counts[c.0] > n) {
                return w;
            }
        }
        let min = survivors.iter().map(|c| counts[c.0]).min().unwrap();
        let victim = e
            .tiebreak()
            .last_of(survivors.iter().copied().filter(|c| counts[c.0] == min));
        survivors.remove(&victim);
    }
}

fn baldwin_winner(e: &Election) -> CandidateId {
    let n = pairwise_counts(e);
    let mut survivors: BTreeSet<CandidateId> = e.candidate_ids().collect();
    while survivors.len() > 1 {
        let scores = restricted_borda(&n, &survivors);
        let min = scores.iter().map(|(_, s)| *s).min().unwrap();
        let victim = e
            .tiebreak()
            .last_of(scores.iter().filter(|(_, s)| *s == min).map(|(c, _)| *c));
        survivors.remove(&victim);
    }
    *survivors.iter().next().unwrap()
}

fn nanson_winner(e: &Election) -> CandidateId {
    let n = pairwise_counts(e);
    let mut survivors: BTreeSet<CandidateId> = e.candidate_ids().collect();
    while survivors.len() > 1 {
        let scores = restricted_borda(&n, &survivors);
        let total: u64 = scores.iter().map(|(_, s)| *s).sum();
        let k = survivors.len() as u64;
        // score < avg, cleared of the division: k * score < total.
        let eliminated: Vec<CandidateId> = scores
            .iter()
            .filter(|(_, s)| k * *s < total)
            .map(|(c, _)| *c)
            .collect();
        if eliminated.is_empty() {
            // All scores equal the average: terminate on the tie-break.
            return e.tiebreak().first_of(survivors.iter().copied());
        }
        for c in eliminated {
            survivors.remove(&c);
        }
    }
    *survivors.iter().next().unwrap()
}

/// Locks directed majority edges in the given order, skipping any edge that
/// would close a cycle, and returns the sources of the resulting digraph.
pub(crate) fn lock_and_sources(m: usize, edges: &[(usize, usize)]) -> BTreeSet<CandidateId> {
    let mut reach = vec![vec![false; m]; m];
    for (i, row) in reach.iter_mut().enumerate() {
        row[i] = true;
    }
    let mut has_incoming = vec![false; m];
    for &(w, l) in edges {
        if reach[l][w] {
            continue; // would close a cycle
        }
        has_incoming[l] = true;
        for i in 0..m {
            if reach[i][w] {
                for j in 0..m {
                    if reach[l][j] {
                        reach[i][j] = true;
                    }
                }
            }
        }
    }
    (0..m)
        .filter(|&c| !has_incoming[c])
        .map(CandidateId)
        .collect()
}

/// Sources of the ranked-pairs locked digraph. Majorities are locked by
/// decreasing margin; margin ties lock the lexicographically smaller
/// (winner, loser) id pair first; pairwise ties are never locked.
pub fn ranked_pairs_sources(pairwise: &[Vec<Rat>]) -> BTreeSet<CandidateId> {
    let m = pairwise.len();
    let mut majorities: Vec<(Rat, usize, usize)> = Vec::new();
    for w in 0..m {
        for l in 0..m {
            if w != l && pairwise[w][l] > pairwise[l][w] {
                majorities.push((&pairwise[w][l] - &pairwise[l][w], w, l));
            }
        }
    }
    majorities.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    let edges: Vec<(usize, usize)> = majorities.into_iter().map(|(_, w, l)| (w, l)).collect();
    lock_and_sources(m, &edges)
}

/// The co-winner set before any final tie-breaking. Empty profiles have an
/// empty co-winner set (this is what two-stage control relies on).
pub fn cowinners(rule: &Rule, e: &Election) -> BTreeSet<CandidateId> {
    if e.profile().is_empty() {
        return BTreeSet::new();
    }
    let m = e.num_candidates();
    if let Some(lambda) = rule.scoring_vector(m) {
        return argmax_set(&positional_scores(&lambda, e));
    }
    match rule {
        Rule::Maximin => {
            let scores = maximin_scores(e);
            let best = *scores.iter().max().unwrap();
            (0..m)
                .filter(|&c| scores[c] == best)
                .map(CandidateId)
                .collect()
        }
        Rule::Copeland(alpha) => argmax_set(&copeland_scores(alpha, e)),
        Rule::Bucklin => {
            let levels = bucklin_levels(e);
            let best = levels
                .iter()
                .flatten()
                .min()
                .copied()
                .expect("nonempty profile");
            (0..m)
                .filter(|&c| levels[c] == Some(best))
                .map(CandidateId)
                .collect()
        }
        Rule::Stv => [stv_winner(e, true)].into(),
        Rule::Nanson => [nanson_winner(e)].into(),
        Rule::Baldwin => [baldwin_winner(e)].into(),
        Rule::RankedPairs => {
            let n = pairwise_counts(e);
            let rat: Vec<Vec<Rat>> = n
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|&x| Rat::from_integer(BigInt::from(x)))
                        .collect()
                })
                .collect();
            ranked_pairs_sources(&rat)
        }
        _ => unreachable!("positional rules handled above"),
    }
}

/// The unique tie-broken winner. An empty profile elects the
/// tie-break-first candidate (degenerate convention).
pub fn evaluate(rule: &Rule, e: &Election) -> CandidateId {
    if e.profile().is_empty() {
        return e.tiebreak().first_of(e.candidate_ids());
    }
    e.tiebreak().first_of(cowinners(rule, e))
}

/// Winner of the election restricted to `keep`, reported as an id of the
/// original election.
pub fn evaluate_restricted(rule: &Rule, e: &Election, keep: &BTreeSet<CandidateId>) -> CandidateId {
    let kept: Vec<CandidateId> = e.candidate_ids().filter(|c| keep.contains(c)).collect();
    let winner = evaluate(rule, &e.restrict(keep));
    kept[winner.0]
}

/// Co-winners of the election restricted to `keep`, as original ids. An
/// empty `keep` set yields an empty co-winner set.
pub fn cowinners_restricted(
    rule: &Rule,
    e: &Election,
    keep: &BTreeSet<CandidateId>,
) -> BTreeSet<CandidateId> {
    if keep.is_empty() {
        return BTreeSet::new();
    }
    let kept: Vec<CandidateId> = e.candidate_ids().filter(|c| keep.contains(c)).collect();
    cowinners(rule, &e.restrict(keep))
        .into_iter()
        .map(|c| kept[c.0])
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::election::{Profile, TieBreak, Vote};
    use crate::testutil::{all_rules, election, random_election};
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn election_from(m: usize, profile: Profile, priority: &[usize]) -> Election {
        let names = (0..m).map(|i| format!("c{i}")).collect();
        Election::new(
            names,
            profile,
            TieBreak::new(priority.iter().map(|&i| CandidateId(i)).collect()),
        )
    }

    #[test]
    fn borda_scores_pick_unique_winner() {
        // 2x a>b>p over (a=0, b=1, p=2): scores a=4, b=2, p=0.
        let e = election(3, &[(&[0, 1, 2], 2)], &[0, 1, 2]);
        assert_eq!(evaluate(&Rule::Borda, &e), CandidateId(0));
        assert_eq!(cowinners(&Rule::Borda, &e), [CandidateId(0)].into());
    }

    #[test]
    fn plurality_tie_resolved_by_priority() {
        // 1x a>p, 1x p>a over (p=0, a=1), tiebreak (p, a).
        let e = election(2, &[(&[1, 0], 1), (&[0, 1], 1)], &[0, 1]);
        assert_eq!(evaluate(&Rule::Plurality, &e), CandidateId(0));
        assert_eq!(
            cowinners(&Rule::Plurality, &e),
            [CandidateId(0), CandidateId(1)].into()
        );
    }

    #[test]
    fn single_candidate_always_wins() {
        let e = election(1, &[(&[0], 2)], &[0]);
        for rule in all_rules() {
            if rule.validate_for(1).is_ok() {
                assert_eq!(evaluate(&rule, &e), CandidateId(0));
            }
        }
    }

    #[test]
    fn copeland_two_candidates() {
        let e = election(2, &[(&[0, 1], 1)], &[1, 0]);
        assert_eq!(
            cowinners(&Rule::copeland_half(), &e),
            [CandidateId(0)].into()
        );
    }

    #[test]
    fn empty_profile_conventions() {
        let e = election(3, &[], &[2, 0, 1]);
        for rule in all_rules() {
            assert!(cowinners(&rule, &e).is_empty());
            assert_eq!(evaluate(&rule, &e), CandidateId(2));
        }
    }

    #[test]
    fn evaluate_is_a_cowinner() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..300 {
            let m = rng.gen_range(1..=4);
            let e = random_election(&mut rng, m, 8);
            if e.profile().is_empty() {
                continue;
            }
            for rule in all_rules() {
                if rule.validate_for(m).is_err() {
                    continue;
                }
                let cw = cowinners(&rule, &e);
                assert!(!cw.is_empty());
                assert!(cw.contains(&evaluate(&rule, &e)));
            }
        }
    }

    #[test]
    fn positional_neutrality_under_relabelling() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..200 {
            let m = rng.gen_range(2..=4);
            let e = random_election(&mut rng, m, 6);
            let mut perm: Vec<usize> = (0..m).collect();
            perm.shuffle(&mut rng);
            // Relabel candidates by perm in both profile and tie-break.
            let mut profile = Profile::new();
            for (vote, cnt) in e.profile().iter() {
                let relabelled: Vec<usize> = vote.ranking().iter().map(|c| perm[c.0]).collect();
                profile.add(Vote::from_indices(&relabelled), cnt);
            }
            let priority: Vec<usize> = e.tiebreak().priority().iter().map(|c| perm[c.0]).collect();
            let relabelled = election_from(m, profile, &priority);
            for rule in [Rule::Plurality, Rule::Borda, Rule::Veto] {
                let w = evaluate(&rule, &e);
                assert_eq!(evaluate(&rule, &relabelled), CandidateId(perm[w.0]));
            }
        }
    }

    #[test]
    fn compression_is_order_insensitive() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..100 {
            let m = rng.gen_range(2..=4);
            let e = random_election(&mut rng, m, 8);
            let mut expanded: Vec<Vote> = Vec::new();
            for (vote, cnt) in e.profile().iter() {
                for _ in 0..cnt {
                    expanded.push(vote.clone());
                }
            }
            expanded.shuffle(&mut rng);
            let rebuilt =
                e.with_profile(Profile::from_entries(expanded.into_iter().map(|v| (v, 1))));
            for rule in all_rules() {
                if rule.validate_for(m).is_ok() {
                    assert_eq!(evaluate(&rule, &e), evaluate(&rule, &rebuilt));
                }
            }
        }
    }

    #[test]
    fn stv_majority_stop_matches_full_elimination() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        for _ in 0..400 {
            let m = rng.gen_range(1..=5);
            let e = random_election(&mut rng, m, 8);
            if e.profile().is_empty() {
                continue;
            }
            assert_eq!(stv_winner(&e, true), stv_winner(&e, false));
        }
    }

    #[test]
    fn rule_strings_round_trip() {
        for s in [
            "borda",
            "plurality",
            "veto",
            "approval:2",
            "copeland:1/2",
            "maximin",
            "bucklin",
            "stv",
            "nanson",
            "baldwin",
            "rankedpairs",
        ] {
            let rule: Rule = s.parse().unwrap();
            assert_eq!(rule.to_string(), s);
        }
        assert!("schulze".parse::<Rule>().is_err());
        assert!("copeland:3/2".parse::<Rule>().is_err());
    }
}
