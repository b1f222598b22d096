//! Score-vector view of the voting rules.
//!
//! Each rule scores a ballot into a k-dimensional rational vector; summing
//! over the profile gives the total score vector, and a decision function
//! picks the winner from it. Also here: the weak-order signature of a
//! vector (which pairwise component comparisons hold) and the enumeration
//! of all possible signatures.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use num::{BigInt, Zero};

use crate::election::{CandidateId, Profile, TieBreak, Vote};
use crate::rules::{ranked_pairs_sources, Rule};
use crate::{rat_u64, Rat};

/// What one vector component measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Component {
    /// Positional score of a candidate.
    Score(CandidateId),
    /// Number of votes preferring the first candidate to the second.
    Pairwise(CandidateId, CandidateId),
    /// Number of votes ranking the candidate within the top `i` positions.
    TopWithin(CandidateId, usize),
    /// Number of votes whose favourite inside the subset (bitmask over
    /// candidate ids) is the candidate.
    TopOfSubset(CandidateId, u32),
}

#[derive(Debug, Clone)]
pub struct GsrDescriptor {
    rule: Rule,
    m: usize,
    labels: Vec<Component>,
    lambda: Option<Vec<Rat>>,
}

impl GsrDescriptor {
    pub fn rule(&self) -> &Rule {
        &self.rule
    }

    pub fn num_candidates(&self) -> usize {
        self.m
    }

    pub fn order(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[Component] {
        &self.labels
    }

    fn pairwise_index(&self, c: usize, o: usize) -> usize {
        debug_assert_ne!(c, o);
        c * (self.m - 1) + if o > c { o - 1 } else { o }
    }

    fn level_index(&self, c: usize, level: usize) -> usize {
        c * self.m + (level - 1)
    }

    /// Index of the TopOfSubset component for candidate `c` and subset
    /// `mask` (which must contain `c`), within the STV component block.
    fn subset_index(&self, c: usize, mask: u32) -> usize {
        debug_assert!(mask & (1 << c) != 0);
        let below = mask & ((1 << c) - 1);
        let above = mask >> (c + 1);
        let compact = (below | (above << c)) as usize;
        self.m * (self.m - 1) + c * (1 << (self.m - 1)) + compact
    }
}

fn pairwise_labels(m: usize) -> Vec<Component> {
    let mut labels = Vec::with_capacity(m * (m - 1));
    for c in 0..m {
        for o in 0..m {
            if o != c {
                labels.push(Component::Pairwise(CandidateId(c), CandidateId(o)));
            }
        }
    }
    labels
}

/// Builds the component space for a rule over m candidates.
///
/// Positional rules have order m; Maximin, Copeland, Ranked pairs, Nanson
/// and Baldwin use the m(m-1) pairwise counts; Bucklin uses m^2 level
/// indicators; STV uses the pairwise counts plus the m*2^(m-1)
/// top-of-subset counts.
pub fn descriptor(rule: &Rule, m: usize) -> GsrDescriptor {
    assert!(m >= 1);
    rule.validate_for(m)
        .expect("invalid rule for this candidate count");
    let lambda = rule.scoring_vector(m);
    let labels = if lambda.is_some() {
        (0..m).map(|c| Component::Score(CandidateId(c))).collect()
    } else {
        match rule {
            Rule::Maximin
            | Rule::Copeland(_)
            | Rule::RankedPairs
            | Rule::Nanson
            | Rule::Baldwin => pairwise_labels(m),
            Rule::Bucklin => {
                let mut labels = Vec::with_capacity(m * m);
                for c in 0..m {
                    for level in 1..=m {
                        labels.push(Component::TopWithin(CandidateId(c), level));
                    }
                }
                labels
            }
            Rule::Stv => {
                let mut labels = pairwise_labels(m);
                for c in 0..m {
                    for compact in 0..(1u32 << (m - 1)) {
                        let below = compact & ((1 << c) - 1);
                        let above = compact >> c;
                        let mask = below | (above << (c + 1)) | (1 << c);
                        labels.push(Component::TopOfSubset(CandidateId(c), mask));
                    }
                }
                labels
            }
            _ => unreachable!("positional rules handled above"),
        }
    };
    GsrDescriptor {
        rule: rule.clone(),
        m,
        labels,
        lambda,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScoreVector {
    pub values: Vec<Rat>,
}

impl ScoreVector {
    pub fn zero(k: usize) -> Self {
        ScoreVector {
            values: vec![Rat::zero(); k],
        }
    }
}

/// Per-ballot component value; always 0/1 except for positional scores.
pub fn component_value(desc: &GsrDescriptor, component: &Component, vote: &Vote) -> Rat {
    let indicator = |b: bool| if b { crate::rat(1) } else { Rat::zero() };
    match component {
        Component::Score(c) => {
            desc.lambda.as_ref().expect("positional rule")[vote.position_of(*c)].clone()
        }
        Component::Pairwise(c, o) => indicator(vote.prefers(*c, *o)),
        Component::TopWithin(c, level) => indicator(vote.position_of(*c) < *level),
        Component::TopOfSubset(c, mask) => {
            let top = vote
                .ranking()
                .iter()
                .find(|x| mask & (1 << x.0) != 0)
                .expect("nonempty subset");
            indicator(top == c)
        }
    }
}

pub fn score_vector(desc: &GsrDescriptor, vote: &Vote) -> ScoreVector {
    assert_eq!(vote.num_candidates(), desc.m);
    ScoreVector {
        values: desc
            .labels
            .iter()
            .map(|l| component_value(desc, l, vote))
            .collect(),
    }
}

pub fn total_score(desc: &GsrDescriptor, profile: &Profile) -> ScoreVector {
    let mut total = ScoreVector::zero(desc.order());
    for (vote, count) in profile.iter() {
        let per_vote = score_vector(desc, vote);
        let count = rat_u64(count);
        for (t, v) in total.values.iter_mut().zip(per_vote.values) {
            *t += v * &count;
        }
    }
    total
}

pub(crate) fn argmax_first(
    values: impl Iterator<Item = (CandidateId, Rat)>,
    tiebreak: &TieBreak,
) -> CandidateId {
    let mut best: Option<(CandidateId, Rat)> = None;
    for (c, s) in values {
        best = match best {
            None => Some((c, s)),
            Some((bc, bs)) => {
                if s > bs || (s == bs && tiebreak.prefers(c, bc)) {
                    Some((c, s))
                } else {
                    Some((bc, bs))
                }
            }
        };
    }
    best.expect("no candidates").0
}

/// Decides the winner from a total score vector. `n` is the number of votes
/// that produced the total; it feeds the majority thresholds of Bucklin and
/// STV, which are not expressible as component comparisons.
pub fn decide(
    desc: &GsrDescriptor,
    total: &ScoreVector,
    n: u64,
    tiebreak: &TieBreak,
) -> CandidateId {
    assert_eq!(
        total.values.len(),
        desc.order(),
        "score vector length mismatch"
    );
    let m = desc.m;
    let vals = &total.values;
    if desc.lambda.is_some() {
        return argmax_first((0..m).map(|c| (CandidateId(c), vals[c].clone())), tiebreak);
    }
    match &desc.rule {
        Rule::Maximin => argmax_first(
            (0..m).map(|c| {
                let min = (0..m)
                    .filter(|&o| o != c)
                    .map(|o| vals[desc.pairwise_index(c, o)].clone())
                    .min()
                    .unwrap_or_else(|| rat_u64(n));
                (CandidateId(c), min)
            }),
            tiebreak,
        ),
        Rule::Copeland(alpha) => argmax_first(
            (0..m).map(|c| {
                let mut score = Rat::zero();
                for o in 0..m {
                    if o == c {
                        continue;
                    }
                    let cv = &vals[desc.pairwise_index(c, o)];
                    let ov = &vals[desc.pairwise_index(o, c)];
                    match cv.cmp(ov) {
                        Ordering::Greater => score += crate::rat(1),
                        Ordering::Equal => score += alpha,
                        Ordering::Less => {}
                    }
                }
                (CandidateId(c), score)
            }),
            tiebreak,
        ),
        Rule::RankedPairs => {
            let matrix: Vec<Vec<Rat>> = (0..m)
                .map(|c| {
                    (0..m)
                        .map(|o| {
                            if o == c {
                                Rat::zero()
                            } else {
                                vals[desc.pairwise_index(c, o)].clone()
                            }
                        })
                        .collect()
                })
                .collect();
            tiebreak.first_of(ranked_pairs_sources(&matrix))
        }
        Rule::Bucklin => {
            let half = Rat::new(BigInt::from(n), BigInt::from(2));
            let level = |c: usize| (1..=m).find(|&l| vals[desc.level_index(c, l)] > half);
            let levels: Vec<Option<usize>> = (0..m).map(level).collect();
            match levels.iter().flatten().min() {
                Some(&best) => {
                    tiebreak.first_of((0..m).filter(|&c| levels[c] == Some(best)).map(CandidateId))
                }
                None => tiebreak.first_of((0..m).map(CandidateId)),
            }
        }
        Rule::Stv => {
            let half = Rat::new(BigInt::from(n), BigInt::from(2));
            let mut survivors: BTreeSet<CandidateId> = (0..m).map(CandidateId).collect();
            loop {
                if survivors.len() == 1 {
                    return *survivors.iter().next().unwrap();
                }
                let mask: u32 = survivors.iter().map(|c| 1 << c.0).sum();
                let count = |c: &CandidateId| vals[desc.subset_index(c.0, mask)].clone();
                if let Some(&w) = survivors.iter().find(|c| count(c) > half) {
                    return w;
                }
                let min = survivors.iter().map(&count).min().unwrap();
                let victim =
                    tiebreak.last_of(survivors.iter().copied().filter(|c| count(c) == min));
                survivors.remove(&victim);
            }
        }
        Rule::Nanson | Rule::Baldwin => {
            let mut survivors: BTreeSet<CandidateId> = (0..m).map(CandidateId).collect();
            while survivors.len() > 1 {
                let borda = |c: &CandidateId| -> Rat {
                    survivors
                        .iter()
                        .filter(|&&o| o != *c)
                        .map(|o| vals[desc.pairwise_index(c.0, o.0)].clone())
                        .sum()
                };
                let scores: Vec<(CandidateId, Rat)> =
                    survivors.iter().map(|c| (*c, borda(c))).collect();
                if desc.rule == Rule::Baldwin {
                    let min = scores.iter().map(|(_, s)| s.clone()).min().unwrap();
                    let victim =
                        tiebreak.last_of(scores.iter().filter(|(_, s)| *s == min).map(|(c, _)| *c));
                    survivors.remove(&victim);
                } else {
                    let total: Rat = scores.iter().map(|(_, s)| s.clone()).sum();
                    let k = rat_u64(survivors.len() as u64);
                    let eliminated: Vec<CandidateId> = scores
                        .iter()
                        .filter(|(_, s)| s * &k < total)
                        .map(|(c, _)| *c)
                        .collect();
                    if eliminated.is_empty() {
                        return tiebreak.first_of(survivors.iter().copied());
                    }
                    for c in eliminated {
                        survivors.remove(&c);
                    }
                }
            }
            *survivors.iter().next().unwrap()
        }
        _ => unreachable!("positional rules handled above"),
    }
}

/// Pairwise comparison pattern of a vector's components; a consistent
/// signature is a weak order on the component indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Signature {
    k: usize,
    rels: Vec<Ordering>,
}

fn tri_index(k: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < k);
    i * k - i * (i + 1) / 2 + (j - i - 1)
}

impl Signature {
    pub fn from_relations(k: usize, rel: impl Fn(usize, usize) -> Ordering) -> Self {
        let mut rels = Vec::with_capacity(k.saturating_sub(1) * k / 2);
        for i in 0..k {
            for j in (i + 1)..k {
                rels.push(rel(i, j));
            }
        }
        Signature { k, rels }
    }

    pub fn from_ranks(ranks: &[usize]) -> Self {
        Signature::from_relations(ranks.len(), |i, j| ranks[i].cmp(&ranks[j]))
    }

    pub fn order(&self) -> usize {
        self.k
    }

    /// How component i compares to component j.
    pub fn relation(&self, i: usize, j: usize) -> Ordering {
        match i.cmp(&j) {
            Ordering::Equal => Ordering::Equal,
            Ordering::Less => self.rels[tri_index(self.k, i, j)],
            Ordering::Greater => self.rels[tri_index(self.k, j, i)].reverse(),
        }
    }
}

pub fn signature_of(v: &ScoreVector) -> Signature {
    Signature::from_relations(v.values.len(), |i, j| v.values[i].cmp(&v.values[j]))
}

/// The canonical integer vector realizing a signature: each component gets
/// its block rank (bottom block 0, next 1, ...). `None` if the relation map
/// is not a weak order.
pub fn representative(s: &Signature) -> Option<ScoreVector> {
    let k = s.order();
    let counts: Vec<usize> = (0..k)
        .map(|i| {
            (0..k)
                .filter(|&j| j != i && s.relation(i, j) == Ordering::Greater)
                .count()
        })
        .collect();
    let mut distinct: Vec<usize> = counts.clone();
    distinct.sort_unstable();
    distinct.dedup();
    let ranks: Vec<usize> = counts
        .iter()
        .map(|c| distinct.binary_search(c).unwrap())
        .collect();
    let vec = ScoreVector {
        values: ranks.iter().map(|&r| crate::rat(r as i64)).collect(),
    };
    if signature_of(&vec) == *s {
        Some(vec)
    } else {
        None
    }
}

/// Streams every weak order on {0..k-1} exactly once, as signatures, in a
/// fixed order (blocks chosen bottom-up, each block an ascending submask of
/// the remaining elements). The count is the k-th Fubini number.
pub fn enumerate_signatures(k: usize) -> WeakOrderIter {
    assert!(k >= 1);
    assert!(k <= 31, "weak-order enumeration limited to k <= 31");
    WeakOrderIter {
        k,
        stack: Vec::new(),
        started: false,
        done: false,
    }
}

pub struct WeakOrderIter {
    k: usize,
    /// (remaining mask before this block was chosen, chosen block).
    stack: Vec<(u32, u32)>,
    started: bool,
    done: bool,
}

/// Smallest submask of `mask` strictly greater than `s`, if any.
fn next_submask(s: u32, mask: u32) -> Option<u32> {
    if s == mask {
        return None;
    }
    Some(((s | !mask).wrapping_add(1)) & mask)
}

impl WeakOrderIter {
    /// Pushes first-choice blocks until nothing remains.
    fn descend(&mut self, mut remaining: u32) {
        while remaining != 0 {
            let first = next_submask(0, remaining).unwrap();
            self.stack.push((remaining, first));
            remaining &= !first;
        }
    }

    fn current(&self) -> Signature {
        let mut ranks = vec![0usize; self.k];
        for (depth, (_, block)) in self.stack.iter().enumerate() {
            for i in 0..self.k {
                if block & (1 << i) != 0 {
                    ranks[i] = depth;
                }
            }
        }
        Signature::from_ranks(&ranks)
    }
}

impl Iterator for WeakOrderIter {
    type Item = Signature;

    fn next(&mut self) -> Option<Signature> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            self.descend((1u32 << self.k) - 1);
            return Some(self.current());
        }
        while let Some((remaining, block)) = self.stack.pop() {
            if let Some(nb) = next_submask(block, remaining) {
                self.stack.push((remaining, nb));
                let rest = remaining & !nb;
                self.descend(rest);
                return Some(self.current());
            }
        }
        self.done = true;
        None
    }
}
