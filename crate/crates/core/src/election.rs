//! Election data model: candidates, ranked votes, multiset-compressed
//! profiles and deterministic tie-breaking.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// Dense index of a candidate within an election (`0..m`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CandidateId(pub usize);

impl fmt::Display for CandidateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Candidate {
    pub id: CandidateId,
    pub name: String,
}

/// A linear order over all candidates, most preferred first.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Vote {
    ranking: Vec<CandidateId>,
}

impl Vote {
    /// Builds a vote from a ranking. Panics unless the ranking is a
    /// permutation of `0..m` for some m.
    pub fn new(ranking: Vec<CandidateId>) -> Self {
        let m = ranking.len();
        let mut seen = vec![false; m];
        for c in &ranking {
            assert!(c.0 < m && !seen[c.0], "ranking is not a permutation");
            seen[c.0] = true;
        }
        Vote { ranking }
    }

    pub fn from_indices(ranking: &[usize]) -> Self {
        Vote::new(ranking.iter().map(|&i| CandidateId(i)).collect())
    }

    pub fn ranking(&self) -> &[CandidateId] {
        &self.ranking
    }

    pub fn num_candidates(&self) -> usize {
        self.ranking.len()
    }

    /// Zero-based position of `c`; position 0 is the most preferred.
    pub fn position_of(&self, c: CandidateId) -> usize {
        self.ranking
            .iter()
            .position(|&x| x == c)
            .expect("candidate not ranked")
    }

    pub fn prefers(&self, a: CandidateId, b: CandidateId) -> bool {
        self.position_of(a) < self.position_of(b)
    }

    pub fn top(&self) -> CandidateId {
        self.ranking[0]
    }

    /// The most preferred candidate among `keep`.
    pub fn top_among(&self, keep: &BTreeSet<CandidateId>) -> CandidateId {
        *self
            .ranking
            .iter()
            .find(|c| keep.contains(c))
            .expect("keep set disjoint from ranking")
    }

    /// Projects the vote onto `keep`, relabelling through `remap`
    /// (old id -> new id), preserving relative order.
    pub fn project(
        &self,
        keep: &BTreeSet<CandidateId>,
        remap: &BTreeMap<CandidateId, CandidateId>,
    ) -> Vote {
        Vote::new(
            self.ranking
                .iter()
                .filter(|c| keep.contains(c))
                .map(|c| remap[c])
                .collect(),
        )
    }

    /// All m! linear orders over `m` candidates, in lexicographic order.
    pub fn all(m: usize) -> Vec<Vote> {
        let mut out = Vec::new();
        let mut current = Vec::with_capacity(m);
        let mut used = vec![false; m];
        fn rec(
            m: usize,
            current: &mut Vec<CandidateId>,
            used: &mut Vec<bool>,
            out: &mut Vec<Vote>,
        ) {
            if current.len() == m {
                out.push(Vote {
                    ranking: current.clone(),
                });
                return;
            }
            for i in 0..m {
                if !used[i] {
                    used[i] = true;
                    current.push(CandidateId(i));
                    rec(m, current, used, out);
                    current.pop();
                    used[i] = false;
                }
            }
        }
        rec(m, &mut current, &mut used, &mut out);
        out
    }
}

/// A multiset of votes, stored compressed as vote -> count. Iteration is
/// always in lexicographic ranking order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Profile {
    entries: BTreeMap<Vote, u64>,
}

impl Profile {
    pub fn new() -> Self {
        Profile {
            entries: BTreeMap::new(),
        }
    }

    pub fn from_entries(entries: impl IntoIterator<Item = (Vote, u64)>) -> Self {
        let mut p = Profile::new();
        for (v, c) in entries {
            p.add(v, c);
        }
        p
    }

    /// Adds `count` copies of `vote`, merging with an existing entry.
    pub fn add(&mut self, vote: Vote, count: u64) {
        if count == 0 {
            return;
        }
        *self.entries.entry(vote).or_insert(0) += count;
    }

    /// Removes `count` copies of `vote`. Panics if fewer are present.
    pub fn remove(&mut self, vote: &Vote, count: u64) {
        if count == 0 {
            return;
        }
        let c = self.entries.get_mut(vote).expect("vote not in profile");
        assert!(*c >= count, "removing more votes than present");
        *c -= count;
        if *c == 0 {
            self.entries.remove(vote);
        }
    }

    pub fn count(&self, vote: &Vote) -> u64 {
        self.entries.get(vote).copied().unwrap_or(0)
    }

    /// Total number of votes.
    pub fn num_votes(&self) -> u64 {
        self.entries.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vote, u64)> {
        self.entries.iter().map(|(v, &c)| (v, c))
    }

    pub fn union(&self, other: &Profile) -> Profile {
        let mut out = self.clone();
        for (v, c) in other.iter() {
            out.add(v.clone(), c);
        }
        out
    }
}

/// Fixed tie-breaking priority order: earlier candidates win ties.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TieBreak {
    priority: Vec<CandidateId>,
    rank: Vec<usize>,
}

impl TieBreak {
    pub fn new(priority: Vec<CandidateId>) -> Self {
        let m = priority.len();
        let mut rank = vec![usize::MAX; m];
        for (i, c) in priority.iter().enumerate() {
            assert!(
                c.0 < m && rank[c.0] == usize::MAX,
                "priority is not a permutation"
            );
            rank[c.0] = i;
        }
        TieBreak { priority, rank }
    }

    /// Identity priority `0, 1, ..., m-1`.
    pub fn default_order(m: usize) -> Self {
        TieBreak::new((0..m).map(CandidateId).collect())
    }

    pub fn priority(&self) -> &[CandidateId] {
        &self.priority
    }

    /// Lower rank = wins ties.
    pub fn rank(&self, c: CandidateId) -> usize {
        self.rank[c.0]
    }

    pub fn prefers(&self, a: CandidateId, b: CandidateId) -> bool {
        self.rank(a) < self.rank(b)
    }

    /// Highest-priority member of a nonempty set.
    pub fn first_of(&self, set: impl IntoIterator<Item = CandidateId>) -> CandidateId {
        set.into_iter()
            .min_by_key(|&c| self.rank(c))
            .expect("empty set")
    }

    /// Lowest-priority member of a nonempty set (elimination victim).
    pub fn last_of(&self, set: impl IntoIterator<Item = CandidateId>) -> CandidateId {
        set.into_iter()
            .max_by_key(|&c| self.rank(c))
            .expect("empty set")
    }
}

/// Candidate set, compressed profile and tie-break order, bundled.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Election {
    candidates: Vec<Candidate>,
    profile: Profile,
    tiebreak: TieBreak,
}

impl Election {
    pub fn new(names: Vec<String>, profile: Profile, tiebreak: TieBreak) -> Self {
        let m = names.len();
        assert!(m >= 1, "election needs at least one candidate");
        let mut seen = BTreeSet::new();
        for n in &names {
            assert!(!n.is_empty(), "empty candidate name");
            assert!(seen.insert(n.clone()), "duplicate candidate name {n}");
        }
        assert_eq!(tiebreak.priority.len(), m);
        for (v, _) in profile.iter() {
            assert_eq!(v.num_candidates(), m, "vote does not rank every candidate");
        }
        let candidates = names
            .into_iter()
            .enumerate()
            .map(|(i, name)| Candidate {
                id: CandidateId(i),
                name,
            })
            .collect();
        Election {
            candidates,
            profile,
            tiebreak,
        }
    }

    pub fn num_candidates(&self) -> usize {
        self.candidates.len()
    }

    pub fn num_votes(&self) -> u64 {
        self.profile.num_votes()
    }

    pub fn candidates(&self) -> &[Candidate] {
        &self.candidates
    }

    pub fn candidate_ids(&self) -> impl Iterator<Item = CandidateId> + '_ {
        (0..self.candidates.len()).map(CandidateId)
    }

    pub fn name(&self, c: CandidateId) -> &str {
        &self.candidates[c.0].name
    }

    pub fn candidate_by_name(&self, name: &str) -> Option<CandidateId> {
        self.candidates
            .iter()
            .find(|c| c.name == name)
            .map(|c| c.id)
    }

    pub fn profile(&self) -> &Profile {
        &self.profile
    }

    pub fn tiebreak(&self) -> &TieBreak {
        &self.tiebreak
    }

    /// Same candidates and tie-break, different profile.
    pub fn with_profile(&self, profile: Profile) -> Election {
        for (v, _) in profile.iter() {
            assert_eq!(v.num_candidates(), self.num_candidates());
        }
        Election {
            candidates: self.candidates.clone(),
            profile,
            tiebreak: self.tiebreak.clone(),
        }
    }

    /// Projects the election onto `keep`: votes keep their relative order,
    /// counts are preserved (merging votes that become equal), candidate ids
    /// are re-densified in original candidate order, and the tie-break is
    /// projected. Panics on an empty keep set.
    pub fn restrict(&self, keep: &BTreeSet<CandidateId>) -> Election {
        assert!(
            !keep.is_empty(),
            "cannot restrict to an empty candidate set"
        );
        let kept: Vec<CandidateId> = self.candidate_ids().filter(|c| keep.contains(c)).collect();
        let remap: BTreeMap<CandidateId, CandidateId> = kept
            .iter()
            .enumerate()
            .map(|(new, &old)| (old, CandidateId(new)))
            .collect();
        let names = kept
            .iter()
            .map(|&c| self.candidates[c.0].name.clone())
            .collect();
        let mut profile = Profile::new();
        for (v, c) in self.profile.iter() {
            profile.add(v.project(keep, &remap), c);
        }
        let priority = self
            .tiebreak
            .priority
            .iter()
            .filter(|c| keep.contains(c))
            .map(|c| remap[c])
            .collect();
        Election::new(names, profile, TieBreak::new(priority))
    }
}
