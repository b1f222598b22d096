//! Winning-condition generators.
//!
//! For a rule, a candidate count and a target, these produce a finite
//! disjunction of linear constraint systems over per-vote-type count
//! variables such that a profile elects the target (or has exactly the
//! requested co-winner set) if and only if its type counts satisfy at
//! least one system. Attack solvers substitute their own integer variables
//! for the type counts and test each system for feasibility.
//!
//! Each rule family gets a specialized generator whose enumeration size
//! depends on m only (minimizer maps, sign patterns, majority levels,
//! elimination orders). The signature-filter generator in
//! [`winning_systems_generic`] is the direct, rule-agnostic construction;
//! it works for rules whose decision reads only component comparisons and
//! serves as a cross-check for the specialized ones.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use itertools::Itertools;
use num::{BigInt, One, ToPrimitive, Zero};

use crate::election::{CandidateId, TieBreak, Vote};
use crate::gsr;
use crate::rules::{lock_and_sources, Rule};
use crate::{rat, Rat};

/// All linear orders over m candidates, lexicographically sorted; a vote
/// type id is an index into this list.
#[derive(Debug, Clone)]
pub struct VoteSpace {
    m: usize,
    orders: Vec<Vote>,
}

impl VoteSpace {
    pub fn new(m: usize) -> Self {
        VoteSpace {
            m,
            orders: Vote::all(m),
        }
    }

    pub fn num_candidates(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        self.orders.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orders.is_empty()
    }

    pub fn vote(&self, idx: usize) -> &Vote {
        &self.orders[idx]
    }

    pub fn index_of(&self, vote: &Vote) -> usize {
        self.orders
            .binary_search(vote)
            .expect("vote outside this space")
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Vote)> {
        self.orders.iter().enumerate()
    }
}

/// Relation of a linear constraint.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rel {
    Lt,
    Le,
    Eq,
    Ge,
    Gt,
}

impl Rel {
    pub fn holds(&self, lhs: &Rat, rhs: &Rat) -> bool {
        match self {
            Rel::Lt => lhs < rhs,
            Rel::Le => lhs <= rhs,
            Rel::Eq => lhs == rhs,
            Rel::Ge => lhs >= rhs,
            Rel::Gt => lhs > rhs,
        }
    }

    pub fn holds_i64(&self, lhs: i64, rhs: i64) -> bool {
        match self {
            Rel::Lt => lhs < rhs,
            Rel::Le => lhs <= rhs,
            Rel::Eq => lhs == rhs,
            Rel::Ge => lhs >= rhs,
            Rel::Gt => lhs > rhs,
        }
    }
}

/// Rational-linear expression over vote-type count variables.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LinExpr {
    terms: BTreeMap<usize, Rat>,
    constant: Rat,
}

impl LinExpr {
    pub fn zero() -> Self {
        LinExpr::default()
    }

    pub fn constant(c: Rat) -> Self {
        LinExpr {
            terms: BTreeMap::new(),
            constant: c,
        }
    }

    /// The total vote count: sum of every type variable.
    pub fn votes_total(num_types: usize) -> Self {
        let mut e = LinExpr::zero();
        for t in 0..num_types {
            e.add_term(t, Rat::one());
        }
        e
    }

    pub fn add_term(&mut self, type_idx: usize, coeff: Rat) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(type_idx).or_insert_with(Rat::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&type_idx);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, &Rat)> {
        self.terms.iter().map(|(&t, c)| (t, c))
    }

    pub fn constant_part(&self) -> &Rat {
        &self.constant
    }

    pub fn minus(&self, other: &LinExpr) -> LinExpr {
        let mut out = self.clone();
        for (t, c) in other.terms() {
            out.add_term(t, -c.clone());
        }
        out.constant -= &other.constant;
        out
    }

    pub fn plus(&self, other: &LinExpr) -> LinExpr {
        let mut out = self.clone();
        for (t, c) in other.terms() {
            out.add_term(t, c.clone());
        }
        out.constant += &other.constant;
        out
    }

    pub fn times(&self, factor: &Rat) -> LinExpr {
        if factor.is_zero() {
            return LinExpr::zero();
        }
        LinExpr {
            terms: self.terms.iter().map(|(&t, c)| (t, c * factor)).collect(),
            constant: &self.constant * factor,
        }
    }

    pub fn evaluate_dense(&self, counts: &[u64]) -> Rat {
        let mut acc = self.constant.clone();
        for (t, c) in self.terms() {
            acc += c * crate::rat_u64(counts[t]);
        }
        acc
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinConstraint {
    pub lhs: LinExpr,
    pub rel: Rel,
    pub rhs: LinExpr,
}

impl LinConstraint {
    pub fn new(lhs: LinExpr, rel: Rel, rhs: LinExpr) -> Self {
        LinConstraint { lhs, rel, rhs }
    }

    pub fn holds_dense(&self, counts: &[u64]) -> bool {
        self.rel.holds(
            &self.lhs.evaluate_dense(counts),
            &self.rhs.evaluate_dense(counts),
        )
    }
}

/// One conjunction of linear constraints; a profile satisfying every
/// constraint realizes the condition in `description`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearSystem {
    pub constraints: Vec<LinConstraint>,
    pub description: String,
}

impl LinearSystem {
    pub fn satisfied_by(&self, counts: &[u64]) -> bool {
        self.constraints.iter().all(|c| c.holds_dense(counts))
    }

    /// Integer form with cleared denominators, for fast repeated evaluation.
    pub fn compile(&self) -> CompiledSystem {
        let constraints = self
            .constraints
            .iter()
            .map(|c| {
                let diff = c.lhs.minus(&c.rhs);
                let mut lcm = BigInt::one();
                for (_, coeff) in diff.terms() {
                    lcm = num::integer::lcm(lcm, coeff.denom().clone());
                }
                lcm = num::integer::lcm(lcm, diff.constant_part().denom().clone());
                let scale = Rat::from_integer(lcm);
                let to_i64 = |r: &Rat| -> i64 {
                    let v = r * &scale;
                    debug_assert!(v.is_integer());
                    v.to_integer().to_i64().expect("coefficient exceeds i64")
                };
                CompiledConstraint {
                    terms: diff.terms().map(|(t, c)| (t, to_i64(c))).collect(),
                    rel: c.rel,
                    rhs: -to_i64(diff.constant_part()),
                }
            })
            .collect();
        CompiledSystem { constraints }
    }
}

#[derive(Debug, Clone)]
pub struct CompiledConstraint {
    /// Sorted by type index.
    terms: Vec<(usize, i64)>,
    rel: Rel,
    rhs: i64,
}

#[derive(Debug, Clone)]
pub struct CompiledSystem {
    constraints: Vec<CompiledConstraint>,
}

impl CompiledSystem {
    /// Evaluates against a sparse count assignment (sorted by type index).
    pub fn satisfied_by_sparse(&self, counts: &[(usize, i64)]) -> bool {
        self.constraints.iter().all(|c| {
            let mut lhs = 0i64;
            for &(t, n) in counts {
                if let Ok(pos) = c.terms.binary_search_by_key(&t, |&(ct, _)| ct) {
                    lhs += c.terms[pos].1 * n;
                }
            }
            c.rel.holds_i64(lhs, c.rhs)
        })
    }
}

/// Which condition the generated systems must capture.
#[derive(Debug, Clone)]
enum Goal {
    /// Target is the unique tie-broken winner.
    Win(CandidateId),
    /// The pre-tie-break co-winner set is exactly this set.
    ExactCowinners(BTreeSet<CandidateId>),
}

struct Ctx {
    space: VoteSpace,
    m: usize,
    tiebreak: TieBreak,
    /// pairwise[c][o] = expression for the votes preferring c to o.
    pairwise: Vec<Vec<LinExpr>>,
}

impl Ctx {
    fn new(m: usize, tiebreak: TieBreak) -> Self {
        let space = VoteSpace::new(m);
        let mut pairwise = vec![vec![LinExpr::zero(); m]; m];
        for (idx, vote) in space.iter() {
            let r = vote.ranking();
            for i in 0..m {
                for j in (i + 1)..m {
                    pairwise[r[i].0][r[j].0].add_term(idx, Rat::one());
                }
            }
        }
        Ctx {
            space,
            m,
            tiebreak,
            pairwise,
        }
    }

    fn expr_of(&self, value: impl Fn(&Vote) -> Rat) -> LinExpr {
        let mut e = LinExpr::zero();
        for (idx, vote) in self.space.iter() {
            e.add_term(idx, value(vote));
        }
        e
    }

    fn score_expr(&self, lambda: &[Rat], c: CandidateId) -> LinExpr {
        self.expr_of(|v| lambda[v.position_of(c)].clone())
    }

    fn pairwise_expr(&self, c: CandidateId, o: CandidateId) -> LinExpr {
        self.pairwise[c.0][o.0].clone()
    }

    fn margin_expr(&self, w: CandidateId, l: CandidateId) -> LinExpr {
        self.pairwise_expr(w, l).minus(&self.pairwise_expr(l, w))
    }

    fn level_expr(&self, c: CandidateId, level: usize) -> LinExpr {
        self.expr_of(|v| {
            if v.position_of(c) < level {
                rat(1)
            } else {
                Rat::zero()
            }
        })
    }

    fn top_of_subset_expr(&self, c: CandidateId, survivors: &BTreeSet<CandidateId>) -> LinExpr {
        self.expr_of(|v| {
            if v.top_among(survivors) == c {
                rat(1)
            } else {
                Rat::zero()
            }
        })
    }

    fn restricted_borda_expr(&self, c: CandidateId, survivors: &BTreeSet<CandidateId>) -> LinExpr {
        let mut e = LinExpr::zero();
        for &o in survivors {
            if o != c {
                e = e.plus(&self.pairwise_expr(c, o));
            }
        }
        e
    }

    fn total_expr(&self) -> LinExpr {
        LinExpr::votes_total(self.space.len())
    }

    fn nonempty_constraint(&self) -> LinConstraint {
        LinConstraint::new(self.total_expr(), Rel::Ge, LinExpr::constant(rat(1)))
    }

    fn candidates(&self) -> impl Iterator<Item = CandidateId> {
        (0..self.m).map(CandidateId)
    }
}

fn con(lhs: LinExpr, rel: Rel, rhs: LinExpr) -> LinConstraint {
    LinConstraint::new(lhs, rel, rhs)
}

fn zero() -> LinExpr {
    LinExpr::zero()
}

type SystemIter = Box<dyn Iterator<Item = LinearSystem> + Send>;

/// Streams every constraint system under which `p` is the unique
/// tie-broken winner. A type-count assignment elects `p` iff it satisfies
/// at least one yielded system.
pub fn winning_systems(rule: &Rule, m: usize, p: CandidateId, tiebreak: &TieBreak) -> SystemIter {
    assert!(p.0 < m);
    systems_for(rule, m, Goal::Win(p), tiebreak)
}

/// Streams every constraint system under which the pre-tie-break co-winner
/// set is exactly `winners`. Empty profiles have an empty co-winner set, so
/// every yielded system requires at least one vote.
pub fn cowinner_systems(
    rule: &Rule,
    m: usize,
    winners: &BTreeSet<CandidateId>,
    tiebreak: &TieBreak,
) -> SystemIter {
    assert!(!winners.is_empty(), "co-winner set must be nonempty");
    assert!(winners.iter().all(|c| c.0 < m));
    systems_for(rule, m, Goal::ExactCowinners(winners.clone()), tiebreak)
}

fn systems_for(rule: &Rule, m: usize, goal: Goal, tiebreak: &TieBreak) -> SystemIter {
    assert!(m >= 1);
    rule.validate_for(m)
        .expect("invalid rule for this candidate count");
    let ctx = Arc::new(Ctx::new(m, tiebreak.clone()));
    if m == 1 {
        let system = match goal {
            Goal::Win(_) => LinearSystem {
                constraints: vec![],
                description: "sole candidate".into(),
            },
            Goal::ExactCowinners(_) => LinearSystem {
                constraints: vec![ctx.nonempty_constraint()],
                description: "sole candidate of a nonempty profile".into(),
            },
        };
        return Box::new(std::iter::once(system));
    }
    if let Some(lambda) = rule.scoring_vector(m) {
        return positional_systems(ctx, lambda, goal);
    }
    match rule {
        Rule::Maximin => maximin_systems(ctx, goal),
        Rule::Copeland(alpha) => copeland_systems(ctx, alpha.clone(), goal),
        Rule::Bucklin => bucklin_systems(ctx, goal),
        Rule::Stv | Rule::Baldwin => elimination_systems(ctx, rule.clone(), goal),
        Rule::Nanson => nanson_systems(ctx, goal),
        Rule::RankedPairs => ranked_pairs_systems(ctx, goal),
        _ => unreachable!("positional rules handled above"),
    }
}

fn positional_systems(ctx: Arc<Ctx>, lambda: Vec<Rat>, goal: Goal) -> SystemIter {
    let system = match goal {
        Goal::Win(p) => {
            let p_score = ctx.score_expr(&lambda, p);
            let constraints = ctx
                .candidates()
                .filter(|&c| c != p)
                .map(|c| {
                    let rel = if ctx.tiebreak.prefers(c, p) {
                        Rel::Gt
                    } else {
                        Rel::Ge
                    };
                    con(p_score.minus(&ctx.score_expr(&lambda, c)), rel, zero())
                })
                .collect();
            LinearSystem {
                constraints,
                description: "top positional score".into(),
            }
        }
        Goal::ExactCowinners(winners) => {
            let lead = *winners.iter().next().unwrap();
            let lead_score = ctx.score_expr(&lambda, lead);
            let mut constraints = vec![ctx.nonempty_constraint()];
            for &w in winners.iter().skip(1) {
                constraints.push(con(
                    lead_score.minus(&ctx.score_expr(&lambda, w)),
                    Rel::Eq,
                    zero(),
                ));
            }
            for c in ctx.candidates().filter(|c| !winners.contains(c)) {
                constraints.push(con(
                    lead_score.minus(&ctx.score_expr(&lambda, c)),
                    Rel::Gt,
                    zero(),
                ));
            }
            LinearSystem {
                constraints,
                description: "exact positional score ties".into(),
            }
        }
    };
    Box::new(std::iter::once(system))
}

/// One system per map assigning each candidate a pairwise minimizer.
fn maximin_systems(ctx: Arc<Ctx>, goal: Goal) -> SystemIter {
    let m = ctx.m;
    let others: Vec<Vec<CandidateId>> = (0..m)
        .map(|c| (0..m).filter(|&o| o != c).map(CandidateId).collect())
        .collect();
    let count = (m - 1).pow(m as u32);
    Box::new((0..count).map(move |code| {
        let mut rest = code;
        let opp: Vec<CandidateId> = (0..m)
            .map(|c| {
                let digit = rest % (m - 1);
                rest /= m - 1;
                others[c][digit]
            })
            .collect();
        let mut constraints = Vec::new();
        let score = |c: CandidateId| ctx.pairwise_expr(c, opp[c.0]);
        for c in ctx.candidates() {
            for &o in &others[c.0] {
                if o != opp[c.0] {
                    constraints.push(con(
                        score(c).minus(&ctx.pairwise_expr(c, o)),
                        Rel::Le,
                        zero(),
                    ));
                }
            }
        }
        match &goal {
            Goal::Win(p) => {
                for c in ctx.candidates().filter(|&c| c != *p) {
                    let rel = if ctx.tiebreak.prefers(c, *p) {
                        Rel::Gt
                    } else {
                        Rel::Ge
                    };
                    constraints.push(con(score(*p).minus(&score(c)), rel, zero()));
                }
            }
            Goal::ExactCowinners(winners) => {
                constraints.push(ctx.nonempty_constraint());
                let lead = *winners.iter().next().unwrap();
                for &w in winners.iter().skip(1) {
                    constraints.push(con(score(lead).minus(&score(w)), Rel::Eq, zero()));
                }
                for c in ctx.candidates().filter(|c| !winners.contains(c)) {
                    constraints.push(con(score(lead).minus(&score(c)), Rel::Gt, zero()));
                }
            }
        }
        let names: Vec<String> = opp.iter().map(|c| c.to_string()).collect();
        LinearSystem {
            constraints,
            description: format!("minimizers {}", names.join(",")),
        }
    }))
}

/// One system per sign pattern over the unordered candidate pairs whose
/// implied Copeland scores single out the goal.
fn copeland_systems(ctx: Arc<Ctx>, alpha: Rat, goal: Goal) -> SystemIter {
    let m = ctx.m;
    let pairs: Vec<(usize, usize)> = (0..m)
        .flat_map(|i| ((i + 1)..m).map(move |j| (i, j)))
        .collect();
    let total = 3usize.pow(pairs.len() as u32);
    Box::new((0..total).filter_map(move |code| {
        let mut rest = code;
        let signs: Vec<Ordering> = pairs
            .iter()
            .map(|_| {
                let digit = rest % 3;
                rest /= 3;
                match digit {
                    0 => Ordering::Less,    // second beats first
                    1 => Ordering::Equal,   // tie
                    _ => Ordering::Greater, // first beats second
                }
            })
            .collect();
        let mut scores = vec![Rat::zero(); m];
        for (&(i, j), sign) in pairs.iter().zip(&signs) {
            match sign {
                Ordering::Greater => scores[i] += rat(1),
                Ordering::Less => scores[j] += rat(1),
                Ordering::Equal => {
                    scores[i] += &alpha;
                    scores[j] += &alpha;
                }
            }
        }
        match &goal {
            Goal::Win(p) => {
                let winner = gsr::argmax_first(
                    scores
                        .iter()
                        .enumerate()
                        .map(|(c, s)| (CandidateId(c), s.clone())),
                    &ctx.tiebreak,
                );
                if winner != *p {
                    return None;
                }
            }
            Goal::ExactCowinners(winners) => {
                let best = scores.iter().max().unwrap().clone();
                let set: BTreeSet<CandidateId> = scores
                    .iter()
                    .enumerate()
                    .filter(|(_, s)| **s == best)
                    .map(|(c, _)| CandidateId(c))
                    .collect();
                if set != *winners {
                    return None;
                }
            }
        }
        let mut constraints = Vec::new();
        if matches!(goal, Goal::ExactCowinners(_)) {
            constraints.push(ctx.nonempty_constraint());
        }
        for (&(i, j), sign) in pairs.iter().zip(&signs) {
            let margin = ctx.margin_expr(CandidateId(i), CandidateId(j));
            let rel = match sign {
                Ordering::Greater => Rel::Gt,
                Ordering::Equal => Rel::Eq,
                Ordering::Less => Rel::Lt,
            };
            constraints.push(con(margin, rel, zero()));
        }
        Some(LinearSystem {
            constraints,
            description: format!("sign pattern {code}"),
        })
    }))
}

/// One system per majority level, plus the empty-profile degenerate case
/// when the target is the top-priority candidate.
fn bucklin_systems(ctx: Arc<Ctx>, goal: Goal) -> SystemIter {
    let m = ctx.m;
    let n = ctx.total_expr();
    let two = rat(2);
    let mut systems = Vec::new();
    // 2 * (votes ranking c in the top `level`) - n, compared against zero.
    let above = |c: CandidateId, level: usize| ctx.level_expr(c, level).times(&two).minus(&n);
    match goal {
        Goal::Win(p) => {
            for level in 1..=m {
                let mut constraints = vec![con(above(p, level), Rel::Gt, zero())];
                if level > 1 {
                    constraints.push(con(above(p, level - 1), Rel::Le, zero()));
                }
                for c in ctx.candidates().filter(|&c| c != p) {
                    if ctx.tiebreak.prefers(c, p) {
                        constraints.push(con(above(c, level), Rel::Le, zero()));
                    } else if level > 1 {
                        constraints.push(con(above(c, level - 1), Rel::Le, zero()));
                    }
                }
                systems.push(LinearSystem {
                    constraints,
                    description: format!("majority at level {level}"),
                });
            }
            if ctx.tiebreak.first_of(ctx.candidates()) == p {
                systems.push(LinearSystem {
                    constraints: vec![con(ctx.total_expr(), Rel::Eq, zero())],
                    description: "empty profile".into(),
                });
            }
        }
        Goal::ExactCowinners(winners) => {
            for level in 1..=m {
                let mut constraints = vec![ctx.nonempty_constraint()];
                for &w in &winners {
                    constraints.push(con(above(w, level), Rel::Gt, zero()));
                    if level > 1 {
                        constraints.push(con(above(w, level - 1), Rel::Le, zero()));
                    }
                }
                for c in ctx.candidates().filter(|c| !winners.contains(c)) {
                    constraints.push(con(above(c, level), Rel::Le, zero()));
                }
                systems.push(LinearSystem {
                    constraints,
                    description: format!("exact majority level {level}"),
                });
            }
        }
    }
    Box::new(systems.into_iter())
}

/// STV and Baldwin: one system per elimination order ending at the target.
/// The round's victim scores no more than any survivor, and strictly less
/// than survivors the tie-break would eliminate instead.
fn elimination_systems(ctx: Arc<Ctx>, rule: Rule, goal: Goal) -> SystemIter {
    let target = match &goal {
        Goal::Win(p) => *p,
        Goal::ExactCowinners(winners) => {
            if winners.len() > 1 {
                // The procedure always yields a single co-winner.
                return Box::new(std::iter::empty());
            }
            *winners.iter().next().unwrap()
        }
    };
    let exact = matches!(goal, Goal::ExactCowinners(_));
    let m = ctx.m;
    let others: Vec<CandidateId> = (0..m).map(CandidateId).filter(|&c| c != target).collect();
    let len = others.len();
    Box::new(others.into_iter().permutations(len).map(move |order| {
        let mut survivors: BTreeSet<CandidateId> = ctx.candidates().collect();
        let mut constraints = Vec::new();
        if exact {
            constraints.push(ctx.nonempty_constraint());
        }
        for &victim in &order {
            let score = |c: CandidateId| match rule {
                Rule::Stv => ctx.top_of_subset_expr(c, &survivors),
                _ => ctx.restricted_borda_expr(c, &survivors),
            };
            let victim_score = score(victim);
            for &c in survivors.iter().filter(|&&c| c != victim) {
                let rel = if ctx.tiebreak.prefers(victim, c) {
                    Rel::Lt
                } else {
                    Rel::Le
                };
                constraints.push(con(victim_score.minus(&score(c)), rel, zero()));
            }
            survivors.remove(&victim);
        }
        let names: Vec<String> = order.iter().map(|c| c.to_string()).collect();
        LinearSystem {
            constraints,
            description: format!("eliminate {}", names.join(",")),
        }
    }))
}

/// Nanson: one system per chain of per-round elimination sets ending with
/// the target alone. Each round eliminates exactly the candidates strictly
/// below the round's average Borda score; a final all-tied round keeps only
/// the top-priority survivor.
fn nanson_systems(ctx: Arc<Ctx>, goal: Goal) -> SystemIter {
    let target = match &goal {
        Goal::Win(p) => *p,
        Goal::ExactCowinners(winners) => {
            if winners.len() > 1 {
                return Box::new(std::iter::empty());
            }
            *winners.iter().next().unwrap()
        }
    };
    let exact = matches!(goal, Goal::ExactCowinners(_));

    fn chain(
        ctx: &Ctx,
        target: CandidateId,
        survivors: &BTreeSet<CandidateId>,
        acc: &[LinConstraint],
        trail: &mut Vec<String>,
        out: &mut Vec<LinearSystem>,
    ) {
        if survivors.len() == 1 {
            out.push(LinearSystem {
                constraints: acc.to_vec(),
                description: format!("rounds [{}]", trail.join("; ")),
            });
            return;
        }
        let k = rat(survivors.len() as i64);
        let borda = |c: CandidateId| ctx.restricted_borda_expr(c, survivors);
        let mut total = LinExpr::zero();
        for &c in survivors {
            total = total.plus(&borda(c));
        }
        // Normal rounds: every nonempty victim set avoiding the target.
        let removable: Vec<CandidateId> =
            survivors.iter().copied().filter(|&c| c != target).collect();
        for mask in 1u32..(1 << removable.len()) {
            let eliminated: BTreeSet<CandidateId> = removable
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, &c)| c)
                .collect();
            let mut cons = acc.to_vec();
            for &c in survivors {
                let rel = if eliminated.contains(&c) {
                    Rel::Lt
                } else {
                    Rel::Ge
                };
                cons.push(con(borda(c).times(&k).minus(&total), rel, zero()));
            }
            let next: BTreeSet<CandidateId> = survivors.difference(&eliminated).copied().collect();
            let names: Vec<String> = eliminated.iter().map(|c| c.to_string()).collect();
            trail.push(format!("drop {}", names.join(",")));
            chain(ctx, target, &next, &cons, trail, out);
            trail.pop();
        }
        // All-tied terminal round: everyone equals the average, and the
        // top-priority survivor must be the target.
        if ctx.tiebreak.first_of(survivors.iter().copied()) == target {
            let lead = *survivors.iter().next().unwrap();
            let mut cons = acc.to_vec();
            for &c in survivors.iter().filter(|&&c| c != lead) {
                cons.push(con(borda(lead).minus(&borda(c)), Rel::Eq, zero()));
            }
            trail.push("all tied".into());
            out.push(LinearSystem {
                constraints: cons,
                description: format!("rounds [{}]", trail.join("; ")),
            });
            trail.pop();
        }
    }

    let mut out = Vec::new();
    let survivors: BTreeSet<CandidateId> = ctx.candidates().collect();
    let base = if exact {
        vec![ctx.nonempty_constraint()]
    } else {
        vec![]
    };
    let mut trail = Vec::new();
    chain(&ctx, target, &survivors, &base, &mut trail, &mut out);
    Box::new(out.into_iter())
}

/// Ranked pairs: enumerate a sign pattern over the unordered pairs plus a
/// weak order over the positive margins; the lock order is then fixed, so
/// the winner under that hypothesis is computable and filtered.
fn ranked_pairs_systems(ctx: Arc<Ctx>, goal: Goal) -> SystemIter {
    let m = ctx.m;
    let pairs: Vec<(usize, usize)> = (0..m)
        .flat_map(|i| ((i + 1)..m).map(move |j| (i, j)))
        .collect();
    let total = 3usize.pow(pairs.len() as u32);
    Box::new((0..total).flat_map(move |code| {
        let ctx = Arc::clone(&ctx);
        let goal = goal.clone();
        let mut rest = code;
        let mut ties: Vec<(usize, usize)> = Vec::new();
        let mut beats: Vec<(usize, usize)> = Vec::new();
        for &(i, j) in &pairs {
            match rest % 3 {
                0 => ties.push((i, j)),
                1 => beats.push((i, j)),
                _ => beats.push((j, i)),
            }
            rest /= 3;
        }
        let rank_choices: Box<dyn Iterator<Item = Vec<usize>> + Send> = if beats.is_empty() {
            Box::new(std::iter::once(Vec::new()))
        } else {
            Box::new(gsr::enumerate_signatures(beats.len()).map(|sig| {
                let rep = gsr::representative(&sig).expect("enumerated signatures are consistent");
                rep.values
                    .iter()
                    .map(|v| v.to_integer().to_usize().unwrap())
                    .collect()
            }))
        };
        rank_choices.filter_map(move |ranks| {
            // Lock by decreasing margin rank, rank ties lexicographically.
            let mut order: Vec<usize> = (0..beats.len()).collect();
            order.sort_by(|&a, &b| ranks[b].cmp(&ranks[a]).then(beats[a].cmp(&beats[b])));
            let edges: Vec<(usize, usize)> = order.iter().map(|&i| beats[i]).collect();
            let sources = lock_and_sources(m, &edges);
            match &goal {
                Goal::Win(p) => {
                    if ctx.tiebreak.first_of(sources.iter().copied()) != *p {
                        return None;
                    }
                }
                Goal::ExactCowinners(winners) => {
                    if sources != *winners {
                        return None;
                    }
                }
            }
            let mut constraints = Vec::new();
            if matches!(goal, Goal::ExactCowinners(_)) {
                constraints.push(ctx.nonempty_constraint());
            }
            for &(i, j) in &ties {
                constraints.push(con(
                    ctx.margin_expr(CandidateId(i), CandidateId(j)),
                    Rel::Eq,
                    zero(),
                ));
            }
            let margin = |idx: usize| {
                let (w, l) = beats[idx];
                ctx.margin_expr(CandidateId(w), CandidateId(l))
            };
            for idx in 0..beats.len() {
                constraints.push(con(margin(idx), Rel::Gt, zero()));
            }
            // Within a rank block margins are equal; across consecutive
            // blocks they strictly increase with the rank.
            if !beats.is_empty() {
                let max_rank = *ranks.iter().max().unwrap();
                let mut leads = Vec::new();
                for r in 0..=max_rank {
                    let members: Vec<usize> = (0..beats.len()).filter(|&i| ranks[i] == r).collect();
                    let lead = members[0];
                    for &i in &members[1..] {
                        constraints.push(con(margin(lead).minus(&margin(i)), Rel::Eq, zero()));
                    }
                    leads.push(lead);
                }
                for r in 1..leads.len() {
                    constraints.push(con(
                        margin(leads[r]).minus(&margin(leads[r - 1])),
                        Rel::Gt,
                        zero(),
                    ));
                }
            }
            Some(LinearSystem {
                constraints,
                description: format!("sign pattern {code}, margin ranks {ranks:?}"),
            })
        })
    }))
}

/// The direct construction: filter every weak order over the rule's score
/// components by whether the decision function crowns `p` on a
/// representative vector. Only valid for rules whose decision reads
/// component comparisons alone (positional rules, Maximin, Copeland).
pub fn winning_systems_generic(
    rule: &Rule,
    m: usize,
    p: CandidateId,
    tiebreak: &TieBreak,
) -> SystemIter {
    assert!(
        rule.is_positional() || matches!(rule, Rule::Maximin | Rule::Copeland(_)),
        "generic generator requires a comparison-only decision function"
    );
    let ctx = Ctx::new(m, tiebreak.clone());
    let desc = gsr::descriptor(rule, m);
    let k = desc.order();
    if k == 0 {
        return Box::new(std::iter::once(LinearSystem {
            constraints: vec![],
            description: "sole candidate".into(),
        }));
    }
    let component_exprs: Vec<LinExpr> = desc
        .labels()
        .iter()
        .map(|label| ctx.expr_of(|v| gsr::component_value(&desc, label, v)))
        .collect();
    let tiebreak = tiebreak.clone();
    Box::new(
        gsr::enumerate_signatures(k)
            .enumerate()
            .filter_map(move |(idx, sig)| {
                let rep = gsr::representative(&sig).expect("enumerated signatures are consistent");
                if gsr::decide(&desc, &rep, 0, &tiebreak) != p {
                    return None;
                }
                let mut constraints = Vec::new();
                for i in 0..k {
                    for j in (i + 1)..k {
                        let rel = match sig.relation(i, j) {
                            Ordering::Less => Rel::Lt,
                            Ordering::Equal => Rel::Eq,
                            Ordering::Greater => Rel::Gt,
                        };
                        constraints.push(con(
                            component_exprs[i].minus(&component_exprs[j]),
                            rel,
                            zero(),
                        ));
                    }
                }
                Some(LinearSystem {
                    constraints,
                    description: format!("signature {idx}"),
                })
            }),
    )
}
