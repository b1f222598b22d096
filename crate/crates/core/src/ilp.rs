//! Exact integer feasibility over bounded nonnegative variables.
//!
//! Constraints are normalized to integer coefficients (clearing
//! denominators, then turning strict inequalities into weak ones by a +/-1
//! slack, valid because the left-hand sides are integer-valued). Tiny boxes
//! are enumerated outright; everything else runs branch-and-bound with an
//! exact rational LP relaxation for pruning, branching on the most
//! fractional variable, floor branch first. Same instance, same answer,
//! same witness.

use std::fmt;

use num::{BigInt, Integer, One, Signed, ToPrimitive, Zero};

use crate::conditions::Rel;
use crate::simplex::{feasible_point, LpOutcome, LpProblem, LpRel, LpRow};
use crate::Rat;

/// Boxed integer variable ranging over 0..=upper.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IlpVariable {
    pub upper: u64,
}

/// Sum of coefficient * variable, compared against a constant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub terms: Vec<(usize, Rat)>,
    pub rel: Rel,
    pub rhs: Rat,
}

impl Constraint {
    pub fn evaluate(&self, values: &[u64]) -> Rat {
        self.terms
            .iter()
            .map(|(v, c)| c * crate::rat_u64(values[*v]))
            .sum()
    }

    pub fn holds(&self, values: &[u64]) -> bool {
        self.rel.holds(&self.evaluate(values), &self.rhs)
    }
}

#[derive(Debug, Clone, Default)]
pub struct IlpInstance {
    pub variables: Vec<IlpVariable>,
    pub constraints: Vec<Constraint>,
}

impl IlpInstance {
    /// Exact check of a full assignment against the original constraints.
    pub fn verify(&self, witness: &Witness) -> bool {
        witness.values.len() == self.variables.len()
            && witness
                .values
                .iter()
                .zip(&self.variables)
                .all(|(&v, var)| v <= var.upper)
            && self.constraints.iter().all(|c| c.holds(&witness.values))
    }
}

impl fmt::Display for IlpInstance {
    /// Plain-text dump, one variable or constraint per line, exact fractions.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.variables.iter().enumerate() {
            writeln!(f, "x{} in [0, {}]", i, v.upper)?;
        }
        for c in &self.constraints {
            let mut first = true;
            for (v, coeff) in &c.terms {
                if first {
                    write!(f, "{coeff} x{v}")?;
                    first = false;
                } else {
                    write!(f, " + {coeff} x{v}")?;
                }
            }
            if first {
                write!(f, "0")?;
            }
            let rel = match c.rel {
                Rel::Lt => "<",
                Rel::Le => "<=",
                Rel::Eq => "=",
                Rel::Ge => ">=",
                Rel::Gt => ">",
            };
            writeln!(f, " {rel} {}", c.rhs)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub values: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Feasibility {
    Feasible(Witness),
    Infeasible,
}

impl Feasibility {
    pub fn witness(self) -> Option<Witness> {
        match self {
            Feasibility::Feasible(w) => Some(w),
            Feasibility::Infeasible => None,
        }
    }
}

/// Weak integer constraint: terms . x REL rhs with REL in {<=, =, >=}.
#[derive(Debug, Clone)]
struct NormConstraint {
    terms: Vec<(usize, BigInt)>,
    rel: Rel,
    rhs: BigInt,
}

impl NormConstraint {
    fn holds_big(&self, values: &[BigInt]) -> bool {
        let lhs: BigInt = self.terms.iter().map(|(v, c)| c * &values[*v]).sum();
        match self.rel {
            Rel::Le => lhs <= self.rhs,
            Rel::Eq => lhs == self.rhs,
            Rel::Ge => lhs >= self.rhs,
            _ => unreachable!("strict relations are normalized away"),
        }
    }
}

fn normalize(constraints: &[Constraint]) -> Vec<NormConstraint> {
    constraints
        .iter()
        .map(|c| {
            let mut lcm = BigInt::one();
            for (_, coeff) in &c.terms {
                lcm = lcm.lcm(coeff.denom());
            }
            lcm = lcm.lcm(c.rhs.denom());
            let scale = Rat::from_integer(lcm);
            let to_int = |r: &Rat| -> BigInt {
                let v = r * &scale;
                debug_assert!(v.is_integer());
                v.to_integer()
            };
            let mut terms: Vec<(usize, BigInt)> = c
                .terms
                .iter()
                .map(|(v, coeff)| (*v, to_int(coeff)))
                .filter(|(_, c)| !c.is_zero())
                .collect();
            terms.sort_by_key(|&(v, _)| v);
            let mut rhs = to_int(&c.rhs);
            // The lhs is integer-valued, so strict bounds tighten by one.
            let rel = match c.rel {
                Rel::Lt => {
                    rhs -= 1;
                    Rel::Le
                }
                Rel::Gt => {
                    rhs += 1;
                    Rel::Ge
                }
                r => r,
            };
            NormConstraint { terms, rel, rhs }
        })
        .collect()
}

/// A row of the form sum of some variables <= cap (unit coefficients).
/// These shared-budget rows tighten the attainable range of every other
/// constraint well beyond plain interval arithmetic.
#[derive(Debug, Clone)]
struct CardinalityRow {
    vars: Vec<usize>,
    cap: BigInt,
}

fn cardinality_rows(norm: &[NormConstraint]) -> Vec<CardinalityRow> {
    norm.iter()
        .filter(|c| {
            matches!(c.rel, Rel::Le | Rel::Eq)
                && !c.terms.is_empty()
                && !c.rhs.is_negative()
                && c.terms.iter().all(|(_, a)| a.is_one())
        })
        .map(|c| CardinalityRow {
            vars: c.terms.iter().map(|&(v, _)| v).collect(),
            cap: c.rhs.clone(),
        })
        .collect()
}

/// Attainable range of a constraint's left-hand side over the box
/// intersected with one cardinality row: members start at their lower
/// bounds and the leftover budget goes greedily to the most helpful
/// coefficients. `None` if the box violates the cardinality row outright.
fn range_under_cardinality(
    c: &NormConstraint,
    lo: &[u64],
    hi: &[u64],
    card: &CardinalityRow,
) -> Option<(BigInt, BigInt)> {
    let floor_units: BigInt = card.vars.iter().map(|&v| BigInt::from(lo[v])).sum();
    let avail = &card.cap - floor_units;
    if avail.is_negative() {
        return None;
    }
    let avail = avail.to_u64().unwrap_or(u64::MAX);
    let mut min = BigInt::zero();
    let mut max = BigInt::zero();
    let mut raisers: Vec<(&BigInt, u64)> = Vec::new(); // in-row terms with headroom
    let mut lowerers: Vec<(&BigInt, u64)> = Vec::new();
    for (v, coeff) in &c.terms {
        if card.vars.binary_search(v).is_ok() {
            let base = coeff * BigInt::from(lo[*v]);
            min += &base;
            max += base;
            let headroom = hi[*v] - lo[*v];
            if headroom > 0 {
                if coeff.is_positive() {
                    raisers.push((coeff, headroom));
                } else {
                    lowerers.push((coeff, headroom));
                }
            }
        } else if coeff.is_positive() {
            min += coeff * BigInt::from(lo[*v]);
            max += coeff * BigInt::from(hi[*v]);
        } else {
            min += coeff * BigInt::from(hi[*v]);
            max += coeff * BigInt::from(lo[*v]);
        }
    }
    raisers.sort_by(|a, b| b.0.cmp(a.0));
    let mut left = avail;
    for (coeff, headroom) in raisers {
        let take = headroom.min(left);
        max += coeff * &BigInt::from(take);
        left -= take;
        if left == 0 {
            break;
        }
    }
    lowerers.sort_by(|a, b| a.0.cmp(b.0));
    let mut left = avail;
    for (coeff, headroom) in lowerers {
        let take = headroom.min(left);
        min += coeff * &BigInt::from(take);
        left -= take;
        if left == 0 {
            break;
        }
    }
    Some((min, max))
}

/// Sound pruning: the constraint cannot hold anywhere inside the box if its
/// attainable range misses the right-hand side.
fn interval_excludes(c: &NormConstraint, lo: &[u64], hi: &[u64], cards: &[CardinalityRow]) -> bool {
    let mut min = BigInt::zero();
    let mut max = BigInt::zero();
    for (v, coeff) in &c.terms {
        let l = BigInt::from(lo[*v]);
        let h = BigInt::from(hi[*v]);
        if coeff.is_positive() {
            min += coeff * &l;
            max += coeff * &h;
        } else {
            min += coeff * &h;
            max += coeff * &l;
        }
    }
    for card in cards {
        match range_under_cardinality(c, lo, hi, card) {
            None => return true,
            Some((mn, mx)) => {
                min = min.max(mn);
                max = max.min(mx);
            }
        }
    }
    match c.rel {
        Rel::Le => min > c.rhs,
        Rel::Ge => max < c.rhs,
        Rel::Eq => min > c.rhs || max < c.rhs,
        _ => unreachable!(),
    }
}

const ENUMERATION_VOLUME: u128 = 32;

fn box_volume(lo: &[u64], hi: &[u64]) -> Option<u128> {
    let mut vol: u128 = 1;
    for (l, h) in lo.iter().zip(hi) {
        vol = vol.checked_mul((h - l + 1) as u128)?;
        if vol > ENUMERATION_VOLUME {
            return Some(vol);
        }
    }
    Some(vol)
}

/// Lexicographically first satisfying point inside a small box, if any.
fn enumerate_box(norm: &[NormConstraint], lo: &[u64], hi: &[u64]) -> Option<Vec<u64>> {
    let n = lo.len();
    let mut current: Vec<u64> = lo.to_vec();
    loop {
        let as_big: Vec<BigInt> = current.iter().map(|&v| BigInt::from(v)).collect();
        if norm.iter().all(|c| c.holds_big(&as_big)) {
            return Some(current);
        }
        // Odometer step, last variable fastest.
        let mut k = n;
        loop {
            if k == 0 {
                return None;
            }
            k -= 1;
            if current[k] < hi[k] {
                current[k] += 1;
                break;
            }
            current[k] = lo[k];
        }
    }
}

/// Decides feasibility; any returned witness re-verifies exactly against
/// the original constraints.
pub fn solve_feasibility(inst: &IlpInstance) -> Feasibility {
    let n = inst.variables.len();
    for c in &inst.constraints {
        for (v, _) in &c.terms {
            assert!(*v < n, "constraint references undeclared variable");
        }
    }
    let norm = normalize(&inst.constraints);
    let lo: Vec<u64> = vec![0; n];
    let hi: Vec<u64> = inst.variables.iter().map(|v| v.upper).collect();

    let result = search(&norm, lo, hi);
    if let Some(values) = result {
        let witness = Witness { values };
        assert!(
            inst.verify(&witness),
            "solver witness failed exact re-verification"
        );
        Feasibility::Feasible(witness)
    } else {
        Feasibility::Infeasible
    }
}

fn search(norm: &[NormConstraint], lo: Vec<u64>, hi: Vec<u64>) -> Option<Vec<u64>> {
    let cards = cardinality_rows(norm);
    // Depth-first; the floor branch is pushed last so it pops first.
    let mut stack = vec![(lo, hi)];
    while let Some((lo, hi)) = stack.pop() {
        if norm.iter().any(|c| interval_excludes(c, &lo, &hi, &cards)) {
            continue;
        }
        if box_volume(&lo, &hi).is_some_and(|v| v <= ENUMERATION_VOLUME) {
            if let Some(found) = enumerate_box(norm, &lo, &hi) {
                return Some(found);
            }
            continue;
        }
        let problem = LpProblem {
            bounds: lo
                .iter()
                .zip(&hi)
                .map(|(&l, &h)| (crate::rat_u64(l), Some(crate::rat_u64(h))))
                .collect(),
            rows: norm
                .iter()
                .map(|c| {
                    let mut coeffs = vec![Rat::zero(); lo.len()];
                    for (v, coeff) in &c.terms {
                        coeffs[*v] = Rat::from_integer(coeff.clone());
                    }
                    let rel = match c.rel {
                        Rel::Le => LpRel::Le,
                        Rel::Eq => LpRel::Eq,
                        Rel::Ge => LpRel::Ge,
                        _ => unreachable!(),
                    };
                    LpRow {
                        coeffs,
                        rel,
                        rhs: Rat::from_integer(c.rhs.clone()),
                    }
                })
                .collect(),
        };
        let point = match feasible_point(&problem) {
            LpOutcome::Infeasible => continue,
            LpOutcome::Feasible(x) => x,
        };
        // Most fractional component, ties to the lowest index.
        let half = Rat::new(BigInt::one(), BigInt::from(2));
        let mut branch: Option<(usize, Rat, Rat)> = None; // (var, value, |frac - 1/2|)
        for (j, v) in point.iter().enumerate() {
            if v.is_integer() {
                continue;
            }
            let frac = v - v.floor();
            let dist = (&frac - &half).abs();
            match &branch {
                Some((_, _, best)) if *best <= dist => {}
                _ => branch = Some((j, v.clone(), dist)),
            }
        }
        match branch {
            None => {
                let values: Vec<u64> = point
                    .iter()
                    .map(|v| v.to_integer().to_u64().expect("in-box value"))
                    .collect();
                return Some(values);
            }
            Some((j, v, _)) => {
                let floor = v.floor().to_integer().to_u64().expect("in-box value");
                let mut ceil_lo = lo.clone();
                ceil_lo[j] = floor + 1;
                let mut floor_hi = hi.clone();
                floor_hi[j] = floor;
                stack.push((ceil_lo, hi));
                stack.push((lo, floor_hi));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn var(upper: u64) -> IlpVariable {
        IlpVariable { upper }
    }

    fn c(terms: &[(usize, i64)], rel: Rel, rhs: i64) -> Constraint {
        Constraint {
            terms: terms.iter().map(|&(v, c)| (v, rat(c))).collect(),
            rel,
            rhs: rat(rhs),
        }
    }

    /// Independent oracle: full domain enumeration.
    fn exhaustive(inst: &IlpInstance) -> Option<Vec<u64>> {
        let n = inst.variables.len();
        let mut current = vec![0u64; n];
        loop {
            if inst.constraints.iter().all(|c| c.holds(&current)) {
                return Some(current);
            }
            let mut k = n;
            loop {
                if k == 0 {
                    return None;
                }
                k -= 1;
                if current[k] < inst.variables[k].upper {
                    current[k] += 1;
                    break;
                }
                current[k] = 0;
            }
        }
    }

    #[test]
    fn single_equality() {
        let inst = IlpInstance {
            variables: vec![var(5)],
            constraints: vec![c(&[(0, 2)], Rel::Eq, 4)],
        };
        let w = solve_feasibility(&inst).witness().unwrap();
        assert_eq!(w.values, vec![2]);
    }

    #[test]
    fn sum_forces_infeasible() {
        let inst = IlpInstance {
            variables: vec![var(3), var(3)],
            constraints: vec![
                c(&[(0, 1), (1, 1)], Rel::Eq, 1),
                c(&[(0, 1)], Rel::Ge, 1),
                c(&[(1, 1)], Rel::Ge, 1),
            ],
        };
        assert_eq!(solve_feasibility(&inst), Feasibility::Infeasible);
    }

    #[test]
    fn lp_feasible_integer_infeasible() {
        // 2x = 1 admits x = 1/2 but no integer.
        let inst = IlpInstance {
            variables: vec![var(1)],
            constraints: vec![c(&[(0, 2)], Rel::Eq, 1)],
        };
        assert_eq!(solve_feasibility(&inst), Feasibility::Infeasible);
    }

    #[test]
    fn strict_inequalities_tighten() {
        let inst = IlpInstance {
            variables: vec![var(4)],
            constraints: vec![c(&[(0, 1)], Rel::Gt, 2), c(&[(0, 1)], Rel::Lt, 4)],
        };
        let w = solve_feasibility(&inst).witness().unwrap();
        assert_eq!(w.values, vec![3]);
    }

    #[test]
    fn fractional_coefficients() {
        // x/2 + y/3 = 2 with x <= 4, y <= 6.
        let inst = IlpInstance {
            variables: vec![var(4), var(6)],
            constraints: vec![Constraint {
                terms: vec![
                    (0, Rat::new(1.into(), 2.into())),
                    (1, Rat::new(1.into(), 3.into())),
                ],
                rel: Rel::Eq,
                rhs: rat(2),
            }],
        };
        let w = solve_feasibility(&inst).witness().unwrap();
        assert!(inst.verify(&w));
    }

    #[test]
    fn zero_variables() {
        let sat = IlpInstance {
            variables: vec![],
            constraints: vec![c(&[], Rel::Le, 0)],
        };
        assert!(matches!(solve_feasibility(&sat), Feasibility::Feasible(_)));
        let unsat = IlpInstance {
            variables: vec![],
            constraints: vec![c(&[], Rel::Ge, 1)],
        };
        assert_eq!(solve_feasibility(&unsat), Feasibility::Infeasible);
    }

    #[test]
    fn deterministic_witness() {
        let inst = IlpInstance {
            variables: vec![var(6), var(6), var(6)],
            constraints: vec![c(&[(0, 1), (1, 2), (2, 3)], Rel::Ge, 7)],
        };
        let a = solve_feasibility(&inst);
        let b = solve_feasibility(&inst);
        assert_eq!(a, b);
    }

    fn random_instance(rng: &mut impl Rng) -> IlpInstance {
        let n = rng.gen_range(1..=4);
        let variables = (0..n).map(|_| var(rng.gen_range(0..=6))).collect();
        let num_constraints = rng.gen_range(1..=6);
        let rels = [Rel::Lt, Rel::Le, Rel::Eq, Rel::Ge, Rel::Gt];
        let constraints = (0..num_constraints)
            .map(|_| {
                let terms = (0..n)
                    .filter_map(|v| {
                        let coeff = rng.gen_range(-5..=5);
                        (coeff != 0).then_some((v, rat(coeff)))
                    })
                    .collect();
                Constraint {
                    terms,
                    rel: rels[rng.gen_range(0..rels.len())],
                    rhs: rat(rng.gen_range(-10..=10)),
                }
            })
            .collect();
        IlpInstance {
            variables,
            constraints,
        }
    }

    #[test]
    fn agreement_with_exhaustive_search() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for i in 0..400 {
            let inst = random_instance(&mut rng);
            let expected = exhaustive(&inst);
            match solve_feasibility(&inst) {
                Feasibility::Feasible(w) => {
                    assert!(
                        expected.is_some(),
                        "solver found {w:?} but oracle says infeasible (case {i})"
                    );
                    assert!(inst.verify(&w), "witness fails exact re-check (case {i})");
                }
                Feasibility::Infeasible => {
                    assert!(
                        expected.is_none(),
                        "oracle found {expected:?} but solver says infeasible (case {i})"
                    );
                }
            }
        }
    }

    #[test]
    fn dump_format() {
        let inst = IlpInstance {
            variables: vec![var(5), var(2)],
            constraints: vec![Constraint {
                terms: vec![(0, rat(2)), (1, Rat::new(1.into(), 3.into()))],
                rel: Rel::Le,
                rhs: Rat::new(7.into(), 2.into()),
            }],
        };
        let dump = inst.to_string();
        assert!(dump.contains("x0 in [0, 5]"));
        assert!(dump.contains("2 x0 + 1/3 x1 <= 7/2"));
    }
}
