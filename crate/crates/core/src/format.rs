//! Election file parsing and canonical serialization.
//!
//! ```text
//! # comment
//! candidates: p,a,b
//! tiebreak: p,a,b
//! 2: a>p>b
//! 1: p>a>b
//! ```
//!
//! The `tiebreak` line is optional and defaults to the candidate order.
//! Duplicate vote lines merge by summing counts. The serializer emits
//! candidates, tiebreak, then vote lines in lexicographic ranking order.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::election::{CandidateId, Election, Profile, TieBreak, Vote};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("{kind}, line {line}")]
    Line { line: usize, kind: LineError },
    #[error("missing candidates declaration")]
    MissingCandidates,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LineError {
    #[error("malformed line")]
    Malformed,
    #[error("unknown candidate name `{0}`")]
    UnknownCandidate(String),
    #[error("duplicate candidate in ranking")]
    DuplicateInRanking,
    #[error("missing candidate in ranking")]
    MissingInRanking,
    #[error("duplicate candidate name `{0}`")]
    DuplicateCandidateName(String),
    #[error("empty candidate name")]
    EmptyCandidateName,
}

fn err(line: usize, kind: LineError) -> ParseError {
    ParseError::Line { line, kind }
}

/// Resolves a `>`-separated ranking against the declared names; the result
/// must rank every candidate exactly once.
fn parse_ranking(
    line: usize,
    text: &str,
    names: &[String],
) -> Result<Vec<CandidateId>, ParseError> {
    let mut ids = Vec::new();
    let mut seen = BTreeSet::new();
    for token in text.split('>') {
        let token = token.trim();
        if token.is_empty() {
            return Err(err(line, LineError::Malformed));
        }
        let id = names
            .iter()
            .position(|n| n == token)
            .ok_or_else(|| err(line, LineError::UnknownCandidate(token.to_string())))?;
        if !seen.insert(id) {
            return Err(err(line, LineError::DuplicateInRanking));
        }
        ids.push(CandidateId(id));
    }
    if ids.len() < names.len() {
        return Err(err(line, LineError::MissingInRanking));
    }
    Ok(ids)
}

fn parse_name_list(
    line: usize,
    text: &str,
    names: &[String],
) -> Result<Vec<CandidateId>, ParseError> {
    let mut ids = Vec::new();
    let mut seen = BTreeSet::new();
    for token in text.split(',') {
        let token = token.trim();
        if token.is_empty() {
            return Err(err(line, LineError::Malformed));
        }
        let id = names
            .iter()
            .position(|n| n == token)
            .ok_or_else(|| err(line, LineError::UnknownCandidate(token.to_string())))?;
        if !seen.insert(id) {
            return Err(err(line, LineError::DuplicateInRanking));
        }
        ids.push(CandidateId(id));
    }
    if ids.len() < names.len() {
        return Err(err(line, LineError::MissingInRanking));
    }
    Ok(ids)
}

pub fn parse_election(text: &str) -> Result<Election, ParseError> {
    let mut names: Option<Vec<String>> = None;
    let mut tiebreak: Option<Vec<CandidateId>> = None;
    let mut profile = Profile::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let s = raw.trim();
        if s.is_empty() || s.starts_with('#') {
            continue;
        }
        if let Some(rest) = s.strip_prefix("candidates:") {
            if names.is_some() {
                return Err(err(line, LineError::Malformed));
            }
            let mut list = Vec::new();
            for token in rest.split(',') {
                let token = token.trim();
                if token.is_empty() {
                    return Err(err(line, LineError::EmptyCandidateName));
                }
                if token.contains(['>', ',', ':', '#']) {
                    return Err(err(line, LineError::Malformed));
                }
                if list.iter().any(|n| n == token) {
                    return Err(err(
                        line,
                        LineError::DuplicateCandidateName(token.to_string()),
                    ));
                }
                list.push(token.to_string());
            }
            names = Some(list);
            continue;
        }
        let declared = match &names {
            Some(n) => n,
            None => return Err(err(line, LineError::Malformed)),
        };
        if let Some(rest) = s.strip_prefix("tiebreak:") {
            if tiebreak.is_some() {
                return Err(err(line, LineError::Malformed));
            }
            tiebreak = Some(parse_name_list(line, rest, declared)?);
            continue;
        }
        let (count, ranking) = match s.split_once(':') {
            Some(parts) => parts,
            None => return Err(err(line, LineError::Malformed)),
        };
        let count: u64 = match count.trim().parse() {
            Ok(c) => c,
            Err(_) => return Err(err(line, LineError::Malformed)),
        };
        let ids = parse_ranking(line, ranking, declared)?;
        profile.add(Vote::new(ids), count);
    }

    let names = names.ok_or(ParseError::MissingCandidates)?;
    let m = names.len();
    let tiebreak = match tiebreak {
        Some(p) => TieBreak::new(p),
        None => TieBreak::default_order(m),
    };
    Ok(Election::new(names, profile, tiebreak))
}

/// Canonical text form; `parse_election(serialize(e))` reproduces `e`.
pub fn serialize(e: &Election) -> String {
    let mut out = String::new();
    let names: Vec<&str> = e.candidates().iter().map(|c| c.name.as_str()).collect();
    out.push_str("candidates: ");
    out.push_str(&names.join(","));
    out.push('\n');
    out.push_str("tiebreak: ");
    let priority: Vec<&str> = e.tiebreak().priority().iter().map(|&c| e.name(c)).collect();
    out.push_str(&priority.join(","));
    out.push('\n');
    for (vote, count) in e.profile().iter() {
        let ranked: Vec<&str> = vote.ranking().iter().map(|&c| e.name(c)).collect();
        out.push_str(&format!("{count}: {}\n", ranked.join(">")));
    }
    out
}
