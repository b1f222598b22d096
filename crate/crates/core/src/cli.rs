//! Command-line front end: parse an election file, run an attack solver or
//! the brute-force oracle, print the decision and witness.
//!
//! Exit codes: 0 = YES, 1 = NO, 2 = usage or parse error, 3 = oracle
//! refusal, 4 = engine disagreement. All structured output goes to stdout
//! and is byte-identical across runs; `elapsed_ms` goes to stderr.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::path::PathBuf;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::attacks::{self, AttackInstance, AttackKind, Mode, TieModel};
use crate::election::{CandidateId, Election, Profile, Vote};
use crate::format::parse_election;
use crate::oracle::{oracle_solve, OracleBudget, Refusal};
use crate::rules::{evaluate, Rule};

#[derive(Debug, Parser)]
#[command(
    name = "election-attacks",
    version,
    about = "Exact election attack solvers"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Engine {
    /// Condition systems plus integer feasibility.
    Main,
    /// Brute-force enumeration (tiny instances only).
    Oracle,
    /// Run both and compare decisions.
    Both,
}

#[derive(Debug, Args)]
struct AttackArgs {
    /// Voting rule, e.g. borda, approval:2, copeland:1/2.
    #[arg(long)]
    rule: Rule,
    /// Name of the distinguished candidate.
    #[arg(long)]
    target: String,
    /// Make the target lose instead of win.
    #[arg(long)]
    destructive: bool,
    #[arg(long, value_enum, default_value_t = Engine::Main)]
    engine: Engine,
    /// State cap for the oracle engine.
    #[arg(long)]
    max_states: Option<u64>,
    /// Election file.
    file: PathBuf,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compute the winner of an election.
    Winner {
        #[arg(long)]
        rule: Rule,
        file: PathBuf,
    },
    /// Can a coalition of new voters elect the target?
    Manipulate {
        #[arg(long)]
        manipulators: u64,
        #[command(flatten)]
        common: AttackArgs,
    },
    /// Can recasting existing ballots elect the target?
    Bribe {
        #[arg(long)]
        budget: u64,
        #[command(flatten)]
        common: AttackArgs,
    },
    /// Electoral control: change who or what gets voted on.
    Control {
        /// One of: add-votes, delete-votes, partition-votes-te,
        /// partition-votes-tp, add-cands, add-cands-unlimited,
        /// delete-cands, partition-cands-te, partition-cands-tp,
        /// runoff-partition-cands-te, runoff-partition-cands-tp.
        #[arg(long)]
        variant: String,
        #[arg(long)]
        budget: Option<u64>,
        /// Election file with the unregistered votes (add-votes).
        #[arg(long)]
        unregistered: Option<PathBuf>,
        /// Comma-separated names of the addable candidates (add-cands*).
        #[arg(long)]
        spoilers: Option<String>,
        #[command(flatten)]
        common: AttackArgs,
    },
}

pub struct Output {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Output {
    fn usage_error(message: String) -> Output {
        Output {
            stdout: String::new(),
            stderr: message,
            code: 2,
        }
    }
}

/// Entry point behind `main`; returns the full process outcome so tests can
/// drive it in-process.
pub fn run<I, T>(argv: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let rendered = e.render().to_string();
            return if code == 0 {
                Output {
                    stdout: rendered,
                    stderr: String::new(),
                    code,
                }
            } else {
                Output::usage_error(rendered)
            };
        }
    };
    match cli.command {
        Command::Winner { rule, file } => winner_command(rule, &file),
        Command::Manipulate {
            manipulators,
            common,
        } => attack_command(&common, "manipulation", |_| {
            Ok(AttackKind::Manipulation { manipulators })
        }),
        Command::Bribe { budget, common } => {
            attack_command(&common, "bribery", |_| Ok(AttackKind::Bribery { budget }))
        }
        Command::Control {
            variant,
            budget,
            unregistered,
            spoilers,
            common,
        } => {
            let label = format!("control:{variant}");
            attack_command(&common, &label, |e| {
                control_kind(
                    e,
                    &variant,
                    budget,
                    unregistered.as_deref(),
                    spoilers.as_deref(),
                )
            })
        }
    }
}

fn load_election(path: &std::path::Path) -> Result<Election, Output> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Output::usage_error(format!("cannot read {}: {e}\n", path.display())))?;
    parse_election(&text).map_err(|e| Output::usage_error(format!("{}: {e}\n", path.display())))
}

fn winner_command(rule: Rule, file: &std::path::Path) -> Output {
    let election = match load_election(file) {
        Ok(e) => e,
        Err(out) => return out,
    };
    if let Err(e) = rule.validate_for(election.num_candidates()) {
        return Output::usage_error(format!("{e}\n"));
    }
    let started = Instant::now();
    let winner = evaluate(&rule, &election);
    let elapsed = started.elapsed().as_millis();
    Output {
        stdout: format!("rule: {rule}\nwinner: {}\n", election.name(winner)),
        stderr: format!("elapsed_ms: {elapsed}\n"),
        code: 0,
    }
}

/// Resolves the control variant and its auxiliary inputs.
fn control_kind(
    election: &Election,
    variant: &str,
    budget: Option<u64>,
    unregistered: Option<&std::path::Path>,
    spoilers: Option<&str>,
) -> Result<AttackKind, String> {
    let need_budget = || budget.ok_or_else(|| format!("--budget is required for {variant}"));
    match variant {
        "add-votes" => {
            let path = unregistered
                .ok_or_else(|| "--unregistered FILE is required for add-votes".to_string())?;
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            let pool = parse_election(&text).map_err(|e| format!("{}: {e}", path.display()))?;
            let profile = remap_profile(&pool, election)?;
            Ok(AttackKind::AddVotes {
                budget: need_budget()?,
                unregistered: profile,
            })
        }
        "delete-votes" => Ok(AttackKind::DeleteVotes {
            budget: need_budget()?,
        }),
        "partition-votes-te" => Ok(AttackKind::PartitionVotes {
            model: TieModel::Eliminate,
        }),
        "partition-votes-tp" => Ok(AttackKind::PartitionVotes {
            model: TieModel::Promote,
        }),
        "add-cands" | "add-cands-unlimited" => {
            let names =
                spoilers.ok_or_else(|| format!("--spoilers NAMES is required for {variant}"))?;
            let mut set = BTreeSet::new();
            for name in names.split(',') {
                let name = name.trim();
                let id = election
                    .candidate_by_name(name)
                    .ok_or_else(|| format!("unknown spoiler candidate `{name}`"))?;
                set.insert(id);
            }
            let unlimited = variant == "add-cands-unlimited";
            let budget = if unlimited {
                set.len() as u64
            } else {
                need_budget()?
            };
            Ok(AttackKind::AddCandidates {
                unlimited,
                budget,
                spoilers: set,
            })
        }
        "delete-cands" => Ok(AttackKind::DeleteCandidates {
            budget: need_budget()?,
        }),
        "partition-cands-te" => Ok(AttackKind::PartitionCandidates {
            runoff: false,
            model: TieModel::Eliminate,
        }),
        "partition-cands-tp" => Ok(AttackKind::PartitionCandidates {
            runoff: false,
            model: TieModel::Promote,
        }),
        "runoff-partition-cands-te" => Ok(AttackKind::PartitionCandidates {
            runoff: true,
            model: TieModel::Eliminate,
        }),
        "runoff-partition-cands-tp" => Ok(AttackKind::PartitionCandidates {
            runoff: true,
            model: TieModel::Promote,
        }),
        other => Err(format!("unknown control variant `{other}`")),
    }
}

/// Votes from another parsed file, relabelled onto this election's ids by
/// candidate name.
fn remap_profile(source: &Election, onto: &Election) -> Result<Profile, String> {
    if source.num_candidates() != onto.num_candidates() {
        return Err("unregistered votes cover a different candidate set".into());
    }
    let mut map = Vec::with_capacity(source.num_candidates());
    for c in source.candidates() {
        let id = onto
            .candidate_by_name(&c.name)
            .ok_or_else(|| format!("unregistered candidate `{}` is not in the election", c.name))?;
        map.push(id);
    }
    let mut profile = Profile::new();
    for (vote, count) in source.profile().iter() {
        let ranking: Vec<CandidateId> = vote.ranking().iter().map(|c| map[c.0]).collect();
        profile.add(Vote::new(ranking), count);
    }
    Ok(profile)
}

fn attack_command(
    common: &AttackArgs,
    label: &str,
    kind: impl FnOnce(&Election) -> Result<AttackKind, String>,
) -> Output {
    let election = match load_election(&common.file) {
        Ok(e) => e,
        Err(out) => return out,
    };
    if let Err(e) = common.rule.validate_for(election.num_candidates()) {
        return Output::usage_error(format!("{e}\n"));
    }
    let target = match election.candidate_by_name(&common.target) {
        Some(c) => c,
        None => {
            return Output::usage_error(format!("unknown target candidate `{}`\n", common.target))
        }
    };
    let kind = match kind(&election) {
        Ok(k) => k,
        Err(e) => return Output::usage_error(format!("{e}\n")),
    };
    if let AttackKind::AddCandidates { spoilers, .. } = &kind {
        if spoilers.contains(&target) {
            return Output::usage_error(format!(
                "target `{}` cannot be one of the spoilers\n",
                common.target
            ));
        }
    }
    let mode = if common.destructive {
        Mode::Destructive
    } else {
        Mode::Constructive
    };
    let instance = AttackInstance {
        rule: common.rule.clone(),
        election,
        target,
        kind,
        mode,
    };

    let oracle_budget = OracleBudget {
        max_states: common
            .max_states
            .unwrap_or(OracleBudget::default().max_states),
    };
    let started = Instant::now();
    let (result, oracle_agrees) = match common.engine {
        Engine::Main => (attacks::solve(&instance), None),
        Engine::Oracle => match oracle_solve(&instance, oracle_budget) {
            Ok(r) => (r, None),
            Err(refusal) => return refusal_output(refusal),
        },
        Engine::Both => {
            let main = attacks::solve(&instance);
            match oracle_solve(&instance, oracle_budget) {
                Ok(reference) => {
                    let agree = main.decision == reference.decision;
                    (main, Some(agree))
                }
                Err(refusal) => return refusal_output(refusal),
            }
        }
    };
    let elapsed = started.elapsed().as_millis();

    let mut stdout = String::new();
    stdout.push_str(&format!("rule: {}\n", common.rule));
    stdout.push_str(&format!("attack: {label}\n"));
    stdout.push_str(&format!(
        "mode: {}\n",
        if common.destructive {
            "destructive"
        } else {
            "constructive"
        }
    ));
    stdout.push_str(&format!("target: {}\n", common.target));
    stdout.push_str(&format!(
        "decision: {}\n",
        if result.decision { "YES" } else { "NO" }
    ));
    if let Some(witness) = &result.witness {
        stdout.push_str("witness:\n");
        for line in witness.render(&instance.election) {
            stdout.push_str("  ");
            stdout.push_str(&line);
            stdout.push('\n');
        }
    }
    if let Some(agree) = oracle_agrees {
        stdout.push_str(&format!("engines_agree: {agree}\n"));
    }

    let code = match (result.decision, oracle_agrees) {
        (_, Some(false)) => 4,
        (true, _) => 0,
        (false, _) => 1,
    };
    Output {
        stdout,
        stderr: format!("elapsed_ms: {elapsed}\n"),
        code,
    }
}

fn refusal_output(refusal: Refusal) -> Output {
    Output {
        stdout: String::new(),
        stderr: format!("oracle refused: {refusal}\n"),
        code: 3,
    }
}
