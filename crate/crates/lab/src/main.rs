use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;
use synchrotree::exploration::{audit, explore};
use synchrotree::io::{automaton_to_json, input_spec_from_json, read_automaton, read_text, write_automaton};
use synchrotree::sync::{all_tree_words, exact_certificate, greedy_fallback, tree_sync_word, SearchMode};
use synchrotree::Automaton;
use synchrotree_lab::{run, ExperimentConfig, KRule, LabError};

#[derive(Parser)]
#[command(name = "synchrotree", version, about = "Synchronizing random automata through w-trees")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw a uniformly random automaton.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        alphabet: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Synchronizing word through a tree word.
    Sync {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 0.2)]
        epsilon: f64,
        /// Maximum number of candidate words examined.
        #[arg(long)]
        budget: Option<usize>,
        /// Sample candidates with this seed instead of scanning in order.
        #[arg(long)]
        sample_seed: Option<u64>,
        #[arg(long)]
        emit_word: bool,
        /// Use the greedy pair-merging word when no tree word is found.
        #[arg(long)]
        fallback: bool,
    },
    /// Shortest synchronizing word by power-set search (at most 20 states).
    SyncExact {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Tree words of length k.
    TreeWords {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        k: usize,
        /// Include self-conjugate words.
        #[arg(long)]
        all: bool,
    },
    /// Exhaustive bijection and commutation audit.
    BijectionAudit {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
    },
    /// Exploration trace of an input, as JSON lines.
    Explore {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        spec: PathBuf,
    },
    /// Run an experiment from a JSON config.
    Experiment {
        name: String,
        #[arg(long)]
        config: PathBuf,
    },
}

enum Outcome {
    Found,
    NotFound,
}

fn main() -> ExitCode {
    match dispatch(Cli::parse().command) {
        Ok(Outcome::Found) => ExitCode::SUCCESS,
        Ok(Outcome::NotFound) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cmd: Command) -> Result<Outcome, LabError> {
    match cmd {
        Command::Gen { n, alphabet, seed, out } => {
            let a = Automaton::random(n, alphabet, seed)?;
            match out {
                Some(path) => write_automaton(&path, &a)?,
                None => println!("{}", automaton_to_json(&a)),
            }
            Ok(Outcome::Found)
        }
        Command::Sync { input, epsilon, budget, sample_seed, emit_word, fallback } => {
            let a = read_automaton(&input)?;
            let mode = sample_seed.map_or(SearchMode::Exhaustive, |seed| SearchMode::Sampled { seed });
            let mut cert = tree_sync_word(&a, epsilon, budget.unwrap_or(usize::MAX), mode)?;
            if cert.is_none() && fallback {
                cert = greedy_fallback(&a)?;
            }
            match cert {
                Some(c) => {
                    println!("{}", c.to_json(emit_word));
                    Ok(Outcome::Found)
                }
                None => {
                    eprintln!("no synchronizing word found");
                    Ok(Outcome::NotFound)
                }
            }
        }
        Command::SyncExact { input } => match exact_certificate(&read_automaton(&input)?)? {
            Some(c) => {
                println!("{}", c.to_json(true));
                Ok(Outcome::Found)
            }
            None => {
                eprintln!("not synchronizable");
                Ok(Outcome::NotFound)
            }
        },
        Command::TreeWords { input, k, all } => {
            let a = read_automaton(&input)?;
            let words = all_tree_words(&a, k, all)?;
            for t in &words {
                println!("{}", json!({"word": t.word.to_text(a.alphabet()), "H": t.height, "root": t.root}));
            }
            Ok(if words.is_empty() { Outcome::NotFound } else { Outcome::Found })
        }
        Command::BijectionAudit { n, k } => {
            let cfg = ExperimentConfig::new("bijection_audit", (2..=n).collect(), 1, 0).with_k(KRule::Explicit(k));
            let rec = run(&cfg)?;
            print!("{}", rec.to_csv());
            let failures = rec.get("failures", None).unwrap_or(0.0);
            if failures > 0.0 {
                return Err(LabError::Config(format!("audit found {failures} failures")));
            }
            Ok(Outcome::Found)
        }
        Command::Explore { input, spec } => {
            let a = read_automaton(&input)?;
            let u = input_spec_from_json(&read_text(&spec)?, a.alphabet())?;
            let trace = explore(&a, &u)?;
            print!("{}", trace.to_json_lines());
            match audit(&trace) {
                Ok(s) => eprintln!("claims hold on {} prefixes", s.prefixes),
                Err(v) => return Err(LabError::Config(format!("claim violated: {v:?}"))),
            }
            Ok(Outcome::Found)
        }
        Command::Experiment { name, config } => {
            let cfg = ExperimentConfig::load(&config)?;
            if cfg.experiment != name {
                return Err(LabError::Config(format!("config is for {:?}, not {name:?}", cfg.experiment)));
            }
            let rec = run(&cfg)?;
            match &cfg.output {
                Some(out) => {
                    let side = rec.write(out)?;
                    eprintln!("wrote {} and {}", out.display(), side.display());
                    println!("{}", serde_json::to_string(&rec.derived).expect("numbers serialize"));
                }
                None => print!("{}", rec.to_csv()),
            }
            Ok(Outcome::Found)
        }
    }
}
