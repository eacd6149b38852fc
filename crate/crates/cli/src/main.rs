mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use cmap_core::fixtures::{FixtureStore, FIXTURES_ENV};
use cmap_core::selector::GroupSelector;
use cmap_core::FiniteGroup;

use report::Format;

/// Complete mappings and orthomorphisms of finite groups.
#[derive(Debug, Parser)]
#[command(name = "cmap", version)]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value = "text", global = true)]
    pub format: Format,
    /// Seed for every randomized step (default 0).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Fixture store; defaults to the built-in one.
    #[arg(long, env = FIXTURES_ENV, global = true)]
    pub fixtures: Option<PathBuf>,
    /// Refuse randomized work unless --seed is given.
    #[arg(long, env = "CMAP_CI", global = true)]
    pub ci: bool,
    #[command(subcommand)]
    pub command: Command,
}

/// Exactly one of `--family` or `--cayley`.
#[derive(Debug, Clone, Args)]
#[group(required = true, multiple = false)]
pub struct GroupArg {
    /// Group selector, e.g. cyclic:9, field:16, 2group:SD:5, small16:6, sd32:i2.
    #[arg(long)]
    pub family: Option<String>,
    /// Cayley-table file.
    #[arg(long)]
    pub cayley: Option<PathBuf>,
}

impl GroupArg {
    pub fn selector(&self) -> Result<GroupSelector> {
        match (&self.family, &self.cayley) {
            (Some(f), None) => f.parse().with_context(|| format!("group selector '{f}'")),
            (None, Some(p)) => Ok(GroupSelector::Cayley(p.display().to_string())),
            _ => bail!("give exactly one of --family or --cayley"),
        }
    }

    pub fn build(&self) -> Result<FiniteGroup> {
        let sel = self.selector()?;
        sel.build().with_context(|| format!("building {sel}"))
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Groups generated by the complete mappings and orthomorphisms of 𝔽_q.
    VerifyTable {
        /// Field orders to check (default: 2,3,4,5,7,8,9,11,16).
        #[arg(long, value_delimiter = ',')]
        q: Vec<usize>,
        /// Consecutive non-growing additions that end sampled mode.
        #[arg(long, default_value_t = 25)]
        stabilize: usize,
    },
    /// Verify one of the explicit construction families over a parameter range.
    AppendixCheck {
        /// A: semidihedral orthomorphisms; B: modular single cycles;
        /// C: modular even mappings of order 16k; D: listed fixtures.
        which: commands::ConstructionSet,
        #[arg(long)]
        from: Option<usize>,
        #[arg(long)]
        to: Option<usize>,
    },
    /// Count complete mappings by parity.
    Count {
        #[command(flatten)]
        group: GroupArg,
        /// Allow exhaustive counting above order 16.
        #[arg(long)]
        allow_large: bool,
    },
    /// Find a complete mapping with the given properties.
    Search {
        #[command(flatten)]
        group: GroupArg,
        #[arg(long)]
        parity: Option<String>,
        /// Require a single cycle (a harmonious ordering).
        #[arg(long)]
        single_cycle: bool,
        /// Require f(1) = 1.
        #[arg(long)]
        fix_identity: bool,
        /// List up to this many mappings exhaustively instead of searching.
        #[arg(long)]
        list: Option<u64>,
        #[arg(long, default_value_t = 200_000)]
        node_limit: u64,
        #[arg(long, default_value_t = 32)]
        restarts: u32,
        /// Append the result to the fixture store file.
        #[arg(long)]
        record: bool,
    },
    /// Decide whether complete mappings of both parities exist.
    PropertyP {
        #[command(flatten)]
        group: GroupArg,
        #[arg(long, default_value_t = 200_000)]
        node_limit: u64,
        #[arg(long, default_value_t = 32)]
        restarts: u32,
        /// Append new witnesses to the fixture store file.
        #[arg(long)]
        record: bool,
        /// Print the method trace as JSON lines after the report.
        #[arg(long)]
        trace: bool,
    },
    /// Parity types of the squares L_h.
    Latin {
        #[command(flatten)]
        group: GroupArg,
        /// identity | random | cm | orth | a cycle string such as "(1,2,3)"
        #[arg(long, default_value = "random")]
        h: String,
        /// Number of h to draw when h is random.
        #[arg(long, default_value_t = 1)]
        samples: usize,
        /// Print the square itself (text format only).
        #[arg(long)]
        show: bool,
    },
    /// Inspect or verify the fixture store.
    Fixtures {
        #[command(subcommand)]
        action: FixtureAction,
    },
    /// Export a group.
    Group {
        #[command(subcommand)]
        action: GroupAction,
    },
    /// Compare the asymptotic count estimate with an exact count.
    Estimate {
        #[command(flatten)]
        group: GroupArg,
    },
}

#[derive(Debug, Subcommand)]
pub enum FixtureAction {
    List,
    Verify,
}

#[derive(Debug, Subcommand)]
pub enum GroupAction {
    /// Cayley table with labels.
    Export {
        #[command(flatten)]
        group: GroupArg,
    },
}

impl Cli {
    pub fn seed(&self, randomized: bool) -> Result<u64> {
        match self.seed {
            Some(s) => Ok(s),
            None if self.ci && randomized => bail!("--seed is required for randomized work in CI mode"),
            None => Ok(0),
        }
    }

    pub fn store(&self) -> Result<FixtureStore> {
        match &self.fixtures {
            Some(p) => FixtureStore::open(p).with_context(|| format!("fixture store {}", p.display())),
            None => Ok(FixtureStore::builtin()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok((report, name, seed)) => {
            print!("{}", report.render(cli.format, name, seed));
            if report.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
