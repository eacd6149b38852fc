//! A small versioned text store of known complete mappings.
//!
//! One record per line, tab separated: group selector, parity, cycles in
//! 1-based index notation, provenance. Lines starting with `#` are comments.

use std::fs::OpenOptions;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::mapping::is_complete_mapping;
use crate::perm::{Parity, Perm};
use crate::selector::resolve_group;

pub const FORMAT_HEADER: &str = "# cmap fixtures v1";
pub const FIXTURES_ENV: &str = "CMAP_FIXTURES";
const BUILTIN: &str = include_str!("../data/fixtures.txt");

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixtureRecord {
    pub group: String,
    pub parity: Parity,
    pub cycles: String,
    pub provenance: String,
}

impl FixtureRecord {
    pub fn new(group: &str, f: &Perm, provenance: &str) -> Self {
        FixtureRecord {
            group: group.to_string(),
            parity: f.parity(),
            cycles: f.to_cycle_string(),
            provenance: provenance.to_string(),
        }
    }

    pub fn perm(&self, degree: usize) -> Result<Perm> {
        Perm::parse_cycles(&self.cycles, degree)
    }

    /// Builds the group and checks that the record is a complete mapping of
    /// the stated parity.
    pub fn verify(&self) -> Result<(FiniteGroup, Perm)> {
        let g = resolve_group(&self.group)?;
        let f = self.perm(g.order())?;
        if !is_complete_mapping(&g, &f)? {
            return Err(Error::NotCompleteMapping(format!("fixture for {}", self.group)));
        }
        if f.parity() != self.parity {
            return Err(Error::Internal(format!(
                "fixture for {} is {}, recorded as {}",
                self.group,
                f.parity(),
                self.parity
            )));
        }
        Ok((g, f))
    }

    pub fn to_line(&self) -> String {
        format!("{}\t{}\t{}\t{}", self.group, self.parity, self.cycles, self.provenance)
    }

    pub fn parse_line(line: &str) -> Result<Self> {
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 4 {
            return Err(Error::Parse(format!("fixture line needs 4 tab-separated fields: '{line}'")));
        }
        Ok(FixtureRecord {
            group: cols[0].trim().to_string(),
            parity: Parity::parse(cols[1].trim())?,
            cycles: cols[2].trim().to_string(),
            provenance: cols[3].trim().to_string(),
        })
    }
}

#[derive(Debug, Clone, Default)]
pub struct FixtureStore {
    pub records: Vec<FixtureRecord>,
    pub path: Option<PathBuf>,
}

impl FixtureStore {
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim_end).filter(|l| !l.trim().is_empty());
        match lines.next() {
            Some(h) if h.trim() == FORMAT_HEADER => {}
            other => {
                return Err(Error::Parse(format!(
                    "fixture store must start with '{FORMAT_HEADER}', found {other:?}"
                )))
            }
        }
        let records = lines
            .filter(|l| !l.starts_with('#'))
            .map(FixtureRecord::parse_line)
            .collect::<Result<Vec<_>>>()?;
        Ok(FixtureStore { records, path: None })
    }

    /// The store shipped with the crate.
    pub fn builtin() -> Self {
        Self::parse(BUILTIN).expect("built-in fixture store parses")
    }

    pub fn open(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let mut store = Self::parse(&std::fs::read_to_string(path)?)?;
        store.path = Some(path.to_path_buf());
        Ok(store)
    }

    /// The file named by `CMAP_FIXTURES` if set, else the built-in store.
    pub fn load_default() -> Result<Self> {
        match std::env::var_os(FIXTURES_ENV) {
            Some(p) => Self::open(p),
            None => Ok(Self::builtin()),
        }
    }

    pub fn find(&self, group: &str, parity: Parity) -> Option<&FixtureRecord> {
        self.records
            .iter()
            .find(|r| r.group == group && r.parity == parity)
    }

    pub fn for_group<'a>(&'a self, group: &'a str) -> impl Iterator<Item = &'a FixtureRecord> + 'a {
        self.records.iter().filter(move |r| r.group == group)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{FORMAT_HEADER}\n");
        for r in &self.records {
            out.push_str(&r.to_line());
            out.push('\n');
        }
        out
    }

    /// Adds a record in memory and, when backed by a file, appends it there.
    /// Exact duplicates are skipped.
    pub fn append(&mut self, record: FixtureRecord) -> Result<bool> {
        if self.records.contains(&record) {
            return Ok(false);
        }
        if let Some(path) = &self.path {
            let mut file = OpenOptions::new().append(true).open(path)?;
            writeln!(file, "{}", record.to_line())?;
        }
        self.records.push(record);
        Ok(true)
    }
}
