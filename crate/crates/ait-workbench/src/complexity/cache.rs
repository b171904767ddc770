//! Enumeration cache: every program that halted under a dovetailing schedule.
//!
//! On disk the cache is line-delimited JSON. The first line is a header with
//! the format version, machine mode, schedule, record count and a SHA-256 of
//! the record lines; each following line is one record.

use std::collections::{HashMap, HashSet};
use std::io::{BufRead, Write};
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::machine::{Mode, UniversalMachine};
use super::ComplexityError;
use crate::codec::{BitString, Nat};

pub const CACHE_FORMAT_VERSION: u32 = 1;

/// One dovetailing round: every string of length `<= max_len` runs for at
/// most `max_steps` steps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Round {
    pub max_len: usize,
    pub max_steps: u64,
}

impl Round {
    pub fn new(max_len: usize, max_steps: u64) -> Self {
        Round { max_len, max_steps }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Record {
    pub program: BitString,
    #[serde(with = "crate::codec::nat_dec")]
    pub input: Nat,
    pub output: BitString,
    pub steps: u64,
    pub round: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CacheHeader {
    pub format_version: u32,
    pub mode: Mode,
    pub schedule: Vec<Round>,
    pub records: usize,
    pub content_hash: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumerationCache {
    pub mode: Mode,
    pub schedule: Vec<Round>,
    pub records: Vec<Record>,
    halted: HashSet<BitString>,
}

impl EnumerationCache {
    pub fn empty(mode: Mode) -> Self {
        EnumerationCache { mode, schedule: Vec::new(), records: Vec::new(), halted: HashSet::new() }
    }

    pub fn contains(&self, p: &BitString) -> bool {
        self.halted.contains(p)
    }

    /// True when no halting program is a proper prefix of another. Sorted
    /// lexicographically, a prefix sits directly before some extension of
    /// it, so adjacent pairs suffice.
    pub fn is_prefix_free(&self) -> bool {
        let mut ps: Vec<&[bool]> = self.records.iter().map(|r| r.program.bits()).collect();
        ps.sort_unstable();
        ps.windows(2).all(|w| !w[1].starts_with(w[0]))
    }

    /// The largest length and step bound seen over all rounds.
    pub fn budget(&self) -> Round {
        Round {
            max_len: self.schedule.iter().map(|r| r.max_len).max().unwrap_or(0),
            max_steps: self.schedule.iter().map(|r| r.max_steps).max().unwrap_or(0),
        }
    }

    fn record_lines(&self) -> Vec<String> {
        self.records.iter().map(|r| serde_json::to_string(r).expect("records serialize")).collect()
    }

    /// SHA-256 over the mode and the record lines, hex encoded.
    pub fn content_hash(&self) -> String {
        let mut h = Sha256::new();
        h.update(self.mode.to_string().as_bytes());
        for line in self.record_lines() {
            h.update(b"\n");
            h.update(line.as_bytes());
        }
        hex::encode(h.finalize())
    }

    pub fn header(&self) -> CacheHeader {
        CacheHeader {
            format_version: CACHE_FORMAT_VERSION,
            mode: self.mode,
            schedule: self.schedule.clone(),
            records: self.records.len(),
            content_hash: self.content_hash(),
        }
    }

    pub fn write_to(&self, mut w: impl Write) -> std::io::Result<()> {
        let header = serde_json::to_string(&self.header()).expect("header serializes");
        writeln!(w, "{header}")?;
        for line in self.record_lines() {
            writeln!(w, "{line}")?;
        }
        Ok(())
    }

    pub fn save(&self, path: &Path) -> Result<(), ComplexityError> {
        let io = |e| ComplexityError::Io { path: path.display().to_string(), source: e };
        if let Some(dir) = path.parent() {
            std::fs::create_dir_all(dir).map_err(io)?;
        }
        let f = std::fs::File::create(path).map_err(io)?;
        let mut w = std::io::BufWriter::new(f);
        self.write_to(&mut w).map_err(io)?;
        w.flush().map_err(io)
    }

    pub fn read_from(r: impl BufRead, origin: &str) -> Result<Self, ComplexityError> {
        let bad = |m: String| ComplexityError::CacheFormat { path: origin.to_string(), message: m };
        let mut lines = r.lines();
        let first = lines
            .next()
            .ok_or_else(|| bad("empty file".into()))?
            .map_err(|e| ComplexityError::Io { path: origin.to_string(), source: e })?;
        let header: CacheHeader = serde_json::from_str(&first).map_err(|e| bad(format!("header: {e}")))?;
        if header.format_version != CACHE_FORMAT_VERSION {
            return Err(bad(format!("unsupported format version {}", header.format_version)));
        }
        let mut records = Vec::with_capacity(header.records);
        for (i, line) in lines.enumerate() {
            let line = line.map_err(|e| ComplexityError::Io { path: origin.to_string(), source: e })?;
            if line.trim().is_empty() {
                continue;
            }
            let rec: Record = serde_json::from_str(&line).map_err(|e| bad(format!("record {}: {e}", i + 1)))?;
            records.push(rec);
        }
        if records.len() != header.records {
            return Err(bad(format!("header says {} records, found {}", header.records, records.len())));
        }
        let halted = records.iter().map(|r| r.program.clone()).collect();
        let cache = EnumerationCache { mode: header.mode, schedule: header.schedule, records, halted };
        let hash = cache.content_hash();
        if hash != header.content_hash {
            return Err(ComplexityError::CacheHash { path: origin.to_string(), expected: header.content_hash, found: hash });
        }
        Ok(cache)
    }

    pub fn load(path: &Path) -> Result<Self, ComplexityError> {
        let f = std::fs::File::open(path).map_err(|e| ComplexityError::Io { path: path.display().to_string(), source: e })?;
        Self::read_from(std::io::BufReader::new(f), &path.display().to_string())
    }
}

/// Runs every schedule round over the strings not yet known to halt, in
/// canonical (length, lexicographic) order, and appends the new halts.
/// Work is split over `jobs` threads; results are merged in canonical order
/// so the cache does not depend on `jobs`.
pub fn dovetail(
    machine: &UniversalMachine,
    schedule: &[Round],
    cache: Option<EnumerationCache>,
    jobs: usize,
) -> Result<EnumerationCache, ComplexityError> {
    let mut cache = cache.unwrap_or_else(|| EnumerationCache::empty(machine.mode));
    if cache.mode != machine.mode {
        return Err(ComplexityError::ModeMismatch { expected: machine.mode, found: cache.mode });
    }
    if let Some(r) = schedule.iter().find(|r| r.max_len > 30) {
        return Err(ComplexityError::ScheduleTooLarge { max_len: r.max_len });
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| ComplexityError::Pool(e.to_string()))?;
    for round in schedule {
        let round_no = cache.schedule.len();
        let mut fresh: Vec<Record> = Vec::new();
        for len in 0..=round.max_len {
            let count = 1u64 << len;
            let halted = &cache.halted;
            let found: Vec<Record> = pool.install(|| {
                (0..count)
                    .into_par_iter()
                    .map_init(HashMap::new, |programs, v| {
                        let p = BitString::from_index(len, v);
                        if halted.contains(&p) {
                            return None;
                        }
                        machine.run_with(&p, round.max_steps, programs).map(|r| Record {
                            program: p,
                            input: r.input,
                            output: r.output,
                            steps: r.steps,
                            round: round_no,
                        })
                    })
                    .flatten()
                    .collect()
            });
            fresh.extend(found);
        }
        for r in &fresh {
            cache.halted.insert(r.program.clone());
        }
        cache.records.extend(fresh);
        cache.schedule.push(*round);
    }
    Ok(cache)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schedule_of_four_tries_thirty_one_strings() {
        let m = UniversalMachine::new(Mode::Plain);
        let c = dovetail(&m, &[Round::new(4, 100)], None, 2).unwrap();
        // every plain string of length <= 4 halts on this machine
        assert_eq!(c.records.len(), 31);
    }

    #[test]
    fn rerun_adds_nothing() {
        let m = UniversalMachine::new(Mode::Prefix);
        let c1 = dovetail(&m, &[Round::new(10, 100)], None, 1).unwrap();
        let c2 = dovetail(&m, &[Round::new(10, 100)], Some(c1.clone()), 3).unwrap();
        assert_eq!(c1.records, c2.records);
        assert_eq!(c1.content_hash(), c2.content_hash());
    }

    #[test]
    fn save_and_load() {
        let m = UniversalMachine::new(Mode::Prefix);
        let c = dovetail(&m, &[Round::new(8, 50)], None, 1).unwrap();
        let mut buf = Vec::new();
        c.write_to(&mut buf).unwrap();
        let back = EnumerationCache::read_from(&buf[..], "mem").unwrap();
        assert_eq!(back, c);
        // flip one byte in a record line: the hash check must notice
        let text = String::from_utf8(buf).unwrap().replacen("\"steps\":", "\"steps\":1", 1);
        assert!(EnumerationCache::read_from(text.as_bytes(), "mem").is_err());
    }

    #[test]
    fn prefix_mode_domain_is_an_antichain() {
        let m = UniversalMachine::new(Mode::Prefix);
        let c = dovetail(&m, &[Round::new(12, 200)], None, 2).unwrap();
        assert!(!c.records.is_empty());
        assert!(c.is_prefix_free());
        let plain = dovetail(&UniversalMachine::new(Mode::Plain), &[Round::new(3, 50)], None, 1).unwrap();
        assert!(!plain.is_prefix_free());
    }
}
