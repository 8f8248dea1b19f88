//! Plain-text datasets of point or interval observations.
//!
//! One observation per line, either a number (`292.8`), a bracketed pair
//! (`[304.12, 307.82]`) or a bare CSV pair (`304.12,307.82`). Blank lines
//! and anything after `#` are ignored. A first data line containing
//! letters, such as `lower,upper`, is taken as a header.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::estimation::NeutroSample;
use crate::interval::{parse_interval, Interval};

/// Observations of a dataset file, in file order, with their line numbers.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    rows: Vec<(usize, Interval)>,
    header: Option<String>,
}

impl Dataset {
    pub fn parse(text: &str) -> Result<Self> {
        let mut rows = Vec::new();
        let mut header = None;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            if rows.is_empty() && header.is_none() && looks_like_header(content) {
                header = Some(content.to_string());
                continue;
            }
            let iv = parse_interval(content).map_err(|e| Error::AtLine {
                line,
                source: Box::new(e),
            })?;
            rows.push((line, iv));
        }
        Ok(Self { rows, header })
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn header(&self) -> Option<&str> {
        self.header.as_deref()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn intervals(&self) -> Vec<Interval> {
        self.rows.iter().map(|&(_, iv)| iv).collect()
    }

    /// Validates the sample; a non-positive value is reported at its line.
    pub fn to_sample(&self) -> Result<NeutroSample> {
        if self.rows.len() < 2 {
            return Err(Error::InsufficientData {
                required: 2,
                got: self.rows.len(),
            });
        }
        if let Some(&(line, iv)) = self.rows.iter().find(|(_, iv)| iv.lo() <= 0.0) {
            return Err(Error::AtLine {
                line,
                source: Box::new(Error::Domain(format!("observations must be positive, got {iv}"))),
            });
        }
        NeutroSample::new(self.intervals())
    }
}

fn looks_like_header(line: &str) -> bool {
    line.chars().any(|c| c.is_ascii_alphabetic() && c != 'e' && c != 'E')
}

/// Canonical line for one observation: a bare number for a point, the
/// bracketed pair otherwise.
pub fn format_observation(iv: &Interval) -> String {
    format!("{iv:#}")
}
