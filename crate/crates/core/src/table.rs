//! CSV output for profiles and bifurcation traces.
//!
//! Comma separated, `#` comment lines first, then a header row, LF endings.
//! Floats are written with 15 significant digits, so a parse and re-emit
//! reproduces the file byte for byte.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::transition::{Region, WaveProfile};

pub const PROFILE_HEADER: &str = "xi,T,Z,region";
pub const TRACE_HEADER: &str = "c,beta0,beta1,beta0_residual,beta1_residual,status";

pub fn fmt_f64(x: f64) -> String {
    format!("{x:.14e}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

fn parse_f64(cell: &str, line: usize) -> Result<f64> {
    cell.parse()
        .map_err(|_| Error::Domain(format!("line {line}: bad number `{cell}`")))
}

fn parse_opt(cell: &str, line: usize) -> Result<Option<f64>> {
    if cell.is_empty() {
        Ok(None)
    } else {
        parse_f64(cell, line).map(Some)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProfileRow {
    pub xi: f64,
    pub t: f64,
    pub z: f64,
    pub region: Region,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProfileTable {
    /// Comment lines without the leading `# `.
    pub comments: Vec<String>,
    pub rows: Vec<ProfileRow>,
}

impl ProfileTable {
    pub fn from_profile(profile: &WaveProfile) -> Self {
        ProfileTable {
            comments: vec![
                format!("ell={}", fmt_f64(profile.ell)),
                format!("class={}", profile.class.wave),
            ],
            rows: profile
                .samples
                .iter()
                .map(|s| ProfileRow {
                    xi: s.xi,
                    t: s.t,
                    z: s.z,
                    region: s.region,
                })
                .collect(),
        }
    }

    pub fn ell(&self) -> Option<f64> {
        self.comments
            .iter()
            .find_map(|c| c.strip_prefix("ell="))
            .and_then(|v| v.parse().ok())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for c in &self.comments {
            let _ = writeln!(out, "# {c}");
        }
        out.push_str(PROFILE_HEADER);
        out.push('\n');
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{}",
                fmt_f64(r.xi),
                fmt_f64(r.t),
                fmt_f64(r.z),
                r.region.name()
            );
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let (comments, body) = split_comments(text, PROFILE_HEADER)?;
        let mut rows = Vec::new();
        for (line, cells) in body {
            let [xi, t, z, region] = cells[..] else {
                return Err(Error::Domain(format!("line {line}: expected 4 cells")));
            };
            rows.push(ProfileRow {
                xi: parse_f64(xi, line)?,
                t: parse_f64(t, line)?,
                z: parse_f64(z, line)?,
                region: Region::parse(region)
                    .ok_or_else(|| Error::Domain(format!("line {line}: bad region `{region}`")))?,
            });
        }
        Ok(ProfileTable { comments, rows })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceRow {
    pub c: f64,
    pub beta0: Option<f64>,
    pub beta1: Option<f64>,
    pub beta0_residual: Option<f64>,
    pub beta1_residual: Option<f64>,
    pub status: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceTable {
    pub comments: Vec<String>,
    pub rows: Vec<TraceRow>,
}

impl TraceTable {
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for c in &self.comments {
            let _ = writeln!(out, "# {c}");
        }
        out.push_str(TRACE_HEADER);
        out.push('\n');
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                fmt_f64(r.c),
                fmt_opt(r.beta0),
                fmt_opt(r.beta1),
                fmt_opt(r.beta0_residual),
                fmt_opt(r.beta1_residual),
                r.status
            );
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let (comments, body) = split_comments(text, TRACE_HEADER)?;
        let mut rows = Vec::new();
        for (line, cells) in body {
            let [c, b0, b1, r0, r1, status] = cells[..] else {
                return Err(Error::Domain(format!("line {line}: expected 6 cells")));
            };
            rows.push(TraceRow {
                c: parse_f64(c, line)?,
                beta0: parse_opt(b0, line)?,
                beta1: parse_opt(b1, line)?,
                beta0_residual: parse_opt(r0, line)?,
                beta1_residual: parse_opt(r1, line)?,
                status: status.to_string(),
            });
        }
        Ok(TraceTable { comments, rows })
    }
}

type Body<'a> = Vec<(usize, Vec<&'a str>)>;

fn split_comments<'a>(text: &'a str, header: &str) -> Result<(Vec<String>, Body<'a>)> {
    let mut comments = Vec::new();
    let mut body = Vec::new();
    let mut seen_header = false;
    for (k, line) in text.lines().enumerate() {
        let line_no = k + 1;
        if let Some(c) = line.strip_prefix('#') {
            if seen_header {
                return Err(Error::Domain(format!(
                    "line {line_no}: comment after header"
                )));
            }
            comments.push(c.strip_prefix(' ').unwrap_or(c).to_string());
        } else if !seen_header {
            if line != header {
                return Err(Error::Domain(format!(
                    "line {line_no}: expected header `{header}`"
                )));
            }
            seen_header = true;
        } else {
            body.push((line_no, line.split(',').collect()));
        }
    }
    if !seen_header {
        return Err(Error::Domain("missing header row".into()));
    }
    Ok((comments, body))
}
