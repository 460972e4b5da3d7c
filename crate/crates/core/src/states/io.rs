//! Plain-text sparse matrix format for exchanging two-mode states.
//!
//! ```text
//! % optional comment lines
//! <n_max>
//! <row> <col> <re> <im>
//! ...
//! ```
//!
//! Rows and columns are composite indices `m * n_max + n`. Values are written
//! in shortest round-trip form, so reading a written file is bit-exact.

use std::io::{BufRead, Write};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{FockCutoff, TwoModeState};

pub fn write_state<W: Write>(state: &TwoModeState, mut out: W) -> Result<()> {
    writeln!(out, "% two-mode state, composite index m*n_max+n")?;
    writeln!(out, "{}", state.n_max())?;
    for ((row, col), value) in state.entries() {
        writeln!(out, "{} {} {:?} {:?}", row, col, value.re, value.im)?;
    }
    Ok(())
}

pub fn read_state<R: BufRead>(input: R) -> Result<TwoModeState> {
    let mut cutoff = None;
    let mut entries = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        let lineno = i + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('%') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        match cutoff {
            None => {
                let n: usize = parse(fields[0], lineno)?;
                if fields.len() != 1 {
                    return Err(parse_error(lineno, "header must hold n_max only"));
                }
                cutoff = Some(FockCutoff::new(n)?);
            }
            Some(_) => {
                if fields.len() != 4 {
                    return Err(parse_error(lineno, "expected `row col re im`"));
                }
                let row: usize = parse(fields[0], lineno)?;
                let col: usize = parse(fields[1], lineno)?;
                let re: f64 = parse(fields[2], lineno)?;
                let im: f64 = parse(fields[3], lineno)?;
                entries.push(((row, col), Complex64::new(re, im)));
            }
        }
    }
    let cutoff = cutoff.ok_or_else(|| parse_error(0, "missing n_max header"))?;
    TwoModeState::from_entries(cutoff, entries)
}

fn parse<T: std::str::FromStr>(field: &str, line: usize) -> Result<T> {
    field
        .parse()
        .map_err(|_| parse_error(line, &format!("cannot parse `{field}`")))
}

fn parse_error(line: usize, message: &str) -> Error {
    Error::Parse {
        line,
        message: message.to_string(),
    }
}
