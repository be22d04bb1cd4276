//! The line-based automaton text format.
//!
//! ```text
//! radix 3 tracks 1
//! states 3
//! initial 0
//! final 2
//! t 0 0 0
//! t 0 1 2
//! ```
//!
//! Multi-track symbols join their digits with a comma (`1,0`). Blank lines
//! and lines starting with `#` are ignored when parsing; the writer never
//! emits them. Determinism is detected from the transitions, not declared.

use std::fmt::Write as _;

use thiserror::Error;

use crate::automaton::Automaton;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct FormatError {
    pub line: usize,
    pub message: String,
}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, FormatError> {
    Err(FormatError { line, message: message.into() })
}

/// Parse the text format into a validated automaton.
pub fn parse(text: &str) -> Result<Automaton, FormatError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (line_no, header) = match lines.next() {
        Some(x) => x,
        None => return err(1, "empty input, expected `radix <k> tracks <d>`"),
    };
    let parts: Vec<&str> = header.split_whitespace().collect();
    if parts.len() != 4 || parts[0] != "radix" || parts[2] != "tracks" {
        return err(line_no, format!("expected `radix <k> tracks <d>`, got `{header}`"));
    }
    let radix: u32 = match parts[1].parse() {
        Ok(k) => k,
        Err(_) => return err(line_no, format!("bad radix `{}`", parts[1])),
    };
    let tracks: usize = match parts[3].parse() {
        Ok(d) => d,
        Err(_) => return err(line_no, format!("bad track count `{}`", parts[3])),
    };
    let mut builder = match Automaton::builder(radix, tracks) {
        Ok(b) => b,
        Err(e) => return err(line_no, e.to_string()),
    };

    let (line_no, states_line) = match lines.next() {
        Some(x) => x,
        None => return err(line_no + 1, "expected `states <n>`"),
    };
    let parts: Vec<&str> = states_line.split_whitespace().collect();
    if parts.len() != 2 || parts[0] != "states" {
        return err(line_no, format!("expected `states <n>`, got `{states_line}`"));
    }
    let n_states: usize = match parts[1].parse() {
        Ok(n) => n,
        Err(_) => return err(line_no, format!("bad state count `{}`", parts[1])),
    };
    builder = builder.states(n_states);

    let parse_state_list = |line_no: usize, line: &str, keyword: &str| -> Result<Vec<usize>, FormatError> {
        let mut parts = line.split_whitespace();
        if parts.next() != Some(keyword) {
            return err(line_no, format!("expected `{keyword} <i ...>`, got `{line}`"));
        }
        parts
            .map(|p| p.parse::<usize>().map_err(|_| FormatError {
                line: line_no,
                message: format!("bad state index `{p}`"),
            }))
            .collect()
    };

    let (line_no, initial_line) = match lines.next() {
        Some(x) => x,
        None => return err(line_no + 1, "expected `initial <i ...>`"),
    };
    builder = builder.initial(parse_state_list(line_no, initial_line, "initial")?);

    let (line_no, final_line) = match lines.next() {
        Some(x) => x,
        None => return err(line_no + 1, "expected `final <i ...>`"),
    };
    builder = builder.finals(parse_state_list(line_no, final_line, "final")?);

    for (line_no, line) in lines {
        let parts: Vec<&str> = line.split_whitespace().collect();
        if parts.len() != 4 || parts[0] != "t" {
            return err(line_no, format!("expected `t <src> <sym> <dst>`, got `{line}`"));
        }
        let src: usize = match parts[1].parse() {
            Ok(s) => s,
            Err(_) => return err(line_no, format!("bad source state `{}`", parts[1])),
        };
        let dst: usize = match parts[3].parse() {
            Ok(s) => s,
            Err(_) => return err(line_no, format!("bad target state `{}`", parts[3])),
        };
        let digits: Result<Vec<u32>, FormatError> = parts[2]
            .split(',')
            .map(|p| p.parse::<u32>().map_err(|_| FormatError {
                line: line_no,
                message: format!("bad digit `{p}` in symbol `{}`", parts[2]),
            }))
            .collect();
        let digits = digits?;
        if digits.len() != tracks {
            return err(
                line_no,
                format!("symbol `{}` has {} digits, automaton has {tracks} tracks", parts[2], digits.len()),
            );
        }
        if let Some(&d) = digits.iter().find(|&&d| d >= radix) {
            return err(line_no, format!("digit {d} out of range for radix {radix}"));
        }
        builder = builder.edge_digits(src, &digits, dst);
    }

    builder.build().map_err(|e| FormatError { line: 0, message: e.to_string() })
}

/// Write an automaton in the text format.
pub fn write(a: &Automaton) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "radix {} tracks {}", a.radix(), a.tracks());
    let _ = writeln!(out, "states {}", a.state_count());
    let initials: Vec<String> = a.initial().iter().map(|q| q.to_string()).collect();
    let _ = writeln!(out, "initial {}", initials.join(" ")).and_then(|_| Ok(()));
    let finals: Vec<String> = a.finals().iter().map(|q| q.to_string()).collect();
    let _ = writeln!(out, "final {}", finals.join(" "));
    for (src, sym, dst) in a.transitions() {
        let digits: Vec<String> = a.alphabet().decode(sym).iter().map(|d| d.to_string()).collect();
        let _ = writeln!(out, "t {src} {} {dst}", digits.join(","));
    }
    out
}
