//! Plain-text f-table files:
//!
//! ```text
//! # multiplicity 2 from level 3 on
//! multiplicities: 1 1 2 2
//! tail: constant
//! ```
//!
//! `#` starts a comment. The tail line is optional and defaults to `unit`.

use super::{TailRule, WorkingSetError, WorkingSetFunction};

pub fn parse_table(text: &str) -> Result<WorkingSetFunction, WorkingSetError> {
    let mut multiplicities: Option<Vec<u64>> = None;
    let mut tail: Option<TailRule> = None;
    for (i, raw_line) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw_line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let parse_err = |message: String| WorkingSetError::TableSyntax {
            line: line_no,
            message,
        };
        let (key, value) = line
            .split_once(':')
            .ok_or_else(|| parse_err(format!("expected `key: value`, got `{line}`")))?;
        match key.trim() {
            "multiplicities" if multiplicities.is_none() => {
                let values = value
                    .split_whitespace()
                    .map(|tok| {
                        tok.parse::<u64>()
                            .map_err(|_| parse_err(format!("bad multiplicity `{tok}`")))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                multiplicities = Some(values);
            }
            "tail" if tail.is_none() => {
                tail = Some(
                    value
                        .trim()
                        .parse()
                        .map_err(|e: WorkingSetError| parse_err(e.to_string()))?,
                );
            }
            other => return Err(parse_err(format!("unexpected or repeated key `{other}`"))),
        }
    }
    let multiplicities = multiplicities.ok_or(WorkingSetError::TableSyntax {
        line: 0,
        message: "missing `multiplicities:` line".to_string(),
    })?;
    WorkingSetFunction::new(multiplicities, tail.unwrap_or(TailRule::UnitGrowth))
}

pub fn format_table(f: &WorkingSetFunction) -> String {
    let levels: Vec<String> = f.multiplicities().iter().map(u64::to_string).collect();
    format!("multiplicities: {}\ntail: {}\n", levels.join(" "), f.tail())
}
