//! Instance text format.
//!
//! ```text
//! binestim-v1
//! delta 1/35
//! n 4
//! announce 3/5 49/100 1/5 1/5
//! actual 3/5 1/2 1/5 1/5
//! ```
//!
//! One logical record per line, `#` starts a comment. Rationals render as
//! `p/q` or a bare integer. The `actual` line is optional; adversary-driven
//! runs start from the announcement alone.

use super::{Announcement, Instance};
use crate::{Error, Rational, Result};

const HEADER: &str = "binestim-v1";

pub fn parse_instance(text: &str) -> Result<Instance> {
    let mut lines = text.lines().filter_map(|line| {
        let line = match line.find('#') {
            Some(pos) => &line[..pos],
            None => line,
        };
        let line = line.trim();
        (!line.is_empty()).then_some(line)
    });

    match lines.next() {
        Some(h) if h == HEADER => {}
        other => {
            return Err(Error::Parse(format!(
                "expected header {HEADER:?}, found {other:?}"
            )))
        }
    }

    let mut delta: Option<Rational> = None;
    let mut n: Option<usize> = None;
    let mut announced: Option<Vec<Rational>> = None;
    let mut actuals: Option<Vec<Rational>> = None;

    for line in lines {
        let (key, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let values = || -> Result<Vec<Rational>> {
            rest.split_whitespace().map(|tok| tok.parse()).collect()
        };
        match key {
            "delta" => delta = Some(rest.trim().parse()?),
            "n" => {
                n = Some(
                    rest.trim()
                        .parse::<usize>()
                        .map_err(|e| Error::Parse(format!("bad n {rest:?}: {e}")))?,
                )
            }
            "announce" => announced = Some(values()?),
            "actual" => actuals = Some(values()?),
            other => return Err(Error::Parse(format!("unknown record {other:?}"))),
        }
    }

    let delta = delta.ok_or_else(|| Error::Parse("missing delta record".into()))?;
    let announced = announced.ok_or_else(|| Error::Parse("missing announce record".into()))?;
    if let Some(n) = n {
        if n != announced.len() {
            return Err(Error::Parse(format!(
                "n is {n} but {} sizes announced",
                announced.len()
            )));
        }
    }
    if let Some(actuals) = &actuals {
        if actuals.len() != announced.len() {
            return Err(Error::Parse(format!(
                "{} actual sizes for {} announced items",
                actuals.len(),
                announced.len()
            )));
        }
    }
    Ok(Instance {
        announcement: Announcement::new(delta, announced)?,
        actuals,
    })
}

pub fn render_instance(instance: &Instance) -> String {
    let joined = |sizes: &[Rational]| {
        sizes
            .iter()
            .map(|s| s.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    };
    let mut out = String::new();
    out.push_str(HEADER);
    out.push('\n');
    out.push_str(&format!("delta {}\n", instance.announcement.delta()));
    out.push_str(&format!("n {}\n", instance.announcement.n()));
    out.push_str(&format!(
        "announce {}\n",
        joined(instance.announcement.announced())
    ));
    if let Some(actuals) = &instance.actuals {
        out.push_str(&format!("actual {}\n", joined(actuals)));
    }
    out
}
