//! Value parsers for integer ranges, lists and float grids.

use std::fmt;

/// An inclusive integer range written `a..b`, or a single integer.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IntRange {
    pub start: usize,
    pub end: usize,
}

impl IntRange {
    pub fn iter(&self) -> impl Iterator<Item = usize> {
        self.start..=self.end
    }
}

impl fmt::Display for IntRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.start == self.end {
            write!(f, "{}", self.start)
        } else {
            write!(f, "{}..{}", self.start, self.end)
        }
    }
}

fn parse_usize(s: &str) -> Result<usize, String> {
    s.trim()
        .parse()
        .map_err(|_| format!("`{s}` is not a non-negative integer"))
}

pub fn parse_range(s: &str) -> Result<IntRange, String> {
    let (start, end) = match s.split_once("..") {
        Some((a, b)) => (parse_usize(a)?, parse_usize(b)?),
        None => {
            let v = parse_usize(s)?;
            (v, v)
        }
    };
    if start > end {
        return Err(format!("empty range `{s}`"));
    }
    Ok(IntRange { start, end })
}

/// Comma-separated integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntList(pub Vec<usize>);

impl fmt::Display for IntList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

pub fn parse_int_list(s: &str) -> Result<IntList, String> {
    s.split(',')
        .map(parse_usize)
        .collect::<Result<_, _>>()
        .map(IntList)
}

/// A float list `a,b,c` or an inclusive grid `start:stop:step`.
#[derive(Clone, Debug, PartialEq)]
pub struct FloatGrid {
    pub spec: String,
    pub values: Vec<f64>,
}

impl fmt::Display for FloatGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.spec)
    }
}

fn parse_f64(s: &str) -> Result<f64, String> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| format!("`{s}` is not a number"))?;
    if !v.is_finite() {
        return Err(format!("`{s}` is not finite"));
    }
    Ok(v)
}

/// Most grid points a single `start:stop:step` may expand to.
pub const MAX_GRID_POINTS: usize = 1_000_000;

pub fn parse_grid(s: &str) -> Result<FloatGrid, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let values = match parts.as_slice() {
        [start, stop, step] => {
            let (start, stop, step) = (parse_f64(start)?, parse_f64(stop)?, parse_f64(step)?);
            if step <= 0.0 || stop < start {
                return Err(format!("grid `{s}` needs start ≤ stop and a positive step"));
            }
            // tolerate rounding in (stop − start)/step so the endpoint is kept
            let count = ((stop - start) / step + 1e-9).floor() + 1.0;
            if count > MAX_GRID_POINTS as f64 {
                return Err(format!("grid `{s}` has more than {MAX_GRID_POINTS} points"));
            }
            (0..count as usize)
                .map(|i| start + i as f64 * step)
                .collect()
        }
        [_] => s.split(',').map(parse_f64).collect::<Result<_, _>>()?,
        _ => return Err(format!("`{s}` is neither a list nor start:stop:step")),
    };
    Ok(FloatGrid {
        spec: s.to_string(),
        values,
    })
}
