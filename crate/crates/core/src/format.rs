//! Shared helpers for the comma-separated text formats.

use crate::error::{Error, Result};

/// Formats `value` with `digits` significant digits in positional notation.
pub fn sig_digits(value: f64, digits: usize) -> String {
    if value == 0.0 || !value.is_finite() {
        return format!("{value}");
    }
    // take the exponent after rounding so 9.99..95 counts as 10.0
    let sci = format!("{:.*e}", digits.saturating_sub(1), value);
    let exponent: i64 = sci[sci.find('e').expect("exponent") + 1..].parse().expect("exponent");
    let decimals = (digits as i64 - 1 - exponent).max(0) as usize;
    format!("{value:.decimals$}")
}

/// Splits a `# key=value, key=value` header into at most `max_fields` pairs;
/// the last pair keeps any remaining commas in its value.
pub fn parse_header(line: &str, max_fields: usize) -> Result<Vec<(&str, &str)>> {
    let body = line
        .strip_prefix('#')
        .ok_or_else(|| Error::format(1, "missing '#' header line"))?;
    body.splitn(max_fields, ',')
        .map(|field| {
            let field = field.trim_start();
            field
                .split_once('=')
                .map(|(k, v)| (k.trim(), v))
                .ok_or_else(|| Error::format(1, format!("header field '{field}' is not key=value")))
        })
        .collect()
}

pub fn header_value<'a>(fields: &[(&'a str, &'a str)], key: &str) -> Result<&'a str> {
    fields
        .iter()
        .find(|(k, _)| *k == key)
        .map(|(_, v)| v.trim())
        .ok_or_else(|| Error::format(1, format!("header is missing '{key}'")))
}

/// Yields `(line_number, line)` for non-blank lines after the header.
pub fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .skip(1)
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty())
}

pub fn first_line(text: &str) -> Result<&str> {
    text.lines()
        .next()
        .map(str::trim)
        .ok_or_else(|| Error::format(1, "empty input"))
}

/// Parses `index,value` with a 1-based index that must equal `expected`.
pub fn indexed_row(line_no: usize, line: &str, expected: usize) -> Result<f64> {
    let (index, value) = line
        .split_once(',')
        .ok_or_else(|| Error::format(line_no, "expected 'index,value'"))?;
    let index: usize = index
        .trim()
        .parse()
        .map_err(|_| Error::format(line_no, format!("bad index '{}'", index.trim())))?;
    if index != expected {
        return Err(Error::format(
            line_no,
            format!("index {index} out of sequence, expected {expected}"),
        ));
    }
    parse_real(line_no, value)
}

pub fn parse_real(line_no: usize, s: &str) -> Result<f64> {
    let s = s.trim();
    let v: f64 = s
        .parse()
        .map_err(|_| Error::format(line_no, format!("bad number '{s}'")))?;
    if !v.is_finite() {
        return Err(Error::format(line_no, format!("non-finite number '{s}'")));
    }
    Ok(v)
}
