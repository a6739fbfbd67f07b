//! Line-oriented text format for pulse programs.
//!
//! ```text
//! # comment
//! name toffoli
//! ions 3
//! segment encoding 1 5
//! sb 1 pi 1.5pi
//! carrier 3 0.5pi 0
//! ```
//!
//! Pulse lines are `<kind> <ion> <theta> <phi>` with `kind` one of `carrier`
//! or `sb`. Angles are decimals in radians, optionally multiplied by `pi`
//! (`pi`, `-0.5pi`, `0.5*pi`, `3pi/2`). The `name`, `ions` and `segment`
//! header lines are optional and must precede the first pulse; without an
//! `ions` line the string has three ions.

use std::f64::consts::PI;
use std::fmt::Write as _;

use super::{PulseSequence, Segment, SegmentRange};
use crate::pulsegen::{PulseKind, PulseSpec};
use crate::{Error, Result};

fn parse_number(text: &str) -> std::result::Result<f64, String> {
    let value: f64 = text
        .parse()
        .map_err(|_| format!("non-numeric angle component {text:?}"))?;
    if value.is_finite() {
        Ok(value)
    } else {
        Err(format!("angle component {text:?} is not finite"))
    }
}

fn parse_scaled(text: &str) -> std::result::Result<f64, String> {
    let (negative, body) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text.strip_prefix('+').unwrap_or(text)),
    };
    let value = match body.strip_suffix("pi") {
        Some(coeff) => {
            let coeff = coeff.strip_suffix('*').unwrap_or(coeff);
            if coeff.is_empty() {
                PI
            } else {
                parse_number(coeff)? * PI
            }
        }
        None => parse_number(body)?,
    };
    Ok(if negative { -value } else { value })
}

/// Parses an angle literal such as `1.5pi`, `pi/2` or `0.785`.
pub fn parse_angle(text: &str) -> std::result::Result<f64, String> {
    let text = text.trim();
    if text.is_empty() {
        return Err("empty angle".into());
    }
    match text.split_once('/') {
        Some((num, den)) => {
            let den = parse_number(den)?;
            if den == 0.0 {
                return Err(format!("zero denominator in {text:?}"));
            }
            Ok(parse_scaled(num)? / den)
        }
        None => parse_scaled(text),
    }
}

fn parse_kind(text: &str) -> Option<PulseKind> {
    match text.to_ascii_lowercase().as_str() {
        "carrier" => Some(PulseKind::Carrier),
        "sb" => Some(PulseKind::BlueSideband),
        _ => None,
    }
}

fn kind_token(kind: PulseKind) -> &'static str {
    match kind {
        PulseKind::Carrier => "carrier",
        PulseKind::BlueSideband => "sb",
    }
}

pub fn parse_sequence(text: &str) -> Result<PulseSequence> {
    let mut name = String::from("sequence");
    let mut num_ions = 3;
    let mut pulses = Vec::new();
    let mut segments = Vec::new();
    let mut segment_lines = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let err = |message: String| Error::Parse { line, message };
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let fields: Vec<&str> = content.split_whitespace().collect();
        let header_after_pulses = || err(format!("{:?} must precede the first pulse", fields[0]));
        match fields[0].to_ascii_lowercase().as_str() {
            "name" => {
                if !pulses.is_empty() {
                    return Err(header_after_pulses());
                }
                if fields.len() != 2 {
                    return Err(err("expected `name <label>`".into()));
                }
                name = fields[1].to_string();
            }
            "ions" => {
                if !pulses.is_empty() {
                    return Err(header_after_pulses());
                }
                if fields.len() != 2 {
                    return Err(err("expected `ions <N>`".into()));
                }
                num_ions = fields[1]
                    .parse()
                    .ok()
                    .filter(|&n: &usize| n > 0)
                    .ok_or_else(|| err(format!("invalid ion count {:?}", fields[1])))?;
            }
            "segment" => {
                if !pulses.is_empty() {
                    return Err(header_after_pulses());
                }
                if fields.len() != 4 {
                    return Err(err("expected `segment <name> <first> <last>`".into()));
                }
                let segment = Segment::from_name(fields[1])
                    .ok_or_else(|| err(format!("unknown segment {:?}", fields[1])))?;
                let bound = |s: &str| {
                    s.parse::<usize>()
                        .map_err(|_| err(format!("invalid pulse number {s:?}")))
                };
                segments.push(SegmentRange {
                    segment,
                    first: bound(fields[2])?,
                    last: bound(fields[3])?,
                });
                segment_lines.push(line);
            }
            token => {
                let kind = parse_kind(token).ok_or_else(|| err(format!("unknown pulse kind {token:?}")))?;
                if fields.len() != 4 {
                    return Err(err(format!(
                        "expected `<kind> <ion> <theta> <phi>`, got {} fields",
                        fields.len()
                    )));
                }
                let ion: usize = fields[1]
                    .parse()
                    .map_err(|_| err(format!("invalid ion index {:?}", fields[1])))?;
                if ion == 0 || ion > num_ions {
                    return Err(err(format!("ion {ion} out of range 1..={num_ions}")));
                }
                let theta = parse_angle(fields[2]).map_err(&err)?;
                let phi = parse_angle(fields[3]).map_err(&err)?;
                let spec = PulseSpec::new(kind, ion, theta, phi).map_err(|e| err(e.to_string()))?;
                pulses.push(spec);
            }
        }
    }

    for (s, line) in segments.iter().zip(segment_lines) {
        if s.first == 0 || s.first > s.last || s.last > pulses.len() {
            return Err(Error::Parse {
                line,
                message: format!(
                    "segment {} range {}..={} outside 1..={}",
                    s.segment,
                    s.first,
                    s.last,
                    pulses.len()
                ),
            });
        }
    }

    Ok(PulseSequence {
        name,
        num_ions,
        pulses,
        segments,
    })
}

/// Angles are written in radians with round-trip precision.
pub fn serialize_sequence(seq: &PulseSequence) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# pulse sequence: <kind> <ion> <theta> <phi>");
    if !seq.name.is_empty() && !seq.name.contains(char::is_whitespace) && !seq.name.contains('#') {
        let _ = writeln!(out, "name {}", seq.name);
    }
    let _ = writeln!(out, "ions {}", seq.num_ions);
    for s in &seq.segments {
        let _ = writeln!(out, "segment {} {} {}", s.segment.name(), s.first, s.last);
    }
    for p in &seq.pulses {
        let _ = writeln!(out, "{} {} {:?} {:?}", kind_token(p.kind), p.ion, p.theta, p.phi);
    }
    out
}
