//! Text forms for series specs.
//!
//! Eta quotients are `*`-separated `scale^exponent` factors, e.g.
//! `2^2 * 1^-3`; a bare `scale` means exponent 1. Pochhammer quotients are
//! bracket groups `[a1,a2,...;b]`, optionally followed by `/` and the
//! denominator groups, e.g. `[2,3;5]/[1,4;5]`.

use std::fmt;

use crate::error::{Error, Result};
use crate::eta::{eta_quotient, pochhammer_product, EtaQuotientSpec, PochhammerProductSpec};
use crate::series::{CoefficientRing, Series};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SeriesSpec {
    Eta(EtaQuotientSpec),
    Pochhammer(PochhammerProductSpec),
}

impl fmt::Display for SeriesSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeriesSpec::Eta(s) => s.fmt(f),
            SeriesSpec::Pochhammer(s) => s.fmt(f),
        }
    }
}

impl SeriesSpec {
    pub fn expand(&self, ring: CoefficientRing, n: usize) -> Result<Series> {
        match self {
            SeriesSpec::Eta(s) => eta_quotient(s, ring, n),
            SeriesSpec::Pochhammer(s) => pochhammer_product(s, ring, n),
        }
    }
}

/// Parse either grammar; a leading `[` selects the Pochhammer form.
pub fn parse_series_spec(input: &str) -> Result<SeriesSpec> {
    if input.trim_start().starts_with('[') {
        parse_pochhammer(input).map(SeriesSpec::Pochhammer)
    } else {
        parse_eta(input).map(SeriesSpec::Eta)
    }
}

struct Cursor<'a> {
    input: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(input: &'a str) -> Self {
        Cursor {
            input,
            bytes: input.as_bytes(),
            pos: 0,
        }
    }

    fn error(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            input: self.input.to_string(),
            column: self.pos + 1,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(format!("expected '{}'", c as char)))
        }
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    fn unsigned(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a number"));
        }
        self.input[start..self.pos].parse().map_err(|_| {
            self.pos = start;
            self.error("number out of range")
        })
    }

    fn signed(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        let negative = self.eat(b'-');
        if !negative {
            self.eat(b'+');
        }
        let mag = self.unsigned()?;
        let v = i64::try_from(mag).map_err(|_| {
            self.pos = start;
            self.error("exponent out of range")
        })?;
        Ok(if negative { -v } else { v })
    }
}

pub fn parse_eta(input: &str) -> Result<EtaQuotientSpec> {
    let mut cur = Cursor::new(input);
    if cur.at_end() {
        return Err(cur.error("empty eta quotient"));
    }
    let mut factors = Vec::new();
    loop {
        let col = cur.pos;
        let scale = cur.unsigned()?;
        if scale == 0 {
            cur.pos = col;
            cur.skip_ws();
            return Err(cur.error("eta scale must be >= 1"));
        }
        let exponent = if cur.eat(b'^') { cur.signed()? } else { 1 };
        factors.push((scale, exponent));
        if cur.at_end() {
            break;
        }
        cur.expect(b'*')?;
    }
    EtaQuotientSpec::new(factors)
}

fn pochhammer_groups(
    cur: &mut Cursor<'_>,
    modulus: &mut Option<u64>,
    out: &mut Vec<u64>,
) -> Result<()> {
    let mut any = false;
    while cur.peek() == Some(b'[') {
        cur.pos += 1;
        let mut residues = Vec::new();
        if cur.peek() != Some(b';') {
            loop {
                let col = cur.pos;
                let a = cur.unsigned()?;
                if a == 0 {
                    cur.pos = col;
                    cur.skip_ws();
                    return Err(cur.error("Pochhammer residue must be >= 1"));
                }
                residues.push(a);
                if !cur.eat(b',') {
                    break;
                }
            }
        }
        cur.expect(b';')?;
        cur.skip_ws();
        let col = cur.pos;
        let b = cur.unsigned()?;
        if b == 0 {
            cur.pos = col;
            return Err(cur.error("Pochhammer modulus must be >= 1"));
        }
        match *modulus {
            Some(prev) if prev != b => {
                cur.pos = col;
                return Err(cur.error(format!("all groups must share modulus {prev}")));
            }
            _ => *modulus = Some(b),
        }
        cur.expect(b']')?;
        out.extend(residues);
        any = true;
        cur.eat(b'*');
    }
    if !any {
        return Err(cur.error("expected '['"));
    }
    Ok(())
}

pub fn parse_pochhammer(input: &str) -> Result<PochhammerProductSpec> {
    let mut cur = Cursor::new(input);
    let mut modulus = None;
    let mut numerators = Vec::new();
    let mut denominators = Vec::new();
    pochhammer_groups(&mut cur, &mut modulus, &mut numerators)?;
    if cur.eat(b'/') {
        pochhammer_groups(&mut cur, &mut modulus, &mut denominators)?;
    }
    if !cur.at_end() {
        return Err(cur.error("unexpected trailing input"));
    }
    PochhammerProductSpec::quotient(
        modulus.expect("at least one group"),
        &numerators,
        &denominators,
    )
}
