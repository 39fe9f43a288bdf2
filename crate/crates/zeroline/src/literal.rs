//! Parsers for the text literals used on the command line. Every value
//! rendered by the library re-parses to an equal value.
//!
//! Grammar sketch:
//!   field      = "Q" | "R" | "C" | "F" digits
//!   form       = field ":" "<" entries ">"            e.g.  Q:<1,-1,2>
//!   gw         = field ":" combo of forms, integers and "h"
//!   milnor     = field ":" combo of "{a,b,...}" symbols and integers
//!   mw         = "MW(" field "," degree ";" body ")"
//!   monomials  = "eta^a*sigma^e*mu9^b" joined by "+"
//!   window     = "s0:s1,w0:w1"

use crate::error::{Error, Result};
use crate::etalocal::{EtaLocalElt, Mono};
use crate::field::{FieldElt, FieldSpec};
use crate::milnor::MilnorElt;
use crate::milnorwitt::MWElt;
use crate::quadform::{DiagonalForm, GWClass, WittClass};

pub fn parse_field(s: &str) -> Result<FieldSpec> {
    let s = s.trim();
    match s {
        "Q" => Ok(FieldSpec::rationals()),
        "R" => Ok(FieldSpec::reals()),
        "C" => Ok(FieldSpec::complexes()),
        _ => {
            if let Some(q) = s.strip_prefix('F') {
                let q: u64 = q
                    .parse()
                    .map_err(|_| Error::InvalidInput(format!("bad field literal: {s}")))?;
                FieldSpec::finite(q)
            } else {
                Err(Error::InvalidInput(format!("bad field literal: {s}")))
            }
        }
    }
}

fn split_prefix(s: &str) -> Result<(FieldSpec, &str)> {
    let (field, rest) = s
        .split_once(':')
        .ok_or_else(|| Error::InvalidInput(format!("missing field prefix in: {s}")))?;
    Ok((parse_field(field)?, rest.trim()))
}

/// Split a combination on top-level + and -, respecting bracket nesting.
fn split_terms(s: &str) -> Result<Vec<(i64, String)>> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut sign = 1i64;
    let mut cur = String::new();
    for ch in s.chars() {
        match ch {
            '<' | '{' | '(' => {
                depth += 1;
                cur.push(ch);
            }
            '>' | '}' | ')' => {
                depth -= 1;
                cur.push(ch);
            }
            '+' | '-' if depth == 0 => {
                if cur.trim().is_empty() && out.is_empty() && ch == '-' && sign == 1 {
                    sign = -1;
                    continue;
                }
                if cur.trim().is_empty() {
                    return Err(Error::InvalidInput(format!("dangling sign in: {s}")));
                }
                out.push((sign, cur.trim().to_string()));
                cur.clear();
                sign = if ch == '-' { -1 } else { 1 };
            }
            _ => cur.push(ch),
        }
    }
    if depth != 0 {
        return Err(Error::InvalidInput(format!("unbalanced brackets in: {s}")));
    }
    if !cur.trim().is_empty() {
        out.push((sign, cur.trim().to_string()));
    }
    Ok(out)
}

/// `coef * body` with an optional integer coefficient.
fn split_coefficient(term: &str) -> (i64, &str) {
    if let Some((c, rest)) = term.split_once('*') {
        if let Ok(k) = c.trim().parse::<i64>() {
            return (k, rest.trim());
        }
    }
    (1, term)
}

fn parse_form_body(field: &FieldSpec, body: &str) -> Result<DiagonalForm> {
    let body = body.trim();
    let inner = body
        .strip_prefix('<')
        .and_then(|b| b.strip_suffix('>'))
        .ok_or_else(|| Error::InvalidInput(format!("bad form literal: {body}")))?;
    let inner = inner.trim();
    if inner.is_empty() {
        return Ok(DiagonalForm::zero(field));
    }
    let entries: Vec<FieldElt> = inner
        .split(',')
        .map(|e| field.parse_element(e))
        .collect::<Result<_>>()?;
    DiagonalForm::new(field, &entries)
}

pub fn parse_form(s: &str) -> Result<DiagonalForm> {
    let (field, body) = split_prefix(s)?;
    parse_form_body(&field, body)
}

/// A Witt-class combination: forms, integers (multiples of <1>) and earlier
/// terms, at the class level.
pub fn parse_witt_body(field: &FieldSpec, body: &str) -> Result<WittClass> {
    let mut acc = WittClass::zero(field);
    for (sign, term) in split_terms(body)? {
        let (coef, rest) = split_coefficient(&term);
        let part = if rest.starts_with('<') {
            parse_form_body(field, rest)?.witt_class()?
        } else {
            let k: i64 = rest
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad Witt term: {term}")))?;
            WittClass::one(field).scalar_mul(k)?
        };
        let scaled = part.scalar_mul(sign * coef)?;
        acc = acc.add(&scaled)?;
    }
    Ok(acc)
}

pub fn parse_gw_body(field: &FieldSpec, body: &str) -> Result<GWClass> {
    let mut acc = GWClass::zero(field);
    for (sign, term) in split_terms(body)? {
        let (coef, rest) = split_coefficient(&term);
        let part = if rest.starts_with('<') {
            GWClass::from_form(&parse_form_body(field, rest)?)?
        } else if rest == "h" {
            GWClass::hyperbolic(field)
        } else {
            let k: i64 = rest
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad GW term: {term}")))?;
            let one = GWClass::one(field);
            let mut g = GWClass::zero(field);
            for _ in 0..k.unsigned_abs() {
                g = if k >= 0 { g.add(&one)? } else { g.sub(&one)? };
            }
            g
        };
        let k = sign * coef;
        for _ in 0..k.unsigned_abs() {
            acc = if k >= 0 { acc.add(&part)? } else { acc.sub(&part)? };
        }
    }
    Ok(acc)
}

pub fn parse_gw(s: &str) -> Result<GWClass> {
    let (field, body) = split_prefix(s)?;
    parse_gw_body(&field, body)
}

fn parse_symbol_body(field: &FieldSpec, body: &str) -> Result<MilnorElt> {
    let inner = body
        .strip_prefix('{')
        .and_then(|b| b.strip_suffix('}'))
        .ok_or_else(|| Error::InvalidInput(format!("bad symbol literal: {body}")))?;
    let inner = inner.trim();
    if inner.is_empty() {
        return MilnorElt::constant(field, 1);
    }
    let entries: Vec<FieldElt> = inner
        .split(',')
        .map(|e| field.parse_element(e))
        .collect::<Result<_>>()?;
    MilnorElt::from_symbol(field, &entries)
}

/// Milnor combination; `expected_degree` disambiguates the zero element.
pub fn parse_milnor_body(
    field: &FieldSpec,
    body: &str,
    expected_degree: Option<u32>,
) -> Result<MilnorElt> {
    let body = body.trim();
    if body == "0" {
        return Ok(MilnorElt::zero(field, expected_degree.unwrap_or(0)));
    }
    let mut acc: Option<MilnorElt> = None;
    let mut seen_degree: Option<u32> = None;
    for (sign, term) in split_terms(body)? {
        let (coef, rest) = split_coefficient(&term);
        let part = if rest.starts_with('{') {
            parse_symbol_body(field, rest)?
        } else {
            let k: i64 = rest
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad Milnor term: {term}")))?;
            MilnorElt::constant(field, k)?
        };
        let scaled = part.scalar_mul(sign * coef)?;
        if seen_degree.is_none() {
            seen_degree = Some(scaled.degree());
        }
        // terms that die in reduction put no constraint on the degree
        if scaled.is_syntactic_zero() {
            continue;
        }
        acc = Some(match acc {
            None => scaled,
            Some(a) => a.add(&scaled)?,
        });
    }
    let elt = match acc {
        Some(e) => e,
        None => MilnorElt::zero(field, expected_degree.or(seen_degree).unwrap_or(0)),
    };
    if let Some(d) = expected_degree {
        if elt.degree() != d && !elt.is_syntactic_zero() {
            return Err(Error::InvalidInput(format!(
                "literal has degree {}, expected {d}",
                elt.degree()
            )));
        }
    }
    Ok(elt)
}

pub fn parse_milnor(s: &str) -> Result<MilnorElt> {
    let (field, body) = split_prefix(s)?;
    parse_milnor_body(&field, body, None)
}

/// `MW(field, degree; body)` with the payload shape fixed by the degree.
pub fn parse_mw(s: &str) -> Result<MWElt> {
    let s = s.trim();
    let inner = s
        .strip_prefix("MW(")
        .and_then(|b| b.strip_suffix(')'))
        .ok_or_else(|| Error::InvalidInput(format!("bad MW literal: {s}")))?;
    let (head, body) = inner
        .split_once(';')
        .ok_or_else(|| Error::InvalidInput(format!("missing ';' in MW literal: {s}")))?;
    let (field_s, degree_s) = head
        .split_once(',')
        .ok_or_else(|| Error::InvalidInput(format!("missing degree in MW literal: {s}")))?;
    let field = parse_field(field_s)?;
    let degree: i64 = degree_s
        .trim()
        .parse()
        .map_err(|_| Error::InvalidInput(format!("bad degree in MW literal: {s}")))?;
    let body = body.trim();
    match degree.cmp(&0) {
        std::cmp::Ordering::Less => {
            let w = parse_witt_body(&field, body)?;
            MWElt::from_witt(degree, w)
        }
        std::cmp::Ordering::Equal => Ok(MWElt::from_gw(parse_gw_body(&field, body)?)),
        std::cmp::Ordering::Greater => {
            let (milnor_s, witt_s) = body.split_once('|').ok_or_else(|| {
                Error::InvalidInput(format!(
                    "positive-degree MW literals read 'milnor | form': {s}"
                ))
            })?;
            let milnor = parse_milnor_body(&field, milnor_s.trim(), Some(degree as u32))?;
            let witt = parse_witt_body(&field, witt_s.trim())?;
            MWElt::pair(degree, milnor, witt)
        }
    }
}

/// Monomial sums like `eta^2*sigma*mu9^-1 + 1`.
pub fn parse_eta_elt(s: &str, localized: bool) -> Result<EtaLocalElt> {
    let s = s.trim();
    if s == "0" {
        return Ok(EtaLocalElt::zero(localized));
    }
    let mut monos = Vec::new();
    for piece in s.split('+') {
        let piece = piece.trim();
        let mut mono = Mono { eta: 0, sigma: 0, mu: 0 };
        for factor in piece.split('*') {
            let factor = factor.trim();
            let (name, exp) = match factor.split_once('^') {
                Some((n, e)) => {
                    let e: i64 = e.trim().parse().map_err(|_| {
                        Error::InvalidInput(format!("bad exponent in monomial: {factor}"))
                    })?;
                    (n.trim(), e)
                }
                None => (factor, 1),
            };
            match name {
                "eta" => mono.eta += exp,
                "sigma" => {
                    if exp < 0 {
                        return Err(Error::InvalidInput("sigma is not invertible".into()));
                    }
                    mono.sigma += exp as u32;
                }
                "mu9" => mono.mu += exp,
                "1" => {}
                _ => {
                    return Err(Error::InvalidInput(format!(
                        "unknown monomial factor: {name}"
                    )))
                }
            }
        }
        monos.push(mono);
    }
    EtaLocalElt::from_monos(monos, localized)
}

/// Rectangular window `s0:s1,w0:w1`.
pub fn parse_window(s: &str) -> Result<((i64, i64), (i64, i64))> {
    let bad = || Error::InvalidInput(format!("bad window (expected s0:s1,w0:w1): {s}"));
    let (stems, weights) = s.trim().split_once(',').ok_or_else(bad)?;
    let parse_range = |r: &str| -> Result<(i64, i64)> {
        let (a, b) = r.trim().split_once(':').ok_or_else(bad)?;
        let a: i64 = a.trim().parse().map_err(|_| bad())?;
        let b: i64 = b.trim().parse().map_err(|_| bad())?;
        Ok((a, b))
    };
    Ok((parse_range(stems)?, parse_range(weights)?))
}
