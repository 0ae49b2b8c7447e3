//! Expression grammars of the harness.
//!
//! Driving functions:
//!
//! ```text
//! p = 1
//! p = 1 + (re,im)*z^k
//! p = 1 + (re,im)*exp(lambda*t)*z^k + ...
//! ```
//!
//! with decimal literals, integer powers k ≥ 1 and insignificant
//! whitespace. Parsing validates the Carathéodory positivity constraint,
//! so a syntactically fine but non-positive driving is rejected here.
//!
//! Deficit shapes (unit profiles later scaled by ε):
//!
//! ```text
//! cos(psi) + 0.5*sin(3*psi) - 0.1
//! ```
//!
//! i.e. signed sums of `[coef*]cos(k*psi)`, `[coef*]sin(k*psi)` and bare
//! constants.

use lkweld_core::caratheodory::{CaratheodoryError, CoeffLaw, DrivingTerm};
use lkweld_core::{Complex, DrivingFunction};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ExprError {
    #[error("syntax error at byte {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("invalid driving function: {0}")]
    Rejected(#[from] CaratheodoryError),
}

struct Scanner<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Scanner<'a> {
    fn new(text: &'a str) -> Self {
        Self { text, pos: 0 }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.text.len() && self.text.as_bytes()[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.text[self.pos..].chars().next()
    }

    fn error(&self, message: impl Into<String>) -> ExprError {
        ExprError::Syntax { pos: self.pos, message: message.into() }
    }

    fn expect(&mut self, expected: char) -> Result<(), ExprError> {
        match self.peek() {
            Some(c) if c == expected => {
                self.pos += c.len_utf8();
                Ok(())
            }
            Some(c) => Err(self.error(format!("expected '{expected}', found '{c}'"))),
            None => Err(self.error(format!("expected '{expected}', found end of input"))),
        }
    }

    fn accept(&mut self, expected: char) -> bool {
        if self.peek() == Some(expected) {
            self.pos += expected.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect_keyword(&mut self, word: &str) -> Result<(), ExprError> {
        self.skip_ws();
        if self.text[self.pos..].starts_with(word) {
            self.pos += word.len();
            Ok(())
        } else {
            Err(self.error(format!("expected '{word}'")))
        }
    }

    fn try_keyword(&mut self, word: &str) -> bool {
        self.skip_ws();
        if self.text[self.pos..].starts_with(word) {
            self.pos += word.len();
            true
        } else {
            false
        }
    }

    /// Decimal literal: [+-] digits [. digits] [eE [+-] digits].
    fn number(&mut self) -> Result<f64, ExprError> {
        self.skip_ws();
        let start = self.pos;
        let bytes = self.text.as_bytes();
        let mut end = start;
        if end < bytes.len() && (bytes[end] == b'+' || bytes[end] == b'-') {
            end += 1;
        }
        let digits_from = end;
        while end < bytes.len() && bytes[end].is_ascii_digit() {
            end += 1;
        }
        if end < bytes.len() && bytes[end] == b'.' {
            end += 1;
            while end < bytes.len() && bytes[end].is_ascii_digit() {
                end += 1;
            }
        }
        if end == digits_from {
            return Err(self.error("expected a decimal literal"));
        }
        if end < bytes.len() && (bytes[end] == b'e' || bytes[end] == b'E') {
            let mut exp_end = end + 1;
            if exp_end < bytes.len() && (bytes[exp_end] == b'+' || bytes[exp_end] == b'-') {
                exp_end += 1;
            }
            let exp_digits = exp_end;
            while exp_end < bytes.len() && bytes[exp_end].is_ascii_digit() {
                exp_end += 1;
            }
            if exp_end > exp_digits {
                end = exp_end;
            }
        }
        let literal = &self.text[start..end];
        let value = literal
            .parse::<f64>()
            .map_err(|e| self.error(format!("bad decimal literal '{literal}': {e}")))?;
        self.pos = end;
        Ok(value)
    }

    /// Unsigned integer.
    fn integer(&mut self) -> Result<u32, ExprError> {
        self.skip_ws();
        let start = self.pos;
        let bytes = self.text.as_bytes();
        let mut end = start;
        while end < bytes.len() && bytes[end].is_ascii_digit() {
            end += 1;
        }
        if end == start {
            return Err(self.error("expected an integer"));
        }
        let value = self.text[start..end]
            .parse::<u32>()
            .map_err(|e| self.error(format!("bad integer: {e}")))?;
        self.pos = end;
        Ok(value)
    }

    fn finish(&mut self) -> Result<(), ExprError> {
        if self.peek().is_some() {
            Err(self.error("trailing input"))
        } else {
            Ok(())
        }
    }
}

/// Parses a driving expression and validates positivity over [0, horizon).
pub fn parse_driving(text: &str, horizon: f64) -> Result<DrivingFunction, ExprError> {
    let mut s = Scanner::new(text);
    s.expect('p')?;
    s.expect('=')?;
    s.expect('1')?;
    let mut terms = Vec::new();
    while s.accept('+') {
        s.expect('(')?;
        let re = s.number()?;
        s.expect(',')?;
        let im = s.number()?;
        s.expect(')')?;
        s.expect('*')?;
        let law = if s.try_keyword("exp(") {
            let rate = s.number()?;
            s.expect('*')?;
            s.expect_keyword("t")?;
            s.expect(')')?;
            s.expect('*')?;
            Some(rate)
        } else {
            None
        };
        s.expect('z')?;
        s.expect('^')?;
        let power_pos = s.pos;
        let power = s.integer()?;
        if power == 0 {
            return Err(ExprError::Syntax {
                pos: power_pos,
                message: "powers must be ≥ 1".into(),
            });
        }
        let amp = Complex::new(re, im);
        terms.push(match law {
            Some(rate) => DrivingTerm::exponential(amp, rate, power),
            None => DrivingTerm::constant(amp, power),
        });
    }
    s.finish()?;
    if terms.is_empty() {
        let mut one = DrivingFunction::constant_one();
        if horizon.is_finite() {
            one = DrivingFunction::new(Vec::new(), horizon)?;
        }
        return Ok(one);
    }
    Ok(DrivingFunction::new(terms, horizon)?)
}

/// Prints a driving function back into the grammar; `parse_driving` of the
/// output reproduces the coefficients exactly (shortest-round-trip float
/// formatting).
pub fn format_driving(p: &DrivingFunction) -> String {
    let mut out = String::from("p = 1");
    for term in p.terms() {
        match term.law {
            CoeffLaw::Constant => {
                out.push_str(&format!(
                    " + ({},{})*z^{}",
                    term.amp.re, term.amp.im, term.power
                ));
            }
            CoeffLaw::Exponential { rate } => {
                out.push_str(&format!(
                    " + ({},{})*exp({}*t)*z^{}",
                    term.amp.re, term.amp.im, rate, term.power
                ));
            }
        }
    }
    out
}

/// One term of a deficit shape.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DeltaTerm {
    Constant(f64),
    Cos { amp: f64, freq: u32 },
    Sin { amp: f64, freq: u32 },
}

/// A unit deficit profile δ(ψ) as a signed sum of harmonics.
#[derive(Debug, Clone, PartialEq)]
pub struct DeltaExpr {
    terms: Vec<DeltaTerm>,
}

impl DeltaExpr {
    pub fn terms(&self) -> &[DeltaTerm] {
        &self.terms
    }

    pub fn eval(&self, psi: f64) -> f64 {
        self.terms
            .iter()
            .map(|t| match *t {
                DeltaTerm::Constant(c) => c,
                DeltaTerm::Cos { amp, freq } => amp * (freq as f64 * psi).cos(),
                DeltaTerm::Sin { amp, freq } => amp * (freq as f64 * psi).sin(),
            })
            .sum()
    }
}

/// Parses a deficit shape expression.
pub fn parse_delta(text: &str) -> Result<DeltaExpr, ExprError> {
    let mut s = Scanner::new(text);
    let mut terms = Vec::new();
    let mut sign = 1.0;
    if s.accept('-') {
        sign = -1.0;
    } else {
        let _ = s.accept('+');
    }
    loop {
        terms.push(delta_term(&mut s, sign)?);
        match s.peek() {
            Some('+') => {
                s.expect('+')?;
                sign = 1.0;
            }
            Some('-') => {
                s.expect('-')?;
                sign = -1.0;
            }
            Some(_) => return Err(s.error("expected '+', '-' or end of expression")),
            None => break,
        }
    }
    Ok(DeltaExpr { terms })
}

fn delta_term(s: &mut Scanner, sign: f64) -> Result<DeltaTerm, ExprError> {
    let amp = match s.peek() {
        Some(c) if c.is_ascii_digit() || c == '.' => {
            let value = s.number()?;
            if s.accept('*') {
                value
            } else {
                return Ok(DeltaTerm::Constant(sign * value));
            }
        }
        _ => 1.0,
    };
    let kind = if s.try_keyword("cos") {
        'c'
    } else if s.try_keyword("sin") {
        's'
    } else {
        return Err(s.error("expected 'cos', 'sin' or a decimal literal"));
    };
    s.expect('(')?;
    let freq = match s.peek() {
        Some(c) if c.is_ascii_digit() => {
            let f = s.integer()?;
            s.expect('*')?;
            f
        }
        _ => 1,
    };
    s.expect_keyword("psi")?;
    s.expect(')')?;
    let amp = sign * amp;
    Ok(if kind == 'c' { DeltaTerm::Cos { amp, freq } } else { DeltaTerm::Sin { amp, freq } })
}

/// Prints a deficit shape back into the grammar.
pub fn format_delta(d: &DeltaExpr) -> String {
    let mut out = String::new();
    for (i, term) in d.terms().iter().enumerate() {
        let (amp, body) = match *term {
            DeltaTerm::Constant(c) => (c, String::new()),
            DeltaTerm::Cos { amp, freq } => (amp, format!("cos({freq}*psi)")),
            DeltaTerm::Sin { amp, freq } => (amp, format!("sin({freq}*psi)")),
        };
        let magnitude = amp.abs();
        if i == 0 {
            if amp < 0.0 {
                out.push_str("- ");
            }
        } else if amp < 0.0 {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        if body.is_empty() {
            out.push_str(&format!("{magnitude}"));
        } else {
            out.push_str(&format!("{magnitude}*{body}"));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_the_constant_driving() {
        let p = parse_driving("p = 1", f64::INFINITY).unwrap();
        assert!(p.is_constant_one());
    }

    #[test]
    fn parses_single_term() {
        let p = parse_driving("p = 1 + (0.0,0.3)*z^1", f64::INFINITY).unwrap();
        assert_eq!(p.terms().len(), 1);
        assert_eq!(p.terms()[0].amp, Complex::new(0.0, 0.3));
        assert_eq!(p.terms()[0].power, 1);
    }

    #[test]
    fn whitespace_is_insignificant() {
        let a = parse_driving("p=1+(0.2,0.1)*z^2", f64::INFINITY).unwrap();
        let b = parse_driving("  p = 1 + ( 0.2 , 0.1 ) * z ^ 2 ", f64::INFINITY).unwrap();
        assert_eq!(a.terms(), b.terms());
    }

    #[test]
    fn parses_exponential_law() {
        let p = parse_driving("p = 1 + (0.2,0.0)*exp(-0.5*t)*z^2", f64::INFINITY).unwrap();
        assert_eq!(
            p.terms()[0].law,
            lkweld_core::caratheodory::CoeffLaw::Exponential { rate: -0.5 }
        );
    }

    #[test]
    fn rejects_positivity_violation() {
        let err = parse_driving("p = 1 + (1.0,0.0)*z^1", f64::INFINITY).unwrap_err();
        assert!(matches!(err, ExprError::Rejected(_)), "got {err}");
    }

    #[test]
    fn syntax_error_carries_position() {
        let err = parse_driving("p = 1 + (0.1,0.2)*w^1", f64::INFINITY).unwrap_err();
        match err {
            ExprError::Syntax { pos, .. } => assert_eq!(pos, 18),
            other => panic!("expected syntax error, got {other}"),
        }
    }

    #[test]
    fn zero_power_rejected() {
        assert!(parse_driving("p = 1 + (0.1,0.0)*z^0", f64::INFINITY).is_err());
    }

    #[test]
    fn driving_round_trip() {
        for text in [
            "p = 1",
            "p = 1 + (0.0,0.3)*z^1",
            "p = 1 + (0.2,0.1)*z^2 + (-0.05,0.125)*z^3",
            "p = 1 + (0.2,0.0)*exp(-0.5*t)*z^2",
        ] {
            let p = parse_driving(text, f64::INFINITY).unwrap();
            let printed = format_driving(&p);
            let again = parse_driving(&printed, f64::INFINITY).unwrap();
            assert_eq!(p.terms(), again.terms(), "round trip failed for {text}");
        }
    }

    #[test]
    fn delta_grammar() {
        let d = parse_delta("cos(psi) + 0.5*sin(3*psi) - 0.1").unwrap();
        assert_eq!(
            d.terms(),
            &[
                DeltaTerm::Cos { amp: 1.0, freq: 1 },
                DeltaTerm::Sin { amp: 0.5, freq: 3 },
                DeltaTerm::Constant(-0.1),
            ]
        );
        let x = 1.234;
        assert!((d.eval(x) - (x.cos() + 0.5 * (3.0 * x).sin() - 0.1)).abs() < 1e-15);
    }

    #[test]
    fn delta_round_trip() {
        for text in ["cos(psi)", "-2*sin(4*psi) + 0.25", "1*cos(1*psi) + 0.5*sin(3*psi)"] {
            let d = parse_delta(text).unwrap();
            let again = parse_delta(&format_delta(&d)).unwrap();
            assert_eq!(d, again, "round trip failed for {text}");
        }
    }

    #[test]
    fn delta_rejects_garbage() {
        assert!(parse_delta("tan(psi)").is_err());
        assert!(parse_delta("cos(psi) * 2").is_err());
    }
}
