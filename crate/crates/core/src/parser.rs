//! Text form of an ordering.
//!
//! ```text
//! expr     := term (('+' | '-') term)*
//! term     := [rational '*'] factor+
//! factor   := 'p' | 'p^2' | 'm^(' rational ')' | '1/m' | '1/sqrt(m)'
//! rational := ['-'] int ['/' int]
//! ```
//!
//! Coefficients include the overall `½` of the kinetic energy, so they sum
//! to `1/2` and each term's weight is twice its coefficient. Factors are
//! juxtaposed; whitespace between them is optional where unambiguous.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::ParseError;
use crate::ordering::{BuildingBlock, OrderingSpec};
use crate::scalar::{ratio, Rational, Scalar};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Slash,
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    P,
    M,
    Sqrt,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Int(i) => format!("integer {i}"),
            Tok::Slash => "'/'".into(),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Star => "'*'".into(),
            Tok::Caret => "'^'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::P => "'p'".into(),
            Tok::M => "'m'".into(),
            Tok::Sqrt => "'sqrt'".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn tokenize(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((Tok::Int(src[start..i].parse().expect("digits")), start));
                continue;
            }
            b'/' => Tok::Slash,
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'p' => Tok::P,
            b'm' => Tok::M,
            b's' if src[i..].starts_with("sqrt") => {
                i += 4;
                out.push((Tok::Sqrt, start));
                continue;
            }
            _ => {
                let found = src[i..].chars().next().expect("non-empty");
                return Err(ParseError::Syntax {
                    position: start,
                    expected: vec!["'p'", "'m^('", "'1/m'", "'1/sqrt(m)'", "rational"],
                    found: format!("{found:?}"),
                });
            }
        };
        i += 1;
        out.push((tok, start));
    }
    out.push((Tok::End, src.len()));
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
enum Factor {
    P,
    Mass(Rational),
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self, k: usize) -> &Tok {
        let i = (self.pos + k).min(self.toks.len() - 1);
        &self.toks[i].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos < self.toks.len() - 1 {
            self.pos += 1;
        }
        t
    }

    fn fail<T>(&self, expected: Vec<&'static str>) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            position: self.offset(),
            expected,
            found: self.peek(0).describe(),
        })
    }

    fn expect(&mut self, tok: Tok, name: &'static str) -> Result<(), ParseError> {
        if *self.peek(0) == tok {
            self.bump();
            Ok(())
        } else {
            self.fail(vec![name])
        }
    }

    fn int(&mut self) -> Result<BigInt, ParseError> {
        match self.peek(0) {
            Tok::Int(i) => {
                let i = i.clone();
                self.bump();
                Ok(i)
            }
            _ => self.fail(vec!["integer"]),
        }
    }

    fn rational(&mut self) -> Result<Rational, ParseError> {
        let negative = *self.peek(0) == Tok::Minus;
        if negative {
            self.bump();
        }
        let num = self.int()?;
        let value = if *self.peek(0) == Tok::Slash {
            self.bump();
            let at = self.offset();
            let den = self.int()?;
            if den.is_zero() {
                return Err(ParseError::Syntax {
                    position: at,
                    expected: vec!["non-zero denominator"],
                    found: "0".into(),
                });
            }
            Rational::new(num, den)
        } else {
            Rational::from_integer(num)
        };
        Ok(if negative { -value } else { value })
    }

    /// `1/m` or `1/sqrt(m)` starts like a rational coefficient; look past
    /// the slash to tell them apart.
    fn at_sugar(&self) -> bool {
        matches!(self.peek(0), Tok::Int(i) if i.is_one())
            && *self.peek(1) == Tok::Slash
            && matches!(self.peek(2), Tok::M | Tok::Sqrt)
    }

    fn at_factor(&self) -> bool {
        matches!(self.peek(0), Tok::P | Tok::M) || self.at_sugar()
    }

    fn factor(&mut self, out: &mut Vec<Factor>) -> Result<(), ParseError> {
        match self.peek(0) {
            Tok::P => {
                self.bump();
                out.push(Factor::P);
                if *self.peek(0) == Tok::Caret {
                    self.bump();
                    match self.peek(0) {
                        Tok::Int(i) if *i == BigInt::from(2) => {
                            self.bump();
                            out.push(Factor::P);
                        }
                        _ => return self.fail(vec!["2"]),
                    }
                }
                Ok(())
            }
            Tok::M => {
                self.bump();
                self.expect(Tok::Caret, "'^'")?;
                self.expect(Tok::LParen, "'('")?;
                let e = self.rational()?;
                self.expect(Tok::RParen, "')'")?;
                out.push(Factor::Mass(e));
                Ok(())
            }
            _ if self.at_sugar() => {
                self.bump();
                self.bump();
                if *self.peek(0) == Tok::M {
                    self.bump();
                    out.push(Factor::Mass(-Rational::one()));
                } else {
                    self.bump();
                    self.expect(Tok::LParen, "'('")?;
                    self.expect(Tok::M, "'m'")?;
                    self.expect(Tok::RParen, "')'")?;
                    out.push(Factor::Mass(ratio(-1, 2)));
                }
                Ok(())
            }
            _ => self.fail(vec!["'p'", "'m^('", "'1/m'", "'1/sqrt(m)'"]),
        }
    }

    /// One term with its leading sign already consumed.
    fn term(&mut self, negate: bool) -> Result<(Rational, Vec<Factor>), ParseError> {
        let coeff = if self.at_factor() {
            Rational::one()
        } else if matches!(self.peek(0), Tok::Int(_) | Tok::Minus) {
            let c = self.rational()?;
            self.expect(Tok::Star, "'*'")?;
            c
        } else {
            return self.fail(vec!["rational", "'p'", "'m^('", "'1/m'", "'1/sqrt(m)'"]);
        };
        let mut factors = Vec::new();
        self.factor(&mut factors)?;
        while self.at_factor() {
            self.factor(&mut factors)?;
        }
        Ok((if negate { -coeff } else { coeff }, factors))
    }
}

/// Reduces a factor string to `(α, β, γ)`, or returns the momentum count.
fn exponents(factors: &[Factor]) -> Result<[Rational; 3], usize> {
    let mut slots = [Rational::zero(), Rational::zero(), Rational::zero()];
    let mut seen = 0;
    for f in factors {
        match f {
            Factor::P => seen += 1,
            Factor::Mass(e) if seen <= 2 => slots[seen] += e,
            Factor::Mass(_) => {}
        }
    }
    if seen == 2 {
        Ok(slots)
    } else {
        Err(seen)
    }
}

/// Parses the text form into an exact spec, one building block per term in
/// source order.
pub fn parse(text: &str) -> Result<OrderingSpec<Rational>, ParseError> {
    let mut p = Parser {
        toks: tokenize(text)?,
        pos: 0,
    };
    let mut raw = Vec::new();
    let mut negate = false;
    loop {
        let start = p.offset();
        let (c, f) = p.term(negate)?;
        raw.push((start, c, f));
        match p.peek(0) {
            Tok::Plus => negate = false,
            Tok::Minus => negate = true,
            Tok::End => break,
            _ => return p.fail(vec!["'+'", "'-'", "end of input"]),
        }
        p.bump();
    }

    let two = Rational::from_integer(2.into());
    let mut terms = Vec::with_capacity(raw.len());
    let mut sum = Rational::zero();
    for (i, (position, coeff, factors)) in raw.into_iter().enumerate() {
        let [a, b, g] = exponents(&factors).map_err(|count| ParseError::WrongMomentumCount {
            term: i,
            position,
            count,
        })?;
        let total = &a + &b + &g;
        if total != -Rational::one() {
            return Err(ParseError::PerTermConstraintViolation {
                term: i,
                position,
                sum: total.to_string(),
            });
        }
        sum += &coeff;
        terms.push(BuildingBlock::new(&coeff * &two, a, b, g));
    }
    if sum != ratio(1, 2) {
        return Err(ParseError::NonUnitWeightSum {
            sum: sum.to_string(),
        });
    }
    Ok(OrderingSpec::new(terms))
}

fn power<S: Scalar>(e: &S) -> Option<String> {
    if e.is_zero() {
        None
    } else {
        Some(format!("m^({e})"))
    }
}

/// Writes the terms in their current order; exponents and coefficients use
/// the scalar's `Display`. Only rationals print in a re-parseable form.
pub fn render<S: Scalar>(spec: &OrderingSpec<S>) -> String {
    let mut out = String::new();
    for (i, t) in spec.terms().iter().enumerate() {
        let coeff = t.weight.clone() * S::half();
        let negative = coeff < S::zero();
        let magnitude = if negative { -coeff } else { coeff };
        match (i, negative) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        out.push_str(&format!("{magnitude} *"));
        let factors = [
            power(&t.alpha),
            Some("p".to_string()),
            power(&t.beta),
            Some("p".to_string()),
            power(&t.gamma),
        ];
        for f in factors.into_iter().flatten() {
            out.push(' ');
            out.push_str(&f);
        }
    }
    out
}

/// Deterministic text form of the canonical spec: sorted, merged,
/// zero-weight terms dropped.
pub fn print_canonical(spec: &OrderingSpec<Rational>) -> String {
    render(&spec.canonical())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn same(text: &str, name: &str) {
        assert_eq!(
            parse(text).unwrap().canonical().terms(),
            catalog(name).unwrap().canonical().terms(),
            "{text}"
        );
    }

    #[test]
    fn parses_textbook_forms() {
        same("1/2 * p m^(-1) p", "BDD");
        same("1/4 * 1/m p^2 + 1/4 * p^2 1/m", "GW");
        same("1/2 * 1/sqrt(m) p^2 1/sqrt(m)", "ZK");
        let gw = parse("1/4 * 1/m p^2 + 1/4 * p^2 1/m").unwrap();
        assert_eq!(gw.terms()[0].weight, ratio(1, 2));
    }

    #[test]
    fn merges_adjacent_powers() {
        let s = parse("1/2 * m^(-1/4) m^(-1/4) p p m^(-1/2)").unwrap();
        assert_eq!(s.terms()[0].alpha, ratio(-1, 2));
        let s = parse("1/2 * 1/sqrt(m)1/sqrt(m) pp").unwrap();
        assert_eq!(s.terms()[0].alpha, ratio(-1, 1));
    }

    #[test]
    fn one_momentum_is_rejected() {
        assert_eq!(
            parse("1/2 * p m^(-1)"),
            Err(ParseError::WrongMomentumCount {
                term: 0,
                position: 0,
                count: 1
            })
        );
    }

    #[test]
    fn other_errors() {
        assert!(matches!(
            parse("1/4 * p m^(-1) p"),
            Err(ParseError::NonUnitWeightSum { .. })
        ));
        assert!(matches!(
            parse("1/2 * p m^(-1/2) p"),
            Err(ParseError::PerTermConstraintViolation { term: 0, .. })
        ));
        let err = parse("1/2 * p m^(-1) q").unwrap_err();
        assert_eq!(err.position(), Some(15));
        let err = parse("1/2 * p m^(-1").unwrap_err();
        assert!(matches!(err, ParseError::Syntax { position: 13, .. }), "{err}");
        assert!(parse("").is_err());
        assert!(parse("1/2 p m^(-1) p").is_err());
        assert!(parse("1/0 * p m^(-1) p").is_err());
    }

    #[test]
    fn signed_terms() {
        let s = parse("1 * p m^(-1) p - 1/2 * m^(-1) p p").unwrap();
        assert_eq!(s.terms()[1].weight, ratio(-1, 1));
        assert_eq!(print_canonical(&s), "-1/2 * m^(-1) p p + 1 * p m^(-1) p");
    }

    #[test]
    fn canonical_text() {
        assert_eq!(print_canonical(&catalog("BDD").unwrap()), "1/2 * p m^(-1) p");
        assert_eq!(
            print_canonical(&catalog("W").unwrap()),
            "1/8 * m^(-1) p p + 1/4 * p m^(-1) p + 1/8 * p p m^(-1)"
        );
    }

    #[test]
    fn duplicates_print_once() {
        let s = parse("1/4 * p m^(-1) p + 1/4 * p 1/m p").unwrap();
        assert_eq!(print_canonical(&s), "1/2 * p m^(-1) p");
    }

    #[test]
    fn catalog_round_trips() {
        for name in ["BDD", "GW", "ZK", "MM", "W", "LK", "Lal", "YY", "DA(1/2)", "vR(-1/3,-1/4)"] {
            let spec = catalog(name).unwrap();
            let back = parse(&print_canonical(&spec)).unwrap();
            assert_eq!(back.canonical().terms(), spec.canonical().terms(), "{name}");
            assert_eq!(back.linear_params(), spec.linear_params());
        }
    }
}
