//! Text syntax for forms: sums of terms such as `e12`, `-e135`, `3/2*e123`,
//! `sqrt2*e56`, `a*e15`, `2*a^2*e125` or `2e56`. `0` is the zero form.

use super::basis::DIM;
use super::form::KForm;
use crate::error::{Error, Result};

/// Parses a form of degree `k`, substituting the given symbol values.
pub fn parse_form(input: &str, k: usize, bindings: &[(&str, f64)]) -> Result<KForm> {
    if k > DIM {
        return Err(Error::InvalidDegree(k));
    }
    let mut p = Parser {
        src: input,
        chars: input.chars().filter(|c| !c.is_whitespace()).collect(),
        pos: 0,
        bindings,
    };
    let mut acc = KForm::zero(k);
    if p.chars.is_empty() {
        return Err(p.err("empty input"));
    }
    let mut first = true;
    while p.pos < p.chars.len() {
        let sign = match p.peek() {
            Some('+') => {
                p.pos += 1;
                1.0
            }
            Some('-') | Some('−') => {
                p.pos += 1;
                -1.0
            }
            _ if first => 1.0,
            _ => return Err(p.err("expected '+' or '-' between terms")),
        };
        first = false;
        let (coef, idx) = p.term()?;
        match idx {
            Some(idx) => {
                if idx.len() != k {
                    return Err(p.err(&format!("term of degree {} in a {k}-form", idx.len())));
                }
                acc += KForm::monomial(sign * coef, &idx)?;
            }
            None if k == 0 => acc += KForm::scalar(sign * coef),
            None if coef == 0.0 => {}
            None => return Err(p.err("scalar term in a form of positive degree")),
        }
    }
    Ok(acc)
}

struct Parser<'a> {
    src: &'a str,
    chars: Vec<char>,
    pos: usize,
    bindings: &'a [(&'a str, f64)],
}

impl Parser<'_> {
    fn err(&self, reason: &str) -> Error {
        Error::Parse {
            input: self.src.to_string(),
            reason: format!("{reason} (at position {})", self.pos),
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn at_monomial(&self) -> bool {
        self.peek() == Some('e')
            && self
                .chars
                .get(self.pos + 1)
                .is_some_and(|c| c.is_ascii_digit())
    }

    /// `factor ('*'? factor)*` with at most one monomial, which must come last.
    fn term(&mut self) -> Result<(f64, Option<Vec<usize>>)> {
        let mut coef = 1.0;
        loop {
            if self.at_monomial() {
                self.pos += 1;
                let mut idx = Vec::new();
                while let Some(c) = self.peek().filter(char::is_ascii_digit) {
                    idx.push(c.to_digit(10).unwrap() as usize);
                    self.pos += 1;
                }
                return match self.peek() {
                    None | Some('+') | Some('-') | Some('−') => Ok((coef, Some(idx))),
                    _ => Err(self.err("monomial must end its term")),
                };
            }
            coef *= self.factor()?;
            while self.peek() == Some('/') {
                self.pos += 1;
                let d = self.factor()?;
                if d == 0.0 {
                    return Err(self.err("division by zero"));
                }
                coef /= d;
            }
            match self.peek() {
                Some('*') => self.pos += 1,
                None | Some('+') | Some('-') | Some('−') => return Ok((coef, None)),
                _ => {}
            }
        }
    }

    fn factor(&mut self) -> Result<f64> {
        let base = match self.peek() {
            Some('(') => {
                self.pos += 1;
                let start = self.pos;
                let mut depth = 1;
                while depth > 0 {
                    match self.peek() {
                        Some('(') => depth += 1,
                        Some(')') => depth -= 1,
                        None => return Err(self.err("unbalanced parenthesis")),
                        _ => {}
                    }
                    self.pos += 1;
                }
                let inner: String = self.chars[start..self.pos - 1].iter().collect();
                parse_form(&inner, 0, self.bindings)?.coeffs()[0]
            }
            Some('√') => {
                self.pos += 1;
                self.factor_no_power()?.sqrt()
            }
            Some(c) if c.is_ascii_digit() || c == '.' => self.number()?,
            Some(c) if c.is_alphabetic() || c == '_' => {
                let start = self.pos;
                while let Some(c) = self.peek().filter(|c| c.is_alphanumeric() || *c == '_') {
                    if self.pos > start
                        && c == 'e'
                        && self
                            .chars
                            .get(self.pos + 1)
                            .is_some_and(|d| d.is_ascii_digit())
                    {
                        break;
                    }
                    self.pos += 1;
                }
                let name: String = self.chars[start..self.pos].iter().collect();
                if let Some(rest) = name.strip_prefix("sqrt") {
                    if rest.is_empty() {
                        self.factor_no_power()?.sqrt()
                    } else {
                        rest.parse::<f64>()
                            .map_err(|_| self.err("bad sqrt argument"))?
                            .sqrt()
                    }
                } else {
                    self.bindings
                        .iter()
                        .find(|(n, _)| *n == name)
                        .map(|(_, v)| *v)
                        .ok_or_else(|| self.err(&format!("unbound symbol {name:?}")))?
                }
            }
            _ => return Err(self.err("expected a coefficient or monomial")),
        };
        if self.peek() == Some('^') {
            self.pos += 1;
            let p = self.number()?;
            return Ok(base.powf(p));
        }
        Ok(base)
    }

    fn factor_no_power(&mut self) -> Result<f64> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() || c == '.' => self.number(),
            Some('(') => self.factor(),
            _ => Err(self.err("expected a number after sqrt")),
        }
    }

    fn number(&mut self) -> Result<f64> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit() || c == '.') {
            self.pos += 1;
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse::<f64>().map_err(|_| self.err("malformed number"))
    }
}

/// Splits a parenthesized tuple `(a, b, …)` at top-level commas.
pub fn split_tuple(input: &str) -> Result<Vec<String>> {
    let t = input.trim();
    let inner = t
        .strip_prefix('(')
        .and_then(|s| s.strip_suffix(')'))
        .ok_or_else(|| Error::Parse {
            input: input.to_string(),
            reason: "expected a parenthesized tuple".into(),
        })?;
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for c in inner.chars() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(cur.trim().to_string());
                cur.clear();
                continue;
            }
            _ => {}
        }
        cur.push(c);
    }
    parts.push(cur.trim().to_string());
    Ok(parts)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(c: f64, idx: &[usize]) -> KForm {
        KForm::monomial(c, idx).unwrap()
    }

    #[test]
    fn parses_catalog_syntax() {
        let f = parse_form("e14+e23+2e56", 2, &[]).unwrap();
        assert_eq!(f, e(1.0, &[1, 4]) + e(1.0, &[2, 3]) + e(2.0, &[5, 6]));
        let f = parse_form("-9/2*e123 - 3/2 e145", 3, &[]).unwrap();
        assert_eq!(f, e(-4.5, &[1, 2, 3]) + e(-1.5, &[1, 4, 5]));
        let f = parse_form("sqrt2*e56-(sqrt2/2)*e13", 2, &[]).unwrap();
        let r2 = 2f64.sqrt();
        assert!((f - (e(r2, &[5, 6]) - e(r2 / 2.0, &[1, 3]))).is_zero(1e-15));
        let f = parse_form("2*a^2*e125 + a*e15", 3, &[("a", 0.5)]);
        assert!(f.is_err());
        let f = parse_form("2*a^2*e125", 3, &[("a", 3.0)]).unwrap();
        assert_eq!(f, e(18.0, &[1, 2, 5]));
        assert_eq!(parse_form("0", 2, &[]).unwrap(), KForm::zero(2));
        assert_eq!(parse_form("-e13", 2, &[]).unwrap(), e(-1.0, &[1, 3]));
        assert_eq!(parse_form("e21", 2, &[]).unwrap(), e(-1.0, &[1, 2]));
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_form("e12", 3, &[]).is_err());
        assert!(parse_form("b*e12", 2, &[]).is_err());
        assert!(parse_form("", 2, &[]).is_err());
        assert!(parse_form("e12e34", 4, &[]).is_err());
        assert!(parse_form("e17", 2, &[]).is_err());
    }

    #[test]
    fn tuple_split() {
        assert_eq!(
            split_tuple("(0, -e13, (1/2)*e12)").unwrap(),
            vec!["0", "-e13", "(1/2)*e12"]
        );
        assert!(split_tuple("0,0").is_err());
    }
}
