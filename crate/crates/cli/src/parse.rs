//! Tuple literals: `re,imi` entries separated by `;`, whitespace ignored.

use factormap::{Point3C64, Target64};
use num_complex::Complex;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ParseError {
    #[error("malformed complex literal `{0}` (expected `re,imi`)")]
    Complex(String),
    #[error("malformed real literal `{0}`")]
    Real(String),
    #[error("expected {expected} entries separated by `;`, found {found} in `{input}`")]
    Arity { expected: usize, found: usize, input: String },
}

fn real(token: &str) -> Result<f64, ParseError> {
    match token.parse::<f64>() {
        Ok(x) if x.is_finite() => Ok(x),
        _ => Err(ParseError::Real(token.to_string())),
    }
}

pub fn complex(token: &str) -> Result<Complex<f64>, ParseError> {
    let bad = || ParseError::Complex(token.to_string());
    let (re, im) = token.split_once(',').ok_or_else(bad)?;
    let im = im.strip_suffix('i').ok_or_else(bad)?;
    let re = real(re).map_err(|_| bad())?;
    let im = real(im).map_err(|_| bad())?;
    Ok(Complex::new(re, im))
}

fn entries(input: &str, expected: usize) -> Result<Vec<String>, ParseError> {
    let compact: String = input.chars().filter(|c| !c.is_whitespace()).collect();
    let parts: Vec<String> = compact.split(';').map(str::to_string).collect();
    if parts.len() != expected {
        return Err(ParseError::Arity { expected, found: parts.len(), input: input.to_string() });
    }
    Ok(parts)
}

/// Three complex entries in the w frame.
pub fn point(input: &str) -> Result<Point3C64, ParseError> {
    let e = entries(input, 3)?;
    Ok(Point3C64::w(complex(&e[0])?, complex(&e[1])?, complex(&e[2])?))
}

/// Two complex entries followed by a real one.
pub fn target(input: &str) -> Result<Target64, ParseError> {
    let e = entries(input, 3)?;
    Ok(Target64::new(complex(&e[0])?, complex(&e[1])?, real(&e[2])?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_point_with_spacing() {
        let p = point(" 1,0i ;0, 1i;  -2.5,3e-1i ").unwrap();
        assert_eq!(p.c[0], Complex::new(1.0, 0.0));
        assert_eq!(p.c[1], Complex::new(0.0, 1.0));
        assert_eq!(p.c[2], Complex::new(-2.5, 0.3));
    }

    #[test]
    fn parses_target() {
        let t = target("0,0i; 0,0i; -4").unwrap();
        assert_eq!(t, Target64::new(Complex::new(0.0, 0.0), Complex::new(0.0, 0.0), -4.0));
    }

    #[test]
    fn names_the_bad_token() {
        assert_eq!(point("1,0i; 0,1; 2,0i"), Err(ParseError::Complex("0,1".into())));
        assert_eq!(point("1,0i; x,1i; 2,0i"), Err(ParseError::Complex("x,1i".into())));
        assert_eq!(target("1,0i; 0,0i; 2,0i"), Err(ParseError::Real("2,0i".into())));
        assert_eq!(complex("1,nani"), Err(ParseError::Complex("1,nani".into())));
    }

    #[test]
    fn rejects_wrong_arity() {
        assert!(matches!(point("1,0i; 0,1i"), Err(ParseError::Arity { found: 2, .. })));
        assert!(matches!(target("1,0i;0,0i;1;2"), Err(ParseError::Arity { found: 4, .. })));
    }
}
