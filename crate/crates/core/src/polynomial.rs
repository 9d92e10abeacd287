//! Dense univariate polynomials with exact coefficients.

use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::linalg::{format_rational, parse_rational};

/// Name of the formal variable, used in text and JSON output.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variable {
    /// Generating-function variable of delta- and h-polynomials.
    Lambda,
    /// Dilation factor of the Ehrhart polynomial.
    N,
}

impl Variable {
    pub fn name(self) -> &'static str {
        match self {
            Variable::Lambda => "lambda",
            Variable::N => "n",
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            Variable::Lambda => "λ",
            Variable::N => "n",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        match s {
            "lambda" => Some(Variable::Lambda),
            "n" => Some(Variable::N),
            _ => None,
        }
    }
}

/// Exact coefficient types with a canonical text form.
pub trait Coefficient: Clone + Zero + One + PartialEq + Mul<Output = Self> {
    fn to_text(&self) -> String;
    fn from_text(s: &str) -> Option<Self>;
}

impl Coefficient for BigInt {
    fn to_text(&self) -> String {
        self.to_string()
    }

    fn from_text(s: &str) -> Option<Self> {
        s.trim().parse().ok()
    }
}

impl Coefficient for BigRational {
    fn to_text(&self) -> String {
        format_rational(self)
    }

    fn from_text(s: &str) -> Option<Self> {
        parse_rational(s)
    }
}

/// Coefficient list indexed by degree, with no trailing zeros (the zero
/// polynomial has an empty list).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial<T> {
    coefficients: Vec<T>,
    variable: Variable,
}

impl<T: Coefficient> Polynomial<T> {
    pub fn new(mut coefficients: Vec<T>, variable: Variable) -> Self {
        while coefficients.last().is_some_and(Zero::is_zero) {
            coefficients.pop();
        }
        Polynomial {
            coefficients,
            variable,
        }
    }

    pub fn lambda(coefficients: Vec<T>) -> Self {
        Self::new(coefficients, Variable::Lambda)
    }

    pub fn coefficients(&self) -> &[T] {
        &self.coefficients
    }

    pub fn variable(&self) -> Variable {
        self.variable
    }

    /// Coefficient of `x^i` (zero past the end).
    pub fn coeff(&self, i: usize) -> T {
        self.coefficients.get(i).cloned().unwrap_or_else(T::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coefficients.len().checked_sub(1)
    }

    pub fn eval(&self, x: &T) -> T {
        self.coefficients
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn sum_of_coefficients(&self) -> T {
        self.coefficients
            .iter()
            .fold(T::zero(), |acc, c| acc + c.clone())
    }
}

impl<T: Coefficient> Mul for &Polynomial<T> {
    type Output = Polynomial<T>;

    fn mul(self, rhs: &Polynomial<T>) -> Polynomial<T> {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::new(Vec::new(), self.variable);
        }
        let mut out = vec![T::zero(); self.coefficients.len() + rhs.coefficients.len() - 1];
        for (i, a) in self.coefficients.iter().enumerate() {
            for (j, b) in rhs.coefficients.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Polynomial::new(out, self.variable)
    }
}

impl<T: Coefficient> fmt::Display for Polynomial<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let x = self.variable.symbol();
        let mut first = true;
        for (i, c) in self.coefficients.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let text = c.to_text();
            let (neg, mag) = match text.strip_prefix('-') {
                Some(m) => (true, m.to_string()),
                None => (false, text),
            };
            match (first, neg) {
                (true, true) => write!(f, "-")?,
                (true, false) => {}
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
            }
            first = false;
            let mag = if mag.contains('/') && i > 0 {
                format!("({mag})")
            } else {
                mag
            };
            match i {
                0 => write!(f, "{mag}")?,
                _ => {
                    if mag != "1" {
                        write!(f, "{mag}")?;
                    }
                    write!(f, "{x}")?;
                    if i > 1 {
                        write!(f, "^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct PolynomialJson {
    variable: String,
    coefficients: Vec<String>,
}

impl<T: Coefficient> Serialize for Polynomial<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        PolynomialJson {
            variable: self.variable.name().to_string(),
            coefficients: self.coefficients.iter().map(Coefficient::to_text).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de, T: Coefficient> Deserialize<'de> for Polynomial<T> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = PolynomialJson::deserialize(deserializer)?;
        let variable = Variable::parse(&raw.variable)
            .ok_or_else(|| D::Error::custom(format!("unknown variable {:?}", raw.variable)))?;
        let coefficients = raw
            .coefficients
            .iter()
            .map(|s| T::from_text(s).ok_or_else(|| D::Error::custom(format!("bad coefficient {s:?}"))))
            .collect::<Result<Vec<T>, _>>()?;
        Ok(Polynomial::new(coefficients, variable))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ip(c: &[i64]) -> Polynomial<BigInt> {
        Polynomial::lambda(c.iter().map(|&x| BigInt::from(x)).collect())
    }

    #[test]
    fn trims_and_multiplies() {
        let p = ip(&[1, 1, 0, 0]);
        assert_eq!(p.degree(), Some(1));
        assert_eq!(&p * &p, ip(&[1, 2, 1]));
        assert!(ip(&[0, 0]).is_zero());
        assert_eq!(ip(&[]).degree(), None);
    }

    #[test]
    fn display() {
        assert_eq!(ip(&[1, 1, 1]).to_string(), "1 + λ + λ^2");
        assert_eq!(ip(&[1, -2, 3]).to_string(), "1 - 2λ + 3λ^2");
        let r = Polynomial::new(
            vec![
                BigRational::from_integer(1.into()),
                BigRational::new(3.into(), 2.into()),
                BigRational::new(3.into(), 2.into()),
            ],
            Variable::N,
        );
        assert_eq!(r.to_string(), "1 + (3/2)n + (3/2)n^2");
        assert_eq!(r.eval(&BigRational::from_integer(2.into())), BigRational::from_integer(10.into()));
    }

    #[test]
    fn json_shape() {
        let s = serde_json::to_string(&ip(&[1, 1])).unwrap();
        assert_eq!(s, r#"{"variable":"lambda","coefficients":["1","1"]}"#);
        let back: Polynomial<BigInt> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, ip(&[1, 1]));
        let r: Polynomial<BigRational> =
            serde_json::from_str(r#"{"variable":"n","coefficients":["1","3/2","3/2"]}"#).unwrap();
        assert_eq!(r.coeff(1), BigRational::new(3.into(), 2.into()));
    }
}
