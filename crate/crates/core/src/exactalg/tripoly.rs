use std::collections::BTreeMap;
use std::fmt;

use rug::Integer;

/// Exponent triple `(a, b, c)` of the monomial `x^a y^b z^c`.
pub type Exponents = (u32, u32, u32);

/// Sparse trivariate polynomial with integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct TriPoly {
    terms: BTreeMap<Exponents, Integer>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Var {
    X,
    Y,
    Z,
}

impl TriPoly {
    pub fn zero() -> Self {
        TriPoly::default()
    }

    pub fn monomial(exps: Exponents, coeff: impl Into<Integer>) -> Self {
        let mut p = TriPoly::zero();
        p.add_term(exps, coeff.into());
        p
    }

    /// Builds from `(a, b, c, coeff)` tuples; like terms are merged.
    pub fn from_terms(terms: &[(u32, u32, u32, i64)]) -> Self {
        let mut p = TriPoly::zero();
        for &(a, b, c, coeff) in terms {
            p.add_term((a, b, c), Integer::from(coeff));
        }
        p
    }

    fn add_term(&mut self, exps: Exponents, coeff: Integer) {
        if coeff == 0 {
            return;
        }
        let entry = self.terms.entry(exps).or_default();
        *entry += coeff;
        if *entry == 0 {
            self.terms.remove(&exps);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Integer)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exps: Exponents) -> Integer {
        self.terms.get(&exps).cloned().unwrap_or_default()
    }

    /// Common total degree of every monomial, or `None` if the polynomial is zero
    /// or not homogeneous.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degrees = self.terms.keys().map(|&(a, b, c)| a + b + c);
        let first = degrees.next()?;
        degrees.all(|d| d == first).then_some(first)
    }

    pub fn add(&self, other: &TriPoly) -> TriPoly {
        let mut out = self.clone();
        for (&e, c) in &other.terms {
            out.add_term(e, c.clone());
        }
        out
    }

    pub fn mul(&self, other: &TriPoly) -> TriPoly {
        let mut out = TriPoly::zero();
        for (&(a1, b1, c1), x) in &self.terms {
            for (&(a2, b2, c2), y) in &other.terms {
                out.add_term((a1 + a2, b1 + b2, c1 + c2), Integer::from(x * y));
            }
        }
        out
    }

    pub fn derivative(&self, var: Var) -> TriPoly {
        let mut out = TriPoly::zero();
        for (&(a, b, c), coeff) in &self.terms {
            let (power, exps) = match var {
                Var::X if a > 0 => (a, (a - 1, b, c)),
                Var::Y if b > 0 => (b, (a, b - 1, c)),
                Var::Z if c > 0 => (c, (a, b, c - 1)),
                _ => continue,
            };
            out.add_term(exps, Integer::from(coeff * power));
        }
        out
    }

    /// `self` multiplied by the monomial `x^a y^b z^c`.
    pub fn shift(&self, (a, b, c): Exponents) -> TriPoly {
        TriPoly {
            terms: self
                .terms
                .iter()
                .map(|(&(a0, b0, c0), coeff)| ((a0 + a, b0 + b, c0 + c), coeff.clone()))
                .collect(),
        }
    }

    /// Applies `yz d/dx + zx d/dy + xy d/dz`.
    pub fn schett_step(&self) -> TriPoly {
        let dx = self.derivative(Var::X).shift((0, 1, 1));
        let dy = self.derivative(Var::Y).shift((1, 0, 1));
        let dz = self.derivative(Var::Z).shift((1, 1, 0));
        dx.add(&dy).add(&dz)
    }
}

impl fmt::Display for TriPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        // graded: descending x power, then y
        for (i, (&(a, b, c), coeff)) in self.terms.iter().rev().enumerate() {
            let negative = *coeff < 0;
            if i == 0 {
                if negative {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if negative { " - " } else { " + " })?;
            }
            let magnitude = Integer::from(coeff.abs_ref());
            let constant = a + b + c == 0;
            if magnitude != 1 || constant {
                write!(f, "{magnitude}")?;
            }
            for (name, e) in [("x", a), ("y", b), ("z", c)] {
                match e {
                    0 => {}
                    1 => f.write_str(name)?,
                    _ => write!(f, "{name}^{e}")?,
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivative_and_cancellation() {
        let p = TriPoly::from_terms(&[(2, 1, 0, 3), (0, 0, 4, -1)]);
        assert_eq!(p.derivative(Var::X), TriPoly::from_terms(&[(1, 1, 0, 6)]));
        assert_eq!(p.derivative(Var::Z), TriPoly::from_terms(&[(0, 0, 3, -4)]));
        assert!(p.derivative(Var::Y).len() == 1);
        let q = TriPoly::from_terms(&[(1, 0, 0, 2), (1, 0, 0, -2)]);
        assert!(q.is_empty());
    }

    #[test]
    fn multiplication() {
        // (x + y)(x - y) = x^2 - y^2
        let a = TriPoly::from_terms(&[(1, 0, 0, 1), (0, 1, 0, 1)]);
        let b = TriPoly::from_terms(&[(1, 0, 0, 1), (0, 1, 0, -1)]);
        assert_eq!(a.mul(&b), TriPoly::from_terms(&[(2, 0, 0, 1), (0, 2, 0, -1)]));
    }

    #[test]
    fn homogeneity() {
        assert_eq!(TriPoly::from_terms(&[(1, 1, 0, 1), (0, 0, 2, 5)]).homogeneous_degree(), Some(2));
        assert_eq!(TriPoly::from_terms(&[(1, 0, 0, 1), (0, 0, 2, 5)]).homogeneous_degree(), None);
        assert_eq!(TriPoly::zero().homogeneous_degree(), None);
    }

    #[test]
    fn display_orders_by_x_power() {
        let p = TriPoly::from_terms(&[(1, 2, 0, 1), (1, 0, 2, 1)]);
        assert_eq!(p.to_string(), "xy^2 + xz^2");
    }
}
