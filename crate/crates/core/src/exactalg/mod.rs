//! Exact algebra: rationals, polynomials in `m = k^2`, and the trivariate Schett
//! polynomials.
//!
//! Rationals and big integers are `rug` types; `rug::Rational` is always kept in
//! lowest terms with a positive denominator.

mod tripoly;
mod unipoly;

use rug::{Integer, Rational};

pub use tripoly::{Exponents, TriPoly, Var};
pub use unipoly::UniPoly;

use crate::error::{domain, Error, Result};

/// Exact rational coefficient type.
pub type BigRat = Rational;

/// `binom(n, r)` for `0 <= r <= n`.
pub fn binomial(n: i64, r: i64) -> Result<Integer> {
    if n < 0 || r < 0 || r > n {
        return domain(format!("binomial({n}, {r}) needs 0 <= r <= n"));
    }
    let n = u32::try_from(n).map_err(|_| Error::Domain(format!("binomial: n = {n} too large")))?;
    Ok(Integer::from(Integer::binomial_u(n, r as u32)))
}

/// `n!` as a big integer.
pub fn factorial(n: u32) -> Integer {
    Integer::from(Integer::factorial(n))
}

/// Schett polynomials `X_0 = x`, `X_n = (yz d/dx + zx d/dy + xy d/dz) X_{n-1}`,
/// generated once and kept.
#[derive(Clone, Debug)]
pub struct SchettTable {
    raw: Vec<TriPoly>,
}

impl SchettTable {
    /// `X_0 ..= X_n`.
    pub fn up_to(n: usize) -> Self {
        let mut raw = Vec::with_capacity(n + 1);
        raw.push(TriPoly::monomial((1, 0, 0), 1));
        for i in 1..=n {
            let next = raw[i - 1].schett_step();
            raw.push(next);
        }
        SchettTable { raw }
    }

    pub fn len(&self) -> usize {
        self.raw.len()
    }

    pub fn is_empty(&self) -> bool {
        self.raw.is_empty()
    }

    pub fn raw(&self, n: usize) -> Option<&TriPoly> {
        self.raw.get(n)
    }

    /// `S_n(m)` from `X_{2n+1}`; needs the table to reach `2n + 1`.
    pub fn reduced(&self, n: usize) -> Result<UniPoly> {
        let x = self.raw(2 * n + 1).ok_or_else(|| {
            Error::Domain(format!("Schett table holds X_0..X_{}, need X_{}", self.len() - 1, 2 * n + 1))
        })?;
        reduce_at_modulus(x)
    }
}

/// The `n`-th Schett polynomial.
pub fn schett_raw(n: usize) -> TriPoly {
    SchettTable::up_to(n).raw.pop().expect("table holds X_0..X_n")
}

/// `S_n(m)` defined by `X_{2n+1}(0, k, i k') = i k k' S_n(k^2)`.
pub fn schett_reduced(n: usize) -> Result<UniPoly> {
    SchettTable::up_to(2 * n + 1).reduced(n)
}

/// Substitutes `x = 0, y = k, z = i k'` and strips one factor `i k k'`.
///
/// A surviving monomial `y^b z^c` becomes `i^c k^b k'^c`; both exponents must be odd
/// for the result to be `i k k'` times a polynomial in `m` and `1 - m`.
fn reduce_at_modulus(x: &TriPoly) -> Result<UniPoly> {
    let one_minus_m = UniPoly::from_ints(&[1, -1]);
    let mut out = UniPoly::zero();
    for (&(a, b, c), coeff) in x.terms() {
        if a > 0 {
            continue;
        }
        if b % 2 == 0 || c % 2 == 0 {
            return Err(Error::Consistency(format!(
                "monomial y^{b} z^{c} does not reduce to i k k' times a polynomial in m"
            )));
        }
        let half_b = (b - 1) / 2;
        let half_c = (c - 1) / 2;
        // i^c = i * (-1)^{(c-1)/2}
        let sign = if half_c % 2 == 0 { 1 } else { -1 };
        let term = (&UniPoly::m().pow(half_b) * &one_minus_m.pow(half_c))
            .scale(&Rational::from(Integer::from(coeff * sign)));
        out = &out + &term;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(4, 2).unwrap(), 6);
        assert_eq!(binomial(7, 0).unwrap(), 1);
        assert_eq!(binomial(10, 4).unwrap(), 210);
        assert!(binomial(3, 4).is_err());
        assert!(binomial(3, -1).is_err());
        assert_eq!(factorial(5), 120);
    }

    #[test]
    fn first_schett_polynomials() {
        assert_eq!(schett_raw(0), TriPoly::from_terms(&[(1, 0, 0, 1)]));
        assert_eq!(schett_raw(1), TriPoly::from_terms(&[(0, 1, 1, 1)]));
        assert_eq!(schett_raw(2), TriPoly::from_terms(&[(1, 2, 0, 1), (1, 0, 2, 1)]));
        assert_eq!(
            schett_raw(3),
            TriPoly::from_terms(&[(0, 3, 1, 1), (0, 1, 3, 1), (2, 1, 1, 4)])
        );
    }

    #[test]
    fn fourth_schett_polynomial_follows_recurrence() {
        // x(y^4 + z^4) + 4x^3(y^2 + z^2) + 14xy^2z^2, hand-applied operator on X_3
        let expected = TriPoly::from_terms(&[
            (1, 4, 0, 1),
            (1, 0, 4, 1),
            (3, 2, 0, 4),
            (3, 0, 2, 4),
            (1, 2, 2, 14),
        ]);
        assert_eq!(schett_raw(4), expected);
    }

    #[test]
    fn reduced_schett_polynomials() {
        assert_eq!(schett_reduced(0).unwrap(), UniPoly::one());
        assert_eq!(schett_reduced(1).unwrap(), UniPoly::from_ints(&[-1, 2]));
        assert_eq!(schett_reduced(2).unwrap(), UniPoly::from_ints(&[1, -16, 16]));
    }

    #[test]
    fn reduction_rejects_wrong_shape() {
        let bad = TriPoly::from_terms(&[(0, 2, 1, 1)]);
        assert!(matches!(reduce_at_modulus(&bad), Err(Error::Consistency(_))));
        let table = SchettTable::up_to(3);
        assert!(table.reduced(2).is_err());
    }

    #[test]
    fn homogeneous_of_degree_n_plus_one() {
        let table = SchettTable::up_to(20);
        for n in 0..=20 {
            assert_eq!(table.raw(n).unwrap().homogeneous_degree(), Some(n as u32 + 1), "X_{n}");
        }
    }

    #[test]
    fn reduced_polynomials_are_integral_of_degree_n() {
        let table = SchettTable::up_to(25);
        for n in 0..=12 {
            let s = table.reduced(n).unwrap();
            assert!(s.is_integral());
            assert_eq!(s.degree(), Some(n));
        }
    }
}
