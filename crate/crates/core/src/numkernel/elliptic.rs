//! Complete elliptic integrals through the arithmetic-geometric mean.
//!
//! `K` and `E` come from one AGM run: `K = pi / (2 M(1, k'))` and
//! `E = K (1 - sum 2^{j-1} c_j^2)` where `c_0 = k` and `c_j = (a_{j-1} - b_{j-1}) / 2`.
//! The hypergeometric series are kept as a slow, independent path for tests.

use super::hpfloat::{bits_for, HPFloat};
use crate::error::{domain, Result};

const MAX_AGM_STEPS: usize = 200;

struct AgmRun {
    mean: HPFloat,
    /// Companion terms c_1, c_2, ... (c_0 is supplied by the caller).
    companions: Vec<HPFloat>,
}

fn agm_run(a: &HPFloat, b: &HPFloat) -> AgmRun {
    let digits = a.digits().max(b.digits());
    // Stop once the relative gap is below half the mantissa; the next step is then
    // accurate to the full mantissa.
    let half_mantissa = HPFloat::from_i64(2, digits).powi(-(bits_for(digits) as i32) / 2);
    let mut a = a.with_digits(digits);
    let mut b = b.with_digits(digits);
    let mut companions = Vec::new();
    let mut last_gap: Option<HPFloat> = None;
    for _ in 0..MAX_AGM_STEPS {
        let gap = (&a - &b).abs();
        let close = gap <= &half_mantissa * &a;
        let stalled = matches!(&last_gap, Some(prev) if gap >= *prev);
        let next_a = (&a + &b).div_int(2);
        let next_b = (&a * &b).sqrt();
        companions.push((&a - &b).div_int(2));
        a = next_a;
        b = next_b;
        if close || stalled || gap.is_zero() {
            break;
        }
        last_gap = Some(gap);
    }
    AgmRun {
        mean: (&a + &b).div_int(2),
        companions,
    }
}

/// Arithmetic-geometric mean of two positive reals.
pub fn agm(a: &HPFloat, b: &HPFloat) -> Result<HPFloat> {
    if !a.is_positive() || !b.is_positive() {
        return domain(format!(
            "agm requires positive arguments, got {} and {}",
            a.to_short_string(12),
            b.to_short_string(12)
        ));
    }
    Ok(agm_run(a, b).mean)
}

fn check_modulus(k: &HPFloat, what: &str) -> Result<()> {
    if !k.is_positive() || *k >= HPFloat::one(k.digits()) {
        return domain(format!(
            "{what} requires a modulus in (0, 1), got {}",
            k.to_short_string(12)
        ));
    }
    Ok(())
}

/// `sqrt(1 - k^2)`.
pub fn complementary(k: &HPFloat) -> HPFloat {
    (HPFloat::one(k.digits()) - k.square()).sqrt()
}

/// Complete elliptic integral of the first kind, `K(k)`.
pub fn ellip_k(k: &HPFloat) -> Result<HPFloat> {
    check_modulus(k, "K(k)")?;
    let kp = complementary(k);
    let mean = agm(&HPFloat::one(k.digits()), &kp)?;
    Ok(HPFloat::pi(k.digits()) / mean.mul_int(2))
}

/// `K'(k) = K(k')`.
pub fn ellip_k_prime(k: &HPFloat) -> Result<HPFloat> {
    check_modulus(k, "K'(k)")?;
    ellip_k(&complementary(k))
}

/// Both complete integrals from a single AGM run: `(K(k), E(k))`.
pub fn ellip_ke(k: &HPFloat) -> Result<(HPFloat, HPFloat)> {
    check_modulus(k, "E(k)")?;
    let digits = k.digits();
    let run = agm_run(&HPFloat::one(digits), &complementary(k));
    let big_k = HPFloat::pi(digits) / run.mean.mul_int(2);
    // 2^{j-1} c_j^2 summed from j = 0 with c_0 = k.
    let mut sum = k.square().div_int(2);
    let mut weight = HPFloat::one(digits);
    for c in &run.companions {
        sum = sum + &weight * c.square();
        weight = weight.mul_int(2);
    }
    let big_e = &big_k * (HPFloat::one(digits) - sum);
    Ok((big_k, big_e))
}

/// Complete elliptic integral of the second kind, `E(k)`.
pub fn ellip_e(k: &HPFloat) -> Result<HPFloat> {
    Ok(ellip_ke(k)?.1)
}

/// `K(k) = (pi/2) 2F1(1/2, 1/2; 1; k^2)` summed term by term.
///
/// Linear convergence in `k^2`; only meant as an independent check of the AGM path.
pub fn ellip_k_hypergeometric(k: &HPFloat) -> Result<HPFloat> {
    check_modulus(k, "K(k)")?;
    hypergeometric_half(k, 1)
}

/// `E(k) = (pi/2) 2F1(1/2, -1/2; 1; k^2)` summed term by term.
pub fn ellip_e_hypergeometric(k: &HPFloat) -> Result<HPFloat> {
    check_modulus(k, "E(k)")?;
    hypergeometric_half(k, -1)
}

// (pi/2) sum_n (1/2)_n (b/2)_n / (n!)^2 m^n for b = +1 or -1.
fn hypergeometric_half(k: &HPFloat, b: i64) -> Result<HPFloat> {
    let digits = k.digits();
    let m = k.square();
    let cutoff = HPFloat::ten_pow(-(digits as i32) - 5, digits);
    let mut term = HPFloat::one(digits);
    let mut sum = HPFloat::one(digits);
    let mut n: i64 = 0;
    loop {
        // ratio t_{n+1}/t_n = (n + 1/2)(n + b/2) / (n+1)^2 * m
        term = term.mul_int(2 * n + 1).mul_int(2 * n + b).div_int(4 * (n + 1) * (n + 1)) * &m;
        sum = sum + &term;
        n += 1;
        if term.abs() < cutoff && n > 2 {
            break;
        }
        if n > 2_000_000 {
            return domain("hypergeometric series did not converge; modulus too close to 1");
        }
    }
    Ok(HPFloat::pi(digits).div_int(2) * sum)
}

/// `Gamma(1/4)` from the lemniscatic integral `K(1/sqrt 2) = Gamma(1/4)^2 / (4 sqrt(pi))`.
pub fn gamma_quarter(digits: u32) -> HPFloat {
    let k = HPFloat::one(digits).div_int(2).sqrt();
    let big_k = ellip_k(&k).expect("1/sqrt(2) lies in (0, 1)");
    (HPFloat::pi(digits).sqrt().mul_int(4) * big_k).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol(digits: u32, slack: i32) -> HPFloat {
        HPFloat::ten_pow(slack - digits as i32, digits)
    }

    #[test]
    fn agm_fixed_points() {
        let one = HPFloat::one(50);
        assert!((agm(&one, &one).unwrap() - &one).abs() < tol(50, 0));
        let x = HPFloat::parse("2.5", 50).unwrap();
        assert!((agm(&x, &x).unwrap() - &x).abs() < tol(50, 0));
    }

    #[test]
    fn agm_rejects_non_positive() {
        let one = HPFloat::one(30);
        assert!(agm(&one, &HPFloat::zero(30)).is_err());
        assert!(agm(&HPFloat::from_i64(-1, 30), &one).is_err());
    }

    #[test]
    fn modulus_domain_is_open_interval() {
        for bad in ["0", "1", "1.5", "-0.2"] {
            let k = HPFloat::parse(bad, 30).unwrap();
            assert!(ellip_k(&k).is_err(), "{bad}");
            assert!(ellip_e(&k).is_err(), "{bad}");
        }
    }

    #[test]
    fn agm_matches_hypergeometric_series() {
        for text in ["0.1", "0.3", "0.6", "0.8"] {
            let k = HPFloat::parse(text, 50).unwrap();
            let (kk, ee) = ellip_ke(&k).unwrap();
            assert!((&kk - ellip_k_hypergeometric(&k).unwrap()).abs() < tol(50, 4), "K({text})");
            assert!((&ee - ellip_e_hypergeometric(&k).unwrap()).abs() < tol(50, 4), "E({text})");
        }
    }

    #[test]
    fn k_prime_is_k_of_complement() {
        let k = HPFloat::parse("0.3", 50).unwrap();
        let direct = ellip_k(&complementary(&k)).unwrap();
        assert!((ellip_k_prime(&k).unwrap() - direct).abs() < tol(50, 0));
    }

    #[test]
    fn e_lies_between_one_and_half_pi() {
        let k = HPFloat::parse("0.5", 40).unwrap();
        let e = ellip_e(&k).unwrap();
        assert!(e > HPFloat::one(40));
        assert!(e < HPFloat::pi(40).div_int(2));
    }

    #[test]
    fn legendre_relation_at_037() {
        let digits = 50;
        let k = HPFloat::parse("0.37", digits).unwrap();
        let (kk, ee) = ellip_ke(&k).unwrap();
        let (kp, ep) = ellip_ke(&complementary(&k)).unwrap();
        let lhs = &kk * &ep + &kp * &ee - &kk * &kp;
        assert!((lhs - HPFloat::pi(digits).div_int(2)).abs() < tol(digits, 5));
    }

    #[test]
    fn gamma_quarter_is_stable_under_precision_doubling() {
        let g30 = gamma_quarter(30);
        let g60 = gamma_quarter(60);
        assert!((g30.with_digits(60) - &g60).abs() < tol(30, 6));
        // Gamma(1/4) = 3.6256099082219083119...
        let known = HPFloat::parse("3.62560990822190831193068515586767200299516768288006", 60).unwrap();
        assert!((g60 - known).abs() < HPFloat::ten_pow(-48, 60));
    }
}
