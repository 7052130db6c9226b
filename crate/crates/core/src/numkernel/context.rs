use serde::Serialize;

use super::elliptic::{complementary, ellip_ke};
use super::hpfloat::HPFloat;
use super::theta::{theta0, ThetaKind};
use crate::error::{domain, Result};

/// How a modulus was specified: a decimal literal, or `k = 1/sqrt(p)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum ModulusSpec {
    Decimal(String),
    InverseSqrt(u32),
}

impl ModulusSpec {
    pub fn lemniscatic() -> Self {
        ModulusSpec::InverseSqrt(2)
    }

    pub fn value(&self, digits: u32) -> Result<HPFloat> {
        match self {
            ModulusSpec::Decimal(text) => HPFloat::parse(text, digits),
            ModulusSpec::InverseSqrt(0) => domain("k = 1/sqrt(p) needs p > 0"),
            ModulusSpec::InverseSqrt(p) => Ok(HPFloat::from_i64(i64::from(*p), digits).sqrt().recip()),
        }
    }

    /// Label used in reports: `0.3` or `1/sqrt(2)`.
    pub fn label(&self) -> String {
        match self {
            ModulusSpec::Decimal(text) => text.clone(),
            ModulusSpec::InverseSqrt(p) => format!("1/sqrt({p})"),
        }
    }
}

/// Every numeric quantity attached to one elliptic modulus `k`.
#[derive(Clone, Debug)]
pub struct ModulusContext {
    pub k: HPFloat,
    pub kprime: HPFloat,
    pub big_k: HPFloat,
    pub big_e: HPFloat,
    pub big_k_prime: HPFloat,
    pub big_e_prime: HPFloat,
    /// Nome `exp(-pi K'/K)`.
    pub q: HPFloat,
    /// `K'/K`.
    pub c: HPFloat,
    /// `(2/pi) K = theta_3(q)^2`.
    pub z: HPFloat,
    /// Variance `(K^2/pi^2) (E/K - k'^2)` of the discrete normal law.
    pub sigma2: HPFloat,
}

impl ModulusContext {
    pub fn new(k: &HPFloat) -> Result<Self> {
        let one = HPFloat::one(k.digits());
        if !k.is_positive() || *k >= one {
            return domain(format!(
                "modulus k must lie in (0, 1), got {}",
                k.to_short_string(12)
            ));
        }
        let digits = k.digits();
        let kprime = complementary(k);
        let (big_k, big_e) = ellip_ke(k)?;
        let (big_k_prime, big_e_prime) = ellip_ke(&kprime)?;
        let pi = HPFloat::pi(digits);
        let c = &big_k_prime / &big_k;
        let q = (-(&pi * &c)).exp();
        let z = big_k.mul_int(2) / &pi;
        let sigma2 = big_k.square() / pi.square() * (&big_e / &big_k - kprime.square());
        Ok(ModulusContext {
            k: k.clone(),
            kprime,
            big_k,
            big_e,
            big_k_prime,
            big_e_prime,
            q,
            c,
            z,
            sigma2,
        })
    }

    pub fn from_spec(spec: &ModulusSpec, digits: u32) -> Result<Self> {
        Self::new(&spec.value(digits)?)
    }

    /// The self-dual modulus `k = 1/sqrt(2)`.
    pub fn lemniscatic(digits: u32) -> Self {
        Self::from_spec(&ModulusSpec::lemniscatic(), digits).expect("1/sqrt(2) is a valid modulus")
    }

    pub fn digits(&self) -> u32 {
        self.k.digits()
    }

    /// `m = k^2`.
    pub fn m(&self) -> HPFloat {
        self.k.square()
    }

    /// Context for the complementary modulus `k'`. The elliptic integrals are
    /// swapped rather than recomputed.
    pub fn complementary(&self) -> Self {
        let digits = self.digits();
        let pi = HPFloat::pi(digits);
        let c = &self.big_k / &self.big_k_prime;
        let q = (-(&pi * &c)).exp();
        let z = self.big_k_prime.mul_int(2) / &pi;
        let sigma2 = self.big_k_prime.square() / pi.square()
            * (&self.big_e_prime / &self.big_k_prime - self.k.square());
        ModulusContext {
            k: self.kprime.clone(),
            kprime: self.k.clone(),
            big_k: self.big_k_prime.clone(),
            big_e: self.big_e_prime.clone(),
            big_k_prime: self.big_k.clone(),
            big_e_prime: self.big_e.clone(),
            q,
            c,
            z,
            sigma2,
        }
    }

    /// `|K E' + K' E - K K' - pi/2|`.
    pub fn legendre_residual(&self) -> HPFloat {
        let lhs = &self.big_k * &self.big_e_prime + &self.big_k_prime * &self.big_e
            - &self.big_k * &self.big_k_prime;
        (lhs - HPFloat::pi(self.digits()).div_int(2)).abs()
    }

    /// `|theta_3(q)^2 - z|` with theta_3 recomputed from its series.
    pub fn theta_residual(&self) -> Result<HPFloat> {
        Ok((theta0(ThetaKind::Three, &self.q)?.square() - &self.z).abs())
    }

    /// Largest deviation in the three relations `theta_2^2 = z k`, `theta_3^2 = z`,
    /// `theta_4^2 = z k'`.
    pub fn theta_square_residual(&self) -> Result<HPFloat> {
        let t2 = theta0(ThetaKind::Two, &self.q)?.square();
        let t3 = theta0(ThetaKind::Three, &self.q)?.square();
        let t4 = theta0(ThetaKind::Four, &self.q)?.square();
        let r2 = (t2 - &self.z * &self.k).abs();
        let r3 = (t3 - &self.z).abs();
        let r4 = (t4 - &self.z * &self.kprime).abs();
        Ok(r2.max(r3).max(r4))
    }
}

/// Convenience wrapper matching the free-function style of the rest of the kernel.
pub fn make_context(k: &HPFloat) -> Result<ModulusContext> {
    ModulusContext::new(k)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol(digits: u32) -> HPFloat {
        HPFloat::ten_pow(5 - digits as i32, digits)
    }

    #[test]
    fn lemniscatic_variance_and_nome() {
        let digits = 50;
        let ctx = ModulusContext::lemniscatic(digits);
        let pi = HPFloat::pi(digits);
        assert!((&ctx.sigma2 - pi.mul_int(4).recip()).abs() < tol(digits));
        assert!((&ctx.c - HPFloat::one(digits)).abs() < tol(digits));
        assert!((&ctx.q - (-pi).exp()).abs() < tol(digits));
    }

    #[test]
    fn invariants_over_grid() {
        let digits = 50;
        for spec in [
            ModulusSpec::Decimal("0.1".into()),
            ModulusSpec::Decimal("0.3".into()),
            ModulusSpec::InverseSqrt(2),
            ModulusSpec::Decimal("0.9".into()),
        ] {
            let ctx = ModulusContext::from_spec(&spec, digits).unwrap();
            let unit = ctx.k.square() + ctx.kprime.square();
            assert!((unit - HPFloat::one(digits)).abs() < tol(digits));
            assert!(ctx.q.is_positive() && ctx.q < HPFloat::one(digits));
            assert!(ctx.legendre_residual() < tol(digits), "{}", spec.label());
            assert!(ctx.theta_residual().unwrap() < tol(digits));
            assert!(ctx.theta_square_residual().unwrap() < tol(digits));
        }
    }

    #[test]
    fn complementary_context_matches_fresh_one() {
        let digits = 40;
        let ctx = ModulusContext::new(&HPFloat::parse("0.3", digits).unwrap()).unwrap();
        let swapped = ctx.complementary();
        let fresh = ModulusContext::new(&ctx.kprime).unwrap();
        assert!((&swapped.sigma2 - &fresh.sigma2).abs() < tol(digits));
        assert!((&swapped.q - &fresh.q).abs() < tol(digits));
    }

    #[test]
    fn out_of_domain_modulus() {
        assert!(ModulusContext::from_spec(&ModulusSpec::Decimal("1.5".into()), 30).is_err());
        assert!(ModulusContext::from_spec(&ModulusSpec::Decimal("0".into()), 30).is_err());
        assert!(ModulusContext::from_spec(&ModulusSpec::InverseSqrt(1), 30).is_err());
        assert!(ModulusContext::from_spec(&ModulusSpec::InverseSqrt(0), 30).is_err());
    }
}
