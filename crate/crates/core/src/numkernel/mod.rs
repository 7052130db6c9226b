//! Arbitrary-precision building blocks: elliptic integrals, nome, theta series,
//! Hermite values and the per-modulus context.

mod context;
mod elliptic;
mod hpfloat;
mod theta;

pub use context::{make_context, ModulusContext, ModulusSpec};
pub use elliptic::{
    agm, complementary, ellip_e, ellip_e_hypergeometric, ellip_k, ellip_k_hypergeometric,
    ellip_k_prime, ellip_ke, gamma_quarter,
};
pub use hpfloat::{bits_for, HPFloat, DEFAULT_DIGITS, MIN_DIGITS};
pub use theta::{jacobi_transform_residual, theta, theta0, theta3_product, ThetaKind};

pub(crate) use theta::series_cutoff;

/// Physicists' Hermite polynomial `H_n(x)` via `H_{n+1} = 2x H_n - 2n H_{n-1}`.
pub fn hermite(n: u32, x: &HPFloat) -> HPFloat {
    let digits = x.digits();
    let mut prev = HPFloat::one(digits);
    if n == 0 {
        return prev;
    }
    let two_x = x.mul_int(2);
    let mut cur = two_x.clone();
    for j in 1..n {
        let next = &two_x * &cur - prev.mul_int(2 * i64::from(j));
        prev = cur;
        cur = next;
    }
    cur
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hermite_low_orders() {
        let x = HPFloat::parse("0.3", 40).unwrap();
        assert_eq!(hermite(0, &x), HPFloat::one(40));
        let h2 = x.square().mul_int(4) - HPFloat::from_i64(2, 40);
        assert!((hermite(2, &x) - h2).abs() < HPFloat::ten_pow(-38, 40));
    }

    #[test]
    fn hermite_generating_function() {
        // sum H_n(x) w^n / n! against exp(2xw - w^2), 40 terms
        let digits = 50;
        let x = HPFloat::parse("0.3", digits).unwrap();
        let w = HPFloat::parse("0.1", digits).unwrap();
        let mut sum = HPFloat::zero(digits);
        let mut weight = HPFloat::one(digits);
        for n in 0..40u32 {
            sum = sum + hermite(n, &x) * &weight;
            weight = (&weight * &w).div_int(i64::from(n) + 1);
        }
        let direct = (x.mul_int(2) * &w - w.square()).exp();
        assert!((sum - direct).abs() < HPFloat::ten_pow(-20, digits));
    }
}
