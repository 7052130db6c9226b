//! Jacobi theta functions of real argument, summed from their q-series.
//!
//! Every series stops at the first index whose magnitude factor `q^{n^2}` (or
//! `q^{(n+1/2)^2}`) drops below `10^(-digits-5)`; the remainder is dominated by a
//! geometric series in `q^{2N+1}` and is smaller still.

use super::hpfloat::HPFloat;
use crate::error::{domain, Result};

/// Which of the four Jacobi theta functions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ThetaKind {
    One,
    Two,
    Three,
    Four,
}

impl ThetaKind {
    pub fn from_index(i: u8) -> Result<Self> {
        match i {
            1 => Ok(ThetaKind::One),
            2 => Ok(ThetaKind::Two),
            3 => Ok(ThetaKind::Three),
            4 => Ok(ThetaKind::Four),
            _ => domain(format!("theta index must be 1..4, got {i}")),
        }
    }
}

fn check_nome(q: &HPFloat) -> Result<()> {
    if !q.is_positive() || *q >= HPFloat::one(q.digits()) {
        return domain(format!("nome must lie in (0, 1), got {}", q.to_short_string(12)));
    }
    Ok(())
}

pub(crate) fn series_cutoff(digits: u32) -> HPFloat {
    HPFloat::ten_pow(-(digits as i32) - 5, digits)
}

/// `theta_i(z, q)` for real `z`.
pub fn theta(kind: ThetaKind, z: &HPFloat, q: &HPFloat) -> Result<HPFloat> {
    check_nome(q)?;
    let digits = q.digits().max(z.digits());
    let q = q.with_digits(digits);
    let cutoff = series_cutoff(digits);
    let q2 = q.square();
    match kind {
        ThetaKind::Three | ThetaKind::Four => {
            let alternating = kind == ThetaKind::Four;
            // q^{n^2}, advanced by q^{2n+1}
            let mut power = q.clone();
            let mut step = q.clone();
            let mut sum = HPFloat::zero(digits);
            let mut n: i64 = 1;
            while power >= cutoff {
                let angle = z.mul_int(2 * n);
                let mut term = &power * angle.cos();
                if alternating && n % 2 == 1 {
                    term = -term;
                }
                sum = sum + term;
                step = &step * &q2;
                power = &power * &step;
                n += 1;
            }
            Ok(HPFloat::one(digits) + sum.mul_int(2))
        }
        ThetaKind::One | ThetaKind::Two => {
            let quarter = q.ln().div_int(4).exp();
            // q^{n(n+1)}, advanced by q^{2n+2}
            let mut inner = HPFloat::one(digits);
            let mut step = q2.clone();
            let mut sum = HPFloat::zero(digits);
            let mut n: i64 = 0;
            loop {
                let power = &quarter * &inner;
                if power < cutoff {
                    break;
                }
                let angle = z.mul_int(2 * n + 1);
                let mut term = if kind == ThetaKind::Two {
                    &power * angle.cos()
                } else {
                    &power * angle.sin()
                };
                if kind == ThetaKind::One && n % 2 == 1 {
                    term = -term;
                }
                sum = sum + term;
                inner = &inner * &step;
                step = &step * &q2;
                n += 1;
            }
            Ok(sum.mul_int(2))
        }
    }
}

/// `theta_i(q) = theta_i(0, q)`.
pub fn theta0(kind: ThetaKind, q: &HPFloat) -> Result<HPFloat> {
    theta(kind, &HPFloat::zero(q.digits()), q)
}

/// `theta_3(q)` from the product `prod (1 - q^{2n}) (1 + q^{2n-1})^2`.
pub fn theta3_product(q: &HPFloat) -> Result<HPFloat> {
    check_nome(q)?;
    let digits = q.digits();
    let one = HPFloat::one(digits);
    let cutoff = series_cutoff(digits);
    // remaining log-product is below 2 q^{2n-1} / (1 - q)
    let tail_scale = (&one - q).recip().mul_int(2);
    let q2 = q.square();
    let mut odd = q.clone();
    let mut product = one.clone();
    loop {
        let even = &odd * q;
        let plus = &one + &odd;
        product = product * (&one - &even) * plus.square();
        odd = &odd * &q2;
        if &odd * &tail_scale < cutoff {
            break;
        }
    }
    Ok(product)
}

/// `|theta_3(e^{-pi/c}) - sqrt(c) theta_3(e^{-pi c})|`, zero up to rounding for every `c > 0`.
pub fn jacobi_transform_residual(c: &HPFloat) -> Result<HPFloat> {
    if !c.is_positive() {
        return domain(format!("c must be positive, got {}", c.to_short_string(12)));
    }
    let pi = HPFloat::pi(c.digits());
    let left = theta0(ThetaKind::Three, &(-(&pi / c)).exp())?;
    let right = theta0(ThetaKind::Three, &(-(&pi * c)).exp())? * c.sqrt();
    Ok((left - right).abs())
}
