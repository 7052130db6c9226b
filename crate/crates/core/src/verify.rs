//! Numeric verification: exact polynomials against theta-series ground truth.
//!
//! Residuals are relative to `max(1, |rhs|)`; the default tolerance is
//! `10^(8 - digits)`.

use rayon::prelude::*;
use rug::Integer;
use serde::Serialize;

use crate::cumulants::{cumulant_symmetry_residual, lambert_schett_residual, relative_residual, CumulantTable};
use crate::error::{domain, Result};
use crate::exactalg::{binomial, factorial};
use crate::moments::{bell_moments, d_sequence};
use crate::numkernel::{
    gamma_quarter, hermite, jacobi_transform_residual, series_cutoff, theta0, HPFloat, ModulusContext,
    ModulusSpec, ThetaKind, MIN_DIGITS,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Identity {
    /// Hermite-weighted theta sum against `R_{2n}`.
    Theorem1,
    /// Odd Hermite index: the weighted sum vanishes.
    Theorem1Odd,
    /// Finite moment formula through `R_{2j}`.
    Theorem3,
    /// Lemniscatic moments through `d(j)` and `Gamma(1/4)`.
    Romik,
    /// `sigma^2(k)/K^2 + sigma^2(k')/K'^2 = 1/(2 pi K K')`.
    VarianceSymmetry,
    /// Lambert series against the exact cumulant polynomial.
    LambertSchett,
    /// `theta_3(e^{-pi/c}) = sqrt(c) theta_3(e^{-pi c})` at `c = K'/K`.
    Jacobi,
    /// `E K' + E' K - K K' = pi/2`.
    Legendre,
    /// `kappa_{2n}(k') = (-1)^n (K'/K)^{2n} kappa_{2n}(k)`.
    CumulantSymmetry,
    /// Moments at `k'` from moments at `k`, `delta^2 = sigma^2(k') + (K'/K)^2 sigma^2(k)`.
    MomentRelation,
    /// Same relation with `delta^2 = sigma^2(k') - sigma^2(k)`; expected to fail.
    MomentRelationDifference,
    /// Lemniscatic moments with `Omega = Gamma(1/4)^8/(32 pi^8)`; expected to fail.
    RomikPi8,
}

impl Identity {
    pub fn name(self) -> &'static str {
        match self {
            Identity::Theorem1 => "theorem1",
            Identity::Theorem1Odd => "theorem1_odd",
            Identity::Theorem3 => "theorem3",
            Identity::Romik => "romik",
            Identity::VarianceSymmetry => "variance_symmetry",
            Identity::LambertSchett => "lambert_schett",
            Identity::Jacobi => "jacobi",
            Identity::Legendre => "legendre",
            Identity::CumulantSymmetry => "cumulant_symmetry",
            Identity::MomentRelation => "moment_relation",
            Identity::MomentRelationDifference => "moment_relation_difference",
            Identity::RomikPi8 => "romik_pi8",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub identity: Identity,
    pub n: u32,
    pub k: String,
    pub digits: u32,
    pub lhs: HPFloat,
    pub rhs: HPFloat,
    pub residual: HPFloat,
    pub tolerance: HPFloat,
    pub passed: bool,
}

pub fn default_tolerance(digits: u32) -> HPFloat {
    HPFloat::ten_pow(8 - digits as i32, digits)
}

fn report(identity: Identity, n: u32, k: String, lhs: HPFloat, rhs: HPFloat) -> VerificationReport {
    let residual = relative_residual(&lhs, &rhs);
    report_with_residual(identity, n, k, lhs, rhs, residual)
}

fn report_with_residual(
    identity: Identity,
    n: u32,
    k: String,
    lhs: HPFloat,
    rhs: HPFloat,
    residual: HPFloat,
) -> VerificationReport {
    let digits = lhs.digits().max(rhs.digits());
    let tolerance = default_tolerance(digits);
    VerificationReport {
        identity,
        n,
        k,
        digits,
        passed: residual < tolerance,
        lhs,
        rhs,
        residual,
        tolerance,
    }
}

fn label(ctx: &ModulusContext) -> String {
    ctx.k.to_short_string(20)
}

/// Sums `f(p) q^{p^2}` over `|p| <= P` in index order, with `P` the first point past
/// the peak of `bound(p) q^{p^2}` where it drops below the series cutoff.
fn theta_weighted_sum(
    ctx: &ModulusContext,
    f: impl Fn(i64) -> HPFloat,
    bound: impl Fn(i64) -> HPFloat,
) -> HPFloat {
    let digits = ctx.digits();
    let cutoff = series_cutoff(digits);
    let ln_q = ctx.q.ln();
    let weight = |p: i64| ln_q.mul_int(p * p).exp();
    let mut extent: i64 = 0;
    let mut prev: Option<HPFloat> = None;
    loop {
        extent += 1;
        let env = bound(extent) * weight(extent);
        let falling = prev.as_ref().is_some_and(|p| env <= *p);
        if falling && env < cutoff {
            break;
        }
        prev = Some(env);
    }
    let mut sum = HPFloat::zero(digits);
    for p in -extent..=extent {
        sum = sum + f(p) * weight(p);
    }
    sum
}

/// `(1/theta_3(q)) sum_p p^{2n} q^{p^2}`.
pub fn series_moment(n: u32, ctx: &ModulusContext) -> Result<HPFloat> {
    let digits = ctx.digits();
    let power = |p: i64| HPFloat::from_i64(p, digits).powi(2 * n as i32);
    let sum = theta_weighted_sum(ctx, power, power);
    Ok(sum / theta0(ThetaKind::Three, &ctx.q)?)
}

/// `(1/theta_3) sum_p q^{p^2} H_j(p / (sigma sqrt 2))`.
fn hermite_series(j: u32, ctx: &ModulusContext) -> Result<HPFloat> {
    let digits = ctx.digits();
    let scale = (ctx.sigma2.mul_int(2)).sqrt().recip();
    let arg = |p: i64| scale.mul_int(p);
    // |H_j(x)| <= (2|x| + j)^j
    let bound = |p: i64| (arg(p).abs().mul_int(2) + HPFloat::from_i64(i64::from(j), digits)).powi(j as i32);
    let sum = theta_weighted_sum(ctx, |p| hermite(j, &arg(p)), bound);
    Ok(sum / theta0(ThetaKind::Three, &ctx.q)?)
}

/// `(1/theta_3) sum_p q^{p^2} H_{2n}(p/(sigma sqrt 2)) = (z^2/(2 sigma^2))^n R_{2n}(m)`.
pub fn verify_theorem1(n: u32, ctx: &ModulusContext) -> Result<VerificationReport> {
    let r = bell_moments(n as usize)?.swap_remove(n as usize).r;
    let lhs = hermite_series(2 * n, ctx)?;
    let rhs = (ctx.z.square() / ctx.sigma2.mul_int(2)).powi(n as i32) * r.evaluate_float(&ctx.m());
    Ok(report(Identity::Theorem1, n, label(ctx), lhs, rhs))
}

/// The odd-index companion of Theorem 1: the `H_{2n+1}` sum is zero.
pub fn verify_theorem1_odd(n: u32, ctx: &ModulusContext) -> Result<VerificationReport> {
    let lhs = hermite_series(2 * n + 1, ctx)?;
    let rhs = HPFloat::zero(ctx.digits());
    Ok(report(Identity::Theorem1Odd, n, label(ctx), lhs, rhs))
}

/// `mu_{2n} = sum_j binom(2n, 2j) ((2n-2j)!/(n-j)!) (z/2)^{2j} R_{2j} (sigma^2/2)^{n-j}`.
pub fn theorem3_moment(n: u32, ctx: &ModulusContext) -> Result<HPFloat> {
    let digits = ctx.digits();
    let moments = bell_moments(n as usize)?;
    let half_z2 = ctx.z.div_int(2).square();
    let half_s2 = ctx.sigma2.div_int(2);
    let m = ctx.m();
    let mut sum = HPFloat::zero(digits);
    for j in 0..=n {
        let weight = binomial(2 * i64::from(n), 2 * i64::from(j))? * factorial(2 * (n - j)) / factorial(n - j);
        let term = half_z2.powi(j as i32) * moments[j as usize].r.evaluate_float(&m) * half_s2.powi((n - j) as i32);
        sum = sum + term.mul_integer(&weight);
    }
    Ok(sum)
}

pub fn verify_theorem3(n: u32, ctx: &ModulusContext) -> Result<VerificationReport> {
    let lhs = series_moment(n, ctx)?;
    let rhs = theorem3_moment(n, ctx)?;
    Ok(report(Identity::Theorem3, n, label(ctx), lhs, rhs))
}

/// `Omega = 8 pi^2 (z/2)^4 = Gamma(1/4)^8 / (32 pi^4)` at `k = 1/sqrt 2`.
pub fn romik_omega(digits: u32) -> HPFloat {
    gamma_quarter(digits).powi(8) / HPFloat::pi(digits).powi(4).mul_int(32)
}

/// `Gamma(1/4)^8 / (32 pi^8)`, the constant as often quoted; off by `pi^4`.
pub fn romik_omega_pi8(digits: u32) -> HPFloat {
    gamma_quarter(digits).powi(8) / HPFloat::pi(digits).powi(8).mul_int(32)
}

/// Three routes to `Phi`: `4 pi^2 kappa_4`, `Gamma(1/4)^8/(2^7 pi^4)` and
/// `pi^2 theta_3(e^{-pi})^8 / 8`, all at `k = 1/sqrt 2`.
pub fn phi_routes(digits: u32) -> Result<[HPFloat; 3]> {
    let ctx = ModulusContext::lemniscatic(digits);
    let pi = HPFloat::pi(digits);
    let from_kappa = pi.square().mul_int(4) * crate::cumulants::cumulant_lambert(2, &ctx)?;
    let from_gamma = gamma_quarter(digits).powi(8) / pi.powi(4).mul_int(128);
    let from_theta = pi.square() * theta0(ThetaKind::Three, &ctx.q)?.powi(8) / HPFloat::from_i64(8, digits);
    Ok([from_kappa, from_gamma, from_theta])
}

/// `(1/theta_3(e^{-pi})) sum p^{2n} e^{-pi p^2}
///  = (4 pi)^{-n} sum_{j <= n/2} (2n)! / (2^{n-2j} (4j)! (n-2j)!) d(j) Omega^j`.
pub fn verify_romik11(n: u32, digits: u32) -> Result<VerificationReport> {
    romik_with_omega(n, digits, romik_omega(digits))
}

/// The lemniscatic moment formula with a caller-supplied `Omega`.
pub fn romik_with_omega(n: u32, digits: u32, omega: HPFloat) -> Result<VerificationReport> {
    let ctx = ModulusContext::lemniscatic(digits);
    let lhs = series_moment(n, &ctx)?;
    let mut d = vec![Integer::from(1)];
    if n >= 2 {
        d.extend(d_sequence(n as usize / 2)?);
    }
    let mut sum = HPFloat::zero(digits);
    for j in 0..=n / 2 {
        let denom = (Integer::from(1) << (n - 2 * j)) * factorial(4 * j) * factorial(n - 2 * j);
        let weight = rug::Rational::from((factorial(2 * n) * &d[j as usize], denom));
        sum = sum + omega.powi(j as i32).mul_rational(&weight);
    }
    let rhs = sum / HPFloat::pi(digits).mul_int(4).powi(n as i32);
    Ok(report(Identity::Romik, n, ModulusSpec::lemniscatic().label(), lhs, rhs))
}

pub fn verify_variance_symmetry(k: &HPFloat) -> Result<VerificationReport> {
    let ctx = ModulusContext::new(k)?;
    Ok(variance_symmetry(&ctx))
}

fn variance_symmetry(ctx: &ModulusContext) -> VerificationReport {
    let dual = ctx.complementary();
    let lhs = &ctx.sigma2 / ctx.big_k.square() + &dual.sigma2 / dual.big_k.square();
    let rhs = (HPFloat::pi(ctx.digits()).mul_int(2) * &ctx.big_k * &ctx.big_k_prime).recip();
    report(Identity::VarianceSymmetry, 1, label(ctx), lhs, rhs)
}

/// How `delta^2` is formed in the `k -> k'` moment relation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DeltaForm {
    /// `sigma^2(k') + (K'/K)^2 sigma^2(k)`, equal to `K'/(2 pi K)`.
    Sum,
    /// `sigma^2(k') - sigma^2(k)`.
    Difference,
}

/// `mu_{2n}(k') = sum_j binom(2n, 2j) (-1)^j (K'/K)^{2j} (delta/sqrt 2)^{2n-2j} ((2n-2j)!/(n-j)!) mu_{2j}(k)`,
/// with both sides' moments from the theta series.
pub fn verify_moment_relation(n: u32, ctx: &ModulusContext, form: DeltaForm) -> Result<VerificationReport> {
    let dual = ctx.complementary();
    let c2 = ctx.c.square();
    let delta2 = match form {
        DeltaForm::Sum => &dual.sigma2 + &c2 * &ctx.sigma2,
        DeltaForm::Difference => &dual.sigma2 - &ctx.sigma2,
    };
    let half_delta2 = delta2.div_int(2);
    let lhs = series_moment(n, &dual)?;
    let mut rhs = HPFloat::zero(ctx.digits());
    for j in 0..=n {
        let weight = binomial(2 * i64::from(n), 2 * i64::from(j))? * factorial(2 * (n - j)) / factorial(n - j);
        let mut term = c2.powi(j as i32) * half_delta2.powi((n - j) as i32) * series_moment(j, ctx)?;
        if j % 2 == 1 {
            term = -term;
        }
        rhs = rhs + term.mul_integer(&weight);
    }
    let identity = match form {
        DeltaForm::Sum => Identity::MomentRelation,
        DeltaForm::Difference => Identity::MomentRelationDifference,
    };
    Ok(report(identity, n, label(ctx), lhs, rhs))
}

fn lambert_schett(n: u32, ctx: &ModulusContext) -> Result<VerificationReport> {
    let table = CumulantTable::up_to(n as usize)?;
    let exact = table.cumulant(n as usize)?.evaluate(ctx);
    let lambert = crate::cumulants::cumulant_lambert(n, ctx)?;
    let residual = lambert_schett_residual(&table, n as usize, ctx)?;
    Ok(report_with_residual(Identity::LambertSchett, n, label(ctx), lambert, exact, residual))
}

fn jacobi(ctx: &ModulusContext) -> Result<VerificationReport> {
    let digits = ctx.digits();
    let residual = jacobi_transform_residual(&ctx.c)?;
    let pi = HPFloat::pi(digits);
    let lhs = theta0(ThetaKind::Three, &(-(&pi / &ctx.c)).exp())?;
    let rhs = theta0(ThetaKind::Three, &(-(&pi * &ctx.c)).exp())? * ctx.c.sqrt();
    Ok(report_with_residual(Identity::Jacobi, 0, label(ctx), lhs, rhs, residual))
}

fn legendre(ctx: &ModulusContext) -> VerificationReport {
    let lhs = &ctx.big_e * &ctx.big_k_prime + &ctx.big_e_prime * &ctx.big_k - &ctx.big_k * &ctx.big_k_prime;
    let rhs = HPFloat::pi(ctx.digits()).div_int(2);
    report(Identity::Legendre, 0, label(ctx), lhs, rhs)
}

fn cumulant_symmetry(n: u32, ctx: &ModulusContext) -> Result<VerificationReport> {
    let residual = cumulant_symmetry_residual(n, &ctx.k)?;
    let dual = ctx.complementary();
    let lhs = crate::cumulants::cumulant_lambert(n, &dual)?;
    let mut rhs = ctx.c.powi(2 * n as i32) * crate::cumulants::cumulant_lambert(n, ctx)?;
    if n % 2 == 1 {
        rhs = -rhs;
    }
    Ok(report_with_residual(Identity::CumulantSymmetry, n, label(ctx), lhs, rhs, residual))
}

/// One grid point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cell {
    pub identity: Identity,
    pub n: u32,
    pub modulus: ModulusSpec,
}

#[derive(Clone, Debug, Serialize)]
#[serde(untagged)]
pub enum CellOutcome {
    Report(VerificationReport),
    Error {
        identity: Identity,
        n: u32,
        k: String,
        error: String,
    },
}

impl CellOutcome {
    pub fn passed(&self) -> bool {
        matches!(self, CellOutcome::Report(r) if r.passed)
    }

    pub fn report(&self) -> Option<&VerificationReport> {
        match self {
            CellOutcome::Report(r) => Some(r),
            CellOutcome::Error { .. } => None,
        }
    }
}

/// Named groups of identities.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    All,
    Theorem1,
    Theorem3,
    Romik,
    Symmetry,
    /// Forms known to be wrong; every cell with a nonzero correction fails.
    Printed,
}

impl Suite {
    fn identities(self) -> &'static [Identity] {
        use Identity::*;
        match self {
            Suite::All => &[
                Theorem1,
                Theorem1Odd,
                Theorem3,
                Romik,
                LambertSchett,
                Jacobi,
                Legendre,
                VarianceSymmetry,
                CumulantSymmetry,
                MomentRelation,
            ],
            Suite::Theorem1 => &[Theorem1, Theorem1Odd],
            Suite::Theorem3 => &[Theorem3],
            Suite::Romik => &[Romik],
            Suite::Symmetry => &[VarianceSymmetry, CumulantSymmetry, MomentRelation],
            Suite::Printed => &[MomentRelationDifference, RomikPi8],
        }
    }
}

/// `k` in `{0.3, 1/sqrt 2, 0.9}`.
pub fn default_moduli() -> Vec<ModulusSpec> {
    vec![
        ModulusSpec::Decimal("0.3".into()),
        ModulusSpec::lemniscatic(),
        ModulusSpec::Decimal("0.9".into()),
    ]
}

pub const DEFAULT_NMAX: u32 = 8;

/// Orders each identity is checked at, up to `nmax`.
fn orders(identity: Identity, nmax: u32) -> Vec<u32> {
    match identity {
        Identity::Jacobi | Identity::Legendre => vec![0],
        Identity::VarianceSymmetry => vec![1],
        Identity::LambertSchett | Identity::CumulantSymmetry => (2..=nmax).collect(),
        Identity::MomentRelation | Identity::MomentRelationDifference => (1..=nmax.min(5)).collect(),
        Identity::RomikPi8 => (2..=nmax).collect(),
        _ => (0..=nmax).collect(),
    }
}

/// Grid in deterministic order: identity, then modulus, then order. Romik cells are
/// modulus-free and appear once.
pub fn build_grid(suite: Suite, nmax: u32, moduli: &[ModulusSpec]) -> Vec<Cell> {
    let mut grid = Vec::new();
    for &identity in suite.identities() {
        if matches!(identity, Identity::Romik | Identity::RomikPi8) {
            for n in orders(identity, nmax) {
                grid.push(Cell {
                    identity,
                    n,
                    modulus: ModulusSpec::lemniscatic(),
                });
            }
            continue;
        }
        for modulus in moduli {
            for n in orders(identity, nmax) {
                grid.push(Cell {
                    identity,
                    n,
                    modulus: modulus.clone(),
                });
            }
        }
    }
    grid
}

pub fn run_cell(cell: &Cell, digits: u32) -> Result<VerificationReport> {
    let mut report = run_cell_inner(cell, digits)?;
    report.k = cell.modulus.label();
    Ok(report)
}

fn run_cell_inner(cell: &Cell, digits: u32) -> Result<VerificationReport> {
    if digits < MIN_DIGITS {
        return domain(format!("precision must be at least {MIN_DIGITS} digits, got {digits}"));
    }
    match cell.identity {
        Identity::Romik => return verify_romik11(cell.n, digits),
        Identity::RomikPi8 => {
            let mut r = romik_with_omega(cell.n, digits, romik_omega_pi8(digits))?;
            r.identity = Identity::RomikPi8;
            return Ok(r);
        }
        _ => {}
    }
    let ctx = ModulusContext::from_spec(&cell.modulus, digits)?;
    match cell.identity {
        Identity::Theorem1 => verify_theorem1(cell.n, &ctx),
        Identity::Theorem1Odd => verify_theorem1_odd(cell.n, &ctx),
        Identity::Theorem3 => verify_theorem3(cell.n, &ctx),
        Identity::Romik | Identity::RomikPi8 => unreachable!("handled above"),
        Identity::VarianceSymmetry => Ok(variance_symmetry(&ctx)),
        Identity::LambertSchett => lambert_schett(cell.n, &ctx),
        Identity::Jacobi => jacobi(&ctx),
        Identity::Legendre => Ok(legendre(&ctx)),
        Identity::CumulantSymmetry => cumulant_symmetry(cell.n, &ctx),
        Identity::MomentRelation => verify_moment_relation(cell.n, &ctx, DeltaForm::Sum),
        Identity::MomentRelationDifference => verify_moment_relation(cell.n, &ctx, DeltaForm::Difference),
    }
}

/// Runs every cell (in parallel); outcomes come back in grid order and errors are
/// recorded per cell.
pub fn run_suite(grid: &[Cell], digits: u32) -> Vec<CellOutcome> {
    grid.par_iter()
        .map(|cell| match run_cell(cell, digits) {
            Ok(r) => CellOutcome::Report(r),
            Err(e) => CellOutcome::Error {
                identity: cell.identity,
                n: cell.n,
                k: cell.modulus.label(),
                error: e.to_string(),
            },
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(text: &str, digits: u32) -> ModulusContext {
        ModulusContext::from_spec(&ModulusSpec::Decimal(text.into()), digits).unwrap()
    }

    #[test]
    fn series_moment_low_orders() {
        let digits = 40;
        let lem = ModulusContext::lemniscatic(digits);
        let tol = HPFloat::ten_pow(8 - digits as i32, digits);
        assert!((series_moment(0, &lem).unwrap() - HPFloat::one(digits)).abs() < tol);
        let sigma2 = HPFloat::pi(digits).mul_int(4).recip();
        assert!((series_moment(1, &lem).unwrap() - &sigma2).abs() < tol);
        // mu_4 = kappa_4 + 3 sigma^4
        let kappa4 = gamma_quarter(digits).powi(8) / HPFloat::pi(digits).powi(6).mul_int(512);
        let mu4 = kappa4 + sigma2.square().mul_int(3);
        assert!((series_moment(2, &lem).unwrap() - mu4).abs() < tol);
    }

    #[test]
    fn theorem1_cases() {
        let digits = 40;
        let lem = ModulusContext::lemniscatic(digits);
        let r = verify_theorem1(1, &lem).unwrap();
        assert!(r.passed && r.rhs.is_zero());
        let r = verify_theorem1(2, &lem).unwrap();
        let expected = (lem.z.square() / lem.sigma2.mul_int(2)).powi(2).div_int(2);
        assert!((r.rhs - expected).abs() < HPFloat::ten_pow(-30, digits));
        let k3 = ctx("0.3", digits);
        for n in 2..=6 {
            assert!(verify_theorem1(n, &k3).unwrap().passed, "n = {n}");
        }
        assert!(verify_theorem1_odd(3, &k3).unwrap().passed);
    }

    #[test]
    fn theorem3_cases() {
        let digits = 40;
        let k = ctx("0.9", digits);
        let r = verify_theorem3(0, &k).unwrap();
        assert!(r.passed);
        let r = verify_theorem3(1, &k).unwrap();
        assert!((r.rhs - &k.sigma2).abs() < HPFloat::ten_pow(-35, digits));
        for n in 2..=8 {
            assert!(verify_theorem3(n, &k).unwrap().passed, "n = {n}");
        }
    }

    #[test]
    fn romik_cases() {
        for n in 0..=8 {
            assert!(verify_romik11(n, 40).unwrap().passed, "n = {n}");
        }
        assert!(!romik_with_omega(2, 40, romik_omega_pi8(40)).unwrap().passed);
        let [a, b, c] = phi_routes(40).unwrap();
        let tol = HPFloat::ten_pow(-33, 40);
        assert!((&a - &b).abs() < tol);
        assert!((&b - &c).abs() < tol);
    }

    #[test]
    fn variance_symmetry_cases() {
        for text in ["0.3", "0.95"] {
            let k = HPFloat::parse(text, 40).unwrap();
            assert!(verify_variance_symmetry(&k).unwrap().passed);
        }
        assert!(verify_variance_symmetry(&HPFloat::from_i64(2, 40)).is_err());
    }

    #[test]
    fn moment_relation_needs_the_sum_form() {
        let k = ctx("0.3", 40);
        for n in 1..=5 {
            assert!(verify_moment_relation(n, &k, DeltaForm::Sum).unwrap().passed, "n = {n}");
        }
        let printed = verify_moment_relation(1, &k, DeltaForm::Difference).unwrap();
        assert!(!printed.passed);
        assert!(printed.residual.to_f64() > 1e-3);
        // delta^2 = K'/(2 pi K)
        let dual = k.complementary();
        let delta2 = &dual.sigma2 + k.c.square() * &k.sigma2;
        let closed = &k.c / HPFloat::pi(40).mul_int(2);
        assert!((delta2 - closed).abs() < HPFloat::ten_pow(-35, 40));
    }

    #[test]
    fn suite_grid_and_errors() {
        assert!(run_suite(&[], 30).is_empty());
        let grid = build_grid(Suite::Theorem3, 2, &[ModulusSpec::Decimal("1.5".into()), ModulusSpec::Decimal("0.5".into())]);
        assert_eq!(grid.len(), 6);
        let out = run_suite(&grid, 30);
        assert!(out[..3].iter().all(|c| matches!(c, CellOutcome::Error { .. })));
        assert!(out[3..].iter().all(CellOutcome::passed));
    }

    #[test]
    fn suite_is_deterministic() {
        let grid = build_grid(Suite::Symmetry, 3, &default_moduli());
        let a = serde_json::to_string(&run_suite(&grid, 30)).unwrap();
        let b = serde_json::to_string(&run_suite(&grid, 30)).unwrap();
        assert_eq!(a, b);
    }
}
