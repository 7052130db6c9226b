//! Cumulants of the discrete normal law: exact polynomials from Schett
//! self-convolutions, numeric values from the Lambert and Eisenstein series, and
//! the `k -> k'` symmetries.
//!
//! Exact cumulants live in a graded representation: `kappa_{2n} = (z/2)^{2n} G_n(m)`
//! with `G_n = (-1)^{n-1} P_{2n-2}`, so the transcendental factor is implied by the
//! order and only the polynomial in `m` is stored.

use rug::{Integer, Rational};
use serde::Serialize;

use crate::error::{domain, Result};
use crate::exactalg::{binomial, SchettTable, UniPoly};
use crate::numkernel::{series_cutoff, HPFloat, ModulusContext};

/// Reduced Schett polynomials `S_n` and self-convolutions `P_{2p}`, built once.
#[derive(Clone, Debug)]
pub struct CumulantTable {
    reduced: Vec<UniPoly>,
    p_polys: Vec<UniPoly>,
}

impl CumulantTable {
    /// Holds `P_0 ..= P_{2 p_max}`.
    pub fn up_to(p_max: usize) -> Result<Self> {
        let schett = SchettTable::up_to(2 * p_max.max(1) + 1);
        let reduced = (0..p_max.max(1))
            .map(|n| schett.reduced(n))
            .collect::<Result<Vec<_>>>()?;
        let prefactor = -UniPoly::m_one_minus_m();
        let mut p_polys = vec![UniPoly::zero()];
        for p in 1..=p_max {
            let mut conv = UniPoly::zero();
            for n in 0..p {
                let weight = binomial(2 * p as i64, 2 * n as i64 + 1)?;
                let term = (&reduced[n] * &reduced[p - 1 - n]).scale(&Rational::from(weight));
                conv = &conv + &term;
            }
            // (i k k')^2 = -m(1-m)
            p_polys.push(&prefactor * &conv);
        }
        Ok(CumulantTable { reduced, p_polys })
    }

    pub fn p_max(&self) -> usize {
        self.p_polys.len() - 1
    }

    pub fn reduced(&self, n: usize) -> Option<&UniPoly> {
        self.reduced.get(n)
    }

    /// `P_{2p}(m)`.
    pub fn p_poly(&self, p: usize) -> Option<&UniPoly> {
        self.p_polys.get(p)
    }

    /// Graded coefficient of `(z/2)^{2n}` in `kappa_{2n}` for `n >= 2`.
    pub fn cumulant(&self, n: usize) -> Result<CumulantPoly> {
        if n < 2 {
            return domain(format!(
                "exact cumulant polynomials start at order 4 (n >= 2), got n = {n}"
            ));
        }
        let poly = self
            .p_poly(n - 1)
            .ok_or_else(|| crate::Error::Domain(format!("table built up to P_{}, need P_{}", 2 * self.p_max(), 2 * n - 2)))?
            .clone();
        Ok(CumulantPoly {
            n,
            poly,
            sign: if n.is_multiple_of(2) { -1 } else { 1 },
        })
    }
}

/// `kappa_{2n} = sign * (z/2)^{2n} * P_{2n-2}(m)` with `sign = (-1)^{n-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CumulantPoly {
    pub n: usize,
    /// `P_{2n-2}(m)`.
    pub poly: UniPoly,
    pub sign: i8,
}

impl CumulantPoly {
    /// `sign * P_{2n-2}`: the polynomial multiplying `(z/2)^{2n}`.
    pub fn graded(&self) -> UniPoly {
        self.poly.scale_int(i64::from(self.sign))
    }

    pub fn evaluate(&self, ctx: &ModulusContext) -> HPFloat {
        let half_z = ctx.z.div_int(2);
        self.graded().evaluate_float(&ctx.m()) * half_z.powi(2 * self.n as i32)
    }
}

/// `P_{2p}(m)`; `P_0` is the zero polynomial.
pub fn p_poly(p: usize) -> Result<UniPoly> {
    Ok(CumulantTable::up_to(p)?.p_polys.swap_remove(p))
}

pub fn cumulant_poly(n: usize) -> Result<CumulantPoly> {
    if n < 2 {
        return domain(format!("cumulant_poly needs n >= 2, got {n}"));
    }
    CumulantTable::up_to(n - 1)?.cumulant(n)
}

/// `kappa_{2n} = sum_{j>=1} (-1)^{j-1} j^{2n-1} / sinh(c j pi)`, `n >= 1`.
pub fn cumulant_lambert(n: u32, ctx: &ModulusContext) -> Result<HPFloat> {
    if n == 0 {
        return domain("Lambert cumulants start at kappa_2 (n >= 1)");
    }
    let digits = ctx.digits();
    let cutoff = series_cutoff(digits);
    let step = &ctx.c * HPFloat::pi(digits);
    let mut sum = HPFloat::zero(digits);
    let mut prev: Option<HPFloat> = None;
    let mut j: i64 = 1;
    loop {
        let jf = HPFloat::from_i64(j, digits);
        let term = jf.powi(2 * n as i32 - 1) / step.mul_int(j).sinh();
        let decreasing = prev.as_ref().is_none_or(|p| term <= *p);
        sum = if j % 2 == 1 { sum + &term } else { sum - &term };
        if decreasing && term < cutoff {
            break;
        }
        prev = Some(term);
        j += 1;
    }
    Ok(sum)
}

/// Cumulant of any order: zero for odd orders, the Lambert series otherwise.
pub fn cumulant_numeric(order: u32, ctx: &ModulusContext) -> Result<HPFloat> {
    if order == 0 {
        return domain("cumulants are indexed from 1");
    }
    if order % 2 == 1 {
        return Ok(HPFloat::zero(ctx.digits()));
    }
    cumulant_lambert(order / 2, ctx)
}

/// Truncated Eisenstein lattice sum for `kappa_{2n}`.
#[derive(Clone, Debug, Serialize)]
pub struct EisensteinSum {
    pub n: u32,
    pub cutoff: u32,
    /// Real part of the symmetrised sum, times the normalisation.
    pub value: HPFloat,
    /// Imaginary part left after summation; zero by conjugate symmetry.
    pub imaginary: f64,
    /// Bound on the absolute lattice tail outside the summed box.
    pub tail_estimate: f64,
}

/// `kappa_{2n} = (-1)^{n+1} (2n-1)! / pi^{2n} * sum_{n1,n2} (2n1 - 1 + i c (2n2 - 1))^{-2n}`
/// with `n1, n2` ranging over `-cutoff+1 ..= cutoff`.
///
/// The lattice is accumulated in double precision; the normalisation is applied at
/// working precision.
pub fn cumulant_eisenstein(n: u32, ctx: &ModulusContext, cutoff: u32) -> Result<EisensteinSum> {
    if n < 2 {
        return domain(format!(
            "Eisenstein cumulants need 2n >= 4 for absolute convergence, got n = {n}"
        ));
    }
    if cutoff == 0 {
        return domain("lattice cutoff must be positive");
    }
    let c = ctx.c.to_f64();
    let power = 2 * n;
    let mut re = Neumaier::default();
    let mut im = Neumaier::default();
    let lo = -(cutoff as i64) + 1;
    let hi = cutoff as i64;
    for n1 in lo..=hi {
        let a = (2 * n1 - 1) as f64;
        for n2 in lo..=hi {
            let b = c * (2 * n2 - 1) as f64;
            let (r, i) = inverse_power(a, b, power);
            re.add(r);
            im.add(i);
        }
    }
    let digits = ctx.digits();
    let mut norm = HPFloat::from_integer(&Integer::from(Integer::factorial(power - 1)), digits)
        / HPFloat::pi(digits).powi(power as i32);
    if n.is_multiple_of(2) {
        norm = -norm;
    }
    let lattice = HPFloat::from_f64(re.total(), digits);
    let radius = 2.0 * cutoff as f64 * c.min(1.0);
    let tail = norm.abs().to_f64() * std::f64::consts::PI / (2.0 * c)
        * radius.powi(2 - power as i32)
        / f64::from(power - 2);
    Ok(EisensteinSum {
        n,
        cutoff,
        value: &norm * lattice,
        imaginary: norm.abs().to_f64() * im.total(),
        tail_estimate: tail,
    })
}

// (a + ib)^{-p}
fn inverse_power(a: f64, b: f64, p: u32) -> (f64, f64) {
    let norm = a * a + b * b;
    let (ur, ui) = (a / norm, -b / norm);
    let (mut rr, mut ri) = (1.0, 0.0);
    let (mut br, mut bi) = (ur, ui);
    let mut e = p;
    while e > 0 {
        if e & 1 == 1 {
            (rr, ri) = (rr * br - ri * bi, rr * bi + ri * br);
        }
        (br, bi) = (br * br - bi * bi, 2.0 * br * bi);
        e >>= 1;
    }
    (rr, ri)
}

#[derive(Default)]
struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn total(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Exact check of `P_{2n}(1 - m) = (-1)^{n-1} P_{2n}(m)`.
pub fn symmetry_check_p(n: usize) -> Result<bool> {
    let p = p_poly(n)?;
    Ok(symmetric_with_sign(&p, if n % 2 == 1 { 1 } else { -1 }))
}

pub(crate) fn symmetric_with_sign(p: &UniPoly, sign: i64) -> bool {
    p.reflect() == p.scale_int(sign)
}

/// `|kappa_{2n}(k') - (-1)^n (K'/K)^{2n} kappa_{2n}(k)|`, relative to `max(1, |rhs|)`.
pub fn cumulant_symmetry_residual(n: u32, k: &HPFloat) -> Result<HPFloat> {
    if n < 2 {
        return domain(format!("cumulant symmetry is stated for n >= 2, got {n}"));
    }
    let ctx = ModulusContext::new(k)?;
    let dual = ctx.complementary();
    let lhs = cumulant_lambert(n, &dual)?;
    let mut rhs = ctx.c.powi(2 * n as i32) * cumulant_lambert(n, &ctx)?;
    if n % 2 == 1 {
        rhs = -rhs;
    }
    Ok(relative_residual(&lhs, &rhs))
}

/// `|lambert - exact|` relative to `max(1, |exact|)` for `kappa_{2n}`, `n >= 2`.
pub fn lambert_schett_residual(table: &CumulantTable, n: usize, ctx: &ModulusContext) -> Result<HPFloat> {
    let exact = table.cumulant(n)?.evaluate(ctx);
    let lambert = cumulant_lambert(n as u32, ctx)?;
    Ok(relative_residual(&lambert, &exact))
}

/// `sum_p p^{2j+1} q^{p^2}` over `|p| <= N`, summed in index order (not paired),
/// so the antisymmetry is tested rather than assumed.
pub fn odd_moment_series(j: u32, ctx: &ModulusContext) -> HPFloat {
    let digits = ctx.digits();
    let cutoff = series_cutoff(digits);
    let ln_q = ctx.q.ln();
    let mut extent: i64 = 1;
    loop {
        let p = HPFloat::from_i64(extent, digits);
        let term = p.powi(2 * j as i32 + 1) * (ln_q.mul_int(extent * extent)).exp();
        if term < cutoff && extent > 2 {
            break;
        }
        extent += 1;
    }
    let mut sum = HPFloat::zero(digits);
    for p in -extent..=extent {
        let pf = HPFloat::from_i64(p, digits);
        sum = sum + pf.powi(2 * j as i32 + 1) * (ln_q.mul_int(p * p)).exp();
    }
    sum
}

pub(crate) fn relative_residual(lhs: &HPFloat, rhs: &HPFloat) -> HPFloat {
    let scale = rhs.abs().max(HPFloat::one(rhs.digits()));
    (lhs - rhs).abs() / scale
}
