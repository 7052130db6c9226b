//! Moments from cumulants: the `R_{2n}` polynomials through the complete Bell
//! recursion, the `d(n)` sequence and its generalisation `d_k(n)`, the `Q` sequence of the
//! standard case, and three interchangeable moment formulas.

use std::collections::BTreeMap;

use rug::ops::Pow;
use rug::{Integer, Rational};
use serde::Serialize;

use crate::cumulants::{cumulant_lambert, symmetric_with_sign, CumulantTable};
use crate::error::{domain, Error, Result};
use crate::exactalg::{binomial, UniPoly};
use crate::numkernel::{HPFloat, ModulusContext};

/// `mu_{2n}(Z) = (z/2)^{2n} R_{2n}(m)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MomentPoly {
    pub n: usize,
    /// `R_{2n}(m)`.
    pub r: UniPoly,
}

/// Graded cumulants `c_1 ..= c_{2n_max}` of `Z` (index 0 holds a placeholder zero).
/// `c_2` and the odd entries vanish.
pub fn graded_cumulants(table: &CumulantTable, order_max: usize) -> Result<Vec<UniPoly>> {
    let mut out = vec![UniPoly::zero(); order_max + 1];
    for order in (4..=order_max).step_by(2) {
        out[order] = table.cumulant(order / 2)?.graded();
    }
    Ok(out)
}

/// `R_0 ..= R_{2N}` via `B_{j+1} = sum_i binom(j, i) c_{i+1} B_{j-i}`.
pub fn bell_moments(n_max: usize) -> Result<Vec<MomentPoly>> {
    let table = CumulantTable::up_to(n_max.max(2) - 1)?;
    // c[i] = graded kappa_i; only even i >= 4 are nonzero
    let mut c = vec![UniPoly::zero(); 2 * n_max + 1];
    for n in 2..=n_max {
        c[2 * n] = table.cumulant(n)?.graded();
    }
    let mut bell = vec![UniPoly::one()];
    for j in 0..2 * n_max {
        let mut next = UniPoly::zero();
        for i in (3..=j).step_by(2) {
            let weight = Rational::from(binomial(j as i64, i as i64)?);
            next = &next + &(&c[i + 1] * &bell[j - i]).scale(&weight);
        }
        bell.push(next);
    }
    Ok((0..=n_max)
        .map(|n| MomentPoly {
            n,
            r: bell[2 * n].clone(),
        })
        .collect())
}

/// `R_{2n}(1 - m) = (-1)^n R_{2n}(m)`.
pub fn r_symmetry_holds(poly: &MomentPoly) -> bool {
    symmetric_with_sign(&poly.r, if poly.n.is_multiple_of(2) { 1 } else { -1 })
}

fn integral(value: Rational, what: impl FnOnce() -> String) -> Result<Integer> {
    if *value.denom() == 1 {
        Ok(value.into_numer_denom().0)
    } else {
        Err(Error::Consistency(format!("{} = {value} is not an integer", what())))
    }
}

/// `d(n) = 2^n R_{4n}(1/2)` for `n = 1..=N`.
pub fn d_sequence(n_max: usize) -> Result<Vec<Integer>> {
    if n_max == 0 {
        return domain("d_sequence needs N >= 1");
    }
    let moments = bell_moments(2 * n_max)?;
    let half = Rational::from((1, 2));
    (1..=n_max)
        .map(|n| {
            let value = moments[2 * n].r.evaluate(&half) * Rational::from(Integer::from(1) << n as u32);
            integral(value, || format!("d({n})"))
        })
        .collect()
}

/// `d_k(n) = R_{4n}(1/p)` for `n = 0..=N`, with `k = 1/sqrt(p)`.
pub fn dk_sequence(p: u32, n_max: usize) -> Result<Vec<Rational>> {
    if p < 2 {
        return domain(format!("dk_sequence needs p >= 2, got {p}"));
    }
    let moments = bell_moments(2 * n_max)?;
    let m = Rational::from((1, p));
    Ok((0..=n_max).map(|n| moments[2 * n].r.evaluate(&m)).collect())
}

/// Scaling factor `alpha_m` tabulated for `k = 1/sqrt(p)`, `p = 2..=7`.
pub fn table_alpha(p: u32, m: u32) -> Option<Rational> {
    let pow = |base: i64, e: u32| Rational::from(Integer::from(base).pow(e));
    let alpha = match p {
        2 => pow(2, m),
        3 => pow(3, 2 * m) / pow(2, 2 * m),
        4 => pow(2, 3 * m) / Rational::from(3),
        5 => pow(5, 2 * m) / pow(2, 3 * m),
        6 => pow(2, m) * pow(3, 2 * m) / Rational::from(5),
        7 => pow(7, 2 * m) / pow(2, 2 * m) / Rational::from(3),
        _ => return None,
    };
    Some(alpha)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConjectureRow {
    pub p: u32,
    pub m: u32,
    /// `d_k(m) = R_{4m}(1/p)`.
    #[serde(serialize_with = "ser_rational")]
    pub value: Rational,
    /// Tabulated prefactor; absent for `p > 7`.
    #[serde(serialize_with = "ser_opt_rational")]
    pub alpha: Option<Rational>,
    /// `alpha * value`, or `value` itself when there is no prefactor.
    #[serde(serialize_with = "ser_rational")]
    pub scaled: Rational,
    pub is_integer: bool,
    /// Prime factorisation of the denominator of `scaled`.
    pub denominator_factors: Vec<(String, u32)>,
}

pub(crate) fn ser_rational<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&rational_string(r))
}

fn ser_opt_rational<S: serde::Serializer>(r: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.serialize_some(&rational_string(r)),
        None => s.serialize_none(),
    }
}

/// `num/den`, or just `num` for integers.
pub fn rational_string(r: &Rational) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Trial-division factorisation; a cofactor with no prime below `10^6` is
/// reported as a single factor.
pub fn factorize(n: &Integer) -> Vec<(Integer, u32)> {
    let mut rest = Integer::from(n.abs_ref());
    let mut out = Vec::new();
    let mut d = Integer::from(2);
    while rest > 1 && d < 1_000_000 {
        if Integer::from(&d * &d) > rest {
            break;
        }
        let mut e = 0;
        while rest.is_divisible(&d) {
            rest /= &d;
            e += 1;
        }
        if e > 0 {
            out.push((d.clone(), e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if rest > 1 {
        out.push((rest, 1));
    }
    out
}

pub fn conjecture_row(p: u32, m: u32, value: Rational) -> ConjectureRow {
    let alpha = table_alpha(p, m);
    let scaled = match &alpha {
        Some(a) => Rational::from(a * &value),
        None => value.clone(),
    };
    let is_integer = *scaled.denom() == 1;
    let denominator_factors = factorize(scaled.denom())
        .into_iter()
        .map(|(q, e)| (q.to_string(), e))
        .collect();
    ConjectureRow {
        p,
        m,
        value,
        alpha,
        scaled,
        is_integer,
        denominator_factors,
    }
}

/// Rows `m = 1..=N` of the scaled sequence `alpha_m d_k(m)`.
pub fn conjecture_check(p: u32, n_max: usize) -> Result<Vec<ConjectureRow>> {
    let values = dk_sequence(p, n_max)?;
    Ok(values
        .into_iter()
        .enumerate()
        .skip(1)
        .map(|(m, v)| conjecture_row(p, m as u32, v))
        .collect())
}

/// `Q_{2n} = 2^n G_n(1/2)` for `2n = 4, 6, ..., 4N`, where `kappa_{2n} = (z/(2 sqrt 2))^{2n} Q_{2n}`
/// in the standard case.
pub fn q_sequence(n_max: usize) -> Result<Vec<Integer>> {
    if n_max == 0 {
        return domain("q_sequence needs N >= 1");
    }
    let table = CumulantTable::up_to(2 * n_max - 1)?;
    let half = Rational::from((1, 2));
    let mut out = Vec::new();
    for n in 2..=2 * n_max {
        let value = table.cumulant(n)?.graded().evaluate(&half) * Rational::from(Integer::from(1) << n as u32);
        let q = integral(value, || format!("Q_{}", 2 * n))?;
        if n % 2 == 1 && q != 0 {
            return Err(Error::Consistency(format!("Q_{} = {q} should vanish", 2 * n)));
        }
        out.push(q);
    }
    Ok(out)
}

/// `Q_4, Q_8, ..., Q_{4N}`.
pub fn q4n_sequence(n_max: usize) -> Result<Vec<Integer>> {
    Ok(q_sequence(n_max)?.into_iter().step_by(2).collect())
}

/// `A_0 ..= A_N` with `A_{n+1} = sum_j binom(4n+4, 4j+2) A_j A_{n-j}`.
pub fn a_sequence(n_max: usize) -> Result<Vec<Integer>> {
    let mut a = vec![Integer::from(1)];
    for n in 0..n_max {
        let mut next = Integer::new();
        for j in 0..=n {
            next += binomial(4 * n as i64 + 4, 4 * j as i64 + 2)? * Integer::from(&a[j] * &a[n - j]);
        }
        a.push(next);
    }
    Ok(a)
}

/// `Q_{4n} = 2 (-12)^{n-1} A_{n-1}` for `n = 1..=N`.
pub fn q4n_from_a(n_max: usize) -> Result<Vec<Integer>> {
    let a = a_sequence(n_max.saturating_sub(1))?;
    Ok((1..=n_max)
        .map(|n| Integer::from(-12).pow((n - 1) as u32) * &a[n - 1] * 2u32)
        .collect())
}

/// Checks `Q_{4n} = -6 sum_j binom(4n-4, 4j+2) Q_{4j+4} Q_{4n-4j-4}` and the
/// `A`-sequence route for every `2 <= n <= N`.
pub fn kappa_recurrence_check(n_max: usize) -> Result<bool> {
    if n_max < 2 {
        return domain("kappa_recurrence_check needs N >= 2");
    }
    let q = q4n_sequence(n_max)?;
    if q != q4n_from_a(n_max)? {
        return Ok(false);
    }
    // q[i] = Q_{4i+4}
    for n in 2..=n_max {
        let mut sum = Integer::new();
        for j in 0..=n - 2 {
            sum += binomial(4 * n as i64 - 4, 4 * j as i64 + 2)? * Integer::from(&q[j] * &q[n - 2 - j]);
        }
        if q[n - 1] != sum * -6 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Arithmetic needed by the moment formulas, shared by the exact graded ring and
/// working-precision reals.
pub trait MomentScalar: Clone {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn plus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn times_integer(&self, n: &Integer) -> Self;
}

impl MomentScalar for UniPoly {
    fn zero_like(&self) -> Self {
        UniPoly::zero()
    }
    fn one_like(&self) -> Self {
        UniPoly::one()
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn times_integer(&self, n: &Integer) -> Self {
        self.scale(&Rational::from(n))
    }
}

impl MomentScalar for HPFloat {
    fn zero_like(&self) -> Self {
        HPFloat::zero(self.digits())
    }
    fn one_like(&self) -> Self {
        HPFloat::one(self.digits())
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn times_integer(&self, n: &Integer) -> Self {
        self.mul_integer(n)
    }
}

fn binom_u(n: usize, r: usize) -> Integer {
    Integer::from(Integer::binomial_u(n as u32, r as u32))
}

/// `mu_0 ..= mu_n` from `kappa_1 ..= kappa_n` (slice index `i` holds `kappa_{i+1}`) via
/// `mu_n = sum_{m=1}^{n} binom(n-1, m-1) kappa_m mu_{n-m}`.
pub fn moments_from_cumulants<T: MomentScalar>(kappa: &[T]) -> Result<Vec<T>> {
    let first = kappa
        .first()
        .ok_or_else(|| Error::Domain("need at least one cumulant".into()))?;
    let mut mu = vec![first.one_like()];
    for n in 1..=kappa.len() {
        let mut acc = first.zero_like();
        for m in 1..=n {
            acc = acc.plus(&kappa[m - 1].times(&mu[n - m]).times_integer(&binom_u(n - 1, m - 1)));
        }
        mu.push(acc);
    }
    Ok(mu)
}

/// `mu_n` as the determinant of the lower Hessenberg matrix with entries
/// `h_{i,j} = binom(i-1, j-1) kappa_{i-j+1}` for `j <= i` and `-1` on the superdiagonal,
/// evaluated by the Hessenberg minor recursion.
pub fn moments_determinant<T: MomentScalar>(n: usize, kappa: &[T]) -> Result<T> {
    if n < 1 {
        return domain("moments_determinant needs n >= 1");
    }
    if kappa.len() < n {
        return Err(Error::Dimension {
            expected: n,
            got: kappa.len(),
        });
    }
    let zero = kappa[0].zero_like();
    let minus_one = zero.one_like().times_integer(&Integer::from(-1));
    let h = |i: usize, j: usize| -> T {
        if j <= i {
            kappa[i - j].times_integer(&binom_u(i, j))
        } else if j == i + 1 {
            minus_one.clone()
        } else {
            zero.clone()
        }
    };
    // d[k] = leading k x k principal minor, 0-based rows and columns.
    let mut d = vec![zero.one_like()];
    for k in 1..=n {
        let row = k - 1;
        let mut acc = zero.clone();
        for col in 0..=row {
            // expansion along the last row; the superdiagonal product is (-1)^(row-col)
            let mut superdiag = zero.one_like();
            for l in col..row {
                superdiag = superdiag.times(&h(l, l + 1));
            }
            let sign = if (row - col) % 2 == 0 { 1 } else { -1 };
            let term = h(row, col).times(&superdiag).times(&d[col]).times_integer(&Integer::from(sign));
            acc = acc.plus(&term);
        }
        d.push(acc);
    }
    Ok(d.swap_remove(n))
}

/// Largest order accepted by [`moments_partition`].
pub const PARTITION_HARD_CAP: usize = 14;
/// Default cap for partition sums.
pub const PARTITION_DEFAULT_CAP: usize = 12;

/// Number of set partitions of `{1..n}` by block-size multiset, enumerated through
/// restricted-growth strings in lexicographic order.
pub fn set_partition_types(n: usize) -> Result<BTreeMap<Vec<usize>, u64>> {
    if n > PARTITION_HARD_CAP {
        return Err(Error::Budget(format!(
            "set partitions beyond n = {PARTITION_HARD_CAP} are out of budget (n = {n})"
        )));
    }
    let mut types = BTreeMap::new();
    if n == 0 {
        types.insert(Vec::new(), 1);
        return Ok(types);
    }
    let mut rgs = vec![0usize; n];
    // prefix maxima: max_before[i] = max(rgs[..i])
    let mut max_before = vec![0usize; n];
    let mut sizes = vec![0usize; n];
    loop {
        sizes.iter_mut().for_each(|s| *s = 0);
        for &b in &rgs {
            sizes[b] += 1;
        }
        let mut key: Vec<usize> = sizes.iter().copied().filter(|&s| s > 0).collect();
        key.sort_unstable();
        *types.entry(key).or_insert(0) += 1;
        // next restricted-growth string
        let mut i = n - 1;
        loop {
            if i == 0 {
                return Ok(types);
            }
            if rgs[i] <= max_before[i] {
                rgs[i] += 1;
                break;
            }
            i -= 1;
        }
        for t in i + 1..n {
            max_before[t] = max_before[t - 1].max(rgs[t - 1]);
            rgs[t] = 0;
        }
    }
}

/// `mu_n = sum over set partitions of {1..n} of prod kappa_{|block|}`, `n <= cap`.
pub fn moments_partition<T: MomentScalar>(n: usize, kappa: &[T], cap: usize) -> Result<T> {
    if n > cap.min(PARTITION_HARD_CAP) {
        return Err(Error::Budget(format!("partition sum capped at n = {cap}, got {n}")));
    }
    if kappa.len() < n.max(1) {
        return Err(Error::Dimension {
            expected: n.max(1),
            got: kappa.len(),
        });
    }
    let mut acc = kappa[0].zero_like();
    for (sizes, count) in set_partition_types(n)? {
        let mut term = kappa[0].one_like();
        for s in sizes {
            term = term.times(&kappa[s - 1]);
        }
        acc = acc.plus(&term.times_integer(&Integer::from(count)));
    }
    Ok(acc)
}

/// Graded exact moments of `Z`: `mu_0 ..= mu_{2N}`.
pub fn moments_exact(n_max: usize) -> Result<Vec<UniPoly>> {
    let table = CumulantTable::up_to(n_max.max(2) - 1)?;
    let kappa = graded_cumulants(&table, 2 * n_max.max(1))?;
    moments_from_cumulants(&kappa[1..])
}

/// Cumulants `kappa_1 ..= kappa_{order}` of `X` from the Lambert series.
pub fn numeric_cumulants(order: usize, ctx: &ModulusContext) -> Result<Vec<HPFloat>> {
    (1..=order)
        .map(|j| {
            if j % 2 == 1 {
                Ok(HPFloat::zero(ctx.digits()))
            } else {
                cumulant_lambert(j as u32 / 2, ctx)
            }
        })
        .collect()
}

/// Moments `mu_0 ..= mu_{2N}` of `X` at working precision.
pub fn moments_numeric(n_max: usize, ctx: &ModulusContext) -> Result<Vec<HPFloat>> {
    moments_from_cumulants(&numeric_cumulants(2 * n_max.max(1), ctx)?)
}
