//! Cycle peaks of permutations and the reconciliation of the cycle-peak formula for
//! the cumulants against the exact cumulant polynomials.
//!
//! A cycle peak of `sigma` is an integer `k >= 2` with `sigma(k) != k`, `sigma(k) < k`
//! and `sigma^{-1}(k) < k`. Permutations are given in one-line notation with values
//! `1..=n`: `perm[i - 1] = sigma(i)`.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use rug::{Integer, Rational};
use serde::Serialize;

use crate::cumulants::CumulantTable;
use crate::error::{Error, Result};
use crate::exactalg::UniPoly;
use crate::moments::q_sequence;

/// Largest `n` accepted by [`count_profiles`].
pub const PROFILE_MAX_N: usize = 10;

fn check_permutation(perm: &[usize]) -> Result<()> {
    let n = perm.len();
    let mut seen = vec![false; n + 1];
    for &v in perm {
        if v == 0 || v > n {
            return Err(Error::Permutation(format!("value {v} outside 1..={n}")));
        }
        if seen[v] {
            return Err(Error::Permutation(format!("value {v} repeated")));
        }
        seen[v] = true;
    }
    Ok(())
}

/// `(odd, even)`: the number of cycle peaks with odd and with even value.
pub fn cycle_peaks(perm: &[usize]) -> Result<(usize, usize)> {
    check_permutation(perm)?;
    Ok(peaks_unchecked(perm, &inverse(perm)))
}

fn inverse(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; perm.len()];
    for (i, &v) in perm.iter().enumerate() {
        inv[v - 1] = i + 1;
    }
    inv
}

fn peaks_unchecked(perm: &[usize], inv: &[usize]) -> (usize, usize) {
    let (mut odd, mut even) = (0, 0);
    for k in 2..=perm.len() {
        let image = perm[k - 1];
        if image != k && image < k && inv[k - 1] < k {
            if k % 2 == 1 {
                odd += 1;
            } else {
                even += 1;
            }
        }
    }
    (odd, even)
}

/// Whether every cycle has even length.
pub fn all_cycles_even(perm: &[usize]) -> bool {
    let mut visited = vec![false; perm.len()];
    for start in 0..perm.len() {
        if visited[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !visited[i] {
            visited[i] = true;
            i = perm[i] - 1;
            len += 1;
        }
        if len % 2 == 1 {
            return false;
        }
    }
    true
}

/// Which permutations are counted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CycleClass {
    All,
    /// Only permutations whose cycles all have even length.
    EvenCycles,
}

/// `P_{n,i,j}`: permutations of `{1..n}` with `i` odd-valued and `j` even-valued
/// cycle peaks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CyclePeakProfile {
    pub n: usize,
    pub class: CycleClass,
    /// `(odd, even) -> count`.
    pub counts: BTreeMap<(usize, usize), u64>,
}

impl CyclePeakProfile {
    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn get(&self, odd: usize, even: usize) -> u64 {
        self.counts.get(&(odd, even)).copied().unwrap_or(0)
    }
}

/// Rearranges into the next permutation in lexicographic order; false at the last one.
fn next_permutation(xs: &mut [usize]) -> bool {
    let n = xs.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && xs[i - 1] >= xs[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while xs[j] <= xs[i - 1] {
        j -= 1;
    }
    xs.swap(i - 1, j);
    xs[i..].reverse();
    true
}

/// Exhaustive profiles of `S_n` for both cycle classes, `n <= 10`. Work is split by
/// the image of 1 and merged by addition.
pub fn count_profiles_by_class(n: usize) -> Result<(CyclePeakProfile, CyclePeakProfile)> {
    if n > PROFILE_MAX_N {
        return Err(Error::Budget(format!(
            "cycle-peak enumeration is limited to n <= {PROFILE_MAX_N}, got {n}"
        )));
    }
    let empty = |class| CyclePeakProfile {
        n,
        class,
        counts: BTreeMap::new(),
    };
    let (mut all, mut even) = (empty(CycleClass::All), empty(CycleClass::EvenCycles));
    if n == 0 {
        all.counts.insert((0, 0), 1);
        even.counts.insert((0, 0), 1);
        return Ok((all, even));
    }
    let parts: Vec<_> = (1..=n)
        .into_par_iter()
        .map(|first| {
            let mut local_all = BTreeMap::new();
            let mut local_even = BTreeMap::new();
            let mut perm: Vec<usize> = std::iter::once(first).chain((1..=n).filter(|&v| v != first)).collect();
            loop {
                let key = peaks_unchecked(&perm, &inverse(&perm));
                *local_all.entry(key).or_insert(0u64) += 1;
                if all_cycles_even(&perm) {
                    *local_even.entry(key).or_insert(0u64) += 1;
                }
                if !next_permutation(&mut perm[1..]) {
                    break;
                }
            }
            (local_all, local_even)
        })
        .collect();
    for (a, e) in parts {
        for (k, v) in a {
            *all.counts.entry(k).or_insert(0) += v;
        }
        for (k, v) in e {
            *even.counts.entry(k).or_insert(0) += v;
        }
    }
    Ok((all, even))
}

pub fn count_profiles(n: usize) -> Result<CyclePeakProfile> {
    Ok(count_profiles_by_class(n)?.0)
}

/// Which peak parity the fixed index `i = 1` refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PeakParity {
    /// Exactly one odd-valued peak, `j` even-valued peaks.
    Standard,
    /// Exactly one even-valued peak, `j` odd-valued peaks.
    Swapped,
}

/// Powers `k^{2(j+a)} k'^{2(n-j+b)}` attached to the `j`-th term.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Exponents {
    /// `k^{2j+2} k'^{2n-2j+2}`.
    Printed,
    /// `k^{2j} k'^{2n-2j+2}`.
    Dumont,
    /// `k^{2j+2} k'^{2n-2j}`.
    Derived,
}

impl Exponents {
    fn offsets(self) -> (usize, usize) {
        match self {
            Exponents::Printed => (1, 1),
            Exponents::Dumont => (0, 1),
            Exponents::Derived => (1, 0),
        }
    }
}

/// One way of reading the cycle-peak formula
/// `kappa_{2n+2} = (z/2)^{2n+2} * 2 * s * sum_j (-1)^{j-1} k^{..} k'^{..} T_j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Convention {
    pub parity: PeakParity,
    pub class: CycleClass,
    pub exponents: Exponents,
    /// Global sign `s`.
    pub sign: i8,
}

impl Convention {
    /// The formula as displayed: all permutations, one odd peak, `k^{2j+2} k'^{2n-2j+2}`, `(-1)^{j-1}`.
    pub const PRINTED: Convention = Convention {
        parity: PeakParity::Standard,
        class: CycleClass::All,
        exponents: Exponents::Printed,
        sign: 1,
    };

    /// Every candidate, in report order.
    pub fn candidates() -> Vec<Convention> {
        let mut out = Vec::with_capacity(24);
        for parity in [PeakParity::Standard, PeakParity::Swapped] {
            for class in [CycleClass::All, CycleClass::EvenCycles] {
                for exponents in [Exponents::Printed, Exponents::Dumont, Exponents::Derived] {
                    for sign in [1, -1] {
                        out.push(Convention {
                            parity,
                            class,
                            exponents,
                            sign,
                        });
                    }
                }
            }
        }
        out
    }

    /// `T_j`, the counts with the fixed index equal to one.
    fn counts(self, profile: &CyclePeakProfile, n: usize) -> Vec<u64> {
        (0..=n)
            .map(|j| match self.parity {
                PeakParity::Standard => profile.get(1, j),
                PeakParity::Swapped => profile.get(j, 1),
            })
            .collect()
    }

    /// Graded coefficient of `(z/2)^{2n+2}` predicted by this convention.
    pub fn predict(self, profile: &CyclePeakProfile, n: usize) -> UniPoly {
        let (a, b) = self.exponents.offsets();
        let one_minus_m = UniPoly::from_ints(&[1, -1]);
        let mut acc = UniPoly::zero();
        for (j, t) in self.counts(profile, n).into_iter().enumerate() {
            if t == 0 {
                continue;
            }
            let sign = if j % 2 == 1 { 1 } else { -1 } * i64::from(self.sign);
            let term = (&UniPoly::m().pow((j + a) as u32) * &one_minus_m.pow((n - j + b) as u32))
                .scale(&Rational::from(Integer::from(t) * sign * 2));
            acc = &acc + &term;
        }
        acc
    }
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parity = match self.parity {
            PeakParity::Standard => "one odd peak, j even peaks",
            PeakParity::Swapped => "one even peak, j odd peaks",
        };
        let class = match self.class {
            CycleClass::All => "all permutations",
            CycleClass::EvenCycles => "even cycles only",
        };
        let powers = match self.exponents {
            Exponents::Printed => "k^(2j+2) k'^(2n-2j+2)",
            Exponents::Dumont => "k^(2j) k'^(2n-2j+2)",
            Exponents::Derived => "k^(2j+2) k'^(2n-2j)",
        };
        let sign = if self.sign > 0 { "(-1)^(j-1)" } else { "(-1)^j" };
        write!(f, "{parity}; {class}; {powers}; sign {sign}")
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct OrderVerdict {
    pub n: usize,
    pub matches: bool,
    /// `predicted - exact`, highest power first.
    pub residual: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct CandidateVerdict {
    pub convention: Convention,
    pub description: String,
    pub matches_all: bool,
    pub orders: Vec<OrderVerdict>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReconciliationReport {
    pub max_n: usize,
    pub candidates: Vec<CandidateVerdict>,
    /// The unique matching convention, if exactly one matches.
    pub winner: Option<Convention>,
    pub winner_description: Option<String>,
    pub matching_count: usize,
    pub printed_matches_n1: bool,
    /// `(2n+2, Q_{2n+2})` projected from the winner at `m = 1/2`.
    pub q_projection: Vec<(usize, String)>,
    /// The same orders from the cumulant polynomials.
    pub q_exact: Vec<(usize, String)>,
    /// `sum_j (-1)^{j-1} P_{2n,1,j}` with all permutations and standard parity.
    pub printed_projection: Vec<(usize, String)>,
    /// Swapped-parity, even-cycle counts `T_j` per order.
    pub winner_counts: Vec<Vec<u64>>,
}

/// Checks every candidate reading of the cycle-peak formula against
/// `kappa_{2n+2} = (z/2)^{2n+2} (-1)^n P_{2n}(m)` for `n = 1..=max_n` (`max_n <= 4`).
pub fn reconcile_thm11(max_n: usize) -> Result<ReconciliationReport> {
    if !(1..=4).contains(&max_n) {
        return Err(Error::Budget(format!(
            "reconciliation needs 1 <= maxN <= 4 (S_8 at most), got {max_n}"
        )));
    }
    let table = CumulantTable::up_to(max_n)?;
    let mut profiles = Vec::new();
    for n in 1..=max_n {
        profiles.push(count_profiles_by_class(2 * n)?);
    }
    let profile = |n: usize, class: CycleClass| match class {
        CycleClass::All => &profiles[n - 1].0,
        CycleClass::EvenCycles => &profiles[n - 1].1,
    };
    let exact: Vec<UniPoly> = (1..=max_n)
        .map(|n| table.cumulant(n + 1).map(|c| c.graded()))
        .collect::<Result<_>>()?;

    let mut candidates = Vec::new();
    for convention in Convention::candidates() {
        let orders: Vec<OrderVerdict> = (1..=max_n)
            .map(|n| {
                let predicted = convention.predict(profile(n, convention.class), n);
                let residual = &predicted - &exact[n - 1];
                OrderVerdict {
                    n,
                    matches: residual.is_zero(),
                    residual: residual.to_string(),
                }
            })
            .collect();
        candidates.push(CandidateVerdict {
            convention,
            description: convention.to_string(),
            matches_all: orders.iter().all(|o| o.matches),
            orders,
        });
    }
    let matching: Vec<Convention> = candidates.iter().filter(|c| c.matches_all).map(|c| c.convention).collect();
    let winner = (matching.len() == 1).then(|| matching[0]);
    let printed_matches_n1 = candidates
        .iter()
        .find(|c| c.convention == Convention::PRINTED)
        .is_some_and(|c| c.orders[0].matches);

    let half = Rational::from((1, 2));
    let mut q_projection = Vec::new();
    let mut winner_counts = Vec::new();
    if let Some(w) = winner {
        for n in 1..=max_n {
            let graded = w.predict(profile(n, w.class), n).evaluate(&half) * Rational::from(Integer::from(1) << (n + 1) as u32);
            q_projection.push((2 * n + 2, rational_to_string(&graded)));
            winner_counts.push(w.counts(profile(n, w.class), n));
        }
    }
    let q = q_sequence(max_n.div_ceil(2).max(1) + 1)?;
    let q_exact = (1..=max_n).map(|n| (2 * n + 2, q[n - 1].to_string())).collect();
    let printed_projection = (1..=max_n)
        .map(|n| {
            let counts = Convention::PRINTED.counts(profile(n, CycleClass::All), n);
            let sum: i64 = counts
                .iter()
                .enumerate()
                .map(|(j, &t)| if j % 2 == 1 { t as i64 } else { -(t as i64) })
                .sum();
            (2 * n + 2, sum.to_string())
        })
        .collect();

    Ok(ReconciliationReport {
        max_n,
        matching_count: matching.len(),
        winner_description: winner.map(|w| w.to_string()),
        winner,
        candidates,
        printed_matches_n1,
        q_projection,
        q_exact,
        printed_projection,
        winner_counts,
    })
}

fn rational_to_string(r: &Rational) -> String {
    crate::moments::rational_string(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn peaks_of_examples() {
        // (134)(2)(56)
        assert_eq!(cycle_peaks(&[3, 2, 4, 1, 6, 5]).unwrap(), (0, 2));
        assert_eq!(cycle_peaks(&[1, 2, 3, 4]).unwrap(), (0, 0));
        assert_eq!(cycle_peaks(&[2, 1]).unwrap(), (0, 1));
        assert!(matches!(cycle_peaks(&[1, 1]), Err(Error::Permutation(_))));
        assert!(cycle_peaks(&[0, 1]).is_err());
        assert!(cycle_peaks(&[3, 1]).is_err());
    }

    #[test]
    fn peaks_invariant_under_inversion() {
        let mut perm: Vec<usize> = (1..=6).collect();
        loop {
            let inv = inverse(&perm);
            assert_eq!(cycle_peaks(&perm).unwrap(), cycle_peaks(&inv).unwrap());
            if !next_permutation(&mut perm) {
                break;
            }
        }
    }

    #[test]
    fn small_profiles() {
        let p1 = count_profiles(1).unwrap();
        assert_eq!(p1.get(0, 0), 1);
        let p2 = count_profiles(2).unwrap();
        assert_eq!(p2.total(), 2);
        assert_eq!(p2.counts.iter().filter(|(&(i, j), _)| i + j > 0).map(|(_, &c)| c).sum::<u64>(), 1);
        let p4 = count_profiles(4).unwrap();
        let expected: BTreeMap<(usize, usize), u64> =
            [((0, 0), 1), ((0, 1), 14), ((0, 2), 1), ((1, 0), 4), ((1, 1), 4)].into_iter().collect();
        assert_eq!(p4.counts, expected);
        assert_eq!(count_profiles(6).unwrap().total(), 720);
        assert!(count_profiles(11).is_err());
    }

    #[test]
    fn even_cycle_counts_are_sn_squared_coefficients() {
        // coefficients of sn(u; a, b)^2 / 2
        let expected: [&[u64]; 4] = [&[1], &[4, 4], &[16, 104, 16], &[64, 1920, 1920, 64]];
        for n in 1..=4 {
            let (_, even) = count_profiles_by_class(2 * n).unwrap();
            let t: Vec<u64> = (0..n).map(|j| even.get(j, 1)).collect();
            assert_eq!(t, expected[n - 1], "n = {n}");
        }
    }

    #[test]
    fn twenty_four_candidates() {
        let c = Convention::candidates();
        assert_eq!(c.len(), 24);
        assert!(c.contains(&Convention::PRINTED));
    }

    #[test]
    fn reconciliation_picks_one_convention() {
        let report = reconcile_thm11(3).unwrap();
        assert_eq!(report.matching_count, 1);
        let w = report.winner.unwrap();
        assert_eq!(w.parity, PeakParity::Swapped);
        assert_eq!(w.class, CycleClass::EvenCycles);
        assert_eq!(w.exponents, Exponents::Derived);
        assert_eq!(w.sign, -1);
        assert!(!report.printed_matches_n1);
        let q: Vec<&str> = report.q_projection.iter().map(|(_, q)| q.as_str()).collect();
        assert_eq!(q, ["2", "0", "-144"]);
        assert_eq!(report.q_projection, report.q_exact);
        assert!(reconcile_thm11(5).is_err());
    }
}
