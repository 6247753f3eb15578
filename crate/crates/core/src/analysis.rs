//! Closed-form quantities for crown and Kneser graphs.
//!
//! Probabilities are exact rationals. For a crown graph presented in
//! alternate order with a buffer of two, the colour count `C` satisfies
//! `Pr(C = k) = 2^-(k-1)` for `1 < k < n` and `Pr(C = n) = 2^-(n-2)`, so
//! `Pr(C >= m) = 2^-(m-2)` and the mean, summed term by term, is
//! `3 - 2^-(n-2)`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Exact rational value.
pub type Rational = BigRational;

fn pow2_inverse(e: u32) -> Rational {
    Rational::new(BigInt::one(), BigInt::one() << e)
}

/// Law of the colour count for a crown graph in alternate order, buffer 2.
pub fn crown_b2_pmf(n: u32) -> Result<BTreeMap<u32, Rational>> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "crown pmf needs n >= 2 (got {n})"
        )));
    }
    let mut pmf: BTreeMap<u32, Rational> = (2..n).map(|k| (k, pow2_inverse(k - 1))).collect();
    pmf.insert(n, pow2_inverse(n - 2));
    Ok(pmf)
}

/// Mean of [`crown_b2_pmf`] by direct summation.
pub fn crown_b2_mean(n: u32) -> Result<Rational> {
    Ok(crown_b2_pmf(n)?
        .into_iter()
        .fold(Rational::zero(), |acc, (k, p)| acc + p * BigInt::from(k)))
}

/// The closed form `3 - 2^-n` as printed alongside the pmf. It disagrees with
/// the pmf's own mean, `3 - 2^-(n-2)`; kept only so the discrepancy can be
/// reported.
pub fn crown_b2_mean_printed(n: u32) -> Rational {
    Rational::from_integer(BigInt::from(3)) - pow2_inverse(n)
}

/// `Pr(C >= m) = 2^-(m-2)` for `2 <= m <= n`.
pub fn crown_b2_tail(n: u32, m: u32) -> Result<Rational> {
    if n < 2 || m < 2 || m > n {
        return Err(Error::InvalidParameter(format!(
            "crown tail needs 2 <= m <= n (got n={n}, m={m})"
        )));
    }
    Ok(pow2_inverse(m - 2))
}

/// Chromatic number of `K_{n,k}`: `n - 2k + 2` when `n >= 2k`, else 1.
pub fn kneser_chromatic(n: u32, k: u32) -> Result<u32> {
    if k == 0 || k > n {
        return Err(Error::InvalidParameter(format!(
            "kneser chromatic number needs 1 <= k <= n (got n={n}, k={k})"
        )));
    }
    Ok(if n >= 2 * k { n - 2 * k + 2 } else { 1 })
}

/// Colours used over the chromatic number, reduced.
pub fn performance_ratio(alg_colours: u32, chi: u32) -> Result<Rational> {
    if chi == 0 {
        return Err(Error::InvalidParameter(
            "chromatic number must be positive".into(),
        ));
    }
    if alg_colours < chi {
        return Err(Error::InvalidParameter(format!(
            "{alg_colours} colours cannot undercut chromatic number {chi}"
        )));
    }
    Ok(Rational::new(BigInt::from(alg_colours), BigInt::from(chi)))
}

/// Class-level ratio: the maximum of [`performance_ratio`] over `(colours, chi)` pairs.
pub fn class_performance_ratio<I>(pairs: I) -> Result<Option<Rational>>
where
    I: IntoIterator<Item = (u32, u32)>,
{
    let mut best: Option<Rational> = None;
    for (alg, chi) in pairs {
        let r = performance_ratio(alg, chi)?;
        if best.as_ref().is_none_or(|b| r > *b) {
            best = Some(r);
        }
    }
    Ok(best)
}

/// Binary iterated logarithm: the number of times `log2` must be applied to
/// `n` before the value is at most 1.
pub fn iterated_log2(n: u64) -> Result<u32> {
    if n == 0 {
        return Err(Error::InvalidParameter(
            "iterated logarithm needs n >= 1".into(),
        ));
    }
    // k-fold log2(n) <= 1 exactly when n <= tower(k), tower(0) = 1,
    // tower(k) = 2^tower(k-1).
    let mut tower: u64 = 1;
    let mut k = 0;
    while n > tower {
        k += 1;
        tower = if tower >= 64 { u64::MAX } else { 1u64 << tower };
    }
    Ok(k)
}

/// The `2 log*_2 n` colour bound for online colouring of bipartite graphs.
pub fn bipartite_online_bound(n: u64) -> Result<u32> {
    Ok(2 * iterated_log2(n)?)
}
