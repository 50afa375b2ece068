//! Closed-form counts of diagrams.

use crate::error::{Error, Result};
use crate::scalar::{self, Scalar};

const CTX: &str = "diagram counts";

fn pow2<T: Scalar>(k: usize) -> Result<T> {
    let two = T::lit(2);
    let mut acc = T::one();
    for _ in 0..k {
        acc = scalar::mul(&acc, &two, CTX)?;
    }
    Ok(acc)
}

pub fn binomial<T: Scalar>(n: usize, k: usize) -> Result<T> {
    if k > n {
        return Ok(T::zero());
    }
    let k = k.min(n - k);
    let mut acc = T::one();
    for i in 0..k {
        // acc * (n - i) is divisible by (i + 1) at every step.
        acc = scalar::mul(&acc, &T::lit((n - i) as i64), CTX)? / T::lit(i as i64 + 1);
    }
    Ok(acc)
}

/// `C_k = binom(2k, k) / (k + 1)`.
pub fn catalan<T: Scalar>(k: usize) -> Result<T> {
    Ok(binomial::<T>(2 * k, k)? / T::lit(k as i64 + 1))
}

/// `N(g) = Σ_k binom(g, k) C_k`, the number of almost-special diagrams.
pub fn count_almost_special<T: Scalar>(g: usize) -> Result<T> {
    let mut acc = T::zero();
    for k in 0..=g {
        let term = scalar::mul(&binomial::<T>(g, k)?, &catalan::<T>(k)?, CTX)?;
        acc = scalar::add(&acc, &term, CTX)?;
    }
    Ok(acc)
}

/// `n(g) = (2^g + 1)(2^{g−1} + 1) / 3`, the number of special diagrams.
pub fn count_special<T: Scalar>(g: usize) -> Result<T> {
    if g == 0 {
        // (1 + 1)(1/2 + 1)/3 = 1
        return Ok(T::one());
    }
    let a = scalar::add(&pow2::<T>(g)?, &T::one(), CTX)?;
    let b = scalar::add(&pow2::<T>(g - 1)?, &T::one(), CTX)?;
    Ok(scalar::mul(&a, &b, CTX)? / T::lit(3))
}

/// `m(g) = (2^{g−1} + (−1)^g) / 3` irreducible special diagrams, `g ≥ 1`.
/// The formula does not cover `g = 0`; see [`count_irreducible_special_conv`].
pub fn count_irreducible_special<T: Scalar>(g: usize) -> Result<T> {
    if g == 0 {
        return Err(Error::InvalidGenus {
            genus: 0,
            reason: "the irreducible-count formula starts at g = 1; m(0) = 1 by convention",
        });
    }
    let sign = if g.is_multiple_of(2) { T::one() } else { -T::one() };
    Ok(scalar::add(&pow2::<T>(g - 1)?, &sign, CTX)? / T::lit(3))
}

/// `m` with the convention `m(0) = 1` used by the iterated sum.
pub fn count_irreducible_special_conv<T: Scalar>(g: usize) -> Result<T> {
    if g == 0 {
        Ok(T::one())
    } else {
        count_irreducible_special(g)
    }
}

/// `Σ_k Σ_l binom(g, k) binom(g − k, l) m(g − k − l)`: choose the uncircled
/// punctures, then the singleton blocks, then an irreducible core.
pub fn count_special_iterated<T: Scalar>(g: usize) -> Result<T> {
    let mut acc = T::zero();
    for k in 0..=g {
        for l in 0..=g - k {
            let term = scalar::mul(
                &scalar::mul(&binomial::<T>(g, k)?, &binomial::<T>(g - k, l)?, CTX)?,
                &count_irreducible_special_conv::<T>(g - k - l)?,
                CTX,
            )?;
            acc = scalar::add(&acc, &term, CTX)?;
        }
    }
    Ok(acc)
}
