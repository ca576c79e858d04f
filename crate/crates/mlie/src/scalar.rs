//! Exact rational scalars and the small amount of arithmetic glue used everywhere.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Arbitrary-precision rational. Every coefficient and group parameter is one of these.
pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

pub fn qz() -> Q {
    Q::zero()
}

pub fn q1() -> Q {
    Q::one()
}

/// `s^e` for any integer exponent; `s` must be nonzero when `e < 0`.
pub fn qpow(s: &Q, e: i64) -> Q {
    if e >= 0 {
        num_traits::pow(s.clone(), e as usize)
    } else {
        num_traits::pow(s.recip(), (-e) as usize)
    }
}

/// Binomial coefficient with the convention `binom(n, k) = 0` outside `0 <= k <= n`.
pub fn binom(n: i64, k: i64) -> BigInt {
    if k < 0 || n < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

pub fn qbinom(n: i64, k: i64) -> Q {
    Q::from_integer(binom(n, k))
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

pub fn sign(e: i64) -> Q {
    if e.rem_euclid(2) == 0 {
        q1()
    } else {
        -q1()
    }
}

/// Renders `n` or `n/d`, the format accepted by [`parse_q`].
pub fn fmt_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(Q::new(n, d))
            }
        }
        None => s.parse::<BigInt>().ok().map(Q::from_integer),
    }
}

/// Integer value of an integral rational that fits in `i64`.
pub fn to_i64(x: &Q) -> Option<i64> {
    use num_traits::ToPrimitive;
    if x.is_integer() {
        x.numer().to_i64()
    } else {
        None
    }
}

pub fn is_neg(x: &Q) -> bool {
    x.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binom(5, 2), BigInt::from(10));
        assert_eq!(binom(3, 4), BigInt::zero());
        assert_eq!(binom(0, 0), BigInt::one());
    }

    #[test]
    fn rational_round_trip() {
        for s in ["0", "-7", "3/2", "-5/9"] {
            assert_eq!(fmt_q(&parse_q(s).unwrap()), s);
        }
        assert!(parse_q("1/0").is_none());
        assert_eq!(qpow(&qf(2, 3), -2), qf(9, 4));
    }
}
