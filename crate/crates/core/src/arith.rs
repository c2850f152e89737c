//! Exact integer and rational primitives.
//!
//! [`ReducedRational`] is the coordinate type for every rational element. It is
//! always in lowest terms with the sign carried by the numerator, so its
//! canonical string (`"n"` or `"n/d"`) is a unique vertex label.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::OnceLock;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// An exact fraction in lowest terms with positive denominator.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ReducedRational(BigRational);

impl ReducedRational {
    pub fn zero() -> Self {
        Self(BigRational::zero())
    }

    pub fn one() -> Self {
        Self(BigRational::one())
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Self(BigRational::from_integer(n.into()))
    }

    /// Builds `numer/denom`, reducing to lowest terms.
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Result<Self> {
        reduce(&numer.into(), &denom.into())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(&self) -> Self {
        Self(self.0.abs())
    }

    /// `self / other`, or `None` when `other` is zero.
    pub fn checked_div(&self, other: &Self) -> Option<Self> {
        if other.is_zero() {
            None
        } else {
            Some(Self(&self.0 / &other.0))
        }
    }

    /// `self^exp`; `None` for a negative power of zero.
    pub fn checked_pow(&self, exp: i32) -> Option<Self> {
        if exp < 0 && self.is_zero() {
            return None;
        }
        Some(Self(num_traits::Pow::pow(&self.0, exp)))
    }

    /// Returns the integer `n` with `self = n * base`, if one exists.
    pub fn integer_ratio(&self, base: &Self) -> Option<BigInt> {
        let q = self.checked_div(base)?;
        q.is_integer().then(|| q.numer().clone())
    }

    pub fn as_big_rational(&self) -> &BigRational {
        &self.0
    }
}

impl From<BigRational> for ReducedRational {
    fn from(r: BigRational) -> Self {
        // Ratio::new already normalises, but values built with new_raw may not be.
        Self(BigRational::new(r.numer().clone(), r.denom().clone()))
    }
}

impl From<i64> for ReducedRational {
    fn from(n: i64) -> Self {
        Self::from_integer(n)
    }
}

impl fmt::Display for ReducedRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl FromStr for ReducedRational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let parse_int = |t: &str| {
            t.trim()
                .parse::<BigInt>()
                .map_err(|_| Error::Parse(format!("invalid rational {s:?}")))
        };
        match s.split_once('/') {
            None => Ok(Self::from_integer(parse_int(s)?)),
            Some((n, d)) => reduce(&parse_int(n)?, &parse_int(d)?),
        }
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<&ReducedRational> for &ReducedRational {
            type Output = ReducedRational;
            fn $method(self, rhs: &ReducedRational) -> ReducedRational {
                ReducedRational((&self.0).$method(&rhs.0))
            }
        }
        impl $tr for ReducedRational {
            type Output = ReducedRational;
            fn $method(self, rhs: ReducedRational) -> ReducedRational {
                ReducedRational(self.0.$method(rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Neg for &ReducedRational {
    type Output = ReducedRational;
    fn neg(self) -> ReducedRational {
        ReducedRational(-&self.0)
    }
}

impl Neg for ReducedRational {
    type Output = ReducedRational;
    fn neg(self) -> ReducedRational {
        ReducedRational(-self.0)
    }
}

/// Returns the lowest-terms representative of `numer/denom` with positive denominator.
pub fn reduce(numer: &BigInt, denom: &BigInt) -> Result<ReducedRational> {
    if denom.is_zero() {
        return Err(Error::ZeroDenominator);
    }
    Ok(ReducedRational(BigRational::new(numer.clone(), denom.clone())))
}

/// Prime factorization as `(prime, exponent)` pairs with strictly increasing primes.
///
/// Exponents are never zero; they are negative for primes of a denominator.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Factorization(Vec<(u64, i64)>);

impl Factorization {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a factorization from arbitrary pairs, merging repeated primes and
    /// dropping zero exponents.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (u64, i64)>) -> Self {
        let mut v: Vec<(u64, i64)> = pairs.into_iter().collect();
        v.sort_unstable_by_key(|&(p, _)| p);
        let mut out: Vec<(u64, i64)> = Vec::with_capacity(v.len());
        for (p, e) in v {
            match out.last_mut() {
                Some((q, acc)) if *q == p => *acc += e,
                _ => out.push((p, e)),
            }
        }
        out.retain(|&(_, e)| e != 0);
        Self(out)
    }

    pub fn pairs(&self) -> &[(u64, i64)] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponent(&self, p: u64) -> i64 {
        self.0
            .binary_search_by_key(&p, |&(q, _)| q)
            .map(|i| self.0[i].1)
            .unwrap_or(0)
    }

    /// Exponent-wise sum, the factorization of the product.
    pub fn merge(&self, other: &Self) -> Self {
        Self::from_pairs(self.0.iter().chain(other.0.iter()).copied())
    }

    /// The (positive) rational `∏ p^e`.
    pub fn value(&self) -> ReducedRational {
        let mut num = BigInt::one();
        let mut den = BigInt::one();
        for &(p, e) in &self.0 {
            let pp = num_traits::pow(BigInt::from(p), e.unsigned_abs() as usize);
            if e > 0 {
                num *= pp;
            } else {
                den *= pp;
            }
        }
        ReducedRational(BigRational::new(num, den))
    }
}

const SIEVE_LIMIT: u64 = 1 << 16;

fn small_primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| primes_up_to(SIEVE_LIMIT))
}

/// Sieve of Eratosthenes.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        out.push(i as u64);
        let mut j = i * i;
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n <= SIEVE_LIMIT {
        return small_primes().binary_search(&n).is_ok();
    }
    let f = factorize_u64(n);
    f.0.len() == 1 && f.0[0].1 == 1
}

/// Trial-division factorization of a positive machine integer.
pub fn factorize_u64(mut n: u64) -> Factorization {
    let mut out = Vec::new();
    for &p in small_primes() {
        if p.saturating_mul(p) > n {
            break;
        }
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    }
    // Continue past the sieve with odd candidates for inputs above 2^32.
    let mut d = SIEVE_LIMIT + 1;
    while d.saturating_mul(d) <= n {
        let mut e = 0;
        while n % d == 0 {
            n /= d;
            e += 1;
        }
        if e > 0 {
            out.push((d, e));
        }
        d += 2;
    }
    if n > 1 {
        out.push((n, 1));
    }
    Factorization(out)
}

fn to_u64(n: &BigInt) -> Result<u64> {
    n.to_u64().ok_or_else(|| Error::TooLarge(n.to_string()))
}

/// Factorizes a positive integer.
pub fn factorize(n: &BigInt) -> Result<Factorization> {
    if !n.is_positive() {
        return Err(Error::NonPositive);
    }
    Ok(factorize_u64(to_u64(n)?))
}

/// Sign and factorization of a nonzero rational, with negative exponents for
/// denominator primes.
pub fn factorize_rational(x: &ReducedRational) -> Result<(Sign, Factorization)> {
    if x.is_zero() {
        return Err(Error::ValuationOfZero);
    }
    let num = factorize(&x.numer().abs())?;
    let den = factorize(x.denom())?;
    let pairs = num
        .0
        .iter()
        .copied()
        .chain(den.0.iter().map(|&(p, e)| (p, -e)));
    Ok((x.numer().sign(), Factorization::from_pairs(pairs)))
}

/// The exponent of `p` in `x`; negative when `p` divides the denominator.
pub fn valuation(x: &ReducedRational, p: u64) -> Result<i64> {
    if x.is_zero() {
        return Err(Error::ValuationOfZero);
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let bp = BigInt::from(p);
    let count = |n: &BigInt| {
        let mut n = n.abs();
        let mut e = 0i64;
        loop {
            let (q, r) = n.div_rem(&bp);
            if !r.is_zero() {
                return e;
            }
            n = q;
            e += 1;
        }
    };
    Ok(count(x.numer()) - count(x.denom()))
}

/// gcd of the absolute values; zero iff every entry is zero.
pub fn gcd_vector(a: &[BigInt]) -> Result<BigInt> {
    if a.is_empty() {
        return Err(Error::Empty);
    }
    Ok(a.iter().fold(BigInt::zero(), |g, x| g.gcd(x)))
}

/// All positive divisors of a positive machine integer, ascending.
pub fn divisors_u64(n: u64) -> Vec<u64> {
    let mut divs = vec![1u64];
    for &(p, e) in factorize_u64(n).pairs() {
        let current = divs.clone();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            divs.extend(current.iter().map(|d| d * pk));
        }
    }
    divs.sort_unstable();
    divs
}
