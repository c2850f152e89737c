//! Height functions for unitary subgroups of the rationals.
//!
//! A unitary subgroup `A ≤ ℚ` (one containing 1) is described by its height
//! function: for each prime `p`, the largest `α` with `1/p^α ∈ A`, possibly
//! infinite. Only finitely supported height functions are representable; the
//! unrepresented case (infinitely many primes of positive height) is noted on
//! [`classify_in_neighbour_cardinality`].
//!
//! Text format, one entry per line: `<prime>: <value>` where value is a
//! decimal natural or `inf`. Absent primes have height zero.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive};

use crate::arith::{factorize_u64, is_prime, valuation, ReducedRational};
use crate::error::{Error, Result};

/// Value of a height function at one prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum HeightValue {
    Finite(u32),
    Infinite,
}

impl HeightValue {
    pub fn is_infinite(self) -> bool {
        matches!(self, HeightValue::Infinite)
    }

    /// `self + k`, with `∞ + k = ∞`.
    pub fn add(self, k: u32) -> Self {
        match self {
            HeightValue::Finite(v) => HeightValue::Finite(v + k),
            HeightValue::Infinite => HeightValue::Infinite,
        }
    }

    /// Whether `p^exp` divides into the group, i.e. `exp ≤ self`.
    pub fn admits(self, exp: u64) -> bool {
        match self {
            HeightValue::Finite(v) => exp <= u64::from(v),
            HeightValue::Infinite => true,
        }
    }
}

impl fmt::Display for HeightValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HeightValue::Finite(v) => write!(f, "{v}"),
            HeightValue::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for HeightValue {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" => Ok(HeightValue::Infinite),
            t => t
                .parse::<u32>()
                .map(HeightValue::Finite)
                .map_err(|_| Error::Parse(format!("invalid height value {t:?}"))),
        }
    }
}

/// Finitely supported map from primes to heights; zeros are implicit.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct HeightFunction {
    support: BTreeMap<u64, HeightValue>,
}

impl HeightFunction {
    /// The all-zero height function, i.e. the subgroup ℤ.
    pub fn zero() -> Self {
        Self::default()
    }

    /// Builds a height function; zero entries are dropped, non-primes and
    /// repeated primes are rejected.
    pub fn from_entries(entries: impl IntoIterator<Item = (u64, HeightValue)>) -> Result<Self> {
        let mut support = BTreeMap::new();
        for (p, v) in entries {
            if !is_prime(p) {
                return Err(Error::NotPrime(p));
            }
            if support.contains_key(&p) {
                return Err(Error::Parse(format!("duplicate prime {p}")));
            }
            if v != HeightValue::Finite(0) {
                support.insert(p, v);
            }
        }
        Ok(Self { support })
    }

    pub fn get(&self, p: u64) -> HeightValue {
        self.support
            .get(&p)
            .copied()
            .unwrap_or(HeightValue::Finite(0))
    }

    /// Nonzero entries in increasing prime order.
    pub fn entries(&self) -> impl Iterator<Item = (u64, HeightValue)> + '_ {
        self.support.iter().map(|(&p, &v)| (p, v))
    }

    pub fn infinite_primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.entries().filter(|(_, v)| v.is_infinite()).map(|(p, _)| p)
    }

    pub fn is_zero(&self) -> bool {
        self.support.is_empty()
    }

    /// Sets the height at `p`, keeping the normal form.
    pub fn with(mut self, p: u64, v: HeightValue) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if v == HeightValue::Finite(0) {
            self.support.remove(&p);
        } else {
            self.support.insert(p, v);
        }
        Ok(self)
    }

    /// Compact single-line form used inside group descriptors: `2:inf,3:2`.
    pub fn inline(&self) -> String {
        self.entries()
            .map(|(p, v)| format!("{p}:{v}"))
            .collect::<Vec<_>>()
            .join(",")
    }

    /// Parses the [`inline`](Self::inline) form.
    pub fn parse_inline(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Self::zero());
        }
        parse_entries(s.split(','), true)
    }
}

fn parse_entries<'a>(items: impl Iterator<Item = &'a str>, reject_zero: bool) -> Result<HeightFunction> {
    let mut entries = Vec::new();
    for item in items {
        let item = item.trim();
        if item.is_empty() || item.starts_with('#') {
            continue;
        }
        let (p, v) = item
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("expected \"<prime>: <value>\", got {item:?}")))?;
        let p: u64 = p
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("invalid prime {:?}", p.trim())))?;
        let v: HeightValue = v.parse()?;
        if reject_zero && v == HeightValue::Finite(0) {
            return Err(Error::Parse(format!("zero entry for prime {p}")));
        }
        entries.push((p, v));
    }
    HeightFunction::from_entries(entries)
}

impl fmt::Display for HeightFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (p, v) in self.entries() {
            writeln!(f, "{p}: {v}")?;
        }
        Ok(())
    }
}

impl FromStr for HeightFunction {
    type Err = Error;

    /// Parses the line-oriented file format. Blank lines and `#` comments are skipped.
    fn from_str(s: &str) -> Result<Self> {
        parse_entries(s.lines(), true)
    }
}

/// Height function of `G_p`, the rationals whose denominator is a power of `p`.
pub fn g_p(p: u64) -> Result<HeightFunction> {
    HeightFunction::zero().with(p, HeightValue::Infinite)
}

/// `m·h`: adds the exponent of each prime factor of `m` to `h` at that prime.
pub fn scale(h: &HeightFunction, m: i64) -> Result<HeightFunction> {
    if m <= 0 {
        return Err(Error::NonPositive);
    }
    let mut out = h.clone();
    for &(p, e) in factorize_u64(m as u64).pairs() {
        let v = out.get(p).add(e as u32);
        out = out.with(p, v)?;
    }
    Ok(out)
}

/// Multipliers `m`, `n` with `m·h = n·f`, as reconstructed by [`equivalence_witness`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalenceWitness {
    pub m: BigUint,
    pub n: BigUint,
}

impl fmt::Display for EquivalenceWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "m={}, n={}", self.m, self.n)
    }
}

/// Decides `h ≡ f` by difference analysis and reconstructs the minimal `m`, `n`.
///
/// The infinite primes must coincide; at every other prime the difference is
/// a finite integer, whose positive part goes into `m` and negative part into `n`.
pub fn equivalence_witness(h: &HeightFunction, f: &HeightFunction) -> Option<EquivalenceWitness> {
    let mut m = BigUint::one();
    let mut n = BigUint::one();
    let primes: std::collections::BTreeSet<u64> =
        h.support.keys().chain(f.support.keys()).copied().collect();
    for p in primes {
        match (h.get(p), f.get(p)) {
            (HeightValue::Infinite, HeightValue::Infinite) => {}
            (HeightValue::Finite(a), HeightValue::Finite(b)) => {
                let pp = BigUint::from(p);
                if b > a {
                    m *= num_traits::pow(pp, (b - a) as usize);
                } else if a > b {
                    n *= num_traits::pow(pp, (a - b) as usize);
                }
            }
            _ => return None,
        }
    }
    Some(EquivalenceWitness { m, n })
}

/// `h ≡ f`: there are positive integers `m`, `n` with `m·h = n·f`.
pub fn equivalent(h: &HeightFunction, f: &HeightFunction) -> bool {
    equivalence_witness(h, f).is_some()
}

/// Whether the unitary subgroups described by `a` and `b` are isomorphic.
pub fn subgroups_isomorphic(a: &HeightFunction, b: &HeightFunction) -> bool {
    equivalent(a, b)
}

/// Cardinality class of in-neighbourhoods `I(x)`, uniform over non-identity `x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InNeighbourCardinality {
    AllFinite,
    AllInfinite,
}

/// `I(x)` is infinite for every non-identity `x` iff some prime has infinite
/// height, or infinitely many primes have positive height. The second case
/// has no finite-support representation, so `AllFinite` here is relative to
/// the representation.
pub fn classify_in_neighbour_cardinality(h: &HeightFunction) -> InNeighbourCardinality {
    if h.infinite_primes().next().is_some() {
        InNeighbourCardinality::AllInfinite
    } else {
        InNeighbourCardinality::AllFinite
    }
}

/// Membership of `x` in the unitary subgroup described by `h`.
pub fn contains(h: &HeightFunction, x: &ReducedRational) -> bool {
    if x.is_integer() {
        return true;
    }
    // Denominators beyond trial-division range are treated as non-members.
    let Some(den) = x.denom().to_u64() else {
        return false;
    };
    factorize_u64(den)
        .pairs()
        .iter()
        .all(|&(p, e)| h.get(p).admits(e as u64))
}

/// The isomorphism `G_p → G_q` induced by the prime transposition `(p q)`.
///
/// Exchanges the exponents of `p` and `q` in `x`, keeping sign and every other
/// prime; `0 ↦ 0`.
pub fn prime_swap_iso(p: u64, q: u64, x: &ReducedRational) -> Result<ReducedRational> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if !is_prime(q) {
        return Err(Error::NotPrime(q));
    }
    if p == q {
        return Err(Error::SamePrime);
    }
    if !contains(&g_p(p)?, x) {
        return Err(Error::OutsideDomain);
    }
    Ok(swap_prime_exponents(p, q, x))
}

/// Applies the transposition `(p q)` to the prime factorization of `x`.
pub(crate) fn swap_prime_exponents(p: u64, q: u64, x: &ReducedRational) -> ReducedRational {
    if x.is_zero() {
        return ReducedRational::zero();
    }
    let vp = valuation(x, p).expect("nonzero x, prime p");
    let vq = valuation(x, q).expect("nonzero x, prime q");
    let shift = (vq - vp) as i32;
    let bp = ReducedRational::from_integer(BigInt::from(p));
    let bq = ReducedRational::from_integer(BigInt::from(q));
    let factor = &bp.checked_pow(shift).expect("p nonzero") * &bq.checked_pow(-shift).expect("q nonzero");
    x * &factor
}
