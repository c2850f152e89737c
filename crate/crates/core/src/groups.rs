//! Group descriptors and element semantics.
//!
//! Groups are written additively, so "`y` is a power of `x`" reads `y = n·x`
//! for some nonzero integer `n`. The relation used for S-sets is reflexive:
//! every element is related to itself via `n = 1`. The simple power graph
//! still has no loops, since [`adjacent`] requires distinct vertices.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::arith::{gcd_vector, ReducedRational};
use crate::error::{Error, Result};
use crate::heights::{self, HeightFunction};

/// The ambient group of a power graph.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GroupDescriptor {
    Z,
    Zn(usize),
    Q,
    Qn(usize),
    /// The unitary subgroup of ℚ with this height function.
    Unitary(HeightFunction),
    /// Only used for the small finite example; torsion-free operations reject it.
    FiniteCyclic(u64),
}

/// A group element; which variant is valid depends on the descriptor.
///
/// The derived order compares integers and rationals by value and vectors
/// lexicographically; it is the canonical vertex order of every window.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Element {
    Int(BigInt),
    IntVec(Vec<BigInt>),
    Rat(ReducedRational),
    RatVec(Vec<ReducedRational>),
    Residue(u64),
}

impl Element {
    pub fn int(n: i64) -> Self {
        Element::Int(BigInt::from(n))
    }

    pub fn int_vec(v: &[i64]) -> Self {
        Element::IntVec(v.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn rat(n: i64, d: i64) -> Self {
        Element::Rat(ReducedRational::new(n, d).expect("nonzero denominator"))
    }

    pub fn rat_vec(v: &[(i64, i64)]) -> Self {
        Element::RatVec(
            v.iter()
                .map(|&(n, d)| ReducedRational::new(n, d).expect("nonzero denominator"))
                .collect(),
        )
    }

    pub fn is_identity(&self) -> bool {
        match self {
            Element::Int(n) => n.is_zero(),
            Element::IntVec(v) => v.iter().all(Zero::is_zero),
            Element::Rat(r) => r.is_zero(),
            Element::RatVec(v) => v.iter().all(ReducedRational::is_zero),
            Element::Residue(r) => *r == 0,
        }
    }

    /// Largest absolute numerator or denominator over all coordinates.
    pub fn magnitude(&self) -> BigInt {
        let rat = |r: &ReducedRational| r.numer().abs().max(r.denom().clone());
        match self {
            Element::Int(n) => n.abs(),
            Element::IntVec(v) => v.iter().map(Signed::abs).max().unwrap_or_default(),
            Element::Rat(r) => rat(r),
            Element::RatVec(v) => v.iter().map(rat).max().unwrap_or_default(),
            Element::Residue(r) => BigInt::from(*r),
        }
    }

    pub fn as_rational(&self) -> Option<&ReducedRational> {
        match self {
            Element::Rat(r) => Some(r),
            _ => None,
        }
    }

    pub fn as_int(&self) -> Option<&BigInt> {
        match self {
            Element::Int(n) => Some(n),
            _ => None,
        }
    }
}

fn join<T: fmt::Display>(f: &mut fmt::Formatter<'_>, v: &[T]) -> fmt::Result {
    f.write_str("(")?;
    for (i, x) in v.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{x}")?;
    }
    f.write_str(")")
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Int(n) => write!(f, "{n}"),
            Element::IntVec(v) => join(f, v),
            Element::Rat(r) => write!(f, "{r}"),
            Element::RatVec(v) => join(f, v),
            Element::Residue(r) => write!(f, "{r}"),
        }
    }
}

impl fmt::Display for GroupDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupDescriptor::Z => f.write_str("Z"),
            GroupDescriptor::Zn(n) => write!(f, "Z^{n}"),
            GroupDescriptor::Q => f.write_str("Q"),
            GroupDescriptor::Qn(n) => write!(f, "Q^{n}"),
            GroupDescriptor::Unitary(h) => write!(f, "U[{}]", h.inline()),
            GroupDescriptor::FiniteCyclic(k) => write!(f, "C{k}"),
        }
    }
}

impl FromStr for GroupDescriptor {
    type Err = Error;

    /// Parses `Z`, `Z^n`, `Q`, `Q^n`, `U[2:inf,3:1]` and `Ck`. File-backed
    /// unitary descriptors (`U:<path>`) are resolved by the caller.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("invalid group descriptor {s:?}"));
        let dim = |t: &str| -> Result<usize> {
            match t.parse::<usize>() {
                Ok(n) if n >= 1 => Ok(n),
                _ => Err(bad()),
            }
        };
        match s {
            "Z" => Ok(GroupDescriptor::Z),
            "Q" => Ok(GroupDescriptor::Q),
            _ => {
                if let Some(n) = s.strip_prefix("Z^") {
                    Ok(GroupDescriptor::Zn(dim(n)?))
                } else if let Some(n) = s.strip_prefix("Q^") {
                    Ok(GroupDescriptor::Qn(dim(n)?))
                } else if let Some(inner) = s.strip_prefix("U[").and_then(|t| t.strip_suffix(']')) {
                    Ok(GroupDescriptor::Unitary(HeightFunction::parse_inline(inner)?))
                } else if let Some(k) = s.strip_prefix('C') {
                    match k.parse::<u64>() {
                        Ok(k) if k >= 1 => Ok(GroupDescriptor::FiniteCyclic(k)),
                        _ => Err(bad()),
                    }
                } else {
                    Err(bad())
                }
            }
        }
    }
}

impl GroupDescriptor {
    pub fn is_torsion_free(&self) -> bool {
        !matches!(self, GroupDescriptor::FiniteCyclic(_))
    }

    pub fn identity(&self) -> Element {
        match self {
            GroupDescriptor::Z => Element::Int(BigInt::zero()),
            GroupDescriptor::Zn(n) => Element::IntVec(vec![BigInt::zero(); *n]),
            GroupDescriptor::Q | GroupDescriptor::Unitary(_) => Element::Rat(ReducedRational::zero()),
            GroupDescriptor::Qn(n) => Element::RatVec(vec![ReducedRational::zero(); *n]),
            GroupDescriptor::FiniteCyclic(_) => Element::Residue(0),
        }
    }

    fn mismatch(&self, x: &Element) -> Error {
        Error::ElementMismatch {
            element: x.to_string(),
            group: self.to_string(),
        }
    }

    /// Checks that `x` is an element of this group.
    pub fn validate(&self, x: &Element) -> Result<()> {
        let ok = match (self, x) {
            (GroupDescriptor::Z, Element::Int(_)) | (GroupDescriptor::Q, Element::Rat(_)) => true,
            (GroupDescriptor::Zn(n), Element::IntVec(v)) => v.len() == *n,
            (GroupDescriptor::Qn(n), Element::RatVec(v)) => v.len() == *n,
            (GroupDescriptor::Unitary(h), Element::Rat(r)) => heights::contains(h, r),
            (GroupDescriptor::FiniteCyclic(k), Element::Residue(r)) => r < k,
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(self.mismatch(x))
        }
    }

    /// Parses a canonical element string for this group and validates it.
    pub fn parse_element(&self, s: &str) -> Result<Element> {
        let s = s.trim();
        let bad = || Error::Parse(format!("invalid element {s:?} for group {self}"));
        let int = |t: &str| t.trim().parse::<BigInt>().map_err(|_| bad());
        fn tuple(t: &str) -> Option<Vec<&str>> {
            let inner = t.strip_prefix('(')?.strip_suffix(')')?;
            Some(inner.split(',').collect())
        }
        let x = match self {
            GroupDescriptor::Z => Element::Int(int(s)?),
            GroupDescriptor::Q | GroupDescriptor::Unitary(_) => Element::Rat(s.parse()?),
            GroupDescriptor::Zn(_) => {
                Element::IntVec(tuple(s).ok_or_else(bad)?.into_iter().map(int).collect::<Result<_>>()?)
            }
            GroupDescriptor::Qn(_) => Element::RatVec(
                tuple(s)
                    .ok_or_else(bad)?
                    .into_iter()
                    .map(str::parse)
                    .collect::<Result<_>>()?,
            ),
            GroupDescriptor::FiniteCyclic(_) => {
                Element::Residue(s.parse::<u64>().map_err(|_| bad())?)
            }
        };
        self.validate(&x)?;
        Ok(x)
    }
}

/// Integer `n` with `y = n·x` along the first nonzero coordinate, if the
/// vectors are proportional with integral ratio.
fn int_vec_ratio(x: &[BigInt], y: &[BigInt]) -> Option<BigInt> {
    let i = x.iter().position(|c| !c.is_zero())?;
    let (n, r) = y[i].div_rem(&x[i]);
    if !r.is_zero() {
        return None;
    }
    x.iter().zip(y).all(|(a, b)| a * &n == *b).then_some(n)
}

fn rat_vec_ratio(x: &[ReducedRational], y: &[ReducedRational]) -> Option<ReducedRational> {
    let i = x.iter().position(|c| !c.is_zero())?;
    let t = y[i].checked_div(&x[i])?;
    x.iter().zip(y).all(|(a, b)| &(a * &t) == b).then_some(t)
}

/// Arc relation without validation. Callers guarantee both elements belong to `g`.
pub(crate) fn arc_unchecked(g: &GroupDescriptor, x: &Element, y: &Element) -> bool {
    if x == y {
        return true;
    }
    match (x, y) {
        (Element::Int(a), Element::Int(b)) => !a.is_zero() && !b.is_zero() && b.is_multiple_of(a),
        (Element::IntVec(a), Element::IntVec(b)) => {
            int_vec_ratio(a, b).is_some_and(|n| !n.is_zero())
        }
        (Element::Rat(a), Element::Rat(b)) => {
            !a.is_zero() && !b.is_zero() && b.checked_div(a).is_some_and(|q| q.is_integer())
        }
        (Element::RatVec(a), Element::RatVec(b)) => {
            rat_vec_ratio(a, b).is_some_and(|t| !t.is_zero() && t.is_integer())
        }
        (Element::Residue(a), Element::Residue(b)) => {
            let GroupDescriptor::FiniteCyclic(k) = g else {
                return false;
            };
            // y ∈ ⟨x⟩ in ℤ/k iff gcd(x, k) divides y.
            b % a.gcd(k) == 0
        }
        _ => false,
    }
}

/// `x → y`: some nonzero integer `n` has `y = n·x`. Reflexive (`n = 1`).
pub fn arc(g: &GroupDescriptor, x: &Element, y: &Element) -> Result<bool> {
    g.validate(x)?;
    g.validate(y)?;
    Ok(arc_unchecked(g, x, y))
}

/// Power-graph adjacency of two distinct elements.
pub fn adjacent(g: &GroupDescriptor, x: &Element, y: &Element) -> Result<bool> {
    g.validate(x)?;
    g.validate(y)?;
    if x == y {
        return Err(Error::SameVertex);
    }
    Ok(arc_unchecked(g, x, y) || arc_unchecked(g, y, x))
}

/// Reflexive closure of adjacency, the `~` used inside S-sets.
pub fn related(g: &GroupDescriptor, x: &Element, y: &Element) -> Result<bool> {
    g.validate(x)?;
    g.validate(y)?;
    Ok(related_unchecked(g, x, y))
}

pub(crate) fn related_unchecked(g: &GroupDescriptor, x: &Element, y: &Element) -> bool {
    arc_unchecked(g, x, y) || arc_unchecked(g, y, x)
}

/// Membership in the unitary subgroup described by `h`.
pub fn contains(h: &HeightFunction, x: &ReducedRational) -> bool {
    heights::contains(h, x)
}

/// The group inverse.
pub fn negate(g: &GroupDescriptor, x: &Element) -> Result<Element> {
    g.validate(x)?;
    Ok(match x {
        Element::Int(n) => Element::Int(-n),
        Element::IntVec(v) => Element::IntVec(v.iter().map(|c| -c).collect()),
        Element::Rat(r) => Element::Rat(-r),
        Element::RatVec(v) => Element::RatVec(v.iter().map(|c| -c).collect()),
        Element::Residue(r) => {
            let GroupDescriptor::FiniteCyclic(k) = g else {
                unreachable!("validated residue");
            };
            Element::Residue((k - r) % k)
        }
    })
}

/// Primitive generator `x/gcd(x)` of the unique maximal cyclic subgroup of ℤⁿ containing `x`.
pub fn maximal_cyclic_generator(g: &GroupDescriptor, x: &Element) -> Result<Element> {
    let GroupDescriptor::Zn(_) = g else {
        return Err(Error::Unsupported {
            op: "maximal_cyclic_generator",
            group: g.to_string(),
        });
    };
    g.validate(x)?;
    let Element::IntVec(v) = x else {
        unreachable!("validated vector");
    };
    let d = gcd_vector(v)?;
    if d.is_zero() {
        return Err(Error::IdentityGenerator);
    }
    Ok(Element::IntVec(v.iter().map(|c| c / &d).collect()))
}

/// Whether non-identity `x` and `y` lie in the same connected component of
/// the power graph with the identity removed.
pub fn same_component(g: &GroupDescriptor, x: &Element, y: &Element) -> Result<bool> {
    g.validate(x)?;
    g.validate(y)?;
    if !g.is_torsion_free() {
        return Err(Error::Unsupported {
            op: "same_component",
            group: g.to_string(),
        });
    }
    if x.is_identity() || y.is_identity() {
        return Err(Error::IdentityComponent);
    }
    Ok(match (x, y) {
        (Element::IntVec(_), Element::IntVec(_)) => {
            let gx = maximal_cyclic_generator(g, x)?;
            let gy = maximal_cyclic_generator(g, y)?;
            gx == gy || gx == negate(g, &gy)?
        }
        (Element::RatVec(a), Element::RatVec(b)) => rat_vec_ratio(a, b).is_some(),
        _ => true,
    })
}
