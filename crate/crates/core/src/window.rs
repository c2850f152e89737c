//! Finite windows of infinite groups.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;

use crate::arith::ReducedRational;
use crate::error::{Error, Result};
use crate::groups::{negate, Element, GroupDescriptor};
use crate::heights;

/// Bounds of a window.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum WindowSpec {
    /// `|x| ≤ N` for ℤ, sup-norm `≤ N` for ℤⁿ.
    Bound(u64),
    /// Reduced `m/n` with `|m| ≤ num`, `1 ≤ n ≤ den`; componentwise for ℚⁿ.
    Fractions { num: u64, den: u64 },
    /// The whole (finite) group.
    All,
    /// An explicit vertex set.
    Custom,
}

impl fmt::Display for WindowSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WindowSpec::Bound(n) => write!(f, "bound:{n}"),
            WindowSpec::Fractions { num, den } => write!(f, "num:{num},den:{den}"),
            WindowSpec::All => f.write_str("all"),
            WindowSpec::Custom => f.write_str("custom"),
        }
    }
}

impl FromStr for WindowSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("invalid window spec {s:?}"));
        let num = |t: &str| t.parse::<u64>().map_err(|_| bad());
        match s.trim() {
            "all" => Ok(WindowSpec::All),
            "custom" => Ok(WindowSpec::Custom),
            t => {
                if let Some(n) = t.strip_prefix("bound:") {
                    Ok(WindowSpec::Bound(num(n)?))
                } else {
                    let (a, b) = t.split_once(',').ok_or_else(bad)?;
                    let a = a.strip_prefix("num:").ok_or_else(bad)?;
                    let b = b.strip_prefix("den:").ok_or_else(bad)?;
                    Ok(WindowSpec::Fractions { num: num(a)?, den: num(b)? })
                }
            }
        }
    }
}

/// A sorted, duplicate-free, negation-closed vertex set containing the identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Window {
    group: GroupDescriptor,
    spec: WindowSpec,
    elements: Vec<Element>,
}

impl Window {
    /// Wraps an explicit element set. Elements are validated, sorted and
    /// deduplicated; the set must contain the identity and be closed under negation.
    pub fn from_elements(group: GroupDescriptor, elements: impl IntoIterator<Item = Element>) -> Result<Self> {
        let set: BTreeSet<Element> = elements.into_iter().collect();
        for x in &set {
            group.validate(x)?;
        }
        if !set.contains(&group.identity()) {
            return Err(Error::WindowNotClosed);
        }
        for x in &set {
            if !set.contains(&negate(&group, x)?) {
                return Err(Error::WindowNotClosed);
            }
        }
        Ok(Self {
            group,
            spec: WindowSpec::Custom,
            elements: set.into_iter().collect(),
        })
    }

    pub fn group(&self) -> &GroupDescriptor {
        &self.group
    }

    pub fn spec(&self) -> &WindowSpec {
        &self.spec
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, x: &Element) -> bool {
        self.elements.binary_search(x).is_ok()
    }
}

/// Reduced fractions `m/n` with `|m| ≤ num`, `1 ≤ n ≤ den`, in increasing order.
fn fractions(num: u64, den: u64) -> Vec<ReducedRational> {
    let mut out = BTreeSet::new();
    for n in 1..=den {
        for m in -(num as i64)..=(num as i64) {
            if (m.unsigned_abs()).gcd(&n) == 1 || (m == 0 && n == 1) {
                out.insert(ReducedRational::new(m, n as i64).expect("n ≥ 1"));
            }
        }
    }
    out.into_iter().collect()
}

fn cartesian<T: Clone>(coords: &[T], dim: usize) -> Vec<Vec<T>> {
    let mut out: Vec<Vec<T>> = vec![Vec::with_capacity(dim)];
    for _ in 0..dim {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                coords.iter().map(move |c| {
                    let mut v = prefix.clone();
                    v.push(c.clone());
                    v
                })
            })
            .collect();
    }
    out
}

/// Enumerates the window `spec` of group `g` in canonical order.
///
/// For unitary subgroups the fraction bounds apply after reduction and only
/// members of the subgroup are kept.
pub fn build_window(g: &GroupDescriptor, spec: &WindowSpec) -> Result<Window> {
    let mismatch = || Error::WindowMismatch {
        spec: spec.to_string(),
        group: g.to_string(),
    };
    let ints = |n: u64| (-(n as i64)..=(n as i64)).map(BigInt::from).collect::<Vec<_>>();
    let mut elements: Vec<Element> = match (g, spec) {
        (GroupDescriptor::Z, WindowSpec::Bound(n)) => ints(*n).into_iter().map(Element::Int).collect(),
        (GroupDescriptor::Zn(d), WindowSpec::Bound(n)) => {
            cartesian(&ints(*n), *d).into_iter().map(Element::IntVec).collect()
        }
        (GroupDescriptor::Q, WindowSpec::Fractions { num, den }) => {
            fractions(*num, *den).into_iter().map(Element::Rat).collect()
        }
        (GroupDescriptor::Unitary(h), WindowSpec::Fractions { num, den }) => fractions(*num, *den)
            .into_iter()
            .filter(|r| heights::contains(h, r))
            .map(Element::Rat)
            .collect(),
        (GroupDescriptor::Qn(d), WindowSpec::Fractions { num, den }) => {
            cartesian(&fractions(*num, *den), *d)
                .into_iter()
                .map(Element::RatVec)
                .collect()
        }
        (GroupDescriptor::FiniteCyclic(k), WindowSpec::All) => (0..*k).map(Element::Residue).collect(),
        _ => return Err(mismatch()),
    };
    match spec {
        WindowSpec::Bound(n) if *n < 1 => return Err(mismatch()),
        WindowSpec::Fractions { num, den } if *num < 1 || *den < 1 => return Err(mismatch()),
        _ => {}
    }
    elements.sort();
    elements.dedup();
    Ok(Window {
        group: g.clone(),
        spec: spec.clone(),
        elements,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heights::g_p;

    fn strings(w: &Window) -> Vec<String> {
        w.elements().iter().map(ToString::to_string).collect()
    }

    #[test]
    fn z_window() {
        let w = build_window(&GroupDescriptor::Z, &WindowSpec::Bound(3)).unwrap();
        assert_eq!(strings(&w), ["-3", "-2", "-1", "0", "1", "2", "3"]);
    }

    #[test]
    fn unitary_window() {
        let g = GroupDescriptor::Unitary(g_p(2).unwrap());
        let w = build_window(&g, &WindowSpec::Fractions { num: 3, den: 4 }).unwrap();
        let mut expected: Vec<Element> = vec![Element::rat(0, 1)];
        for (n, d) in [(1, 1), (2, 1), (3, 1), (1, 2), (3, 2), (1, 4), (3, 4)] {
            expected.push(Element::rat(n, d));
            expected.push(Element::rat(-n, d));
        }
        expected.sort();
        assert_eq!(w.elements(), expected.as_slice());
    }

    #[test]
    fn cyclic_window() {
        let w = build_window(&GroupDescriptor::FiniteCyclic(6), &WindowSpec::All).unwrap();
        assert_eq!(strings(&w), ["0", "1", "2", "3", "4", "5"]);
    }

    #[test]
    fn vector_windows() {
        let w = build_window(&GroupDescriptor::Zn(2), &WindowSpec::Bound(1)).unwrap();
        assert_eq!(w.len(), 9);
        let w = build_window(&GroupDescriptor::Qn(2), &WindowSpec::Fractions { num: 3, den: 2 }).unwrap();
        assert_eq!(w.len(), 121);
    }

    #[test]
    fn windows_are_negation_closed_with_identity() {
        let cases = [
            (GroupDescriptor::Z, WindowSpec::Bound(5)),
            (GroupDescriptor::Zn(3), WindowSpec::Bound(2)),
            (GroupDescriptor::Q, WindowSpec::Fractions { num: 4, den: 6 }),
            (GroupDescriptor::Unitary(g_p(3).unwrap()), WindowSpec::Fractions { num: 7, den: 27 }),
        ];
        for (g, spec) in cases {
            let w = build_window(&g, &spec).unwrap();
            assert!(w.contains(&g.identity()));
            for x in w.elements() {
                assert!(w.contains(&negate(&g, x).unwrap()));
            }
            assert_eq!(Window::from_elements(g.clone(), w.elements().to_vec()).unwrap().elements(), w.elements());
        }
    }

    #[test]
    fn mismatched_specs() {
        assert!(build_window(&GroupDescriptor::Z, &WindowSpec::All).is_err());
        assert!(build_window(&GroupDescriptor::Q, &WindowSpec::Bound(3)).is_err());
        assert!(build_window(&GroupDescriptor::Z, &WindowSpec::Bound(0)).is_err());
        assert!(Window::from_elements(GroupDescriptor::Z, [Element::int(0), Element::int(1)]).is_err());
        assert!(Window::from_elements(GroupDescriptor::Z, [Element::int(1), Element::int(-1)]).is_err());
    }

    #[test]
    fn spec_strings() {
        for s in ["bound:3", "num:100,den:64", "all", "custom"] {
            assert_eq!(s.parse::<WindowSpec>().unwrap().to_string(), s);
        }
        assert!("bound".parse::<WindowSpec>().is_err());
    }
}
