//! Finite abelian groups given as products of cyclic factors, their elements,
//! homomorphisms, quotients and two-generator presentations.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::exact_linalg::{smith_normal_form, IntMatrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("cannot parse group specification {0:?}")]
    Parse(String),
    #[error("element {element} does not belong to {group}")]
    NotAnElement { element: String, group: String },
    #[error("homomorphism data is inconsistent: {0}")]
    BadHomomorphism(String),
    #[error("{m} and {n} do not form a two-generator presentation: {reason}")]
    NotTwoGenerated { m: String, n: String, reason: String },
    #[error("invalid two-degree presentation (r={r}, alpha={alpha}, N={n}): {reason}")]
    InvalidPresentation { r: u64, alpha: u64, n: u64, reason: String },
}

/// An element written in the coordinates of the cyclic factors.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupElement(pub Vec<u64>);

impl GroupElement {
    pub fn coords(&self) -> &[u64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0.as_slice() {
            [x] => write!(f, "{x}"),
            coords => {
                let parts: Vec<String> = coords.iter().map(|x| x.to_string()).collect();
                write!(f, "({})", parts.join(","))
            }
        }
    }
}

/// `Z/o_1 x ... x Z/o_k`. Elements are ordered lexicographically by their
/// coordinates, so the element with index 0 is the identity.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteAbelianGroup {
    orders: Vec<u64>,
    size: usize,
}

impl FiniteAbelianGroup {
    pub fn new(orders: Vec<u64>) -> Result<Self, GroupError> {
        if orders.iter().any(|&o| o == 0) {
            return Err(GroupError::Parse(format!("{orders:?}")));
        }
        let size = orders.iter().try_fold(1usize, |acc, &o| acc.checked_mul(o as usize));
        let size = size.ok_or_else(|| GroupError::Parse(format!("{orders:?} is too large")))?;
        Ok(FiniteAbelianGroup { orders, size })
    }

    pub fn cyclic(n: u64) -> Self {
        Self::new(vec![n]).expect("positive order")
    }

    /// Parses a comma separated list of cyclic orders such as `"2,4"`.
    pub fn parse(spec: &str) -> Result<Self, GroupError> {
        let spec = spec.trim();
        if spec.is_empty() {
            return Err(GroupError::Parse(spec.to_string()));
        }
        let orders = spec
            .split(',')
            .map(|s| s.trim().parse::<u64>().ok().filter(|&o| o > 0))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| GroupError::Parse(spec.to_string()))?;
        Self::new(orders)
    }

    pub fn spec(&self) -> String {
        self.orders.iter().map(|o| o.to_string()).collect::<Vec<_>>().join(",")
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement(vec![0; self.orders.len()])
    }

    pub fn element(&self, index: usize) -> GroupElement {
        let mut coords = vec![0; self.orders.len()];
        let mut rest = index;
        for (c, &o) in coords.iter_mut().zip(&self.orders).rev() {
            *c = (rest % o as usize) as u64;
            rest /= o as usize;
        }
        GroupElement(coords)
    }

    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.size).map(|i| self.element(i))
    }

    pub fn contains(&self, a: &GroupElement) -> bool {
        a.0.len() == self.orders.len() && a.0.iter().zip(&self.orders).all(|(x, o)| x < o)
    }

    fn check(&self, a: &GroupElement) -> Result<(), GroupError> {
        if self.contains(a) {
            Ok(())
        } else {
            Err(GroupError::NotAnElement { element: a.to_string(), group: self.to_string() })
        }
    }

    pub fn index_of(&self, a: &GroupElement) -> Result<usize, GroupError> {
        self.check(a)?;
        Ok(a.0.iter().zip(&self.orders).fold(0usize, |acc, (&x, &o)| acc * o as usize + x as usize))
    }

    /// Parses `"3"`, `"1,0"` or `"(1,0)"` as an element.
    pub fn parse_element(&self, s: &str) -> Result<GroupElement, GroupError> {
        let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
        let coords = inner
            .split(',')
            .map(|x| x.trim().parse::<i64>().ok())
            .collect::<Option<Vec<_>>>()
            .filter(|c| c.len() == self.orders.len())
            .ok_or_else(|| GroupError::NotAnElement { element: s.to_string(), group: self.to_string() })?;
        Ok(GroupElement(coords.iter().zip(&self.orders).map(|(&x, &o)| x.rem_euclid(o as i64) as u64).collect()))
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement, GroupError> {
        self.check(a)?;
        self.check(b)?;
        Ok(GroupElement(a.0.iter().zip(&b.0).zip(&self.orders).map(|((x, y), o)| (x + y) % o).collect()))
    }

    pub fn neg(&self, a: &GroupElement) -> Result<GroupElement, GroupError> {
        self.check(a)?;
        Ok(GroupElement(a.0.iter().zip(&self.orders).map(|(x, o)| (o - x) % o).collect()))
    }

    pub fn sub(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement, GroupError> {
        self.add(a, &self.neg(b)?)
    }

    pub fn scale(&self, a: &GroupElement, k: i64) -> Result<GroupElement, GroupError> {
        self.check(a)?;
        Ok(GroupElement(
            a.0.iter()
                .zip(&self.orders)
                .map(|(&x, &o)| ((x as i128 * k as i128).rem_euclid(o as i128)) as u64)
                .collect(),
        ))
    }

    pub fn add_idx(&self, i: usize, j: usize) -> usize {
        let mut acc = 0usize;
        let mut radix = 1usize;
        let (mut a, mut b) = (i, j);
        for &o in self.orders.iter().rev() {
            let o = o as usize;
            acc += ((a % o + b % o) % o) * radix;
            radix *= o;
            a /= o;
            b /= o;
        }
        acc
    }

    pub fn neg_idx(&self, i: usize) -> usize {
        let mut acc = 0usize;
        let mut radix = 1usize;
        let mut a = i;
        for &o in self.orders.iter().rev() {
            let o = o as usize;
            acc += ((o - a % o) % o) * radix;
            radix *= o;
            a /= o;
        }
        acc
    }

    pub fn sub_idx(&self, i: usize, j: usize) -> usize {
        self.add_idx(i, self.neg_idx(j))
    }

    pub fn scale_idx(&self, i: usize, k: i64) -> usize {
        self.index_of(&self.scale(&self.element(i), k).expect("index in range")).expect("scaled element")
    }

    pub fn order_of(&self, a: &GroupElement) -> u64 {
        a.0.iter().zip(&self.orders).fold(1u64, |acc, (&x, &o)| acc.lcm(&(o / o.gcd(&x))))
    }

    pub fn order_of_idx(&self, i: usize) -> u64 {
        self.order_of(&self.element(i))
    }

    /// Exponent of the group (lcm of the factor orders).
    pub fn exponent(&self) -> u64 {
        self.orders.iter().fold(1u64, |acc, o| acc.lcm(o))
    }

    /// Element indices of the subgroup generated by the given indices.
    pub fn subgroup_generated_idx(&self, generators: &[usize]) -> BTreeSet<usize> {
        let mut members: BTreeSet<usize> = BTreeSet::from([0]);
        let mut frontier = vec![0usize];
        while let Some(x) = frontier.pop() {
            for &g in generators {
                let y = self.add_idx(x, g);
                if members.insert(y) {
                    frontier.push(y);
                }
            }
        }
        members
    }

    pub fn subgroup_generated(&self, generators: &[GroupElement]) -> Result<BTreeSet<GroupElement>, GroupError> {
        let idx = generators.iter().map(|g| self.index_of(g)).collect::<Result<Vec<_>, _>>()?;
        Ok(self.subgroup_generated_idx(&idx).into_iter().map(|i| self.element(i)).collect())
    }

    pub fn invariant_factors(&self) -> Vec<u64> {
        let k = self.orders.len();
        let mut m = IntMatrix::zeros(k, k);
        for (i, &o) in self.orders.iter().enumerate() {
            m.set(i, i, BigInt::from(o));
        }
        smith_normal_form(&m)
            .invariant_factors()
            .into_iter()
            .map(|d| d.to_u64().expect("factor fits"))
            .filter(|&d| d > 1)
            .collect()
    }

    pub fn is_isomorphic(&self, other: &FiniteAbelianGroup) -> bool {
        self.invariant_factors() == other.invariant_factors()
    }

    /// `Some((p, l))` when the group is `(Z/p)^l` with `l >= 1`.
    pub fn is_elementary_power(&self) -> Option<(u64, usize)> {
        let inv = self.invariant_factors();
        let p = *inv.first()?;
        (is_prime(p) && inv.iter().all(|&d| d == p)).then_some((p, inv.len()))
    }

    /// Whether some surjection from `self` onto `target` exists, decided on
    /// invariant factors aligned from the largest one down.
    pub fn admits_surjection_onto(&self, target: &FiniteAbelianGroup) -> bool {
        let ours = self.invariant_factors();
        let theirs = target.invariant_factors();
        if theirs.len() > ours.len() || self.size % target.size != 0 {
            return false;
        }
        ours.iter().rev().zip(theirs.iter().rev()).all(|(a, b)| a % b == 0)
    }

    /// The quotient by the subgroup generated by `generators`, realised as a
    /// product of cyclic groups, with its projection.
    pub fn quotient(&self, generators: &[GroupElement]) -> Result<GroupHomomorphism, GroupError> {
        for g in generators {
            self.check(g)?;
        }
        let k = self.orders.len();
        let mut relations: Vec<Vec<i64>> = Vec::new();
        for (i, &o) in self.orders.iter().enumerate() {
            let mut row = vec![0i64; k];
            row[i] = o as i64;
            relations.push(row);
        }
        for g in generators {
            relations.push(g.0.iter().map(|&x| x as i64).collect());
        }
        let (quotient, images) = Self::from_relations(k, &relations)?;
        GroupHomomorphism::new(self.clone(), quotient, images)
    }

    /// `Z^gens / <relations>` as a product of cyclic groups, together with the
    /// images of the standard basis vectors. The relations must have full rank.
    pub fn from_relations(gens: usize, relations: &[Vec<i64>]) -> Result<(Self, Vec<GroupElement>), GroupError> {
        let m = IntMatrix::from_i64_rows(gens, relations).map_err(|e| GroupError::Parse(e.to_string()))?;
        let s = smith_normal_form(&m);
        let diag = s.diagonal();
        if diag.len() < gens || diag.iter().any(|d| d.is_zero()) {
            return Err(GroupError::Parse("relations do not define a finite group".into()));
        }
        // x -> x V sends the relation lattice onto the diagonal one
        let kept: Vec<usize> = (0..gens).filter(|&i| diag[i] != BigInt::from(1)).collect();
        let orders: Vec<u64> = kept.iter().map(|&i| diag[i].to_u64().expect("order fits")).collect();
        let group = Self::new(orders.clone())?;
        let images = (0..gens)
            .map(|j| {
                GroupElement(
                    kept.iter()
                        .zip(&orders)
                        .map(|(&i, &o)| {
                            let x: BigInt = s.v.get(j, i).mod_floor(&BigInt::from(o));
                            x.to_u64().expect("reduced coordinate")
                        })
                        .collect(),
                )
            })
            .collect();
        Ok((group, images))
    }

    /// Every finite abelian group of order `n`, one per isomorphism class,
    /// in invariant factor form.
    pub fn groups_of_order(n: u64) -> Vec<FiniteAbelianGroup> {
        // chains d1 | d2 | ... with d1 >= 2 and product n
        fn rec(rest: u64, prev: u64, acc: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
            if rest == 1 {
                out.push(acc.clone());
                return;
            }
            let mut d = prev.max(2);
            while d <= rest {
                let after = rest / d;
                if rest % d == 0 && (after == 1 || after % d == 0) {
                    acc.push(d);
                    rec(after, d, acc, out);
                    acc.pop();
                }
                d += prev;
            }
        }
        let mut out = Vec::new();
        rec(n, 1, &mut Vec::new(), &mut out);
        out.into_iter().map(|f| Self::new(f).expect("valid orders")).collect()
    }
}

impl fmt::Display for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.orders.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.orders.iter().map(|o| format!("Z/{o}")).collect();
        write!(f, "{}", parts.join(" x "))
    }
}

pub fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

/// A homomorphism determined by the images of the canonical generators of the source.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupHomomorphism {
    source: FiniteAbelianGroup,
    target: FiniteAbelianGroup,
    images: Vec<GroupElement>,
    table: Vec<usize>,
}

impl GroupHomomorphism {
    pub fn new(
        source: FiniteAbelianGroup,
        target: FiniteAbelianGroup,
        images: Vec<GroupElement>,
    ) -> Result<Self, GroupError> {
        if images.len() != source.rank() {
            return Err(GroupError::BadHomomorphism(format!(
                "{} images for {} generators",
                images.len(),
                source.rank()
            )));
        }
        for (img, &o) in images.iter().zip(source.orders()) {
            target.check(img)?;
            if !target.scale(img, o as i64)?.is_zero() {
                return Err(GroupError::BadHomomorphism(format!("image {img} is not killed by {o}")));
            }
        }
        let image_idx: Vec<usize> = images.iter().map(|g| target.index_of(g).expect("checked")).collect();
        let table = (0..source.size())
            .map(|i| {
                let e = source.element(i);
                e.0.iter().zip(&image_idx).fold(0usize, |acc, (&c, &g)| target.add_idx(acc, target.scale_idx(g, c as i64)))
            })
            .collect();
        Ok(GroupHomomorphism { source, target, images, table })
    }

    pub fn source(&self) -> &FiniteAbelianGroup {
        &self.source
    }

    pub fn target(&self) -> &FiniteAbelianGroup {
        &self.target
    }

    pub fn images(&self) -> &[GroupElement] {
        &self.images
    }

    pub fn apply(&self, a: &GroupElement) -> Result<GroupElement, GroupError> {
        Ok(self.target.element(self.table[self.source.index_of(a)?]))
    }

    pub fn apply_idx(&self, i: usize) -> usize {
        self.table[i]
    }

    pub fn is_surjective(&self) -> bool {
        let idx: Vec<usize> = self.images.iter().map(|g| self.target.index_of(g).expect("checked")).collect();
        self.target.subgroup_generated_idx(&idx).len() == self.target.size()
    }

    pub fn kernel_idx(&self) -> BTreeSet<usize> {
        (0..self.source.size()).filter(|&i| self.table[i] == 0).collect()
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &GroupHomomorphism) -> Result<GroupHomomorphism, GroupError> {
        if other.source != self.target {
            return Err(GroupError::BadHomomorphism("composition of non-matching maps".into()));
        }
        let images = self.images.iter().map(|g| other.apply(g)).collect::<Result<Vec<_>, _>>()?;
        GroupHomomorphism::new(self.source.clone(), other.target.clone(), images)
    }
}

/// Every surjection from `source` onto `target`, in lexicographic order of the
/// tuple of generator images.
pub fn enumerate_surjections(source: &FiniteAbelianGroup, target: &FiniteAbelianGroup) -> Vec<GroupHomomorphism> {
    if !source.admits_surjection_onto(target) {
        return Vec::new();
    }
    let candidates: Vec<Vec<usize>> = source
        .orders()
        .iter()
        .map(|&o| (0..target.size()).filter(|&y| target.scale_idx(y, o as i64) == 0).collect())
        .collect();
    let mut out = Vec::new();
    let mut choice = vec![0usize; candidates.len()];
    loop {
        let images: Vec<usize> = choice.iter().zip(&candidates).map(|(&c, cands)| cands[c]).collect();
        if target.subgroup_generated_idx(&images).len() == target.size() {
            let elems = images.iter().map(|&i| target.element(i)).collect();
            out.push(GroupHomomorphism::new(source.clone(), target.clone(), elems).expect("valid images"));
        }
        // odometer, last generator fastest
        let mut k = candidates.len();
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            choice[k] += 1;
            if choice[k] < candidates[k].len() {
                break;
            }
            choice[k] = 0;
        }
    }
}

/// `(r, alpha, N)` describing `M = Z^2 / <(r, -alpha), (0, N)>`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TwoGenPresentation {
    pub r: u64,
    pub alpha: u64,
    pub n: u64,
}

impl TwoGenPresentation {
    pub fn new(r: u64, alpha: u64, n: u64) -> Result<Self, GroupError> {
        let bad = |reason: &str| GroupError::InvalidPresentation { r, alpha, n, reason: reason.to_string() };
        if r == 0 {
            return Err(bad("r must be positive"));
        }
        if n <= 1 {
            return Err(bad("N must exceed 1"));
        }
        if alpha >= n {
            return Err(bad("alpha must lie in [0, N)"));
        }
        if r == 1 && alpha <= 1 {
            return Err(bad("r = 1 needs alpha > 1"));
        }
        Ok(TwoGenPresentation { r, alpha, n })
    }

    pub fn order(&self) -> u64 {
        self.r * self.n
    }

    /// Every valid presentation with `rN <= bound`.
    pub fn all_up_to(bound: u64) -> Vec<TwoGenPresentation> {
        let mut out = Vec::new();
        for r in 1..=bound {
            for n in 2..=bound / r {
                for alpha in 0..n {
                    if let Ok(p) = Self::new(r, alpha, n) {
                        out.push(p);
                    }
                }
            }
        }
        out
    }

    /// Realises the presented group as a product of cyclic groups; returns the
    /// group and the indices of the images of `m = e1` and `n = e2`.
    pub fn realize(&self) -> TwoGenGroup {
        let (group, images) = if self.r == 1 {
            (FiniteAbelianGroup::cyclic(self.n), vec![GroupElement(vec![self.alpha]), GroupElement(vec![1])])
        } else if self.alpha == 0 {
            (
                FiniteAbelianGroup::new(vec![self.r, self.n]).expect("positive orders"),
                vec![GroupElement(vec![1, 0]), GroupElement(vec![0, 1])],
            )
        } else {
            FiniteAbelianGroup::from_relations(2, &[vec![self.r as i64, -(self.alpha as i64)], vec![0, self.n as i64]])
                .expect("presentation defines a finite group")
        };
        let m = group.index_of(&images[0]).expect("image in group");
        let n = group.index_of(&images[1]).expect("image in group");
        TwoGenGroup { presentation: *self, group, m, n }
    }
}

impl fmt::Display for TwoGenPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.r, self.alpha, self.n)
    }
}

/// A presented group together with the positions of its two generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TwoGenGroup {
    pub presentation: TwoGenPresentation,
    pub group: FiniteAbelianGroup,
    pub m: usize,
    pub n: usize,
}

impl TwoGenGroup {
    /// Index of `a*m + b*n`.
    pub fn combo(&self, a: i64, b: i64) -> usize {
        let g = &self.group;
        g.add_idx(g.scale_idx(self.m, a), g.scale_idx(self.n, b))
    }

    /// The isomorphism onto `group` sending `m, n` to the given elements,
    /// as a table from element indices to element indices.
    pub fn transport_to(&self, group: &FiniteAbelianGroup, m: usize, n: usize) -> Vec<usize> {
        let p = self.presentation;
        let mut table = vec![usize::MAX; self.group.size()];
        for a in 0..p.r as i64 {
            for b in 0..p.n as i64 {
                let target = group.add_idx(group.scale_idx(m, a), group.scale_idx(n, b));
                table[self.combo(a, b)] = target;
            }
        }
        table
    }
}

/// Recovers `(r, alpha, N)` from a pair of elements generating `M`.
pub fn recognize_two_generator_presentation(
    group: &FiniteAbelianGroup,
    m: &GroupElement,
    n: &GroupElement,
) -> Result<TwoGenPresentation, GroupError> {
    let fail = |reason: &str| GroupError::NotTwoGenerated { m: m.to_string(), n: n.to_string(), reason: reason.into() };
    let mi = group.index_of(m)?;
    let ni = group.index_of(n)?;
    if mi == 0 || ni == 0 {
        return Err(fail("generators must be nonzero"));
    }
    if mi == ni {
        return Err(fail("generators must be distinct"));
    }
    if group.subgroup_generated_idx(&[mi, ni]).len() != group.size() {
        return Err(fail("the pair does not generate the group"));
    }
    let big_n = group.order_of_idx(ni);
    let multiples: Vec<usize> = (0..big_n).map(|i| group.scale_idx(ni, i as i64)).collect();
    let r = (1..=group.size() as u64)
        .find(|&s| multiples.contains(&group.scale_idx(mi, s as i64)))
        .expect("the order of m works");
    let target = group.scale_idx(mi, r as i64);
    let alpha = multiples.iter().position(|&x| x == target).expect("found above") as u64;
    if r * big_n != group.size() as u64 {
        return Err(fail("order does not match rN"));
    }
    TwoGenPresentation::new(r, alpha, big_n).map_err(|e| fail(&e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parse_and_index_roundtrip() {
        let g = FiniteAbelianGroup::parse("2,4").unwrap();
        assert_eq!(g.size(), 8);
        assert_eq!(g.element(5), GroupElement(vec![1, 1]));
        assert_eq!(g.index_of(&GroupElement(vec![1, 1])).unwrap(), 5);
        assert!(FiniteAbelianGroup::parse("").is_err());
        assert!(FiniteAbelianGroup::parse("2,0").is_err());
        assert!(FiniteAbelianGroup::parse("2,-3").is_err());
    }

    #[test]
    fn arithmetic_checks_membership() {
        let g = FiniteAbelianGroup::parse("2,4").unwrap();
        let bad = GroupElement(vec![1]);
        assert!(g.add(&bad, &g.zero()).is_err());
        assert_eq!(g.neg(&GroupElement(vec![1, 1])).unwrap(), GroupElement(vec![1, 3]));
        assert_eq!(g.order_of(&GroupElement(vec![1, 2])), 2);
    }

    #[test]
    fn cyclic_presentation_recognised() {
        let g = FiniteAbelianGroup::cyclic(4);
        let p = recognize_two_generator_presentation(&g, &GroupElement(vec![1]), &GroupElement(vec![3])).unwrap();
        assert_eq!(p, TwoGenPresentation { r: 1, alpha: 3, n: 4 });
        let err = recognize_two_generator_presentation(&g, &GroupElement(vec![2]), &GroupElement(vec![2]));
        assert!(err.is_err());
    }

    #[test]
    fn elementary_powers() {
        assert_eq!(FiniteAbelianGroup::parse("2,2,2").unwrap().is_elementary_power(), Some((2, 3)));
        assert_eq!(FiniteAbelianGroup::parse("3").unwrap().is_elementary_power(), Some((3, 1)));
        assert_eq!(FiniteAbelianGroup::parse("2,3").unwrap().is_elementary_power(), None);
        assert_eq!(FiniteAbelianGroup::parse("4").unwrap().is_elementary_power(), None);
    }

    #[test]
    fn groups_of_small_orders() {
        let counts: Vec<usize> = (1..=16).map(|n| FiniteAbelianGroup::groups_of_order(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 1, 2, 1, 1, 1, 3, 2, 1, 1, 2, 1, 1, 1, 5]);
        assert_eq!(FiniteAbelianGroup::groups_of_order(27).len(), 3);
    }

    #[test]
    fn quotient_of_z4_by_two() {
        let g = FiniteAbelianGroup::cyclic(4);
        let q = g.quotient(&[GroupElement(vec![2])]).unwrap();
        assert_eq!(q.target().size(), 2);
        assert_eq!(q.kernel_idx(), BTreeSet::from([0, 2]));
    }

    #[test]
    fn surjection_counts() {
        let v4 = FiniteAbelianGroup::parse("2,2").unwrap();
        assert_eq!(enumerate_surjections(&v4, &v4).len(), 6);
        assert_eq!(enumerate_surjections(&v4, &FiniteAbelianGroup::cyclic(2)).len(), 3);
        assert!(enumerate_surjections(&v4, &FiniteAbelianGroup::cyclic(4)).is_empty());
        let z8 = FiniteAbelianGroup::cyclic(8);
        assert_eq!(enumerate_surjections(&z8, &FiniteAbelianGroup::cyclic(4)).len(), 2);
    }

    fn group_strategy() -> impl Strategy<Value = FiniteAbelianGroup> {
        prop::collection::vec(2u64..6, 1..3)
            .prop_filter("small", |o| o.iter().product::<u64>() <= 24)
            .prop_map(|o| FiniteAbelianGroup::new(o).unwrap())
    }

    proptest! {
        #[test]
        fn group_axioms(g in group_strategy(), seed in any::<u64>()) {
            let n = g.size();
            let a = (seed as usize) % n;
            let b = (seed as usize / 7) % n;
            let c = (seed as usize / 49) % n;
            prop_assert_eq!(g.add_idx(g.add_idx(a, b), c), g.add_idx(a, g.add_idx(b, c)));
            prop_assert_eq!(g.add_idx(a, b), g.add_idx(b, a));
            prop_assert_eq!(g.add_idx(a, g.neg_idx(a)), 0);
            prop_assert_eq!(g.add_idx(a, 0), a);
            let ea = g.element(a);
            prop_assert_eq!(g.index_of(&ea).unwrap(), a);
            prop_assert_eq!(g.scale_idx(a, g.order_of(&ea) as i64), 0);
        }

        #[test]
        fn recognised_presentations_match_realisation(r in 1u64..5, n in 2u64..7, alpha_seed in 0u64..100) {
            let alpha = alpha_seed % n;
            if let Ok(p) = TwoGenPresentation::new(r, alpha, n) {
                let t = p.realize();
                prop_assert_eq!(t.group.size() as u64, r * n);
                let q = recognize_two_generator_presentation(&t.group, &t.group.element(t.m), &t.group.element(t.n)).unwrap();
                prop_assert_eq!(q, p);
            }
        }

        #[test]
        fn surjections_are_surjective(g in group_strategy()) {
            for target in [FiniteAbelianGroup::cyclic(2), FiniteAbelianGroup::cyclic(3)] {
                for f in enumerate_surjections(&g, &target) {
                    prop_assert!(f.is_surjective());
                    for a in 0..g.size() {
                        for b in 0..g.size() {
                            prop_assert_eq!(f.apply_idx(g.add_idx(a, b)), target.add_idx(f.apply_idx(a), f.apply_idx(b)));
                        }
                    }
                }
            }
        }
    }
}
