//! Multiplication tables `psi` of `M`-graded algebras with a chosen homogeneous
//! basis `v_m`, so that `v_m v_n = psi_{m,n} v_{m+n}`, over the rationals or a
//! prime field. Includes validation, twisting by unit characters, reduction
//! modulo a subgroup on which the table is a split torsor, and an independent
//! rewriting oracle for quotients of `k[s,t]` by monomial rewrite rules.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use crate::abelian_group::{is_prime, FiniteAbelianGroup, GroupError, GroupHomomorphism};
use crate::cover_monoid::{h_profile, CoverLattice, HProfile, Ray};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("cannot parse {0:?}")]
    Parse(String),
    #[error("scalars from different fields")]
    FieldMismatch,
    #[error("table has {got} entries, expected {expected}")]
    Shape { got: usize, expected: usize },
    #[error("invalid table: {0}")]
    Invalid(TableViolation),
    #[error("{0}")]
    Precondition(String),
    #[error("rewriting did not terminate within {0} steps")]
    NoTermination(usize),
    #[error("rule {0} is not homogeneous")]
    Inhomogeneous(usize),
    #[error("product of basis elements for ({0}, {1}) is not a scalar multiple of a basis element")]
    NotScalarMultiple(String, String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableViolation {
    Asymmetric(usize, usize),
    Unit(usize),
    Associativity(usize, usize, usize),
}

impl fmt::Display for TableViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TableViolation::Asymmetric(m, n) => write!(f, "psi is not symmetric at element indices ({m}, {n})"),
            TableViolation::Unit(m) => write!(f, "psi_(m,0) != 1 at element index {m}"),
            TableViolation::Associativity(m, n, t) => {
                write!(f, "associativity fails at element indices ({m}, {n}, {t})")
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Field {
    Rationals,
    Prime(u64),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Mod(u64),
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) => write!(f, "{q}"),
            Scalar::Mod(x) => write!(f, "{x}"),
        }
    }
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    acc
}

impl Field {
    pub fn prime(p: u64) -> Result<Field, AlgebraError> {
        if is_prime(p) {
            Ok(Field::Prime(p))
        } else {
            Err(AlgebraError::NotPrime(p))
        }
    }

    /// `"Q"` or `"GF(p)"`.
    pub fn parse(s: &str) -> Result<Field, AlgebraError> {
        let s = s.trim();
        if s == "Q" {
            return Ok(Field::Rationals);
        }
        let p = s
            .strip_prefix("GF(")
            .and_then(|r| r.strip_suffix(')'))
            .and_then(|x| x.trim().parse::<u64>().ok())
            .ok_or_else(|| AlgebraError::Parse(s.to_string()))?;
        Field::prime(p)
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Rationals => 0,
            Field::Prime(p) => *p,
        }
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, x: i64) -> Scalar {
        match self {
            Field::Rationals => Scalar::Rational(BigRational::from_integer(BigInt::from(x))),
            Field::Prime(p) => Scalar::Mod(x.rem_euclid(*p as i64) as u64),
        }
    }

    pub fn from_rational(&self, q: &BigRational) -> Option<Scalar> {
        match self {
            Field::Rationals => Some(Scalar::Rational(q.clone())),
            Field::Prime(p) => {
                let pp = BigInt::from(*p);
                let num = ((q.numer() % &pp + &pp) % &pp).to_u64()?;
                let den = ((q.denom() % &pp + &pp) % &pp).to_u64()?;
                (den != 0).then(|| Scalar::Mod(mul_mod(num, pow_mod(den, p - 2, *p), *p)))
            }
        }
    }

    pub fn contains(&self, a: &Scalar) -> bool {
        match (self, a) {
            (Field::Rationals, Scalar::Rational(_)) => true,
            (Field::Prime(p), Scalar::Mod(x)) => x < p,
            _ => false,
        }
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (Field::Rationals, Scalar::Rational(x), Scalar::Rational(y)) => Scalar::Rational(x + y),
            (Field::Prime(p), Scalar::Mod(x), Scalar::Mod(y)) => Scalar::Mod(((*x as u128 + *y as u128) % *p as u128) as u64),
            _ => panic!("scalars from different fields"),
        }
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match (self, a) {
            (Field::Rationals, Scalar::Rational(x)) => Scalar::Rational(-x),
            (Field::Prime(p), Scalar::Mod(x)) => Scalar::Mod((p - x) % p),
            _ => panic!("scalars from different fields"),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (Field::Rationals, Scalar::Rational(x), Scalar::Rational(y)) => Scalar::Rational(x * y),
            (Field::Prime(p), Scalar::Mod(x), Scalar::Mod(y)) => Scalar::Mod(mul_mod(*x, *y, *p)),
            _ => panic!("scalars from different fields"),
        }
    }

    pub fn inv(&self, a: &Scalar) -> Option<Scalar> {
        if self.is_zero(a) {
            return None;
        }
        Some(match (self, a) {
            (Field::Rationals, Scalar::Rational(x)) => Scalar::Rational(x.recip()),
            (Field::Prime(p), Scalar::Mod(x)) => Scalar::Mod(pow_mod(*x, p - 2, *p)),
            _ => panic!("scalars from different fields"),
        })
    }

    pub fn div(&self, a: &Scalar, b: &Scalar) -> Option<Scalar> {
        Some(self.mul(a, &self.inv(b)?))
    }

    /// `a^e` with `0^0 = 1`.
    pub fn pow(&self, a: &Scalar, e: u64) -> Scalar {
        match (self, a) {
            (Field::Rationals, Scalar::Rational(x)) => {
                let mut acc = BigRational::one();
                for _ in 0..e {
                    acc *= x;
                }
                Scalar::Rational(acc)
            }
            (Field::Prime(p), Scalar::Mod(x)) => Scalar::Mod(pow_mod(*x, e, *p)),
            _ => panic!("scalars from different fields"),
        }
    }

    pub fn is_zero(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Rational(x) => x.is_zero(),
            Scalar::Mod(x) => *x == 0,
        }
    }

    pub fn parse_scalar(&self, v: &Value) -> Result<Scalar, AlgebraError> {
        let bad = || AlgebraError::Parse(v.to_string());
        match self {
            Field::Rationals => {
                let s = match v {
                    Value::String(s) => s.clone(),
                    Value::Number(n) => n.to_string(),
                    _ => return Err(bad()),
                };
                let q = match s.split_once('/') {
                    Some((a, b)) => {
                        let a: BigInt = a.trim().parse().map_err(|_| bad())?;
                        let b: BigInt = b.trim().parse().map_err(|_| bad())?;
                        if b.is_zero() {
                            return Err(bad());
                        }
                        BigRational::new(a, b)
                    }
                    None => BigRational::from_integer(s.trim().parse().map_err(|_| bad())?),
                };
                Ok(Scalar::Rational(q))
            }
            Field::Prime(_) => {
                let x = match v {
                    Value::Number(n) => n.as_i64().ok_or_else(bad)?,
                    Value::String(s) => s.trim().parse::<i64>().map_err(|_| bad())?,
                    _ => return Err(bad()),
                };
                Ok(self.from_i64(x))
            }
        }
    }

    pub fn scalar_json(&self, a: &Scalar) -> Value {
        match a {
            Scalar::Rational(q) if q.is_integer() => Value::String(q.numer().to_string()),
            Scalar::Rational(q) => Value::String(format!("{}/{}", q.numer(), q.denom())),
            Scalar::Mod(x) => json!(x),
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rationals => write!(f, "Q"),
            Field::Prime(p) => write!(f, "GF({p})"),
        }
    }
}

/// Nonzero scalars `u_m` with `u_0 = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitCharacter {
    pub values: Vec<Scalar>,
}

impl UnitCharacter {
    pub fn new(field: Field, values: Vec<Scalar>) -> Result<Self, AlgebraError> {
        if values.iter().any(|v| !field.contains(v) || field.is_zero(v)) {
            return Err(AlgebraError::Precondition("unit character values must be nonzero field elements".into()));
        }
        if values.first().map_or(true, |v| *v != field.one()) {
            return Err(AlgebraError::Precondition("u_0 must be 1".into()));
        }
        Ok(UnitCharacter { values })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiplicationTable {
    group: FiniteAbelianGroup,
    field: Field,
    entries: Vec<Scalar>,
}

impl MultiplicationTable {
    pub fn new(group: FiniteAbelianGroup, field: Field, entries: Vec<Scalar>) -> Result<Self, AlgebraError> {
        let n = group.size();
        if entries.len() != n * n {
            return Err(AlgebraError::Shape { got: entries.len(), expected: n * n });
        }
        if entries.iter().any(|e| !field.contains(e)) {
            return Err(AlgebraError::FieldMismatch);
        }
        Ok(MultiplicationTable { group, field, entries })
    }

    pub fn from_fn(
        group: FiniteAbelianGroup,
        field: Field,
        f: impl Fn(usize, usize) -> Scalar,
    ) -> Result<Self, AlgebraError> {
        let n = group.size();
        let entries = (0..n * n).map(|k| f(k / n, k % n)).collect();
        Self::new(group, field, entries)
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[i * self.group.size() + j]
    }

    pub fn vanishes(&self, i: usize, j: usize) -> bool {
        self.field.is_zero(self.get(i, j))
    }

    /// Checks symmetry, the unit axiom and associativity, in that order,
    /// reporting the first violation in lexicographic order of indices.
    pub fn validate(&self) -> Result<(), AlgebraError> {
        let n = self.group.size();
        let g = &self.group;
        let f = self.field;
        for m in 0..n {
            for k in 0..n {
                if self.get(m, k) != self.get(k, m) {
                    return Err(AlgebraError::Invalid(TableViolation::Asymmetric(m, k)));
                }
            }
        }
        for m in 0..n {
            if *self.get(m, 0) != f.one() {
                return Err(AlgebraError::Invalid(TableViolation::Unit(m)));
            }
        }
        for m in 0..n {
            for k in 0..n {
                let mk = g.add_idx(m, k);
                for t in 0..n {
                    let left = f.mul(self.get(m, k), self.get(mk, t));
                    let right = f.mul(self.get(k, t), self.get(g.add_idx(k, t), m));
                    if left != right {
                        return Err(AlgebraError::Invalid(TableViolation::Associativity(m, k, t)));
                    }
                }
            }
        }
        Ok(())
    }

    /// `psi_{m,n} = u_m u_n / u_{m+n}` where `E_{m,n} = 0`, and zero elsewhere.
    pub fn from_ray(
        lattice: &CoverLattice,
        ray: &Ray,
        field: Field,
        twist: Option<&UnitCharacter>,
    ) -> Result<Self, AlgebraError> {
        let g = lattice.group().clone();
        if ray.group_size() != g.size() {
            return Err(AlgebraError::Precondition("ray and lattice have different groups".into()));
        }
        let table = Self::from_fn(g, field, |i, j| if ray.value(i, j) == 0 { field.one() } else { field.zero() })?;
        match twist {
            Some(u) => table.twisted(u),
            None => Ok(table),
        }
    }

    /// `a^E` for a ray `E`, with `0^0 = 1`.
    pub fn power_of_ray(lattice: &CoverLattice, ray: &Ray, field: Field, a: &Scalar) -> Result<Self, AlgebraError> {
        Self::from_fn(lattice.group().clone(), field, |i, j| field.pow(a, ray.value(i, j)))
    }

    pub fn twisted(&self, u: &UnitCharacter) -> Result<Self, AlgebraError> {
        let n = self.group.size();
        if u.values.len() != n {
            return Err(AlgebraError::Shape { got: u.values.len(), expected: n });
        }
        let f = self.field;
        let g = self.group.clone();
        Self::from_fn(g.clone(), f, |i, j| {
            let num = f.mul(&u.values[i], &u.values[j]);
            let ratio = f.div(&num, &u.values[g.add_idx(i, j)]).expect("units are invertible");
            f.mul(&ratio, self.get(i, j))
        })
    }

    pub fn h_profile(&self) -> HProfile {
        h_profile(&self.group, |u, v| self.vanishes(u, v))
    }

    pub fn h_subgroup(&self) -> Vec<usize> {
        self.h_profile().h_subgroup
    }

    pub fn h_value(&self) -> u64 {
        self.h_profile().h
    }

    /// Degrees in which a minimal set of homogeneous generators must live;
    /// only defined when `H` is trivial.
    pub fn minimum_generating_degrees(&self) -> Result<Vec<usize>, AlgebraError> {
        let p = self.h_profile();
        if p.h_subgroup != [0] {
            return Err(AlgebraError::Precondition("H must be trivial".into()));
        }
        Ok((0..self.group.size()).filter(|&t| p.components[t]).collect())
    }

    /// Reduction modulo a subgroup `H` of `H_psi` on which `psi` is identically 1.
    /// `section` maps each element index of the quotient to a representative;
    /// by default the smallest element of each class is used.
    pub fn reduce_mod_h(
        &self,
        subgroup: &[usize],
        section: Option<&[usize]>,
    ) -> Result<(MultiplicationTable, GroupHomomorphism), AlgebraError> {
        let g = &self.group;
        let f = self.field;
        let set: BTreeSet<usize> = subgroup.iter().copied().collect();
        if g.subgroup_generated_idx(subgroup) != set {
            return Err(AlgebraError::Precondition("the given elements do not form a subgroup".into()));
        }
        let h_psi = self.h_subgroup();
        if !set.iter().all(|h| h_psi.contains(h)) {
            return Err(AlgebraError::Precondition("H is not contained in H_psi".into()));
        }
        for &a in &set {
            for &b in &set {
                if *self.get(a, b) != f.one() {
                    return Err(AlgebraError::Precondition("psi is not identically 1 on H x H".into()));
                }
            }
        }
        let gens: Vec<_> = set.iter().map(|&h| g.element(h)).collect();
        let proj = g.quotient(&gens)?;
        let q = proj.target().clone();
        let sigma: Vec<usize> = match section {
            Some(s) => {
                if s.len() != q.size() || s.iter().enumerate().any(|(c, &x)| x >= g.size() || proj.apply_idx(x) != c) {
                    return Err(AlgebraError::Precondition("section does not split the projection".into()));
                }
                s.to_vec()
            }
            None => {
                let mut s = vec![usize::MAX; q.size()];
                for x in (0..g.size()).rev() {
                    s[proj.apply_idx(x)] = x;
                }
                s
            }
        };
        let table = Self::from_fn(q.clone(), f, |a, b| {
            let sa = sigma[a];
            let sb = sigma[b];
            let sum = g.add_idx(sa, sb);
            let h = g.sub_idx(sigma[q.add_idx(a, b)], sum);
            f.mul(self.get(sa, sb), self.get(h, sum))
        })?;
        Ok((table, proj))
    }

    /// A ray whose support is the zero pattern of `psi`, when one exists.
    pub fn in_main_component(&self, lattice: &CoverLattice) -> Option<Ray> {
        let zeros: BTreeSet<usize> = lattice
            .generators()
            .iter()
            .enumerate()
            .filter(|(_, &(i, j))| self.vanishes(i, j))
            .map(|(k, _)| k)
            .collect();
        lattice.support_realizable(&zeros)
    }

    pub fn to_json(&self) -> Value {
        let n = self.group.size();
        let matrix: Vec<Vec<Value>> =
            (0..n).map(|i| (0..n).map(|j| self.field.scalar_json(self.get(i, j))).collect()).collect();
        json!({ "group": self.group.spec(), "field": self.field.to_string(), "matrix": matrix })
    }

    pub fn from_json(v: &Value) -> Result<Self, AlgebraError> {
        let bad = |what: &str| AlgebraError::Parse(what.to_string());
        let group = FiniteAbelianGroup::parse(v["group"].as_str().ok_or_else(|| bad("missing group"))?)?;
        let field = Field::parse(v["field"].as_str().ok_or_else(|| bad("missing field"))?)?;
        let rows = v["matrix"].as_array().ok_or_else(|| bad("missing matrix"))?;
        let n = group.size();
        if rows.len() != n {
            return Err(AlgebraError::Shape { got: rows.len(), expected: n });
        }
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            let row = row.as_array().ok_or_else(|| bad("matrix rows must be arrays"))?;
            if row.len() != n {
                return Err(AlgebraError::Shape { got: row.len(), expected: n });
            }
            for x in row {
                entries.push(field.parse_scalar(x)?);
            }
        }
        Self::new(group, field, entries)
    }
}

/// `s^lead -> coeff * s^tail` on exponent pairs `(i, j)` of `s^i t^j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RewriteRule {
    pub lead: (u64, u64),
    pub coeff: Scalar,
    pub tail: (u64, u64),
}

/// A quotient of `k[s,t]` graded by `deg s`, `deg t`, with a designated
/// monomial basis element in each degree.
#[derive(Clone, Debug)]
pub struct QuotientRing {
    pub group: FiniteAbelianGroup,
    pub field: Field,
    pub deg_s: usize,
    pub deg_t: usize,
    pub rules: Vec<RewriteRule>,
    pub basis: Vec<(u64, u64)>,
}

const REWRITE_LIMIT: usize = 1_000_000;

impl QuotientRing {
    fn degree(&self, (i, j): (u64, u64)) -> usize {
        let g = &self.group;
        g.add_idx(g.scale_idx(self.deg_s, i as i64), g.scale_idx(self.deg_t, j as i64))
    }

    /// Rewrites `c * s^i t^j` until no rule applies; `None` when the scalar dies.
    pub fn normal_form(&self, mono: (u64, u64), c: Scalar) -> Result<Option<((u64, u64), Scalar)>, AlgebraError> {
        let f = self.field;
        let (mut i, mut j) = mono;
        let mut c = c;
        for _ in 0..REWRITE_LIMIT {
            if f.is_zero(&c) {
                return Ok(None);
            }
            let Some(rule) = self.rules.iter().find(|r| i >= r.lead.0 && j >= r.lead.1) else {
                return Ok(Some(((i, j), c)));
            };
            c = f.mul(&c, &rule.coeff);
            i = i - rule.lead.0 + rule.tail.0;
            j = j - rule.lead.1 + rule.tail.1;
        }
        Err(AlgebraError::NoTermination(REWRITE_LIMIT))
    }

    /// Monomials divisible by no leading term, when there are finitely many.
    pub fn standard_monomials(&self) -> Option<Vec<(u64, u64)>> {
        let max_s = self.rules.iter().filter(|r| r.lead.1 == 0).map(|r| r.lead.0).min()?;
        let max_t = self.rules.iter().filter(|r| r.lead.0 == 0).map(|r| r.lead.1).min()?;
        let mut out = Vec::new();
        for i in 0..max_s {
            for j in 0..max_t {
                if !self.rules.iter().any(|r| i >= r.lead.0 && j >= r.lead.1) {
                    out.push((i, j));
                }
            }
        }
        Some(out)
    }

    /// Structure constants in the designated basis, by rewriting every product.
    pub fn structure_constants(&self) -> Result<MultiplicationTable, AlgebraError> {
        let n = self.group.size();
        if self.basis.len() != n {
            return Err(AlgebraError::Shape { got: self.basis.len(), expected: n });
        }
        for (k, rule) in self.rules.iter().enumerate() {
            if self.degree(rule.lead) != self.degree(rule.tail) {
                return Err(AlgebraError::Inhomogeneous(k));
            }
        }
        for (l, &b) in self.basis.iter().enumerate() {
            if self.degree(b) != l {
                return Err(AlgebraError::Precondition(format!("basis monomial {b:?} is not of degree {l}")));
            }
        }
        let f = self.field;
        let mut entries = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                let (ia, ja) = self.basis[a];
                let (ib, jb) = self.basis[b];
                let target = self.basis[self.group.add_idx(a, b)];
                let value = match self.normal_form((ia + ib, ja + jb), f.one())? {
                    None => f.zero(),
                    Some((mono, c)) if mono == target => c,
                    Some(_) => {
                        return Err(AlgebraError::NotScalarMultiple(
                            self.group.element(a).to_string(),
                            self.group.element(b).to_string(),
                        ))
                    }
                };
                entries.push(value);
            }
        }
        MultiplicationTable::new(self.group.clone(), f, entries)
    }
}

/// Discrete logarithm of `x` to base `g` in a prime field, searching `0..bound`.
pub fn discrete_log(field: Field, g: &Scalar, x: &Scalar, bound: u64) -> Option<u64> {
    let mut acc = field.one();
    for e in 0..bound {
        if acc == *x {
            return Some(e);
        }
        acc = field.mul(&acc, g);
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian_group::GroupElement;
    use crate::cover_monoid::pardini_homomorphisms;
    use proptest::prelude::*;

    fn lattice(spec: &str) -> CoverLattice {
        CoverLattice::new(&FiniteAbelianGroup::parse(spec).unwrap()).unwrap()
    }

    #[test]
    fn field_arithmetic() {
        let f = Field::prime(7).unwrap();
        assert_eq!(f.inv(&f.from_i64(3)), Some(f.from_i64(5)));
        assert_eq!(f.pow(&f.zero(), 0), f.one());
        assert!(Field::prime(9).is_err());
        assert_eq!(Field::parse("GF(101)").unwrap(), Field::Prime(101));
        assert_eq!(Field::parse("Q").unwrap(), Field::Rationals);
    }

    #[test]
    fn tables_from_extremal_rays_are_valid() {
        for spec in ["4", "2,2", "5", "6"] {
            let l = lattice(spec);
            for r in l.extremal_rays().unwrap() {
                for field in [Field::Rationals, Field::Prime(5)] {
                    MultiplicationTable::from_ray(&l, &r, field, None).unwrap().validate().unwrap();
                }
            }
        }
    }

    #[test]
    fn validation_reports_asymmetry() {
        let g = FiniteAbelianGroup::cyclic(3);
        let f = Field::Rationals;
        let t = MultiplicationTable::from_fn(g, f, |i, j| if (i, j) == (1, 2) { f.from_i64(2) } else { f.one() }).unwrap();
        assert_eq!(t.validate(), Err(AlgebraError::Invalid(TableViolation::Asymmetric(1, 2))));
    }

    #[test]
    fn reduction_of_z4_by_two() {
        let l = lattice("4");
        let z2 = FiniteAbelianGroup::cyclic(2);
        let eta = GroupHomomorphism::new(l.group().clone(), z2, vec![GroupElement(vec![1])]).unwrap();
        let ray = l.pardini_ray(&eta).unwrap();
        let psi = MultiplicationTable::from_ray(&l, &ray, Field::Rationals, None).unwrap();
        assert_eq!(psi.h_subgroup(), vec![0, 2]);
        let (reduced, proj) = psi.reduce_mod_h(&[0, 2], Some(&[0, 1])).unwrap();
        assert_eq!(proj.target().size(), 2);
        let small = lattice("2");
        let id = &pardini_homomorphisms(small.group())[0];
        let expected = MultiplicationTable::from_ray(&small, &small.pardini_ray(id).unwrap(), Field::Rationals, None).unwrap();
        assert_eq!(reduced, expected);
        assert!(psi.reduce_mod_h(&[0, 1, 2, 3], None).is_err());
    }

    #[test]
    fn quotient_ring_dimension() {
        // k[s,t]/(s^2, t^5, s t^3) graded by Z/8 with deg s = 5, deg t = 1
        let g = FiniteAbelianGroup::cyclic(8);
        let f = Field::Prime(101);
        let rules = vec![
            RewriteRule { lead: (2, 0), coeff: f.zero(), tail: (0, 2) },
            RewriteRule { lead: (0, 5), coeff: f.zero(), tail: (1, 0) },
            RewriteRule { lead: (1, 3), coeff: f.zero(), tail: (0, 0) },
        ];
        let ring = QuotientRing { group: g, field: f, deg_s: 5, deg_t: 1, rules, basis: vec![] };
        assert_eq!(ring.standard_monomials().unwrap().len(), 8);
    }

    proptest! {
        #[test]
        fn twisting_keeps_tables_valid(seed in prop::collection::vec(1u64..7, 5)) {
            let l = lattice("6");
            let f = Field::Prime(7);
            let rays = l.extremal_rays().unwrap();
            let ray = &rays[(seed[0] as usize) % rays.len()];
            let mut values = vec![f.one()];
            values.extend(seed.iter().map(|&x| f.from_i64(x as i64)));
            let u = UnitCharacter::new(f, values).unwrap();
            let psi = MultiplicationTable::from_ray(&l, ray, f, Some(&u)).unwrap();
            prop_assert!(psi.validate().is_ok());
            let plain = MultiplicationTable::from_ray(&l, ray, f, None).unwrap();
            prop_assert_eq!(psi.h_profile(), plain.h_profile());
        }
    }
}
