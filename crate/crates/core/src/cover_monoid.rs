//! The lattice `K` of a finite abelian group `M`, the monoid `K_+` generated by
//! the vectors `v_{m,n} = e_m + e_n - e_{m+n}`, its reduced binomial
//! presentation, and rays of the dual cone together with the subgroup `H` and
//! the invariant `h` they determine.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use crate::abelian_group::{enumerate_surjections, FiniteAbelianGroup, GroupError, GroupHomomorphism};
use crate::exact_linalg::{
    brute_force_dual_rays, dot, dual_cone_extreme_rays, kernel_lattice_basis, strict_feasible_point,
    sublattice_equal, IntMatrix, Lattice, LinalgError, RationalCone,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoverError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("not a ray of the dual cone: {0}")]
    NotARay(String),
    #[error("the zero ray has no smoothness verdict")]
    ZeroRay,
    #[error("{0} is not surjective")]
    NotSurjective(String),
    #[error("rays live on groups of different orders ({0} and {1})")]
    MismatchedGroups(usize, usize),
}

/// The lattice `K` of `M` with a fixed basis and the generators of `K_+`.
///
/// Coordinates on `Z^M / <e_0>` are indexed by the nonzero elements, so the
/// coordinate of `e_m` is `index(m) - 1`.
#[derive(Clone, Debug)]
pub struct CoverLattice {
    group: FiniteAbelianGroup,
    add: Vec<usize>,
    neg: Vec<usize>,
    generators: Vec<(usize, usize)>,
    pair_index: Vec<usize>,
    k: Lattice,
    gen_coords: Vec<Vec<BigInt>>,
}

impl CoverLattice {
    pub fn new(group: &FiniteAbelianGroup) -> Result<Self, CoverError> {
        let n = group.size();
        if n < 2 {
            return Err(CoverError::NotARay("the trivial group has no cover lattice".into()));
        }
        let mut add = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                add[i * n + j] = group.add_idx(i, j);
            }
        }
        let neg = (0..n).map(|i| group.neg_idx(i)).collect();
        let mut generators = Vec::new();
        let mut pair_index = vec![usize::MAX; n * n];
        for i in 1..n {
            for j in i..n {
                pair_index[i * n + j] = generators.len();
                pair_index[j * n + i] = generators.len();
                generators.push((i, j));
            }
        }
        let d = n - 1;
        let ambient: Vec<Vec<BigInt>> = generators
            .iter()
            .map(|&(i, j)| {
                let mut v = vec![BigInt::zero(); d];
                v[i - 1] += 1;
                v[j - 1] += 1;
                let s = add[i * n + j];
                if s != 0 {
                    v[s - 1] -= 1;
                }
                v
            })
            .collect();
        let k = Lattice::from_generators(d, &ambient);
        let gen_coords = ambient.iter().map(|v| k.coordinates(v).expect("generator lies in K")).collect();
        let lattice = CoverLattice { group: group.clone(), add, neg, generators, pair_index, k, gen_coords };
        lattice.check_kernel();
        Ok(lattice)
    }

    // K has full rank and index |M|, and each basis vector maps to zero in M.
    fn check_kernel(&self) {
        let n = self.size();
        assert_eq!(self.k.rank(), n - 1, "K has full rank");
        let index = self.k.basis().iter().enumerate().fold(BigInt::one(), |acc, (i, row)| acc * &row[i]);
        assert_eq!(index, BigInt::from(n), "K has index |M|");
        for row in self.k.basis() {
            let image = row.iter().enumerate().fold(0usize, |acc, (c, x)| {
                let k = x.mod_floor(&BigInt::from(n)).to_i64().expect("small");
                self.add(acc, self.group.scale_idx(c + 1, k))
            });
            assert_eq!(image, 0, "basis vector of K maps to zero");
        }
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn size(&self) -> usize {
        self.group.size()
    }

    pub fn rank(&self) -> usize {
        self.size() - 1
    }

    pub fn add(&self, i: usize, j: usize) -> usize {
        self.add[i * self.size() + j]
    }

    pub fn neg(&self, i: usize) -> usize {
        self.neg[i]
    }

    /// Unordered pairs `(m, n)` of nonzero elements with `m <= n`.
    pub fn generators(&self) -> &[(usize, usize)] {
        &self.generators
    }

    pub fn pair_index(&self, i: usize, j: usize) -> Option<usize> {
        let k = self.pair_index[i * self.size() + j];
        (k != usize::MAX).then_some(k)
    }

    /// Basis of `K` (rows, in the coordinates of `Z^M / <e_0>`).
    pub fn k_basis(&self) -> &[Vec<BigInt>] {
        self.k.basis()
    }

    /// Coordinates of the generators in the basis of `K`.
    pub fn generator_coordinates(&self) -> &[Vec<BigInt>] {
        &self.gen_coords
    }

    /// `v_{m,n}` in the coordinates of `Z^M / <e_0>`.
    pub fn generator_vector(&self, i: usize, j: usize) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); self.rank()];
        for x in [i, j] {
            if x != 0 {
                v[x - 1] += 1;
            }
        }
        let s = self.add(i, j);
        if s != 0 {
            v[s - 1] -= 1;
        }
        v
    }

    pub fn cone(&self) -> RationalCone {
        RationalCone { ambient_rank: self.rank(), generators: self.gen_coords.clone() }
    }

    pub fn ray_from_e_values(&self, e: &[BigRational]) -> Result<Ray, CoverError> {
        let n = self.size();
        if e.len() != n {
            return Err(CoverError::NotARay(format!("{} values for a group of order {n}", e.len())));
        }
        if !e[0].is_zero() {
            return Err(CoverError::NotARay("the value on e_0 must vanish".into()));
        }
        let den = e.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
        let nums: Vec<BigInt> = e.iter().map(|x| (x * BigRational::from_integer(den.clone())).to_integer()).collect();
        self.ray_from_scaled(nums, den)
    }

    fn ray_from_scaled(&self, nums: Vec<BigInt>, den: BigInt) -> Result<Ray, CoverError> {
        let n = self.size();
        let g = nums.iter().fold(den.clone(), |g, x| g.gcd(x));
        let (nums, den): (Vec<BigInt>, BigInt) = (nums.iter().map(|x| x / &g).collect(), &den / &g);
        let mut values = vec![0u64; n * n];
        for i in 0..n {
            for j in i..n {
                let total = &nums[i] + &nums[j] - &nums[self.add(i, j)];
                let (q, r) = total.div_rem(&den);
                if !r.is_zero() || q.is_negative() {
                    return Err(CoverError::NotARay(format!(
                        "value {total}/{den} on ({}, {})",
                        self.group.element(i),
                        self.group.element(j)
                    )));
                }
                let q = q.to_u64().ok_or_else(|| CoverError::NotARay("value too large".into()))?;
                values[i * n + j] = q;
                values[j * n + i] = q;
            }
        }
        Ok(Ray { n, denominator: den, e_numerators: nums, values })
    }

    /// The ray whose values on the basis of `K` are `f`.
    pub fn ray_from_k_coordinates(&self, f: &[BigInt]) -> Result<Ray, CoverError> {
        let d = self.rank();
        if f.len() != d {
            return Err(CoverError::NotARay(format!("{} coordinates for rank {d}", f.len())));
        }
        // basis is upper triangular with pivots on the diagonal: back substitution
        let basis = self.k.basis();
        let mut e = vec![BigRational::zero(); d];
        for i in (0..d).rev() {
            let mut acc = BigRational::from_integer(f[i].clone());
            for j in i + 1..d {
                if !basis[i][j].is_zero() {
                    acc -= &e[j] * BigRational::from_integer(basis[i][j].clone());
                }
            }
            e[i] = acc / BigRational::from_integer(basis[i][i].clone());
        }
        let mut all = vec![BigRational::zero()];
        all.extend(e);
        self.ray_from_e_values(&all)
    }

    pub fn zero_ray(&self) -> Ray {
        let n = self.size();
        Ray { n, denominator: BigInt::one(), e_numerators: vec![BigInt::zero(); n], values: vec![0; n * n] }
    }

    /// The ray pulled back along `phi: M -> M'`, where `ray` lives on `M'`.
    pub fn pullback(&self, ray: &Ray, phi: &GroupHomomorphism) -> Result<Ray, CoverError> {
        if phi.source() != &self.group {
            return Err(CoverError::Group(GroupError::BadHomomorphism("source is not this group".into())));
        }
        if phi.target().size() != ray.n {
            return Err(CoverError::MismatchedGroups(phi.target().size(), ray.n));
        }
        let n = self.size();
        let nums: Vec<BigInt> = (0..n).map(|i| ray.e_numerators[phi.apply_idx(i)].clone()).collect();
        self.ray_from_scaled(nums, ray.denominator.clone())
    }

    /// Primitive extreme rays of the dual cone of `K_+`, by double description.
    pub fn extremal_rays(&self) -> Result<Vec<Ray>, CoverError> {
        let raw = dual_cone_extreme_rays(&self.cone())?;
        let mut rays = raw.iter().map(|f| self.ray_from_k_coordinates(f)).collect::<Result<Vec<_>, _>>()?;
        rays.sort_by(|a, b| self.generator_values(a).cmp(&self.generator_values(b)));
        Ok(rays)
    }

    /// Same as [`CoverLattice::extremal_rays`] by enumerating subsets of generators.
    pub fn extremal_rays_brute_force(&self) -> Result<Vec<Ray>, CoverError> {
        let raw = brute_force_dual_rays(&self.cone())?;
        let mut rays = raw.iter().map(|f| self.ray_from_k_coordinates(f)).collect::<Result<Vec<_>, _>>()?;
        rays.sort_by(|a, b| self.generator_values(a).cmp(&self.generator_values(b)));
        Ok(rays)
    }

    pub fn generator_values(&self, ray: &Ray) -> Vec<u64> {
        self.generators.iter().map(|&(i, j)| ray.value(i, j)).collect()
    }

    /// Values of the ray on the basis of `K`.
    pub fn k_coordinates(&self, ray: &Ray) -> Vec<BigInt> {
        self.k
            .basis()
            .iter()
            .map(|row| {
                let s: BigInt = dot(row, &ray.e_numerators[1..]);
                let (q, r) = s.div_rem(&ray.denominator);
                assert!(r.is_zero(), "ray is integral on K");
                q
            })
            .collect()
    }

    /// Generator indices where the ray is positive.
    pub fn support(&self, ray: &Ray) -> BTreeSet<usize> {
        self.generators.iter().enumerate().filter(|(_, &(i, j))| ray.value(i, j) > 0).map(|(k, _)| k).collect()
    }

    /// Divides by the gcd of the values on `K`.
    pub fn primitive(&self, ray: &Ray) -> Ray {
        let g = self.k_coordinates(ray).iter().fold(BigInt::zero(), |g, x| g.gcd(x));
        if g.is_zero() || g.is_one() {
            return ray.clone();
        }
        self.ray_from_scaled(ray.e_numerators.clone(), &ray.denominator * &g).expect("dividing by the content")
    }

    pub fn pardini_ray(&self, eta: &GroupHomomorphism) -> Result<Ray, CoverError> {
        if eta.source() != &self.group || eta.target().rank() != 1 {
            return Err(CoverError::Group(GroupError::BadHomomorphism("expected a map onto a cyclic group".into())));
        }
        if !eta.is_surjective() {
            return Err(CoverError::NotSurjective(format!("map onto {}", eta.target())));
        }
        let l = eta.target().size();
        let nums = (0..self.size()).map(|i| BigInt::from(eta.apply_idx(i))).collect();
        self.ray_from_scaled(nums, BigInt::from(l))
    }

    /// `H = {m : E(v_{m,-m}) = 0}`, as sorted element indices.
    pub fn h_subgroup(&self, ray: &Ray) -> Vec<usize> {
        (0..self.size()).filter(|&m| ray.value(m, self.neg(m)) == 0).collect()
    }

    pub fn h_profile(&self, ray: &Ray) -> HProfile {
        h_profile(&self.group, |u, v| ray.value(u, v) > 0)
    }

    pub fn h_value(&self, ray: &Ray) -> u64 {
        self.h_profile(ray).h
    }

    /// Generator indices on which every ray of the sequence vanishes.
    fn common_zeros(&self, rays: &[Ray]) -> Vec<usize> {
        (0..self.generators.len())
            .filter(|&k| {
                let (i, j) = self.generators[k];
                rays.iter().all(|r| r.value(i, j) == 0)
            })
            .collect()
    }

    /// Checks the smoothness conditions for a sequence of rays and returns, for
    /// each ray, the index of a generator `v_j` with `E^i(v_j) = delta_ij`.
    pub fn is_smooth_sequence(&self, rays: &[Ray]) -> Result<Option<Vec<usize>>, CoverError> {
        for r in rays {
            if r.n != self.size() {
                return Err(CoverError::MismatchedGroups(r.n, self.size()));
            }
        }
        let mut witnesses = Vec::with_capacity(rays.len());
        for i in 0..rays.len() {
            let found = self.generators.iter().position(|&(a, b)| {
                rays.iter().enumerate().all(|(j, r)| r.value(a, b) == u64::from(i == j))
            });
            match found {
                Some(k) => witnesses.push(k),
                None => return Ok(None),
            }
        }
        let d = self.rank();
        let zeros: Vec<Vec<BigInt>> = self.common_zeros(rays).iter().map(|&k| self.gen_coords[k].clone()).collect();
        let kernel = if rays.is_empty() {
            (0..d).map(|i| unit(d, i)).collect()
        } else {
            let f = IntMatrix::from_rows(d, rays.iter().map(|r| self.k_coordinates(r)).collect())?;
            kernel_lattice_basis(&f)
        };
        Ok(sublattice_equal(&zeros, &kernel, d).then_some(witnesses))
    }

    pub fn is_smooth_ray(&self, ray: &Ray) -> Result<bool, CoverError> {
        if ray.is_zero() {
            return Err(CoverError::ZeroRay);
        }
        Ok(self.is_smooth_sequence(std::slice::from_ref(ray))?.is_some())
    }

    /// A ray of the dual cone whose support is exactly the given set of
    /// generator indices, if one exists. Decided by exact rational feasibility.
    pub fn support_realizable(&self, support: &BTreeSet<usize>) -> Option<Ray> {
        let d = self.rank();
        let mut equalities = Vec::new();
        let mut positives = Vec::new();
        for (k, c) in self.gen_coords.iter().enumerate() {
            if support.contains(&k) {
                positives.push(c.clone());
            } else {
                equalities.push(c.clone());
            }
        }
        if positives.is_empty() {
            return Some(self.zero_ray());
        }
        let f = strict_feasible_point(d, &equalities, &positives)?;
        let ray = self.ray_from_k_coordinates(&f).expect("feasible point lies in the dual cone");
        debug_assert_eq!(&self.support(&ray), support);
        Some(ray)
    }

    /// Reduced binomial presentation of the monoid ring of `K_+`.
    pub fn reduced_presentation(&self) -> Presentation {
        let n = self.size();
        let nz = |x: usize| x != 0;
        let mut variables = Vec::new();
        for &(i, j) in &self.generators {
            if nz(self.add(i, j)) {
                variables.push((i, j));
            }
        }
        let var = |a: usize, b: usize| if a <= b { (a, b) } else { (b, a) };
        let mut relations = BTreeSet::new();
        for m in 1..n {
            for nn in 1..n {
                for t in 1..n {
                    let mn = self.add(m, nn);
                    let nt = self.add(nn, t);
                    if !nz(mn) || !nz(nt) || !nz(self.add(mn, t)) || m == t {
                        continue;
                    }
                    if let Some(rel) = BinomialRelation::new([var(m, nn), var(mn, t)], [var(nn, t), var(nt, m)]) {
                        relations.insert(rel);
                    }
                }
            }
        }
        for m in 1..n {
            let minus = self.neg(m);
            for s in 1..n {
                for t in 1..n {
                    if s == t || s == m || t == m {
                        continue;
                    }
                    let lhs = [var(minus, t), var(self.add(minus, t), m)];
                    let rhs = [var(minus, s), var(self.add(minus, s), m)];
                    if let Some(rel) = BinomialRelation::new(lhs, rhs) {
                        relations.insert(rel);
                    }
                }
            }
        }
        Presentation { group: self.group.clone(), variables, relations: relations.into_iter().collect() }
    }

    pub fn ray_json(&self, ray: &Ray) -> Value {
        json!({
            "denominator": ray.denominator.to_string(),
            "e_values": ray.e_numerators.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            "generator_values": self.generator_values(ray).iter().map(|x| x.to_string()).collect::<Vec<_>>(),
        })
    }
}

fn unit(d: usize, i: usize) -> Vec<BigInt> {
    (0..d).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()
}

/// An integral functional on `K`, stored through its values on the `e_m`
/// (a common denominator over integer numerators) and the resulting table
/// of values `E_{m,n}` on all pairs.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ray {
    n: usize,
    denominator: BigInt,
    e_numerators: Vec<BigInt>,
    values: Vec<u64>,
}

impl Ray {
    pub fn value(&self, i: usize, j: usize) -> u64 {
        self.values[i * self.n + j]
    }

    pub fn group_size(&self) -> usize {
        self.n
    }

    pub fn denominator(&self) -> &BigInt {
        &self.denominator
    }

    pub fn e_numerators(&self) -> &[BigInt] {
        &self.e_numerators
    }

    pub fn e_value(&self, i: usize) -> BigRational {
        BigRational::new(self.e_numerators[i].clone(), self.denominator.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    pub fn checked_add(&self, other: &Ray) -> Result<Ray, CoverError> {
        if self.n != other.n {
            return Err(CoverError::MismatchedGroups(self.n, other.n));
        }
        let den = self.denominator.lcm(&other.denominator);
        let a = &den / &self.denominator;
        let b = &den / &other.denominator;
        let nums: Vec<BigInt> =
            self.e_numerators.iter().zip(&other.e_numerators).map(|(x, y)| x * &a + y * &b).collect();
        let g = nums.iter().fold(den.clone(), |g, x| g.gcd(x));
        Ok(Ray {
            n: self.n,
            denominator: &den / &g,
            e_numerators: nums.iter().map(|x| x / &g).collect(),
            values: self.values.iter().zip(&other.values).map(|(x, y)| x + y).collect(),
        })
    }

    pub fn scaled(&self, k: u64) -> Ray {
        if k == 0 {
            return Ray {
                n: self.n,
                denominator: BigInt::one(),
                e_numerators: vec![BigInt::zero(); self.n],
                values: vec![0; self.values.len()],
            };
        }
        let kk = BigInt::from(k);
        let nums: Vec<BigInt> = self.e_numerators.iter().map(|x| x * &kk).collect();
        let g = nums.iter().fold(self.denominator.clone(), |g, x| g.gcd(x));
        Ray {
            n: self.n,
            denominator: &self.denominator / &g,
            e_numerators: nums.iter().map(|x| x / &g).collect(),
            values: self.values.iter().map(|v| v * k).collect(),
        }
    }
}

/// `H`, the components `h_t` and `h` of a multiplication pattern.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HProfile {
    pub h_subgroup: Vec<usize>,
    pub components: Vec<bool>,
    pub h: u64,
}

/// Computes `H = {m : psi_{m,-m} != 0}`, the components and `h` from a
/// predicate telling whether `psi_{u,v}` vanishes.
pub fn h_profile(group: &FiniteAbelianGroup, vanishes: impl Fn(usize, usize) -> bool) -> HProfile {
    let n = group.size();
    let in_h: Vec<bool> = (0..n).map(|m| !vanishes(m, group.neg_idx(m))).collect();
    let h_subgroup: Vec<usize> = (0..n).filter(|&m| in_h[m]).collect();
    // coset label: smallest element of t + H
    let label: Vec<usize> =
        (0..n).map(|t| h_subgroup.iter().map(|&h| group.add_idx(t, h)).min().expect("0 lies in H")).collect();
    let mut blocked = vec![false; n];
    for u in (0..n).filter(|&u| !in_h[u]) {
        for v in (0..n).filter(|&v| !in_h[v]) {
            if !vanishes(u, v) {
                blocked[label[group.add_idx(u, v)]] = true;
            }
        }
    }
    let components: Vec<bool> = (0..n).map(|t| !in_h[t] && !blocked[label[t]]).collect();
    let count = components.iter().filter(|&&c| c).count();
    assert_eq!(count % h_subgroup.len(), 0, "components are constant on cosets of H");
    HProfile { h: (count / h_subgroup.len()) as u64, h_subgroup, components }
}

/// `x_{a,b} * x_{c,d} - x_{e,f} * x_{g,h}` with each side sorted and the
/// sides ordered, so that equal relations compare equal.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BinomialRelation {
    pub lhs: [(usize, usize); 2],
    pub rhs: [(usize, usize); 2],
}

impl BinomialRelation {
    fn new(mut lhs: [(usize, usize); 2], mut rhs: [(usize, usize); 2]) -> Option<Self> {
        lhs.sort();
        rhs.sort();
        match lhs.cmp(&rhs) {
            std::cmp::Ordering::Equal => None,
            std::cmp::Ordering::Less => Some(BinomialRelation { lhs, rhs }),
            std::cmp::Ordering::Greater => Some(BinomialRelation { lhs: rhs, rhs: lhs }),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Presentation {
    pub group: FiniteAbelianGroup,
    pub variables: Vec<(usize, usize)>,
    pub relations: Vec<BinomialRelation>,
}

impl Presentation {
    pub fn variable_name(&self, (a, b): (usize, usize)) -> String {
        format!("x_{{{},{}}}", self.group.element(a), self.group.element(b))
    }

    pub fn relation_line(&self, rel: &BinomialRelation) -> String {
        format!(
            "{}*{} - {}*{}",
            self.variable_name(rel.lhs[0]),
            self.variable_name(rel.lhs[1]),
            self.variable_name(rel.rhs[0]),
            self.variable_name(rel.rhs[1])
        )
    }

    pub fn to_json(&self) -> Value {
        json!({
            "group": self.group.spec(),
            "variables": self.variables.iter().map(|&v| self.variable_name(v)).collect::<Vec<_>>(),
            "relations": self.relations.iter().map(|r| self.relation_line(r)).collect::<Vec<_>>(),
        })
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for rel in &self.relations {
            writeln!(f, "{}", self.relation_line(rel))?;
        }
        Ok(())
    }
}

/// All surjections from `M` onto nontrivial cyclic groups.
pub fn pardini_homomorphisms(group: &FiniteAbelianGroup) -> Vec<GroupHomomorphism> {
    let e = group.exponent();
    (2..=e)
        .filter(|l| e % l == 0)
        .flat_map(|l| enumerate_surjections(group, &FiniteAbelianGroup::cyclic(l)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian_group::GroupElement;

    fn lattice(spec: &str) -> CoverLattice {
        CoverLattice::new(&FiniteAbelianGroup::parse(spec).unwrap()).unwrap()
    }

    #[test]
    fn z2_has_a_single_ray() {
        let l = lattice("2");
        let rays = l.extremal_rays().unwrap();
        assert_eq!(rays.len(), 1);
        assert_eq!(rays[0].value(1, 1), 1);
        assert_eq!(rays[0].e_value(1), BigRational::new(1.into(), 2.into()));
    }

    #[test]
    fn z3_rays_are_the_two_identities() {
        let l = lattice("3");
        let rays = l.extremal_rays().unwrap();
        let g = l.group().clone();
        let id = GroupHomomorphism::new(g.clone(), g.clone(), vec![GroupElement(vec![1])]).unwrap();
        let minus = GroupHomomorphism::new(g.clone(), g.clone(), vec![GroupElement(vec![2])]).unwrap();
        let mut expected = vec![l.pardini_ray(&id).unwrap(), l.pardini_ray(&minus).unwrap()];
        expected.sort_by_key(|r| l.generator_values(r));
        assert_eq!(rays, expected);
    }

    #[test]
    fn klein_four_is_free() {
        let l = lattice("2,2");
        let rays = l.extremal_rays().unwrap();
        assert_eq!(rays.len(), 3);
        assert!(l.is_smooth_sequence(&rays).unwrap().is_some());
    }

    #[test]
    fn z4_presentation_is_one_binomial() {
        let l = lattice("4");
        let p = l.reduced_presentation();
        assert_eq!(p.relations.len(), 1);
        assert_eq!(p.to_string().trim(), "x_{1,1}*x_{2,3} - x_{1,2}*x_{3,3}");
        assert_eq!(l.extremal_rays().unwrap().len(), 4);
    }

    #[test]
    fn small_presentations() {
        let z3 = lattice("3").reduced_presentation();
        assert_eq!(z3.variables, vec![(1, 1), (2, 2)]);
        assert!(z3.relations.is_empty());
        let v4 = lattice("2,2").reduced_presentation();
        assert_eq!(v4.variables.len(), 3);
        assert!(v4.relations.is_empty());
    }

    #[test]
    fn relations_balance_in_k() {
        for spec in ["5", "6", "2,4", "3,3"] {
            let l = lattice(spec);
            for rel in l.reduced_presentation().relations {
                let side = |s: [(usize, usize); 2]| {
                    let a = l.generator_vector(s[0].0, s[0].1);
                    let b = l.generator_vector(s[1].0, s[1].1);
                    a.iter().zip(&b).map(|(x, y)| x + y).collect::<Vec<BigInt>>()
                };
                assert_eq!(side(rel.lhs), side(rel.rhs));
            }
        }
    }

    #[test]
    fn pardini_on_z2() {
        let l = lattice("2");
        let eta = pardini_homomorphisms(l.group());
        assert_eq!(eta.len(), 1);
        assert_eq!(l.pardini_ray(&eta[0]).unwrap().value(1, 1), 1);
        let z2 = FiniteAbelianGroup::cyclic(2);
        let zero = GroupHomomorphism::new(z2.clone(), z2, vec![GroupElement(vec![0])]).unwrap();
        assert!(matches!(l.pardini_ray(&zero), Err(CoverError::NotSurjective(_))));
    }

    #[test]
    fn h_of_extreme_patterns() {
        let l = lattice("6");
        assert_eq!(l.h_value(&l.zero_ray()), 0);
        let e = pardini_homomorphisms(l.group());
        let all_positive = e.iter().fold(l.zero_ray(), |acc, eta| acc.checked_add(&l.pardini_ray(eta).unwrap()).unwrap());
        let positive_everywhere = l.generators().iter().all(|&(i, j)| all_positive.value(i, j) > 0);
        if positive_everywhere {
            assert_eq!(l.h_value(&all_positive), 5);
        }
        assert!(matches!(l.is_smooth_ray(&l.zero_ray()), Err(CoverError::ZeroRay)));
    }

    #[test]
    fn non_integral_values_are_rejected() {
        let l = lattice("2");
        let half = BigRational::new(1.into(), 4.into());
        assert!(l.ray_from_e_values(&[BigRational::zero(), half]).is_err());
    }

    #[test]
    fn supports_of_extremal_rays_are_realizable() {
        let l = lattice("4");
        for r in l.extremal_rays().unwrap() {
            let found = l.support_realizable(&l.support(&r)).unwrap();
            assert_eq!(l.primitive(&found), r);
        }
    }
}
