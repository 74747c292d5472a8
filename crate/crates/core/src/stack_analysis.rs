//! Global verdicts on the moduli of covers of a group `M`: smoothness,
//! reducibility certificates, membership in the loci `{h <= 1}` and
//! `{h <= 2}`, and the toric fan of a collection of smooth sequences.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use crate::abelian_group::FiniteAbelianGroup;
use crate::cover_monoid::{pardini_homomorphisms, CoverError, CoverLattice, Ray};
use crate::exact_linalg::{nonnegative_solution, primitive, smith_normal_form, IntMatrix};
use crate::graded_algebra::MultiplicationTable;
use crate::two_degree::{enumerate_theta2, TwoDegreeError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StackError {
    #[error(transparent)]
    Cover(#[from] CoverError),
    #[error(transparent)]
    TwoDegree(#[from] TwoDegreeError),
    #[error("{0}")]
    Inconsistent(String),
    #[error("sequence {0} is not smooth")]
    NotSmooth(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SmoothnessVerdict {
    Smooth,
    /// `x_{m,n} x_{m+n,t} = x_{n,t} x_{n+t,m}` with all indices nonzero and `m != t`.
    Singular { m: usize, n: usize, t: usize },
}

fn in_smooth_list(g: &FiniteAbelianGroup) -> bool {
    let f = g.invariant_factors();
    f == [2] || f == [3] || f == [2, 2]
}

/// Searches for a binomial relation between distinct prime generators and
/// cross-checks the answer against the three smooth cases.
pub fn smoothness_verdict(group: &FiniteAbelianGroup) -> Result<SmoothnessVerdict, StackError> {
    let size = group.size();
    let mut verdict = SmoothnessVerdict::Smooth;
    'search: for m in 1..size {
        for n in 1..size {
            let mn = group.add_idx(m, n);
            if mn == 0 {
                continue;
            }
            for t in 1..size {
                let nt = group.add_idx(n, t);
                if t == m || nt == 0 || group.add_idx(mn, t) == 0 {
                    continue;
                }
                verdict = SmoothnessVerdict::Singular { m, n, t };
                break 'search;
            }
        }
    }
    let expected_smooth = size == 1 || in_smooth_list(group);
    if expected_smooth != (verdict == SmoothnessVerdict::Smooth) {
        return Err(StackError::Inconsistent(format!("smoothness search disagrees with the classification for {group}")));
    }
    Ok(verdict)
}

pub fn singular_relation(group: &FiniteAbelianGroup, m: usize, n: usize, t: usize) -> String {
    let e = |i: usize| group.element(i).to_string();
    let var = |a: usize, b: usize| format!("x_{{{},{}}}", e(a), e(b));
    format!(
        "{}*{} = {}*{}",
        var(m, n),
        var(group.add_idx(m, n), t),
        var(n, t),
        var(group.add_idx(n, t), m)
    )
}

/// Whether `(m, n, t, a)` satisfies the three conditions of the reducibility criterion.
pub fn is_reducibility_certificate(group: &FiniteAbelianGroup, m: usize, n: usize, t: usize, a: usize) -> bool {
    let g = group;
    if m == 0 || n == 0 || t == 0 || m == n || n == t || m == t {
        return false;
    }
    let s = |x: usize, y: usize| g.sub_idx(x, y);
    let p = |x: usize, y: usize| g.add_idx(x, y);
    let forbidden = [
        0,
        m,
        n,
        t,
        s(m, n),
        s(n, m),
        s(n, t),
        s(t, n),
        s(m, t),
        s(p(m, m), t),
        s(p(n, n), t),
        s(p(m, n), t),
        s(p(m, n), p(t, t)),
    ];
    !forbidden.contains(&a) && p(a, a) != s(p(m, n), t)
}

/// The lexicographically first certificate `(m, n, t, a)`, if any.
pub fn reducibility_certificate(group: &FiniteAbelianGroup) -> Option<(usize, usize, usize, usize)> {
    let size = group.size();
    for m in 1..size {
        for n in 1..size {
            for t in 1..size {
                if m == n || n == t || m == t {
                    continue;
                }
                for a in 1..size {
                    if is_reducibility_certificate(group, m, n, t, a) {
                        return Some((m, n, t, a));
                    }
                }
            }
        }
    }
    None
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IrreducibilityReport {
    Reducible { m: usize, n: usize, t: usize, a: usize },
    Irreducible { reason: String },
    Unknown,
}

impl fmt::Display for IrreducibilityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IrreducibilityReport::Reducible { .. } => write!(f, "reducible"),
            IrreducibilityReport::Irreducible { .. } => write!(f, "irreducible"),
            IrreducibilityReport::Unknown => write!(f, "unknown"),
        }
    }
}

pub fn irreducibility_report(group: &FiniteAbelianGroup) -> Result<IrreducibilityReport, StackError> {
    if let Some((m, n, t, a)) = reducibility_certificate(group) {
        return Ok(IrreducibilityReport::Reducible { m, n, t, a });
    }
    let f = group.invariant_factors();
    if group.size() == 1 || in_smooth_list(group) {
        return Ok(IrreducibilityReport::Irreducible { reason: "the moduli space is smooth and connected".into() });
    }
    if f == [4] {
        return Ok(IrreducibilityReport::Irreducible { reason: "the ring is integral and normal".into() });
    }
    if f == [5] || f == [6] || f == [7] || f == [2, 2, 2] {
        return Ok(IrreducibilityReport::Unknown);
    }
    Err(StackError::Inconsistent(format!("no reducibility certificate for {group}")))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HLocusReport {
    pub h: u64,
    pub level: u64,
    /// `h <= level`.
    pub by_h: bool,
    /// The zero pattern is the support of an element of one of the cones.
    pub by_support: bool,
}

/// Precomputed supports of the cones spanned by the Pardini rays and by `Theta^2_M`.
pub struct HLocusContext<'a> {
    lattice: &'a CoverLattice,
    level1: BTreeSet<BTreeSet<usize>>,
    level2: BTreeSet<BTreeSet<usize>>,
}

impl<'a> HLocusContext<'a> {
    pub fn new(lattice: &'a CoverLattice) -> Result<Self, StackError> {
        let mut level1 = BTreeSet::from([BTreeSet::new()]);
        for eta in pardini_homomorphisms(lattice.group()) {
            level1.insert(lattice.support(&lattice.pardini_ray(&eta)?));
        }
        let mut level2 = BTreeSet::from([BTreeSet::new()]);
        for seq in enumerate_theta2(lattice)? {
            let supports: Vec<BTreeSet<usize>> = seq.iter().map(|r| lattice.support(r)).collect();
            for mask in 1..(1usize << supports.len()) {
                let mut union = BTreeSet::new();
                for (i, s) in supports.iter().enumerate() {
                    if mask & (1 << i) != 0 {
                        union.extend(s.iter().copied());
                    }
                }
                level2.insert(union);
            }
        }
        Ok(HLocusContext { lattice, level1, level2 })
    }

    fn report(&self, h: u64, zeros: &BTreeSet<usize>, level: u64) -> Result<HLocusReport, StackError> {
        let by_support = match level {
            1 => self.level1.contains(zeros),
            2 => self.level2.contains(zeros),
            _ => return Err(StackError::Inconsistent(format!("level must be 1 or 2, got {level}"))),
        };
        let report = HLocusReport { h, level, by_h: h <= level, by_support };
        if report.by_h != report.by_support {
            return Err(StackError::Inconsistent(format!(
                "h = {h} but the support test at level {level} says {by_support}"
            )));
        }
        Ok(report)
    }

    pub fn test_ray(&self, ray: &Ray, level: u64) -> Result<HLocusReport, StackError> {
        self.report(self.lattice.h_value(ray), &self.lattice.support(ray), level)
    }

    pub fn test_table(&self, psi: &MultiplicationTable, level: u64) -> Result<HLocusReport, StackError> {
        let zeros = self
            .lattice
            .generators()
            .iter()
            .enumerate()
            .filter(|(_, &(i, j))| psi.vanishes(i, j))
            .map(|(k, _)| k)
            .collect();
        self.report(psi.h_value(), &zeros, level)
    }
}

/// A fan given by primitive ray generators in the coordinates of the basis
/// of `K` and its maximal cones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fan {
    pub lattice_rank: usize,
    pub rays: Vec<Vec<BigInt>>,
    pub max_cones: Vec<Vec<usize>>,
}

impl Fan {
    pub fn to_json(&self) -> Value {
        json!({
            "lattice_rank": self.lattice_rank.to_string(),
            "rays": self.rays.iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "max_cones": self.max_cones.iter().map(|c| c.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })
    }

    /// Ray generators first, then one maximal cone per line.
    pub fn to_text(&self) -> String {
        let mut out = format!("lattice_rank {}\n", self.lattice_rank);
        for r in &self.rays {
            let coords: Vec<String> = r.iter().map(|x| x.to_string()).collect();
            out.push_str(&format!("ray {}\n", coords.join(" ")));
        }
        for c in &self.max_cones {
            let idx: Vec<String> = c.iter().map(|x| x.to_string()).collect();
            out.push_str(&format!("cone {}\n", idx.join(" ")));
        }
        out
    }

    /// Rays of the cone extend to a basis of the lattice.
    pub fn is_unimodular(&self, cone: &[usize]) -> bool {
        if cone.is_empty() {
            return true;
        }
        let rows: Vec<Vec<BigInt>> = cone.iter().map(|&i| self.rays[i].clone()).collect();
        let m = IntMatrix::from_rows(self.lattice_rank, rows).expect("ray lengths match the rank");
        let factors = smith_normal_form(&m).diagonal();
        factors.len() == cone.len() && factors.iter().all(|d| d.is_one() || (-d).is_one())
    }

    /// The intersection of two simplicial cones is the cone on their common rays.
    pub fn meet_in_common_face(&self, a: &[usize], b: &[usize]) -> bool {
        let d = self.lattice_rank;
        let cols = a.len() + b.len() + 1;
        let q = |x: &BigInt| BigRational::from_integer(x.clone());
        let mut rows = vec![vec![BigRational::zero(); cols]; d + 1];
        for k in 0..d {
            for (i, &ra) in a.iter().enumerate() {
                rows[k][i] = q(&self.rays[ra][k]);
            }
            for (j, &rb) in b.iter().enumerate() {
                rows[k][a.len() + j] = -q(&self.rays[rb][k]);
            }
        }
        for (i, ra) in a.iter().enumerate() {
            if !b.contains(ra) {
                rows[d][i] = BigRational::one();
            }
        }
        for (j, rb) in b.iter().enumerate() {
            if !a.contains(rb) {
                rows[d][a.len() + j] = BigRational::one();
            }
        }
        rows[d][cols - 1] = -BigRational::one();
        let mut rhs = vec![BigRational::zero(); d + 1];
        rhs[d] = BigRational::one();
        nonnegative_solution(&rows, &rhs, cols).is_none()
    }

    /// Unimodularity of every cone and the common-face property for every pair.
    pub fn check(&self) -> Result<(), String> {
        for (i, c) in self.max_cones.iter().enumerate() {
            if !self.is_unimodular(c) {
                return Err(format!("cone {i} is not unimodular"));
            }
        }
        for i in 0..self.max_cones.len() {
            for j in i + 1..self.max_cones.len() {
                if !self.meet_in_common_face(&self.max_cones[i], &self.max_cones[j]) {
                    return Err(format!("cones {i} and {j} do not meet in a common face"));
                }
            }
        }
        Ok(())
    }
}

/// The fan whose maximal cones are spanned by the given smooth sequences.
pub fn smooth_locus_fan(lattice: &CoverLattice, theta: &[Vec<Ray>]) -> Result<Fan, StackError> {
    for (i, seq) in theta.iter().enumerate() {
        if lattice.is_smooth_sequence(seq)?.is_none() {
            return Err(StackError::NotSmooth(i));
        }
    }
    let mut rays: Vec<Vec<BigInt>> =
        theta.iter().flatten().map(|r| primitive(&lattice.k_coordinates(r))).collect::<BTreeSet<_>>().into_iter().collect();
    rays.retain(|r| r.iter().any(|x| !x.is_zero()));
    let index = |r: &Ray| rays.binary_search(&primitive(&lattice.k_coordinates(r))).ok();
    let mut cones: BTreeSet<Vec<usize>> = BTreeSet::new();
    for seq in theta {
        let mut cone: Vec<usize> = seq.iter().filter_map(index).collect();
        cone.sort();
        cone.dedup();
        cones.insert(cone);
    }
    let all: Vec<Vec<usize>> = cones.into_iter().collect();
    let max_cones: Vec<Vec<usize>> = all
        .iter()
        .filter(|c| !all.iter().any(|o| o.len() > c.len() && c.iter().all(|x| o.contains(x))))
        .cloned()
        .collect();
    let fan = Fan { lattice_rank: lattice.rank(), rays, max_cones };
    fan.check().map_err(StackError::Inconsistent)?;
    Ok(fan)
}

/// Maximal smooth sequences drawn from the extremal rays, found by extending
/// smooth sequences one ray at a time in increasing order.
pub fn all_smooth_sequences(lattice: &CoverLattice) -> Result<Vec<Vec<Ray>>, StackError> {
    let rays = lattice.extremal_rays()?;
    let mut maximal = Vec::new();
    let mut stack: Vec<(Vec<usize>, usize)> = vec![(Vec::new(), 0)];
    while let Some((seq, start)) = stack.pop() {
        let mut extended = false;
        for k in start..rays.len() {
            let mut next = seq.clone();
            next.push(k);
            let candidate: Vec<Ray> = next.iter().map(|&i| rays[i].clone()).collect();
            if lattice.is_smooth_sequence(&candidate)?.is_some() {
                extended = true;
                stack.push((next, k + 1));
            }
        }
        if !extended && !seq.is_empty() {
            maximal.push(seq);
        }
    }
    // a sequence that could only be extended by earlier rays is not maximal
    let sets: Vec<BTreeSet<usize>> = maximal.iter().map(|s| s.iter().copied().collect()).collect();
    let mut out: Vec<Vec<Ray>> = Vec::new();
    for (i, s) in sets.iter().enumerate() {
        if sets.iter().any(|o| o.len() > s.len() && s.is_subset(o)) {
            continue;
        }
        out.push(maximal[i].iter().map(|&k| rays[k].clone()).collect());
    }
    out.sort();
    out.dedup();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian_group::GroupElement;
    use crate::graded_algebra::Field;
    use crate::two_degree::{invariants_for, lambda_delta};
    use crate::abelian_group::TwoGenPresentation;

    fn group(spec: &str) -> FiniteAbelianGroup {
        FiniteAbelianGroup::parse(spec).unwrap()
    }

    #[test]
    fn smoothness_examples() {
        assert_eq!(smoothness_verdict(&group("3")).unwrap(), SmoothnessVerdict::Smooth);
        assert_eq!(smoothness_verdict(&group("4")).unwrap(), SmoothnessVerdict::Singular { m: 1, n: 2, t: 3 });
        let g = group("4");
        assert_eq!(singular_relation(&g, 1, 2, 3), "x_{1,2}*x_{3,3} = x_{2,3}*x_{1,1}");
        assert!(matches!(smoothness_verdict(&group("2,2,2")).unwrap(), SmoothnessVerdict::Singular { .. }));
    }

    #[test]
    fn reducibility_examples() {
        let z8 = group("8");
        assert!(is_reducibility_certificate(&z8, 2, 4, 6, 1));
        assert!(reducibility_certificate(&z8).is_some());
        let v16 = group("2,2,2,2");
        let e = |c: Vec<u64>| v16.index_of(&GroupElement(c)).unwrap();
        assert!(is_reducibility_certificate(
            &v16,
            e(vec![1, 0, 0, 0]),
            e(vec![0, 1, 0, 0]),
            e(vec![0, 0, 1, 0]),
            e(vec![0, 0, 0, 1])
        ));
        assert_eq!(reducibility_certificate(&group("2")), None);
        assert!(matches!(irreducibility_report(&group("4")).unwrap(), IrreducibilityReport::Irreducible { .. }));
        assert!(matches!(irreducibility_report(&group("9")).unwrap(), IrreducibilityReport::Reducible { .. }));
        assert_eq!(irreducibility_report(&group("5")).unwrap(), IrreducibilityReport::Unknown);
    }

    #[test]
    fn h_locus_examples() {
        let g = group("4");
        let lattice = CoverLattice::new(&g).unwrap();
        let ctx = HLocusContext::new(&lattice).unwrap();
        let zero = lattice.zero_ray();
        assert!(ctx.test_ray(&zero, 1).unwrap().by_h);
        let inv = invariants_for(TwoGenPresentation::new(1, 3, 4).unwrap(), 2).unwrap();
        let (_, delta) = lambda_delta(&inv, &lattice).unwrap();
        assert!(!ctx.test_ray(&delta, 1).unwrap().by_h);
        assert!(ctx.test_ray(&delta, 2).unwrap().by_h);

        let g8 = group("8");
        let l8 = CoverLattice::new(&g8).unwrap();
        let ctx8 = HLocusContext::new(&l8).unwrap();
        let f = Field::Rationals;
        let zero_mult =
            MultiplicationTable::from_fn(g8.clone(), f, |i, j| if i == 0 || j == 0 { f.one() } else { f.zero() }).unwrap();
        let r1 = ctx8.test_table(&zero_mult, 1).unwrap();
        let r2 = ctx8.test_table(&zero_mult, 2).unwrap();
        assert_eq!(r1.h, 7);
        assert!(!r1.by_h && !r2.by_h);
    }

    #[test]
    fn fans_of_small_groups() {
        let l2 = CoverLattice::new(&group("2")).unwrap();
        let fan = smooth_locus_fan(&l2, &enumerate_theta2(&l2).unwrap()).unwrap();
        assert_eq!((fan.lattice_rank, fan.rays.len(), fan.max_cones.len()), (1, 1, 1));

        let l4 = CoverLattice::new(&group("4")).unwrap();
        let fan = smooth_locus_fan(&l4, &enumerate_theta2(&l4).unwrap()).unwrap();
        assert_eq!(fan.lattice_rank, 3);
        assert!(fan.max_cones.iter().all(|c| fan.is_unimodular(c)));

        let v4 = CoverLattice::new(&group("2,2")).unwrap();
        let all = all_smooth_sequences(&v4).unwrap();
        let fan = smooth_locus_fan(&v4, &all).unwrap();
        assert_eq!(fan.max_cones, vec![vec![0, 1, 2]]);
    }

    #[test]
    fn overlapping_cones_are_rejected() {
        let fan = Fan {
            lattice_rank: 2,
            rays: vec![vec![1.into(), 0.into()], vec![0.into(), 1.into()], vec![1.into(), 1.into()]],
            max_cones: vec![vec![0, 1], vec![0, 2]],
        };
        assert!(fan.check().is_err());
        let ok = Fan { max_cones: vec![vec![0, 2], vec![1, 2]], ..fan };
        assert!(ok.check().is_ok());
    }
}
