//! Covers generated in two degrees `m, n` of `M = M_{r,alpha,N}`: the record
//! sets `Omega`, the invariants attached to each `q` in them, the rays
//! `Lambda`, `Delta`, the universal multiplications and their classification,
//! the data `Sigma_M` with their duality, `Theta^2_M`, and the normal crossing
//! rays.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use rayon::prelude::*;
use serde_json::{json, Value};
use thiserror::Error;

use crate::abelian_group::{
    enumerate_surjections, recognize_two_generator_presentation, FiniteAbelianGroup, GroupElement, GroupError,
    GroupHomomorphism, TwoGenGroup, TwoGenPresentation,
};
use crate::cover_monoid::{pardini_homomorphisms, CoverError, CoverLattice, Ray};
use crate::graded_algebra::{AlgebraError, Field, MultiplicationTable, QuotientRing, RewriteRule, Scalar};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TwoDegreeError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Cover(#[from] CoverError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("{q} is not in Omega_({beta},{n})")]
    NotInOmega { q: u64, beta: u64, n: u64 },
    #[error("Lambda and Delta need qr != 1 and q != N (got {0})")]
    Degenerate(String),
    #[error("no degeneracy case applies to {0}")]
    NoDegeneracy(String),
    #[error("{0}")]
    Precondition(String),
    #[error("table is not a twist of the universal multiplication: {0}")]
    NotTwistEquivalent(String),
}

/// The representative of `q * beta mod N` in `(0, N]`.
pub fn d_value(beta: u64, n: u64, q: u64) -> u64 {
    ((q % n) * (beta % n) % n + n - 1) % n + 1
}

/// `Omega_{beta,N}`, ascending.
pub fn omega_set(beta: u64, n: u64) -> Vec<u64> {
    let order = n / beta.gcd(&n);
    let mut out = Vec::new();
    let mut record = 0;
    for q in 1..=order {
        let d = d_value(beta, n, q);
        if d > record {
            out.push(q);
            record = d;
        }
    }
    out
}

fn q_hat_of(beta: u64, n: u64, q: u64) -> u64 {
    (0..q).min_by_key(|&p| d_value(beta, n, p)).expect("q > 0")
}

/// Checks the recursion linking consecutive elements of `Omega_{beta,N}`.
pub fn check_omega_recursion(beta: u64, n: u64) -> Result<(), String> {
    let d = |q| d_value(beta, n, q) as i128;
    let omega = omega_set(beta, n);
    for (k, &qn) in omega.iter().enumerate() {
        let qh = q_hat_of(beta, n, qn);
        let (qh_i, qn_i, n_i) = (qh as i128, qn as i128, n as i128);
        if qh_i * n_i + qn_i * d(qh) - qh_i * d(qn) != n_i {
            return Err(format!("beta={beta} N={n} q={qn}: qhat*N + q*d_qhat - qhat*d_q != N"));
        }
        if k > 0 {
            let prev = omega[k - 1];
            if qn != prev + qh || d(qn) != d(prev) + d(qh) {
                return Err(format!("beta={beta} N={n}: step {prev} -> {qn} is not qhat = {qh}"));
            }
        }
    }
    Ok(())
}

/// Invariants attached to `q_bar` in `Omega_{N-alpha,N}` on the realised group.
#[derive(Clone, Debug)]
pub struct TwoDegreeInvariants {
    pub realized: TwoGenGroup,
    pub q_bar: u64,
    pub q_hat: u64,
    pub q_prime: u64,
    pub z: u64,
    pub x: u64,
    pub y: u64,
    pub w: u64,
    pub gamma: u64,
    pub d_q_hat: u64,
    pub f: Vec<u64>,
    /// Good pair `(E_l, delta_l)` for every element index `l`.
    pub good_pairs: Vec<(u64, u64)>,
}

impl TwoDegreeInvariants {
    pub fn presentation(&self) -> TwoGenPresentation {
        self.realized.presentation
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.realized.group
    }

    pub fn order(&self) -> u64 {
        self.realized.group.size() as u64
    }

    pub fn beta(&self) -> u64 {
        let p = self.presentation();
        (p.n - p.alpha) % p.n
    }

    pub fn d(&self, q: u64) -> u64 {
        d_value(self.beta(), self.presentation().n, q)
    }

    /// `(E_{u,v}, delta_{u,v})` for the pair `v_{u,v}`.
    pub fn pair_defect(&self, u: usize, v: usize) -> (i64, i64) {
        let s = self.realized.group.add_idx(u, v);
        let (a1, b1) = self.good_pairs[u];
        let (a2, b2) = self.good_pairs[v];
        let (a3, b3) = self.good_pairs[s];
        ((a1 + a2) as i64 - a3 as i64, (b1 + b2) as i64 - b3 as i64)
    }

    /// `(Lambda(v_{u,v}), Delta(v_{u,v}))` from the closed formulas.
    pub fn lambda_delta_values(&self, u: usize, v: usize) -> (u64, u64) {
        let (e, d) = self.pair_defect(u, v);
        let size = self.order() as i64;
        let lam = self.x as i64 * e + self.w as i64 * d;
        let del = self.y as i64 * e + self.z as i64 * d;
        debug_assert!(lam >= 0 && del >= 0 && lam % size == 0 && del % size == 0);
        ((lam / size) as u64, (del / size) as u64)
    }

    /// Verifies the numerical identities tying the invariants together.
    pub fn check(&self) -> Result<(), String> {
        let size = self.order() as i64;
        let (z, x, y, w) = (self.z as i64, self.x as i64, self.y as i64, self.w as i64);
        let tag = format!("{} q={}", self.presentation(), self.q_bar);
        if z * x - y * w != size {
            return Err(format!("{tag}: zx - yw = {} != {size}", z * x - y * w));
        }
        if self.f.iter().sum::<u64>() as i64 != size {
            return Err(format!("{tag}: sum of f is not |M|"));
        }
        if self.f.windows(2).any(|p| p[0] < p[1]) {
            return Err(format!("{tag}: f is not decreasing"));
        }
        if self.q_bar > 1 {
            let r = self.presentation().r;
            if self.q_hat * r != self.z - self.w || self.d_q_hat != self.x - self.y {
                return Err(format!("{tag}: qhat r = z - w or d_qhat = x - y fails"));
            }
        }
        if !(y < x && w < z) {
            return Err(format!("{tag}: expected y < x and w < z"));
        }
        let rz = &self.realized;
        if rz.combo(z, -y) != 0 || rz.combo(w, -x) != 0 {
            return Err(format!("{tag}: zm = yn or wm = xn fails"));
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        let p = self.presentation();
        let g = &self.realized.group;
        let pairs: BTreeMap<String, Value> = self
            .good_pairs
            .iter()
            .enumerate()
            .map(|(l, &(a, b))| (g.element(l).to_string(), json!([a.to_string(), b.to_string()])))
            .collect();
        json!({
            "r": p.r.to_string(),
            "alpha": p.alpha.to_string(),
            "N": p.n.to_string(),
            "q_bar": self.q_bar.to_string(),
            "q_hat": self.q_hat.to_string(),
            "q_prime": self.q_prime.to_string(),
            "z": self.z.to_string(),
            "x": self.x.to_string(),
            "y": self.y.to_string(),
            "w": self.w.to_string(),
            "gamma": self.gamma.to_string(),
            "d_q_hat": self.d_q_hat.to_string(),
            "f": self.f.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
            "group": g.spec(),
            "m": g.element(self.realized.m).to_string(),
            "n": g.element(self.realized.n).to_string(),
            "good_pairs": pairs,
        })
    }
}

pub fn invariants_for(p: TwoGenPresentation, q_bar: u64) -> Result<TwoDegreeInvariants, TwoDegreeError> {
    let beta = (p.n - p.alpha) % p.n;
    if !omega_set(beta, p.n).contains(&q_bar) {
        return Err(TwoDegreeError::NotInOmega { q: q_bar, beta, n: p.n });
    }
    let d = |q| d_value(beta, p.n, q);
    let q_hat = q_hat_of(beta, p.n, q_bar);
    let q_prime = q_bar - q_hat;
    let z = q_bar * p.r;
    let y = p.n - d(q_bar);
    let (x, w) = if q_bar > 1 { (p.n - d(q_prime), q_prime * p.r) } else { (p.n, 0) };
    let d_q_hat = d(q_hat);
    let f: Vec<u64> = (0..z).map(|c| if c < q_hat * p.r { x } else { d_q_hat }).collect();
    let realized = p.realize();
    let mut good_pairs = vec![None; realized.group.size()];
    for (a, &fa) in f.iter().enumerate() {
        for b in 0..fa {
            let l = realized.combo(a as i64, b as i64);
            if good_pairs[l].replace((a as u64, b)).is_some() {
                return Err(TwoDegreeError::Precondition(format!("{p} q={q_bar}: two good pairs for one element")));
            }
        }
    }
    let good_pairs = good_pairs
        .into_iter()
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| TwoDegreeError::Precondition(format!("{p} q={q_bar}: good pairs do not cover M")))?;
    Ok(TwoDegreeInvariants {
        realized,
        q_bar,
        q_hat,
        q_prime,
        z,
        x,
        y,
        w,
        gamma: u64::from(q_bar > 1),
        d_q_hat,
        f,
        good_pairs,
    })
}

/// Every `(presentation, q_bar)` with `rN <= bound`.
pub fn all_invariant_inputs(bound: u64) -> Vec<(TwoGenPresentation, u64)> {
    TwoGenPresentation::all_up_to(bound)
        .into_iter()
        .flat_map(|p| omega_set((p.n - p.alpha) % p.n, p.n).into_iter().map(move |q| (p, q)))
        .collect()
}

fn is_nondegenerate(inv: &TwoDegreeInvariants) -> bool {
    inv.z != 1 && inv.q_bar != inv.presentation().n
}

/// `(Lambda, Delta)` on the realised group, whose lattice must be supplied.
pub fn lambda_delta(inv: &TwoDegreeInvariants, lattice: &CoverLattice) -> Result<(Ray, Ray), TwoDegreeError> {
    if !is_nondegenerate(inv) {
        return Err(TwoDegreeError::Degenerate(format!("{} q={}", inv.presentation(), inv.q_bar)));
    }
    if lattice.group() != inv.group() {
        return Err(TwoDegreeError::Precondition("lattice is not on the realised group".into()));
    }
    let size = BigInt::from(inv.order());
    let e = |c1: u64, c2: u64| -> Vec<BigRational> {
        inv.good_pairs
            .iter()
            .map(|&(a, b)| BigRational::new(BigInt::from(c1 * a + c2 * b), size.clone()))
            .collect()
    };
    let lambda = lattice.ray_from_e_values(&e(inv.x, inv.w))?;
    let delta = lattice.ray_from_e_values(&e(inv.y, inv.z))?;
    Ok((lambda, delta))
}

/// Checks the dual basis property, the boundary values and smoothness of `(Lambda, Delta)`.
pub fn check_lambda_delta(inv: &TwoDegreeInvariants, lattice: &CoverLattice) -> Result<(), String> {
    let tag = format!("{} q={}", inv.presentation(), inv.q_bar);
    let (lam, del) = lambda_delta(inv, lattice).map_err(|e| format!("{tag}: {e}"))?;
    let rz = &inv.realized;
    let g = &rz.group;
    let (m, n) = (rz.m, rz.n);
    let zm1 = rz.combo(inv.z as i64 - 1, 0);
    let xn1 = rz.combo(0, inv.x as i64 - 1);
    let dual = [lam.value(m, zm1), lam.value(n, xn1), del.value(m, zm1), del.value(n, xn1)];
    if dual != [1, 0, 0, 1] {
        return Err(format!("{tag}: dual basis values {dual:?}"));
    }
    for u in 0..g.size() {
        for v in 0..g.size() {
            if (lam.value(u, v), del.value(u, v)) != inv.lambda_delta_values(u, v) {
                return Err(format!("{tag}: closed formula disagrees at ({u}, {v})"));
            }
        }
    }
    let p = inv.presentation();
    let expected = [
        1,
        1,
        u64::from(inv.q_bar != 1),
        u64::from(inv.q_bar != p.n / p.alpha.gcd(&p.n)),
    ];
    let got = [
        lam.value(m, g.neg_idx(m)),
        del.value(n, g.neg_idx(n)),
        lam.value(n, g.neg_idx(n)),
        del.value(m, g.neg_idx(m)),
    ];
    if got != expected {
        return Err(format!("{tag}: boundary values {got:?}, expected {expected:?}"));
    }
    match lattice.is_smooth_sequence(&[lam, del]) {
        Ok(Some(_)) => Ok(()),
        Ok(None) => Err(format!("{tag}: (Lambda, Delta) is not a smooth sequence")),
        Err(e) => Err(format!("{tag}: {e}")),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WhichRay {
    Lambda,
    Delta,
}

/// Identification of a degenerate `Lambda` or `Delta` with a simpler ray.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DegenerateForm {
    /// Pardini ray of the map sending the element index `generator` to 1 in `Z/order`
    /// and killing the subgroup generated by `killed`.
    Pardini { order: u64, generator: usize, killed: Option<usize> },
    /// `Delta` for the same presentation and a smaller `q_bar`.
    SmallerDelta { q_bar: u64 },
}

/// The simpler description of a degenerate `Lambda` or `Delta`, together with that ray.
pub fn degenerate_ray(
    inv: &TwoDegreeInvariants,
    lattice: &CoverLattice,
    which: WhichRay,
) -> Result<(DegenerateForm, Ray), TwoDegreeError> {
    let p = inv.presentation();
    let rz = &inv.realized;
    let g = &rz.group;
    let gcd = p.alpha.gcd(&p.n);
    let form = match which {
        WhichRay::Delta if inv.q_bar == p.n / gcd => {
            DegenerateForm::Pardini { order: gcd, generator: rz.n, killed: Some(rz.m) }
        }
        WhichRay::Delta if (inv.q_bar * p.alpha) % p.n == 1 % p.n => {
            DegenerateForm::Pardini { order: inv.order(), generator: rz.m, killed: None }
        }
        WhichRay::Lambda if inv.q_bar == 1 => DegenerateForm::Pardini { order: p.r, generator: rz.m, killed: Some(rz.n) },
        WhichRay::Lambda if inv.w == 1 => DegenerateForm::Pardini { order: inv.order(), generator: rz.n, killed: None },
        WhichRay::Lambda => DegenerateForm::SmallerDelta { q_bar: inv.q_bar - inv.q_hat },
        WhichRay::Delta => return Err(TwoDegreeError::NoDegeneracy(format!("Delta for {p} q={}", inv.q_bar))),
    };
    let ray = match &form {
        DegenerateForm::Pardini { order, generator, killed } => {
            let target = FiniteAbelianGroup::cyclic(*order);
            let phi = map_to_cyclic(g, *generator, *killed, *order)?;
            lattice.pardini_ray(&GroupHomomorphism::new(g.clone(), target, phi)?)?
        }
        DegenerateForm::SmallerDelta { q_bar } => {
            let smaller = invariants_for(p, *q_bar)?;
            lambda_delta(&smaller, lattice)?.1
        }
    };
    Ok((form, ray))
}

/// Images of the canonical generators under the map `g -> Z/order` sending
/// `generator` to 1 and `killed` to 0.
fn map_to_cyclic(
    g: &FiniteAbelianGroup,
    generator: usize,
    killed: Option<usize>,
    order: u64,
) -> Result<Vec<GroupElement>, TwoDegreeError> {
    let mut value = vec![None; g.size()];
    let kernel: Vec<usize> = match killed {
        Some(k) => g.subgroup_generated_idx(&[k]).into_iter().collect(),
        None => vec![0],
    };
    for j in 0..order {
        let base = g.scale_idx(generator, j as i64);
        for &k in &kernel {
            let idx = g.add_idx(base, k);
            match value[idx] {
                None => value[idx] = Some(j),
                Some(old) if old == j => {}
                Some(_) => return Err(TwoDegreeError::Precondition("map to the cyclic group is ill defined".into())),
            }
        }
    }
    let mut images = Vec::with_capacity(g.rank());
    for i in 0..g.rank() {
        let mut coords = vec![0; g.rank()];
        coords[i] = 1;
        let idx = g.index_of(&GroupElement(coords))?;
        let v = value[idx].ok_or_else(|| TwoDegreeError::Precondition("generator and kernel do not span".into()))?;
        images.push(GroupElement(vec![v]));
    }
    Ok(images)
}

/// `a^Lambda b^Delta` with `0^0 = 1`; in the degenerate cases this is the
/// Pardini multiplication in `a` (when `q_bar = N`) or in `b` (when `q_bar r = 1`).
pub fn universal_multiplication(
    inv: &TwoDegreeInvariants,
    field: Field,
    a: &Scalar,
    b: &Scalar,
) -> Result<MultiplicationTable, TwoDegreeError> {
    let size = inv.order() as i64;
    let degenerate_a = inv.q_bar == inv.presentation().n;
    let degenerate_b = inv.z == 1;
    let table = MultiplicationTable::from_fn(inv.group().clone(), field, |u, v| {
        if degenerate_a {
            let (e, _) = inv.pair_defect(u, v);
            field.pow(a, (e / size) as u64)
        } else if degenerate_b {
            let (_, d) = inv.pair_defect(u, v);
            field.pow(b, (d / size) as u64)
        } else {
            let (l, d) = inv.lambda_delta_values(u, v);
            field.mul(&field.pow(a, l), &field.pow(b, d))
        }
    })?;
    Ok(table)
}

/// `k[s,t] / (s^z - a t^y, t^x - b s^w, s^{qhat r} t^{d_qhat} - a^gamma b)` with
/// the good-pair monomial basis. The weight `deg s = x + y`, `deg t = z + w`
/// strictly decreases along every rule because `zx > yw`.
pub fn universal_quotient_ring(inv: &TwoDegreeInvariants, field: Field, a: &Scalar, b: &Scalar) -> QuotientRing {
    let r = inv.presentation().r;
    let rules = vec![
        RewriteRule { lead: (inv.z, 0), coeff: a.clone(), tail: (0, inv.y) },
        RewriteRule { lead: (0, inv.x), coeff: b.clone(), tail: (inv.w, 0) },
        RewriteRule {
            lead: (inv.q_hat * r, inv.d_q_hat),
            coeff: field.mul(&field.pow(a, inv.gamma), b),
            tail: (0, 0),
        },
    ];
    QuotientRing {
        group: inv.group().clone(),
        field,
        deg_s: inv.realized.m,
        deg_t: inv.realized.n,
        rules,
        basis: inv.good_pairs.clone(),
    }
}

#[derive(Clone, Debug)]
pub struct Classification {
    pub presentation: TwoGenPresentation,
    pub q_bar: u64,
    pub lambda: Scalar,
}

/// Recovers `(q_bar, lambda)` of an algebra generated in degrees `m, n` with
/// trivial torsor part, and confirms it is a twist of the universal table.
pub fn classify_two_degree_algebra(
    psi: &MultiplicationTable,
    m: &GroupElement,
    n: &GroupElement,
) -> Result<Classification, TwoDegreeError> {
    psi.validate()?;
    let g = psi.group();
    let f = psi.field();
    let mi = g.index_of(m)?;
    let ni = g.index_of(n)?;
    if mi == 0 || ni == 0 || mi == ni {
        return Err(TwoDegreeError::Precondition("m and n must be distinct and nonzero".into()));
    }
    let degrees = psi.minimum_generating_degrees()?;
    if degrees.iter().any(|&d| d != mi && d != ni) {
        return Err(TwoDegreeError::Precondition("the algebra is not generated in degrees m, n".into()));
    }
    let p = recognize_two_generator_presentation(g, m, n)?;
    // powers[k] is the scalar with v_u^k = powers[k] v_{ku}
    let powers = |u: usize| {
        let order = g.order_of_idx(u) as usize;
        let mut out = vec![f.one()];
        for k in 1..=order {
            let prev = &out[k - 1];
            out.push(f.mul(prev, psi.get(u, g.scale_idx(u, k as i64 - 1))));
        }
        out
    };
    let c = powers(mi);
    let d = powers(ni);
    let multiples_of_n: Vec<usize> = (0..p.n).map(|i| g.scale_idx(ni, i as i64)).collect();
    let mut found = None;
    for h in 1..c.len() {
        if let Some(i) = multiples_of_n.iter().position(|&e| e == g.scale_idx(mi, h as i64)) {
            if f.is_zero(&c[h]) || !f.is_zero(&d[i]) {
                found = Some((h, i));
                break;
            }
        }
    }
    let (z, y) = found.expect("h = o(m) always qualifies");
    let lambda = f.div(&c[z], &d[y]).unwrap_or_else(|| f.zero());
    if z as u64 % p.r != 0 {
        return Err(TwoDegreeError::Precondition(format!("z = {z} is not a multiple of r = {}", p.r)));
    }
    let q_bar = z as u64 / p.r;
    let inv = invariants_for(p, q_bar)?;
    let universal = universal_multiplication(&inv, f, &lambda, &f.zero())?;
    let to_m = inv.realized.transport_to(g, mi, ni);
    let mut kappa = vec![f.zero(); g.size()];
    for (l, &(a, b)) in inv.good_pairs.iter().enumerate() {
        let am = g.scale_idx(mi, a as i64);
        let bn = g.scale_idx(ni, b as i64);
        let k = f.mul(&f.mul(&c[a as usize], &d[b as usize]), psi.get(am, bn));
        if f.is_zero(&k) {
            return Err(TwoDegreeError::NotTwistEquivalent(format!("good pair monomial for {} vanishes", g.element(to_m[l]))));
        }
        kappa[to_m[l]] = k;
    }
    let rg = inv.group();
    for u in 0..rg.size() {
        for v in 0..rg.size() {
            let (mu, mv, ms) = (to_m[u], to_m[v], to_m[rg.add_idx(u, v)]);
            let left = f.mul(&f.mul(&kappa[mu], &kappa[mv]), psi.get(mu, mv));
            let right = f.mul(universal.get(u, v), &kappa[ms]);
            if left != right {
                return Err(TwoDegreeError::NotTwistEquivalent(format!(
                    "mismatch at ({}, {})",
                    g.element(mu),
                    g.element(mv)
                )));
            }
        }
    }
    Ok(Classification { presentation: p, q_bar, lambda })
}

/// A datum `(r, alpha, N, q_bar, phi)` with `phi: M -> M_{r,alpha,N}` surjective.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaDatum {
    pub presentation: TwoGenPresentation,
    pub q_bar: u64,
    pub phi: GroupHomomorphism,
}

/// The strict conditions on `(r, alpha, N, q_bar)`.
pub fn in_sigma(p: TwoGenPresentation, q_bar: u64) -> bool {
    let beta = (p.n - p.alpha) % p.n;
    omega_set(beta, p.n).contains(&q_bar)
        && q_bar * p.r != 1
        && (q_bar * p.alpha) % p.n != 1
        && q_bar != p.n / p.alpha.gcd(&p.n)
}

/// The weaker conditions used for `Theta^2_M`.
pub fn in_sigma_bar(p: TwoGenPresentation, q_bar: u64) -> bool {
    let beta = (p.n - p.alpha) % p.n;
    omega_set(beta, p.n).contains(&q_bar) && q_bar * p.r != 1 && q_bar != p.n
}

fn presentations_onto(group: &FiniteAbelianGroup) -> Vec<TwoGenPresentation> {
    let size = group.size() as u64;
    TwoGenPresentation::all_up_to(size)
        .into_iter()
        .filter(|p| size % p.order() == 0 && group.admits_surjection_onto(&p.realize().group))
        .collect()
}

fn data_with(group: &FiniteAbelianGroup, accept: fn(TwoGenPresentation, u64) -> bool) -> Vec<SigmaDatum> {
    let mut out = Vec::new();
    for p in presentations_onto(group) {
        let qs: Vec<u64> = omega_set((p.n - p.alpha) % p.n, p.n).into_iter().filter(|&q| accept(p, q)).collect();
        if qs.is_empty() {
            continue;
        }
        let maps = enumerate_surjections(group, &p.realize().group);
        for &q in &qs {
            for phi in &maps {
                out.push(SigmaDatum { presentation: p, q_bar: q, phi: phi.clone() });
            }
        }
    }
    out
}

pub fn enumerate_sigma(group: &FiniteAbelianGroup) -> Vec<SigmaDatum> {
    data_with(group, in_sigma)
}

pub fn enumerate_sigma_bar(group: &FiniteAbelianGroup) -> Vec<SigmaDatum> {
    data_with(group, in_sigma_bar)
}

/// Whether `Sigma_M` is empty, without listing the surjections.
pub fn sigma_is_empty(group: &FiniteAbelianGroup) -> bool {
    !presentations_onto(group)
        .into_iter()
        .any(|p| omega_set((p.n - p.alpha) % p.n, p.n).into_iter().any(|q| in_sigma(p, q)))
}

impl SigmaDatum {
    pub fn invariants(&self) -> TwoDegreeInvariants {
        invariants_for(self.presentation, self.q_bar).expect("datum has q_bar in Omega")
    }

    /// `(Lambda, Delta)` pulled back to `M`.
    pub fn rays(&self, lattice: &CoverLattice) -> Result<(Ray, Ray), TwoDegreeError> {
        let inv = self.invariants();
        let small = CoverLattice::new(inv.group())?;
        let (lam, del) = lambda_delta(&inv, &small)?;
        Ok((lattice.pullback(&lam, &self.phi)?, lattice.pullback(&del, &self.phi)?))
    }

    pub fn delta(&self, lattice: &CoverLattice) -> Result<Ray, TwoDegreeError> {
        Ok(self.rays(lattice)?.1)
    }

    pub fn to_json(&self) -> Value {
        let p = self.presentation;
        json!({
            "r": p.r.to_string(),
            "alpha": p.alpha.to_string(),
            "N": p.n.to_string(),
            "q_bar": self.q_bar.to_string(),
            "target": self.phi.target().spec(),
            "phi": self.phi.images().iter().map(|e| e.to_string()).collect::<Vec<_>>(),
        })
    }
}

/// The dual datum, exchanging the roles of `m` and `n`.
pub fn dual_datum(chi: &SigmaDatum) -> Result<SigmaDatum, TwoDegreeError> {
    let p = chi.presentation;
    if !in_sigma(p, chi.q_bar) {
        return Err(TwoDegreeError::Precondition(format!("{p} q={} is not in Sigma", chi.q_bar)));
    }
    let gcd = p.alpha.gcd(&p.n);
    let order = p.n / gcd;
    let q_tilde = (0..order).find(|&q| (q * p.alpha) % p.n == gcd % p.n).expect("alpha/gcd is invertible mod N/gcd");
    let dual_p = TwoGenPresentation::new(gcd, q_tilde * p.r, p.r * p.n / gcd)?;
    let inv = chi.invariants();
    let dual_q = inv.y / gcd;
    let here = &inv.realized;
    let recognized = recognize_two_generator_presentation(
        &here.group,
        &here.group.element(here.n),
        &here.group.element(here.m),
    )?;
    if recognized != dual_p {
        return Err(TwoDegreeError::Precondition(format!("dual presentation {dual_p} disagrees with {recognized}")));
    }
    let there = dual_p.realize();
    let swap = here.transport_to(&there.group, there.n, there.m);
    let source = chi.phi.source();
    let mut images = Vec::with_capacity(source.rank());
    for i in 0..source.rank() {
        let mut coords = vec![0; source.rank()];
        coords[i] = 1;
        let idx = source.index_of(&GroupElement(coords))?;
        images.push(there.group.element(swap[chi.phi.apply_idx(idx)]));
    }
    let phi = GroupHomomorphism::new(source.clone(), there.group.clone(), images)?;
    let dual = SigmaDatum { presentation: dual_p, q_bar: dual_q, phi };
    if !in_sigma(dual_p, dual_q) {
        return Err(TwoDegreeError::Precondition(format!("dual {dual_p} q={dual_q} left Sigma")));
    }
    Ok(dual)
}

/// `(Lambda, Delta)` pulled back to `M` for each datum, computing the rays on
/// each target group only once.
pub fn pulled_back_rays(lattice: &CoverLattice, data: &[SigmaDatum]) -> Result<Vec<(Ray, Ray)>, TwoDegreeError> {
    let keys: BTreeSet<(TwoGenPresentation, u64)> = data.iter().map(|chi| (chi.presentation, chi.q_bar)).collect();
    let presentations: BTreeSet<TwoGenPresentation> = keys.iter().map(|(p, _)| *p).collect();
    let lattices: BTreeMap<TwoGenPresentation, CoverLattice> = presentations
        .into_par_iter()
        .map(|p| Ok((p, CoverLattice::new(&p.realize().group)?)))
        .collect::<Result<_, TwoDegreeError>>()?;
    let small: BTreeMap<(TwoGenPresentation, u64), (Ray, Ray)> = keys
        .into_par_iter()
        .map(|(p, q)| {
            let inv = invariants_for(p, q)?;
            Ok(((p, q), lambda_delta(&inv, &lattices[&p])?))
        })
        .collect::<Result<_, TwoDegreeError>>()?;
    data.par_iter()
        .map(|chi| {
            let (lam, del) = &small[&(chi.presentation, chi.q_bar)];
            Ok((lattice.pullback(lam, &chi.phi)?, lattice.pullback(del, &chi.phi)?))
        })
        .collect()
}

/// `Theta^2_M`: the Pardini rays as singletons and the pairs `(Lambda, Delta)`
/// for data in the weak set, without repetitions.
pub fn enumerate_theta2(lattice: &CoverLattice) -> Result<Vec<Vec<Ray>>, TwoDegreeError> {
    let g = lattice.group();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for eta in pardini_homomorphisms(g) {
        let seq = vec![lattice.pardini_ray(&eta)?];
        if seen.insert(seq.clone()) {
            out.push(seq);
        }
    }
    for (lam, del) in pulled_back_rays(lattice, &enumerate_sigma_bar(g))? {
        let seq = vec![lam, del];
        if seen.insert(seq.clone()) {
            out.push(seq);
        }
    }
    Ok(out)
}

/// Distinct `Delta^chi` over `Sigma_M`, each with one datum producing it.
pub fn sigma_delta_rays(lattice: &CoverLattice) -> Result<Vec<(SigmaDatum, Ray)>, TwoDegreeError> {
    let data = enumerate_sigma(lattice.group());
    let rays = pulled_back_rays(lattice, &data)?;
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for (chi, (_, ray)) in data.into_iter().zip(rays) {
        if seen.insert(ray.clone()) {
            out.push((chi, ray));
        }
    }
    Ok(out)
}

/// The five kinds of normal crossing rows.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum NcKind {
    /// `Z/2`, ray `2 E^id`.
    DoubledIdentity,
    /// `(Z/2)^2`, ray `E^pr1 + E^pr2`.
    SumOfProjections,
    /// `Z/2l x Z/2`, `l > 1`, ray `Delta^{2,2,2l,1}`.
    ProductDelta,
    /// `Z/4l`, ray `Delta^{1,2l+1,4l,2}`.
    CyclicEvenDelta,
    /// `Z/2l`, `l > 1` odd, ray `Delta^{2,2,l,1}`.
    CyclicOddDelta,
}

impl NcKind {
    pub fn row(&self) -> usize {
        *self as usize + 1
    }

    /// The expected value of `h`.
    pub fn expected_h(&self) -> u64 {
        match self {
            NcKind::DoubledIdentity => 1,
            _ => 2,
        }
    }
}

/// One row instance: the group `H`, its generators, the presentation data and the ray on `H`.
#[derive(Clone, Debug)]
pub struct NcRow {
    pub kind: NcKind,
    pub l: u64,
    pub h_group: FiniteAbelianGroup,
    pub m: usize,
    pub n: usize,
    pub r: u64,
    pub alpha: u64,
    pub big_n: u64,
    pub q_bar: u64,
    pub ray: Ray,
}

fn transported_delta(
    h_group: &FiniteAbelianGroup,
    m: usize,
    n: usize,
    p: TwoGenPresentation,
    q_bar: u64,
) -> Result<(Ray, TwoDegreeInvariants), TwoDegreeError> {
    let inv = invariants_for(p, q_bar)?;
    let small = CoverLattice::new(inv.group())?;
    let (_, delta) = lambda_delta(&inv, &small)?;
    let to_h = inv.realized.transport_to(h_group, m, n);
    let mut inverse = vec![0; h_group.size()];
    for (i, &t) in to_h.iter().enumerate() {
        inverse[t] = i;
    }
    let mut images = Vec::with_capacity(h_group.rank());
    for i in 0..h_group.rank() {
        let mut coords = vec![0; h_group.rank()];
        coords[i] = 1;
        images.push(inv.group().element(inverse[h_group.index_of(&GroupElement(coords))?]));
    }
    let iso = GroupHomomorphism::new(h_group.clone(), inv.group().clone(), images)?;
    let lattice = CoverLattice::new(h_group)?;
    Ok((lattice.pullback(&delta, &iso)?, inv))
}

/// The row of the given kind and parameter on its own group `H`.
pub fn nc_row(kind: NcKind, l: u64) -> Result<NcRow, TwoDegreeError> {
    let elt = |g: &FiniteAbelianGroup, c: Vec<u64>| g.index_of(&GroupElement(c));
    let bad = |why: &str| Err(TwoDegreeError::Precondition(format!("row {}: {why}", kind.row())));
    match kind {
        NcKind::DoubledIdentity => {
            let h = FiniteAbelianGroup::cyclic(2);
            let lattice = CoverLattice::new(&h)?;
            let id = GroupHomomorphism::new(h.clone(), h.clone(), vec![GroupElement(vec![1])])?;
            let ray = lattice.pardini_ray(&id)?.scaled(2);
            Ok(NcRow { kind, l, h_group: h, m: 1, n: 1, r: 1, alpha: 1, big_n: 2, q_bar: 1, ray })
        }
        NcKind::SumOfProjections => {
            let h = FiniteAbelianGroup::new(vec![2, 2])?;
            let lattice = CoverLattice::new(&h)?;
            let z2 = FiniteAbelianGroup::cyclic(2);
            let pr1 = GroupHomomorphism::new(h.clone(), z2.clone(), vec![GroupElement(vec![1]), GroupElement(vec![0])])?;
            let pr2 = GroupHomomorphism::new(h.clone(), z2, vec![GroupElement(vec![0]), GroupElement(vec![1])])?;
            let ray = lattice.pardini_ray(&pr1)?.checked_add(&lattice.pardini_ray(&pr2)?)?;
            let (m, n) = (elt(&h, vec![1, 0])?, elt(&h, vec![0, 1])?);
            Ok(NcRow { kind, l, h_group: h, m, n, r: 2, alpha: 0, big_n: 2, q_bar: 1, ray })
        }
        NcKind::ProductDelta => {
            if l < 2 {
                return bad("needs l > 1");
            }
            let h = FiniteAbelianGroup::new(vec![2 * l, 2])?;
            let (m, n) = (elt(&h, vec![1, 0])?, elt(&h, vec![1, 1])?);
            let p = TwoGenPresentation::new(2, 2, 2 * l)?;
            let (ray, _) = transported_delta(&h, m, n, p, 1)?;
            Ok(NcRow { kind, l, h_group: h, m, n, r: 2, alpha: 2, big_n: 2 * l, q_bar: 1, ray })
        }
        NcKind::CyclicEvenDelta => {
            if l < 1 {
                return bad("needs l > 0");
            }
            let h = FiniteAbelianGroup::cyclic(4 * l);
            let (m, n) = (1, (2 * l + 1) as usize);
            let p = TwoGenPresentation::new(1, 2 * l + 1, 4 * l)?;
            let (ray, _) = transported_delta(&h, m, n, p, 2)?;
            Ok(NcRow { kind, l, h_group: h, m, n, r: 1, alpha: 2 * l + 1, big_n: 4 * l, q_bar: 2, ray })
        }
        NcKind::CyclicOddDelta => {
            if l < 3 || l % 2 == 0 {
                return bad("needs l > 1 odd");
            }
            let h = FiniteAbelianGroup::cyclic(2 * l);
            let (m, n) = (1, (l + 1) as usize);
            let p = TwoGenPresentation::new(2, 2, l)?;
            let (ray, _) = transported_delta(&h, m, n, p, 1)?;
            Ok(NcRow { kind, l, h_group: h, m, n, r: 2, alpha: 2, big_n: l, q_bar: 1, ray })
        }
    }
}

impl NcRow {
    /// The local algebra of the row over a field, with the parameter `z`
    /// specialised to `g`, as a quotient ring in `U = s`, `V = t`.
    pub fn oracle_ring(&self, field: Field, g: &Scalar) -> Result<QuotientRing, TwoDegreeError> {
        let h = &self.h_group;
        let one = field.one();
        let rule = |lead, coeff: &Scalar, tail| RewriteRule { lead, coeff: coeff.clone(), tail };
        let (rules, basis) = match self.kind {
            NcKind::DoubledIdentity => (
                vec![rule((2, 0), &field.mul(g, g), (0, 0)), rule((0, 1), &one, (1, 0))],
                vec![(0, 0), (1, 0)],
            ),
            NcKind::SumOfProjections => {
                let mut basis = vec![(0, 0); 4];
                for i in 0..2 {
                    for j in 0..2 {
                        basis[h.index_of(&GroupElement(vec![i, j]))?] = (i, j);
                    }
                }
                (vec![rule((2, 0), g, (0, 0)), rule((0, 2), g, (0, 0))], basis)
            }
            kind => {
                let p = TwoGenPresentation::new(self.r, self.alpha, self.big_n)?;
                let inv = invariants_for(p, self.q_bar)?;
                let to_h = inv.realized.transport_to(h, self.m, self.n);
                let mut basis = vec![(0, 0); h.size()];
                for (l, &pair) in inv.good_pairs.iter().enumerate() {
                    basis[to_h[l]] = pair;
                }
                let rules = match kind {
                    NcKind::CyclicEvenDelta => vec![
                        rule((2, 0), &one, (0, 2)),
                        rule((0, 2 * self.l + 1), g, (1, 0)),
                        rule((1, 2 * self.l - 1), g, (0, 0)),
                    ],
                    NcKind::ProductDelta => vec![rule((2, 0), &one, (0, 2)), rule((0, 2 * self.l), g, (0, 0))],
                    _ => vec![rule((2, 0), &one, (0, 2)), rule((0, self.l), g, (0, 0))],
                };
                (rules, basis)
            }
        };
        Ok(QuotientRing { group: h.clone(), field, deg_s: self.m, deg_t: self.n, rules, basis })
    }

    /// Compares the oracle multiplication with `g^E` for the row's ray.
    pub fn check_against_oracle(&self, field: Field, g: &Scalar) -> Result<(), String> {
        let lattice = CoverLattice::new(&self.h_group).map_err(|e| e.to_string())?;
        let ring = self.oracle_ring(field, g).map_err(|e| e.to_string())?;
        let oracle = ring.structure_constants().map_err(|e| e.to_string())?;
        let closed = MultiplicationTable::power_of_ray(&lattice, &self.ray, field, g).map_err(|e| e.to_string())?;
        if oracle != closed {
            return Err(format!("row {} l={}: oracle table differs from g^E", self.kind.row(), self.l));
        }
        let h = lattice.h_value(&self.ray);
        if h != self.kind.expected_h() {
            return Err(format!("row {} l={}: h = {h}", self.kind.row(), self.l));
        }
        Ok(())
    }
}

/// A row realised on `M` through a surjection `M -> H`.
#[derive(Clone, Debug)]
pub struct NcTableEntry {
    pub row: NcRow,
    pub phi: GroupHomomorphism,
    pub ray: Ray,
    pub h: u64,
}

/// Row instances whose group `H` is a quotient of `M`, pulled back along every
/// surjection, keeping one entry per distinct ray.
pub fn nc_ray_table(lattice: &CoverLattice) -> Result<Vec<NcTableEntry>, TwoDegreeError> {
    let g = lattice.group();
    let size = g.size() as u64;
    let mut candidates = Vec::new();
    for d in (2..=size).filter(|d| size % d == 0) {
        match d {
            2 => candidates.push((NcKind::DoubledIdentity, 1)),
            4 => candidates.push((NcKind::SumOfProjections, 1)),
            _ => {}
        }
        if d % 4 == 0 && d >= 8 {
            candidates.push((NcKind::ProductDelta, d / 4));
        }
        if d % 4 == 0 {
            candidates.push((NcKind::CyclicEvenDelta, d / 4));
        }
        if d % 2 == 0 && (d / 2) % 2 == 1 && d / 2 > 1 {
            candidates.push((NcKind::CyclicOddDelta, d / 2));
        }
    }
    candidates.sort();
    let mut out = Vec::new();
    for (kind, l) in candidates {
        let row = nc_row(kind, l)?;
        if !g.admits_surjection_onto(&row.h_group) {
            continue;
        }
        let mut seen = BTreeSet::new();
        for phi in enumerate_surjections(g, &row.h_group) {
            let ray = lattice.pullback(&row.ray, &phi)?;
            if seen.insert(ray.clone()) {
                let h = lattice.h_value(&ray);
                out.push(NcTableEntry { row: row.clone(), phi, ray, h });
            }
        }
    }
    Ok(out)
}

impl NcTableEntry {
    pub fn to_json(&self, lattice: &CoverLattice) -> Value {
        let r = &self.row;
        let h = &r.h_group;
        let ray_name = match r.kind {
            NcKind::DoubledIdentity => "2E^id".to_string(),
            NcKind::SumOfProjections => "E^pr1+E^pr2".to_string(),
            _ => format!("Delta^{{{},{},{},{}}}", r.r, r.alpha, r.big_n, r.q_bar),
        };
        json!({
            "row": r.kind.row().to_string(),
            "l": r.l.to_string(),
            "H": h.spec(),
            "m": h.element(r.m).to_string(),
            "n": h.element(r.n).to_string(),
            "r": r.r.to_string(),
            "alpha": r.alpha.to_string(),
            "N": r.big_n.to_string(),
            "q_bar": r.q_bar.to_string(),
            "ray_name": ray_name,
            "phi": self.phi.images().iter().map(|e| e.to_string()).collect::<Vec<_>>(),
            "h": self.h.to_string(),
            "ray": lattice.ray_json(&self.ray),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pres(r: u64, a: u64, n: u64) -> TwoGenPresentation {
        TwoGenPresentation::new(r, a, n).unwrap()
    }

    #[test]
    fn omega_examples() {
        assert_eq!(omega_set(0, 7), vec![1]);
        assert_eq!(omega_set(1, 4), vec![1, 2, 3, 4]);
        assert_eq!((d_value(3, 8, 1), d_value(3, 8, 2)), (3, 6));
        assert!(omega_set(3, 8).contains(&2));
        assert_eq!(d_value(5, 8, 0), 8);
    }

    #[test]
    fn invariants_of_cyclic_even_case() {
        let inv = invariants_for(pres(1, 5, 8), 2).unwrap();
        assert_eq!((inv.z, inv.y, inv.q_hat, inv.d_q_hat, inv.x, inv.w), (2, 2, 1, 3, 5, 1));
        inv.check().unwrap();
        let g = inv.group();
        let minus_n = g.neg_idx(inv.realized.n);
        assert_eq!(inv.good_pairs[minus_n], (1, 2));
    }

    #[test]
    fn invariants_of_odd_case() {
        let inv = invariants_for(pres(2, 2, 3), 1).unwrap();
        assert_eq!((inv.z, inv.y, inv.q_hat, inv.d_q_hat, inv.x, inv.w), (2, 2, 0, 3, 3, 0));
        assert_eq!(omega_set(1, 3), vec![1, 2, 3]);
        assert!(invariants_for(pres(2, 2, 3), 4).is_err());
        assert!(invariants_for(pres(2, 0, 4), 2).is_err());
    }

    #[test]
    fn lambda_delta_examples() {
        let inv = invariants_for(pres(1, 5, 8), 2).unwrap();
        let lattice = CoverLattice::new(inv.group()).unwrap();
        let (_, del) = lambda_delta(&inv, &lattice).unwrap();
        let m = inv.realized.m;
        assert_eq!(del.value(m, inv.group().neg_idx(m)), 1);
        check_lambda_delta(&inv, &lattice).unwrap();

        let inv = invariants_for(pres(2, 2, 3), 1).unwrap();
        let lattice = CoverLattice::new(inv.group()).unwrap();
        let (lam, _) = lambda_delta(&inv, &lattice).unwrap();
        let n = inv.realized.n;
        assert_eq!(lam.value(n, inv.group().neg_idx(n)), 0);
    }

    #[test]
    fn degenerate_rays_match() {
        for (p, q) in all_invariant_inputs(12) {
            let inv = invariants_for(p, q).unwrap();
            if !is_nondegenerate(&inv) {
                continue;
            }
            let lattice = CoverLattice::new(inv.group()).unwrap();
            let (lam, del) = lambda_delta(&inv, &lattice).unwrap();
            let (_, ray) = degenerate_ray(&inv, &lattice, WhichRay::Lambda).unwrap();
            assert_eq!(ray, lam, "Lambda for {p} q={q}");
            if let Ok((_, ray)) = degenerate_ray(&inv, &lattice, WhichRay::Delta) {
                assert_eq!(ray, del, "Delta for {p} q={q}");
            }
        }
    }

    #[test]
    fn oracle_small_examples() {
        let f = Field::Prime(7);
        let inv = invariants_for(pres(2, 2, 3), 1).unwrap();
        for (a, b) in [(1, 1), (0, 0)] {
            let (a, b) = (f.from_i64(a), f.from_i64(b));
            let oracle = universal_quotient_ring(&inv, f, &a, &b).structure_constants().unwrap();
            assert_eq!(oracle, universal_multiplication(&inv, f, &a, &b).unwrap());
        }
        let f = Field::Prime(101);
        let inv = invariants_for(pres(1, 5, 8), 2).unwrap();
        let (a, b) = (f.from_i64(17), f.from_i64(42));
        let oracle = universal_quotient_ring(&inv, f, &a, &b).structure_constants().unwrap();
        assert_eq!(oracle, universal_multiplication(&inv, f, &a, &b).unwrap());
    }

    #[test]
    fn classification_examples() {
        let f = Field::Prime(101);
        let inv = invariants_for(pres(2, 2, 3), 1).unwrap();
        let psi = universal_multiplication(&inv, f, &f.zero(), &f.zero()).unwrap();
        let (m, n) = (inv.group().element(inv.realized.m), inv.group().element(inv.realized.n));
        let c = classify_two_degree_algebra(&psi, &m, &n).unwrap();
        assert_eq!((c.q_bar, c.lambda), (1, f.zero()));

        let inv = invariants_for(pres(1, 5, 8), 2).unwrap();
        let psi = universal_multiplication(&inv, f, &f.one(), &f.zero()).unwrap();
        let (m, n) = (inv.group().element(inv.realized.m), inv.group().element(inv.realized.n));
        let c = classify_two_degree_algebra(&psi, &m, &n).unwrap();
        assert_eq!((c.q_bar, c.lambda), (2, f.one()));
    }

    #[test]
    fn nc_row_four_classifies() {
        let f = Field::Prime(101);
        let row = nc_row(NcKind::CyclicEvenDelta, 3).unwrap();
        let lattice = CoverLattice::new(&row.h_group).unwrap();
        let psi = MultiplicationTable::from_ray(&lattice, &row.ray, f, None).unwrap();
        let h = &row.h_group;
        let c = classify_two_degree_algebra(&psi, &h.element(row.m), &h.element(row.n)).unwrap();
        assert_eq!((c.q_bar, c.lambda), (2, f.one()));
    }

    #[test]
    fn duality_is_an_involution() {
        for spec in ["5", "6", "8", "2,4", "3,3", "12"] {
            let g = FiniteAbelianGroup::parse(spec).unwrap();
            for chi in enumerate_sigma(&g) {
                let dual = dual_datum(&chi).unwrap();
                assert_eq!(dual_datum(&dual).unwrap(), chi);
            }
        }
        let g = FiniteAbelianGroup::cyclic(5);
        let chi = enumerate_sigma(&g)
            .into_iter()
            .find(|c| c.presentation == pres(1, 4, 5) && c.q_bar == 2 && c.phi.images()[0] == GroupElement(vec![1]))
            .unwrap();
        let dual = dual_datum(&chi).unwrap();
        assert!(in_sigma(dual.presentation, dual.q_bar));
    }

    #[test]
    fn dual_of_one() {
        for p in TwoGenPresentation::all_up_to(16) {
            let g = p.realize().group;
            let id = enumerate_surjections(&g, &g).into_iter().next().unwrap();
            if in_sigma(p, 1) {
                let chi = SigmaDatum { presentation: p, q_bar: 1, phi: id.clone() };
                let dual = dual_datum(&chi).unwrap();
                assert_eq!(dual.q_bar, p.alpha / p.alpha.gcd(&p.n), "{p}");
            }
            let gcd = p.alpha.gcd(&p.n);
            let order = p.n / gcd;
            let q_tilde = (0..order).find(|&q| (q * p.alpha) % p.n == gcd % p.n).unwrap();
            let q = q_tilde * p.r / p.r;
            if q > 0 && in_sigma(p, q) {
                let chi = SigmaDatum { presentation: p, q_bar: q, phi: id };
                assert_eq!(dual_datum(&chi).unwrap().q_bar, 1, "{p}");
            }
        }
    }

    #[test]
    fn sigma_of_small_groups() {
        assert!(sigma_is_empty(&FiniteAbelianGroup::parse("2,2").unwrap()));
        assert!(enumerate_sigma(&FiniteAbelianGroup::parse("2,2").unwrap()).is_empty());
        assert!(sigma_is_empty(&FiniteAbelianGroup::parse("3,3").unwrap()));
        assert!(!sigma_is_empty(&FiniteAbelianGroup::cyclic(4)));
        let l = 7;
        let g = FiniteAbelianGroup::cyclic(l);
        assert!(enumerate_sigma(&g).iter().any(|c| c.presentation == pres(1, l - 1, l) && c.q_bar == 2));
    }

    #[test]
    fn nc_rows_on_small_groups() {
        let f = Field::Prime(101);
        let g = f.from_i64(2);
        for (kind, l) in [
            (NcKind::DoubledIdentity, 1),
            (NcKind::SumOfProjections, 1),
            (NcKind::ProductDelta, 2),
            (NcKind::CyclicEvenDelta, 1),
            (NcKind::CyclicEvenDelta, 2),
            (NcKind::CyclicOddDelta, 3),
        ] {
            nc_row(kind, l).unwrap().check_against_oracle(f, &g).unwrap();
        }
        let lattice = CoverLattice::new(&FiniteAbelianGroup::cyclic(2)).unwrap();
        let table = nc_ray_table(&lattice).unwrap();
        assert_eq!(table.len(), 1);
        assert_eq!(table[0].ray.value(1, 1), 2);
    }

    proptest! {
        #[test]
        fn good_pairs_form_the_staircase(idx in 0usize..200) {
            let inputs = all_invariant_inputs(24);
            let (p, q) = inputs[idx % inputs.len()];
            let inv = invariants_for(p, q).unwrap();
            prop_assert!(inv.check().is_ok());
            let pairs: BTreeSet<_> = inv.good_pairs.iter().copied().collect();
            prop_assert_eq!(pairs.len(), inv.group().size());
            for &(a, b) in &pairs {
                prop_assert!(b < inv.f[a as usize]);
            }
        }
    }
}
