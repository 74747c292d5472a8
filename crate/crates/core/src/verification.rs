//! Property checks over finite families of groups, shared by the `verify`
//! command and the acceptance suite. Every bound is given for
//! `max_order = 12` and rescaled linearly for other values.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;

use crate::abelian_group::{
    enumerate_surjections, recognize_two_generator_presentation, FiniteAbelianGroup, TwoGenPresentation,
};
use crate::cover_monoid::{pardini_homomorphisms, CoverLattice, Ray};
use crate::exact_linalg::{
    brute_force_dual_rays, dot, dual_cone_extreme_rays, hermite_normal_form, nonnegative_solution, rank_of_rows,
    rational_rank, smith_normal_form, IntMatrix, RationalCone,
};
use crate::graded_algebra::{Field, MultiplicationTable, Scalar, UnitCharacter};
use crate::stack_analysis::{
    all_smooth_sequences, is_reducibility_certificate, reducibility_certificate, smooth_locus_fan,
    smoothness_verdict, HLocusContext,
};
use crate::two_degree::{
    all_invariant_inputs, check_lambda_delta, check_omega_recursion, dual_datum, enumerate_sigma, enumerate_theta2,
    invariants_for, pulled_back_rays, universal_multiplication, universal_quotient_ring,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bounds {
    pub max_order: u64,
    pub prime: u64,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds { max_order: 12, prime: 101 }
    }
}

impl Bounds {
    pub fn scaled(&self, reference: u64) -> u64 {
        (reference * self.max_order / 12).max(1)
    }
}

/// Bounds plus caches of cover lattices and their extremal rays.
pub struct Context {
    pub bounds: Bounds,
    lattices: Mutex<BTreeMap<Vec<u64>, Arc<CoverLattice>>>,
    rays: Mutex<BTreeMap<Vec<u64>, Arc<Vec<Ray>>>>,
}

impl Context {
    pub fn new(bounds: Bounds) -> Self {
        Context { bounds, lattices: Mutex::new(BTreeMap::new()), rays: Mutex::new(BTreeMap::new()) }
    }

    pub fn field(&self) -> Result<Field, String> {
        Field::prime(self.bounds.prime).map_err(|e| e.to_string())
    }

    pub fn lattice(&self, group: &FiniteAbelianGroup) -> Result<Arc<CoverLattice>, String> {
        let key = group.orders().to_vec();
        if let Some(l) = self.lattices.lock().expect("cache lock").get(&key) {
            return Ok(l.clone());
        }
        let lattice = Arc::new(CoverLattice::new(group).map_err(|e| e.to_string())?);
        self.lattices.lock().expect("cache lock").insert(key, lattice.clone());
        Ok(lattice)
    }

    pub fn extremal_rays(&self, group: &FiniteAbelianGroup) -> Result<Arc<Vec<Ray>>, String> {
        let key = group.orders().to_vec();
        if let Some(r) = self.rays.lock().expect("cache lock").get(&key) {
            return Ok(r.clone());
        }
        let rays = Arc::new(self.lattice(group)?.extremal_rays().map_err(|e| e.to_string())?);
        self.rays.lock().expect("cache lock").insert(key, rays.clone());
        Ok(rays)
    }
}

/// All groups with `lo <= |M| <= hi`, by increasing order.
pub fn groups_between(lo: u64, hi: u64) -> Vec<FiniteAbelianGroup> {
    (lo.max(1)..=hi).flat_map(FiniteAbelianGroup::groups_of_order).collect()
}

pub struct Property {
    pub module: &'static str,
    pub name: &'static str,
    pub run: fn(&Context) -> Result<String, String>,
}

pub struct Outcome {
    pub module: &'static str,
    pub name: &'static str,
    pub result: Result<String, String>,
    pub elapsed: Duration,
}

impl Property {
    pub fn check(&self, ctx: &Context) -> Outcome {
        let start = Instant::now();
        let result = (self.run)(ctx);
        Outcome { module: self.module, name: self.name, result, elapsed: start.elapsed() }
    }
}

pub fn properties() -> Vec<Property> {
    macro_rules! prop {
        ($module:literal, $f:ident) => {
            Property { module: $module, name: stringify!($f), run: $f }
        };
    }
    vec![
        prop!("abelian_group", surjections_generate_target),
        prop!("abelian_group", presentations_round_trip),
        prop!("exact_linalg", double_description_matches_brute_force),
        prop!("exact_linalg", dual_rays_are_facet_normals),
        prop!("exact_linalg", normal_forms_factor),
        prop!("cover_monoid", extremal_rays_are_indecomposable),
        prop!("cover_monoid", support_determines_extremal_ray),
        prop!("cover_monoid", extremal_rays_generate_dual_cone),
        prop!("cover_monoid", presentation_relations_balance),
        prop!("cover_monoid", pardini_rays_are_extremal),
        prop!("graded_algebra", twisted_tables_validate),
        prop!("graded_algebra", h_is_twist_invariant),
        prop!("graded_algebra", h_at_most_one_matches_pardini_supports),
        prop!("graded_algebra", reduction_preserves_h),
        prop!("two_degree", omega_recursion),
        prop!("two_degree", invariant_identities),
        prop!("two_degree", good_pairs_fill_staircase),
        prop!("two_degree", universal_matches_oracle),
        prop!("two_degree", lambda_delta_boundary_values),
        prop!("two_degree", delta_collapses_duality_orbits),
        prop!("stack_analysis", reducibility_certificates_exist),
        prop!("stack_analysis", smoothness_search_matches_list),
        prop!("stack_analysis", fans_are_unimodular),
        prop!("stack_analysis", h_locus_paths_agree),
    ]
}

fn err<E: ToString>(e: E) -> String {
    e.to_string()
}

fn all_ok<T: Send + Sync>(items: Vec<T>, f: impl Fn(&T) -> Result<usize, String> + Sync + Send) -> Result<usize, String> {
    items.par_iter().map(|x| f(x)).try_reduce(|| 0, |a, b| Ok(a + b))
}

pub fn surjections_generate_target(ctx: &Context) -> Result<String, String> {
    let groups = groups_between(2, ctx.bounds.scaled(8));
    let count = all_ok(groups, |g| {
        let mut count = 0;
        let size = g.size() as u64;
        for t in (2..=size).filter(|d| size % d == 0).flat_map(FiniteAbelianGroup::groups_of_order) {
            let maps = enumerate_surjections(g, &t);
            if maps.is_empty() == g.admits_surjection_onto(&t) {
                return Err(format!("surjection count from {g} onto {t} disagrees with the criterion"));
            }
            for phi in maps {
                let images: Vec<usize> = phi.images().iter().map(|e| t.index_of(e)).collect::<Result<_, _>>().map_err(err)?;
                if t.subgroup_generated_idx(&images).len() != t.size() {
                    return Err(format!("a map {g} -> {t} does not reach every element"));
                }
                count += 1;
            }
        }
        Ok(count)
    })?;
    Ok(format!("{count} surjections"))
}

pub fn presentations_round_trip(ctx: &Context) -> Result<String, String> {
    let all = TwoGenPresentation::all_up_to(ctx.bounds.scaled(24));
    for p in &all {
        let rz = p.realize();
        let g = &rz.group;
        let back = recognize_two_generator_presentation(g, &g.element(rz.m), &g.element(rz.n)).map_err(err)?;
        if back != *p {
            return Err(format!("{p} came back as {back}"));
        }
        if g.size() as u64 != p.order() || g.scale_idx(rz.m, p.r as i64) != g.scale_idx(rz.n, p.alpha as i64) {
            return Err(format!("{p}: |M| = rN or rm = alpha n fails"));
        }
    }
    Ok(format!("{} presentations", all.len()))
}

fn sample_cones(ctx: &Context) -> Result<Vec<RationalCone>, String> {
    let mut rng = StdRng::seed_from_u64(7);
    let mut cones = Vec::new();
    for d in 2..=5usize {
        let mut kept = 0;
        while kept < 20 {
            let k = rng.gen_range(d + 1..=d + 4);
            let generators: Vec<Vec<BigInt>> = (0..k)
                .map(|_| {
                    (0..d).map(|i| BigInt::from(if i == 0 { rng.gen_range(1..=3) } else { rng.gen_range(-2..=2) })).collect()
                })
                .collect();
            let rows: Vec<Vec<BigRational>> =
                generators.iter().map(|g| g.iter().map(|x| BigRational::from_integer(x.clone())).collect()).collect();
            if rational_rank(&rows, d) == d {
                cones.push(RationalCone { ambient_rank: d, generators });
                kept += 1;
            }
        }
    }
    for g in groups_between(2, ctx.bounds.scaled(6).min(6)) {
        cones.push(ctx.lattice(&g)?.cone());
    }
    Ok(cones)
}

pub fn double_description_matches_brute_force(ctx: &Context) -> Result<String, String> {
    let cones = sample_cones(ctx)?;
    let count = all_ok(cones, |cone| {
        let dd = dual_cone_extreme_rays(cone).map_err(err)?;
        let brute = brute_force_dual_rays(cone).map_err(err)?;
        if dd != brute {
            return Err(format!("double description and brute force differ on {:?}", cone.generators));
        }
        Ok(1)
    })?;
    Ok(format!("{count} cones"))
}

pub fn dual_rays_are_facet_normals(ctx: &Context) -> Result<String, String> {
    let cones = sample_cones(ctx)?;
    let count = all_ok(cones, |cone| {
        let d = cone.ambient_rank;
        let rays = dual_cone_extreme_rays(cone).map_err(err)?;
        for f in &rays {
            let values: Vec<BigInt> = cone.generators.iter().map(|g| dot(f, g)).collect();
            if values.iter().any(|v| v.is_negative()) {
                return Err(format!("dual ray {f:?} is negative on a generator"));
            }
            let zeros: Vec<Vec<BigInt>> =
                cone.generators.iter().zip(&values).filter(|(_, v)| v.is_zero()).map(|(g, _)| g.clone()).collect();
            if rank_of_rows(&zeros, d) != d - 1 {
                return Err(format!("zero set of {f:?} does not span a hyperplane"));
            }
        }
        Ok(rays.len())
    })?;
    Ok(format!("{count} dual rays"))
}

fn determinant(m: &IntMatrix) -> BigRational {
    let n = m.rows();
    let mut a: Vec<Vec<BigRational>> =
        (0..n).map(|i| m.row(i).iter().map(|x| BigRational::from_integer(x.clone())).collect()).collect();
    let mut det = BigRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else {
            return BigRational::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= &a[c][c];
        for r in c + 1..n {
            let factor = &a[r][c] / &a[c][c];
            for k in c..n {
                let sub = &factor * &a[c][k];
                a[r][k] -= sub;
            }
        }
    }
    det
}

fn is_unimodular(m: &IntMatrix) -> bool {
    m.rows() == m.cols() && determinant(m).abs().is_one()
}

pub fn normal_forms_factor(_ctx: &Context) -> Result<String, String> {
    let mut rng = StdRng::seed_from_u64(11);
    for _ in 0..300 {
        let rows = rng.gen_range(1..=4);
        let cols = rng.gen_range(1..=4);
        let entries: Vec<Vec<i64>> = (0..rows).map(|_| (0..cols).map(|_| rng.gen_range(-6..=6)).collect()).collect();
        let a = IntMatrix::from_i64_rows(cols, &entries).map_err(err)?;
        let (h, u) = hermite_normal_form(&a);
        if u.mul(&a).map_err(err)? != h || !is_unimodular(&u) {
            return Err(format!("Hermite form of {entries:?} does not factor"));
        }
        let snf = smith_normal_form(&a);
        if snf.u.mul(&a).and_then(|x| x.mul(&snf.v)).map_err(err)? != snf.d
            || !is_unimodular(&snf.u)
            || !is_unimodular(&snf.v)
        {
            return Err(format!("Smith form of {entries:?} does not factor"));
        }
        let diagonal_only =
            (0..rows).all(|i| (0..cols).all(|j| i == j || snf.d.get(i, j).is_zero()));
        let diag = snf.diagonal();
        let divides = diag.windows(2).all(|w| if w[0].is_zero() { w[1].is_zero() } else { w[1].is_multiple_of(&w[0]) });
        if !diagonal_only || !divides || diag.iter().any(|x| x.is_negative()) {
            return Err(format!("Smith form of {entries:?} is not in normal form"));
        }
    }
    Ok("300 matrices".into())
}

pub fn extremal_rays_are_indecomposable(ctx: &Context) -> Result<String, String> {
    let count = all_ok(groups_between(2, ctx.bounds.scaled(8)), |g| {
        let lattice = ctx.lattice(g)?;
        let d = lattice.rank();
        let rays = ctx.extremal_rays(g)?;
        for ray in rays.iter() {
            let f = lattice.k_coordinates(ray);
            let content = f.iter().fold(BigInt::zero(), |c, x| c.gcd(x));
            let zeros: Vec<Vec<BigInt>> = lattice
                .generators()
                .iter()
                .filter(|&&(i, j)| ray.value(i, j) == 0)
                .map(|&(i, j)| lattice.generator_vector(i, j))
                .collect();
            if !content.is_one() || rank_of_rows(&zeros, d) != d - 1 {
                return Err(format!("a ray of {g} splits as a sum"));
            }
        }
        Ok(rays.len())
    })?;
    Ok(format!("{count} rays"))
}

pub fn support_determines_extremal_ray(ctx: &Context) -> Result<String, String> {
    let count = all_ok(groups_between(2, ctx.bounds.scaled(8)), |g| {
        let lattice = ctx.lattice(g)?;
        let rays = ctx.extremal_rays(g)?;
        let mut by_support: BTreeMap<BTreeSet<usize>, &Ray> = BTreeMap::new();
        for ray in rays.iter() {
            if let Some(other) = by_support.insert(lattice.support(ray), ray) {
                if other != ray {
                    return Err(format!("two extremal rays of {g} share a support"));
                }
            }
        }
        Ok(rays.len())
    })?;
    Ok(format!("{count} rays"))
}

pub fn extremal_rays_generate_dual_cone(ctx: &Context) -> Result<String, String> {
    let groups = groups_between(2, ctx.bounds.scaled(6));
    let count = all_ok(groups, |g| {
        let lattice = ctx.lattice(g)?;
        let rays = ctx.extremal_rays(g)?;
        let d = lattice.rank();
        let mut supports: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
        for (i, a) in rays.iter().enumerate() {
            for b in &rays[i..] {
                supports.insert(lattice.support(&a.checked_add(b).map_err(err)?));
            }
        }
        let mut rng = StdRng::seed_from_u64(13 + g.size() as u64);
        for _ in 0..40 {
            supports.insert((0..lattice.generators().len()).filter(|_| rng.gen_bool(0.5)).collect());
        }
        let coords: Vec<Vec<BigInt>> = rays.iter().map(|r| lattice.k_coordinates(r)).collect();
        let a: Vec<Vec<BigRational>> =
            (0..d).map(|row| coords.iter().map(|c| BigRational::from_integer(c[row].clone())).collect()).collect();
        let mut count = 0;
        for s in &supports {
            let Some(ray) = lattice.support_realizable(s) else { continue };
            let b: Vec<BigRational> = lattice.k_coordinates(&ray).into_iter().map(BigRational::from_integer).collect();
            if nonnegative_solution(&a, &b, rays.len()).is_none() {
                return Err(format!("a ray of {g} is not a combination of extremal rays"));
            }
            count += 1;
        }
        Ok(count)
    })?;
    Ok(format!("{count} realizable supports"))
}

pub fn presentation_relations_balance(ctx: &Context) -> Result<String, String> {
    let count = all_ok(groups_between(2, ctx.bounds.scaled(12)), |g| {
        let lattice = ctx.lattice(g)?;
        let side = |s: [(usize, usize); 2]| -> Vec<BigInt> {
            let a = lattice.generator_vector(s[0].0, s[0].1);
            let b = lattice.generator_vector(s[1].0, s[1].1);
            a.iter().zip(&b).map(|(x, y)| x + y).collect()
        };
        let relations = lattice.reduced_presentation().relations;
        for rel in &relations {
            if side(rel.lhs) != side(rel.rhs) {
                return Err(format!("a relation of {g} does not balance"));
            }
        }
        Ok(relations.len())
    })?;
    Ok(format!("{count} relations"))
}

pub fn pardini_rays_are_extremal(ctx: &Context) -> Result<String, String> {
    let count = all_ok(groups_between(2, ctx.bounds.scaled(12)), |g| {
        let lattice = ctx.lattice(g)?;
        let rays: BTreeSet<Ray> = ctx.extremal_rays(g)?.iter().cloned().collect();
        let maps = pardini_homomorphisms(g);
        for eta in &maps {
            if !rays.contains(&lattice.primitive(&lattice.pardini_ray(eta).map_err(err)?)) {
                return Err(format!("the Pardini ray of {eta:?} is not extremal"));
            }
        }
        Ok(maps.len())
    })?;
    Ok(format!("{count} Pardini rays"))
}

fn random_characters(field: Field, size: usize, seed: u64) -> Result<Vec<UnitCharacter>, String> {
    let mut rng = StdRng::seed_from_u64(seed);
    let p = field.characteristic() as i64;
    let mut out = vec![UnitCharacter::new(field, vec![field.one(); size]).map_err(err)?];
    for _ in 0..3 {
        let mut values = vec![field.one()];
        values.extend((1..size).map(|_| field.from_i64(rng.gen_range(1..p))));
        out.push(UnitCharacter::new(field, values).map_err(err)?);
    }
    Ok(out)
}

/// Groups of order at most `bound` whose order is prime to the field characteristic.
fn coprime_groups(ctx: &Context, bound: u64) -> Vec<FiniteAbelianGroup> {
    groups_between(2, bound).into_iter().filter(|g| g.size() as u64 % ctx.bounds.prime != 0).collect()
}

fn for_each_twist(
    ctx: &Context,
    f: impl Fn(&MultiplicationTable, &MultiplicationTable) -> Result<(), String> + Sync + Send,
) -> Result<usize, String> {
    let field = ctx.field()?;
    all_ok(coprime_groups(ctx, ctx.bounds.scaled(8)), |g| {
        let lattice = ctx.lattice(g)?;
        let characters = random_characters(field, g.size(), 17 + g.size() as u64)?;
        let mut count = 0;
        for ray in ctx.extremal_rays(g)?.iter() {
            let base = MultiplicationTable::from_ray(&lattice, ray, field, None).map_err(err)?;
            for u in &characters {
                f(&base, &MultiplicationTable::from_ray(&lattice, ray, field, Some(u)).map_err(err)?)?;
                count += 1;
            }
        }
        Ok(count)
    })
}

pub fn twisted_tables_validate(ctx: &Context) -> Result<String, String> {
    let count = for_each_twist(ctx, |_, twisted| twisted.validate().map_err(err))?;
    Ok(format!("{count} tables"))
}

pub fn h_is_twist_invariant(ctx: &Context) -> Result<String, String> {
    let count = for_each_twist(ctx, |base, twisted| {
        if base.h_value() != twisted.h_value() || base.h_subgroup() != twisted.h_subgroup() {
            return Err(format!("twisting changes h or H over {}", base.group()));
        }
        Ok(())
    })?;
    Ok(format!("{count} tables"))
}

/// The zero ray, the extremal rays and the sums of two extremal rays.
fn small_ray_combinations(lattice: &CoverLattice, rays: &[Ray]) -> Result<Vec<Ray>, String> {
    let mut out = vec![lattice.zero_ray()];
    for (i, a) in rays.iter().enumerate() {
        out.push(a.clone());
        for b in &rays[i + 1..] {
            out.push(a.checked_add(b).map_err(err)?);
        }
    }
    Ok(out)
}

pub fn h_at_most_one_matches_pardini_supports(ctx: &Context) -> Result<String, String> {
    let field = ctx.field()?;
    let count = all_ok(coprime_groups(ctx, ctx.bounds.scaled(6)), |g| {
        let lattice = ctx.lattice(g)?;
        let mut pardini: BTreeSet<BTreeSet<usize>> = BTreeSet::from([BTreeSet::new()]);
        for eta in pardini_homomorphisms(g) {
            pardini.insert(lattice.support(&lattice.pardini_ray(&eta).map_err(err)?));
        }
        let combos = small_ray_combinations(&lattice, &ctx.extremal_rays(g)?)?;
        for ray in &combos {
            let psi = MultiplicationTable::from_ray(&lattice, ray, field, None).map_err(err)?;
            let zeros: BTreeSet<usize> = lattice
                .generators()
                .iter()
                .enumerate()
                .filter(|(_, &(i, j))| psi.vanishes(i, j))
                .map(|(k, _)| k)
                .collect();
            if (psi.h_value() <= 1) != pardini.contains(&zeros) {
                return Err(format!("h = {} disagrees with the zero pattern over {g}", psi.h_value()));
            }
        }
        Ok(combos.len())
    })?;
    Ok(format!("{count} tables"))
}

pub fn reduction_preserves_h(ctx: &Context) -> Result<String, String> {
    let field = ctx.field()?;
    let count = all_ok(coprime_groups(ctx, ctx.bounds.scaled(8)), |g| {
        let lattice = ctx.lattice(g)?;
        let mut count = 0;
        for ray in small_ray_combinations(&lattice, &ctx.extremal_rays(g)?)? {
            let psi = MultiplicationTable::from_ray(&lattice, &ray, field, None).map_err(err)?;
            let h_psi = psi.h_subgroup();
            let mut subgroups: BTreeSet<BTreeSet<usize>> = h_psi.iter().map(|&x| g.subgroup_generated_idx(&[x])).collect();
            subgroups.insert(h_psi.iter().copied().collect());
            for sub in subgroups.iter().filter(|s| s.len() > 1) {
                let sub: Vec<usize> = sub.iter().copied().collect();
                let (reduced, proj) = psi.reduce_mod_h(&sub, None).map_err(err)?;
                let image: BTreeSet<usize> = h_psi.iter().map(|&x| proj.apply_idx(x)).collect();
                let got: BTreeSet<usize> = reduced.h_subgroup().into_iter().collect();
                if reduced.h_value() != psi.h_value() || got != image {
                    return Err(format!("reduction of a table over {g} by {sub:?} changes h or H"));
                }
                count += 1;
            }
        }
        Ok(count)
    })?;
    Ok(format!("{count} reductions"))
}

pub fn omega_recursion(ctx: &Context) -> Result<String, String> {
    let top = ctx.bounds.scaled(50);
    let mut count = 0;
    for n in 2..=top {
        for beta in 0..n {
            check_omega_recursion(beta, n)?;
            count += 1;
        }
    }
    Ok(format!("{count} pairs (beta, N)"))
}

pub fn invariant_identities(ctx: &Context) -> Result<String, String> {
    let inputs = all_invariant_inputs(ctx.bounds.scaled(24));
    let count = all_ok(inputs, |&(p, q)| {
        invariants_for(p, q).map_err(err)?.check()?;
        Ok(1)
    })?;
    Ok(format!("{count} inputs"))
}

pub fn good_pairs_fill_staircase(ctx: &Context) -> Result<String, String> {
    let inputs = all_invariant_inputs(ctx.bounds.scaled(24));
    let count = all_ok(inputs, |&(p, q)| {
        let inv = invariants_for(p, q).map_err(err)?;
        let got: BTreeSet<(u64, u64)> = inv.good_pairs.iter().copied().collect();
        let expected: BTreeSet<(u64, u64)> =
            (0..inv.z).flat_map(|a| (0..inv.f[a as usize]).map(move |b| (a, b))).collect();
        if got.len() != inv.good_pairs.len() || got != expected {
            return Err(format!("{p} q={q}: good pairs do not fill the staircase"));
        }
        Ok(1)
    })?;
    Ok(format!("{count} inputs"))
}

pub fn universal_matches_oracle(ctx: &Context) -> Result<String, String> {
    let field = ctx.field()?;
    let p = ctx.bounds.prime;
    let values: Vec<Scalar> = [0, 1, 3].iter().map(|&x| field.from_i64(x)).collect();
    let b_values: Vec<Scalar> = [0, 1, 5].iter().map(|&x| field.from_i64(x)).collect();
    let inputs: Vec<(TwoGenPresentation, u64)> =
        all_invariant_inputs(ctx.bounds.scaled(12)).into_iter().filter(|(pr, _)| pr.order() % p != 0).collect();
    let count = all_ok(inputs, |&(pr, q)| {
        let inv = invariants_for(pr, q).map_err(err)?;
        for a in &values {
            for b in &b_values {
                let closed = universal_multiplication(&inv, field, a, b).map_err(err)?;
                let oracle = universal_quotient_ring(&inv, field, a, b).structure_constants().map_err(err)?;
                if closed != oracle {
                    return Err(format!("{pr} q={q} a={a} b={b}: closed form and quotient ring differ"));
                }
            }
        }
        Ok(values.len() * b_values.len())
    })?;
    Ok(format!("{count} algebras"))
}

pub fn lambda_delta_boundary_values(ctx: &Context) -> Result<String, String> {
    let inputs: Vec<(TwoGenPresentation, u64)> = all_invariant_inputs(ctx.bounds.scaled(24))
        .into_iter()
        .filter(|&(p, q)| q * p.r != 1 && q != p.n)
        .collect();
    let count = all_ok(inputs, |&(p, q)| {
        let inv = invariants_for(p, q).map_err(err)?;
        let lattice = ctx.lattice(inv.group())?;
        check_lambda_delta(&inv, &lattice)?;
        Ok(1)
    })?;
    Ok(format!("{count} inputs"))
}

pub fn delta_collapses_duality_orbits(ctx: &Context) -> Result<String, String> {
    let count = all_ok(groups_between(2, ctx.bounds.scaled(16)), |g| {
        let data = enumerate_sigma(g);
        if data.is_empty() {
            return Ok(0);
        }
        let lattice = ctx.lattice(g)?;
        let rays = pulled_back_rays(&lattice, &data).map_err(err)?;
        let mut classes: BTreeMap<&Ray, BTreeSet<usize>> = BTreeMap::new();
        for (i, (_, delta)) in rays.iter().enumerate() {
            classes.entry(delta).or_default().insert(i);
        }
        for (i, chi) in data.iter().enumerate() {
            let dual = dual_datum(chi).map_err(err)?;
            let j = data.iter().position(|x| *x == dual).ok_or_else(|| format!("dual of a datum on {g} is missing"))?;
            if classes[&rays[i].1] != BTreeSet::from([i, j]) {
                return Err(format!("Delta over {g} does not collapse exactly the duality orbit of datum {i}"));
            }
        }
        Ok(data.len())
    })?;
    Ok(format!("{count} data"))
}

pub fn reducibility_certificates_exist(ctx: &Context) -> Result<String, String> {
    let hi = ctx.bounds.scaled(16);
    let groups: Vec<FiniteAbelianGroup> =
        groups_between(8, hi).into_iter().filter(|g| g.invariant_factors() != [2, 2, 2]).collect();
    let count = all_ok(groups, |g| match reducibility_certificate(g) {
        Some((m, n, t, a)) if is_reducibility_certificate(g, m, n, t, a) => Ok(1),
        _ => Err(format!("no reducibility certificate for {g}")),
    })?;
    Ok(format!("{count} groups"))
}

pub fn smoothness_search_matches_list(ctx: &Context) -> Result<String, String> {
    let groups = groups_between(1, ctx.bounds.scaled(16));
    let count = all_ok(groups, |g| smoothness_verdict(g).map(|_| 1).map_err(err))?;
    Ok(format!("{count} groups"))
}

pub fn fans_are_unimodular(ctx: &Context) -> Result<String, String> {
    let count = all_ok(groups_between(2, ctx.bounds.scaled(8)), |g| {
        let lattice = ctx.lattice(g)?;
        let theta = enumerate_theta2(&lattice).map_err(err)?;
        let fans = [
            smooth_locus_fan(&lattice, &theta).map_err(err)?,
            smooth_locus_fan(&lattice, &all_smooth_sequences(&lattice).map_err(err)?).map_err(err)?,
        ];
        for fan in &fans {
            fan.check()?;
            if !fan.max_cones.iter().all(|c| fan.is_unimodular(c)) {
                return Err(format!("a cone of the fan of {g} is not unimodular"));
            }
        }
        Ok(fans.iter().map(|f| f.max_cones.len()).sum())
    })?;
    Ok(format!("{count} cones"))
}

pub fn h_locus_paths_agree(ctx: &Context) -> Result<String, String> {
    let field = ctx.field()?;
    let groups = coprime_groups(ctx, ctx.bounds.scaled(8));
    let count = all_ok(groups, |g| {
        let lattice = ctx.lattice(g)?;
        let hctx = HLocusContext::new(&lattice).map_err(err)?;
        let rays = ctx.extremal_rays(g)?;
        for ray in rays.iter() {
            let psi = MultiplicationTable::from_ray(&lattice, ray, field, None).map_err(err)?;
            for level in [1, 2] {
                hctx.test_ray(ray, level).map_err(err)?;
                hctx.test_table(&psi, level).map_err(err)?;
            }
        }
        Ok(rays.len())
    })?;
    Ok(format!("{count} rays at levels 1 and 2"))
}

/// Runs every property in order.
pub fn run_all(ctx: &Context) -> Vec<Outcome> {
    properties().iter().map(|p| p.check(ctx)).collect()
}
