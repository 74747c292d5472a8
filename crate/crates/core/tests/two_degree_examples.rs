use covermonoid_core::abelian_group::{FiniteAbelianGroup, TwoGenPresentation};
use covermonoid_core::cover_monoid::CoverLattice;
use covermonoid_core::graded_algebra::Field;
use covermonoid_core::two_degree::{
    classify_two_degree_algebra, enumerate_sigma, invariants_for, lambda_delta, sigma_is_empty,
    universal_multiplication, universal_quotient_ring,
};

#[test]
fn cyclic_eight_with_alpha_five() {
    let inv = invariants_for(TwoGenPresentation::new(1, 5, 8).unwrap(), 2).unwrap();
    assert_eq!((inv.z, inv.y, inv.q_hat, inv.d_q_hat, inv.x, inv.w), (2, 2, 1, 3, 5, 1));
    let field = Field::prime(101).unwrap();
    let (a, b) = (field.from_i64(3), field.from_i64(5));
    let closed = universal_multiplication(&inv, field, &a, &b).unwrap();
    assert_eq!(closed, universal_quotient_ring(&inv, field, &a, &b).structure_constants().unwrap());

    let psi = universal_multiplication(&inv, field, &field.one(), &field.zero()).unwrap();
    let g = inv.group();
    let c = classify_two_degree_algebra(&psi, &g.element(inv.realized.m), &g.element(inv.realized.n)).unwrap();
    assert_eq!((c.q_bar, c.lambda), (2, field.one()));
}

#[test]
fn lambda_and_delta_are_dual_to_m_and_n() {
    let inv = invariants_for(TwoGenPresentation::new(2, 2, 3).unwrap(), 1).unwrap();
    let lattice = CoverLattice::new(inv.group()).unwrap();
    let (lam, del) = lambda_delta(&inv, &lattice).unwrap();
    let g = inv.group();
    let (m, n) = (inv.realized.m, inv.realized.n);
    assert_eq!(lam.value(m, g.neg_idx(m)), 1);
    assert_eq!(del.value(n, g.neg_idx(n)), 1);
    assert!(lattice.is_smooth_sequence(&[lam, del]).unwrap().is_some());
}

#[test]
fn sigma_of_elementary_groups_is_empty() {
    for spec in ["2", "2,2", "3,3", "2,2,2"] {
        let g = FiniteAbelianGroup::parse(spec).unwrap();
        assert!(sigma_is_empty(&g));
        assert!(enumerate_sigma(&g).is_empty());
    }
    assert!(!sigma_is_empty(&FiniteAbelianGroup::cyclic(4)));
}
