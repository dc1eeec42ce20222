use super::*;
use crate::arith::PrimeField;
use crate::koszul::alpha_element;
use crate::syzygy::resolve;

fn ring(vars: &[&str]) -> Arc<PolyRing> {
    PolyRing::new(PrimeField::default(), vars).unwrap()
}

fn polys(r: &PolyRing, s: &[&str]) -> Vec<Poly> {
    s.iter().map(|t| r.parse(t).unwrap()).collect()
}

#[test]
fn solved_homotopy_on_koszul() {
    let r = ring(&["x", "y"]);
    let k = koszul_complex(&BaseRing::polynomial(r.clone()), &polys(&r, &["x", "y"])).unwrap();
    let g = r.parse("x^2").unwrap();
    let tau = solve_homotopy(&k, &g).unwrap();
    check_homotopy(&k, &tau, &g, 0).unwrap();
    let sys = HomotopySystem::solved(k, vec![g.clone(), r.parse("x*y").unwrap()]).unwrap();
    assert_eq!(sys.source, HomotopySource::Solved);

    // a corrupted component is caught
    let mut bad = tau.clone();
    let t0 = bad.get_mut(&0).unwrap();
    t0.set(0, 0, r.parse("y").unwrap());
    let k = koszul_complex(&BaseRing::polynomial(r.clone()), &polys(&r, &["x", "y"])).unwrap();
    assert!(matches!(check_homotopy(&k, &bad, &g, 0), Err(HomotopyError::IdentityFails { position: 0, .. })));
}

#[test]
fn no_homotopy_outside_annihilator() {
    let r = ring(&["x", "y", "z"]);
    let k = koszul_complex(&BaseRing::polynomial(r.clone()), &polys(&r, &["x", "y"])).unwrap();
    let err = solve_homotopy(&k, &r.parse("z").unwrap()).unwrap_err();
    assert!(matches!(err, HomotopyError::NoSolution { position: 0, column: 0 }));
}

#[test]
fn homotopy_on_non_koszul_resolution() {
    let r = PolyRing::new(PrimeField::new(101).unwrap(), &["x", "y"]).unwrap();
    let base = BaseRing::polynomial(r.clone());
    let mut d1 = PolyMatrix::zeros(vec![0], vec![2, 2, 2]);
    for (j, s) in ["x^2", "x*y", "y^2"].iter().enumerate() {
        d1.set(0, j, r.parse(s).unwrap());
    }
    let k = resolve(&base, &d1, 3, 8).unwrap();
    assert_eq!(k.ranks(), vec![1, 3, 2]);
    let g = r.parse("x^2").unwrap();
    let tau = solve_homotopy(&k, &g).unwrap();
    assert_eq!(tau.len(), 3);
    check_homotopy(&k, &tau, &g, 0).unwrap();
}

fn instance_c() -> (Arc<PolyRing>, LiftMatrix) {
    let r = ring(&["x", "y", "z"]);
    let lift = LiftMatrix::compute(&r, polys(&r, &["x^2", "y^2", "z^2"]), polys(&r, &["x^3", "y^3"])).unwrap();
    (r, lift)
}

#[test]
fn sigma_maps_compose_wedges() {
    let (r, lift) = instance_c();
    let sys = HomotopySystem::koszul(&r, &lift).unwrap();
    for (j, s) in sys.sigma_maps(1, 1).into_iter().enumerate() {
        assert_eq!(s.unwrap(), sys.taus[j][&1]);
    }
    let alpha = alpha_element(&lift, r.field());
    let want = wedge_map(&alpha, 0, &lift.f_degrees, lift.total_g_degree(), r.field());
    assert_eq!(sys.sigma(0b11, 0).unwrap(), want);
    assert_eq!(sys.sigma(0, 2).unwrap(), PolyMatrix::identity(&sys.complex.term(2).unwrap().degrees));

    // τ_2 τ_1 + τ_1 τ_2 vanishes mod (g) on every term
    let base = sys.complex.base().clone();
    let gb = GroebnerBasis::buchberger(r.clone(), &lift.g).unwrap();
    for i in 0..=1 {
        let a = sys.taus[1][&(i + 1)].mul(&sys.taus[0][&i], &base);
        let b = sys.taus[0][&(i + 1)].mul(&sys.taus[1][&i], &base);
        let sum = a.add(&b, r.field());
        assert!(sum.entries().iter().all(|p| gb.ideal_member(p)));
    }
}

#[test]
fn sigma_certificate_complete_intersection_of_squares() {
    let r = ring(&["x", "y"]);
    let lift = LiftMatrix::compute(&r, polys(&r, &["x", "y"]), polys(&r, &["x^2", "y^2"])).unwrap();
    let sys = HomotopySystem::koszul(&r, &lift).unwrap();
    let cert = sys.sigma_c_chain_map(6, Exec::Parallel).unwrap();
    assert_eq!(cert.sigma.rows(), 1);
    assert_eq!(r.format(cert.sigma.get(0, 0)), "x*y");
    // H_0 = k sits in degree |g| = 4 after the twist, as does the socle
    let nonzero: Vec<i32> = cert.degrees.iter().filter(|(_, ir)| ir.source_dim > 0).map(|(d, _)| *d).collect();
    assert_eq!(nonzero, vec![4]);
}

#[test]
fn sigma_certificate_hypersurface() {
    let r = ring(&["x", "y"]);
    let lift = LiftMatrix::compute(&r, polys(&r, &["x", "y"]), polys(&r, &["x^2 + y^2"])).unwrap();
    let sys = HomotopySystem::koszul(&r, &lift).unwrap();
    let v = lift.column(0);
    assert_eq!(v, crate::koszul::ExteriorElement::vector(&polys(&r, &["x", "y"])));
    let cert = sys.sigma_c_chain_map(8, Exec::Sequential).unwrap();
    assert_eq!(cert.degrees.len(), 9);
}

#[test]
fn corrupted_lift_is_rejected_upstream() {
    let r = ring(&["x", "y"]);
    let err = LiftMatrix::new(
        &r,
        polys(&r, &["x", "y"]),
        polys(&r, &["x^2", "y^2"]),
        vec![polys(&r, &["x", "0"]), polys(&r, &["0", "0"])],
    )
    .unwrap_err();
    assert!(matches!(err, KoszulError::LiftIdentityFails { column: 1, .. }));
}

#[test]
fn tor_identity() {
    let r = ring(&["x", "y"]);
    let m = polys(&r, &["x", "y"]);
    assert!(tor_identity_check(&r, &polys(&r, &["x^2", "y^2"]), &m, 2, 8, Exec::Parallel).unwrap());
    assert!(tor_identity_check(&r, &polys(&r, &["x^2 + y^2"]), &m, 1, 8, Exec::Parallel).unwrap());
    assert!(!tor_identity_check(&r, &polys(&r, &["x^2", "y^2"]), &m, 1, 8, Exec::Parallel).unwrap());
    let (r3, lift) = instance_c();
    let _ = lift;
    assert!(tor_identity_check(
        &r3,
        &polys(&r3, &["x^3", "y^3"]),
        &polys(&r3, &["x^2", "y^2", "z^2"]),
        2,
        10,
        Exec::Parallel
    )
    .unwrap());
}

#[test]
fn koszul_duality_of_top_differential() {
    let r = ring(&["x", "y", "z"]);
    let base = BaseRing::polynomial(r.clone());
    for g in [vec!["x^2", "y^2"], vec!["x^3", "y^3", "z^3"], vec!["x"]] {
        let k = koszul_complex(&base, &polys(&r, &g)).unwrap();
        assert!(koszul_self_dual(&k), "{g:?}");
    }
    let k = koszul_complex(&base, &polys(&r, &["x", "y", "z"])).unwrap();
    let mut diffs = k.diffs().to_vec();
    diffs[2] = diffs[2].scale(r.field().neg(1), r.field());
    let flipped = ChainComplex::new(base, 0, k.terms().to_vec(), diffs, k.lower(), k.upper()).unwrap();
    assert!(!koszul_self_dual(&flipped));
}
