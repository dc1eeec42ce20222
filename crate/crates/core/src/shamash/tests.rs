use super::*;
use crate::koszul::koszul_differential;

fn ring(vars: &[&str]) -> Arc<PolyRing> {
    PolyRing::new(PrimeField::default(), vars).unwrap()
}

fn polys(r: &PolyRing, s: &[&str]) -> Vec<Poly> {
    s.iter().map(|t| r.parse(t).unwrap()).collect()
}

fn build(vars: &[&str], f: &[&str], g: &[&str], len: usize) -> ShamashResolution {
    let r = ring(vars);
    let lift = validate_pair(&r, polys(&r, f), polys(&r, g), None).unwrap();
    let base = quotient_ring(&r, &lift).unwrap();
    es_resolution(&base, &lift, len).unwrap()
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Σ_k C(n, i - 2k) C(c + k - 1, k), the rank of term i.
fn expected_rank(n: usize, c: usize, i: usize) -> usize {
    (0..=i / 2).map(|k| binomial(n, i - 2 * k) * binomial(c + k - 1, k)).sum()
}

#[test]
fn divided_powers() {
    assert_eq!(divided_power_basis(2, 2), vec![vec![0, 2], vec![1, 1], vec![2, 0]]);
    for c in 1..4 {
        for k in 0..5 {
            assert_eq!(divided_power_basis(c, k).len(), binomial(c + k - 1, k));
        }
    }
}

#[test]
fn residue_field_of_two_squares() {
    let res = build(&["x", "y"], &["x", "y"], &["x^2", "y^2"], 6);
    let ranks = res.complex.ranks();
    assert_eq!(&ranks[..5], &[1, 2, 3, 4, 5]);
    for (i, &r) in ranks.iter().enumerate() {
        assert_eq!(r, expected_rank(2, 2, i));
    }
    assert!(res.complex.is_minimal());
    let cert = verify_resolution(&res, 8, Exec::Parallel).unwrap();
    assert_eq!(cert.h0, vec![1, 0, 0, 0, 0, 0, 0, 0, 0]);
    assert_eq!(res.generators[2][0].label(), "y(0,0)e{1,2}");
    assert_eq!(res.generators[2][1].label(), "y(0,1)e{}");
}

#[test]
fn hypersurface_is_eventually_two_periodic() {
    let res = build(&["x", "y"], &["x", "y"], &["x^2 + y^2"], 7);
    assert_eq!(res.complex.ranks(), vec![1, 2, 2, 2, 2, 2, 2, 2]);
    verify_resolution(&res, 8, Exec::Sequential).unwrap();
}

#[test]
fn length_zero_and_limits() {
    let res = build(&["x", "y"], &["x", "y"], &["x^2", "y^2"], 0);
    assert_eq!(res.complex.ranks(), vec![1]);
    assert!(verify_resolution(&res, 2, Exec::Sequential).is_err());
    let r = ring(&["x", "y"]);
    let lift = validate_pair(&r, polys(&r, &["x", "y"]), polys(&r, &["x^2", "y^2"]), None).unwrap();
    let base = quotient_ring(&r, &lift).unwrap();
    assert_eq!(es_resolution(&base, &lift, 41).unwrap_err(), ShamashError::TooLong(41));
}

#[test]
fn instance_with_two_of_three_squares() {
    let res = build(&["x", "y", "z"], &["x^2", "y^2", "z^2"], &["x^3", "y^3"], 6);
    for (i, &r) in res.complex.ranks().iter().enumerate() {
        assert_eq!(r, expected_rank(3, 2, i));
    }
    assert!(res.complex.is_minimal());
    let cert = verify_resolution(&res, 12, Exec::Parallel).unwrap();
    // Hilbert function of S/(x^2,y^2,z^2): 1,3,3,1
    assert_eq!(&cert.h0[..5], &[1, 3, 3, 1, 0]);
}

#[test]
fn bottom_layer_is_koszul() {
    let res = build(&["x", "y", "z"], &["x^2", "y^2", "z^2"], &["x^3", "y^3"], 4);
    let field = res.base().field();
    for i in 1..=3usize {
        let rows: Vec<usize> = (0..res.generators[i - 1].len())
            .filter(|&k| res.generators[i - 1][k].divided_degree() == 0)
            .collect();
        let cols: Vec<usize> = (0..res.generators[i].len())
            .filter(|&k| res.generators[i][k].divided_degree() == 0)
            .collect();
        let sub = res.complex.diff(i as i32).unwrap().submatrix(&rows, &cols);
        let k = koszul_differential(&res.lift.f, &res.lift.f_degrees, i, field).normalized(res.base());
        assert_eq!(sub, k);
    }
}

#[test]
fn validation_errors() {
    let r = ring(&["x", "y"]);
    let err = validate_pair(&r, polys(&r, &["x", "y"]), polys(&r, &["x^2", "x*y"]), None).unwrap_err();
    assert_eq!(err, ShamashError::NotRegular { which: "g" });
    let err = validate_pair(&r, polys(&r, &["x", "x"]), polys(&r, &["x^2"]), None).unwrap_err();
    assert_eq!(err, ShamashError::NotRegular { which: "f" });
    let err = validate_pair(&r, polys(&r, &["x^2", "y^2"]), polys(&r, &["x^3", "x*y + y^2"]), None).unwrap_err();
    assert!(matches!(err, ShamashError::ContainmentFails(_)));
    let err = validate_pair(
        &r,
        polys(&r, &["x", "y"]),
        polys(&r, &["x^2", "y^2"]),
        Some(vec![polys(&r, &["x", "0"]), polys(&r, &["0", "x"])]),
    )
    .unwrap_err();
    assert!(matches!(err, ShamashError::ContainmentFails(_)));
}

#[test]
fn dropping_the_vertical_part_breaks_d_squared() {
    let r = ring(&["x", "y"]);
    let lift = validate_pair(&r, polys(&r, &["x", "y"]), polys(&r, &["x^2", "y^2"]), None).unwrap();
    let base = quotient_ring(&r, &lift).unwrap();
    let good = es_build(&base, &lift, 4, true).unwrap();
    let flat = es_build(&base, &lift, 4, false).unwrap();
    let mut diffs = good.complex.diffs().to_vec();
    diffs[1] = flat.complex.diffs()[1].clone();
    let broken = ChainComplex::assemble(
        base.clone(),
        0,
        good.complex.terms().to_vec(),
        diffs,
        Boundary::Closed,
        Boundary::Truncated,
    )
    .unwrap();
    let res = ShamashResolution {
        complex: broken,
        ..good
    };
    match verify_resolution(&res, 4, Exec::Sequential) {
        Err(ShamashError::NotAComplex(ComplexError::NotAComplex { entry, .. })) => {
            let p = r.parse(&entry).unwrap();
            assert!(!p.is_zero());
        }
        other => panic!("expected d^2 witness, got {other:?}"),
    }
}
