use std::sync::Arc;

use super::*;
use crate::arith::{Poly, PolyRing, PrimeField};
use crate::exec::Exec;
use crate::groebner::GroebnerBasis;

fn ring() -> Arc<PolyRing> {
    PolyRing::new(PrimeField::default(), &["x", "y"]).unwrap()
}

fn mat(r: &PolyRing, target: Vec<i32>, source: Vec<i32>, rows: &[&[&str]]) -> PolyMatrix {
    let mut m = PolyMatrix::zeros(target, source);
    for (i, row) in rows.iter().enumerate() {
        for (j, s) in row.iter().enumerate() {
            m.set(i, j, r.parse(s).unwrap());
        }
    }
    m
}

/// 0 <- S <- S(-1)^2 <- S(-2) <- 0, resolving k.
fn koszul_xy(r: &Arc<PolyRing>) -> ChainComplex {
    let base = BaseRing::polynomial(r.clone());
    ChainComplex::new(
        base,
        0,
        vec![
            GradedFreeModule::new(vec![0]),
            GradedFreeModule::new(vec![1, 1]),
            GradedFreeModule::new(vec![2]),
        ],
        vec![
            mat(r, vec![0], vec![1, 1], &[&["x", "y"]]),
            mat(r, vec![1, 1], vec![2], &[&["-y"], &["x"]]),
        ],
        Boundary::Closed,
        Boundary::Closed,
    )
    .unwrap()
}

#[test]
fn koszul_resolves_residue_field() {
    let r = ring();
    let c = koszul_xy(&r);
    assert_eq!(homology_dims(&c, 0, 0..=4, Exec::Sequential).unwrap(), vec![1, 0, 0, 0, 0]);
    for i in 1..=2 {
        assert_eq!(homology_dims(&c, i, 0..=4, Exec::Parallel).unwrap(), vec![0; 5]);
    }
    assert!(c.is_minimal());
}

#[test]
fn rejects_non_complex_and_bad_degrees() {
    let r = ring();
    let base = BaseRing::polynomial(r.clone());
    let terms = vec![
        GradedFreeModule::new(vec![0]),
        GradedFreeModule::new(vec![1, 1]),
        GradedFreeModule::new(vec![2]),
    ];
    let err = ChainComplex::new(
        base.clone(),
        0,
        terms.clone(),
        vec![
            mat(&r, vec![0], vec![1, 1], &[&["x", "y"]]),
            mat(&r, vec![1, 1], vec![2], &[&["y"], &["x"]]),
        ],
        Boundary::Closed,
        Boundary::Closed,
    )
    .unwrap_err();
    assert!(matches!(err, ComplexError::NotAComplex { position: 2, row: 0, col: 0, ref entry } if entry == "2*x*y"));

    let err = ChainComplex::new(
        base,
        0,
        terms,
        vec![
            mat(&r, vec![0], vec![1, 1], &[&["x", "y^2"]]),
            mat(&r, vec![1, 1], vec![2], &[&["-y"], &["x"]]),
        ],
        Boundary::Closed,
        Boundary::Closed,
    )
    .unwrap_err();
    assert!(matches!(err, ComplexError::DegreeMismatch { position: 1, row: 0, col: 1, expected: 1 }));
}

#[test]
fn window_edges() {
    let r = ring();
    let c = koszul_xy(&r).restrict(0, 1);
    assert!(homology_dims(&c, 0, 0..=2, Exec::Sequential).is_ok());
    assert_eq!(
        homology_dims(&c, 1, 0..=2, Exec::Sequential),
        Err(ComplexError::WindowEdge { position: 1 })
    );
}

#[test]
fn periodic_complex_over_quotient() {
    let r = PolyRing::new(PrimeField::default(), &["x"]).unwrap();
    let gb = GroebnerBasis::buchberger(r.clone(), &[r.parse("x^2").unwrap()]).unwrap();
    let base = BaseRing::quotient(gb);
    let terms = (0..4).map(|i| GradedFreeModule::new(vec![i])).collect();
    let diffs = (1..4).map(|i| mat(&r, vec![i - 1], vec![i], &[&["x"]])).collect();
    let c = ChainComplex::new(base, 0, terms, diffs, Boundary::Closed, Boundary::Truncated).unwrap();
    assert_eq!(homology_dims(&c, 0, 0..=3, Exec::Sequential).unwrap(), vec![1, 0, 0, 0]);
    for i in 1..=2 {
        assert_eq!(homology_dims(&c, i, 0..=5, Exec::Sequential).unwrap(), vec![0; 6]);
    }
    assert!(matches!(
        homology_dims(&c, 3, 0..=1, Exec::Sequential),
        Err(ComplexError::WindowEdge { position: 3 })
    ));
}

#[test]
fn dual_and_shift() {
    let r = ring();
    let c = koszul_xy(&r);
    let d = dual(&c, 2);
    assert_eq!((d.lo(), d.hi()), (-2, 0));
    assert_eq!(d.term(-2).unwrap().degrees, vec![0]);
    assert_eq!(d.term(0).unwrap().degrees, vec![2]);
    // Koszul complex is self-dual: the dual resolves k up to shift
    let rebuilt = ChainComplex::new(
        d.base().clone(),
        d.lo(),
        d.terms().to_vec(),
        d.diffs().to_vec(),
        d.lower(),
        d.upper(),
    )
    .unwrap();
    assert_eq!(homology_dims(&rebuilt, -2, 0..=3, Exec::Sequential).unwrap(), vec![1, 0, 0, 0]);
    assert_eq!(homology_dims(&rebuilt, -1, 0..=3, Exec::Sequential).unwrap(), vec![0; 4]);

    // double dual negates every differential
    let dd = dual(&d, 2);
    let field = r.field();
    for i in 1..=2 {
        assert_eq!(dd.diff(i).unwrap(), &c.diff(i).unwrap().scale(field.neg(1), field));
    }

    let s = shift(&c, 3);
    assert_eq!((s.lo(), s.hi()), (3, 5));
    assert_eq!(homology_dims(&s, 3, 0..=1, Exec::Sequential).unwrap(), vec![1, 0]);
    assert_eq!(s.diff(4).unwrap(), &c.diff(1).unwrap().scale(field.neg(1), field));
}

fn identity_map(c: &ChainComplex) -> ChainMap {
    let mut phi = ChainMap::new();
    for i in c.positions() {
        phi.insert(i, PolyMatrix::identity(&c.term(i).unwrap().degrees));
    }
    phi
}

#[test]
fn cone_of_identity_is_exact() {
    let r = ring();
    let c = koszul_xy(&r);
    let phi = identity_map(&c);
    check_chain_map(&phi, &c, &c).unwrap();
    let t = mapping_cone(&phi, &c, &c).unwrap();
    assert_eq!((t.lo(), t.hi()), (-1, 2));
    assert_eq!(t.lower(), Boundary::Closed);
    for i in t.positions() {
        assert_eq!(homology_dims(&t, i, 0..=3, Exec::Sequential).unwrap(), vec![0; 4], "position {i}");
    }
    for d in 0..=3 {
        assert!(induced_rank(phi.component(0).unwrap(), &c, 0, &c, 0, d).unwrap().is_iso());
    }
}

#[test]
fn chain_map_witness() {
    let r = ring();
    let c = koszul_xy(&r);
    let mut phi = identity_map(&c);
    phi.insert(1, PolyMatrix::zeros(vec![1, 1], vec![1, 1]));
    let err = check_chain_map(&phi, &c, &c).unwrap_err();
    assert!(matches!(err, ComplexError::NotAChainMap { .. }), "{err:?}");
}

#[test]
fn multiplication_map_induced_rank() {
    // x : S(-1) -> S is injective on homology of the one-term complexes in
    // positive degree and zero in degree 0
    let r = ring();
    let base = BaseRing::polynomial(r.clone());
    let one = |deg| {
        ChainComplex::new(
            base.clone(),
            0,
            vec![GradedFreeModule::new(vec![deg])],
            vec![],
            Boundary::Closed,
            Boundary::Closed,
        )
        .unwrap()
    };
    let (a, b) = (one(1), one(0));
    let m = mat(&r, vec![0], vec![1], &[&["x"]]);
    let ir = induced_rank(&m, &a, 0, &b, 0, 0).unwrap();
    assert_eq!((ir.source_dim, ir.target_dim, ir.rank), (0, 1, 0));
    let ir = induced_rank(&m, &a, 0, &b, 0, 2).unwrap();
    assert_eq!((ir.source_dim, ir.target_dim, ir.rank), (2, 3, 2));
}

#[test]
fn json_round_trip_is_byte_exact() {
    let r = ring();
    let mut c = koszul_xy(&r);
    c.relabel(|i, _| format!("K{i}"));
    let s = serial::to_string(&c);
    let back = serial::from_str(&s).unwrap();
    assert_eq!(serial::to_string(&back), s);
    assert!(s.contains("\"twists\": [\n        -1,\n        -1\n      ]"));

    let gb = GroebnerBasis::buchberger(r.clone(), &[r.parse("x^2").unwrap(), r.parse("y^2").unwrap()]).unwrap();
    let base = BaseRing::quotient(gb);
    let q = ChainComplex::new(
        base,
        -1,
        vec![GradedFreeModule::new(vec![0]), GradedFreeModule::new(vec![1])],
        vec![mat(&r, vec![0], vec![1], &[&["x"]])],
        Boundary::Truncated,
        Boundary::Truncated,
    )
    .unwrap();
    let s = serial::to_string(&q);
    assert_eq!(serial::to_string(&serial::from_str(&s).unwrap()), s);
    assert!(matches!(serial::from_str("{\"bogus\": 1}"), Err(ComplexError::Malformed(_))));
}

#[test]
fn entries_are_normalized_over_quotient() {
    let r = ring();
    let gb = GroebnerBasis::buchberger(r.clone(), &[r.parse("x^2").unwrap()]).unwrap();
    let base = BaseRing::quotient(gb);
    let c = ChainComplex::new(
        base,
        0,
        vec![GradedFreeModule::new(vec![0]), GradedFreeModule::new(vec![2])],
        vec![mat(&r, vec![0], vec![2], &[&["x^2 + x*y"]])],
        Boundary::Closed,
        Boundary::Closed,
    )
    .unwrap();
    assert_eq!(c.diff(1).unwrap().get(0, 0), &r.parse("x*y").unwrap());
    assert_eq!(c.diff(1).unwrap().get(0, 0).mul(&Poly::one(), r.field()), r.parse("x*y").unwrap());
}
