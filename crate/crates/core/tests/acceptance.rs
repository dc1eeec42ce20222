//! One pass/fail line per acceptance criterion. Expected values come from
//! closed forms, brute-force recomputation or the dense oracle; the process
//! exits nonzero if any criterion fails.

use std::panic::{self, AssertUnwindSafe};
use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tate_core::arith::{Monomial, Poly, PolyRing, PrimeField};
use tate_core::exec::Exec;
use tate_core::freecomplex::{homology_dims, serial, ChainComplex};
use tate_core::harness::{oracle_homology, run_build, BuildOutput, ProblemInstance};
use tate_core::homotopy::{tor_identity_check, HomotopySystem};
use tate_core::koszul::{alpha_element, LiftMatrix};
use tate_core::shamash::{es_resolution, quotient_ring, validate_pair};
use tate_core::tate::{
    betti_match_up_to_twist, build_tate, dual_betti, general_splice, matrix_factorization_check, mcm_generator_count,
    mcm_presentation, minimize, orthogonality_check, structural_generator_count, tate_splice,
};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn ok<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

struct Named {
    name: &'static str,
    instance: ProblemInstance,
}

fn inst(vars: &[&str], f: &[&str], g: &[&str], window: [i32; 2], dmax: Option<i32>) -> ProblemInstance {
    let s = |v: &[&str]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    ProblemInstance {
        field_char: 32003,
        variables: s(vars),
        f: s(f),
        g: s(g),
        a: None,
        window: Some(window),
        max_internal_degree: dmax,
    }
}

/// Pure powers of distinct variables, each `g_j` a higher power of the
/// matching `f_j`, drawn from a fixed seed.
fn random_monomial_instance() -> ProblemInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let vars = ["x", "y", "z"];
    let a: Vec<u32> = (0..3).map(|_| rng.gen_range(1..=2)).collect();
    let b: Vec<u32> = (0..2).map(|j| a[j] + rng.gen_range(1..=2)).collect();
    let f: Vec<String> = (0..3).map(|i| format!("{}^{}", vars[i], a[i])).collect();
    let g: Vec<String> = (0..2).map(|j| format!("{}^{}", vars[j], b[j])).collect();
    let f: Vec<&str> = f.iter().map(String::as_str).collect();
    let g: Vec<&str> = g.iter().map(String::as_str).collect();
    inst(&vars, &f, &g, [-3, 4], Some(12))
}

fn instances() -> Vec<Named> {
    vec![
        Named {
            name: "T",
            instance: inst(&["x", "y"], &["x", "y"], &["x^2", "y^2"], [-4, 5], None),
        },
        Named {
            name: "C",
            instance: inst(&["x", "y", "z"], &["x^2", "y^2", "z^2"], &["x^3", "y^3"], [-4, 6], Some(14)),
        },
        Named {
            name: "H",
            instance: inst(&["x", "y"], &["x", "y"], &["x^2+y^2"], [-4, 6], Some(10)),
        },
        Named {
            name: "R",
            instance: random_monomial_instance(),
        },
    ]
}

struct Built {
    name: &'static str,
    instance: ProblemInstance,
    ring: Arc<PolyRing>,
    lift: LiftMatrix,
    output: BuildOutput,
    json: String,
}

fn build_all() -> Result<Vec<Built>, String> {
    instances()
        .into_iter()
        .map(|n| {
            let v = ok(n.instance.validate())?;
            let output = run_build(&n.instance, Exec::Parallel).map_err(|e| format!("{}: {e}", n.name))?;
            let json = output.to_json();
            Ok(Built {
                name: n.name,
                instance: n.instance,
                ring: v.ring,
                lift: v.lift,
                output,
                json,
            })
        })
        .collect()
}

fn splice_of(b: &Built) -> Result<ChainComplex, String> {
    ok(serial::from_json(&b.output.splice))
}

fn minimal_of(b: &Built) -> Result<ChainComplex, String> {
    ok(serial::from_json(&b.output.minimal))
}

fn degree_range(b: &Built) -> (i32, i32) {
    let [lo, hi] = b.output.certificates.degrees;
    (lo, hi)
}

/// Interior `(i, d)` pairs where sparse and dense homology disagree, and
/// where either is nonzero.
fn sweep(b: &Built, c: &ChainComplex) -> Result<(usize, Vec<String>, Vec<String>), String> {
    let (dmin, dmax) = degree_range(b);
    let mut checked = 0;
    let mut disagree = Vec::new();
    let mut nonzero = Vec::new();
    for i in c.positions().filter(|&i| c.homology_defined(i)) {
        let sparse = ok(homology_dims(c, i, dmin..=dmax, Exec::Parallel))?;
        for (d, s) in (dmin..=dmax).zip(sparse) {
            let dense = oracle_homology(&b.ring, &b.lift.g, c, i, d).ok_or(format!("oracle undefined at {i}"))?;
            checked += 1;
            if s != dense {
                disagree.push(format!("{}: H_{i} in degree {d}: sparse {s}, dense {dense}", b.name));
            }
            if s != 0 || dense != 0 {
                nonzero.push(format!("{}: H_{i} in degree {d} is {s}/{dense}", b.name));
            }
        }
    }
    Ok((checked, disagree, nonzero))
}

fn residue_field_example(built: &[Built]) -> Outcome {
    let b = &built[0];
    let out = &b.output;
    let alpha = out.alpha.get("{1,2}").cloned().unwrap_or_default();
    ensure!(alpha == "x*y" && out.alpha.len() == 1, "alpha is {:?}", out.alpha);
    let splice = splice_of(b)?;
    let d0 = splice.diff(0).ok_or("no splice differential")?;
    let entry = b.ring.format(d0.get(0, 0));
    ensure!(
        (d0.rows(), d0.cols()) == (1, 1) && entry == alpha,
        "splice entry {entry} in a {}x{} matrix",
        d0.rows(),
        d0.cols()
    );
    let min = minimal_of(b)?;
    let ranks = min.ranks();
    let expected: Vec<usize> = (-4i32..=5).map(|i| if i >= 0 { i + 1 } else { -i } as usize).collect();
    ensure!(ranks == expected, "ranks {ranks:?}, expected {expected:?}");
    let mut checked = 0;
    for c in [&splice, &min] {
        let (n, disagree, nonzero) = sweep(b, c)?;
        ensure!(disagree.is_empty(), "{}", disagree[0]);
        ensure!(nonzero.is_empty(), "{}", nonzero[0]);
        checked += n;
    }
    let (dmin, dmax) = degree_range(b);
    Ok(format!(
        "splice entry {entry} = det A; ranks {ranks:?}; acyclic on positions -3..4, degrees {dmin}..{dmax}, sparse and dense ({checked} pieces)"
    ))
}

fn generator_counts() -> Outcome {
    let cases = [(3usize, 2usize, 1u64), (5, 2, 3), (4, 1, 2)];
    let formula: Vec<u64> = cases.iter().map(|&(n, c, _)| mcm_generator_count(n, c)).collect();
    let expected: Vec<u64> = cases.iter().map(|c| c.2).collect();
    ensure!(formula == expected, "formula gives {formula:?}, expected {expected:?}");
    let letters = ["a", "b", "c", "d", "e"];
    let mut built = Vec::new();
    for &(n, c, want) in &cases {
        let vars = &letters[..n];
        let f: Vec<String> = vars.iter().map(|v| format!("{v}^2")).collect();
        let g: Vec<String> = vars[..c].iter().map(|v| format!("{v}*{v}^2")).collect();
        let ring = ok(PolyRing::new(PrimeField::default(), vars))?;
        let parse = |v: &[String]| v.iter().map(|s| ring.parse(s)).collect::<Result<Vec<_>, _>>();
        let lift = ok(validate_pair(&ring, ok(parse(&f))?, ok(parse(&g))?, None))?;
        let (_, t) = ok(build_tate(&ring, &lift, (-1, 2), Some(10), Exec::Parallel))?;
        ensure!(t.certificates.minimal_before, "({n},{c}) splice is not minimal");
        let mcm = ok(mcm_presentation(&t.minimized()))?;
        built.push((n, c, want, mcm.generator_count as u64, structural_generator_count(n, c)));
    }
    let summary: Vec<String> = built
        .iter()
        .map(|(n, c, want, got, s)| format!("({n},{c}): formula {want}, built {got}, rank F_0 + rank F_(m-1) = {s}"))
        .collect();
    ensure!(
        built.iter().all(|(_, _, want, got, _)| want == got),
        "formula {formula:?} matches, built presentations differ: {}",
        summary.join("; ")
    );
    Ok(summary.join("; "))
}

fn sigma_certificate(built: &[Built]) -> Outcome {
    let mut lines = Vec::new();
    for b in built.iter().filter(|b| b.name == "T" || b.name == "C") {
        let sys = ok(HomotopySystem::koszul(&b.ring, &b.lift))?;
        let cert = sys.sigma_c_chain_map(10, Exec::Parallel).map_err(|e| format!("{}: {e}", b.name))?;
        let last = cert.degrees.last().map_or(-1, |(d, _)| *d);
        ensure!(last == 10, "{}: checked only up to degree {last}", b.name);
        lines.push(format!("{}: chain map over R, H_0 -> H_c iso in degrees 0..10", b.name));
    }
    Ok(lines.join("; "))
}

fn tor_identity(built: &[Built]) -> Outcome {
    let mut lines = Vec::new();
    for b in built.iter().filter(|b| matches!(b.name, "T" | "C" | "R")) {
        let c = b.lift.c() as i32;
        let pass = ok(tor_identity_check(&b.ring, &b.lift.g, &b.lift.f, c, 14, Exec::Parallel))?;
        ensure!(pass, "{}: Tor_c(R, M) differs from M(-|g|)", b.name);
        lines.push(format!("{} (f = {:?}, g = {:?})", b.name, b.instance.f, b.instance.g));
    }
    Ok(format!("dim Tor_c = dim M shifted, degrees 0..14: {}", lines.join(", ")))
}

fn hypersurface() -> Outcome {
    let ring = ok(PolyRing::new(PrimeField::default(), &["x", "y"]))?;
    let p = |s: &str| ring.parse(s).unwrap();
    let lift = ok(validate_pair(&ring, vec![p("x"), p("y")], vec![p("x^2+y^2")], None))?;
    let (_, t) = ok(build_tate(&ring, &lift, (-4, 6), Some(10), Exec::Parallel))?;
    let min = t.minimized();
    let ranks = min.complex.ranks();
    ensure!(ranks[1..ranks.len() - 1].iter().all(|&k| k == 2), "ranks {ranks:?}");
    let mf = ok(matrix_factorization_check(&min.complex.restrict(-3, 5), &lift.g[0]))?;
    ensure!(mf.identity_both_ways, "products are not g*I after normalization");
    ensure!(mf.periodic, "normalized differentials are not 2-periodic");
    Ok(format!(
        "interior ranks all 2; d_i d_(i+1) = g*I both ways on positions -3..5; raw products scalar multiples of g: {}",
        mf.raw_scalar_multiples
    ))
}

fn minimality(built: &[Built]) -> Outcome {
    let mut lines = Vec::new();
    for b in built {
        let splice = splice_of(b)?;
        if let Some((i, r, c)) = splice.unit_entry() {
            return Err(format!("{}: d_{i} has a unit at ({r}, {c})", b.name));
        }
        ensure!(b.output.certificates.minimal_before, "{}: certificate disagrees", b.name);
        lines.push(b.name);
    }
    Ok(format!("no constant entries before minimization on {}", lines.join(", ")))
}

fn duality(built: &[Built]) -> Outcome {
    let mut lines = Vec::new();
    for b in built.iter().filter(|b| b.name == "T" || b.name == "C") {
        let base = ok(quotient_ring(&b.ring, &b.lift))?;
        let m = (b.lift.n() - b.lift.c()) as i32;
        let window = match b.name {
            "T" => (-4, 5),
            _ => (-3, 4),
        };
        let res = ok(es_resolution(&base, &b.lift, 8))?;
        let t = ok(tate_splice(&res, window, Some(12), Exec::Parallel))?;
        let dualized = dual_betti(&minimize(&t.complex, 0), m - 1);
        let mirrored = (m - 1 - window.1, m - 1 - window.0);
        let other = ok(general_splice(&res.complex, &res.complex, m, mirrored, Some(12), 0, Exec::Parallel))?;
        let direct = minimize(&other.complex, 0).betti_table();
        let offset = betti_match_up_to_twist(&dualized, &direct).ok_or(format!("{}: Betti tables differ", b.name))?;
        lines.push(format!("{} (twist offset {offset})", b.name));
    }
    Ok(format!("dualized Betti tables match the independent splice of the dual: {}", lines.join(", ")))
}

fn random_poly(ring: &PolyRing, d: i32, rng: &mut ChaCha8Rng) -> Poly {
    if d < 0 {
        return Poly::zero();
    }
    let field = ring.field();
    let mut terms = Vec::new();
    for m in Monomial::all_of_degree(ring.nvars(), d as u32) {
        if rng.gen_bool(0.6) {
            terms.push((m, rng.gen_range(1..field.characteristic())));
        }
    }
    Poly::from_terms(terms, field)
}

fn cramer_orthogonality() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let field = PrimeField::default();
    let shapes = [(3usize, 2usize), (4, 2), (4, 3)];
    let mut done = 0;
    let mut attempts = 0;
    let mut nonzero_alpha = 0;
    while done < 20 {
        attempts += 1;
        ensure!(attempts < 400, "only {done} valid random instances after {attempts} draws");
        let (n, c) = shapes[done % shapes.len()];
        let nvars = rng.gen_range(n..=4);
        let names: Vec<String> = ["x", "y", "z", "w"][..nvars].iter().map(|s| s.to_string()).collect();
        let ring = ok(PolyRing::from_names(field, names))?;
        let fdeg: Vec<i32> = (0..n).map(|_| rng.gen_range(1..=2)).collect();
        let f: Vec<Poly> = (0..n)
            .map(|i| ring.var(i).pow(fdeg[i] as u32, field).add(&random_poly(&ring, fdeg[i], &mut rng), field))
            .collect();
        let gdeg: Vec<i32> = (0..c).map(|_| rng.gen_range(3..=4)).collect();
        let a: Vec<Vec<Poly>> = (0..n)
            .map(|i| (0..c).map(|j| random_poly(&ring, gdeg[j] - fdeg[i], &mut rng)).collect())
            .collect();
        let g: Vec<Poly> = (0..c)
            .map(|j| (0..n).fold(Poly::zero(), |acc, i| acc.add(&a[i][j].mul(&f[i], field), field)))
            .collect();
        let Ok(lift) = validate_pair(&ring, f, g, Some(a)) else {
            continue;
        };
        ensure!(orthogonality_check(&lift, &ring), "alpha ^ a_j nonzero for A = {:?}", lift.a);
        if !alpha_element(&lift, field).is_zero() {
            nonzero_alpha += 1;
        }
        done += 1;
    }
    Ok(format!(
        "20 random valid A over (n,c) in (3,2), (4,2), (4,3), <= 4 variables ({attempts} draws, {nonzero_alpha} with alpha != 0)"
    ))
}

fn oracle_equivalence(built: &[Built]) -> Outcome {
    let mut total = 0;
    for b in built {
        for c in [splice_of(b)?, minimal_of(b)?] {
            let (n, disagree, _) = sweep(b, &c)?;
            ensure!(disagree.is_empty(), "{}", disagree[0]);
            total += n;
        }
    }
    let names: Vec<&str> = built.iter().map(|b| b.name).collect();
    Ok(format!("{total} interior (i, d) pieces agree on {}", names.join(", ")))
}

fn determinism(built: &[Built]) -> Outcome {
    for b in built {
        for exec in [Exec::Parallel, Exec::Sequential] {
            let again = run_build(&b.instance, exec).map_err(|e| e.to_string())?.to_json();
            ensure!(again == b.json, "{}: output differs under {exec:?}", b.name);
        }
    }
    let sizes: Vec<String> = built.iter().map(|b| format!("{} {} bytes", b.name, b.json.len())).collect();
    Ok(format!("three builds per instance byte-identical ({})", sizes.join(", ")))
}

fn run(label: &str, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let outcome = panic::catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
        let msg = e
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_default();
        Err(format!("panicked: {msg}"))
    });
    let secs = start.elapsed().as_secs_f64();
    match outcome {
        Ok(detail) => {
            println!("PASS  {label}  [{secs:.1}s]  {detail}");
            true
        }
        Err(detail) => {
            println!("FAIL  {label}  [{secs:.1}s]  {detail}");
            false
        }
    }
}

fn main() {
    panic::set_hook(Box::new(|_| {}));
    let built = match build_all() {
        Ok(b) => b,
        Err(e) => {
            println!("FAIL  building acceptance instances: {e}");
            std::process::exit(1);
        }
    };
    let results = [
        run(" 1 residue field splice and Betti numbers", || residue_field_example(&built)),
        run(" 2 MCM generator counts", generator_counts),
        run(" 3 sigma_c chain map and H_0 -> H_c", || sigma_certificate(&built)),
        run(" 4 Tor_c identity", || tor_identity(&built)),
        run(" 5 hypersurface matrix factorization", hypersurface),
        run(" 6 minimality before minimization", || minimality(&built)),
        run(" 7 duality with the dual module", || duality(&built)),
        run(" 8 Cramer orthogonality", cramer_orthogonality),
        run(" 9 sparse vs dense oracle", || oracle_equivalence(&built)),
        run("10 determinism", || determinism(&built)),
    ];
    let failed = results.iter().filter(|&&p| !p).count();
    println!("{} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
