//! Acceptance suite: one line per criterion, nonzero exit if any fails.

mod common;

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use toricfan::cone::Cone;
use toricfan::divisor::{
    cartier_data, cartier_index, count_lattice_points, divisor_polytope, is_ample, is_projective,
    picard_group, polytope_degree, Projectivity, ToricDivisor,
};
use toricfan::egyptian::{
    classify_pyramidal, egyptian_report, small_modification, verify_modification,
};
use toricfan::exactlin::{
    smith_normal_form, solve_integral, strict_feasible, Feasibility, IntegerMatrix, LatticeVector,
    RationalVector, SolveMode, StrictSystem,
};
use toricfan::families::{standard_grid, verify_yu_combinatorics, yu_fan, yu_report, YuConfig};
use toricfan::fan::{fans_isomorphic, Fan};
use toricfan::fixtures;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn timed(limit: Duration, label: &str, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let out = f()?;
    let took = start.elapsed();
    if took > limit {
        return Err(format!("{label}: {took:.2?} exceeds {limit:?}"));
    }
    Ok(out)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn cfg(n: usize, u: u64) -> YuConfig {
    YuConfig::new(n, u).expect("valid config")
}

fn criterion_1() -> Outcome {
    let mut slowest = Duration::ZERO;
    for n in 3..=5 {
        for u in 2..=3 {
            let y = yu_fan(cfg(n, u)).map_err(|e| e.to_string())?;
            let start = Instant::now();
            let pic = picard_group(&y.fan).map_err(|e| e.to_string())?;
            let took = start.elapsed();
            slowest = slowest.max(took);
            ensure(pic.rank == 0 && pic.invariant_factors.is_empty(), || {
                format!("Pic(Y_{u}) for n={n} is {pic}")
            })?;
            ensure(took < Duration::from_secs(1), || {
                format!("n={n} u={u} took {took:.2?}")
            })?;
        }
    }
    Ok(format!("Pic trivial on 6 instances, slowest {slowest:.2?}"))
}

fn criterion_2() -> Outcome {
    let mut slowest = Duration::ZERO;
    for n in 3..=5 {
        for u in 1..=3 {
            let y = yu_fan(cfg(n, u)).map_err(|e| e.to_string())?;
            let start = Instant::now();
            let p = is_projective(&y.fan).map_err(|e| e.to_string())?;
            let took = start.elapsed();
            slowest = slowest.max(took);
            ensure(took < Duration::from_secs(2), || {
                format!("n={n} u={u} took {took:.2?}")
            })?;
            match (u, p) {
                (1, Projectivity::Feasible { divisor, .. }) => {
                    ensure(
                        is_ample(&y.fan, &divisor).map_err(|e| e.to_string())?,
                        || format!("witness for n={n} is not ample"),
                    )?;
                }
                (1, Projectivity::Infeasible) => {
                    return Err(format!("Y_1 (n={n}) reported infeasible"))
                }
                (_, Projectivity::Infeasible) => {}
                (_, Projectivity::Feasible { .. }) => {
                    return Err(format!("Y_{u} (n={n}) reported projective"))
                }
            }
        }
    }
    Ok(format!(
        "Y_1 projective with ample witness, Y_2/Y_3 infeasible, slowest {slowest:.2?}"
    ))
}

fn criterion_3() -> Outcome {
    let mut slowest = Duration::ZERO;
    for c in standard_grid() {
        let start = Instant::now();
        let y = yu_fan(c).map_err(|e| e.to_string())?;
        let report = egyptian_report(&y.fan, c.e()).map_err(|e| e.to_string())?;
        let q = y.fan.quotient_fan(c.e()).map_err(|e| e.to_string())?;
        let iso = fans_isomorphic(&q, &fixtures::projective_space(c.n() - 1))
            .map_err(|e| e.to_string())?;
        let took = start.elapsed();
        slowest = slowest.max(took);
        ensure(report.verdict, || format!("e not Egyptian for {c:?}"))?;
        let iso = iso.ok_or_else(|| format!("quotient not P^{} for {c:?}", c.n() - 1))?;
        ensure(iso.matrix.is_unimodular(), || {
            "witness not unimodular".into()
        })?;
        ensure(took < Duration::from_secs(2), || {
            format!("{c:?} took {took:.2?}")
        })?;
    }
    Ok(format!(
        "9 instances Egyptian with quotient P^(n-1), slowest {slowest:.2?}"
    ))
}

fn criterion_4() -> Outcome {
    let mut slowest = Duration::ZERO;
    for c in standard_grid() {
        let n = c.n();
        let y = yu_fan(c).map_err(|e| e.to_string())?;
        let start = Instant::now();
        let m = small_modification(&y.fan, c.e()).map_err(|e| e.to_string())?;
        let report = verify_modification(&m).map_err(|e| e.to_string())?;
        let took = start.elapsed();
        slowest = slowest.max(took);
        ensure(m.fan.is_complete(), || {
            format!("{c:?}: modified fan not complete")
        })?;
        ensure(m.fan.max_cones().len() == 2 * n + n * (n - 1) / 2, || {
            format!("{c:?}: {} maximal cones", m.fan.max_cones().len())
        })?;
        ensure(m.exceptional_walls.len() == n, || {
            format!("{c:?}: {} walls", m.exceptional_walls.len())
        })?;
        ensure(report.passed(), || format!("{c:?}: {:?}", report.failures))?;
        ensure(took < Duration::from_secs(2), || {
            format!("{c:?} took {took:.2?}")
        })?;
    }
    Ok(format!(
        "modification verified on 9 instances, slowest {slowest:.2?}"
    ))
}

/// Cartier index of `D_e` on the modified fan, recorded on first derivation.
const CARTIER_INDEX_REGRESSION: &[((usize, u64), i64)] = &[
    ((3, 1), 1),
    ((3, 2), 1),
    ((3, 3), 1),
    ((4, 1), 1),
    ((4, 2), 1),
    ((4, 3), 1),
    ((5, 1), 1),
    ((5, 2), 1),
    ((5, 3), 1),
];

fn criterion_5() -> Outcome {
    let mut seen = Vec::new();
    for &((n, u), expected) in CARTIER_INDEX_REGRESSION {
        let y = yu_fan(cfg(n, u)).map_err(|e| e.to_string())?;
        let m = small_modification(&y.fan, 0).map_err(|e| e.to_string())?;
        let d = ToricDivisor::prime(m.fan.rays().len(), 0);
        let data = cartier_data(&m.fan, &d, SolveMode::Rational).map_err(|e| e.to_string())?;
        ensure(data.is_some(), || {
            format!("D_e not Q-Cartier for n={n} u={u}")
        })?;
        let index = cartier_index(&m.fan, &d)
            .map_err(|e| e.to_string())?
            .ok_or_else(|| format!("no Cartier index for n={n} u={u}"))?;
        ensure(index == BigInt::from(expected), || {
            format!("index {index} for n={n} u={u}, recorded {expected}")
        })?;
        seen.push(format!("({n},{u})→{index}"));
    }
    Ok(format!("D_e Q-Cartier, indices {}", seen.join(" ")))
}

fn criterion_6() -> Outcome {
    timed(Duration::from_secs(5), "500 cones", || {
        let cones = fixtures::random_three_cones(500, 6);
        let mut rays = 0;
        for c in &cones {
            ensure((4..=8).contains(&c.rays().len()) && c.dim() == 3, || {
                format!("bad sample {c}")
            })?;
            for r in c.rays() {
                let k = classify_pyramidal(c, r).map_err(|e| e.to_string())?;
                ensure(k.is_pyramidal(), || format!("{c} at {r} is not pyramidal"))?;
                rays += 1;
            }
        }
        Ok(format!(
            "500 cones, {rays} (cone, ray) pairs all LowDim or Pyramidal"
        ))
    })
}

fn criterion_7() -> Outcome {
    let r = yu_report(cfg(3, 2)).map_err(|e| e.to_string())?;
    let ehrhart = r.degree.ok_or("no degree computed")?;
    let growth = r.growth.ok_or("no growth statement")?;
    // C(t+2, 2) = 1 + 3/2 t + 1/2 t²
    let expected = vec![
        BigRational::one(),
        BigRational::new(3.into(), 2.into()),
        BigRational::new(1.into(), 2.into()),
    ];
    ensure(ehrhart.coefficients == expected, || {
        format!("Ehrhart {ehrhart}")
    })?;
    ensure(ehrhart.degree.is_one(), || {
        format!("degree {}", ehrhart.degree)
    })?;
    ensure(growth.statement == "c₃(E_t) = t² + O(t)", || {
        growth.statement.clone()
    })?;
    ensure(growth.lower_order.contains("not determined"), || {
        growth.lower_order.clone()
    })?;
    // the counts behind the interpolation
    let q = yu_fan(cfg(3, 2))
        .map_err(|e| e.to_string())?
        .fan
        .quotient_fan(0)
        .map_err(|e| e.to_string())?;
    let p =
        divisor_polytope(&q, &ToricDivisor::prime(q.rays().len(), 0)).map_err(|e| e.to_string())?;
    let counts: Vec<BigInt> = (0..=2).map(|t| count_lattice_points(&p, t)).collect();
    ensure(counts == [1, 3, 6].map(BigInt::from), || {
        format!("counts {counts:?}")
    })?;
    let again = polytope_degree(&p, 2).map_err(|e| e.to_string())?;
    ensure(again == ehrhart, || "interpolation not reproducible".into())?;
    Ok(format!(
        "degree 1, {}; {}",
        growth.statement, growth.lower_order
    ))
}

fn random_rows(rng: &mut ChaCha8Rng, rows: usize, cols: usize, r: i64) -> Vec<Vec<i64>> {
    (0..rows)
        .map(|_| (0..cols).map(|_| rng.gen_range(-r..=r)).collect())
        .collect()
}

fn rational_rows(rows: &[Vec<i64>]) -> Vec<RationalVector> {
    rows.iter().map(|r| RationalVector::from_i64(r)).collect()
}

fn criterion_8a() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xFEA5);
    let mut feasible = 0;
    for case in 0..200 {
        let n = rng.gen_range(1..=4);
        let e = rng.gen_range(0..=2usize.min(n));
        let s = rng.gen_range(1..=8 - e);
        let eq = random_rows(&mut rng, e, n, 3);
        let strict = random_rows(&mut rng, s, n, 3);
        let sys = StrictSystem::new(n, rational_rows(&eq), rational_rows(&strict))
            .map_err(|e| e.to_string())?;
        let got = strict_feasible(&sys).map_err(|e| e.to_string())?;
        let oracle = common::strict_feasible_by_vertices(&eq, &strict, n);
        ensure(got.is_feasible() == oracle, || {
            format!("case {case}: {got:?} vs oracle {oracle}")
        })?;
        if let Feasibility::Feasible(x) = got {
            ensure(sys.is_satisfied_by(&x), || {
                format!("case {case}: witness fails")
            })?;
            feasible += 1;
        }
    }
    Ok(format!("200 systems ({feasible} feasible)"))
}

fn criterion_8b() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x1B7E);
    let mut solvable = 0;
    for case in 0..200 {
        let rows = rng.gen_range(1..=3);
        let cols = 3;
        let a = random_rows(&mut rng, rows, cols, 3);
        let b: Vec<i64> = if case % 2 == 0 {
            let x0: Vec<i64> = (0..cols).map(|_| rng.gen_range(-10..=10)).collect();
            a.iter()
                .map(|row| row.iter().zip(&x0).map(|(p, q)| p * q).sum())
                .collect()
        } else {
            (0..rows).map(|_| rng.gen_range(-10..=10)).collect()
        };
        let m = IntegerMatrix::from_i64_rows(&a);
        let got = solve_integral(&m, &LatticeVector::from_i64(&b)).map_err(|e| e.to_string())?;
        let brute = common::box_solutions(&a, &b, cols, 10);
        match got {
            None => ensure(brute.is_empty(), || {
                format!("case {case}: library found none, box has {}", brute.len())
            })?,
            Some((p, kernel)) => {
                ensure(m.mul_vec(&p) == LatticeVector::from_i64(&b), || {
                    format!("case {case}: bad particular")
                })?;
                let zero = LatticeVector::zero(rows);
                ensure(kernel.iter().all(|k| m.mul_vec(k) == zero), || {
                    format!("case {case}: bad kernel")
                })?;
                // every coset point is a solution, so the sets agree on the box
                // iff every brute-force solution lies in the coset
                let basis: Vec<Vec<BigInt>> = kernel.iter().map(|k| k.coords().to_vec()).collect();
                for x in &brute {
                    ensure(common::in_coset(x, p.coords(), &basis), || {
                        format!("case {case}: {x:?} missed")
                    })?;
                }
                solvable += 1;
            }
        }
    }
    Ok(format!("200 systems ({solvable} with integer solutions)"))
}

fn criterion_8c() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5A1F);
    for case in 0..100 {
        let a = random_rows(&mut rng, 4, 4, 5);
        let m = IntegerMatrix::from_i64_rows(&a);
        let (s, u, v) = smith_normal_form(&m);
        ensure(u.is_unimodular() && v.is_unimodular(), || {
            format!("case {case}: not unimodular")
        })?;
        let usv = u
            .mul(&m)
            .and_then(|x| x.mul(&v))
            .map_err(|e| e.to_string())?;
        ensure(usv == s, || format!("case {case}: U·M·V ≠ S"))?;
        let mut product = BigInt::one();
        for k in 1..=4 {
            product *= s.get(k - 1, k - 1).abs();
            let oracle = common::gcd_of_minors(&a, k);
            ensure(product == oracle, || {
                format!("case {case}: d_1⋯d_{k} = {product}, minors gcd {oracle}")
            })?;
        }
        for k in 1..4 {
            let (d0, d1) = (s.get(k - 1, k - 1), s.get(k, k));
            ensure(
                (d0.is_zero() && d1.is_zero()) || (!d0.is_zero() && (d1 % d0).is_zero()),
                || format!("case {case}: divisibility chain broken"),
            )?;
        }
    }
    Ok("100 matrices".into())
}

fn round_trip(c: &Cone) -> bool {
    let back = Cone::from_inequalities(c.ambient_rank(), c.equations(), c.facet_normals());
    let again = if c.rays().is_empty() {
        Ok(Cone::zero(c.ambient_rank()))
    } else {
        Cone::from_rays(c.ambient_rank(), c.rays())
    };
    back.is_ok_and(|b| &b == c) && again.is_ok_and(|a| &a == c)
}

fn all_fixture_fans() -> Vec<Fan> {
    let mut fans = vec![
        fixtures::projective_space(1),
        fixtures::projective_space(2),
        fixtures::projective_space(3),
        fixtures::projective_space(4),
        fixtures::p1_times_p1(),
        fixtures::square_pyramid_fan(),
        fixtures::non_pyramidal_fan(),
    ];
    for c in standard_grid() {
        let y = yu_fan(c).expect("grid fan");
        fans.push(small_modification(&y.fan, 0).expect("modification").fan);
        fans.push(y.fan);
    }
    fans
}

fn criterion_8d() -> Outcome {
    let mut count = 0;
    for f in all_fixture_fans() {
        for c in f.cones() {
            ensure(round_trip(c), || format!("round trip fails for {c}"))?;
            for face in c.face_lattice() {
                ensure(round_trip(&c.face_cone(&face.ray_indices)), || {
                    format!("face of {c}")
                })?;
            }
            count += 1;
        }
    }
    for c in fixtures::random_three_cones(100, 8) {
        ensure(round_trip(&c), || format!("round trip fails for {c}"))?;
        count += 1;
    }
    Ok(format!("{count} cones and their faces"))
}

fn criterion_8() -> Outcome {
    let suites: [Criterion; 4] = [
        ("a", criterion_8a),
        ("b", criterion_8b),
        ("c", criterion_8c),
        ("d", criterion_8d),
    ];
    let mut parts = Vec::new();
    for (k, run) in suites {
        let start = Instant::now();
        let detail = run().map_err(|e| format!("({k}) {e}"))?;
        parts.push(format!("({k}) {detail} in {:.2?}", start.elapsed()));
    }
    Ok(parts.join("; "))
}

fn criterion_9() -> Outcome {
    let mut checks = 0;
    for c in standard_grid() {
        let y = yu_fan(c).map_err(|e| e.to_string())?;
        let r = verify_yu_combinatorics(&y);
        ensure(r.passed(), || format!("{c:?}: {:?}", r.failures))?;
        checks += r.checks;
    }
    Ok(format!("{checks} exact checks over the grid"))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("1 Picard group of Y_u trivial for u > 1", criterion_1),
        ("2 Y_1 projective, Y_u not for u > 1", criterion_2),
        ("3 e in Egyptian position, D_e fan is P^(n-1)", criterion_3),
        (
            "4 small modification and its exceptional curves",
            criterion_4,
        ),
        ("5 D_e Q-Cartier on the modified fan", criterion_5),
        (
            "6 every 3-dimensional cone is a pyramidal extension",
            criterion_6,
        ),
        ("7 leading term of the top Chern number", criterion_7),
        ("8 oracle equivalence suites", criterion_8),
        ("9 combinatorics of Delta_u", criterion_9),
    ];
    let filter: Vec<String> = std::env::args()
        .skip(1)
        .filter(|a| !a.starts_with('-'))
        .collect();
    let mut failed = 0;
    for (name, run) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let took = start.elapsed();
        match outcome {
            Ok(detail) => println!("PASS criterion {name}: {detail} [{took:.2?}]"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {name}: {why} [{took:.2?}]");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
