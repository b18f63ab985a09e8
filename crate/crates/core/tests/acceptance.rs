//! Acceptance suite. Each criterion prints one PASS/FAIL line; the process
//! exits nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use proddecomp::decomp::{
    canonicalize, detect_from_system, eq1_build, eq1_solve_exhaustive, generate, random_twisted_system, verify,
    DetectOptions, GenOptions, Instance,
};
use proddecomp::fieldeq::{expanded_field_equations, field_equations, gcd_fall_witness, lift_system};
use proddecomp::lastfall::{last_fall_degree, solve_rational, SolveMethod};
use proddecomp::mpoly::{same_span, LinearMap, Monomial, MultiPoly, PolySystem};
use proddecomp::points::{product_evaluation_full_rank, product_set, vanishing_ideal_basis, zero_set_exhaustive};
use proddecomp::{Field, FieldElement, Limits, UniPoly};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn random_sets(field: &Field, n: usize, sizes: &[usize], rng: &mut ChaCha8Rng) -> Vec<Vec<FieldElement>> {
    (0..n)
        .map(|i| {
            sample(rng, field.order() as usize, sizes[i])
                .into_iter()
                .map(|k| field.element(k as u32).unwrap())
                .collect()
        })
        .collect()
}

fn c1() -> Outcome {
    let limits = Limits::default();
    let fields: Vec<Field> = [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (5, 1)]
        .iter()
        .map(|&(p, m)| Field::new(p, m, 1).unwrap())
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for trial in 0..100 {
        let field = &fields[rng.gen_range(0..fields.len())];
        let n = rng.gen_range(1..=3);
        let top = 4.min(field.order() as usize);
        let sizes: Vec<usize> = (0..n).map(|_| rng.gen_range(1..=top)).collect();
        let sets = random_sets(field, n, &sizes, &mut rng);
        if !product_evaluation_full_rank(field, &sets, &limits).map_err(|e| e.to_string())? {
            return Err(format!("trial {trial}: singular evaluation matrix"));
        }
    }
    Ok("100 tuples".into())
}

fn c2() -> Outcome {
    let limits = Limits::default();
    let fields: Vec<Field> = [(3, 1), (2, 2), (5, 1), (7, 1), (2, 3)]
        .iter()
        .map(|&(p, m)| Field::new(p, m, 1).unwrap())
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for trial in 0..50 {
        let field = &fields[rng.gen_range(0..fields.len())];
        let n = rng.gen_range(1..=3);
        let d = rng.gen_range(1..=3.min(field.order() as usize));
        let sets = random_sets(field, n, &vec![d; n], &mut rng);
        let w = product_set(field, &sets, &limits).map_err(|e| e.to_string())?;
        let vb = vanishing_ideal_basis(&w, d as u32, &limits).map_err(|e| e.to_string())?;
        if vb.dim() != n {
            return Err(format!("trial {trial}: dim {} for n = {n}", vb.dim()));
        }
        let expected: Vec<MultiPoly> = sets
            .iter()
            .enumerate()
            .map(|(i, s)| MultiPoly::from_unipoly(n, &UniPoly::from_roots(field, i, s)))
            .collect();
        if !same_span(&vb.basis, &expected).map_err(|e| e.to_string())? {
            return Err(format!("trial {trial}: span differs from the component polynomials"));
        }
    }
    Ok("50 product sets".into())
}

/// The round-trip instances shared by criteria 3, 4, 5 and 10.
fn round_trip_instances() -> Vec<Instance> {
    let limits = Limits::default();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut out = Vec::new();
    while out.len() < 50 {
        let p = [3u64, 5, 7][rng.gen_range(0..3)];
        let d = rng.gen_range(2..=3usize);
        if (d as u64).is_multiple_of(p) {
            continue;
        }
        let n = rng.gen_range(1..=3);
        let field = Field::prime(p).unwrap();
        out.push(generate(n, d, &field, 1, rng.gen(), GenOptions::default(), &limits).unwrap());
    }
    out
}

fn c3_c4(instances: &[Instance]) -> (Outcome, Outcome) {
    let limits = Limits::default();
    let mut second = Ok(format!("{} instances", instances.len()));
    for (k, inst) in instances.iter().enumerate() {
        let truth = canonicalize(&inst.truth);
        let first = match detect_from_system(&inst.g, 1, DetectOptions { reverse: false, retry: true }, &limits) {
            Ok(Ok(dec)) => dec,
            Ok(Err(why)) => return (Err(format!("instance {k}: not decomposable: {why}")), second),
            Err(e) => return (Err(format!("instance {k}: {e}")), second),
        };
        if let Err(why) = verify(&inst.w, &first) {
            return (Err(format!("instance {k}: detected decomposition rejected: {why}")), second);
        }
        if canonicalize(&first) != truth {
            return (Err(format!("instance {k}: canonical form differs from truth")), second);
        }
        if first.presented_system().ok().as_ref() != Some(&inst.g) {
            return (Err(format!("instance {k}: recovered rho does not present G")), second);
        }
        if second.is_ok() {
            match detect_from_system(&inst.g, 1, DetectOptions { reverse: true, retry: true }, &limits) {
                Ok(Ok(dec)) if canonicalize(&dec) == truth => {}
                Ok(Ok(_)) => second = Err(format!("instance {k}: reverse order gave another canonical form")),
                Ok(Err(why)) => second = Err(format!("instance {k}: reverse order: {why}")),
                Err(e) => second = Err(format!("instance {k}: reverse order: {e}")),
            }
        }
    }
    (Ok(format!("{} instances", instances.len())), second)
}

fn c5(instances: &[Instance]) -> Outcome {
    let limits = Limits::default();
    let mut worst = 0;
    for (k, inst) in instances.iter().enumerate() {
        let d = inst.g.max_degree();
        let rec = last_fall_degree(&inst.g, 2 * d, &limits).map_err(|e| format!("instance {k}: {e}"))?;
        if rec.last_fall > d {
            return Err(format!("instance {k}: last fall {} above d = {d}", rec.last_fall));
        }
        worst = worst.max(rec.last_fall);
    }
    Ok(format!("{} systems, largest last fall {worst}", instances.len()))
}

fn c6() -> Outcome {
    let limits = Limits::default();
    let field = Field::prime(3).unwrap();
    let e = field_equations(2, &field, &limits).unwrap();
    let mut worst = 0;
    for k in 0..20u64 {
        let g = random_twisted_system(2, 2, &field, 600 + k).unwrap();
        let rec = last_fall_degree(&g.union(&e).unwrap(), 6, &limits).map_err(|e| e.to_string())?;
        if rec.last_fall > 5 {
            return Err(format!("instance {k}: last fall {} above 5", rec.last_fall));
        }
        worst = worst.max(rec.last_fall);
    }
    Ok(format!("20 instances, largest last fall {worst}"))
}

fn c7() -> Outcome {
    let limits = Limits::default();
    let field = Field::new(2, 2, 1).unwrap();
    let x = expanded_field_equations(2, &field);
    let mut worst = 0;
    for k in 0..10u64 {
        let g = random_twisted_system(2, 2, &field, 700 + k).unwrap();
        let sys = lift_system(&g, &x).unwrap().union(x.system()).unwrap();
        let rec = last_fall_degree(&sys, 6, &limits).map_err(|e| e.to_string())?;
        if rec.last_fall > 4 {
            return Err(format!("instance {k}: last fall {} above 4", rec.last_fall));
        }
        worst = worst.max(rec.last_fall);
    }
    Ok(format!("10 instances, largest last fall {worst}"))
}

fn random_poly(field: &Field, n: usize, d: u32, rng: &mut ChaCha8Rng) -> MultiPoly {
    let terms: Vec<_> = Monomial::all_up_to(n, d)
        .into_iter()
        .map(|m| (m, field.random_base(rng)))
        .collect();
    MultiPoly::from_terms(field, n, terms)
}

fn c8() -> Outcome {
    let limits = Limits::default();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut uncertified = 0;

    let f3 = Field::prime(3).unwrap();
    let e = field_equations(2, &f3, &limits).unwrap();
    for k in 0..10 {
        let f = PolySystem::new(&f3, 2, (0..2).map(|_| random_poly(&f3, 2, 2, &mut rng)).collect()).unwrap();
        let lambda = LinearMap::random_invertible(&f3, 2, true, &mut rng);
        let a = last_fall_degree(&f.union(&e).unwrap(), 7, &limits).map_err(|e| e.to_string())?;
        let b = last_fall_degree(&f.pullback(&lambda).unwrap().union(&e).unwrap(), 7, &limits)
            .map_err(|e| e.to_string())?;
        if a.falls_at != b.falls_at || a.capped != b.capped {
            return Err(format!("E instance {k}: falls {:?} against {:?}", a.falls_at, b.falls_at));
        }
        uncertified += a.capped as usize;
    }

    let f4 = Field::new(2, 2, 1).unwrap();
    let x = expanded_field_equations(2, &f4);
    for k in 0..10 {
        let f = PolySystem::new(&f4, 2, (0..2).map(|_| random_poly(&f4, 2, 2, &mut rng)).collect()).unwrap();
        let lambda = LinearMap::random_invertible(&f4, 2, true, &mut rng);
        let lifted = |s: &PolySystem| lift_system(s, &x).unwrap().union(x.system()).unwrap();
        let a = last_fall_degree(&lifted(&f), 7, &limits).map_err(|e| e.to_string())?;
        let b = last_fall_degree(&lifted(&f.pullback(&lambda).unwrap()), 7, &limits).map_err(|e| e.to_string())?;
        if a.last_fall != b.last_fall {
            return Err(format!("E' instance {k}: last fall {} against {}", a.last_fall, b.last_fall));
        }
        uncertified += a.capped as usize + b.capped as usize;
    }
    Ok(format!("10 + 10 twists, {uncertified} records left capped"))
}

fn c9() -> Outcome {
    let limits = Limits::default();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for (p, m) in [(2u64, 2usize), (2, 3), (3, 2)] {
        let field = Field::new(p, m, 1).unwrap();
        for k in 0..20 {
            let d = rng.gen_range(1..=4usize);
            let mut c: Vec<FieldElement> = (0..d).map(|_| field.random(&mut rng)).collect();
            c.push(field.random_nonzero(&mut rng));
            let f = UniPoly::new(&field, 0, c);
            let w = gcd_fall_witness(&f, &limits).map_err(|e| format!("F_{} instance {k}: {e}", field.q()))?;
            if w.degree > d as u32 * field.p() {
                return Err(format!("F_{} instance {k}: witness at {}", field.q(), w.degree));
            }
        }
    }
    Ok("60 polynomials over F_4, F_8, F_9".into())
}

fn c10(instances: &[Instance]) -> Outcome {
    let limits = Limits::default();
    let mut systems: Vec<PolySystem> = instances
        .iter()
        .filter(|i| (i.g.field().q() as u64).pow(i.g.n() as u32) <= 10_000)
        .map(|i| i.g.clone())
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for (p, m) in [(2u64, 1usize), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2)] {
        let field = Field::new(p, m, 1).unwrap();
        for n in 1..=2 {
            for d in 1..=2usize.min(field.q() as usize) {
                systems.push(generate(n, d, &field, 1, rng.gen(), GenOptions::default(), &limits).unwrap().g);
                systems.push(random_twisted_system(n, d, &field, rng.gen()).unwrap());
            }
        }
    }
    for (k, g) in systems.iter().enumerate() {
        let e = field_equations(g.n(), g.field(), &limits).unwrap();
        let oracle = zero_set_exhaustive(&g.union(&e).unwrap(), 1, false, &limits).unwrap().sorted();
        for method in [SolveMethod::E, SolveMethod::EPrime] {
            let got = solve_rational(g, method, &limits)
                .map_err(|e| format!("system {k} over F_{} ({method:?}): {e}", g.field().q()))?;
            if got != oracle {
                return Err(format!("system {k} over F_{} ({method:?}): {} points against {}", g.field().q(), got.len(), oracle.len()));
            }
        }
    }
    Ok(format!("{} systems, both methods", systems.len()))
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn c11() -> Outcome {
    let limits = Limits::default();
    let f5 = Field::prime(5).unwrap();
    for n in 1..=3 {
        for d in 1..=3 {
            let inst = generate(n, d, &f5, 1, (n * 10 + d) as u64, GenOptions::default(), &limits).unwrap();
            let s = eq1_build(&inst.g, d, &limits).map_err(|e| e.to_string())?;
            if s.num_unknowns() != 2 * n * n + n * d || s.num_equations() != n * binomial(n + d, d) {
                return Err(format!("n = {n}, d = {d}: {} unknowns, {} equations", s.num_unknowns(), s.num_equations()));
            }
            let planted = s.assignment(&inst.truth.lambda, inst.truth.rho.as_ref().unwrap(), &inst.truth.polys);
            if !s.is_satisfied(&planted).map_err(|e| e.to_string())? {
                return Err(format!("n = {n}, d = {d}: planted assignment is not a solution"));
            }
        }
    }
    let f2 = Field::prime(2).unwrap();
    for seed in 0..3u64 {
        let inst = generate(2, 2, &f2, 1, seed, GenOptions::default(), &limits).unwrap();
        let s = eq1_build(&inst.g, 2, &limits).map_err(|e| e.to_string())?;
        let sols = eq1_solve_exhaustive(&s, &limits).map_err(|e| e.to_string())?;
        let truth = canonicalize(&inst.truth);
        let mut found = false;
        for sol in &sols {
            found |= canonicalize(&sol.decomposition().map_err(|e| e.to_string())?) == truth;
        }
        if !found {
            return Err(format!("seed {seed}: planted form not among {} solutions", sols.len()));
        }
    }
    Ok("9 count checks, 3 planted F_2 instances recovered".into())
}

fn report(id: &str, budget: Option<Duration>, run: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let outcome = run();
    let elapsed = start.elapsed();
    let over = budget.is_some_and(|b| elapsed > b);
    let pass = outcome.is_ok() && !over;
    let detail = match outcome {
        Ok(s) => s,
        Err(s) => s,
    };
    let budget_note = match budget {
        Some(b) if over => format!(", over the {}s budget", b.as_secs()),
        _ => String::new(),
    };
    println!(
        "criterion {id}: {} ({detail}; {:.2}s{budget_note})",
        if pass { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64()
    );
    pass
}

fn main() -> ExitCode {
    let secs = |s| Some(Duration::from_secs(s));
    let mut ok = true;
    ok &= report("1", secs(5), c1);
    ok &= report("2", secs(10), c2);

    let instances = round_trip_instances();
    let mut r4 = Err("not run".to_string());
    ok &= report("3", secs(60), || {
        let (r3, second) = c3_c4(&instances);
        r4 = second;
        r3
    });
    ok &= report("4", None, || r4.map(|s| s + ", timed with criterion 3"));
    ok &= report("5", None, || c5(&instances));
    ok &= report("6", secs(120), c6);
    ok &= report("7", secs(120), c7);
    ok &= report("8", None, c8);
    ok &= report("9", secs(60), c9);
    ok &= report("10", None, || c10(&instances));
    ok &= report("11", secs(300), c11);

    if ok {
        println!("acceptance: all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: some criteria failed");
        ExitCode::FAILURE
    }
}
