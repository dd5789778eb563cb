//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit status
//! if any criterion fails.

mod common;

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_integer::Integer;
use rand::Rng;
use wciq::complex::{base_complex, degree_complex, singular_complex};
use wciq::maps::{self, FamilySearch, Limits};
use wciq::nef::{self, NefMode, NefPartition};
use wciq::realize;
use wciq::regularity;
use wciq::{arith, oracle, Complex, DegreeTuple, Face, WeightTuple};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lift<T>(r: wciq::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn fig_rho(t: usize) -> WeightTuple {
    WeightTuple::with_ones(t, &[6, 10, 15]).unwrap()
}

fn fig_mu() -> DegreeTuple {
    DegreeTuple::from_u64s(&[16, 21, 25, 30]).unwrap()
}

fn no_strong_partition() -> Outcome {
    let lim = Limits::default();
    let mut notes = Vec::new();
    for t in 1..=3usize {
        let start = Instant::now();
        let rho = WeightTuple::with_ones(61 + t, &[6, 10, 15]).unwrap();
        let mu = fig_mu();
        let found = lift(nef::find_nef_partition(&rho, &mu, NefMode::Strong, lim.node_budget))?;
        ensure(found.is_none(), || format!("t={t}: strong partition found: {found:?}"))?;
        let fano = nef::fano_index(&rho, &mu);
        ensure(fano == t.into(), || format!("t={t}: fano index {fano}"))?;
        let sr = lift(regularity::is_strictly_regular(&rho, &mu, lim.dp_cap))?;
        ensure(sr.regular, || format!("t={t}: not strictly regular, witness {:?}", sr.witness))?;
        let pair = regularity::pair_is_trivial(&rho);
        let expected: Face = vec![61 + t, 62 + t, 63 + t];
        ensure(!pair.trivial && pair.witness.as_ref() == Some(&expected), || {
            format!("t={t}: pair witness {:?}, expected {expected:?}", pair.witness)
        })?;
        let elapsed = start.elapsed();
        ensure(elapsed < Duration::from_secs(1), || format!("t={t}: took {elapsed:?}"))?;
        notes.push(format!("t={t} {:.1}ms", elapsed.as_secs_f64() * 1e3));
    }
    Ok(notes.join(", "))
}

fn figure_two() -> Outcome {
    let lim = Limits::default();
    for t in 0..=1usize {
        let rho = fig_rho(t + 1);
        let (x, y, z) = (t + 1, t + 2, t + 3);
        let s = singular_complex(&rho);
        let want = vec![vec![x, y], vec![x, z], vec![y, z]];
        ensure(s.complex().facets() == want.as_slice(), || {
            format!("t={t}: S facets {:?}", s.complex().facets())
        })?;
        for (d, want) in [
            (16u64, vec![vec![x, z], vec![y, z]]),
            (21, vec![vec![x, y], vec![y, z]]),
            (25, vec![vec![x, y], vec![x, z]]),
        ] {
            let b = lift(base_complex(&rho, &BigUint::from(d), lim.dp_cap))?;
            ensure(b.complex().facets() == want.as_slice(), || {
                format!("t={t}: B({d}) facets {:?}", b.complex().facets())
            })?;
        }
    }
    Ok("t in {0,1}: S, B(16), B(21), B(25) exact".into())
}

fn figure_three() -> Outcome {
    let lim = Limits::default();
    let mut table = Vec::new();
    for t in 0..=1usize {
        let rho = fig_rho(t + 1);
        let mu = fig_mu();
        let fam = match lift(maps::build_admissible_family(&rho, &mu, &lim))? {
            FamilySearch::Found(f) => f,
            FamilySearch::Infeasible(core) => return Err(format!("t={t}: infeasible {core:?}")),
        };
        let (x, y, z) = (t + 1, t + 2, t + 3);
        let expected: [(Face, Face); 6] = [
            (vec![x], vec![4]),
            (vec![y], vec![4]),
            (vec![z], vec![4]),
            (vec![x, y], vec![1, 4]),
            (vec![x, z], vec![2, 4]),
            (vec![y, z], vec![3, 4]),
        ];
        for (face, want) in &expected {
            let got = lift(fam.face_image(&rho, face))?;
            ensure(&got == want, || format!("t={t}: chi({face:?}) = {got:?}, expected {want:?}"))?;
        }
        let rep = lift(maps::verify_poset_map(&rho, &mu, &fam, lim.dp_cap))?;
        ensure(rep.property1 && rep.property3 && rep.order_preserving, || {
            format!("t={t}: report {rep:?}")
        })?;
        ensure(rep.invariant_violations.is_empty(), || {
            format!("t={t}: {:?}", rep.invariant_violations)
        })?;
        ensure(rep.property2_records.len() == 9, || {
            format!("t={t}: {} property-2 records", rep.property2_records.len())
        })?;
        for r in &rep.property2_records {
            table.push(format!(
                "    t={t} face {:?} -> degree {} (d={}): {}",
                r.face,
                r.degree,
                mu.degree(r.degree),
                if r.representable { "representable" } else { "not representable" }
            ));
        }
    }
    for line in &table {
        println!("{line}");
    }
    Ok(format!("six face images exact for t in {{0,1}}; {} property-2 records", table.len()))
}

fn theorem_main() -> Outcome {
    let lim = Limits::default();
    let rho = WeightTuple::from_u64s(&[1, 1, 1, 1, 1, 2]).unwrap();
    let mu = DegreeTuple::from_u64s(&[4]).unwrap();
    let s = lift(nef::construct_strong_nef_partition(&rho, &mu, &lim))?;
    let want = NefPartition {
        parts: vec![vec![0, 1, 2], vec![3, 4, 5]],
    };
    ensure(s.partition == want, || format!("codim 1 output {:?}", s.partition))?;

    let mut instances = vec![(
        WeightTuple::with_ones(36 - 15 + 1, &[2, 2, 3, 3, 5]).unwrap(),
        DegreeTuple::from_u64s(&[4, 4, 9, 9, 10]).unwrap(),
    )];
    let mut rng = common::rng(4);
    instances.extend((0..30).map(|_| common::coprime_instance(&mut rng)));
    for (rho, mu) in &instances {
        let s = lift(nef::construct_strong_nef_partition(rho, mu, &lim))
            .map_err(|e| format!("{rho}; {mu}: {e}"))?;
        let cls = lift(nef::classify_partition(rho, mu, &s.partition))?;
        ensure(cls.strong, || format!("{rho}; {mu}: not strong"))?;
    }
    Ok(format!("codim-1 output exact; {} coprime instances strong", instances.len()))
}

fn random_degrees(rng: &mut impl Rng, values: &[u64]) -> Vec<u64> {
    let c = rng.gen_range(1..=5);
    (0..c)
        .map(|_| {
            if rng.gen_bool(0.6) {
                let a = values[rng.gen_range(0..values.len())];
                let b = values[rng.gen_range(0..values.len())];
                let base = if a * b <= 200 && rng.gen_bool(0.3) { a * b } else { a };
                base * rng.gen_range(1..=200 / base)
            } else {
                rng.gen_range(2..=200)
            }
        })
        .collect()
}

fn value_sets(lo: u64, hi: u64, max_len: usize) -> Vec<Vec<u64>> {
    fn rec(lo: u64, hi: u64, max_len: usize, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        for v in lo..=hi {
            cur.push(v);
            out.push(cur.clone());
            if cur.len() < max_len {
                rec(v + 1, hi, max_len, cur, out);
            }
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(lo, hi, max_len, &mut Vec::new(), &mut out);
    out
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let cap = arith::DEFAULT_DP_CAP;
    let all_degrees = DegreeTuple::from_u64s(&(1..=200).collect::<Vec<_>>()).unwrap();

    // Representability: every value set of at most 5 values in 1..=30 against
    // every degree 0..=200.
    let sets = value_sets(1, 30, 5);
    let mut checked = 0u64;
    for vs in &sets {
        let big: Vec<BigUint> = vs.iter().map(|&v| v.into()).collect();
        let table = lift(arith::representable_degrees(&big, &all_degrees, cap))?;
        for d in 0..=200u64 {
            let brute = oracle::representable(d, vs);
            let single = arith::is_representable(&d.into(), &big, cap).is_yes();
            let tabled = d == 0 || table.contains(&(d as usize));
            ensure(brute == single && brute == tabled, || {
                format!("representability of {d} over {vs:?}: oracle {brute}, single {single}, table {tabled}")
            })?;
            checked += 1;
        }
    }

    // Strict regularity: every value set of at most 3 values in 2..=30 with
    // every multiplicity pattern up to 3, plus seeded 4- and 5-value tuples.
    let mut rng = common::rng(5);
    let mut pairs = 0u64;
    let mut regular = 0u64;
    let mut check = |weights: Vec<u64>, degrees: Vec<u64>| -> Result<(), String> {
        let rho = WeightTuple::from_u64s(&weights).unwrap();
        let mu = DegreeTuple::from_u64s(&degrees).unwrap();
        let fast = lift(regularity::is_strictly_regular(&rho, &mu, cap))?;
        let (ok, witness) = oracle::strictly_regular(&weights, &degrees);
        ensure(fast.regular == ok && fast.witness == witness, || {
            format!("{weights:?}; {degrees:?}: fast {fast:?}, oracle ({ok}, {witness:?})")
        })?;
        pairs += 1;
        regular += u64::from(ok);
        Ok(())
    };
    for vs in value_sets(2, 30, 3) {
        let patterns = 3usize.pow(vs.len() as u32);
        for code in 0..patterns {
            let mut weights = Vec::new();
            let mut x = code;
            for &v in &vs {
                weights.extend(std::iter::repeat_n(v, x % 3 + 1));
                x /= 3;
            }
            let degrees = random_degrees(&mut rng, &vs);
            check(weights, degrees)?;
        }
    }
    for _ in 0..20_000 {
        let k = rng.gen_range(4..=5);
        let mut vs: BTreeSet<u64> = BTreeSet::new();
        while vs.len() < k {
            vs.insert(rng.gen_range(2..=30));
        }
        let vs: Vec<u64> = vs.into_iter().collect();
        let mut weights = Vec::new();
        for &v in &vs {
            weights.extend(std::iter::repeat_n(v, rng.gen_range(1..=3)));
        }
        let degrees = random_degrees(&mut rng, &vs);
        check(weights, degrees)?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(30), || format!("took {elapsed:?}"))?;
    Ok(format!(
        "{checked} representability checks over {} value sets, {pairs} regularity pairs ({regular} regular), 0 divergences, {:.1}s",
        sets.len(),
        elapsed.as_secs_f64()
    ))
}

fn realization_round_trip() -> Outcome {
    let mut rng = common::rng(6);
    for k in 0..200 {
        let c = common::random_complex(&mut rng, 8, 20);
        let r = lift(realize::realize_weights(&c))?;
        let ok = lift(realize::verify_realization(&c, &r.weight_tuple()))?;
        ensure(ok, || format!("case {k}: {c:?} realized as {:?}", r.weights))?;
    }
    let tetra = Complex::skeleton(4, 1);
    let r = lift(realize::realize_weights(&tetra))?;
    ensure(lift(realize::verify_realization(&tetra, &r.weight_tuple()))?, || {
        "tetrahedron skeleton round trip".into()
    })?;
    for v in 0..4 {
        let incident: Vec<&BigUint> = r
            .prime_assignment
            .iter()
            .filter(|(f, _)| f.contains(&v))
            .map(|(_, p)| p)
            .collect();
        let product: BigUint = incident.iter().copied().product();
        ensure(incident.len() == 3 && r.weights[v] == product, || {
            format!("vertex {v}: weight {} vs incident primes {incident:?}", r.weights[v])
        })?;
    }
    Ok(format!("200 random complexes and the tetrahedron 1-skeleton; weights {:?}", common::to_u64s(&r.weights)))
}

fn inverse_pipeline() -> Outcome {
    let lim = Limits::default();
    let mut rng = common::rng(7);
    for k in 0..20 {
        let (c, d, f) = common::random_map_case(&mut rng);
        let s = rng.gen_range(0..=2);
        let t = d.vertices().len() + s + 1 + rng.gen_range(0..=2);
        let inst = lift(realize::realize_map_instance(&c, &d, &f, s, t))?;
        let v = lift(maps::validate_weighted_map(&inst.map))?;
        ensure(v.is_noncontracting_weighted_map(), || format!("case {k}: planted map {v:?}"))?;
        let found = lift(maps::find_noncontracting_map(&inst.weights, &inst.degrees, lim.node_budget))?;
        let found = found.ok_or_else(|| format!("case {k}: no non-contracting map found"))?;
        let v = lift(maps::validate_weighted_map(&found))?;
        ensure(v.is_noncontracting_weighted_map(), || format!("case {k}: found map {v:?}"))?;
    }

    let mut notes = Vec::new();
    for (l, n) in [(1usize, 2usize), (1, 3)] {
        let inst = lift(realize::contraction_instance(l, n, 0, realize::contraction_min_ones(l, n, 0)))?;
        let all = oracle::weighted_maps(&singular_complex(&inst.weights), &degree_complex(&inst.degrees));
        ensure(!all.is_empty(), || format!("l={l}, N={n}: no weighted map at all"))?;
        let designated: BTreeSet<usize> = inst.designated.iter().copied().collect();
        for m in &all {
            ensure(m.values().all(|j| designated.contains(j)), || {
                format!("l={l}, N={n}: map {m:?} leaves {designated:?}")
            })?;
        }
        notes.push(format!("l={l},N={n}: {} maps", all.len()));
    }
    Ok(format!("20 planted maps valid and rediscovered; contraction {}", notes.join(", ")))
}

fn heavy_subsets(rho: &WeightTuple) -> Vec<Face> {
    let heavy = rho.heavy_indices();
    (1u32..(1 << heavy.len()))
        .map(|mask| {
            (0..heavy.len())
                .filter(|k| mask >> k & 1 == 1)
                .map(|k| heavy[k])
                .collect()
        })
        .collect()
}

fn downward_closed(faces: &BTreeSet<Face>) -> bool {
    faces.iter().all(|f| {
        (0..f.len()).all(|k| {
            let mut sub = f.clone();
            sub.remove(k);
            sub.is_empty() || faces.contains(&sub)
        })
    })
}

fn complex_faces(c: &Complex) -> BTreeSet<Face> {
    c.faces().collect()
}

fn invariant_suites() -> Outcome {
    let lim = Limits::default();
    let mut rng = common::rng(8);
    let (mut families, mut constructions) = (0, 0);
    for case in 0..1000 {
        let (rho, mu) = if case % 2 == 0 {
            common::random_pair(&mut rng)
        } else {
            common::coprime_instance(&mut rng)
        };
        let ctx = || format!("case {case}: {rho}; {mu}");

        let s = singular_complex(&rho);
        ensure(downward_closed(&oracle::faces_of(&s)), || format!("{}: S not closed", ctx()))?;
        for (_, d) in mu.indexed() {
            let b = lift(base_complex(&rho, d, lim.dp_cap))?;
            ensure(downward_closed(&oracle::faces_of(&b)), || format!("{}: B({d}) not closed", ctx()))?;
        }

        let pair = regularity::pair_is_trivial(&rho);
        let a = complex_faces(&pair.nondivisible);
        let b = complex_faces(&pair.strongly_nondivisible);
        ensure(downward_closed(&a) && downward_closed(&b), || format!("{}: A or B not closed", ctx()))?;
        for face in heavy_subsets(&rho) {
            let nd = lift(regularity::is_non_divisible(&rho, &face))?;
            let snd = lift(regularity::is_strongly_non_divisible(&rho, &face))?;
            ensure(!snd || nd, || format!("{}: {face:?} strongly but not non-divisible", ctx()))?;
            ensure(a.contains(&face) == nd && b.contains(&face) == snd, || {
                format!("{}: membership of {face:?} in A/B disagrees", ctx())
            })?;
        }

        if !lift(regularity::is_strictly_regular(&rho, &mu, lim.dp_cap))?.regular {
            continue;
        }
        let fam = match lift(maps::build_admissible_family(&rho, &mu, &lim))? {
            FamilySearch::Found(f) => f,
            FamilySearch::Infeasible(core) => return Err(format!("{}: no family {core:?}", ctx())),
        };
        families += 1;
        let violations = lift(maps::check_family(&rho, &mu, &fam, lim.dp_cap))?;
        ensure(violations.is_empty(), || format!("{}: {violations:?}", ctx()))?;
        let fibers = lift(maps::vertex_fibers(&rho, mu.len(), &fam))?;
        for (j, fiber) in &fibers {
            for &i in fiber {
                ensure(mu.degree(*j).is_multiple_of(rho.get(i)), || {
                    format!("{}: a_{i} does not divide d_{j}", ctx())
                })?;
            }
            ensure(lift(regularity::is_non_divisible(&rho, fiber))?, || {
                format!("{}: fiber {j} = {fiber:?} is divisible", ctx())
            })?;
        }

        if lift(nef::check_hypotheses(&rho, &mu, lim.dp_cap))?.is_none() {
            let s = lift(nef::construct_strong_nef_partition(&rho, &mu, &lim))
                .map_err(|e| format!("{}: {e}", ctx()))?;
            let units = rho.unit_indices().len();
            let sum: usize = s.deltas.iter().sum();
            ensure(units == s.fano_index + sum, || {
                format!("{}: |U| = {units}, i_X + sum Delta = {} + {sum}", ctx(), s.fano_index)
            })?;
            let heavy_sum: BigUint = rho.heavy_indices().iter().map(|&i| rho.get(i)).sum();
            ensure(BigUint::from(sum) + heavy_sum == mu.sum(), || format!("{}: delta sum", ctx()))?;
            constructions += 1;
        }
    }
    ensure(constructions >= 400, || format!("only {constructions} constructions exercised"))?;
    Ok(format!(
        "1000 cases, {families} admissible families, {constructions} constructions, 0 violations"
    ))
}

type Criterion = fn() -> Outcome;

fn main() -> ExitCode {
    let criteria: [(&str, Criterion); 8] = [
        ("1 no strong nef-partition for (1^(61+t),6,10,15; 16,21,25,30)", no_strong_partition),
        ("2 singular and base complexes of (1^(t+1),6,10,15)", figure_two),
        ("3 face-poset map of (1^(t+1),6,10,15; 16,21,25,30)", figure_three),
        ("4 strong nef-partition construction", theorem_main),
        ("5 oracle equivalence for regularity and representability", oracle_equivalence),
        ("6 realization round trip", realization_round_trip),
        ("7 planted weighted maps and contraction instances", inverse_pipeline),
        ("8 invariant suites", invariant_suites),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {name}: {detail} [{secs:.2}s]"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {name}: {detail} [{secs:.2}s]");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
