use std::collections::BTreeMap;
use std::io::Read;
use std::path::Path;
use std::time::Instant;

use num_bigint::{BigInt, BigUint};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::{json, Value};
use wciq::complex::{base_complex, singular_complex};
use wciq::maps::{self, Compatibility, FamilySearch};
use wciq::nef::{self, NefMode, NefPartition};
use wciq::{oracle, realize, regularity, Complex, DegreeTuple, Error, WeightTuple};

use crate::{Compat, ComplexKind, Global, Mode, NefAction, OracleArgs, PairInput, PosetAction, RealizeArgs};

pub struct Outcome {
    pub code: u8,
    pub body: Value,
}

impl Outcome {
    fn ok(body: Value) -> Self {
        Outcome { code: 0, body }
    }

    fn negative(body: Value) -> Self {
        Outcome { code: 1, body }
    }

    fn verdict(ok: bool, body: Value) -> Self {
        Outcome { code: if ok { 0 } else { 1 }, body }
    }
}

pub struct Failure {
    pub code: u8,
    pub message: String,
    pub body: Value,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        let message = message.into();
        Failure {
            code: 2,
            body: json!({"error": {"kind": "input", "message": message}}),
            message,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let (code, kind) = match &e {
            Error::Input(_) => (2, "input"),
            Error::DpCapExceeded { .. } => (3, "dp_cap"),
            Error::BudgetExceeded { .. } => (3, "budget"),
            Error::TooLarge(_) => (3, "too_large"),
            Error::Hypothesis { .. } => (1, "hypothesis"),
            Error::Consistency { .. } => (1, "consistency"),
        };
        let message = e.to_string();
        let mut err = json!({"kind": kind, "message": message});
        if let Error::Hypothesis { hypothesis, witness } = &e {
            err["hypothesis"] = json!(hypothesis);
            err["witness"] = json!(witness);
        }
        Failure {
            code,
            message,
            body: json!({ "error": err }),
        }
    }
}

type CmdResult = Result<Outcome, Failure>;

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let mut text = String::new();
    let read = if path.as_os_str() == "-" {
        std::io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        std::fs::read_to_string(path).map(|t| text = t)
    };
    read.map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

#[derive(Deserialize)]
struct PairFile {
    weights: WeightTuple,
    #[serde(default)]
    degrees: Option<DegreeTuple>,
}

struct Pair {
    weights: WeightTuple,
    degrees: DegreeTuple,
}

fn read_weights(input: &PairInput) -> Result<(WeightTuple, Option<DegreeTuple>), Failure> {
    let p: PairFile = read_json(&input.input)?;
    Ok((p.weights, p.degrees))
}

fn read_pair(input: &PairInput) -> Result<Pair, Failure> {
    match read_weights(input)? {
        (weights, Some(degrees)) if !degrees.is_empty() => Ok(Pair { weights, degrees }),
        _ => Err(Failure::input(format!("{}: missing degrees", input.input.display()))),
    }
}

fn echo(p: &Pair) -> Value {
    json!({"weights": p.weights, "degrees": p.degrees})
}

fn int_json(x: &BigInt) -> Value {
    match i64::try_from(x) {
        Ok(v) => json!(v),
        Err(_) => json!(x.to_string()),
    }
}

fn big_json(x: &BigUint) -> Value {
    json!(wciq::json::BigNum(x.clone()))
}

fn elapsed_ms(t: Instant) -> Value {
    json!((t.elapsed().as_secs_f64() * 1e6).round() / 1e3)
}

fn mode_satisfied(c: &nef::NefClassification, mode: NefMode) -> bool {
    match mode {
        NefMode::Any => c.valid,
        NefMode::Nice => c.nice,
        NefMode::Strong => c.strong,
    }
}

pub fn analyze(input: &PairInput, mode: Mode, g: &Global) -> CmdResult {
    let p = read_pair(input)?;
    let (w, d) = (&p.weights, &p.degrees);
    let limits = g.limits();
    let mode = NefMode::from(mode);
    let mut timings = serde_json::Map::new();

    let t = Instant::now();
    let reg = regularity::regularity_report(w, d, g.dp_cap)?;
    let literal = regularity::pair_is_trivial(w).trivial_literal;
    timings.insert("regularity".into(), elapsed_ms(t));

    let t = Instant::now();
    let singular = singular_complex(w);
    let mut base = serde_json::Map::new();
    for (j, dj) in d.indexed() {
        let b = base_complex(w, dj, g.dp_cap)?;
        base.insert(j.to_string(), json!({"degree": big_json(dj), "complex": b}));
    }
    timings.insert("complexes".into(), elapsed_ms(t));

    let t = Instant::now();
    let poset_map = if reg.strictly_regular {
        match maps::build_admissible_family(w, d, &limits)? {
            FamilySearch::Found(fam) => {
                let report = maps::verify_poset_map(w, d, &fam, g.dp_cap)?;
                json!({"family": fam, "report": report})
            }
            FamilySearch::Infeasible(conflict) => json!({"conflict": conflict}),
        }
    } else {
        Value::Null
    };
    timings.insert("family".into(), elapsed_ms(t));

    let t = Instant::now();
    let (construction, constructed) = match nef::check_hypotheses(w, d, g.dp_cap)? {
        Some((h, witness)) => (
            json!({"status": "refused", "failed_hypothesis": h, "witness": witness}),
            false,
        ),
        None => match nef::construct_strong_nef_partition(w, d, &limits) {
            Ok(s) => {
                let mut v = json!(s);
                v["status"] = json!("constructed");
                (v, true)
            }
            Err(e @ Error::Consistency { .. }) => {
                (json!({"status": "inconsistent", "detail": e.to_string()}), false)
            }
            Err(e) => return Err(e.into()),
        },
    };
    timings.insert("construction".into(), elapsed_ms(t));

    let t = Instant::now();
    let found = nef::find_nef_partition(w, d, mode, g.node_budget)?;
    let classification = match &found {
        Some(part) => Some(nef::classify_partition(w, d, part)?),
        None => None,
    };
    timings.insert("search".into(), elapsed_ms(t));

    let mut body = json!({
        "input": echo(&p),
        "regularity": reg,
        "fano_index": int_json(&nef::fano_index(w, d)),
        "singular_complex": singular,
        "base_complexes": base,
        "poset_map": poset_map,
        "nef": {
            "mode": mode,
            "construction": construction,
            "search": {"partition": found, "classification": classification},
        },
        "timings": timings,
    });
    if literal != reg.pair_trivial {
        body["pair_trivial_literal"] = json!(literal);
    }
    Ok(Outcome::verdict(constructed || found.is_some(), body))
}

pub fn complex(input: &PairInput, kind: ComplexKind, degrees: &[BigUint], g: &Global) -> CmdResult {
    let (w, pair_degrees) = read_weights(input)?;
    let s = singular_complex(&w);
    let mut body = serde_json::Map::new();
    if matches!(kind, ComplexKind::All | ComplexKind::Singular) {
        body.insert("singular".into(), json!(s));
    }
    if matches!(kind, ComplexKind::All | ComplexKind::Sr) {
        body.insert("sr".into(), json!(s.sr_presentation()));
    }
    if matches!(kind, ComplexKind::All | ComplexKind::Base) {
        let ds: Vec<BigUint> = if degrees.is_empty() {
            pair_degrees.map(|d| d.into_inner()).unwrap_or_default()
        } else {
            degrees.to_vec()
        };
        if ds.is_empty() && kind == ComplexKind::Base {
            return Err(Failure::input("no degrees given for base-locus complexes"));
        }
        let mut base = Vec::new();
        for d in &ds {
            base.push(json!({"degree": big_json(d), "complex": base_complex(&w, d, g.dp_cap)?}));
        }
        body.insert("base".into(), json!(base));
    }
    Ok(Outcome::ok(Value::Object(body)))
}

pub fn nef(action: NefAction, g: &Global) -> CmdResult {
    match action {
        NefAction::Find { input, mode } => {
            let p = read_pair(&input)?;
            let mode = NefMode::from(mode);
            let found = nef::find_nef_partition(&p.weights, &p.degrees, mode, g.node_budget)?;
            let classification = match &found {
                Some(part) => Some(nef::classify_partition(&p.weights, &p.degrees, part)?),
                None => None,
            };
            Ok(Outcome::verdict(
                found.is_some(),
                json!({"mode": mode, "partition": found, "classification": classification}),
            ))
        }
        NefAction::Construct { input, mode } => {
            if mode != Mode::Strong {
                return Err(Failure::input("construct only builds strong nef-partitions"));
            }
            let p = read_pair(&input)?;
            let s = nef::construct_strong_nef_partition(&p.weights, &p.degrees, &g.limits())?;
            Ok(Outcome::ok(json!(s)))
        }
        NefAction::Classify { input, mode, partition } => {
            let p = read_pair(&input)?;
            let part: NefPartition = read_json(&partition)?;
            let c = nef::classify_partition(&p.weights, &p.degrees, &part)?;
            let mode = NefMode::from(mode);
            Ok(Outcome::verdict(
                mode_satisfied(&c, mode),
                json!({"mode": mode, "classification": c}),
            ))
        }
    }
}

pub fn posetmap(action: PosetAction, g: &Global) -> CmdResult {
    let limits = g.limits();
    match action {
        PosetAction::Build { input, compat } => {
            let p = read_pair(&input)?;
            let mode = match compat {
                Compat::Image => Compatibility::ImageContainment,
                Compat::Restriction => Compatibility::Restriction,
            };
            match maps::build_family_with(&p.weights, &p.degrees, mode, &limits)? {
                FamilySearch::Found(fam) => {
                    let fibers = maps::vertex_fibers(&p.weights, p.degrees.len(), &fam)?;
                    Ok(Outcome::ok(json!({"family": fam, "fibers": fibers})))
                }
                FamilySearch::Infeasible(conflict) => Ok(Outcome::negative(json!({"conflict": conflict}))),
            }
        }
        PosetAction::Verify { input, family } => {
            let p = read_pair(&input)?;
            let fam: maps::AdmissibleFamily = read_json(&family)?;
            let r = maps::verify_poset_map(&p.weights, &p.degrees, &fam, limits.dp_cap)?;
            let ok = r.invariant_violations.is_empty()
                && r.property1
                && r.property2
                && r.property3
                && r.order_preserving;
            Ok(Outcome::verdict(ok, json!(r)))
        }
    }
}

#[derive(Deserialize)]
struct MapFile {
    target: Complex,
    assignment: BTreeMap<usize, usize>,
}

pub fn realize(args: &RealizeArgs, _g: &Global) -> CmdResult {
    if let Some(sk) = &args.skeleton {
        let [l, n] = sk.as_slice() else {
            return Err(Failure::input("--skeleton takes l,N"));
        };
        let t = args
            .ones
            .unwrap_or_else(|| realize::contraction_min_ones(*l, *n, args.twos));
        let inst = realize::contraction_instance(*l, *n, args.twos, t)?;
        return Ok(Outcome::ok(json!(inst)));
    }
    let path = args.complex.as_ref().expect("clap requires --complex");
    let c: Complex = read_json(path)?;
    match &args.map {
        None => {
            let r = realize::realize_weights(&c)?;
            let verified = realize::verify_realization(&c, &r.weight_tuple())?;
            let mut body = json!(r);
            body["verified"] = json!(verified);
            Ok(Outcome::verdict(verified, body))
        }
        Some(map_path) => {
            let m: MapFile = read_json(map_path)?;
            let t = args
                .ones
                .unwrap_or(m.target.vertices().len() + args.pad + 1);
            let inst = realize::realize_map_instance(&c, &m.target, &m.assignment, args.pad, t)?;
            let validation = maps::validate_weighted_map(&inst.map)?;
            let ok = validation.is_noncontracting_weighted_map();
            let mut body = json!(inst);
            body["validation"] = json!(validation);
            Ok(Outcome::verdict(ok, body))
        }
    }
}

fn random_pair(rng: &mut ChaCha8Rng) -> (WeightTuple, DegreeTuple) {
    let n = rng.gen_range(1..=7);
    let c = rng.gen_range(1..=3);
    let w: Vec<u64> = (0..n).map(|_| rng.gen_range(1..=24)).collect();
    let d: Vec<u64> = (0..c).map(|_| rng.gen_range(2..=60)).collect();
    (
        WeightTuple::from_u64s(&w).expect("positive weights"),
        DegreeTuple::from_u64s(&d).expect("positive degrees"),
    )
}

pub fn oracle(args: &OracleArgs, g: &Global) -> CmdResult {
    let limits = g.limits();
    if let Some(input) = &args.input {
        let p = read_pair(&PairInput { input: input.clone() })?;
        let r = oracle::cross_check(&p.weights, &p.degrees, &limits)?;
        let regular = regularity::is_strictly_regular(&p.weights, &p.degrees, g.dp_cap)?.regular;
        return Ok(Outcome::verdict(
            r.divergences.is_empty(),
            json!({
                "input": echo(&p),
                "checks": r.checks.len(),
                "divergences": r.divergences,
                "strictly_regular": regular,
            }),
        ));
    }
    let cases = args.random.expect("clap requires --input or --random");
    let mut rng = ChaCha8Rng::seed_from_u64(g.seed);
    let mut checks = 0;
    let mut divergent = Vec::new();
    for _ in 0..cases {
        let (weights, degrees) = random_pair(&mut rng);
        let r = oracle::cross_check(&weights, &degrees, &limits)?;
        checks += r.checks.len();
        if !r.divergences.is_empty() {
            divergent.push(json!({"weights": weights, "degrees": degrees, "divergences": r.divergences}));
        }
    }
    Ok(Outcome::verdict(
        divergent.is_empty(),
        json!({"seed": g.seed, "cases": cases, "checks": checks, "divergences": divergent}),
    ))
}
