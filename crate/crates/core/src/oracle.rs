//! Brute-force counterparts of the fast paths, for cross-checking.
//!
//! Everything here enumerates directly from the definitions over machine
//! integers and shares no search code with the rest of the crate.

use std::collections::{BTreeMap, BTreeSet};

use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::arith::{self, DegreeTuple, WeightTuple};
use crate::complex::{self, Face, WeightedComplex};
use crate::error::{Error, Result};
use crate::maps::Limits;
use crate::nef::{self, NefMode};
use crate::regularity;

/// Largest number of weight > 1 indices the oracle accepts.
pub const MAX_HEAVY: usize = 12;
/// Largest degree the oracle accepts.
pub const MAX_DEGREE: u64 = 200;
/// Largest number of weight > 1 indices for the partition oracle.
pub const MAX_NEF_HEAVY: usize = 8;

/// Is `d` a non-negative integer combination of `values`? Tries every
/// coefficient of every value but the last, which must then divide the rest.
pub fn representable(d: u64, values: &[u64]) -> bool {
    fn rec(d: u64, values: &[u64]) -> bool {
        match values {
            [] => d == 0,
            [last] => d.is_multiple_of(*last),
            [first, rest @ ..] => {
                let mut left = d;
                loop {
                    if rec(left, rest) {
                        return true;
                    }
                    if left < *first {
                        return false;
                    }
                    left -= first;
                }
            }
        }
    }
    if d == 0 {
        return true;
    }
    let g = values.iter().fold(0u64, |g, &v| g.gcd(&v));
    if g == 0 || !d.is_multiple_of(g) {
        return false;
    }
    let mut vs = values.to_vec();
    vs.sort_unstable_by(|a, b| b.cmp(a));
    vs.dedup();
    rec(d, &vs)
}

fn gcd_of(values: impl IntoIterator<Item = u64>) -> u64 {
    values.into_iter().fold(0, |g, v| g.gcd(&v))
}

/// Index subsets of `indices` as sorted faces, by mask.
fn subsets(indices: &[usize]) -> impl Iterator<Item = Face> + '_ {
    (1u64..(1u64 << indices.len())).map(move |mask| {
        indices
            .iter()
            .enumerate()
            .filter(|(k, _)| mask >> k & 1 == 1)
            .map(|(_, &i)| i)
            .collect()
    })
}

/// Strict regularity by checking every index set with gcd > 1 directly.
/// The witness is the violating set of least size, lexicographically least.
pub fn strictly_regular(weights: &[u64], degrees: &[u64]) -> (bool, Option<Face>) {
    let heavy: Vec<usize> = (0..weights.len()).filter(|&i| weights[i] > 1).collect();
    let mut best: Option<Face> = None;
    let mut memo: BTreeMap<Vec<u64>, usize> = BTreeMap::new();
    for face in subsets(&heavy) {
        let ws: Vec<u64> = face.iter().map(|&i| weights[i]).collect();
        if gcd_of(ws.iter().copied()) <= 1 {
            continue;
        }
        let count = *memo
            .entry(ws.clone())
            .or_insert_with(|| degrees.iter().filter(|&&d| representable(d, &ws)).count());
        if count < face.len() && best.as_ref().is_none_or(|b| (face.len(), &face) < (b.len(), b)) {
            best = Some(face);
        }
    }
    (best.is_none(), best)
}

/// Every nonempty face of `S(rho)`.
pub fn singular_faces(weights: &[u64]) -> BTreeSet<Face> {
    let heavy: Vec<usize> = (0..weights.len()).filter(|&i| weights[i] > 1).collect();
    subsets(&heavy)
        .filter(|f| gcd_of(f.iter().map(|&i| weights[i])) > 1)
        .collect()
}

/// Every nonempty face of `B_rho(d)`.
pub fn base_faces(weights: &[u64], d: u64) -> BTreeSet<Face> {
    let heavy: Vec<usize> = (0..weights.len()).filter(|&i| weights[i] > 1).collect();
    subsets(&heavy)
        .filter(|f| {
            let ws: Vec<u64> = f.iter().map(|&i| weights[i]).collect();
            !representable(d, &ws)
        })
        .collect()
}

/// Every nonempty face of a complex, from the definition of the facet
/// representation.
pub fn faces_of(wc: &WeightedComplex) -> BTreeSet<Face> {
    let ground = wc.ground();
    subsets(&ground)
        .filter(|f| wc.complex().facets().iter().any(|g| f.iter().all(|v| g.contains(v))))
        .collect()
}

/// Does a nef-partition of the given kind exist? Tries every assignment of
/// the weight > 1 indices to `I_0, ..., I_c`; weight-1 indices are then
/// only counted.
pub fn nef_exists(weights: &[u64], degrees: &[u64], mode: NefMode) -> bool {
    let heavy: Vec<u64> = weights.iter().copied().filter(|&a| a > 1).collect();
    let ones = weights.len() - heavy.len();
    let c = degrees.len();
    let total = (c + 1).pow(heavy.len() as u32);
    'assign: for code in 0..total {
        let mut sums = vec![0u64; c + 1];
        let mut x = code;
        for &a in &heavy {
            let j = x % (c + 1);
            x /= c + 1;
            if mode == NefMode::Strong && (j == 0 || !degrees[j - 1].is_multiple_of(a)) {
                continue 'assign;
            }
            sums[j] += a;
        }
        let mut need = 0u64;
        for j in 1..=c {
            if sums[j] > degrees[j - 1] {
                continue 'assign;
            }
            need += degrees[j - 1] - sums[j];
        }
        let need_zero = u64::from(mode == NefMode::Nice);
        if need + need_zero <= ones as u64 {
            return true;
        }
    }
    false
}

/// All vertex maps `source -> target` that send faces to faces and satisfy
/// `w(v) | w(F(v))`.
pub fn weighted_maps(source: &WeightedComplex, target: &WeightedComplex) -> Vec<BTreeMap<usize, usize>> {
    let src = source.ground();
    let tgt = target.ground();
    let sfaces = faces_of(source);
    let tfaces = faces_of(target);
    let mut out = Vec::new();
    let total = tgt.len().checked_pow(src.len() as u32).unwrap_or(usize::MAX);
    for code in 0..total {
        let mut x = code;
        let mut f = BTreeMap::new();
        let mut ok = true;
        for &v in &src {
            let y = tgt[x % tgt.len()];
            x /= tgt.len();
            let a = source.vertex_weight(v).expect("ground vertex");
            if !target.vertex_weight(y).expect("ground vertex").is_multiple_of(a) {
                ok = false;
                break;
            }
            f.insert(v, y);
        }
        if ok
            && sfaces.iter().all(|face| {
                let img: Face = face.iter().map(|v| f[v]).collect::<BTreeSet<_>>().into_iter().collect();
                tfaces.contains(&img)
            })
        {
            out.push(f);
        }
    }
    out
}

/// Is `f` injective on every face of `source`?
pub fn is_noncontracting(source: &WeightedComplex, f: &BTreeMap<usize, usize>) -> bool {
    faces_of(source).iter().all(|face| {
        let img: BTreeSet<usize> = face.iter().map(|v| f[v]).collect();
        img.len() == face.len()
    })
}

/// Small-integer view of a pair within the oracle limits.
pub fn small_pair(weights: &WeightTuple, degrees: &DegreeTuple) -> Result<(Vec<u64>, Vec<u64>)> {
    let heavy = weights.heavy_indices().len();
    if heavy > MAX_HEAVY {
        return Err(Error::TooLarge(format!(
            "{heavy} weights above 1, oracle limit is {MAX_HEAVY}"
        )));
    }
    let ds: Option<Vec<u64>> = degrees.as_slice().iter().map(|d| d.to_u64()).collect();
    let ds = ds
        .filter(|ds| ds.iter().all(|&d| d <= MAX_DEGREE))
        .ok_or_else(|| Error::TooLarge(format!("degrees above {MAX_DEGREE}")))?;
    // weights above every degree never matter for representability, but
    // they must still fit a machine word
    let ws: Option<Vec<u64>> = weights.iter().map(|a| a.to_u64()).collect();
    let ws = ws.ok_or_else(|| Error::TooLarge("weight exceeds 64 bits".into()))?;
    Ok((ws, ds))
}

/// One disagreement between a fast path and its oracle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Divergence {
    pub check: String,
    pub fast: String,
    pub oracle: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleReport {
    pub checks: Vec<String>,
    pub divergences: Vec<Divergence>,
}

/// Run every oracle that fits the instance and diff it against the fast
/// paths.
pub fn cross_check(weights: &WeightTuple, degrees: &DegreeTuple, limits: &Limits) -> Result<OracleReport> {
    let (ws, ds) = small_pair(weights, degrees)?;
    let mut checks = Vec::new();
    let mut divergences = Vec::new();
    let mut diff = |check: String, fast: String, oracle: String| {
        if fast != oracle {
            divergences.push(Divergence { check: check.clone(), fast, oracle });
        }
        checks.push(check);
    };

    let values: Vec<u64> = ws.iter().copied().filter(|&a| a > 1).collect::<BTreeSet<_>>().into_iter().collect();
    for mask in 1u64..(1u64 << values.len()) {
        let vs: Vec<u64> = (0..values.len()).filter(|k| mask >> k & 1 == 1).map(|k| values[k]).collect();
        let big: Vec<_> = vs.iter().map(|&v| v.into()).collect();
        let fast = arith::representable_degrees(&big, degrees, limits.dp_cap)?;
        let oracle: BTreeSet<usize> = (1..=ds.len()).filter(|&j| representable(ds[j - 1], &vs)).collect();
        diff(format!("representable_degrees {vs:?}"), format!("{fast:?}"), format!("{oracle:?}"));
        for (j, &d) in ds.iter().enumerate() {
            let fast = arith::is_representable(&d.into(), &big, limits.dp_cap).is_yes();
            diff(
                format!("is_representable {d} over {vs:?} (degree {})", j + 1),
                fast.to_string(),
                representable(d, &vs).to_string(),
            );
        }
    }

    let sr = regularity::is_strictly_regular(weights, degrees, limits.dp_cap)?;
    let (regular, witness) = strictly_regular(&ws, &ds);
    diff("strictly_regular".into(), sr.regular.to_string(), regular.to_string());
    diff("strictly_regular witness".into(), format!("{:?}", sr.witness), format!("{witness:?}"));

    let s = complex::singular_complex(weights);
    diff(
        "singular complex faces".into(),
        format!("{:?}", faces_of(&s)),
        format!("{:?}", singular_faces(&ws)),
    );
    for &d in &ds {
        let b = complex::base_complex(weights, &d.into(), limits.dp_cap)?;
        diff(
            format!("base complex faces for {d}"),
            format!("{:?}", faces_of(&b)),
            format!("{:?}", base_faces(&ws, d)),
        );
    }

    if ws.iter().filter(|&&a| a > 1).count() <= MAX_NEF_HEAVY {
        for mode in [NefMode::Any, NefMode::Nice, NefMode::Strong] {
            let found = nef::find_nef_partition(weights, degrees, mode, limits.node_budget)?;
            if let Some(p) = &found {
                let cls = nef::classify_partition(weights, degrees, p)?;
                let ok = match mode {
                    NefMode::Any => cls.valid,
                    NefMode::Nice => cls.nice,
                    NefMode::Strong => cls.strong,
                };
                diff(format!("nef {mode:?} witness classifies"), ok.to_string(), "true".into());
            }
            diff(
                format!("nef {mode:?} exists"),
                found.is_some().to_string(),
                nef_exists(&ws, &ds, mode).to_string(),
            );
        }
    }
    Ok(OracleReport { checks, divergences })
}
