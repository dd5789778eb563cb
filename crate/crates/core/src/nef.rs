//! Nef-partitions: classification, exhaustive search and the explicit
//! strong construction for pairs with trivial `(A, B)`.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{DegreeTuple, WeightTuple};
use crate::complex::Face;
use crate::error::{Error, Hypothesis, Result};
use crate::maps::{self, AdmissibleFamily, FamilySearch, Limits};
use crate::regularity;

/// `parts[0]` is `I_0`, `parts[j]` is `I_j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NefPartition {
    pub parts: Vec<Face>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NefClassification {
    pub valid: bool,
    pub nice: bool,
    pub strong: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NefMode {
    Any,
    Nice,
    Strong,
}

impl std::str::FromStr for NefMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "any" => Ok(NefMode::Any),
            "nice" => Ok(NefMode::Nice),
            "strong" => Ok(NefMode::Strong),
            _ => Err(Error::input(format!("unknown mode {s:?}"))),
        }
    }
}

/// `sum(rho) - sum(mu)`.
pub fn fano_index(weights: &WeightTuple, degrees: &DegreeTuple) -> BigInt {
    BigInt::from(weights.sum()) - BigInt::from(degrees.sum())
}

/// Recompute every flag of `p` from the definitions.
pub fn classify_partition(
    weights: &WeightTuple,
    degrees: &DegreeTuple,
    p: &NefPartition,
) -> Result<NefClassification> {
    if p.parts.len() != degrees.len() + 1 {
        return Err(Error::input(format!(
            "expected {} parts, got {}",
            degrees.len() + 1,
            p.parts.len()
        )));
    }
    let mut seen = BTreeSet::new();
    for part in &p.parts {
        weights.check_indices(part)?;
        for &i in part {
            if !seen.insert(i) {
                return Err(Error::input(format!("index {i} appears twice")));
            }
        }
    }
    if seen.len() != weights.len() {
        return Err(Error::input("parts do not cover every index"));
    }

    let valid = degrees.indexed().all(|(j, d)| {
        p.parts[j]
            .iter()
            .map(|&i| weights.get(i))
            .sum::<BigUint>()
            == *d
    });
    let nice = valid && p.parts[0].iter().any(|&i| weights.get(i).is_one());
    let strong = valid
        && p.parts[0].iter().all(|&i| weights.get(i).is_one())
        && degrees.indexed().all(|(j, d)| {
            p.parts[j]
                .iter()
                .all(|&i| d.is_multiple_of(weights.get(i)))
        });
    Ok(NefClassification { valid, nice, strong })
}

/// Exhaustive search for a nef-partition of the requested kind.
///
/// Only the indices of weight > 1 are branched on, heaviest first, trying
/// parts `1..=c` and then `I_0`. Weight-1 indices are interchangeable: they
/// fill the residuals `d_j - (heavy sum in I_j)` and the rest goes to `I_0`.
/// Equal weights take non-decreasing part choices. Ones are handed out in
/// ascending index order, to `I_0` first and then to `I_1, ..., I_c`.
pub fn find_nef_partition(
    weights: &WeightTuple,
    degrees: &DegreeTuple,
    mode: NefMode,
    node_budget: u64,
) -> Result<Option<NefPartition>> {
    let c = degrees.len();
    let mut heavy = weights.heavy_indices();
    heavy.sort_by(|&x, &y| weights.get(y).cmp(weights.get(x)).then(x.cmp(&y)));
    let ones = weights.unit_indices();

    let mut options: Vec<Vec<usize>> = Vec::with_capacity(heavy.len());
    for &i in &heavy {
        let a = weights.get(i);
        let mut opts: Vec<usize> = degrees
            .indexed()
            .filter(|(_, d)| *d >= a && (mode != NefMode::Strong || d.is_multiple_of(a)))
            .map(|(j, _)| j)
            .collect();
        if mode != NefMode::Strong {
            opts.push(0);
        }
        options.push(opts);
    }
    // suffix[k] = total weight of heavy[k..]
    let mut suffix = vec![BigUint::zero(); heavy.len() + 1];
    for k in (0..heavy.len()).rev() {
        suffix[k] = &suffix[k + 1] + weights.get(heavy[k]);
    }
    let min_zero_ones = usize::from(mode == NefMode::Nice);

    let mut search = NefSearch {
        weights,
        degrees,
        heavy: &heavy,
        options: &options,
        suffix: &suffix,
        n_ones: BigUint::from(ones.len()),
        min_zero_ones: BigUint::from(min_zero_ones),
        sums: vec![BigUint::zero(); c + 1],
        placed: BigUint::zero(),
        choice: Vec::with_capacity(heavy.len()),
        nodes: 0,
        budget: node_budget,
    };
    if !search.run()? {
        return Ok(None);
    }

    let mut parts: Vec<Face> = vec![Vec::new(); c + 1];
    for (&i, &j) in heavy.iter().zip(&search.choice) {
        parts[j].push(i);
    }
    let residual: Vec<usize> = (1..=c)
        .map(|j| {
            (degrees.degree(j) - &search.sums[j])
                .to_usize()
                .expect("residual is bounded by the number of ones")
        })
        .collect();
    let zero_ones = ones.len() - residual.iter().sum::<usize>();
    let mut it = ones.into_iter();
    parts[0].extend(it.by_ref().take(zero_ones));
    for j in 1..=c {
        parts[j].extend(it.by_ref().take(residual[j - 1]));
    }
    for part in &mut parts {
        part.sort_unstable();
    }
    Ok(Some(NefPartition { parts }))
}

struct NefSearch<'a> {
    weights: &'a WeightTuple,
    degrees: &'a DegreeTuple,
    heavy: &'a [usize],
    options: &'a [Vec<usize>],
    suffix: &'a [BigUint],
    n_ones: BigUint,
    min_zero_ones: BigUint,
    /// Heavy weight placed in each part; `sums[0]` is `I_0`.
    sums: Vec<BigUint>,
    /// Heavy weight placed in parts `1..=c`.
    placed: BigUint,
    choice: Vec<usize>,
    nodes: u64,
    budget: u64,
}

impl NefSearch<'_> {
    fn rank(&self, j: usize) -> usize {
        if j == 0 {
            self.degrees.len()
        } else {
            j - 1
        }
    }

    /// Can the ones still cover every residual, leaving enough for `I_0`?
    fn residual_fits(&self, remaining_heavy: &BigUint) -> bool {
        let total = self.degrees.sum();
        let best = &self.placed + remaining_heavy;
        if best >= total {
            return true;
        }
        &total - &best + &self.min_zero_ones <= self.n_ones
    }

    fn run(&mut self) -> Result<bool> {
        let k = self.choice.len();
        if !self.residual_fits(&self.suffix[k]) {
            return Ok(false);
        }
        if k == self.heavy.len() {
            let residual = self.degrees.sum() - &self.placed;
            return Ok(residual + &self.min_zero_ones <= self.n_ones);
        }
        let i = self.heavy[k];
        let a = self.weights.get(i).clone();
        let floor = match k.checked_sub(1) {
            Some(prev) if self.weights.get(self.heavy[prev]) == &a => self.rank(self.choice[prev]),
            _ => 0,
        };
        for &j in &self.options[k] {
            if self.rank(j) < floor {
                continue;
            }
            if j > 0 && &self.sums[j] + &a > *self.degrees.degree(j) {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(Error::BudgetExceeded {
                    budget: self.budget,
                });
            }
            self.sums[j] += &a;
            if j > 0 {
                self.placed += &a;
            }
            self.choice.push(j);
            if self.run()? {
                return Ok(true);
            }
            self.choice.pop();
            self.sums[j] -= &a;
            if j > 0 {
                self.placed -= &a;
            }
        }
        Ok(false)
    }
}

/// Output of [`construct_strong_nef_partition`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrongConstruction {
    pub partition: NefPartition,
    pub family: AdmissibleFamily,
    /// Vertex fibers `F_j`, keyed by `j = 1..=c`.
    pub fibers: BTreeMap<usize, Face>,
    /// `Delta_j = d_j - sum of a_i over F_j`, for `j = 1..=c`.
    pub deltas: Vec<usize>,
    pub fano_index: usize,
    pub classification: NefClassification,
}

/// Check the hypotheses of the construction in a fixed order and return
/// the first one that fails.
pub fn check_hypotheses(
    weights: &WeightTuple,
    degrees: &DegreeTuple,
    cap: u64,
) -> Result<Option<(Hypothesis, Option<Face>)>> {
    if regularity::is_linear_cone(weights, degrees) {
        let witness = weights
            .iter()
            .position(|a| degrees.as_slice().contains(a))
            .map(|i| vec![i]);
        return Ok(Some((Hypothesis::NotLinearCone, witness)));
    }
    if fano_index(weights, degrees) <= BigInt::zero() {
        return Ok(Some((Hypothesis::Fano, None)));
    }
    let sr = regularity::is_strictly_regular(weights, degrees, cap)?;
    if !sr.regular {
        return Ok(Some((Hypothesis::StrictlyRegular, sr.witness)));
    }
    let pair = regularity::pair_is_trivial(weights);
    if !pair.trivial {
        return Ok(Some((Hypothesis::PairTrivial, pair.witness)));
    }
    Ok(None)
}

/// The strong nef-partition built from vertex fibers of an admissible
/// family, topped up with weight-1 indices.
///
/// Fibers `F_j` go to `I_j`; the ones are split in ascending index order
/// into `U_0` of size `i_X`, then `U_j` of size `Delta_j`. Negative
/// `Delta_j`, a failed count identity or a non-strong result is reported as
/// a consistency error rather than repaired.
pub fn construct_strong_nef_partition(
    weights: &WeightTuple,
    degrees: &DegreeTuple,
    limits: &Limits,
) -> Result<StrongConstruction> {
    if let Some((hypothesis, witness)) = check_hypotheses(weights, degrees, limits.dp_cap)? {
        return Err(Error::Hypothesis { hypothesis, witness });
    }
    let family = match maps::build_admissible_family(weights, degrees, limits)? {
        FamilySearch::Found(f) => f,
        FamilySearch::Infeasible(core) => {
            return Err(Error::Consistency {
                index: 0,
                detail: format!("no admissible family for a strictly regular pair: {core:?}"),
            })
        }
    };
    let c = degrees.len();
    let fibers = maps::vertex_fibers(weights, c, &family)?;

    let mut deltas = Vec::with_capacity(c);
    for (j, d) in degrees.indexed() {
        let load: BigUint = fibers[&j].iter().map(|&i| weights.get(i)).sum();
        if load > *d {
            return Err(Error::Consistency {
                index: j,
                detail: format!("fiber weight {load} exceeds degree {d}"),
            });
        }
        let delta = (d - load).to_usize().ok_or_else(|| Error::Consistency {
            index: j,
            detail: "residual exceeds the number of weight-1 indices".into(),
        })?;
        deltas.push(delta);
    }

    let units = weights.unit_indices();
    let i_x = fano_index(weights, degrees);
    let fano = i_x.to_usize().expect("positive by hypothesis");
    if BigInt::from(units.len()) != i_x + BigInt::from(deltas.iter().sum::<usize>()) {
        return Err(Error::Consistency {
            index: 0,
            detail: format!(
                "{} weight-1 indices but i_X + sum(Delta) = {} + {}",
                units.len(),
                fano,
                deltas.iter().sum::<usize>()
            ),
        });
    }

    let mut parts: Vec<Face> = Vec::with_capacity(c + 1);
    let mut it = units.into_iter();
    parts.push(it.by_ref().take(fano).collect());
    for (j, &delta) in (1..=c).zip(&deltas) {
        let mut part: Face = it.by_ref().take(delta).collect();
        part.extend(&fibers[&j]);
        part.sort_unstable();
        parts.push(part);
    }
    let partition = NefPartition { parts };
    let classification = classify_partition(weights, degrees, &partition)?;
    if !classification.strong {
        return Err(Error::Consistency {
            index: 0,
            detail: format!("constructed partition is not strong: {classification:?}"),
        });
    }
    Ok(StrongConstruction {
        partition,
        family,
        fibers,
        deltas,
        fano_index: fano,
        classification,
    })
}

/// `rho = (1^(61+t+2m), 6, 10, 15)`, `mu = (2^(m), 16, 21, 25, 30)`: Fano of
/// index `t`, strictly regular, without a strong nef-partition.
pub fn no_strong_instance(t: usize, m: usize) -> (WeightTuple, DegreeTuple) {
    let rho = WeightTuple::with_ones(61 + t + 2 * m, &[6, 10, 15]).expect("positive weights");
    let mut mu = vec![2u64; m];
    mu.extend([16, 21, 25, 30]);
    (rho, DegreeTuple::from_u64s(&mu).expect("positive degrees"))
}
