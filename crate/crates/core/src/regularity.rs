//! Criteria on a pair `(rho; mu)`: well-formedness, linear cones, strict
//! regularity, and the pair of complexes of non-divisible and strongly
//! non-divisible subsets.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::arith::{self, DegreeTuple, WeightTuple};
use crate::complex::{normalize, Complex, Face};
use crate::error::Result;

/// Every drop-one gcd equals 1. A single weight counts as well-formed only
/// when it is 1, since `P(a)` with `a > 1` is a point presented badly.
pub fn is_wellformed_wps(weights: &WeightTuple) -> bool {
    let ws = weights.as_slice();
    if ws.len() == 1 {
        return ws[0].is_one();
    }
    (0..ws.len()).all(|skip| {
        let rest: Vec<BigUint> = ws
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != skip)
            .map(|(_, w)| w.clone())
            .collect();
        arith::gcd_of(&rest).map(|g| g.is_one()).unwrap_or(false)
    })
}

/// `a_i = d_j` for some `i`, `j`.
pub fn is_linear_cone(weights: &WeightTuple, degrees: &DegreeTuple) -> bool {
    let ws: BTreeSet<&BigUint> = weights.iter().collect();
    degrees.as_slice().iter().any(|d| ws.contains(d))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrictRegularity {
    pub regular: bool,
    /// Smallest violating index set, lexicographically least among those.
    pub witness: Option<Face>,
}

/// Heavy weight values with the indices carrying each one.
fn value_classes(weights: &WeightTuple) -> Vec<(BigUint, Vec<usize>)> {
    let mut classes: BTreeMap<BigUint, Vec<usize>> = BTreeMap::new();
    for i in weights.heavy_indices() {
        classes.entry(weights.get(i).clone()).or_default().push(i);
    }
    classes.into_iter().collect()
}

/// Strict regularity of `(rho; mu)`.
///
/// Only the maximal index set `I_V = {i : a_i in V}` of each value set `V`
/// with `gcd(V) > 1` needs checking: every index set with value set `V` has
/// the same representable degrees and no more elements.
pub fn is_strictly_regular(
    weights: &WeightTuple,
    degrees: &DegreeTuple,
    cap: u64,
) -> Result<StrictRegularity> {
    let classes = value_classes(weights);
    let mut best: Option<Face> = None;
    let mut chosen = Vec::new();
    visit_gcd_subsets(&classes, 0, None, &mut chosen, &mut |picked| {
        let values: Vec<BigUint> = picked.iter().map(|&k| classes[k].0.clone()).collect();
        let size: usize = picked.iter().map(|&k| classes[k].1.len()).sum();
        let count = arith::representable_degrees(&values, degrees, cap)?.len();
        if count < size {
            let s = picked.len().max(count + 1);
            let groups: Vec<&[usize]> = picked.iter().map(|&k| classes[k].1.as_slice()).collect();
            let w = lex_least_cover(&groups, s);
            if best.as_ref().is_none_or(|b| (w.len(), &w) < (b.len(), b)) {
                best = Some(w);
            }
        }
        Ok(())
    })?;
    Ok(StrictRegularity {
        regular: best.is_none(),
        witness: best,
    })
}

/// Calls `f` on every nonempty set of class positions whose values have
/// gcd > 1. Branches are cut as soon as the gcd reaches 1.
fn visit_gcd_subsets(
    classes: &[(BigUint, Vec<usize>)],
    start: usize,
    g: Option<&BigUint>,
    chosen: &mut Vec<usize>,
    f: &mut dyn FnMut(&[usize]) -> Result<()>,
) -> Result<()> {
    for k in start..classes.len() {
        let next = match g {
            Some(g) => g.gcd(&classes[k].0),
            None => classes[k].0.clone(),
        };
        if next.is_one() {
            continue;
        }
        chosen.push(k);
        f(chosen)?;
        visit_gcd_subsets(classes, k + 1, Some(&next), chosen, f)?;
        chosen.pop();
    }
    Ok(())
}

/// Lexicographically least sorted index set of size `s` that meets every
/// group. Requires `groups.len() <= s <= total size`.
fn lex_least_cover(groups: &[&[usize]], s: usize) -> Face {
    let owner: BTreeMap<usize, usize> = groups
        .iter()
        .enumerate()
        .flat_map(|(g, idx)| idx.iter().map(move |&i| (i, g)))
        .collect();
    let pool: Vec<usize> = owner.keys().copied().collect();
    let mut covered = vec![false; groups.len()];
    let mut out: Face = Vec::with_capacity(s);
    let mut pos = 0;
    while out.len() < s {
        let slots_after = s - out.len() - 1;
        let pick = (pos..pool.len()).find(|&p| {
            let x = pool[p];
            let remaining = pool.len() - p - 1;
            if remaining < slots_after {
                return false;
            }
            let mut uncovered = 0;
            for (g, idx) in groups.iter().enumerate() {
                if covered[g] || owner[&x] == g {
                    continue;
                }
                if !idx.iter().any(|&i| i > x) {
                    return false;
                }
                uncovered += 1;
            }
            uncovered <= slots_after
        });
        let p = pick.expect("a cover of the requested size exists");
        covered[owner[&pool[p]]] = true;
        out.push(pool[p]);
        pos = p + 1;
    }
    out
}

/// No weight in the subset divides another one.
pub fn is_non_divisible(weights: &WeightTuple, subset: &[usize]) -> Result<bool> {
    weights.check_indices(subset)?;
    let idx = normalize(subset);
    Ok(idx.iter().all(|&i| {
        idx.iter()
            .all(|&j| i == j || !weights.get(j).is_multiple_of(weights.get(i)))
    }))
}

/// `L(I)`: lcm over unordered pairs of the pairwise gcds, 1 when `|I| <= 1`.
pub fn pairwise_gcd_lcm(weights: &WeightTuple, subset: &[usize]) -> BigUint {
    let idx = normalize(subset);
    let mut gcds = Vec::new();
    for (p, &i) in idx.iter().enumerate() {
        for &j in &idx[p + 1..] {
            gcds.push(weights.get(i).gcd(weights.get(j)));
        }
    }
    arith::lcm_of_or_one(&gcds)
}

/// No weight in the subset divides `L(I)`.
pub fn is_strongly_non_divisible(weights: &WeightTuple, subset: &[usize]) -> Result<bool> {
    weights.check_indices(subset)?;
    let l = pairwise_gcd_lcm(weights, subset);
    Ok(normalize(subset)
        .iter()
        .all(|&k| !l.is_multiple_of(weights.get(k))))
}

/// The complexes `A(rho)` and `B(rho)` over indices of weight > 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialPair {
    pub nondivisible: Complex,
    pub strongly_nondivisible: Complex,
    /// `A(rho) = B(rho)` over weights > 1.
    pub trivial: bool,
    /// The same comparison when weight-1 indices are admitted; each such
    /// index is non-divisible but not strongly non-divisible as a singleton.
    pub trivial_literal: bool,
    /// First facet of `A(rho)` that is not a face of `B(rho)`.
    pub witness: Option<Face>,
}

/// Build `A(rho)` and `B(rho)` and compare them.
///
/// Both complexes only contain index sets with pairwise distinct values, so
/// the search runs over value sets and expands each maximal one into every
/// choice of indices.
pub fn pair_is_trivial(weights: &WeightTuple) -> SimplicialPair {
    let classes = value_classes(weights);
    let values: Vec<BigUint> = classes.iter().map(|(v, _)| v.clone()).collect();

    let antichains = maximal_value_sets(&values, &|set: &[usize], next: usize| {
        // values ascend, so only earlier entries can divide the new one
        set.iter().all(|&k| !values[next].is_multiple_of(&values[k]))
    });
    let strong = maximal_value_sets(&values, &|set: &[usize], next: usize| {
        let mut all = set.to_vec();
        all.push(next);
        let vs: Vec<BigUint> = all.iter().map(|&k| values[k].clone()).collect();
        strongly_non_divisible_values(&vs)
    });

    let expand = |sets: Vec<Vec<usize>>| {
        let facets = sets.into_iter().flat_map(|s| {
            let groups: Vec<&[usize]> = s.iter().map(|&k| classes[k].1.as_slice()).collect();
            choices(&groups)
        });
        Complex::new(weights.len(), facets).expect("indices are in range")
    };
    let nondivisible = expand(antichains);
    let strongly_nondivisible = expand(strong);
    let witness = nondivisible
        .facets()
        .iter()
        .find(|f| !strongly_nondivisible.contains(f))
        .cloned();
    let trivial = witness.is_none();
    let trivial_literal = trivial && weights.unit_indices().is_empty();
    SimplicialPair {
        nondivisible,
        strongly_nondivisible,
        trivial,
        trivial_literal,
        witness,
    }
}

fn strongly_non_divisible_values(vs: &[BigUint]) -> bool {
    let mut gcds = Vec::new();
    for (p, a) in vs.iter().enumerate() {
        for b in &vs[p + 1..] {
            gcds.push(a.gcd(b));
        }
    }
    let l = arith::lcm_of_or_one(&gcds);
    vs.iter().all(|v| !l.is_multiple_of(v))
}

/// Maximal sets of value positions under a downward-closed membership test
/// `ok(set, next)` for extending `set` by a larger position `next`.
fn maximal_value_sets(values: &[BigUint], ok: &dyn Fn(&[usize], usize) -> bool) -> Vec<Vec<usize>> {
    fn rec(
        n: usize,
        start: usize,
        cur: &mut Vec<usize>,
        ok: &dyn Fn(&[usize], usize) -> bool,
        out: &mut Vec<Vec<usize>>,
    ) {
        for k in start..n {
            if ok(cur, k) {
                cur.push(k);
                out.push(cur.clone());
                rec(n, k + 1, cur, ok, out);
                cur.pop();
            }
        }
    }
    let mut all = Vec::new();
    rec(values.len(), 0, &mut Vec::new(), ok, &mut all);
    let maximal: Vec<Vec<usize>> = all
        .iter()
        .filter(|s| {
            !all.iter()
                .any(|t| t.len() > s.len() && crate::complex::is_subset(s, t))
        })
        .cloned()
        .collect();
    maximal
}

/// One element from each group, every combination.
fn choices(groups: &[&[usize]]) -> Vec<Face> {
    let mut out: Vec<Face> = vec![Vec::new()];
    for g in groups {
        out = out
            .into_iter()
            .flat_map(|pre| {
                g.iter().map(move |&i| {
                    let mut f = pre.clone();
                    f.push(i);
                    f
                })
            })
            .collect();
    }
    out.into_iter().map(|f| normalize(&f)).collect()
}

/// Every regularity verdict for a pair, in one record.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegularityReport {
    pub well_formed: bool,
    pub linear_cone: bool,
    pub strictly_regular: bool,
    pub violating_subset: Option<Face>,
    pub pair_trivial: bool,
    pub pair_witness: Option<Face>,
    pub nondivisible_facets: Vec<Face>,
    pub strongly_nondivisible_facets: Vec<Face>,
}

pub fn regularity_report(
    weights: &WeightTuple,
    degrees: &DegreeTuple,
    cap: u64,
) -> Result<RegularityReport> {
    let sr = is_strictly_regular(weights, degrees, cap)?;
    let pair = pair_is_trivial(weights);
    Ok(RegularityReport {
        well_formed: is_wellformed_wps(weights),
        linear_cone: is_linear_cone(weights, degrees),
        strictly_regular: sr.regular,
        violating_subset: sr.witness,
        pair_trivial: pair.trivial,
        pair_witness: pair.witness.clone(),
        nondivisible_facets: pair.nondivisible.facets().to_vec(),
        strongly_nondivisible_facets: pair.strongly_nondivisible.facets().to_vec(),
    })
}
