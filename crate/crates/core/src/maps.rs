//! Weighted simplicial maps, admissible-injection families and the induced
//! order-preserving map of face posets `S(rho) -> S(mu)`.
//!
//! Degree indices are 1-based throughout, matching the vertex labels of
//! [`degree_complex`].

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::arith::{self, gcd_closure, DegreeTuple, DivisibilityPoset, WeightTuple};
use crate::complex::{closure_of, degree_complex, is_subset, singular_complex, Face, WeightedComplex};
use crate::csp::{Constraint, Problem};
use crate::error::{Error, Hypothesis, Result};
use crate::regularity;

/// Search limits shared by every exact search in the crate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub dp_cap: u64,
    pub node_budget: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            dp_cap: arith::DEFAULT_DP_CAP,
            node_budget: 10_000_000,
        }
    }
}

/// A vertex map between weighted complexes, to be checked by
/// [`validate_weighted_map`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightedMap {
    pub source: WeightedComplex,
    pub target: WeightedComplex,
    pub vertex_assignment: BTreeMap<usize, usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapValidation {
    pub simplicial: bool,
    pub simplicial_witness: Option<Face>,
    pub weighted: bool,
    pub weighted_witness: Option<Face>,
    pub contracts_face: Option<Face>,
}

impl MapValidation {
    pub fn is_noncontracting_weighted_map(&self) -> bool {
        self.simplicial && self.weighted && self.contracts_face.is_none()
    }
}

/// Check that `map` is simplicial, weighted and face-injective.
///
/// Witnesses are the first failing source face in (cardinality, lex) order.
/// Since faces are downward closed: simpliciality follows from the facets;
/// a failing weight condition always fails on some vertex of the face; and
/// a contracted face contains a contracted edge.
pub fn validate_weighted_map(map: &WeightedMap) -> Result<MapValidation> {
    let src = map.source.complex();
    let image = |face: &[usize]| -> Face {
        let set: BTreeSet<usize> = face.iter().map(|v| map.vertex_assignment[v]).collect();
        set.into_iter().collect()
    };
    if let Some(v) = src
        .vertices()
        .into_iter()
        .find(|v| !map.vertex_assignment.contains_key(v))
    {
        return Err(Error::input(format!("vertex {v} has no image")));
    }
    let target_has = |f: &Face| {
        f.iter().all(|&v| v < map.target.complex().n_vertices()) && map.target.complex().contains(f)
    };

    let simplicial_witness = if src.facets().iter().all(|f| target_has(&image(f))) {
        None
    } else {
        src.faces().find(|f| !target_has(&image(f)))
    };

    let weighted_witness = src.vertices().into_iter().find_map(|v| {
        let a = map.source.vertex_weight(v).expect("source vertices are weighted");
        let ok = map
            .target
            .vertex_weight(map.vertex_assignment[&v])
            .is_some_and(|d| d.is_multiple_of(a));
        (!ok).then(|| vec![v])
    });

    let contracts_face = src
        .faces_up_to(1)
        .filter(|f| f.len() == 2)
        .find(|f| map.vertex_assignment[&f[0]] == map.vertex_assignment[&f[1]]);

    Ok(MapValidation {
        simplicial: simplicial_witness.is_none(),
        simplicial_witness,
        weighted: weighted_witness.is_none(),
        weighted_witness,
        contracts_face,
    })
}

/// Search for a weighted simplicial map `S(rho) -> S(mu)` that is injective
/// on every face.
///
/// A vertex map with `a_i | d_{F(i)}` is automatically simplicial and
/// weighted, so this is list colouring of the 1-skeleton of `S(rho)` with
/// colour lists `{j : a_i | d_j}`.
pub fn find_noncontracting_map(
    weights: &WeightTuple,
    degrees: &DegreeTuple,
    node_budget: u64,
) -> Result<Option<WeightedMap>> {
    let heavy = weights.heavy_indices();
    let domains = heavy
        .iter()
        .map(|&i| {
            degrees
                .indexed()
                .filter(|(_, d)| d.is_multiple_of(weights.get(i)))
                .map(|(j, _)| j as u32)
                .collect()
        })
        .collect();
    let mut problem = Problem::new(domains);
    for (p, &i) in heavy.iter().enumerate() {
        for (q, &k) in heavy.iter().enumerate().skip(p + 1) {
            if !weights.get(i).gcd(weights.get(k)).is_one() {
                problem.add(Constraint::NotEqual(p, q));
            }
        }
    }
    Ok(problem.solve(node_budget)?.map(|colours| WeightedMap {
        source: singular_complex(weights),
        target: degree_complex(degrees),
        vertex_assignment: heavy
            .iter()
            .zip(colours)
            .map(|(&i, j)| (i, j as usize))
            .collect(),
    }))
}

/// Admissible injections `chi^(b): S^(b) -> {1..c}` for every `b` in `im(Phi)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "FamilyRepr", into = "FamilyRepr")]
pub struct AdmissibleFamily {
    im_phi: Vec<BigUint>,
    injections: BTreeMap<BigUint, BTreeMap<usize, usize>>,
}

#[derive(Serialize, Deserialize)]
struct FamilyRepr {
    im_phi: Vec<crate::json::BigNum>,
    injections: BTreeMap<String, BTreeMap<String, usize>>,
}

impl TryFrom<FamilyRepr> for AdmissibleFamily {
    type Error = Error;
    fn try_from(r: FamilyRepr) -> Result<Self> {
        let parse_big = |s: &str| -> Result<BigUint> {
            s.parse()
                .map_err(|_| Error::input(format!("bad integer key {s:?}")))
        };
        let mut injections = BTreeMap::new();
        for (b, inj) in r.injections {
            let mut m = BTreeMap::new();
            for (v, j) in inj {
                let v: usize = v
                    .parse()
                    .map_err(|_| Error::input(format!("bad vertex key {v:?}")))?;
                m.insert(v, j);
            }
            injections.insert(parse_big(&b)?, m);
        }
        let im_phi: BTreeSet<BigUint> = r.im_phi.into_iter().map(|b| b.0).collect();
        Ok(AdmissibleFamily {
            im_phi: im_phi.into_iter().collect(),
            injections,
        })
    }
}

impl From<AdmissibleFamily> for FamilyRepr {
    fn from(f: AdmissibleFamily) -> Self {
        FamilyRepr {
            im_phi: f.im_phi.into_iter().map(crate::json::BigNum).collect(),
            injections: f
                .injections
                .into_iter()
                .map(|(b, inj)| {
                    (
                        b.to_string(),
                        inj.into_iter().map(|(v, j)| (v.to_string(), j)).collect(),
                    )
                })
                .collect(),
        }
    }
}

impl AdmissibleFamily {
    pub fn new(
        im_phi: Vec<BigUint>,
        injections: BTreeMap<BigUint, BTreeMap<usize, usize>>,
    ) -> Self {
        let set: BTreeSet<BigUint> = im_phi.into_iter().collect();
        AdmissibleFamily {
            im_phi: set.into_iter().collect(),
            injections,
        }
    }

    /// `im(Phi)` in ascending order.
    pub fn im_phi(&self) -> &[BigUint] {
        &self.im_phi
    }

    pub fn injection(&self, b: &BigUint) -> Option<&BTreeMap<usize, usize>> {
        self.injections.get(b)
    }

    pub fn injections(&self) -> &BTreeMap<BigUint, BTreeMap<usize, usize>> {
        &self.injections
    }

    pub fn injections_mut(&mut self) -> &mut BTreeMap<BigUint, BTreeMap<usize, usize>> {
        &mut self.injections
    }

    /// `chi_vert(i) = chi^(a_i)(i)`.
    pub fn vertex_image(&self, weights: &WeightTuple, i: usize) -> Option<usize> {
        self.injections.get(weights.get(i))?.get(&i).copied()
    }

    /// `chi(I) = chi^(Phi(I))(I)` as a set of degree indices.
    pub fn face_image(&self, weights: &WeightTuple, face: &[usize]) -> Result<Face> {
        weights.check_indices(face)?;
        let face = crate::complex::normalize(face);
        let phi = arith::gcd_at(weights.as_slice(), &face)
            .filter(|g| !g.is_one())
            .ok_or_else(|| Error::input(format!("{face:?} is not a face of S(rho)")))?;
        let inj = self
            .injections
            .get(&phi)
            .ok_or_else(|| Error::input(format!("family has no injection for {phi}")))?;
        let image: Option<BTreeSet<usize>> = face.iter().map(|i| inj.get(i).copied()).collect();
        image
            .map(|s| s.into_iter().collect())
            .ok_or_else(|| Error::input(format!("injection for {phi} misses part of {face:?}")))
    }
}

/// Which compatibility is imposed between injections along divisibility.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Compatibility {
    /// `im(chi^(b)) ⊆ im(chi^(q))` whenever `b` covers `q`.
    ImageContainment,
    /// `chi^(b)` is the restriction of `chi^(q)` whenever `b` covers `q`.
    Restriction,
}

/// A constraint of the family search, as reported in infeasibility
/// certificates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FamilyConstraint {
    Injective {
        #[serde(with = "crate::json::big")]
        b: BigUint,
    },
    ImageContainment {
        #[serde(with = "crate::json::big")]
        b: BigUint,
        #[serde(with = "crate::json::big")]
        q: BigUint,
    },
    Restriction {
        #[serde(with = "crate::json::big")]
        b: BigUint,
        #[serde(with = "crate::json::big")]
        q: BigUint,
        vertex: usize,
    },
    NonContraction { first: usize, second: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FamilySearch {
    Found(AdmissibleFamily),
    /// No family exists; the listed constraints are already contradictory
    /// together with the admissibility domains.
    Infeasible(Vec<FamilyConstraint>),
}

struct FamilyProblem {
    problem: Problem,
    vars: Vec<(BigUint, usize)>,
    labels: Vec<FamilyConstraint>,
    im_phi: Vec<BigUint>,
}

fn family_problem(
    weights: &WeightTuple,
    degrees: &DegreeTuple,
    mode: Compatibility,
    cap: u64,
) -> Result<FamilyProblem> {
    let im_phi: Vec<BigUint> = gcd_closure(weights.as_slice()).into_iter().collect();
    let poset = DivisibilityPoset::new(im_phi.iter().cloned())?;

    let mut vars: Vec<(BigUint, usize)> = Vec::new();
    let mut domains: Vec<Vec<u32>> = Vec::new();
    let mut var_of: BTreeMap<(BigUint, usize), usize> = BTreeMap::new();
    let mut vars_of_b: BTreeMap<BigUint, Vec<usize>> = BTreeMap::new();
    for b in &im_phi {
        let dom = closure_of(weights, b);
        let good: Vec<u32> = arith::representable_degrees(&weights.select(&dom), degrees, cap)?
            .into_iter()
            .map(|j| j as u32)
            .collect();
        for i in dom {
            var_of.insert((b.clone(), i), vars.len());
            vars_of_b.entry(b.clone()).or_default().push(vars.len());
            vars.push((b.clone(), i));
            domains.push(good.clone());
        }
    }

    let mut problem = Problem::new(domains);
    let mut labels = Vec::new();
    for b in &im_phi {
        problem.add(Constraint::AllDifferent(vars_of_b[b].clone()));
        labels.push(FamilyConstraint::Injective { b: b.clone() });
    }
    for b in &im_phi {
        for q in poset.covers(b)? {
            match mode {
                Compatibility::ImageContainment => {
                    problem.add(Constraint::ImageSubset {
                        sub: vars_of_b[b].clone(),
                        sup: vars_of_b[&q].clone(),
                    });
                    labels.push(FamilyConstraint::ImageContainment { b: b.clone(), q });
                }
                Compatibility::Restriction => {
                    for &v in &vars_of_b[b] {
                        let i = vars[v].1;
                        problem.add(Constraint::Equal(v, var_of[&(q.clone(), i)]));
                        labels.push(FamilyConstraint::Restriction {
                            b: b.clone(),
                            q: q.clone(),
                            vertex: i,
                        });
                    }
                }
            }
        }
    }
    let heavy = weights.heavy_indices();
    for &i in &heavy {
        for &k in &heavy {
            if i != k && weights.get(k).is_multiple_of(weights.get(i)) && (weights.get(i) != weights.get(k) || i < k) {
                let vi = var_of[&(weights.get(i).clone(), i)];
                let vk = var_of[&(weights.get(k).clone(), k)];
                problem.add(Constraint::NotEqual(vi, vk));
                labels.push(FamilyConstraint::NonContraction { first: i, second: k });
            }
        }
    }
    Ok(FamilyProblem {
        problem,
        vars,
        labels,
        im_phi,
    })
}

/// Build a family of admissible injections for a strictly regular pair.
///
/// The whole family is one constraint problem: each `chi^(b)(i)` ranges over
/// the degrees representable over the weights of `S^(b)`; every injection
/// is injective; images shrink along covers of the divisibility order on
/// `im(Phi)`; and vertices whose weights divide one another get different
/// images.
pub fn build_admissible_family(
    weights: &WeightTuple,
    degrees: &DegreeTuple,
    limits: &Limits,
) -> Result<FamilySearch> {
    build_family_with(weights, degrees, Compatibility::ImageContainment, limits)
}

pub fn build_family_with(
    weights: &WeightTuple,
    degrees: &DegreeTuple,
    mode: Compatibility,
    limits: &Limits,
) -> Result<FamilySearch> {
    let sr = regularity::is_strictly_regular(weights, degrees, limits.dp_cap)?;
    if !sr.regular {
        return Err(Error::Hypothesis {
            hypothesis: Hypothesis::StrictlyRegular,
            witness: sr.witness,
        });
    }
    let fp = family_problem(weights, degrees, mode, limits.dp_cap)?;
    match fp.problem.solve(limits.node_budget)? {
        Some(values) => {
            let mut injections: BTreeMap<BigUint, BTreeMap<usize, usize>> = fp
                .im_phi
                .iter()
                .map(|b| (b.clone(), BTreeMap::new()))
                .collect();
            for ((b, i), j) in fp.vars.iter().zip(values) {
                injections
                    .get_mut(b)
                    .expect("b in im_phi")
                    .insert(*i, j as usize);
            }
            Ok(FamilySearch::Found(AdmissibleFamily {
                im_phi: fp.im_phi,
                injections,
            }))
        }
        None => {
            let core = fp
                .problem
                .minimal_conflict(limits.node_budget)?
                .expect("problem was infeasible");
            Ok(FamilySearch::Infeasible(
                core.into_iter().map(|k| fp.labels[k].clone()).collect(),
            ))
        }
    }
}

/// Violations of the family invariants, as human-readable strings. Empty
/// means the family is admissible for `(rho; mu)`.
pub fn check_family(
    weights: &WeightTuple,
    degrees: &DegreeTuple,
    family: &AdmissibleFamily,
    cap: u64,
) -> Result<Vec<String>> {
    let mut out = Vec::new();
    let expected: Vec<BigUint> = gcd_closure(weights.as_slice()).into_iter().collect();
    if family.im_phi != expected {
        out.push(format!(
            "im_phi is {:?}, expected {:?}",
            display(&family.im_phi),
            display(&expected)
        ));
        return Ok(out);
    }
    for b in &expected {
        let dom = closure_of(weights, b);
        let Some(inj) = family.injections.get(b) else {
            out.push(format!("missing injection for {b}"));
            continue;
        };
        if inj.keys().copied().collect::<Vec<_>>() != dom {
            out.push(format!("injection for {b} is not defined exactly on S^({b}) = {dom:?}"));
            continue;
        }
        let image: BTreeSet<usize> = inj.values().copied().collect();
        if image.len() != inj.len() {
            out.push(format!("injection for {b} is not injective"));
        }
        let good = arith::representable_degrees(&weights.select(&dom), degrees, cap)?;
        for (&i, &j) in inj {
            if !good.contains(&j) {
                out.push(format!("chi^({b})({i}) = {j} is not admissible"));
            }
        }
    }
    if !out.is_empty() {
        return Ok(out);
    }
    let poset = DivisibilityPoset::new(expected.iter().cloned())?;
    for b in &expected {
        let im_b: BTreeSet<usize> = family.injections[b].values().copied().collect();
        for q in poset.covers(b)? {
            let im_q: BTreeSet<usize> = family.injections[&q].values().copied().collect();
            if !im_b.is_subset(&im_q) {
                out.push(format!("im chi^({b}) is not contained in im chi^({q})"));
            }
        }
    }
    let heavy = weights.heavy_indices();
    for &i in &heavy {
        for &k in &heavy {
            if i != k
                && weights.get(k).is_multiple_of(weights.get(i))
                && family.vertex_image(weights, i) == family.vertex_image(weights, k)
            {
                out.push(format!("vertices {i} and {k} share an image although a_{i} | a_{k}"));
            }
        }
    }
    out.dedup();
    Ok(out)
}

fn display(xs: &[BigUint]) -> Vec<String> {
    xs.iter().map(|x| x.to_string()).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Property2Record {
    pub face: Face,
    pub degree: usize,
    pub representable: bool,
}

/// Verdicts of the face-poset map induced by a family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetMapReport {
    pub invariant_violations: Vec<String>,
    /// False when only closed faces and faces of size at most 2 were checked.
    pub exhaustive: bool,
    pub faces_checked: usize,
    pub property1: bool,
    pub property2: bool,
    pub property2_records: Vec<Property2Record>,
    pub property3: bool,
    pub order_preserving: bool,
}

/// Faces beyond this count are sampled rather than enumerated.
pub const FULL_ENUMERATION_LIMIT: u64 = 1 << 12;

/// Recompute properties (1)-(3) and order preservation of `chi` from scratch.
pub fn verify_poset_map(
    weights: &WeightTuple,
    degrees: &DegreeTuple,
    family: &AdmissibleFamily,
    cap: u64,
) -> Result<PosetMapReport> {
    let invariant_violations = check_family(weights, degrees, family, cap)?;
    let s = singular_complex(weights);
    let exhaustive = s.complex().face_count() <= FULL_ENUMERATION_LIMIT;
    let faces: Vec<Face> = if exhaustive {
        s.complex().faces().collect()
    } else {
        let mut set: BTreeSet<(usize, Face)> =
            s.complex().faces_up_to(1).map(|f| (f.len(), f)).collect();
        for b in gcd_closure(weights.as_slice()) {
            let f = closure_of(weights, &b);
            set.insert((f.len(), f));
        }
        set.into_iter().map(|(_, f)| f).collect()
    };

    let images: BTreeMap<&Face, Option<Face>> = faces
        .iter()
        .map(|f| (f, family.face_image(weights, f).ok()))
        .collect();

    let property1 = images
        .iter()
        .all(|(f, img)| img.as_ref().is_some_and(|i| i.len() == f.len()));

    let mut records = Vec::new();
    for f in &faces {
        if let Some(img) = &images[f] {
            let ws = weights.select(f);
            for &j in img {
                let representable = j >= 1
                    && j <= degrees.len()
                    && arith::is_representable(degrees.degree(j), &ws, cap).is_yes();
                records.push(Property2Record {
                    face: f.clone(),
                    degree: j,
                    representable,
                });
            }
        }
    }
    let property2 = property1 && records.iter().all(|r| r.representable);

    let property3 = s.complex().faces_up_to(1).filter(|f| f.len() == 2).all(|e| {
        let (x, y) = (weights.get(e[0]), weights.get(e[1]));
        let divides = y.is_multiple_of(x) || x.is_multiple_of(y);
        !divides || family.vertex_image(weights, e[0]) != family.vertex_image(weights, e[1])
    });

    let order_preserving = faces.iter().filter(|f| f.len() >= 2).all(|f| {
        let Some(Some(big)) = images.get(f) else {
            return false;
        };
        (0..f.len()).all(|k| {
            let mut sub = f.clone();
            sub.remove(k);
            let small = match images.get(&sub) {
                Some(img) => img.clone(),
                None => family.face_image(weights, &sub).ok(),
            };
            small.is_some_and(|s| is_subset(&s, big))
        })
    });

    Ok(PosetMapReport {
        invariant_violations,
        exhaustive,
        faces_checked: faces.len(),
        property1,
        property2,
        property2_records: records,
        property3,
        order_preserving,
    })
}

/// Fibers of `chi_vert` over degree indices `1..=c`; empty fibers included.
pub fn vertex_fibers(
    weights: &WeightTuple,
    codim: usize,
    family: &AdmissibleFamily,
) -> Result<BTreeMap<usize, Face>> {
    let mut fibers: BTreeMap<usize, Face> = (1..=codim).map(|j| (j, Vec::new())).collect();
    for i in weights.heavy_indices() {
        let j = family
            .vertex_image(weights, i)
            .ok_or_else(|| Error::input(format!("family does not map vertex {i}")))?;
        fibers
            .get_mut(&j)
            .ok_or_else(|| Error::input(format!("vertex {i} maps outside 1..={codim}")))?
            .push(i);
    }
    Ok(fibers)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(xs: &[u64]) -> WeightTuple {
        WeightTuple::from_u64s(xs).unwrap()
    }

    fn d(xs: &[u64]) -> DegreeTuple {
        DegreeTuple::from_u64s(xs).unwrap()
    }

    fn b(x: u64) -> BigUint {
        BigUint::from(x)
    }

    fn found(s: FamilySearch) -> AdmissibleFamily {
        match s {
            FamilySearch::Found(f) => f,
            FamilySearch::Infeasible(c) => panic!("infeasible: {c:?}"),
        }
    }

    fn fig3() -> (WeightTuple, DegreeTuple, AdmissibleFamily) {
        let rho = w(&[1, 1, 6, 10, 15]);
        let mu = d(&[16, 21, 25, 30]);
        let fam = found(build_admissible_family(&rho, &mu, &Limits::default()).unwrap());
        (rho, mu, fam)
    }

    #[test]
    fn figure_three_family() {
        let (rho, mu, fam) = fig3();
        assert_eq!(fam.im_phi(), &[b(2), b(3), b(5), b(6), b(10), b(15)]);
        assert_eq!(fam.injection(&b(6)).unwrap(), &BTreeMap::from([(2, 4)]));
        assert_eq!(fam.injection(&b(10)).unwrap(), &BTreeMap::from([(3, 4)]));
        assert_eq!(fam.injection(&b(15)).unwrap(), &BTreeMap::from([(4, 4)]));
        assert_eq!(fam.face_image(&rho, &[2, 3]).unwrap(), vec![1, 4]);
        assert_eq!(fam.face_image(&rho, &[2, 4]).unwrap(), vec![2, 4]);
        assert_eq!(fam.face_image(&rho, &[3, 4]).unwrap(), vec![3, 4]);
        assert_eq!(fam.face_image(&rho, &[2]).unwrap(), vec![4]);
        assert!(fam.face_image(&rho, &[2, 3, 4]).is_err());
        assert!(fam.face_image(&rho, &[0]).is_err());
        assert!(check_family(&rho, &mu, &fam, 1000).unwrap().is_empty());
    }

    #[test]
    fn small_families() {
        let fam = found(build_admissible_family(&w(&[1, 2]), &d(&[4]), &Limits::default()).unwrap());
        assert_eq!(fam.injection(&b(2)).unwrap(), &BTreeMap::from([(1, 1)]));
        assert_eq!(fam.face_image(&w(&[1, 2]), &[1]).unwrap(), vec![1]);

        let rho = w(&[2, 3]);
        let mu = d(&[4, 9]);
        let fam = found(build_admissible_family(&rho, &mu, &Limits::default()).unwrap());
        assert_eq!(fam.injection(&b(2)).unwrap(), &BTreeMap::from([(0, 1)]));
        assert_eq!(fam.injection(&b(3)).unwrap(), &BTreeMap::from([(1, 2)]));
        let fibers = vertex_fibers(&rho, 2, &fam).unwrap();
        assert_eq!(fibers, BTreeMap::from([(1, vec![0]), (2, vec![1])]));
    }

    #[test]
    fn precondition_carries_witness() {
        match build_admissible_family(&w(&[2, 2, 2]), &d(&[2, 3]), &Limits::default()) {
            Err(Error::Hypothesis {
                hypothesis: Hypothesis::StrictlyRegular,
                witness: Some(wit),
            }) => assert_eq!(wit, vec![0, 1]),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn restriction_compatibility_is_infeasible_on_figure_three() {
        let rho = w(&[1, 1, 6, 10, 15]);
        let mu = d(&[16, 21, 25, 30]);
        let s = build_family_with(&rho, &mu, Compatibility::Restriction, &Limits::default()).unwrap();
        match s {
            FamilySearch::Infeasible(core) => {
                assert!(core.contains(&FamilyConstraint::Injective { b: b(2) })
                    || core.contains(&FamilyConstraint::Injective { b: b(3) })
                    || core.contains(&FamilyConstraint::Injective { b: b(5) }));
            }
            FamilySearch::Found(f) => panic!("unexpected family {f:?}"),
        }
    }

    #[test]
    fn figure_three_fibers_and_report() {
        let (rho, mu, fam) = fig3();
        let fibers = vertex_fibers(&rho, 4, &fam).unwrap();
        assert_eq!(fibers[&4], vec![2, 3, 4]);
        assert!(fibers[&1].is_empty() && fibers[&2].is_empty() && fibers[&3].is_empty());

        let rep = verify_poset_map(&rho, &mu, &fam, 1000).unwrap();
        assert!(rep.exhaustive);
        assert!(rep.property1 && rep.property3 && rep.order_preserving);
        assert!(rep.invariant_violations.is_empty());
        // 3 vertices with one image each, 3 edges with two images each.
        assert_eq!(rep.property2_records.len(), 9);
    }

    #[test]
    fn corrupted_family_is_detected() {
        let (rho, mu, mut fam) = fig3();
        // Send vertex 2 (weight 6) to degree 16, which 6 does not divide.
        fam.injections_mut().get_mut(&b(6)).unwrap().insert(2, 1);
        let rep = verify_poset_map(&rho, &mu, &fam, 1000).unwrap();
        assert!(!rep.invariant_violations.is_empty());
        assert!(!rep.property2 || !rep.order_preserving);
    }

    #[test]
    fn noncontracting_map_examples() {
        let none = find_noncontracting_map(&w(&[1, 1, 6, 10, 15]), &d(&[16, 21, 25, 30]), 10_000).unwrap();
        assert!(none.is_none());

        let m = find_noncontracting_map(&w(&[1, 2, 3]), &d(&[4, 9]), 10_000)
            .unwrap()
            .unwrap();
        assert_eq!(m.vertex_assignment, BTreeMap::from([(1, 1), (2, 2)]));
        assert!(validate_weighted_map(&m).unwrap().is_noncontracting_weighted_map());
    }

    #[test]
    fn validate_contracting_map() {
        let source = singular_complex(&w(&[2, 2]));
        let target = degree_complex(&d(&[4]));
        let m = WeightedMap {
            source,
            target,
            vertex_assignment: BTreeMap::from([(0, 1), (1, 1)]),
        };
        let v = validate_weighted_map(&m).unwrap();
        assert!(v.simplicial && v.weighted);
        assert_eq!(v.contracts_face, Some(vec![0, 1]));

        let apart = WeightedMap {
            source: singular_complex(&w(&[2, 3])),
            target: degree_complex(&d(&[6])),
            vertex_assignment: BTreeMap::from([(0, 1), (1, 1)]),
        };
        let v = validate_weighted_map(&apart).unwrap();
        assert!(v.is_noncontracting_weighted_map());

        let bad_weight = WeightedMap {
            source: singular_complex(&w(&[2, 3])),
            target: degree_complex(&d(&[4, 9])),
            vertex_assignment: BTreeMap::from([(0, 2), (1, 2)]),
        };
        let v = validate_weighted_map(&bad_weight).unwrap();
        assert!(!v.weighted);
        assert_eq!(v.weighted_witness, Some(vec![0]));

        let missing = WeightedMap {
            source: singular_complex(&w(&[2, 3])),
            target: degree_complex(&d(&[6])),
            vertex_assignment: BTreeMap::from([(0, 1)]),
        };
        assert!(validate_weighted_map(&missing).is_err());
    }

    #[test]
    fn family_json_roundtrip() {
        let (_, _, fam) = fig3();
        let text = crate::json::to_canonical_string(&fam).unwrap();
        assert!(text.starts_with(r#"{"im_phi":[2,3,5,6,10,15],"injections":{"10":{"3":4}"#));
        let back: AdmissibleFamily = serde_json::from_str(&text).unwrap();
        assert_eq!(back, fam);
    }
}
