//! Realizing abstract simplicial complexes as `S(rho)`, and the instance
//! families built on top of that.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::arith::{self, DegreeTuple, WeightTuple};
use crate::complex::{degree_complex, singular_complex, Complex, Face};
use crate::error::{Error, Result};
use crate::maps::WeightedMap;

/// Weights realizing a complex, with the weight function that produced them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RealizationResult {
    #[serde(with = "crate::json::decimal_vec")]
    pub weights: Vec<BigUint>,
    /// `Phi` on every face, keyed like `"0,2"`.
    #[serde(with = "face_keyed")]
    pub face_values: BTreeMap<Face, BigUint>,
    /// The prime put on each facet.
    #[serde(with = "face_keyed")]
    pub prime_assignment: BTreeMap<Face, BigUint>,
}

impl RealizationResult {
    pub fn weight_tuple(&self) -> WeightTuple {
        WeightTuple::new(self.weights.clone()).expect("realized weights are positive")
    }
}

pub fn face_key(face: &[usize]) -> String {
    face.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
}

pub fn parse_face_key(key: &str) -> Result<Face> {
    key.split(',')
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| Error::input(format!("bad face key {key:?}")))
        })
        .collect()
}

mod face_keyed {
    use super::*;
    use crate::json::BigNum;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(
        m: &BTreeMap<Face, BigUint>,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        s.collect_map(m.iter().map(|(f, v)| (face_key(f), BigNum(v.clone()))))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<BTreeMap<Face, BigUint>, D::Error> {
        let raw = BTreeMap::<String, BigNum>::deserialize(d)?;
        raw.into_iter()
            .map(|(k, v)| {
                parse_face_key(&k)
                    .map(|f| (f, v.0))
                    .map_err(serde::de::Error::custom)
            })
            .collect()
    }
}

/// Primes in ascending order, skipping the first `skip`.
fn primes(skip: usize, count: usize) -> Vec<BigUint> {
    let mut found: Vec<u64> = Vec::new();
    let mut n = 2u64;
    while found.len() < skip + count {
        if found.iter().take_while(|&&p| p * p <= n).all(|&p| !n.is_multiple_of(p)) {
            found.push(n);
        }
        n += 1;
    }
    found[skip..].iter().map(|&p| BigUint::from(p)).collect()
}

/// Realize `c` as `S(rho)` with facet primes starting at the `skip`-th
/// prime. Vertices lying in no facet get weight 1.
pub fn realize_weights_from(c: &Complex, skip: usize) -> RealizationResult {
    let prime_assignment: BTreeMap<Face, BigUint> = c
        .facets()
        .iter()
        .cloned()
        .zip(primes(skip, c.facets().len()))
        .collect();

    // Faces by decreasing cardinality; each face takes the lcm over the
    // faces one larger that contain it, a facet keeps its prime.
    let faces: Vec<Face> = c.faces().collect();
    let mut face_values: BTreeMap<Face, BigUint> = BTreeMap::new();
    for face in faces.iter().rev() {
        if let Some(p) = prime_assignment.get(face) {
            face_values.insert(face.clone(), p.clone());
            continue;
        }
        let mut value = BigUint::one();
        for (up, v) in &face_values {
            if up.len() == face.len() + 1 && crate::complex::is_subset(face, up) {
                value = value.lcm(v);
            }
        }
        face_values.insert(face.clone(), value);
    }

    let weights = (0..c.n_vertices())
        .map(|v| face_values.get(&vec![v]).cloned().unwrap_or_else(BigUint::one))
        .collect();
    RealizationResult {
        weights,
        face_values,
        prime_assignment,
    }
}

/// Realize `c` with the smallest primes `2, 3, 5, ...` on its facets in
/// canonical facet order.
pub fn realize_weights(c: &Complex) -> Result<RealizationResult> {
    if c.n_vertices() == 0 {
        return Err(Error::input("complex has no vertices"));
    }
    Ok(realize_weights_from(c, 0))
}

/// `S(rho) = c` as labelled complexes.
pub fn verify_realization(c: &Complex, weights: &WeightTuple) -> Result<bool> {
    if weights.len() != c.n_vertices() {
        return Err(Error::input(format!(
            "{} weights for {} vertices",
            weights.len(),
            c.n_vertices()
        )));
    }
    Ok(singular_complex(weights).complex().facets() == c.facets())
}

/// A pair from the contraction family together with its bookkeeping.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContractionInstance {
    pub weights: WeightTuple,
    pub degrees: DegreeTuple,
    /// Degree indices (1-based) that every weighted simplicial map lands in.
    pub designated: Face,
    /// Facet `I_j` of the skeleton behind degree `m + j`, in realized
    /// (unshifted) vertex labels.
    pub facets: Vec<Face>,
    /// How many prime windows were rejected before this one.
    pub retries: usize,
}

pub const CONTRACTION_RETRIES: usize = 16;

/// Smallest admissible count of weight-1 entries for the contraction
/// family: `m + w + l + 1`.
pub fn contraction_min_ones(l: usize, n: usize, m: usize) -> usize {
    m + Complex::skeleton(n + 1, l).facets().len() + l + 1
}

/// `rho' = (1^(t), rho)` with `S(rho)` the `l`-skeleton of the `N`-simplex
/// and `mu = (2^(m), d_1, ..., d_w, lcm(rho)^(l))`, `d_j` the weight sum
/// over facet `I_j`. Prime windows are shifted until no `a_i` divides any
/// of `2` or `d_j`.
pub fn contraction_instance(l: usize, n: usize, m: usize, t: usize) -> Result<ContractionInstance> {
    let skeleton = Complex::skeleton(n + 1, l);
    let w = skeleton.facets().len();
    if l == 0 || l > n {
        return Err(Error::input(format!("need 1 <= l <= N, got l={l}, N={n}")));
    }
    if t <= m + w + l {
        return Err(Error::input(format!(
            "need t > m + w + l = {}, got t={t}",
            m + w + l
        )));
    }
    for retry in 0..=CONTRACTION_RETRIES {
        let real = realize_weights_from(&skeleton, retry);
        let rho = real.weights;
        let sums: Vec<BigUint> = skeleton
            .facets()
            .iter()
            .map(|f| f.iter().map(|&v| &rho[v]).sum())
            .collect();
        let small: Vec<BigUint> = std::iter::repeat_n(BigUint::from(2u32), m)
            .chain(sums.iter().cloned())
            .collect();
        if rho.iter().any(|a| small.iter().any(|d| d.is_multiple_of(a))) {
            continue;
        }
        let top = arith::lcm_of(&rho)?;
        let mut degrees = small;
        degrees.extend(std::iter::repeat_n(top, l));
        let mut weights = vec![BigUint::one(); t];
        weights.extend(rho);
        return Ok(ContractionInstance {
            weights: WeightTuple::new(weights)?,
            degrees: DegreeTuple::new(degrees)?,
            designated: (m + w + 1..=m + w + l).collect(),
            facets: skeleton.facets().to_vec(),
            retries: retry,
        });
    }
    Err(Error::BudgetExceeded {
        budget: CONTRACTION_RETRIES as u64,
    })
}

/// First face of `c` on which `f` is not injective, in canonical order.
pub fn contracted_face(c: &Complex, f: &BTreeMap<usize, usize>) -> Option<Face> {
    c.faces_up_to(1)
        .filter(|e| e.len() == 2)
        .find(|e| f.get(&e[0]).is_some() && f.get(&e[0]) == f.get(&e[1]))
}

/// A weighted pair carrying a planted face-injective weighted map.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapInstance {
    pub weights: WeightTuple,
    pub degrees: DegreeTuple,
    pub map: WeightedMap,
    /// Factor applied to the fiber lcm behind each target vertex.
    pub multipliers: BTreeMap<usize, u64>,
}

/// `k * base` for the least `k >= 2` that avoids every value in `taken`.
fn least_multiple_off(base: &BigUint, taken: &BTreeSet<&BigUint>) -> BigUint {
    let mut k = 2u32;
    while taken.contains(&(base * k)) {
        k += 1;
    }
    base * k
}

/// Realize a surjective, face-injective simplicial map `f: c -> d`.
///
/// `c` is realized as `S(rho)`. Each vertex of `d` gets the lcm of its
/// fiber's weights, multiplied by the least factor `k >= 2` that keeps it
/// off every weight whenever the fiber is a single vertex or the lcm already
/// equals a weight. Then `mu = (those degrees in vertex order, lcm(rho)^(s))`
/// and `rho' = (1^(t), rho)`; the padding degree gets the same treatment if
/// `lcm(rho)` is itself a weight.
pub fn realize_map_instance(
    c: &Complex,
    d: &Complex,
    f: &BTreeMap<usize, usize>,
    s: usize,
    t: usize,
) -> Result<MapInstance> {
    let source_vertices = c.vertices();
    if let Some(v) = source_vertices.iter().find(|v| !f.contains_key(v)) {
        return Err(Error::input(format!("vertex {v} has no image")));
    }
    let targets = d.vertices();
    let image: BTreeSet<usize> = source_vertices.iter().map(|v| f[v]).collect();
    if image != targets.iter().copied().collect() {
        return Err(Error::input("map is not onto the vertices of the target"));
    }
    for facet in c.facets() {
        let img: Face = facet.iter().map(|v| f[v]).collect::<BTreeSet<_>>().into_iter().collect();
        if !d.contains(&img) {
            return Err(Error::input(format!("facet {facet:?} maps to non-face {img:?}")));
        }
    }
    if let Some(e) = contracted_face(c, f) {
        return Err(Error::input(format!("map contracts face {e:?}")));
    }

    let rho = realize_weights(c)?.weights;
    let taken: BTreeSet<&BigUint> = rho.iter().collect();
    let mut degrees = Vec::with_capacity(targets.len() + s);
    let mut multipliers = BTreeMap::new();
    for &y in &targets {
        let fiber: Vec<BigUint> = source_vertices
            .iter()
            .filter(|v| f[v] == y)
            .map(|&v| rho[v].clone())
            .collect();
        let base = arith::lcm_of(&fiber)?;
        let degree = if fiber.len() == 1 || taken.contains(&base) {
            least_multiple_off(&base, &taken)
        } else {
            base.clone()
        };
        multipliers.insert(y, (&degree / &base).to_u64().expect("small multiplier"));
        degrees.push(degree);
    }
    let mut top = arith::lcm_of(&rho)?;
    if taken.contains(&top) {
        top = least_multiple_off(&top, &taken);
    }
    degrees.extend(std::iter::repeat_n(top, s));

    let mut weights = vec![BigUint::one(); t];
    weights.extend(rho);
    let weights = WeightTuple::new(weights)?;
    let degrees = DegreeTuple::new(degrees)?;

    let position: BTreeMap<usize, usize> = targets.iter().enumerate().map(|(k, &y)| (y, k + 1)).collect();
    let map = WeightedMap {
        source: singular_complex(&weights),
        target: degree_complex(&degrees),
        vertex_assignment: source_vertices
            .iter()
            .map(|v| (t + v, position[&f[v]]))
            .collect(),
    };
    Ok(MapInstance {
        weights,
        degrees,
        map,
        multipliers,
    })
}
