//! Facet-represented simplicial complexes, their weighted versions, the
//! singular-locus complex `S(rho)`, the base-locus complexes `B_rho(d)` and
//! graded Stanley-Reisner presentations.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::arith::{self, gcd_closure, DivisibilityPoset, Representability, WeightTuple};
use crate::error::{Error, Result};

/// A set of vertices, kept sorted ascending without repeats.
pub type Face = Vec<usize>;

pub(crate) fn normalize(face: &[usize]) -> Face {
    let set: BTreeSet<usize> = face.iter().copied().collect();
    set.into_iter().collect()
}

/// Subset test for sorted faces.
pub(crate) fn is_subset(small: &[usize], big: &[usize]) -> bool {
    let mut it = big.iter();
    small.iter().all(|x| it.any(|y| y == x))
}

/// All `k`-element subsets of a sorted slice, in lexicographic order.
pub(crate) fn k_subsets(items: &[usize], k: usize) -> Vec<Face> {
    fn rec(items: &[usize], k: usize, start: usize, cur: &mut Face, out: &mut Vec<Face>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        let need = k - cur.len();
        for pos in start..items.len() {
            if items.len() - pos < need {
                break;
            }
            cur.push(items[pos]);
            rec(items, k, pos + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= items.len() {
        rec(items, k, 0, &mut Vec::with_capacity(k), &mut out);
    }
    out
}

/// A finite abstract simplicial complex on `{0, ..., n_vertices - 1}`,
/// stored by its facets. A vertex is a face only if some facet contains it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "ComplexRepr")]
pub struct Complex {
    n_vertices: usize,
    facets: Vec<Face>,
}

#[derive(Deserialize)]
struct ComplexRepr {
    n_vertices: usize,
    facets: Vec<Vec<usize>>,
}

impl TryFrom<ComplexRepr> for Complex {
    type Error = Error;
    fn try_from(r: ComplexRepr) -> Result<Self> {
        Complex::new(r.n_vertices, r.facets)
    }
}

impl Complex {
    /// Build from generating faces; non-maximal generators are discarded.
    pub fn new(n_vertices: usize, generators: impl IntoIterator<Item = Vec<usize>>) -> Result<Self> {
        let mut gens: BTreeSet<Face> = BTreeSet::new();
        for g in generators {
            if g.is_empty() {
                return Err(Error::input("empty facet"));
            }
            if let Some(v) = g.iter().find(|&&v| v >= n_vertices) {
                return Err(Error::input(format!(
                    "vertex {v} out of range for {n_vertices} vertices"
                )));
            }
            gens.insert(normalize(&g));
        }
        let all: Vec<Face> = gens.into_iter().collect();
        let facets = all
            .iter()
            .filter(|f| !all.iter().any(|g| g.len() > f.len() && is_subset(f, g)))
            .cloned()
            .collect();
        Ok(Complex { n_vertices, facets })
    }

    pub fn empty(n_vertices: usize) -> Self {
        Complex {
            n_vertices,
            facets: Vec::new(),
        }
    }

    /// The full simplex on all `n` vertices.
    pub fn simplex(n: usize) -> Self {
        Complex {
            n_vertices: n,
            facets: if n == 0 { vec![] } else { vec![(0..n).collect()] },
        }
    }

    /// `l`-skeleton of the simplex on `n` vertices: all `(l+1)`-subsets.
    pub fn skeleton(n: usize, l: usize) -> Self {
        let verts: Face = (0..n).collect();
        let size = (l + 1).min(n);
        Complex {
            n_vertices: n,
            facets: if n == 0 { vec![] } else { k_subsets(&verts, size) },
        }
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    /// Facets in ascending lexicographic order.
    pub fn facets(&self) -> &[Face] {
        &self.facets
    }

    /// True when there are no facets, i.e. not even the empty face.
    pub fn is_empty(&self) -> bool {
        self.facets.is_empty()
    }

    /// Vertices lying in some facet.
    pub fn vertices(&self) -> Face {
        normalize(&self.facets.concat())
    }

    pub fn dimension(&self) -> Option<usize> {
        self.facets.iter().map(|f| f.len() - 1).max()
    }

    pub fn is_face(&self, face: &[usize]) -> Result<bool> {
        if let Some(v) = face.iter().find(|&&v| v >= self.n_vertices) {
            return Err(Error::input(format!(
                "vertex {v} out of range for {} vertices",
                self.n_vertices
            )));
        }
        Ok(self.contains(&normalize(face)))
    }

    /// `is_face` for an already sorted, in-range face.
    pub(crate) fn contains(&self, face: &[usize]) -> bool {
        self.facets.iter().any(|f| is_subset(face, f))
    }

    /// Nonempty faces with at most `k + 1` vertices, ordered by
    /// cardinality and then lexicographically.
    pub fn faces_up_to(&self, k: usize) -> impl Iterator<Item = Face> {
        let mut faces: BTreeSet<(usize, Face)> = BTreeSet::new();
        for f in &self.facets {
            for size in 1..=(k + 1).min(f.len()) {
                for s in k_subsets(f, size) {
                    faces.insert((size, s));
                }
            }
        }
        faces.into_iter().map(|(_, f)| f)
    }

    /// Every nonempty face, in canonical order.
    pub fn faces(&self) -> impl Iterator<Item = Face> {
        self.faces_up_to(self.dimension().unwrap_or(0))
    }

    /// Number of nonempty faces, without materializing them when facets are
    /// large. Saturates at `u64::MAX`.
    pub fn face_count(&self) -> u64 {
        if self.facets.iter().all(|f| f.len() <= 16) {
            let mut seen: BTreeSet<Face> = BTreeSet::new();
            for f in &self.facets {
                for size in 1..=f.len() {
                    seen.extend(k_subsets(f, size));
                }
            }
            seen.len() as u64
        } else {
            u64::MAX
        }
    }

    /// Inclusion-minimal non-faces over the whole vertex set, sorted
    /// lexicographically.
    pub fn minimal_nonfaces(&self) -> Vec<Face> {
        let ground: Face = (0..self.n_vertices).collect();
        self.minimal_nonfaces_within(&ground)
    }

    /// Inclusion-minimal subsets of `ground` that are not faces.
    /// Faces of the complex must lie inside `ground`.
    pub fn minimal_nonfaces_within(&self, ground: &[usize]) -> Vec<Face> {
        let support = self.vertices();
        let mut out: Vec<Face> = ground
            .iter()
            .filter(|v| support.binary_search(v).is_err())
            .map(|&v| vec![v])
            .collect();
        let max = self.dimension().map_or(0, |d| d + 1);
        // Every minimal non-face S with |S| >= 2 arises exactly once as
        // (S minus its largest vertex) plus that vertex.
        let mut level: Vec<Face> = support.iter().map(|&v| vec![v]).collect();
        for _ in 1..=max {
            let mut next = Vec::new();
            for f in &level {
                let last = *f.last().expect("faces are nonempty");
                for &v in support.iter().filter(|&&v| v > last) {
                    let mut s = f.clone();
                    s.push(v);
                    if self.contains(&s) {
                        next.push(s);
                    } else if (0..s.len()).all(|drop| {
                        let mut sub = s.clone();
                        sub.remove(drop);
                        self.contains(&sub)
                    }) {
                        out.push(s);
                    }
                }
            }
            level = next;
        }
        out.sort();
        out
    }

    /// True when every subset of every facet is reported as a face.
    pub fn is_downward_closed_for(&self, faces: &[Face]) -> bool {
        faces.iter().all(|f| {
            (0..f.len()).all(|k| {
                let mut sub = f.clone();
                sub.remove(k);
                sub.is_empty() || self.contains(&sub)
            })
        })
    }
}

/// A complex together with positive weights on its ground vertices. The
/// weight of a face is the gcd of its vertex weights.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "WeightedRepr", into = "WeightedRepr")]
pub struct WeightedComplex {
    complex: Complex,
    vertex_weights: BTreeMap<usize, BigUint>,
}

#[derive(Serialize, Deserialize)]
struct WeightedRepr {
    n_vertices: usize,
    facets: Vec<Vec<usize>>,
    vertex_weights: BTreeMap<String, crate::json::BigNum>,
}

impl TryFrom<WeightedRepr> for WeightedComplex {
    type Error = Error;
    fn try_from(r: WeightedRepr) -> Result<Self> {
        let complex = Complex::new(r.n_vertices, r.facets)?;
        let mut weights = BTreeMap::new();
        for (k, v) in r.vertex_weights {
            let key: usize = k
                .parse()
                .map_err(|_| Error::input(format!("bad vertex key {k:?}")))?;
            weights.insert(key, v.0);
        }
        WeightedComplex::new(complex, weights)
    }
}

impl From<WeightedComplex> for WeightedRepr {
    fn from(w: WeightedComplex) -> Self {
        WeightedRepr {
            n_vertices: w.complex.n_vertices,
            facets: w.complex.facets,
            vertex_weights: w
                .vertex_weights
                .into_iter()
                .map(|(k, v)| (k.to_string(), crate::json::BigNum(v)))
                .collect(),
        }
    }
}

impl WeightedComplex {
    pub fn new(complex: Complex, vertex_weights: BTreeMap<usize, BigUint>) -> Result<Self> {
        if let Some(v) = vertex_weights.keys().find(|&&v| v >= complex.n_vertices) {
            return Err(Error::input(format!("weighted vertex {v} out of range")));
        }
        if let Some((v, _)) = vertex_weights.iter().find(|(_, w)| num_traits::Zero::is_zero(*w)) {
            return Err(Error::input(format!("vertex {v} has weight zero")));
        }
        if let Some(v) = complex
            .vertices()
            .into_iter()
            .find(|v| !vertex_weights.contains_key(v))
        {
            return Err(Error::input(format!("vertex {v} lies in a facet but has no weight")));
        }
        Ok(WeightedComplex {
            complex,
            vertex_weights,
        })
    }

    pub fn complex(&self) -> &Complex {
        &self.complex
    }

    pub fn vertex_weights(&self) -> &BTreeMap<usize, BigUint> {
        &self.vertex_weights
    }

    /// The weighted vertices, ascending. Faces live inside this set.
    pub fn ground(&self) -> Face {
        self.vertex_weights.keys().copied().collect()
    }

    pub fn vertex_weight(&self, v: usize) -> Option<&BigUint> {
        self.vertex_weights.get(&v)
    }

    /// `Phi(I)`: gcd of the vertex weights, or `None` if `I` is empty or has
    /// an unweighted vertex.
    pub fn weight_of(&self, face: &[usize]) -> Option<BigUint> {
        let ws: Option<Vec<BigUint>> = face
            .iter()
            .map(|v| self.vertex_weights.get(v).cloned())
            .collect();
        arith::gcd_of(&ws?).ok()
    }

    pub fn sr_presentation(&self) -> SRPresentation {
        SRPresentation {
            degrees: self.vertex_weights.values().cloned().collect(),
            generators: self.complex.minimal_nonfaces_within(&self.ground()),
        }
    }
}

/// Graded Stanley-Reisner presentation: one variable per weighted vertex
/// (ascending vertex order) graded by its weight, and the square-free
/// monomial generators given as vertex sets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SRPresentation {
    #[serde(with = "big_vec")]
    pub degrees: Vec<BigUint>,
    pub generators: Vec<Face>,
}

mod big_vec {
    use super::*;
    use crate::json::BigNum;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(xs: &[BigUint], s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(xs.iter().map(|x| BigNum(x.clone())))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<BigUint>, D::Error> {
        Vec::<BigNum>::deserialize(d).map(|v| v.into_iter().map(|b| b.0).collect())
    }
}

/// `S(rho)`: faces are the index sets whose weights have gcd > 1.
///
/// Facets are the sets `{i : g | a_i}` for the divisibility-minimal
/// elements `g` of the gcd closure of the weights. Weight-1 vertices carry
/// no weight and never appear.
pub fn singular_complex(weights: &WeightTuple) -> WeightedComplex {
    let poset = DivisibilityPoset::new(gcd_closure(weights.as_slice()))
        .expect("gcd closure holds positive values");
    let facets = poset
        .minimal_elements()
        .into_iter()
        .map(|g| closure_of(weights, &g))
        .collect::<Vec<_>>();
    let complex = Complex::new(weights.len(), facets).expect("indices are in range");
    let vertex_weights = weights
        .heavy_indices()
        .into_iter()
        .map(|i| (i, weights.get(i).clone()))
        .collect();
    WeightedComplex::new(complex, vertex_weights).expect("heavy vertices are weighted")
}

/// `S^(b) = {i : b | a_i}`.
pub fn closure_of(weights: &WeightTuple, b: &BigUint) -> Face {
    use num_integer::Integer;
    (0..weights.len())
        .filter(|&i| weights.get(i).is_multiple_of(b))
        .collect()
}

/// `S(mu)` with vertices labelled by degree index `1..=c`; label 0 is unused.
pub fn degree_complex(degrees: &crate::arith::DegreeTuple) -> WeightedComplex {
    let mut padded = vec![BigUint::one()];
    padded.extend(degrees.as_slice().iter().cloned());
    singular_complex(&WeightTuple::new(padded).expect("degrees are positive"))
}

/// `B_rho(d)`: faces are the index sets over which `d` is *not* a
/// non-negative combination of the weights.
///
/// Representability only depends on the set of distinct values, so maximal
/// non-representable value sets are found first and then expanded to all
/// indices carrying those values.
pub fn base_complex(weights: &WeightTuple, d: &BigUint, cap: u64) -> Result<WeightedComplex> {
    let heavy = weights.heavy_indices();
    let values: Vec<BigUint> = heavy
        .iter()
        .map(|&i| weights.get(i).clone())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();

    let mut faces: Vec<Vec<usize>> = Vec::new();
    let mut cur = Vec::new();
    collect_nonrepresentable(&values, d, cap, 0, &mut cur, &mut faces)?;
    let maximal: Vec<&Vec<usize>> = faces
        .iter()
        .filter(|f| !faces.iter().any(|g| g.len() > f.len() && is_subset(f, g)))
        .collect();

    let facets = maximal.into_iter().map(|vs| {
        let chosen: BTreeSet<&BigUint> = vs.iter().map(|&k| &values[k]).collect();
        heavy
            .iter()
            .copied()
            .filter(|&i| chosen.contains(weights.get(i)))
            .collect::<Vec<_>>()
    });
    let complex = Complex::new(weights.len(), facets)?;
    let vertex_weights = heavy.iter().map(|&i| (i, weights.get(i).clone())).collect();
    WeightedComplex::new(complex, vertex_weights)
}

/// DFS over value subsets in increasing position order. A representable set
/// prunes its whole branch since supersets stay representable.
fn collect_nonrepresentable(
    values: &[BigUint],
    d: &BigUint,
    cap: u64,
    start: usize,
    cur: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) -> Result<()> {
    for k in start..values.len() {
        cur.push(k);
        let ws: Vec<BigUint> = cur.iter().map(|&p| values[p].clone()).collect();
        match arith::is_representable(d, &ws, cap) {
            Representability::No => {
                out.push(cur.clone());
                collect_nonrepresentable(values, d, cap, k + 1, cur, out)?;
            }
            Representability::Yes => {}
            Representability::Unknown => {
                return Err(Error::DpCapExceeded {
                    degree: d.clone(),
                    cap,
                })
            }
        }
        cur.pop();
    }
    Ok(())
}
