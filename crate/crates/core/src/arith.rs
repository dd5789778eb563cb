//! Exact integer utilities: weight and degree tuples, gcd/lcm over
//! collections, numerical-semigroup membership and the divisibility order.
//!
//! Every weight and degree is an unbounded [`BigUint`]. Realized weight
//! tuples are products of many primes and routinely leave 64-bit range, and
//! they are fed back into the same machinery as hand-written inputs.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest degree the membership DP will tabulate unless configured otherwise.
pub const DEFAULT_DP_CAP: u64 = 1_000_000;

/// Weights `(a_0, ..., a_N)` of a weighted projective space. Indices start at 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<crate::json::BigNum>", into = "Vec<crate::json::BigNum>")]
pub struct WeightTuple(Vec<BigUint>);

impl WeightTuple {
    pub fn new(weights: Vec<BigUint>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::input("weight tuple must be nonempty"));
        }
        if let Some(i) = weights.iter().position(Zero::is_zero) {
            return Err(Error::input(format!("weight at index {i} is zero")));
        }
        Ok(WeightTuple(weights))
    }

    pub fn from_u64s(weights: &[u64]) -> Result<Self> {
        Self::new(weights.iter().map(|&w| BigUint::from(w)).collect())
    }

    /// `(1^(ones), rest...)`, the shape of almost every Fano example.
    pub fn with_ones(ones: usize, rest: &[u64]) -> Result<Self> {
        let mut w = vec![BigUint::one(); ones];
        w.extend(rest.iter().map(|&x| BigUint::from(x)));
        Self::new(w)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> &BigUint {
        &self.0[i]
    }

    pub fn as_slice(&self) -> &[BigUint] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<BigUint> {
        self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, BigUint> {
        self.0.iter()
    }

    /// Indices whose weight exceeds 1, ascending.
    pub fn heavy_indices(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| !self.0[i].is_one()).collect()
    }

    /// Indices whose weight is exactly 1, ascending.
    pub fn unit_indices(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.0[i].is_one()).collect()
    }

    /// Weights at the given indices. Panics on out-of-range indices.
    pub fn select(&self, indices: &[usize]) -> Vec<BigUint> {
        indices.iter().map(|&i| self.0[i].clone()).collect()
    }

    pub(crate) fn check_indices(&self, indices: &[usize]) -> Result<()> {
        match indices.iter().find(|&&i| i >= self.len()) {
            Some(i) => Err(Error::input(format!(
                "index {i} out of range for {} weights",
                self.len()
            ))),
            None => Ok(()),
        }
    }

    pub fn sum(&self) -> BigUint {
        self.0.iter().sum()
    }
}

impl TryFrom<Vec<crate::json::BigNum>> for WeightTuple {
    type Error = Error;
    fn try_from(v: Vec<crate::json::BigNum>) -> Result<Self> {
        Self::new(v.into_iter().map(|b| b.0).collect())
    }
}

impl From<WeightTuple> for Vec<crate::json::BigNum> {
    fn from(w: WeightTuple) -> Self {
        w.0.into_iter().map(crate::json::BigNum).collect()
    }
}

impl fmt::Display for WeightTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tuple(f, &self.0)
    }
}

/// Degrees `(d_1, ..., d_c)` of a complete intersection. Indices start at 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<crate::json::BigNum>", into = "Vec<crate::json::BigNum>")]
pub struct DegreeTuple(Vec<BigUint>);

impl DegreeTuple {
    pub fn new(degrees: Vec<BigUint>) -> Result<Self> {
        if let Some(j) = degrees.iter().position(Zero::is_zero) {
            return Err(Error::input(format!("degree d_{} is zero", j + 1)));
        }
        Ok(DegreeTuple(degrees))
    }

    pub fn from_u64s(degrees: &[u64]) -> Result<Self> {
        Self::new(degrees.iter().map(|&d| BigUint::from(d)).collect())
    }

    /// Codimension `c`.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `d_j` for `j` in `1..=c`.
    pub fn degree(&self, j: usize) -> &BigUint {
        assert!(j >= 1 && j <= self.0.len(), "degree index {j} out of 1..={}", self.0.len());
        &self.0[j - 1]
    }

    pub fn as_slice(&self) -> &[BigUint] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<BigUint> {
        self.0
    }

    /// `(j, d_j)` pairs with 1-based `j`.
    pub fn indexed(&self) -> impl Iterator<Item = (usize, &BigUint)> {
        self.0.iter().enumerate().map(|(k, d)| (k + 1, d))
    }

    pub fn sum(&self) -> BigUint {
        self.0.iter().sum()
    }
}

impl TryFrom<Vec<crate::json::BigNum>> for DegreeTuple {
    type Error = Error;
    fn try_from(v: Vec<crate::json::BigNum>) -> Result<Self> {
        Self::new(v.into_iter().map(|b| b.0).collect())
    }
}

impl From<DegreeTuple> for Vec<crate::json::BigNum> {
    fn from(d: DegreeTuple) -> Self {
        d.0.into_iter().map(crate::json::BigNum).collect()
    }
}

impl fmt::Display for DegreeTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tuple(f, &self.0)
    }
}

fn write_tuple(f: &mut fmt::Formatter<'_>, xs: &[BigUint]) -> fmt::Result {
    f.write_str("(")?;
    for (k, x) in xs.iter().enumerate() {
        if k > 0 {
            f.write_str(",")?;
        }
        write!(f, "{x}")?;
    }
    f.write_str(")")
}

pub fn gcd_of(values: &[BigUint]) -> Result<BigUint> {
    let (first, rest) = values
        .split_first()
        .ok_or_else(|| Error::input("gcd of an empty list"))?;
    Ok(rest.iter().fold(first.clone(), |g, v| g.gcd(v)))
}

pub fn lcm_of(values: &[BigUint]) -> Result<BigUint> {
    if values.is_empty() {
        return Err(Error::input("lcm of an empty list"));
    }
    Ok(lcm_of_or_one(values))
}

/// lcm with the empty-product convention: `lcm(()) = 1`.
pub fn lcm_of_or_one(values: &[BigUint]) -> BigUint {
    values.iter().fold(BigUint::one(), |l, v| l.lcm(v))
}

/// gcd of the weights at `indices`; `None` for an empty index set.
pub(crate) fn gcd_at(weights: &[BigUint], indices: &[usize]) -> Option<BigUint> {
    let (&first, rest) = indices.split_first()?;
    Some(
        rest.iter()
            .fold(weights[first].clone(), |g, &i| g.gcd(&weights[i])),
    )
}

/// Three-valued semigroup membership: `Unknown` only when the DP would have
/// to run past its cap and no exact shortcut decides the question.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Representability {
    Yes,
    No,
    Unknown,
}

impl Representability {
    pub fn is_yes(self) -> bool {
        self == Representability::Yes
    }
}

fn distinct(weights: &[BigUint]) -> Vec<BigUint> {
    let set: BTreeSet<&BigUint> = weights.iter().collect();
    set.into_iter().cloned().collect()
}

/// Decide whether `d = sum n_i a_i` with all `n_i >= 0`.
///
/// Order of evaluation: `d = 0`, a single weight dividing `d`, the gcd of
/// all weights failing to divide `d`, then a boolean DP over `0..=d` when
/// `d <= cap`.
pub fn is_representable(d: &BigUint, weights: &[BigUint], cap: u64) -> Representability {
    if d.is_zero() {
        return Representability::Yes;
    }
    if let (Some(x), Some(vs)) = (d.to_u64(), weights.iter().map(|w| w.to_u64()).collect::<Option<Vec<u64>>>()) {
        return is_representable_small(x, vs, cap);
    }
    let values = distinct(weights);
    match shortcut(d, &values) {
        Some(r) => r,
        None => match d.to_u64().filter(|&x| x <= cap) {
            Some(x) => {
                if Reachable::new(&small_values(&values, x), x as usize).contains(x as usize) {
                    Representability::Yes
                } else {
                    Representability::No
                }
            }
            None => Representability::Unknown,
        },
    }
}

/// [`is_representable`] on machine integers, same order of evaluation.
fn is_representable_small(d: u64, mut values: Vec<u64>, cap: u64) -> Representability {
    values.sort_unstable();
    values.dedup();
    if values.is_empty() {
        return Representability::No;
    }
    if values.iter().any(|&v| d.is_multiple_of(v)) {
        return Representability::Yes;
    }
    if !d.is_multiple_of(values.iter().fold(0, |g, &v| g.gcd(&v))) {
        return Representability::No;
    }
    if d > cap {
        return Representability::Unknown;
    }
    let small: Vec<usize> = values.iter().filter(|&&v| v <= d).map(|&v| v as usize).collect();
    if Reachable::new(&small, d as usize).contains(d as usize) {
        Representability::Yes
    } else {
        Representability::No
    }
}

fn shortcut(d: &BigUint, values: &[BigUint]) -> Option<Representability> {
    if d.is_zero() {
        return Some(Representability::Yes);
    }
    if values.is_empty() {
        return Some(Representability::No);
    }
    if values.iter().any(|v| d.is_multiple_of(v)) {
        return Some(Representability::Yes);
    }
    let g = values.iter().skip(1).fold(values[0].clone(), |g, v| g.gcd(v));
    if !d.is_multiple_of(&g) {
        return Some(Representability::No);
    }
    None
}

/// Values not exceeding `limit`, as machine integers. Larger values can only
/// appear with coefficient zero.
fn small_values(values: &[BigUint], limit: u64) -> Vec<usize> {
    values
        .iter()
        .filter_map(|v| v.to_u64())
        .filter(|&v| v <= limit)
        .map(|v| v as usize)
        .collect()
}

/// Membership bitset of the semigroup generated by `values`, for `0..=max`.
/// Each value is absorbed by shift-or doubling: after `k` rounds every
/// multiple below `2^k * v` has been added.
#[derive(Clone, Debug)]
pub(crate) struct Reachable(Vec<u64>);

impl Reachable {
    pub(crate) fn new(values: &[usize], max: usize) -> Self {
        let mut bits = vec![0u64; max / 64 + 1];
        bits[0] = 1;
        for &v in values {
            let mut step = v;
            while step != 0 && step <= max {
                shift_or(&mut bits, step);
                step = step.saturating_mul(2);
            }
        }
        Reachable(bits)
    }

    pub(crate) fn contains(&self, n: usize) -> bool {
        self.0.get(n / 64).is_some_and(|w| w >> (n % 64) & 1 == 1)
    }
}

/// `bits |= bits << s`, in place.
fn shift_or(bits: &mut [u64], s: usize) {
    let (q, r) = (s / 64, s % 64);
    for i in (q..bits.len()).rev() {
        let mut w = bits[i - q] << r;
        if r != 0 && i > q {
            w |= bits[i - q - 1] >> (64 - r);
        }
        bits[i] |= w;
    }
}

/// `G(I)`: the 1-based indices `j` for which `d_j` is representable over `weights`.
pub fn representable_degrees(
    weights: &[BigUint],
    degrees: &DegreeTuple,
    cap: u64,
) -> Result<BTreeSet<usize>> {
    let small_ws: Option<Vec<u64>> = weights.iter().map(|w| w.to_u64()).collect();
    let small_ds: Option<Vec<u64>> = degrees.as_slice().iter().map(|d| d.to_u64()).collect();
    if let (Some(ws), Some(ds)) = (small_ws, small_ds) {
        return representable_degrees_small(ws, &ds, cap);
    }
    let values = distinct(weights);
    let mut good = BTreeSet::new();
    let mut pending = Vec::new();
    for (j, d) in degrees.indexed() {
        match shortcut(d, &values) {
            Some(Representability::Yes) => {
                good.insert(j);
            }
            Some(_) => {}
            None => match d.to_u64().filter(|&x| x <= cap) {
                Some(x) => pending.push((j, x as usize)),
                None => {
                    return Err(Error::DpCapExceeded {
                        degree: d.clone(),
                        cap,
                    })
                }
            },
        }
    }
    if let Some(max) = pending.iter().map(|&(_, x)| x).max() {
        let table = Reachable::new(&small_values(&values, max as u64), max);
        good.extend(pending.into_iter().filter(|&(_, x)| table.contains(x)).map(|(j, _)| j));
    }
    Ok(good)
}

fn representable_degrees_small(mut values: Vec<u64>, degrees: &[u64], cap: u64) -> Result<BTreeSet<usize>> {
    values.sort_unstable();
    values.dedup();
    let g = values.iter().fold(0, |g, &v| g.gcd(&v));
    let mut good = BTreeSet::new();
    let mut pending = Vec::new();
    for (k, &d) in degrees.iter().enumerate() {
        if values.is_empty() || d % g != 0 {
            continue;
        }
        if values.iter().any(|&v| d % v == 0) {
            good.insert(k + 1);
        } else if d <= cap {
            pending.push((k + 1, d as usize));
        } else {
            return Err(Error::DpCapExceeded {
                degree: d.into(),
                cap,
            });
        }
    }
    if let Some(max) = pending.iter().map(|&(_, x)| x).max() {
        let small: Vec<usize> = values.iter().filter(|&&v| v as usize <= max).map(|&v| v as usize).collect();
        let table = Reachable::new(&small, max);
        good.extend(pending.into_iter().filter(|&(_, x)| table.contains(x)).map(|(j, _)| j));
    }
    Ok(good)
}

/// All gcds of nonempty subsets of `values`, with 1 removed.
///
/// For a weight tuple this is `im(Phi)` of its singular-locus complex.
pub fn gcd_closure(values: &[BigUint]) -> BTreeSet<BigUint> {
    let mut closure: BTreeSet<BigUint> = BTreeSet::new();
    for v in values.iter().filter(|v| !v.is_one()) {
        let mut fresh: Vec<BigUint> = closure
            .iter()
            .map(|g| g.gcd(v))
            .filter(|g| !g.is_one())
            .collect();
        fresh.push(v.clone());
        closure.extend(fresh);
    }
    closure
}

/// A finite set of positive integers ordered by divisibility.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisibilityPoset {
    elements: Vec<BigUint>,
}

impl DivisibilityPoset {
    pub fn new(elements: impl IntoIterator<Item = BigUint>) -> Result<Self> {
        let set: BTreeSet<BigUint> = elements.into_iter().collect();
        if set.iter().any(Zero::is_zero) {
            return Err(Error::input("poset elements must be positive"));
        }
        Ok(DivisibilityPoset {
            elements: set.into_iter().collect(),
        })
    }

    pub fn from_u64s(elements: &[u64]) -> Result<Self> {
        Self::new(elements.iter().map(|&e| BigUint::from(e)))
    }

    /// Elements in ascending numeric order. Divisors precede multiples, so
    /// this is also a linear extension of the divisibility order.
    pub fn elements(&self) -> &[BigUint] {
        &self.elements
    }

    pub fn contains(&self, x: &BigUint) -> bool {
        self.elements.binary_search(x).is_ok()
    }

    /// Maximal proper divisors of `b` inside the poset.
    pub fn covers(&self, b: &BigUint) -> Result<Vec<BigUint>> {
        if !self.contains(b) {
            return Err(Error::input(format!("{b} is not an element of the poset")));
        }
        let below: Vec<&BigUint> = self
            .elements
            .iter()
            .filter(|q| *q != b && b.is_multiple_of(q))
            .collect();
        Ok(below
            .iter()
            .filter(|q| {
                !below
                    .iter()
                    .any(|r| r != *q && r.is_multiple_of(q))
            })
            .map(|q| (*q).clone())
            .collect())
    }

    /// Elements with no proper divisor in the poset.
    pub fn minimal_elements(&self) -> Vec<BigUint> {
        self.elements
            .iter()
            .filter(|b| {
                !self
                    .elements
                    .iter()
                    .any(|q| q != *b && b.is_multiple_of(q))
            })
            .cloned()
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(xs: &[u64]) -> Vec<BigUint> {
        xs.iter().map(|&x| BigUint::from(x)).collect()
    }

    fn rep(d: u64, ws: &[u64]) -> Representability {
        is_representable(&BigUint::from(d), &big(ws), DEFAULT_DP_CAP)
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(gcd_of(&big(&[6, 10])).unwrap(), BigUint::from(2u32));
        assert_eq!(gcd_of(&big(&[6, 10, 15])).unwrap(), BigUint::from(1u32));
        assert_eq!(gcd_of(&big(&[30])).unwrap(), BigUint::from(30u32));
        assert!(matches!(gcd_of(&[]), Err(Error::Input(_))));
    }

    #[test]
    fn lcm_examples() {
        assert_eq!(lcm_of(&big(&[2, 3, 5])).unwrap(), BigUint::from(30u32));
        assert_eq!(lcm_of(&big(&[6, 10])).unwrap(), BigUint::from(30u32));
        assert!(lcm_of(&[]).is_err());
        assert_eq!(lcm_of_or_one(&[]), BigUint::one());
    }

    #[test]
    fn lcm_does_not_overflow() {
        let primes = big(&[
            2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71,
        ]);
        let l = lcm_of(&primes).unwrap();
        assert_eq!(l.to_string(), "557940830126698960967415390");
    }

    #[test]
    fn representability_examples() {
        assert_eq!(rep(16, &[6, 10]), Representability::Yes);
        assert_eq!(rep(21, &[6, 10]), Representability::No);
        assert_eq!(rep(0, &[7]), Representability::Yes);
        assert_eq!(rep(0, &[]), Representability::Yes);
        assert_eq!(rep(25, &[10, 15]), Representability::Yes);
        assert_eq!(rep(5, &[]), Representability::No);
    }

    #[test]
    fn representability_above_cap() {
        let ws = big(&[6, 10]);
        // 2 * 10^6 + 2 is even but below the cap nothing decides it except the DP.
        let d = BigUint::from(2_000_002u64);
        assert_eq!(is_representable(&d, &ws, 1000), Representability::Unknown);
        // Divisibility shortcut fires regardless of size.
        let d = BigUint::from(10u32).pow(30);
        assert_eq!(is_representable(&d, &ws, 1000), Representability::Yes);
        // So does the gcd obstruction.
        let d = BigUint::from(10u32).pow(30) + 1u32;
        assert_eq!(is_representable(&d, &ws, 1000), Representability::No);
    }

    #[test]
    fn representable_degrees_examples() {
        let mu = DegreeTuple::from_u64s(&[16, 21, 25, 30]).unwrap();
        let all = representable_degrees(&big(&[6, 10, 15]), &mu, DEFAULT_DP_CAP).unwrap();
        assert_eq!(all, BTreeSet::from([1, 2, 3, 4]));
        let six = representable_degrees(&big(&[6]), &mu, DEFAULT_DP_CAP).unwrap();
        assert_eq!(six, BTreeSet::from([4]));
        let seven = DegreeTuple::from_u64s(&[7]).unwrap();
        assert_eq!(
            representable_degrees(&big(&[7]), &seven, DEFAULT_DP_CAP).unwrap(),
            BTreeSet::from([1])
        );
    }

    #[test]
    fn representable_degrees_reports_cap() {
        let mu = DegreeTuple::from_u64s(&[2_000_002]).unwrap();
        match representable_degrees(&big(&[6, 10]), &mu, 1000) {
            Err(Error::DpCapExceeded { degree, cap }) => {
                assert_eq!(degree, BigUint::from(2_000_002u64));
                assert_eq!(cap, 1000);
            }
            other => panic!("expected cap error, got {other:?}"),
        }
    }

    #[test]
    fn covers_examples() {
        let p = DivisibilityPoset::from_u64s(&[2, 3, 5, 6, 10, 15]).unwrap();
        assert_eq!(p.covers(&BigUint::from(6u32)).unwrap(), big(&[2, 3]));
        assert!(p.covers(&BigUint::from(2u32)).unwrap().is_empty());
        let chain = DivisibilityPoset::from_u64s(&[2, 4, 8]).unwrap();
        assert_eq!(chain.covers(&BigUint::from(8u32)).unwrap(), big(&[4]));
        assert!(chain.covers(&BigUint::from(3u32)).is_err());
        assert_eq!(chain.minimal_elements(), big(&[2]));
    }

    #[test]
    fn gcd_closure_of_figure_weights() {
        let closure = gcd_closure(&big(&[1, 1, 6, 10, 15]));
        assert_eq!(closure.into_iter().collect::<Vec<_>>(), big(&[2, 3, 5, 6, 10, 15]));
        assert!(gcd_closure(&big(&[1, 1, 1])).is_empty());
    }

    #[test]
    fn tuples_reject_zero() {
        assert!(WeightTuple::from_u64s(&[1, 0]).is_err());
        assert!(WeightTuple::from_u64s(&[]).is_err());
        assert!(DegreeTuple::from_u64s(&[3, 0]).is_err());
        let mu = DegreeTuple::from_u64s(&[16, 21]).unwrap();
        assert_eq!(mu.degree(2), &BigUint::from(21u32));
    }

    #[test]
    fn bitset_semigroup_matches_plain_dp() {
        for values in [vec![65usize, 131], vec![64, 100, 7], vec![3], vec![127, 128, 129], vec![]] {
            let max = 1500;
            let mut plain = vec![false; max + 1];
            plain[0] = true;
            for n in 1..=max {
                plain[n] = values.iter().any(|&v| v <= n && plain[n - v]);
            }
            let bits = Reachable::new(&values, max);
            for (n, &expected) in plain.iter().enumerate() {
                assert_eq!(bits.contains(n), expected, "{values:?} at {n}");
            }
        }
    }
}
