//! Seeded instance generators shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use wciq::{Complex, DegreeTuple, WeightTuple};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `rho = (1^(k), q_1^(m_1), ..., q_l^(m_l))` with pairwise coprime `q`,
/// and `mu` whose first `m_q` degrees are multiples of `q`, scaled so that
/// no degree equals a weight. The Fano index is drawn from `1..=3`.
pub fn coprime_instance(rng: &mut impl Rng) -> (WeightTuple, DegreeTuple) {
    const POOL: [u64; 10] = [2, 3, 4, 5, 7, 8, 9, 11, 13, 25];
    let l = rng.gen_range(1..=3);
    let mut qs: Vec<u64> = Vec::new();
    let mut pool = POOL.to_vec();
    pool.shuffle(rng);
    for q in pool {
        if qs.len() < l && qs.iter().all(|&p| gcd(p, q) == 1) {
            qs.push(q);
        }
    }
    let mult: Vec<usize> = qs.iter().map(|_| rng.gen_range(1..=3)).collect();
    let c = mult.iter().copied().max().unwrap() + rng.gen_range(0..=1);
    let mut heavy = Vec::new();
    for (&q, &m) in qs.iter().zip(&mult) {
        heavy.extend(std::iter::repeat_n(q, m));
    }
    let mut degrees = Vec::with_capacity(c);
    for j in 0..c {
        let base: u64 = qs
            .iter()
            .zip(&mult)
            .filter(|&(_, &m)| j < m)
            .map(|(&q, _)| q)
            .product();
        let mut d = base * rng.gen_range(2..=3);
        if base == 1 {
            while heavy.contains(&d) {
                d += 1;
            }
        }
        degrees.push(d);
    }
    let fano = rng.gen_range(1..=3u64);
    let ones = degrees.iter().sum::<u64>() - heavy.iter().sum::<u64>() + fano;
    (
        WeightTuple::with_ones(ones as usize, &heavy).unwrap(),
        DegreeTuple::from_u64s(&degrees).unwrap(),
    )
}

/// At most `max_vertices` vertices and `max_generators` random generating
/// faces of size at most 4.
pub fn random_complex(rng: &mut impl Rng, max_vertices: usize, max_generators: usize) -> Complex {
    let n = rng.gen_range(1..=max_vertices);
    let k = rng.gen_range(0..=max_generators);
    let gens = (0..k).map(|_| {
        let size = rng.gen_range(1..=n.min(4));
        let mut verts: Vec<usize> = (0..n).collect();
        verts.shuffle(rng);
        verts.truncate(size);
        verts
    });
    let gens: Vec<Vec<usize>> = gens.collect();
    Complex::new(n, gens).unwrap()
}

/// A complex `C`, a complex `D` and a surjective vertex map `C -> D` that is
/// injective on faces: a random proper colouring of the 1-skeleton of `C`,
/// with `D` generated by the images of the facets of `C`.
pub fn random_map_case(rng: &mut impl Rng) -> (Complex, Complex, BTreeMap<usize, usize>) {
    loop {
        let c = random_complex(rng, 8, 12);
        let verts = c.vertices();
        if verts.is_empty() {
            continue;
        }
        let mut order = verts.clone();
        order.shuffle(rng);
        let mut colour: BTreeMap<usize, usize> = BTreeMap::new();
        let mut used = 0;
        for v in order {
            let blocked: BTreeSet<usize> = c
                .facets()
                .iter()
                .filter(|f| f.contains(&v))
                .flat_map(|f| f.iter().filter_map(|u| colour.get(u).copied()))
                .collect();
            let free: Vec<usize> = (0..used).filter(|x| !blocked.contains(x)).collect();
            let x = if free.is_empty() || rng.gen_bool(0.2) {
                used += 1;
                used - 1
            } else {
                *free.choose(rng).unwrap()
            };
            colour.insert(v, x);
        }
        let images: Vec<Vec<usize>> = c
            .facets()
            .iter()
            .map(|f| f.iter().map(|v| colour[v]).collect::<BTreeSet<_>>().into_iter().collect())
            .collect();
        let d = Complex::new(used, images).unwrap();
        return (c, d, colour);
    }
}

/// A random pair with up to 6 weights above 1 (values at most 30) and up
/// to 4 degrees at most 60, biased towards degrees divisible by weights.
pub fn random_pair(rng: &mut impl Rng) -> (WeightTuple, DegreeTuple) {
    let h = rng.gen_range(1..=6);
    let heavy: Vec<u64> = (0..h).map(|_| rng.gen_range(2..=30)).collect();
    let ones = rng.gen_range(0..=3);
    let c = rng.gen_range(1..=4);
    let degrees: Vec<u64> = (0..c)
        .map(|_| {
            if rng.gen_bool(0.5) {
                let a = *heavy.choose(rng).unwrap();
                a * rng.gen_range(1..=(60 / a).max(1))
            } else {
                rng.gen_range(2..=60)
            }
        })
        .collect();
    (
        WeightTuple::with_ones(ones, &heavy).unwrap(),
        DegreeTuple::from_u64s(&degrees).unwrap(),
    )
}

pub fn to_u64s(xs: &[num_bigint::BigUint]) -> Vec<u64> {
    xs.iter().map(|x| u64::try_from(x).unwrap()).collect()
}
