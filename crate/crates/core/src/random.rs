//! Exact random generation of rationals, functions, measures and maps.
//!
//! Everything is drawn from integer ranges; no floating point is involved, so
//! generated measures sum to exactly one.

use std::sync::Arc;

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::measure::Measure;
use crate::rational::Rat;
use crate::sigma::{FinSpace, IFunction, MeasMap, PointSet, Space};

pub type CaseRng = ChaCha8Rng;

/// Default bound on denominators of random rationals.
pub const DEFAULT_MAX_DENOM: u64 = 64;

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn fnv1a(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}

/// Independent stream for one case of one property.
pub fn case_rng(seed: u64, property: &str, case: u64) -> CaseRng {
    let s = splitmix(splitmix(seed ^ fnv1a(property)).wrapping_add(case));
    ChaCha8Rng::seed_from_u64(s)
}

pub fn seeded(seed: u64) -> CaseRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform rational in [0,1] with denominator at most `max_denom`.
pub fn unit_rat<R: Rng>(rng: &mut R, max_denom: u64) -> Rat {
    let q = rng.gen_range(1..=max_denom.max(1));
    let p = rng.gen_range(0..=q);
    Rat::new(BigInt::from(p), BigInt::from(q))
}

/// Rational in [−1,1] with denominator at most `max_denom`.
pub fn signed_rat<R: Rng>(rng: &mut R, max_denom: u64) -> Rat {
    let q = rng.gen_range(1..=max_denom.max(1)) as i64;
    let p = rng.gen_range(-q..=q);
    Rat::new(BigInt::from(p), BigInt::from(q))
}

/// Nonnegative weights summing to exactly one: a random integer composition, normalized.
/// Some parts are forced to zero so sparse measures show up.
pub fn simplex_point<R: Rng>(rng: &mut R, n: usize, max_denom: u64) -> Vec<Rat> {
    loop {
        let parts: Vec<u64> = (0..n)
            .map(|_| if rng.gen_ratio(1, 5) { 0 } else { rng.gen_range(0..=max_denom) })
            .collect();
        let total: u64 = parts.iter().sum();
        if total > 0 {
            return parts
                .into_iter()
                .map(|p| Rat::new(BigInt::from(p), BigInt::from(total)))
                .collect();
        }
    }
}

/// A carrier of `1..=max_carrier` points with a random generated σ-algebra.
pub fn space<R: Rng>(rng: &mut R, max_carrier: usize) -> FinSpace {
    let n = rng.gen_range(1..=max_carrier.max(1));
    space_of_size(rng, n)
}

pub fn space_of_size<R: Rng>(rng: &mut R, n: usize) -> FinSpace {
    let labels: Vec<String> = (0..n).map(|i| format!("p{i}")).collect();
    if rng.gen_ratio(1, 4) {
        return FinSpace::discrete(&labels).expect("labels distinct");
    }
    let gens: Vec<PointSet> = (0..rng.gen_range(0..=3))
        .map(|_| PointSet(rng.gen::<u64>() & PointSet::full(n).0))
        .collect();
    FinSpace::from_generator_sets(labels, &gens)
}

/// A space with at least `min_atoms` atoms (discrete on `min_atoms..=max` points when needed).
pub fn space_with_atoms<R: Rng>(rng: &mut R, min_atoms: usize, max_carrier: usize) -> FinSpace {
    for _ in 0..16 {
        let s = space(rng, max_carrier);
        if s.num_atoms() >= min_atoms {
            return s;
        }
    }
    FinSpace::discrete_n(rng.gen_range(min_atoms..=max_carrier.max(min_atoms)))
}

pub fn ifunction<R: Rng>(rng: &mut R, space: &Space, max_denom: u64) -> IFunction {
    let values = (0..space.num_atoms()).map(|_| unit_rat(rng, max_denom)).collect();
    IFunction::new(space.clone(), values).expect("values drawn from [0,1]")
}

pub fn measure<R: Rng>(rng: &mut R, space: &Space, max_denom: u64) -> Measure {
    Measure::new(space.clone(), simplex_point(rng, space.num_atoms(), max_denom)).expect("simplex point")
}

/// A measurable map: each domain atom goes to one codomain point.
pub fn meas_map<R: Rng>(rng: &mut R, dom: &Space, cod: &Space) -> MeasMap {
    let targets: Vec<usize> = (0..dom.num_atoms()).map(|_| rng.gen_range(0..cod.len())).collect();
    let table = (0..dom.len()).map(|p| targets[dom.atom_of(p)]).collect();
    MeasMap::new(dom.clone(), cod.clone(), table).expect("atomwise maps are measurable")
}

/// Arbitrary table, measurable or not.
pub fn raw_table<R: Rng>(rng: &mut R, dom: &FinSpace, cod: &FinSpace) -> Vec<usize> {
    (0..dom.len()).map(|_| rng.gen_range(0..cod.len())).collect()
}

pub fn shared(space: FinSpace) -> Space {
    Arc::new(space)
}

pub fn pick<'a, T, R: Rng>(rng: &mut R, xs: &'a [T]) -> &'a T {
    xs.choose(rng).expect("nonempty choice")
}
