//! Random generators of cone expressions. Every returned map lies in the
//! cone by construction or by a membership certificate; all are normalized
//! to unit Frobenius norm of the Choi matrix.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::expr::{BaseCone, ConeExpr};
use super::member::member;
use super::verdict::{MemberConfig, Status};
use crate::error::{Error, Result};
use crate::family::{self, PhiLambdaSpec};
use crate::linalg::{complex_gaussian, random_low_rank, seeded_rng, SeededRng};
use crate::superop::{compose, MapDims, SuperOperator};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSet {
    pub maps: Vec<SuperOperator>,
    pub requested: usize,
    pub notes: Vec<String>,
}

/// Samples `count` maps in `c` at the given dimensions.
pub fn sample_generators(c: &ConeExpr, dims: MapDims, count: usize, seed: u64) -> Result<GeneratorSet> {
    if count == 0 {
        return Err(Error::InvalidConfig("count must be at least 1".into()));
    }
    let c = c.normalize(Some(dims))?;
    sample_with(&c, dims, count, &mut seeded_rng(seed))
}

pub(crate) fn sample_with(c: &ConeExpr, dims: MapDims, count: usize, rng: &mut SeededRng) -> Result<GeneratorSet> {
    match c {
        ConeExpr::Base(base) => sample_base_with(*base, dims, count, rng),
        ConeExpr::Transposed(child) => {
            let mut set = sample_with(child, dims, count, rng)?;
            set.maps = set.maps.iter().map(SuperOperator::compose_transpose).collect();
            Ok(set)
        }
        ConeExpr::Meet(a, b) => sample_meet(a, b, dims, count, rng),
        ConeExpr::Join(a, b) => {
            let left = sample_with(a, dims, count, rng)?;
            let right = sample_with(b, dims, count, rng)?;
            let mut notes = left.notes;
            notes.extend(right.notes);
            notes.push(format!("join({a},{b}): {count} random convex pairs; extreme rays of the hull not targeted"));
            let maps = left
                .maps
                .iter()
                .zip(&right.maps)
                .map(|(x, y)| {
                    let w: f64 = rng.random();
                    x.scaled(w).try_add(&y.scaled(1.0 - w)).map(|s| s.normalized())
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(GeneratorSet { maps, requested: count, notes })
        }
        ConeExpr::Dual(_) => Err(Error::Grammar("sampling needs a normalized expression".into())),
    }
}

fn sample_meet(a: &ConeExpr, b: &ConeExpr, dims: MapDims, count: usize, rng: &mut SeededRng) -> Result<GeneratorSet> {
    let cheap = MemberConfig { samples: 16, restarts: 4, max_iters: 50, seed: rng.random(), ..MemberConfig::default() };
    let left = sample_with(a, dims, count, rng)?;
    let right = sample_with(b, dims, count, rng)?;
    let mut notes = left.notes;
    notes.extend(right.notes);
    let mut maps = Vec::with_capacity(count);
    let candidates = left.maps.into_iter().map(|m| (m, b)).zip(right.maps.into_iter().map(|m| (m, a)));
    for ((x, other_x), (y, other_y)) in candidates {
        for (map, other) in [(x, other_x), (y, other_y)] {
            if maps.len() < count && member(&map, other, &cheap)?.status == Status::Member {
                maps.push(map);
            }
        }
    }
    if maps.len() < count {
        notes.push(format!(
            "meet: {} of {} generators certified in both cones; the rest are superpositive maps",
            maps.len(),
            count
        ));
        let fill = sample_base_with(BaseCone::SuperPositive(1), dims, count - maps.len(), rng)?;
        maps.extend(fill.maps);
    }
    Ok(GeneratorSet { maps, requested: count, notes })
}

fn gaussian_cp<R: Rng + ?Sized>(dims: MapDims, rng: &mut R) -> SuperOperator {
    let count = rng.random_range(1..=dims.m * dims.n);
    SuperOperator::random_cp(dims, count, rng).normalized()
}

pub(crate) fn sample_base_with(
    base: BaseCone,
    dims: MapDims,
    count: usize,
    rng: &mut SeededRng,
) -> Result<GeneratorSet> {
    let (m, n) = (dims.m, dims.n);
    let mut notes = Vec::new();
    let maps = match base {
        BaseCone::CompletelyPositive => (0..count).map(|_| gaussian_cp(dims, rng)).collect(),
        BaseCone::SuperPositive(k) if k >= dims.min() => (0..count).map(|_| gaussian_cp(dims, rng)).collect(),
        BaseCone::Positive(k) if k >= dims.min() => (0..count).map(|_| gaussian_cp(dims, rng)).collect(),
        BaseCone::SuperPositive(k) => {
            (0..count).map(|_| SuperOperator::conjugation(&random_low_rank(n, m, k, rng)).normalized()).collect()
        }
        BaseCone::Positive(k) => {
            notes.push(format!(
                "P_{k}: conjugations, conjugated boundary maps Tr − Ad_W/‖W‖²_({k}){}",
                if k == 1 { " and conjugated transpositions" } else { " and interior family maps" }
            ));
            let mut maps = Vec::with_capacity(count);
            for i in 0..count {
                let map = match i % 3 {
                    0 => SuperOperator::conjugation(&complex_gaussian(n, m, rng)),
                    1 => {
                        let w = complex_gaussian(n, m, rng);
                        let threshold = family::k_positivity_threshold(&w, k)?;
                        conjugate_both(&family::build(&PhiLambdaSpec::new(w, threshold)?), rng)?
                    }
                    _ if k == 1 => {
                        let a = SuperOperator::conjugation(&complex_gaussian(n, m, rng));
                        let b = SuperOperator::conjugation(&complex_gaussian(m, m, rng));
                        compose(&a, &compose(&SuperOperator::transposition(m), &b)?)?
                    }
                    _ => {
                        let w = complex_gaussian(n, m, rng);
                        let lo = family::cp_threshold(&w)?;
                        let hi = family::k_positivity_threshold(&w, k)?;
                        let lambda = lo + (hi - lo) * rng.random::<f64>();
                        conjugate_both(&family::build(&PhiLambdaSpec::new(w, lambda)?), rng)?
                    }
                };
                maps.push(map.normalized());
            }
            maps
        }
    };
    Ok(GeneratorSet { maps, requested: count, notes })
}

/// `Ad_A∘Φ∘Ad_B` with Gaussian `A`, `B`.
fn conjugate_both(phi: &SuperOperator, rng: &mut SeededRng) -> Result<SuperOperator> {
    let MapDims { m, n } = phi.dims();
    let a = SuperOperator::conjugation(&complex_gaussian(n, n, rng));
    let b = SuperOperator::conjugation(&complex_gaussian(m, m, rng));
    compose(&a, &compose(phi, &b)?)
}
