use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{CandidateRecord, SearchSpace, Side};
use crate::constraints::psd_criterion_at;
use crate::error::{Error, Result};
use crate::seqcore::PmSequence;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct GenerateStats {
    /// Distinct orbit unions drawn.
    pub drawn: usize,
    /// Of those, rejected by the PSD criterion.
    pub psd_rejected: usize,
    /// Whether the whole candidate space was enumerated instead of sampled.
    pub exhaustive: bool,
}

/// `reach[i][t]`: some subset of `sizes[i..]` sums to `t`.
fn suffix_reach(sizes: &[usize], target: usize) -> Vec<Vec<bool>> {
    let n = sizes.len();
    let mut reach = vec![vec![false; target + 1]; n + 1];
    reach[n][0] = true;
    for i in (0..n).rev() {
        for t in 0..=target {
            reach[i][t] = reach[i + 1][t] || (sizes[i] <= t && reach[i + 1][t - sizes[i]]);
        }
    }
    reach
}

/// Number of orbit subsets whose sizes add up to `target`, saturating.
pub fn count_orbit_unions(space: &SearchSpace, target: usize) -> u128 {
    let mut ways = vec![0u128; target + 1];
    ways[0] = 1;
    for orbit in space.orbits().orbits() {
        let size = orbit.len();
        for t in (size..=target).rev() {
            ways[t] = ways[t].saturating_add(ways[t - size]);
        }
    }
    ways[target]
}

struct Sampler<'a> {
    space: &'a SearchSpace,
    side: Side,
    target: usize,
    labels: Vec<usize>,
    sizes: Vec<usize>,
}

impl<'a> Sampler<'a> {
    fn new(space: &'a SearchSpace, side: Side) -> Result<Self> {
        let target = space.target_size(side);
        let orbits = space.orbits().orbits();
        let labels: Vec<usize> = orbits.iter().map(|o| o[0]).collect();
        let sizes: Vec<usize> = orbits.iter().map(|o| o.len()).collect();
        if !suffix_reach(&sizes, target)[0][target] {
            return Err(Error::UnattainableSize { target });
        }
        Ok(Sampler {
            space,
            side,
            target,
            labels,
            sizes,
        })
    }

    /// A random feasible label set: walk a shuffled orbit order, taking or
    /// skipping each orbit at random among the choices that stay feasible.
    fn draw(&self, rng: &mut ChaCha8Rng) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.sizes.len()).collect();
        order.shuffle(rng);
        let sizes: Vec<usize> = order.iter().map(|&i| self.sizes[i]).collect();
        let reach = suffix_reach(&sizes, self.target);
        let mut remaining = self.target;
        let mut chosen = Vec::new();
        for (pos, &i) in order.iter().enumerate() {
            let size = sizes[pos];
            let can_skip = reach[pos + 1][remaining];
            let can_take = size <= remaining && reach[pos + 1][remaining - size];
            let take = match (can_take, can_skip) {
                (true, true) => rng.gen_bool(0.5),
                (take, _) => take,
            };
            if take {
                chosen.push(self.labels[i]);
                remaining -= size;
            }
        }
        chosen.sort_unstable();
        chosen
    }

    /// Every feasible label set, in lexicographic order of orbit position.
    fn enumerate(&self) -> Vec<Vec<usize>> {
        let reach = suffix_reach(&self.sizes, self.target);
        let mut out = Vec::new();
        let mut stack = Vec::new();
        self.enumerate_from(0, self.target, &reach, &mut stack, &mut out);
        out
    }

    fn enumerate_from(
        &self,
        pos: usize,
        remaining: usize,
        reach: &[Vec<bool>],
        stack: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if pos == self.sizes.len() {
            if remaining == 0 {
                out.push(stack.clone());
            }
            return;
        }
        let size = self.sizes[pos];
        if size <= remaining && reach[pos + 1][remaining - size] {
            stack.push(self.labels[pos]);
            self.enumerate_from(pos + 1, remaining - size, reach, stack, out);
            stack.pop();
        }
        if reach[pos + 1][remaining] {
            self.enumerate_from(pos + 1, remaining, reach, stack, out);
        }
    }

    fn accept(&self, labels: &[usize]) -> Option<CandidateRecord> {
        let support = self.space.orbits().union_of(labels);
        let seq = PmSequence::from_set(self.space.params().v, &support).ok()?;
        // PSD is constant on H*-orbits, so the representatives decide.
        if psd_criterion_at(&seq, self.space.fingerprint_reps()) {
            Some(self.space.record(self.side, labels))
        } else {
            None
        }
    }
}

/// Up to `count` distinct candidates for one side, each a union of orbits of
/// the right size that passes the PSD criterion.
///
/// When the whole space of orbit unions holds at most `count` sets it is
/// enumerated instead of sampled. Sampling stops after
/// [`default_max_draws`] draws. The result depends only on
/// `(space, side, count, seed)`.
pub fn generate_candidates(
    space: &SearchSpace,
    side: Side,
    count: usize,
    seed: u64,
) -> Result<(Vec<CandidateRecord>, GenerateStats)> {
    generate_with_budget(space, side, count, seed, default_max_draws(count))
}

/// Draw budget used when none is given: `1024·count + 4096`.
pub fn default_max_draws(count: usize) -> usize {
    count.saturating_mul(1024).saturating_add(4096)
}

/// [`generate_candidates`] with an explicit cap on random draws.
pub fn generate_with_budget(
    space: &SearchSpace,
    side: Side,
    count: usize,
    seed: u64,
    max_draws: usize,
) -> Result<(Vec<CandidateRecord>, GenerateStats)> {
    let sampler = Sampler::new(space, side)?;
    let mut stats = GenerateStats::default();
    let mut out = Vec::new();
    if count == 0 {
        return Ok((out, stats));
    }

    let total = count_orbit_unions(space, sampler.target);
    if total <= count as u128 {
        stats.exhaustive = true;
        for labels in sampler.enumerate() {
            stats.drawn += 1;
            match sampler.accept(&labels) {
                Some(rec) => out.push(rec),
                None => stats.psd_rejected += 1,
            }
        }
        return Ok((out, stats));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = HashSet::new();
    for _ in 0..max_draws {
        if out.len() == count {
            break;
        }
        let labels = sampler.draw(&mut rng);
        if !seen.insert(labels.clone()) {
            continue;
        }
        stats.drawn += 1;
        match sampler.accept(&labels) {
            Some(rec) => out.push(rec),
            None => stats.psd_rejected += 1,
        }
    }
    Ok((out, stats))
}

/// [`generate_candidates`] split over `workers` independent streams; worker
/// `w` uses seed `seed + w`. Shards are concatenated in worker order with
/// duplicates across shards dropped. Each worker gets its share of
/// `max_draws`.
pub fn generate_parallel(
    space: &SearchSpace,
    side: Side,
    count: usize,
    seed: u64,
    workers: usize,
    max_draws: Option<usize>,
) -> Result<(Vec<CandidateRecord>, GenerateStats)> {
    let workers = workers.max(1);
    let max_draws = max_draws.unwrap_or_else(|| default_max_draws(count));
    let target = space.target_size(side);
    if workers == 1 || count_orbit_unions(space, target) <= count as u128 {
        return generate_with_budget(space, side, count, seed, max_draws);
    }
    let shards = (0..workers)
        .into_par_iter()
        .map(|w| {
            let share = count / workers + usize::from(w < count % workers);
            let budget = max_draws / workers + usize::from(w < max_draws % workers);
            generate_with_budget(space, side, share, seed.wrapping_add(w as u64), budget)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let mut stats = GenerateStats::default();
    for (records, shard_stats) in shards {
        stats.drawn += shard_stats.drawn;
        stats.psd_rejected += shard_stats.psd_rejected;
        for rec in records {
            if seen.insert(rec.labels.clone()) {
                out.push(rec);
            }
        }
    }
    Ok((out, stats))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constraints::{psd_criterion, ParamSet};

    fn space13() -> SearchSpace {
        SearchSpace::new(ParamSet::new(13, 6, 3).unwrap(), &[3]).unwrap()
    }

    #[test]
    fn v13_side_a_space() {
        let space = space13();
        assert_eq!(count_orbit_unions(&space, 6), 6);
        let (recs, stats) = generate_candidates(&space, Side::A, 100, 1).unwrap();
        assert!(stats.exhaustive);
        assert_eq!(stats.drawn, 6);
        assert_eq!(recs.len() + stats.psd_rejected, 6);
        for rec in &recs {
            assert_eq!(rec.labels.len(), 2);
            assert!(!rec.labels.contains(&0));
        }
    }

    #[test]
    fn v131_side_b_uses_eleven_orbits() {
        let params = ParamSet::new(131, 61, 55).unwrap();
        let space = SearchSpace::new(params, &[53]).unwrap();
        let (recs, _) = generate_candidates(&space, Side::B, 20, 9).unwrap();
        assert!(!recs.is_empty());
        for rec in &recs {
            assert_eq!(rec.labels.len(), 11);
            assert_eq!(space.orbits().union_of(&rec.labels).len(), 55);
            let seq = PmSequence::from_set(131, &space.orbits().union_of(&rec.labels)).unwrap();
            assert!(psd_criterion(&seq));
        }
    }

    #[test]
    fn zero_count_is_empty() {
        let (recs, stats) = generate_candidates(&space13(), Side::A, 0, 1).unwrap();
        assert!(recs.is_empty());
        assert_eq!(stats.drawn, 0);
    }

    #[test]
    fn unattainable_size_rejected_up_front() {
        // H = {1,5,8,12} gives orbit sizes 1,4,4,4, so no union has size 6.
        let params = ParamSet::new(13, 6, 3).unwrap();
        let space = SearchSpace::new(params, &[5]).unwrap();
        assert_eq!(space.orbits().subgroup().order(), 4);
        assert!(matches!(
            generate_candidates(&space, Side::A, 5, 1),
            Err(Error::UnattainableSize { target: 6 })
        ));
    }

    #[test]
    fn sampling_is_deterministic_and_distinct() {
        let params = ParamSet::new(93, 45, 37).unwrap();
        let space = SearchSpace::new(params, &[25]).unwrap();
        let (a, _) = generate_candidates(&space, Side::A, 50, 42).unwrap();
        let (b, _) = generate_candidates(&space, Side::A, 50, 42).unwrap();
        assert_eq!(a, b);
        let labels: HashSet<_> = a.iter().map(|r| r.labels.clone()).collect();
        assert_eq!(labels.len(), a.len());
        assert_eq!(a.len(), 50);
        let (c, _) = generate_candidates(&space, Side::A, 50, 43).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn parallel_is_deterministic() {
        let params = ParamSet::new(93, 45, 37).unwrap();
        let space = SearchSpace::new(params, &[25]).unwrap();
        let (a, _) = generate_parallel(&space, Side::B, 40, 5, 4, None).unwrap();
        let (b, _) = generate_parallel(&space, Side::B, 40, 5, 4, None).unwrap();
        assert_eq!(a, b);
        assert!(!a.is_empty() && a.len() <= 40);
    }
}
