//! Repetition counts, random pairing and coverage-preserving ordering of
//! pickup/dropoff node pairs.
//!
//! Nodes are indexed `0..|V|-1` over the non-depot locations here; graph
//! node ids are these indexes plus one.

use thiserror::Error;

use super::rng::GenRng;

pub const DEFAULT_MAX_RESHUFFLES: u64 = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PairingError {
    #[error("cannot select {num_nondepot} nodes at least once with only {n} requests")]
    InfeasibleRepetition { num_nondepot: usize, n: usize },
    #[error("repetition counts sum to {sum}, expected {expected}")]
    CountMismatch { sum: u64, expected: u64 },
    #[error("no valid pairing after {attempts} shuffles")]
    PairingStalled { attempts: u64 },
    #[error("pair ordering stalled with {remaining} pairs left (count corruption)")]
    SortStalled { remaining: usize },
}

/// How the tail step of the ordering updates the second endpoint's count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SortMode {
    /// Decrement each endpoint's own count.
    #[default]
    Corrected,
    /// Replay the published pseudocode literally: the second endpoint's
    /// count is set to the first endpoint's count minus one.
    Verbatim,
}

/// Pairs ordered so that truncating from the end keeps every node covered
/// for as long as the prefix is at least `head_len` long.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairFamily {
    pub sorted_pairs: Vec<(usize, usize)>,
    pub counts: Vec<u32>,
    pub head_len: usize,
}

impl PairFamily {
    /// Nodes (non-depot indexes) that appear in none of the first `len` pairs.
    pub fn uncovered_by_prefix(&self, len: usize) -> Vec<usize> {
        let mut seen = vec![false; self.counts.len()];
        for &(a, b) in self.sorted_pairs.iter().take(len) {
            seen[a] = true;
            seen[b] = true;
        }
        (0..seen.len()).filter(|&i| !seen[i]).collect()
    }
}

/// Starts every node at one selection and adds one to a random node until
/// the counts sum to `2n`.
pub fn repetition_counts(
    num_nondepot: usize,
    n: usize,
    rng: &mut GenRng,
) -> Result<Vec<u32>, PairingError> {
    if num_nondepot == 0 || 2 * n < num_nondepot {
        return Err(PairingError::InfeasibleRepetition { num_nondepot, n });
    }
    let mut counts = vec![1u32; num_nondepot];
    let mut sum = num_nondepot;
    while sum < 2 * n {
        let i = rng.rounded_uniform(0.0, (num_nondepot - 1) as f64) as usize;
        counts[i] += 1;
        sum += 1;
    }
    Ok(counts)
}

/// Node `i` repeated `counts[i]` times, in index order.
pub fn expand_counts(counts: &[u32]) -> Vec<usize> {
    counts
        .iter()
        .enumerate()
        .flat_map(|(i, &c)| std::iter::repeat(i).take(c as usize))
        .collect()
}

/// Shuffles the expanded multiset and cuts it into `n` ordered pairs,
/// starting over whenever a pair is degenerate or repeats an earlier one.
pub fn pair_nodes(
    counts: &[u32],
    n: usize,
    rng: &mut GenRng,
    max_reshuffles: u64,
) -> Result<Vec<(usize, usize)>, PairingError> {
    let sum: u64 = counts.iter().map(|&c| u64::from(c)).sum();
    if sum != 2 * n as u64 {
        return Err(PairingError::CountMismatch { sum, expected: 2 * n as u64 });
    }
    // a node selected more than n times would have to pair with itself
    if counts.iter().any(|&c| c as usize > n) {
        return Err(PairingError::PairingStalled { attempts: 0 });
    }
    let mut shuffled = expand_counts(counts);
    let mut pairs = Vec::with_capacity(n);
    let mut attempts = 0;
    loop {
        if attempts >= max_reshuffles {
            return Err(PairingError::PairingStalled { attempts });
        }
        attempts += 1;
        rng.shuffle(&mut shuffled);
        pairs.clear();
        let mut ok = true;
        for chunk in shuffled.chunks_exact(2) {
            let pair = (chunk[0], chunk[1]);
            if pair.0 == pair.1 || pairs.contains(&pair) {
                ok = false;
                break;
            }
            pairs.push(pair);
        }
        if ok {
            return Ok(pairs);
        }
    }
}

/// Orders `pairs` into head and tail. Pairs that are the last remaining
/// cover of both endpoints go to the front of the head, pairs that are the
/// last cover of one endpoint are appended to the head, and otherwise the
/// pair with the largest remaining count sum moves to the front of the tail.
pub fn sort_pairs(
    counts: &[u32],
    pairs: &[(usize, usize)],
    mode: SortMode,
) -> Result<PairFamily, PairingError> {
    let mut remaining_counts: Vec<i64> = counts.iter().map(|&c| i64::from(c)).collect();
    let mut pending: Vec<(usize, usize)> = pairs.to_vec();
    let mut head: Vec<(usize, usize)> = Vec::new();
    let mut tail: Vec<(usize, usize)> = Vec::new();
    let l = &mut remaining_counts;

    while !pending.is_empty() {
        let mut i = 0;
        while i < pending.len() {
            let (a, b) = pending[i];
            if l[a] == 1 && l[b] == 1 {
                l[a] -= 1;
                l[b] -= 1;
                head.insert(0, pending.remove(i));
            } else if l[a] == 1 || l[b] == 1 {
                l[a] -= 1;
                l[b] -= 1;
                head.push(pending.remove(i));
            } else {
                i += 1;
            }
        }

        let mut max = 0;
        let mut max_index = None;
        for (j, &(a, b)) in pending.iter().enumerate() {
            if l[a] + l[b] > max {
                max = l[a] + l[b];
                max_index = Some(j);
            }
        }
        match max_index {
            Some(j) => {
                let (a, b) = pending[j];
                l[a] -= 1;
                match mode {
                    SortMode::Corrected => l[b] -= 1,
                    SortMode::Verbatim => l[b] = l[a] - 1,
                }
                tail.insert(0, pending.remove(j));
            }
            None if !pending.is_empty() => {
                return Err(PairingError::SortStalled { remaining: pending.len() });
            }
            None => {}
        }
    }

    let head_len = head.len();
    head.extend(tail);
    Ok(PairFamily { sorted_pairs: head, counts: counts.to_vec(), head_len })
}
