//! Binary codes with a prescribed minimum Hamming distance.

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::sample::block_rng;
use crate::linalg::ln_hamming_ball;

/// Longest length handled by exhaustive lexicographic greedy search.
pub const EXHAUSTIVE_MAX_LEN: usize = 26;

/// A bit-packed binary word, least significant bit first.
pub type Word = Vec<u64>;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Code {
    pub n: usize,
    pub dmin: usize,
    pub words: Vec<Word>,
    /// Whether the code is the full lexicographic greedy code.
    pub exhaustive: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GvOptions {
    pub seed: u64,
    /// Stop once this many words are accepted (randomized search only).
    pub max_words: usize,
    /// Stop after this many consecutive rejected candidates.
    pub max_failures: usize,
}

impl Default for GvOptions {
    fn default() -> Self {
        Self {
            seed: 0,
            max_words: 256,
            max_failures: 10_000,
        }
    }
}

pub fn hamming(a: &[u64], b: &[u64]) -> usize {
    a.iter().zip(b).map(|(x, y)| (x ^ y).count_ones() as usize).sum()
}

pub fn bit(w: &[u64], i: usize) -> bool {
    (w[i / 64] >> (i % 64)) & 1 == 1
}

/// `ln(2^n / Vol(n, dmin-1))`, the log-size guaranteed by the greedy construction.
pub fn ln_gv_floor(n: usize, dmin: usize) -> f64 {
    let v = n as f64 * std::f64::consts::LN_2 - ln_hamming_ball(n as u64, dmin.saturating_sub(1) as u64);
    v.max(0.0)
}

impl Code {
    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Smallest pairwise distance (None for fewer than two words).
    pub fn min_distance(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        for i in 0..self.words.len() {
            for j in i + 1..self.words.len() {
                let h = hamming(&self.words[i], &self.words[j]);
                best = Some(best.map_or(h, |b| b.min(h)));
            }
        }
        best
    }

    /// Word `i` as a string of 0/1, first bit first.
    pub fn word_string(&self, i: usize) -> String {
        (0..self.n).map(|k| if bit(&self.words[i], k) { '1' } else { '0' }).collect()
    }
}

/// The two-word code `{0…0, 1…1}`, used to certify distances across every cell.
pub fn antipodal_pair(n: usize) -> Code {
    let limbs = n.div_ceil(64);
    let mut ones = vec![u64::MAX; limbs];
    if !n.is_multiple_of(64) {
        ones[limbs - 1] = (1u64 << (n % 64)) - 1;
    }
    Code {
        n,
        dmin: n,
        words: vec![vec![0; limbs], ones],
        exhaustive: false,
    }
}

/// Greedy code: exhaustive lexicographic for `n ≤ 26`, randomized greedy
/// with default options beyond.
pub fn gv_code(n: usize, dmin: usize) -> Result<Code> {
    gv_code_with(n, dmin, GvOptions::default())
}

pub fn gv_code_with(n: usize, dmin: usize, opts: GvOptions) -> Result<Code> {
    if n == 0 || dmin > n {
        return Err(Error::InvalidInput(format!("need 1 <= dmin <= n, got n={n}, dmin={dmin}")));
    }
    let dmin = dmin.max(1);
    if n <= EXHAUSTIVE_MAX_LEN {
        Ok(lexicode(n, dmin))
    } else {
        Ok(random_greedy(n, dmin, opts))
    }
}

/// Scans words in increasing order, accepting each word not within distance
/// `dmin - 1` of an earlier one; accepted words mark their Hamming ball.
fn lexicode(n: usize, dmin: usize) -> Code {
    let size = 1usize << n;
    let mut blocked = vec![0u64; size.div_ceil(64)];
    let mut words = Vec::new();
    let radius = dmin - 1;
    let mut flips = Vec::with_capacity(radius);
    for w in 0..size {
        if (blocked[w / 64] >> (w % 64)) & 1 == 1 {
            continue;
        }
        words.push(vec![w as u64]);
        mark_ball(w, n, radius, 0, &mut flips, &mut blocked);
    }
    Code {
        n,
        dmin,
        words,
        exhaustive: true,
    }
}

fn mark_ball(center: usize, n: usize, radius: usize, start: usize, flips: &mut Vec<usize>, blocked: &mut [u64]) {
    let w = flips.iter().fold(center, |acc, &b| acc ^ (1 << b));
    blocked[w / 64] |= 1 << (w % 64);
    if flips.len() == radius {
        return;
    }
    for b in start..n {
        flips.push(b);
        mark_ball(center, n, radius, b + 1, flips, blocked);
        flips.pop();
    }
}

fn random_greedy(n: usize, dmin: usize, opts: GvOptions) -> Code {
    let limbs = n.div_ceil(64);
    let mut rng = block_rng(opts.seed, 0);
    let mut words: Vec<Word> = vec![vec![0; limbs]];
    let mut failures = 0;
    while words.len() < opts.max_words && failures < opts.max_failures {
        let mut w: Word = (0..limbs).map(|_| rng.random::<u64>()).collect();
        if !n.is_multiple_of(64) {
            w[limbs - 1] &= (1u64 << (n % 64)) - 1;
        }
        if words.iter().all(|v| hamming(v, &w) >= dmin) {
            words.push(w);
            failures = 0;
        } else {
            failures += 1;
        }
    }
    Code {
        n,
        dmin,
        words,
        exhaustive: false,
    }
}
