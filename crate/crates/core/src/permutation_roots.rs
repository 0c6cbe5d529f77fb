//! Cycle types of finite permutations and their `n`-th roots.

use std::collections::BTreeMap;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A bijection of `0..k`, serialized as its image array.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation {
    image: Vec<usize>,
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = Error;

    fn try_from(image: Vec<usize>) -> Result<Self> {
        Permutation::new(image)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.image
    }
}

impl Permutation {
    pub fn new(image: Vec<usize>) -> Result<Self> {
        let k = image.len();
        let mut seen = vec![false; k];
        for (i, &w) in image.iter().enumerate() {
            if w >= k {
                return Err(Error::NotAPermutation(format!("image of {i} is {w}, outside 0..{k}")));
            }
            if std::mem::replace(&mut seen[w], true) {
                return Err(Error::NotAPermutation(format!("{w} is hit twice")));
            }
        }
        Ok(Self { image })
    }

    pub fn identity(k: usize) -> Self {
        Self {
            image: (0..k).collect(),
        }
    }

    /// Builds a permutation of `0..k` from disjoint cycles.
    pub fn from_cycles(k: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut image: Vec<usize> = (0..k).collect();
        let mut moved = vec![false; k];
        for cycle in cycles {
            for (i, &a) in cycle.iter().enumerate() {
                if a >= k || std::mem::replace(&mut moved[a], true) {
                    return Err(Error::NotAPermutation(format!("bad cycle entry {a}")));
                }
                image[a] = cycle[(i + 1) % cycle.len()];
            }
        }
        Ok(Self { image })
    }

    pub fn degree(&self) -> usize {
        self.image.len()
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    pub fn apply(&self, i: usize) -> usize {
        self.image[i]
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation {
            image: other.image.iter().map(|&w| self.image[w]).collect(),
        }
    }

    pub fn pow(&self, n: u64) -> Permutation {
        let mut result = Permutation::identity(self.degree());
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = base.compose(&result);
            }
            base = base.compose(&base);
            n >>= 1;
        }
        result
    }

    /// Disjoint cycles (fixed points included), each starting at its least
    /// element, ordered by that element.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut v = start;
            while !seen[v] {
                seen[v] = true;
                cycle.push(v);
                v = self.image[v];
            }
            out.push(cycle);
        }
        out
    }

    pub fn cycle_type(&self) -> CycleType {
        let mut t = CycleType::default();
        for c in self.cycles() {
            *t.counts.entry(c.len()).or_insert(0) += 1;
        }
        t
    }

    /// A `τ` with `τ^n = self`, or `None` when no root exists.
    pub fn construct_nth_root(&self, n: u64) -> Option<Permutation> {
        assert!(n >= 1, "root order must be positive");
        let mut by_length: BTreeMap<usize, Vec<Vec<usize>>> = BTreeMap::new();
        for c in self.cycles() {
            by_length.entry(c.len()).or_default().push(c);
        }
        let mut image = vec![usize::MAX; self.degree()];
        for (&m, cycles) in &by_length {
            let sizes = bundle_sizes(m as u64, n, cycles.len())?;
            let mut rest = cycles.as_slice();
            for r in sizes {
                let (bundle, tail) = rest.split_at(r);
                rest = tail;
                let merged = interleave(bundle, n);
                for (i, &a) in merged.iter().enumerate() {
                    image[a] = merged[(i + 1) % merged.len()];
                }
            }
        }
        Some(Permutation { image })
    }
}

/// Bundle sizes `r` with `r | n` and `gcd(n, r·m) = r`, tried in increasing
/// order with backtracking, that add up to `count`.
fn bundle_sizes(m: u64, n: u64, count: usize) -> Option<Vec<usize>> {
    let allowed: Vec<usize> = (1..=n)
        .filter(|&r| n.is_multiple_of(r) && n.gcd(&(r * m)) == r)
        .map(|r| r as usize)
        .collect();
    fn go(left: usize, allowed: &[usize], acc: &mut Vec<usize>) -> bool {
        if left == 0 {
            return true;
        }
        for &r in allowed {
            if r <= left {
                acc.push(r);
                if go(left - r, allowed, acc) {
                    return true;
                }
                acc.pop();
            }
        }
        false
    }
    let mut acc = Vec::new();
    go(count, &allowed, &mut acc).then_some(acc)
}

/// Splices `r` cycles of length `m` into one `(r·m)`-cycle whose `n`-th power
/// is exactly those cycles. Position `j + r·(k·n' mod m)` holds the `k`-th
/// element of cycle `j`, where `n = r·n'`.
fn interleave(bundle: &[Vec<usize>], n: u64) -> Vec<usize> {
    let r = bundle.len();
    let m = bundle[0].len();
    let step = (n / r as u64 % m as u64) as usize;
    let mut merged = vec![0; r * m];
    for (j, cycle) in bundle.iter().enumerate() {
        for (k, &a) in cycle.iter().enumerate() {
            merged[j + r * (k * step % m)] = a;
        }
    }
    merged
}

/// Number of `m`-cycles for every length `m`; serialized as `{"m": c_m}`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CycleType {
    pub counts: BTreeMap<usize, usize>,
}

impl CycleType {
    pub fn from_counts(pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut t = CycleType::default();
        for (m, c) in pairs {
            assert!(m >= 1, "cycle length must be positive");
            if c > 0 {
                *t.counts.entry(m).or_insert(0) += c;
            }
        }
        t
    }

    pub fn count(&self, m: usize) -> usize {
        self.counts.get(&m).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> usize {
        self.counts.iter().map(|(m, c)| m * c).sum()
    }

    /// `c_m ≡ 0 (mod ((m,n)))` for every `m`.
    pub fn has_nth_root(&self, n: u64) -> bool {
        assert!(n >= 1, "root order must be positive");
        self.counts
            .iter()
            .all(|(&m, &c)| (c as u64).is_multiple_of(double_bracket(m as u64, n)))
    }

    /// Square-root test phrased through even cycles: for each even length,
    /// the number of cycles of that length is even.
    pub fn even_cycles_criterion(&self) -> bool {
        self.counts.iter().all(|(&m, &c)| m % 2 == 1 || c % 2 == 0)
    }

    /// Cycle type of `σ^n`: an `L`-cycle splits into `gcd(n, L)` cycles of
    /// length `L / gcd(n, L)`.
    pub fn power_cycle_type(&self, n: u64) -> CycleType {
        let mut out = CycleType::default();
        for (&l, &c) in &self.counts {
            let g = (l as u64).gcd(&n) as usize;
            *out.counts.entry(l / g).or_insert(0) += c * g;
        }
        out
    }
}

/// `((m, n)) = ∏_{p | m} p^{e(p, n)}`, with `e(p, n)` the exponent of `p` in `n`.
pub fn double_bracket(m: u64, n: u64) -> u64 {
    assert!(m >= 1 && n >= 1, "arguments must be positive");
    let mut result = 1;
    let mut rest = m;
    let mut p = 2;
    while p * p <= rest {
        if rest.is_multiple_of(p) {
            while rest.is_multiple_of(p) {
                rest /= p;
            }
            result *= p_part(p, n);
        }
        p += 1;
    }
    if rest > 1 {
        result *= p_part(rest, n);
    }
    result
}

fn p_part(p: u64, mut n: u64) -> u64 {
    let mut out = 1;
    while n.is_multiple_of(p) {
        n /= p;
        out *= p;
    }
    out
}
