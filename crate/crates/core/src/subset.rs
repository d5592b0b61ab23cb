//! Subsets of the criterion set encoded as bitmasks.

use alloc::vec::Vec;
use core::fmt;

/// Largest criterion count that fits a dense set-function table.
pub const MAX_CRITERIA: usize = 20;

/// A subset of `{0, .., n-1}`; bit `i` is set iff criterion `i` belongs to it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Subset(pub u32);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub fn full(n: usize) -> Subset {
        Subset(((1u64 << n) - 1) as u32)
    }

    pub fn singleton(i: usize) -> Subset {
        Subset(1 << i)
    }

    pub fn from_members(members: &[usize]) -> Subset {
        Subset(members.iter().fold(0, |acc, &i| acc | (1 << i)))
    }

    pub fn bits(self) -> usize {
        self.0 as usize
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset_of(self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn insert(self, i: usize) -> Subset {
        Subset(self.0 | 1 << i)
    }

    pub fn remove(self, i: usize) -> Subset {
        Subset(self.0 & !(1 << i))
    }

    pub fn union(self, other: Subset) -> Subset {
        Subset(self.0 | other.0)
    }

    pub fn intersection(self, other: Subset) -> Subset {
        Subset(self.0 & other.0)
    }

    /// Members in ascending order.
    pub fn members(self) -> Members {
        Members(self.0)
    }

    pub fn lowest(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, i) in self.members().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{i}")?;
        }
        f.write_str("}")
    }
}

pub struct Members(u32);

impl Iterator for Members {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }
}

/// All subsets of an `n`-element ground set in ascending bit order.
pub fn all_subsets(n: usize) -> impl Iterator<Item = Subset> {
    (0..1u32 << n).map(Subset)
}

/// Subsets of `set`, including the empty set and `set` itself.
pub fn subsets_of(set: Subset) -> impl Iterator<Item = Subset> {
    let mut next = Some(0u32);
    core::iter::from_fn(move || {
        let cur = next?;
        next = if cur == set.0 { None } else { Some((cur | !set.0).wrapping_add(1) & set.0) };
        Some(Subset(cur))
    })
}

fn pairwise_blocks(xs: &mut [f64], step: impl Fn(&mut f64, &mut f64)) {
    let mut half = 1;
    while half < xs.len() {
        for block in xs.chunks_exact_mut(half * 2) {
            let (lo, hi) = block.split_at_mut(half);
            for (l, h) in lo.iter_mut().zip(hi) {
                step(l, h);
            }
        }
        half *= 2;
    }
}

/// In place: `xs[A] <- sum over B subset of A of xs[B]`.
pub fn subset_sums(xs: &mut [f64]) {
    pairwise_blocks(xs, |l, h| *h += *l);
}

/// Inverse of [`subset_sums`].
pub fn inv_subset_sums(xs: &mut [f64]) {
    pairwise_blocks(xs, |l, h| *h -= *l);
}

/// Disjoint-set forest over criterion indices.
pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, i: usize) -> usize {
        let mut root = i;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = i;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }

    /// Blocks as subsets, ordered by their lowest member.
    pub(crate) fn blocks(mut self) -> Vec<Subset> {
        let n = self.parent.len();
        let mut by_root = alloc::vec![Subset::EMPTY; n];
        for i in 0..n {
            let r = self.find(i);
            by_root[r] = by_root[r].insert(i);
        }
        by_root.into_iter().filter(|s| !s.is_empty()).collect()
    }
}
