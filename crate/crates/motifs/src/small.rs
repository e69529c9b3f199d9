//! Compact labeled graphs on up to five nodes.
//!
//! Motif representatives and induced views are graphs on nodes `0..k` with one
//! label code per unordered node pair. Code `0` means "no edge"; nonzero codes
//! are kind-specific (see [`GraphKind`]). Directed codes are oriented from the
//! smaller to the larger node, so relabeling a pair may mirror its code.

use crate::graph::GraphKind;

pub(crate) const MAX_K: usize = 5;
pub(crate) const MAX_PAIRS: usize = 10;

/// Index of the unordered pair `(i, j)`, `i < j`, in lexicographic pair order.
#[inline]
pub(crate) fn pair_index(k: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < k);
    i * k - i * (i + 1) / 2 + (j - i - 1)
}

/// A labeled graph on nodes `0..k`, `k <= 5`, stored as per-pair label codes.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) struct SmallGraph {
    k: u8,
    codes: [u8; MAX_PAIRS],
}

impl SmallGraph {
    pub(crate) fn new(k: usize) -> Self {
        debug_assert!((1..=MAX_K).contains(&k));
        SmallGraph {
            k: k as u8,
            codes: [0; MAX_PAIRS],
        }
    }

    #[inline]
    pub(crate) fn k(&self) -> usize {
        self.k as usize
    }

    #[inline]
    pub(crate) fn num_pairs(&self) -> usize {
        let k = self.k as usize;
        k * (k - 1) / 2
    }

    #[inline]
    pub(crate) fn set(&mut self, i: usize, j: usize, code: u8) {
        self.codes[pair_index(self.k(), i, j)] = code;
    }

    #[inline]
    pub(crate) fn get(&self, i: usize, j: usize) -> u8 {
        self.codes[pair_index(self.k(), i, j)]
    }

    pub(crate) fn codes(&self) -> &[u8] {
        &self.codes[..self.num_pairs()]
    }

    /// Number of skeleton edges (nonzero pair slots).
    pub(crate) fn edge_count(&self) -> usize {
        self.codes().iter().filter(|&&c| c != 0).count()
    }

    /// Skeleton degree of node `i` within the small graph.
    pub(crate) fn degree(&self, i: usize) -> usize {
        let k = self.k();
        (0..k)
            .filter(|&j| j != i && self.get(i.min(j), i.max(j)) != 0)
            .count()
    }

    /// Whether the skeleton is connected.
    pub(crate) fn is_connected(&self) -> bool {
        let k = self.k();
        let mut seen = 1u8; // bitmask, node 0 visited
        let mut stack = [0usize; MAX_K];
        let mut top = 1;
        stack[0] = 0;
        while top > 0 {
            top -= 1;
            let u = stack[top];
            for v in 0..k {
                if v != u && seen & (1 << v) == 0 && self.get(u.min(v), u.max(v)) != 0 {
                    seen |= 1 << v;
                    stack[top] = v;
                    top += 1;
                }
            }
        }
        seen.count_ones() as usize == k
    }

    /// Relabel nodes by `perm` (node `i` becomes `perm[i]`), mirroring oriented
    /// codes whenever the relabeled pair flips order.
    pub(crate) fn apply_perm(&self, perm: &[usize], kind: GraphKind) -> SmallGraph {
        let k = self.k();
        let mut out = SmallGraph::new(k);
        for i in 0..k {
            for j in (i + 1)..k {
                let c = self.get(i, j);
                if c == 0 {
                    continue;
                }
                let (a, b) = (perm[i], perm[j]);
                if a < b {
                    out.set(a, b, c);
                } else {
                    out.set(b, a, kind.mirror_code(c));
                }
            }
        }
        out
    }

    /// Canonical form: the lexicographically smallest relabeling.
    pub(crate) fn certificate(&self, kind: GraphKind) -> SmallGraph {
        let mut best = *self;
        for perm in permutations(self.k()) {
            let candidate = self.apply_perm(&perm[..self.k()], kind);
            if candidate.codes < best.codes {
                best = candidate;
            }
        }
        best
    }

    /// Dense index of this graph among all code assignments for `kind`.
    #[inline]
    pub(crate) fn pack(&self, kind: GraphKind) -> usize {
        let base = kind.slot_codes();
        let mut acc = 0usize;
        for &c in self.codes().iter().rev() {
            acc = acc * base + c as usize;
        }
        acc
    }

    /// Inverse of [`pack`](Self::pack).
    pub(crate) fn unpack(k: usize, kind: GraphKind, mut packed: usize) -> SmallGraph {
        let base = kind.slot_codes();
        let mut out = SmallGraph::new(k);
        for t in 0..out.num_pairs() {
            out.codes[t] = (packed % base) as u8;
            packed /= base;
        }
        out
    }
}

impl std::fmt::Debug for SmallGraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "SmallGraph(k={}, codes={:?})", self.k, self.codes())
    }
}

/// All permutations of `0..k`, padded to `MAX_K`.
pub(crate) fn permutations(k: usize) -> Vec<[usize; MAX_K]> {
    let mut out = Vec::with_capacity((1..=k).product());
    let mut current = [0usize; MAX_K];
    let mut used = [false; MAX_K];
    fn rec(
        k: usize,
        depth: usize,
        current: &mut [usize; MAX_K],
        used: &mut [bool; MAX_K],
        out: &mut Vec<[usize; MAX_K]>,
    ) {
        if depth == k {
            out.push(*current);
            return;
        }
        for v in 0..k {
            if !used[v] {
                used[v] = true;
                current[depth] = v;
                rec(k, depth + 1, current, used, out);
                used[v] = false;
            }
        }
    }
    rec(k, 0, &mut current, &mut used, &mut out);
    out
}
