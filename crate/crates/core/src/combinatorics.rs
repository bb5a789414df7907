//! Partitions, compositions and set partitions.
//!
//! Set partitions act on the ground set `{0, 1, …, n-1}`. The reduced form
//! orders blocks by their minimum element and sorts each block, so equality
//! and hashing identify block reorderings.

use std::collections::BTreeMap;
use std::fmt;

/// A weakly decreasing sequence of positive integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    /// Sorts `parts` into canonical order. Zero parts are rejected.
    pub fn new(mut parts: Vec<u32>) -> Option<Self> {
        if parts.contains(&0) {
            return None;
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Some(Self { parts })
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn size(&self) -> u32 {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// `|λ| + ℓ(λ)`.
    pub fn weight(&self) -> u32 {
        self.size() + self.len() as u32
    }

    /// Number of parts equal to `i`.
    pub fn multiplicity(&self, i: u32) -> usize {
        self.parts.iter().filter(|&&p| p == i).count()
    }

    /// Part value → multiplicity, for every value that occurs.
    pub fn multiplicities(&self) -> BTreeMap<u32, usize> {
        let mut out = BTreeMap::new();
        for &p in &self.parts {
            *out.entry(p).or_insert(0) += 1;
        }
        out
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// All partitions of `n`, parts in decreasing order, lexicographically decreasing.
pub fn partitions_of_size(n: u32) -> Vec<Partition> {
    fn rec(remaining: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if remaining == 0 {
            out.push(Partition { parts: cur.clone() });
            return;
        }
        for p in (1..=max.min(remaining)).rev() {
            cur.push(p);
            rec(remaining - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// All partitions with `|λ| + ℓ(λ) = w`.
pub fn partitions_of_weight(w: u32) -> Vec<Partition> {
    // ℓ ≥ 1 forces |λ| ≤ w - 1; ℓ ≤ |λ| forces |λ| ≥ w / 2.
    (w.div_ceil(2)..w)
        .rev()
        .flat_map(partitions_of_size)
        .filter(|p| p.weight() == w)
        .collect()
}

/// Ordered `k`-tuples of positive integers summing to `n`.
pub fn compositions(n: u32, k: u32) -> Vec<Vec<u32>> {
    if k == 0 || k > n {
        return Vec::new();
    }
    nonneg_compositions(n - k, k)
        .into_iter()
        .map(|c| c.into_iter().map(|x| x + 1).collect())
        .collect()
}

/// Ordered `k`-tuples of nonnegative integers summing to `n`.
pub fn nonneg_compositions(n: u32, k: u32) -> Vec<Vec<u32>> {
    fn rec(remaining: u32, slots: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if slots == 1 {
            cur.push(remaining);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for x in (0..=remaining).rev() {
            cur.push(x);
            rec(remaining - x, slots - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k > 0 {
        rec(n, k, &mut Vec::new(), &mut out);
    }
    out
}

/// A reduced set partition of `{0, …, n-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SetPartition {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

impl SetPartition {
    /// Validates cover and disjointness, then canonicalizes.
    pub fn from_blocks(n: usize, blocks: Vec<Vec<usize>>) -> Option<Self> {
        let mut seen = vec![false; n];
        for block in &blocks {
            if block.is_empty() {
                return None;
            }
            for &x in block {
                if x >= n || seen[x] {
                    return None;
                }
                seen[x] = true;
            }
        }
        if seen.iter().any(|s| !s) {
            return None;
        }
        let mut blocks = blocks;
        for b in &mut blocks {
            b.sort_unstable();
        }
        blocks.sort_unstable_by_key(|b| b[0]);
        Some(Self { n, blocks })
    }

    /// Builds from a block label per element; labels need not be contiguous.
    pub fn from_labels(labels: &[usize]) -> Self {
        let n = labels.len();
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        if labels.iter().all(|&l| l < n) {
            // blocks open in order of first appearance, i.e. by minimum element
            let mut slot = vec![usize::MAX; n];
            for (x, &l) in labels.iter().enumerate() {
                if slot[l] == usize::MAX {
                    slot[l] = blocks.len();
                    blocks.push(Vec::new());
                }
                blocks[slot[l]].push(x);
            }
        } else {
            let mut by_label: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
            for (x, &l) in labels.iter().enumerate() {
                by_label.entry(l).or_default().push(x);
            }
            blocks = by_label.into_values().collect();
            blocks.sort_unstable_by_key(|b| b[0]);
        }
        Self { n, blocks }
    }

    /// Consecutive intervals of the given lengths.
    pub fn intervals(lengths: &[usize]) -> Self {
        let mut blocks = Vec::with_capacity(lengths.len());
        let mut start = 0;
        for &len in lengths {
            blocks.push((start..start + len).collect());
            start += len;
        }
        Self { n: start, blocks }
    }

    pub fn ground_size(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// Block index of every element.
    pub fn labels(&self) -> Vec<usize> {
        let mut labels = vec![0; self.n];
        for (i, b) in self.blocks.iter().enumerate() {
            for &x in b {
                labels[x] = i;
            }
        }
        labels
    }

    /// Finest common coarsening.
    pub fn join(&self, other: &SetPartition) -> SetPartition {
        assert_eq!(
            self.n, other.n,
            "join of set partitions on different ground sets"
        );
        let mut uf = UnionFind::new(self.n);
        for b in self.blocks.iter().chain(&other.blocks) {
            for w in b.windows(2) {
                uf.union(w[0], w[1]);
            }
        }
        let labels: Vec<usize> = (0..self.n).map(|x| uf.find(x)).collect();
        SetPartition::from_labels(&labels)
    }

    /// Every block of `self` meets every block of `other` at most once.
    pub fn is_transverse_to(&self, other: &SetPartition) -> bool {
        let labels = other.labels();
        self.blocks.iter().all(|b| {
            let mut hit = vec![false; other.len()];
            b.iter()
                .all(|&x| !std::mem::replace(&mut hit[labels[x]], true))
        })
    }
}

impl fmt::Display for SetPartition {
    /// One-based block listing, e.g. `({1,3},{2})`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, b) in self.blocks.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{{")?;
            for (j, x) in b.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", x + 1)?;
            }
            write!(f, "}}")?;
        }
        write!(f, ")")
    }
}

/// Disjoint-set forest with path halving and union by size.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
    components: usize,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            size: vec![1; n],
            components: n,
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false when `a` and `b` were already joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        self.components -= 1;
        true
    }

    pub fn components(&self) -> usize {
        self.components
    }
}

/// Streams every reduced set partition of `{0, …, n-1}` in restricted-growth order.
pub fn set_partitions(n: usize) -> SetPartitions {
    SetPartitions {
        rgs: vec![0; n],
        max: vec![0; n],
        first: true,
    }
}

/// Iterator over restricted growth strings; see [`set_partitions`].
#[derive(Clone, Debug)]
pub struct SetPartitions {
    rgs: Vec<usize>,
    // max[i] = max(rgs[0..i]), so rgs[i] may range over 0..=max[i]+1
    max: Vec<usize>,
    first: bool,
}

impl Iterator for SetPartitions {
    type Item = SetPartition;

    fn next(&mut self) -> Option<SetPartition> {
        let n = self.rgs.len();
        if self.first {
            self.first = false;
            return Some(SetPartition::from_labels(&self.rgs));
        }
        if n == 0 {
            return None;
        }
        let mut i = n - 1;
        loop {
            if i == 0 {
                return None;
            }
            if self.rgs[i] <= self.max[i] {
                self.rgs[i] += 1;
                break;
            }
            i -= 1;
        }
        for j in i + 1..n {
            self.rgs[j] = 0;
            self.max[j] = self.max[j - 1].max(self.rgs[j - 1]);
        }
        Some(SetPartition::from_labels(&self.rgs))
    }
}

/// Lazily enumerates the set partitions complementary to `rho`.
///
/// Elements are assigned to blocks in increasing order. A block never receives
/// two elements from the same block of `rho`, the block count is capped at
/// `n + 1 - ℓ(rho)`, and branches that can no longer reach that count are cut.
/// Leaves are accepted only if the join with `rho` is the one-block partition.
pub fn complementary_partitions(rho: &SetPartition) -> ComplementaryPartitions {
    let n = rho.ground_size();
    let target = (n + 1).saturating_sub(rho.len());
    ComplementaryPartitions {
        n,
        target,
        rho_blocks: rho.len(),
        rho_label: rho.labels(),
        words: rho.len().div_ceil(64).max(1),
        open: 0,
        assign: Vec::with_capacity(n),
        masks: Vec::new(),
        next_choice: vec![0; n + 1],
        done: n == 0 || target == 0,
    }
}

/// Iterator returned by [`complementary_partitions`].
#[derive(Clone, Debug)]
pub struct ComplementaryPartitions {
    n: usize,
    target: usize,
    rho_blocks: usize,
    rho_label: Vec<usize>,
    // bitset width per block, in 64-bit words
    words: usize,
    open: usize,
    assign: Vec<usize>,
    // for open block b, words b*words.. hold the rho-blocks already represented in it
    masks: Vec<u64>,
    next_choice: Vec<usize>,
    done: bool,
}

impl ComplementaryPartitions {
    fn bit(&self, block: usize, label: usize) -> (usize, u64) {
        (block * self.words + label / 64, 1u64 << (label % 64))
    }

    fn pop(&mut self) {
        let e = self.assign.len() - 1;
        let b = self.assign.pop().expect("nonempty assignment");
        let (w, m) = self.bit(b, self.rho_label[e]);
        self.masks[w] &= !m;
        let row = b * self.words..(b + 1) * self.words;
        if b + 1 == self.open && self.masks[row].iter().all(|&x| x == 0) {
            self.open -= 1;
            self.masks.truncate(self.open * self.words);
        }
    }

    fn joins_to_top(&self) -> bool {
        let mut uf = UnionFind::new(self.rho_blocks);
        let mut first_in_block: Vec<Option<usize>> = vec![None; self.target];
        for (e, &b) in self.assign.iter().enumerate() {
            let r = self.rho_label[e];
            match first_in_block[b] {
                Some(r0) => {
                    uf.union(r0, r);
                }
                None => first_in_block[b] = Some(r),
            }
        }
        uf.components() == 1
    }
}

impl Iterator for ComplementaryPartitions {
    type Item = SetPartition;

    fn next(&mut self) -> Option<SetPartition> {
        if self.done {
            return None;
        }
        loop {
            let depth = self.assign.len();
            if depth == self.n {
                let hit = self.open == self.target && self.joins_to_top();
                let result = hit.then(|| SetPartition::from_labels(&self.assign));
                self.pop();
                if let Some(r) = result {
                    return Some(r);
                }
                continue;
            }
            let open = self.open;
            let remaining_after = self.n - depth - 1;
            let label = self.rho_label[depth];
            let mut chosen = None;
            let mut c = self.next_choice[depth];
            while c <= open && c < self.target {
                let blocks_after = if c == open { open + 1 } else { open };
                let fits = c == open || {
                    let (w, m) = self.bit(c, label);
                    self.masks[w] & m == 0
                };
                if fits && blocks_after + remaining_after >= self.target {
                    chosen = Some(c);
                    break;
                }
                c += 1;
            }
            match chosen {
                Some(c) => {
                    self.next_choice[depth] = c + 1;
                    if c == open {
                        self.open += 1;
                        self.masks.resize(self.open * self.words, 0);
                    }
                    let (w, m) = self.bit(c, label);
                    self.masks[w] |= m;
                    self.assign.push(c);
                    self.next_choice[depth + 1] = 0;
                }
                None => {
                    if depth == 0 {
                        self.done = true;
                        return None;
                    }
                    self.pop();
                }
            }
        }
    }
}
