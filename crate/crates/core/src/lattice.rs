//! The Fibonacci lattice: finite walks in the golden-mean graph, viewed as the
//! nodes of a tree whose node counts per level follow the Fibonacci numbers.
//!
//! Also houses two brute-force coloring counters. They never touch the
//! closed recursion in [`crate::shift`] and exist to check it.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::shift::{MarkovFibSpec, Symbol};

pub const DEFAULT_DEPTH_CAP: usize = 30;
pub const DEFAULT_WORK_CAP: u128 = 1 << 24;

/// Shape of an n-block support.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RootType {
    /// Rooted at a node with two children (the root, or any address ending in 1).
    Epsilon,
    /// Rooted at a node whose address ends in 2: only child 1 exists.
    TwoRooted,
}

impl RootType {
    pub const ALL: [RootType; 2] = [RootType::Epsilon, RootType::TwoRooted];

    pub fn name(self) -> &'static str {
        match self {
            RootType::Epsilon => "eps",
            RootType::TwoRooted => "two",
        }
    }
}

/// Returns whether `letters` is a walk in the golden-mean graph, i.e. a word
/// over `{1, 2}` with no factor `22`.
pub fn is_valid_node(letters: &[u8]) -> Result<bool> {
    if let Some(&bad) = letters.iter().find(|&&l| l != 1 && l != 2) {
        return Err(Error::InvalidLetter(bad));
    }
    Ok(!letters.windows(2).any(|w| w == [2, 2]))
}

/// A node of the Fibonacci lattice. The empty word is the root.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct NodeWord(Vec<u8>);

impl NodeWord {
    pub fn root() -> Self {
        NodeWord(Vec::new())
    }

    pub fn new(letters: Vec<u8>) -> Result<Self> {
        if is_valid_node(&letters)? {
            Ok(NodeWord(letters))
        } else {
            Err(Error::InvalidArgument(format!(
                "{} contains the factor 22",
                NodeWord(letters)
            )))
        }
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn last(&self) -> Option<u8> {
        self.0.last().copied()
    }

    /// The child in direction `dir`, if it stays in the lattice.
    pub fn child(&self, dir: u8) -> Option<NodeWord> {
        if dir == 2 && self.last() == Some(2) {
            return None;
        }
        let mut letters = self.0.clone();
        letters.push(dir);
        Some(NodeWord(letters))
    }
}

impl fmt::Display for NodeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("ε");
        }
        for l in &self.0 {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// Caps on the brute-force lattice routines.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LatticeConfig {
    pub depth_cap: usize,
    pub work_cap: u128,
}

impl Default for LatticeConfig {
    fn default() -> Self {
        LatticeConfig {
            depth_cap: DEFAULT_DEPTH_CAP,
            work_cap: DEFAULT_WORK_CAP,
        }
    }
}

/// The support of an n-block, with node words relative to the slice root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeSlice {
    pub root_type: RootType,
    pub height: usize,
    /// Ordered by length, then lexicographically.
    pub nodes: Vec<NodeWord>,
}

impl LatticeSlice {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Absolute address context: the word the slice root stands for.
    pub fn root_context(&self) -> &'static [u8] {
        match self.root_type {
            RootType::Epsilon => &[],
            RootType::TwoRooted => &[2],
        }
    }

    /// Number of lattice children of a node of this slice (1 or 2).
    pub fn degree(&self, node: &NodeWord) -> u8 {
        let last = node.last().or_else(|| self.root_context().last().copied());
        if last == Some(2) {
            1
        } else {
            2
        }
    }
}

impl LatticeConfig {
    fn check_depth(&self, n: usize) -> Result<()> {
        if n > self.depth_cap {
            Err(Error::DepthCap {
                requested: n,
                cap: self.depth_cap,
            })
        } else {
            Ok(())
        }
    }

    /// All lattice words of length exactly `n`, in lexicographic order.
    pub fn level_nodes(&self, n: usize) -> Result<Vec<NodeWord>> {
        self.check_depth(n)?;
        let mut level = vec![NodeWord::root()];
        for _ in 0..n {
            level = level
                .iter()
                .flat_map(|w| [w.child(1), w.child(2)].into_iter().flatten())
                .collect();
        }
        Ok(level)
    }

    pub fn support(&self, root_type: RootType, n: usize) -> Result<LatticeSlice> {
        if n == 0 {
            return Err(Error::InvalidArgument("support height must be at least 1".into()));
        }
        self.check_depth(n)?;
        let mut nodes = Vec::new();
        for len in 0..n {
            let level = self.level_nodes(len)?;
            match root_type {
                RootType::Epsilon => nodes.extend(level),
                RootType::TwoRooted => {
                    nodes.extend(level.into_iter().filter(|w| w.letters().first() != Some(&2)))
                }
            }
        }
        Ok(LatticeSlice {
            root_type,
            height: n,
            nodes,
        })
    }

    /// Counts colorings of `support(root_type, n)` with the root colored
    /// `root_color` by trying every assignment of live symbols to the
    /// non-root nodes.
    pub fn enumerate_colorings_naive(
        &self,
        spec: &MarkovFibSpec,
        root_type: RootType,
        n: usize,
        root_color: Symbol,
    ) -> Result<BigUint> {
        check_symbol(spec, root_color)?;
        let tree = SliceTree::build(&self.support(root_type, n)?);
        let palette = spec.live_symbols();
        if !spec.is_live(root_color) {
            return Ok(BigUint::zero());
        }
        let free = tree.nodes.len() - 1;
        let candidates = (palette.len() as u128).checked_pow(free as u32).unwrap_or(u128::MAX);
        if candidates > self.work_cap {
            return Err(Error::WorkCap {
                candidates,
                cap: self.work_cap,
            });
        }

        let mut digits = vec![0usize; free];
        let mut colors = vec![root_color; tree.nodes.len()];
        let mut count = 0u64;
        loop {
            for (slot, &d) in digits.iter().enumerate() {
                colors[slot + 1] = palette[d];
            }
            if tree.admits(spec, &colors) {
                count += 1;
            }
            // odometer
            let mut pos = 0;
            loop {
                if pos == free {
                    return Ok(BigUint::from(count));
                }
                digits[pos] += 1;
                if digits[pos] < palette.len() {
                    break;
                }
                digits[pos] = 0;
                pos += 1;
            }
        }
    }

    /// Same count as [`Self::enumerate_colorings_naive`], by bottom-up dynamic
    /// programming over the materialized slice tree.
    pub fn count_colorings_dp(
        &self,
        spec: &MarkovFibSpec,
        root_type: RootType,
        n: usize,
        root_color: Symbol,
    ) -> Result<BigUint> {
        check_symbol(spec, root_color)?;
        let tree = SliceTree::build(&self.support(root_type, n)?);
        let k = spec.k();
        let mut table: Vec<Vec<BigUint>> = vec![Vec::new(); tree.nodes.len()];
        for idx in (0..tree.nodes.len()).rev() {
            let node = &tree.nodes[idx];
            let row: Vec<BigUint> = (0..k)
                .map(|c| {
                    if !spec.is_live(c) {
                        return BigUint::zero();
                    }
                    match node.children.as_slice() {
                        [] => BigUint::one(),
                        [c1] => spec
                            .pairs_from(c)
                            .map(|j| &table[*c1][j])
                            .sum(),
                        [c1, c2] => spec
                            .triples_from(c)
                            .map(|(a, b)| &table[*c1][a] * &table[*c2][b])
                            .sum(),
                        _ => unreachable!("lattice nodes have at most two children"),
                    }
                })
                .collect();
            table[idx] = row;
        }
        Ok(table[0][root_color].clone())
    }
}

fn check_symbol(spec: &MarkovFibSpec, s: Symbol) -> Result<()> {
    if s < spec.k() {
        Ok(())
    } else {
        Err(Error::UnknownSymbol(format!("symbol index {s}")))
    }
}

#[derive(Debug)]
struct SliceNode {
    /// Child indices, in direction order. Empty on the last level.
    children: Vec<usize>,
}

/// Explicit parent/child structure of a slice, root at index 0, parents
/// before children.
#[derive(Debug)]
struct SliceTree {
    nodes: Vec<SliceNode>,
}

impl SliceTree {
    fn build(slice: &LatticeSlice) -> Self {
        let index: BTreeMap<&NodeWord, usize> =
            slice.nodes.iter().enumerate().map(|(i, w)| (w, i)).collect();
        let nodes = slice
            .nodes
            .iter()
            .map(|w| {
                let children = if w.len() + 1 < slice.height {
                    let dirs: &[u8] = if slice.degree(w) == 2 { &[1, 2] } else { &[1] };
                    dirs.iter()
                        .map(|&d| {
                            let child = w.child(d).expect("degree already checked");
                            index[&child]
                        })
                        .collect()
                } else {
                    Vec::new()
                };
                SliceNode { children }
            })
            .collect();
        SliceTree { nodes }
    }

    fn admits(&self, spec: &MarkovFibSpec, colors: &[Symbol]) -> bool {
        self.nodes.iter().enumerate().all(|(i, node)| match node.children.as_slice() {
            [] => true,
            [c1] => spec.allows_pair(colors[i], colors[*c1]),
            [c1, c2] => spec.allows_triple(colors[i], colors[*c1], colors[*c2]),
            _ => false,
        })
    }
}

pub fn level_nodes(n: usize) -> Result<Vec<NodeWord>> {
    LatticeConfig::default().level_nodes(n)
}

pub fn support(root_type: RootType, n: usize) -> Result<LatticeSlice> {
    LatticeConfig::default().support(root_type, n)
}

pub fn enumerate_colorings_naive(
    spec: &MarkovFibSpec,
    root_type: RootType,
    n: usize,
    root_color: Symbol,
) -> Result<BigUint> {
    LatticeConfig::default().enumerate_colorings_naive(spec, root_type, n, root_color)
}

pub fn count_colorings_dp(
    spec: &MarkovFibSpec,
    root_type: RootType,
    n: usize,
    root_color: Symbol,
) -> Result<BigUint> {
    LatticeConfig::default().count_colorings_dp(spec, root_type, n, root_color)
}
