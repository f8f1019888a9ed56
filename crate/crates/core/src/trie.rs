//! Canonical subspace tries.
//!
//! A [`SubspaceTrie`] stores a union of same-width cubes as a binary trie
//! over positions: the edge taken at depth `d` is the value of variable
//! `v_{d+1}`, a shared `x` edge stands for both values at once, and every
//! root-to-leaf path is one cube of the union. Inserting a cube carves it
//! against the paths already present, so the stored leaves are always
//! pairwise disjoint and the occupied volume is an exact cell count.
//!
//! Two local rules keep the structure canonical, independent of insertion
//! order:
//!
//! - x-exclusivity: a node never carries a free edge next to a `0` or `1`
//!   edge. An inserted fixed trit meeting a free edge splits the shared
//!   child in two; an inserted free trit meeting a split node descends
//!   both sides.
//! - sibling merging: when the `0` and `1` children of a node become
//!   structurally identical, they collapse into a single free edge.
//!   Equality checks ride on cached subtree fingerprints and fall back to
//!   a structural walk on fingerprint match, so merging is exact.
//!
//! The printed form compresses the sorted leaf list: the first leaf in
//! full, each later leaf as its suffix from the position where it diverges
//! from the previous one, joined with `|`. A fully occupied width-4 trie
//! prints `xxxx`; an empty one prints as the empty string.

use crate::cube::{Trit, TritCube};
use crate::rng::splitmix64;
use crate::MAX_COUNT_WIDTH;
use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;
use thiserror::Error;

/// Errors from trie construction, insertion, and deserialization.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TrieError {
    /// Tries need at least one position.
    #[error("trie width must be at least 1")]
    ZeroWidth,
    /// Counting structures cap width so volumes fit `u128`.
    #[error("trie width {width} exceeds supported maximum {max}")]
    WidthTooLarge {
        /// The requested width.
        width: u32,
        /// The supported maximum.
        max: u32,
    },
    /// A cube of a different width was offered.
    #[error("width mismatch: trie is {trie} wide, cube is {cube}")]
    WidthMismatch {
        /// Width of the trie.
        trie: u32,
        /// Width of the offered cube.
        cube: u32,
    },
    /// A serialized segment was empty, too long, or held a bad character.
    #[error("malformed segment at index {index}")]
    MalformedSegment {
        /// Zero-based index of the offending `|`-separated segment.
        index: usize,
    },
}

const FP_LEAF: u64 = 0x1eaf_1eaf_1eaf_1eaf;
const FP_ABSENT: u64 = 0x0b5e_17ee_0b5e_17ee;
const TAG_FREE: u64 = 0xf4ee;
const TAG_SPLIT: u64 = 0x5b11;

fn mix(a: u64, b: u64) -> u64 {
    splitmix64(a ^ b.rotate_left(31))
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Node {
    /// Canonical subtree fingerprint; recomputed bottom-up on mutation.
    /// Field order matters: derived equality compares it first, so
    /// structural comparison fails fast on differing subtrees.
    fp: u64,
    kids: Kids,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Kids {
    /// Depth equals the trie width; one occupied cell set terminates here.
    Leaf,
    /// Shared child for both variable values; never has siblings.
    Free(Box<Node>),
    /// Distinct halves; at least one side present, and when both are,
    /// they are structurally different (else they merge into `Free`).
    Split {
        zero: Option<Box<Node>>,
        one: Option<Box<Node>>,
    },
}

impl Node {
    fn leaf() -> Box<Node> {
        Box::new(Node {
            fp: FP_LEAF,
            kids: Kids::Leaf,
        })
    }

    fn with_kids(kids: Kids) -> Box<Node> {
        let mut n = Box::new(Node { fp: 0, kids });
        n.refresh_fp();
        n
    }

    fn refresh_fp(&mut self) {
        self.fp = match &self.kids {
            Kids::Leaf => FP_LEAF,
            Kids::Free(c) => mix(TAG_FREE, c.fp),
            Kids::Split { zero, one } => {
                let z = zero.as_ref().map_or(FP_ABSENT, |n| n.fp);
                let o = one.as_ref().map_or(FP_ABSENT, |n| n.fp);
                mix(mix(TAG_SPLIT, z), o)
            }
        };
    }

    /// Whether this subtree covers its whole subspace, which in canonical
    /// form is exactly the all-free chain down to the leaf.
    fn is_full(&self) -> bool {
        let mut node = self;
        loop {
            match &node.kids {
                Kids::Leaf => return true,
                Kids::Free(c) => node = c,
                Kids::Split { .. } => return false,
            }
        }
    }

    fn volume(&self) -> u128 {
        match &self.kids {
            Kids::Leaf => 1,
            Kids::Free(c) => c.volume() << 1,
            Kids::Split { zero, one } => {
                zero.as_ref().map_or(0, |n| n.volume()) + one.as_ref().map_or(0, |n| n.volume())
            }
        }
    }
}

/// A chain of nodes matching the cube's trits from `depth` down.
fn fresh_chain(cube: &TritCube, depth: u32) -> Box<Node> {
    if depth == cube.width() {
        return Node::leaf();
    }
    let child = fresh_chain(cube, depth + 1);
    let kids = match cube.trit(depth) {
        Trit::Free => Kids::Free(child),
        Trit::Zero => Kids::Split {
            zero: Some(child),
            one: None,
        },
        Trit::One => Kids::Split {
            zero: None,
            one: Some(child),
        },
    };
    Node::with_kids(kids)
}

fn insert_rec(node: &mut Node, cube: &TritCube, depth: u32) {
    if depth == cube.width() {
        debug_assert!(matches!(node.kids, Kids::Leaf));
        return;
    }
    // Fully occupied subspaces absorb anything without structural churn.
    if node.is_full() {
        return;
    }
    let trit = cube.trit(depth);
    match (&mut node.kids, trit) {
        (Kids::Leaf, _) => unreachable!("leaf above full depth"),
        (Kids::Free(shared), Trit::Free) => insert_rec(shared, cube, depth + 1),
        (Kids::Free(shared), _) => {
            // A fixed trit meets a shared edge: split the shared child and
            // descend the matching half.
            let left = shared.clone();
            let right = left.clone();
            let (mut zero, mut one) = (Some(left), Some(right));
            let side = if trit == Trit::Zero { &mut zero } else { &mut one };
            insert_rec(side.as_mut().expect("side just filled"), cube, depth + 1);
            node.kids = Kids::Split { zero, one };
        }
        (Kids::Split { zero, one }, Trit::Free) => {
            for side in [zero, one] {
                match side {
                    Some(child) => insert_rec(child, cube, depth + 1),
                    None => *side = Some(fresh_chain(cube, depth + 1)),
                }
            }
        }
        (Kids::Split { zero, one }, _) => {
            let side = if trit == Trit::Zero { zero } else { one };
            match side {
                Some(child) => insert_rec(child, cube, depth + 1),
                None => *side = Some(fresh_chain(cube, depth + 1)),
            }
        }
    }
    // Identical halves collapse into a shared edge; checked after every
    // mutation so merges cascade bottom-up.
    if let Kids::Split {
        zero: Some(z),
        one: Some(o),
    } = &mut node.kids
    {
        if z == o {
            let merged = core::mem::replace(z, Node::leaf());
            node.kids = Kids::Free(merged);
        }
    }
    node.refresh_fp();
}

/// Node, leaf, and printed-length totals for one trie.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SizeMetrics {
    /// Nodes below the root (equivalently, edges).
    pub node_count: u64,
    /// Nodes at full depth; one per stored cube.
    pub leaf_count: u64,
    /// Length in characters of [`SubspaceTrie::serialize`]'s output,
    /// separators included.
    pub serialized_length: u64,
}

/// A canonical trie over `{0, 1}`-valued positions storing a union of
/// width-`N` cubes in disjoint form. See the module docs for the layout
/// and canonicality rules.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubspaceTrie {
    width: u32,
    root: Option<Box<Node>>,
}

impl SubspaceTrie {
    /// An empty trie over `width` positions.
    pub fn new(width: u32) -> Result<SubspaceTrie, TrieError> {
        if width == 0 {
            return Err(TrieError::ZeroWidth);
        }
        if width > MAX_COUNT_WIDTH {
            return Err(TrieError::WidthTooLarge {
                width,
                max: MAX_COUNT_WIDTH,
            });
        }
        Ok(SubspaceTrie { width, root: None })
    }

    /// Number of positions.
    pub fn width(&self) -> u32 {
        self.width
    }

    /// Whether nothing is occupied.
    pub fn is_empty(&self) -> bool {
        self.root.is_none()
    }

    /// Whether the whole space is occupied; walks the all-free chain, so
    /// this costs at most one node per level.
    pub fn is_full(&self) -> bool {
        self.root.as_ref().is_some_and(|r| r.is_full())
    }

    /// Canonical fingerprint of the stored set; equal sets have equal
    /// fingerprints regardless of how they were inserted.
    pub fn fingerprint(&self) -> u64 {
        self.root.as_ref().map_or(FP_ABSENT, |r| r.fp)
    }

    /// Adds every cell of `cube` to the occupied set.
    ///
    /// Width is checked before anything is touched, so a failed insert
    /// leaves the trie exactly as it was. Re-inserting covered cells is a
    /// no-op, and inserts never change the set represented by other paths,
    /// only how they are shared.
    pub fn insert(&mut self, cube: &TritCube) -> Result<(), TrieError> {
        if cube.width() != self.width {
            return Err(TrieError::WidthMismatch {
                trie: self.width,
                cube: cube.width(),
            });
        }
        match &mut self.root {
            None => self.root = Some(fresh_chain(cube, 0)),
            Some(root) => insert_rec(root, cube, 0),
        }
        Ok(())
    }

    /// Exact number of occupied cells.
    pub fn occupied_volume(&self) -> u128 {
        self.root.as_ref().map_or(0, |r| r.volume())
    }

    /// Occupied volume over total volume, in `[0, 1]`.
    pub fn fill_fraction(&self) -> f64 {
        self.occupied_volume() as f64 / (1u128 << self.width) as f64
    }

    /// Exact number of unoccupied cells.
    pub fn free_volume(&self) -> u128 {
        (1u128 << self.width) - self.occupied_volume()
    }

    /// The stored cubes (leaf paths) in canonical order: `0` before `1`,
    /// shared `x` edges standing alone.
    pub fn leaves(&self) -> Vec<TritCube> {
        let mut out = Vec::new();
        let mut path = Vec::with_capacity(self.width as usize);
        if let Some(root) = &self.root {
            collect_leaves(root, &mut path, &mut out);
        }
        out
    }

    /// Prints the trie as its sorted leaf list with shared-prefix
    /// compression: first leaf in full, every later leaf as the suffix
    /// from its divergence with the previous leaf, joined by `|`.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        let mut prev: Vec<char> = Vec::new();
        for leaf in self.leaves() {
            let chars: Vec<char> = leaf.trits().map(Trit::to_char).collect();
            if prev.is_empty() {
                out.extend(chars.iter());
            } else {
                let div = prev
                    .iter()
                    .zip(&chars)
                    .position(|(a, b)| a != b)
                    .expect("consecutive leaves differ");
                out.push('|');
                out.extend(chars[div..].iter());
            }
            prev = chars;
        }
        out
    }

    /// Rebuilds a trie from [`serialize`](Self::serialize) output: each
    /// segment replaces the tail of the previously reconstructed cube.
    /// The empty string is the empty trie. Well-formed text that no
    /// serializer produced is still accepted and inserted cube by cube.
    pub fn deserialize(text: &str, width: u32) -> Result<SubspaceTrie, TrieError> {
        let mut trie = SubspaceTrie::new(width)?;
        if text.is_empty() {
            return Ok(trie);
        }
        let mut expr: Vec<char> = Vec::new();
        for (index, segment) in text.split('|').enumerate() {
            let len = segment.chars().count();
            if len == 0 || len > width as usize {
                return Err(TrieError::MalformedSegment { index });
            }
            if segment.chars().any(|c| !matches!(c, '0' | '1' | 'x')) {
                return Err(TrieError::MalformedSegment { index });
            }
            if index == 0 {
                if len != width as usize {
                    return Err(TrieError::MalformedSegment { index });
                }
                expr = segment.chars().collect();
            } else {
                let keep = width as usize - len;
                expr.truncate(keep);
                expr.extend(segment.chars());
            }
            let text: String = expr.iter().collect();
            let cube = TritCube::parse(&text).expect("validated segment characters");
            trie.insert(&cube).expect("width fixed by construction");
        }
        Ok(trie)
    }

    /// Node, leaf, and serialized-length totals, computed in one walk
    /// without building the printed string.
    pub fn size_metrics(&self) -> SizeMetrics {
        let Some(root) = &self.root else {
            return SizeMetrics::default();
        };
        let mut m = SizeMetrics {
            node_count: 0,
            leaf_count: 0,
            serialized_length: self.width as u64,
        };
        fn walk(node: &Node, depth: u32, width: u32, m: &mut SizeMetrics) {
            m.node_count += 1;
            match &node.kids {
                Kids::Leaf => m.leaf_count += 1,
                Kids::Free(c) => walk(c, depth + 1, width, m),
                Kids::Split { zero, one } => {
                    if zero.is_some() && one.is_some() {
                        // Adjacent leaves across this split diverge here:
                        // the later one prints its suffix plus a separator.
                        m.serialized_length += (width - depth) as u64 + 1;
                    }
                    for side in [zero, one].into_iter().flatten() {
                        walk(side, depth + 1, width, m);
                    }
                }
            }
        }
        // The root itself is not counted; node_count matches edge count.
        walk(root, 0, self.width, &mut m);
        m.node_count -= 1;
        m
    }

    /// Unoccupied cells as assignments, smallest first, up to `limit`.
    ///
    /// Walks the complement: absent branches are entirely free, so each
    /// contributes a block of solutions without any per-cell test.
    pub fn enumerate_solutions(&self, limit: usize) -> Vec<Vec<bool>> {
        let mut out = Vec::new();
        if limit == 0 {
            return out;
        }
        let mut prefix = Vec::with_capacity(self.width as usize);
        complement_rec(
            self.root.as_deref(),
            self.width,
            &mut prefix,
            &mut out,
            limit,
        );
        out
    }

    /// Verifies every structural invariant, for tests and debugging:
    /// leaves exactly at full depth, splits never empty, both-sided splits
    /// structurally distinct, fingerprints consistent.
    pub fn check_invariants(&self) -> Result<(), String> {
        fn walk(node: &Node, depth: u32, width: u32) -> Result<(), String> {
            let mut expect = node.clone();
            expect.refresh_fp();
            if expect.fp != node.fp {
                return Err(alloc::format!("stale fingerprint at depth {depth}"));
            }
            match &node.kids {
                Kids::Leaf => {
                    if depth != width {
                        return Err(alloc::format!("leaf at depth {depth} of {width}"));
                    }
                    Ok(())
                }
                Kids::Free(c) => {
                    if depth >= width {
                        return Err(String::from("free edge below full depth"));
                    }
                    walk(c, depth + 1, width)
                }
                Kids::Split { zero, one } => {
                    if depth >= width {
                        return Err(String::from("split below full depth"));
                    }
                    if zero.is_none() && one.is_none() {
                        return Err(alloc::format!("childless split at depth {depth}"));
                    }
                    if let (Some(z), Some(o)) = (zero, one) {
                        if z == o {
                            return Err(alloc::format!("unmerged identical halves at {depth}"));
                        }
                    }
                    for side in [zero, one].into_iter().flatten() {
                        walk(side, depth + 1, width)?;
                    }
                    Ok(())
                }
            }
        }
        match &self.root {
            None => Ok(()),
            Some(root) => walk(root, 0, self.width),
        }
    }
}

fn collect_leaves(node: &Node, path: &mut Vec<Trit>, out: &mut Vec<TritCube>) {
    match &node.kids {
        Kids::Leaf => out.push(TritCube::from_trits(path).expect("non-empty path")),
        Kids::Free(c) => {
            path.push(Trit::Free);
            collect_leaves(c, path, out);
            path.pop();
        }
        Kids::Split { zero, one } => {
            for (trit, side) in [(Trit::Zero, zero), (Trit::One, one)] {
                if let Some(child) = side {
                    path.push(trit);
                    collect_leaves(child, path, out);
                    path.pop();
                }
            }
        }
    }
}

fn complement_rec(
    node: Option<&Node>,
    width: u32,
    prefix: &mut Vec<bool>,
    out: &mut Vec<Vec<bool>>,
    limit: usize,
) {
    if out.len() >= limit {
        return;
    }
    if prefix.len() == width as usize {
        if node.is_none() {
            out.push(prefix.clone());
        }
        return;
    }
    for value in [false, true] {
        let child = match node {
            None => None,
            Some(n) => match &n.kids {
                Kids::Leaf => unreachable!("leaf above full depth"),
                Kids::Free(c) => Some(c.as_ref()),
                Kids::Split { zero, one } => {
                    if value { one } else { zero }.as_deref()
                }
            },
        };
        prefix.push(value);
        complement_rec(child, width, prefix, out, limit);
        prefix.pop();
    }
}
