//! Explicit game trees over a handful of worlds, for checking the front
//! algebra by hand.
//!
//! Fixture syntax is a nested list. `(max ...)` and `(min ...)` are inner
//! nodes, `[1 0 0]` is a leaf won in world 0 only. A bare word right after
//! `max`/`min` names the node. A `-` inside a leaf marks a world where the
//! leaf cannot be reached, so `(min [1 - -] [- 0 0])` is a Min node whose
//! two moves exist in different worlds.
//!
//! ```text
//! (max a
//!   (min b (max d [1 0 0] [0 1 1]) (max e [0 0 0] [1 0 0]))
//!   (min c (max f [0 0 0])))
//! ```

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::pareto::{OutcomeVector, ParetoFront, MAX_WORLDS};
use crate::search::{self, Deepening, SearchSpace, SearchStats, SpaceTable, Toggles};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TreeKind {
    Max,
    Min,
    Leaf(OutcomeVector),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeNode {
    pub kind: TreeKind,
    pub label: Option<String>,
    pub children: Vec<usize>,
    /// Worlds where the node can be reached.
    pub worlds: u64,
}

/// Nodes in preorder; node 0 is the root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tree {
    nodes: Vec<TreeNode>,
    world_count: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TreeError {
    /// Unexpected token or end of input, with the byte offset.
    Syntax { offset: usize, message: String },
    /// Leaves of different lengths, a leaf with no possible world, or Max
    /// children reachable in different worlds.
    MaskMismatch { node: String },
    Empty { node: String },
}

impl fmt::Display for TreeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TreeError::Syntax { offset, message } => write!(f, "tree syntax error at byte {offset}: {message}"),
            TreeError::MaskMismatch { node } => write!(f, "world masks disagree at node {node}"),
            TreeError::Empty { node } => write!(f, "node {node} has no children"),
        }
    }
}

impl core::error::Error for TreeError {}

struct Parser<'a> {
    text: &'a str,
    pos: usize,
    nodes: Vec<TreeNode>,
    width: Option<usize>,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, message: &str) -> Result<T, TreeError> {
        Err(TreeError::Syntax { offset: self.pos, message: message.to_string() })
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.text[self.pos..].chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else if c == ';' {
                // comment to end of line
                self.pos += self.text[self.pos..].find('\n').unwrap_or(self.text.len() - self.pos);
            } else {
                break;
            }
        }
    }

    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn word(&mut self) -> &'a str {
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c.is_alphanumeric() || c == '_' || c == '\'' {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
        &self.text[start..self.pos]
    }

    fn node(&mut self) -> Result<usize, TreeError> {
        self.skip_ws();
        match self.peek() {
            Some('[') => self.leaf(),
            Some('(') => self.inner(),
            Some(_) => self.err("expected `(` or `[`"),
            None => self.err("unexpected end of input"),
        }
    }

    fn leaf(&mut self) -> Result<usize, TreeError> {
        let start = self.pos;
        let Some(len) = self.text[start..].find(']') else {
            return self.err("unterminated leaf");
        };
        let body = &self.text[start + 1..start + len];
        self.pos = start + len + 1;
        let (mut values, mut valid, mut n) = (0u64, 0u64, 0usize);
        for tok in body.split_whitespace() {
            if n == MAX_WORLDS {
                return self.err("too many worlds");
            }
            match tok {
                "1" => {
                    values |= 1 << n;
                    valid |= 1 << n;
                }
                "0" => valid |= 1 << n,
                "-" => {}
                _ => {
                    self.pos = start;
                    return self.err("leaf entries are 0, 1 or -");
                }
            }
            n += 1;
        }
        let name = self.text[start..self.pos].to_string();
        if valid == 0 || self.width.is_some_and(|w| w != n) {
            return Err(TreeError::MaskMismatch { node: name });
        }
        self.width = Some(n);
        self.nodes.push(TreeNode {
            kind: TreeKind::Leaf(OutcomeVector::new(values, valid)),
            label: None,
            children: Vec::new(),
            worlds: valid,
        });
        Ok(self.nodes.len() - 1)
    }

    fn inner(&mut self) -> Result<usize, TreeError> {
        self.pos += 1;
        self.skip_ws();
        let kind = match self.word() {
            "max" => TreeKind::Max,
            "min" => TreeKind::Min,
            _ => return self.err("expected `max` or `min`"),
        };
        self.skip_ws();
        let label = match self.peek() {
            Some(c) if c.is_alphanumeric() => Some(self.word().to_string()),
            _ => None,
        };
        let id = self.nodes.len();
        self.nodes.push(TreeNode { kind, label, children: Vec::new(), worlds: 0 });
        let mut children = Vec::new();
        loop {
            self.skip_ws();
            match self.peek() {
                Some(')') => {
                    self.pos += 1;
                    break;
                }
                None => return self.err("missing `)`"),
                _ => children.push(self.node()?),
            }
        }
        let name = self.nodes[id].label.clone().unwrap_or_else(|| alloc::format!("#{id}"));
        if children.is_empty() {
            return Err(TreeError::Empty { node: name });
        }
        let masks: Vec<u64> = children.iter().map(|&c| self.nodes[c].worlds).collect();
        let worlds = masks.iter().fold(0, |a, &b| a | b);
        if self.nodes[id].kind == TreeKind::Max && masks.iter().any(|&m| m != worlds) {
            return Err(TreeError::MaskMismatch { node: name });
        }
        self.nodes[id].children = children;
        self.nodes[id].worlds = worlds;
        Ok(id)
    }
}

impl Tree {
    pub fn parse(text: &str) -> Result<Tree, TreeError> {
        let mut p = Parser { text, pos: 0, nodes: Vec::new(), width: None };
        p.node()?;
        p.skip_ws();
        if p.pos != text.len() {
            return p.err("trailing input");
        }
        Ok(Tree { world_count: p.width.unwrap_or(0), nodes: p.nodes })
    }

    pub fn nodes(&self) -> &[TreeNode] {
        &self.nodes
    }

    pub fn world_count(&self) -> usize {
        self.world_count
    }

    pub fn root_worlds(&self) -> u64 {
        self.nodes[0].worlds
    }

    pub fn find(&self, label: &str) -> Option<usize> {
        self.nodes.iter().position(|n| n.label.as_deref() == Some(label))
    }

    /// Per-world minimax with every player seeing the world.
    pub fn perfect_information(&self, id: usize) -> OutcomeVector {
        let node = &self.nodes[id];
        match &node.kind {
            TreeKind::Leaf(v) => *v,
            TreeKind::Max => node
                .children
                .iter()
                .map(|&c| self.perfect_information(c))
                .reduce(OutcomeVector::max)
                .expect("inner node has children"),
            TreeKind::Min => node
                .children
                .iter()
                .map(|&c| self.perfect_information(c).lift(node.worlds))
                .reduce(OutcomeVector::min)
                .expect("inner node has children"),
        }
    }

    /// Number of Max nodes on the longest root-to-leaf path.
    pub fn max_height(&self) -> u32 {
        fn walk(t: &Tree, id: usize) -> u32 {
            let n = &t.nodes[id];
            let below = n.children.iter().map(|&c| walk(t, c)).max().unwrap_or(0);
            below + u32::from(n.kind == TreeKind::Max)
        }
        walk(self, 0)
    }
}

/// [`SearchSpace`] over an explicit tree. Leaves end the search; an inner
/// node reached with `M = 0` gets its perfect-information value.
pub struct TreeSpace<'t> {
    tree: &'t Tree,
}

impl<'t> TreeSpace<'t> {
    pub fn new(tree: &'t Tree) -> TreeSpace<'t> {
        TreeSpace { tree }
    }
}

impl SearchSpace for TreeSpace<'_> {
    type Node = usize;
    type Move = usize;
    type Key = usize;

    fn is_max(&self, node: &usize) -> bool {
        self.tree.nodes[*node].kind == TreeKind::Max
    }

    fn key(&self, node: &usize) -> usize {
        *node
    }

    fn decided(&mut self, node: &usize, worlds: u64) -> Option<OutcomeVector> {
        match self.tree.nodes[*node].kind {
            TreeKind::Leaf(v) => {
                debug_assert_eq!(v.valid(), worlds);
                Some(v)
            }
            _ => None,
        }
    }

    fn evaluate(&mut self, node: &usize, worlds: u64) -> OutcomeVector {
        let v = self.tree.perfect_information(*node);
        debug_assert_eq!(v.valid(), worlds);
        v
    }

    fn moves(&mut self, node: &usize, worlds: u64, out: &mut Vec<(usize, u64)>) {
        out.clear();
        for &c in &self.tree.nodes[*node].children {
            let w = self.tree.nodes[c].worlds & worlds;
            if w != 0 {
                out.push((c, w));
            }
        }
    }

    fn play(&self, _node: &usize, mv: usize) -> usize {
        mv
    }
}

/// Plain search of the whole tree (no depth limit).
pub fn abstract_tree_search(tree: &Tree) -> ParetoFront {
    front_of(tree, 0)
}

/// Plain search of the subtree rooted at `node`.
pub fn front_of(tree: &Tree, node: usize) -> ParetoFront {
    let mut space = TreeSpace::new(tree);
    let depth = tree.max_height().max(1);
    search::alphamu_plain(&mut space, &node, depth, tree.nodes[node].worlds)
}

/// Iterative deepening over a tree whose root is a Max node.
pub fn abstract_tree_deepening(
    tree: &Tree,
    max_depth: u32,
    toggles: Toggles,
    tt: &mut SpaceTable<TreeSpace<'_>>,
) -> Deepening<usize> {
    let mut space = TreeSpace::new(tree);
    let worlds = tree.root_worlds();
    let mut moves = Vec::new();
    space.moves(&0, worlds, &mut moves);
    search::iterative_deepening(&mut space, &0, worlds, &moves, max_depth, toggles, tt)
}

/// Stats-carrying plain search, for comparisons in tests.
pub fn abstract_plain_stats(tree: &Tree, depth: u32) -> (ParetoFront, SearchStats) {
    let mut space = TreeSpace::new(tree);
    let mut stats = SearchStats::default();
    let f = search::alphamu_plain_with_stats(&mut space, &0, depth, tree.root_worlds(), &mut stats);
    (f, stats)
}

/// The non-locality example: three worlds, Min knows the world.
pub const FIG_NON_LOCALITY: &str = "(max a
  (min b (max d [1 0 0] [0 1 1]) (max e [0 0 0] [1 0 0]))
  (min c (max f [0 0 0])))";

/// Product of fronts at a Min node.
pub const FIG_PRODUCT: &str = "(min a
  (max b [0 1 1] [1 1 0])
  (max c [1 1 0] [1 0 1] [1 0 0]))";

/// Early cut: after move b the root front is {[1 1 0],[0 1 1]}, and node
/// c's shallow value [1 1 0] is already dominated by it.
pub const FIG_EARLY_CUT: &str = "(max a
  (min b (max [1 1 0] [0 1 1]))
  (min c (max [1 0 0] [0 1 0]) (max [1 1 1])))";
