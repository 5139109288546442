use super::index::IdIndex;
use crate::Key;

/// Optional owned subtree; `None` is an empty subtree.
pub type Link = Option<Box<Node>>;

/// One node of an interpolation search tree.
///
/// A leaf keeps its keys in `rep` and has no children. An inner node also
/// has `rep.len() + 1` children, where child `j` holds keys strictly between
/// `rep[j - 1]` and `rep[j]`, and an interpolation index over `rep`.
/// `exists[i] == false` marks `rep[i]` as logically removed.
#[derive(Clone, Debug, PartialEq)]
pub struct Node {
    pub(crate) rep: Vec<Key>,
    pub(crate) exists: Vec<bool>,
    pub(crate) children: Vec<Link>,
    pub(crate) id_index: Option<IdIndex>,
    pub(crate) size: usize,
    pub(crate) init_subtree_size: usize,
    pub(crate) mod_cnt: usize,
}

impl Node {
    /// Leaf holding `rep`, every key present.
    pub fn leaf(rep: Vec<Key>) -> Node {
        let exists = vec![true; rep.len()];
        Node::from_parts(rep, exists, Vec::new(), None)
    }

    /// Assembles a node by hand. `size` and `init_subtree_size` are computed
    /// from the contents and `mod_cnt` starts at zero. Nothing else is
    /// checked; run [`validate`](super::validate) on the result.
    pub fn from_parts(
        rep: Vec<Key>,
        exists: Vec<bool>,
        children: Vec<Link>,
        id_index: Option<IdIndex>,
    ) -> Node {
        let own = exists.iter().filter(|&&e| e).count();
        let below: usize = children.iter().flatten().map(|c| c.size).sum();
        let size = own + below;
        Node {
            rep,
            exists,
            children,
            id_index,
            size,
            init_subtree_size: size,
            mod_cnt: 0,
        }
    }

    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }

    pub fn rep(&self) -> &[Key] {
        &self.rep
    }

    pub fn exists(&self) -> &[bool] {
        &self.exists
    }

    pub fn children(&self) -> &[Link] {
        &self.children
    }

    pub fn child(&self, j: usize) -> Option<&Node> {
        self.children.get(j).and_then(|c| c.as_deref())
    }

    pub fn id_index(&self) -> Option<&IdIndex> {
        self.id_index.as_ref()
    }

    /// Logically present keys in this subtree.
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn init_subtree_size(&self) -> usize {
        self.init_subtree_size
    }

    pub fn mod_cnt(&self) -> usize {
        self.mod_cnt
    }

    /// Edges on the longest downward path; a lone leaf has height 0.
    pub fn height(&self) -> usize {
        self.children
            .iter()
            .flatten()
            .map(|c| c.height() + 1)
            .max()
            .unwrap_or(0)
    }

    pub fn node_count(&self) -> usize {
        1 + self
            .children
            .iter()
            .flatten()
            .map(|c| c.node_count())
            .sum::<usize>()
    }

    /// Keys stored in `rep` arrays of the subtree, tombstoned or not.
    pub fn physical_len(&self) -> usize {
        self.rep.len()
            + self
                .children
                .iter()
                .flatten()
                .map(|c| c.physical_len())
                .sum::<usize>()
    }
}
