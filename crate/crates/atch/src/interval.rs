//! Static augmented interval tree over closed `[start, end]` intervals.
//!
//! Built once per snapshot from the full entry set; a balanced BST ordered
//! by start, where each node also tracks the maximum end in its subtree so
//! whole subtrees can be pruned. Stabbing and window queries run in
//! O(log n + k). Results come back in (start, end, insertion) order because
//! the traversal is in-order over a sorted build.

#[derive(Debug)]
struct Node<T> {
    start: i64,
    end: i64,
    item: T,
    max_end: i64,
    left: Option<Box<Node<T>>>,
    right: Option<Box<Node<T>>>,
}

#[derive(Debug)]
pub struct IntervalIndex<T> {
    root: Option<Box<Node<T>>>,
    len: usize,
}

impl<T> IntervalIndex<T> {
    /// Build from `(start, end, item)` entries. Closed intervals; use
    /// `i64::MAX` as the end for unbounded ones.
    pub fn build(mut entries: Vec<(i64, i64, T)>) -> Self {
        let len = entries.len();
        // Stable sort keeps insertion order for equal keys deterministic.
        entries.sort_by_key(|e| (e.0, e.1));
        let root = Self::build_node(entries);
        IntervalIndex { root, len }
    }

    fn build_node(mut entries: Vec<(i64, i64, T)>) -> Option<Box<Node<T>>> {
        if entries.is_empty() {
            return None;
        }
        let mid = entries.len() / 2;
        let right_entries = entries.split_off(mid + 1);
        let (start, end, item) = entries.pop().expect("mid element present");
        let left = Self::build_node(entries);
        let right = Self::build_node(right_entries);
        let mut max_end = end;
        if let Some(l) = &left {
            max_end = max_end.max(l.max_end);
        }
        if let Some(r) = &right {
            max_end = max_end.max(r.max_end);
        }
        Some(Box::new(Node {
            start,
            end,
            item,
            max_end,
            left,
            right,
        }))
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// All items whose interval contains instant `t`.
    pub fn stab(&self, t: i64) -> Vec<&T> {
        self.overlapping(t, t)
    }

    /// All items whose interval intersects the closed window `[lo, hi]`.
    pub fn overlapping(&self, lo: i64, hi: i64) -> Vec<&T> {
        let mut out = Vec::new();
        if lo <= hi {
            Self::collect(&self.root, lo, hi, &mut out);
        }
        out
    }

    fn collect<'a>(node: &'a Option<Box<Node<T>>>, lo: i64, hi: i64, out: &mut Vec<&'a T>) {
        let Some(n) = node else { return };
        if n.max_end < lo {
            // Nothing in this subtree reaches the window.
            return;
        }
        Self::collect(&n.left, lo, hi, out);
        if n.start <= hi && n.end >= lo {
            out.push(&n.item);
        }
        if n.start <= hi {
            Self::collect(&n.right, lo, hi, out);
        }
    }
}
