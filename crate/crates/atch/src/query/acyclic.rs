//! GYO reduction: α-acyclicity testing and join-tree construction.

use std::collections::BTreeSet;

use super::PatternQuery;

/// One parent/child attachment in a join tree, labeled with the variables
/// the two templates share.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JoinEdge {
    pub child: usize,
    pub parent: usize,
    pub shared: BTreeSet<String>,
}

/// Tree over template indices. Every variable's occurrences form a
/// connected subtree (running intersection), which is what licenses
/// semijoin evaluation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JoinTree {
    pub root: usize,
    pub edges: Vec<JoinEdge>,
}

impl JoinTree {
    /// Children of `node`, in discovery order.
    pub fn children(&self, node: usize) -> Vec<usize> {
        self.edges
            .iter()
            .filter(|e| e.parent == node)
            .map(|e| e.child)
            .collect()
    }

    /// Nodes in breadth-first order from the root.
    pub fn bfs_order(&self, node_count: usize) -> Vec<usize> {
        let mut order = Vec::with_capacity(node_count);
        let mut queue = std::collections::VecDeque::from([self.root]);
        while let Some(n) = queue.pop_front() {
            order.push(n);
            for c in self.children(n) {
                queue.push_back(c);
            }
        }
        order
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Acyclicity {
    Acyclic(JoinTree),
    /// Indices of the templates that survive reduction; the irreducible
    /// core witnessing the cycle.
    Cyclic { residue: Vec<usize> },
}

impl Acyclicity {
    pub fn is_acyclic(&self) -> bool {
        matches!(self, Acyclicity::Acyclic(_))
    }
}

/// Decide α-acyclicity by GYO reduction: repeatedly delete variables
/// that occur in a single template and absorb templates whose remaining
/// variables are covered by another. A pattern is α-acyclic exactly when
/// this erases everything; the absorption order yields the join tree.
///
/// The pattern must contain at least one template.
pub fn is_alpha_acyclic(pattern: &PatternQuery) -> Acyclicity {
    assert!(
        !pattern.templates.is_empty(),
        "acyclicity is defined over non-empty patterns"
    );
    let original: Vec<BTreeSet<String>> = pattern
        .templates
        .iter()
        .map(|t| t.variables().into_iter().map(str::to_string).collect())
        .collect();
    let mut sets: Vec<Option<BTreeSet<String>>> = original.iter().cloned().map(Some).collect();
    let mut edges = Vec::new();

    loop {
        let mut changed = false;

        // Drop variables that occur in exactly one live template.
        let mut seen: std::collections::BTreeMap<&str, usize> = Default::default();
        for s in sets.iter().flatten() {
            for v in s {
                *seen.entry(v).or_default() += 1;
            }
        }
        let isolated: BTreeSet<String> = seen
            .into_iter()
            .filter(|(_, n)| *n == 1)
            .map(|(v, _)| v.to_string())
            .collect();
        if !isolated.is_empty() {
            for s in sets.iter_mut().flatten() {
                let before = s.len();
                s.retain(|v| !isolated.contains(v));
                changed |= s.len() != before;
            }
        }

        // Absorb the first template covered by another live template.
        'absorb: for i in 0..sets.len() {
            let Some(si) = sets[i].clone() else { continue };
            for (j, sj) in sets.iter().enumerate() {
                let Some(sj) = sj else { continue };
                if i != j && si.is_subset(sj) {
                    edges.push(JoinEdge {
                        child: i,
                        parent: j,
                        shared: original[i].intersection(&original[j]).cloned().collect(),
                    });
                    sets[i] = None;
                    changed = true;
                    break 'absorb;
                }
            }
        }

        if !changed {
            break;
        }
    }

    let live: Vec<usize> = (0..sets.len()).filter(|&i| sets[i].is_some()).collect();
    match live.as_slice() {
        [root] => {
            // Absorptions recorded child → parent, but a parent may itself
            // have been absorbed later. Reroot every recorded edge so all
            // paths lead to the surviving template.
            Acyclicity::Acyclic(reroot(*root, edges))
        }
        _ => Acyclicity::Cyclic { residue: live },
    }
}

/// The GYO pass records "i was absorbed into j" pairs; as a graph these
/// already form a tree on the template indices rooted at the survivor.
fn reroot(root: usize, edges: Vec<JoinEdge>) -> JoinTree {
    JoinTree { root, edges }
}
