use std::collections::HashMap;

use serde::Serialize;

use super::DirectorGraph;
use crate::model::DirectorId;

/// Union-find with path halving and union by size.
#[derive(Debug, Clone)]
pub struct DisjointSet {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl DisjointSet {
    pub fn new(n: usize) -> Self {
        DisjointSet {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, mut v: usize) -> usize {
        while self.parent[v] != v {
            self.parent[v] = self.parent[self.parent[v]];
            v = self.parent[v];
        }
        v
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
        true
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Cluster {
    /// Smallest director id in the component.
    pub component_id: DirectorId,
    pub node_count: usize,
    /// Distinct director pairs inside the component.
    pub edge_count: usize,
}

/// Connected components, largest first (then by edge count, then id).
pub fn clusters(graph: &DirectorGraph) -> Vec<Cluster> {
    let ids: Vec<DirectorId> = graph.nodes().keys().copied().collect();
    let pos: HashMap<DirectorId, usize> = ids.iter().enumerate().map(|(i, d)| (*d, i)).collect();
    let mut dsu = DisjointSet::new(ids.len());
    for &(a, b) in graph.pairs().keys() {
        dsu.union(pos[&a], pos[&b]);
    }
    // ids are ascending, so the first member seen per root is the smallest.
    let mut by_root: HashMap<usize, Cluster> = HashMap::new();
    for (i, id) in ids.iter().enumerate() {
        let root = dsu.find(i);
        by_root
            .entry(root)
            .or_insert(Cluster {
                component_id: *id,
                node_count: 0,
                edge_count: 0,
            })
            .node_count += 1;
    }
    for &(a, _) in graph.pairs().keys() {
        let root = dsu.find(pos[&a]);
        if let Some(c) = by_root.get_mut(&root) {
            c.edge_count += 1;
        }
    }
    let mut out: Vec<Cluster> = by_root.into_values().collect();
    out.sort_by(|x, y| {
        y.node_count
            .cmp(&x.node_count)
            .then(y.edge_count.cmp(&x.edge_count))
            .then(x.component_id.cmp(&y.component_id))
    });
    out
}
