use crate::diagnostic::{Code, Diagnostic};

use super::DistanceMatrix;

/// Disjoint-set forest with path halving and union by size.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
    sets: usize,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            size: vec![1; n],
            sets: n,
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Joins the sets of `a` and `b`; false if they were already joined.
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
        self.sets -= 1;
        true
    }

    pub fn sets(&self) -> usize {
        self.sets
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MstEdge {
    /// Always `i < j`.
    pub i: usize,
    pub j: usize,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MstResult {
    pub labels: Vec<String>,
    /// In the order Kruskal accepted them.
    pub edges: Vec<MstEdge>,
    /// Tree-edge distances; every other cell, the diagonal included, is `None`.
    pub pruned: Vec<Vec<Option<f64>>>,
    pub adjacency: Vec<Vec<u8>>,
}

impl MstResult {
    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.weight).sum()
    }
}

/// Kruskal over the complete graph of `dist`.
///
/// Edges are taken by ascending weight; equal weights are ordered by the
/// pair (smaller label, larger label), then by index pair for duplicate
/// labels.
pub fn kruskal_mst(dist: &DistanceMatrix) -> Result<MstResult, Diagnostic> {
    let n = dist.len();
    if n == 0 {
        return Err(Diagnostic::error(Code::Empty, "/", "cannot span an empty distance matrix"));
    }
    let labels = &dist.labels;
    let key = |i: usize, j: usize| {
        let (a, b) = (labels[i].as_str(), labels[j].as_str());
        if a <= b {
            (a, b)
        } else {
            (b, a)
        }
    };
    let mut candidates: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    candidates.sort_by(|&(i1, j1), &(i2, j2)| {
        dist.cells[i1][j1]
            .total_cmp(&dist.cells[i2][j2])
            .then_with(|| key(i1, j1).cmp(&key(i2, j2)))
            .then_with(|| (i1, j1).cmp(&(i2, j2)))
    });

    let mut uf = UnionFind::new(n);
    let mut edges = Vec::with_capacity(n - 1);
    for (i, j) in candidates {
        if uf.union(i, j) {
            edges.push(MstEdge { i, j, weight: dist.cells[i][j] });
            if edges.len() == n - 1 {
                break;
            }
        }
    }

    let mut pruned = vec![vec![None; n]; n];
    let mut adjacency = vec![vec![0u8; n]; n];
    for e in &edges {
        pruned[e.i][e.j] = Some(e.weight);
        pruned[e.j][e.i] = Some(e.weight);
        adjacency[e.i][e.j] = 1;
        adjacency[e.j][e.i] = 1;
    }
    Ok(MstResult {
        labels: labels.clone(),
        edges,
        pruned,
        adjacency,
    })
}
