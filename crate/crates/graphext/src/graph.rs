//! Finite directed multigraphs with named vertices and edges.
//!
//! Vertex and edge insertion order is significant: it fixes the row/column
//! order of every derived matrix and the listing order of every derived set,
//! so identical inputs always produce identical outputs.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::matrix::IntMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("duplicate vertex id `{0}`")]
    DuplicateVertex(String),
    #[error("duplicate edge id `{0}`")]
    DuplicateEdge(String),
    #[error("edge `{edge}` refers to undeclared vertex `{vertex}`")]
    DanglingEndpoint { edge: String, vertex: String },
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
}

/// A directed edge; parallel edges and self-loops are allowed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Edge {
    pub id: String,
    pub src: String,
    pub dst: String,
}

#[derive(Debug, Clone)]
pub struct Graph {
    vertices: Vec<String>,
    edges: Vec<Edge>,
    vertex_index: HashMap<String, usize>,
    out_edges: Vec<Vec<usize>>,
    in_edges: Vec<Vec<usize>>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.edges == other.edges
    }
}

impl Eq for Graph {}

/// Whether a path count is finite, and its exact value when it is.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PathCount {
    Finite(BigUint),
    Infinite,
}

impl PathCount {
    pub fn as_finite(&self) -> Option<&BigUint> {
        match self {
            PathCount::Finite(n) => Some(n),
            PathCount::Infinite => None,
        }
    }
}

/// Result of the loop-exit check: `witness` is an exitless loop, given as
/// its edge ids in cycle order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConditionL {
    pub holds: bool,
    pub witness: Option<Vec<String>>,
}

/// Result of the simple-loop-count check: `witness` is a vertex that is the
/// base of exactly one simple loop.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConditionK {
    pub holds: bool,
    pub witness: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum LoopCount {
    Zero,
    One,
    TwoOrMore,
}

impl Graph {
    pub fn new(vertices: Vec<String>, edges: Vec<Edge>) -> Result<Self, GraphError> {
        let mut vertex_index = HashMap::with_capacity(vertices.len());
        for (i, v) in vertices.iter().enumerate() {
            if vertex_index.insert(v.clone(), i).is_some() {
                return Err(GraphError::DuplicateVertex(v.clone()));
            }
        }
        let mut edge_ids = HashMap::with_capacity(edges.len());
        let mut out_edges = vec![Vec::new(); vertices.len()];
        let mut in_edges = vec![Vec::new(); vertices.len()];
        for (k, e) in edges.iter().enumerate() {
            if edge_ids.insert(e.id.clone(), k).is_some() {
                return Err(GraphError::DuplicateEdge(e.id.clone()));
            }
            let s = *vertex_index
                .get(&e.src)
                .ok_or_else(|| GraphError::DanglingEndpoint {
                    edge: e.id.clone(),
                    vertex: e.src.clone(),
                })?;
            let t = *vertex_index
                .get(&e.dst)
                .ok_or_else(|| GraphError::DanglingEndpoint {
                    edge: e.id.clone(),
                    vertex: e.dst.clone(),
                })?;
            out_edges[s].push(k);
            in_edges[t].push(k);
        }
        Ok(Graph {
            vertices,
            edges,
            vertex_index,
            out_edges,
            in_edges,
        })
    }

    /// Convenience constructor from borrowed ids: `(edge id, src, dst)`.
    pub fn build(vertices: &[&str], edges: &[(&str, &str, &str)]) -> Result<Self, GraphError> {
        Graph::new(
            vertices.iter().map(|s| s.to_string()).collect(),
            edges
                .iter()
                .map(|(id, src, dst)| Edge {
                    id: id.to_string(),
                    src: src.to_string(),
                    dst: dst.to_string(),
                })
                .collect(),
        )
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_vertex(&self, id: &str) -> bool {
        self.vertex_index.contains_key(id)
    }

    pub(crate) fn vertex_idx(&self, id: &str) -> Result<usize, GraphError> {
        self.vertex_index
            .get(id)
            .copied()
            .ok_or_else(|| GraphError::UnknownVertex(id.to_string()))
    }

    pub(crate) fn out_edge_indices(&self, v: usize) -> &[usize] {
        &self.out_edges[v]
    }

    pub(crate) fn edge_endpoints(&self, e: usize) -> (usize, usize) {
        let edge = &self.edges[e];
        (self.vertex_index[&edge.src], self.vertex_index[&edge.dst])
    }

    pub fn out_degree(&self, id: &str) -> Result<usize, GraphError> {
        Ok(self.out_edges[self.vertex_idx(id)?].len())
    }

    /// Vertices emitting no edge, in insertion order.
    pub fn sinks(&self) -> Vec<String> {
        (0..self.vertices.len())
            .filter(|&v| self.out_edges[v].is_empty())
            .map(|v| self.vertices[v].clone())
            .collect()
    }

    /// Vertices receiving no edge, in insertion order.
    pub fn sources(&self) -> Vec<String> {
        (0..self.vertices.len())
            .filter(|&v| self.in_edges[v].is_empty())
            .map(|v| self.vertices[v].clone())
            .collect()
    }

    /// Forward reachability from `v`, counting the length-0 path (so
    /// `reach_from(v)[v]` is always true).
    pub(crate) fn reach_from(&self, v: usize) -> Vec<bool> {
        let mut seen = vec![false; self.vertices.len()];
        seen[v] = true;
        let mut stack = vec![v];
        while let Some(u) = stack.pop() {
            for &e in &self.out_edges[u] {
                let (_, t) = self.edge_endpoints(e);
                if !seen[t] {
                    seen[t] = true;
                    stack.push(t);
                }
            }
        }
        seen
    }

    /// Full reachability closure: `reach[v][w]` iff `v` reaches `w`.
    pub(crate) fn reachability(&self) -> Vec<Vec<bool>> {
        (0..self.vertices.len()).map(|v| self.reach_from(v)).collect()
    }

    /// True iff there is a path (length >= 0) from `v` to `w`.
    pub fn reaches(&self, v: &str, w: &str) -> Result<bool, GraphError> {
        let vi = self.vertex_idx(v)?;
        let wi = self.vertex_idx(w)?;
        Ok(self.reach_from(vi)[wi])
    }

    pub(crate) fn cycle_vertex_mask(&self) -> Vec<bool> {
        let n = self.vertices.len();
        let mut mask = vec![false; n];
        for v in 0..n {
            for &e in &self.out_edges[v] {
                let (_, t) = self.edge_endpoints(e);
                if self.reach_from(t)[v] {
                    mask[v] = true;
                    break;
                }
            }
        }
        mask
    }

    /// Vertices lying on some loop (self-loops included), in insertion order.
    pub fn vertices_on_cycles(&self) -> Vec<String> {
        self.cycle_vertex_mask()
            .iter()
            .enumerate()
            .filter(|&(_, &on)| on)
            .map(|(v, _)| self.vertices[v].clone())
            .collect()
    }

    /// Checks that every loop has an exit.
    ///
    /// An exitless loop forces each of its vertices to emit exactly its loop
    /// edge, so it suffices to chase unique out-edges through the vertices of
    /// out-degree one and look for a cycle.
    pub fn condition_l(&self) -> ConditionL {
        let n = self.vertices.len();
        // 0 = unvisited, 1 = on current walk, 2 = settled
        let mut state = vec![0u8; n];
        for start in 0..n {
            if self.out_edges[start].len() != 1 || state[start] != 0 {
                continue;
            }
            let mut walk: Vec<usize> = Vec::new();
            let mut cur = start;
            loop {
                if self.out_edges[cur].len() != 1 || state[cur] == 2 {
                    for &u in &walk {
                        state[u] = 2;
                    }
                    break;
                }
                if state[cur] == 1 {
                    let pos = walk.iter().position(|&u| u == cur).unwrap();
                    let witness = walk[pos..]
                        .iter()
                        .map(|&u| self.edges[self.out_edges[u][0]].id.clone())
                        .collect();
                    return ConditionL {
                        holds: false,
                        witness: Some(witness),
                    };
                }
                state[cur] = 1;
                walk.push(cur);
                let (_, t) = self.edge_endpoints(self.out_edges[cur][0]);
                cur = t;
            }
        }
        ConditionL {
            holds: true,
            witness: None,
        }
    }

    /// Checks that no vertex is the base of exactly one simple loop.
    pub fn condition_k(&self) -> ConditionK {
        for v in 0..self.vertices.len() {
            if self.first_return_loop_count(v) == LoopCount::One {
                return ConditionK {
                    holds: false,
                    witness: Some(self.vertices[v].clone()),
                };
            }
        }
        ConditionK {
            holds: true,
            witness: None,
        }
    }

    /// Number of simple loops based at `v` (first-return walks from `v` to
    /// `v`), capped at two. A walk meeting a cycle that avoids `v` can be
    /// pumped, so such a configuration already means "two or more"; otherwise
    /// the traversed region is acyclic and a memoized count is exact.
    pub(crate) fn first_return_loop_count(&self, v: usize) -> LoopCount {
        let n = self.vertices.len();
        let self_loops = self.out_edges[v]
            .iter()
            .filter(|&&e| self.edge_endpoints(e).1 == v)
            .count();
        if self_loops >= 2 {
            return LoopCount::TwoOrMore;
        }

        // relevant = vertices strictly between v and its first return:
        // reachable from v without revisiting v, and reaching v.
        let reach = self.reachability();
        let mut forward = vec![false; n];
        let mut stack: Vec<usize> = Vec::new();
        for &e in &self.out_edges[v] {
            let (_, t) = self.edge_endpoints(e);
            if t != v && !forward[t] {
                forward[t] = true;
                stack.push(t);
            }
        }
        while let Some(u) = stack.pop() {
            for &e in &self.out_edges[u] {
                let (_, t) = self.edge_endpoints(e);
                if t != v && !forward[t] {
                    forward[t] = true;
                    stack.push(t);
                }
            }
        }
        let relevant: Vec<bool> = (0..n).map(|u| u != v && forward[u] && reach[u][v]).collect();

        // a cycle avoiding v inside the relevant region pumps to infinitely
        // many simple loops
        for u in 0..n {
            if !relevant[u] {
                continue;
            }
            for &e in &self.out_edges[u] {
                let (_, t) = self.edge_endpoints(e);
                if t != v && relevant[t] && self.reaches_avoiding(t, u, v) {
                    return LoopCount::TwoOrMore;
                }
            }
        }

        // region is acyclic: count first-return walks exactly
        let mut memo: Vec<Option<BigUint>> = vec![None; n];
        let mut total = BigUint::from(self_loops);
        for &e in &self.out_edges[v] {
            let (_, t) = self.edge_endpoints(e);
            if t != v && relevant[t] {
                total += self.count_to_target(t, v, &relevant, &mut memo);
            }
        }
        if total.is_zero() {
            LoopCount::Zero
        } else if total.is_one() {
            LoopCount::One
        } else {
            LoopCount::TwoOrMore
        }
    }

    /// Walks from `u` ending on first arrival at `target`, staying inside
    /// `region` before that. `region` must be acyclic.
    fn count_to_target(
        &self,
        u: usize,
        target: usize,
        region: &[bool],
        memo: &mut Vec<Option<BigUint>>,
    ) -> BigUint {
        if let Some(c) = &memo[u] {
            return c.clone();
        }
        let mut total = BigUint::zero();
        for &e in &self.out_edges[u] {
            let (_, t) = self.edge_endpoints(e);
            if t == target {
                total += 1u32;
            } else if region[t] {
                total += self.count_to_target(t, target, region, memo);
            }
        }
        memo[u] = Some(total.clone());
        total
    }

    /// Path from `from` to `to` with every vertex distinct from `avoid`.
    fn reaches_avoiding(&self, from: usize, to: usize, avoid: usize) -> bool {
        if from == avoid || to == avoid {
            return false;
        }
        let mut seen = vec![false; self.vertices.len()];
        seen[from] = true;
        let mut stack = vec![from];
        while let Some(u) = stack.pop() {
            if u == to {
                return true;
            }
            for &e in &self.out_edges[u] {
                let (_, t) = self.edge_endpoints(e);
                if t != avoid && !seen[t] {
                    seen[t] = true;
                    stack.push(t);
                }
            }
        }
        false
    }

    /// Number of paths (length >= 0) from `from` to `to`, or `Infinite` when
    /// a cycle vertex lies on some such path.
    pub fn count_paths(&self, from: &str, to: &str) -> Result<PathCount, GraphError> {
        let f = self.vertex_idx(from)?;
        let t = self.vertex_idx(to)?;
        let reach = self.reachability();
        if !reach[f][t] {
            return Ok(PathCount::Finite(BigUint::zero()));
        }
        let n = self.vertices.len();
        let region: Vec<bool> = (0..n).map(|u| reach[f][u] && reach[u][t]).collect();
        let on_cycle = self.cycle_vertex_mask();
        if (0..n).any(|u| region[u] && on_cycle[u]) {
            return Ok(PathCount::Infinite);
        }
        let mut memo: Vec<Option<BigUint>> = vec![None; n];
        Ok(PathCount::Finite(self.count_paths_in_region(
            f, t, &region, &mut memo,
        )))
    }

    fn count_paths_in_region(
        &self,
        u: usize,
        to: usize,
        region: &[bool],
        memo: &mut Vec<Option<BigUint>>,
    ) -> BigUint {
        if let Some(c) = &memo[u] {
            return c.clone();
        }
        let mut total = if u == to {
            BigUint::one()
        } else {
            BigUint::zero()
        };
        for &e in &self.out_edges[u] {
            let (_, t) = self.edge_endpoints(e);
            if region[t] {
                total += self.count_paths_in_region(t, to, region, memo);
            }
        }
        memo[u] = Some(total.clone());
        total
    }

    /// Vertex adjacency-count matrix; rows and columns follow vertex
    /// insertion order.
    pub fn vertex_matrix(&self) -> IntMatrix {
        let n = self.vertices.len();
        let mut entries = vec![vec![BigInt::zero(); n]; n];
        for e in 0..self.edges.len() {
            let (s, t) = self.edge_endpoints(e);
            entries[s][t] += 1;
        }
        IntMatrix::new(self.vertices.clone(), self.vertices.clone(), entries)
            .expect("graph ids are distinct")
    }

    /// Edge composability matrix: entry `(e, f)` is 1 iff `f` can follow `e`.
    pub fn edge_matrix(&self) -> IntMatrix {
        let m = self.edges.len();
        let labels: Vec<String> = self.edges.iter().map(|e| e.id.clone()).collect();
        let mut entries = vec![vec![BigInt::zero(); m]; m];
        for (i, e) in self.edges.iter().enumerate() {
            for (j, f) in self.edges.iter().enumerate() {
                if e.dst == f.src {
                    entries[i][j] = BigInt::one();
                }
            }
        }
        IntMatrix::new(labels.clone(), labels, entries).expect("graph ids are distinct")
    }

    /// Vertex-by-edge incidence of sources: entry `(v, e)` is 1 iff `e`
    /// leaves `v`.
    pub fn source_matrix(&self) -> IntMatrix {
        let labels: Vec<String> = self.edges.iter().map(|e| e.id.clone()).collect();
        let mut entries = vec![vec![BigInt::zero(); self.edges.len()]; self.vertices.len()];
        for (j, e) in self.edges.iter().enumerate() {
            entries[self.vertex_index[&e.src]][j] = BigInt::one();
        }
        IntMatrix::new(self.vertices.clone(), labels, entries).expect("graph ids are distinct")
    }

    /// Subgraph induced on the masked vertices; insertion orders and ids are
    /// inherited.
    pub(crate) fn induced_subgraph(&self, keep: &[bool]) -> Graph {
        let vertices: Vec<String> = (0..self.vertices.len())
            .filter(|&v| keep[v])
            .map(|v| self.vertices[v].clone())
            .collect();
        let edges: Vec<Edge> = self
            .edges
            .iter()
            .enumerate()
            .filter(|(k, _)| {
                let (s, t) = self.edge_endpoints(*k);
                keep[s] && keep[t]
            })
            .map(|(_, e)| e.clone())
            .collect();
        Graph::new(vertices, edges).expect("induced subgraph of a valid graph is valid")
    }

    /// Finds a cycle among the masked vertices, as edge ids in cycle order.
    pub(crate) fn find_cycle(&self, keep: &[bool]) -> Option<Vec<String>> {
        let n = self.vertices.len();
        // 0 unvisited, 1 on stack, 2 done
        let mut state = vec![0u8; n];
        let mut path: Vec<usize> = Vec::new(); // edge indices
        for start in 0..n {
            if !keep[start] || state[start] != 0 {
                continue;
            }
            if let Some(cycle) = self.cycle_dfs(start, keep, &mut state, &mut path) {
                return Some(cycle);
            }
        }
        None
    }

    fn cycle_dfs(
        &self,
        u: usize,
        keep: &[bool],
        state: &mut Vec<u8>,
        path: &mut Vec<usize>,
    ) -> Option<Vec<String>> {
        state[u] = 1;
        for &e in &self.out_edges[u] {
            let (_, t) = self.edge_endpoints(e);
            if !keep[t] {
                continue;
            }
            if state[t] == 1 {
                // edges from the first visit of t onward, plus the closing edge
                let mut cycle: Vec<String> = Vec::new();
                let mut collecting = false;
                for &pe in path.iter() {
                    let (s, _) = self.edge_endpoints(pe);
                    if s == t {
                        collecting = true;
                    }
                    if collecting {
                        cycle.push(self.edges[pe].id.clone());
                    }
                }
                cycle.push(self.edges[e].id.clone());
                return Some(cycle);
            }
            if state[t] == 0 {
                path.push(e);
                if let Some(c) = self.cycle_dfs(t, keep, state, path) {
                    return Some(c);
                }
                path.pop();
            }
        }
        state[u] = 2;
        None
    }
}
