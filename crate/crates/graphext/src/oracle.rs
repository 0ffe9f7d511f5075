//! Reference implementations by exhaustive enumeration.
//!
//! Everything in this module recomputes an invariant along a route that is
//! deliberately different from the main algorithms: walks are enumerated by
//! length, subsets by bitmask, paths by depth-first search. The test suites
//! cross-check the fast implementations against these.

use num_bigint::BigUint;
use num_traits::Zero;

use crate::extension::OneSinkExtension;
use crate::graph::Graph;
use crate::matrix::IntVector;
use crate::tails::is_maximal_tail;

/// True iff a walk of length <= `max_len` connects `from` to `to`
/// (length 0 counts, so `from == to` always connects).
pub fn walk_exists_up_to(g: &Graph, from: &str, to: &str, max_len: usize) -> bool {
    let n = g.vertex_count();
    let f = g
        .vertices()
        .iter()
        .position(|v| v == from)
        .expect("known vertex");
    let t = g
        .vertices()
        .iter()
        .position(|v| v == to)
        .expect("known vertex");
    let mut current = vec![false; n];
    current[f] = true;
    if current[t] {
        return true;
    }
    for _ in 0..max_len {
        let mut next = vec![false; n];
        for e in g.edges() {
            let s = g.vertices().iter().position(|v| *v == e.src).unwrap();
            let d = g.vertices().iter().position(|v| *v == e.dst).unwrap();
            if current[s] {
                next[d] = true;
            }
        }
        if next[t] {
            return true;
        }
        current = next;
    }
    false
}

/// Counts paths from `from` to `to` by literal depth-first enumeration.
/// Returns `None` if some walk exceeds `max_len` edges (a cycle is in the
/// way and the count would not be finite).
pub fn paths_by_dfs(g: &Graph, from: &str, to: &str, max_len: usize) -> Option<u128> {
    fn go(
        g: &Graph,
        u: usize,
        t: usize,
        depth: usize,
        max_len: usize,
        total: &mut u128,
    ) -> Option<()> {
        if u == t {
            *total += 1;
        }
        if depth == max_len {
            // any outgoing edge would overrun the bound
            if !g.out_edge_indices(u).is_empty() {
                return None;
            }
            return Some(());
        }
        for &e in g.out_edge_indices(u) {
            let (_, next) = g.edge_endpoints(e);
            go(g, next, t, depth + 1, max_len, total)?;
        }
        Some(())
    }
    let f = g.vertices().iter().position(|v| v == from)?;
    let t = g.vertices().iter().position(|v| v == to)?;
    let mut total = 0u128;
    go(g, f, t, 0, max_len, &mut total).map(|()| total)
}

/// Number of simple loops based at vertex index `v` among walks of length
/// <= `max_len`, capped at `cap`. Counting is done by a walk-length dynamic
/// program, which is enumeration in the counting sense but shares nothing
/// with the first-return analysis in `Graph::condition_k`.
pub fn base_simple_loops_capped(g: &Graph, v: usize, max_len: usize, cap: u64) -> u64 {
    let n = g.vertex_count();
    if n == 0 || max_len == 0 {
        return 0;
    }
    // walks[u] = number of walks of the current length from u to v that do
    // not visit v before the end (u != v)
    let mut total = BigUint::zero();
    let self_loops = g
        .out_edge_indices(v)
        .iter()
        .filter(|&&e| g.edge_endpoints(e).1 == v)
        .count();
    total += self_loops;

    let mut walks: Vec<BigUint> = vec![BigUint::zero(); n];
    for u in 0..n {
        if u == v {
            continue;
        }
        for &e in g.out_edge_indices(u) {
            if g.edge_endpoints(e).1 == v {
                walks[u] += 1u32;
            }
        }
    }
    // loops of length k = edge v->w composed with a (k-1)-walk from w;
    // entering the iteration for k, `walks` holds the (k-1)-walk counts
    for k in 2..=max_len {
        for &e in g.out_edge_indices(v) {
            let (_, w) = g.edge_endpoints(e);
            if w != v {
                total += &walks[w];
            }
        }
        if total >= BigUint::from(cap) {
            return cap;
        }
        if k == max_len {
            break;
        }
        let mut next: Vec<BigUint> = vec![BigUint::zero(); n];
        for u in 0..n {
            if u == v {
                continue;
            }
            for &e in g.out_edge_indices(u) {
                let (_, t) = g.edge_endpoints(e);
                if t != v {
                    next[u] += &walks[t];
                }
            }
        }
        walks = next;
    }
    u128::try_from(&total)
        .map(|t| t.min(cap as u128) as u64)
        .unwrap_or(cap)
}

/// Condition (K) by capped loop enumeration: holds iff no vertex has a
/// simple-loop count of exactly one among loops of length <= 2|G0|.
pub fn condition_k_by_enumeration(g: &Graph) -> bool {
    let bound = 2 * g.vertex_count();
    (0..g.vertex_count()).all(|v| base_simple_loops_capped(g, v, bound, 2) != 1)
}

/// All simple cycles (distinct vertices except for the closing step), as
/// vertex index lists without a fixed starting point convention.
fn simple_cycles(g: &Graph) -> Vec<Vec<usize>> {
    let n = g.vertex_count();
    let mut cycles = Vec::new();
    let mut path: Vec<usize> = Vec::new();
    let mut on_path = vec![false; n];

    fn dfs(
        g: &Graph,
        root: usize,
        u: usize,
        path: &mut Vec<usize>,
        on_path: &mut Vec<bool>,
        cycles: &mut Vec<Vec<usize>>,
    ) {
        for &e in g.out_edge_indices(u) {
            let (_, t) = g.edge_endpoints(e);
            if t == root {
                cycles.push(path.clone());
            } else if t > root && !on_path[t] {
                path.push(t);
                on_path[t] = true;
                dfs(g, root, t, path, on_path, cycles);
                on_path[t] = false;
                path.pop();
            }
        }
    }

    for root in 0..n {
        path.clear();
        path.push(root);
        on_path[root] = true;
        dfs(g, root, root, &mut path, &mut on_path, &mut cycles);
        on_path[root] = false;
    }
    cycles
}

/// Condition (L) by enumeration: every loop has an exit iff every simple
/// cycle contains a vertex of out-degree at least two.
pub fn condition_l_by_enumeration(g: &Graph) -> bool {
    simple_cycles(g).iter().all(|cycle| {
        cycle
            .iter()
            .any(|&u| g.out_edge_indices(u).len() >= 2)
    })
}

/// All maximal tails, found by checking the tail axioms on every vertex
/// subset. Only sensible for small graphs.
pub fn maximal_tails_by_enumeration(g: &Graph) -> Vec<Vec<String>> {
    let n = g.vertex_count();
    assert!(n <= 16, "subset enumeration needs a small graph");
    let mut out = Vec::new();
    for mask in 1u32..(1 << n) {
        let subset: Vec<&str> = (0..n)
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| g.vertices()[i].as_str())
            .collect();
        if is_maximal_tail(g, &subset).unwrap() {
            out.push(subset.iter().map(|s| s.to_string()).collect());
        }
    }
    out
}

/// Wojciech vector by literal path enumeration: for each base vertex, walk
/// every path that leaves the base immediately and count arrivals at the
/// sink. The added part of a valid extension is acyclic, so the search
/// terminates.
pub fn wojciech_by_enumeration(ext: &OneSinkExtension) -> IntVector {
    let total = ext.total();
    let base_ids = ext.base().vertices();
    let mut counts = vec![0u64; base_ids.len()];
    for (i, w) in base_ids.iter().enumerate() {
        let wi = total
            .vertices()
            .iter()
            .position(|v| v == w)
            .expect("base vertex present in total");
        for &e in total.out_edge_indices(wi) {
            let (_, t) = total.edge_endpoints(e);
            let target_id = &total.vertices()[t];
            if ext.base().has_vertex(target_id) {
                continue; // does not leave the base immediately
            }
            counts[i] += count_arrivals(total, t, ext.sink());
        }
    }
    IntVector::new(
        base_ids.to_vec(),
        counts.iter().map(|&c| c.into()).collect(),
    )
    .expect("distinct labels")
}

fn count_arrivals(g: &Graph, u: usize, sink: &str) -> u64 {
    let mut total = if g.vertices()[u] == sink { 1 } else { 0 };
    for &e in g.out_edge_indices(u) {
        let (_, t) = g.edge_endpoints(e);
        total += count_arrivals(g, t, sink);
    }
    total
}
