//! Maximal tails and saturated hereditary vertex sets.
//!
//! A maximal tail is a nonempty vertex set that is backwards hereditary,
//! cofinal under reachability (any two members reach a common member), and
//! has no sinks relative to itself. On a finite graph these are exactly the
//! backward closures T(v) = {w : w reaches v} of vertices v lying on a
//! cycle: T(v) clearly satisfies all three axioms, and conversely cofinality
//! plus finiteness produces a common lower vertex v for the whole tail,
//! which the no-sink axiom then places on a cycle.

use serde::Serialize;
use thiserror::Error;

use crate::graph::{Graph, GraphError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SetError {
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("set is not hereditary: edge `{edge}` leaves it")]
    NotHereditary { edge: String },
    #[error("set is not saturated: every edge from `{vertex}` lands inside it")]
    NotSaturated { vertex: String },
}

/// A maximal tail, stored in vertex insertion order of its graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MaximalTail {
    vertices: Vec<String>,
}

impl MaximalTail {
    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn contains(&self, v: &str) -> bool {
        self.vertices.iter().any(|x| x == v)
    }
}

/// A vertex set that is hereditary (following edges forward stays inside)
/// and saturated (a non-sink whose edges all land inside is itself inside).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SatHereditarySet {
    vertices: Vec<String>,
}

impl SatHereditarySet {
    /// Validates both closure properties against `g`.
    pub fn new<S: AsRef<str>>(g: &Graph, set: &[S]) -> Result<Self, SetError> {
        let mask = mask_of(g, set)?;
        check_hereditary(g, &mask)?;
        check_saturated(g, &mask)?;
        Ok(SatHereditarySet::from_mask(g, &mask))
    }

    pub(crate) fn from_mask(g: &Graph, mask: &[bool]) -> Self {
        SatHereditarySet {
            vertices: (0..g.vertex_count())
                .filter(|&v| mask[v])
                .map(|v| g.vertices()[v].clone())
                .collect(),
        }
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn contains(&self, v: &str) -> bool {
        self.vertices.iter().any(|x| x == v)
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

fn mask_of<S: AsRef<str>>(g: &Graph, set: &[S]) -> Result<Vec<bool>, SetError> {
    let mut mask = vec![false; g.vertex_count()];
    for v in set {
        let idx = g
            .vertices()
            .iter()
            .position(|x| x == v.as_ref())
            .ok_or_else(|| SetError::UnknownVertex(v.as_ref().to_string()))?;
        mask[idx] = true;
    }
    Ok(mask)
}

pub(crate) fn check_hereditary(g: &Graph, mask: &[bool]) -> Result<(), SetError> {
    for (k, e) in g.edges().iter().enumerate() {
        let (s, t) = g.edge_endpoints(k);
        if mask[s] && !mask[t] {
            return Err(SetError::NotHereditary { edge: e.id.clone() });
        }
    }
    Ok(())
}

fn check_saturated(g: &Graph, mask: &[bool]) -> Result<(), SetError> {
    for v in 0..g.vertex_count() {
        if mask[v] || g.out_edge_indices(v).is_empty() {
            continue;
        }
        let all_inside = g
            .out_edge_indices(v)
            .iter()
            .all(|&e| mask[g.edge_endpoints(e).1]);
        if all_inside {
            return Err(SetError::NotSaturated {
                vertex: g.vertices()[v].clone(),
            });
        }
    }
    Ok(())
}

/// All maximal tails of `g`, listed by their smallest generating vertex in
/// insertion order and deduplicated by set equality.
pub fn maximal_tails(g: &Graph) -> Vec<MaximalTail> {
    let on_cycle = g.cycle_vertex_mask();
    let mut masks: Vec<Vec<bool>> = Vec::new();
    for v in 0..g.vertex_count() {
        if !on_cycle[v] {
            continue;
        }
        let mask: Vec<bool> = (0..g.vertex_count())
            .map(|w| g.reach_from(w)[v])
            .collect();
        if !masks.contains(&mask) {
            masks.push(mask);
        }
    }
    masks
        .iter()
        .map(|mask| MaximalTail {
            vertices: (0..g.vertex_count())
                .filter(|&v| mask[v])
                .map(|v| g.vertices()[v].clone())
                .collect(),
        })
        .collect()
}

/// Checks the three tail axioms directly on a subset. This is the oracle
/// form used to validate `maximal_tails`.
pub fn is_maximal_tail<S: AsRef<str>>(g: &Graph, set: &[S]) -> Result<bool, GraphError> {
    let n = g.vertex_count();
    let mut mask = vec![false; n];
    for v in set {
        mask[g.vertex_idx(v.as_ref())?] = true;
    }
    let members: Vec<usize> = (0..n).filter(|&v| mask[v]).collect();
    if members.is_empty() {
        return Ok(false);
    }
    let reach = g.reachability();
    // backwards hereditary
    for &w in &members {
        for v in 0..n {
            if reach[v][w] && !mask[v] {
                return Ok(false);
            }
        }
    }
    // cofinal: each pair reaches a common member
    for &v in &members {
        for &w in &members {
            let ok = members.iter().any(|&u| reach[v][u] && reach[w][u]);
            if !ok {
                return Ok(false);
            }
        }
    }
    // no sinks relative to the set
    for &w in &members {
        let ok = g
            .out_edge_indices(w)
            .iter()
            .any(|&e| mask[g.edge_endpoints(e).1]);
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Smallest saturated hereditary set containing `seed`, by alternately
/// adding edge targets and saturation-forced vertices until stable.
pub fn saturated_closure<S: AsRef<str>>(
    g: &Graph,
    seed: &[S],
) -> Result<SatHereditarySet, SetError> {
    let mut mask = mask_of(g, seed)?;
    loop {
        let mut changed = false;
        for k in 0..g.edge_count() {
            let (s, t) = g.edge_endpoints(k);
            if mask[s] && !mask[t] {
                mask[t] = true;
                changed = true;
            }
        }
        for v in 0..g.vertex_count() {
            if mask[v] || g.out_edge_indices(v).is_empty() {
                continue;
            }
            let all_inside = g
                .out_edge_indices(v)
                .iter()
                .all(|&e| mask[g.edge_endpoints(e).1]);
            if all_inside {
                mask[v] = true;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    debug_assert!(check_hereditary(g, &mask).is_ok());
    debug_assert!(check_saturated(g, &mask).is_ok());
    Ok(SatHereditarySet::from_mask(g, &mask))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;

    fn section1_graph() -> Graph {
        Graph::build(
            &["w1", "w2", "w3"],
            &[
                ("e", "w1", "w1"),
                ("f", "w1", "w2"),
                ("g", "w2", "w3"),
                ("h", "w3", "w2"),
            ],
        )
        .unwrap()
    }

    #[test]
    fn section1_has_two_tails() {
        let g = section1_graph();
        let tails = maximal_tails(&g);
        let sets: Vec<&[String]> = tails.iter().map(|t| t.vertices()).collect();
        assert_eq!(sets.len(), 2);
        assert_eq!(sets[0], ["w1".to_string()]);
        assert_eq!(
            sets[1],
            ["w1".to_string(), "w2".to_string(), "w3".to_string()]
        );
        // matches the subset-enumeration oracle
        let by_enum = oracle::maximal_tails_by_enumeration(&g);
        assert_eq!(by_enum.len(), 2);
        for t in &tails {
            assert!(by_enum.iter().any(|s| s == t.vertices()));
        }
    }

    #[test]
    fn acyclic_graph_has_no_tails() {
        let g = Graph::build(&["a", "b"], &[("e", "a", "b")]).unwrap();
        assert!(maximal_tails(&g).is_empty());
        assert!(oracle::maximal_tails_by_enumeration(&g).is_empty());
    }

    #[test]
    fn lone_self_loop_is_a_tail() {
        let g = Graph::build(&["v"], &[("l", "v", "v")]).unwrap();
        let tails = maximal_tails(&g);
        assert_eq!(tails.len(), 1);
        assert_eq!(tails[0].vertices(), ["v".to_string()]);
    }

    #[test]
    fn axiom_check_examples() {
        let g = section1_graph();
        assert!(is_maximal_tail(&g, &["w1", "w2", "w3"]).unwrap());
        assert!(!is_maximal_tail::<&str>(&g, &[]).unwrap());
        let path = Graph::build(&["a", "b"], &[("e", "a", "b")]).unwrap();
        assert!(!is_maximal_tail(&path, &["a", "b"]).unwrap());
        assert!(is_maximal_tail(&path, &["zz"]).is_err());
    }

    #[test]
    fn every_emitted_tail_satisfies_the_axioms() {
        let g = section1_graph();
        for t in maximal_tails(&g) {
            assert!(is_maximal_tail(&g, t.vertices()).unwrap());
        }
    }

    #[test]
    fn closure_trivial_cases() {
        let g = section1_graph();
        let empty: [&str; 0] = [];
        assert!(saturated_closure(&g, &empty).unwrap().is_empty());
        let all = saturated_closure(&g, &["w1", "w2", "w3"]).unwrap();
        assert_eq!(all.len(), 3);
    }

    #[test]
    fn closure_is_extensive_monotone_idempotent() {
        let g = Graph::build(
            &["a", "b", "c"],
            &[("e", "a", "b"), ("f", "b", "c"), ("l", "c", "c")],
        )
        .unwrap();
        let c1 = saturated_closure(&g, &["a"]).unwrap();
        // extensive
        assert!(c1.contains("a"));
        // hereditary forced b, c in
        assert_eq!(c1.vertices(), ["a", "b", "c"]);
        // idempotent
        let c2 = saturated_closure(&g, c1.vertices()).unwrap();
        assert_eq!(c1, c2);
        // monotone on this chain of seeds
        let smaller = saturated_closure(&g, &["b"]).unwrap();
        assert!(smaller.vertices().iter().all(|v| c1.contains(v)));
    }

    #[test]
    fn saturation_pulls_in_forced_vertices() {
        // b's only edge lands in {c}; closing {c} must add b, then a.
        let g = Graph::build(&["a", "b", "c"], &[("e", "a", "b"), ("f", "b", "c")]).unwrap();
        let c = saturated_closure(&g, &["c"]).unwrap();
        assert_eq!(c.vertices(), ["a", "b", "c"]);
    }

    #[test]
    fn validated_set_rejects_bad_inputs() {
        let g = Graph::build(&["a", "b"], &[("e", "a", "b")]).unwrap();
        assert_eq!(
            SatHereditarySet::new(&g, &["a"]).unwrap_err(),
            SetError::NotHereditary { edge: "e".into() }
        );
        // {b} is hereditary but not saturated: a's only edge lands in it
        assert_eq!(
            SatHereditarySet::new(&g, &["b"]).unwrap_err(),
            SetError::NotSaturated { vertex: "a".into() }
        );
        assert!(SatHereditarySet::new(&g, &["a", "b"]).is_ok());
    }
}
