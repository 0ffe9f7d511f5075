//! Validated 1-sink extensions and their invariants.
//!
//! An extension adds to a base graph a finite set H of new vertices with no
//! sources and exactly one sink, no loops inside H, every new edge landing in
//! H, and every base sink still a sink. H is then automatically hereditary,
//! so the added part is a finite DAG and all the path counts below are
//! finite where the theory says they are. Violations of guarantees that the
//! validated axioms are supposed to imply are treated as internal bugs and
//! panic.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::graph::{Edge, Graph, PathCount};
use crate::matrix::{IntMatrix, IntVector};
use crate::tails::{self, check_hereditary, SatHereditarySet, SetError};

/// A single broken validation rule, with a witness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Violation {
    /// A base vertex is missing from the total graph.
    MissingBaseVertex { vertex: String },
    /// A base edge is missing from the total graph.
    MissingBaseEdge { edge: String },
    /// A base edge id exists in the total graph with different endpoints.
    ChangedBaseEdge { edge: String },
    /// The designated sink is not one of the added vertices.
    SinkNotAdded { sink: String },
    /// No vertices are added at all.
    EmptyAddedPart,
    /// An added vertex receives no edge.
    SourceInAddedPart { vertex: String },
    /// The sinks found among the added vertices are not exactly the
    /// designated one.
    WrongSinksInAddedPart { found: Vec<String> },
    /// A loop lies entirely inside the added part (edge ids in cycle order).
    LoopInAddedPart { edges: Vec<String> },
    /// A new edge ends at a base vertex.
    NewEdgeIntoBase { edge: String },
    /// A base sink emits an edge in the total graph.
    BaseSinkLost { vertex: String, edge: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::MissingBaseVertex { vertex } => {
                write!(f, "base vertex `{vertex}` is missing from the total graph")
            }
            Violation::MissingBaseEdge { edge } => {
                write!(f, "base edge `{edge}` is missing from the total graph")
            }
            Violation::ChangedBaseEdge { edge } => {
                write!(f, "base edge `{edge}` has different endpoints in the total graph")
            }
            Violation::SinkNotAdded { sink } => {
                write!(f, "designated sink `{sink}` is not an added vertex")
            }
            Violation::EmptyAddedPart => write!(f, "no vertices are added"),
            Violation::SourceInAddedPart { vertex } => {
                write!(f, "added vertex `{vertex}` receives no edge")
            }
            Violation::WrongSinksInAddedPart { found } => write!(
                f,
                "added part must contain exactly the designated sink as its sink; found [{}]",
                found.join(", ")
            ),
            Violation::LoopInAddedPart { edges } => {
                write!(f, "loop inside the added part: [{}]", edges.join(", "))
            }
            Violation::NewEdgeIntoBase { edge } => {
                write!(f, "new edge `{edge}` ends at a base vertex")
            }
            Violation::BaseSinkLost { vertex, edge } => write!(
                f,
                "base sink `{vertex}` emits edge `{edge}` in the total graph"
            ),
        }
    }
}

/// All rule violations found while validating an extension.
#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "invalid 1-sink extension:")?;
        for v in &self.violations {
            writeln!(f, "  - {v}")?;
        }
        Ok(())
    }
}

/// A validated 1-sink extension of a base graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OneSinkExtension {
    base: Graph,
    total: Graph,
    sink: String,
    added: Vec<String>,
    boundary_edges: Vec<String>,
    boundary_vertices: Vec<String>,
}

/// The numeric invariants of one extension in a single bundle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtensionAnalysis {
    pub wojciech: IntVector,
    pub closure: Vec<String>,
    pub inessential: Vec<String>,
    pub n_vector: IntVector,
    pub essential: bool,
    pub totally_inessential: bool,
    pub finite_sink_path_space: bool,
}

pub fn validate_extension(
    base: &Graph,
    total: &Graph,
    sink: &str,
) -> Result<OneSinkExtension, ValidationReport> {
    OneSinkExtension::validate(base, total, sink)
}

impl OneSinkExtension {
    /// Checks subgraph containment and the four extension rules, reporting
    /// every violation found.
    pub fn validate(
        base: &Graph,
        total: &Graph,
        sink: &str,
    ) -> Result<OneSinkExtension, ValidationReport> {
        let mut violations = Vec::new();

        // containment first: the axioms are meaningless without it
        for v in base.vertices() {
            if !total.has_vertex(v) {
                violations.push(Violation::MissingBaseVertex { vertex: v.clone() });
            }
        }
        for e in base.edges() {
            match total.edges().iter().find(|t| t.id == e.id) {
                None => violations.push(Violation::MissingBaseEdge { edge: e.id.clone() }),
                Some(t) if t.src != e.src || t.dst != e.dst => {
                    violations.push(Violation::ChangedBaseEdge { edge: e.id.clone() })
                }
                Some(_) => {}
            }
        }
        if !violations.is_empty() {
            return Err(ValidationReport { violations });
        }

        let added: Vec<String> = total
            .vertices()
            .iter()
            .filter(|v| !base.has_vertex(v))
            .cloned()
            .collect();
        let added_mask: Vec<bool> = total
            .vertices()
            .iter()
            .map(|v| !base.has_vertex(v))
            .collect();

        if added.is_empty() {
            violations.push(Violation::EmptyAddedPart);
        }
        if !added.iter().any(|v| v == sink) {
            violations.push(Violation::SinkNotAdded {
                sink: sink.to_string(),
            });
        }

        // rule 1: no sources among added vertices, exactly one sink (the
        // designated one)
        for (i, v) in total.vertices().iter().enumerate() {
            if added_mask[i] && total.sources().contains(v) {
                violations.push(Violation::SourceInAddedPart { vertex: v.clone() });
            }
        }
        let sinks_in_added: Vec<String> = total
            .sinks()
            .into_iter()
            .filter(|v| added.iter().any(|a| a == v))
            .collect();
        if sinks_in_added != [sink.to_string()] {
            violations.push(Violation::WrongSinksInAddedPart {
                found: sinks_in_added,
            });
        }

        // rule 2: the added part is loop-free
        if let Some(cycle) = total.find_cycle(&added_mask) {
            violations.push(Violation::LoopInAddedPart { edges: cycle });
        }

        // rule 3: new edges land in the added part
        for e in total.edges() {
            let new = !base.edges().iter().any(|b| b.id == e.id);
            if new && base.has_vertex(&e.dst) {
                violations.push(Violation::NewEdgeIntoBase { edge: e.id.clone() });
            }
        }

        // rule 4: base sinks stay sinks
        for v in base.sinks() {
            let vi = total.vertex_idx(&v).expect("containment checked");
            if let Some(&e) = total.out_edge_indices(vi).first() {
                violations.push(Violation::BaseSinkLost {
                    vertex: v.clone(),
                    edge: total.edges()[e].id.clone(),
                });
            }
        }

        if !violations.is_empty() {
            return Err(ValidationReport { violations });
        }

        // rule 3 makes the added part hereditary in the total graph
        debug_assert!(check_hereditary(total, &added_mask).is_ok());

        let boundary_edges: Vec<String> = total
            .edges()
            .iter()
            .filter(|e| base.has_vertex(&e.src) && !base.has_vertex(&e.dst))
            .map(|e| e.id.clone())
            .collect();
        let boundary_vertices: Vec<String> = base
            .vertices()
            .iter()
            .filter(|v| {
                total
                    .edges()
                    .iter()
                    .any(|e| boundary_edges.contains(&e.id) && e.src == **v)
            })
            .cloned()
            .collect();

        Ok(OneSinkExtension {
            base: base.clone(),
            total: total.clone(),
            sink: sink.to_string(),
            added,
            boundary_edges,
            boundary_vertices,
        })
    }

    pub fn base(&self) -> &Graph {
        &self.base
    }

    pub fn total(&self) -> &Graph {
        &self.total
    }

    pub fn sink(&self) -> &str {
        &self.sink
    }

    /// Added vertices, in total-graph insertion order.
    pub fn added_vertices(&self) -> &[String] {
        &self.added
    }

    /// Edges from the base into the added part, in insertion order.
    pub fn boundary_edges(&self) -> &[String] {
        &self.boundary_edges
    }

    /// Sources of the boundary edges, in base insertion order.
    pub fn boundary_vertices(&self) -> &[String] {
        &self.boundary_vertices
    }

    fn added_mask(&self) -> Vec<bool> {
        self.total
            .vertices()
            .iter()
            .map(|v| !self.base.has_vertex(v))
            .collect()
    }

    /// Per base vertex, the number of paths to the sink that leave the base
    /// immediately. Computed by path counting inside the added part, which
    /// is a finite DAG.
    pub fn wojciech_vector(&self) -> IntVector {
        let added_graph = self.total.induced_subgraph(&self.added_mask());
        let mut counts: Vec<BigInt> = vec![BigInt::zero(); self.base.vertex_count()];
        for id in &self.boundary_edges {
            let e = self
                .total
                .edges()
                .iter()
                .find(|e| e.id == *id)
                .expect("boundary edge ids come from the total graph");
            let src = self
                .base
                .vertices()
                .iter()
                .position(|v| *v == e.src)
                .expect("boundary edges start in the base");
            match added_graph
                .count_paths(&e.dst, &self.sink)
                .expect("endpoints inside the added part")
            {
                PathCount::Finite(c) => counts[src] += BigInt::from(c),
                PathCount::Infinite => {
                    unreachable!("added part is acyclic, counts are finite")
                }
            }
        }
        IntVector::new(self.base.vertices().to_vec(), counts).expect("distinct vertex ids")
    }

    /// True iff every base vertex reaches the sink in the total graph.
    pub fn is_essential(&self) -> bool {
        self.base
            .vertices()
            .iter()
            .all(|v| self.total.reaches(v, &self.sink).expect("base ids exist"))
    }

    /// Union of the maximal tails of the base all of whose vertices reach
    /// the sink, in base insertion order.
    pub fn closure_of_sink(&self) -> Vec<String> {
        let mut in_closure = vec![false; self.base.vertex_count()];
        for tail in tails::maximal_tails(&self.base) {
            let tail_reaches = tail
                .vertices()
                .iter()
                .all(|v| self.total.reaches(v, &self.sink).expect("base ids exist"));
            if tail_reaches {
                for v in tail.vertices() {
                    let i = self
                        .base
                        .vertices()
                        .iter()
                        .position(|x| x == v)
                        .expect("tail vertices are base vertices");
                    in_closure[i] = true;
                }
            }
        }
        self.base
            .vertices()
            .iter()
            .zip(&in_closure)
            .filter(|(_, &inside)| inside)
            .map(|(v, _)| v.clone())
            .collect()
    }

    pub fn is_totally_inessential(&self) -> bool {
        self.closure_of_sink().is_empty()
    }

    /// Complement of the sink's closure in the base. Panics if the result is
    /// not saturated hereditary — the theory guarantees it is, so a failure
    /// here is a bug.
    pub fn inessential_part(&self) -> SatHereditarySet {
        let closure = self.closure_of_sink();
        let complement: Vec<&str> = self
            .base
            .vertices()
            .iter()
            .filter(|v| !closure.contains(v))
            .map(String::as_str)
            .collect();
        SatHereditarySet::new(&self.base, &complement)
            .expect("complement of the sink closure is saturated hereditary")
    }

    /// Per vertex of the inessential part, the number of paths to the sink
    /// in the total graph. Finiteness is guaranteed for these vertices;
    /// anything else is a bug and panics.
    pub fn n_vector(&self) -> IntVector {
        let part = self.inessential_part();
        let mut entries = Vec::with_capacity(part.len());
        for v in part.vertices() {
            match self
                .total
                .count_paths(v, &self.sink)
                .expect("base ids exist")
            {
                PathCount::Finite(c) => entries.push(BigInt::from(c)),
                PathCount::Infinite => unreachable!(
                    "path count from the inessential part to the sink must be finite"
                ),
            }
        }
        IntVector::new(part.vertices().to_vec(), entries).expect("distinct vertex ids")
    }

    /// True iff only finitely many paths end at the sink, i.e. no cycle
    /// vertex of the total graph reaches it.
    pub fn sink_path_space_finite(&self) -> bool {
        self.total
            .vertices_on_cycles()
            .iter()
            .all(|v| !self.total.reaches(v, &self.sink).expect("ids exist"))
    }

    /// Computes every invariant and re-checks the structure facts the theory
    /// promises for a validated extension:
    ///
    /// - the inessential part is saturated hereditary in the base;
    /// - closing (vertices that do not reach the sink) ∪ (added part) in the
    ///   total graph yields (inessential part) ∪ (added part);
    /// - path counts from the inessential part are finite;
    /// - no vertex of the inessential part with a positive count carries a
    ///   self-loop.
    pub fn analyze(&self) -> ExtensionAnalysis {
        let wojciech = self.wojciech_vector();
        let closure = self.closure_of_sink();
        let part = self.inessential_part();
        let n_vector = self.n_vector();
        let essential = self.is_essential();
        let totally_inessential = closure.is_empty();
        let finite_sink_path_space = self.sink_path_space_finite();

        assert_eq!(
            essential,
            closure.len() == self.base.vertex_count(),
            "essential iff the closure is the whole base"
        );

        // closure identity inside the total graph
        let mut seed: Vec<&str> = self
            .total
            .vertices()
            .iter()
            .filter(|v| !self.total.reaches(v, &self.sink).expect("ids exist"))
            .map(String::as_str)
            .collect();
        seed.extend(self.added.iter().map(String::as_str));
        let closed = tails::saturated_closure(&self.total, &seed)
            .expect("seed vertices come from the total graph");
        let mut expected: Vec<&str> = self
            .total
            .vertices()
            .iter()
            .filter(|v| part.contains(v) || self.added.iter().any(|a| a == *v))
            .map(String::as_str)
            .collect();
        expected.sort_unstable();
        let mut got: Vec<&str> = closed.vertices().iter().map(String::as_str).collect();
        got.sort_unstable();
        assert_eq!(
            got, expected,
            "closure of (non-reaching set ∪ added part) must be (inessential part ∪ added part)"
        );

        // a positive count forbids a self-loop
        let a = self.base.vertex_matrix();
        for (i, v) in n_vector.labels().iter().enumerate() {
            if n_vector.get(i).is_zero() {
                continue;
            }
            let vi = self
                .base
                .vertices()
                .iter()
                .position(|x| x == v)
                .expect("base vertex");
            assert!(
                a.get(vi, vi).is_zero(),
                "vertex `{v}` has paths to the sink and a self-loop; it cannot be inessential"
            );
        }

        ExtensionAnalysis {
            wojciech,
            closure,
            inessential: part.vertices().to_vec(),
            n_vector,
            essential,
            totally_inessential,
            finite_sink_path_space,
        }
    }
}

/// Quotient of `g` by a saturated hereditary set: keep the vertices outside
/// `h` and the edges that do not end in `h`. Heredity (re-checked against
/// `g`) guarantees both endpoints of every kept edge survive.
pub fn quotient_graph(g: &Graph, h: &SatHereditarySet) -> Result<Graph, SetError> {
    let mut mask = vec![false; g.vertex_count()];
    for v in h.vertices() {
        let i = g
            .vertices()
            .iter()
            .position(|x| x == v)
            .ok_or_else(|| SetError::UnknownVertex(v.clone()))?;
        mask[i] = true;
    }
    check_hereditary(g, &mask)?;
    let vertices: Vec<String> = g
        .vertices()
        .iter()
        .enumerate()
        .filter(|(i, _)| !mask[*i])
        .map(|(_, v)| v.clone())
        .collect();
    let edges: Vec<Edge> = g
        .edges()
        .iter()
        .enumerate()
        .filter(|(k, _)| !mask[g.edge_endpoints(*k).1])
        .map(|(_, e)| e.clone())
        .collect();
    Ok(Graph::new(vertices, edges).expect("quotient of a valid graph is valid"))
}

/// Blocks of the vertex matrix under the reordering (closure, complement),
/// each part in insertion order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockDecomposition {
    /// Upper-left block: vertex matrix of the quotient graph.
    pub a_f: IntMatrix,
    /// Upper-right block: edges from the closure into the complement.
    pub x: IntMatrix,
    /// Lower-right block: vertex matrix of the complement.
    pub c: IntMatrix,
}

/// Splits the vertex matrix of `g` along `closure` versus its complement
/// `h`. Fails when some edge leads from `h` back into `closure`, i.e. when
/// the lower-left block would be nonzero and `h` is not hereditary.
pub fn block_decomposition<S: AsRef<str>>(
    g: &Graph,
    closure: &[S],
) -> Result<BlockDecomposition, SetError> {
    let mut in_closure = vec![false; g.vertex_count()];
    for v in closure {
        let i = g
            .vertices()
            .iter()
            .position(|x| x == v.as_ref())
            .ok_or_else(|| SetError::UnknownVertex(v.as_ref().to_string()))?;
        in_closure[i] = true;
    }
    for (k, e) in g.edges().iter().enumerate() {
        let (s, t) = g.edge_endpoints(k);
        if !in_closure[s] && in_closure[t] {
            return Err(SetError::NotHereditary { edge: e.id.clone() });
        }
    }
    let closure_idx: Vec<usize> = (0..g.vertex_count()).filter(|&i| in_closure[i]).collect();
    let rest_idx: Vec<usize> = (0..g.vertex_count()).filter(|&i| !in_closure[i]).collect();
    let a = g.vertex_matrix();
    Ok(BlockDecomposition {
        a_f: a.submatrix(&closure_idx, &closure_idx),
        x: a.submatrix(&closure_idx, &rest_idx),
        c: a.submatrix(&rest_idx, &rest_idx),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;

    pub(crate) fn section1() -> (Graph, OneSinkExtension) {
        let base = Graph::build(
            &["w1", "w2", "w3"],
            &[
                ("e", "w1", "w1"),
                ("f", "w1", "w2"),
                ("g", "w2", "w3"),
                ("h", "w3", "w2"),
            ],
        )
        .unwrap();
        let total = Graph::build(
            &["w1", "w2", "w3", "v0"],
            &[
                ("e", "w1", "w1"),
                ("f", "w1", "w2"),
                ("g", "w2", "w3"),
                ("h", "w3", "w2"),
                ("b1", "w1", "v0"),
                ("b2", "w1", "v0"),
                ("b3", "w3", "v0"),
                ("b4", "w3", "v0"),
                ("b5", "w3", "v0"),
            ],
        )
        .unwrap();
        let ext = OneSinkExtension::validate(&base, &total, "v0").unwrap();
        (base, ext)
    }

    #[test]
    fn section1_extension_is_valid() {
        let (_, ext) = section1();
        assert_eq!(ext.added_vertices(), ["v0".to_string()]);
    }

    #[test]
    fn isolated_added_vertex_is_a_source_violation() {
        let base = Graph::build(&["a"], &[("l", "a", "a")]).unwrap();
        let total = Graph::build(&["a", "v0"], &[("l", "a", "a")]).unwrap();
        let report = OneSinkExtension::validate(&base, &total, "v0").unwrap_err();
        assert!(report
            .violations
            .contains(&Violation::SourceInAddedPart { vertex: "v0".into() }));
    }

    #[test]
    fn loop_in_added_part_is_reported_with_missing_sink() {
        let base = Graph::build(&["a"], &[("l", "a", "a")]).unwrap();
        let total = Graph::build(
            &["a", "u", "v0"],
            &[
                ("l", "a", "a"),
                ("b", "a", "u"),
                ("x", "u", "v0"),
                ("y", "v0", "u"),
            ],
        )
        .unwrap();
        let report = OneSinkExtension::validate(&base, &total, "v0").unwrap_err();
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::LoopInAddedPart { .. })));
        // v0 emits an edge, so the added part has no sink at all
        assert!(report
            .violations
            .contains(&Violation::WrongSinksInAddedPart { found: vec![] }));
    }

    #[test]
    fn base_sink_must_stay_a_sink() {
        let base = Graph::build(&["a"], &[]).unwrap();
        let total = Graph::build(&["a", "v0"], &[("b", "a", "v0")]).unwrap();
        let report = OneSinkExtension::validate(&base, &total, "v0").unwrap_err();
        assert_eq!(
            report.violations,
            vec![Violation::BaseSinkLost {
                vertex: "a".into(),
                edge: "b".into()
            }]
        );
    }

    #[test]
    fn new_edge_into_base_is_rejected() {
        let base = Graph::build(&["a"], &[("l", "a", "a")]).unwrap();
        let total = Graph::build(
            &["a", "v0"],
            &[("l", "a", "a"), ("b", "a", "v0"), ("back", "v0", "a")],
        )
        .unwrap();
        let report = OneSinkExtension::validate(&base, &total, "v0").unwrap_err();
        assert!(report
            .violations
            .contains(&Violation::NewEdgeIntoBase { edge: "back".into() }));
    }

    #[test]
    fn section1_boundary() {
        let (_, ext) = section1();
        assert_eq!(
            ext.boundary_edges(),
            ["b1", "b2", "b3", "b4", "b5"].map(String::from)
        );
        assert_eq!(ext.boundary_vertices(), ["w1", "w3"].map(String::from));
    }

    #[test]
    fn single_boundary_edge() {
        let base = Graph::build(&["w"], &[("l", "w", "w")]).unwrap();
        let total =
            Graph::build(&["w", "v0"], &[("l", "w", "w"), ("b", "w", "v0")]).unwrap();
        let ext = OneSinkExtension::validate(&base, &total, "v0").unwrap();
        assert_eq!(ext.boundary_edges(), ["b".to_string()]);
        assert_eq!(ext.boundary_vertices(), ["w".to_string()]);
        let w = ext.wojciech_vector();
        assert_eq!(w, IntVector::from_i64(&["w"], &[1]).unwrap());
    }

    #[test]
    fn section1_wojciech_vector() {
        let (_, ext) = section1();
        let expected = IntVector::from_i64(&["w1", "w2", "w3"], &[2, 0, 3]).unwrap();
        assert_eq!(ext.wojciech_vector(), expected);
        assert_eq!(oracle::wojciech_by_enumeration(&ext), expected);
    }

    #[test]
    fn wojciech_counts_paths_through_added_part() {
        // two parallel boundary edges into u, then u -> v0: two paths
        let base = Graph::build(&["w"], &[("l", "w", "w")]).unwrap();
        let total = Graph::build(
            &["w", "u", "v0"],
            &[
                ("l", "w", "w"),
                ("b1", "w", "u"),
                ("b2", "w", "u"),
                ("x", "u", "v0"),
            ],
        )
        .unwrap();
        let ext = OneSinkExtension::validate(&base, &total, "v0").unwrap();
        let expected = IntVector::from_i64(&["w"], &[2]).unwrap();
        assert_eq!(ext.wojciech_vector(), expected);
        assert_eq!(oracle::wojciech_by_enumeration(&ext), expected);
    }

    #[test]
    fn section1_is_essential_with_full_closure() {
        let (_, ext) = section1();
        assert!(ext.is_essential());
        assert!(!ext.is_totally_inessential());
        assert_eq!(
            ext.closure_of_sink(),
            vec!["w1".to_string(), "w2".to_string(), "w3".to_string()]
        );
        assert!(ext.inessential_part().is_empty());
        assert!(ext.n_vector().is_empty());
        assert!(!ext.sink_path_space_finite());
    }

    #[test]
    fn disjoint_loops_give_partial_closure() {
        let base =
            Graph::build(&["a", "b"], &[("la", "a", "a"), ("lb", "b", "b")]).unwrap();
        let total = Graph::build(
            &["a", "b", "v0"],
            &[("la", "a", "a"), ("lb", "b", "b"), ("e", "a", "v0")],
        )
        .unwrap();
        let ext = OneSinkExtension::validate(&base, &total, "v0").unwrap();
        assert!(!ext.is_essential());
        assert!(!ext.is_totally_inessential());
        assert_eq!(ext.closure_of_sink(), vec!["a".to_string()]);
        assert_eq!(ext.inessential_part().vertices(), ["b".to_string()]);
    }

    #[test]
    fn chained_loops_close_upstream() {
        // a and b both carry self-loops, a -> b, and only b reaches the sink;
        // the tail of b is {a, b} and the tail of a also reaches via b.
        let base = Graph::build(
            &["a", "b"],
            &[("la", "a", "a"), ("lb", "b", "b"), ("ab", "a", "b")],
        )
        .unwrap();
        let total = Graph::build(
            &["a", "b", "v0"],
            &[
                ("la", "a", "a"),
                ("lb", "b", "b"),
                ("ab", "a", "b"),
                ("e", "b", "v0"),
            ],
        )
        .unwrap();
        let ext = OneSinkExtension::validate(&base, &total, "v0").unwrap();
        assert_eq!(
            ext.closure_of_sink(),
            vec!["a".to_string(), "b".to_string()]
        );
        assert!(ext.is_essential());
    }

    #[test]
    fn n_vector_single_path() {
        // c's loop never reaches the sink, so nothing is essential and the
        // inessential part is everything; only a has a path to the sink.
        let base =
            Graph::build(&["a", "c"], &[("ac", "a", "c"), ("lc", "c", "c")]).unwrap();
        let total = Graph::build(
            &["a", "c", "v0"],
            &[("ac", "a", "c"), ("lc", "c", "c"), ("b", "a", "v0")],
        )
        .unwrap();
        let ext = OneSinkExtension::validate(&base, &total, "v0").unwrap();
        assert!(ext.is_totally_inessential());
        assert_eq!(
            ext.n_vector(),
            IntVector::from_i64(&["a", "c"], &[1, 0]).unwrap()
        );
    }

    #[test]
    fn n_vector_two_paths_along_a_chain() {
        // acyclic base a -> b -> c with boundary edges from a and b; no
        // tails at all, so the inessential part is the whole base
        let base =
            Graph::build(&["a", "b", "c"], &[("ab", "a", "b"), ("bc", "b", "c")]).unwrap();
        let total = Graph::build(
            &["a", "b", "c", "v0"],
            &[
                ("ab", "a", "b"),
                ("bc", "b", "c"),
                ("e1", "b", "v0"),
                ("e2", "a", "v0"),
            ],
        )
        .unwrap();
        let ext = OneSinkExtension::validate(&base, &total, "v0").unwrap();
        assert!(ext.is_totally_inessential());
        let n = ext.n_vector();
        assert_eq!(n, IntVector::from_i64(&["a", "b", "c"], &[2, 1, 0]).unwrap());
        assert_eq!(oracle::paths_by_dfs(ext.total(), "a", "v0", 8), Some(2));
    }

    #[test]
    fn finite_sink_path_space_examples() {
        let (_, ext) = section1();
        assert!(!ext.sink_path_space_finite());

        // no cycle reaches the sink
        let base = Graph::build(&["a", "b"], &[("ab", "a", "b"), ("lb", "b", "b")]).unwrap();
        let total = Graph::build(
            &["a", "b", "v0"],
            &[("ab", "a", "b"), ("lb", "b", "b"), ("e", "a", "v0")],
        )
        .unwrap();
        let ext = OneSinkExtension::validate(&base, &total, "v0").unwrap();
        assert!(ext.sink_path_space_finite());
        assert!(ext.is_totally_inessential());
    }

    #[test]
    fn analyze_runs_all_internal_checks() {
        let (_, ext) = section1();
        let a = ext.analyze();
        assert!(a.essential);
        assert_eq!(a.closure.len(), 3);
        assert!(a.n_vector.is_empty());
    }

    #[test]
    fn quotient_trivial_cases() {
        let (base, _) = section1();
        let empty: [&str; 0] = [];
        let h0 = SatHereditarySet::new(&base, &empty).unwrap();
        assert_eq!(quotient_graph(&base, &h0).unwrap(), base);
        let hall = SatHereditarySet::new(&base, &["w1", "w2", "w3"]).unwrap();
        let f = quotient_graph(&base, &hall).unwrap();
        assert_eq!(f.vertex_count(), 0);
        assert_eq!(f.edge_count(), 0);
    }

    #[test]
    fn quotient_keeps_self_loop() {
        let g = Graph::build(&["a", "b"], &[("l", "a", "a"), ("e", "a", "b")]).unwrap();
        let h = SatHereditarySet::new(&g, &["b"]).unwrap();
        let f = quotient_graph(&g, &h).unwrap();
        assert_eq!(f.vertices(), ["a".to_string()]);
        assert_eq!(f.edge_count(), 1);
        assert_eq!(f.edges()[0].id, "l");
    }

    #[test]
    fn block_decomposition_examples() {
        let g = Graph::build(&["a", "b"], &[("l", "a", "a"), ("e", "a", "b")]).unwrap();
        let blocks = block_decomposition(&g, &["a"]).unwrap();
        assert_eq!(
            blocks.a_f,
            IntMatrix::from_i64(&["a"], &["a"], &[&[1]]).unwrap()
        );
        assert_eq!(
            blocks.x,
            IntMatrix::from_i64(&["a"], &["b"], &[&[1]]).unwrap()
        );
        assert_eq!(
            blocks.c,
            IntMatrix::from_i64(&["b"], &["b"], &[&[0]]).unwrap()
        );

        let (base, _) = section1();
        let full = block_decomposition(&base, &["w1", "w2", "w3"]).unwrap();
        assert_eq!(full.a_f, base.vertex_matrix());
        assert_eq!(full.x.n_cols(), 0);
        let none = block_decomposition::<&str>(&base, &[]).unwrap();
        assert_eq!(none.c, base.vertex_matrix());
        assert_eq!(none.a_f.n_rows(), 0);
    }

    #[test]
    fn block_decomposition_rejects_non_hereditary_complement() {
        // closure {b} leaves complement {a}, but a -> b enters the closure
        let g = Graph::build(&["a", "b"], &[("e", "a", "b"), ("l", "b", "b")]).unwrap();
        assert_eq!(
            block_decomposition(&g, &["b"]).unwrap_err(),
            SetError::NotHereditary { edge: "e".into() }
        );
    }
}
