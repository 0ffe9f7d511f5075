//! Text and JSON renderings of analysis results and decisions.

use std::io::Write;

use serde_json::json;

use graphext::decide::Decision;
use graphext::linalg::CokerInvariants;
use graphext::problem::Problem;
use graphext::tails::maximal_tails;
use graphext::{CokernelPresentation, IntMatrix, OneSinkExtension, SmithDecomposition};

use crate::{Format, ModeArg};

const SYMMETRY_NOTE: &str = "the verdict is symmetric: it asserts that one of the two \
                             algebras embeds as a full corner in the other, without fixing \
                             the direction";

fn ids(list: &[String]) -> String {
    if list.is_empty() {
        "(empty)".to_string()
    } else {
        list.join(", ")
    }
}

fn base_json(problem: &Problem) -> serde_json::Value {
    let g = &problem.base;
    json!({
        "vertices": g.vertices(),
        "edge_count": g.edge_count(),
        "condition_l": g.condition_l(),
        "condition_k": g.condition_k(),
        "maximal_tails": maximal_tails(g).iter().map(|t| t.vertices().to_vec()).collect::<Vec<_>>(),
    })
}

pub fn validate<O: Write>(problem: &Problem, format: Format, out: &mut O) {
    match format {
        Format::Json => {
            let v = json!({
                "valid": true,
                "base": {"vertices": problem.base.vertex_count(), "edges": problem.base.edge_count()},
                "extensions": problem.extensions.iter().map(|(label, ext)| json!({
                    "label": label,
                    "sink": ext.sink(),
                    "added_vertices": ext.added_vertices(),
                    "boundary_edges": ext.boundary_edges(),
                })).collect::<Vec<_>>(),
            });
            let _ = writeln!(out, "{v}");
        }
        Format::Text => {
            let _ = writeln!(
                out,
                "ok: base graph has {} vertices and {} edges",
                problem.base.vertex_count(),
                problem.base.edge_count()
            );
            for (label, ext) in &problem.extensions {
                let _ = writeln!(
                    out,
                    "extension {label}: valid 1-sink extension (sink {}, {} added vertices, {} boundary edges)",
                    ext.sink(),
                    ext.added_vertices().len(),
                    ext.boundary_edges().len()
                );
            }
        }
    }
}

pub fn analyze<O: Write>(problem: &Problem, format: Format, out: &mut O) {
    let g = &problem.base;
    match format {
        Format::Json => {
            let extensions: Vec<serde_json::Value> = problem
                .extensions
                .iter()
                .map(|(label, ext)| {
                    json!({
                        "label": label,
                        "sink": ext.sink(),
                        "added_vertices": ext.added_vertices(),
                        "boundary_edges": ext.boundary_edges(),
                        "boundary_vertices": ext.boundary_vertices(),
                        "analysis": ext.analyze(),
                    })
                })
                .collect();
            let v = json!({"base": base_json(problem), "extensions": extensions});
            let _ = writeln!(out, "{v}");
        }
        Format::Text => {
            let _ = writeln!(
                out,
                "base: {} vertices, {} edges",
                g.vertex_count(),
                g.edge_count()
            );
            let l = g.condition_l();
            match l.witness {
                Some(w) => {
                    let _ = writeln!(out, "condition (L): fails (exitless loop: {})", w.join(", "));
                }
                None => {
                    let _ = writeln!(out, "condition (L): holds");
                }
            }
            let k = g.condition_k();
            match k.witness {
                Some(w) => {
                    let _ = writeln!(
                        out,
                        "condition (K): fails (vertex `{w}` is the base of exactly one simple loop)"
                    );
                }
                None => {
                    let _ = writeln!(out, "condition (K): holds");
                }
            }
            let tails = maximal_tails(g);
            if tails.is_empty() {
                let _ = writeln!(out, "maximal tails: none");
            } else {
                let rendered: Vec<String> = tails
                    .iter()
                    .map(|t| format!("{{{}}}", t.vertices().join(", ")))
                    .collect();
                let _ = writeln!(out, "maximal tails: {}", rendered.join(", "));
            }
            for (label, ext) in &problem.extensions {
                let a = ext.analyze();
                let _ = writeln!(out, "extension {label} (sink {}):", ext.sink());
                let _ = writeln!(out, "  boundary vertices: {}", ids(ext.boundary_vertices()));
                let _ = writeln!(out, "  wojciech vector: {}", a.wojciech);
                let _ = writeln!(out, "  closure of sink: {}", ids(&a.closure));
                let _ = writeln!(out, "  inessential part: {}", ids(&a.inessential));
                let _ = writeln!(out, "  n vector: {}", a.n_vector);
                let _ = writeln!(
                    out,
                    "  essential: {}; totally inessential: {}; finite sink path space: {}",
                    a.essential, a.totally_inessential, a.finite_sink_path_space
                );
            }
        }
    }
}

fn invariants_text(inv: &CokerInvariants) -> String {
    let torsion: Vec<String> = inv.torsion.iter().map(|d| d.to_string()).collect();
    format!(
        "torsion factors [{}], free rank {}",
        torsion.join(", "),
        inv.free_rank
    )
}

pub fn coker<O: Write>(problem: &Problem, format: Format, out: &mut O) {
    let g = &problem.base;
    let base_matrix = g
        .vertex_matrix()
        .minus_identity()
        .expect("vertex matrix is square");
    let base_inv = CokernelPresentation::new(base_matrix).invariants();

    // the quotient presentation applies when the two-loop condition holds
    // and every extension shares one sink closure
    let mut quotient: Option<(Vec<String>, CokerInvariants)> = None;
    if g.condition_k().holds && !problem.extensions.is_empty() {
        let closures: Vec<Vec<String>> = problem
            .extensions
            .iter()
            .map(|(_, e)| e.closure_of_sink())
            .collect();
        if closures.windows(2).all(|w| w[0] == w[1]) {
            let closure = closures.into_iter().next().unwrap();
            let blocks = graphext::block_decomposition(g, &closure)
                .expect("sink closure complements are hereditary");
            let inv = CokernelPresentation::new(
                blocks.a_f.minus_identity().expect("square block"),
            )
            .invariants();
            quotient = Some((closure, inv));
        }
    }

    match format {
        Format::Json => {
            let v = json!({
                "base": {"matrix": "vertex matrix - I", "invariants": base_inv},
                "quotient": quotient.as_ref().map(|(closure, inv)| json!({
                    "matrix": "quotient vertex matrix - I",
                    "common_closure": closure,
                    "invariants": inv,
                })),
            });
            let _ = writeln!(out, "{v}");
        }
        Format::Text => {
            let _ = writeln!(
                out,
                "cokernel of (vertex matrix - I): {}",
                invariants_text(&base_inv)
            );
            match quotient {
                Some((closure, inv)) => {
                    let _ = writeln!(
                        out,
                        "common sink closure: {}; cokernel of (quotient matrix - I): {}",
                        ids(&closure),
                        invariants_text(&inv)
                    );
                }
                None => {
                    let _ = writeln!(
                        out,
                        "quotient cokernel: not applicable (needs the two-loop condition and a common sink closure)"
                    );
                }
            }
        }
    }
}

fn preconditions_json(problem: &Problem, pair: (&str, &OneSinkExtension, &str, &OneSinkExtension)) -> serde_json::Value {
    let g = &problem.base;
    let (l1, e1, l2, e2) = pair;
    let l = g.condition_l();
    let k = g.condition_k();
    json!([
        {"name": "condition_l", "holds": l.holds, "witness": l.witness},
        {"name": "condition_k", "holds": k.holds, "witness": k.witness},
        {"name": "essential", "extension": l1, "holds": e1.is_essential()},
        {"name": "essential", "extension": l2, "holds": e2.is_essential()},
    ])
}

pub fn decision<O: Write>(
    problem: &Problem,
    labels: (&str, &str),
    mode: ModeArg,
    decision: &Decision,
    format: Format,
    out: &mut O,
) {
    match format {
        Format::Json => {
            let e1 = problem
                .extensions
                .iter()
                .find(|(l, _)| l == labels.0)
                .map(|(_, e)| e)
                .expect("label comes from the problem");
            let e2 = problem
                .extensions
                .iter()
                .find(|(l, _)| l == labels.1)
                .map(|(_, e)| e)
                .expect("label comes from the problem");
            let v = json!({
                "command": "decide",
                "extensions": [labels.0, labels.1],
                "mode_requested": mode.name(),
                "preconditions": preconditions_json(problem, (labels.0, e1, labels.1, e2)),
                "decision": decision,
                "note": SYMMETRY_NOTE,
                "exit_code": crate::exit_code_for(decision),
            });
            let _ = writeln!(out, "{v}");
        }
        Format::Text => {
            render_decision_text(labels, decision, out);
        }
    }
}

fn render_decision_text<O: Write>(labels: (&str, &str), decision: &Decision, out: &mut O) {
    use graphext::decide::{Evidence, Mode, Verdict};
    let verdict = match decision.verdict {
        Verdict::Embeddable => "embeddable",
        Verdict::NotEmbeddable => "not embeddable",
        Verdict::PreconditionFailed => "precondition failed",
    };
    let mode = match decision.mode {
        Mode::Essential => "essential",
        Mode::General => "general",
        Mode::TotallyInessential => "totally inessential",
    };
    let _ = writeln!(
        out,
        "{} vs {}: {verdict} (mode: {mode})",
        labels.0, labels.1
    );
    match &decision.evidence {
        Evidence::ClassesEqual {
            tested, certificate, ..
        } => {
            let _ = writeln!(out, "  tested vectors: {} and {}", tested.0, tested.1);
            let _ = writeln!(
                out,
                "  certificate z with (matrix) * z = difference: {certificate}"
            );
            let _ = writeln!(out, "  note: {SYMMETRY_NOTE}");
        }
        Evidence::ClassesDiffer {
            tested,
            obstruction,
            ..
        } => {
            let _ = writeln!(out, "  tested vectors: {} and {}", tested.0, tested.1);
            if obstruction.modulus == 0.into() {
                let _ = writeln!(
                    out,
                    "  obstruction: a functional annihilating the matrix gives {} != 0 on the difference",
                    obstruction.value
                );
            } else {
                let _ = writeln!(
                    out,
                    "  obstruction: difference is {} (mod {}) against an annihilating functional",
                    obstruction.residue, obstruction.modulus
                );
            }
        }
        Evidence::Vacuous => {
            let _ = writeln!(
                out,
                "  both extensions are totally inessential; the class condition is vacuous"
            );
        }
        Evidence::ClosuresDiffer { closure1, closure2 } => {
            let _ = writeln!(
                out,
                "  sink closures differ: {{{}}} vs {{{}}}",
                closure1.join(", "),
                closure2.join(", ")
            );
        }
        Evidence::Preconditions { failures } => {
            for f in failures {
                let _ = writeln!(out, "  failed hypothesis: {}", failure_text(f));
            }
        }
    }
}

fn failure_text(f: &graphext::decide::PreconditionFailure) -> String {
    use graphext::decide::PreconditionFailure as PF;
    match f {
        PF::ConditionL { witness_loop } => format!(
            "condition (L): loop [{}] has no exit",
            witness_loop.join(", ")
        ),
        PF::ConditionK { witness_vertex } => format!(
            "condition (K): vertex `{witness_vertex}` is the base of exactly one simple loop"
        ),
        PF::NotEssential {
            extension,
            witness_vertex,
        } => format!(
            "essentiality of extension {extension}: vertex `{witness_vertex}` never reaches the sink"
        ),
    }
}

pub fn all_pairs<O: Write>(
    problem: &Problem,
    mode: ModeArg,
    decisions: &[((String, String), Decision)],
    format: Format,
    out: &mut O,
) {
    match format {
        Format::Json => {
            let v = json!({
                "command": "decide",
                "all_pairs": true,
                "mode_requested": mode.name(),
                "base": {"vertices": problem.base.vertex_count(), "edges": problem.base.edge_count()},
                "pairs": decisions.iter().map(|((l1, l2), d)| json!({
                    "extensions": [l1, l2],
                    "decision": d,
                    "exit_code": crate::exit_code_for(d),
                })).collect::<Vec<_>>(),
                "note": SYMMETRY_NOTE,
            });
            let _ = writeln!(out, "{v}");
        }
        Format::Text => {
            for ((l1, l2), d) in decisions {
                render_decision_text((l1, l2), d, out);
            }
        }
    }
}

pub fn snf<O: Write>(m: &IntMatrix, snf: &SmithDecomposition, format: Format, out: &mut O) {
    let invariants = CokernelPresentation::new(m.clone()).invariants();
    match format {
        Format::Json => {
            let v = json!({
                "u": snf.u,
                "d": snf.d,
                "v": snf.v,
                "diagonal": snf.diagonal().iter().map(|d| d.to_string()).collect::<Vec<_>>(),
                "cokernel": invariants,
            });
            let _ = writeln!(out, "{v}");
        }
        Format::Text => {
            let diag: Vec<String> = snf.diagonal().iter().map(|d| d.to_string()).collect();
            let _ = writeln!(out, "diagonal: [{}]", diag.join(", "));
            let _ = writeln!(out, "cokernel: {}", invariants_text(&invariants));
            let _ = writeln!(out, "u =\n{}", snf.u);
            let _ = writeln!(out, "d =\n{}", snf.d);
            let _ = writeln!(out, "v =\n{}", snf.v);
        }
    }
}

pub fn export_dot<O: Write>(
    problem: &Problem,
    picked: Option<(&str, &OneSinkExtension)>,
    out: &mut O,
) {
    let _ = writeln!(out, "digraph g {{");
    let _ = writeln!(out, "  rankdir=LR;");
    for v in problem.base.vertices() {
        let _ = writeln!(out, "  \"{v}\" [shape=circle];");
    }
    for e in problem.base.edges() {
        let _ = writeln!(out, "  \"{}\" -> \"{}\" [label=\"{}\"];", e.src, e.dst, e.id);
    }
    if let Some((label, ext)) = picked {
        let _ = writeln!(out, "  // added part of extension {label}");
        for v in ext.added_vertices() {
            let _ = writeln!(out, "  \"{v}\" [shape=doublecircle, style=dashed];");
        }
        for e in ext.total().edges() {
            if !problem.base.edges().iter().any(|b| b.id == e.id) {
                let _ = writeln!(
                    out,
                    "  \"{}\" -> \"{}\" [label=\"{}\", style=dashed];",
                    e.src, e.dst, e.id
                );
            }
        }
    }
    let _ = writeln!(out, "}}");
}
