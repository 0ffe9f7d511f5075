//! Seeded random generators and a bitmask tail checker shared by the
//! integration suites.

#![allow(dead_code)]

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use graphext::{Edge, Graph, OneSinkExtension};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn gen_graph(rng: &mut StdRng, max_v: usize, max_e: usize) -> Graph {
    let n = rng.gen_range(1..=max_v);
    let m = rng.gen_range(0..=max_e);
    let vertices: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let edges: Vec<Edge> = (0..m)
        .map(|k| Edge {
            id: format!("e{k}"),
            src: format!("v{}", rng.gen_range(0..n)),
            dst: format!("v{}", rng.gen_range(0..n)),
        })
        .collect();
    Graph::new(vertices, edges).expect("generated ids are distinct")
}

/// Random graph in which every vertex emits at least one edge.
pub fn gen_no_sink_graph(rng: &mut StdRng, max_v: usize, extra_e: usize) -> Graph {
    let n = rng.gen_range(1..=max_v);
    let vertices: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let mut edges: Vec<Edge> = (0..n)
        .map(|i| Edge {
            id: format!("e{i}"),
            src: format!("v{i}"),
            dst: format!("v{}", rng.gen_range(0..n)),
        })
        .collect();
    for k in 0..rng.gen_range(0..=extra_e) {
        edges.push(Edge {
            id: format!("x{k}"),
            src: format!("v{}", rng.gen_range(0..n)),
            dst: format!("v{}", rng.gen_range(0..n)),
        });
    }
    Graph::new(vertices, edges).expect("generated ids are distinct")
}

/// Random DAG: every edge goes from a smaller to a larger vertex index.
pub fn gen_acyclic_graph(rng: &mut StdRng, max_v: usize, max_e: usize) -> Graph {
    let n = rng.gen_range(1..=max_v);
    let vertices: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let mut edges = Vec::new();
    if n >= 2 {
        for k in 0..rng.gen_range(0..=max_e) {
            let a = rng.gen_range(0..n - 1);
            let b = rng.gen_range(a + 1..n);
            edges.push(Edge {
                id: format!("e{k}"),
                src: format!("v{a}"),
                dst: format!("v{b}"),
            });
        }
    }
    Graph::new(vertices, edges).expect("generated ids are distinct")
}

/// Adds a parallel twin to every edge. Any simple loop then has a variant
/// through a twin edge, so no vertex can be the base of exactly one.
pub fn double_edges(g: &Graph) -> Graph {
    let mut edges = g.edges().to_vec();
    edges.extend(g.edges().iter().map(|e| Edge {
        id: format!("{}__twin", e.id),
        src: e.src.clone(),
        dst: e.dst.clone(),
    }));
    Graph::new(g.vertices().to_vec(), edges).expect("twin ids are fresh")
}

fn non_sink_vertices(g: &Graph) -> Vec<String> {
    let sinks = g.sinks();
    g.vertices()
        .iter()
        .filter(|v| !sinks.contains(v))
        .cloned()
        .collect()
}

/// Random valid extension of `g`: an added DAG with one sink, boundary
/// edges only from non-sink base vertices, everything receiving an edge.
/// `tag` keeps ids across extensions of one base distinct.
/// Returns `None` when the base has no non-sink vertex to hang a boundary
/// edge on.
pub fn gen_extension(rng: &mut StdRng, g: &Graph, tag: &str) -> Option<OneSinkExtension> {
    let donors = non_sink_vertices(g);
    if donors.is_empty() {
        return None;
    }
    let inner = rng.gen_range(0..=2usize);
    // added order: inner vertices first, the sink last
    let added: Vec<String> = (0..inner)
        .map(|i| format!("{tag}h{i}"))
        .chain(std::iter::once(format!("{tag}sink")))
        .collect();
    let sink = added.last().unwrap().clone();

    let mut edges: Vec<Edge> = g.edges().to_vec();
    let mut next_id = 0usize;
    let mut fresh = |edges: &mut Vec<Edge>, src: &str, dst: &str| {
        edges.push(Edge {
            id: format!("{tag}b{next_id}"),
            src: src.to_string(),
            dst: dst.to_string(),
        });
        next_id += 1;
    };

    // every non-sink added vertex emits at least one forward edge
    for i in 0..inner {
        let lo = i + 1;
        let hi = added.len() - 1;
        let target = &added[rng.gen_range(lo..=hi)];
        fresh(&mut edges, &added[i], target);
        if rng.gen_bool(0.4) {
            let target = &added[rng.gen_range(lo..=hi)];
            fresh(&mut edges, &added[i], target);
        }
    }
    // every added vertex receives at least one edge
    for (j, a) in added.iter().enumerate() {
        let already: bool = edges.iter().any(|e| e.dst == *a);
        if already {
            continue;
        }
        if j > 0 && rng.gen_bool(0.5) {
            let donor = added[rng.gen_range(0..j)].clone();
            fresh(&mut edges, &donor, a);
        } else {
            let donor = donors[rng.gen_range(0..donors.len())].clone();
            fresh(&mut edges, &donor, a);
        }
    }
    // sprinkle extra boundary edges
    for _ in 0..rng.gen_range(0..=3usize) {
        let donor = donors[rng.gen_range(0..donors.len())].clone();
        let target = added[rng.gen_range(0..added.len())].clone();
        fresh(&mut edges, &donor, &target);
    }

    let mut vertices = g.vertices().to_vec();
    vertices.extend(added.iter().cloned());
    let total = Graph::new(vertices, edges).expect("generated ids are distinct");
    Some(OneSinkExtension::validate(g, &total, &sink).expect("construction follows the rules"))
}

/// Random essential extension over a sink-free base: after the random
/// construction, every base vertex that cannot reach the sink gets a direct
/// boundary edge.
pub fn gen_essential_extension(rng: &mut StdRng, g: &Graph, tag: &str) -> OneSinkExtension {
    assert!(g.sinks().is_empty(), "essential extensions need a sink-free base");
    let ext = gen_extension(rng, g, tag).expect("sink-free base has donors");
    let sink = ext.sink().to_string();
    let mut edges = ext.total().edges().to_vec();
    let mut k = 0usize;
    for v in g.vertices() {
        if !ext.total().reaches(v, &sink).unwrap() {
            edges.push(Edge {
                id: format!("{tag}fix{k}"),
                src: v.clone(),
                dst: sink.clone(),
            });
            k += 1;
        }
    }
    if k == 0 {
        return ext;
    }
    let total = Graph::new(ext.total().vertices().to_vec(), edges).expect("fresh ids");
    OneSinkExtension::validate(g, &total, &sink).expect("still a valid extension")
}

/// Renames every vertex and edge and shuffles all insertion orders,
/// consistently across the base and the given extensions.
pub fn relabel(
    rng: &mut StdRng,
    g: &Graph,
    exts: &[&OneSinkExtension],
) -> (Graph, Vec<OneSinkExtension>) {
    let map_v = |v: &str| format!("r_{v}");
    let map_e = |e: &str| format!("re_{e}");

    let mut base_vertices: Vec<String> = g.vertices().iter().map(|v| map_v(v)).collect();
    base_vertices.shuffle(rng);
    let mut base_edges: Vec<Edge> = g
        .edges()
        .iter()
        .map(|e| Edge {
            id: map_e(&e.id),
            src: map_v(&e.src),
            dst: map_v(&e.dst),
        })
        .collect();
    base_edges.shuffle(rng);
    let new_base =
        Graph::new(base_vertices.clone(), base_edges.clone()).expect("renaming is injective");

    let new_exts = exts
        .iter()
        .map(|ext| {
            let mut vertices = base_vertices.clone();
            vertices.extend(ext.added_vertices().iter().map(|v| map_v(v)));
            vertices.shuffle(rng);
            let mut edges = base_edges.clone();
            edges.extend(
                ext.total()
                    .edges()
                    .iter()
                    .filter(|e| !g.edges().iter().any(|b| b.id == e.id))
                    .map(|e| Edge {
                        id: map_e(&e.id),
                        src: map_v(&e.src),
                        dst: map_v(&e.dst),
                    }),
            );
            edges.shuffle(rng);
            let total = Graph::new(vertices, edges).expect("renaming is injective");
            OneSinkExtension::validate(&new_base, &total, &map_v(ext.sink()))
                .expect("relabeling preserves validity")
        })
        .collect();
    (new_base, new_exts)
}

/// All subsets of vertices satisfying the three tail axioms, computed on
/// bitmasks. Independent of both `maximal_tails` and `is_maximal_tail`.
pub fn tails_by_bitmask(g: &Graph) -> Vec<Vec<String>> {
    let n = g.vertex_count();
    assert!(n <= 16, "bitmask enumeration needs a small graph");
    let index = |id: &str| g.vertices().iter().position(|v| v == id).unwrap();
    let mut adj = vec![Vec::new(); n];
    let mut succ = vec![0u32; n];
    for e in g.edges() {
        let (s, t) = (index(&e.src), index(&e.dst));
        adj[s].push(t);
        succ[s] |= 1 << t;
    }
    // fwd[v] = vertices reachable from v; pred[w] = vertices reaching w
    let mut fwd = vec![0u32; n];
    for v in 0..n {
        let mut seen = 1u32 << v;
        let mut stack = vec![v];
        while let Some(u) = stack.pop() {
            for &t in &adj[u] {
                if seen & (1 << t) == 0 {
                    seen |= 1 << t;
                    stack.push(t);
                }
            }
        }
        fwd[v] = seen;
    }
    let mut pred = vec![0u32; n];
    for v in 0..n {
        for w in 0..n {
            if fwd[v] & (1 << w) != 0 {
                pred[w] |= 1 << v;
            }
        }
    }

    let mut out = Vec::new();
    'subsets: for mask in 1u32..(1u32 << n) {
        for w in 0..n {
            if mask & (1 << w) == 0 {
                continue;
            }
            // backwards hereditary and no relative sinks at w
            if pred[w] & !mask != 0 || succ[w] & mask == 0 {
                continue 'subsets;
            }
        }
        // cofinality
        for v in 0..n {
            if mask & (1 << v) == 0 {
                continue;
            }
            for w in 0..n {
                if mask & (1 << w) == 0 {
                    continue;
                }
                if fwd[v] & fwd[w] & mask == 0 {
                    continue 'subsets;
                }
            }
        }
        out.push(
            (0..n)
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| g.vertices()[i].clone())
                .collect(),
        );
    }
    out
}
