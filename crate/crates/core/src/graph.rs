//! The directed multigraph of a d-brace family and its property checks.
//!
//! Vertices are the family's sections; for every parameter `l` and element
//! `a` there is one edge `S_l -> S_{phi(l,a)}` labeled `a`, so the graph has
//! exactly `|H| * |A|` edges. Vertices in `Im phi` carry a loop (labeled 0)
//! and all of their outgoing edges are reversible; the restriction to
//! `Im phi` is the zero-symmetric core.

use thiserror::Error;

use crate::dbrace::{zero_symmetric_core, DBraceFamily};
use crate::group::{FiniteAbelianGroup, Holomorph};
use crate::report::{Check, CheckOptions, Report};

/// Labeled directed multigraph of a family: `targets[v][a]` is the head of
/// the edge out of `v` labeled by the group element `a`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DBraceGraph {
    pub vertices: usize,
    pub degree: usize,
    pub targets: Vec<Vec<usize>>,
}

/// One edge per `(vertex, label)` pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GraphEdge {
    pub src: usize,
    pub dst: usize,
    pub label: usize,
}

impl DBraceGraph {
    pub fn edges(&self) -> Vec<GraphEdge> {
        let mut out = Vec::with_capacity(self.vertices * self.degree);
        for (src, row) in self.targets.iter().enumerate() {
            for (label, &dst) in row.iter().enumerate() {
                out.push(GraphEdge { src, dst, label });
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.vertices * self.degree
    }

    pub fn has_edge(&self, src: usize, dst: usize) -> bool {
        self.targets[src].iter().any(|&t| t == dst)
    }

    pub fn has_loop(&self, v: usize) -> bool {
        self.has_edge(v, v)
    }

    /// Multiplicity matrix of the underlying unlabeled multigraph.
    pub fn multiplicity_matrix(&self) -> Vec<Vec<usize>> {
        let mut m = vec![vec![0usize; self.vertices]; self.vertices];
        for (src, row) in self.targets.iter().enumerate() {
            for &dst in row {
                m[src][dst] += 1;
            }
        }
        m
    }
}

/// Vertex per section, edge `(l, phi(l,a))` labeled `a` per pair.
pub fn build_graph(fam: &DBraceFamily) -> DBraceGraph {
    let vertices = fam.len();
    let degree = fam.phi_rows().first().map_or(0, |row| row.len());
    let targets = fam
        .phi_rows()
        .iter()
        .map(|row| row.iter().map(|&v| v as usize).collect())
        .collect();
    DBraceGraph {
        vertices,
        degree,
        targets,
    }
}

/// Checks the structural facts about a family's graph: loops (labeled 0) at
/// every `Im phi` vertex, reverse edges for edges leaving `Im phi`
/// vertices, and that the restriction to `Im phi` is a closed subgraph whose
/// family is the zero-symmetric core. Witnesses are vertex indices or
/// `(vertex, label)` pairs.
pub fn check_graph_props(
    hol: &Holomorph,
    fam: &DBraceFamily,
    graph: &DBraceGraph,
    opts: &CheckOptions,
) -> Report {
    let cap = opts.max_witnesses;
    let im: Vec<usize> = fam.im_phi();
    let in_im = {
        let mut mask = vec![false; fam.len()];
        for &v in &im {
            mask[v] = true;
        }
        mask
    };

    let mut edge_count = Check::new("edge-count");
    edge_count.record(
        graph.edge_count() == fam.len() * hol.group().order(),
        || vec![graph.edge_count()],
        cap,
    );

    let mut loops = Check::new("imphi-loops-label-zero");
    for &v in &im {
        loops.record(graph.targets[v][0] == v && graph.has_loop(v), || vec![v], cap);
    }

    let mut reverses = Check::new("imphi-reverse-edges");
    for &v in &im {
        for (label, &w) in graph.targets[v].iter().enumerate() {
            reverses.record(graph.has_edge(w, v), || vec![v, label], cap);
        }
    }

    let mut closed = Check::new("imphi-closed-subgraph");
    for &v in &im {
        for &w in &graph.targets[v] {
            closed.record(in_im[w], || vec![v, w], cap);
        }
    }

    // The Im-phi subgraph is the graph of the zero-symmetric core.
    let core = zero_symmetric_core(hol, fam);
    let core_graph = build_graph(&core);
    let mut core_match = Check::new("imphi-equals-zero-symmetric-core");
    let mut expected = vec![vec![0usize; graph.degree]; im.len()];
    let mut rank = vec![usize::MAX; fam.len()];
    for (new, &old) in im.iter().enumerate() {
        rank[old] = new;
    }
    for (new, &old) in im.iter().enumerate() {
        for (label, &w) in graph.targets[old].iter().enumerate() {
            expected[new][label] = rank[w];
        }
    }
    core_match.record(core_graph.targets == expected, Vec::new, cap);

    let mut report = Report::default();
    report.push(edge_count);
    report.push(loops);
    report.push(reverses);
    report.push(closed);
    report.push(core_match);
    report
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphIsoError {
    #[error("graph has {0} vertices; exhaustive isomorphism is bounded at {MAX_ISO_VERTICES}")]
    TooLarge(usize),
}

pub const MAX_ISO_VERTICES: usize = 10;

/// Unlabeled directed-multigraph isomorphism: edge multiplicities counted,
/// labels ignored. Exhaustive over vertex bijections.
pub fn graph_isomorphic(g1: &DBraceGraph, g2: &DBraceGraph) -> Result<bool, GraphIsoError> {
    if g1.vertices.max(g2.vertices) > MAX_ISO_VERTICES {
        return Err(GraphIsoError::TooLarge(g1.vertices.max(g2.vertices)));
    }
    if g1.vertices != g2.vertices || g1.degree != g2.degree {
        return Ok(false);
    }
    let m1 = g1.multiplicity_matrix();
    let m2 = g2.multiplicity_matrix();
    let n = g1.vertices;
    let mut perm: Vec<usize> = (0..n).collect();
    Ok(search_permutation(&mut perm, 0, &|p| {
        (0..n).all(|u| (0..n).all(|v| m1[u][v] == m2[p[u]][p[v]]))
    }))
}

/// Label-preserving isomorphism: a vertex bijection commuting with every
/// labeled edge map.
pub fn graph_isomorphic_labeled(
    g1: &DBraceGraph,
    g2: &DBraceGraph,
) -> Result<bool, GraphIsoError> {
    if g1.vertices.max(g2.vertices) > MAX_ISO_VERTICES {
        return Err(GraphIsoError::TooLarge(g1.vertices.max(g2.vertices)));
    }
    if g1.vertices != g2.vertices || g1.degree != g2.degree {
        return Ok(false);
    }
    let n = g1.vertices;
    let mut perm: Vec<usize> = (0..n).collect();
    Ok(search_permutation(&mut perm, 0, &|p| {
        (0..n).all(|u| (0..g1.degree).all(|a| p[g1.targets[u][a]] == g2.targets[p[u]][a]))
    }))
}

fn search_permutation(perm: &mut Vec<usize>, k: usize, accept: &dyn Fn(&[usize]) -> bool) -> bool {
    if k == perm.len() {
        return accept(perm);
    }
    for i in k..perm.len() {
        perm.swap(k, i);
        if search_permutation(perm, k + 1, accept) {
            perm.swap(k, i);
            return true;
        }
        perm.swap(k, i);
    }
    false
}

/// Deterministic DOT rendering. Vertices are `S0, S1, ...`; `Im phi`
/// vertices are drawn with a double border. When `merge` is set, parallel
/// edges with the same endpoints collapse into one edge labeled by the
/// comma-joined sorted element list; otherwise every labeled edge is drawn
/// separately.
pub fn export_dot(
    graph: &DBraceGraph,
    group: &FiniteAbelianGroup,
    fam: &DBraceFamily,
    merge: bool,
) -> String {
    let im = fam.im_phi();
    let mut out = String::from("digraph dbrace {\n");
    for v in 0..graph.vertices {
        let style = if im.contains(&v) {
            " [shape=doublecircle]"
        } else {
            " [shape=circle]"
        };
        out.push_str(&format!("  S{v}{style};\n"));
    }
    if merge {
        for src in 0..graph.vertices {
            let mut by_dst: Vec<Vec<usize>> = vec![Vec::new(); graph.vertices];
            for (label, &dst) in graph.targets[src].iter().enumerate() {
                by_dst[dst].push(label);
            }
            for (dst, labels) in by_dst.iter().enumerate() {
                if labels.is_empty() {
                    continue;
                }
                let text: Vec<String> =
                    labels.iter().map(|&a| group.element_name(a)).collect();
                out.push_str(&format!(
                    "  S{src} -> S{dst} [label=\"{}\"];\n",
                    text.join(",")
                ));
            }
        }
    } else {
        for edge in graph.edges() {
            out.push_str(&format!(
                "  S{} -> S{} [label=\"{}\"];\n",
                edge.src,
                edge.dst,
                group.element_name(edge.label)
            ));
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dbrace::{close_family, DBraceFamily, Section};
    use crate::group::FiniteAbelianGroup;

    fn hol_z3() -> Holomorph {
        Holomorph::new(FiniteAbelianGroup::new(&[3]).unwrap()).unwrap()
    }

    #[test]
    fn triangle_graph_of_z3_core_family() {
        let hol = hol_z3();
        let fam = DBraceFamily::from_sections(
            &hol,
            vec![
                Section(vec![0, 1, 1]),
                Section(vec![0, 0, 1]),
                Section(vec![0, 1, 0]),
            ],
        )
        .unwrap();
        let graph = build_graph(&fam);
        assert_eq!(graph.vertices, 3);
        assert_eq!(graph.edge_count(), 9);
        // Loops labeled 0 everywhere; l1 -> l3 labeled 1, l1 -> l2 labeled 2.
        for v in 0..3 {
            assert_eq!(graph.targets[v][0], v);
        }
        assert_eq!(graph.targets[0][1], 2);
        assert_eq!(graph.targets[0][2], 1);
        let report = check_graph_props(&hol, &fam, &graph, &CheckOptions::default());
        assert!(report.passed(), "{report}");
    }

    #[test]
    fn single_vertex_family_graph() {
        let hol = hol_z3();
        let fam = close_family(&hol, &Section(vec![0, 0, 0])).unwrap();
        let graph = build_graph(&fam);
        assert_eq!(graph.vertices, 1);
        assert_eq!(graph.edge_count(), 3);
        assert!(graph.has_loop(0));
        let report = check_graph_props(&hol, &fam, &graph, &CheckOptions::default());
        assert!(report.passed(), "{report}");
    }

    #[test]
    fn lambda4_vertex_has_no_loop() {
        let hol = hol_z3();
        let fam = close_family(&hol, &Section(vec![1, 0, 0])).unwrap();
        let graph = build_graph(&fam);
        assert_eq!(graph.vertices, 4);
        // The seed is index 0 and lies outside Im phi.
        assert!(!graph.has_loop(0));
        assert!(!fam.im_phi().contains(&0));
        for v in fam.im_phi() {
            assert!(graph.has_loop(v));
        }
        let report = check_graph_props(&hol, &fam, &graph, &CheckOptions::default());
        assert!(report.passed(), "{report}");
    }

    #[test]
    fn seed_family_graphs_are_isomorphic_but_not_label_isomorphic_to_core() {
        let hol = hol_z3();
        let g4 = build_graph(&close_family(&hol, &Section(vec![1, 0, 0])).unwrap());
        let g5 = build_graph(&close_family(&hol, &Section(vec![1, 1, 0])).unwrap());
        let g6 = build_graph(&close_family(&hol, &Section(vec![1, 0, 1])).unwrap());
        assert!(graph_isomorphic(&g4, &g5).unwrap());
        assert!(graph_isomorphic(&g4, &g6).unwrap());
        assert!(graph_isomorphic(&g5, &g6).unwrap());
        let core = build_graph(
            &DBraceFamily::from_sections(
                &hol,
                vec![
                    Section(vec![0, 1, 1]),
                    Section(vec![0, 0, 1]),
                    Section(vec![0, 1, 0]),
                ],
            )
            .unwrap(),
        );
        assert!(!graph_isomorphic(&g4, &core).unwrap());
        let single = build_graph(&close_family(&hol, &Section(vec![0, 0, 0])).unwrap());
        assert!(!graph_isomorphic(&single, &core).unwrap());
        assert!(graph_isomorphic(&core, &core).unwrap());
        assert!(graph_isomorphic_labeled(&core, &core).unwrap());
    }

    #[test]
    fn dot_export_is_deterministic_and_merged() {
        let hol = Holomorph::new(FiniteAbelianGroup::new(&[2]).unwrap()).unwrap();
        let fam = close_family(&hol, &Section(vec![0, 0])).unwrap();
        let graph = build_graph(&fam);
        let dot = export_dot(&graph, hol.group(), &fam, true);
        assert_eq!(
            dot,
            "digraph dbrace {\n  S0 [shape=doublecircle];\n  S0 -> S0 [label=\"0,1\"];\n}\n"
        );
        let dot2 = export_dot(&graph, hol.group(), &fam, true);
        assert_eq!(dot, dot2);
    }

    #[test]
    fn dot_export_z3_core_counts() {
        let hol = hol_z3();
        let fam = DBraceFamily::from_sections(
            &hol,
            vec![
                Section(vec![0, 1, 1]),
                Section(vec![0, 0, 1]),
                Section(vec![0, 1, 0]),
            ],
        )
        .unwrap();
        let graph = build_graph(&fam);
        let dot = export_dot(&graph, hol.group(), &fam, true);
        // 3 loops labeled "0" and 6 single-label arcs.
        assert_eq!(dot.matches("label=\"0\"").count(), 3);
        assert_eq!(dot.matches(" -> ").count(), 9);
        let unmerged = export_dot(&graph, hol.group(), &fam, false);
        assert_eq!(unmerged.matches(" -> ").count(), 9);
    }
}
