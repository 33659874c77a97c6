//! Graphs of guarded strings and homomorphism checking.
//!
//! A guarded string maps to a path-shaped graph: one vertex per atom
//! occurrence, one letter edge per plain letter, and no edge for `top`. A
//! graph homomorphism preserves vertex labels, labelled edges, input and
//! output; the resulting preorder characterises validity of inequations in
//! relational models.

use std::collections::HashSet;

use crate::gstring::GuardedString;
use crate::syntax::{AtomId, LetterId, Sym};

/// A vertex-labelled graph with distinguished input and output vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    pub labels: Vec<AtomId>,
    pub edges: Vec<(usize, LetterId, usize)>,
    pub input: usize,
    pub output: usize,
}

impl Graph {
    pub fn n_vertices(&self) -> usize {
        self.labels.len()
    }
}

/// The graph of a guarded string: vertex `i` carries the `i`-th atom, a
/// letter at position `i` yields an edge `i -> i+1`, and `top` yields no
/// edge.
pub fn graph_of(u: &GuardedString) -> Graph {
    let n = u.len();
    let labels = (0..=n).map(|i| u.atom_at(i)).collect();
    let edges = (0..n)
        .filter_map(|i| match u.sym_at(i) {
            Sym::Letter(l) => Some((i, l, i + 1)),
            Sym::Top => None,
        })
        .collect();
    Graph { labels, edges, input: 0, output: n }
}

/// Is there a homomorphism from `g` to `h`? Backtracking over the vertices
/// of `g`, with the input and output assignments forced and label-filtered
/// candidate lists. Works on arbitrary graphs, not only string graphs.
pub fn hom_exists(g: &Graph, h: &Graph) -> bool {
    let h_edges: HashSet<(usize, LetterId, usize)> = h.edges.iter().copied().collect();
    let mut map: Vec<Option<usize>> = vec![None; g.n_vertices()];

    // Forced endpoints; a conflict here already refutes.
    if g.labels[g.input] != h.labels[h.input] || g.labels[g.output] != h.labels[h.output] {
        return false;
    }
    map[g.input] = Some(h.input);
    if let Some(prev) = map[g.output] {
        if prev != h.output {
            return false;
        }
    }
    map[g.output] = Some(h.output);

    // Edges indexed by the vertex assigned later, so consistency can be
    // checked incrementally.
    let order: Vec<usize> = {
        let mut order: Vec<usize> = Vec::new();
        order.push(g.input);
        if g.output != g.input {
            order.push(g.output);
        }
        order.extend((0..g.n_vertices()).filter(|&v| v != g.input && v != g.output));
        order
    };
    let rank: Vec<usize> = {
        let mut rank = vec![0; g.n_vertices()];
        for (i, &v) in order.iter().enumerate() {
            rank[v] = i;
        }
        rank
    };
    let mut edges_by_later: Vec<Vec<(usize, LetterId, usize)>> = vec![Vec::new(); order.len()];
    for &(s, l, t) in &g.edges {
        let later = rank[s].max(rank[t]);
        edges_by_later[later].push((s, l, t));
    }

    fn consistent(
        edges: &[(usize, LetterId, usize)],
        map: &[Option<usize>],
        h_edges: &HashSet<(usize, LetterId, usize)>,
    ) -> bool {
        edges.iter().all(|&(s, l, t)| {
            match (map[s], map[t]) {
                (Some(ms), Some(mt)) => h_edges.contains(&(ms, l, mt)),
                _ => true,
            }
        })
    }

    fn assign(
        pos: usize,
        order: &[usize],
        g: &Graph,
        h: &Graph,
        map: &mut Vec<Option<usize>>,
        edges_by_later: &[Vec<(usize, LetterId, usize)>],
        h_edges: &HashSet<(usize, LetterId, usize)>,
    ) -> bool {
        if pos == order.len() {
            return true;
        }
        let v = order[pos];
        if map[v].is_some() {
            // Forced vertex; only its incident edges need checking.
            return consistent(&edges_by_later[pos], map, h_edges)
                && assign(pos + 1, order, g, h, map, edges_by_later, h_edges);
        }
        for w in 0..h.n_vertices() {
            if h.labels[w] != g.labels[v] {
                continue;
            }
            map[v] = Some(w);
            if consistent(&edges_by_later[pos], map, h_edges)
                && assign(pos + 1, order, g, h, map, edges_by_later, h_edges)
            {
                return true;
            }
            map[v] = None;
        }
        false
    }

    assign(0, &order, g, h, &mut map, &edges_by_later, &h_edges)
}

/// `g(u) <| g(v)`: does a homomorphism exist from the graph of `v` to the
/// graph of `u`? This is the witness relation for `u` being reachable from
/// `v` in the rewrite closure of the relational theory.
pub fn dominated(u: &GuardedString, v: &GuardedString) -> bool {
    hom_exists(&graph_of(v), &graph_of(u))
}
