//! Labeling search behind the four-way split: assigns every edge of a
//! 2-matching one of the labels {X0, X1, leftover}, such that X0 and X1
//! are matchings with acyclic unions against the base matching and the
//! leftover edges form a matching (equivalently, every vertex keeps at
//! least one colored edge).
//!
//! The search is a greedy alternating 2-coloring per component with
//! union-find cycle checks against the base; when a color would close a
//! cycle the edge is parked in the leftover, and when no label fits the
//! search backtracks (the "local swap"). Several deterministic traversal
//! variants are tried before giving up; a valid labeling always exists,
//! so exhaustion signals a bug.

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::matching::Matching;
use crate::unionfind::{RollbackUnionFind, UnionFind};

/// One path or cycle of a 2-matching, as an ordered vertex walk.
/// For a path, `vertices` lists the walk end to end; for a cycle, the walk
/// closes from the last vertex back to the first.
#[derive(Debug, Clone)]
pub(crate) struct Component {
    pub vertices: Vec<usize>,
    pub is_cycle: bool,
}

impl Component {
    pub fn edge_count(&self) -> usize {
        if self.is_cycle {
            self.vertices.len()
        } else {
            self.vertices.len() - 1
        }
    }

    pub fn edge(&self, i: usize) -> (usize, usize) {
        let a = self.vertices[i];
        let b = self.vertices[(i + 1) % self.vertices.len()];
        (a.min(b), a.max(b))
    }
}

/// Splits a 2-matching edge set into components with deterministic
/// traversal order: paths start at their smaller endpoint, cycles at their
/// smallest vertex heading toward its smaller neighbor.
pub(crate) fn components_of(edges: &[(usize, usize)]) -> Result<Vec<Component>> {
    let Some(n) = edges.iter().map(|&(u, v)| u.max(v) + 1).max() else {
        return Ok(Vec::new());
    };
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (id, &(u, v)) in edges.iter().enumerate() {
        adj[u].push(id);
        adj[v].push(id);
        if adj[u].len() > 2 || adj[v].len() > 2 {
            return Err(Error::InvalidArgument(
                "edge set has a vertex of degree > 2; not a 2-matching".into(),
            ));
        }
    }
    let mut visited = vec![false; edges.len()];
    let mut comps = Vec::new();
    let mut walk = |start: usize, visited: &mut Vec<bool>| -> Component {
        let mut vertices = vec![start];
        let mut cur = start;
        loop {
            let next_id = adj[cur]
                .iter()
                .copied()
                .filter(|&id| !visited[id])
                .min_by_key(|&id| {
                    let (u, v) = edges[id];
                    if u == cur {
                        v
                    } else {
                        u
                    }
                });
            let Some(id) = next_id else { break };
            visited[id] = true;
            let (u, v) = edges[id];
            cur = if u == cur { v } else { u };
            if cur == start {
                return Component {
                    vertices,
                    is_cycle: true,
                };
            }
            vertices.push(cur);
        }
        Component {
            vertices,
            is_cycle: false,
        }
    };
    // Paths first (walked from their smaller endpoint), then cycles.
    for start in 0..n {
        if adj[start].len() == 1 && !adj[start].iter().all(|&id| visited[id]) {
            comps.push(walk(start, &mut visited));
        }
    }
    for start in 0..n {
        if !adj[start].is_empty() && !adj[start].iter().all(|&id| visited[id]) {
            comps.push(walk(start, &mut visited));
        }
    }
    Ok(comps)
}

const COLOR0: u8 = 0;
const COLOR1: u8 = 1;
const LEFTOVER: u8 = 2;

struct SearchCtx {
    nodes: u64,
    budget: u64,
}

/// Assigns each edge of the 2-matching to X0, X1 or the leftover pool.
/// Returns `[x0, x1, pool]`.
pub(crate) fn split_two_matching(
    c_edges: &[(usize, usize)],
    m1: &Matching,
) -> Result<[Vec<(usize, usize)>; 3]> {
    if c_edges.is_empty() {
        return Ok(Default::default());
    }
    let n = c_edges
        .iter()
        .chain(m1.edges())
        .map(|&(u, v)| u.max(v) + 1)
        .max()
        .unwrap();
    let comps = components_of(c_edges)?;

    // Deterministic retry variants: color preference, component order,
    // traversal direction.
    for variant in 0..8u8 {
        let mut comps_v = comps.clone();
        if variant & 1 != 0 {
            comps_v.reverse();
        }
        if variant & 2 != 0 {
            for comp in &mut comps_v {
                comp.vertices.reverse();
                if comp.is_cycle {
                    comp.vertices.rotate_right(1);
                }
            }
        }
        let first_color = if variant & 4 != 0 { COLOR1 } else { COLOR0 };

        let mut uf = [RollbackUnionFind::new(n), RollbackUnionFind::new(n)];
        for &(u, v) in m1.edges() {
            uf[0].union(u, v);
            uf[1].union(u, v);
        }
        let mut labels: Vec<Vec<u8>> = comps_v
            .iter()
            .map(|c| vec![u8::MAX; c.edge_count()])
            .collect();
        let mut ctx = SearchCtx {
            nodes: 0,
            budget: 4_000_000,
        };
        if dfs_component(&comps_v, 0, 0, first_color, &mut uf, &mut labels, &mut ctx) {
            let mut out: [Vec<(usize, usize)>; 3] = Default::default();
            for (comp, labs) in comps_v.iter().zip(&labels) {
                for (i, &lab) in labs.iter().enumerate() {
                    out[lab as usize].push(comp.edge(i));
                }
            }
            return Ok(out);
        }
    }
    Err(Error::Internal(
        "no valid edge labeling found for the 2-matching split; this contradicts \
         the existence guarantee"
            .into(),
    ))
}

/// Depth-first labeling over components in order, edges in traversal
/// order. Tries the alternating color first, then the other color, then
/// the leftover pool.
#[allow(clippy::too_many_arguments)]
fn dfs_component(
    comps: &[Component],
    ci: usize,
    ei: usize,
    pref: u8,
    uf: &mut [RollbackUnionFind; 2],
    labels: &mut Vec<Vec<u8>>,
    ctx: &mut SearchCtx,
) -> bool {
    if ci == comps.len() {
        return true;
    }
    let comp = &comps[ci];
    if ei == comp.edge_count() {
        return dfs_component(comps, ci + 1, 0, pref, uf, labels, ctx);
    }
    if ctx.nodes >= ctx.budget {
        return false;
    }
    ctx.nodes += 1;

    let k = comp.edge_count();
    let (u, v) = comp.edge(ei);
    let prev = if ei > 0 { labels[ci][ei - 1] } else { u8::MAX };
    // Wrap adjacency: in a cycle, the last edge also touches the first.
    let wrap = if comp.is_cycle && ei == k - 1 {
        labels[ci][0]
    } else {
        u8::MAX
    };
    let is_path_end = !comp.is_cycle && (ei == 0 || ei == k - 1);

    let other = pref ^ 1;
    for lab in [pref, other, LEFTOVER] {
        if lab == LEFTOVER {
            if is_path_end || prev == LEFTOVER || wrap == LEFTOVER {
                continue;
            }
            labels[ci][ei] = LEFTOVER;
            // Alternation restarts after a leftover edge; keep the same
            // preferred color.
            if dfs_component(comps, ci, ei + 1, pref, uf, labels, ctx) {
                return true;
            }
            labels[ci][ei] = u8::MAX;
        } else {
            if prev == lab || wrap == lab {
                continue;
            }
            let c = lab as usize;
            if uf[c].connected(u, v) {
                continue;
            }
            let mark = uf[c].mark();
            uf[c].union(u, v);
            labels[ci][ei] = lab;
            // Prefer continuing the alternation from this color.
            if dfs_component(comps, ci, ei + 1, lab ^ 1, uf, labels, ctx) {
                return true;
            }
            labels[ci][ei] = u8::MAX;
            uf[c].rollback_to(mark);
        }
        if ctx.nodes >= ctx.budget {
            return false;
        }
    }
    false
}

/// Splits the leftover matching into X2 (kept) and X3 (marked): in each
/// cycle of the union with the base matching, the minimum-weight leftover
/// edge (ties by edge order) is marked. Removing the marked edges breaks
/// every cycle, and a single marked edge per cycle cannot re-form one, so
/// both unions are acyclic.
pub(crate) fn mark_pool(
    pool: &[(usize, usize)],
    m1: &Matching,
    g: &WeightedGraph,
) -> (Vec<(usize, usize)>, Vec<(usize, usize)>) {
    let cycles = pool_cycles(pool, m1);
    let mut marked = std::collections::HashSet::new();
    for cycle_pool_edges in cycles {
        let &best = cycle_pool_edges
            .iter()
            .min_by_key(|&&(u, v)| (g.weight(u, v), (u, v)))
            .expect("cycle has pool edges");
        marked.insert(best);
    }
    let mut x2 = Vec::new();
    let mut x3 = Vec::new();
    for &e in pool {
        if marked.contains(&e) {
            x3.push(e);
        } else {
            x2.push(e);
        }
    }
    (x2, x3)
}

/// The cycles of `m1 ∪ pool`, each reported as its pool edges. Both inputs
/// are matchings, so the union has max degree 2 and its cycles alternate.
pub(crate) fn pool_cycles(
    pool: &[(usize, usize)],
    m1: &Matching,
) -> Vec<Vec<(usize, usize)>> {
    let n = pool
        .iter()
        .chain(m1.edges())
        .map(|&(u, v)| u.max(v) + 1)
        .max()
        .unwrap_or(0);
    if n == 0 {
        return Vec::new();
    }
    let mut uf = UnionFind::new(n);
    let mut cyclic_roots = std::collections::HashSet::new();
    for &(u, v) in m1.edges().iter().chain(pool) {
        if !uf.union(u, v) {
            cyclic_roots.insert(uf.find(u));
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<(usize, usize)>> =
        std::collections::BTreeMap::new();
    for &(u, v) in pool {
        let root = uf.find(u);
        if cyclic_roots.contains(&root) {
            groups.entry(root).or_default().push((u, v));
        }
    }
    groups.into_values().collect()
}
