//! Exact matching solvers: maximum-weight matching, maximum-weight
//! b-matching by reduction to matching, and decomposition of a 4-matching
//! into two 2-matchings.

mod blossom;

pub use blossom::maximum_weight_matching;

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::unionfind::UnionFind;

/// A matching: vertex-disjoint edges, stored normalized (`u < v`) and
/// sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    edges: Vec<(usize, usize)>,
}

impl Matching {
    pub fn new(edges: Vec<(usize, usize)>) -> Result<Self> {
        let mut norm: Vec<(usize, usize)> = edges
            .into_iter()
            .map(|(u, v)| (u.min(v), u.max(v)))
            .collect();
        norm.sort_unstable();
        let mut seen = std::collections::HashSet::new();
        for &(u, v) in &norm {
            if u == v {
                return Err(Error::InvalidArgument(format!("self-loop at {u}")));
            }
            if !seen.insert(u) || !seen.insert(v) {
                return Err(Error::InvalidArgument(
                    "edges share a vertex; not a matching".into(),
                ));
            }
        }
        Ok(Self { edges: norm })
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn contains(&self, u: usize, v: usize) -> bool {
        let key = (u.min(v), u.max(v));
        self.edges.binary_search(&key).is_ok()
    }

    /// `mate[v] = Some(u)` for each matched pair, over vertices `0..n`.
    pub fn mate_array(&self, n: usize) -> Vec<Option<usize>> {
        let mut mate = vec![None; n];
        for &(u, v) in &self.edges {
            mate[u] = Some(v);
            mate[v] = Some(u);
        }
        mate
    }

    pub fn weight(&self, g: &WeightedGraph) -> i64 {
        self.edges.iter().map(|&(u, v)| g.weight(u, v)).sum()
    }
}

/// A degree-bounded simple subgraph: every vertex is incident to at most
/// `bound` edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BMatching {
    edges: Vec<(usize, usize)>,
    bound: usize,
}

impl BMatching {
    pub fn new(edges: Vec<(usize, usize)>, bound: usize) -> Result<Self> {
        if bound == 0 {
            return Err(Error::InvalidArgument("degree bound must be positive".into()));
        }
        let mut norm: Vec<(usize, usize)> = edges
            .into_iter()
            .map(|(u, v)| (u.min(v), u.max(v)))
            .collect();
        norm.sort_unstable();
        let mut degrees = std::collections::HashMap::new();
        let mut prev = None;
        for &(u, v) in &norm {
            if u == v {
                return Err(Error::InvalidArgument(format!("self-loop at {u}")));
            }
            if prev == Some((u, v)) {
                return Err(Error::InvalidArgument(format!("duplicate edge ({u}, {v})")));
            }
            prev = Some((u, v));
            for x in [u, v] {
                let d = degrees.entry(x).or_insert(0usize);
                *d += 1;
                if *d > bound {
                    return Err(Error::InvalidArgument(format!(
                        "vertex {x} exceeds degree bound {bound}"
                    )));
                }
            }
        }
        Ok(Self { edges: norm, bound })
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn contains(&self, u: usize, v: usize) -> bool {
        let key = (u.min(v), u.max(v));
        self.edges.binary_search(&key).is_ok()
    }

    pub fn weight(&self, g: &WeightedGraph) -> i64 {
        self.edges.iter().map(|&(u, v)| g.weight(u, v)).sum()
    }
}

/// Computes a maximum-weight matching of the complete weighted graph. When
/// the vertex count is even, the matching is extended to a perfect one by
/// pairing leftover vertices in index order; any edge between two leftover
/// vertices necessarily has weight zero, so the total weight is unchanged.
pub fn max_weight_matching(g: &WeightedGraph) -> Result<Matching> {
    let n = g.vertex_count();
    let edges = g.positive_edges();
    let mate = maximum_weight_matching(n, &edges);
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for v in 0..n {
        if let Some(u) = mate[v] {
            if v < u {
                pairs.push((v, u));
            }
        }
    }
    if n % 2 == 0 {
        let unmatched: Vec<usize> = (0..n).filter(|&v| mate[v].is_none()).collect();
        debug_assert!(unmatched
            .chunks(2)
            .all(|c| c.len() == 2 && g.weight(c[0], c[1]) == 0));
        for c in unmatched.chunks(2) {
            pairs.push((c[0], c[1]));
        }
    }
    Matching::new(pairs)
}

/// Computes an exact maximum-weight b-matching for `b` in {2, 4} by a
/// vertex-splitting reduction to maximum-weight matching.
///
/// Every vertex becomes `b` copies; every positive-weight edge `(u, v)`
/// with weight `w` becomes a two-vertex gadget `gu - gv` of weight `w`,
/// with weight-`w` spokes from `gu` to all copies of `u` and from `gv` to
/// all copies of `v`. An input edge is selected exactly when both its
/// gadget vertices are matched to vertex copies, which caps each vertex's
/// selection count at `b` and adds `w` over the always-available baseline.
pub fn max_weight_bmatching(g: &WeightedGraph, b: usize) -> Result<BMatching> {
    if b != 2 && b != 4 {
        return Err(Error::InvalidArgument(format!(
            "unsupported degree bound {b}; expected 2 or 4"
        )));
    }
    let n = g.vertex_count();
    if b >= n {
        return Err(Error::InvalidArgument(format!(
            "degree bound {b} must be smaller than the vertex count {n}"
        )));
    }
    let base_edges = g.positive_edges();
    let copy = |v: usize, t: usize| v * b + t;
    let gadget_u = |e: usize| n * b + 2 * e;
    let gadget_v = |e: usize| n * b + 2 * e + 1;
    let total = n * b + 2 * base_edges.len();
    let mut gadget_edges = Vec::with_capacity(base_edges.len() * (2 * b + 1));
    for (e, &(u, v, w)) in base_edges.iter().enumerate() {
        gadget_edges.push((gadget_u(e), gadget_v(e), w));
        for t in 0..b {
            gadget_edges.push((copy(u, t), gadget_u(e), w));
            gadget_edges.push((copy(v, t), gadget_v(e), w));
        }
    }
    let mate = maximum_weight_matching(total, &gadget_edges);
    let mut selected = Vec::new();
    for (e, &(u, v, _)) in base_edges.iter().enumerate() {
        let (gu, gv) = (gadget_u(e), gadget_v(e));
        let u_side = matches!(mate[gu], Some(m) if m != gv);
        let v_side = matches!(mate[gv], Some(m) if m != gu);
        if u_side && v_side {
            selected.push((u, v));
        }
    }
    BMatching::new(selected, b)
}

/// Splits a 4-matching into two edge-disjoint 2-matchings covering every
/// input edge exactly once.
///
/// Odd-degree vertices are paired with virtual edges to make all degrees
/// even, each component is walked as an Eulerian circuit and oriented along
/// it, and the resulting in/out bipartite graph (max degree 2) is 2-edge
/// colored by alternation; each color class has in- and out-degree at most
/// one per vertex, hence degree at most 2. Virtual edges are dropped at the
/// end.
pub fn decompose_4matching(c: &BMatching) -> Result<(BMatching, BMatching)> {
    let real_edges = c.edges();
    if real_edges.is_empty() {
        return Ok((BMatching::new(vec![], 2)?, BMatching::new(vec![], 2)?));
    }
    let n = real_edges.iter().map(|&(u, v)| u.max(v)).max().unwrap() + 1;
    let mut degree = vec![0usize; n];
    for &(u, v) in real_edges {
        degree[u] += 1;
        degree[v] += 1;
    }
    if let Some(bad) = degree.iter().position(|&d| d > 4) {
        return Err(Error::InvariantViolation(format!(
            "vertex {bad} has degree {} > 4",
            degree[bad]
        )));
    }

    // Multigraph: real edges then virtual pairing edges for odd vertices.
    let mut all_edges: Vec<(usize, usize)> = real_edges.to_vec();
    let odd: Vec<usize> = (0..n).filter(|&v| degree[v] % 2 == 1).collect();
    let virtual_start = all_edges.len();
    for pair in odd.chunks(2) {
        all_edges.push((pair[0], pair[1]));
    }
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n]; // (edge id, other end)
    for (id, &(u, v)) in all_edges.iter().enumerate() {
        adj[u].push((id, v));
        adj[v].push((id, u));
    }

    // Hierholzer walk per component; orient each edge along the circuit.
    let mut used = vec![false; all_edges.len()];
    let mut next_arc = vec![0usize; n];
    let mut oriented: Vec<(usize, usize)> = vec![(NONE_V, NONE_V); all_edges.len()];
    for start in 0..n {
        if adj[start].is_empty() {
            continue;
        }
        if adj[start].iter().all(|&(id, _)| used[id]) {
            continue;
        }
        let mut stack = vec![start];
        let mut circuit = Vec::new();
        while let Some(&v) = stack.last() {
            let mut advanced = false;
            while next_arc[v] < adj[v].len() {
                let (id, to) = adj[v][next_arc[v]];
                next_arc[v] += 1;
                if !used[id] {
                    used[id] = true;
                    oriented[id] = (v, to);
                    stack.push(to);
                    advanced = true;
                    break;
                }
            }
            if !advanced {
                circuit.push(stack.pop().unwrap());
            }
        }
    }

    // Bipartite alternation: node v has an out-copy (2v) and in-copy
    // (2v + 1); arc u -> v joins out(u) with in(v). Max degree 2, so the
    // components are paths and even cycles; alternate colors along each.
    let mut binadj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); 2 * n];
    for (id, &(u, v)) in oriented.iter().enumerate() {
        binadj[2 * u].push((id, 2 * v + 1));
        binadj[2 * v + 1].push((id, 2 * u));
    }
    let mut color = vec![u8::MAX; all_edges.len()];
    let visit_from = |node: usize,
                          binadj: &[Vec<(usize, usize)>],
                          color: &mut Vec<u8>| {
        // Walk the path/cycle starting at `node`, alternating colors.
        let mut cur = node;
        let mut c = 0u8;
        loop {
            let Some(&(id, to)) = binadj[cur].iter().find(|&&(id, _)| color[id] == u8::MAX)
            else {
                break;
            };
            color[id] = c;
            c ^= 1;
            cur = to;
        }
    };
    // Path endpoints first so alternation starts there, then leftover cycles.
    for node in 0..2 * n {
        if binadj[node].len() == 1 {
            visit_from(node, &binadj, &mut color);
        }
    }
    for node in 0..2 * n {
        visit_from(node, &binadj, &mut color);
    }

    let mut part0 = Vec::new();
    let mut part1 = Vec::new();
    for (id, &(u, v)) in all_edges.iter().enumerate().take(virtual_start) {
        match color[id] {
            0 => part0.push((u, v)),
            1 => part1.push((u, v)),
            _ => {
                return Err(Error::Internal(format!(
                    "edge ({u}, {v}) left uncolored by the Euler split"
                )))
            }
        }
    }
    let a = BMatching::new(part0, 2).map_err(|e| {
        Error::Internal(format!("Euler split produced an invalid 2-matching: {e}"))
    })?;
    let b2 = BMatching::new(part1, 2).map_err(|e| {
        Error::Internal(format!("Euler split produced an invalid 2-matching: {e}"))
    })?;
    Ok((a, b2))
}

const NONE_V: usize = usize::MAX;

/// True iff the edge set has maximum degree at most 2 and contains no
/// cycle (i.e. it is a vertex-disjoint collection of paths).
pub fn is_acyclic_2matching(edges: &[(usize, usize)]) -> bool {
    let Some(n) = edges.iter().map(|&(u, v)| u.max(v) + 1).max() else {
        return true;
    };
    let mut deg = vec![0usize; n];
    let mut uf = UnionFind::new(n);
    for &(u, v) in edges {
        deg[u] += 1;
        deg[v] += 1;
        if deg[u] > 2 || deg[v] > 2 {
            return false;
        }
        if !uf.union(u, v) {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete_graph(weights: &[(usize, usize, i64)]) -> WeightedGraph {
        let n = weights.iter().map(|&(_, j, _)| j + 1).max().unwrap_or(2);
        WeightedGraph::from_weights(n, weights).unwrap()
    }

    #[test]
    fn single_edge_and_zero_weights() {
        let g = complete_graph(&[(0, 1, 7)]);
        let m = max_weight_matching(&g).unwrap();
        assert_eq!(m.edges(), &[(0, 1)]);
        assert_eq!(m.weight(&g), 7);

        // All-zero K4: still extended to a perfect matching.
        let g = WeightedGraph::zero(4);
        let m = max_weight_matching(&g).unwrap();
        assert_eq!(m.len(), 2);
        assert_eq!(m.weight(&g), 0);
    }

    #[test]
    fn k4_example_against_enumerated_perfect_matchings() {
        // Brute force over the 3 perfect matchings of K4:
        // {(0,1),(2,3)} = 10, {(0,2),(1,3)} = 6, {(0,3),(1,2)} = 0.
        let g = complete_graph(&[(0, 1, 5), (2, 3, 5), (0, 2, 6)]);
        let m = max_weight_matching(&g).unwrap();
        assert_eq!(m.edges(), &[(0, 1), (2, 3)]);
        assert_eq!(m.weight(&g), 10);
    }

    #[test]
    fn perfect_extension_on_even_graphs() {
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..50 {
            let n = 2 * rng.random_range(1..=5);
            let mut g = WeightedGraph::zero(n);
            for i in 0..n {
                for j in (i + 1)..n {
                    g.set_weight(i, j, rng.random_range(0..10));
                }
            }
            let m = max_weight_matching(&g).unwrap();
            assert_eq!(m.len(), n / 2, "must be perfect for even n");
        }
    }

    #[test]
    fn bmatching_on_k5_all_ones_takes_every_edge() {
        let mut g = WeightedGraph::zero(5);
        for i in 0..5 {
            for j in (i + 1)..5 {
                g.set_weight(i, j, 1);
            }
        }
        let bm = max_weight_bmatching(&g, 4).unwrap();
        assert_eq!(bm.len(), 10);
        assert_eq!(bm.weight(&g), 10);
    }

    #[test]
    fn bmatching_b2_takes_whole_triangle() {
        let g = complete_graph(&[(0, 1, 3), (1, 2, 2), (0, 2, 1)]);
        let bm = max_weight_bmatching(&g, 2).unwrap();
        assert_eq!(bm.len(), 3);
        assert_eq!(bm.weight(&g), 6);
    }

    #[test]
    fn bmatching_rejects_unsupported_bounds() {
        let g = WeightedGraph::zero(6);
        assert!(max_weight_bmatching(&g, 3).is_err());
        let tiny = WeightedGraph::zero(3);
        assert!(max_weight_bmatching(&tiny, 4).is_err());
    }

    /// Exhaustive reference for b-matchings: try all edge subsets.
    fn brute_force_bmatching(g: &WeightedGraph, b: usize) -> i64 {
        let edges = g.positive_edges();
        let n = g.vertex_count();
        let mut best = 0;
        for mask in 0u32..(1 << edges.len()) {
            let mut deg = vec![0usize; n];
            let mut w = 0;
            let mut ok = true;
            for (idx, &(u, v, wt)) in edges.iter().enumerate() {
                if mask >> idx & 1 == 1 {
                    deg[u] += 1;
                    deg[v] += 1;
                    if deg[u] > b || deg[v] > b {
                        ok = false;
                        break;
                    }
                    w += wt;
                }
            }
            if ok {
                best = best.max(w);
            }
        }
        best
    }

    #[test]
    fn bmatching_matches_exhaustive_search() {
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        let mut rng = StdRng::seed_from_u64(99);
        for trial in 0..40 {
            let n = 6;
            let mut g = WeightedGraph::zero(n);
            for i in 0..n {
                for j in (i + 1)..n {
                    g.set_weight(i, j, rng.random_range(0..6));
                }
            }
            for b in [2, 4] {
                let bm = max_weight_bmatching(&g, b).unwrap();
                assert_eq!(
                    bm.weight(&g),
                    brute_force_bmatching(&g, b),
                    "trial {trial} b={b}"
                );
            }
        }
    }

    #[test]
    fn bmatching_weight_hierarchy() {
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        let mut rng = StdRng::seed_from_u64(5);
        for _ in 0..20 {
            let n = rng.random_range(5..=8);
            let mut g = WeightedGraph::zero(n);
            for i in 0..n {
                for j in (i + 1)..n {
                    g.set_weight(i, j, rng.random_range(0..8));
                }
            }
            let m1 = max_weight_matching(&g).unwrap().weight(&g);
            let b2 = max_weight_bmatching(&g, 2).unwrap().weight(&g);
            let b4 = max_weight_bmatching(&g, 4).unwrap().weight(&g);
            assert!(b4 >= b2 && b2 >= m1, "hierarchy violated: {b4} {b2} {m1}");
        }
    }

    fn check_decomposition(c: &BMatching) {
        let (a, b) = decompose_4matching(c).unwrap();
        let mut combined: Vec<(usize, usize)> = a.edges().to_vec();
        combined.extend_from_slice(b.edges());
        combined.sort_unstable();
        assert_eq!(combined, c.edges(), "parts must partition the input");
        for part in [&a, &b] {
            let mut deg = std::collections::HashMap::new();
            for &(u, v) in part.edges() {
                *deg.entry(u).or_insert(0) += 1;
                *deg.entry(v).or_insert(0) += 1;
            }
            assert!(deg.values().all(|&d| d <= 2));
        }
    }

    #[test]
    fn decompose_k5() {
        let mut edges = Vec::new();
        for i in 0..5 {
            for j in (i + 1)..5 {
                edges.push((i, j));
            }
        }
        check_decomposition(&BMatching::new(edges, 4).unwrap());
    }

    #[test]
    fn decompose_single_cycle_and_star() {
        check_decomposition(&BMatching::new(vec![(0, 1), (1, 2), (2, 3), (0, 3)], 4).unwrap());
        check_decomposition(&BMatching::new(vec![(0, 1), (0, 2), (0, 3), (0, 4)], 4).unwrap());
    }

    #[test]
    fn decompose_random_4matchings() {
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        let mut rng = StdRng::seed_from_u64(31);
        for _ in 0..100 {
            let n = rng.random_range(4..=12);
            let mut deg = vec![0usize; n];
            let mut edges = Vec::new();
            for i in 0..n {
                for j in (i + 1)..n {
                    if deg[i] < 4 && deg[j] < 4 && rng.random::<f64>() < 0.5 {
                        deg[i] += 1;
                        deg[j] += 1;
                        edges.push((i, j));
                    }
                }
            }
            check_decomposition(&BMatching::new(edges, 4).unwrap());
        }
    }

    #[test]
    fn acyclic_2matching_checks() {
        assert!(is_acyclic_2matching(&[(0, 1), (1, 2), (3, 4)]));
        assert!(!is_acyclic_2matching(&[(0, 1), (1, 2), (0, 2)]));
        assert!(!is_acyclic_2matching(&[(0, 1), (0, 2), (0, 3)]));
        assert!(is_acyclic_2matching(&[]));
    }
}
