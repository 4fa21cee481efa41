//! Maximum-weight Hamiltonian path: exact bitmask dynamic programming at
//! desk scale, and a 3/4-approximation built from an exact 2-matching and
//! an exact matching beyond it.

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::matching::{max_weight_bmatching, max_weight_matching};
use crate::solver::stack_edge_paths;
use crate::unionfind::UnionFind;

/// Default vertex cap for the exact solver.
pub const EXACT_CAP: usize = 16;

/// An exact rational, used for solver quality factors and ratio accounting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct Ratio {
    pub num: i64,
    pub den: i64,
}

impl Ratio {
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den > 0, "denominator must be positive");
        let g = gcd(num.unsigned_abs(), den.unsigned_abs()) as i64;
        Self {
            num: num / g,
            den: den / g,
        }
    }

    pub const ONE: Ratio = Ratio { num: 1, den: 1 };

    pub fn as_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a.max(1)
    } else {
        gcd(b, a % b)
    }
}

/// A Hamiltonian path together with its weight and the quality factor of
/// the solver that produced it: the weight is guaranteed to be at least
/// `quality` times the optimum.
#[derive(Debug, Clone)]
pub struct HamPathResult {
    pub path: Vec<usize>,
    pub weight: i64,
    pub quality: Ratio,
}

impl HamPathResult {
    fn from_path(g: &WeightedGraph, path: Vec<usize>, quality: Ratio) -> Self {
        let weight = path_weight(g, &path);
        Self {
            path,
            weight,
            quality,
        }
    }
}

/// Recomputes the weight of a vertex sequence.
pub fn path_weight(g: &WeightedGraph, path: &[usize]) -> i64 {
    path.windows(2).map(|w| g.weight(w[0], w[1])).sum()
}

/// Checks that `path` visits every vertex of `g` exactly once.
pub fn is_valid_path(g: &WeightedGraph, path: &[usize]) -> bool {
    let n = g.vertex_count();
    if path.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    for &v in path {
        if v >= n || seen[v] {
            return false;
        }
        seen[v] = true;
    }
    true
}

/// Maximum-weight Hamiltonian path by dynamic programming over vertex
/// subsets, with the default vertex cap.
pub fn ham_path_exact(g: &WeightedGraph) -> Result<HamPathResult> {
    ham_path_exact_capped(g, EXACT_CAP)
}

/// Same as [`ham_path_exact`] with an explicit cap.
pub fn ham_path_exact_capped(g: &WeightedGraph, cap: usize) -> Result<HamPathResult> {
    let n = g.vertex_count();
    if n > cap {
        return Err(Error::Capacity(format!(
            "exact path solver capped at {cap} vertices, got {n}; use the heuristic"
        )));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("empty graph".into()));
    }
    if n == 1 {
        return Ok(HamPathResult::from_path(g, vec![0], Ratio::ONE));
    }
    let full: usize = (1 << n) - 1;
    // dp[mask * n + last]: best weight of a path visiting exactly `mask`,
    // ending at `last`.
    let mut dp = vec![i64::MIN; (full + 1) * n];
    let mut parent = vec![usize::MAX; (full + 1) * n];
    for v in 0..n {
        dp[(1 << v) * n + v] = 0;
    }
    for mask in 1..=full {
        for last in 0..n {
            let cur = dp[mask * n + last];
            if cur == i64::MIN || mask & (1 << last) == 0 {
                continue;
            }
            for next in 0..n {
                if mask & (1 << next) != 0 {
                    continue;
                }
                let nmask = mask | (1 << next);
                let cand = cur + g.weight(last, next);
                if cand > dp[nmask * n + next] {
                    dp[nmask * n + next] = cand;
                    parent[nmask * n + next] = last;
                }
            }
        }
    }
    let mut best_last = 0;
    for last in 1..n {
        if dp[full * n + last] > dp[full * n + best_last] {
            best_last = last;
        }
    }
    let mut path = Vec::with_capacity(n);
    let mut mask = full;
    let mut cur = best_last;
    loop {
        path.push(cur);
        let prev = parent[mask * n + cur];
        if prev == usize::MAX {
            break;
        }
        mask &= !(1 << cur);
        cur = prev;
    }
    path.reverse();
    debug_assert!(is_valid_path(g, &path));
    Ok(HamPathResult::from_path(g, path, Ratio::ONE))
}

/// 3/4-approximate maximum-weight Hamiltonian path.
///
/// Computes an exact maximum-weight 2-matching (a relaxation of the optimal
/// path) and an exact maximum-weight matching (worth at least half the
/// optimal path). Each cycle of the 2-matching donates one edge to the
/// matching side: the cycle's vertices all have degree at most 1 on the
/// matching side, so if every cycle edge closed a cycle over there, all of
/// them would be endpoints of one matching-side path, which has only two
/// endpoints. The donation therefore always succeeds and no weight is
/// lost. Both sides end up collections of paths; the heavier one,
/// concatenated into a full path, weighs at least `(w2 + w1)/2`, which is
/// at least 3/4 of the optimal path weight.
pub fn ham_path_heuristic(g: &WeightedGraph) -> Result<HamPathResult> {
    let n = g.vertex_count();
    let quality = Ratio::new(3, 4);
    if n == 0 {
        return Err(Error::InvalidArgument("empty graph".into()));
    }
    if n <= 3 {
        // Tiny graphs are solved exactly; the declared quality stays the
        // heuristic's.
        let exact = ham_path_exact_capped(g, 3)?;
        return Ok(HamPathResult::from_path(g, exact.path, quality));
    }

    let two_matching = max_weight_bmatching(g, 2)?;
    let matching = max_weight_matching(g)?;

    let mut matching_side: Vec<(usize, usize)> = matching.edges().to_vec();
    let mut uf = UnionFind::new(n);
    for &(u, v) in &matching_side {
        uf.union(u, v);
    }

    // Walk the 2-matching's components; cycles donate one edge.
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (id, &(u, v)) in two_matching.edges().iter().enumerate() {
        adj[u].push(id);
        adj[v].push(id);
    }
    let edges = two_matching.edges();
    let mut cycle_side: Vec<(usize, usize)> = Vec::new();
    let mut visited = vec![false; edges.len()];
    for start in 0..n {
        // Start at path endpoints first so each path is walked end to end.
        if adj[start].len() != 1 || adj[start].iter().all(|&id| visited[id]) {
            continue;
        }
        let mut cur = start;
        loop {
            let Some(&id) = adj[cur].iter().find(|&&id| !visited[id]) else {
                break;
            };
            visited[id] = true;
            cycle_side.push(edges[id]);
            let (u, v) = edges[id];
            cur = if u == cur { v } else { u };
        }
    }
    for start in 0..n {
        // Remaining unvisited components are cycles.
        if adj[start].is_empty() || adj[start].iter().all(|&id| visited[id]) {
            continue;
        }
        let mut comp_edges = Vec::new();
        let mut cur = start;
        loop {
            let Some(&id) = adj[cur].iter().find(|&&id| !visited[id]) else {
                break;
            };
            visited[id] = true;
            comp_edges.push(id);
            let (u, v) = edges[id];
            cur = if u == cur { v } else { u };
        }
        // Donate the heaviest edge joining two matching-side components.
        let mut order = comp_edges.clone();
        order.sort_by_key(|&id| (-g.weight(edges[id].0, edges[id].1), id));
        let donated = order.iter().copied().find(|&id| {
            let (u, v) = edges[id];
            !uf.connected(u, v)
        });
        let id = donated.ok_or_else(|| {
            Error::Internal("cycle with no donatable edge; matching side corrupt".into())
        })?;
        let (u, v) = edges[id];
        uf.union(u, v);
        matching_side.push((u, v));
        for &other in &comp_edges {
            if other != id {
                cycle_side.push(edges[other]);
            }
        }
    }

    let w_cycle: i64 = cycle_side.iter().map(|&(u, v)| g.weight(u, v)).sum();
    let w_match: i64 = matching_side.iter().map(|&(u, v)| g.weight(u, v)).sum();
    let chosen = if w_cycle >= w_match {
        &cycle_side
    } else {
        &matching_side
    };
    let path = stack_edge_paths(n, chosen)?;
    debug_assert!(is_valid_path(g, &path));
    Ok(HamPathResult::from_path(g, path, quality))
}

/// Solver selection for the path stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum HamMode {
    Exact,
    Heuristic,
    #[default]
    Auto,
}

impl std::str::FromStr for HamMode {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "exact" => Ok(HamMode::Exact),
            "heuristic" => Ok(HamMode::Heuristic),
            "auto" => Ok(HamMode::Auto),
            other => Err(format!("unknown path mode {other:?}")),
        }
    }
}

impl std::fmt::Display for HamMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            HamMode::Exact => "exact",
            HamMode::Heuristic => "heuristic",
            HamMode::Auto => "auto",
        };
        f.write_str(s)
    }
}

/// Runs the configured path solver: `Auto` uses the exact solver up to its
/// cap and the heuristic beyond.
pub fn ham_path(g: &WeightedGraph, mode: HamMode) -> Result<HamPathResult> {
    match mode {
        HamMode::Exact => ham_path_exact(g),
        HamMode::Heuristic => ham_path_heuristic(g),
        HamMode::Auto => {
            if g.vertex_count() <= EXACT_CAP {
                ham_path_exact(g)
            } else {
                ham_path_heuristic(g)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn random_graph(n: usize, rng: &mut StdRng, max_w: i64) -> WeightedGraph {
        let mut g = WeightedGraph::zero(n);
        for i in 0..n {
            for j in (i + 1)..n {
                g.set_weight(i, j, rng.random_range(0..=max_w));
            }
        }
        g
    }

    /// Factorial enumeration reference; a path and its reversal have the
    /// same weight, so only canonical orientations are scored.
    fn brute_force_best_path(g: &WeightedGraph) -> i64 {
        let n = g.vertex_count();
        let mut order: Vec<usize> = (0..n).collect();
        let mut best = i64::MIN;
        permute(&mut order, 0, g, &mut best);
        best
    }

    fn permute(order: &mut Vec<usize>, k: usize, g: &WeightedGraph, best: &mut i64) {
        if k == order.len() {
            if order[0] <= order[order.len() - 1] {
                *best = (*best).max(path_weight(g, order));
            }
            return;
        }
        for i in k..order.len() {
            order.swap(k, i);
            permute(order, k + 1, g, best);
            order.swap(k, i);
        }
    }

    #[test]
    fn exact_two_vertices() {
        let mut g = WeightedGraph::zero(2);
        g.set_weight(0, 1, 9);
        let r = ham_path_exact(&g).unwrap();
        assert_eq!(r.weight, 9);
        assert_eq!(r.quality, Ratio::ONE);
    }

    #[test]
    fn exact_uniform_weights() {
        let mut g = WeightedGraph::zero(5);
        for i in 0..5 {
            for j in (i + 1)..5 {
                g.set_weight(i, j, 3);
            }
        }
        let r = ham_path_exact(&g).unwrap();
        assert_eq!(r.weight, 4 * 3);
    }

    #[test]
    fn exact_matches_factorial_enumeration() {
        let mut rng = StdRng::seed_from_u64(17);
        for _ in 0..30 {
            let g = random_graph(8, &mut rng, 12);
            let r = ham_path_exact(&g).unwrap();
            assert!(is_valid_path(&g, &r.path));
            assert_eq!(r.weight, path_weight(&g, &r.path));
            assert_eq!(r.weight, brute_force_best_path(&g));
        }
    }

    #[test]
    fn exact_cap_is_enforced() {
        let g = WeightedGraph::zero(EXACT_CAP + 1);
        assert!(matches!(ham_path_exact(&g), Err(Error::Capacity(_))));
    }

    #[test]
    fn heuristic_two_vertices_and_validity() {
        let mut g = WeightedGraph::zero(2);
        g.set_weight(0, 1, 4);
        let r = ham_path_heuristic(&g).unwrap();
        assert_eq!(r.weight, 4);

        let mut rng = StdRng::seed_from_u64(3);
        for _ in 0..40 {
            let n = rng.random_range(2..=12);
            let g = random_graph(n, &mut rng, 9);
            let r = ham_path_heuristic(&g).unwrap();
            assert!(is_valid_path(&g, &r.path));
            assert_eq!(r.weight, path_weight(&g, &r.path));
        }
    }

    #[test]
    fn heuristic_at_least_matching_weight() {
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..30 {
            let n = 2 * rng.random_range(2..=5);
            let g = random_graph(n, &mut rng, 20);
            let m = max_weight_matching(&g).unwrap();
            let r = ham_path_heuristic(&g).unwrap();
            assert!(
                r.weight >= m.weight(&g),
                "path {} < matching {}",
                r.weight,
                m.weight(&g)
            );
        }
    }

    #[test]
    fn heuristic_meets_declared_quality_against_exact() {
        let mut rng = StdRng::seed_from_u64(23);
        for trial in 0..60 {
            let n = rng.random_range(2..=10);
            let g = random_graph(n, &mut rng, 10);
            let exact = ham_path_exact(&g).unwrap();
            let heur = ham_path_heuristic(&g).unwrap();
            assert!(heur.weight <= exact.weight, "trial {trial}");
            // weight >= quality * optimum, checked in integers.
            assert!(
                heur.weight * heur.quality.den >= exact.weight * heur.quality.num,
                "trial {trial}: {} < 3/4 * {}",
                heur.weight,
                exact.weight
            );
        }
    }

    #[test]
    fn ratio_reduces() {
        let r = Ratio::new(6, 8);
        assert_eq!((r.num, r.den), (3, 4));
        assert_eq!(Ratio::new(0, 5).num, 0);
    }
}
