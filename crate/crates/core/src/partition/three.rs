//! Three-way split of an acyclic 2-matching: the input paths are joined
//! into one path avoiding base-matching edges, then edges are dealt to
//! three parts in path order, moving a previously placed edge when both
//! free parts would close a cycle.

use super::{split, PartLabel, PartitionResult};
use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::matching::{BMatching, Matching};

/// Joins the components of the acyclic 2-matching `p` into a single path
/// over exactly the vertices of `p`, using no edge of `m1`. Components are
/// first concatenated naively; any `m1` edge that slipped in is then
/// removed by reconnecting one of its endpoints to a path endpoint, which
/// is always possible because `m1` is a matching.
pub fn join_into_single_path(p: &BMatching, m1: &Matching) -> Result<Vec<usize>> {
    for &(u, v) in p.edges() {
        if m1.contains(u, v) {
            return Err(Error::Precondition(format!(
                "edge ({u}, {v}) belongs to both the 2-matching and the base matching"
            )));
        }
    }
    let comps = split::components_of(p.edges())?;
    if comps.iter().any(|c| c.is_cycle) {
        return Err(Error::Precondition("input 2-matching contains a cycle".into()));
    }
    if comps.is_empty() {
        return Ok(Vec::new());
    }
    let mut path: Vec<usize> = Vec::new();
    for comp in &comps {
        path.extend_from_slice(&comp.vertices);
    }
    if path.len() == 2 {
        return Ok(path);
    }

    // Walk the path and replace base-matching edges. Removing edge (u, v)
    // splits the walk into s..u and v..t; at least one of (v, s), (u, t)
    // is not in m1, and reattaching there keeps one path and strictly
    // advances the scan.
    let mut i = 0;
    while i + 1 < path.len() {
        let (u, v) = (path[i], path[i + 1]);
        if !m1.contains(u, v) {
            i += 1;
            continue;
        }
        let s = path[0];
        let t = path[path.len() - 1];
        if !m1.contains(v, s) && v != s {
            // New path: u .. s, then v .. t.
            path[..=i].reverse();
            i += 1;
        } else if !m1.contains(u, t) && u != t {
            // New path: s .. u, then t .. v.
            path[i + 1..].reverse();
            i += 1;
        } else {
            return Err(Error::Internal(
                "cannot reroute around a base-matching edge; matching invariant broken".into(),
            ));
        }
    }
    debug_assert!(path.windows(2).all(|w| !m1.contains(w[0], w[1])));
    Ok(path)
}

/// Splits an acyclic 2-matching `p`, edge-disjoint from `m1`, into three
/// matchings `Y0..Y2` whose unions with `m1` are acyclic 2-matchings.
pub fn partition_acyclic_into_three(
    p: &BMatching,
    m1: &Matching,
    g: &WeightedGraph,
) -> Result<PartitionResult> {
    let _ = g;
    let path = join_into_single_path(p, m1)?;
    let labels = vec![PartLabel::Y0, PartLabel::Y1, PartLabel::Y2];
    if path.is_empty() {
        return Ok(PartitionResult::new(
            labels,
            vec![Vec::new(), Vec::new(), Vec::new()],
            m1,
        ));
    }

    let edge_count = path.len() - 1;
    let mut assigned: Vec<u8> = Vec::with_capacity(edge_count);
    let mut parts: [Vec<(usize, usize)>; 3] = Default::default();
    let norm = |a: usize, b: usize| (a.min(b), a.max(b));

    // Connectivity inside m1 ∪ part: both are matchings, so components are
    // paths; a simple walk suffices.
    let connected = |parts: &[Vec<(usize, usize)>; 3], k: usize, a: usize, b: usize| -> bool {
        let mut adj: std::collections::HashMap<usize, Vec<usize>> = std::collections::HashMap::new();
        for &(u, v) in m1.edges().iter().chain(parts[k].iter()) {
            adj.entry(u).or_default().push(v);
            adj.entry(v).or_default().push(u);
        }
        let mut stack = vec![a];
        let mut seen = std::collections::HashSet::from([a]);
        while let Some(x) = stack.pop() {
            if x == b {
                return true;
            }
            for &y in adj.get(&x).into_iter().flatten() {
                if seen.insert(y) {
                    stack.push(y);
                }
            }
        }
        false
    };

    for j in 0..edge_count {
        let (a, b) = (path[j], path[j + 1]);
        let e = norm(a, b);
        if j < 3 {
            // The first three edges go to distinct parts; a single edge
            // cannot close a cycle because the path avoids m1 edges.
            assigned.push(j as u8);
            parts[j].push(e);
            continue;
        }
        let prev = assigned[j - 1] as usize;
        let (cand1, cand2) = match prev {
            0 => (1, 2),
            1 => (0, 2),
            _ => (0, 1),
        };
        if !connected(&parts, cand1, a, b) {
            assigned.push(cand1 as u8);
            parts[cand1].push(e);
        } else if !connected(&parts, cand2, a, b) {
            assigned.push(cand2 as u8);
            parts[cand2].push(e);
        } else {
            // Both free parts close a cycle. Move the previous edge to the
            // part not holding the edge before it, then reuse its part.
            let before = assigned[j - 2] as usize;
            let dest = if before == cand1 { cand2 } else { cand1 };
            let prev_edge = norm(path[j - 1], path[j]);
            let pos = parts[prev]
                .iter()
                .position(|&x| x == prev_edge)
                .expect("previous edge present");
            parts[prev].swap_remove(pos);
            parts[dest].push(prev_edge);
            assigned[j - 1] = dest as u8;
            if connected(&parts, prev, a, b) {
                return Err(Error::Internal(format!(
                    "three-way selection failed at edge {j}; both free parts and the \
                     vacated part close a cycle"
                )));
            }
            assigned.push(prev as u8);
            parts[prev].push(e);
        }
    }

    // Drop the joining edges: only the input's own edges are returned.
    let input: std::collections::HashSet<(usize, usize)> = p.edges().iter().copied().collect();
    let parts: Vec<Vec<(usize, usize)>> = parts
        .into_iter()
        .map(|part| part.into_iter().filter(|e| input.contains(e)).collect())
        .collect();
    let result = PartitionResult::new(labels, parts, m1);
    debug_assert!(verify_three(&result, p).is_ok());
    Ok(result)
}

/// Contract check: parts are matchings, disjoint, complete, unions
/// acyclic.
pub fn verify_three(result: &PartitionResult, p: &BMatching) -> Result<()> {
    let base = result.base().edges().to_vec();
    let mut all: Vec<(usize, usize)> = Vec::new();
    for (label, part) in result.parts() {
        if !super::is_matching(part) {
            return Err(Error::InvariantViolation(format!("{label} is not a matching")));
        }
        if !super::union_is_acyclic_2matching(&base, part) {
            return Err(Error::InvariantViolation(format!(
                "union of base and {label} is not an acyclic 2-matching"
            )));
        }
        all.extend_from_slice(part);
    }
    let mut sorted = all.clone();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != all.len() || sorted != p.edges() {
        return Err(Error::InvariantViolation(
            "parts do not partition the input edge set".into(),
        ));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::{is_matching, union_is_acyclic_2matching};
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn bm(edges: &[(usize, usize)]) -> BMatching {
        BMatching::new(edges.to_vec(), 2).unwrap()
    }

    #[test]
    fn four_vertex_path_needs_three_parts() {
        // Path v0-v1-v2-v3 with base matching {(v0,v2),(v1,v3)}.
        let p = bm(&[(0, 1), (1, 2), (2, 3)]);
        let m1 = Matching::new(vec![(0, 2), (1, 3)]).unwrap();
        let g = WeightedGraph::zero(4);
        let result = partition_acyclic_into_three(&p, &m1, &g).unwrap();
        verify_three(&result, &p).unwrap();

        // Regression: no valid split into two parts exists.
        let base = m1.edges().to_vec();
        let edges = p.edges();
        let mut found = false;
        for assignment in 0..2usize.pow(3) {
            let mut parts: [Vec<(usize, usize)>; 2] = Default::default();
            for (idx, &e) in edges.iter().enumerate() {
                parts[(assignment >> idx) & 1].push(e);
            }
            if parts
                .iter()
                .all(|p| is_matching(p) && union_is_acyclic_2matching(&base, p))
            {
                found = true;
            }
        }
        assert!(!found, "a 2-part split should be impossible here");
    }

    #[test]
    fn single_edge_lands_in_y0() {
        let p = bm(&[(4, 5)]);
        let m1 = Matching::new(vec![(0, 1)]).unwrap();
        let g = WeightedGraph::zero(6);
        let result = partition_acyclic_into_three(&p, &m1, &g).unwrap();
        assert_eq!(result.part(PartLabel::Y0), &[(4, 5)]);
        assert!(result.part(PartLabel::Y1).is_empty());
        assert!(result.part(PartLabel::Y2).is_empty());
    }

    #[test]
    fn empty_input_gives_empty_parts() {
        let p = bm(&[]);
        let m1 = Matching::new(vec![(0, 1)]).unwrap();
        let g = WeightedGraph::zero(2);
        let result = partition_acyclic_into_three(&p, &m1, &g).unwrap();
        assert!(result.parts().all(|(_, part)| part.is_empty()));
    }

    #[test]
    fn cyclic_input_is_rejected() {
        let p = bm(&[(0, 1), (1, 2), (0, 2)]);
        let m1 = Matching::new(vec![(3, 4)]).unwrap();
        let g = WeightedGraph::zero(5);
        assert!(matches!(
            partition_acyclic_into_three(&p, &m1, &g),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn joined_path_spans_input_vertices_and_avoids_base_edges() {
        let mut rng = StdRng::seed_from_u64(77);
        for _ in 0..300 {
            let n = rng.random_range(4..=12);
            let (p, m1) = random_acyclic_inputs(n, &mut rng);
            if p.is_empty() {
                continue;
            }
            let path = join_into_single_path(&p, &m1).unwrap();
            let mut expect: Vec<usize> = p
                .edges()
                .iter()
                .flat_map(|&(u, v)| [u, v])
                .collect();
            expect.sort_unstable();
            expect.dedup();
            let mut got = path.clone();
            got.sort_unstable();
            assert_eq!(got, expect, "path must span exactly the input vertices");
            assert!(path.windows(2).all(|w| !m1.contains(w[0], w[1])));
        }
    }

    #[test]
    fn random_paths_satisfy_the_contract() {
        let mut rng = StdRng::seed_from_u64(4242);
        for trial in 0..400 {
            let n = rng.random_range(4..=12);
            let (p, m1) = random_acyclic_inputs(n, &mut rng);
            let g = crate::partition::tests::random_weights(n, &mut rng);
            let result = partition_acyclic_into_three(&p, &m1, &g).unwrap();
            verify_three(&result, &p).unwrap_or_else(|e| panic!("trial {trial}: {e}"));
            // Split bound: the best part carries at least a third.
            let total = result.total_weight(&g);
            let (_, _, best) = result.best_part(&g);
            assert!(3 * best >= total, "trial {trial}: 3*{best} < {total}");
        }
    }

    /// Hamiltonian-ish random paths plus a random edge-disjoint matching.
    fn random_acyclic_inputs(n: usize, rng: &mut StdRng) -> (BMatching, Matching) {
        let mut order: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            order.swap(i, rng.random_range(0..=i));
        }
        let mut p_edges = Vec::new();
        for w in order.windows(2) {
            if rng.random::<f64>() < 0.8 {
                p_edges.push((w[0].min(w[1]), w[0].max(w[1])));
            }
        }
        let used: std::collections::HashSet<(usize, usize)> = p_edges.iter().copied().collect();
        let mut taken = vec![false; n];
        let mut m_edges = Vec::new();
        for i in (1..n).rev() {
            order.swap(i, rng.random_range(0..=i));
        }
        for pair in order.chunks(2) {
            if pair.len() == 2 {
                let key = (pair[0].min(pair[1]), pair[0].max(pair[1]));
                if !used.contains(&key) && !taken[pair[0]] && !taken[pair[1]] {
                    taken[pair[0]] = true;
                    taken[pair[1]] = true;
                    m_edges.push(key);
                }
            }
        }
        (
            BMatching::new(p_edges, 2).unwrap(),
            Matching::new(m_edges).unwrap(),
        )
    }
}
