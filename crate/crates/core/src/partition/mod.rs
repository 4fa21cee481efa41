//! Partition schemes that split 2-matchings into candidate matchings whose
//! union with a base matching is guaranteed acyclic.
//!
//! Three operations are provided:
//!
//! - [`partition_into_four`]: any 2-matching edge-disjoint from the base
//!   matching splits into four matchings `X0..X3`, each with an acyclic
//!   union; `X0 ∪ X1` covers every vertex of the input and `X2 ∪ X3` is a
//!   matching.
//! - [`partition_pair_with_property_p`]: two edge-disjoint 2-matchings are
//!   split jointly into `X0..X3` and `Y0..Y3` and repaired until property
//!   (P) holds: the six certified unions are acyclic, `X2 ∪ X3` is a
//!   matching whose union with the base has no length-4 cycle, and the
//!   marked part satisfies `w(X3) <= w(X2)/2`. The best of the seven
//!   candidate parts then weighs at least 2/15 of the input weight.
//! - [`partition_acyclic_into_three`]: an acyclic 2-matching splits into
//!   three matchings `Y0..Y2` with acyclic unions, via joining the input
//!   paths into one path and a three-way selection rule along it.

mod pair;
mod split;
mod three;

pub use pair::{partition_pair_with_property_p, PropertyPCertificate};
pub use three::{join_into_single_path, partition_acyclic_into_three};

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::matching::{BMatching, Matching};
use crate::unionfind::UnionFind;

/// Labels for the parts of a [`PartitionResult`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum PartLabel {
    X0,
    X1,
    X2,
    X3,
    Y0,
    Y1,
    Y2,
    Y3,
}

impl std::fmt::Display for PartLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            PartLabel::X0 => "X0",
            PartLabel::X1 => "X1",
            PartLabel::X2 => "X2",
            PartLabel::X3 => "X3",
            PartLabel::Y0 => "Y0",
            PartLabel::Y1 => "Y1",
            PartLabel::Y2 => "Y2",
            PartLabel::Y3 => "Y3",
        };
        f.write_str(s)
    }
}

/// A labeled split of 2-matching edges into candidate matchings, certified
/// against the base matching.
#[derive(Debug, Clone)]
pub struct PartitionResult {
    labels: Vec<PartLabel>,
    parts: Vec<Vec<(usize, usize)>>,
    base: Matching,
}

impl PartitionResult {
    fn new(labels: Vec<PartLabel>, parts: Vec<Vec<(usize, usize)>>, base: &Matching) -> Self {
        debug_assert_eq!(labels.len(), parts.len());
        let mut parts = parts;
        for p in &mut parts {
            p.sort_unstable();
        }
        Self {
            labels,
            parts,
            base: base.clone(),
        }
    }

    pub fn labels(&self) -> &[PartLabel] {
        &self.labels
    }

    pub fn part(&self, label: PartLabel) -> &[(usize, usize)] {
        self.labels
            .iter()
            .position(|&l| l == label)
            .map(|i| self.parts[i].as_slice())
            .unwrap_or(&[])
    }

    pub fn parts(&self) -> impl Iterator<Item = (PartLabel, &[(usize, usize)])> {
        self.labels
            .iter()
            .copied()
            .zip(self.parts.iter().map(|p| p.as_slice()))
    }

    pub fn base(&self) -> &Matching {
        &self.base
    }

    /// The heaviest part under `g`, with ties broken by label order.
    pub fn best_part(&self, g: &WeightedGraph) -> (PartLabel, Vec<(usize, usize)>, i64) {
        let mut best = 0;
        let mut best_w = i64::MIN;
        for (i, p) in self.parts.iter().enumerate() {
            let w = g.edge_set_weight(p);
            if w > best_w {
                best_w = w;
                best = i;
            }
        }
        (self.labels[best], self.parts[best].clone(), best_w)
    }

    /// Total weight over all parts.
    pub fn total_weight(&self, g: &WeightedGraph) -> i64 {
        self.parts.iter().map(|p| g.edge_set_weight(p)).sum()
    }
}

/// True iff no two edges share a vertex.
pub fn is_matching(edges: &[(usize, usize)]) -> bool {
    let mut seen = std::collections::HashSet::new();
    for &(u, v) in edges {
        if u == v || !seen.insert(u) || !seen.insert(v) {
            return false;
        }
    }
    true
}

/// True iff the union of `base` and `part` has maximum degree at most 2
/// and no cycle. This is the independent certificate check used by every
/// test in this module; it looks only at the combined edge set.
pub fn union_is_acyclic_2matching(base: &[(usize, usize)], part: &[(usize, usize)]) -> bool {
    let n = base
        .iter()
        .chain(part)
        .map(|&(u, v)| u.max(v) + 1)
        .max()
        .unwrap_or(0);
    let mut deg = vec![0usize; n];
    let mut uf = UnionFind::new(n);
    for &(u, v) in base.iter().chain(part) {
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

/// Splits a 2-matching, edge-disjoint from the base matching `m1`, into
/// four matchings `X0..X3` such that the union of each with `m1` is an
/// acyclic 2-matching. `X0 ∪ X1` covers every vertex of `c`, so the
/// leftover `X2 ∪ X3` is a matching; `X3` holds one marked edge (minimum
/// weight under `g`, ties by order) per cycle of the leftover's union with
/// `m1`.
pub fn partition_into_four(
    c: &BMatching,
    m1: &Matching,
    g: &WeightedGraph,
) -> Result<PartitionResult> {
    check_edge_disjoint(c, m1)?;
    let [x0, x1, pool] = split::split_two_matching(c.edges(), m1)?;
    let (x2, x3) = split::mark_pool(&pool, m1, g);
    let result = PartitionResult::new(
        vec![PartLabel::X0, PartLabel::X1, PartLabel::X2, PartLabel::X3],
        vec![x0, x1, x2, x3],
        m1,
    );
    debug_assert!(verify_four(&result, c).is_ok());
    Ok(result)
}

/// Contract check shared by tests and debug assertions: parts are
/// matchings, disjoint, complete, all unions acyclic, `X0 ∪ X1` covers
/// every vertex of the input, and `X2 ∪ X3` is a matching.
pub fn verify_four(result: &PartitionResult, c: &BMatching) -> Result<()> {
    let base = result.base().edges().to_vec();
    let mut all: Vec<(usize, usize)> = Vec::new();
    for (label, part) in result.parts() {
        if !is_matching(part) {
            return Err(Error::InvariantViolation(format!("{label} is not a matching")));
        }
        if !union_is_acyclic_2matching(&base, part) {
            return Err(Error::InvariantViolation(format!(
                "union of base and {label} is not an acyclic 2-matching"
            )));
        }
        all.extend_from_slice(part);
    }
    let mut sorted = all.clone();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != all.len() {
        return Err(Error::InvariantViolation("parts overlap".into()));
    }
    if sorted != c.edges() {
        return Err(Error::InvariantViolation(
            "parts do not cover the input edge set".into(),
        ));
    }
    // Coverage: every vertex of c touches X0 or X1.
    let mut covered = std::collections::HashSet::new();
    for part in [result.part(PartLabel::X0), result.part(PartLabel::X1)] {
        for &(u, v) in part {
            covered.insert(u);
            covered.insert(v);
        }
    }
    for &(u, v) in c.edges() {
        if !covered.contains(&u) || !covered.contains(&v) {
            return Err(Error::InvariantViolation(format!(
                "vertex of edge ({u}, {v}) not covered by X0 or X1"
            )));
        }
    }
    let mut leftover: Vec<(usize, usize)> = result.part(PartLabel::X2).to_vec();
    leftover.extend_from_slice(result.part(PartLabel::X3));
    if !is_matching(&leftover) {
        return Err(Error::InvariantViolation("X2 and X3 jointly not a matching".into()));
    }
    Ok(())
}

fn check_edge_disjoint(c: &BMatching, m1: &Matching) -> Result<()> {
    for &(u, v) in c.edges() {
        if m1.contains(u, v) {
            return Err(Error::Precondition(format!(
                "edge ({u}, {v}) belongs to both the 2-matching and the base matching"
            )));
        }
    }
    Ok(())
}
