//! The complete weighted graph over rows, bandpass extraction for a
//! matching, and the residual instance left after consuming those
//! bandpasses.

use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::matching::Matching;

/// Complete graph on `n` vertices with a dense symmetric weight matrix and
/// zero diagonal. Weights are bandpass counts, hence non-negative integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedGraph {
    n: usize,
    w: Vec<i64>,
}

impl WeightedGraph {
    /// A graph with all weights zero.
    pub fn zero(n: usize) -> Self {
        Self { n, w: vec![0; n * n] }
    }

    /// Builds a graph from an explicit symmetric weight assignment.
    pub fn from_weights(n: usize, weights: &[(usize, usize, i64)]) -> Result<Self> {
        let mut g = Self::zero(n);
        for &(i, j, wt) in weights {
            if i == j || i >= n || j >= n {
                return Err(Error::InvalidArgument(format!(
                    "bad edge ({i}, {j}) for {n} vertices"
                )));
            }
            if wt < 0 {
                return Err(Error::InvalidArgument(format!(
                    "negative weight {wt} on edge ({i}, {j})"
                )));
            }
            g.set_weight(i, j, wt);
        }
        Ok(g)
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn weight(&self, i: usize, j: usize) -> i64 {
        self.w[i * self.n + j]
    }

    pub fn set_weight(&mut self, i: usize, j: usize, wt: i64) {
        debug_assert_ne!(i, j);
        self.w[i * self.n + j] = wt;
        self.w[j * self.n + i] = wt;
    }

    /// All edges with strictly positive weight, `(i, j, w)` with `i < j`,
    /// in lexicographic order.
    pub fn positive_edges(&self) -> Vec<(usize, usize, i64)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                let wt = self.weight(i, j);
                if wt > 0 {
                    out.push((i, j, wt));
                }
            }
        }
        out
    }

    /// Sum of weights over a set of vertex pairs.
    pub fn edge_set_weight(&self, edges: &[(usize, usize)]) -> i64 {
        edges.iter().map(|&(i, j)| self.weight(i, j)).sum()
    }

    /// Dumps the weight matrix as whitespace-separated integers, one row
    /// per line.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for i in 0..self.n {
            for j in 0..self.n {
                if j > 0 {
                    out.push(' ');
                }
                out.push_str(&self.weight(i, j).to_string());
            }
            out.push('\n');
        }
        out
    }
}

/// A set of `(row i, row j, column)` triples, each marking a vertical
/// 1-pair consumed as a bandpass. Triples are normalized to `i < j`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BandpassSet {
    items: Vec<(usize, usize, usize)>,
}

impl BandpassSet {
    pub fn items(&self) -> &[(usize, usize, usize)] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }
}

/// Maximum number of bandpasses formable between rows `i` and `j`: the
/// number of columns where both rows carry a 1. With bandpass number 2 each
/// shared-1 column yields exactly one bandpass, so no combinatorial choice
/// exists.
pub fn static_weight(inst: &Instance, i: usize, j: usize) -> Result<i64> {
    if i == j {
        return Err(Error::InvalidArgument(format!(
            "static weight needs two distinct rows, got {i} twice"
        )));
    }
    if i >= inst.rows() || j >= inst.rows() {
        return Err(Error::InvalidArgument(format!(
            "row index out of range: ({i}, {j}) for {} rows",
            inst.rows()
        )));
    }
    let (a, b) = (inst.row(i), inst.row(j));
    Ok(a.iter().zip(b).filter(|&(&x, &y)| x == 1 && y == 1).count() as i64)
}

/// Builds the complete graph whose vertices are the instance rows and whose
/// edge weights are the pairwise static weights.
pub fn build_graph(inst: &Instance) -> WeightedGraph {
    let n = inst.rows();
    let mut g = WeightedGraph::zero(n);
    for i in 0..n {
        for j in (i + 1)..n {
            let w = static_weight(inst, i, j).expect("distinct in-range rows");
            if w != 0 {
                g.set_weight(i, j, w);
            }
        }
    }
    g
}

/// Enumerates the bandpasses of a matching: one triple per matched pair and
/// shared-1 column. The triple count equals the matching weight under
/// [`build_graph`].
pub fn matching_bandpasses(inst: &Instance, matching: &Matching) -> Result<BandpassSet> {
    let mut items = Vec::new();
    for &(i, j) in matching.edges() {
        if i >= inst.rows() || j >= inst.rows() {
            return Err(Error::InvalidArgument(format!(
                "matching edge ({i}, {j}) out of range for {} rows",
                inst.rows()
            )));
        }
        for c in 0..inst.cols() {
            if inst.get(i, c) == 1 && inst.get(j, c) == 1 {
                items.push((i, j, c));
            }
        }
    }
    items.sort_unstable();
    Ok(BandpassSet { items })
}

/// Zeroes both cells of every consumed bandpass, producing the residual
/// instance. The residual graph is then just [`build_graph`] of the result.
pub fn residual_instance(inst: &Instance, consumed: &BandpassSet) -> Result<Instance> {
    let n = inst.rows();
    let m = inst.cols();
    let mut cells: Vec<u8> = (0..n)
        .flat_map(|i| inst.row(i).iter().copied())
        .collect();
    for &(i, j, c) in consumed.items() {
        if i >= n || j >= n || c >= m {
            return Err(Error::InvalidArgument(format!(
                "consumed triple ({i}, {j}, {c}) out of range"
            )));
        }
        if inst.get(i, c) != 1 || inst.get(j, c) != 1 {
            return Err(Error::InvariantViolation(format!(
                "consumed triple ({i}, {j}, {c}) references a 0 cell"
            )));
        }
        cells[i * m + c] = 0;
        cells[j * m + c] = 0;
    }
    Instance::new(n, m, cells)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::Permutation;

    #[test]
    fn static_weight_counts_shared_columns() {
        let inst = Instance::from_rows(&["1101", "1001", "0000"]).unwrap();
        assert_eq!(static_weight(&inst, 0, 1).unwrap(), 2);
        assert_eq!(static_weight(&inst, 0, 2).unwrap(), 0);
        assert!(static_weight(&inst, 1, 1).is_err());
    }

    #[test]
    fn build_graph_matches_direct_column_scan() {
        let zeros = Instance::from_rows(&["000", "000", "000"]).unwrap();
        assert_eq!(build_graph(&zeros), WeightedGraph::zero(3));

        let two = Instance::from_rows(&["1011", "1110"]).unwrap();
        let g = build_graph(&two);
        assert_eq!(g.weight(0, 1), 2);

        // Incidence instance of a path: weight 1 exactly on graph edges.
        let inst = crate::instance::gen_from_graph(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let g = build_graph(&inst);
        for i in 0..4 {
            for j in (i + 1)..4 {
                let expected = if j == i + 1 { 1 } else { 0 };
                assert_eq!(g.weight(i, j), expected, "edge ({i}, {j})");
            }
        }
    }

    #[test]
    fn matching_bandpasses_examples() {
        let inst = Instance::from_rows(&["11", "01"]).unwrap();
        let m = Matching::new(vec![(0, 1)]).unwrap();
        let bs = matching_bandpasses(&inst, &m).unwrap();
        assert_eq!(bs.items(), &[(0, 1, 1)]);

        let empty = Matching::new(vec![]).unwrap();
        assert!(matching_bandpasses(&inst, &empty).unwrap().is_empty());

        let ones = Instance::from_rows(&["11", "11", "11", "11"]).unwrap();
        let pm = Matching::new(vec![(0, 1), (2, 3)]).unwrap();
        assert_eq!(matching_bandpasses(&ones, &pm).unwrap().len(), 4);
    }

    #[test]
    fn residual_zeroes_consumed_cells() {
        let inst = Instance::from_rows(&["11", "01"]).unwrap();
        let m = Matching::new(vec![(0, 1)]).unwrap();
        let consumed = matching_bandpasses(&inst, &m).unwrap();
        let resid = residual_instance(&inst, &consumed).unwrap();
        assert_eq!(resid.row(0), &[1, 0]);
        assert_eq!(resid.row(1), &[0, 0]);

        assert_eq!(
            residual_instance(&inst, &BandpassSet::default()).unwrap(),
            inst
        );

        let bad = BandpassSet { items: vec![(0, 1, 0)] };
        assert!(matches!(
            residual_instance(&inst, &bad),
            Err(Error::InvariantViolation(_))
        ));
    }

    #[test]
    fn matched_pairs_have_zero_residual_weight() {
        let inst = crate::instance::gen_random(6, 5, 0.6, 9).unwrap();
        let g = build_graph(&inst);
        let m = crate::matching::max_weight_matching(&g).unwrap();
        let consumed = matching_bandpasses(&inst, &m).unwrap();
        let resid = residual_instance(&inst, &consumed).unwrap();
        let gp = build_graph(&resid);
        for &(i, j) in m.edges() {
            assert_eq!(gp.weight(i, j), 0);
        }
        // Weight conservation: residual weights never exceed the originals.
        for i in 0..6 {
            for j in (i + 1)..6 {
                assert!(gp.weight(i, j) <= g.weight(i, j));
            }
        }
    }

    #[test]
    fn permutation_invariance_under_column_shuffle() {
        let inst = Instance::from_rows(&["1101", "1011", "0111"]).unwrap();
        // Reverse the columns by rebuilding the instance.
        let rev = Instance::from_rows(&["1011", "1101", "1110"]).unwrap();
        let p = Permutation::identity(3);
        assert_eq!(
            crate::instance::bandpass_count(&inst, &p).unwrap(),
            crate::instance::bandpass_count(&rev, &p).unwrap()
        );
    }
}
