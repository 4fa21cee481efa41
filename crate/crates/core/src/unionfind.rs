//! Disjoint-set structures backing the acyclicity bookkeeping.

/// Union-find with path compression and union by size.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    /// Merges the sets containing `a` and `b`; returns false when they were
    /// already together (i.e. the edge would close a cycle).
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (big, small) = if self.size[ra] >= self.size[rb] {
            (ra, rb)
        } else {
            (rb, ra)
        };
        self.parent[small] = big;
        self.size[big] += self.size[small];
        true
    }

    pub fn connected(&mut self, a: usize, b: usize) -> bool {
        self.find(a) == self.find(b)
    }
}

/// Union-find with an undo log: union by size, no path compression, so
/// merges can be rolled back in reverse order. Used by the backtracking
/// edge-labeling search.
#[derive(Debug, Clone)]
pub struct RollbackUnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
    log: Vec<usize>,
}

impl RollbackUnionFind {
    pub fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            size: vec![1; n],
            log: Vec::new(),
        }
    }

    pub fn find(&self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        root
    }

    pub fn connected(&self, a: usize, b: usize) -> bool {
        self.find(a) == self.find(b)
    }

    /// Merges and records the merge; returns false (recording nothing) when
    /// already connected.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (big, small) = if self.size[ra] >= self.size[rb] {
            (ra, rb)
        } else {
            (rb, ra)
        };
        self.parent[small] = big;
        self.size[big] += self.size[small];
        self.log.push(small);
        true
    }

    /// Number of merges performed so far; pass to [`Self::rollback_to`].
    pub fn mark(&self) -> usize {
        self.log.len()
    }

    /// Undoes merges until only `mark` remain.
    pub fn rollback_to(&mut self, mark: usize) {
        while self.log.len() > mark {
            let small = self.log.pop().expect("log entry");
            let big = self.parent[small];
            self.parent[small] = small;
            self.size[big] -= self.size[small];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn union_find_detects_cycles() {
        let mut uf = UnionFind::new(4);
        assert!(uf.union(0, 1));
        assert!(uf.union(2, 3));
        assert!(!uf.connected(0, 2));
        assert!(uf.union(1, 2));
        assert!(!uf.union(0, 3));
    }

    #[test]
    fn rollback_restores_previous_components() {
        let mut uf = RollbackUnionFind::new(5);
        uf.union(0, 1);
        let mark = uf.mark();
        uf.union(1, 2);
        uf.union(3, 4);
        assert!(uf.connected(0, 2));
        uf.rollback_to(mark);
        assert!(!uf.connected(0, 2));
        assert!(!uf.connected(3, 4));
        assert!(uf.connected(0, 1));
        // Re-merging after rollback works.
        assert!(uf.union(2, 3));
        assert!(uf.connected(2, 3));
    }
}
