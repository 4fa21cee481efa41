//! Maximum-weight matching in general graphs via the blossom method.
//!
//! Primal-dual algorithm with blossom shrinking, following the classic
//! O(n^3) formulation: repeated augmentation stages, each growing a forest
//! of alternating trees from free vertices, shrinking odd cycles into
//! blossoms, and adjusting dual variables until an augmenting path appears.
//! All arithmetic is on integers; the optimality of the result is checked
//! against the dual solution in debug builds.

/// Absent value for endpoint/blossom/vertex slots.
const NONE: usize = usize::MAX;

const LABEL_FREE: u8 = 0;
const LABEL_S: u8 = 1;
const LABEL_T: u8 = 2;

/// Computes a maximum-weight matching of the graph given as an edge list
/// `(i, j, w)` over vertices `0..n`. Negative-weight edges are never used,
/// so callers typically pass only positive edges. Returns `mate` with
/// `mate[v] = Some(u)` iff `(v, u)` is matched.
pub fn maximum_weight_matching(n: usize, edges: &[(usize, usize, i64)]) -> Vec<Option<usize>> {
    if n == 0 || edges.is_empty() {
        return vec![None; n];
    }
    for &(i, j, w) in edges {
        assert!(i < n && j < n && i != j, "bad edge ({i}, {j})");
        assert!(w >= 0, "negative weight {w} on edge ({i}, {j})");
    }
    let mut solver = Solver::new(n, edges);
    solver.run();
    let mate = solver.mate_vertices();
    #[cfg(debug_assertions)]
    solver.verify_optimum();
    mate
}

struct Solver<'a> {
    nv: usize,
    edges: &'a [(usize, usize, i64)],
    max_weight: i64,
    /// `endpoint[p]` is the vertex endpoint `p` attaches to; endpoints
    /// `2k` and `2k + 1` belong to edge `k`.
    endpoint: Vec<usize>,
    /// Remote endpoints of the edges incident to each vertex.
    neighb_end: Vec<Vec<usize>>,
    /// Matched remote endpoint per vertex, or NONE.
    mate: Vec<usize>,
    /// Label per top-level blossom (and per vertex inside T-blossoms).
    label: Vec<u8>,
    /// Endpoint through which the label was obtained.
    label_end: Vec<usize>,
    /// Top-level blossom containing each vertex.
    in_blossom: Vec<usize>,
    blossom_parent: Vec<usize>,
    blossom_childs: Vec<Vec<usize>>,
    blossom_base: Vec<usize>,
    blossom_endps: Vec<Vec<usize>>,
    /// Least-slack edge towards an S-blossom, per vertex/blossom.
    best_edge: Vec<usize>,
    /// For S-blossoms: per other S-blossom, the least-slack connecting edge.
    blossom_best_edges: Vec<Option<Vec<usize>>>,
    unused_blossoms: Vec<usize>,
    dual_var: Vec<i64>,
    allow_edge: Vec<bool>,
    queue: Vec<usize>,
}

impl<'a> Solver<'a> {
    fn new(nv: usize, edges: &'a [(usize, usize, i64)]) -> Self {
        let ne = edges.len();
        let max_weight = edges.iter().map(|e| e.2).max().unwrap_or(0).max(0);
        let mut endpoint = Vec::with_capacity(2 * ne);
        for &(i, j, _) in edges {
            endpoint.push(i);
            endpoint.push(j);
        }
        let mut neighb_end = vec![Vec::new(); nv];
        for (k, &(i, j, _)) in edges.iter().enumerate() {
            neighb_end[i].push(2 * k + 1);
            neighb_end[j].push(2 * k);
        }
        let mut dual_var = vec![max_weight; nv];
        dual_var.extend(std::iter::repeat(0).take(nv));
        Self {
            nv,
            edges,
            max_weight,
            endpoint,
            neighb_end,
            mate: vec![NONE; nv],
            label: vec![LABEL_FREE; 2 * nv],
            label_end: vec![NONE; 2 * nv],
            in_blossom: (0..nv).collect(),
            blossom_parent: vec![NONE; 2 * nv],
            blossom_childs: vec![Vec::new(); 2 * nv],
            blossom_base: (0..nv).chain(std::iter::repeat(NONE).take(nv)).collect(),
            blossom_endps: vec![Vec::new(); 2 * nv],
            best_edge: vec![NONE; 2 * nv],
            blossom_best_edges: vec![None; 2 * nv],
            unused_blossoms: (nv..2 * nv).collect(),
            dual_var,
            allow_edge: vec![false; ne],
            queue: Vec::new(),
        }
    }

    /// 2x the slack of edge `k`; only meaningful for edges between
    /// top-level blossoms.
    fn slack(&self, k: usize) -> i64 {
        let (i, j, w) = self.edges[k];
        self.dual_var[i] + self.dual_var[j] - 2 * w
    }

    fn blossom_leaves(&self, b: usize, out: &mut Vec<usize>) {
        if b < self.nv {
            out.push(b);
        } else {
            for &c in &self.blossom_childs[b] {
                self.blossom_leaves(c, out);
            }
        }
    }

    fn leaves(&self, b: usize) -> Vec<usize> {
        let mut out = Vec::new();
        self.blossom_leaves(b, &mut out);
        out
    }

    /// Labels the top-level blossom of `w` with `t`, reached through
    /// endpoint `p`; S-labels enqueue the blossom's vertices, T-labels
    /// propagate an S-label to the mate of the base.
    fn assign_label(&mut self, w: usize, t: u8, p: usize) {
        let b = self.in_blossom[w];
        debug_assert!(self.label[w] == LABEL_FREE && self.label[b] == LABEL_FREE);
        self.label[w] = t;
        self.label[b] = t;
        self.label_end[w] = p;
        self.label_end[b] = p;
        self.best_edge[w] = NONE;
        self.best_edge[b] = NONE;
        if t == LABEL_S {
            let mut ls = self.leaves(b);
            self.queue.append(&mut ls);
        } else if t == LABEL_T {
            let base = self.blossom_base[b];
            debug_assert!(self.mate[base] != NONE);
            let m = self.mate[base];
            self.assign_label(self.endpoint[m], LABEL_S, m ^ 1);
        }
    }

    /// Traces back from both ends of an S-S edge to find the first common
    /// tree vertex, i.e. the base of the new blossom; NONE means the paths
    /// reach different roots and the edge is augmenting.
    fn scan_blossom(&mut self, v: usize, w: usize) -> usize {
        let mut path = Vec::new();
        let mut base = NONE;
        let (mut v, mut w) = (v, w);
        while v != NONE || w != NONE {
            let mut b = self.in_blossom[v];
            if self.label[b] & 4 != 0 {
                base = self.blossom_base[b];
                break;
            }
            debug_assert_eq!(self.label[b], LABEL_S);
            path.push(b);
            self.label[b] = 5;
            debug_assert_eq!(self.label_end[b], self.mate[self.blossom_base[b]]);
            if self.label_end[b] == NONE {
                v = NONE;
            } else {
                v = self.endpoint[self.label_end[b]];
                b = self.in_blossom[v];
                debug_assert_eq!(self.label[b], LABEL_T);
                debug_assert!(self.label_end[b] != NONE);
                v = self.endpoint[self.label_end[b]];
            }
            if w != NONE {
                std::mem::swap(&mut v, &mut w);
            }
        }
        for b in path {
            self.label[b] = LABEL_S;
        }
        base
    }

    /// Shrinks the odd cycle through edge `k` and `base` into a new
    /// blossom, taking over the children's best-edge lists.
    fn add_blossom(&mut self, base: usize, k: usize) {
        let (mut v, mut w, _) = self.edges[k];
        let bb = self.in_blossom[base];
        let mut bv = self.in_blossom[v];
        let mut bw = self.in_blossom[w];
        let b = self.unused_blossoms.pop().expect("free blossom slot");
        self.blossom_base[b] = base;
        self.blossom_parent[b] = NONE;
        self.blossom_parent[bb] = b;
        let mut path = Vec::new();
        let mut endps = Vec::new();
        while bv != bb {
            self.blossom_parent[bv] = b;
            path.push(bv);
            endps.push(self.label_end[bv]);
            debug_assert!(self.label_end[bv] != NONE);
            v = self.endpoint[self.label_end[bv]];
            bv = self.in_blossom[v];
        }
        path.push(bb);
        path.reverse();
        endps.reverse();
        endps.push(2 * k);
        while bw != bb {
            self.blossom_parent[bw] = b;
            path.push(bw);
            endps.push(self.label_end[bw] ^ 1);
            debug_assert!(self.label_end[bw] != NONE);
            w = self.endpoint[self.label_end[bw]];
            bw = self.in_blossom[w];
        }
        debug_assert_eq!(self.label[bb], LABEL_S);
        self.blossom_childs[b] = path.clone();
        self.blossom_endps[b] = endps;
        self.label[b] = LABEL_S;
        self.label_end[b] = self.label_end[bb];
        self.dual_var[b] = 0;
        for leaf in self.leaves(b) {
            if self.label[self.in_blossom[leaf]] == LABEL_T {
                // Former T-vertices become S-vertices inside the blossom.
                self.queue.push(leaf);
            }
            self.in_blossom[leaf] = b;
        }
        // Merge the children's least-slack edge tables.
        let mut best_edge_to = vec![NONE; 2 * self.nv];
        for &bv in &path {
            let nblists: Vec<Vec<usize>> = match self.blossom_best_edges[bv].take() {
                Some(list) => vec![list],
                None => self
                    .leaves(bv)
                    .into_iter()
                    .map(|leaf| self.neighb_end[leaf].iter().map(|&p| p / 2).collect())
                    .collect(),
            };
            for nblist in nblists {
                for e in nblist {
                    let (mut i, mut j, _) = self.edges[e];
                    if self.in_blossom[j] == b {
                        std::mem::swap(&mut i, &mut j);
                    }
                    let _ = i;
                    let bj = self.in_blossom[j];
                    if bj != b
                        && self.label[bj] == LABEL_S
                        && (best_edge_to[bj] == NONE
                            || self.slack(e) < self.slack(best_edge_to[bj]))
                    {
                        best_edge_to[bj] = e;
                    }
                }
            }
            self.best_edge[bv] = NONE;
        }
        let merged: Vec<usize> = best_edge_to.into_iter().filter(|&e| e != NONE).collect();
        self.best_edge[b] = NONE;
        for &e in &merged {
            if self.best_edge[b] == NONE || self.slack(e) < self.slack(self.best_edge[b]) {
                self.best_edge[b] = e;
            }
        }
        self.blossom_best_edges[b] = Some(merged);
    }

    /// Expands blossom `b`, restoring its children as top-level blossoms.
    /// During a stage (`end_stage` false) a T-blossom's children are
    /// relabeled along the path from the entry to the base.
    fn expand_blossom(&mut self, b: usize, end_stage: bool) {
        let childs = self.blossom_childs[b].clone();
        for &s in &childs {
            self.blossom_parent[s] = NONE;
            if s < self.nv {
                self.in_blossom[s] = s;
            } else if end_stage && self.dual_var[s] == 0 {
                self.expand_blossom(s, end_stage);
            } else {
                for leaf in self.leaves(s) {
                    self.in_blossom[leaf] = s;
                }
            }
        }
        if !end_stage && self.label[b] == LABEL_T {
            let entry_child = self.in_blossom[self.endpoint[self.label_end[b] ^ 1]];
            let len = childs.len() as i64;
            let mut j = childs
                .iter()
                .position(|&c| c == entry_child)
                .expect("entry child") as i64;
            let (j_step, endp_trick): (i64, i64) = if j & 1 != 0 {
                j -= len;
                (1, 0)
            } else {
                (-1, 1)
            };
            let at = |idx: i64| -> usize { idx.rem_euclid(len) as usize };
            let endps = self.blossom_endps[b].clone();
            let mut p = self.label_end[b];
            while j != 0 {
                // Relabel the even-position child T, the odd one S.
                self.label[self.endpoint[p ^ 1]] = LABEL_FREE;
                let q = endps[at(j - endp_trick)] ^ (endp_trick as usize) ^ 1;
                self.label[self.endpoint[q]] = LABEL_FREE;
                self.assign_label(self.endpoint[p ^ 1], LABEL_T, p);
                self.allow_edge[endps[at(j - endp_trick)] / 2] = true;
                j += j_step;
                p = endps[at(j - endp_trick)] ^ (endp_trick as usize);
                self.allow_edge[p / 2] = true;
                j += j_step;
            }
            // The base child keeps the T label.
            let bv = childs[at(j)];
            self.label[self.endpoint[p ^ 1]] = LABEL_T;
            self.label[bv] = LABEL_T;
            self.label_end[self.endpoint[p ^ 1]] = p;
            self.label_end[bv] = p;
            self.best_edge[bv] = NONE;
            // Children outside the entry-to-base path lose their labels.
            j += j_step;
            while childs[at(j)] != entry_child {
                let bv = childs[at(j)];
                if self.label[bv] == LABEL_S {
                    j += j_step;
                    continue;
                }
                let mut labeled = NONE;
                for v in self.leaves(bv) {
                    if self.label[v] != LABEL_FREE {
                        labeled = v;
                        break;
                    }
                }
                if labeled != NONE {
                    debug_assert_eq!(self.label[labeled], LABEL_T);
                    debug_assert_eq!(self.in_blossom[labeled], bv);
                    self.label[labeled] = LABEL_FREE;
                    self.label[self.endpoint[self.mate[self.blossom_base[bv]]]] = LABEL_FREE;
                    let le = self.label_end[labeled];
                    self.assign_label(labeled, LABEL_T, le);
                }
                j += j_step;
            }
        }
        self.label[b] = LABEL_FREE;
        self.label_end[b] = NONE;
        self.blossom_childs[b].clear();
        self.blossom_endps[b].clear();
        self.blossom_base[b] = NONE;
        self.blossom_best_edges[b] = None;
        self.best_edge[b] = NONE;
        self.unused_blossoms.push(b);
    }

    /// Swaps matched and unmatched edges around blossom `b` so that vertex
    /// `v` becomes its base.
    fn augment_blossom(&mut self, b: usize, v: usize) {
        let mut t = v;
        while self.blossom_parent[t] != b {
            t = self.blossom_parent[t];
        }
        if t >= self.nv {
            self.augment_blossom(t, v);
        }
        let childs = self.blossom_childs[b].clone();
        let endps = self.blossom_endps[b].clone();
        let len = childs.len() as i64;
        let i = childs.iter().position(|&c| c == t).expect("child") as i64;
        let mut j = i;
        let (j_step, endp_trick): (i64, i64) = if j & 1 != 0 {
            j -= len;
            (1, 0)
        } else {
            (-1, 1)
        };
        let at = |idx: i64| -> usize { idx.rem_euclid(len) as usize };
        while j != 0 {
            j += j_step;
            let t = childs[at(j)];
            let p = endps[at(j - endp_trick)] ^ (endp_trick as usize);
            if t >= self.nv {
                self.augment_blossom(t, self.endpoint[p]);
            }
            j += j_step;
            let t = childs[at(j)];
            if t >= self.nv {
                self.augment_blossom(t, self.endpoint[p ^ 1]);
            }
            self.mate[self.endpoint[p]] = p ^ 1;
            self.mate[self.endpoint[p ^ 1]] = p;
        }
        let i = i.rem_euclid(len) as usize;
        let mut new_childs: Vec<usize> = childs[i..].to_vec();
        new_childs.extend_from_slice(&childs[..i]);
        let mut new_endps: Vec<usize> = endps[i..].to_vec();
        new_endps.extend_from_slice(&endps[..i]);
        self.blossom_childs[b] = new_childs;
        self.blossom_endps[b] = new_endps;
        self.blossom_base[b] = self.blossom_base[self.blossom_childs[b][0]];
        debug_assert_eq!(self.blossom_base[b], v);
    }

    /// Augments the matching along the path through tight edge `k`.
    fn augment_matching(&mut self, k: usize) {
        let (v, w, _) = self.edges[k];
        for (s0, p0) in [(v, 2 * k + 1), (w, 2 * k)] {
            let mut s = s0;
            let mut p = p0;
            loop {
                let bs = self.in_blossom[s];
                debug_assert_eq!(self.label[bs], LABEL_S);
                debug_assert_eq!(self.label_end[bs], self.mate[self.blossom_base[bs]]);
                if bs >= self.nv {
                    self.augment_blossom(bs, s);
                }
                self.mate[s] = p;
                if self.label_end[bs] == NONE {
                    break; // reached a root, i.e. a free vertex
                }
                let t = self.endpoint[self.label_end[bs]];
                let bt = self.in_blossom[t];
                debug_assert_eq!(self.label[bt], LABEL_T);
                debug_assert!(self.label_end[bt] != NONE);
                s = self.endpoint[self.label_end[bt]];
                let j = self.endpoint[self.label_end[bt] ^ 1];
                debug_assert_eq!(self.blossom_base[bt], t);
                if bt >= self.nv {
                    self.augment_blossom(bt, j);
                }
                self.mate[j] = self.label_end[bt];
                p = self.label_end[bt] ^ 1;
            }
        }
    }

    fn run(&mut self) {
        let nv = self.nv;
        for _stage in 0..nv {
            for x in self.label.iter_mut() {
                *x = LABEL_FREE;
            }
            for x in self.best_edge.iter_mut() {
                *x = NONE;
            }
            for x in self.blossom_best_edges[nv..].iter_mut() {
                *x = None;
            }
            for x in self.allow_edge.iter_mut() {
                *x = false;
            }
            self.queue.clear();
            for v in 0..nv {
                if self.mate[v] == NONE && self.label[self.in_blossom[v]] == LABEL_FREE {
                    self.assign_label(v, LABEL_S, NONE);
                }
            }
            let mut augmented = false;
            loop {
                while let Some(v) = self.queue.pop() {
                    debug_assert_eq!(self.label[self.in_blossom[v]], LABEL_S);
                    for pi in 0..self.neighb_end[v].len() {
                        let p = self.neighb_end[v][pi];
                        let k = p / 2;
                        let w = self.endpoint[p];
                        if self.in_blossom[v] == self.in_blossom[w] {
                            continue;
                        }
                        let mut kslack = 0;
                        if !self.allow_edge[k] {
                            kslack = self.slack(k);
                            if kslack <= 0 {
                                self.allow_edge[k] = true;
                            }
                        }
                        if self.allow_edge[k] {
                            if self.label[self.in_blossom[w]] == LABEL_FREE {
                                self.assign_label(w, LABEL_T, p ^ 1);
                            } else if self.label[self.in_blossom[w]] == LABEL_S {
                                let base = self.scan_blossom(v, w);
                                if base != NONE {
                                    self.add_blossom(base, k);
                                } else {
                                    self.augment_matching(k);
                                    augmented = true;
                                    break;
                                }
                            } else if self.label[w] == LABEL_FREE {
                                debug_assert_eq!(self.label[self.in_blossom[w]], LABEL_T);
                                self.label[w] = LABEL_T;
                                self.label_end[w] = p ^ 1;
                            }
                        } else if self.label[self.in_blossom[w]] == LABEL_S {
                            let b = self.in_blossom[v];
                            if self.best_edge[b] == NONE
                                || kslack < self.slack(self.best_edge[b])
                            {
                                self.best_edge[b] = k;
                            }
                        } else if self.label[w] == LABEL_FREE
                            && (self.best_edge[w] == NONE
                                || kslack < self.slack(self.best_edge[w]))
                        {
                            self.best_edge[w] = k;
                        }
                    }
                    if augmented {
                        break;
                    }
                }
                if augmented {
                    break;
                }

                // No augmenting path under the current duals; compute the
                // largest feasible dual adjustment.
                let mut delta_type = 1i32;
                let mut delta: i64 = *self.dual_var[..nv].iter().min().expect("vertices");
                let mut delta_edge = NONE;
                let mut delta_blossom = NONE;
                for v in 0..nv {
                    if self.label[self.in_blossom[v]] == LABEL_FREE && self.best_edge[v] != NONE
                    {
                        let d = self.slack(self.best_edge[v]);
                        if d < delta {
                            delta = d;
                            delta_type = 2;
                            delta_edge = self.best_edge[v];
                        }
                    }
                }
                for b in 0..2 * nv {
                    if self.blossom_parent[b] == NONE
                        && self.label[b] == LABEL_S
                        && self.best_edge[b] != NONE
                    {
                        let kslack = self.slack(self.best_edge[b]);
                        debug_assert_eq!(kslack % 2, 0, "odd S-S slack");
                        let d = kslack / 2;
                        if d < delta {
                            delta = d;
                            delta_type = 3;
                            delta_edge = self.best_edge[b];
                        }
                    }
                }
                for b in nv..2 * nv {
                    if self.blossom_base[b] != NONE
                        && self.blossom_parent[b] == NONE
                        && self.label[b] == LABEL_T
                        && self.dual_var[b] < delta
                    {
                        delta = self.dual_var[b];
                        delta_type = 4;
                        delta_blossom = b;
                    }
                }

                for v in 0..nv {
                    match self.label[self.in_blossom[v]] {
                        LABEL_S => self.dual_var[v] -= delta,
                        LABEL_T => self.dual_var[v] += delta,
                        _ => {}
                    }
                }
                for b in nv..2 * nv {
                    if self.blossom_base[b] != NONE && self.blossom_parent[b] == NONE {
                        match self.label[b] {
                            LABEL_S => self.dual_var[b] += delta,
                            LABEL_T => self.dual_var[b] -= delta,
                            _ => {}
                        }
                    }
                }

                match delta_type {
                    1 => break, // dual optimum: matching is maximum weight
                    2 => {
                        self.allow_edge[delta_edge] = true;
                        let (mut i, j, _) = self.edges[delta_edge];
                        if self.label[self.in_blossom[i]] == LABEL_FREE {
                            i = j;
                        }
                        debug_assert_eq!(self.label[self.in_blossom[i]], LABEL_S);
                        self.queue.push(i);
                    }
                    3 => {
                        self.allow_edge[delta_edge] = true;
                        let (i, _, _) = self.edges[delta_edge];
                        debug_assert_eq!(self.label[self.in_blossom[i]], LABEL_S);
                        self.queue.push(i);
                    }
                    _ => {
                        self.expand_blossom(delta_blossom, false);
                    }
                }
            }
            if !augmented {
                break;
            }
            for b in nv..2 * nv {
                if self.blossom_parent[b] == NONE
                    && self.blossom_base[b] != NONE
                    && self.label[b] == LABEL_S
                    && self.dual_var[b] == 0
                {
                    self.expand_blossom(b, true);
                }
            }
        }
    }

    fn mate_vertices(&self) -> Vec<Option<usize>> {
        (0..self.nv)
            .map(|v| {
                if self.mate[v] == NONE {
                    None
                } else {
                    Some(self.endpoint[self.mate[v]])
                }
            })
            .collect()
    }

    /// Checks dual feasibility and complementary slackness, which together
    /// certify that the computed matching has maximum weight.
    #[allow(dead_code)]
    fn verify_optimum(&self) {
        let _ = self.max_weight;
        for v in 0..self.nv {
            assert!(self.dual_var[v] >= 0, "negative vertex dual at {v}");
            if self.mate[v] == NONE {
                assert_eq!(self.dual_var[v], 0, "unmatched vertex {v} with dual > 0");
            }
        }
        for b in self.nv..2 * self.nv {
            if self.blossom_base[b] != NONE {
                assert!(self.dual_var[b] >= 0, "negative blossom dual at {b}");
            }
        }
        for (k, &(i, j, w)) in self.edges.iter().enumerate() {
            let mut s = self.dual_var[i] + self.dual_var[j] - 2 * w;
            let mut i_chain = vec![i];
            let mut j_chain = vec![j];
            let mut bi = self.blossom_parent[i_chain[0]];
            while bi != NONE {
                i_chain.push(bi);
                bi = self.blossom_parent[bi];
            }
            let mut bj = self.blossom_parent[j_chain[0]];
            while bj != NONE {
                j_chain.push(bj);
                bj = self.blossom_parent[bj];
            }
            i_chain.reverse();
            j_chain.reverse();
            for (bi, bj) in i_chain.iter().zip(j_chain.iter()) {
                if bi != bj {
                    break;
                }
                if *bi >= self.nv {
                    s += 2 * self.dual_var[*bi];
                }
            }
            assert!(s >= 0, "negative slack on edge {k}");
            let matched = (self.mate[i] != NONE && self.mate[i] / 2 == k)
                || (self.mate[j] != NONE && self.mate[j] / 2 == k);
            if matched {
                assert_eq!(s, 0, "matched edge {k} is not tight");
            }
        }
    }
}
