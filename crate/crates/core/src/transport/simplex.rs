//! Primal network simplex for the uncapacitated transportation problem.
//!
//! Follows the classical spanning-tree implementation with thread/successor
//! indices and block-search pricing. Real arcs are implicit: arc `e` joins supply
//! node `e / n2` to demand node `n1 + e % n2`, and its cost is computed on demand.
//! One artificial arc per node connects it to an extra root node.

use crate::error::{Error, Result};

const STATE_TREE: i8 = 0;
const STATE_LOWER: i8 = 1;
const DIR_UP: i8 = 1;
const DIR_DOWN: i8 = -1;

/// Solver state for one transportation instance.
pub struct NetworkSimplex<C: Fn(usize, usize) -> f64> {
    cost: C,
    n1: usize,
    n2: usize,
    node_num: usize,
    arc_num: usize,
    art_cost: f64,
    supply: Vec<f64>,
    // artificial arcs only; real endpoints are implicit
    art_source: Vec<usize>,
    art_target: Vec<usize>,
    art_cost_of: Vec<f64>,
    flow: Vec<f64>,
    state: Vec<i8>,
    pi: Vec<f64>,
    parent: Vec<isize>,
    pred: Vec<usize>,
    thread: Vec<usize>,
    rev_thread: Vec<usize>,
    succ_num: Vec<usize>,
    last_succ: Vec<usize>,
    pred_dir: Vec<i8>,
    dirty_revs: Vec<usize>,
    // pivot state
    in_arc: usize,
    join: usize,
    u_in: usize,
    v_in: usize,
    u_out: usize,
    delta: f64,
    next_arc: usize,
    block_size: usize,
    tolerance: f64,
    pivots: usize,
}

impl<C: Fn(usize, usize) -> f64> NetworkSimplex<C> {
    /// `cost(i, j)` must be finite and nonnegative, bounded by `max_cost`.
    pub fn new(supplies: &[f64], demands: &[f64], cost: C, max_cost: f64) -> Self {
        let n1 = supplies.len();
        let n2 = demands.len();
        let node_num = n1 + n2;
        let arc_num = n1 * n2;
        let all = arc_num + node_num;
        let art_cost = (max_cost + 1.0) * (node_num as f64 + 1.0);
        let mut supply = Vec::with_capacity(node_num + 1);
        supply.extend_from_slice(supplies);
        supply.extend(demands.iter().map(|d| -d));
        supply.push(0.0);
        let block_size = ((arc_num as f64).sqrt() as usize).max(10);
        Self {
            cost,
            n1,
            n2,
            node_num,
            arc_num,
            art_cost,
            supply,
            art_source: vec![0; node_num],
            art_target: vec![0; node_num],
            art_cost_of: vec![0.0; node_num],
            flow: vec![0.0; all],
            state: vec![STATE_LOWER; all],
            pi: vec![0.0; node_num + 1],
            parent: vec![-1; node_num + 1],
            pred: vec![0; node_num + 1],
            thread: vec![0; node_num + 1],
            rev_thread: vec![0; node_num + 1],
            succ_num: vec![0; node_num + 1],
            last_succ: vec![0; node_num + 1],
            pred_dir: vec![DIR_UP; node_num + 1],
            dirty_revs: Vec::new(),
            in_arc: 0,
            join: 0,
            u_in: 0,
            v_in: 0,
            u_out: 0,
            delta: 0.0,
            next_arc: 0,
            block_size,
            tolerance: 64.0 * f64::EPSILON * art_cost,
            pivots: 0,
        }
    }

    fn source(&self, e: usize) -> usize {
        if e < self.arc_num {
            e / self.n2
        } else {
            self.art_source[e - self.arc_num]
        }
    }

    fn target(&self, e: usize) -> usize {
        if e < self.arc_num {
            self.n1 + e % self.n2
        } else {
            self.art_target[e - self.arc_num]
        }
    }

    fn arc_cost(&self, e: usize) -> f64 {
        if e < self.arc_num {
            (self.cost)(e / self.n2, e % self.n2)
        } else {
            self.art_cost_of[e - self.arc_num]
        }
    }

    fn init(&mut self) {
        let root = self.node_num;
        self.parent[root] = -1;
        self.pred[root] = usize::MAX;
        self.thread[root] = 0;
        self.rev_thread[0] = root;
        self.succ_num[root] = self.node_num + 1;
        self.last_succ[root] = root - 1;
        self.pi[root] = 0.0;
        for u in 0..self.node_num {
            let e = self.arc_num + u;
            self.parent[u] = root as isize;
            self.pred[u] = e;
            self.thread[u] = u + 1;
            self.rev_thread[u + 1] = u;
            self.succ_num[u] = 1;
            self.last_succ[u] = u;
            self.state[e] = STATE_TREE;
            if self.supply[u] >= 0.0 {
                self.pred_dir[u] = DIR_UP;
                self.pi[u] = 0.0;
                self.art_source[u] = u;
                self.art_target[u] = root;
                self.flow[e] = self.supply[u];
                self.art_cost_of[u] = 0.0;
            } else {
                self.pred_dir[u] = DIR_DOWN;
                self.pi[u] = self.art_cost;
                self.art_source[u] = root;
                self.art_target[u] = u;
                self.flow[e] = -self.supply[u];
                self.art_cost_of[u] = self.art_cost;
            }
        }
    }

    fn reduced_cost(&self, e: usize) -> f64 {
        // real arcs only
        let i = e / self.n2;
        let j = e % self.n2;
        (self.cost)(i, j) + self.pi[i] - self.pi[self.n1 + j]
    }

    fn find_entering_arc(&mut self) -> bool {
        let m = self.arc_num;
        let mut min = -self.tolerance;
        let mut found = None;
        let mut cnt = self.block_size;
        let start = self.next_arc;
        let mut e = start;
        for _ in 0..m {
            let c = self.state[e] as f64 * self.reduced_cost(e);
            if c < min {
                min = c;
                found = Some(e);
            }
            e += 1;
            if e == m {
                e = 0;
            }
            cnt -= 1;
            if cnt == 0 {
                if found.is_some() {
                    break;
                }
                cnt = self.block_size;
            }
        }
        match found {
            Some(a) => {
                self.in_arc = a;
                self.next_arc = e;
                true
            }
            None => false,
        }
    }

    fn find_join_node(&mut self) {
        let mut u = self.source(self.in_arc);
        let mut v = self.target(self.in_arc);
        while u != v {
            if self.succ_num[u] < self.succ_num[v] {
                u = self.parent[u] as usize;
            } else {
                v = self.parent[v] as usize;
            }
        }
        self.join = u;
    }

    fn find_leaving_arc(&mut self) -> bool {
        let (first, second) = if self.state[self.in_arc] == STATE_LOWER {
            (self.source(self.in_arc), self.target(self.in_arc))
        } else {
            (self.target(self.in_arc), self.source(self.in_arc))
        };
        self.delta = f64::INFINITY;
        let mut result = 0;
        let mut u = first;
        while u != self.join {
            if self.pred_dir[u] == DIR_UP {
                let d = self.flow[self.pred[u]];
                if d < self.delta {
                    self.delta = d;
                    self.u_out = u;
                    result = 1;
                }
            }
            u = self.parent[u] as usize;
        }
        let mut u = second;
        while u != self.join {
            if self.pred_dir[u] == DIR_DOWN {
                let d = self.flow[self.pred[u]];
                if d <= self.delta {
                    self.delta = d;
                    self.u_out = u;
                    result = 2;
                }
            }
            u = self.parent[u] as usize;
        }
        if result == 1 {
            self.u_in = first;
            self.v_in = second;
        } else {
            self.u_in = second;
            self.v_in = first;
        }
        result != 0
    }

    fn change_flow(&mut self) {
        if self.delta > 0.0 {
            let val = self.state[self.in_arc] as f64 * self.delta;
            self.flow[self.in_arc] += val;
            let mut u = self.source(self.in_arc);
            while u != self.join {
                let e = self.pred[u];
                self.flow[e] -= self.pred_dir[u] as f64 * val;
                u = self.parent[u] as usize;
            }
            let mut u = self.target(self.in_arc);
            while u != self.join {
                let e = self.pred[u];
                self.flow[e] += self.pred_dir[u] as f64 * val;
                u = self.parent[u] as usize;
            }
        }
        self.state[self.in_arc] = STATE_TREE;
        let out = self.pred[self.u_out];
        self.flow[out] = 0.0;
        self.state[out] = STATE_LOWER;
    }

    fn update_tree_structure(&mut self) {
        let u_in = self.u_in;
        let v_in = self.v_in;
        let u_out = self.u_out;
        let join = self.join;
        let old_rev_thread = self.rev_thread[u_out];
        let old_succ_num = self.succ_num[u_out];
        let old_last_succ = self.last_succ[u_out];
        let v_out = self.parent[u_out] as usize;

        if u_in == u_out {
            self.parent[u_in] = v_in as isize;
            self.pred[u_in] = self.in_arc;
            self.pred_dir[u_in] = if u_in == self.source(self.in_arc) { DIR_UP } else { DIR_DOWN };
            if self.thread[v_in] != u_out {
                let mut after = self.thread[old_last_succ];
                self.thread[old_rev_thread] = after;
                self.rev_thread[after] = old_rev_thread;
                after = self.thread[v_in];
                self.thread[v_in] = u_out;
                self.rev_thread[u_out] = v_in;
                self.thread[old_last_succ] = after;
                self.rev_thread[after] = old_last_succ;
            }
        } else {
            let thread_continue =
                if old_rev_thread == v_in { self.thread[old_last_succ] } else { self.thread[v_in] };
            let mut stem = u_in;
            let mut par_stem = v_in;
            let mut last = self.last_succ[u_in];
            let mut after = self.thread[last];
            self.thread[v_in] = u_in;
            self.dirty_revs.clear();
            self.dirty_revs.push(v_in);
            while stem != u_out {
                let next_stem = self.parent[stem] as usize;
                self.thread[last] = next_stem;
                self.dirty_revs.push(last);
                let before = self.rev_thread[stem];
                self.thread[before] = after;
                self.rev_thread[after] = before;
                self.parent[stem] = par_stem as isize;
                par_stem = stem;
                stem = next_stem;
                last = if self.last_succ[stem] == self.last_succ[par_stem] {
                    self.rev_thread[par_stem]
                } else {
                    self.last_succ[stem]
                };
                after = self.thread[last];
            }
            self.parent[u_out] = par_stem as isize;
            self.thread[last] = thread_continue;
            self.rev_thread[thread_continue] = last;
            self.last_succ[u_out] = last;
            if old_rev_thread != v_in {
                self.thread[old_rev_thread] = after;
                self.rev_thread[after] = old_rev_thread;
            }
            for k in 0..self.dirty_revs.len() {
                let u = self.dirty_revs[k];
                let t = self.thread[u];
                self.rev_thread[t] = u;
            }
            let mut tmp_sc = 0usize;
            let tmp_ls = self.last_succ[u_out];
            let mut u = u_out;
            while u != u_in {
                let p = self.parent[u] as usize;
                self.pred[u] = self.pred[p];
                self.pred_dir[u] = -self.pred_dir[p];
                tmp_sc = tmp_sc + self.succ_num[u] - self.succ_num[p];
                self.succ_num[u] = tmp_sc;
                self.last_succ[p] = tmp_ls;
                u = p;
            }
            self.pred[u_in] = self.in_arc;
            self.pred_dir[u_in] = if u_in == self.source(self.in_arc) { DIR_UP } else { DIR_DOWN };
            self.succ_num[u_in] = old_succ_num;
        }

        let up_limit_out = if self.last_succ[join] == v_in { join as isize } else { -1 };
        let last_succ_out = self.last_succ[u_out];
        let mut u = v_in as isize;
        while u != -1 && self.last_succ[u as usize] == v_in {
            self.last_succ[u as usize] = last_succ_out;
            u = self.parent[u as usize];
        }
        if join != old_rev_thread && v_in != old_rev_thread {
            let mut u = v_out as isize;
            while u != up_limit_out && self.last_succ[u as usize] == old_last_succ {
                self.last_succ[u as usize] = old_rev_thread;
                u = self.parent[u as usize];
            }
        } else if last_succ_out != old_last_succ {
            let mut u = v_out as isize;
            while u != up_limit_out && self.last_succ[u as usize] == old_last_succ {
                self.last_succ[u as usize] = last_succ_out;
                u = self.parent[u as usize];
            }
        }
        let mut u = v_in;
        while u != join {
            self.succ_num[u] += old_succ_num;
            u = self.parent[u] as usize;
        }
        let mut u = v_out;
        while u != join {
            self.succ_num[u] -= old_succ_num;
            u = self.parent[u] as usize;
        }
    }

    fn update_potential(&mut self) {
        let sigma = self.pi[self.v_in] - self.pi[self.u_in] - self.pred_dir[self.u_in] as f64 * self.arc_cost(self.in_arc);
        let end = self.thread[self.last_succ[self.u_in]];
        let mut u = self.u_in;
        while u != end {
            self.pi[u] += sigma;
            u = self.thread[u];
        }
    }

    /// Runs to optimality; returns the number of pivots.
    pub fn solve(&mut self, max_pivots: usize) -> Result<usize> {
        if self.n1 == 0 || self.n2 == 0 {
            return Err(Error::Infeasible("empty marginal".into()));
        }
        self.init();
        while self.find_entering_arc() {
            self.find_join_node();
            if !self.find_leaving_arc() || !self.delta.is_finite() {
                return Err(Error::NumericalFailure("unbounded transportation cycle".into()));
            }
            self.change_flow();
            self.update_tree_structure();
            self.update_potential();
            self.pivots += 1;
            if self.pivots > max_pivots {
                return Err(Error::NonConvergent(format!("network simplex exceeded {max_pivots} pivots")));
            }
        }
        Ok(self.pivots)
    }

    /// Flow on real arc `(i, j)`.
    pub fn flow(&self, i: usize, j: usize) -> f64 {
        self.flow[i * self.n2 + j]
    }

    /// Positive flows as `(i, j, mass)`.
    pub fn plan(&self) -> Vec<(usize, usize, f64)> {
        (0..self.arc_num)
            .filter(|&e| self.flow[e] > 0.0)
            .map(|e| (e / self.n2, e % self.n2, self.flow[e]))
            .collect()
    }

    /// `Σ flow · cost` over real arcs.
    pub fn total_cost(&self) -> f64 {
        (0..self.arc_num)
            .filter(|&e| self.flow[e] > 0.0)
            .map(|e| self.flow[e] * (self.cost)(e / self.n2, e % self.n2))
            .sum()
    }

    /// Mass left on artificial arcs; zero for a balanced, solved instance.
    pub fn artificial_flow(&self) -> f64 {
        self.flow[self.arc_num..].iter().sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn permutations(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in permutations(n - 1) {
            for k in 0..n {
                let mut q = p.clone();
                q.insert(k, n - 1);
                out.push(q);
            }
        }
        out
    }

    #[test]
    fn matches_assignment_brute_force() {
        use crate::measures::rng::{seeded_rng, uniform};
        let mut rng = seeded_rng(9);
        for n in 1..=6 {
            for _ in 0..10 {
                let xs: Vec<[f64; 2]> = (0..n).map(|_| [uniform(&mut rng, -1.0, 1.0), uniform(&mut rng, -1.0, 1.0)]).collect();
                let ys: Vec<[f64; 2]> = (0..n).map(|_| [uniform(&mut rng, -1.0, 1.0), uniform(&mut rng, -1.0, 1.0)]).collect();
                let c = |i: usize, j: usize| (xs[i][0] - ys[j][0]).powi(2) + (xs[i][1] - ys[j][1]).powi(2);
                let w = vec![1.0 / n as f64; n];
                let mut ns = NetworkSimplex::new(&w, &w, c, 8.0);
                ns.solve(1_000_000).unwrap();
                let brute = permutations(n)
                    .iter()
                    .map(|p| p.iter().enumerate().map(|(i, &j)| c(i, j)).sum::<f64>() / n as f64)
                    .fold(f64::INFINITY, f64::min);
                assert!((ns.total_cost() - brute).abs() < 1e-12, "n={n}: {} vs {brute}", ns.total_cost());
                assert!(ns.artificial_flow() < 1e-14);
            }
        }
    }

    #[test]
    fn marginals_respected() {
        let a = [0.2, 0.5, 0.3];
        let b = [0.1, 0.1, 0.4, 0.4];
        let xs = [0.0f64, 1.0, 2.0];
        let ys = [0.5f64, 1.5, -1.0, 3.0];
        let mut ns = NetworkSimplex::new(&a, &b, |i, j| (xs[i] - ys[j]).abs(), 4.0);
        ns.solve(10_000).unwrap();
        for i in 0..3 {
            let row: f64 = (0..4).map(|j| ns.flow(i, j)).sum();
            assert!((row - a[i]).abs() < 1e-12);
        }
        for j in 0..4 {
            let col: f64 = (0..3).map(|i| ns.flow(i, j)).sum();
            assert!((col - b[j]).abs() < 1e-12);
        }
    }
}
