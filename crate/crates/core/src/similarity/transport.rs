//! Exact solver for the balanced transportation problem
//!
//! ```text
//! minimize   sum_ij flow_ij * cost_ij
//! subject to sum_j flow_ij = supply_i,  sum_i flow_ij = demand_j,  flow >= 0
//! ```
//!
//! Transportation simplex on a spanning-tree basis: a northwest-corner start
//! gives `m + n - 1` basic cells, potentials are propagated over the tree,
//! and the most negative reduced cost enters. The leaving cell is the
//! minimum-flow backward edge on the cycle closed by the entering cell.
//! Long runs of degenerate pivots switch the pricing to Bland's rule.

#[derive(Debug, Clone, PartialEq)]
pub struct TransportSolution {
    /// Row-major `m x n` flow matrix.
    pub flow: Vec<f64>,
    pub cost: f64,
    pub pivots: usize,
    /// False only if the pivot limit was hit; the flow is still feasible.
    pub optimal: bool,
}

struct Basis {
    m: usize,
    n: usize,
    cells: Vec<usize>,
    flow: Vec<f64>,
    basic: Vec<bool>,
}

impl Basis {
    fn northwest_corner(supply: &[f64], demand: &[f64]) -> Self {
        let (m, n) = (supply.len(), demand.len());
        let mut s = supply.to_vec();
        let mut d = demand.to_vec();
        let mut flow = vec![0.0; m * n];
        let mut basic = vec![false; m * n];
        let mut cells = Vec::with_capacity(m + n - 1);
        let (mut i, mut j) = (0, 0);
        loop {
            let x = s[i].min(d[j]).max(0.0);
            let cell = i * n + j;
            flow[cell] = x;
            basic[cell] = true;
            cells.push(cell);
            s[i] -= x;
            d[j] -= x;
            if i == m - 1 && j == n - 1 {
                break;
            }
            if j == n - 1 || (i < m - 1 && s[i] <= d[j]) {
                i += 1;
            } else {
                j += 1;
            }
        }
        Self { m, n, cells, flow, basic }
    }

    /// Node ids: rows are `0..m`, columns are `m..m+n`.
    fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.m + self.n];
        for &cell in &self.cells {
            let (i, j) = (cell / self.n, cell % self.n);
            adj[i].push((self.m + j, cell));
            adj[self.m + j].push((i, cell));
        }
        adj
    }

    fn potentials(&self, adj: &[Vec<(usize, usize)>], cost: &[f64]) -> Vec<f64> {
        let mut pot = vec![f64::NAN; self.m + self.n];
        pot[0] = 0.0;
        let mut stack = vec![0usize];
        while let Some(node) = stack.pop() {
            for &(next, cell) in &adj[node] {
                if pot[next].is_nan() {
                    // u_i + v_j = c_ij on every basic cell
                    pot[next] = cost[cell] - pot[node];
                    stack.push(next);
                }
            }
        }
        pot
    }

    /// Tree path from column node of `j` to row node `i`, as cells.
    fn path(&self, adj: &[Vec<(usize, usize)>], i: usize, j: usize) -> Vec<usize> {
        let total = self.m + self.n;
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; total];
        let mut seen = vec![false; total];
        seen[i] = true;
        let mut queue = std::collections::VecDeque::from([i]);
        while let Some(node) = queue.pop_front() {
            for &(next, cell) in &adj[node] {
                if !seen[next] {
                    seen[next] = true;
                    parent[next] = Some((node, cell));
                    queue.push_back(next);
                }
            }
        }
        let mut cells = Vec::new();
        let mut node = self.m + j;
        while node != i {
            let (prev, cell) = parent[node].expect("basis is a spanning tree");
            cells.push(cell);
            node = prev;
        }
        cells
    }
}

/// Solves the transportation problem. `supply` and `demand` must be
/// non-negative with equal totals (up to rounding); `cost` is row-major.
pub fn solve_transport(supply: &[f64], demand: &[f64], cost: &[f64]) -> TransportSolution {
    let (m, n) = (supply.len(), demand.len());
    assert!(m > 0 && n > 0, "empty marginals");
    assert_eq!(cost.len(), m * n, "cost matrix shape");

    let mut basis = Basis::northwest_corner(supply, demand);
    let scale = cost.iter().fold(0.0f64, |a, c| a.max(c.abs()));
    let eps = 1e-12 * (1.0 + scale);
    let max_pivots = 50 * m * n + 1000;
    let mut pivots = 0;
    let mut degenerate_run = 0;
    let mut optimal = false;

    while pivots < max_pivots {
        let adj = basis.adjacency();
        let pot = basis.potentials(&adj, cost);
        let bland = degenerate_run > m * n;
        let mut entering = None;
        let mut best = -eps;
        for cell in 0..m * n {
            if basis.basic[cell] {
                continue;
            }
            let (i, j) = (cell / n, cell % n);
            let reduced = cost[cell] - pot[i] - pot[m + j];
            if reduced < best {
                entering = Some(cell);
                if bland {
                    break;
                }
                best = reduced;
            }
        }
        let Some(enter) = entering else {
            optimal = true;
            break;
        };
        let (ei, ej) = (enter / n, enter % n);
        let path = basis.path(&adj, ei, ej);
        // cells on the path alternate -, +, -, ... starting next to the entering column
        let mut theta = f64::INFINITY;
        let mut leave = usize::MAX;
        for &cell in path.iter().step_by(2) {
            let f = basis.flow[cell];
            if f < theta || (f == theta && bland && cell < leave) {
                theta = f;
                leave = cell;
            }
        }
        basis.flow[enter] = theta;
        for (k, &cell) in path.iter().enumerate() {
            if k % 2 == 0 {
                basis.flow[cell] -= theta;
            } else {
                basis.flow[cell] += theta;
            }
        }
        basis.flow[leave] = 0.0;
        basis.basic[leave] = false;
        basis.basic[enter] = true;
        let slot = basis.cells.iter().position(|&c| c == leave).expect("leaving cell is basic");
        basis.cells[slot] = enter;
        degenerate_run = if theta == 0.0 { degenerate_run + 1 } else { 0 };
        pivots += 1;
    }

    let total = basis
        .cells
        .iter()
        .map(|&c| basis.flow[c] * cost[c])
        .sum::<f64>();
    TransportSolution {
        flow: basis.flow,
        cost: total,
        pivots,
        optimal,
    }
}
