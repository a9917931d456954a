//! Small dense linear feasibility by basic-solution enumeration.
//!
//! Systems here have at most a dozen variables, so instead of a simplex
//! solver every basis of the equality rows is tried with the nonbasic
//! variables pinned at their finite bounds. The feasible set is a
//! polyhedron without lines, so it is nonempty iff one of these basic
//! solutions satisfies all bounds, and the basic feasible solutions are
//! exactly its vertices.

/// `A·x = b` with `lower ≤ x ≤ upper`; bounds may be infinite.
#[derive(Debug, Clone)]
pub struct BoxedSystem {
    pub rows: Vec<Vec<f64>>,
    pub rhs: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

const PIVOT_TOL: f64 = 1e-10;

impl BoxedSystem {
    pub fn new(vars: usize) -> Self {
        BoxedSystem {
            rows: Vec::new(),
            rhs: Vec::new(),
            lower: vec![f64::NEG_INFINITY; vars],
            upper: vec![f64::INFINITY; vars],
        }
    }

    pub fn vars(&self) -> usize {
        self.lower.len()
    }

    pub fn add_row(&mut self, row: Vec<f64>, rhs: f64) {
        assert_eq!(row.len(), self.vars());
        self.rows.push(row);
        self.rhs.push(rhs);
    }

    pub fn bound(&mut self, var: usize, lower: f64, upper: f64) {
        self.lower[var] = lower;
        self.upper[var] = upper;
    }

    pub fn is_feasible(&self, tol: f64) -> bool {
        !self.vertices(tol, Some(1)).is_empty()
    }

    /// Distinct basic feasible solutions, at most `limit` of them.
    pub fn vertices(&self, tol: f64, limit: Option<usize>) -> Vec<Vec<f64>> {
        let p = self.vars();
        let Some((rows, rhs)) = independent_rows(&self.rows, &self.rhs, tol) else {
            return Vec::new();
        };
        let r = rows.len();
        let fixed: Vec<bool> = (0..p)
            .map(|i| (self.upper[i] - self.lower[i]).abs() <= tol)
            .collect();
        let candidates: Vec<usize> = (0..p).filter(|&i| !fixed[i]).collect();
        let mut found: Vec<Vec<f64>> = Vec::new();
        if r > candidates.len() {
            return found;
        }
        let scale = 1.0 + rhs.iter().fold(0.0f64, |m, b| m.max(b.abs()));

        for basis in combinations(&candidates, r) {
            let in_basis = {
                let mut mask = vec![false; p];
                for &b in &basis {
                    mask[b] = true;
                }
                mask
            };
            let nonbasic: Vec<usize> = (0..p).filter(|i| !in_basis[*i]).collect();
            // every nonbasic variable needs a finite bound to sit on
            let choices: Vec<Vec<f64>> = nonbasic
                .iter()
                .map(|&i| {
                    if fixed[i] {
                        vec![self.lower[i]]
                    } else {
                        [self.lower[i], self.upper[i]]
                            .into_iter()
                            .filter(|b| b.is_finite())
                            .collect()
                    }
                })
                .collect();
            if choices.iter().any(|c| c.is_empty()) {
                continue;
            }
            let basis_matrix: Vec<Vec<f64>> = rows
                .iter()
                .map(|row| basis.iter().map(|&b| row[b]).collect())
                .collect();
            let Some(lu) = Lu::factor(basis_matrix) else {
                continue;
            };
            let mut pick = vec![0usize; nonbasic.len()];
            loop {
                let mut x = vec![0.0; p];
                for (slot, &i) in nonbasic.iter().enumerate() {
                    x[i] = choices[slot][pick[slot]];
                }
                let reduced: Vec<f64> = rows
                    .iter()
                    .zip(&rhs)
                    .map(|(row, b)| b - nonbasic.iter().map(|&i| row[i] * x[i]).sum::<f64>())
                    .collect();
                let xb = lu.solve(&reduced);
                let mut ok = true;
                for (slot, &b) in basis.iter().enumerate() {
                    let v = xb[slot];
                    if v < self.lower[b] - tol * scale || v > self.upper[b] + tol * scale {
                        ok = false;
                        break;
                    }
                    x[b] = v.clamp(self.lower[b], self.upper[b]);
                }
                if ok && !found.iter().any(|f| max_distance(f, &x) <= 1e-9 * scale) {
                    found.push(x);
                    if limit.is_some_and(|l| found.len() >= l) {
                        return found;
                    }
                }
                if !advance(&mut pick, &choices) {
                    break;
                }
            }
        }
        found
    }
}

fn advance(pick: &mut [usize], choices: &[Vec<f64>]) -> bool {
    for slot in 0..pick.len() {
        pick[slot] += 1;
        if pick[slot] < choices[slot].len() {
            return true;
        }
        pick[slot] = 0;
    }
    false
}

pub fn max_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

/// All `k`-subsets of `items`, in lexicographic order.
pub fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    fn rec(items: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            if items.len() - i < k - cur.len() {
                break;
            }
            cur.push(items[i]);
            rec(items, k, i + 1, cur, out);
            cur.pop();
        }
    }
    rec(items, k, 0, &mut current, &mut out);
    out
}

/// Row-reduce `[A | b]`, returning a maximal independent set of rows, or
/// `None` when the equalities are inconsistent.
fn independent_rows(rows: &[Vec<f64>], rhs: &[f64], tol: f64) -> Option<(Vec<Vec<f64>>, Vec<f64>)> {
    let mut a: Vec<Vec<f64>> = rows.to_vec();
    let mut b: Vec<f64> = rhs.to_vec();
    let m = a.len();
    if m == 0 {
        return Some((Vec::new(), Vec::new()));
    }
    let p = a[0].len();
    let scale = a
        .iter()
        .flat_map(|r| r.iter())
        .fold(0.0f64, |s, v| s.max(v.abs()))
        .max(1e-300);
    let mut rank = 0;
    for col in 0..p {
        if rank == m {
            break;
        }
        let (best, val) = (rank..m)
            .map(|i| (i, a[i][col].abs()))
            .fold((rank, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if val <= PIVOT_TOL * scale {
            continue;
        }
        a.swap(rank, best);
        b.swap(rank, best);
        for i in 0..m {
            if i != rank {
                let f = a[i][col] / a[rank][col];
                if f != 0.0 {
                    for c in col..p {
                        a[i][c] -= f * a[rank][c];
                    }
                    b[i] -= f * b[rank];
                }
            }
        }
        rank += 1;
    }
    let bscale = 1.0 + rhs.iter().fold(0.0f64, |s, v| s.max(v.abs()));
    if b[rank..].iter().any(|v| v.abs() > tol * bscale) {
        return None;
    }
    a.truncate(rank);
    b.truncate(rank);
    Some((a, b))
}

/// Numerical rank of a set of row vectors.
pub fn rank(rows: &[Vec<f64>], tol: f64) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let zeros = vec![0.0; rows.len()];
    independent_rows(rows, &zeros, tol).map_or(0, |(r, _)| r.len())
}

/// Basis of `{c : Σ_j c_j·rows[j] = 0}`, i.e. the linear dependencies among
/// the given vectors.
pub fn dependencies(vectors: &[Vec<f64>], tol: f64) -> Vec<Vec<f64>> {
    let k = vectors.len();
    if k == 0 {
        return Vec::new();
    }
    let m = vectors[0].len();
    // matrix with the vectors as columns, reduced to row echelon form
    let mut a: Vec<Vec<f64>> = (0..m).map(|i| vectors.iter().map(|v| v[i]).collect()).collect();
    let scale = vectors
        .iter()
        .flat_map(|v| v.iter())
        .fold(0.0f64, |s, x| s.max(x.abs()))
        .max(1e-300);
    let mut pivots: Vec<usize> = Vec::new();
    let mut row = 0;
    for col in 0..k {
        if row == m {
            break;
        }
        let (best, val) = (row..m)
            .map(|i| (i, a[i][col].abs()))
            .fold((row, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if val <= tol * scale {
            continue;
        }
        a.swap(row, best);
        let p = a[row][col];
        for c in col..k {
            a[row][c] /= p;
        }
        for i in 0..m {
            if i != row {
                let f = a[i][col];
                if f != 0.0 {
                    for c in col..k {
                        a[i][c] -= f * a[row][c];
                    }
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    let free: Vec<usize> = (0..k).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut c = vec![0.0; k];
            c[f] = 1.0;
            for (r, &p) in pivots.iter().enumerate() {
                c[p] = -a[r][f];
            }
            c
        })
        .collect()
}

/// Dense LU with partial pivoting for small square systems.
#[derive(Debug, Clone)]
pub struct Lu {
    lu: Vec<Vec<f64>>,
    perm: Vec<usize>,
}

impl Lu {
    pub fn factor(mut a: Vec<Vec<f64>>) -> Option<Self> {
        let n = a.len();
        let scale = a
            .iter()
            .flat_map(|r| r.iter())
            .fold(0.0f64, |s, v| s.max(v.abs()));
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let (best, val) = (k..n)
                .map(|i| (i, a[i][k].abs()))
                .fold((k, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            if val <= PIVOT_TOL * scale || val == 0.0 {
                return None;
            }
            a.swap(k, best);
            perm.swap(k, best);
            for i in (k + 1)..n {
                let f = a[i][k] / a[k][k];
                a[i][k] = f;
                for j in (k + 1)..n {
                    a[i][j] -= f * a[k][j];
                }
            }
        }
        Some(Lu { lu: a, perm })
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.lu.len();
        let mut y: Vec<f64> = self.perm.iter().map(|&i| b[i]).collect();
        for i in 0..n {
            for j in 0..i {
                y[i] -= self.lu[i][j] * y[j];
            }
        }
        for i in (0..n).rev() {
            for j in (i + 1)..n {
                y[i] -= self.lu[i][j] * y[j];
            }
            y[i] /= self.lu[i][i];
        }
        y
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Barycentric representations of a point in the unit square.
    fn square_system(x: f64, y: f64) -> BoxedSystem {
        let verts = [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]];
        let mut s = BoxedSystem::new(4);
        s.add_row(verts.iter().map(|v| v[0]).collect(), x);
        s.add_row(verts.iter().map(|v| v[1]).collect(), y);
        s.add_row(vec![1.0; 4], 1.0);
        for i in 0..4 {
            s.bound(i, 0.0, f64::INFINITY);
        }
        s
    }

    #[test]
    fn square_point_has_two_vertex_representations() {
        let v = square_system(0.5, 0.25).vertices(1e-9, None);
        assert_eq!(v.len(), 2);
        for sol in &v {
            let mut w = sol.clone();
            w.sort_by(|a, b| b.total_cmp(a));
            assert!(max_distance(&w, &[0.5, 0.25, 0.25, 0.0]) < 1e-12);
        }
    }

    #[test]
    fn exterior_point_is_infeasible() {
        assert!(!square_system(1.2, 0.5).is_feasible(1e-9));
        assert!(square_system(1.0, 1.0).is_feasible(1e-9));
    }

    #[test]
    fn inconsistent_equalities_are_infeasible() {
        let mut s = BoxedSystem::new(2);
        s.add_row(vec![1.0, 1.0], 1.0);
        s.add_row(vec![2.0, 2.0], 3.0);
        s.bound(0, 0.0, 1.0);
        s.bound(1, 0.0, 1.0);
        assert!(!s.is_feasible(1e-9));
    }

    #[test]
    fn combinations_count() {
        let items: Vec<usize> = (0..6).collect();
        assert_eq!(combinations(&items, 3).len(), 20);
        assert_eq!(combinations(&items, 0), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn square_vertices_have_one_affine_dependency() {
        let lifted = vec![vec![0.0, 0.0, 1.0], vec![1.0, 0.0, 1.0], vec![0.0, 1.0, 1.0], vec![1.0, 1.0, 1.0]];
        let deps = dependencies(&lifted, 1e-10);
        assert_eq!(deps.len(), 1);
        let c = &deps[0];
        for i in 0..3 {
            let s: f64 = lifted.iter().zip(c).map(|(v, w)| v[i] * w).sum();
            assert!(s.abs() < 1e-14);
        }
        assert!((c[0] - c[3]).abs() < 1e-14 && (c[1] + c[0]).abs() < 1e-14 && (c[2] + c[0]).abs() < 1e-14);
    }

    #[test]
    fn rank_of_dependent_rows() {
        let rows = vec![vec![1.0, 0.0, 1.0], vec![0.0, 1.0, 1.0], vec![1.0, 1.0, 2.0]];
        assert_eq!(rank(&rows, 1e-9), 2);
    }
}
