//! Lowest eigenpairs of a real symmetric matrix.
//!
//! Every stencil here produces a matrix whose off-diagonal pattern is a set
//! of disjoint paths (one path for the compact stencil, an even and an odd
//! path for the wide one). Such a matrix is tridiagonal after permutation,
//! so eigenvalues come from Sturm-count bisection and eigenvectors from
//! inverse iteration, both `O(n)` per pair. Anything else falls back to a
//! dense symmetric decomposition.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

/// One eigenpair plus `‖Aψ − Eψ‖ / ‖ψ‖`.
#[derive(Clone, Debug)]
pub struct EigenPair {
    pub value: f64,
    pub vector: DVector<f64>,
    pub residual: f64,
}

/// A symmetric tridiagonal block: `diag`, `off` and the matrix indices it
/// occupies, in path order.
#[derive(Clone, Debug)]
struct Chain {
    index: Vec<usize>,
    diag: Vec<f64>,
    off: Vec<f64>,
}

/// Splits the matrix into disjoint paths, or `None` if some node has more
/// than two neighbours or the pattern has a cycle.
fn chains(a: &DMatrix<f64>) -> Option<Vec<Chain>> {
    let n = a.nrows();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        for j in i + 1..n {
            if a[(i, j)] != 0.0 {
                if adj[i].len() == 2 || adj[j].len() == 2 {
                    return None;
                }
                adj[i].push(j);
                adj[j].push(i);
            }
        }
    }
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] || adj[start].len() > 1 {
            continue;
        }
        let mut index = vec![start];
        seen[start] = true;
        let mut prev = usize::MAX;
        let mut cur = start;
        while let Some(&next) = adj[cur].iter().find(|&&v| v != prev) {
            seen[next] = true;
            index.push(next);
            prev = cur;
            cur = next;
        }
        let diag = index.iter().map(|&i| a[(i, i)]).collect();
        let off = index.windows(2).map(|w| a[(w[0], w[1])]).collect();
        out.push(Chain { index, diag, off });
    }
    // Nodes never reached from an endpoint lie on a cycle.
    seen.iter().all(|&s| s).then_some(out)
}

impl Chain {
    fn len(&self) -> usize {
        self.diag.len()
    }

    /// Number of eigenvalues strictly below `x`.
    fn count_below(&self, x: f64) -> usize {
        let tiny = f64::MIN_POSITIVE.sqrt();
        let mut count = 0;
        let mut q = 1.0;
        for i in 0..self.len() {
            let e2 = if i == 0 { 0.0 } else { self.off[i - 1] * self.off[i - 1] };
            q = self.diag[i] - x - e2 / q;
            if q == 0.0 {
                q = -tiny;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    fn gershgorin(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..self.len() {
            let r = if i > 0 { self.off[i - 1].abs() } else { 0.0 }
                + if i + 1 < self.len() { self.off[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    /// The `j`-th smallest eigenvalue (0-based), bisected to machine precision.
    fn eigenvalue(&self, j: usize) -> f64 {
        let (mut lo, mut hi) = self.gershgorin();
        let pad = f64::EPSILON * (lo.abs().max(hi.abs()) + 1.0);
        lo -= pad;
        hi += pad;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.count_below(mid) > j {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Eigenvector for `lambda` by inverse iteration.
    fn eigenvector(&self, lambda: f64) -> Vec<f64> {
        let n = self.len();
        if n == 1 {
            return vec![1.0];
        }
        let scale = self
            .diag
            .iter()
            .chain(self.off.iter())
            .fold(0.0f64, |m, v| m.max(v.abs()));
        let lu = TridiagonalLu::new(&self.diag, &self.off, lambda, f64::EPSILON * scale.max(1.0));
        let mut v: Vec<f64> = (0..n).map(|i| 1.0 + 0.5 * ((i as f64) * 0.7548).sin()).collect();
        for _ in 0..4 {
            lu.solve(&mut v);
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            v.iter_mut().for_each(|x| *x /= norm);
        }
        v
    }
}

/// LU factorization of `T − λI` with partial pivoting (the upper factor
/// gains a second super-diagonal).
struct TridiagonalLu {
    d: Vec<f64>,
    du: Vec<f64>,
    du2: Vec<f64>,
    l: Vec<f64>,
    swap: Vec<bool>,
}

impl TridiagonalLu {
    fn new(diag: &[f64], off: &[f64], lambda: f64, floor: f64) -> Self {
        let n = diag.len();
        let mut d: Vec<f64> = diag.iter().map(|v| v - lambda).collect();
        let mut dl = off.to_vec();
        let mut du = off.to_vec();
        let mut du2 = vec![0.0; n.saturating_sub(2)];
        let mut l = vec![0.0; n - 1];
        let mut swap = vec![false; n - 1];
        for i in 0..n - 1 {
            if d[i].abs() >= dl[i].abs() {
                if d[i] == 0.0 {
                    d[i] = floor;
                }
                let f = dl[i] / d[i];
                l[i] = f;
                d[i + 1] -= f * du[i];
            } else {
                swap[i] = true;
                let f = d[i] / dl[i];
                l[i] = f;
                d[i] = dl[i];
                let t = d[i + 1];
                d[i + 1] = du[i] - f * t;
                du[i] = t;
                if i + 2 < n {
                    du2[i] = du[i + 1];
                    du[i + 1] = -f * du2[i];
                }
            }
            dl[i] = 0.0;
        }
        if d[n - 1] == 0.0 {
            d[n - 1] = floor;
        }
        for v in d.iter_mut() {
            if v.abs() < floor {
                *v = floor.copysign(*v);
            }
        }
        TridiagonalLu { d, du, du2, l, swap }
    }

    fn solve(&self, b: &mut [f64]) {
        let n = b.len();
        for i in 0..n - 1 {
            if self.swap[i] {
                b.swap(i, i + 1);
                b[i + 1] -= self.l[i] * b[i];
            } else {
                b[i + 1] -= self.l[i] * b[i];
            }
        }
        for i in (0..n).rev() {
            let mut s = b[i];
            if i + 1 < n {
                s -= self.du[i] * b[i + 1];
            }
            if i + 2 < n {
                s -= self.du2[i] * b[i + 2];
            }
            b[i] = s / self.d[i];
        }
    }
}

fn residual(a: &DMatrix<f64>, value: f64, v: &DVector<f64>) -> f64 {
    (a * v - v * value).norm() / v.norm()
}

/// The `k` smallest eigenpairs of the symmetric matrix `a`, ascending.
/// `a` must already be exactly symmetric.
pub fn lowest_eigenpairs(a: &DMatrix<f64>, k: usize) -> Vec<EigenPair> {
    let n = a.nrows();
    let k = k.min(n);
    let mut pairs = match chains(a) {
        Some(chains) => {
            let mut cand: Vec<(f64, usize, usize)> = Vec::new();
            for (c, chain) in chains.iter().enumerate() {
                for j in 0..k.min(chain.len()) {
                    cand.push((chain.eigenvalue(j), c, j));
                }
            }
            cand.sort_by(|x, y| x.0.total_cmp(&y.0));
            cand.truncate(k);
            cand.into_iter()
                .map(|(value, c, _)| {
                    let chain = &chains[c];
                    let local = chain.eigenvector(value);
                    let mut vector = DVector::zeros(n);
                    for (&i, v) in chain.index.iter().zip(local) {
                        vector[i] = v;
                    }
                    EigenPair {
                        value,
                        vector,
                        residual: 0.0,
                    }
                })
                .collect::<Vec<_>>()
        }
        None => {
            let eig = SymmetricEigen::new(a.clone());
            let mut order: Vec<usize> = (0..n).collect();
            order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
            order
                .into_iter()
                .take(k)
                .map(|i| EigenPair {
                    value: eig.eigenvalues[i],
                    vector: eig.eigenvectors.column(i).into_owned(),
                    residual: 0.0,
                })
                .collect()
        }
    };
    for p in pairs.iter_mut() {
        p.residual = residual(a, p.value, &p.vector);
    }
    pairs
}
