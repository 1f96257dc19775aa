//! Sparse symmetric solvers for the reduced stiffness system.
//!
//! Primary path: skyline (active-column) LDL^T factorization, which suits
//! the strip-like meshes here once dofs are ordered along the length.
//! Fallback: Jacobi-preconditioned conjugate gradients for systems past a
//! configurable size threshold.

use crate::error::{Error, Result};

/// Compressed sparse rows, full (not triangular) symmetric pattern.
#[derive(Debug, Clone)]
pub struct Csr {
    pub n: usize,
    pub row_ptr: Vec<usize>,
    pub cols: Vec<u32>,
    pub vals: Vec<f64>,
}

impl Csr {
    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        debug_assert_eq!(x.len(), self.n);
        for (i, yi) in y.iter_mut().enumerate() {
            let mut s = 0.0;
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                s += self.vals[k] * x[self.cols[k] as usize];
            }
            *yi = s;
        }
    }

    pub fn diagonal(&self) -> Vec<f64> {
        let mut d = vec![0.0; self.n];
        for i in 0..self.n {
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                if self.cols[k] as usize == i {
                    d[i] = self.vals[k];
                }
            }
        }
        d
    }
}

/// Four-accumulator dot product: fixed evaluation order (deterministic)
/// while breaking the serial dependency chain for the optimizer.
#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len();
    let mut acc = [0.0f64; 4];
    let chunks = n / 4;
    for c in 0..chunks {
        let i = 4 * c;
        acc[0] += a[i] * b[i];
        acc[1] += a[i + 1] * b[i + 1];
        acc[2] += a[i + 2] * b[i + 2];
        acc[3] += a[i + 3] * b[i + 3];
    }
    let mut tail = 0.0;
    for i in 4 * chunks..n {
        tail += a[i] * b[i];
    }
    (acc[0] + acc[1]) + (acc[2] + acc[3]) + tail
}

/// Skyline storage: column j keeps rows `first[j]..=j` contiguously.
pub struct Skyline {
    n: usize,
    first: Vec<usize>,
    ptr: Vec<usize>,
    a: Vec<f64>,
    factorized: bool,
}

impl Skyline {
    /// Allocate from per-column first-row indices.
    pub fn new(first: Vec<usize>) -> Skyline {
        let n = first.len();
        let mut ptr = Vec::with_capacity(n + 1);
        let mut total = 0usize;
        for (j, &f) in first.iter().enumerate() {
            ptr.push(total);
            total += j - f + 1;
        }
        ptr.push(total);
        Skyline {
            n,
            first,
            ptr,
            a: vec![0.0; total],
            factorized: false,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Stored entries (profile size).
    pub fn profile(&self) -> usize {
        self.a.len()
    }

    /// Accumulate into K[r][j] for r <= j inside the profile.
    pub fn add(&mut self, r: usize, j: usize, v: f64) {
        debug_assert!(r <= j && r >= self.first[j]);
        self.a[self.ptr[j] + (r - self.first[j])] += v;
    }

    /// In-place LDL^T. Fails on a non-positive pivot, which for an
    /// elastic stiffness matrix means an unconstrained mechanism.
    pub fn factorize(&mut self) -> Result<()> {
        for j in 0..self.n {
            let fj = self.first[j];
            // g_rj = K_rj - sum_k L_kr g_kj, done with column dots.
            for r in fj..j {
                let fr = self.first[r];
                let m = fr.max(fj);
                let len = r - m;
                if len > 0 {
                    let (head, tail) = self.a.split_at(self.ptr[j]);
                    let col_r = &head[self.ptr[r] + (m - fr)..self.ptr[r] + (m - fr) + len];
                    let col_j = &tail[m - fj..m - fj + len];
                    let s = dot(col_r, col_j);
                    self.a[self.ptr[j] + (r - fj)] -= s;
                }
            }
            // Scale to L and reduce the diagonal.
            let mut djj = self.a[self.ptr[j] + (j - fj)];
            for r in fj..j {
                let g = self.a[self.ptr[j] + (r - fj)];
                let dr = self.a[self.ptr[r] + (r - self.first[r])];
                let l = g / dr;
                self.a[self.ptr[j] + (r - fj)] = l;
                djj -= l * g;
            }
            self.a[self.ptr[j] + (j - fj)] = djj;
            if !(djj > 0.0) {
                return Err(Error::Mechanism(format!(
                    "non-positive pivot {djj:.3e} at reduced dof {j} of {}",
                    self.n
                )));
            }
        }
        self.factorized = true;
        Ok(())
    }

    /// Solve L D L^T u = f in place.
    pub fn solve(&self, f: &mut [f64]) {
        assert!(self.factorized, "solve before factorize");
        let n = self.n;
        // Forward: y_j = f_j - L[:,j] . y
        for j in 0..n {
            let fj = self.first[j];
            let len = j - fj;
            if len > 0 {
                let col = &self.a[self.ptr[j]..self.ptr[j] + len];
                f[j] -= dot(col, &f[fj..j]);
            }
        }
        // Diagonal scale.
        for j in 0..n {
            f[j] /= self.a[self.ptr[j] + (j - self.first[j])];
        }
        // Backward: subtract L column contributions.
        for j in (0..n).rev() {
            let fj = self.first[j];
            let uj = f[j];
            let col = &self.a[self.ptr[j]..self.ptr[j] + (j - fj)];
            for (offset, &l) in col.iter().enumerate() {
                f[fj + offset] -= l * uj;
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct SolverOptions {
    /// Free-dof count beyond which the iterative fallback replaces the
    /// direct factorization.
    pub cg_threshold_dofs: usize,
    pub cg_rel_tolerance: f64,
    pub cg_max_iterations: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            cg_threshold_dofs: 150_000,
            cg_rel_tolerance: 1.0e-10,
            cg_max_iterations: 50_000,
        }
    }
}

/// Jacobi-preconditioned conjugate gradients on a reduced CSR system.
pub fn conjugate_gradient(
    k: &Csr,
    rhs: &[f64],
    opts: &SolverOptions,
) -> Result<(Vec<f64>, usize)> {
    let n = k.n;
    let diag = k.diagonal();
    let mut precond = vec![0.0; n];
    for i in 0..n {
        if !(diag[i] > 0.0) {
            return Err(Error::Mechanism(format!(
                "non-positive diagonal {:.3e} at reduced dof {i}",
                diag[i]
            )));
        }
        precond[i] = 1.0 / diag[i];
    }

    let norm_b = dot(rhs, rhs).sqrt();
    if norm_b == 0.0 {
        return Ok((vec![0.0; n], 0));
    }

    let mut x = vec![0.0; n];
    let mut r = rhs.to_vec();
    let mut z: Vec<f64> = r.iter().zip(&precond).map(|(ri, pi)| ri * pi).collect();
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    let mut ap = vec![0.0; n];

    for iter in 0..opts.cg_max_iterations {
        k.matvec(&p, &mut ap);
        let alpha = rz / dot(&p, &ap);
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        let norm_r = dot(&r, &r).sqrt();
        if norm_r <= opts.cg_rel_tolerance * norm_b {
            return Ok((x, iter + 1));
        }
        for i in 0..n {
            z[i] = r[i] * precond[i];
        }
        let rz_next = dot(&r, &z);
        let beta = rz_next / rz;
        rz = rz_next;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    Err(Error::NonConvergence(format!(
        "cg stalled after {} iterations (residual ratio {:.3e})",
        opts.cg_max_iterations,
        {
            let mut tmp = vec![0.0; n];
            k.matvec(&x, &mut tmp);
            let res: f64 = tmp
                .iter()
                .zip(rhs)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            res / norm_b
        }
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Dense SPD test matrix: diagonally dominant with a known band.
    fn small_system() -> (Csr, Vec<usize>) {
        // K = tridiagonal [ -1, 4, -1 ] of size 8
        let n = 8;
        let mut row_ptr = vec![0usize];
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        for i in 0..n {
            if i > 0 {
                cols.push((i - 1) as u32);
                vals.push(-1.0);
            }
            cols.push(i as u32);
            vals.push(4.0);
            if i + 1 < n {
                cols.push((i + 1) as u32);
                vals.push(-1.0);
            }
            row_ptr.push(cols.len());
        }
        let first = (0..n).map(|j: usize| j.saturating_sub(1)).collect();
        (
            Csr {
                n,
                row_ptr,
                cols,
                vals,
            },
            first,
        )
    }

    #[test]
    fn skyline_solves_tridiagonal() {
        let (csr, first) = small_system();
        let mut sky = Skyline::new(first);
        for i in 0..csr.n {
            for k in csr.row_ptr[i]..csr.row_ptr[i + 1] {
                let j = csr.cols[k] as usize;
                if i <= j {
                    sky.add(i, j, csr.vals[k]);
                }
            }
        }
        sky.factorize().unwrap();
        let rhs: Vec<f64> = (0..8).map(|i| (i as f64) - 3.5).collect();
        let mut u = rhs.clone();
        sky.solve(&mut u);
        let mut check = vec![0.0; 8];
        csr.matvec(&u, &mut check);
        for i in 0..8 {
            assert!((check[i] - rhs[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn skyline_rejects_indefinite() {
        let mut sky = Skyline::new(vec![0, 0]);
        sky.add(0, 0, 1.0);
        sky.add(0, 1, 2.0);
        sky.add(1, 1, 1.0); // eigenvalues 3, -1
        assert!(matches!(sky.factorize(), Err(Error::Mechanism(_))));
    }

    #[test]
    fn cg_matches_direct() {
        let (csr, first) = small_system();
        let mut sky = Skyline::new(first);
        for i in 0..csr.n {
            for k in csr.row_ptr[i]..csr.row_ptr[i + 1] {
                let j = csr.cols[k] as usize;
                if i <= j {
                    sky.add(i, j, csr.vals[k]);
                }
            }
        }
        sky.factorize().unwrap();
        let rhs: Vec<f64> = (0..8).map(|i| ((i * 7 + 3) % 5) as f64).collect();
        let mut direct = rhs.clone();
        sky.solve(&mut direct);
        let (iterative, iters) = conjugate_gradient(&csr, &rhs, &SolverOptions::default()).unwrap();
        assert!(iters > 0);
        for i in 0..8 {
            assert!((direct[i] - iterative[i]).abs() < 1e-8);
        }
    }

    #[test]
    fn dot_tail_handling() {
        let a = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0];
        let b = [2.0, 2.0, 2.0, 2.0, 2.0, 2.0, 2.0];
        assert_eq!(dot(&a, &b), 56.0);
        assert_eq!(dot(&a[..0], &b[..0]), 0.0);
    }
}
