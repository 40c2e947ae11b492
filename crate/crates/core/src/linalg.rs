//! Dense matrices and restarted GMRES.

/// Square or rectangular row-major matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    /// Builds a matrix from row-major data.
    ///
    /// # Panics
    /// If `data.len() != rows * cols`.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), rows * cols, "data length does not match shape");
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    /// `y = A x`.
    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.rows];
        self.matvec_into(x, &mut y);
        y
    }

    pub fn matvec_into(&self, x: &[f64], y: &mut [f64]) {
        assert_eq!(x.len(), self.cols);
        assert_eq!(y.len(), self.rows);
        for (yi, row) in y.iter_mut().zip(self.data.chunks_exact(self.cols)) {
            *yi = dot(row, x);
        }
    }

    /// `A <- a A + b I`.
    pub fn scale_add_identity(&mut self, a: f64, b: f64) {
        self.data.iter_mut().for_each(|v| *v *= a);
        for i in 0..self.rows.min(self.cols) {
            self[(i, i)] += b;
        }
    }
}

impl std::ops::Index<(usize, usize)> for DenseMatrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

/// A square linear map applied by value.
pub trait LinearOperator {
    fn dim(&self) -> usize;
    fn apply(&self, x: &[f64], y: &mut [f64]);
}

impl LinearOperator for DenseMatrix {
    fn dim(&self) -> usize {
        assert_eq!(self.rows, self.cols, "operator must be square");
        self.rows
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        self.matvec_into(x, y);
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GmresOptions {
    /// Relative residual target `||Ax - b|| / ||b||`.
    pub tol: f64,
    pub restart: usize,
    /// Cap on the total number of inner iterations.
    pub max_iter: usize,
}

impl Default for GmresOptions {
    fn default() -> Self {
        Self { tol: 1e-12, restart: 200, max_iter: 500 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveReport {
    pub iterations: usize,
    /// True relative residual of the returned iterate.
    pub residual: f64,
    pub converged: bool,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn true_residual(op: &dyn LinearOperator, b: &[f64], x: &[f64], r: &mut [f64]) -> f64 {
    op.apply(x, r);
    for (ri, bi) in r.iter_mut().zip(b) {
        *ri = bi - *ri;
    }
    norm(r)
}

/// Restarted GMRES with modified Gram-Schmidt plus one reorthogonalization pass.
///
/// Returns the last iterate even when the iteration cap is hit; check
/// `SolveReport::converged`.
pub fn gmres(op: &dyn LinearOperator, b: &[f64], x0: Option<&[f64]>, opts: GmresOptions) -> (Vec<f64>, SolveReport) {
    let n = op.dim();
    assert_eq!(b.len(), n);
    let bnorm = norm(b);
    let mut x = x0.map_or_else(|| vec![0.0; n], <[f64]>::to_vec);
    if bnorm == 0.0 {
        x.iter_mut().for_each(|v| *v = 0.0);
        return (x, SolveReport { iterations: 0, residual: 0.0, converged: true });
    }
    let mut r = vec![0.0; n];
    let mut rel = true_residual(op, b, &x, &mut r) / bnorm;
    let mut total = 0;
    let m = opts.restart.max(1);
    let mut w = vec![0.0; n];

    while rel > opts.tol && total < opts.max_iter {
        let beta = norm(&r);
        let mut basis: Vec<Vec<f64>> = vec![r.iter().map(|v| v / beta).collect()];
        // Hessenberg columns, already rotated into upper-triangular form
        let mut hcols: Vec<Vec<f64>> = Vec::new();
        let mut cs: Vec<f64> = Vec::new();
        let mut sn: Vec<f64> = Vec::new();
        let mut g = vec![beta];
        let mut breakdown = false;

        while hcols.len() < m && total < opts.max_iter {
            let k = hcols.len();
            op.apply(&basis[k], &mut w);
            let mut h = vec![0.0; k + 2];
            for _pass in 0..2 {
                for (j, v) in basis.iter().enumerate() {
                    let c = dot(&w, v);
                    h[j] += c;
                    w.iter_mut().zip(v).for_each(|(wi, vi)| *wi -= c * vi);
                }
            }
            let hn = norm(&w);
            h[k + 1] = hn;
            for j in 0..k {
                let (a, bb) = (h[j], h[j + 1]);
                h[j] = cs[j] * a + sn[j] * bb;
                h[j + 1] = -sn[j] * a + cs[j] * bb;
            }
            let denom = h[k].hypot(h[k + 1]);
            let (c, s) = if denom == 0.0 { (1.0, 0.0) } else { (h[k] / denom, h[k + 1] / denom) };
            h[k] = denom;
            h[k + 1] = 0.0;
            cs.push(c);
            sn.push(s);
            let gk = g[k];
            g[k] = c * gk;
            g.push(-s * gk);
            h.truncate(k + 1);
            hcols.push(h);
            total += 1;
            if g[k + 1].abs() / bnorm <= opts.tol * 0.5 || hn <= f64::EPSILON * beta {
                breakdown = hn <= f64::EPSILON * beta;
                break;
            }
            basis.push(w.iter().map(|v| v / hn).collect());
        }

        // back substitution on the triangular system
        let k = hcols.len();
        let mut y = vec![0.0; k];
        for i in (0..k).rev() {
            let mut acc = g[i];
            for j in i + 1..k {
                acc -= hcols[j][i] * y[j];
            }
            y[i] = if hcols[i][i] != 0.0 { acc / hcols[i][i] } else { 0.0 };
        }
        for (yj, v) in y.iter().zip(&basis) {
            x.iter_mut().zip(v).for_each(|(xi, vi)| *xi += yj * vi);
        }
        let new_rel = true_residual(op, b, &x, &mut r) / bnorm;
        let stalled = breakdown && new_rel >= rel;
        rel = new_rel;
        if stalled {
            break;
        }
    }
    (x, SolveReport { iterations: total, residual: rel, converged: rel <= opts.tol })
}
