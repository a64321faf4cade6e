//! Matrix oracles: finite differences for the model problem, Chebyshev
//! collocation for the fourth-order problem, a constrained second-order
//! cross-check, and an in-repo dense complex eigensolver.
//!
//! The eigensolver is deliberately plain: balancing, Householder reduction
//! to Hessenberg form, explicit single-shift QR with deflation. Determinism
//! matters more than speed here; matrices stay at desk scale.

use crate::error::SpectralError;
use crate::ProblemParams;
use num_complex::Complex64;
use serde::Serialize;

/// Row-major dense complex matrix.
#[derive(Clone, Debug)]
pub struct DenseComplexMatrix {
    pub n: usize,
    pub entries: Vec<Complex64>,
}

impl DenseComplexMatrix {
    pub fn zeros(n: usize) -> Self {
        assert!(n >= 1);
        DenseComplexMatrix { n, entries: vec![Complex64::new(0.0, 0.0); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            *m.at_mut(i, i) = Complex64::new(1.0, 0.0);
        }
        m
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.n + j]
    }

    #[inline]
    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut Complex64 {
        &mut self.entries[i * self.n + j]
    }

    pub fn all_finite(&self) -> bool {
        self.entries.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    FdModel,
    CollocOs,
    ConstrainedModelOs,
}

/// One discretized spectrum. `resolved` flags are all false until
/// `filter_spurious` compares two grids.
#[derive(Clone, Debug, Serialize)]
pub struct DiscretizationResult {
    #[serde(serialize_with = "serialize_complex_list")]
    pub eigenvalues: Vec<Complex64>,
    pub grid_size: usize,
    pub scheme: Scheme,
    pub resolved: Vec<bool>,
}

fn serialize_complex_list<S: serde::Serializer>(
    v: &[Complex64],
    s: S,
) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for z in v {
        seq.serialize_element(&[z.re, z.im])?;
    }
    seq.end()
}

/// Grid step 2/(n+1) against the turning-point scale eps^{1/3}/10.
pub fn resolution_ok(params: &ProblemParams, n: usize) -> bool {
    2.0 / (n as f64 + 1.0) <= params.eps.cbrt() / 10.0
}

/// Second-order central differences for -i eps y'' + x y on the uniform
/// interior grid x_i = -1 + i h, h = 2/(n+1), Dirichlet ends. Eigenvalues of
/// the returned tridiagonal matrix approximate the model spectrum directly.
pub fn model_matrix(params: &ProblemParams, n: usize) -> DenseComplexMatrix {
    assert!(n >= 1);
    let h = 2.0 / (n as f64 + 1.0);
    let ie = Complex64::new(0.0, params.eps);
    let off = ie / (h * h);
    let mut a = DenseComplexMatrix::zeros(n);
    for i in 0..n {
        let x = -1.0 + (i as f64 + 1.0) * h;
        *a.at_mut(i, i) = Complex64::new(x, 0.0) - 2.0 * off;
        if i + 1 < n {
            *a.at_mut(i, i + 1) = off;
            *a.at_mut(i + 1, i) = off;
        }
    }
    a
}

/// Chebyshev differentiation matrix on n+1 points x_j = cos(pi j / n),
/// diagonal by the negative-sum rule.
fn cheb(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let m = n + 1;
    let x: Vec<f64> = (0..m).map(|j| (std::f64::consts::PI * j as f64 / n as f64).cos()).collect();
    let c = |j: usize| if j == 0 || j == n { 2.0 } else { 1.0 };
    let mut d = vec![0.0; m * m];
    for i in 0..m {
        for j in 0..m {
            if i != j {
                let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
                d[i * m + j] = c(i) / c(j) * sign / (x[i] - x[j]);
            }
        }
    }
    for i in 0..m {
        let mut s = 0.0;
        for j in 0..m {
            if i != j {
                s += d[i * m + j];
            }
        }
        d[i * m + i] = -s;
    }
    (x, d)
}

fn matmul(a: &[f64], b: &[f64], m: usize) -> Vec<f64> {
    let mut out = vec![0.0; m * m];
    for i in 0..m {
        for k in 0..m {
            let aik = a[i * m + k];
            if aik == 0.0 {
                continue;
            }
            for j in 0..m {
                out[i * m + j] += aik * b[k * m + j];
            }
        }
    }
    out
}

/// Collocation pair (A, B) for the fourth-order problem with clamped ends:
/// A = L4 + (1/(i eps)) diag(x) L2 on the interior, B = -L2, where
/// L2 = D^2 - alpha^2 and L4 carries the clamped fourth derivative.
/// Eigenvalues come out in the pencil variable.
pub fn os_matrices(params: &ProblemParams, n: usize) -> (DenseComplexMatrix, DenseComplexMatrix) {
    assert!(n >= 64, "collocation needs n >= 64");
    let m = n + 1;
    let (x, d1) = cheb(n);
    let d2 = matmul(&d1, &d1, m);
    let d3 = matmul(&d2, &d1, m);
    let d4 = matmul(&d3, &d1, m);
    // clamped fourth derivative: (diag(1-x^2) D4 - 8 diag(x) D3 - 12 D2) diag(1/(1-x^2))
    let interior = 1..n;
    let k = n - 1;
    let a2 = params.alpha * params.alpha;
    let mut l2 = vec![0.0; k * k];
    let mut l4 = vec![0.0; k * k];
    for (ii, i) in interior.clone().enumerate() {
        for (jj, j) in interior.clone().enumerate() {
            let s = 1.0 / (1.0 - x[j] * x[j]);
            let d4c = ((1.0 - x[i] * x[i]) * d4[i * m + j]
                - 8.0 * x[i] * d3[i * m + j]
                - 12.0 * d2[i * m + j])
                * s;
            let d2ij = d2[i * m + j];
            let delta = if i == j { 1.0 } else { 0.0 };
            l2[ii * k + jj] = d2ij - a2 * delta;
            l4[ii * k + jj] = d4c - 2.0 * a2 * d2ij + a2 * a2 * delta;
        }
    }
    let mut a = DenseComplexMatrix::zeros(k);
    let mut b = DenseComplexMatrix::zeros(k);
    let inv_ie = Complex64::new(1.0, 0.0) / Complex64::new(0.0, params.eps);
    for (ii, i) in interior.clone().enumerate() {
        for jj in 0..k {
            *a.at_mut(ii, jj) = Complex64::new(l4[ii * k + jj], 0.0)
                + inv_ie * x[i] * l2[ii * k + jj];
            *b.at_mut(ii, jj) = Complex64::new(-l2[ii * k + jj], 0.0);
        }
    }
    (a, b)
}

// ---------------------------------------------------------------------------
// dense eigensolver

fn balance(h: &mut [Complex64], n: usize) {
    for _ in 0..20 {
        let mut done = true;
        for i in 0..n {
            let mut r = 0.0;
            let mut c = 0.0;
            for j in 0..n {
                if j != i {
                    r += h[i * n + j].norm();
                    c += h[j * n + i].norm();
                }
            }
            if r == 0.0 || c == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            while c < r / 2.0 {
                c *= 4.0;
                f *= 2.0;
            }
            while c > r * 2.0 {
                c /= 4.0;
                f /= 2.0;
            }
            if f != 1.0 && (c + r) < 0.95 * s {
                done = false;
                let g = 1.0 / f;
                for j in 0..n {
                    h[i * n + j] *= g;
                    h[j * n + i] *= f;
                }
            }
        }
        if done {
            break;
        }
    }
}

fn hessenberg(h: &mut [Complex64], n: usize) {
    for k in 0..n.saturating_sub(2) {
        let mut norm2 = 0.0;
        for i in k + 1..n {
            norm2 += h[i * n + k].norm_sqr();
        }
        if norm2 == 0.0 {
            continue;
        }
        let norm = norm2.sqrt();
        let x0 = h[(k + 1) * n + k];
        let phase = if x0.norm() == 0.0 { Complex64::new(1.0, 0.0) } else { x0 / x0.norm() };
        let alpha = -phase * norm;
        let mut v: Vec<Complex64> = (k + 1..n).map(|i| h[i * n + k]).collect();
        v[0] -= alpha;
        let vn2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if vn2 == 0.0 {
            continue;
        }
        let tau = 2.0 / vn2;
        // left: rows k+1.., all columns from k
        for j in k..n {
            let mut s = Complex64::new(0.0, 0.0);
            for (vi, i) in (k + 1..n).enumerate() {
                s += v[vi].conj() * h[i * n + j];
            }
            s *= tau;
            for (vi, i) in (k + 1..n).enumerate() {
                h[i * n + j] -= s * v[vi];
            }
        }
        // right: all rows, columns k+1..
        for i in 0..n {
            let mut s = Complex64::new(0.0, 0.0);
            for (vj, j) in (k + 1..n).enumerate() {
                s += h[i * n + j] * v[vj];
            }
            s *= tau;
            for (vj, j) in (k + 1..n).enumerate() {
                h[i * n + j] -= s * v[vj].conj();
            }
        }
        h[(k + 1) * n + k] = alpha;
        for i in k + 2..n {
            h[i * n + k] = Complex64::new(0.0, 0.0);
        }
    }
}

fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let tr = a + d;
    let det = a * d - b * c;
    let disc = (tr * tr - 4.0 * det).sqrt();
    let r1 = (tr + disc) / 2.0;
    let r2 = (tr - disc) / 2.0;
    if (r1 - d).norm() <= (r2 - d).norm() {
        r1
    } else {
        r2
    }
}

/// All eigenvalues of a general complex matrix, sorted by (re, im).
pub fn eig_dense(a: &DenseComplexMatrix) -> Result<Vec<Complex64>, SpectralError> {
    assert!(a.all_finite(), "matrix entries must be finite");
    assert!(a.n <= 4096, "desk-scale bound");
    let n = a.n;
    let mut h = a.entries.clone();
    if n == 1 {
        return Ok(vec![h[0]]);
    }
    balance(&mut h, n);
    hessenberg(&mut h, n);

    let mut eigs: Vec<Complex64> = Vec::with_capacity(n);
    let mut hi = n - 1;
    let mut iters_left = 30 * n;
    let mut stall = 0usize;
    let small = |h: &[Complex64], m: usize| -> bool {
        let s = h[(m - 1) * n + (m - 1)].norm() + h[m * n + m].norm();
        let s = if s == 0.0 { 1.0 } else { s };
        h[m * n + (m - 1)].norm() <= f64::EPSILON * s
    };
    loop {
        // deflate converged trailing eigenvalues
        while hi > 0 && small(&h, hi) {
            eigs.push(h[hi * n + hi]);
            hi -= 1;
            stall = 0;
        }
        if hi == 0 {
            eigs.push(h[0]);
            break;
        }
        // active block [lo..=hi]
        let mut lo = hi;
        while lo > 0 && !small(&h, lo) {
            lo -= 1;
        }
        if iters_left == 0 {
            eigs.sort_by(|p, q| p.re.total_cmp(&q.re).then(p.im.total_cmp(&q.im)));
            return Err(SpectralError::PartialSpectrum { converged: eigs, expected: n });
        }
        iters_left -= 1;
        stall += 1;
        let sigma = if stall % 12 == 0 {
            // exceptional shift to break symmetry cycles
            h[hi * n + hi] + Complex64::new(h[hi * n + hi - 1].norm() * 1.313, 0.0)
        } else {
            wilkinson_shift(
                h[(hi - 1) * n + (hi - 1)],
                h[(hi - 1) * n + hi],
                h[hi * n + (hi - 1)],
                h[hi * n + hi],
            )
        };
        for i in lo..=hi {
            h[i * n + i] -= sigma;
        }
        // QR by Givens on the block, then RQ, restricted to [lo..=hi]
        let mut rots: Vec<(f64, Complex64)> = Vec::with_capacity(hi - lo);
        for k in lo..hi {
            let a0 = h[k * n + k];
            let b0 = h[(k + 1) * n + k];
            let (c, s) = if b0.norm() == 0.0 {
                (1.0, Complex64::new(0.0, 0.0))
            } else if a0.norm() == 0.0 {
                (0.0, Complex64::new(1.0, 0.0))
            } else {
                let t = b0 / a0;
                let c = 1.0 / (1.0 + t.norm_sqr()).sqrt();
                (c, t.conj() * c)
            };
            for j in k..=hi {
                let p = h[k * n + j];
                let q = h[(k + 1) * n + j];
                h[k * n + j] = c * p + s * q;
                h[(k + 1) * n + j] = -s.conj() * p + c * q;
            }
            rots.push((c, s));
        }
        for (k, (c, s)) in (lo..hi).zip(rots.into_iter()) {
            let top = (k + 2).min(hi);
            for i in lo..=top {
                let p = h[i * n + k];
                let q = h[i * n + k + 1];
                h[i * n + k] = c * p + s.conj() * q;
                h[i * n + k + 1] = -s * p + c * q;
            }
        }
        for i in lo..=hi {
            h[i * n + i] += sigma;
        }
    }
    eigs.sort_by(|p, q| p.re.total_cmp(&q.re).then(p.im.total_cmp(&q.im)));
    Ok(eigs)
}

/// LU with partial pivoting; returns the factorization in place plus the
/// pivot rows, or None when a pivot underflows relative to the matrix scale.
fn lu_factor(m: &mut [Complex64], n: usize) -> Option<Vec<usize>> {
    let scale = m.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return None;
    }
    let mut piv: Vec<usize> = (0..n).collect();
    for k in 0..n {
        let (mut best, mut best_val) = (k, m[k * n + k].norm());
        for i in k + 1..n {
            let v = m[i * n + k].norm();
            if v > best_val {
                best = i;
                best_val = v;
            }
        }
        if best_val <= scale * 1e-14 {
            return None;
        }
        if best != k {
            for j in 0..n {
                m.swap(k * n + j, best * n + j);
            }
            piv.swap(k, best);
        }
        let pk = m[k * n + k];
        for i in k + 1..n {
            let f = m[i * n + k] / pk;
            m[i * n + k] = f;
            for j in k + 1..n {
                let sub = f * m[k * n + j];
                m[i * n + j] -= sub;
            }
        }
    }
    Some(piv)
}

fn lu_solve_vec(lu: &[Complex64], piv: &[usize], n: usize, b: &mut Vec<Complex64>) {
    let permuted: Vec<Complex64> = piv.iter().map(|&p| b[p]).collect();
    *b = permuted;
    for i in 1..n {
        for k in 0..i {
            let sub = lu[i * n + k] * b[k];
            b[i] -= sub;
        }
    }
    for i in (0..n).rev() {
        for k in i + 1..n {
            let sub = lu[i * n + k] * b[k];
            b[i] -= sub;
        }
        b[i] /= lu[i * n + i];
    }
}

/// Generalized pair A y = mu B y via factoring B and reducing to standard form.
pub fn eig_generalized(
    a: &DenseComplexMatrix,
    b: &DenseComplexMatrix,
) -> Result<Vec<Complex64>, SpectralError> {
    assert_eq!(a.n, b.n);
    let n = a.n;
    let mut lu = b.entries.clone();
    let piv = lu_factor(&mut lu, n).ok_or_else(|| {
        SpectralError::domain("eig_generalized", "B singular to working precision".to_string())
    })?;
    let mut m = DenseComplexMatrix::zeros(n);
    for j in 0..n {
        let mut col: Vec<Complex64> = (0..n).map(|i| a.at(i, j)).collect();
        lu_solve_vec(&lu, &piv, n, &mut col);
        for i in 0..n {
            *m.at_mut(i, j) = col[i];
        }
    }
    eig_dense(&m)
}

/// Residual of one Ritz pair recovered by inverse iteration:
/// ||A v - lambda v|| / ||A||_F with unit v.
pub fn ritz_backward_error(a: &DenseComplexMatrix, lambda: Complex64) -> f64 {
    let n = a.n;
    let fro = a.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let jitter = 1e-13 * fro.max(1.0);
    let mut shifted = a.entries.clone();
    let mut piv = None;
    for bump in 0..4 {
        shifted.copy_from_slice(&a.entries);
        let off = lambda + Complex64::new(jitter * (bump as f64), jitter * (bump as f64));
        for i in 0..n {
            shifted[i * n + i] -= off;
        }
        piv = lu_factor(&mut shifted, n);
        if piv.is_some() {
            break;
        }
    }
    let piv = match piv {
        Some(p) => p,
        None => return f64::INFINITY,
    };
    let mut v: Vec<Complex64> = (0..n)
        .map(|i| Complex64::new(1.0 + (i as f64 * 0.37).sin(), (i as f64 * 0.61).cos()))
        .collect();
    for _ in 0..3 {
        lu_solve_vec(&shifted, &piv, n, &mut v);
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in v.iter_mut() {
            *z /= norm;
        }
    }
    let mut res = 0.0;
    for i in 0..n {
        let mut s = Complex64::new(0.0, 0.0);
        for j in 0..n {
            s += a.at(i, j) * v[j];
        }
        s -= lambda * v[i];
        res += s.norm_sqr();
    }
    res.sqrt() / fro
}

// ---------------------------------------------------------------------------
// drivers

/// Model spectrum by finite differences.
pub fn fd_model_result(
    params: &ProblemParams,
    n: usize,
) -> Result<DiscretizationResult, SpectralError> {
    let eigenvalues = eig_dense(&model_matrix(params, n))?;
    let resolved = vec![false; eigenvalues.len()];
    Ok(DiscretizationResult { eigenvalues, grid_size: n, scheme: Scheme::FdModel, resolved })
}

/// Fourth-order spectrum by collocation, returned in the lambda plane.
pub fn colloc_os_result(
    params: &ProblemParams,
    n: usize,
) -> Result<DiscretizationResult, SpectralError> {
    let (a, b) = os_matrices(params, n);
    let pencil = eig_generalized(&a, &b)?;
    let mut eigenvalues: Vec<Complex64> = pencil
        .into_iter()
        .map(|lt| crate::os_spectrum::lambda_from_pencil(lt, params))
        .collect();
    eigenvalues.sort_by(|p, q| p.re.total_cmp(&q.re).then(p.im.total_cmp(&q.im)));
    let resolved = vec![false; eigenvalues.len()];
    Ok(DiscretizationResult { eigenvalues, grid_size: n, scheme: Scheme::CollocOs, resolved })
}

/// Cross-check oracle for the fourth-order spectrum via its nonlocal
/// second-order form: the model-problem tridiagonal stencil acts on the
/// full grid including both walls, and the two integral functionals
/// (trapezoid weights) replace the wall conditions by restricting to their
/// null space, then eig_dense. The wall values must stay unknowns: the
/// reduced eigenfunction does not vanish there, the functionals are what
/// close the system. Eigenvalues land directly in the lambda plane.
pub fn constrained_model_result(
    params: &ProblemParams,
    n: usize,
) -> Result<DiscretizationResult, SpectralError> {
    assert!(n >= 8);
    let h = 2.0 / (n as f64 + 1.0);
    let full = n + 2; // grid points x_i = -1 + i h, i = 0..=n+1
    let x = |i: usize| -1.0 + (i as f64) * h;
    let mut c1 = vec![Complex64::new(0.0, 0.0); full];
    let mut c2 = vec![Complex64::new(0.0, 0.0); full];
    for i in 0..full {
        let w = if i == 0 || i == full - 1 { h / 2.0 } else { h };
        c1[i] = Complex64::new(w * (params.alpha * (1.0 - x(i))).sinh(), 0.0);
        c2[i] = Complex64::new(w * (params.alpha * (1.0 + x(i))).sinh(), 0.0);
    }
    // orthonormal basis Q of the joint null space, via two Householder
    // reflections sending span{c1, c2} onto span{e1, e2}
    let mut p = vec![Complex64::new(0.0, 0.0); full * full];
    for i in 0..full {
        p[i * full + i] = Complex64::new(1.0, 0.0);
    }
    let apply_reflection = |p: &mut [Complex64], v: &[Complex64], from: usize| {
        let vn2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if vn2 == 0.0 {
            return;
        }
        let tau = 2.0 / vn2;
        for j in 0..full {
            let mut s = Complex64::new(0.0, 0.0);
            for (vi, i) in (from..full).enumerate() {
                s += v[vi].conj() * p[i * full + j];
            }
            s *= tau;
            for (vi, i) in (from..full).enumerate() {
                p[i * full + j] -= s * v[vi];
            }
        }
    };
    let targets = [c1, c2];
    for (step, row) in [0usize, 1].into_iter().enumerate() {
        let img: Vec<Complex64> = (0..full)
            .map(|i| {
                let mut s = Complex64::new(0.0, 0.0);
                for j in 0..full {
                    s += p[i * full + j] * targets[step][j];
                }
                s
            })
            .collect();
        let tail = &img[row..];
        let norm: f64 = tail.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let phase = if tail[0].norm() == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            tail[0] / tail[0].norm()
        };
        let mut v = tail.to_vec();
        v[0] += phase * norm;
        apply_reflection(&mut p, &v, row);
    }
    // Q = P^H[:, 2..]: full x n; the stencil rows live at interior points,
    // so the eigenproblem reduces to (S Q)^{-1} (T Q) with S the interior
    // selector
    let q = |i: usize, j: usize| p[(j + 2) * full + i].conj();
    let ie_h2 = Complex64::new(0.0, params.eps) / (h * h);
    let mut tq = vec![Complex64::new(0.0, 0.0); n * n];
    let mut sq = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        let diag = Complex64::new(x(i + 1), 0.0) - 2.0 * ie_h2;
        for j in 0..n {
            tq[i * n + j] = ie_h2 * q(i, j) + diag * q(i + 1, j) + ie_h2 * q(i + 2, j);
            sq[i * n + j] = q(i + 1, j);
        }
    }
    let piv = lu_factor(&mut sq, n).ok_or_else(|| {
        SpectralError::domain(
            "constrained_model_result",
            "constraint subspace degenerate on the interior grid".to_string(),
        )
    })?;
    let mut m = DenseComplexMatrix::zeros(n);
    for j in 0..n {
        let mut col: Vec<Complex64> = (0..n).map(|i| tq[i * n + j]).collect();
        lu_solve_vec(&sq, &piv, n, &mut col);
        for i in 0..n {
            *m.at_mut(i, j) = col[i];
        }
    }
    let eigenvalues = eig_dense(&m)?;
    let resolved = vec![false; eigenvalues.len()];
    Ok(DiscretizationResult {
        eigenvalues,
        grid_size: n,
        scheme: Scheme::ConstrainedModelOs,
        resolved,
    })
}

/// Marks resolved exactly those fine-grid eigenvalues with a coarse-grid
/// partner within tol.
pub fn filter_spurious(
    coarse: &DiscretizationResult,
    fine: &DiscretizationResult,
    tol: f64,
) -> DiscretizationResult {
    assert_eq!(coarse.scheme, fine.scheme);
    assert!(fine.grid_size > coarse.grid_size);
    let resolved: Vec<bool> = fine
        .eigenvalues
        .iter()
        .map(|z| coarse.eigenvalues.iter().any(|w| (z - w).norm() <= tol))
        .collect();
    DiscretizationResult {
        eigenvalues: fine.eigenvalues.clone(),
        grid_size: fine.grid_size,
        scheme: fine.scheme,
        resolved,
    }
}
