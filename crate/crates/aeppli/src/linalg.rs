//! Dense complex linear algebra helpers: rank decisions, kernels, images,
//! subspace calculus, and (weighted) minimum-norm least squares.
//!
//! Rank decisions use a relative singular-value cutoff; the crate-wide default
//! treats σ < tol·σ_max as zero.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type C = Complex64;
pub type CMat = DMatrix<C>;
pub type CVec = DVector<C>;

/// Default relative rank tolerance.
pub const RANK_TOL: f64 = 1e-9;

fn svd(a: &CMat) -> nalgebra::SVD<C, nalgebra::Dyn, nalgebra::Dyn> {
    a.clone().svd(true, true)
}

/// Relative cutoff with an absolute floor: a matrix whose largest singular
/// value is float dust (catalog operators have entries of order one) is a
/// zero operator, not a rank-one one.
const ZERO_OPERATOR_FLOOR: f64 = 1e-12;

fn cutoff(sv: &[f64], tol: f64) -> f64 {
    let smax = sv.iter().cloned().fold(0.0, f64::max);
    if smax <= ZERO_OPERATOR_FLOOR {
        f64::MAX
    } else {
        tol * smax
    }
}

pub fn rank(a: &CMat, tol: f64) -> usize {
    if a.nrows() == 0 || a.ncols() == 0 {
        return 0;
    }
    let s = svd(a);
    let sv: Vec<f64> = s.singular_values.iter().cloned().collect();
    let cut = cutoff(&sv, tol);
    sv.iter().filter(|&&x| x > cut).count()
}

/// Orthonormal basis of the kernel, as matrix columns.
///
/// Wide inputs are padded with zero rows so the SVD returns the full V factor.
pub fn nullspace(a: &CMat, tol: f64) -> CMat {
    if a.ncols() == 0 {
        return CMat::zeros(0, 0);
    }
    if a.nrows() == 0 {
        return CMat::identity(a.ncols(), a.ncols());
    }
    let ncols = a.ncols();
    let padded = if a.nrows() < ncols {
        let mut p = CMat::zeros(ncols, ncols);
        p.view_mut((0, 0), (a.nrows(), ncols)).copy_from(a);
        p
    } else {
        a.clone()
    };
    let s = svd(&padded);
    let sv: Vec<f64> = s.singular_values.iter().cloned().collect();
    let cut = cutoff(&sv, tol);
    let r = sv.iter().filter(|&&x| x > cut).count();
    let v_t = s.v_t.expect("svd v_t");
    debug_assert_eq!(v_t.nrows(), ncols);
    let mut cols: Vec<CVec> = Vec::new();
    for i in r..v_t.nrows() {
        cols.push(v_t.row(i).adjoint());
    }
    let k = cols.len();
    CMat::from_fn(ncols, k, |i, j| cols[j][i])
}

/// Orthonormal basis of the column space.
pub fn colspace(a: &CMat, tol: f64) -> CMat {
    if a.nrows() == 0 || a.ncols() == 0 {
        return CMat::zeros(a.nrows(), 0);
    }
    let s = svd(a);
    let sv: Vec<f64> = s.singular_values.iter().cloned().collect();
    let cut = cutoff(&sv, tol);
    let r = sv.iter().filter(|&&x| x > cut).count();
    let u = s.u.expect("svd u");
    u.columns(0, r).into_owned()
}

/// Moore-Penrose pseudoinverse.
pub fn pinv(a: &CMat, tol: f64) -> CMat {
    if a.nrows() == 0 || a.ncols() == 0 {
        return CMat::zeros(a.ncols(), a.nrows());
    }
    let s = svd(a);
    let sv: Vec<f64> = s.singular_values.iter().cloned().collect();
    let cut = cutoff(&sv, tol);
    let u = s.u.expect("svd u");
    let v_t = s.v_t.expect("svd v_t");
    let mut sig_inv = CMat::zeros(v_t.nrows(), u.ncols());
    for (i, &x) in sv.iter().enumerate() {
        if x > cut {
            sig_inv[(i, i)] = C::new(1.0 / x, 0.0);
        }
    }
    v_t.adjoint() * sig_inv * u.adjoint()
}

/// Minimum-norm least-squares solution of A x = b.
pub fn lstsq_min_norm(a: &CMat, b: &CVec, tol: f64) -> CVec {
    if a.ncols() == 0 {
        return CVec::zeros(0);
    }
    if a.nrows() == 0 {
        return CVec::zeros(a.ncols());
    }
    pinv(a, tol) * b
}

/// Residual ‖A x − b‖₂.
pub fn residual(a: &CMat, x: &CVec, b: &CVec) -> f64 {
    if a.nrows() == 0 {
        return b.norm();
    }
    (a * x - b).norm()
}

/// Minimum G-norm solution of A x = b, where G is Hermitian positive definite
/// on the solution space. Returns (solution, residual of A x − b).
pub fn lstsq_min_gram_norm(a: &CMat, b: &CVec, gram: &CMat, tol: f64) -> (CVec, f64) {
    if a.ncols() == 0 {
        return (CVec::zeros(0), b.norm());
    }
    // G = L L^H (Cholesky); substitute x = L^{-H} y, minimize ‖y‖ s.t. (A L^{-H}) y = b
    let chol = gram
        .clone()
        .cholesky()
        .expect("gram matrix must be positive definite");
    let l = chol.l();
    let linv_h = l
        .adjoint()
        .try_inverse()
        .expect("cholesky factor invertible");
    let a2 = a * &linv_h;
    let y = lstsq_min_norm(&a2, b, tol);
    let x = &linv_h * y;
    let r = residual(a, &x, b);
    (x, r)
}

/// True iff every column of `sub` lies in the span of the columns of `sup`.
pub fn is_subspace_of(sub: &CMat, sup: &CMat, tol: f64) -> bool {
    subspace_defect(sub, sup, tol) <= tol.max(1e-12)
}

/// Largest residual of projecting the (normalized) columns of `sub` onto span(sup).
pub fn subspace_defect(sub: &CMat, sup: &CMat, tol: f64) -> f64 {
    if sub.ncols() == 0 {
        return 0.0;
    }
    let basis = colspace(sup, tol);
    let mut worst: f64 = 0.0;
    for j in 0..sub.ncols() {
        let v = sub.column(j).into_owned();
        let nrm = v.norm();
        if nrm <= tol {
            continue;
        }
        let v = v / C::new(nrm, 0.0);
        let proj = if basis.ncols() == 0 {
            CVec::zeros(v.len())
        } else {
            &basis * (basis.adjoint() * &v)
        };
        worst = worst.max((&v - proj).norm());
    }
    worst
}

/// Orthonormal basis of the intersection of two column spans.
pub fn intersect(a: &CMat, b: &CMat, tol: f64) -> CMat {
    if a.ncols() == 0 || b.ncols() == 0 {
        return CMat::zeros(a.nrows(), 0);
    }
    let mut stacked = CMat::zeros(a.nrows(), a.ncols() + b.ncols());
    stacked.columns_mut(0, a.ncols()).copy_from(a);
    stacked
        .columns_mut(a.ncols(), b.ncols())
        .copy_from(&(b * C::new(-1.0, 0.0)));
    let null = nullspace(&stacked, tol);
    if null.ncols() == 0 {
        return CMat::zeros(a.nrows(), 0);
    }
    let xs = null.rows(0, a.ncols()).into_owned();
    colspace(&(a * xs), tol)
}

/// Horizontal concatenation.
pub fn hcat(mats: &[&CMat]) -> CMat {
    let rows = mats.iter().map(|m| m.nrows()).max().unwrap_or(0);
    let cols: usize = mats.iter().map(|m| m.ncols()).sum();
    let mut out = CMat::zeros(rows, cols);
    let mut off = 0;
    for m in mats {
        if m.ncols() > 0 {
            out.view_mut((0, off), (m.nrows(), m.ncols())).copy_from(*m);
        }
        off += m.ncols();
    }
    out
}

/// Eigenvalues (ascending) and eigenvectors of a Hermitian matrix.
pub fn hermitian_eigen(a: &CMat) -> (Vec<f64>, CMat) {
    if a.nrows() == 0 {
        return (Vec::new(), CMat::zeros(0, 0));
    }
    let sym = (a + a.adjoint()) * C::new(0.5, 0.0);
    let eig = nalgebra::SymmetricEigen::new(sym);
    let mut idx: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    idx.sort_by(|&i, &j| eig.eigenvalues[i].partial_cmp(&eig.eigenvalues[j]).unwrap());
    let vals: Vec<f64> = idx.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vecs = CMat::from_fn(a.nrows(), a.ncols(), |r, c| eig.eigenvectors[(r, idx[c])]);
    (vals, vecs)
}

/// Deterministic pivoted Gram-Schmidt in basis order, with respect to the
/// Hermitian inner product ⟨x,y⟩ = y^H G x (G = identity when None).
pub fn orthonormalize_pivoted(cols: &CMat, gram: Option<&CMat>, tol: f64) -> CMat {
    let ip = |x: &CVec, y: &CVec| -> C {
        match gram {
            Some(g) => (y.adjoint() * g * x)[(0, 0)],
            None => (y.adjoint() * x)[(0, 0)],
        }
    };
    let mut basis: Vec<CVec> = Vec::new();
    let scale: f64 = (0..cols.ncols())
        .map(|j| {
            let v = cols.column(j).into_owned();
            ip(&v, &v).re.abs().sqrt()
        })
        .fold(0.0, f64::max)
        .max(1.0);
    for j in 0..cols.ncols() {
        let mut v = cols.column(j).into_owned();
        for _ in 0..2 {
            for b in &basis {
                let c = ip(&v, b);
                v -= b * c;
            }
        }
        let nrm = ip(&v, &v).re.max(0.0).sqrt();
        if nrm > tol * scale {
            basis.push(v / C::new(nrm, 0.0));
        }
    }
    let k = basis.len();
    CMat::from_fn(cols.nrows(), k, |i, j| basis[j][i])
}
