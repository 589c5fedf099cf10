//! Hermitian metric machinery: L² inner products, Hodge star, adjoints,
//! the fourth-order Aeppli and Bott-Chern Laplacians, harmonic projections,
//! three-space decompositions and the Lefschetz split of (n−1,1)-forms.
//!
//! The volume form is dV = ωⁿ/n! and the total volume is normalized to 1, so
//! ∫τ is the dV-coefficient of the top component of τ.

use std::collections::BTreeMap;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::form::{monomial_masks, space_dim, Form, VectorValuedForm, C};
use crate::index::{elements, subsets};
use crate::linalg::{self, CMat, CVec};
use crate::model::{DegreeLayout, InvariantModel};

/// Laplacian flavors with finite-dimensional Hodge theory.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LaplacianFlavor {
    Aeppli,
    BottChern,
    Dolbeault,
}

/// A positive (1,1)-form with all the cached metric structure.
#[derive(Clone, Debug)]
pub struct HermitianMetric {
    n: usize,
    h: DMatrix<C>,
    omega: Form,
    /// Gram matrices: ⟨x,y⟩ = y^† G x on each bidegree.
    gram: BTreeMap<(usize, usize), CMat>,
    /// C-linear Hodge star Λ^{p,q} → Λ^{n−q,n−p}.
    star: BTreeMap<(usize, usize), CMat>,
    /// Top coefficient of ωⁿ/n! in the monomial basis.
    vol_coeff: C,
}

impl HermitianMetric {
    /// Builds the metric ω = i Σ H_{jk} φ^j ∧ φ̄^k from a Hermitian positive
    /// definite coefficient matrix.
    pub fn new(model: &InvariantModel, h: DMatrix<C>) -> Result<Self> {
        let n = model.n();
        assert_eq!(h.nrows(), n);
        assert_eq!(h.ncols(), n);
        let herm_defect = (&h - h.adjoint()).norm();
        if herm_defect > 1e-10 * (1.0 + h.norm()) {
            return Err(Error::NotReal(herm_defect));
        }
        let (eigs, _) = linalg::hermitian_eigen(&h);
        let min_eig = eigs.first().copied().unwrap_or(0.0);
        if min_eig <= 1e-10 {
            return Err(Error::NotPositive(min_eig));
        }

        let mut omega = Form::zero(n);
        for j in 0..n {
            for k in 0..n {
                let c = h[(j, k)] * C::new(0.0, 1.0);
                if c.norm() > 0.0 {
                    omega = omega.add(&Form::monomial(n, 1 << j, 1 << k, c));
                }
            }
        }

        let hinv = h.clone().try_inverse().expect("positive definite");
        // dual inner products on the coframe: ⟨φ^a, φ^b⟩ = (H⁻¹)_{ba}
        let g10 = |a: usize, b: usize| hinv[(b, a)];
        let g01 = |a: usize, b: usize| hinv[(b, a)].conj();

        let mut gram = BTreeMap::new();
        for p in 0..=n {
            for q in 0..=n {
                let dim = space_dim(n, p, q);
                let mut g = CMat::zeros(dim, dim);
                for col in 0..dim {
                    let (i1, j1) = monomial_masks(n, p, q, col);
                    for row in 0..dim {
                        let (i2, j2) = monomial_masks(n, p, q, row);
                        // G_{row,col} = ⟨e_col, e_row⟩
                        let mh = gram_det(&elements(i1), &elements(i2), g10);
                        let ma = gram_det(&elements(j1), &elements(j2), g01);
                        g[(row, col)] = mh * ma;
                    }
                }
                gram.insert((p, q), g);
            }
        }

        let dv = omega.wedge_pow(n)?.scale(C::new(1.0 / factorial(n), 0.0));
        let vol_coeff = dv.top_coefficient();
        if vol_coeff.norm() < 1e-12 {
            return Err(Error::NotPositive(vol_coeff.norm()));
        }

        // Star via the wedge pairing: W·M = Gᵀ with M the matrix of the
        // conjugate-linear map b ↦ *(conj b), then *(c) = M·K·c on (q,p).
        let mut star = BTreeMap::new();
        for p in 0..=n {
            for q in 0..=n {
                let dpq = space_dim(n, p, q);
                let dcomp = space_dim(n, n - p, n - q);
                debug_assert_eq!(dpq, dcomp);
                let mut w = CMat::zeros(dpq, dcomp);
                for a in 0..dpq {
                    let (ia, ja) = monomial_masks(n, p, q, a);
                    let ea = Form::monomial(n, ia, ja, C::new(1.0, 0.0));
                    for c in 0..dcomp {
                        let (ic, jc) = monomial_masks(n, n - p, n - q, c);
                        let ec = Form::monomial(n, ic, jc, C::new(1.0, 0.0));
                        let prod = ea.wedge(&ec)?;
                        w[(a, c)] = prod.top_coefficient() / vol_coeff;
                    }
                }
                let g = &gram[&(p, q)];
                let m = w
                    .clone()
                    .try_inverse()
                    .expect("wedge pairing is perfect")
                    * g.transpose();
                // star on (q,p): M_{pq} · K with K the conjugation permutation (q,p)→(p,q)
                let k = conj_permutation(n, q, p);
                star.insert((q, p), &m * k);
            }
        }

        Ok(HermitianMetric { n, h, omega, gram, star, vol_coeff })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn omega(&self) -> &Form {
        &self.omega
    }

    pub fn h_matrix(&self) -> &DMatrix<C> {
        &self.h
    }

    /// dV = ωⁿ/n! as a form.
    pub fn volume_form(&self) -> Form {
        let n = self.n;
        Form::monomial(n, (1 << n) - 1, (1 << n) - 1, self.vol_coeff)
    }

    /// ∫τ with the volume normalized to 1.
    pub fn integral(&self, f: &Form) -> C {
        f.top_coefficient() / self.vol_coeff
    }

    pub fn gram(&self, p: usize, q: usize) -> &CMat {
        &self.gram[&(p, q)]
    }

    /// Block-diagonal Gram matrix on the total-degree-k space.
    pub fn gram_total(&self, k: usize) -> CMat {
        let layout = DegreeLayout::new(self.n, k);
        let mut g = CMat::zeros(layout.dim, layout.dim);
        for &(p, q, off, len) in &layout.blocks {
            g.view_mut((off, off), (len, len)).copy_from(&self.gram[&(p, q)]);
        }
        g
    }

    pub fn star_matrix(&self, p: usize, q: usize) -> &CMat {
        &self.star[&(p, q)]
    }

    /// Hodge star applied componentwise.
    pub fn star(&self, f: &Form) -> Form {
        let n = self.n;
        let mut out = Form::zero(n);
        for (p, q) in f.bidegrees() {
            let v = f.component(p, q);
            let w = &self.star[&(p, q)] * v;
            out = out.add(&Form::from_component(n, n - q, n - p, w));
        }
        out
    }

    /// L² inner product ⟨a,b⟩, conjugate-linear in b.
    pub fn inner(&self, a: &Form, b: &Form) -> C {
        let mut acc = C::new(0.0, 0.0);
        for (p, q) in a.bidegrees() {
            let x = a.component(p, q);
            let y = b.component(p, q);
            acc += (y.adjoint() * &self.gram[&(p, q)] * x)[(0, 0)];
        }
        acc
    }

    pub fn norm(&self, a: &Form) -> f64 {
        self.inner(a, a).re.max(0.0).sqrt()
    }

    /// Tensor inner product on Λ^{0,q} ⊗ T^{1,0} induced by ω on each factor.
    pub fn vv_inner(&self, v: &VectorValuedForm, w: &VectorValuedForm) -> C {
        assert_eq!(v.q(), w.q());
        let n = self.n;
        let hinv = self.h.clone().try_inverse().expect("pd");
        let g01 = |a: usize, b: usize| hinv[(b, a)].conj();
        let jsets = subsets(n, v.q());
        let mut acc = C::new(0.0, 0.0);
        for (r1, &jm1) in jsets.iter().enumerate() {
            for (r2, &jm2) in jsets.iter().enumerate() {
                let gq = gram_det(&elements(jm1), &elements(jm2), g01);
                if gq.norm() == 0.0 {
                    continue;
                }
                for j in 0..n {
                    for k in 0..n {
                        // ⟨ξ_j, ξ_k⟩ = H_{kj}
                        acc += v.coeffs[(r1, j)] * w.coeffs[(r2, k)].conj() * gq * self.h[(k, j)];
                    }
                }
            }
        }
        acc
    }

    /// Gram adjoint of an operator matrix A: (p,q) → (r,s).
    pub fn adjoint_of(&self, a: &CMat, src: (usize, usize), dst: (usize, usize)) -> CMat {
        let gs = &self.gram[&src];
        let gd = &self.gram[&dst];
        gs.clone().try_inverse().expect("pd") * a.adjoint() * gd
    }

    /// ∂*: Λ^{p,q} → Λ^{p−1,q}, as the Gram adjoint of ∂ on the source space.
    pub fn del_adjoint(&self, model: &InvariantModel, p: usize, q: usize) -> CMat {
        if p == 0 {
            return CMat::zeros(0, space_dim(self.n, p, q));
        }
        self.adjoint_of(model.del_matrix(p - 1, q), (p - 1, q), (p, q))
    }

    /// ∂̄*: Λ^{p,q} → Λ^{p,q−1}.
    pub fn delbar_adjoint(&self, model: &InvariantModel, p: usize, q: usize) -> CMat {
        if q == 0 {
            return CMat::zeros(0, space_dim(self.n, p, q));
        }
        self.adjoint_of(model.delbar_matrix(p, q - 1), (p, q - 1), (p, q))
    }

    /// (∂∂̄)*: Λ^{p,q} → Λ^{p−1,q−1}.
    pub fn deldelbar_adjoint(&self, model: &InvariantModel, p: usize, q: usize) -> CMat {
        if p == 0 || q == 0 {
            return CMat::zeros(0, space_dim(self.n, p, q));
        }
        self.adjoint_of(&model.deldelbar_matrix(p - 1, q - 1), (p - 1, q - 1), (p, q))
    }

    /// The star-conjugation route −*∂̄* for ∂* on Λ^{p,q}; compared against
    /// the Gram route in the adjoint consistency checks.
    pub fn del_adjoint_star_route(&self, model: &InvariantModel, p: usize, q: usize) -> CMat {
        if p == 0 {
            return CMat::zeros(0, space_dim(self.n, p, q));
        }
        let n = self.n;
        // (p,q) → star → (n−q,n−p) → ∂̄ → (n−q,n−p+1) → star → (p−1,q)
        let s1 = &self.star[&(p, q)];
        let db = model.delbar_matrix(n - q, n - p);
        let s2 = &self.star[&(n - q, n - p + 1)];
        -(s2 * db * s1)
    }

    pub fn delbar_adjoint_star_route(&self, model: &InvariantModel, p: usize, q: usize) -> CMat {
        if q == 0 {
            return CMat::zeros(0, space_dim(self.n, p, q));
        }
        let n = self.n;
        let s1 = &self.star[&(p, q)];
        let d = model.del_matrix(n - q, n - p);
        let s2 = &self.star[&(n - q + 1, n - p)];
        -(s2 * d * s1)
    }

    /// The fourth-order Laplacian of the requested flavor on Λ^{p,q},
    /// assembled term by term from its displayed formula.
    pub fn laplacian(&self, model: &InvariantModel, flavor: LaplacianFlavor, p: usize, q: usize) -> CMat {
        let n = self.n;
        let dim = space_dim(n, p, q);
        let zero = || CMat::zeros(dim, dim);
        let del = |pp: usize, qq: usize| model.del_matrix(pp, qq).clone();
        let dbar = |pp: usize, qq: usize| model.delbar_matrix(pp, qq).clone();
        match flavor {
            LaplacianFlavor::Dolbeault => {
                let mut m = zero();
                if q + 1 <= n {
                    m += self.delbar_adjoint(model, p, q + 1) * dbar(p, q);
                }
                if q >= 1 {
                    m += dbar(p, q - 1) * self.delbar_adjoint(model, p, q);
                }
                m
            }
            LaplacianFlavor::Aeppli => {
                // ∂∂* + ∂̄∂̄* + ∂̄*∂*∂∂̄ + ∂∂̄∂̄*∂* + ∂∂̄*∂̄∂* + ∂̄∂*∂∂̄*
                let mut m = zero();
                if p >= 1 {
                    m += del(p - 1, q) * self.del_adjoint(model, p, q);
                }
                if q >= 1 {
                    m += dbar(p, q - 1) * self.delbar_adjoint(model, p, q);
                }
                if p + 1 <= n && q + 1 <= n {
                    // ∂̄* ∘ ∂* ∘ ∂∂̄: (p,q)→(p+1,q+1)→(p,q+1)→(p,q)
                    m += self.delbar_adjoint_chain(model, p, q);
                }
                if p >= 1 && q >= 1 {
                    // ∂∂̄ ∘ ∂̄* ∘ ∂*: (p,q)→(p−1,q)→(p−1,q−1)→(p,q)
                    let t = model.deldelbar_matrix(p - 1, q - 1)
                        * self.delbar_adjoint(model, p - 1, q)
                        * self.del_adjoint(model, p, q);
                    m += t;
                }
                if p >= 1 && q + 1 <= n {
                    // ∂ ∘ ∂̄* ∘ ∂̄ ∘ ∂*: (p,q)→(p−1,q)→(p−1,q+1)→(p−1,q)→(p,q)
                    let t = del(p - 1, q)
                        * self.delbar_adjoint(model, p - 1, q + 1)
                        * dbar(p - 1, q)
                        * self.del_adjoint(model, p, q);
                    m += t;
                }
                if q >= 1 && p + 1 <= n {
                    // ∂̄ ∘ ∂* ∘ ∂ ∘ ∂̄*: (p,q)→(p,q−1)→(p+1,q−1)→(p,q−1)→(p,q)
                    let t = dbar(p, q - 1)
                        * self.del_adjoint(model, p + 1, q - 1)
                        * del(p, q - 1)
                        * self.delbar_adjoint(model, p, q);
                    m += t;
                }
                m
            }
            LaplacianFlavor::BottChern => {
                // ∂*∂ + ∂̄*∂̄ + ∂∂̄∂̄*∂* + ∂̄*∂*∂∂̄ + ∂̄*∂∂*∂̄ + ∂*∂̄∂̄*∂
                let mut m = zero();
                if p + 1 <= n {
                    m += self.del_adjoint(model, p + 1, q) * del(p, q);
                }
                if q + 1 <= n {
                    m += self.delbar_adjoint(model, p, q + 1) * dbar(p, q);
                }
                if p >= 1 && q >= 1 {
                    // ∂∂̄ ∘ ∂̄* ∘ ∂*
                    let t = model.deldelbar_matrix(p - 1, q - 1)
                        * self.delbar_adjoint(model, p - 1, q)
                        * self.del_adjoint(model, p, q);
                    m += t;
                }
                if p + 1 <= n && q + 1 <= n {
                    // ∂̄* ∘ ∂* ∘ ∂∂̄
                    let t = self.delbar_adjoint_chain(model, p, q);
                    m += t;
                }
                if p >= 1 && q + 1 <= n {
                    // ∂̄* ∘ ∂ ∘ ∂* ∘ ∂̄: (p,q)→(p,q+1)→(p−1,q+1)→(p,q+1)→(p,q)
                    let t = self.delbar_adjoint(model, p, q + 1)
                        * del(p - 1, q + 1)
                        * self.del_adjoint(model, p, q + 1)
                        * dbar(p, q);
                    m += t;
                }
                if q >= 1 && p + 1 <= n {
                    // ∂* ∘ ∂̄ ∘ ∂̄* ∘ ∂: (p,q)→(p+1,q)→(p+1,q−1)→(p+1,q)→(p,q)
                    let t = self.del_adjoint(model, p + 1, q)
                        * dbar(p + 1, q - 1)
                        * self.delbar_adjoint(model, p + 1, q)
                        * del(p, q);
                    m += t;
                }
                m
            }
        }
    }

    /// ∂̄* ∘ ∂* ∘ (∂∂̄): shared middle term of both Laplacians.
    fn delbar_adjoint_chain(&self, model: &InvariantModel, p: usize, q: usize) -> CMat {
        self.delbar_adjoint(model, p, q + 1)
            * self.del_adjoint(model, p + 1, q + 1)
            * model.deldelbar_matrix(p, q)
    }

    /// G-orthonormal basis of the kernel of the flavor's Laplacian, together
    /// with the dimension of the triple-kernel characterization.
    pub fn laplacian_kernel(
        &self,
        model: &InvariantModel,
        flavor: LaplacianFlavor,
        p: usize,
        q: usize,
    ) -> (CMat, usize) {
        let lap = self.laplacian(model, flavor, p, q);
        let kernel = linalg::nullspace(&lap, linalg::RANK_TOL);
        let kernel = linalg::orthonormalize_pivoted(&kernel, Some(&self.gram[&(p, q)]), 1e-12);
        let triple = self.triple_kernel(model, flavor, p, q);
        (kernel, triple.ncols())
    }

    /// The triple-intersection characterization of the harmonic space.
    pub fn triple_kernel(
        &self,
        model: &InvariantModel,
        flavor: LaplacianFlavor,
        p: usize,
        q: usize,
    ) -> CMat {
        let n = self.n;
        let dim = space_dim(n, p, q);
        let stack = |mats: Vec<CMat>| -> CMat {
            let live: Vec<CMat> = mats.into_iter().filter(|m| m.nrows() > 0).collect();
            if live.is_empty() {
                return CMat::zeros(0, dim);
            }
            let rows: usize = live.iter().map(|m| m.nrows()).sum();
            let mut out = CMat::zeros(rows, dim);
            let mut off = 0;
            for m in live {
                out.view_mut((off, 0), (m.nrows(), m.ncols())).copy_from(&m);
                off += m.nrows();
            }
            out
        };
        let mats = match flavor {
            LaplacianFlavor::Aeppli => vec![
                self.del_adjoint(model, p, q),
                self.delbar_adjoint(model, p, q),
                if p + 1 <= n && q + 1 <= n {
                    model.deldelbar_matrix(p, q)
                } else {
                    CMat::zeros(0, dim)
                },
            ],
            LaplacianFlavor::BottChern => vec![
                if p + 1 <= n { model.del_matrix(p, q).clone() } else { CMat::zeros(0, dim) },
                if q + 1 <= n { model.delbar_matrix(p, q).clone() } else { CMat::zeros(0, dim) },
                self.deldelbar_adjoint(model, p, q),
            ],
            LaplacianFlavor::Dolbeault => vec![
                if q + 1 <= n { model.delbar_matrix(p, q).clone() } else { CMat::zeros(0, dim) },
                self.delbar_adjoint(model, p, q),
            ],
        };
        let stacked = stack(mats);
        let ker = linalg::nullspace(&stacked, linalg::RANK_TOL);
        linalg::orthonormalize_pivoted(&ker, Some(&self.gram[&(p, q)]), 1e-12)
    }

    /// Orthogonal three-space decomposition a = harmonic + exact + coexact.
    ///
    /// Aeppli: exact ∈ Im ∂ + Im ∂̄, coexact ∈ Im (∂∂̄)*; Bott-Chern:
    /// exact ∈ Im ∂∂̄, coexact ∈ Im ∂* + Im ∂̄*.
    pub fn three_space_decompose(
        &self,
        model: &InvariantModel,
        flavor: LaplacianFlavor,
        a: &Form,
    ) -> Result<(Form, Form, Form)> {
        let (p, q) = a.is_pure().ok_or(Error::DegreeMismatch { p: 0, q: 0 })?;
        let n = self.n;
        let harm = self.triple_kernel(model, flavor, p, q);
        let dim = space_dim(n, p, q);
        let (exact, coexact): (CMat, CMat) = match flavor {
            LaplacianFlavor::Aeppli => {
                let e1 = if p >= 1 { model.del_matrix(p - 1, q).clone() } else { CMat::zeros(dim, 0) };
                let e2 = if q >= 1 { model.delbar_matrix(p, q - 1).clone() } else { CMat::zeros(dim, 0) };
                let c1 = if p + 1 <= n && q + 1 <= n {
                    self.deldelbar_adjoint(model, p + 1, q + 1)
                } else {
                    CMat::zeros(dim, 0)
                };
                (linalg::hcat(&[&e1, &e2]), c1)
            }
            LaplacianFlavor::BottChern => {
                let e1 = if p >= 1 && q >= 1 {
                    model.deldelbar_matrix(p - 1, q - 1)
                } else {
                    CMat::zeros(dim, 0)
                };
                let c1 = if p + 1 <= n { self.del_adjoint(model, p + 1, q) } else { CMat::zeros(dim, 0) };
                let c2 = if q + 1 <= n { self.delbar_adjoint(model, p, q + 1) } else { CMat::zeros(dim, 0) };
                (e1, linalg::hcat(&[&c1, &c2]))
            }
            LaplacianFlavor::Dolbeault => {
                let e1 = if q >= 1 { model.delbar_matrix(p, q - 1).clone() } else { CMat::zeros(dim, 0) };
                let c1 = if q + 1 <= n { self.delbar_adjoint(model, p, q + 1) } else { CMat::zeros(dim, 0) };
                (e1, c1)
            }
        };
        let x = a.component(p, q);
        // orthonormal block bases keep the spanning solve well conditioned
        let exact = linalg::colspace(&exact, linalg::RANK_TOL);
        let coexact = linalg::colspace(&coexact, linalg::RANK_TOL);
        let all = linalg::hcat(&[&harm, &exact, &coexact]);
        let sol = linalg::lstsq_min_norm(&all, &x, linalg::RANK_TOL);
        let res = linalg::residual(&all, &sol, &x);
        if res > 1e-9 * (1.0 + x.norm()) {
            return Err(Error::InconsistentSystem(res));
        }
        let spans = [harm.ncols(), exact.ncols(), coexact.ncols()];
        let mut parts = Vec::new();
        let mut off = 0;
        for (idx, &len) in spans.iter().enumerate() {
            let mat = match idx {
                0 => &harm,
                1 => &exact,
                _ => &coexact,
            };
            let v = if len == 0 {
                CVec::zeros(dim)
            } else {
                mat * sol.rows(off, len).into_owned()
            };
            parts.push(Form::from_component(n, p, q, v));
            off += len;
        }
        let coex = parts.pop().unwrap();
        let ex = parts.pop().unwrap();
        let h = parts.pop().unwrap();
        Ok((h, ex, coex))
    }

    /// Harmonic projection in the flavor's three-space decomposition.
    pub fn harmonic_part(&self, model: &InvariantModel, flavor: LaplacianFlavor, a: &Form) -> Result<Form> {
        Ok(self.three_space_decompose(model, flavor, a)?.0)
    }

    /// Primitivity of a pure-type form: ω^{n−k+1} ∧ α = 0 with k = p+q ≤ n.
    /// Forms of degree 0 and 1 are primitive; degrees above n are out of the
    /// criterion's range.
    pub fn is_primitive(&self, a: &Form, tol: f64) -> Result<bool> {
        let (p, q) = a.is_pure().ok_or(Error::DegreeMismatch { p: 0, q: 0 })?;
        let k = p + q;
        let n = self.n;
        if k > n {
            return Err(Error::DegreeMismatch { p, q });
        }
        if k < 2 {
            return Ok(true);
        }
        let pow = self.omega.wedge_pow(n - k + 1)?;
        let prod = pow.wedge(a)?;
        Ok(prod.norm_inf() <= tol * (1.0 + a.norm_inf()))
    }

    /// Defect of the primitive-form star identity *α = i^{n²+2n−2}·α at
    /// bidegree (n−1,1); small iff α is primitive.
    pub fn primitive_star_defect(&self, a: &Form) -> Result<f64> {
        let n = self.n;
        let (p, q) = a.is_pure().ok_or(Error::DegreeMismatch { p: 0, q: 0 })?;
        if (p, q) != (n - 1, 1) {
            return Err(Error::DegreeMismatch { p: n - 1, q: 1 });
        }
        let phase = i_pow((n * n + 2 * n) as i64 - 2);
        let lhs = self.star(a);
        let rhs = a.scale(phase);
        Ok(lhs.sub(&rhs).norm_inf())
    }

    /// Lefschetz decomposition of an (n−1,1)-form: a = prim + ω ∧ ζ with a
    /// primitive part and ζ of bidegree (n−2,0).
    pub fn lefschetz_split(&self, a: &Form) -> Result<(Form, Form)> {
        let n = self.n;
        let (p, q) = a.is_pure().ok_or(Error::DegreeMismatch { p: n - 1, q: 1 })?;
        if (p, q) != (n - 1, 1) {
            return Err(Error::DegreeMismatch { p: n - 1, q: 1 });
        }
        // ω ∧ a = ω² ∧ ζ since ω ∧ prim = 0
        let omega_a = self.omega.wedge(a)?;
        let l2 = wedge_matrix(&self.omega.wedge_pow(2)?, n, n - 2, 0, n, 2);
        let rhs = omega_a.component(n, 2);
        let zeta_v = linalg::lstsq_min_norm(&l2, &rhs, linalg::RANK_TOL);
        let res = linalg::residual(&l2, &zeta_v, &rhs);
        if res > 1e-9 * (1.0 + a.norm_inf()) {
            return Err(Error::InconsistentSystem(res));
        }
        let zeta = Form::from_component(n, n - 2, 0, zeta_v);
        let prim = a.sub(&self.omega.wedge(&zeta)?);
        Ok((prim, zeta))
    }
}

/// Matrix of x ↦ fixed ∧ x from Λ^{p,q} to Λ^{r,s}.
pub fn wedge_matrix(fixed: &Form, n: usize, p: usize, q: usize, r: usize, s: usize) -> CMat {
    let src = space_dim(n, p, q);
    let dst = space_dim(n, r, s);
    let mut m = CMat::zeros(dst, src);
    for k in 0..src {
        let (im, jm) = monomial_masks(n, p, q, k);
        let e = Form::monomial(n, im, jm, C::new(1.0, 0.0));
        if let Ok(w) = fixed.wedge(&e) {
            m.column_mut(k).copy_from(&w.component(r, s));
        }
    }
    m
}

/// i^k for signed k.
pub fn i_pow(k: i64) -> C {
    match k.rem_euclid(4) {
        0 => C::new(1.0, 0.0),
        1 => C::new(0.0, 1.0),
        2 => C::new(-1.0, 0.0),
        _ => C::new(0.0, -1.0),
    }
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|x| x as f64).product::<f64>().max(1.0)
}

fn gram_det(rows: &[usize], cols: &[usize], g: impl Fn(usize, usize) -> C) -> C {
    let k = rows.len();
    if k != cols.len() {
        return C::new(0.0, 0.0);
    }
    if k == 0 {
        return C::new(1.0, 0.0);
    }
    let m = DMatrix::<C>::from_fn(k, k, |r, c| g(rows[r], cols[c]));
    m.determinant()
}

/// Signed permutation matrix of conjugation Λ^{a,b} → Λ^{b,a}.
fn conj_permutation(n: usize, a: usize, b: usize) -> CMat {
    let src = space_dim(n, a, b);
    let dst = space_dim(n, b, a);
    let mut m = CMat::zeros(dst, src);
    let sign = if (a * b) % 2 == 0 { 1.0 } else { -1.0 };
    for k in 0..src {
        let (im, jm) = monomial_masks(n, a, b, k);
        m[(crate::form::monomial_index(n, jm, im), k)] = C::new(sign, 0.0);
    }
    m
}
