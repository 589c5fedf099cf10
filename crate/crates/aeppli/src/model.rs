//! Invariant-form models of compact complex manifolds.
//!
//! A model is built from a Lie-algebra presentation: real structure constants
//! for the dual coframe e¹,…,e^{2n} together with an integrable complex
//! structure, given either as a matrix J with J² = −Id or as an explicit
//! (1,0)-coframe. The Chevalley-Eilenberg differential is
//!
//!   de^k = −Σ_{i<j} c^k_{ij} e^i ∧ e^j,
//!
//! where c^k_{ij} are the bracket coefficients [X_i, X_j] = Σ_k c^k_{ij} X_k.
//! All statements about the underlying manifold are evaluated on this
//! finite-dimensional subcomplex of invariant forms.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::form::{monomial_index, monomial_masks, space_dim, Form, VectorValuedForm, C};
use crate::index::{elements, Mask};
use crate::linalg::{CMat, CVec};

/// How a presentation is validated at build time.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ValidationMode {
    /// Residuals below `tol` count as zero.
    Tolerance(f64),
    /// Structure constants and J are converted exactly to rationals
    /// (every f64 is a rational) and d² = 0 / J² = −Id are checked exactly.
    ExactRational,
}

impl Default for ValidationMode {
    fn default() -> Self {
        ValidationMode::Tolerance(1e-12)
    }
}

/// The complex structure of a presentation.
#[derive(Clone, Debug, PartialEq)]
pub enum ComplexStructure {
    /// Rows are the (1,0)-coframe φ^a = Σ_m rows[a][m] e^m.
    Coframe(DMatrix<C>),
    /// Real 2n×2n matrix with J² = −Id acting on tangent vectors.
    J(DMatrix<f64>),
}

/// Lie-algebra presentation: the input data of a model.
#[derive(Clone, Debug, PartialEq)]
pub struct LieAlgebraPresentation {
    pub name: String,
    pub dim_real: usize,
    /// Sparse triples (k, i, j, c^k_{ij}) with i < j, 0-based.
    pub structure: Vec<(usize, usize, usize, f64)>,
    pub complex_structure: ComplexStructure,
}

impl LieAlgebraPresentation {
    /// Normalizes sparse triples to i < j, folding c^k_{ji} = −c^k_{ij},
    /// and rejects inconsistent or out-of-range entries.
    pub fn normalized_constants(&self) -> Result<BTreeMap<(usize, usize, usize), f64>> {
        let d = self.dim_real;
        let mut map: BTreeMap<(usize, usize, usize), f64> = BTreeMap::new();
        for &(k, i, j, c) in &self.structure {
            if k >= d || i >= d || j >= d {
                return Err(Error::RaggedConstants(format!(
                    "index out of range in triple ({k},{i},{j})"
                )));
            }
            if i == j {
                if c != 0.0 {
                    return Err(Error::RaggedConstants(format!(
                        "c^{k}_{{{i}{i}}} must vanish"
                    )));
                }
                continue;
            }
            let (key, val) = if i < j { ((k, i, j), c) } else { ((k, j, i), -c) };
            if let Some(prev) = map.get(&key) {
                if (prev - val).abs() > 0.0 {
                    return Err(Error::RaggedConstants(format!(
                        "conflicting values for c^{}_{{{},{}}}",
                        key.0, key.1, key.2
                    )));
                }
            } else {
                map.insert(key, val);
            }
        }
        Ok(map)
    }

    /// de^k as a sparse real 2-form: list of (i, j, coefficient), i < j.
    pub fn d_real_coframe(&self) -> Result<Vec<Vec<(usize, usize, f64)>>> {
        let map = self.normalized_constants()?;
        let mut out = vec![Vec::new(); self.dim_real];
        for (&(k, i, j), &c) in &map {
            if c != 0.0 {
                out[k].push((i, j, -c));
            }
        }
        Ok(out)
    }
}

/// Exact Jacobi check: d(de^k) = 0 in rational arithmetic over the real
/// coframe. Returns the first violating generator.
fn jacobi_exact(d_real: &[Vec<(usize, usize, f64)>], dim: usize) -> Option<usize> {
    for k in 0..dim {
        // d²e^k = Σ_{(i,j,c)} c · (de^i ∧ e^j − e^i ∧ de^j)
        let mut acc: BTreeMap<(usize, usize, usize), BigRational> = BTreeMap::new();
        let mut add3 = |a: usize, b: usize, c: usize, v: BigRational| {
            // sort (a,b,c) with sign
            let mut idx = [a, b, c];
            let mut sign = 1i64;
            for s in 0..2 {
                for t in 0..2 - s {
                    if idx[t] > idx[t + 1] {
                        idx.swap(t, t + 1);
                        sign = -sign;
                    }
                }
            }
            if idx[0] == idx[1] || idx[1] == idx[2] {
                return;
            }
            let key = (idx[0], idx[1], idx[2]);
            let val = v * BigRational::from_integer(BigInt::from(sign));
            let e = acc.entry(key).or_insert_with(BigRational::zero);
            *e += val;
        };
        for &(i, j, cij) in &d_real[k] {
            let cij = BigRational::from_float(cij).unwrap();
            for &(a, b, cab) in &d_real[i] {
                let v = cij.clone() * BigRational::from_float(cab).unwrap();
                add3(a, b, j, v);
            }
            for &(a, b, cab) in &d_real[j] {
                let v = cij.clone() * BigRational::from_float(cab).unwrap();
                add3(i, a, b, -v);
            }
        }
        if acc.values().any(|v| !v.is_zero()) {
            return Some(k);
        }
    }
    None
}

/// Exact check of J² = −Id over the rationals.
fn j_square_exact(j: &DMatrix<f64>) -> bool {
    let d = j.nrows();
    let jr: Vec<BigRational> = j.iter().map(|&x| BigRational::from_float(x).unwrap()).collect();
    let at = |r: usize, c: usize| jr[c * d + r].clone(); // column-major
    for r in 0..d {
        for c in 0..d {
            let mut s = BigRational::zero();
            for m in 0..d {
                s += at(r, m) * at(m, c);
            }
            let expect = if r == c {
                BigRational::from_integer(BigInt::from(-1))
            } else {
                BigRational::zero()
            };
            if s != expect {
                return false;
            }
        }
    }
    true
}

/// The built model: bases of every Λ^{p,q} and matrices for all operators.
#[derive(Clone, Debug)]
pub struct InvariantModel {
    n: usize,
    presentation: LieAlgebraPresentation,
    /// (1,0)-coframe rows in the real basis.
    coframe: DMatrix<C>,
    /// d of the complex generators: 0..n ↦ dφ^a, n..2n ↦ dφ̄^a.
    d_gen: Vec<Form>,
    del: BTreeMap<(usize, usize), CMat>,
    delbar: BTreeMap<(usize, usize), CMat>,
}

/// Operator names of the bigraded calculus.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum OperatorTag {
    D,
    Del,
    Delbar,
    Dh(f64),
    DMinusInvH(f64),
    DelDelbar,
    DhDMinusInvH(f64),
    Theta(f64),
}

impl OperatorTag {
    pub fn check_param(&self) -> Result<()> {
        match *self {
            OperatorTag::Dh(h)
            | OperatorTag::DMinusInvH(h)
            | OperatorTag::DhDMinusInvH(h)
            | OperatorTag::Theta(h) => {
                if h == 0.0 {
                    Err(Error::ZeroH)
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }
}

/// Block layout of the total-degree-k space ⊕_{p+q=k} Λ^{p,q}.
#[derive(Clone, Debug)]
pub struct DegreeLayout {
    pub n: usize,
    pub k: usize,
    /// (p, q, offset, len), p descending.
    pub blocks: Vec<(usize, usize, usize, usize)>,
    pub dim: usize,
}

impl DegreeLayout {
    pub fn new(n: usize, k: usize) -> Self {
        let mut blocks = Vec::new();
        let mut off = 0;
        let pmax = k.min(n);
        let pmin = k.saturating_sub(n);
        for p in (pmin..=pmax).rev() {
            let q = k - p;
            let len = space_dim(n, p, q);
            blocks.push((p, q, off, len));
            off += len;
        }
        DegreeLayout { n, k, blocks, dim: off }
    }

    pub fn to_vec(&self, f: &Form) -> CVec {
        let mut v = CVec::zeros(self.dim);
        for &(p, q, off, len) in &self.blocks {
            let c = f.component(p, q);
            v.rows_mut(off, len).copy_from(&c);
        }
        v
    }

    pub fn to_form(&self, v: &CVec) -> Form {
        let mut f = Form::zero(self.n);
        for &(p, q, off, len) in &self.blocks {
            f.set_component(p, q, v.rows(off, len).into_owned());
        }
        f
    }
}

impl InvariantModel {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn presentation(&self) -> &LieAlgebraPresentation {
        &self.presentation
    }

    pub fn coframe(&self) -> &DMatrix<C> {
        &self.coframe
    }

    /// dφ^a in the model's own monomial basis.
    pub fn d_generator(&self, a: usize) -> &Form {
        &self.d_gen[a]
    }

    pub fn space_dim(&self, p: usize, q: usize) -> usize {
        space_dim(self.n, p, q)
    }

    pub fn del_matrix(&self, p: usize, q: usize) -> &CMat {
        &self.del[&(p, q)]
    }

    pub fn delbar_matrix(&self, p: usize, q: usize) -> &CMat {
        &self.delbar[&(p, q)]
    }

    /// ∂∂̄ as a matrix Λ^{p,q} → Λ^{p+1,q+1}.
    pub fn deldelbar_matrix(&self, p: usize, q: usize) -> CMat {
        self.del_matrix(p, q + 1) * self.delbar_matrix(p, q)
    }

    /// d = ∂ + ∂̄ on the total-degree-k space.
    pub fn d_total(&self, k: usize) -> CMat {
        self.dh_total(k, 1.0)
    }

    /// d_h = h∂ + ∂̄ on the total-degree-k space.
    pub fn dh_total(&self, k: usize, h: f64) -> CMat {
        let src = DegreeLayout::new(self.n, k);
        let dst = DegreeLayout::new(self.n, k + 1);
        let mut m = CMat::zeros(dst.dim, src.dim);
        for &(p, q, soff, slen) in &src.blocks {
            // ∂ block
            if p + 1 <= self.n {
                if let Some(&(_, _, doff, dlen)) = dst.blocks.iter().find(|b| b.0 == p + 1 && b.1 == q) {
                    let blk = self.del_matrix(p, q) * C::new(h, 0.0);
                    m.view_mut((doff, soff), (dlen, slen)).copy_from(&blk);
                }
            }
            // ∂̄ block
            if q + 1 <= self.n {
                if let Some(&(_, _, doff, dlen)) = dst.blocks.iter().find(|b| b.0 == p && b.1 == q + 1) {
                    let blk = self.delbar_matrix(p, q);
                    m.view_mut((doff, soff), (dlen, slen)).copy_from(blk);
                }
            }
        }
        m
    }

    /// d_{−1/h} on the total-degree-k space.
    pub fn dminus_total(&self, k: usize, h: f64) -> CMat {
        self.dh_total(k, -1.0 / h)
    }

    /// d_h d_{−1/h}: degree k → k+2.
    pub fn dh_dminus_total(&self, k: usize, h: f64) -> CMat {
        self.dh_total(k + 1, h) * self.dminus_total(k, h)
    }

    /// θ_h on the total-degree-k space: multiplies the (p,q)-block by h^p.
    pub fn theta_total(&self, k: usize, h: f64) -> CMat {
        let layout = DegreeLayout::new(self.n, k);
        let mut m = CMat::zeros(layout.dim, layout.dim);
        for &(p, _q, off, len) in &layout.blocks {
            let s = C::new(h.powi(p as i32), 0.0);
            for i in 0..len {
                m[(off + i, off + i)] = s;
            }
        }
        m
    }

    /// Applies a differential operator to a form of arbitrary mixed degree.
    pub fn apply_diff(&self, tag: OperatorTag, a: &Form) -> Result<Form> {
        tag.check_param()?;
        let mut out = Form::zero(self.n);
        for (p, q) in a.bidegrees() {
            let v = a.component(p, q);
            match tag {
                OperatorTag::Del => {
                    if p + 1 <= self.n {
                        let w = self.del_matrix(p, q) * &v;
                        out = out.add(&Form::from_component(self.n, p + 1, q, w));
                    }
                }
                OperatorTag::Delbar => {
                    if q + 1 <= self.n {
                        let w = self.delbar_matrix(p, q) * &v;
                        out = out.add(&Form::from_component(self.n, p, q + 1, w));
                    }
                }
                OperatorTag::D => {
                    let part = Form::from_component(self.n, p, q, v.clone());
                    out = out.add(&self.apply_diff(OperatorTag::Del, &part)?);
                    out = out.add(&self.apply_diff(OperatorTag::Delbar, &part)?);
                }
                OperatorTag::Dh(h) => {
                    let part = Form::from_component(self.n, p, q, v.clone());
                    out = out.add(&self.apply_diff(OperatorTag::Del, &part)?.scale(C::new(h, 0.0)));
                    out = out.add(&self.apply_diff(OperatorTag::Delbar, &part)?);
                }
                OperatorTag::DMinusInvH(h) => {
                    let part = Form::from_component(self.n, p, q, v.clone());
                    out = out
                        .add(&self.apply_diff(OperatorTag::Del, &part)?.scale(C::new(-1.0 / h, 0.0)));
                    out = out.add(&self.apply_diff(OperatorTag::Delbar, &part)?);
                }
                OperatorTag::DelDelbar => {
                    if p + 1 <= self.n && q + 1 <= self.n {
                        let w = self.deldelbar_matrix(p, q) * &v;
                        out = out.add(&Form::from_component(self.n, p + 1, q + 1, w));
                    }
                }
                OperatorTag::DhDMinusInvH(h) => {
                    let part = Form::from_component(self.n, p, q, v.clone());
                    let inner = self.apply_diff(OperatorTag::DMinusInvH(h), &part)?;
                    out = out.add(&self.apply_diff(OperatorTag::Dh(h), &inner)?);
                }
                OperatorTag::Theta(h) => {
                    let s = C::new(h.powi(p as i32), 0.0);
                    out = out.add(&Form::from_component(self.n, p, q, v * s));
                }
            }
        }
        Ok(out)
    }

    /// ∂̄ of a vector-valued form transported through v ↦ v⌟u for a
    /// d-closed trivializing u (the Calabi-Yau transport). Returns the
    /// coefficient form ∂̄(v⌟u); see `deformation` for the pullback.
    pub fn delbar_contracted(&self, v: &VectorValuedForm, u: &Form) -> Result<Form> {
        self.apply_diff(OperatorTag::Delbar, &v.contract(u))
    }

    /// Matrix of conjugation Λ^{p,q} → Λ^{q,p}: conj(x) = S · x̄ with S the
    /// signed permutation returned here.
    pub fn conj_matrix(&self, p: usize, q: usize) -> CMat {
        let n = self.n;
        let mut s = CMat::zeros(space_dim(n, q, p), space_dim(n, p, q));
        let sign = if (p * q) % 2 == 0 { 1.0 } else { -1.0 };
        for k in 0..space_dim(n, p, q) {
            let (im, jm) = monomial_masks(n, p, q, k);
            s[(monomial_index(n, jm, im), k)] = C::new(sign, 0.0);
        }
        s
    }
}

/// Builds and validates a model from a presentation.
pub fn build_model(pres: &LieAlgebraPresentation) -> Result<InvariantModel> {
    build_model_with(pres, ValidationMode::default())
}

pub fn build_model_with(pres: &LieAlgebraPresentation, mode: ValidationMode) -> Result<InvariantModel> {
    let dim = pres.dim_real;
    if dim == 0 || dim % 2 != 0 {
        return Err(Error::DimensionOdd(dim));
    }
    let n = dim / 2;
    let d_real = pres.d_real_coframe()?;

    // Jacobi identity: d² = 0 on every degree-1 real generator.
    match mode {
        ValidationMode::Tolerance(tol) => {
            if let Some((k, res)) = jacobi_float(&d_real, dim, tol) {
                return Err(Error::JacobiViolation { generator: k, residual: res });
            }
        }
        ValidationMode::ExactRational => {
            if let Some(k) = jacobi_exact(&d_real, dim) {
                return Err(Error::JacobiViolation { generator: k, residual: f64::NAN });
            }
        }
    }

    // (1,0)-coframe.
    let coframe = match &pres.complex_structure {
        ComplexStructure::Coframe(c) => {
            if c.nrows() != n || c.ncols() != dim {
                return Err(Error::NotAlmostComplex { residual: f64::INFINITY });
            }
            c.clone()
        }
        ComplexStructure::J(j) => {
            if j.nrows() != dim || j.ncols() != dim {
                return Err(Error::NotAlmostComplex { residual: f64::INFINITY });
            }
            let j2 = j * j + DMatrix::<f64>::identity(dim, dim);
            let res = j2.norm();
            match mode {
                ValidationMode::Tolerance(tol) => {
                    if res > tol * (1.0 + j.norm()) {
                        return Err(Error::NotAlmostComplex { residual: res });
                    }
                }
                ValidationMode::ExactRational => {
                    if !j_square_exact(j) {
                        return Err(Error::NotAlmostComplex { residual: res });
                    }
                }
            }
            coframe_from_j(j)?
        }
    };

    // The rows together with their conjugates must span ℂ^{2n}.
    let (d_gen, worst) = structure_equations(&d_real, &coframe)?;
    let tol = match mode {
        ValidationMode::Tolerance(t) => t,
        ValidationMode::ExactRational => 1e-12,
    };
    if worst > tol {
        return Err(Error::NonIntegrable { residual: worst });
    }
    let d_gen: Vec<Form> = d_gen
        .iter()
        .map(|f| {
            // drop the numerically-zero (0,2) block entirely
            let mut g = Form::zero(n);
            for (p, q) in f.bidegrees() {
                if (p, q) != (0, 2) {
                    g.set_component(p, q, f.component(p, q));
                }
            }
            g
        })
        .collect();
    let mut all_gen = d_gen.clone();
    for a in 0..n {
        all_gen.push(d_gen[a].conj());
    }

    // Assemble ∂ and ∂̄ on every bidegree by the Leibniz rule.
    let mut del = BTreeMap::new();
    let mut delbar = BTreeMap::new();
    for p in 0..=n {
        for q in 0..=n {
            let dim_src = space_dim(n, p, q);
            let dim_del = if p + 1 <= n { space_dim(n, p + 1, q) } else { 0 };
            let dim_dbar = if q + 1 <= n { space_dim(n, p, q + 1) } else { 0 };
            let mut mdel = CMat::zeros(dim_del, dim_src);
            let mut mdbar = CMat::zeros(dim_dbar, dim_src);
            for k in 0..dim_src {
                let (im, jm) = monomial_masks(n, p, q, k);
                let df = d_monomial(n, &all_gen, im, jm);
                if p + 1 <= n {
                    mdel.column_mut(k).copy_from(&df.component(p + 1, q));
                }
                if q + 1 <= n {
                    mdbar.column_mut(k).copy_from(&df.component(p, q + 1));
                }
            }
            del.insert((p, q), mdel);
            delbar.insert((p, q), mdbar);
        }
    }

    Ok(InvariantModel {
        n,
        presentation: pres.clone(),
        coframe,
        d_gen,
        del,
        delbar,
    })
}

fn jacobi_float(d_real: &[Vec<(usize, usize, f64)>], dim: usize, tol: f64) -> Option<(usize, f64)> {
    let mut scale: f64 = 1.0;
    for row in d_real {
        for &(_, _, c) in row {
            scale = scale.max(c.abs());
        }
    }
    for k in 0..dim {
        let mut acc: BTreeMap<(usize, usize, usize), f64> = BTreeMap::new();
        let mut add3 = |a: usize, b: usize, c: usize, v: f64| {
            let mut idx = [a, b, c];
            let mut sign = 1.0;
            for s in 0..2 {
                for t in 0..2 - s {
                    if idx[t] > idx[t + 1] {
                        idx.swap(t, t + 1);
                        sign = -sign;
                    }
                }
            }
            if idx[0] == idx[1] || idx[1] == idx[2] {
                return;
            }
            *acc.entry((idx[0], idx[1], idx[2])).or_insert(0.0) += sign * v;
        };
        for &(i, j, cij) in &d_real[k] {
            for &(a, b, cab) in &d_real[i] {
                add3(a, b, j, cij * cab);
            }
            for &(a, b, cab) in &d_real[j] {
                add3(i, a, b, -cij * cab);
            }
        }
        let res = acc.values().map(|v| v.abs()).fold(0.0, f64::max);
        if res > tol * scale * scale {
            return Some((k, res));
        }
    }
    None
}

/// d of the complex generators φ^a for a given (1,0)-coframe, together with
/// the worst (0,2)-component norm (the integrability defect).
pub fn structure_equations(
    d_real: &[Vec<(usize, usize, f64)>],
    coframe: &DMatrix<C>,
) -> Result<(Vec<Form>, f64)> {
    let n = coframe.nrows();
    let dim = coframe.ncols();
    let t = stack_coframe(coframe);
    let tinv = t
        .clone()
        .try_inverse()
        .ok_or(Error::NotAlmostComplex { residual: f64::INFINITY })?;
    let mut d_gen: Vec<Form> = Vec::with_capacity(n);
    for a in 0..n {
        let mut df = Form::zero(n);
        for m in 0..dim {
            let coef = coframe[(a, m)];
            if coef.norm() == 0.0 {
                continue;
            }
            for &(i, j, c) in &d_real[m] {
                let two_form = real_wedge_in_complex(&tinv, n, i, j);
                df = df.add(&two_form.scale(coef * C::new(c, 0.0)));
            }
        }
        d_gen.push(df.pruned(1e-14));
    }
    let mut worst: f64 = 0.0;
    for df in &d_gen {
        let c02 = df.component(0, 2);
        worst = worst.max(c02.iter().map(|c| c.norm()).fold(0.0, f64::max));
    }
    Ok((d_gen, worst))
}

/// The 2n×2n change-of-generator matrix from `from`'s complex generators to
/// `to`'s: gen_from = S · gen_to on degree one.
pub fn generator_transition(from: &InvariantModel, to: &InvariantModel) -> CMat {
    let t_from = stack_coframe(from.coframe());
    let t_to = stack_coframe(to.coframe());
    t_from * t_to.try_inverse().expect("coframe spans")
}

/// Re-expresses a form given in `from`-coordinates in `to`-coordinates. The
/// underlying real coframe is shared; only the bigrading moves.
pub fn transport_form(from: &InvariantModel, to: &InvariantModel, f: &Form) -> Form {
    let n = from.n();
    let s = generator_transition(from, to);
    // images of the `from` generators as degree-one forms of `to`
    let gen_images: Vec<Form> = (0..2 * n)
        .map(|g| {
            let mut acc = Form::zero(n);
            for h in 0..2 * n {
                let c = s[(g, h)];
                if c.norm() == 0.0 {
                    continue;
                }
                let mono = if h < n {
                    Form::monomial(n, 1 << h, 0, c)
                } else {
                    Form::monomial(n, 0, 1 << (h - n), c)
                };
                acc = acc.add(&mono);
            }
            acc
        })
        .collect();
    let mut out = Form::zero(n);
    for (p, q) in f.bidegrees() {
        let v = f.component(p, q);
        for (k, c) in v.iter().enumerate() {
            if c.norm() == 0.0 {
                continue;
            }
            let (im, jm) = monomial_masks(n, p, q, k);
            let mut term = Form::monomial(n, 0, 0, *c);
            for g in elements(im) {
                term = term.wedge(&gen_images[g]).expect("degree bound");
            }
            for g in elements(jm) {
                term = term.wedge(&gen_images[n + g]).expect("degree bound");
            }
            out = out.add(&term);
        }
    }
    out
}

fn stack_coframe(coframe: &DMatrix<C>) -> CMat {
    let n = coframe.nrows();
    let dim = coframe.ncols();
    let mut t = CMat::zeros(dim, dim);
    for a in 0..n {
        for m in 0..dim {
            t[(a, m)] = coframe[(a, m)];
            t[(n + a, m)] = coframe[(a, m)].conj();
        }
    }
    t
}

/// Canonical (1,0)-coframe from J: left eigenvectors for the eigenvalue i,
/// extracted from the projector (Id − i·Jᵀ)/2 with pivoted elimination so the
/// result is deterministic.
fn coframe_from_j(j: &DMatrix<f64>) -> Result<DMatrix<C>> {
    let dim = j.nrows();
    let n = dim / 2;
    let jt = j.transpose();
    let mut proj = CMat::zeros(dim, dim);
    for r in 0..dim {
        for c in 0..dim {
            let idp = if r == c { 1.0 } else { 0.0 };
            proj[(r, c)] = C::new(idp * 0.5, -0.5 * jt[(r, c)]);
        }
    }
    // Columns of proj span the (1,0)-covectors (as column vectors of coefficients).
    let mut rows: Vec<DVector<C>> = Vec::new();
    for c in 0..dim {
        let cand = proj.column(c).into_owned();
        let mut v = cand.clone();
        for b in &rows {
            let bn = b.dotc(b);
            let coef = b.dotc(&v) / bn;
            v -= b * coef;
        }
        if v.norm() > 1e-9 {
            rows.push(cand);
            if rows.len() == n {
                break;
            }
        }
    }
    if rows.len() != n {
        return Err(Error::NotAlmostComplex { residual: f64::INFINITY });
    }
    // Canonicalize: scale each row so its first significant entry is 1.
    let mut out = DMatrix::<C>::zeros(n, dim);
    for (a, v) in rows.iter().enumerate() {
        let lead = (0..dim).find(|&m| v[m].norm() > 1e-9).unwrap();
        let s = v[lead];
        for m in 0..dim {
            out[(a, m)] = v[m] / s;
        }
    }
    Ok(out)
}

/// e^i ∧ e^j expressed in the complex monomial basis.
fn real_wedge_in_complex(tinv: &CMat, n: usize, i: usize, j: usize) -> Form {
    let mut out = Form::zero(n);
    let dim = 2 * n;
    for g in 0..dim {
        let cg = tinv[(i, g)];
        if cg.norm() == 0.0 {
            continue;
        }
        for h in 0..dim {
            let ch = tinv[(j, h)];
            if ch.norm() == 0.0 {
                continue;
            }
            if let Some(m) = generator_wedge(n, g, h) {
                out = out.add(&m.scale(cg * ch));
            }
        }
    }
    out
}

/// gen_g ∧ gen_h as a Form monomial; generators 0..n are φ, n..2n are φ̄.
fn generator_wedge(n: usize, g: usize, h: usize) -> Option<Form> {
    if g == h {
        return None;
    }
    let one = C::new(1.0, 0.0);
    let (hol_g, idx_g) = (g < n, g % n);
    let (hol_h, idx_h) = (h < n, h % n);
    let f = match (hol_g, hol_h) {
        (true, true) => {
            if idx_g == idx_h {
                return None;
            }
            let sign = if idx_g < idx_h { 1.0 } else { -1.0 };
            Form::monomial(n, (1 << idx_g) | (1 << idx_h), 0, C::new(sign, 0.0))
        }
        (false, false) => {
            if idx_g == idx_h {
                return None;
            }
            let sign = if idx_g < idx_h { 1.0 } else { -1.0 };
            Form::monomial(n, 0, (1 << idx_g) | (1 << idx_h), C::new(sign, 0.0))
        }
        (true, false) => Form::monomial(n, 1 << idx_g, 1 << idx_h, one),
        (false, true) => Form::monomial(n, 1 << idx_h, 1 << idx_g, -one),
    };
    Some(f)
}

/// d of the basis monomial φ^I ∧ φ̄^J by the Leibniz rule.
fn d_monomial(n: usize, d_gen: &[Form], imask: Mask, jmask: Mask) -> Form {
    let mut out = Form::zero(n);
    let hol = elements(imask);
    let ahol = elements(jmask);
    let p = hol.len();
    if p + ahol.len() >= 2 * n {
        return out; // top-degree forms are closed
    }
    // slot t (1-based) among [I then J]; d(g_t) is even so it moves to front freely
    for (l, &s) in hol.iter().enumerate() {
        let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
        let rest = Form::monomial(n, imask & !(1 << s), jmask, C::new(sign, 0.0));
        let term = d_gen[s].wedge(&rest).expect("degree bound");
        out = out.add(&term);
    }
    for (r, &s) in ahol.iter().enumerate() {
        let t = p + r;
        let sign = if t % 2 == 0 { 1.0 } else { -1.0 };
        let rest = Form::monomial(n, imask, jmask & !(1 << s), C::new(sign, 0.0));
        let term = d_gen[n + s].wedge(&rest).expect("degree bound");
        out = out.add(&term);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn torus2() -> InvariantModel {
        catalog::entry("torus2").unwrap().model().unwrap()
    }

    fn iwasawa() -> InvariantModel {
        catalog::entry("iwasawa").unwrap().model().unwrap()
    }

    #[test]
    fn torus_operators_vanish() {
        let m = torus2();
        for p in 0..=2 {
            for q in 0..=2 {
                assert!(m.del_matrix(p, q).norm() < 1e-14);
                assert!(m.delbar_matrix(p, q).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn iwasawa_structure_equations() {
        let m = iwasawa();
        // ∂̄ vanishes on Λ^{1,0} and ∂φ³ = −φ¹∧φ²
        assert!(m.delbar_matrix(1, 0).norm() < 1e-13);
        let phi3 = Form::monomial(3, 0b100, 0, C::new(1.0, 0.0));
        let d3 = m.apply_diff(OperatorTag::Del, &phi3).unwrap();
        let expect = Form::monomial(3, 0b011, 0, C::new(-1.0, 0.0));
        assert!(d3.sub(&expect).norm_inf() < 1e-12);
    }

    #[test]
    fn squares_vanish_on_all_bidegrees() {
        for name in ["torus2", "iwasawa", "kodaira_thurston"] {
            let m = catalog::entry(name).unwrap().model().unwrap();
            let n = m.n();
            for p in 0..=n {
                for q in 0..=n {
                    if p + 1 < n {
                        let dd = m.del_matrix(p + 1, q) * m.del_matrix(p, q);
                        assert!(dd.norm() < 1e-12, "del² at ({p},{q}) on {name}");
                    }
                    if q + 1 < n {
                        let dd = m.delbar_matrix(p, q + 1) * m.delbar_matrix(p, q);
                        assert!(dd.norm() < 1e-12, "delbar² at ({p},{q}) on {name}");
                    }
                    if p + 1 <= n && q + 1 <= n {
                        let anti = m.del_matrix(p, q + 1) * m.delbar_matrix(p, q)
                            + m.delbar_matrix(p + 1, q) * m.del_matrix(p, q);
                        assert!(anti.norm() < 1e-12, "anticommutator at ({p},{q}) on {name}");
                    }
                }
            }
            for k in 0..2 * n {
                let d2 = m.d_total(k + 1) * m.d_total(k);
                assert!(d2.norm() < 1e-12, "d² at degree {k} on {name}");
                for h in [0.5, -0.5, 2.0] {
                    let dh2 = m.dh_total(k + 1, h) * m.dh_total(k, h);
                    assert!(dh2.norm() < 1e-12, "d_h² at degree {k} on {name}");
                }
            }
        }
    }

    #[test]
    fn dh_dminus_is_scaled_deldelbar() {
        let m = iwasawa();
        let n = m.n();
        for h in [0.5, -0.5, 1.0, -1.0, 2.0] {
            for k in 0..=2 * n - 2 {
                let lhs = m.dh_dminus_total(k, h);
                // (h + 1/h)·∂∂̄ assembled blockwise on the same layout
                let src = DegreeLayout::new(n, k);
                let dst = DegreeLayout::new(n, k + 2);
                let mut rhs = CMat::zeros(dst.dim, src.dim);
                for &(p, q, soff, slen) in &src.blocks {
                    if p + 1 > n || q + 1 > n {
                        continue;
                    }
                    if let Some(&(_, _, doff, dlen)) =
                        dst.blocks.iter().find(|b| b.0 == p + 1 && b.1 == q + 1)
                    {
                        let blk = m.deldelbar_matrix(p, q) * C::new(h + 1.0 / h, 0.0);
                        rhs.view_mut((doff, soff), (dlen, slen)).copy_from(&blk);
                    }
                }
                assert!((lhs - rhs).norm() < 1e-11, "h = {h}, k = {k}");
            }
        }
    }

    #[test]
    fn theta_is_chain_map_to_dh() {
        // θ_h ∘ d = d_h ∘ θ_h as matrices
        for name in ["torus2", "iwasawa"] {
            let m = catalog::entry(name).unwrap().model().unwrap();
            let h = 2.0;
            for k in 0..2 * m.n() {
                let lhs = m.theta_total(k + 1, h) * m.d_total(k);
                let rhs = m.dh_total(k, h) * m.theta_total(k, h);
                assert!((lhs - rhs).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn dh_on_iwasawa_phi3() {
        let m = iwasawa();
        let phi3 = Form::monomial(3, 0b100, 0, C::new(1.0, 0.0));
        let got = m.apply_diff(OperatorTag::Dh(2.0), &phi3).unwrap();
        let expect = Form::monomial(3, 0b011, 0, C::new(-2.0, 0.0));
        assert!(got.sub(&expect).norm_inf() < 1e-12);
    }

    #[test]
    fn conjugation_intertwines_del_delbar() {
        let m = iwasawa();
        let a = Form::monomial(3, 0b001, 0b010, C::new(0.7, -0.3))
            .add(&Form::monomial(3, 0b100, 0b001, C::new(-1.2, 0.5)));
        let lhs = m.apply_diff(OperatorTag::Del, &a).unwrap().conj();
        let rhs = m.apply_diff(OperatorTag::Delbar, &a.conj()).unwrap();
        assert!(lhs.sub(&rhs).norm_inf() < 1e-12);
    }

    #[test]
    fn zero_h_is_rejected() {
        let m = torus2();
        let a = Form::monomial(2, 0b01, 0, C::new(1.0, 0.0));
        for tag in [
            OperatorTag::Dh(0.0),
            OperatorTag::DMinusInvH(0.0),
            OperatorTag::DhDMinusInvH(0.0),
            OperatorTag::Theta(0.0),
        ] {
            match m.apply_diff(tag, &a) {
                Err(Error::ZeroH) => {}
                other => panic!("expected ZeroH, got {other:?}"),
            }
        }
    }

    #[test]
    fn bad_j_is_rejected() {
        let mut j = DMatrix::<f64>::zeros(4, 4);
        j[(0, 1)] = 1.0;
        j[(1, 0)] = -1.0;
        j[(2, 3)] = 1.0;
        j[(3, 2)] = -0.5; // J² ≠ −Id
        let pres = LieAlgebraPresentation {
            name: "bad".into(),
            dim_real: 4,
            structure: vec![],
            complex_structure: ComplexStructure::J(j),
        };
        match build_model(&pres) {
            Err(Error::NotAlmostComplex { .. }) => {}
            other => panic!("expected NotAlmostComplex, got {other:?}"),
        }
    }

    #[test]
    fn jacobi_violation_is_rejected() {
        // de² = −e³∧e⁴, de³ = −e¹∧e² gives d²e² = e¹∧e²∧e⁴ ≠ 0
        let pres = LieAlgebraPresentation {
            name: "nojacobi".into(),
            dim_real: 4,
            structure: vec![(1, 2, 3, 1.0), (2, 0, 1, 1.0)],
            complex_structure: ComplexStructure::J({
                let mut j = DMatrix::<f64>::zeros(4, 4);
                j[(0, 1)] = -1.0;
                j[(1, 0)] = 1.0;
                j[(2, 3)] = -1.0;
                j[(3, 2)] = 1.0;
                j
            }),
        };
        match build_model(&pres) {
            Err(Error::JacobiViolation { .. }) => {}
            other => panic!("expected JacobiViolation, got {other:?}"),
        }
        match build_model_with(&pres, ValidationMode::ExactRational) {
            Err(Error::JacobiViolation { .. }) => {}
            other => panic!("expected exact JacobiViolation, got {other:?}"),
        }
    }

    #[test]
    fn j_built_torus_matches_coframe_torus() {
        // standard J on R⁴ gives the same operators as the explicit coframe
        let mut j = DMatrix::<f64>::zeros(4, 4);
        // J e_1 = e_2, J e_2 = −e_1, J e_3 = e_4, J e_4 = −e_3
        j[(1, 0)] = 1.0;
        j[(0, 1)] = -1.0;
        j[(3, 2)] = 1.0;
        j[(2, 3)] = -1.0;
        let pres = LieAlgebraPresentation {
            name: "torus2j".into(),
            dim_real: 4,
            structure: vec![],
            complex_structure: ComplexStructure::J(j),
        };
        let m = build_model_with(&pres, ValidationMode::ExactRational).unwrap();
        assert_eq!(m.n(), 2);
        // dφ = 0 for the torus regardless of coframe choice
        for a in 0..2 {
            assert!(m.d_generator(a).norm_inf() < 1e-13);
        }
    }

    #[test]
    fn nonintegrable_j_is_rejected() {
        // On the Iwasawa algebra, swapping the roles so that dφ has a (0,2)
        // part: use the conjugate-looking coframe on e⁵,e⁶.
        let mut rows = DMatrix::<C>::zeros(3, 6);
        rows[(0, 0)] = C::new(1.0, 0.0);
        rows[(0, 1)] = C::new(0.0, 1.0);
        rows[(1, 2)] = C::new(1.0, 0.0);
        rows[(1, 3)] = C::new(0.0, 1.0);
        rows[(2, 4)] = C::new(1.0, 0.0);
        rows[(2, 5)] = C::new(0.0, -1.0); // conjugated third direction
        let mut pres = catalog::entry("iwasawa").unwrap().presentation();
        pres.complex_structure = ComplexStructure::Coframe(rows);
        match build_model(&pres) {
            Err(Error::NonIntegrable { .. }) => {}
            other => panic!("expected NonIntegrable, got {other:?}"),
        }
    }
}
