//! Detection and certification of metric and form structures: Gauduchon,
//! balanced, strongly Gauduchon and its h-twisted variant, p-SKT, p-HS and
//! hp-Hermitian-symplectic forms, plus the equivalence audits tying them
//! together.
//!
//! Existence searches run over the cone of positive candidates cut out by the
//! structure's linear closedness constraints. For p ∈ {0, 1, n−1, n} the
//! positivity side is an exact Hermitian eigenvalue problem, so feasibility is
//! decided two-sidedly (a positive solution or a positive-semidefinite dual
//! certificate of emptiness). For other p the verdict is one-sided.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::form::{monomial_index, monomial_masks, space_dim, Form, C};
use crate::linalg::{self, CMat, CVec};

use crate::model::{DegreeLayout, InvariantModel, OperatorTag};

pub type RVec = DVector<f64>;
pub type RMat = DMatrix<f64>;

/// The structure kinds of the detection suite.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum StructureKind {
    Gauduchon,
    Balanced,
    Sg,
    HSg(f64),
    PSkt(usize),
    PHs(usize),
    HpHs(usize, f64),
    HGauduchon(f64),
}

impl StructureKind {
    pub fn label(&self) -> String {
        match *self {
            StructureKind::Gauduchon => "gauduchon".into(),
            StructureKind::Balanced => "balanced".into(),
            StructureKind::Sg => "sG".into(),
            StructureKind::HSg(h) => format!("h-sG(h={h})"),
            StructureKind::PSkt(p) => format!("{p}-SKT"),
            StructureKind::PHs(p) => format!("{p}-HS"),
            StructureKind::HpHs(p, h) => format!("h{p}-HS(h={h})"),
            StructureKind::HGauduchon(h) => format!("h-gauduchon(h={h})"),
        }
    }

    /// Degree of the candidate form: 1 for metric kinds, p for (p,p) kinds.
    pub fn candidate_degree(&self, n: usize) -> usize {
        match *self {
            StructureKind::PSkt(p) | StructureKind::PHs(p) | StructureKind::HpHs(p, _) => p,
            _ => {
                let _ = n;
                1
            }
        }
    }

    pub fn check_param(&self) -> Result<()> {
        match *self {
            StructureKind::HSg(h) | StructureKind::HpHs(_, h) | StructureKind::HGauduchon(h) => {
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

/// Positivity evidence carried by certificates.
#[derive(Clone, Debug)]
pub enum PositivityEvidence {
    /// Exact eigenvalues of the associated Hermitian matrix (p ∈ {0,1,n−1,n}).
    Eigenvalues(Vec<f64>),
    /// Sampled evaluations against decomposable test forms.
    Sampled { samples: usize, min_value: f64 },
}

impl PositivityEvidence {
    pub fn margin(&self) -> f64 {
        match self {
            PositivityEvidence::Eigenvalues(e) => e.first().copied().unwrap_or(0.0),
            PositivityEvidence::Sampled { min_value, .. } => *min_value,
        }
    }
}

#[derive(Clone, Debug)]
pub struct StructureCertificate {
    pub kind: StructureKind,
    /// The certified candidate: the metric ω for metric kinds, the (p,p)-form otherwise.
    pub candidate: Form,
    /// Auxiliary witness forms (γ for sG, Ω^{n−2,n} for h-sG, the Ω^{i,2p−i}).
    pub witnesses: Vec<(String, Form)>,
    pub residuals: Vec<(String, f64)>,
    pub positivity: PositivityEvidence,
}

#[derive(Clone, Debug)]
pub enum CheckOutcome {
    Certified(StructureCertificate),
    Rejected { reason: String, residual: f64 },
}

impl CheckOutcome {
    pub fn is_certified(&self) -> bool {
        matches!(self, CheckOutcome::Certified(_))
    }

    pub fn certificate(self) -> Option<StructureCertificate> {
        match self {
            CheckOutcome::Certified(c) => Some(c),
            CheckOutcome::Rejected { .. } => None,
        }
    }
}

/// Residual tolerance for certificates.
pub const CERT_TOL: f64 = 1e-9;
/// Strict-positivity margin for found structures.
pub const POS_MARGIN: f64 = 1e-8;

/// Top coefficient of the reference volume (identity metric), fixing the
/// orientation used by the positivity pairings.
fn ref_top_coeff(n: usize) -> C {
    let mut omega = Form::zero(n);
    for j in 0..n {
        omega = omega.add(&Form::monomial(n, 1 << j, 1 << j, C::new(0.0, 1.0)));
    }
    let fact: f64 = (1..=n).map(|x| x as f64).product();
    omega.wedge_pow(n).unwrap().scale(C::new(1.0 / fact, 0.0)).top_coefficient()
}

/// Hermitian coefficient matrix H of a (1,1)-form ω = i Σ H_{jk} φ^j ∧ φ̄^k.
pub fn hermitian_matrix_of(n: usize, omega: &Form) -> DMatrix<C> {
    let v = omega.component(1, 1);
    DMatrix::from_fn(n, n, |j, k| v[monomial_index(n, 1 << j, 1 << k)] * C::new(0.0, -1.0))
}

/// The Hermitian pairing matrix of an (n−1,n−1)-form: Q_{jk} ∝ ∫ Φ ∧ iφ^j∧φ̄^k.
/// Φ is strictly positive iff Q is positive definite.
pub fn dual_matrix_of(n: usize, phi: &Form) -> DMatrix<C> {
    let scale = ref_top_coeff(n);
    let q = DMatrix::from_fn(n, n, |j, k| {
        let probe = Form::monomial(n, 1 << j, 1 << k, C::new(0.0, 1.0));
        match phi.wedge(&probe) {
            Ok(w) => w.top_coefficient() / scale,
            Err(_) => C::new(0.0, 0.0),
        }
    });
    (&q + q.adjoint()) * C::new(0.5, 0.0)
}

/// Strict weak positivity of a real (p,p)-form. Exact for p ∈ {0,1,n−1,n};
/// sampled against decomposable frames otherwise.
pub fn weak_positivity(n: usize, form: &Form, p: usize, seed: u64) -> Result<PositivityEvidence> {
    if p == 0 {
        let c = form.component(0, 0)[0];
        if c.im.abs() > 1e-10 || c.re <= 0.0 {
            return Err(Error::NotPositive(c.re));
        }
        return Ok(PositivityEvidence::Eigenvalues(vec![c.re]));
    }
    if p == n {
        let scale = ref_top_coeff(n);
        let v = form.top_coefficient() / scale;
        if v.im.abs() > 1e-10 || v.re <= 0.0 {
            return Err(Error::NotPositive(v.re));
        }
        return Ok(PositivityEvidence::Eigenvalues(vec![v.re]));
    }
    if p == 1 || p == n - 1 {
        let h = if p == 1 {
            hermitian_matrix_of(n, form)
        } else {
            dual_matrix_of(n, form)
        };
        let (eigs, _) = linalg::hermitian_eigen(&h);
        if eigs.first().copied().unwrap_or(0.0) <= 0.0 {
            return Err(Error::NotPositive(eigs.first().copied().unwrap_or(0.0)));
        }
        return Ok(PositivityEvidence::Eigenvalues(eigs));
    }
    // sampled decomposable test forms i σ¹∧σ̄¹ ∧ … for random complex frames
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples = 200;
    let scale = ref_top_coeff(n);
    let mut min_value = f64::INFINITY;
    for _ in 0..samples {
        let mut test = Form::one(n);
        for _ in 0..(n - p) {
            let sigma: Vec<C> = (0..n)
                .map(|_| C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            let mut line = Form::zero(n);
            for (j, a) in sigma.iter().enumerate() {
                for (k, b) in sigma.iter().enumerate() {
                    line = line.add(&Form::monomial(n, 1 << j, 1 << k, C::new(0.0, 1.0) * a * b.conj()));
                }
            }
            test = test.wedge(&line)?;
        }
        let val = (form.wedge(&test)?.top_coefficient() / scale).re;
        min_value = min_value.min(val);
        if min_value <= POS_MARGIN {
            return Err(Error::NotPositive(min_value));
        }
    }
    Ok(PositivityEvidence::Sampled { samples, min_value })
}

/// Real coordinates for the space of real (r,r)-forms: a basis of the
/// conjugation-fixed subspace of Λ^{r,r}.
pub struct RealFormBasis {
    pub n: usize,
    pub r: usize,
    pub vectors: Vec<CVec>,
}

impl RealFormBasis {
    pub fn new(n: usize, r: usize) -> Self {
        let dim = space_dim(n, r, r);
        let sign = if r % 2 == 0 { 1.0 } else { -1.0 };
        let mut vectors = Vec::new();
        for k in 0..dim {
            let (im, jm) = monomial_masks(n, r, r, k);
            let mirror = monomial_index(n, jm, im);
            if mirror == k {
                let mut v = CVec::zeros(dim);
                v[k] = if r % 2 == 0 { C::new(1.0, 0.0) } else { C::new(0.0, 1.0) };
                vectors.push(v);
            } else if k < mirror {
                let mut v1 = CVec::zeros(dim);
                v1[k] = C::new(1.0, 0.0);
                v1[mirror] = C::new(sign, 0.0);
                vectors.push(v1);
                let mut v2 = CVec::zeros(dim);
                v2[k] = C::new(0.0, 1.0);
                v2[mirror] = C::new(0.0, -sign);
                vectors.push(v2);
            }
        }
        debug_assert_eq!(vectors.len(), dim);
        RealFormBasis { n, r, vectors }
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn form(&self, coords: &[f64]) -> Form {
        let dim = space_dim(self.n, self.r, self.r);
        let mut v = CVec::zeros(dim);
        for (b, &c) in self.vectors.iter().zip(coords) {
            v += b * C::new(c, 0.0);
        }
        Form::from_component(self.n, self.r, self.r, v)
    }

    /// Real coordinates of a real (r,r)-form (least squares onto the basis).
    pub fn coords(&self, f: &Form) -> Vec<f64> {
        let v = f.component(self.r, self.r);
        // basis vectors are orthogonal with squared norms 1 or 2
        self.vectors
            .iter()
            .map(|b| {
                let ip: C = b.dotc(&v);
                ip.re / b.norm_squared()
            })
            .collect()
    }
}

/// Unknown layout for a structure's linear system: real candidate coordinates
/// followed by realified complex auxiliary blocks.
struct Unknowns {
    basis: RealFormBasis,
    aux: Vec<(usize, usize)>,
    aux_dims: Vec<usize>,
}

impl Unknowns {
    fn new(n: usize, r: usize, aux: Vec<(usize, usize)>) -> Self {
        let aux: Vec<(usize, usize)> = aux
            .into_iter()
            .filter(|&(p, q)| space_dim(n, p, q) > 0 && p <= n && q <= n)
            .collect();
        let aux_dims = aux.iter().map(|&(p, q)| space_dim(n, p, q)).collect();
        Unknowns { basis: RealFormBasis::new(n, r), aux, aux_dims }
    }

    fn real_dim(&self) -> usize {
        self.basis.dim() + 2 * self.aux_dims.iter().sum::<usize>()
    }

    fn candidate_dim(&self) -> usize {
        self.basis.dim()
    }

    fn decode(&self, z: &RVec) -> (Form, Vec<Form>) {
        let n = self.basis.n;
        let cand = self.basis.form(z.as_slice()[..self.basis.dim()].as_ref());
        let mut off = self.basis.dim();
        let mut aux_forms = Vec::new();
        for (&(p, q), &d) in self.aux.iter().zip(&self.aux_dims) {
            let v = CVec::from_fn(d, |i, _| C::new(z[off + i], z[off + d + i]));
            off += 2 * d;
            aux_forms.push(Form::from_component(n, p, q, v));
        }
        (cand, aux_forms)
    }
}

/// Builds the structure's residual form for a given candidate and auxiliaries.
fn structure_residual(
    model: &InvariantModel,
    kind: StructureKind,
    power: &Form,
    aux: &[Form],
) -> Result<Form> {
    let one = C::new(1.0, 0.0);
    match kind {
        StructureKind::Gauduchon | StructureKind::PSkt(_) => {
            model.apply_diff(OperatorTag::DelDelbar, power)
        }
        StructureKind::HGauduchon(h) => model.apply_diff(OperatorTag::DhDMinusInvH(h), power),
        StructureKind::Balanced => model.apply_diff(OperatorTag::D, power),
        StructureKind::Sg => {
            // ∂ Φ − ∂̄ γ with γ the (n,n−2) auxiliary
            let lhs = model.apply_diff(OperatorTag::Del, power)?;
            let rhs = model.apply_diff(OperatorTag::Delbar, &aux[0])?;
            Ok(lhs.sub(&rhs))
        }
        StructureKind::HSg(h) => {
            let theta = &aux[0];
            let total = theta
                .scale(C::new(1.0 / h, 0.0))
                .add(power)
                .add(&theta.conj().scale(C::new(h, 0.0)));
            model.apply_diff(OperatorTag::Dh(h), &total)
        }
        StructureKind::PHs(_) => {
            let mut total = power.clone();
            for t in aux {
                total = total.add(t).add(&t.conj());
            }
            model.apply_diff(OperatorTag::D, &total).map(|f| f.scale(one))
        }
        StructureKind::HpHs(_, h) => {
            let mut total = power.clone();
            for t in aux {
                total = total.add(t).add(&t.conj());
            }
            model.apply_diff(OperatorTag::Dh(h), &total)
        }
    }
}

fn aux_blocks(n: usize, kind: StructureKind) -> Vec<(usize, usize)> {
    match kind {
        StructureKind::Sg => vec![(n, n - 2)],
        StructureKind::HSg(_) => vec![(n - 2, n)],
        StructureKind::PHs(p) | StructureKind::HpHs(p, _) => {
            (0..p).map(|i| (i, 2 * p - i)).collect()
        }
        _ => vec![],
    }
}

/// Stacks the components of a residual form into a real vector (fixed layout).
fn residual_vector(n: usize, f: &Form, degree: usize) -> RVec {
    let layout = DegreeLayout::new(n, degree);
    let v = layout.to_vec(&f.degree_part(degree));
    let mut out = RVec::zeros(2 * v.len());
    for (i, c) in v.iter().enumerate() {
        out[i] = c.re;
        out[v.len() + i] = c.im;
    }
    out
}

/// Verifies a candidate against a structure definition.
///
/// The auxiliary components demanded by the definition are produced as
/// witnesses when the defining linear system is solvable.
pub fn check_structure(
    model: &InvariantModel,
    candidate: &Form,
    kind: StructureKind,
    seed: u64,
) -> Result<CheckOutcome> {
    kind.check_param()?;
    let n = model.n();
    let reality = candidate.reality_defect();
    if reality > 1e-9 * (1.0 + candidate.norm_inf()) {
        return Err(Error::NotReal(reality));
    }
    let deg = kind.candidate_degree(n);
    let Some((p, q)) = candidate.is_pure() else {
        return Err(Error::DegreeMismatch { p: deg, q: deg });
    };
    if (p, q) != (deg, deg) {
        return Err(Error::DegreeMismatch { p: deg, q: deg });
    }
    let positivity = weak_positivity(n, candidate, deg, seed)?;

    // metric kinds run their condition on ω^{n−1}
    let power = match kind {
        StructureKind::PSkt(_) | StructureKind::PHs(_) | StructureKind::HpHs(_, _) => candidate.clone(),
        _ => candidate.wedge_pow(n - 1)?,
    };
    let residual_degree = match kind {
        StructureKind::Gauduchon | StructureKind::HGauduchon(_) => 2 * n,
        StructureKind::PSkt(p) => 2 * p + 2,
        StructureKind::Balanced | StructureKind::Sg | StructureKind::HSg(_) => 2 * n - 1,
        StructureKind::PHs(p) | StructureKind::HpHs(p, _) => 2 * p + 1,
    };

    let aux_spec = aux_blocks(n, kind);
    let scale = 1.0 + power.norm_inf();
    if aux_spec.is_empty() {
        let res = structure_residual(model, kind, &power, &[])?;
        let r = res.norm_inf();
        if r <= CERT_TOL * scale {
            return Ok(CheckOutcome::Certified(StructureCertificate {
                kind,
                candidate: candidate.clone(),
                witnesses: vec![],
                residuals: vec![("closedness".into(), r)],
                positivity,
            }));
        }
        return Ok(CheckOutcome::Rejected { reason: "closedness fails".into(), residual: r });
    }

    // solve the affine system over the auxiliaries (realified: conjugates of
    // the unknowns appear in the equations)
    let unknowns = Unknowns::new(n, deg, aux_spec.clone());
    let aux_real_dim = unknowns.real_dim() - unknowns.candidate_dim();
    let eval = |zaux: &RVec| -> Result<RVec> {
        let mut full = RVec::zeros(unknowns.real_dim());
        for i in 0..aux_real_dim {
            full[unknowns.candidate_dim() + i] = zaux[i];
        }
        let (_, aux) = unknowns.decode(&full);
        let res = structure_residual(model, kind, &power, &aux)?;
        Ok(residual_vector(n, &res, residual_degree))
    };
    let base = eval(&RVec::zeros(aux_real_dim))?;
    let m = base.len();
    let mut mat = RMat::zeros(m, aux_real_dim);
    for i in 0..aux_real_dim {
        let mut e = RVec::zeros(aux_real_dim);
        e[i] = 1.0;
        let col = eval(&e)? - &base;
        mat.column_mut(i).copy_from(&col);
    }
    let (sol, res) = real_lstsq(&mat, &(-base.clone()));
    let _ = res;
    let achieved = (&mat * &sol + &base).norm();
    if achieved <= CERT_TOL * scale {
        let mut full = RVec::zeros(unknowns.real_dim());
        for i in 0..aux_real_dim {
            full[unknowns.candidate_dim() + i] = sol[i];
        }
        let (_, aux) = unknowns.decode(&full);
        let witnesses = aux_spec
            .iter()
            .zip(aux.iter())
            .map(|(&(ap, aq), f)| (format!("Ω^{{{ap},{aq}}}"), f.clone()))
            .collect();
        Ok(CheckOutcome::Certified(StructureCertificate {
            kind,
            candidate: candidate.clone(),
            witnesses,
            residuals: vec![("closedness".into(), achieved)],
            positivity,
        }))
    } else {
        Ok(CheckOutcome::Rejected { reason: "auxiliary system unsolvable".into(), residual: achieved })
    }
}

fn real_lstsq(a: &RMat, b: &RVec) -> (RVec, f64) {
    // reuse the complex machinery
    let ac = CMat::from_fn(a.nrows(), a.ncols(), |r, c| C::new(a[(r, c)], 0.0));
    let bc = CVec::from_fn(b.len(), |i, _| C::new(b[i], 0.0));
    let x = linalg::lstsq_min_norm(&ac, &bc, linalg::RANK_TOL);
    let res = linalg::residual(&ac, &x, &bc);
    (RVec::from_fn(x.len(), |i, _| x[i].re), res)
}

fn real_nullspace(a: &RMat) -> RMat {
    let ac = CMat::from_fn(a.nrows(), a.ncols(), |r, c| C::new(a[(r, c)], 0.0));
    let ns = linalg::nullspace(&ac, linalg::RANK_TOL);
    // the kernel of a real matrix has a real basis; take real parts after a
    // deterministic re-orthonormalization
    let mut cols: Vec<RVec> = Vec::new();
    for c in 0..ns.ncols() {
        let re = RVec::from_fn(ns.nrows(), |i, _| ns[(i, c)].re);
        let im = RVec::from_fn(ns.nrows(), |i, _| ns[(i, c)].im);
        for cand in [re, im] {
            let mut v = cand;
            for b in &cols {
                let ip = b.dot(&v);
                v -= b * ip;
            }
            let nrm = v.norm();
            if nrm > 1e-9 {
                cols.push(v / nrm);
            }
        }
    }
    let k = cols.len();
    RMat::from_fn(a.ncols(), k, |i, j| cols[j][i])
}

/// Search options for `find_structure`.
#[derive(Clone, Debug)]
pub struct FindOptions {
    pub seed: u64,
    pub budget: usize,
    /// Hermitian metric matrices used as warm starts.
    pub warm_metrics: Vec<DMatrix<C>>,
}

impl Default for FindOptions {
    fn default() -> Self {
        FindOptions { seed: 7, budget: 400, warm_metrics: vec![] }
    }
}

#[derive(Clone, Debug)]
pub enum FindOutcome {
    Found {
        certificate: StructureCertificate,
        /// Michelsohn root for the (n−1,n−1)-parametrized kinds.
        metric_root: Option<Form>,
    },
    NotFound {
        conclusive: bool,
        detail: String,
    },
}

impl FindOutcome {
    pub fn found(&self) -> bool {
        matches!(self, FindOutcome::Found { .. })
    }
}

/// Searches the cone of positive candidates for the structure.
///
/// Metric kinds and the (p,p) kinds with p ∈ {1, n−1} are decided exactly:
/// either a strictly positive solution of the linear closedness system is
/// produced, or a nonzero positive-semidefinite dual certificate shows the
/// cone section is empty. Other p fall back to positivity-sampled candidates
/// and never claim nonexistence.
pub fn find_structure(model: &InvariantModel, kind: StructureKind, opts: &FindOptions) -> Result<FindOutcome> {
    kind.check_param()?;
    let n = model.n();

    // candidate parametrization degree: metric kinds search Φ = ω^{n−1}
    let (search_r, via_power) = match kind {
        StructureKind::PSkt(p) | StructureKind::PHs(p) | StructureKind::HpHs(p, _) => (p, false),
        _ => (n - 1, true),
    };
    let exact = search_r == 1 || search_r == n - 1 || search_r == 0 || search_r == n;
    if !exact {
        return find_by_sampling(model, kind, opts);
    }

    let residual_degree = match kind {
        StructureKind::Gauduchon | StructureKind::HGauduchon(_) => 2 * n,
        StructureKind::PSkt(p) => 2 * p + 2,
        StructureKind::Balanced | StructureKind::Sg | StructureKind::HSg(_) => 2 * n - 1,
        StructureKind::PHs(p) | StructureKind::HpHs(p, _) => 2 * p + 1,
    };
    let unknowns = Unknowns::new(n, search_r, aux_blocks(n, kind));
    let zdim = unknowns.real_dim();
    let eval = |z: &RVec| -> Result<RVec> {
        let (cand, aux) = unknowns.decode(z);
        let res = structure_residual(model, kind, &cand, &aux)?;
        Ok(residual_vector(n, &res, residual_degree))
    };
    // constraint matrix by probing (the system is homogeneous and real-linear)
    let probe0 = eval(&RVec::zeros(zdim))?;
    let m = probe0.len();
    let mut cons = RMat::zeros(m, zdim);
    for i in 0..zdim {
        let mut e = RVec::zeros(zdim);
        e[i] = 1.0;
        cons.column_mut(i).copy_from(&(eval(&e)? - &probe0));
    }
    let null = real_nullspace(&cons);
    if null.ncols() == 0 {
        return Ok(FindOutcome::NotFound { conclusive: true, detail: "no nonzero solutions of the linear system".into() });
    }

    // positivity matrix map on the candidate block
    let herm_of = |z: &RVec| -> DMatrix<C> {
        let (cand, _) = unknowns.decode(z);
        if search_r == 1 {
            hermitian_matrix_of(n, &cand)
        } else {
            dual_matrix_of(n, &cand)
        }
    };
    let mats: Vec<DMatrix<C>> = (0..null.ncols())
        .map(|j| {
            let z = RVec::from_fn(zdim, |i, _| null[(i, j)]);
            herm_of(&z)
        })
        .collect();

    // warm starts from supplied metrics and the identity
    let mut starts: Vec<RVec> = Vec::new();
    let mut warm = opts.warm_metrics.clone();
    warm.push(DMatrix::identity(n, n));
    for h in &warm {
        let omega = metric_form(n, h);
        let cand = omega.wedge_pow(search_r).unwrap_or_else(|_| Form::zero(n));
        let mut z0 = RVec::zeros(zdim);
        for (i, c) in unknowns.basis.coords(&cand).iter().enumerate() {
            z0[i] = *c;
        }
        // project onto the constraint kernel
        let w0 = null.transpose() * z0;
        if w0.norm() > 1e-10 {
            starts.push(w0.normalize());
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for _ in 0..8 {
        let v = RVec::from_fn(null.ncols(), |_, _| rng.gen_range(-1.0..1.0));
        if v.norm() > 0.0 {
            starts.push(v.normalize());
        }
    }

    let (wbest, lbest) = max_lambda_min(&mats, &starts, opts.budget);
    if lbest > POS_MARGIN {
        let z = RVec::from_fn(zdim, |i, _| {
            (0..null.ncols()).map(|j| null[(i, j)] * wbest[j]).sum::<f64>()
        });
        // normalize so the positivity matrix has unit smallest eigenvalue scale
        let scale = 1.0 / lbest.max(1e-6);
        let z = z * scale.min(1e6);
        let (cand, aux) = unknowns.decode(&z);
        let res = structure_residual(model, kind, &cand, &aux)?.norm_inf();
        let positivity = weak_positivity(n, &cand, search_r, opts.seed)?;
        let witnesses: Vec<(String, Form)> = aux_blocks(n, kind)
            .iter()
            .zip(aux.iter())
            .map(|(&(ap, aq), f)| (format!("Ω^{{{ap},{aq}}}"), f.clone()))
            .collect();
        // for metric kinds the candidate is the Michelsohn root of Φ; the
        // closedness residual is measured on Φ itself, where it is exact
        let (candidate, metric_root) = if via_power {
            let root = michelsohn_root(model, &cand)?;
            (root.clone(), Some(root))
        } else {
            (cand.clone(), None)
        };
        let certificate = StructureCertificate {
            kind,
            candidate,
            witnesses,
            residuals: vec![("closedness".into(), res)],
            positivity,
        };
        return Ok(FindOutcome::Found { certificate, metric_root });
    }

    // dual certificate: a nonzero PSD matrix trace-orthogonal to the cone slice
    let mdim = mats.first().map(|m| m.nrows()).unwrap_or(0);
    if mdim == 0 {
        return Ok(FindOutcome::NotFound { conclusive: false, detail: "empty positivity block".into() });
    }
    let herm_basis = hermitian_basis(mdim);
    let mut cons_dual = RMat::zeros(mats.len(), herm_basis.len());
    for (r, mi) in mats.iter().enumerate() {
        for (c, e) in herm_basis.iter().enumerate() {
            cons_dual[(r, c)] = (mi * e).trace().re;
        }
    }
    let dual_null = real_nullspace(&cons_dual);
    if dual_null.ncols() > 0 {
        let dual_mats: Vec<DMatrix<C>> = (0..dual_null.ncols())
            .map(|j| {
                let mut y = DMatrix::<C>::zeros(mdim, mdim);
                for (c, e) in herm_basis.iter().enumerate() {
                    y += e * C::new(dual_null[(c, j)], 0.0);
                }
                y
            })
            .collect();
        let mut dual_starts: Vec<RVec> = Vec::new();
        for _ in 0..8 {
            let v = RVec::from_fn(dual_null.ncols(), |_, _| rng.gen_range(-1.0..1.0));
            if v.norm() > 0.0 {
                dual_starts.push(v.normalize());
            }
        }
        let (_, dual_best) = max_lambda_min(&dual_mats, &dual_starts, opts.budget);
        if dual_best >= -1e-9 {
            return Ok(FindOutcome::NotFound {
                conclusive: true,
                detail: format!("PSD dual certificate with λ_min = {dual_best:.3e}"),
            });
        }
    }
    Ok(FindOutcome::NotFound { conclusive: false, detail: format!("search stalled at λ_min = {lbest:.3e}") })
}

/// ω = i Σ H_{jk} φ^j ∧ φ̄^k from a Hermitian coefficient matrix.
pub fn metric_form(n: usize, h: &DMatrix<C>) -> Form {
    let mut omega = Form::zero(n);
    for j in 0..n {
        for k in 0..n {
            let c = h[(j, k)] * C::new(0.0, 1.0);
            if c.norm() > 0.0 {
                omega = omega.add(&Form::monomial(n, 1 << j, 1 << k, c));
            }
        }
    }
    omega
}

fn hermitian_basis(m: usize) -> Vec<DMatrix<C>> {
    let mut out = Vec::new();
    for j in 0..m {
        let mut e = DMatrix::<C>::zeros(m, m);
        e[(j, j)] = C::new(1.0, 0.0);
        out.push(e);
    }
    for j in 0..m {
        for k in j + 1..m {
            let mut e = DMatrix::<C>::zeros(m, m);
            e[(j, k)] = C::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
            e[(k, j)] = C::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
            out.push(e);
            let mut f = DMatrix::<C>::zeros(m, m);
            f[(j, k)] = C::new(0.0, std::f64::consts::FRAC_1_SQRT_2);
            f[(k, j)] = C::new(0.0, -std::f64::consts::FRAC_1_SQRT_2);
            out.push(f);
        }
    }
    out
}

/// Projected subgradient ascent of w ↦ λ_min(Σ w_j M_j) on the unit sphere.
fn max_lambda_min(mats: &[DMatrix<C>], starts: &[RVec], iters: usize) -> (RVec, f64) {
    let k = mats.len();
    if k == 0 {
        return (RVec::zeros(0), f64::NEG_INFINITY);
    }
    let lam = |w: &RVec| -> (f64, CVec) {
        let mut m = DMatrix::<C>::zeros(mats[0].nrows(), mats[0].ncols());
        for (j, mj) in mats.iter().enumerate() {
            m += mj * C::new(w[j], 0.0);
        }
        let (eigs, vecs) = linalg::hermitian_eigen(&m);
        (eigs[0], vecs.column(0).into_owned())
    };
    let mut best_w = starts.first().cloned().unwrap_or_else(|| RVec::zeros(k));
    let mut best_l = f64::NEG_INFINITY;
    for w0 in starts {
        let mut w = w0.clone();
        let (mut l, mut v) = lam(&w);
        if l > best_l {
            best_l = l;
            best_w = w.clone();
        }
        for t in 0..iters {
            // subgradient of λ_min: g_j = v† M_j v
            let g = RVec::from_fn(k, |j, _| {
                let mv = &mats[j] * &v;
                v.dotc(&mv).re
            });
            let eta = 0.5 / (1.0 + t as f64).sqrt();
            w = (&w + g * eta).normalize();
            let (l2, v2) = lam(&w);
            l = l2;
            v = v2;
            if l > best_l {
                best_l = l;
                best_w = w.clone();
            }
            if best_l > 10.0 * POS_MARGIN && t > 40 {
                break;
            }
        }
    }
    (best_w, best_l)
}

/// Sampling fallback for 1 < p < n−1: sums of p-th powers of random positive
/// (1,1)-forms projected onto the constraint kernel, positivity-sampled.
fn find_by_sampling(model: &InvariantModel, kind: StructureKind, opts: &FindOptions) -> Result<FindOutcome> {
    let n = model.n();
    let p = kind.candidate_degree(n);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for _ in 0..opts.budget.min(60) {
        let mut phi = Form::zero(n);
        for _ in 0..2 {
            let a = DMatrix::<C>::from_fn(n, n, |_, _| C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
            let h = &a * a.adjoint() + DMatrix::<C>::identity(n, n) * C::new(0.5, 0.0);
            phi = phi.add(&metric_form(n, &h).wedge_pow(p)?);
        }
        if let Ok(CheckOutcome::Certified(cert)) = check_structure(model, &phi, kind, opts.seed) {
            return Ok(FindOutcome::Found { certificate: cert, metric_root: None });
        }
        // project the candidate onto the constraint kernel and retry
        let unknowns = Unknowns::new(n, p, aux_blocks(n, kind));
        let zdim = unknowns.real_dim();
        let residual_degree = match kind {
            StructureKind::PSkt(_) => 2 * p + 2,
            _ => 2 * p + 1,
        };
        let eval = |z: &RVec| -> Result<RVec> {
            let (cand, aux) = unknowns.decode(z);
            let res = structure_residual(model, kind, &cand, &aux)?;
            Ok(residual_vector(n, &res, residual_degree))
        };
        let mut cons = RMat::zeros(eval(&RVec::zeros(zdim))?.len(), zdim);
        for i in 0..zdim {
            let mut e = RVec::zeros(zdim);
            e[i] = 1.0;
            cons.column_mut(i).copy_from(&eval(&e)?);
        }
        let null = real_nullspace(&cons);
        if null.ncols() == 0 {
            continue;
        }
        let mut z0 = RVec::zeros(zdim);
        for (i, c) in unknowns.basis.coords(&phi).iter().enumerate() {
            z0[i] = *c;
        }
        let z = &null * (null.transpose() * z0);
        let (cand, _) = unknowns.decode(&z);
        if let Ok(CheckOutcome::Certified(cert)) = check_structure(model, &cand, kind, opts.seed) {
            return Ok(FindOutcome::Found { certificate: cert, metric_root: None });
        }
    }
    Ok(FindOutcome::NotFound { conclusive: false, detail: "sampling budget exhausted".into() })
}

/// Lifts a ∂∂̄-closed (p,p)-form Ω to a d_h-closed real 2p-form whose
/// (p,p)-component lies in the Aeppli class of Ω, following the surjectivity
/// route of the hp-HS construction. Returns the achieved residual and the
/// measured positivity margin of the lifted component.
fn hphs_lift(model: &InvariantModel, omega: &Form, p: usize, h: f64) -> Result<(f64, f64)> {
    let n = model.n();
    let corr_dim = space_dim(n, p.saturating_sub(1), p);
    let aux: Vec<(usize, usize)> = (0..p)
        .map(|i| (i, 2 * p - i))
        .filter(|&(a, b)| a <= n && b <= n && space_dim(n, a, b) > 0)
        .collect();
    let aux_dims: Vec<usize> = aux.iter().map(|&(a, b)| space_dim(n, a, b)).collect();
    let zdim = 2 * corr_dim + 2 * aux_dims.iter().sum::<usize>();
    let decode = |z: &RVec| -> Result<(Form, Vec<Form>)> {
        let alpha = Form::from_component(
            n,
            p - 1,
            p,
            CVec::from_fn(corr_dim, |i, _| C::new(z[i], z[corr_dim + i])),
        );
        let da = model.apply_diff(OperatorTag::Del, &alpha)?;
        let component = omega.add(&da).add(&da.conj());
        let mut off = 2 * corr_dim;
        let mut aux_forms = Vec::new();
        for (&(a, b), &d) in aux.iter().zip(&aux_dims) {
            let v = CVec::from_fn(d, |i, _| C::new(z[off + i], z[off + d + i]));
            off += 2 * d;
            aux_forms.push(Form::from_component(n, a, b, v));
        }
        Ok((component, aux_forms))
    };
    let eval = |z: &RVec| -> Result<RVec> {
        let (component, aux_forms) = decode(z)?;
        let mut total = component;
        for t in &aux_forms {
            total = total.add(t).add(&t.conj());
        }
        let res = model.apply_diff(OperatorTag::Dh(h), &total)?;
        Ok(residual_vector(n, &res, 2 * p + 1))
    };
    let base = eval(&RVec::zeros(zdim))?;
    let mut mat = RMat::zeros(base.len(), zdim);
    for i in 0..zdim {
        let mut e = RVec::zeros(zdim);
        e[i] = 1.0;
        mat.column_mut(i).copy_from(&(eval(&e)? - &base));
    }
    let (sol, _) = real_lstsq(&mat, &(-base.clone()));
    let residual = (&mat * &sol + &base).norm();
    let (component, _) = decode(&sol)?;
    let margin = match weak_positivity(n, &component, p, 11) {
        Ok(ev) => ev.margin(),
        Err(Error::NotPositive(m)) => m,
        Err(e) => return Err(e),
    };
    Ok((residual, margin))
}

/// The special case of the h-∂∂̄-lemma used by the Gauduchon equivalence
/// chain: every d_h- and d_{−1/h}-closed form in Im d_{−1/h} lies in
/// Im d_h d_{−1/h}.
pub fn check_special_h_lemma(model: &InvariantModel, h: f64) -> Result<bool> {
    if h == 0.0 {
        return Err(Error::ZeroH);
    }
    let n = model.n();
    for k in 1..=2 * n {
        let layout = DegreeLayout::new(n, k);
        let closed = {
            let a = model.dh_total(k, h);
            let b = model.dminus_total(k, h);
            let mut s = RMatStack::new(layout.dim);
            s.push(a);
            s.push(b);
            s.take()
        };
        let bspace = linalg::nullspace(&closed, linalg::RANK_TOL);
        let im_minus = linalg::colspace(&model.dminus_total(k - 1, h), linalg::RANK_TOL);
        let inter = linalg::intersect(&bspace, &im_minus, linalg::RANK_TOL);
        let target = if k >= 2 {
            linalg::colspace(&model.dh_dminus_total(k - 2, h), linalg::RANK_TOL)
        } else {
            CMat::zeros(layout.dim, 0)
        };
        if !linalg::is_subspace_of(&inter, &target, 1e-8) {
            return Ok(false);
        }
    }
    Ok(true)
}

struct RMatStack {
    cols: usize,
    rows: Vec<CMat>,
}

impl RMatStack {
    fn new(cols: usize) -> Self {
        RMatStack { cols, rows: Vec::new() }
    }
    fn push(&mut self, m: CMat) {
        if m.nrows() > 0 {
            self.rows.push(m);
        }
    }
    fn take(self) -> CMat {
        let total: usize = self.rows.iter().map(|m| m.nrows()).sum();
        let mut out = CMat::zeros(total, self.cols);
        let mut off = 0;
        for m in self.rows {
            out.view_mut((off, 0), (m.nrows(), m.ncols())).copy_from(&m);
            off += m.nrows();
        }
        out
    }
}

/// One line of the equivalence audit.
#[derive(Clone, Debug)]
pub struct AuditItem {
    pub name: String,
    pub h: Option<f64>,
    pub p: Option<usize>,
    /// (hypothesis name, holds); when it fails the item is skipped, marked.
    pub hypothesis: Option<(String, bool)>,
    pub skipped: bool,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct AuditReport {
    pub items: Vec<AuditItem>,
}

impl AuditReport {
    pub fn all_passed(&self) -> bool {
        self.items.iter().all(|i| i.skipped || i.passed)
    }
}

fn candidate_metrics(n: usize, warm: &[DMatrix<C>], seed: u64) -> Vec<DMatrix<C>> {
    let mut out = vec![DMatrix::identity(n, n)];
    out.extend(warm.iter().cloned());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..2 {
        let a = DMatrix::<C>::from_fn(n, n, |_, _| C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        out.push(&a * a.adjoint() + DMatrix::<C>::identity(n, n));
    }
    out
}

/// Runs both directions of the structure equivalences on the model and reports
/// agreement; equivalences conditional on a lemma record the hypothesis check
/// and are skipped (marked) when it fails.
pub fn audit_equivalences(
    model: &InvariantModel,
    h_list: &[f64],
    p_list: &[usize],
    opts: &FindOptions,
) -> Result<AuditReport> {
    let n = model.n();
    let mut items = Vec::new();
    let metrics = candidate_metrics(n, &opts.warm_metrics, opts.seed);

    for &h in h_list {
        if h == 0.0 {
            return Err(Error::ZeroH);
        }

        // Gauduchon ⇔ h-Gauduchon, unconditional (d_h d_{−1/h} = (h+1/h)∂∂̄).
        {
            let mut ok = true;
            let mut detail = String::new();
            for hm in &metrics {
                let omega = metric_form(n, hm);
                let a = check_structure(model, &omega, StructureKind::Gauduchon, opts.seed)?.is_certified();
                let b = check_structure(model, &omega, StructureKind::HGauduchon(h), opts.seed)?.is_certified();
                if a != b {
                    ok = false;
                    detail = format!("verdicts differ on a candidate: gauduchon={a}, h-gauduchon={b}");
                    break;
                }
            }
            items.push(AuditItem {
                name: "gauduchon_iff_h_gauduchon".into(),
                h: Some(h),
                p: None,
                hypothesis: None,
                skipped: false,
                passed: ok,
                detail,
            });
        }

        // h-sG ⇔ sG, unconditional, witnesses cross-constructed.
        {
            let sg = find_structure(model, StructureKind::Sg, opts)?;
            let hsg = find_structure(model, StructureKind::HSg(h), opts)?;
            let mut ok = sg.found() == hsg.found();
            let mut detail = format!("sG found: {}, h-sG found: {}", sg.found(), hsg.found());
            if let FindOutcome::Found { metric_root: Some(root), .. } = &sg {
                let cross = check_structure(model, root, StructureKind::HSg(h), opts.seed)?;
                if !cross.is_certified() {
                    ok = false;
                    detail.push_str("; sG witness failed the h-sG check");
                }
            }
            if let FindOutcome::Found { metric_root: Some(root), .. } = &hsg {
                let cross = check_structure(model, root, StructureKind::Sg, opts.seed)?;
                if !cross.is_certified() {
                    ok = false;
                    detail.push_str("; h-sG witness failed the sG check");
                }
            }
            items.push(AuditItem {
                name: "h_sg_iff_sg".into(),
                h: Some(h),
                p: None,
                hypothesis: None,
                skipped: false,
                passed: ok,
                detail,
            });
        }

        // The four-way Gauduchon chain under the special h-∂∂̄ case.
        {
            let hyp = check_special_h_lemma(model, h)?;
            let mut ok = true;
            let mut detail = String::new();
            if hyp {
                for hm in &metrics {
                    let omega = metric_form(n, hm);
                    let pow = omega.wedge_pow(n - 1)?;
                    let v1 = check_structure(model, &omega, StructureKind::HSg(h), opts.seed)?.is_certified();
                    // d_{−1/h} ω^{n−1} ∈ Im d_h
                    let layout = DegreeLayout::new(n, 2 * n - 1);
                    let target = layout.to_vec(&model.apply_diff(OperatorTag::DMinusInvH(h), &pow)?);
                    let gen = model.dh_total(2 * n - 2, h);
                    let x = linalg::lstsq_min_norm(&gen, &target, linalg::RANK_TOL);
                    let v2 = linalg::residual(&gen, &x, &target) <= CERT_TOL * (1.0 + target.norm());
                    let v3 = check_structure(model, &omega, StructureKind::HGauduchon(h), opts.seed)?.is_certified();
                    let v4 = check_structure(model, &omega, StructureKind::Gauduchon, opts.seed)?.is_certified();
                    if !(v1 == v2 && v2 == v3 && v3 == v4) {
                        ok = false;
                        detail = format!("chain broke: h-sG={v1}, d-exactness={v2}, h-gauduchon={v3}, gauduchon={v4}");
                        break;
                    }
                }
            }
            items.push(AuditItem {
                name: "gauduchon_equivalence_chain".into(),
                h: Some(h),
                p: None,
                hypothesis: Some(("special h-∂∂̄ case".into(), hyp)),
                skipped: !hyp,
                passed: ok,
                detail,
            });
        }

        // p-SKT ⇔ hp-HS on h-∂∂̄ models, both directions as separate paths.
        for &p in p_list {
            let hyp = crate::cohomology::check_lemma(model, crate::cohomology::LemmaKind::HDdBar(h))?
                .holds;
            let mut ok = true;
            let mut detail = String::new();
            let mut skipped = !hyp;
            if hyp {
                let skt = find_structure(model, StructureKind::PSkt(p), opts)?;
                let hphs = find_structure(model, StructureKind::HpHs(p, h), opts)?;
                match (&skt, &hphs) {
                    (FindOutcome::Found { certificate: c1, .. }, _) => {
                        if !hphs.found() {
                            ok = false;
                            detail.push_str("hp-HS search failed despite a p-SKT witness; ");
                        }
                        // direction 2 along the class-level route: lift the p-SKT
                        // witness to a d_h-closed real 2p-form whose (p,p)-
                        // component stays in the Aeppli class of the witness
                        match hphs_lift(model, &c1.candidate, p, h) {
                            Ok((residual, lifted_positive)) => {
                                if residual > 1e-7 * (1.0 + c1.candidate.norm_inf()) {
                                    ok = false;
                                    detail.push_str(&format!("class-level hp-HS lift unsolvable (residual {residual:.3e}); "));
                                } else {
                                    detail.push_str(&format!(
                                        "lift solvable; lifted (p,p)-component positivity margin {lifted_positive:.3e}; "
                                    ));
                                }
                            }
                            Err(e) => {
                                ok = false;
                                detail.push_str(&format!("lift failed: {e}; "));
                            }
                        }
                    }
                    (FindOutcome::NotFound { conclusive: true, .. }, FindOutcome::Found { .. }) => {
                        ok = false;
                        detail.push_str("hp-HS found but p-SKT conclusively absent; ");
                    }
                    _ => {
                        skipped = true;
                        detail.push_str("p-SKT search inconclusive; ");
                    }
                }
                if let FindOutcome::Found { certificate: c2, .. } = &hphs {
                    // direction 1: the hp-HS witness is itself a p-SKT form
                    let cand = c2.candidate.clone();
                    let back = check_structure(model, &cand, StructureKind::PSkt(p), opts.seed)?;
                    if !back.is_certified() {
                        ok = false;
                        detail.push_str("hp-HS witness is not a p-SKT form; ");
                    }
                }
            }
            items.push(AuditItem {
                name: "p_skt_iff_hp_hs".into(),
                h: Some(h),
                p: Some(p),
                hypothesis: Some(("h-∂∂̄ lemma".into(), hyp)),
                skipped,
                passed: ok,
                detail,
            });
        }

        // Observation: an hp-HS form at p = n−1 forces balanced or sG.
        {
            let hphs = find_structure(model, StructureKind::HpHs(n - 1, h), opts)?;
            let mut ok = true;
            let detail;
            let mut skipped = false;
            if let FindOutcome::Found { certificate, .. } = &hphs {
                let omega_pow = &certificate.candidate;
                if h != 1.0 && h != -1.0 {
                    let d = model.apply_diff(OperatorTag::D, omega_pow)?.norm_inf();
                    ok = d <= 1e-8 * (1.0 + omega_pow.norm_inf());
                    detail = format!("balanced branch, ‖dΩ‖ = {d:.3e}");
                } else {
                    let dpow = model.apply_diff(OperatorTag::Del, omega_pow)?;
                    let target = dpow.component(n, n - 1);
                    let db = model.delbar_matrix(n, n - 2);
                    let x = linalg::lstsq_min_norm(&db, &target, linalg::RANK_TOL);
                    let res = linalg::residual(&db, &x, &target);
                    ok = res <= 1e-8 * (1.0 + target.norm());
                    detail = format!("sG branch, exactness residual {res:.3e}");
                }
            } else {
                skipped = true;
                detail = "no hp-HS structure found at p = n−1".into();
            }
            items.push(AuditItem {
                name: "hp_hs_dichotomy".into(),
                h: Some(h),
                p: Some(n - 1),
                hypothesis: None,
                skipped,
                passed: ok,
                detail,
            });
        }

        // The (1/h, 1, h) h-sG normalization against the Observation's
        // (1,1,1) display, compared at the model level: do the two
        // normalizations certify the same models? Per-metric they genuinely
        // differ for h ∉ {1,−1}: the (1,1,1) system forces that particular
        // metric to be balanced, which is the Observation itself. The item
        // records the comparison rather than assuming it.
        {
            let hsg = find_structure(model, StructureKind::HSg(h), opts)?;
            let hphs = find_structure(model, StructureKind::HpHs(n - 1, h), opts)?;
            let agree = hsg.found() == hphs.found();
            let detail = format!(
                "(1/h,1,h)-normalization found: {}; (1,1,1)-normalization found: {}; {}",
                hsg.found(),
                hphs.found(),
                if agree { "same models certified" } else { "models differ (sG vs balanced gap)" }
            );
            items.push(AuditItem {
                name: "h_sg_normalization".into(),
                h: Some(h),
                p: None,
                hypothesis: None,
                skipped: false,
                passed: true, // a recording item: both outcomes are informative
                detail,
            });
        }
    }

    Ok(AuditReport { items })
}

/// The unique positive (1,1)-form ω with ω^{n−1} = Ω, by Newton iteration on
/// the Hermitian coefficient matrix from two independent initial guesses.
pub fn michelsohn_root(model: &InvariantModel, omega_pow: &Form) -> Result<Form> {
    let n = model.n();
    let basis = RealFormBasis::new(n, 1);
    let target = RealFormBasis::new(n, n - 1);
    let goal = RVec::from_vec(target.coords(omega_pow));
    // positivity of the input, exact at (n−1,n−1)
    let q = dual_matrix_of(n, omega_pow);
    let (eigs, _) = linalg::hermitian_eigen(&q);
    if eigs.first().copied().unwrap_or(0.0) <= 0.0 {
        return Err(Error::NotPositive(eigs.first().copied().unwrap_or(0.0)));
    }

    let f = |z: &RVec| -> Result<RVec> {
        let omega = basis.form(z.as_slice());
        let pow = omega.wedge_pow(n - 1)?;
        Ok(RVec::from_vec(target.coords(&pow)) - &goal)
    };
    let newton = |mut z: RVec| -> Result<RVec> {
        for _ in 0..80 {
            let r = f(&z)?;
            if r.norm() <= 1e-13 * (1.0 + goal.norm()) {
                return Ok(z);
            }
            let omega = basis.form(z.as_slice());
            let pow2 = omega.wedge_pow(n.saturating_sub(2))?;
            let mut jac = RMat::zeros(goal.len(), basis.dim());
            for (i, b) in basis.vectors.iter().enumerate() {
                let dir = Form::from_component(n, 1, 1, b.clone());
                let dpow = pow2.wedge(&dir)?.scale(C::new((n - 1) as f64, 0.0));
                jac.column_mut(i).copy_from(&RVec::from_vec(target.coords(&dpow)));
            }
            let (step, _) = real_lstsq(&jac, &(-r.clone()));
            if step.norm() < 1e-15 {
                break;
            }
            // damped update keeps the iterate in the positive cone
            let mut t = 1.0;
            loop {
                let znew = &z + &step * t;
                let h = hermitian_matrix_of(n, &basis.form(znew.as_slice()));
                let (e, _) = linalg::hermitian_eigen(&h);
                if e.first().copied().unwrap_or(-1.0) > 0.0 || t < 1e-4 {
                    z = znew;
                    break;
                }
                t *= 0.5;
            }
        }
        let r = f(&z)?;
        if r.norm() <= 1e-9 * (1.0 + goal.norm()) {
            Ok(z)
        } else {
            Err(Error::NoConvergence(r.norm()))
        }
    };

    // initial guess 1: scaled identity matching the total trace
    let tr = q.trace().re.max(1e-9);
    let s1 = (tr / (n as f64)).powf(1.0 / (n as f64 - 1.0));
    let z1 = RVec::from_vec(basis.coords(&metric_form(n, &(DMatrix::identity(n, n) * C::new(s1, 0.0)))));
    // initial guess 2: eigen-rescaled dual matrix
    let (qe, qv) = linalg::hermitian_eigen(&q);
    let mut h2 = DMatrix::<C>::zeros(n, n);
    for j in 0..n {
        let lam = qe[j].max(1e-9).powf(1.0 / (n as f64 - 1.0));
        let col = qv.column(j);
        h2 += col * col.adjoint() * C::new(lam, 0.0);
    }
    let z2 = RVec::from_vec(basis.coords(&metric_form(n, &h2)));

    let r1 = newton(z1);
    let r2 = newton(z2);
    match (r1, r2) {
        (Ok(a), Ok(b)) => {
            if (&a - &b).norm() > 1e-8 * (1.0 + a.norm()) {
                return Err(Error::NoConvergence((&a - &b).norm()));
            }
            Ok(basis.form(a.as_slice()))
        }
        (Ok(a), Err(_)) | (Err(_), Ok(a)) => Ok(basis.form(a.as_slice())),
        (Err(e), Err(_)) => Err(e),
    }
}
