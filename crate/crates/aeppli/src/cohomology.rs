//! The quotient-space engine: De Rham, Dolbeault, Bott-Chern, Aeppli, d_h and
//! h-Aeppli cohomology of an invariant model, the ∂∂̄ / h-∂∂̄ lemma checkers,
//! and the canonical transfer maps between flavors.


use crate::error::{Error, Result};
use crate::form::{space_dim, Form, C};
use crate::linalg::{self, CMat, CVec};
use crate::metric::HermitianMetric;
use crate::model::{DegreeLayout, InvariantModel, OperatorTag};

/// The six cohomology flavors.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CohomologyFlavor {
    DeRham(usize),
    Dolbeault(usize, usize),
    BottChern(usize, usize),
    Aeppli(usize, usize),
    Dh(usize, f64),
    HAeppli(usize, f64),
}

impl CohomologyFlavor {
    pub fn check_param(&self) -> Result<()> {
        match *self {
            CohomologyFlavor::Dh(_, h) | CohomologyFlavor::HAeppli(_, h) => {
                if h == 0.0 {
                    Err(Error::ZeroH)
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }

    pub fn label(&self) -> String {
        match *self {
            CohomologyFlavor::DeRham(k) => format!("H^{k}_DR"),
            CohomologyFlavor::Dolbeault(p, q) => format!("H^{{{p},{q}}}_dbar"),
            CohomologyFlavor::BottChern(p, q) => format!("H^{{{p},{q}}}_BC"),
            CohomologyFlavor::Aeppli(p, q) => format!("H^{{{p},{q}}}_A"),
            CohomologyFlavor::Dh(k, h) => format!("H^{k}_d_h(h={h})"),
            CohomologyFlavor::HAeppli(k, h) => format!("H^{k}_h-A(h={h})"),
        }
    }
}

/// Where the flavor's coefficient vectors live.
#[derive(Clone, Debug)]
enum SpaceKind {
    Pure(usize, usize),
    Total(DegreeLayout),
}

impl SpaceKind {
    fn to_vec(&self, f: &Form) -> CVec {
        match self {
            SpaceKind::Pure(p, q) => f.component(*p, *q),
            SpaceKind::Total(layout) => layout.to_vec(f),
        }
    }

    fn to_form(&self, n: usize, v: &CVec) -> Form {
        match self {
            SpaceKind::Pure(p, q) => Form::from_component(n, *p, *q, v.clone()),
            SpaceKind::Total(layout) => layout.to_form(v),
        }
    }
}

/// A computed cohomology group with representatives and projection data.
#[derive(Clone, Debug)]
pub struct CohomologyGroup {
    pub flavor: CohomologyFlavor,
    pub dim: usize,
    n: usize,
    space: SpaceKind,
    /// Flavor cocycle constraints (rows).
    constraints: CMat,
    /// Orthonormal basis of the flavor's exact space.
    im_basis: CMat,
    /// Representatives as columns (harmonic when a metric was supplied).
    rep_mat: CMat,
}

/// A class: quotient coordinates plus a designated representative.
#[derive(Clone, Debug)]
pub struct CohomologyClass {
    pub flavor: CohomologyFlavor,
    pub coords: CVec,
    pub representative: Form,
}

fn empty_from(dim: usize) -> CMat {
    CMat::zeros(dim, 0)
}

fn stack_rows(mats: Vec<CMat>, cols: usize) -> CMat {
    let live: Vec<CMat> = mats.into_iter().filter(|m| m.nrows() > 0).collect();
    let rows: usize = live.iter().map(|m| m.nrows()).sum();
    let mut out = CMat::zeros(rows, cols);
    let mut off = 0;
    for m in live {
        out.view_mut((off, 0), (m.nrows(), m.ncols())).copy_from(&m);
        off += m.nrows();
    }
    out
}

/// Computes a cohomology group. With a metric the representatives are the
/// flavor's harmonic forms (kernel ∩ G-orthogonal complement of the exact
/// space); without one they form a pivoted complement.
pub fn compute_group(
    model: &InvariantModel,
    metric: Option<&HermitianMetric>,
    flavor: CohomologyFlavor,
) -> Result<CohomologyGroup> {
    flavor.check_param()?;
    let n = model.n();
    let (space, constraints, im_gens): (SpaceKind, CMat, CMat) = match flavor {
        CohomologyFlavor::Dolbeault(p, q) => {
            let dim = space_dim(n, p, q);
            let cons = if q + 1 <= n {
                model.delbar_matrix(p, q).clone()
            } else {
                CMat::zeros(0, dim)
            };
            let im = if q >= 1 {
                model.delbar_matrix(p, q - 1).clone()
            } else {
                empty_from(dim)
            };
            (SpaceKind::Pure(p, q), cons, im)
        }
        CohomologyFlavor::BottChern(p, q) => {
            let dim = space_dim(n, p, q);
            let cons = stack_rows(
                vec![
                    if p + 1 <= n { model.del_matrix(p, q).clone() } else { CMat::zeros(0, dim) },
                    if q + 1 <= n { model.delbar_matrix(p, q).clone() } else { CMat::zeros(0, dim) },
                ],
                dim,
            );
            let im = if p >= 1 && q >= 1 {
                model.deldelbar_matrix(p - 1, q - 1)
            } else {
                empty_from(dim)
            };
            (SpaceKind::Pure(p, q), cons, im)
        }
        CohomologyFlavor::Aeppli(p, q) => {
            let dim = space_dim(n, p, q);
            let cons = if p + 1 <= n && q + 1 <= n {
                model.deldelbar_matrix(p, q)
            } else {
                CMat::zeros(0, dim)
            };
            let d = if p >= 1 { model.del_matrix(p - 1, q).clone() } else { empty_from(dim) };
            let db = if q >= 1 { model.delbar_matrix(p, q - 1).clone() } else { empty_from(dim) };
            (SpaceKind::Pure(p, q), cons, linalg::hcat(&[&d, &db]))
        }
        CohomologyFlavor::DeRham(k) => {
            let layout = DegreeLayout::new(n, k);
            let cons = model.d_total(k);
            let im = if k >= 1 { model.d_total(k - 1) } else { empty_from(layout.dim) };
            (SpaceKind::Total(layout), cons, im)
        }
        CohomologyFlavor::Dh(k, h) => {
            let layout = DegreeLayout::new(n, k);
            let cons = model.dh_total(k, h);
            let im = if k >= 1 { model.dh_total(k - 1, h) } else { empty_from(layout.dim) };
            (SpaceKind::Total(layout), cons, im)
        }
        CohomologyFlavor::HAeppli(k, h) => {
            let layout = DegreeLayout::new(n, k);
            let cons = model.dh_dminus_total(k, h);
            let im = if k >= 1 {
                linalg::hcat(&[&model.dh_total(k - 1, h), &model.dminus_total(k - 1, h)])
            } else {
                empty_from(layout.dim)
            };
            (SpaceKind::Total(layout), cons, im)
        }
    };

    let gram = metric.map(|g| match &space {
        SpaceKind::Pure(p, q) => g.gram(*p, *q).clone(),
        SpaceKind::Total(layout) => g.gram_total(layout.k),
    });

    let ker = linalg::nullspace(&constraints, linalg::RANK_TOL);
    let im_basis = linalg::colspace(&im_gens, linalg::RANK_TOL);
    let dim = ker.ncols() - im_basis.ncols();

    // Harmonic complement: kernel ∩ (exact space)^{⊥_G}, as the nullspace of
    // the constraints together with im^† G.
    let orth_rows = match &gram {
        Some(g) => im_basis.adjoint() * g,
        None => im_basis.adjoint(),
    };
    let total_cols = match &space {
        SpaceKind::Pure(p, q) => space_dim(n, *p, *q),
        SpaceKind::Total(layout) => layout.dim,
    };
    let stacked = stack_rows(vec![constraints.clone(), orth_rows], total_cols);
    let harm = linalg::nullspace(&stacked, linalg::RANK_TOL);
    let rep_mat = linalg::orthonormalize_pivoted(&harm, gram.as_ref(), 1e-12);
    debug_assert_eq!(rep_mat.ncols(), dim, "harmonic complement dimension");

    Ok(CohomologyGroup { flavor, dim, n, space, constraints, im_basis, rep_mat })
}

impl CohomologyGroup {
    pub fn representatives(&self) -> Vec<Form> {
        (0..self.rep_mat.ncols())
            .map(|c| self.space.to_form(self.n, &self.rep_mat.column(c).into_owned()))
            .collect()
    }

    pub fn representative_matrix(&self) -> &CMat {
        &self.rep_mat
    }

    /// Residual of the flavor's cocycle condition on a form.
    pub fn cocycle_defect(&self, x: &Form) -> f64 {
        let v = self.space.to_vec(x);
        if self.constraints.nrows() == 0 {
            return 0.0;
        }
        (&self.constraints * v).norm()
    }

    /// Quotient coordinates of a cocycle.
    pub fn project(&self, x: &Form) -> Result<CVec> {
        let v = self.space.to_vec(x);
        let defect = self.cocycle_defect(x);
        if defect > 1e-8 * (1.0 + v.norm()) {
            return Err(Error::InconsistentSystem(defect));
        }
        let all = linalg::hcat(&[&self.rep_mat, &self.im_basis]);
        let sol = linalg::lstsq_min_norm(&all, &v, linalg::RANK_TOL);
        let res = linalg::residual(&all, &sol, &v);
        if res > 1e-8 * (1.0 + v.norm()) {
            return Err(Error::InconsistentSystem(res));
        }
        Ok(sol.rows(0, self.dim).into_owned())
    }

    /// The class of a cocycle, designated representative included.
    pub fn class_of(&self, x: &Form) -> Result<CohomologyClass> {
        let coords = self.project(x)?;
        Ok(CohomologyClass { flavor: self.flavor, coords, representative: x.clone() })
    }

    /// The distinguished (harmonic) representative with the given coordinates.
    pub fn rep_from_coords(&self, coords: &CVec) -> Form {
        let v = &self.rep_mat * coords;
        self.space.to_form(self.n, &v)
    }

    /// The harmonic representative of a class.
    pub fn harmonic_representative(&self, x: &Form) -> Result<Form> {
        Ok(self.rep_from_coords(&self.project(x)?))
    }

    /// A random exact form (the flavor's Im-space), for representative shifts.
    pub fn random_exact(&self, rng: &mut impl rand::Rng) -> Form {
        if self.im_basis.ncols() == 0 {
            return Form::zero(self.n);
        }
        let coef = CVec::from_fn(self.im_basis.ncols(), |_, _| {
            C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        let v = &self.im_basis * coef;
        self.space.to_form(self.n, &v)
    }
}

/// Which lemma to audit.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LemmaKind {
    DdBar,
    HDdBar(f64),
}

/// A form witnessing the failure of a lemma.
#[derive(Clone, Debug)]
pub struct LemmaWitness {
    pub location: String,
    pub exactness: String,
    pub form: Form,
}

#[derive(Clone, Debug)]
pub struct LemmaVerdict {
    pub kind: LemmaKind,
    pub holds: bool,
    pub witness: Option<LemmaWitness>,
}

/// Subspace-inclusion test of the lemma: every flavor-closed form lying in one
/// of the Im-spaces must lie in Im ∂∂̄ (resp. Im d_h d_{−1/h}).
pub fn check_lemma(model: &InvariantModel, kind: LemmaKind) -> Result<LemmaVerdict> {
    let n = model.n();
    match kind {
        LemmaKind::DdBar => {
            for p in 0..=n {
                for q in 0..=n {
                    let dim = space_dim(n, p, q);
                    if dim == 0 {
                        continue;
                    }
                    let closed = stack_rows(
                        vec![
                            if p + 1 <= n { model.del_matrix(p, q).clone() } else { CMat::zeros(0, dim) },
                            if q + 1 <= n { model.delbar_matrix(p, q).clone() } else { CMat::zeros(0, dim) },
                        ],
                        dim,
                    );
                    let b = linalg::nullspace(&closed, linalg::RANK_TOL);
                    let target = if p >= 1 && q >= 1 {
                        linalg::colspace(&model.deldelbar_matrix(p - 1, q - 1), linalg::RANK_TOL)
                    } else {
                        empty_from(dim)
                    };
                    let im_d = if p >= 1 { model.del_matrix(p - 1, q).clone() } else { empty_from(dim) };
                    let im_db = if q >= 1 { model.delbar_matrix(p, q - 1).clone() } else { empty_from(dim) };
                    let spaces = [
                        ("Im ∂", im_d.clone()),
                        ("Im ∂̄", im_db.clone()),
                        ("Im ∂ + Im ∂̄", linalg::hcat(&[&im_d, &im_db])),
                    ];
                    for (name, e) in spaces {
                        let inter = linalg::intersect(&b, &linalg::colspace(&e, linalg::RANK_TOL), linalg::RANK_TOL);
                        if !linalg::is_subspace_of(&inter, &target, 1e-8) {
                            let w = witness_column(&inter, &target);
                            return Ok(LemmaVerdict {
                                kind,
                                holds: false,
                                witness: Some(LemmaWitness {
                                    location: format!("bidegree ({p},{q})"),
                                    exactness: name.to_string(),
                                    form: Form::from_component(n, p, q, w),
                                }),
                            });
                        }
                    }
                }
            }
            Ok(LemmaVerdict { kind, holds: true, witness: None })
        }
        LemmaKind::HDdBar(h) => {
            if h == 0.0 {
                return Err(Error::ZeroH);
            }
            for k in 0..=2 * n {
                let layout = DegreeLayout::new(n, k);
                let closed = stack_rows(
                    vec![model.dh_total(k, h), model.dminus_total(k, h)],
                    layout.dim,
                );
                let b = linalg::nullspace(&closed, linalg::RANK_TOL);
                let target = if k >= 2 {
                    linalg::colspace(&model.dh_dminus_total(k - 2, h), linalg::RANK_TOL)
                } else {
                    empty_from(layout.dim)
                };
                let spaces: Vec<(String, CMat)> = if k >= 1 {
                    vec![
                        ("Im d_h".into(), model.dh_total(k - 1, h)),
                        ("Im d_{-1/h}".into(), model.dminus_total(k - 1, h)),
                        ("Im d".into(), model.d_total(k - 1)),
                    ]
                } else {
                    vec![]
                };
                for (name, e) in spaces {
                    let inter = linalg::intersect(&b, &linalg::colspace(&e, linalg::RANK_TOL), linalg::RANK_TOL);
                    if !linalg::is_subspace_of(&inter, &target, 1e-8) {
                        let w = witness_column(&inter, &target);
                        return Ok(LemmaVerdict {
                            kind,
                            holds: false,
                            witness: Some(LemmaWitness {
                                location: format!("degree {k}"),
                                exactness: name,
                                form: layout.to_form(&w),
                            }),
                        });
                    }
                }
            }
            Ok(LemmaVerdict { kind, holds: true, witness: None })
        }
    }
}

fn witness_column(inter: &CMat, target: &CMat) -> CVec {
    for c in 0..inter.ncols() {
        let col = inter.column(c).into_owned();
        let m = CMat::from_fn(col.len(), 1, |r, _| col[r]);
        if !linalg::is_subspace_of(&m, target, 1e-8) {
            return col;
        }
    }
    inter.column(0).into_owned()
}

/// Requires the stated lemma, as the propositions behind the transfer maps do.
pub fn require_lemma(model: &InvariantModel, kind: LemmaKind) -> Result<()> {
    let verdict = check_lemma(model, kind)?;
    if verdict.holds {
        Ok(())
    } else {
        Err(Error::LemmaRequired {
            lemma: match kind {
                LemmaKind::DdBar => "∂∂̄".into(),
                LemmaKind::HDdBar(h) => format!("h-∂∂̄ (h={h})"),
            },
        })
    }
}

/// Canonical transfer of a class to another flavor.
///
/// Supported maps: Dh(k,h) → DeRham(k) (the F map, needs the h-∂∂̄ lemma),
/// HAeppli(k,h) → Dh(k,h) (the G map, same hypothesis), DeRham(k) → Dh(k,h)
/// (θ_h, unconditional), Dolbeault(p,q) → Aeppli(p,q) (unconditional).
pub fn transfer_class(
    model: &InvariantModel,
    metric: Option<&HermitianMetric>,
    cls: &CohomologyClass,
    target: CohomologyFlavor,
) -> Result<CohomologyClass> {
    target.check_param()?;
    let group = compute_group(model, metric, target)?;
    let mapped: Form = match (cls.flavor, target) {
        (CohomologyFlavor::Dh(k, h), CohomologyFlavor::DeRham(k2)) if k == k2 => {
            require_lemma(model, LemmaKind::HDdBar(h))?;
            d_closed_rep_of_dh(model, &cls.representative, k, h)?
        }
        (CohomologyFlavor::HAeppli(k, h), CohomologyFlavor::Dh(k2, h2)) if k == k2 && h == h2 => {
            require_lemma(model, LemmaKind::HDdBar(h))?;
            dh_closed_rep_of_haeppli(model, &cls.representative, k, h)?
        }
        (CohomologyFlavor::DeRham(k), CohomologyFlavor::Dh(k2, h)) if k == k2 => {
            model.apply_diff(OperatorTag::Theta(h), &cls.representative)?
        }
        (CohomologyFlavor::Dolbeault(p, q), CohomologyFlavor::Aeppli(p2, q2)) if p == p2 && q == q2 => {
            cls.representative.clone()
        }
        (from, to) => {
            return Err(Error::NoCanonicalMap { from: from.label(), to: to.label() })
        }
    };
    group.class_of(&mapped)
}

/// A d-closed representative of a d_h-class: α + d_h β with d(α + d_h β) = 0.
pub fn d_closed_rep_of_dh(model: &InvariantModel, rep: &Form, k: usize, h: f64) -> Result<Form> {
    let n = model.n();
    let layout = DegreeLayout::new(n, k);
    let prev = DegreeLayout::new(n, k.saturating_sub(1));
    let x = layout.to_vec(rep);
    let d_after = model.d_total(k);
    let rhs = -(&d_after * &x);
    if k == 0 {
        return Ok(rep.clone());
    }
    let a = &d_after * model.dh_total(k - 1, h);
    let beta = linalg::lstsq_min_norm(&a, &rhs, linalg::RANK_TOL);
    let res = linalg::residual(&a, &beta, &rhs);
    if res > 1e-8 * (1.0 + x.norm()) {
        return Err(Error::InconsistentSystem(res));
    }
    let corrected = x + model.dh_total(k - 1, h) * beta;
    let _ = prev;
    Ok(layout.to_form(&corrected))
}

/// A d_h-closed representative of an h-Aeppli class: Ω + d_{−1/h} v.
pub fn dh_closed_rep_of_haeppli(model: &InvariantModel, rep: &Form, k: usize, h: f64) -> Result<Form> {
    let n = model.n();
    let layout = DegreeLayout::new(n, k);
    let x = layout.to_vec(rep);
    if k == 0 {
        return Ok(rep.clone());
    }
    let dh_after = model.dh_total(k, h);
    let rhs = -(&dh_after * &x);
    let a = &dh_after * model.dminus_total(k - 1, h);
    let v = linalg::lstsq_min_norm(&a, &rhs, linalg::RANK_TOL);
    let res = linalg::residual(&a, &v, &rhs);
    if res > 1e-8 * (1.0 + x.norm()) {
        return Err(Error::InconsistentSystem(res));
    }
    let corrected = x + model.dminus_total(k - 1, h) * v;
    Ok(layout.to_form(&corrected))
}

/// The Hodge-Aeppli decomposition of a De Rham class on a ∂∂̄ model:
/// {Σ α^{p,q}} ↦ ([α^{p,q}]_A)_{p+q=k}.
pub fn hodge_aeppli_components(
    model: &InvariantModel,
    metric: Option<&HermitianMetric>,
    cls: &CohomologyClass,
) -> Result<Vec<(usize, usize, CohomologyClass)>> {
    let CohomologyFlavor::DeRham(k) = cls.flavor else {
        return Err(Error::NoCanonicalMap { from: cls.flavor.label(), to: "⊕ H_A".into() });
    };
    require_lemma(model, LemmaKind::DdBar)?;
    let n = model.n();
    let layout = DegreeLayout::new(n, k);
    let mut out = Vec::new();
    for &(p, q, _, _) in &layout.blocks {
        let comp = Form::from_component(n, p, q, cls.representative.component(p, q));
        let group = compute_group(model, metric, CohomologyFlavor::Aeppli(p, q))?;
        out.push((p, q, group.class_of(&comp)?));
    }
    Ok(out)
}

/// Verifies that a transfer map is well defined by shifting the designated
/// representative with random exact forms; returns the worst coordinate drift.
pub fn representative_independence_defect(
    model: &InvariantModel,
    metric: Option<&HermitianMetric>,
    cls: &CohomologyClass,
    target: CohomologyFlavor,
    shifts: usize,
    seed: u64,
) -> Result<f64> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let source = compute_group(model, metric, cls.flavor)?;
    let base = transfer_class(model, metric, cls, target)?;
    let mut worst: f64 = 0.0;
    for _ in 0..shifts {
        let shift = source.random_exact(&mut rng);
        let moved = CohomologyClass {
            flavor: cls.flavor,
            coords: cls.coords.clone(),
            representative: cls.representative.add(&shift),
        };
        let got = transfer_class(model, metric, &moved, target)?;
        worst = worst.max((got.coords - &base.coords).norm());
    }
    Ok(worst)
}

/// Dimension table over all bidegrees for the pure-type flavors.
pub fn dimension_table(
    model: &InvariantModel,
    metric: Option<&HermitianMetric>,
) -> Result<Vec<(usize, usize, usize, usize, usize)>> {
    let n = model.n();
    let mut rows = Vec::new();
    for p in 0..=n {
        for q in 0..=n {
            let dol = compute_group(model, metric, CohomologyFlavor::Dolbeault(p, q))?.dim;
            let bc = compute_group(model, metric, CohomologyFlavor::BottChern(p, q))?.dim;
            let ae = compute_group(model, metric, CohomologyFlavor::Aeppli(p, q))?.dim;
            rows.push((p, q, dol, bc, ae));
        }
    }
    Ok(rows)
}

/// Betti numbers of the invariant complex.
pub fn betti_numbers(model: &InvariantModel) -> Result<Vec<usize>> {
    (0..=2 * model.n())
        .map(|k| Ok(compute_group(model, None, CohomologyFlavor::DeRham(k))?.dim))
        .collect()
}
