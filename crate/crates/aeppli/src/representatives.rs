//! Distinguished representatives inside cohomology classes: the ω-minimal
//! d-closed representative of an Aeppli class, and d-closed (resp. d_h-closed)
//! representatives of d_h- (resp. h-Aeppli-) classes.

use rand::Rng;

use crate::cohomology::{
    self, CohomologyClass, CohomologyFlavor, CohomologyGroup, LemmaKind,
};
use crate::error::{Error, Result};
use crate::form::{space_dim, Form, C};
use crate::linalg::{self, CMat, CVec};
use crate::metric::{HermitianMetric, LaplacianFlavor};
use crate::model::{InvariantModel, OperatorTag};

/// The ω-minimal d-closed representative χ_min = χ + ∂φ_min + ∂̄ψ_min of an
/// Aeppli class, where χ is the Δ_A-harmonic representative and φ_min, ψ_min
/// are the minimal L²-norm solutions of ∂̄χ = ∂∂̄φ and ∂χ = −∂∂̄ψ.
#[derive(Clone, Debug)]
pub struct MinimalRepresentative {
    pub chi_min: Form,
    pub phi_min: Form,
    pub psi_min: Form,
    pub harmonic: Form,
    pub class_coords: CVec,
    pub d_residual: f64,
}

/// Computes the ω-minimal d-closed representative of an Aeppli class.
/// Requires the ∂∂̄-lemma, as the defining propositions do.
pub fn minimal_d_closed_rep(
    model: &InvariantModel,
    metric: &HermitianMetric,
    cls: &CohomologyClass,
) -> Result<MinimalRepresentative> {
    let CohomologyFlavor::Aeppli(p, q) = cls.flavor else {
        return Err(Error::NoCanonicalMap { from: cls.flavor.label(), to: "ω-minimal d-closed".into() });
    };
    cohomology::require_lemma(model, LemmaKind::DdBar)?;
    let n = model.n();

    let group = cohomology::compute_group(model, Some(metric), cls.flavor)?;
    let coords = group.project(&cls.representative)?;
    let chi = group.rep_from_coords(&coords);
    debug_assert!(
        chi.is_zero(1e-14)
            || metric
                .harmonic_part(model, LaplacianFlavor::Aeppli, &chi)
                .map(|h| h.sub(&chi).norm_inf() < 1e-8)
                .unwrap_or(false),
        "group representative must be Δ_A-harmonic"
    );

    // ∂̄χ = ∂∂̄ φ with φ of minimal L²-norm on Λ^{p−1,q}
    let phi_min = if p >= 1 && q + 1 <= n {
        let a = model.deldelbar_matrix(p - 1, q);
        let b = model.apply_diff(OperatorTag::Delbar, &chi)?.component(p, q + 1);
        let (x, res) = linalg::lstsq_min_gram_norm(&a, &b, metric.gram(p - 1, q), linalg::RANK_TOL);
        if res > 1e-9 * (1.0 + b.norm()) {
            return Err(Error::InconsistentSystem(res));
        }
        Form::from_component(n, p - 1, q, x)
    } else {
        Form::zero(n)
    };

    // ∂χ = −∂∂̄ ψ with ψ of minimal L²-norm on Λ^{p,q−1}
    let psi_min = if q >= 1 && p + 1 <= n {
        let a = model.deldelbar_matrix(p, q - 1);
        let b = -model.apply_diff(OperatorTag::Del, &chi)?.component(p + 1, q);
        let (x, res) = linalg::lstsq_min_gram_norm(&a, &b, metric.gram(p, q - 1), linalg::RANK_TOL);
        if res > 1e-9 * (1.0 + b.norm()) {
            return Err(Error::InconsistentSystem(res));
        }
        Form::from_component(n, p, q - 1, x)
    } else {
        Form::zero(n)
    };

    let chi_min = chi
        .add(&model.apply_diff(OperatorTag::Del, &phi_min)?)
        .add(&model.apply_diff(OperatorTag::Delbar, &psi_min)?);
    let d_residual = model.apply_diff(OperatorTag::D, &chi_min)?.norm_inf();
    if d_residual > 1e-9 * (1.0 + chi_min.norm_inf()) {
        return Err(Error::InconsistentSystem(d_residual));
    }
    // in-class: the difference to the designated representative is Aeppli-exact
    let drift = (group.project(&chi_min)? - &coords).norm();
    if drift > 1e-8 * (1.0 + coords.norm()) {
        return Err(Error::InconsistentSystem(drift));
    }

    Ok(MinimalRepresentative { chi_min, phi_min, psi_min, harmonic: chi, class_coords: coords, d_residual })
}

/// Which closed-representative construction to run.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ClosedRepKind {
    AeppliToD,
    DhToD(f64),
    HAeppliToDh(f64),
}

/// A representative of `cls` closed for the target differential. The lemma
/// hypothesis of the corresponding proposition is checked first.
pub fn closed_rep(
    model: &InvariantModel,
    metric: Option<&HermitianMetric>,
    cls: &CohomologyClass,
    kind: ClosedRepKind,
) -> Result<Form> {
    match kind {
        ClosedRepKind::AeppliToD => {
            let CohomologyFlavor::Aeppli(_, _) = cls.flavor else {
                return Err(Error::NoCanonicalMap { from: cls.flavor.label(), to: "d-closed".into() });
            };
            cohomology::require_lemma(model, LemmaKind::DdBar)?;
            match metric {
                Some(g) => Ok(minimal_d_closed_rep(model, g, cls)?.chi_min),
                None => aeppli_closed_rep_unweighted(model, cls),
            }
        }
        ClosedRepKind::DhToD(h) => {
            if h == 0.0 {
                return Err(Error::ZeroH);
            }
            let CohomologyFlavor::Dh(k, hh) = cls.flavor else {
                return Err(Error::NoCanonicalMap { from: cls.flavor.label(), to: "d-closed".into() });
            };
            if hh != h {
                return Err(Error::HypothesisFailed(format!("class has h = {hh}, requested {h}")));
            }
            cohomology::require_lemma(model, LemmaKind::HDdBar(h))?;
            let out = cohomology::d_closed_rep_of_dh(model, &cls.representative, k, h)?;
            verify_same_class(model, metric, cls, &out)?;
            Ok(out)
        }
        ClosedRepKind::HAeppliToDh(h) => {
            if h == 0.0 {
                return Err(Error::ZeroH);
            }
            let CohomologyFlavor::HAeppli(k, hh) = cls.flavor else {
                return Err(Error::NoCanonicalMap { from: cls.flavor.label(), to: "d_h-closed".into() });
            };
            if hh != h {
                return Err(Error::HypothesisFailed(format!("class has h = {hh}, requested {h}")));
            }
            cohomology::require_lemma(model, LemmaKind::HDdBar(h))?;
            let out = cohomology::dh_closed_rep_of_haeppli(model, &cls.representative, k, h)?;
            verify_same_class(model, metric, cls, &out)?;
            Ok(out)
        }
    }
}

fn verify_same_class(
    model: &InvariantModel,
    metric: Option<&HermitianMetric>,
    cls: &CohomologyClass,
    candidate: &Form,
) -> Result<()> {
    let group = cohomology::compute_group(model, metric, cls.flavor)?;
    let a = group.project(&cls.representative)?;
    let b = group.project(candidate)?;
    let drift = (a - b).norm();
    if drift > 1e-8 * (1.0 + cls.coords.norm()) {
        return Err(Error::InconsistentSystem(drift));
    }
    Ok(())
}

/// Metric-free d-closed representative of an Aeppli class: Euclidean
/// minimum-norm correctors instead of L²-minimal ones.
fn aeppli_closed_rep_unweighted(model: &InvariantModel, cls: &CohomologyClass) -> Result<Form> {
    let CohomologyFlavor::Aeppli(p, q) = cls.flavor else { unreachable!() };
    let n = model.n();
    let chi = &cls.representative;
    let mut out = chi.clone();
    if p >= 1 && q + 1 <= n {
        let a = model.deldelbar_matrix(p - 1, q);
        let b = model.apply_diff(OperatorTag::Delbar, chi)?.component(p, q + 1);
        let x = linalg::lstsq_min_norm(&a, &b, linalg::RANK_TOL);
        if linalg::residual(&a, &x, &b) > 1e-9 * (1.0 + b.norm()) {
            return Err(Error::InconsistentSystem(linalg::residual(&a, &x, &b)));
        }
        out = out.add(&model.apply_diff(OperatorTag::Del, &Form::from_component(n, p - 1, q, x))?);
    }
    if q >= 1 && p + 1 <= n {
        let a = model.deldelbar_matrix(p, q - 1);
        let b = -model.apply_diff(OperatorTag::Del, chi)?.component(p + 1, q);
        let x = linalg::lstsq_min_norm(&a, &b, linalg::RANK_TOL);
        if linalg::residual(&a, &x, &b) > 1e-9 * (1.0 + b.norm()) {
            return Err(Error::InconsistentSystem(linalg::residual(&a, &x, &b)));
        }
        out = out.add(&model.apply_diff(OperatorTag::Delbar, &Form::from_component(n, p, q - 1, x))?);
    }
    let res = model.apply_diff(OperatorTag::D, &out)?.norm_inf();
    if res > 1e-9 * (1.0 + out.norm_inf()) {
        return Err(Error::InconsistentSystem(res));
    }
    Ok(out)
}

/// A random form that is both d-closed and Aeppli-exact on Λ^{p,q}, the
/// representative shifts allowed by the independence observation.
pub fn random_d_closed_aeppli_exact(
    model: &InvariantModel,
    p: usize,
    q: usize,
    rng: &mut impl Rng,
) -> Result<Form> {
    let n = model.n();
    let dim = space_dim(n, p, q);
    let d1 = if p >= 1 { model.del_matrix(p - 1, q).clone() } else { CMat::zeros(dim, 0) };
    let d2 = if q >= 1 { model.delbar_matrix(p, q - 1).clone() } else { CMat::zeros(dim, 0) };
    let gen = linalg::hcat(&[&d1, &d2]);
    if gen.ncols() == 0 {
        return Ok(Form::zero(n));
    }
    // stack the d-closedness constraint on the generated form
    let d_del = if p + 1 <= n { model.del_matrix(p, q).clone() } else { CMat::zeros(0, dim) };
    let d_dbar = if q + 1 <= n { model.delbar_matrix(p, q).clone() } else { CMat::zeros(0, dim) };
    let mut constraint = CMat::zeros(d_del.nrows() + d_dbar.nrows(), gen.ncols());
    if d_del.nrows() > 0 {
        constraint
            .view_mut((0, 0), (d_del.nrows(), gen.ncols()))
            .copy_from(&(&d_del * &gen));
    }
    if d_dbar.nrows() > 0 {
        constraint
            .view_mut((d_del.nrows(), 0), (d_dbar.nrows(), gen.ncols()))
            .copy_from(&(&d_dbar * &gen));
    }
    let null = linalg::nullspace(&constraint, linalg::RANK_TOL);
    if null.ncols() == 0 {
        return Ok(Form::zero(n));
    }
    let coef = CVec::from_fn(null.ncols(), |_, _| C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    let v = &gen * (null * coef);
    Ok(Form::from_component(n, p, q, v))
}

/// Sampling helper: a random class of the given group.
pub fn random_class(group: &CohomologyGroup, rng: &mut impl Rng) -> Option<CohomologyClass> {
    if group.dim == 0 {
        return None;
    }
    let coords = CVec::from_fn(group.dim, |_, _| C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    let rep = group.rep_from_coords(&coords);
    Some(CohomologyClass { flavor: group.flavor, coords, representative: rep })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn setup(name: &str) -> (InvariantModel, HermitianMetric) {
        let e = catalog::entry(name).unwrap();
        let m = e.model().unwrap();
        let g = HermitianMetric::new(&m, e.metric_matrix()).unwrap();
        (m, g)
    }

    #[test]
    fn torus_correctors_vanish_exactly() {
        let (m, g) = setup("torus2");
        let grp = cohomology::compute_group(&m, Some(&g), CohomologyFlavor::Aeppli(1, 1)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let cls = random_class(&grp, &mut rng).unwrap();
        let rep = minimal_d_closed_rep(&m, &g, &cls).unwrap();
        assert_eq!(rep.phi_min.norm_inf(), 0.0);
        assert_eq!(rep.psi_min.norm_inf(), 0.0);
        assert!(rep.chi_min.sub(&rep.harmonic).norm_inf() < 1e-14);
    }

    #[test]
    fn fou_minimal_rep_is_d_closed_and_minimal() {
        let (m, g) = setup("fou");
        let n = m.n();
        let grp = cohomology::compute_group(&m, Some(&g), CohomologyFlavor::Aeppli(n - 1, n - 1)).unwrap();
        // the Gauduchon power of the catalog metric
        let omega_pow = g.omega().wedge_pow(n - 1).unwrap();
        let cls = grp.class_of(&omega_pow).unwrap();
        let rep = minimal_d_closed_rep(&m, &g, &cls).unwrap();
        assert!(rep.d_residual < 1e-10);
        // minimality against perturbed alternative correctors
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let phi_norm = g.norm(&rep.phi_min);
        let psi_norm = g.norm(&rep.psi_min);
        let ker_phi = linalg::nullspace(&m.deldelbar_matrix(n - 2, n - 1), linalg::RANK_TOL);
        let ker_psi = linalg::nullspace(&m.deldelbar_matrix(n - 1, n - 2), linalg::RANK_TOL);
        for _ in 0..20 {
            let c1 = CVec::from_fn(ker_phi.ncols(), |_, _| C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
            let alt_phi = rep.phi_min.add(&Form::from_component(n, n - 2, n - 1, &ker_phi * c1));
            let c2 = CVec::from_fn(ker_psi.ncols(), |_, _| C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
            let alt_psi = rep.psi_min.add(&Form::from_component(n, n - 1, n - 2, &ker_psi * c2));
            // alternatives still solve the equations, but are never shorter
            assert!(g.norm(&alt_phi) + 1e-9 >= phi_norm);
            assert!(g.norm(&alt_psi) + 1e-9 >= psi_norm);
        }
    }

    #[test]
    fn zero_class_gives_d_closed_pure_corrector() {
        let (m, g) = setup("fou");
        let zero_cls = CohomologyClass {
            flavor: CohomologyFlavor::Aeppli(1, 1),
            coords: CVec::zeros(
                cohomology::compute_group(&m, Some(&g), CohomologyFlavor::Aeppli(1, 1)).unwrap().dim,
            ),
            representative: Form::zero(m.n()),
        };
        let rep = minimal_d_closed_rep(&m, &g, &zero_cls).unwrap();
        assert!(rep.harmonic.norm_inf() < 1e-12);
        assert!(rep.d_residual < 1e-10);
    }

    #[test]
    fn iwasawa_refuses_lemma_required() {
        let (m, g) = setup("iwasawa");
        let grp = cohomology::compute_group(&m, Some(&g), CohomologyFlavor::Aeppli(1, 1)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let cls = random_class(&grp, &mut rng).unwrap();
        match minimal_d_closed_rep(&m, &g, &cls) {
            Err(Error::LemmaRequired { .. }) => {}
            other => panic!("expected LemmaRequired, got {:?}", other.map(|r| r.d_residual)),
        }
        match closed_rep(&m, Some(&g), &cls, ClosedRepKind::AeppliToD) {
            Err(Error::LemmaRequired { .. }) => {}
            other => panic!("expected LemmaRequired, got {:?}", other.map(|f| f.norm_inf())),
        }
    }

    #[test]
    fn dh_classes_get_d_closed_reps_on_fou() {
        let (m, g) = setup("fou");
        let h = 2.0;
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let grp = cohomology::compute_group(&m, Some(&g), CohomologyFlavor::Dh(3, h)).unwrap();
        for _ in 0..5 {
            let cls = random_class(&grp, &mut rng).unwrap();
            let rep = closed_rep(&m, Some(&g), &cls, ClosedRepKind::DhToD(h)).unwrap();
            let d = m.apply_diff(OperatorTag::D, &rep).unwrap();
            assert!(d.norm_inf() < 1e-9 * (1.0 + rep.norm_inf()));
        }
    }

    #[test]
    fn haeppli_classes_get_dh_closed_reps_on_fou() {
        let (m, g) = setup("fou");
        let h = 0.5;
        let k = 2 * m.n() - 2;
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let grp = cohomology::compute_group(&m, Some(&g), CohomologyFlavor::HAeppli(k, h)).unwrap();
        for _ in 0..5 {
            let cls = random_class(&grp, &mut rng).unwrap();
            let rep = closed_rep(&m, Some(&g), &cls, ClosedRepKind::HAeppliToDh(h)).unwrap();
            let dh = m.apply_diff(OperatorTag::Dh(h), &rep).unwrap();
            assert!(dh.norm_inf() < 1e-9 * (1.0 + rep.norm_inf()));
        }
    }

    #[test]
    fn torus_closed_rep_is_harmonic_rep_itself() {
        let (m, g) = setup("torus3");
        let grp = cohomology::compute_group(&m, Some(&g), CohomologyFlavor::Aeppli(2, 1)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let cls = random_class(&grp, &mut rng).unwrap();
        let rep = minimal_d_closed_rep(&m, &g, &cls).unwrap();
        assert!(rep.chi_min.sub(&rep.harmonic).norm_inf() < 1e-13);
    }

    #[test]
    fn f_composition_is_identity_on_quotients() {
        // closed_rep(DhToD) followed by the class map F gives back the coordinates
        let (m, g) = setup("fou");
        let h = 2.0;
        let k = 3;
        let grp = cohomology::compute_group(&m, Some(&g), CohomologyFlavor::Dh(k, h)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..5 {
            let cls = random_class(&grp, &mut rng).unwrap();
            let rep = closed_rep(&m, Some(&g), &cls, ClosedRepKind::DhToD(h)).unwrap();
            // rep is d-closed and still in the class: project back
            let back = grp.project(&rep).unwrap();
            assert!((back - &cls.coords).norm() < 1e-8);
        }
    }

    #[test]
    fn random_shifts_are_d_closed_and_exact() {
        let (m, _g) = setup("fou");
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let n = m.n();
        for _ in 0..10 {
            let w = random_d_closed_aeppli_exact(&m, n - 1, n - 1, &mut rng).unwrap();
            let d = m.apply_diff(OperatorTag::D, &w).unwrap();
            assert!(d.norm_inf() < 1e-9 * (1.0 + w.norm_inf()));
        }
    }
}
