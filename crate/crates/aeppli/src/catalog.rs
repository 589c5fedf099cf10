//! The manifold catalog: invariant models used throughout the test suite and
//! the CLI. Expected properties recorded here are literature metadata for the
//! reader; every check recomputes from the structure constants.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::form::{Form, C};
use crate::model::{build_model, ComplexStructure, InvariantModel, LieAlgebraPresentation};

/// Family metadata for parametrized entries.
#[derive(Clone, Debug)]
pub struct FamilyInfo {
    pub parameter: &'static str,
    pub range: (f64, f64),
    pub default: f64,
}

#[derive(Clone)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub description: &'static str,
    /// Advisory literature flags; never used as test oracles.
    pub expected: &'static [&'static str],
    pub family: Option<FamilyInfo>,
    builder: fn(f64) -> LieAlgebraPresentation,
    /// Hermitian coefficient matrix H of the default metric ω = i Σ H_{jk} φ^j ∧ φ̄^k.
    metric: fn(usize) -> DMatrix<C>,
    /// Scale c of the trivializing form u = c·φ^1∧…∧φ^n, when the entry is Calabi-Yau.
    pub u_scale: Option<f64>,
}

impl CatalogEntry {
    pub fn presentation(&self) -> LieAlgebraPresentation {
        let a = self.family.as_ref().map(|f| f.default).unwrap_or(0.0);
        (self.builder)(a)
    }

    pub fn presentation_at(&self, a: f64) -> Result<LieAlgebraPresentation> {
        match &self.family {
            Some(f) => {
                if a <= f.range.0 || a >= f.range.1 {
                    return Err(Error::HypothesisFailed(format!(
                        "family parameter {a} outside open range ({}, {})",
                        f.range.0, f.range.1
                    )));
                }
                Ok((self.builder)(a))
            }
            None => Err(Error::HypothesisFailed(format!(
                "entry `{}` is not a family",
                self.name
            ))),
        }
    }

    pub fn model(&self) -> Result<InvariantModel> {
        build_model(&self.presentation())
    }

    pub fn model_at(&self, a: f64) -> Result<InvariantModel> {
        build_model(&self.presentation_at(a)?)
    }

    pub fn metric_matrix(&self) -> DMatrix<C> {
        let n = self.presentation().dim_real / 2;
        (self.metric)(n)
    }

    /// The trivializing (n,0)-form, when declared.
    pub fn trivializing_form(&self) -> Option<Form> {
        let n = self.presentation().dim_real / 2;
        self.u_scale
            .map(|s| Form::monomial(n, (1 << n) - 1, 0, C::new(s, 0.0)))
    }
}

fn identity_metric(n: usize) -> DMatrix<C> {
    DMatrix::from_fn(n, n, |r, c| {
        if r == c {
            C::new(1.0, 0.0)
        } else {
            C::new(0.0, 0.0)
        }
    })
}

/// Standard coframe φ^a = e^{2a-1} + i·e^{2a} as an n×2n matrix.
fn standard_coframe(n: usize) -> DMatrix<C> {
    DMatrix::from_fn(n, 2 * n, |a, m| {
        if m == 2 * a {
            C::new(1.0, 0.0)
        } else if m == 2 * a + 1 {
            C::new(0.0, 1.0)
        } else {
            C::new(0.0, 0.0)
        }
    })
}

/// Derives the real structure constants from structure equations given on the
/// complex generators: dφ^a supplied as Forms in the monomial basis of the
/// coframe itself. Returns sparse triples with the crate convention
/// de^k = −Σ_{i<j} c^k_{ij} e^i∧e^j.
fn constants_from_complex_equations(
    coframe: &DMatrix<C>,
    dphi: &[Form],
) -> Vec<(usize, usize, usize, f64)> {
    let n = coframe.nrows();
    let dim = 2 * n;
    // T = [coframe; conj coframe], generators g: 0..n ↦ φ, n..2n ↦ φ̄
    let mut t = DMatrix::<C>::zeros(dim, dim);
    for a in 0..n {
        for m in 0..dim {
            t[(a, m)] = coframe[(a, m)];
            t[(n + a, m)] = coframe[(a, m)].conj();
        }
    }
    let tinv = t.clone().try_inverse().expect("coframe spans");

    // Antisymmetric generator-basis coefficient matrix of each d(gen_g).
    let gen_matrix = |f: &Form| -> DMatrix<C> {
        let mut b = DMatrix::<C>::zeros(dim, dim);
        let mut put = |g: usize, h: usize, c: C| {
            b[(g, h)] += c * C::new(0.5, 0.0);
            b[(h, g)] -= c * C::new(0.5, 0.0);
        };
        for (p, q) in f.bidegrees() {
            let v = f.component(p, q);
            for (k, c) in v.iter().enumerate() {
                if c.norm() == 0.0 {
                    continue;
                }
                let (im, jm) = crate::form::monomial_masks(n, p, q, k);
                match (p, q) {
                    (2, 0) => {
                        let e = crate::index::elements(im);
                        put(e[0], e[1], *c);
                    }
                    (0, 2) => {
                        let e = crate::index::elements(jm);
                        put(n + e[0], n + e[1], *c);
                    }
                    (1, 1) => {
                        let i = crate::index::elements(im)[0];
                        let j = crate::index::elements(jm)[0];
                        put(i, n + j, *c);
                    }
                    _ => panic!("structure equations must be 2-forms"),
                }
            }
        }
        b
    };

    let mut dgen: Vec<DMatrix<C>> = Vec::with_capacity(dim);
    for a in 0..n {
        dgen.push(gen_matrix(&dphi[a]));
    }
    for a in 0..n {
        dgen.push(gen_matrix(&dphi[a].conj()));
    }

    let mut triples = Vec::new();
    for m in 0..dim {
        // de^m = Σ_g tinv[m,g] · d(gen_g); in the e-basis: A = Tᵀ B T summed
        let mut acc = DMatrix::<C>::zeros(dim, dim);
        for g in 0..dim {
            let c = tinv[(m, g)];
            if c.norm() == 0.0 {
                continue;
            }
            acc += t.transpose() * &dgen[g] * &t * c;
        }
        for i in 0..dim {
            for j in (i + 1)..dim {
                let c = acc[(i, j)] - acc[(j, i)];
                assert!(c.im.abs() < 1e-10, "real structure constants expected");
                let val = c.re;
                if val.abs() > 1e-13 {
                    // de^m coefficient is val; constants convention flips the sign
                    triples.push((m, i, j, -val));
                }
            }
        }
    }
    triples
}

fn torus_pres(n: usize, name: &str) -> LieAlgebraPresentation {
    LieAlgebraPresentation {
        name: name.into(),
        dim_real: 2 * n,
        structure: vec![],
        complex_structure: ComplexStructure::Coframe(standard_coframe(n)),
    }
}

fn torus2(_: f64) -> LieAlgebraPresentation {
    torus_pres(2, "torus2")
}

fn torus3(_: f64) -> LieAlgebraPresentation {
    torus_pres(3, "torus3")
}

fn iwasawa(_: f64) -> LieAlgebraPresentation {
    let n = 3;
    let coframe = standard_coframe(n);
    let zero = Form::zero(n);
    // dφ³ = −φ¹∧φ²
    let dphi3 = Form::monomial(n, 0b011, 0, C::new(-1.0, 0.0));
    let structure = constants_from_complex_equations(&coframe, &[zero.clone(), zero, dphi3]);
    LieAlgebraPresentation {
        name: "iwasawa".into(),
        dim_real: 6,
        structure,
        complex_structure: ComplexStructure::Coframe(coframe),
    }
}

fn kodaira_thurston(_: f64) -> LieAlgebraPresentation {
    let n = 2;
    let coframe = standard_coframe(n);
    // dφ² = −(1/2)·φ¹∧φ̄¹
    let dphi2 = Form::monomial(n, 0b01, 0b01, C::new(-0.5, 0.0));
    let structure = constants_from_complex_equations(&coframe, &[Form::zero(n), dphi2]);
    LieAlgebraPresentation {
        name: "kodaira_thurston".into(),
        dim_real: 4,
        structure,
        complex_structure: ComplexStructure::Coframe(coframe),
    }
}

/// Structure equations of the Nakamura solvable algebra in the parallelizable
/// coframe: dφ¹ = 0, dφ² = −φ¹∧φ², dφ³ = φ¹∧φ³.
fn nakamura_constants() -> (DMatrix<C>, Vec<(usize, usize, usize, f64)>) {
    let n = 3;
    let coframe = standard_coframe(n);
    let dphi2 = Form::monomial(n, 0b011, 0, C::new(-1.0, 0.0));
    let dphi3 = Form::monomial(n, 0b101, 0, C::new(1.0, 0.0));
    let structure = constants_from_complex_equations(&coframe, &[Form::zero(n), dphi2, dphi3]);
    (coframe, structure)
}

fn nakamura(_: f64) -> LieAlgebraPresentation {
    let (coframe, structure) = nakamura_constants();
    LieAlgebraPresentation {
        name: "nakamura".into(),
        dim_real: 6,
        structure,
        complex_structure: ComplexStructure::Coframe(coframe),
    }
}

/// The six-dimensional solvmanifold family: the fixed Nakamura algebra with
/// the deformed coframe φ¹_a = φ¹ − a·φ̄¹, φ²_a = φ², φ³_a = φ³.
fn fou(a: f64) -> LieAlgebraPresentation {
    let (coframe0, structure) = nakamura_constants();
    let n = 3;
    let mut rows = coframe0.clone();
    for m in 0..2 * n {
        rows[(0, m)] = coframe0[(0, m)] - Complex64::new(a, 0.0) * coframe0[(0, m)].conj();
    }
    LieAlgebraPresentation {
        name: format!("fou(a={a})"),
        dim_real: 6,
        structure,
        complex_structure: ComplexStructure::Coframe(rows),
    }
}

pub fn entries() -> Vec<CatalogEntry> {
    vec![
        CatalogEntry {
            name: "torus2",
            description: "complex torus, n = 2 (abelian algebra)",
            expected: &["kahler", "ddbar", "balanced", "gauduchon", "calabi-yau"],
            family: None,
            builder: torus2,
            metric: identity_metric,
            u_scale: Some(1.0),
        },
        CatalogEntry {
            name: "torus3",
            description: "complex torus, n = 3 (abelian algebra)",
            expected: &["kahler", "ddbar", "balanced", "gauduchon", "calabi-yau"],
            family: None,
            builder: torus3,
            metric: identity_metric,
            u_scale: Some(1.0),
        },
        CatalogEntry {
            name: "iwasawa",
            description: "Iwasawa nilmanifold, n = 3: dφ³ = −φ¹∧φ²",
            expected: &["non-ddbar", "balanced", "calabi-yau"],
            family: None,
            builder: iwasawa,
            metric: identity_metric,
            u_scale: Some(1.0),
        },
        CatalogEntry {
            name: "kodaira_thurston",
            description: "Kodaira-Thurston surface, n = 2: dφ² = −½·φ¹∧φ̄¹",
            expected: &["non-ddbar", "skt", "calabi-yau"],
            family: None,
            builder: kodaira_thurston,
            metric: identity_metric,
            u_scale: Some(1.0),
        },
        CatalogEntry {
            name: "nakamura",
            description: "holomorphically parallelizable Nakamura solvmanifold, n = 3",
            expected: &["non-ddbar", "balanced", "calabi-yau"],
            family: None,
            builder: nakamura,
            metric: identity_metric,
            u_scale: Some(1.0),
        },
        CatalogEntry {
            name: "fou",
            description: "six-dimensional solvmanifold family J_a over the Nakamura algebra",
            expected: &["ddbar (a ≠ 0, invariant level)", "balanced", "calabi-yau", "non-kahler"],
            family: Some(FamilyInfo { parameter: "a", range: (-1.0, 1.0), default: 0.5 }),
            builder: fou,
            metric: identity_metric,
            u_scale: Some(1.0),
        },
    ]
}

pub fn entry(name: &str) -> Result<CatalogEntry> {
    entries()
        .into_iter()
        .find(|e| e.name == name)
        .ok_or_else(|| Error::UnknownEntry(name.into()))
}
