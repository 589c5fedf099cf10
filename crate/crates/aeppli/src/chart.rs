//! Exact polynomial-coefficient forms on a coordinate chart of ℂⁿ.
//!
//! Coefficients are Gaussian rationals, so ∂, ∂̄, wedge and contraction are
//! exact. This module is the independent oracle for the contraction
//! identities: it decides which textual variant of each identity holds, by
//! exact polynomial subtraction over random trials.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::index::{deletion_sign, elements, merge_sign, Mask};

pub type Q = BigRational;
pub type CQ = Complex<Q>;

fn cq(re: i64, im: i64) -> CQ {
    Complex::new(
        BigRational::from_integer(BigInt::from(re)),
        BigRational::from_integer(BigInt::from(im)),
    )
}

/// Monomial z^a z̄^b.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Mono {
    pub zpow: Vec<u16>,
    pub wpow: Vec<u16>,
}

/// Polynomial in z₁..z_n, z̄₁..z̄_n with Gaussian rational coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly {
    n: usize,
    terms: BTreeMap<Mono, CQ>,
}

impl Poly {
    pub fn zero(n: usize) -> Self {
        Poly { n, terms: BTreeMap::new() }
    }

    pub fn constant(n: usize, c: CQ) -> Self {
        let mut p = Poly::zero(n);
        if !c.is_zero() {
            p.terms.insert(Mono { zpow: vec![0; n], wpow: vec![0; n] }, c);
        }
        p
    }

    pub fn var_z(n: usize, k: usize) -> Self {
        let mut zpow = vec![0; n];
        zpow[k] = 1;
        let mut p = Poly::zero(n);
        p.terms.insert(Mono { zpow, wpow: vec![0; n] }, cq(1, 0));
        p
    }

    pub fn var_zbar(n: usize, k: usize) -> Self {
        let mut wpow = vec![0; n];
        wpow[k] = 1;
        let mut p = Poly::zero(n);
        p.terms.insert(Mono { zpow: vec![0; n], wpow }, cq(1, 0));
        p
    }

    fn insert(&mut self, m: Mono, c: CQ) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m).or_insert_with(|| cq(0, 0));
        *entry = entry.clone() + c;
        let dead = entry.is_zero();
        if dead {
            // normalize away cancelled terms so equality is structural
            let key = self
                .terms
                .iter()
                .find(|(_, v)| v.is_zero())
                .map(|(k, _)| k.clone());
            if let Some(k) = key {
                self.terms.remove(&k);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Poly {
        let mut out = Poly::zero(self.n);
        for (m, c) in &self.terms {
            out.terms.insert(m.clone(), -c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero(self.n);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let m = Mono {
                    zpow: m1.zpow.iter().zip(&m2.zpow).map(|(a, b)| a + b).collect(),
                    wpow: m1.wpow.iter().zip(&m2.wpow).map(|(a, b)| a + b).collect(),
                };
                out.insert(m, c1.clone() * c2.clone());
            }
        }
        out
    }

    pub fn scale(&self, c: &CQ) -> Poly {
        let mut out = Poly::zero(self.n);
        for (m, v) in &self.terms {
            out.insert(m.clone(), v.clone() * c.clone());
        }
        out
    }

    /// Formal Wirtinger derivative ∂/∂z_k.
    pub fn d_z(&self, k: usize) -> Poly {
        let mut out = Poly::zero(self.n);
        for (m, c) in &self.terms {
            let e = m.zpow[k];
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2.zpow[k] -= 1;
            out.insert(m2, c.clone() * cq(e as i64, 0));
        }
        out
    }

    /// Formal Wirtinger derivative ∂/∂z̄_k.
    pub fn d_zbar(&self, k: usize) -> Poly {
        let mut out = Poly::zero(self.n);
        for (m, c) in &self.terms {
            let e = m.wpow[k];
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2.wpow[k] -= 1;
            out.insert(m2, c.clone() * cq(e as i64, 0));
        }
        out
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        for (m, c) in &self.terms {
            let mut s = format!("({}+{}i)", c.re, c.im);
            for (k, &e) in m.zpow.iter().enumerate() {
                if e > 0 {
                    s.push_str(&format!("·z{}^{}", k + 1, e));
                }
            }
            for (k, &e) in m.wpow.iter().enumerate() {
                if e > 0 {
                    s.push_str(&format!("·z̄{}^{}", k + 1, e));
                }
            }
            parts.push(s);
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// Pure-type (p,q) polynomial form Σ f_{IJ} dz_I ∧ dz̄_J.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyForm {
    n: usize,
    pub comps: BTreeMap<(Mask, Mask), Poly>,
}

impl PolyForm {
    pub fn zero(n: usize) -> Self {
        PolyForm { n, comps: BTreeMap::new() }
    }

    pub fn monomial(n: usize, imask: Mask, jmask: Mask, f: Poly) -> Self {
        let mut out = PolyForm::zero(n);
        out.insert(imask, jmask, f);
        out
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn insert(&mut self, i: Mask, j: Mask, f: Poly) {
        if f.is_zero() {
            return;
        }
        let e = self.comps.entry((i, j)).or_insert_with(|| Poly::zero(self.n));
        *e = e.add(&f);
        if e.is_zero() {
            self.comps.remove(&(i, j));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn add(&self, other: &PolyForm) -> PolyForm {
        let mut out = self.clone();
        for (&(i, j), f) in &other.comps {
            out.insert(i, j, f.clone());
        }
        out
    }

    pub fn neg(&self) -> PolyForm {
        let mut out = PolyForm::zero(self.n);
        for (&(i, j), f) in &self.comps {
            out.comps.insert((i, j), f.neg());
        }
        out
    }

    pub fn sub(&self, other: &PolyForm) -> PolyForm {
        self.add(&other.neg())
    }

    pub fn wedge(&self, other: &PolyForm) -> PolyForm {
        let mut out = PolyForm::zero(self.n);
        for (&(i1, j1), f1) in &self.comps {
            for (&(i2, j2), f2) in &other.comps {
                let Some((im, si)) = merge_sign(i1, i2) else { continue };
                let Some((jm, sj)) = merge_sign(j1, j2) else { continue };
                let q1 = j1.count_ones() as usize;
                let p2 = i2.count_ones() as usize;
                let cross = if (q1 * p2) % 2 == 0 { 1 } else { -1 };
                let s = si * sj * cross;
                out.insert(im, jm, f1.mul(f2).scale(&cq(s as i64, 0)));
            }
        }
        out
    }

    /// ∂: raises p by one.
    pub fn del(&self) -> PolyForm {
        let mut out = PolyForm::zero(self.n);
        for (&(i, j), f) in &self.comps {
            for k in 0..self.n {
                let df = f.d_z(k);
                if df.is_zero() {
                    continue;
                }
                if let Some((im, s)) = merge_sign(1 << k, i) {
                    out.insert(im, j, df.scale(&cq(s as i64, 0)));
                }
            }
        }
        out
    }

    /// ∂̄: raises q by one.
    pub fn delbar(&self) -> PolyForm {
        let mut out = PolyForm::zero(self.n);
        for (&(i, j), f) in &self.comps {
            let p = i.count_ones() as usize;
            let cross = if p % 2 == 0 { 1 } else { -1 };
            for k in 0..self.n {
                let df = f.d_zbar(k);
                if df.is_zero() {
                    continue;
                }
                if let Some((jm, s)) = merge_sign(1 << k, j) {
                    out.insert(i, jm, df.scale(&cq((s * cross) as i64, 0)));
                }
            }
        }
        out
    }

    /// Interior product with ∂/∂z_j, polynomial coefficient 1.
    fn contract_frame(&self, j: usize) -> PolyForm {
        let mut out = PolyForm::zero(self.n);
        for (&(i, jm), f) in &self.comps {
            if i & (1 << j) == 0 {
                continue;
            }
            let s = deletion_sign(i, j);
            out.insert(i & !(1 << j), jm, f.scale(&cq(s as i64, 0)));
        }
        out
    }
}

impl fmt::Display for PolyForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.comps.is_empty() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        for (&(i, j), poly) in &self.comps {
            let hol: Vec<String> = elements(i).iter().map(|k| format!("dz{}", k + 1)).collect();
            let ahol: Vec<String> = elements(j).iter().map(|k| format!("dz̄{}", k + 1)).collect();
            let mono = hol.into_iter().chain(ahol).collect::<Vec<_>>().join("∧");
            let mono = if mono.is_empty() { "1".into() } else { mono };
            parts.push(format!("[{}]·{}", poly, mono));
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// Σ_J poly_{J,j} dz̄_J ⊗ ∂/∂z_j — vector fields are the q = 0 case, the
/// diagonal v = Σ v_l dz̄_l ∧ ∂/∂z_l is the q = 1 case.
#[derive(Clone, Debug)]
pub struct ChartVector {
    n: usize,
    q: usize,
    terms: BTreeMap<(Mask, usize), Poly>,
}

impl ChartVector {
    /// ζ = Σ ζ_j ∂/∂z_j.
    pub fn field(comps: Vec<Poly>) -> Self {
        let n = comps.len();
        let mut terms = BTreeMap::new();
        for (j, f) in comps.into_iter().enumerate() {
            if !f.is_zero() {
                terms.insert((0 as Mask, j), f);
            }
        }
        ChartVector { n, q: 0, terms }
    }

    /// v = Σ v_l dz̄_l ∧ ∂/∂z_l.
    pub fn diagonal(comps: Vec<Poly>) -> Self {
        let n = comps.len();
        let mut terms = BTreeMap::new();
        for (l, f) in comps.into_iter().enumerate() {
            if !f.is_zero() {
                terms.insert(((1 << l) as Mask, l), f);
            }
        }
        ChartVector { n, q: 1, terms }
    }

    /// ∂̄ acting on the form part: Σ (∂poly/∂z̄_r) dz̄_r ∧ dz̄_J ⊗ ∂/∂z_j.
    pub fn delbar(&self) -> ChartVector {
        let mut terms: BTreeMap<(Mask, usize), Poly> = BTreeMap::new();
        for (&(jm, j), f) in &self.terms {
            for r in 0..self.n {
                let df = f.d_zbar(r);
                if df.is_zero() {
                    continue;
                }
                if let Some((jm2, s)) = merge_sign(1 << r, jm) {
                    let add = df.scale(&cq(s as i64, 0));
                    let e = terms.entry((jm2, j)).or_insert_with(|| Poly::zero(self.n));
                    *e = e.add(&add);
                    if e.is_zero() {
                        terms.remove(&(jm2, j));
                    }
                }
            }
        }
        ChartVector { n: self.n, q: self.q + 1, terms }
    }

    /// Contraction: Σ poly · dz̄_J ∧ (∂/∂z_j ⌟ φ).
    pub fn contract(&self, a: &PolyForm) -> PolyForm {
        let mut out = PolyForm::zero(self.n);
        for (&(jm, j), f) in &self.terms {
            let inner = a.contract_frame(j);
            for (&(im2, jm2), g) in &inner.comps {
                let p2 = im2.count_ones() as usize;
                let cross = if (self.q * p2) % 2 == 0 { 1 } else { -1 };
                let Some((jm3, s)) = merge_sign(jm, jm2) else { continue };
                out.insert(im2, jm3, f.mul(g).scale(&cq((s * cross) as i64, 0)));
            }
        }
        out
    }
}

/// One evaluated identity candidate.
#[derive(Clone, Debug)]
pub struct IdentityCandidate {
    pub name: &'static str,
    pub formula: &'static str,
    pub passes: usize,
    pub fails: usize,
    pub first_failure: Option<String>,
}

/// Result of the randomized exact verification of the contraction lemma.
#[derive(Clone, Debug)]
pub struct IdentityReport {
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    pub candidates: Vec<IdentityCandidate>,
    /// Names of the candidates that held in every trial.
    pub verified: Vec<&'static str>,
}

impl IdentityReport {
    pub fn verified_variant(&self, group: &str) -> Option<&'static str> {
        self.verified
            .iter()
            .copied()
            .find(|name| name.starts_with(group))
    }
}

fn random_poly(rng: &mut ChaCha8Rng, n: usize, deg: u16) -> Poly {
    let mut p = Poly::zero(n);
    let nterms = rng.gen_range(1..=4);
    for _ in 0..nterms {
        let mut zpow = vec![0u16; n];
        let mut wpow = vec![0u16; n];
        let mut total = 0;
        while total < deg {
            if rng.gen_bool(0.35) {
                break;
            }
            let k = rng.gen_range(0..2 * n);
            if k < n {
                zpow[k] += 1;
            } else {
                wpow[k - n] += 1;
            }
            total += 1;
        }
        let re = rng.gen_range(-3i64..=3);
        let im = rng.gen_range(-3i64..=3);
        p.insert(Mono { zpow, wpow }, cq(re, im));
    }
    p
}

fn random_polyform(rng: &mut ChaCha8Rng, n: usize, p: usize, q: usize, deg: u16) -> PolyForm {
    let mut out = PolyForm::zero(n);
    for &i in &crate::index::subsets(n, p) {
        for &j in &crate::index::subsets(n, q) {
            if rng.gen_bool(0.8) {
                out.insert(i, j, random_poly(rng, n, deg));
            }
        }
    }
    out
}

/// Runs the exact randomized check of the two contraction identities.
///
/// Each identity comes in two commonly written forms — one contracting ∂̄ζ
/// (resp. ∂̄v) against φ, one against ∂φ — and both relative signs on the
/// second-order term are tried. The report records which candidate holds
/// identically in every trial; the `*_statement`/`*_proof` labels name the
/// φ- and ∂φ-variants respectively.
pub fn verify_lemma_contraction(trials: usize, seed: u64, n: usize) -> IdentityReport {
    assert!((2..=4).contains(&n), "chart oracle is desk-scale: n in 2..=4");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let specs: Vec<(&'static str, &'static str)> = vec![
        ("a_statement", "∂̄(ζ⌟∂φ) = ∂̄ζ⌟φ − ζ⌟∂̄∂φ"),
        ("a_statement_flip", "∂̄(ζ⌟∂φ) = ∂̄ζ⌟φ + ζ⌟∂̄∂φ"),
        ("a_proof", "∂̄(ζ⌟∂φ) = ∂̄ζ⌟∂φ − ζ⌟∂̄∂φ"),
        ("a_proof_flip", "∂̄(ζ⌟∂φ) = ∂̄ζ⌟∂φ + ζ⌟∂̄∂φ"),
        ("b_statement", "∂̄(v⌟∂φ) = ∂̄v⌟φ + v⌟∂̄∂φ"),
        ("b_statement_flip", "∂̄(v⌟∂φ) = ∂̄v⌟φ − v⌟∂̄∂φ"),
        ("b_proof", "∂̄(v⌟∂φ) = ∂̄v⌟∂φ + v⌟∂̄∂φ"),
        ("b_proof_flip", "∂̄(v⌟∂φ) = ∂̄v⌟∂φ − v⌟∂̄∂φ"),
    ];
    let mut cands: Vec<IdentityCandidate> = specs
        .iter()
        .map(|&(name, formula)| IdentityCandidate { name, formula, passes: 0, fails: 0, first_failure: None })
        .collect();

    for _ in 0..trials {
        let p = rng.gen_range(1..n);
        let q = rng.gen_range(0..n.saturating_sub(1).max(1));
        let phi = random_polyform(&mut rng, n, p, q, 2);
        let zeta = ChartVector::field((0..n).map(|_| random_poly(&mut rng, n, 1)).collect());
        let v = ChartVector::diagonal((0..n).map(|_| random_poly(&mut rng, n, 1)).collect());

        let dphi = phi.del();
        let dbar_d_phi = dphi.delbar();

        // (a) pieces
        let lhs_a = zeta.contract(&dphi).delbar();
        let t_stmt_a = zeta.delbar().contract(&phi);
        let t_proof_a = zeta.delbar().contract(&dphi);
        let t_second_a = zeta.contract(&dbar_d_phi);

        // (b) pieces
        let lhs_b = v.contract(&dphi).delbar();
        let t_stmt_b = v.delbar().contract(&phi);
        let t_proof_b = v.delbar().contract(&dphi);
        let t_second_b = v.contract(&dbar_d_phi);

        let residuals = [
            lhs_a.sub(&t_stmt_a.sub(&t_second_a)),
            lhs_a.sub(&t_stmt_a.add(&t_second_a)),
            lhs_a.sub(&t_proof_a.sub(&t_second_a)),
            lhs_a.sub(&t_proof_a.add(&t_second_a)),
            lhs_b.sub(&t_stmt_b.add(&t_second_b)),
            lhs_b.sub(&t_stmt_b.sub(&t_second_b)),
            lhs_b.sub(&t_proof_b.add(&t_second_b)),
            lhs_b.sub(&t_proof_b.sub(&t_second_b)),
        ];

        for (cand, res) in cands.iter_mut().zip(residuals.iter()) {
            if res.is_zero() {
                cand.passes += 1;
            } else {
                cand.fails += 1;
                if cand.first_failure.is_none() {
                    cand.first_failure = Some(format!("{}", res));
                }
            }
        }
    }

    let verified = cands
        .iter()
        .filter(|c| c.fails == 0 && c.passes == trials)
        .map(|c| c.name)
        .collect();
    IdentityReport { n, trials, seed, candidates: cands, verified }
}

/// The operators exposed by the chart oracle.
pub enum ChartOp<'a> {
    Del,
    Delbar,
    ContractField(&'a ChartVector),
    ContractVv(&'a ChartVector),
}

/// Applies a chart operator; exact in all cases.
pub fn chart_apply(op: ChartOp<'_>, a: &PolyForm) -> PolyForm {
    match op {
        ChartOp::Del => a.del(),
        ChartOp::Delbar => a.delbar(),
        ChartOp::ContractField(z) => z.contract(a),
        ChartOp::ContractVv(v) => v.contract(a),
    }
}
