//! Invariant forms with bigraded coefficient vectors.
//!
//! A `Form` on an n-dimensional invariant model is a finite sum of pure-type
//! components; the (p,q)-component is a coefficient vector over the monomial
//! basis φ^I ∧ φ̄^J with (I,J) ordered I-major, lexicographic in each factor.

use std::collections::BTreeMap;

use nalgebra::DVector;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::index::{binomial, deletion_sign, elements, merge_sign, subset_rank, subsets, Mask};

pub type C = Complex64;

/// Dimension of the coefficient vector of Λ^{p,q}.
pub fn space_dim(n: usize, p: usize, q: usize) -> usize {
    binomial(n, p) * binomial(n, q)
}

/// Flat index of the monomial φ^I ∧ φ̄^J inside the (p,q) basis.
pub fn monomial_index(n: usize, imask: Mask, jmask: Mask) -> usize {
    let q = jmask.count_ones() as usize;
    subset_rank(n, imask) * binomial(n, q) + subset_rank(n, jmask)
}

/// The (I,J) masks of the k-th basis monomial of Λ^{p,q}.
pub fn monomial_masks(n: usize, p: usize, q: usize, k: usize) -> (Mask, Mask) {
    let nq = binomial(n, q);
    let (bi, bj) = (k / nq, k % nq);
    (subsets(n, p)[bi], subsets(n, q)[bj])
}

#[derive(Clone, Debug, PartialEq)]
pub struct Form {
    n: usize,
    comps: BTreeMap<(usize, usize), DVector<C>>,
}

impl Form {
    pub fn zero(n: usize) -> Self {
        Form { n, comps: BTreeMap::new() }
    }

    /// c · φ^I ∧ φ̄^J.
    pub fn monomial(n: usize, imask: Mask, jmask: Mask, c: C) -> Self {
        let (p, q) = (imask.count_ones() as usize, jmask.count_ones() as usize);
        let mut v = DVector::zeros(space_dim(n, p, q));
        v[monomial_index(n, imask, jmask)] = c;
        let mut comps = BTreeMap::new();
        comps.insert((p, q), v);
        Form { n, comps }
    }

    pub fn from_component(n: usize, p: usize, q: usize, v: DVector<C>) -> Self {
        assert_eq!(v.len(), space_dim(n, p, q), "coefficient vector length");
        let mut comps = BTreeMap::new();
        comps.insert((p, q), v);
        Form { n, comps }
    }

    pub fn one(n: usize) -> Self {
        Form::monomial(n, 0, 0, C::new(1.0, 0.0))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Bidegrees carrying a (possibly zero) stored component.
    pub fn bidegrees(&self) -> Vec<(usize, usize)> {
        self.comps.keys().copied().collect()
    }

    pub fn component(&self, p: usize, q: usize) -> DVector<C> {
        self.comps
            .get(&(p, q))
            .cloned()
            .unwrap_or_else(|| DVector::zeros(space_dim(self.n, p, q)))
    }

    pub fn set_component(&mut self, p: usize, q: usize, v: DVector<C>) {
        assert_eq!(v.len(), space_dim(self.n, p, q));
        self.comps.insert((p, q), v);
    }

    /// Drops components with sup-norm below `tol`.
    pub fn pruned(mut self, tol: f64) -> Self {
        self.comps.retain(|_, v| v.iter().any(|c| c.norm() > tol));
        self
    }

    pub fn is_pure(&self) -> Option<(usize, usize)> {
        let nz: Vec<_> = self
            .comps
            .iter()
            .filter(|(_, v)| v.iter().any(|c| c.norm() > 0.0))
            .map(|(&k, _)| k)
            .collect();
        if nz.len() == 1 {
            Some(nz[0])
        } else {
            None
        }
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.comps.values().all(|v| v.iter().all(|c| c.norm() <= tol))
    }

    pub fn norm_inf(&self) -> f64 {
        self.comps
            .values()
            .flat_map(|v| v.iter().map(|c| c.norm()))
            .fold(0.0, f64::max)
    }

    /// Euclidean coefficient norm (not the metric L² norm).
    pub fn coeff_norm(&self) -> f64 {
        self.comps
            .values()
            .map(|v| v.iter().map(|c| c.norm_sqr()).sum::<f64>())
            .sum::<f64>()
            .sqrt()
    }

    pub fn scale(&self, c: C) -> Self {
        let comps = self.comps.iter().map(|(&k, v)| (k, v * c)).collect();
        Form { n: self.n, comps }
    }

    pub fn add(&self, other: &Form) -> Self {
        assert_eq!(self.n, other.n);
        let mut comps = self.comps.clone();
        for (&k, v) in &other.comps {
            comps
                .entry(k)
                .and_modify(|w| *w += v)
                .or_insert_with(|| v.clone());
        }
        Form { n: self.n, comps }
    }

    pub fn sub(&self, other: &Form) -> Self {
        self.add(&other.scale(C::new(-1.0, 0.0)))
    }

    /// Complex conjugate: maps (p,q) to (q,p) with the reordering sign (−1)^{pq}.
    pub fn conj(&self) -> Self {
        let n = self.n;
        let mut out = Form::zero(n);
        for (&(p, q), v) in &self.comps {
            let sign = if (p * q) % 2 == 0 { 1.0 } else { -1.0 };
            let mut w = DVector::zeros(space_dim(n, q, p));
            for (k, c) in v.iter().enumerate() {
                if c.norm() == 0.0 {
                    continue;
                }
                let (im, jm) = monomial_masks(n, p, q, k);
                w[monomial_index(n, jm, im)] += c.conj() * C::new(sign, 0.0);
            }
            let entry = out
                .comps
                .entry((q, p))
                .or_insert_with(|| DVector::zeros(space_dim(n, q, p)));
            *entry += w;
        }
        out
    }

    /// ‖ᾱ − α‖∞, zero iff the form is real.
    pub fn reality_defect(&self) -> f64 {
        self.conj().sub(self).norm_inf()
    }

    /// Graded-commutative wedge product.
    pub fn wedge(&self, other: &Form) -> Result<Form> {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = Form::zero(n);
        for (&(p1, q1), v1) in &self.comps {
            for (&(p2, q2), v2) in &other.comps {
                let (p, q) = (p1 + p2, q1 + q2);
                if p + q > 2 * n {
                    let live1 = v1.iter().any(|c| c.norm() > 0.0);
                    let live2 = v2.iter().any(|c| c.norm() > 0.0);
                    if live1 && live2 {
                        return Err(Error::DegreeOverflow { degree: p + q, top: 2 * n });
                    }
                    continue;
                }
                if p > n || q > n {
                    continue; // vanishes in the bigraded algebra
                }
                let mut w = DVector::zeros(space_dim(n, p, q));
                for (k1, c1) in v1.iter().enumerate() {
                    if c1.norm() == 0.0 {
                        continue;
                    }
                    let (i1, j1) = monomial_masks(n, p1, q1, k1);
                    for (k2, c2) in v2.iter().enumerate() {
                        if c2.norm() == 0.0 {
                            continue;
                        }
                        let (i2, j2) = monomial_masks(n, p2, q2, k2);
                        let Some((im, si)) = merge_sign(i1, i2) else { continue };
                        let Some((jm, sj)) = merge_sign(j1, j2) else { continue };
                        // move φ̄^{J1} (q1 factors) past φ^{I2} (p2 factors)
                        let cross = if (q1 * p2) % 2 == 0 { 1 } else { -1 };
                        let s = (si * sj * cross) as f64;
                        w[monomial_index(n, im, jm)] += c1 * c2 * C::new(s, 0.0);
                    }
                }
                let entry = out
                    .comps
                    .entry((p, q))
                    .or_insert_with(|| DVector::zeros(space_dim(n, p, q)));
                *entry += w;
            }
        }
        Ok(out)
    }

    /// Wedge power a^k.
    pub fn wedge_pow(&self, k: usize) -> Result<Form> {
        let mut acc = Form::one(self.n);
        for _ in 0..k {
            acc = acc.wedge(self)?;
        }
        Ok(acc)
    }

    /// Interior product ξ_j ⌟ · with the j-th (1,0)-frame vector, extended by
    /// the signed-deletion rule on monomials.
    pub fn contract_frame(&self, j: usize) -> Form {
        let n = self.n;
        let mut out = Form::zero(n);
        for (&(p, q), v) in &self.comps {
            if p == 0 {
                continue;
            }
            let mut w = DVector::zeros(space_dim(n, p - 1, q));
            for (k, c) in v.iter().enumerate() {
                if c.norm() == 0.0 {
                    continue;
                }
                let (im, jm) = monomial_masks(n, p, q, k);
                if im & (1 << j) == 0 {
                    continue;
                }
                let s = deletion_sign(im, j) as f64;
                w[monomial_index(n, im & !(1 << j), jm)] += c * C::new(s, 0.0);
            }
            let entry = out
                .comps
                .entry((p - 1, q))
                .or_insert_with(|| DVector::zeros(space_dim(n, p - 1, q)));
            *entry += w;
        }
        out
    }

    /// Contraction with a constant (1,0) vector field ζ = Σ_j c_j ξ_j.
    pub fn contract_vector(&self, coeffs: &[C]) -> Form {
        let mut out = Form::zero(self.n);
        for (j, c) in coeffs.iter().enumerate() {
            if c.norm() == 0.0 {
                continue;
            }
            out = out.add(&self.contract_frame(j).scale(*c));
        }
        out
    }

    /// Left wedge with φ̄^{l̄-mask}: φ̄^L ∧ self.
    pub fn wedge_antiholomorphic_left(&self, lmask: Mask) -> Form {
        let n = self.n;
        let r = lmask.count_ones() as usize;
        let mut out = Form::zero(n);
        for (&(p, q), v) in &self.comps {
            if q + r > n {
                continue;
            }
            let mut w = DVector::zeros(space_dim(n, p, q + r));
            for (k, c) in v.iter().enumerate() {
                if c.norm() == 0.0 {
                    continue;
                }
                let (im, jm) = monomial_masks(n, p, q, k);
                let Some((jm2, sj)) = merge_sign(lmask, jm) else { continue };
                // φ̄^L must cross φ^I
                let cross = if (r * p) % 2 == 0 { 1 } else { -1 };
                let s = (sj * cross) as f64;
                w[monomial_index(n, im, jm2)] += c * C::new(s, 0.0);
            }
            let entry = out
                .comps
                .entry((p, q + r))
                .or_insert_with(|| DVector::zeros(space_dim(n, p, q + r)));
            *entry += w;
        }
        out
    }

    /// Coefficient of the top monomial φ^{1..n} ∧ φ̄^{1..n}.
    pub fn top_coefficient(&self) -> C {
        let n = self.n;
        let full: Mask = (1 << n) - 1;
        match self.comps.get(&(n, n)) {
            Some(v) => v[monomial_index(n, full, full)],
            None => C::new(0.0, 0.0),
        }
    }

    /// Total-degree decomposition: the degree-k part.
    pub fn degree_part(&self, k: usize) -> Form {
        let comps = self
            .comps
            .iter()
            .filter(|(&(p, q), _)| p + q == k)
            .map(|(&k2, v)| (k2, v.clone()))
            .collect();
        Form { n: self.n, comps }
    }

    /// Pretty monomial expansion, mainly for witnesses in reports.
    pub fn describe(&self, tol: f64) -> String {
        let mut terms = Vec::new();
        for (&(p, q), v) in &self.comps {
            for (k, c) in v.iter().enumerate() {
                if c.norm() <= tol {
                    continue;
                }
                let (im, jm) = monomial_masks(self.n, p, q, k);
                let hol: Vec<String> = elements(im).iter().map(|i| format!("φ{}", i + 1)).collect();
                let ahol: Vec<String> = elements(jm).iter().map(|j| format!("φ̄{}", j + 1)).collect();
                let mono = hol.into_iter().chain(ahol).collect::<Vec<_>>().join("∧");
                let mono = if mono.is_empty() { "1".to_string() } else { mono };
                terms.push(format!("({:.6}{:+.6}i)·{}", c.re, c.im, mono));
            }
        }
        if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join(" + ")
        }
    }
}

/// Element of Λ^{0,q} ⊗ T^{1,0}: coefficient matrix indexed by the (0,q)
/// multi-index J (rows) and the (1,0)-frame index j (columns).
#[derive(Clone, Debug, PartialEq)]
pub struct VectorValuedForm {
    n: usize,
    q: usize,
    pub coeffs: nalgebra::DMatrix<C>,
}

impl VectorValuedForm {
    pub fn zero(n: usize, q: usize) -> Self {
        VectorValuedForm {
            n,
            q,
            coeffs: nalgebra::DMatrix::zeros(binomial(n, q), n),
        }
    }

    pub fn new(n: usize, q: usize, coeffs: nalgebra::DMatrix<C>) -> Self {
        assert_eq!(coeffs.nrows(), binomial(n, q));
        assert_eq!(coeffs.ncols(), n);
        VectorValuedForm { n, q, coeffs }
    }

    /// A constant vector field as the q = 0 case.
    pub fn vector_field(n: usize, coeffs: &[C]) -> Self {
        let m = nalgebra::DMatrix::from_fn(1, n, |_, j| coeffs[j]);
        VectorValuedForm { n, q: 0, coeffs: m }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> usize {
        self.q
    }

    /// v ⌟ a = Σ_{J,j} v_{J,j} · φ̄^J ∧ (ξ_j ⌟ a).
    pub fn contract(&self, a: &Form) -> Form {
        assert_eq!(self.n, a.n());
        let jsets = subsets(self.n, self.q);
        let mut out = Form::zero(self.n);
        for (row, &jm) in jsets.iter().enumerate() {
            for j in 0..self.n {
                let c = self.coeffs[(row, j)];
                if c.norm() == 0.0 {
                    continue;
                }
                let t = a.contract_frame(j).wedge_antiholomorphic_left(jm).scale(c);
                out = out.add(&t);
            }
        }
        out
    }

    /// Flattened coefficient vector (row-major over (J, j)).
    pub fn to_vec(&self) -> DVector<C> {
        let (r, c) = (self.coeffs.nrows(), self.coeffs.ncols());
        DVector::from_fn(r * c, |k, _| self.coeffs[(k / c, k % c)])
    }

    pub fn from_vec(n: usize, q: usize, v: &DVector<C>) -> Self {
        let rows = binomial(n, q);
        assert_eq!(v.len(), rows * n);
        let m = nalgebra::DMatrix::from_fn(rows, n, |r, c| v[r * n + c]);
        VectorValuedForm { n, q, coeffs: m }
    }

    pub fn scale(&self, c: C) -> Self {
        VectorValuedForm {
            n: self.n,
            q: self.q,
            coeffs: &self.coeffs * c,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.n, self.q), (other.n, other.q));
        VectorValuedForm {
            n: self.n,
            q: self.q,
            coeffs: &self.coeffs + &other.coeffs,
        }
    }

    pub fn norm_inf(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one() -> C {
        C::new(1.0, 0.0)
    }

    #[test]
    fn wedge_basis_products() {
        // dz¹ ∧ dz̄¹ on the torus n=2 → coefficient 1 on (I,J) = ({1},{1})
        let a = Form::monomial(2, 0b01, 0, one());
        let b = Form::monomial(2, 0, 0b01, one());
        let w = a.wedge(&b).unwrap();
        assert_eq!(w, Form::monomial(2, 0b01, 0b01, one()));
    }

    #[test]
    fn wedge_graded_commutativity() {
        // odd·odd anticommute, squares of odd forms vanish
        let a = Form::monomial(3, 0b001, 0, one()).add(&Form::monomial(3, 0, 0b010, one()));
        let b = Form::monomial(3, 0b010, 0b100, one()).scale(C::new(0.0, 2.0));
        let ab = a.wedge(&b).unwrap();
        let ba = b.wedge(&a).unwrap();
        // deg a = 1, deg b = 2 → ab = ba
        assert!(ab.sub(&ba).norm_inf() < 1e-15);
        let aa = a.wedge(&a).unwrap();
        assert!(aa.norm_inf() < 1e-15);
    }

    #[test]
    fn contraction_signed_deletion() {
        // ∂/∂z₁ ⌟ (dz¹∧dz²) = dz², ∂/∂z₂ ⌟ (dz¹∧dz²) = −dz¹
        let a = Form::monomial(2, 0b11, 0, one());
        assert_eq!(a.contract_frame(0), Form::monomial(2, 0b10, 0, one()));
        assert_eq!(a.contract_frame(1), Form::monomial(2, 0b01, 0, -one()));
        // contraction of a 0-form is zero
        assert!(Form::one(2).contract_frame(0).is_zero(0.0));
    }

    #[test]
    fn wedge_overflow_is_an_error() {
        let top = Form::monomial(2, 0b11, 0b11, one());
        let line = Form::monomial(2, 0b01, 0, one());
        match top.wedge(&line) {
            Err(crate::error::Error::DegreeOverflow { degree: 5, top: 4 }) => {}
            other => panic!("expected DegreeOverflow, got {other:?}"),
        }
    }

    #[test]
    fn conjugation_involution() {
        let a = Form::monomial(3, 0b011, 0b100, C::new(1.5, -2.0));
        let back = a.conj().conj();
        assert!(back.sub(&a).norm_inf() < 1e-15);
        // (2,1)-form: conj sign (−1)^{2·1} = +1, indices swap
        let c = a.conj();
        let v = c.component(1, 2);
        assert_eq!(v[monomial_index(3, 0b100, 0b011)], C::new(1.5, 2.0));
    }

    #[test]
    fn contraction_exhaustive_antiderivation_n3() {
        // ξ_j ⌟ (α ∧ β) = (ξ_j⌟α) ∧ β + (−1)^{deg α} α ∧ (ξ_j⌟β) on all basis monomials, n = 3
        let n = 3;
        for p1 in 0..=n {
            for q1 in 0..=n {
                for p2 in 0..=n {
                    for q2 in 0..=(n - q1).min(n) {
                        if p1 + p2 > n {
                            continue;
                        }
                        for k1 in 0..space_dim(n, p1, q1) {
                            let (a_i, a_j) = monomial_masks(n, p1, q1, k1);
                            let a = Form::monomial(n, a_i, a_j, one());
                            for k2 in 0..space_dim(n, p2, q2) {
                                let (b_i, b_j) = monomial_masks(n, p2, q2, k2);
                                let b = Form::monomial(n, b_i, b_j, one());
                                let ab = a.wedge(&b).unwrap();
                                for j in 0..n {
                                    let lhs = ab.contract_frame(j);
                                    let sign = if (p1 + q1) % 2 == 0 { 1.0 } else { -1.0 };
                                    let rhs = a
                                        .contract_frame(j)
                                        .wedge(&b)
                                        .unwrap()
                                        .add(&a.wedge(&b.contract_frame(j)).unwrap().scale(C::new(sign, 0.0)));
                                    assert!(lhs.sub(&rhs).norm_inf() < 1e-14);
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn signed_deletion_expansion_exhaustive() {
        // ξ_j ⌟ (φ^k ∧ φ^I ∧ φ̄^J) = δ_{jk} φ^I∧φ̄^J − Σ_l δ_{j,i_l} (−1)^{l−1} φ^k∧φ^{I∖i_l}∧φ̄^J,
        // on every basis monomial with n ≤ 3
        use crate::index::{elements, subsets};
        for n in 2..=3usize {
            for k in 0..n {
                for p in 0..n {
                    for q in 0..=n {
                        for &imask in &subsets(n, p) {
                            if imask & (1 << k) != 0 {
                                continue;
                            }
                            for &jmask in &subsets(n, q) {
                                let lead = Form::monomial(n, 1 << k, 0, one());
                                let tail = Form::monomial(n, imask, jmask, one());
                                let total = lead.wedge(&tail).unwrap();
                                for j in 0..n {
                                    let lhs = total.contract_frame(j);
                                    let mut rhs = Form::zero(n);
                                    if j == k {
                                        rhs = rhs.add(&tail);
                                    }
                                    for (l, &il) in elements(imask).iter().enumerate() {
                                        if j == il {
                                            let sign = if l % 2 == 0 { -1.0 } else { 1.0 };
                                            let rest = Form::monomial(n, imask & !(1 << il), jmask, one());
                                            let term = lead.wedge(&rest).unwrap().scale(C::new(sign, 0.0));
                                            rhs = rhs.add(&term);
                                        }
                                    }
                                    assert!(lhs.sub(&rhs).norm_inf() < 1e-15);
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn vector_valued_contraction_bidegree() {
        // (0,1)-valued v against a (p,q)-form lands in (p−1, q+1)
        let n = 2;
        let mut m = nalgebra::DMatrix::zeros(2, 2);
        m[(0, 1)] = one(); // φ̄¹ ⊗ ξ₂
        let v = VectorValuedForm::new(n, 1, m);
        let a = Form::monomial(n, 0b11, 0, one()); // φ¹∧φ²
        let got = v.contract(&a);
        // ξ₂⌟(φ¹∧φ²) = −φ¹, then φ̄¹∧(−φ¹) = +φ¹∧φ̄¹
        assert_eq!(got, Form::monomial(n, 0b01, 0b01, one()));
    }
}
