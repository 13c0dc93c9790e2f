//! Sparse graded elements of an exterior algebra, stored by basis blade.
//!
//! A blade is a bitmask: bit `i` set means the basis element with 0-based index `i`
//! occurs. The JSON encoding uses 1-based strictly increasing index lists.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub type Blade = u32;

/// Number of basis vectors preceding index `i` inside `blade`.
#[inline]
pub fn count_below(blade: Blade, i: usize) -> u32 {
    (blade & ((1u32 << i) - 1)).count_ones()
}

/// Sign of `e_a ∧ e_b` relative to the sorted blade `a | b`; zero when they overlap.
#[inline]
pub fn wedge_sign(a: Blade, b: Blade) -> i32 {
    if a & b != 0 {
        return 0;
    }
    let mut swaps = 0u32;
    let mut rest = b;
    while rest != 0 {
        let i = rest.trailing_zeros();
        swaps += (a >> (i + 1)).count_ones();
        rest &= rest - 1;
    }
    if swaps.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

#[inline]
pub fn grade(blade: Blade) -> u32 {
    blade.count_ones()
}

/// Indices (0-based) of a blade in increasing order.
pub fn blade_indices(blade: Blade) -> Vec<usize> {
    (0..32).filter(|i| blade & (1 << i) != 0).collect()
}

pub fn blade_from_indices(idx: &[usize]) -> Blade {
    idx.iter().fold(0, |b, &i| b | (1 << i))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Multivector<S: Scalar> {
    dim: usize,
    terms: BTreeMap<Blade, S>,
}

impl<S: Scalar> Multivector<S> {
    pub fn zero(dim: usize) -> Self {
        assert!(dim <= 24, "ambient dimension {dim} too large");
        Multivector { dim, terms: BTreeMap::new() }
    }

    pub fn scalar(dim: usize, c: S) -> Self {
        let mut m = Self::zero(dim);
        m.add_term(0, c);
        m
    }

    pub fn one(dim: usize) -> Self {
        Self::scalar(dim, S::one())
    }

    /// Basis vector with 0-based index `i`.
    pub fn basis(dim: usize, i: usize) -> Self {
        assert!(i < dim);
        let mut m = Self::zero(dim);
        m.add_term(1 << i, S::one());
        m
    }

    pub fn blade(dim: usize, blade: Blade, c: S) -> Self {
        let mut m = Self::zero(dim);
        m.add_term(blade, c);
        m
    }

    /// Degree-one element with the given coefficients.
    pub fn vector(coeffs: &[S]) -> Self {
        let mut m = Self::zero(coeffs.len());
        for (i, c) in coeffs.iter().enumerate() {
            m.add_term(1 << i, c.clone());
        }
        m
    }

    /// Top-degree basis element `e_1 ∧ … ∧ e_dim`.
    pub fn volume(dim: usize) -> Self {
        Self::blade(dim, Self::top_blade_of(dim), S::one())
    }

    fn top_blade_of(dim: usize) -> Blade {
        if dim == 0 {
            0
        } else {
            (1u32 << dim) - 1
        }
    }

    pub fn top_blade(&self) -> Blade {
        Self::top_blade_of(self.dim)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (Blade, &S)> {
        self.terms.iter().map(|(b, c)| (*b, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, blade: Blade) -> S {
        self.terms.get(&blade).cloned().unwrap_or_else(S::zero)
    }

    pub fn top_coefficient(&self) -> S {
        self.coeff(self.top_blade())
    }

    pub fn add_term(&mut self, blade: Blade, c: S) {
        debug_assert!(self.dim == 32 || blade >> self.dim == 0, "blade outside ambient dimension");
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&blade) {
            Some(v) => {
                let s = v.clone() + c;
                if s.is_zero() {
                    self.terms.remove(&blade);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(blade, c);
            }
        }
    }

    pub fn max_grade(&self) -> Option<u32> {
        self.terms.keys().map(|b| grade(*b)).max()
    }

    pub fn grade_part(&self, k: u32) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(b, _)| grade(**b) == k)
            .map(|(b, c)| (*b, c.clone()))
            .collect();
        Multivector { dim: self.dim, terms }
    }

    /// `Some(0)` if every term is even, `Some(1)` if every term is odd.
    pub fn parity(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(|b| grade(*b) % 2);
        let first = it.next()?;
        it.all(|p| p == first).then_some(first)
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = Self::zero(self.dim);
        for (b, v) in &self.terms {
            out.add_term(*b, v.clone() * c.clone());
        }
        out
    }

    pub fn map_terms(&self, f: impl Fn(Blade, &S) -> S) -> Self {
        let mut out = Self::zero(self.dim);
        for (b, v) in &self.terms {
            out.add_term(*b, f(*b, v));
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let mut out = self.clone();
        for (b, v) in &other.terms {
            out.add_term(*b, v.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let mut out = self.clone();
        for (b, v) in &other.terms {
            out.add_term(*b, -v.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.map_terms(|_, v| -v.clone())
    }

    pub fn wedge(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let mut out = Self::zero(self.dim);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                match wedge_sign(*a, *b) {
                    0 => {}
                    1 => out.add_term(a | b, x.clone() * y.clone()),
                    _ => out.add_term(a | b, -(x.clone() * y.clone())),
                }
            }
        }
        out
    }

    /// Wedge exponential `Σ x^k / k!`; terminates because `x` has no scalar part.
    pub fn exp_wedge(&self) -> Self {
        assert!(self.coeff(0).is_zero(), "exp_wedge needs a nilpotent argument");
        let mut out = Self::one(self.dim);
        let mut power = Self::one(self.dim);
        let mut k = 1i64;
        loop {
            power = power.wedge(self).scale(&S::from_ratio(1, k));
            if power.is_zero() {
                break;
            }
            out = out.add(&power);
            k += 1;
        }
        out
    }

    /// Interior product with the dual basis vector of index `i`.
    pub fn contract(&self, i: usize) -> Self {
        let mut out = Self::zero(self.dim);
        for (b, v) in &self.terms {
            if b & (1 << i) != 0 {
                let c = if count_below(*b, i).is_multiple_of(2) { v.clone() } else { -v.clone() };
                out.add_term(b & !(1 << i), c);
            }
        }
        out
    }

    /// Contraction with a degree-one element of the dual algebra.
    pub fn contract_vector(&self, coeffs: &[S]) -> Self {
        assert_eq!(coeffs.len(), self.dim);
        let mut out = Self::zero(self.dim);
        for (i, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                out = out.add(&self.contract(i).scale(c));
            }
        }
        out
    }

    /// The canonical anti-automorphism of the exterior algebra: `(−1)^{k(k−1)/2}` on degree `k`.
    pub fn reversal(&self) -> Self {
        self.map_terms(|b, v| {
            let k = grade(b);
            if (k * k.saturating_sub(1) / 2).is_multiple_of(2) {
                v.clone()
            } else {
                -v.clone()
            }
        })
    }

    /// Degree automorphism: `(−1)^k` on degree `k`.
    pub fn grade_involution(&self) -> Self {
        self.map_terms(|b, v| if grade(b).is_multiple_of(2) { v.clone() } else { -v.clone() })
    }

    /// Two-form `Σ_{i<j} m_ij e_i ∧ e_j` from an antisymmetric matrix given row-major.
    pub fn two_form(dim: usize, m: &[S]) -> Self {
        assert_eq!(m.len(), dim * dim);
        let mut out = Self::zero(dim);
        for i in 0..dim {
            for j in (i + 1)..dim {
                out.add_term((1 << i) | (1 << j), m[i * dim + j].clone());
            }
        }
        out
    }

    pub fn to_f64(&self) -> Multivector<f64> {
        let mut out = Multivector::zero(self.dim);
        for (b, v) in &self.terms {
            out.add_term(*b, v.to_f64());
        }
        out
    }

    pub fn to_json(&self) -> Vec<TermJson> {
        self.terms
            .iter()
            .map(|(b, c)| TermJson {
                idx: blade_indices(*b).into_iter().map(|i| i + 1).collect(),
                c: c.to_decimal_string(),
            })
            .collect()
    }

    pub fn from_json(dim: usize, terms: &[TermJson]) -> Result<Self> {
        let mut out = Self::zero(dim);
        for t in terms {
            if t.idx.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Parse(format!("index set {:?} not strictly increasing", t.idx)));
            }
            if t.idx.iter().any(|&i| i == 0 || i > dim) {
                return Err(Error::Parse(format!("index set {:?} outside 1..={dim}", t.idx)));
            }
            let blade = blade_from_indices(&t.idx.iter().map(|i| i - 1).collect::<Vec<_>>());
            out.add_term(blade, S::parse_scalar(&t.c)?);
        }
        Ok(out)
    }
}

impl Multivector<f64> {
    pub fn norm(&self) -> f64 {
        self.terms.values().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.terms.values().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.terms.iter().map(|(b, v)| v * other.coeff(*b)).sum()
    }

    /// Drop coefficients with `|c| <= tol`.
    pub fn pruned(&self, tol: f64) -> Self {
        let terms = self.terms.iter().filter(|(_, v)| v.abs() > tol).map(|(b, v)| (*b, *v)).collect();
        Multivector { dim: self.dim, terms }
    }

    /// Dense coefficient vector indexed by blade.
    pub fn to_dense(&self) -> Vec<f64> {
        let mut v = vec![0.0; 1 << self.dim];
        for (b, c) in &self.terms {
            v[*b as usize] = *c;
        }
        v
    }

    pub fn from_dense(dim: usize, v: &[f64]) -> Self {
        assert_eq!(v.len(), 1 << dim);
        let mut out = Self::zero(dim);
        for (b, c) in v.iter().enumerate() {
            out.add_term(b as Blade, *c);
        }
        out
    }

    /// Algebra map induced by the linear map `m` (target_dim × source_dim) on degree one:
    /// `e_i ↦ Σ_j m[(j, i)] e'_j`.
    pub fn induced(&self, m: &DMatrix<f64>) -> Self {
        assert_eq!(m.ncols(), self.dim);
        let target = m.nrows();
        let images: Vec<Multivector<f64>> = (0..self.dim)
            .map(|i| Multivector::vector(&m.column(i).iter().copied().collect::<Vec<_>>()))
            .collect();
        let mut out = Multivector::zero(target);
        for (b, c) in &self.terms {
            let mut acc = Multivector::one(target);
            for i in blade_indices(*b) {
                acc = acc.wedge(&images[i]);
                if acc.is_zero() {
                    break;
                }
            }
            out = out.add(&acc.scale(c));
        }
        out
    }
}

/// One term of the JSON encoding.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermJson {
    pub idx: Vec<usize>,
    pub c: String,
}
