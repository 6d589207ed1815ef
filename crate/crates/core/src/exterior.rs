//! Exterior algebra Λ^ℓ(ℝ^k) with the orthonormal basis `e^I`.
//!
//! Indices are 0-based: a [`MultiIndex`] over `k` holds strictly increasing
//! entries in `0..k`. Signs are never stored, they are recomputed from the
//! sorted representation every time a basis element is moved.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Neg;

use itertools::Itertools;
use num_complex::Complex64;
use num_traits::Num;
use thiserror::Error;

use crate::rational::Q;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExteriorError {
    #[error("index {index} out of range for ambient dimension {k}")]
    IndexOutOfRange { index: usize, k: usize },
    #[error("multi-index {0:?} is not strictly increasing")]
    NotIncreasing(Vec<usize>),
    #[error("contraction of a degree-0 element")]
    DegreeZero,
    #[error("exterior vectors do not match: (k={0}, degree={1}) vs (k={2}, degree={3})")]
    Mismatch(usize, usize, usize, usize),
}

/// Coefficient field for [`ExtVector`].
pub trait Coefficient: Num + Clone + Neg<Output = Self> + fmt::Debug {
    fn conj(&self) -> Self;
}

impl Coefficient for Q {
    fn conj(&self) -> Self {
        self.clone()
    }
}

impl Coefficient for f64 {
    fn conj(&self) -> Self {
        *self
    }
}

impl Coefficient for Complex64 {
    fn conj(&self) -> Self {
        Complex64::conj(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn from_parity(n: usize) -> Sign {
        if n.is_multiple_of(2) {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn to_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn apply<C: Coefficient>(self, c: C) -> C {
        match self {
            Sign::Plus => c,
            Sign::Minus => -c,
        }
    }
}

impl std::ops::Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

/// Strictly increasing tuple `I = (i_1 < … < i_ℓ)` of indices in `0..k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex {
    k: usize,
    indices: Vec<usize>,
}

impl MultiIndex {
    pub fn new(k: usize, indices: &[usize]) -> Result<Self, ExteriorError> {
        if let Some(&bad) = indices.iter().find(|&&i| i >= k) {
            return Err(ExteriorError::IndexOutOfRange { index: bad, k });
        }
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(ExteriorError::NotIncreasing(indices.to_vec()));
        }
        Ok(MultiIndex { k, indices: indices.to_vec() })
    }

    /// The empty index spanning Λ^0.
    pub fn empty(k: usize) -> Self {
        MultiIndex { k, indices: Vec::new() }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn degree(&self) -> usize {
        self.indices.len()
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn contains(&self, j: usize) -> bool {
        self.indices.binary_search(&j).is_ok()
    }

    /// Number of entries of `I` smaller than `j`, written τ(j;I) in the
    /// sign rule `(−1)^τ e^j ∧ e^I = e^{I∪{j}}`.
    pub fn count_below(&self, j: usize) -> usize {
        self.indices.partition_point(|&i| i < j)
    }

    /// All degree-`degree` multi-indices over `k`, in lexicographic order.
    pub fn all(k: usize, degree: usize) -> Vec<MultiIndex> {
        (0..k).combinations(degree).map(|indices| MultiIndex { k, indices }).collect()
    }

    /// Position of this index within [`MultiIndex::all`] for its degree.
    pub fn rank(&self) -> usize {
        // combinatorial number system, lexicographic order
        let l = self.degree();
        let mut r = 0;
        let mut prev = 0;
        for (pos, &i) in self.indices.iter().enumerate() {
            for skipped in prev..i {
                r += binomial(self.k - skipped - 1, l - pos - 1);
            }
            prev = i + 1;
        }
        r
    }

    fn check(&self, j: usize) -> Result<(), ExteriorError> {
        if j >= self.k {
            Err(ExteriorError::IndexOutOfRange { index: j, k: self.k })
        } else {
            Ok(())
        }
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.indices.iter().join(","))
    }
}

pub fn binomial(n: usize, r: usize) -> usize {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    (0..r).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// `e^j ∧ e^I`: zero when `j ∈ I`, otherwise `(−1)^{τ(j;I)} e^{I∪{j}}`.
pub fn wedge_basis(j: usize, index: &MultiIndex) -> Result<Option<(Sign, MultiIndex)>, ExteriorError> {
    index.check(j)?;
    if index.contains(j) {
        return Ok(None);
    }
    let pos = index.count_below(j);
    let mut indices = index.indices.clone();
    indices.insert(pos, j);
    Ok(Some((Sign::from_parity(pos), MultiIndex { k: index.k, indices })))
}

/// `ι_j e^J`: zero when `j ∉ J`, otherwise `(−1)^{pos} e^{J∖{j}}` with `pos`
/// the 0-based position of `j` in `J`.
pub fn contract_basis(j: usize, index: &MultiIndex) -> Result<Option<(Sign, MultiIndex)>, ExteriorError> {
    index.check(j)?;
    if index.degree() == 0 {
        return Err(ExteriorError::DegreeZero);
    }
    let Ok(pos) = index.indices.binary_search(&j) else {
        return Ok(None);
    };
    let mut indices = index.indices.clone();
    indices.remove(pos);
    Ok(Some((Sign::from_parity(pos), MultiIndex { k: index.k, indices })))
}

/// Element of Λ^ℓ(ℝ^k) in canonical form: zero coefficients are absent.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtVector<C> {
    k: usize,
    degree: usize,
    coeffs: BTreeMap<MultiIndex, C>,
}

impl<C: Coefficient> ExtVector<C> {
    pub fn zero(k: usize, degree: usize) -> Self {
        ExtVector { k, degree, coeffs: BTreeMap::new() }
    }

    pub fn basis(index: MultiIndex) -> Self {
        let mut v = Self::zero(index.k, index.degree());
        v.coeffs.insert(index, C::one());
        v
    }

    pub fn from_index(k: usize, indices: &[usize]) -> Result<Self, ExteriorError> {
        Ok(Self::basis(MultiIndex::new(k, indices)?))
    }

    pub fn from_terms(k: usize, degree: usize, terms: impl IntoIterator<Item = (MultiIndex, C)>) -> Result<Self, ExteriorError> {
        let mut v = Self::zero(k, degree);
        for (index, c) in terms {
            if index.k != k || index.degree() != degree {
                return Err(ExteriorError::Mismatch(k, degree, index.k, index.degree()));
            }
            v.add_term(index, c);
        }
        Ok(v)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn get(&self, index: &MultiIndex) -> C {
        self.coeffs.get(index).cloned().unwrap_or_else(C::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &C)> {
        self.coeffs.iter()
    }

    fn add_term(&mut self, index: MultiIndex, c: C) {
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(index.clone()).or_insert_with(C::zero);
        *entry = entry.clone() + c;
        if entry.is_zero() {
            self.coeffs.remove(&index);
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, ExteriorError> {
        self.same_shape(other)?;
        let mut out = self.clone();
        for (i, c) in &other.coeffs {
            out.add_term(i.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, s: &C) -> Self {
        let mut out = Self::zero(self.k, self.degree);
        for (i, c) in &self.coeffs {
            out.add_term(i.clone(), c.clone() * s.clone());
        }
        out
    }

    /// `E_j ω = e^j ∧ ω`.
    pub fn wedge_e(&self, j: usize) -> Result<Self, ExteriorError> {
        if j >= self.k {
            return Err(ExteriorError::IndexOutOfRange { index: j, k: self.k });
        }
        let mut out = Self::zero(self.k, self.degree + 1);
        for (i, c) in &self.coeffs {
            if let Some((sign, target)) = wedge_basis(j, i)? {
                out.add_term(target, sign.apply(c.clone()));
            }
        }
        Ok(out)
    }

    /// `ι_j ω`.
    pub fn contract(&self, j: usize) -> Result<Self, ExteriorError> {
        if j >= self.k {
            return Err(ExteriorError::IndexOutOfRange { index: j, k: self.k });
        }
        if self.degree == 0 {
            return Err(ExteriorError::DegreeZero);
        }
        let mut out = Self::zero(self.k, self.degree - 1);
        for (i, c) in &self.coeffs {
            if let Some((sign, target)) = contract_basis(j, i)? {
                out.add_term(target, sign.apply(c.clone()));
            }
        }
        Ok(out)
    }

    /// `⟨ω, η⟩ = Σ_I ω_I · conj(η_I)`.
    pub fn inner_product(&self, other: &Self) -> Result<C, ExteriorError> {
        self.same_shape(other)?;
        Ok(self
            .coeffs
            .iter()
            .filter_map(|(i, a)| other.coeffs.get(i).map(|b| a.clone() * b.conj()))
            .fold(C::zero(), |acc, x| acc + x))
    }

    fn same_shape(&self, other: &Self) -> Result<(), ExteriorError> {
        if self.k != other.k || self.degree != other.degree {
            return Err(ExteriorError::Mismatch(self.k, self.degree, other.k, other.degree));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn mi(k: usize, i: &[usize]) -> MultiIndex {
        MultiIndex::new(k, i).unwrap()
    }

    /// Sign of the permutation sorting `seq`, by counting inversions.
    fn permutation_sign(seq: &[usize]) -> i64 {
        let inv = (0..seq.len())
            .flat_map(|a| (a + 1..seq.len()).map(move |b| (a, b)))
            .filter(|&(a, b)| seq[a] > seq[b])
            .count();
        if inv % 2 == 0 { 1 } else { -1 }
    }

    #[test]
    fn wedge_examples() {
        // e^3 ∧ e^{12} = +e^{123}
        let (s, i) = wedge_basis(2, &mi(3, &[0, 1])).unwrap().unwrap();
        assert_eq!((s, i), (Sign::Plus, mi(3, &[0, 1, 2])));
        assert!(wedge_basis(0, &mi(3, &[0, 1])).unwrap().is_none());
        // e^2 ∧ e^{13} = −e^{123}
        let (s, i) = wedge_basis(1, &mi(3, &[0, 2])).unwrap().unwrap();
        assert_eq!((s, i), (Sign::Minus, mi(3, &[0, 1, 2])));
        assert_eq!(
            wedge_basis(3, &mi(3, &[0])),
            Err(ExteriorError::IndexOutOfRange { index: 3, k: 3 })
        );
    }

    #[test]
    fn wedge_sign_matches_permutation_sign() {
        for k in 1..=5 {
            for l in 0..k {
                for i in MultiIndex::all(k, l) {
                    for j in 0..k {
                        if let Some((s, target)) = wedge_basis(j, &i).unwrap() {
                            let mut seq = vec![j];
                            seq.extend(i.indices());
                            assert_eq!(s.to_i64(), permutation_sign(&seq));
                            assert_eq!(target.degree(), l + 1);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn contract_examples() {
        assert_eq!(contract_basis(0, &mi(3, &[0, 1])).unwrap(), Some((Sign::Plus, mi(3, &[1]))));
        assert_eq!(contract_basis(1, &mi(3, &[0, 1])).unwrap(), Some((Sign::Minus, mi(3, &[0]))));
        assert_eq!(contract_basis(2, &mi(3, &[0, 1])).unwrap(), None);
        assert_eq!(contract_basis(0, &MultiIndex::empty(3)), Err(ExteriorError::DegreeZero));
        assert!(contract_basis(5, &mi(3, &[0])).is_err());
    }

    #[test]
    fn inner_product_examples() {
        let a: ExtVector<Q> = ExtVector::from_index(3, &[0, 1]).unwrap();
        let b: ExtVector<Q> = ExtVector::from_index(3, &[0, 2]).unwrap();
        assert_eq!(a.inner_product(&a).unwrap(), q(1));
        assert_eq!(a.inner_product(&b).unwrap(), q(0));
        let v = ExtVector::from_terms(3, 1, [(mi(3, &[0]), q(2)), (mi(3, &[1]), q(3))]).unwrap();
        let e2: ExtVector<Q> = ExtVector::from_index(3, &[1]).unwrap();
        assert_eq!(v.inner_product(&e2).unwrap(), q(3));
        assert!(v.inner_product(&a).is_err());
    }

    #[test]
    fn canonical_form_drops_zeros() {
        let a: ExtVector<Q> = ExtVector::from_index(2, &[0]).unwrap();
        let sum = a.add(&a.scale(&q(-1))).unwrap();
        assert!(sum.is_zero());
    }

    #[test]
    fn rank_matches_enumeration_order() {
        for k in 0..=6 {
            for l in 0..=k {
                for (pos, i) in MultiIndex::all(k, l).iter().enumerate() {
                    assert_eq!(i.rank(), pos);
                }
                assert_eq!(MultiIndex::all(k, l).len(), binomial(k, l));
            }
        }
    }

    #[test]
    fn completeness_identity() {
        for k in 1..=5 {
            for l in 0..=k {
                for i in MultiIndex::all(k, l) {
                    let e: ExtVector<Q> = ExtVector::basis(i.clone());
                    let mut total = ExtVector::zero(k, l);
                    for j in 0..k {
                        let a = e.wedge_e(j).unwrap();
                        if a.degree() > 0 {
                            total = total.add(&a.contract(j).unwrap()).unwrap();
                        }
                        if l > 0 {
                            total = total.add(&e.contract(j).unwrap().wedge_e(j).unwrap()).unwrap();
                        }
                    }
                    // each j contributes ω once, so the sum is k·ω
                    assert_eq!(total, e.scale(&q(k as i64)));
                }
            }
        }
    }
}
