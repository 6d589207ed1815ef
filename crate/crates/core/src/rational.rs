//! Exact rational scalars and dense matrices over ℚ.
//!
//! Every dimension reported by the Lie algebra and Chevalley–Eilenberg code
//! comes out of the row reduction in this module, so nothing here uses a
//! floating point tolerance.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Exact rational scalar.
pub type Q = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RationalParseError {
    #[error("empty rational literal")]
    Empty,
    #[error("invalid rational literal `{0}`")]
    Invalid(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p/q"`, `"p"` or a decimal literal such as `"-0.25"` exactly.
pub fn parse_q(s: &str) -> Result<Q, RationalParseError> {
    let s = s.trim();
    if s.is_empty() {
        return Err(RationalParseError::Empty);
    }
    let bad = || RationalParseError::Invalid(s.to_string());
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(RationalParseError::ZeroDenominator(s.to_string()));
        }
        return Ok(Q::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let neg = int.starts_with('-');
        let int_digits = int.trim_start_matches(['-', '+']);
        if !frac.chars().all(|c| c.is_ascii_digit())
            || !int_digits.chars().all(|c| c.is_ascii_digit())
            || (int_digits.is_empty() && frac.is_empty())
        {
            return Err(bad());
        }
        let digits = format!("{int_digits}{frac}");
        let num: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().map_err(|_| bad())? };
        let den = num_traits::pow(BigInt::from(10), frac.len());
        let value = Q::new(num, den);
        return Ok(if neg { -value } else { value });
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Q::from_integer(n))
}

/// Canonical `p/q` (or `p`) rendering used in every JSON report.
pub fn format_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// The exact dyadic rational equal to a finite `f64`.
pub fn from_f64(x: f64) -> Option<Q> {
    Q::from_float(x)
}

/// Dense row-major matrix over ℚ.
#[derive(Clone, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

impl fmt::Debug for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "QMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(format_q).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl Index<(usize, usize)> for QMatrix {
    type Output = Q;
    fn index(&self, (r, c): (usize, usize)) -> &Q {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for QMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Q {
        &mut self.data[r * self.cols + c]
    }
}

/// Result of Gauss–Jordan elimination.
#[derive(Debug, Clone)]
pub struct Rref {
    pub matrix: QMatrix,
    pub pivots: Vec<usize>,
}

impl Rref {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix { rows, cols, data: vec![Q::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Q::one();
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Q>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        QMatrix { rows: rows.len(), cols, data: rows.iter().flatten().cloned().collect() }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let rows: Vec<Vec<Q>> = rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect();
        Self::from_rows(&rows)
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vec<Q>]) -> Self {
        let rows = cols.first().map_or(0, Vec::len);
        let mut m = Self::zeros(rows, cols.len());
        for (c, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows, "ragged columns");
            for (r, x) in col.iter().enumerate() {
                m[(r, c)] = x.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[Q] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Q> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matrix product");
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for m in 0..self.cols {
                let a = &self[(r, m)];
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = &other[(m, c)];
                    if !b.is_zero() {
                        out[(r, c)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in matrix-vector product");
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(Q::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    pub fn add(&self, other: &QMatrix) -> QMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &QMatrix) -> QMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, s: &Q) -> QMatrix {
        QMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * s).collect() }
    }

    pub fn pow(&self, e: u32) -> QMatrix {
        assert_eq!(self.rows, self.cols);
        (0..e).fold(Self::identity(self.rows), |acc, _| acc.mul(self))
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        QMatrix { rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut pr = 0;
        for c in 0..m.cols {
            if pr == m.rows {
                break;
            }
            let Some(p) = (pr..m.rows).find(|&r| !m[(r, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(pr, p);
            let inv = m[(pr, c)].recip();
            for cc in c..m.cols {
                let v = &m[(pr, cc)] * &inv;
                m[(pr, cc)] = v;
            }
            for r in 0..m.rows {
                if r == pr || m[(r, c)].is_zero() {
                    continue;
                }
                let f = m[(r, c)].clone();
                for cc in c..m.cols {
                    if m[(pr, cc)].is_zero() {
                        continue;
                    }
                    let v = &m[(r, cc)] - &f * &m[(pr, cc)];
                    m[(r, cc)] = v;
                }
            }
            pivots.push(c);
            pr += 1;
        }
        Rref { matrix: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank()
    }

    /// Basis of the right kernel `{x : A x = 0}`.
    pub fn kernel(&self) -> Vec<Vec<Q>> {
        let Rref { matrix, pivots } = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Q::zero(); self.cols];
                v[f] = Q::one();
                for (r, &p) in pivots.iter().enumerate() {
                    v[p] = -matrix[(r, f)].clone();
                }
                v
            })
            .collect()
    }

    pub fn inverse(&self) -> Option<QMatrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug[(r, c)] = self[(r, c)].clone();
            }
            aug[(r, n + r)] = Q::one();
        }
        let Rref { matrix, pivots } = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Self::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                inv[(r, c)] = matrix[(r, n + c)].clone();
            }
        }
        Some(inv)
    }

    /// Solves `A x = b`, returning one solution if the system is consistent.
    pub fn solve(&self, b: &[Q]) -> Option<Vec<Q>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Self::zeros(self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug[(r, c)] = self[(r, c)].clone();
            }
            aug[(r, self.cols)] = b[r].clone();
        }
        let Rref { matrix, pivots } = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![Q::zero(); self.cols];
        for (r, &p) in pivots.iter().enumerate() {
            x[p] = matrix[(r, self.cols)].clone();
        }
        Some(x)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn trace(&self) -> Q {
        (0..self.rows.min(self.cols)).fold(Q::zero(), |acc, i| acc + &self[(i, i)])
    }

    /// Characteristic polynomial `det(xI − A)`, coefficients from degree 0
    /// upwards (monic), via Faddeev–LeVerrier.
    pub fn charpoly(&self) -> Vec<Q> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut coeffs = vec![Q::zero(); n + 1];
        coeffs[n] = Q::one();
        let ident = Self::identity(n);
        let mut m = Self::zeros(n, n);
        for k in 1..=n {
            let shifted = ident.scale(&coeffs[n - k + 1]);
            let mk = self.mul(&m).sub(&shifted.scale(&-Q::one()));
            let c = -(self.mul(&mk).trace()) / q(k as i64);
            coeffs[n - k] = c;
            m = mk;
        }
        coeffs
    }
}

/// True when every entry is zero.
pub fn is_zero_vec(v: &[Q]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// Rational roots of a polynomial given by ascending coefficients, with
/// multiplicity, plus the leftover factor that has no rational roots.
pub fn rational_roots(coeffs: &[Q]) -> (Vec<(Q, usize)>, Vec<Q>) {
    let mut poly: Vec<Q> = coeffs.to_vec();
    while poly.len() > 1 && poly.last().is_some_and(Zero::is_zero) {
        poly.pop();
    }
    let mut roots: Vec<(Q, usize)> = Vec::new();
    let push = |r: Q, roots: &mut Vec<(Q, usize)>| match roots.iter_mut().find(|(x, _)| *x == r) {
        Some((_, m)) => *m += 1,
        None => roots.push((r, 1)),
    };
    // strip zero roots first
    while poly.len() > 1 && poly[0].is_zero() {
        poly.remove(0);
        push(Q::zero(), &mut roots);
    }
    loop {
        if poly.len() <= 1 {
            break;
        }
        let ints = clear_denominators(&poly);
        let lead = ints.last().unwrap().abs();
        let constant = ints[0].abs();
        let Some(cands) = candidate_roots(&constant, &lead) else { break };
        let found = cands.into_iter().find(|r| eval_poly(&poly, r).is_zero());
        match found {
            Some(r) => {
                poly = deflate(&poly, &r);
                push(r, &mut roots);
            }
            None => break,
        }
    }
    (roots, poly)
}

fn eval_poly(poly: &[Q], x: &Q) -> Q {
    poly.iter().rev().fold(Q::zero(), |acc, c| acc * x + c)
}

fn deflate(poly: &[Q], r: &Q) -> Vec<Q> {
    // synthetic division by (x − r)
    let n = poly.len() - 1;
    let mut out = vec![Q::zero(); n];
    let mut carry = Q::zero();
    for i in (1..=n).rev() {
        carry = &poly[i] + carry * r;
        out[i - 1] = carry.clone();
    }
    out
}

fn clear_denominators(poly: &[Q]) -> Vec<BigInt> {
    let lcm = poly.iter().fold(BigInt::one(), |acc, c| num_integer::Integer::lcm(&acc, c.denom()));
    poly.iter().map(|c| (c * Q::from_integer(lcm.clone())).to_integer()).collect()
}

const MAX_TRIAL_DIVISOR: u64 = 1_000_000;

fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.to_u64()?;
    if n == 0 {
        return Some(vec![]);
    }
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if d > MAX_TRIAL_DIVISOR {
            return None;
        }
        if n % d == 0 {
            out.push(BigInt::from(d));
            if d != n / d {
                out.push(BigInt::from(n / d));
            }
        }
        d += 1;
    }
    Some(out)
}

/// ±p/q with p | constant and q | lead (rational root theorem). `None` when
/// the coefficients are too large to enumerate divisors.
fn candidate_roots(constant: &BigInt, lead: &BigInt) -> Option<Vec<Q>> {
    let ps = divisors(constant)?;
    let qs = divisors(lead)?;
    let mut out = Vec::new();
    for p in &ps {
        for d in &qs {
            let r = Q::new(p.clone(), d.clone());
            if !out.contains(&r) {
                out.push(r.clone());
                out.push(-r);
            }
        }
    }
    Some(out)
}
