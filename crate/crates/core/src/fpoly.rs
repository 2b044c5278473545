//! Polynomials over a field context, kept reduced modulo `x^Q − x`.
//!
//! Exponents `e ≥ Q` fold to `1 + ((e − 1) mod (Q − 1))`, never to 0, so the
//! reduced form induces exactly the same map as the original polynomial
//! (including at 0). In reduced form, two polynomials are equal iff they agree
//! at every point of the field.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{Field, FieldCtx, FieldElem};

/// Dense value table of a map `F_Q → F_Q`, indexed by element encoding.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ValueTable(Vec<u32>);

impl ValueTable {
    pub fn new(values: Vec<u32>) -> Self {
        ValueTable(values)
    }

    pub fn from_fn(field: &FieldCtx, mut f: impl FnMut(FieldElem) -> FieldElem) -> Self {
        ValueTable(field.elements().map(|x| f(x).code()).collect())
    }

    pub fn identity(order: u32) -> Self {
        ValueTable((0..order).collect())
    }

    /// Checks length and range against `field`.
    pub fn validate(&self, field: &FieldCtx) -> Result<()> {
        let q = field.order();
        if self.0.len() != q as usize {
            return Err(Error::Length {
                expected: q as usize,
                got: self.0.len(),
            });
        }
        if let Some(&bad) = self.0.iter().find(|&&v| v >= q) {
            return Err(Error::InvalidElement {
                code: bad as u64,
                order: q,
            });
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn get(&self, x: u32) -> u32 {
        self.0[x as usize]
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<u32> {
        self.0
    }

    /// Sorted image set.
    pub fn image(&self) -> Vec<u32> {
        let mut seen = vec![false; self.0.len()];
        for &v in &self.0 {
            seen[v as usize] = true;
        }
        seen.iter()
            .enumerate()
            .filter_map(|(i, &s)| s.then_some(i as u32))
            .collect()
    }

    pub fn is_bijection(&self) -> bool {
        let mut seen = vec![false; self.0.len()];
        for &v in &self.0 {
            if std::mem::replace(&mut seen[v as usize], true) {
                return false;
            }
        }
        true
    }

    /// `self ∘ inner`, i.e. `x ↦ self(inner(x))`.
    pub fn after(&self, inner: &ValueTable) -> ValueTable {
        ValueTable(inner.0.iter().map(|&y| self.0[y as usize]).collect())
    }

    pub fn inverse(&self) -> Option<ValueTable> {
        let mut inv = vec![u32::MAX; self.0.len()];
        for (x, &y) in self.0.iter().enumerate() {
            if inv[y as usize] != u32::MAX {
                return None;
            }
            inv[y as usize] = x as u32;
        }
        Some(ValueTable(inv))
    }
}

#[derive(Clone, Debug)]
pub struct Poly {
    field: Field,
    coeffs: Vec<FieldElem>,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        *self.field == *other.field && self.coeffs == other.coeffs
    }
}

impl Eq for Poly {}

/// Folds an exponent into `[0, Q)` preserving the induced map.
pub fn fold_exponent(e: u64, order: u32) -> usize {
    let q = order as u64;
    if e < q {
        e as usize
    } else {
        (1 + (e - 1) % (q - 1)) as usize
    }
}

impl Poly {
    /// Builds a polynomial from coefficients (degree order), folding high exponents.
    pub fn from_coeffs(field: Field, coeffs: Vec<FieldElem>) -> Self {
        let q = field.order() as usize;
        let mut out = if coeffs.len() <= q {
            coeffs
        } else {
            let mut folded = vec![field.zero(); q];
            for (e, c) in coeffs.into_iter().enumerate() {
                let k = fold_exponent(e as u64, field.order());
                folded[k] = field.add(folded[k], c);
            }
            folded
        };
        while out.last().is_some_and(|c| c.is_zero()) {
            out.pop();
        }
        Poly { field, coeffs: out }
    }

    /// Coefficients given as element encodings, constant term first.
    pub fn from_codes(field: Field, codes: &[u64]) -> Result<Self> {
        let coeffs = codes
            .iter()
            .map(|&c| field.elem(c))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_coeffs(field, coeffs))
    }

    pub fn zero(field: Field) -> Self {
        Poly {
            field,
            coeffs: Vec::new(),
        }
    }

    pub fn constant(field: Field, c: FieldElem) -> Self {
        Self::from_coeffs(field, vec![c])
    }

    /// The identity polynomial `x`.
    pub fn x(field: Field) -> Self {
        let one = field.one();
        Self::monomial(field, one, 1)
    }

    /// `c · x^e`, folded.
    pub fn monomial(field: Field, c: FieldElem, e: u64) -> Self {
        let k = fold_exponent(e, field.order());
        let mut coeffs = vec![field.zero(); k + 1];
        coeffs[k] = c;
        Self::from_coeffs(field, coeffs)
    }

    /// Random reduced polynomial of degree at most `max_degree`.
    pub fn random<R: Rng + ?Sized>(field: Field, max_degree: usize, rng: &mut R) -> Self {
        let q = field.order();
        let coeffs = (0..=max_degree)
            .map(|_| field.element(rng.gen_range(0..q)))
            .collect();
        Self::from_coeffs(field, coeffs)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    pub fn codes(&self) -> Vec<u32> {
        self.coeffs.iter().map(|c| c.code()).collect()
    }

    /// Coefficient of `x^k` (zero past the degree).
    pub fn coeff(&self, k: usize) -> FieldElem {
        self.coeffs.get(k).copied().unwrap_or(self.field.zero())
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.coeffs.len() == 2 && self.coeffs[0].is_zero() && self.coeffs[1].code() == 1
    }

    fn same_field(&self, other: &Poly) {
        assert!(
            *self.field == *other.field,
            "polynomials over different fields"
        );
    }

    /// Horner evaluation.
    pub fn eval(&self, x: FieldElem) -> FieldElem {
        let f = &self.field;
        self.coeffs
            .iter()
            .rev()
            .fold(f.zero(), |acc, &c| f.add(f.mul(acc, x), c))
    }

    pub fn tabulate(&self) -> ValueTable {
        ValueTable::from_fn(&self.field, |x| self.eval(x))
    }

    pub fn add(&self, other: &Poly) -> Poly {
        self.same_field(other);
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|k| f.add(self.coeff(k), other.coeff(k)))
            .collect();
        Self::from_coeffs(f.clone(), coeffs)
    }

    pub fn neg(&self) -> Poly {
        let f = &self.field;
        Self::from_coeffs(f.clone(), self.coeffs.iter().map(|&c| f.neg(c)).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: FieldElem) -> Poly {
        let f = &self.field;
        Self::from_coeffs(f.clone(), self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    /// Product reduced modulo `x^Q − x`.
    pub fn mul(&self, other: &Poly) -> Poly {
        self.same_field(other);
        let f = &self.field;
        if self.is_zero() || other.is_zero() {
            return Self::zero(f.clone());
        }
        let q = f.order();
        let len = (self.coeffs.len() + other.coeffs.len() - 1).min(q as usize);
        let mut out = vec![f.zero(); len];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let k = fold_exponent((i + j) as u64, q);
                out[k] = f.add(out[k], f.mul(a, b));
            }
        }
        Self::from_coeffs(f.clone(), out)
    }

    pub fn pow(&self, mut e: u64) -> Poly {
        let f = &self.field;
        let mut result = Self::constant(f.clone(), f.one());
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// `self ∘ inner` by Horner's scheme in the reduced ring.
    pub fn compose(&self, inner: &Poly) -> Poly {
        self.same_field(inner);
        let f = &self.field;
        let mut acc = Self::zero(f.clone());
        for &c in self.coeffs.iter().rev() {
            acc = acc.mul(inner).add(&Self::constant(f.clone(), c));
        }
        acc
    }

    /// The unique reduced polynomial with the given value table.
    ///
    /// Lagrange interpolation over all of `F_Q` collapses to
    /// `a_0 = f(0)`, `a_k = −Σ_{c≠0} f(c) c^(Q−1−k)` for `1 ≤ k ≤ Q−2` and
    /// `a_{Q−1} = −Σ_c f(c)`.
    pub fn interpolate(field: Field, table: &ValueTable) -> Result<Poly> {
        table.validate(&field)?;
        let f = &field;
        let q = f.order() as usize;
        if q == 2 {
            // Q − 2 = 0, handle directly: a_0 = f(0), a_1 = f(0) + f(1)
            let f0 = f.element(table.get(0));
            let f1 = f.element(table.get(1));
            return Ok(Self::from_coeffs(field.clone(), vec![f0, f.sub(f1, f0)]));
        }
        let mut acc = vec![f.zero(); q];
        acc[0] = f.element(table.get(0));
        let mut total = f.zero();
        for c in f.elements() {
            let y = f.element(table.get(c.code()));
            total = f.add(total, y);
            if c.is_zero() || y.is_zero() {
                continue;
            }
            // k runs from Q−2 down to 1 while the power of c runs upward
            let mut pw = f.mul(y, c);
            for slot in acc[1..=q - 2].iter_mut().rev() {
                *slot = f.sub(*slot, pw);
                pw = f.mul(pw, c);
            }
        }
        acc[q - 1] = f.neg(total);
        Ok(Self::from_coeffs(field, acc))
    }
}

/// Checked evaluation.
pub fn eval(f: &Poly, x: FieldElem) -> Result<FieldElem> {
    f.field.check(x)?;
    Ok(f.eval(x))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Mul,
}

/// Checked ring operation.
pub fn poly_arith(kind: PolyOp, f: &Poly, g: &Poly) -> Result<Poly> {
    if *f.field != *g.field {
        return Err(Error::ContextMismatch);
    }
    Ok(match kind {
        PolyOp::Add => f.add(g),
        PolyOp::Mul => f.mul(g),
    })
}

/// Checked composition `outer ∘ inner`.
pub fn compose(outer: &Poly, inner: &Poly) -> Result<Poly> {
    if *outer.field != *inner.field {
        return Err(Error::ContextMismatch);
    }
    Ok(outer.compose(inner))
}

impl fmt::Display for Poly {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(out, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(out, " + ")?;
            }
            first = false;
            match (k, c.code()) {
                (0, v) => write!(out, "{v}")?,
                (1, 1) => write!(out, "x")?,
                (1, v) => write!(out, "{v}*x")?,
                (k, 1) => write!(out, "x^{k}")?,
                (k, v) => write!(out, "{v}*x^{k}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::make_field;

    fn poly(field: &Field, codes: &[u64]) -> Poly {
        Poly::from_codes(field.clone(), codes).unwrap()
    }

    #[test]
    fn eval_examples_f4() {
        let f = make_field(2, 2, None).unwrap();
        let (z, w) = (f.element(2), f.element(3));
        assert_eq!(poly(&f, &[2, 0, 1]).eval(w), f.zero());
        assert_eq!(Poly::x(f.clone()).eval(z), z);
        let c = Poly::constant(f.clone(), z);
        assert!(f.elements().all(|x| c.eval(x) == z));
    }

    #[test]
    fn reduction_examples_f4() {
        let f = make_field(2, 2, None).unwrap();
        let x2 = poly(&f, &[0, 0, 1]);
        let x3 = poly(&f, &[0, 0, 0, 1]);
        let x = Poly::x(f.clone());
        assert_eq!(x2.mul(&x2), x);
        assert!(x.add(&x).is_zero());
        assert_eq!(x3.mul(&x3), x3);
        // exponent 4 folds to 1, never 0
        assert_eq!(fold_exponent(4, 4), 1);
        assert_eq!(fold_exponent(3, 4), 3);
        assert_eq!(fold_exponent(7, 4), 1);
    }

    #[test]
    fn compose_examples_f4() {
        let f = make_field(2, 2, None).unwrap();
        let x2 = poly(&f, &[0, 0, 1]);
        let x = Poly::x(f.clone());
        assert_eq!(x2.compose(&x2), x);
        let g = poly(&f, &[3, 2, 1]);
        assert_eq!(g.compose(&x), g);
        let tr = poly(&f, &[0, 1, 1]);
        assert_eq!(tr.compose(&x2), tr);
    }

    #[test]
    fn interpolate_examples_f4() {
        let f = make_field(2, 2, None).unwrap();
        let id = ValueTable::identity(4);
        assert_eq!(Poly::interpolate(f.clone(), &id).unwrap(), Poly::x(f.clone()));
        let sq = poly(&f, &[0, 0, 1]);
        assert_eq!(Poly::interpolate(f.clone(), &sq.tabulate()).unwrap(), sq);
        let constant = ValueTable::new(vec![2; 4]);
        assert_eq!(
            Poly::interpolate(f.clone(), &constant).unwrap(),
            Poly::constant(f.clone(), f.element(2))
        );
        assert!(matches!(
            Poly::interpolate(f.clone(), &ValueTable::new(vec![0; 3])),
            Err(Error::Length { .. })
        ));
    }

    #[test]
    fn prime_field_of_two() {
        let f = make_field(2, 1, None).unwrap();
        for t in [[0, 0], [0, 1], [1, 0], [1, 1]] {
            let table = ValueTable::new(t.to_vec());
            let p = Poly::interpolate(f.clone(), &table).unwrap();
            assert_eq!(p.tabulate(), table);
        }
    }

    #[test]
    fn checked_ops_reject_mixed_fields() {
        let f = make_field(2, 2, None).unwrap();
        let g = make_field(3, 1, None).unwrap();
        let a = Poly::x(f.clone());
        let b = Poly::x(g.clone());
        assert_eq!(poly_arith(PolyOp::Add, &a, &b), Err(Error::ContextMismatch));
        assert_eq!(compose(&a, &b), Err(Error::ContextMismatch));
        assert_eq!(eval(&a, g.one()), Err(Error::ContextMismatch));
    }

    #[test]
    fn display() {
        let f = make_field(3, 1, None).unwrap();
        assert_eq!(poly(&f, &[1, 0, 2]).to_string(), "2*x^2 + 1");
        assert_eq!(Poly::zero(f).to_string(), "0");
    }
}
