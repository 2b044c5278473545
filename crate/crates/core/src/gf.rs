//! Exact arithmetic in GF(p^m).
//!
//! A field is described by `(p, m, modulus)`; elements are encoded as the
//! integer `Σ d_i p^i` of their coordinate digits in the polynomial basis
//! `1, z, …, z^(m-1)` where `z` is a root of the modulus. That encoding is the
//! only external representation used anywhere in the crate.
//!
//! Multiplication goes through exp/log tables built from the smallest
//! primitive element, so every context is built once and then shared behind
//! an [`Arc`]. Subfields are never constructed separately: [`SubfieldView`]
//! treats `F_q ⊆ F_{q^n}` as the Frobenius-fixed set of the big field.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Default cap on field cardinality for exhaustive operations.
pub const DEFAULT_MAX_ORDER: u64 = 65536;

/// Largest bound a configuration may raise the cap to; keeps tables indexable by `u32`.
pub const HARD_MAX_ORDER: u64 = 1 << 24;

pub type Field = Arc<FieldCtx>;

/// An element of a particular field. `code` is the canonical integer encoding,
/// `tag` identifies the owning field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElem {
    code: u32,
    tag: u32,
}

impl FieldElem {
    pub fn code(self) -> u32 {
        self.code
    }

    pub fn is_zero(self) -> bool {
        self.code == 0
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.code)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithKind {
    Add,
    Sub,
    Mul,
    Div,
}

pub struct FieldCtx {
    p: u32,
    m: u32,
    /// Monic modulus, constant term first, length `m + 1`.
    modulus: Vec<u32>,
    order: u32,
    tag: u32,
    generator: u32,
    /// `exp[i] = g^i` for `0 <= i < 2(Q-1)`.
    exp: Vec<u32>,
    /// `log[x]` for nonzero `x`; `log[0]` unused.
    log: Vec<u32>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("p", &self.p)
            .field("m", &self.m)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.m == other.m && self.modulus == other.modulus
    }
}

impl Eq for FieldCtx {}

/// Builds GF(p^m) with the default cardinality bound.
pub fn make_field(p: u32, m: u32, modulus: Option<&[u32]>) -> Result<Field> {
    FieldCtx::with_bound(p, m, modulus, DEFAULT_MAX_ORDER)
}

impl FieldCtx {
    pub fn new(p: u32, m: u32, modulus: Option<&[u32]>) -> Result<Field> {
        Self::with_bound(p, m, modulus, DEFAULT_MAX_ORDER)
    }

    /// Builds GF(p^m). Without an explicit modulus the monic irreducible whose
    /// non-leading coefficients have the smallest encoding is chosen.
    pub fn with_bound(p: u32, m: u32, modulus: Option<&[u32]>, bound: u64) -> Result<Field> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        if m == 0 {
            return Err(Error::ZeroDegree);
        }
        let bound = bound.min(HARD_MAX_ORDER);
        let order = (p as u64).checked_pow(m).unwrap_or(u64::MAX);
        if order > bound {
            return Err(Error::OverBound { order, bound });
        }
        let modulus = match modulus {
            Some(given) => {
                if given.len() != m as usize + 1 || given[m as usize] != 1 {
                    return Err(Error::ModulusShape {
                        expected: m,
                        got: given.len(),
                    });
                }
                if let Some(&c) = given.iter().find(|&&c| c >= p) {
                    return Err(Error::ModulusCoefficient(c));
                }
                if !zp::is_irreducible(given, p) {
                    return Err(Error::ReducibleModulus { p });
                }
                given.to_vec()
            }
            None => canonical_modulus(p, m),
        };
        let order = order as u32;
        let tag = fnv_tag(p, m, &modulus);
        let mut ctx = FieldCtx {
            p,
            m,
            modulus,
            order,
            tag,
            generator: 0,
            exp: Vec::new(),
            log: Vec::new(),
        };
        ctx.generator = (1..order)
            .find(|&c| ctx.slow_order(c) == order - 1)
            .expect("multiplicative group of a finite field is cyclic");
        ctx.build_tables();
        Ok(Arc::new(ctx))
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// Cardinality `p^m`.
    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn zero(&self) -> FieldElem {
        self.wrap(0)
    }

    pub fn one(&self) -> FieldElem {
        self.wrap(1)
    }

    #[inline]
    fn wrap(&self, code: u32) -> FieldElem {
        FieldElem {
            code,
            tag: self.tag,
        }
    }

    pub fn elem(&self, code: u64) -> Result<FieldElem> {
        if code >= self.order as u64 {
            return Err(Error::InvalidElement {
                code,
                order: self.order,
            });
        }
        Ok(self.wrap(code as u32))
    }

    /// Like [`FieldCtx::elem`] but panics on an out-of-range code.
    pub fn element(&self, code: u32) -> FieldElem {
        assert!(
            code < self.order,
            "code {code} out of range for GF({}^{})",
            self.p,
            self.m
        );
        self.wrap(code)
    }

    /// The prime-field element `k mod p`.
    pub fn from_int(&self, k: i64) -> FieldElem {
        self.wrap(k.rem_euclid(self.p as i64) as u32)
    }

    /// All elements in encoding order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElem> + '_ {
        (0..self.order).map(move |c| self.wrap(c))
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = FieldElem> + '_ {
        (1..self.order).map(move |c| self.wrap(c))
    }

    pub fn owns(&self, x: FieldElem) -> bool {
        x.tag == self.tag && x.code < self.order
    }

    pub fn check(&self, x: FieldElem) -> Result<()> {
        if self.owns(x) {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    /// Coordinate digits of `x`, lowest first.
    pub fn digits(&self, x: FieldElem) -> Vec<u32> {
        digits_of(x.code, self.p, self.m)
    }

    #[inline]
    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        debug_assert!(a.tag == self.tag && b.tag == self.tag);
        self.wrap(self.add_codes(a.code, b.code))
    }

    #[inline]
    fn add_codes(&self, a: u32, b: u32) -> u32 {
        let p = self.p;
        if p == 2 {
            return a ^ b;
        }
        if self.m == 1 {
            let s = a + b;
            return if s >= p { s - p } else { s };
        }
        let (mut a, mut b) = (a, b);
        let (mut out, mut place) = (0, 1);
        while a > 0 || b > 0 {
            let mut d = a % p + b % p;
            if d >= p {
                d -= p;
            }
            out += d * place;
            place *= p;
            a /= p;
            b /= p;
        }
        out
    }

    #[inline]
    pub fn neg(&self, a: FieldElem) -> FieldElem {
        let p = self.p;
        if p == 2 {
            return a;
        }
        let mut x = a.code;
        let (mut out, mut place) = (0, 1);
        while x > 0 {
            let d = x % p;
            out += ((p - d) % p) * place;
            place *= p;
            x /= p;
        }
        self.wrap(out)
    }

    #[inline]
    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        debug_assert!(a.tag == self.tag && b.tag == self.tag);
        if a.code == 0 || b.code == 0 {
            return self.zero();
        }
        let i = self.log[a.code as usize] + self.log[b.code as usize];
        self.wrap(self.exp[i as usize])
    }

    pub fn inv(&self, a: FieldElem) -> Option<FieldElem> {
        if a.code == 0 {
            return None;
        }
        let n = self.order - 1;
        let l = self.log[a.code as usize];
        Some(self.wrap(self.exp[((n - l) % n) as usize]))
    }

    pub fn div(&self, a: FieldElem, b: FieldElem) -> Result<FieldElem> {
        let inv = self.inv(b).ok_or(Error::DivisionByZero)?;
        Ok(self.mul(a, inv))
    }

    /// `a^e` with the convention `0^0 = 1`.
    pub fn pow(&self, a: FieldElem, e: u64) -> FieldElem {
        if e == 0 {
            return self.one();
        }
        if a.code == 0 {
            return self.zero();
        }
        let n = (self.order - 1) as u64;
        let l = self.log[a.code as usize] as u64;
        self.wrap(self.exp[((l * (e % n)) % n) as usize])
    }

    /// Checked binary operation; rejects foreign elements and division by zero.
    pub fn arith(&self, kind: ArithKind, a: FieldElem, b: FieldElem) -> Result<FieldElem> {
        self.check(a)?;
        self.check(b)?;
        Ok(match kind {
            ArithKind::Add => self.add(a, b),
            ArithKind::Sub => self.sub(a, b),
            ArithKind::Mul => self.mul(a, b),
            ArithKind::Div => self.div(a, b)?,
        })
    }

    /// Multiplicative order by repeated multiplication; `None` for zero.
    pub fn multiplicative_order(&self, a: FieldElem) -> Option<u32> {
        if a.code == 0 {
            return None;
        }
        let mut k = 1;
        let mut acc = a;
        while acc.code != 1 {
            acc = self.mul(acc, a);
            k += 1;
        }
        Some(k)
    }

    /// The element of smallest encoding generating the multiplicative group.
    pub fn primitive_element(&self) -> FieldElem {
        self.wrap(self.generator)
    }

    /// The class of `z` (encoding `p`), or `1` in a prime field.
    pub fn generator_root(&self) -> FieldElem {
        if self.m == 1 {
            self.one()
        } else {
            self.wrap(self.p)
        }
    }

    fn slow_order(&self, c: u32) -> u32 {
        let mut k = 1;
        let mut acc = c;
        while acc != 1 {
            acc = self.slow_mul(acc, c);
            k += 1;
            if k > self.order {
                return 0;
            }
        }
        k
    }

    /// Schoolbook multiplication modulo the modulus, used to bootstrap the tables.
    fn slow_mul(&self, a: u32, b: u32) -> u32 {
        let (p, m) = (self.p as u64, self.m as usize);
        let da = digits_of(a, self.p, self.m);
        let db = digits_of(b, self.p, self.m);
        let mut prod = vec![0u64; 2 * m];
        for (i, &x) in da.iter().enumerate() {
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        for deg in (m..2 * m).rev() {
            let c = prod[deg];
            if c == 0 {
                continue;
            }
            prod[deg] = 0;
            for i in 0..m {
                let sub = c * self.modulus[i] as u64 % p;
                prod[deg - m + i] = (prod[deg - m + i] + p - sub) % p;
            }
        }
        prod[..m]
            .iter()
            .rev()
            .fold(0u64, |acc, &d| acc * p + d) as u32
    }

    fn build_tables(&mut self) {
        let n = (self.order - 1) as usize;
        let mut exp = vec![0u32; 2 * n.max(1)];
        let mut log = vec![0u32; self.order as usize];
        let mut x = 1u32;
        for (i, slot) in exp.iter_mut().take(n).enumerate() {
            *slot = x;
            log[x as usize] = i as u32;
            x = self.slow_mul(x, self.generator);
        }
        for i in n..exp.len() {
            exp[i] = exp[i - n];
        }
        self.exp = exp;
        self.log = log;
    }
}

fn digits_of(mut code: u32, p: u32, m: u32) -> Vec<u32> {
    (0..m)
        .map(|_| {
            let d = code % p;
            code /= p;
            d
        })
        .collect()
}

fn fnv_tag(p: u32, m: u32, modulus: &[u32]) -> u32 {
    let mut h: u32 = 0x811c_9dc5;
    for w in [p, m].iter().chain(modulus) {
        for b in w.to_le_bytes() {
            h ^= b as u32;
            h = h.wrapping_mul(0x0100_0193);
        }
    }
    h
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `q = p^k` into `(p, k)`.
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut k = 0;
    let mut r = q;
    while r.is_multiple_of(p) {
        r /= p;
        k += 1;
    }
    (r == 1).then_some((p as u32, k))
}

fn canonical_modulus(p: u32, m: u32) -> Vec<u32> {
    let count = (p as u64).pow(m);
    (0..count)
        .map(|enc| {
            let mut coeffs = digits_of(enc as u32, p, m);
            coeffs.push(1);
            coeffs
        })
        .find(|c| zp::is_irreducible(c, p))
        .expect("an irreducible polynomial exists in every degree")
}

/// Dense polynomials over the prime field, only what the modulus checks need.
mod zp {
    fn trim(mut v: Vec<u32>) -> Vec<u32> {
        while v.len() > 1 && *v.last().unwrap() == 0 {
            v.pop();
        }
        v
    }

    fn inv_mod(a: u32, p: u32) -> u32 {
        let (mut r, mut base, mut e) = (1u64, a as u64, (p - 2) as u64);
        while e > 0 {
            if e & 1 == 1 {
                r = r * base % p as u64;
            }
            base = base * base % p as u64;
            e >>= 1;
        }
        r as u32
    }

    /// Remainder of `a` divided by `b` (b nonzero), coefficients constant-first.
    pub(super) fn rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let b = trim(b.to_vec());
        let db = b.len() - 1;
        let lead_inv = inv_mod(b[db], p) as u64;
        let mut r: Vec<u64> = a.iter().map(|&c| c as u64).collect();
        let p64 = p as u64;
        while r.len() > db {
            let top = r.len() - 1;
            let c = r[top] * lead_inv % p64;
            if c != 0 {
                let shift = top - db;
                for (i, &bc) in b.iter().enumerate() {
                    r[shift + i] = (r[shift + i] + p64 - c * bc as u64 % p64) % p64;
                }
            }
            r.pop();
        }
        trim(r.into_iter().map(|c| c as u32).collect())
    }

    /// No monic factor of degree `1..=deg/2`, by exhaustive scan.
    pub(super) fn is_irreducible(f: &[u32], p: u32) -> bool {
        let deg = f.len() - 1;
        if deg == 0 {
            return false;
        }
        for d in 1..=deg / 2 {
            let count = (p as u64).pow(d as u32);
            for enc in 0..count {
                let mut g: Vec<u32> = Vec::with_capacity(d + 1);
                let mut e = enc;
                for _ in 0..d {
                    g.push((e % p as u64) as u32);
                    e /= p as u64;
                }
                g.push(1);
                let r = rem(f, &g, p);
                if r.iter().all(|&c| c == 0) {
                    return false;
                }
            }
        }
        true
    }
}

/// The pair `F_q ⊆ F_{q^n}` realized inside a single context for `F_{q^n}`.
#[derive(Clone, Debug)]
pub struct SubfieldView {
    big: Field,
    q: u32,
    n: u32,
}

impl PartialEq for SubfieldView {
    fn eq(&self, other: &Self) -> bool {
        self.q == other.q && self.n == other.n && *self.big == *other.big
    }
}

impl SubfieldView {
    pub fn new(big: Field, n: u32) -> Result<Self> {
        if n == 0 || !big.m().is_multiple_of(n) {
            return Err(Error::SubfieldDegree { n, m: big.m() });
        }
        let q = big.p().pow(big.m() / n);
        Ok(SubfieldView { big, q, n })
    }

    /// Builds `F_{q^n}` with the canonical modulus and views it over `F_q`.
    pub fn from_q(q: u64, n: u32, bound: u64) -> Result<Self> {
        let (p, k) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
        let big = FieldCtx::with_bound(p, k * n, None, bound)?;
        Self::new(big, n)
    }

    pub fn big(&self) -> &Field {
        &self.big
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// `x^(q^k)`.
    pub fn frobenius(&self, x: FieldElem, k: u32) -> FieldElem {
        if x.is_zero() {
            return x;
        }
        // q^n ≡ 1 (mod Q-1), so only k mod n matters
        let group = (self.big.order() - 1) as u64;
        let e = (0..k % self.n).fold(1u64, |e, _| e * self.q as u64 % group);
        self.big.pow(x, e)
    }

    pub fn frobenius_checked(&self, x: FieldElem, k: u32) -> Result<FieldElem> {
        self.big.check(x)?;
        Ok(self.frobenius(x, k))
    }

    /// Relative trace `Σ_{i<n} x^(q^i)`.
    pub fn trace(&self, x: FieldElem) -> FieldElem {
        let mut acc = self.big.zero();
        let mut y = x;
        for _ in 0..self.n {
            acc = self.big.add(acc, y);
            y = self.big.pow(y, self.q as u64);
        }
        acc
    }

    pub fn trace_checked(&self, x: FieldElem) -> Result<FieldElem> {
        self.big.check(x)?;
        Ok(self.trace(x))
    }

    /// Membership in `F_q`: `x^q = x`.
    pub fn contains(&self, x: FieldElem) -> bool {
        self.big.pow(x, self.q as u64) == x
    }

    /// The subfield `F_q` as elements of the big field, in encoding order.
    pub fn subfield_elements(&self) -> Vec<FieldElem> {
        self.big.elements().filter(|&x| self.contains(x)).collect()
    }

    /// `{1, z, …, z^(n-1)}` where `z` is the class of the indeterminate.
    pub fn standard_basis(&self) -> Vec<FieldElem> {
        let z = self.big.generator_root();
        (0..self.n).map(|i| self.big.pow(z, i as u64)).collect()
    }

    /// The `n × n` matrix with rows `(β_i, β_i^q, …, β_i^(q^(n-1)))`.
    pub fn moore_matrix(&self, elems: &[FieldElem]) -> Result<Matrix> {
        let n = self.n as usize;
        if elems.len() != n {
            return Err(Error::Length {
                expected: n,
                got: elems.len(),
            });
        }
        for &e in elems {
            self.big.check(e)?;
        }
        Ok(Matrix::from_fn(n, n, |i, j| self.frobenius(elems[i], j as u32)))
    }
}

/// Moore-determinant basis test. Returns the determinant and the verdict.
pub fn is_basis(elems: &[FieldElem], view: &SubfieldView) -> Result<(bool, FieldElem)> {
    let det = view.moore_matrix(elems)?.det(view.big());
    Ok((!det.is_zero(), det))
}

/// Trace-dual basis: `Tr(θ_i θ*_j) = δ_ij`, via inversion of the trace Gram matrix.
pub fn dual_basis(theta: &[FieldElem], view: &SubfieldView) -> Result<Vec<FieldElem>> {
    let (ok, _) = is_basis(theta, view)?;
    if !ok {
        return Err(Error::NotBasis);
    }
    let f = view.big();
    let n = theta.len();
    let gram = Matrix::from_fn(n, n, |i, j| view.trace(f.mul(theta[i], theta[j])));
    let inv = gram.inverse(f).ok_or(Error::NotBasis)?;
    Ok((0..n)
        .map(|j| {
            (0..n).fold(f.zero(), |acc, k| {
                f.add(acc, f.mul(inv.get(k, j), theta[k]))
            })
        })
        .collect())
}
