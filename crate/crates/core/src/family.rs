//! The two-variant permutation family `f(x) = u x^q + v x + g(x^q + a x)` over
//! `F_{q^2}`, with `g(x) = Σ_{i=1}^{q−1} b_i x^i` and `a^(q+1) = 1`.
//!
//! Besides construction and closed-form inversion this module holds the two
//! helper facts about `x^q + a x` the family rests on (its image and the root
//! count of its affine shifts), an exhaustive enumerator used to test the
//! family's published size, and the multiplicative criterion for
//! `x^r h(x^s)`.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fpoly::{Poly, ValueTable};
use crate::gf::{Field, FieldElem, SubfieldView};
use crate::par::{self, Exec};
use crate::permtool::{brute_inverse, factorial, is_permutation};
use crate::wire::ParamsDesc;

/// Largest `q` accepted by [`enumerate_family`].
pub const ENUMERATION_MAX_Q: u32 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Variant {
    I,
    II,
}

impl std::str::FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "I" | "i" | "1" => Ok(Variant::I),
            "II" | "ii" | "2" => Ok(Variant::II),
            _ => Err(Error::Domain(format!("unknown variant {s:?}, expected I or II"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FamilyParams {
    view: SubfieldView,
    pub variant: Variant,
    pub a: FieldElem,
    pub u: FieldElem,
    pub v: FieldElem,
    pub c: FieldElem,
    /// `b_1 … b_{q−1}`.
    pub b: Vec<FieldElem>,
}

impl FamilyParams {
    pub fn new(
        view: SubfieldView,
        variant: Variant,
        a: FieldElem,
        u: FieldElem,
        v: FieldElem,
        c: FieldElem,
        b: Vec<FieldElem>,
    ) -> Result<Self> {
        require_quadratic(&view)?;
        let want = view.q() as usize - 1;
        if b.len() != want {
            return Err(Error::Length {
                expected: want,
                got: b.len(),
            });
        }
        let f = view.big();
        for &x in [a, u, v, c].iter().chain(&b) {
            f.check(x)?;
        }
        Ok(FamilyParams {
            view,
            variant,
            a,
            u,
            v,
            c,
            b,
        })
    }

    pub fn from_desc(d: &ParamsDesc, bound: u64) -> Result<Self> {
        let view = SubfieldView::from_q(d.q as u64, 2, bound)?;
        let f = view.big().clone();
        let e = |c: u32| f.elem(c as u64);
        let b = d.b.iter().map(|&c| e(c)).collect::<Result<Vec<_>>>()?;
        Self::new(view, d.variant, e(d.a)?, e(d.u)?, e(d.v)?, e(d.c)?, b)
    }

    pub fn to_desc(&self) -> ParamsDesc {
        ParamsDesc {
            q: self.view.q(),
            variant: self.variant,
            a: self.a.code(),
            u: self.u.code(),
            v: self.v.code(),
            c: self.c.code(),
            b: self.b.iter().map(|x| x.code()).collect(),
        }
    }

    pub fn view(&self) -> &SubfieldView {
        &self.view
    }
}

fn require_quadratic(view: &SubfieldView) -> Result<()> {
    if view.n() != 2 {
        return Err(Error::Domain(format!(
            "the family lives over F_(q^2); got relative degree {}",
            view.n()
        )));
    }
    Ok(())
}

fn require_unit_norm(view: &SubfieldView, a: FieldElem) -> Result<()> {
    view.big().check(a)?;
    if view.big().pow(a, view.q() as u64 + 1) != view.big().one() {
        return Err(Error::NotUnitNorm(a.code()));
    }
    Ok(())
}

/// All `a` with `a^(q+1) = 1`, in encoding order.
pub fn unit_norm_elements(view: &SubfieldView) -> Vec<FieldElem> {
    let f = view.big();
    f.nonzero_elements()
        .filter(|&a| f.pow(a, view.q() as u64 + 1) == f.one())
        .collect()
}

/// Image of `x ↦ x^q + a x`, checked against `{y : a y^q = y}`.
pub fn image_coset(a: FieldElem, view: &SubfieldView) -> Result<Vec<FieldElem>> {
    require_quadratic(view)?;
    require_unit_norm(view, a)?;
    let f = view.big();
    let q = view.q();
    let table = ValueTable::from_fn(f, |x| f.add(view.frobenius(x, 1), f.mul(a, x)));
    let image: Vec<FieldElem> = table.image().into_iter().map(|c| f.element(c)).collect();
    if image.len() != q as usize {
        return Err(Error::Invariant(format!(
            "image of x^q + ax has {} elements, expected {q}",
            image.len()
        )));
    }
    let fixed: Vec<FieldElem> = f
        .elements()
        .filter(|&y| f.mul(a, view.frobenius(y, 1)) == y)
        .collect();
    if fixed != image {
        return Err(Error::Invariant("image differs from {y : a y^q = y}".into()));
    }
    for lambda in view.subfield_elements() {
        if image.iter().any(|&y| image.binary_search(&f.mul(lambda, y)).is_err()) {
            return Err(Error::Invariant("image is not closed under F_q scaling".into()));
        }
    }
    Ok(image)
}

/// Number of roots of `x^q + a x − d` in `F_{q^2}`; always `0` or `q`.
pub fn affine_root_count(a: FieldElem, d: FieldElem, view: &SubfieldView) -> Result<usize> {
    require_quadratic(view)?;
    require_unit_norm(view, a)?;
    let f = view.big();
    f.check(d)?;
    let count = f
        .elements()
        .filter(|&x| f.add(view.frobenius(x, 1), f.mul(a, x)) == d)
        .count();
    let q = view.q() as usize;
    let predicted = if f.mul(a, view.frobenius(d, 1)) == d {
        q
    } else {
        0
    };
    if count != predicted {
        return Err(Error::Invariant(format!(
            "x^q + ax = d has {count} roots, expected {predicted}"
        )));
    }
    Ok(count)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "condition", rename_all = "snake_case")]
pub enum ParamFailure {
    /// `a^(q+1) ≠ 1`; carries `a^(q+1)`.
    NotUnitNorm { norm: u32 },
    /// `a u − v = 0`.
    Degenerate,
    CZero,
    CNotInSubfield { c: u32 },
    FirstEquation { expected: u32, got: u32 },
    SecondEquation { expected: u32, got: u32 },
    /// Coefficient `b_i`, `i ≥ 2`, fails its vanishing condition.
    HigherCoefficient { i: usize, value: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParamVerdict {
    pub valid: bool,
    pub failures: Vec<ParamFailure>,
}

/// `(lhs_1, lhs_2)` of the two linear conditions that must equal `(c, ac)`.
/// Needs `a ≠ 0`.
fn linear_conditions(
    view: &SubfieldView,
    variant: Variant,
    a: FieldElem,
    u: FieldElem,
    v: FieldElem,
    b1: FieldElem,
) -> (FieldElem, FieldElem) {
    let f = view.big();
    let fr = |x| view.frobenius(x, 1);
    match variant {
        Variant::I => {
            let a_inv = f.inv(a).expect("a is nonzero");
            let k = f.add(f.mul(fr(b1), a_inv), f.mul(b1, a));
            let first = f.add(f.add(f.mul(a, u), fr(v)), k);
            let second = f.add(f.add(fr(u), f.mul(a, v)), f.mul(a, k));
            (first, second)
        }
        Variant::II => {
            let k = f.add(fr(b1), b1);
            let first = f.add(f.add(u, f.mul(a, fr(v))), k);
            let second = f.add(f.add(f.mul(a, fr(u)), v), f.mul(a, k));
            (first, second)
        }
    }
}

/// The vanishing condition on `b_i` for `i ≥ 2`. Needs `a ≠ 0`.
fn higher_condition(view: &SubfieldView, variant: Variant, a: FieldElem, i: usize, bi: FieldElem) -> FieldElem {
    let f = view.big();
    let group = f.order() as u64 - 1;
    let a_pow = |e: i64| f.pow(a, e.rem_euclid(group as i64) as u64);
    let bq = view.frobenius(bi, 1);
    match variant {
        Variant::I => f.add(f.mul(bq, a_pow(-(i as i64))), f.mul(bi, a)),
        Variant::II => f.add(f.mul(bq, a_pow(1 - i as i64)), bi),
    }
}

/// Every condition on the parameters, with each failure listed.
pub fn validate_params(p: &FamilyParams) -> ParamVerdict {
    let view = &p.view;
    let f = view.big();
    let mut failures = Vec::new();
    let norm = f.pow(p.a, view.q() as u64 + 1);
    if norm != f.one() {
        failures.push(ParamFailure::NotUnitNorm { norm: norm.code() });
    }
    if f.sub(f.mul(p.a, p.u), p.v).is_zero() {
        failures.push(ParamFailure::Degenerate);
    }
    if p.c.is_zero() {
        failures.push(ParamFailure::CZero);
    }
    if !view.contains(p.c) {
        failures.push(ParamFailure::CNotInSubfield { c: p.c.code() });
    }
    // the remaining conditions involve powers of a^{-1}
    if !p.a.is_zero() {
        let (first, second) = linear_conditions(view, p.variant, p.a, p.u, p.v, p.b[0]);
        if first != p.c {
            failures.push(ParamFailure::FirstEquation {
                expected: p.c.code(),
                got: first.code(),
            });
        }
        let ac = f.mul(p.a, p.c);
        if second != ac {
            failures.push(ParamFailure::SecondEquation {
                expected: ac.code(),
                got: second.code(),
            });
        }
        for (idx, &bi) in p.b.iter().enumerate().skip(1) {
            let value = higher_condition(view, p.variant, p.a, idx + 1, bi);
            if !value.is_zero() {
                failures.push(ParamFailure::HigherCoefficient {
                    i: idx + 1,
                    value: value.code(),
                });
            }
        }
    }
    ParamVerdict {
        valid: failures.is_empty(),
        failures,
    }
}

fn ensure_valid(p: &FamilyParams) -> Result<()> {
    let verdict = validate_params(p);
    if verdict.valid {
        Ok(())
    } else {
        Err(Error::InvalidParams(
            serde_json::to_string(&verdict.failures).unwrap_or_default(),
        ))
    }
}

/// Powers `φ^0 … φ^(q−1)` of `φ = x^q + a x` and of the companion map `ψ_1`
/// whose composition with `f` collapses to `c φ`.
struct Powers {
    phi: Vec<Poly>,
    psi: Vec<Poly>,
}

impl Powers {
    fn new(view: &SubfieldView, variant: Variant, a: FieldElem) -> Self {
        let f = view.big().clone();
        let q = view.q() as u64;
        let one = f.one();
        let phi = Poly::monomial(f.clone(), one, q).add(&Poly::monomial(f.clone(), a, 1));
        let psi = match variant {
            Variant::I => phi.clone(),
            Variant::II => Poly::monomial(f.clone(), a, q).add(&Poly::x(f.clone())),
        };
        let pows = |base: &Poly| {
            let mut out = vec![Poly::constant(f.clone(), one)];
            for _ in 1..q {
                let next = out.last().unwrap().mul(base);
                out.push(next);
            }
            out
        };
        Powers {
            phi: pows(&phi),
            psi: pows(&psi),
        }
    }

    fn build(&self, p: &FamilyParams) -> Poly {
        let f = p.view.big().clone();
        let q = p.view.q() as u64;
        let mut out = Poly::monomial(f.clone(), p.u, q).add(&Poly::monomial(f.clone(), p.v, 1));
        for (i, &bi) in p.b.iter().enumerate() {
            out = out.add(&self.phi[i + 1].scale(bi));
        }
        out
    }

    /// `(v − a u)^{-1} (x − g(c^{-1} ψ_1) − u c^{-1} ψ_1)`.
    fn inverse(&self, p: &FamilyParams) -> Poly {
        let f = p.view.big().clone();
        let c_inv = f.inv(p.c).expect("c is nonzero");
        let mut inner = self.psi[1].scale(f.mul(p.u, c_inv));
        let mut c_pow = f.one();
        for (i, &bi) in p.b.iter().enumerate() {
            c_pow = f.mul(c_pow, c_inv);
            inner = inner.add(&self.psi[i + 1].scale(f.mul(bi, c_pow)));
        }
        let lead = f.inv(f.sub(p.v, f.mul(p.a, p.u))).expect("v - au is nonzero");
        Poly::x(f).sub(&inner).scale(lead)
    }

    /// `ψ_1(f(x)) = c (x^q + a x)` at every point.
    fn proof_identity(&self, p: &FamilyParams, f_tab: &ValueTable) -> Option<u32> {
        let field = p.view.big();
        let phi_tab = self.phi[1].tabulate();
        (0..field.order()).find(|&x| {
            let lhs = self.psi[1].eval(field.element(f_tab.get(x)));
            lhs != field.mul(p.c, field.element(phi_tab.get(x)))
        })
    }
}

/// `u x^q + v x + Σ b_i (x^q + a x)^i`, reduced. Asserts bijectivity and the
/// collapsing identity `ψ_1 ∘ f = c (x^q + a x)`.
pub fn build_f(p: &FamilyParams) -> Result<Poly> {
    ensure_valid(p)?;
    let pw = Powers::new(&p.view, p.variant, p.a);
    let f = pw.build(p);
    let tab = f.tabulate();
    if !tab.is_bijection() {
        return Err(Error::Invariant(format!(
            "valid parameters {:?} built a non-permutation",
            p.to_desc()
        )));
    }
    if let Some(x) = pw.proof_identity(p, &tab) {
        return Err(Error::Invariant(format!(
            "psi_1(f(x)) != c(x^q + ax) at x = {x}"
        )));
    }
    Ok(f)
}

/// The closed-form compositional inverse. Asserts equality with the
/// interpolated inverse.
pub fn closed_inverse(p: &FamilyParams) -> Result<Poly> {
    let f = build_f(p)?;
    let pw = Powers::new(&p.view, p.variant, p.a);
    let inv = pw.inverse(p);
    if inv != brute_inverse(&f)? {
        return Err(Error::Invariant(
            "closed-form inverse differs from the interpolated inverse".into(),
        ));
    }
    if !f.compose(&inv).is_identity() {
        return Err(Error::Invariant("f o f^-1 does not reduce to x".into()));
    }
    Ok(inv)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EnumerationReport {
    pub q: u32,
    pub variant: Variant,
    /// Valid parameter tuples over all `a`.
    pub tuples: u64,
    /// Distinct reduced polynomials, when deduplication was requested.
    pub distinct: Option<u64>,
    /// `q^(q+2) (q−1)^2`.
    pub predicted: u64,
    pub predicted_matches_total: bool,
    /// Whether every per-`a` subtotal equals `predicted`.
    pub predicted_matches_per_a: bool,
    /// Valid tuples per value of `a` (keyed by encoding).
    pub per_a: BTreeMap<u32, u64>,
    /// `q^(q+1) (q−1)^2`, the factor-by-factor count for one `a`.
    pub factor_count_per_a: u64,
    pub factor_count_matches_per_a: bool,
    pub all_pp: bool,
    pub all_inv_ok: bool,
    pub proof_identity_ok: bool,
    /// Tuples that failed any check; empty on a clean run.
    pub failures: Vec<ParamsDesc>,
    /// `(q!)^q`, the number of permutations compatible with one `x^q + a x`.
    pub local_ceiling: String,
}

#[derive(Default)]
struct Partial {
    tuples: u64,
    all_pp: bool,
    all_inv_ok: bool,
    proof_identity_ok: bool,
    failures: Vec<ParamsDesc>,
    polys: BTreeSet<Vec<u32>>,
}

/// Every valid tuple for one `(a, v)`, in `(b_1, u, b_2, …)` order.
fn valid_tuples_for(view: &SubfieldView, variant: Variant, a: FieldElem, v: FieldElem) -> Vec<FamilyParams> {
    let f = view.big();
    let q = view.q() as usize;
    let higher: Vec<Vec<FieldElem>> = (2..q)
        .map(|i| {
            f.elements()
                .filter(|&bi| higher_condition(view, variant, a, i, bi).is_zero())
                .collect()
        })
        .collect();
    let tails: Vec<Vec<FieldElem>> = if higher.is_empty() {
        vec![Vec::new()]
    } else {
        use itertools::Itertools;
        higher.iter().map(|s| s.iter().copied()).multi_cartesian_product().collect()
    };
    let mut out = Vec::new();
    for b1 in f.elements() {
        for u in f.elements() {
            if f.sub(f.mul(a, u), v).is_zero() {
                continue;
            }
            // c is forced by the first condition
            let (c, second) = linear_conditions(view, variant, a, u, v, b1);
            if c.is_zero() || !view.contains(c) || second != f.mul(a, c) {
                continue;
            }
            for tail in &tails {
                let mut b = Vec::with_capacity(q - 1);
                b.push(b1);
                b.extend_from_slice(tail);
                out.push(FamilyParams {
                    view: view.clone(),
                    variant,
                    a,
                    u,
                    v,
                    c,
                    b,
                });
            }
        }
    }
    out
}

/// Exhaustive enumeration of the family over `F_{q^2}` for `q ≤ 4`. Every
/// valid tuple is built, checked for bijectivity and the collapsing identity,
/// and its closed-form inverse compared with the interpolated one.
pub fn enumerate_family(
    view: &SubfieldView,
    variant: Variant,
    dedupe: bool,
    exec: Exec,
) -> Result<EnumerationReport> {
    require_quadratic(view)?;
    let q = view.q();
    if q > ENUMERATION_MAX_Q {
        return Err(Error::Guard {
            what: "q for family enumeration",
            value: q as u64,
            guard: ENUMERATION_MAX_Q as u64,
        });
    }
    let f = view.big();
    let a_values = unit_norm_elements(view);
    let powers: Vec<Powers> = a_values.iter().map(|&a| Powers::new(view, variant, a)).collect();
    let parts: Vec<(usize, FieldElem)> = (0..a_values.len())
        .flat_map(|i| f.elements().map(move |v| (i, v)))
        .collect();

    let results = par::map(exec, &parts, |&(ai, v)| {
        let pw = &powers[ai];
        let mut part = Partial {
            all_pp: true,
            all_inv_ok: true,
            proof_identity_ok: true,
            ..Partial::default()
        };
        for p in valid_tuples_for(view, variant, a_values[ai], v) {
            part.tuples += 1;
            let poly = pw.build(&p);
            let tab = poly.tabulate();
            let pp = tab.is_bijection();
            let identity = pw.proof_identity(&p, &tab).is_none();
            let inv_ok = pp && brute_inverse(&poly).is_ok_and(|b| b == pw.inverse(&p));
            part.all_pp &= pp;
            part.proof_identity_ok &= identity;
            part.all_inv_ok &= inv_ok;
            if !(pp && identity && inv_ok) {
                part.failures.push(p.to_desc());
            }
            if dedupe {
                part.polys.insert(poly.codes());
            }
        }
        part
    });

    let mut per_a: BTreeMap<u32, u64> = a_values.iter().map(|a| (a.code(), 0)).collect();
    let mut tuples = 0;
    let mut all_pp = true;
    let mut all_inv_ok = true;
    let mut proof_identity_ok = true;
    let mut failures = Vec::new();
    let mut polys = BTreeSet::new();
    for (&(ai, _), part) in parts.iter().zip(results) {
        *per_a.get_mut(&a_values[ai].code()).unwrap() += part.tuples;
        tuples += part.tuples;
        all_pp &= part.all_pp;
        all_inv_ok &= part.all_inv_ok;
        proof_identity_ok &= part.proof_identity_ok;
        failures.extend(part.failures);
        polys.extend(part.polys);
    }

    let qq = q as u64;
    let predicted = qq.pow(q + 2) * (qq - 1).pow(2);
    let factor_count_per_a = qq.pow(q + 1) * (qq - 1).pow(2);
    Ok(EnumerationReport {
        q,
        variant,
        tuples,
        distinct: dedupe.then_some(polys.len() as u64),
        predicted,
        predicted_matches_total: tuples == predicted,
        predicted_matches_per_a: per_a.values().all(|&n| n == predicted),
        factor_count_matches_per_a: per_a.values().all(|&n| n == factor_count_per_a),
        per_a,
        factor_count_per_a,
        all_pp,
        all_inv_ok,
        proof_identity_ok,
        failures,
        local_ceiling: factorial(qq).pow(q).to_string(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MultVerdict {
    pub pp: bool,
    pub gcd_ok: bool,
    /// `x^r h(x)^s` maps `μ_{(q−1)/s}` onto itself bijectively.
    pub permutes_mu: bool,
    /// An element of `μ_{(q−1)/s}` where `h` vanishes.
    pub h_vanishes_at: Option<u32>,
    pub mu: Vec<u32>,
    /// Two inputs with the same value under `x^r h(x^s)`, when not a PP.
    pub collision: Option<(u32, u32)>,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Decides whether `x^r h(x^s)` permutes `F_q` from `gcd(r, s) = 1` and the
/// action of `x^r h(x)^s` on the `(q−1)/s`-th roots of unity. The verdict is
/// checked against the exhaustive test on every call.
pub fn mult_check(field: &Field, r: u64, s: u64, h: &Poly) -> Result<MultVerdict> {
    if **h.field() != **field {
        return Err(Error::ContextMismatch);
    }
    if r == 0 {
        return Err(Error::Domain("r must be positive".into()));
    }
    let q1 = field.order() as u64 - 1;
    if s == 0 || !q1.is_multiple_of(s) {
        return Err(Error::NotDivisor { s, q_minus_one: q1 });
    }
    let d = q1 / s;
    let mu: Vec<FieldElem> = field
        .nonzero_elements()
        .filter(|&x| field.pow(x, d) == field.one())
        .collect();
    let gcd_ok = gcd(r, s) == 1;
    let h_vanishes_at = mu.iter().find(|&&x| h.eval(x).is_zero()).map(|x| x.code());
    let permutes_mu = h_vanishes_at.is_none() && {
        let mut seen = BTreeSet::new();
        mu.iter().all(|&x| {
            let y = field.mul(field.pow(x, r), field.pow(h.eval(x), s));
            mu.binary_search(&y).is_ok() && seen.insert(y)
        })
    };
    let pp = gcd_ok && permutes_mu;

    let full = Poly::monomial(field.clone(), field.one(), r)
        .mul(&h.compose(&Poly::monomial(field.clone(), field.one(), s)));
    let collision = first_collision(&full.tabulate());
    if pp != collision.is_none() || pp != is_permutation(&full) {
        return Err(Error::Invariant(format!(
            "criterion says pp = {pp} for r = {r}, s = {s}, exhaustive test disagrees"
        )));
    }
    Ok(MultVerdict {
        pp,
        gcd_ok,
        permutes_mu,
        h_vanishes_at,
        mu: mu.iter().map(|x| x.code()).collect(),
        collision,
    })
}

fn first_collision(tab: &ValueTable) -> Option<(u32, u32)> {
    let mut first = vec![u32::MAX; tab.len()];
    for x in 0..tab.len() as u32 {
        let y = tab.get(x) as usize;
        if first[y] != u32::MAX {
            return Some((first[y], x));
        }
        first[y] = x;
    }
    None
}

/// `F_{q^2}` viewed over `F_q`, for callers that only have `q`.
pub fn quadratic_view(q: u64, bound: u64) -> Result<SubfieldView> {
    SubfieldView::from_q(q, 2, bound)
}
