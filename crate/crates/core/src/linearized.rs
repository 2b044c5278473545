//! Linearized polynomials `L(x) = Σ_{i<n} a_i x^(q^i)` over `F_{q^n}`.
//!
//! Three views of the same map live here: the coefficient vector, the Dickson
//! matrix `(a_{(j−i) mod n}^(q^i))`, and the trace form
//! `Σ_i Tr(θ_i x) ω_i` for a basis `θ`. Five bijectivity tests are provided,
//! one per view plus the exhaustive one, and they are expected to agree on
//! every input. The inverse of a bijective `L` comes from the column-0
//! cofactors of its Dickson matrix.

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fpoly::{Poly, ValueTable};
use crate::gf::{dual_basis, is_basis, FieldElem, SubfieldView};
use crate::matrix::Matrix;
use crate::par::{self, Exec};
use crate::permtool::brute_inverse;

/// Largest field on which results are re-verified against interpolation.
const INTERPOLATION_CHECK_MAX: u32 = 1024;

/// Guard for [`min_trace_witness`]: `q^n` at most this.
pub const MIN_WITNESS_MAX_ORDER: u32 = 16;

#[derive(Clone, Debug, PartialEq)]
pub struct LinearizedPoly {
    view: SubfieldView,
    a: Vec<FieldElem>,
}

impl LinearizedPoly {
    pub fn new(view: SubfieldView, a: Vec<FieldElem>) -> Result<Self> {
        let n = view.n() as usize;
        if a.len() != n {
            return Err(Error::Length {
                expected: n,
                got: a.len(),
            });
        }
        for &c in &a {
            view.big().check(c)?;
        }
        Ok(LinearizedPoly { view, a })
    }

    pub fn from_codes(view: SubfieldView, codes: &[u64]) -> Result<Self> {
        let a = codes
            .iter()
            .map(|&c| view.big().elem(c))
            .collect::<Result<Vec<_>>>()?;
        Self::new(view, a)
    }

    /// The `index`-th map in the enumeration of all `Q^n` coefficient vectors
    /// (base-`Q` digits of `index`, `a_0` least significant).
    pub fn from_index(view: SubfieldView, mut index: u64) -> Self {
        let q = view.big().order() as u64;
        let a = (0..view.n())
            .map(|_| {
                let c = view.big().element((index % q) as u32);
                index /= q;
                c
            })
            .collect();
        LinearizedPoly { view, a }
    }

    pub fn identity(view: SubfieldView) -> Self {
        let f = view.big().clone();
        let mut a = vec![f.zero(); view.n() as usize];
        a[0] = f.one();
        LinearizedPoly { view, a }
    }

    pub fn view(&self) -> &SubfieldView {
        &self.view
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.a
    }

    pub fn codes(&self) -> Vec<u32> {
        self.a.iter().map(|c| c.code()).collect()
    }

    pub fn eval(&self, x: FieldElem) -> FieldElem {
        let f = self.view.big();
        let mut acc = f.zero();
        let mut y = x;
        for (i, &c) in self.a.iter().enumerate() {
            if i > 0 {
                y = f.pow(y, self.view.q() as u64);
            }
            acc = f.add(acc, f.mul(c, y));
        }
        acc
    }

    pub fn tabulate(&self) -> ValueTable {
        ValueTable::from_fn(self.view.big(), |x| self.eval(x))
    }

    pub fn is_permutation(&self) -> bool {
        self.tabulate().is_bijection()
    }

    /// As an ordinary polynomial with `a_i` at degree `q^i`.
    pub fn to_poly(&self) -> Poly {
        let f = self.view.big().clone();
        let q = self.view.q() as usize;
        let mut coeffs = vec![f.zero(); q.pow(self.view.n() - 1) + 1];
        let mut deg = 1;
        for &c in &self.a {
            coeffs[deg] = c;
            deg *= q;
        }
        Poly::from_coeffs(f, coeffs)
    }
}

/// Checked evaluation.
pub fn eval_lin(l: &LinearizedPoly, x: FieldElem) -> Result<FieldElem> {
    l.view.big().check(x)?;
    Ok(l.eval(x))
}

/// Every linearized map over `view`, in index order.
pub fn all_linearized(view: &SubfieldView) -> impl Iterator<Item = LinearizedPoly> + '_ {
    let total = (view.big().order() as u64).pow(view.n());
    (0..total).map(move |i| LinearizedPoly::from_index(view.clone(), i))
}

/// `Tr(βx)` as a linearized polynomial: coefficients `β^(q^k)`.
pub fn trace_functional(view: &SubfieldView, beta: FieldElem) -> LinearizedPoly {
    let a = (0..view.n()).map(|k| view.frobenius(beta, k)).collect();
    LinearizedPoly {
        view: view.clone(),
        a,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DicksonMatrix {
    view: SubfieldView,
    entries: Matrix,
}

impl DicksonMatrix {
    pub fn entries(&self) -> &Matrix {
        &self.entries
    }

    /// Row `i` equals the `q^i`-Frobenius of row 0 shifted cyclically by `i`.
    pub fn is_structured(&self) -> bool {
        let n = self.entries.rows();
        (0..n).all(|i| {
            (0..n).all(|j| {
                let src = self.entries.get(0, (j + n - i) % n);
                self.entries.get(i, j) == self.view.frobenius(src, i as u32)
            })
        })
    }

    /// Row 0 read back as coefficients.
    pub fn coefficients(&self) -> Vec<FieldElem> {
        self.entries.row(0).to_vec()
    }
}

pub fn dickson(l: &LinearizedPoly) -> DicksonMatrix {
    let n = l.view.n() as usize;
    let entries = Matrix::from_fn(n, n, |i, j| l.view.frobenius(l.a[(j + n - i) % n], i as u32));
    DicksonMatrix {
        view: l.view.clone(),
        entries,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DetCofactors {
    pub det: FieldElem,
    /// `(i, 0)` cofactors `ā_0 … ā_{n−1}`.
    pub cofactors: Vec<FieldElem>,
}

/// Determinant by elimination plus the column-0 cofactors by minors; checks
/// `det = Σ_i a_{(n−i) mod n}^(q^i) ā_i` on every call.
pub fn det_and_cofactors(m: &DicksonMatrix) -> Result<DetCofactors> {
    let f = m.view.big();
    let n = m.entries.rows();
    let det = m.entries.det(f);
    let cofactors: Vec<FieldElem> = (0..n).map(|i| m.entries.cofactor(f, i, 0)).collect();
    let a = m.coefficients();
    let expansion = (0..n).fold(f.zero(), |acc, i| {
        let coef = m.view.frobenius(a[(n - i) % n], i as u32);
        f.add(acc, f.mul(coef, cofactors[i]))
    });
    if expansion != det {
        return Err(Error::Invariant(format!(
            "cofactor expansion {} differs from eliminated determinant {}",
            expansion, det
        )));
    }
    Ok(DetCofactors { det, cofactors })
}

/// Inverse of a bijective `L`: `(1/det) Σ ā_i x^(q^i)`.
pub fn wu_inverse(l: &LinearizedPoly) -> Result<LinearizedPoly> {
    let f = l.view.big();
    let d = dickson(l);
    let dc = det_and_cofactors(&d)?;
    let det_inv = f.inv(dc.det).ok_or(Error::SingularDickson)?;
    let coeffs: Vec<FieldElem> = dc.cofactors.iter().map(|&c| f.mul(c, det_inv)).collect();

    // adjugate route: first row of D_L^{-1} must be the same coefficients
    let inv_matrix = d.entries.inverse(f).ok_or(Error::SingularDickson)?;
    if inv_matrix.row(0) != coeffs.as_slice() {
        return Err(Error::Invariant(
            "first row of the inverse Dickson matrix differs from the cofactor inverse".into(),
        ));
    }

    let inv = LinearizedPoly {
        view: l.view.clone(),
        a: coeffs,
    };
    if f.elements().any(|x| inv.eval(l.eval(x)) != x) {
        return Err(Error::Invariant("cofactor inverse does not invert L".into()));
    }
    if f.order() <= INTERPOLATION_CHECK_MAX && inv.to_poly() != brute_inverse(&l.to_poly())? {
        return Err(Error::Invariant(
            "cofactor inverse differs from the interpolated inverse".into(),
        ));
    }
    Ok(inv)
}

#[derive(Clone, Debug, PartialEq)]
pub struct TraceForm {
    view: SubfieldView,
    theta: Vec<FieldElem>,
    omega: Vec<FieldElem>,
}

impl TraceForm {
    pub fn new(view: SubfieldView, theta: Vec<FieldElem>, omega: Vec<FieldElem>) -> Result<Self> {
        let (ok, _) = is_basis(&theta, &view)?;
        if !ok {
            return Err(Error::NotBasis);
        }
        if omega.len() != theta.len() {
            return Err(Error::Length {
                expected: theta.len(),
                got: omega.len(),
            });
        }
        for &w in &omega {
            view.big().check(w)?;
        }
        Ok(TraceForm { view, theta, omega })
    }

    pub fn view(&self) -> &SubfieldView {
        &self.view
    }

    pub fn theta(&self) -> &[FieldElem] {
        &self.theta
    }

    pub fn omega(&self) -> &[FieldElem] {
        &self.omega
    }

    /// `Σ_i Tr(θ_i x) ω_i` evaluated directly.
    pub fn eval(&self, x: FieldElem) -> FieldElem {
        let f = self.view.big();
        self.theta
            .iter()
            .zip(&self.omega)
            .fold(f.zero(), |acc, (&t, &w)| {
                f.add(acc, f.mul(self.view.trace(f.mul(t, x)), w))
            })
    }
}

/// `a_k = Σ_i ω_i θ_i^(q^k)`.
pub fn from_trace_form(tf: &TraceForm) -> LinearizedPoly {
    let f = tf.view.big();
    let a = (0..tf.view.n())
        .map(|k| {
            tf.theta
                .iter()
                .zip(&tf.omega)
                .fold(f.zero(), |acc, (&t, &w)| {
                    f.add(acc, f.mul(w, tf.view.frobenius(t, k)))
                })
        })
        .collect();
    LinearizedPoly {
        view: tf.view.clone(),
        a,
    }
}

/// `ω_j = L(θ*_j)` for the trace-dual basis `θ*`.
pub fn to_trace_form(l: &LinearizedPoly, theta: &[FieldElem]) -> Result<TraceForm> {
    let dual = dual_basis(theta, &l.view)?;
    let omega = dual.iter().map(|&d| l.eval(d)).collect();
    Ok(TraceForm {
        view: l.view.clone(),
        theta: theta.to_vec(),
        omega,
    })
}

/// `L` is a PP iff `ω` is a basis.
pub fn pp_by_basis(tf: &TraceForm) -> Result<bool> {
    Ok(is_basis(&tf.omega, &tf.view)?.0)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct D1Check {
    /// Entries `Tr(θ_i ω_j)`, all in `F_q`.
    pub matrix: Matrix,
    pub det: FieldElem,
    pub pp: bool,
    /// `η_i = Σ_j θ_j Tr(θ_i ω_j)`, so that `Tr(θ_i L(x)) = Tr(η_i x)`.
    pub eta: Vec<FieldElem>,
}

pub fn d1_check(tf: &TraceForm) -> Result<D1Check> {
    let f = tf.view.big();
    let n = tf.theta.len();
    let matrix = Matrix::from_fn(n, n, |i, j| tf.view.trace(f.mul(tf.theta[i], tf.omega[j])));
    let det = matrix.det(f);
    let eta: Vec<FieldElem> = (0..n)
        .map(|i| {
            (0..n).fold(f.zero(), |acc, j| {
                f.add(acc, f.mul(tf.theta[j], matrix.get(i, j)))
            })
        })
        .collect();
    let l = from_trace_form(tf);
    for x in f.elements() {
        let lx = l.eval(x);
        for (i, (&t, &e)) in tf.theta.iter().zip(&eta).enumerate() {
            if tf.view.trace(f.mul(t, lx)) != tf.view.trace(f.mul(e, x)) {
                return Err(Error::Invariant(format!(
                    "Tr(theta_{i} L(x)) != Tr(eta_{i} x) at x = {x}"
                )));
            }
        }
    }
    Ok(D1Check {
        pp: !det.is_zero(),
        matrix,
        det,
        eta,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TraceOptions {
    /// How many `u` to re-check by literal polynomial composition.
    pub samples: usize,
    pub seed: u64,
}

impl Default for TraceOptions {
    fn default() -> Self {
        TraceOptions { samples: 8, seed: 0 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceVerdict {
    pub pp: bool,
    /// Smallest nonzero `u` (by encoding) with `Tr(u x) ∘ L ≡ 0`.
    pub witness: Option<u32>,
    /// `u` values cross-checked by literal composition.
    pub cross_checked: Vec<u32>,
}

/// `L` is a PP iff `Tr(u x) ∘ L ≢ 0` for every nonzero `u`. Uses the closed
/// form `Tr(u L(x)) = Tr((Σ_i Tr(ω_i u) θ_i) x)` for the sweep, and literal
/// composition on a sample of `u` as a second route.
pub fn trace_criterion(
    l: &LinearizedPoly,
    theta: &[FieldElem],
    opts: TraceOptions,
    exec: Exec,
) -> Result<TraceVerdict> {
    let tf = to_trace_form(l, theta)?;
    let view = &l.view;
    let f = view.big();
    let closed = |u: FieldElem| -> FieldElem {
        tf.omega
            .iter()
            .zip(theta)
            .fold(f.zero(), |acc, (&w, &t)| {
                f.add(acc, f.mul(view.trace(f.mul(w, u)), t))
            })
    };
    let order = f.order() as usize;
    let witness = par::find_first(exec, order - 1, |i| closed(f.element(i as u32 + 1)).is_zero())
        .map(|i| i as u32 + 1);

    let mut pool: Vec<u32> = (1..order as u32).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    pool.shuffle(&mut rng);
    let mut sample: Vec<u32> = pool.into_iter().take(opts.samples).collect();
    if let Some(w) = witness {
        if !sample.contains(&w) {
            sample.push(w);
        }
    }
    sample.sort_unstable();
    let lp = l.to_poly();
    for &u in &sample {
        let u = f.element(u);
        let literal = trace_functional(view, u).to_poly().compose(&lp);
        let expected = trace_functional(view, closed(u)).to_poly();
        if literal != expected {
            return Err(Error::Invariant(format!(
                "Tr(ux) o L disagrees with its closed form at u = {u}"
            )));
        }
    }
    Ok(TraceVerdict {
        pp: witness.is_none(),
        witness,
        cross_checked: sample,
    })
}

/// True iff every nonzero `u` has some `i` with `Tr(u ω_i) ≠ 0`; on failure
/// the smallest killing `u` is returned. Cross-checked against the Moore
/// determinant on every call.
pub fn basis_trace_test(
    omega: &[FieldElem],
    view: &SubfieldView,
) -> Result<(bool, Option<FieldElem>)> {
    let (moore, _) = is_basis(omega, view)?;
    let f = view.big();
    let killer = f
        .nonzero_elements()
        .find(|&u| omega.iter().all(|&w| view.trace(f.mul(u, w)).is_zero()));
    if killer.is_none() != moore {
        return Err(Error::Invariant(
            "trace test disagrees with the Moore determinant".into(),
        ));
    }
    Ok((killer.is_none(), killer))
}

/// `L(x) = ω Σ_i Tr(θ_i x)` with `ω = Σ_j a_j v_j`: every dual-basis trace
/// functional of `v` composes with `L` to a surjection, yet `L` has a
/// one-dimensional image and is not a permutation.
pub fn degenerate_map(
    theta: &[FieldElem],
    v: &[FieldElem],
    a_coeffs: &[FieldElem],
    view: &SubfieldView,
) -> Result<LinearizedPoly> {
    let n = view.n() as usize;
    if n < 2 {
        return Err(Error::Domain(
            "n = 1 makes L a nonzero scalar multiple of x, which is a permutation; n >= 2 is required"
                .into(),
        ));
    }
    if a_coeffs.len() != n {
        return Err(Error::Length {
            expected: n,
            got: a_coeffs.len(),
        });
    }
    for &a in a_coeffs {
        view.big().check(a)?;
        if a.is_zero() {
            return Err(Error::Domain("coefficients a_j must be nonzero".into()));
        }
        if !view.contains(a) {
            return Err(Error::NotInSubfield(a.code()));
        }
    }
    if !is_basis(theta, view)?.0 || !is_basis(v, view)?.0 {
        return Err(Error::NotBasis);
    }
    let f = view.big();
    let omega = v
        .iter()
        .zip(a_coeffs)
        .fold(f.zero(), |acc, (&vj, &aj)| f.add(acc, f.mul(aj, vj)));
    let theta_sum = theta.iter().fold(f.zero(), |acc, &t| f.add(acc, t));
    let a = (0..view.n())
        .map(|k| f.mul(omega, view.frobenius(theta_sum, k)))
        .collect();
    let l = LinearizedPoly {
        view: view.clone(),
        a,
    };

    let table = l.tabulate();
    let image = table.image();
    if image.len() != view.q() as usize {
        return Err(Error::Invariant(format!(
            "image has {} elements, expected q = {}",
            image.len(),
            view.q()
        )));
    }
    if table.is_bijection() {
        return Err(Error::Invariant("degenerate map is a permutation".into()));
    }
    for e in dual_basis(v, view)? {
        let composed = ValueTable::from_fn(f, |x| view.trace(f.mul(e, l.eval(x))));
        if composed.image().len() != view.q() as usize {
            return Err(Error::Invariant(
                "a dual trace functional composed with L is not surjective".into(),
            ));
        }
    }
    Ok(l)
}

/// Smallest `B ⊆ F_{q^n}^*` (by size, then lexicographically by encoding)
/// such that every non-bijective linearized `L` has some `β ∈ B` with
/// `Tr(βx) ∘ L ≡ 0`. Exhaustive; guarded to `q^n ≤ 16`.
pub fn min_trace_witness(view: &SubfieldView, exec: Exec) -> Result<(usize, Vec<FieldElem>)> {
    let f = view.big();
    let order = f.order();
    if order > MIN_WITNESS_MAX_ORDER {
        return Err(Error::Guard {
            what: "q^n for the minimal witness search",
            value: order as u64,
            guard: MIN_WITNESS_MAX_ORDER as u64,
        });
    }
    let maps: Vec<LinearizedPoly> = all_linearized(view).collect();
    let masks = par::map(exec, &maps, |l| {
        let image = l.tabulate().image();
        if image.len() == order as usize {
            return None;
        }
        let mut mask = 0u32;
        for beta in f.nonzero_elements() {
            if image
                .iter()
                .all(|&y| view.trace(f.mul(beta, f.element(y))).is_zero())
            {
                mask |= 1 << beta.code();
            }
        }
        Some(mask)
    });
    let mut masks: Vec<u32> = masks.into_iter().flatten().collect();
    masks.sort_unstable();
    masks.dedup();
    if masks.is_empty() {
        return Ok((0, Vec::new()));
    }
    let candidates: Vec<u32> = (1..order).collect();
    for size in 1..=candidates.len() {
        let combos: Vec<Vec<u32>> = candidates.iter().copied().combinations(size).collect();
        let hit = par::find_first(exec, combos.len(), |i| {
            let chosen = combos[i].iter().fold(0u32, |m, &b| m | (1 << b));
            masks.iter().all(|&k| k & chosen != 0)
        });
        if let Some(i) = hit {
            let set = combos[i].iter().map(|&c| f.element(c)).collect();
            return Ok((size, set));
        }
    }
    Err(Error::Invariant(
        "no subset of nonzero elements annihilates every non-permutation".into(),
    ))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CriteriaReport {
    pub bijective: bool,
    pub dickson: bool,
    pub omega_basis: bool,
    pub d1: bool,
    pub trace: bool,
    pub trace_witness: Option<u32>,
    pub agree: bool,
}

/// All five bijectivity verdicts for one map.
pub fn five_criteria(
    l: &LinearizedPoly,
    theta: &[FieldElem],
    opts: TraceOptions,
    exec: Exec,
) -> Result<CriteriaReport> {
    let bijective = l.is_permutation();
    let dickson = !det_and_cofactors(&dickson(l))?.det.is_zero();
    let tf = to_trace_form(l, theta)?;
    let omega_basis = pp_by_basis(&tf)?;
    let d1 = d1_check(&tf)?.pp;
    let tv = trace_criterion(l, theta, opts, exec)?;
    let all = [bijective, dickson, omega_basis, d1, tv.pp];
    Ok(CriteriaReport {
        bijective,
        dickson,
        omega_basis,
        d1,
        trace: tv.pp,
        trace_witness: tv.witness,
        agree: all.iter().all(|&b| b == bijective),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::{make_field, DEFAULT_MAX_ORDER};

    fn v22() -> SubfieldView {
        SubfieldView::new(make_field(2, 2, None).unwrap(), 2).unwrap()
    }

    fn lin(view: &SubfieldView, codes: &[u64]) -> LinearizedPoly {
        LinearizedPoly::from_codes(view.clone(), codes).unwrap()
    }

    fn codes(v: &[FieldElem]) -> Vec<u32> {
        v.iter().map(|e| e.code()).collect()
    }

    #[test]
    fn eval_examples() {
        let v = v22();
        let f = v.big().clone();
        assert_eq!(lin(&v, &[0, 1]).eval(f.element(2)), f.element(3));
        assert!(f.elements().all(|x| lin(&v, &[1, 0]).eval(x) == x));
        assert_eq!(lin(&v, &[2, 0]).eval(f.element(3)), f.one());
        assert!(eval_lin(&lin(&v, &[1, 0]), make_field(3, 1, None).unwrap().one()).is_err());
    }

    #[test]
    fn dickson_examples() {
        let v = v22();
        let m = dickson(&lin(&v, &[0, 1]));
        assert_eq!(m.entries().to_codes(), vec![vec![0, 1], vec![1, 0]]);
        assert!(m.is_structured());
        assert_eq!(dickson(&lin(&v, &[1, 0])).entries().to_codes(), vec![vec![1, 0], vec![0, 1]]);
        assert_eq!(dickson(&lin(&v, &[2, 0])).entries().to_codes(), vec![vec![2, 0], vec![0, 3]]);
    }

    #[test]
    fn cofactor_examples() {
        let v = v22();
        let dc = det_and_cofactors(&dickson(&lin(&v, &[0, 1]))).unwrap();
        assert_eq!((dc.det.code(), codes(&dc.cofactors)), (1, vec![0, 1]));
        let dc = det_and_cofactors(&dickson(&lin(&v, &[1, 0]))).unwrap();
        assert_eq!((dc.det.code(), codes(&dc.cofactors)), (1, vec![1, 0]));
        let dc = det_and_cofactors(&dickson(&lin(&v, &[2, 0]))).unwrap();
        assert_eq!((dc.det.code(), codes(&dc.cofactors)), (1, vec![3, 0]));
    }

    #[test]
    fn wu_inverse_examples() {
        let v = v22();
        assert_eq!(wu_inverse(&lin(&v, &[0, 1])).unwrap().codes(), vec![0, 1]);
        assert_eq!(wu_inverse(&lin(&v, &[1, 0])).unwrap().codes(), vec![1, 0]);
        assert_eq!(wu_inverse(&lin(&v, &[2, 0])).unwrap().codes(), vec![3, 0]);
        assert_eq!(wu_inverse(&lin(&v, &[1, 1])), Err(Error::SingularDickson));
    }

    #[test]
    fn trace_form_examples() {
        let v = v22();
        let f = v.big().clone();
        let theta = vec![f.one(), f.element(2)];
        let tf = |w: &[u32]| {
            TraceForm::new(v.clone(), theta.clone(), w.iter().map(|&c| f.element(c)).collect())
                .unwrap()
        };
        assert_eq!(from_trace_form(&tf(&[3, 1])).codes(), vec![1, 0]);
        assert_eq!(from_trace_form(&tf(&[0, 0])).codes(), vec![0, 0]);
        let degenerate = from_trace_form(&tf(&[3, 3]));
        assert_eq!(degenerate.codes(), vec![2, 1]);
        // pointwise equal to w·Tr(w x)
        for x in f.elements() {
            let expect = f.mul(f.element(3), v.trace(f.mul(f.element(3), x)));
            assert_eq!(degenerate.eval(x), expect);
        }

        assert_eq!(codes(to_trace_form(&lin(&v, &[1, 0]), &theta).unwrap().omega()), vec![3, 1]);
        assert_eq!(codes(to_trace_form(&lin(&v, &[0, 0]), &theta).unwrap().omega()), vec![0, 0]);
        assert_eq!(codes(to_trace_form(&lin(&v, &[0, 1]), &theta).unwrap().omega()), vec![2, 1]);
        assert_eq!(
            to_trace_form(&lin(&v, &[0, 1]), &[f.one(), f.one()]),
            Err(Error::NotBasis)
        );

        assert!(pp_by_basis(&tf(&[3, 1])).unwrap());
        assert!(!pp_by_basis(&tf(&[3, 3])).unwrap());
        assert!(pp_by_basis(&tf(&[1, 2])).unwrap());
    }

    #[test]
    fn d1_examples() {
        let v = v22();
        let f = v.big().clone();
        let theta = vec![f.one(), f.element(2)];
        let tf = |w: &[u32]| {
            TraceForm::new(v.clone(), theta.clone(), w.iter().map(|&c| f.element(c)).collect())
                .unwrap()
        };
        let c = d1_check(&tf(&[3, 1])).unwrap();
        assert_eq!(c.matrix.to_codes(), vec![vec![1, 0], vec![0, 1]]);
        assert!(c.pp && c.det.code() == 1);
        assert_eq!(codes(&c.eta), vec![1, 2]);
        let c = d1_check(&tf(&[3, 3])).unwrap();
        assert_eq!(c.matrix.to_codes(), vec![vec![1, 1], vec![0, 0]]);
        assert!(!c.pp);
        let c = d1_check(&tf(&[0, 0])).unwrap();
        assert_eq!(c.matrix.to_codes(), vec![vec![0, 0], vec![0, 0]]);
        assert!(!c.pp);
    }

    #[test]
    fn trace_criterion_examples() {
        let v = v22();
        let f = v.big().clone();
        let theta = vec![f.one(), f.element(2)];
        let run = |l: &LinearizedPoly| {
            trace_criterion(l, &theta, TraceOptions::default(), Exec::Sequential).unwrap()
        };
        let r = run(&lin(&v, &[1, 0]));
        assert!(r.pp && r.witness.is_none());
        let r = run(&lin(&v, &[2, 1]));
        assert_eq!((r.pp, r.witness), (false, Some(2)));
        assert!(r.cross_checked.contains(&2));
        assert!(run(&lin(&v, &[2, 0])).pp);
    }

    #[test]
    fn basis_trace_examples() {
        let v = v22();
        let f = v.big().clone();
        let e = |c: &[u32]| c.iter().map(|&x| f.element(x)).collect::<Vec<_>>();
        assert_eq!(basis_trace_test(&e(&[3, 1]), &v).unwrap(), (true, None));
        assert_eq!(basis_trace_test(&e(&[1, 1]), &v).unwrap(), (false, Some(f.one())));
        assert!(!basis_trace_test(&e(&[0, 0]), &v).unwrap().0);
    }

    #[test]
    fn degenerate_examples() {
        let v = v22();
        let f = v.big().clone();
        let basis = vec![f.one(), f.element(2)];
        let ones = vec![f.one(), f.one()];
        let l = degenerate_map(&basis, &basis, &ones, &v).unwrap();
        assert_eq!(l.tabulate().image(), vec![0, 3]);

        let v8 = SubfieldView::from_q(2, 3, DEFAULT_MAX_ORDER).unwrap();
        let b8 = v8.standard_basis();
        let ones8 = vec![v8.big().one(); 3];
        let l8 = degenerate_map(&b8, &b8, &ones8, &v8).unwrap();
        assert_eq!(l8.tabulate().image().len(), 2);

        let v1 = SubfieldView::from_q(4, 1, DEFAULT_MAX_ORDER).unwrap();
        let one = v1.big().one();
        assert!(matches!(
            degenerate_map(&[one], &[one], &[one], &v1),
            Err(Error::Domain(_))
        ));
        assert!(degenerate_map(&basis, &basis, &[f.one(), f.zero()], &v).is_err());
        assert_eq!(
            degenerate_map(&basis, &basis, &[f.one(), f.element(2)], &v),
            Err(Error::NotInSubfield(2))
        );
    }

    #[test]
    fn min_witness_examples() {
        let (size, set) = min_trace_witness(&v22(), Exec::Sequential).unwrap();
        assert_eq!(size, 3);
        assert_eq!(codes(&set), vec![1, 2, 3]);
        let v21 = SubfieldView::from_q(2, 1, DEFAULT_MAX_ORDER).unwrap();
        assert_eq!(min_trace_witness(&v21, Exec::Sequential).unwrap().0, 1);
        let v31 = SubfieldView::from_q(3, 1, DEFAULT_MAX_ORDER).unwrap();
        assert_eq!(min_trace_witness(&v31, Exec::Parallel).unwrap().0, 1);
        let big = SubfieldView::from_q(2, 5, DEFAULT_MAX_ORDER).unwrap();
        assert!(matches!(min_trace_witness(&big, Exec::Sequential), Err(Error::Guard { .. })));
    }

    #[test]
    fn to_poly_places_coefficients() {
        let v = SubfieldView::from_q(2, 3, DEFAULT_MAX_ORDER).unwrap();
        let l = lin(&v, &[1, 2, 3]);
        assert_eq!(l.to_poly().codes(), vec![0, 1, 2, 0, 3]);
        assert_eq!(l.to_poly().tabulate(), l.tabulate());
    }
}
