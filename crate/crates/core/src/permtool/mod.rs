//! Permutation certification and inversion.
//!
//! The brute-force routines here ([`is_permutation`], [`brute_inverse`],
//! [`image`]) are the oracles every structured criterion in the crate is
//! checked against. On top of them sit the local criterion (certify a map
//! through the fibers of a surjection `φ`), the count of bijections compatible
//! with a pair `(φ, ψ)`, inversion through a combiner expression, and two
//! instance-level harnesses for composition and for auditing families of
//! surjections.

mod expr;

use num_bigint::BigUint;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fpoly::{Poly, ValueTable};
use crate::gf::{Field, FieldElem};
use crate::par::{self, Exec};

pub use expr::{ExprTree, DEFAULT_MAX_DEPTH};

/// Exhaustive bijectivity test with a seen-bitmap.
pub fn is_permutation(f: &Poly) -> bool {
    f.tabulate().is_bijection()
}

/// Inverts the value table and interpolates.
pub fn brute_inverse(f: &Poly) -> Result<Poly> {
    let inv = f.tabulate().inverse().ok_or(Error::NotPermutation)?;
    Poly::interpolate(f.field().clone(), &inv)
}

/// Sorted image of `f`.
pub fn image(f: &Poly) -> Vec<FieldElem> {
    let field = f.field();
    f.tabulate()
        .image()
        .into_iter()
        .map(|c| field.element(c))
        .collect()
}

/// Fibers of a map, keyed by its sorted image.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalDecomposition {
    pub phi: ValueTable,
    /// Filled in once a bijective certificate is found.
    pub psi: Option<ValueTable>,
    pub s: Vec<u32>,
    /// `fibers[i]` is `φ^{-1}(s[i])`, sorted.
    pub fibers: Vec<Vec<u32>>,
}

impl LocalDecomposition {
    pub fn of(phi: &ValueTable) -> Self {
        let s = phi.image();
        let mut slot = vec![usize::MAX; phi.len()];
        for (i, &v) in s.iter().enumerate() {
            slot[v as usize] = i;
        }
        let mut fibers = vec![Vec::new(); s.len()];
        for x in 0..phi.len() as u32 {
            fibers[slot[phi.get(x) as usize]].push(x);
        }
        LocalDecomposition {
            phi: phi.clone(),
            psi: None,
            s,
            fibers,
        }
    }

    pub fn fiber_sizes(&self) -> Vec<usize> {
        self.fibers.iter().map(Vec::len).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum LocalFailure {
    /// `f(x1) = f(x2)` with `x1 < x2` in the same fiber `φ^{-1}(s)`.
    NotInjectiveOnFiber { s: u32, x1: u32, x2: u32, value: u32 },
    /// `y` lies in both `f(φ^{-1}(s1))` and `f(φ^{-1}(s2))`.
    FiberImagesOverlap { s1: u32, s2: u32, y: u32 },
    NotCovering { missing: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum LocalVerdict {
    Bijective(LocalDecomposition),
    NotBijective(LocalFailure),
}

impl LocalVerdict {
    pub fn is_bijective(&self) -> bool {
        matches!(self, LocalVerdict::Bijective(_))
    }
}

/// Local criterion on value tables: injective on every fiber of `φ` and
/// pairwise disjoint fiber images.
pub fn local_certify_tables(f: &ValueTable, phi: &ValueTable) -> LocalVerdict {
    let mut dec = LocalDecomposition::of(phi);
    let q = f.len();

    // injectivity per fiber, first offending x2 in encoding order
    for (i, fiber) in dec.fibers.iter().enumerate() {
        let mut first = vec![u32::MAX; q];
        for &x in fiber {
            let y = f.get(x) as usize;
            if first[y] != u32::MAX {
                return LocalVerdict::NotBijective(LocalFailure::NotInjectiveOnFiber {
                    s: dec.s[i],
                    x1: first[y],
                    x2: x,
                    value: y as u32,
                });
            }
            first[y] = x;
        }
    }

    let mut owner = vec![usize::MAX; q];
    for x in 0..q as u32 {
        let s_idx = dec.s.binary_search(&phi.get(x)).unwrap();
        let y = f.get(x) as usize;
        match owner[y] {
            usize::MAX => owner[y] = s_idx,
            o if o != s_idx => {
                return LocalVerdict::NotBijective(LocalFailure::FiberImagesOverlap {
                    s1: dec.s[o],
                    s2: dec.s[s_idx],
                    y: y as u32,
                })
            }
            _ => {}
        }
    }
    if let Some(missing) = owner.iter().position(|&o| o == usize::MAX) {
        return LocalVerdict::NotBijective(LocalFailure::NotCovering {
            missing: missing as u32,
        });
    }

    let mut psi = vec![0u32; q];
    for x in 0..q as u32 {
        psi[f.get(x) as usize] = phi.get(x);
    }
    dec.psi = Some(ValueTable::new(psi));
    LocalVerdict::Bijective(dec)
}

pub fn local_certify(f: &Poly, phi: &Poly) -> Result<LocalVerdict> {
    if **f.field() != **phi.field() {
        return Err(Error::ContextMismatch);
    }
    Ok(local_certify_tables(&f.tabulate(), &phi.tabulate()))
}

/// The unique `ψ` with `ψ ∘ f = φ`, when `f` certifies as bijective.
pub fn induced_psi(f: &Poly, phi: &Poly) -> Result<ValueTable> {
    match local_certify(f, phi)? {
        LocalVerdict::Bijective(dec) => Ok(dec.psi.expect("set for bijective verdicts")),
        LocalVerdict::NotBijective(why) => Err(Error::CertificationFailed(
            serde_json::to_string(&why).unwrap_or_default(),
        )),
    }
}

/// `∏_s |φ^{-1}(s)|!` when `φ` and `ψ` have the same image and matching fiber
/// sizes, else 0: the number of bijections `f` with `ψ ∘ f = φ`.
pub fn count_compatible_bijections(phi: &ValueTable, psi: &ValueTable) -> BigUint {
    if phi.len() != psi.len() {
        return BigUint::ZERO;
    }
    let a = LocalDecomposition::of(phi);
    let b = LocalDecomposition::of(psi);
    if a.s != b.s || a.fiber_sizes() != b.fiber_sizes() {
        return BigUint::ZERO;
    }
    a.fibers
        .iter()
        .map(|fib| factorial(fib.len() as u64))
        .product()
}

pub fn factorial(n: u64) -> BigUint {
    (1..=n).map(BigUint::from).product()
}

/// Lemma-style local inversion: given `ψ_i` and a combiner `F` with
/// `F(ψ_1(f(x)), …, ψ_t(f(x))) = x` everywhere, returns `F(ψ_1, …, ψ_t)`
/// as a reduced polynomial.
pub fn local_inverse(f: &Poly, psis: &[ValueTable], combiner: &ExprTree) -> Result<Poly> {
    let field = f.field().clone();
    let ftab = f.tabulate();
    if !ftab.is_bijection() {
        return Err(Error::NotPermutation);
    }
    for t in psis {
        t.validate(&field)?;
    }
    combiner.validate(psis.len(), &field, DEFAULT_MAX_DEPTH)?;

    let args_at = |tables: &[ValueTable], x: u32| -> Vec<FieldElem> {
        tables.iter().map(|t| field.element(t.get(x))).collect()
    };
    let phis: Vec<ValueTable> = psis.iter().map(|psi| psi.after(&ftab)).collect();
    for x in field.elements() {
        let got = combiner.eval(&field, &args_at(&phis, x.code()));
        if got != x {
            return Err(Error::IdentityFails {
                x: x.code(),
                got: got.code(),
            });
        }
    }
    let inv_table = ValueTable::from_fn(&field, |y| combiner.eval(&field, &args_at(psis, y.code())));
    let inv = Poly::interpolate(field, &inv_table)?;
    if inv != brute_inverse(f)? {
        return Err(Error::Invariant(
            "local inverse differs from the brute-force inverse".into(),
        ));
    }
    Ok(inv)
}

fn is_surjective_onto(map: &ValueTable, target: &[u32]) -> bool {
    map.image() == target
}

/// Instance report for composing with a permutation `g`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompositionReport {
    pub f_is_pp: bool,
    /// `ψ_i ∘ f` surjective onto `Im ψ_i`, per i.
    pub f_compositions_surjective: Vec<bool>,
    /// `f` is a PP iff every `ψ_i ∘ f` is surjective, on this instance.
    pub hypothesis_holds: bool,
    /// `ψ_i ∘ g^{-1}` surjective onto `Im ψ_i`, per i.
    pub pulled_back_surjective: Vec<bool>,
    pub composite_is_pp: bool,
    /// `g ∘ f` is a PP iff every `ψ_i ∘ g^{-1}` is surjective.
    pub literal_biconditional: bool,
    /// `g ∘ f` is a PP iff every `(ψ_i ∘ g^{-1}) ∘ (g ∘ f)` is surjective.
    pub composed_biconditional: bool,
    /// The hypothesis implies the composed biconditional on this instance.
    pub consistent: bool,
    pub notes: Vec<String>,
}

/// Checks the composition statement on one instance `(f, g, ψ_1..ψ_t)`.
pub fn composition_harness(f: &Poly, g: &Poly, psis: &[ValueTable]) -> Result<CompositionReport> {
    if **f.field() != **g.field() {
        return Err(Error::ContextMismatch);
    }
    let field = f.field();
    for t in psis {
        t.validate(field)?;
    }
    let gtab = g.tabulate();
    let ginv = gtab.inverse().ok_or(Error::NotPermutation)?;
    let ftab = f.tabulate();
    let gf = gtab.after(&ftab);
    let images: Vec<Vec<u32>> = psis.iter().map(ValueTable::image).collect();

    let f_is_pp = ftab.is_bijection();
    let f_surj: Vec<bool> = psis
        .iter()
        .zip(&images)
        .map(|(psi, s)| is_surjective_onto(&psi.after(&ftab), s))
        .collect();
    let pulled: Vec<ValueTable> = psis.iter().map(|psi| psi.after(&ginv)).collect();
    let pulled_surj: Vec<bool> = pulled
        .iter()
        .zip(&images)
        .map(|(t, s)| is_surjective_onto(t, s))
        .collect();
    let composed_surj: Vec<bool> = pulled
        .iter()
        .zip(&images)
        .map(|(t, s)| is_surjective_onto(&t.after(&gf), s))
        .collect();
    let composite_is_pp = gf.is_bijection();

    let hypothesis_holds = f_is_pp == f_surj.iter().all(|&b| b);
    let literal = composite_is_pp == pulled_surj.iter().all(|&b| b);
    let composed = composite_is_pp == composed_surj.iter().all(|&b| b);
    let mut notes = Vec::new();
    if !hypothesis_holds {
        notes.push(format!(
            "hypothesis fails for this f: f is{} a PP but the compositions psi_i o f are{} all surjective",
            if f_is_pp { "" } else { " not" },
            if f_surj.iter().all(|&b| b) { "" } else { " not" },
        ));
    }
    if !literal {
        notes.push(
            "psi_i o g^-1 is surjective for every bijective g, so the literal reading cannot detect that g o f is not a PP"
                .into(),
        );
    }
    Ok(CompositionReport {
        f_is_pp,
        f_compositions_surjective: f_surj,
        hypothesis_holds,
        pulled_back_surjective: pulled_surj,
        composite_is_pp,
        literal_biconditional: literal,
        composed_biconditional: composed,
        consistent: !hypothesis_holds || composed,
        notes,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub index: usize,
    pub coeffs: Vec<u32>,
    pub is_pp: bool,
    pub compositions_surjective: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    pub candidates: usize,
    pub counterexamples: Vec<Counterexample>,
    pub warnings: Vec<String>,
}

/// Compares "every `ψ_i ∘ f` is surjective onto `Im ψ_i`" with bijectivity of
/// `f` over a candidate set, returning each disagreement in input order.
pub fn local_pp_audit<I>(
    field: &Field,
    psis: &[ValueTable],
    candidates: I,
    exec: Exec,
) -> Result<AuditReport>
where
    I: IntoIterator<Item = Poly>,
{
    let mut warnings = Vec::new();
    let half = field.order() as usize / 2;
    let images: Vec<Vec<u32>> = psis
        .iter()
        .map(|t| t.validate(field).map(|_| t.image()))
        .collect::<Result<_>>()?;
    for (i, s) in images.iter().enumerate() {
        if s.len() > half {
            let msg = format!("|S_{i}| = {} exceeds Q/2 = {half}", s.len());
            log::warn!("{msg}");
            warnings.push(msg);
        }
    }
    let candidates: Vec<Poly> = candidates.into_iter().collect();
    if let Some(c) = candidates.iter().find(|c| **c.field() != **field) {
        let _ = c;
        return Err(Error::ContextMismatch);
    }
    let verdicts = par::map(exec, &candidates, |f| {
        let tab = f.tabulate();
        let surj = psis
            .iter()
            .zip(&images)
            .all(|(psi, s)| is_surjective_onto(&psi.after(&tab), s));
        (tab.is_bijection(), surj)
    });
    let counterexamples = verdicts
        .into_iter()
        .enumerate()
        .filter(|(_, (pp, surj))| pp != surj)
        .map(|(index, (is_pp, surj))| Counterexample {
            index,
            coeffs: candidates[index].codes(),
            is_pp,
            compositions_surjective: surj,
        })
        .collect();
    Ok(AuditReport {
        candidates: candidates.len(),
        counterexamples,
        warnings,
    })
}
