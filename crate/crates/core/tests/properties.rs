use std::collections::BTreeSet;

use itertools::Itertools;
use proptest::prelude::*;

use ffperm::family::{self, FamilyParams, Variant};
use ffperm::gf::{dual_basis, is_basis, DEFAULT_MAX_ORDER};
use ffperm::linearized::{self, LinearizedPoly};
use ffperm::permtool::{self, is_permutation, ExprTree};
use ffperm::{make_field, Field, Poly, SubfieldView, ValueTable};

const FIELDS: [(u32, u32); 10] = [(2, 1), (2, 2), (2, 3), (2, 4), (2, 8), (3, 2), (3, 4), (5, 2), (7, 2), (251, 1)];

fn field_at(i: usize) -> Field {
    let (p, m) = FIELDS[i % FIELDS.len()];
    make_field(p, m, None).unwrap()
}

fn views() -> Vec<SubfieldView> {
    [(2u64, 2u32), (2, 3), (2, 4), (3, 2), (4, 2), (2, 6), (4, 3), (8, 2), (3, 3)]
        .iter()
        .map(|&(q, n)| SubfieldView::from_q(q, n, DEFAULT_MAX_ORDER).unwrap())
        .collect()
}

fn span_size(v: &SubfieldView, elems: &[ffperm::FieldElem]) -> usize {
    let f = v.big();
    let sub = v.subfield_elements();
    let mut span: BTreeSet<ffperm::FieldElem> = [f.zero()].into();
    for &e in elems {
        span = span
            .iter()
            .flat_map(|&s| sub.iter().map(move |&c| f.add(s, f.mul(c, e))))
            .collect();
    }
    span.len()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn field_axioms(i in 0usize..FIELDS.len(), a in any::<u32>(), b in any::<u32>(), c in any::<u32>()) {
        let f = field_at(i);
        let q = f.order();
        let (a, b, c) = (f.element(a % q), f.element(b % q), f.element(c % q));
        prop_assert_eq!(f.add(a, b), f.add(b, a));
        prop_assert_eq!(f.mul(a, b), f.mul(b, a));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.add(a, f.neg(a)), f.zero());
        prop_assert_eq!(f.sub(f.add(a, b), b), a);
        if !a.is_zero() {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), f.one());
            prop_assert_eq!(f.pow(a, q as u64 - 1), f.one());
        }
    }

    #[test]
    fn frobenius_is_automorphism(vi in 0usize..9, a in any::<u32>(), b in any::<u32>(), k in 0u32..6) {
        let v = &views()[vi];
        let f = v.big();
        let q = f.order();
        let (a, b) = (f.element(a % q), f.element(b % q));
        prop_assert_eq!(v.frobenius(f.add(a, b), k), f.add(v.frobenius(a, k), v.frobenius(b, k)));
        prop_assert_eq!(v.frobenius(f.mul(a, b), k), f.mul(v.frobenius(a, k), v.frobenius(b, k)));
        prop_assert_eq!(v.frobenius(a, v.n()), a);
        prop_assert!(v.contains(v.trace(a)));
    }

    #[test]
    fn interpolation_round_trip(i in 0usize..6, seed in any::<u64>()) {
        let f = field_at(i);
        let q = f.order();
        let table = ValueTable::new((0..q).map(|x| ((seed.wrapping_mul(x as u64 + 7) >> 7) % q as u64) as u32).collect());
        let p = Poly::interpolate(f, &table).unwrap();
        prop_assert_eq!(p.tabulate(), table);
    }

    #[test]
    fn composition_is_pointwise(i in 0usize..6, a in prop::collection::vec(any::<u32>(), 1..12), b in prop::collection::vec(any::<u32>(), 1..6)) {
        let f = field_at(i);
        let q = f.order();
        let mk = |v: &[u32]| Poly::from_codes(f.clone(), &v.iter().map(|&c| (c % q) as u64).collect::<Vec<_>>()).unwrap();
        let (pa, pb) = (mk(&a), mk(&b));
        let comp = pa.compose(&pb);
        for x in f.elements() {
            prop_assert_eq!(comp.eval(x), pa.eval(pb.eval(x)));
        }
        prop_assert_eq!(pa.mul(&pb).tabulate(), ValueTable::from_fn(&f, |x| f.mul(pa.eval(x), pb.eval(x))));
    }

    #[test]
    fn basis_tests_agree(vi in 0usize..9, codes in prop::collection::vec(any::<u32>(), 6)) {
        let v = &views()[vi];
        let f = v.big();
        let omega: Vec<_> = codes.iter().take(v.n() as usize).map(|&c| f.element(c % f.order())).collect();
        let (moore, _) = is_basis(&omega, v).unwrap();
        prop_assert_eq!(moore, span_size(v, &omega) == f.order() as usize);
        let (by_trace, witness) = linearized::basis_trace_test(&omega, v).unwrap();
        prop_assert_eq!(by_trace, moore);
        if let Some(u) = witness {
            prop_assert!(omega.iter().all(|&w| v.trace(f.mul(u, w)).is_zero()));
        }
        if moore {
            let dual = dual_basis(&omega, v).unwrap();
            for (i, &t) in omega.iter().enumerate() {
                for (j, &d) in dual.iter().enumerate() {
                    let want = if i == j { f.one() } else { f.zero() };
                    prop_assert_eq!(v.trace(f.mul(t, d)), want);
                }
            }
        }
    }

    #[test]
    fn trace_form_round_trip(vi in 0usize..9, codes in prop::collection::vec(any::<u32>(), 6)) {
        let v = views()[vi].clone();
        let f = v.big().clone();
        let a: Vec<u64> = codes.iter().take(v.n() as usize).map(|&c| (c % f.order()) as u64).collect();
        let l = LinearizedPoly::from_codes(v.clone(), &a).unwrap();
        let theta = v.standard_basis();
        let tf = linearized::to_trace_form(&l, &theta).unwrap();
        prop_assert_eq!(&linearized::from_trace_form(&tf), &l);
        for x in f.elements().step_by(7) {
            prop_assert_eq!(tf.eval(x), l.eval(x));
        }
        let pp = l.is_permutation();
        prop_assert_eq!(linearized::pp_by_basis(&tf).unwrap(), pp);
        match linearized::wu_inverse(&l) {
            Ok(inv) => {
                prop_assert!(pp);
                prop_assert!(f.elements().all(|x| inv.eval(l.eval(x)) == x));
            }
            Err(ffperm::Error::SingularDickson) => prop_assert!(!pp),
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        }
    }

    #[test]
    fn local_criterion_matches_oracle(i in 0usize..4, fc in prop::collection::vec(any::<u32>(), 1..8), pc in prop::collection::vec(any::<u32>(), 1..5)) {
        let f = field_at(i);
        let q = f.order();
        let mk = |v: &[u32]| Poly::from_codes(f.clone(), &v.iter().map(|&c| (c % q) as u64).collect::<Vec<_>>()).unwrap();
        let (pf, phi) = (mk(&fc), mk(&pc));
        let verdict = permtool::local_certify(&pf, &phi).unwrap();
        prop_assert_eq!(verdict.is_bijective(), is_permutation(&pf));
        if verdict.is_bijective() {
            let psi = permtool::induced_psi(&pf, &phi).unwrap();
            prop_assert_eq!(psi.after(&pf.tabulate()), phi.tabulate());
            prop_assert!(permtool::count_compatible_bijections(&phi.tabulate(), &psi) > 0u32.into());
        }
    }

    #[test]
    fn family_validation_is_sound(variant in prop_oneof![Just(Variant::I), Just(Variant::II)], a in 0u32..9, u in 0u32..9, v in 0u32..9, c in 0u32..9, b1 in 0u32..9, b2 in 0u32..9) {
        let view = family::quadratic_view(3, DEFAULT_MAX_ORDER).unwrap();
        let f = view.big().clone();
        let p = FamilyParams::new(view, variant, f.element(a), f.element(u), f.element(v), f.element(c), vec![f.element(b1), f.element(b2)]).unwrap();
        if family::validate_params(&p).valid {
            let built = family::build_f(&p).unwrap();
            prop_assert!(is_permutation(&built));
            let inv = family::closed_inverse(&p).unwrap();
            prop_assert!(built.compose(&inv).is_identity());
        } else {
            prop_assert!(family::build_f(&p).is_err());
        }
    }

    #[test]
    fn expression_json_round_trip(depth in 1usize..5, seed in any::<u64>()) {
        let mut e = ExprTree::var((seed % 3) as usize);
        for k in 0..depth {
            e = match (seed >> (2 * k)) % 3 {
                0 => ExprTree::add(vec![e, ExprTree::constant(1)]),
                1 => ExprTree::mul(vec![ExprTree::var(0), e]),
                _ => ExprTree::pow(e, k as u64 + 2),
            };
        }
        prop_assert_eq!(ExprTree::from_json(&e.to_json()).unwrap(), e);
    }
}

#[test]
fn family_filter_exhaustive_at_q2() {
    // every candidate tuple over F_4 through the itemized validator
    let view = family::quadratic_view(2, DEFAULT_MAX_ORDER).unwrap();
    let f = view.big().clone();
    for variant in [Variant::I, Variant::II] {
        let mut valid = 0;
        for codes in (0..5).map(|_| 0u32..4).multi_cartesian_product() {
            let e = |i: usize| f.element(codes[i]);
            let p = FamilyParams::new(view.clone(), variant, e(0), e(1), e(2), e(3), vec![e(4)]).unwrap();
            if family::validate_params(&p).valid {
                valid += 1;
                assert!(is_permutation(&family::build_f(&p).unwrap()));
            }
        }
        assert_eq!(valid, 24);
    }
}
