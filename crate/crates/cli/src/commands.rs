use anyhow::{anyhow, bail, Context, Result};
use serde_json::{json, Value};

use ffperm::family::{self, FamilyParams, Variant};
use ffperm::gf::{prime_power, FieldCtx};
use ffperm::linearized::{self, LinearizedPoly, TraceOptions};
use ffperm::permtool::{self, ExprTree, LocalVerdict};
use ffperm::wire::{FieldDesc, LinDesc, ParamsDesc};
use ffperm::{Error, Field, FieldElem, Poly, SubfieldView, ValueTable};

use crate::output::render;
use crate::{Config, ExportCmd, FamilyCmd, FieldArgs, FieldCmd, LinArgs, LinCmd, MultCmd, ParamArgs, PolyArgs, PpCmd, SboxFormat};

pub struct Outcome {
    pub rendered: String,
    /// Negative mathematical verdict: exit status 1.
    pub negative: bool,
}

impl Outcome {
    fn new(cfg: &Config, payload: Value, negative: bool) -> Self {
        Outcome {
            rendered: render(cfg.format, payload),
            negative,
        }
    }
}

fn parse_codes(s: &str) -> Result<Vec<u64>> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<u64>()
                .with_context(|| format!("malformed element encoding {t:?}"))
        })
        .collect()
}

fn parse_u32s(s: &str) -> Result<Vec<u32>> {
    parse_codes(s)?
        .into_iter()
        .map(|c| u32::try_from(c).map_err(|_| anyhow!("encoding {c} out of range")))
        .collect()
}

fn build_field(p: u32, m: u32, modulus: Option<&str>, bound: u64) -> Result<Field> {
    let modulus = modulus.map(parse_u32s).transpose()?;
    Ok(FieldCtx::with_bound(p, m, modulus.as_deref(), bound)?)
}

fn field_of(args: &FieldArgs, bound: u64) -> Result<Field> {
    let parts = parse_codes(&args.field).context("--field expects P,M")?;
    let [p, m] = parts[..] else {
        bail!("--field expects P,M, got {:?}", args.field);
    };
    build_field(p as u32, m as u32, args.modulus.as_deref(), bound)
}

fn poly_of(args: &PolyArgs, bound: u64) -> Result<Poly> {
    let field = field_of(&args.field, bound)?;
    Ok(Poly::from_codes(field, &parse_codes(&args.poly)?)?)
}

fn prime_field_of(q: u64, bound: u64) -> Result<Field> {
    let (p, k) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
    Ok(FieldCtx::with_bound(p, k, None, bound)?)
}

fn elems(field: &FieldCtx, codes: &[u64]) -> Result<Vec<FieldElem>> {
    codes.iter().map(|&c| Ok(field.elem(c)?)).collect()
}

fn codes_of(v: &[FieldElem]) -> Vec<u32> {
    v.iter().map(|e| e.code()).collect()
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

fn not_pp_witness(f: &Poly) -> Value {
    match first_collision(&f.tabulate()) {
        Some((x1, x2)) => json!({"x1": x1, "x2": x2, "value": f.eval(f.field().element(x1)).code()}),
        None => Value::Null,
    }
}

pub fn field(cfg: &Config, cmd: FieldCmd) -> Result<Outcome> {
    let FieldCmd::Show { p, m, modulus } = cmd;
    let f = build_field(p, m, modulus.as_deref(), cfg.max_q)?;
    let payload = json!({
        "field": FieldDesc::of(&f),
        "order": f.order(),
        "primitive_element": f.primitive_element().code(),
        "z": f.generator_root().code(),
    });
    Ok(Outcome::new(cfg, payload, false))
}

pub fn pp(cfg: &Config, cmd: PpCmd) -> Result<Outcome> {
    match cmd {
        PpCmd::Verify(args) => {
            let f = poly_of(&args, cfg.max_q)?;
            let pp = permtool::is_permutation(&f);
            let mut payload = json!({"pp": pp, "poly": f.codes()});
            if !pp {
                payload["witness"] = not_pp_witness(&f);
            }
            Ok(Outcome::new(cfg, payload, !pp))
        }
        PpCmd::Invert(args) => {
            let f = poly_of(&args, cfg.max_q)?;
            match permtool::brute_inverse(&f) {
                Ok(inv) => Ok(Outcome::new(
                    cfg,
                    json!({"pp": true, "poly": f.codes(), "inverse": inv.codes()}),
                    false,
                )),
                Err(Error::NotPermutation) => Ok(Outcome::new(
                    cfg,
                    json!({"pp": false, "poly": f.codes(), "witness": not_pp_witness(&f)}),
                    true,
                )),
                Err(e) => Err(e.into()),
            }
        }
        PpCmd::Image(args) => {
            let f = poly_of(&args, cfg.max_q)?;
            let image = codes_of(&permtool::image(&f));
            let payload = json!({"poly": f.codes(), "size": image.len(), "image": image});
            Ok(Outcome::new(cfg, payload, false))
        }
        PpCmd::Local { poly, phi } => {
            let f = poly_of(&poly, cfg.max_q)?;
            let phi = Poly::from_codes(f.field().clone(), &parse_codes(&phi)?)?;
            let verdict = permtool::local_certify(&f, &phi)?;
            let mut payload = serde_json::to_value(&verdict)?;
            let negative = match &verdict {
                LocalVerdict::Bijective(dec) => {
                    let psi = dec.psi.as_ref().expect("bijective verdicts carry psi");
                    payload["compatible_bijections"] =
                        json!(permtool::count_compatible_bijections(&dec.phi, psi).to_string());
                    false
                }
                LocalVerdict::NotBijective(_) => true,
            };
            Ok(Outcome::new(cfg, payload, negative))
        }
        PpCmd::LocalInverse { poly, psi, combiner } => {
            let f = poly_of(&poly, cfg.max_q)?;
            let tables = psi
                .iter()
                .map(|t| Ok(ValueTable::new(parse_u32s(t)?)))
                .collect::<Result<Vec<_>>>()?;
            let tree: Value = serde_json::from_str(&combiner).context("--combiner is not JSON")?;
            let tree = ExprTree::from_json(&tree)?;
            match permtool::local_inverse(&f, &tables, &tree) {
                Ok(inv) => Ok(Outcome::new(cfg, json!({"ok": true, "inverse": inv.codes()}), false)),
                Err(Error::IdentityFails { x, got }) => Ok(Outcome::new(
                    cfg,
                    json!({"ok": false, "witness": {"x": x, "combined": got}}),
                    true,
                )),
                Err(Error::NotPermutation) => Ok(Outcome::new(
                    cfg,
                    json!({"ok": false, "pp": false, "witness": not_pp_witness(&f)}),
                    true,
                )),
                Err(e) => Err(e.into()),
            }
        }
    }
}

fn params_of(args: &ParamArgs, bound: u64) -> Result<FamilyParams> {
    let variant: Variant = args.variant.parse()?;
    let desc = ParamsDesc {
        q: u32::try_from(args.q).context("q out of range")?,
        variant,
        a: args.a,
        u: args.u,
        v: args.v,
        c: args.c,
        b: parse_u32s(&args.b)?,
    };
    Ok(FamilyParams::from_desc(&desc, bound)?)
}

pub fn family(cfg: &Config, cmd: FamilyCmd) -> Result<Outcome> {
    match cmd {
        FamilyCmd::Validate(args) => {
            let p = params_of(&args, cfg.max_q)?;
            let verdict = family::validate_params(&p);
            let payload = json!({
                "params": p.to_desc(),
                "valid": verdict.valid,
                "failures": verdict.failures,
            });
            Ok(Outcome::new(cfg, payload, !verdict.valid))
        }
        FamilyCmd::Build(args) => {
            let p = params_of(&args, cfg.max_q)?;
            let f = family::build_f(&p)?;
            Ok(Outcome::new(cfg, json!({"params": p.to_desc(), "f": f.codes()}), false))
        }
        FamilyCmd::Invert(args) => {
            let p = params_of(&args, cfg.max_q)?;
            let f = family::build_f(&p)?;
            let inv = family::closed_inverse(&p)?;
            let payload = json!({"params": p.to_desc(), "f": f.codes(), "inverse": inv.codes()});
            Ok(Outcome::new(cfg, payload, false))
        }
        FamilyCmd::Enumerate { q, variant, dedupe } => {
            let variant: Variant = variant.parse()?;
            let view = family::quadratic_view(q, cfg.max_q)?;
            let report = family::enumerate_family(&view, variant, dedupe, cfg.exec())?;
            let negative = !report.failures.is_empty();
            Ok(Outcome::new(cfg, serde_json::to_value(&report)?, negative))
        }
    }
}

fn view_of(q: u64, n: u32, bound: u64) -> Result<SubfieldView> {
    Ok(SubfieldView::from_q(q, n, bound)?)
}

fn basis_of(view: &SubfieldView, arg: Option<&str>) -> Result<Vec<FieldElem>> {
    match arg {
        Some(s) => elems(view.big(), &parse_codes(s)?),
        None => Ok(view.standard_basis()),
    }
}

fn lin_of(args: &LinArgs, bound: u64) -> Result<(LinearizedPoly, Vec<FieldElem>)> {
    let view = view_of(args.q, args.n, bound)?;
    let theta = basis_of(&view, args.theta.as_deref())?;
    let l = LinearizedPoly::from_codes(view, &parse_codes(&args.coeffs)?)?;
    Ok((l, theta))
}

fn kernel_witness(l: &LinearizedPoly) -> Option<u32> {
    l.view()
        .big()
        .nonzero_elements()
        .find(|&x| l.eval(x).is_zero())
        .map(|x| x.code())
}

pub fn lin(cfg: &Config, cmd: LinCmd) -> Result<Outcome> {
    let opts = TraceOptions {
        seed: cfg.seed,
        ..TraceOptions::default()
    };
    match cmd {
        LinCmd::Invert(args) => {
            let (l, _) = lin_of(&args, cfg.max_q)?;
            let dc = linearized::det_and_cofactors(&linearized::dickson(&l))?;
            let base = json!({
                "map": LinDesc::of(&l),
                "det": dc.det.code(),
                "cofactors": codes_of(&dc.cofactors),
            });
            match linearized::wu_inverse(&l) {
                Ok(inv) => {
                    let mut payload = base;
                    payload["pp"] = json!(true);
                    payload["inverse"] = json!(inv.codes());
                    Ok(Outcome::new(cfg, payload, false))
                }
                Err(Error::SingularDickson) => {
                    let mut payload = base;
                    payload["pp"] = json!(false);
                    payload["kernel_element"] = json!(kernel_witness(&l));
                    Ok(Outcome::new(cfg, payload, true))
                }
                Err(e) => Err(e.into()),
            }
        }
        LinCmd::Criteria(args) => {
            let (l, theta) = lin_of(&args, cfg.max_q)?;
            let report = linearized::five_criteria(&l, &theta, opts, cfg.exec())?;
            let mut payload = serde_json::to_value(&report)?;
            payload["map"] = serde_json::to_value(LinDesc::of(&l))?;
            payload["theta"] = json!(codes_of(&theta));
            let negative = !report.bijective || !report.agree;
            if !report.bijective {
                payload["kernel_element"] = json!(kernel_witness(&l));
            }
            Ok(Outcome::new(cfg, payload, negative))
        }
        LinCmd::TraceForm(args) => {
            let (l, theta) = lin_of(&args, cfg.max_q)?;
            let tf = linearized::to_trace_form(&l, &theta)?;
            let d1 = linearized::d1_check(&tf)?;
            let payload = json!({
                "map": LinDesc::of(&l),
                "theta": codes_of(tf.theta()),
                "omega": codes_of(tf.omega()),
                "omega_basis": linearized::pp_by_basis(&tf)?,
                "d1": d1.matrix.to_codes(),
                "d1_det": d1.det.code(),
                "eta": codes_of(&d1.eta),
            });
            Ok(Outcome::new(cfg, payload, false))
        }
        LinCmd::Degenerate { q, n, theta, v, a } => {
            let view = view_of(q, n, cfg.max_q)?;
            let theta = basis_of(&view, theta.as_deref())?;
            let v = basis_of(&view, v.as_deref())?;
            let a = match a {
                Some(s) => elems(view.big(), &parse_codes(&s)?)?,
                None => vec![view.big().one(); n as usize],
            };
            let l = linearized::degenerate_map(&theta, &v, &a, &view)?;
            let field = view.big();
            let psis: Vec<ValueTable> = ffperm::gf::dual_basis(&v, &view)?
                .into_iter()
                .map(|e| ValueTable::from_fn(field, |x| view.trace(field.mul(e, x))))
                .collect();
            let audit = permtool::local_pp_audit(field, &psis, [l.to_poly()], cfg.exec())?;
            let payload = json!({
                "map": LinDesc::of(&l),
                "image": l.tabulate().image(),
                "pp": false,
                "dual_compositions_surjective": true,
                "audit_counterexamples": audit.counterexamples.len(),
                "warnings": audit.warnings,
            });
            Ok(Outcome::new(cfg, payload, false))
        }
        LinCmd::MinWitness { q, n } => {
            let view = view_of(q, n, cfg.max_q)?;
            let (size, set) = linearized::min_trace_witness(&view, cfg.exec())?;
            let payload = json!({"q": q, "n": n, "size": size, "witness": codes_of(&set)});
            Ok(Outcome::new(cfg, payload, false))
        }
    }
}

pub fn mult(cfg: &Config, cmd: MultCmd) -> Result<Outcome> {
    let MultCmd::Check { q, r, s, h } = cmd;
    let field = prime_field_of(q, cfg.max_q)?;
    let h = Poly::from_codes(field.clone(), &parse_codes(&h)?)?;
    let verdict = family::mult_check(&field, r, s, &h)?;
    let mut payload = serde_json::to_value(&verdict)?;
    payload["q"] = json!(q);
    payload["r"] = json!(r);
    payload["s"] = json!(s);
    payload["h"] = json!(h.codes());
    Ok(Outcome::new(cfg, payload, !verdict.pp))
}

pub fn export(cfg: &Config, cmd: ExportCmd) -> Result<Outcome> {
    let ExportCmd::Sbox { poly, sbox_format } = cmd;
    let f = poly_of(&poly, cfg.max_q)?;
    let table = f.tabulate();
    let rendered = match sbox_format {
        SboxFormat::Csv => {
            let mut s = String::from("x,f(x)\n");
            for (x, y) in table.as_slice().iter().enumerate() {
                s.push_str(&format!("{x},{y}\n"));
            }
            s
        }
        SboxFormat::CArray => {
            let body = table
                .as_slice()
                .iter()
                .map(u32::to_string)
                .collect::<Vec<_>>()
                .join(", ");
            format!("const unsigned sbox[{}] = {{{body}}};\n", table.len())
        }
    };
    Ok(Outcome {
        rendered,
        negative: false,
    })
}
