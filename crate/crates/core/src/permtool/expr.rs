//! Combiner expressions `F(y_1, …, y_t)` for local inversion.
//!
//! Wire form is a nested JSON array:
//! `["add", ["var", 0], ["pow", ["var", 1], 2]]`, with `["const", code]` for
//! field constants. `add` and `mul` take one or more operands.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::gf::{FieldCtx, FieldElem};

pub const DEFAULT_MAX_DEPTH: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExprTree {
    Var(usize),
    /// Element encoding.
    Const(u32),
    Add(Vec<ExprTree>),
    Mul(Vec<ExprTree>),
    Pow(Box<ExprTree>, u64),
}

impl ExprTree {
    pub fn var(i: usize) -> Self {
        ExprTree::Var(i)
    }

    pub fn constant(c: u32) -> Self {
        ExprTree::Const(c)
    }

    pub fn add(terms: Vec<ExprTree>) -> Self {
        ExprTree::Add(terms)
    }

    pub fn mul(terms: Vec<ExprTree>) -> Self {
        ExprTree::Mul(terms)
    }

    pub fn pow(base: ExprTree, e: u64) -> Self {
        ExprTree::Pow(Box::new(base), e)
    }

    pub fn depth(&self) -> usize {
        match self {
            ExprTree::Var(_) | ExprTree::Const(_) => 1,
            ExprTree::Add(ts) | ExprTree::Mul(ts) => {
                1 + ts.iter().map(ExprTree::depth).max().unwrap_or(0)
            }
            ExprTree::Pow(b, _) => 1 + b.depth(),
        }
    }

    /// Largest variable index plus one.
    pub fn arity(&self) -> usize {
        match self {
            ExprTree::Var(i) => i + 1,
            ExprTree::Const(_) => 0,
            ExprTree::Add(ts) | ExprTree::Mul(ts) => {
                ts.iter().map(ExprTree::arity).max().unwrap_or(0)
            }
            ExprTree::Pow(b, _) => b.arity(),
        }
    }

    /// Structural check against `t` variables and a field.
    pub fn validate(&self, t: usize, field: &FieldCtx, max_depth: usize) -> Result<()> {
        if self.depth() > max_depth {
            return Err(Error::Expr(format!("depth exceeds {max_depth}")));
        }
        self.validate_inner(t, field)
    }

    fn validate_inner(&self, t: usize, field: &FieldCtx) -> Result<()> {
        match self {
            ExprTree::Var(i) if *i >= t => Err(Error::Expr(format!(
                "variable y{i} but only {t} maps supplied"
            ))),
            ExprTree::Var(_) => Ok(()),
            ExprTree::Const(c) => field.elem(*c as u64).map(|_| ()),
            ExprTree::Add(ts) | ExprTree::Mul(ts) if ts.is_empty() => {
                Err(Error::Expr("empty operand list".into()))
            }
            ExprTree::Add(ts) | ExprTree::Mul(ts) => {
                ts.iter().try_for_each(|e| e.validate_inner(t, field))
            }
            ExprTree::Pow(b, _) => b.validate_inner(t, field),
        }
    }

    /// Strict evaluation; call [`ExprTree::validate`] first.
    pub fn eval(&self, field: &FieldCtx, vars: &[FieldElem]) -> FieldElem {
        match self {
            ExprTree::Var(i) => vars[*i],
            ExprTree::Const(c) => field.element(*c),
            ExprTree::Add(ts) => ts
                .iter()
                .fold(field.zero(), |acc, e| field.add(acc, e.eval(field, vars))),
            ExprTree::Mul(ts) => ts
                .iter()
                .fold(field.one(), |acc, e| field.mul(acc, e.eval(field, vars))),
            ExprTree::Pow(b, e) => field.pow(b.eval(field, vars), *e),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            ExprTree::Var(i) => json!(["var", i]),
            ExprTree::Const(c) => json!(["const", c]),
            ExprTree::Add(ts) => {
                let mut v = vec![json!("add")];
                v.extend(ts.iter().map(ExprTree::to_json));
                Value::Array(v)
            }
            ExprTree::Mul(ts) => {
                let mut v = vec![json!("mul")];
                v.extend(ts.iter().map(ExprTree::to_json));
                Value::Array(v)
            }
            ExprTree::Pow(b, e) => json!(["pow", b.to_json(), e]),
        }
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        Self::from_json_depth(v, 0)
    }

    fn from_json_depth(v: &Value, depth: usize) -> Result<Self> {
        if depth > DEFAULT_MAX_DEPTH {
            return Err(Error::Expr(format!("depth exceeds {DEFAULT_MAX_DEPTH}")));
        }
        let bad = || Error::Expr(format!("malformed node {v}"));
        let arr = v.as_array().ok_or_else(bad)?;
        let head = arr.first().and_then(Value::as_str).ok_or_else(bad)?;
        let int_at = |i: usize| arr.get(i).and_then(Value::as_u64).ok_or_else(bad);
        match head {
            "var" if arr.len() == 2 => Ok(ExprTree::Var(int_at(1)? as usize)),
            "const" if arr.len() == 2 => {
                let c = int_at(1)?;
                u32::try_from(c).map(ExprTree::Const).map_err(|_| bad())
            }
            "pow" if arr.len() == 3 => Ok(ExprTree::Pow(
                Box::new(Self::from_json_depth(&arr[1], depth + 1)?),
                int_at(2)?,
            )),
            "add" | "mul" if arr.len() >= 2 => {
                let ts = arr[1..]
                    .iter()
                    .map(|x| Self::from_json_depth(x, depth + 1))
                    .collect::<Result<Vec<_>>>()?;
                Ok(if head == "add" {
                    ExprTree::Add(ts)
                } else {
                    ExprTree::Mul(ts)
                })
            }
            _ => Err(bad()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::make_field;

    #[test]
    fn parse_and_eval() {
        let f = make_field(2, 2, None).unwrap();
        let v: Value = serde_json::from_str(r#"["add", ["var",0], ["pow",["var",1],2]]"#).unwrap();
        let e = ExprTree::from_json(&v).unwrap();
        assert_eq!(e, ExprTree::add(vec![ExprTree::var(0), ExprTree::pow(ExprTree::var(1), 2)]));
        assert_eq!(e.to_json(), v);
        assert_eq!(e.arity(), 2);
        e.validate(2, &f, DEFAULT_MAX_DEPTH).unwrap();
        assert!(e.validate(1, &f, DEFAULT_MAX_DEPTH).is_err());
        // z + z^2 = z + w = 1
        let out = e.eval(&f, &[f.element(2), f.element(2)]);
        assert_eq!(out, f.one());
    }

    #[test]
    fn rejects_malformed() {
        for bad in [r#"["add"]"#, r#"["var"]"#, r#"["frob",["var",0]]"#, r#"5"#, r#"["const",-1]"#] {
            let v: Value = serde_json::from_str(bad).unwrap();
            assert!(ExprTree::from_json(&v).is_err(), "{bad}");
        }
        let f = make_field(2, 2, None).unwrap();
        assert!(ExprTree::constant(9).validate(0, &f, 64).is_err());
        let mut deep = ExprTree::var(0);
        for _ in 0..70 {
            deep = ExprTree::pow(deep, 1);
        }
        assert!(deep.validate(1, &f, DEFAULT_MAX_DEPTH).is_err());
        assert!(ExprTree::from_json(&deep.to_json()).is_err());
    }
}
