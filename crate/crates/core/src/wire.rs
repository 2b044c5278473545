//! JSON shapes shared by the library and the command line.
//!
//! Everything is expressed through integer element encodings so that a
//! payload can be fed back into the corresponding constructor unchanged.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::fpoly::Poly;
use crate::gf::{FieldCtx, Field};
use crate::linearized::LinearizedPoly;

/// Output schema version stamped on every CLI payload.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDesc {
    pub p: u32,
    pub m: u32,
    /// Monic modulus, constant term first. Omitted means canonical.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<u32>>,
}

impl FieldDesc {
    pub fn of(field: &FieldCtx) -> Self {
        FieldDesc {
            p: field.p(),
            m: field.m(),
            modulus: Some(field.modulus().to_vec()),
        }
    }

    pub fn build(&self, bound: u64) -> Result<Field> {
        FieldCtx::with_bound(self.p, self.m, self.modulus.as_deref(), bound)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyDesc {
    pub field: FieldDesc,
    pub coeffs: Vec<u32>,
}

impl PolyDesc {
    pub fn of(f: &Poly) -> Self {
        PolyDesc {
            field: FieldDesc::of(f.field()),
            coeffs: f.codes(),
        }
    }

    pub fn build(&self, bound: u64) -> Result<Poly> {
        let field = self.field.build(bound)?;
        let codes: Vec<u64> = self.coeffs.iter().map(|&c| c as u64).collect();
        Poly::from_codes(field, &codes)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinDesc {
    pub q: u32,
    pub n: u32,
    /// `a_0 … a_{n−1}`.
    pub a: Vec<u32>,
}

impl LinDesc {
    pub fn of(l: &LinearizedPoly) -> Self {
        LinDesc {
            q: l.view().q(),
            n: l.view().n(),
            a: l.codes(),
        }
    }
}

/// Family parameters on the wire.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamsDesc {
    pub q: u32,
    pub variant: crate::family::Variant,
    pub a: u32,
    pub u: u32,
    pub v: u32,
    pub c: u32,
    pub b: Vec<u32>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::Variant;

    #[test]
    fn params_round_trip() {
        let p = ParamsDesc {
            q: 2,
            variant: Variant::II,
            a: 1,
            u: 1,
            v: 0,
            c: 1,
            b: vec![0],
        };
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"{"q":2,"variant":"II","a":1,"u":1,"v":0,"c":1,"b":[0]}"#);
        assert_eq!(serde_json::from_str::<ParamsDesc>(&s).unwrap(), p);
    }

    #[test]
    fn poly_round_trip() {
        let d: PolyDesc = serde_json::from_str(r#"{"field":{"p":2,"m":2},"coeffs":[0,0,1]}"#).unwrap();
        let f = d.build(65536).unwrap();
        assert_eq!(f.codes(), vec![0, 0, 1]);
        assert_eq!(PolyDesc::of(&f).field.modulus, Some(vec![1, 1, 1]));
    }
}
