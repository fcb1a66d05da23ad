//! JSON forms of contexts, elements and code descriptors.
//!
//! Field elements are either an integer encoding sum c_i p^i or a
//! coefficient list (constant first, zero-padded). Output uses integers when
//! m = 1 and lists otherwise.

use serde_json::{json, Map, Value};

use crate::codes::{CodeDescriptor, CodeKind, CodeSpec, Diagnostic, DualSpec, ZSeries};
use crate::error::{Error, Result};
use crate::gf::{FieldCtx, FieldElem};
use crate::poly::{RPoly, Ring};
use crate::quotient::{QElem, QuotientCtx};
use crate::ring_r::RElem;

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn get_u64(v: &Value, key: &str) -> Result<Option<u64>> {
    match v.get(key) {
        None | Some(Value::Null) => Ok(None),
        Some(x) => x
            .as_u64()
            .map(Some)
            .ok_or_else(|| parse_err(format!("{key} must be a non-negative integer"))),
    }
}

fn need_u64(v: &Value, key: &str) -> Result<u64> {
    get_u64(v, key)?.ok_or_else(|| parse_err(format!("missing {key}")))
}

fn to_u32(x: u64, what: &str) -> Result<u32> {
    u32::try_from(x).map_err(|_| parse_err(format!("{what} out of range")))
}

pub fn field_from_json(v: &Value) -> Result<FieldCtx> {
    let p = to_u32(need_u64(v, "p")?, "p")?;
    let m = get_u64(v, "m")?.unwrap_or(1) as usize;
    let modulus = match v.get("modulus") {
        None | Some(Value::Null) => None,
        Some(Value::Array(a)) => Some(
            a.iter()
                .map(|c| c.as_u64().ok_or_else(|| parse_err("modulus entries must be integers")).and_then(|c| to_u32(c, "modulus entry")))
                .collect::<Result<Vec<_>>>()?,
        ),
        Some(_) => return Err(parse_err("modulus must be a list")),
    };
    FieldCtx::new(p, m, modulus)
}

pub fn field_to_json(f: &FieldCtx) -> Value {
    json!({"p": f.p(), "m": f.m(), "modulus": f.modulus()})
}

pub fn elem_from_json(f: &FieldCtx, v: &Value) -> Result<FieldElem> {
    match v {
        Value::Number(n) => {
            if let Some(k) = n.as_u64() {
                if k >= f.q() {
                    return Err(parse_err(format!("encoding {k} exceeds field size {}", f.q())));
                }
                Ok(f.decode(k))
            } else if let Some(k) = n.as_i64() {
                if f.m() != 1 {
                    return Err(parse_err("negative integers only allowed for prime fields"));
                }
                Ok(f.from_int(k))
            } else {
                Err(parse_err("field element must be an integer"))
            }
        }
        Value::Array(a) => {
            let cs = a
                .iter()
                .map(|c| c.as_u64().ok_or_else(|| parse_err("coefficients must be integers")).and_then(|c| to_u32(c, "coefficient")))
                .collect::<Result<Vec<_>>>()?;
            f.elem(&cs)
        }
        _ => Err(parse_err("field element must be an integer or a list")),
    }
}

pub fn elem_to_json(f: &FieldCtx, e: &FieldElem) -> Value {
    if f.m() == 1 {
        json!(e.coeffs()[0])
    } else {
        json!(e.coeffs())
    }
}

/// Accepts {"a1", "a2", "a3", "a4"} (missing parts are zero) or a 4-element list.
pub fn relem_from_json(f: &FieldCtx, v: &Value) -> Result<RElem> {
    let parts: Vec<FieldElem> = match v {
        Value::Object(o) => {
            if let Some(k) = o.keys().find(|k| !["a1", "a2", "a3", "a4"].contains(&k.as_str())) {
                return Err(parse_err(format!("unknown key {k:?} in ring element")));
            }
            ["a1", "a2", "a3", "a4"]
                .iter()
                .map(|k| o.get(*k).map_or(Ok(f.decode(0)), |x| elem_from_json(f, x)))
                .collect::<Result<_>>()?
        }
        Value::Array(a) if a.len() == 4 => a.iter().map(|x| elem_from_json(f, x)).collect::<Result<_>>()?,
        _ => return Err(parse_err("ring element must be an object or a 4-element list")),
    };
    let mut it = parts.into_iter();
    let mut next = || it.next().expect("four parts");
    Ok(RElem::new(next(), next(), next(), next()))
}

pub fn relem_to_json(f: &FieldCtx, e: &RElem) -> Value {
    json!({
        "a1": elem_to_json(f, &e.a1),
        "a2": elem_to_json(f, &e.a2),
        "a3": elem_to_json(f, &e.a3),
        "a4": elem_to_json(f, &e.a4),
    })
}

pub fn ctx_from_parts(field: &Value, s: u32, alpha: &Value) -> Result<QuotientCtx> {
    let f = field_from_json(field)?;
    let a = relem_from_json(&f, alpha)?;
    QuotientCtx::new(f, s, a)
}

pub fn ctx_from_json(v: &Value) -> Result<QuotientCtx> {
    let field = v.get("field").ok_or_else(|| parse_err("missing field"))?;
    let s = to_u32(need_u64(v, "s")?, "s")?;
    let alpha = v.get("alpha").ok_or_else(|| parse_err("missing alpha"))?;
    ctx_from_parts(field, s, alpha)
}

pub fn ctx_to_json(ctx: &QuotientCtx) -> Value {
    let f = ctx.field();
    json!({
        "field": field_to_json(f),
        "s": ctx.s(),
        "alpha": relem_to_json(f, ctx.alpha()),
    })
}

pub fn rpoly_to_json(f: &FieldCtx, p: &RPoly) -> Value {
    Value::Array(p.coeffs().iter().map(|c| relem_to_json(f, c)).collect())
}

pub fn qelem_to_json(ctx: &QuotientCtx, a: &QElem) -> Value {
    rpoly_to_json(ctx.field(), &ctx.to_rpoly(a))
}

fn format_elem(f: &FieldCtx, e: &FieldElem) -> String {
    if f.m() == 1 {
        return e.coeffs()[0].to_string();
    }
    let terms: Vec<String> = e
        .coeffs()
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, &c)| c != 0)
        .map(|(i, &c)| match (i, c) {
            (0, c) => c.to_string(),
            (1, 1) => "w".into(),
            (1, c) => format!("{c}w"),
            (i, 1) => format!("w^{i}"),
            (i, c) => format!("{c}w^{i}"),
        })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join("+")
    }
}

/// Human-readable ring element, e.g. "2+3v+5uv".
pub fn format_relem(f: &FieldCtx, e: &RElem) -> String {
    let mut parts = Vec::new();
    for (c, name) in e.comps().into_iter().zip(["", "u", "v", "uv"]) {
        if f.is_zero(c) {
            continue;
        }
        let cs = format_elem(f, c);
        let cs = if cs.contains('+') { format!("({cs})") } else { cs };
        parts.push(match (cs.as_str(), name) {
            (c, "") => c.to_string(),
            ("1", n) => n.to_string(),
            (c, n) => format!("{c}{n}"),
        });
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join("+")
    }
}

/// Human-readable polynomial, highest degree first, e.g. "x^7 + 6".
pub fn format_rpoly(f: &FieldCtx, p: &RPoly) -> String {
    let mut terms = Vec::new();
    for (k, c) in p.coeffs().iter().enumerate().rev() {
        if c.comps().iter().all(|x| f.is_zero(x)) {
            continue;
        }
        let cs = format_relem(f, c);
        let cs = if cs.contains('+') && k > 0 { format!("({cs})") } else { cs };
        let mono = match k {
            0 => String::new(),
            1 => "x".into(),
            k => format!("x^{k}"),
        };
        terms.push(match (cs.as_str(), k) {
            (c, 0) => c.to_string(),
            ("1", _) => mono,
            (c, _) => format!("{c}{mono}"),
        });
    }
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

fn z_from_json(f: &FieldCtx, v: Option<&Value>) -> Result<ZSeries> {
    let Some(v) = v.filter(|v| !v.is_null()) else {
        return Ok(ZSeries::zero());
    };
    let arr = v.as_array().ok_or_else(|| parse_err("z must be a list of digits"))?;
    let digits = arr
        .iter()
        .map(|d| {
            let d = d.as_array().filter(|d| d.len() == 3).ok_or_else(|| parse_err("z digits are [z0, z1, z2]"))?;
            Ok([elem_from_json(f, &d[0])?, elem_from_json(f, &d[1])?, elem_from_json(f, &d[2])?])
        })
        .collect::<Result<_>>()?;
    Ok(ZSeries { digits })
}

/// {"kind": "A0"|"A1"|"B"|"C"|"D", "ell", "t", "mu", "z": [[z0, z1, z2], ...]}
pub fn spec_from_json(f: &FieldCtx, v: &Value) -> Result<CodeSpec> {
    let kind = CodeKind::parse(v.get("kind").and_then(Value::as_str).ok_or_else(|| parse_err("missing kind"))?)?;
    let ell = get_u64(v, "ell")?.unwrap_or(0) as usize;
    let t = get_u64(v, "t")?.unwrap_or(0) as usize;
    let mu = get_u64(v, "mu")?.map(|x| x as usize);
    let z = z_from_json(f, v.get("z"))?;
    Ok(match kind {
        CodeKind::A0 => CodeSpec::a0(),
        CodeKind::A1 => CodeSpec::a1(),
        CodeKind::B => CodeSpec::b(ell),
        CodeKind::C => CodeSpec::c(ell, t, z),
        CodeKind::D => CodeSpec { kind, ell, t, mu, z },
    })
}

pub fn spec_to_json(f: &FieldCtx, s: &CodeSpec) -> Value {
    let mut o = Map::new();
    o.insert("kind".into(), json!(s.kind.tag()));
    if s.kind != CodeKind::A0 && s.kind != CodeKind::A1 {
        o.insert("ell".into(), json!(s.ell));
    }
    if matches!(s.kind, CodeKind::C | CodeKind::D) {
        o.insert("t".into(), json!(s.t));
        let z: Vec<Value> = s
            .z
            .digits
            .iter()
            .map(|d| json!([elem_to_json(f, &d[0]), elem_to_json(f, &d[1]), elem_to_json(f, &d[2])]))
            .collect();
        o.insert("z".into(), Value::Array(z));
    }
    if let Some(mu) = s.mu {
        o.insert("mu".into(), json!(mu));
    }
    Value::Object(o)
}

pub fn diagnostic_to_json(d: &Diagnostic) -> Value {
    json!({"kind": d.kind, "branch": d.branch, "message": d.message})
}

pub fn dual_to_json(d: &DualSpec) -> Value {
    let f = d.ambient.field();
    json!({
        "branch": d.branch,
        "status": d.status.tag(),
        "ambient": ctx_to_json(&d.ambient),
        "generators": d.generators.iter().map(|g| rpoly_to_json(f, g)).collect::<Vec<_>>(),
        "generators_text": d.generators.iter().map(|g| format_rpoly(f, g)).collect::<Vec<_>>(),
    })
}

pub fn descriptor_to_json(ctx: &QuotientCtx, d: &CodeDescriptor) -> Value {
    json!({
        "spec": spec_to_json(ctx.field(), &d.spec),
        "im": d.im,
        "res_exp": d.res_exp,
        "tor_exp": d.tor_exp,
        "dim_fp": d.dim_fp,
        "eta": d.eta.to_string(),
        "dual": dual_to_json(&d.dual),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_roundtrip() {
        let f = field_from_json(&json!({"p": 2, "m": 2})).unwrap();
        assert_eq!(f.modulus(), &[1, 1, 1]);
        assert_eq!(field_from_json(&field_to_json(&f)).unwrap(), f);
        assert!(matches!(field_from_json(&json!({"p": 4})), Err(Error::NotPrime(4))));
        assert!(matches!(field_from_json(&json!({"m": 1})), Err(Error::Parse(_))));
    }

    #[test]
    fn elements_roundtrip() {
        let f = field_from_json(&json!({"p": 3, "m": 2, "modulus": [2, 2, 1]}));
        assert!(matches!(f, Err(Error::PEqualsThree)));
        let f = field_from_json(&json!({"p": 5, "m": 2})).unwrap();
        let a = elem_from_json(&f, &json!(7)).unwrap();
        assert_eq!(a, elem_from_json(&f, &json!([2, 1])).unwrap());
        assert_eq!(elem_from_json(&f, &elem_to_json(&f, &a)).unwrap(), a);
        assert!(elem_from_json(&f, &json!(25)).is_err());
        assert!(elem_from_json(&f, &json!([5])).is_err());
        let r = relem_from_json(&f, &json!({"a1": 1, "a3": [0, 1]})).unwrap();
        assert_eq!(relem_from_json(&f, &relem_to_json(&f, &r)).unwrap(), r);
        assert!(relem_from_json(&f, &json!({"b": 1})).is_err());
    }

    #[test]
    fn ctx_and_spec_roundtrip() {
        let c = ctx_from_json(&json!({"field": {"p": 7}, "s": 1, "alpha": {"a1": 2, "a3": 3, "a4": 5}})).unwrap();
        assert_eq!(c.case().tag(), "NC_V");
        let back = ctx_from_json(&ctx_to_json(&c)).unwrap();
        assert_eq!(back.alpha(), c.alpha());
        let s = spec_from_json(c.field(), &json!({"kind": "D", "ell": 5, "t": 1, "mu": 3, "z": [[0, 0, 1]]})).unwrap();
        assert_eq!(spec_from_json(c.field(), &spec_to_json(c.field(), &s)).unwrap(), s);
        assert!(spec_from_json(c.field(), &json!({"kind": "E"})).is_err());
    }

    #[test]
    fn formatting() {
        let f = field_from_json(&json!({"p": 7})).unwrap();
        let r = crate::ring_r::RingR::new(f.clone());
        assert_eq!(format_relem(&f, &r.elem_ints(&[2, 0, 3, 5])), "2+3v+5uv");
        assert_eq!(format_relem(&f, &r.elem_ints(&[0, 1, 0, 0])), "u");
        let rr = crate::poly::PolyRing::new(r.clone());
        let p = rr.from_coeffs(vec![r.elem_ints(&[6, 0, 0, 0]), r.zero(), r.elem_ints(&[1, 1, 0, 0])]);
        assert_eq!(format_rpoly(&f, &p), "(1+u)x^2 + 6");
        let f4 = field_from_json(&json!({"p": 2, "m": 2})).unwrap();
        let w1 = f4.decode(3);
        assert_eq!(format_relem(&f4, &RElem::new(w1.clone(), f4.decode(0), f4.decode(2), w1)), "(w+1)+wv+(w+1)uv");
    }
}
