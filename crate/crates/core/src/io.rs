//! JSON interchange for matrices, pairs, canonical forms, certificates and
//! reports. Scalars are written as strings; integers are also accepted on
//! input. Object keys come out sorted.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use crate::canonical::{CanonResult, CanonicalPair, MatrixPair};
use crate::error::{Error, Result};
use crate::field::{FieldElem, FieldSpec};
use crate::linalg::Mat;
use crate::ncpoly::Word;
use crate::separators::{InvariantProbe, ProbeKind, ProbeValue, SeparationReport, Verdict};
use crate::staircase::StaircaseCert;
use crate::stargraph::{Digraph, StarMatrix};

/// Environment variable naming the field used when a file omits `"field"`.
pub const FIELD_ENV: &str = "SIMPAIR_FIELD";

fn perr(path: &str, msg: impl std::fmt::Display) -> Error {
    Error::Parse(format!("{path}: {msg}"))
}

/// Parse text with serde_json, reporting line and column on failure.
pub fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| {
        Error::Parse(format!("invalid JSON at line {}, column {}: {e}", e.line(), e.column()))
    })
}

pub fn field_to_json(f: FieldSpec) -> Value {
    match f {
        FieldSpec::Rationals => json!("Q"),
        FieldSpec::Prime(p) => json!({ "Fp": p }),
    }
}

/// `"Q"`, `{"Fp": p}`, or the shorthands `"F7"` / `"Fp7"`.
pub fn field_from_json(v: &Value, path: &str) -> Result<FieldSpec> {
    let f = match v {
        Value::String(s) => parse_field_name(s).map_err(|e| perr(path, e))?,
        Value::Object(m) => {
            let p = m
                .get("Fp")
                .and_then(Value::as_u64)
                .ok_or_else(|| perr(path, "expected {\"Fp\": <prime>}"))?;
            FieldSpec::Prime(p)
        }
        _ => return Err(perr(path, "expected \"Q\" or {\"Fp\": p}")),
    };
    f.validate().map_err(|e| perr(path, e))?;
    Ok(f)
}

/// `Q`, `F7`, `Fp7`, or a bare prime.
pub fn parse_field_name(s: &str) -> Result<FieldSpec> {
    let t = s.trim();
    if t.eq_ignore_ascii_case("q") {
        return Ok(FieldSpec::Rationals);
    }
    let digits = t
        .strip_prefix("Fp")
        .or_else(|| t.strip_prefix("F"))
        .or_else(|| t.strip_prefix("f"))
        .unwrap_or(t);
    let p: u64 = digits
        .parse()
        .map_err(|_| Error::Parse(format!("unknown field {s:?}")))?;
    FieldSpec::prime(p)
}

/// The field named by `SIMPAIR_FIELD`, if set.
pub fn env_field() -> Result<Option<FieldSpec>> {
    match std::env::var(FIELD_ENV) {
        Ok(s) if !s.trim().is_empty() => parse_field_name(&s).map(Some),
        _ => Ok(None),
    }
}

fn scalar_from_json(f: FieldSpec, v: &Value, path: &str) -> Result<FieldElem> {
    match v {
        Value::String(s) => FieldElem::parse(f, s).map_err(|e| perr(path, e)),
        Value::Number(n) => {
            let s = n.to_string();
            if s.contains(['.', 'e', 'E']) {
                return Err(perr(path, "non-integer number; write fractions as \"a/b\""));
            }
            FieldElem::parse(f, &s).map_err(|e| perr(path, e))
        }
        _ => Err(perr(path, "expected a scalar string or integer")),
    }
}

fn scalar_to_json(x: &FieldElem) -> Value {
    Value::String(x.to_string())
}

pub fn rows_to_json(m: &Mat) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| Value::Array(m.row(i).iter().map(scalar_to_json).collect()))
            .collect(),
    )
}

pub fn rows_from_json(f: FieldSpec, v: &Value, path: &str) -> Result<Mat> {
    let rows = v.as_array().ok_or_else(|| perr(path, "expected an array of rows"))?;
    let parsed = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let rp = format!("{path}[{i}]");
            r.as_array()
                .ok_or_else(|| perr(&rp, "expected an array of scalars"))?
                .iter()
                .enumerate()
                .map(|(j, x)| scalar_from_json(f, x, &format!("{rp}[{j}]")))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Mat::from_rows(f, parsed).map_err(|e| perr(path, e))
}

fn object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| perr(path, "expected an object"))
}

fn field_of(obj: &Map<String, Value>, default: Option<FieldSpec>) -> Result<FieldSpec> {
    match obj.get("field") {
        Some(v) => field_from_json(v, "field"),
        None => default.ok_or_else(|| {
            perr("field", format!("missing, and {FIELD_ENV} is not set"))
        }),
    }
}

/// `{"field": ..., "rows": [[...]]}`.
pub fn matrix_to_json(m: &Mat) -> Value {
    json!({ "field": field_to_json(m.field()), "rows": rows_to_json(m) })
}

pub fn matrix_from_json(v: &Value, default: Option<FieldSpec>) -> Result<Mat> {
    let obj = object(v, "matrix")?;
    let f = field_of(obj, default)?;
    let rows = obj.get("rows").ok_or_else(|| perr("rows", "missing"))?;
    rows_from_json(f, rows, "rows")
}

/// `{"field": ..., "A1": rows, "A2": rows}`.
pub fn pair_to_json(p: &MatrixPair) -> Value {
    json!({
        "field": field_to_json(p.field()),
        "A1": rows_to_json(&p.a1),
        "A2": rows_to_json(&p.a2),
    })
}

pub fn pair_from_json(v: &Value, default: Option<FieldSpec>) -> Result<MatrixPair> {
    let obj = object(v, "pair")?;
    let f = field_of(obj, default)?;
    let get = |k: &str| obj.get(k).ok_or_else(|| perr(k, "missing"));
    let a1 = rows_from_json(f, get("A1")?, "A1")?;
    let a2 = rows_from_json(f, get("A2")?, "A2")?;
    MatrixPair::new(a1, a2)
}

pub fn pair_from_str(text: &str, default: Option<FieldSpec>) -> Result<MatrixPair> {
    pair_from_json(&parse_json(text)?, default)
}

pub fn digraph_to_json(g: &Digraph) -> Value {
    json!({ "n": g.n(), "arrows": arrows_json(g) })
}

fn arrows_json(g: &Digraph) -> Value {
    Value::Array(g.arrows().map(|(i, j)| json!([i + 1, j + 1])).collect())
}

fn arrows_from_json(n: usize, v: &Value, path: &str) -> Result<Digraph> {
    let arr = v.as_array().ok_or_else(|| perr(path, "expected an array of [i, j]"))?;
    let pairs = arr
        .iter()
        .enumerate()
        .map(|(k, a)| {
            let ap = format!("{path}[{k}]");
            let ij = a.as_array().filter(|x| x.len() == 2).ok_or_else(|| perr(&ap, "expected [i, j]"))?;
            let get = |x: &Value| {
                x.as_u64()
                    .map(|u| u as usize)
                    .ok_or_else(|| perr(&ap, "vertices are positive integers"))
            };
            Ok((get(&ij[0])?, get(&ij[1])?))
        })
        .collect::<Result<Vec<_>>>()?;
    Digraph::from_one_based(n, &pairs).map_err(|e| perr(path, e))
}

pub fn digraph_from_json(v: &Value) -> Result<Digraph> {
    let obj = object(v, "graph")?;
    let n = obj
        .get("n")
        .and_then(Value::as_u64)
        .ok_or_else(|| perr("n", "expected a vertex count"))? as usize;
    arrows_from_json(n, obj.get("arrows").unwrap_or(&json!([])), "arrows")
}

/// `{"field", "n", "eigs", "arrows", "star", "params"}`.
pub fn canon_to_json(c: &CanonicalPair) -> Value {
    json!({
        "field": field_to_json(c.field),
        "n": c.n,
        "eigs": c.eigs.iter().map(scalar_to_json).collect::<Vec<_>>(),
        "arrows": arrows_json(&c.type_graph),
        "star": c.star.row_strings(),
        "params": c.params.iter().map(|((i, j), v)| json!({
            "pos": [i + 1, j + 1],
            "val": scalar_to_json(v),
        })).collect::<Vec<_>>(),
    })
}

pub fn canon_from_json(v: &Value, default: Option<FieldSpec>) -> Result<CanonicalPair> {
    let obj = object(v, "canonical")?;
    let f = field_of(obj, default)?;
    let eigs = obj
        .get("eigs")
        .and_then(Value::as_array)
        .ok_or_else(|| perr("eigs", "expected an array"))?
        .iter()
        .enumerate()
        .map(|(k, x)| scalar_from_json(f, x, &format!("eigs[{k}]")))
        .collect::<Result<Vec<_>>>()?;
    let g = arrows_from_json(eigs.len(), obj.get("arrows").unwrap_or(&json!([])), "arrows")?;
    let mut params = BTreeMap::new();
    let ps = obj
        .get("params")
        .and_then(Value::as_array)
        .ok_or_else(|| perr("params", "expected an array"))?;
    for (k, p) in ps.iter().enumerate() {
        let pp = format!("params[{k}]");
        let po = object(p, &pp)?;
        let pos = po
            .get("pos")
            .and_then(Value::as_array)
            .filter(|a| a.len() == 2)
            .and_then(|a| Some((a[0].as_u64()? as usize, a[1].as_u64()? as usize)))
            .filter(|&(i, j)| i >= 1 && j >= 1)
            .ok_or_else(|| perr(&pp, "pos must be [i, j] with 1-based entries"))?;
        let val = scalar_from_json(f, po.get("val").unwrap_or(&Value::Null), &format!("{pp}.val"))?;
        params.insert((pos.0 - 1, pos.1 - 1), val);
    }
    let c = CanonicalPair::from_parts(f, eigs, g, params)?;
    if let Some(star) = obj.get("star") {
        let rows = star
            .as_array()
            .ok_or_else(|| perr("star", "expected row strings"))?
            .iter()
            .map(|r| r.as_str().ok_or_else(|| perr("star", "expected row strings")))
            .collect::<Result<Vec<_>>>()?;
        if StarMatrix::parse(&rows.join("\n"))? != c.star {
            return Err(perr("star", "does not match the arrows"));
        }
    }
    Ok(c)
}

/// The canonical pair, its data, and the witness `g`; re-reads as a pair.
pub fn canon_result_to_json(r: &CanonResult) -> Value {
    let rep = r.canon.reconstitute();
    let mut v = pair_to_json(&rep);
    let obj = v.as_object_mut().expect("object");
    obj.insert("canonical".into(), canon_to_json(&r.canon));
    obj.insert("g".into(), rows_to_json(&r.g));
    v
}

pub fn cert_to_json(c: &StaircaseCert) -> Value {
    json!({
        "r": c.r,
        "ws": c.ws.iter().map(Word::to_string).collect::<Vec<_>>(),
        "u1": c.u1.to_string(),
        "u2": c.u2.to_string(),
    })
}

pub fn cert_from_json(v: &Value) -> Result<StaircaseCert> {
    let obj = object(v, "certificate")?;
    let word = |k: &str| -> Result<Word> {
        Word::parse(obj.get(k).and_then(Value::as_str).ok_or_else(|| perr(k, "expected a word"))?)
    };
    let ws = obj
        .get("ws")
        .and_then(Value::as_array)
        .ok_or_else(|| perr("ws", "expected an array of words"))?
        .iter()
        .map(|w| Word::parse(w.as_str().ok_or_else(|| perr("ws", "expected words"))?))
        .collect::<Result<Vec<_>>>()?;
    let r = obj.get("r").and_then(Value::as_u64).ok_or_else(|| perr("r", "expected an integer"))? as usize;
    Ok(StaircaseCert {
        ws,
        u1: word("u1")?,
        u2: word("u2")?,
        r,
    })
}

pub fn probe_to_json(p: &InvariantProbe) -> Value {
    let (kind, extra) = match p.kind() {
        ProbeKind::Zeta => ("zeta", Value::Null),
        ProbeKind::Rank { expected } => ("rank", json!(expected)),
        ProbeKind::Sigma(t) => ("sigma", json!(t)),
    };
    let mut v = json!({
        "label": p.label(),
        "kind": kind,
        "degree": p.degree(),
        "expr": p.to_string(),
    });
    let obj = v.as_object_mut().expect("object");
    match p.kind() {
        ProbeKind::Rank { .. } => obj.insert("expected".into(), extra),
        ProbeKind::Sigma(_) => obj.insert("t".into(), extra),
        ProbeKind::Zeta => None,
    };
    v
}

fn value_json(v: &ProbeValue) -> Value {
    match v {
        ProbeValue::Indicator(x) => json!(x),
        ProbeValue::Rank(x) => json!(x),
        ProbeValue::Scalar(x) => scalar_to_json(x),
    }
}

/// `{"verdict", "witness", "probes", "seed"}`.
pub fn report_to_json(r: &SeparationReport, seed: Option<u64>) -> Value {
    let (verdict, witness) = match &r.verdict {
        Verdict::Equal => ("equal", Value::Null),
        Verdict::SeparatedBy { probe, value_a, value_b } => (
            "separated",
            json!({
                "probe": probe_to_json(probe),
                "valueA": value_json(value_a),
                "valueB": value_json(value_b),
            }),
        ),
    };
    json!({
        "verdict": verdict,
        "witness": witness,
        "probes": r.probes_evaluated,
        "seed": seed,
    })
}

/// Pretty JSON followed by a newline.
pub fn to_pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canonical::{canonicalize, random_dn_pair};
    use crate::staircase::{staircase_cert, TDSeq};
    use crate::stargraph::Dir;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn pair_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for f in [FieldSpec::Rationals, FieldSpec::Prime(7)] {
            let p = random_dn_pair(f, 3, &mut rng, 4);
            let text = to_pretty(&pair_to_json(&p));
            assert_eq!(pair_from_str(&text, None).unwrap(), p);
        }
    }

    #[test]
    fn integers_and_fractions_accepted() {
        let p = pair_from_str(r#"{"field":"Q","A1":[[1,0],[0,"-1/2"]],"A2":[["2/4",0],[0,0]]}"#, None).unwrap();
        assert_eq!(p.a1.get(1, 1), &FieldElem::from_ratio(FieldSpec::Rationals, -1, 2).unwrap());
        assert_eq!(p.a2.get(0, 0).to_string(), "1/2");
        let p = pair_from_str(r#"{"A1":[[1]],"A2":[[9]]}"#, Some(FieldSpec::Prime(5))).unwrap();
        assert_eq!(p.a2.get(0, 0).to_string(), "4");
    }

    #[test]
    fn errors_name_their_position() {
        let e = pair_from_str(r#"{"field":"Q","A1":[[1,0],[0,"x"]],"A2":[[0,0],[0,0]]}"#, None).unwrap_err();
        assert!(e.to_string().contains("A1[1][1]"), "{e}");
        let e = pair_from_str("{\"field\": \"Q\",\n \"A1\": [[1,]]}", None).unwrap_err();
        assert!(e.to_string().contains("line 2"), "{e}");
        let e = pair_from_str(r#"{"A1":[[1]],"A2":[[1]]}"#, None).unwrap_err();
        assert!(e.to_string().contains("field"), "{e}");
        let e = pair_from_str(r#"{"field":{"Fp":6},"A1":[[1]],"A2":[[1]]}"#, None).unwrap_err();
        assert!(e.to_string().contains("not prime"), "{e}");
        let e = pair_from_str(r#"{"field":"Q","A1":[[1.5]],"A2":[[1]]}"#, None).unwrap_err();
        assert!(e.to_string().contains("A1[0][0]"), "{e}");
    }

    #[test]
    fn canonical_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..20 {
            let p = random_dn_pair(FieldSpec::Prime(11), 4, &mut rng, 3);
            let r = canonicalize(&p).unwrap();
            let v = canon_result_to_json(&r);
            let back = canon_from_json(&v["canonical"], None).unwrap();
            assert_eq!(back, r.canon);
            let as_pair = pair_from_json(&v, None).unwrap();
            assert_eq!(as_pair, r.canon.reconstitute());
        }
    }

    #[test]
    fn graph_and_cert_round_trip() {
        let g = Digraph::from_one_based(4, &[(4, 1), (2, 1), (2, 3)]).unwrap();
        let v = digraph_to_json(&g);
        assert_eq!(v["arrows"], json!([[2, 1], [2, 3], [4, 1]]));
        assert_eq!(digraph_from_json(&v).unwrap(), g);
        let s = TDSeq::standard(vec![Dir::Rev, Dir::Fwd, Dir::Rev, Dir::Fwd, Dir::Rev]).unwrap();
        let c = staircase_cert(&s).unwrap();
        let v = cert_to_json(&c);
        assert_eq!(v["u1"], json!("x1"));
        assert_eq!(cert_from_json(&v).unwrap(), c);
    }

    #[test]
    fn field_names() {
        assert_eq!(parse_field_name("Q").unwrap(), FieldSpec::Rationals);
        assert_eq!(parse_field_name("F7").unwrap(), FieldSpec::Prime(7));
        assert_eq!(parse_field_name("Fp11").unwrap(), FieldSpec::Prime(11));
        assert_eq!(parse_field_name("13").unwrap(), FieldSpec::Prime(13));
        assert!(parse_field_name("F8").is_err());
        assert_eq!(field_to_json(FieldSpec::Prime(5)), json!({"Fp": 5}));
    }
}
