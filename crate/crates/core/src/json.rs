//! JSON encodings of Hecke elements and coset functions.
//!
//! ```text
//! {"terms": [{"coset": <element>, "re": "p/q", "im": "p/q"}, ...]}
//! ```
//!
//! Cosets are canonicalized on load and repeated cosets are summed. Output
//! terms are in canonical coset order.

use serde_json::{json, Map, Value};

use crate::algebra::{CosetFunction, HeckeElement};
use crate::error::{Error, Result};
use crate::pair::{Hecke, HeckePair};
use crate::scalar::{GaussianRational, Rational};

fn rational_from_json(v: Option<&Value>) -> Result<Rational> {
    match v {
        None | Some(Value::Null) => Ok(Rational::zero()),
        Some(Value::String(s)) => s.parse(),
        Some(Value::Number(n)) => n
            .as_i64()
            .map(Rational::from)
            .ok_or_else(|| Error::Parse(format!("coefficient {n} must be an integer or a \"p/q\" string"))),
        Some(other) => Err(Error::Parse(format!("bad coefficient {other}"))),
    }
}

fn terms_from_json<B: HeckePair>(
    h: &Hecke<B>,
    v: &Value,
) -> Result<Vec<(B::Elem, GaussianRational)>> {
    let terms = v
        .get("terms")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse("expected an object with a \"terms\" array".into()))?;
    terms
        .iter()
        .map(|t| {
            let coset = t.get("coset").ok_or_else(|| Error::Parse(format!("term {t} has no coset")))?;
            let g = h.backend().elem_from_json(coset)?;
            let c = GaussianRational::new(rational_from_json(t.get("re"))?, rational_from_json(t.get("im"))?);
            Ok((g, c))
        })
        .collect()
}

fn term_json<B: HeckePair>(h: &Hecke<B>, g: &B::Elem, c: &GaussianRational) -> Value {
    let mut m = Map::new();
    m.insert("coset".into(), h.backend().elem_to_json(g));
    m.insert("re".into(), json!(c.re.to_string()));
    m.insert("im".into(), json!(c.im.to_string()));
    Value::Object(m)
}

pub fn hecke_element_to_json<B: HeckePair>(h: &Hecke<B>, f: &HeckeElement<B::Elem>) -> Value {
    let terms: Vec<Value> = f.terms().map(|(d, c)| term_json(h, d.rep(), c)).collect();
    json!({ "terms": terms })
}

pub fn hecke_element_from_json<B: HeckePair>(h: &Hecke<B>, v: &Value) -> Result<HeckeElement<B::Elem>> {
    let terms = terms_from_json(h, v)?
        .into_iter()
        .map(|(g, c)| Ok((h.canonical_double_coset(&g)?, c)))
        .collect::<Result<Vec<_>>>()?;
    Ok(h.element(terms))
}

pub fn coset_function_to_json<B: HeckePair>(h: &Hecke<B>, f: &CosetFunction<B::Elem>) -> Value {
    let terms: Vec<Value> = f.terms().map(|(l, c)| term_json(h, l.rep(), c)).collect();
    json!({ "terms": terms })
}

pub fn coset_function_from_json<B: HeckePair>(h: &Hecke<B>, v: &Value) -> Result<CosetFunction<B::Elem>> {
    let terms = terms_from_json(h, v)?
        .into_iter()
        .map(|(g, c)| Ok((h.canonical_left_coset(&g)?, c)))
        .collect::<Result<Vec<_>>>()?;
    Ok(h.coset_function(terms))
}

pub fn parse_value(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}
