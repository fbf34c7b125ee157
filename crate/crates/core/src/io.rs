//! JSON input schemas and exact-number encodings.
//!
//! Integers are emitted as plain JSON numbers of arbitrary length; rationals
//! as `{"num": p, "den": q}` with `q > 0` and `gcd(p, q) = 1`.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Serialize, Serializer};
use serde_json::{json, Number, Value};

use crate::error::{Error, Result};
use crate::form::{default_variables, validate_variables, Form, Variables};
use crate::lattice::{IntersectionLattice, SheafInvariants};

pub fn bigint_to_number(n: &BigInt) -> Number {
    serde_json::from_str(&n.to_string()).expect("integers are valid JSON numbers")
}

pub fn bigint_to_json(n: &BigInt) -> Value {
    Value::Number(bigint_to_number(n))
}

pub fn rational_to_json(q: &BigRational) -> Value {
    json!({ "num": bigint_to_json(q.numer()), "den": bigint_to_json(q.denom()) })
}

pub fn ser_bigint<S: Serializer>(n: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    bigint_to_number(n).serialize(s)
}

pub fn ser_bigint_vec<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    v.iter().map(bigint_to_number).collect::<Vec<_>>().serialize(s)
}

pub fn ser_rational<S: Serializer>(q: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    rational_to_json(q).serialize(s)
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}

fn field<'a>(obj: &'a Value, key: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| invalid(format!("missing field `{key}`")))
}

pub fn json_to_bigint(v: &Value, what: &str) -> Result<BigInt> {
    match v {
        Value::Number(n) => n
            .to_string()
            .parse()
            .map_err(|_| invalid(format!("`{what}` must be an integer, got {n}"))),
        other => Err(invalid(format!("`{what}` must be an integer, got {other}"))),
    }
}

pub fn json_to_u64(v: &Value, what: &str) -> Result<u64> {
    json_to_bigint(v, what)?
        .try_into()
        .map_err(|_| invalid(format!("`{what}` must be a non-negative machine integer")))
}

fn json_to_bigint_vec(v: &Value, what: &str) -> Result<Vec<BigInt>> {
    v.as_array()
        .ok_or_else(|| invalid(format!("`{what}` must be an array of integers")))?
        .iter()
        .map(|x| json_to_bigint(x, what))
        .collect()
}

/// Parses an object from text, mapping JSON syntax errors to [`Error::InvalidInput`].
pub fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| invalid(format!("malformed JSON: {e}")))
}

/// `{"gram": [[4]], "polarization": [1], "rank": 1, "c1": [7], "c2": 0}`
pub fn parse_invariants(v: &Value) -> Result<(IntersectionLattice, SheafInvariants)> {
    let gram = field(v, "gram")?
        .as_array()
        .ok_or_else(|| invalid("`gram` must be an array of rows"))?
        .iter()
        .map(|row| json_to_bigint_vec(row, "gram"))
        .collect::<Result<Vec<_>>>()?;
    let polarization = json_to_bigint_vec(field(v, "polarization")?, "polarization")?;
    let lattice = IntersectionLattice::new(gram, polarization)?;
    let inv = SheafInvariants::new(
        json_to_bigint(field(v, "rank")?, "rank")?,
        json_to_bigint_vec(field(v, "c1")?, "c1")?,
        json_to_bigint(field(v, "c2")?, "c2")?,
    )?;
    inv.validate(&lattice)?;
    Ok((lattice, inv))
}

pub fn invariants_to_json(lat: &IntersectionLattice, inv: &SheafInvariants) -> Value {
    json!({
        "gram": lat.gram().iter().map(|r| r.iter().map(bigint_to_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "polarization": lat.polarization().iter().map(bigint_to_json).collect::<Vec<_>>(),
        "rank": bigint_to_json(&inv.rank),
        "c1": inv.c1.iter().map(bigint_to_json).collect::<Vec<_>>(),
        "c2": bigint_to_json(&inv.c2),
    })
}

/// `{"variables": ["x","y","z","t"], "hypersurface": "x^4+y^4+z^4+t^4"}`; `variables` is optional.
pub fn parse_surface(v: &Value) -> Result<(Form, Variables)> {
    let vars = match v.get("variables") {
        None => default_variables(),
        Some(Value::Array(names)) => {
            let names = names
                .iter()
                .map(|n| n.as_str().map(str::to_string).ok_or_else(|| invalid("variable names must be strings")))
                .collect::<Result<Vec<_>>>()?;
            validate_variables(&names)?
        }
        Some(_) => return Err(invalid("`variables` must be an array of 4 strings")),
    };
    let text = field(v, "hypersurface")?
        .as_str()
        .ok_or_else(|| invalid("`hypersurface` must be a string"))?;
    Ok((Form::parse(text, &vars)?, vars))
}

/// Raw form-space input: declared degree, form strings, optional target rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormSpaceInput {
    pub degree: u32,
    pub forms: Vec<String>,
    pub target_rank: Option<u64>,
}

/// `{"degree": 7, "forms": ["x^7", ...]}` with optional `"target_rank"`.
pub fn parse_form_space(v: &Value) -> Result<FormSpaceInput> {
    let degree = json_to_u64(field(v, "degree")?, "degree")?;
    let degree = u32::try_from(degree).map_err(|_| invalid("`degree` is too large"))?;
    let forms = field(v, "forms")?
        .as_array()
        .ok_or_else(|| invalid("`forms` must be an array of strings"))?
        .iter()
        .map(|f| f.as_str().map(str::to_string).ok_or_else(|| invalid("forms must be strings")))
        .collect::<Result<Vec<_>>>()?;
    let target_rank = v.get("target_rank").map(|r| json_to_u64(r, "target_rank")).transpose()?;
    Ok(FormSpaceInput { degree, forms, target_rank })
}

impl FormSpaceInput {
    /// Parses the forms and checks them against the declared degree.
    pub fn parse_forms(&self, vars: &Variables) -> Result<Vec<Form>> {
        let forms = self.forms.iter().map(|s| Form::parse(s, vars)).collect::<Result<Vec<_>>>()?;
        if let Some(g) = forms.iter().find(|g| g.degree() != self.degree) {
            return Err(Error::Inhomogeneous { expected: self.degree, found: g.degree() });
        }
        Ok(forms)
    }
}
