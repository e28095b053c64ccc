//! JSON interchange formats.
//!
//! Integers are written as exact JSON numbers of any size. Degree-indexed
//! maps use decimal string keys in increasing numeric order. Top-level
//! documents carry `"schema": "locweinstein/1"`; on input the field is
//! optional but must match when present.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde_json::{Map, Number, Value};
use thiserror::Error;

use crate::decompose::{BasisChange, Summand};
use crate::localize::CategoryClass;
use crate::loopsphere::{PolyMatrix, Polynomial, SphereRing, TwistedComplex, WindowProfile};
use crate::primes::PrimeSet;
use crate::weinstein::{CriticalHandle, HandlePresentation, SubdomainSpec};
use crate::{AbelianGroup, Decomposition, Error, FreeComplex, HomologyProfile, IntMatrix};

pub const SCHEMA: &str = "locweinstein/1";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("malformed JSON: {0}")]
    Syntax(String),
    #[error("unsupported schema {0:?}, expected {SCHEMA:?}")]
    Schema(String),
    #[error("{path}: {message}")]
    Field { path: String, message: String },
}

fn field_err(path: &str, message: impl Into<String>) -> FormatError {
    FormatError::Field {
        path: path.to_string(),
        message: message.into(),
    }
}

/// Parses a document and checks its schema tag.
pub fn parse_document(text: &str) -> Result<Value, FormatError> {
    let v: Value = serde_json::from_str(text).map_err(|e| FormatError::Syntax(e.to_string()))?;
    if let Some(tag) = v.get("schema") {
        match tag.as_str() {
            Some(SCHEMA) => {}
            _ => return Err(FormatError::Schema(tag.to_string())),
        }
    }
    Ok(v)
}

/// Wraps the fields of `body` into a top-level document.
pub fn document(body: Value) -> Value {
    let mut out = Map::new();
    out.insert("schema".into(), Value::from(SCHEMA));
    if let Value::Object(fields) = body {
        for (k, v) in fields {
            if k != "schema" {
                out.insert(k, v);
            }
        }
    }
    Value::Object(out)
}

/// Compact rendering with a trailing newline.
pub fn render(v: &Value) -> String {
    let mut s = serde_json::to_string(v).expect("values always serialize");
    s.push('\n');
    s
}

pub fn bigint_to_value(x: &BigInt) -> Value {
    let n: Number =
        serde_json::from_str(&x.to_string()).expect("decimal integers are JSON numbers");
    Value::Number(n)
}

pub fn bigint_from_value(v: &Value, path: &str) -> Result<BigInt, FormatError> {
    let Value::Number(n) = v else {
        return Err(field_err(path, "expected an integer"));
    };
    n.to_string()
        .parse()
        .map_err(|_| field_err(path, format!("expected an integer, got {n}")))
}

fn i64_from_value(v: &Value, path: &str) -> Result<i64, FormatError> {
    v.as_i64()
        .ok_or_else(|| field_err(path, "expected a 64-bit integer"))
}

fn u64_from_value(v: &Value, path: &str) -> Result<u64, FormatError> {
    v.as_u64()
        .ok_or_else(|| field_err(path, "expected a nonnegative integer"))
}

fn usize_from_value(v: &Value, path: &str) -> Result<usize, FormatError> {
    u64_from_value(v, path)?
        .try_into()
        .map_err(|_| field_err(path, "integer too large"))
}

fn get<'a>(v: &'a Value, key: &str, path: &str) -> Result<&'a Value, FormatError> {
    v.get(key)
        .ok_or_else(|| field_err(path, format!("missing field \"{key}\"")))
}

fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>, FormatError> {
    v.as_array()
        .ok_or_else(|| field_err(path, "expected an array"))
}

fn object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>, FormatError> {
    v.as_object()
        .ok_or_else(|| field_err(path, "expected an object"))
}

fn degree_key(k: &str, path: &str) -> Result<i64, FormatError> {
    k.parse()
        .map_err(|_| field_err(path, format!("degree key {k:?} is not an integer")))
}

fn degree_map<V>(entries: impl IntoIterator<Item = (i64, V)>) -> Value
where
    V: Into<Value>,
{
    let mut m = Map::new();
    for (k, v) in entries {
        m.insert(k.to_string(), v.into());
    }
    Value::Object(m)
}

fn parse_degree_map<V>(
    v: &Value,
    path: &str,
    mut each: impl FnMut(&Value, &str) -> Result<V, FormatError>,
) -> Result<BTreeMap<i64, V>, FormatError> {
    let mut out = BTreeMap::new();
    for (k, x) in object(v, path)? {
        let d = degree_key(k, path)?;
        let value = each(x, &format!("{path}.{k}"))?;
        if out.insert(d, value).is_some() {
            return Err(field_err(path, format!("degree {d} listed twice")));
        }
    }
    Ok(out)
}

pub fn matrix_to_value(m: &IntMatrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| Value::Array(m.row(i).iter().map(bigint_to_value).collect()))
            .collect(),
    )
}

/// Reads a `rows × cols` matrix; `[]` is accepted for any matrix with no rows.
pub fn matrix_from_value(
    v: &Value,
    rows: usize,
    cols: usize,
    path: &str,
) -> Result<IntMatrix, FormatError> {
    let arr = array(v, path)?;
    if arr.len() != rows {
        return Err(field_err(
            path,
            format!("expected {rows} rows, got {}", arr.len()),
        ));
    }
    let mut out = Vec::with_capacity(rows);
    for (i, row) in arr.iter().enumerate() {
        let rpath = format!("{path}[{i}]");
        let row = array(row, &rpath)?;
        if row.len() != cols {
            return Err(field_err(
                &rpath,
                format!("expected {cols} entries, got {}", row.len()),
            ));
        }
        let parsed = row
            .iter()
            .enumerate()
            .map(|(j, x)| bigint_from_value(x, &format!("{rpath}[{j}]")))
            .collect::<Result<Vec<_>, _>>()?;
        out.push(parsed);
    }
    Ok(IntMatrix::from_rows(out, cols).expect("shape checked above"))
}

/// `{"degrees": {"k": rank}, "differentials": {"k": d^k}}`, where `d^k`
/// maps degree `k` to `k + 1`.
pub fn complex_to_value(c: &FreeComplex) -> Value {
    let mut m = Map::new();
    m.insert(
        "degrees".into(),
        degree_map(c.ranks().iter().map(|(&k, &r)| (k, r))),
    );
    m.insert(
        "differentials".into(),
        degree_map(
            c.stored_differentials()
                .iter()
                .map(|(&k, d)| (k, matrix_to_value(d))),
        ),
    );
    Value::Object(m)
}

pub fn complex_from_value(v: &Value, path: &str) -> Result<FreeComplex, Error> {
    object(v, path)?;
    let ranks = parse_degree_map(
        get(v, "degrees", path)?,
        &format!("{path}.degrees"),
        usize_from_value,
    )?;
    let diffs = match v.get("differentials") {
        None => BTreeMap::new(),
        Some(d) => {
            let dpath = format!("{path}.differentials");
            let raw = parse_degree_map(d, &dpath, |x, _| Ok(x.clone()))?;
            let mut out = BTreeMap::new();
            for (k, x) in raw {
                let rows = ranks.get(&(k + 1)).copied().unwrap_or(0);
                let cols = ranks.get(&k).copied().unwrap_or(0);
                out.insert(
                    k,
                    matrix_from_value(&x, rows, cols, &format!("{dpath}.{k}"))?,
                );
            }
            out
        }
    };
    let c = FreeComplex::new(ranks, diffs);
    c.check()?;
    Ok(c)
}

pub fn group_to_value(g: &AbelianGroup) -> Value {
    let mut m = Map::new();
    m.insert("free_rank".into(), Value::from(g.free_rank));
    m.insert(
        "torsion".into(),
        Value::Array(g.torsion.iter().map(bigint_to_value).collect()),
    );
    Value::Object(m)
}

pub fn group_from_value(v: &Value, path: &str) -> Result<AbelianGroup, FormatError> {
    let free_rank = usize_from_value(get(v, "free_rank", path)?, &format!("{path}.free_rank"))?;
    let tpath = format!("{path}.torsion");
    let torsion = match v.get("torsion") {
        None => Vec::new(),
        Some(t) => array(t, &tpath)?
            .iter()
            .map(|x| bigint_from_value(x, &tpath))
            .collect::<Result<_, _>>()?,
    };
    Ok(AbelianGroup::from_cyclic(free_rank, torsion))
}

/// `{"k": {"free_rank": r, "torsion": [..]}}` over the nonzero degrees.
pub fn homology_to_value(h: &HomologyProfile) -> Value {
    degree_map(h.groups().iter().map(|(&k, g)| (k, group_to_value(g))))
}

pub fn homology_from_value(v: &Value, path: &str) -> Result<HomologyProfile, FormatError> {
    let groups = parse_degree_map(v, path, group_from_value)?;
    Ok(HomologyProfile::from_groups(groups))
}

/// Ranks per degree, as produced by field-coefficient homology.
pub fn ranks_to_value(r: &BTreeMap<i64, usize>) -> Value {
    degree_map(r.iter().map(|(&k, &n)| (k, n)))
}

pub fn prime_set_to_value(p: &PrimeSet) -> Value {
    let mut m = Map::new();
    m.insert("contains_zero".into(), Value::from(p.contains_zero()));
    m.insert(
        "primes".into(),
        Value::from(p.primes().iter().copied().collect::<Vec<u64>>()),
    );
    Value::Object(m)
}

/// Accepts `{"contains_zero", "primes"}` or a bare list in which `0` marks
/// the flexibilizing element.
pub fn prime_set_from_value(v: &Value, path: &str) -> Result<PrimeSet, Error> {
    if let Some(arr) = v.as_array() {
        let elems = arr
            .iter()
            .map(|x| u64_from_value(x, path))
            .collect::<Result<Vec<_>, _>>()?;
        return Ok(PrimeSet::new(elems)?);
    }
    let zero_path = format!("{path}.contains_zero");
    let zero = get(v, "contains_zero", path)?
        .as_bool()
        .ok_or_else(|| field_err(&zero_path, "expected a boolean"))?;
    let ppath = format!("{path}.primes");
    let primes = array(get(v, "primes", path)?, &ppath)?
        .iter()
        .map(|x| u64_from_value(x, &ppath))
        .collect::<Result<Vec<_>, _>>()?;
    let set = PrimeSet::from_primes(primes)?;
    Ok(if zero {
        set.union(&PrimeSet::zero())
    } else {
        set
    })
}

pub fn class_to_value(c: &CategoryClass) -> Value {
    let mut m = Map::new();
    m.insert("class".into(), Value::from(c.name()));
    m.insert("primes".into(), Value::from(c.primes()));
    Value::Object(m)
}

pub fn summand_to_value(s: &Summand<BigInt>) -> Value {
    let mut m = Map::new();
    match s {
        Summand::Free { d } => {
            m.insert("kind".into(), Value::from("free"));
            m.insert("d".into(), Value::from(*d));
        }
        Summand::Torsion { d, m: order } => {
            m.insert("kind".into(), Value::from("torsion"));
            m.insert("d".into(), Value::from(*d));
            m.insert("m".into(), bigint_to_value(order));
        }
        Summand::Acyclic { d } => {
            m.insert("kind".into(), Value::from("acyclic"));
            m.insert("d".into(), Value::from(*d));
        }
    }
    Value::Object(m)
}

/// Summands, the per-degree basis change, the block-diagonal normal form
/// and the prime content.
pub fn decomposition_to_value(s: &Decomposition) -> Result<Value, Error> {
    let mut m = Map::new();
    m.insert(
        "summands".into(),
        Value::Array(s.summands().iter().map(summand_to_value).collect()),
    );
    let cert = s
        .certificate()
        .iter()
        .map(|(&k, BasisChange { basis, inverse })| {
            let mut b = Map::new();
            b.insert("basis".into(), matrix_to_value(basis));
            b.insert("inverse".into(), matrix_to_value(inverse));
            (k, Value::Object(b))
        });
    m.insert("certificate".into(), degree_map(cert));
    m.insert("normal_form".into(), complex_to_value(&s.reassemble()));
    m.insert(
        "prime_content".into(),
        prime_set_to_value(&s.prime_content()?),
    );
    Ok(Value::Object(m))
}

fn polynomial_to_value(p: &Polynomial) -> Value {
    Value::Array(
        p.terms()
            .iter()
            .map(|(&j, c)| Value::Array(vec![Value::from(j), bigint_to_value(c)]))
            .collect(),
    )
}

fn polynomial_from_value(v: &Value, path: &str) -> Result<Polynomial, FormatError> {
    let mut terms = Vec::new();
    for (i, t) in array(v, path)?.iter().enumerate() {
        let tpath = format!("{path}[{i}]");
        let pair = array(t, &tpath)?;
        if pair.len() != 2 {
            return Err(field_err(&tpath, "expected [power, coefficient]"));
        }
        let power = u32::try_from(u64_from_value(&pair[0], &tpath)?)
            .map_err(|_| field_err(&tpath, "power too large"))?;
        terms.push((power, bigint_from_value(&pair[1], &tpath)?));
    }
    Ok(Polynomial::from_terms(terms))
}

/// `{"n", "shifts", "delta": [{"row", "col", "coeffs": [[power, c]]}]}`.
pub fn twisted_to_value(t: &TwistedComplex) -> Value {
    let mut m = Map::new();
    m.insert("n".into(), Value::from(t.ring().n()));
    m.insert("shifts".into(), Value::from(t.shifts().to_vec()));
    let delta = t
        .delta()
        .iter()
        .map(|(&(row, col), p)| {
            let mut e = Map::new();
            e.insert("row".into(), Value::from(row));
            e.insert("col".into(), Value::from(col));
            e.insert("coeffs".into(), polynomial_to_value(p));
            Value::Object(e)
        })
        .collect();
    m.insert("delta".into(), Value::Array(delta));
    Value::Object(m)
}

/// Reads and validates a twisted complex. When the document has no `"n"`
/// field, `default_n` is used.
pub fn twisted_from_value(
    v: &Value,
    default_n: Option<u32>,
    path: &str,
) -> Result<TwistedComplex, Error> {
    object(v, path)?;
    let n = match v.get("n") {
        Some(x) => u32::try_from(u64_from_value(x, &format!("{path}.n"))?)
            .map_err(|_| field_err(path, "n too large"))?,
        None => default_n.ok_or_else(|| field_err(path, "missing field \"n\""))?,
    };
    let ring = SphereRing::new(n)?;
    let spath = format!("{path}.shifts");
    let shifts = array(get(v, "shifts", path)?, &spath)?
        .iter()
        .map(|x| i64_from_value(x, &spath))
        .collect::<Result<Vec<_>, _>>()?;
    let mut delta = PolyMatrix::new();
    if let Some(d) = v.get("delta") {
        let dpath = format!("{path}.delta");
        for (i, e) in array(d, &dpath)?.iter().enumerate() {
            let epath = format!("{dpath}[{i}]");
            let row = usize_from_value(get(e, "row", &epath)?, &epath)?;
            let col = usize_from_value(get(e, "col", &epath)?, &epath)?;
            let p = polynomial_from_value(get(e, "coeffs", &epath)?, &format!("{epath}.coeffs"))?;
            if delta.insert((row, col), p).is_some() {
                return Err(field_err(&epath, format!("entry ({row}, {col}) listed twice")).into());
            }
        }
    }
    let t = TwistedComplex::new(ring, shifts, delta);
    t.check()?;
    Ok(t)
}

pub fn window_profile_to_value(w: &WindowProfile) -> Value {
    let mut m = Map::new();
    m.insert("window".into(), Value::from(vec![w.window.0, w.window.1]));
    m.insert("homology".into(), homology_to_value(&w.homology));
    Value::Object(m)
}

pub fn subdomain_to_value(s: &SubdomainSpec) -> Value {
    let mut m = Map::new();
    m.insert("ambient".into(), Value::from(s.ambient.clone()));
    m.insert(
        "carved".into(),
        Value::Array(s.carved.iter().map(complex_to_value).collect()),
    );
    Value::Object(m)
}

pub fn subdomain_from_value(v: &Value, path: &str) -> Result<SubdomainSpec, Error> {
    let ambient = match v.get("ambient") {
        Some(a) => a
            .as_str()
            .ok_or_else(|| field_err(&format!("{path}.ambient"), "expected a string"))?
            .to_string(),
        None => String::new(),
    };
    let cpath = format!("{path}.carved");
    let carved = array(get(v, "carved", path)?, &cpath)?
        .iter()
        .enumerate()
        .map(|(i, c)| complex_from_value(c, &format!("{cpath}[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SubdomainSpec::new(ambient, carved)?)
}

pub fn handles_to_value(h: &HandlePresentation) -> Value {
    let mut m = Map::new();
    m.insert("subcritical".into(), Value::from(h.subcritical.clone()));
    let handles = h
        .critical_handles
        .iter()
        .map(|c| {
            let mut e = Map::new();
            e.insert("label".into(), Value::from(c.label.clone()));
            e.insert("decoration".into(), Value::from(c.decoration.elements()));
            Value::Object(e)
        })
        .collect();
    m.insert("critical_handles".into(), Value::Array(handles));
    Value::Object(m)
}

/// Decorations are lists of primes, `0` marking a flexibilized handle; a
/// missing decoration means a standard handle.
pub fn handles_from_value(v: &Value, path: &str) -> Result<HandlePresentation, Error> {
    let subcritical = match v.get("subcritical") {
        Some(a) => a
            .as_str()
            .ok_or_else(|| field_err(&format!("{path}.subcritical"), "expected a string"))?
            .to_string(),
        None => String::new(),
    };
    let hpath = format!("{path}.critical_handles");
    let mut critical_handles = Vec::new();
    for (i, c) in array(get(v, "critical_handles", path)?, &hpath)?
        .iter()
        .enumerate()
    {
        let cpath = format!("{hpath}[{i}]");
        let label = match c.get("label") {
            Some(l) => l
                .as_str()
                .ok_or_else(|| field_err(&cpath, "label must be a string"))?
                .to_string(),
            None => format!("h{}", i + 1),
        };
        let decoration = match c.get("decoration") {
            Some(d) => prime_set_from_value(d, &format!("{cpath}.decoration"))?,
            None => PrimeSet::empty(),
        };
        critical_handles.push(CriticalHandle { label, decoration });
    }
    Ok(HandlePresentation {
        subcritical,
        critical_handles,
    })
}

/// The error object reported for a failed command.
pub fn error_to_value(e: &Error) -> Value {
    let mut inner = Map::new();
    inner.insert("kind".into(), Value::from(e.kind()));
    inner.insert("message".into(), Value::from(e.to_string()));
    let mut m = Map::new();
    m.insert("error".into(), Value::Object(inner));
    document(Value::Object(m))
}
