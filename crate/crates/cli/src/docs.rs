//! JSON documents for matroids and realizations.
//!
//! A matroid document lists the ground set and one module per subset:
//!
//! ```json
//! {"ground_set": ["1", "2"],
//!  "modules": {"": {"rank": 0, "torsion": [2, 4]}, "1": {"rank": 0, "torsion": [2]},
//!              "2": {"rank": 0, "torsion": [2]}, "1,2": {"rank": 0, "torsion": []}}}
//! ```
//!
//! Subset keys join labels with commas in ground-set order; any order is
//! accepted on input. Integers of magnitude at least 2^53 are written as
//! strings and read back from either form.

use anyhow::{anyhow, bail, Context, Result};
use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, ToPrimitive};
use serde_json::{json, Map, Value};

use ringmat_core::group::canonicalize;
use ringmat_core::{DMod, DvrMatroid, GroundSet, IntMatrix, Realization, Subset, ZMatroid};

const SAFE_INTEGER: u64 = 1 << 53;

/// A parsed matroid plus notes about entries that needed canonicalizing.
#[derive(Clone, Debug)]
pub struct MatroidDocument {
    pub matroid: ZMatroid,
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct RealizationDocument {
    pub realization: Realization,
    pub ground: GroundSet,
}

pub fn int_value(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(v) if n.magnitude() < &BigUint::from(SAFE_INTEGER) => json!(v),
        _ => Value::String(n.to_string()),
    }
}

pub fn nat_value(n: &BigUint) -> Value {
    int_value(&BigInt::from(n.clone()))
}

fn parse_int(v: &Value, what: &str) -> Result<BigInt> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .or_else(|| n.as_u64().map(BigInt::from))
            .ok_or_else(|| anyhow!("{what}: {n} is not an integer")),
        Value::String(s) => s
            .trim()
            .parse::<BigInt>()
            .map_err(|_| anyhow!("{what}: {s:?} is not an integer")),
        other => bail!("{what}: expected an integer, found {other}"),
    }
}

fn parse_nat(v: &Value, what: &str) -> Result<BigUint> {
    let n = parse_int(v, what)?;
    if n.is_negative() {
        bail!("{what}: {n} is negative");
    }
    Ok(n.magnitude().clone())
}

fn parse_count(v: &Value, what: &str) -> Result<usize> {
    parse_nat(v, what)?
        .to_usize()
        .ok_or_else(|| anyhow!("{what}: value too large"))
}

fn parse_label(v: &Value) -> Result<String> {
    let s = match v {
        Value::String(s) => s.clone(),
        Value::Number(n) => n.to_string(),
        other => bail!("label must be a string or number, found {other}"),
    };
    if s.is_empty() || s.contains(',') {
        bail!("label {s:?} must be nonempty and contain no comma");
    }
    Ok(s)
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str, doc: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| anyhow!("{doc}: missing field `{key}`"))
}

fn as_object<'a>(v: &'a Value, what: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| anyhow!("{what} must be a JSON object"))
}

fn as_array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| anyhow!("{what} must be a JSON array"))
}

pub fn parse_ground(v: &Value) -> Result<GroundSet> {
    let labels = as_array(v, "ground_set")?
        .iter()
        .map(parse_label)
        .collect::<Result<Vec<_>>>()?;
    Ok(GroundSet::new(labels)?)
}

/// Parses a subset key such as `"2,1"` into a bitmask.
pub fn parse_key(ground: &GroundSet, key: &str) -> Result<Subset> {
    if key.trim().is_empty() {
        return Ok(0);
    }
    let mut mask = 0;
    for label in key.split(',').map(str::trim) {
        let bit = 1 << ground.index_of(label).with_context(|| format!("subset key {key:?}"))?;
        if mask & bit != 0 {
            bail!("subset key {key:?} repeats label {label:?}");
        }
        mask |= bit;
    }
    Ok(mask)
}

/// Reads the `modules` object into a subset-indexed table.
fn parse_table<T>(
    ground: &GroundSet,
    modules: &Value,
    mut entry: impl FnMut(&str, &Map<String, Value>) -> Result<T>,
) -> Result<Vec<T>> {
    let modules = as_object(modules, "modules")?;
    let mut slots: Vec<Option<T>> = (0..1usize << ground.len()).map(|_| None).collect();
    for (key, v) in modules {
        let a = parse_key(ground, key)?;
        let obj = as_object(v, &format!("module {key:?}"))?;
        if slots[a as usize].replace(entry(key, obj)?).is_some() {
            bail!("subset {} listed twice", ground.show(a));
        }
    }
    slots
        .into_iter()
        .enumerate()
        .map(|(a, s)| s.ok_or_else(|| anyhow!("missing module for subset {}", ground.show(a as Subset))))
        .collect()
}

impl MatroidDocument {
    pub fn parse(text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text).context("malformed JSON")?;
        Self::from_value(&v)
    }

    pub fn from_value(v: &Value) -> Result<Self> {
        let obj = as_object(v, "matroid document")?;
        let ground = parse_ground(field(obj, "ground_set", "matroid document")?)?;
        let mut warnings = Vec::new();
        let table = parse_table(&ground, field(obj, "modules", "matroid document")?, |key, m| {
            let rank = parse_count(field(m, "rank", key)?, "rank")?;
            let torsion = match m.get("torsion") {
                None => Vec::new(),
                Some(t) => as_array(t, "torsion")?
                    .iter()
                    .map(|x| parse_nat(x, "torsion factor"))
                    .collect::<Result<Vec<_>>>()?,
            };
            let g = canonicalize(&torsion, rank);
            if g.rank() != rank || g.factors() != torsion.as_slice() {
                warnings.push(format!(
                    "module {key:?}: canonicalized {} to {g}",
                    raw_display(rank, &torsion)
                ));
            }
            Ok(g)
        })?;
        Ok(MatroidDocument {
            matroid: ZMatroid::new(ground, table)?,
            warnings,
        })
    }

    pub fn emit(m: &ZMatroid) -> Value {
        emit_table(m.ground(), m.table(), |g| {
            json!({
                "rank": g.rank(),
                "torsion": g.factors().iter().map(nat_value).collect::<Vec<_>>(),
            })
        })
    }
}

fn raw_display(rank: usize, torsion: &[BigUint]) -> String {
    let parts: Vec<String> = torsion.iter().map(ToString::to_string).collect();
    format!("rank {rank} torsion [{}]", parts.join(","))
}

fn emit_table<M>(ground: &GroundSet, table: &[M], entry: impl Fn(&M) -> Value) -> Value {
    let mut modules = Map::new();
    for (a, m) in table.iter().enumerate() {
        modules.insert(ground.key(a as Subset), entry(m));
    }
    json!({
        "ground_set": ground.labels(),
        "modules": modules,
    })
}

/// Emits a DVR matroid with `{"rank": r, "lambda": [..]}` entries.
pub fn emit_dvr(m: &DvrMatroid) -> Value {
    emit_table(m.ground(), m.table(), |d| json!({"rank": d.rank(), "lambda": d.lambda()}))
}

pub fn parse_dvr(v: &Value) -> Result<DvrMatroid> {
    let obj = as_object(v, "matroid document")?;
    let ground = parse_ground(field(obj, "ground_set", "matroid document")?)?;
    let table = parse_table(&ground, field(obj, "modules", "matroid document")?, |key, m| {
        let rank = parse_count(field(m, "rank", key)?, "rank")?;
        let lambda = match m.get("lambda") {
            None => Vec::new(),
            Some(l) => as_array(l, "lambda")?
                .iter()
                .map(|x| {
                    parse_count(x, "lambda part")?
                        .try_into()
                        .map_err(|_| anyhow!("lambda part too large"))
                })
                .collect::<Result<Vec<u32>>>()?,
        };
        Ok(DMod::new(rank, lambda))
    })?;
    Ok(DvrMatroid::new(ground, table)?)
}

fn parse_column(v: &Value, what: &str) -> Result<Vec<BigInt>> {
    as_array(v, what)?
        .iter()
        .map(|x| parse_int(x, what))
        .collect()
}

fn matrix_from_columns(n: usize, cols: &[Vec<BigInt>], what: &str) -> Result<IntMatrix> {
    if let Some(c) = cols.iter().find(|c| c.len() != n) {
        bail!("{what}: column of length {} in ambient dimension {n}", c.len());
    }
    Ok(IntMatrix::from_columns(n, cols).expect("lengths checked"))
}

impl RealizationDocument {
    pub fn parse(text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text).context("malformed JSON")?;
        Self::from_value(&v)
    }

    pub fn from_value(v: &Value) -> Result<Self> {
        let obj = as_object(v, "realization document")?;
        let relations = match obj.get("ambient_relations") {
            None => Vec::new(),
            Some(r) => as_array(r, "ambient_relations")?
                .iter()
                .map(|c| parse_column(c, "ambient relation"))
                .collect::<Result<Vec<_>>>()?,
        };
        let gens_obj = as_object(field(obj, "generators", "realization document")?, "generators")?;
        let mut labels = Vec::new();
        let mut gens = Vec::new();
        for (label, col) in gens_obj {
            labels.push(parse_label(&Value::String(label.clone()))?);
            gens.push(parse_column(col, &format!("generator {label:?}"))?);
        }
        let declared = obj.get("ambient_dim").map(|d| parse_count(d, "ambient_dim")).transpose()?;
        let n = declared
            .or_else(|| relations.first().map(Vec::len))
            .or_else(|| gens.first().map(Vec::len))
            .ok_or_else(|| anyhow!("cannot infer ambient dimension; set `ambient_dim`"))?;
        let rel = matrix_from_columns(n, &relations, "ambient_relations")?;
        let gen = matrix_from_columns(n, &gens, "generators")?;
        Ok(RealizationDocument {
            realization: Realization::new(rel, gen)?,
            ground: GroundSet::new(labels)?,
        })
    }

    pub fn emit(r: &Realization, ground: &GroundSet) -> Value {
        let column = |m: &IntMatrix, j: usize| -> Value {
            Value::Array(m.column(j).iter().map(int_value).collect())
        };
        let rel = r.ambient_relations();
        let mut generators = Map::new();
        for (j, label) in ground.labels().iter().enumerate() {
            generators.insert(label.clone(), column(r.generators(), j));
        }
        json!({
            "ambient_dim": r.dim(),
            "ambient_relations": (0..rel.cols()).map(|j| column(rel, j)).collect::<Vec<_>>(),
            "generators": generators,
        })
    }
}

/// `{key: value}` rendering of a subset-indexed list, e.g. multiplicities.
pub fn emit_subset_map<T>(ground: &GroundSet, values: &[T], f: impl Fn(&T) -> Value) -> Value {
    let map: Map<String, Value> = values
        .iter()
        .enumerate()
        .map(|(a, v)| (ground.key(a as Subset), f(v)))
        .collect();
    Value::Object(map)
}

/// Deterministic pretty JSON with a trailing newline.
pub fn to_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}
