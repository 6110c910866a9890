//! Instance files: a canonical JSON encoding of named profiles and the
//! schema-checked decoder for it. Canonical means sorted object keys,
//! exact values as strings, and item arrays in ground-set order, so
//! golden-file comparisons work at the byte level.
//!
//! Decode errors carry a JSON pointer to the offending node.

use std::fs;
use std::path::Path;

use serde_json::{Map, Value};
use thiserror::Error;

use crate::instances::NamedInstance;
use crate::numeric::{parse_rational, ExactValue};
use crate::setfn::{CoverageAtom, GroundSet, Polarity, Profile, ReprView, SetFunction};

#[derive(Error, Debug)]
pub enum IoError {
    #[error(transparent)]
    File(#[from] std::io::Error),
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{pointer}: {message}")]
    Schema { pointer: String, message: String },
}

fn schema(pointer: impl Into<String>, message: impl ToString) -> IoError {
    IoError::Schema {
        pointer: pointer.into(),
        message: message.to_string(),
    }
}

fn value_string(v: &ExactValue) -> Value {
    Value::String(v.to_string())
}

fn setfn_to_value(f: &SetFunction) -> Value {
    let ground = f.ground();
    let mut obj = Map::new();
    match f.repr() {
        ReprView::Dense(values) => {
            obj.insert("repr".into(), "dense".into());
            obj.insert(
                "values".into(),
                Value::Array(values.iter().map(value_string).collect()),
            );
        }
        ReprView::Additive(values) => {
            obj.insert("repr".into(), "additive".into());
            obj.insert(
                "values".into(),
                Value::Array(values.iter().map(value_string).collect()),
            );
        }
        ReprView::Coverage(atoms) => {
            obj.insert("repr".into(), "coverage".into());
            let atoms = atoms
                .iter()
                .map(|a| {
                    let mut atom = Map::new();
                    atom.insert(
                        "items".into(),
                        Value::Array(
                            a.atom.names(ground).into_iter().map(Value::String).collect(),
                        ),
                    );
                    atom.insert("weight".into(), value_string(&a.weight));
                    Value::Object(atom)
                })
                .collect();
            obj.insert("atoms".into(), Value::Array(atoms));
        }
        ReprView::Leveled { levels, values } => {
            obj.insert("repr".into(), "leveled".into());
            obj.insert(
                "levels".into(),
                Value::Array(levels.iter().map(|&l| Value::from(l)).collect()),
            );
            obj.insert(
                "values".into(),
                Value::Array(values.iter().map(value_string).collect()),
            );
        }
        ReprView::Cs24 { agent, k } => {
            obj.insert("repr".into(), "cs24".into());
            obj.insert("agent".into(), Value::from(agent as u64));
            obj.insert("k".into(), Value::String(k.to_string()));
        }
    }
    Value::Object(obj)
}

/// JSON form of an instance, with sorted keys throughout.
pub fn instance_to_value(inst: &NamedInstance) -> Value {
    let mut root = Map::new();
    root.insert(
        "agents".into(),
        Value::Array(inst.profile.agents().iter().map(setfn_to_value).collect()),
    );
    if let Some(bound) = &inst.claimed_bound {
        root.insert("claimed_bound".into(), value_string(bound));
    }
    root.insert(
        "ground".into(),
        Value::Array(
            inst.profile
                .ground()
                .names()
                .iter()
                .cloned()
                .map(Value::String)
                .collect(),
        ),
    );
    root.insert("id".into(), Value::String(inst.id.clone()));
    root.insert(
        "polarity".into(),
        match inst.profile.polarity() {
            Polarity::Chores => "chores".into(),
            Polarity::Goods => "goods".into(),
        },
    );
    root.insert("provenance".into(), Value::String(inst.provenance.clone()));
    Value::Object(root)
}

/// Canonical file text: pretty-printed sorted-key JSON, newline-terminated.
pub fn to_canonical_json(inst: &NamedInstance) -> String {
    let mut text =
        serde_json::to_string_pretty(&instance_to_value(inst)).expect("value serializes");
    text.push('\n');
    text
}

pub fn save_instance(inst: &NamedInstance, path: impl AsRef<Path>) -> Result<(), IoError> {
    Ok(fs::write(path, to_canonical_json(inst))?)
}

pub fn load_instance(path: impl AsRef<Path>) -> Result<NamedInstance, IoError> {
    parse_instance(&fs::read_to_string(path)?)
}

pub fn parse_instance(text: &str) -> Result<NamedInstance, IoError> {
    instance_from_value(&serde_json::from_str(text)?)
}

fn as_object<'a>(v: &'a Value, pointer: &str) -> Result<&'a Map<String, Value>, IoError> {
    v.as_object().ok_or_else(|| schema(pointer, "expected an object"))
}

fn as_array<'a>(v: &'a Value, pointer: &str) -> Result<&'a Vec<Value>, IoError> {
    v.as_array().ok_or_else(|| schema(pointer, "expected an array"))
}

fn as_str<'a>(v: &'a Value, pointer: &str) -> Result<&'a str, IoError> {
    v.as_str().ok_or_else(|| schema(pointer, "expected a string"))
}

fn get<'a>(
    map: &'a Map<String, Value>,
    key: &str,
    pointer: &str,
) -> Result<&'a Value, IoError> {
    map.get(key)
        .ok_or_else(|| schema(pointer, format!("missing key {key:?}")))
}

fn reject_unknown_keys(
    map: &Map<String, Value>,
    known: &[&str],
    pointer: &str,
) -> Result<(), IoError> {
    for key in map.keys() {
        if !known.contains(&key.as_str()) {
            return Err(schema(format!("{pointer}/{key}"), "unknown key"));
        }
    }
    Ok(())
}

fn parse_value(v: &Value, pointer: &str) -> Result<ExactValue, IoError> {
    as_str(v, pointer)?
        .parse::<ExactValue>()
        .map_err(|e| schema(pointer, e))
}

fn parse_values(list: &Value, pointer: &str) -> Result<Vec<ExactValue>, IoError> {
    as_array(list, pointer)?
        .iter()
        .enumerate()
        .map(|(j, v)| parse_value(v, &format!("{pointer}/{j}")))
        .collect()
}

fn setfn_from_value(
    v: &Value,
    ground: &GroundSet,
    pointer: &str,
) -> Result<SetFunction, IoError> {
    let obj = as_object(v, pointer)?;
    let repr_pointer = format!("{pointer}/repr");
    let repr = as_str(get(obj, "repr", pointer)?, &repr_pointer)?;
    let own_error = |e| schema(pointer, e);
    match repr {
        "dense" => {
            reject_unknown_keys(obj, &["repr", "values"], pointer)?;
            let values = parse_values(get(obj, "values", pointer)?, &format!("{pointer}/values"))?;
            SetFunction::dense(ground.clone(), values).map_err(own_error)
        }
        "additive" => {
            reject_unknown_keys(obj, &["repr", "values"], pointer)?;
            let values = parse_values(get(obj, "values", pointer)?, &format!("{pointer}/values"))?;
            SetFunction::additive(ground.clone(), values).map_err(own_error)
        }
        "coverage" => {
            reject_unknown_keys(obj, &["atoms", "repr"], pointer)?;
            let atoms_pointer = format!("{pointer}/atoms");
            let list = as_array(get(obj, "atoms", pointer)?, &atoms_pointer)?;
            let mut atoms = Vec::with_capacity(list.len());
            for (j, entry) in list.iter().enumerate() {
                let atom_pointer = format!("{atoms_pointer}/{j}");
                let atom_obj = as_object(entry, &atom_pointer)?;
                reject_unknown_keys(atom_obj, &["items", "weight"], &atom_pointer)?;
                let items_pointer = format!("{atom_pointer}/items");
                let names = as_array(get(atom_obj, "items", &atom_pointer)?, &items_pointer)?;
                let mut mask = 0u32;
                for (t, name) in names.iter().enumerate() {
                    let name_pointer = format!("{items_pointer}/{t}");
                    let name = as_str(name, &name_pointer)?;
                    let index = ground
                        .index_of(name)
                        .ok_or_else(|| schema(&name_pointer, format!("unknown item {name:?}")))?;
                    mask |= 1 << index;
                }
                let weight = parse_value(
                    get(atom_obj, "weight", &atom_pointer)?,
                    &format!("{atom_pointer}/weight"),
                )?;
                atoms.push(CoverageAtom {
                    atom: crate::setfn::Bundle::from_mask(mask, ground)
                        .map_err(|e| schema(&items_pointer, e))?,
                    weight,
                });
            }
            SetFunction::coverage(ground.clone(), atoms).map_err(own_error)
        }
        "leveled" => {
            reject_unknown_keys(obj, &["levels", "repr", "values"], pointer)?;
            let levels_pointer = format!("{pointer}/levels");
            let levels = as_array(get(obj, "levels", pointer)?, &levels_pointer)?
                .iter()
                .enumerate()
                .map(|(j, v)| {
                    v.as_u64()
                        .filter(|&l| l <= u32::MAX as u64)
                        .map(|l| l as u32)
                        .ok_or_else(|| {
                            schema(format!("{levels_pointer}/{j}"), "expected a level index")
                        })
                })
                .collect::<Result<Vec<u32>, IoError>>()?;
            let values = parse_values(get(obj, "values", pointer)?, &format!("{pointer}/values"))?;
            SetFunction::leveled(ground.clone(), levels, values).map_err(own_error)
        }
        "cs24" => {
            reject_unknown_keys(obj, &["agent", "k", "repr"], pointer)?;
            let agent_pointer = format!("{pointer}/agent");
            let agent = get(obj, "agent", pointer)?
                .as_u64()
                .ok_or_else(|| schema(&agent_pointer, "expected an agent index"))?;
            let k_pointer = format!("{pointer}/k");
            let k = parse_rational(as_str(get(obj, "k", pointer)?, &k_pointer)?)
                .map_err(|e| schema(&k_pointer, e))?;
            SetFunction::cs24(ground.clone(), agent as usize, k).map_err(own_error)
        }
        other => Err(schema(repr_pointer, format!("unknown repr {other:?}"))),
    }
}

pub fn instance_from_value(v: &Value) -> Result<NamedInstance, IoError> {
    let root = as_object(v, "")?;
    reject_unknown_keys(
        root,
        &["agents", "claimed_bound", "ground", "id", "polarity", "provenance"],
        "",
    )?;

    let ground_names = as_array(get(root, "ground", "")?, "/ground")?
        .iter()
        .enumerate()
        .map(|(j, v)| as_str(v, &format!("/ground/{j}")).map(str::to_string))
        .collect::<Result<Vec<String>, IoError>>()?;
    let ground = GroundSet::new(ground_names).map_err(|e| schema("/ground", e))?;

    let polarity = match as_str(get(root, "polarity", "")?, "/polarity")? {
        "chores" => Polarity::Chores,
        "goods" => Polarity::Goods,
        other => {
            return Err(schema(
                "/polarity",
                format!("expected \"chores\" or \"goods\", got {other:?}"),
            ))
        }
    };

    let id = as_str(get(root, "id", "")?, "/id")?.to_string();
    let provenance = as_str(get(root, "provenance", "")?, "/provenance")?.to_string();
    let claimed_bound = match root.get("claimed_bound") {
        None => None,
        Some(v) => Some(parse_value(v, "/claimed_bound")?),
    };

    let agent_list = as_array(get(root, "agents", "")?, "/agents")?;
    let mut agents = Vec::with_capacity(agent_list.len());
    for (i, entry) in agent_list.iter().enumerate() {
        agents.push(setfn_from_value(entry, &ground, &format!("/agents/{i}"))?);
    }
    let profile = Profile::new(agents, polarity).map_err(|e| schema("/agents", e))?;

    Ok(NamedInstance {
        id,
        profile,
        provenance,
        claimed_bound,
    })
}
