//! Reading JSON arguments given inline or as file paths.

use anyhow::{anyhow, bail, Context, Result};
use klein_lattice::cohomology::GGroup;
use klein_lattice::group::{FiniteGroup, GroupJson};
use klein_lattice::lattice::{builtin, IntegerLattice};
use klein_lattice::num::{self, IntVec, Rat, RatVec};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::path::Path;

fn looks_inline(s: &str) -> bool {
    matches!(s.trim_start().chars().next(), Some('[' | '{' | '"' | '-' | '0'..='9'))
}

/// Raw JSON of an argument; a report written by this tool is unwrapped to
/// its `result`.
pub fn json_value(arg: &str) -> Result<Value> {
    let text = if Path::new(arg).is_file() {
        std::fs::read_to_string(arg).with_context(|| format!("reading {arg}"))?
    } else if looks_inline(arg) {
        arg.to_string()
    } else {
        bail!("{arg} is neither a file nor inline JSON");
    };
    let mut v: Value = serde_json::from_str(&text).with_context(|| format!("parsing JSON from {arg}"))?;
    if let Value::Object(map) = &mut v {
        if map.contains_key("request") && map.contains_key("result") {
            return Ok(map.remove("result").expect("checked"));
        }
    }
    Ok(v)
}

pub fn load<T: DeserializeOwned>(arg: &str) -> Result<T> {
    serde_json::from_value(json_value(arg)?).with_context(|| format!("interpreting {arg}"))
}

/// A lattice file, inline `{"rank", "gram"}` JSON, or a builtin name.
pub fn lattice(arg: &str) -> Result<IntegerLattice> {
    if Path::new(arg).is_file() || arg.trim_start().starts_with('{') || arg.trim_start().starts_with('"') {
        return match json_value(arg)? {
            Value::String(name) => Ok(builtin(&name)?),
            // Positive cones, Hodge lattices and certificates carry their lattice.
            Value::Object(mut m) if m.contains_key("lattice") => {
                serde_json::from_value(m.remove("lattice").expect("checked"))
                    .with_context(|| format!("interpreting the lattice inside {arg}"))
            }
            v => serde_json::from_value(v).with_context(|| format!("interpreting lattice {arg}")),
        };
    }
    Ok(builtin(arg)?)
}

/// A group name such as `S3` or `Z2xZ2`, or group JSON.
pub fn group(arg: &str) -> Result<FiniteGroup> {
    if Path::new(arg).is_file() || arg.trim_start().starts_with('{') {
        let j: GroupJson = load(arg)?;
        return Ok(FiniteGroup::try_from(j)?);
    }
    Ok(FiniteGroup::named(arg)?)
}

pub fn int_rows(arg: &str) -> Result<Vec<IntVec>> {
    #[derive(Deserialize)]
    struct Rows(#[serde(with = "num::json_int_rows")] Vec<IntVec>);
    Ok(load::<Rows>(arg)?.0)
}

pub fn rat_vec(arg: &str) -> Result<RatVec> {
    let v = json_value(arg)?;
    let items = v.as_array().ok_or_else(|| anyhow!("{arg}: expected a list of numbers"))?;
    items
        .iter()
        .map(|x| match x {
            Value::Number(n) => num::parse_rat(&n.to_string()).map_err(|e| anyhow!("{e}")),
            Value::String(s) => num::parse_rat(s).map_err(|e| anyhow!("{e}")),
            _ => Err(anyhow!("{arg}: entries must be integers or \"p/q\" strings")),
        })
        .collect::<Result<Vec<Rat>>>()
}

/// How the acting group acts on the coefficient group.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ActionInput {
    Trivial,
    /// Conjugation through a homomorphism given by the image of every element.
    Conjugation(Vec<usize>),
    /// Automorphisms for some acting elements, extended to the group they generate.
    Generators(Vec<(usize, Vec<usize>)>),
    /// The automorphism of every acting element.
    Table(Vec<Vec<usize>>),
}

pub fn action(arg: &str) -> Result<ActionInput> {
    if arg == "trivial" {
        return Ok(ActionInput::Trivial);
    }
    load(arg)
}

pub fn ggroup(acting: &str, carrier: &str, action_arg: &str) -> Result<GGroup> {
    let g = group(acting)?;
    let a = group(carrier)?;
    Ok(match action(action_arg)? {
        ActionInput::Trivial => GGroup::trivial_action(g, a),
        ActionInput::Conjugation(hom) => GGroup::conjugation(g, a, &hom)?,
        ActionInput::Generators(images) => GGroup::from_generator_action(g, a, &images)?,
        ActionInput::Table(table) => GGroup::new(g, a, table)?,
    })
}

pub fn usize_list(arg: &str) -> Result<Vec<usize>> {
    load(arg)
}
