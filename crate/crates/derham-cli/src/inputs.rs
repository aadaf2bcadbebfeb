//! Resolution of command-line arguments into library values.
//!
//! Every input argument goes through the same funnel: a handful of
//! built-in names are recognized first, anything starting with `{` or
//! `[` is treated as inline JSON, and everything else is read as a file
//! path.

use derham::forms::angular_form;
use derham::io::{ChainDoc, CoverDoc, Document, FormDoc, MapDoc, ProfileDoc, SpaceDoc};
use derham::periods::winding_circle;
use derham::spaces::models;
use derham::{BettiProfile, CoverSpec, DifferentialForm, SimplicialComplex, SingularChain, SmoothMap};

use crate::CliError;

/// Returns inline JSON as-is, otherwise reads the argument as a file.
fn read_source(arg: &str) -> Result<String, CliError> {
    let trimmed = arg.trim_start();
    if trimmed.starts_with('{') || trimmed.starts_with('[') {
        return Ok(arg.to_string());
    }
    std::fs::read_to_string(arg)
        .map_err(|e| CliError::validation(format!("cannot read `{arg}`: {e}")))
}

const SPACE_NAMES: &str = "point, interval, circle, disk, sphere, torus";

fn builtin_space(name: &str) -> Option<SimplicialComplex> {
    match name {
        "point" => Some(models::point()),
        "interval" => Some(models::interval()),
        "circle" => Some(models::circle()),
        "disk" => Some(models::disk()),
        "sphere" => Some(models::sphere()),
        "torus" => Some(models::torus()),
        _ => None,
    }
}

/// A simplicial complex: built-in name or space document.
pub fn load_complex(arg: &str) -> Result<SimplicialComplex, CliError> {
    if let Some(complex) = builtin_space(arg) {
        return Ok(complex);
    }
    let text = read_source(arg)
        .map_err(|e| amend(e, format!("not a built-in space ({SPACE_NAMES}) and ")))?;
    Ok(SpaceDoc::from_json(&text)?.to_space()?)
}

/// A Betti profile: built-in name, profile document, or space document.
///
/// The built-in complexes are compact and orientable, so their profiles
/// carry both flags; `line` and `punctured-plane` are the two standard
/// non-compact profiles.
pub fn load_profile(arg: &str) -> Result<BettiProfile, CliError> {
    if let Some(complex) = builtin_space(arg) {
        return Ok(BettiProfile::of_complex(&complex, true));
    }
    if arg == "line" {
        return Ok(BettiProfile::new(vec![1, 0], false, true));
    }
    if arg == "punctured-plane" {
        return Ok(BettiProfile::new(vec![1, 1], false, true));
    }
    let text = read_source(arg).map_err(|e| {
        amend(
            e,
            format!("not a built-in profile ({SPACE_NAMES}, line, punctured-plane) and "),
        )
    })?;
    if let Ok(doc) = ProfileDoc::from_json(&text) {
        return Ok(doc.to_profile());
    }
    match SpaceDoc::from_json(&text) {
        Ok(doc) => Ok(doc.to_profile()?),
        Err(e) => Err(CliError::validation(format!(
            "`{arg}` is neither a profile document nor a space document: {e}"
        ))),
    }
}

/// A differential form: `omega0` (the angular form on the punctured
/// plane) or a form document.
pub fn load_form(arg: &str) -> Result<DifferentialForm, CliError> {
    if arg == "omega0" {
        return Ok(angular_form());
    }
    let text =
        read_source(arg).map_err(|e| amend(e, "not the built-in form (omega0) and ".to_string()))?;
    Ok(FormDoc::from_json(&text)?.to_form()?)
}

/// A smooth map document.
pub fn load_map(arg: &str) -> Result<SmoothMap, CliError> {
    let text = read_source(arg)?;
    Ok(MapDoc::from_json(&text)?.to_map()?)
}

/// A singular chain: `winding-K` (the unit circle traversed `K` times,
/// `K` a possibly negative integer) or a chain document.
pub fn load_chain(arg: &str) -> Result<SingularChain, CliError> {
    if let Some(turns) = arg.strip_prefix("winding-").and_then(|s| s.parse::<i64>().ok()) {
        return Ok(SingularChain::from_simplex(winding_circle(turns)));
    }
    let text = read_source(arg)
        .map_err(|e| amend(e, "not a built-in chain (winding-K) and ".to_string()))?;
    Ok(ChainDoc::from_json(&text)?.to_chain()?)
}

/// A cover document for the Mayer–Vietoris solver.
pub fn load_cover(arg: &str) -> Result<CoverSpec, CliError> {
    let text = read_source(arg)?;
    Ok(CoverDoc::from_json(&text)?.to_cover()?)
}

/// A list of maximal simplices, e.g. `[[0,1],[1,2]]`.
pub fn parse_maximal(arg: &str) -> Result<Vec<Vec<usize>>, CliError> {
    let text = read_source(arg)?;
    serde_json::from_str(&text).map_err(|e| {
        CliError::validation(format!("`{arg}` is not a list of simplices: {e}"))
    })
}

/// Prefixes extra context onto a validation error message.
fn amend(error: CliError, prefix: String) -> CliError {
    match error {
        CliError::Validation(msg) => CliError::Validation(format!("{prefix}{msg}")),
        other => other,
    }
}
