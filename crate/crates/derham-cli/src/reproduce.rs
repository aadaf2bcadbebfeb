//! The `reproduce` subcommand: a fixed list of worked computations, each
//! compared against a golden output.
//!
//! The golden files live under `golden/` in the crate and are compiled
//! into the binary, so a release binary can check itself with no files
//! on disk.  `--golden DIR` switches to reading `DIR/<item>.txt` at run
//! time instead, which is how a modified or regenerated set is checked.
//!
//! Items run with the default quadrature tolerance and zero-test seed
//! regardless of `--seed` and `--tol`, so the golden outputs have one
//! meaning.

use std::path::Path;

use derham::chains::rat;
use derham::forms::angular_form;
use derham::periods::{integrate_chain, period_matrix, winding_circle, SmoothSimplex};
use derham::spaces::{mayer_vietoris, models};
use derham::{
    BettiProfile, CoverSpec, DifferentialForm, Expr, MultiIndex, QuadratureSpec, SingularChain,
    ZeroTest,
};

use crate::render;
use crate::{CliError, Outcome};

struct Item {
    name: &'static str,
    embedded: &'static str,
    produce: fn() -> Result<String, CliError>,
}

macro_rules! item {
    ($name:literal, $produce:path) => {
        Item {
            name: $name,
            embedded: include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/golden/", $name, ".txt")),
            produce: $produce,
        }
    };
}

const ITEMS: &[Item] = &[
    item!("circle-betti", circle_betti),
    item!("torus-betti", torus_betti),
    item!("kunneth-circle-circle", kunneth_circle_circle),
    item!("sphere-duality", sphere_duality),
    item!("arc-cover-mv", arc_cover_mv),
    item!("arc-cover-zigzag", arc_cover_zigzag),
    item!("derivative-of-xy", derivative_of_xy),
    item!("angular-form-closed", angular_form_closed),
    item!("winding-period", winding_period),
    item!("exact-form-period", exact_form_period),
    item!("period-matrix", period_matrix_item),
    item!("stokes-triangle", stokes_triangle),
];

pub fn run(golden: Option<&Path>, json: bool) -> Result<Outcome, CliError> {
    let mut lines: Vec<String> = Vec::new();
    let mut entries: Vec<serde_json::Value> = Vec::new();
    let mut passed = 0usize;

    for item in ITEMS {
        let want: Result<String, String> = match golden {
            None => Ok(item.embedded.to_string()),
            Some(dir) => std::fs::read_to_string(dir.join(format!("{}.txt", item.name)))
                .map_err(|e| format!("golden file unreadable: {e}")),
        };
        let got: Result<String, String> = (item.produce)().map_err(|e| match e {
            CliError::Validation(msg) | CliError::Undecided(msg) => msg,
        });

        match (want, got) {
            (Ok(want), Ok(got)) if want.trim_end() == got.trim_end() => {
                passed += 1;
                lines.push(format!("{}: pass", item.name));
                entries.push(serde_json::json!({ "name": item.name, "status": "pass" }));
            }
            (Ok(want), Ok(got)) => {
                lines.push(format!("{}: FAIL", item.name));
                lines.push(indent("expected", &want));
                lines.push(indent("got", &got));
                entries.push(serde_json::json!({
                    "name": item.name,
                    "status": "fail",
                    "expected": want.trim_end(),
                    "got": got.trim_end(),
                }));
            }
            (Err(msg), _) | (_, Err(msg)) => {
                lines.push(format!("{}: FAIL", item.name));
                lines.push(format!("  {msg}"));
                entries.push(serde_json::json!({
                    "name": item.name,
                    "status": "fail",
                    "error": msg,
                }));
            }
        }
    }

    let total = ITEMS.len();
    let text = if json {
        render::json(&serde_json::json!({
            "items": entries,
            "passed": passed,
            "total": total,
        }))
    } else {
        lines.push(format!("passed {passed} of {total}"));
        lines.join("\n")
    };
    Ok(Outcome {
        text,
        code: if passed == total { 0 } else { 1 },
    })
}

fn indent(label: &str, text: &str) -> String {
    let mut out = format!("  {label}:");
    for line in text.trim_end().lines() {
        out.push_str("\n    ");
        out.push_str(line);
    }
    out
}

// ---------------------------------------------------------------------
// The items themselves
// ---------------------------------------------------------------------

fn xy_coords() -> Vec<String> {
    vec!["x".to_string(), "y".to_string()]
}

fn circle_betti() -> Result<String, CliError> {
    Ok(render::betti_line(&models::circle().betti()))
}

fn torus_betti() -> Result<String, CliError> {
    Ok(render::betti_line(&models::torus().betti()))
}

fn kunneth_circle_circle() -> Result<String, CliError> {
    let circle = BettiProfile::of_complex(&models::circle(), true);
    Ok(render::betti_line(circle.kunneth(&circle).numbers()))
}

fn sphere_duality() -> Result<String, CliError> {
    let sphere = BettiProfile::of_complex(&models::sphere(), true);
    Ok(render::duality_text(&sphere.poincare_duality(2)))
}

/// Two contractible arcs meeting in two points, solved by dimension
/// counting alone.
fn arc_cover_mv() -> Result<String, CliError> {
    let spec = CoverSpec::new(vec![1, 0], vec![1, 0], vec![2, 0], vec![(0, 0), (0, 0)])?;
    Ok(render::mv_text(&spec.solve()))
}

/// The same cover of the triangle circle, but through the full long
/// exact sequence of simplicial cochains.
fn arc_cover_zigzag() -> Result<String, CliError> {
    let circle = models::circle();
    let cover = mayer_vietoris(&circle, &[vec![0, 1], vec![1, 2]], &[vec![0, 2]])?;
    let report = cover.zigzag();
    Ok(render::zigzag_text(&cover, &report))
}

fn derivative_of_xy() -> Result<String, CliError> {
    let xy = DifferentialForm::function(xy_coords(), Expr::var("x") * Expr::var("y"))?;
    Ok(render::form_text(&xy.d()))
}

fn angular_form_closed() -> Result<String, CliError> {
    let verdict = angular_form().is_closed_with(&ZeroTest::default());
    Ok(format!("closed: {}", render::verdict_word(verdict)))
}

fn winding_period() -> Result<String, CliError> {
    let chain = SingularChain::from_simplex(winding_circle(1));
    let value = integrate_chain(&angular_form(), &chain, &QuadratureSpec::default())?;
    Ok(render::num9(value))
}

/// The derivative of a function has zero period over any cycle.
fn exact_form_period() -> Result<String, CliError> {
    let f = DifferentialForm::function(
        xy_coords(),
        Expr::pow(Expr::var("x"), 2) * Expr::var("y"),
    )?;
    let chain = SingularChain::from_simplex(winding_circle(1));
    let value = integrate_chain(&f.d(), &chain, &QuadratureSpec::default())?;
    Ok(render::num9(value))
}

/// The angular form against one and two turns, with an exact form as a
/// second row; rank 1 is the Betti number of the punctured plane.
fn period_matrix_item() -> Result<String, CliError> {
    let xy = DifferentialForm::function(xy_coords(), Expr::var("x") * Expr::var("y"))?;
    let forms = vec![angular_form(), xy.d()];
    let cycles = vec![
        SingularChain::from_simplex(winding_circle(1)),
        SingularChain::from_simplex(winding_circle(2)),
    ];
    let matrix = period_matrix(
        &forms,
        &cycles,
        &QuadratureSpec::default(),
        &ZeroTest::default(),
    )?;
    Ok(render::period_block(&matrix))
}

/// `∫_{∂Δ} x dy = ∫_Δ dx∧dy = 1/2` on the standard triangle.
fn stokes_triangle() -> Result<String, CliError> {
    let x_dy = DifferentialForm::new(
        xy_coords(),
        1,
        vec![(MultiIndex::new(vec![2])?, Expr::var("x"))],
    )?;
    let triangle = SmoothSimplex::affine(
        xy_coords(),
        &[
            vec![rat(0), rat(0)],
            vec![rat(1), rat(0)],
            vec![rat(0), rat(1)],
        ],
    )?;
    let chain = SingularChain::from_simplex(triangle);
    let spec = QuadratureSpec::default();
    let boundary_side = integrate_chain(&x_dy, &chain.boundary()?, &spec)?;
    let derivative_side = integrate_chain(&x_dy.d(), &chain, &spec)?;
    Ok(render::stokes_block(boundary_side, derivative_side))
}
