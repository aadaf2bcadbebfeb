//! Text output for every subcommand.
//!
//! Human output leans on the canonical expression printer, so two runs
//! over the same input produce identical text; numbers are printed with
//! nine decimals, which is comfortably inside the default quadrature
//! tolerance.

use derham::chains::ZigzagReport;
use derham::periods::PeriodMatrix;
use derham::spaces::{DualityOutcome, MayerVietoris, MayerVietorisSolution};
use derham::{DifferentialForm, Expr, Verdict};

/// Pretty-printed JSON for `--json` output.
pub fn json(value: &serde_json::Value) -> String {
    serde_json::to_string_pretty(value).expect("JSON values serialize")
}

/// `[1, 2, 1]` — the standard Betti list rendering.
pub fn betti_line(betti: &[usize]) -> String {
    format!("{betti:?}")
}

/// A float with nine decimals; anything within rounding distance of
/// zero is printed as exactly zero so signs of vanishing values cannot
/// flicker.
pub fn num9(value: f64) -> String {
    let value = if value.abs() < 5e-10 { 0.0 } else { value };
    format!("{value:.9}")
}

pub fn verdict_word(verdict: Verdict) -> &'static str {
    match verdict {
        Verdict::Zero => "yes",
        Verdict::NonZero => "no",
        Verdict::Unknown => "unknown",
    }
}

/// Single-line form rendering: `y dx + x dy`, `-y/(x^2 + y^2) dx + …`,
/// `0` for the zero form.  Compound coefficients are parenthesized so
/// the term boundaries stay unambiguous.
pub fn form_text(form: &DifferentialForm) -> String {
    let mut out = String::new();
    for (index, coeff) in form.terms() {
        let wedge = index
            .indices()
            .iter()
            .map(|&i| format!("d{}", form.coords()[i - 1]))
            .collect::<Vec<_>>()
            .join("∧");
        let term = term_text(coeff, &wedge);
        if out.is_empty() {
            out = term;
        } else if let Some(positive) = term.strip_prefix('-') {
            out.push_str(" - ");
            out.push_str(positive);
        } else {
            out.push_str(" + ");
            out.push_str(&term);
        }
    }
    if out.is_empty() {
        "0".to_string()
    } else {
        out
    }
}

fn term_text(coeff: &Expr, wedge: &str) -> String {
    if wedge.is_empty() {
        return coeff.to_string();
    }
    let printed = coeff.to_string();
    if printed == "1" {
        return wedge.to_string();
    }
    if printed == "-1" {
        return format!("-{wedge}");
    }
    if matches!(coeff, Expr::Add(..) | Expr::Sub(..)) {
        format!("({printed}) {wedge}")
    } else {
        format!("{printed} {wedge}")
    }
}

/// Mayer–Vietoris solution: the Betti list when complete, otherwise a
/// degree-by-degree report of what is known and what rank is missing.
pub fn mv_text(solution: &MayerVietorisSolution) -> String {
    if let Some(betti) = solution.betti_numbers() {
        return betti_line(&betti);
    }
    let mut lines: Vec<String> = solution
        .betti
        .iter()
        .enumerate()
        .map(|(k, b)| match b {
            Some(b) => format!("b{k} = {b}"),
            None => format!("b{k} = undetermined"),
        })
        .collect();
    lines.push(format!(
        "missing comparison ranks at degrees {:?}; supply j_ranks for these degrees",
        solution.missing_j_ranks
    ));
    lines.join("\n")
}

pub fn duality_text(outcome: &DualityOutcome) -> String {
    match outcome {
        DualityOutcome::Refused { reason } => format!("refused: {reason}"),
        DualityOutcome::Checked {
            dimension,
            failures,
        } if failures.is_empty() => format!("holds at dimension {dimension}"),
        DualityOutcome::Checked {
            dimension,
            failures,
        } => {
            let mut lines = vec![format!("fails at dimension {dimension}:")];
            for f in failures {
                lines.push(format!(
                    "  b{} = {}, b{} = {}",
                    f.degree,
                    f.betti_low,
                    dimension - f.degree,
                    f.betti_high
                ));
            }
            lines.join("\n")
        }
    }
}

pub fn duality_json(outcome: &DualityOutcome) -> String {
    let value = match outcome {
        DualityOutcome::Refused { reason } => serde_json::json!({
            "status": "refused",
            "reason": reason,
        }),
        DualityOutcome::Checked {
            dimension,
            failures,
        } => serde_json::json!({
            "status": if failures.is_empty() { "holds" } else { "fails" },
            "dimension": dimension,
            "failures": failures.iter().map(|f| serde_json::json!({
                "degree": f.degree,
                "betti_low": f.betti_low,
                "betti_high": f.betti_high,
            })).collect::<Vec<_>>(),
        }),
    };
    json(&value)
}

/// The full zigzag report: Betti numbers of the pieces, the assembled
/// long-sequence dimensions, connecting ranks, and the exactness check.
pub fn zigzag_text(cover: &MayerVietoris, report: &ZigzagReport) -> String {
    let delta_ranks: Vec<usize> = report.delta.iter().map(|d| d.rank()).collect();
    [
        format!("u: {:?}", cover.u_betti),
        format!("v: {:?}", cover.v_betti),
        format!("intersection: {:?}", cover.intersection_betti),
        format!("union: {:?}", report.betti_a),
        format!("sequence dims: {:?}", report.sequence.dims()),
        format!("connecting ranks: {delta_ranks:?}"),
        format!(
            "exact: {}",
            if report.exactness.is_exact() { "yes" } else { "no" }
        ),
    ]
    .join("\n")
}

pub fn zigzag_json(cover: &MayerVietoris, report: &ZigzagReport) -> String {
    let delta_ranks: Vec<usize> = report.delta.iter().map(|d| d.rank()).collect();
    json(&serde_json::json!({
        "u": cover.u_betti,
        "v": cover.v_betti,
        "intersection": cover.intersection_betti,
        "union": report.betti_a,
        "sequence_dims": report.sequence.dims(),
        "connecting_ranks": delta_ranks,
        "exact": report.exactness.is_exact(),
    }))
}

/// Both sides of the boundary-versus-derivative comparison and their
/// difference.
pub fn stokes_block(boundary_side: f64, derivative_side: f64) -> String {
    [
        format!("boundary side: {}", num9(boundary_side)),
        format!("derivative side: {}", num9(derivative_side)),
        format!("residual: {}", num9((boundary_side - derivative_side).abs())),
    ]
    .join("\n")
}

/// The period matrix, row per form, followed by its numerical rank.
pub fn period_block(matrix: &PeriodMatrix) -> String {
    let mut lines: Vec<String> = matrix
        .entries
        .iter()
        .map(|row| {
            row.iter()
                .map(|&v| num9(v))
                .collect::<Vec<_>>()
                .join("  ")
        })
        .collect();
    lines.push(format!("rank: {}", matrix.rank));
    lines.join("\n")
}
