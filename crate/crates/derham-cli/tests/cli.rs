//! End-to-end tests of the `derham` binary: every test spawns the real
//! executable and checks stdout, stderr, and the exit code.

use std::path::Path;
use std::process::{Command, Output};

fn derham(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_derham"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("stdout is UTF-8")
}

fn stderr(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).expect("stderr is UTF-8")
}

fn code(output: &Output) -> i32 {
    output.status.code().expect("terminated by signal")
}

/// Writes a test input under `dir` and returns its path as a string.
fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).expect("write test input");
    path.to_string_lossy().into_owned()
}

const XY_FUNCTION: &str =
    r#"{"coords":["x","y"],"degree":0,"terms":[{"coeff":"x*y","dx":[]}]}"#;
const X_DY: &str = r#"{"coords":["x","y"],"degree":1,"terms":[{"coeff":"x","dx":[2]}]}"#;

// ---------------------------------------------------------------------
// Topology subcommands
// ---------------------------------------------------------------------

#[test]
fn betti_of_builtin_spaces() {
    for (name, expected) in [
        ("circle", "[1, 1]"),
        ("torus", "[1, 2, 1]"),
        ("sphere", "[1, 0, 1]"),
        ("point", "[1]"),
    ] {
        let out = derham(&["betti", "--in", name]);
        assert_eq!(code(&out), 0);
        assert_eq!(stdout(&out).trim(), expected, "betti of {name}");
    }
}

#[test]
fn betti_accepts_documents_and_inline_json() {
    let dir = tempfile::tempdir().expect("tempdir");
    let doc = r#"{"n": 3, "simplices": [[0,1],[1,2],[0,2]]}"#;
    let path = write(dir.path(), "circle.json", doc);

    let from_file = derham(&["betti", "--in", &path]);
    assert_eq!(code(&from_file), 0);
    assert_eq!(stdout(&from_file).trim(), "[1, 1]");

    let inline = derham(&["betti", "--in", doc]);
    assert_eq!(stdout(&inline).trim(), "[1, 1]");
}

#[test]
fn kunneth_convolves_builtin_profiles() {
    let circles = derham(&["kunneth", "--a", "circle", "--b", "circle"]);
    assert_eq!(code(&circles), 0);
    assert_eq!(stdout(&circles).trim(), "[1, 2, 1]");

    let with_point = derham(&["kunneth", "--a", "circle", "--b", "point"]);
    assert_eq!(stdout(&with_point).trim(), "[1, 1]");
}

#[test]
fn duality_reports_holds_refused_and_fails() {
    let torus = derham(&["duality", "--in", "torus"]);
    assert_eq!(code(&torus), 0);
    assert_eq!(stdout(&torus).trim(), "holds at dimension 2");

    // Non-compact profiles are refused, and a refusal is a computed
    // answer, not an error.
    let punctured = derham(&["duality", "--in", "punctured-plane"]);
    assert_eq!(code(&punctured), 0);
    assert!(stdout(&punctured).starts_with("refused:"));

    let dir = tempfile::tempdir().expect("tempdir");
    let lopsided = write(
        dir.path(),
        "profile.json",
        r#"{"betti":[2,1,1],"flags":{"compact":true,"oriented":true}}"#,
    );
    let failed = derham(&["duality", "--in", &lopsided]);
    assert_eq!(code(&failed), 0);
    let text = stdout(&failed);
    assert!(text.contains("fails at dimension 2"), "{text}");
    assert!(text.contains("b0 = 2, b2 = 1"), "{text}");
}

#[test]
fn mv_solves_covers_and_reports_missing_ranks() {
    let dir = tempfile::tempdir().expect("tempdir");

    // Two arcs meeting in two points: solvable by dimension counting.
    let arcs = write(
        dir.path(),
        "arcs.json",
        r#"{"u":{"contractible":true},"v":{"contractible":true},
            "intersection":{"disjoint_contractibles":2},
            "incidence":[[0,0],[0,0]]}"#,
    );
    let solved = derham(&["mv", "--in", &arcs]);
    assert_eq!(code(&solved), 0);
    assert_eq!(stdout(&solved).trim(), "[1, 1]");

    // Two cylinders covering a torus: degree 1 needs a comparison rank.
    let cylinders = r#"{"u":{"betti":[1,1]},"v":{"betti":[1,1]},
        "intersection":{"betti":[2,2]},
        "incidence":[[0,0],[0,0]]}"#;
    let open = write(dir.path(), "cylinders.json", cylinders);
    let partial = derham(&["mv", "--in", &open]);
    assert_eq!(code(&partial), 0);
    let text = stdout(&partial);
    assert!(text.contains("b1 = undetermined"), "{text}");
    assert!(text.contains("missing comparison ranks at degrees [1]"), "{text}");

    let closed = write(
        dir.path(),
        "cylinders-ranked.json",
        &cylinders.replace("\"incidence\"", "\"j_ranks\":{\"1\":1},\"incidence\""),
    );
    let full = derham(&["mv", "--in", &closed]);
    assert_eq!(stdout(&full).trim(), "[1, 2, 1]");
}

#[test]
fn zigzag_builds_the_long_exact_sequence() {
    let out = derham(&[
        "zigzag",
        "--space",
        "circle",
        "--u",
        "[[0,1],[1,2]]",
        "--v",
        "[[0,2]]",
    ]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("union: [1, 1]"), "{text}");
    assert!(text.contains("sequence dims: [1, 2, 2, 1, 0, 0]"), "{text}");
    assert!(text.contains("connecting ranks: [1, 0]"), "{text}");
    assert!(text.contains("exact: yes"), "{text}");
}

// ---------------------------------------------------------------------
// Form subcommands
// ---------------------------------------------------------------------

#[test]
fn derivative_follows_the_product_rule() {
    let dir = tempfile::tempdir().expect("tempdir");
    let form = write(dir.path(), "xy.json", XY_FUNCTION);
    let out = derham(&["forms", "d", "--in", &form]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out).trim(), "y dx + x dy");
}

#[test]
fn derivative_json_output_is_a_form_document() {
    let dir = tempfile::tempdir().expect("tempdir");
    let form = write(dir.path(), "xy.json", XY_FUNCTION);
    let out = derham(&["forms", "d", "--json", "--in", &form]);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid JSON");
    assert_eq!(doc["degree"], 1);
    assert_eq!(doc["coords"], serde_json::json!(["x", "y"]));
    assert_eq!(doc["terms"].as_array().expect("terms").len(), 2);
}

#[test]
fn wedge_cancels_repeated_axes() {
    let dir = tempfile::tempdir().expect("tempdir");
    let x_dx = write(
        dir.path(),
        "a.json",
        r#"{"coords":["x","y"],"degree":1,"terms":[{"coeff":"x","dx":[1]}]}"#,
    );
    let dx = write(
        dir.path(),
        "b.json",
        r#"{"coords":["x","y"],"degree":1,"terms":[{"coeff":"1","dx":[1]}]}"#,
    );
    let zero = derham(&["forms", "wedge", "--a", &x_dx, "--b", &dx]);
    assert_eq!(code(&zero), 0);
    assert_eq!(stdout(&zero).trim(), "0");

    let dy = write(dir.path(), "c.json", X_DY);
    let area = derham(&["forms", "wedge", "--a", &x_dx, "--b", &dy]);
    assert_eq!(stdout(&area).trim(), "x^2 dx∧dy");
}

#[test]
fn pullback_through_the_circle_map() {
    let dir = tempfile::tempdir().expect("tempdir");
    let map = write(
        dir.path(),
        "circle-map.json",
        r#"{"source":["t"],"target":["x","y"],"components":["cos(t)","sin(t)"]}"#,
    );
    let form = write(dir.path(), "x-dy.json", X_DY);
    let out = derham(&["forms", "pullback", "--map", &map, "--in", &form]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out).trim(), "cos(t)^2 dt");
}

#[test]
fn closedness_verdicts_map_to_exit_codes() {
    let yes = derham(&["forms", "is-closed", "--in", "omega0"]);
    assert_eq!(code(&yes), 0);
    assert_eq!(stdout(&yes).trim(), "closed: yes");

    let dir = tempfile::tempdir().expect("tempdir");
    let x_dy = write(dir.path(), "x-dy.json", X_DY);
    let no = derham(&["forms", "is-closed", "--in", &x_dy]);
    assert_eq!(code(&no), 0);
    assert_eq!(stdout(&no).trim(), "closed: no");

    // The derivative of this coefficient is ~e^(-10000): symbolically
    // nonzero, but below every double-precision magnitude the sampler
    // can represent, so the only honest verdict is `unknown` -- exit 3.
    let undecidable = write(
        dir.path(),
        "undecidable.json",
        r#"{"coords":["x","y"],"degree":1,
            "terms":[{"coeff":"1/exp(x^2 + 10000)","dx":[2]}]}"#,
    );
    let unknown = derham(&["forms", "is-closed", "--in", &undecidable]);
    assert_eq!(code(&unknown), 3);
    assert_eq!(stdout(&unknown).trim(), "closed: unknown");
}

// ---------------------------------------------------------------------
// Numerical subcommands
// ---------------------------------------------------------------------

#[test]
fn integrate_counts_winding_turns() {
    for (chain, expected) in [
        ("winding-1", "6.283185307"),
        ("winding-3", "18.849555922"),
        ("winding--1", "-6.283185307"),
    ] {
        let out = derham(&["integrate", "--form", "omega0", "--chain", chain]);
        assert_eq!(code(&out), 0);
        assert_eq!(stdout(&out).trim(), expected, "period over {chain}");
    }
}

#[test]
fn integrate_reads_the_tolerance_env_var() {
    let out = Command::new(env!("CARGO_BIN_EXE_derham"))
        .args(["integrate", "--form", "omega0", "--chain", "winding-1"])
        .env("DERHAM_TOL", "0.001")
        .output()
        .expect("binary runs");
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).starts_with("6.28"), "{}", stdout(&out));
}

#[test]
fn stokes_compares_boundary_and_derivative() {
    let dir = tempfile::tempdir().expect("tempdir");
    let form = write(dir.path(), "x-dy.json", X_DY);
    let triangle = write(
        dir.path(),
        "triangle.json",
        r#"[{"coeff":"1","simplex":{"degree":2,"target":["x","y"],
             "components":["t1","t2"]}}]"#,
    );
    let out = derham(&["stokes", "--form", &form, "--chain", &triangle]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("boundary side: 0.500000000"), "{text}");
    assert!(text.contains("derivative side: 0.500000000"), "{text}");
    assert!(text.contains("residual: 0.000000000"), "{text}");
}

#[test]
fn periods_reports_the_matrix_and_rank() {
    let out = derham(&[
        "periods",
        "--forms",
        "omega0",
        "--cycles",
        "winding-1,winding-2",
    ]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("6.283185307  12.566370614"), "{text}");
    assert!(text.trim().ends_with("rank: 1"), "{text}");
}

#[test]
fn periods_refuse_forms_that_are_not_closed() {
    let dir = tempfile::tempdir().expect("tempdir");
    let x_dy = write(dir.path(), "x-dy.json", X_DY);
    let out = derham(&["periods", "--forms", &x_dy, "--cycles", "winding-1"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("closed"), "{}", stderr(&out));
}

// ---------------------------------------------------------------------
// Failure modes
// ---------------------------------------------------------------------

#[test]
fn unreadable_and_malformed_inputs_exit_2() {
    let missing = derham(&["betti", "--in", "no-such-file.json"]);
    assert_eq!(code(&missing), 2);
    assert!(stderr(&missing).contains("cannot read"), "{}", stderr(&missing));

    let dir = tempfile::tempdir().expect("tempdir");
    let broken = write(dir.path(), "broken.json", "{not json");
    let malformed = derham(&["forms", "d", "--in", &broken]);
    assert_eq!(code(&malformed), 2);

    let shape = write(
        dir.path(),
        "shape.json",
        r#"{"coords":["x"],"degree":1,"terms":[{"coeff":"1","dx":[5]}]}"#,
    );
    let out_of_range = derham(&["forms", "d", "--in", &shape]);
    assert_eq!(code(&out_of_range), 2);
}

// ---------------------------------------------------------------------
// JSON mode and reproduce
// ---------------------------------------------------------------------

#[test]
fn json_outputs_are_machine_readable() {
    let betti = derham(&["betti", "--json", "--in", "circle"]);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&betti)).expect("valid JSON");
    assert_eq!(doc["betti"], serde_json::json!([1, 1]));

    let zigzag = derham(&[
        "zigzag", "--json", "--space", "circle", "--u", "[[0,1],[1,2]]", "--v", "[[0,2]]",
    ]);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&zigzag)).expect("valid JSON");
    assert_eq!(doc["exact"], serde_json::json!(true));
    assert_eq!(doc["union"], serde_json::json!([1, 1]));
}

#[test]
fn reproduce_passes_against_bundled_goldens() {
    let out = derham(&["reproduce"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.trim().ends_with("passed 12 of 12"), "{text}");
    assert_eq!(text.matches(": pass").count(), 12, "{text}");

    let json_mode = derham(&["reproduce", "--json"]);
    assert_eq!(code(&json_mode), 0);
    let doc: serde_json::Value =
        serde_json::from_str(&stdout(&json_mode)).expect("valid JSON");
    assert_eq!(doc["passed"], 12);
    assert_eq!(doc["total"], 12);
}

#[test]
fn reproduce_flags_a_corrupted_golden_file() {
    // Copy the shipped golden files aside and corrupt exactly one.
    let dir = tempfile::tempdir().expect("tempdir");
    let source = Path::new(env!("CARGO_MANIFEST_DIR")).join("golden");
    for entry in std::fs::read_dir(&source).expect("golden dir") {
        let entry = entry.expect("dir entry");
        std::fs::copy(entry.path(), dir.path().join(entry.file_name())).expect("copy");
    }
    std::fs::write(dir.path().join("circle-betti.txt"), "[2, 2]\n").expect("corrupt");

    let golden = dir.path().to_string_lossy().into_owned();
    let out = derham(&["reproduce", "--golden", &golden]);
    assert_eq!(code(&out), 1);
    let text = stdout(&out);
    assert!(text.contains("circle-betti: FAIL"), "{text}");
    assert!(text.contains("expected"), "{text}");
    assert!(text.contains("torus-betti: pass"), "{text}");
    assert!(text.trim().ends_with("passed 11 of 12"), "{text}");
}
