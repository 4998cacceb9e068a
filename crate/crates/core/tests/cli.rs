use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Stdio};

use cstarmod::document::{Document, Payload};
use serde_json::Value;

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "fixtures", name]
        .iter()
        .collect();
    p.to_string_lossy().into_owned()
}

struct Output {
    code: i32,
    stdout: String,
    stderr: String,
}

fn run_with_stdin(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_cstar-mod"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    {
        let mut pipe = child.stdin.take().unwrap();
        if let Some(s) = stdin {
            pipe.write_all(s.as_bytes()).unwrap();
        }
    }
    let out = child.wait_with_output().unwrap();
    Output {
        code: out.status.code().expect("exited normally"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn run(args: &[&str]) -> Output {
    run_with_stdin(args, None)
}

/// Parses stdout as a document and checks it re-serializes to the same text.
fn parse_stable(out: &Output) -> Value {
    let doc = Document::from_json(&out.stdout).expect("stdout is a valid document");
    assert_eq!(doc.to_json().trim_end(), out.stdout.trim_end());
    serde_json::from_str(&out.stdout).unwrap()
}

fn output_doc(v: &Value, name: &str) -> Document {
    let inner = v["result"]["outputs"][name].clone();
    let mut wrapped = serde_json::Map::new();
    wrapped.insert("version".into(), v["version"].clone());
    for (k, body) in inner.as_object().unwrap() {
        wrapped.insert(k.clone(), body.clone());
    }
    Document::from_value(Value::Object(wrapped)).unwrap()
}

fn assert_usage_error(out: &Output) {
    assert_eq!(out.code, 2, "stderr: {}", out.stderr);
    assert!(out.stdout.is_empty());
    assert_eq!(out.stderr.trim_end().lines().count(), 1, "{}", out.stderr);
}

#[test]
fn pinv_of_identity_is_identity() {
    let out = run(&["pinv", &fixture("identity_map.json")]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let v = parse_stable(&out);
    assert_eq!(v["result"]["values"]["max_residual"].as_f64(), Some(0.0));
    let id = Document::from_json(&std::fs::read_to_string(fixture("identity_map.json")).unwrap())
        .unwrap();
    assert_eq!(output_doc(&v, "pinv"), id);
}

#[test]
fn map_commands_succeed_with_small_residuals() {
    let map = fixture("map.json");
    for (cmd, keys) in [
        ("pinv", &["max_residual"][..]),
        (
            "polar",
            &[
                "factorization",
                "partial_isometry",
                "initial_space",
                "final_space",
                "kernel",
            ][..],
        ),
        ("adjoint", &["pairing_residual"][..]),
        ("graph-proj", &["projection_residual"][..]),
    ] {
        let out = run(&[cmd, &map]);
        assert_eq!(out.code, 0, "{cmd}: {}", out.stderr);
        let v = parse_stable(&out);
        assert_eq!(v["result"]["op"], cmd);
        for k in keys {
            let r = v["result"]["values"][k].as_f64().unwrap();
            assert!(r <= 1e-9, "{cmd} {k} = {r}");
        }
    }
}

#[test]
fn complement_of_a_submodule() {
    let out = run(&["complement", &fixture("submodule.json")]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let v = parse_stable(&out);
    assert_eq!(v["result"]["flags"]["biorth"], true);
    assert!(matches!(
        output_doc(&v, "complement").payload,
        Payload::Submodule(_)
    ));
}

#[test]
fn check_raw_accepts_left_multiplication_and_rejects_transpose() {
    let out = run(&["check-raw", &fixture("left_mult_raw.json")]);
    assert_eq!(out.code, 0);
    let v = parse_stable(&out);
    assert_eq!(v["result"]["verdict"], "module-map");
    assert_eq!(v["result"]["flags"]["module_map"], true);
    let Payload::Map(t) = output_doc(&v, "map").payload else {
        panic!("expected a map")
    };
    assert_eq!(t.block(0).row(1)[0].re, 3.0);

    let out = run(&["check-raw", &fixture("transpose_block.json")]);
    assert_eq!(out.code, 0);
    let v = parse_stable(&out);
    assert!(v["result"]["verdict"]
        .as_str()
        .unwrap()
        .starts_with("not a module map"));
    assert!(
        v["result"]["values"]["commutation_residual"]
            .as_f64()
            .unwrap()
            >= 0.5
    );
}

#[test]
fn localize_accepts_every_localizable_kind() {
    for (file, kind) in [
        ("algebra.json", "algebra"),
        ("element.json", "element"),
        ("vector.json", "vector"),
        ("submodule.json", "submodule"),
        ("map.json", "map"),
        ("left_mult_raw.json", "rawmap"),
    ] {
        let support = if kind == "rawmap" { "0" } else { "1" };
        let out = run(&["localize", "--support", support, &fixture(file)]);
        assert_eq!(out.code, 0, "{file}: {}", out.stderr);
        let v = parse_stable(&out);
        assert!(
            v["result"]["outputs"]["localized"][kind].is_object(),
            "{file}"
        );
    }
    let out = run(&["localize", "--support", "", &fixture("map.json")]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let v = parse_stable(&out);
    assert_eq!(
        v["result"]["outputs"]["localized"]["map"]["dims"],
        serde_json::json!([])
    );
}

#[test]
fn c_bound_and_elem_pinv() {
    let out = run(&["c-bound", "--support", "0,1", &fixture("map.json")]);
    assert_eq!(out.code, 0);
    let v = parse_stable(&out);
    let c = v["result"]["values"]["c"].as_f64().unwrap();
    let k = v["result"]["values"]["upper_bound"].as_f64().unwrap();
    assert!(0.0 < c && c <= k);

    let out = run(&["c-bound", "--support", "", &fixture("map.json")]);
    let v = parse_stable(&out);
    assert_eq!(v["result"]["flags"]["degenerate"], true);

    let out = run(&["elem-pinv", &fixture("element.json")]);
    assert_eq!(out.code, 0);
    let v = parse_stable(&out);
    let Payload::Element(s) = output_doc(&v, "pinv").payload else {
        panic!("expected an element")
    };
    assert_eq!(s.block(1)[(0, 0)].re, 0.5);
    assert_eq!(s.block(0)[(0, 0)].re, 0.0);
}

#[test]
fn stdin_is_read_for_dash() {
    let text = std::fs::read_to_string(fixture("map.json")).unwrap();
    let piped = run_with_stdin(&["pinv", "-"], Some(&text));
    let direct = run(&["pinv", &fixture("map.json")]);
    assert_eq!(piped.code, 0);
    assert_eq!(piped.stdout, direct.stdout);
}

#[test]
fn commute_and_verify_exit_codes() {
    let out = run(&["commute", &fixture("map.json"), "--trials", "3"]);
    assert_eq!(out.code, 0, "{}", out.stdout);
    parse_stable(&out);

    let args = [
        "verify", "--suite", "theorem", "--dims", "1,2", "--trials", "5",
    ];
    let out = run(&args);
    assert_eq!(out.code, 0);
    let v = parse_stable(&out);
    assert_eq!(
        v["theorem_report"]["conditions"].as_array().unwrap().len(),
        8
    );

    let out = run(&[&args[..], &["--tol", "1e-300"]].concat());
    assert_eq!(out.code, 1);
    parse_stable(&out);

    let out = run(&[
        "verify", "--suite", "lemmas", "--dims", "2", "--trials", "3",
    ]);
    assert_eq!(out.code, 0);
    let v = parse_stable(&out);
    assert_eq!(v["lemma_report"]["lemmas"].as_array().unwrap().len(), 10);
}

#[test]
fn malformed_documents_exit_2_with_one_line() {
    for (file, needle) in [
        ("bad_version.json", "version"),
        ("unknown_field.json", "scale"),
        ("bad_shape.json", "map.entries[0][0].blocks[0]"),
        ("not_json.json", "JSON"),
    ] {
        let out = run(&["pinv", &fixture(file)]);
        assert_usage_error(&out);
        assert!(out.stderr.contains(needle), "{file}: {}", out.stderr);
    }
    let out = run(&["pinv", &fixture("element.json")]);
    assert_usage_error(&out);
    let out = run(&["pinv", &fixture("does_not_exist.json")]);
    assert_usage_error(&out);
    let out = run(&["localize", "--support", "5", &fixture("map.json")]);
    assert_usage_error(&out);
}

#[test]
fn bad_command_lines_exit_2_with_one_line() {
    assert_usage_error(&run(&[]));
    assert_usage_error(&run(&["frobnicate"]));
    assert_usage_error(&run(&["verify", "--suite", "theorem", "--dims", "x"]));
    assert_usage_error(&run(&["verify", "--suite", "theorem", "--dims", ""]));
    assert_usage_error(&run(&[
        "verify", "--suite", "theorem", "--dims", "1", "--trials", "-1",
    ]));
}

#[test]
fn help_and_version_exit_0() {
    let out = run(&["--help"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("verify"));
    let out = run(&["--version"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.starts_with("cstar-mod"));
}

#[test]
fn text_format_renders_values() {
    let out = run(&["--format", "text", "pinv", &fixture("identity_map.json")]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("max_residual"));
}
