use std::io::Write;
use std::process::{Command, Output as ProcOutput};

use densprob::{bundled, run_qmsets_demo, run_scenario, Output, RunOptions, RunReport, ScenarioFile};

fn bin(args: &[&str]) -> ProcOutput {
    Command::new(env!("CARGO_BIN_EXE_densprob")).args(args).output().expect("binary runs")
}

fn stdout(o: &ProcOutput) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn run_bundled(name: &str) -> RunReport {
    let f = ScenarioFile::parse(bundled::get(name).unwrap()).unwrap();
    run_scenario(&f, RunOptions::default()).unwrap()
}

fn output<'a>(r: &'a RunReport, id: &str) -> &'a Output {
    &r.steps.iter().find(|s| s.id == id).unwrap_or_else(|| panic!("no step {id}")).output
}

fn scalar(r: &RunReport, id: &str) -> f64 {
    match output(r, id) {
        Output::Scalar { value } => *value,
        o => panic!("{o:?}"),
    }
}

fn matrix(r: &RunReport, id: &str) -> Vec<Vec<f64>> {
    match output(r, id) {
        Output::Matrix(m) => m.rows.clone(),
        o => panic!("{o:?}"),
    }
}

fn close_rows(a: &[Vec<f64>], b: &[[f64; 4]]) -> bool {
    a.iter().zip(b).all(|(x, y)| x.iter().zip(y).all(|(p, q)| (p - q).abs() < 1e-9))
}

#[test]
fn cards_key_numbers() {
    let r = run_bundled("cards");
    assert!((scalar(&r, "pr_black") - 2.0 / 3.0).abs() < 1e-12);
    assert!((scalar(&r, "pr_red") - 1.0 / 3.0).abs() < 1e-12);
    let t = 1.0 / 3.0;
    assert!(close_rows(
        &matrix(&r, "after"),
        &[[t, 0.0, 0.0, t], [0.0, t, 0.0, 0.0], [0.0; 4], [t, 0.0, 0.0, t]]
    ));
    assert!((scalar(&r, "h_color_on_S") - 4.0 / 9.0).abs() < 1e-12);
    match output(&r, "entropy") {
        Output::Entropy { before, after, created, zeroed_square_sum } => {
            assert!(before.abs() < 1e-9);
            assert!((after - 4.0 / 9.0).abs() < 1e-9);
            assert!((created - 4.0 / 9.0).abs() < 1e-9);
            assert!((zeroed_square_sum - 4.0 / 9.0).abs() < 1e-9);
        }
        o => panic!("{o:?}"),
    }
    match output(&r, "outcomes") {
        Output::Outcomes { outcomes } => {
            let probs: Vec<f64> = outcomes.iter().map(|o| o.probability).collect();
            assert!((probs[0] - 1.0 / 3.0).abs() < 1e-12 && (probs[1] - 2.0 / 3.0).abs() < 1e-12);
        }
        o => panic!("{o:?}"),
    }
    assert_eq!(output(&r, "color_mixture_pure"), &Output::Bool { value: false });
}

#[test]
fn coin_key_numbers() {
    let r = run_bundled("coin");
    assert!((scalar(&r, "heads_classical") - 0.5).abs() < 1e-12);
    assert!((scalar(&r, "heads_superposition") - 0.5).abs() < 1e-12);
    assert_eq!(output(&r, "sigma_U_pure"), &Output::Bool { value: true });
    let flip = matrix(&r, "flip");
    assert!((flip[0][0] - 0.5).abs() < 1e-12 && flip[0][1].abs() < 1e-12);
}

#[test]
fn bundled_files_round_trip() {
    for name in bundled::NAMES {
        let f = ScenarioFile::parse(bundled::get(name).unwrap()).unwrap();
        let again = ScenarioFile::parse(&f.to_toml().unwrap()).unwrap();
        assert_eq!(again, f, "{name}");
    }
}

#[test]
fn structured_output_is_byte_identical() {
    let a = bin(&["--format", "structured", "scenario", "run", "--bundled", "cards"]);
    let b = bin(&["--format", "structured", "scenario", "run", "--bundled", "cards"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["steps"][1]["id"], "pr_black");
    assert_eq!(v["steps"][1]["output"]["kind"], "scalar");
}

#[test]
fn scenario_files_from_disk() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(b"[space]\nlabels = [\"x\", \"y\"]\n").unwrap();
    let o = bin(&["scenario", "run", f.path().to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "");

    let mut bad = tempfile::NamedTempFile::new().unwrap();
    bad.write_all(b"[space]\nlabels = [\"x\",\n").unwrap();
    let o = bin(&["scenario", "run", bad.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line"));

    let o = bin(&["scenario", "run", "/nonexistent/file.toml"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn unresolved_names_exit_one() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(b"[space]\nlabels = [\"x\", \"y\"]\n\n[[steps]]\nid = \"a\"\nop = \"sigma\"\nevent = \"missing\"\n")
        .unwrap();
    let o = bin(&["scenario", "run", f.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("unresolved event `missing`"));
}

#[test]
fn domain_errors_exit_two() {
    let o = bin(&["density", "sigma", "--labels", "a,b", "--probs", "1,0", "--event", "b"]);
    assert_eq!(o.status.code(), Some(2));
    let o = bin(&["qmsets", "convert", "--from", "A=11,11", "--to", "U"]);
    assert_eq!(o.status.code(), Some(1));
    let o = bin(&["qmsets", "count", "--n", "17"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(bin(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(bin(&["density", "sigma", "--event", "a"]).status.code(), Some(1));
    assert_eq!(bin(&["density", "sigma", "--labels", "a", "--event", "z"]).status.code(), Some(1));
    assert!(bin(&["--help"]).status.success());
}

#[test]
fn density_and_measure_verbs() {
    let o = bin(&["density", "sigma", "--bundled", "cards", "--event", "diamond,heart"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("0.500000000000"));

    let o = bin(&["density", "partition", "--bundled", "cards", "--partition", "color"]);
    assert!(stdout(&o).contains("0.250000000000"));

    let o = bin(&["measure", "prob", "--bundled", "cards", "--event", "black", "--state", "sigma:S"]);
    assert_eq!(stdout(&o), "[prob] prob\n  0.666666666667\n");

    let o = bin(&["measure", "expect", "--bundled", "cards", "--variable", "is_black", "--state", "delta:S"]);
    assert_eq!(stdout(&o), "[expect] expect\n  0.666666666667\n");

    let o = bin(&["measure", "luders", "--labels", "H,T", "--state", "sigma:H,T", "--partition", "H|T"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("0.500000000000  0.000000000000"));

    let o = bin(&["entropy", "report", "--bundled", "cards", "--state", "sigma:S", "--partition", "var:is_black"]);
    assert!(stdout(&o).contains("created            0.444444444444"));

    let o = bin(&["space", "validate", "--bundled", "cards"]);
    assert!(stdout(&o).contains("4 outcomes"));
}

#[test]
fn tolerance_only_affects_validation() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(
        b"[space]\nlabels = [\"a\", \"b\"]\n\n[[steps]]\nid = \"m\"\nop = \"validate\"\nstate = { matrix = [[0.5, 0.0], [0.0, 0.5000001]] }\n",
    )
    .unwrap();
    let path = f.path().to_str().unwrap();
    assert_eq!(bin(&["scenario", "run", path]).status.code(), Some(2));
    assert!(bin(&["--tolerance", "1e-6", "scenario", "run", path]).status.success());

    let a = bin(&["--tolerance", "1e-3", "measure", "prob", "--bundled", "cards", "--event", "black", "--state", "sigma:S"]);
    let b = bin(&["measure", "prob", "--bundled", "cards", "--event", "black", "--state", "sigma:S"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn qmsets_verbs() {
    let o = bin(&["qmsets", "count", "--n", "3"]);
    assert_eq!(stdout(&o), "[count] qmsets_count\n  28\n");
    let o = bin(&["qmsets", "count", "--n", "16", "--ordered"]);
    assert!(o.status.success());

    let o = bin(&["qmsets", "kettable", "--n", "2"]);
    let text = stdout(&o);
    assert!(text.contains("U-basis | U'-basis | U''-basis"));
    assert!(text.contains("{H,T}   | {H'}     | {T''}"));

    let o = bin(&["qmsets", "kettable", "--basis", "U", "--basis", "V=11,01:a,b"]);
    assert!(stdout(&o).contains("V-basis"));

    let o = bin(&["qmsets", "convert", "--from", "U''", "--to", "U'", "--ket", "11"]);
    assert!(o.status.success());

    let o = bin(&["qmsets", "measure", "--from", "U", "--to", "U'", "--ket", "0.5*10", "--ket", "0.5*01", "--target", "H'"]);
    assert!(stdout(&o).contains("[probability] qmsets_measure\n  0.250000000000"));
    let o = bin(&["qmsets", "measure", "--from", "U", "--to", "U'", "--ket", "11", "--target", "H'"]);
    assert!(stdout(&o).contains("[probability] qmsets_measure\n  1.000000000000"));

    let o = bin(&["qmsets", "enumerate", "--n", "5"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn demo_reports() {
    let r = run_qmsets_demo(2).unwrap();
    assert_eq!(output(&r, "count"), &Output::Count { value: "3".into() });
    match output(&r, "kettable") {
        Output::KetTable { columns, rows } => {
            assert_eq!(columns, &["U", "U'", "U''"]);
            let text: Vec<Vec<String>> =
                rows.iter().map(|r| r.iter().map(|c| format!("{{{}}}", c.join(","))).collect()).collect();
            assert_eq!(
                text,
                [
                    ["{H,T}", "{H'}", "{T''}"],
                    ["{H}", "{H',T'}", "{H''}"],
                    ["{T}", "{T'}", "{H'',T''}"],
                ]
            );
        }
        o => panic!("{o:?}"),
    }
    assert!((scalar(&r, "superposition") - 1.0).abs() < 1e-12);
    assert!((scalar(&r, "mixture") - 0.25).abs() < 1e-12);

    let r = run_qmsets_demo(4).unwrap();
    assert_eq!(output(&r, "count"), &Output::Count { value: "840".into() });
    let o = bin(&["qmsets", "demo", "--n", "1"]);
    assert!(stdout(&o).contains("[count] qmsets_count\n  1\n"));
}
