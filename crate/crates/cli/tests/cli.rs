//! End-to-end checks of the command-line surface.

use std::process::Command;

fn firstq(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_firstq"))
        .args(args)
        .output()
        .expect("spawn firstq")
}

#[test]
fn estimate_builtin_markdown() {
    let out = firstq(&["estimate", "NH3+BF3"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("| Reactants | Number of particles (electrons) | Toffolis per fs"));
    assert!(text.contains("NH3+BF3 | 50 (42)"));
}

#[test]
fn estimate_json_has_schema_and_reference() {
    let out = firstq(&["estimate", "C23H20N3O", "--format", "json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v[0]["schema"], 1);
    assert_eq!(v[0]["eta"], 234);
    assert_eq!(v[0]["prep_strategy"], "amplitude_amplified");
    assert!(v[0]["reference"]["relative_gap"].as_f64().unwrap() < 0.10);
}

#[test]
fn estimate_from_spec_file() {
    let dir = std::env::temp_dir().join("firstq-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("water.json");
    std::fs::write(
        &path,
        r#"{
            "schema": 1,
            "name": "water",
            "composition": [["O", 1], ["H", 2]],
            "temperature_k": 300.0,
            "box_width_angstrom": 12.0,
            "time_fs": 1.0,
            "epsilon": 0.01
        }"#,
    )
    .unwrap();
    let out = firstq(&["estimate", path.to_str().unwrap(), "--format", "json"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v[0]["eta"], 13);
    assert_eq!(v[0]["n_g_provenance"], "derived");
}

#[test]
fn invalid_spec_exits_one() {
    let dir = std::env::temp_dir().join("firstq-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.json");
    std::fs::write(
        &path,
        r#"{"schema": 1, "name": "bad", "composition": [["Xx", 1]],
           "temperature_k": 300.0, "box_width_angstrom": 12.0, "time_fs": 1.0, "epsilon": 0.01}"#,
    )
    .unwrap();
    let out = firstq(&["estimate", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Xx"));
}

#[test]
fn verify_subcommands_run_clean() {
    let out = firstq(&["verify", "amp", "--max-n", "6"]);
    assert!(out.status.success());

    let out = firstq(&["verify", "circuits"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let log = String::from_utf8_lossy(&out.stderr);
    for name in ["abs", "absdiff", "mult", "iseq", "subpow2", "csub"] {
        assert!(
            log.contains(&format!("ok: {name}")),
            "missing {name} in {log}"
        );
    }

    let out = firstq(&["verify", "lcu", "--n-g", "4", "--n-m", "8"]);
    assert!(out.status.success());
    let csv = String::from_utf8_lossy(&out.stdout);
    assert!(csv.starts_with("q,M,approx,target,error,bound"));
    assert!(csv.lines().count() > 20);
}

#[test]
fn circuit_dump_is_line_oriented() {
    let out = firstq(&["verify", "circuits", "--dump", "abs"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let first = text.lines().next().unwrap();
    assert!(first.starts_with("CX ") || first.starts_with("CCX ") || first.starts_with("X "));
    // Stable across runs.
    let again = firstq(&["verify", "circuits", "--dump", "abs"]);
    assert_eq!(text, String::from_utf8(again.stdout).unwrap());
}

#[test]
fn grid_and_gamma_commands() {
    let out = firstq(&["grid", "Cl"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("Cl: nuclear 0.12"));

    let out = firstq(&["gamma", "NH3+BF3"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout).to_string();
    assert!(text.contains("n_gamma 3"), "{text}");
    assert!(text.contains("effective 0.49"), "{text}");
}

#[test]
fn report_covers_all_builtins() {
    let out = firstq(&["report"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout).to_string();
    for name in ["NH3+BF3", "2NO2", "C2H4+O2", "C2H4+O3", "C23H20N3O"] {
        assert!(text.contains(name), "missing {name}");
    }
}

#[test]
fn element_override_changes_masses() {
    let dir = std::env::temp_dir().join("firstq-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let spec_path = dir.join("heavy_water.json");
    std::fs::write(
        &spec_path,
        r#"{
            "schema": 1,
            "name": "heavy water",
            "composition": [["O", 1], ["H", 2]],
            "temperature_k": 300.0,
            "box_width_angstrom": 12.0,
            "time_fs": 1.0,
            "epsilon": 0.01
        }"#,
    )
    .unwrap();
    let table_path = dir.join("deuterium.json");
    std::fs::write(
        &table_path,
        r#"[{"symbol": "H", "z": 1, "mass_amu": 2.014}]"#,
    )
    .unwrap();
    let base = firstq(&["estimate", spec_path.to_str().unwrap(), "--format", "json"]);
    let heavy = firstq(&[
        "estimate",
        spec_path.to_str().unwrap(),
        "--format",
        "json",
        "--elements",
        table_path.to_str().unwrap(),
    ]);
    assert!(base.status.success() && heavy.status.success());
    let b: serde_json::Value = serde_json::from_slice(&base.stdout).unwrap();
    let h: serde_json::Value = serde_json::from_slice(&heavy.stdout).unwrap();
    // Heavier isotopes shrink the reciprocal-mass sum; the minimum spacing
    // stays pinned by the oxygen nucleus.
    assert!(h[0]["lambda_t"].as_f64().unwrap() < b[0]["lambda_t"].as_f64().unwrap());
    assert_eq!(h[0]["delta_min_bohr"], b[0]["delta_min_bohr"]);
}
