use std::path::PathBuf;
use std::process::Command;

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn atlas(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_morse-atlas")).args(args).current_dir(root()).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

#[test]
fn exit_codes() {
    let (code, out) = atlas(&["classify", "corpus/01_sol.json"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("Empty"), "{out}");

    let (code, out) = atlas(&["reduce", "inputs/seifert_pair_no_w.json"]);
    assert_eq!(code, 2, "{out}");
    assert!(out.contains("(3)"), "{out}");

    let (code, out) = atlas(&["trivialize", "inputs/g1_star.json"]);
    assert_eq!(code, 2, "{out}");
    assert!(out.contains("(1)") && out.contains("wide"), "{out}");

    assert_eq!(atlas(&["reduce", "inputs/jsj_hyperbolic_seifert.json"]).0, 0);
    assert_eq!(atlas(&["ball", "inputs/z2.json", "--radius", "99"]).0, 3);
    assert_eq!(atlas(&["ball", "inputs/z2.json", "--radius", "30", "--max-cells", "100"]).0, 3);
    assert_eq!(atlas(&["classify", "inputs/does_not_exist.json"]).0, 1);
    assert_eq!(atlas(&["corpus", "corpus"]).0, 0);
}

#[test]
fn json_reports_replay_byte_for_byte() {
    let dir = std::env::temp_dir().join(format!("morse-atlas-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cases: &[&[&str]] = &[
        &["classify", "corpus/12_jsj_chain.json"],
        &["reduce", "inputs/jsj_hyperbolic_seifert.json"],
        &["reduce", "inputs/seifert_pair_no_w.json"],
        &["critical-values", "inputs/z2.json", "--radius", "6"],
        &["bad-segments", "inputs/f2.json", "--radius", "6"],
    ];
    for (i, args) in cases.iter().enumerate() {
        let mut first: Vec<&str> = args.to_vec();
        first.push("--json");
        let (code, out) = atlas(&first);
        let report: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(report["exit_code"], code);
        let replay = dir.join(format!("case{i}.json"));
        std::fs::write(&replay, serde_json::to_string_pretty(&report["input"]).unwrap()).unwrap();
        let mut second = first.clone();
        let path = replay.to_str().unwrap();
        second[1] = path;
        let (code2, out2) = atlas(&second);
        assert_eq!(code, code2);
        assert_eq!(out, out2, "{args:?}");
    }
    std::fs::remove_dir_all(&dir).unwrap();
}
