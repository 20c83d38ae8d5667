use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn edgerm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_edgerm"))
        .args(args)
        .env_remove("EDGERM_WORKERS")
        .env_remove("EDGERM_ENUM_CAP")
        .output()
        .expect("run edgerm")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json report")
}

struct Butterfly {
    _dir: TempDir,
    root: PathBuf,
}

impl Butterfly {
    fn new() -> Self {
        let dir = TempDir::new().unwrap();
        let root = dir.path().to_path_buf();
        let out = edgerm(&["case-study", "butterfly", "--emit-dir", s(&root.join("bf"))]);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
        Butterfly { _dir: dir, root }
    }

    fn inst(&self) -> &str {
        s_owned(self.root.join("bf/instance.json"))
    }

    fn code(&self) -> &str {
        s_owned(self.root.join("bf/code.json"))
    }

    fn write(&self, name: &str, text: &str) -> &str {
        let p = self.root.join(name);
        std::fs::write(&p, text).unwrap();
        s_owned(p)
    }
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn s_owned(p: PathBuf) -> &'static str {
    Box::leak(p.into_os_string().into_string().unwrap().into_boxed_str())
}

const Z2: &str = r#"{"group": {"kind": "cyclic", "order": 2}, "labels": [0, 1]}"#;

#[test]
fn validate_exit_codes() {
    let bf = Butterfly::new();
    assert_eq!(code(&edgerm(&["validate", bf.inst()])), 0);
    let cyclic = bf.write(
        "cyclic.json",
        r#"{"nodes": ["s", "a", "b"],
            "edges": [{"id": "x", "tail": "a", "head": "b", "alphabet_size": 2},
                      {"id": "y", "tail": "b", "head": "a", "alphabet_size": 2}],
            "sources": [{"node": "s", "alphabet_size": 2}],
            "terminals": ["b"], "demands": [[1]]}"#,
    );
    let out = edgerm(&["validate", cyclic]);
    assert_eq!(code(&out), 1);
    assert!(!report(&out)["result"]["violations"]
        .as_array()
        .unwrap()
        .is_empty());
    let broken = bf.write("broken.json", "{ not json");
    assert_eq!(code(&edgerm(&["validate", broken])), 2);
}

#[test]
fn verify_rates_as_bits_or_cardinalities() {
    let bf = Butterfly::new();
    let run = |rates: &str| {
        code(&edgerm(&[
            "verify",
            bf.inst(),
            bf.code(),
            "--eps",
            "0/1",
            "--rates",
            rates,
        ]))
    };
    assert_eq!(run("1,1"), 0);
    assert_eq!(run("#2,#2"), 0);
    assert_eq!(run("2,2"), 1);
    assert_eq!(code(&edgerm(&["verify", bf.inst(), bf.code()])), 0);
    assert_eq!(
        code(&edgerm(&["verify", bf.inst(), bf.code(), "--eps", "1/0"])),
        2
    );
    assert_eq!(
        code(&edgerm(&["verify", bf.inst(), bf.code(), "--rates", "x"])),
        2
    );
}

#[test]
fn missing_file_and_usage_errors() {
    let bf = Butterfly::new();
    let out = edgerm(&["verify", "/nonexistent/instance.json", bf.code()]);
    assert_eq!(code(&out), 2);
    assert!(!out.stderr.is_empty());
    assert_eq!(code(&edgerm(&["frobnicate"])), 2);
    assert_eq!(code(&edgerm(&["verify", bf.inst()])), 2);
}

#[test]
fn remove_edge_partitions() {
    let bf = Butterfly::new();
    let emit = s_owned(bf.root.join("restricted"));
    let out = edgerm(&[
        "remove-edge",
        bf.inst(),
        bf.code(),
        "--edge",
        "bottleneck",
        "--partition",
        "builtin:thm2",
        "--emit-dir",
        emit,
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let r = report(&out);
    assert_eq!(r["certificates"][0]["restricted_cardinalities"], "1;1");
    let restricted_inst = s_owned(bf.root.join("restricted/instance.json"));
    let restricted_code = s_owned(bf.root.join("restricted/code.json"));
    assert_eq!(code(&edgerm(&["validate", restricted_inst])), 0);
    assert_eq!(
        code(&edgerm(&["verify", restricted_inst, restricted_code])),
        0
    );

    // XOR fibers are not product sets
    for p in ["builtin:cor3", "builtin:edge"] {
        assert_eq!(
            code(&edgerm(&[
                "remove-edge",
                bf.inst(),
                bf.code(),
                "--edge",
                "bottleneck",
                "--partition",
                p
            ])),
            1
        );
    }
    let diagonal = bf.write("diag.json", r#"{"labels": [0, 1, 1, 0]}"#);
    let out = edgerm(&[
        "remove-edge",
        bf.inst(),
        bf.code(),
        "--edge",
        "bottleneck",
        "--partition",
        diagonal,
    ]);
    assert_eq!(code(&out), 1);
    assert_eq!(report(&out)["result"]["condition_b"], false);

    let singletons = bf.write("single.json", r#"{"labels": [0, 1, 2, 3]}"#);
    let out = edgerm(&[
        "remove-edge",
        bf.inst(),
        bf.code(),
        "--edge",
        "bottleneck",
        "--partition",
        singletons,
    ]);
    // a single tuple times the edge capacity still covers each binary source
    assert_eq!(code(&out), 0);
    assert_eq!(report(&out)["certificates"][0]["witness"], 0);
    assert_eq!(
        code(&edgerm(&[
            "remove-edge",
            bf.inst(),
            bf.code(),
            "--edge",
            "nope",
            "--partition",
            "builtin:thm2"
        ])),
        2
    );
}

#[test]
fn cwl_commands() {
    let bf = Butterfly::new();
    let groups = bf.write(
        "groups.json",
        &format!(r#"{{"sources": [{Z2}, {Z2}], "edge": {Z2}}}"#),
    );
    let out = edgerm(&[
        "cwl-check",
        bf.inst(),
        bf.code(),
        "--edge",
        "bottleneck",
        "--groups",
        groups,
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(report(&out)["result"]["witness"]["domain"], "Z2 x Z2");
    assert_eq!(
        code(&edgerm(&[
            "cwl-remove",
            bf.inst(),
            bf.code(),
            "--edge",
            "bottleneck",
            "--groups",
            groups
        ])),
        0
    );
    assert_eq!(
        code(&edgerm(&[
            "cwl-remove",
            bf.inst(),
            bf.code(),
            "--edge",
            "bottleneck"
        ])),
        0
    );
    assert_eq!(
        code(&edgerm(&[
            "cwl-search",
            bf.inst(),
            bf.code(),
            "--edge",
            "bottleneck",
            "--budget",
            "5"
        ])),
        0
    );
    assert_eq!(
        code(&edgerm(&[
            "cwl-search",
            bf.inst(),
            bf.code(),
            "--edge",
            "bottleneck",
            "--budget",
            "0"
        ])),
        1
    );

    let piece = format!(
        r#"[{{"domain": [[0, 0], [0, 1], [1, 0], [1, 1]], "function": [0, 1, 1, 0],
              "sources": [{Z2}, {Z2}], "edge": {Z2}}}]"#
    );
    let pieces = bf.write("pieces.json", &piece);
    let out = edgerm(&[
        "pwl-remove",
        bf.inst(),
        bf.code(),
        "--edge",
        "bottleneck",
        "--pieces",
        pieces,
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(report(&out)["result"]["details"]["pieces"], 1);
}

#[test]
fn group_commands() {
    let bf = Butterfly::new();
    let c = bf.write(
        "char.json",
        r#"{"group": {"kind": "product", "factors": [{"kind": "cyclic", "order": 2}, {"kind": "cyclic", "order": 2}]},
            "subgroups": {"x1": [0, 1], "x2": [0, 2], "e": [0, 3], "in": [0, 1]}}"#,
    );
    assert_eq!(
        code(&edgerm(&[
            "group-remove",
            c,
            "--edge",
            "e",
            "--sources",
            "x1,x2"
        ])),
        0
    );
    assert_eq!(
        code(&edgerm(&["group-zero-error", c, "--terminal", "in:x1"])),
        0
    );
    let out = edgerm(&[
        "group-zero-error",
        c,
        "--terminal",
        "in:x1",
        "--terminal",
        "in:x2",
    ]);
    assert_eq!(code(&out), 1);
    assert_eq!(report(&out)["result"]["decisions"][1]["outcome"], "lossy");
    assert_eq!(
        code(&edgerm(&["group-zero-error", c, "--terminal", "in"])),
        2
    );
    assert_eq!(
        code(&edgerm(&[
            "group-zero-error",
            c,
            "--terminal",
            "in:missing"
        ])),
        2
    );
}

#[test]
fn case_studies() {
    assert_eq!(
        code(&edgerm(&[
            "case-study",
            "n2",
            "--m",
            "2",
            "--w",
            "2",
            "--l",
            "1"
        ])),
        0
    );
    assert_eq!(
        code(&edgerm(&[
            "case-study",
            "n2",
            "--m",
            "2",
            "--w",
            "2",
            "--l",
            "3"
        ])),
        2
    );
    assert_eq!(
        code(&edgerm(&[
            "case-study",
            "n3-injectivity",
            "--m",
            "3",
            "--s",
            "2",
            "--alpha",
            "2"
        ])),
        0
    );
    assert_eq!(
        code(&edgerm(&[
            "case-study",
            "n3-injectivity",
            "--m",
            "2",
            "--s",
            "2",
            "--alpha",
            "1"
        ])),
        2
    );
    let out = edgerm(&["case-study", "dougherty", "--k", "3", "--search"]);
    assert_eq!(code(&out), 0);
    assert!(!report(&out)["result"]["solutions"]
        .as_array()
        .unwrap()
        .is_empty());
    assert_eq!(
        code(&edgerm(&[
            "--enum-cap",
            "10",
            "case-study",
            "dougherty",
            "--k",
            "3",
            "--search"
        ])),
        2
    );
}

#[test]
fn csv_and_out_path() {
    let bf = Butterfly::new();
    let out_path = s_owned(bf.root.join("report.csv"));
    let out = edgerm(&[
        "remove-edge",
        bf.inst(),
        bf.code(),
        "--edge",
        "bottleneck",
        "--partition",
        "builtin:thm2",
        "--format",
        "csv",
        "--out",
        out_path,
    ]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(out_path).unwrap();
    let mut lines = text.lines();
    assert!(lines
        .next()
        .unwrap()
        .starts_with("edge,witness,edge_value,eps,"));
    assert!(lines.next().unwrap().starts_with("bottleneck,"));

    let out = edgerm(&["verify", bf.inst(), bf.code(), "--format", "csv"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 1);
}

#[test]
fn reports_identical_across_worker_counts() {
    let bf = Butterfly::new();
    let args = [
        "remove-edge",
        bf.inst(),
        bf.code(),
        "--edge",
        "bottleneck",
        "--partition",
        "builtin:thm2",
    ];
    let runs: Vec<Vec<u8>> = ["1", "2", "4"]
        .iter()
        .map(|w| {
            let mut a = vec!["--workers", w];
            a.extend_from_slice(&args);
            edgerm(&a).stdout
        })
        .collect();
    assert!(runs.windows(2).all(|w| w[0] == w[1]));
    let n2: Vec<Vec<u8>> = ["1", "3"]
        .iter()
        .map(|w| edgerm(&["case-study", "n2", "--m", "3", "--w", "2", "--workers", w]).stdout)
        .collect();
    assert_eq!(n2[0], n2[1]);
}

#[test]
fn timing_adds_runtime() {
    let out = edgerm(&[
        "--timing",
        "--workers",
        "2",
        "case-study",
        "n3-injectivity",
        "--m",
        "2",
        "--s",
        "1",
    ]);
    let r = report(&out);
    assert_eq!(r["runtime"]["workers"], 2);
    assert!(r["command"]
        .as_array()
        .unwrap()
        .iter()
        .all(|a| a != "--timing" && a != "--workers"));
    let plain = report(&edgerm(&[
        "case-study",
        "n3-injectivity",
        "--m",
        "2",
        "--s",
        "1",
    ]));
    assert!(plain.get("runtime").is_none());
}
