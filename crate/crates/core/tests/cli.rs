use std::fs;

use lee_lattice::cli::run_with;

struct Run {
    code: i32,
    out: String,
    err: String,
}

fn leelat(args: &[&str]) -> Run {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("leelat").chain(args.iter().copied());
    let code = run_with(argv, &mut out, &mut err);
    Run {
        code,
        out: String::from_utf8(out).unwrap(),
        err: String::from_utf8(err).unwrap(),
    }
}

#[test]
fn gen_writes_a_readable_matrix() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("h8.txt");
    let p = path.to_str().unwrap();
    let r = leelat(&["gen", "sylvester", "--m", "3", "--out", p]);
    assert_eq!(r.code, 0, "{}", r.err);
    let text = fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("8 8\n"));
    assert_eq!(text.lines().count(), 9);

    let r = leelat(&["--json", "lattice", "volume", "--matrix", p]);
    assert_eq!(r.code, 0, "{}", r.err);
    let v: serde_json::Value = serde_json::from_str(&r.out).unwrap();
    assert_eq!(v["dimension"], 8);
    let diag: Vec<i64> = serde_json::from_value(v["diagonal"].clone()).unwrap();
    let prod: i64 = diag.iter().product();
    assert_eq!(v["volume"], prod.to_string());
}

#[test]
fn generated_conference_matrix_is_skew_for_q_3_mod_4() {
    let r = leelat(&["--json", "gen", "paley-conference", "--q", "7"]);
    assert_eq!(r.code, 0, "{}", r.err);
    let r = leelat(&["gen", "paley-conference", "--q", "7"]);
    let rows: Vec<Vec<i64>> = r
        .out
        .lines()
        .skip(1)
        .map(|l| l.split_whitespace().map(|t| t.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 8);
    for (i, row) in rows.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            assert_eq!(v, -rows[j][i]);
        }
    }
}

#[test]
fn exit_codes() {
    assert_eq!(leelat(&["frobnicate"]).code, 2);
    assert_eq!(
        leelat(&["lattice", "volume", "--basis", "/no/such/file"]).code,
        2
    );
    assert_eq!(leelat(&["gen", "sylvester", "--m", "9"]).code, 1);
    assert_eq!(leelat(&["gen", "paley-conference", "--q", "15"]).code, 2);
    let r = leelat(&[
        "--coset-budget",
        "10",
        "lattice",
        "radius",
        "--matrix",
        "sylvester:5",
    ]);
    assert_eq!(r.code, 1);
    assert!(r.err.contains("budget"), "{}", r.err);
    assert_eq!(leelat(&["--help"]).code, 0);
}

#[test]
fn malformed_basis_names_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.txt");
    fs::write(&path, "2\n1 0\n0 x\n").unwrap();
    let r = leelat(&["lattice", "volume", "--basis", path.to_str().unwrap()]);
    assert_eq!(r.code, 2);
    assert!(r.err.contains("line 3"), "{}", r.err);
}

#[test]
fn lattice_distance_of_small_sylvester_lattice() {
    let r = leelat(&["--json", "lattice", "distance", "--sylvester", "3,2"]);
    assert_eq!(r.code, 0, "{}", r.err);
    let v: serde_json::Value = serde_json::from_str(&r.out).unwrap();
    assert_eq!(v["result"]["kind"], "exact");
    assert_eq!(v["result"]["distance"], 4);
    let w: Vec<i64> = serde_json::from_value(v["result"]["witness"].clone()).unwrap();
    assert_eq!(w.iter().map(|x| x.abs()).sum::<i64>(), 4);
}

#[test]
fn sylvester_table_csv() {
    let r = leelat(&["sylvester", "table", "--m", "4", "--csv"]);
    assert_eq!(r.code, 0, "{}", r.err);
    let lines: Vec<&str> = r.out.lines().collect();
    assert!(lines[0].starts_with("m,j,volume"));
    assert_eq!(lines.len(), 6);
    assert_eq!(lines[4], "4,3,131072,true,8,8,8");
}

#[test]
fn conference_code_is_mds() {
    let r = leelat(&["code", "mds", "--conference", "5"]);
    assert_eq!(r.code, 0, "{}", r.err);
    assert!(r.out.contains("MDS true"), "{}", r.out);
}

#[test]
fn code_distance_metrics_agree_with_methods() {
    let mut seen = Vec::new();
    for method in ["enumerate", "pruned"] {
        for metric in ["lee", "hamming"] {
            let r = leelat(&[
                "--json",
                "code",
                "dist",
                "--conference",
                "5",
                "--metric",
                metric,
                "--method",
                method,
            ]);
            assert_eq!(r.code, 0, "{}", r.err);
            let v: serde_json::Value = serde_json::from_str(&r.out).unwrap();
            seen.push((metric, v["result"]["distance"].clone()));
        }
    }
    assert_eq!(seen[0].1, 5);
    assert_eq!(seen[1].1, 4);
    assert_eq!(seen[0], seen[2]);
    assert_eq!(seen[1], seen[3]);
}

#[test]
fn verify_reports_are_byte_stable() {
    let a = leelat(&["--json", "verify", "--suite", "theorem3"]);
    let b = leelat(&["--json", "verify", "--suite", "hadamard-rank"]);
    assert_eq!(a.code, 0, "{}", a.err);
    assert_eq!(a.out, b.out);
    let v: serde_json::Value = serde_json::from_str(&a.out).unwrap();
    assert_eq!(v["suite"], "hadamard-rank");
    assert!(v["claims"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c["status"] == "proved-instance"));
}

#[test]
fn verify_orders_override() {
    let r = leelat(&["--json", "verify", "--suite", "theorem1", "--orders", "4,8"]);
    assert_eq!(r.code, 0, "{}", r.err);
    let v: serde_json::Value = serde_json::from_str(&r.out).unwrap();
    let orders: Vec<i64> = v["claims"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["values"]["order"].as_i64().unwrap())
        .collect();
    assert!(!orders.is_empty());
    assert!(orders.iter().all(|&n| n == 4 || n == 8));
}

#[test]
fn verify_custom_manifest_and_failures() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("claims.toml");
    fs::write(
        &path,
        r#"
[[claim]]
id = "wrong"
suite = "mine"
locus = "a deliberately false covering radius"
op = "covering-radius"
params = { m = 2, j = 1, expected = 5 }

[[claim]]
id = "right"
suite = "mine"
locus = "radius of the order-4 sylvester lattice with j = 1"
op = "covering-radius"
params = { m = 2, j = 1 }
"#,
    )
    .unwrap();
    let p = path.to_str().unwrap();
    let r = leelat(&["--json", "verify", "--suite", "mine", "--manifest", p]);
    assert_eq!(r.code, 1, "{}", r.err);
    let v: serde_json::Value = serde_json::from_str(&r.out).unwrap();
    let claims = v["claims"].as_array().unwrap();
    assert_eq!(claims[0]["id"], "right");
    assert_eq!(claims[0]["status"], "proved-instance");
    assert_eq!(claims[1]["status"], "failed");

    let r = leelat(&["verify", "--suite", "nonexistent"]);
    assert_eq!(r.code, 2);
}

#[test]
fn transform_round_trip() {
    let r = leelat(&[
        "--json",
        "transform",
        "apply",
        "--matrix",
        "sylvester:2",
        "--point",
        "3,-1,0,2",
    ]);
    assert_eq!(r.code, 0, "{}", r.err);
    let v: serde_json::Value = serde_json::from_str(&r.out).unwrap();
    let image: Vec<i64> = serde_json::from_value(v["image"].clone()).unwrap();
    let arg = image
        .iter()
        .map(i64::to_string)
        .collect::<Vec<_>>()
        .join(",");
    let r = leelat(&[
        "--json",
        "transform",
        "apply",
        "--matrix",
        "sylvester:2",
        "--point",
        &arg,
    ]);
    let v: serde_json::Value = serde_json::from_str(&r.out).unwrap();
    assert_eq!(v["image"], serde_json::json!([3, -1, 0, 2]));
}

#[test]
fn transform_suite_shortcut() {
    let r = leelat(&["transform", "verify", "--suite", "ivB"]);
    assert_eq!(r.code, 0, "{}", r.err);
    assert!(r.out.contains("reverse-duality"));
}
