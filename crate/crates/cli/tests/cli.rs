use std::process::{Command, Output};

fn hm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hypermobius"))
        .args(args)
        .env_remove("HM_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn classify_point_example() {
    let o = hm(&["classify-point", "--algebra", "double", "[3 : 2P+]"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "OmegaPlus λ=0.6667, label (3/2)ω2, orbit ProjectiveLine");
}

#[test]
fn kernel_labels() {
    for (ring, label) in [("double", "±I, ±jI"), ("dual", "±I"), ("real", "±I")] {
        let o = hm(&["kernel", "--algebra", ring]);
        assert_eq!(o.status.code(), Some(0));
        assert_eq!(stdout(&o).trim(), label, "{ring}");
    }
}

#[test]
fn orbit_csv_residuals() {
    let o = hm(&[
        "orbit",
        "--spec",
        "double-sl(sigma+=N,sigma-=N,a=1)",
        "--start",
        "1,2",
        "--t",
        "-2:2:0.1",
        "--output",
        "csv",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(
        reader.headers().unwrap().iter().collect::<Vec<_>>(),
        ["t", "class", "u", "v", "residual_primary", "residual_secondary"]
    );
    let mut rows = 0;
    let mut checked = 0;
    for record in reader.records() {
        let record = record.unwrap();
        rows += 1;
        if !record[4].is_empty() {
            assert!(record[4].parse::<f64>().unwrap().abs() < 1e-8);
            checked += 1;
        }
    }
    assert_eq!(rows, 41);
    assert!(checked >= 39);
}

#[test]
fn orbit_json_and_text() {
    let args = ["orbit", "--spec", "dual-sl(sigma=K, lambda=1)", "--start", "1,0.5", "--t", "0:1:0.5"];
    let o = hm(&[&args[..], &["--output", "json"]].concat());
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 3);
    assert_eq!(v["primary"], "dual-sl");
    let o = hm(&args);
    assert!(stdout(&o).contains("primary relation: dual-sl"));
}

#[test]
fn verify_is_deterministic_and_seeded_from_env() {
    let a = hm(&["verify", "--seed", "5"]);
    let b = hm(&["verify", "--seed", "5"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert!(text.starts_with("verification suites (seed 5)"));
    assert!(!text.contains("FAIL"));

    let env = Command::new(env!("CARGO_BIN_EXE_hypermobius"))
        .arg("verify")
        .env("HM_SEED", "5")
        .output()
        .unwrap();
    assert_eq!(env.stdout, a.stdout);
}

#[test]
fn subgroup_eval_output() {
    let o = hm(&["subgroup-eval", "--spec", "double-sl(sigma+=N, sigma-=I)", "--t", "0:1:1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("type: N(t)P₊ + IP₋, a = 0"), "{text}");
    assert_eq!(text.lines().filter(|l| l.starts_with("t=")).count(), 2);

    let o = hm(&["subgroup-eval", "--spec", "dual-gl(sigma=K, lambda1=1, lambda=2)", "--t", "0.5", "--output", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let det = &v["samples"][0]["det"];
    let e = std::f64::consts::E;
    assert!((det["re"].as_f64().unwrap() - e).abs() < 1e-12);
    assert!((det["im"].as_f64().unwrap() - 2.0 * e).abs() < 1e-12);
}

#[test]
fn classify_element_and_map() {
    let o = hm(&["classify-element", "--algebra", "double", "5+3j"]);
    let text = stdout(&o);
    assert!(text.starts_with("5+3j: Unit"));
    assert!(text.contains("components: (8|2)"));
    assert!(text.contains("square roots (4)"));

    let o = hm(&["classify-map", "--algebra", "complex", "[[1,1],[0,1]]"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("class: Parabolic"), "{text}");
    assert!(text.contains("fixed points: ∞"), "{text}");
}

#[test]
fn exit_codes() {
    // usage
    assert_eq!(hm(&["bogus"]).status.code(), Some(64));
    assert_eq!(hm(&["kernel", "--algebra", "octonion"]).status.code(), Some(64));
    assert_eq!(hm(&["classify-point", "[1 : 0]"]).status.code(), Some(64));
    assert_eq!(hm(&["kernel", "--algebra", "dual", "--tol-zero", "-1"]).status.code(), Some(64));
    assert_eq!(hm(&["kernel", "--algebra", "dual", "--output", "csv"]).status.code(), Some(64));
    // parse
    assert_eq!(hm(&["classify-element", "--algebra", "dual", "1+"]).status.code(), Some(65));
    assert_eq!(hm(&["subgroup-eval", "--spec", "dual-sl(sigma=K, lambda=0)"]).status.code(), Some(65));
    assert_eq!(hm(&["orbit", "--spec", "double-sl(sigma+=N,sigma-=N)", "--start", "1", "--t", "0"]).status.code(), Some(65));
    // domain
    assert_eq!(hm(&["classify-map", "--algebra", "double", "[[1,1],[1,1]]"]).status.code(), Some(2));
    assert_eq!(hm(&["orbit", "--spec", "real-gl(sigma=K)", "--start", "1,2"]).status.code(), Some(2));
    // verification failure: every small double number counts as zero
    assert_eq!(hm(&["verify", "--tol-zero", "10"]).status.code(), Some(3));
    // help is not an error
    assert_eq!(hm(&["--help"]).status.code(), Some(0));
}

#[test]
fn out_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("kernel.txt");
    let o = hm(&["kernel", "--algebra", "double", "--out-file", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), "±I, ±jI\n");

    let missing = dir.path().join("no/such/dir/out.txt");
    let o = hm(&["kernel", "--algebra", "double", "--out-file", missing.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(74));
}
