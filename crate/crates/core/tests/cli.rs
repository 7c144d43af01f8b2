use binodiv_core::cli::run;

fn call(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let argv = std::iter::once("binodiv").chain(args.iter().copied());
    let code = run(argv, &mut out);
    (code, String::from_utf8(out).unwrap())
}

#[test]
fn row_json_matches_table_column() {
    let (code, out) = call(&["row", "--n", "12", "--p", "2", "--format", "json"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim_end(), r#"{"n":12,"p":2,"entries":{"2":4,"3":2,"4":5,"5":2}}"#);
    let (_, brute) = call(&["row", "--n", "12", "--method", "brute", "--format", "json"]);
    assert_eq!(brute, out);
}

#[test]
fn row_csv_and_variants() {
    let (code, out) = call(&["row", "--n", "5"]);
    assert_eq!(code, 0);
    assert_eq!(out, "n,k,count\n5,2,4\n5,3,2\n");
    let (_, howard) = call(&["row", "--n", "12", "--howard", "2"]);
    assert_eq!(howard, "n,j,formula,ratio,agree\n12,2,5/4,5/4,true\n");
    let (_, mu) = call(&["row", "--n", "12", "--mu"]);
    assert!(mu.lines().nth(1).unwrap().starts_with("12,18/13,18/13,"));
}

#[test]
fn gf_verify_is_clean() {
    let (code, out) = call(&["gf-verify", "--lambda-max", "8", "--format", "json"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim_end(), "[]");
}

#[test]
fn clt_scan_with_large_epsilon_has_no_bad_rows() {
    let (code, out) = call(&["clt-scan", "--lambda", "4", "--epsilon", "1.5", "--mode", "full"]);
    assert_eq!(code, 0);
    let line = out.lines().nth(1).unwrap();
    assert_eq!(line.split(',').nth(4), Some("0"));
}

#[test]
fn valuation_and_singmaster() {
    assert_eq!(
        call(&["valuation", "--n", "12", "--t", "3", "--p", "2"]).1,
        "n,t,p,nu,lucas_residue\n12,3,2,2,0\n"
    );
    assert_eq!(
        call(&["singmaster", "--n", "4", "--exact"]).1,
        "n,j,p,average\n4,0,2,11/12\n"
    );
}

#[test]
fn second_moment_example() {
    let (code, out) = call(&["second-moment", "--lambda", "1", "--u", "0", "--v", "0.5"]);
    assert_eq!(code, 0);
    assert_eq!(out, "lambda,u,v,w,E,normalized\n1,0,0.5,0,1.625,0.40625\n");
}

#[test]
fn exit_codes() {
    assert_eq!(call(&["frobnicate"]).0, 2);
    assert_eq!(call(&["row"]).0, 2);
    assert_eq!(call(&["row", "--n", "x"]).0, 2);
    assert_eq!(call(&["row", "--n", "3", "--format", "xml"]).0, 2);
    assert_eq!(call(&["valuation", "--n", "9", "--t", "2", "--p", "4"]).0, 2);
    assert_eq!(call(&["clt-scan", "--lambda", "5", "--epsilon", "0.1", "--mode", "sample"]).0, 2);
    assert_eq!(call(&["clt-scan", "--lambda", "23", "--epsilon", "0.1"]).0, 1);
    assert_eq!(call(&["moments", "--lambda", "15"]).0, 1);
    assert_eq!(call(&["gf-verify", "--lambda-max", "15"]).0, 1);
    assert_eq!(call(&["singmaster", "--n", "2000000"]).0, 1);
    assert_eq!(call(&["row", "--n", "20000000", "--method", "brute"]).0, 1);
    assert_eq!(call(&["--help"]).0, 0);
}

#[test]
fn outputs_are_deterministic() {
    let runs: &[&[&str]] = &[
        &["clt-scan", "--lambda", "20", "--epsilon", "0.1", "--mode", "sample", "--count", "300", "--seed", "11", "--format", "json"],
        &["clt-scan", "--lambda", "9", "--lambda-max", "10", "--epsilon", "0.2"],
        &["second-moment", "--lambda", "8", "--lambda-max", "9", "--u", "-2s,-s,0,s,2s"],
        &["lemma-ratios", "--lambda", "8", "--lambda-max", "9", "--u", "0,s", "--format", "json"],
        &["moments", "--lambda", "3", "--trivariate", "--format", "json"],
    ];
    for args in runs {
        let (c1, a) = call(args);
        let (c2, b) = call(&[args, &["--threads", "3"][..]].concat());
        assert_eq!((c1, c2), (0, 0), "{args:?}");
        assert_eq!(a, b, "{args:?}");
        assert!(!a.is_empty());
    }
    let seeded = |seed: &str| {
        call(&["clt-scan", "--lambda", "30", "--epsilon", "0.15", "--mode", "sample", "--count", "400", "--seed", seed]).1
    };
    assert_eq!(seeded("1"), seeded("1"));
}

#[test]
fn output_file() {
    let dir = std::env::temp_dir().join(format!("binodiv-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("row.json");
    let (code, out) = call(&["row", "--n", "7", "--format", "json", "--output", path.to_str().unwrap()]);
    assert_eq!((code, out.as_str()), (0, ""));
    assert_eq!(std::fs::read_to_string(&path).unwrap(), "{\"n\":7,\"p\":2,\"entries\":{\"3\":8}}\n");
    std::fs::remove_dir_all(dir).unwrap();
}
