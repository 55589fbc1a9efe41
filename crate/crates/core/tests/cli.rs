use lie_branching::cli::run;

fn lb(args: &str) -> lie_branching::cli::Outcome {
    run(std::iter::once("lie-branch").chain(args.split_whitespace()))
}

#[test]
fn branch_all_methods_agree() {
    let out = lb("branch --catalog A1-in-A2-xe1 -i [1,1] --method all");
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.contains("[2]"));
    assert!(out.stdout.contains("[1]"));
}

#[test]
fn json_is_deterministic_and_round_trips() {
    for cmd in [
        "branch --catalog A1-in-A2-xe4 -i [2,1] --method all --json",
        "tensor --algebra A2 -i [1,0] -j [0,1] --json",
        "verlinde --algebra A1 --level 4 -i [2] -j [2] --json",
        "smatrix --algebra A2 --level 2 --json",
        "weights --algebra B2 -i [1,1] --json",
        "nimrep --catalog A1-in-A2-xe1 -i [1,0] --verify-with [0,1] --json",
        "nimrep-a2 --level 8 -i [1,1] --map psiprime --json",
        "integral a1-in-a2 1 1 1 --json",
        "catalog list --json",
    ] {
        let a = lb(cmd);
        let b = lb(cmd);
        assert_eq!(a.code, 0, "{cmd}: {}", a.stderr);
        assert_eq!(a.stdout, b.stdout, "{cmd}");
        let v: serde_json::Value = serde_json::from_str(&a.stdout).unwrap();
        assert!(v.as_object().unwrap().keys().next() == Some(&"schema_version".to_string()), "{cmd}");
        let again = serde_json::to_string_pretty(&v).unwrap();
        assert_eq!(again.trim_end(), a.stdout.trim_end(), "{cmd}");
    }
}

#[test]
fn tensor_matches_known_decomposition() {
    let out = lb("tensor --algebra A2 -i [1,0] -j [0,1] --json");
    let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    let text = v.to_string();
    assert!(text.contains("[1,1]") || text.contains("[\n"), "{text}");
    let out = lb("tensor --algebra A2 -i [1,0] -j [0,1]");
    assert!(out.stdout.contains("[1,1]") && out.stdout.contains("[0,0]"));
}

#[test]
fn validation_errors_exit_2() {
    for cmd in [
        "branch --catalog A1-in-A2-xe1 -i [1,1,1]",
        "branch --catalog A1-in-A2-xe1 -i [-1,0]",
        "branch --catalog no-such-embedding -i [1,0]",
        "verlinde --algebra A2 --level 1 -i [2,0] -j [0,0]",
        "branch --catalog A1-in-A2-xe1 -i [1,1] --method closed --level 1",
        "nimrep-a2 --level 5 -i [1,0]",
        "smatrix --algebra X9 --level 1",
        "branch -i [1,0]",
    ] {
        let out = lb(cmd);
        assert_eq!(out.code, 2, "{cmd}: {}", out.stdout);
        assert!(!out.stderr.is_empty(), "{cmd}");
    }
}

#[test]
fn rank_mismatch_message() {
    let out = lb("branch --catalog A1-in-A2-xe1 -i [1,1,1]");
    assert!(out.stderr.contains("rank mismatch"), "{}", out.stderr);
}

#[test]
fn embedding_file_input() {
    let dir = std::env::temp_dir().join(format!("lie-branch-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let good = dir.join("good.json");
    std::fs::write(&good, r#"{"name":"mine","g":"A2","p":"A1","P":[[1,1]]}"#).unwrap();
    let out = lb(&format!("branch --embedding {} -i [1,0]", good.display()));
    assert_eq!(out.code, 0, "{}", out.stderr);
    let bad = dir.join("bad.json");
    std::fs::write(&bad, r#"{"name":"bad","g":"A2","p":"A1","P":[[0,0]]}"#).unwrap();
    assert_eq!(lb(&format!("branch --embedding {} -i [1,0]", bad.display())).code, 2);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn integral_command() {
    let out = lb("integral a1-tensor 2 2 2");
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains('1'));
}
