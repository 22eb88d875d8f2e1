use std::process::{Command, Output};

fn homre(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_homre"))
        .args(args)
        .env_remove("HOMRE_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn worked_membership_example_uses_fast_engine() {
    let o = homre(&["member", "--text", "aaaabccba", "--pattern", "(a+|a+b|bc+|cba|b+a)+"]);
    assert_eq!(stdout(&o).trim(), "true (engine=fast:+|∘+)");
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn classify_reports_type_and_depth() {
    let o = homre(&["classify", "--pattern", "((abc|c)(a|dc)c(db|c|bd))+"]);
    assert_eq!(stdout(&o).lines().next(), Some("+∘|∘ depth=4"));
    let o = homre(&["classify", "--pattern", "(a|b)(c+|d*)"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn false_answers_and_usage_errors_have_their_codes() {
    let o = homre(&["match", "--text", "aaa", "--pattern", "b|c"]);
    assert_eq!(stdout(&o).trim(), "false (engine=fast:|∘|)");
    assert_eq!(o.status.code(), Some(1));
    let o = homre(&["oracle", "--text", "xab", "--pattern", "ab", "--problem", "matching"]);
    assert_eq!(stdout(&o).trim(), "true (engine=baseline)");
    assert_eq!(homre(&["member", "--text", "a", "--pattern", "(("]).status.code(), Some(2));
    assert_eq!(homre(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(homre(&["reduce", "--type", "xyz", "--in", "x", "--out", "y"]).status.code(), Some(2));
}

#[test]
fn unsupported_types_fall_back_to_baseline() {
    let o = homre(&["member", "--text", "abab", "--pattern", "(ab)*"]);
    assert_eq!(stdout(&o).trim(), "true (engine=baseline)");
}

#[test]
fn text_and_pattern_can_come_from_files() {
    let dir = tempfile::tempdir().unwrap();
    let t = dir.path().join("t.txt");
    let p = dir.path().join("p.txt");
    std::fs::write(&t, "0000011111\n").unwrap();
    std::fs::write(&p, "(0+1+)+\n").unwrap();
    let o = homre(&["member", "--text", &format!("@{}", t.display()), "--pattern", &format!("@{}", p.display())]);
    assert_eq!(stdout(&o).trim(), "true (engine=fast:+|∘+)");
    assert_eq!(homre(&["member", "--text", "@/no/such/file", "--pattern", "a"]).status.code(), Some(2));
}

#[test]
fn reduce_then_verify_agrees() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("inst.fp");
    let o = homre(&["gen-fp", "--s", "3", "--depth", "2", "--n", "2", "--m", "2", "--seed", "9", "--out", inst.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    for (ty, problem) in [("cpc", "matching"), ("cop", "matching"), ("opoc", "membership"), ("cpo", "membership")] {
        let case = dir.path().join(format!("case-{ty}"));
        let o = homre(&["reduce", "--type", ty, "--problem", problem, "--in", inst.to_str().unwrap(), "--out", case.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        assert!(stdout(&o).contains(&format!("type={ty}")));
        let o = homre(&["verify", "--bundle", case.to_str().unwrap(), "--in", inst.to_str().unwrap()]);
        assert!(stdout(&o).starts_with("AGREE"), "{}", stdout(&o));
        assert_eq!(o.status.code(), Some(0));
    }
}

#[test]
fn verify_flags_a_corrupted_bundle() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("inst.fp");
    homre(&["gen-fp", "--s", "2", "--depth", "1", "--seed", "3", "--out", inst.to_str().unwrap()]);
    let case = dir.path().join("case");
    homre(&["reduce", "--type", "cpc", "--in", inst.to_str().unwrap(), "--out", case.to_str().unwrap()]);
    let text_path = dir.path().join("case.text");
    let mut text = std::fs::read_to_string(&text_path).unwrap();
    let k = text.find('3').unwrap();
    text.replace_range(k..=k, "2");
    std::fs::write(&text_path, text).unwrap();
    let o = homre(&["verify", "--bundle", case.to_str().unwrap(), "--in", inst.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn reduce_rejects_unsupported_combination() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("inst.fp");
    homre(&["gen-fp", "--out", inst.to_str().unwrap()]);
    let o = homre(&["reduce", "--type", "opoc", "--problem", "matching", "--in", inst.to_str().unwrap(), "--out", "x"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn selftest_is_deterministic() {
    let a = homre(&["selftest", "--seed", "5", "--count", "50"]);
    let b = homre(&["selftest", "--seed", "5", "--count", "50"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).ends_with("selftest: ok\n"));
}

#[test]
fn seed_comes_from_the_environment() {
    let run = |seed: &str| {
        Command::new(env!("CARGO_BIN_EXE_homre"))
            .args(["gen-fp", "--s", "5", "--depth", "3"])
            .env("HOMRE_SEED", seed)
            .output()
            .unwrap()
            .stdout
    };
    assert_eq!(run("17"), run("17"));
    assert_eq!(run("17"), homre(&["gen-fp", "--s", "5", "--depth", "3", "--seed", "17"]).stdout);
    assert_ne!(run("17"), run("18"));
}

#[test]
fn bench_runs_small() {
    let o = homre(&["bench", "--n", "500", "--ov-n", "64", "--ov-d", "64"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("batch OV"));
}
