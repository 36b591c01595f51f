use std::fs;
use std::process::{Command, Output};

fn lamlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lamlab"))
        .args(args)
        .env_remove("LAMLAB_FUEL")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

#[test]
fn head_reduction_of_k() {
    let o = lamlab(&["reduce", "--strategy", "head", r"(\x.\y.x) a b"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    let last_term = out.lines().rev().nth(1).unwrap();
    assert!(last_term.trim_start().ends_with("  a"), "{out}");
    assert!(out.contains("head normal form after 2 steps"));
}

#[test]
fn omega_exhausts_fuel() {
    let o = lamlab(&["reduce", r"(\x.x x)(\x.x x)", "--fuel", "10"]);
    assert_eq!(code(&o), 3);
    assert!(stdout(&o).contains("fuel exhausted after 10 steps"));
}

#[test]
fn fuel_comes_from_the_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_lamlab"))
        .args(["reduce", r"(\x.x x)(\x.x x)"])
        .env("LAMLAB_FUEL", "7")
        .output()
        .unwrap();
    assert_eq!(code(&o), 3);
    assert!(stdout(&o).contains("after 7 steps"));
}

#[test]
fn church_storage_trace_ends_at_f_of_successors() {
    let o = lamlab(&["reduce", "--strategy", "head", "(O_N 2 f)"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    let last = out.lines().rev().nth(1).unwrap();
    assert!(last.ends_with("f (S (S 0))"), "{out}");
}

#[test]
fn parse_errors_exit_2() {
    for args in [
        &["reduce", r"(\x."][..],
        &["equiv", "T", "(("],
        &["star", "forall"],
        &["parse", ")"],
    ] {
        let o = lamlab(args);
        assert_eq!(code(&o), 2, "{args:?}");
        assert!(String::from_utf8_lossy(&o.stderr).contains("error"));
    }
}

#[test]
fn equivalence_verdicts() {
    assert_eq!(code(&lamlab(&["equiv", "S 0", "1"])), 0);
    assert_eq!(code(&lamlab(&["equiv", "T", "F"])), 1);
    assert_eq!(code(&lamlab(&["equiv", "(Ze e0)", "T"])), 0);
    let o = lamlab(&["equiv", r"(\x.x x)(\x.x x)", "T", "--fuel", "50"]);
    assert_eq!(code(&o), 4);
}

#[test]
fn star_translation() {
    assert_eq!(stdout(&lamlab(&["star", "X"])).trim(), "~X");
    assert_eq!(stdout(&lamlab(&["star", "bot"])).trim(), "bot");
    let n = stdout(&lamlab(&["star", "forall X. X -> (X -> X) -> X"]));
    let ns = stdout(&lamlab(&["star", "Ns"]));
    assert_eq!(n.trim(), "forall X. ~X -> (~X -> ~X) -> ~X");
    assert_eq!(
        stdout(&lamlab(&["parse", "--typed", "/\\X. \\x:Ns. x"]))
            .lines()
            .count(),
        2
    );
    assert_eq!(ns.trim(), "forall X. ~~X -> (~~X -> ~~X) -> ~~X");
}

#[test]
fn shipped_witnesses_check() {
    let dir = tempdir();
    assert_eq!(code(&lamlab(&["zoo", "emit", dir.to_str().unwrap()])), 0);
    let o = lamlab(&["check", dir.join("zoo.tlam").to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let out = stdout(&o);
    assert!(out.contains("tP : "), "{out}");
    assert!(out.lines().last().unwrap().ends_with(", 0 failed"));
}

#[test]
fn wrong_claim_is_named_and_fails() {
    let dir = tempdir();
    let file = dir.join("bad.tlam");
    fs::write(
        &file,
        "def I = \\x.x\ntdef I : forall X. X -> X = /\\X. \\x:X. x\ntdef K : forall X. X = /\\X. \\x:X. x\n",
    )
    .unwrap();
    let o = lamlab(&["check", file.to_str().unwrap(), "--json"]);
    assert_eq!(code(&o), 1);
    let records: Vec<serde_json::Value> = stdout(&o)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(records.len(), 2);
    assert_eq!(records[0]["ok"], true);
    assert_eq!(records[0]["erasure_matches"], true);
    assert_eq!(records[1]["name"], "K");
    assert_eq!(records[1]["ok"], false);
}

#[test]
fn prelude_file_adds_names() {
    let dir = tempdir();
    let file = dir.join("extra.lam");
    fs::write(&file, "def two = S (S 0)\n").unwrap();
    let p = file.to_str().unwrap();
    assert_eq!(code(&lamlab(&["equiv", "two", "2", "--prelude", p])), 0);
    // without the prelude `two` is a free variable
    assert_eq!(code(&lamlab(&["equiv", "two", "2"])), 1);
}

#[test]
fn verify_church_passes_and_json_has_one_record_per_claim() {
    let o = lamlab(&["verify", "church", "--max-n", "10", "--json"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let out = stdout(&o);
    let ids: Vec<String> = out
        .lines()
        .map(|l| {
            let v: serde_json::Value = serde_json::from_str(l).unwrap();
            assert_eq!(v["status"], "PASS", "{l}");
            v["claim_id"].as_str().unwrap().to_string()
        })
        .collect();
    let mut sorted = ids.clone();
    sorted.sort();
    sorted.dedup();
    assert_eq!(ids, sorted);
    assert!(ids.contains(&"church.storage".to_string()));
}

#[test]
fn verify_as_printed_fails_with_counterexamples() {
    let o = lamlab(&["verify", "church", "--as-printed"]);
    assert_eq!(code(&o), 1);
    let out = stdout(&o);
    let line = |id: &str| {
        out.lines()
            .find(|l| l.starts_with(&format!("CLAIM {id} ")))
            .unwrap()
            .to_string()
    };
    assert!(line("church.successor").contains("FAIL n=0"), "{out}");
    assert!(line("church.successor").contains("S_printed 0"));
    assert!(line("church.predecessor").contains("FAIL"));
    assert!(line("church.zero-test").contains("PASS"));
}

#[test]
fn verify_system_e_reports_p_prime() {
    let o = lamlab(&["verify", "system-e"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("CLAIM e.p-prime PASS"));
}

#[test]
fn unknown_suite_exits_2() {
    assert_eq!(code(&lamlab(&["verify", "nonsense"])), 2);
}

#[test]
fn zoo_show_and_list() {
    let o = lamlab(&["zoo", "show", "tP", "--typed"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.contains("def tP = "));
    assert!(out.contains("tdef tP : "));
    assert_eq!(code(&lamlab(&["zoo", "show", "nothing"])), 2);
    let list = stdout(&lamlab(&["zoo", "list"]));
    assert!(list.lines().any(|l| l.starts_with("Oe : ")));
}

fn tempdir() -> std::path::PathBuf {
    use std::sync::atomic::{AtomicUsize, Ordering};
    static COUNTER: AtomicUsize = AtomicUsize::new(0);
    let dir = std::env::temp_dir().join(format!(
        "lamlab-cli-{}-{}",
        std::process::id(),
        COUNTER.fetch_add(1, Ordering::Relaxed)
    ));
    fs::create_dir_all(&dir).unwrap();
    dir
}
