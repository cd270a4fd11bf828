use std::path::PathBuf;
use std::process::{Command, Output};

fn pt3(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pt3"))
        .args(args)
        .env_remove("PT3_CACHE_DIR")
        .output()
        .expect("pt3 runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("pt3-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn verify_formula_on_degree_nine() {
    let o = pt3(&["verify-formula", "--q", "5", "--n", "9", "--samples", "100"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("k = 4: 100 checked, 0 mismatches"));
}

#[test]
fn verify_formula_rejects_characteristic_two() {
    let o = pt3(&["verify-formula", "--q", "4", "--n", "9"]);
    assert_eq!(code(&o), 3);
}

#[test]
fn verify_formula_skips_multiples_of_p() {
    let o = pt3(&["verify-formula", "--q", "5", "--n", "7", "--k", "5"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("k = 5: skipped"));
}

#[test]
fn count_small_grid_totals_phi() {
    let o = pt3(&["count", "--q", "5", "--n", "2", "--all"]);
    assert_eq!(code(&o), 0);
    // phi(24) = 8
    assert!(stdout(&o).contains("total 8\n"));
}

#[test]
fn count_degree_nine_is_positive_everywhere() {
    let o = pt3(&["count", "--q", "5", "--n", "9", "--all"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("125/125 positive"));
}

#[test]
fn count_over_budget_exits_4() {
    let o = pt3(&["count", "--q", "5", "--n", "13", "--all", "--tier", "scalar"]);
    assert_eq!(code(&o), 4);
}

#[test]
fn count_needs_a_triple_or_all() {
    assert_eq!(code(&pt3(&["count", "--q", "5", "--n", "3", "--a", "1"])), 3);
    assert_eq!(code(&pt3(&["count", "--q", "5", "--n", "3", "--all", "--a", "1"])), 3);
}

#[test]
fn count_reads_coefficients_in_either_convention() {
    // signed (1, 2, 3) and unsigned (-1, 2, -3) = (4, 2, 2) over F_5 are the same polynomial
    let s = pt3(&["count", "--q", "5", "--n", "6", "--a", "1", "--b", "2", "--c", "3", "--input", "signed", "--format", "json"]);
    let u = pt3(&["count", "--q", "5", "--n", "6", "--a", "4", "--b", "2", "--c", "2", "--input", "unsigned", "--format", "json"]);
    assert_eq!(code(&s), 0);
    assert_eq!(s.stdout, u.stdout);
    let v: serde_json::Value = serde_json::from_slice(&s.stdout).unwrap();
    assert_eq!(v["signed"], serde_json::json!([1, 2, 3]));
    assert_eq!(v["unsigned"], serde_json::json!([4, 2, 2]));
}

#[test]
fn json_is_identical_across_runs_and_thread_counts() {
    let a = pt3(&["count", "--q", "7", "--n", "5", "--all", "--format", "json", "--threads", "1"]);
    let b = pt3(&["count", "--q", "7", "--n", "5", "--all", "--format", "json", "--threads", "4"]);
    let c = pt3(&["count", "--q", "7", "--n", "5", "--all", "--format", "json"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
    let f1 = pt3(&["verify-formula", "--q", "7", "--n", "8", "--samples", "5", "--seed", "11", "--format", "json"]);
    let f2 = pt3(&["verify-formula", "--q", "7", "--n", "8", "--samples", "5", "--seed", "11", "--format", "json"]);
    assert_eq!(f1.stdout, f2.stdout);
}

#[test]
fn count_uses_the_cache_directory() {
    let dir = scratch("cache");
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_pt3"))
            .args(["count", "--q", "5", "--n", "4", "--all"])
            .env("PT3_CACHE_DIR", &dir)
            .output()
            .unwrap()
    };
    let first = run();
    let second = run();
    assert!(!stdout(&first).contains("from cache"));
    assert!(stdout(&second).contains("from cache"));
    let strip = |s: String| s.replace(", from cache", "");
    assert_eq!(strip(stdout(&first)), strip(stdout(&second)));
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn report_goes_to_the_out_file() {
    let dir = scratch("out");
    let path = dir.join("grid.json");
    let o = pt3(&["count", "--q", "5", "--n", "3", "--all", "--format", "json", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("positive"));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["total"], 60); // phi(124) = phi(4) phi(31)
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn charsum_bounds_hold_on_small_field() {
    let o = pt3(&["charsum-check", "--q", "5", "--n", "2", "--all", "--identity"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("all bounds hold"));
    assert!(!stdout(&o).contains("VIOLATED"));
}

#[test]
fn charsum_respects_the_desk_budget() {
    assert_eq!(code(&pt3(&["charsum-check", "--q", "5", "--n", "9", "--all"])), 4);
}

#[test]
fn bounds_for_large_n_use_the_resolver() {
    let o = pt3(&["bounds", "--q", "5", "--n", "40", "--pattern", "nonzeros"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("resolver rule StrongForm"));
    assert_eq!(code(&pt3(&["bounds", "--q", "5", "--n", "6"])), 3);
    assert_eq!(code(&pt3(&["bounds", "--q", "5", "--n", "9", "--pattern", "xyz"])), 3);
}

#[test]
fn table_for_n12_zeros_matches_print() {
    let o = pt3(&["tables", "--n", "12", "--pattern", "zeros", "--format", "csv"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.starts_with("n,pattern_class,omega,q0,rhs_root\n"));
    assert!(out.contains("12,zeros,1,0.50,1.71\n"));
    assert!(out.contains("12,zeros,10,7.70,6.72\n"));
}

#[test]
fn every_table_difference_is_ledgered() {
    let o = pt3(&["tables"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("8 differences from print, 8 explained by the ledger"));
}

#[test]
fn unledgered_difference_exits_5() {
    let dir = scratch("ledger");
    let path = dir.join("empty.json");
    std::fs::write(&path, "[]").unwrap();
    let o = pt3(&["tables", "--n", "9", "--pattern", "zeros", "--ledger", path.to_str().unwrap()]);
    assert_eq!(code(&o), 5);
    assert!(stdout(&o).contains("UNEXPLAINED"));
    // the n = 12 zero table agrees with print, so the same ledger passes there
    let o = pt3(&["tables", "--n", "12", "--pattern", "zeros", "--ledger", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn certify_leaves_nothing_open_from_nine_up() {
    let o = pt3(&["certify", "--n", "9..12", "--q", "5..1000", "--summary"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert_eq!(out.matches(" 0 unresolved").count(), 8, "{out}");
    assert!(out.contains("UNRESOLVED 0"));
}

#[test]
fn certify_n7_zeros_leaves_nine() {
    let o = pt3(&["certify", "--n", "7", "--pattern", "zeros", "--summary"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("n = 7, zeros: 9 unresolved: 25, 49, 121, 169, 191, 197, 199, 239, 269"));
}

#[test]
fn certify_json_cites_replayable_rules() {
    let o = pt3(&["certify", "--n", "8", "--q", "49..73", "--pattern", "zeros", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let rec = v["records"].as_array().unwrap().iter().find(|r| r["q"] == 49).unwrap();
    assert_eq!(rec["method"], "sieve");
    assert_eq!(rec["evidence"]["plan"]["d"], serde_json::json!([2]));
}

#[test]
fn exceptions_lists_each_settlement() {
    let o = pt3(&["exceptions", "--n", "8", "--pattern", "zeros", "--direct-mode", "reported"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.contains("27 possible exceptions, 1 unresolved"));
    assert!(out.contains("q =   49  omega =  5  t =    65.39  sieve"));
}

#[test]
fn usage_errors_exit_3() {
    assert_eq!(code(&pt3(&["frobnicate"])), 3);
    assert_eq!(code(&pt3(&["count", "--q", "5"])), 3);
    assert_eq!(code(&pt3(&["--help"])), 0);
}
