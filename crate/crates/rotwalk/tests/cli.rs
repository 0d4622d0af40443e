use std::process::Command;

fn rotwalk(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_rotwalk")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

#[test]
fn walk_csv_ends_with_known_row() {
    let (code, out) = rotwalk(&["walk", "--alpha", "periodic:2", "--n", "7"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().next().unwrap(), "n,S_n,running_max,running_min");
    assert_eq!(out.lines().last().unwrap(), "7,2,3,1");
}

#[test]
fn expand_lists_denominators() {
    let (code, out) = rotwalk(&["expand", "--alpha", "periodic:2", "--depth", "4"]);
    assert_eq!(code, 0);
    let q: Vec<&str> = out.lines().skip(1).map(|l| l.split(',').nth(3).unwrap()).collect();
    assert_eq!(q, ["1", "2", "5", "12", "29"]);
}

#[test]
fn verify_passes_for_golden() {
    let (code, out) = rotwalk(&["verify", "--alpha", "golden", "--n-max", "1000"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.lines().skip(1).all(|l| l.ends_with(",0")));
}

#[test]
fn exit_codes() {
    assert_eq!(rotwalk(&["walk", "--alpha", "nonsense", "--n", "3"]).0, 2);
    assert_eq!(rotwalk(&["walk", "--alpha", "list:1,2,3", "--n", "100"]).0, 3);
    assert_eq!(rotwalk(&["discrepancy", "--alpha", "golden", "--beta", "rat:3/2"]).0, 1);
    assert_eq!(rotwalk(&["walk"]).0, 2);
}

#[test]
fn discrepancy_and_dstar_headers() {
    let (code, out) = rotwalk(&["discrepancy", "--alpha", "sqrt2m1", "--beta", "rat:1/2", "--n", "3"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().next().unwrap(), "n,beta,d,C,S,B,bound_C,bound_S,bound_B");
    assert!(out.lines().nth(1).unwrap().starts_with("3,1/2,1/2,"));
    let (code, out) = rotwalk(&["dstar", "--alpha", "sqrt2m1", "--n", "3"]);
    assert_eq!(code, 0);
    assert_eq!(out, "n,n_dstar,pinner_bound\n3,1,5\n");
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = std::env::temp_dir().join(format!("rotwalk-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("run.cfg");
    std::fs::write(&cfg, "command = walk\nalpha = periodic:2\nn = 3\n").unwrap();
    let (code, out) = rotwalk(&["--config", cfg.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().last().unwrap(), "3,2,2,1");
    let (code, out) = rotwalk(&["walk", "--config", cfg.to_str().unwrap(), "--n", "7"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().last().unwrap(), "7,2,3,1");
    let target = dir.join("out.csv");
    let (code, _) = rotwalk(&["expand", "--alpha", "golden", "--depth", "3", "--out", target.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(std::fs::read_to_string(&target).unwrap().starts_with("h,a_h,p_h,q_h,f_h"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn output_is_deterministic() {
    let args = ["discrepancy", "--alpha", "golden", "--beta", "rat:1/3", "--grid", "1:200:7", "--jobs", "2"];
    assert_eq!(rotwalk(&args).1, rotwalk(&args).1);
}
