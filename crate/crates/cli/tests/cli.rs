use std::process::{Command, Output};

fn cfvar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cfvar"))
        .args(args)
        .env_remove("CFVAR_CATALOG")
        .output()
        .expect("spawn cfvar")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn verify_single_entry_passes() {
    let o = cfvar(&["verify", "--id", "tiny-apery", "--prec", "40"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("tiny-apery"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(cfvar(&["verify", "--id", "nope"]).status.code(), Some(2));
    assert_eq!(cfvar(&["verify", "--prec", "5"]).status.code(), Some(2));
    assert_eq!(cfvar(&["verify", "--frobnicate"]).status.code(), Some(2));
    assert_eq!(cfvar(&["eval", "--id", "thm8", "--z", "0.5"]).status.code(), Some(2));
    assert_eq!(cfvar(&["eval", "--id", "s-big", "--terms", "3"]).status.code(), Some(2));
    assert_eq!(cfvar(&["integral", "--family", "i3", "--params", "1,1,1"]).status.code(), Some(2));
}

#[test]
fn help_for_every_subcommand() {
    for sub in [
        "verify",
        "eval",
        "shift",
        "rate",
        "group",
        "integrality",
        "integral",
        "bessel",
        "f-explore",
    ] {
        let o = cfvar(&[sub, "--help"]);
        assert_eq!(o.status.code(), Some(0), "{sub}");
        assert!(stdout(&o).contains("Usage"), "{sub}");
    }
}

#[test]
fn eval_digits() {
    let o = cfvar(&["eval", "--id", "s-big", "--prec", "35"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("0.169211706578818548387095264988340"));

    let o = cfvar(&["eval", "--id", "thm9", "--z", "0", "--prec", "30"]);
    assert!(stdout(&o).starts_with("1.64493406684822643647241516"));
}

#[test]
fn shift_recognizes_catalog_form() {
    let o = cfvar(&["shift", "--id", "small-apery"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("[[0,44n^2+1],[20,16n^4+32n^3+24n^2+8n+1]]"), "{s}");
    assert!(s.contains("matches catalog: yes"), "{s}");
}

#[test]
fn group_order() {
    let o = cfvar(&["group", "--case", "zeta3", "--order"]);
    assert_eq!(stdout(&o).trim(), "1920");
    let o = cfvar(&["group", "--case", "zeta2", "--order"]);
    assert_eq!(stdout(&o).trim(), "120");
}

#[test]
fn integrality_exit_codes() {
    // n = 1 carries a small cofactor; from n = 2 on the scaled coordinates are integers.
    let o = cfvar(&["integrality", "--case", "zeta3", "--nmax", "15"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("failures at n = [1]"));
}

#[test]
fn structured_output_is_versioned_and_stable() {
    let args = ["--structured", "group", "--case", "zeta2"];
    let a = cfvar(&args);
    let b = cfvar(&args);
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["format"], "cfvar-cli/1");
    assert_eq!(v["result"]["order"], 120);

    let o = cfvar(&["verify", "--id", "tiny-apery", "--structured"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v.is_object());
}

#[test]
fn catalog_from_environment() {
    let dir = std::env::temp_dir().join(format!("cfvar-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.json");
    std::fs::write(&path, "{ not json").unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_cfvar"))
        .args(["verify", "--id", "tiny-apery"])
        .env("CFVAR_CATALOG", &path)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).ok();
}
