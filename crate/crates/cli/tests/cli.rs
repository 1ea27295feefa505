use std::path::PathBuf;
use std::process::{Command, Output};

fn forge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_coclass-forge"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn tmpfile(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("coclass-forge-test-{}-{name}", std::process::id()));
    p
}

#[test]
fn family_round_trips_through_the_parser() {
    let out = forge(&["family", "cc2-exception"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let path = tmpfile("cc2.pcp");
    std::fs::write(&path, &text).unwrap();
    let check = forge(&["consistency", path.to_str().unwrap()]);
    assert_eq!(check.status.code(), Some(0), "{}", stdout(&check));
    // canonical serialization is stable: family output re-parses to itself
    let again = forge(&["family", "cc2-exception"]);
    assert_eq!(text, stdout(&again));
    std::fs::remove_file(&path).ok();
}

#[test]
fn consistency_exit_codes() {
    // consistent fixture -> 0
    let good = tmpfile("good.pcp");
    std::fs::write(&good, forge(&["family", "dihedral:8"]).stdout).unwrap();
    assert_eq!(forge(&["consistency", good.to_str().unwrap()]).status.code(), Some(0));

    // inconsistent fixture -> 1 (broken variant of the first sequence)
    let broken = tmpfile("broken.pcp");
    std::fs::write(
        &broken,
        "pcgroup 6\norder 1 2\norder 2 2\norder 3 2\norder 4 2\norder 5 2\norder 6 8\n\
         power 2 := g3 g6\nconj 2 1 := g2 g3\nconj 3 1 := g3 g6\nconj 6 1 := g6^-1\n",
    )
    .unwrap();
    let out = forge(&["consistency", broken.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("inconsistent"));

    // malformed file -> 2
    let bad = tmpfile("bad.pcp");
    std::fs::write(&bad, "pcgroup 2\norder 1 2\norder 2 2\nconj 2 1 := g1\n").unwrap();
    assert_eq!(forge(&["consistency", bad.to_str().unwrap()]).status.code(), Some(2));

    for p in [good, broken, bad] {
        std::fs::remove_file(p).ok();
    }
}

#[test]
fn aut_reports_and_exit_codes() {
    // Aut(D8) is a 2-group of order 8 -> exit 0
    let out = forge(&["aut", "dihedral:8"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("2^3 * 1"));

    // Aut(C2^3) = 168 -> not a 2-group -> exit 1, odd part 21 in JSON
    let out = forge(&["aut", "elemab:3", "--format", "json"]);
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["aut"]["order_two_exponent"], 3);
    assert_eq!(v["aut"]["odd_part"], 21);
    assert_eq!(v["aut"]["is_2_group"], false);
    assert!(v["aut"]["witness"].is_object());

    // the first exceptional sequence member: odd part > 1 -> exit 1
    let out = forge(&["aut", "K1:2", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("K1:2,16,3,false"));

    // tiny node budget -> exit 3
    let out = forge(&["aut", "elemab:3", "--budget-nodes", "2"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn explore_is_deterministic_and_reports_exceptions() {
    let out1 = tmpfile("explore1.json");
    let out2 = tmpfile("explore2.json");
    for out in [&out1, &out2] {
        let run = forge(&[
            "explore",
            "--coclass",
            "2",
            "--max-order",
            "32",
            "--format",
            "json",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(run.status.code(), Some(0));
    }
    let a = std::fs::read(&out1).unwrap();
    let b = std::fs::read(&out2).unwrap();
    assert!(!a.is_empty());
    assert_eq!(a, b, "explore JSON must be byte-identical across runs");

    let v: serde_json::Value = serde_json::from_slice(&a).unwrap();
    let exceptions = v["exceptions"].as_array().unwrap();
    let by_order: std::collections::BTreeMap<u64, u64> = exceptions
        .iter()
        .map(|e| {
            (
                e["order"].as_u64().unwrap(),
                e["exceptional"].as_array().unwrap().len() as u64,
            )
        })
        .collect();
    assert_eq!(by_order[&8], 1);
    assert_eq!(by_order[&16], 2);
    assert_eq!(by_order[&32], 0);
    assert_eq!(v["lemma_check"]["violations"].as_array().unwrap().len(), 0);
    assert!(v["graph"]["nodes"].as_array().unwrap().len() >= 20);

    for p in [out1, out2] {
        std::fs::remove_file(p).ok();
    }
}

#[test]
fn iso_exit_codes_with_files_and_specs() {
    let a = tmpfile("iso-a.pcp");
    std::fs::write(&a, forge(&["family", "K1:2"]).stdout).unwrap();
    // file vs spec, isomorphic
    let out = forge(&["iso", a.to_str().unwrap(), "K1:2"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("isomorphic"));
    // specs, not isomorphic
    let out = forge(&["iso", "dihedral:16", "semidihedral:16"]);
    assert_eq!(out.status.code(), Some(1));
    // unknown target -> usage error
    let out = forge(&["iso", "dihedral:16", "/nonexistent/file.pcp"]);
    assert_eq!(out.status.code(), Some(2));
    std::fs::remove_file(a).ok();
}

#[test]
fn kverify_table_shape() {
    let out = forge(&["kverify", "--i", "1..6", "--n", "2..2", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let lines: Vec<&str> = text.trim().lines().collect();
    assert_eq!(lines.len(), 7, "header + six rows:\n{text}");
    assert!(lines[0].starts_with("i,n,consistent,order,class,coclass"));
    for row in &lines[1..] {
        let cols: Vec<&str> = row.split(',').collect();
        assert_eq!(cols[2], "true", "consistent: {row}");
        assert_eq!(cols[3], "256", "order: {row}");
        assert_eq!(cols[5], "3", "coclass: {row}");
        assert_ne!(cols[7], "1", "odd part must exceed 1: {row}");
    }
}
