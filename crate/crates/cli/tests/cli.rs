use std::path::{Path, PathBuf};
use std::process::Command;

use sl4coh::constituents::Database;
use sl4coh::ffield::ExtField;
use sl4coh::finder::{parse_report, parse_representation, Finder};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sl4coh"))
}

fn run(args: &[&str], dir: &Path) -> (bool, String, String) {
    let out = bin().args(args).current_dir(dir).env("RUST_BACKTRACE", "0").output().unwrap();
    (out.status.success(), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

fn workdir(name: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("sl4coh-cli-{name}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&d);
    std::fs::create_dir_all(&d).unwrap();
    d
}

#[test]
fn admissible_prime_search() {
    let (ok, out, _) = run(&["admissible-prime", "41", "--min", "20000"], Path::new("."));
    assert!(ok);
    let p: u64 = out.trim().parse().unwrap();
    assert!(p >= 20000 && p % 40 == 1);
}

#[test]
fn character_table_rows() {
    let (ok, out, _) = run(&["characters", "7", "12037"], Path::new("."));
    assert!(ok);
    assert!(out.lines().any(|l| l == "chi_7\t6\todd\t7"), "{out}");
    assert_eq!(out.lines().count(), 7);
}

#[test]
fn inadmissible_prime_is_rejected() {
    let d = workdir("bad");
    std::fs::write(d.join("bad.cfg"), "level = 11\np = 7\n").unwrap();
    let (ok, _, err) = run(&["homology", "bad.cfg"], &d);
    assert!(!ok);
    assert!(err.contains("not admissible"), "{err}");
}

#[test]
fn synthesize_find_and_report() {
    let d = workdir("pipeline");
    std::fs::write(d.join("run.cfg"), "level = 11\np = 4001\nr = auto\nprimes = 2 3 5 7 13:1\npackets = pk\n").unwrap();
    std::fs::create_dir_all(d.join("pk")).unwrap();
    for (name, sum) in [("a", "eps0 + eps1 + eps2*sigma_11_2"), ("b", "eps0 + eps1 + eps2 + eps3")] {
        let (ok, _, err) = run(&["synthesize", "run.cfg", sum, "--out", &format!("pk/{name}.txt")], &d);
        assert!(ok, "{err}");
    }
    let (ok, out, _) = run(&["find", "run.cfg", "pk/a.txt"], &d);
    assert!(ok);
    assert!(out.contains("ε^{0} ⊕ ε^{1} ⊕ ε^{2} σ_{11,2} | ht ok | det ok"), "{out}");
    assert!(out.contains("status unique"));

    let (ok, out, err) = run(&["run", "run.cfg"], &d);
    assert!(ok, "{err}");
    assert!(out.contains("H1 dimension 2"), "{out}");
    let first = std::fs::read(d.join("out/report.txt")).unwrap();
    let (ok, ..) = run(&["report", "run.cfg"], &d);
    assert!(ok);
    assert_eq!(std::fs::read(d.join("out/report.txt")).unwrap(), first, "reports are deterministic");

    let tables = parse_report(&String::from_utf8(first).unwrap()).unwrap();
    assert_eq!(tables.len(), 1);
    let t = &tables[0];
    assert_eq!((t.level, t.p, t.r), (11, 4001, 2));
    assert_eq!(t.rows.len(), 2);
    let db = Database::shipped(11, ExtField::new(4001, 2).unwrap()).unwrap();
    let eta = db.group().trivial();
    let finder = Finder::new(&db, &eta, &[2, 3, 5, 7]).unwrap();
    for row in &t.rows {
        assert!(parse_representation(&finder, &row.representation).is_ok(), "{}", row.representation);
    }
}
