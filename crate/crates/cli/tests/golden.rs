//! Window and spectrum outputs for the four reference drives against the
//! committed files in `tests/golden`. Set `UPDATE_GOLDEN=1` to rewrite them.

use std::fs;
use std::path::PathBuf;
use std::process::Command;

const DRIVES: [(&str, &str); 4] = [
    ("k0_0.6", "0.6"),
    ("k0_0.4", "0.4"),
    ("k0_0.2", "0.2"),
    ("k0_0", "0"),
];

fn golden(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests")
        .join("golden")
        .join(name)
}

fn run(args: &[&str]) -> String {
    let out = Command::new(env!("CARGO_BIN_EXE_radiant"))
        .args(args)
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn check(name: &str, actual: &str) {
    let path = golden(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        fs::create_dir_all(path.parent().unwrap()).unwrap();
        fs::write(&path, actual).unwrap();
        return;
    }
    let expected = fs::read_to_string(&path)
        .unwrap_or_else(|e| panic!("{}: {e} (run with UPDATE_GOLDEN=1)", path.display()));
    assert!(expected == actual, "{name} differs from golden file");
}

#[test]
fn window_goldens() {
    for (tag, k0) in DRIVES {
        let csv = run(&[
            "window",
            "--omega0",
            "1",
            "--k0",
            k0,
            "--Omega",
            "0.75",
            "--phi-grid",
            "37",
        ]);
        check(&format!("window_{tag}.csv"), &csv);
    }
}

#[test]
fn spectrum_goldens() {
    for (tag, k0) in DRIVES {
        let csv = run(&[
            "spectrum", "--omega0", "1", "--k0", k0, "-d", "1", "--points", "21",
        ]);
        check(&format!("spectrum_{tag}.csv"), &csv);
    }
}
