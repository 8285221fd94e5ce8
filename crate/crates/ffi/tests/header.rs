use std::path::Path;
use std::process::Command;

/// The committed header is valid C and declares every exported function.
#[test]
fn header_compiles_and_is_complete() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR"));
    let header = dir.join("include/secrecy_regions.h");
    let text = std::fs::read_to_string(&header).unwrap();
    let src = std::fs::read_to_string(dir.join("src/lib.rs")).unwrap();
    for line in src.lines().filter(|l| l.contains("extern \"C\" fn ")) {
        let name = line.split("fn ").nth(1).unwrap().split('(').next().unwrap();
        assert!(
            text.contains(&format!(" {name}(")) || text.contains(&format!("*{name}(")),
            "{name} missing"
        );
    }
    let Ok(out) = Command::new("cc")
        .args(["-fsyntax-only", "-Wall", "-Werror", "-x", "c"])
        .arg(&header)
        .output()
    else {
        eprintln!("no C compiler; skipping syntax check");
        return;
    };
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}
