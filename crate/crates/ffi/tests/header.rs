use std::path::Path;
use std::process::Command;

const EXPORTED: &[&str] = &[
    "fvs_last_error",
    "fvs_string_free",
    "fvs_graph_new",
    "fvs_graph_parse",
    "fvs_graph_free",
    "fvs_graph_add_edge",
    "fvs_graph_set_undeletable",
    "fvs_graph_vertex_count",
    "fvs_graph_edge_count",
    "fvs_solve_minimum",
    "fvs_solve_decision",
    "fvs_oracle_minimum",
    "fvs_solution_len",
    "fvs_solution_vertices",
    "fvs_solution_branch_nodes",
    "fvs_solution_free",
    "fvs_params_preset",
    "fvs_params_parse",
    "fvs_params_free",
    "fvs_verify",
];

fn header() -> String {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/fvs.h");
    std::fs::read_to_string(path).expect("build script writes include/fvs.h")
}

#[test]
fn header_declares_every_export() {
    let text = header();
    for name in EXPORTED {
        assert!(
            text.contains(&format!("{name}(")),
            "{name} missing from header"
        );
    }
    for constant in [
        "FVS_STATUS_OK = 0",
        "FVS_STATUS_NO = 1",
        "FVS_PRUNE_WEAK = 1",
    ] {
        assert!(text.contains(constant), "{constant} missing from header");
    }
    assert!(text.contains("typedef struct FvsGraph FvsGraph;"));
}

/// Compiles a small C program against the header when a C compiler exists.
#[test]
fn header_compiles_as_c() {
    let Ok(cc) = std::env::var("CC").or_else(|_| which("cc")) else {
        eprintln!("no C compiler found; skipping");
        return;
    };
    let dir = tempfile::tempdir().unwrap();
    let source = dir.path().join("smoke.c");
    std::fs::write(
        &source,
        r#"#include "fvs.h"
int smoke(void) {
    FvsGraph *g = fvs_graph_new(3);
    FvsSolution *s = 0;
    enum FvsStatus st = fvs_solve_minimum(g, FVS_PRUNE_WEAK, &s);
    size_t n = fvs_solution_len(s);
    fvs_solution_free(s);
    fvs_graph_free(g);
    return st == FVS_STATUS_OK ? (int)n : -1;
}
"#,
    )
    .unwrap();
    let include = Path::new(env!("CARGO_MANIFEST_DIR")).join("include");
    let status = Command::new(cc)
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(&include)
        .arg(&source)
        .status()
        .unwrap();
    assert!(status.success());
}

fn which(name: &str) -> Result<String, ()> {
    let path = std::env::var_os("PATH").ok_or(())?;
    std::env::split_paths(&path)
        .map(|dir| dir.join(name))
        .find(|p| p.is_file())
        .map(|p| p.to_string_lossy().into_owned())
        .ok_or(())
}
