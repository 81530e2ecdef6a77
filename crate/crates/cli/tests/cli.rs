use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const FIXTURE: &str = "\
# worked example
11 12
1 2
2 3
3 4
4 5
1 6
6 7
7 8
8 4
2 9
9 10
10 11
11 5
";

fn spp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spp")).args(args).output().expect("binary runs")
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn solve_fixture_yes() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "fixture.txt", FIXTURE);
    let o = spp(&["solve", s(&g), "--s", "1", "--t", "5", "--k", "2", "--ell", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("yes\n"));
    assert!(out.contains("(1,6,7,8,4,5)"), "{out}");

    let o = spp(&["solve", s(&g), "--s", "1", "--t", "5", "--k", "2", "--ell", "5", "--no-trivial", "--heur", "bare", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["decision"], "yes");
    assert_eq!(v["stats"]["nodes"], 2);
    assert_eq!(v["stats"]["br1"], 1);
    assert_eq!(v["config"], "bare/no-triv");
    let mut paths: Vec<Vec<u64>> = v["witness"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| p.as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).collect())
        .collect();
    paths.sort();
    assert_eq!(paths, vec![vec![1, 2, 9, 10, 11, 5], vec![1, 6, 7, 8, 4, 5]]);
    // Round trip through the JSON value model.
    let again: serde_json::Value = serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
    assert_eq!(again, v);
}

#[test]
fn usage_errors_exit_64() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "fixture.txt", FIXTURE);
    for args in [
        vec!["solve", s(&g), "--s", "1", "--t", "1", "--k", "2", "--ell", "5"],
        vec!["solve", s(&g), "--s", "1", "--t", "12", "--k", "2", "--ell", "5"],
        vec!["solve", s(&g), "--s", "1", "--t", "5", "--k", "0", "--ell", "5"],
        vec!["solve", s(&g), "--s", "1", "--t", "5", "--k", "2", "--ell", "5", "--heur", "b-xx"],
        vec!["solve", s(&g), "--s", "1"],
        vec!["gen", "--n", "5", "--p", "1.5"],
        vec!["frobnicate"],
    ] {
        assert_eq!(spp(&args).status.code(), Some(64), "{args:?}");
    }
    assert_eq!(spp(&["--help"]).status.code(), Some(0));
}

#[test]
fn malformed_file_exit_65_with_line() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "bad.txt", "3 2\n1 2\n2 x\n");
    let o = spp(&["solve", s(&g), "--s", "1", "--t", "3", "--k", "1", "--ell", "2"]);
    assert_eq!(o.status.code(), Some(65));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
    let missing = dir.path().join("nope.txt");
    let o = spp(&["solve", s(&missing), "--s", "1", "--t", "3", "--k", "1", "--ell", "2"]);
    assert_eq!(o.status.code(), Some(66));
}

#[test]
fn path_graph_is_no() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "path.txt", "3 2\n1 2\n2 3\n");
    for extra in [&[][..], &["--no-trivial", "--no-preprocess", "--heur", "bare"][..]] {
        let mut args = vec!["solve", s(&g), "--s", "1", "--t", "3", "--k", "2", "--ell", "5"];
        args.extend_from_slice(extra);
        assert_eq!(spp(&args).status.code(), Some(1), "{extra:?}");
    }
    let o = spp(&["oracle", s(&g), "--s", "1", "--t", "3", "--k", "2", "--ell", "5", "--max"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("max packing: 1"));
}

#[test]
fn timeout_exit_2() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "fixture.txt", FIXTURE);
    let o = spp(&["solve", s(&g), "--s", "1", "--t", "5", "--k", "2", "--ell", "5", "--no-trivial", "--timeout-ms", "0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn oracle_agrees_on_fixture() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "fixture.txt", FIXTURE);
    let o = spp(&["oracle", s(&g), "--s", "1", "--t", "5", "--k", "2", "--ell", "5", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["decision"], "yes");
    assert_eq!(spp(&["oracle", s(&g), "--s", "1", "--t", "5", "--k", "2", "--ell", "4"]).status.code(), Some(1));
}

#[test]
fn gen_outputs() {
    let dir = TempDir::new().unwrap();
    let o = spp(&["gen", "--n", "5", "--p", "0", "--seed", "1"]);
    assert_eq!(stdout(&o), "5 0\n");
    let o = spp(&["gen", "--n", "4", "--p", "1", "--seed", "9"]);
    assert!(stdout(&o).starts_with("4 6\n"));
    assert_eq!(stdout(&o).lines().count(), 7);
    let a = dir.path().join("a.txt");
    let b = dir.path().join("b.txt");
    for p in [&a, &b] {
        assert_eq!(spp(&["gen", "--n", "20", "--p", "0.2", "--seed", "42", "-o", s(p)]).status.code(), Some(0));
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}

fn bench_rows(args: &[&str]) -> Vec<csv::StringRecord> {
    let o = spp(args);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let mut r = csv::Reader::from_reader(o.stdout.as_slice());
    let header = r.headers().unwrap().clone();
    assert_eq!(
        header.iter().collect::<Vec<_>>().join(","),
        "graph,s,t,k,ell,config,decision,solved_by,nodes,br1,br2,br3,prunes_len,prunes_bcpl,prunes_bsp,\
         bfi_recorded,bfi_masked,dms_fired,max_depth,n_before,n_after,m_before,m_after,wall_ms"
    );
    r.records().map(|x| x.unwrap()).collect()
}

#[test]
fn bench_counts_and_determinism() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "fixture.txt", FIXTURE);
    let base = ["bench", s(&g), "--pairs", "1", "--k-min", "2", "--k-max", "2", "--ell-min", "5", "--ell-max", "5"];
    let mut args = base.to_vec();
    args.extend(["--configs", "all,bare", "--seed", "3"]);
    assert_eq!(bench_rows(&args).len(), 2);

    let mut args = base.to_vec();
    args[3] = "3";
    args.extend(["--configs", "b-sp,b-sp+b-fi,all", "--seed", "5", "--no-trivial"]);
    let strip = |rows: Vec<csv::StringRecord>| -> Vec<Vec<String>> {
        rows.iter().map(|r| r.iter().take(23).map(str::to_string).collect()).collect()
    };
    let first = strip(bench_rows(&args));
    assert_eq!(first.len(), 9);
    assert_eq!(first, strip(bench_rows(&args)));
}

#[test]
fn bench_ordering_neutral_on_no_instance() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "fixture.txt", FIXTURE);
    // k = 3 is a no-instance; with b-fi off only candidate order differs.
    let rows = bench_rows(&[
        "bench", s(&g), "--pairs", "1", "--k-min", "3", "--k-max", "3", "--ell-min", "6", "--ell-max", "6",
        "--configs", "b-sp,b-sp+c", "--no-trivial",
    ]);
    assert_eq!(rows.len(), 2);
    assert_eq!(&rows[0][6], "no");
    assert_eq!(rows[0][8], rows[1][8]);
}

#[test]
fn bench_skips_unreadable_graphs() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "fixture.txt", FIXTURE);
    let missing = dir.path().join("missing.txt");
    let rows = bench_rows(&[
        "bench", s(&missing), s(&g), "--pairs", "1", "--k-min", "2", "--k-max", "2", "--ell-min", "5", "--ell-max", "5",
        "--configs", "all",
    ]);
    assert_eq!(rows.len(), 2);
    assert_eq!((&rows[0][6], &rows[0][7]), ("skipped", "unreadable"));
}
