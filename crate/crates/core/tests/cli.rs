use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_polytverb"));
    c.env_remove("POLYTVERB_SEED");
    c
}

fn run(dir: &Path, args: &[&str]) -> Output {
    bin().current_dir(dir).args(args).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn generate(dir: &Path, name: &str, dim: usize, count: usize, seed: u64) -> PathBuf {
    let out = run(
        dir,
        &["generate", "--dim", &dim.to_string(), "--count", &count.to_string(), "--seed", &seed.to_string(), "--out", name],
    );
    assert_eq!(code(&out), 0);
    dir.join(name)
}

#[test]
fn generate_solve_verify() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    generate(d, "f.json", 2, 5, 1);
    let solve = run(d, &["solve", "--in", "f.json", "--kind", "polygon", "--r", "3", "--out", "res.json"]);
    assert_eq!(code(&solve), 0, "{}", String::from_utf8_lossy(&solve.stderr));
    let verify = run(d, &["verify", "--in", "f.json", "--result", "res.json"]);
    assert_eq!(code(&verify), 0);
    let table = String::from_utf8(verify.stdout).unwrap();
    assert!(table.contains("verified=true"));
    assert!(table.lines().any(|l| l.starts_with("kill")));
}

#[test]
fn oracle_rejects_four_points() {
    let tmp = TempDir::new().unwrap();
    generate(tmp.path(), "f.json", 2, 4, 1);
    let out = run(tmp.path(), &["oracle", "--in", "f.json", "--kind", "polygon", "--r", "3"]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8(out.stdout).unwrap().contains("found=false"));
}

#[test]
fn oracle_counts_every_labeling_without_dedup() {
    let tmp = TempDir::new().unwrap();
    generate(tmp.path(), "f.json", 2, 5, 2);
    let out = run(tmp.path(), &["oracle", "--in", "f.json", "--kind", "polygon", "--r", "3", "--no-dedup"]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8(out.stdout).unwrap().contains("found=true"));
}

#[test]
fn render_draws_three_parts_and_one_triangle() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    generate(d, "f.json", 2, 5, 1);
    assert_eq!(code(&run(d, &["solve", "--in", "f.json", "--kind", "polygon", "--r", "3", "--out", "res.json"])), 0);
    assert_eq!(code(&run(d, &["render", "--in", "f.json", "--result", "res.json", "--out", "fig.svg"])), 0);
    let text = fs::read_to_string(d.join("fig.svg")).unwrap();
    let doc = roxmltree::Document::parse(&text).unwrap();
    let class_of = |n: &roxmltree::Node| n.attribute("class").unwrap_or("").to_string();
    let parts = doc.descendants().filter(|n| n.has_tag_name("g") && class_of(n) == "part").count();
    assert_eq!(parts, 3);
    let witness = doc
        .descendants()
        .find(|n| n.has_tag_name("g") && class_of(n) == "witness")
        .unwrap();
    let edges: Vec<[(String, String); 2]> = witness
        .children()
        .filter(|n| n.has_tag_name("line"))
        .map(|l| {
            let a = |k: &str| l.attribute(k).unwrap().to_string();
            [(a("x1"), a("y1")), (a("x2"), a("y2"))]
        })
        .collect();
    assert_eq!(edges.len(), 3);
    // three edges over three distinct endpoints, each used twice: a closed triangle
    let mut ends: Vec<(String, String)> = edges.iter().flatten().cloned().collect();
    ends.sort();
    ends.dedup();
    assert_eq!(ends.len(), 3);
    let points = doc.descendants().filter(|n| n.has_tag_name("circle")).count();
    assert_eq!(points, 5);
}

#[test]
fn exit_codes() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    generate(d, "four.json", 2, 4, 1);
    generate(d, "space.json", 3, 7, 1);
    generate(d, "five.json", 2, 5, 1);
    let polygon = ["--kind", "polygon", "--r", "3"];

    let wrong = run(d, &[&["solve", "--in", "four.json"][..], &polygon].concat());
    assert_eq!(code(&wrong), 4);

    fs::write(d.join("bad.json"), "{\"dimension\": 2, \"points\": [[0, 1], [2]]}").unwrap();
    assert_eq!(code(&run(d, &[&["solve", "--in", "bad.json"][..], &polygon].concat())), 64);
    fs::write(d.join("cut.json"), "{\"dimension\": 2").unwrap();
    assert_eq!(code(&run(d, &[&["solve", "--in", "cut.json"][..], &polygon].concat())), 64);
    assert_eq!(code(&run(d, &["solve", "--in", "five.json", "--kind", "hexagon"])), 64);

    // a polygon in R^3 needs a plane
    assert_eq!(code(&run(d, &[&["solve", "--in", "space.json"][..], &polygon].concat())), 65);
    // multiprism factors below 3
    assert_eq!(
        code(&run(d, &["solve", "--in", "five.json", "--kind", "multiprism", "--factors", "2"])),
        65
    );

    let coincident = serde_json::json!({ "dimension": 2, "points": vec![vec![0.25, -0.5]; 5] });
    fs::write(d.join("same.json"), coincident.to_string()).unwrap();
    assert_eq!(code(&run(d, &[&["solve", "--in", "same.json"][..], &polygon].concat())), 2);

    assert_eq!(
        code(&run(d, &[&["solve", "--in", "five.json", "--max-iter", "1", "--seed", "4"][..], &polygon].concat())),
        3
    );
}

#[test]
fn tampered_result_fails_verify() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    generate(d, "f.json", 2, 5, 3);
    assert_eq!(code(&run(d, &["solve", "--in", "f.json", "--kind", "polygon", "--r", "3", "--out", "res.json"])), 0);
    let mut res: serde_json::Value = serde_json::from_str(&fs::read_to_string(d.join("res.json")).unwrap()).unwrap();
    let w = res["weights"]["0"].as_array_mut().unwrap();
    for t in w.iter_mut() {
        *t = serde_json::json!(t.as_f64().unwrap() * 1.01);
    }
    fs::write(d.join("bad.json"), res.to_string()).unwrap();
    let out = run(d, &["verify", "--in", "f.json", "--result", "bad.json"]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8(out.stdout).unwrap().contains("verified=false"));
}

#[test]
fn results_are_byte_identical_per_seed() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    generate(d, "f.json", 3, 18, 9);
    let args = |out: &'static str| {
        vec!["solve", "--in", "f.json", "--kind", "prism", "--factors", "3", "--plane", "1,2", "--seed", "11", "--out", out]
    };
    assert_eq!(code(&run(d, &args("a.json"))), 0);
    assert_eq!(code(&run(d, &args("b.json"))), 0);
    assert_eq!(fs::read(d.join("a.json")).unwrap(), fs::read(d.join("b.json")).unwrap());
}

#[test]
fn seed_falls_back_to_the_environment() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    let a = bin()
        .current_dir(d)
        .env("POLYTVERB_SEED", "17")
        .args(["generate", "--dim", "2", "--count", "5"])
        .output()
        .unwrap();
    let b = run(d, &["generate", "--dim", "2", "--count", "5", "--seed", "17"]);
    assert_eq!(a.stdout, b.stdout);
    fs::write(d.join("f.json"), &a.stdout).unwrap();
    let solved = bin()
        .current_dir(d)
        .env("POLYTVERB_SEED", "6")
        .args(["solve", "--in", "f.json", "--kind", "polygon", "--r", "3"])
        .output()
        .unwrap();
    let res: serde_json::Value = serde_json::from_slice(&solved.stdout).unwrap();
    assert!(res["seed"].as_u64().unwrap() >= 6);
}

#[test]
fn tightness_prints_a_rate() {
    let tmp = TempDir::new().unwrap();
    let out = run(
        tmp.path(),
        &["tightness", "--kind", "polygon", "--r", "3", "--trials", "20", "--seed", "1", "--jobs", "2"],
    );
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let rate: f64 = text
        .split_whitespace()
        .find_map(|w| w.strip_prefix("rate="))
        .unwrap()
        .parse()
        .unwrap();
    assert_eq!(rate, 1.0);
}

#[test]
fn frame_and_colored_kinds_from_the_command_line() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    generate(d, "f.json", 3, 7, 4);
    let s = 0.5f64.sqrt();
    let frame = serde_json::json!({ "u": [s, s, 0.0], "w": [0.0, 0.0, 1.0] });
    fs::write(d.join("fx.json"), frame.to_string()).unwrap();
    let out = run(
        d,
        &["solve", "--in", "f.json", "--kind", "polygon", "--r", "3", "--frame", "fx.json", "--out", "res.json"],
    );
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let verify = run(d, &["verify", "--in", "f.json", "--result", "res.json"]);
    assert_eq!(code(&verify), 0);
    assert!(String::from_utf8(verify.stdout).unwrap().contains("plane"));

    let gen = run(d, &["generate", "--dim", "2", "--count", "9", "--seed", "2", "--color-classes", "3", "--out", "c.json"]);
    assert_eq!(code(&gen), 0);
    let out = run(d, &["solve", "--in", "c.json", "--kind", "colored", "--r", "3", "--out", "cres.json"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let verify = run(d, &["verify", "--in", "c.json", "--result", "cres.json"]);
    assert_eq!(code(&verify), 0);
    assert!(String::from_utf8(verify.stdout).unwrap().contains("rainbow"));
}
