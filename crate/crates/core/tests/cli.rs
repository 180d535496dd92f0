use std::io::{Read, Write};
use std::net::{TcpListener, TcpStream};
use std::path::{Path, PathBuf};
use std::process::{Child, Command, Stdio};
use std::time::{Duration, Instant};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_rangesets"))
}

fn wine_toml() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data/wine.toml")
}

fn run_ok(cmd: &mut Command) -> String {
    let out = cmd.output().unwrap();
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn compute_then_export_svg() {
    let dir = tempfile::tempdir().unwrap();
    let doc = dir.path().join("wine.json");
    let svg = dir.path().join("alcohol.svg");
    run_ok(bin().args(["compute", "--config"]).arg(wine_toml()).arg("--out").arg(&doc));
    let text = std::fs::read_to_string(&doc).unwrap();
    let parsed: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(parsed["schema_version"], 1);
    assert_eq!(parsed["attributes"].as_array().unwrap().len(), 13);

    run_ok(bin().args(["export-svg", "--doc"]).arg(&doc).args(["--attr", "alcohol", "--out"]).arg(&svg));
    assert!(std::fs::read_to_string(&svg).unwrap().starts_with("<svg"));
}

#[test]
fn suggest_eps_prints_a_number() {
    let out = run_ok(bin().args(["suggest-eps", "--config"]).arg(wine_toml()));
    let eps: f64 = out.trim().parse().unwrap();
    assert!(eps > 0.0 && eps.is_finite());
}

#[test]
fn bench_json_has_one_row_per_size() {
    let out = run_ok(bin().args(["bench", "--n", "200,400", "--repeats", "1", "--json"]));
    let report: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(report["rows"].as_array().unwrap().len(), 2);
    assert_eq!(report["bins"], 5);
}

#[test]
fn failures_exit_nonzero_with_a_message() {
    let out = bin().args(["suggest-eps", "--config", "/nonexistent/x.toml"]).output().unwrap();
    assert!(!out.status.success());
    assert!(!out.stderr.is_empty());

    let dir = tempfile::tempdir().unwrap();
    let doc = dir.path().join("wine.json");
    run_ok(bin().args(["compute", "--config"]).arg(wine_toml()).arg("--out").arg(&doc));
    let out = bin()
        .args(["export-svg", "--doc"])
        .arg(&doc)
        .args(["--attr", "vintage", "--out"])
        .arg(dir.path().join("x.svg"))
        .output()
        .unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("vintage"));
}

struct KillOnDrop(Child);

impl Drop for KillOnDrop {
    fn drop(&mut self) {
        let _ = self.0.kill();
        let _ = self.0.wait();
    }
}

fn http_get(port: u16, path: &str) -> Option<String> {
    let mut s = TcpStream::connect(("127.0.0.1", port)).ok()?;
    write!(s, "GET {path} HTTP/1.1\r\nHost: localhost\r\nConnection: close\r\n\r\n").ok()?;
    let mut buf = String::new();
    s.read_to_string(&mut buf).ok()?;
    Some(buf)
}

#[test]
fn serve_answers_over_tcp() {
    let port = TcpListener::bind("127.0.0.1:0").unwrap().local_addr().unwrap().port();
    let _child = KillOnDrop(
        bin()
            .args(["serve", "--config"])
            .arg(wine_toml())
            .args(["--port", &port.to_string()])
            .stdout(Stdio::null())
            .stderr(Stdio::null())
            .spawn()
            .unwrap(),
    );
    let deadline = Instant::now() + Duration::from_secs(60);
    let response = loop {
        if let Some(r) = http_get(port, "/api/topology") {
            break r;
        }
        assert!(Instant::now() < deadline, "server did not come up");
        std::thread::sleep(Duration::from_millis(100));
    };
    assert!(response.starts_with("HTTP/1.1 200"), "{response}");
    assert!(response.contains("\"schema_version\":1"));
}
