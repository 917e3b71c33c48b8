use std::io::{BufRead, BufReader, Read, Write};
use std::net::TcpStream;
use std::process::{Command, Stdio};

#[test]
fn serve_answers_health_checks() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_ndviz"))
        .args(["serve", "--port", "0"])
        .env("RUST_LOG", "info")
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    let mut lines = BufReader::new(child.stderr.take().unwrap()).lines();
    let addr = loop {
        let line = lines.next().expect("server exited").unwrap();
        if let Some(i) = line.find("http://") {
            break line[i + 7..].trim().to_string();
        }
    };
    let mut stream = TcpStream::connect(&addr).unwrap();
    write!(stream, "GET /healthz HTTP/1.1\r\nHost: {addr}\r\nConnection: close\r\n\r\n").unwrap();
    let mut response = String::new();
    stream.read_to_string(&mut response).unwrap();
    child.kill().unwrap();
    let _ = child.wait();
    assert!(response.starts_with("HTTP/1.1 200"), "{response}");
    assert!(response.ends_with(r#"{"status":"ok"}"#), "{response}");
}

#[test]
fn serve_rejects_missing_static_dir() {
    let o = Command::new(env!("CARGO_BIN_EXE_ndviz"))
        .args(["serve", "--static", "/nonexistent/ui"])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(66));
}
