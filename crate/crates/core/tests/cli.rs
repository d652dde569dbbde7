use std::io::Write;
use std::process::{Command, Stdio};

use lzdawg::cli::{run, EXIT_IO, EXIT_USAGE};
use rand::{rngs::StdRng, Rng, SeedableRng};

const FIG1: &[u8] = b"abaabababaaaaabbabab";

fn exe(args: &[&str], input: &[u8]) -> (i32, Vec<u8>, String) {
    let mut child = Command::new(env!("CARGO_BIN_EXE_lzdawg"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input).unwrap();
    let out = child.wait_with_output().unwrap();
    (
        out.status.code().unwrap(),
        out.stdout,
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

fn in_process(args: &[&str], input: &[u8]) -> (i32, Vec<u8>, String) {
    let mut argv = vec!["lzdawg"];
    argv.extend_from_slice(args);
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(argv, &mut &input[..], &mut out, &mut err);
    (code, out, String::from_utf8_lossy(&err).into_owned())
}

#[test]
fn figure_one_text() {
    for mode in ["packed", "rle", "naive"] {
        let (code, out, _) = exe(&["factorize", "--mode", mode, "--output", "text"], FIG1);
        assert_eq!(code, 0);
        let s = String::from_utf8(out).unwrap();
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines.len(), 8, "{mode}");
        assert_eq!(lines[7], "C 5 5", "{mode}");
    }
}

#[test]
fn empty_input() {
    let (code, out, _) = exe(&["factorize"], b"");
    assert_eq!((code, out.len()), (0, 0));
    let (code, out, _) = exe(&["stats", "--json"], b"");
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_slice(&out).unwrap();
    assert_eq!((v["n"].as_u64(), v["z"].as_u64()), (Some(0), Some(0)));
}

#[test]
fn stats_examples() {
    let (_, out, _) = exe(&["stats", "--json"], FIG1);
    let v: serde_json::Value = serde_json::from_slice(&out).unwrap();
    assert_eq!(v["z"], 8);
    assert_eq!(v["n"], 20);
    for mode in ["packed", "rle", "naive"] {
        let (_, out, _) = in_process(&["stats", "--json", "--mode", mode], &[b'a'; 1000]);
        let v: serde_json::Value = serde_json::from_slice(&out).unwrap();
        assert_eq!((v["m"].as_u64(), v["z"].as_u64()), (Some(1), Some(2)), "{mode}");
    }
    let (code, out, _) = in_process(&["stats"], FIG1);
    assert_eq!(code, 0);
    let s = String::from_utf8(out).unwrap();
    assert!(s.contains("z: 8") && s.contains("N: 20") && s.contains("wall_ms:"));
}

#[test]
fn formats_round_trip_through_decode() {
    for fmt in ["text", "jsonl", "binary"] {
        let (code, enc, _) = exe(&["factorize", "--output", fmt], FIG1);
        assert_eq!(code, 0);
        let (code, dec, _) = exe(&["decode"], &enc);
        assert_eq!(code, 0);
        assert_eq!(dec, FIG1, "{fmt}");
    }
}

#[test]
fn file_argument() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(FIG1).unwrap();
    let path = f.path().to_str().unwrap();
    let (code, out, _) = exe(&["factorize", "--block-chars", "3", path], b"");
    assert_eq!(code, 0);
    assert_eq!(String::from_utf8(out).unwrap().lines().count(), 8);
}

#[test]
fn rle_verify_on_random_strings() {
    let mut rng = StdRng::seed_from_u64(5);
    for _ in 0..1000 {
        let n = rng.gen_range(0..200);
        let sigma = rng.gen_range(1..=4u8);
        let s: Vec<u8> = (0..n).map(|_| b'a' + rng.gen_range(0..sigma)).collect();
        let (code, _, err) = in_process(&["factorize", "--mode", "rle", "--verify"], &s);
        assert_eq!(code, 0, "{err}");
    }
    let (code, _, _) = exe(&["factorize", "--mode", "rle", "--verify"], FIG1);
    assert_eq!(code, 0);
}

#[test]
fn exit_codes() {
    assert_eq!(exe(&["factorize", "--mode", "fast"], b"").0, EXIT_USAGE);
    assert_eq!(exe(&["factorize", "--block-chars", "0"], b"").0, EXIT_USAGE);
    assert_eq!(exe(&["factorize", "--alphabet-bits", "9"], b"").0, EXIT_USAGE);
    assert_eq!(exe(&["frobnicate"], b"").0, EXIT_USAGE);
    assert_eq!(exe(&["--help"], b"").0, 0);
    assert_eq!(exe(&["factorize", "/no/such/file"], b"").0, EXIT_IO);
    // Three distinct bytes do not fit a 1-bit alphabet.
    assert_eq!(exe(&["factorize", "--alphabet-bits", "1"], b"abc").0, EXIT_IO);
    assert_eq!(exe(&["factorize", "--alphabet-bits", "1"], b"abab").0, 0);
}

#[test]
fn decode_errors_name_the_line() {
    let (code, _, err) = exe(&["decode"], b"L 97\nC 9 1\n");
    assert_eq!(code, EXIT_IO);
    assert!(err.contains("record 2"), "{err}");
    let (code, _, err) = exe(&["decode"], b"L 97\nL x\n");
    assert_eq!(code, EXIT_IO);
    assert!(err.contains("line 2"), "{err}");
    let (code, out, _) = exe(&["decode"], b"L 65\n");
    assert_eq!((code, out), (0, b"A".to_vec()));
}
