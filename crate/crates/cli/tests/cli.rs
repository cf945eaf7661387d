//! The `corpusforge` binary end to end: subcommands and exit codes.

use std::fs;
use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

use corpusforge_testkit::{fixture, mixed_manifest, tokcorpus, HELDOUT_FILE};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_corpusforge"));
    c.env_remove("CORPUSFORGE_RESOURCES");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn run_with_stdin(args: &[&str], stdin: &str) -> Output {
    let mut child = bin().args(args).stdin(Stdio::piped()).stdout(Stdio::piped()).stderr(Stdio::piped()).spawn().unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn clean_writes_outputs_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let o = run(&["clean", "--manifest", s(&mixed_manifest()), "--out", s(&out), "--workers", "4"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8_lossy(&o.stderr).contains("documents: 1000 in, 720 out"));
    let stats: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("stats.json")).unwrap()).unwrap();
    assert_eq!(stats["documents_out"], 720);
    assert!(out.join("rejections.json").exists());

    let o = run(&["stats", "--manifest", s(&out.join("manifest.txt"))]);
    assert_eq!(code(&o), 0);
    let counted: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(counted["documents"], 720);
    assert_eq!(counted["words"], stats["words_out"]);

    let subset = dir.path().join("valid.jsonl");
    let o = run(&["select-valid", "--manifest", s(&out.join("manifest.txt")), "--size", "25", "--seed", "3", "--out", s(&subset)]);
    assert_eq!(code(&o), 0);
    assert_eq!(fs::read_to_string(&subset).unwrap().lines().count(), 25);
    let o = run(&["select-valid", "--manifest", s(&out.join("manifest.txt")), "--size", "5000"]);
    assert_eq!(code(&o), 2, "corpus too small is a data error");
}

#[test]
fn exit_codes_separate_config_and_data_errors() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let missing = run(&["clean", "--manifest", "/nonexistent/manifest.txt", "--out", s(&out)]);
    assert_eq!(code(&missing), 1);
    let zero = run(&["clean", "--manifest", s(&mixed_manifest()), "--out", s(&out), "--workers", "0"]);
    assert_eq!(code(&zero), 1);
    let usage = run(&["clean", "--bogus-flag"]);
    assert_eq!(code(&usage), 1);
    assert_eq!(code(&run(&["--help"])), 0);

    let shard = dir.path().join("bad.jsonl");
    fs::write(&shard, "{\"text\": \"ok\"}\nnot json\n").unwrap();
    let manifest = dir.path().join("m.txt");
    fs::write(&manifest, "bad.jsonl\n").unwrap();
    let abort = run(&["clean", "--manifest", s(&manifest), "--out", s(&out), "--on-malformed", "abort"]);
    assert_eq!(code(&abort), 2);
    assert!(out.join("_PARTIAL").exists());
    let skip = run(&["clean", "--manifest", s(&manifest), "--out", s(&out)]);
    assert_eq!(code(&skip), 0);
    assert!(!out.join("_PARTIAL").exists());

    let empty = dir.path().join("empty.txt");
    fs::write(&empty, "").unwrap();
    assert_eq!(code(&run(&["clean", "--manifest", s(&empty), "--out", s(&dir.path().join("o2"))])), 0);
}

#[test]
fn tokenizer_round_trip_through_the_cli() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("corpus.txt");
    let lines = tokcorpus::lines(120_000, 8);
    fs::write(&corpus, lines.join("\n") + "\n").unwrap();
    let vocab = dir.path().join("vocab.jsonl");
    let o = run(&["tok", "train", "--input", s(&corpus), "--out", s(&vocab), "--vocab-size", "600"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(fs::read_to_string(&vocab).unwrap().lines().count(), 600);

    let sample = lines[..50].join("\n") + "\n";
    let enc = run_with_stdin(&["tok", "encode", "--vocab", s(&vocab)], &sample);
    assert_eq!(code(&enc), 0);
    let ids = String::from_utf8(enc.stdout).unwrap();
    assert_eq!(ids.lines().count(), 50);
    let dec = run_with_stdin(&["tok", "decode", "--vocab", s(&vocab)], &ids);
    assert_eq!(code(&dec), 0);
    assert_eq!(String::from_utf8(dec.stdout).unwrap(), sample);

    let corrupted = run_with_stdin(&["corrupt", "--seed", "42"], &ids);
    assert_eq!(code(&corrupted), 0, "{}", String::from_utf8_lossy(&corrupted.stderr));
    let first: serde_json::Value = serde_json::from_str(String::from_utf8(corrupted.stdout).unwrap().lines().next().unwrap()).unwrap();
    assert!(first["input_ids"].is_array() && first["target_ids"].is_array());

    assert_eq!(code(&run(&["tok", "train", "--input", s(&corpus), "--out", s(&vocab), "--vocab-size", "100"])), 1);
    assert_eq!(code(&run_with_stdin(&["tok", "decode", "--vocab", s(&vocab)], "{\"ids\": [999999]}\n")), 2);
    assert_eq!(code(&run_with_stdin(&["corrupt"], "{\"ids\": [5, 1]}\n")), 2, "sentinel ids in the input");
    assert_eq!(code(&run_with_stdin(&["corrupt", "--rate", "0"], "{\"ids\": [500]}\n")), 1);
}

#[test]
fn langid_train_and_detect() {
    let dir = tempfile::tempdir().unwrap();
    let profiles = dir.path().join("profiles");
    fs::create_dir(&profiles).unwrap();
    let heldout = fs::read_to_string(fixture(HELDOUT_FILE)).unwrap();
    for lang in ["it", "en", "de"] {
        let text: String = heldout
            .lines()
            .map(|l| serde_json::from_str::<serde_json::Value>(l).unwrap())
            .filter(|v| v["lang"] == lang)
            .map(|v| v["text"].as_str().unwrap().to_string() + "\n")
            .collect();
        let input = dir.path().join(format!("{lang}.txt"));
        fs::write(&input, text).unwrap();
        let o = run(&["langid", "train", "--lang", lang, "--input", s(&input), "--out", s(&profiles.join(format!("{lang}.json")))]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    }
    let text = "Il consiglio comunale ha approvato il nuovo piano per il traffico del centro storico.\n\
                The council approved the new traffic plan for the old town centre yesterday.\n\
                ok\n";
    let o = run_with_stdin(&["langid", "detect", "--profiles", s(&profiles), "--all"], text);
    assert_eq!(code(&o), 0);
    let got: Vec<serde_json::Value> = String::from_utf8(o.stdout).unwrap().lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(got[0]["lang"], "it");
    assert_eq!(got[1]["lang"], "en");
    assert!(got[2]["lang"].is_null());
    let total: f64 = got[0]["posteriors"].as_object().unwrap().values().map(|v| v.as_f64().unwrap()).sum();
    assert!((total - 1.0).abs() < 1e-9);

    let builtin = run_with_stdin(&["langid", "detect"], "Der Bürgermeister hat gestern den neuen Plan für die Stadt vorgestellt.\n");
    assert_eq!(code(&builtin), 0);
    assert!(String::from_utf8_lossy(&builtin.stdout).contains("\"de\""));
    assert_eq!(code(&run(&["langid", "detect", "--profiles", "/nonexistent"])), 1);
}
