use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

const BIN: &str = env!("CARGO_BIN_EXE_golay");
const REGRESSION: &str = include_str!("../../core/fixtures/ml_regression.txt");
const G_FIXTURE: &str = include_str!("../../core/fixtures/golay_g.txt");
const SCHEDULE_FIXTURE: &str = include_str!("../../core/fixtures/golay_schedule.txt");

fn run(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(BIN)
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn golay");
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn temp_path(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("golay-cli-{}-{name}", std::process::id()))
}

fn noiseless_line() -> String {
    vec!["4.0"; 24].join(" ") + "\n"
}

#[test]
fn decode_noiseless_block_reports_best_case_counts() {
    let o = run(&["decode", "--algo", "block"], &noiseless_line());
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let fields: Vec<&str> = out.split_whitespace().collect();
    assert_eq!(fields[0], "0".repeat(24));
    assert_eq!(&fields[3..5], &["111", "45"]);
}

#[test]
fn decode_noiseless_ml() {
    let o = run(&["decode", "--algo", "ml"], &noiseless_line());
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with(&"0".repeat(24)));
}

#[test]
fn block_and_ml_agree_on_fixture_lines() {
    let input: String = REGRESSION
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split(';').next().unwrap().trim().to_string() + "\n")
        .collect();
    let expected: Vec<&str> = REGRESSION.lines().filter(|l| !l.starts_with('#')).map(|l| l.split(';').nth(1).unwrap().trim()).collect();
    let file = temp_path("fixture.llr");
    std::fs::write(&file, &input).unwrap();
    let f = file.to_str().unwrap();
    let block = stdout(&run(&["decode", "--algo", "block", "--llr", f], ""));
    let ml = stdout(&run(&["decode", "--algo", "ml", "--llr", f], ""));
    let seq = stdout(&run(&["decode", "--algo", "seq", "--list-size", "16", "--llr", f], ""));
    let words = |s: &str| s.lines().map(|l| l.split_whitespace().next().unwrap().to_string()).collect::<Vec<_>>();
    assert_eq!(words(&block), words(&ml));
    assert_eq!(words(&ml), expected);
    assert_eq!(words(&seq).len(), expected.len());
    std::fs::remove_file(file).ok();
}

#[test]
fn malformed_line_reports_line_number() {
    let input = noiseless_line() + "1.0 2.0 oops\n";
    let o = run(&["decode"], &input);
    assert_ne!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));

    let o = run(&["decode"], "1.0 2.0\n");
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn usage_and_io_exit_codes() {
    assert_eq!(run(&["frobnicate"], "").status.code(), Some(1));
    assert_eq!(run(&["decode", "--algo", "viterbi"], "").status.code(), Some(1));
    assert_eq!(run(&["decode", "--llr", "/nonexistent/llrs.txt"], "").status.code(), Some(3));
    let o = run(&["simulate", "--snr-db", "2", "--frames", "10", "--out", "/nonexistent/dir/out.csv"], "");
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(run(&["simulate", "--snr-db", "3:1:1"], "").status.code(), Some(1));
}

#[test]
fn simulate_is_deterministic() {
    let (a, b) = (temp_path("a.csv"), temp_path("b.csv"));
    for p in [&a, &b] {
        let o = run(
            &["simulate", "--algo", "ml", "--snr-db", "2:1:2", "--frames", "1000", "--seed", "7", "--out", p.to_str().unwrap()],
            "",
        );
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let (ta, tb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ta, tb);
    let text = String::from_utf8(ta).unwrap();
    assert!(text.starts_with("eb_n0_db,frames,frame_errors,fer,avg_sums,avg_cmps,max_ops,ml_agreement\n"));
    assert_eq!(text.lines().count(), 2);
    std::fs::remove_file(a).ok();
    std::fs::remove_file(b).ok();
}

fn fer_column(csv: &str) -> Vec<String> {
    csv.lines().skip(1).map(|l| l.split(',').nth(3).unwrap().to_string()).collect()
}

#[test]
fn block_and_ml_simulations_share_fer() {
    let args = |algo: &'static str| vec!["simulate", "--algo", algo, "--snr-db", "1:1:3", "--frames", "3000", "--errors", "0", "--seed", "5"];
    let block = stdout(&run(&args("block"), ""));
    let ml = stdout(&run(&args("ml"), ""));
    assert_eq!(fer_column(&block), fer_column(&ml));
}

#[test]
fn short_lists_lose_at_low_snr() {
    let args = |l: &'static str| {
        vec!["simulate", "--algo", "seq", "--list-size", l, "--snr-db", "1", "--frames", "4000", "--errors", "200", "--seed", "9"]
    };
    let errors = |csv: String| -> f64 { fer_column(&csv)[0].parse().unwrap() };
    let l1 = errors(stdout(&run(&args("1"), "")));
    let l16 = errors(stdout(&run(&args("16"), "")));
    assert!(l1 > l16, "FER L=1 {l1} vs L=16 {l16}");
}

#[test]
fn verify_passes_and_catches_faults() {
    let o = run(&["verify"], "");
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));

    let mut g = G_FIXTURE.to_string();
    let pos = g.lines().take_while(|l| l.starts_with('#') || l.trim().is_empty()).map(|l| l.len() + 1).sum::<usize>() + 3;
    let flipped = if &g[pos..=pos] == "0" { "1" } else { "0" };
    g.replace_range(pos..=pos, flipped);
    let path = temp_path("bad_g.txt");
    std::fs::write(&path, g).unwrap();
    let o = run(&["verify", "--g", path.to_str().unwrap()], "");
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("FAIL generator row space"));

    let mut entries: Vec<&str> = SCHEDULE_FIXTURE.trim().split(',').collect();
    entries.swap(4, 5);
    let path2 = temp_path("bad_schedule.txt");
    std::fs::write(&path2, entries.join(",")).unwrap();
    let o = run(&["verify", "--schedule", path2.to_str().unwrap()], "");
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("FAIL schedule"));
    std::fs::remove_file(path).ok();
    std::fs::remove_file(path2).ok();
}

#[test]
fn tables_print_published_lines() {
    let out = stdout(&run(&["tables"], ""));
    let section = |name: &str| -> Vec<String> {
        out.lines()
            .skip_while(|l| *l != format!("# {name}"))
            .skip(1)
            .take_while(|l| !l.starts_with("# "))
            .map(str::to_string)
            .collect()
    };
    assert_eq!(section("schedule"), vec!["0,1,2,16,3,17,4,5,18,6,7,8,9,19,20,10,21,11,12,22,13,14,15,23"]);
    assert_eq!(section("V").len(), 12);
    assert_eq!(section("G")[0], "111100000000000011110000");
}
