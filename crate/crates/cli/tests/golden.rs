use std::process::{Command, Output};

use binoseq::verify::{run_suites, Suite};
use binoseq::{BinomSeqHandle, GridConfig, PiecewiseFn};

fn binoseq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_binoseq"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = binoseq(args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn fn_json_round_trips() {
    let text = stdout(&["fn", "--n", "5", "--json"]);
    let f = PiecewiseFn::from_json(text.trim_end()).unwrap();
    assert_eq!(&f, BinomSeqHandle::new(5).closed_form());
    let values: Vec<String> = f.pieces().iter().map(|p| p.poly().to_string()).collect();
    assert_eq!(values, ["1", "5", "10", "5", "1"]);
}

#[test]
fn fn_pieces_and_csv() {
    assert_eq!(stdout(&["fn", "--n", "1"]), "[-1, 1): 1\n");
    assert_eq!(
        stdout(&["fn", "--n", "0", "--csv", "1/2", "--decimal", "2"]),
        "x,f(x)\n-0.50,1.00\n0.00,1.00\n0.50,0.00\n"
    );
}

#[test]
fn conv_prints_breakpoints_pieces_and_norm() {
    assert_eq!(
        stdout(&["conv", "--m", "0", "--n", "0", "--r", "2"]),
        "breakpoints: -1, 0, 1\n[-1, 0): 1 + x\n[0, 1): 1 - x\nnorm_pow r=2: 2/3\n"
    );
    let json = stdout(&["conv", "--m", "3", "--n", "4", "--json"]);
    let f = PiecewiseFn::from_json(json.trim_end()).unwrap();
    let direct = BinomSeqHandle::new(3)
        .closed_form()
        .convolve(BinomSeqHandle::new(4).closed_form());
    assert_eq!(f, direct);
}

#[test]
fn scalar_commands_match_the_library() {
    assert_eq!(stdout(&["prodint", "--m", "1", "--n", "2"]), "3\n");
    assert_eq!(stdout(&["prodint", "--m", "2", "--n", "2"]), "6\n");
    assert_eq!(stdout(&["eval", "--n", "4", "--x", "1/4"]), "6\n");
    assert_eq!(stdout(&["eval", "--n", "4", "--x", "9/4"]), "1\n");
    assert_eq!(stdout(&["eval", "--n", "4", "--x", "5/2"]), "0\n");
    assert_eq!(stdout(&["norm", "--n", "6", "--p", "2", "--pow"]), "924\n");
    assert_eq!(stdout(&["norm", "--n", "6", "--p", "inf"]), "20\n");
    assert_eq!(
        stdout(&["--decimal", "4", "norm", "--n", "2", "--p", "2"]),
        "2.4495\n"
    );
}

#[test]
fn pascal_is_centred() {
    assert_eq!(
        stdout(&["pascal", "--rows", "4"]),
        "   1\n  1 1\n 1 2 1\n1 3 3 1\n"
    );
}

#[test]
fn verify_writes_reports_identical_to_the_library() {
    let dir = std::env::temp_dir().join(format!("binoseq-golden-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let json = dir.join("report.json");
    let csv = dir.join("report.csv");
    let args = [
        "verify", "--suite", "holder", "--max-m", "3", "--max-n", "4", "--p", "1,2,inf",
    ];
    for path in [&json, &csv] {
        let mut a = args.to_vec();
        a.extend(["--out", path.to_str().unwrap()]);
        stdout(&a);
    }
    let cfg = GridConfig {
        max_m: 3,
        max_n: 4,
        p_list: ["1", "2", "inf"]
            .iter()
            .map(|p| p.parse().unwrap())
            .collect(),
        ..GridConfig::default()
    };
    let rep = run_suites(&cfg, &[Suite::Holder]).unwrap();
    assert_eq!(
        std::fs::read_to_string(&json).unwrap(),
        rep.to_json() + "\n"
    );
    assert_eq!(std::fs::read_to_string(&csv).unwrap(), rep.to_csv());
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn exit_codes() {
    let ok = binoseq(&["verify", "--suite", "young", "--max-n", "4", "--parallel"]);
    assert_eq!(ok.status.code(), Some(0));
    let fault = binoseq(&["verify", "--suite", "all", "--max-n", "2", "--inject-fault"]);
    assert_eq!(fault.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&fault.stdout).contains("FAIL vandermonde"));
    for args in [
        &["pascal"][..],
        &["fn", "--n", "2", "--json", "--csv", "1"],
        &["verify", "--suite", "all", "--precision", "8"],
    ] {
        let out = binoseq(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}
