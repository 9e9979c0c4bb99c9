mod common;

use std::path::PathBuf;

use coarsekit::format;
use coarsekit::{Family, IntFamily, Status};
use coarsekit_cli::Report;
use common::{coarsekit, fixture, CORPUS};

fn fact<'r>(report: &'r Report, key: &str) -> &'r str {
    report
        .facts
        .iter()
        .find(|(k, _)| k == key)
        .map(|(_, v)| v.as_str())
        .unwrap_or_else(|| panic!("no fact `{key}` in {:?}", report.facts))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("coarsekit-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    dir
}

fn path_str(dir: &std::path::Path, name: &str) -> String {
    dir.join(name).display().to_string()
}

#[test]
fn triangle_violation_is_reported_with_its_witness() {
    let r = coarsekit(&["validate", "@triangle.txt"]);
    assert_eq!(r.exit_code(), 1);
    let failed: Vec<_> = r
        .verdict
        .checks
        .iter()
        .filter(|c| c.status == Status::Fail)
        .collect();
    assert_eq!(failed.len(), 1);
    assert!(failed[0].path.ends_with("triangle"));
    assert!(failed[0].detail.contains("(a,b,c)"), "{}", failed[0].detail);
}

#[test]
fn phi_of_exp_matches_worked_example() {
    let r_arg = (2.0 * std::f64::consts::E).to_string();
    let r = coarsekit(&["phi", "--rho", "exp", "--t", "0", "--r", &r_arg]);
    assert_eq!(r.exit_code(), 0);
    let value: f64 = fact(&r, "value").parse().unwrap();
    assert!((value - 4.0).abs() <= 1e-7, "{value}");
}

#[test]
fn components_split_the_gapped_line() {
    let r = coarsekit(&["components", "@gaps.txt", "--r", "2"]);
    assert_eq!(r.exit_code(), 0);
    let rows: Vec<&str> = r.tables[0].rows.iter().map(|row| row[2].as_str()).collect();
    assert_eq!(rows, ["0 1", "5 6"]);
}

#[test]
fn parse_errors_exit_two_with_position() {
    let r = coarsekit(&["validate", "@ragged.txt"]);
    assert_eq!(r.exit_code(), 2);
    let e = r.error.as_deref().unwrap();
    assert!(e.contains("line 6, column 6"), "{e}");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(coarsekit(&["frobnicate"]).exit_code(), 2);
    assert_eq!(coarsekit(&["validate", "@no-such-file.txt"]).exit_code(), 2);
    assert_eq!(
        coarsekit(&["components", "@gaps.txt", "--r", "x"]).exit_code(),
        2
    );
    assert_eq!(
        coarsekit(&["product", "@gaps.txt", "--p", "0.5"]).exit_code(),
        2
    );
    let r = coarsekit(&[
        "decompose",
        "@paths.txt",
        "--r",
        "1",
        "--n",
        "1",
        "--bound",
        "2",
        "--exact",
        "--greedy",
    ]);
    assert_eq!(r.exit_code(), 2);
}

#[test]
fn help_and_version_exit_zero() {
    for args in [&["--help"][..], &["validate", "--help"], &["--version"]] {
        let r = coarsekit(args);
        assert_eq!(r.exit_code(), 0);
        assert!(r.message.is_some());
    }
}

#[test]
fn tolerance_flag_overrides_default() {
    assert_eq!(coarsekit(&["validate", "@nearly.txt"]).exit_code(), 0);
    assert_eq!(
        coarsekit(&["validate", "@nearly.txt", "--tolerance", "0"]).exit_code(),
        1
    );
    assert_eq!(
        coarsekit(&["validate", "@nearly.txt", "--tolerance", "1e-12"]).exit_code(),
        1
    );
}

#[test]
fn scalar_is_detected_from_the_input() {
    for (file, expected) in [
        ("@paths.txt", "int"),
        ("@halves-f64.txt", "f64"),
        ("@thirds.txt", "rational"),
    ] {
        let r = coarsekit(&["validate", file]);
        assert_eq!(fact(&r, "scalar"), expected, "{file}");
    }
    let r = coarsekit(&["components", "@paths.txt", "--r", "1.5"]);
    assert_eq!(fact(&r, "scalar"), "f64");
    let r = coarsekit(&["components", "@paths.txt", "--r", "3/2"]);
    assert_eq!(fact(&r, "scalar"), "rational");
}

#[test]
fn explicit_scalar_is_enforced() {
    assert_eq!(
        coarsekit(&["validate", "@halves-f64.txt", "--scalar", "int"]).exit_code(),
        2
    );
    let r = coarsekit(&["validate", "@paths.txt", "--scalar", "rational"]);
    assert_eq!(r.exit_code(), 0);
    assert_eq!(fact(&r, "scalar"), "rational");
    let r = coarsekit(&[
        "phi", "--rho", "exp", "--t", "1", "--r", "2", "--scalar", "int",
    ]);
    assert_eq!(r.exit_code(), 2);
}

#[test]
fn verdicts_drive_exit_codes() {
    let expect = [
        (&["cover-check", "@paths.txt", "@paths.asdim"][..], 0),
        (&["cover-check", "@paths.txt", "@paths.overclaim.asdim"], 1),
        (&["an-check", "@paths.txt", "@paths.an"], 0),
        (&["check-cert", "@paths.txt", "@paths.decomposition"], 0),
        (
            &[
                "check-fibering",
                "@grid4.txt",
                "@line4.txt",
                "@grid4.fibering",
            ],
            0,
        ),
        (
            &[
                "decompose",
                "@paths.txt",
                "--r",
                "2",
                "--n",
                "0",
                "--bound",
                "3",
            ],
            1,
        ),
        (
            &["ray-tree", "@star.txt", "@star.pieces", "@star.shells"],
            0,
        ),
        (
            &["ray-tree", "@star.txt", "@star.bad.pieces", "@star.shells"],
            1,
        ),
    ];
    for (args, code) in expect {
        assert_eq!(coarsekit(args).exit_code(), code, "{args:?}");
    }
}

#[test]
fn overclaimed_lebesgue_number_names_the_point() {
    let r = coarsekit(&["cover-check", "@paths.txt", "@paths.overclaim.asdim"]);
    let fail = r
        .verdict
        .checks
        .iter()
        .find(|c| c.status == Status::Fail)
        .unwrap();
    assert_eq!(fail.path, "entry[0]/member[p8]/lebesgue");
    assert!(fail.detail.contains("at point"), "{}", fail.detail);
}

#[test]
fn machine_reports_are_key_value_lines() {
    for args in CORPUS {
        let mut argv = args.to_vec();
        argv.extend(["--format", "machine"]);
        let r = coarsekit(&argv);
        let text = r.render();
        assert!(text.starts_with("command="), "{args:?}");
        assert!(
            text.ends_with(&format!("exit={}\n", r.exit_code())),
            "{args:?}"
        );
        assert!(text.lines().all(|l| l.contains('=')), "{args:?}");
    }
}

#[test]
fn jobs_flag_is_not_echoed() {
    let a = coarsekit(&["validate", "@paths.txt", "--jobs", "1"]);
    let b = coarsekit(&["validate", "@paths.txt", "--jobs=3"]);
    assert_eq!(a.command, b.command);
    assert_eq!(a.render(), b.render());
}

#[test]
fn seed_fixes_the_suite() {
    let a = coarsekit(&[
        "phi-suite",
        "--rho",
        "exp",
        "--samples",
        "40",
        "--seed",
        "9",
    ]);
    let b = coarsekit(&[
        "phi-suite",
        "--rho",
        "exp",
        "--samples",
        "40",
        "--seed",
        "9",
    ]);
    assert_eq!(a.exit_code(), 0);
    assert_eq!(a.render(), b.render());
}

#[test]
fn quotient_documents_reparse_and_check() {
    let dir = scratch("quotient");
    let out = dir.display().to_string();
    let r = coarsekit(&[
        "quotient-cover",
        "@paths.txt",
        "@p8.reflection",
        "@paths.asdim",
        "--out",
        &out,
    ]);
    assert_eq!(r.exit_code(), 0);
    let family_text = &r.documents[0].text;
    let family: IntFamily = format::parse_family(family_text).unwrap();
    assert_eq!(&format::write_family(&family), family_text);
    let cert_text = &r.documents[1].text;
    let cert = format::parse_asdim_certificate(cert_text, &family).unwrap();
    assert_eq!(&format::write_asdim_certificate(&cert, &family), cert_text);
    let check = coarsekit(&[
        "cover-check",
        &path_str(&dir, "quotient.family.txt"),
        &path_str(&dir, "quotient.asdim.txt"),
    ]);
    assert_eq!(check.exit_code(), 0, "{}", check.render());
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn product_documents_reparse_and_check() {
    let dir = scratch("product");
    let out = dir.display().to_string();
    let r = coarsekit(&[
        "product",
        "@paths.txt",
        "--covers",
        "@paths.asdim",
        "--r",
        "1",
        "--out",
        &out,
    ]);
    assert_eq!(r.exit_code(), 0, "{}", r.render());
    assert_eq!(fact(&r, "points"), "96");
    let check = coarsekit(&[
        "cover-check",
        &path_str(&dir, "product.family.txt"),
        &path_str(&dir, "product.asdim.txt"),
    ]);
    assert_eq!(check.exit_code(), 0, "{}", check.render());
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn product_covers_need_the_l1_metric() {
    let r = coarsekit(&[
        "product",
        "@paths.txt",
        "--p",
        "inf",
        "--covers",
        "@paths.asdim",
    ]);
    assert_eq!(r.exit_code(), 2);
}

#[test]
fn euclidean_product_is_a_metric() {
    let r = coarsekit(&["product", "@halves-f64.txt", "--p", "2"]);
    assert_eq!(r.exit_code(), 0);
    let family: Family = format::parse_family(&r.documents[0].text).unwrap();
    assert!(family.members()[0].validate().is_valid());
}

#[test]
fn decomposition_output_is_a_checkable_certificate() {
    let dir = scratch("decompose");
    let out = dir.display().to_string();
    let r = coarsekit(&[
        "decompose",
        "@paths.txt",
        "--r",
        "1",
        "--n",
        "1",
        "--bound",
        "2",
        "--out",
        &out,
    ]);
    assert_eq!(r.exit_code(), 0);
    let check = coarsekit(&[
        "check-cert",
        "@paths.txt",
        &path_str(&dir, "decomposition.txt"),
    ]);
    assert_eq!(check.exit_code(), 0, "{}", check.render());
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn ultrametric_documents_are_consistent() {
    let dir = scratch("ultrametric");
    let out = dir.display().to_string();
    let r = coarsekit(&["ultrametric", "@gaps.txt", "--r", "2", "--out", &out]);
    assert_eq!(r.exit_code(), 0, "{}", r.render());
    let family = path_str(&dir, "ultrametric.family.txt");
    assert_eq!(coarsekit(&["validate", &family]).exit_code(), 0);
    let cert = path_str(&dir, "ultrametric.decomposition.txt");
    assert_eq!(coarsekit(&["check-cert", &family, &cert]).exit_code(), 0);
    let map = path_str(&dir, "ultrametric.map.txt");
    let analysis = coarsekit(&["map-analyze", "@gaps.txt", &family, &map]);
    assert_eq!(analysis.exit_code(), 0, "{}", analysis.render());
    let balls: Vec<&str> = r.tables[0].rows.iter().map(|row| row[1].as_str()).collect();
    assert_eq!(balls, ["0 1", "5 6"]);
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn ray_tree_documents_are_consistent() {
    let dir = scratch("ray-tree");
    let out = dir.display().to_string();
    let r = coarsekit(&[
        "ray-tree",
        "@star.txt",
        "@star.pieces",
        "@star.shells",
        "--out",
        &out,
    ]);
    assert_eq!(r.exit_code(), 0);
    let tree = path_str(&dir, "ray-tree.family.txt");
    assert_eq!(coarsekit(&["validate", &tree]).exit_code(), 0);
    let map = path_str(&dir, "ray-tree.map.txt");
    let analysis = coarsekit(&["map-analyze", "@star.txt", &tree, &map]);
    assert_eq!(analysis.exit_code(), 0, "{}", analysis.render());
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn map_analysis_reports_closeness() {
    let r = coarsekit(&[
        "map-analyze",
        "@short.txt",
        "@halves.txt",
        "@floor.map",
        "--compare",
        "@ceil.map",
    ]);
    assert_eq!(r.exit_code(), 0);
    assert_eq!(fact(&r, "closeness-constant"), "1");
    assert_eq!(fact(&r, "coarsely-onto-constant"), "0");
    let control = &r.tables[0];
    assert_eq!(control.name, "control");
    let values: Vec<i64> = control
        .rows
        .iter()
        .map(|row| row[1].parse().unwrap())
        .collect();
    assert!(values.windows(2).all(|w| w[0] <= w[1]));
}

#[test]
fn deleting_an_inner_certificate_fails_the_fibering() {
    let text = std::fs::read_to_string(fixture("grid4.fibering")).unwrap();
    let start = text.find("--- inner 2").unwrap();
    let end = start + text[start..].find("--- inner 4").unwrap();
    let dir = scratch("fibering");
    std::fs::create_dir_all(&dir).unwrap();
    let cut = dir.join("cut.fibering");
    std::fs::write(&cut, format!("{}{}", &text[..start], &text[end..])).unwrap();
    let r = coarsekit(&[
        "check-fibering",
        "@grid4.txt",
        "@line4.txt",
        &cut.display().to_string(),
    ]);
    assert_eq!(r.exit_code(), 1, "{}", r.render());
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn cone_chain_never_undercuts() {
    let r = coarsekit(&[
        "cone-dist",
        "@gaps.txt",
        "--rho",
        "exp",
        "--from",
        "0@0",
        "--to",
        "6@3",
        "--heights",
        "0,0.5,1,2,3",
    ]);
    assert_eq!(r.exit_code(), 0, "{}", r.render());
    let d: f64 = fact(&r, "distance").parse().unwrap();
    assert!(d >= 3.0);
}

#[test]
fn rho_tables_load_from_files() {
    let dir = scratch("rho");
    std::fs::create_dir_all(&dir).unwrap();
    let table = dir.join("rho.txt");
    std::fs::write(&table, "0 1\n2 3\n4 9\n").unwrap();
    let rho = format!("table:{}", table.display());
    let r = coarsekit(&["phi", "--rho", &rho, "--t", "1", "--r", "2"]);
    assert_eq!(r.exit_code(), 0, "{}", r.render());
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn binary_uses_exit_codes_and_streams() {
    let bin = env!("CARGO_BIN_EXE_coarsekit");
    let ok = std::process::Command::new(bin)
        .args([
            "components",
            &fixture("gaps.txt"),
            "--r",
            "2",
            "--format",
            "machine",
        ])
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stdout).ends_with("exit=0\n"));
    let bad = std::process::Command::new(bin)
        .args(["validate", &fixture("ragged.txt")])
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
    assert!(bad.stdout.is_empty());
    assert!(String::from_utf8_lossy(&bad.stderr).contains("line 6, column 6"));
    let fail = std::process::Command::new(bin)
        .args(["validate", &fixture("triangle.txt")])
        .output()
        .unwrap();
    assert_eq!(fail.status.code(), Some(1));
}
