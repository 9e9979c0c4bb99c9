use std::path::PathBuf;

use coarsekit_cli::{run, Report};

pub fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
        .display()
        .to_string()
}

/// Runs `coarsekit` with `args`; arguments starting with `@` name fixtures.
pub fn coarsekit(args: &[&str]) -> Report {
    let argv: Vec<String> = std::iter::once("coarsekit".to_string())
        .chain(args.iter().map(|a| match a.strip_prefix('@') {
            Some(name) => fixture(name),
            None => a.to_string(),
        }))
        .collect();
    run(&argv)
}

/// Every invocation exercised by the CLI tests.
pub const CORPUS: &[&[&str]] = &[
    &["validate", "@triangle.txt"],
    &["validate", "@paths.txt"],
    &["validate", "@thirds.txt"],
    &["validate", "@nearly.txt"],
    &["validate", "@nearly.txt", "--tolerance", "0"],
    &["validate", "@ragged.txt"],
    &["components", "@gaps.txt", "--r", "2"],
    &["components", "@halves-f64.txt", "--r", "1"],
    &["cover-check", "@paths.txt", "@paths.asdim"],
    &["cover-check", "@paths.txt", "@paths.overclaim.asdim"],
    &["an-check", "@paths.txt", "@paths.an"],
    &[
        "quotient-cover",
        "@paths.txt",
        "@p8.reflection",
        "@paths.asdim",
    ],
    &[
        "product",
        "@paths.txt",
        "--covers",
        "@paths.asdim",
        "--entry",
        "1",
        "--r",
        "1",
    ],
    &["product", "@gaps.txt", "--p", "inf"],
    &["product", "@halves-f64.txt", "--p", "2"],
    &[
        "decompose",
        "@paths.txt",
        "--r",
        "1",
        "--n",
        "1",
        "--bound",
        "2",
    ],
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
    &[
        "decompose",
        "@paths.txt",
        "--r",
        "1",
        "--n",
        "1",
        "--bound",
        "1",
        "--greedy",
    ],
    &["check-cert", "@paths.txt", "@paths.decomposition"],
    &[
        "check-fibering",
        "@grid4.txt",
        "@line4.txt",
        "@grid4.fibering",
    ],
    &[
        "map-analyze",
        "@short.txt",
        "@halves.txt",
        "@floor.map",
        "--compare",
        "@ceil.map",
    ],
    &["phi", "--rho", "exp", "--t", "0", "--r", "5.43656365691809"],
    &["phi", "--rho", "affine:1,0", "--t", "2", "--r", "3"],
    &["phi-suite", "--samples", "100", "--seed", "3"],
    &[
        "cone-dist",
        "@gaps.txt",
        "--rho",
        "affine:1,0",
        "--from",
        "0@1",
        "--to",
        "6@2",
        "--heights",
        "0,1,2,3,4",
    ],
    &["ultrametric", "@gaps.txt", "--r", "2"],
    &["ultrametric", "@paths.txt"],
    &["ray-tree", "@star.txt", "@star.pieces", "@star.shells"],
    &["ray-tree", "@star.txt", "@star.bad.pieces", "@star.shells"],
];
