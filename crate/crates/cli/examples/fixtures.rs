//! Regenerates the generated part of the CLI fixture corpus.
//!
//! Usage: `cargo run -p coarsekit-cli --example fixtures -- <dir>`

use std::path::{Path, PathBuf};

use coarsekit::cover::generators::{path_block_cover, path_layered_cover};
use coarsekit::cover::{AnControlCertificate, AnEntry, AsdimCertificate, AsdimEntry, MemberCover};
use coarsekit::decomposition::{search_family, SearchMode};
use coarsekit::format;
use coarsekit::generators::{grid_projection, path, ray_instance};
use coarsekit::maps::FamilyMap;
use coarsekit::metric::{GroupAction, MetricFamily};
use coarsekit::IntFamily;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn write(dir: &Path, name: &str, text: &str) {
    std::fs::write(dir.join(name), text).unwrap_or_else(|e| panic!("{name}: {e}"));
}

fn main() {
    let dir: PathBuf = std::env::args()
        .nth(1)
        .expect("usage: fixtures <dir>")
        .into();
    std::fs::create_dir_all(&dir).expect("create fixture directory");

    let paths: IntFamily =
        MetricFamily::new("paths", vec![path("p8", 8), path("p12", 12)]).expect("distinct ids");
    write(&dir, "paths.txt", &format::write_family(&paths));

    let mut entries = Vec::new();
    for s in [1, 2] {
        let covers: Vec<_> = paths
            .members()
            .iter()
            .map(|m| (m, path_layered_cover(m, 2, s)))
            .collect();
        let lambda = covers
            .iter()
            .map(|(m, c)| c.cover.lebesgue_number(m).finite().expect("bounded"))
            .min()
            .expect("members");
        let mesh = covers
            .iter()
            .map(|(m, c)| c.cover.mesh(m))
            .max()
            .expect("members");
        entries.push(AsdimEntry {
            lambda,
            mesh,
            covers: covers
                .iter()
                .map(|(m, c)| MemberCover::colored(m.id(), c))
                .collect(),
        });
    }
    let asdim = AsdimCertificate {
        family_id: "paths".into(),
        n: 1,
        entries,
    };
    write(
        &dir,
        "paths.asdim",
        &format::write_asdim_certificate(&asdim, &paths),
    );

    let mut overclaim = asdim.clone();
    overclaim.entries[0].lambda *= 4;
    write(
        &dir,
        "paths.overclaim.asdim",
        &format::write_asdim_certificate(&overclaim, &paths),
    );

    let an = AnControlCertificate {
        family_id: "paths".into(),
        n: 1,
        m: 1,
        b: 0,
        entries: [1usize, 2, 3]
            .iter()
            .map(|&r| AnEntry {
                r: r as i64,
                covers: paths
                    .members()
                    .iter()
                    .map(|m| MemberCover::colored(m.id(), &path_block_cover(m, r, 2)))
                    .collect(),
            })
            .collect(),
    };
    write(&dir, "paths.an", &format::write_an_certificate(&an, &paths));

    let p8 = &paths.members()[0];
    let reflection = GroupAction::generated_by(8, &[(0..8).rev().collect()]).expect("involution");
    write(
        &dir,
        "p8.reflection",
        &format::write_action(&reflection, p8),
    );

    match search_family(&paths, 1, 1, 2, SearchMode::Exact).expect("valid search") {
        coarsekit::decomposition::SearchOutcome::Found(cert) => write(
            &dir,
            "paths.decomposition",
            &format::write_decomposition(&cert, &paths).expect("resolvable"),
        ),
        _ => panic!("paths are (1,1)-decomposable with bound 2"),
    }

    let (grid, line, witness) = grid_projection(4);
    write(&dir, "grid4.txt", &format::write_family(&grid));
    write(&dir, "line4.txt", &format::write_family(&line));
    write(
        &dir,
        "grid4.fibering",
        &format::write_fibering(&witness, &grid, &line).expect("resolvable"),
    );

    let short: IntFamily = MetricFamily::new("short", vec![path("q", 5)]).expect("one member");
    let halves: IntFamily = MetricFamily::new("halves", vec![path("h", 3)]).expect("one member");
    let floor = FamilyMap::new("short", "halves").with_function("q", "h", vec![0, 0, 1, 1, 2]);
    let ceil = FamilyMap::new("short", "halves").with_function("q", "h", vec![0, 1, 1, 2, 2]);
    write(&dir, "short.txt", &format::write_family(&short));
    write(&dir, "halves.txt", &format::write_family(&halves));
    write(
        &dir,
        "floor.map",
        &format::write_map(&floor, &short, &halves),
    );
    write(&dir, "ceil.map", &format::write_map(&ceil, &short, &halves));

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (star, pieces, ys) = ray_instance(&mut rng, "s", 3, 13);
    let stars: IntFamily = MetricFamily::new("star", vec![star.clone()]).expect("one member");
    write(&dir, "star.txt", &format::write_family(&stars));
    write(&dir, "star.pieces", &format::write_subsets(&pieces, &star));
    write(&dir, "star.shells", &format::write_subsets(&ys, &star));
}
