//! Regenerates the files under `fixtures/`.
//!
//! cargo run -p homoglab --example write_fixtures -- fixtures

use std::path::PathBuf;

use homoglab::distmonoid::truncated_monoid;
use homoglab::{build_crosscut, remark_fixture, CrosscutSpec, Remark};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "fixtures".into()));
    std::fs::create_dir_all(&dir)?;
    let write = |name: &str, text: String| std::fs::write(dir.join(name), text + "\n");
    for (name, values) in [
        ("R0134.json", &[0.0, 1.0, 3.0, 4.0][..]),
        ("R012.json", &[0.0, 1.0, 2.0][..]),
    ] {
        write(
            name,
            serde_json::to_string(&truncated_monoid(values)?.to_file())?,
        )?;
    }
    write(
        "remark41.json",
        remark_fixture(Remark::R41, 6)?.structure.to_json(),
    )?;
    write(
        "remark46.json",
        remark_fixture(Remark::R46, 8)?.structure.to_json(),
    )?;
    write(
        "crosscut333.json",
        build_crosscut(CrosscutSpec {
            n_p: 3,
            n_q: 3,
            cell: 3,
        })
        .to_json(),
    )?;
    Ok(())
}
