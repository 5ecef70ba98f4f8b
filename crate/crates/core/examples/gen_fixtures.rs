//! Regenerates the bundled b-file fixtures in `crates/core/data/`.
//!
//! The comment headers of the existing files are preserved; only the data
//! lines are recomputed. Run with `cargo run -p sqprod --example gen_fixtures`.

use std::fs;
use std::path::Path;

use sqprod::{arith, exact, multopt};

fn main() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    let config = exact::ExactConfig::default();

    let mut f_lines = String::new();
    let mut ms_lines = String::new();
    for n in 1..=40u32 {
        let (min_sum, _) = multopt::min_multiplicative_sum(n).unwrap();
        let f = multopt::compute_f(n).unwrap();
        f_lines.push_str(&format!("{n} {f}\n"));
        ms_lines.push_str(&format!("{n} {min_sum}\n"));
    }
    rewrite(&dir, "A373114", &f_lines);
    rewrite(&dir, "A360659", &ms_lines);

    let mut lines = String::new();
    for n in 1..=200u64 {
        lines.push_str(&format!("{n} {}\n", arith::count_squarefree_upto(n - 1)));
    }
    rewrite(&dir, "A013928", &lines);

    for (id, k, nmax) in [("A372306", 3u32, 30u32), ("A373119", 4, 28), ("A373178", 5, 26)] {
        let mut lines = String::new();
        for n in 1..=nmax {
            let f = exact::compute_fk(n, k, 2, &config).unwrap();
            lines.push_str(&format!("{n} {f}\n"));
        }
        rewrite(&dir, id, &lines);
    }
}

fn rewrite(dir: &Path, id: &str, body: &str) {
    let path = dir.join(format!("{id}.txt"));
    let header: String = fs::read_to_string(&path)
        .map(|old| {
            old.lines()
                .take_while(|l| l.starts_with('#'))
                .map(|l| format!("{l}\n"))
                .collect()
        })
        .unwrap_or_default();
    fs::write(&path, format!("{header}{body}")).unwrap();
    println!("wrote {}", path.display());
}
