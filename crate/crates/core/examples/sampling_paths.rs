//! Generate a handful of paths for every sampling scheme and summarize
//! their lengths and endpoints.
//!
//! ```text
//! cargo run --example sampling_paths
//! ```

use fieldsense::sampling::{generate_paths, write_paths_csv, Scheme, SchemeConfig};
use fieldsense::seed::{derive_seed, rng_from_seed};

fn main() -> fieldsense::Result<()> {
    for scheme in Scheme::ALL {
        let config = SchemeConfig { p: 30, ..SchemeConfig::new(scheme, 3, 6, 0.05) };
        let mut rng = rng_from_seed(derive_seed(7, &[scheme.id()]));
        let paths = generate_paths(&config, &mut rng)?;
        let lengths: Vec<usize> = paths.iter().map(|p| p.len()).collect();
        let first = &paths[0];
        println!(
            "{:<22} samples per path {:?}  first path ({:.3}, {:.3}) -> ({:.3}, {:.3})",
            scheme.name(),
            lengths,
            first.first().x,
            first.first().y,
            first.last().x,
            first.last().y
        );
    }

    let config = SchemeConfig::new(Scheme::DirectedBoundary, 3, 2, 0.05);
    let paths = generate_paths(&config, &mut rng_from_seed(1))?;
    let mut out = Vec::new();
    write_paths_csv(&paths, &mut out)?;
    let text = String::from_utf8(out).unwrap();
    println!("\ndirected_boundary CSV (first lines):");
    for line in text.lines().take(6) {
        println!("  {line}");
    }
    Ok(())
}
