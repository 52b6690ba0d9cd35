//! Build the sensing matrix for a point scheme and an averaging scheme and
//! compare their shapes, entry magnitudes and condition numbers.
//!
//! ```text
//! cargo run --example sensing_matrices
//! ```

use fieldsense::estimation::condition_number;
use fieldsense::sampling::{generate_paths, Scheme, SchemeConfig};
use fieldsense::seed::rng_from_seed;
use fieldsense::sensing::build_matrix;

fn main() -> fieldsense::Result<()> {
    let b = 2;
    let n = fieldsense::field::dof(b);
    for scheme in [Scheme::Scattered, Scheme::LineInnerAvg, Scheme::BeeHive] {
        let config = SchemeConfig::new(scheme, b, 3 * n, 0.05);
        let paths = generate_paths(&config, &mut rng_from_seed(5))?;
        let x = build_matrix(&paths, &config)?;
        let mags: Vec<f64> = x.entries().iter().map(|z| z.norm()).collect();
        let min = mags.iter().copied().fold(f64::INFINITY, f64::min);
        let max = mags.iter().copied().fold(0.0, f64::max);
        println!(
            "{:<16} {:?}: {} x {}, |entry| in [{min:.3}, {max:.3}], C2 = {:.3}",
            scheme.name(),
            x.kind(),
            x.rows(),
            x.cols(),
            condition_number(&x)?
        );
    }

    let config = SchemeConfig::new(Scheme::Scattered, 1, 12, 0.05);
    let paths = generate_paths(&config, &mut rng_from_seed(5))?;
    let x = build_matrix(&paths, &config)?;
    println!("\ncolumn order for b = 1: {:?}", x.column_index());
    Ok(())
}
